use std::fmt;

use super::field::Field;
use crate::{Error, Result};

/// Dense univariate polynomial, coefficients from low to high degree with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn one(sample: &F) -> Self {
        Self::constant(sample.one_like())
    }

    /// The monomial `x`.
    pub fn x(sample: &F) -> Self {
        Self::new(vec![sample.zero_like(), sample.one_like()])
    }

    /// `c·x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Self::new(v)
    }

    /// `x − r`.
    pub fn linear_root(r: &F) -> Self {
        Self::new(vec![r.neg(), r.one_like()])
    }

    /// Builds from small integer coefficients, low degree first.
    pub fn from_i64s(sample: &F, cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| sample.from_i64_like(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(&short.coeffs) {
            *a = a.add(b);
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(Field::neg).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut v = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let Some(sample) = self.coeffs.first() else {
            return if e == 0 { panic!("0^0 for a polynomial without a field sample") } else { Self::zero() };
        };
        let mut acc = Self::one(sample);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let zero = r[0].zero_like();
        let mut q = vec![zero; r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = r[i].mul(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].sub(&c.mul(dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Exact quotient, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Scales to leading coefficient one; the zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&c.from_i64_like(i as i64)))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluation at an element of an extension, given the embedding of the
    /// coefficient field.
    pub fn eval_with<G: Field>(&self, x: &G, embed: impl Fn(&F) -> G) -> G {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Coefficient-wise image under a field map.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Divides out repeated factors via `f / gcd(f, f')`. In positive
    /// characteristic a polynomial with vanishing derivative is returned
    /// unchanged.
    pub fn squarefree_part(&self) -> Self {
        let d = self.derivative();
        if d.is_zero() {
            return self.monic();
        }
        let g = self.gcd(&d);
        self.div_exact(&g).expect("gcd is nonzero").expect("gcd divides").monic()
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Fp, Rat};

    fn q(cs: &[i64]) -> Poly<Rat> {
        Poly::from_i64s(&Rat::zero(), cs)
    }

    #[test]
    fn division_identity() {
        let a = q(&[1, -3, 0, 2, 5]);
        let d = q(&[2, 0, 3]);
        let (qq, r) = a.div_rem(&d).unwrap();
        assert_eq!(qq.mul(&d).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = q(&[-1, 1]).mul(&q(&[2, 1]));
        let g = q(&[-1, 1]).mul(&q(&[5, 0, 1]));
        assert_eq!(f.gcd(&g), q(&[-1, 1]));
    }

    #[test]
    fn squarefree() {
        let f = q(&[-1, 1]).pow(3).mul(&q(&[2, 1]));
        assert_eq!(f.squarefree_part(), q(&[-1, 1]).mul(&q(&[2, 1])));
    }

    #[test]
    fn compose_and_eval_agree() {
        let f = q(&[1, 2, 3]);
        let g = q(&[0, 1, 1]);
        let x = Rat::new(3, 7);
        assert_eq!(f.compose(&g).eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let s = Fp::new(0, 5);
        let f = Poly::monomial(s.one_like(), 5);
        assert!(f.derivative().is_zero());
    }
}
