use std::fmt;

use crate::{Error, Result};

/// A commutative field whose elements carry their own context (cyclotomic
/// order, prime modulus, ...). Constants are therefore created relative to an
/// existing element with [`Field::zero_like`] / [`Field::one_like`].
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    /// Representation size used for pivot selection.
    fn weight(&self) -> usize {
        1
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }
}

/// Finite fields support random sampling and square roots.
pub trait FiniteField: Field {
    /// Number of elements.
    fn order(&self) -> u128;
    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self;
    fn sqrt(&self) -> Option<Self>;

    fn is_square(&self) -> bool {
        self.is_zero() || self.pow(((self.order() - 1) / 2) as u64).is_one()
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Element of the prime field 𝔽_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// `modulus` must be an odd prime; this is checked by [`Fp::checked_new`].
    pub fn new(value: i64, modulus: u64) -> Self {
        let v = value.rem_euclid(modulus as i64) as u64;
        Fp { value: v, modulus }
    }

    pub fn checked_new(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 3 || !super::arith::is_prime(modulus) {
            return Err(Error::Parameter(format!("{modulus} is not an odd prime")));
        }
        Ok(Self::new(value, modulus))
    }

    /// Reduction of a rational whose denominator is prime to `modulus`.
    pub fn from_rat(r: &super::Rat, modulus: u64) -> Result<Self> {
        let m = num_bigint::BigInt::from(modulus);
        let red = |n: &num_bigint::BigInt| -> i64 {
            let v: num_bigint::BigInt = ((n % &m) + &m) % &m;
            i64::try_from(v).expect("reduced below the modulus")
        };
        let den = Self::checked_new(red(r.denom()), modulus)?;
        if den.value == 0 {
            return Err(Error::Parameter(format!("{r} has no reduction modulo {modulus}")));
        }
        Ok(Self::new(red(r.numer()), modulus).mul(&den.inv()?))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Legendre symbol as -1, 0 or 1.
    pub fn legendre(&self) -> i32 {
        if self.value == 0 {
            return 0;
        }
        if pow_mod(self.value, (self.modulus - 1) / 2, self.modulus) == 1 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { value: 0, modulus: self.modulus }
    }
    fn one_like(&self) -> Self {
        Fp { value: 1, modulus: self.modulus }
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Fp::new(n, self.modulus)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u128 + rhs.value as u128;
        Fp { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Fp { value: v, modulus: self.modulus }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
    fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fp { value: pow_mod(self.value, self.modulus - 2, self.modulus), modulus: self.modulus })
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
}

impl FiniteField for Fp {
    fn order(&self) -> u128 {
        self.modulus as u128
    }

    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self {
        Fp { value: rng.gen_range(0..self.modulus), modulus: self.modulus }
    }

    /// Tonelli–Shanks.
    fn sqrt(&self) -> Option<Self> {
        let p = self.modulus;
        if self.value == 0 {
            return Some(*self);
        }
        if self.legendre() != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(Fp { value: pow_mod(self.value, (p + 1) / 4, p), modulus: p });
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(self.value, q, p);
        let mut r = pow_mod(self.value, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        Some(Fp { value: r, modulus: p })
    }
}

/// Element `re + im·√n` of 𝔽_{p²} = 𝔽_p[t]/(t² − n), with `n` the smallest
/// quadratic non-residue modulo `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp2 {
    re: u64,
    im: u64,
    modulus: u64,
    nonresidue: u64,
}

/// Smallest quadratic non-residue modulo the odd prime `p`.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&n| pow_mod(n, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

impl Fp2 {
    pub fn new(re: Fp, im: Fp) -> Self {
        assert_eq!(re.modulus, im.modulus);
        Fp2 { re: re.value, im: im.value, modulus: re.modulus, nonresidue: smallest_nonresidue(re.modulus) }
    }

    /// Embeds a prime-field element.
    pub fn from_base(a: Fp) -> Self {
        Fp2 { re: a.value, im: 0, modulus: a.modulus, nonresidue: smallest_nonresidue(a.modulus) }
    }

    pub fn re(&self) -> Fp {
        Fp { value: self.re, modulus: self.modulus }
    }

    pub fn im(&self) -> Fp {
        Fp { value: self.im, modulus: self.modulus }
    }

    pub fn is_base(&self) -> bool {
        self.im == 0
    }

    fn with(&self, re: Fp, im: Fp) -> Self {
        Fp2 { re: re.value, im: im.value, modulus: self.modulus, nonresidue: self.nonresidue }
    }

    fn nr(&self) -> Fp {
        Fp { value: self.nonresidue, modulus: self.modulus }
    }

    /// Norm down to 𝔽_p.
    pub fn norm(&self) -> Fp {
        self.re().square().sub(&self.nr().mul(&self.im().square()))
    }

    /// The Frobenius `a ↦ a^p`.
    pub fn frobenius(&self) -> Self {
        self.with(self.re(), self.im().neg())
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}*t", self.re, self.im)
        }
    }
}

impl Field for Fp2 {
    fn zero_like(&self) -> Self {
        Fp2 { re: 0, im: 0, ..*self }
    }
    fn one_like(&self) -> Self {
        Fp2 { re: 1, im: 0, ..*self }
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.with(Fp::new(n, self.modulus), self.im().zero_like())
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self.with(self.re().add(&rhs.re()), self.im().add(&rhs.im()))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.with(self.re().sub(&rhs.re()), self.im().sub(&rhs.im()))
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b, c, d) = (self.re(), self.im(), rhs.re(), rhs.im());
        let re = a.mul(&c).add(&self.nr().mul(&b.mul(&d)));
        let im = a.mul(&d).add(&b.mul(&c));
        self.with(re, im)
    }
    fn neg(&self) -> Self {
        self.with(self.re().neg(), self.im().neg())
    }
    fn inv(&self) -> Result<Self> {
        let n = self.norm().inv()?;
        Ok(self.with(self.re().mul(&n), self.im().neg().mul(&n)))
    }
    fn characteristic(&self) -> u64 {
        self.modulus
    }
}

impl FiniteField for Fp2 {
    fn order(&self) -> u128 {
        self.modulus as u128 * self.modulus as u128
    }

    fn random_like<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let p = self.modulus;
        Fp2 { re: rng.gen_range(0..p), im: rng.gen_range(0..p), ..*self }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        if self.im == 0 {
            let a = self.re();
            if let Some(r) = a.sqrt() {
                return Some(self.with(r, a.zero_like()));
            }
            // a/n is a square when a is not, and (s·t)² = s²·n.
            let s = a.div(&self.nr()).ok()?.sqrt()?;
            return Some(self.with(a.zero_like(), s));
        }
        let s = self.norm().sqrt()?;
        let two_inv = Fp::new(2, self.modulus).inv().ok()?;
        for cand in [self.re().add(&s), self.re().sub(&s)] {
            let half = cand.mul(&two_inv);
            if let Some(x) = half.sqrt() {
                if x.is_zero() {
                    continue;
                }
                let y = self.im().mul(&two_inv).div(&x).ok()?;
                let r = self.with(x, y);
                if r.square() == *self {
                    return Some(r);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn fp_sqrt_all_residues() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 101] {
            for v in 0..p as i64 {
                let a = Fp::new(v, p);
                match a.sqrt() {
                    Some(r) => assert_eq!(r.square(), a),
                    None => assert_eq!(a.legendre(), -1),
                }
            }
        }
    }

    #[test]
    fn fp2_every_element_of_base_is_square() {
        for p in [3u64, 5, 13, 17] {
            for v in 0..p as i64 {
                let a = Fp2::from_base(Fp::new(v, p));
                let r = a.sqrt().expect("base elements are squares in the quadratic extension");
                assert_eq!(r.square(), a);
            }
        }
    }

    #[test]
    fn fp2_field_laws_and_sqrt() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let z = Fp2::from_base(Fp::new(0, 13));
        let mut squares = 0;
        for _ in 0..200 {
            let a = z.random_like(&mut rng);
            let b = z.random_like(&mut rng);
            assert_eq!(a.mul(&b), b.mul(&a));
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
            assert_eq!(a.pow(169), a);
            if let Some(r) = a.sqrt() {
                squares += 1;
                assert_eq!(r.square(), a);
                assert!(a.is_square());
            } else {
                assert!(!a.is_square());
            }
        }
        assert!(squares > 50);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Fp::new(0, 7).inv(), Err(Error::DivisionByZero));
    }
}
