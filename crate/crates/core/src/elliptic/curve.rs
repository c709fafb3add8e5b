use std::fmt;

use crate::exactalg::{Field, FiniteField, Poly};
use crate::{Error, Result};

/// `y² = x(x − 1)(x − λ)` over a field `F`, identity at the point over `∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreCurve<F: Field> {
    lambda: F,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ECPoint<F: Field> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F: Field> ECPoint<F> {
    pub fn x(&self) -> Option<&F> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }
}

impl<F: Field> fmt::Display for ECPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "∞"),
            ECPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: Field> LegendreCurve<F> {
    pub fn new(lambda: F) -> Result<Self> {
        if lambda.is_zero() || lambda.is_one() {
            return Err(Error::Parameter(format!("λ = {lambda} makes the curve singular")));
        }
        if lambda.characteristic() == 2 {
            return Err(Error::Parameter("characteristic 2 is not supported".into()));
        }
        Ok(LegendreCurve { lambda })
    }

    pub fn lambda(&self) -> &F {
        &self.lambda
    }

    /// `a₂ = −(1 + λ)` in `y² = x³ + a₂x² + a₄x`.
    pub fn a2(&self) -> F {
        self.lambda.add(&self.lambda.one_like()).neg()
    }

    /// `a₄ = λ`.
    pub fn a4(&self) -> F {
        self.lambda.clone()
    }

    /// `x(x − 1)(x − λ)`.
    pub fn cubic(&self) -> Poly<F> {
        let l = &self.lambda;
        Poly::new(vec![l.zero_like(), self.a4(), self.a2(), l.one_like()])
    }

    pub fn rhs(&self, x: &F) -> F {
        self.cubic().eval(x)
    }

    /// The x-coordinates of the nontrivial 2-torsion points.
    pub fn branch_points(&self) -> [F; 3] {
        [self.lambda.zero_like(), self.lambda.one_like(), self.lambda.clone()]
    }

    pub fn is_on_curve(&self, p: &ECPoint<F>) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    pub fn point(&self, x: F, y: F) -> Result<ECPoint<F>> {
        let p = ECPoint::Affine { x, y };
        if self.is_on_curve(&p) {
            Ok(p)
        } else {
            Err(Error::OffCurve)
        }
    }

    pub fn negate(&self, p: &ECPoint<F>) -> ECPoint<F> {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine { x: x.clone(), y: y.neg() },
        }
    }

    pub fn add(&self, p: &ECPoint<F>, q: &ECPoint<F>) -> Result<ECPoint<F>> {
        if !self.is_on_curve(p) || !self.is_on_curve(q) {
            return Err(Error::OffCurve);
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &ECPoint<F>, q: &ECPoint<F>) -> ECPoint<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return ECPoint::Infinity;
            }
            // (3x² + 2a₂x + a₄) / 2y
            let three = x1.from_i64_like(3);
            let two = x1.from_i64_like(2);
            let num = three.mul(&x1.square()).add(&two.mul(&self.a2()).mul(x1)).add(&self.a4());
            num.div(&two.mul(y1)).expect("y ≠ 0 here")
        } else {
            y2.sub(y1).div(&x2.sub(x1)).expect("x₁ ≠ x₂")
        };
        let x3 = slope.square().sub(&self.a2()).sub(x1).sub(x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(y1);
        ECPoint::Affine { x: x3, y: y3 }
    }

    /// Double-and-add; negative `n` multiplies the negated point.
    pub fn scalar_mul(&self, n: i128, p: &ECPoint<F>) -> Result<ECPoint<F>> {
        if !self.is_on_curve(p) {
            return Err(Error::OffCurve);
        }
        let mut base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Coefficient-wise image of the curve under a field embedding.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Result<LegendreCurve<G>> {
        LegendreCurve::new(f(&self.lambda))
    }
}

impl<F: FiniteField> LegendreCurve<F> {
    /// A point with the given x-coordinate, if `x(x − 1)(x − λ)` is a square.
    pub fn lift_x(&self, x: &F) -> Option<ECPoint<F>> {
        self.rhs(x).sqrt().map(|y| ECPoint::Affine { x: x.clone(), y })
    }

    /// Uniform random affine point (rejection on `x`, random sign of `y`).
    pub fn random_point<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ECPoint<F> {
        loop {
            let x = self.lambda.random_like(rng);
            if let Some(y) = self.rhs(&x).sqrt() {
                let y = if rng.gen::<bool>() { y.neg() } else { y };
                return ECPoint::Affine { x, y };
            }
        }
    }
}
