use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::curve::LegendreCurve;
use crate::exactalg::arith::is_prime;
use crate::exactalg::{Field, Poly};
use crate::{Error, Result};

/// `ψ_m = poly` for odd `m`, `ψ_m = y·poly` for even `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionPoly<F: Field> {
    pub m: u32,
    pub poly: Poly<F>,
}

impl<F: Field> DivisionPoly<F> {
    pub fn has_y_factor(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// `ψ_m²` as a polynomial in `x`, with `y²` replaced by the cubic.
    pub fn squared(&self, e: &LegendreCurve<F>) -> Poly<F> {
        let sq = self.poly.mul(&self.poly);
        if self.has_y_factor() {
            sq.mul(&e.cubic())
        } else {
            sq
        }
    }
}

/// The reduced polynomials `f_0, …, f_n` with `f_2 = 2` (so `ψ_2 = 2y`).
fn reduced_division_polys<F: Field>(e: &LegendreCurve<F>, n: usize) -> Vec<Poly<F>> {
    let s = e.lambda();
    let (a2, a4) = (e.a2(), e.a4());
    let c = |k: i64| s.from_i64_like(k);
    let b2 = c(4).mul(&a2);
    let b4 = c(2).mul(&a4);
    let b8 = a4.square().neg();
    let f3 = Poly::new(vec![b8.clone(), s.zero_like(), c(3).mul(&b4), b2.clone(), c(3)]);
    let f4 = Poly::new(vec![
        b4.mul(&b8),
        b2.mul(&b8),
        c(10).mul(&b8),
        s.zero_like(),
        c(5).mul(&b4),
        b2,
        c(2),
    ])
    .scale(&c(2));
    let mut f = vec![Poly::zero(), Poly::one(s), Poly::constant(c(2)), f3, f4];
    let cubic_sq = e.cubic().pow(2);
    let half = c(2).inv().expect("odd characteristic");
    for i in 5..=n.max(4) {
        let k = i / 2;
        let next = if i % 2 == 1 {
            let (lhs, rhs) = (f[k + 2].mul(&f[k].pow(3)), f[k - 1].mul(&f[k + 1].pow(3)));
            if k % 2 == 0 {
                cubic_sq.mul(&lhs).sub(&rhs)
            } else {
                lhs.sub(&cubic_sq.mul(&rhs))
            }
        } else {
            let inner = f[k + 2].mul(&f[k - 1].pow(2)).sub(&f[k - 2].mul(&f[k + 1].pow(2)));
            f[k].mul(&inner).scale(&half)
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

pub fn division_poly<F: Field>(e: &LegendreCurve<F>, m: u32) -> Result<DivisionPoly<F>> {
    if m == 0 {
        return Err(Error::Parameter("division polynomial index must be at least 1".into()));
    }
    let poly = reduced_division_polys(e, m as usize).pop().expect("nonempty");
    Ok(DivisionPoly { m, poly })
}

/// Squarefree monic polynomial whose roots are the x-coordinates of the
/// nonzero points killed by `[m]`.
pub fn torsion_x_poly<F: Field>(e: &LegendreCurve<F>, m: u32) -> Result<Poly<F>> {
    if m < 2 {
        return Err(Error::Parameter("torsion order must be at least 2".into()));
    }
    let f = division_poly(e, m)?.poly;
    let full = if m.is_multiple_of(2) { f.mul(&e.cubic()) } else { f };
    Ok(full.squarefree_part())
}

/// A point of `ℙ¹`.
#[derive(Clone, Debug, PartialEq)]
pub enum P1<F: Field> {
    Finite(F),
    Infinity,
}

impl<F: Field> fmt::Display for P1<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(x) => write!(f, "{x}"),
            P1::Infinity => write!(f, "∞"),
        }
    }
}

/// `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RationalMap<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        let lead = den.leading().ok_or(Error::DivisionByZero)?.clone();
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) || num.is_zero() {
            (num, den)
        } else {
            (num.div_exact(&g)?.expect("gcd divides"), den.div_exact(&g)?.expect("gcd divides"))
        };
        if num.is_zero() {
            den = Poly::one(&lead);
        }
        let lead = den.leading().expect("nonzero").inv()?;
        num = num.scale(&lead);
        den = den.scale(&lead);
        Ok(RationalMap { num, den })
    }

    pub fn identity(sample: &F) -> Self {
        RationalMap { num: Poly::x(sample), den: Poly::one(sample) }
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<F> {
        &self.den
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// False when `num'·den − num·den'` vanishes identically, i.e. the map
    /// factors through a Frobenius.
    pub fn is_separable(&self) -> bool {
        let w = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        !w.is_zero()
    }

    pub fn eval(&self, p: &P1<F>) -> P1<F> {
        match p {
            P1::Finite(x) => {
                let d = self.den.eval(x);
                if d.is_zero() {
                    P1::Infinity
                } else {
                    P1::Finite(self.num.eval(x).div(&d).expect("nonzero"))
                }
            }
            P1::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree().unwrap_or(0));
                match dn {
                    None => P1::Finite(self.den.leading().expect("nonzero").zero_like()),
                    Some(dn) if dn > dd => P1::Infinity,
                    Some(dn) if dn < dd => P1::Finite(self.num.leading().expect("nonzero").zero_like()),
                    Some(_) => P1::Finite(
                        self.num.leading().expect("nonzero").div(self.den.leading().expect("nonzero")).expect("nonzero"),
                    ),
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let d = self.degree();
        let homog = |p: &Poly<F>| {
            let mut acc = Poly::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                let term = inner.num.pow(i as u32).mul(&inner.den.pow((d - i) as u32)).scale(c);
                acc = acc.add(&term);
            }
            acc
        };
        Self::new(homog(&self.num), homog(&self.den))
    }
}

impl<F: Field> fmt::Display for RationalMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl<F: Field> Serialize for RationalMap<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |p: &Poly<F>| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RationalMap", 4)?;
        st.serialize_field("numerator", &strs(&self.num))?;
        st.serialize_field("denominator", &strs(&self.den))?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("separable", &self.is_separable())?;
        st.end()
    }
}

/// `x ∘ [m]` as a reduced rational map in `x`.
pub fn mult_x_map<F: Field>(e: &LegendreCurve<F>, m: u32) -> Result<RationalMap<F>> {
    if m == 0 {
        return Err(Error::Parameter("multiplier must be at least 1".into()));
    }
    let f = reduced_division_polys(e, m as usize + 1);
    let x = Poly::x(e.lambda());
    let c = e.cubic();
    let (fm, fprev, fnext) = (&f[m as usize], &f[m as usize - 1], &f[m as usize + 1]);
    let sq = fm.mul(fm);
    let cross = fprev.mul(fnext);
    if m % 2 == 1 {
        RationalMap::new(x.mul(&sq).sub(&c.mul(&cross)), sq)
    } else {
        let den = c.mul(&sq);
        RationalMap::new(x.mul(&den).sub(&cross), den)
    }
}

/// The map `g` with `g ∘ f = f ∘ [p]` for the double cover `f = x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowMap<F: Field> {
    pub p: u32,
    pub map: RationalMap<F>,
    /// Set when the base field has characteristic `p`, where `[p]` is
    /// inseparable.
    pub characteristic_is_p: bool,
}

impl<F: Field> FlowMap<F> {
    pub fn degree(&self) -> usize {
        self.map.degree()
    }

    pub fn is_separable(&self) -> bool {
        self.map.is_separable()
    }

    /// Whether `0, 1, λ, ∞` are fixed.
    pub fn fixes_branch_points(&self, e: &LegendreCurve<F>) -> bool {
        e.branch_points().iter().all(|b| self.map.eval(&P1::Finite(b.clone())) == P1::Finite(b.clone()))
            && self.map.eval(&P1::Infinity) == P1::Infinity
    }
}

pub fn psi_p_map<F: Field>(e: &LegendreCurve<F>, p: u32) -> Result<FlowMap<F>> {
    if p.is_multiple_of(2) || !is_prime(p as u64) {
        return Err(Error::Parameter(format!("p = {p} is not an odd prime")));
    }
    Ok(FlowMap {
        p,
        map: mult_x_map(e, p)?,
        characteristic_is_p: e.lambda().characteristic() == p as u64,
    })
}
