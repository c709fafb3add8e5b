//! The Cayley family of (★) tuples and its character variety.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{conductor, subfield_degree, two_cos, two_sin, CycNum, Field, Rat};
use crate::monodromy::{is_conjugate, make_tuple, star_check, trace_coordinates, Matrix, MonodromyTuple, TraceCoordinates};
use crate::{Error, Result};

/// Rational parameters `(α, β)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CayleyParams {
    pub alpha: Rat,
    pub beta: Rat,
}

impl CayleyParams {
    pub fn new(alpha: Rat, beta: Rat) -> Self {
        CayleyParams { alpha, beta }
    }

    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Ok(CayleyParams { alpha: Rat::from_str(alpha)?, beta: Rat::from_str(beta)? })
    }

    /// Largest of the two denominators.
    pub fn max_denominator(&self) -> BigInt {
        self.alpha.denom().max(self.beta.denom()).clone()
    }

    /// True when `α + β ≡ 1 (mod 2)`, where `x₁` vanishes.
    pub fn is_forbidden(&self) -> bool {
        let s = self.alpha.add(&self.beta);
        s.is_integer() && s.numer().is_odd()
    }
}

impl fmt::Display for CayleyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// `2cos(π·r)` for rational `r`.
pub fn two_cos_pi(r: &Rat) -> CycNum {
    two_cos(small(r.numer()), small(r.denom()) as u64)
}

/// `2sin(π·r)` for rational `r`.
pub fn two_sin_pi(r: &Rat) -> CycNum {
    two_sin(small(r.numer()), small(r.denom()) as u64)
}

fn small(n: &BigInt) -> i64 {
    n.to_i64().expect("parameter fits in 64 bits")
}

fn half(r: &Rat) -> Rat {
    r.mul(&Rat::new(1, 2))
}

/// The values `(x₁, x₂, x₃) = (2cos(π(α+β)/2), 2sin(πα/2), 2sin(πβ/2))`.
pub fn cayley_x(p: &CayleyParams) -> [CycNum; 3] {
    [
        two_cos_pi(&half(&p.alpha.add(&p.beta))),
        two_sin_pi(&half(&p.alpha)),
        two_sin_pi(&half(&p.beta)),
    ]
}

/// The Cayley tuple
/// `M_0 = [[1 + x₂x₃/x₁, −x₂²/x₁], [x₃²/x₁, 1 − x₂x₃/x₁]]`,
/// `M_1 = [[1, −x₁], [0, 1]]`, `M_λ = [[1, 0], [x₁, 1]]`.
pub fn cayley_solution(p: &CayleyParams) -> Result<MonodromyTuple> {
    let [x1, x2, x3] = cayley_x(p);
    if x1.is_zero() {
        return Err(Error::Parameter(format!("x1 vanishes at {p}")));
    }
    let xs = CycNum::unify_all(&[x1, x2, x3]);
    let (x1, x2, x3) = (&xs[0], &xs[1], &xs[2]);
    let order = x1.order();
    let one = CycNum::one(order);
    let zero = CycNum::zero(order);
    let inv1 = x1.inv()?;
    let x23 = x2.mul(x3).mul(&inv1);
    let m0 = Matrix::from_rows(vec![
        vec![one.add(&x23), x2.square().mul(&inv1).neg()],
        vec![x3.square().mul(&inv1), one.sub(&x23)],
    ])?;
    let m1 = Matrix::from_rows(vec![vec![one.clone(), x1.neg()], vec![zero.clone(), one.clone()]])?;
    let ml = Matrix::from_rows(vec![vec![one.clone(), zero], vec![x1.clone(), one]])?;
    make_tuple(m0, m1, ml)
}

/// Closed form of the pair traces of the Cayley tuple:
/// `x = 2cos(πβ)`, `y = −2cos(π(α+β))`, `z = 2cos(πα)`.
pub fn cayley_xyz(p: &CayleyParams) -> [CycNum; 3] {
    [two_cos_pi(&p.beta), two_cos_pi(&p.alpha.add(&p.beta)).neg(), two_cos_pi(&p.alpha)]
}

/// Terms `(coefficient, [i, j, k])` of the cubic `R(x, y, z)` cut out by the
/// pair traces of (★) tuples, in decreasing lexicographic exponent order with
/// coprime integer coefficients and positive leading coefficient.
pub const CAYLEY_CUBIC: [(i64, [u32; 3]); 5] =
    [(1, [2, 0, 0]), (1, [1, 1, 1]), (1, [0, 2, 0]), (1, [0, 0, 2]), (-4, [0, 0, 0])];

/// Canonical text form of a cubic given as terms; used to compare
/// independently derived relations byte for byte.
pub fn canonical_cubic(terms: &[(i64, [u32; 3])]) -> String {
    let mut t: Vec<(i64, [u32; 3])> = terms.iter().copied().filter(|(c, _)| *c != 0).collect();
    t.sort_by(|a, b| b.1.cmp(&a.1));
    serde_json::to_string(&t).expect("plain data")
}

/// Evaluates `R(x, y, z)`; the boundary traces must be `(2, 2, 2, −2)`.
pub fn cubic_residual(tc: &TraceCoordinates) -> Result<CycNum> {
    let two = CycNum::from_int(2);
    let expected = [&two, &two, &two, &two.neg()];
    if tc.boundary().iter().zip(expected).any(|(a, e)| *a != e) {
        return Err(Error::Precondition("boundary traces must be (2, 2, 2, -2)".into()));
    }
    Ok(eval_cubic(&CAYLEY_CUBIC, [&tc.x, &tc.y, &tc.z]))
}

pub fn eval_cubic<F: Field>(terms: &[(i64, [u32; 3])], v: [&F; 3]) -> F {
    let mut acc = v[0].zero_like();
    for (c, e) in terms {
        let mut t = v[0].from_i64_like(*c);
        for (x, k) in v.iter().zip(e) {
            t = t.mul(&x.pow(*k as u64));
        }
        acc = acc.add(&t);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceField {
    pub degree: u64,
    pub conductor: u64,
}

/// Degree and conductor of the field generated by the seven trace
/// coordinates and `tr(M_0M_1M_λ)`.
pub fn trace_field(t: &MonodromyTuple) -> Result<TraceField> {
    let tc = trace_coordinates(t)?;
    let mut traces: Vec<CycNum> = tc.as_array().iter().map(|c| (*c).clone()).collect();
    traces.push(t.m_inf().inv()?.trace()?);
    let traces: Vec<CycNum> = traces.iter().map(CycNum::descend).collect();
    Ok(TraceField { degree: subfield_degree(&traces), conductor: conductor(&traces) })
}

/// Rationals `k/n` in `[0, 2)` with `n = den`, in increasing order.
fn level(den: u64) -> Vec<Rat> {
    (0..2 * den)
        .filter(|k| num_integer::gcd(*k, den) == 1)
        .map(|k| Rat::new(k as i64, den as i64))
        .collect()
}

/// Parameters with denominators at most `bound` in the search order: by
/// largest denominator, then `α`, then `β`; forbidden points skipped.
pub fn parameter_grid(bound: u64) -> Vec<CayleyParams> {
    let all: Vec<(u64, Rat)> = (1..=bound).flat_map(|d| level(d).into_iter().map(move |r| (d, r))).collect();
    let mut out = Vec::new();
    for top in 1..=bound {
        let mut layer: Vec<CayleyParams> = Vec::new();
        for (da, a) in &all {
            for (db, b) in &all {
                if (*da).max(*db) == top {
                    let p = CayleyParams::new(a.clone(), b.clone());
                    if !p.is_forbidden() {
                        layer.push(p);
                    }
                }
            }
        }
        layer.sort_by(|p, q| (&p.alpha, &p.beta).cmp(&(&q.alpha, &q.beta)));
        out.extend(layer);
    }
    out
}

/// First Cayley parameter (in [`parameter_grid`] order) whose tuple is
/// conjugate to `t`.
pub fn match_cayley(t: &MonodromyTuple, denominator_bound: u64) -> Result<Option<CayleyParams>> {
    if !star_check(t) {
        return Err(Error::Precondition("match_cayley needs a (★) tuple".into()));
    }
    if !crate::monodromy::is_irreducible(t) {
        return Err(Error::Precondition("match_cayley needs an irreducible tuple".into()));
    }
    let tc = trace_coordinates(t)?;
    let target = [tc.x.descend(), tc.y.descend(), tc.z.descend()];
    // z = 2cos(πα) and x = 2cos(πβ) pin each parameter separately
    let values: Vec<(Rat, CycNum)> = (1..=denominator_bound)
        .flat_map(level)
        .map(|r| {
            let v = two_cos_pi(&r);
            (r, v)
        })
        .collect();
    let alphas: Vec<&Rat> = values.par_iter().filter(|(_, v)| *v == target[2]).map(|(r, _)| r).collect();
    let betas: Vec<&Rat> = values.par_iter().filter(|(_, v)| *v == target[0]).map(|(r, _)| r).collect();
    let mut candidates: Vec<CayleyParams> = Vec::new();
    for a in &alphas {
        for b in &betas {
            let p = CayleyParams::new((*a).clone(), (*b).clone());
            if !p.is_forbidden() && two_cos_pi(&p.alpha.add(&p.beta)).neg() == target[1] {
                candidates.push(p);
            }
        }
    }
    candidates.sort_by(|p, q| (p.max_denominator(), &p.alpha, &p.beta).cmp(&(q.max_denominator(), &q.alpha, &q.beta)));
    for p in candidates {
        let c = cayley_solution(&p)?;
        if star_check(&c) && is_conjugate(&c, t)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// True when `M_0·M_1·M_λ = ±I`, the degenerate Cayley points.
pub fn is_scalar_product(t: &MonodromyTuple) -> bool {
    let m = t.m_inf();
    m.is_identity() || m.neg().is_identity()
}

/// `r` reduced into `[0, 2)`.
pub fn reduce_mod_two(r: &Rat) -> Rat {
    let two = Rat::from_int(2);
    let q = r.as_big() / two.as_big();
    let k = q.floor();
    Rat::from_big(r.as_big() - k * two.as_big())
}

impl FromStr for CayleyParams {
    type Err = Error;

    /// Parses `"α,β"`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected `alpha,beta`, got `{s}`")))?;
        Self::parse(a, b)
    }
}
