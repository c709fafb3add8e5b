use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::curve::{ECPoint, LegendreCurve};
use super::division::{psi_p_map, torsion_x_poly, FlowMap, P1};
use crate::exactalg::arith::factorize;
use crate::exactalg::{Field, FiniteField, Fp, Fp2, Poly};
use crate::Result;

/// `base^e mod modulus`.
fn poly_pow_mod<F: Field>(base: &Poly<F>, mut e: u128, modulus: &Poly<F>) -> Result<Poly<F>> {
    let sample = modulus.leading().expect("nonzero modulus");
    let mut acc = Poly::one(sample).rem(modulus)?;
    let mut b = base.rem(modulus)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(modulus)?;
        }
        b = b.mul(&b).rem(modulus)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Distinct roots in `F` of a nonzero polynomial, sorted by display string.
pub fn roots<F: FiniteField>(f: &Poly<F>, seed: u64) -> Result<Vec<F>> {
    let Some(sample) = f.leading().cloned() else {
        return Ok(Vec::new());
    };
    let x = Poly::x(&sample);
    let q = sample.order();
    let split = poly_pow_mod(&x, q, &f.monic())?.sub(&x).gcd(f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![split];
    let mut out = Vec::new();
    while let Some(g) = pending.pop() {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => out.push(g.coeffs()[0].neg()),
            Some(_) => loop {
                let shift = Poly::linear_root(&sample.random_like(&mut rng));
                let h = poly_pow_mod(&shift, (q - 1) / 2, &g)?.sub(&Poly::one(&sample)).gcd(&g);
                let d = h.degree().unwrap_or(0);
                if d > 0 && Some(d) < g.degree() {
                    pending.push(g.div_exact(&h)?.expect("factor"));
                    pending.push(h);
                    break;
                }
            },
        }
    }
    out.sort_by_key(|r| r.to_string());
    Ok(out)
}

/// Order of `P` given a multiple `n` of it.
pub fn point_order<F: Field>(e: &LegendreCurve<F>, p: &ECPoint<F>, n: u128) -> Result<u128> {
    let mut order = n;
    for (prime, _) in factorize(n as u64) {
        let prime = prime as u128;
        while order.is_multiple_of(prime) && e.scalar_mul((order / prime) as i128, p)?.is_infinity() {
            order /= prime;
        }
    }
    Ok(order)
}

/// `#E(𝔽_p)` and `#E(𝔽_{p²})` by counting Legendre symbols.
pub fn group_orders(e: &LegendreCurve<Fp>) -> (u128, u128) {
    let p = e.lambda().modulus();
    let s: i128 = (0..p).map(|x| e.rhs(&Fp::new(x as i64, p)).legendre() as i128).sum();
    let trace = -s;
    let n1 = p as i128 + 1 - trace;
    let n2 = (p as i128).pow(2) + 1 - (trace * trace - 2 * p as i128);
    (n1 as u128, n2 as u128)
}

/// Exact order of a point over `𝔽_{p²}` lying above `x₀`, if it is at most
/// `m_bound`.
pub fn is_torsion_x(e: &LegendreCurve<Fp>, x0: &Fp, m_bound: u64) -> Result<Option<u64>> {
    let e2 = e.map(|a| Fp2::from_base(*a))?;
    let p = e2.lift_x(&Fp2::from_base(*x0)).expect("every element of 𝔽_p is a square in 𝔽_p²");
    let (_, n2) = group_orders(e);
    let order = point_order(&e2, &p, n2)?;
    Ok((order <= m_bound as u128).then_some(order as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionCheck {
    pub m: u32,
    /// Distinct roots of the torsion x-polynomial in the field.
    pub roots: usize,
    /// Roots with a point above them in the same field.
    pub lifted: usize,
    /// Lifted points killed by `[m]`.
    pub killed: usize,
}

impl TorsionCheck {
    pub fn passed(&self) -> bool {
        self.lifted == self.killed
    }
}

pub fn check_torsion_roots<F: FiniteField>(e: &LegendreCurve<F>, m: u32, seed: u64) -> Result<TorsionCheck> {
    let rs = roots(&torsion_x_poly(e, m)?, seed)?;
    let lifts: Vec<ECPoint<F>> = rs.iter().filter_map(|r| e.lift_x(r)).collect();
    let killed = lifts
        .par_iter()
        .map(|p| e.scalar_mul(m as i128, p).map(|q| q.is_infinity()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&k| k)
        .count();
    Ok(TorsionCheck { m, roots: rs.len(), lifted: lifts.len(), killed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowCheck {
    pub p: u32,
    pub samples: usize,
    /// Samples with `g(x(P)) = x([p]P)`.
    pub agreeing: usize,
    pub fixes_branch_points: bool,
    pub degree: usize,
    pub separable: bool,
    pub characteristic_is_p: bool,
}

impl FlowCheck {
    pub fn passed(&self) -> bool {
        self.agreeing == self.samples && self.fixes_branch_points
    }
}

fn x_of<F: Field>(p: &ECPoint<F>) -> P1<F> {
    match p {
        ECPoint::Infinity => P1::Infinity,
        ECPoint::Affine { x, .. } => P1::Finite(x.clone()),
    }
}

/// Samples points with a seeded generator and compares `g ∘ x` with `x ∘ [p]`.
pub fn check_flow<F: FiniteField>(e: &LegendreCurve<F>, p: u32, samples: usize, seed: u64) -> Result<(FlowMap<F>, FlowCheck)> {
    let g = psi_p_map(e, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<ECPoint<F>> = (0..samples).map(|_| e.random_point(&mut rng)).collect();
    let agreeing = points
        .par_iter()
        .map(|pt| Ok(g.map.eval(&x_of(pt)) == x_of(&e.scalar_mul(p as i128, pt)?)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&ok| ok)
        .count();
    let report = FlowCheck {
        p,
        samples,
        agreeing,
        fixes_branch_points: g.fixes_branch_points(e),
        degree: g.degree(),
        separable: g.is_separable(),
        characteristic_is_p: g.characteristic_is_p,
    };
    Ok((g, report))
}
