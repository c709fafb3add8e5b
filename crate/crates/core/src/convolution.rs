//! Middle convolution on matrix tuples and the induced tuple of a character
//! on the Legendre double cover.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::arith::{gcd, lcm};
use crate::exactalg::{CycNum, Field, Rat};
use crate::linalg::ExactMatrix;
use crate::monodromy::{make_tuple, Matrix, MonodromyTuple};
use crate::{Error, Result};

/// A root of unity `c ≠ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionScalar(CycNum);

impl ConvolutionScalar {
    pub fn new(c: CycNum) -> Result<Self> {
        if c.is_one() {
            return Err(Error::Parameter("convolution scalar must differ from 1".into()));
        }
        // every root of unity in ℚ(ζ_N) has order dividing lcm(2, N)
        let e = lcm(2, c.order());
        if !c.pow(e).is_one() {
            return Err(Error::Parameter(format!("{c} is not a root of unity")));
        }
        Ok(ConvolutionScalar(c))
    }

    pub fn minus_one() -> Self {
        ConvolutionScalar(CycNum::from_int(-1))
    }

    pub fn value(&self) -> &CycNum {
        &self.0
    }
}

/// Character of H₁(E) ≅ ℤ² sending the basis cycles to `ζ_m^a`, `ζ_m^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverCharacter {
    pub m: u64,
    pub a: u64,
    pub b: u64,
}

impl CoverCharacter {
    pub fn new(m: u64, a: i64, b: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("character order must be positive".into()));
        }
        let r = |v: i64| v.rem_euclid(m as i64) as u64;
        Ok(CoverCharacter { m, a: r(a), b: r(b) })
    }

    /// Exact order `m / gcd(m, a, b)`.
    pub fn exact_order(&self) -> u64 {
        self.m / gcd(self.m, gcd(self.a, self.b))
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `(pa, pb)`, the image under the Galois element `ζ_m ↦ ζ_m^p`.
    pub fn scaled(&self, p: u64) -> Self {
        CoverCharacter { m: self.m, a: self.a * p % self.m, b: self.b * p % self.m }
    }

    /// The same character written with its exact order.
    pub fn reduced(&self) -> Self {
        let g = self.m / self.exact_order();
        CoverCharacter { m: self.m / g, a: self.a / g, b: self.b / g }
    }

    fn value(&self, class: (i64, i64)) -> CycNum {
        let e = self.a as i64 * class.0 + self.b as i64 * class.1;
        CycNum::root_of_unity(self.m, e)
    }
}

/// Dettweiler–Reiter realization of `MC_c`.
///
/// The block construction composes loops as `A_r⋯A_1`, so the tuple is fed in
/// as `(A_1, A_2, A_3) = (M_λ, M_1, M_0)` and the induced `(B_1, B_2, B_3)`
/// are read back as `(M_λ, M_1, M_0)`.
pub fn middle_convolve(t: &MonodromyTuple, c: &ConvolutionScalar) -> Result<MonodromyTuple> {
    let c = c.value();
    let u = t.unified();
    let [m0, m1, ml] = u.finite();
    let a = [ml.clone(), m1.clone(), m0.clone()];
    let n = t.rank();
    let r = a.len();
    let dim = r * n;
    let order = lcm(u.order(), c.order());
    let c = c.lift(order)?;
    let a: Vec<Matrix> = a.iter().map(|m| m.map(|x| x.lift(order).expect("multiple"))).collect();
    let zero = CycNum::zero(order);
    let one = CycNum::one(order);

    let shifted: Vec<Matrix> = a.iter().map(|m| m.sub_scalar(&one)).collect::<Result<_>>()?;
    let blocks: Vec<Matrix> = (0..r)
        .into_par_iter()
        .map(|k| {
            let mut b = Matrix::identity(dim, &one);
            for j in 0..r {
                let blk = match j.cmp(&k) {
                    std::cmp::Ordering::Less => shifted[j].clone(),
                    std::cmp::Ordering::Equal => a[k].scale(&c),
                    std::cmp::Ordering::Greater => shifted[j].scale(&c),
                };
                for row in 0..n {
                    for col in 0..n {
                        b.set(k * n + row, j * n + col, blk.get(row, col).clone());
                    }
                }
            }
            b
        })
        .collect();

    // K = ⊕ ker(A_k − 1), L = ∩ ker(B_k − 1)
    let mut span: Vec<Vec<CycNum>> = Vec::new();
    for (k, s) in shifted.iter().enumerate() {
        for v in s.kernel_basis() {
            let mut w = vec![zero.clone(); dim];
            w[k * n..(k + 1) * n].clone_from_slice(&v);
            span.push(w);
        }
    }
    let mut stacked: Vec<CycNum> = Vec::with_capacity(r * dim * dim);
    for b in &blocks {
        stacked.extend(b.sub_scalar(&one)?.entries().iter().cloned());
    }
    let l_basis = Matrix::from_vec(r * dim, dim, stacked)?.kernel_basis();
    span.extend(l_basis);

    let mut basis: Vec<Vec<CycNum>> = Vec::new();
    extend_independent(&mut basis, span, dim);
    let sub_dim = basis.len();
    // complete with the earliest standard basis vectors
    let standard = (0..dim).map(|i| {
        let mut e = vec![zero.clone(); dim];
        e[i] = one.clone();
        e
    });
    extend_independent(&mut basis, standard, dim);
    let q = dim - sub_dim;
    if q == 0 {
        return Err(Error::DegenerateConvolution);
    }
    let p = columns(&basis, dim);
    let pinv = p.inv()?;
    let induced: Vec<Matrix> = blocks
        .par_iter()
        .map(|b| {
            let full = pinv.mul(b)?.mul(&p)?;
            let mut out = Matrix::zeros(q, q, &zero);
            for i in 0..q {
                for j in 0..q {
                    out.set(i, j, full.get(sub_dim + i, sub_dim + j).clone());
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut it = induced.into_iter();
    let (ml, m1, m0) = (it.next().expect("3"), it.next().expect("3"), it.next().expect("3"));
    make_tuple(m0, m1, ml)
}

/// Matrix whose columns are the given vectors.
fn columns(vs: &[Vec<CycNum>], dim: usize) -> Matrix {
    let mut entries = Vec::with_capacity(dim * vs.len());
    for i in 0..dim {
        for v in vs {
            entries.push(v[i].clone());
        }
    }
    Matrix::from_vec(dim, vs.len(), entries).expect("shape")
}

/// Appends each candidate that is independent of the vectors collected so far.
fn extend_independent(basis: &mut Vec<Vec<CycNum>>, candidates: impl IntoIterator<Item = Vec<CycNum>>, dim: usize) {
    for v in candidates {
        if basis.len() == dim {
            return;
        }
        basis.push(v);
        if columns(basis, dim).rank() < basis.len() {
            basis.pop();
        }
    }
}

/// Words in the free group on `g_0, g_1, g_λ` (generator index, exponent ±1).
type Word = Vec<(usize, i8)>;

/// Subgroup generators `t·g·rep(t·g)⁻¹` of the index-2 subgroup for the
/// transversal `{e, g_0}`, listed as (coset, generator).
const SCHREIER: [(usize, usize); 5] = [(1, 0), (1, 1), (1, 2), (0, 1), (0, 2)];

/// Rewrites a word lying in the index-2 subgroup and abelianizes it in the
/// Schreier generators.
fn rewrite_abelian(word: &Word) -> Result<[i64; 5]> {
    let mut out = [0i64; 5];
    let mut coset = 0usize;
    for &(g, e) in word {
        // g from coset t contributes s(t, g); g⁻¹ contributes s(t·g⁻¹, g)⁻¹
        let from = if e > 0 { coset } else { coset ^ 1 };
        if let Some(i) = SCHREIER.iter().position(|&s| s == (from, g)) {
            out[i] += e as i64;
        }
        coset ^= 1;
    }
    if coset != 0 {
        return Err(Error::Precondition("word is not in the index-2 subgroup".into()));
    }
    Ok(out)
}

/// Map from abelianized subgroup words to H₁(E) in the basis
/// `([g_0g_1], [g_0g_λ])`, with puncture classes `g_i²` set to zero.
struct HomologyMap {
    /// rows: puncture relations, then the two basis classes
    system: ExactMatrix<Rat>,
}

impl HomologyMap {
    fn new() -> Result<Self> {
        let punctures: [Word; 4] = [
            vec![(0, 1), (0, 1)],
            vec![(1, 1), (1, 1)],
            vec![(2, 1), (2, 1)],
            vec![(0, 1), (1, 1), (2, 1), (0, 1), (1, 1), (2, 1)],
        ];
        let basis: [Word; 2] = [vec![(0, 1), (1, 1)], vec![(0, 1), (2, 1)]];
        let mut cols: Vec<[i64; 5]> = Vec::new();
        for w in punctures.iter().chain(basis.iter()) {
            cols.push(rewrite_abelian(w)?);
        }
        let mut entries = Vec::new();
        for i in 0..5 {
            for c in &cols {
                entries.push(Rat::from_int(c[i]));
            }
        }
        let system = ExactMatrix::from_vec(5, cols.len(), entries)?;
        Ok(HomologyMap { system })
    }

    fn class(&self, word: &Word) -> Result<(i64, i64)> {
        let v: Vec<Rat> = rewrite_abelian(word)?.iter().map(|&x| Rat::from_int(x)).collect();
        let sol = self
            .system
            .solve(&v)?
            .ok_or_else(|| Error::Precondition("subgroup word outside the homology span".into()))?;
        let n = sol.len();
        let int = |r: &Rat| -> Result<i64> {
            if !r.is_integer() {
                return Err(Error::Precondition("non-integral homology class".into()));
            }
            r.numer().try_into().map_err(|_| Error::Precondition("homology class overflow".into()))
        };
        Ok((int(&sol[n - 2])?, int(&sol[n - 1])?))
    }
}

fn inverse(w: &Word) -> Word {
    w.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Rank-2 tuple induced from `χ` on the index-2 subgroup `π₁(E − E[2])`.
///
/// Entry `(i, j)` of `ρ(g)` is `χ(h)` where `g·t_j = t_i·h`.
pub fn induced_pushforward(chi: &CoverCharacter) -> Result<MonodromyTuple> {
    let hom = HomologyMap::new()?;
    let transversal: [Word; 2] = [vec![], vec![(0, 1)]];
    let order = chi.m.max(1);
    let mut mats = Vec::with_capacity(3);
    for g in 0..3 {
        let mut m = Matrix::zeros(2, 2, &CycNum::zero(order));
        for (j, tj) in transversal.iter().enumerate() {
            let i = (j + 1) % 2;
            let mut h = inverse(&transversal[i]);
            h.push((g, 1));
            h.extend(tj.iter().copied());
            m.set(i, j, chi.value(hom.class(&h)?));
        }
        mats.push(m);
    }
    let mut it = mats.into_iter();
    make_tuple(it.next().expect("3"), it.next().expect("3"), it.next().expect("3"))
}
