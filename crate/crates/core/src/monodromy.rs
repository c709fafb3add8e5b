//! Monodromy tuples on ℙ¹ minus `{0, 1, λ, ∞}`.
//!
//! Loops are ordered `(g_0, g_1, g_λ, g_∞)` with `g_0·g_1·g_λ·g_∞ = 1`, so the
//! matrix at infinity is always `(M_0·M_1·M_λ)⁻¹`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::arith::lcm;
use crate::exactalg::{CycNum, Field};
use crate::linalg::ExactMatrix;
use crate::{Error, Result};

pub type Matrix = ExactMatrix<CycNum>;

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyTuple {
    mats: [Matrix; 3],
    m_inf: Matrix,
}

impl MonodromyTuple {
    pub fn m0(&self) -> &Matrix {
        &self.mats[0]
    }

    pub fn m1(&self) -> &Matrix {
        &self.mats[1]
    }

    pub fn m_lambda(&self) -> &Matrix {
        &self.mats[2]
    }

    /// `(M_0·M_1·M_λ)⁻¹`, recomputed whenever the tuple is built.
    pub fn m_inf(&self) -> &Matrix {
        &self.m_inf
    }

    /// The three finite-point matrices in loop order.
    pub fn finite(&self) -> &[Matrix; 3] {
        &self.mats
    }

    /// All four local monodromies `[M_0, M_1, M_λ, M_∞]`.
    pub fn all(&self) -> [&Matrix; 4] {
        [&self.mats[0], &self.mats[1], &self.mats[2], &self.m_inf]
    }

    pub fn rank(&self) -> usize {
        self.mats[0].rows()
    }

    /// Lcm of the cyclotomic orders of all entries.
    pub fn order(&self) -> u64 {
        self.mats.iter().fold(1, |acc, m| lcm(acc, m.order()))
    }

    /// Every entry lifted to one common cyclotomic order.
    pub fn unified(&self) -> MonodromyTuple {
        let n = self.order();
        let lift = |m: &Matrix| m.map(|x| x.lift(n).expect("order divides the lcm"));
        MonodromyTuple {
            mats: [lift(&self.mats[0]), lift(&self.mats[1]), lift(&self.mats[2])],
            m_inf: lift(&self.m_inf),
        }
    }

    /// Entries re-expressed in the smallest cyclotomic field containing all of
    /// them.
    pub fn descended(&self) -> MonodromyTuple {
        let entries: Vec<CycNum> = self.all().iter().flat_map(|m| m.entries().iter().cloned()).collect();
        let n = crate::exactalg::conductor(&entries);
        let down = |m: &Matrix| m.map(|x| x.lift(lcm(x.order(), n)).ok().and_then(|y| y.try_descend_to(n)).expect("entry lies in the conductor field"));
        MonodromyTuple {
            mats: [down(&self.mats[0]), down(&self.mats[1]), down(&self.mats[2])],
            m_inf: down(&self.m_inf),
        }
    }

    /// Simultaneous conjugation `P⁻¹·M·P`.
    pub fn conjugate_by(&self, p: &Matrix) -> Result<MonodromyTuple> {
        let pinv = p.inv()?;
        let c = |m: &Matrix| pinv.mul(m)?.mul(p);
        make_tuple(c(&self.mats[0])?, c(&self.mats[1])?, c(&self.mats[2])?)
    }
}

/// Builds a tuple and derives `M_∞`.
pub fn make_tuple(m0: Matrix, m1: Matrix, m_lambda: Matrix) -> Result<MonodromyTuple> {
    let n = m0.rows();
    for m in [&m0, &m1, &m_lambda] {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimensionMismatch("tuple matrices must be square of one size".into()));
        }
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("empty tuple matrices".into()));
    }
    let prod = m0.mul(&m1)?.mul(&m_lambda)?;
    let m_inf = prod.inv()?;
    Ok(MonodromyTuple { mats: [m0, m1, m_lambda], m_inf })
}

/// Condition (★): `J(1,2)` at 0, 1, λ and `J(−1,2)` at ∞.
pub fn star_check(t: &MonodromyTuple) -> bool {
    if t.rank() != 2 {
        return false;
    }
    let one = CycNum::from_int(1);
    let minus = CycNum::from_int(-1);
    t.finite().iter().all(|m| m.jordan_type(std::slice::from_ref(&one)).is_ok_and(|j| j.is_single_block(&one, 2)))
        && t.m_inf().jordan_type(std::slice::from_ref(&minus)).is_ok_and(|j| j.is_single_block(&minus, 2))
}

/// Burnside test: the algebra generated by the local monodromies is the full
/// matrix algebra.
pub fn is_irreducible(t: &MonodromyTuple) -> bool {
    let n = t.rank();
    if n == 1 {
        return true;
    }
    let u = t.unified();
    let gens = u.finite();
    // Two 2×2 matrices share an eigenvector iff their commutator is singular.
    if n == 2 {
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                let c = a.mul(b).and_then(|ab| ab.sub(&b.mul(a)?)).expect("square");
                if c.rank() == 2 {
                    return true;
                }
            }
        }
    }
    let sample = gens[0].get(0, 0).clone();
    let mut span = SpanBuilder::new(n * n);
    let mut basis: Vec<Matrix> = Vec::new();
    let id = Matrix::identity(n, &sample);
    for m in std::iter::once(&id).chain(gens.iter()) {
        if span.insert(m.entries()) {
            basis.push(m.clone());
        }
    }
    let mut i = 0;
    while i < basis.len() && basis.len() < n * n {
        for g in gens {
            let p = basis[i].mul(g).expect("square");
            if span.insert(p.entries()) {
                basis.push(p);
            }
        }
        i += 1;
    }
    basis.len() == n * n
}

/// Incremental row-echelon span used by the Burnside closure.
struct SpanBuilder {
    rows: Vec<(usize, Vec<CycNum>)>,
    dim: usize,
}

impl SpanBuilder {
    fn new(dim: usize) -> Self {
        SpanBuilder { rows: Vec::new(), dim }
    }

    /// Adds `v` to the span; true if it was independent.
    fn insert(&mut self, v: &[CycNum]) -> bool {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&f.mul(r));
                }
            }
        }
        let Some(p) = (0..self.dim).find(|&i| !v[i].is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        let v: Vec<CycNum> = v.iter().map(|x| x.mul(&inv)).collect();
        // keep earlier rows reduced at the new pivot
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x = x.sub(&f.mul(r));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Boundary traces and the three pair traces of a rank-2 tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceCoordinates {
    pub a0: CycNum,
    pub a1: CycNum,
    pub alambda: CycNum,
    pub ainf: CycNum,
    /// `tr(M_0·M_1)`
    pub x: CycNum,
    /// `tr(M_1·M_λ)`
    pub y: CycNum,
    /// `tr(M_0·M_λ)`
    pub z: CycNum,
}

impl TraceCoordinates {
    pub fn as_array(&self) -> [&CycNum; 7] {
        [&self.a0, &self.a1, &self.alambda, &self.ainf, &self.x, &self.y, &self.z]
    }

    pub fn boundary(&self) -> [&CycNum; 4] {
        [&self.a0, &self.a1, &self.alambda, &self.ainf]
    }

    pub fn xyz(&self) -> [&CycNum; 3] {
        [&self.x, &self.y, &self.z]
    }
}

pub fn trace_coordinates(t: &MonodromyTuple) -> Result<TraceCoordinates> {
    if t.rank() != 2 {
        return Err(Error::Precondition(format!("trace coordinates need rank 2, got {}", t.rank())));
    }
    let [m0, m1, ml] = t.finite();
    let tr = |a: &Matrix, b: &Matrix| a.mul(b).and_then(|p| p.trace());
    Ok(TraceCoordinates {
        a0: m0.trace()?,
        a1: m1.trace()?,
        alambda: ml.trace()?,
        ainf: t.m_inf().trace()?,
        x: tr(m0, m1)?,
        y: tr(m1, ml)?,
        z: tr(m0, ml)?,
    })
}

/// Conjugacy of irreducible rank-2 tuples via equality of all seven traces.
pub fn is_conjugate(a: &MonodromyTuple, b: &MonodromyTuple) -> Result<bool> {
    for t in [a, b] {
        if t.rank() != 2 {
            return Err(Error::Precondition("conjugacy test needs rank-2 tuples".into()));
        }
        if !is_irreducible(t) {
            return Err(Error::Precondition("conjugacy test needs irreducible tuples".into()));
        }
    }
    Ok(trace_coordinates(a)? == trace_coordinates(b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiniteImage {
    Order(usize),
    Exceeded,
}

type MatrixKey = Vec<(u64, Vec<BigInt>, BigInt)>;

fn matrix_key(m: &Matrix) -> MatrixKey {
    m.entries().iter().map(CycNum::key).collect()
}

/// Order of the group generated by `M_0, M_1, M_λ`, if at most `bound`.
pub fn finite_image(t: &MonodromyTuple, bound: usize) -> FiniteImage {
    let u = t.unified();
    let gens = u.finite();
    let id = Matrix::identity(t.rank(), gens[0].get(0, 0)).map(|x| x.lift(u.order()).expect("multiple"));
    let mut seen: HashMap<MatrixKey, ()> = HashMap::new();
    seen.insert(matrix_key(&id), ());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<(MatrixKey, Matrix)> = frontier
            .par_iter()
            .flat_map_iter(|m| gens.iter().map(move |g| m.mul(g).expect("square")))
            .map(|p| (matrix_key(&p), p))
            .collect();
        let mut next = Vec::new();
        for (k, p) in products {
            if seen.insert(k, ()).is_none() {
                if seen.len() > bound {
                    return FiniteImage::Exceeded;
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    FiniteImage::Order(seen.len())
}

impl Serialize for MonodromyTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MonodromyTuple", 3)?;
        st.serialize_field("M0", &self.mats[0])?;
        st.serialize_field("M1", &self.mats[1])?;
        st.serialize_field("Mlambda", &self.mats[2])?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MonodromyTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(rename = "M0")]
            m0: Matrix,
            #[serde(rename = "M1")]
            m1: Matrix,
            #[serde(rename = "Mlambda")]
            m_lambda: Matrix,
        }
        let raw = Raw::deserialize(d)?;
        make_tuple(raw.m0, raw.m1, raw.m_lambda).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(rows).unwrap()
    }

    pub(crate) fn cayley_third() -> MonodromyTuple {
        make_tuple(qm(&[&[2, -1], &[1, 0]]), qm(&[&[1, -1], &[0, 1]]), qm(&[&[1, 0], &[1, 1]])).unwrap()
    }

    fn cayley_one() -> MonodromyTuple {
        make_tuple(qm(&[&[-1, 2], &[-2, 3]]), qm(&[&[1, 2], &[0, 1]]), qm(&[&[1, 0], &[-2, 1]])).unwrap()
    }

    fn ident() -> MonodromyTuple {
        let i = qm(&[&[1, 0], &[0, 1]]);
        make_tuple(i.clone(), i.clone(), i).unwrap()
    }

    #[test]
    fn derived_infinity() {
        assert!(ident().m_inf().is_identity());
        assert_eq!(cayley_third().m_inf(), &qm(&[&[-1, 3], &[0, -1]]));
        assert_eq!(cayley_one().m_inf(), &qm(&[&[-1, 0], &[0, -1]]));
    }

    #[test]
    fn make_tuple_errors() {
        let i = qm(&[&[1, 0], &[0, 1]]);
        let s = qm(&[&[1, 2], &[2, 4]]);
        assert!(make_tuple(i.clone(), i.clone(), qm(&[&[1]])).is_err());
        assert_eq!(make_tuple(i.clone(), i, s), Err(Error::SingularMatrix));
    }

    #[test]
    fn star_examples() {
        assert!(star_check(&cayley_third()));
        assert!(!star_check(&cayley_one()));
        assert!(!star_check(&ident()));
    }

    #[test]
    fn irreducibility_examples() {
        let d = |a, b| qm(&[&[a, 0], &[0, b]]);
        let t = make_tuple(d(1, 2), d(3, 4), d(5, 6)).unwrap();
        assert!(!is_irreducible(&t));
        assert!(is_irreducible(&cayley_third()));
        let r1 = make_tuple(qm(&[&[2]]), qm(&[&[3]]), qm(&[&[5]])).unwrap();
        assert!(is_irreducible(&r1));
    }

    #[test]
    fn trace_examples() {
        let tc = trace_coordinates(&cayley_third()).unwrap();
        let ints: Vec<i64> = tc.as_array().iter().map(|c| c.to_rat().unwrap().numer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![2, 2, 2, -2, 1, 1, 1]);
        let tc = trace_coordinates(&ident()).unwrap();
        assert!(tc.as_array().iter().all(|c| **c == CycNum::from_int(2)));
    }

    #[test]
    fn conjugacy_examples() {
        let t = cayley_third();
        let p = qm(&[&[2, 1], &[1, 1]]);
        assert!(is_conjugate(&t, &t.conjugate_by(&p).unwrap()).unwrap());
        assert!(!is_conjugate(&t, &cayley_one()).unwrap_or(false));
        assert!(matches!(is_conjugate(&t, &ident()), Err(Error::Precondition(_))));
    }

    #[test]
    fn finite_image_examples() {
        assert_eq!(finite_image(&ident(), 10), FiniteImage::Order(1));
        let d = qm(&[&[1, 0], &[0, -1]]);
        let i = qm(&[&[1, 0], &[0, 1]]);
        let t = make_tuple(d, i.clone(), i).unwrap();
        assert_eq!(finite_image(&t, 10), FiniteImage::Order(2));
        assert_eq!(finite_image(&cayley_third(), 50), FiniteImage::Exceeded);
    }

    #[test]
    fn json_round_trip() {
        let t = cayley_third();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"M0\":{\"rows\":2,\"cols\":2,\"entries\":[{\"order\":1,\"coeffs\":[\"2\"]}"));
        let back: MonodromyTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
