//! Braid-group action on monodromy tuples and orbits of the pure subgroup on
//! trace coordinates.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{CycNum, Field};
use crate::monodromy::{is_irreducible, make_tuple, trace_coordinates, MonodromyTuple, TraceCoordinates};
use crate::{Error, Result};

/// `σ_i` or `σ_i⁻¹` for `i ∈ {1, 2, 3}`, acting on `(M_0, M_1, M_λ, M_∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidMove {
    pub index: u8,
    pub inverse: bool,
}

impl BraidMove {
    pub fn new(index: u8, inverse: bool) -> Result<Self> {
        if !(1..=3).contains(&index) {
            return Err(Error::Parameter(format!("braid index {index} outside 1..=3")));
        }
        Ok(BraidMove { index, inverse })
    }

    pub fn inverted(self) -> Self {
        BraidMove { inverse: !self.inverse, ..self }
    }

    /// `σ_1, σ_1⁻¹, σ_2, …`
    pub fn all() -> [BraidMove; 6] {
        let m = |index, inverse| BraidMove { index, inverse };
        [m(1, false), m(1, true), m(2, false), m(2, true), m(3, false), m(3, true)]
    }
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "s{}^-1", self.index)
        } else {
            write!(f, "s{}", self.index)
        }
    }
}

/// Hurwitz action: `σ_i` sends `(X, Y)` in slots `i, i+1` to `(Y, Y⁻¹XY)` and
/// `σ_i⁻¹` sends it to `(XYX⁻¹, X)`.
pub fn apply_move(t: &MonodromyTuple, mv: BraidMove) -> Result<MonodromyTuple> {
    let mut mats: Vec<_> = t.all().iter().map(|m| (*m).clone()).collect();
    let i = mv.index as usize - 1;
    let (x, y) = (mats[i].clone(), mats[i + 1].clone());
    if mv.inverse {
        mats[i] = x.mul(&y)?.mul(&x.inv()?)?;
        mats[i + 1] = x;
    } else {
        mats[i + 1] = y.inv()?.mul(&x)?.mul(&y)?;
        mats[i] = y;
    }
    let mut it = mats.into_iter();
    make_tuple(it.next().expect("4"), it.next().expect("4"), it.next().expect("4"))
}

/// Action of one move on the seven trace coordinates of an SL₂ tuple.
pub fn apply_trace_move(tc: &TraceCoordinates, mv: BraidMove) -> TraceCoordinates {
    let (a, b, c, d) = (&tc.a0, &tc.a1, &tc.alambda, &tc.ainf);
    let (x, y, z) = (&tc.x, &tc.y, &tc.z);
    // ac + bd − xy − z and ad + bc − xz − y
    let fwd = || a.mul(c).add(&b.mul(d)).sub(&x.mul(y)).sub(z);
    let back = || a.mul(d).add(&b.mul(c)).sub(&x.mul(z)).sub(y);
    let tcs = |a0: &CycNum, a1: &CycNum, al: &CycNum, ai: &CycNum, x: CycNum, y: CycNum, z: CycNum| TraceCoordinates {
        a0: a0.clone(),
        a1: a1.clone(),
        alambda: al.clone(),
        ainf: ai.clone(),
        x,
        y,
        z,
    };
    match (mv.index, mv.inverse) {
        (1, false) => tcs(b, a, c, d, x.clone(), fwd(), y.clone()),
        (1, true) => tcs(b, a, c, d, x.clone(), z.clone(), back()),
        (2, false) => tcs(a, c, b, d, z.clone(), y.clone(), a.mul(b).add(&c.mul(d)).sub(x).sub(&y.mul(z))),
        (2, true) => tcs(a, c, b, d, fwd(), y.clone(), x.clone()),
        (3, false) => tcs(a, b, d, c, x.clone(), fwd(), y.clone()),
        _ => tcs(a, b, d, c, x.clone(), z.clone(), back()),
    }
}

/// `σ_i^{±2}` on trace coordinates.
pub fn apply_pure_trace_move(tc: &TraceCoordinates, mv: BraidMove) -> TraceCoordinates {
    apply_trace_move(&apply_trace_move(tc, mv), mv)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitSize {
    Finite(usize),
    Exceeded,
}

/// One orbit point with the pure-braid word that reaches it from the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub x: CycNum,
    pub y: CycNum,
    pub z: CycNum,
    pub word: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub seed: TraceCoordinates,
    pub size: OrbitSize,
    /// Points visited, in discovery order.
    pub points: Vec<OrbitPoint>,
}

impl OrbitReport {
    pub fn is_finite(&self) -> bool {
        matches!(self.size, OrbitSize::Finite(_))
    }

    /// `x,y,z,word` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,z,word\n");
        for p in &self.points {
            s.push_str(&format!("\"{}\",\"{}\",\"{}\",{}\n", p.x, p.y, p.z, p.word));
        }
        s
    }
}

type PointKey = [(u64, Vec<BigInt>, BigInt); 3];

fn point_key(tc: &TraceCoordinates) -> PointKey {
    [tc.x.key(), tc.y.key(), tc.z.key()]
}

/// Breadth-first orbit of the pure braid moves `σ_i^{±2}` on `(x, y, z)`.
pub fn orbit(t: &MonodromyTuple, bound: usize) -> Result<OrbitReport> {
    if t.rank() != 2 {
        return Err(Error::Precondition("orbit needs a rank-2 tuple".into()));
    }
    if !is_irreducible(t) {
        return Err(Error::Precondition("orbit needs an irreducible tuple".into()));
    }
    if t.all().iter().any(|m| !m_det_is_one(m)) {
        return Err(Error::Precondition("orbit needs determinant-one local monodromies".into()));
    }
    let seed = trace_coordinates(t)?;
    Ok(orbit_from_traces(&seed, bound))
}

fn m_det_is_one(m: &crate::monodromy::Matrix) -> bool {
    let det = m.get(0, 0).mul(m.get(1, 1)).sub(&m.get(0, 1).mul(m.get(1, 0)));
    det.is_one()
}

/// The same orbit search started from trace coordinates.
pub fn orbit_from_traces(seed: &TraceCoordinates, bound: usize) -> OrbitReport {
    let all: Vec<CycNum> = seed.as_array().iter().map(|c| c.descend()).collect();
    let all = CycNum::unify_all(&all);
    let start = TraceCoordinates {
        a0: all[0].clone(),
        a1: all[1].clone(),
        alambda: all[2].clone(),
        ainf: all[3].clone(),
        x: all[4].clone(),
        y: all[5].clone(),
        z: all[6].clone(),
    };
    let moves = BraidMove::all();
    let mut index: HashMap<PointKey, usize> = HashMap::new();
    let mut nodes: Vec<(TraceCoordinates, String)> = Vec::new();
    index.insert(point_key(&start), 0);
    nodes.push((start.clone(), String::new()));
    let mut frontier = vec![0usize];
    let mut exceeded = false;
    'bfs: while !frontier.is_empty() {
        let found: Vec<(usize, BraidMove, TraceCoordinates)> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let tc = &nodes[i].0;
                moves.iter().map(move |&mv| (i, mv, apply_pure_trace_move(tc, mv)))
            })
            .collect();
        let mut next = Vec::new();
        for (parent, mv, tc) in found {
            let key = point_key(&tc);
            if index.contains_key(&key) {
                continue;
            }
            if nodes.len() >= bound {
                exceeded = true;
                break 'bfs;
            }
            let letter = format!("s{}^{}2", mv.index, if mv.inverse { "-" } else { "" });
            let word = if nodes[parent].1.is_empty() { letter } else { format!("{} {letter}", nodes[parent].1) };
            index.insert(key, nodes.len());
            next.push(nodes.len());
            nodes.push((tc, word));
        }
        frontier = next;
    }
    let size = if exceeded { OrbitSize::Exceeded } else { OrbitSize::Finite(nodes.len()) };
    let points = nodes
        .into_iter()
        .map(|(tc, word)| OrbitPoint { x: tc.x.descend(), y: tc.y.descend(), z: tc.z.descend(), word })
        .collect();
    OrbitReport { seed: seed.clone(), size, points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{cayley_solution, CayleyParams};
    use crate::monodromy::{star_check, Matrix};

    fn cp(a: &str, b: &str) -> MonodromyTuple {
        cayley_solution(&CayleyParams::parse(a, b).unwrap()).unwrap()
    }

    #[test]
    fn move_then_inverse() {
        let t = cp("1/3", "1/5");
        for mv in BraidMove::all() {
            assert_eq!(apply_move(&apply_move(&t, mv).unwrap(), mv.inverted()).unwrap(), t);
        }
    }

    #[test]
    fn pure_moves_keep_star() {
        let t = cp("1/3", "1/3");
        for mv in BraidMove::all() {
            let s = apply_move(&apply_move(&t, mv).unwrap(), mv).unwrap();
            assert!(star_check(&s));
        }
    }

    #[test]
    fn sigma1_permutes_boundary() {
        let t = apply_move(&cp("1/3", "1/3"), BraidMove::new(1, false).unwrap()).unwrap();
        let tc = trace_coordinates(&t).unwrap();
        let mut b: Vec<i64> = tc.boundary().iter().map(|c| c.to_rat().unwrap().numer().try_into().unwrap()).collect();
        b.sort();
        assert_eq!(b, vec![-2, 2, 2, 2]);
    }

    #[test]
    fn trace_action_matches_tuples() {
        let t = cp("2/5", "1/7");
        for mv in BraidMove::all() {
            let moved = trace_coordinates(&apply_move(&t, mv).unwrap()).unwrap();
            assert_eq!(moved, apply_trace_move(&trace_coordinates(&t).unwrap(), mv), "{mv}");
        }
    }

    #[test]
    fn braid_relation() {
        let t = cp("1/4", "2/3");
        let s = |t: &MonodromyTuple, i| apply_move(t, BraidMove::new(i, false).unwrap()).unwrap();
        assert_eq!(s(&s(&s(&t, 1), 2), 1), s(&s(&s(&t, 2), 1), 2));
        assert_eq!(s(&s(&s(&t, 2), 3), 2), s(&s(&s(&t, 3), 2), 3));
    }

    #[test]
    fn small_orbits_close() {
        for (a, b) in [("1/3", "1/3"), ("1/5", "1/5")] {
            let r = orbit(&cp(a, b), 10_000).unwrap();
            assert!(r.is_finite(), "{a} {b}");
            let OrbitSize::Finite(n) = r.size else { unreachable!() };
            assert_eq!(n, r.points.len());
        }
    }

    #[test]
    fn rational_point_off_family_exceeds() {
        // M_0 = I + N with N nilpotent, realizing (x, y, z) = (1/2, 1/2, 7/4)
        let q = |r: &[(i64, i64)]| {
            Matrix::from_rows(
                r.chunks(2)
                    .map(|row| row.iter().map(|&(n, d)| CycNum::from_rat(&crate::exactalg::Rat::new(n, d))).collect())
                    .collect(),
            )
            .unwrap()
        };
        let m0 = q(&[(3, 2), (-1, 4), (1, 1), (1, 2)]);
        let m1 = q(&[(1, 1), (-3, 2), (0, 1), (1, 1)]);
        let ml = q(&[(1, 1), (0, 1), (1, 1), (1, 1)]);
        let t = make_tuple(m0, m1, ml).unwrap();
        assert!(star_check(&t));
        let r = orbit(&t, 500).unwrap();
        assert_eq!(r.size, OrbitSize::Exceeded);
    }

    #[test]
    fn csv_has_header() {
        let r = orbit(&cp("1/3", "1/3"), 100).unwrap();
        assert!(r.to_csv().starts_with("x,y,z,word\n\"1\",\"1\",\"1\","));
    }
}
