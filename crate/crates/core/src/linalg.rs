//! Dense exact linear algebra over any [`Field`].
//!
//! Elimination is plain Gauss–Jordan over the field, pivoting on the entry of
//! smallest [`Field::weight`] in the current column. Jordan types are read off
//! rank sequences of `(A − cI)^k` for eigenvalues `c` drawn from a supplied
//! candidate set.

use std::fmt;

use crate::exactalg::{CycNum, Field, Poly};
use crate::{Error, Result};

/// Largest dimension accepted by [`ExactMatrix::char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 12;

#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Field> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> ExactMatrix<F> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<F>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize, sample: &F) -> Self {
        ExactMatrix { rows, cols, entries: vec![sample.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, sample: &F) -> Self {
        let mut m = Self::zeros(n, n, sample);
        for i in 0..n {
            m.entries[i * n + i] = sample.one_like();
        }
        m
    }

    pub fn diagonal(diag: &[F]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n, &diag[0]);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Some entry, used to create constants of the right field.
    fn sample(&self) -> Option<&F> {
        self.entries.first()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> ExactMatrix<G> {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &F) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(Field::neg).collect() }
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let sample = self.sample().or(rhs.sample());
        let Some(sample) = sample else {
            return Ok(ExactMatrix { rows: self.rows, cols: rhs.cols, entries: Vec::new() });
        };
        let zero = sample.zero_like();
        let mut entries = vec![zero.clone(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let e = &mut entries[i * rhs.cols + j];
                    *e = e.add(&a.mul(b));
                }
            }
        }
        Ok(ExactMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(v.first().map_or_else(|| self.entries[0].zero_like(), F::zero_like), |acc, (a, b)| {
                        acc.add(&a.mul(b))
                    })
            })
            .collect())
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let sample = self.sample().ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))?;
        let mut acc = Self::identity(self.rows, sample);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
        }
        let sample = self.sample().ok_or_else(|| Error::DimensionMismatch("empty matrix".into()))?;
        Ok((0..self.rows).fold(sample.zero_like(), |acc, i| acc.add(self.get(i, i))))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Field::is_zero)
    }

    /// `self − c·I`.
    pub fn sub_scalar(&self, c: &F) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("shift of a non-square matrix".into()));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i).sub(c);
            m.set(i, i, v);
        }
        Ok(m)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let best = (row..self.rows)
                .filter(|&r| !self.get(r, col).is_zero())
                .min_by_key(|&r| self.get(r, col).weight());
            let Some(p) = best else { continue };
            if p != row {
                for c in 0..self.cols {
                    self.entries.swap(row * self.cols + c, p * self.cols + c);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.get(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for c in col..self.cols {
                    let pc = self.get(row, c);
                    if pc.is_zero() {
                        continue;
                    }
                    let v = self.get(r, c).sub(&f.mul(pc));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    fn det2(&self) -> F {
        self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0)))
    }

    pub fn rank(&self) -> usize {
        if self.entries.is_empty() {
            return 0;
        }
        if self.rows == 2 && self.cols == 2 {
            if self.entries.iter().all(Field::is_zero) {
                return 0;
            }
            return if self.det2().is_zero() { 1 } else { 2 };
        }
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : A·v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Some(sample) = self.sample().cloned() else {
            return Vec::new();
        };
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![sample.zero_like(); self.cols];
                v[f] = sample.one_like();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let Some(sample) = self.sample() else {
            return Ok(self.clone());
        };
        if n == 2 {
            let d = self.det2();
            if d.is_zero() {
                return Err(Error::SingularMatrix);
            }
            let di = d.inv()?;
            let (a, b, c, e) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
            return Self::from_vec(2, 2, vec![e.mul(&di), b.neg().mul(&di), c.neg().mul(&di), a.mul(&di)]);
        }
        let mut aug = Self::zeros(n, 2 * n, sample);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, sample.one_like());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut out = Self::zeros(n, n, sample);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    /// Solves `A·x = b`, returning one solution if consistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let Some(sample) = self.sample().or(b.first()) else {
            return Ok(Some(Vec::new()));
        };
        let mut aug = Self::zeros(self.rows, self.cols + 1, sample);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![sample.zero_like(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Characteristic polynomial `det(tI − A)` by Berkowitz's division-free
    /// algorithm.
    pub fn char_poly(&self) -> Result<Poly<F>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        if n > CHAR_POLY_MAX_DIM {
            return Err(Error::DimensionGuard { dim: n, max: CHAR_POLY_MAX_DIM });
        }
        let Some(sample) = self.sample().cloned() else {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        };
        // v holds coefficients from the leading one downwards.
        let mut v = vec![sample.one_like()];
        for r in 0..n {
            // Leading r×r block A_r, column C above and row R left of a_rr.
            let a_rr = self.get(r, r).clone();
            let col: Vec<F> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<F> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut q = vec![sample.one_like(), a_rr.neg()];
            let mut w = col.clone();
            for _ in 0..r {
                let dot = row.iter().zip(&w).fold(sample.zero_like(), |acc, (a, b)| acc.add(&a.mul(b)));
                q.push(dot.neg());
                w = (0..r)
                    .map(|i| (0..r).fold(sample.zero_like(), |acc, j| acc.add(&self.get(i, j).mul(&w[j]))))
                    .collect();
            }
            // Toeplitz product: new[i] = Σ_j q[i−j]·v[j].
            let mut next = vec![sample.zero_like(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < q.len() {
                        *slot = slot.add(&q[i - j].mul(vj));
                    }
                }
            }
            v = next;
        }
        v.reverse();
        Ok(Poly::new(v))
    }

    /// Jordan type with eigenvalues drawn from `candidates`.
    pub fn jordan_type(&self, candidates: &[F]) -> Result<JordanType<F>> {
        let n = self.rows;
        let mut remaining = self.char_poly()?;
        let mut blocks = Vec::new();
        let mut seen: Vec<F> = Vec::new();
        for c in candidates {
            if seen.contains(c) {
                continue;
            }
            seen.push(c.clone());
            let lin = Poly::linear_root(c);
            let mut mult = 0;
            while let Some(q) = remaining.div_exact(&lin)? {
                remaining = q;
                mult += 1;
            }
            if mult == 0 {
                continue;
            }
            let shifted = self.sub_scalar(c)?;
            // ranks[k] = rank((A − cI)^k)
            let mut ranks = vec![n];
            let mut power = ExactMatrix::identity(n, c);
            for _ in 0..=mult {
                power = power.mul(&shifted)?;
                ranks.push(power.rank());
                if ranks.len() >= 2 && ranks[ranks.len() - 1] == n - mult {
                    break;
                }
            }
            ranks.push(*ranks.last().expect("nonempty"));
            for k in 1..ranks.len() - 1 {
                let at_least_k = ranks[k - 1] - ranks[k];
                let at_least_k1 = ranks[k] - ranks[k + 1];
                for _ in 0..at_least_k - at_least_k1 {
                    blocks.push((c.clone(), k));
                }
            }
        }
        if remaining.degree() != Some(0) {
            return Err(Error::EigenvalueOutsideCandidates);
        }
        Ok(JordanType::new(blocks))
    }
}

impl ExactMatrix<CycNum> {
    /// Lifts every entry to the lcm of the entry orders.
    pub fn unify_order(&self) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: CycNum::unify_all(&self.entries) }
    }

    /// Lcm of the entry orders.
    pub fn order(&self) -> u64 {
        self.entries.iter().fold(1, |acc, x| crate::exactalg::arith::lcm(acc, x.order()))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| CycNum::from_int(v)).collect()).collect())
    }
}

/// Multiset of Jordan blocks `(eigenvalue, size)`, kept sorted by candidate
/// order and then by decreasing size.
#[derive(Clone, PartialEq, Debug)]
pub struct JordanType<F: Field> {
    blocks: Vec<(F, usize)>,
}

impl<F: Field> JordanType<F> {
    pub fn new(mut blocks: Vec<(F, usize)>) -> Self {
        // stable: keeps candidate order, larger blocks first within one eigenvalue
        let mut grouped: Vec<(F, Vec<usize>)> = Vec::new();
        for (c, s) in blocks.drain(..) {
            match grouped.iter_mut().find(|(g, _)| *g == c) {
                Some((_, sizes)) => sizes.push(s),
                None => grouped.push((c, vec![s])),
            }
        }
        let blocks = grouped
            .into_iter()
            .flat_map(|(c, mut sizes)| {
                sizes.sort_unstable_by(|a, b| b.cmp(a));
                sizes.into_iter().map(move |s| (c.clone(), s))
            })
            .collect();
        JordanType { blocks }
    }

    pub fn blocks(&self) -> &[(F, usize)] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|(_, s)| s).sum()
    }

    /// True iff the type is a single block `J(c, size)`.
    pub fn is_single_block(&self, c: &F, size: usize) -> bool {
        self.blocks.len() == 1 && self.blocks[0].0 == *c && self.blocks[0].1 == size
    }
}

impl serde::Serialize for ExactMatrix<CycNum> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExactMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for ExactMatrix<CycNum> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<CycNum>,
        }
        let raw = Raw::deserialize(d)?;
        ExactMatrix::from_vec(raw.rows, raw.cols, raw.entries).map_err(serde::de::Error::custom)
    }
}
