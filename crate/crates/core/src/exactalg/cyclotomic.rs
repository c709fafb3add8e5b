use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{divisors, euler_phi, gcd, lcm, mobius, units};
use super::field::Field;
use super::rat::Rat;
use crate::{Error, Result};

/// Cached data for ℚ(ζ_N): the nonzero lower-order terms of Φ_N, which drive
/// reduction of `x^d` for `d ≥ φ(N)`.
#[derive(Debug)]
struct CycloData {
    order: u64,
    phi: usize,
    /// Nonzero `(j, a_j)` with `j < phi`.
    terms: Vec<(usize, i64)>,
}

fn cyclo_cache() -> &'static RwLock<HashMap<u64, Arc<CycloData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycloData>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cyclo(order: u64) -> Arc<CycloData> {
    assert!(order >= 1, "cyclotomic order must be positive");
    if let Some(d) = cyclo_cache().read().expect("cache lock").get(&order) {
        return Arc::clone(d);
    }
    let poly = cyclotomic_polynomial(order);
    let phi = poly.len() - 1;
    let terms = poly[..phi].iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, a)).collect();
    let data = Arc::new(CycloData { order, phi, terms });
    cyclo_cache().write().expect("cache lock").entry(order).or_insert(data).clone()
}

/// Φ_N = ∏_{d | N} (x^d − 1)^{μ(N/d)}; all multiplications are done before
/// the (exact) divisions.
pub fn cyclotomic_polynomial(order: u64) -> Vec<i64> {
    let ds = divisors(order);
    let mut p: Vec<i128> = vec![1];
    for &d in &ds {
        if mobius(order / d) == 1 {
            // multiply by x^d − 1
            let d = d as usize;
            let mut q = vec![0i128; p.len() + d];
            for (i, &c) in p.iter().enumerate() {
                q[i + d] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &ds {
        if mobius(order / d) == -1 {
            // divide by x^d − 1: q_i = q_{i−d} − p_i
            let d = d as usize;
            let qlen = p.len() - d;
            let mut q = vec![0i128; qlen];
            for i in 0..qlen {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - p[i];
            }
            p = q;
        }
    }
    debug_assert_eq!(p.len() as u64 - 1, euler_phi(order));
    p.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64")).collect()
}

/// Reduces an exponent-indexed integer vector modulo x^N − 1 and Φ_N.
fn reduce_big(data: &CycloData, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let n = data.order as usize;
    if v.len() > n {
        for i in n..v.len() {
            let c = std::mem::take(&mut v[i]);
            v[i % n] += c;
        }
        v.truncate(n);
    }
    let phi = data.phi;
    for d in (phi..v.len()).rev() {
        if v[d].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[d]);
        for &(j, a) in &data.terms {
            v[d - phi + j] -= &c * a;
        }
    }
    v.resize(phi, BigInt::zero());
    v
}

fn reduce_small(data: &CycloData, mut v: Vec<i128>) -> Option<Vec<i128>> {
    let n = data.order as usize;
    if v.len() > n {
        for i in n..v.len() {
            let c = std::mem::take(&mut v[i]);
            v[i % n] = v[i % n].checked_add(c)?;
        }
        v.truncate(n);
    }
    let phi = data.phi;
    for d in (phi..v.len()).rev() {
        let c = v[d];
        if c == 0 {
            continue;
        }
        v[d] = 0;
        for &(j, a) in &data.terms {
            let t = c.checked_mul(a as i128)?;
            v[d - phi + j] = v[d - phi + j].checked_sub(t)?;
        }
    }
    v.resize(phi, 0);
    Some(v)
}

/// Element of the cyclotomic field ℚ(ζ_N), stored in the power basis
/// `1, ζ, …, ζ^{φ(N)−1}` as integer numerators over one common denominator.
///
/// Binary operations lift both operands to the lcm of their orders. Equality
/// compares values, so `ζ_8²` equals `ζ_4`.
#[derive(Clone)]
pub struct CycNum {
    order: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    fn from_parts(order: u64, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CycNum { order, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(order: u64) -> Self {
        let phi = cyclo(order).phi;
        CycNum { order, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rat_at(&Rat::one(), order)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_int(n))
    }

    /// A rational number, at order 1.
    pub fn from_rat(r: &Rat) -> Self {
        Self::from_rat_at(r, 1)
    }

    pub fn from_rat_at(r: &Rat, order: u64) -> Self {
        let mut x = Self::zero(order);
        x.num[0] = r.numer().clone();
        x.den = r.denom().clone();
        x
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn root_of_unity(order: u64, k: i64) -> Self {
        let data = cyclo(order);
        let e = k.rem_euclid(order as i64) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        CycNum { order, num: reduce_big(&data, v), den: BigInt::one() }
    }

    /// Builds `Σ c_e ζ_N^e` from exponent/coefficient pairs.
    pub fn from_exponents(order: u64, terms: &[(i64, Rat)]) -> Self {
        let mut acc = Self::zero(order);
        for (e, c) in terms {
            acc = acc.add(&Self::root_of_unity(order, *e).mul(&Self::from_rat_at(c, order)));
        }
        acc
    }

    /// Power-basis coordinates; the slice must have length φ(N).
    pub fn from_coeffs(order: u64, coeffs: &[Rat]) -> Result<Self> {
        let phi = euler_phi(order) as usize;
        if coeffs.len() != phi {
            return Err(Error::Parse(format!("order {order} needs {phi} coefficients, got {}", coeffs.len())));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_parts(order, num, den))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Power-basis coordinates (length φ(N)).
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    pub fn phi(&self) -> usize {
        self.num.len()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(Rat::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.num.iter().skip(1).all(Zero::is_zero)
    }

    /// Re-expresses the element in ℚ(ζ_M) for a multiple `M` of the order.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if !target.is_multiple_of(self.order) {
            return Err(Error::FieldMismatch(format!("order {} does not divide {target}", self.order)));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let data = cyclo(target);
        let mut v = vec![BigInt::zero(); (self.num.len().max(1) - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(CycNum { order: target, num: reduce_big(&data, v), den: self.den.clone() })
    }

    fn lifted(&self, target: u64) -> Cow<'_, Self> {
        if target == self.order {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.lift(target).expect("target is a multiple"))
        }
    }

    /// Lifts both operands to the lcm of their orders.
    pub fn unify<'a>(a: &'a Self, b: &'a Self) -> (Cow<'a, Self>, Cow<'a, Self>) {
        let n = lcm(a.order, b.order);
        (a.lifted(n), b.lifted(n))
    }

    /// Lifts every element to the lcm of all orders.
    pub fn unify_all(xs: &[Self]) -> Vec<Self> {
        let n = xs.iter().fold(1, |acc, x| lcm(acc, x.order));
        xs.iter().map(|x| x.lift(n).expect("lcm is a multiple")).collect()
    }

    /// Exact key valid for comparing elements of one fixed order.
    pub fn key(&self) -> (u64, Vec<BigInt>, BigInt) {
        (self.order, self.num.clone(), self.den.clone())
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        let data = cyclo(self.order);
        let den = &self.den * &rhs.den;
        if let Some(num) = self.mul_small(rhs, &data) {
            return Self::from_parts(self.order, num, den);
        }
        let len = self.num.len() + rhs.num.len() - 1;
        let mut v = vec![BigInt::zero(); len];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::from_parts(self.order, reduce_big(&data, v), den)
    }

    /// Word-sized fast path; `None` when any intermediate would overflow.
    fn mul_small(&self, rhs: &Self, data: &CycloData) -> Option<Vec<BigInt>> {
        let a: Vec<i64> = self.num.iter().map(ToPrimitive::to_i64).collect::<Option<_>>()?;
        let b: Vec<i64> = rhs.num.iter().map(ToPrimitive::to_i64).collect::<Option<_>>()?;
        let bits = |v: &[i64]| 64 - v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0).leading_zeros();
        let len_bits = 64 - (a.len().max(1) as u64).leading_zeros();
        if bits(&a) + bits(&b) + len_bits > 120 {
            return None;
        }
        let mut v = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] += x as i128 * y as i128;
            }
        }
        let r = reduce_small(data, v)?;
        Some(r.into_iter().map(BigInt::from).collect())
    }

    fn add_same(&self, rhs: &Self, negate: bool) -> Self {
        let (num, den) = if self.den == rhs.den {
            let num = self
                .num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            (num, self.den.clone())
        } else {
            let num = self
                .num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| {
                    let l = a * &rhs.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect();
            (num, &self.den * &rhs.den)
        };
        Self::from_parts(self.order, num, den)
    }

    /// Inverse through relative norms: for σ moving `x`, `x·∏_{0<j<ord σ} σ^j(x)`
    /// is fixed by σ, so repeating until the value is rational leaves
    /// `x·P = r` with `P` a product of conjugates.
    fn inv_same(&self) -> Result<Self> {
        if Field::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let n = self.order;
        let mut x = self.clone();
        let mut acc = Self::one(n);
        let unit_list = units(n);
        while !x.is_rational() {
            let k = *unit_list.iter().find(|&&k| x.galois_same(k) != x).expect("non-rational element is moved");
            let ord = multiplicative_order(k, n);
            // ∏_{j=1}^{ord-1} σ_k^j(x) = σ_k(∏_{j=0}^{ord-2} σ_k^j(x))
            let p = x.orbit_product(k, ord - 1).galois_same(k);
            x = x.mul_same(&p);
            acc = acc.mul_same(&p);
        }
        let r = x.to_rat().expect("loop ends on a rational");
        Ok(acc.mul_same(&Self::from_rat_at(&r.inv()?, n)))
    }

    /// `∏_{j=0}^{m-1} σ_k^j(self)` by binary splitting.
    fn orbit_product(&self, k: u64, m: u64) -> Self {
        if m == 0 {
            return Self::one(self.order);
        }
        if m == 1 {
            return self.clone();
        }
        let half = m / 2;
        let a = self.orbit_product(k, half);
        let shift = pow_mod_u64(k, half, self.order);
        let mut p = a.mul_same(&a.galois_same(shift));
        if m % 2 == 1 {
            p = p.mul_same(&self.galois_same(pow_mod_u64(k, m - 1, self.order)));
        }
        p
    }

    /// Applies ζ_N ↦ ζ_N^k (requires gcd(k, N) = 1).
    fn galois_same(&self, k: u64) -> Self {
        let data = cyclo(self.order);
        let n = self.order as usize;
        let mut v = vec![BigInt::zero(); n];
        for (i, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                v[(i as u64 * k % self.order) as usize] += c;
            }
        }
        CycNum { order: self.order, num: reduce_big(&data, v), den: self.den.clone() }
    }

    /// Complex conjugation (the Galois element −1).
    pub fn conj(&self) -> Self {
        self.galois_same(self.order - 1 + (self.order == 1) as u64)
    }

    /// Smallest `M | N` with the element in ℚ(ζ_M), and the element there.
    pub fn descend(&self) -> Self {
        let mut cur = self.clone();
        'outer: loop {
            for (p, _) in super::arith::factorize(cur.order) {
                let smaller = cur.order / p;
                if let Some(x) = cur.try_descend_to(smaller) {
                    cur = x;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// The element expressed in ℚ(ζ_M), if it lies there (`M | N`).
    pub fn try_descend_to(&self, smaller: u64) -> Option<Self> {
        if !self.order.is_multiple_of(smaller) {
            return None;
        }
        if smaller == self.order {
            return Some(self.clone());
        }
        let fixed = units(self.order)
            .into_iter()
            .filter(|k| k % smaller == 1 % smaller)
            .all(|k| self.galois_same(k) == *self);
        if !fixed {
            return None;
        }
        let step = (self.order / smaller) as usize;
        let phi_small = euler_phi(smaller) as usize;
        if (phi_small.max(1) - 1) * step < self.phi() {
            // Lifted basis vectors are plain monomials.
            let num: Vec<BigInt> = (0..phi_small).map(|i| self.num[i * step].clone()).collect();
            let back = CycNum::from_parts(smaller, num, self.den.clone());
            if back.lift(self.order).ok()? == *self {
                return Some(back);
            }
        }
        // General case: solve Σ c_i·lift(ζ_M^i) = self over ℚ.
        let cols: Vec<Vec<Rat>> = (0..phi_small)
            .map(|i| CycNum::root_of_unity(smaller, i as i64).lift(self.order).expect("multiple").coeffs())
            .collect();
        let rhs = self.coeffs();
        let sol = solve_rational(&cols, &rhs)?;
        let back = CycNum::from_coeffs(smaller, &sol).ok()?;
        (back.lift(self.order).ok()? == *self).then_some(back)
    }
}

fn pow_mod_u64(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % n as u128) as u64;
        }
        b = (b as u128 * b as u128 % n as u128) as u64;
        e >>= 1;
    }
    acc
}

fn multiplicative_order(k: u64, n: u64) -> u64 {
    let mut e = 1;
    let mut x = k % n;
    while x != 1 % n {
        x = (x as u128 * k as u128 % n as u128) as u64;
        e += 1;
    }
    e
}

/// Solves `Σ x_i·cols[i] = rhs` by Gauss–Jordan elimination; `None` if
/// inconsistent.
fn solve_rational(cols: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = rhs.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Rat>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !Field::is_zero(&m[r][col])) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().ok()?;
        for c in col..=ncols {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..nrows {
            if r != row && !Field::is_zero(&m[r][col]) {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let t = m[row][c].mul(&f);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !Field::is_zero(&r[ncols])) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = CycNum::unify(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = Rat::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r}*z{}^{i}", self.order)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Field for CycNum {
    fn zero_like(&self) -> Self {
        Self::zero(self.order)
    }
    fn one_like(&self) -> Self {
        Self::one(self.order)
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Self::from_rat_at(&Rat::from_int(n), self.order)
    }
    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num.iter().skip(1).all(Zero::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = CycNum::unify(self, rhs);
        a.add_same(&b, false)
    }
    fn sub(&self, rhs: &Self) -> Self {
        let (a, b) = CycNum::unify(self, rhs);
        a.add_same(&b, true)
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = CycNum::unify(self, rhs);
        a.mul_same(&b)
    }
    fn neg(&self) -> Self {
        CycNum { order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self> {
        self.inv_same()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn weight(&self) -> usize {
        (self.num.iter().map(|c| c.bits()).sum::<u64>() + self.den.bits()) as usize
    }
}

/// 2cos(πk/n) = ζ_{2n}^k + ζ_{2n}^{−k}.
pub fn two_cos(k: i64, n: u64) -> CycNum {
    assert!(n >= 1, "n must be positive");
    let order = 2 * n;
    CycNum::root_of_unity(order, k).add(&CycNum::root_of_unity(order, -k))
}

/// 2sin(πk/n) = −ζ_4·(ζ_{2n}^k − ζ_{2n}^{−k}).
pub fn two_sin(k: i64, n: u64) -> CycNum {
    assert!(n >= 1, "n must be positive");
    let order = lcm(4, 2 * n);
    let step = (order / (2 * n)) as i64;
    let diff = CycNum::root_of_unity(order, k * step).sub(&CycNum::root_of_unity(order, -k * step));
    CycNum::root_of_unity(order, (order / 4) as i64).mul(&diff).neg()
}

/// The automorphism ζ_N ↦ ζ_N^k of ℚ(ζ_N).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaloisElement {
    order: u64,
    exponent: u64,
}

impl GaloisElement {
    pub fn new(order: u64, exponent: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Parameter("Galois order must be positive".into()));
        }
        let e = exponent.rem_euclid(order as i64) as u64;
        if gcd(e, order) != 1 && order != 1 {
            return Err(Error::Parameter(format!("{exponent} is not a unit modulo {order}")));
        }
        Ok(GaloisElement { order, exponent: e })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::FieldMismatch("Galois elements of different orders".into()));
        }
        Ok(GaloisElement { order: self.order, exponent: self.exponent * other.exponent % self.order })
    }
}

/// Applies σ to `a`, lifting `a` to σ's order first when its order divides it.
pub fn galois_apply(sigma: &GaloisElement, a: &CycNum) -> Result<CycNum> {
    let a = a.lift(sigma.order)?;
    if sigma.order == 1 {
        return Ok(a);
    }
    Ok(a.galois_same(sigma.exponent))
}

/// Exponents `k ∈ (ℤ/N)^×` whose automorphism fixes every element, with `N`
/// the lcm of the orders.
pub fn stabilizer(elements: &[CycNum]) -> (u64, Vec<u64>) {
    let xs = CycNum::unify_all(elements);
    let n = xs.first().map_or(1, CycNum::order);
    let stab = units(n).into_iter().filter(|&k| n == 1 || xs.iter().all(|x| x.galois_same(k) == *x)).collect();
    (n, stab)
}

/// `[ℚ(elements) : ℚ]` as φ(N) over the size of the stabilizer.
pub fn subfield_degree(elements: &[CycNum]) -> u64 {
    let (n, stab) = stabilizer(elements);
    euler_phi(n) / stab.len() as u64
}

/// Smallest `M` with every element inside ℚ(ζ_M).
pub fn conductor(elements: &[CycNum]) -> u64 {
    let (n, stab) = stabilizer(elements);
    let unit_list = units(n);
    divisors(n)
        .into_iter()
        .find(|&d| unit_list.iter().filter(|&&k| k % d == 1 % d).all(|k| stab.contains(k)))
        .unwrap_or(n)
}

impl serde::Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CycNum", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &self.coeffs())?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for CycNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            order: u64,
            coeffs: Vec<Rat>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.order == 0 {
            return Err(serde::de::Error::custom("order must be positive"));
        }
        CycNum::from_coeffs(raw.order, &raw.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn add_examples() {
        assert_eq!(z(3, 1).add(&z(3, 2)), CycNum::from_int(-1));
        let x = z(7, 3).add(&CycNum::from_int(2));
        assert_eq!(x.add(&CycNum::zero(1)), x);
        assert_eq!(z(4, 1).add(&z(4, 1)), CycNum::from_int(2).mul(&z(4, 1)));
    }

    #[test]
    fn mul_examples() {
        assert!(z(5, 1).mul(&z(5, 4)).is_one());
        assert_eq!(CycNum::from_int(2).inv().unwrap(), CycNum::from_rat(&Rat::new(1, 2)));
        assert_eq!(z(8, 1).mul(&z(8, 1)), z(4, 1));
        assert_eq!(CycNum::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_in_large_field() {
        let x = two_cos(1, 182);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
    }

    #[test]
    fn trig_examples() {
        assert_eq!(two_cos(1, 3), CycNum::from_int(1));
        assert_eq!(two_cos(1, 2), CycNum::from_int(0));
        assert_eq!(two_sin(1, 6), CycNum::from_int(1));
        assert_eq!(two_sin(1, 2), CycNum::from_int(2));
        assert_eq!(two_cos(2, 3), CycNum::from_int(-1));
    }

    #[test]
    fn galois_examples() {
        let s = GaloisElement::new(5, 2).unwrap();
        assert_eq!(galois_apply(&s, &z(5, 1)).unwrap(), z(5, 2));
        let half = CycNum::from_rat(&Rat::new(1, 2));
        assert_eq!(galois_apply(&s, &half).unwrap(), half);
        let c = GaloisElement::new(10, -1).unwrap();
        assert_eq!(galois_apply(&c, &two_cos(1, 5)).unwrap(), two_cos(1, 5));
        assert!(GaloisElement::new(6, 2).is_err());
        let a = GaloisElement::new(7, 3).unwrap();
        let b = GaloisElement::new(7, 5).unwrap();
        assert_eq!(a.compose(&b).unwrap().exponent(), 1);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(subfield_degree(&[CycNum::from_rat(&Rat::new(1, 2))]), 1);
        assert_eq!(subfield_degree(&[z(5, 1).add(&z(5, -1))]), 2);
        assert_eq!(subfield_degree(&[z(7, 1)]), 6);
        assert_eq!(conductor(&[z(5, 1).add(&z(5, -1)).lift(20).unwrap()]), 5);
        assert_eq!(conductor(&[z(12, 2)]), 3);
        assert_eq!(conductor(&[CycNum::from_int(3).lift(8).unwrap()]), 1);
    }

    #[test]
    fn descend_examples() {
        let x = two_cos(1, 5).lift(60).unwrap();
        let d = x.descend();
        assert_eq!(d.order(), 5);
        assert_eq!(d, x);
        let y = z(3, 1).lift(9).unwrap().descend();
        assert_eq!(y.order(), 3);
        assert_eq!(z(7, 2).descend().order(), 7);
        assert_eq!(CycNum::from_int(4).lift(12).unwrap().descend().order(), 1);
    }

    #[test]
    fn json_shape() {
        let x = z(3, 1).add(&CycNum::from_rat(&Rat::new(1, 2)));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"order":3,"coeffs":["1/2","1"]}"#);
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycNum>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }
}
