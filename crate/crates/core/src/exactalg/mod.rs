//! Exact scalar arithmetic: ℚ, cyclotomic fields ℚ(ζ_N), prime fields 𝔽_p and
//! 𝔽_{p²}, and dense polynomials over any of them.

pub mod arith;
mod cyclotomic;
mod field;
mod poly;
mod rat;

pub use cyclotomic::{
    conductor, cyclotomic_polynomial, galois_apply, stabilizer, subfield_degree, two_cos, two_sin, CycNum,
    GaloisElement,
};
pub use field::{smallest_nonresidue, FiniteField, Field, Fp, Fp2};
pub use poly::Poly;
pub use rat::Rat;
