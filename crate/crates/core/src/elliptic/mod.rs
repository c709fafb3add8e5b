//! The Legendre curve `E_λ: y² = x(x − 1)(x − λ)` as a double cover of `ℙ¹`
//! branched over `{0, 1, λ, ∞}`.
//!
//! The x-coordinate of `[m]` descends to a rational map of `ℙ¹` of degree
//! `m²`; for odd primes `p` that map fixes the four branch points.

mod curve;
mod division;
mod sampling;

pub use curve::{ECPoint, LegendreCurve};
pub use division::{division_poly, mult_x_map, psi_p_map, torsion_x_poly, DivisionPoly, FlowMap, RationalMap, P1};
pub use sampling::{check_flow, check_torsion_roots, group_orders, is_torsion_x, point_order, roots, FlowCheck, TorsionCheck};

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::exactalg::{Field, Fp, Fp2, Poly, Rat};

    fn q(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn over_fp(lambda: i64, p: u64) -> LegendreCurve<Fp> {
        LegendreCurve::new(Fp::new(lambda, p)).unwrap()
    }

    fn over_fp2(lambda: i64, p: u64) -> LegendreCurve<Fp2> {
        LegendreCurve::new(Fp2::from_base(Fp::new(lambda, p))).unwrap()
    }

    #[test]
    fn singular_lambda_rejected() {
        assert!(LegendreCurve::new(q(0)).is_err());
        assert!(LegendreCurve::new(q(1)).is_err());
    }

    #[test]
    fn two_torsion_and_identity() {
        let e = LegendreCurve::new(q(2)).unwrap();
        let t = e.point(q(0), q(0)).unwrap();
        assert!(e.add(&t, &t).unwrap().is_infinity());
        assert_eq!(e.add(&t, &ECPoint::Infinity).unwrap(), t);
        assert!(e.point(q(3), q(1)).is_err());
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let e = over_fp(5, 101);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = e.random_point(&mut rng);
            let q = e.random_point(&mut rng);
            let three = e.add(&e.add(&p, &p).unwrap(), &p).unwrap();
            assert_eq!(e.scalar_mul(3, &p).unwrap(), three);
            assert!(e.add(&p, &e.negate(&p)).unwrap().is_infinity());
            let r = e.random_point(&mut rng);
            let lhs = e.add(&e.add(&p, &q).unwrap(), &r).unwrap();
            let rhs = e.add(&p, &e.add(&q, &r).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn psi3_for_lambda_two() {
        let e = LegendreCurve::new(q(2)).unwrap();
        let psi3 = division_poly(&e, 3).unwrap();
        assert_eq!(psi3.poly, Poly::from_i64s(&q(0), &[-4, 0, 12, -12, 3]));
        assert_eq!(division_poly(&e, 1).unwrap().poly, Poly::one(&q(0)));
        let psi2 = division_poly(&e, 2).unwrap();
        assert_eq!(psi2.squared(&e), e.cubic().scale(&q(4)));
    }

    #[test]
    fn odd_division_poly_degrees() {
        let e = LegendreCurve::new(Rat::new(-3, 7)).unwrap();
        for m in [3u32, 5, 7, 9] {
            assert_eq!(division_poly(&e, m).unwrap().poly.degree(), Some(((m * m - 1) / 2) as usize));
        }
    }

    #[test]
    fn mult_maps_degrees_over_q() {
        let e = LegendreCurve::new(q(2)).unwrap();
        assert_eq!(mult_x_map(&e, 1).unwrap(), RationalMap::identity(&q(0)));
        for m in 2..=5u32 {
            assert_eq!(mult_x_map(&e, m).unwrap().degree(), (m * m) as usize);
        }
        let two = mult_x_map(&e, 2).unwrap();
        for b in e.branch_points() {
            assert_eq!(two.eval(&P1::Finite(b)), P1::Infinity);
        }
        assert_eq!(psi_p_map(&e, 3).unwrap().degree(), 9);
        assert!(psi_p_map(&e, 4).is_err());
    }

    #[test]
    fn mult_map_matches_points() {
        let e = over_fp(3, 101);
        let g = mult_x_map(&e, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = e.random_point(&mut rng);
            let lhs = g.eval(&P1::Finite(*p.x().unwrap()));
            let rhs = match e.scalar_mul(3, &p).unwrap() {
                ECPoint::Infinity => P1::Infinity,
                ECPoint::Affine { x, .. } => P1::Finite(x),
            };
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn composition_law() {
        let e = over_fp(7, 103);
        let (m2, m3, m6) = (mult_x_map(&e, 2).unwrap(), mult_x_map(&e, 3).unwrap(), mult_x_map(&e, 6).unwrap());
        assert_eq!(m2.compose(&m3).unwrap(), m6);
        assert_eq!(m3.compose(&m2).unwrap(), m6);
    }

    #[test]
    fn flow_over_fp2() {
        let e = over_fp2(6, 13);
        let (_, report) = check_flow(&e, 5, 100, 3).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.degree, 25);
    }

    #[test]
    fn characteristic_p_is_flagged() {
        let e = over_fp(3, 5);
        let g = psi_p_map(&e, 5).unwrap();
        assert!(g.characteristic_is_p);
        assert!(!g.is_separable());
        assert!(g.fixes_branch_points(&e));
    }

    #[test]
    fn torsion_polys() {
        let e = LegendreCurve::new(q(2)).unwrap();
        assert_eq!(torsion_x_poly(&e, 2).unwrap(), e.cubic());
        assert_eq!(torsion_x_poly(&e, 3).unwrap(), division_poly(&e, 3).unwrap().poly.monic());
        for m in 2..=9 {
            let mut lifted = 0;
            for p in [29, 31, 37, 41, 43, 53, 59] {
                let check = check_torsion_roots(&over_fp2(4, p), m, 0).unwrap();
                assert!(check.passed(), "{check:?}");
                lifted += check.lifted;
            }
            assert!(lifted > 0, "m = {m}");
        }
    }

    #[test]
    fn torsion_orders_over_fp() {
        let e = over_fp(2, 31);
        assert_eq!(is_torsion_x(&e, &Fp::new(0, 31), 10).unwrap(), Some(2));
        let r = roots(&division_poly(&e, 3).unwrap().poly, 0).unwrap();
        for x in r {
            assert_eq!(is_torsion_x(&e, &x, 3).unwrap(), Some(3));
        }
        let (_, n2) = group_orders(&e);
        assert!(is_torsion_x(&e, &Fp::new(5, 31), n2 as u64).unwrap().is_some());
    }

    #[test]
    fn roots_are_roots() {
        let f = Fp::new(0, 101);
        let poly = Poly::linear_root(&Fp::new(3, 101)).mul(&Poly::linear_root(&Fp::new(50, 101)));
        let poly = poly.mul(&Poly::from_i64s(&f, &[2, 0, 1]));
        let rs = roots(&poly, 5).unwrap();
        assert!(rs.contains(&Fp::new(3, 101)) && rs.contains(&Fp::new(50, 101)));
        assert!(rs.iter().all(|r| poly.eval(r).is_zero()));
    }
}
