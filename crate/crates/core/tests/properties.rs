use ellsurf::elliptic::{jacobi, sn2_integral, EllipticModulus};
use ellsurf::frames::{propagate, transfer_su2, Sign, Su2, Variant};
use ellsurf::ksurf::{compat_residual, k_edge_residuals, k_periodicity, k_point, Corners, KParams, PeriodicityCase};
use ellsurf::sg::{
    discrete_sample, discrete_sg_residual, semi_residuals, semi_sg_coeffs, DiscreteParams, Family, HalfAngle, SemiDiscreteParams,
};
use ellsurf::surfaces::{b_point, gamma_point, SurfaceParams};
use ellsurf::tau::{gamma_from_tau, TauContext};
use ellsurf::theta::{theta_j, Theta, ThetaParams};
use ellsurf::verify::{jacobi_addition, jacobi_step_identities};
use num_complex::Complex;
use proptest::prelude::*;

fn modulus(k: f64) -> EllipticModulus<f64> {
    EllipticModulus::new(k).unwrap()
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Dn), Just(Family::Cn)]
}

/// `γ` with `|sn γ|` bounded away from zero.
fn step() -> impl Strategy<Value = f64> {
    prop_oneof![0.2f64..1.4, -1.4f64..-0.2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_quadratic_relations(k in 0.01f64..0.999, u in -30.0f64..30.0) {
        let md = modulus(k);
        let j = jacobi(u, &md);
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-13);
        prop_assert!((k * k * j.sn * j.sn + j.dn * j.dn - 1.0).abs() < 1e-13);
        prop_assert!(md.legendre_residual().abs() < 1e-12);
    }

    #[test]
    fn jacobi_neighbour_and_addition_identities(k in 0.05f64..0.95, gamma in -4.0f64..4.0, psi in -8.0f64..8.0) {
        let md = modulus(k);
        for r in jacobi_step_identities(&md, gamma, psi) {
            prop_assert!(r.abs() < 1e-11);
        }
        for r in jacobi_addition(&md, gamma, psi) {
            prop_assert!(r.abs() < 1e-11);
        }
    }

    #[test]
    fn sn2_integral_is_odd_and_quasi_periodic(k in 0.05f64..0.95, u in -5.0f64..5.0) {
        let md = modulus(k);
        prop_assert!((sn2_integral(-u, &md) + sn2_integral(u, &md)).abs() < 1e-12);
        let period = sn2_integral(2.0 * md.K, &md);
        prop_assert!((sn2_integral(u + 2.0 * md.K, &md) - sn2_integral(u, &md) - period).abs() < 1e-11);
    }

    #[test]
    fn theta_quasi_periodicity(k in 0.1f64..0.95, re in -1.0f64..1.0, im in -0.5f64..0.5) {
        let md = modulus(k);
        let p = ThetaParams::for_taup(&md);
        let v = Complex::new(re, im);
        let tau = p.tau();
        let i = Complex::new(0.0, 1.0);
        let base = theta_j(Theta::T3, v, &p).unwrap();
        let shifted = theta_j(Theta::T3, v + 1.0, &p).unwrap();
        prop_assert!((shifted - base).norm() < 1e-12 * base.norm());
        let moved = theta_j(Theta::T3, v + tau, &p).unwrap();
        let factor = (-i * std::f64::consts::PI * (tau + v * 2.0)).exp();
        prop_assert!((moved - factor * base).norm() < 1e-11 * moved.norm());
    }

    #[test]
    fn half_angles_stay_normalized(x in -50.0f64..50.0, c in -3.0f64..3.0, s in -3.0f64..3.0) {
        prop_assert!(HalfAngle::from_half(x).norm_residual() < 1e-15);
        prop_assume!(c.hypot(s) > 1e-3);
        let h = HalfAngle::new(c, s).renormalized();
        prop_assert!(h.norm_residual() < 1e-15);
        let q = h.exp_i_quarter();
        prop_assert!((q * q - h.exp_i_half()).norm() < 1e-14);
    }

    #[test]
    fn transfer_matrices_are_special_unitary(a in -6.0f64..6.0, b in -6.0f64..6.0, nu in -3.0f64..3.0, plus in any::<bool>(), minus_k in any::<bool>()) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let variant = if minus_k { Variant::MinusK } else { Variant::PlusK };
        let l = transfer_su2(&HalfAngle::from_half(a), &HalfAngle::from_half(b), nu, variant, sign);
        prop_assert!(l.unitarity_residual() < 1e-13);
        prop_assert!((l.matrix().det() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn propagated_frames_stay_orthonormal(seed in prop::collection::vec(-4.0f64..4.0, 2..40), nu in -3.0f64..3.0) {
        let samples: Vec<_> = seed.iter().map(|&x| HalfAngle::from_half(x)).collect();
        for f in propagate(Su2::identity(), &samples, nu, Variant::PlusK, Sign::Plus) {
            prop_assert!(f.orthonormality_residual() < 1e-12);
        }
    }

    #[test]
    fn semi_discrete_solutions(k in 0.1f64..0.95, fam in family(), omega in 0.03f64..0.22, a in -1.0f64..1.0, m in -40i64..40, t in -3.0f64..3.0) {
        let p = SemiDiscreteParams::new(modulus(k), fam, omega, a);
        let c = semi_sg_coeffs(&p).unwrap();
        let scale = 1.0 + c.sg.abs() + c.mkdv.abs();
        let (r1, r2) = semi_residuals(&p, m, t).unwrap();
        prop_assert!(r1.abs() < 1e-11 * scale && r2.abs() < 1e-11 * scale, "{r1} {r2}");
    }

    #[test]
    fn discrete_solutions(k in 0.1f64..0.95, fam in family(), omega in 0.03f64..0.22, pp in 0.03f64..0.22, xi0 in -0.5f64..0.5, m in -40i64..40, n in -40i64..40) {
        let p = DiscreteParams::new(modulus(k), fam, omega, pp).with_phase(xi0);
        prop_assert!(discrete_sg_residual(&p, m, n).unwrap().abs() < 1e-9);
    }

    #[test]
    fn surface_edges_speed_and_torsion(k in 0.1f64..0.95, fam in family(), twisted in any::<bool>(), gamma in step(), beta in -2.0f64..2.0, m in -30i64..30, t in -2.0f64..2.0) {
        let p = SurfaceParams::with_admissible_sign(modulus(k), fam, twisted, gamma, beta).unwrap();
        let (g0, g1) = (gamma_point(&p, m, t), gamma_point(&p, m + 1, t));
        let (b0, b1) = (b_point(&p, m, t), b_point(&p, m + 1, t));
        prop_assert!((g1 - g0 - b1.cross(&b0) * p.epsilon()).norm() < 1e-10);
        prop_assert!(((g1 - g0).norm() - p.segment_length()).abs() < 1e-10);
        prop_assert!((b0.dot(&b1) - p.torsion_cos()).abs() < 1e-12);
        prop_assert!((b0.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn wrong_frame_sign_is_rejected(k in 0.1f64..0.95, fam in family(), twisted in any::<bool>(), gamma in step()) {
        let md = modulus(k);
        let good = SurfaceParams::with_admissible_sign(md, fam, twisted, gamma, 1.0).unwrap();
        let bad = SurfaceParams::new(md, fam, twisted, gamma, 1.0, good.frame_sign.flip());
        prop_assert!(bad.is_err());
    }

    #[test]
    fn k_surface_edges_and_normals(k in 0.1f64..0.95, fam in family(), gamma in step(), delta in step(), m in -40i64..40, n in -40i64..40) {
        let p = KParams::new(modulus(k), fam, gamma, delta).unwrap();
        let (_, nv) = k_point(&p, m, n);
        prop_assert!((nv.norm() - 1.0).abs() < 1e-13);
        let (r1, r2) = k_edge_residuals(&p, m, n);
        prop_assert!(r1 < 1e-10 && r2 < 1e-10);
    }

    #[test]
    fn k_surface_compatibility(k in 0.1f64..0.95, fam in family(), gamma in step(), delta in step(), m in -30i64..30, n in -30i64..30) {
        let p = KParams::new(modulus(k), fam, gamma, delta).unwrap();
        let (t1, t2) = p.tan_half_torsions().unwrap();
        let four_k = 4.0 * p.modulus.K;
        let dp = DiscreteParams::new(p.modulus, fam, gamma / four_k, delta / four_k);
        let at = |i, j| discrete_sample(&dp, i, j);
        let w = Corners { a: at(m + 1, n + 1), b: at(m, n), c: at(m + 1, n), d: at(m, n + 1) };
        prop_assert!(compat_residual(&w, 2.0 * t1.atan(), 2.0 * t2.atan(), (Sign::Plus, Sign::Plus)) < 1e-11);
        prop_assert!(compat_residual(&w, 2.0 * t1.atan(), -2.0 * t2.atan(), (Sign::Minus, Sign::Plus)) < 1e-11);
    }

    #[test]
    fn periodicity_cases_close(idx in 0usize..6, p in 3u32..9) {
        let r = k_periodicity::<f64>(PeriodicityCase::ALL[idx], p, 6).unwrap();
        prop_assert!(r.max_defect < 1e-9, "{:?}", r.defects);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tau_assembly_matches_closed_form(k in 0.2f64..0.95, fam in family(), twisted in any::<bool>(), gamma in step(), m in -15i64..15, t in -1.0f64..1.0) {
        let p = SurfaceParams::with_admissible_sign(modulus(k), fam, twisted, gamma, 1.3).unwrap();
        let (g, b) = gamma_from_tau(&TauContext::from_surface(&p), m, t);
        prop_assert!((g - gamma_point(&p, m, t)).norm() < 1e-8);
        prop_assert!((b - b_point(&p, m, t)).norm() < 1e-8);
    }

    #[test]
    fn single_precision_tracks_double(k in 0.1f64..0.9, u in -6.0f64..6.0) {
        let j64 = jacobi(u, &modulus(k));
        let j32 = jacobi(u as f32, &EllipticModulus::<f32>::new(k as f32).unwrap());
        prop_assert!((f64::from(j32.sn) - j64.sn).abs() < 1e-4);
        prop_assert!((f64::from(j32.cn) - j64.cn).abs() < 1e-4);
        prop_assert!((f64::from(j32.dn) - j64.dn).abs() < 1e-4);
    }
}
