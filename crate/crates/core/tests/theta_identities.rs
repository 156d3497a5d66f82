use ellsurf::elliptic::{jacobi, EllipticModulus};
use ellsurf::sg::{discrete_sample, DiscreteParams, Family};
use ellsurf::theta::{theta_j, theta_j_prime, weierstrass_p, Theta, ThetaParams, WeierstrassConstants};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

type C = Complex<f64>;

const I: C = C { re: 0.0, im: 1.0 };

fn th(j: Theta, v: C, p: &ThetaParams<f64>) -> C {
    theta_j(j, v, p).unwrap()
}

/// `|lhs − rhs|` relative to the largest term magnitude.
fn rel(lhs: C, rhs: C, terms: &[C]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(lhs.norm().max(rhs.norm()), f64::max);
    (lhs - rhs).norm() / scale.max(1e-300)
}

fn rand_c(rng: &mut ChaCha8Rng, re: f64, im: f64) -> C {
    C::new(rng.gen_range(-re..re), rng.gen_range(-im..im))
}

#[test]
fn product_addition_formulas() {
    use Theta::*;
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        let p = ThetaParams::for_taup(&md);
        let p2 = ThetaParams::for_two_taup(&md);
        let t = |j, v| th(j, v, &p);
        let tt = |j, v| th(j, v, &p2);
        let z = C::new(0.0, 0.0);
        for _ in 0..100 {
            let x = rand_c(&mut rng, 1.0, 0.3);
            let y = rand_c(&mut rng, 1.0, 0.3);
            for s in [1.0, -1.0] {
                let (a, b) = (x + y * s, x - y * s);
                let checks = [
                    (
                        t(T3, a) * t(T0, b) * t(T3, z) * t(T0, z),
                        [t(T3, x) * t(T0, x) * t(T3, y) * t(T0, y), -t(T1, x) * t(T2, x) * t(T1, y) * t(T2, y) * s],
                    ),
                    (
                        t(T1, a) * t(T2, b) * t(T3, z) * t(T0, z),
                        [t(T1, x) * t(T2, x) * t(T3, y) * t(T0, y), t(T3, x) * t(T0, x) * t(T1, y) * t(T2, y) * s],
                    ),
                    (
                        t(T1, a) * t(T3, b) * t(T2, z) * t(T0, z),
                        [t(T1, x) * t(T3, x) * t(T2, y) * t(T0, y), t(T2, x) * t(T0, x) * t(T1, y) * t(T3, y) * s],
                    ),
                    (
                        t(T2, a) * t(T0, b) * t(T2, z) * t(T0, z),
                        [t(T2, x) * t(T0, x) * t(T2, y) * t(T0, y), -t(T1, x) * t(T3, x) * t(T1, y) * t(T3, y) * s],
                    ),
                ];
                for (i, (lhs, terms)) in checks.iter().enumerate() {
                    let r = rel(*lhs, terms[0] + terms[1], terms);
                    assert!(r < 1e-10, "k={k} s={s} identity {i}: {r:e}");
                }
            }
            let (a, b) = (x + y, x - y);
            let (x2, y2) = (x * 2.0, y * 2.0);
            let checks = [
                (t(T3, a) * t(T3, b), [tt(T3, x2) * tt(T3, y2), tt(T2, x2) * tt(T2, y2)]),
                (t(T0, a) * t(T0, b), [tt(T3, x2) * tt(T3, y2), -tt(T2, x2) * tt(T2, y2)]),
                (t(T2, a) * t(T2, b), [tt(T2, x2) * tt(T3, y2), tt(T3, x2) * tt(T2, y2)]),
                (t(T1, a) * t(T1, b), [tt(T3, x2) * tt(T2, y2), -tt(T2, x2) * tt(T3, y2)]),
            ];
            for (i, (lhs, terms)) in checks.iter().enumerate() {
                let r = rel(*lhs, terms[0] + terms[1], terms);
                assert!(r < 1e-10, "k={k} doubled-lattice identity {i}: {r:e}");
            }
        }
    }
}

/// The six `±` and four product relations between the `τ'` and `2τ'` lattices
/// at the shifted arguments used by the tau functions.
fn shifted_argument_relations(md: &EllipticModulus<f64>, vm: C, shift: C, iz: C) -> Vec<f64> {
    use Theta::*;
    let p = ThetaParams::for_taup(md);
    let p2 = ThetaParams::for_two_taup(md);
    let t = |j, v| th(j, v, &p);
    let tt = |j, v| th(j, v, &p2);
    let zero = C::new(0.0, 0.0);
    let vz = vm + iz;
    let (vp, vn) = (vz + shift, vz - shift);
    let mut out = Vec::new();
    for v in [vp, vn] {
        let (a, b) = (tt(T3, v) * tt(T3, v), tt(T2, v) * tt(T2, v));
        out.push(rel(t(T3, v) * t(T3, zero), a + b, &[a, b]));
        out.push(rel(t(T0, v) * t(T0, zero), a - b, &[a, b]));
        let c = tt(T2, v) * tt(T3, v) * 2.0;
        out.push(rel(t(T2, v) * t(T2, zero), c, &[c]));
    }
    let (a, b) = (tt(T3, vp) * tt(T3, vn), tt(T2, vp) * tt(T2, vn));
    out.push(rel(t(T3, vz) * t(T3, shift), a + b, &[a, b]));
    out.push(rel(t(T0, vz) * t(T0, shift), a - b, &[a, b]));
    let (c, d) = (tt(T2, vp) * tt(T3, vn), tt(T3, vp) * tt(T2, vn));
    out.push(rel(t(T2, vz) * t(T2, shift), c + d, &[c, d]));
    out.push(rel(t(T1, vz) * t(T1, shift), d - c, &[c, d]));
    out
}

#[test]
fn shifted_argument_relations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        for _ in 0..50 {
            let psi: f64 = rng.gen_range(-2.0 * md.K..2.0 * md.K);
            let lambda: f64 = rng.gen_range(-1.0..1.0);
            let z: f64 = rng.gen_range(-0.5..0.5);
            let vm = C::new(psi - md.K, 0.0) / (I * 2.0 * md.Kp);
            let kkp = k * md.Kp;
            let dn_form = shifted_argument_relations(&md, vm, C::new(lambda / kkp, 0.0), I * z / kkp);
            let cn_vm = vm + 0.5 + I * md.taup_im;
            let cn_form = shifted_argument_relations(&md, cn_vm, C::new(lambda / md.Kp, 0.0), I * z / md.Kp);
            assert_eq!(dn_form.len(), 10);
            for (i, r) in dn_form.iter().chain(&cn_form).enumerate() {
                assert!(*r < 1e-10, "k={k} relation {}: {r:e}", i % 10);
            }
        }
    }
}

#[test]
fn jacobi_from_theta_quotients() {
    use Theta::*;
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        let p = ThetaParams::for_taup(&md);
        let zero = C::new(0.0, 0.0);
        let (t0, t2, t3) = (th(T0, zero, &p), th(T2, zero, &p), th(T3, zero, &p));
        let kk = t0 / t3;
        assert!((kk * kk - k).norm() < 1e-13);
        for _ in 0..50 {
            let psi: f64 = rng.gen_range(-6.0..6.0);
            let v = C::new(psi - md.K, 0.0) / (I * 2.0 * md.Kp);
            let j = jacobi(psi, &md);
            let d = th(T3, v, &p);
            assert!((th(T0, v, &p) * t3 / (d * t0) - j.sn).norm() < 1e-11);
            assert!((th(T1, v, &p) * t2 / (d * t0) - I * j.cn).norm() < 1e-11);
            assert!((th(T2, v, &p) * t2 / (d * t3) - j.dn).norm() < 1e-11);
        }
    }
}

#[test]
fn odd_theta_derivative_at_origin() {
    use Theta::*;
    let md = EllipticModulus::new(0.7).unwrap();
    let p = ThetaParams::for_taup(&md);
    let zero = C::new(0.0, 0.0);
    let lhs = theta_j_prime(T1, zero, &p).unwrap();
    let rhs = th(T0, zero, &p) * th(T2, zero, &p) * th(T3, zero, &p) * PI;
    assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    for j in [T0, T2, T3] {
        assert!(theta_j_prime(j, zero, &p).unwrap().norm() < 1e-13);
    }
}

#[test]
fn modular_transformation() {
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        let pp = ThetaParams::for_taup(&md);
        let p = ThetaParams::for_tau(&md);
        let tau = p.tau();
        for _ in 0..50 {
            let v = rand_c(&mut rng, 1.0, 0.4);
            let lhs = th(Theta::T3, v / tau, &pp);
            let rhs = (I * PI * (v * v / tau - 0.25)).exp() * tau.sqrt() * th(Theta::T3, v, &p);
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "k={k} v={v}");
        }
    }
}

/// `∫ f` over the segment `[a, b]` by composite Simpson.
fn simpson(f: impl Fn(C) -> C, a: C, b: C, panels: usize) -> C {
    let h = (b - a) / (2 * panels) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..2 * panels {
        acc += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `ζ(ω)` from the odd theta series with complex nome for lattice ratio `ω'/ω`.
fn zeta_omega_series(omega: f64, ratio: C) -> C {
    let q = (I * PI * ratio).exp();
    let (mut d1, mut d3) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    for n in 0..40 {
        let odd = (2 * n + 1) as f64;
        let e = (n as f64 + 0.5).powi(2);
        let term = q.powf(e) * if n % 2 == 0 { 1.0 } else { -1.0 };
        d1 += term * odd;
        d3 += term * odd.powi(3);
    }
    // θ₁'(0) = 2π Σ d1, θ₁'''(0) = −2π³ Σ d3, ζ(ω) = −π² θ₁'''(0) / (12 ω θ₁'(0)).
    d3 * PI * PI / (d1 * 12.0 * omega)
}

#[test]
fn weierstrass_zeta_constants() {
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        let wc = WeierstrassConstants::new(&md);
        let zeta_omega = md.Kp * wc.zeta_omega_over_omega;
        let alt = WeierstrassConstants::zeta_omega_over_omega_alt(&md);
        assert!((alt - wc.zeta_omega_over_omega).abs() < 1e-12);

        let ratio = wc.omegap / wc.omega;
        assert!((ratio - (C::new(0.5, 0.0) + I * md.taup_im * 0.5)).norm() < 1e-15);
        let series = zeta_omega_series(wc.omega, ratio);
        assert!((series - zeta_omega).norm() < 1e-10, "k={k}: {series} vs {zeta_omega}");

        let wp = |w: C| weierstrass_p(w, &md).unwrap();
        let q = simpson(wp, C::new(-md.Kp / 2.0, 0.0), -wc.omegap, 4000);
        let closed = -I * md.E - I * md.K / 2.0 * (wc.e1 - 1.0) - k;
        assert!((q - closed).norm() < 1e-10, "k={k}: {q} vs {closed}");

        // ζ(ω') = ζ(ω)·ω'/ω − πi/(2ω), and ζ(ω') − ζ(ω/2) = ∫ ℘ over the segment.
        let zeta_half = zeta_omega * ratio - I * PI / (2.0 * md.Kp) - q;
        let lhs = zeta_half - zeta_omega / 2.0;
        assert!((lhs - k).norm() < 1e-10, "k={k}: {lhs}");

        let chain = k + I * md.E + I * md.K / 2.0 * (wc.e1 - 1.0) + I * md.taup_im / 2.0 * zeta_omega - I * PI / (2.0 * md.Kp);
        assert!((chain - k).norm() < 1e-10);

        let wp_half = wp(C::new(md.Kp / 2.0, 0.0));
        let lhs = wp_half + series / md.Kp;
        assert!((lhs - 2.0 * md.Ep / md.Kp).norm() < 1e-10, "k={k}: {lhs}");
    }
}

#[test]
fn cn_quarter_angle_is_theta_quotient() {
    use Theta::*;
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    for k in [0.3f64, 0.6, 0.9] {
        let md = EllipticModulus::<f64>::new(k).unwrap();
        let p = ThetaParams::for_tau(&md);
        let dp = DiscreteParams::new(md, Family::Cn, 0.137, -0.071).with_phase(rng.gen_range(-0.5..0.5));
        for _ in 0..50 {
            let (m, n) = (rng.gen_range(-20..20), rng.gen_range(-20..20));
            let xi = C::new(dp.xi(m, n), 0.0);
            let f = th(T3, xi, &p) * th(T1, xi, &p);
            let g = th(T0, xi, &p) * th(T2, xi, &p);
            if f.norm() < 1e-6 {
                continue;
            }
            let (c, s) = discrete_sample(&dp, m, n).quarter();
            let tan = s / c;
            assert!((g / f * tan - 1.0).norm() < 1e-9, "k={k} ξ={xi}");
        }
    }
}
