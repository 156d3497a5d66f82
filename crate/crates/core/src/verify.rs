//! Invariant suites over the whole toolkit, reported as worst-case residuals.
//!
//! Every suite is evaluated in `f64`.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elliptic::{jacobi, EllipticModulus};
use crate::error::Result;
use crate::frames::Sign;
use crate::ksurf::{angle_identity_residual, compat_residual, k_periodicity, Corners, KGrid, KParams, PeriodicityCase};
use crate::linalg::Vec3;
use crate::sg::{
    discrete_gamma_hat, discrete_sample, discrete_sg_residual, discrete_sg_residual_corners, semi_residuals, semi_residuals_from,
    semi_sample, semi_sg_coeffs, DiscreteParams, Family, HalfAngle, SemiDiscreteParams,
};
use crate::surfaces::{
    b_point, closure_period, flow_components, flow_prediction, flow_velocity, gamma_point, kaleidocycle_params, SurfaceParams,
};
use crate::tau::{bilinear_checks, gamma_from_tau, TauContext};
use crate::theta::{jacobi_complex, theta_j, weierstrass_p, Theta, ThetaParams, WeierstrassConstants};

type C = Complex<f64>;

const I: C = C { re: 0.0, im: 1.0 };

/// Which side of the tolerance a suite must land on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Worst residual must not exceed the tolerance.
    Upper,
    /// Smallest residual must exceed the tolerance (sensitivity checks).
    Lower,
}

/// Groups of suites, one per acceptance area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    SpecialFunctions,
    Identities,
    SineGordon,
    SurfaceGeometry,
    IsoperimetricFlow,
    TauFunctions,
    Kaleidocycle,
    KSurface,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::SpecialFunctions,
        Group::Identities,
        Group::SineGordon,
        Group::SurfaceGeometry,
        Group::IsoperimetricFlow,
        Group::TauFunctions,
        Group::Kaleidocycle,
        Group::KSurface,
    ];
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub group: Group,
    /// Worst observed value: the maximum for upper bounds, the minimum for lower bounds.
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub samples: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Sampling controls shared by all suites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Moduli swept by the deterministic suites.
    pub moduli: Vec<f64>,
    /// Random evaluation points per identity.
    pub points: usize,
    /// Half-width of `m` windows and side of square grids.
    pub grid: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 20240601, moduli: vec![0.3, 0.6, 0.9, 0.99], points: 100, grid: 20 }
    }
}

struct Tally {
    name: &'static str,
    group: Group,
    tol: f64,
    bound: Bound,
    worst: f64,
    samples: usize,
    error: Option<String>,
}

impl Tally {
    fn upper(group: Group, name: &'static str, tol: f64) -> Self {
        Self { name, group, tol, bound: Bound::Upper, worst: 0.0, samples: 0, error: None }
    }

    fn lower(group: Group, name: &'static str, tol: f64) -> Self {
        Self { name, group, tol, bound: Bound::Lower, worst: f64::INFINITY, samples: 0, error: None }
    }

    fn add(&mut self, r: f64) {
        let r = r.abs();
        self.samples += 1;
        self.worst = match (self.bound, r.is_nan()) {
            (Bound::Upper, true) => f64::INFINITY,
            (Bound::Lower, true) => 0.0,
            (Bound::Upper, false) => self.worst.max(r),
            (Bound::Lower, false) => self.worst.min(r),
        };
    }

    fn add_result(&mut self, r: Result<f64>) {
        match r {
            Ok(v) => self.add(v),
            Err(e) => {
                self.add(f64::NAN);
                self.error.get_or_insert_with(|| e.to_string());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        let pass = self.error.is_none()
            && self.samples > 0
            && match self.bound {
                Bound::Upper => self.worst <= self.tol,
                Bound::Lower => self.worst > self.tol,
            };
        SuiteResult {
            name: self.name.into(),
            group: self.group,
            max_residual: self.worst,
            tolerance: self.tol,
            bound: self.bound,
            samples: self.samples,
            pass,
            error: self.error,
        }
    }
}

/// A full verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }
}

/// Runs every group.
pub fn run_all(cfg: &VerifyConfig) -> Report {
    Report { suites: Group::ALL.iter().flat_map(|g| run_group(*g, cfg)).collect() }
}

/// Runs one group of suites.
pub fn run_group(group: Group, cfg: &VerifyConfig) -> Vec<SuiteResult> {
    let suites = match group {
        Group::SpecialFunctions => special_functions(cfg),
        Group::Identities => identities(cfg),
        Group::SineGordon => sine_gordon(cfg),
        Group::SurfaceGeometry => surface_geometry(cfg),
        Group::IsoperimetricFlow => isoperimetric_flow(cfg),
        Group::TauFunctions => tau_functions(cfg),
        Group::Kaleidocycle => kaleidocycle(cfg),
        Group::KSurface => k_surface(cfg),
    };
    suites.into_iter().map(Tally::finish).collect()
}

fn modulus(k: f64) -> Result<EllipticModulus<f64>> {
    EllipticModulus::new(k)
}

fn rng_for(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    rng
}

fn rel(lhs: C, rhs: C, terms: &[C]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(lhs.norm().max(rhs.norm()), f64::max);
    (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE)
}

fn special_functions(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::SpecialFunctions;
    let mut legendre = Tally::upper(g, "elliptic.legendre_relation", 1e-12);
    for k in [0.3, 0.6, 0.9, 0.99] {
        legendre.add_result(modulus(k).map(|m| m.legendre_residual()));
    }
    let mut quotients = Tally::upper(g, "elliptic.jacobi_vs_theta_quotients", 1e-11);
    for &k in &cfg.moduli {
        let md = match modulus(k) {
            Ok(md) => md,
            Err(e) => {
                quotients.add_result(Err(e));
                continue;
            }
        };
        for i in 0..100 {
            let u = -3.0 * md.K + 6.0 * md.K * f64::from(i) / 99.0;
            let j = jacobi(u, &md);
            quotients.add_result(
                jacobi_complex(C::new(u, 0.0), &md).map(|z| (z.sn - j.sn).norm().max((z.cn - j.cn).norm()).max((z.dn - j.dn).norm())),
            );
        }
    }
    vec![legendre, quotients]
}

fn theta_fn(p: ThetaParams<f64>) -> impl Fn(Theta, C) -> Result<C> {
    move |j, v| theta_j(j, v, &p)
}

fn product_addition(md: &EllipticModulus<f64>, x: C, y: C) -> Result<f64> {
    use Theta::*;
    let t = theta_fn(ThetaParams::for_taup(md));
    let z = C::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for s in [1.0, -1.0] {
        let (a, b) = (x + y * s, x - y * s);
        let rows = [
            (
                t(T3, a)? * t(T0, b)? * t(T3, z)? * t(T0, z)?,
                t(T3, x)? * t(T0, x)? * t(T3, y)? * t(T0, y)?,
                -t(T1, x)? * t(T2, x)? * t(T1, y)? * t(T2, y)? * s,
            ),
            (
                t(T1, a)? * t(T2, b)? * t(T3, z)? * t(T0, z)?,
                t(T1, x)? * t(T2, x)? * t(T3, y)? * t(T0, y)?,
                t(T3, x)? * t(T0, x)? * t(T1, y)? * t(T2, y)? * s,
            ),
            (
                t(T1, a)? * t(T3, b)? * t(T2, z)? * t(T0, z)?,
                t(T1, x)? * t(T3, x)? * t(T2, y)? * t(T0, y)?,
                t(T2, x)? * t(T0, x)? * t(T1, y)? * t(T3, y)? * s,
            ),
            (
                t(T2, a)? * t(T0, b)? * t(T2, z)? * t(T0, z)?,
                t(T2, x)? * t(T0, x)? * t(T2, y)? * t(T0, y)?,
                -t(T1, x)? * t(T3, x)? * t(T1, y)? * t(T3, y)? * s,
            ),
        ];
        for (lhs, u, v) in rows {
            worst = worst.max(rel(lhs, u + v, &[u, v]));
        }
    }
    Ok(worst)
}

fn doubled_lattice(md: &EllipticModulus<f64>, x: C, y: C) -> Result<f64> {
    use Theta::*;
    let t = theta_fn(ThetaParams::for_taup(md));
    let tt = theta_fn(ThetaParams::for_two_taup(md));
    let (a, b, x2, y2) = (x + y, x - y, x * 2.0, y * 2.0);
    let rows = [
        (t(T3, a)? * t(T3, b)?, tt(T3, x2)? * tt(T3, y2)?, tt(T2, x2)? * tt(T2, y2)?),
        (t(T0, a)? * t(T0, b)?, tt(T3, x2)? * tt(T3, y2)?, -tt(T2, x2)? * tt(T2, y2)?),
        (t(T2, a)? * t(T2, b)?, tt(T2, x2)? * tt(T3, y2)?, tt(T3, x2)? * tt(T2, y2)?),
        (t(T1, a)? * t(T1, b)?, tt(T3, x2)? * tt(T2, y2)?, -tt(T2, x2)? * tt(T3, y2)?),
    ];
    Ok(rows.iter().map(|&(l, u, v)| rel(l, u + v, &[u, v])).fold(0.0, f64::max))
}

fn shifted_arguments(md: &EllipticModulus<f64>, vm: C, shift: C, iz: C) -> Result<f64> {
    use Theta::*;
    let t = theta_fn(ThetaParams::for_taup(md));
    let tt = theta_fn(ThetaParams::for_two_taup(md));
    let zero = C::new(0.0, 0.0);
    let vz = vm + iz;
    let (vp, vn) = (vz + shift, vz - shift);
    let mut worst: f64 = 0.0;
    for v in [vp, vn] {
        let (a, b) = (tt(T3, v)? * tt(T3, v)?, tt(T2, v)? * tt(T2, v)?);
        worst = worst.max(rel(t(T3, v)? * t(T3, zero)?, a + b, &[a, b]));
        worst = worst.max(rel(t(T0, v)? * t(T0, zero)?, a - b, &[a, b]));
        let c = tt(T2, v)? * tt(T3, v)? * 2.0;
        worst = worst.max(rel(t(T2, v)? * t(T2, zero)?, c, &[c]));
    }
    let (a, b) = (tt(T3, vp)? * tt(T3, vn)?, tt(T2, vp)? * tt(T2, vn)?);
    worst = worst.max(rel(t(T3, vz)? * t(T3, shift)?, a + b, &[a, b]));
    worst = worst.max(rel(t(T0, vz)? * t(T0, shift)?, a - b, &[a, b]));
    let (c, d) = (tt(T2, vp)? * tt(T3, vn)?, tt(T3, vp)? * tt(T2, vn)?);
    worst = worst.max(rel(t(T2, vz)? * t(T2, shift)?, c + d, &[c, d]));
    worst = worst.max(rel(t(T1, vz)? * t(T1, shift)?, d - c, &[c, d]));
    Ok(worst)
}

fn theta_quotients(md: &EllipticModulus<f64>, psi: f64) -> Result<f64> {
    use Theta::*;
    let t = theta_fn(ThetaParams::for_taup(md));
    let zero = C::new(0.0, 0.0);
    let v = C::new(psi - md.K, 0.0) / (I * 2.0 * md.Kp);
    let j = jacobi(psi, md);
    let d = t(T3, v)?;
    let (t0, t2, t3) = (t(T0, zero)?, t(T2, zero)?, t(T3, zero)?);
    Ok((t(T0, v)? * t3 / (d * t0) - j.sn)
        .norm()
        .max((t(T1, v)? * t2 / (d * t0) - I * j.cn).norm())
        .max((t(T2, v)? * t2 / (d * t3) - j.dn).norm()))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫ f` along the straight segment from `a` to `b`.
fn segment_integral(f: impl Fn(C) -> Result<C>, a: C, b: C, panels: usize) -> Result<C> {
    let nodes = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut acc = C::new(0.0, 0.0);
    for i in 0..panels {
        let mid = a + h * (i as f64 + 0.5);
        for &(x, w) in &nodes {
            acc += f(mid + h * (0.5 * x))? * w;
        }
    }
    Ok(acc * h * 0.5)
}

/// `ζ(ω)` from the odd theta series with complex nome for the ratio `ω'/ω`.
fn zeta_omega_series(omega: f64, ratio: C) -> C {
    let q = (I * PI * ratio).exp();
    let (mut d1, mut d3) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    for n in 0..60 {
        let odd = (2 * n + 1) as f64;
        let term = q.powf((n as f64 + 0.5).powi(2)) * if n % 2 == 0 { 1.0 } else { -1.0 };
        d1 += term * odd;
        d3 += term * odd.powi(3);
    }
    d3 * PI * PI / (d1 * 12.0 * omega)
}

/// `|ζ(ω/2) − ζ(ω)/2 − k|` via the quadrature of `℘` and the quasi-period relation,
/// together with the constants chain that produced the closed form.
fn zeta_half_period(md: &EllipticModulus<f64>) -> Result<f64> {
    let wc = WeierstrassConstants::new(md);
    let k = md.k;
    let zeta_omega = md.Kp * wc.zeta_omega_over_omega;
    let ratio = wc.omegap / wc.omega;
    let quad = segment_integral(|w| weierstrass_p(w, md), C::new(-md.Kp / 2.0, 0.0), -wc.omegap, 8)?;
    let closed = -I * md.E - I * md.K / 2.0 * (wc.e1 - 1.0) - k;
    let zeta_half = zeta_omega * ratio - I * PI / (2.0 * md.Kp) - quad;
    let chain = k + I * md.E + I * md.K / 2.0 * (wc.e1 - 1.0) + I * md.taup_im / 2.0 * zeta_omega - I * PI / (2.0 * md.Kp);
    Ok((zeta_half - zeta_omega / 2.0 - k).norm().max((quad - closed).norm()).max((chain - k).norm()))
}

/// `|℘(ω/2) + ζ(ω)/ω − 2E'/K'|` with `ζ(ω)` from the theta series, plus the closed-form gap.
fn zeta_period(md: &EllipticModulus<f64>) -> Result<f64> {
    let wc = WeierstrassConstants::new(md);
    let series = zeta_omega_series(wc.omega, wc.omegap / wc.omega);
    let wp_half = weierstrass_p(C::new(md.Kp / 2.0, 0.0), md)?;
    let target = 2.0 * md.Ep / md.Kp;
    Ok((wp_half + series / md.Kp - target)
        .norm()
        .max((series / md.Kp - wc.zeta_omega_over_omega).norm())
        .max((wc.zeta_omega_over_omega - WeierstrassConstants::zeta_omega_over_omega_alt(md)).abs()))
}

/// The nine neighbour identities for `ψ_{m±1} = ψ_m ± γ`.
pub fn jacobi_step_identities(md: &EllipticModulus<f64>, gamma: f64, psi: f64) -> [f64; 9] {
    let k2 = md.k * md.k;
    let g = jacobi(gamma, md);
    let a = jacobi(psi, md);
    let b = jacobi(psi + gamma, md);
    let z = jacobi(psi - gamma, md);
    [
        g.dn * a.sn * b.sn + a.cn * b.cn - g.cn,
        k2 * g.cn * a.sn * b.sn + a.dn * b.dn - g.dn,
        k2 * g.sn * b.sn * b.sn + g.dn * b.sn * a.cn * b.dn - a.sn * b.cn * b.dn - g.sn,
        g.sn * b.dn + a.sn * b.cn - g.dn * b.sn * a.cn,
        g.dn * b.dn + k2 * g.sn * b.sn * a.cn - a.dn,
        g.dn * a.sn * a.cn * b.sn * b.cn + g.sn * a.cn * a.dn * b.sn - a.cn * a.cn * b.sn * b.sn,
        g.cn * b.cn + g.sn * b.sn * a.dn - a.cn,
        g.sn * b.cn + a.sn * b.dn - g.cn * b.sn * a.dn,
        g.dn * g.dn * z.sn * b.sn + z.cn * b.cn + g.sn * g.sn * z.dn * b.dn - g.cn * g.cn,
    ]
}

/// Residuals of the sn, cn, dn addition formulas at `ψ + γ`.
pub fn jacobi_addition(md: &EllipticModulus<f64>, gamma: f64, psi: f64) -> [f64; 3] {
    let k2 = md.k * md.k;
    let g = jacobi(gamma, md);
    let a = jacobi(psi, md);
    let b = jacobi(psi + gamma, md);
    let den = 1.0 - k2 * g.sn * g.sn * a.sn * a.sn;
    [
        (g.cn * g.dn * a.sn + g.sn * a.cn * a.dn) / den - b.sn,
        (g.cn * a.cn - g.sn * g.dn * a.sn * a.dn) / den - b.cn,
        (g.dn * a.dn - k2 * g.sn * g.cn * a.sn * a.cn) / den - b.dn,
    ]
}

fn identities(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::Identities;
    let mut rng = rng_for(cfg, 2);
    let mut pa = Tally::upper(g, "theta.product_addition", 1e-10);
    let mut dl = Tally::upper(g, "theta.doubled_lattice", 1e-10);
    let mut sa = Tally::upper(g, "theta.shifted_arguments", 1e-10);
    let mut tq = Tally::upper(g, "theta.jacobi_quotients", 1e-10);
    let mut zh = Tally::upper(g, "weierstrass.zeta_half_period", 1e-10);
    let mut zp = Tally::upper(g, "weierstrass.zeta_period", 1e-10);
    let mut st = Tally::upper(g, "jacobi.neighbour_identities", 1e-11);
    let mut ad = Tally::upper(g, "jacobi.addition_formulas", 1e-11);
    for _ in 0..cfg.points {
        let md = match modulus(rng.gen_range(0.1..0.95)) {
            Ok(m) => m,
            Err(e) => {
                pa.add_result(Err(e));
                continue;
            }
        };
        let mut c = |re: f64, im: f64| C::new(rng.gen_range(-re..re), rng.gen_range(-im..im));
        let (x, y) = (c(1.0, 0.3), c(1.0, 0.3));
        pa.add_result(product_addition(&md, x, y));
        dl.add_result(doubled_lattice(&md, x, y));

        let psi: f64 = rng.gen_range(-2.0 * md.K..2.0 * md.K);
        let lambda: f64 = rng.gen_range(-1.0..1.0);
        let z: f64 = rng.gen_range(-0.5..0.5);
        let vm = C::new(psi - md.K, 0.0) / (I * 2.0 * md.Kp);
        let kkp = md.k * md.Kp;
        sa.add_result(shifted_arguments(&md, vm, C::new(lambda / kkp, 0.0), I * z / kkp));
        let cn_vm = vm + 0.5 + I * md.taup_im;
        sa.add_result(shifted_arguments(&md, cn_vm, C::new(lambda / md.Kp, 0.0), I * z / md.Kp));
        tq.add_result(theta_quotients(&md, rng.gen_range(-6.0..6.0)));

        zh.add_result(zeta_half_period(&md));
        zp.add_result(zeta_period(&md));

        let gamma: f64 = rng.gen_range(-2.0 * md.K..2.0 * md.K);
        let psi: f64 = rng.gen_range(-4.0 * md.K..4.0 * md.K);
        jacobi_step_identities(&md, gamma, psi).into_iter().for_each(|r| st.add(r));
        jacobi_addition(&md, gamma, psi).into_iter().for_each(|r| ad.add(r));
    }
    vec![pa, dl, sa, tq, zh, zp, st, ad]
}

const T_SAMPLES: [f64; 5] = [0.0, 0.23, 0.61, 1.4, 2.9];

fn sine_gordon(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::SineGordon;
    let mut semi_dn = Tally::upper(g, "sg.semi_discrete_dn", 1e-10);
    let mut semi_cn = Tally::upper(g, "sg.semi_discrete_cn", 1e-10);
    let mut disc_dn = Tally::upper(g, "sg.discrete_dn", 1e-9);
    let mut disc_cn = Tally::upper(g, "sg.discrete_cn", 1e-9);
    let mut semi_bent = Tally::lower(g, "sg.semi_discrete_perturbation", 1e-3);
    let mut disc_bent = Tally::lower(g, "sg.discrete_perturbation", 1e-3);
    let half = cfg.grid / 2;
    for &k in &cfg.moduli {
        let md = match modulus(k) {
            Ok(m) => m,
            Err(e) => {
                semi_dn.add_result(Err(e));
                continue;
            }
        };
        for fam in [Family::Dn, Family::Cn] {
            let semi = if fam == Family::Dn { &mut semi_dn } else { &mut semi_cn };
            let sp = SemiDiscreteParams::new(md, fam, 0.137, 0.29);
            for m in -cfg.grid..=cfg.grid {
                for t in T_SAMPLES {
                    semi.add_result(semi_residuals(&sp, m, t).map(|(a, b)| a.abs().max(b.abs())));
                }
            }
            if let Ok(coeffs) = semi_sg_coeffs(&sp) {
                for m in [-3, 1, 8] {
                    let w0 = semi_sample(&sp, m, 0.4);
                    let w1 = semi_sample(&sp, m + 1, 0.4);
                    let bent = HalfAngle::from_half(w1.half() + 0.05).with_rate(w1.dwdt.unwrap_or(0.0));
                    semi_bent.add_result(semi_residuals_from(&w0, &bent, &coeffs).map(|(a, b)| a.abs().max(b.abs())));
                }
            }

            let disc = if fam == Family::Dn { &mut disc_dn } else { &mut disc_cn };
            let dp = DiscreteParams::new(md, fam, 0.137, 0.213);
            for m in -half..half {
                for n in -half..half {
                    disc.add_result(discrete_sg_residual(&dp, m, n));
                }
            }
            if let Ok(gh) = discrete_gamma_hat(&dp) {
                let at = |i, j| discrete_sample(&dp, i, j);
                for (m, n) in [(0, 0), (2, 3), (-4, 1)] {
                    let b = at(m, n);
                    let bent = HalfAngle::from_half(b.half() + 0.05);
                    disc_bent.add(discrete_sg_residual_corners(&at(m + 1, n + 1), &bent, &at(m + 1, n), &at(m, n + 1), gh));
                }
            }
        }
    }
    vec![semi_dn, semi_cn, disc_dn, disc_cn, semi_bent, disc_bent]
}

const SURFACE_FAMILIES: [(Family, bool); 4] = [(Family::Dn, false), (Family::Dn, true), (Family::Cn, false), (Family::Cn, true)];
const GAMMAS: [f64; 2] = [0.7, -1.1];

fn surfaces_for(cfg: &VerifyConfig) -> Vec<Result<SurfaceParams<f64>>> {
    cfg.moduli
        .iter()
        .flat_map(|&k| {
            SURFACE_FAMILIES.iter().flat_map(move |&(fam, tw)| {
                GAMMAS.iter().map(move |&gamma| modulus(k).and_then(|md| SurfaceParams::with_admissible_sign(md, fam, tw, gamma, 1.3)))
            })
        })
        .collect()
}

fn surface_geometry(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::SurfaceGeometry;
    let mut edge = Tally::upper(g, "surface.edge_identity", 1e-10);
    let mut speed = Tally::upper(g, "surface.constant_speed", 1e-10);
    let mut torsion = Tally::upper(g, "surface.binormal_torsion", 1e-12);
    for p in surfaces_for(cfg) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                edge.add_result(Err(e));
                continue;
            }
        };
        for t in [0.0, 0.37, 1.7] {
            let pts: Vec<Vec3<f64>> = (-cfg.grid..=cfg.grid).map(|m| gamma_point(&p, m, t)).collect();
            let bs: Vec<Vec3<f64>> = (-cfg.grid..=cfg.grid).map(|m| b_point(&p, m, t)).collect();
            for (w, b) in pts.windows(2).zip(bs.windows(2)) {
                edge.add((w[1] - w[0] - b[1].cross(&b[0]) * p.epsilon()).norm());
                speed.add((w[1] - w[0]).norm() - p.segment_length());
                torsion.add(b[0].dot(&b[1]) - p.torsion_cos());
            }
        }
    }
    vec![edge, speed, torsion]
}

fn isoperimetric_flow(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::IsoperimetricFlow;
    let mut fd = Tally::upper(g, "flow.finite_difference", 1e-6);
    let mut ortho = Tally::upper(g, "flow.binormal_orthogonality", 1e-10);
    let mut comp = Tally::upper(g, "flow.frame_components", 1e-10);
    let h = 1e-4;
    for p in surfaces_for(cfg) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                fd.add_result(Err(e));
                continue;
            }
        };
        for m in (-cfg.grid..=cfg.grid).step_by(4) {
            for t in [0.0, 0.41, 1.3] {
                let v = flow_velocity(&p, m, t);
                let diff = (gamma_point(&p, m, t + h) - gamma_point(&p, m, t - h)) * (0.5 / h);
                fd.add((v - diff).norm());
                ortho.add(v.dot(&b_point(&p, m, t)));
                let (pa, pb) = flow_prediction(&p, m, t);
                comp.add_result(flow_components(&p, m, t).map(|(a, b)| (a - pa).abs().max((b - pb).abs())));
            }
        }
    }
    vec![fd, ortho, comp]
}

fn tau_functions(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::TauFunctions;
    let mut equiv = Tally::upper(g, "tau.closed_form_equivalence", 1e-8);
    let mut bilinear = Tally::upper(g, "tau.bilinear_relations", 1e-9);
    let mut diff = Tally::upper(g, "tau.differential_relation", 1e-6);
    for p in surfaces_for(cfg) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                equiv.add_result(Err(e));
                continue;
            }
        };
        let ctx = TauContext::from_surface(&p);
        for m in -cfg.grid..=cfg.grid {
            for t in [0.0, 0.37] {
                let (gt, bt) = gamma_from_tau(&ctx, m, t);
                equiv.add((gt - gamma_point(&p, m, t)).norm().max((bt - b_point(&p, m, t)).norm()));
            }
        }
        for m in (-cfg.grid..=cfg.grid).step_by(5) {
            let r = bilinear_checks(&ctx, m, 0.3, 1e-5);
            bilinear.add(r.fh.max(r.fr));
            diff.add(r.cr);
        }
    }
    vec![equiv, bilinear, diff]
}

/// Orders of the closed linkages checked by the kaleidocycle suites.
pub const KALEIDOCYCLE_ORDERS: [u32; 5] = [3, 4, 5, 6, 8];

fn kaleidocycle(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::Kaleidocycle;
    let mut dn = Tally::upper(g, "kaleidocycle.dn_closure", 1e-9);
    let mut cn = Tally::upper(g, "kaleidocycle.cn_closure", 1e-9);
    for n in KALEIDOCYCLE_ORDERS {
        for (fam, tally) in [(Family::Dn, &mut dn), (Family::Cn, &mut cn)] {
            let p = match kaleidocycle_params::<f64>(n, fam) {
                Ok(p) => p,
                Err(e) => {
                    tally.add_result(Err(e));
                    continue;
                }
            };
            let period = closure_period(n, fam);
            for t in T_SAMPLES {
                for m in -cfg.grid / 2..cfg.grid / 2 {
                    tally.add((gamma_point(&p, m + period, t) - gamma_point(&p, m, t)).norm());
                }
            }
        }
    }
    vec![dn, cn]
}

fn k_surface(cfg: &VerifyConfig) -> Vec<Tally> {
    let g = Group::KSurface;
    let mut planar = Tally::upper(g, "ksurf.star_planarity", 1e-10);
    let mut edges = Tally::upper(g, "ksurf.opposite_edge_lengths", 1e-10);
    let mut ident = Tally::upper(g, "ksurf.edge_identity", 1e-10);
    let mut torsion = Tally::upper(g, "ksurf.normal_torsion", 1e-12);
    let mut compat = Tally::upper(g, "ksurf.compatibility", 1e-11);
    let mut bent = Tally::lower(g, "ksurf.compatibility_perturbation", 1e-3);
    let mut angle = Tally::upper(g, "ksurf.angle_identity", 1e-10);
    let mut period = Tally::upper(g, "ksurf.periodicity", 1e-9);
    let half = cfg.grid / 2;
    for &k in &cfg.moduli {
        for fam in [Family::Dn, Family::Cn] {
            let kp = match modulus(k).and_then(|md| KParams::new(md, fam, 0.7, -1.1)) {
                Ok(p) => p,
                Err(e) => {
                    planar.add_result(Err(e));
                    continue;
                }
            };
            match KGrid::build(&kp, -half..half, -half..half) {
                Ok(grid) => {
                    planar.add(grid.planarity_residual());
                    let e = grid.edge_lengths();
                    edges.add(e.a_spread.max(e.b_spread));
                    ident.add(grid.edge_residual());
                    let ((c1, _), (c2, _)) = kp.torsions();
                    torsion.add(grid.torsion_residual(c1, c2));
                }
                Err(e) => planar.add_result(Err(e)),
            }
            let (t1, t2) = match kp.tan_half_torsions() {
                Ok(t) => t,
                Err(e) => {
                    compat.add_result(Err(e));
                    continue;
                }
            };
            let (nu1, nu2) = (2.0 * t1.atan(), 2.0 * t2.atan());
            let four_k = 4.0 * kp.modulus.K;
            let dp = DiscreteParams::new(kp.modulus, fam, kp.gamma / four_k, kp.delta / four_k);
            for m in (-half..half).step_by(3) {
                for n in (-half..half).step_by(3) {
                    let at = |i, j| discrete_sample(&dp, i, j);
                    let w = Corners { a: at(m + 1, n + 1), b: at(m, n), c: at(m + 1, n), d: at(m, n + 1) };
                    for signs in [(Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus)] {
                        compat.add(compat_residual(&w, nu1, nu2, signs));
                    }
                    for signs in [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)] {
                        compat.add(compat_residual(&w, nu1, -nu2, signs));
                    }
                    angle.add(angle_identity_residual(&w, t1, t2));
                    let moved = Corners { b: HalfAngle::from_half(w.b.half() + 0.05), ..w };
                    bent.add(compat_residual(&moved, nu1, nu2, (Sign::Plus, Sign::Plus)));
                }
            }
        }
    }
    for case in PeriodicityCase::ALL {
        for p in [3, 4, 5, 6] {
            period.add_result(k_periodicity::<f64>(case, p, 12).map(|r| r.max_defect));
        }
    }
    vec![planar, edges, ident, torsion, compat, bent, angle, period]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let nodes = gauss_legendre(20);
        let w: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let x38: f64 = nodes.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((x38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn tally_bounds() {
        let mut t = Tally::upper(Group::SineGordon, "x", 1e-3);
        t.add(-2e-4);
        assert!(t.finish().pass);
        let mut t = Tally::upper(Group::SineGordon, "x", 1e-3);
        t.add(f64::NAN);
        assert!(!t.finish().pass);
        let mut t = Tally::lower(Group::SineGordon, "x", 1e-3);
        t.add(0.5);
        t.add(1e-4);
        let r = t.finish();
        assert!(!r.pass && r.max_residual == 1e-4);
        assert!(!Tally::upper(Group::SineGordon, "x", 1.0).finish().pass);
    }

    #[test]
    fn every_group_passes() {
        let cfg = VerifyConfig { points: 20, grid: 8, ..VerifyConfig::default() };
        let report = run_all(&cfg);
        for s in &report.suites {
            assert!(s.pass, "{s:?}");
        }
    }
}
