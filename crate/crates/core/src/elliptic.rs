//! Real-argument Jacobi elliptic functions and elliptic integrals.
//!
//! Complete integrals and `sn`, `cn`, `dn` come from the arithmetic-geometric
//! mean (descending Landen) chain. Incomplete integrals use Carlson's
//! symmetric forms, and the `∫ sn²` primitive is reduced by its
//! quasi-periodicity before a single Carlson evaluation.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_AGM: usize = 32;

/// Modulus `k` together with all derived lattice constants.
///
/// `K`, `Kp`, `E`, `Ep` follow the usual notation `K(k)`, `K(k')`, `E(k)`, `E(k')`.
/// The two lattice ratios are purely imaginary and stored by their imaginary
/// parts: `tau_im = K'/K` and `taup_im = K/K'`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus<T> {
    pub k: T,
    pub kp: T,
    pub K: T,
    pub Kp: T,
    pub E: T,
    pub Ep: T,
    pub tau_im: T,
    pub taup_im: T,
    /// Nome `exp(iπτ')` of the `τ'` lattice, real in (0, 1).
    pub q: T,
}

impl<T: Real> EllipticModulus<T> {
    /// Builds the modulus and its constants; `k` must lie in the open interval (0, 1).
    #[allow(non_snake_case)]
    pub fn new(k: T) -> Result<Self> {
        if !(k > T::zero() && k < T::one()) {
            return Err(Error::Domain(format!("modulus k = {k} outside (0, 1)")));
        }
        let kp = ((T::one() - k) * (T::one() + k)).sqrt();
        let (K, E) = complete_integrals(k, kp);
        let (Kp, Ep) = complete_integrals(kp, k);
        Ok(Self { k, kp, K, Kp, E, Ep, tau_im: Kp / K, taup_im: K / Kp, q: (-T::PI() * K / Kp).exp() })
    }

    /// `E K' + E' K − K K' − π/2`, which vanishes identically.
    pub fn legendre_residual(&self) -> T {
        self.E * self.Kp + self.Ep * self.K - self.K * self.Kp - T::FRAC_PI_2()
    }

    /// `∫₀^K sn² = (K − E)/k²`, computed without cancellation.
    pub fn quarter_sn2_integral(&self) -> T {
        carlson_rd(T::zero(), self.kp * self.kp, T::one()) / T::lit(3.0)
    }
}

/// `make_modulus` under its operational name.
pub fn make_modulus<T: Real>(k: T) -> Result<EllipticModulus<T>> {
    EllipticModulus::new(k)
}

/// `(K, E)` at modulus `k` with complement `kp`.
fn complete_integrals<T: Real>(k: T, kp: T) -> (T, T) {
    let half = T::lit(0.5);
    let (mut a, mut b) = (T::one(), kp);
    let mut weight = half;
    let mut sum = half * k * k;
    for _ in 0..MAX_AGM {
        let c = (a - b) * half;
        if c.abs() <= T::epsilon() * a {
            break;
        }
        let a1 = (a + b) * half;
        b = (a * b).sqrt();
        a = a1;
        weight = weight + weight;
        sum = sum + weight * c * c;
    }
    let big_k = T::FRAC_PI_2() / a;
    (big_k, big_k * (T::one() - sum))
}

/// Values of `sn`, `cn`, `dn` at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi<T> {
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

impl<T: Real> Jacobi<T> {
    /// Amplitude `am(u)` on the branch through `atan2(sn, cn)`.
    pub fn amplitude(&self) -> T {
        self.sn.atan2(self.cn)
    }
}

/// Jacobi `sn`, `cn`, `dn` at real `u` by the descending Landen chain.
pub fn jacobi<T: Real>(u: T, m: &EllipticModulus<T>) -> Jacobi<T> {
    let period = T::lit(4.0) * m.K;
    let u = u - period * (u / period).round();
    let half = T::lit(0.5);
    let mut a = [T::zero(); MAX_AGM + 1];
    let mut c = [T::zero(); MAX_AGM + 1];
    a[0] = T::one();
    c[0] = m.k;
    let mut b = m.kp;
    let mut n = 0;
    while n < MAX_AGM && c[n].abs() > T::epsilon() * a[n] {
        a[n + 1] = (a[n] + b) * half;
        c[n + 1] = (a[n] - b) * half;
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = T::int(1 << n) * a[n] * u;
    for j in (1..=n).rev() {
        phi = (phi + (c[j] / a[j] * phi.sin()).asin()) * half;
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (cn * cn + m.kp * m.kp * sn * sn).sqrt();
    Jacobi { sn, cn, dn }
}

/// Carlson's symmetric integral `R_F(x, y, z)`.
pub fn carlson_rf<T: Real>(x: T, y: T, z: T) -> T {
    let tol = (T::epsilon() * T::lit(0.25)).powf(T::lit(1.0 / 6.0));
    let quarter = T::lit(0.25);
    let three = T::lit(3.0);
    let (mut x, mut y, mut z) = (x, y, z);
    let (mut dx, mut dy, mut dz, mut mu);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = (x + lam) * quarter;
        y = (y + lam) * quarter;
        z = (z + lam) * quarter;
        mu = (x + y + z) / three;
        dx = (mu - x) / mu;
        dy = (mu - y) / mu;
        dz = (mu - z) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < tol {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (T::one() - e2 / T::lit(10.0) + e3 / T::lit(14.0) + e2 * e2 / T::lit(24.0) - T::lit(3.0) * e2 * e3 / T::lit(44.0)) / mu.sqrt()
}

/// Carlson's symmetric integral `R_D(x, y, z)`.
pub fn carlson_rd<T: Real>(x: T, y: T, z: T) -> T {
    let tol = (T::epsilon() * T::lit(0.25)).powf(T::lit(1.0 / 6.0));
    let quarter = T::lit(0.25);
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = T::zero();
    let mut fac = T::one();
    let (mut dx, mut dy, mut dz, mut ave);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum = sum + fac / (sz * (z + lam));
        fac = fac * quarter;
        x = (x + lam) * quarter;
        y = (y + lam) * quarter;
        z = (z + lam) * quarter;
        ave = T::lit(0.2) * (x + y + T::lit(3.0) * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < tol {
            break;
        }
    }
    let c1 = T::lit(3.0 / 14.0);
    let c2 = T::lit(1.0 / 6.0);
    let c3 = T::lit(9.0 / 22.0);
    let c4 = T::lit(3.0 / 26.0);
    let c5 = T::lit(0.25) * c3;
    let c6 = T::lit(1.5) * c4;
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - T::lit(6.0) * eb;
    let ee = ed + ec + ec;
    T::lit(3.0) * sum
        + fac * (T::one() + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) / (ave * ave.sqrt())
}

/// Incomplete integral of the second kind `E(φ, k)` for `|φ| ≤ π/2`.
pub fn incomplete_e<T: Real>(phi: T, m: &EllipticModulus<T>) -> T {
    let (s, c) = phi.sin_cos();
    let q = T::one() - m.k * m.k * s * s;
    s * carlson_rf(c * c, q, T::one()) - m.k * m.k * s * s * s / T::lit(3.0) * carlson_rd(c * c, q, T::one())
}

/// Splits `u = 2jK + r` with `|r| ≤ K`.
fn reduce_half_period<T: Real>(u: T, m: &EllipticModulus<T>) -> (T, T) {
    let two_k = m.K + m.K;
    let j = (u / two_k).round();
    (j, u - j * two_k)
}

/// Jacobi epsilon `ε(u) = ∫₀^u dn²`.
pub fn jacobi_epsilon<T: Real>(u: T, m: &EllipticModulus<T>) -> T {
    let (j, r) = reduce_half_period(u, m);
    let am = jacobi(r, m).amplitude();
    (j + j) * m.E + incomplete_e(am, m)
}

/// `∫₀^u sn²(s) ds = (u − ε(u))/k²`.
///
/// ```text
/// ∫₀^{2jK + r} sn² = 2j (K − E)/k² + sin³(am r)/3 · R_D(cos²(am r), dn²(r), 1)
/// ```
///
/// The second form avoids the cancellation in `u − ε(u)` for small `k`.
pub fn sn2_integral<T: Real>(u: T, m: &EllipticModulus<T>) -> T {
    let (j, r) = reduce_half_period(u, m);
    let jr = jacobi(r, m);
    let s = jr.sn;
    let c2 = jr.cn * jr.cn;
    let tail = s * s * s / T::lit(3.0) * carlson_rd(c2, jr.dn * jr.dn, T::one());
    (j + j) * m.quarter_sn2_integral() + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson quadrature, the independent oracle for every integral here.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 48)
    }

    const MODULI: [f64; 4] = [0.3, 0.6, 0.9, 0.99];

    #[test]
    fn complete_k_matches_quadrature() {
        for k in [0.3, 0.6, 0.9] {
            let m = EllipticModulus::new(k).unwrap();
            let oracle = simpson(&|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
            assert!((m.K - oracle).abs() < 1e-12, "k={k}: {} vs {}", m.K, oracle);
            let oracle_e = simpson(&|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
            assert!((m.E - oracle_e).abs() < 1e-12);
        }
    }

    #[test]
    fn complementary_modulus_and_legendre() {
        let m = EllipticModulus::new(0.6f64).unwrap();
        assert!((m.kp - 0.8).abs() < 1e-15);
        for k in MODULI {
            let m = EllipticModulus::new(k).unwrap();
            assert!(m.legendre_residual().abs() < 1e-12, "k={k}");
            assert!(m.E < m.K && m.Ep < m.Kp && m.E > 0.0);
            assert!(m.q > 0.0 && m.q < 1.0);
        }
    }

    #[test]
    fn rejects_degenerate_modulus() {
        for k in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(EllipticModulus::new(k), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn special_values() {
        let m = EllipticModulus::new(0.6f64).unwrap();
        let j0 = jacobi(0.0, &m);
        assert_eq!((j0.sn, j0.cn, j0.dn), (0.0, 1.0, 1.0));
        let jk = jacobi(m.K, &m);
        assert!((jk.sn - 1.0).abs() < 1e-15 && jk.cn.abs() < 1e-15 && (jk.dn - m.kp).abs() < 1e-15);
    }

    #[test]
    fn pythagorean_identities_and_half_period() {
        for k in MODULI {
            let m = EllipticModulus::new(k).unwrap();
            for i in -200..=200 {
                let u = i as f64 * 0.173;
                let j = jacobi(u, &m);
                assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
                assert!((j.dn * j.dn + k * k * j.sn * j.sn - 1.0).abs() < 1e-12);
                let s = jacobi(u + 2.0 * m.K, &m);
                assert!((s.sn + j.sn).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let m = EllipticModulus::new(0.9).unwrap();
        let h = 1e-5;
        for i in 0..50 {
            let u = -5.0 + 0.21 * i as f64;
            let (p, q, j) = (jacobi(u + h, &m), jacobi(u - h, &m), jacobi(u, &m));
            assert!(((p.sn - q.sn) / (2.0 * h) - j.cn * j.dn).abs() < 1e-9);
            assert!(((p.cn - q.cn) / (2.0 * h) + j.sn * j.dn).abs() < 1e-9);
            assert!(((p.dn - q.dn) / (2.0 * h) + 0.81 * j.sn * j.cn).abs() < 1e-9);
        }
    }

    #[test]
    fn sn2_integral_matches_quadrature() {
        for k in MODULI {
            let m = EllipticModulus::new(k).unwrap();
            let f = |s: f64| jacobi(s, &m).sn.powi(2);
            for i in -8..=8 {
                let u = i as f64 * m.K / 2.0 + 0.05;
                let oracle = simpson(&f, 0.0, u, 1e-13);
                assert!((sn2_integral(u, &m) - oracle).abs() < 1e-10, "k={k} u={u}");
            }
            let period = simpson(&f, 0.0, 2.0 * m.K, 1e-13);
            assert!((sn2_integral(2.0 * m.K, &m) - period).abs() < 1e-10);
            assert!((sn2_integral(2.0 * m.K, &m) - 2.0 * (m.K - m.E) / (k * k)).abs() < 1e-10);
        }
    }

    #[test]
    fn epsilon_and_sn2_agree() {
        let m = EllipticModulus::new(0.6f64).unwrap();
        for i in -30..30 {
            let u = 0.37 * i as f64;
            let via_eps = (u - jacobi_epsilon(u, &m)) / 0.36;
            assert!((via_eps - sn2_integral(u, &m)).abs() < 1e-12);
        }
        assert_eq!(sn2_integral(0.0, &m), 0.0);
    }

    #[test]
    fn single_precision_is_usable() {
        let m = EllipticModulus::new(0.6f32).unwrap();
        let j = jacobi(0.7f32, &m);
        assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-5);
        assert!(m.legendre_residual().abs() < 1e-5);
    }
}
