//! Jacobi theta functions with period-1 argument on a purely imaginary lattice.
//!
//! Index mapping: `Theta::T0` is the function often written `θ₄`
//!
//! ```text
//! θ₃(v) = 1 + 2 Σ qⁿ² cos 2πnv          θ₀(v) = 1 + 2 Σ (−1)ⁿ qⁿ² cos 2πnv
//! θ₂(v) = 2 Σ q^{(n+½)²} cos (2n+1)πv   θ₁(v) = 2 Σ (−1)ⁿ q^{(n+½)²} sin (2n+1)πv
//! ```
//!
//! with `q = exp(iπτ)`. Arguments are first reduced by the quasi-periods
//! `1` and `τ`, so the series always converge quickly. Internally every value
//! carries the Gaussian factor `exp(−π Im(v)² / Im τ)`, which keeps magnitudes
//! bounded for arbitrarily large `Im v`; [`ScaledTheta`] exposes this form.

use num_complex::Complex;

use crate::elliptic::{EllipticModulus, Jacobi};
use crate::error::{Error, Result};
use crate::real::Real;

const MAX_TERMS: usize = 64;

/// Which of the four theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theta {
    T0,
    T1,
    T2,
    T3,
}

impl Theta {
    pub const ALL: [Theta; 4] = [Theta::T0, Theta::T1, Theta::T2, Theta::T3];

    /// Sign picked up under `v → v + 1`.
    fn real_shift_sign(self) -> i32 {
        match self {
            Theta::T0 | Theta::T3 => 1,
            Theta::T1 | Theta::T2 => -1,
        }
    }

    /// Sign picked up under `v → v + τ` (besides `q⁻¹ e^{−2πiv}`).
    fn lattice_shift_sign(self) -> i32 {
        match self {
            Theta::T0 | Theta::T1 => -1,
            Theta::T2 | Theta::T3 => 1,
        }
    }
}

/// Lattice parameter `τ = i·tau_im` and its nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams<T> {
    pub tau_im: T,
    pub q: T,
    pub trunc_eps: T,
}

impl<T: Real> ThetaParams<T> {
    pub fn new(tau_im: T) -> Result<Self> {
        if !(tau_im > T::zero() && tau_im.is_finite()) {
            return Err(Error::Domain(format!("Im(tau) = {tau_im} must be positive")));
        }
        Ok(Self { tau_im, q: (-T::PI() * tau_im).exp(), trunc_eps: T::lit(1e-16) })
    }

    /// The `τ' = iK/K'` lattice of a modulus.
    pub fn for_taup(m: &EllipticModulus<T>) -> Self {
        Self::new(m.taup_im).expect("positive lattice ratio")
    }

    /// The `2τ'` lattice of a modulus.
    pub fn for_two_taup(m: &EllipticModulus<T>) -> Self {
        Self::new(m.taup_im + m.taup_im).expect("positive lattice ratio")
    }

    /// The `τ = iK'/K` lattice of a modulus.
    pub fn for_tau(m: &EllipticModulus<T>) -> Self {
        Self::new(m.tau_im).expect("positive lattice ratio")
    }

    /// `τ` as a complex number.
    pub fn tau(&self) -> Complex<T> {
        Complex::new(T::zero(), self.tau_im)
    }

    /// `log` of the Gaussian factor removed from scaled values.
    pub fn log_scale(&self, v: Complex<T>) -> T {
        T::PI() * v.im * v.im / self.tau_im
    }
}

/// A theta value and its argument derivative, both divided by `exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTheta<T> {
    pub value: Complex<T>,
    pub deriv: Complex<T>,
    pub log_scale: T,
}

impl<T: Real> ScaledTheta<T> {
    /// Rescales to a different reference `log_scale`.
    pub fn rescaled(&self, log_scale: T) -> Self {
        let f = (self.log_scale - log_scale).exp();
        Self { value: self.value * f, deriv: self.deriv * f, log_scale }
    }
}

/// Theta value and derivative with the Gaussian factor removed.
pub fn theta_scaled<T: Real>(j: Theta, v: Complex<T>, p: &ThetaParams<T>) -> ScaledTheta<T> {
    let n = (v.im / p.tau_im).round();
    let w0 = Complex::new(v.re, v.im - n * p.tau_im);
    let m = w0.re.round();
    let w = Complex::new(w0.re - m, w0.im);
    let (s, ds) = series(j, w, p);
    let real_sign = if j.real_shift_sign() < 0 && m.to_i64().is_some_and(|m| m.rem_euclid(2) == 1) { -T::one() } else { T::one() };
    let n_i = n.to_i64().expect("finite lattice index");
    let lattice_sign = if j.lattice_shift_sign() < 0 && n_i.rem_euclid(2) == 1 { -T::one() } else { T::one() };
    let two_pi = T::PI() + T::PI();
    let phase = Complex::from_polar(T::one(), -two_pi * n * w.re);
    let factor = phase * (real_sign * lattice_sign * (-T::PI() * w.im * w.im / p.tau_im).exp());
    let shift = Complex::new(T::zero(), two_pi * n);
    ScaledTheta { value: factor * s, deriv: factor * (ds - shift * s), log_scale: p.log_scale(v) }
}

/// Truncated series for `θ_j` and `θ_j'` at a reduced argument.
fn series<T: Real>(j: Theta, w: Complex<T>, p: &ThetaParams<T>) -> (Complex<T>, Complex<T>) {
    let pi = T::PI();
    let two = T::lit(2.0);
    let growth = w.im.abs() * pi;
    let mut value = Complex::new(T::zero(), T::zero());
    let mut deriv = value;
    let (mut acc_v, mut acc_d) = (T::zero(), T::zero());
    if matches!(j, Theta::T0 | Theta::T3) {
        value = Complex::new(T::one(), T::zero());
        acc_v = T::one();
    }
    let half_odd = matches!(j, Theta::T1 | Theta::T2);
    for n in 0..MAX_TERMS {
        let (exponent, freq) = if half_odd {
            let h = T::int(n as i64) + T::lit(0.5);
            (h * h, h + h)
        } else if n == 0 {
            continue;
        } else {
            let nn = T::int(n as i64);
            (nn * nn, nn + nn)
        };
        let sign = if matches!(j, Theta::T0 | Theta::T1) && n % 2 == 1 { -T::one() } else { T::one() };
        let weight = two * sign * (-pi * p.tau_im * exponent).exp();
        let arg = w * (pi * freq);
        let (term_v, term_d) = match j {
            Theta::T1 => (arg.sin() * weight, arg.cos() * (weight * pi * freq)),
            _ => (arg.cos() * weight, -arg.sin() * (weight * pi * freq)),
        };
        value = value + term_v;
        deriv = deriv + term_d;
        let bound = weight.abs() * (growth * freq).cosh();
        acc_v = acc_v + bound;
        acc_d = acc_d + bound * pi * freq;
        if bound < p.trunc_eps * acc_v && bound * pi * freq < p.trunc_eps * acc_d {
            break;
        }
    }
    (value, deriv)
}

fn unscale<T: Real>(x: Complex<T>, log_scale: T, what: &str) -> Result<Complex<T>> {
    let r = x * log_scale.exp();
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow(format!("{what} at log-magnitude {log_scale}")))
    }
}

/// `θ_j(v | τ)`.
pub fn theta_j<T: Real>(j: Theta, v: Complex<T>, p: &ThetaParams<T>) -> Result<Complex<T>> {
    let s = theta_scaled(j, v, p);
    unscale(s.value, s.log_scale, "theta value")
}

/// `dθ_j/dv (v | τ)`.
pub fn theta_j_prime<T: Real>(j: Theta, v: Complex<T>, p: &ThetaParams<T>) -> Result<Complex<T>> {
    let s = theta_scaled(j, v, p);
    unscale(s.deriv, s.log_scale, "theta derivative")
}

/// Complex `sn`, `cn`, `dn` from theta quotients on the `τ'` lattice.
///
/// ```text
/// v = (u − K)/(2iK')
/// sn u = θ₀(v)θ₃(0) / (θ₃(v)θ₀(0))
/// cn u = θ₁(v)θ₂(0) / (i θ₃(v)θ₀(0))
/// dn u = θ₂(v)θ₂(0) / (θ₃(v)θ₃(0))
/// ```
pub fn jacobi_complex<T: Real>(u: Complex<T>, m: &EllipticModulus<T>) -> Result<Jacobi<Complex<T>>> {
    let p = ThetaParams::for_taup(m);
    let i = Complex::new(T::zero(), T::one());
    let v = (u - m.K) / (i * (m.Kp + m.Kp));
    let at = |j| theta_scaled(j, v, &p).value;
    let zero = |j| theta_scaled(j, Complex::new(T::zero(), T::zero()), &p).value;
    let t3 = at(Theta::T3);
    if t3.norm() <= T::epsilon() * T::epsilon() {
        return Err(Error::Pole(format!("sn, cn, dn at u = {u}")));
    }
    let sn = at(Theta::T0) * zero(Theta::T3) / (t3 * zero(Theta::T0));
    let cn = at(Theta::T1) * zero(Theta::T2) / (i * t3 * zero(Theta::T0));
    let dn = at(Theta::T2) * zero(Theta::T2) / (t3 * zero(Theta::T3));
    for x in [sn, cn, dn] {
        if !(x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::Pole(format!("sn, cn, dn at u = {u}")));
        }
    }
    Ok(Jacobi { sn, cn, dn })
}

/// Branch points, half-periods and the `ζ(ω)/ω` constant of the
/// Weierstrass function with periods `2K'` and `iK + K'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassConstants<T> {
    pub e1: Complex<T>,
    pub e2: Complex<T>,
    pub e3: Complex<T>,
    pub omega: T,
    pub omegap: Complex<T>,
    pub zeta_omega_over_omega: T,
}

impl<T: Real> WeierstrassConstants<T> {
    pub fn new(m: &EllipticModulus<T>) -> Self {
        let three = T::lit(3.0);
        let d = T::lit(2.0) * m.k * m.k - T::one();
        let e1 = T::lit(2.0) / three * d;
        let im = T::lit(2.0) * m.k * m.kp;
        let half = T::lit(0.5);
        Self {
            e1: Complex::new(e1, T::zero()),
            e2: Complex::new(-d / three, -im),
            e3: Complex::new(-d / three, im),
            omega: m.Kp,
            omegap: Complex::new(m.Kp * half, m.K * half),
            zeta_omega_over_omega: T::lit(2.0) * m.Ep / m.Kp - (e1 + T::one()),
        }
    }

    /// `ζ(ω)/ω` through the alternative closed form `π/(KK') − 2E/K + 1 − e₁`.
    pub fn zeta_omega_over_omega_alt(m: &EllipticModulus<T>) -> T {
        let e1 = Self::new(m).e1.re;
        T::PI() / (m.K * m.Kp) - T::lit(2.0) * m.E / m.K + T::one() - e1
    }
}

/// `℘(z) = (dn(2iz + iK') − ik sn(2iz + iK'))² + e₁`.
pub fn weierstrass_p<T: Real>(z: Complex<T>, m: &EllipticModulus<T>) -> Result<Complex<T>> {
    let b = z.im / m.K;
    let a = (z.re - b * m.Kp) / (m.Kp + m.Kp);
    let (ar, br) = (a.round(), b.round());
    let near = Complex::new((ar + ar) * m.Kp + br * m.Kp, br * m.K);
    if (z - near).norm() <= T::lit(1e3) * T::epsilon() * (m.K + m.Kp) {
        return Err(Error::Pole(format!("weierstrass p at lattice point {near}")));
    }
    let i = Complex::new(T::zero(), T::one());
    let u = i * (z + z) + i * m.Kp;
    let j = jacobi_complex(u, m)?;
    let r = j.dn - i * j.sn * m.k;
    Ok(r * r + WeierstrassConstants::new(m).e1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::jacobi;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    /// Plain unreduced series, the oracle for the reduced evaluator.
    fn naive(j: Theta, v: C, p: &ThetaParams<f64>) -> C {
        let pi = std::f64::consts::PI;
        let mut s = match j {
            Theta::T0 | Theta::T3 => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        };
        for n in 0..40 {
            let sgn = if matches!(j, Theta::T0 | Theta::T1) && n % 2 == 1 { -1.0 } else { 1.0 };
            let h = n as f64 + 0.5;
            let nn = n as f64;
            s += match j {
                Theta::T3 | Theta::T0 if n > 0 => (v * (2.0 * pi * nn)).cos() * (2.0 * sgn * p.q.powf(nn * nn)),
                Theta::T2 => (v * (2.0 * pi * h)).cos() * (2.0 * sgn * p.q.powf(h * h)),
                Theta::T1 => (v * (2.0 * pi * h)).sin() * (2.0 * sgn * p.q.powf(h * h)),
                _ => c(0.0, 0.0),
            };
        }
        s
    }

    fn params() -> (EllipticModulus<f64>, ThetaParams<f64>) {
        let m = EllipticModulus::new(0.6).unwrap();
        (m, ThetaParams::for_taup(&m))
    }

    #[test]
    fn reduction_matches_plain_series() {
        let (_, p) = params();
        for (re, im) in [(0.3, 0.1), (1.7, -0.4), (-2.2, 0.9), (0.45, 1.3)] {
            for j in Theta::ALL {
                let v = c(re, im);
                let a = theta_j(j, v, &p).unwrap();
                let b = naive(j, v, &p);
                assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{j:?} at {v}");
            }
        }
    }

    #[test]
    fn parity_and_periods() {
        let (_, p) = params();
        let v = c(0.37, 0.21);
        assert_eq!(theta_j(Theta::T1, c(0.0, 0.0), &p).unwrap(), c(0.0, 0.0));
        for j in [Theta::T0, Theta::T3] {
            assert!((theta_j(j, v + 1.0, &p).unwrap() - theta_j(j, v, &p).unwrap()).norm() < 1e-13);
        }
        let t = |j, x| theta_j(j, x, &p).unwrap();
        assert!((t(Theta::T0, v + 0.5) - t(Theta::T3, v)).norm() < 1e-13);
        assert!((t(Theta::T2, v + 0.5) + t(Theta::T1, v)).norm() < 1e-13);
        assert!((t(Theta::T3, v + 0.5) - t(Theta::T0, v)).norm() < 1e-13);
        assert!((t(Theta::T1, -v) + t(Theta::T1, v)).norm() < 1e-13);
        assert!((t(Theta::T2, -v) - t(Theta::T2, v)).norm() < 1e-13);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (_, p) = params();
        let h = 1e-6;
        for v in [c(0.31, 0.2), c(-0.7, 2.4), c(3.1, -5.2)] {
            for j in Theta::ALL {
                let d = theta_j_prime(j, v, &p).unwrap();
                let fd = (theta_j(j, v + h, &p).unwrap() - theta_j(j, v - h, &p).unwrap()) / (2.0 * h);
                assert!((d - fd).norm() < 1e-8 * d.norm().max(1.0), "{j:?} {v}: {d} vs {fd}");
            }
        }
        let zero = c(0.0, 0.0);
        for j in [Theta::T0, Theta::T2, Theta::T3] {
            assert!(theta_j_prime(j, zero, &p).unwrap().norm() < 1e-15);
        }
        let prod = theta_j(Theta::T0, zero, &p).unwrap() * theta_j(Theta::T2, zero, &p).unwrap() * theta_j(Theta::T3, zero, &p).unwrap();
        assert!((theta_j_prime(Theta::T1, zero, &p).unwrap() - prod * std::f64::consts::PI).norm() < 1e-13);
    }

    #[test]
    fn large_arguments_stay_finite_when_scaled() {
        let (_, p) = params();
        let s = theta_scaled(Theta::T3, c(0.2, 400.0), &p);
        assert!(s.value.norm().is_finite() && s.value.norm() > 0.0);
        assert!(matches!(theta_j(Theta::T3, c(0.2, 400.0), &p), Err(Error::Overflow(_))));
    }

    #[test]
    fn nome_of_modulus() {
        let (m, p) = params();
        let ratio = theta_j(Theta::T0, c(0.0, 0.0), &p).unwrap() / theta_j(Theta::T3, c(0.0, 0.0), &p).unwrap();
        assert!(((ratio * ratio).re - m.k).abs() < 1e-14);
        assert!((p.q - m.q).abs() < 1e-16);
    }

    #[test]
    fn complex_jacobi_matches_real() {
        for k in [0.3, 0.6, 0.9, 0.99] {
            let m = EllipticModulus::new(k).unwrap();
            for i in -50..50 {
                let u = 0.31 * i as f64 + 0.01;
                let a = jacobi_complex(c(u, 0.0), &m).unwrap();
                let b = jacobi(u, &m);
                assert!((a.sn - b.sn).norm() < 1e-11 && (a.cn - b.cn).norm() < 1e-11 && (a.dn - b.dn).norm() < 1e-11, "k={k} u={u}");
            }
            let one = jacobi_complex(c(m.K, 0.0), &m).unwrap();
            assert!((one.sn - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn weierstrass_values() {
        let (m, _) = params();
        let w = WeierstrassConstants::new(&m);
        assert!((w.e1 + w.e2 + w.e3).norm() < 1e-15);
        let half = weierstrass_p(c(m.Kp / 2.0, 0.0), &m).unwrap();
        assert!((half - (w.e1 + 1.0)).norm() < 1e-12);
        assert!((w.zeta_omega_over_omega - WeierstrassConstants::zeta_omega_over_omega_alt(&m)).abs() < 1e-12);
        for z in [c(0.3, 0.2), c(-0.8, 0.55), c(1.1, -0.4)] {
            let a = weierstrass_p(z, &m).unwrap();
            let b = weierstrass_p(z + 2.0 * m.Kp, &m).unwrap();
            let d = weierstrass_p(z + c(m.Kp, m.K), &m).unwrap();
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
            assert!((a - d).norm() < 1e-10 * a.norm().max(1.0));
        }
        assert!(matches!(weierstrass_p(c(0.0, 0.0), &m), Err(Error::Pole(_))));
        assert!(matches!(weierstrass_p(c(m.Kp, m.K), &m), Err(Error::Pole(_))));
    }
}
