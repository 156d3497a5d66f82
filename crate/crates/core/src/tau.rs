//! Tau functions `f, g, f*, g*` built from theta functions on the `2τ'` lattice
//! and the bilinear assembly of `Γ_m` and `B_m` from them.
//!
//! Every theta value at a fixed `(m, t, λ)` and real `λ` shares the same
//! imaginary argument part, so samples are carried with a common Gaussian
//! `log_scale` that cancels in all ratios and normalized residuals.

use num_complex::Complex;

use crate::elliptic::{sn2_integral, EllipticModulus};
use crate::linalg::Vec3;
use crate::real::Real;
use crate::sg::Family;
use crate::surfaces::SurfaceParams;
use crate::theta::{theta_scaled, ScaledTheta, Theta, ThetaParams};

/// Parameters of one tau-function family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauContext<T> {
    pub modulus: EllipticModulus<T>,
    pub family: Family,
    pub twisted: bool,
    /// `λ₀ = kK'/2` (dn) or `K'/2` (cn).
    pub lambda0: T,
    pub gamma: T,
    pub beta: T,
    /// `α` of `φ_m`.
    pub alpha: T,
    /// `ε = +1` untwisted, `−1` twisted.
    pub epsilon: T,
}

impl<T: Real> TauContext<T> {
    pub fn from_surface(p: &SurfaceParams<T>) -> Self {
        let m = p.modulus;
        let half = T::lit(0.5);
        Self {
            modulus: m,
            family: p.family,
            twisted: p.twisted,
            lambda0: match p.family {
                Family::Dn => half * m.k * m.Kp,
                Family::Cn => half * m.Kp,
            },
            gamma: p.gamma,
            beta: p.beta,
            alpha: p.alpha(),
            epsilon: p.epsilon(),
        }
    }

    pub fn psi(&self, m: i64, t: T) -> T {
        T::int(m) * self.gamma + self.beta * t
    }

    pub fn phi(&self, m: i64, t: T) -> T {
        let rate = match self.family {
            Family::Dn => self.beta * self.modulus.k,
            Family::Cn => self.beta,
        };
        T::int(m) * self.alpha + rate * t
    }

    /// `dv/dλ`: `1/(kK')` (dn) or `1/K'` (cn).
    pub fn chain(&self) -> T {
        match self.family {
            Family::Dn => (self.modulus.k * self.modulus.Kp).recip(),
            Family::Cn => self.modulus.Kp.recip(),
        }
    }

    /// `v_m = (ψ_m − K)/(2iK')`.
    pub fn v_m(&self, m: i64, t: T) -> Complex<T> {
        let md = &self.modulus;
        Complex::new(T::zero(), -(self.psi(m, t) - md.K) / (md.Kp + md.Kp))
    }

    /// `(v⁺_m(λ, z), v⁻_m(λ, z))`.
    pub fn v_pair(&self, m: i64, t: T, lambda: T, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let i = Complex::new(T::zero(), T::one());
        let ch = self.chain();
        let mut base = self.v_m(m, t) + i * z * ch;
        if self.family == Family::Cn {
            base = base + Complex::new(T::lit(0.5), self.modulus.taup_im);
        }
        (base + lambda * ch, base - lambda * ch)
    }

    /// `η_m`.
    pub fn eta(&self, m: i64, t: T) -> T {
        let md = &self.modulus;
        let offset = match self.family {
            Family::Dn => T::PI(),
            Family::Cn => T::lit(3.0) * T::PI(),
        };
        self.psi(m, t) - offset / (md.Ep + md.Ep) - T::int(m) * md.k * md.k * md.Kp / md.Ep * sn2_integral(self.gamma, md)
    }

    /// `iR_m` in closed form.
    pub fn ir(&self, m: i64, t: T) -> T {
        let md = &self.modulus;
        let (offset, weight) = match self.family {
            Family::Dn => (T::PI() / (T::lit(2.0) * md.k * md.Kp), md.k),
            Family::Cn => (T::lit(1.5) * T::PI() / md.Kp, md.k * md.k),
        };
        -(md.Ep * self.chain() * self.psi(m, t)) + offset + T::int(m) * weight * sn2_integral(self.gamma, md)
    }
}

/// Tau functions and their derived bilinears at one `(m, t, λ, z)`, all divided by `exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSample<T> {
    pub f: Complex<T>,
    pub g: Complex<T>,
    pub f_star: Complex<T>,
    pub g_star: Complex<T>,
    pub f_lambda: Complex<T>,
    pub g_lambda: Complex<T>,
    pub f_star_lambda: Complex<T>,
    pub g_star_lambda: Complex<T>,
    pub f_z: Complex<T>,
    pub g_z: Complex<T>,
    pub f_star_z: Complex<T>,
    pub g_star_z: Complex<T>,
    /// `F = f f* + g g*` (scaled twice).
    pub big_f: Complex<T>,
    /// `dF/dz` (scaled twice).
    pub big_f_z: Complex<T>,
    /// `H = (i/2)(g_λ f* − g f*_λ)` (scaled twice).
    pub h: Complex<T>,
    /// `iR_m`, a real number.
    pub ir: T,
    pub eta: T,
    /// Natural log of the factor removed from each of `f, g, f*, g*`.
    pub log_scale: T,
}

impl<T: Real> TauSample<T> {
    /// Multiplies every single-tau quantity by `exp(log_scale − reference)` and
    /// every bilinear by its square.
    pub fn rescaled(&self, reference: T) -> Self {
        let a = (self.log_scale - reference).exp();
        let b = a * a;
        Self {
            f: self.f * a,
            g: self.g * a,
            f_star: self.f_star * a,
            g_star: self.g_star * a,
            f_lambda: self.f_lambda * a,
            g_lambda: self.g_lambda * a,
            f_star_lambda: self.f_star_lambda * a,
            g_star_lambda: self.g_star_lambda * a,
            f_z: self.f_z * a,
            g_z: self.g_z * a,
            f_star_z: self.f_star_z * a,
            g_star_z: self.g_star_z * a,
            big_f: self.big_f * b,
            big_f_z: self.big_f_z * b,
            h: self.h * b,
            log_scale: reference,
            ..*self
        }
    }
}

/// `θ₃ ± c θ₂` at `v` on the `2τ'` lattice, value and `v`-derivative, rescaled to `reference`.
fn combo<T: Real>(v: Complex<T>, c: Complex<T>, p: &ThetaParams<T>, reference: T) -> (Complex<T>, Complex<T>, Complex<T>, Complex<T>) {
    let t3: ScaledTheta<T> = theta_scaled(Theta::T3, v, p).rescaled(reference);
    let t2 = theta_scaled(Theta::T2, v, p).rescaled(reference);
    (t3.value + c * t2.value, t3.deriv + c * t2.deriv, t3.value - c * t2.value, t3.deriv - c * t2.deriv)
}

/// Tau functions at `(m, t, λ, z)`.
pub fn tau_sample<T: Real>(ctx: &TauContext<T>, m: i64, t: T, lambda: T, z: Complex<T>) -> TauSample<T> {
    let p = ThetaParams::for_two_taup(&ctx.modulus);
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let (vp, vm) = ctx.v_pair(m, t, lambda, z);
    let reference = p.log_scale(vp);
    let c = match ctx.family {
        Family::Dn => i,
        Family::Cn => one,
    };
    let (plus_p, plus_dp, minus_p, minus_dp) = combo(vp, c, &p, reference);
    let (plus_m, plus_dm, minus_m, minus_dm) = combo(vm, c, &p, reference);

    let (tf, tg) = if ctx.twisted { (i.powi(m as i32), (-i).powi(m as i32)) } else { (one, one) };
    let half_phi = T::lit(0.5) * ctx.phi(m, t);
    let e = Complex::from_polar(T::one(), half_phi);
    let (ef, eg, efs, egs) = (tf * e.conj(), tg * e, tf.conj() * e, tg.conj() * e.conj());

    let ch = ctx.chain();
    let f = ef * plus_m;
    let g = eg * plus_p;
    let f_star = efs * minus_p;
    let g_star = egs * minus_m;
    let (f_dv, g_dv, fs_dv, gs_dv) = (ef * plus_dm, eg * plus_dp, efs * minus_dp, egs * minus_dm);
    let (f_lambda, g_lambda, f_star_lambda, g_star_lambda) = (-f_dv * ch, g_dv * ch, fs_dv * ch, -gs_dv * ch);
    let dz = i * ch;
    let (f_z, g_z, f_star_z, g_star_z) = (f_dv * dz, g_dv * dz, fs_dv * dz, gs_dv * dz);

    let half_i = Complex::new(T::zero(), T::lit(0.5));
    TauSample {
        f,
        g,
        f_star,
        g_star,
        f_lambda,
        g_lambda,
        f_star_lambda,
        g_star_lambda,
        f_z,
        g_z,
        f_star_z,
        g_star_z,
        big_f: f * f_star + g * g_star,
        big_f_z: f_z * f_star + f * f_star_z + g_z * g_star + g * g_star_z,
        h: half_i * (g_lambda * f_star - g * f_star_lambda),
        ir: ctx.ir(m, t),
        eta: ctx.eta(m, t),
        log_scale: reference,
    }
}

/// Tau functions at the evaluation point `λ = λ₀`, `z = 0`.
pub fn tau_at_origin<T: Real>(ctx: &TauContext<T>, m: i64, t: T) -> TauSample<T> {
    tau_sample(ctx, m, t, ctx.lambda0, Complex::new(T::zero(), T::zero()))
}

/// `exp(iŵ_m/2) = −i g_m / f*_m` at `λ = λ₀`, `z = iλ₀`.
pub fn half_angle_from_tau<T: Real>(ctx: &TauContext<T>, m: i64, t: T) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let s = tau_sample(ctx, m, t, ctx.lambda0, i * ctx.lambda0);
    -i * s.g / s.f_star
}

/// `(Γ_m, B_m)` assembled from tau functions.
pub fn gamma_from_tau<T: Real>(ctx: &TauContext<T>, m: i64, t: T) -> (Vec3<T>, Vec3<T>) {
    let s = tau_at_origin(ctx, m, t);
    let two = T::lit(2.0);
    let hf = s.h / s.big_f;
    let gamma = Vec3::new(two * hf.re, two * hf.im, s.ir - T::lit(0.5) * (s.big_f_z / s.big_f).re);
    let cross = s.f_star * s.g;
    let cross_bar = s.f * s.g_star;
    let b = Vec3::new(
        ((cross + cross_bar) / s.big_f).re,
        ((cross - cross_bar) / (Complex::new(T::zero(), T::one()) * s.big_f)).re,
        ((s.f * s.f_star - s.g * s.g_star) / s.big_f).re,
    );
    (gamma, b)
}

/// Residuals of the bilinear relations and of the `λ`/`z` derivative coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearResiduals<T> {
    /// `|F_m H_{m+1} − H_m F_{m+1} − (ε/i) Ψ^FH_m| / |F_m F_{m+1}|`.
    pub fh: T,
    /// `|½ D_z F_m·F_{m+1} + (iR_{m+1} − iR_m) F_m F_{m+1} − (2ε/i) Ψ^FR_m| / |F_m F_{m+1}|`.
    pub fr: T,
    /// Largest relative defect of `f_λ = i f_z`, `f*_λ = −i f*_z`, `g_λ = −i g_z`, `g*_λ = i g*_z`
    /// by Richardson-extrapolated central differences at steps `h` and `h/2`.
    pub cr: T,
}

/// Bilinear residuals at `(m, t)` with a finite-difference step `h` for the derivative coupling.
pub fn bilinear_checks<T: Real>(ctx: &TauContext<T>, m: i64, t: T, h: T) -> BilinearResiduals<T> {
    let i = Complex::new(T::zero(), T::one());
    let a = tau_at_origin(ctx, m, t);
    let b = tau_at_origin(ctx, m + 1, t);
    let norm = (a.big_f * b.big_f).norm();
    let eps = Complex::new(ctx.epsilon, T::zero());

    let psi_fh = a.f_star * b.f_star * (a.f * b.g - b.f * a.g) + a.g * b.g * (a.f_star * b.g_star - b.f_star * a.g_star);
    let fh = (a.big_f * b.h - a.h * b.big_f - eps / i * psi_fh).norm() / norm;

    let psi_fr = b.f * a.f_star * a.g * b.g_star - b.f_star * a.f * a.g_star * b.g;
    let dz = (a.big_f_z * b.big_f - a.big_f * b.big_f_z) * T::lit(0.5);
    let fr = (dz + a.big_f * b.big_f * (b.ir - a.ir) - eps * T::lit(2.0) / i * psi_fr).norm() / norm;

    let l0 = ctx.lambda0;
    let zero = Complex::new(T::zero(), T::zero());
    let reference = a.log_scale;
    let at = |lam: T, z: Complex<T>| tau_sample(ctx, m, t, lam, z).rescaled(reference);
    let central = |step: T| {
        let (lp, lm) = (at(l0 + step, zero), at(l0 - step, zero));
        let (zp, zm) = (at(l0, Complex::new(step, T::zero())), at(l0, Complex::new(-step, T::zero())));
        let inv = (step + step).recip();
        [
            ((lp.f - lm.f) * inv, i * (zp.f - zm.f) * inv),
            ((lp.f_star - lm.f_star) * inv, -i * (zp.f_star - zm.f_star) * inv),
            ((lp.g - lm.g) * inv, -i * (zp.g - zm.g) * inv),
            ((lp.g_star - lm.g_star) * inv, i * (zp.g_star - zm.g_star) * inv),
        ]
    };
    let (coarse, fine) = (central(h), central(h * T::lit(0.5)));
    let third = T::lit(3.0).recip();
    let values = [a.f, a.f_star, a.g, a.g_star];
    let pairs: Vec<_> = coarse
        .iter()
        .zip(&fine)
        .zip(values)
        .map(|((c, f), v)| ((f.0 * T::lit(4.0) - c.0) * third, (f.1 * T::lit(4.0) - c.1) * third, v))
        .collect();
    let cr = pairs.iter().map(|(dl, dz, v)| (*dl - *dz).norm() / v.norm().max(T::min_positive_value())).fold(T::zero(), T::max);
    BilinearResiduals { fh, fr, cr }
}
