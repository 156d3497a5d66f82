//! Closed-form semi-discrete surfaces `Γ_m(t)`, their frames and isoperimetric flow.

use std::ops::Range;

use crate::elliptic::{jacobi, sn2_integral, EllipticModulus};
use crate::error::{Error, Result};
use crate::frames::{Frame, Sign};
use crate::linalg::Vec3;
use crate::real::{parity, Real};
use crate::sg::{semi_sample, Family, HalfAngle, SemiDiscreteParams};

/// A semi-discrete surface from one of the four elliptic families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams<T> {
    pub modulus: EllipticModulus<T>,
    pub family: Family,
    pub twisted: bool,
    /// `γ`, the m-step of `ψ_m`.
    pub gamma: T,
    /// `β`, the time rate of `ψ_m`.
    pub beta: T,
    /// `(cos α, sin α)`.
    pub alpha_cos: T,
    pub alpha_sin: T,
    pub frame_sign: Sign,
}

impl<T: Real> SurfaceParams<T> {
    /// Derives `α` and checks that `frame_sign` agrees with the sign of `sn γ`.
    pub fn new(modulus: EllipticModulus<T>, family: Family, twisted: bool, gamma: T, beta: T, frame_sign: Sign) -> Result<Self> {
        if !(gamma.is_finite() && beta.is_finite()) {
            return Err(Error::Domain("γ and β must be finite".into()));
        }
        let j = jacobi(gamma, &modulus);
        if j.sn.abs() <= T::lit(1e-12) {
            return Err(Error::Degenerate(format!("sn(γ) = {} gives zero-length edges", j.sn)));
        }
        let (c, s) = match family {
            Family::Dn => (j.dn, modulus.k * j.sn),
            Family::Cn => (j.cn, j.sn),
        };
        let required = match (j.sn > T::zero(), twisted) {
            (true, false) | (false, true) => Sign::Plus,
            _ => Sign::Minus,
        };
        if frame_sign != required {
            return Err(Error::Inadmissible(format!(
                "frame sign {frame_sign:?} with sn(γ) = {} on a{} {family} surface requires {required:?}",
                j.sn,
                if twisted { " twisted" } else { "n untwisted" },
            )));
        }
        Ok(Self { modulus, family, twisted, gamma, beta, alpha_cos: if twisted { -c } else { c }, alpha_sin: s, frame_sign })
    }

    /// Like [`SurfaceParams::new`], choosing the admissible frame sign.
    pub fn with_admissible_sign(modulus: EllipticModulus<T>, family: Family, twisted: bool, gamma: T, beta: T) -> Result<Self> {
        let positive = jacobi(gamma, &modulus).sn > T::zero();
        let sign = if positive != twisted { Sign::Plus } else { Sign::Minus };
        Self::new(modulus, family, twisted, gamma, beta, sign)
    }

    pub fn alpha(&self) -> T {
        self.alpha_sin.atan2(self.alpha_cos)
    }

    /// `ε = ±1` in `Γ_{m+1} − Γ_m = ε B_{m+1} × B_m`.
    pub fn epsilon(&self) -> T {
        if self.twisted {
            -T::one()
        } else {
            T::one()
        }
    }

    /// `|Γ_{m+1} − Γ_m|`.
    pub fn segment_length(&self) -> T {
        let sn = jacobi(self.gamma, &self.modulus).sn.abs();
        match self.family {
            Family::Dn => sn,
            Family::Cn => self.modulus.k * sn,
        }
    }

    /// `cos ν = ⟨B_m, B_{m+1}⟩`.
    pub fn torsion_cos(&self) -> T {
        let j = jacobi(self.gamma, &self.modulus);
        match self.family {
            Family::Dn => j.cn,
            Family::Cn => j.dn,
        }
    }

    /// `ψ_m = mγ + βt`.
    pub fn psi(&self, m: i64, t: T) -> T {
        T::int(m) * self.gamma + self.beta * t
    }

    /// `φ_m = mα + βkt` (dn) or `mα + βt` (cn).
    pub fn phi(&self, m: i64, t: T) -> T {
        let rate = match self.family {
            Family::Dn => self.beta * self.modulus.k,
            Family::Cn => self.beta,
        };
        T::int(m) * self.alpha() + rate * t
    }

    fn sigma(&self, m: i64) -> T {
        if self.twisted {
            parity(m)
        } else {
            T::one()
        }
    }

    /// The sine-Gordon solution underlying the surface.
    pub fn semi_discrete(&self) -> SemiDiscreteParams<T> {
        let four_k = T::lit(4.0) * self.modulus.K;
        SemiDiscreteParams::new(self.modulus, self.family, self.gamma / four_k, self.beta / four_k)
    }
}

/// `Γ_m(t)`.
pub fn gamma_point<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> Vec3<T> {
    let md = &p.modulus;
    let (psi, phi) = (p.psi(m, t), p.phi(m, t));
    let j = jacobi(psi, md);
    let (sphi, cphi) = phi.sin_cos();
    let sg = p.sigma(m);
    let drift = sn2_integral(psi, md) - T::int(m) * sn2_integral(p.gamma, md);
    match p.family {
        Family::Dn => {
            let r = sg * j.dn / md.k;
            Vec3::new(r * cphi, r * sphi, -md.k * drift)
        }
        Family::Cn => {
            let r = sg * md.k * j.cn;
            Vec3::new(r * cphi, r * sphi, -md.k * md.k * drift)
        }
    }
}

/// `B_m(t)`.
pub fn b_point<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> Vec3<T> {
    let md = &p.modulus;
    let j = jacobi(p.psi(m, t), md);
    let (sphi, cphi) = p.phi(m, t).sin_cos();
    let sg = p.sigma(m);
    match p.family {
        Family::Dn => Vec3::new(sg * cphi * j.sn, sg * sphi * j.sn, -j.cn),
        Family::Cn => {
            let r = -sg * md.k * j.sn;
            Vec3::new(r * cphi, r * sphi, j.dn)
        }
    }
}

/// Frenet frame at `m`: `T` along the edge to `m + 1`, `N = B × T`.
pub fn frame_at<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> Result<Frame<T>> {
    let sn = jacobi(p.gamma, &p.modulus).sn;
    let len = match p.family {
        Family::Dn => sn,
        Family::Cn => p.modulus.k * sn,
    };
    if len.abs() <= T::lit(1e-12) {
        return Err(Error::Degenerate("zero-length edge".into()));
    }
    let b = b_point(p, m, t);
    let tangent = b_point(p, m + 1, t).cross(&b) * (p.frame_sign.value::<T>() / len);
    Ok(Frame::new(tangent, b.cross(&tangent), b))
}

/// `dΓ_m/dt`.
pub fn flow_velocity<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> Vec3<T> {
    let k = p.modulus.k;
    let j = jacobi(p.psi(m, t), &p.modulus);
    let (sphi, cphi) = p.phi(m, t).sin_cos();
    let sg = p.sigma(m);
    match p.family {
        Family::Dn => {
            let skc = k * j.sn * j.cn;
            Vec3::new(sg * (-sphi * j.dn - cphi * skc), sg * (cphi * j.dn - sphi * skc), -k * j.sn * j.sn) * p.beta
        }
        Family::Cn => {
            let sd = j.sn * j.dn;
            Vec3::new(sg * (-sphi * j.cn - cphi * sd), sg * (cphi * j.cn - sphi * sd), -k * j.sn * j.sn) * (p.beta * k)
        }
    }
}

/// `ŵ_m(t)` read off the surface: `(dn ψ, −k sn ψ)` or `(cn ψ, sn ψ)`.
pub fn half_angle<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> HalfAngle<T> {
    semi_sample(&p.semi_discrete(), m, t)
}

/// `(⟨dΓ/dt, T⟩, ⟨dΓ/dt, N⟩)`.
pub fn flow_components<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> Result<(T, T)> {
    let f = frame_at(p, m, t)?;
    let v = flow_velocity(p, m, t);
    Ok((v.dot(&f.t), v.dot(&f.n)))
}

/// Predicted `ρ(cos w_m, sin w_m)` of the flow, with `ρ = β` (dn) or `βk` (cn).
pub fn flow_prediction<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> (T, T) {
    let (h0, h1) = (half_angle(p, m, t).exp_i_half(), half_angle(p, m + 1, t).exp_i_half());
    let e = if p.twisted { h0 * h1 } else { h0 * h1.conj() };
    let rho = match p.family {
        Family::Dn => p.beta,
        Family::Cn => p.beta * p.modulus.k,
    } * p.frame_sign.value::<T>();
    (rho * e.re, rho * e.im)
}

/// Predicted `(cos 𝒦_{m+1}, sin 𝒦_{m+1})` with `𝒦_{m+1} = ±(ŵ_{m+2} − ŵ_m)/2`.
pub fn curvature_prediction<T: Real>(p: &SurfaceParams<T>, m: i64, t: T) -> (T, T) {
    let (h0, h2) = (half_angle(p, m, t).exp_i_half(), half_angle(p, m + 2, t).exp_i_half());
    let e = if p.twisted { h0 * h2.conj() } else { h2 * h0.conj() };
    (e.re, e.im)
}

/// Points, binormals and frames of `Γ_m(t)` over a range of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSnapshot<T> {
    pub t: T,
    pub m_start: i64,
    pub points: Vec<Vec3<T>>,
    pub binormals: Vec<Vec3<T>>,
    pub frames: Vec<Frame<T>>,
}

impl<T: Real> CurveSnapshot<T> {
    /// Largest `‖Γ_{m+1} − Γ_m − ε B_{m+1} × B_m‖` within the snapshot.
    pub fn edge_residual(&self, eps: T) -> T {
        self.points
            .windows(2)
            .zip(self.binormals.windows(2))
            .map(|(g, b)| (g[1] - g[0] - b[1].cross(&b[0]) * eps).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest deviation of a segment length from `len`.
    pub fn speed_residual(&self, len: T) -> T {
        self.points.windows(2).map(|g| ((g[1] - g[0]).norm() - len).abs()).fold(T::zero(), T::max)
    }
}

fn check<T: Real>(name: &str, residual: T, tol: T) -> Result<()> {
    if residual <= tol {
        Ok(())
    } else {
        Err(Error::Validation {
            check: name.into(),
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Assembles and validates a snapshot over `m_range` at time `t`.
pub fn snapshot<T: Real>(p: &SurfaceParams<T>, m_range: Range<i64>, t: T) -> Result<CurveSnapshot<T>> {
    let points: Vec<_> = m_range.clone().map(|m| gamma_point(p, m, t)).collect();
    let binormals: Vec<_> = m_range.clone().map(|m| b_point(p, m, t)).collect();
    let frames = m_range.clone().map(|m| frame_at(p, m, t)).collect::<Result<Vec<_>>>()?;
    let snap = CurveSnapshot { t, m_start: m_range.start, points, binormals, frames };
    let tol = T::lit(1e-10);
    check("edge identity", snap.edge_residual(p.epsilon()), tol)?;
    check("constant speed", snap.speed_residual(p.segment_length()), tol)?;
    let ortho = snap.frames.iter().map(Frame::orthonormality_residual).fold(T::zero(), T::max);
    check("frame orthonormality", ortho, tol)?;
    Ok(snap)
}

/// The closed linkage with `k = sin(π/n)`, `γ = K`.
///
/// The dn curve closes after `2n` segments; the cn curve after 2 for any `n`.
pub fn kaleidocycle_params<T: Real>(n: u32, family: Family) -> Result<SurfaceParams<T>> {
    if n < 3 {
        return Err(Error::Domain(format!("kaleidocycle order n = {n} must be at least 3")));
    }
    let k = (T::PI() / T::int(i64::from(n))).sin();
    let modulus = EllipticModulus::new(k)?;
    SurfaceParams::new(modulus, family, false, modulus.K, T::one(), Sign::Plus)
}

/// Number of segments after which a kaleidocycle closes.
pub fn closure_period(n: u32, family: Family) -> i64 {
    match family {
        Family::Dn => 2 * i64::from(n),
        Family::Cn => 2,
    }
}
