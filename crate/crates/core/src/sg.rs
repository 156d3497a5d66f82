//! Elliptic solutions of the semi-discrete and discrete sine-Gordon equations.
//!
//! Fields are stored as `(cos ŵ/2, sin ŵ/2)` pairs, never as raw angles, so
//! every residual is an angle-addition expansion without inverse trig.

use num_complex::Complex;

use crate::elliptic::{jacobi, EllipticModulus};
use crate::error::{Error, Result};
use crate::real::Real;

/// Which elliptic family a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `cos ŵ/2 = dn`, `sin ŵ/2 = k sn`.
    Dn,
    /// `cos ŵ/2 = cn`, `sin ŵ/2 = sn`.
    Cn,
}

impl Family {
    /// Phase `ξ₀` used when none is given.
    pub fn default_phase<T: Real>(self) -> T {
        match self {
            Family::Dn => T::lit(0.5),
            Family::Cn => T::zero(),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Dn => "dn",
            Family::Cn => "cn",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dn" => Ok(Family::Dn),
            "cn" => Ok(Family::Cn),
            other => Err(Error::Domain(format!("unknown family '{other}' (expected dn or cn)"))),
        }
    }
}

/// A field sample `ŵ` held as `(cos ŵ/2, sin ŵ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfAngle<T> {
    pub c: T,
    pub s: T,
    /// `dŵ/dt` for semi-discrete samples.
    pub dwdt: Option<T>,
}

impl<T: Real> HalfAngle<T> {
    pub fn new(c: T, s: T) -> Self {
        Self { c, s, dwdt: None }
    }

    /// From the angle `ŵ/2` directly.
    pub fn from_half(half: T) -> Self {
        Self::new(half.cos(), half.sin())
    }

    pub fn with_rate(mut self, dwdt: T) -> Self {
        self.dwdt = Some(dwdt);
        self
    }

    /// `c² + s² − 1`.
    pub fn norm_residual(&self) -> T {
        self.c * self.c + self.s * self.s - T::one()
    }

    /// Rescales onto the unit circle.
    pub fn renormalized(&self) -> Self {
        let r = self.c.hypot(self.s);
        Self { c: self.c / r, s: self.s / r, dwdt: self.dwdt }
    }

    /// `ŵ/2` in `(−π, π]`.
    pub fn half(&self) -> T {
        self.s.atan2(self.c)
    }

    /// `(cos ŵ/4, sin ŵ/4)` on the principal band: `ŵ/4 ∈ (−π/2, π/2]`.
    pub fn quarter(&self) -> (T, T) {
        let half = T::lit(0.5);
        if self.c >= T::zero() {
            let cq = ((T::one() + self.c) * half).sqrt();
            (cq, self.s / (cq + cq))
        } else {
            let sq_abs = ((T::one() - self.c) * half).sqrt();
            let sq = if self.s >= T::zero() { sq_abs } else { -sq_abs };
            (self.s.abs() / (sq_abs + sq_abs), sq)
        }
    }

    /// `exp(iŵ/2)`.
    pub fn exp_i_half(&self) -> Complex<T> {
        Complex::new(self.c, self.s)
    }

    /// `exp(iŵ/4)` on the principal band.
    pub fn exp_i_quarter(&self) -> Complex<T> {
        let (c, s) = self.quarter();
        Complex::new(c, s)
    }
}

fn pole_guard<T: Real>(x: T, what: &str) -> Result<T> {
    if x.abs() <= T::lit(64.0) * T::epsilon() {
        Err(Error::Pole(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

/// Semi-discrete solution `ξ_m(t) = mΩ + ξ₀ + At`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiDiscreteParams<T> {
    pub modulus: EllipticModulus<T>,
    pub omega: T,
    pub xi0: T,
    pub a: T,
    pub family: Family,
}

impl<T: Real> SemiDiscreteParams<T> {
    /// Parameters with the family's default phase.
    pub fn new(modulus: EllipticModulus<T>, family: Family, omega: T, a: T) -> Self {
        Self { modulus, omega, xi0: family.default_phase(), a, family }
    }

    pub fn with_phase(mut self, xi0: T) -> Self {
        self.xi0 = xi0;
        self
    }

    pub fn xi(&self, m: i64, t: T) -> T {
        T::int(m) * self.omega + self.xi0 + self.a * t
    }
}

/// Discrete solution `ξ_{m,n} = mΩ + nP + ξ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteParams<T> {
    pub modulus: EllipticModulus<T>,
    pub omega: T,
    pub p: T,
    pub xi0: T,
    pub family: Family,
}

impl<T: Real> DiscreteParams<T> {
    pub fn new(modulus: EllipticModulus<T>, family: Family, omega: T, p: T) -> Self {
        Self { modulus, omega, p, xi0: family.default_phase(), family }
    }

    pub fn with_phase(mut self, xi0: T) -> Self {
        self.xi0 = xi0;
        self
    }

    pub fn xi(&self, m: i64, n: i64) -> T {
        T::int(m) * self.omega + T::int(n) * self.p + self.xi0
    }
}

fn family_pair<T: Real>(family: Family, u: T, m: &EllipticModulus<T>) -> (T, T, T) {
    let j = jacobi(u, m);
    match family {
        Family::Dn => (j.dn, m.k * j.sn, m.k * j.cn),
        Family::Cn => (j.cn, j.sn, j.dn),
    }
}

/// `ŵ_m(t)` with its analytic time derivative.
pub fn semi_sample<T: Real>(p: &SemiDiscreteParams<T>, m: i64, t: T) -> HalfAngle<T> {
    let four_k = T::lit(4.0) * p.modulus.K;
    let (c, s, rate) = family_pair(p.family, four_k * p.xi(m, t), &p.modulus);
    HalfAngle::new(c, s).with_rate(T::lit(2.0) * four_k * p.a * rate)
}

/// Coefficients of the semi-discrete sine-Gordon and mKdV equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgCoeffs<T> {
    pub sg: T,
    pub mkdv: T,
}

/// `(α̃, β̃)` for the dn family, `(γ̃, δ̃)` for the cn family.
pub fn semi_sg_coeffs<T: Real>(p: &SemiDiscreteParams<T>) -> Result<SgCoeffs<T>> {
    let m = &p.modulus;
    let j = jacobi(T::lit(2.0) * m.K * p.omega, m);
    let scale = T::lit(8.0) * m.K * p.a;
    match p.family {
        Family::Dn => {
            let cn = pole_guard(j.cn, "cn(2KΩ)")?;
            let sd = pole_guard(j.sn * j.dn, "sn(2KΩ)dn(2KΩ)")?;
            Ok(SgCoeffs { sg: -scale * j.sn * j.dn / cn, mkdv: scale * j.cn / sd })
        }
        Family::Cn => {
            let sc = pole_guard(j.sn * j.cn, "sn(2KΩ)cn(2KΩ)")?;
            Ok(SgCoeffs { sg: -scale * m.k * m.k * j.sn * j.cn / j.dn, mkdv: scale * j.dn / sc })
        }
    }
}

/// Residuals of both equations for two neighbouring samples and a coefficient pair.
pub fn semi_residuals_from<T: Real>(w0: &HalfAngle<T>, w1: &HalfAngle<T>, coeffs: &SgCoeffs<T>) -> Result<(T, T)> {
    let (d0, d1) = match (w0.dwdt, w1.dwdt) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Domain("semi-discrete residual needs time derivatives".into())),
    };
    let sum = w1.s * w0.c + w1.c * w0.s;
    let diff = w1.s * w0.c - w1.c * w0.s;
    Ok(((d1 - d0) - coeffs.sg * sum, (d1 + d0) - coeffs.mkdv * diff))
}

/// `(sg_res, mkdv_res)` at `(m, t)`.
pub fn semi_residuals<T: Real>(p: &SemiDiscreteParams<T>, m: i64, t: T) -> Result<(T, T)> {
    let coeffs = semi_sg_coeffs(p)?;
    semi_residuals_from(&semi_sample(p, m, t), &semi_sample(p, m + 1, t), &coeffs)
}

/// `ŵ_{m,n}`.
pub fn discrete_sample<T: Real>(p: &DiscreteParams<T>, m: i64, n: i64) -> HalfAngle<T> {
    let four_k = T::lit(4.0) * p.modulus.K;
    let (c, s, _) = family_pair(p.family, four_k * p.xi(m, n), &p.modulus);
    HalfAngle::new(c, s)
}

/// The discrete coefficient `γ̂`.
pub fn discrete_gamma_hat<T: Real>(p: &DiscreteParams<T>) -> Result<T> {
    let m = &p.modulus;
    let two_k = T::lit(2.0) * m.K;
    let factor = |x: T| -> Result<T> {
        let j = jacobi(two_k * x, m);
        match p.family {
            Family::Dn => Ok(j.sn * j.dn / pole_guard(j.cn, "cn")?),
            Family::Cn => Ok(m.k * j.sn * j.cn / j.dn),
        }
    };
    let g = -factor(p.omega)? * factor(p.p)?;
    if p.family == Family::Cn {
        pole_guard(g, "γ̂")?;
    }
    Ok(g)
}

/// Residual at the four corners `A = ŵ_{m+1,n+1}`, `B = ŵ_{m,n}`,
/// `C = ŵ_{m+1,n}`, `D = ŵ_{m,n+1}`.
pub fn discrete_sg_residual_corners<T: Real>(a: &HalfAngle<T>, b: &HalfAngle<T>, c: &HalfAngle<T>, d: &HalfAngle<T>, gamma_hat: T) -> T {
    let (qa, qb, qc, qd) = (a.exp_i_quarter(), b.exp_i_quarter(), c.exp_i_quarter(), d.exp_i_quarter());
    let lhs = qa * qb * (qc * qd).conj();
    let rhs = qa * qb * qc * qd;
    lhs.im - gamma_hat * rhs.im
}

/// Residual of the discrete sine-Gordon equation on the square with corner `(m, n)`.
pub fn discrete_sg_residual<T: Real>(p: &DiscreteParams<T>, m: i64, n: i64) -> Result<T> {
    let g = discrete_gamma_hat(p)?;
    let at = |i, j| discrete_sample(p, i, j);
    Ok(discrete_sg_residual_corners(&at(m + 1, n + 1), &at(m, n), &at(m + 1, n), &at(m, n + 1), g))
}
