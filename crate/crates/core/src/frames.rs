//! Frenet frames of discrete curves and their su(2) / SO(3) transfer matrices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat3, Vec3};
use crate::real::Real;
use crate::sg::HalfAngle;

/// Which curvature relation the frame is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `𝒦_{m+1} = ŵ_{m+2}/2 − ŵ_m/2`.
    PlusK,
    /// `𝒦_{m+1} = ŵ_m/2 − ŵ_{m+2}/2`.
    MinusK,
}

/// The compound sign `±` of a frame definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Domain(format!("unknown sign '{other}' (expected + or -)"))),
        }
    }
}

/// Orthonormal triple `(T, N, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame<T> {
    pub t: Vec3<T>,
    pub n: Vec3<T>,
    pub b: Vec3<T>,
}

impl<T: Real> Frame<T> {
    pub fn new(t: Vec3<T>, n: Vec3<T>, b: Vec3<T>) -> Self {
        Self { t, n, b }
    }

    pub fn identity() -> Self {
        let m = Mat3::identity();
        Self::from_matrix(&m)
    }

    /// Frame read off the columns of a matrix.
    pub fn from_matrix(m: &Mat3<T>) -> Self {
        Self::new(m.column(0), m.column(1), m.column(2))
    }

    /// Matrix with columns `T, N, B`.
    pub fn matrix(&self) -> Mat3<T> {
        Mat3::from_columns(self.t, self.n, self.b)
    }

    /// Largest deviation from orthonormality and from `det = +1`.
    pub fn orthonormality_residual(&self) -> T {
        let m = self.matrix();
        let gram = m.transpose() * m;
        gram.max_abs_diff(&Mat3::identity()).max((m.det() - T::one()).abs())
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        let r = self.orthonormality_residual();
        if r <= tol {
            Ok(())
        } else {
            Err(Error::Validation {
                check: "frame orthonormality".into(),
                residual: r.to_f64().unwrap_or(f64::NAN),
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// `E₁, E₂, E₃`.
pub fn basis<T: Real>() -> [Mat2<T>; 3] {
    let (o, z) = (T::one(), T::zero());
    [
        Mat2::new(c(z, z), c(z, -o), c(z, -o), c(z, z)),
        Mat2::new(c(z, z), c(-o, z), c(o, z), c(z, z)),
        Mat2::new(c(z, -o), c(z, z), c(z, z), c(z, o)),
    ]
}

/// `φ(x) = x₁E₁ + x₂E₂ + x₃E₃`.
pub fn phi_iso<T: Real>(v: &Vec3<T>) -> Mat2<T> {
    let [e1, e2, e3] = basis::<T>();
    e1.scale(c(v.x, T::zero())) + e2.scale(c(v.y, T::zero())) + e3.scale(c(v.z, T::zero()))
}

/// Inverse of [`phi_iso`] on traceless anti-Hermitian matrices.
pub fn unphi<T: Real>(m: &Mat2<T>) -> Vec3<T> {
    let i = c(T::zero(), T::one());
    let half = T::lit(0.5);
    Vec3::new((i * (m[(0, 1)] + m[(1, 0)])).re * half, (m[(1, 0)] - m[(0, 1)]).re * half, (i * m[(0, 0)]).re)
}

/// A 2×2 special unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2<T>(pub Mat2<T>);

impl<T: Real> Su2<T> {
    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2<T> {
        &self.0
    }

    /// `‖U U† − I‖_F + |det U − 1|`.
    pub fn unitarity_residual(&self) -> T {
        (self.0 * self.0.adjoint() - Mat2::identity()).frobenius() + (self.0.det() - T::one()).norm()
    }

    /// `φ⁻¹(U φ(v) U⁻¹)`.
    pub fn act(&self, v: &Vec3<T>) -> Vec3<T> {
        unphi(&(self.0 * phi_iso(v) * self.0.adjoint()))
    }

    /// Rotation whose columns are `φ⁻¹(U E_j U⁻¹)`.
    pub fn adjoint_matrix(&self) -> Mat3<T> {
        let [e1, e2, e3] = basis::<T>();
        let col = |e: Mat2<T>| unphi(&(self.0 * e * self.0.adjoint()));
        Mat3::from_columns(col(e1), col(e2), col(e3))
    }
}

impl<T: Real> std::ops::Mul for Su2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self(self.0 * o.0)
    }
}

/// The SU(2) transfer matrix `L_m` taking the frame at `m` to the frame at `m + 1`.
pub fn transfer_su2<T: Real>(wm: &HalfAngle<T>, wm1: &HalfAngle<T>, nu: T, variant: Variant, sign: Sign) -> Su2<T> {
    let half = T::lit(0.5) * nu;
    let (cv, sv) = (half.cos(), half.sin() * sign.value::<T>());
    let (q0, q1) = (wm.exp_i_quarter(), wm1.exp_i_quarter());
    let (diag, off) = match variant {
        Variant::PlusK => (q1.conj() * q0, (q1 * q0).conj()),
        Variant::MinusK => (q1 * q0.conj(), q1 * q0),
    };
    Su2(Mat2::new(diag * cv, off * sv, -off.conj() * sv, diag.conj() * cv))
}

/// The SO(3) transfer matrix `L̃_m` with `Φ̃_{m+1} = Φ̃_m L̃_m`.
pub fn transfer_so3<T: Real>(curv_k: T, nu: T) -> Mat3<T> {
    let (sk, ck) = curv_k.sin_cos();
    let (sn, cn) = nu.sin_cos();
    Mat3([[ck, -sk, T::zero()], [cn * sk, cn * ck, sn], [-sn * sk, -sn * ck, cn]])
}

/// Frame in body coordinates (before conjugation by `Φ_m`), determined by `ŵ_{m+1}`.
pub fn body_frame<T: Real>(wm1: &HalfAngle<T>, variant: Variant, sign: Sign) -> Frame<T> {
    let s = sign.value::<T>();
    let (ca, sa) = (wm1.c, wm1.s);
    let z = T::zero();
    let b = Vec3::new(z, z, T::one());
    match variant {
        Variant::PlusK => Frame::new(Vec3::new(-sa, ca, z) * s, Vec3::new(-ca, -sa, z) * s, b),
        Variant::MinusK => Frame::new(Vec3::new(sa, ca, z) * s, Vec3::new(-ca, sa, z) * s, b),
    }
}

/// The frame at `m` given the accumulated `Φ_m` and `ŵ_{m+1}`.
pub fn frame_from_su2<T: Real>(phi: &Su2<T>, wm1: &HalfAngle<T>, variant: Variant, sign: Sign) -> Frame<T> {
    let body = body_frame(wm1, variant, sign);
    Frame::new(phi.act(&body.t), phi.act(&body.n), phi.act(&body.b))
}

/// Frames `0..samples.len()−1` propagated from `Φ_0` through the transfer matrices.
pub fn propagate<T: Real>(phi0: Su2<T>, samples: &[HalfAngle<T>], nu: T, variant: Variant, sign: Sign) -> Vec<Frame<T>> {
    let mut phi = phi0;
    let mut out = Vec::with_capacity(samples.len().saturating_sub(1));
    for w in samples.windows(2) {
        out.push(frame_from_su2(&phi, &w[1], variant, sign));
        phi = phi * transfer_su2(&w[0], &w[1], nu, variant, sign);
    }
    out
}

/// Curvature angles and torsion cosines/sines of a frame sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Geometry<T> {
    /// `𝒦_m` with `cos 𝒦_m = ⟨T_m, T_{m−1}⟩`, `sin 𝒦_m = −⟨N_m, T_{m−1}⟩`.
    pub curvatures: Vec<T>,
    /// `cos ν_m = ⟨B_m, B_{m−1}⟩`.
    pub torsion_cos: Vec<T>,
    /// `sin ν_m = ⟨B_m, N_{m−1}⟩`.
    pub torsion_sin: Vec<T>,
}

pub fn extract_geometry<T: Real>(frames: &[Frame<T>]) -> Result<Geometry<T>> {
    let mut g = Geometry { curvatures: Vec::new(), torsion_cos: Vec::new(), torsion_sin: Vec::new() };
    for (i, w) in frames.windows(2).enumerate() {
        let (prev, cur) = (&w[0], &w[1]);
        let ck = cur.t.dot(&prev.t);
        if ck <= -T::one() + T::lit(1e-12) {
            return Err(Error::Degenerate(format!("tangents {i} and {} are antiparallel", i + 1)));
        }
        g.curvatures.push((-cur.n.dot(&prev.t)).atan2(ck));
        g.torsion_cos.push(cur.b.dot(&prev.b));
        g.torsion_sin.push(cur.b.dot(&prev.n));
    }
    Ok(g)
}
