//! Discrete K-surfaces `F_{m,n}` with Gauss map `N_{m,n}`, their axioms and
//! the gauge-transformed compatibility condition.

use std::ops::Range;

use num_complex::Complex;

use crate::elliptic::{jacobi, sn2_integral, EllipticModulus};
use crate::error::{Error, Result};
use crate::frames::Sign;
use crate::linalg::{Mat2, Vec3};
use crate::real::{parity, Real};
use crate::sg::{Family, HalfAngle};

/// Parameters of a K-surface from one elliptic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KParams<T> {
    pub modulus: EllipticModulus<T>,
    pub family: Family,
    /// `γ`, the m-step of `ψ`.
    pub gamma: T,
    /// `δ`, the n-step of `ψ`.
    pub delta: T,
    /// `α`, the m-step of `φ`.
    pub alpha: T,
    /// `β`, the n-step of `φ`.
    pub beta: T,
    /// Whether `α, β` were supplied directly instead of derived from `γ, δ`.
    pub raw_angles: bool,
}

impl<T: Real> KParams<T> {
    /// Derives `α, β` from `γ, δ`.
    pub fn new(modulus: EllipticModulus<T>, family: Family, gamma: T, delta: T) -> Result<Self> {
        if !(gamma.is_finite() && delta.is_finite()) {
            return Err(Error::Domain("γ and δ must be finite".into()));
        }
        let (jg, jd) = (jacobi(gamma, &modulus), jacobi(delta, &modulus));
        let (alpha, beta) = match family {
            Family::Dn => ((modulus.k * jg.sn).atan2(jg.dn), (modulus.k * jd.sn).atan2(-jd.dn)),
            Family::Cn => (jg.sn.atan2(jg.cn), jd.sn.atan2(-jd.cn)),
        };
        Ok(Self { modulus, family, gamma, delta, alpha, beta, raw_angles: false })
    }

    /// Uses the given `α, β` without enforcing the elliptic constraint.
    pub fn with_raw_angles(modulus: EllipticModulus<T>, family: Family, gamma: T, delta: T, alpha: T, beta: T) -> Self {
        Self { modulus, family, gamma, delta, alpha, beta, raw_angles: true }
    }

    pub fn phi(&self, m: i64, n: i64) -> T {
        T::int(m) * self.alpha + T::int(n) * self.beta
    }

    pub fn psi(&self, m: i64, n: i64) -> T {
        T::int(m) * self.gamma + T::int(n) * self.delta
    }

    /// `(cos ν¹, sin ν¹)` and `(cos ν², sin ν²)` of the two lattice directions.
    pub fn torsions(&self) -> ((T, T), (T, T)) {
        let md = &self.modulus;
        let one = |x: T| {
            let j = jacobi(x, md);
            match self.family {
                Family::Dn => (j.cn, j.sn),
                Family::Cn => (j.dn, md.k * j.sn),
            }
        };
        (one(self.gamma), one(self.delta))
    }

    /// `(tan(ν¹/2), tan(ν²/2))`.
    pub fn tan_half_torsions(&self) -> Result<(T, T)> {
        let (a, b) = self.torsions();
        Ok((tan_half(a.0, a.1)?, tan_half(b.0, b.1)?))
    }
}

/// `tan(ν/2) = sin ν / (1 + cos ν)`.
pub fn tan_half<T: Real>(cos: T, sin: T) -> Result<T> {
    let d = T::one() + cos;
    if d <= T::lit(1e-14) {
        return Err(Error::Degenerate("cos ν = −1 has no finite half-angle tangent".into()));
    }
    Ok(sin / d)
}

/// `(F_{m,n}, N_{m,n})`.
pub fn k_point<T: Real>(p: &KParams<T>, m: i64, n: i64) -> (Vec3<T>, Vec3<T>) {
    let md = &p.modulus;
    let psi = p.psi(m, n);
    let j = jacobi(psi, md);
    let (sphi, cphi) = p.phi(m, n).sin_cos();
    let sg: T = parity(n);
    let drift = sn2_integral(psi, md) - T::int(m) * sn2_integral(p.gamma, md) - T::int(n) * sn2_integral(p.delta, md);
    match p.family {
        Family::Dn => {
            let r = sg * j.dn / md.k;
            let s = sg * j.sn;
            (Vec3::new(r * cphi, r * sphi, -md.k * drift), Vec3::new(s * cphi, s * sphi, -j.cn))
        }
        Family::Cn => {
            let r = sg * md.k * j.cn;
            let s = sg * md.k * j.sn;
            (Vec3::new(r * cphi, r * sphi, -md.k * md.k * drift), Vec3::new(s * cphi, s * sphi, -j.dn))
        }
    }
}

/// `(‖F_{m+1,n} − F − N_{m+1,n} × N‖, ‖F_{m,n+1} − F + N_{m,n+1} × N‖)`.
pub fn k_edge_residuals<T: Real>(p: &KParams<T>, m: i64, n: i64) -> (T, T) {
    let (f, nv) = k_point(p, m, n);
    let (f1, n1) = k_point(p, m + 1, n);
    let (f2, n2) = k_point(p, m, n + 1);
    ((f1 - f - n1.cross(&nv)).norm(), (f2 - f + n2.cross(&nv)).norm())
}

/// A rectangular patch of a K-surface, stored row-major in `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid<T> {
    pub m_start: i64,
    pub n_start: i64,
    pub rows: usize,
    pub cols: usize,
    pub points: Vec<Vec3<T>>,
    pub normals: Vec<Vec3<T>>,
}

/// Opposite-edge lengths of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengths<T> {
    /// `A_m`, measured along the first column.
    pub a: Vec<T>,
    /// `B_n`, measured along the first row.
    pub b: Vec<T>,
    /// Largest deviation of an m-edge from its `A_m`.
    pub a_spread: T,
    /// Largest deviation of an n-edge from its `B_n`.
    pub b_spread: T,
}

impl<T: Real> KGrid<T> {
    pub fn build(p: &KParams<T>, m_range: Range<i64>, n_range: Range<i64>) -> Result<Self> {
        let rows = usize::try_from(m_range.end - m_range.start).unwrap_or(0);
        let cols = usize::try_from(n_range.end - n_range.start).unwrap_or(0);
        if rows < 2 || cols < 2 {
            return Err(Error::Domain("a K-surface grid needs at least 2×2 vertices".into()));
        }
        let (points, normals) = m_range.clone().flat_map(|m| n_range.clone().map(move |n| (m, n))).map(|(m, n)| k_point(p, m, n)).unzip();
        Ok(Self { m_start: m_range.start, n_start: n_range.start, rows, cols, points, normals })
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    pub fn point(&self, i: usize, j: usize) -> Vec3<T> {
        self.points[self.index(i, j)]
    }

    pub fn normal(&self, i: usize, j: usize) -> Vec3<T> {
        self.normals[self.index(i, j)]
    }

    /// Largest scalar triple product among the four edges of each interior vertex star.
    pub fn planarity_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 1..self.rows - 1 {
            for j in 1..self.cols - 1 {
                let c = self.point(i, j);
                let e = [self.point(i + 1, j) - c, self.point(i, j + 1) - c, self.point(i - 1, j) - c, self.point(i, j - 1) - c];
                for (a, b, d) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                    worst = worst.max(e[a].cross(&e[b]).dot(&e[d]).abs());
                }
            }
        }
        worst
    }

    pub fn edge_lengths(&self) -> EdgeLengths<T> {
        let a: Vec<T> = (0..self.rows - 1).map(|i| (self.point(i + 1, 0) - self.point(i, 0)).norm()).collect();
        let b: Vec<T> = (0..self.cols - 1).map(|j| (self.point(0, j + 1) - self.point(0, j)).norm()).collect();
        let mut a_spread = T::zero();
        let mut b_spread = T::zero();
        for (i, &ai) in a.iter().enumerate() {
            for j in 0..self.cols {
                a_spread = a_spread.max(((self.point(i + 1, j) - self.point(i, j)).norm() - ai).abs());
            }
        }
        for i in 0..self.rows {
            for (j, &bj) in b.iter().enumerate() {
                b_spread = b_spread.max(((self.point(i, j + 1) - self.point(i, j)).norm() - bj).abs());
            }
        }
        EdgeLengths { a, b, a_spread, b_spread }
    }

    /// Largest deviation of `⟨N, N_{m+1}⟩` and `⟨N, N_{n+1}⟩` from the given torsion cosines.
    pub fn torsion_residual(&self, cos1: T, cos2: T) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let nv = self.normal(i, j);
                if i + 1 < self.rows {
                    worst = worst.max((nv.dot(&self.normal(i + 1, j)) - cos1).abs());
                }
                if j + 1 < self.cols {
                    worst = worst.max((nv.dot(&self.normal(i, j + 1)) - cos2).abs());
                }
            }
        }
        worst
    }

    /// Largest edge-identity residual over the grid.
    pub fn edge_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let (f, nv) = (self.point(i, j), self.normal(i, j));
                if i + 1 < self.rows {
                    let r = self.point(i + 1, j) - f - self.normal(i + 1, j).cross(&nv);
                    worst = worst.max(r.norm());
                }
                if j + 1 < self.cols {
                    let r = self.point(i, j + 1) - f + self.normal(i, j + 1).cross(&nv);
                    worst = worst.max(r.norm());
                }
            }
        }
        worst
    }

    /// Quad faces `(i,j) → (i+1,j) → (i+1,j+1) → (i,j+1)` as vertex indices.
    pub fn quads(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        (0..self.rows - 1).flat_map(move |i| {
            (0..self.cols - 1).map(move |j| [self.index(i, j), self.index(i + 1, j), self.index(i + 1, j + 1), self.index(i, j + 1)])
        })
    }
}

/// Corner fields of one elementary square: `A = ŵ_{m+1,n+1}`, `B = ŵ_{m,n}`,
/// `C = ŵ_{m+1,n}`, `D = ŵ_{m,n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corners<T> {
    pub a: HalfAngle<T>,
    pub b: HalfAngle<T>,
    pub c: HalfAngle<T>,
    pub d: HalfAngle<T>,
}

fn m_step<T: Real>(to: &HalfAngle<T>, from: &HalfAngle<T>, cv: T, sv: T) -> Mat2<T> {
    let e = to.exp_i_half().conj() * from.exp_i_half();
    let s = Complex::new(sv, T::zero());
    Mat2::new(e * cv, s, -s, e.conj() * cv)
}

fn n_step<T: Real>(x: &HalfAngle<T>, y: &HalfAngle<T>, cv: T, sv: T) -> Mat2<T> {
    let e = x.exp_i_half() * y.exp_i_half();
    let c = Complex::new(cv, T::zero());
    Mat2::new(c, e * sv, -e.conj() * sv, c)
}

/// `‖ℒ(C,B) ℒ̂(A,C) − ℒ̂(D,B) ℒ(A,D)‖_F` for the gauge-transformed transfer matrices.
pub fn compat_residual<T: Real>(w: &Corners<T>, nu1: T, nu2: T, signs: (Sign, Sign)) -> T {
    let half = T::lit(0.5);
    let (c1, s1) = ((half * nu1).cos(), (half * nu1).sin() * signs.0.value::<T>());
    let (c2, s2) = ((half * nu2).cos(), (half * nu2).sin() * signs.1.value::<T>());
    let lhs = m_step(&w.c, &w.b, c1, s1) * n_step(&w.a, &w.c, c2, s2);
    let rhs = n_step(&w.d, &w.b, c2, s2) * m_step(&w.a, &w.d, c1, s1);
    (lhs - rhs).frobenius()
}

/// `−sin V − tan(ν¹/2) tan(ν²/2) sin U` with `U = (A+B+C+D)/4`, `V = (A+B−C−D)/4`.
pub fn angle_identity_residual<T: Real>(w: &Corners<T>, tan1: T, tan2: T) -> T {
    let (qa, qb, qc, qd) = (w.a.exp_i_quarter(), w.b.exp_i_quarter(), w.c.exp_i_quarter(), w.d.exp_i_quarter());
    let u = qa * qb * qc * qd;
    let v = qa * qb * (qc * qd).conj();
    -v.im - tan1 * tan2 * u.im
}

/// The six enumerated translation-periodic K-surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodicityCase {
    /// dn, `γ = δ = K`.
    DnQuarterQuarter,
    /// dn, `γ = K`, `δ = 2K`.
    DnQuarterHalf,
    /// dn, `γ = 2K` (with `δ = K`).
    DnHalf,
    /// cn, `γ = δ = K`.
    CnQuarterQuarter,
    /// cn, `γ = K`, `δ = 2K`.
    CnQuarterHalf,
    /// cn, `γ = 2K`, `δ = K`.
    CnHalfQuarter,
}

impl PeriodicityCase {
    pub const ALL: [PeriodicityCase; 6] = [
        PeriodicityCase::DnQuarterQuarter,
        PeriodicityCase::DnQuarterHalf,
        PeriodicityCase::DnHalf,
        PeriodicityCase::CnQuarterQuarter,
        PeriodicityCase::CnQuarterHalf,
        PeriodicityCase::CnHalfQuarter,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PeriodicityCase::DnQuarterQuarter => "1a",
            PeriodicityCase::DnQuarterHalf => "1b",
            PeriodicityCase::DnHalf => "1c",
            PeriodicityCase::CnQuarterQuarter => "2a",
            PeriodicityCase::CnQuarterHalf => "2b",
            PeriodicityCase::CnHalfQuarter => "2c",
        }
    }

    pub fn family(self) -> Family {
        match self {
            PeriodicityCase::DnQuarterQuarter | PeriodicityCase::DnQuarterHalf | PeriodicityCase::DnHalf => Family::Dn,
            _ => Family::Cn,
        }
    }

    /// `(γ, δ)` in units of `K`.
    pub fn steps(self) -> (i64, i64) {
        match self {
            PeriodicityCase::DnQuarterQuarter | PeriodicityCase::CnQuarterQuarter => (1, 1),
            PeriodicityCase::DnQuarterHalf | PeriodicityCase::CnQuarterHalf => (1, 2),
            PeriodicityCase::DnHalf | PeriodicityCase::CnHalfQuarter => (2, 1),
        }
    }

    /// Lattice translations `(Δm, Δn)` leaving `F` invariant, for order `p`.
    pub fn translations(self, p: i64) -> Vec<(i64, i64)> {
        match self {
            PeriodicityCase::DnQuarterQuarter => vec![(2 * p, 2 * p)],
            PeriodicityCase::DnQuarterHalf => vec![(2 * p, 2)],
            PeriodicityCase::DnHalf => vec![(1, 0)],
            PeriodicityCase::CnQuarterQuarter => vec![(4, 0), (0, 4), (2, 2)],
            PeriodicityCase::CnQuarterHalf => vec![(4, 0), (0, 2), (4, 2)],
            PeriodicityCase::CnHalfQuarter => vec![(2, 0), (0, 4), (1, 2)],
        }
    }

    /// Parameters with `k = sin(π/p)`.
    pub fn params<T: Real>(self, p: u32) -> Result<KParams<T>> {
        if p < 3 {
            return Err(Error::Domain(format!("periodicity order p = {p} must be at least 3")));
        }
        let modulus = EllipticModulus::new((T::PI() / T::int(i64::from(p))).sin())?;
        let (g, d) = self.steps();
        KParams::new(modulus, self.family(), T::int(g) * modulus.K, T::int(d) * modulus.K)
    }
}

impl std::str::FromStr for PeriodicityCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PeriodicityCase::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Domain(format!("unknown periodicity case '{s}' (expected 1a–1c or 2a–2c)")))
    }
}

/// Closure defects of one periodicity case.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityReport<T> {
    pub case: PeriodicityCase,
    pub p: u32,
    /// `(Δm, Δn, max ‖F_{m+Δm,n+Δn} − F_{m,n}‖)` per translation.
    pub defects: Vec<(i64, i64, T)>,
    pub max_defect: T,
}

/// Checks every translation of a case over the window `[0, window)²`.
pub fn k_periodicity<T: Real>(case: PeriodicityCase, p: u32, window: i64) -> Result<PeriodicityReport<T>> {
    let params = case.params::<T>(p)?;
    let defects: Vec<_> = case
        .translations(i64::from(p))
        .into_iter()
        .map(|(dm, dn)| {
            let worst = (0..window)
                .flat_map(|m| (0..window).map(move |n| (m, n)))
                .map(|(m, n)| (k_point(&params, m + dm, n + dn).0 - k_point(&params, m, n).0).norm())
                .fold(T::zero(), T::max);
            (dm, dn, worst)
        })
        .collect();
    let max_defect = defects.iter().map(|d| d.2).fold(T::zero(), T::max);
    Ok(PeriodicityReport { case, p, defects, max_defect })
}
