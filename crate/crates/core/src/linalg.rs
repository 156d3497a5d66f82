//! Fixed-size vectors and matrices used by the geometry modules.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex;

use crate::real::Real;

/// A point or direction in three-space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| *self * n.recip())
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Row-major 3×3 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Self {
        Self([[a.x, b.x, c.x], [a.y, b.y, c.y], [a.z, b.z, c.z]])
    }

    pub fn column(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn transpose(&self) -> Self {
        let mut r = self.0;
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[j][i];
            }
        }
        Self(r)
    }

    pub fn det(&self) -> T {
        self.column(0).dot(&self.column(1).cross(&self.column(2)))
    }

    /// Largest absolute entry of `self - o`.
    pub fn max_abs_diff(&self, o: &Self) -> T {
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = [[T::zero(); 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).fold(T::zero(), |acc, l| acc + self.0[i][l] * o.0[l][j]);
            }
        }
        Self(r)
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        let a = v.to_array();
        let row = |i: usize| (0..3).fold(T::zero(), |acc, l| acc + self.0[i][l] * a[l]);
        Vec3::new(row(0), row(1), row(2))
    }
}

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[Complex<T>; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn det(&self) -> Complex<T> {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    /// Inverse via the adjugate; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() {
            return None;
        }
        let m = &self.0;
        let inv = d.inv();
        Some(Self::new(m[1][1] * inv, -m[0][1] * inv, -m[1][0] * inv, m[0][0] * inv))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// Commutator `[self, o]`.
    pub fn commutator(&self, o: &Self) -> Self {
        *self * *o - *o * *self
    }

    pub fn frobenius(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }
}

impl<T: Real> Index<(usize, usize)> for Mat2<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.0[i][j]
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_right_handed() {
        let e = |i: usize| {
            let mut a = [0.0; 3];
            a[i] = 1.0;
            Vec3::new(a[0], a[1], a[2])
        };
        assert_eq!(e(0).cross(&e(1)), e(2));
        assert_eq!(Mat3::from_columns(e(0), e(1), e(2)).det(), 1.0);
    }

    #[test]
    fn mat2_inverse_round_trips() {
        let c = |a: f64, b: f64| Complex::new(a, b);
        let m = Mat2::new(c(1.0, 2.0), c(0.5, -1.0), c(-0.3, 0.2), c(2.0, 0.1));
        let p = m * m.inverse().unwrap();
        assert!((p - Mat2::identity()).frobenius() < 1e-14);
    }
}
