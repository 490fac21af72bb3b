//! Minimal planar vector algebra and rigid isometries.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Rotation by +90 degrees (counterclockwise).
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Planar isometry `x -> M x + t` with `M` orthogonal.
///
/// Used by trajectory unfolding, where each step composes a reflection
/// across a side's supporting line.
#[derive(Debug, Clone, Copy)]
pub struct Isometry {
    m: [[f64; 2]; 2],
    t: Vec2,
}

impl Isometry {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0], [0.0, 1.0]],
            t: Vec2::new(0.0, 0.0),
        }
    }

    /// Reflection across the line through `p` with unit direction `u`.
    pub fn reflection(p: Vec2, u: Vec2) -> Self {
        // R = 2 u u^T - I
        let m = [
            [2.0 * u.x * u.x - 1.0, 2.0 * u.x * u.y],
            [2.0 * u.x * u.y, 2.0 * u.y * u.y - 1.0],
        ];
        let rp = Vec2::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y);
        Self { m, t: p - rp }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.t.x,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.t.y,
        )
    }

    /// Apply only the linear part (for directions).
    pub fn apply_dir(&self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y,
            self.m[1][0] * v.x + self.m[1][1] * v.y,
        )
    }

    /// `self` after `other`: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        Isometry {
            m,
            t: self.apply(other.t),
        }
    }

    /// Inverse isometry; `M` is orthogonal so the inverse is `M^T (x - t)`.
    pub fn inverse(&self) -> Isometry {
        let mt = [
            [self.m[0][0], self.m[1][0]],
            [self.m[0][1], self.m[1][1]],
        ];
        let inv_t = Vec2::new(
            -(mt[0][0] * self.t.x + mt[0][1] * self.t.y),
            -(mt[1][0] * self.t.x + mt[1][1] * self.t.y),
        );
        Isometry { m: mt, t: inv_t }
    }
}
