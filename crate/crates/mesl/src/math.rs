use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::Real;

/// Plain 3-vector. Dimensionless for magnetization, A/m for fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<R> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> Vec3<R> {
    pub const fn new(x: R, y: R, z: R) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::new(R::zero(), R::zero(), R::zero())
    }

    pub fn unit_x() -> Self {
        Vec3::new(R::one(), R::zero(), R::zero())
    }

    pub fn unit_z() -> Self {
        Vec3::new(R::zero(), R::zero(), R::one())
    }

    pub fn dot(self, o: Self) -> R {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> R {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn scale(self, s: R) -> Self {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    /// True when `|v| = 1` within `tol`.
    pub fn is_unit(self, tol: R) -> bool {
        (self.norm() - R::one()).abs() <= tol
    }

    /// Angle to another vector, in `[0, π]`.
    pub fn angle_to(self, o: Self) -> R {
        let c = self.dot(o) / (self.norm() * o.norm());
        c.min(R::one()).max(-R::one()).acos()
    }
}

impl<R: Real> Add for Vec3<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<R: Real> AddAssign for Vec3<R> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<R: Real> Sub for Vec3<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<R: Real> Mul<R> for Vec3<R> {
    type Output = Self;
    fn mul(self, s: R) -> Self {
        self.scale(s)
    }
}

impl<R: Real> Neg for Vec3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let x = Vec3::<f64>::unit_x();
        let y = Vec3::new(0.0, 1.0, 0.0);
        assert_eq!(x.cross(y), Vec3::unit_z());
    }

    #[test]
    fn angle_endpoints() {
        let x = Vec3::<f64>::unit_x();
        assert!((x.angle_to(x)).abs() < 1e-12);
        assert!((x.angle_to(-x) - std::f64::consts::PI).abs() < 1e-12);
    }
}
