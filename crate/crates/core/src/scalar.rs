//! Abstraction over the two complex number backends.
//!
//! Orbit and jet code is written once against this trait and instantiated
//! with `Complex64` for exploration (precision 53) and [`MpComplex`] for
//! certification at higher precision.

use num_complex::Complex64;

use crate::mp::MpComplex;

pub trait ComplexScalar: Clone + PartialEq + std::fmt::Debug {
    fn prec(&self) -> u32;
    fn from_c64(z: Complex64, prec: u32) -> Self;
    fn to_c64(&self) -> Complex64;
    fn zero(prec: u32) -> Self;
    fn one(prec: u32) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Integer power, `n ≥ 1`.
    fn powu(&self, n: u32) -> Self;
    /// Modulus as f64; saturates rather than failing on overflow.
    fn abs(&self) -> f64;
    fn add_f64(&self, x: f64) -> Self;
    fn mul_f64(&self, x: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl ComplexScalar for Complex64 {
    fn prec(&self) -> u32 {
        53
    }

    fn from_c64(z: Complex64, _prec: u32) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn zero(_prec: u32) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one(_prec: u32) -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn powu(&self, n: u32) -> Self {
        self.powi(n as i32)
    }

    fn abs(&self) -> f64 {
        self.norm()
    }

    fn add_f64(&self, x: f64) -> Self {
        Complex64::new(self.re + x, self.im)
    }

    fn mul_f64(&self, x: f64) -> Self {
        self * x
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl ComplexScalar for MpComplex {
    fn prec(&self) -> u32 {
        MpComplex::prec(self)
    }

    fn from_c64(z: Complex64, prec: u32) -> Self {
        MpComplex::from_c64(z, prec)
    }

    fn to_c64(&self) -> Complex64 {
        MpComplex::to_c64(self)
    }

    fn zero(prec: u32) -> Self {
        MpComplex::new(prec)
    }

    fn one(prec: u32) -> Self {
        MpComplex::with_f64(1.0, 0.0, prec)
    }

    fn add(&self, rhs: &Self) -> Self {
        MpComplex::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        MpComplex::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        MpComplex::mul(self, rhs)
    }

    fn div(&self, rhs: &Self) -> Self {
        MpComplex::div(self, rhs)
    }

    fn neg(&self) -> Self {
        MpComplex::neg(self)
    }

    fn powu(&self, n: u32) -> Self {
        MpComplex::powu(self, n)
    }

    fn abs(&self) -> f64 {
        MpComplex::abs(self)
    }

    fn add_f64(&self, x: f64) -> Self {
        MpComplex::add_f64(self, x)
    }

    fn mul_f64(&self, x: f64) -> Self {
        MpComplex::mul_f64(self, x)
    }

    fn is_finite(&self) -> bool {
        MpComplex::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exercise<S: ComplexScalar>(prec: u32) -> Complex64 {
        let a = S::from_c64(Complex64::new(0.4, -0.3), prec);
        let b = S::from_c64(Complex64::new(-1.1, 0.9), prec);
        let c = a.mul(&b).add(&a.powu(3)).div(&b.add_f64(2.0)).sub(&a.neg());
        c.to_c64()
    }

    #[test]
    fn backends_agree() {
        let f = exercise::<Complex64>(53);
        let m = exercise::<MpComplex>(128);
        assert!((f - m).norm() < 1e-14);
    }
}
