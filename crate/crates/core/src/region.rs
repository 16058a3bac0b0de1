//! Closed-form constants and membership tests for the zero-free regions.
//!
//! Membership in U_Δ is decided through the degree-Δ polynomial
//! `λ(Δ−1+α)^Δ + α(Δ−1)^(Δ−1) = 0`: every preimage of λ under the boundary
//! parameterization is a root, so λ lies in U_Δ exactly when the root of
//! least modulus is inside the unit disc.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Integer, Rational};
use thiserror::Error;

use crate::roots::{all_roots, eval_poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("alpha = -(delta-1) is the pole of the boundary parameterization")]
    PoleAlpha,
}

/// `λ_Δ = (Δ−1)^(Δ−1) / (Δ−2)^Δ`, the right endpoint of the real
/// zero-free interval.
pub fn lambda_star(delta: u32) -> Rational {
    assert!(delta >= 3);
    let num = Integer::from(delta - 1).pow(delta - 1);
    let den = Integer::from(delta - 2).pow(delta);
    Rational::from((num, den))
}

/// `(Δ−1)^(Δ−1) / Δ^Δ`, the radius of the disc on which every composition
/// keeps an attracting fixed point.
pub fn shearer_radius(delta: u32) -> Rational {
    assert!(delta >= 3);
    let num = Integer::from(delta - 1).pow(delta - 1);
    let den = Integer::from(delta).pow(delta);
    Rational::from((num, den))
}

/// The boundary parameterization `α ↦ −α(Δ−1)^(Δ−1) / (Δ−1+α)^Δ`.
pub fn alpha_to_lambda(delta: u32, alpha: Complex64) -> Result<Complex64, RegionError> {
    assert!(delta >= 3);
    let shift = alpha + (delta - 1) as f64;
    if shift.norm() < 1e-300 {
        return Err(RegionError::PoleAlpha);
    }
    let num = -alpha * Integer::from(delta - 1).pow(delta - 1).to_f64();
    Ok(num / shift.powi(delta as i32))
}

/// Three-way membership verdict with an explicit boundary band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    Boundary,
    Outside,
}

/// Width of the band around `|α| = 1` reported as "boundary".
pub const BOUNDARY_BAND: f64 = 1e-9;

/// All Δ roots of the membership polynomial at (Δ, λ), the minimal-modulus
/// root, and the verdict.
#[derive(Debug, Clone)]
pub struct UdeltaWitness {
    pub delta: u32,
    pub lambda: Complex64,
    pub alpha_roots: Vec<Complex64>,
    pub alpha_min: Complex64,
    pub verdict: Membership,
    /// `1 − |alpha_min|`; positive inside U_Δ.
    pub margin: f64,
    /// Set when two roots share the minimal modulus to within 1e-12.
    pub tie_broken: bool,
    pub precision: u32,
}

impl UdeltaWitness {
    pub fn member(&self) -> bool {
        self.verdict == Membership::Member
    }
}

/// Ascending coefficients of `λ(Δ−1+α)^Δ + α(Δ−1)^(Δ−1)` in α.
fn membership_coeffs(delta: u32, lambda: Complex64) -> Vec<Complex64> {
    let d = delta as usize;
    let dm1 = (delta - 1) as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    // binomial expansion of (Δ−1+α)^Δ
    let mut binom = 1.0f64;
    for j in 0..=d {
        if j > 0 {
            binom = binom * (d - j + 1) as f64 / j as f64;
        }
        coeffs[j] = lambda * binom * dm1.powi((d - j) as i32);
    }
    coeffs[1] += Integer::from(delta - 1).pow(delta - 1).to_f64();
    coeffs
}

/// Membership witness for λ at the stated precision.
pub fn udelta_witness(delta: u32, lambda: Complex64, precision: u32) -> UdeltaWitness {
    assert!(delta >= 3);
    if lambda.norm() == 0.0 {
        // Polynomial degenerates to α(Δ−1)^(Δ−1); the only root is 0.
        return UdeltaWitness {
            delta,
            lambda,
            alpha_roots: vec![Complex64::new(0.0, 0.0)],
            alpha_min: Complex64::new(0.0, 0.0),
            verdict: Membership::Member,
            margin: 1.0,
            tie_broken: false,
            precision,
        };
    }
    let coeffs = membership_coeffs(delta, lambda);
    let mut alpha_roots = all_roots(&coeffs, None);
    alpha_roots.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    let alpha_min = alpha_roots[0];
    let tie_broken = alpha_roots
        .get(1)
        .map(|second| (second.norm() - alpha_min.norm()).abs() <= 1e-12 * (1.0 + alpha_min.norm()))
        .unwrap_or(false);
    let modulus = alpha_min.norm();
    let verdict = if (modulus - 1.0).abs() <= BOUNDARY_BAND {
        Membership::Boundary
    } else if modulus < 1.0 {
        Membership::Member
    } else {
        Membership::Outside
    };
    UdeltaWitness {
        delta,
        lambda,
        alpha_roots,
        alpha_min,
        verdict,
        margin: 1.0 - modulus,
        tie_broken,
        precision,
    }
}

/// Residual of a claimed root of the membership polynomial, for checks.
pub fn membership_residual(delta: u32, lambda: Complex64, alpha: Complex64) -> f64 {
    eval_poly(&membership_coeffs(delta, lambda), alpha).norm()
}

/// Scale against which membership residuals are judged.
pub fn membership_scale(delta: u32, lambda: Complex64, alpha: Complex64) -> f64 {
    let m = alpha.norm().max(1.0).powi(delta as i32);
    membership_coeffs(delta, lambda)
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        * m
        * delta as f64
}

/// Uniform samples of the U_Δ boundary curve, a closed curve.
pub fn udelta_boundary(delta: u32, samples: usize) -> Vec<Complex64> {
    assert!(samples >= 8);
    (0..samples)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            let alpha = Complex64::new(theta.cos(), theta.sin());
            alpha_to_lambda(delta, alpha).expect("|alpha| = 1 is away from the pole")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_constants() {
        assert_eq!(lambda_star(3), Rational::from(4));
        assert_eq!(lambda_star(4), Rational::from((27, 16)));
        assert_eq!(lambda_star(5), Rational::from((256, 243)));
        assert_eq!(shearer_radius(3), Rational::from((4, 27)));
        assert_eq!(shearer_radius(4), Rational::from((27, 256)));
        assert_eq!(
            shearer_radius(9),
            Rational::from((Integer::from(8).pow(8), Integer::from(9).pow(9)))
        );
    }

    #[test]
    fn lambda_star_dominates_shearer() {
        for delta in 3..=64 {
            assert!(lambda_star(delta) > shearer_radius(delta), "delta {delta}");
        }
    }

    #[test]
    fn boundary_map_values() {
        assert_eq!(
            alpha_to_lambda(5, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let v = alpha_to_lambda(3, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(-4.0 / 27.0, 0.0)).norm() < 1e-15);
        let v = alpha_to_lambda(3, Complex64::new(-1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert_eq!(
            alpha_to_lambda(3, Complex64::new(-2.0, 0.0)),
            Err(RegionError::PoleAlpha)
        );
    }

    #[test]
    fn witness_at_zero_and_table_row() {
        let w = udelta_witness(4, Complex64::new(0.0, 0.0), 53);
        assert!(w.member());
        assert_eq!(w.alpha_min, Complex64::new(0.0, 0.0));

        // Table row Δ=3.
        let w = udelta_witness(3, Complex64::new(0.7624680, 2.5253695), 53);
        assert!(w.member());
        assert!((w.alpha_min.norm() - 0.97581).abs() < 1e-4);
    }

    #[test]
    fn witness_on_boundary_lambda_star_3() {
        // 4(2+α)³ + 4α = 4(α+1)(α²+5α+8): roots −1 and (−5±i√7)/2.
        let w = udelta_witness(3, Complex64::new(4.0, 0.0), 53);
        assert_eq!(w.verdict, Membership::Boundary);
        assert!((w.alpha_min.norm() - 1.0).abs() < 1e-9);
        let mut moduli: Vec<f64> = w.alpha_roots.iter().map(|r| r.norm()).collect();
        moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sqrt8 = 8f64.sqrt();
        assert!((moduli[1] - sqrt8).abs() < 1e-9 && (moduli[2] - sqrt8).abs() < 1e-9);
    }

    #[test]
    fn witness_roots_are_polished() {
        let lambda = Complex64::new(-0.24803954, 0.17613988);
        let w = udelta_witness(5, lambda, 53);
        for &root in &w.alpha_roots {
            let res = membership_residual(5, lambda, root);
            assert!(res <= 1e-10 * membership_scale(5, lambda, root));
        }
    }

    #[test]
    fn boundary_contains_endpoints() {
        let b = udelta_boundary(3, 8);
        assert!((b[0] - Complex64::new(-4.0 / 27.0, 0.0)).norm() < 1e-14);
        assert!((b[4] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
    }
}
