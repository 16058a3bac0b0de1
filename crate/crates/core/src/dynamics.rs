//! Evaluation of the maps `f_d(z) = λ/(1+z)^d`, their compositions, orbits
//! of 0 with pole handling, and first/second-order jets in (z, λ).
//!
//! Poles are values, not failures: `f_d(−1) = ∞` and `f_d(∞) = 0`, so an
//! orbit passing through −1 continues `−1 → ∞ → 0`. A point closer to −1
//! than `2^(-prec/2)` is treated as the pole itself, which avoids overflow
//! while keeping that two-step algebra exact.

use num_complex::Complex64;
use thiserror::Error;

use crate::mp::{hit_tolerance, pole_guard};
use crate::scalar::ComplexScalar;
use crate::word::DegreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("orbit passes through the pole at step {0}; the jet is undefined through infinity")]
    PoleOnOrbit(usize),
}

/// A point of the Riemann sphere: finite, or the point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedComplex<S> {
    Finite(S),
    Infinity,
}

impl<S: ComplexScalar> ExtendedComplex<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        ExtendedComplex::Finite(S::from_c64(z, prec))
    }
}

/// One application of `f_d` at the stated precision.
pub fn eval_map<S: ComplexScalar>(
    d: u32,
    lambda: &S,
    z: &ExtendedComplex<S>,
    prec: u32,
) -> ExtendedComplex<S> {
    debug_assert!(d >= 1);
    match z {
        ExtendedComplex::Infinity => ExtendedComplex::Finite(S::zero(prec)),
        ExtendedComplex::Finite(z) => {
            let b = z.add_f64(1.0);
            if b.abs() < pole_guard(prec) {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite(lambda.div(&b.powu(d)))
            }
        }
    }
}

/// Drives an orbit along raw letters, invoking `visit(step, value)` after
/// each application; step counts from 1.
pub fn fold_letters<S, F>(letters: &[u32], lambda: &S, z0: &ExtendedComplex<S>, prec: u32, mut visit: F)
where
    S: ComplexScalar,
    F: FnMut(usize, &ExtendedComplex<S>),
{
    let mut current = z0.clone();
    for (i, &d) in letters.iter().enumerate() {
        current = eval_map(d, lambda, &current, prec);
        visit(i + 1, &current);
    }
}

/// Orbit of a starting point under a degree word.
#[derive(Debug, Clone)]
pub struct Orbit<S> {
    pub word: DegreeWord,
    pub lambda: S,
    /// `points[0]` is the starting point; `points[i]` the value after `i` letters.
    pub points: Vec<ExtendedComplex<S>>,
    /// Indices `i` with `points[i] = ∞`.
    pub pole_passages: Vec<usize>,
    /// Least `i ≥ 1` with `|points[i] + 1| ≤ hit_tolerance`.
    pub hit_index: Option<usize>,
    pub hit_tolerance: f64,
}

impl<S: ComplexScalar> Orbit<S> {
    pub fn last(&self) -> &ExtendedComplex<S> {
        self.points.last().expect("orbit has at least the start point")
    }

    /// `|x_last + 1|`, infinite when the final point is ∞.
    pub fn final_residual(&self) -> f64 {
        match self.last() {
            ExtendedComplex::Finite(z) => z.add_f64(1.0).abs(),
            ExtendedComplex::Infinity => f64::INFINITY,
        }
    }
}

fn run_letters<S: ComplexScalar>(
    word: &DegreeWord,
    letters: &[u32],
    lambda: &S,
    z0: &ExtendedComplex<S>,
    prec: u32,
) -> Orbit<S> {
    let tol = hit_tolerance(prec);
    let mut points = Vec::with_capacity(letters.len() + 1);
    points.push(z0.clone());
    let mut pole_passages = Vec::new();
    let mut hit_index = None;
    fold_letters(letters, lambda, z0, prec, |i, value| {
        match value {
            ExtendedComplex::Infinity => pole_passages.push(i),
            ExtendedComplex::Finite(z) => {
                if hit_index.is_none() && z.add_f64(1.0).abs() <= tol {
                    hit_index = Some(i);
                }
            }
        }
        points.push(value.clone());
    });
    Orbit {
        word: word.clone(),
        lambda: lambda.clone(),
        points,
        pole_passages,
        hit_index,
        hit_tolerance: tol,
    }
}

/// Orbit of `z0` under one pass of the word.
pub fn eval_word<S: ComplexScalar>(
    word: &DegreeWord,
    lambda: &S,
    z0: &ExtendedComplex<S>,
    prec: u32,
) -> Orbit<S> {
    run_letters(word, word.letters(), lambda, z0, prec)
}

/// Orbit of 0 under `n` passes of the full word.
pub fn iterate_word<S: ComplexScalar>(
    word: &DegreeWord,
    lambda: &S,
    n: usize,
    prec: u32,
) -> Orbit<S> {
    assert!(n >= 1);
    let repeated = word.repeat(n);
    let zero = ExtendedComplex::Finite(S::zero(prec));
    run_letters(&repeated, repeated.letters(), lambda, &zero, prec)
}

/// Value and first/second partials of a composition in (z, λ).
#[derive(Debug, Clone)]
pub struct Jet2<S> {
    pub w: S,
    pub w_z: S,
    pub w_l: S,
    pub w_zz: S,
    pub w_zl: S,
}

/// Propagates the jet of the full composition at `(λ, z0)`.
///
/// Step rules for `w = λ(1+u)^(-d)` with `inv = 1/(1+u)`, `a = inv^d`:
/// `w_z = -dλ a inv u_z`, `w_l = a - dλ a inv u_l`, and the second-order
/// rules obtained by differentiating these.
pub fn eval_jet<S: ComplexScalar>(
    word: &DegreeWord,
    lambda: &S,
    z0: &S,
    prec: u32,
) -> Result<Jet2<S>, JetError> {
    let guard = pole_guard(prec);
    let mut jet = Jet2 {
        w: z0.clone(),
        w_z: S::one(prec),
        w_l: S::zero(prec),
        w_zz: S::zero(prec),
        w_zl: S::zero(prec),
    };
    for (i, &d) in word.letters().iter().enumerate() {
        let b = jet.w.add_f64(1.0);
        if b.abs() < guard || !b.is_finite() {
            return Err(JetError::PoleOnOrbit(i + 1));
        }
        let inv = S::one(prec).div(&b);
        let a = inv.powu(d);
        let df = d as f64;
        let la = lambda.mul(&a);
        // m1 = d λ a inv, m2 = d(d+1) λ a inv²
        let m1 = la.mul(&inv).mul_f64(df);
        let m2 = m1.mul(&inv).mul_f64(df + 1.0);
        let w = la.clone();
        let w_z = m1.mul(&jet.w_z).neg();
        let w_l = a.sub(&m1.mul(&jet.w_l));
        let w_zz = m2.mul(&jet.w_z).mul(&jet.w_z).sub(&m1.mul(&jet.w_zz));
        let w_zl = m2
            .mul(&jet.w_z)
            .mul(&jet.w_l)
            .sub(&a.mul(&inv).mul(&jet.w_z).mul_f64(df))
            .sub(&m1.mul(&jet.w_zl));
        jet = Jet2 { w, w_z, w_l, w_zz, w_zl };
    }
    Ok(jet)
}

/// Value and λ-derivative of the orbit of 0 along raw letters.
///
/// This is the first-order jet specialized to the fixed start `z0 = 0`,
/// used by the univariate Newton refinements.
pub fn orbit_end_jet1<S: ComplexScalar>(
    letters: &[u32],
    lambda: &S,
    prec: u32,
) -> Result<(S, S), JetError> {
    let guard = pole_guard(prec);
    let mut w = S::zero(prec);
    let mut w_l = S::zero(prec);
    for (i, &d) in letters.iter().enumerate() {
        let b = w.add_f64(1.0);
        if b.abs() < guard || !b.is_finite() {
            return Err(JetError::PoleOnOrbit(i + 1));
        }
        let inv = S::one(prec).div(&b);
        let a = inv.powu(d);
        let la = lambda.mul(&a);
        let m1 = la.mul(&inv).mul_f64(d as f64);
        w_l = a.sub(&m1.mul(&w_l));
        w = la;
    }
    Ok((w, w_l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::MpComplex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn map_at_zero_gives_lambda() {
        let lam = c(0.5, 0.0);
        let out = eval_map(2, &lam, &ExtendedComplex::Finite(c(0.0, 0.0)), 53);
        assert_eq!(out.finite().unwrap(), &c(0.5, 0.0));
    }

    #[test]
    fn pole_algebra() {
        let lam = c(1.0, 2.0);
        // z = −1 maps to ∞ …
        let inf = eval_map(3, &lam, &ExtendedComplex::Finite(c(-1.0, 0.0)), 53);
        assert!(inf.is_infinity());
        // … and ∞ maps to 0 exactly.
        let zero = eval_map::<Complex64>(4, &c(7.0, 0.0), &ExtendedComplex::Infinity, 53);
        assert_eq!(zero.finite().unwrap(), &c(0.0, 0.0));
    }

    #[test]
    fn orbit_shapes_and_hits() {
        let w = DegreeWord::new(3, vec![2]).unwrap();
        let orbit = eval_word(&w, &c(0.3, -0.1), &ExtendedComplex::Finite(c(0.0, 0.0)), 53);
        assert_eq!(orbit.points.len(), 2);
        assert_eq!(orbit.points[1].finite().unwrap(), &c(0.3, -0.1));

        // λ = 0 forces the orbit to stay at 0.
        let w = DegreeWord::new(3, vec![1, 2]).unwrap();
        let orbit = eval_word(&w, &c(0.0, 0.0), &ExtendedComplex::Finite(c(0.0, 0.0)), 53);
        for p in &orbit.points {
            assert_eq!(p.finite().unwrap(), &c(0.0, 0.0));
        }

        // λ = −1 hits at the first step.
        let w = DegreeWord::new(3, vec![1]).unwrap();
        let orbit = eval_word(&w, &c(-1.0, 0.0), &ExtendedComplex::Finite(c(0.0, 0.0)), 53);
        assert_eq!(orbit.hit_index, Some(1));
    }

    #[test]
    fn pole_passage_forces_zero_next() {
        // Word (1,1,1) at λ = −1: orbit 0 → −1 → ∞ → 0.
        let w = DegreeWord::new(3, vec![1, 1, 1]).unwrap();
        let orbit = eval_word(&w, &c(-1.0, 0.0), &ExtendedComplex::Finite(c(0.0, 0.0)), 53);
        assert_eq!(orbit.pole_passages, vec![2]);
        assert_eq!(orbit.points[3].finite().unwrap(), &c(0.0, 0.0));
    }

    #[test]
    fn iterate_converges_inside_shearer_disc() {
        // Fixed point of f_2 at λ = 0.05 solves z(1+z)² = 0.05.
        let w = DegreeWord::new(3, vec![2]).unwrap();
        let orbit = iterate_word(&w, &c(0.05, 0.0), 50, 53);
        let z = orbit.last().finite().unwrap();
        let residual = (z * (1.0 + z) * (1.0 + z) - 0.05).norm();
        assert!(residual < 1e-12, "residual {residual}");
        assert!(z.norm() < 1.0 / 3.0);
        assert_eq!(orbit.hit_index, None);
    }

    #[test]
    fn replay_is_bit_identical() {
        let w = DegreeWord::new(5, vec![1, 4, 2]).unwrap();
        let lam = MpComplex::with_f64(0.11, -0.07, 128);
        let z0 = ExtendedComplex::Finite(MpComplex::with_f64(0.0, 0.0, 128));
        let a = eval_word(&w, &lam, &z0, 128);
        let b = eval_word(&w, &lam, &z0, 128);
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn jet_single_letter_values() {
        // w_z = -dλ at z0 = 0.
        let w = DegreeWord::new(3, vec![2]).unwrap();
        let jet = eval_jet(&w, &c(0.4, 0.0), &c(0.0, 0.0), 53).unwrap();
        assert!((jet.w_z - c(-0.8, 0.0)).norm() < 1e-15);
        // w_l = 1 for a single letter at z0 = 0.
        let w = DegreeWord::new(5, vec![3]).unwrap();
        let jet = eval_jet(&w, &c(1.0, 1.0), &c(0.0, 0.0), 53).unwrap();
        assert!((jet.w_l - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn jet_derivative_identity_single_letter() {
        // w_z (1+z) + d w = 0 for single letters.
        let samples = [
            (1u32, c(0.3, 0.4), c(0.2, -0.1)),
            (3, c(-0.5, 0.2), c(0.4, 0.9)),
            (7, c(1.5, -2.0), c(-0.3, 0.8)),
        ];
        for (d, lam, z) in samples {
            let w = DegreeWord::new(9, vec![d]).unwrap();
            let jet = eval_jet(&w, &lam, &z, 53).unwrap();
            let lhs = jet.w_z * (1.0 + z) + (d as f64) * jet.w;
            assert!(lhs.norm() <= 1e-12 * jet.w.norm().max(1.0), "{lhs}");
        }
    }

    #[test]
    fn jet_errors_on_pole() {
        let w = DegreeWord::new(3, vec![1, 2]).unwrap();
        let err = eval_jet(&w, &c(2.0, 0.0), &c(-1.0, 0.0), 53).unwrap_err();
        assert_eq!(err, JetError::PoleOnOrbit(1));
    }

    #[test]
    fn jet1_matches_full_jet() {
        let w = DegreeWord::new(4, vec![1, 3, 2]).unwrap();
        let lam = c(0.21, 0.13);
        let jet = eval_jet(&w, &lam, &c(0.0, 0.0), 53).unwrap();
        let (v, dl) = orbit_end_jet1(w.letters(), &lam, 53).unwrap();
        assert!((jet.w - v).norm() < 1e-15);
        assert!((jet.w_l - dl).norm() < 1e-15);
    }
}
