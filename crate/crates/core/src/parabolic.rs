//! Parameters where a composition has a fixed point of prescribed
//! multiplier.
//!
//! The solver runs Newton iteration on the two-variable system
//! `F(λ, z) = (g(z) − z, g'(z) − μ)` with the Jacobian taken from the
//! second-order jet. Multiplier curves continue such solutions around
//! `μ = e^(iθ)`, and the classifier lists all fixed points of a word at a
//! fixed λ together with their multipliers.

use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{eval_jet, JetError};
use crate::mp::{newton_tolerance, pole_guard, MpComplex};
use crate::region::{shearer_radius, udelta_witness, UdeltaWitness};
use crate::roots::all_roots;
use crate::scalar::ComplexScalar;
use crate::word::DegreeWord;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no convergence after {iters} iterations, residual {residual:.3e}")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("iterate entered the pole guard at orbit step {step}")]
    PoleCollision { step: usize },
    #[error("jacobian condition {condition:.3e} above threshold")]
    SingularJacobian { condition: f64 },
    #[error("lambda = 0 makes the composition constant")]
    DegenerateMap,
    #[error("continuation stalled at theta = {theta}: {reason}")]
    ContinuationStall {
        theta: f64,
        reason: String,
        partial: Vec<ParabolicSolution>,
    },
    #[error("fixed-point count {degree} too large to classify at this lambda")]
    ClassifyInfeasible { degree: usize },
    #[error("multiplier curve needs a mu=1 seed for multi-letter words")]
    MissingSeed,
}

/// Newton controls. Defaults follow the residual contract at 53 bits.
#[derive(Debug, Clone)]
pub struct SolveSettings {
    pub precision: u32,
    /// Residual bound for both equations; `None` picks the precision default.
    pub tol: Option<f64>,
    pub max_iters: usize,
    pub max_halvings: usize,
    pub condition_threshold: f64,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            precision: 53,
            tol: None,
            max_iters: 200,
            max_halvings: 30,
            condition_threshold: 1e14,
        }
    }
}

impl SolveSettings {
    pub fn with_precision(precision: u32) -> Self {
        Self {
            precision,
            ..Self::default()
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or_else(|| newton_tolerance(self.precision))
    }
}

/// A converged solve: λ and fixed point z with both residuals.
#[derive(Debug, Clone)]
pub struct ParabolicSolution {
    pub word: DegreeWord,
    pub mu: MpComplex,
    pub lambda: MpComplex,
    pub z: MpComplex,
    pub res_fix: f64,
    pub res_mult: f64,
    pub jacobian_condition: f64,
    pub precision: u32,
}

impl ParabolicSolution {
    pub fn lambda_c64(&self) -> Complex64 {
        self.lambda.to_c64()
    }

    pub fn z_c64(&self) -> Complex64 {
        self.z.to_c64()
    }
}

fn newton_prescribed<S: ComplexScalar>(
    word: &DegreeWord,
    mu: &S,
    seed_lambda: &S,
    seed_z: &S,
    settings: &SolveSettings,
) -> Result<(S, S, f64, f64, f64), SolveError> {
    let prec = settings.precision;
    let tol = settings.tolerance();
    let mut lam = seed_lambda.clone();
    let mut z = seed_z.clone();
    let jet_err = |e: JetError| {
        let JetError::PoleOnOrbit(step) = e;
        SolveError::PoleCollision { step }
    };
    let mut jet = eval_jet(word, &lam, &z, prec).map_err(jet_err)?;
    let mut res = residuals(&jet, &z, mu);
    for iter in 0..settings.max_iters {
        if res.0 <= tol && res.1 <= tol {
            let condition = condition_2x2(&jet);
            if condition > settings.condition_threshold {
                return Err(SolveError::SingularJacobian { condition });
            }
            if z.add_f64(1.0).abs() <= pole_guard(prec) {
                return Err(SolveError::PoleCollision { step: 0 });
            }
            return Ok((lam, z, res.0, res.1, condition));
        }
        let f1 = jet.w.sub(&z);
        let f2 = jet.w_z.sub(mu);
        let a = jet.w_l.clone();
        let b = jet.w_z.add_f64(-1.0);
        let c = jet.w_zl.clone();
        let d = jet.w_zz.clone();
        let det = a.mul(&d).sub(&b.mul(&c));
        if det.abs() == 0.0 {
            return Err(SolveError::SingularJacobian {
                condition: f64::INFINITY,
            });
        }
        let dlam = f2.mul(&b).sub(&f1.mul(&d)).div(&det);
        let dz = f1.mul(&c).sub(&f2.mul(&a)).div(&det);
        // Damped step: halve until the residual norm stops increasing.
        let mut scale = 1.0f64;
        let mut accepted = false;
        for _ in 0..=settings.max_halvings {
            let try_lam = lam.add(&dlam.mul_f64(scale));
            let try_z = z.add(&dz.mul_f64(scale));
            if let Ok(try_jet) = eval_jet(word, &try_lam, &try_z, prec) {
                let try_res = residuals(&try_jet, &try_z, mu);
                if try_res.0.max(try_res.1) < res.0.max(res.1) || scale < 1e-6 {
                    lam = try_lam;
                    z = try_z;
                    jet = try_jet;
                    res = try_res;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            return Err(SolveError::NoConvergence {
                iters: iter,
                residual: res.0.max(res.1),
            });
        }
    }
    if res.0 <= tol && res.1 <= tol {
        let condition = condition_2x2(&jet);
        return Ok((lam, z, res.0, res.1, condition));
    }
    Err(SolveError::NoConvergence {
        iters: settings.max_iters,
        residual: res.0.max(res.1),
    })
}

fn residuals<S: ComplexScalar>(jet: &crate::dynamics::Jet2<S>, z: &S, mu: &S) -> (f64, f64) {
    (jet.w.sub(z).abs(), jet.w_z.sub(mu).abs())
}

fn condition_2x2<S: ComplexScalar>(jet: &crate::dynamics::Jet2<S>) -> f64 {
    let a = jet.w_l.abs();
    let b = jet.w_z.add_f64(-1.0).abs();
    let c = jet.w_zl.abs();
    let d = jet.w_zz.abs();
    let det = jet
        .w_l
        .mul(&jet.w_zz)
        .sub(&jet.w_z.add_f64(-1.0).mul(&jet.w_zl))
        .abs();
    let frob = (a * a + b * b + c * c + d * d).sqrt();
    if det == 0.0 {
        f64::INFINITY
    } else {
        frob * frob / det
    }
}

/// Finds (λ, z) near the seeds with `g(z) = z` and `g'(z) = μ`.
pub fn solve_parabolic(
    word: &DegreeWord,
    mu: Complex64,
    seed_lambda: Complex64,
    seed_z: Complex64,
    settings: &SolveSettings,
) -> Result<ParabolicSolution, SolveError> {
    let prec = settings.precision;
    if prec <= 53 {
        let (lam, z, res_fix, res_mult, condition) =
            newton_prescribed::<Complex64>(word, &mu, &seed_lambda, &seed_z, settings)?;
        Ok(ParabolicSolution {
            word: word.clone(),
            mu: MpComplex::from_c64(mu, 53),
            lambda: MpComplex::from_c64(lam, 53),
            z: MpComplex::from_c64(z, 53),
            res_fix,
            res_mult,
            jacobian_condition: condition,
            precision: 53,
        })
    } else {
        let mu_mp = MpComplex::from_c64(mu, prec);
        let (lam, z, res_fix, res_mult, condition) = newton_prescribed::<MpComplex>(
            word,
            &mu_mp,
            &MpComplex::from_c64(seed_lambda, prec),
            &MpComplex::from_c64(seed_z, prec),
            settings,
        )?;
        Ok(ParabolicSolution {
            word: word.clone(),
            mu: mu_mp,
            lambda: lam,
            z,
            res_fix,
            res_mult,
            jacobian_condition: condition,
            precision: prec,
        })
    }
}

/// Closed-form prescribed-multiplier solution for a single letter `d`:
/// eliminating z from `{λ = z(1+z)^d, −dz/(1+z) = μ}` gives
/// `z = −μ/(d+μ)` and `λ = −μ d^d/(d+μ)^(d+1)`.
pub fn single_letter_prescribed(d: u32, mu: Complex64) -> (Complex64, Complex64) {
    let df = d as f64;
    let z = -mu / (mu + df);
    let lambda = -mu * df.powi(d as i32) / (mu + df).powi(d as i32 + 1);
    (lambda, z)
}

/// Stability class by multiplier modulus, with a numeric indifference band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Attracting,
    Repelling,
    Indifferent,
}

/// Band around `|multiplier| = 1` classified as indifferent.
pub const INDIFFERENCE_BAND: f64 = 1e-9;

pub fn classify_multiplier(multiplier: Complex64) -> Classification {
    let m = multiplier.norm();
    if (m - 1.0).abs() <= INDIFFERENCE_BAND {
        Classification::Indifferent
    } else if m < 1.0 {
        Classification::Attracting
    } else {
        Classification::Repelling
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointRecord {
    pub z: Complex64,
    pub multiplier: Complex64,
    pub classification: Classification,
}

#[derive(Debug, Clone)]
pub struct ClassifyResult {
    pub records: Vec<FixedPointRecord>,
    /// Pairs of record indices closer than the collision tolerance.
    pub collisions: Vec<(usize, usize)>,
    /// `deg_z` of the fixed-point polynomial, i.e. `d_1⋯d_k + 1`.
    pub expected_count: usize,
    /// Roots whose multiplier could not be evaluated (orbit through pole).
    pub failed: Vec<Complex64>,
}

/// Largest `d_1⋯d_k` handled by the all-roots route.
pub const CLASSIFY_ALL_ROOTS_CAP: usize = 512;

/// Coefficients in `w = 1+z` of the fixed-point condition `P − zQ` at a
/// fixed λ. Working in w keeps the coefficients bounded when |λ| < 1.
fn fixed_point_poly_w(word: &DegreeWord, lambda: Complex64) -> Vec<Complex64> {
    let mut q = vec![Complex64::new(0.0, 0.0); word.letters()[0] as usize + 1];
    *q.last_mut().unwrap() = Complex64::new(1.0, 0.0);
    let mut p = vec![lambda];
    for &d in &word.letters()[1..] {
        let new_p = scale(&pow_poly(&q, d), lambda);
        let new_q = pow_poly(&add_poly(&q, &p), d);
        p = new_p;
        q = new_q;
    }
    // l = P − (w−1)Q
    let mut l = vec![Complex64::new(0.0, 0.0); q.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        l[i] += c;
    }
    for (i, &c) in q.iter().enumerate() {
        l[i] += c; // +Q
        l[i + 1] -= c; // −wQ
    }
    l
}

fn add_poly(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn mul_poly(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.norm() == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pow_poly(a: &[Complex64], n: u32) -> Vec<Complex64> {
    let mut acc: Option<Vec<Complex64>> = None;
    let mut base = a.to_vec();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(v) => mul_poly(&v, &base),
            });
        }
        n >>= 1;
        if n > 0 {
            base = mul_poly(&base, &base);
        }
    }
    acc.unwrap()
}

fn scale(a: &[Complex64], s: Complex64) -> Vec<Complex64> {
    a.iter().map(|&c| c * s).collect()
}

/// All fixed points of the word's composition at λ, with multipliers.
///
/// Roots of the fixed-point polynomial are found numerically; for products
/// of degrees beyond [`CLASSIFY_ALL_ROOTS_CAP`] inside the attracting disc
/// the fixed points are constructed instead from the contracting inverse
/// branches (forward iteration for the attracting point, inverse-branch
/// iteration for the repelling ones).
pub fn classify_fixed_points(
    word: &DegreeWord,
    lambda: Complex64,
    precision: u32,
) -> Result<ClassifyResult, SolveError> {
    if lambda.norm() == 0.0 {
        return Err(SolveError::DegenerateMap);
    }
    let degree = word.degree_product_usize().unwrap_or(usize::MAX);
    let expected_count = degree.saturating_add(1);
    let inside_disc = lambda.norm() < shearer_radius(word.delta()).to_f64();
    let roots: Vec<Complex64> = if degree <= CLASSIFY_ALL_ROOTS_CAP {
        let l = fixed_point_poly_w(word, lambda);
        all_roots(&l, Some(1.0))
            .into_iter()
            .map(|w| w - 1.0)
            .collect()
    } else if inside_disc {
        constructive_fixed_points(word, lambda, degree)
    } else {
        return Err(SolveError::ClassifyInfeasible { degree });
    };
    let mut records = Vec::with_capacity(roots.len());
    let mut failed = Vec::new();
    for z in roots {
        let z = polish_fixed_point(word, lambda, z, precision);
        match eval_jet(word, &lambda, &z, precision) {
            Ok(jet) => records.push(FixedPointRecord {
                z,
                multiplier: jet.w_z,
                classification: classify_multiplier(jet.w_z),
            }),
            Err(_) => failed.push(z),
        }
    }
    let mut collisions = Vec::new();
    for i in 0..records.len() {
        for j in (i + 1)..records.len() {
            if (records[i].z - records[j].z).norm() < 1e-6 {
                collisions.push((i, j));
            }
        }
    }
    // A collided pair usually marks a double fixed point, which satisfies
    // g'(z) = 1 exactly; sharpen it by Newton on g'(z) − 1 so the
    // multiplier lands inside the indifference band.
    for &(i, j) in &collisions {
        let mid = (records[i].z + records[j].z) * 0.5;
        if let Some((z, multiplier)) = tangency_polish(word, lambda, mid, precision) {
            for idx in [i, j] {
                records[idx].z = z;
                records[idx].multiplier = multiplier;
                records[idx].classification = classify_multiplier(multiplier);
            }
        }
    }
    Ok(ClassifyResult {
        records,
        collisions,
        expected_count,
        failed,
    })
}

fn tangency_polish(
    word: &DegreeWord,
    lambda: Complex64,
    mut z: Complex64,
    prec: u32,
) -> Option<(Complex64, Complex64)> {
    for _ in 0..30 {
        let jet = eval_jet(word, &lambda, &z, prec).ok()?;
        if jet.w_zz.norm() < 1e-12 {
            return None;
        }
        let step = (jet.w_z - 1.0) / jet.w_zz;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    let jet = eval_jet(word, &lambda, &z, prec).ok()?;
    let settled = (jet.w - z).norm() <= 1e-9 * (1.0 + z.norm())
        && (jet.w_z.norm() - 1.0).abs() <= INDIFFERENCE_BAND;
    settled.then_some((z, jet.w_z))
}

fn polish_fixed_point(
    word: &DegreeWord,
    lambda: Complex64,
    mut z: Complex64,
    prec: u32,
) -> Complex64 {
    for _ in 0..8 {
        let Ok(jet) = eval_jet(word, &lambda, &z, prec) else {
            return z;
        };
        let denom = jet.w_z - 1.0;
        if denom.norm() < 1e-14 {
            break;
        }
        let step = (jet.w - z) / denom;
        z -= step;
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Fixed points built from the contraction structure available when |λ| is
/// below the attracting-disc radius.
fn constructive_fixed_points(
    word: &DegreeWord,
    lambda: Complex64,
    degree: usize,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(degree + 1);
    // Attracting point: the forward orbit of 0 contracts into |z| < 1/Δ.
    let mut z = Complex64::new(0.0, 0.0);
    for _ in 0..400 {
        let mut next = z;
        for &d in word.letters() {
            next = lambda / (1.0 + next).powi(d as i32);
        }
        let delta = (next - z).norm();
        z = next;
        if delta < 1e-14 {
            break;
        }
    }
    out.push(z);
    // Repelling points: one per choice of inverse branch at each letter,
    // applied in reverse word order; each composed branch contracts
    // B(−1, (Δ−1)/Δ) into itself.
    let letters = word.letters();
    let k = letters.len();
    let mut indices = vec![0u32; k];
    let start = Complex64::new(-0.5, 0.05);
    loop {
        let mut u = start;
        for _ in 0..600 {
            let mut v = u;
            for pos in (0..k).rev() {
                let d = letters[pos];
                v = inverse_branch(lambda, d, indices[pos], v);
            }
            let delta = (v - u).norm();
            u = v;
            if delta < 1e-13 {
                break;
            }
        }
        out.push(u);
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            indices[pos] += 1;
            if indices[pos] < letters[pos] {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

/// The j-th inverse branch of `f_d` at w: `ζ_d^j (λ/w)^(1/d) − 1`.
fn inverse_branch(lambda: Complex64, d: u32, j: u32, w: Complex64) -> Complex64 {
    let ratio = lambda / w;
    let r = ratio.norm().powf(1.0 / d as f64);
    let phi = ratio.arg() / d as f64 + 2.0 * std::f64::consts::PI * j as f64 / d as f64;
    Complex64::new(r * phi.cos(), r * phi.sin()) - 1.0
}

/// One sample of a multiplier curve at its target angle.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub theta: f64,
    pub solution: ParabolicSolution,
}

#[derive(Debug, Clone)]
pub struct MultiplierCurve {
    pub word: DegreeWord,
    pub points: Vec<CurvePoint>,
    /// Sample indices where the corrector jumped branches.
    pub jumps: Vec<usize>,
}

/// Smallest and largest continuation steps in θ.
pub const THETA_STEP_MIN: f64 = 2.0 * std::f64::consts::PI / 4096.0;
pub const THETA_STEP_MAX: f64 = 2.0 * std::f64::consts::PI / 64.0;

/// Traces λ(θ) with `μ = e^(iθ)` over `theta_samples` uniform angles by
/// predictor–corrector continuation from a μ = 1 solution.
///
/// Single-letter words seed themselves from the closed form; longer words
/// need `mu1_seed = (λ, z)`.
pub fn multiplier_curve(
    word: &DegreeWord,
    theta_samples: usize,
    mu1_seed: Option<(Complex64, Complex64)>,
    settings: &SolveSettings,
) -> Result<MultiplierCurve, SolveError> {
    assert!(theta_samples >= 8);
    let seed = match mu1_seed {
        Some(seed) => seed,
        None if word.len() == 1 => {
            single_letter_prescribed(word.letters()[0], Complex64::new(1.0, 0.0))
        }
        None => return Err(SolveError::MissingSeed),
    };
    let base = solve_parabolic(word, Complex64::new(1.0, 0.0), seed.0, seed.1, settings)?;
    let mut points = Vec::with_capacity(theta_samples);
    let mut jumps = Vec::new();
    let mut theta = 0.0f64;
    let mut lam = base.lambda_c64();
    let mut z = base.z_c64();
    points.push(CurvePoint {
        theta,
        solution: base,
    });
    let mut corrector = settings.clone();
    corrector.max_iters = 60;
    for j in 1..theta_samples {
        let target = 2.0 * std::f64::consts::PI * j as f64 / theta_samples as f64;
        let mut step = THETA_STEP_MAX.min(target - theta);
        while theta < target - 1e-15 {
            step = step.min(target - theta);
            let (plam, pz) = tangent_predict(word, lam, z, theta, step, &corrector);
            let mu = Complex64::from_polar(1.0, theta + step);
            match solve_parabolic(word, mu, plam, pz, &corrector) {
                Ok(sol) => {
                    let nlam = sol.lambda_c64();
                    // A corrected point far from the prediction means the
                    // corrector landed on another branch.
                    if (nlam - plam).norm() > 0.2 * (1.0 + plam.norm()) {
                        jumps.push(j);
                    }
                    z = sol.z_c64();
                    lam = nlam;
                    theta += step;
                    step = (step * 2.0).min(THETA_STEP_MAX);
                }
                Err(err) => {
                    step *= 0.5;
                    if step < THETA_STEP_MIN {
                        return Err(SolveError::ContinuationStall {
                            theta,
                            reason: err.to_string(),
                            partial: points.into_iter().map(|p| p.solution).collect(),
                        });
                    }
                }
            }
        }
        let mu = Complex64::from_polar(1.0, target);
        let sol = solve_parabolic(word, mu, lam, z, &corrector).map_err(|err| {
            SolveError::ContinuationStall {
                theta: target,
                reason: err.to_string(),
                partial: Vec::new(),
            }
        })?;
        lam = sol.lambda_c64();
        z = sol.z_c64();
        points.push(CurvePoint {
            theta: target,
            solution: sol,
        });
    }
    Ok(MultiplierCurve {
        word: word.clone(),
        points,
        jumps,
    })
}

/// Tangent prediction from implicit differentiation of F(λ, z; θ) = 0.
fn tangent_predict(
    word: &DegreeWord,
    lam: Complex64,
    z: Complex64,
    theta: f64,
    step: f64,
    settings: &SolveSettings,
) -> (Complex64, Complex64) {
    let Ok(jet) = eval_jet(word, &lam, &z, settings.precision) else {
        return (lam, z);
    };
    let mu = Complex64::from_polar(1.0, theta);
    let dmu = Complex64::new(0.0, 1.0) * mu; // dμ/dθ
    let a = jet.w_l;
    let b = jet.w_z - 1.0;
    let c = jet.w_zl;
    let d = jet.w_zz;
    let det = a * d - b * c;
    if det.norm() < 1e-300 {
        return (lam, z);
    }
    // J (dλ, dz)ᵀ = (0, dμ)ᵀ
    let dlam = -dmu * b / det;
    let dz = dmu * a / det;
    (lam + dlam * step, z + dz * step)
}

/// One reference row: the word, the published seed, and the published
/// minimal-modulus witness value.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub delta: u32,
    pub letters: &'static [u32],
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub alpha_abs: f64,
}

/// Built-in rows: for each Δ a word, the published parabolic parameter used
/// as the solver seed, and the published |α| cross-check value.
pub const REFERENCE_ROWS: [ReferenceRow; 7] = [
    ReferenceRow { delta: 3, letters: &[1, 2], lambda_re: 0.7624680, lambda_im: 2.5253695, alpha_abs: 0.97581 },
    ReferenceRow { delta: 4, letters: &[1, 3], lambda_re: 0.37725715, lambda_im: 1.21796118, alpha_abs: 0.99987 },
    ReferenceRow { delta: 5, letters: &[1, 4, 4], lambda_re: -0.24803954, lambda_im: 0.17613988, alpha_abs: 0.98607 },
    ReferenceRow { delta: 6, letters: &[1, 5, 5], lambda_re: -0.19657017, lambda_im: 0.14664968, alpha_abs: 0.99630 },
    ReferenceRow { delta: 7, letters: &[2, 6, 6], lambda_re: -0.15604600, lambda_im: 0.14898604, alpha_abs: 0.97830 },
    ReferenceRow { delta: 8, letters: &[2, 7, 7], lambda_re: -0.13276176, lambda_im: 0.12728769, alpha_abs: 0.98408 },
    ReferenceRow { delta: 9, letters: &[2, 8, 8], lambda_re: -0.11587455, lambda_im: 0.11090067, alpha_abs: 0.98967 },
];

pub fn reference_row(delta: u32) -> Option<&'static ReferenceRow> {
    REFERENCE_ROWS.iter().find(|r| r.delta == delta)
}

/// A solved reference row together with its membership witness.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub delta: u32,
    pub word: DegreeWord,
    pub solution: ParabolicSolution,
    pub witness: UdeltaWitness,
    pub seed_lambda: Complex64,
    pub reference_alpha_abs: f64,
}

/// Re-derives the row for Δ: solves with μ = 1 from the built-in seed and
/// attaches the membership witness of the solved λ.
pub fn reproduce_table(delta: u32, settings: &SolveSettings) -> Result<TableRow, SolveError> {
    let row = reference_row(delta).ok_or(SolveError::DegenerateMap)?;
    let word = DegreeWord::new(delta, row.letters.to_vec()).expect("reference rows are valid");
    let seed_lambda = Complex64::new(row.lambda_re, row.lambda_im);
    let seed_z = seed_z_for(&word, seed_lambda, Complex64::new(1.0, 0.0), settings.precision)?;
    let solution = solve_parabolic(&word, Complex64::new(1.0, 0.0), seed_lambda, seed_z, settings)?;
    let witness = udelta_witness(delta, solution.lambda_c64(), settings.precision);
    Ok(TableRow {
        delta,
        word,
        solution,
        witness,
        seed_lambda,
        reference_alpha_abs: row.alpha_abs,
    })
}

/// Fixed point of the word at `seed_lambda` whose multiplier is closest to
/// the target; the natural z-seed for the two-variable Newton.
pub fn seed_z_for(
    word: &DegreeWord,
    seed_lambda: Complex64,
    mu: Complex64,
    precision: u32,
) -> Result<Complex64, SolveError> {
    let classified = classify_fixed_points(word, seed_lambda, precision)?;
    classified
        .records
        .iter()
        .min_by(|a, b| {
            (a.multiplier - mu)
                .norm()
                .partial_cmp(&(b.multiplier - mu).norm())
                .unwrap()
        })
        .map(|r| r.z)
        .ok_or(SolveError::NoConvergence {
            iters: 0,
            residual: f64::INFINITY,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_letter_closed_forms() {
        for delta in 3..=9u32 {
            let d = delta - 1;
            // μ = 1 gives λ = −(Δ−1)^(Δ−1)/Δ^Δ, z = −1/Δ.
            let (lam, z) = single_letter_prescribed(d, c(1.0, 0.0));
            let expect = -shearer_radius(delta).to_f64();
            assert!((lam - c(expect, 0.0)).norm() < 1e-15);
            assert!((z - c(-1.0 / delta as f64, 0.0)).norm() < 1e-15);
            // μ = −1 gives the endpoint constant (Δ−1)^(Δ−1)/(Δ−2)^Δ.
            let (lam, _) = single_letter_prescribed(d, c(-1.0, 0.0));
            let expect = crate::region::lambda_star(delta).to_f64();
            assert!((lam - c(expect, 0.0)).norm() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn newton_matches_closed_form() {
        for delta in [3u32, 5, 9] {
            let d = delta - 1;
            let word = DegreeWord::new(delta, vec![d]).unwrap();
            let (lam, z) = single_letter_prescribed(d, c(1.0, 0.0));
            let sol = solve_parabolic(
                &word,
                c(1.0, 0.0),
                lam + c(1e-3, -2e-3),
                z + c(-1e-3, 1e-3),
                &SolveSettings::default(),
            )
            .unwrap();
            assert!((sol.lambda_c64() - lam).norm() < 1e-12);
            assert!((sol.z_c64() - z).norm() < 1e-12);
            assert!(sol.res_fix <= 1e-13 && sol.res_mult <= 1e-13);
        }
    }

    #[test]
    fn table_rows_reproduce() {
        for delta in 3..=9 {
            let row = reproduce_table(delta, &SolveSettings::default()).unwrap();
            let reference = reference_row(delta).unwrap();
            let d = row.solution.lambda_c64() - c(reference.lambda_re, reference.lambda_im);
            assert!(d.re.abs() < 1e-6 && d.im.abs() < 1e-6, "delta {delta}: {d}");
            assert!(
                (row.witness.alpha_min.norm() - reference.alpha_abs).abs() < 1e-4,
                "delta {delta}"
            );
            assert!(row.witness.member());
        }
    }

    #[test]
    fn seed_perturbation_converges_to_same_lambda() {
        let word = DegreeWord::new(3, vec![1, 2]).unwrap();
        let seed = c(0.7624680, 2.5253695);
        let z = seed_z_for(&word, seed, c(1.0, 0.0), 53).unwrap();
        let a = solve_parabolic(&word, c(1.0, 0.0), seed, z, &SolveSettings::default()).unwrap();
        let b = solve_parabolic(
            &word,
            c(1.0, 0.0),
            seed + c(1e-3, 1e-3),
            z + c(1e-3, -1e-3),
            &SolveSettings::default(),
        )
        .unwrap();
        assert!((a.lambda_c64() - b.lambda_c64()).norm() < 1e-9);
    }

    #[test]
    fn classify_small_word_counts() {
        // f_2 at λ = 0.1: one attracting point inside |z| < 1/3 and two
        // repelling points inside |z+1| < 2/3.
        let word = DegreeWord::new(3, vec![2]).unwrap();
        let result = classify_fixed_points(&word, c(0.1, 0.0), 53).unwrap();
        assert_eq!(result.records.len(), 3);
        let attracting: Vec<_> = result
            .records
            .iter()
            .filter(|r| r.classification == Classification::Attracting)
            .collect();
        assert_eq!(attracting.len(), 1);
        assert!(attracting[0].z.norm() < 1.0 / 3.0);
        let repelling: Vec<_> = result
            .records
            .iter()
            .filter(|r| r.classification == Classification::Repelling)
            .collect();
        assert_eq!(repelling.len(), 2);
        for r in repelling {
            assert!((r.z + 1.0).norm() < 2.0 / 3.0);
        }
    }

    #[test]
    fn classify_parabolic_lambda() {
        // λ = −4/27 for f_2 has the multiplier-1 point z = −1/3.
        let word = DegreeWord::new(3, vec![2]).unwrap();
        let result = classify_fixed_points(&word, c(-4.0 / 27.0, 0.0), 53).unwrap();
        let indifferent: Vec<_> = result
            .records
            .iter()
            .filter(|r| r.classification == Classification::Indifferent)
            .collect();
        assert!(!indifferent.is_empty());
        assert!(indifferent
            .iter()
            .any(|r| (r.z - c(-1.0 / 3.0, 0.0)).norm() < 1e-5));
        assert!(!result.collisions.is_empty());
    }

    #[test]
    fn classify_rejects_zero_lambda() {
        let word = DegreeWord::new(3, vec![2]).unwrap();
        assert!(matches!(
            classify_fixed_points(&word, c(0.0, 0.0), 53),
            Err(SolveError::DegenerateMap)
        ));
    }

    #[test]
    fn constructive_route_matches_all_roots() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for delta in [3u32, 5] {
            let radius = shearer_radius(delta).to_f64();
            for _ in 0..10 {
                let len = rng.gen_range(1..=3usize);
                let letters: Vec<u32> = (0..len).map(|_| rng.gen_range(1..delta)).collect();
                let word = DegreeWord::new(delta, letters).unwrap();
                let r = radius * rng.gen_range(0.05..0.95);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                let lambda = Complex64::from_polar(r, phi);
                let degree = word.degree_product_usize().unwrap();
                let via_roots = classify_fixed_points(&word, lambda, 53).unwrap();
                let constructed = constructive_fixed_points(&word, lambda, degree);
                assert_eq!(constructed.len(), via_roots.records.len());
                for z in constructed {
                    let nearest = via_roots
                        .records
                        .iter()
                        .map(|rec| (rec.z - z).norm())
                        .fold(f64::INFINITY, f64::min);
                    assert!(nearest < 1e-6, "unmatched fixed point {z}");
                }
            }
        }
    }

    #[test]
    fn curve_single_letter_matches_boundary_map() {
        // For the single letter Δ−1 the multiplier curve coincides with the
        // α-parameterization of the region boundary at α = e^(iθ).
        let word = DegreeWord::new(3, vec![2]).unwrap();
        let curve = multiplier_curve(&word, 64, None, &SolveSettings::default()).unwrap();
        assert_eq!(curve.points.len(), 64);
        for point in &curve.points {
            let alpha = Complex64::from_polar(1.0, point.theta);
            let expect = crate::region::alpha_to_lambda(3, alpha).unwrap();
            assert!(
                (point.solution.lambda_c64() - expect).norm() < 1e-10,
                "theta {}",
                point.theta
            );
        }
    }
}
