//! Trees built from degree words, their independence polynomials, and
//! certified zero witnesses.
//!
//! A word `(d_1, …, d_k)` names the tree T_k grown level by level: T_1 is
//! a single vertex and T_m is a root joined to `d_m` copies of T_{m−1}.
//! Its independence polynomial satisfies
//! `Z_m = Z_{m−1}^{d_m} + λ Z_{m−2}^{d_m d_{m−1}}`, and the orbit of 0
//! under the word computes exactly the occupation ratios of the levels:
//! a final orbit value of −1 certifies `Z_{T_k}(λ) = 0`.

use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Float, Integer};
use thiserror::Error;

use crate::dynamics::{eval_word, orbit_end_jet1, ExtendedComplex, JetError, Orbit};
use crate::mp::{certification_tolerance, hit_tolerance, MpComplex};
use crate::region::{udelta_witness, UdeltaWitness};
use crate::word::DegreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("estimated coefficient volume {estimated_bits} bits exceeds the cap {cap}")]
    CapExceeded { estimated_bits: u128, cap: u128 },
    #[error("tree has {vertices} vertices, beyond the brute-force limit {limit}")]
    TooLarge { vertices: String, limit: usize },
    #[error("tree has no explicit adjacency (vertex count above the cap)")]
    NoAdjacency,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("the orbit never reaches -1 within tolerance")]
    NoHit,
    #[error("the orbit hits -1 early, at step {index}; certify the prefix instead")]
    EarlyHit { index: usize },
    #[error("the orbit passes through the pole at step {index}")]
    PoleCollision { index: usize },
}

/// Explicit adjacency as a parent-pointer list; vertex 0 is the root.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub parent: Vec<u32>,
}

impl Adjacency {
    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Degree of every vertex.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.parent.len()];
        for (v, &p) in self.parent.iter().enumerate().skip(1) {
            deg[v] += 1;
            deg[p as usize] += 1;
        }
        deg
    }
}

/// Vertices allowed in an explicit adjacency.
pub const ADJACENCY_CAP: usize = 1_000_000;

/// The tree named by a degree word.
#[derive(Debug, Clone)]
pub struct TreeSpec {
    pub word: DegreeWord,
    /// `|T_1|, …, |T_k|` with `|T_m| = 1 + d_m |T_{m−1}|`.
    pub level_sizes: Vec<Integer>,
    pub vertex_count: Integer,
    /// Present only when the vertex count is at most [`ADJACENCY_CAP`].
    pub adjacency: Option<Adjacency>,
}

/// Builds the level-size ledger and, when small enough, the explicit tree.
pub fn build_tree(word: &DegreeWord) -> TreeSpec {
    let mut level_sizes = Vec::with_capacity(word.len());
    let mut size = Integer::from(1);
    level_sizes.push(size.clone());
    for &d in &word.letters()[1..] {
        size = Integer::from(&size * d) + 1u32;
        level_sizes.push(size.clone());
    }
    let vertex_count = size;
    let adjacency = if vertex_count <= ADJACENCY_CAP as u64 {
        Some(build_adjacency(word, vertex_count.to_usize().unwrap()))
    } else {
        None
    };
    TreeSpec {
        word: word.clone(),
        level_sizes,
        vertex_count,
        adjacency,
    }
}

fn build_adjacency(word: &DegreeWord, n: usize) -> Adjacency {
    // Iteratively: tree(m) has its root at index 0; tree(m+1) prepends a
    // new root and attaches d copies of tree(m), shifting indices.
    let mut parent: Vec<u32> = vec![0];
    for &d in &word.letters()[1..] {
        let old = parent.clone();
        let old_n = old.len() as u32;
        let mut next: Vec<u32> = Vec::with_capacity(1 + d as usize * old.len());
        next.push(0);
        for copy in 0..d {
            let offset = 1 + copy * old_n;
            // copy root attaches to the new root
            next.push(0);
            for (v, &p) in old.iter().enumerate().skip(1) {
                debug_assert!(v > 0);
                next.push(p + offset);
            }
        }
        parent = next;
    }
    debug_assert_eq!(parent.len(), n);
    Adjacency { parent }
}

/// Independence polynomial with exact nonnegative integer coefficients;
/// `coeffs[j]` counts independent sets of size j.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependencePolynomial {
    pub coeffs: Vec<Integer>,
}

impl IndependencePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Integer::from(1)],
        }
    }

    fn one_plus_lambda() -> Self {
        Self {
            coeffs: vec![Integer::from(1), Integer::from(1)],
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self { coeffs: out }
    }

    fn pow(&self, e: u64) -> Self {
        assert!(e >= 1);
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(v) => v.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    fn shift_times_lambda(mut self) -> Self {
        self.coeffs.insert(0, Integer::new());
        Self {
            coeffs: self.coeffs,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[Integer], i: usize| v.get(i).cloned().unwrap_or_default();
        Self {
            coeffs: (0..n)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        }
    }
}

/// Bits of coefficient volume allowed in the exact recursion.
pub const EXACT_POLY_BIT_CAP: u128 = 1 << 28;

/// Exact `Z_{T_k}` by polynomial powering through the level recursion.
pub fn indep_poly_exact(word: &DegreeWord) -> Result<IndependencePolynomial, TreeError> {
    // Estimate before computing: coefficients are counts of independent
    // sets, bounded by 2^n, and the degree is below n, so n² bits bounds
    // the total volume.
    let spec_sizes = {
        let mut sizes = Vec::new();
        let mut size = Integer::from(1);
        sizes.push(size.clone());
        for &d in &word.letters()[1..] {
            size = Integer::from(&size * d) + 1u32;
            sizes.push(size.clone());
        }
        sizes
    };
    let n = spec_sizes.last().unwrap();
    let estimated_bits = n
        .to_u128()
        .map(|n| n.saturating_mul(n))
        .unwrap_or(u128::MAX);
    if estimated_bits > EXACT_POLY_BIT_CAP {
        return Err(TreeError::CapExceeded {
            estimated_bits,
            cap: EXACT_POLY_BIT_CAP,
        });
    }
    let letters = word.letters();
    let mut two_back = IndependencePolynomial::one(); // Z_{T_0}
    let mut one_back = IndependencePolynomial::one_plus_lambda(); // Z_{T_1}
    for m in 1..letters.len() {
        let d = letters[m] as u64;
        let d_prev = letters[m - 1] as u64;
        let without_root = one_back.pow(d);
        let with_root = two_back.pow(d * d_prev).shift_times_lambda();
        let z = without_root.add(&with_root);
        two_back = one_back;
        one_back = z;
    }
    Ok(one_back)
}

/// Brute-force oracle: enumerates every vertex subset of an explicit tree.
pub fn indep_poly_bruteforce(tree: &TreeSpec) -> Result<IndependencePolynomial, TreeError> {
    const LIMIT: usize = 20;
    let adjacency = tree.adjacency.as_ref().ok_or(TreeError::NoAdjacency)?;
    let n = adjacency.vertex_count();
    if n > LIMIT {
        return Err(TreeError::TooLarge {
            vertices: tree.vertex_count.to_string(),
            limit: LIMIT,
        });
    }
    let mut masks = vec![0u32; n];
    for (v, &p) in adjacency.parent.iter().enumerate().skip(1) {
        masks[v] |= 1 << p;
        masks[p as usize] |= 1 << v;
    }
    let mut counts = vec![Integer::new(); n + 1];
    for subset in 0u32..(1u32 << n) {
        let mut independent = true;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if masks[v] & subset != 0 {
                independent = false;
                break;
            }
            rest &= rest - 1;
        }
        if independent {
            counts[subset.count_ones() as usize] += 1u32;
        }
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    Ok(IndependencePolynomial { coeffs: counts })
}

/// Horner evaluation at the stated precision with a forward error bound.
///
/// The bound is the standard Horner estimate `2n·u · Σ|a_i||λ|^i` with
/// `u = 2^(1−prec)`, evaluated with enough exponent range for the huge
/// counts that show up in larger trees.
pub fn evaluate_z(
    poly: &IndependencePolynomial,
    lambda: &MpComplex,
    precision: u32,
) -> (MpComplex, f64) {
    let n = poly.coeffs.len();
    let mut acc = MpComplex::new(precision);
    for c in poly.coeffs.iter().rev() {
        let term = Float::with_val(precision, c);
        acc = acc.mul(lambda);
        acc = MpComplex::from_floats(
            Float::with_val(precision, &acc.re + &term),
            acc.im.clone(),
        );
    }
    // Majorant sum at low precision but full exponent range.
    let abs_lambda = lambda.abs_float();
    let mut majorant = Float::new(64);
    for c in poly.coeffs.iter().rev() {
        let t = Float::with_val(64, c);
        majorant = majorant * &abs_lambda + t;
    }
    let unit = Float::with_val(64, 2).pow(1i32 - precision as i32);
    let bound = majorant * unit * (2 * n) as f64;
    (acc, bound.to_f64())
}

/// How close the seed's final orbit value must be to −1 before refinement.
pub const SEED_HIT_TOL: f64 = 1e-6;

/// Certification tier of a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessTier {
    ExactPolynomial,
    HighPrecisionRatio,
}

/// Exact-evaluation record attached to exact-tier witnesses.
#[derive(Debug, Clone)]
pub struct ExactEvaluation {
    pub z_abs: f64,
    pub error_bound: f64,
    pub poly_degree: usize,
}

/// A certified zero of a tree independence polynomial.
#[derive(Debug, Clone)]
pub struct ZeroWitness {
    pub word: DegreeWord,
    pub lambda: MpComplex,
    pub precision: u32,
    /// `|x_k + 1|` of the refined orbit.
    pub orbit_residual: f64,
    pub udelta: UdeltaWitness,
    pub tier: WitnessTier,
    /// Final-step residual for the ratio tier (same quantity, kept per the
    /// witness schema).
    pub ratio_residual: Option<f64>,
    pub exact: Option<ExactEvaluation>,
    pub tree_vertex_count: Integer,
    pub tree_level_sizes: Vec<Integer>,
    pub flags: Vec<String>,
}

/// Refines λ against `x_k(λ) + 1 = 0` and certifies the hit.
///
/// The refined orbit must hit −1 exactly at the final step: an earlier hit
/// is refused (the witness tree would be the prefix tree), and a pole
/// passage invalidates the ratio recursion.
pub fn certify_zero(
    word: &DegreeWord,
    lambda: &MpComplex,
    precision: u32,
) -> Result<ZeroWitness, CertifyError> {
    let tree = build_tree(word);
    let exact_feasible = matches!(
        indep_poly_exact_estimate(word),
        e if e <= EXACT_POLY_BIT_CAP
    );
    let precision = if exact_feasible {
        precision
    } else {
        precision.max(256)
    };
    let letters = word.letters();
    let cert_tol = certification_tolerance(precision);

    // Precondition: the seed's orbit already near-hits −1, and it does so
    // first at the final step. Earlier near-hits truncate the word; the
    // decision to do so belongs to the caller.
    let seed = MpComplex::from_floats(
        Float::with_val(precision, &lambda.re),
        Float::with_val(precision, &lambda.im),
    );
    let zero = ExtendedComplex::Finite(MpComplex::new(precision));
    let seed_orbit: Orbit<MpComplex> = eval_word(word, &seed, &zero, precision);
    for (i, point) in seed_orbit.points.iter().enumerate().skip(1) {
        match point {
            ExtendedComplex::Infinity => {
                return Err(CertifyError::PoleCollision { index: i });
            }
            ExtendedComplex::Finite(z) => {
                if z.add_f64(1.0).abs() <= SEED_HIT_TOL {
                    if i < letters.len() {
                        return Err(CertifyError::EarlyHit { index: i });
                    }
                    break;
                }
            }
        }
    }
    if !(seed_orbit.final_residual() <= SEED_HIT_TOL) {
        return Err(CertifyError::NoHit);
    }

    // Newton refinement on the final orbit value, kept local to the seed.
    let wander_cap = 1e-2 * (1.0 + seed.abs());
    let mut lam = seed.clone();
    let mut residual = f64::INFINITY;
    let mut final_derivative = f64::INFINITY;
    for _ in 0..80 {
        let (value, derivative) = orbit_end_jet1(letters, &lam, precision).map_err(
            |JetError::PoleOnOrbit(index)| CertifyError::PoleCollision { index },
        )?;
        let f = value.add_f64(1.0);
        residual = f.abs();
        final_derivative = derivative.abs();
        if residual <= cert_tol * 1e-6 || residual == 0.0 {
            break;
        }
        if final_derivative == 0.0 {
            break;
        }
        lam = lam.sub(&f.div(&derivative));
        if lam.sub(&seed).abs() > wander_cap {
            return Err(CertifyError::NoHit);
        }
    }
    if !(residual <= cert_tol) {
        return Err(CertifyError::NoHit);
    }

    // Fresh orbit at the refined λ: hits, poles, early hits.
    let orbit: Orbit<MpComplex> = eval_word(word, &lam, &zero, precision);
    if let Some(&index) = orbit.pole_passages.first() {
        return Err(CertifyError::PoleCollision { index });
    }
    let early_tol = hit_tolerance(precision);
    for (i, point) in orbit.points.iter().enumerate().skip(1) {
        if i == letters.len() {
            break;
        }
        if let ExtendedComplex::Finite(z) = point {
            if z.add_f64(1.0).abs() <= early_tol {
                return Err(CertifyError::EarlyHit { index: i });
            }
        }
    }
    let orbit_residual = orbit.final_residual();
    if !(orbit_residual <= cert_tol) {
        return Err(CertifyError::NoHit);
    }

    let mut flags = Vec::new();
    if letters.len() == 2 {
        // The level recursion starts from the same base at k = 2.
        flags.push("k2-base-case".to_string());
    }
    if tree.adjacency.is_none() {
        flags.push("adjacency-omitted".to_string());
    }

    let udelta = udelta_witness(word.delta(), lam.to_c64(), precision);
    let (tier, exact, ratio_residual) = if exact_feasible {
        let poly = indep_poly_exact(word).expect("estimate checked");
        let (value, error_bound) = evaluate_z(&poly, &lam, precision);
        let z_abs = value.abs();
        // The refined λ sits within `residual/|h'|` of an exact root of the
        // orbit condition, so |Z| must be below the evaluation error plus
        // the drift |Z'| · δλ.
        let delta_lambda = if final_derivative > 0.0 {
            orbit_residual / final_derivative
        } else {
            0.0
        };
        let drift = derivative_magnitude(&poly, &lam) * delta_lambda;
        let allowed = error_bound + drift;
        if !(z_abs <= allowed) {
            return Err(CertifyError::NoHit);
        }
        (
            WitnessTier::ExactPolynomial,
            Some(ExactEvaluation {
                z_abs,
                error_bound: allowed,
                poly_degree: poly.degree(),
            }),
            None,
        )
    } else {
        (WitnessTier::HighPrecisionRatio, None, Some(orbit_residual))
    };

    Ok(ZeroWitness {
        word: word.clone(),
        lambda: lam,
        precision,
        orbit_residual,
        udelta,
        tier,
        ratio_residual,
        exact,
        tree_vertex_count: tree.vertex_count,
        tree_level_sizes: tree.level_sizes,
        flags,
    })
}

/// `|Z'(λ)|` with full exponent range, for the drift bound.
fn derivative_magnitude(poly: &IndependencePolynomial, lambda: &MpComplex) -> f64 {
    let abs_lambda = lambda.abs_float();
    let mut acc = Float::new(64);
    for (i, c) in poly.coeffs.iter().enumerate().skip(1).rev() {
        let t = Float::with_val(64, c) * i as f64;
        acc = acc * &abs_lambda + t;
    }
    acc.to_f64()
}

fn indep_poly_exact_estimate(word: &DegreeWord) -> u128 {
    let mut size = Integer::from(1);
    for &d in &word.letters()[1..] {
        size = Integer::from(&size * d) + 1u32;
        if size > u128::MAX as f64 {
            return u128::MAX;
        }
    }
    size.to_u128()
        .map(|n| n.saturating_mul(n))
        .unwrap_or(u128::MAX)
}
