//! Exact bivariate polynomial arithmetic over the integers.
//!
//! Compositions of the generating maps are rational in (λ, z) with integer
//! coefficients: `P_i = λ Q_{i−1}^{d_i}`, `Q_i = (Q_{i−1} + P_{i−1})^{d_i}`.
//! From P and Q come the fixed-point polynomial `l = P − zQ` and the
//! multiplier polynomial `m = s − μ t` with `s = P_z Q − P Q_z`, `t = Q²`.
//! The Sylvester resultant of l and m eliminating z is an exact integer
//! polynomial in λ whose roots contain every parameter with a fixed point
//! of multiplier μ. A resultant that vanishes identically is a legal
//! outcome and is surfaced as such rather than treated as failure.

use num_complex::Complex64;
use rug::{Integer, Rational};
use thiserror::Error;

use crate::parabolic::{classify_fixed_points, solve_parabolic, SolveSettings};
use crate::roots::all_roots;
use crate::word::DegreeWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("estimated term count {estimated} exceeds the feasibility cap {cap}")]
    CapExceeded { estimated: u128, cap: u128 },
    #[error("multiplier is not exact; the exact route needs a rational or Gaussian rational")]
    InexactMultiplier,
}

/// Coefficient rings the resultant machinery runs over.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact in the ring.
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl Ring for Integer {
    fn zero() -> Self {
        Integer::new()
    }

    fn one() -> Self {
        Integer::from(1)
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        Integer::from(self + rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Integer::from(self - rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Integer::from(self * rhs)
    }

    fn neg(&self) -> Self {
        Integer::from(-self)
    }

    fn div_exact(&self, rhs: &Self) -> Self {
        debug_assert!(Integer::from(self % rhs) == 0, "inexact integer division");
        Integer::from(self / rhs)
    }
}

/// Gaussian integers, the coefficient ring for non-real exact multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussInt {
    pub re: Integer,
    pub im: Integer,
}

impl GaussInt {
    pub fn new(re: Integer, im: Integer) -> Self {
        Self { re, im }
    }

    pub fn from_int(re: i64) -> Self {
        Self {
            re: Integer::from(re),
            im: Integer::new(),
        }
    }
}

impl Ring for GaussInt {
    fn zero() -> Self {
        Self::from_int(0)
    }

    fn one() -> Self {
        Self::from_int(1)
    }

    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        Self {
            re: Integer::from(&self.re + &rhs.re),
            im: Integer::from(&self.im + &rhs.im),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: Integer::from(&self.re - &rhs.re),
            im: Integer::from(&self.im - &rhs.im),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let ac = Integer::from(&self.re * &rhs.re);
        let bd = Integer::from(&self.im * &rhs.im);
        let ad = Integer::from(&self.re * &rhs.im);
        let bc = Integer::from(&self.im * &rhs.re);
        Self {
            re: ac - bd,
            im: ad + bc,
        }
    }

    fn neg(&self) -> Self {
        Self {
            re: Integer::from(-&self.re),
            im: Integer::from(-&self.im),
        }
    }

    fn div_exact(&self, rhs: &Self) -> Self {
        // a/b = a·conj(b) / |b|², exact by the caller's contract.
        let norm = Integer::from(&rhs.re * &rhs.re) + Integer::from(&rhs.im * &rhs.im);
        let conj = GaussInt {
            re: rhs.re.clone(),
            im: Integer::from(-&rhs.im),
        };
        let num = self.mul(&conj);
        GaussInt {
            re: num.re.div_exact(&norm),
            im: num.im.div_exact(&norm),
        }
    }
}

/// Dense bivariate polynomial, coefficients indexed by (λ-power, z-power).
#[derive(Debug, Clone, PartialEq)]
pub struct BivarPoly<R: Ring = Integer> {
    /// Row-major: `coeffs[i * nz + j]` multiplies `λ^i z^j`.
    coeffs: Vec<R>,
    nl: usize,
    nz: usize,
}

/// Terms allowed in a symbolic composition, `(deg_λ+1)(deg_z+1)`.
pub const COMPOSE_TERM_CAP: u128 = 1 << 24;

impl<R: Ring> BivarPoly<R> {
    pub fn zero() -> Self {
        Self {
            coeffs: vec![R::zero()],
            nl: 1,
            nz: 1,
        }
    }

    pub fn constant(value: R) -> Self {
        Self {
            coeffs: vec![value],
            nl: 1,
            nz: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    pub fn deg_lambda(&self) -> usize {
        self.nl - 1
    }

    pub fn deg_z(&self) -> usize {
        self.nz - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> R {
        if i < self.nl && j < self.nz {
            self.coeffs[i * self.nz + j].clone()
        } else {
            R::zero()
        }
    }

    fn set(&mut self, i: usize, j: usize, value: R) {
        self.coeffs[i * self.nz + j] = value;
    }

    fn with_shape(nl: usize, nz: usize) -> Self {
        Self {
            coeffs: vec![R::zero(); nl * nz],
            nl,
            nz,
        }
    }

    /// Trims zero rows and columns so the stored degrees are tight.
    fn normalize(self) -> Self {
        let mut nl = self.nl;
        while nl > 1 && (0..self.nz).all(|j| self.coeffs[(nl - 1) * self.nz + j].is_zero()) {
            nl -= 1;
        }
        let mut nz = self.nz;
        while nz > 1 && (0..nl).all(|i| self.coeffs[i * self.nz + nz - 1].is_zero()) {
            nz -= 1;
        }
        if nl == self.nl && nz == self.nz {
            return self;
        }
        let mut out = Self::with_shape(nl, nz);
        for i in 0..nl {
            for j in 0..nz {
                out.coeffs[i * nz + j] = self.coeffs[i * self.nz + j].clone();
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let nl = self.nl.max(rhs.nl);
        let nz = self.nz.max(rhs.nz);
        let mut out = Self::with_shape(nl, nz);
        for i in 0..nl {
            for j in 0..nz {
                out.coeffs[i * nz + j] = self.coeff(i, j).add(&rhs.coeff(i, j));
            }
        }
        out.normalize()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let nl = self.nl.max(rhs.nl);
        let nz = self.nz.max(rhs.nz);
        let mut out = Self::with_shape(nl, nz);
        for i in 0..nl {
            for j in 0..nz {
                out.coeffs[i * nz + j] = self.coeff(i, j).sub(&rhs.coeff(i, j));
            }
        }
        out.normalize()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let nl = self.nl + rhs.nl - 1;
        let nz = self.nz + rhs.nz - 1;
        let mut out = Self::with_shape(nl, nz);
        for i1 in 0..self.nl {
            for j1 in 0..self.nz {
                let a = &self.coeffs[i1 * self.nz + j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..rhs.nl {
                    for j2 in 0..rhs.nz {
                        let b = &rhs.coeffs[i2 * rhs.nz + j2];
                        if b.is_zero() {
                            continue;
                        }
                        let idx = (i1 + i2) * nz + (j1 + j2);
                        out.coeffs[idx] = out.coeffs[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out.normalize()
    }

    pub fn pow(&self, n: u32) -> Self {
        assert!(n >= 1);
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(v) => v.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// Partial derivative in z.
    pub fn deriv_z(&self) -> Self {
        if self.nz == 1 {
            return Self::zero();
        }
        let mut out = Self::with_shape(self.nl, self.nz - 1);
        for i in 0..self.nl {
            for j in 1..self.nz {
                let mut factor = R::zero();
                for _ in 0..j {
                    factor = factor.add(&R::one());
                }
                out.coeffs[i * (self.nz - 1) + (j - 1)] =
                    self.coeffs[i * self.nz + j].mul(&factor);
            }
        }
        out.normalize()
    }

    /// Multiplication by z.
    pub fn mul_z(&self) -> Self {
        let mut out = Self::with_shape(self.nl, self.nz + 1);
        for i in 0..self.nl {
            for j in 0..self.nz {
                out.coeffs[i * (self.nz + 1) + j + 1] = self.coeffs[i * self.nz + j].clone();
            }
        }
        out.normalize()
    }

    /// Coefficients of `z^j` as a polynomial in λ (ascending).
    fn z_slice(&self, j: usize) -> UnivarPoly<R> {
        let coeffs = (0..self.nl).map(|i| self.coeff(i, j)).collect();
        UnivarPoly::from_coeffs(coeffs)
    }

    /// Nonzero coefficients as `(λ-power, z-power, value)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / self.nz, idx % self.nz, c))
    }
}

impl BivarPoly<Integer> {
    /// `λ` as a polynomial.
    pub fn lambda() -> Self {
        let mut out = Self::with_shape(2, 1);
        out.set(1, 0, Integer::from(1));
        out
    }

    /// `(1 + z)^d`.
    pub fn one_plus_z_pow(d: u32) -> Self {
        let mut out = Self::with_shape(1, d as usize + 1);
        let mut binom = Integer::from(1);
        for j in 0..=d as usize {
            if j > 0 {
                binom = Integer::from(&binom * Integer::from(d as usize - j + 1)) / j as u32;
            }
            out.set(0, j, binom.clone());
        }
        out
    }

    /// Greatest common divisor of all coefficients (0 for the zero poly).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            if *c != 0 {
                g = g.gcd(c);
            }
            if g == 1 {
                break;
            }
        }
        g
    }

    pub fn div_content(self) -> Self {
        let g = self.content();
        if g == 0 || g == 1 {
            return self;
        }
        Self {
            coeffs: self.coeffs.into_iter().map(|c| c / &g).collect(),
            nl: self.nl,
            nz: self.nz,
        }
    }

    /// Exact evaluation at rational (λ, z).
    pub fn eval_rational(&self, lambda: &Rational, z: &Rational) -> Rational {
        let mut acc = Rational::new();
        for i in (0..self.nl).rev() {
            let mut row = Rational::new();
            for j in (0..self.nz).rev() {
                row *= z;
                row += Rational::from(&self.coeffs[i * self.nz + j]);
            }
            acc *= lambda;
            acc += row;
        }
        acc
    }

    /// Approximate evaluation at complex (λ, z).
    pub fn eval_c64(&self, lambda: Complex64, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..self.nl).rev() {
            let mut row = Complex64::new(0.0, 0.0);
            for j in (0..self.nz).rev() {
                row = row * z + self.coeffs[i * self.nz + j].to_f64();
            }
            acc = acc * lambda + row;
        }
        acc
    }

    /// Largest coefficient magnitude, for residual scales.
    pub fn max_coeff_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.clone().abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// Coefficient dump as decimal strings, `(λ-power, z-power, value)`.
    pub fn dump_coeffs(&self) -> Vec<(usize, usize, String)> {
        self.terms()
            .map(|(i, j, c)| (i, j, c.to_string()))
            .collect()
    }
}

/// Univariate polynomial in λ, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivarPoly<R: Ring = Integer> {
    coeffs: Vec<R>,
}

impl<R: Ring> UnivarPoly<R> {
    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(R::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(R::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![R::zero()],
        }
    }

    pub fn constant(value: R) -> Self {
        Self::from_coeffs(vec![value])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[R], i: usize| v.get(i).cloned().unwrap_or_else(R::zero);
        Self::from_coeffs(
            (0..n)
                .map(|i| get(&self.coeffs, i).add(&get(&rhs.coeffs, i)))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[R], i: usize| v.get(i).cloned().unwrap_or_else(R::zero);
        Self::from_coeffs(
            (0..n)
                .map(|i| get(&self.coeffs, i).sub(&get(&rhs.coeffs, i)))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(R::neg).collect())
    }

    /// Exact polynomial division; panics if the division is not exact.
    pub fn div_exact(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let dn = rhs.coeffs.len();
        let mut rem = self.coeffs.clone();
        assert!(rem.len() >= dn, "inexact polynomial division (degree)");
        let lead = rhs.coeffs.last().unwrap();
        let qn = rem.len() - dn + 1;
        let mut quot = vec![R::zero(); qn];
        for k in (0..qn).rev() {
            let top = rem[k + dn - 1].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.div_exact(lead);
            for (i, b) in rhs.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub(&q.mul(b));
            }
            quot[k] = q;
        }
        debug_assert!(rem.iter().all(R::is_zero), "inexact polynomial division");
        Self::from_coeffs(quot)
    }

    pub fn pow_usize(&self, n: usize) -> Self {
        let mut acc = Self::constant(R::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl UnivarPoly<Integer> {
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            if *c != 0 {
                g = g.gcd(c);
            }
            if g == 1 {
                break;
            }
        }
        g
    }

    pub fn div_content(self) -> Self {
        let g = self.content();
        if g == 0 || g == 1 {
            return self;
        }
        Self {
            coeffs: self.coeffs.into_iter().map(|c| c / &g).collect(),
        }
    }

    /// Roots computed in f64 after a common power-of-two rescale of the
    /// coefficients. Best effort when coefficients are very large.
    pub fn roots_c64(&self) -> Vec<Complex64> {
        if self.is_zero() || self.degree() == 0 {
            return Vec::new();
        }
        let max_bits = self
            .coeffs
            .iter()
            .map(|c| c.significant_bits())
            .max()
            .unwrap_or(0);
        let shift = max_bits.saturating_sub(800) as i64;
        let scaled: Vec<Complex64> = self
            .coeffs
            .iter()
            .map(|c| {
                let (m, e) = c.to_f64_exp();
                Complex64::new(m * 2f64.powi((e as i64 - shift) as i32), 0.0)
            })
            .collect();
        all_roots(&scaled, None)
    }

    pub fn eval_rational(&self, lambda: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= lambda;
            acc += Rational::from(c);
        }
        acc
    }

    pub fn eval_c64(&self, lambda: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + c.to_f64();
        }
        acc
    }
}

/// The composed map as `P/Q` with integer coefficients and shared integer
/// content removed.
pub fn compose_rational(word: &DegreeWord) -> Result<(BivarPoly, BivarPoly), AlgebraicError> {
    let mut p = BivarPoly::lambda();
    let mut q = BivarPoly::one_plus_z_pow(word.letters()[0]);
    for &d in &word.letters()[1..] {
        check_pow_cap(&q, d)?;
        let new_p = BivarPoly::lambda().mul(&q.pow(d));
        let sum = q.add(&p);
        check_pow_cap(&sum, d)?;
        let new_q = sum.pow(d);
        p = new_p;
        q = new_q;
    }
    let shared = p.content().gcd(&q.content());
    if shared > 1 {
        p = BivarPoly {
            coeffs: p.coeffs.into_iter().map(|c| c / &shared).collect(),
            nl: p.nl,
            nz: p.nz,
        };
        q = BivarPoly {
            coeffs: q.coeffs.into_iter().map(|c| c / &shared).collect(),
            nl: q.nl,
            nz: q.nz,
        };
    }
    Ok((p, q))
}

/// Coefficient multiplications allowed per composition step.
pub const COMPOSE_WORK_CAP: u128 = 1 << 26;

fn check_pow_cap(base: &BivarPoly, d: u32) -> Result<(), AlgebraicError> {
    let nl = base.nl as u128;
    let nz = base.nz as u128;
    let d = d as u128;
    let estimated = (d * (nl - 1) + 1) * (d * (nz - 1) + 1);
    if estimated > COMPOSE_TERM_CAP {
        return Err(AlgebraicError::CapExceeded {
            estimated,
            cap: COMPOSE_TERM_CAP,
        });
    }
    // Dense multiplication cost of the final powering step.
    let work = estimated.saturating_mul(nl * nz);
    if work > COMPOSE_WORK_CAP {
        return Err(AlgebraicError::CapExceeded {
            estimated: work,
            cap: COMPOSE_WORK_CAP,
        });
    }
    Ok(())
}

/// `l = P − zQ`, whose z-roots at fixed λ are the finite fixed points.
pub fn fixed_point_poly(p: &BivarPoly, q: &BivarPoly) -> BivarPoly {
    p.sub(&q.mul_z()).div_content()
}

/// Exact multiplier for the symbolic route.
#[derive(Debug, Clone)]
pub enum Multiplier {
    Int(i64),
    Rational(Rational),
    Gaussian(Rational, Rational),
    /// Not exact; rejected by the symbolic route.
    Numeric(Complex64),
}

impl Multiplier {
    fn gaussian_parts(&self) -> Result<(Rational, Rational), AlgebraicError> {
        match self {
            Multiplier::Int(n) => Ok((Rational::from(*n), Rational::new())),
            Multiplier::Rational(r) => Ok((r.clone(), Rational::new())),
            Multiplier::Gaussian(re, im) => Ok((re.clone(), im.clone())),
            Multiplier::Numeric(_) => Err(AlgebraicError::InexactMultiplier),
        }
    }
}

/// `m = s − μ t` over ℤ for real rational μ = a/b, computed as `b·s − a·t`.
pub fn multiplier_poly(
    p: &BivarPoly,
    q: &BivarPoly,
    mu: &Multiplier,
) -> Result<BivarPoly, AlgebraicError> {
    let (re, im) = mu.gaussian_parts()?;
    if im != 0 {
        return Err(AlgebraicError::InexactMultiplier);
    }
    let (s, t) = multiplier_parts(p, q);
    let a = re.numer().clone();
    let b = re.denom().clone();
    Ok(s
        .mul(&BivarPoly::constant(b))
        .sub(&t.mul(&BivarPoly::constant(a)))
        .div_content())
}

/// Gaussian-rational variant of [`multiplier_poly`], over ℤ[i].
pub fn multiplier_poly_gaussian(
    p: &BivarPoly,
    q: &BivarPoly,
    mu: &Multiplier,
) -> Result<BivarPoly<GaussInt>, AlgebraicError> {
    let (re, im) = mu.gaussian_parts()?;
    let (s, t) = multiplier_parts(p, q);
    // Common denominator b: m·b = b·s − (a + ci)·t.
    let b = Integer::from(re.denom() * im.denom());
    let a = Integer::from(re.numer() * im.denom());
    let c = Integer::from(im.numer() * re.denom());
    let s_g = lift_gauss(&s);
    let t_g = lift_gauss(&t);
    let factor = BivarPoly::<GaussInt>::constant(GaussInt::new(a, c));
    Ok(s_g
        .mul(&BivarPoly::<GaussInt>::constant(GaussInt::new(
            b,
            Integer::new(),
        )))
        .sub(&t_g.mul(&factor)))
}

/// `s = P_z Q − P Q_z` and `t = Q²`, the numerator and denominator of g'.
pub fn multiplier_parts(p: &BivarPoly, q: &BivarPoly) -> (BivarPoly, BivarPoly) {
    let s = p.deriv_z().mul(q).sub(&p.mul(&q.deriv_z()));
    let t = q.mul(q);
    (s, t)
}

/// Lifts an integer polynomial into ℤ[i].
pub fn lift_gauss(p: &BivarPoly<Integer>) -> BivarPoly<GaussInt> {
    let mut out = BivarPoly::<GaussInt>::with_shape(p.nl, p.nz);
    for i in 0..p.nl {
        for j in 0..p.nz {
            out.coeffs[i * p.nz + j] =
                GaussInt::new(p.coeffs[i * p.nz + j].clone(), Integer::new());
        }
    }
    out
}

/// Sylvester resultant of A and B eliminating z, by fraction-free
/// (Bareiss) elimination over R[λ]. The zero polynomial is a legal result:
/// it signals that A and B share a root for every λ.
pub fn resultant_z<R: Ring>(a: &BivarPoly<R>, b: &BivarPoly<R>) -> UnivarPoly<R> {
    let m = a.deg_z();
    let n = b.deg_z();
    if m == 0 && n == 0 {
        return UnivarPoly::constant(R::one());
    }
    if m == 0 {
        return a.z_slice(0).pow_usize(n);
    }
    if n == 0 {
        return b.z_slice(0).pow_usize(m);
    }
    let size = m + n;
    let mut matrix: Vec<Vec<UnivarPoly<R>>> = vec![vec![UnivarPoly::zero(); size]; size];
    // n rows of A's z-coefficients, descending.
    for row in 0..n {
        for k in 0..=m {
            matrix[row][row + k] = a.z_slice(m - k);
        }
    }
    // m rows of B's z-coefficients.
    for row in 0..m {
        for k in 0..=n {
            matrix[n + row][row + k] = b.z_slice(n - k);
        }
    }
    // Bareiss fraction-free elimination.
    let mut sign_flip = false;
    let mut prev_pivot = UnivarPoly::constant(R::one());
    for k in 0..size - 1 {
        if matrix[k][k].is_zero() {
            let swap_with = (k + 1..size).find(|&r| !matrix[r][k].is_zero());
            match swap_with {
                Some(r) => {
                    matrix.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return UnivarPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = matrix[i][j]
                    .mul(&matrix[k][k])
                    .sub(&matrix[i][k].mul(&matrix[k][j]));
                matrix[i][j] = num.div_exact(&prev_pivot);
            }
            matrix[i][k] = UnivarPoly::zero();
        }
        prev_pivot = matrix[k][k].clone();
    }
    let det = matrix[size - 1][size - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Numeric roots of the exact resultant, split into validated parabolic
/// parameters and spurious roots.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub word: DegreeWord,
    pub mu: Complex64,
    pub resultant_degree: usize,
    pub identically_zero: bool,
    /// Roots confirmed by a Newton solve with residuals ≤ the filter tol.
    pub validated: Vec<Complex64>,
    /// Resultant roots that no Newton run could confirm.
    pub spurious: Vec<Complex64>,
}

/// Residual bound for the spurious-root filter.
pub const CANDIDATE_FILTER_TOL: f64 = 1e-10;

/// Exact-then-numeric pipeline: resultant roots validated through the
/// prescribed-multiplier Newton solve. `mu` must be ±1.
pub fn parabolic_candidates(
    word: &DegreeWord,
    mu: i64,
    precision: u32,
) -> Result<CandidateReport, AlgebraicError> {
    assert!(mu == 1 || mu == -1, "exact candidates support mu = ±1");
    let (p, q) = compose_rational(word)?;
    let l = fixed_point_poly(&p, &q);
    let m = multiplier_poly(&p, &q, &Multiplier::Int(mu))?;
    let resultant = resultant_z(&l, &m).div_content();
    let mu_c = Complex64::new(mu as f64, 0.0);
    if resultant.is_zero() {
        return Ok(CandidateReport {
            word: word.clone(),
            mu: mu_c,
            resultant_degree: 0,
            identically_zero: true,
            validated: Vec::new(),
            spurious: Vec::new(),
        });
    }
    let mut roots = resultant.roots_c64();
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut unique: Vec<Complex64> = Vec::new();
    for root in roots {
        if unique
            .iter()
            .all(|u| (u - root).norm() > 1e-8 * (1.0 + root.norm()))
        {
            unique.push(root);
        }
    }
    let mut settings = SolveSettings::with_precision(precision);
    settings.tol = Some(CANDIDATE_FILTER_TOL);
    settings.max_iters = 80;
    let mut validated = Vec::new();
    let mut spurious = Vec::new();
    for root in unique {
        if validate_candidate(word, mu_c, root, &settings) {
            validated.push(root);
        } else {
            spurious.push(root);
        }
    }
    Ok(CandidateReport {
        word: word.clone(),
        mu: mu_c,
        resultant_degree: resultant.degree(),
        identically_zero: false,
        validated,
        spurious,
    })
}

fn validate_candidate(
    word: &DegreeWord,
    mu: Complex64,
    root: Complex64,
    settings: &SolveSettings,
) -> bool {
    let Ok(classified) = classify_fixed_points(word, root, settings.precision) else {
        return false;
    };
    let mut seeds: Vec<_> = classified
        .records
        .iter()
        .map(|r| (r.z, r.multiplier))
        .collect();
    seeds.sort_by(|a, b| (a.1 - mu).norm().partial_cmp(&(b.1 - mu).norm()).unwrap());
    for (z, _) in seeds.into_iter().take(8) {
        if let Ok(solution) = solve_parabolic(word, mu, root, z, settings) {
            if (solution.lambda_c64() - root).norm() <= 1e-6 * (1.0 + root.norm()) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(delta: u32, letters: &[u32]) -> DegreeWord {
        DegreeWord::new(delta, letters.to_vec()).unwrap()
    }

    fn poly_from_terms(terms: &[(usize, usize, i64)]) -> BivarPoly {
        let nl = terms.iter().map(|t| t.0).max().unwrap() + 1;
        let nz = terms.iter().map(|t| t.1).max().unwrap() + 1;
        let mut out = BivarPoly::with_shape(nl, nz);
        for &(i, j, c) in terms {
            out.set(i, j, Integer::from(c));
        }
        out
    }

    #[test]
    fn compose_base_cases() {
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        assert_eq!(p, BivarPoly::lambda());
        assert_eq!(q, poly_from_terms(&[(0, 0, 1), (0, 1, 1)]));

        let (p, q) = compose_rational(&word(3, &[2])).unwrap();
        assert_eq!(p, BivarPoly::lambda());
        assert_eq!(q, poly_from_terms(&[(0, 0, 1), (0, 1, 2), (0, 2, 1)]));
    }

    #[test]
    fn compose_two_letters() {
        // (1,2): P = λ(1+z)², Q = (1+z+λ)²
        let (p, q) = compose_rational(&word(3, &[1, 2])).unwrap();
        assert_eq!(p, poly_from_terms(&[(1, 0, 1), (1, 1, 2), (1, 2, 1)]));
        assert_eq!(
            q,
            poly_from_terms(&[
                (0, 0, 1),
                (0, 1, 2),
                (0, 2, 1),
                (1, 0, 2),
                (1, 1, 2),
                (2, 0, 1)
            ])
        );
    }

    #[test]
    fn compose_matches_exact_orbit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        let words = [word(4, &[1, 3]), word(3, &[2, 1, 2]), word(5, &[4, 2])];
        for w in &words {
            let (p, q) = compose_rational(w).unwrap();
            let mut checked = 0;
            while checked < 20 {
                let lam = Rational::from((rng.gen_range(-20i32..20), rng.gen_range(1u32..9)));
                let z = Rational::from((rng.gen_range(-20i32..20), rng.gen_range(1u32..9)));
                // exact rational orbit
                let mut value = z.clone();
                let mut ok = true;
                for &d in w.letters() {
                    let base = Rational::from(&value + 1u32);
                    if base == 0 {
                        ok = false;
                        break;
                    }
                    let mut den = Rational::from(1);
                    for _ in 0..d {
                        den *= &base;
                    }
                    value = Rational::from(&lam / den);
                }
                if !ok {
                    continue;
                }
                let qv = q.eval_rational(&lam, &z);
                if qv == 0 {
                    continue;
                }
                let pv = p.eval_rational(&lam, &z);
                assert_eq!(Rational::from(pv / qv), value);
                checked += 1;
            }
        }
    }

    #[test]
    fn fixed_point_poly_examples() {
        // word (1): l = λ − z − z²
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        let l = fixed_point_poly(&p, &q);
        assert_eq!(l, poly_from_terms(&[(1, 0, 1), (0, 1, -1), (0, 2, -1)]));
        // word (2): l = λ − z(1+z)²
        let (p, q) = compose_rational(&word(3, &[2])).unwrap();
        let l = fixed_point_poly(&p, &q);
        assert_eq!(
            l,
            poly_from_terms(&[(1, 0, 1), (0, 1, -1), (0, 2, -2), (0, 3, -1)])
        );
    }

    #[test]
    fn multiplier_poly_examples() {
        // word (1), μ=1: s = −λ, t = (1+z)², m = −λ − (1+z)²
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        let m = multiplier_poly(&p, &q, &Multiplier::Int(1)).unwrap();
        assert_eq!(
            m,
            poly_from_terms(&[(1, 0, -1), (0, 0, -1), (0, 1, -2), (0, 2, -1)])
        );
        // word (2), μ=1: m = −2λ(1+z) − (1+z)⁴
        let (p, q) = compose_rational(&word(3, &[2])).unwrap();
        let m = multiplier_poly(&p, &q, &Multiplier::Int(1)).unwrap();
        assert_eq!(
            m,
            poly_from_terms(&[
                (1, 0, -2),
                (1, 1, -2),
                (0, 0, -1),
                (0, 1, -4),
                (0, 2, -6),
                (0, 3, -4),
                (0, 4, -1)
            ])
        );
    }

    #[test]
    fn numeric_multiplier_rejected() {
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        let err =
            multiplier_poly(&p, &q, &Multiplier::Numeric(Complex64::new(0.5, 0.1))).unwrap_err();
        assert_eq!(err, AlgebraicError::InexactMultiplier);
    }

    #[test]
    fn resultant_with_unit_is_one() {
        let (p, q) = compose_rational(&word(3, &[1, 2])).unwrap();
        let l = fixed_point_poly(&p, &q);
        let one = BivarPoly::constant(Integer::from(1));
        let r = resultant_z(&l, &one);
        assert_eq!(r, UnivarPoly::constant(Integer::from(1)));
    }

    #[test]
    fn resultant_word_one_roots() {
        // Res_z(λ − z − z², −λ − (1+z)²) has roots exactly {0, −1/4}.
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        let l = fixed_point_poly(&p, &q);
        let m = multiplier_poly(&p, &q, &Multiplier::Int(1)).unwrap();
        let r = resultant_z(&l, &m).div_content();
        assert!(!r.is_zero());
        assert_eq!(r.eval_rational(&Rational::new()), 0);
        assert_eq!(r.eval_rational(&Rational::from((-1, 4))), 0);
        for root in r.roots_c64() {
            let near_zero = root.norm() < 1e-9;
            let near_quarter = (root - Complex64::new(-0.25, 0.0)).norm() < 1e-9;
            assert!(near_zero || near_quarter, "unexpected root {root}");
        }
    }

    #[test]
    fn gaussian_multiplier_route() {
        // f_1 with μ = i has the parabolic parameter λ = −1/2.
        let (p, q) = compose_rational(&word(3, &[1])).unwrap();
        let l = lift_gauss(&fixed_point_poly(&p, &q));
        let m = multiplier_poly_gaussian(
            &p,
            &q,
            &Multiplier::Gaussian(Rational::new(), Rational::from(1)),
        )
        .unwrap();
        let r = resultant_z(&l, &m);
        assert!(!r.is_zero());
        // Evaluate at λ = −1/2: both parts must vanish.
        let half = Rational::from((-1, 2));
        let mut acc_re = Rational::new();
        let mut acc_im = Rational::new();
        for c in r.coeffs().iter().rev() {
            let new_re = Rational::from(&acc_re * &half) + Rational::from(&c.re);
            let new_im = Rational::from(&acc_im * &half) + Rational::from(&c.im);
            acc_re = new_re;
            acc_im = new_im;
        }
        assert_eq!(acc_re, 0);
        assert_eq!(acc_im, 0);
    }

    #[test]
    fn candidates_word_two() {
        let report = parabolic_candidates(&word(3, &[2]), 1, 53).unwrap();
        assert!(!report.identically_zero);
        let target = Complex64::new(-4.0 / 27.0, 0.0);
        assert!(
            report.validated.iter().any(|v| (v - target).norm() < 1e-9),
            "validated: {:?}",
            report.validated
        );
    }

    #[test]
    fn candidates_word_one_filters_zero() {
        let report = parabolic_candidates(&word(3, &[1]), 1, 53).unwrap();
        assert_eq!(report.validated.len(), 1);
        assert!((report.validated[0] - Complex64::new(-0.25, 0.0)).norm() < 1e-9);
        assert!(
            report.spurious.iter().any(|s| s.norm() < 1e-9),
            "lambda = 0 must be filtered as spurious"
        );
    }

    #[test]
    fn candidates_table_word_delta3() {
        let report = parabolic_candidates(&word(3, &[1, 2]), 1, 53).unwrap();
        let target = Complex64::new(0.7624680, 2.5253695);
        assert!(
            report.validated.iter().any(|v| (v - target).norm() < 1e-6),
            "validated: {:?}",
            report.validated
        );
    }

    #[test]
    fn cap_exceeded_reported() {
        let w = word(9, &[8, 8, 8, 8, 8, 8, 8, 8]);
        assert!(matches!(
            compose_rational(&w),
            Err(AlgebraicError::CapExceeded { .. })
        ));
    }

    #[test]
    fn degree_sanity() {
        for w in [word(3, &[1, 2]), word(4, &[1, 3]), word(5, &[1, 4, 4])] {
            let (p, q) = compose_rational(&w).unwrap();
            let l = fixed_point_poly(&p, &q);
            assert!(p.deg_z() <= q.deg_z());
            assert_eq!(l.deg_z(), q.deg_z() + 1);
            assert_eq!(q.deg_z(), w.degree_product_usize().unwrap());
        }
    }
}
