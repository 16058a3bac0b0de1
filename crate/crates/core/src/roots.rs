//! All-roots finding for dense complex polynomials.
//!
//! Simultaneous (Durand–Kerner) iteration followed by a Newton polish.
//! Robustness over speed: the degrees that show up here are at most a few
//! thousand and the callers re-verify residuals themselves.

use num_complex::Complex64;

/// Evaluates `p(z)` for ascending coefficients.
pub fn eval_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Evaluates `(p(z), p'(z))` together.
pub fn eval_poly_deriv(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn trim_leading(coeffs: &[Complex64]) -> &[Complex64] {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut n = coeffs.len();
    while n > 1 && coeffs[n - 1].norm() <= scale * 1e-300 {
        n -= 1;
    }
    &coeffs[..n]
}

/// Root radius estimate (Fujiwara bound) for initial guesses.
fn root_bound(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let mut bound: f64 = 0.0;
    for k in 1..=n {
        let ratio = coeffs[n - k].norm() / lead;
        bound = bound.max(2.0 * ratio.powf(1.0 / k as f64));
    }
    bound.max(1e-3)
}

/// All complex roots of `p`, with multiplicities represented by nearby
/// copies. `init_radius` overrides the starting circle when the caller
/// knows where the roots live.
pub fn all_roots(coeffs: &[Complex64], init_radius: Option<f64>) -> Vec<Complex64> {
    let coeffs = trim_leading(coeffs);
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let radius = init_radius.unwrap_or_else(|| root_bound(coeffs));
    // Offset angle keeps guesses away from axes and from each other.
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.354) / n as f64;
            radius * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    let reset_radius = 4.0 * radius.max(1.0);
    for sweep in 0..600 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let p = eval_poly(coeffs, zi);
            let mut denom = coeffs[n];
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 || !denom.is_finite() || !p.is_finite() {
                // Restart a stuck or escaped guess on a fresh circle.
                let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.618 * sweep as f64) / n as f64;
                roots[i] = radius * 0.9 * Complex64::new(angle.cos(), angle.sin());
                moved = f64::INFINITY;
                continue;
            }
            let delta = p / denom;
            roots[i] = zi - delta;
            if !roots[i].is_finite() || roots[i].norm() > reset_radius * 1e3 {
                let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.618 * sweep as f64) / n as f64;
                roots[i] = radius * 1.1 * Complex64::new(angle.cos(), angle.sin());
                moved = f64::INFINITY;
                continue;
            }
            moved = moved.max(delta.norm() / (1.0 + zi.norm()));
        }
        if moved < 1e-14 {
            break;
        }
    }
    for root in roots.iter_mut() {
        *root = polish_root(coeffs, *root, 12);
    }
    roots
}

/// Newton polish of a single root.
pub fn polish_root(coeffs: &[Complex64], mut z: Complex64, iters: usize) -> Complex64 {
    for _ in 0..iters {
        let (p, dp) = eval_poly_deriv(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        v
    }

    #[test]
    fn cubic_with_known_roots() {
        // (z-1)(z+2)(z-3i) = z³ + (1-3i)z² + (-2-3i)z + 6i
        let coeffs = vec![c(0.0, 6.0), c(-2.0, -3.0), c(1.0, -3.0), c(1.0, 0.0)];
        let roots = sorted_by_arg(all_roots(&coeffs, None));
        let expect = sorted_by_arg(vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0)]);
        for (r, e) in roots.iter().zip(expect.iter()) {
            assert!((r - e).norm() < 1e-10, "{r} vs {e}");
        }
    }

    #[test]
    fn random_polynomial_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(2..40);
            let coeffs: Vec<Complex64> = (0..=n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if coeffs[n].norm() < 1e-2 {
                continue;
            }
            let scale: f64 = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for root in all_roots(&coeffs, None) {
                let residual = eval_poly(&coeffs, root).norm();
                let local = scale * (1.0 + root.norm()).powi(n as i32);
                assert!(residual <= 1e-8 * local, "res {residual} vs {local}");
            }
        }
    }

    #[test]
    fn double_root_cluster() {
        // (z - 0.5)²(z + 1) = z³ - 0.75z + 0.25
        let coeffs = vec![c(0.25, 0.0), c(-0.75, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let roots = all_roots(&coeffs, None);
        let near_half = roots.iter().filter(|r| (*r - c(0.5, 0.0)).norm() < 1e-5).count();
        let near_neg1 = roots.iter().filter(|r| (*r - c(-1.0, 0.0)).norm() < 1e-8).count();
        assert_eq!(near_half, 2);
        assert_eq!(near_neg1, 1);
    }
}
