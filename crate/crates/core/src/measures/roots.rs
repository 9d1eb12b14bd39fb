//! Simultaneous root finding for complex polynomials (Aberth–Ehrlich).

use num_complex::Complex64;

use super::MeasureError;

const MAX_SWEEPS: usize = 800;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// The tolerance a computed root must meet:
/// `|p(z)| ≤ 1e−10 · Σ|a_k| · max(1, |z|)^n`.
pub fn residual_tolerance(coeffs: &[Complex64], z: Complex64) -> f64 {
    let n = coeffs.len().saturating_sub(1) as i32;
    let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
    1e-10 * scale * z.norm().max(1.0).powi(n)
}

/// All roots, with multiplicity, of `Σ coeffs[k]·z^k`.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, MeasureError> {
    poly_roots_with_offset(coeffs, 0.4)
}

/// As [`poly_roots`], with the initial guesses rotated by `offset` radians.
pub fn poly_roots_with_offset(coeffs: &[Complex64], offset: f64) -> Result<Vec<Complex64>, MeasureError> {
    let Some(top) = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)) else {
        return Err(MeasureError::ZeroPolynomial);
    };
    let coeffs = &coeffs[..=top];
    let zeros_at_origin = coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
    let reduced = &coeffs[zeros_at_origin..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let n = reduced.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let lead = reduced[n];
    let monic: Vec<Complex64> = reduced.iter().map(|c| c / lead).collect();
    // Start on a circle whose radius is the geometric mean of the root moduli.
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, offset + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let mut converged = vec![false; n];
    for _ in 0..MAX_SWEEPS {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (p, dp) = horner(&monic, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                z[k] += Complex64::from_polar(radius * 1e-3, k as f64);
                all = false;
                continue;
            }
            z[k] -= step;
            if step.norm() <= 1e-15 * z[k].norm().max(1e-300) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = horner(&monic, *zk);
            let step = p / dp;
            if step.is_finite() && step.norm() < 1e-6 * zk.norm().max(1.0) {
                let candidate = *zk - step;
                if horner(&monic, candidate).0.norm() <= p.norm() {
                    *zk = candidate;
                }
            }
        }
    }
    for &zk in &z {
        let residual = horner(reduced, zk).0.norm();
        if !(residual <= residual_tolerance(reduced, zk)) {
            return Err(MeasureError::RootsDidNotConverge { residual, at: (zk.re, zk.im) });
        }
    }
    roots.extend(z);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn expand(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            p = next;
        }
        p
    }

    fn matched(found: &[Complex64], expected: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; found.len()];
        expected.iter().all(|e| {
            let best = (0..found.len()).filter(|&i| !used[i]).min_by(|&a, &b| (found[a] - e).norm().total_cmp(&(found[b] - e).norm()));
            match best {
                Some(i) if (found[i] - e).norm() < tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn cubic_roots_of_unity() {
        let r = poly_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let expected: Vec<_> = (0..3).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0)).collect();
        assert!(matched(&r, &expected, 1e-12));
    }

    #[test]
    fn repeated_roots_and_origin() {
        // z²(z³+4)²
        let mut p = vec![c(0.0, 0.0); 9];
        p[2] = c(16.0, 0.0);
        p[5] = c(8.0, 0.0);
        p[8] = c(1.0, 0.0);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert!(poly_roots(&[c(0.0, 0.0)]).is_err());
        assert!(poly_roots(&[c(3.0, 0.0)]).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn recovers_random_roots(rs in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..10), off in 0.0f64..6.0) {
            let roots: Vec<Complex64> = rs.iter().map(|&(a, b)| c(a, b)).collect();
            let found = poly_roots_with_offset(&expand(&roots), off).unwrap();
            for z in &found {
                let (p, _) = horner(&expand(&roots), *z);
                prop_assert!(p.norm() <= residual_tolerance(&expand(&roots), *z));
            }
            prop_assert_eq!(found.len(), roots.len());
        }
    }
}
