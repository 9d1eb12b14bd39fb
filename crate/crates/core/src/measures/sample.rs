//! Backward orbits: all `d^depth` iterated preimages of a seed point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::roots::poly_roots_with_offset;
use super::{Lift, MeasureError, SpherePoint};
use crate::map::RationalMap;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSampleSet {
    /// The finite preimages.
    pub points: Vec<Complex64>,
    /// How many preimages are `∞`.
    pub infinite: usize,
    pub seed: u64,
    pub depth: usize,
}

impl ComplexSampleSet {
    pub fn len(&self) -> usize {
        self.points.len() + self.infinite
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Arguments of the finite points, in `[0, 2π)`.
    pub fn angles(&self) -> Vec<f64> {
        self.points.iter().map(|z| z.arg().rem_euclid(std::f64::consts::TAU)).collect()
    }
}

/// Solutions of `φ(z) = t`, counted with multiplicity: zeros of
/// `b·F₀ − a·F₁` for `t = (a : b)`, found in the chart `z` or `w = 1/z`
/// whichever keeps the root moduli small.
fn preimages(lift: &Lift, t: SpherePoint, offset: f64) -> Result<Vec<SpherePoint>, MeasureError> {
    let (a, b) = t.homogeneous();
    let [f0, f1] = lift.coeffs();
    let d = lift.degree();
    let h: Vec<Complex64> = f0.iter().zip(f1).map(|(p, q)| b * p - a * q).collect();
    let z_chart = h[d].norm() >= h[0].norm();
    let coeffs: Vec<Complex64> = if z_chart { h.clone() } else { h.iter().rev().copied().collect() };
    let roots = poly_roots_with_offset(&coeffs, offset)?;
    let mut out: Vec<SpherePoint> = roots
        .into_iter()
        .map(|r| {
            if z_chart {
                SpherePoint::Finite(r)
            } else if r == Complex64::new(0.0, 0.0) {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite(r.inv())
            }
        })
        .collect();
    // a dropped degree in the chart variable means roots at the far pole
    let far = if z_chart { SpherePoint::Infinity } else { SpherePoint::Finite(Complex64::new(0.0, 0.0)) };
    out.resize(d, far);
    Ok(out)
}

/// The `depth`-th generation of preimages of `seed_point`. `seed` fixes
/// the root finder's starting configuration, so runs are reproducible.
pub fn preimage_sample(map: &RationalMap, seed_point: SpherePoint, depth: usize, seed: u64) -> Result<ComplexSampleSet, MeasureError> {
    let deg = map.degree();
    if deg < 2 {
        return Err(MeasureError::DegreeTooSmall(deg));
    }
    if depth as f64 * (deg as f64).ln() > 22.0 + 1e-9 {
        return Err(MeasureError::TooManySamples { depth, degree: deg });
    }
    let lift = Lift::from_map(map)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generation = vec![seed_point];
    for level in 0..depth {
        let mut next = Vec::with_capacity(generation.len() * deg);
        for &t in &generation {
            let offset = rng.gen::<f64>() * std::f64::consts::TAU;
            next.extend(preimages(&lift, t, offset)?);
        }
        if level < 2 && next.iter().all(|p| p.chordal(next[0]) < 1e-9) {
            return Err(MeasureError::ExceptionalSeed(seed_point.to_string()));
        }
        generation = next;
    }
    let mut points = Vec::with_capacity(generation.len());
    let mut infinite = 0;
    for p in generation {
        match p {
            SpherePoint::Finite(z) => points.push(z),
            SpherePoint::Infinity => infinite += 1,
        }
    }
    Ok(ComplexSampleSet { points, infinite, seed, depth })
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `angles` and the uniform distribution on `[0, 2π)`.
pub fn ks_uniform_angles(angles: &[f64]) -> f64 {
    let mut u: Vec<f64> = angles.iter().map(|a| a.rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).max((i as f64 + 1.0) / n - x))
        .fold(0.0, f64::max)
}
