//! Distances between samples, distributions, and gridded fields.

use crate::error::{Error, Result};

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
/// The sample need not be pre-sorted.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Domain("KS distance needs a nonempty sample".into()));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("sample contains NaN"));
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov statistic; both inputs must be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        // Advance past ties on both sides before comparing ECDFs.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Gaussian kernel density estimate at `x`, Silverman-style bandwidth
/// `n^{-1/5} * std` unless overridden.
pub fn kernel_density(sample: &[f64], x: f64, bandwidth: Option<f64>) -> Result<f64> {
    if sample.len() < 2 {
        return Err(Error::Domain("kernel density needs >= 2 points".into()));
    }
    let n = sample.len() as f64;
    let h = match bandwidth {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(Error::Domain(format!("bandwidth must be > 0, got {h}"))),
        None => {
            let mean = sample.iter().sum::<f64>() / n;
            let var = sample.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            n.powf(-0.2) * var.sqrt().max(f64::MIN_POSITIVE)
        }
    };
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * h * n);
    Ok(sample
        .iter()
        .map(|&s| (-0.5 * ((x - s) / h).powi(2)).exp())
        .sum::<f64>()
        * norm)
}

/// L1 distance between two functions tabulated on the same uniform grid
/// with spacing `dx` (rectangle rule).
pub fn l1_grid_distance(a: &[f64], b: &[f64], dx: f64) -> Result<f64> {
    check_grids(a, b, dx)?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx)
}

/// L2 distance between two functions tabulated on the same uniform grid.
pub fn l2_grid_distance(a: &[f64], b: &[f64], dx: f64) -> Result<f64> {
    check_grids(a, b, dx)?;
    Ok((a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * dx).sqrt())
}

fn check_grids(a: &[f64], b: &[f64], dx: f64) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Domain(format!(
            "grid lengths must match and be nonempty, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(dx > 0.0) {
        return Err(Error::Domain(format!("dx must be > 0, got {dx}")));
    }
    Ok(())
}
