//! Discrete fractional calculus on a uniform time grid: the Riemann-Liouville
//! integral `J^beta`, the Caputo derivative via the L1 scheme, and the
//! distributed-order derivative as a weighted sum of Caputo terms.

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::specfun::gamma_fn;

use super::DistributedOrder;

fn check_grid(g: &[f64], dt: f64) -> Result<()> {
    if g.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least two samples, got {}",
            g.len()
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    Ok(())
}

/// Riemann-Liouville integral `(J^beta g)(t_n)` for all grid points
/// `t_n = n dt` at once, for `beta` in (0, 1].
///
/// Product integration: g is taken piecewise linear between nodes and each
/// panel is integrated against the kernel exactly, so the rule is exact for
/// polynomials of degree <= 1 and second-order accurate otherwise.
pub fn fractional_integral(beta: f64, g: &[f64], dt: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!(
            "integral order must lie in (0, 1], got {beta}"
        )));
    }
    check_grid(g, dt)?;
    let n_max = g.len() - 1;
    let scale = dt.powf(beta) / gamma_fn(beta)?;
    let mut out = Vec::with_capacity(g.len());
    out.push(0.0);
    // Precompute a^beta and a^{beta+1} for a = 0..n_max.
    let pow_b: Vec<f64> = (0..=n_max).map(|a| (a as f64).powf(beta)).collect();
    let pow_b1: Vec<f64> = (0..=n_max).map(|a| (a as f64).powf(beta + 1.0)).collect();
    for n in 1..=n_max {
        let mut acc = CompensatedSum::new();
        for j in 0..n {
            // Panel [t_j, t_{j+1}] with kernel (t_n - s)^{beta-1}:
            // contribution scale * (g_j * p + g_{j+1} * q).
            let (a, b) = (n - j, n - j - 1);
            let db = pow_b[a] - pow_b[b];
            let db1 = pow_b1[a] - pow_b1[b];
            let p = db1 / (beta + 1.0) - b as f64 * db / beta;
            let q = a as f64 * db / beta - db1 / (beta + 1.0);
            acc.add(g[j] * p + g[j + 1] * q);
        }
        out.push(scale * acc.value());
    }
    Ok(out)
}

/// L1 weights `a_m = (m+1)^{1-beta} - m^{1-beta}`.
fn l1_weights(beta: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| ((m + 1) as f64).powf(1.0 - beta) - (m as f64).powf(1.0 - beta))
        .collect()
}

/// Caputo derivative `(D^beta g)(t_n)` on the full grid via the L1 scheme,
/// for `beta` in (0, 1]. At `beta = 1` this degenerates to the backward
/// difference quotient, which is the scheme's own limit.
pub fn caputo_derivative(beta: f64, g: &[f64], dt: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!(
            "derivative order must lie in (0, 1], got {beta}"
        )));
    }
    check_grid(g, dt)?;
    let n_max = g.len() - 1;
    if beta == 1.0 {
        let mut out = Vec::with_capacity(g.len());
        out.push((g[1] - g[0]) / dt);
        for n in 1..=n_max {
            out.push((g[n] - g[n - 1]) / dt);
        }
        return Ok(out);
    }
    let w = l1_weights(beta, n_max);
    let scale = dt.powf(-beta) / gamma_fn(2.0 - beta)?;
    let mut out = Vec::with_capacity(g.len());
    out.push(0.0); // the Caputo derivative of the history-free origin
    for n in 1..=n_max {
        let mut acc = CompensatedSum::new();
        for j in 1..=n {
            acc.add(w[n - j] * (g[j] - g[j - 1]));
        }
        out.push(scale * acc.value());
    }
    Ok(out)
}

/// Distributed-order derivative `sum_k C_k (D^{beta_k} g)(t_n)`.
pub fn distributed_order_apply(
    order: &DistributedOrder,
    g: &[f64],
    dt: f64,
) -> Result<Vec<f64>> {
    check_grid(g, dt)?;
    let mut out = vec![0.0; g.len()];
    for (c, beta) in order.atoms() {
        let d = caputo_derivative(beta, g, dt)?;
        for (o, v) in out.iter_mut().zip(d) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// Scalar relaxation `D^beta u = -lambda u`, `u(0) = 1`, solved through the
/// equivalent Volterra equation `u = 1 - lambda J^beta u` with the same
/// piecewise-linear product-integration panels as [`fractional_integral`].
///
/// Unlike the L1 form of the same discretization, this arrangement keeps
/// order `1 + beta` on the cusped solution `E_beta(-lambda t^beta)`; the
/// plain L1 scheme is first-order for such data on uniform grids.
pub fn relaxation_solve(beta: f64, lambda: f64, dt: f64, n_t: usize) -> Result<Vec<f64>> {
    let idx = crate::specfun::StableIndex::new(beta)?;
    let beta = idx.get();
    if !(dt > 0.0) || !dt.is_finite() || n_t == 0 {
        return Err(Error::Domain(format!(
            "need dt > 0 and n_t >= 1, got dt={dt}, n_t={n_t}"
        )));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!(
            "relaxation rate must be >= 0, got {lambda}"
        )));
    }
    let scale = dt.powf(beta) / gamma_fn(beta)?;
    let pow_b: Vec<f64> = (0..=n_t).map(|a| (a as f64).powf(beta)).collect();
    let pow_b1: Vec<f64> = (0..=n_t).map(|a| (a as f64).powf(beta + 1.0)).collect();
    let mut u = Vec::with_capacity(n_t + 1);
    u.push(1.0f64);
    // Weight of the implicit endpoint (last panel, a = 1, b = 0).
    let w_last = 1.0 / beta - 1.0 / (beta + 1.0);
    for n in 1..=n_t {
        let mut hist = CompensatedSum::new();
        for j in 0..n {
            let (a, b) = (n - j, n - j - 1);
            let db = pow_b[a] - pow_b[b];
            let db1 = pow_b1[a] - pow_b1[b];
            let p = db1 / (beta + 1.0) - b as f64 * db / beta;
            let q = a as f64 * db / beta - db1 / (beta + 1.0);
            hist.add(u[j] * p);
            if j < n - 1 {
                hist.add(u[j + 1] * q);
            }
        }
        u.push((1.0 - lambda * scale * hist.value()) / (1.0 + lambda * scale * w_last));
    }
    Ok(u)
}
