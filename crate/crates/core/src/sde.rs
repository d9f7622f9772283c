//! Euler-Maruyama integration of `dY = b(Y) dtau + sigma(Y) dW + g(Y-) dL`
//! on the operational clock, and its composition with an independent inverse
//! subordinator: `X_t = Y_{E_t}`.
//!
//! The driver's Brownian part is taken from `triplet.sigma2`; the jump part
//! from `triplet.jumps`. The triplet's own drift is deliberately ignored
//! here — deterministic drift belongs in `b(y)` so it can be state-dependent.

use crate::error::{Error, Result};
use crate::levy::LevyTriplet;
use crate::numerics::{compensated_total, mean_and_se};
use crate::rng::{StreamKey, COMPONENT_DIFFUSION, COMPONENT_JUMPS};
use crate::subordination::{inverse_process, sample_mixture_path, MixtureSpec};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use std::sync::Arc;

type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// State-dependent coefficients of the SDE on the operational clock.
#[derive(Clone)]
pub struct SDECoefficients {
    pub b: Coefficient,
    pub sigma: Coefficient,
    pub jump: Coefficient,
    /// Optional a-priori bound used only for sanity spot checks.
    pub lipschitz_bound: Option<f64>,
}

impl SDECoefficients {
    pub fn new<B, S, G>(b: B, sigma: S, jump: G) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            b: Arc::new(b),
            sigma: Arc::new(sigma),
            jump: Arc::new(jump),
            lipschitz_bound: None,
        }
    }

    pub fn linear(b: f64, sigma: f64) -> Self {
        let mut c = Self::new(move |_| b, move |_| sigma, |_| 1.0);
        c.lipschitz_bound = Some(0.0);
        c
    }

    /// Finite-difference spot check that the coefficients respect the stated
    /// Lipschitz bound on a probe interval; cheap guard against passing a
    /// wildly incompatible bound.
    pub fn spot_check(&self, lo: f64, hi: f64) -> Result<()> {
        let Some(bound) = self.lipschitz_bound else {
            return Ok(());
        };
        let n = 64;
        let h = (hi - lo) / n as f64;
        for f in [&self.b, &self.sigma, &self.jump] {
            for i in 0..n {
                let x = lo + i as f64 * h;
                let slope = (f(x + h) - f(x)).abs() / h;
                if slope > bound * (1.0 + 1e-6) + 1e-9 {
                    return Err(Error::Precondition(format!(
                        "coefficient slope {slope} near y = {x} exceeds the declared \
                         Lipschitz bound {bound}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A path of the undelayed SDE on the uniform operational grid `j * delta`.
#[derive(Debug, Clone)]
pub struct SdePath {
    pub delta: f64,
    pub y: Vec<f64>,
}

/// A time-changed path: `x[i] = y[e_index[i]]` on the wall-clock grid
/// `t_i = i * dt`, together with the operational path and the subordinator
/// grid index realizing the time change.
#[derive(Debug, Clone)]
pub struct TimeChangedPath {
    pub dt: f64,
    pub x: Vec<f64>,
    pub e_index: Vec<usize>,
    pub path: SdePath,
    pub d: Vec<f64>,
}

/// Euler-Maruyama on the operational clock: `n_steps` steps of size `delta`
/// from `y0`, driven by fresh increments of the triplet's diffusion and jump
/// parts from the supplied generators.
pub fn euler_maruyama<RW: Rng + ?Sized, RJ: Rng + ?Sized>(
    coeffs: &SDECoefficients,
    triplet: &LevyTriplet,
    y0: f64,
    delta: f64,
    n_steps: usize,
    rng_w: &mut RW,
    rng_j: &mut RJ,
) -> Result<SdePath> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
    }
    let normal = if triplet.sigma2 > 0.0 {
        Some(
            Normal::new(0.0, (triplet.sigma2 * delta).sqrt())
                .map_err(|e| Error::Domain(e.to_string()))?,
        )
    } else {
        None
    };
    let mut y = Vec::with_capacity(n_steps + 1);
    y.push(y0);
    let mut cur = y0;
    for step in 0..n_steps {
        let dw = normal.map_or(0.0, |n| n.sample(rng_w));
        let dj = triplet.sample_jump_increment(delta, rng_j)?;
        cur += (coeffs.b)(cur) * delta + (coeffs.sigma)(cur) * dw + (coeffs.jump)(cur) * dj;
        if !cur.is_finite() {
            return Err(Error::Simulation {
                step,
                message: format!("state became non-finite at operational time {}", step as f64 * delta),
            });
        }
        y.push(cur);
    }
    Ok(SdePath { delta, y })
}

/// Evaluate `X_{t_i} = Y_{E_{t_i}}` on the wall-clock grid `t_i = i * dt`,
/// `i = 0..=n_t`, given a subordinator path on the same operational grid as
/// `path`.
pub fn time_change_path(
    path: &SdePath,
    d: &crate::subordination::SubordinatorPath,
    dt: f64,
    n_t: usize,
) -> Result<TimeChangedPath> {
    if (path.delta - d.delta).abs() > 1e-15 * path.delta.max(d.delta) {
        return Err(Error::Precondition(format!(
            "SDE and subordinator grids differ: delta {} vs {}",
            path.delta, d.delta
        )));
    }
    let mut x = Vec::with_capacity(n_t + 1);
    let mut e_index = Vec::with_capacity(n_t + 1);
    for i in 0..=n_t {
        let t = i as f64 * dt;
        let e = inverse_process(d, t)?;
        let j = (e / path.delta).round() as usize;
        if j >= path.y.len() {
            return Err(Error::Precondition(format!(
                "operational path too short: need index {j}, have {}",
                path.y.len()
            )));
        }
        e_index.push(j);
        x.push(path.y[j]);
    }
    Ok(TimeChangedPath {
        dt,
        x,
        e_index,
        path: path.clone(),
        d: d.values.clone(),
    })
}

/// Full simulation setup for an ensemble of time-changed paths.
pub struct TimeChangedSde<'a> {
    pub coeffs: &'a SDECoefficients,
    pub triplet: &'a LevyTriplet,
    pub mixture: &'a MixtureSpec,
    pub y0: f64,
    pub delta: f64,
    pub dt: f64,
    pub t_max: f64,
}

impl TimeChangedSde<'_> {
    fn simulate_one(&self, key: &StreamKey) -> Result<TimeChangedPath> {
        let d = sample_mixture_path(self.mixture, self.delta, self.t_max, key)?;
        let n_steps = d.values.len() - 1;
        let mut rng_w = key.component(COMPONENT_DIFFUSION);
        let mut rng_j = key.component(COMPONENT_JUMPS);
        let path = euler_maruyama(
            self.coeffs,
            self.triplet,
            self.y0,
            self.delta,
            n_steps,
            &mut rng_w,
            &mut rng_j,
        )?;
        let n_t = (self.t_max / self.dt).floor() as usize;
        time_change_path(&path, &d, self.dt, n_t)
    }

    fn terminal_one(&self, key: &StreamKey, t: f64) -> Result<f64> {
        let d = sample_mixture_path(self.mixture, self.delta, self.t_max, key)?;
        let e = inverse_process(&d, t)?;
        let n_steps = (e / self.delta).round() as usize;
        let mut rng_w = key.component(COMPONENT_DIFFUSION);
        let mut rng_j = key.component(COMPONENT_JUMPS);
        let path = euler_maruyama(
            self.coeffs,
            self.triplet,
            self.y0,
            self.delta,
            n_steps,
            &mut rng_w,
            &mut rng_j,
        )?;
        Ok(*path.y.last().unwrap())
    }
}

/// Simulate `n_paths` fully detailed time-changed paths. Memory scales with
/// `n_paths * t_max / delta`; prefer [`simulate_terminal_values`] for large
/// ensembles.
pub fn simulate_time_changed_sde(
    setup: &TimeChangedSde<'_>,
    base_key: &StreamKey,
    n_paths: usize,
) -> Result<Vec<TimeChangedPath>> {
    (0..n_paths)
        .into_par_iter()
        .map(|p| setup.simulate_one(&base_key.with_path(p as u64)))
        .collect()
}

/// Terminal values `X_t` for `n_paths` paths. The result is ordered by path
/// index, so it is byte-identical for any rayon worker count.
pub fn simulate_terminal_values(
    setup: &TimeChangedSde<'_>,
    base_key: &StreamKey,
    n_paths: usize,
    t: f64,
) -> Result<Vec<f64>> {
    if t > setup.t_max {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds the simulated horizon t_max = {}",
            setup.t_max
        )));
    }
    (0..n_paths)
        .into_par_iter()
        .map(|p| setup.terminal_one(&base_key.with_path(p as u64), t))
        .collect()
}

/// Monte Carlo functional `E[ exp(-int_0^{E_t} q(Y_s) ds) phi(Y_{E_t}) ]`
/// estimated over `n_paths` paths; returns (mean, standard error).
///
/// The killing integral uses the left-endpoint rule on the operational grid,
/// matching the order of the Euler scheme itself.
pub fn feynman_kac_estimate<Q, P>(
    setup: &TimeChangedSde<'_>,
    base_key: &StreamKey,
    n_paths: usize,
    t: f64,
    q: Q,
    phi: P,
) -> Result<(f64, f64)>
where
    Q: Fn(f64) -> f64 + Send + Sync,
    P: Fn(f64) -> f64 + Send + Sync,
{
    if t > setup.t_max {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds the simulated horizon t_max = {}",
            setup.t_max
        )));
    }
    let vals: Vec<f64> = (0..n_paths)
        .into_par_iter()
        .map(|p| -> Result<f64> {
            let key = base_key.with_path(p as u64);
            let d = sample_mixture_path(setup.mixture, setup.delta, setup.t_max, &key)?;
            let e = inverse_process(&d, t)?;
            let n_steps = (e / setup.delta).round() as usize;
            let mut rng_w = key.component(COMPONENT_DIFFUSION);
            let mut rng_j = key.component(COMPONENT_JUMPS);
            let path = euler_maruyama(
                setup.coeffs,
                setup.triplet,
                setup.y0,
                setup.delta,
                n_steps,
                &mut rng_w,
                &mut rng_j,
            )?;
            let kill: f64 = compensated_total(
                path.y[..n_steps].iter().map(|&y| q(y) * setup.delta),
            );
            Ok((-kill).exp() * phi(*path.y.last().unwrap()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean_and_se(&vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpComponent, JumpLaw};
    use crate::specfun::{gamma_fn, mittag_leffler};

    fn key() -> StreamKey {
        StreamKey::new(0xDADA, 3, 0)
    }

    fn brownian_setup<'a>(
        coeffs: &'a SDECoefficients,
        triplet: &'a LevyTriplet,
        mixture: &'a MixtureSpec,
    ) -> TimeChangedSde<'a> {
        TimeChangedSde {
            coeffs,
            triplet,
            mixture,
            y0: 0.0,
            delta: 1e-3,
            dt: 0.1,
            t_max: 1.0,
        }
    }

    #[test]
    fn zero_coefficients_stay_put() {
        let coeffs = SDECoefficients::new(|_| 0.0, |_| 0.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let mut rw = key().component(COMPONENT_DIFFUSION);
        let mut rj = key().component(COMPONENT_JUMPS);
        let p = euler_maruyama(&coeffs, &triplet, 2.5, 0.01, 100, &mut rw, &mut rj).unwrap();
        assert!(p.y.iter().all(|&v| v == 2.5));
    }

    #[test]
    fn deterministic_drift_is_exact_for_linear_b() {
        // dY = 2 dtau: Y_n = y0 + 2 n delta without error.
        let coeffs = SDECoefficients::new(|_| 2.0, |_| 0.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 0.0).unwrap();
        let mut rw = key().component(COMPONENT_DIFFUSION);
        let mut rj = key().component(COMPONENT_JUMPS);
        let p = euler_maruyama(&coeffs, &triplet, 1.0, 0.25, 8, &mut rw, &mut rj).unwrap();
        assert!((p.y[8] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_path_reports_step() {
        let coeffs = SDECoefficients::new(|y| y * y * 1e150, |_| 0.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 0.0).unwrap();
        let mut rw = key().component(COMPONENT_DIFFUSION);
        let mut rj = key().component(COMPONENT_JUMPS);
        let err = euler_maruyama(&coeffs, &triplet, 1e150, 1.0, 5, &mut rw, &mut rj).unwrap_err();
        match err {
            Error::Simulation { step, .. } => assert!(step <= 2),
            other => panic!("expected simulation error, got {other}"),
        }
    }

    #[test]
    fn spot_check_catches_bad_bound() {
        let mut coeffs = SDECoefficients::new(|y| 10.0 * y, |_| 1.0, |_| 0.0);
        coeffs.lipschitz_bound = Some(1.0);
        assert!(coeffs.spot_check(-1.0, 1.0).is_err());
        coeffs.lipschitz_bound = Some(10.5);
        assert!(coeffs.spot_check(-1.0, 1.0).is_ok());
    }

    #[test]
    fn ou_variance_on_operational_clock() {
        // dY = -Y dtau + dW: Var[Y_1] = (1 - e^{-2})/2 = 0.432332358381694.
        let coeffs = SDECoefficients::new(|y| -y, |_| 1.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let delta = 1e-3;
        let n = 20_000usize;
        let base = key();
        let vals: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|p| {
                let k = base.with_path(p as u64);
                let mut rw = k.component(COMPONENT_DIFFUSION);
                let mut rj = k.component(COMPONENT_JUMPS);
                let path =
                    euler_maruyama(&coeffs, &triplet, 0.0, delta, 1000, &mut rw, &mut rj).unwrap();
                *path.y.last().unwrap()
            })
            .collect();
        let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
        let (m2, se) = mean_and_se(&sq);
        let want = 0.432_332_358_381_694;
        assert!(
            (m2 - want).abs() < 3.0 * se + 2.0 * delta,
            "var {m2} vs {want} (se {se})"
        );
    }

    #[test]
    fn time_change_constant_between_jumps_of_d() {
        // X is constant on wall-clock intervals where D jumps past them.
        let path = SdePath {
            delta: 1.0,
            y: vec![10.0, 11.0, 12.0, 13.0],
        };
        let d = crate::subordination::SubordinatorPath {
            delta: 1.0,
            values: vec![0.0, 0.5, 3.0, 3.1, 9.0],
        };
        let tc = time_change_path(&path, &d, 0.25, 11).unwrap();
        // For t in (0.5, 3.0) the inverse sits at 2, so X = y[2] = 12.
        for i in 3..=11 {
            assert_eq!(tc.x[i], 12.0, "t = {}", i as f64 * 0.25);
        }
        assert_eq!(tc.x[0], 11.0); // E_0 = 1 grid unit (first strict passage)
    }

    #[test]
    fn ensemble_is_deterministic_and_order_independent() {
        let coeffs = SDECoefficients::linear(0.1, 0.5);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let mixture = MixtureSpec::single(0.5).unwrap();
        let setup = brownian_setup(&coeffs, &triplet, &mixture);
        let a = simulate_terminal_values(&setup, &key(), 200, 1.0).unwrap();
        let b = simulate_terminal_values(&setup, &key(), 200, 1.0).unwrap();
        assert_eq!(a, b);
        // Serial pool with one thread must agree with the default pool.
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| simulate_terminal_values(&setup, &key(), 200, 1.0).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn terminal_variance_matches_fractional_moment() {
        // For dY = dW time-changed by the inverse 1/2-stable subordinator:
        // Var[X_1] = E[E_1] = 1/Gamma(1.5).
        let coeffs = SDECoefficients::new(|_| 0.0, |_| 1.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let mixture = MixtureSpec::single(0.5).unwrap();
        let setup = brownian_setup(&coeffs, &triplet, &mixture);
        let xs = simulate_terminal_values(&setup, &key(), 20_000, 1.0).unwrap();
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let (m2, se) = mean_and_se(&sq);
        let want = 1.0 / gamma_fn(1.5).unwrap();
        assert!(
            (m2 - want).abs() < 3.0 * se + 3.0 * setup.delta,
            "{m2} vs {want} (se {se})"
        );
    }

    #[test]
    fn duality_terminal_values_match_composed_paths() {
        // simulate_terminal_values must agree with composing the full path.
        let coeffs = SDECoefficients::new(|y| -0.5 * y, |_| 1.0, |_| 0.3);
        let triplet = LevyTriplet::new(
            0.0,
            1.0,
            JumpComponent::CompoundPoisson {
                rate: 1.0,
                law: JumpLaw::Deterministic { size: 1.0 },
            },
        )
        .unwrap();
        let mixture = MixtureSpec::new(vec![(1.0, 0.4), (1.0, 0.8)]).unwrap();
        let setup = brownian_setup(&coeffs, &triplet, &mixture);
        let terminals = simulate_terminal_values(&setup, &key(), 50, 1.0).unwrap();
        let full = simulate_time_changed_sde(&setup, &key(), 50).unwrap();
        for (p, tc) in full.iter().enumerate() {
            let i = (1.0 / setup.dt).round() as usize;
            assert_eq!(terminals[p], tc.x[i], "path {p}");
        }
    }

    #[test]
    fn identity_time_change_recovers_base_process() {
        // With D artificially replaced by the identity grid, X_t = Y_t up to
        // one grid cell of lag.
        let coeffs = SDECoefficients::new(|_| 1.0, |_| 0.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 0.0).unwrap();
        let delta = 1e-3;
        let mut rw = key().component(COMPONENT_DIFFUSION);
        let mut rj = key().component(COMPONENT_JUMPS);
        let path = euler_maruyama(&coeffs, &triplet, 0.0, delta, 1100, &mut rw, &mut rj).unwrap();
        let d = crate::subordination::SubordinatorPath {
            delta,
            values: (0..=1100).map(|j| j as f64 * delta).collect(),
        };
        let tc = time_change_path(&path, &d, 0.1, 10).unwrap();
        for i in 0..=10 {
            let t = i as f64 * 0.1;
            assert!((tc.x[i] - t).abs() <= delta + 1e-12);
        }
    }

    #[test]
    fn feynman_kac_without_killing_equals_plain_expectation() {
        let coeffs = SDECoefficients::new(|_| 0.0, |_| 1.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let mixture = MixtureSpec::single(0.5).unwrap();
        let setup = brownian_setup(&coeffs, &triplet, &mixture);
        let phi = |y: f64| y * y;
        let (fk, _) = feynman_kac_estimate(&setup, &key(), 2_000, 1.0, |_| 0.0, phi).unwrap();
        let xs = simulate_terminal_values(&setup, &key(), 2_000, 1.0).unwrap();
        let plain = compensated_total(xs.iter().map(|&x| phi(x))) / 2_000.0;
        assert!((fk - plain).abs() < 1e-12, "{fk} vs {plain}");
    }

    #[test]
    fn feynman_kac_constant_killing_matches_relaxation() {
        // q = 1, phi = 1, Y anything: E[e^{-E_t}] = E_beta(-t^beta) for a
        // single beta-subordinator; at beta = 1/2, t = 1 this is
        // e * erfc(1) = 0.42758357615580700.
        let coeffs = SDECoefficients::new(|_| 0.0, |_| 1.0, |_| 0.0);
        let triplet = LevyTriplet::brownian(0.0, 1.0).unwrap();
        let mixture = MixtureSpec::single(0.5).unwrap();
        let setup = brownian_setup(&coeffs, &triplet, &mixture);
        let (fk, se) =
            feynman_kac_estimate(&setup, &key(), 20_000, 1.0, |_| 1.0, |_| 1.0).unwrap();
        let want = mittag_leffler(0.5, -1.0).unwrap();
        assert!(
            (fk - want).abs() < 3.0 * se + 2.0 * setup.delta,
            "{fk} vs {want} (se {se})"
        );
    }
}
