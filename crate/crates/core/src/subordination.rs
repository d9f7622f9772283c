//! Stable-subordinator mixtures `D_t = sum_k c_k D_{k,t}`, their inverse
//! first-hitting-time process `E_t = inf{tau : D_tau > t}`, and the density
//! of `E_t` for mixtures of at most two components.

use crate::error::{Error, Result};
use crate::numerics::{lerp_table, CompensatedSum};
use crate::rng::StreamKey;
use crate::specfun::{gamma_fn, stable_cdf, stable_density, StableIndex};
use rand::Rng;
use std::f64::consts::PI;

/// Hard guard against runaway path generation.
pub const MAX_PATH_STEPS: usize = 100_000_000;

/// One component of a subordinator mixture: scale `c > 0` and index `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureAtom {
    pub c: f64,
    pub beta: StableIndex,
}

/// The mixture `D_t = sum_k c_k D_{k,t}` of independent stable subordinators.
///
/// Duplicated indices are legal; they are merged (by summing `c_k^{beta_k}`)
/// only when the induced order measure is derived, never in path simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    atoms: Vec<MixtureAtom>,
}

impl MixtureSpec {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("mixture needs at least one atom".into()));
        }
        let atoms = atoms
            .into_iter()
            .map(|(c, beta)| {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::Domain(format!("mixture scale must be > 0, got {c}")));
                }
                Ok(MixtureAtom {
                    c,
                    beta: StableIndex::new(beta)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { atoms })
    }

    pub fn single(beta: f64) -> Result<Self> {
        Self::new(vec![(1.0, beta)])
    }

    pub fn atoms(&self) -> &[MixtureAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weights of the induced order measure `mu = sum c_k^{beta_k} delta_{beta_k}`,
    /// with duplicate indices merged.
    pub fn induced_order_weights(&self) -> Vec<(f64, f64)> {
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for a in &self.atoms {
            let beta = a.beta.get();
            let weight = a.c.powf(beta);
            match merged.iter_mut().find(|(_, b)| (*b - beta).abs() < 1e-14) {
                Some(slot) => slot.0 += weight,
                None => merged.push((weight, beta)),
            }
        }
        merged
    }

    /// Smallest index among the components; sets the asymptotic tail rate of
    /// the inverse-process density.
    pub fn beta_min(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.beta.get())
            .fold(f64::INFINITY, f64::min)
    }
}

/// A discretized monotone path of `D` on the uniform operational grid
/// `tau_j = j * delta`, with `values[j] = D_{j delta}` and `values[0] = 0`.
#[derive(Debug, Clone)]
pub struct SubordinatorPath {
    pub delta: f64,
    pub values: Vec<f64>,
}

impl SubordinatorPath {
    pub fn last(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// One increment of a standardized beta-stable subordinator over step `delta`,
/// via Kanter's transformation (exact, two uniforms per draw).
pub fn sample_stable_increment<R: Rng + ?Sized>(
    beta: StableIndex,
    delta: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
    }
    Ok(delta.powf(1.0 / beta.get()) * kanter_draw(beta.get(), rng))
}

#[inline]
fn kanter_draw<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(1e-12..(1.0 - 1e-12)) * PI;
    let w: f64 = -rng.gen_range(1e-300f64..1.0).ln();
    let s1 = (beta * u).sin() / u.sin().powf(1.0 / beta);
    let s2 = (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta);
    s1 * s2
}

/// Sample `D` on the grid `j * delta` until the first node with `D > t_max`.
///
/// Component streams come from disjoint `(seed, path, component)` labels so
/// mixtures are reproducible and mutually independent across components.
pub fn sample_mixture_path(
    spec: &MixtureSpec,
    delta: f64,
    t_max: f64,
    key: &StreamKey,
) -> Result<SubordinatorPath> {
    if !(delta > 0.0) || !(t_max > 0.0) {
        return Err(Error::Domain(format!(
            "delta and t_max must be > 0, got delta={delta}, t_max={t_max}"
        )));
    }
    let mut streams: Vec<_> = (0..spec.len())
        .map(|k| key.component(k as u64))
        .collect();
    let scales: Vec<f64> = spec
        .atoms
        .iter()
        .map(|a| a.c * delta.powf(1.0 / a.beta.get()))
        .collect();
    let betas: Vec<f64> = spec.atoms.iter().map(|a| a.beta.get()).collect();

    let mut values = Vec::with_capacity(1024);
    values.push(0.0);
    let mut current = 0.0f64;
    while current <= t_max {
        if values.len() >= MAX_PATH_STEPS {
            return Err(Error::Resource(format!(
                "subordinator path exceeded {MAX_PATH_STEPS} steps before passing t_max={t_max}"
            )));
        }
        let mut inc = 0.0;
        for k in 0..betas.len() {
            inc += scales[k] * kanter_draw(betas[k], &mut streams[k]);
        }
        current += inc;
        values.push(current);
    }
    Ok(SubordinatorPath { delta, values })
}

/// First-hitting inverse on the grid: `delta * min{j : D_{j delta} > t}`.
pub fn inverse_process(path: &SubordinatorPath, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be >= 0, got {t}")));
    }
    if path.last() <= t {
        return Err(Error::Precondition(format!(
            "path ends at D = {} but must extend past t = {t}; extend the path horizon",
            path.last()
        )));
    }
    // First index strictly exceeding t; partition_point gives exactly that
    // for a nondecreasing sequence.
    let j = path.values.partition_point(|&d| d <= t);
    Ok(path.delta * j as f64)
}

/// Log-Laplace exponent of the mixture at t = 1:
/// `ln E[exp(-s D_1)] = -sum_k c_k^{beta_k} s^{beta_k}`.
pub fn mixture_laplace_exponent(spec: &MixtureSpec, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("s must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::new();
    for a in &spec.atoms {
        let beta = a.beta.get();
        acc.add(a.c.powf(beta) * s.powf(beta));
    }
    Ok(-acc.value())
}

/// Single draw of `D_t` itself (one increment per component).
pub fn sample_mixture_value(spec: &MixtureSpec, t: f64, key: &StreamKey) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be > 0, got {t}")));
    }
    let mut total = 0.0;
    for (k, a) in spec.atoms.iter().enumerate() {
        let mut rng = key.component(k as u64);
        total += a.c * t.powf(1.0 / a.beta.get()) * kanter_draw(a.beta.get(), &mut rng);
    }
    Ok(total)
}

/// Evaluator for the density `f_{E_t}(tau)` of the inverse process, valid for
/// mixtures with one or two components. Two-component evaluation tabulates
/// the standardized component CDF/density once, then convolves and
/// differentiates numerically; construction is the expensive part, so build
/// one evaluator per spec and reuse it across (t, tau) queries.
pub struct InverseDensity {
    kind: InverseDensityKind,
}

enum InverseDensityKind {
    Single {
        c: f64,
        beta: f64,
    },
    Pair {
        c1: f64,
        beta1: f64,
        c2: f64,
        beta2: f64,
        cdf1: LogTable,
        pdf2: LogTable,
    },
}

/// Values tabulated against log-spaced abscissae on [1e-7, 1e9].
struct LogTable {
    log_xs: Vec<f64>,
    ys: Vec<f64>,
    beta: f64,
    is_cdf: bool,
}

impl LogTable {
    fn build(beta: f64, is_cdf: bool) -> Result<Self> {
        let idx = StableIndex::new(beta)?;
        let (lo, hi, per_decade) = (1e-7f64, 1e9f64, 160usize);
        let decades = (hi / lo).log10();
        let n = (decades * per_decade as f64).ceil() as usize + 1;
        let mut log_xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for i in 0..n {
            let lx = lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64;
            let x = lx.exp();
            let y = if is_cdf {
                stable_cdf(idx, x)?
            } else {
                stable_density(idx, x)?
            };
            log_xs.push(lx);
            ys.push(y);
        }
        Ok(Self { log_xs, ys, beta, is_cdf })
    }

    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let lx = x.ln();
        if lx <= self.log_xs[0] {
            return 0.0; // density underflows far below the mode
        }
        if lx >= *self.log_xs.last().unwrap() {
            if self.is_cdf {
                return 1.0;
            }
            // One-term tail beyond the table.
            let b = self.beta;
            return b / (gamma_fn(1.0 - b).unwrap() * x.powf(1.0 + b));
        }
        lerp_table(&self.log_xs, &self.ys, lx)
    }
}

impl InverseDensity {
    pub fn new(spec: &MixtureSpec) -> Result<Self> {
        match spec.atoms() {
            [a] => Ok(Self {
                kind: InverseDensityKind::Single {
                    c: a.c,
                    beta: a.beta.get(),
                },
            }),
            [a, b] => Ok(Self {
                kind: InverseDensityKind::Pair {
                    c1: a.c,
                    beta1: a.beta.get(),
                    c2: b.c,
                    beta2: b.beta.get(),
                    cdf1: LogTable::build(a.beta.get(), true)?,
                    pdf2: LogTable::build(b.beta.get(), false)?,
                },
            }),
            _ => Err(Error::Domain(
                "inverse density supports at most two mixture components; \
                 use Monte Carlo for larger mixtures"
                    .into(),
            )),
        }
    }

    pub fn eval(&self, t: f64, tau: f64) -> Result<f64> {
        if !(t > 0.0) || !(tau > 0.0) {
            return Err(Error::Domain(format!(
                "inverse density requires t, tau > 0, got t={t}, tau={tau}"
            )));
        }
        match &self.kind {
            InverseDensityKind::Single { c, beta } => {
                // Exact differentiation of P(E_t <= tau) = 1 - F(t / (c tau^{1/beta})).
                let idx = StableIndex::new(*beta)?;
                let u = t / (c * tau.powf(1.0 / beta));
                let f = stable_density(idx, u)?;
                Ok(f * t / (c * beta) * tau.powf(-1.0 / beta - 1.0))
            }
            InverseDensityKind::Pair { .. } => {
                // Central difference of the survival function in tau; step tied
                // to the validated tau-range [0, 6] divided 512 ways.
                let h = (6.0 / 512.0f64).min(0.5 * tau);
                let gp = self.pair_hit_probability(t, tau + h);
                let gm = self.pair_hit_probability(t, tau - h);
                Ok(((gm - gp) / (2.0 * h)).max(0.0))
            }
        }
    }

    /// P(E_t > tau) = P(c1 tau^{1/b1} S1 + c2 tau^{1/b2} S2 <= t) for N = 2,
    /// by convolution quadrature of the rescaled component laws.
    fn pair_hit_probability(&self, t: f64, tau: f64) -> f64 {
        let InverseDensityKind::Pair {
            c1,
            beta1,
            c2,
            beta2,
            cdf1,
            pdf2,
        } = &self.kind
        else {
            unreachable!()
        };
        let a = c1 * tau.powf(1.0 / beta1);
        let b = c2 * tau.powf(1.0 / beta2);
        // In the standardized variable y = s / b the convolution reads
        // int_0^{t/b} F1((t - b y)/a) f2(y) dy. A log-spaced trapezoid grid
        // keeps the density peak resolved no matter how small b gets.
        let y_hi = t / b;
        let y_lo = 1e-7f64;
        if y_hi <= y_lo {
            return 0.0;
        }
        let n = 4000usize;
        let dl = (y_hi / y_lo).ln() / n as f64;
        let mut acc = CompensatedSum::new();
        let mut prev = 0.0f64; // integrand * y at the previous node
        for i in 0..=n {
            let y = y_lo * (dl * i as f64).exp();
            let cur = cdf1.eval((t - b * y) / a) * pdf2.eval(y) * y;
            if i > 0 {
                acc.add(0.5 * (prev + cur) * dl);
            }
            prev = cur;
        }
        acc.value().clamp(0.0, 1.0)
    }
}

/// Convenience single-shot evaluation; builds tables on each call for N = 2.
pub fn inverse_density(spec: &MixtureSpec, t: f64, tau: f64) -> Result<f64> {
    InverseDensity::new(spec)?.eval(t, tau)
}
