//! Levy process drivers: characteristic triplets, the symbol
//! `Psi(xi) = i b xi - (sigma^2/2) xi^2 + jump part`, and exact
//! increment samplers for each supported jump component.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use std::f64::consts::PI;

/// Jump-size law of a compound Poisson component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLaw {
    Deterministic { size: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpLaw::Deterministic { size } => {
                if !size.is_finite() || size == 0.0 {
                    return Err(Error::Domain(format!(
                        "deterministic jump size must be finite and nonzero, got {size}"
                    )));
                }
            }
            JumpLaw::Uniform { lo, hi } => {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::Domain(format!(
                        "uniform jump law needs lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Characteristic function E[e^{i xi J}].
    pub fn char_fn(&self, xi: f64) -> Complex64 {
        match *self {
            JumpLaw::Deterministic { size } => Complex64::new(0.0, xi * size).exp(),
            JumpLaw::Uniform { lo, hi } => {
                if xi == 0.0 {
                    return Complex64::new(1.0, 0.0);
                }
                let ei = |x: f64| Complex64::new(0.0, x).exp();
                (ei(xi * hi) - ei(xi * lo)) / Complex64::new(0.0, xi * (hi - lo))
            }
        }
    }

    /// Mean of the law truncated to |y| <= 1, i.e. E[J 1_{|J| <= 1}]. Enters
    /// the symbol through the compensator term of the truncation convention.
    pub fn small_jump_mean(&self) -> f64 {
        match *self {
            JumpLaw::Deterministic { size } => {
                if size.abs() <= 1.0 {
                    size
                } else {
                    0.0
                }
            }
            JumpLaw::Uniform { lo, hi } => {
                let a = lo.max(-1.0);
                let b = hi.min(1.0);
                if a >= b {
                    0.0
                } else {
                    0.5 * (a + b) * (b - a) / (hi - lo)
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            JumpLaw::Deterministic { size } => size,
            JumpLaw::Uniform { lo, hi } => rng.gen_range(lo..hi),
        }
    }
}

/// Jump component of the driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpComponent {
    None,
    CompoundPoisson { rate: f64, law: JumpLaw },
    /// Symmetric alpha-stable with characteristic function e^{-|xi|^alpha}
    /// per unit time (unit scale).
    SymmetricStable { alpha: f64 },
}

/// Characteristic triplet (b, sigma^2, jump component) with jump measure
/// compensated on |y| <= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyTriplet {
    pub drift: f64,
    pub sigma2: f64,
    pub jumps: JumpComponent,
}

impl LevyTriplet {
    pub fn new(drift: f64, sigma2: f64, jumps: JumpComponent) -> Result<Self> {
        if !drift.is_finite() || !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(Error::Domain(format!(
                "need finite drift and sigma^2 >= 0, got b={drift}, sigma2={sigma2}"
            )));
        }
        match jumps {
            JumpComponent::None => {}
            JumpComponent::CompoundPoisson { rate, law } => {
                if !(rate > 0.0) || !rate.is_finite() {
                    return Err(Error::Domain(format!(
                        "compound Poisson rate must be > 0, got {rate}"
                    )));
                }
                law.validate()?;
            }
            JumpComponent::SymmetricStable { alpha } => {
                if !(alpha > 0.0 && alpha < 2.0) {
                    return Err(Error::Domain(format!(
                        "stable jump index must lie in (0, 2), got {alpha}"
                    )));
                }
            }
        }
        Ok(Self {
            drift,
            sigma2,
            jumps,
        })
    }

    pub fn brownian(drift: f64, sigma2: f64) -> Result<Self> {
        Self::new(drift, sigma2, JumpComponent::None)
    }

    /// The symbol: E[e^{i xi L_t}] = e^{t Psi(xi)}.
    pub fn symbol(&self, xi: f64) -> Complex64 {
        let mut psi = Complex64::new(
            -0.5 * self.sigma2 * xi * xi,
            self.drift * xi,
        );
        match self.jumps {
            JumpComponent::None => {}
            JumpComponent::CompoundPoisson { rate, law } => {
                // Finite activity: compensate the small-jump mean so the
                // drift keeps the |y| <= 1 truncation convention.
                let m = law.small_jump_mean();
                psi += rate * (law.char_fn(xi) - Complex64::ONE)
                    - Complex64::new(0.0, rate * m * xi);
            }
            JumpComponent::SymmetricStable { alpha } => {
                psi += Complex64::new(-xi.abs().powf(alpha), 0.0);
            }
        }
        psi
    }

    /// Exact sample of `L_{t+delta} - L_t`.
    pub fn sample_increment<R: Rng + ?Sized>(&self, delta: f64, rng: &mut R) -> Result<f64> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
        }
        let mut x = self.drift * delta;
        if self.sigma2 > 0.0 {
            let n = Normal::new(0.0, (self.sigma2 * delta).sqrt())
                .map_err(|e| Error::Domain(e.to_string()))?;
            x += n.sample(rng);
        }
        x += self.sample_jump_increment(delta, rng)?;
        Ok(x)
    }

    /// The jump part of the increment alone (compensated as in the symbol).
    pub fn sample_jump_increment<R: Rng + ?Sized>(
        &self,
        delta: f64,
        rng: &mut R,
    ) -> Result<f64> {
        match self.jumps {
            JumpComponent::None => Ok(0.0),
            JumpComponent::CompoundPoisson { rate, law } => {
                let pois = Poisson::new(rate * delta).map_err(|e| Error::Domain(e.to_string()))?;
                let n = pois.sample(rng) as usize;
                let mut s = -rate * law.small_jump_mean() * delta;
                for _ in 0..n {
                    s += law.sample(rng);
                }
                Ok(s)
            }
            JumpComponent::SymmetricStable { alpha } => {
                Ok(delta.powf(1.0 / alpha) * sample_symmetric_stable(alpha, rng)?)
            }
        }
    }
}

/// Standard symmetric alpha-stable draw (Chambers-Mallows-Stuck), normalized
/// so the characteristic function is exp(-|xi|^alpha).
pub fn sample_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Domain(format!(
            "stable index must lie in (0, 2), got {alpha}"
        )));
    }
    let u = PI * (rng.gen_range(1e-12..(1.0 - 1e-12)) - 0.5);
    let w = -rng.gen_range(1e-300f64..1.0).ln();
    if (alpha - 1.0).abs() < 1e-12 {
        return Ok(u.tan());
    }
    let x = (alpha * u).sin() / u.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * u).cos() / w).powf((1.0 - alpha) / alpha);
    Ok(x)
}
