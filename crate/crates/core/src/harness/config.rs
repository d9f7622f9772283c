//! TOML experiment configuration: parsing, validation, and conversion into
//! the core model types.

use crate::error::{Error, Result};
use crate::fracpde::DistributedOrder;
use crate::levy::{JumpComponent, JumpLaw, LevyTriplet};
use crate::sde::SDECoefficients;
use crate::subordination::MixtureSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// The experiment kinds the runner understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SubordinatorCheck,
    InverseMoments,
    McVsPde,
    DodeTwoAtom,
    StableDriver,
    FeynmanKac,
    SolverConvergence,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SubordinatorCheck => "subordinator-check",
            Self::InverseMoments => "inverse-moments",
            Self::McVsPde => "mc-vs-pde",
            Self::DodeTwoAtom => "dode-two-atom",
            Self::StableDriver => "stable-driver",
            Self::FeynmanKac => "feynman-kac",
            Self::SolverConvergence => "solver-convergence",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "subordinator-check" => Ok(Self::SubordinatorCheck),
            "inverse-moments" => Ok(Self::InverseMoments),
            "mc-vs-pde" => Ok(Self::McVsPde),
            "dode-two-atom" => Ok(Self::DodeTwoAtom),
            "stable-driver" => Ok(Self::StableDriver),
            "feynman-kac" => Ok(Self::FeynmanKac),
            "solver-convergence" => Ok(Self::SolverConvergence),
            other => Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        }
    }

    /// Distinct RNG stream label per kind, so experiments never share draws.
    pub fn stream_label(&self) -> u64 {
        match self {
            Self::SubordinatorCheck => 1,
            Self::InverseMoments => 2,
            Self::McVsPde => 3,
            Self::DodeTwoAtom => 4,
            Self::StableDriver => 5,
            Self::FeynmanKac => 6,
            Self::SolverConvergence => 7,
        }
    }

    /// Whether the experiment estimates statistics from sampled paths.
    pub fn is_statistical(&self) -> bool {
        !matches!(self, Self::SolverConvergence)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MixtureConfig {
    /// Atoms as (scale c, index beta) pairs.
    pub atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JumpsConfig {
    None,
    CompoundPoisson {
        rate: f64,
        #[serde(flatten)]
        law: JumpLawConfig,
    },
    SymmetricStable {
        alpha: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum JumpLawConfig {
    Deterministic { size: f64 },
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TripletConfig {
    #[serde(default)]
    pub drift: f64,
    #[serde(default = "one")]
    pub sigma2: f64,
    #[serde(default)]
    pub jumps: Option<JumpsConfig>,
}

fn one() -> f64 {
    1.0
}

impl Default for TripletConfig {
    fn default() -> Self {
        Self {
            drift: 0.0,
            sigma2: 1.0,
            jumps: None,
        }
    }
}

/// SDE coefficients as polynomials in y (constant term first), e.g.
/// `b = [0.0, -1.0]` is b(y) = -y.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoefficientsConfig {
    #[serde(default = "zero_poly")]
    pub b: Vec<f64>,
    #[serde(default = "one_poly")]
    pub sigma: Vec<f64>,
    #[serde(default = "one_poly")]
    pub jump: Vec<f64>,
}

fn zero_poly() -> Vec<f64> {
    vec![0.0]
}

fn one_poly() -> Vec<f64> {
    vec![1.0]
}

impl Default for CoefficientsConfig {
    fn default() -> Self {
        Self {
            b: zero_poly(),
            sigma: one_poly(),
            jump: one_poly(),
        }
    }
}

pub fn eval_poly(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridsConfig {
    /// Operational (subordinator / SDE) step.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Wall-clock / solver time step.
    #[serde(default = "default_delta")]
    pub dt: f64,
    /// Spatial step.
    #[serde(default = "default_dx")]
    pub dx: f64,
    /// Spatial half-width.
    #[serde(default = "default_l")]
    pub l: f64,
    /// Wall-clock horizon.
    #[serde(default = "one")]
    pub t_max: f64,
}

fn default_delta() -> f64 {
    1e-3
}
fn default_dx() -> f64 {
    0.02
}
fn default_l() -> f64 {
    8.0
}

impl Default for GridsConfig {
    fn default() -> Self {
        Self {
            delta: default_delta(),
            dt: default_delta(),
            dx: default_dx(),
            l: default_l(),
            t_max: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DistributedOrderConfig {
    /// Atoms as (weight C, order beta) pairs.
    pub atoms: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_paths")]
    pub n_paths: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
    pub mixture: MixtureConfig,
    #[serde(default)]
    pub triplet: TripletConfig,
    #[serde(default)]
    pub coefficients: CoefficientsConfig,
    #[serde(default)]
    pub distributed_order: Option<DistributedOrderConfig>,
    #[serde(default)]
    pub grids: GridsConfig,
}

fn default_seed() -> u64 {
    0
}
fn default_paths() -> usize {
    10_000
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_canonical_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} not supported; this build reads version {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let g = &self.grids;
        for (name, v) in [
            ("grids.delta", g.delta),
            ("grids.dt", g.dt),
            ("grids.dx", g.dx),
            ("grids.l", g.l),
            ("grids.t_max", g.t_max),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.kind.is_statistical() && self.n_paths < 100 {
            return Err(Error::Config(format!(
                "n_paths = {} too small: statistical experiments need >= 100",
                self.n_paths
            )));
        }
        let mixture = self.mixture_spec()?;
        self.triplet()?;
        if let Some(dor) = &self.distributed_order {
            // The induced order measure is not optional: an explicit override
            // must match {(c_k^{beta_k}, beta_k)} or the pairing that the
            // simulation relies on would silently break.
            let given = DistributedOrder::new(dor.atoms.clone())
                .map_err(|e| Error::Config(format!("distributed_order: {e}")))?;
            let induced = DistributedOrder::from_mixture(&mixture);
            if !given.approx_eq(&induced, 1e-12) {
                let induced_atoms: Vec<(f64, f64)> = induced.atoms().collect();
                return Err(Error::Config(format!(
                    "distributed_order {:?} does not match the measure {:?} induced by the \
                     mixture; drop the override or fix the weights",
                    dor.atoms, induced_atoms
                )));
            }
        }
        Ok(())
    }

    pub fn mixture_spec(&self) -> Result<MixtureSpec> {
        MixtureSpec::new(self.mixture.atoms.clone())
            .map_err(|e| Error::Config(format!("mixture: {e}")))
    }

    pub fn distributed_order(&self) -> Result<DistributedOrder> {
        Ok(DistributedOrder::from_mixture(&self.mixture_spec()?))
    }

    pub fn triplet(&self) -> Result<LevyTriplet> {
        let jumps = match &self.triplet.jumps {
            None | Some(JumpsConfig::None) => JumpComponent::None,
            Some(JumpsConfig::CompoundPoisson { rate, law }) => JumpComponent::CompoundPoisson {
                rate: *rate,
                law: match *law {
                    JumpLawConfig::Deterministic { size } => JumpLaw::Deterministic { size },
                    JumpLawConfig::Uniform { lo, hi } => JumpLaw::Uniform { lo, hi },
                },
            },
            Some(JumpsConfig::SymmetricStable { alpha }) => {
                JumpComponent::SymmetricStable { alpha: *alpha }
            }
        };
        LevyTriplet::new(self.triplet.drift, self.triplet.sigma2, jumps)
            .map_err(|e| Error::Config(format!("triplet: {e}")))
    }

    pub fn coefficients(&self) -> SDECoefficients {
        let b = self.coefficients.b.clone();
        let s = self.coefficients.sigma.clone();
        let j = self.coefficients.jump.clone();
        SDECoefficients::new(
            move |y| eval_poly(&b, y),
            move |y| eval_poly(&s, y),
            move |y| eval_poly(&j, y),
        )
    }
}
