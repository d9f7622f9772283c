//! Distributed-order time-fractional Kolmogorov equations
//! `sum_k C_k D^{beta_k} u = A u` on a periodic interval: order measures,
//! generator discretizations, gridded fields with CSV/binary serialization,
//! and the implicit time stepper.

pub mod fractional;
pub mod solver;

use crate::error::{Error, Result};
use crate::specfun::StableIndex;
use crate::subordination::MixtureSpec;
use std::io::{Read, Write};
use std::sync::Arc;

pub use solver::{forward_operator_apply, solve_dode, subordination_solution, SolveOutput};

/// A finite atomic measure `sum_k C_k delta_{beta_k}` on (0, 1) weighting the
/// fractional time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedOrder {
    atoms: Vec<(f64, StableIndex)>,
}

impl DistributedOrder {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("order measure needs at least one atom".into()));
        }
        let atoms = atoms
            .into_iter()
            .map(|(c, beta)| {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::Domain(format!("order weight must be > 0, got {c}")));
                }
                Ok((c, StableIndex::new(beta)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { atoms })
    }

    pub fn single(beta: f64) -> Result<Self> {
        Self::new(vec![(1.0, beta)])
    }

    /// The measure induced by a subordinator mixture: weights `c_k^{beta_k}`
    /// at `beta_k`, duplicate indices merged.
    pub fn from_mixture(spec: &MixtureSpec) -> Self {
        let atoms = spec
            .induced_order_weights()
            .into_iter()
            .map(|(w, beta)| (w, StableIndex::new(beta).expect("index validated by spec")))
            .collect();
        Self { atoms }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().map(|&(c, b)| (c, b.get()))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Equality up to `tol` on weights, requiring identical index sets.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.atoms.len() != other.atoms.len() {
            return false;
        }
        let mut a: Vec<(f64, f64)> = self.atoms().collect();
        let mut b: Vec<(f64, f64)> = other.atoms().collect();
        a.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        b.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
        a.iter()
            .zip(&b)
            .all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
    }
}

type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Spatial generator to use on the right-hand side of the equation.
#[derive(Clone)]
pub enum GeneratorSpec {
    /// Backward operator `A f = b f' + (sigma^2/2) f''` (acts on observables).
    DriftDiffusionBackward { b: SpaceFn, sigma: SpaceFn },
    /// Forward (adjoint) operator `A* h = -(b h)' + ((sigma^2/2) h)''`
    /// (acts on densities).
    DriftDiffusionForward { b: SpaceFn, sigma: SpaceFn },
    /// `A u = -(-Delta)^{alpha/2} (g(x)^alpha u)` via the spectral multiplier
    /// `-|xi|^alpha` on the periodic grid.
    FractionalLaplacian { alpha: f64, g: SpaceFn },
    /// Pure relaxation `A u = -lambda u`; analytic solutions are explicit,
    /// which makes this the convergence-test generator.
    Reaction { lambda: f64 },
}

impl GeneratorSpec {
    pub fn drift_diffusion_backward<B, S>(b: B, sigma: S) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::DriftDiffusionBackward {
            b: Arc::new(b),
            sigma: Arc::new(sigma),
        }
    }

    pub fn drift_diffusion_forward<B, S>(b: B, sigma: S) -> Self
    where
        B: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::DriftDiffusionForward {
            b: Arc::new(b),
            sigma: Arc::new(sigma),
        }
    }

    pub fn fractional_laplacian<G>(alpha: f64, g: G) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!(
                "fractional Laplacian order must lie in (0, 2], got {alpha}"
            )));
        }
        Ok(Self::FractionalLaplacian {
            alpha,
            g: Arc::new(g),
        })
    }
}

/// Uniform periodic grid on [-l, l) with `m` nodes, `x_i = -l + 2 l i / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub l: f64,
    pub m: usize,
}

impl Grid1D {
    pub fn new(l: f64, m: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Domain(format!("half-width must be > 0, got {l}")));
        }
        if m < 4 {
            return Err(Error::Domain(format!("grid needs >= 4 nodes, got {m}")));
        }
        Ok(Self { l, m })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.m as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.l + self.dx() * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.node(i)).collect()
    }
}

/// A scalar field tabulated on a time grid times a space grid, row-major in
/// time: `values[n * x.len() + i] = u(t[n], x[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOnGrid {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

const BINARY_MAGIC: &[u8; 8] = b"SDGRID01";

impl FieldOnGrid {
    pub fn new(t: Vec<f64>, x: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t.is_empty() || x.is_empty() || values.len() != t.len() * x.len() {
            return Err(Error::Domain(format!(
                "field shape mismatch: {} x {} grid with {} values",
                t.len(),
                x.len(),
                values.len()
            )));
        }
        Ok(Self { t, x, values })
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[n * self.x.len()..(n + 1) * self.x.len()]
    }

    pub fn last_row(&self) -> &[f64] {
        self.row(self.t.len() - 1)
    }

    /// Rectangle-rule mass of a time slice on the periodic grid.
    pub fn mass(&self, n: usize) -> f64 {
        let dx = if self.x.len() > 1 {
            self.x[1] - self.x[0]
        } else {
            1.0
        };
        crate::numerics::compensated_total(self.row(n).iter().copied()) * dx
    }

    /// Densities must stay nonnegative up to scheme-level wiggle; returns the
    /// most negative value found, if any fall below `-tol`.
    pub fn negativity(&self, tol: f64) -> Option<f64> {
        let worst = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        (worst < -tol).then_some(worst)
    }

    /// CSV with header `t,x,value`, rows in time-major order. The default
    /// float formatting is shortest-roundtrip, so output is byte-stable.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,value")?;
        for (n, &t) in self.t.iter().enumerate() {
            for (i, &x) in self.x.iter().enumerate() {
                writeln!(w, "{t},{x},{}", self.values[n * self.x.len() + i])?;
            }
        }
        Ok(())
    }

    /// Binary layout: 8-byte magic, u64 time count, u64 space count, then the
    /// time axis, space axis, and values, all little-endian f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BINARY_MAGIC)?;
        w.write_all(&(self.t.len() as u64).to_le_bytes())?;
        w.write_all(&(self.x.len() as u64).to_le_bytes())?;
        for v in self.t.iter().chain(&self.x).chain(&self.values) {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected {:?}",
                magic, BINARY_MAGIC
            )));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let nt = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let nx = u64::from_le_bytes(b8) as usize;
        if nt == 0 || nx == 0 || nt.saturating_mul(nx) > (1 << 32) {
            return Err(Error::Format(format!("implausible dimensions {nt} x {nx}")));
        }
        let mut read_vec = |len: usize| -> Result<Vec<f64>> {
            let mut v = Vec::with_capacity(len);
            for _ in 0..len {
                r.read_exact(&mut b8)?;
                v.push(f64::from_le_bytes(b8));
            }
            Ok(v)
        };
        let t = read_vec(nt)?;
        let x = read_vec(nx)?;
        let values = read_vec(nt * nx)?;
        Self::new(t, x, values)
    }
}
