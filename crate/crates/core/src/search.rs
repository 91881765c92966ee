//! Numerical search for Weyl–Heisenberg covariant SIC fiducials.
//!
//! The objective is the squared deviation of the overlaps from the SIC value,
//!
//! ```text
//! R(ψ) = Σ_{(i,j)≠(0,0)} ( |⟨ψ|D_{i,j}|ψ⟩|² − 1/(d+1) )²
//! ```
//!
//! minimised by projected gradient descent on the unit sphere with
//! backtracking, from seeded random restarts.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::Matrix;
use crate::scalar::Real;
use crate::weyl::WeylScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("zero vector cannot be normalised")]
    ZeroVector,
    #[error("invalid search config: {0}")]
    Config(&'static str),
    #[error("residual {residual:e} exceeds tolerance {tolerance:e}; phases are meaningless")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
}

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericFiducial<F> {
    amplitudes: Vec<Complex<F>>,
}

impl<F: Real> NumericFiducial<F> {
    /// Normalises `amplitudes`.
    pub fn new(amplitudes: Vec<Complex<F>>) -> Result<Self, SearchError> {
        if amplitudes.len() < 2 {
            return Err(SearchError::Dimension(amplitudes.len()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).fold(F::zero(), |a, b| a + b).sqrt();
        if norm == F::zero() || !norm.is_finite() {
            return Err(SearchError::ZeroVector);
        }
        Ok(NumericFiducial { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<F>] {
        &self.amplitudes
    }

    /// Complex-normal entries, normalised: uniform on the unit sphere.
    pub fn random(d: usize, rng: &mut impl rand::Rng) -> Result<Self, SearchError> {
        let mut sample = || F::from(<StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)).unwrap();
        let amps = (0..d).map(|_| Complex::new(sample(), sample())).collect();
        Self::new(amps)
    }
}

/// Phase tables `ω^k` (k < d) and `τ^k` (k < 2d) for one dimension.
#[derive(Debug, Clone)]
pub struct WeylPhases<F> {
    d: usize,
    omega: Vec<Complex<F>>,
    tau: Vec<Complex<F>>,
}

impl<F: Real> WeylPhases<F> {
    pub fn new(d: usize) -> Result<Self, SearchError> {
        if d < 2 {
            return Err(SearchError::Dimension(d));
        }
        let omega = (0..d).map(|k| Complex::<F>::omega_power(d, k).unwrap()).collect();
        let tau = (0..2 * d).map(|k| Complex::<F>::tau_power(d, k).unwrap()).collect();
        Ok(WeylPhases { d, omega, tau })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn tau_ij(&self, i: usize, j: usize) -> Complex<F> {
        self.tau[(i * j) % (2 * self.d)]
    }

    /// `⟨ψ|D_{i,j}|ψ⟩` in O(d).
    pub fn expectation(&self, psi: &[Complex<F>], i: usize, j: usize) -> Complex<F> {
        let d = self.d;
        let mut acc = Complex::new(F::zero(), F::zero());
        for k in 0..d {
            acc = acc + psi[(k + i) % d].conj() * self.omega[(j * k) % d] * psi[k];
        }
        acc * self.tau_ij(i, j)
    }

    /// `D_{i,j}|ψ⟩`.
    pub fn apply(&self, psi: &[Complex<F>], i: usize, j: usize) -> Vec<Complex<F>> {
        let d = self.d;
        let t = self.tau_ij(i, j);
        let mut out = vec![Complex::new(F::zero(), F::zero()); d];
        for k in 0..d {
            out[(k + i) % d] = t * self.omega[(j * k) % d] * psi[k];
        }
        out
    }

    /// `D†_{i,j}|ψ⟩`.
    pub fn apply_adjoint(&self, psi: &[Complex<F>], i: usize, j: usize) -> Vec<Complex<F>> {
        let d = self.d;
        let t = self.tau_ij(i, j).conj();
        (0..d).map(|k| t * self.omega[(j * k) % d].conj() * psi[(k + i) % d]).collect()
    }

    fn nontrivial(&self) -> impl Iterator<Item = (usize, usize)> {
        let d = self.d;
        (0..d).flat_map(move |i| (0..d).map(move |j| (i, j))).filter(|&p| p != (0, 0))
    }

    /// `R(ψ)` for any (not necessarily normalised) vector.
    pub fn residual(&self, psi: &[Complex<F>]) -> F {
        let target = F::one() / F::from(self.d + 1).unwrap();
        self.nontrivial()
            .map(|(i, j)| {
                let dev = self.expectation(psi, i, j).norm_sqr() - target;
                dev * dev
            })
            .fold(F::zero(), |a, b| a + b)
    }

    /// Gradient of [`residual`](Self::residual) with respect to the real
    /// coordinates, packed as a complex vector `∂/∂Re ψ + i ∂/∂Im ψ`.
    pub fn gradient_complex(&self, psi: &[Complex<F>]) -> Vec<Complex<F>> {
        let d = self.d;
        let target = F::one() / F::from(d + 1).unwrap();
        let four = F::from(4).unwrap();
        let mut g = vec![Complex::new(F::zero(), F::zero()); d];
        for (i, j) in self.nontrivial() {
            let a = self.expectation(psi, i, j);
            let w = four * (a.norm_sqr() - target);
            let dpsi = self.apply(psi, i, j);
            let dadj = self.apply_adjoint(psi, i, j);
            for k in 0..d {
                g[k] = g[k] + (a.conj() * dpsi[k] + a * dadj[k]) * w;
            }
        }
        g
    }

    /// `Σ_{all (i,j)} |⟨ψ|D_{i,j}|ψ⟩|⁴`; equals `2d/(d+1)` at a SIC fiducial.
    pub fn fourth_moment(&self, psi: &[Complex<F>]) -> F {
        let d = self.d;
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| {
                let n = self.expectation(psi, i, j).norm_sqr();
                n * n
            })
            .fold(F::zero(), |a, b| a + b)
    }
}

/// Residual of a fiducial.
pub fn sic_residual<F: Real>(psi: &NumericFiducial<F>) -> F {
    WeylPhases::new(psi.dim()).unwrap().residual(psi.amplitudes())
}

/// Real gradient of the residual: `[∂R/∂Re ψ_0, …, ∂R/∂Re ψ_{d−1}, ∂R/∂Im ψ_0, …]`.
pub fn residual_gradient<F: Real>(psi: &NumericFiducial<F>) -> Vec<F> {
    let g = WeylPhases::new(psi.dim()).unwrap().gradient_complex(psi.amplitudes());
    g.iter().map(|z| z.re).chain(g.iter().map(|z| z.im)).collect()
}

/// Removes the component of `g` along `ψ` (real inner product on `R^{2d}`).
pub fn project_tangent<F: Real>(psi: &[Complex<F>], g: &[Complex<F>]) -> Vec<Complex<F>> {
    let radial = psi.iter().zip(g).fold(F::zero(), |acc, (p, q)| acc + p.re * q.re + p.im * q.im);
    g.iter().zip(psi).map(|(q, p)| q - p * radial).collect()
}

pub fn fourth_moment<F: Real>(psi: &NumericFiducial<F>) -> F {
    WeylPhases::new(psi.dim()).unwrap().fourth_moment(psi.amplitudes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub dimension: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub initial_step: f64,
    pub shrink: f64,
}

impl SearchConfig {
    pub fn new(dimension: usize) -> Self {
        SearchConfig {
            dimension,
            restarts: 8,
            max_iterations: 20_000,
            tolerance: 1e-10,
            seed: 0,
            initial_step: 1.0,
            shrink: 0.5,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.dimension < 2 {
            return Err(SearchError::Dimension(self.dimension));
        }
        if self.restarts == 0 {
            return Err(SearchError::Config("restarts must be at least 1"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(SearchError::Config("tolerance must be positive"));
        }
        if self.initial_step.is_nan() || self.initial_step <= 0.0 {
            return Err(SearchError::Config("initial step must be positive"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(SearchError::Config("shrink factor must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartTrace<F> {
    pub restart: usize,
    pub initial_residual: F,
    pub residual: F,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<F> {
    pub best: NumericFiducial<F>,
    pub residual: F,
    pub iterations: usize,
    pub converged: bool,
    /// Restart that produced `best`.
    pub restart: usize,
    pub traces: Vec<RestartTrace<F>>,
}

/// Armijo sufficient-decrease constant.
const ARMIJO: f64 = 1e-4;
/// Backtracking gives up below this step.
const MIN_STEP: f64 = 1e-30;

fn descend<F: Real>(
    phases: &WeylPhases<F>,
    start: NumericFiducial<F>,
    config: &SearchConfig,
    restart: usize,
) -> (NumericFiducial<F>, RestartTrace<F>) {
    let tol = F::from(config.tolerance).unwrap();
    let shrink = F::from(config.shrink).unwrap();
    let max_step = F::from(config.initial_step).unwrap();
    let armijo = F::from(ARMIJO).unwrap();
    let min_step = F::from(MIN_STEP).unwrap();

    let mut psi = start;
    let mut value = phases.residual(psi.amplitudes());
    let initial_residual = value;
    let mut step = max_step;
    let mut iterations = 0;
    while value >= tol && iterations < config.max_iterations {
        let g = project_tangent(psi.amplitudes(), &phases.gradient_complex(psi.amplitudes()));
        let gnorm2 = g.iter().map(|z| z.norm_sqr()).fold(F::zero(), |a, b| a + b);
        if gnorm2 == F::zero() {
            break;
        }
        iterations += 1;
        // Try a slightly longer step than last time, then backtrack.
        step = (step / shrink).min(max_step);
        let mut accepted = false;
        while step > min_step {
            let trial: Vec<Complex<F>> =
                psi.amplitudes().iter().zip(&g).map(|(p, q)| p - q * step).collect();
            if let Ok(cand) = NumericFiducial::new(trial) {
                let v = phases.residual(cand.amplitudes());
                if v <= value - armijo * step * gnorm2 {
                    psi = cand;
                    value = v;
                    accepted = true;
                    break;
                }
            }
            step = step * shrink;
        }
        if !accepted {
            break;
        }
    }
    let trace = RestartTrace {
        restart,
        initial_residual,
        residual: value,
        iterations,
        converged: value < tol,
    };
    (psi, trace)
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Projected gradient descent from `config.restarts` seeded random starts.
///
/// Restarts run in parallel; each owns the stream `(seed, restart)`, and the
/// best residual wins with ties going to the lowest restart index, so the
/// result depends only on the config.
pub fn search<F: Real>(config: &SearchConfig) -> Result<SearchResult<F>, SearchError> {
    config.validate()?;
    let phases = WeylPhases::<F>::new(config.dimension)?;
    let runs: Vec<(NumericFiducial<F>, RestartTrace<F>)> = (0..config.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = restart_rng(config.seed, k);
            let start = NumericFiducial::random(config.dimension, &mut rng)
                .expect("a Gaussian sample is nonzero with probability one");
            descend(&phases, start, config, k)
        })
        .collect();
    Ok(merge(runs))
}

/// Descent from a given starting vector (a single restart, index 0).
pub fn search_from<F: Real>(
    config: &SearchConfig,
    start: NumericFiducial<F>,
) -> Result<SearchResult<F>, SearchError> {
    config.validate()?;
    if start.dim() != config.dimension {
        return Err(SearchError::Config("start vector dimension differs from config"));
    }
    let phases = WeylPhases::<F>::new(config.dimension)?;
    Ok(merge(vec![descend(&phases, start, config, 0)]))
}

fn merge<F: Real>(runs: Vec<(NumericFiducial<F>, RestartTrace<F>)>) -> SearchResult<F> {
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (k, (_, t))| if t.residual < runs[b].1.residual { k } else { b });
    let traces: Vec<RestartTrace<F>> = runs.iter().map(|(_, t)| t.clone()).collect();
    let (psi, trace) = runs.into_iter().nth(best).unwrap();
    SearchResult {
        best: psi,
        residual: trace.residual,
        iterations: trace.iterations,
        converged: trace.converged,
        restart: trace.restart,
        traces,
    }
}

/// `√(d+1)·⟨ψ|D_{i,j}|ψ⟩` for `(i,j) ≠ (0,0)`, with `1` at `(0,0)`.
pub fn extract_phases<F: Real>(
    psi: &NumericFiducial<F>,
    tolerance: f64,
) -> Result<Matrix<Complex<F>>, SearchError> {
    let d = psi.dim();
    let phases = WeylPhases::<F>::new(d)?;
    let residual = phases.residual(psi.amplitudes());
    if residual.to_f64().unwrap() >= tolerance {
        return Err(SearchError::ResidualTooLarge {
            residual: residual.to_f64().unwrap(),
            tolerance,
        });
    }
    let scale = F::from(d + 1).unwrap().sqrt();
    Ok(Matrix::from_fn(d, d, |i, j| {
        if (i, j) == (0, 0) {
            Complex::new(F::one(), F::zero())
        } else {
            phases.expectation(psi.amplitudes(), i, j) * scale
        }
    }))
}
