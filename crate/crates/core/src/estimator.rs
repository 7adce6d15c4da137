//! Monte Carlo projective measurements of the moment observable and a
//! linear method-of-moments estimator for `b1`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::moments::{error_propagation, slope, MomentObservable};
use crate::qfi::{precision_bounds, qfi_matrix_with};
use crate::spin::{Axis, SpaceOperators, TwoWellSpace};
use crate::states::{evolve, EvolutionParams, StateKind, StateVector};
use crate::tolerance;

pub const RNG_NAME: &str = "ChaCha8";

/// Eigen-decomposition of an observable with degenerate eigenvalues merged.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    outcomes: Vec<f64>,
    /// Eigenvector columns spanning each outcome's eigenspace.
    projectors: Vec<CMatrix>,
}

impl MeasurementModel {
    pub fn new(observable: &CMatrix) -> Self {
        let (values, vectors) = hermitian_eigen(observable);
        let mut outcomes: Vec<f64> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in values.iter().enumerate() {
            match outcomes.last() {
                Some(&last) if (last - v).abs() <= tolerance::EIGEN_MERGE => groups.last_mut().unwrap().push(k),
                _ => {
                    outcomes.push(v);
                    groups.push(vec![k]);
                }
            }
        }
        let projectors = groups.iter().map(|g| CMatrix::from_columns(&g.iter().map(|&k| vectors.column(k)).collect::<Vec<_>>())).collect();
        Self { outcomes, projectors }
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn degeneracies(&self) -> Vec<usize> {
        self.projectors.iter().map(|p| p.ncols()).collect()
    }

    /// Born probabilities of each distinct outcome.
    pub fn distribution(&self, state: &StateVector) -> Result<Vec<f64>> {
        if self.projectors.first().is_some_and(|p| p.nrows() != state.space().dim()) {
            return Err(Error::DimensionMismatch { expected: self.projectors[0].nrows(), got: state.space().dim() });
        }
        let probs: Vec<f64> = self.projectors.iter().map(|p| (p.adjoint() * state.amplitudes()).norm_squared()).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tolerance::IDENTITY {
            return Err(Error::InvalidParameter(format!("outcome probabilities sum to {total}")));
        }
        Ok(probs)
    }
}

/// Independent generator for run `run` of a seeded experiment.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// `nu` i.i.d. outcomes drawn from the Born distribution.
pub fn sample_outcomes(state: &StateVector, model: &MeasurementModel, nu: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let probs = model.distribution(state)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((0..nu).map(|_| model.outcomes[dist.sample(rng)]).collect())
}

/// `mean(outcomes) / slope`, valid for small `b1`.
pub fn estimate_b1(outcomes: &[f64], slope: f64) -> Result<f64> {
    if slope.abs() < tolerance::MIN_SLOPE {
        return Err(Error::ZeroSlope(slope));
    }
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter("no outcomes".into()));
    }
    Ok(mean(outcomes) / slope)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationConfig {
    pub na: u32,
    pub nb: u32,
    pub state: StateKind,
    pub b0: f64,
    pub b1: f64,
    pub nu: usize,
    pub batches: usize,
    pub seed: u64,
}

impl EstimationConfig {
    pub fn new(na: u32, nb: u32, b0: f64, b1: f64, nu: usize, seed: u64) -> Self {
        Self { na, nb, state: StateKind::FlippedDicke, b0, b1, nu, batches: 1000, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.batches < 2 || self.nu < 2 * self.batches {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 batches of 2 shots, got nu={} batches={}",
                self.nu, self.batches
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationRun {
    pub config: EstimationConfig,
    /// `d<M>/db1` at `b1 = 0` used for the inversion.
    pub slope: f64,
    /// One estimate of `b1` per batch.
    pub estimates: Vec<f64>,
    pub outcome_variance: f64,
    pub epf_prediction: f64,
    pub cr_bound: f64,
}

impl EstimationRun {
    pub fn batch_size(&self) -> usize {
        self.config.nu / self.config.batches
    }

    pub fn estimate_mean(&self) -> f64 {
        mean(&self.estimates)
    }

    /// Standard error of [`Self::estimate_mean`].
    pub fn estimate_std_error(&self) -> f64 {
        (sample_variance(&self.estimates) / self.estimates.len() as f64).sqrt()
    }

    /// Per-shot inverse variance of the `b1` estimator.
    pub fn empirical_precision(&self) -> f64 {
        1.0 / (self.batch_size() as f64 * sample_variance(&self.estimates))
    }

    /// Standard error of [`Self::empirical_precision`] from the batch count.
    pub fn precision_std_error(&self) -> f64 {
        self.empirical_precision() * (2.0 / (self.estimates.len() as f64 - 1.0)).sqrt()
    }

    pub fn report(&self) -> RunReport {
        RunReport {
            na: self.config.na,
            nb: self.config.nb,
            b0: self.config.b0,
            b1: self.config.b1,
            nu: self.config.nu,
            seed: self.config.seed,
            rng: RNG_NAME,
            estimate_mean: self.estimate_mean(),
            empirical_inv_var: self.empirical_precision(),
            epf_prediction: self.epf_prediction,
            cr_bound: self.cr_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub na: u32,
    pub nb: u32,
    pub b0: f64,
    pub b1: f64,
    pub nu: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub estimate_mean: f64,
    pub empirical_inv_var: f64,
    pub epf_prediction: f64,
    pub cr_bound: f64,
}

/// Simulates `nu` measurements of `M` on the evolved state, split into batches.
pub fn run_estimation(config: &EstimationConfig, run: u64) -> Result<EstimationRun> {
    config.validate()?;
    let space = TwoWellSpace::new(config.na, config.nb)?;
    let ops = SpaceOperators::new(space);
    let psi = config.state.prepare(space)?;
    let m = MomentObservable::with_operators(&ops);
    let g = ops.minus(Axis::Y);
    let s = slope(&psi, m.matrix(), &g);
    let epf_prediction = error_propagation(&psi, m.matrix(), &g)?;
    let cr_bound = precision_bounds(&qfi_matrix_with(&psi, &ops, Axis::Y))?.bound_b1;

    let evolved = evolve(&psi, EvolutionParams::new(config.b0, config.b1, Axis::Y)?);
    let model = MeasurementModel::new(m.matrix());
    let mut rng = run_rng(config.seed, run);
    let outcomes = sample_outcomes(&evolved, &model, config.nu, &mut rng)?;
    let size = config.nu / config.batches;
    let estimates = outcomes[..size * config.batches]
        .chunks(size)
        .map(|c| estimate_b1(c, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimationRun {
        config: config.clone(),
        slope: s,
        estimates,
        outcome_variance: sample_variance(&outcomes),
        epf_prediction,
        cr_bound,
    })
}
