//! Second-moment measurement `M = J_{z,a} J_{x,b} - J_{x,a} J_{z,b}`.

use std::io::Write;

use serde::Serialize;

use crate::closed_form::{self, flipped_dicke_bound_b1, moment_epf, moment_precision_ratio, noisy_precision_ratio, to_f64};
use crate::error::{Error, Result};
use crate::linalg::{commutator, CMatrix, I};
use crate::spin::{Axis, SpaceOperators, TwoWellSpace};
use crate::states::StateVector;
use crate::tolerance;

#[derive(Debug, Clone)]
pub struct MomentObservable {
    space: TwoWellSpace,
    matrix: CMatrix,
}

impl MomentObservable {
    pub fn new(space: TwoWellSpace) -> Self {
        Self::with_operators(&SpaceOperators::new(space))
    }

    pub fn with_operators(ops: &SpaceOperators) -> Self {
        let matrix = ops.a(Axis::Z) * ops.b(Axis::X) - ops.a(Axis::X) * ops.b(Axis::Z);
        Self { space: ops.space, matrix }
    }

    pub fn space(&self) -> TwoWellSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `||[J_{y,a} + J_{y,b}, M]||_F`.
    pub fn commutation_residual(&self, ops: &SpaceOperators) -> f64 {
        commutator(&ops.plus(Axis::Y), &self.matrix).norm()
    }
}

/// Imbalance fluctuations `(Na - Nb)^2 -> alpha N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionNoiseModel {
    alpha: f64,
}

impl PartitionNoiseModel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be non-negative, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ratio(&self, n: f64) -> Result<f64> {
        noisy_precision_ratio(n, self.alpha)
    }

    pub fn limit(&self) -> f64 {
        closed_form::noisy_precision_ratio_limit(self.alpha)
    }
}

/// `i <[G, M]>`, the derivative of `<M>` under `exp(-i theta G)`.
pub fn slope(state: &StateVector, observable: &CMatrix, generator: &CMatrix) -> f64 {
    (I * state.expect(&commutator(generator, observable))).re
}

/// `|i <[G, M]>|^2 / Var(M)`.
pub fn error_propagation(state: &StateVector, observable: &CMatrix, generator: &CMatrix) -> Result<f64> {
    let var = state.variance(observable);
    if var < tolerance::MIN_VARIANCE {
        return Err(Error::InsensitiveObservable(var));
    }
    let s = slope(state, observable, generator);
    Ok(s * s / var)
}

/// Exact moments of the flipped Dicke state.
pub fn moment_closed_forms(na: u32, nb: u32) -> Result<closed_form::FlippedDickeMoments> {
    closed_form::flipped_dicke_moments(na, nb)
}

/// The same moments evaluated on a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericMoments {
    pub jz_r2: f64,
    pub jza_jzb: f64,
    pub jl_a2: f64,
    pub jl_b2: f64,
    pub jla_jlb: f64,
    pub total_spin2: f64,
    pub jza2_jzb2: f64,
    pub jla2_jzb2: f64,
    pub jza2_jlb2: f64,
    pub twice_zxxz: f64,
    pub m_mean: f64,
    pub m_second: f64,
    pub slope: f64,
    pub epf: f64,
}

impl NumericMoments {
    pub fn evaluate(state: &StateVector, ops: &SpaceOperators) -> Self {
        let (za, zb) = (ops.a(Axis::Z), ops.b(Axis::Z));
        let (xa, xb) = (ops.a(Axis::X), ops.b(Axis::X));
        let e = |m: &CMatrix| state.mean(m);
        let m = MomentObservable::with_operators(ops);
        let g = ops.minus(Axis::Y);
        let s = slope(state, m.matrix(), &g);
        let m_second = e(&(m.matrix() * m.matrix()));
        let m_mean = e(m.matrix());
        let total: CMatrix = Axis::ALL.iter().map(|&l| ops.plus(l)).map(|j| &j * &j).fold(
            CMatrix::zeros(ops.space.dim(), ops.space.dim()),
            |acc, j2| acc + j2,
        );
        Self {
            jz_r2: e(&(za * za)),
            jza_jzb: e(&(za * zb)),
            jl_a2: e(&(xa * xa)),
            jl_b2: e(&(xb * xb)),
            jla_jlb: e(&(xa * xb)),
            total_spin2: e(&total),
            jza2_jzb2: e(&(za * za * zb * zb)),
            jla2_jzb2: e(&(xa * xa * zb * zb)),
            jza2_jlb2: e(&(za * za * xb * xb)),
            twice_zxxz: 2.0 * e(&(za * xa * xb * zb)),
            m_mean,
            m_second,
            slope: s,
            epf: s * s / (m_second - m_mean * m_mean),
        }
    }

    /// Largest absolute difference from the closed forms; the slope is compared in magnitude.
    pub fn max_deviation(&self, exact: &closed_form::FlippedDickeMoments) -> f64 {
        let pairs = [
            (self.jz_r2, exact.jz_r2),
            (self.jza_jzb, exact.jza_jzb),
            (self.jl_a2, exact.jl_a2),
            (self.jl_b2, exact.jl_b2),
            (self.jla_jlb, exact.jla_jlb),
            (self.total_spin2, exact.total_spin2),
            (self.jza2_jzb2, exact.jza2_jzb2),
            (self.jla2_jzb2, exact.jla2_jzb2),
            (self.jza2_jlb2, exact.jza2_jlb2),
            (self.twice_zxxz, exact.twice_zxxz),
            (self.m_mean, exact.m_mean),
            (self.m_second, exact.m_second),
            (self.slope.abs(), exact.slope_magnitude),
            (self.epf, exact.epf),
        ];
        pairs.iter().map(|&(x, q)| (x - to_f64(q)).abs()).fold(0.0, f64::max)
    }
}

pub fn precision_ratio(na: u32, nb: u32) -> Result<f64> {
    moment_precision_ratio(na, nb).map(to_f64)
}

pub fn noisy_ratio(n: f64, alpha: f64) -> Result<f64> {
    PartitionNoiseModel::new(alpha)?.ratio(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub na: u32,
    pub nb: u32,
    pub epf: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// Closed-form `epf`, optimal bound and their ratio for each pair.
pub fn sweep(pairs: &[(u32, u32)]) -> Result<Vec<SweepRow>> {
    pairs
        .iter()
        .map(|&(na, nb)| {
            Ok(SweepRow {
                na,
                nb,
                epf: to_f64(moment_epf(na, nb)?),
                bound: to_f64(flipped_dicke_bound_b1(na, nb)?),
                ratio: precision_ratio(na, nb)?,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Export(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Export(e.to_string()))
}
