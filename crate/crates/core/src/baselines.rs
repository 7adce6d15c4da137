//! Comparison baselines: gradiometry with a single BEC and the
//! three-variance entanglement criterion.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{apply_pauli, Amplitudes, Pauli};
use crate::spin::{Axis, SpaceOperators};
use crate::states::StateVector;
use crate::tolerance;

/// Position statistics of a BEC whose particles share one spatial state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BecModel {
    pub n: u32,
    pub mu: f64,
    pub sigma2: f64,
    pub d: f64,
}

impl BecModel {
    pub fn new(n: u32, mu: f64, sigma2: f64, d: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("BEC needs at least one particle".into()));
        }
        if sigma2.is_nan() || sigma2 < 0.0 || !mu.is_finite() || d.is_nan() || d <= 0.0 {
            return Err(Error::InvalidParameter(format!("invalid BEC model mu={mu}, sigma2={sigma2}, d={d}")));
        }
        Ok(Self { n, mu, sigma2, d })
    }

    /// The BEC with the same first and second position moments as `Na`
    /// particles at `-d` and `Nb` particles at `+d`.
    pub fn double_well(na: u32, nb: u32, d: f64) -> Result<Self> {
        if na == 0 || nb == 0 {
            return Err(Error::EmptyWell { na, nb });
        }
        let n = (na + nb) as f64;
        let mu = d * (nb as f64 - na as f64) / n;
        Self::new(na + nb, mu, d * d * 4.0 * (na * nb) as f64 / (n * n), d)
    }
}

/// `sigma^2 N` in units of `d^2`; for the double-well model this is `4 Na Nb / N`.
pub fn bec_gradient_bound(model: &BecModel) -> f64 {
    model.sigma2 * model.n as f64 / (model.d * model.d)
}

/// QFI matrix entries of the BEC generators `J_l` and `sum_n x_n j_{l,n}`,
/// computed numerically and from the moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BecQfiCheck {
    pub mu: f64,
    pub sigma2: f64,
    pub f01: f64,
    pub f11: f64,
    /// `4 mu Var(J_l)`.
    pub f01_formula: f64,
    /// `4 sigma^2 sum_n <j_{l,n}^2> + 4 mu^2 Var(J_l)`.
    pub f11_formula: f64,
}

impl BecQfiCheck {
    pub fn max_deviation(&self) -> f64 {
        (self.f01 - self.f01_formula).abs().max((self.f11 - self.f11_formula).abs())
    }
}

/// Builds `|psi>^{(x) N} (x) |spin>` with each particle's position a qubit
/// (`|0>` at `-d`, `|1>` at `+d`) and evaluates the two generator QFIs along
/// `axis` for a pure spin state of `N` spin-1/2 particles.
///
/// The register holds the `N` position qubits first, then the `N` spins.
pub fn bec_qfi_offdiagonal(n: u32, d: f64, weight_right: f64, spin: &Amplitudes, axis: Axis) -> Result<BecQfiCheck> {
    if n == 0 || n > 5 {
        return Err(Error::Domain(format!("two-point BEC check limited to 1 <= N <= 5, got {n}")));
    }
    if !(0.0..=1.0).contains(&weight_right) {
        return Err(Error::InvalidParameter(format!("weight must lie in [0, 1], got {weight_right}")));
    }
    if spin.len() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: spin.len() });
    }
    let total = 2 * n;
    let (l, r) = ((1.0 - weight_right).sqrt(), weight_right.sqrt());
    let mut pos = Amplitudes::from_element(1, Complex64::new(1.0, 0.0));
    for _ in 0..n {
        pos = pos.kronecker(&Amplitudes::from_vec(vec![Complex64::new(l, 0.0), Complex64::new(r, 0.0)]));
    }
    let psi = pos.kronecker(&(spin / Complex64::new(spin.norm(), 0.0)));
    let p = match axis {
        Axis::X => Pauli::X,
        Axis::Y => Pauli::Y,
        Axis::Z => Pauli::Z,
    };
    let half = Complex64::new(0.5, 0.0);
    let mut g0 = Amplitudes::from_element(psi.len(), Complex64::new(0.0, 0.0));
    let mut g1 = g0.clone();
    let mut local_sq = 0.0;
    for k in 0..n {
        let sj = apply_pauli(&psi, total, n + k, p) * half;
        // x_n = -d sigma_z on the position qubit
        let xsj = apply_pauli(&sj, total, k, Pauli::Z) * Complex64::new(-d, 0.0);
        local_sq += sj.norm_squared();
        g0 += sj;
        g1 += xsj;
    }
    let m0 = psi.dotc(&g0).re;
    let m1 = psi.dotc(&g1).re;
    let var0 = g0.norm_squared() - m0 * m0;
    let f01 = 4.0 * (g0.dotc(&g1).re - m0 * m1);
    let f11 = 4.0 * (g1.norm_squared() - m1 * m1);
    let mu = d * (weight_right - (1.0 - weight_right));
    let sigma2 = d * d - mu * mu;
    Ok(BecQfiCheck {
        mu,
        sigma2,
        f01,
        f11,
        f01_formula: 4.0 * mu * var0,
        f11_formula: 4.0 * sigma2 * local_sq + 4.0 * mu * mu * var0,
    })
}

/// Haar-random pure state of `n` qubits.
pub fn random_qubit_state<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Amplitudes {
    let v = Amplitudes::from_iterator(
        1 << n,
        (0..1usize << n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))),
    );
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub variance_sum: f64,
    pub bound: f64,
    pub violated: bool,
    pub saturated: bool,
}

/// `sum_l Var(J_{l,a} + s_l J_{l,b})` against `Na/2 + Nb/2`.
pub fn three_variance_witness(state: &StateVector, signs: [i8; 3]) -> Result<WitnessReport> {
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidParameter(format!("signs must be +1 or -1, got {signs:?}")));
    }
    let ops = SpaceOperators::new(state.space());
    let variance_sum: f64 = Axis::ALL.iter().map(|&l| state.variance(&ops.signed(l, signs[l.index()]))).sum();
    let bound = state.space().total() as f64 / 2.0;
    Ok(WitnessReport {
        variance_sum,
        bound,
        violated: variance_sum < bound - tolerance::WITNESS,
        saturated: (variance_sum - bound).abs() <= tolerance::WITNESS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{bec_gradient_bound as closed_bec, flipped_dicke_bound_b1, to_f64};
    use crate::oracle::brute_dicke;
    use crate::spin::TwoWellSpace;
    use crate::states::{dicke_state, flipped_dicke_state, flipped_ghz_state, product_dicke_state, random_product_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(na: u32, nb: u32) -> TwoWellSpace {
        TwoWellSpace::new(na, nb).unwrap()
    }

    #[test]
    fn double_well_bec_bounds() {
        let even = BecModel::double_well(4, 4, 1.0).unwrap();
        assert_eq!(even.mu, 0.0);
        assert!((bec_gradient_bound(&even) - 8.0).abs() < 1e-12);
        let uneven = BecModel::double_well(2, 6, 0.5).unwrap();
        assert!((uneven.sigma2 - 0.25 * 4.0 * 12.0 / 64.0).abs() < 1e-15);
        assert!((bec_gradient_bound(&uneven) - 6.0).abs() < 1e-12);
        assert_eq!(to_f64(closed_bec(2, 6).unwrap()), 6.0);
        for n in [4u32, 8, 12] {
            let ratio = to_f64(flipped_dicke_bound_b1(n / 2, n / 2).unwrap()) / to_f64(closed_bec(n / 2, n / 2).unwrap());
            assert!((ratio - (n as f64 + 2.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bec_model_validation() {
        assert!(BecModel::new(0, 0.0, 1.0, 1.0).is_err());
        assert!(BecModel::new(3, 0.0, -1.0, 1.0).is_err());
        assert!(BecModel::double_well(0, 3, 1.0).is_err());
    }

    #[test]
    fn centered_bec_has_no_offdiagonal_qfi() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=4 {
            let spin = random_qubit_state(n, &mut rng);
            for axis in Axis::ALL {
                let r = bec_qfi_offdiagonal(n, 1.3, 0.5, &spin, axis).unwrap();
                assert!(r.f01.abs() < 1e-10);
                assert!(r.max_deviation() < 1e-10);
                // sum_n <j_{l,n}^2> = N/4 for spin-1/2
                assert!((r.f11 - r.sigma2 * n as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shifted_bec_matches_moment_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let dicke = brute_dicke(4, 2).unwrap();
        for w in [0.1, 0.3, 0.8] {
            let r = bec_qfi_offdiagonal(4, 0.7, w, &dicke, Axis::X).unwrap();
            assert!(r.mu != 0.0 && r.f01.abs() > 1e-3);
            assert!(r.max_deviation() < 1e-10);
            let s = random_qubit_state(3, &mut rng);
            assert!(bec_qfi_offdiagonal(3, 0.7, w, &s, Axis::Z).unwrap().max_deviation() < 1e-10);
        }
    }

    #[test]
    fn witness_values() {
        let fd = three_variance_witness(&flipped_dicke_state(sp(4, 4)).unwrap(), [1, 1, 1]).unwrap();
        assert!((fd.variance_sum - 12.0 / 7.0).abs() < 1e-10);
        assert!(fd.violated && !fd.saturated && fd.bound == 4.0);
        let d = three_variance_witness(&dicke_state(sp(4, 4)).unwrap(), [-1, -1, 1]).unwrap();
        assert!(d.violated);
        let fg = three_variance_witness(&flipped_ghz_state(sp(4, 4)), [1, 1, 1]).unwrap();
        assert!(fg.saturated && !fg.violated);
        assert!(three_variance_witness(&flipped_ghz_state(sp(2, 2)), [2, 1, 1]).is_err());
    }

    #[test]
    fn witness_approaches_quarter_n() {
        let mut prev = f64::INFINITY;
        for n in [8u32, 16, 24] {
            let r = three_variance_witness(&flipped_dicke_state(sp(n / 2, n / 2)).unwrap(), [1, 1, 1]).unwrap();
            let rel = (r.variance_sum - n as f64 / 4.0).abs() / (n as f64 / 4.0);
            assert!((rel - 1.0 / (n as f64 - 1.0)).abs() < 1e-10);
            assert!(rel < prev);
            if n >= 16 {
                assert!(rel < 0.1);
            }
            prev = rel;
        }
    }

    #[test]
    fn product_states_never_violate() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (na, nb) in [(2, 2), (2, 4), (3, 5)] {
            for _ in 0..20 {
                let r = three_variance_witness(&random_product_state(sp(na, nb), &mut rng), [1, 1, 1]).unwrap();
                assert!(!r.violated);
            }
        }
        let r = three_variance_witness(&product_dicke_state(sp(4, 4)).unwrap(), [1, 1, 1]).unwrap();
        assert!(!r.violated);
    }
}
