//! Dicke, GHZ and partially flipped states on the two-well space.

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::closed_form::binomial;
use crate::error::{Error, Result};
use crate::linalg::{c, unitary_exp, CMatrix, CVector};
use crate::spin::{Axis, SpaceOperators, TwoWellSpace};
use crate::tolerance;

/// A normalized pure state on a [`TwoWellSpace`].
#[derive(Debug, Clone)]
pub struct StateVector {
    space: TwoWellSpace,
    amplitudes: CVector,
}

impl StateVector {
    /// Normalizes `amplitudes`; fails on a zero vector or a length mismatch.
    pub fn new(space: TwoWellSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero norm".into()));
        }
        Ok(Self { space, amplitudes: amplitudes / c(norm) })
    }

    pub fn space(&self) -> TwoWellSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// `<psi|A|psi>`.
    pub fn expect(&self, op: &CMatrix) -> Complex64 {
        self.amplitudes.dotc(&(op * &self.amplitudes))
    }

    /// Real part of `<psi|A|psi>`; meaningful for Hermitian `A`.
    pub fn mean(&self, op: &CMatrix) -> f64 {
        self.expect(op).re
    }

    pub fn variance(&self, op: &CMatrix) -> f64 {
        let v = op * &self.amplitudes;
        let mean = self.amplitudes.dotc(&v).re;
        v.norm_squared() - mean * mean
    }

    /// Symmetrized covariance `<{A,B}>/2 - <A><B>` for Hermitian `A`, `B`.
    pub fn covariance(&self, a: &CMatrix, b: &CMatrix) -> f64 {
        let va = a * &self.amplitudes;
        let vb = b * &self.amplitudes;
        let ma = self.amplitudes.dotc(&va).re;
        let mb = self.amplitudes.dotc(&vb).re;
        va.dotc(&vb).re - ma * mb
    }

    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Equality up to a global phase.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.space == other.space && (1.0 - self.overlap(other).norm()).abs() < tol
    }

    pub fn apply(&self, unitary: &CMatrix) -> StateVector {
        StateVector { space: self.space, amplitudes: unitary * &self.amplitudes }
    }

    pub fn is_normalized(&self) -> bool {
        (self.amplitudes.norm() - 1.0).abs() < tolerance::NORM
    }
}

/// Schmidt coefficients of `|N/2, 0>` across the `a|b` cut.
#[derive(Debug, Clone)]
pub struct DickeCoefficients {
    /// Particle count of the smaller well.
    pub n_small: u32,
    /// Particle count of the larger well.
    pub n_large: u32,
    /// `2m` for each coefficient, from `-n_small` up to `n_small` in steps of 2.
    pub two_m: Vec<i64>,
    pub values: Vec<f64>,
    /// Exact `c_m^2`.
    pub squared: Vec<Ratio<i128>>,
}

impl DickeCoefficients {
    pub fn m(&self) -> impl Iterator<Item = f64> + '_ {
        self.two_m.iter().map(|&t| t as f64 / 2.0)
    }
}

pub fn dicke_coefficients(na: u32, nb: u32) -> Result<DickeCoefficients> {
    let n = na + nb;
    if n % 2 == 1 {
        return Err(Error::OddTotal(n));
    }
    let (small, large) = if na <= nb { (na, nb) } else { (nb, na) };
    let norm = binomial(n, n / 2);
    let mut two_m = Vec::new();
    let mut squared = Vec::new();
    let mut t = -(small as i64);
    while t <= small as i64 {
        let ks = ((small as i64 + t) / 2) as u32;
        let kl = ((large as i64 + t) / 2) as u32;
        two_m.push(t);
        squared.push(Ratio::new(binomial(small, ks) * binomial(large, kl), norm));
        t += 2;
    }
    let values = squared
        .iter()
        .map(|r| (*r.numer() as f64 / *r.denom() as f64).sqrt())
        .collect();
    Ok(DickeCoefficients { n_small: small, n_large: large, two_m, values, squared })
}

/// `sum_m c_m phase(m) |m>_a |-m>_b`.
fn schmidt_state(space: TwoWellSpace, phase: impl Fn(i64) -> Complex64) -> Result<StateVector> {
    let coeffs = dicke_coefficients(space.na(), space.nb())?;
    let mut amps = CVector::zeros(space.dim());
    for (&t, &cm) in coeffs.two_m.iter().zip(&coeffs.values) {
        let idx = space
            .index_of_two_m(t, -t)
            .expect("Schmidt index lies inside both wells");
        amps[idx] = phase(t) * cm;
    }
    StateVector::new(space, amps)
}

/// The Dicke state `|N/2, 0>`.
pub fn dicke_state(space: TwoWellSpace) -> Result<StateVector> {
    schmidt_state(space, |_| c(1.0))
}

/// The Dicke state after a pi rotation of well b about z.
///
/// Amplitudes carry `exp(i pi m)`, which is `(-1)^m` for integer `m`; for
/// half-integer `m` it differs from `(-1)^(m - 1/2)` only by a global phase.
pub fn flipped_dicke_state(space: TwoWellSpace) -> Result<StateVector> {
    schmidt_state(space, i_pow)
}

/// `i^k` exactly.
fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(|j_a>|j_b> + |-j_a>|-j_b>)/sqrt 2`.
pub fn ghz_state(space: TwoWellSpace) -> StateVector {
    let mut amps = CVector::zeros(space.dim());
    amps[space.index(0, 0)] = c(1.0);
    amps[space.index(space.dim_a() - 1, space.dim_b() - 1)] = c(1.0);
    StateVector::new(space, amps).expect("non-zero vector")
}

/// GHZ with every spin of well b bit-flipped.
pub fn flipped_ghz_state(space: TwoWellSpace) -> StateVector {
    let mut amps = CVector::zeros(space.dim());
    amps[space.index(0, space.dim_b() - 1)] = c(1.0);
    amps[space.index(space.dim_a() - 1, 0)] = c(1.0);
    StateVector::new(space, amps).expect("non-zero vector")
}

/// A local Dicke state `|N_r/2, 0>` in each well.
pub fn product_dicke_state(space: TwoWellSpace) -> Result<StateVector> {
    if space.na() % 2 == 1 || space.nb() % 2 == 1 {
        return Err(Error::OddWell { na: space.na(), nb: space.nb() });
    }
    let mut amps = CVector::zeros(space.dim());
    amps[space.index(space.na() as usize / 2, space.nb() as usize / 2)] = c(1.0);
    StateVector::new(space, amps)
}

/// Haar-random pure state on the product of symmetric subspaces.
pub fn haar_random_state<R: Rng + ?Sized>(space: TwoWellSpace, rng: &mut R) -> StateVector {
    let amps = CVector::from_fn(space.dim(), |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    StateVector::new(space, amps).expect("gaussian vector is non-zero almost surely")
}

/// Product of independent Haar-random states of each well.
pub fn random_product_state<R: Rng + ?Sized>(space: TwoWellSpace, rng: &mut R) -> StateVector {
    let mut draw = |d: usize| {
        CVector::from_fn(d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    };
    let a = draw(space.dim_a());
    let b = draw(space.dim_b());
    StateVector::new(space, a.kronecker(&b)).expect("non-zero vector")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Dicke,
    FlippedDicke,
    Ghz,
    FlippedGhz,
    ProductDicke,
}

impl StateKind {
    pub const ALL: [StateKind; 5] = [
        StateKind::Dicke,
        StateKind::FlippedDicke,
        StateKind::Ghz,
        StateKind::FlippedGhz,
        StateKind::ProductDicke,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StateKind::Dicke => "dicke",
            StateKind::FlippedDicke => "flipped-dicke",
            StateKind::Ghz => "ghz",
            StateKind::FlippedGhz => "flipped-ghz",
            StateKind::ProductDicke => "product-dicke",
        }
    }

    pub fn prepare(self, space: TwoWellSpace) -> Result<StateVector> {
        match self {
            StateKind::Dicke => dicke_state(space),
            StateKind::FlippedDicke => flipped_dicke_state(space),
            StateKind::Ghz => Ok(ghz_state(space)),
            StateKind::FlippedGhz => Ok(flipped_ghz_state(space)),
            StateKind::ProductDicke => product_dicke_state(space),
        }
    }
}

impl std::fmt::Display for StateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown state kind '{s}'")))
    }
}

/// Phases imprinted by a field along `axis`: `b0` homogeneous, `b1` gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub b0: f64,
    pub b1: f64,
    pub axis: Axis,
}

impl EvolutionParams {
    pub fn new(b0: f64, b1: f64, axis: Axis) -> Result<Self> {
        if !b0.is_finite() || !b1.is_finite() {
            return Err(Error::InvalidParameter("phases must be finite".into()));
        }
        Ok(Self { b0, b1, axis })
    }

    /// `(b0 + b1) J_{l,a} + (b0 - b1) J_{l,b}`.
    pub fn generator(&self, ops: &SpaceOperators) -> CMatrix {
        ops.a(self.axis) * c(self.b0 + self.b1) + ops.b(self.axis) * c(self.b0 - self.b1)
    }

    pub fn unitary(&self, ops: &SpaceOperators) -> CMatrix {
        unitary_exp(&self.generator(ops), 1.0)
    }
}

/// `exp(-i [b0 J_{l,+} + b1 J_{l,-}]) |psi>`.
pub fn evolve(state: &StateVector, params: EvolutionParams) -> StateVector {
    let ops = SpaceOperators::new(state.space());
    state.apply(&params.unitary(&ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{rotation_operator, Well};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn space(na: u32, nb: u32) -> TwoWellSpace {
        TwoWellSpace::new(na, nb).unwrap()
    }

    #[test]
    fn coefficients_for_two_two() {
        let cm = dicke_coefficients(2, 2).unwrap();
        assert_eq!(cm.two_m, vec![-2, 0, 2]);
        let expected = [1.0 / 6f64.sqrt(), 2.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt()];
        for (v, e) in cm.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-15);
        }
    }

    #[test]
    fn coefficients_are_normalized_exactly() {
        for na in 1..=10 {
            for nb in 1..=10 {
                if (na + nb) % 2 == 1 {
                    assert_eq!(dicke_coefficients(na, nb).unwrap_err(), Error::OddTotal(na + nb));
                    continue;
                }
                let cm = dicke_coefficients(na, nb).unwrap();
                let total: Ratio<i128> = cm.squared.iter().sum();
                assert_eq!(total, Ratio::from_integer(1));
                // second moment sum c_m^2 m^2 = NaNb / (4(N-1))
                let second: Ratio<i128> = cm
                    .squared
                    .iter()
                    .zip(&cm.two_m)
                    .map(|(r, &t)| r * Ratio::new((t * t) as i128, 4))
                    .sum();
                let n = (na + nb) as i128;
                assert_eq!(second, Ratio::new((na * nb) as i128, 4 * (n - 1)));
                if na == nb {
                    let k = cm.values.len();
                    for i in 0..k {
                        assert_eq!(cm.squared[i], cm.squared[k - 1 - i]);
                    }
                }
            }
        }
    }

    #[test]
    fn dicke_is_jz_null_vector() {
        for (na, nb) in [(2, 2), (2, 4), (3, 5), (4, 4)] {
            let sp = space(na, nb);
            let ops = SpaceOperators::new(sp);
            for st in [dicke_state(sp).unwrap(), flipped_dicke_state(sp).unwrap()] {
                let v = ops.plus(Axis::Z) * st.amplitudes();
                assert!(v.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn dicke_second_moments() {
        let sp = space(4, 4);
        let ops = SpaceOperators::new(sp);
        let d = dicke_state(sp).unwrap();
        assert!((4.0 * d.variance(&ops.plus(Axis::X)) - 40.0).abs() < 1e-10);
        let sp = space(2, 6);
        let ops = SpaceOperators::new(sp);
        let d = dicke_state(sp).unwrap();
        let zz = ops.a(Axis::Z) * ops.b(Axis::Z);
        assert!((d.mean(&zz) + 12.0 / 28.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_dicke_variances() {
        let sp = space(4, 4);
        let ops = SpaceOperators::new(sp);
        let f = flipped_dicke_state(sp).unwrap();
        assert!((4.0 * f.variance(&ops.minus(Axis::Y)) - 40.0).abs() < 1e-10);
        assert!((4.0 * f.variance(&ops.plus(Axis::Y)) - 24.0 / 7.0).abs() < 1e-10);
    }

    #[test]
    fn flipped_dicke_is_rotated_dicke() {
        for (na, nb) in [(2, 2), (1, 3), (3, 3), (2, 4)] {
            let sp = space(na, nb);
            let r = rotation_operator(sp, Axis::Z, Well::B, PI);
            let rotated = dicke_state(sp).unwrap().apply(&r);
            assert!(rotated.same_ray(&flipped_dicke_state(sp).unwrap(), 1e-12), "({na},{nb})");
        }
    }

    #[test]
    fn flipped_dicke_moments() {
        for (na, nb) in [(2, 2), (2, 4), (3, 5), (4, 4)] {
            let sp = space(na, nb);
            let ops = SpaceOperators::new(sp);
            let f = flipped_dicke_state(sp).unwrap();
            for ax in Axis::ALL {
                assert!(f.mean(ops.a(ax)).abs() < 1e-13);
                assert!(f.mean(ops.b(ax)).abs() < 1e-13);
            }
            let ja2: CMatrix = Axis::ALL.iter().map(|&ax| ops.a(ax) * ops.a(ax)).sum();
            let jb2: CMatrix = Axis::ALL.iter().map(|&ax| ops.b(ax) * ops.b(ax)).sum();
            let (fa, fb) = (na as f64, nb as f64);
            assert!((f.mean(&ja2) - fa * (fa + 2.0) / 4.0).abs() < 1e-12);
            assert!((f.mean(&jb2) - fb * (fb + 2.0) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_variances() {
        let sp = space(4, 4);
        let ops = SpaceOperators::new(sp);
        assert!((4.0 * ghz_state(sp).variance(&ops.plus(Axis::Z)) - 64.0).abs() < 1e-12);
        assert!((4.0 * flipped_ghz_state(sp).variance(&ops.minus(Axis::Z)) - 64.0).abs() < 1e-12);
        let sp = space(2, 6);
        let ops = SpaceOperators::new(sp);
        assert!((4.0 * flipped_ghz_state(sp).variance(&ops.plus(Axis::Z)) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_ghz_is_x_rotated_ghz() {
        let sp = space(3, 4);
        let r = rotation_operator(sp, Axis::X, Well::B, PI);
        assert!(ghz_state(sp).apply(&r).same_ray(&flipped_ghz_state(sp), 1e-12));
    }

    #[test]
    fn evolve_identity_and_norm() {
        let sp = space(2, 4);
        let f = flipped_dicke_state(sp).unwrap();
        let same = evolve(&f, EvolutionParams::new(0.0, 0.0, Axis::Y).unwrap());
        assert!((same.amplitudes() - f.amplitudes()).norm() < 1e-13);
        let moved = evolve(&f, EvolutionParams::new(0.3, -0.7, Axis::X).unwrap());
        assert!(moved.is_normalized());
    }

    #[test]
    fn generator_decomposition() {
        let sp = space(2, 3);
        let ops = SpaceOperators::new(sp);
        let p = EvolutionParams::new(0.4, 0.1, Axis::Z).unwrap();
        let direct = ops.plus(Axis::Z) * c(0.4) + ops.minus(Axis::Z) * c(0.1);
        assert!((p.generator(&ops) - direct).norm() < 1e-14);
    }

    #[test]
    fn odd_total_rejected() {
        assert!(matches!(dicke_state(space(2, 3)), Err(Error::OddTotal(5))));
        assert!(product_dicke_state(space(1, 3)).is_err());
    }

    #[test]
    fn random_states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sp = space(2, 4);
        assert!(haar_random_state(sp, &mut rng).is_normalized());
        assert!(random_product_state(sp, &mut rng).is_normalized());
    }

    #[test]
    fn state_kind_parsing() {
        for k in StateKind::ALL {
            assert_eq!(k.label().parse::<StateKind>().unwrap(), k);
        }
        assert!("bell".parse::<StateKind>().is_err());
    }
}
