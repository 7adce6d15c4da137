//! Exact rational closed forms for the two-well states.
//!
//! Everything here takes integer particle counts and returns [`Q`] values, so
//! comparisons between formulas are exact. The numerical modules are checked
//! against these only at the float boundary.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn to_f64(x: Q) -> f64 {
    x.to_f64().expect("small rationals convert")
}

pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc * (n as i128 - i) / (i + 1);
    }
    acc
}

fn even_total(na: u32, nb: u32) -> Result<(i128, i128, i128)> {
    let n = na + nb;
    if na == 0 || nb == 0 {
        return Err(Error::EmptyWell { na, nb });
    }
    if n % 2 == 1 {
        return Err(Error::OddTotal(n));
    }
    Ok((na as i128, nb as i128, n as i128))
}

fn moment_domain(na: u32, nb: u32) -> Result<(i128, i128, i128)> {
    let (a, b, n) = even_total(na, nb)?;
    if n <= 3 {
        return Err(Error::Domain(format!("N={n}: moment formulas need N > 3")));
    }
    Ok((a, b, n))
}

/// `N(N + (Na - Nb)^2 - 2) / (2(N - 1))`: QFI of the Dicke state for the
/// in-plane gradient generators, and of the flipped Dicke state for the in-plane
/// homogeneous generators.
pub fn in_plane_weak_qfi(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = even_total(na, nb)?;
    let d = a - b;
    Ok(Q::new(n * (n + d * d - 2), 2 * (n - 1)))
}

/// `4 Na Nb / (N - 1)`: QFI of both Dicke states for `J_{z,a} - J_{z,b}`.
pub fn dicke_z_gradient_qfi(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = even_total(na, nb)?;
    Ok(Q::new(4 * a * b, n - 1))
}

/// `N(N + 2)/2`: the large in-plane QFI of the Dicke state.
pub fn dicke_in_plane_qfi(n: u32) -> Q {
    let n = n as i128;
    Q::new(n * (n + 2), 2)
}

/// The four QFI rows for one state; `in_plane` stands for both `l = x` and `l = y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QfiRows {
    pub jz: Q,
    pub in_plane: Q,
    pub jz_minus: Q,
    pub in_plane_minus: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QfiTable {
    pub ghz: QfiRows,
    pub flipped_ghz: QfiRows,
    pub dicke: QfiRows,
    pub flipped_dicke: QfiRows,
}

/// Closed-form QFI table for GHZ, flipped GHZ, Dicke and flipped Dicke states.
///
/// The GHZ rows assume the two GHZ branches are not connected by a single
/// local spin flip in both wells, i.e. `(Na, Nb) != (1, 1)`.
pub fn qfi_table(na: u32, nb: u32) -> Result<QfiTable> {
    let (a, b, n) = even_total(na, nb)?;
    if na == 1 && nb == 1 {
        return Err(Error::Domain("GHZ rows need at least one well with 2 particles".into()));
    }
    let d2 = (a - b) * (a - b);
    let nn = q(n * n);
    let weak = in_plane_weak_qfi(na, nb)?;
    let zgrad = dicke_z_gradient_qfi(na, nb)?;
    let strong = dicke_in_plane_qfi(na + nb);
    Ok(QfiTable {
        ghz: QfiRows { jz: nn, in_plane: q(n), jz_minus: q(d2), in_plane_minus: q(n) },
        flipped_ghz: QfiRows { jz: q(d2), in_plane: q(n), jz_minus: nn, in_plane_minus: q(n) },
        dicke: QfiRows { jz: Q::zero(), in_plane: strong, jz_minus: zgrad, in_plane_minus: weak },
        flipped_dicke: QfiRows { jz: Q::zero(), in_plane: weak, jz_minus: zgrad, in_plane_minus: strong },
    })
}

/// `N(N + 2)`: bound on the summed homogeneous-field QFIs.
pub fn homogeneous_sum_bound(n: u32) -> Q {
    let n = n as i128;
    q(n * (n + 2))
}

/// `N(N + 2) + 4 min(Na, Nb)`: bound on the summed gradient QFIs.
pub fn gradient_sum_bound(na: u32, nb: u32) -> Q {
    let n = (na + nb) as i128;
    q(n * (n + 2) + 4 * na.min(nb) as i128)
}

/// `N(N + 2) + 4 Na Nb / (N - 1)`: summed gradient QFIs of the flipped Dicke state.
pub fn flipped_dicke_gradient_sum(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = even_total(na, nb)?;
    Ok(q(n * (n + 2)) + Q::new(4 * a * b, n - 1))
}

/// Local and cross QFIs of the flipped Dicke state for `l = y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalQfis {
    pub a: Q,
    pub b: Q,
    pub ab: Q,
}

pub fn flipped_dicke_local_qfis(na: u32, nb: u32) -> Result<LocalQfis> {
    let (a, b, n) = even_total(na, nb)?;
    Ok(LocalQfis {
        a: Q::new(a * ((a + 1) * n - 2), 2 * (n - 1)),
        b: Q::new(b * ((b + 1) * n - 2), 2 * (n - 1)),
        ab: Q::new(-a * b * n, 2 * (n - 1)),
    })
}

/// Gradient precision bound of the flipped Dicke state,
/// `2 Na Nb (N^2 - 4) / (N [N - 2 + (Na - Nb)^2])`.
///
/// For `Na = Nb = 1` the expression is `0/0`; the even-split value
/// `N(N + 2)/2` is returned, which is its limit and the exact result.
pub fn flipped_dicke_bound_b1(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = even_total(na, nb)?;
    let d = a - b;
    let den = n * (n - 2 + d * d);
    if den == 0 {
        return Ok(dicke_in_plane_qfi(na + nb));
    }
    Ok(Q::new(2 * a * b * (n * n - 4), den))
}

/// Bound after adding `added` particles to one well of an evenly split
/// flipped Dicke state of `n` particles.
pub fn uneven_split_bound(n: u32, added: u32) -> Result<Q> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::OddTotal(n));
    }
    if added % 2 == 1 {
        return Err(Error::OddTotal(n + added));
    }
    let (n, k) = (n as i128, added as i128);
    let den = 2 * (n + k) * (n - 2 + k + k * k);
    if den == 0 {
        return Ok(dicke_in_plane_qfi(n as u32));
    }
    Ok(Q::new(n * (n + 2 * k) * ((n + k) * (n + k) - 4), den))
}

/// `4 Na Nb / N`: best gradient precision of a BEC of the same size.
pub fn bec_gradient_bound(na: u32, nb: u32) -> Result<Q> {
    if na == 0 || nb == 0 {
        return Err(Error::EmptyWell { na, nb });
    }
    Ok(Q::new(4 * na as i128 * nb as i128, (na + nb) as i128))
}

/// Moments of the flipped Dicke state used by the second-moment scheme.
///
/// Fields follow the well labels; `l` is either in-plane axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlippedDickeMoments {
    /// `<J_{z,r}^2>`, equal for both wells.
    pub jz_r2: Q,
    /// `<J_{z,a} J_{z,b}>`.
    pub jza_jzb: Q,
    /// `<J_{l,a}^2>`.
    pub jl_a2: Q,
    /// `<J_{l,b}^2>`.
    pub jl_b2: Q,
    /// `<J_{l,a} J_{l,b}>`.
    pub jla_jlb: Q,
    /// `<J^2>` of the total spin.
    pub total_spin2: Q,
    /// `<J_{z,a}^2 J_{z,b}^2>`.
    pub jza2_jzb2: Q,
    /// `<J_{l,a}^2 J_{z,b}^2>`.
    pub jla2_jzb2: Q,
    /// `<J_{z,a}^2 J_{l,b}^2>`.
    pub jza2_jlb2: Q,
    /// `2 <J_{z,a} J_{x,a} J_{x,b} J_{z,b}>`.
    pub twice_zxxz: Q,
    /// `<M>` for `M = J_{z,a} J_{x,b} - J_{x,a} J_{z,b}`.
    pub m_mean: Q,
    /// `<M^2>`, which is also the variance.
    pub m_second: Q,
    /// `|d<M>/d b1|` at `b1 = 0`.
    pub slope_magnitude: Q,
    /// `slope^2 / Var(M)`.
    pub epf: Q,
}

pub fn flipped_dicke_moments(na: u32, nb: u32) -> Result<FlippedDickeMoments> {
    let (a, b, n) = moment_domain(na, nb)?;
    let d = a - b;
    let jz_r2 = Q::new(a * b, 4 * (n - 1));
    let jza2_jzb2 = Q::new(a * b * (3 * a * b - 2 * n), 16 * (n - 3) * (n - 1));
    // <J_{l,r}^2 J_{z,r'}^2> = (<J_r^2 J_{z,r'}^2> - <J_{z,r}^2 J_{z,r'}^2>) / 2 by x<->y symmetry
    let local_casimir = |nr: i128| Q::new(nr * (nr + 2), 4);
    let jla2_jzb2 = (local_casimir(a) * jz_r2 - jza2_jzb2) / q(2);
    let jza2_jlb2 = (local_casimir(b) * jz_r2 - jza2_jzb2) / q(2);
    let twice_zxxz = Q::new(a * b * (a - 2) * (b - 2) * n, 16 * (n - 3) * (n - 1));
    let m_second = jza2_jlb2 + jla2_jzb2 - twice_zxxz;
    let slope_magnitude = Q::new(a * b * (n + 2), 4 * (n - 1));
    Ok(FlippedDickeMoments {
        jz_r2,
        jza_jzb: -jz_r2,
        jl_a2: Q::new(a * (n * (a + 1) - 2), 8 * (n - 1)),
        jl_b2: Q::new(b * (n * (b + 1) - 2), 8 * (n - 1)),
        jla_jlb: Q::new(-a * b * n, 8 * (n - 1)),
        total_spin2: Q::new(n * (n + d * d - 2), 4 * (n - 1)),
        jza2_jzb2,
        jla2_jzb2,
        jza2_jlb2,
        twice_zxxz,
        m_mean: Q::zero(),
        m_second,
        slope_magnitude,
        epf: slope_magnitude * slope_magnitude / m_second,
    })
}

/// `Na Nb N (3N - 10 + (Na - Nb)^2) / (32 (N - 3)(N - 1))`.
pub fn moment_variance(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = moment_domain(na, nb)?;
    let d = a - b;
    Ok(Q::new(a * b * n * (3 * n - 10 + d * d), 32 * (n - 3) * (n - 1)))
}

/// `2 Na Nb (N - 3)(N + 2)^2 / (N (N - 1)(3N - 10 + (Na - Nb)^2))`.
pub fn moment_epf(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = moment_domain(na, nb)?;
    let d = a - b;
    Ok(Q::new(2 * a * b * (n - 3) * (n + 2) * (n + 2), n * (n - 1) * (3 * n - 10 + d * d)))
}

/// Ratio of the moment-scheme precision to the optimal bound.
pub fn moment_precision_ratio(na: u32, nb: u32) -> Result<Q> {
    let (a, b, n) = moment_domain(na, nb)?;
    let d2 = (a - b) * (a - b);
    Ok(Q::new((n + 2) * (n - 3) * (n - 2 + d2), (n - 1) * (n - 2) * (3 * n - 10 + d2)))
}

/// The precision ratio with the imbalance `(Na - Nb)^2` replaced by `alpha N`.
pub fn noisy_precision_ratio(n: f64, alpha: f64) -> Result<f64> {
    if n.is_nan() || n <= 3.0 || !n.is_finite() {
        return Err(Error::Domain(format!("N={n}: ratio needs N > 3")));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be non-negative, got {alpha}")));
    }
    Ok((n + 2.0) * (n - 3.0) * (n - 2.0 + alpha * n) / ((n - 1.0) * (n - 2.0) * (3.0 * n - 10.0 + alpha * n)))
}

/// Large-N limit of [`noisy_precision_ratio`], `(1 + alpha)/(3 + alpha)`.
pub fn noisy_precision_ratio_limit(alpha: f64) -> f64 {
    (1.0 + alpha) / (3.0 + alpha)
}

/// Numbers of independent Hermitian operators commuting with `J_y`:
/// all of them, and those acting on the sectors a flipped Dicke state populates.
pub fn commutant_counts(na: u32, nb: u32) -> (usize, usize) {
    let nmin = na.min(nb) as i64;
    let nmax = na.max(nb) as i64;
    let k_star = 1 + nmin + nmin * (1 - nmin * nmin) / 3 + (1 + nmin) * (1 + nmin) * nmax;
    let k = (k_star + nmin + 1) / 2;
    (k_star as usize, k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn table_values_four_four() {
        let t = qfi_table(4, 4).unwrap();
        assert_eq!(t.ghz.jz, q(64));
        assert_eq!(t.dicke.in_plane, q(40));
        assert_eq!(t.flipped_dicke.jz_minus, Q::new(64, 7));
        assert_eq!(t.flipped_dicke.in_plane, Q::new(24, 7));
        assert_eq!(qfi_table(2, 6).unwrap().flipped_ghz.jz, q(16));
    }

    #[test]
    fn sums() {
        assert_eq!(flipped_dicke_gradient_sum(4, 4).unwrap(), q(80) + Q::new(64, 7));
        assert_eq!(gradient_sum_bound(4, 4), q(96));
        assert_eq!(homogeneous_sum_bound(8), q(80));
    }

    #[test]
    fn local_qfis_reproduce_bound() {
        for (na, nb) in [(2, 2), (2, 4), (2, 6), (3, 5), (4, 4), (1, 7)] {
            let l = flipped_dicke_local_qfis(na, nb).unwrap();
            let f_plus = l.a + q(2) * l.ab + l.b;
            let bound = q(4) * (l.a * l.b - l.ab * l.ab) / f_plus;
            assert_eq!(bound, flipped_dicke_bound_b1(na, nb).unwrap(), "({na},{nb})");
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(flipped_dicke_bound_b1(4, 4).unwrap(), q(40));
        assert_eq!(flipped_dicke_bound_b1(2, 2).unwrap(), q(12));
        assert_eq!(flipped_dicke_bound_b1(3, 3).unwrap(), q(24));
        assert_eq!(flipped_dicke_bound_b1(2, 4).unwrap(), Q::new(32, 3));
        assert_eq!(flipped_dicke_bound_b1(2, 6).unwrap(), Q::new(90, 11));
        assert_eq!(flipped_dicke_bound_b1(1, 1).unwrap(), q(4));
        assert!(flipped_dicke_bound_b1(2, 3).is_err());
    }

    #[test]
    fn even_split_is_best_at_fixed_n() {
        for n in (4..=30).step_by(2) {
            let best = flipped_dicke_bound_b1(n / 2, n / 2).unwrap();
            for na in 1..n {
                if na == n / 2 {
                    continue;
                }
                assert!(flipped_dicke_bound_b1(na, n - na).unwrap() < best);
            }
        }
    }

    #[test]
    fn uneven_sweep_matches_general_formula_and_decreases() {
        for n in (4..=20).step_by(2) {
            let mut prev = uneven_split_bound(n, 0).unwrap();
            assert_eq!(prev, flipped_dicke_bound_b1(n / 2, n / 2).unwrap());
            for k in (2..=40).step_by(2) {
                let v = uneven_split_bound(n, k).unwrap();
                assert_eq!(v, flipped_dicke_bound_b1(n / 2, n / 2 + k).unwrap());
                assert!(v < prev);
                prev = v;
            }
        }
        let far = to_f64(uneven_split_bound(8, 2_000_000).unwrap());
        assert!((far - 8.0).abs() < 1e-4);
        assert!(uneven_split_bound(7, 2).is_err());
    }

    #[test]
    fn moment_values_four_four() {
        let m = flipped_dicke_moments(4, 4).unwrap();
        assert_eq!(m.jza2_jzb2, Q::new(32, 35));
        assert_eq!(m.twice_zxxz, Q::new(32, 35));
        assert_eq!(m.m_mean, Q::zero());
        assert_eq!(m.epf, Q::new(16000, 784));
        assert_eq!(moment_epf(4, 4).unwrap(), Q::new(16000, 784));
        assert_eq!(moment_epf(2, 2).unwrap(), q(12));
    }

    #[test]
    fn moment_variance_agrees_with_composition() {
        for (na, nb) in [(2, 2), (2, 4), (3, 3), (3, 5), (4, 4), (2, 8), (6, 6)] {
            let m = flipped_dicke_moments(na, nb).unwrap();
            assert_eq!(m.m_second, moment_variance(na, nb).unwrap(), "({na},{nb})");
            assert_eq!(m.epf, moment_epf(na, nb).unwrap());
        }
    }

    #[test]
    fn ratios() {
        assert_eq!(moment_precision_ratio(2, 2).unwrap(), q(1));
        assert_eq!(moment_precision_ratio(4, 4).unwrap(), Q::new(25, 49));
        for (na, nb) in [(2, 4), (3, 5), (4, 6)] {
            let r = moment_epf(na, nb).unwrap() / flipped_dicke_bound_b1(na, nb).unwrap();
            assert_eq!(r, moment_precision_ratio(na, nb).unwrap());
        }
        assert!((noisy_precision_ratio(400.0, 0.0).unwrap() - 1.0 / 3.0).abs() < 0.01);
        assert!((noisy_precision_ratio(400.0, 1.0).unwrap() - 0.5).abs() < 0.01);
        assert!(noisy_precision_ratio(3.0, 1.0).is_err());
        assert!(moment_epf(1, 1).is_err());
        assert_eq!(noisy_precision_ratio_limit(1.0), 0.5);
    }

    #[test]
    fn counts() {
        assert_eq!(commutant_counts(2, 2), (19, 11));
        assert_eq!(commutant_counts(4, 4), (85, 45));
        assert_eq!(commutant_counts(2, 4), (37, 20));
        assert_eq!(commutant_counts(4, 2), (37, 20));
    }

    #[test]
    fn bec() {
        assert_eq!(bec_gradient_bound(4, 4).unwrap(), q(8));
        assert_eq!(bec_gradient_bound(2, 6).unwrap(), q(6));
    }
}
