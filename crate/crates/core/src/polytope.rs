//! The polytope of gradient QFIs `F_{l,-}` for fixed homogeneous QFIs `F_{l,+}`.
//!
//! Notation: `F_{l,±} = F[rho, J_{l,a} ± J_{l,b}]`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfi::qfi_matrix_with;
use crate::spin::{Axis, SpaceOperators};
use crate::states::StateVector;
use crate::tolerance;

/// The six QFIs `F_{l,+}` and `F_{l,-}` indexed by `Axis::index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiSixVector {
    pub plus: [f64; 3],
    pub minus: [f64; 3],
}

impl QfiSixVector {
    pub fn value(&self, axis: Axis, sign: SignVector) -> f64 {
        if sign.get(axis) > 0 {
            self.plus[axis.index()]
        } else {
            self.minus[axis.index()]
        }
    }

    /// Largest violation of any per-axis or sign-vector inequality, clamped at zero.
    pub fn max_violation(&self, na: u32, nb: u32) -> f64 {
        let (na, nb) = (na as f64, nb as f64);
        let n = na + nb;
        let mut worst: f64 = 0.0;
        for k in 0..3 {
            worst = worst.max(-self.plus[k]).max(-self.minus[k]);
            worst = worst.max(self.plus[k] + self.minus[k] - 2.0 * (na * na + nb * nb));
        }
        for s in SignVector::all() {
            let lhs: f64 = Axis::ALL.iter().map(|&l| self.value(l, s)).sum();
            worst = worst.max(lhs - s.sum_bound(na, nb, n));
        }
        worst
    }
}

/// Signs `s_l` in `sum_l F[rho, J_{l,a} + s_l J_{l,b}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector(pub [i8; 3]);

impl SignVector {
    pub fn all() -> impl Iterator<Item = SignVector> {
        (0..8u8).map(|bits| {
            let s = |b: u8| if bits & b == 0 { 1 } else { -1 };
            SignVector([s(1), s(2), s(4)])
        })
    }

    pub fn get(&self, axis: Axis) -> i8 {
        self.0[axis.index()]
    }

    /// `Π(s_x s_y s_z)`: 0 for an even number of minus signs, 1 otherwise.
    pub fn parity(&self) -> u8 {
        u8::from(self.0.iter().map(|&s| s as i32).product::<i32>() < 0)
    }

    fn sum_bound(&self, na: f64, nb: f64, n: f64) -> f64 {
        n * (n + 2.0) + 4.0 * self.parity() as f64 * na.min(nb)
    }
}

/// `normal · F_- <= offset`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfSpace {
    pub normal: [f64; 3],
    pub offset: f64,
    pub id: String,
}

impl HalfSpace {
    pub fn slack(&self, point: [f64; 3]) -> f64 {
        self.offset - dot(self.normal, point)
    }

    fn is_nonnegativity(&self) -> bool {
        self.id.starts_with("nonneg")
    }

    /// A per-axis bound with zero offset coincides with the `F_{l,-} >= 0` face.
    fn collapses_to_floor(&self) -> bool {
        self.id.starts_with("45a") && self.offset.abs() < tolerance::SATURATION
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolytopeModel {
    pub na: u32,
    pub nb: u32,
    pub f_plus: [f64; 3],
    pub halfspaces: Vec<HalfSpace>,
    pub vertices: Vec<[f64; 3]>,
}

impl PolytopeModel {
    pub fn contains(&self, point: [f64; 3], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.slack(point) >= -tol)
    }
}

/// Polytope together with the state it was built from, as exported to JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolytopeReport {
    #[serde(flatten)]
    pub model: PolytopeModel,
    pub state_point: [f64; 3],
    pub saturated: Vec<String>,
    #[serde(skip)]
    pub slacks: Vec<(String, f64)>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(k: usize, scale: f64) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[k] = scale;
    v
}

pub fn qfi_six_vector(state: &StateVector) -> QfiSixVector {
    let ops = SpaceOperators::new(state.space());
    let mut six = QfiSixVector { plus: [0.0; 3], minus: [0.0; 3] };
    for axis in Axis::ALL {
        let qm = qfi_matrix_with(state, &ops, axis);
        six.plus[axis.index()] = qm.f00;
        six.minus[axis.index()] = qm.f11;
    }
    six
}

/// `sum_l F_{l,±}` and its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureOfMerit {
    pub sum: f64,
    pub bound: f64,
}

impl FigureOfMerit {
    pub fn within_bound(&self) -> bool {
        self.sum <= self.bound + tolerance::SATURATION
    }
}

/// With `flipped = false` the homogeneous sum `sum_l F_{l,+}` against `N(N+2)`;
/// otherwise the gradient sum `sum_l F_{l,-}` against `N(N+2) + 4 min(Na, Nb)`.
pub fn figure_of_merit_sum(state: &StateVector, flipped: bool) -> FigureOfMerit {
    let six = qfi_six_vector(state);
    let sp = state.space();
    let n = sp.total() as f64;
    let values = if flipped { six.minus } else { six.plus };
    let extra = if flipped { 4.0 * sp.na().min(sp.nb()) as f64 } else { 0.0 };
    FigureOfMerit { sum: values.iter().sum(), bound: n * (n + 2.0) + extra }
}

const AXIS_PAIRS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Half-spaces and vertices of the gradient-QFI polytope.
///
/// The per-axis bound is a minimum of two offsets on the same normal, so a
/// single plane with the smaller offset is stored.
pub fn build_polytope(na: u32, nb: u32, f_plus: [f64; 3]) -> Result<PolytopeModel> {
    if na == 0 || nb == 0 {
        return Err(Error::EmptyWell { na, nb });
    }
    if f_plus.iter().any(|&f| !f.is_finite() || f < 0.0) {
        return Err(Error::InvalidParameter(format!("F_plus entries must be non-negative, got {f_plus:?}")));
    }
    let n = (na + nb) as f64;
    let heis = n * (n + 2.0);
    let grad = heis + 4.0 * na.min(nb) as f64;
    let label = |k: usize| Axis::ALL[k].label();

    let mut halfspaces = Vec::with_capacity(10);
    for &(i, j, k) in &AXIS_PAIRS {
        let offset = (n * n - f_plus[i]).min(grad - f_plus[j] - f_plus[k]);
        halfspaces.push(HalfSpace { normal: unit(i, 1.0), offset, id: format!("45a:{}", label(i)) });
    }
    for &(i, j, k) in &AXIS_PAIRS {
        let mut normal = unit(i, 1.0);
        normal[j] = 1.0;
        halfspaces.push(HalfSpace {
            normal,
            offset: heis - f_plus[k],
            id: format!("45b:{}{}|{}", label(i), label(j), label(k)),
        });
    }
    halfspaces.push(HalfSpace { normal: [1.0; 3], offset: grad, id: "45c".into() });
    for k in 0..3 {
        halfspaces.push(HalfSpace { normal: unit(k, -1.0), offset: 0.0, id: format!("nonneg:{}", label(k)) });
    }

    let vertices = enumerate_vertices(&halfspaces);
    if vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(PolytopeModel { na, nb, f_plus, halfspaces, vertices })
}

fn enumerate_vertices(halfspaces: &[HalfSpace]) -> Vec<[f64; 3]> {
    let m = halfspaces.len();
    let mut out: Vec<[f64; 3]> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let rows = [&halfspaces[a], &halfspaces[b], &halfspaces[c]];
                let mat = Matrix3::from_fn(|r, col| rows[r].normal[col]);
                if mat.determinant().abs() < 1e-12 {
                    continue;
                }
                let rhs = Vector3::new(rows[0].offset, rows[1].offset, rows[2].offset);
                let Some(x) = mat.lu().solve(&rhs) else { continue };
                let p = [x[0], x[1], x[2]];
                if halfspaces.iter().any(|h| h.slack(p) < -tolerance::SATURATION) {
                    continue;
                }
                let fresh = out.iter().all(|q| {
                    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
                    dot(d, d).sqrt() > tolerance::VERTEX_DEDUP
                });
                if fresh {
                    out.push(p);
                }
            }
        }
    }
    out.sort_by(|p, q| p.partial_cmp(q).expect("finite vertices"));
    out
}

/// Builds the polytope from the state's own `F_{l,+}` and classifies which
/// upper bounds the state's `F_{l,-}` saturates. The `F_{l,-} >= 0` planes,
/// and per-axis planes lying on them, are reported in the slacks but never
/// counted as saturated.
pub fn classify_saturation(state: &StateVector) -> Result<PolytopeReport> {
    let six = qfi_six_vector(state);
    let sp = state.space();
    let model = build_polytope(sp.na(), sp.nb(), six.plus)?;
    let point = six.minus;
    let slacks: Vec<(String, f64)> = model.halfspaces.iter().map(|h| (h.id.clone(), h.slack(point))).collect();
    let saturated = model
        .halfspaces
        .iter()
        .filter(|h| !h.is_nonnegativity() && !h.collapses_to_floor() && h.slack(point).abs() < tolerance::SATURATION)
        .map(|h| h.id.clone())
        .collect();
    Ok(PolytopeReport { model, state_point: point, saturated, slacks })
}
