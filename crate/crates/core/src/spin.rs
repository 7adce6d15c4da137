//! Angular-momentum matrices and the two-well product space.
//!
//! Every operator acts on the symmetric subspace of each well, i.e. on the
//! product of a spin `Na/2` and a spin `Nb/2`. Tensor factors are always
//! ordered `(well a) ⊗ (well b)` and each local basis runs over `m` in
//! descending order, so the product index is
//! `(Na/2 - m_a) * (Nb + 1) + (Nb/2 - m_b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, unitary_exp, CMatrix, I};

/// A spin quantum number, stored as `2j` so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub fn from_twice(two_j: u32) -> Self {
        Self { two_j }
    }

    /// The spin of `n` spin-1/2 particles in their symmetric subspace.
    pub fn of_particles(n: u32) -> Self {
        Self { two_j: n }
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// `m` value of local basis index `k` (descending order).
    pub fn m_of(self, k: usize) -> f64 {
        self.j() - k as f64
    }

    /// `2m` value of local basis index `k`.
    pub fn two_m_of(self, k: usize) -> i64 {
        self.two_j as i64 - 2 * k as i64
    }
}

/// The three Cartesian spin components for one spin.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub spin: Spin,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinMatrices {
    pub fn component(&self, axis: Axis) -> &CMatrix {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }
}

/// Standard ladder construction with `J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>`.
pub fn spin_matrices(spin: Spin) -> SpinMatrices {
    let d = spin.dim();
    let j = spin.j();
    let mut raise = CMatrix::zeros(d, d);
    // index k has m = j - k, so J+ maps column k to row k - 1
    for k in 1..d {
        let m = spin.m_of(k);
        raise[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower) * c(0.5);
    let jy = (&raise - &lower) * (-I * 0.5);
    let jz = CMatrix::from_fn(d, d, |r, col| if r == col { c(spin.m_of(r)) } else { c(0.0) });
    SpinMatrices { spin, jx, jy, jz }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::InvalidParameter(format!("unknown axis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Well {
    A,
    B,
}

/// Which collective combination of the two local spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combination {
    AOnly,
    BOnly,
    /// `J_{l,a} + J_{l,b}`, the homogeneous-field generator.
    Plus,
    /// `J_{l,a} - J_{l,b}`, the gradient generator.
    Minus,
}

/// Two wells holding `na` and `nb` spin-1/2 particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoWellSpace {
    na: u32,
    nb: u32,
}

impl TwoWellSpace {
    pub fn new(na: u32, nb: u32) -> Result<Self> {
        if na == 0 || nb == 0 {
            return Err(Error::EmptyWell { na, nb });
        }
        Ok(Self { na, nb })
    }

    pub fn na(&self) -> u32 {
        self.na
    }

    pub fn nb(&self) -> u32 {
        self.nb
    }

    pub fn total(&self) -> u32 {
        self.na + self.nb
    }

    pub fn spin_a(&self) -> Spin {
        Spin::of_particles(self.na)
    }

    pub fn spin_b(&self) -> Spin {
        Spin::of_particles(self.nb)
    }

    pub fn dim_a(&self) -> usize {
        self.na as usize + 1
    }

    pub fn dim_b(&self) -> usize {
        self.nb as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.dim_a() * self.dim_b()
    }

    /// Product-basis index of local indices `(ka, kb)`.
    pub fn index(&self, ka: usize, kb: usize) -> usize {
        ka * self.dim_b() + kb
    }

    /// Product-basis index of `|m_a>|m_b>` given `2m` values.
    pub fn index_of_two_m(&self, two_ma: i64, two_mb: i64) -> Option<usize> {
        let ka = self.na as i64 - two_ma;
        let kb = self.nb as i64 - two_mb;
        if ka < 0 || kb < 0 || ka % 2 != 0 || kb % 2 != 0 {
            return None;
        }
        let (ka, kb) = ((ka / 2) as usize, (kb / 2) as usize);
        if ka >= self.dim_a() || kb >= self.dim_b() {
            return None;
        }
        Some(self.index(ka, kb))
    }
}

#[derive(Debug, Clone)]
pub struct CollectiveOperator {
    pub space: TwoWellSpace,
    pub axis: Axis,
    pub combination: Combination,
    pub matrix: CMatrix,
}

pub fn collective_operator(space: TwoWellSpace, axis: Axis, combination: Combination) -> CollectiveOperator {
    let ops = SpaceOperators::new(space);
    let matrix = ops.combination(axis, combination);
    CollectiveOperator { space, axis, combination, matrix }
}

/// All six local operators of a space, built once and reused.
#[derive(Debug, Clone)]
pub struct SpaceOperators {
    pub space: TwoWellSpace,
    a: [CMatrix; 3],
    b: [CMatrix; 3],
}

impl SpaceOperators {
    pub fn new(space: TwoWellSpace) -> Self {
        let la = spin_matrices(space.spin_a());
        let lb = spin_matrices(space.spin_b());
        let ida = CMatrix::identity(space.dim_a(), space.dim_a());
        let idb = CMatrix::identity(space.dim_b(), space.dim_b());
        let a = Axis::ALL.map(|ax| la.component(ax).kronecker(&idb));
        let b = Axis::ALL.map(|ax| ida.kronecker(lb.component(ax)));
        Self { space, a, b }
    }

    pub fn local(&self, axis: Axis, well: Well) -> &CMatrix {
        match well {
            Well::A => &self.a[axis.index()],
            Well::B => &self.b[axis.index()],
        }
    }

    pub fn a(&self, axis: Axis) -> &CMatrix {
        &self.a[axis.index()]
    }

    pub fn b(&self, axis: Axis) -> &CMatrix {
        &self.b[axis.index()]
    }

    pub fn plus(&self, axis: Axis) -> CMatrix {
        self.a(axis) + self.b(axis)
    }

    pub fn minus(&self, axis: Axis) -> CMatrix {
        self.a(axis) - self.b(axis)
    }

    /// `J_{l,a} + s * J_{l,b}`.
    pub fn signed(&self, axis: Axis, sign: i8) -> CMatrix {
        if sign >= 0 {
            self.plus(axis)
        } else {
            self.minus(axis)
        }
    }

    pub fn combination(&self, axis: Axis, combination: Combination) -> CMatrix {
        match combination {
            Combination::AOnly => self.a(axis).clone(),
            Combination::BOnly => self.b(axis).clone(),
            Combination::Plus => self.plus(axis),
            Combination::Minus => self.minus(axis),
        }
    }

    /// `sum_l (J_{l,a} + s_l J_{l,b})^2`.
    pub fn signed_square_sum(&self, signs: [i8; 3]) -> CMatrix {
        let dim = self.space.dim();
        Axis::ALL.iter().fold(CMatrix::zeros(dim, dim), |acc, &ax| {
            let g = self.signed(ax, signs[ax.index()]);
            acc + &g * &g
        })
    }
}

/// `exp(-i * angle * J_{axis,well})` on the full two-well space.
pub fn rotation_operator(space: TwoWellSpace, axis: Axis, well: Well, angle: f64) -> CMatrix {
    let ops = SpaceOperators::new(space);
    unitary_exp(ops.local(axis, well), angle)
}
