//! Optimal gradient measurement among operators commuting with `J_{y,a} + J_{y,b}`.
//!
//! Everything is assembled in the product basis of local `j_y` eigenstates,
//! where the commutant is block diagonal with one block per total `m_y`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::commutant_counts;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, symmetric_pseudo_inverse, CMatrix, CVector, I};
use crate::spin::{spin_matrices, Spin, TwoWellSpace};
use crate::states::StateVector;
use crate::tolerance;

/// One total-`m_y` sector: rows `start..start + size` of the block basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub two_m_y: i64,
    pub start: usize,
    pub size: usize,
}

impl Block {
    pub fn m_y(&self) -> f64 {
        self.two_m_y as f64 / 2.0
    }
}

/// Product eigenbasis of the local `j_y` operators.
///
/// Columns of `unitary` are ordered by total `m_y` descending and, within a
/// sector, by `m_{y,a}` descending.
#[derive(Debug, Clone)]
pub struct JyBlockBasis {
    space: TwoWellSpace,
    unitary: CMatrix,
    blocks: Vec<Block>,
    two_m_a: Vec<i64>,
    two_m_b: Vec<i64>,
}

/// Eigenvectors of `j_y` for one spin, column `k` with `m = j - k`, each
/// with its first nonzero component real and positive.
fn local_jy_eigenbasis(spin: Spin) -> CMatrix {
    let (_, mut vecs) = hermitian_eigen(&spin_matrices(spin).jy);
    for mut col in vecs.column_iter_mut() {
        let lead = col.iter().copied().find(|z| z.norm() > 1e-9).expect("eigenvector is nonzero");
        let phase = lead.conj() / lead.norm();
        col *= phase;
    }
    vecs
}

pub fn jy_block_basis(space: TwoWellSpace) -> JyBlockBasis {
    let (sa, sb) = (space.spin_a(), space.spin_b());
    let va = local_jy_eigenbasis(sa);
    let vb = local_jy_eigenbasis(sb);
    let mut pairs: Vec<(usize, usize)> =
        (0..sa.dim()).flat_map(|ka| (0..sb.dim()).map(move |kb| (ka, kb))).collect();
    pairs.sort_by_key(|&(ka, kb)| (ka + kb, ka));

    let dim = space.dim();
    let mut unitary = CMatrix::zeros(dim, dim);
    let mut two_m_a = Vec::with_capacity(dim);
    let mut two_m_b = Vec::with_capacity(dim);
    let mut blocks: Vec<Block> = Vec::new();
    for (col, &(ka, kb)) in pairs.iter().enumerate() {
        let v = va.column(ka).kronecker(&vb.column(kb));
        unitary.set_column(col, &v);
        let (ma, mb) = (sa.two_m_of(ka), sb.two_m_of(kb));
        two_m_a.push(ma);
        two_m_b.push(mb);
        match blocks.last_mut() {
            Some(b) if b.two_m_y == ma + mb => b.size += 1,
            _ => blocks.push(Block { two_m_y: ma + mb, start: col, size: 1 }),
        }
    }
    JyBlockBasis { space, unitary, blocks, two_m_a, two_m_b }
}

impl JyBlockBasis {
    pub fn space(&self) -> TwoWellSpace {
        self.space
    }

    /// Columns are the block basis vectors expressed in the `j_z` product basis.
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `d(m_y)`, zero outside the spectrum.
    pub fn degeneracy(&self, two_m_y: i64) -> usize {
        self.blocks.iter().find(|b| b.two_m_y == two_m_y).map_or(0, |b| b.size)
    }

    /// Sector offset `j_max - m_y`, counted from the top sector.
    pub fn offset(&self, block: &Block) -> u32 {
        ((self.space.total() as i64 - block.two_m_y) / 2) as u32
    }

    pub fn to_block(&self, v: &CVector) -> CVector {
        self.unitary.adjoint() * v
    }

    pub fn from_block_operator(&self, m: &CMatrix) -> CMatrix {
        &self.unitary * m * self.unitary.adjoint()
    }

    /// `J_{y,a} - J_{y,b}`, diagonal in the block basis.
    pub fn gradient_diagonal(&self) -> Vec<f64> {
        self.two_m_a.iter().zip(&self.two_m_b).map(|(a, b)| (a - b) as f64 / 2.0).collect()
    }

    /// Probability weight of a state in each block.
    pub fn block_weights(&self, state: &StateVector) -> Vec<f64> {
        let y = self.to_block(state.amplitudes());
        self.blocks.iter().map(|b| y.rows(b.start, b.size).norm_squared()).collect()
    }
}

/// Sparse element of the commutant, indices in the block basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    /// `|p><p|`.
    Diagonal(usize),
    /// `|p><q| + |q><p|`.
    Symmetric(usize, usize),
    /// `i (|p><q| - |q><p|)`.
    Antisymmetric(usize, usize),
}

impl Element {
    fn apply(&self, v: &CVector, out: &mut CVector) {
        out.fill(Complex64::new(0.0, 0.0));
        match *self {
            Element::Diagonal(p) => out[p] = v[p],
            Element::Symmetric(p, q) => {
                out[p] = v[q];
                out[q] = v[p];
            }
            Element::Antisymmetric(p, q) => {
                out[p] = I * v[q];
                out[q] = -I * v[p];
            }
        }
    }

    fn add_to(&self, m: &mut CMatrix, w: f64) {
        match *self {
            Element::Diagonal(p) => m[(p, p)] += w,
            Element::Symmetric(p, q) => {
                m[(p, q)] += w;
                m[(q, p)] += w;
            }
            Element::Antisymmetric(p, q) => {
                m[(p, q)] += I * w;
                m[(q, p)] -= I * w;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommutantBasis {
    basis: JyBlockBasis,
    elements: Vec<Element>,
    reduced: bool,
    k_star: usize,
    k: usize,
}

impl CommutantBasis {
    pub fn jy_basis(&self) -> &JyBlockBasis {
        &self.basis
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Element `k` as a dense matrix in the `j_z` product basis.
    pub fn operator(&self, k: usize) -> CMatrix {
        let dim = self.basis.space.dim();
        let mut m = CMatrix::zeros(dim, dim);
        self.elements[k].add_to(&mut m, 1.0);
        self.basis.from_block_operator(&m)
    }
}

/// Number of independent Hermitian operators commuting with `J_y`, full and reduced.
pub fn count_operators(na: u32, nb: u32) -> (usize, usize) {
    commutant_counts(na, nb)
}

/// Whether a sector is kept by the reduced basis: offsets of the same parity
/// as `min(Na, Nb)`.
fn keeps_sector(space: TwoWellSpace, offset: u32) -> bool {
    offset % 2 == space.na().min(space.nb()) % 2
}

/// Basis of the commutant of `J_y`; `reduced` keeps only the sectors a
/// flipped Dicke state populates and therefore needs an even total `N`.
pub fn commutant_basis(space: TwoWellSpace, reduced: bool) -> Result<CommutantBasis> {
    if reduced && space.total() % 2 == 1 {
        return Err(Error::OddTotal(space.total()));
    }
    let basis = jy_block_basis(space);
    let mut elements = Vec::new();
    for block in basis.blocks() {
        if reduced && !keeps_sector(space, basis.offset(block)) {
            continue;
        }
        let idx = block.start..block.start + block.size;
        for p in idx.clone() {
            elements.push(Element::Diagonal(p));
        }
        for p in idx.clone() {
            for q in p + 1..idx.end {
                elements.push(Element::Symmetric(p, q));
                elements.push(Element::Antisymmetric(p, q));
            }
        }
    }
    let (k_star, k) = count_operators(space.na(), space.nb());
    let formula = if reduced { k } else { k_star };
    if formula != elements.len() {
        return Err(Error::CountMismatch { formula, enumerated: elements.len() });
    }
    Ok(CommutantBasis { basis, elements, reduced, k_star, k })
}

#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub space: TwoWellSpace,
    pub precision: f64,
    /// Coefficients of `M_0 = J_{y,-}` followed by the basis elements, unit norm.
    pub coefficients: DVector<f64>,
    /// `C n`, the column of `C` paired with `M_0`.
    pub c_column: DVector<f64>,
    pub delta: DMatrix<f64>,
    pub rank: usize,
    /// Optimal operator in the block basis.
    pub block_operator: CMatrix,
    /// Optimal operator in the `j_z` product basis.
    pub operator: CMatrix,
    pub blocks: Vec<Block>,
}

/// Maximizes `|d<M>/db1|^2 / Var(M)` over `M = sum_k m_k M_k`.
///
/// With `phi_k = M_k |psi>`, `C_{k0} = 2 Im <phi_k|phi_0>` and
/// `Delta_{kl} = Re <phi_k|phi_l> - <M_k><M_l>`; the optimum is
/// `c^T Delta^+ c` with `c = C n`, attained by `m ∝ Delta^+ c`.
pub fn optimal_precision(state: &StateVector, basis: &CommutantBasis) -> Result<OptimalSolution> {
    let jy = basis.jy_basis();
    let space = jy.space();
    if state.space() != space {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: state.space().dim() });
    }
    let psi = jy.to_block(state.amplitudes());
    let dim = space.dim();

    let retained: f64 = jy
        .blocks()
        .iter()
        .filter(|b| !basis.is_reduced() || keeps_sector(space, jy.offset(b)))
        .map(|b| psi.rows(b.start, b.size).norm_squared())
        .sum();
    if retained < tolerance::NORM {
        return Err(Error::DegenerateState);
    }

    let grad = jy.gradient_diagonal();
    let count = basis.len() + 1;
    let mut phis: Vec<CVector> = Vec::with_capacity(count);
    phis.push(CVector::from_iterator(dim, psi.iter().zip(&grad).map(|(z, g)| z * *g)));
    let mut scratch = CVector::zeros(dim);
    for e in basis.elements() {
        e.apply(&psi, &mut scratch);
        phis.push(scratch.clone());
    }
    let means: Vec<f64> = phis.iter().map(|phi| psi.dotc(phi).re).collect();

    let mut delta = DMatrix::<f64>::zeros(count, count);
    let mut c_column = DVector::<f64>::zeros(count);
    for k in 0..count {
        c_column[k] = 2.0 * phis[k].dotc(&phis[0]).im;
        for l in k..count {
            let v = phis[k].dotc(&phis[l]).re - means[k] * means[l];
            delta[(k, l)] = v;
            delta[(l, k)] = v;
        }
    }

    let (pinv, rank) = symmetric_pseudo_inverse(&delta, tolerance::PSEUDO_INVERSE);
    let raw = &pinv * &c_column;
    let precision = c_column.dot(&raw).max(0.0);
    let norm = raw.norm();
    let coefficients = if norm > 0.0 { raw / norm } else { raw };

    let mut block_operator = CMatrix::zeros(dim, dim);
    for (p, g) in grad.iter().enumerate() {
        block_operator[(p, p)] += coefficients[0] * g;
    }
    for (k, e) in basis.elements().iter().enumerate() {
        e.add_to(&mut block_operator, coefficients[k + 1]);
    }
    let operator = jy.from_block_operator(&block_operator);

    Ok(OptimalSolution {
        space,
        precision,
        coefficients,
        c_column,
        delta,
        rank,
        block_operator,
        operator,
        blocks: jy.blocks().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSummary {
    pub m_y: f64,
    pub size: usize,
    pub zero: bool,
    pub purely_imaginary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStructure {
    pub blocks: Vec<BlockSummary>,
    /// 1-based positions, in `m_y` descending order, of the nonzero blocks.
    pub nonzero_positions: Vec<usize>,
    pub all_imaginary: bool,
    /// Largest entry outside the diagonal blocks.
    pub off_block_max: f64,
}

pub fn block_structure_report(solution: &OptimalSolution) -> BlockStructure {
    let tol = tolerance::BLOCK_ENTRY;
    let m = &solution.block_operator;
    let mut blocks = Vec::with_capacity(solution.blocks.len());
    let mut nonzero_positions = Vec::new();
    let mut off_block_max: f64 = 0.0;
    for (pos, b) in solution.blocks.iter().enumerate() {
        let sub = m.view((b.start, b.start), (b.size, b.size));
        let max_abs = sub.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let max_re = sub.iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()));
        let zero = max_abs < tol;
        if !zero {
            nonzero_positions.push(pos + 1);
        }
        blocks.push(BlockSummary { m_y: b.m_y(), size: b.size, zero, purely_imaginary: max_re < tol });
    }
    let owner = block_owner(&solution.blocks, m.nrows());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if owner[r] != owner[c] {
                off_block_max = off_block_max.max(m[(r, c)].norm());
            }
        }
    }
    let all_imaginary = blocks.iter().all(|b| b.purely_imaginary);
    BlockStructure { blocks, nonzero_positions, all_imaginary, off_block_max }
}

fn block_owner(blocks: &[Block], dim: usize) -> Vec<usize> {
    let mut owner = vec![0; dim];
    for (i, b) in blocks.iter().enumerate() {
        owner[b.start..b.start + b.size].fill(i);
    }
    owner
}

/// One diagonal block of the optimal operator, for export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorBlock {
    pub m_y: f64,
    pub size: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorExport {
    pub na: u32,
    pub nb: u32,
    pub blocks: Vec<OperatorBlock>,
    pub precision: f64,
}

fn chop(x: f64) -> f64 {
    if x.abs() < tolerance::BLOCK_ENTRY {
        0.0
    } else {
        x
    }
}

impl OptimalSolution {
    /// Block form of the operator with round-off entries set to zero.
    pub fn export(&self) -> OperatorExport {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let sub = self.block_operator.view((b.start, b.start), (b.size, b.size));
                let grid = |f: fn(&Complex64) -> f64| {
                    (0..b.size).map(|r| (0..b.size).map(|c| chop(f(&sub[(r, c)]))).collect()).collect()
                };
                OperatorBlock { m_y: b.m_y(), size: b.size, re: grid(|z| z.re), im: grid(|z| z.im) }
            })
            .collect();
        OperatorExport { na: self.space.na(), nb: self.space.nb(), blocks, precision: self.precision }
    }
}
