//! Brute-force checks in the full `2^N` qubit space.
//!
//! Nothing here uses the spin-`j` matrices of [`crate::spin`]: collective
//! operators are applied site by site as sums of Pauli matrices. Site `s`
//! is bit `N - 1 - s` of the basis index and `|0>` is spin up, so the
//! first `Na` sites (well a) are the high bits.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{self, to_f64, QfiRows};
use crate::error::{Error, Result};
use crate::states::StateVector;

pub const MAX_QUBITS: u32 = 12;

pub type Amplitudes = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// `sigma |bit>` as (flipped?, amplitude factor).
fn pauli_action(p: Pauli, bit: bool) -> (bool, Complex64) {
    match (p, bit) {
        (Pauli::X, _) => (true, Complex64::new(1.0, 0.0)),
        (Pauli::Y, false) => (true, Complex64::new(0.0, 1.0)),
        (Pauli::Y, true) => (true, Complex64::new(0.0, -1.0)),
        (Pauli::Z, false) => (false, Complex64::new(1.0, 0.0)),
        (Pauli::Z, true) => (false, Complex64::new(-1.0, 0.0)),
    }
}

/// Applies `sigma_p` on qubit `site` of an `n`-qubit register.
pub fn apply_pauli(v: &Amplitudes, n: u32, site: u32, p: Pauli) -> Amplitudes {
    let mask = 1usize << (n - 1 - site);
    let mut out = Amplitudes::from_element(v.len(), ZERO);
    for (idx, &amp) in v.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let (flip, f) = pauli_action(p, idx & mask != 0);
        let target = if flip { idx ^ mask } else { idx };
        out[target] += f * amp;
    }
    out
}

/// `sum_{s in sites} sigma_p^{(s)} / 2`.
pub fn apply_collective(v: &Amplitudes, n: u32, sites: std::ops::Range<u32>, p: Pauli) -> Amplitudes {
    let mut out = Amplitudes::from_element(v.len(), ZERO);
    for s in sites {
        out += apply_pauli(v, n, s, p) * Complex64::new(0.5, 0.0);
    }
    out
}

/// `N` qubits with the first `Na` assigned to well a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitSpace {
    na: u32,
    nb: u32,
}

/// Which part of the register a collective operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    A,
    B,
    Plus,
    Minus,
}

impl QubitSpace {
    pub fn new(na: u32, nb: u32) -> Result<Self> {
        if na == 0 || nb == 0 {
            return Err(Error::EmptyWell { na, nb });
        }
        if na + nb > MAX_QUBITS {
            return Err(Error::Domain(format!("qubit oracle limited to N <= {MAX_QUBITS}, got {}", na + nb)));
        }
        Ok(Self { na, nb })
    }

    pub fn n(&self) -> u32 {
        self.na + self.nb
    }

    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    pub fn sites_a(&self) -> std::ops::Range<u32> {
        0..self.na
    }

    pub fn sites_b(&self) -> std::ops::Range<u32> {
        self.na..self.n()
    }

    pub fn apply(&self, v: &Amplitudes, p: Pauli, part: Part) -> Amplitudes {
        let n = self.n();
        match part {
            Part::A => apply_collective(v, n, self.sites_a(), p),
            Part::B => apply_collective(v, n, self.sites_b(), p),
            Part::Plus => apply_collective(v, n, 0..n, p),
            Part::Minus => apply_collective(v, n, self.sites_a(), p) - apply_collective(v, n, self.sites_b(), p),
        }
    }

    /// `<v| O_1 O_2 ... O_k |v>` for a product of collective operators.
    pub fn expect(&self, v: &Amplitudes, product: &[(Pauli, Part)]) -> Complex64 {
        let mut w = v.clone();
        for &(p, part) in product.iter().rev() {
            w = self.apply(&w, p, part);
        }
        v.dotc(&w)
    }

    pub fn variance(&self, v: &Amplitudes, p: Pauli, part: Part) -> f64 {
        let w = self.apply(v, p, part);
        w.norm_squared() - v.dotc(&w).re.powi(2)
    }

    pub fn covariance(&self, v: &Amplitudes, (p, q): (Pauli, Pauli), (x, y): (Part, Part)) -> f64 {
        let wx = self.apply(v, p, x);
        let wy = self.apply(v, q, y);
        wx.dotc(&wy).re - v.dotc(&wx).re * v.dotc(&wy).re
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Equal superposition of all `N`-bit strings with `m` ones.
pub fn brute_dicke(n: u32, m: u32) -> Result<Amplitudes> {
    if m > n || n > MAX_QUBITS {
        return Err(Error::Domain(format!("brute_dicke needs 0 <= m <= N <= {MAX_QUBITS}, got N={n}, m={m}")));
    }
    let w = Complex64::new(binom(n, m).powf(-0.5), 0.0);
    Ok(Amplitudes::from_iterator(1 << n, (0..1usize << n).map(|i| if i.count_ones() == m { w } else { ZERO })))
}

/// Applies `sigma_p` on every site of well b.
pub fn brute_flip(space: QubitSpace, v: &Amplitudes, p: Pauli) -> Amplitudes {
    space.sites_b().fold(v.clone(), |w, s| apply_pauli(&w, space.n(), s, p))
}

pub fn brute_ghz(space: QubitSpace) -> Amplitudes {
    let mut v = Amplitudes::from_element(space.dim(), ZERO);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = h;
    v[space.dim() - 1] = h;
    v
}

/// Qubit amplitudes of a two-well state: `|j_a, m_a> (x) |j_b, m_b>` becomes
/// the product of local Dicke states with `j - m` excitations.
pub fn embed_amplitudes(state: &StateVector) -> Result<Amplitudes> {
    let q = QubitSpace::new(state.space().na(), state.space().nb())?;
    let (na, nb) = (q.na, q.nb);
    let amps = state.amplitudes();
    let mut v = Amplitudes::from_element(q.dim(), ZERO);
    let low_mask = (1usize << nb) - 1;
    for idx in 0..q.dim() {
        let ka = (idx >> nb).count_ones();
        let kb = (idx & low_mask).count_ones();
        let c = amps[ka as usize * (nb as usize + 1) + kb as usize];
        v[idx] = c / (binom(na, ka) * binom(nb, kb)).sqrt();
    }
    Ok(v)
}

/// One value computed by brute force and by the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub brute: f64,
    pub reference: f64,
}

impl Comparison {
    pub fn discrepancy(&self) -> f64 {
        (self.brute - self.reference).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub na: u32,
    pub nb: u32,
    pub comparisons: Vec<Comparison>,
    pub max_discrepancy: f64,
}

impl OracleReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_discrepancy <= tol
    }
}

struct Collector(Vec<Comparison>);

impl Collector {
    fn push(&mut self, label: impl Into<String>, brute: f64, reference: f64) {
        self.0.push(Comparison { label: label.into(), brute, reference });
    }
}

fn qfi_rows(q: QubitSpace, v: &Amplitudes) -> ([f64; 3], [f64; 3]) {
    let mut plus = [0.0; 3];
    let mut minus = [0.0; 3];
    for (k, p) in Pauli::ALL.into_iter().enumerate() {
        plus[k] = 4.0 * q.variance(v, p, Part::Plus);
        minus[k] = 4.0 * q.variance(v, p, Part::Minus);
    }
    (plus, minus)
}

fn push_rows(c: &mut Collector, name: &str, q: QubitSpace, v: &Amplitudes, rows: &QfiRows) {
    let (plus, minus) = qfi_rows(q, v);
    c.push(format!("{name} F[J_z+]"), plus[2], to_f64(rows.jz));
    c.push(format!("{name} F[J_x+]"), plus[0], to_f64(rows.in_plane));
    c.push(format!("{name} F[J_y+]"), plus[1], to_f64(rows.in_plane));
    c.push(format!("{name} F[J_z-]"), minus[2], to_f64(rows.jz_minus));
    c.push(format!("{name} F[J_x-]"), minus[0], to_f64(rows.in_plane_minus));
    c.push(format!("{name} F[J_y-]"), minus[1], to_f64(rows.in_plane_minus));
}

/// Compares every closed form that applies at `(Na, Nb)` with the qubit-space value.
pub fn brute_qfi_suite(na: u32, nb: u32) -> Result<OracleReport> {
    let q = QubitSpace::new(na, nb)?;
    let n = q.n();
    if n % 2 == 1 {
        return Err(Error::OddTotal(n));
    }
    let dicke = brute_dicke(n, n / 2)?;
    let fdicke = brute_flip(q, &dicke, Pauli::Z);
    let ghz = brute_ghz(q);
    let fghz = brute_flip(q, &ghz, Pauli::X);
    let mut c = Collector(Vec::new());

    if let Ok(table) = closed_form::qfi_table(na, nb) {
        push_rows(&mut c, "GHZ", q, &ghz, &table.ghz);
        push_rows(&mut c, "flipped GHZ", q, &fghz, &table.flipped_ghz);
        push_rows(&mut c, "Dicke", q, &dicke, &table.dicke);
        push_rows(&mut c, "flipped Dicke", q, &fdicke, &table.flipped_dicke);
    }

    let (_, minus) = qfi_rows(q, &fdicke);
    c.push("flipped Dicke sum_l F[J_l-]", minus.iter().sum(), to_f64(closed_form::flipped_dicke_gradient_sum(na, nb)?));

    let f00 = 4.0 * q.variance(&fdicke, Pauli::Y, Part::Plus);
    let f11 = 4.0 * q.variance(&fdicke, Pauli::Y, Part::Minus);
    let f01 = 4.0 * q.covariance(&fdicke, (Pauli::Y, Pauli::Y), (Part::Plus, Part::Minus));
    let bound = if f00.abs() < 1e-10 { f11 } else { f11 - f01 * f01 / f00 };
    c.push("flipped Dicke bound_b1 (y)", bound, to_f64(closed_form::flipped_dicke_bound_b1(na, nb)?));

    let local = closed_form::flipped_dicke_local_qfis(na, nb)?;
    c.push("flipped Dicke F[J_ya]", 4.0 * q.variance(&fdicke, Pauli::Y, Part::A), to_f64(local.a));
    c.push("flipped Dicke F[J_yb]", 4.0 * q.variance(&fdicke, Pauli::Y, Part::B), to_f64(local.b));
    c.push(
        "flipped Dicke F[J_ya, J_yb]",
        4.0 * q.covariance(&fdicke, (Pauli::Y, Pauli::Y), (Part::A, Part::B)),
        to_f64(local.ab),
    );

    if n > 3 {
        push_moments(&mut c, q, &fdicke, na, nb)?;
    }

    let max_discrepancy = c.0.iter().map(Comparison::discrepancy).fold(0.0, f64::max);
    Ok(OracleReport { na, nb, comparisons: c.0, max_discrepancy })
}

fn push_moments(c: &mut Collector, q: QubitSpace, v: &Amplitudes, na: u32, nb: u32) -> Result<()> {
    use Part::{A, B};
    use Pauli::{X, Y, Z};
    let m = closed_form::flipped_dicke_moments(na, nb)?;
    let e = |prod: &[(Pauli, Part)]| q.expect(v, prod).re;
    c.push("<J_za^2>", e(&[(Z, A), (Z, A)]), to_f64(m.jz_r2));
    c.push("<J_zb^2>", e(&[(Z, B), (Z, B)]), to_f64(m.jz_r2));
    c.push("<J_za J_zb>", e(&[(Z, A), (Z, B)]), to_f64(m.jza_jzb));
    c.push("<J_xa^2>", e(&[(X, A), (X, A)]), to_f64(m.jl_a2));
    c.push("<J_xb^2>", e(&[(X, B), (X, B)]), to_f64(m.jl_b2));
    c.push("<J_xa J_xb>", e(&[(X, A), (X, B)]), to_f64(m.jla_jlb));
    let total: f64 = Pauli::ALL.into_iter().map(|p| e(&[(p, Part::Plus), (p, Part::Plus)])).sum();
    c.push("<J^2>", total, to_f64(m.total_spin2));
    c.push("<J_za^2 J_zb^2>", e(&[(Z, A), (Z, A), (Z, B), (Z, B)]), to_f64(m.jza2_jzb2));
    c.push("<J_xa^2 J_zb^2>", e(&[(X, A), (X, A), (Z, B), (Z, B)]), to_f64(m.jla2_jzb2));
    c.push("<J_za^2 J_xb^2>", e(&[(Z, A), (Z, A), (X, B), (X, B)]), to_f64(m.jza2_jlb2));
    c.push("2<J_za J_xa J_xb J_zb>", 2.0 * e(&[(Z, A), (X, A), (X, B), (Z, B)]), to_f64(m.twice_zxxz));

    // M = J_za J_xb - J_xa J_zb, G = J_ya - J_yb
    let mv = q.apply(&q.apply(v, X, B), Z, A) - q.apply(&q.apply(v, Z, B), X, A);
    let gv = q.apply(v, Y, Part::Minus);
    let mean = v.dotc(&mv).re;
    let second = mv.norm_squared();
    let slope = -2.0 * gv.dotc(&mv).im;
    c.push("<M>", mean, to_f64(m.m_mean));
    c.push("<M^2>", second, to_f64(m.m_second));
    c.push("Var(M)", second - mean * mean, to_f64(closed_form::moment_variance(na, nb)?));
    c.push("|d<M>/db1|", slope.abs(), to_f64(m.slope_magnitude));
    c.push("epf", slope * slope / (second - mean * mean), to_f64(closed_form::moment_epf(na, nb)?));
    Ok(())
}

/// Runs the suite for every even-`N` pair with `N <= max_n`.
pub fn suite_up_to(max_n: u32) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for n in (2..=max_n.min(MAX_QUBITS)).step_by(2) {
        for na in 1..=n / 2 {
            out.push(brute_qfi_suite(na, n - na)?);
        }
    }
    Ok(out)
}
