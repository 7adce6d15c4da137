use serde::Serialize;

use gradiometry::closed_form::{flipped_dicke_bound_b1, qfi_table, to_f64, QfiRows, Q};
use gradiometry::estimator::run_estimation;
use gradiometry::moments::sweep;
use gradiometry::optimal::{commutant_basis, optimal_precision};
use gradiometry::oracle::{suite_up_to, MAX_QUBITS};
use gradiometry::polytope::{classify_saturation, qfi_six_vector};
use gradiometry::qfi::{precision_bounds, qfi_matrix};
use gradiometry::states::{dicke_state, flipped_dicke_state, flipped_ghz_state, ghz_state};
use gradiometry::{Axis, EstimationConfig, PrecisionBounds, QfiMatrix2, StateKind, StateVector, TwoWellSpace};

use crate::output::emit;
use crate::{Failure, Output};

const AGREEMENT: f64 = 1e-9;
const ORACLE_TOLERANCE: f64 = 1e-9;

/// One numeric value next to its closed form.
#[derive(Debug, Serialize)]
struct Check {
    state: &'static str,
    quantity: String,
    numeric: f64,
    closed_form: f64,
    exact: String,
}

impl Check {
    fn new(state: &'static str, quantity: impl Into<String>, numeric: f64, exact: Q) -> Self {
        Self { state, quantity: quantity.into(), numeric, closed_form: to_f64(exact), exact: exact.to_string() }
    }

    fn agrees(&self) -> bool {
        (self.numeric - self.closed_form).abs() <= AGREEMENT * self.closed_form.abs().max(1.0)
    }
}

fn require_agreement(checks: &[Check]) -> Result<(), Failure> {
    match checks.iter().find(|c| !c.agrees()) {
        Some(c) => Err(Failure::Inconsistent(format!(
            "{} {}: numeric {} vs closed form {}",
            c.state, c.quantity, c.numeric, c.exact
        ))),
        None => Ok(()),
    }
}

fn table_rows(kind: StateKind, na: u32, nb: u32) -> Option<QfiRows> {
    let t = qfi_table(na, nb).ok()?;
    match kind {
        StateKind::Ghz => Some(t.ghz),
        StateKind::FlippedGhz => Some(t.flipped_ghz),
        StateKind::Dicke => Some(t.dicke),
        StateKind::FlippedDicke => Some(t.flipped_dicke),
        StateKind::ProductDicke => None,
    }
}

/// `4 F_a F_b / (F_a + F_b)` with `F_r = N_r (N_r + 2) / 2`.
fn product_dicke_bound(na: u32, nb: u32) -> Q {
    let local = |n: u32| Q::new((n * (n + 2)) as i128, 2);
    let (fa, fb) = (local(na), local(nb));
    Q::from(4) * fa * fb / (fa + fb)
}

#[derive(Debug, Serialize)]
struct BoundsReport {
    na: u32,
    nb: u32,
    state: StateKind,
    axis: Axis,
    qfi: QfiMatrix2,
    bounds: PrecisionBounds,
    checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
struct BoundsRow {
    na: u32,
    nb: u32,
    state: StateKind,
    axis: Axis,
    f00: f64,
    f01: f64,
    f11: f64,
    bound_b0: f64,
    bound_b1: f64,
}

pub fn bounds(na: u32, nb: u32, kind: StateKind, axis: Axis, out: &Output) -> Result<(), Failure> {
    let space = TwoWellSpace::new(na, nb)?;
    let psi = kind.prepare(space)?;
    let qfi = qfi_matrix(&psi, axis);
    let bounds = precision_bounds(&qfi)?;
    let label = kind.label();
    let mut checks = Vec::new();
    if let Some(rows) = table_rows(kind, na, nb) {
        let (plus, minus) = if axis == Axis::Z { (rows.jz, rows.jz_minus) } else { (rows.in_plane, rows.in_plane_minus) };
        checks.push(Check::new(label, "f00", qfi.f00, plus));
        checks.push(Check::new(label, "f11", qfi.f11, minus));
    }
    if axis != Axis::Z {
        match kind {
            StateKind::FlippedDicke => {
                checks.push(Check::new(label, "bound_b1", bounds.bound_b1, flipped_dicke_bound_b1(na, nb)?));
            }
            StateKind::ProductDicke => {
                checks.push(Check::new(label, "bound_b1", bounds.bound_b1, product_dicke_bound(na, nb)));
            }
            _ => {}
        }
    }
    let row = BoundsRow {
        na,
        nb,
        state: kind,
        axis,
        f00: qfi.f00,
        f01: qfi.f01,
        f11: qfi.f11,
        bound_b0: bounds.bound_b0,
        bound_b1: bounds.bound_b1,
    };
    let report = BoundsReport { na, nb, state: kind, axis, qfi, bounds, checks };
    emit(out, "bounds", &report, &[row])?;
    require_agreement(&report.checks)
}

#[derive(Debug, Serialize)]
struct TableReport {
    na: u32,
    nb: u32,
    entries: Vec<Check>,
}

pub fn table1(na: u32, nb: u32, out: &Output) -> Result<(), Failure> {
    let space = TwoWellSpace::new(na, nb)?;
    let table = qfi_table(na, nb)?;
    let states: [(&'static str, StateVector, QfiRows); 4] = [
        ("ghz", ghz_state(space), table.ghz),
        ("flipped-ghz", flipped_ghz_state(space), table.flipped_ghz),
        ("dicke", dicke_state(space)?, table.dicke),
        ("flipped-dicke", flipped_dicke_state(space)?, table.flipped_dicke),
    ];
    let mut entries = Vec::new();
    let mut in_plane_spread: f64 = 0.0;
    for (label, psi, rows) in &states {
        let six = qfi_six_vector(psi);
        in_plane_spread = in_plane_spread.max((six.plus[0] - six.plus[1]).abs()).max((six.minus[0] - six.minus[1]).abs());
        entries.push(Check::new(label, "F[J_z]", six.plus[2], rows.jz));
        entries.push(Check::new(label, "F[J_l]", six.plus[1], rows.in_plane));
        entries.push(Check::new(label, "F[J_z,-]", six.minus[2], rows.jz_minus));
        entries.push(Check::new(label, "F[J_l,-]", six.minus[1], rows.in_plane_minus));
    }
    let report = TableReport { na, nb, entries };
    emit(out, "table1", &report, &report.entries)?;
    if in_plane_spread > AGREEMENT {
        return Err(Failure::Inconsistent(format!("x and y QFIs differ by {in_plane_spread}")));
    }
    require_agreement(&report.entries)
}

#[derive(Debug, Serialize)]
struct HalfSpaceRow<'a> {
    id: &'a str,
    nx: f64,
    ny: f64,
    nz: f64,
    offset: f64,
    slack: f64,
    saturated: bool,
}

pub fn polytope(na: u32, nb: u32, kind: StateKind, out: &Output) -> Result<(), Failure> {
    let psi = kind.prepare(TwoWellSpace::new(na, nb)?)?;
    let report = classify_saturation(&psi)?;
    let rows: Vec<HalfSpaceRow> = report
        .model
        .halfspaces
        .iter()
        .map(|h| HalfSpaceRow {
            id: &h.id,
            nx: h.normal[0],
            ny: h.normal[1],
            nz: h.normal[2],
            offset: h.offset,
            slack: h.slack(report.state_point),
            saturated: report.saturated.contains(&h.id),
        })
        .collect();
    emit(out, "polytope", &report, &rows)?;
    let violation = qfi_six_vector(&psi).max_violation(na, nb);
    if violation > gradiometry::tolerance::SATURATION {
        return Err(Failure::Inconsistent(format!("state violates the QFI inequalities by {violation}")));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct EntryRow {
    m_y: f64,
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

pub fn optmeas(na: u32, nb: u32, kind: StateKind, reduced: bool, out: &Output) -> Result<(), Failure> {
    let space = TwoWellSpace::new(na, nb)?;
    let psi = kind.prepare(space)?;
    let basis = commutant_basis(space, reduced)?;
    let solution = optimal_precision(&psi, &basis)?;
    let export = solution.export();
    let rows: Vec<EntryRow> = export
        .blocks
        .iter()
        .flat_map(|b| {
            (0..b.size).flat_map(move |r| {
                (0..b.size).map(move |c| EntryRow { m_y: b.m_y, row: r, col: c, re: b.re[r][c], im: b.im[r][c] })
            })
        })
        .collect();
    emit(out, "optmeas", &export, &rows)?;
    let bound = precision_bounds(&qfi_matrix(&psi, Axis::Y))?.bound_b1;
    if solution.precision > bound * (1.0 + 1e-8) + 1e-8 {
        return Err(Failure::Inconsistent(format!(
            "optimal precision {} exceeds the Cramér-Rao bound {bound}",
            solution.precision
        )));
    }
    Ok(())
}

pub fn montecarlo(config: &EstimationConfig, out: &Output) -> Result<(), Failure> {
    let run = run_estimation(config, 0)?;
    let report = run.report();
    emit(out, "montecarlo", &report, &[&report])
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    max_n: u32,
    tolerance: f64,
    passed: bool,
    reports: Vec<gradiometry::oracle::OracleReport>,
}

#[derive(Debug, Serialize)]
struct ComparisonRow<'a> {
    na: u32,
    nb: u32,
    label: &'a str,
    brute: f64,
    reference: f64,
    discrepancy: f64,
}

pub fn verify(max_n: u32, out: &Output) -> Result<(), Failure> {
    if !(2..=MAX_QUBITS).contains(&max_n) {
        return Err(Failure::Usage(format!("--max-n must lie in 2..={MAX_QUBITS}, got {max_n}")));
    }
    let reports = suite_up_to(max_n)?;
    let passed = reports.iter().all(|r| r.passes(ORACLE_TOLERANCE));
    let worst = reports.iter().map(|r| r.max_discrepancy).fold(0.0, f64::max);
    let report = VerifyReport { max_n, tolerance: ORACLE_TOLERANCE, passed, reports };
    let rows: Vec<ComparisonRow> = report
        .reports
        .iter()
        .flat_map(|r| {
            r.comparisons.iter().map(move |c| ComparisonRow {
                na: r.na,
                nb: r.nb,
                label: &c.label,
                brute: c.brute,
                reference: c.reference,
                discrepancy: c.discrepancy(),
            })
        })
        .collect();
    emit(out, "verify", &report, &rows)?;
    if !passed {
        return Err(Failure::Inconsistent(format!("largest oracle discrepancy {worst}")));
    }
    Ok(())
}

pub fn moments(max_n: u32, out: &Output) -> Result<(), Failure> {
    if max_n < 4 {
        return Err(Failure::Usage(format!("--max-n must be at least 4, got {max_n}")));
    }
    let pairs: Vec<(u32, u32)> =
        (4..=max_n).step_by(2).flat_map(|n| (1..=n / 2).map(move |na| (na, n - na))).collect();
    let rows = sweep(&pairs)?;
    emit(out, "moments", &rows, &rows)
}
