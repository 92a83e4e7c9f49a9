//! `residual`: pointwise defect tables. Two sources: a catalog closed form
//! probed on its reduced system with exact derivatives, or a field CSV
//! treated as a stationary candidate of frequency `epsilon`, whose defect
//! is `epsilon psi - H(psi) psi` on the reconstructed grid.

use std::path::Path;

use nldirac::{
    rhs, CatalogRow, ClosedFormSolution, Complex64, ComponentAssignment, DerivativeOperator, Grid,
};

use crate::config::Layers;
use crate::failure::{CliResult, Failure};
use crate::report::{append_snapshot, field_header, read_field_csv, Report};

pub const KEYS: &[&str] = &[
    "solution",
    "field",
    "assignment",
    "probes",
    "tolerance",
    "report-only",
    "epsilon",
    "order",
    "boundary",
    "out-dir",
    "model",
    "mass",
    "policy",
    "alpha-s",
    "alpha-v",
    "alpha-u",
    "alpha-w",
    "alpha-plus",
    "alpha-minus",
    "beta-plus",
    "beta-minus",
    "row1.c",
    "row1.beta-plus",
    "row1.beta-minus",
    "row2.c1",
    "row2.c2",
    "row2.alpha-minus",
    "row3.mass",
    "row3.alpha-w",
    "row4.mass",
    "row4.alpha-plus",
];

fn parse_row(text: &str) -> CliResult<CatalogRow> {
    let idx = text
        .strip_prefix("row")
        .and_then(|rest| rest.parse::<u8>().ok())
        .ok_or_else(|| {
            Failure::input(format!("key 'solution': '{text}' is not row1, row2, row3, or row4"))
        })?;
    CatalogRow::from_index(idx).map_err(Failure::from)
}

fn assignment_from(cfg: &Layers, row: CatalogRow) -> CliResult<ComponentAssignment> {
    match cfg.str("assignment", "expected").as_str() {
        "printed" => Ok(ComponentAssignment::Printed),
        "swapped" => Ok(ComponentAssignment::Swapped),
        "expected" => Ok(nldirac::solutions::expected_assignment(row)),
        other => Err(Failure::input(format!(
            "key 'assignment': '{other}' is not printed, swapped, or expected"
        ))),
    }
}

fn solution_residuals(cfg: &Layers, report: &mut Report) -> CliResult<(f64, f64)> {
    let row = parse_row(&cfg.str_opt("solution").expect("caller checked"))?;
    let constants = super::verify::row_constants(cfg, row)?;
    let solution = ClosedFormSolution::new(constants)?;
    let assignment = assignment_from(cfg, row)?;
    let probes = match cfg.str_opt("probes") {
        Some(_) => cfg.f64_list("probes", "")?,
        None => solution.default_probes(),
    };
    if probes.is_empty() {
        return Err(Failure::input("key 'probes': at least one probe is required"));
    }
    let system = solution.system();

    report.push("source", format!("row{}", row.index()));
    report.push("model", row.equation().to_string());
    report.push("assignment", assignment.label());
    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    for (j, &s) in probes.iter().enumerate() {
        let sample = solution.evaluate(s)?;
        let (chi, dchi) = sample.assigned(assignment);
        let defect = system.residual_at(s, chi, dchi)?;
        let magnitude = defect[0].norm().max(defect[1].norm());
        let scale = 1.0f64.max(chi[0].norm()).max(chi[1].norm());
        let tag = format!("probe.{}", j + 1);
        report.push_num(format!("{tag}.s"), s);
        report.push_num(format!("{tag}.res-plus"), defect[0].norm());
        report.push_num(format!("{tag}.res-minus"), defect[1].norm());
        report.push_num(format!("{tag}.magnitude"), magnitude);
        report.push_num(format!("{tag}.scale"), scale);
        max_abs = max_abs.max(magnitude);
        max_rel = max_rel.max(magnitude / scale);
    }
    Ok((max_abs, max_rel))
}

fn field_residuals(cfg: &Layers, report: &mut Report) -> CliResult<(f64, f64)> {
    let path_text = cfg.str_opt("field").expect("caller checked");
    let periodic = super::boundary_from(cfg)? == nldirac::Boundary::Periodic;
    let file = read_field_csv(Path::new(&path_text), periodic)?;
    let spec = super::model_from(cfg)?;
    if spec.coords() != file.coords {
        return Err(Failure::input(format!(
            "field file is {:?} but {} lives in {:?} coordinates",
            file.coords, spec.equation, spec.coords()
        )));
    }
    let epsilon = cfg.f64("epsilon", 0.0)?;
    let op = DerivativeOperator::new(super::order_from(cfg)?);

    // i d/dt of a stationary candidate is eps psi, and H psi = i rhs, so
    // the defect is eps psi - i rhs.
    let tendency = rhs(&spec, &file.state, &op)?;
    let state = &file.state;
    let mut residual_plus = Vec::with_capacity(state.len());
    let mut residual_minus = Vec::with_capacity(state.len());
    for k in 0..state.len() {
        residual_plus.push(epsilon * state.plus()[k] - Complex64::I * tendency.plus[k]);
        residual_minus.push(epsilon * state.minus()[k] - Complex64::I * tendency.minus[k]);
    }
    let max_abs = residual_plus
        .iter()
        .chain(&residual_minus)
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let scale = 1.0f64.max(state.max_abs());

    report.push("source", path_text);
    report.push("model", spec.equation.to_string());
    report.push_num("epsilon", epsilon);
    report.push("nodes", state.len().to_string());
    report.push_num("field-max-abs", state.max_abs());

    if let Some(dir) = cfg.str_opt("out-dir") {
        let dir = Path::new(&dir);
        std::fs::create_dir_all(dir)?;
        let grid = match state.grid() {
            Grid::Two(g) => *g,
            Grid::One(_) => unreachable!("field files always carry 2D grids"),
        };
        let residual_state = nldirac::SpinorState::new(
            Grid::Two(grid),
            residual_plus,
            residual_minus,
            state.time(),
        )?;
        let mut text = String::from(field_header(file.coords));
        text.push('\n');
        append_snapshot(&mut text, &residual_state)?;
        std::fs::write(dir.join("residual.csv"), text)?;
        report.push("residual-file", dir.join("residual.csv").display().to_string());
    }
    Ok((max_abs, max_abs / scale))
}

pub fn run(cfg: &Layers) -> CliResult<i32> {
    let has_solution = cfg.str_opt("solution").is_some();
    let has_field = cfg.str_opt("field").is_some();
    if has_solution == has_field {
        return Err(Failure::input(
            "exactly one of 'solution' (row1..row4) or 'field' (CSV path) is required",
        ));
    }
    let tolerance = cfg.f64("tolerance", 1e-10)?;
    let report_only = cfg.bool("report-only", false)?;

    let mut report = Report::new("residual");
    let (max_abs, max_rel) = if has_solution {
        solution_residuals(cfg, &mut report)?
    } else {
        field_residuals(cfg, &mut report)?
    };
    report.push_num("max-residual", max_abs);
    report.push_num("max-relative", max_rel);
    let pass = max_rel <= tolerance;
    if !report_only {
        report.push_bool("pass", pass);
    }
    report.push_config(&cfg.resolved_pairs());
    report.print();
    if let Some(dir) = cfg.str_opt("out-dir") {
        let dir = Path::new(&dir);
        std::fs::create_dir_all(dir)?;
        report.write_to(&dir.join("report.txt"))?;
        crate::report::write_resolved_config(&dir.join("resolved.cfg"), &cfg.resolved_pairs())?;
    }
    Ok(if report_only || pass { 0 } else { 2 })
}
