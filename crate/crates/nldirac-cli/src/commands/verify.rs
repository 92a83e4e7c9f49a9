//! `verify-table1`: check the closed-form catalog rows against their
//! reduced systems at interior probes and report per-row verdicts.

use nldirac::{verify_row, CatalogRow, ClosedFormSolution, RadicalScope, RowConstants};

use crate::config::Layers;
use crate::failure::{CliResult, Failure};
use crate::report::{num, Report};

pub const KEYS: &[&str] = &[
    "rows",
    "tolerance",
    "row1-linear-radical",
    "out-dir",
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

fn parse_rows(text: &str) -> CliResult<Vec<CatalogRow>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|part| {
            let idx: u8 = part
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("key 'rows': '{part}' is not a row index")))?;
            CatalogRow::from_index(idx).map_err(Failure::from)
        })
        .collect()
}

/// Row constants: the catalog defaults overridden by any `rowN.*` keys.
pub(crate) fn row_constants(cfg: &Layers, row: CatalogRow) -> CliResult<RowConstants> {
    Ok(match RowConstants::defaults(row) {
        RowConstants::One { c, beta_plus, beta_minus } => RowConstants::One {
            c: cfg.f64("row1.c", c)?,
            beta_plus: cfg.f64("row1.beta-plus", beta_plus)?,
            beta_minus: cfg.f64("row1.beta-minus", beta_minus)?,
        },
        RowConstants::Two { c1, c2, alpha_minus } => RowConstants::Two {
            c1: cfg.f64("row2.c1", c1)?,
            c2: cfg.f64("row2.c2", c2)?,
            alpha_minus: cfg.f64("row2.alpha-minus", alpha_minus)?,
        },
        RowConstants::Three { mass, alpha_w } => RowConstants::Three {
            mass: cfg.f64("row3.mass", mass)?,
            alpha_w: cfg.f64("row3.alpha-w", alpha_w)?,
        },
        RowConstants::Four { mass, alpha_plus } => RowConstants::Four {
            mass: cfg.f64("row4.mass", mass)?,
            alpha_plus: cfg.f64("row4.alpha-plus", alpha_plus)?,
        },
    })
}

pub fn run(cfg: &Layers) -> CliResult<i32> {
    let rows = parse_rows(&cfg.str("rows", "1,2,3,4"))?;
    let tolerance = cfg.f64("tolerance", 1e-10)?;
    let linear_radical = cfg.bool("row1-linear-radical", false)?;
    let out_dir = cfg.str_opt("out-dir");

    let mut report = Report::new("verify-table1");
    let mut all_pass = true;
    for &row in &rows {
        let constants = row_constants(cfg, row)?;
        let scope = if row == CatalogRow::One && linear_radical {
            RadicalScope::LinearRadius
        } else {
            RadicalScope::SqrtRadius
        };
        let solution = ClosedFormSolution::with_scope(constants, scope)?;
        let probes = solution.default_probes();
        let verdict = verify_row(&solution, &probes, tolerance, None)?;

        let tag = format!("row{}", row.index());
        report.push(format!("{tag}.model"), row.equation().to_string());
        report.push(
            format!("{tag}.probes"),
            probes.iter().map(|p| num(*p)).collect::<Vec<_>>().join(","),
        );
        report.push_num(format!("{tag}.probe-min"), probes[0]);
        report.push_num(format!("{tag}.probe-max"), probes[probes.len() - 1]);
        report.push(format!("{tag}.assignment"), verdict.chosen.label());
        report.push_num(format!("{tag}.max-residual"), verdict.max_relative_residual);
        report.push_num(format!("{tag}.printed-max"), verdict.printed_max);
        report.push_num(format!("{tag}.swapped-max"), verdict.swapped_max);
        report.push_bool(format!("{tag}.pass"), verdict.pass);
        all_pass &= verdict.pass;
    }
    report.push_bool("overall.pass", all_pass);
    report.push_config(&cfg.resolved_pairs());
    report.print();
    if let Some(dir) = out_dir {
        let dir = std::path::Path::new(&dir);
        std::fs::create_dir_all(dir)?;
        report.write_to(&dir.join("report.txt"))?;
        crate::report::write_resolved_config(&dir.join("resolved.cfg"), &cfg.resolved_pairs())?;
    }
    Ok(if all_pass { 0 } else { 2 })
}
