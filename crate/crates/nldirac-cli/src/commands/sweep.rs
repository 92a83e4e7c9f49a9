//! `sweep`: integrate one catalog family over a grid of constants and
//! compare each march against its closed form. Tuples run on a worker
//! pool; rows come out in deterministic product order, and per-tuple
//! failures are recorded in their row rather than aborting the sweep.

use std::path::Path;

use rayon::prelude::*;

use nldirac::solutions::expected_assignment;
use nldirac::{CatalogRow, ClosedFormSolution, IvpOptions, RowConstants};

use crate::config::Layers;
use crate::failure::{CliResult, Failure};
use crate::report::num;

pub const KEYS: &[&str] = &[
    "row",
    "params",
    "s-min",
    "s-max",
    "samples",
    "out",
    "abs-tol",
    "rel-tol",
    "max-steps",
    "pole-threshold",
];

struct Axis {
    name: String,
    values: Vec<f64>,
}

/// `params` holds semicolon-separated groups `name=v1,v2,...`; flag form
/// `--param` appends one group per occurrence.
fn parse_axes(text: &str) -> CliResult<Vec<Axis>> {
    let mut axes = Vec::new();
    for group in text.split(';') {
        let group = group.trim();
        if group.is_empty() {
            continue;
        }
        let (name, list) = group.split_once('=').ok_or_else(|| {
            Failure::input(format!("key 'params': '{group}' is not name=v1,v2,..."))
        })?;
        let name = name.trim().to_string();
        let list = list.trim();
        let values = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| {
                        Failure::input(format!("key 'params': '{v}' is not a number"))
                    })
                })
                .collect::<CliResult<Vec<f64>>>()?
        };
        axes.push(Axis { name, values });
    }
    Ok(axes)
}

fn allowed_params(row: CatalogRow) -> &'static [&'static str] {
    match row {
        CatalogRow::One => &["c", "beta-plus", "beta-minus"],
        CatalogRow::Two => &["c1", "c2", "alpha-minus"],
        CatalogRow::Three => &["mass", "alpha-w"],
        CatalogRow::Four => &["mass", "alpha-plus"],
    }
}

fn apply(constants: RowConstants, name: &str, value: f64) -> RowConstants {
    match (constants, name) {
        (RowConstants::One { beta_plus, beta_minus, .. }, "c") => {
            RowConstants::One { c: value, beta_plus, beta_minus }
        }
        (RowConstants::One { c, beta_minus, .. }, "beta-plus") => {
            RowConstants::One { c, beta_plus: value, beta_minus }
        }
        (RowConstants::One { c, beta_plus, .. }, "beta-minus") => {
            RowConstants::One { c, beta_plus, beta_minus: value }
        }
        (RowConstants::Two { c2, alpha_minus, .. }, "c1") => {
            RowConstants::Two { c1: value, c2, alpha_minus }
        }
        (RowConstants::Two { c1, alpha_minus, .. }, "c2") => {
            RowConstants::Two { c1, c2: value, alpha_minus }
        }
        (RowConstants::Two { c1, c2, .. }, "alpha-minus") => {
            RowConstants::Two { c1, c2, alpha_minus: value }
        }
        (RowConstants::Three { alpha_w, .. }, "mass") => {
            RowConstants::Three { mass: value, alpha_w }
        }
        (RowConstants::Three { mass, .. }, "alpha-w") => {
            RowConstants::Three { mass, alpha_w: value }
        }
        (RowConstants::Four { alpha_plus, .. }, "mass") => {
            RowConstants::Four { mass: value, alpha_plus }
        }
        (RowConstants::Four { mass, .. }, "alpha-plus") => {
            RowConstants::Four { mass, alpha_plus: value }
        }
        (same, _) => same,
    }
}

/// Integrate one tuple from the closed form's own anchor and report the
/// worst deviation over the achieved samples. Everything non-fatal becomes
/// row text.
fn run_tuple(
    row: CatalogRow,
    constants: RowConstants,
    span: (f64, f64),
    sample_at: &[f64],
    opts: &IvpOptions,
) -> (String, String, String, String) {
    let solution = match ClosedFormSolution::new(constants) {
        Ok(sol) => sol,
        Err(err) => return ("invalid".into(), String::new(), String::new(), err.to_string()),
    };
    let assignment = expected_assignment(row);
    let anchor = match solution.evaluate(span.0) {
        Ok(sample) => sample,
        Err(err) => return ("invalid".into(), String::new(), String::new(), err.to_string()),
    };
    let (chi0, _) = anchor.assigned(assignment);
    let outcome = solution.system().integrate(span, chi0, sample_at, opts);
    let sol = match outcome {
        Ok(sol) => sol,
        Err(err) => return ("error".into(), String::new(), String::new(), err.to_string()),
    };
    let mut deviation = 0.0f64;
    for &(s, value) in &sol.samples {
        match solution.evaluate(s) {
            Ok(exact) => {
                let (chi, _) = exact.assigned(assignment);
                deviation = deviation
                    .max((value[0] - chi[0]).norm())
                    .max((value[1] - chi[1]).norm());
            }
            Err(err) => {
                return ("error".into(), sol.halt.label().into(), String::new(), err.to_string());
            }
        }
    }
    if sol.halt.reached_end() {
        ("ok".into(), sol.halt.label().into(), num(deviation), String::new())
    } else {
        let note = format!("s-reached = {}", num(sol.s_end));
        ("halted".into(), sol.halt.label().into(), num(deviation), note)
    }
}

pub fn run(cfg: &Layers) -> CliResult<i32> {
    let row = CatalogRow::from_index(cfg.usize("row", 4)? as u8)?;
    let axes = parse_axes(&cfg.str("params", ""))?;
    for axis in &axes {
        if !allowed_params(row).contains(&axis.name.as_str()) {
            return Err(Failure::input(format!(
                "key 'params': '{}' is not a constant of row {} (one of {})",
                axis.name,
                row.index(),
                allowed_params(row).join(", ")
            )));
        }
    }
    let s_min = cfg.f64("s-min", 0.5)?;
    let s_max = cfg.f64("s-max", 4.0)?;
    let samples = cfg.usize("samples", 9)?.max(2);
    let opts = super::ivp_options_from(cfg)?;
    let sample_at: Vec<f64> = (0..samples)
        .map(|j| s_min + (s_max - s_min) * j as f64 / (samples - 1) as f64)
        .collect();

    let mut header = String::from("row");
    for axis in &axes {
        header.push(',');
        header.push_str(&axis.name);
    }
    header.push_str(",outcome,halt,max_deviation,note\n");

    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let tuples: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            // Mixed-radix decomposition, first axis varying slowest.
            let mut tuple = vec![0.0; axes.len()];
            for (slot, axis) in tuple.iter_mut().zip(&axes).rev() {
                *slot = axis.values[idx % axis.values.len()];
                idx /= axis.values.len();
            }
            tuple
        })
        .collect();

    let rows: Vec<String> = tuples
        .par_iter()
        .map(|tuple| {
            let mut constants = RowConstants::defaults(row);
            for (axis, &value) in axes.iter().zip(tuple) {
                constants = apply(constants, &axis.name, value);
            }
            let (outcome, halt, deviation, note) =
                run_tuple(row, constants, (s_min, s_max), &sample_at, &opts);
            let mut line = row.index().to_string();
            for &value in tuple {
                line.push(',');
                line.push_str(&num(value));
            }
            for field in [outcome, halt, deviation, note] {
                line.push(',');
                line.push_str(&field.replace(',', ";"));
            }
            line.push('\n');
            line
        })
        .collect();

    let mut csv = header;
    for line in rows {
        csv.push_str(&line);
    }
    match cfg.str_opt("out") {
        Some(path) => std::fs::write(Path::new(&path), csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}
