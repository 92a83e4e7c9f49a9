//! `reduce`: march the stationary profile system of a separable member
//! from anchor values across a span, with dense samples to CSV. Poles and
//! step stalls are reported as halt reasons, not errors: several catalog
//! profiles genuinely blow up at finite radius.

use std::path::Path;

use nldirac::{reduce, Complex64};

use crate::config::Layers;
use crate::failure::{CliResult, Failure};
use crate::report::{write_profile, write_resolved_config, Report};

pub const KEYS: &[&str] = &[
    "epsilon",
    "wavenumber",
    "s-min",
    "s-max",
    "samples",
    "chi-plus-re",
    "chi-plus-im",
    "chi-minus-re",
    "chi-minus-im",
    "out",
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
    "abs-tol",
    "rel-tol",
    "max-steps",
    "pole-threshold",
];

pub fn run(cfg: &Layers) -> CliResult<i32> {
    let spec = super::model_from(cfg)?;
    let epsilon = cfg.f64("epsilon", spec.mass)?;
    let wavenumber = cfg.f64("wavenumber", 0.0)?;
    let system = reduce(&spec, epsilon, wavenumber)?;

    let s_min = cfg.f64("s-min", 0.5)?;
    let s_max = cfg.f64("s-max", 4.0)?;
    let samples = cfg.usize("samples", 33)?;
    if samples < 2 {
        return Err(Failure::input("key 'samples': at least 2 samples are required"));
    }
    let chi0 = [
        Complex64::new(cfg.f64("chi-plus-re", 0.1)?, cfg.f64("chi-plus-im", 0.0)?),
        Complex64::new(cfg.f64("chi-minus-re", 0.1)?, cfg.f64("chi-minus-im", 0.0)?),
    ];
    let opts = super::ivp_options_from(cfg)?;

    let sample_at: Vec<f64> = (0..samples)
        .map(|j| s_min + (s_max - s_min) * j as f64 / (samples - 1) as f64)
        .collect();
    let solution = system.integrate((s_min, s_max), chi0, &sample_at, &opts)?;

    let mut report = Report::new("reduce");
    report.push("model", spec.equation.to_string());
    report.push_num("epsilon", epsilon);
    report.push_num("wavenumber", wavenumber);
    report.push("halt", solution.halt.label());
    report.push_num("s-end", solution.s_end);
    report.push("accepted", solution.accepted.to_string());
    report.push("rejected", solution.rejected.to_string());
    report.push("samples-written", solution.samples.len().to_string());

    if let Some(path) = cfg.str_opt("out") {
        write_profile(Path::new(&path), &solution.samples)?;
        report.push("profile-file", path);
    }
    report.push_config(&cfg.resolved_pairs());
    report.print();
    if let Some(dir) = cfg.str_opt("out-dir") {
        let dir = Path::new(&dir);
        std::fs::create_dir_all(dir)?;
        report.write_to(&dir.join("report.txt"))?;
        write_resolved_config(&dir.join("resolved.cfg"), &cfg.resolved_pairs())?;
    }
    Ok(0)
}
