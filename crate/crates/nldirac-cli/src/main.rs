//! `nldirac`: residual checks, catalog verification, time evolution,
//! stationary reductions, scaling covariance, and parameter sweeps for a
//! family of first-order nonlinear spinor models.
//!
//! Every parameter resolves through four layers, later ones winning:
//! built-in default, `--config` file (`key = value`, `#` comments),
//! `NLDIRAC_*` environment variable, explicit flag. Exit codes: 0 success,
//! 2 verification failure, 3 bad input, 4 numerical failure.

mod commands;
mod config;
mod failure;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use config::Layers;
use failure::CliResult;

#[derive(Parser)]
#[command(name = "nldirac", version, about = "Nonlinear spinor model toolbox")]
struct Cli {
    /// Config file with key = value lines; flags and NLDIRAC_* vars override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the closed-form solution catalog against its reduced systems.
    #[command(name = "verify-table1")]
    VerifyTable1(VerifyArgs),
    /// Evaluate pointwise residuals of a catalog solution or a field file.
    Residual(ResidualArgs),
    /// March a model in time, writing snapshot and diagnostics CSVs.
    Evolve(EvolveArgs),
    /// Integrate the stationary profile system of a separable member.
    Reduce(ReduceArgs),
    /// Measure residual covariance under the conformal field dilation.
    #[command(name = "scale-check")]
    ScaleCheck(ScaleArgs),
    /// Integrate a catalog family over a grid of constants, in parallel.
    Sweep(SweepArgs),
}

/// The model vocabulary shared by most subcommands. Values stay strings
/// here; the layered config parses them so that flag, file, and environment
/// inputs fail identically.
#[derive(Args, Default)]
struct ModelArgs {
    /// Model id: eq5, eq7, eq8a, eq8b, eq9, eq10, eq11a, eq11b, eq12, eq13.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    mass: Option<String>,
    /// Radicand handling: signed-sqrt, clamp-to-zero, error-on-negative.
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    alpha_s: Option<String>,
    #[arg(long)]
    alpha_v: Option<String>,
    #[arg(long)]
    alpha_u: Option<String>,
    #[arg(long)]
    alpha_w: Option<String>,
    #[arg(long)]
    alpha_plus: Option<String>,
    #[arg(long)]
    alpha_minus: Option<String>,
    #[arg(long)]
    beta_plus: Option<String>,
    #[arg(long)]
    beta_minus: Option<String>,
}

impl ModelArgs {
    fn flags(self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("model", self.model),
            ("mass", self.mass),
            ("policy", self.policy),
            ("alpha-s", self.alpha_s),
            ("alpha-v", self.alpha_v),
            ("alpha-u", self.alpha_u),
            ("alpha-w", self.alpha_w),
            ("alpha-plus", self.alpha_plus),
            ("alpha-minus", self.alpha_minus),
            ("beta-plus", self.beta_plus),
            ("beta-minus", self.beta_minus),
        ]
    }
}

/// Constants overrides for the four catalog rows.
#[derive(Args, Default)]
struct RowConstantArgs {
    #[arg(long)]
    row1_c: Option<String>,
    #[arg(long)]
    row1_beta_plus: Option<String>,
    #[arg(long)]
    row1_beta_minus: Option<String>,
    #[arg(long)]
    row2_c1: Option<String>,
    #[arg(long)]
    row2_c2: Option<String>,
    #[arg(long)]
    row2_alpha_minus: Option<String>,
    #[arg(long)]
    row3_mass: Option<String>,
    #[arg(long)]
    row3_alpha_w: Option<String>,
    #[arg(long)]
    row4_mass: Option<String>,
    #[arg(long)]
    row4_alpha_plus: Option<String>,
}

impl RowConstantArgs {
    fn flags(self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("row1.c", self.row1_c),
            ("row1.beta-plus", self.row1_beta_plus),
            ("row1.beta-minus", self.row1_beta_minus),
            ("row2.c1", self.row2_c1),
            ("row2.c2", self.row2_c2),
            ("row2.alpha-minus", self.row2_alpha_minus),
            ("row3.mass", self.row3_mass),
            ("row3.alpha-w", self.row3_alpha_w),
            ("row4.mass", self.row4_mass),
            ("row4.alpha-plus", self.row4_alpha_plus),
        ]
    }
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// Comma-separated subset of rows, e.g. "2,4"; empty for none.
    #[arg(long)]
    rows: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// Deliberately misread the row-1 argument as linear in the radius
    /// (a must-fail regression of the verifier itself).
    #[arg(long, action = ArgAction::SetTrue)]
    row1_linear_radical: bool,
    #[arg(long)]
    out_dir: Option<String>,
    #[command(flatten)]
    constants: RowConstantArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ResidualArgs {
    /// Catalog source: row1, row2, row3, or row4.
    #[arg(long, conflicts_with = "field")]
    solution: Option<String>,
    /// Field CSV path (one time slice, schema per the docs).
    #[arg(long)]
    field: Option<String>,
    /// Component assignment: printed, swapped, or expected.
    #[arg(long)]
    assignment: Option<String>,
    /// Comma-separated probe coordinates (solution mode).
    #[arg(long)]
    probes: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// Report residuals without a pass verdict; always exits 0.
    #[arg(long, action = ArgAction::SetTrue)]
    report_only: bool,
    /// Stationary frequency of a field-file candidate.
    #[arg(long)]
    epsilon: Option<String>,
    /// Stencil order (2 or 4) for field-file derivatives.
    #[arg(long)]
    order: Option<String>,
    /// Boundary used to rebuild a field-file grid: periodic or dirichlet.
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    constants: RowConstantArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvolveArgs {
    #[arg(long)]
    t_final: Option<String>,
    /// Number of marching segments; one snapshot is written after each.
    #[arg(long)]
    snapshots: Option<String>,
    /// Output directory for snapshots.csv, diagnostics.csv, resolved.cfg.
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    order: Option<String>,
    /// Initial data from a field CSV instead of the built-in packet.
    #[arg(long)]
    init_file: Option<String>,
    #[arg(long)]
    init_width: Option<String>,
    #[arg(long)]
    init_ratio: Option<String>,
    #[arg(long)]
    init_phase: Option<String>,
    #[arg(long)]
    init_center_x: Option<String>,
    #[arg(long)]
    init_center_y: Option<String>,
    #[arg(long)]
    init_center_r: Option<String>,
    #[arg(long)]
    init_winding: Option<String>,
    #[arg(long)]
    grid_n: Option<String>,
    #[arg(long)]
    box_min: Option<String>,
    #[arg(long)]
    box_max: Option<String>,
    #[arg(long)]
    grid_n_r: Option<String>,
    #[arg(long)]
    r_min: Option<String>,
    #[arg(long)]
    r_max: Option<String>,
    #[arg(long)]
    grid_n_theta: Option<String>,
    #[arg(long)]
    boundary: Option<String>,
    /// Time integrator: rk4 or rk45.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    cfl_factor: Option<String>,
    #[arg(long)]
    abs_tol: Option<String>,
    #[arg(long)]
    rel_tol: Option<String>,
    #[arg(long)]
    max_steps: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ReduceArgs {
    /// Mode energy of the stationary ansatz.
    #[arg(long)]
    epsilon: Option<String>,
    /// Divided-out wavenumber (k along y, or the azimuthal number).
    #[arg(long)]
    wavenumber: Option<String>,
    #[arg(long)]
    s_min: Option<String>,
    #[arg(long)]
    s_max: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    chi_plus_re: Option<String>,
    #[arg(long)]
    chi_plus_im: Option<String>,
    #[arg(long)]
    chi_minus_re: Option<String>,
    #[arg(long)]
    chi_minus_im: Option<String>,
    /// Profile CSV destination.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[arg(long)]
    abs_tol: Option<String>,
    #[arg(long)]
    rel_tol: Option<String>,
    #[arg(long)]
    max_steps: Option<String>,
    #[arg(long)]
    pole_threshold: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScaleArgs {
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// Catalog row whose family is swept (1..4).
    #[arg(long)]
    row: Option<String>,
    /// One sweep axis `name=v1,v2,...`; repeat for a product grid.
    #[arg(long = "param", action = ArgAction::Append)]
    params: Vec<String>,
    #[arg(long)]
    s_min: Option<String>,
    #[arg(long)]
    s_max: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Summary CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    abs_tol: Option<String>,
    #[arg(long)]
    rel_tol: Option<String>,
    #[arg(long)]
    max_steps: Option<String>,
    #[arg(long)]
    pole_threshold: Option<String>,
}

fn set_if(flag: bool) -> Option<String> {
    flag.then(|| "true".to_string())
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::VerifyTable1(args) => {
            let mut flags = vec![
                ("rows", args.rows),
                ("tolerance", args.tolerance),
                ("row1-linear-radical", set_if(args.row1_linear_radical)),
                ("out-dir", args.out_dir),
            ];
            flags.extend(args.constants.flags());
            let cfg = Layers::load(config, commands::verify::KEYS, flags)?;
            commands::verify::run(&cfg)
        }
        Command::Residual(args) => {
            let mut flags = vec![
                ("solution", args.solution),
                ("field", args.field),
                ("assignment", args.assignment),
                ("probes", args.probes),
                ("tolerance", args.tolerance),
                ("report-only", set_if(args.report_only)),
                ("epsilon", args.epsilon),
                ("order", args.order),
                ("boundary", args.boundary),
                ("out-dir", args.out_dir),
            ];
            flags.extend(args.model.flags());
            flags.extend(args.constants.flags());
            let cfg = Layers::load(config, commands::residual::KEYS, flags)?;
            commands::residual::run(&cfg)
        }
        Command::Evolve(args) => {
            let mut flags = vec![
                ("t-final", args.t_final),
                ("snapshots", args.snapshots),
                ("out-dir", args.out_dir),
                ("order", args.order),
                ("init-file", args.init_file),
                ("init-width", args.init_width),
                ("init-ratio", args.init_ratio),
                ("init-phase", args.init_phase),
                ("init-center-x", args.init_center_x),
                ("init-center-y", args.init_center_y),
                ("init-center-r", args.init_center_r),
                ("init-winding", args.init_winding),
                ("grid-n", args.grid_n),
                ("box-min", args.box_min),
                ("box-max", args.box_max),
                ("grid-n-r", args.grid_n_r),
                ("r-min", args.r_min),
                ("r-max", args.r_max),
                ("grid-n-theta", args.grid_n_theta),
                ("boundary", args.boundary),
                ("scheme", args.scheme),
                ("dt", args.dt),
                ("cfl-factor", args.cfl_factor),
                ("abs-tol", args.abs_tol),
                ("rel-tol", args.rel_tol),
                ("max-steps", args.max_steps),
            ];
            flags.extend(args.model.flags());
            let cfg = Layers::load(config, commands::evolve::KEYS, flags)?;
            commands::evolve::run(&cfg)
        }
        Command::Reduce(args) => {
            let mut flags = vec![
                ("epsilon", args.epsilon),
                ("wavenumber", args.wavenumber),
                ("s-min", args.s_min),
                ("s-max", args.s_max),
                ("samples", args.samples),
                ("chi-plus-re", args.chi_plus_re),
                ("chi-plus-im", args.chi_plus_im),
                ("chi-minus-re", args.chi_minus_re),
                ("chi-minus-im", args.chi_minus_im),
                ("out", args.out),
                ("out-dir", args.out_dir),
                ("abs-tol", args.abs_tol),
                ("rel-tol", args.rel_tol),
                ("max-steps", args.max_steps),
                ("pole-threshold", args.pole_threshold),
            ];
            flags.extend(args.model.flags());
            let cfg = Layers::load(config, commands::reduce::KEYS, flags)?;
            commands::reduce::run(&cfg)
        }
        Command::ScaleCheck(args) => {
            let mut flags = vec![
                ("lambda", args.lambda),
                ("tolerance", args.tolerance),
                ("out-dir", args.out_dir),
            ];
            flags.extend(args.model.flags());
            let cfg = Layers::load(config, commands::scale::KEYS, flags)?;
            commands::scale::run(&cfg)
        }
        Command::Sweep(args) => {
            let params = if args.params.is_empty() {
                None
            } else {
                Some(args.params.join("; "))
            };
            let flags = vec![
                ("row", args.row),
                ("params", params),
                ("s-min", args.s_min),
                ("s-max", args.s_max),
                ("samples", args.samples),
                ("out", args.out),
                ("abs-tol", args.abs_tol),
                ("rel-tol", args.rel_tol),
                ("max-steps", args.max_steps),
                ("pole-threshold", args.pole_threshold),
            ];
            let cfg = Layers::load(config, commands::sweep::KEYS, flags)?;
            commands::sweep::run(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successful outputs, not input errors.
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
