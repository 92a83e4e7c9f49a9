//! Output plumbing: the key = value report format, the bit-stable number
//! formatting shared by every CSV, and the field-file reader and writers.
//!
//! All floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every f64 exactly, with '.' decimals and '\n' line endings.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use nldirac::{
    AxisKind, Boundary, Complex64, CoordSystem, DiagnosticsRecord, Grid, Grid1D, Grid2D,
    SpinorState,
};

use crate::failure::{CliResult, Failure};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Ordered key = value lines with a stable vocabulary, printed to stdout and
/// optionally mirrored to a file.
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { lines: vec![("command".into(), command.into())] }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.lines.push((key.into(), value.into()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, num(value));
    }

    pub fn push_bool(&mut self, key: impl Into<String>, value: bool) {
        self.push(key, if value { "true" } else { "false" });
    }

    /// Append the fully-resolved configuration under the `config.` prefix.
    pub fn push_config(&mut self, pairs: &[(String, String)]) {
        for (key, value) in pairs {
            self.push(format!("config.{key}"), value.clone());
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.lines {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn print(&self) {
        print!("{}", self.render());
    }

    pub fn write_to(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

/// Write the resolved-config sidecar in the same format the loader reads.
pub fn write_resolved_config(path: &Path, pairs: &[(String, String)]) -> CliResult<()> {
    let mut out = String::new();
    for (key, value) in pairs {
        let _ = writeln!(out, "{key} = {value}");
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn field_header(coords: CoordSystem) -> &'static str {
    match coords {
        CoordSystem::Cartesian => "t,x,y,re_plus,im_plus,re_minus,im_minus",
        CoordSystem::Cylindrical => "t,r,theta,re_plus,im_plus,re_minus,im_minus",
    }
}

/// Append one time slice of a 2D state, row-major over the grid.
pub fn append_snapshot(out: &mut String, state: &SpinorState) -> CliResult<()> {
    let grid = match state.grid() {
        Grid::Two(g) => *g,
        Grid::One(_) => {
            return Err(Failure::input("field CSV output requires a 2D state"));
        }
    };
    let t = num(state.time());
    for i in 0..grid.first_axis().len() {
        for j in 0..grid.second_axis().len() {
            let (a, b) = grid.position(i, j);
            let k = grid.idx(i, j);
            let p = state.plus()[k];
            let m = state.minus()[k];
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{},{}",
                num(a),
                num(b),
                num(p.re),
                num(p.im),
                num(m.re),
                num(m.im)
            );
        }
    }
    Ok(())
}

pub fn append_diagnostics(out: &mut String, records: &[DiagnosticsRecord]) {
    for rec in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(rec.time),
            num(rec.norm),
            num(rec.max_abs),
            num(rec.dt),
            rec.steps
        );
    }
}

/// Profile CSV for 1D reduced data.
pub fn write_profile(path: &Path, samples: &[(f64, [Complex64; 2])]) -> CliResult<()> {
    let mut out = String::from("s,re_plus,im_plus,re_minus,im_minus\n");
    for (s, pair) in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(*s),
            num(pair[0].re),
            num(pair[0].im),
            num(pair[1].re),
            num(pair[1].im)
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// A writer that flushes line-buffered CSV to disk and can stamp a
/// truncation marker if the producing run dies mid-way.
pub struct CsvSink {
    file: fs::File,
}

impl CsvSink {
    pub fn create(path: &Path, header: &str) -> CliResult<Self> {
        let mut file = fs::File::create(path)?;
        file.write_all(header.as_bytes())?;
        file.write_all(b"\n")?;
        Ok(Self { file })
    }

    pub fn write(&mut self, chunk: &str) -> CliResult<()> {
        self.file.write_all(chunk.as_bytes())?;
        Ok(())
    }

    /// Mark the file as incomplete; readers treat '#' lines as comments.
    pub fn truncate_marker(&mut self, reason: &str) -> CliResult<()> {
        self.file.write_all(format!("# truncated: {reason}\n").as_bytes())?;
        Ok(())
    }
}

/// One parsed field file: a single time slice on a reconstructed 2D grid.
pub struct FieldFile {
    pub coords: CoordSystem,
    pub state: SpinorState,
}

struct Row {
    line: usize,
    a: f64,
    b: f64,
    plus: Complex64,
    minus: Complex64,
}

fn bad_line(n: usize, what: impl std::fmt::Display) -> Failure {
    Failure::input(format!("field file line {n}: {what}"))
}

fn uniform_spacing(values: &[f64], axis: &str) -> CliResult<f64> {
    if values.len() < 2 {
        return Err(Failure::input(format!("{axis} axis needs at least 2 distinct points")));
    }
    let h = values[1] - values[0];
    if !(h > 0.0) {
        return Err(Failure::input(format!("{axis} axis is not strictly increasing")));
    }
    for (i, pair) in values.windows(2).enumerate() {
        let step = pair[1] - pair[0];
        if (step - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Failure::input(format!(
                "{axis} axis spacing is not uniform near index {i}"
            )));
        }
    }
    Ok(h)
}

/// Parse a field CSV back into a state. The file fixes the node set; the
/// boundary flavor comes from the caller because a list of samples cannot
/// distinguish a wrapped axis from a closed one.
pub fn read_field_csv(path: &Path, periodic: bool) -> CliResult<FieldFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read field file {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Failure::input("field file is empty".to_string()))?;
    let coords = match header.trim() {
        "t,x,y,re_plus,im_plus,re_minus,im_minus" => CoordSystem::Cartesian,
        "t,r,theta,re_plus,im_plus,re_minus,im_minus" => CoordSystem::Cylindrical,
        other => {
            return Err(bad_line(1, format!("unrecognized header '{other}'")));
        }
    };

    let mut rows: Vec<Row> = Vec::new();
    let mut time: Option<f64> = None;
    for (idx, raw) in lines {
        let n = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            return Err(bad_line(n, "file carries a truncation marker; refusing partial data"));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(bad_line(n, format!("expected 7 columns, got {}", fields.len())));
        }
        let mut values = [0.0f64; 7];
        for (slot, text) in values.iter_mut().zip(&fields) {
            *slot = text
                .trim()
                .parse()
                .map_err(|_| bad_line(n, format!("'{}' is not a number", text.trim())))?;
            if !slot.is_finite() {
                return Err(bad_line(n, "non-finite value"));
            }
        }
        match time {
            None => time = Some(values[0]),
            Some(t) if values[0] != t => {
                return Err(bad_line(n, "multiple time slices in one field file"));
            }
            _ => {}
        }
        rows.push(Row {
            line: n,
            a: values[1],
            b: values[2],
            plus: Complex64::new(values[3], values[4]),
            minus: Complex64::new(values[5], values[6]),
        });
    }
    if rows.is_empty() {
        return Err(Failure::input("field file has a header but no rows"));
    }

    // Row-major layout: the second coordinate cycles fastest. The first
    // block (constant first coordinate) fixes the second axis.
    let a0 = rows[0].a;
    let n2 = rows.iter().take_while(|r| r.a == a0).count();
    if rows.len() % n2 != 0 {
        return Err(Failure::input(format!(
            "row count {} is not a multiple of the second-axis length {n2}",
            rows.len()
        )));
    }
    let n1 = rows.len() / n2;
    let second: Vec<f64> = rows[..n2].iter().map(|r| r.b).collect();
    let mut first = Vec::with_capacity(n1);
    for block in 0..n1 {
        let base = block * n2;
        let a = rows[base].a;
        first.push(a);
        for (offset, expected_b) in second.iter().enumerate() {
            let row = &rows[base + offset];
            if row.a != a || row.b != *expected_b {
                return Err(bad_line(row.line, "grid is not row-major over a product of axes"));
            }
        }
    }

    let h1 = uniform_spacing(&first, "first")?;
    let h2 = uniform_spacing(&second, "second")?;
    let boundary = if periodic { Boundary::Periodic } else { Boundary::DirichletZero };
    let grid = match coords {
        CoordSystem::Cartesian => {
            let (x, y) = if periodic {
                (
                    Grid1D::wrapped(AxisKind::CartesianX, n1, first[0], h1 * n1 as f64),
                    Grid1D::wrapped(AxisKind::CartesianY, n2, second[0], h2 * n2 as f64),
                )
            } else {
                (
                    Grid1D::inclusive(AxisKind::CartesianX, n1, first[0], first[n1 - 1]),
                    Grid1D::inclusive(AxisKind::CartesianY, n2, second[0], second[n2 - 1]),
                )
            };
            Grid2D::cartesian(x?, y?, boundary)
        }
        CoordSystem::Cylindrical => {
            let r = Grid1D::inclusive(AxisKind::RadialR, n1, first[0], first[n1 - 1]);
            let theta = if periodic {
                Grid1D::wrapped(AxisKind::AngularTheta, n2, second[0], h2 * n2 as f64)
            } else {
                Grid1D::inclusive(AxisKind::AngularTheta, n2, second[0], second[n2 - 1])
            };
            Grid2D::cylindrical(r?, theta?, boundary)
        }
    };
    let grid = grid.map_err(|e| Failure::input(format!("field file grid: {e}")))?;

    let plus = rows.iter().map(|r| r.plus).collect();
    let minus = rows.iter().map(|r| r.minus).collect();
    let state = SpinorState::new(Grid::Two(grid), plus, minus, time.unwrap_or(0.0))
        .map_err(|e| Failure::input(format!("field file state: {e}")))?;
    Ok(FieldFile { coords, state })
}
