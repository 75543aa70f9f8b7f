//! Command-line front end: wire formats, reports, and the `kz` subcommands.
//!
//! Exit codes: `0` every check passed, `1` a verification failed, `2` usage or
//! input error. Exact values are always serialized as strings.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ansatz::{
    check_conditions, matching_defects, residual, sample_points, solve_ansatz, AnsatzShape,
    RationalVectorFunction,
};
use crate::error::{KzError, Result};
use crate::exact::{parse_scalar, Scalar, Vector};
use crate::frobenius::{frobenius_solve, recursion_defects};
use crate::numeric::{monodromy, residual_scan};
use crate::s4::{self, certify_independence};
use crate::symmetric::t_spectrum;
use crate::system::KzSystem;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// System description on the wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: usize,
    pub rho: i64,
    pub points: Vec<String>,
    #[serde(default)]
    pub mode: Mode,
}

impl SystemSpec {
    pub fn build(&self) -> Result<KzSystem> {
        let points = self
            .points
            .iter()
            .map(|p| parse_scalar(p))
            .collect::<Result<Vec<_>>>()?;
        KzSystem::new(self.n, self.rho, points)
    }

    pub fn from_system(sys: &KzSystem, mode: Mode) -> Self {
        SystemSpec {
            n: sys.dim(),
            rho: sys.rho(),
            points: sys.points().iter().map(Scalar::to_string).collect(),
            mode,
        }
    }
}

/// A rational vector function together with the system it belongs to.
///
/// `residues[k][j]` multiplies `(z − z_{k+1})^{−(j+1)}`; `poly[d]` multiplies
/// `z^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    #[serde(flatten)]
    pub system: SystemSpec,
    pub residues: Vec<Vec<Vector>>,
    pub poly: Vec<Vector>,
}

impl FunctionFile {
    pub fn new(sys: &KzSystem, f: &RationalVectorFunction) -> Self {
        FunctionFile {
            system: SystemSpec::from_system(sys, Mode::Exact),
            residues: f.principal_parts().to_vec(),
            poly: f.poly_coeffs().to_vec(),
        }
    }

    pub fn load(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| KzError::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| KzError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn function(&self) -> Result<(KzSystem, RationalVectorFunction)> {
        let sys = self.system.build()?;
        let f = RationalVectorFunction::new(
            sys.dim(),
            sys.points().to_vec(),
            self.residues.clone(),
            self.poly.clone(),
        )?;
        Ok((sys, f))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: String,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Check {
    fn exact(name: impl Into<String>, value: &Vector) -> Self {
        Check {
            name: name.into(),
            residual: vector_string(value),
            verdict: if value.is_zero() { Verdict::Pass } else { Verdict::Fail },
        }
    }

    fn float(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            residual: format!("{value:e}"),
            verdict: if value < threshold { Verdict::Pass } else { Verdict::Fail },
        }
    }
}

fn vector_string(v: &Vector) -> String {
    if v.is_zero() {
        "0".into()
    } else {
        let parts: Vec<String> = v.iter().map(Scalar::to_string).collect();
        format!("[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    /// Wall time; only reported for float-mode commands so that exact reports
    /// stay byte-identical between runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    fn new(command: String, checks: Vec<Check>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.verdict == Verdict::Pass);
        Report {
            command,
            checks,
            pass,
            data,
            timing_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.command);
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            s.push_str(&format!("  [{v}] {}  residual={}\n", c.name, c.residual));
        }
        if !self.data.is_null() {
            s.push_str(&format!("  data: {}\n", self.data));
        }
        s.push_str(if self.pass { "overall: PASS\n" } else { "overall: FAIL\n" });
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "kz", about = "KZ systems with symmetric-group residues: exact and numerical checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SystemArgs {
    /// Dimension of the representation.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<i64>,
    /// Comma-separated exact literals, e.g. `0,1,(2,1/2)`.
    #[arg(long)]
    pub points: Option<String>,
    /// JSON system description; flags override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check residue conditions and exact residuals of named or stored solutions.
    Verify {
        #[command(flatten)]
        system: SystemArgs,
        /// y1|y2|y3|y4|all|file:<path>
        #[arg(long)]
        solution: String,
    },
    /// Solve for every rational solution of the given shape.
    Nullspace {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 1)]
        pole_order: usize,
        #[arg(long, default_value_t = 1)]
        poly_degree: usize,
        /// Also write each basis function to `<dir>/basis-<i>.json`.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Local series family at a pole.
    Series {
        #[command(flatten)]
        system: SystemArgs,
        /// 1-based pole index.
        #[arg(long)]
        pole: usize,
        #[arg(long)]
        order: i64,
    },
    /// Numerical continuation around a pole.
    Monodromy {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        pole: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Largest accepted deviation from the identity.
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
    /// Integer spectrum of T.
    Eigen {
        #[arg(long)]
        n: usize,
    },
}

/// Splits on commas that are not inside parentheses.
pub fn split_points(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

impl SystemArgs {
    fn is_empty(&self) -> bool {
        self.n.is_none() && self.rho.is_none() && self.points.is_none() && self.spec.is_none()
    }

    fn resolve(&self) -> Result<SystemSpec> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| KzError::Parse(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<SystemSpec>(&text)
                    .map_err(|e| KzError::Parse(format!("{}: {e}", path.display())))?
            }
            None => SystemSpec {
                n: 0,
                rho: 0,
                points: Vec::new(),
                mode: Mode::Exact,
            },
        };
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(rho) = self.rho {
            spec.rho = rho;
        }
        if let Some(p) = &self.points {
            spec.points = split_points(p);
        }
        if let Some(m) = self.mode {
            spec.mode = m;
        }
        if self.spec.is_none() && (self.n.is_none() || self.rho.is_none() || self.points.is_none()) {
            return Err(KzError::InvalidSystem("need --n, --rho and --points (or --spec)".into()));
        }
        Ok(spec)
    }
}

fn echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks one solution: residue conditions when they apply, the exact
/// matching conditions, and exact residuals at certifying sample points.
fn solution_checks(label: &str, sys: &KzSystem, f: &RationalVectorFunction) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if sys.rho() == -1 && f.pole_order() <= 1 && f.poly_degree() <= 1 {
        let rep = check_conditions(sys, f)?;
        for (k, v) in rep.residue_eigen.iter().enumerate() {
            checks.push(Check::exact(format!("{label}:residue-eigen k={}", k + 1), v));
        }
        for (k, v) in rep.residue_balance.iter().enumerate() {
            checks.push(Check::exact(format!("{label}:residue-balance k={}", k + 1), v));
        }
        checks.push(Check::exact(format!("{label}:infinity"), &rep.infinity));
    } else {
        let defects = matching_defects(sys, f)?;
        let flat = Vector(defects.into_iter().flat_map(|v| v.0).collect());
        checks.push(Check::exact(format!("{label}:matching"), &flat));
    }
    let shape = AnsatzShape {
        pole_order: f.pole_order().max(1),
        poly_degree: f.poly_degree(),
    };
    let mut worst = Vector::zeros(sys.dim());
    for z in sample_points(sys, shape.certifying_samples(sys.pole_count())) {
        let r = residual(sys, f, &z)?;
        if !r.is_zero() {
            worst = r;
            break;
        }
    }
    checks.push(Check::exact(format!("{label}:residual"), &worst));
    Ok(checks)
}

fn function_json(sys: &KzSystem, f: &RationalVectorFunction) -> Value {
    serde_json::to_value(FunctionFile::new(sys, f)).expect("serializable")
}

pub fn cmd_verify(command: String, system: &SystemArgs, selector: &str) -> Result<Report> {
    let mut checks = Vec::new();
    if let Some(path) = selector.strip_prefix("file:") {
        let file = FunctionFile::load(FsPath::new(path))?;
        let (sys, f) = file.function()?;
        if !system.is_empty() {
            let given = system.resolve()?.build()?;
            if given.dim() != sys.dim() || given.rho() != sys.rho() || given.points() != sys.points() {
                return Err(KzError::InvalidSystem("--n/--rho/--points disagree with the solution file".into()));
            }
        }
        checks.extend(solution_checks("file", &sys, &f)?);
        return Ok(Report::new(command, checks, Value::Null));
    }
    let names: Vec<&str> = match selector {
        "all" => vec!["y1", "y2", "y3", "y4"],
        "y1" | "y2" | "y3" | "y4" => vec![selector],
        other => return Err(KzError::Parse(format!("unknown solution selector `{other}`"))),
    };
    let sys = system.resolve()?.build()?;
    if sys.rho() != -1 {
        return Err(KzError::RhoMismatch(sys.rho()));
    }
    if sys.dim() != 4 {
        return Err(KzError::InvalidSystem("named solutions exist only for n = 4".into()));
    }
    for name in names {
        let f = match name {
            "y1" => s4::y1(sys.points())?,
            "y2" => s4::y2(sys.points())?,
            "y3" => s4::y3(sys.points())?,
            _ => s4::y4(sys.points())?,
        };
        checks.extend(solution_checks(name, &sys, &f)?);
    }
    Ok(Report::new(command, checks, Value::Null))
}

pub fn cmd_nullspace(
    command: String,
    system: &SystemArgs,
    shape: AnsatzShape,
    emit: Option<&FsPath>,
) -> Result<Report> {
    let sys = system.resolve()?.build()?;
    let basis = solve_ansatz(&sys, shape)?;
    let mut checks = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        checks.extend(solution_checks(&format!("basis[{i}]"), &sys, f)?);
    }
    let mut data = json!({
        "dimension": basis.len(),
        "pole_order": shape.pole_order,
        "poly_degree": shape.poly_degree,
        "experimental": sys.rho() != -1,
        "basis": basis.iter().map(|f| function_json(&sys, f)).collect::<Vec<_>>(),
    });
    if basis.len() == sys.dim() {
        let cert = certify_independence(sys.points(), &basis);
        let (residual, verdict) = match &cert {
            Ok(c) => (format!("det={} at z={}", c.determinant, c.probe), Verdict::Pass),
            Err(e) => (e.to_string(), Verdict::Fail),
        };
        checks.push(Check {
            name: "independence".into(),
            residual,
            verdict,
        });
        data["fundamental"] = Value::Bool(cert.is_ok());
    }
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir)
            .map_err(|e| KzError::Parse(format!("cannot create {}: {e}", dir.display())))?;
        for (i, f) in basis.iter().enumerate() {
            let path = dir.join(format!("basis-{i}.json"));
            let text = serde_json::to_string_pretty(&FunctionFile::new(&sys, f)).expect("serializable");
            std::fs::write(&path, text + "\n")
                .map_err(|e| KzError::Parse(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(Report::new(command, checks, data))
}

pub fn cmd_series(command: String, system: &SystemArgs, pole: usize, order: i64) -> Result<Report> {
    let sys = system.resolve()?.build()?;
    if pole == 0 {
        return Err(KzError::Index("poles are numbered from 1".into()));
    }
    let sol = frobenius_solve(&sys, pole - 1, order)?;
    let mut checks = Vec::new();
    for (i, s) in sol.basis.iter().enumerate() {
        let defects = recursion_defects(&sys, s)?;
        let flat = Vector(defects.into_iter().flat_map(|(_, v)| v.0).collect());
        checks.push(Check::exact(format!("series[{i}]:recursion"), &flat));
    }
    let families: Vec<Value> = sol
        .basis
        .iter()
        .map(|s| json!({ "lowest": s.lowest, "coefficients": s.coeffs }))
        .collect();
    let data = json!({
        "pole": pole,
        "window": [sol.window.0, sol.window.1],
        "truncation": sol.truncation,
        "leading_orders": sol.leading_orders(),
        "basis": families,
    });
    Ok(Report::new(command, checks, data))
}

pub fn cmd_monodromy(
    command: String,
    system: &SystemArgs,
    pole: usize,
    radius: f64,
    tol: f64,
    threshold: f64,
) -> Result<Report> {
    let started = Instant::now();
    let sys = system.resolve()?.build()?;
    if pole == 0 {
        return Err(KzError::Index("poles are numbered from 1".into()));
    }
    let r = monodromy(&sys, pole - 1, radius, tol)?;
    let transport: Vec<Vec<[f64; 2]>> = (0..r.transport.nrows())
        .map(|i| {
            (0..r.transport.ncols())
                .map(|j| [r.transport[(i, j)].re, r.transport[(i, j)].im])
                .collect()
        })
        .collect();
    let mut checks = Vec::new();
    let claim = r.start != crate::numeric::StartKind::Identity;
    if claim {
        checks.push(Check::float("identity-deviation", r.deviation, threshold));
    }
    let data = json!({
        "pole": pole,
        "radius": radius,
        "tol": tol,
        "start": r.start.as_str(),
        "deviation": r.deviation,
        "steps": r.steps,
        "triviality_claimed": claim,
        "transport": transport,
    });
    let mut rep = Report::new(command, checks, data);
    rep.timing_ms = Some(started.elapsed().as_millis());
    Ok(rep)
}

pub fn cmd_eigen(command: String, n: usize) -> Result<Report> {
    let spec = t_spectrum(n)?;
    let mut map = serde_json::Map::new();
    for (e, m) in spec.eigenvalues.iter().rev() {
        map.insert(e.to_string(), json!(m));
    }
    let data = json!({ "n": n, "eigenvalues": map, "min": spec.min, "max": spec.max });
    let total: usize = spec.eigenvalues.iter().map(|e| e.1).sum();
    let checks = vec![Check {
        name: "multiplicities-sum".into(),
        residual: format!("{}", n as i64 - total as i64),
        verdict: if total == n { Verdict::Pass } else { Verdict::Fail },
    }];
    Ok(Report::new(command, checks, data))
}

/// Float-mode residual scan for a stored solution; used by tooling and tests.
pub fn scan_file(path: &FsPath, samples: usize) -> Result<f64> {
    let (sys, f) = FunctionFile::load(path)?.function()?;
    Ok(residual_scan(&sys, &f, samples))
}

fn dispatch(cli: &Cli, command: String) -> Result<Report> {
    match &cli.command {
        Command::Verify { system, solution } => cmd_verify(command, system, solution),
        Command::Nullspace {
            system,
            pole_order,
            poly_degree,
            emit,
        } => cmd_nullspace(
            command,
            system,
            AnsatzShape {
                pole_order: *pole_order,
                poly_degree: *poly_degree,
            },
            emit.as_deref(),
        ),
        Command::Series { system, pole, order } => cmd_series(command, system, *pole, *order),
        Command::Monodromy {
            system,
            pole,
            radius,
            tol,
            threshold,
        } => cmd_monodromy(command, system, *pole, *radius, *tol, *threshold),
        Command::Eigen { n } => cmd_eigen(command, *n),
    }
}

/// Runs the CLI, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli, echo(&args)) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            if !report.pass {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| c.verdict == Verdict::Fail)
                    .map(|c| c.name.as_str())
                    .collect();
                let _ = writeln!(err, "verification failed: {}", failed.join(", "));
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
