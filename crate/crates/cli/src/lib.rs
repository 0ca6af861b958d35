//! Command implementations behind the `evpkit` binary.
//!
//! Each command returns its report text on success or a [`Failure`] carrying
//! the exit code: 1 for a semantic failure (the property does not hold), 2
//! for unusable input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use evpkit::geometry::{self, rolewicz_check};
use evpkit::io;
use evpkit::oracle::{self, FourierMotzkin};
use evpkit::principle::{ekeland_with_bound, is_approx_solution, EkelandSolver};
use evpkit::space::validate;
use evpkit::{EkelandCertificate, Instance, NormTag, Rational, RationalVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    pub fn failed(message: impl Into<String>) -> Self {
        Failure { code: EXIT_FAILED, message: message.into() }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CmdResult = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

/// Parses and validates; an invalid instance is an input error here.
pub fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read(path)?;
    io::parse_instance(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(|e| Failure::input(format!("{e}")))
}

pub fn parse_vector(s: &str) -> Result<RationalVector, Failure> {
    s.split(',').map(|c| parse_rational(c.trim())).collect()
}

fn point(inst: &Instance, label: &str) -> Result<usize, Failure> {
    inst.index_of(label)
        .ok_or_else(|| Failure::input(format!("unknown label {label:?}")))
}

fn positive(r: Rational, what: &str) -> Result<Rational, Failure> {
    if r.is_positive() {
        Ok(r)
    } else {
        Err(Failure::input(format!("{what} must be positive, got {r}")))
    }
}

pub fn cmd_validate(path: &Path) -> CmdResult {
    let text = read(path)?;
    let raw = io::parse_instance_file(&text)
        .map_err(|e| Failure::input(format!("{}: parse error: {e}", path.display())))?;
    match validate(&raw) {
        Ok(inst) => Ok(format!(
            "valid: {} points, dimension {}, {} cone generators, {} direction vertices\ny* = {}\n",
            inst.len(),
            inst.dim(),
            inst.cone().generators().len(),
            inst.dset().vertices().len(),
            inst.scalarizer().y_star
        )),
        Err(report) => Err(Failure::failed(format!(
            "invalid: {} violation(s)\n{report}",
            report.violations.len()
        ))),
    }
}

pub struct SolveArgs<'a> {
    pub start: Option<&'a str>,
    pub scale: Option<&'a str>,
    pub out: Option<&'a Path>,
}

pub fn solve(inst: &Instance, start: usize, scale: &Rational) -> Result<EkelandCertificate, Failure> {
    let mut solver = EkelandSolver::new(inst, scale).map_err(|e| Failure::input(e.to_string()))?;
    solver.solve_from(start).map_err(|e| Failure::input(e.to_string()))
}

pub fn cmd_solve(path: &Path, args: &SolveArgs<'_>) -> CmdResult {
    let inst = load_instance(path)?;
    let start = match args.start {
        Some(label) => point(&inst, label)?,
        None => 0,
    };
    let scale = match args.scale {
        Some(s) => positive(parse_rational(s)?, "scale")?,
        None => inst.epsilon().clone(),
    };
    let cert = solve(&inst, start, &scale)?;
    let mut out = String::new();
    let labels: Vec<&str> = cert.points().iter().map(|&i| inst.label(i)).collect();
    writeln!(out, "start: {}", inst.label(start)).unwrap();
    writeln!(out, "x_bar: {}", inst.label(cert.x_bar)).unwrap();
    writeln!(out, "scale: {scale}").unwrap();
    writeln!(out, "chain length: {}", cert.chain.len()).unwrap();
    writeln!(out, "chain: {}", labels.join(" -> ")).unwrap();
    writeln!(out, "d(start, x_bar): {}", inst.space().dist(start, cert.x_bar)).unwrap();
    writeln!(out, "y*: {}", cert.scalarizer.y_star).unwrap();
    let trace: Vec<String> = cert.scalar_trace.iter().map(ToString::to_string).collect();
    writeln!(out, "<y*, f> trace: {}", trace.join(", ")).unwrap();
    if let Some(path) = args.out {
        write(path, &io::certificate_to_json(&cert))?;
        writeln!(out, "certificate written to {}", path.display()).unwrap();
    }
    Ok(out)
}

pub fn cmd_verify(instance: &Path, certificate: &Path) -> CmdResult {
    let inst = load_instance(instance)?;
    let cert = io::parse_certificate(&read(certificate)?)
        .map_err(|e| Failure::input(format!("{}: parse error: {e}", certificate.display())))?;
    oracle::check_shape(&inst, &cert).map_err(|e| Failure::input(format!("certificate does not fit instance: {e}")))?;
    let report = oracle::audit_with(&FourierMotzkin::from_env(), &inst, &cert);
    let text = format!("{report}\n");
    if report.overall {
        Ok(text)
    } else {
        Err(Failure::failed(text))
    }
}

pub fn cmd_scan(path: &Path, scale: Option<&str>, csv_out: Option<&Path>) -> CmdResult {
    let inst = load_instance(path)?;
    let scale = match scale {
        Some(s) => positive(parse_rational(s)?, "scale")?,
        None => inst.epsilon().clone(),
    };
    let maximal = oracle::scan_maximal_with(&FourierMotzkin::from_env(), &inst, &scale)
        .map_err(|e| Failure::input(e.to_string()))?;
    let y = inst.scalarizer();
    let mut out = String::new();
    let mut table = csv::Writer::from_writer(Vec::new());
    table.write_record(["label", "satisfies_ii", "scalarized_value"]).unwrap();
    for i in 0..inst.len() {
        let holds = maximal.contains(&i);
        let value = y.apply(inst.f(i));
        writeln!(out, "{}\t{}\t{}", inst.label(i), if holds { "yes" } else { "no" }, value).unwrap();
        table
            .write_record([inst.label(i), &holds.to_string(), &value.to_canonical()])
            .unwrap();
    }
    let labels: Vec<&str> = maximal.iter().map(|&i| inst.label(i)).collect();
    writeln!(out, "points satisfying (ii): {}", labels.join(", ")).unwrap();
    if let Some(p) = csv_out {
        let bytes = table.into_inner().expect("in-memory writer");
        write(p, std::str::from_utf8(&bytes).expect("csv is utf-8"))?;
        writeln!(out, "csv written to {}", p.display()).unwrap();
    }
    Ok(out)
}

pub fn cmd_approx(path: &Path, point_label: &str, eps: &str, lambda: &str) -> CmdResult {
    let inst = load_instance(path)?;
    let x = point(&inst, point_label)?;
    let eps = positive(parse_rational(eps)?, "eps")?;
    let lam = positive(parse_rational(lambda)?, "lambda")?;
    let (cert, report) = ekeland_with_bound(&inst, x, &eps, &lam).map_err(|e| Failure::input(e.to_string()))?;
    let approx_at_eps = is_approx_solution(&inst, x, &eps).map_err(|e| Failure::input(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "point: {point_label}").unwrap();
    writeln!(out, "eps-approximate (eps = {eps}): {approx_at_eps}").unwrap();
    writeln!(out, "eps*lambda-approximate (eps*lambda = {}): {}", &eps * &lam, report.approximate).unwrap();
    writeln!(out, "x_bar: {}", inst.label(cert.x_bar)).unwrap();
    writeln!(out, "d(x, x_bar): {}", report.distance).unwrap();
    let verdict = if report.approximate {
        format!("holds: {} < {}", report.distance, lam)
    } else {
        "not applicable (x is not eps*lambda-approximate)".to_string()
    };
    writeln!(out, "bound d(x, x_bar) < lambda: {verdict}").unwrap();
    Ok(out)
}

pub struct AnalyzeArgs<'a> {
    pub phi: Option<&'a str>,
    pub alpha: Option<&'a str>,
    pub norm: NormTag,
    pub trials: usize,
    pub seed: u64,
}

impl Default for AnalyzeArgs<'_> {
    fn default() -> Self {
        AnalyzeArgs {
            phi: None,
            alpha: None,
            norm: NormTag::Inf,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        }
    }
}

pub fn cmd_analyze(path: &Path, args: &AnalyzeArgs<'_>) -> CmdResult {
    let inst = load_instance(path)?;
    let gap = geometry::gap(inst.cone(), inst.dset(), args.norm).map_err(|e| Failure::input(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "gap d(D+K, 0) [{}-norm]: {gap}", args.norm).unwrap();
    writeln!(out, "y*: {}", inst.scalarizer().y_star).unwrap();
    match (args.phi, args.alpha) {
        (Some(phi), Some(alpha)) => {
            let phi = parse_vector(phi)?;
            let alpha = parse_rational(alpha)?;
            let holds = geometry::bishop_phelps_contains(&phi, &alpha, inst.cone(), args.norm)
                .map_err(|e| Failure::input(e.to_string()))?;
            writeln!(out, "Bishop-Phelps (phi = {phi}, alpha = {alpha}): K inside cone: {holds}").unwrap();
        }
        (None, None) => {}
        _ => return Err(Failure::input("--phi and --alpha must be given together")),
    }
    let verdict = rolewicz_check(inst.cone(), args.norm, args.trials, args.seed);
    writeln!(out, "Rolewicz monotonicity [{}-norm]: {verdict}", args.norm).unwrap();
    Ok(out)
}
