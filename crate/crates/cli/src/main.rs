mod points;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genosc::interbasis::{c_table, c_table_csv, format_value, v_matrix, w_matrix, Route};
use genosc::model::{cartesian_states, energy, psi_at, Basis, BasisState};
use genosc::verify::{run_suite, Suite, SuiteConfig, Tolerances};
use genosc::{Branch, CartesianState, CylindricalState, PolarState, SphericalState, SystemParams};
use serde_json::json;

use crate::points::{read_expansion, read_points, PointSet};

#[derive(Parser, Debug)]
#[command(name = "genosc", version, about = "Generalized isotropic oscillator: spectra, wavefunctions, interbasis coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy levels and their degeneracies.
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Wavefunction values at points.
    Eval(EvalArgs),
    /// Interbasis coefficient tables.
    Coeffs(CoeffArgs),
    /// Run a verification suite and emit its report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Barrier strengths, one per axis.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<f64>,
    /// Branch signs paired with --k, `+` or `-`; all `+` when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_branch)]
    signs: Vec<Branch>,
    /// Checked against the number of k values.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value = "cartesian", value_parser = parse_basis)]
    basis: Basis,
    /// Quantum numbers: n1,n2[,n3] (cartesian), n_rho,m (polar),
    /// n_rho,m,n3 (cylindrical) or n_r,q,m (spherical).
    #[arg(long, value_delimiter = ',', required = true)]
    state: Vec<usize>,
    /// Inline Cartesian point, repeatable.
    #[arg(long = "point", allow_hyphen_values = true)]
    point: Vec<String>,
    /// CSV of points with header x,y[,z], rho,phi[,z] or r,theta,phi.
    #[arg(long, conflicts_with = "point")]
    points: Option<PathBuf>,
    /// Evaluate through a coefficient table written by `coeffs`.
    #[arg(long)]
    expansion: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffType {
    #[value(name = "W", alias = "w")]
    W,
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long = "type", value_enum, default_value_t = CoeffType::W)]
    kind: CoeffType,
    /// Principal number (n_rho + n3 for V).
    #[arg(long)]
    n: usize,
    /// Azimuthal number, V only.
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value = "cgc", value_parser = parse_route)]
    route: Route,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random draws per suite, overriding the defaults.
    #[arg(long)]
    draws: Option<usize>,
    /// Fixed system instead of random draws.
    #[arg(long, value_delimiter = ',')]
    k: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_branch)]
    signs: Vec<Branch>,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long)]
    tol_quadrature: Option<f64>,
    #[arg(long)]
    tol_algebra: Option<f64>,
    #[arg(long)]
    tol_expansion: Option<f64>,
    #[arg(long)]
    tol_stencil: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Compute(String),
    Verify,
}

impl From<genosc::Error> for Failure {
    fn from(e: genosc::Error) -> Self {
        use genosc::Error as E;
        match e {
            E::Params(_) | E::Usage(_) | E::Arity(_) | E::Index(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn parse_branch(s: &str) -> Result<Branch, genosc::Error> {
    s.parse()
}

fn parse_basis(s: &str) -> Result<Basis, genosc::Error> {
    s.parse()
}

fn parse_route(s: &str) -> Result<Route, genosc::Error> {
    s.parse()
}

impl SystemArgs {
    fn params(&self) -> Result<SystemParams, Failure> {
        if let Some(d) = self.dim {
            if d != self.k.len() {
                return Err(Failure::Usage(format!("--dim {d} but {} k values given", self.k.len())));
            }
        }
        build_params(self.omega, &self.k, &self.signs)
    }
}

fn build_params(omega: f64, k: &[f64], signs: &[Branch]) -> Result<SystemParams, Failure> {
    let signs = if signs.is_empty() { vec![Branch::Plus; k.len()] } else { signs.to_vec() };
    Ok(SystemParams::new(omega, k, &signs)?)
}

fn emit(path: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn spectrum(system: &SystemArgs, nmax: usize, out: &OutputArgs) -> Result<(), Failure> {
    let p = system.params()?;
    let levels: Vec<(usize, f64, usize)> =
        (0..=nmax).map(|n| (n, energy(&p, n), cartesian_states(p.dim(), n).len())).collect();
    let body = match out.format {
        Format::Csv => {
            let mut s = String::from("n,energy,degeneracy\n");
            for (n, e, d) in &levels {
                s.push_str(&format!("{n},{},{d}\n", format_value(*e)));
            }
            s
        }
        Format::Json => json_text(&json!({
            "params": p,
            "levels": levels.iter().map(|(n, e, d)| json!({"n": n, "energy": e, "degeneracy": d})).collect::<Vec<_>>(),
        })),
    };
    emit(out.output.as_ref(), &body)
}

fn state_for(basis: Basis, q: &[usize], dim: usize) -> Result<BasisState, Failure> {
    let want = match basis {
        Basis::Cartesian => dim,
        Basis::Polar => 2,
        Basis::Cylindrical | Basis::Spherical => 3,
    };
    if q.len() != want {
        return Err(Failure::Usage(format!("{basis:?} state needs {want} quantum numbers, got {}", q.len())));
    }
    if want != dim {
        return Err(Failure::Usage(format!("{basis:?} basis needs a {want}-dimensional system, have dimension {dim}")));
    }
    Ok(match basis {
        Basis::Cartesian => BasisState::Cartesian(CartesianState::new(q)),
        Basis::Polar => BasisState::Polar(PolarState { n_rho: q[0], m: q[1] }),
        Basis::Cylindrical => BasisState::Cylindrical(CylindricalState { n_rho: q[0], m: q[1], n3: q[2] }),
        Basis::Spherical => BasisState::Spherical(SphericalState { n_r: q[0], q: q[1], m: q[2] }),
    })
}

fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let p = args.system.params()?;
    let state = state_for(args.basis, &args.state, p.dim())?;
    let set = match &args.points {
        Some(path) => read_points(path)?,
        None => PointSet::inline(&args.point, p.dim())?,
    };
    if set.dim() != p.dim() {
        return Err(Failure::Usage(format!("points have {} coordinates, system has {}", set.dim(), p.dim())));
    }
    let expansion = match &args.expansion {
        Some(path) => Some(read_expansion(path)?),
        None => None,
    };
    let terms = match &expansion {
        Some(e) => Some(e.terms_for(&state)?),
        None => None,
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = set.columns.iter().map(String::as_str).collect();
    header.push("value");
    if terms.is_some() {
        header.extend(["direct", "residual"]);
    }
    let csv_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for (raw, cart) in set.raw.iter().zip(&set.cartesian) {
        let direct = psi_at(&p, &state, cart)?;
        let mut row: Vec<String> = raw.iter().map(|&v| format_value(v)).collect();
        match &terms {
            Some(terms) => {
                let mut sum = 0.0;
                for (s, c) in terms {
                    sum += c * psi_at(&p, s, cart)?;
                }
                row.extend([format_value(sum), format_value(direct), format_value((sum - direct).abs())]);
            }
            None => row.push(format_value(direct)),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    emit(args.output.as_ref(), &String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn coeffs(args: &CoeffArgs) -> Result<(), Failure> {
    let p = args.system.params()?;
    let body = match args.kind {
        CoeffType::W | CoeffType::V => {
            let m = match args.kind {
                CoeffType::W => w_matrix(&p, args.n, args.route)?,
                _ => v_matrix(&p, args.n, args.m, args.route)?,
            };
            match args.out.format {
                Format::Csv => m.to_csv(),
                Format::Json => json_text(&m.to_json()),
            }
        }
        CoeffType::C => {
            let table = c_table(&p, args.n, args.route)?;
            match args.out.format {
                Format::Csv => c_table_csv(&table, args.route),
                Format::Json => json_text(&json!({
                    "kind": {"type": "C"},
                    "principal": args.n,
                    "route": args.route,
                    "params": p,
                    "entries": table,
                })),
            }
        }
    };
    emit(args.out.output.as_ref(), &body)
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let params = if args.k.is_empty() {
        if !args.signs.is_empty() {
            return Err(Failure::Usage("--signs needs --k".into()));
        }
        None
    } else {
        Some(build_params(args.omega, &args.k, &args.signs)?)
    };
    let d = Tolerances::default();
    let tolerances = Tolerances {
        quadrature: args.tol_quadrature.unwrap_or(d.quadrature),
        algebra: args.tol_algebra.unwrap_or(d.algebra),
        expansion: args.tol_expansion.unwrap_or(d.expansion),
        stencil: args.tol_stencil.unwrap_or(d.stencil),
    };
    let cfg = SuiteConfig { seed: args.seed, params, draws: args.draws, tolerances };
    let start = Instant::now();
    let report = run_suite(suite, &cfg)?;
    let body = match args.format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Failure::Io(e.to_string());
            w.write_record(["identity", "n", "residual", "tolerance", "pass"]).map_err(csv_err)?;
            for c in &report.cases {
                w.write_record([
                    c.identity.clone(),
                    c.n.to_string(),
                    format_value(c.residual),
                    format_value(c.tolerance),
                    c.pass.to_string(),
                ])
                .map_err(csv_err)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Io(e.to_string()))?).expect("utf-8")
        }
    };
    emit(args.output.as_ref(), &body)?;
    let failed = report.failures().count();
    eprintln!(
        "{}: {} cases, {} failed, {:.2?}",
        report.suite,
        report.cases.len(),
        failed,
        start.elapsed()
    );
    for c in report.failures().take(20) {
        eprintln!("  FAIL {}: {:e} > {:e}", c.identity, c.residual, c.tolerance);
    }
    if failed > 20 {
        eprintln!("  ... and {} more", failed - 20);
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Spectrum { system, nmax, out } => spectrum(system, *nmax, out),
        Command::Eval(a) => eval(a),
        Command::Coeffs(a) => coeffs(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try 'genosc --help'.");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(3),
    }
}
