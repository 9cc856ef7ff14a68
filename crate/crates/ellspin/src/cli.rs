//! Command-line front end: verification reports, spectra, spectral-flow
//! sweeps, magnon tables and freezing diagnostics, emitted as JSON or CSV
//! for scripting and plotting.
//!
//! Exit codes: 0 all checks pass / computation succeeded, 1 at least one
//! check failed, 2 infrastructure error, 64 unparsable or invalid
//! parameters. Floating-point output carries 17 significant digits, which
//! round-trips double precision exactly.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;

use crate::chain::{
    self, h_deformed_hs, h_haldane_shastry, h_inozemtsev, h_intermediate, h_left, h_right,
    magnon_states, rayleigh, spectrum, ChainParams, SpinOperator, XxzChain,
};
use crate::error::{Error, Result};
use crate::harness::{run_suite, Overrides, Suite};
use crate::qmbs::{freeze_check, Chirality, QmbsParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INFRASTRUCTURE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Parse a complex literal in the shell-safe form "a+bi" (no spaces):
/// "1.3", "-2i", "0.5-0.25i", "1e-3+0.4i".
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if !t.ends_with('i') {
        return t
            .parse::<f64>()
            .map(|re| C64::new(re, 0.0))
            .map_err(|_| format!("cannot parse '{s}' as a real number"));
    }
    let body = &t[..t.len() - 1];
    // split the imaginary part off at the last +/- that is not part of an
    // exponent and not the leading sign
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        None => {
            // pure imaginary: "i", "-i", "0.4i"
            let im = match body {
                "" => 1.0,
                "-" => -1.0,
                "+" => 1.0,
                other => other
                    .parse::<f64>()
                    .map_err(|_| format!("cannot parse '{s}' as a complex number"))?,
            };
            Ok(C64::new(0.0, im))
        }
        Some(k) => {
            let re: f64 = body[..k]
                .parse()
                .map_err(|_| format!("cannot parse real part of '{s}'"))?;
            let imtext = &body[k..];
            let im = match imtext {
                "+" => 1.0,
                "-" => -1.0,
                other => other
                    .parse::<f64>()
                    .map_err(|_| format!("cannot parse imaginary part of '{s}'"))?,
            };
            Ok(C64::new(re, im))
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_complex_pair(v: C64) -> String {
    format!("[{},{}]", fmt_f64(v.re), fmt_f64(v.im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format '{other}' (expected json|csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    DeformedL,
    DeformedR,
    Inozemtsev,
    Intermediate,
    Xxz,
    Hs,
    DeformedHs,
}

impl FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "deformed-L" | "deformed-l" => Ok(Model::DeformedL),
            "deformed-R" | "deformed-r" => Ok(Model::DeformedR),
            "inozemtsev" => Ok(Model::Inozemtsev),
            "intermediate" => Ok(Model::Intermediate),
            "xxz" => Ok(Model::Xxz),
            "hs" => Ok(Model::Hs),
            "deformed-hs" => Ok(Model::DeformedHs),
            other => Err(format!(
                "unknown model '{other}' (expected deformed-L|deformed-R|inozemtsev|intermediate|xxz|hs|deformed-hs)"
            )),
        }
    }
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::DeformedL => "deformed-L",
            Model::DeformedR => "deformed-R",
            Model::Inozemtsev => "inozemtsev",
            Model::Intermediate => "intermediate",
            Model::Xxz => "xxz",
            Model::Hs => "hs",
            Model::DeformedHs => "deformed-hs",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ellspin",
    about = "Deformed elliptic long-range spin chain laboratory",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Number of sites (2..=12)
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Interaction-range parameter kappa >= 0 (0 = trigonometric branch)
    #[arg(long, default_value_t = 0.7)]
    pub kappa: f64,
    /// Anisotropy eta, complex literal "a+bi"
    #[arg(long, default_value = "0+0.4i")]
    pub eta: String,
    /// Dynamical parameter a, complex literal "a+bi"
    #[arg(long, default_value = "1.3")]
    pub a: String,
    /// Anisotropy gamma of the short-range XXZ chain
    #[arg(long, default_value_t = 0.23)]
    pub gamma: f64,
    /// Intermediate-chain parameter a', complex literal
    #[arg(long = "a-prime", default_value = "0+0.7i")]
    pub a_prime: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the named verification suite and write a JSON report
    Verify {
        /// Suite: elliptic|rmatrix|chain|qmbs|limits|all
        #[arg(long, default_value = "all")]
        suite: String,
        /// RNG seed; equal seeds give bit-identical residual lists
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Optional overrides forced onto the random parameter draws
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long = "a-prime")]
        a_prime: Option<String>,
        /// Output path (stdout when omitted)
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Eigenvalues of one model at one parameter point
    Spectrum {
        /// Model: deformed-L|deformed-R|inozemtsev|intermediate|xxz|hs|deformed-hs
        #[arg(long)]
        model: String,
        #[command(flatten)]
        params: ModelArgs,
        /// Restrict to the S^z sector with this many down spins
        #[arg(long)]
        sector: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Spectral flow: one spectrum block per grid point of a swept parameter
    Sweep {
        #[arg(long)]
        model: String,
        /// Swept parameter: kappa|gamma|eta-im|eta-re|a-re|a-im|a-prime-im
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of grid points (>= 2)
        #[arg(long)]
        steps: usize,
        /// Geometric instead of linear spacing
        #[arg(long, default_value_t = false)]
        log: bool,
        #[command(flatten)]
        params: ModelArgs,
        #[arg(long)]
        sector: Option<usize>,
        /// Concurrent grid evaluations (default: ELLSPIN_JOBS or 1)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Magnon table: momentum indices, G' eigenvalues, L/R energies
    Magnons {
        #[command(flatten)]
        params: ModelArgs,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Freezing diagnostics: deviations, gate spread, fitted A*
    Freeze {
        #[command(flatten)]
        params: ModelArgs,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn chain_params(args: &ModelArgs) -> std::result::Result<ChainParams, String> {
    let eta = parse_complex(&args.eta)?;
    let a = parse_complex(&args.a)?;
    ChainParams::new(args.n, args.kappa, eta, a).map_err(|e| e.to_string())
}

fn build_model(model: Model, args: &ModelArgs) -> std::result::Result<SpinOperator, CmdError> {
    let op = match model {
        Model::DeformedL => h_left(&chain_params(args).map_err(CmdError::Usage)?),
        Model::DeformedR => h_right(&chain_params(args).map_err(CmdError::Usage)?),
        Model::Inozemtsev => h_inozemtsev(&chain_params(args).map_err(CmdError::Usage)?),
        Model::Hs => {
            // kappa is irrelevant; force the trigonometric branch
            let mut a = args.clone();
            a.kappa = 0.0;
            h_haldane_shastry(&chain_params(&a).map_err(CmdError::Usage)?)
        }
        Model::DeformedHs => {
            let mut a = args.clone();
            a.kappa = 0.0;
            h_deformed_hs(&chain_params(&a).map_err(CmdError::Usage)?)
        }
        Model::Intermediate => {
            let p = chain_params(args).map_err(CmdError::Usage)?;
            let a_prime = parse_complex(&args.a_prime).map_err(CmdError::Usage)?;
            h_intermediate(a_prime, &p)
        }
        Model::Xxz => {
            let a = parse_complex(&args.a).map_err(CmdError::Usage)?;
            XxzChain::new(args.gamma, a, args.n).map(|x| x.h)
        }
    };
    op.map_err(CmdError::Run)
}

fn params_json(_model: Model, args: &ModelArgs) -> String {
    let eta = parse_complex(&args.eta).unwrap_or(C64::new(f64::NAN, f64::NAN));
    let a = parse_complex(&args.a).unwrap_or(C64::new(f64::NAN, f64::NAN));
    let a_prime = parse_complex(&args.a_prime).unwrap_or(C64::new(f64::NAN, f64::NAN));
    format!(
        "{{\"n\":{},\"kappa\":{},\"eta\":{},\"a\":{},\"gamma\":{},\"a_prime\":{}}}",
        args.n,
        fmt_f64(args.kappa),
        fmt_complex_pair(eta),
        fmt_complex_pair(a),
        fmt_f64(args.gamma),
        fmt_complex_pair(a_prime),
    )
}

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Run(e)
    }
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn spectrum_block(model: Model, args: &ModelArgs, sector: Option<usize>) -> std::result::Result<String, CmdError> {
    let op = build_model(model, args)?;
    let eigs = spectrum(&op, sector).map_err(CmdError::Run)?;
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"model\":\"{}\",\"params\":{},\"sector\":{},\"eigenvalues\":[",
        model.name(),
        params_json(model, args),
        match sector {
            Some(k) => k.to_string(),
            None => "null".into(),
        }
    );
    for (i, e) in eigs.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&fmt_complex_pair(*e));
    }
    s.push_str("]}");
    Ok(s)
}

fn spectrum_csv(model: Model, args: &ModelArgs, sector: Option<usize>) -> std::result::Result<String, CmdError> {
    let op = build_model(model, args)?;
    let eigs = spectrum(&op, sector).map_err(CmdError::Run)?;
    let mut s = String::from("re,im\n");
    for e in eigs {
        let _ = writeln!(s, "{},{}", fmt_f64(e.re), fmt_f64(e.im));
    }
    Ok(s)
}

/// Run the verify command; returns the process exit code.
pub fn cmd_verify(
    suite: &str,
    seed: u64,
    overrides: &Overrides,
    output: &Option<PathBuf>,
) -> i32 {
    let suite = match Suite::from_str(suite) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("ellspin: {e}");
            return EXIT_USAGE;
        }
    };
    // statically invalid overrides are usage errors, not failed checks
    if let Some(eta) = overrides.eta {
        if eta == C64::new(0.0, 0.0) {
            eprintln!("ellspin: eta = 0 violates the parameter invariant theta(2 eta) != 0");
            return EXIT_USAGE;
        }
    }
    if let Some(n) = overrides.n {
        if !(2..=chain::MAX_SITES).contains(&n) {
            eprintln!("ellspin: N = {n} outside 2..=12");
            return EXIT_USAGE;
        }
    }
    let results = run_suite(suite, seed, overrides);
    let json = match serde_json::to_string_pretty(&results) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("ellspin: serialisation failed: {e}");
            return EXIT_INFRASTRUCTURE;
        }
    };
    if write_output(output, &format!("{json}\n")).is_err() {
        eprintln!("ellspin: cannot write report");
        return EXIT_INFRASTRUCTURE;
    }
    for r in &results {
        eprintln!(
            "{} {:<32} residual {:>12.3e}  tolerance {:>8.1e}  [{} ms]",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.residual,
            r.tolerance,
            r.runtime_ms
        );
    }
    if results.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

pub fn cmd_spectrum(
    model: &str,
    args: &ModelArgs,
    sector: Option<usize>,
    format: &str,
    output: &Option<PathBuf>,
) -> i32 {
    let (model, format) = match (Model::from_str(model), OutputFormat::from_str(format)) {
        (Ok(m), Ok(f)) => (m, f),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("ellspin: {e}");
            return EXIT_USAGE;
        }
    };
    let content = match format {
        OutputFormat::Json => spectrum_block(model, args, sector).map(|b| format!("{b}\n")),
        OutputFormat::Csv => spectrum_csv(model, args, sector),
    };
    finish(content, output)
}

fn sweep_grid(from: f64, to: f64, steps: usize, log: bool) -> std::result::Result<Vec<f64>, String> {
    if steps < 2 {
        return Err("sweep needs steps >= 2".into());
    }
    if !from.is_finite() || !to.is_finite() {
        return Err("sweep bounds must be finite".into());
    }
    if log {
        if from <= 0.0 || to <= 0.0 {
            return Err("log spacing needs positive bounds".into());
        }
        let (lf, lt) = (from.ln(), to.ln());
        Ok((0..steps)
            .map(|k| (lf + (lt - lf) * k as f64 / (steps - 1) as f64).exp())
            .collect())
    } else {
        Ok((0..steps)
            .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
            .collect())
    }
}

fn apply_sweep_param(args: &ModelArgs, param: &str, value: f64) -> std::result::Result<ModelArgs, String> {
    let mut a = args.clone();
    let eta = parse_complex(&a.eta)?;
    let av = parse_complex(&a.a)?;
    let ap = parse_complex(&a.a_prime)?;
    match param {
        "kappa" => a.kappa = value,
        "gamma" => a.gamma = value,
        "eta-im" => a.eta = format!("{}+{}i", eta.re, value),
        "eta-re" => a.eta = format!("{}+{}i", value, eta.im),
        "a-re" => a.a = format!("{}+{}i", value, av.im),
        "a-im" => a.a = format!("{}+{}i", av.re, value),
        "a-prime-im" => a.a_prime = format!("{}+{}i", ap.re, value),
        other => return Err(format!("unknown sweep parameter '{other}'")),
    }
    Ok(a)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    model: &str,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    log: bool,
    args: &ModelArgs,
    sector: Option<usize>,
    jobs: Option<usize>,
    format: &str,
    output: &Option<PathBuf>,
) -> i32 {
    let model = match Model::from_str(model) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("ellspin: {e}");
            return EXIT_USAGE;
        }
    };
    if OutputFormat::from_str(format) != Ok(OutputFormat::Json) {
        eprintln!("ellspin: sweeps are emitted as a single JSON artifact");
        return EXIT_USAGE;
    }
    let grid = match sweep_grid(from, to, steps, log) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("ellspin: {e}");
            return EXIT_USAGE;
        }
    };
    let jobs = jobs
        .or_else(|| {
            std::env::var("ELLSPIN_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("ellspin: thread pool: {e}");
            return EXIT_INFRASTRUCTURE;
        }
    };
    // Sweeping the short-range model over kappa means following the
    // deformed chain toward its short-range limit: eta is derived from
    // gamma as eta = -i pi gamma / kappa and the spectrum rescaled by
    // sinh^2(kappa)/kappa^2, so the grid converges onto the standalone xxz
    // spectrum. Standalone xxz (any other parameter) takes gamma directly.
    let xxz_linked = model == Model::Xxz && param == "kappa";
    let blocks: Vec<std::result::Result<String, CmdError>> = pool.install(|| {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&v| {
                let block = if xxz_linked {
                    let mut point_args = args.clone();
                    point_args.kappa = v;
                    point_args.eta =
                        format!("0{:+}i", -std::f64::consts::PI * args.gamma / v);
                    let p = chain_params(&point_args).map_err(CmdError::Usage)?;
                    let scale = C64::new(v.sinh().powi(2) / (v * v), 0.0);
                    let op = h_left(&p).map_err(CmdError::Run)?.scaled(scale);
                    let eigs = spectrum(&op, sector).map_err(CmdError::Run)?;
                    let mut s = format!(
                        "{{\"model\":\"{}\",\"params\":{},\"sector\":{},\"eigenvalues\":[",
                        model.name(),
                        params_json(model, &point_args),
                        match sector {
                            Some(k) => k.to_string(),
                            None => "null".into(),
                        }
                    );
                    for (i, e) in eigs.iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        s.push_str(&fmt_complex_pair(*e));
                    }
                    s.push_str("]}");
                    s
                } else {
                    let point_args =
                        apply_sweep_param(args, param, v).map_err(CmdError::Usage)?;
                    spectrum_block(model, &point_args, sector)?
                };
                Ok(format!("{{\"value\":{},\"spectrum\":{block}}}", fmt_f64(v)))
            })
            .collect()
    });
    let mut body = String::new();
    let _ = write!(
        body,
        "{{\"model\":\"{}\",\"param\":\"{param}\",\"points\":[",
        model.name()
    );
    for (i, b) in blocks.into_iter().enumerate() {
        match b {
            Ok(s) => {
                if i > 0 {
                    body.push(',');
                }
                body.push_str(&s);
            }
            Err(e) => return report(e),
        }
    }
    body.push_str("]}\n");
    finish(Ok(body), output)
}

pub fn cmd_magnons(args: &ModelArgs, format: &str, output: &Option<PathBuf>) -> i32 {
    let format = match OutputFormat::from_str(format) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("ellspin: {e}");
            return EXIT_USAGE;
        }
    };
    let run = || -> std::result::Result<String, CmdError> {
        let params = chain_params(args).map_err(CmdError::Usage)?;
        let gp = chain::g_normalized(&params)?;
        let hl = h_left(&params)?;
        let hr = h_right(&params)?;
        let states = magnon_states(&params)?;
        match format {
            OutputFormat::Json => {
                let mut s = format!(
                    "{{\"params\":{},\"magnons\":[",
                    params_json(Model::DeformedL, args)
                );
                for (i, m) in states.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let gval = rayleigh(&gp, &m.vector);
                    let el = rayleigh(&hl, &m.vector);
                    let er = rayleigh(&hr, &m.vector);
                    let _ = write!(
                        s,
                        "{{\"momentum_index\":{},\"g_eigenvalue\":{},\"energy_left\":{},\"energy_right\":{}}}",
                        m.momentum_index,
                        fmt_complex_pair(gval),
                        fmt_complex_pair(el),
                        fmt_complex_pair(er)
                    );
                }
                s.push_str("]}\n");
                Ok(s)
            }
            OutputFormat::Csv => {
                let mut s =
                    String::from("momentum_index,g_re,g_im,e_left_re,e_left_im,e_right_re,e_right_im\n");
                for m in &states {
                    let gval = rayleigh(&gp, &m.vector);
                    let el = rayleigh(&hl, &m.vector);
                    let er = rayleigh(&hr, &m.vector);
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        m.momentum_index,
                        fmt_f64(gval.re),
                        fmt_f64(gval.im),
                        fmt_f64(el.re),
                        fmt_f64(el.im),
                        fmt_f64(er.re),
                        fmt_f64(er.im)
                    );
                }
                Ok(s)
            }
        }
    };
    finish(run(), output)
}

pub fn cmd_freeze(args: &ModelArgs, format: &str, output: &Option<PathBuf>) -> i32 {
    if OutputFormat::from_str(format).is_err() {
        eprintln!("ellspin: unknown format '{format}'");
        return EXIT_USAGE;
    }
    let run = || -> std::result::Result<String, CmdError> {
        let params = chain_params(args).map_err(CmdError::Usage)?;
        let qp = QmbsParams::new(params, 1.0, C64::new(0.0, 0.1))?;
        let mut s = String::from("{\"chirality\":{");
        for (i, (label, chir)) in [("left", Chirality::Left), ("right", Chirality::Right)]
            .into_iter()
            .enumerate()
        {
            let rep = freeze_check(chir, &qp)?;
            if i > 0 {
                s.push(',');
            }
            let _ = write!(
                s,
                "\"{label}\":{{\"deviation\":{},\"gate_spread\":{},\"a_star\":{},\"fitted_constant\":{}}}",
                fmt_f64(rep.deviation),
                fmt_f64(rep.gate_spread),
                fmt_complex_pair(rep.a_star),
                fmt_complex_pair(rep.fitted_constant)
            );
        }
        let _ = writeln!(s, "}},\"params\":{}}}", params_json(Model::DeformedL, args));
        Ok(s)
    };
    finish(run(), output)
}

fn report(e: CmdError) -> i32 {
    match e {
        CmdError::Usage(msg) => {
            eprintln!("ellspin: {msg}");
            EXIT_USAGE
        }
        CmdError::Run(err) => match err {
            Error::InvalidParams(_) | Error::SizeCap(_) | Error::SectorContract(_) => {
                eprintln!("ellspin: {err}");
                EXIT_USAGE
            }
            other => {
                eprintln!("ellspin: {other}");
                EXIT_INFRASTRUCTURE
            }
        },
    }
}

fn finish(content: std::result::Result<String, CmdError>, output: &Option<PathBuf>) -> i32 {
    match content {
        Ok(c) => {
            if write_output(output, &c).is_err() {
                eprintln!("ellspin: cannot write output");
                return EXIT_INFRASTRUCTURE;
            }
            EXIT_OK
        }
        Err(e) => report(e),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Verify {
            suite,
            seed,
            n,
            kappa,
            eta,
            a,
            gamma,
            a_prime,
            output,
        } => {
            let parse_opt = |o: &Option<String>| -> std::result::Result<Option<C64>, String> {
                o.as_deref().map(parse_complex).transpose()
            };
            let (eta, a, a_prime) = match (parse_opt(&eta), parse_opt(&a), parse_opt(&a_prime)) {
                (Ok(e), Ok(av), Ok(ap)) => (e, av, ap),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    eprintln!("ellspin: {e}");
                    return EXIT_USAGE;
                }
            };
            let overrides = Overrides {
                n,
                kappa,
                eta,
                a,
                gamma,
                a_prime,
            };
            cmd_verify(&suite, seed, &overrides, &output)
        }
        Command::Spectrum {
            model,
            params,
            sector,
            format,
            output,
        } => cmd_spectrum(&model, &params, sector, &format, &output),
        Command::Sweep {
            model,
            param,
            from,
            to,
            steps,
            log,
            params,
            sector,
            jobs,
            format,
            output,
        } => cmd_sweep(
            &model, &param, from, to, steps, log, &params, sector, jobs, &format, &output,
        ),
        Command::Magnons {
            params,
            format,
            output,
        } => cmd_magnons(&params, &format, &output),
        Command::Freeze {
            params,
            format,
            output,
        } => cmd_freeze(&params, &format, &output),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.3").unwrap(), C64::new(1.3, 0.0));
        assert_eq!(parse_complex("0+0.4i").unwrap(), C64::new(0.0, 0.4));
        assert_eq!(parse_complex("-2i").unwrap(), C64::new(0.0, -2.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), C64::new(0.5, -0.25));
        assert_eq!(parse_complex("1e-3+0.4i").unwrap(), C64::new(1e-3, 0.4));
        assert_eq!(parse_complex("0-10000i").unwrap(), C64::new(0.0, -10000.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-1.2E-4-3i").unwrap(), C64::new(-1.2e-4, -3.0));
        assert!(parse_complex("foo").is_err());
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn float_format_round_trips() {
        for v in [1.0 / 3.0, -2.718281828459045e-7, 1e300, 0.1 + 0.2] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn sweep_grids() {
        let g = sweep_grid(0.0, 4.0, 9, false).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[8], 4.0);
        let lg = sweep_grid(1.0, 100.0, 3, true).unwrap();
        assert!((lg[1] - 10.0).abs() < 1e-12);
        assert!(sweep_grid(1.0, 2.0, 1, false).is_err());
        assert!(sweep_grid(0.0, 2.0, 3, true).is_err());
    }
}
