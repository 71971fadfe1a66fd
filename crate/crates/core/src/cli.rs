//! Command-line front end.
//!
//! Every command prints a `key: value` report that starts with the tool
//! version and the resolved configuration. Exit codes: 0 success, 2 usage or
//! parse error, 3 resource cap, 4 failed numerical or coloring check.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::coloring::{decompose, verify_properness_capped, write_coloring, Scheme};
use crate::config_space::{binomial, class_size, encode, rank, SpaceParams};
use crate::error::Error;
use crate::evolve::{ExactPropagator, StateVector, TrotterPlan, DEFAULT_DENSE_CAP};
use crate::integrals::{parse_fcidump, synthetic_table, IntegralTable, SyntheticKind};
use crate::slater::{build_ci_matrix_capped, SignMode, DEFAULT_MAX_DIMENSION};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest statevector the evolve command will allocate.
pub const DEFAULT_MAX_AMPLITUDES: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fci-sparse",
    version,
    about = "Sparse full-CI Hamiltonian tools"
)]
pub struct Cli {
    /// Number of spin orbitals. Inferred as 2·NORB when an FCIDUMP is given.
    #[arg(long, global = true)]
    pub orbitals: Option<u32>,
    /// Number of electrons. Inferred from NELEC when an FCIDUMP is given.
    #[arg(long, global = true)]
    pub electrons: Option<u32>,
    /// Largest CI dimension any command will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DIMENSION)]
    pub max_dimension: u64,
    /// Write the primary output here instead of stdout. For `evolve` this is the final state.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, sparsity and color counts of a space.
    Info,
    /// Build the CI matrix.
    Matrix {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Triplet)]
        format: Format,
    },
    /// Export the edge coloring of the interaction graph.
    Color {
        #[arg(long, value_enum, default_value_t = SchemeArg::Descriptor)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value_t = Format::Triplet)]
        format: Format,
    },
    /// Check that a coloring is proper and audit the closed-form pair labels.
    VerifyLabels {
        #[arg(long, value_enum, default_value_t = SchemeArg::Descriptor)]
        scheme: SchemeArg,
        /// Fail when closed-form labels disagree with counted labels.
        #[arg(long)]
        strict_formulas: bool,
    },
    /// Trotterized time evolution of a statevector.
    Evolve {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = SchemeArg::Descriptor)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        time: f64,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Occupied orbitals of the initial basis state, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', conflicts_with = "initial_state")]
        initial: Option<Vec<u32>>,
        /// Initial state file of `q re im` lines.
        #[arg(long)]
        initial_state: Option<PathBuf>,
        /// Largest dimension compared against the dense reference.
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
        dense_cap: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_AMPLITUDES)]
        max_amplitudes: u64,
        /// Write the summary here; stdout otherwise.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

/// Where the integrals come from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    #[arg(long, conflicts_with = "synthetic")]
    pub fcidump: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub synthetic: Option<SyntheticArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SignArg::Fermionic)]
    pub sign_mode: SignArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Triplet,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Descriptor,
    Pairlabel,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Descriptor => Scheme::Descriptor,
            SchemeArg::Pairlabel => Scheme::PairLabel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SyntheticArg {
    Diagonal,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Fermionic,
    NoParity,
}

impl From<SignArg> for SignMode {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Fermionic => SignMode::Fermionic,
            SignArg::NoParity => SignMode::NoParity,
        }
    }
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::usage(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Numerical(_) | Error::ImproperColoring { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Collects `key: value` lines.
#[derive(Debug, Default)]
struct Report(Vec<(String, String)>);

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.put("version", VERSION);
        r.put("command", command);
        r
    }

    fn put(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    match path {
        None => Ok(body(stdout)?),
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(path, e))?;
            {
                let mut w = io::BufWriter::new(tmp.as_file_mut());
                body(&mut w).map_err(|e| Failure::io(path, e))?;
                w.flush().map_err(|e| Failure::io(path, e))?;
            }
            tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
            Ok(())
        }
    }
}

fn space_from_flags(cli: &Cli) -> CliResult<SpaceParams> {
    match (cli.orbitals, cli.electrons) {
        (Some(o), Some(e)) => Ok(SpaceParams::new(o, e)?),
        _ => Err(Failure::usage("--orbitals and --electrons are required")),
    }
}

/// Resolved space and integral table.
struct Problem {
    space: SpaceParams,
    table: IntegralTable,
    origin: String,
}

fn load_problem(cli: &Cli, source: &Source) -> CliResult<Problem> {
    if let Some(path) = &source.fcidump {
        let file = File::open(path).map_err(|e| Failure::io(path, e))?;
        let dump = parse_fcidump(BufReader::new(file))?;
        let n_so = 2 * dump.header.norb;
        let n_e = dump.header.nelec;
        if let Some(o) = cli.orbitals.filter(|&o| o != n_so) {
            return Err(Failure::usage(format!(
                "--orbitals {o} contradicts FCIDUMP NORB={} ({n_so} spin orbitals)",
                dump.header.norb
            )));
        }
        if let Some(e) = cli.electrons.filter(|&e| e != n_e) {
            return Err(Failure::usage(format!(
                "--electrons {e} contradicts FCIDUMP NELEC={n_e}"
            )));
        }
        return Ok(Problem {
            space: SpaceParams::new(n_so, n_e)?,
            table: dump.table,
            origin: format!("fcidump {}", path.display()),
        });
    }
    let kind = match source.synthetic {
        Some(SyntheticArg::Diagonal) => SyntheticKind::DiagonalOneBody,
        Some(SyntheticArg::Random) => SyntheticKind::RandomSymmetric,
        None => {
            return Err(Failure::usage(
                "one of --fcidump or --synthetic is required",
            ))
        }
    };
    let space = space_from_flags(cli)?;
    // synthetic tables come in spin pairs; an odd space leaves the last orbital unused
    let n_so = space.n_orbitals() + space.n_orbitals() % 2;
    let table = synthetic_table(kind, source.seed, n_so)?;
    let name = match kind {
        SyntheticKind::DiagonalOneBody => "diagonal",
        SyntheticKind::RandomSymmetric => "random",
    };
    Ok(Problem {
        space,
        table,
        origin: format!("synthetic {name} seed {}", source.seed),
    })
}

fn put_space(r: &mut Report, p: SpaceParams) {
    r.put("orbitals", p.n_orbitals());
    r.put("electrons", p.n_electrons());
}

/// Parses `args` and runs the command, writing reports to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        Failure {
            code,
            message: e.render().to_string(),
        }
    })?;
    execute(&cli, stdout)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Info => {
            let p = space_from_flags(cli)?;
            let r = info_report(p)?;
            emit(out, stdout, |w| w.write_all(r.render().as_bytes()))
        }
        Command::Matrix { source, format } => {
            let prob = load_problem(cli, source)?;
            let h = build_ci_matrix_capped(
                prob.space,
                &prob.table,
                source.sign_mode.into(),
                cli.max_dimension,
            )?;
            match format {
                Format::Triplet => emit(out, stdout, |w| h.write_triplets(w)),
                Format::Report => {
                    let mut r = Report::new("matrix");
                    put_space(&mut r, prob.space);
                    r.put("integrals", &prob.origin);
                    r.put("sign_mode", sign_name(source.sign_mode));
                    r.put("dimension", h.dimension());
                    r.put("stored_entries", h.triplets().len());
                    r.put("max_abs", format!("{:e}", h.max_abs()));
                    r.put("core_energy", format!("{:e}", h.core_energy()));
                    r.put("integral_audit_issues", prob.table.audit().len());
                    emit(out, stdout, |w| w.write_all(r.render().as_bytes()))
                }
            }
        }
        Command::Color { scheme, format } => {
            let p = space_from_flags(cli)?;
            check_dim(p, cli.max_dimension)?;
            match format {
                Format::Triplet => {
                    let mut buf = Vec::new();
                    write_coloring(p, (*scheme).into(), &mut buf)?;
                    emit(out, stdout, |w| w.write_all(&buf))
                }
                Format::Report => {
                    let rep = verify_properness_capped(p, (*scheme).into(), cli.max_dimension)?;
                    let mut buf = Report::new("color").render().into_bytes();
                    rep.write(&mut buf)?;
                    emit(out, stdout, |w| w.write_all(&buf))
                }
            }
        }
        Command::VerifyLabels {
            scheme,
            strict_formulas,
        } => {
            let p = space_from_flags(cli)?;
            let rep = verify_properness_capped(p, (*scheme).into(), cli.max_dimension)?;
            let mut r = Report::new("verify-labels");
            r.put("strict_formulas", strict_formulas);
            let mut buf = r.render().into_bytes();
            rep.write(&mut buf)?;
            emit(out, stdout, |w| w.write_all(&buf))?;
            if !rep.is_proper() {
                return Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: format!("{} coloring is not proper", rep.scheme),
                });
            }
            if *strict_formulas && !rep.formula_mismatches.is_empty() {
                return Err(Failure {
                    code: EXIT_NUMERICAL,
                    message: format!(
                        "{} of {} edges disagree with the closed-form labels",
                        rep.formula_mismatches.len(),
                        rep.formula_edges
                    ),
                });
            }
            Ok(())
        }
        Command::Evolve {
            source,
            scheme,
            time,
            steps,
            order,
            initial,
            initial_state,
            dense_cap,
            max_amplitudes,
            summary,
        } => {
            if !time.is_finite() {
                return Err(Failure::usage("--time must be finite"));
            }
            if *steps == 0 {
                return Err(Failure::usage("--steps must be at least 1"));
            }
            let prob = load_problem(cli, source)?;
            let p = prob.space;
            let dim = p.dimension()?;
            let cap = cli.max_dimension.min(*max_amplitudes);
            check_dim(p, cap)?;
            let h = build_ci_matrix_capped(p, &prob.table, source.sign_mode.into(), cap)?;
            let psi0 = initial_psi(
                p,
                dim as usize,
                initial.as_deref(),
                initial_state.as_deref(),
            )?;
            let terms = decompose(&h, (*scheme).into())?;
            let plan = TrotterPlan {
                order: *order,
                steps: *steps,
                t: *time,
            };
            let run = plan.run(&terms, &psi0)?;

            let mut r = Report::new("evolve");
            put_space(&mut r, p);
            r.put("integrals", &prob.origin);
            r.put("sign_mode", sign_name(source.sign_mode));
            r.put("scheme", Scheme::from(*scheme));
            r.put("time", format!("{:e}", time));
            r.put("steps", steps);
            r.put("order", order);
            r.put("dt", format!("{:e}", plan.dt()));
            r.put(
                "initial",
                initial_name(p, initial.as_deref(), initial_state.as_deref()),
            );
            r.put("dimension", dim);
            r.put("terms", terms.len());
            r.put("norm_drift", format!("{:e}", run.norm_drift));
            r.put("core_energy", format!("{:e}", h.core_energy()));
            if h.dimension() <= *dense_cap {
                let exact = ExactPropagator::new(&h, *dense_cap)?;
                let reference = exact.evolve(*time, &psi0)?;
                r.put("reference", "dense");
                r.put("eigen_residual", format!("{:e}", exact.residual()));
                r.put(
                    "fidelity",
                    format!("{:.16e}", crate::evolve::fidelity(&run.state, &reference)?),
                );
                r.put(
                    "reference_error",
                    format!("{:e}", run.state.distance(&reference)?),
                );
            } else {
                r.put(
                    "reference",
                    format!("skipped (dimension above {dense_cap})"),
                );
            }
            match out {
                Some(path) => {
                    emit(Some(path), stdout, |w| run.state.write(w))?;
                    r.put("state_output", path.display());
                }
                None => r.put("state_output", "none"),
            }
            let text = r.render();
            emit(summary.as_deref(), stdout, |w| w.write_all(text.as_bytes()))
        }
    }
}

fn check_dim(p: SpaceParams, cap: u64) -> CliResult<()> {
    let dim = p.dimension()?;
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "CI dimension",
            requested: dim,
            cap,
        }
        .into());
    }
    Ok(())
}

fn sign_name(s: SignArg) -> &'static str {
    match s {
        SignArg::Fermionic => "fermionic",
        SignArg::NoParity => "no-parity",
    }
}

fn initial_psi(
    p: SpaceParams,
    dim: usize,
    orbitals: Option<&[u32]>,
    file: Option<&Path>,
) -> CliResult<StateVector> {
    if let Some(path) = file {
        let f = File::open(path).map_err(|e| Failure::io(path, e))?;
        let psi = StateVector::read(BufReader::new(f), dim)?;
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Failure::usage(format!(
                "initial state has norm {n}, expected 1"
            )));
        }
        return Ok(psi);
    }
    let x = match orbitals {
        Some(list) => encode(list, p)?,
        None => p.first(),
    };
    Ok(StateVector::basis(dim, rank(x, p)?.index())?)
}

fn initial_name(p: SpaceParams, orbitals: Option<&[u32]>, file: Option<&Path>) -> String {
    match (orbitals, file) {
        (_, Some(path)) => format!("file {}", path.display()),
        (Some(list), _) => encode(list, p).map(|x| x.to_string()).unwrap_or_default(),
        (None, None) => p.first().to_string(),
    }
}

fn info_report(p: SpaceParams) -> CliResult<Report> {
    let mut r = Report::new("info");
    put_space(&mut r, p);
    let (n_e, n_h) = (p.n_electrons(), p.n_holes());
    r.put("dimension", p.dimension()?);
    r.put("sparsity", p.sparsity());
    r.put("neighbors.single", class_size(p, 1));
    r.put("neighbors.double", class_size(p, 2));
    let singles = if n_e >= 1 && n_h >= 1 {
        binomial(p.n_orbitals(), 2)
    } else {
        0
    };
    let doubles = if n_e >= 2 && n_h >= 2 {
        3 * binomial(p.n_orbitals(), 4)
    } else {
        0
    };
    r.put("descriptor_colors.single", singles);
    r.put("descriptor_colors.double", doubles);
    r.put("descriptor_colors.total", 1 + singles + doubles);
    r.put("colors_per_node", p.sparsity());
    r.put("qubits", qubits(p.dimension()?));
    Ok(r)
}

/// `⌈log₂ D⌉`, the register width for the ranked encoding.
fn qubits(dim: u64) -> u32 {
    if dim <= 1 {
        0
    } else {
        64 - (dim - 1).leading_zeros()
    }
}
