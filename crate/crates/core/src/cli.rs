//! Command-line front end.
//!
//! Exit codes: 0 stable verdict or success, 1 input error, 2 falsified,
//! 3 inconclusive, 4 envelope sign precondition violated, 5 IO failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::fdi_sim::{self, check_alpha_grid, level_matrix, FuzzySystem, McMode, SimError};
use crate::fuzzy_num::{FuzzyNumber, FuzzyVector};
use crate::metrics::{d_fuzzy_vec, FuzzyMetric};
use crate::stability::{self, AnalyzeOptions, FalsifierConfig, FALSIFY_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// On-disk description of a fuzzy system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<FuzzyNumber>>,
    pub x0: Vec<FuzzyNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn sim_err(e: SimError) -> CliError {
    if e.is_precondition() {
        CliError::Precondition(e.to_string())
    } else {
        CliError::Input(e.to_string())
    }
}

/// Parses JSON, naming the path of the first offending value on failure.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." {
            String::new()
        } else {
            format!(" at {path}")
        };
        input_err(format!("{origin}{at}: {}", e.into_inner()))
    })
}

impl SystemFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let f: SystemFile = parse_json(text, origin)?;
        f.validate()
            .map_err(|m| input_err(format!("{origin}: {m}")))?;
        Ok(f)
    }

    /// Shape checks beyond what the JSON schema enforces.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.n;
        if self.h.len() != n {
            return Err(format!("H: expected {n} rows, found {}", self.h.len()));
        }
        for (i, row) in self.h.iter().enumerate() {
            if row.len() != n {
                return Err(format!("H[{i}]: expected {n} entries, found {}", row.len()));
            }
        }
        if self.x0.len() != n {
            return Err(format!("x0: expected {n} entries, found {}", self.x0.len()));
        }
        if let Some(a) = &self.alphas {
            check_alpha_grid(a).map_err(|e| format!("alphas: {e}"))?;
        }
        if let Some(t) = &self.t {
            if t.len() != n {
                return Err(format!("T: expected {n} rows, found {}", t.len()));
            }
            for (i, row) in t.iter().enumerate() {
                if row.len() != n {
                    return Err(format!("T[{i}]: expected {n} entries, found {}", row.len()));
                }
                if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                    return Err(format!("T[{i}][{j}]: not finite"));
                }
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Result<FuzzySystem, CliError> {
        FuzzySystem::new(
            self.h.clone(),
            FuzzyVector::new(self.x0.clone()),
            self.alphas.clone(),
        )
        .map_err(sim_err)
    }

    pub fn transform(&self) -> Option<DMatrix<f64>> {
        self.t.as_deref().map(stability::from_rows)
    }

    /// Canonical pretty-printed JSON.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system file serializes")
    }
}

/// A distance operand: one fuzzy number or a vector of them.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FuzzyOperand {
    Number(FuzzyNumber),
    Vector(Vec<FuzzyNumber>),
}

impl FuzzyOperand {
    pub fn into_vector(self) -> FuzzyVector {
        match self {
            FuzzyOperand::Number(x) => FuzzyVector::new(vec![x]),
            FuzzyOperand::Vector(v) => FuzzyVector::new(v),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fdi",
    version,
    about = "Stability and reachability of linear fuzzy difference inclusions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide stability of the support-level interval matrix; prints a JSON verdict.
    Analyze {
        file: PathBuf,
        /// Random members checked by the falsifier.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write exact attainable-set envelopes as CSV (k,alpha,i,lo,hi).
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Output path; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated level grid, overriding the file.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        /// Use the interval box over-approximation, which also accepts
        /// sign-indefinite systems.
        #[arg(long)]
        over_approximate: bool,
    },
    /// Monte Carlo trajectories at level 0 as CSV (run,k,i,value), with a
    /// containment and spectral-radius report.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = McMode::Constant)]
        mode: McMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the distance between two fuzzy numbers or fuzzy vectors.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = FuzzyMetric::Membership)]
        metric: FuzzyMetric,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_system(path: &Path) -> Result<SystemFile, CliError> {
    SystemFile::parse(&read(path)?, &path.display().to_string())
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Sends `body` to `out_path` if given, else to `stdout`.
fn emit<F>(out_path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out_path {
        Some(p) => {
            let file = File::create(p).map_err(io_err(p))?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(io_err(p))?;
            w.flush().map_err(io_err(p))
        }
        None => body(stdout).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn cmd_analyze(file: &Path, n: usize, seed: u64, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let sf = load_system(file)?;
    let sys = sf.system()?;
    let h = level_matrix(&sys, 0.0).map_err(sim_err)?;
    let opts = AnalyzeOptions {
        transform: sf.transform(),
        falsifier: FalsifierConfig {
            n_samples: n,
            seed,
            ..Default::default()
        },
        ..Default::default()
    };
    let verdict = stability::analyze(&h, &opts).map_err(|e| input_err(e.to_string()))?;
    let json = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
    writeln!(stdout, "{json}").map_err(io_err(Path::new("<stdout>")))?;
    Ok(verdict.exit_code())
}

fn cmd_simulate(
    file: &Path,
    k: usize,
    out: Option<&Path>,
    alphas: Option<Vec<f64>>,
    over_approximate: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut sys = load_system(file)?.system()?;
    if let Some(a) = alphas {
        sys = sys
            .with_alphas(a)
            .map_err(|e| input_err(format!("--alphas: {e}")))?;
    }
    let envs = if over_approximate {
        sys.alphas()
            .iter()
            .map(|&a| fdi_sim::interval_propagate(&sys, a, k))
            .collect::<Result<Vec<_>, _>>()
            .map_err(sim_err)?
    } else {
        // validates stacking at every step
        fdi_sim::assemble_fuzzy_attainable(&sys, k)
            .map_err(sim_err)?
            .envelopes
    };
    emit(out, stdout, |w| fdi_sim::write_envelope_csv(w, &envs))?;
    let summary: &mut dyn Write = if out.is_some() { stdout } else { stderr };
    let mut text = format!("final box widths at k = {k}\n");
    for (alpha, widths) in fdi_sim::final_widths(&envs) {
        let ws: Vec<String> = widths.iter().map(|w| fdi_sim::fmt_sig12(*w)).collect();
        text.push_str(&format!(
            "alpha {}: {}\n",
            fdi_sim::fmt_sig12(alpha),
            ws.join(" ")
        ));
    }
    summary
        .write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OracleReport {
    alpha: f64,
    mode: McMode,
    runs: usize,
    steps: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    containment: Option<fdi_sim::ContainmentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    envelope_unavailable: Option<String>,
    spectral: SpectralReport,
}

#[derive(Debug, Serialize)]
struct SpectralReport {
    vertices: usize,
    samples: usize,
    max_spectral_radius: f64,
    above_one: usize,
}

struct OracleArgs<'a> {
    file: &'a Path,
    k: usize,
    n: usize,
    seed: u64,
    mode: McMode,
    out: Option<&'a Path>,
}

fn cmd_oracle(
    args: OracleArgs<'_>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let OracleArgs {
        file,
        k,
        n,
        seed,
        mode,
        out,
    } = args;
    let sys = load_system(file)?.system()?;
    let alpha = 0.0;
    let runs = fdi_sim::mc_trajectories(&sys, alpha, k, n, seed, mode).map_err(sim_err)?;
    let (containment, envelope_unavailable) = match fdi_sim::envelope_propagate(&sys, alpha, k) {
        Ok(env) => (Some(fdi_sim::containment(&env, &runs, 1e-12)), None),
        Err(e) if e.is_precondition() => (None, Some(e.to_string())),
        Err(e) => return Err(sim_err(e)),
    };
    let h = level_matrix(&sys, alpha).map_err(sim_err)?;
    let sampled = stability::sampled_radii(
        &h,
        &FalsifierConfig {
            n_samples: n,
            seed,
            ..Default::default()
        },
    )
    .map_err(|e| input_err(e.to_string()))?;
    let report = OracleReport {
        alpha,
        mode,
        runs: n,
        steps: k,
        seed,
        containment,
        envelope_unavailable,
        spectral: SpectralReport {
            vertices: sampled.vertices.len(),
            samples: n,
            max_spectral_radius: sampled.max().1,
            above_one: sampled
                .radii
                .iter()
                .filter(|&&r| r > 1.0 + FALSIFY_TOL)
                .count(),
        },
    };
    emit(out, stdout, |w| fdi_sim::write_mc_csv(w, &runs))?;
    let sink: &mut dyn Write = if out.is_some() { stdout } else { stderr };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    writeln!(sink, "{json}").map_err(io_err(Path::new("<stdout>")))?;
    Ok(EXIT_OK)
}

fn cmd_distance(
    a: &Path,
    b: &Path,
    metric: FuzzyMetric,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let load = |p: &Path| -> Result<FuzzyVector, CliError> {
        let op: FuzzyOperand = parse_json(&read(p)?, &p.display().to_string())?;
        Ok(op.into_vector())
    };
    let (x, y) = (load(a)?, load(b)?);
    let d = d_fuzzy_vec(&x, &y, metric).map_err(|e| input_err(e.to_string()))?;
    writeln!(stdout, "{}", fdi_sim::fmt_sig12(d)).map_err(io_err(Path::new("<stdout>")))?;
    Ok(EXIT_OK)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze { file, n, seed } => cmd_analyze(&file, n, seed, stdout),
        Command::Simulate {
            file,
            k,
            out,
            alphas,
            over_approximate,
        } => cmd_simulate(
            &file,
            k,
            out.as_deref(),
            alphas,
            over_approximate,
            stdout,
            stderr,
        ),
        Command::Oracle {
            file,
            k,
            n,
            seed,
            mode,
            out,
        } => cmd_oracle(
            OracleArgs {
                file: &file,
                k,
                n,
                seed,
                mode,
                out: out.as_deref(),
            },
            stdout,
            stderr,
        ),
        Command::Distance { a, b, metric } => cmd_distance(&a, &b, metric, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
