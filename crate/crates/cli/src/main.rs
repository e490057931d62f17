//! `pqtrain`: complementary waveforms, pulse-train designs and their ambiguity maps.

mod commands;
mod failure;
mod inputs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "pqtrain",
    version,
    about = "Complementary waveforms, pulse-train designs and ambiguity maps"
)]
pub struct Cli {
    /// Worker threads for grid evaluation (output does not depend on it).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a Golay pair or a paraunitary matrix.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Build a transmit/receive design and report its null order and SNR gain.
    Design {
        #[command(subcommand)]
        kind: DesignKind,
    },
    /// Re-check a design file (and optionally a waveform file).
    Verify(VerifyArgs),
    /// Compute a cross-ambiguity map and write CSV and/or PGM.
    Ambiguity(AmbiguityArgs),
    /// Render a point-target scene and report target visibility.
    Scene(SceneArgs),
    /// Null order and SNR gain of the conventional, PTM, max-SNR and binomial designs.
    Table1 {
        /// Pulse count (a power of two >= 4).
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Null order for the max-SNR row (default N/2).
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Golay complementary pair, two CSV lines `x` then `y`.
    Golay {
        /// Sequence length (a power of two).
        #[arg(long)]
        length: usize,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2^K x 2^K paraunitary matrix; rows per line, entries separated by `;`.
    Paraunitary {
        /// Recursion order K.
        #[arg(long)]
        order: u32,
        /// Chip length of the seed Golay pair (a power of two).
        #[arg(long)]
        chip_length: usize,
        /// Output file (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct DesignOut {
    /// Output design file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum DesignKind {
    /// Prouhet-Thue-Morse order with unit weights.
    Ptm {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: DesignOut,
    },
    /// Alternating order with binomial weights.
    Binomial {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: DesignOut,
    },
    /// Alternating order with unit weights.
    Conventional {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: DesignOut,
    },
    /// Largest SNR gain subject to a null of order M.
    Maxsnr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Largest accepted KKT residual.
        #[arg(long)]
        kkt_tolerance: Option<f64>,
        /// Interior-point iteration cap.
        #[arg(long)]
        max_iterations: Option<usize>,
        #[command(flatten)]
        out: DesignOut,
    },
    /// Mixed-radix product of binary design files (factor 1 varies fastest).
    Compose {
        /// Binary design file; repeat for each factor.
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
        #[command(flatten)]
        out: DesignOut,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Design file to check.
    #[arg(long)]
    design: PathBuf,
    /// Golay pair, complementary set or paraunitary matrix file.
    #[arg(long)]
    waveform: Option<PathBuf>,
    /// Relative null-order tolerance for non-integer weights.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Also require the SNR gain to match the max-SNR optimum for (N, M).
    #[arg(long)]
    optimal: bool,
}

#[derive(Args, Debug)]
pub struct AmbiguityArgs {
    /// ptmN, binomialN, conventionalN, maxsnrN-M, or a design file.
    #[arg(long)]
    design: String,
    /// Chip length of the generated Golay pair.
    #[arg(long, default_value_t = 64, conflicts_with = "waveform")]
    golay: usize,
    /// Golay pair, complementary set or paraunitary matrix file.
    #[arg(long)]
    waveform: Option<PathBuf>,
    /// Doppler grid `lo:hi:count` in radians (default 1024 points over [-pi, pi)).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Band `lo:hi` for the sidelobe report (default the whole grid).
    #[arg(long, allow_hyphen_values = true)]
    band: Option<String>,
    /// Matrix-valued map from the paraunitary matrix; files get `_i_j` suffixes.
    #[arg(long)]
    mimo: bool,
    /// CSV output (default stdout when no PGM is requested).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// PGM heatmap output.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SceneArgs {
    /// Scene file, one `delay_bin theta_rad power_db` target per line.
    #[arg(long)]
    file: PathBuf,
    /// ptmN, binomialN, conventionalN, maxsnrN-M, or a design file.
    #[arg(long)]
    design: String,
    /// Chip length of the generated Golay pair.
    #[arg(long, default_value_t = 64, conflicts_with = "waveform")]
    golay: usize,
    /// Golay pair or complementary set file.
    #[arg(long)]
    waveform: Option<PathBuf>,
    /// Doppler grid `lo:hi:count` in radians.
    #[arg(long, default_value = "-0.25:0.25:501", allow_hyphen_values = true)]
    grid: String,
    /// Only targets whose Doppler lies in `lo:hi` are reported.
    #[arg(long, default_value = "-0.1:0.1", allow_hyphen_values = true)]
    band: String,
    /// PGM output.
    #[arg(long, default_value = "scene.pgm")]
    pgm: PathBuf,
    /// Optional CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Report lines and an optional artifact destined for stdout.
#[derive(Default)]
pub struct Output {
    pub report: Vec<String>,
    pub stdout: Option<Vec<u8>>,
}

impl Output {
    pub fn line(&mut self, fields: &[(&str, String)]) {
        let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
        self.report.push(parts.join(" "));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = Output::default();
    let result = configure_threads(cli.threads).and_then(|()| commands::run(cli.command, &mut out));

    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut so = stdout.lock();
    let mut se = stderr.lock();
    let report_to: &mut dyn Write = if out.stdout.is_some() {
        &mut se
    } else {
        &mut so
    };
    for line in &out.report {
        let _ = writeln!(report_to, "{line}");
    }
    if let Some(bytes) = &out.stdout {
        let _ = so.write_all(bytes);
    }
    let _ = so.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = writeln!(se, "pqtrain: {f}");
            ExitCode::from(f.code() as u8)
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), Failure> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Usage("--threads must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))
}
