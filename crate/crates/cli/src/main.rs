//! `g2forge`: run a verification pipeline and write its report.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use g2forge::report::{run_all, run_calibrate, run_cech, run_chern_weil, run_gerbe, run_identities, run_toy};
use g2forge::{Convention, Error, Report, RunConfig};
use sha2::{Digest, Sha256};

const BAD_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "g2forge", version, about = "Exact G2 identities, monopole gerbes on T7 and their bookkeeping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constants and type decompositions of the model 3-form.
    Identities(Opts),
    /// Calibration class of a coordinate subspace.
    Calibrate(Opts),
    /// Monopole gerbe of a coassociative 4-torus in T7.
    Gerbe(Opts),
    /// Adjunction identity and the characteristic pairing table.
    ChernWeil(Opts),
    /// Integer cohomology and Poincare-dual gerbe classes.
    Cech(Opts),
    /// The S1 x T6 product and the divisor pushforward.
    Toy(Opts),
    /// Every pipeline.
    All(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long, default_value = "default")]
    convention: Convention,
    #[arg(short = 'K', long = "truncation", default_value_t = 8)]
    truncation: i32,
    #[arg(long, default_value_t = 0.03)]
    sigma: f64,
    #[arg(long, default_value_t = 0.25)]
    radius: f64,
    #[arg(long, default_value_t = 26)]
    quad_order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; `G2FORGE_OUT` takes precedence.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifolds: Option<PathBuf>,
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Normal axes of the coassociative torus.
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [1, 2, 3])]
    axes: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [0.5, 0.5, 0.5])]
    offsets: Vec<f64>,
    /// Replacement 3-form, e.g. `e123 + e145 - e167`.
    #[arg(long)]
    phi: Option<String>,
    /// Coordinate subset for `calibrate`.
    #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6, 7])]
    subset: Vec<usize>,
}

impl Opts {
    fn config(&self) -> RunConfig {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        RunConfig {
            convention: self.convention,
            truncation: self.truncation,
            sigma: self.sigma,
            radius: self.radius,
            quad_order: self.quad_order,
            seed: self.seed,
            axes: [self.axes[0], self.axes[1], self.axes[2]],
            offsets: [self.offsets[0], self.offsets[1], self.offsets[2]],
            phi_override: self.phi.clone(),
            manifolds: path(&self.manifolds),
            complex: path(&self.complex),
            subset: self.subset.clone(),
        }
    }

    fn out_dir(&self) -> Option<PathBuf> {
        match std::env::var_os("G2FORGE_OUT") {
            Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
            _ => self.out.clone(),
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Unsolvable { .. } => 2,
        Error::Internal(_) => 1,
        _ => BAD_INPUT,
    }
}

fn write_artifacts(dir: &Path, report: &Report) -> std::io::Result<()> {
    fs::create_dir_all(dir.join("fields"))?;
    let mut artifacts = vec![("report.json".to_string(), report.to_json().into_bytes())];
    for f in &report.fields {
        artifacts.push((format!("fields/{}", f.name), f.contents.clone().into_bytes()));
    }
    let mut manifest = String::new();
    for (name, bytes) in &artifacts {
        fs::write(dir.join(name), bytes)?;
        manifest.push_str(&format!("{}  {}  {}\n", hex::encode(Sha256::digest(bytes)), bytes.len(), name));
    }
    fs::write(dir.join("manifest.txt"), manifest)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(BAD_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    let (opts, run): (&Opts, fn(&RunConfig) -> g2forge::Result<Report>) = match &cli.command {
        Command::Identities(o) => (o, run_identities),
        Command::Calibrate(o) => (o, run_calibrate),
        Command::Gerbe(o) => (o, run_gerbe),
        Command::ChernWeil(o) => (o, run_chern_weil),
        Command::Cech(o) => (o, run_cech),
        Command::Toy(o) => (o, run_toy),
        Command::All(o) => (o, run_all),
    };
    let cfg = opts.config();
    let mut report = match cfg.validate().and_then(|_| run(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("g2forge: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    report.timestamp = Some(chrono::Utc::now().to_rfc3339());
    match opts.out_dir() {
        Some(dir) => {
            if let Err(e) = write_artifacts(&dir, &report) {
                eprintln!("g2forge: cannot write {}: {e}", dir.display());
                return ExitCode::from(BAD_INPUT);
            }
            for c in &report.checks {
                println!("{:<10} {}", format!("{:?}", c.status).to_lowercase(), c.name);
            }
            println!("status: {:?}", report.status);
        }
        None => print!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}
