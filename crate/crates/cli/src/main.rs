//! `volut`: build finite volutive instances, check serialized structures and
//! run the named check suites.
//!
//! Exit codes: 0 when every check passes, 1 when a violation is found, 2 for
//! malformed input or an exceeded resource cap.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use volut::commands::{self, BuildArgs, CheckArgs, Outcome};
use volut::{run_suite, CliError, SuiteOptions, SuiteReport, DEFAULT_SEED, EXIT_MALFORMED, SUITES};
use volut_core::volutive::Kind;

#[derive(Parser)]
#[command(name = "volut", version, about = "Finite volutive categories: builders, checkers and suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Sample count override for sampled checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Resource cap override for enumerations.
    #[arg(long, global = true, env = "VOLUT_CAP")]
    cap: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Strict,
    Lax,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Strict => Kind::Strict,
            KindArg::Lax => Kind::Lax,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance and write its volutive structure as JSON.
    Build {
        /// fdvect, finset, quantale, finmod, bundled or prof-local.
        family: String,
        /// Field order for fdvect (2 or 3).
        #[arg(long)]
        q: Option<u8>,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Largest set for finset, largest value size for prof-local.
        #[arg(long)]
        max_size: Option<usize>,
        /// Ring preset (z4, f2xy, t2f2) or ring JSON file for finmod.
        #[arg(long)]
        ring: Option<String>,
        /// Bundled instance, quantale preset, or source category for prof-local.
        #[arg(long)]
        name: Option<String>,
        /// Target category for prof-local.
        #[arg(long)]
        target: Option<String>,
        /// Dualizing object index for closed families.
        #[arg(long)]
        dualizing: Option<usize>,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Keep one finite module per isomorphism class.
        #[arg(long)]
        skeletal: bool,
    },
    /// Run one checker on a serialized volutive structure.
    Check {
        file: PathBuf,
        /// volutive, category, zorro, pairing or dagger.
        #[arg(long, default_value = "volutive")]
        structure: String,
        /// Kind to check against; defaults to the kind in the file.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Run a named suite, or `all`.
    Suite { name: String },
    /// Profunctor operations.
    Prof {
        #[command(subcommand)]
        op: ProfOp,
    },
    /// Bimodule operations over finite F₂-algebras.
    Morita {
        #[command(subcommand)]
        op: MoritaOp,
    },
    /// Linear relation operations.
    Rel {
        #[command(subcommand)]
        op: RelOp,
    },
}

#[derive(Subcommand)]
enum ProfOp {
    /// `G ∘ F` for profunctors `F` then `G`.
    Compose { first: PathBuf, second: PathBuf },
    /// Internal hom `Y^X`.
    Ihom { x: PathBuf, y: PathBuf },
    /// Zorro identities for a category: terminal, arrow, chainN or a category JSON file.
    Zorro { category: String },
}

#[derive(Subcommand)]
enum MoritaOp {
    /// Balanced tensor `M ⊗ N`.
    Tensor { m: PathBuf, n: PathBuf },
    /// Intertwiner object `M^N`.
    Ihom { m: PathBuf, n: PathBuf },
    /// `Hom(P ⊗ N, M) ≅ Hom(P, M^N)`.
    Closedness { p: PathBuf, n: PathBuf, m: PathBuf },
    /// Hermitian checks and radical quotient of a bimodule with pairing.
    Herm { file: PathBuf },
}

#[derive(Subcommand)]
enum RelOp {
    Adjoint { file: PathBuf },
    /// `W ∘ V` for relations `V` then `W`.
    Compose { first: PathBuf, second: PathBuf },
    /// The seeded relation law battery.
    CheckLemmas,
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn render_report(common: &Common, r: &SuiteReport) -> String {
    match common.format {
        Format::Json => serde_json::to_string_pretty(r).expect("serializable") + "\n",
        Format::Text => r.to_string(),
    }
}

fn finish_report(common: &Common, r: &SuiteReport) -> Result<bool, CliError> {
    emit(common, &render_report(common, r))?;
    Ok(r.passed())
}

fn finish(common: &Common, o: Outcome) -> Result<bool, CliError> {
    match o {
        Outcome::Report(r) => finish_report(common, &r),
        Outcome::Data(v) => {
            emit(common, &(serde_json::to_string_pretty(&v).expect("serializable") + "\n"))?;
            Ok(true)
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let c = &cli.common;
    let opts = SuiteOptions { seed: c.seed, samples: c.samples, cap: c.cap };
    match cli.command {
        Command::Build { family, q, max_dim, max_size, ring, name, target, dualizing, kind, skeletal } => {
            let args = BuildArgs { family, q, max_dim, max_size, ring, name, target, dualizing, kind: kind.map(Kind::from), skeletal, cap: c.cap };
            let j = commands::cmd_build(&args)?;
            emit(c, &(serde_json::to_string_pretty(&j).expect("serializable") + "\n"))?;
            if let Some(p) = &c.output {
                eprintln!("wrote {} ({} objects, {} morphisms)", p.display(), j.category.objects.len(), j.d.morphisms.len());
            }
            Ok(true)
        }
        Command::Check { file, structure, kind } => {
            let args = CheckArgs { structure, kind: kind.map(Kind::from), seed: c.seed, samples: c.samples, cap: c.cap };
            finish_report(c, &commands::cmd_check(&file, &args)?)
        }
        Command::Suite { name } => {
            if name == "all" {
                let mut ok = true;
                let mut reports = Vec::new();
                for s in SUITES {
                    let r = run_suite(s, &opts)?;
                    ok &= r.passed();
                    reports.push(r);
                }
                let text = match c.format {
                    Format::Json => serde_json::to_string_pretty(&reports).expect("serializable") + "\n",
                    Format::Text => reports.iter().map(|r| r.to_string()).collect(),
                };
                emit(c, &text)?;
                Ok(ok)
            } else {
                finish_report(c, &run_suite(&name, &opts)?)
            }
        }
        Command::Prof { op } => match op {
            ProfOp::Compose { first, second } => finish(c, commands::cmd_prof_compose(&first, &second)?),
            ProfOp::Ihom { x, y } => finish(c, commands::cmd_prof_ihom(&x, &y, c.cap)?),
            ProfOp::Zorro { category } => finish_report(c, &commands::cmd_prof_zorro(&category, c.seed)?),
        },
        Command::Morita { op } => match op {
            MoritaOp::Tensor { m, n } => finish(c, commands::cmd_morita_tensor(&m, &n)?),
            MoritaOp::Ihom { m, n } => finish(c, commands::cmd_morita_ihom(&m, &n)?),
            MoritaOp::Closedness { p, n, m } => finish_report(c, &commands::cmd_morita_closedness(&p, &n, &m, c.seed)?),
            MoritaOp::Herm { file } => finish_report(c, &commands::cmd_morita_herm(&file, c.seed)?),
        },
        Command::Rel { op } => match op {
            RelOp::Adjoint { file } => finish(c, commands::cmd_rel_adjoint(&file)?),
            RelOp::Compose { first, second } => finish(c, commands::cmd_rel_compose(&first, &second)?),
            RelOp::CheckLemmas => finish_report(c, &run_suite("linrel", &opts)?),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_MALFORMED as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(ok) => ExitCode::from(volut::exit_code(ok) as u8),
        Err(e) => {
            eprintln!("volut: {e}");
            ExitCode::from(EXIT_MALFORMED as u8)
        }
    }
}
