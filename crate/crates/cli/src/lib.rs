//! Command-line front end for the cipher-system security checkers.
//!
//! The binary reads systems, adversary corpora, and negligibility policies
//! from JSON files, runs the exact deciders from `secdiag-core`, and
//! renders verdicts as text or JSON. Every check that has two independent
//! decision routes runs both and reports whether they agreed.
//!
//! Exit codes: `0` when the checked property holds (or holds vacuously),
//! `1` when it fails, `2` on input errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub mod fixtures;
pub mod formats;
pub mod report;
pub mod selftest;

use secdiag_core::ensemble::{
    check_ind_cpa, check_ind_cpa_direct, ind_cca2_guess_prob, max_ind_cpa_advantage,
    ChallengeReusePolicy,
};
use secdiag_core::semiring::{abs_diff, rat};

/// Environment variable naming a directory to resolve relative input
/// paths against when they do not exist as given.
pub const FIXTURES_ENV: &str = "SECDIAG_FIXTURES";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Parser)]
#[command(
    name = "secdiag",
    version,
    about = "Decides security notions of finite cipher systems, two ways at once"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

/// How a replayed challenge ciphertext scores in the adaptive game.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ReuseArg {
    /// A replayed challenge scores as a wrong guess.
    #[default]
    ScoreWrong,
    /// A replayed challenge scores as a fair coin flip.
    ScoreFairCoin,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check possibilistic security of a finite cipher system.
    CheckDy {
        /// System description (JSON).
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check perfect secrecy of a cipher system with exact distributions.
    CheckShannon {
        /// System description (JSON) with `kappa` and `mu`.
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check chosen-plaintext indistinguishability of a leveled system
    /// against an adversary corpus, under a negligibility policy.
    CheckIndcpa {
        /// Leveled system description (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Adversary files (JSON); repeatable. Empty corpus passes
        /// vacuously.
        #[arg(long)]
        adversaries: Vec<PathBuf>,
        /// Negligibility policy (JSON).
        #[arg(long)]
        policy: PathBuf,
        /// Restrict per-level detail to this level.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check adaptive chosen-ciphertext indistinguishability.
    CheckIndcca2 {
        /// Leveled system description (JSON).
        #[arg(long)]
        system: PathBuf,
        /// Adversary files (JSON); repeatable.
        #[arg(long)]
        adversaries: Vec<PathBuf>,
        /// Negligibility policy (JSON).
        #[arg(long)]
        policy: PathBuf,
        /// How a replayed challenge ciphertext scores.
        #[arg(long, value_enum, default_value_t)]
        reuse: ReuseArg,
        /// Restrict per-level detail to this level.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run seeded random cross-check sweeps and report agreement counts.
    Selftest {
        /// RNG seed; a fixed seed gives byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per sweep.
        #[arg(long, default_value_t = 40)]
        instances: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Resolves `path` against [`FIXTURES_ENV`] when it does not exist as
/// given; missing files still surface as read errors on the original path.
pub fn resolve_path(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    if let Ok(root) = std::env::var(FIXTURES_ENV) {
        let joined = Path::new(&root).join(path);
        if joined.exists() {
            return joined;
        }
    }
    path.to_path_buf()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let resolved = resolve_path(path);
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(&resolved).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: shown,
        source,
    })
}

fn invalid(path: &Path, msg: String) -> CliError {
    CliError::Invalid(format!("{}: {msg}", path.display()))
}

fn emit<R: serde::Serialize>(format: Format, report: &R, text: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        ),
    }
}

fn run_check_dy(system: &Path, format: Format) -> Result<bool, CliError> {
    let file: formats::SystemFile = read_json(system)?;
    let sys = file.to_dolev_yao().map_err(|m| invalid(system, m))?;
    let verdict = sys.secure_by_definition();
    let by_sets = sys.secure_by_possible_plaintexts();
    let by_diagram = sys
        .secure_by_diagram()
        .map_err(|e| invalid(system, e.to_string()))?;
    let view = report::DyReport::new(&sys, &verdict, by_sets, by_diagram);
    emit(format, &view, view.to_text());
    Ok(view.secure)
}

fn run_check_shannon(system: &Path, format: Format) -> Result<bool, CliError> {
    let file: formats::SystemFile = read_json(system)?;
    let sys = file.to_shannon().map_err(|m| invalid(system, m))?;
    let verdict = sys.is_perfectly_secure_direct();
    let by_diagram = sys
        .secure_by_diagram()
        .map_err(|e| invalid(system, e.to_string()))?;
    let view = report::ShannonReport::new(&sys, &verdict, by_diagram);
    emit(format, &view, view.to_text());
    Ok(view.secure)
}

fn load_cpa_corpus(
    paths: &[PathBuf],
) -> Result<Vec<secdiag_core::ensemble::CpaAdversary>, CliError> {
    paths
        .iter()
        .map(|p| {
            let file: formats::AdversaryFile = read_json(p)?;
            file.to_cpa().map_err(|m| invalid(p, m))
        })
        .collect()
}

fn run_check_indcpa(
    system: &Path,
    adversaries: &[PathBuf],
    policy: &Path,
    level: Option<usize>,
    format: Format,
) -> Result<bool, CliError> {
    let sys_file: formats::EnsembleFile = read_json(system)?;
    let sys = sys_file.to_system().map_err(|m| invalid(system, m))?;
    let corpus = load_cpa_corpus(adversaries)?;
    let policy_file: formats::PolicyFile = read_json(policy)?;
    let pol = policy_file.to_policy().map_err(|m| invalid(policy, m))?;
    if let Some(l) = level {
        if l == 0 || l > pol.max_level() {
            return Err(CliError::Invalid(format!(
                "--level {l} is outside the policy horizon 1..={}",
                pol.max_level()
            )));
        }
    }
    let by_matrices =
        check_ind_cpa(&sys, &corpus, &pol).map_err(|e| invalid(system, e.to_string()))?;
    let direct =
        check_ind_cpa_direct(&sys, &corpus, &pol).map_err(|e| invalid(system, e.to_string()))?;
    let routes_agree = by_matrices == direct;
    let mut advantage = Vec::new();
    for l in 1..=pol.max_level() {
        if level.is_some_and(|only| only != l) {
            continue;
        }
        let adv = max_ind_cpa_advantage(&sys, l).map_err(|e| invalid(system, e.to_string()))?;
        advantage.push((l, adv));
    }
    let view = report::CpaReport::new(&sys, &by_matrices, routes_agree, &pol, &advantage, level);
    emit(format, &view, view.to_text());
    Ok(view.secure)
}

fn run_check_indcca2(
    system: &Path,
    adversaries: &[PathBuf],
    policy: &Path,
    reuse: ReuseArg,
    level: Option<usize>,
    format: Format,
) -> Result<bool, CliError> {
    let sys_file: formats::EnsembleFile = read_json(system)?;
    let sys = sys_file.to_system().map_err(|m| invalid(system, m))?;
    let policy_file: formats::PolicyFile = read_json(policy)?;
    let pol = policy_file.to_policy().map_err(|m| invalid(policy, m))?;
    if pol.max_level() > sys.level_count() {
        return Err(CliError::Invalid(format!(
            "policy horizon {} exceeds the system's {} level(s)",
            pol.max_level(),
            sys.level_count()
        )));
    }
    let reuse_policy = match reuse {
        ReuseArg::ScoreWrong => ChallengeReusePolicy::ScoreWrong,
        ReuseArg::ScoreFairCoin => ChallengeReusePolicy::ScoreFairCoin,
    };
    let halves = vec![rat(1, 2); pol.max_level()];
    let mut rows = Vec::new();
    for path in adversaries {
        let file: formats::AdversaryFile = read_json(path)?;
        let adv = file.to_cca2().map_err(|m| invalid(path, m))?;
        let probs =
            ind_cca2_guess_prob(&sys, &adv, reuse_policy).map_err(|e| invalid(path, e.to_string()))?;
        let equiv = pol
            .negligible_equiv(&probs, &halves)
            .map_err(|e| invalid(path, e.to_string()))?;
        let gaps: Vec<_> = probs.iter().map(|p| abs_diff(p, &rat(1, 2))).collect();
        rows.push((adv.name.clone(), probs, gaps, equiv));
    }
    let view = report::CcaReport::new(reuse, &pol, &rows, level);
    emit(format, &view, view.to_text());
    Ok(view.secure)
}

impl ReuseArg {
    pub(crate) fn label(self) -> &'static str {
        match self {
            ReuseArg::ScoreWrong => "score-wrong",
            ReuseArg::ScoreFairCoin => "score-fair-coin",
        }
    }
}

/// Parses arguments, runs the selected check, prints its report, and
/// returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::CheckDy { system, format } => run_check_dy(system, *format),
        Cmd::CheckShannon { system, format } => run_check_shannon(system, *format),
        Cmd::CheckIndcpa {
            system,
            adversaries,
            policy,
            level,
            format,
        } => run_check_indcpa(system, adversaries, policy, *level, *format),
        Cmd::CheckIndcca2 {
            system,
            adversaries,
            policy,
            reuse,
            level,
            format,
        } => run_check_indcca2(system, adversaries, policy, *reuse, *level, *format),
        Cmd::Selftest {
            seed,
            instances,
            format,
        } => {
            let view = selftest::run_selftest(*seed, *instances);
            emit(*format, &view, view.to_text());
            Ok(view.pass)
        }
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
