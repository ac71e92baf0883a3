//! Command-line front end.
//!
//! Six subcommands drive the pipeline: `analyze`, `generators`,
//! `translate`, `tree-constants`, `steady-states`, `verify`. Every command
//! assembles one report value and prints it as text or, with `--json`, as
//! pretty-printed JSON with a stable field order.
//!
//! Exit codes: 0 success; 1 usage (bad flags, unreadable files,
//! inapplicable command); 2 input parse/validation errors; 3 an enumeration
//! cap was exceeded; 4 the translation search found nothing within budget;
//! 5 a theorem hypothesis needed by `steady-states` fails (the message says
//! which one).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::Value;

use crate::error::{CrnError, Result};
use crate::model::{parse_assignments, parse_network, state_vector, Network};
use crate::rat::{rat_to_f64, Rat};
use crate::report::{
    binomials_section, generators_section, linkage_section, network_summary,
    parametrization_section, render_json, render_text, report_root, sign_conditions_section,
    solution_section, translation_section, tree_constants_section, verification_section,
};
use crate::steady_state::{
    binomial_generators, parametrization, sign_condition_report, solve_steady_state_opts,
    verify_steady_state, SolveOptions, DEFAULT_SIGN_DIM_CAP,
};
use crate::translation::{
    check_strong_resolvability, check_weak_resolvability, classify, find_translations,
    parse_translation_spec, translated_rate_map, SearchOptions, StrongResolvability, Translation,
    WeakResolvability,
};

/// Exact structural and steady-state analysis of reaction networks.
#[derive(Parser, Debug)]
#[command(name = "crn-toric", version, disable_help_subcommand = true)]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized probing (numeric solver restart jitter).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Reaction-ordering budget for the translation search.
    #[arg(long, global = true, default_value_t = 5040)]
    pub max_orderings: usize,
    /// Candidate budget for the translation search.
    #[arg(long, global = true, default_value_t = 10000)]
    pub max_candidates: usize,
    /// Largest ambient dimension for exhaustive sign-vector enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_SIGN_DIM_CAP)]
    pub sign_dim_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural analysis: counts, deficiency, linkage, extreme currents.
    Analyze { file: PathBuf },
    /// Extreme currents of the flux cone with classification.
    Generators { file: PathBuf },
    /// Search for a network translation, or validate a supplied one.
    Translate {
        file: PathBuf,
        /// Search for translations (the default when --translation is absent).
        #[arg(long)]
        search: bool,
        /// Validate the translation described by a shift file.
        #[arg(long, value_name = "FILE", conflicts_with = "search")]
        translation: Option<PathBuf>,
    },
    /// Symbolic tree constants of a weakly reversible network.
    TreeConstants { file: PathBuf },
    /// Binomial steady-state description; optionally solve numerically.
    SteadyStates {
        file: PathBuf,
        /// Search for a translation (the default when --translation is absent).
        #[arg(long)]
        search: bool,
        /// Use the translation described by a shift file.
        #[arg(long, value_name = "FILE", conflicts_with = "search")]
        translation: Option<PathBuf>,
        /// Rate-constant file (`symbol = value` lines, rational or decimal).
        #[arg(long, value_name = "FILE")]
        rates: Option<PathBuf>,
        /// Initial-state file fixing the compatibility class.
        #[arg(long, value_name = "FILE")]
        x0: Option<PathBuf>,
        /// Solve the binomial system numerically (requires --rates and --x0).
        #[arg(long)]
        solve: bool,
    },
    /// Check a claimed steady state of a mass-action network.
    Verify {
        file: PathBuf,
        /// Rate-constant file (`symbol = value` lines).
        #[arg(long, value_name = "FILE")]
        rates: PathBuf,
        /// State file (`species = value` lines).
        #[arg(long, value_name = "FILE")]
        x: PathBuf,
    },
}

/// Parses `args` and runs the selected command, returning the process exit
/// code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return if usage_error { 1 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match execute(&cli) {
        Ok(value) => {
            let rendered = if cli.json {
                render_json(&value)
            } else {
                render_text(&value)
            };
            print!("{rendered}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&cli.command, &e)
        }
    }
}

fn exit_code(cmd: &Command, e: &CrnError) -> i32 {
    match e {
        CrnError::Parse { .. }
        | CrnError::DuplicateRateSymbol(_)
        | CrnError::SelfReaction(_)
        | CrnError::UnusedSpecies(_)
        | CrnError::MissingValue(_)
        | CrnError::UnknownName { .. }
        | CrnError::MissingKinetic(_)
        | CrnError::InvalidTranslation(_) => 2,
        CrnError::CapExceeded(_) => 3,
        CrnError::NoTranslation => 4,
        CrnError::DeficiencyHypothesis(_) | CrnError::NotResolvable(_) => 5,
        // A non-weakly-reversible input is a theorem-hypothesis failure for
        // the steady-state pipeline; elsewhere the command simply does not
        // apply.
        CrnError::NotWeaklyReversible(_) => match cmd {
            Command::SteadyStates { .. } => 5,
            _ => 1,
        },
        CrnError::Dimension(_) | CrnError::Numeric(_) | CrnError::Invalid(_) => 1,
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CrnError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network> {
    parse_network(&read_file(path)?)
}

fn execute(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Analyze { file } => cmd_analyze(file),
        Command::Generators { file } => cmd_generators(file),
        Command::Translate {
            file, translation, ..
        } => cmd_translate(cli, file, translation.as_deref()),
        Command::TreeConstants { file } => cmd_tree_constants(file),
        Command::SteadyStates {
            file,
            translation,
            rates,
            x0,
            solve,
            ..
        } => cmd_steady_states(
            cli,
            file,
            translation.as_deref(),
            rates.as_deref(),
            x0.as_deref(),
            *solve,
        ),
        Command::Verify { file, rates, x } => cmd_verify(file, rates, x),
    }
}

fn cmd_analyze(file: &Path) -> Result<Value> {
    let net = load_network(file)?;
    Ok(report_root(
        "analyze",
        vec![
            ("network", network_summary(&net)?),
            ("linkage", linkage_section(&net)),
            ("generators", generators_section(&net)?),
        ],
    ))
}

fn cmd_generators(file: &Path) -> Result<Value> {
    let net = load_network(file)?;
    Ok(report_root(
        "generators",
        vec![
            ("network", network_summary(&net)?),
            ("generators", generators_section(&net)?),
        ],
    ))
}

fn resolvability_evidence(
    t: &Translation,
) -> Result<(Option<WeakResolvability>, Option<StrongResolvability>)> {
    let cls = classify(t)?;
    if cls.proper && cls.strong {
        return Ok((None, None));
    }
    let weak = check_weak_resolvability(t)?;
    let strong = if weak.weakly_resolvable {
        Some(check_strong_resolvability(t)?)
    } else {
        None
    };
    Ok((Some(weak), strong))
}

fn cmd_translate(cli: &Cli, file: &Path, translation: Option<&Path>) -> Result<Value> {
    let net = load_network(file)?;
    match translation {
        Some(spec) => {
            let t = parse_translation_spec(&net, &read_file(spec)?)?;
            let (weak, strong) = resolvability_evidence(&t)?;
            Ok(report_root(
                "translate",
                vec![
                    ("network", network_summary(&net)?),
                    (
                        "translation",
                        translation_section(&t, weak.as_ref(), strong.as_ref())?,
                    ),
                ],
            ))
        }
        None => {
            let opts = SearchOptions {
                max_orderings: cli.max_orderings,
                max_candidates: cli.max_candidates,
            };
            let found = find_translations(&net, &opts)?;
            if found.is_empty() {
                return Err(CrnError::NoTranslation);
            }
            // Keep the listing readable on networks with many candidates.
            const LIST_LIMIT: usize = 10;
            let mut listed = Vec::new();
            for t in found.iter().take(LIST_LIMIT) {
                let (weak, strong) = resolvability_evidence(t)?;
                listed.push(translation_section(t, weak.as_ref(), strong.as_ref())?);
            }
            Ok(report_root(
                "translate",
                vec![
                    ("network", network_summary(&net)?),
                    ("candidates_found", Value::from(found.len() as u64)),
                    ("candidates", Value::Array(listed)),
                ],
            ))
        }
    }
}

fn cmd_tree_constants(file: &Path) -> Result<Value> {
    let net = load_network(file)?;
    Ok(report_root(
        "tree-constants",
        vec![
            ("network", network_summary(&net)?),
            ("tree_constants", tree_constants_section(&net)?),
        ],
    ))
}

/// Picks a translation for the steady-state pipeline: the supplied one, or
/// the first searched candidate satisfying the theorem hypotheses.
fn obtain_translation(cli: &Cli, net: &Network, translation: Option<&Path>) -> Result<Translation> {
    if let Some(spec) = translation {
        return parse_translation_spec(net, &read_file(spec)?);
    }
    let opts = SearchOptions {
        max_orderings: cli.max_orderings,
        max_candidates: cli.max_candidates,
    };
    let found = find_translations(net, &opts)?;
    if found.is_empty() {
        return Err(CrnError::NoTranslation);
    }
    for t in &found {
        if crate::steady_state::require_theorem_hypotheses(t).is_ok() {
            return Ok(t.clone());
        }
    }
    // Every candidate fails a hypothesis; surface the first failure.
    let first = found.into_iter().next().expect("nonempty");
    crate::steady_state::require_theorem_hypotheses(&first)?;
    Ok(first)
}

fn cmd_steady_states(
    cli: &Cli,
    file: &Path,
    translation: Option<&Path>,
    rates: Option<&Path>,
    x0: Option<&Path>,
    solve: bool,
) -> Result<Value> {
    if solve && (rates.is_none() || x0.is_none()) {
        return Err(CrnError::Invalid(
            "--solve requires both --rates and --x0".to_string(),
        ));
    }
    let net = load_network(file)?;
    let t = obtain_translation(cli, &net, translation)?;
    let binomials = binomial_generators(&t)?;
    let (s_tilde, perp) = parametrization(&t)?;
    let signs = sign_condition_report(&t, cli.sign_dim_cap)?;
    let rate_values: Option<BTreeMap<String, Rat>> = match rates {
        Some(p) => Some(parse_assignments(&read_file(p)?)?),
        None => None,
    };
    let env = match &rate_values {
        Some(rv) => Some(translated_rate_map(&t, rv)?),
        None => None,
    };
    let (weak, strong) = resolvability_evidence(&t)?;
    let mut sections = vec![
        ("network", network_summary(&net)?),
        (
            "translation",
            translation_section(&t, weak.as_ref(), strong.as_ref())?,
        ),
        ("binomials", binomials_section(&t, &binomials, env.as_ref())?),
        ("parametrization", parametrization_section(&s_tilde, &perp)),
        ("sign_conditions", sign_conditions_section(&signs)),
    ];
    if solve {
        let rv = rate_values.as_ref().expect("checked above");
        let vals = parse_assignments(&read_file(x0.expect("checked above"))?)?;
        let x0_vec = state_vector(&net, &vals)?;
        let opts = SolveOptions {
            seed: cli.seed,
            ..SolveOptions::default()
        };
        match solve_steady_state_opts(&t, rv, &x0_vec, &opts) {
            Ok(x) => {
                sections.push(("solution", solution_section(&net, &x)));
                sections.push(("verification", verification_section(&verify_steady_state(
                    &net, rv, &x,
                )?)));
            }
            // Non-convergence is reported, not fatal: the description above
            // is still valid.
            Err(CrnError::Numeric(msg)) => {
                sections.push(("solve_error", Value::from(msg)));
            }
            Err(other) => return Err(other),
        }
    }
    Ok(report_root("steady-states", sections))
}

fn cmd_verify(file: &Path, rates: &Path, x: &Path) -> Result<Value> {
    let net = load_network(file)?;
    let rv = parse_assignments(&read_file(rates)?)?;
    let vals = parse_assignments(&read_file(x)?)?;
    let state = state_vector(&net, &vals)?;
    let xf: Vec<f64> = state.iter().map(rat_to_f64).collect();
    let report = verify_steady_state(&net, &rv, &xf)?;
    Ok(report_root(
        "verify",
        vec![
            ("network", network_summary(&net)?),
            ("verification", verification_section(&report)),
        ],
    ))
}
