//! The `qdc` command line: normalize, differentiate, check and solve over
//! the shipped presets. [`run_command`] does all the work and returns the
//! exit status with the text that would be printed, so tests drive it
//! directly.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qdc_core::covariance::{solve_ansatz, CovarianceSetup};
use qdc_core::differential::{check_leibniz, check_nilpotency, d_compatibility, CalculusSpec};
use qdc_core::expr::{parse_bindings, parse_expr};
use qdc_core::ncalgebra::{Element, Presentation, Strategy};
use qdc_core::presets::{
    displayed_relations, imported_relations, limit_target, p_to_q, preset, rule_differences, specialize, PresetId,
};
use qdc_core::scalar::{Scalar, Var};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qdc", version, about = "Exact workbench for covariant d^2 = 0 and d^3 = 0 calculi")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Target {
    /// Preset id, e.g. plane-pq-d2
    #[arg(long)]
    algebra: String,
    /// Comma-separated bindings such as "p=j^2*q^-1"
    #[arg(long)]
    subst: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Nilpotency,
    Leibniz,
    Confluence,
    Relations,
    Covariance,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the normal form of an expression
    Normalize {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        expr: String,
    },
    /// Apply d one or more times and normalize
    Diff {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        times: usize,
        expr: String,
    },
    /// Run one of the verification sweeps
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-derive the d^2 plane calculus from the 16-coefficient ansatz
    Solve {
        #[arg(long)]
        json: bool,
    },
    /// List the presets, optionally writing them as JSON files
    Presets {
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare a two-parameter calculus at p = q with its one-parameter preset
    Limit {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        json: bool,
    },
}

/// A failure that maps to the usage exit code.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// Parses `argv` (without the program name) and runs it.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> (i32, String) {
    let args = std::iter::once("qdc").chain(argv.iter().map(AsRef::as_ref));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    match run(cli.cmd) {
        Ok(done) => done,
        Err(Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
    }
}

struct Loaded {
    id: PresetId,
    presentation: Presentation,
    bindings: Vec<(Var, Scalar)>,
}

fn load(t: &Target) -> Result<Loaded, Usage> {
    let id: PresetId = t.algebra.parse()?;
    let bindings = match &t.subst {
        Some(s) => parse_bindings(s)?,
        None => Vec::new(),
    };
    let base = preset(id);
    let presentation = if bindings.is_empty() { base } else { specialize(&base, &bindings)? };
    Ok(Loaded { id, presentation, bindings })
}

fn calculus(l: &Loaded) -> Result<CalculusSpec, Usage> {
    let n = l.id.nilpotency().ok_or_else(|| Usage(format!("{} is not a calculus", l.id)))?;
    Ok(CalculusSpec::new(l.presentation.clone(), n))
}

fn emit(json_mode: bool, value: Value, text: String) -> String {
    if json_mode {
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    } else {
        text
    }
}

fn status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn element_json(p: &Presentation, e: &Element) -> Value {
    json!({"text": p.show(e), "terms": p.element_to_spec(e)})
}

fn run(cmd: Cmd) -> Result<(i32, String), Usage> {
    match cmd {
        Cmd::Normalize { target, strategy, expr } => {
            let l = load(&target)?;
            let p = &l.presentation;
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::Leftmost,
                StrategyArg::Rightmost => Strategy::Rightmost,
            };
            let nf = p.normalize_with(&parse_expr(&expr, p)?, strategy);
            let out = emit(target.json, json!({"algebra": l.id.as_str(), "normal_form": element_json(p, &nf)}), format!("{}\n", p.show(&nf)));
            Ok((EXIT_OK, out))
        }
        Cmd::Diff { target, times, expr } => {
            let l = load(&target)?;
            let c = calculus(&l)?;
            let p = &c.presentation;
            let e = p.normalize(&parse_expr(&expr, p)?);
            let r = p.normalize(&c.d_times(&e, times));
            let out = emit(target.json, json!({"algebra": l.id.as_str(), "times": times, "result": element_json(p, &r)}), format!("{}\n", p.show(&r)));
            Ok((EXIT_OK, out))
        }
        Cmd::Check { what, target, max_len, samples, seed } => check(what, &target, max_len, samples, seed),
        Cmd::Solve { json } => solve(json),
        Cmd::Presets { export, json } => presets(export, json),
        Cmd::Limit { algebra, json } => {
            let id: PresetId = algebra.parse()?;
            let to = limit_target(id).ok_or_else(|| Usage(format!("{id} has no one-parameter limit")))?;
            let got = specialize(&preset(id), &p_to_q())?;
            let diffs = rule_differences(&got, &preset(to));
            let mut text = format!("{id} at p=q vs {to}: {}\n", if diffs.is_empty() { "equal" } else { "differ" });
            for d in &diffs {
                let _ = writeln!(text, "  {d}");
            }
            let out = emit(json, json!({"from": id.as_str(), "to": to.as_str(), "equal": diffs.is_empty(), "differences": diffs}), text);
            Ok((status(diffs.is_empty()), out))
        }
    }
}

fn check(what: CheckKind, target: &Target, max_len: usize, samples: usize, seed: u64) -> Result<(i32, String), Usage> {
    let l = load(target)?;
    let p = &l.presentation;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match what {
        CheckKind::Nilpotency | CheckKind::Leibniz => {
            let c = calculus(&l)?;
            let r = if what == CheckKind::Nilpotency {
                check_nilpotency(&c, max_len, samples, &mut rng)
            } else {
                check_leibniz(&c, samples, &mut rng)
            };
            Ok((status(r.passed), emit(target.json, r.to_json(p), r.to_text(p))))
        }
        CheckKind::Confluence => {
            let obs = p.critical_pairs();
            let mut text = format!("{} obstructions\n", obs.len());
            for o in &obs {
                let _ = writeln!(text, "  {}: {}", p.word_name(&o.overlap), p.show(&o.difference));
            }
            let value = json!({
                "obstructions": obs.iter().map(|o| json!({
                    "overlap": p.word_name(&o.overlap),
                    "difference": element_json(p, &o.difference),
                })).collect::<Vec<_>>(),
            });
            Ok((status(obs.is_empty()), emit(target.json, value, text)))
        }
        CheckKind::Relations => {
            let mut rows = Vec::new();
            let mut relations = displayed_relations(l.id);
            relations.extend(imported_relations(l.id));
            for (label, e) in relations {
                let e = e.try_map_coeffs(|c| c.substitute(&l.bindings))?;
                let nf = p.normalize(&e);
                rows.push((label, nf));
            }
            let mut dcompat = Vec::new();
            if let Some(n) = l.id.nilpotency() {
                dcompat = d_compatibility(&CalculusSpec::new(p.clone(), n));
            }
            let pass = rows.iter().all(|(_, r)| r.is_zero()) && dcompat.is_empty();
            let mut text = String::new();
            for (label, r) in &rows {
                let _ = writeln!(text, "{} {label}", if r.is_zero() { "ok  " } else { "FAIL" });
                if !r.is_zero() {
                    let _ = writeln!(text, "     residual {}", p.show(r));
                }
            }
            for (w, r) in &dcompat {
                let _ = writeln!(text, "FAIL d({}) = {}", p.word_name(w), p.show(r));
            }
            let value = json!({
                "status": if pass { "pass" } else { "fail" },
                "relations": rows.iter().map(|(l, r)| json!({"relation": l, "residual": p.show(r)})).collect::<Vec<_>>(),
                "d_compatibility": dcompat.iter().map(|(w, r)| json!({"rule": p.word_name(w), "residual": p.show(r)})).collect::<Vec<_>>(),
            });
            Ok((status(pass), emit(target.json, value, text)))
        }
        CheckKind::Covariance => {
            if !l.bindings.is_empty() {
                return Err(Usage("covariance uses the cross table of the preset; --subst is not supported".into()));
            }
            let setup = CovarianceSetup::for_preset(l.id)?;
            let cp = &setup.combined.presentation;
            let reports = setup.check()?;
            let pass = reports.iter().all(|r| r.covariant());
            let text: String = reports.iter().map(|r| r.to_text(cp)).collect();
            let value = json!({"reports": reports.iter().map(|r| r.to_json(cp)).collect::<Vec<_>>()});
            Ok((status(pass), emit(target.json, value, text)))
        }
    }
}

fn solve(json_mode: bool) -> Result<(i32, String), Usage> {
    let (system, generic, constrained, assoc) = solve_ansatz()?;
    let mut text = String::new();
    let _ = writeln!(text, "{} equations in 16 unknowns", system.equations.len());
    let _ = writeln!(
        text,
        "rank {} with {} free; {} residual constraints",
        generic.rank,
        generic.free.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "),
        generic.residual_constraints.len()
    );
    for r in &generic.residual_constraints {
        let _ = writeln!(text, "  {r} = 0");
    }
    let _ = writeln!(text, "at q'=q, k=q/p: rank {}", constrained.rank);
    for d in constrained.describe() {
        let _ = writeln!(text, "  {d}");
    }
    let _ = writeln!(text, "associativity of x*dx*dy: {} = 0", assoc.equation);
    for r in &assoc.roots {
        let _ = writeln!(
            text,
            "  {} = {}{}",
            assoc.free.name(),
            r.value,
            if r.matches_displayed { " (displayed calculus)" } else { "" }
        );
    }
    let value = json!({
        "equations": system.equations.len(),
        "generic": generic.to_json(),
        "constrained": constrained.to_json(),
        "associativity": assoc.to_json(),
    });
    Ok((EXIT_OK, emit(json_mode, value, text)))
}

fn presets(export: Option<PathBuf>, json_mode: bool) -> Result<(i32, String), Usage> {
    let mut text = String::new();
    let mut listing = Vec::new();
    for id in PresetId::ALL {
        let p = preset(id);
        let note = p.notes().first().cloned().unwrap_or_default();
        let _ = writeln!(text, "{:<14} {}", id.as_str(), note);
        listing.push(json!({"id": id.as_str(), "generators": p.generators().len(), "rules": p.rules().len(), "note": note}));
    }
    if let Some(dir) = export {
        std::fs::create_dir_all(&dir)?;
        for id in PresetId::ALL {
            let path = dir.join(format!("{}.json", id.as_str()));
            std::fs::write(&path, preset(id).to_json() + "\n")?;
        }
        let _ = writeln!(text, "wrote {} files to {}", PresetId::ALL.len(), dir.display());
    }
    Ok((EXIT_OK, emit(json_mode, Value::Array(listing), text)))
}
