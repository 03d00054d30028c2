//! Command-line front end: parsing, typechecking, both evaluators and the
//! equivalence engine, with line-delimited JSON output for scripts.
//!
//! Exit codes: 0 success (or `Equivalent`), 1 `Distinguished`, 2 `Unknown`,
//! 64 usage error, 65 parse or type error, 70 internal invariant violation.

use clap::{Args, Parser, Subcommand};
use nu_core::abstract_sem::{eval_closed, AValue, TValue};
use nu_core::concrete::{eval_comp as eval_concrete, CEnv, CResult, CValue};
use nu_core::corpus::gen_corpus;
use nu_core::equiv::{
    check_equivalence, Budgets, Certificate, CheckMethod, EquivError, Verdict,
};
use nu_core::lang::{parse_comp, parse_type, typecheck_comp, Comp, Context, Type};
use nu_core::worlds::{Name, World};
use serde_json::json;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISTINGUISHED: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "nu", about = "workbench for a nu-calculus with recursion", disable_help_flag = false)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and typecheck a term; print its type as JSON.
    Check {
        /// Path to the term, or "-" for stdin.
        path: PathBuf,
    },
    /// Evaluate a term under the concrete or the world-indexed semantics.
    Eval {
        path: PathBuf,
        #[arg(long, default_value = "concrete")]
        semantics: String,
        #[arg(long, default_value_t = 1000)]
        fuel: u32,
        /// Initial name supply (concrete semantics).
        #[arg(long, default_value_t = 0)]
        supply: Name,
        /// Initial world, e.g. "{0,1}" (abstract semantics).
        #[arg(long, default_value = "{}")]
        world: String,
    },
    /// Check two terms for contextual equivalence.
    Equiv {
        path_a: PathBuf,
        path_b: PathBuf,
        /// The common type of both terms, e.g. "int" or "name -> bool".
        #[arg(long = "type")]
        ty: String,
        #[arg(long, default_value = "direct")]
        method: String,
        #[command(flatten)]
        budgets: BudgetArgs,
        /// Write the certificate (or distinguishing observation) as JSON.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        /// Render the verdict in the diagrammatic vocabulary.
        #[arg(long)]
        pretty: bool,
    },
    /// Emit a deterministic corpus of closed well-typed terms.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: u32,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Oracle observation depth.
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    #[arg(long, default_value_t = 500)]
    pub fuel: u32,
    /// World-extension bound in realizability checks.
    #[arg(long, default_value_t = 3)]
    pub ext: u32,
    /// Span-search and sweep budget.
    #[arg(long, default_value_t = 2048)]
    pub budget: u32,
}

fn read_term(path: &Path) -> Result<String, (i32, String)> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| (EXIT_DATA, format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| (EXIT_DATA, format!("cannot read {}: {e}", path.display())))
    }
}

fn load_typed(path: &Path) -> Result<(Comp, Type), (i32, String)> {
    let src = read_term(path)?;
    let term = parse_comp(&src).map_err(|e| (EXIT_DATA, e.to_string()))?;
    let ty = typecheck_comp(&Context::new(), &term).map_err(|e| (EXIT_DATA, e.to_string()))?;
    Ok((term, ty))
}

fn parse_world(text: &str) -> Result<World, (i32, String)> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut world = World::empty();
    for part in trimmed.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let n: Name = part
            .parse()
            .map_err(|_| (EXIT_USAGE, format!("bad world element '{part}'")))?;
        world = world.insert(n);
    }
    Ok(world)
}

fn cvalue_json(v: &CValue) -> serde_json::Value {
    match v {
        CValue::Int(i) => json!({"kind": "int", "value": i}),
        CValue::Bool(b) => json!({"kind": "bool", "value": b}),
        CValue::Name(n) => json!({"kind": "name", "value": n}),
        CValue::Closure(cl) => json!({"kind": "closure", "param": cl.param}),
    }
}

fn avalue_json(v: &AValue) -> serde_json::Value {
    match v {
        AValue::Int(i) => json!({"kind": "int", "value": i}),
        AValue::Bool(b) => json!({"kind": "bool", "value": b}),
        AValue::Name(n) => json!({"kind": "name", "value": n}),
        AValue::Closure(cl) => {
            json!({"kind": "closure", "param": cl.param, "world": cl.world()})
        }
    }
}

fn equiv_error_exit(e: &EquivError) -> i32 {
    match e {
        EquivError::Type(_) => EXIT_DATA,
        _ => EXIT_INTERNAL,
    }
}

/// Dispatches a parsed command, writing line-delimited JSON to `out`.
pub fn run(command: &Command, out: &mut impl Write) -> i32 {
    match run_inner(command, out) {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(out, "{}", json!({"error": message}));
            code
        }
    }
}

fn run_inner(command: &Command, out: &mut impl Write) -> Result<i32, (i32, String)> {
    match command {
        Command::Check { path } => {
            let (_, ty) = load_typed(path)?;
            emit(out, &json!({"type": ty.to_string()}))?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            path,
            semantics,
            fuel,
            supply,
            world,
        } => {
            let (term, _) = load_typed(path)?;
            match semantics.as_str() {
                "concrete" => {
                    let result = eval_concrete(&CEnv::new(), &term, *supply, *fuel)
                        .map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
                    let line = match result {
                        CResult::Diverge => json!({"status": "diverge"}),
                        CResult::Done { supply, value } => {
                            json!({"status": "done", "supply": supply, "value": cvalue_json(&value)})
                        }
                    };
                    emit(out, &line)?;
                    Ok(EXIT_OK)
                }
                "abstract" => {
                    let w = parse_world(world)?;
                    let result =
                        eval_closed(&w, &term, *fuel).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
                    let line = match result {
                        TValue::Bot => json!({"status": "diverge"}),
                        TValue::Done { world, value } => {
                            json!({"status": "done", "world": world, "value": avalue_json(&value)})
                        }
                    };
                    emit(out, &line)?;
                    Ok(EXIT_OK)
                }
                other => Err((EXIT_USAGE, format!("unknown semantics '{other}'"))),
            }
        }
        Command::Equiv {
            path_a,
            path_b,
            ty,
            method,
            budgets,
            emit_proof,
            pretty,
        } => {
            let (left, left_ty) = load_typed(path_a)?;
            let (right, right_ty) = load_typed(path_b)?;
            let ty = parse_type(ty).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            for (label, found) in [("first", &left_ty), ("second", &right_ty)] {
                if *found != ty {
                    return Err((
                        EXIT_DATA,
                        format!("{label} term has type {found}, expected {ty}"),
                    ));
                }
            }
            let method = match method.as_str() {
                "direct" => CheckMethod::Direct,
                "parametric" => CheckMethod::Parametric,
                "oracle" => CheckMethod::Oracle,
                other => return Err((EXIT_USAGE, format!("unknown method '{other}'"))),
            };
            let budgets = Budgets {
                fuel: budgets.fuel,
                depth: budgets.depth,
                ext: budgets.ext,
                budget: budgets.budget,
            };
            let verdict = check_equivalence(&left, &right, &ty, method, &budgets)
                .map_err(|e| (equiv_error_exit(&e), e.to_string()))?;

            let (line, code) = match &verdict {
                Verdict::Equivalent(cert) => (
                    json!({"verdict": "equivalent", "certificate": cert}),
                    EXIT_OK,
                ),
                Verdict::Distinguished(obs) => (
                    json!({"verdict": "distinguished", "observation": obs.to_string()}),
                    EXIT_DISTINGUISHED,
                ),
                Verdict::Unknown(reason) => {
                    (json!({"verdict": "unknown", "reason": reason}), EXIT_UNKNOWN)
                }
            };
            emit(out, &line)?;
            if *pretty {
                render_pretty(&verdict, out).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            }
            if let Some(proof_path) = emit_proof {
                let payload = serde_json::to_string_pretty(&line)
                    .map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
                std::fs::write(proof_path, payload)
                    .map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            }
            Ok(code)
        }
        Command::Corpus { seed, count, depth } => {
            for (index, (ty, term)) in gen_corpus(*seed, *count, *depth).iter().enumerate() {
                emit(
                    out,
                    &json!({"index": index, "type": ty.to_string(), "term": term.to_string()}),
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut impl Write, line: &serde_json::Value) -> Result<(), (i32, String)> {
    writeln!(out, "{line}").map_err(|e| (EXIT_INTERNAL, e.to_string()))
}

/// Human-readable rendering in the diagrammatic vocabulary. Colors when
/// NU_COLOR is set.
fn render_pretty(verdict: &Verdict, out: &mut impl Write) -> std::io::Result<()> {
    let color = std::env::var("NU_COLOR").is_ok();
    let (bold, dim, reset) = if color {
        ("\x1b[1m", "\x1b[2m", "\x1b[0m")
    } else {
        ("", "", "")
    };
    match verdict {
        Verdict::Equivalent(Certificate::Direct { world, proof }) => {
            writeln!(out, "{bold}equivalent{reset} over the world {world} (co-span proof)")?;
            match proof {
                nu_core::equiv::TProof::Bottom => {
                    writeln!(out, "  both computations diverge")?;
                }
                nu_core::equiv::TProof::Cospan {
                    left,
                    right,
                    evidence,
                } => {
                    writeln!(out, "  apex      {}", left.cod())?;
                    writeln!(out, "  left leg  {dim}{left}{reset}")?;
                    writeln!(out, "  right leg {dim}{right}{reset}")?;
                    writeln!(out, "  evidence  {evidence:?}")?;
                }
            }
        }
        Verdict::Equivalent(Certificate::Parametric { base, witness }) => {
            writeln!(out, "{bold}equivalent{reset} over the span {base} (parametric witness)")?;
            render_witness(witness, 1, out)?;
        }
        Verdict::Distinguished(obs) => {
            writeln!(out, "{bold}distinguished{reset} by the observation: {obs}")?;
        }
        Verdict::Unknown(reason) => {
            writeln!(out, "{bold}unknown{reset}: {reason}")?;
        }
    }
    Ok(())
}

fn render_witness(
    witness: &nu_core::equiv::ParamWitness,
    indent: usize,
    out: &mut impl Write,
) -> std::io::Result<()> {
    let pad = "  ".repeat(indent);
    use nu_core::equiv::ParamWitness as W;
    match witness {
        W::Ground => writeln!(out, "{pad}ground values agree"),
        W::Table => writeln!(out, "{pad}truth tables agree on every linked pair"),
        W::Bottom => writeln!(out, "{pad}both computations diverge"),
        W::TLevel { span, inner } => {
            writeln!(out, "{pad}span {span}")?;
            writeln!(out, "{pad}low point {}", span.low())?;
            render_witness(inner, indent + 1, out)
        }
    }
}
