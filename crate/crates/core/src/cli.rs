//! The `engelkit` command line. Exit codes: 0 success or a positive answer,
//! 1 a negative answer, 2 usage or input errors, 3 internal invariant
//! violations.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decomp::{attach_curve_word, decompose_gamma};
use crate::engel::{
    certify_class3, configured_depth, is_trivial_engel, Class3Outcome, EngelVerdict,
};
use crate::error::Error;
use crate::links::{self, classify, mu_bar};
use crate::magnus::{expand_in, Truncation};
use crate::milnor::{equal_mf, is_trivial_mf};
use crate::reproduce;
use crate::slides::{run_script, wndl_check};
use crate::words::{GeneratorContext, Word};

pub const SCHEMA: &str = "engelkit/1";

#[derive(Parser, Debug)]
#[command(
    name = "engelkit",
    version,
    about = "Exact free-group, Milnor-group and link-homotopy computations"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a word expression and print its reduced form.
    Word { expr: String },
    /// Magnus expansion of a word.
    Magnus {
        expr: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Use the reduced expansion (repeated variables killed).
        #[arg(long)]
        reduced: bool,
    },
    /// Free Milnor group queries.
    #[command(subcommand)]
    Milnor(MilnorCmd),
    /// 2-Engel certificates.
    #[command(subcommand)]
    Engel(EngelCmd),
    /// Decompose a fourth lower-central-term word into elementary commutators.
    Decompose(DecomposeArgs),
    /// Link models built from the construction language.
    #[command(subcommand)]
    Link(LinkCmd),
    /// Run a slide script.
    Slide {
        #[arg(long)]
        script: std::path::PathBuf,
    },
    /// Check the WNDL hypotheses for a word.
    Wndl {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run every acceptance check and print a pass/fail table.
    ReproducePaper,
}

#[derive(Subcommand, Debug)]
pub enum MilnorCmd {
    Trivial {
        #[arg(long)]
        n: Option<usize>,
        expr: String,
    },
    Equal {
        #[arg(long)]
        n: Option<usize>,
        u: String,
        v: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum EngelCmd {
    /// Certify every left-normed 4-fold generator commutator.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Decide a single word modulo the fifth lower-central term.
    Check {
        expr: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
    pub gamma: Option<String>,
    /// Genus profile `g,g1,…,g2g` of a height-2 grope.
    #[arg(long, value_delimiter = ',')]
    pub profile: Option<Vec<usize>>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum LinkCmd {
    Build {
        expr: String,
    },
    Classify {
        expr: String,
    },
    Mu {
        expr: String,
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<usize>,
    },
}

struct Output {
    code: i32,
    text: String,
    json: Value,
}

fn out(code: i32, text: impl Into<String>, json: Value) -> Output {
    Output {
        code,
        text: text.into(),
        json,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 3,
        Error::SolverFailure(_) | Error::NotInvertible(_) => 1,
        _ => 2,
    }
}

fn context(text: &str, n: Option<usize>) -> crate::Result<(GeneratorContext, Word, usize)> {
    let ctx = GeneratorContext::infer(text, n.unwrap_or(0))?;
    let w = ctx.parse(text)?;
    let n = n.unwrap_or(ctx.len()).max(w.max_generator() as usize);
    Ok((ctx, w, n))
}

fn execute(cmd: &Command) -> crate::Result<Output> {
    Ok(match cmd {
        Command::Word { expr } => {
            let (ctx, w, _) = context(expr, None)?;
            let r = ctx.render(&w);
            out(0, r.clone(), json!({"word": r, "length": w.len()}))
        }
        Command::Magnus {
            expr,
            degree,
            reduced,
        } => {
            let (ctx, w, n) = context(expr, None)?;
            let trunc = if *reduced {
                Truncation::Reduced(n)
            } else {
                Truncation::Degree(*degree)
            };
            let s = expand_in(&w, trunc);
            out(
                0,
                s.to_string(),
                json!({"word": ctx.render(&w), "series": to_value(&s.to_json())}),
            )
        }
        Command::Milnor(MilnorCmd::Trivial { n, expr }) => {
            let (_, w, n) = context(expr, *n)?;
            let t = is_trivial_mf(&w, n);
            out(
                i32::from(!t),
                if t { "trivial" } else { "nontrivial" },
                json!({"n": n, "trivial": t}),
            )
        }
        Command::Milnor(MilnorCmd::Equal { n, u, v }) => {
            let (ctx, _, n) = context(&format!("({u})*({v})"), *n)?;
            let (a, b) = (ctx.parse(u)?, ctx.parse(v)?);
            let e = equal_mf(&a, &b, n);
            out(
                i32::from(!e),
                if e { "equal" } else { "not equal" },
                json!({"n": n, "equal": e}),
            )
        }
        Command::Engel(EngelCmd::Certify { n, depth }) => {
            let depth = match depth {
                Some(d) => *d,
                None => configured_depth()?,
            };
            let (outcome, stats) = certify_class3(*n, depth)?;
            let ctx = GeneratorContext::numbered("x", *n);
            let head = format!(
                "n={} depth={} instances={} rows={} rank={} complete={}",
                stats.n,
                stats.depth,
                stats.instances_examined,
                stats.accepted_rows,
                stats.lattice_rank,
                stats.complete
            );
            match outcome {
                Class3Outcome::Certified(certs) => {
                    let mut text = vec![head, format!("certified {} targets", certs.len())];
                    for c in &certs {
                        text.push(format!(
                            "{}: {} factors, verified {}",
                            ctx.render(&c.target),
                            c.factors.len(),
                            c.verified
                        ));
                    }
                    let all = certs.iter().all(|c| c.verified);
                    let js: Vec<Value> = certs.iter().map(|c| to_value(&c.to_json(&ctx))).collect();
                    out(
                        i32::from(!all),
                        text.join("\n"),
                        json!({"stats": to_value(&stats), "status": "certified", "certificates": js}),
                    )
                }
                Class3Outcome::InsufficientDepth(missing) => {
                    let text = format!(
                        "{head}\ninsufficient depth: {} targets unreachable",
                        missing.len()
                    );
                    out(
                        1,
                        text,
                        json!({"stats": to_value(&stats), "status": "insufficient-depth", "missing": missing}),
                    )
                }
            }
        }
        Command::Engel(EngelCmd::Check { expr, n, depth }) => {
            let depth = match depth {
                Some(d) => *d,
                None => configured_depth()?,
            };
            let (ctx, w, n) = context(expr, *n)?;
            let v = is_trivial_engel(&w, n, depth)?;
            let (code, text, js) = match &v {
                EngelVerdict::CertifiedTrivial(c) => (
                    0,
                    format!("certified-trivial ({} factors)", c.factors.len()),
                    to_value(&c.to_json(&ctx)),
                ),
                EngelVerdict::Nontrivial {
                    degree,
                    monomial,
                    coefficient,
                } => (
                    1,
                    format!("nontrivial: degree {degree} coordinate {monomial:?} = {coefficient}"),
                    json!({"degree": degree, "monomial": monomial, "coefficient": coefficient.to_string()}),
                ),
                EngelVerdict::UnknownAtDepth { depth } => (
                    1,
                    format!("unknown at depth {depth}"),
                    json!({"depth": depth}),
                ),
            };
            out(code, text, json!({"verdict": v.label(), "detail": js}))
        }
        Command::Decompose(a) => {
            let (ctx, gamma, n) = match (&a.gamma, &a.profile) {
                (Some(g), _) => context(g, a.n)?,
                (None, Some(p)) => {
                    let (w, m) = attach_curve_word(p)?;
                    let n = a.n.unwrap_or(m).max(m);
                    (GeneratorContext::numbered("m", n), w, n)
                }
                (None, None) => {
                    return Err(Error::InvalidArgument("need --gamma or --profile".into()))
                }
            };
            let cert = decompose_gamma(&gamma, n)?;
            let verified = cert.verify()?;
            let mut text = vec![format!(
                "n={n} factors={} verified={verified}",
                cert.factors.len()
            )];
            for f in &cert.factors {
                text.push(format!(
                    "({})^{} by {}",
                    f.commutator.render(&ctx),
                    f.exp,
                    ctx.render(&f.conjugator)
                ));
            }
            text.push(format!(
                "correction trivial in Milnor group: {}",
                cert.correction_trivial_in_mf
            ));
            let mut js = to_value(&cert.to_json(&ctx));
            js["verified"] = json!(verified);
            out(i32::from(!verified), text.join("\n"), js)
        }
        Command::Link(LinkCmd::Build { expr }) => {
            let l = links::build(expr)?;
            let j = l.to_json();
            let text: Vec<String> = j
                .components
                .iter()
                .map(|c| format!("{}: {}", c.meridian, c.longitude))
                .collect();
            out(0, text.join("\n"), to_value(&j))
        }
        Command::Link(LinkCmd::Classify { expr }) => {
            let l = links::build(expr)?;
            let c = classify(&l)?;
            let witness = c.witness.as_ref().map(|w| {
                json!({"component": w.component, "monomial": w.monomial, "coefficient": w.coefficient.to_string()})
            });
            out(
                0,
                c.class.label(),
                json!({"class": c.class.label(), "witness": witness, "doubled_component": c.doubled_component}),
            )
        }
        Command::Link(LinkCmd::Mu { expr, index }) => {
            let l = links::build(expr)?;
            let m = mu_bar(&l, index)?;
            let text = format!("{}{}", m.value, if m.valid { "" } else { " (not valid)" });
            out(
                0,
                text,
                json!({"index": index, "value": m.value.to_string(), "valid": m.valid}),
            )
        }
        Command::Slide { script } => {
            let text = std::fs::read_to_string(script).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", script.display()))
            })?;
            let (state, events) = run_script(&text)?;
            let mut lines = Vec::new();
            let mut code = 0;
            for e in &events {
                match e {
                    crate::slides::ScriptEvent::Slide { slid, word } => {
                        lines.push(format!("slide {slid}: {word}"))
                    }
                    crate::slides::ScriptEvent::Delete { name } => {
                        lines.push(format!("delete {name}"))
                    }
                    crate::slides::ScriptEvent::Report {
                        class,
                        split,
                        remainder_class,
                        engel,
                        ..
                    } => {
                        lines.push(format!("report: {class}"));
                        if !split.is_empty() {
                            lines.push(format!(
                                "split unknots: {}; remainder {remainder_class}",
                                split.join(", ")
                            ));
                        }
                        if let Some(r) = engel {
                            lines.push(format!(
                                "slide property ({} over {}): split unknot {}, remainder {}, holds {}",
                                r.slid, r.over, r.split_unknot, r.remaining_class, r.holds
                            ));
                            code = code.max(i32::from(!r.holds));
                        }
                    }
                }
            }
            lines.push(state.to_string().trim_end().to_string());
            out(code, lines.join("\n"), json!({"events": to_value(&events)}))
        }
        Command::Wndl { gamma, n } => {
            let (_, w, n) = context(gamma, *n)?;
            let c = wndl_check(&w, n);
            let text = format!(
                "free_trivial={} milnor_trivial={} instance={}",
                c.free_trivial,
                c.milnor_trivial,
                c.is_instance()
            );
            out(
                i32::from(!c.is_instance()),
                text,
                json!({"n": n, "free_trivial": c.free_trivial, "milnor_trivial": c.milnor_trivial}),
            )
        }
        Command::ReproducePaper => {
            let mut results = reproduce::run_all();
            results.sort_by_key(|r| r.id);
            let all = results.iter().all(|r| r.passed);
            let mut text: Vec<String> = results.iter().map(|r| r.line()).collect();
            text.push(if all {
                "all criteria passed".into()
            } else {
                "some criteria FAILED".into()
            });
            out(
                i32::from(!all),
                text.join("\n"),
                json!({"criteria": to_value(&results), "passed": all}),
            )
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Word { .. } => "word",
        Command::Magnus { .. } => "magnus",
        Command::Milnor(_) => "milnor",
        Command::Engel(_) => "engel",
        Command::Decompose(_) => "decompose",
        Command::Link(_) => "link",
        Command::Slide { .. } => "slide",
        Command::Wndl { .. } => "wndl",
        Command::ReproducePaper => "reproduce-paper",
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `stdout` and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = if cli.json {
                let mut v = json!({"schema": SCHEMA, "command": command_name(&cli.command)});
                if let (Value::Object(dst), Value::Object(src)) = (&mut v, o.json) {
                    dst.extend(src);
                }
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string(&v).expect("serializable")
                )
            } else {
                writeln!(stdout, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let v = json!({"schema": SCHEMA, "command": command_name(&cli.command), "error": e.to_string()});
                let _ = writeln!(stdout, "{v}");
            }
            let _ = writeln!(stderr, "engelkit {}: {e}", command_name(&cli.command));
            code
        }
    }
}
