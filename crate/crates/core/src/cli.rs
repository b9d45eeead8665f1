//! The `ord` command line front end.
//!
//! Every subcommand produces an ordered list of named fields. `--format text`
//! prints the first field's value on its own line followed by `name: value`
//! lines for the rest; `--format structured` prints the same fields as one
//! JSON object.
//!
//! Exit codes: 0 success, 1 falsification event, 2 precondition or input
//! error, 3 resource limit.

use std::cmp::Ordering;
use std::io::Write;
use std::sync::atomic::AtomicBool;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::codes::OrdCode;
use crate::error::{Error, Result};
use crate::fundamental::{is_large, minimal_large_endpoint, verify_descent, FiniteSet};
use crate::limits::Limits;
use crate::ordinal::{Kind, Nat, Ordinal};
use crate::ramsey::{
    build_er_tree, gamma_sequence_general, gamma_sequence_pairs, ks_pipeline, ph_threshold_with,
    php_homogeneous, Coloring,
};
use crate::syntax::parse_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaKind {
    Pairs,
    General,
}

#[derive(Debug, Parser)]
#[command(name = "ord", version, about = "Ordinals below epsilon_0, largeness and Ramsey experiments")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalise an expression to Cantor normal form.
    Eval { expr: String },
    /// Compare two expressions: LT, EQ or GT.
    Cmp { a: String, b: String },
    /// Fundamental sequence value `expr[x]`, optionally iterated further.
    Fund {
        expr: String,
        x: u64,
        /// Further arguments applied in order after `x`, comma separated.
        #[arg(long, value_delimiter = ',')]
        iter: Vec<u64>,
    },
    /// Whether a finite set is expr-large.
    Large { expr: String, set: String },
    /// Least N <= cap with [x0, N] expr-large.
    Minlarge {
        expr: String,
        x0: u64,
        #[arg(long)]
        cap: u64,
    },
    /// Encode an ordinal as a natural number.
    Code { expr: String },
    /// Decode a natural number to an ordinal.
    Decode { code: String },
    /// Fundamental sequence on codes.
    Cfund { code: String, x: u64 },
    /// Build the tree of a coloring, optionally with its γ-sequence.
    Tree {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum)]
        gamma: Option<GammaKind>,
        /// Seed ordinal for the general γ-sequence.
        #[arg(long)]
        alpha: Option<String>,
        /// Color bound `c`; defaults to the coloring's number of colors.
        #[arg(long)]
        c: Option<u64>,
    },
    /// Pigeonhole: an ω-large color class of a coloring of singletons.
    Php {
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Tree-based extraction of a relatively large homogeneous set.
    Pipeline {
        #[arg(long)]
        coloring: PathBuf,
        /// Maximum number of tree insertions.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Least N such that every coloring of {min..N} has a relatively large
    /// homogeneous set.
    Threshold {
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long, default_value_t = 2)]
        colors: u32,
        #[arg(long, default_value_t = 3)]
        min: u64,
        #[arg(long)]
        cap: u64,
        /// Search node budget.
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Check one instance of the descent-length lemma.
    Descent {
        /// Elements of X, separated by spaces or commas.
        #[arg(long)]
        set: String,
        #[arg(long)]
        l: u64,
        /// The γ sequence, separated by ';'.
        #[arg(long)]
        gammas: String,
        #[arg(long, default_value_t = 4096)]
        iter_cap: usize,
    },
}

/// Ordered output fields; the first one is the headline result.
#[derive(Debug, Default)]
pub struct Output {
    fields: Vec<(String, Value)>,
}

impl Output {
    fn with(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.fields.push((name.to_string(), value.into()));
        self
    }

    pub fn fields(&self) -> &[(String, Value)] {
        &self.fields
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let map: Map<String, Value> = self.fields.iter().cloned().collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                for (i, (name, value)) in self.fields.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&text_value(value));
                    } else {
                        out.push_str(name);
                        out.push_str(": ");
                        out.push_str(&text_value(value));
                    }
                    if !out.ends_with('\n') {
                        out.push('\n');
                    }
                }
                out
            }
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Falsification(_) => 1,
        Error::ResourceLimit(_) => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ResourceLimit(_) => "resource-limit",
        Error::Precondition(_) => "precondition",
        Error::Domain(_) => "domain",
        Error::InvalidCode(_) => "invalid-code",
        Error::Parse { .. } => "parse",
        Error::Coloring(_) => "coloring",
        Error::Falsification(_) => "falsification",
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit code.
/// Set by the binary's interrupt handler; long searches poll it and stop.
pub static INTERRUPT: AtomicBool = AtomicBool::new(false);

pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let limits = Limits::default();
    match run(&cli.command, &limits) {
        Ok(o) => {
            let _ = out.write_all(o.render(cli.format).as_bytes());
            0
        }
        Err(e) => {
            match cli.format {
                Format::Structured => {
                    let v = json!({"error": error_kind(&e), "message": e.to_string()});
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
                }
                Format::Text => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            exit_code(&e)
        }
    }
}

pub fn run(cmd: &Command, limits: &Limits) -> Result<Output> {
    let p = |s: &str| parse_with(s, limits);
    match cmd {
        Command::Eval { expr } => {
            let a = p(expr)?;
            Ok(Output::default()
                .with("value", a.to_string())
                .with("kind", kind_name(a.classify()))
                .with("max_coefficient", a.max_coefficient().to_string())
                .with("height", a.height())
                .with("terms", a.term_count()))
        }
        Command::Cmp { a, b } => {
            let ord = p(a)?.cmp(&p(b)?);
            let s = match ord {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            };
            Ok(Output::default().with("result", s))
        }
        Command::Fund { expr, x, iter } => {
            let a = p(expr)?;
            let mut xs = vec![*x];
            xs.extend(iter);
            let mut states = vec![a];
            for &x in &xs {
                let next = states.last().expect("nonempty").fund(x);
                if next.size() > limits.max_terms {
                    return Err(Error::ResourceLimit(format!(
                        "more than {} terms",
                        limits.max_terms
                    )));
                }
                states.push(next);
            }
            let out = Output::default().with("value", states.last().expect("nonempty").to_string());
            if iter.is_empty() {
                Ok(out)
            } else {
                Ok(out
                    .with("inputs", xs)
                    .with("states", states.iter().map(|s| s.to_string()).collect::<Vec<_>>()))
            }
        }
        Command::Large { expr, set } => {
            let a = p(expr)?;
            let xs = parse_set(set)?;
            Ok(Output::default().with("large", is_large(&a, &xs, limits)?))
        }
        Command::Minlarge { expr, x0, cap } => {
            let a = p(expr)?;
            let n = minimal_large_endpoint(&a, *x0, *cap, limits)?;
            Ok(Output::default().with("endpoint", n))
        }
        Command::Code { expr } => {
            let code = OrdCode::encode(&p(expr)?, limits)?;
            Ok(Output::default().with("code", code.value().to_string()))
        }
        Command::Decode { code } => {
            let c = OrdCode::new(parse_nat(code)?, limits)?;
            Ok(Output::default().with("value", c.decode(limits)?.to_string()))
        }
        Command::Cfund { code, x } => {
            let c = OrdCode::new(parse_nat(code)?, limits)?;
            let f = c.fund(*x, limits)?;
            Ok(Output::default()
                .with("code", f.value().to_string())
                .with("value", f.decode(limits)?.to_string()))
        }
        Command::Tree {
            coloring,
            level,
            gamma,
            alpha,
            c,
        } => {
            let col = read_coloring(coloring)?;
            let x = col.ground().clone();
            let cc = c.unwrap_or(u64::from(col.colors()));
            match gamma {
                None => {
                    let tree = build_er_tree(&x, &col, *level)?;
                    Ok(Output::default()
                        .with("tree", tree.to_text())
                        .with("nodes", tree.len())
                        .with("max_branching", tree.max_branching())
                        .with("deepest_branch", tree.label_set(tree.deepest()).elements().to_vec()))
                }
                Some(kind) => {
                    if *level + 1 != col.arity() {
                        return Err(Error::Precondition(format!(
                            "tree level must be arity - 1 = {}",
                            col.arity() - 1
                        )));
                    }
                    let trace = match kind {
                        GammaKind::Pairs => gamma_sequence_pairs(&x, &col, cc, limits)?,
                        GammaKind::General => {
                            let a = alpha.as_deref().ok_or_else(|| {
                                Error::Precondition("--gamma general needs --alpha".into())
                            })?;
                            gamma_sequence_general(&x, &col, &p(a)?, cc, limits)?
                        }
                    };
                    let cert = trace.certificate();
                    cert.check()?;
                    let tree = &trace.tree;
                    Ok(Output::default()
                        .with("tree", tree.to_text())
                        .with("nodes", tree.len())
                        .with("max_branching", tree.max_branching())
                        .with("deepest_branch", tree.label_set(tree.deepest()).elements().to_vec())
                        .with(
                            "gammas",
                            trace.gammas().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        )
                        .with("certificate_holds", cert.holds()))
                }
            }
        }
        Command::Php { coloring } => {
            let col = read_coloring(coloring)?;
            let h = php_homogeneous(col.ground(), &col, limits)?;
            Ok(Output::default().with("class", h.elements().to_vec()))
        }
        Command::Pipeline { coloring, budget } => {
            let col = read_coloring(coloring)?;
            let r = ks_pipeline(col.ground(), &col, *budget, limits)?;
            Ok(Output::default()
                .with("homogeneous", r.homogeneous.map(|h| h.into_vec()))
                .with(
                    "branches",
                    r.branches.iter().map(|b| b.elements().to_vec()).collect::<Vec<_>>(),
                )
                .with("work", r.work))
        }
        Command::Threshold {
            arity,
            colors,
            min,
            cap,
            max_nodes,
        } => {
            let mut l = limits.clone();
            if let Some(m) = max_nodes {
                l.max_search_nodes = *m;
            }
            // each reported n is a proven lower bound, kept if the search is cut short
            let mut last = None;
            let res = ph_threshold_with(*arity, *colors, *min, *cap, &l, &INTERRUPT, &mut |n, st| {
                eprintln!("threshold > {n} (bad coloring found, {} nodes so far)", st.nodes);
                last = Some(n);
            });
            match (res, last) {
                (Err(Error::ResourceLimit(m)), Some(n)) => {
                    Err(Error::limit(format!("{m}; threshold exceeds {n}")))
                }
                (res, _) => Ok(Output::default().with("threshold", res?)),
            }
        }
        Command::Descent {
            set,
            l,
            gammas,
            iter_cap,
        } => {
            let xs = parse_set(set)?;
            let gs: Vec<Ordinal> = gammas
                .split(';')
                .map(|g| p(g.trim()))
                .collect::<Result<_>>()?;
            let r = verify_descent(&xs, *l, &gs, *iter_cap, limits)?;
            if r.is_falsification() {
                return Err(Error::Falsification(format!(
                    "descent-length lemma contradicted: {}",
                    serde_json::to_string(&r).expect("json")
                )));
            }
            let verdict = if !r.premises_hold() {
                "premises-fail"
            } else {
                "verified"
            };
            Ok(Output::default()
                .with("verdict", verdict)
                .with("phi", r.phi.to_string())
                .with("phi_large", serde_json::to_value(r.phi_large).expect("json"))
                .with("min_above_two", r.min_above_two)
                .with("mc_bounds_hold", r.mc_bounds_hold)
                .with("strictly_decreasing", r.strictly_decreasing)
                .with("descent_length", r.descent_length)
                .with("conclusion_holds", r.conclusion_holds)
                .with("claim", serde_json::to_value(&r.claim).expect("json")))
        }
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Zero => "zero",
        Kind::Successor => "successor",
        Kind::Limit => "limit",
    }
}

/// A finite set written as numbers separated by spaces or commas, optionally
/// in braces.
pub fn parse_set(text: &str) -> Result<FiniteSet> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    let els = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse::<u64>()
                .map_err(|e| Error::Precondition(format!("bad set element {w:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSet::new(els)
}

fn parse_nat(text: &str) -> Result<Nat> {
    text.trim()
        .parse::<Nat>()
        .map_err(|e| Error::Precondition(format!("bad natural number {text:?}: {e}")))
}

fn read_coloring(path: &PathBuf) -> Result<Coloring> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    Coloring::from_fixture(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["ord"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn headline_examples() {
        assert_eq!(run_args(&["large", "w", "1 2"]), (0, "true\n".into()));
        assert_eq!(run_args(&["minlarge", "w", "4", "--cap", "100"]), (0, "8\n".into()));
        assert_eq!(run_args(&["cmp", "w+w^2", "w^2"]), (0, "EQ\n".into()));
        assert_eq!(run_args(&["code", "w"]), (0, "4\n".into()));
        assert_eq!(run_args(&["decode", "4"]), (0, "w\n".into()));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["eval", "w+"]).0, 2);
        assert_eq!(run_args(&["decode", "2"]).0, 2);
        assert_eq!(run_args(&["eval", "w_100"]).0, 3);
        assert_eq!(run_args(&["nonsense"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(exit_code(&Error::Falsification("x".into())), 1);
        assert_eq!(exit_code(&Error::limit("x")), 3);
    }

    #[test]
    fn structured_matches_text() {
        let (_, s) = run_args(&["--format", "structured", "fund", "w^2", "3", "--iter", "4,5"]);
        let v: Value = serde_json::from_str(&s).unwrap();
        let (_, t) = run_args(&["fund", "w^2", "3", "--iter", "4,5"]);
        assert_eq!(t.lines().next().unwrap(), v["value"].as_str().unwrap());
        assert_eq!(v["states"].as_array().unwrap().len(), 4);
    }
}
