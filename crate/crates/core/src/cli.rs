//! Command-line front end. Every subcommand is a thin wrapper over one library
//! call; the result is wrapped in a versioned report and printed as JSON
//! (`--json`) or as an indented text rendering of the same value.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::chaining::{
    chains, classify_chain_set, enumerate_chaining_orders_capped, transport_order, DEFAULT_CHAIN_CAP,
};
use crate::classes::ClassLimits;
use crate::definability::{derive_structure, synthesize_definition};
use crate::error::Error;
use crate::generate::{generate, GeneratorKind, GeneratorSpec};
use crate::iso::{find_isomorphism, Bijection};
use crate::logic::{
    build_alpha, build_phi_capped, build_psi_capped, build_psi_n_capped, eval, parse_formula, Assignment,
    OrderDefinitions, DEFAULT_PHI_CAP,
};
use crate::monomorphy::{check_reducts_capped, frasnay_sweep, is_k_monomorphic, is_monomorphic, SweepOptions, DEFAULT_REDUCT_CAP};
use crate::order::LinearOrder;
use crate::structure::{parse_structure, Signature, Structure};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "monostruct", version, about = "Monomorphy, chaining orders and order definitions of finite structures")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel sections (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Add wall-clock time to the report (makes output run dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// k-monomorphy verdicts for every k, or one k.
    CheckMonomorphy {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Also check every nonempty reduct.
        #[arg(long)]
        reducts: bool,
        #[arg(long, default_value_t = DEFAULT_REDUCT_CAP)]
        max_symbols: usize,
    },
    /// All chaining orders and their classification.
    FindChains {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CHAIN_CAP)]
        max_size: usize,
    },
    /// Classification of the chain set only.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CHAIN_CAP)]
        max_size: usize,
    },
    /// Quantifier-free definitions of the relations over an order.
    SynthesizeDef {
        file: PathBuf,
        /// Ascending enumeration, e.g. `2,0,1`.
        #[arg(long)]
        order: String,
        /// Write the definitions file here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Structure carved out of an order by a definitions file.
    Derive {
        #[arg(long)]
        order: String,
        #[arg(long)]
        defs: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Example or random structure.
    Gen {
        kind: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sentence saying every |K|-subset is isomorphic to K, or that a structure is n-monomorphic.
    GenSentence(GenSentence),
    /// Truth of a formula in a structure.
    ModelCheck {
        file: PathBuf,
        #[arg(long, conflicts_with = "sentence_file")]
        sentence: Option<String>,
        #[arg(long)]
        sentence_file: Option<PathBuf>,
        /// Values of v0, v1, ...
        #[arg(long)]
        assign: Option<String>,
    },
    /// Merge relations with equal extensions.
    ReduceSig {
        file: PathBuf,
        /// Formula to translate onto the reduced signature.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Empirical threshold m for one relation of the given arity.
    FrasnaySweep {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = SweepOptions::default().exhaustive_limit)]
        exhaustive_limit: u64,
        #[arg(long, default_value_t = SweepOptions::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pull an order on Y back to Z along an isomorphism Z -> Y.
    Transport {
        z: PathBuf,
        y: PathBuf,
        #[arg(long)]
        order: String,
        /// Images of 0, 1, ... of Z; found by search when omitted.
        #[arg(long)]
        bijection: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct GenSentence {
    /// Build from this structure K.
    #[arg(long, conflicts_with = "signature")]
    pub k_file: Option<PathBuf>,
    /// alpha, phi or psi (with --k-file).
    #[arg(long, default_value = "psi")]
    pub kind: String,
    /// Build the n-monomorphy sentence over this signature, e.g. `R/2`.
    #[arg(long, requires = "n")]
    pub signature: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PHI_CAP)]
    pub max_n: usize,
    #[arg(long, default_value_t = ClassLimits::default().max_classes)]
    pub max_classes: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable files, malformed input: exit 1.
    Usage(String),
    /// Library errors on well-formed input: exit 2.
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::FormulaSyntax { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({"kind": "usage", "message": m}),
            Failure::Domain(e) => json!({"kind": "domain", "message": e.to_string(), "detail": format!("{e:?}")}),
        }
    }
}

#[derive(Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

struct Ctx {
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
        String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{} is not UTF-8", path.display())))
    }

    fn structure(&mut self, path: &Path) -> Result<Structure, Failure> {
        let text = self.read(path)?;
        parse_structure(&text)
            .map(|p| p.structure)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn order_arg(text: &str) -> Result<LinearOrder, Failure> {
    LinearOrder::parse(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn list_arg(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Usage(format!("`{s}` is not a number"))))
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<(&'static str, Value), Failure> {
    match command {
        Command::CheckMonomorphy {
            file,
            k,
            reducts,
            max_symbols,
        } => {
            let y = ctx.structure(file)?;
            let mut out = match k {
                Some(k) => json!({"level": to_value(&is_k_monomorphic(&y, *k)?)}),
                None => to_value(&is_monomorphic(&y)?),
            };
            if *reducts {
                out["reducts"] = to_value(&check_reducts_capped(&y, *max_symbols)?);
            }
            Ok(("check-monomorphy", out))
        }
        Command::FindChains { file, max_size } => {
            let y = ctx.structure(file)?;
            let l = enumerate_chaining_orders_capped(&y, *max_size)?;
            let classification = if l.is_empty() {
                Value::Null
            } else {
                to_value(&classify_chain_set(&y, &l)?)
            };
            Ok((
                "find-chains",
                json!({"size": l.size, "count": l.len(), "orders": to_value(&l.orders), "classification": classification}),
            ))
        }
        Command::Classify { file, max_size } => {
            let y = ctx.structure(file)?;
            let l = enumerate_chaining_orders_capped(&y, *max_size)?;
            Ok(("classify", to_value(&classify_chain_set(&y, &l)?)))
        }
        Command::SynthesizeDef { file, order, output } => {
            let y = ctx.structure(file)?;
            let x = order_arg(order)?;
            let d = synthesize_definition(&y, &x)?;
            if let Some(path) = output {
                write(path, &d.to_text())?;
            }
            let mut v = to_value(&d);
            v["text"] = Value::String(d.to_text());
            Ok(("synthesize-def", v))
        }
        Command::Derive { order, defs, output } => {
            let x = order_arg(order)?;
            let text = ctx.read(defs)?;
            let d = OrderDefinitions::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", defs.display())))?;
            let y = derive_structure(&x, &d)?;
            structure_result("derive", &y, output.as_deref())
        }
        Command::Gen {
            kind,
            size,
            seed,
            density,
            output,
        } => {
            let kind: GeneratorKind = kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let spec = GeneratorSpec {
                kind,
                size: *size,
                seed: *seed,
                density: *density,
            };
            let y = generate(&spec)?;
            let (cmd, mut v) = structure_result("gen", &y, output.as_deref())?;
            v["spec"] = to_value(&spec);
            Ok((cmd, v))
        }
        Command::GenSentence(g) => gen_sentence(g, ctx),
        Command::ModelCheck {
            file,
            sentence,
            sentence_file,
            assign,
        } => {
            let y = ctx.structure(file)?;
            let text = match (sentence, sentence_file) {
                (Some(s), _) => s.clone(),
                (None, Some(p)) => ctx.read(p)?,
                (None, None) => return Err(Failure::Usage("give --sentence or --sentence-file".into())),
            };
            let phi = parse_formula(text.trim(), y.signature())?;
            let values = assign.as_deref().map(list_arg).transpose()?.unwrap_or_default();
            let verdict = eval(&y, &phi, &Assignment::from_slice(&values))?;
            Ok(("model-check", json!({"formula": phi.to_string(), "assignment": values, "verdict": verdict})))
        }
        Command::ReduceSig { file, formula, output } => {
            let y = ctx.structure(file)?;
            let r = crate::logic::reduce_duplicate_relations(&y);
            if let Some(path) = output {
                write(path, &r.structure.to_text())?;
            }
            let mut v = json!({
                "classes": r.classes,
                "translation": r.translation.pairs().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "structure": to_value(&r.structure),
                "file": r.structure.to_text(),
            });
            if let Some(f) = formula {
                let phi = parse_formula(f, y.signature())?;
                v["formula"] = Value::String(r.translation.translate(&phi).to_string());
            }
            Ok(("reduce-sig", v))
        }
        Command::FrasnaySweep {
            arity,
            max_size,
            exhaustive_limit,
            samples,
            seed,
        } => {
            let options = SweepOptions {
                exhaustive_limit: *exhaustive_limit,
                samples: *samples,
                seed: *seed,
            };
            Ok(("frasnay-sweep", to_value(&frasnay_sweep(*arity, *max_size, options)?)))
        }
        Command::Transport { z, y, order, bijection } => {
            let zs = ctx.structure(z)?;
            let ys = ctx.structure(y)?;
            let x = order_arg(order)?;
            let f = match bijection {
                Some(b) => Bijection::new(list_arg(b)?)?,
                None => find_isomorphism(&zs, &ys)?
                    .ok_or_else(|| Failure::Domain(Error::InvalidBijection("the structures are not isomorphic".into())))?,
            };
            if !zs.relabel(f.as_slice())?.eq(&ys) {
                return Err(Failure::Domain(Error::InvalidBijection(format!(
                    "{:?} is not an isomorphism",
                    f.as_slice()
                ))));
            }
            let pulled = transport_order(&f, &x)?;
            Ok((
                "transport",
                json!({
                    "bijection": to_value(&f),
                    "order": to_value(&pulled),
                    "chains_y": chains(&ys, &x)?.is_ok(),
                    "chains_z": chains(&zs, &pulled)?.is_ok(),
                }),
            ))
        }
    }
}

fn structure_result(cmd: &'static str, y: &Structure, output: Option<&Path>) -> Result<(&'static str, Value), Failure> {
    if let Some(path) = output {
        write(path, &y.to_text())?;
    }
    Ok((cmd, json!({"structure": to_value(y), "file": y.to_text()})))
}

fn gen_sentence(g: &GenSentence, ctx: &mut Ctx) -> Result<(&'static str, Value), Failure> {
    let phi = match (&g.k_file, &g.signature, g.n) {
        (Some(path), _, _) => {
            let k = ctx.structure(path)?;
            match g.kind.as_str() {
                "alpha" => build_alpha(&k)?,
                "phi" => build_phi_capped(&k, g.max_n)?,
                "psi" => build_psi_capped(&k, g.max_n)?,
                other => return Err(Failure::Usage(format!("unknown sentence kind `{other}`"))),
            }
        }
        (None, Some(sig), Some(n)) => {
            let sig = Signature::parse(sig).map_err(|e| Failure::Usage(e.to_string()))?;
            let limits = ClassLimits {
                max_classes: g.max_classes,
                ..ClassLimits::default()
            };
            build_psi_n_capped(&sig, n, limits, g.max_n)?
        }
        _ => return Err(Failure::Usage("give --k-file, or --signature with --n".into())),
    };
    if let Some(path) = &g.output {
        write(path, &format!("{phi}\n"))?;
    }
    Ok((
        "gen-sentence",
        json!({"formula": phi.to_string(), "size": phi.size(), "sentence": phi.is_sentence()}),
    ))
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("error: cannot start {} threads: {e}\n", cli.threads),
            }
        }
    };
    let mut ctx = Ctx { inputs: Vec::new() };
    let start = Instant::now();
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    let elapsed = start.elapsed();
    let (code, mut report, err) = match result {
        Ok((command, value)) => (
            0,
            json!({"schema_version": SCHEMA_VERSION, "command": command, "inputs": to_value(&ctx.inputs), "result": value}),
            None,
        ),
        Err(f) => (
            f.exit_code(),
            json!({"schema_version": SCHEMA_VERSION, "command": command_name(&cli.command), "inputs": to_value(&ctx.inputs), "error": f.to_value()}),
            Some(f),
        ),
    };
    if cli.timing {
        report["timing_ms"] = json!(elapsed.as_secs_f64() * 1000.0);
    }
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).unwrap() + "\n"
    } else {
        render_text(&report)
    };
    let stderr = match err {
        Some(Failure::Usage(m)) => format!("error: {m}\n"),
        Some(Failure::Domain(e)) => format!("error: {e}\n"),
        None => String::new(),
    };
    Outcome { code, stdout, stderr }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckMonomorphy { .. } => "check-monomorphy",
        Command::FindChains { .. } => "find-chains",
        Command::Classify { .. } => "classify",
        Command::SynthesizeDef { .. } => "synthesize-def",
        Command::Derive { .. } => "derive",
        Command::Gen { .. } => "gen",
        Command::GenSentence(_) => "gen-sentence",
        Command::ModelCheck { .. } => "model-check",
        Command::ReduceSig { .. } => "reduce-sig",
        Command::FrasnaySweep { .. } => "frasnay-sweep",
        Command::Transport { .. } => "transport",
    }
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| x.is_number()) => {
            Some(format!("[{}]", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        _ => None,
    }
}

fn render_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match (scalar(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::String(s)) => {
                        out.push_str(&format!("{pad}{k}: |\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, _) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
