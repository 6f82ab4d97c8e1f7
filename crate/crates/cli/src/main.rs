//! Command-line surface for the fgroup library: exact element arithmetic,
//! word evaluation, finite-index subgroup analysis, and generation of
//! certified rectangle-subgroup generating pairs.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fgroup::dyadic::{display_rational, parse_rational};
use fgroup::lattice::{LatticeError, LatticeSubgroup};
use fgroup::plmap::DEFAULT_ITERATION_CAP;
use fgroup::thompson::{
    kab_generators, phi, verify_kab_certificate, word, ThompsonError,
};
use fgroup::{FIFSubgroup, PLMap};
use serde_json::json;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "fgroup",
    version,
    about = "Exact arithmetic for Thompson's group F and its finite-index subgroups"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// JSON file of named elements ({"name": {"breaks": [["1/4","1/2"]]}}),
    /// merged over the built-in names x0, x1, f0, f1, g0, g1.
    #[arg(long, global = true, value_name = "FILE")]
    env: Option<PathBuf>,

    /// Seed for randomized completions.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Bound on iterate counts in iterative operations.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_ITERATION_CAP)]
    iteration_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on single elements.
    #[command(subcommand)]
    Element(ElementCmd),
    /// Finite-index subgroup analysis.
    #[command(subcommand)]
    Subgroup(SubgroupCmd),
    /// Generate and certify the standard generating pair of K_(a,b).
    Kab {
        a: u32,
        b: u32,
    },
}

/// An element argument is a breakpoint list like "(1/4,1/2);(1/2,3/4)", a
/// JSON file reference "@path", the literal "identity", or a named element
/// from the environment.
#[derive(Subcommand)]
enum ElementCmd {
    /// Image of a rational point of [0,1] under an element.
    Eval {
        #[arg(long = "breaks", value_name = "ELEM")]
        elem: String,
        /// The point, e.g. "1/3" or "5/8".
        #[arg(long, value_name = "POINT")]
        at: String,
    },
    /// Product of two or more elements, applied left to right.
    Compose {
        #[arg(long = "breaks", value_name = "ELEM")]
        elems: Vec<String>,
    },
    /// Inverse of an element.
    Inverse {
        #[arg(long = "breaks", value_name = "ELEM")]
        elem: String,
    },
    /// Conjugate of the first element by the second.
    Conjugate {
        #[arg(long = "breaks", value_name = "ELEM")]
        elems: Vec<String>,
    },
    /// Commutator of two elements.
    Commutator {
        #[arg(long = "breaks", value_name = "ELEM")]
        elems: Vec<String>,
    },
    /// Slope-exponent pair at the two endpoints.
    Phi {
        #[arg(long = "breaks", value_name = "ELEM")]
        elem: String,
    },
    /// Maximal open intervals the element moves.
    Orbitals {
        #[arg(long = "breaks", value_name = "ELEM")]
        elem: String,
    },
    /// The element reflected through the midpoint of the square.
    Rev {
        #[arg(long = "breaks", value_name = "ELEM")]
        elem: String,
    },
    /// Evaluate a word such as "[x0 x1^-1, x1^x0]" over named elements.
    Word {
        word: String,
    },
}

/// A subgroup argument lists the slope pairs that span its image lattice:
/// each ';'-separated part is a literal "(x,y)" pair or an "@path" element
/// file whose pair is computed.
#[derive(Subcommand)]
enum SubgroupCmd {
    /// Canonical lattice, index, rectangle invariants, and quotient data.
    Analyze {
        spec: String,
    },
    /// Isomorphism test between two subgroups.
    IsoCheck {
        left: String,
        right: String,
    },
    /// All canonical triples of a given index.
    Enumerate {
        #[arg(long, value_name = "N")]
        index: i64,
    },
    /// Canonical triples of a given index grouped into isomorphism classes.
    Classify {
        #[arg(long, value_name = "N")]
        index: i64,
    },
}

enum CliError {
    /// Bad arguments or unparseable input: exit code 2.
    Usage(String),
    /// Valid input with no mathematical answer: exit code 3.
    Math(String),
}

struct Outcome {
    text: String,
    certificate_failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, certificate_failed: false }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn lattice_error(e: LatticeError, context: &str) -> CliError {
    match e {
        LatticeError::NotFiniteIndex | LatticeError::Overflow => {
            CliError::Math(format!("{e}: {context}"))
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn load_env(path: &Option<PathBuf>) -> Result<HashMap<String, PLMap>, CliError> {
    let mut env = word::default_env();
    if let Some(p) = path {
        let data = fs::read_to_string(p)
            .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
        let extra: HashMap<String, PLMap> = serde_json::from_str(&data)
            .map_err(|e| usage(format!("bad element file {}: {e}", p.display())))?;
        env.extend(extra);
    }
    Ok(env)
}

fn read_element_file(path: &str) -> Result<PLMap, CliError> {
    let data =
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&data).map_err(|e| usage(format!("bad element file {path}: {e}")))
}

fn resolve_element(spec: &str, env: &HashMap<String, PLMap>) -> Result<PLMap, CliError> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        return read_element_file(path);
    }
    if spec.is_empty() || spec == "identity" {
        return Ok(PLMap::identity());
    }
    if spec.contains('(') {
        return PLMap::parse_breaks_text(spec).map_err(usage);
    }
    env.get(spec)
        .cloned()
        .ok_or_else(|| usage(format!("unknown element name {spec:?}")))
}

fn resolve_subgroup(spec: &str, env: &HashMap<String, PLMap>) -> Result<FIFSubgroup, CliError> {
    let mut pairs = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.starts_with('@') || env.contains_key(part) {
            let f = resolve_element(part, env)?;
            let p = phi(&f);
            pairs.push((p.e0, p.e1));
        } else {
            let single = fgroup::lattice::parse_phi_pairs(part).map_err(usage)?;
            pairs.extend(single);
        }
    }
    FIFSubgroup::from_phi_pairs(&pairs)
        .map_err(|e| lattice_error(e, &format!("generators {pairs:?}")))
}

fn element_outcome(f: &PLMap, format: Format) -> Outcome {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(f).expect("element serializes"),
        Format::Text => {
            if f.is_identity() {
                "identity".to_owned()
            } else {
                f.to_breaks_text()
            }
        }
    };
    Outcome::ok(text)
}

fn exactly_two(elems: &[String], what: &str) -> Result<(), CliError> {
    if elems.len() == 2 {
        Ok(())
    } else {
        Err(usage(format!("{what} takes exactly two --breaks arguments, got {}", elems.len())))
    }
}

fn run_element(cmd: &ElementCmd, cli: &Cli) -> Result<Outcome, CliError> {
    let env = load_env(&cli.env)?;
    match cmd {
        ElementCmd::Eval { elem, at } => {
            let f = resolve_element(elem, &env)?;
            let t = parse_rational(at).map_err(usage)?;
            let image = f.evaluate(&t).map_err(|e| CliError::Math(e.to_string()))?;
            let value = display_rational(&image);
            Ok(Outcome::ok(match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "value": value }))
                    .expect("value serializes"),
                Format::Text => value,
            }))
        }
        ElementCmd::Compose { elems } => {
            if elems.len() < 2 {
                return Err(usage(format!(
                    "compose takes at least two --breaks arguments, got {}",
                    elems.len()
                )));
            }
            let mut product = PLMap::identity();
            for spec in elems {
                product = product.compose(&resolve_element(spec, &env)?);
            }
            Ok(element_outcome(&product, cli.format))
        }
        ElementCmd::Inverse { elem } => {
            let f = resolve_element(elem, &env)?;
            Ok(element_outcome(&f.inverse(), cli.format))
        }
        ElementCmd::Conjugate { elems } => {
            exactly_two(elems, "conjugate")?;
            let f = resolve_element(&elems[0], &env)?;
            let g = resolve_element(&elems[1], &env)?;
            Ok(element_outcome(&f.conjugate(&g), cli.format))
        }
        ElementCmd::Commutator { elems } => {
            exactly_two(elems, "commutator")?;
            let f = resolve_element(&elems[0], &env)?;
            let g = resolve_element(&elems[1], &env)?;
            Ok(element_outcome(&f.commutator(&g), cli.format))
        }
        ElementCmd::Phi { elem } => {
            let f = resolve_element(elem, &env)?;
            let p = phi(&f);
            Ok(Outcome::ok(match cli.format {
                Format::Json => serde_json::to_string_pretty(&p).expect("phi serializes"),
                Format::Text => p.to_string(),
            }))
        }
        ElementCmd::Orbitals { elem } => {
            let f = resolve_element(elem, &env)?;
            let orbs = f.orbitals();
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    let list: Vec<[String; 2]> = orbs
                        .iter()
                        .map(|o| [display_rational(&o.lo), display_rational(&o.hi)])
                        .collect();
                    serde_json::to_string_pretty(&json!({ "orbitals": list }))
                        .expect("orbitals serialize")
                }
                Format::Text => {
                    if orbs.is_empty() {
                        "none".to_owned()
                    } else {
                        orbs.iter()
                            .map(|o| o.to_string())
                            .collect::<Vec<_>>()
                            .join(";")
                    }
                }
            }))
        }
        ElementCmd::Rev { elem } => {
            let f = resolve_element(elem, &env)?;
            Ok(element_outcome(&f.rev(), cli.format))
        }
        ElementCmd::Word { word: input } => {
            let expr = word::parse_word(input).map_err(usage)?;
            let f = word::eval_word(&expr, &env).map_err(|e| match e {
                ThompsonError::UnboundName(_) => usage(e),
                other => CliError::Math(other.to_string()),
            })?;
            Ok(element_outcome(&f, cli.format))
        }
    }
}

fn run_subgroup(cmd: &SubgroupCmd, cli: &Cli) -> Result<Outcome, CliError> {
    let env = load_env(&cli.env)?;
    match cmd {
        SubgroupCmd::Analyze { spec } => {
            let s = resolve_subgroup(spec, &env)?;
            let summary = s.summary();
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&summary).expect("summary serializes")
                }
                Format::Text => summary.to_string(),
            }))
        }
        SubgroupCmd::IsoCheck { left, right } => {
            let l = resolve_subgroup(left, &env)?;
            let r = resolve_subgroup(right, &env)?;
            let verdict = l.are_isomorphic(&r);
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&verdict).expect("verdict serializes")
                }
                Format::Text => verdict.to_string(),
            }))
        }
        SubgroupCmd::Enumerate { index } => {
            let list = LatticeSubgroup::enumerate_index(*index)
                .map_err(|e| lattice_error(e, &format!("index {index}")))?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({ "index": index, "subgroups": list }))
                        .expect("subgroups serialize")
                }
                Format::Text => list
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("\n"),
            }))
        }
        SubgroupCmd::Classify { index } => {
            let classes = fgroup::classify::classify_index(*index)
                .map_err(|e| lattice_error(e, &format!("index {index}")))?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({ "index": index, "classes": classes }))
                        .expect("classes serialize")
                }
                Format::Text => classes
                    .iter()
                    .enumerate()
                    .map(|(i, class)| {
                        let members = class
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join("; ");
                        format!("class {}: {members}", i + 1)
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            }))
        }
    }
}

fn run_kab(a: u32, b: u32, cli: &Cli) -> Result<Outcome, CliError> {
    if a < 1 || b < 1 {
        return Err(usage(format!("kab parameters must be positive, got a={a} b={b}")));
    }
    let (y0, y1) = kab_generators(a, b, cli.seed);
    let report = verify_kab_certificate(a, b, &y0, &y1);
    let all_passed = report.all_passed();
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "a": a,
            "b": b,
            "y0": y0,
            "y1": y1,
            "certificate": report,
            "all_passed": all_passed,
        }))
        .expect("report serializes"),
        Format::Text => format!(
            "y0: {}\ny1: {}\n{report}",
            y0.to_breaks_text(),
            y1.to_breaks_text()
        ),
    };
    Ok(Outcome { text, certificate_failed: !all_passed })
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.iteration_cap == 0 {
        return Err(usage("--iteration-cap must be positive"));
    }
    match &cli.command {
        Command::Element(cmd) => run_element(cmd, cli),
        Command::Subgroup(cmd) => run_subgroup(cmd, cli),
        Command::Kab { a, b } => run_kab(*a, *b, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.text);
            if outcome.certificate_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
