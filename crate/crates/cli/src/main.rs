use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use symdyn_core::classifiers::{continuous_orbit_equivalent, flow_equivalent};
use symdyn_core::eventual::{decide_conjugate_higher_powers, stabilization_index, EventualOptions};
use symdyn_core::fixtures;
use symdyn_core::io::{parse_block_map, parse_labelled_graph, parse_matrix, parse_witness, MatrixRole};
use symdyn_core::json::{big_to_value, bigints_to_value, matrix_to_value};
use symdyn_core::matrix::{char_poly, classify_graph, determinant, entropy};
use symdyn_core::oracle::{
    search_block_maps, verify_conjugacy, verify_eventual_conjugacy_map, BlockMap, EdgeShift, SearchLimits,
    SearchOutcome,
};
use symdyn_core::sofic::{fischer_cover, is_intrinsically_synchronizing, krieger_cover, LabelledGraph};
use symdyn_core::williams::{decide_one_sided_conjugacy, total_amalgamation};
use symdyn_core::witnesses::{search_balanced, search_elementary, SearchBounds, Witness};
use symdyn_core::zlinalg::{bowen_franks, det_id_minus, unit_class};
use symdyn_core::{Error, IntMatrix, Verdict};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

/// Decision procedures for shifts of finite type and sofic shifts.
///
/// Matrix arguments are file paths, inline text (JSON or the `R C` header
/// format), or `ex:NAME` for a built-in example. `--example NAME` fills the
/// leading matrix arguments in order.
#[derive(Parser, Debug)]
#[command(name = "symdyn", version)]
struct Cli {
    /// Print JSON (the default and only format).
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing; report through the exit code only.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Built-in example used as the next matrix argument.
    #[arg(long = "example", global = true, value_name = "NAME")]
    examples: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total amalgamation with its merge trace.
    Amalgamate(Inputs),
    /// One-sided conjugacy via total amalgamations.
    Conjugate(Inputs),
    /// Conjugacy of all sufficiently high powers.
    EventualPowers {
        #[command(flatten)]
        inputs: Inputs,
        /// Extra powers to cross-check beyond the stabilization index.
        #[arg(long, default_value_t = 3)]
        powers: u32,
    },
    /// Check a witness file (`sse`, `se` or `balanced`) against two matrices.
    Verify {
        #[command(flatten)]
        inputs: Inputs,
        /// Witness JSON file, or `ex:NAME` for a built-in witness with its pair.
        #[arg(long)]
        witness: String,
    },
    /// Bounded witness search; never answers no.
    Search {
        kind: SearchKind,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 3)]
        mmax: usize,
        #[arg(long, default_value_t = 2)]
        emax: u64,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
    /// Flow equivalence of irreducible matrices.
    Flow(Inputs),
    /// Continuous orbit equivalence of irreducible matrices.
    Coe(Inputs),
    /// Structural data and invariants of one matrix.
    Invariants(Inputs),
    /// Krieger cover of a labelled graph.
    SoficKrieger(SoficArgs),
    /// Fischer cover of an irreducible labelled graph.
    SoficFischer(SoficArgs),
    /// Brute-force checks with sliding block codes.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Topological entropy of the edge shift.
    Entropy(Inputs),
}

#[derive(Args, Debug)]
struct Inputs {
    matrices: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SearchKind {
    Elementary,
    Balanced,
}

#[derive(Args, Debug)]
struct SoficArgs {
    /// Labelled graph JSON file.
    graph: Option<String>,
    /// `even-shift`, `odd-shift`, `golden-mean` or `full:N`.
    #[arg(long)]
    preset: Option<String>,
    /// Also test whether this word is intrinsically synchronizing.
    #[arg(long)]
    sync: Option<String>,
    /// Length bound for the synchronizing counterexample search.
    #[arg(long, default_value_t = 12)]
    bound: usize,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Exhaustive search for a memoryless block-map conjugacy.
    Conjugacy {
        #[command(flatten)]
        inputs: Inputs,
        /// Largest window tried.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Word length up to which candidates are verified.
        #[arg(long = "L", default_value_t = 6)]
        l: usize,
        #[arg(long, default_value_t = 8)]
        max_alphabet: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Verify a block map, or with `--delay`/`--inverse` an eventual conjugacy.
    Verify(MapArgs),
    /// Apply a block map to a word.
    Apply {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        word: String,
    },
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Built-in block map (`ex4.1`, `ex5.2`); replaces the matrices and map files.
    #[arg(long)]
    fixture: Option<String>,
    #[command(flatten)]
    inputs: Inputs,
    /// Block map JSON file.
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    inverse: Option<String>,
    #[arg(long)]
    delay: Option<usize>,
    #[arg(long = "L", default_value_t = 6)]
    l: usize,
}

/// What a subcommand produced: the JSON document and its exit code.
struct CommandResult {
    output: Value,
    exit: u8,
}

impl CommandResult {
    fn report(output: Value) -> Self {
        CommandResult { output, exit: 0 }
    }

    fn verdict<C: Serialize, O: Serialize>(v: &Verdict<C, O>) -> Self {
        CommandResult { output: v.to_json(), exit: v.kind().exit_code() as u8 }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        if let Value::Object(map) = &mut self.output {
            map.insert(key.into(), value);
        }
        self
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFixture(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type Outcome = Result<CommandResult, Failure>;

struct Context {
    examples: Vec<String>,
}

impl Context {
    fn text(arg: &str) -> Result<String, Failure> {
        let inline = arg.contains('\n') || matches!(arg.trim_start().chars().next(), Some('{' | '['));
        if inline {
            return Ok(arg.to_string());
        }
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Data(format!("{arg}: {e}")))
    }

    fn matrix(arg: &str) -> Result<IntMatrix, Failure> {
        if let Some(name) = arg.strip_prefix("ex:") {
            return Ok(fixtures::matrix(name)?);
        }
        parse_matrix(&Self::text(arg)?, MatrixRole::Adjacency).map_err(|e| Failure::Data(format!("{arg}: {e}")))
    }

    fn matrices(&self, inputs: &Inputs, count: usize) -> Result<Vec<IntMatrix>, Failure> {
        let args: Vec<String> =
            self.examples.iter().map(|e| format!("ex:{e}")).chain(inputs.matrices.iter().cloned()).collect();
        if args.len() != count {
            return Err(Failure::Usage(format!("expected {count} matrix argument(s), got {}", args.len())));
        }
        args.iter().map(|a| Self::matrix(a)).collect()
    }

    fn pair(&self, inputs: &Inputs) -> Result<(IntMatrix, IntMatrix), Failure> {
        let mut ms = self.matrices(inputs, 2)?;
        let b = ms.pop().expect("two matrices");
        Ok((ms.pop().expect("two matrices"), b))
    }

    fn one(&self, inputs: &Inputs) -> Result<IntMatrix, Failure> {
        Ok(self.matrices(inputs, 1)?.pop().expect("one matrix"))
    }
}

fn run(cli: Cli) -> Outcome {
    let cx = Context { examples: cli.examples };
    match cli.command {
        Command::Amalgamate(inputs) => {
            let a = cx.one(&inputs)?;
            Ok(CommandResult::report(serde_json::to_value(total_amalgamation(&a)?).expect("serializable")))
        }
        Command::Conjugate(inputs) => {
            let (a, b) = cx.pair(&inputs)?;
            Ok(CommandResult::verdict(&decide_one_sided_conjugacy(&a, &b)?))
        }
        Command::EventualPowers { inputs, powers } => {
            let (a, b) = cx.pair(&inputs)?;
            Ok(CommandResult::verdict(&decide_conjugate_higher_powers(&a, &b, EventualOptions { powers })?))
        }
        Command::Verify { inputs, witness } => verify(&cx, &inputs, &witness),
        Command::Search { kind, inputs, mmax, emax, budget } => {
            let (a, b) = cx.pair(&inputs)?;
            let bounds = SearchBounds { m_max: mmax, e_max: emax, node_budget: budget };
            Ok(match kind {
                SearchKind::Elementary => {
                    let v = search_elementary(&a, &b, bounds)?
                        .map_yes(|h| json!({ "witness": Witness::Sse(h.witness).to_json(), "reversed": h.reversed }));
                    CommandResult::verdict(&v)
                }
                SearchKind::Balanced => {
                    let v = search_balanced(&a, &b, bounds)?;
                    CommandResult::verdict(&v.map_yes(|w| Witness::Balanced(w).to_json()))
                }
            })
        }
        Command::Flow(inputs) => {
            let (a, b) = cx.pair(&inputs)?;
            Ok(CommandResult::verdict(&flow_equivalent(&a, &b)?))
        }
        Command::Coe(inputs) => {
            let (a, b) = cx.pair(&inputs)?;
            Ok(CommandResult::verdict(&continuous_orbit_equivalent(&a, &b)?))
        }
        Command::Invariants(inputs) => invariants(&cx.one(&inputs)?),
        Command::Entropy(inputs) => {
            let a = cx.one(&inputs)?;
            Ok(CommandResult::report(serde_json::to_value(entropy(&a)?).expect("serializable")))
        }
        Command::SoficKrieger(args) => sofic(&args, false),
        Command::SoficFischer(args) => sofic(&args, true),
        Command::Oracle { command } => oracle(&cx, command),
    }
}

fn verify(cx: &Context, inputs: &Inputs, witness: &str) -> Outcome {
    let (a, b, w) = match witness.strip_prefix("ex:") {
        Some(name) => {
            let f = fixtures::witness(name)?;
            if !inputs.matrices.is_empty() || !cx.examples.is_empty() {
                return Err(Failure::Usage("a built-in witness carries its own matrices".into()));
            }
            (f.a, f.b, f.witness)
        }
        None => {
            let (a, b) = cx.pair(inputs)?;
            (a, b, parse_witness(&Context::text(witness)?)?)
        }
    };
    Ok(CommandResult::verdict(&w.verify(&a, &b)?).with("witness", w.to_json()))
}

fn invariants(a: &IntMatrix) -> Outcome {
    let class = classify_graph(a)?;
    let poly = char_poly(a)?;
    let (det, sign) = det_id_minus(a)?;
    let index = stabilization_index(a)?;
    let unit = unit_class(a)?;
    Ok(CommandResult::report(json!({
        "matrix": matrix_to_value(a),
        "class": class,
        "char_poly": bigints_to_value(poly.coeffs()),
        "det": big_to_value(&determinant(a)?),
        "det_id_minus": big_to_value(&det),
        "det_sign": sign,
        "bowen_franks": bowen_franks(a)?.to_string(),
        "unit_class": unit,
        "entropy": entropy(a)?,
        "stabilization_index": index,
        "total_amalgamation": matrix_to_value(&total_amalgamation(a)?.final_matrix),
    })))
}

fn sofic(args: &SoficArgs, fischer: bool) -> Outcome {
    let g = match (&args.preset, &args.graph) {
        (Some(p), None) => LabelledGraph::preset(p)?,
        (None, Some(path)) => parse_labelled_graph(&Context::text(path)?)?,
        _ => return Err(Failure::Usage("give exactly one of a graph file or --preset".into())),
    };
    let cover = if fischer { fischer_cover(&g)? } else { krieger_cover(&g)? };
    let mut out = json!({ "cover": cover.to_json() });
    let Some(word) = &args.sync else {
        return Ok(CommandResult::report(out));
    };
    let w = g.parse_word(word)?;
    let v = is_intrinsically_synchronizing(&g, &w, args.bound)?;
    out["sync"] = v.to_json();
    Ok(CommandResult { output: out, exit: v.kind().exit_code() as u8 })
}

struct LoadedMap {
    source: EdgeShift,
    target: EdgeShift,
    map: BlockMap,
    inverse: Option<BlockMap>,
    delay: Option<usize>,
}

fn load_map(cx: &Context, args: &MapArgs) -> Result<LoadedMap, Failure> {
    if let Some(name) = &args.fixture {
        let f = fixtures::block_map(name)?;
        return Ok(LoadedMap {
            source: f.source,
            target: f.target,
            map: f.map,
            inverse: if args.delay.is_some() || f.delay > 0 { f.inverse } else { None },
            delay: args.delay.or((f.delay > 0).then_some(f.delay)),
        });
    }
    let (a, b) = cx.pair(&args.inputs)?;
    let (source, target) = (EdgeShift::new(&a)?, EdgeShift::new(&b)?);
    let path = args.map.as_ref().ok_or_else(|| Failure::Usage("--map or --fixture is required".into()))?;
    let map = parse_block_map(&Context::text(path)?, &source, &target)?;
    let inverse = match &args.inverse {
        Some(p) => Some(parse_block_map(&Context::text(p)?, &target, &source)?),
        None => None,
    };
    Ok(LoadedMap { source, target, map, inverse, delay: args.delay })
}

fn oracle(cx: &Context, command: OracleCommand) -> Outcome {
    match command {
        OracleCommand::Conjugacy { inputs, k, l, max_alphabet, budget } => {
            let (a, b) = cx.pair(&inputs)?;
            let (src, tgt) = (EdgeShift::new(&a)?, EdgeShift::new(&b)?);
            let limits = SearchLimits { max_window: k, max_alphabet, node_budget: budget };
            let (v, map): (Verdict<Value, Value>, _) = match search_block_maps(&src, &tgt, limits, l)? {
                SearchOutcome::Found(m) => (Verdict::Yes(json!({ "bound": l, "window": m.window })), Some(m)),
                SearchOutcome::NoneWithinWindow(k) => {
                    (Verdict::No(json!({ "reason": "no_block_map_within_window", "max_window": k, "bound": l })), None)
                }
                SearchOutcome::Exhausted(why) => (Verdict::Unknown(why), None),
            };
            let mut r = CommandResult::verdict(&v);
            if let Some(m) = map {
                r = r.with("map", m.to_json(&src, &tgt));
            }
            Ok(r)
        }
        OracleCommand::Verify(args) => {
            let m = load_map(cx, &args)?;
            let v = match (m.delay, &m.inverse) {
                (None, _) => verify_conjugacy(&m.map, &m.source, &m.target, args.l)?,
                (Some(d), Some(inv)) => verify_eventual_conjugacy_map(&m.map, inv, d, &m.source, &m.target, args.l)?,
                (Some(_), None) => return Err(Failure::Usage("--delay needs --inverse".into())),
            };
            Ok(CommandResult::verdict(&v))
        }
        OracleCommand::Apply { map, word } => {
            let m = load_map(cx, &map)?;
            let w = m.source.parse_word(&word)?;
            let image = m.map.apply(&m.source, &w)?;
            Ok(CommandResult::report(json!({
                "input": m.source.format_word(&w),
                "image": m.target.format_word(&image),
                "length": image.len(),
            })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let quiet = cli.quiet;
    match run(cli) {
        Ok(r) => {
            if !quiet {
                // a closed pipe is not an error worth reporting
                let _ =
                    writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&r.output).expect("serializable"));
            }
            ExitCode::from(r.exit)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(EXIT_DATA)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symdyn_core::VerdictKind;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("symdyn").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes_follow_verdicts() {
        let yes = CommandResult::verdict(&Verdict::<(), ()>::Yes(()));
        let no = CommandResult::verdict(&Verdict::<(), ()>::No(()));
        let unknown = CommandResult::verdict(&Verdict::<(), ()>::Unknown("bound".into()));
        assert_eq!((yes.exit, no.exit, unknown.exit), (0, 1, 2));
        assert_eq!(VerdictKind::Unknown.exit_code(), 2);
    }

    #[test]
    fn examples_fill_matrix_slots() {
        let cli = parse(&["conjugate", "--example", "ex4.1-A", "ex:ex4.1-C"]).unwrap();
        let r = run(cli).unwrap();
        assert_eq!(r.exit, 0);
        let cli = parse(&["conjugate", "--example", "ex4.1-A"]).unwrap();
        assert!(matches!(run(cli), Err(Failure::Usage(_))));
    }

    #[test]
    fn unknown_subcommand_is_a_parse_error() {
        assert!(parse(&["frobnicate"]).is_err());
    }
}
