use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dualgraph_core::classify::{self, SandwichVerdict};
use dualgraph_core::io::{self as doc, GraphDocument, WitnessDocument};
use dualgraph_core::modification::{blowdown, Center, ModStep};
use dualgraph_core::selfsim::{self, SelfSimVerdict, DEFAULT_K_MAX};
use dualgraph_core::{corpus, named, Embedding, VertexId, WeightedGraph};

#[derive(Parser)]
#[command(name = "dualgraph", version, about = "Weighted dual graphs: modifications, regularity, sandwiched and self-similar tests")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Graph document, or `-` for stdin.
    file: String,
}

#[derive(Args)]
struct Output {
    /// Write the emitted document here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph document against the graph invariants.
    Validate(Input),
    /// Apply one simple modification.
    Blowup {
        #[arg(long, conflicts_with = "edge", required_unless_present = "edge")]
        vertex: Option<VertexId>,
        /// Edge as `U,W`.
        #[arg(long, value_parser = parse_pair)]
        edge: Option<(VertexId, VertexId)>,
        /// Id of the created vertex; defaults to the next free id.
        #[arg(long)]
        new_id: Option<VertexId>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Contract a (0,1) vertex.
    Blowdown {
        #[arg(long)]
        vertex: VertexId,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Print the intersection matrix.
    Matrix(Input),
    /// Is the intersection matrix negative definite?
    Negdef(Input),
    /// Exact determinant of the intersection matrix.
    Det(Input),
    IsRegular(Input),
    IsSandwiched {
        /// Largest number of leaves tried; defaults to twice the weight sum.
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    IsSelfSimilar {
        #[arg(long)]
        budget: Option<usize>,
        /// Vertex to plant the copy at; defaults to the smallest id.
        #[arg(long)]
        at: Option<VertexId>,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Re-check a witness document from scratch.
    VerifyWitness(Input),
    /// Extract a regular supergraph from a self-similarity witness.
    Extract {
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Run the sandwiched/self-similar round trip on a seeded random corpus.
    Roundtrip {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 16)]
        budget: usize,
    },
    /// Print a graph from the built-in library.
    Named { name: String },
    /// Graphviz text for a graph.
    ExportDot(Input),
}

fn parse_pair(s: &str) -> Result<(VertexId, VertexId), String> {
    let (a, b) = s.split_once(',').ok_or("expected U,W")?;
    let id = |x: &str| x.trim().parse::<VertexId>().map_err(|e| format!("{x:?}: {e}"));
    Ok((id(a)?, id(b)?))
}

enum Failure {
    /// Verdict "no" or a violated precondition.
    No(String),
    Usage(String),
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    json: bool,
}

impl Ctx {
    fn say(&self, human: impl AsRef<str>, machine: Value) {
        if self.json {
            println!("{machine}");
        } else {
            println!("{}", human.as_ref());
        }
    }

    /// Prints a document, to `out` when given, otherwise to stdout.
    fn emit(&self, text: &str, out: &Output) -> Result<(), Failure> {
        match &out.output {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Verdict line followed by an optional document. With `--json` the
    /// document is nested under `document` unless it goes to a file.
    fn verdict(&self, mut machine: Value, human: &str, document: Option<&str>, out: &Output) -> Result<(), Failure> {
        if self.json {
            if let (Some(d), None) = (document, &out.output) {
                machine["document"] = serde_json::from_str(d).expect("documents are JSON");
            }
            println!("{machine}");
            if let (Some(d), Some(_)) = (document, &out.output) {
                self.emit(d, out)?;
            }
            return Ok(());
        }
        println!("{human}");
        if let Some(d) = document {
            self.emit(d, out)?;
        }
        Ok(())
    }
}

fn read_text(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if file == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{file}: {e}")))?;
    }
    Ok(text)
}

fn read_graph(input: &Input) -> Result<WeightedGraph, Failure> {
    doc::parse(&read_text(&input.file)?).map_err(|e| Failure::Usage(format!("{}: {e}", input.file)))
}

fn read_witness(input: &Input) -> Result<WitnessDocument, Failure> {
    WitnessDocument::parse(&read_text(&input.file)?).map_err(|e| Failure::Usage(format!("{}: {e}", input.file)))
}

fn pairs_json(e: &Embedding) -> Value {
    json!(e.pairs().into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { json: cli.json };
    match cli.command {
        Command::Validate(input) => {
            let text = read_text(&input.file)?;
            let parsed = GraphDocument::parse_raw(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            match parsed.graph() {
                Ok(g) => {
                    ctx.say(
                        format!("ok: {} vertices, {} edges", g.vertex_count(), g.edge_count()),
                        json!({"valid": true, "vertices": g.vertex_count(), "edges": g.edge_count()}),
                    );
                    Ok(true)
                }
                Err(e) => {
                    ctx.say(format!("invalid: {e}"), json!({"valid": false, "error": e.to_string()}));
                    Ok(false)
                }
            }
        }
        Command::Blowup { vertex, edge, new_id, input, out } => {
            let g = read_graph(&input)?;
            let center = match (vertex, edge) {
                (Some(v), None) => Center::Vertex(v),
                (None, Some((a, b))) => Center::edge(a, b),
                _ => return Err(Failure::Usage("give exactly one of --vertex and --edge".into())),
            };
            let step = ModStep { center, new_id: new_id.unwrap_or_else(|| g.next_id()) };
            let h = step.apply(&g).map_err(|e| Failure::No(format!("blowup {center} rejected: {e}")))?;
            ctx.emit(&doc::serialize(&h), &out)?;
            Ok(true)
        }
        Command::Blowdown { vertex, input, out } => {
            let g = read_graph(&input)?;
            match blowdown(&g, vertex) {
                Ok((h, _)) => {
                    ctx.emit(&doc::serialize(&h), &out)?;
                    Ok(true)
                }
                Err(e) => {
                    ctx.say(format!("blowdown rejected: {e}"), json!({"ok": false, "error": e.to_string()}));
                    Ok(false)
                }
            }
        }
        Command::Matrix(input) => {
            let m = read_graph(&input)?.intersection_matrix();
            let rows = m.matrix().rows();
            let human = std::iter::once(format!("order: {:?}", m.ordering()))
                .chain(rows.iter().map(|r| r.iter().map(|x| format!("{x:>4}")).collect::<String>()))
                .collect::<Vec<_>>()
                .join("\n");
            ctx.say(human, json!({"ordering": m.ordering(), "matrix": rows}));
            Ok(true)
        }
        Command::Negdef(input) => {
            let yes = read_graph(&input)?.intersection_matrix().is_negative_definite();
            ctx.say(if yes { "yes" } else { "no" }, json!({"negative_definite": yes}));
            Ok(yes)
        }
        Command::Det(input) => {
            let d = read_graph(&input)?.intersection_matrix().determinant();
            ctx.say(d.to_string(), json!({"determinant": d.to_string()}));
            Ok(true)
        }
        Command::IsRegular(input) => {
            let g = read_graph(&input)?;
            match classify::is_regular(&g) {
                Ok(w) => {
                    ctx.say(
                        format!("yes\nblowdown order: {:?}", w.blowdown_order),
                        json!({"verdict": "yes", "blowdown_order": w.blowdown_order}),
                    );
                    Ok(true)
                }
                Err(reason) => {
                    ctx.say(format!("no: {reason}"), json!({"verdict": "no", "reason": reason.to_string()}));
                    Ok(false)
                }
            }
        }
        Command::IsSandwiched { budget, input, out } => {
            let g = read_graph(&input)?;
            let budget = budget.unwrap_or_else(|| classify::default_budget(&g));
            let verdict = classify::is_sandwiched(&g, budget).map_err(|e| Failure::Usage(e.to_string()))?;
            match verdict {
                SandwichVerdict::Sandwiched(w) => {
                    let text = WitnessDocument::sandwich(&g, &w).to_text();
                    let leaves: Vec<_> = w.leaves.iter().filter(|(_, &n)| n > 0).map(|(&v, &n)| [v as usize, n]).collect();
                    ctx.verdict(
                        json!({"verdict": "yes", "leaves": leaves}),
                        &format!("yes: {} leaves {:?}", w.leaf_count(), leaves),
                        Some(&text),
                        &out,
                    )?;
                    Ok(true)
                }
                SandwichVerdict::NoWithinBudget { budget } => {
                    ctx.verdict(
                        json!({"verdict": "no-within-budget", "budget": budget}),
                        &format!("no-within-budget: {budget}"),
                        None,
                        &out,
                    )?;
                    Ok(false)
                }
                SandwichVerdict::DefinitelyNot(reason) => {
                    ctx.verdict(
                        json!({"verdict": "definitely-not", "reason": reason.to_string()}),
                        &format!("definitely-not: {reason}"),
                        None,
                        &out,
                    )?;
                    Ok(false)
                }
            }
        }
        Command::IsSelfSimilar { budget, at, input, out } => {
            let g = read_graph(&input)?;
            let budget = budget.unwrap_or_else(|| classify::default_budget(&g));
            let verdict = selfsim::is_self_similar(&g, budget, at).map_err(|e| Failure::Usage(e.to_string()))?;
            match verdict {
                SelfSimVerdict::SelfSimilar { witness, .. } => {
                    let text = WitnessDocument::self_similar(&witness).to_text();
                    ctx.verdict(
                        json!({"verdict": "yes", "steps": witness.seq.len()}),
                        &format!("yes: {} steps", witness.seq.len()),
                        Some(&text),
                        &out,
                    )?;
                    Ok(true)
                }
                SelfSimVerdict::NoWithinBudget { budget } => {
                    ctx.verdict(
                        json!({"verdict": "no-within-budget", "budget": budget}),
                        &format!("no-within-budget: {budget}"),
                        None,
                        &out,
                    )?;
                    Ok(false)
                }
                SelfSimVerdict::DefinitelyNot(reason) => {
                    ctx.verdict(
                        json!({"verdict": "definitely-not", "reason": reason.to_string()}),
                        &format!("definitely-not: {reason}"),
                        None,
                        &out,
                    )?;
                    Ok(false)
                }
            }
        }
        Command::VerifyWitness(input) => {
            let w = read_witness(&input)?;
            let kind = w.kind();
            let result = verify_document(&w);
            match &result {
                Ok(()) => ctx.say(format!("ok: {kind}"), json!({"kind": kind, "ok": true})),
                Err(e) => ctx.say(format!("violation: {e}"), json!({"kind": kind, "ok": false, "violation": e})),
            }
            Ok(result.is_ok())
        }
        Command::Extract { k_max, input, out } => {
            let w = read_witness(&input)?.to_self_similar().map_err(|e| Failure::Usage(e.to_string()))?;
            let ex = selfsim::extract_sandwich(&w, k_max).map_err(|e| Failure::No(e.to_string()))?;
            let text = WitnessDocument::extraction(w.base(), &ex).to_text();
            ctx.verdict(
                json!({"k": ex.k, "vertices": ex.regular.vertex_count(), "embedding": pairs_json(&ex.embedding)}),
                &format!("extracted at k = {}: {} vertices", ex.k, ex.regular.vertex_count()),
                Some(&text),
                &out,
            )?;
            Ok(true)
        }
        Command::Roundtrip { seed, count, budget } => {
            let mut rng = corpus::rng(seed);
            let mut failures = Vec::new();
            for i in 0..count {
                let g = corpus::random_sandwiched(&mut rng);
                if let Err(e) = corpus::roundtrip_case(&g, budget, DEFAULT_K_MAX) {
                    failures.push(json!({"case": i, "error": e, "graph": serde_json::from_str::<Value>(&doc::serialize(&g)).expect("documents are JSON")}));
                }
            }
            let passed = count - failures.len();
            let human = std::iter::once(format!("passed {passed}/{count}"))
                .chain(failures.iter().map(|f| format!("case {}: {}", f["case"], f["error"].as_str().unwrap_or_default())))
                .collect::<Vec<_>>()
                .join("\n");
            ctx.say(human, json!({"seed": seed, "count": count, "passed": passed, "failures": failures}));
            Ok(failures.is_empty())
        }
        Command::Named { name } => {
            let g = named::by_name(&name).ok_or_else(|| Failure::Usage(format!("unknown graph name {name:?}")))?;
            print!("{}", doc::serialize_named(&g, &name));
            Ok(true)
        }
        Command::ExportDot(input) => {
            print!("{}", dot(&read_graph(&input)?));
            Ok(true)
        }
    }
}

fn verify_document(w: &WitnessDocument) -> Result<(), String> {
    match w {
        WitnessDocument::SelfSimilar { .. } => {
            let w = w.to_self_similar().map_err(|e| e.to_string())?;
            selfsim::verify_witness(&w).map_err(|e| e.to_string())
        }
        WitnessDocument::Sandwich { .. } => {
            let (input, w) = w.to_sandwich().map_err(|e| e.to_string())?;
            w.verify(&input)
        }
        WitnessDocument::Extraction { base, regular, embedding, .. } => {
            let base = base.graph().map_err(|e| e.to_string())?;
            let regular = regular.graph().map_err(|e| e.to_string())?;
            classify::is_regular(&regular).map_err(|e| format!("extracted graph is not regular: {e}"))?;
            let map = embedding.iter().map(|&[a, b]| (a, b)).collect();
            Embedding::new(base, regular, map).map(|_| ()).map_err(|e| e.to_string())
        }
    }
}

fn dot(g: &WeightedGraph) -> String {
    let mut s = String::from("graph G {\n");
    for (v, l) in g.vertices() {
        s.push_str(&format!("  {v} [label=\"{v}:{l}\"];\n"));
    }
    for (a, b) in g.edges() {
        s.push_str(&format!("  {a} -- {b};\n"));
    }
    s.push_str("}\n");
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::No(msg)) => {
            eprintln!("{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
