//! Command-line front end for the bound engine: verify and build edge
//! colorings, close fact databases under derivation rules, and render the
//! resulting tables.
//!
//! Exit codes: 0 on success, 2 when the inputs parse but the check itself
//! fails (invalid witness, contradiction, underivable bound), 1 for usage,
//! I/O, and syntax errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ramsey::coloring::{verify_witness, EdgeColoring};
use ramsey::construct::{abbott_product, builtin_targets, builtin_witness, diagonal_product, schur_coloring, BUILTIN_NAMES};
use ramsey::engine::{check_dc, derive_closure, explain, ratio_report, AssertKind, BoundKind, Budget, DcStatus, EngineError, KnowledgeBase, RuleId, RuleSet, Source};
use ramsey::formats::{assert_facts, parse_facts_file, parse_graph_literal, parse_partition_file, parse_witness_file, render_table_r3, render_witness, FactLine};
use ramsey::params::Params;

#[derive(Parser)]
#[command(name = "rw", version, about = "Edge-coloring witnesses and bound derivation for clique-avoidance numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a coloring file against per-color clique targets
    Verify {
        /// Coloring file (`witness v1` or `cyclic v1`)
        witness: PathBuf,
        /// Positional clique targets, one per color: `k1,k2,...`
        #[arg(long, value_name = "k1,k2,...")]
        params: String,
    },
    /// Write one of the named example colorings to a file
    Builtin {
        /// One of: c5, wagner8, cyc13, paley17, gf16
        name: String,
        /// Output path for the rendered coloring
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Combine colorings (or decode a partition) into a new coloring file
    Construct {
        #[command(subcommand)]
        kind: ConstructCmd,
    },
    /// Load fact files, close them under derivation rules, print the results
    Derive {
        #[command(flatten)]
        closure: ClosureArgs,
        /// Report only this parameter list instead of every fact
        #[arg(long, value_name = "k1,k2,...")]
        target: Option<String>,
    },
    /// Print the derivation tree behind one recorded bound
    Explain {
        #[command(flatten)]
        closure: ClosureArgs,
        /// Parameter list to explain: `k1,k2,...`
        #[arg(long, value_name = "k1,k2,...")]
        target: String,
        /// Which side of the bound to walk
        #[arg(long, value_parser = ["lower", "upper"])]
        kind: String,
    },
    /// Render bound tables from recorded facts
    #[command(subcommand_value_name = "NAME")]
    Table {
        #[command(subcommand)]
        which: TableCmd,
    },
    /// Judge diagonal-move-adjacent parameter pairs against recorded bounds
    CheckDc {
        /// Fact files to load (repeatable)
        #[arg(long, required = true, value_name = "FILE")]
        facts: Vec<PathBuf>,
        /// File of explicit pairs, one `R(...) R(...)` per line (moved first);
        /// default: every adjacent pair recorded on both sides
        #[arg(long, value_name = "FILE")]
        pairs: Option<PathBuf>,
    },
    /// Root-growth table `(bound - 1)^(1/r)` for same-target bounds
    Ratios {
        /// Fact files to load (repeatable)
        #[arg(long, required = true, value_name = "FILE")]
        facts: Vec<PathBuf>,
        /// Common clique target of the diagonal entries
        #[arg(long)]
        k: u32,
        /// Largest color count to include
        #[arg(long)]
        max_r: usize,
    },
    /// Independence numbers of a graph under strong powers
    Capacity {
        /// Graph literal: `cyclic:<m>:<d1,d2,...>` or `complete:<n>`
        #[arg(long, value_name = "LITERAL")]
        graph: String,
        /// Largest strong power to search exhaustively
        #[arg(long)]
        power: usize,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Product on disjoint palettes: colors add, vertex counts multiply
    Abbott {
        w1: PathBuf,
        w2: PathBuf,
        /// Output path for the rendered coloring
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Product on a shared palette: per-color clique caps multiply
    Diag {
        w1: PathBuf,
        w2: PathBuf,
        /// Output path for the rendered coloring
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Decode a sum-free partition file into a triangle-avoiding coloring
    Schur {
        partition: PathBuf,
        /// Output path for the rendered coloring
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// Diagonal triangle-avoidance bounds, one row per color count
    R3 {
        /// Fact files to load (repeatable)
        #[arg(long, required = true, value_name = "FILE")]
        facts: Vec<PathBuf>,
        /// Last row to render
        #[arg(long)]
        max_r: usize,
    },
}

/// Flags shared by every command that runs the closure.
#[derive(Args)]
struct ClosureArgs {
    /// Fact files to load before closing (repeatable)
    #[arg(long, required = true, value_name = "FILE")]
    facts: Vec<PathBuf>,
    /// Adopt the diagonal-move assumption, enabling the `dc` rule
    #[arg(long)]
    assume_dc: bool,
    /// Treat assumed moves as strict; implies --assume-dc
    #[arg(long)]
    strict_dc: bool,
    /// Largest color count the closure may create
    #[arg(long, value_name = "N", default_value_t = 10)]
    max_r: usize,
    /// Largest clique target the closure may create
    #[arg(long, value_name = "N", default_value_t = 17)]
    max_k: u32,
    /// Comma-separated rule names to run instead of the default set
    /// (base,power,2r,r3cf,befs,diagprod, plus dc when assumed);
    /// es, mono, and abbott are opt-in because they enumerate aggressively
    #[arg(long, value_name = "r1,r2,...")]
    rules: Option<String>,
}

enum Outcome {
    Ok,
    /// Inputs were well-formed but the check failed; details already printed.
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version surface as errors; they are successes.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.cmd {
        Cmd::Verify { witness, params } => cmd_verify(&witness, &params),
        Cmd::Builtin { name, out } => cmd_builtin(&name, &out),
        Cmd::Construct { kind } => cmd_construct(kind),
        Cmd::Derive { closure, target } => cmd_derive(closure, target.as_deref()),
        Cmd::Explain { closure, target, kind } => cmd_explain(closure, &target, &kind),
        Cmd::Table { which: TableCmd::R3 { facts, max_r } } => cmd_table_r3(&facts, max_r),
        Cmd::CheckDc { facts, pairs } => cmd_check_dc(&facts, pairs.as_deref()),
        Cmd::Ratios { facts, k, max_r } => cmd_ratios(&facts, k, max_r),
        Cmd::Capacity { graph, power } => cmd_capacity(&graph, power),
    }
}

fn read_witness(path: &Path) -> Result<EdgeColoring> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = parse_witness_file(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(c)
}

fn load_facts(kb: &mut KnowledgeBase, paths: &[PathBuf]) -> Result<()> {
    for path in paths {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let lines = parse_facts_file(&text).with_context(|| format!("parsing {}", path.display()))?;
        assert_facts(kb, &lines);
    }
    Ok(())
}

fn write_coloring(path: &Path, c: &EdgeColoring) -> Result<()> {
    std::fs::write(path, render_witness(c)).with_context(|| format!("writing {}", path.display()))
}

/// Positional per-color targets; unlike [`Params`], order is preserved.
fn parse_targets(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<u32>().with_context(|| format!("bad clique target {tok:?}"))
        })
        .collect()
}

fn parse_params(s: &str) -> Result<Params> {
    Params::from_str(s).with_context(|| format!("bad parameter list {s:?}"))
}

fn cmd_verify(path: &Path, params: &str) -> Result<Outcome> {
    let c = read_witness(path)?;
    let targets = parse_targets(params)?;
    let report = verify_witness(&c, &targets)?;
    if report.valid {
        println!("valid witness on {} vertices, {} colors", c.n(), c.r());
        if let Some(implied) = &report.implied {
            println!("{implied}");
        }
        Ok(Outcome::Ok)
    } else {
        let clique = report.counterexample.expect("invalid report carries a counterexample");
        println!("not a witness: {clique}");
        Ok(Outcome::Failed)
    }
}

fn cmd_builtin(name: &str, out: &Path) -> Result<Outcome> {
    let c = builtin_witness(name).with_context(|| format!("known names: {}", BUILTIN_NAMES.join(", ")))?;
    let targets = builtin_targets(name)?;
    write_coloring(out, &c)?;
    let shown: Vec<String> = targets.iter().map(u32::to_string).collect();
    println!("wrote {name} ({} vertices, {} colors, targets {}) to {}", c.n(), c.r(), shown.join(","), out.display());
    Ok(Outcome::Ok)
}

fn cmd_construct(kind: ConstructCmd) -> Result<Outcome> {
    match kind {
        ConstructCmd::Abbott { w1, w2, out } => {
            let (a, b) = (read_witness(&w1)?, read_witness(&w2)?);
            let c = abbott_product(&a, &b);
            write_coloring(&out, &c)?;
            println!("palette-disjoint product: {} x {} -> {} vertices, {} colors", a.n(), b.n(), c.n(), c.r());
            Ok(Outcome::Ok)
        }
        ConstructCmd::Diag { w1, w2, out } => {
            let (a, b) = (read_witness(&w1)?, read_witness(&w2)?);
            let c = match diagonal_product(&a, &b) {
                Ok(c) => c,
                Err(e) => {
                    println!("cannot combine: {e}");
                    return Ok(Outcome::Failed);
                }
            };
            write_coloring(&out, &c)?;
            println!("shared-palette product: {} x {} -> {} vertices, {} colors", a.n(), b.n(), c.n(), c.r());
            Ok(Outcome::Ok)
        }
        ConstructCmd::Schur { partition, out } => {
            let text = std::fs::read_to_string(&partition).with_context(|| format!("reading {}", partition.display()))?;
            let p = parse_partition_file(&text).with_context(|| format!("parsing {}", partition.display()))?;
            let c = match schur_coloring(&p) {
                Ok(c) => c,
                Err(e) => {
                    println!("not sum-free: {e}");
                    return Ok(Outcome::Failed);
                }
            };
            write_coloring(&out, &c)?;
            println!("sum-free partition coloring: {} vertices, {} colors", c.n(), c.r());
            Ok(Outcome::Ok)
        }
    }
}

fn closure_rules(args: &ClosureArgs) -> Result<RuleSet> {
    let assumed = args.assume_dc || args.strict_dc;
    let rules = match &args.rules {
        Some(list) => {
            let mut ids = Vec::new();
            for tok in list.split(',') {
                let tok = tok.trim();
                ids.push(RuleId::from_str(tok).map_err(anyhow::Error::msg)?);
            }
            ids
        }
        None => {
            let mut ids = vec![RuleId::Base, RuleId::Power, RuleId::TwoR, RuleId::R3cf, RuleId::Befs, RuleId::DiagProd];
            if assumed {
                ids.push(RuleId::Dc);
            }
            ids
        }
    };
    Ok(RuleSet::new(&rules))
}

/// Load facts, apply the flags, and run the closure to its fixpoint.
fn closed_kb(args: &ClosureArgs) -> Result<(KnowledgeBase, ramsey::engine::ClosureStats)> {
    let mut kb = KnowledgeBase::new();
    load_facts(&mut kb, &args.facts)?;
    kb.assumptions.dc = args.assume_dc || args.strict_dc;
    kb.assumptions.dc_strict = args.strict_dc;
    let rules = closure_rules(args)?;
    let budget = Budget { max_r: args.max_r, max_k: args.max_k };
    let stats = derive_closure(&mut kb, &rules, budget);
    Ok((kb, stats))
}

fn source_text(source: &Source) -> String {
    match source {
        Source::External { src } => src.clone(),
        Source::Rule { rule, .. } => rule.to_string(),
    }
}

/// Re-render a bound store in the fact-file grammar, one entry per line,
/// sources preserved (rule names for derived entries).
fn fact_lines(kb: &KnowledgeBase, only: Option<&Params>) -> Vec<FactLine> {
    let mut out = Vec::new();
    for (params, fact) in kb.facts() {
        if only.is_some_and(|p| p != params) {
            continue;
        }
        if let Some(e) = &fact.lower {
            out.push(FactLine {
                params: params.clone(),
                kind: AssertKind::Lower,
                value: e.value.clone(),
                src: source_text(&e.source),
            });
        }
        if let Some(e) = &fact.upper {
            out.push(FactLine {
                params: params.clone(),
                kind: AssertKind::Upper,
                value: e.value.clone(),
                src: source_text(&e.source),
            });
        }
    }
    out
}

fn cmd_derive(args: ClosureArgs, target: Option<&str>) -> Result<Outcome> {
    let target = target.map(parse_params).transpose()?;
    let (kb, stats) = closed_kb(&args)?;
    println!(
        "# closure: rounds {}, facts {}, absorbed {} ({} new), outside-budget {}",
        stats.rounds,
        kb.len(),
        stats.improved,
        stats.created,
        stats.budget_skipped
    );
    if let Some(inc) = kb.inconsistency() {
        println!("inconsistent: {inc}");
        return Ok(Outcome::Failed);
    }
    let lines = fact_lines(&kb, target.as_ref());
    if let Some(p) = &target {
        if lines.is_empty() {
            println!("no recorded bounds for {p}");
            return Ok(Outcome::Failed);
        }
    }
    print!("{}", ramsey::formats::render_facts(&lines));
    Ok(Outcome::Ok)
}

fn cmd_explain(args: ClosureArgs, target: &str, kind: &str) -> Result<Outcome> {
    let params = parse_params(target)?;
    let kind = match kind {
        "lower" => BoundKind::Lower,
        _ => BoundKind::Upper,
    };
    let (kb, _) = closed_kb(&args)?;
    match explain(&kb, &params, kind) {
        Ok(tree) => {
            println!("{tree}");
            Ok(Outcome::Ok)
        }
        Err(EngineError::MissingFact { params, kind }) => {
            println!("no {kind} bound recorded for {params}");
            Ok(Outcome::Failed)
        }
        Err(e) => bail!(e),
    }
}

fn cmd_table_r3(facts: &[PathBuf], max_r: usize) -> Result<Outcome> {
    if max_r < 2 {
        bail!("--max-r must be at least 2");
    }
    let mut kb = KnowledgeBase::new();
    load_facts(&mut kb, facts)?;
    print!("{}", render_table_r3(&kb, max_r));
    Ok(Outcome::Ok)
}

/// One `R(...) R(...)` pair per line, moved parameters first; `#` comments
/// and blank lines are skipped.
fn parse_pairs_file(text: &str) -> Result<Vec<(Params, Params)>> {
    let mut out = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_one = |tok: &str| -> Result<Params> {
            let inner = tok
                .strip_prefix("R(")
                .and_then(|rest| rest.strip_suffix(')'))
                .with_context(|| format!("line {}: expected R(k1,k2,...), got {tok:?}", ix + 1))?;
            parse_params(inner)
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [moved, original] = toks.as_slice() else {
            bail!("line {}: expected two parameter lists, got {}", ix + 1, toks.len());
        };
        out.push((parse_one(moved)?, parse_one(original)?));
    }
    Ok(out)
}

fn cmd_check_dc(facts: &[PathBuf], pairs: Option<&Path>) -> Result<Outcome> {
    let mut kb = KnowledgeBase::new();
    load_facts(&mut kb, facts)?;
    let explicit = match pairs {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(parse_pairs_file(&text)?)
        }
        None => None,
    };
    let reports = check_dc(&kb, explicit.as_deref())?;
    let mut contradictions = 0u32;
    let mut not_followed = 0u32;
    for rep in &reports {
        let head = format!("R{} <= R{}", strip_name(&rep.moved), strip_name(&rep.original));
        match rep.status {
            DcStatus::Consistent => println!("{head}: consistent"),
            DcStatus::NotFollowed => {
                not_followed += 1;
                let (l1, l2) = (fmt_opt(&rep.moved_lower), fmt_opt(&rep.original_lower));
                println!("{head}: not-followed (lower {l1} > lower {l2})");
            }
            DcStatus::Contradiction => {
                contradictions += 1;
                let (l1, u2) = (fmt_opt(&rep.moved_lower), fmt_opt(&rep.original_upper));
                println!("{head}: contradiction (lower {l1} > upper {u2})");
            }
        }
    }
    println!("checked {} pairs: {contradictions} contradictions, {not_followed} not followed", reports.len());
    if contradictions > 0 {
        Ok(Outcome::Failed)
    } else {
        Ok(Outcome::Ok)
    }
}

/// `(3,4)` from the `R(3,4)` rendering, for embedding after a literal `R`.
fn strip_name(p: &Params) -> String {
    p.to_string().split_off(1)
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "?".to_string(),
    }
}

fn cmd_ratios(facts: &[PathBuf], k: u32, max_r: usize) -> Result<Outcome> {
    if k < 2 {
        bail!("--k must be at least 2");
    }
    let mut kb = KnowledgeBase::new();
    load_facts(&mut kb, facts)?;
    let report = ratio_report(&kb, k, max_r);
    for row in &report.rows {
        let lower = row.lower_root.map_or_else(|| "?".to_string(), |v| format!("{v:.5}"));
        let upper = row.upper_root.map_or_else(|| "?".to_string(), |v| format!("{v:.5}"));
        println!("r={}  lower {lower}  upper {upper}", row.r);
    }
    match report.sup_lower {
        Some(sup) => println!("sup lower {sup:.5}"),
        None => println!("sup lower ?"),
    }
    Ok(Outcome::Ok)
}

fn cmd_capacity(graph: &str, power: usize) -> Result<Outcome> {
    let g = parse_graph_literal(graph).context("bad graph literal")?;
    let estimate = ramsey::capacity::capacity_lower(&g, power)?;
    for row in &estimate.rows {
        println!("r={}  vertices {}  alpha {}  root {:.5}", row.r, row.vertices, row.alpha, row.root);
    }
    println!("best r={}  root {:.5}", estimate.best_r, estimate.best_root);
    Ok(Outcome::Ok)
}
