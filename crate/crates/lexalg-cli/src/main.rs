//! `lexalg` — JSON reports over weighted linear orders and their stage
//! algebras.
//!
//! Every command prints a single JSON object (stable key order, one
//! trailing newline) so outputs can be used as golden files. Exit codes:
//! 0 success, 1 internal invariant violation, 2 user-input error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lexalg::algebra::{
    element_coordinates, radical_combinatorial, radical_trace_oracle_with_cap, semisimple_quotient,
    spans_equal, Element, MatrixUnit, RelationDto,
};
use lexalg::limits::{
    has_elementary_radical_decomposition, is_semisimple, limit_radical_dimension,
    quotient_structure, scan_links,
};
use lexalg::order::{
    classify_iso, format_order, interval_decomposition, parse_order, IntervalEntry, Position,
    WeightedOrder,
};
use lexalg::tower::{build_chain_with, MultiIndex, SegmentFactors, StageChain};

const DEFAULT_BUDGET: u64 = 4096;
const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "lexalg", version, about = "Exact stage computations for lexicographic products of triangular matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON report (indentation only; key order is fixed).
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized checks; echoed into every report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Stage-size cap (default 4096). The LEXALG_BUDGET environment
    /// variable overrides the default; this flag overrides both.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Stage sizes, edge counts and position lists of the canonical chain.
    Stage {
        #[arg(long)]
        order: String,
        #[arg(long)]
        depth: usize,
    },
    /// Per-stage limit-radical dimension, stage-radical dimension and
    /// quotient data.
    Radical {
        #[arg(long)]
        order: String,
        #[arg(long)]
        depth: usize,
    },
    /// Semisimplicity, elementary radical decomposition and the
    /// well-ordered initial segment split.
    Semisimple {
        #[arg(long)]
        order: String,
    },
    /// Compare the classification invariants of two orders.
    Classify {
        #[arg(long)]
        order: String,
        #[arg(long = "order-b")]
        order_b: String,
    },
    /// Link search for every strict matrix unit of the first stage, with
    /// limit-radical verdicts for cross-reference.
    Links {
        #[arg(long)]
        order: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        horizon: usize,
    },
    /// Maximal-interval decomposition of a weighted order.
    Decompose {
        #[arg(long)]
        order: String,
    },
    /// Trace-form radical oracle on a serialized relation (a JSON file
    /// path, or "-" for stdin).
    Oracle {
        #[arg(long)]
        relation: String,
        #[arg(long, default_value_t = lexalg::algebra::DEFAULT_ORACLE_CAP)]
        cap: u32,
    },
}

struct CliError {
    user: bool,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn user(kind: &'static str, message: impl ToString) -> Self {
        CliError {
            user: true,
            kind,
            message: message.to_string(),
        }
    }
}

#[derive(Serialize)]
struct Report<I: Serialize, R: Serialize> {
    command: &'static str,
    input: I,
    result: R,
    tool_version: &'static str,
}

fn report<I: Serialize, R: Serialize>(command: &'static str, input: I, result: R) -> String {
    let r = Report {
        command,
        input,
        result,
        tool_version: env!("CARGO_PKG_VERSION"),
    };
    serde_json::to_string(&r).expect("reports are serializable")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(json) => {
            println!("{}", maybe_pretty(&json, pretty));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let obj = serde_json::json!({
                "error": { "kind": e.kind, "message": e.message }
            });
            println!("{}", maybe_pretty(&obj.to_string(), pretty));
            if e.user {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn maybe_pretty(json: &str, pretty: bool) -> String {
    if !pretty {
        return json.to_string();
    }
    let value: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    serde_json::to_string_pretty(&value).expect("valid JSON")
}

fn budget_from(cli_budget: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = cli_budget {
        return Ok(b);
    }
    match std::env::var("LEXALG_BUDGET") {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| CliError::user("budget", format!("LEXALG_BUDGET is not an integer: {raw}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn parse(order: &str) -> Result<WeightedOrder, CliError> {
    parse_order(order).map_err(|e| CliError::user("parse", e))
}

fn chain_of(order: &WeightedOrder, depth: usize, budget: u64) -> Result<StageChain, CliError> {
    build_chain_with(order, depth, budget, &SegmentFactors::new()).map_err(|e| match e {
        lexalg::tower::TowerError::BudgetExceeded { .. } => CliError::user("budget", e),
        other => CliError::user("chain", other),
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let budget = budget_from(cli.budget)?;
    match cli.command {
        Command::Stage { order, depth } => cmd_stage(&order, depth, budget, seed),
        Command::Radical { order, depth } => cmd_radical(&order, depth, budget, seed),
        Command::Semisimple { order } => cmd_semisimple(&order),
        Command::Classify { order, order_b } => cmd_classify(&order, &order_b),
        Command::Links { order, depth, horizon } => cmd_links(&order, depth, horizon, budget),
        Command::Decompose { order } => cmd_decompose(&order),
        Command::Oracle { relation, cap } => cmd_oracle(&relation, cap, seed),
    }
}

#[derive(Serialize)]
struct ChainInput {
    order: String,
    depth: usize,
    budget: u64,
    seed: u64,
}

#[derive(Serialize)]
struct StageInfo {
    index: usize,
    n_f: u32,
    edge_count: usize,
    positions: Vec<Position>,
}

fn cmd_stage(order: &str, depth: usize, budget: u64, seed: u64) -> Result<String, CliError> {
    let w = parse(order)?;
    let chain = chain_of(&w, depth, budget)?;
    let stages: Vec<StageInfo> = chain
        .stages()
        .iter()
        .enumerate()
        .map(|(i, s)| StageInfo {
            index: i + 1,
            n_f: s.n_f(),
            edge_count: s.algebra().dim(),
            positions: s.positions().to_vec(),
        })
        .collect();
    Ok(report(
        "stage",
        ChainInput {
            order: format_order(&w),
            depth,
            budget,
            seed,
        },
        serde_json::json!({ "stages": stages }),
    ))
}

#[derive(Serialize)]
struct RadicalStageInfo {
    index: usize,
    n_f: u32,
    limit_radical_dim: u64,
    limit_quotient_dim: u64,
    stage_radical_dim: usize,
    stage_radical_strictly_larger: bool,
    quotient_block_sizes: Vec<u32>,
}

fn cmd_radical(order: &str, depth: usize, budget: u64, seed: u64) -> Result<String, CliError> {
    let w = parse(order)?;
    let chain = chain_of(&w, depth, budget)?;
    let stages: Vec<RadicalStageInfo> = chain
        .stages()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let q = quotient_structure(s);
            RadicalStageInfo {
                index: i + 1,
                n_f: s.n_f(),
                limit_radical_dim: q.limit_radical_dim,
                limit_quotient_dim: q.limit_quotient_dim,
                stage_radical_dim: q.stage_radical_dim,
                stage_radical_strictly_larger: q.stage_radical_strictly_larger,
                quotient_block_sizes: semisimple_quotient(s.algebra()),
            }
        })
        .collect();
    Ok(report(
        "radical",
        ChainInput {
            order: format_order(&w),
            depth,
            budget,
            seed,
        },
        serde_json::json!({ "stages": stages }),
    ))
}

fn cmd_semisimple(order: &str) -> Result<String, CliError> {
    let w = parse(order)?;
    let (initial, remainder) = w.wois_split();
    let result = serde_json::json!({
        "semisimple": is_semisimple(&w),
        "elementary_decomposition": has_elementary_radical_decomposition(&w),
        "wois": {
            "initial": initial.as_ref().map(format_order),
            "remainder": remainder.as_ref().map(format_order),
        }
    });
    Ok(report(
        "semisimple",
        serde_json::json!({ "order": format_order(&w) }),
        result,
    ))
}

fn cmd_classify(order_a: &str, order_b: &str) -> Result<String, CliError> {
    let a = parse(order_a)?;
    let b = parse(order_b)?;
    let result = serde_json::json!({
        "isomorphic": classify_iso(&a, &b),
        "decomposition_a": interval_decomposition(&a),
        "decomposition_b": interval_decomposition(&b),
    });
    Ok(report(
        "classify",
        serde_json::json!({ "order": format_order(&a), "order_b": format_order(&b) }),
        result,
    ))
}

#[derive(Serialize)]
struct LinkJson {
    stage_index: usize,
    unit: MatrixUnit,
    row_label: MultiIndex,
    col_label: MultiIndex,
    domain_witness: MultiIndex,
    range_witness: MultiIndex,
}

#[derive(Serialize)]
struct LinkEntry {
    unit: MatrixUnit,
    row_label: MultiIndex,
    col_label: MultiIndex,
    radical_member: bool,
    link: Option<LinkJson>,
}

fn cmd_links(order: &str, depth: usize, horizon: usize, budget: u64) -> Result<String, CliError> {
    let w = parse(order)?;
    let chain = chain_of(&w, depth, budget)?;
    let scan = scan_links(&chain, 0, horizon).map_err(|e| CliError::user("links", e))?;
    let stage = chain.stage(0);
    let units: Vec<LinkEntry> = scan
        .into_iter()
        .map(|(unit, verdict, link)| {
            let link = link.map(|record| {
                let g = chain.stage(record.stage_index);
                LinkJson {
                    stage_index: record.stage_index + 1,
                    unit: record.unit,
                    row_label: g.label(record.unit.row).expect("link unit is in stage"),
                    col_label: g.label(record.unit.col).expect("link unit is in stage"),
                    domain_witness: record.domain_witness,
                    range_witness: record.range_witness,
                }
            });
            LinkEntry {
                unit,
                row_label: stage.label(unit.row).expect("unit is in stage"),
                col_label: stage.label(unit.col).expect("unit is in stage"),
                radical_member: verdict.member,
                link,
            }
        })
        .collect();
    let result = serde_json::json!({
        "chain": { "order": format_order(&w), "depth": depth },
        "stage_index": 1,
        "horizon": horizon,
        "units": units,
    });
    Ok(report(
        "links",
        serde_json::json!({
            "order": format_order(&w),
            "depth": depth,
            "horizon": horizon,
            "budget": budget,
        }),
        result,
    ))
}

fn cmd_decompose(order: &str) -> Result<String, CliError> {
    let w = parse(order)?;
    let intervals: Vec<IntervalEntry> = interval_decomposition(&w);
    Ok(report(
        "decompose",
        serde_json::json!({ "order": format_order(&w) }),
        serde_json::json!({ "intervals": intervals }),
    ))
}

fn cmd_oracle(relation: &str, cap: u32, seed: u64) -> Result<String, CliError> {
    let raw = if relation == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::user("io", e))?;
        buf
    } else {
        std::fs::read_to_string(relation).map_err(|e| CliError::user("io", e))?
    };
    let dto: RelationDto =
        serde_json::from_str(&raw).map_err(|e| CliError::user("relation", e))?;
    let algebra = std::sync::Arc::new(dto.build().map_err(|e| CliError::user("relation", e))?);
    let basis =
        radical_trace_oracle_with_cap(&algebra, cap).map_err(|e| CliError::user("oracle", e))?;
    let combinatorial = radical_combinatorial(&algebra);
    let oracle_vecs: Vec<Vec<lexalg::algebra::Coef>> =
        basis.iter().map(element_coordinates).collect();
    let comb_vecs: Vec<Vec<lexalg::algebra::Coef>> = combinatorial
        .edges()
        .iter()
        .map(|&(i, j)| element_coordinates(&Element::unit(&algebra, i, j).expect("edge")))
        .collect();
    let matches = spans_equal(algebra.dim(), &comb_vecs, &oracle_vecs);
    let result = serde_json::json!({
        "n": algebra.n(),
        "dim": algebra.dim(),
        "radical_dim": basis.len(),
        "basis": basis,
        "matches_combinatorial": matches,
    });
    Ok(report(
        "oracle",
        serde_json::json!({ "relation": serde_json::from_str::<serde_json::Value>(&raw).expect("parsed above"), "cap": cap, "seed": seed }),
        result,
    ))
}
