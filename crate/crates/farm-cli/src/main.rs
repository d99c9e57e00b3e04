//! Command-line interface to the arbitrage calculus: simulate chains,
//! run reachability searches and the bundled verifications, and emit
//! matrices, graphs, and reports.
//!
//! Exit codes: 0 on success or a conforming verification; 1 on a usage
//! or resource error; 2 when a verification falsifies a bundled claim,
//! with the counterexample on stderr. Reports are byte-identical for a
//! given input regardless of thread count.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use farm_core::matrix::{build_b, build_q, verify_action, Mat6};
use farm_core::rates::{
    code_of, parse_rational, realize, BalancedBase, BalancedCode, ExponentEnsemble,
    PrincipalIndex, RateEnsemble,
};
use farm_core::reference::{KNOWN_DISCREPANCIES, REFERENCE_B, REFERENCE_G, REFERENCE_Q, REFERENCE_Q_INV};
use farm_core::search::{
    balanced_codes, compare_flavors, growth_stats, optimal_table, prodex_cases, reach_with,
    verify_hypothesis2, verify_prop32, verify_victor_p, DepthStats, SearchConfig,
    TableDiscrepancy,
};
use farm_core::semigroup::{
    analyze_product, build_key_graph, check_norm_certificate, check_octahedron, decompositions,
    hull_facets, is_stabilizer, kernel_vectors, octahedron_pairs, reduce_key_graph,
    shortest_zero_product, unit_ball_vertices, MatrixSpace, SpectrumFactorization,
};
use farm_core::{apply_chain, Chain, Error as CoreError, Flavor, StrongId, START};

#[derive(Parser)]
#[command(
    name = "farm",
    version,
    about = "Barter-economy arbitrage calculus: chain simulation, reachability search, and claim verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args)]
struct RunFlags {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Maximum distinct states a search may discover.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_states: usize,
    /// Maximum chain passes when detecting a periodic orbit.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget_iters: usize,
    /// Worker threads for searches (0 = runtime default). Falls back to
    /// the FARM_THREADS environment variable, then to 1.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Weak,
    Strong,
}

impl From<FlavorArg> for Flavor {
    fn from(arg: FlavorArg) -> Flavor {
        match arg {
            FlavorArg::Weak => Flavor::Weak,
            FlavorArg::Strong => Flavor::Strong,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Apply an arbitrage chain to a start state, optionally realizing
    /// exact rates over a base ensemble.
    Simulate {
        /// Chain such as "s:7,10" (strong) or "w:1,14" (weak).
        #[arg(long)]
        chain: String,
        /// Start state as six comma-separated exponents.
        #[arg(long, default_value = "1,0,0,0,0,0")]
        start: String,
        /// Base rates as six comma-separated rationals (with --alpha).
        #[arg(long, requires = "alpha")]
        base: Option<String>,
        /// Base ratio alpha > 1 (with --base).
        #[arg(long, requires = "base")]
        alpha: Option<String>,
    },
    /// Breadth-first reachability with per-depth statistics and
    /// shortest witnesses for balanced codes.
    Search {
        /// Chain length bound.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Generator family.
        #[arg(long, value_enum, default_value_t = FlavorArg::Strong)]
        flavor: FlavorArg,
        /// Start state as six comma-separated exponents.
        #[arg(long, default_value = "1,0,0,0,0,0")]
        start: String,
    },
    /// Optimal strong chains for every balanced code of bounded
    /// magnitude, compared against the bundled reference table.
    Table2 {
        /// Largest code magnitude to cover.
        #[arg(long, default_value_t = 1)]
        magnitude: i64,
    },
    /// Completeness of balanced codes at the claimed search depth.
    Hypothesis {
        /// Magnitude parameter of the instance.
        #[arg(long)]
        nu: i64,
    },
    /// The repeated product-example family.
    Prodex {
        /// Largest repetition count to check.
        #[arg(long, default_value_t = 10)]
        n_max: i64,
    },
    /// Periodicity of the bundled 32-step chain.
    Prop32 {
        /// Seed state as six comma-separated exponents.
        #[arg(long, default_value = "1,0,0,0,0,0")]
        seed: String,
    },
    /// Exclusion of axis states from the reachable set.
    Victorp {
        /// Chain length bound.
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Growth statistics of the reachable sets.
    Growth {
        /// Chain length bound.
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Emit the action matrices, the conjugation, the block
    /// decompositions, and the kernel vectors.
    Matrices,
    /// The key graph of kernel vectors and its octahedral reduction.
    Graph,
    /// Facet census of the certificate polyhedron.
    Hull,
    /// Zero-product chains: search for the shortest one, or classify a
    /// given chain as stabilizer or destabilizer.
    Stabilizer {
        /// Strong chain to classify, such as "s:10,3,6"; omit to search.
        #[arg(long)]
        chain: Option<String>,
        /// Length bound for the shortest-chain search.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Run every verification section and aggregate the outcome.
    VerifyAll {
        /// Largest completeness instance to include.
        #[arg(long, default_value_t = 2)]
        nu: i64,
    },
}

/// Rendered output plus the counterexamples that falsify claims, if any.
struct CmdOut {
    body: String,
    evidence: Vec<String>,
}

impl CmdOut {
    fn conforming(body: String) -> CmdOut {
        CmdOut {
            body,
            evidence: Vec::new(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Keep clap's rendered message but own the exit code: 1 for
            // usage errors, 0 for --help/--version.
            let is_help = err.use_stderr();
            let _ = err.print();
            return if is_help {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            for line in &out.evidence {
                eprintln!("NON-CONFORMING: {line}");
            }
            if out.evidence.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<CmdOut> {
    let config = SearchConfig {
        budget_states: cli.run.budget_states,
        threads: resolve_threads(cli.run.threads)?,
    };
    let format = cli.run.format;
    let out = match &cli.command {
        Command::Simulate {
            chain,
            start,
            base,
            alpha,
        } => cmd_simulate(format, chain, start, base.as_deref(), alpha.as_deref())?,
        Command::Search {
            depth,
            flavor,
            start,
        } => cmd_search(format, *depth, (*flavor).into(), start, &config)?,
        Command::Table2 { magnitude } => cmd_table2(format, *magnitude, &config)?,
        Command::Hypothesis { nu } => cmd_hypothesis(format, *nu, &config)?,
        Command::Prodex { n_max } => cmd_prodex(format, *n_max)?,
        Command::Prop32 { seed } => cmd_prop32(format, seed, cli.run.budget_iters)?,
        Command::Victorp { depth } => cmd_victorp(format, *depth, &config)?,
        Command::Growth { depth } => cmd_growth(format, *depth, &config)?,
        Command::Matrices => cmd_matrices(format)?,
        Command::Graph => cmd_graph(format)?,
        Command::Hull => cmd_hull(format)?,
        Command::Stabilizer { chain, depth } => {
            cmd_stabilizer(format, chain.as_deref(), *depth)?
        }
        Command::VerifyAll { nu } => cmd_verify_all(format, *nu, &config, cli.run.budget_iters)?,
    };
    match &cli.run.out {
        Some(path) => {
            std::fs::write(path, &out.body)
                .with_context(|| format!("writing report to {}", path.display()))?;
        }
        None => {
            print!("{}", out.body);
        }
    }
    Ok(out)
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(threads) = flag {
        return Ok(threads);
    }
    match std::env::var("FARM_THREADS") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| anyhow!("FARM_THREADS must be a nonnegative integer, got {value:?}")),
        Err(_) => Ok(1),
    }
}

// ---------------------------------------------------------------------------
// Encoding helpers
// ---------------------------------------------------------------------------

fn state_json(state: &ExponentEnsemble) -> Value {
    json!({ "exponents": state.exponents() })
}

fn code_json(code: Option<BalancedCode>) -> Value {
    match code {
        Some(c) => json!([c.i, c.j, c.k]),
        None => Value::Null,
    }
}

fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rates_json(rates: &RateEnsemble, alpha: &BigRational) -> Value {
    let mut map = serde_json::Map::new();
    for id in 1..=6u8 {
        let index = PrincipalIndex::new(id).expect("index in range");
        map.insert(
            index.label().to_string(),
            Value::String(rational_str(&rates.principals()[index.pos()])),
        );
    }
    json!({ "rates": map, "alpha": rational_str(alpha) })
}

fn to_pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn matrix_lines(out: &mut String, label: &str, matrix: &Mat6) {
    let _ = writeln!(out, "{label}:");
    for row in matrix {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:2}")).collect();
        let _ = writeln!(out, "  [ {} ]", cells.join(" "));
    }
}

fn per_depth_csv(rows: &[DepthStats]) -> String {
    let mut out = String::from("depth,states,balanced,max_magnitude\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.depth, row.states, row.balanced, row.max_magnitude
        );
    }
    out
}

fn per_depth_table(out: &mut String, rows: &[DepthStats]) {
    let _ = writeln!(out, "  depth   states  balanced  max|n|");
    for row in rows {
        let _ = writeln!(
            out,
            "  {:5} {:8} {:9} {:7}",
            row.depth, row.states, row.balanced, row.max_magnitude
        );
    }
}

fn unsupported(format: Format, command: &str) -> Result<CmdOut> {
    let name = match format {
        Format::Table => "table",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Dot => "dot",
    };
    bail!("format {name:?} is not supported for {command}")
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(
    format: Format,
    chain_text: &str,
    start_text: &str,
    base_text: Option<&str>,
    alpha_text: Option<&str>,
) -> Result<CmdOut> {
    let chain = Chain::parse(chain_text)?;
    let start = ExponentEnsemble::parse(start_text)?;
    let (end, trace) = apply_chain(&chain, start);
    let base = match (base_text, alpha_text) {
        (Some(rates), Some(alpha)) => Some(parse_base(rates, alpha)?),
        _ => None,
    };
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "chain {chain}");
            let _ = writeln!(out, "start {start}");
            for (i, step) in trace.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "step {:2}: id {:2} {} -> {}",
                    i + 1,
                    step.id,
                    if step.active { "active  " } else { "inactive" },
                    step.state_after
                );
            }
            let _ = writeln!(out, "end   {end}");
            match code_of(&end) {
                Some(code) => {
                    let _ = writeln!(out, "code  {code}");
                }
                None => {
                    let _ = writeln!(out, "code  none (unbalanced)");
                }
            }
            if let Some(base) = &base {
                let rates = realize(&end, base);
                for id in 1..=6u8 {
                    let index = PrincipalIndex::new(id).expect("index in range");
                    let _ = writeln!(
                        out,
                        "rate {} = {}",
                        index.label(),
                        rational_str(&rates.principals()[index.pos()])
                    );
                }
                let _ = writeln!(out, "alpha = {}", rational_str(base.alpha()));
            }
            out
        }
        Format::Json => {
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|step| {
                    json!({
                        "id": step.id,
                        "active": step.active,
                        "state": state_json(&step.state_after),
                    })
                })
                .collect();
            let mut report = json!({
                "chain": chain.to_string(),
                "start": state_json(&start),
                "steps": steps,
                "end": state_json(&end),
                "code": code_json(code_of(&end)),
            });
            if let Some(base) = &base {
                report["realized"] = rates_json(&realize(&end, base), base.alpha());
            }
            to_pretty(&report)
        }
        Format::Csv => {
            let mut out = String::from("step,id,active,n1,n2,n3,n4,n5,n6\n");
            let row = |step: usize, id: &str, active: &str, s: &ExponentEnsemble| {
                let e = s.exponents();
                format!(
                    "{step},{id},{active},{},{},{},{},{},{}\n",
                    e[0], e[1], e[2], e[3], e[4], e[5]
                )
            };
            out.push_str(&row(0, "", "", &start));
            for (i, step) in trace.steps.iter().enumerate() {
                out.push_str(&row(
                    i + 1,
                    &step.id.to_string(),
                    if step.active { "true" } else { "false" },
                    &step.state_after,
                ));
            }
            out
        }
        Format::Dot => return unsupported(format, "simulate"),
    };
    Ok(CmdOut::conforming(body))
}

fn parse_base(rates_text: &str, alpha_text: &str) -> Result<BalancedBase> {
    let parts: Vec<&str> = rates_text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        bail!(
            "expected 6 comma-separated principal rates, got {}",
            parts.len()
        );
    }
    let mut rates = Vec::with_capacity(6);
    for part in parts {
        rates.push(parse_rational(part)?);
    }
    let rates: [BigRational; 6] = rates.try_into().expect("six entries");
    let alpha = parse_rational(alpha_text)?;
    Ok(BalancedBase::new(RateEnsemble::new(rates)?, alpha)?)
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

fn cmd_search(
    format: Format,
    depth: usize,
    flavor: Flavor,
    start_text: &str,
    config: &SearchConfig,
) -> Result<CmdOut> {
    let start = ExponentEnsemble::parse(start_text)?;
    let report = reach_with(depth, flavor, start, config)?;
    let codes = balanced_codes(&report);
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{} search from {start} to depth {depth}: {} states",
                flavor,
                report.len()
            );
            per_depth_table(&mut out, &report.per_depth);
            let _ = writeln!(out, "balanced codes reached ({}):", codes.len());
            for (code, witness) in &codes {
                let _ = writeln!(out, "  {code}  via {witness}  (length {})", witness.len());
            }
            out
        }
        Format::Json => {
            let code_list: Vec<Value> = codes
                .iter()
                .map(|(code, witness)| {
                    json!({
                        "code": [code.i, code.j, code.k],
                        "witness": witness.to_string(),
                        "length": witness.len(),
                    })
                })
                .collect();
            to_pretty(&json!({
                "flavor": flavor.to_string(),
                "start": state_json(&start),
                "depth": depth,
                "states": report.len(),
                "per_depth": report.per_depth,
                "balanced_codes": code_list,
            }))
        }
        Format::Csv => per_depth_csv(&report.per_depth),
        Format::Dot => return unsupported(format, "search"),
    };
    Ok(CmdOut::conforming(body))
}

// ---------------------------------------------------------------------------
// table2
// ---------------------------------------------------------------------------

/// The catalogue tag documenting a reference-table discrepancy, when the
/// discrepancy is a consequence of a known misprint.
fn documented_table_tag(discrepancy: &TableDiscrepancy) -> Option<&'static str> {
    let row_tag = |row: usize| match row {
        3 | 25 => Some("optimal-table-row-3"),
        14 | 20 => Some("optimal-table-row-14"),
        _ => None,
    };
    let code_tag = |code: &BalancedCode| {
        if *code == BalancedCode::new(1, 1, 0) || *code == BalancedCode::new(1, 0, 0) {
            Some("optimal-table-row-3")
        } else if *code == BalancedCode::new(-1, 1, -1) || *code == BalancedCode::new(1, 1, -1) {
            Some("optimal-table-row-14")
        } else {
            None
        }
    };
    match discrepancy {
        TableDiscrepancy::ReplayMismatch { row, .. }
        | TableDiscrepancy::LengthMismatch { row, .. } => row_tag(*row),
        TableDiscrepancy::DuplicatedInPrinted { rows, .. } => {
            rows.iter().find_map(|&row| row_tag(row))
        }
        TableDiscrepancy::MissingFromPrinted { code } => code_tag(code),
    }
}

/// One sentence describing a reference-table discrepancy.
fn describe_discrepancy(discrepancy: &TableDiscrepancy) -> String {
    match discrepancy {
        TableDiscrepancy::ReplayMismatch { row, printed_code, replayed_code, chain } => {
            let chain = Chain::strong(chain).expect("stored ids valid");
            match replayed_code {
                Some(code) => format!(
                    "row {row} prints code {printed_code} but its chain {chain} reaches {code}"
                ),
                None => format!(
                    "row {row} prints code {printed_code} but its chain {chain} ends unbalanced"
                ),
            }
        }
        TableDiscrepancy::LengthMismatch { row, code, printed_length, computed_length } => {
            format!(
                "row {row} gives length {printed_length} for {code}; the optimum is {computed_length}"
            )
        }
        TableDiscrepancy::MissingFromPrinted { code } => {
            format!("code {code} appears in no printed row")
        }
        TableDiscrepancy::DuplicatedInPrinted { code, rows } => {
            format!("code {code} appears in printed rows {rows:?}")
        }
    }
}

fn cmd_table2(format: Format, magnitude: i64, config: &SearchConfig) -> Result<CmdOut> {
    let table = optimal_table(magnitude, config)?;
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    for discrepancy in &table.discrepancies {
        let described = describe_discrepancy(discrepancy);
        match documented_table_tag(discrepancy) {
            Some(tag) => notes.push(format!("documented misprint ({tag}): {described}")),
            None => evidence.push(format!(
                "reference table mismatch not covered by the catalogue: {described}"
            )),
        }
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "optimal chains for the {} codes of magnitude <= {}:",
                table.entries.len(),
                table.max_magnitude
            );
            let _ = writeln!(out, "  code        length  chain");
            for entry in &table.entries {
                let chain = Chain::strong(&entry.chain).expect("stored ids valid");
                let _ = writeln!(out, "  {:10}  {:6}  {chain}", entry.code.to_string(), entry.length);
            }
            if table.discrepancies.is_empty() {
                let _ = writeln!(out, "reference comparison: exact match");
            } else {
                let _ = writeln!(
                    out,
                    "reference comparison: {} discrepancies",
                    table.discrepancies.len()
                );
                for note in &notes {
                    let _ = writeln!(out, "  {note}");
                }
                for item in &evidence {
                    let _ = writeln!(out, "  {item}");
                }
            }
            out
        }
        Format::Json => to_pretty(&json!({
            "max_magnitude": table.max_magnitude,
            "entries": table.entries,
            "discrepancies": table.discrepancies,
            "documented": notes,
            "undocumented": evidence,
        })),
        Format::Csv => {
            let mut out = String::from("i,j,k,length,chain\n");
            for entry in &table.entries {
                let ids: Vec<String> = entry.chain.iter().map(u8::to_string).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    entry.code.i,
                    entry.code.j,
                    entry.code.k,
                    entry.length,
                    ids.join(" ")
                );
            }
            out
        }
        Format::Dot => return unsupported(format, "table2"),
    };
    Ok(CmdOut { body, evidence })
}

// ---------------------------------------------------------------------------
// hypothesis / prodex / prop32 / victorp / growth
// ---------------------------------------------------------------------------

fn cmd_hypothesis(format: Format, nu: i64, config: &SearchConfig) -> Result<CmdOut> {
    let report = verify_hypothesis2(nu, config)?;
    let mut evidence = Vec::new();
    if !report.verified {
        evidence.push(format!(
            "completeness instance nu = {nu}: missing at depth {}: {:?}; missing at depth {}: {:?}",
            report.complete_depth,
            report.missing_at_complete,
            report.complete_depth - 1,
            report.missing_at_previous,
        ));
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            if report.verified {
                let _ = writeln!(
                    out,
                    "VERIFIED: all {} codes of magnitude <= {nu} reached by depth {}, and \
                     exactly (-{nu},-{nu},-{nu}) and ({nu},{nu},{nu}) are missing at depth {}",
                    report.expected_codes,
                    report.complete_depth,
                    report.complete_depth - 1
                );
            } else {
                let _ = writeln!(out, "NON-CONFORMING: see stderr");
            }
            per_depth_table(&mut out, &report.per_depth);
            out
        }
        Format::Json => to_pretty(&serde_json::to_value(&report)?),
        Format::Csv => per_depth_csv(&report.per_depth),
        Format::Dot => return unsupported(format, "hypothesis"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_prodex(format: Format, n_max: i64) -> Result<CmdOut> {
    let cases = prodex_cases(n_max)?;
    let mut evidence = Vec::new();
    if let Some(case) = cases.iter().find(|c| !c.matches) {
        evidence.push(format!(
            "product example fails first at n = {}: reached {} (expected {}), inactive steps {:?}",
            case.n, case.end, case.expected, case.inactive_steps
        ));
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "   n  reached                  expected                 active  match");
            for case in &cases {
                let _ = writeln!(
                    out,
                    "  {:2}  {:23} {:23}  {:6}  {}",
                    case.n,
                    case.end.to_string(),
                    case.expected.to_string(),
                    case.all_active,
                    if case.matches { "yes" } else { "NO" }
                );
            }
            out
        }
        Format::Json => to_pretty(&serde_json::to_value(&cases)?),
        Format::Csv => {
            let mut out = String::from("n,reached,expected,all_active,matches\n");
            for case in &cases {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    case.n,
                    case.end.to_string().replace(',', ";"),
                    case.expected.to_string().replace(',', ";"),
                    case.all_active,
                    case.matches
                );
            }
            out
        }
        Format::Dot => return unsupported(format, "prodex"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_prop32(format: Format, seed_text: &str, pass_budget: usize) -> Result<CmdOut> {
    let seed = ExponentEnsemble::parse(seed_text)?;
    let report = match verify_prop32(seed, pass_budget) {
        Ok(report) => report,
        Err(err @ CoreError::NoPeriod { .. }) => {
            return Ok(CmdOut {
                body: String::from("NON-CONFORMING: see stderr\n"),
                evidence: vec![err.to_string()],
            });
        }
        Err(err) => return Err(err.into()),
    };
    let bits = |flags: &[bool]| -> String {
        flags.iter().map(|&a| if a { '1' } else { '0' }).collect()
    };
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "seed {seed}");
            let ids: Vec<String> = report.chain.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "chain w:{}", ids.join(","));
            let _ = writeln!(
                out,
                "transient {} passes, period {} passes",
                report.transient, report.period
            );
            for pass in &report.passes {
                let _ = writeln!(
                    out,
                    "  pass {:3}: {}  activity {}",
                    pass.pass,
                    pass.state_after,
                    bits(&pass.activity)
                );
            }
            let _ = writeln!(out, "active on some pass:  {}", bits(&report.active_some_pass));
            let _ = writeln!(out, "active on every pass: {}", bits(&report.active_every_pass));
            let _ = writeln!(out, "active in the cycle:  {}", bits(&report.active_in_cycle));
            let _ = writeln!(
                out,
                "arbitrage ids firing on some pass: {:?} ({})",
                report.ids_active,
                if report.all_ids_active {
                    "all 24 arbitrages fire"
                } else {
                    "not all 24 arbitrages fire"
                }
            );
            out
        }
        Format::Json => to_pretty(&serde_json::to_value(&report)?),
        Format::Csv => {
            let mut out = String::from("pass,state,activity\n");
            for pass in &report.passes {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    pass.pass,
                    pass.state_after.to_string().replace(',', ";"),
                    bits(&pass.activity)
                );
            }
            out
        }
        Format::Dot => return unsupported(format, "prop32"),
    };
    Ok(CmdOut::conforming(body))
}

fn cmd_victorp(format: Format, depth: usize, config: &SearchConfig) -> Result<CmdOut> {
    let report = verify_victor_p(depth, config)?;
    let mut evidence = Vec::new();
    if !report.conforming {
        evidence.push(format!(
            "axis states with |n| >= 2 reached within depth {depth}: {:?}",
            report.counterexamples
        ));
    }
    let body = match format {
        Format::Table => {
            if report.conforming {
                format!(
                    "VERIFIED: no state (n,0,0,0,0,0) with |n| >= 2 among the {} states \
                     reachable within depth {}\n",
                    report.states_searched, report.depth
                )
            } else {
                String::from("NON-CONFORMING: see stderr\n")
            }
        }
        Format::Json => to_pretty(&serde_json::to_value(&report)?),
        Format::Csv | Format::Dot => return unsupported(format, "victorp"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_growth(format: Format, depth: usize, config: &SearchConfig) -> Result<CmdOut> {
    let report = growth_stats(depth, config)?;
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "growth of the strong reachable sets to depth {depth}:");
            per_depth_table(&mut out, &report.per_depth);
            let _ = writeln!(
                out,
                "lambda_hat = {} (max magnitude <= lambda_hat * depth)",
                report.lambda_hat
            );
            let _ = writeln!(out, "mu_hat = {} (states <= mu_hat * depth^6)", report.mu_hat);
            let _ = writeln!(
                out,
                "mu_hat_balanced = {} (balanced <= mu_hat_balanced * depth^3)",
                report.mu_hat_balanced
            );
            out
        }
        Format::Json => to_pretty(&serde_json::to_value(&report)?),
        Format::Csv => per_depth_csv(&report.per_depth),
        Format::Dot => return unsupported(format, "growth"),
    };
    Ok(CmdOut::conforming(body))
}

// ---------------------------------------------------------------------------
// matrices / graph / hull / stabilizer
// ---------------------------------------------------------------------------

fn cmd_matrices(format: Format) -> Result<CmdOut> {
    let (q, q_inv) = build_q();
    let decomposed = decompositions();
    let kernels = kernel_vectors()?;
    let mut evidence = Vec::new();
    for k in 0..12 {
        if build_b(StrongId::new(k as u8 + 1).unwrap()) != REFERENCE_B[k] {
            evidence.push(format!("generated B{} differs from the reference", k + 1));
        }
        if decomposed[k].g != REFERENCE_G[k] || !decomposed[k].matches_reference {
            evidence.push(format!("decomposition {} differs from the reference", k + 1));
        }
    }
    if q != REFERENCE_Q || q_inv != REFERENCE_Q_INV {
        evidence.push(String::from("generated conjugation differs from the reference"));
    }
    if !kernels.matches_reference {
        evidence.push(String::from("kernel vectors differ from the reference"));
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            for (k, decomposition) in decomposed.iter().enumerate() {
                matrix_lines(&mut out, &format!("B{}", k + 1), &decomposition.b);
            }
            matrix_lines(&mut out, "Q", &q);
            matrix_lines(&mut out, "Q^-1", &q_inv);
            for (k, decomposition) in decomposed.iter().enumerate() {
                matrix_lines(&mut out, &format!("D{}", k + 1), &decomposition.d);
            }
            for (k, decomposition) in decomposed.iter().enumerate() {
                let _ = writeln!(out, "G{}:", k + 1);
                for row in &decomposition.g {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:2}")).collect();
                    let _ = writeln!(out, "  [ {} ]", cells.join(" "));
                }
            }
            for entry in &kernels.entries {
                let _ = writeln!(
                    out,
                    "s for generator pair ({}, {}): {:?}",
                    2 * ((entry.generator as usize + 1) / 2) - 1,
                    2 * ((entry.generator as usize + 1) / 2),
                    entry.vector
                );
            }
            let _ = writeln!(
                out,
                "reference comparison: {}",
                if evidence.is_empty() { "exact match" } else { "MISMATCH" }
            );
            out
        }
        Format::Json => {
            let b: Vec<&Mat6> = decomposed.iter().map(|d| &d.b).collect();
            let d: Vec<&Mat6> = decomposed.iter().map(|d| &d.d).collect();
            let g: Vec<_> = decomposed.iter().map(|d| &d.g).collect();
            to_pretty(&json!({
                "b": b,
                "q": q,
                "q_inv": q_inv,
                "d": d,
                "g": g,
                "kernel": kernels.entries,
                "matches_reference": evidence.is_empty(),
            }))
        }
        Format::Csv | Format::Dot => return unsupported(format, "matrices"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_graph(format: Format) -> Result<CmdOut> {
    let graph = build_key_graph()?;
    let mismatches = graph.reference_mismatches();
    let reduced = reduce_key_graph(&graph);
    let octahedral = check_octahedron(&reduced);
    let mut evidence = Vec::new();
    if !mismatches.is_empty() {
        evidence.push(format!("key graph differs from the reference: {mismatches:?}"));
    }
    if !octahedral {
        evidence.push(String::from("loopless reduction is not the octahedron"));
    }
    let body = match format {
        Format::Dot => graph.to_dot(),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "key graph: {} nodes, {} labelled edges",
                graph.nodes.len(),
                graph.edges.len()
            );
            for node in &graph.nodes {
                let mut targets: Vec<String> = Vec::new();
                for edge in &graph.edges {
                    if edge.from == node.index {
                        targets.push(format!(
                            "{}->{}",
                            edge.generator, graph.nodes[edge.to].label
                        ));
                    }
                }
                let _ = writeln!(out, "  {}: {}", node.label, targets.join(" "));
            }
            let _ = writeln!(
                out,
                "reduction: {} ({} classes, {} edges)",
                if octahedral { "octahedron" } else { "NOT the octahedron" },
                reduced.n,
                reduced.edge_count()
            );
            if let Some(pairs) = octahedron_pairs(&reduced) {
                let pretty: Vec<String> = pairs
                    .iter()
                    .map(|(a, b)| format!("s{}-s{}", a + 1, b + 1))
                    .collect();
                let _ = writeln!(out, "antipodal classes: {}", pretty.join(", "));
            }
            out
        }
        Format::Json => to_pretty(&json!({
            "nodes": graph.nodes,
            "edges": graph.edges,
            "octahedral_reduction": octahedral,
        })),
        Format::Csv => return unsupported(format, "graph"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_hull(format: Format) -> Result<CmdOut> {
    let census = hull_facets(&unit_ball_vertices())?;
    let family: Vec<_> = decompositions().iter().map(|d| d.g).collect();
    let certificate = check_norm_certificate(&family)?;
    let mut evidence = Vec::new();
    if census.quads != 6 || census.triangles != 8 || census.larger != 0 {
        evidence.push(format!(
            "facet census {} quads + {} triangles + {} larger differs from 6 + 8 + 0",
            census.quads, census.triangles, census.larger
        ));
    }
    if census.extreme.len() != 12 {
        evidence.push(format!("{} extreme points, expected 12", census.extreme.len()));
    }
    if !census.origin_interior() {
        evidence.push(String::from("origin is not strictly inside the hull"));
    }
    if !certificate.valid() {
        evidence.push(format!(
            "vertex images escape the unit ball: {:?}",
            certificate.violations
        ));
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "certificate polyhedron: {} facets ({} quadrilaterals, {} triangles), {} vertices",
                census.facets.len(),
                census.quads,
                census.triangles,
                census.extreme.len()
            );
            for facet in &census.facets {
                let cycle: Vec<String> = facet.vertices.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(
                    out,
                    "  normal {:?} offset {}: {}",
                    facet.normal,
                    facet.offset,
                    cycle.join(" ")
                );
            }
            let _ = writeln!(
                out,
                "origin interior: {}; all generator images inside: {}",
                census.origin_interior(),
                certificate.valid()
            );
            out
        }
        Format::Json => to_pretty(&json!({
            "census": census,
            "certificate": certificate,
        })),
        Format::Csv | Format::Dot => return unsupported(format, "hull"),
    };
    Ok(CmdOut { body, evidence })
}

fn cmd_stabilizer(format: Format, chain_text: Option<&str>, depth: usize) -> Result<CmdOut> {
    match chain_text {
        Some(text) => {
            let chain = Chain::parse(text)?;
            if chain.flavor() != Flavor::Strong {
                bail!("stabilizer classification takes a strong chain, got {text:?}");
            }
            let ids: Vec<StrongId> = chain
                .ids()
                .into_iter()
                .map(|id| StrongId::new(id).expect("parsed ids valid"))
                .collect();
            let analysis = analyze_product(&ids, MatrixSpace::D6);
            let stabilizer = is_stabilizer(&ids);
            let (destabilizer, spectrum_evidence) = match &analysis.factorization {
                SpectrumFactorization::ZeroOne { .. } => (
                    Some(analysis.rank_m_minus_i > analysis.rank_m_minus_i_sq),
                    None,
                ),
                SpectrumFactorization::Other { leftover } => (
                    None,
                    Some(format!(
                        "product of chain {text} has characteristic polynomial {:?} with \
                         leftover factor {leftover:?}, outside the claimed spectrum {{0, 1}}",
                        analysis.char_poly
                    )),
                ),
            };
            let evidence: Vec<String> = spectrum_evidence.clone().into_iter().collect();
            let body = match format {
                Format::Table => {
                    let mut out = String::new();
                    let _ = writeln!(out, "chain {chain}");
                    let _ = writeln!(out, "stabilizer (zero block product): {stabilizer}");
                    match destabilizer {
                        Some(flag) => {
                            let _ = writeln!(
                                out,
                                "destabilizer (rank drop at eigenvalue 1): {flag} \
                                 (rank(M-I) = {}, rank((M-I)^2) = {})",
                                analysis.rank_m_minus_i, analysis.rank_m_minus_i_sq
                            );
                        }
                        None => {
                            let _ = writeln!(out, "destabilizer test inapplicable: see stderr");
                        }
                    }
                    out
                }
                Format::Json => to_pretty(&json!({
                    "chain": chain.to_string(),
                    "stabilizer": stabilizer,
                    "destabilizer": destabilizer,
                    "analysis": analysis,
                    "spectrum_defect": spectrum_evidence,
                })),
                Format::Csv | Format::Dot => return unsupported(format, "stabilizer"),
            };
            Ok(CmdOut { body, evidence })
        }
        None => {
            let found = shortest_zero_product(depth);
            let body = match format {
                Format::Table => match &found {
                    Some(ids) => {
                        let chain = Chain::strong(ids).expect("found ids valid");
                        format!(
                            "shortest zero-product chain within length {depth}: {chain} \
                             (length {})\n",
                            ids.len()
                        )
                    }
                    None => format!("no zero-product chain within length {depth}\n"),
                },
                Format::Json => to_pretty(&json!({
                    "max_length": depth,
                    "chain": found.as_ref().map(|ids| {
                        Chain::strong(ids).expect("found ids valid").to_string()
                    }),
                    "length": found.as_ref().map(Vec::len),
                })),
                Format::Csv | Format::Dot => return unsupported(format, "stabilizer"),
            };
            Ok(CmdOut::conforming(body))
        }
    }
}

// ---------------------------------------------------------------------------
// verify-all
// ---------------------------------------------------------------------------

struct Section {
    name: &'static str,
    passed: bool,
    detail: String,
    /// Catalogue tag when the failure is a documented defect of the
    /// source material rather than an implementation issue.
    documented: Option<&'static str>,
    evidence: Option<String>,
}

impl Section {
    fn pass(name: &'static str, detail: String) -> Section {
        Section {
            name,
            passed: true,
            detail,
            documented: None,
            evidence: None,
        }
    }

    fn fail(name: &'static str, documented: Option<&'static str>, evidence: String) -> Section {
        Section {
            name,
            passed: false,
            detail: String::from("claim falsified"),
            documented,
            evidence: Some(evidence),
        }
    }
}

fn random_state(rng: &mut ChaCha8Rng, bound: i64) -> ExponentEnsemble {
    ExponentEnsemble::new(std::array::from_fn(|_| rng.gen_range(-bound..=bound)))
}

fn section_matrices() -> Section {
    let (q, q_inv) = build_q();
    let mut defects = Vec::new();
    if q != REFERENCE_Q || q_inv != REFERENCE_Q_INV {
        defects.push(String::from("conjugation pair"));
    }
    for (k, decomposition) in decompositions().iter().enumerate() {
        if build_b(StrongId::new(k as u8 + 1).unwrap()) != REFERENCE_B[k] {
            defects.push(format!("B{}", k + 1));
        }
        if decomposition.g != REFERENCE_G[k] || !decomposition.matches_reference {
            defects.push(format!("block decomposition {}", k + 1));
        }
    }
    match kernel_vectors() {
        Ok(report) if report.matches_reference => {}
        Ok(_) => defects.push(String::from("kernel vectors")),
        Err(err) => defects.push(err.to_string()),
    }
    if defects.is_empty() {
        Section::pass(
            "matrices",
            String::from("all generated matrices match the printed ones"),
        )
    } else {
        Section::fail("matrices", None, defects.join("; "))
    }
}

fn section_action() -> Section {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC3_0201);
    for _ in 0..10_000 {
        let state = random_state(&mut rng, 10);
        for id in StrongId::all() {
            if !verify_action(id, &state) {
                return Section::fail(
                    "action",
                    None,
                    format!("matrix action of B{} disagrees on {state}", id.get()),
                );
            }
        }
    }
    Section::pass(
        "action",
        String::from("matrix action matches the arbitrage map on 10000 random states"),
    )
}

fn section_key_graph() -> Section {
    match build_key_graph() {
        Ok(graph) => {
            let mismatches = graph.reference_mismatches();
            if !mismatches.is_empty() {
                return Section::fail("key-graph", None, format!("{mismatches:?}"));
            }
            if !check_octahedron(&reduce_key_graph(&graph)) {
                return Section::fail(
                    "key-graph",
                    None,
                    String::from("reduction is not the octahedron"),
                );
            }
            Section::pass(
                "key-graph",
                String::from("matches the printed figure; reduction is the octahedron"),
            )
        }
        Err(err) => Section::fail("key-graph", None, err.to_string()),
    }
}

fn section_norm_certificate() -> Section {
    let family: Vec<_> = decompositions().iter().map(|d| d.g).collect();
    let certificate = match check_norm_certificate(&family) {
        Ok(certificate) => certificate,
        Err(err) => return Section::fail("norm-certificate", None, err.to_string()),
    };
    if !certificate.valid() {
        return Section::fail(
            "norm-certificate",
            None,
            format!("vertex images escape: {:?}", certificate.violations),
        );
    }
    match hull_facets(&unit_ball_vertices()) {
        Ok(census)
            if census.quads == 6
                && census.triangles == 8
                && census.larger == 0
                && census.extreme.len() == 12
                && census.origin_interior() =>
        {
            Section::pass(
                "norm-certificate",
                String::from(
                    "all vertex images stay in the unit ball; census 6 quadrilaterals + 8 triangles",
                ),
            )
        }
        Ok(census) => Section::fail(
            "norm-certificate",
            None,
            format!(
                "census {} quads, {} triangles, {} larger, {} vertices",
                census.quads,
                census.triangles,
                census.larger,
                census.extreme.len()
            ),
        ),
        Err(err) => Section::fail("norm-certificate", None, err.to_string()),
    }
}

fn section_spectrum() -> Section {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA15);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=20usize);
        let ids: Vec<StrongId> = (0..len)
            .map(|_| StrongId::new(rng.gen_range(1..=12u8)).unwrap())
            .collect();
        for space in [MatrixSpace::G3, MatrixSpace::D6, MatrixSpace::B6] {
            let analysis = analyze_product(&ids, space);
            if let SpectrumFactorization::Other { leftover } = &analysis.factorization {
                return Section::fail(
                    "spectrum",
                    Some("spectrum-claim"),
                    format!(
                        "{space}-product of chain {:?} has characteristic polynomial {:?} \
                         (leftover {leftover:?}); shortest known counterexample: chain \
                         (5,1,4) with x^3 - x",
                        analysis.chain, analysis.char_poly
                    ),
                );
            }
        }
    }
    Section::pass(
        "spectrum",
        String::from("1000 random products have characteristic polynomial x^a (x-1)^b"),
    )
}

fn section_stabilizer() -> Section {
    let ids: Vec<StrongId> = [10u8, 3, 6]
        .iter()
        .map(|&id| StrongId::new(id).unwrap())
        .collect();
    if !is_stabilizer(&ids) {
        return Section::fail(
            "stabilizer",
            None,
            String::from("chain (10,3,6) does not have a zero block product"),
        );
    }
    let chain = Chain::strong(&[10, 3, 6]).expect("fixed ids valid");
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC3_0600);
    for _ in 0..100 {
        let state = random_state(&mut rng, 10);
        let (end, _) = apply_chain(&chain, state);
        if !end.is_balanced() {
            return Section::fail(
                "stabilizer",
                None,
                format!("chain (10,3,6) left {state} unbalanced at {end}"),
            );
        }
    }
    Section::pass(
        "stabilizer",
        String::from("chain (10,3,6) has a zero block product and balances 100 random states"),
    )
}

fn section_destabilizer() -> Section {
    let ids: Vec<StrongId> = [4u8, 6, 12]
        .iter()
        .map(|&id| StrongId::new(id).unwrap())
        .collect();
    let analysis = analyze_product(&ids, MatrixSpace::D6);
    let rank_drop = analysis.rank_m_minus_i > analysis.rank_m_minus_i_sq;
    if rank_drop {
        Section::pass(
            "destabilizer",
            String::from("chain (4,6,12) has a rank drop at eigenvalue 1"),
        )
    } else {
        Section::fail(
            "destabilizer",
            Some("destabilizer-example"),
            format!(
                "chain (4,6,12) has rank(M-I) = {} = rank((M-I)^2) = {}; its iteration \
                 stabilizes instead of diverging",
                analysis.rank_m_minus_i, analysis.rank_m_minus_i_sq
            ),
        )
    }
}

fn section_optimal_table(config: &SearchConfig) -> Section {
    match optimal_table(1, config) {
        Ok(table) => {
            let undocumented: Vec<String> = table
                .discrepancies
                .iter()
                .filter(|d| documented_table_tag(d).is_none())
                .map(|d| format!("{d:?}"))
                .collect();
            if undocumented.is_empty() {
                Section::pass(
                    "optimal-table",
                    format!(
                        "27 optimal chains recomputed; {} reference discrepancies, all \
                         documented misprints",
                        table.discrepancies.len()
                    ),
                )
            } else {
                Section::fail("optimal-table", None, undocumented.join("; "))
            }
        }
        Err(err) => Section::fail("optimal-table", None, err.to_string()),
    }
}

fn section_hypothesis(nu: i64, config: &SearchConfig) -> Section {
    match verify_hypothesis2(nu, config) {
        Ok(report) if report.verified => Section::pass(
            "hypothesis",
            format!(
                "all {} codes present at depth {}, exactly the two extreme codes missing \
                 one step earlier (instance nu = {nu})",
                report.expected_codes, report.complete_depth
            ),
        ),
        Ok(report) => Section::fail(
            "hypothesis",
            None,
            format!(
                "missing at depth {}: {:?}; missing at depth {}: {:?}",
                report.complete_depth,
                report.missing_at_complete,
                report.complete_depth - 1,
                report.missing_at_previous
            ),
        ),
        Err(err) => Section::fail("hypothesis", None, err.to_string()),
    }
}

fn section_product_example() -> Section {
    match prodex_cases(10) {
        Ok(cases) => match cases.iter().find(|case| !case.matches) {
            None => Section::pass(
                "product-example",
                String::from("all repetition counts reach the claimed state with every step active"),
            ),
            Some(case) => Section::fail(
                "product-example",
                Some("product-example-chain"),
                format!(
                    "n = {}: reached {} (expected {}), inactive steps {:?}",
                    case.n, case.end, case.expected, case.inactive_steps
                ),
            ),
        },
        Err(err) => Section::fail("product-example", None, err.to_string()),
    }
}

fn section_periodicity(pass_budget: usize) -> Section {
    match verify_prop32(START, pass_budget) {
        Ok(report) => Section::pass(
            "periodicity",
            format!(
                "32-step chain from {} has transient {} and period {}; {}",
                report.seed,
                report.transient,
                report.period,
                if report.all_ids_active {
                    "all 24 arbitrages fire on some pass"
                } else {
                    "not all 24 arbitrages fire"
                }
            ),
        ),
        Err(err) => Section::fail("periodicity", None, err.to_string()),
    }
}

fn section_axis(config: &SearchConfig) -> Section {
    match verify_victor_p(20, config) {
        Ok(report) if report.conforming => Section::pass(
            "axis-exclusion",
            format!(
                "no axis state with |n| >= 2 among {} states within depth 20",
                report.states_searched
            ),
        ),
        Ok(report) => Section::fail(
            "axis-exclusion",
            None,
            format!("{:?}", report.counterexamples),
        ),
        Err(err) => Section::fail("axis-exclusion", None, err.to_string()),
    }
}

fn section_growth(config: &SearchConfig) -> Section {
    match growth_stats(20, config) {
        Ok(report) => Section::pass(
            "growth",
            format!(
                "lambda_hat = {}, mu_hat = {}, mu_hat_balanced = {}",
                report.lambda_hat, report.mu_hat, report.mu_hat_balanced
            ),
        ),
        Err(err) => Section::fail("growth", None, err.to_string()),
    }
}

fn section_flavor_equivalence(config: &SearchConfig) -> Section {
    match compare_flavors(8, START, config) {
        Ok(comparison) if comparison.equal => Section::pass(
            "flavor-equivalence",
            format!(
                "weak and strong chains reach the same {} states within depth 8",
                comparison.strong_size
            ),
        ),
        Ok(comparison) => Section::fail(
            "flavor-equivalence",
            None,
            format!(
                "weak {} vs strong {}; separating state {:?}",
                comparison.weak_size, comparison.strong_size, comparison.difference
            ),
        ),
        Err(err) => Section::fail("flavor-equivalence", None, err.to_string()),
    }
}

fn cmd_verify_all(
    format: Format,
    nu: i64,
    config: &SearchConfig,
    pass_budget: usize,
) -> Result<CmdOut> {
    let sections = vec![
        section_matrices(),
        section_action(),
        section_key_graph(),
        section_norm_certificate(),
        section_spectrum(),
        section_stabilizer(),
        section_destabilizer(),
        section_optimal_table(config),
        section_hypothesis(nu, config),
        section_product_example(),
        section_periodicity(pass_budget),
        section_axis(config),
        section_flavor_equivalence(config),
        section_growth(config),
    ];
    let mut evidence = Vec::new();
    for section in &sections {
        if let Some(item) = &section.evidence {
            let documented = section
                .documented
                .map(|tag| format!(" [documented defect: {tag}]"))
                .unwrap_or_default();
            evidence.push(format!("section {}{documented}: {item}", section.name));
        }
    }
    let body = match format {
        Format::Table => {
            let mut out = String::new();
            for section in &sections {
                let status = if section.passed {
                    "PASS"
                } else if section.documented.is_some() {
                    "FAIL (documented defect)"
                } else {
                    "FAIL"
                };
                let _ = writeln!(out, "section {:18} {status}: {}", section.name, section.detail);
            }
            let failed = sections.iter().filter(|s| !s.passed).count();
            let _ = writeln!(
                out,
                "{} of {} sections conform",
                sections.len() - failed,
                sections.len()
            );
            out
        }
        Format::Json => {
            let rows: Vec<Value> = sections
                .iter()
                .map(|section| {
                    json!({
                        "name": section.name,
                        "passed": section.passed,
                        "detail": section.detail,
                        "documented_defect": section.documented,
                        "evidence": section.evidence,
                    })
                })
                .collect();
            to_pretty(&json!({
                "sections": rows,
                "conforming": evidence.is_empty(),
                "known_defect_catalogue": KNOWN_DISCREPANCIES
                    .iter()
                    .map(|d| json!({
                        "tag": d.tag,
                        "location": d.location,
                        "printed": d.printed,
                        "actual": d.actual,
                    }))
                    .collect::<Vec<Value>>(),
            }))
        }
        Format::Csv => {
            let mut out = String::from("section,status,detail\n");
            for section in &sections {
                let status = if section.passed {
                    "pass"
                } else if section.documented.is_some() {
                    "fail-documented"
                } else {
                    "fail"
                };
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    section.name,
                    status,
                    section.detail.replace(',', ";")
                );
            }
            out
        }
        Format::Dot => return unsupported(format, "verify-all"),
    };
    Ok(CmdOut { body, evidence })
}
