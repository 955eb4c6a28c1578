//! Command-line front end: `present`, `check`, `count` and `oracle`
//! subcommands over a graph file, with text or JSON output and stable exit
//! codes (0 ok, 1 input error, 2 invariant violation, 3 cap exceeded).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complex::{cell_counts, euler_characteristic, ComplexError, World, DEFAULT_CAP};
use crate::graph::{parse_graph, EmbeddedGraph, GraphError};
use crate::homology;
use crate::morse::{self, MorseError};
use crate::notation;
use crate::pipeline::{prepare_graph, prepare_graph_auto_root, PipelineError};
use crate::presentation::{
    self, abelianization_rank, build_presentation, generator_count_formula,
    raag_commutation_graph, render_generator, render_relator, PresError,
};
use crate::rewrite::{self, RewriteEngine, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "morsebraid",
    about = "finite presentations of graph braid groups via discrete Morse theory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputKind {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubdivideMode {
    Auto,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Leftmost,
    Rightmost,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// graph file (see README for the format)
    pub graph: PathBuf,
    /// number of strands
    #[arg(short)]
    pub n: usize,
    /// override the root from the file; `auto` picks a tree leaf
    #[arg(long)]
    pub root: Option<String>,
    /// attach a fresh degree-one vertex when the root has higher degree
    #[arg(long)]
    pub pendant_root: bool,
    /// subdivide automatically (default) or demand a ready graph
    #[arg(long, value_enum, default_value = "auto")]
    pub subdivide: SubdivideMode,
    /// cell cap; enumeration beyond this aborts with exit 3
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// output format
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputKind,
    /// reduction strategy for boundary words
    #[arg(long, value_enum, default_value = "leftmost")]
    pub strategy: StrategyArg,
    /// stream every applied rewrite rule to stderr
    #[arg(long)]
    pub trace_rewrites: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// compute the braid group presentation
    Present(CommonArgs),
    /// validate the vector field, rewrite confluence and counting identities
    Check(CommonArgs),
    /// cell and critical-cell counts plus the counting formula
    Count(CommonArgs),
    /// independent homology oracle and cross-check
    Oracle(CommonArgs),
}

#[derive(Debug)]
pub struct RunError {
    pub exit: i32,
    pub message: String,
}

impl RunError {
    fn input(msg: impl Into<String>) -> Self {
        RunError {
            exit: EXIT_INPUT,
            message: msg.into(),
        }
    }
    fn invariant(msg: impl Into<String>) -> Self {
        RunError {
            exit: EXIT_INVARIANT,
            message: msg.into(),
        }
    }
}

fn classify_error(e: PresError) -> RunError {
    match e {
        PresError::Complex(ComplexError::CapExceeded { cap }) => RunError {
            exit: EXIT_CAP,
            message: format!("cell cap of {} exceeded", cap),
        },
        PresError::Morse(MorseError::Complex(ComplexError::CapExceeded { cap })) => RunError {
            exit: EXIT_CAP,
            message: format!("cell cap of {} exceeded", cap),
        },
        other => RunError::invariant(other.to_string()),
    }
}

fn load_world(args: &CommonArgs) -> Result<(World, EmbeddedGraph), RunError> {
    let text = std::fs::read_to_string(&args.graph)
        .map_err(|e| RunError::input(format!("cannot read {}: {}", args.graph.display(), e)))?;
    let (mut g, deleted) = parse_graph(&text).map_err(|e| RunError::input(e.to_string()))?;
    if args.n == 0 {
        return Err(RunError::input("strand count must be at least 1"));
    }
    let mut auto_root = false;
    if let Some(root) = &args.root {
        if root == "auto" {
            auto_root = true;
        } else {
            let idx = g
                .names
                .iter()
                .position(|n| n == root)
                .ok_or_else(|| RunError::input(format!("unknown root {}", root)))?;
            g.root = idx;
        }
    }
    if args.pendant_root {
        g.ensure_pendant_root(true)
            .map_err(|e| RunError::input(e.to_string()))?;
    }
    let forced: Option<Vec<(usize, usize)>> = if deleted.is_empty() {
        None
    } else {
        Some(deleted)
    };
    let subdivide = args.subdivide == SubdivideMode::Auto;
    let result = if auto_root {
        prepare_graph_auto_root(&g, args.n, forced.as_deref(), subdivide)
    } else {
        prepare_graph(&g, args.n, forced.as_deref(), subdivide)
    };
    result.map_err(|e| match e {
        PipelineError::Graph(GraphError::BadRoot(name, d)) => RunError::input(format!(
            "root {} has tree degree {}; pass --pendant-root or --root auto",
            name, d
        )),
        PipelineError::NotSubdivided { n } => RunError::input(format!(
            "graph is not sufficiently subdivided for {} strands (remove --subdivide off)",
            n
        )),
        other => RunError::input(other.to_string()),
    })
}

#[derive(Serialize)]
struct PresentationJson {
    convention: String,
    graph_hash: String,
    n: usize,
    euler_characteristic: i64,
    m: Vec<u64>,
    non_optimal: bool,
    generators: Vec<GeneratorJson>,
    relators: Vec<RelatorJson>,
    raag: Option<RaagJson>,
}

#[derive(Serialize)]
struct GeneratorJson {
    index: usize,
    cell: String,
    notation: Option<String>,
}

#[derive(Serialize)]
struct RelatorJson {
    pretty: String,
    word: Vec<i32>,
    halves: Option<[Vec<i32>; 2]>,
}

#[derive(Serialize)]
struct RaagJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    contains_k33: bool,
}

fn presentation_json(w: &World, p: &presentation::Presentation, chi: i64) -> PresentationJson {
    let raag = raag_commutation_graph(p).map(|g| RaagJson {
        vertices: g.n_vertices,
        contains_k33: presentation::contains_k33(&g),
        edges: g.edges,
    });
    PresentationJson {
        convention: p.convention.to_string(),
        graph_hash: p.graph_hash.clone(),
        n: p.n,
        euler_characteristic: chi,
        m: p.m.clone(),
        non_optimal: p.non_optimal,
        generators: p
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| GeneratorJson {
                index: i,
                cell: w.display_cell(&g.cell),
                notation: g.notation.as_ref().map(|nt| notation::render(w, nt)),
            })
            .collect(),
        relators: p
            .relators
            .iter()
            .map(|r| RelatorJson {
                pretty: render_relator(w, p, r),
                word: r.word.clone(),
                halves: r.halves.clone().map(|(a, b)| [a, b]),
            })
            .collect(),
        raag,
    }
}

fn run_present(args: &CommonArgs) -> Result<String, RunError> {
    let (w, _) = load_world(args)?;
    let p = build_presentation(&w, args.cap).map_err(classify_error)?;
    let chi = euler_characteristic(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let alt: i64 = p
        .m
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    if alt != chi {
        return Err(RunError::invariant(format!(
            "Euler identity failed: critical counts give {}, complex has {}",
            alt, chi
        )));
    }
    match args.output {
        OutputKind::Json => {
            let json = presentation_json(&w, &p, chi);
            Ok(serde_json::to_string_pretty(&json).expect("serializable"))
        }
        OutputKind::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "graph {} with n = {} strands", p.graph_hash, p.n);
            let _ = writeln!(out, "critical cells: {:?}, euler characteristic {}", p.m, chi);
            if p.relators.is_empty() {
                let _ = writeln!(out, "free group of rank {}", p.generators.len());
            }
            if p.non_optimal {
                let _ = writeln!(out, "non-optimal: true (non-tree input)");
            }
            let _ = writeln!(out, "generators ({}):", p.generators.len());
            for (i, g) in p.generators.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {:3}  {}  {}",
                    i,
                    render_generator(&w, g),
                    w.display_cell(&g.cell)
                );
            }
            let _ = writeln!(out, "relators ({}):", p.relators.len());
            for r in &p.relators {
                let _ = writeln!(out, "  {}", render_relator(&w, &p, r));
            }
            if let Some(g) = raag_commutation_graph(&p) {
                let _ = writeln!(
                    out,
                    "right-angled Artin shape: {} vertices, {} commuting pairs, K33 {}",
                    g.n_vertices,
                    g.edges.len(),
                    if presentation::contains_k33(&g) {
                        "present"
                    } else {
                        "absent"
                    }
                );
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct CheckJson {
    field: morse::FieldReport,
    confluence_passed: bool,
    confluence_overlaps: u64,
    formula: Option<u64>,
    m: Vec<u64>,
    euler_identity: bool,
    euler_characteristic: i64,
    classification_vs_inductive: Option<bool>,
    all_passed: bool,
}

fn run_check(args: &CommonArgs) -> Result<String, RunError> {
    let (w, _) = load_world(args)?;
    let field = morse::validate_field(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let crit = morse::critical_cells(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let chi = euler_characteristic(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let alt: i64 = crit
        .m
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    let mut engine = RewriteEngine::new(&w);
    engine.trace = args.trace_rewrites;
    let mut words = Vec::new();
    for c in crit.per_dim.get(2).into_iter().flatten() {
        let bw = w.boundary_word(c).map_err(|e| classify_error(e.into()))?;
        words.push(engine.word_from_cells(&bw));
    }
    let confluence = rewrite::check_local_confluence(&mut engine, &words, rewrite::DEFAULT_BUDGET)
        .map_err(|e| classify_error(e.into()))?;
    let formula = generator_count_formula(&w).ok();
    if let Some(f) = formula {
        if f != crit.m.get(1).copied().unwrap_or(0) {
            return Err(RunError::invariant(format!(
                "counting formula gives {} generators, enumeration gives {}",
                f, crit.m[1]
            )));
        }
    }
    let inductive_ok = if crit.total_cells <= 100_000 {
        let tags =
            morse::classify_inductive(&w, args.cap).map_err(|e| classify_error(e.into()))?;
        Some(
            tags.iter()
                .all(|(cell, tag)| morse::classify(&w, &cell.0) == *tag),
        )
    } else {
        None
    };
    let report = CheckJson {
        all_passed: field.all_passed()
            && confluence.passed()
            && alt == chi
            && inductive_ok != Some(false),
        confluence_passed: confluence.passed(),
        confluence_overlaps: confluence.overlaps_checked,
        formula,
        m: crit.m.clone(),
        euler_identity: alt == chi,
        euler_characteristic: chi,
        classification_vs_inductive: inductive_ok,
        field,
    };
    let rendered = match args.output {
        OutputKind::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputKind::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "field valid: {}", report.field.all_passed());
            let _ = writeln!(out, "confluence: {}", report.confluence_passed);
            let _ = writeln!(out, "euler identity: {}", report.euler_identity);
            let _ = writeln!(out, "m = {:?}, chi = {}", report.m, report.euler_characteristic);
            if let Some(f) = report.formula {
                let _ = writeln!(out, "counting formula: {} generators", f);
            }
            if let Some(ok) = report.classification_vs_inductive {
                let _ = writeln!(out, "classification matches inductive W: {}", ok);
            }
            out
        }
    };
    if report.all_passed {
        Ok(rendered)
    } else {
        Err(RunError::invariant(rendered))
    }
}

fn run_count(args: &CommonArgs) -> Result<String, RunError> {
    let (w, _) = load_world(args)?;
    let counts = cell_counts(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let crit = morse::critical_cells(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let chi = euler_characteristic(&w, args.cap).map_err(|e| classify_error(e.into()))?;
    let formula = generator_count_formula(&w);
    match args.output {
        OutputKind::Json => {
            let mut map = BTreeMap::new();
            map.insert("cells".to_string(), serde_json::json!(counts));
            map.insert("m".to_string(), serde_json::json!(crit.m));
            map.insert("euler_characteristic".to_string(), serde_json::json!(chi));
            map.insert(
                "generator_count_formula".to_string(),
                match &formula {
                    Ok(v) => serde_json::json!(v),
                    Err(e) => serde_json::json!({ "inapplicable": e.to_string() }),
                },
            );
            Ok(serde_json::to_string_pretty(&map).expect("serializable"))
        }
        OutputKind::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "cells per dimension: {:?}", counts);
            let _ = writeln!(out, "critical cells: {:?}", crit.m);
            let _ = writeln!(out, "euler characteristic: {}", chi);
            match formula {
                Ok(v) => {
                    let _ = writeln!(out, "counting formula: {}", v);
                }
                Err(e) => {
                    let _ = writeln!(out, "counting formula inapplicable: {}", e);
                }
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct OracleJson {
    homology: homology::HomologyReport,
    components: u64,
    m1: u64,
    abelianization_rank: u64,
    agrees: bool,
}

fn run_oracle(args: &CommonArgs) -> Result<String, RunError> {
    let (w, _) = load_world(args)?;
    let h = homology::h1_rank(&w, args.cap).map_err(oracle_error)?;
    let components = homology::connected_components(&w, args.cap).map_err(oracle_error)?;
    let p = build_presentation(&w, args.cap).map_err(classify_error)?;
    let ab = abelianization_rank(&p);
    let report = OracleJson {
        agrees: h.h1_rank == ab && components == 1 && h.h0_rank == 1,
        components,
        m1: p.m.get(1).copied().unwrap_or(0),
        abelianization_rank: ab,
        homology: h,
    };
    let rendered = match args.output {
        OutputKind::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        OutputKind::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "H0 rank {}, H1 rank {}, torsion {:?}",
                report.homology.h0_rank, report.homology.h1_rank, report.homology.torsion
            );
            let _ = writeln!(out, "components: {}", report.components);
            let _ = writeln!(
                out,
                "abelianization rank: {} (m1 = {})",
                report.abelianization_rank, report.m1
            );
            let _ = writeln!(out, "oracle agrees: {}", report.agrees);
            out
        }
    };
    if report.agrees {
        Ok(rendered)
    } else {
        Err(RunError::invariant(rendered))
    }
}

fn oracle_error(e: homology::HomologyError) -> RunError {
    match e {
        homology::HomologyError::Complex(ComplexError::CapExceeded { cap }) => RunError {
            exit: EXIT_CAP,
            message: format!("cell cap of {} exceeded", cap),
        },
        other => RunError::invariant(other.to_string()),
    }
}

/// Runs one parsed command, returning the report text or a coded error.
pub fn run(cli: &Cli) -> Result<String, RunError> {
    match &cli.command {
        Command::Present(args) => run_present(args),
        Command::Check(args) => run_check(args),
        Command::Count(args) => run_count(args),
        Command::Oracle(args) => run_oracle(args),
    }
}

#[allow(dead_code)]
fn strategy_of(a: StrategyArg) -> Strategy {
    match a {
        StrategyArg::Leftmost => Strategy::Leftmost,
        StrategyArg::Rightmost => Strategy::Rightmost,
    }
}
