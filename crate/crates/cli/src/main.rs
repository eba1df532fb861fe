use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tilings_core::blocks::{block_admissibility, closure, derive_atomics, Rule};
use tilings_core::engine::{
    self, decompositions, deflate, expand, periodicity_scan, Chooser, Deflation,
};
use tilings_core::render::{render_ascii, render_domino_svg, render_marked_svg, RenderSpec};
use tilings_core::solver::{
    count_tilings, solve, torus_search, Budget, MarkedPatch, Mode, Outcome, Region,
};
use tilings_core::synth::{
    build_marked_supertile, synthesize, theorem1_sets, usage_check, SupertileContext,
};
use tilings_core::{catalogue, census, Symbol, TileSet};

/// Toolkit for domino substitution tilings and the tile sets that
/// enforce them.
#[derive(Parser)]
#[command(name = "tilings", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for tabular results.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Seed for non-deterministic expansion choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count full substitution symbols up to equivalence.
    Census,
    /// Classify a symbol (full / deterministic / atomic / partial).
    Classify { symbol: String },
    /// List the atomic symbols of a symbol.
    Atoms { symbol: String },
    /// Test two symbols for equivalence and print canonical forms.
    Equiv { a: String, b: String },
    /// Assemble the tile set enforcing a full symbol.
    Synth {
        symbol: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand a symbol to a level-n supertile patch.
    Expand {
        symbol: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        choices: Option<PathBuf>,
        /// Require a deterministic symbol (no choices to resolve).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deflate a patch one level under a deterministic symbol.
    Deflate {
        symbol: String,
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count supertile parses of a patch under a symbol's components.
    Parses {
        symbol: String,
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Scan a patch for nonzero periods.
    Periods {
        #[arg(long)]
        r#in: PathBuf,
    },
    /// Run the marked-block closure for a rule list (pi,par,xi,pibar).
    Closure {
        #[arg(long)]
        rules: String,
    },
    /// Derive the atomic tables from the block calculus.
    DeriveAtomics {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report which blocks a tile-set file admits.
    Admissible {
        #[arg(long)]
        set: PathBuf,
    },
    /// Print one row (or all rows) of the nine-subsets table.
    Theorem1 {
        #[arg(long)]
        row: Option<String>,
    },
    /// Tiles of a synthesized set untouched by substitution to a depth.
    UsageCheck {
        symbol: String,
        #[arg(long, default_value_t = 3)]
        level: u32,
    },
    /// Build a marked supertile patch for a rule context or symbol.
    Supertile {
        /// A symbol like 1101, or a rule list like pibar.
        context: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a region with a tile set from a file or catalogue name.
    Solve {
        #[arg(long)]
        set: String,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        torus: bool,
        #[arg(long)]
        count: bool,
        /// Collect every solution and print how many there are.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a domino patch (or marked patch) to SVG or ASCII.
    Render {
        #[arg(long)]
        r#in: PathBuf,
        #[arg(long, default_value = "svg")]
        style: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the named tile catalogues.
    Catalogues,
}

fn parse_symbol(s: &str) -> Result<Symbol> {
    s.parse::<Symbol>()
        .map_err(|e| anyhow!("bad symbol {s:?}: {e}"))
}

fn load_set(spec: &str) -> Result<TileSet> {
    if let Ok(set) = catalogue(spec) {
        return Ok(set);
    }
    if let Ok(sym) = spec.parse::<Symbol>() {
        if sym.is_full() {
            return Ok(synthesize(&sym)?);
        }
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading tile set {spec}"))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    Ok(TileSet::from_json(&v)?)
}

fn write_out(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_patch(path: &PathBuf) -> Result<engine::DominoPatch> {
    let text = fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    Ok(engine::patch_from_json(&v)?)
}

fn patch_json(p: &MarkedPatch) -> serde_json::Value {
    serde_json::json!({
        "cells": p.to_records().iter().map(|r| serde_json::json!({
            "x": r.x, "y": r.y, "tile": r.tile.to_string(), "pose": r.pose,
        })).collect::<Vec<_>>()
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Census => {
            let c = census();
            if cli.format == Format::Json {
                println!(
                    "{}",
                    serde_json::json!({
                        "full": c.full,
                        "self_paired": c.self_paired,
                        "classes": c.classes,
                        "det_symbols": c.det_symbols,
                        "det_classes": c.det_classes,
                    })
                );
            } else {
                println!("full symbols        {:>8}", c.full);
                println!("self-paired         {:>8}", c.self_paired);
                println!("classes             {:>8}", c.classes);
                println!("deterministic       {:>8}", c.det_symbols);
                println!("deterministic classes {:>6}", c.det_classes);
            }
        }
        Command::Classify { symbol } => {
            let s = parse_symbol(&symbol)?;
            println!("{:?}", s.classify());
        }
        Command::Atoms { symbol } => {
            let s = parse_symbol(&symbol)?;
            for a in s.atoms() {
                println!("{a}");
            }
        }
        Command::Equiv { a, b } => {
            let (a, b) = (parse_symbol(&a)?, parse_symbol(&b)?);
            println!(
                "{} (canonical {} / {})",
                if a.equivalent(&b) {
                    "equivalent"
                } else {
                    "distinct"
                },
                a.canonical_rep(),
                b.canonical_rep()
            );
        }
        Command::Synth { symbol, out } => {
            let s = parse_symbol(&symbol)?;
            let set = synthesize(&s)?;
            let msg = format!("{} tiles in T_{s}\n", set.len());
            if let Some(p) = out {
                fs::write(&p, serde_json::to_string_pretty(&set.to_json())?)?;
                print!("{msg}");
            } else if cli.format == Format::Json {
                println!("{}", set.to_json());
            } else {
                print!("{msg}");
                for n in set.names() {
                    println!("  {n}");
                }
            }
        }
        Command::Expand {
            symbol,
            level,
            choices,
            all,
            out,
        } => {
            let s = parse_symbol(&symbol)?;
            if all && !s.is_deterministic() {
                bail!("--all expands the rule as-is and needs a deterministic symbol");
            }
            let chooser = if let Some(path) = choices {
                let list: Vec<u8> = fs::read_to_string(path)?
                    .split_whitespace()
                    .map(|t| t.parse())
                    .collect::<Result<_, _>>()?;
                Chooser::Choices(list)
            } else if let Some(seed) = cli.seed {
                Chooser::Seeded(seed)
            } else {
                Chooser::Deterministic
            };
            let p = expand(&s, level, &chooser)?;
            write_out(
                out,
                &serde_json::to_string_pretty(&engine::patch_to_json(&p))?,
            )?;
        }
        Command::Deflate { symbol, r#in, out } => {
            let s = parse_symbol(&symbol)?;
            let p = load_patch(&r#in)?;
            match deflate(&p, &s)? {
                Deflation::Parent(q) => write_out(
                    out,
                    &serde_json::to_string_pretty(&engine::patch_to_json(&q))?,
                )?,
                Deflation::NoDecomposition => {
                    println!("NO_DECOMPOSITION");
                    std::process::exit(1);
                }
            }
        }
        Command::Parses {
            symbol,
            r#in,
            level,
        } => {
            let s = parse_symbol(&symbol)?;
            let p = load_patch(&r#in)?;
            let comps = s.det_components()?;
            let parses = decompositions(&p, &comps, level);
            println!("{}", parses.len());
        }
        Command::Periods { r#in } => {
            let p = load_patch(&r#in)?;
            for (dx, dy) in periodicity_scan(&p) {
                println!("({dx}, {dy})");
            }
        }
        Command::Closure { rules } => {
            let rs = Rule::parse_list(&rules)?;
            let set = closure(&rs)?;
            println!("{} tiles", set.len());
            for n in set.names() {
                println!("  {n}");
            }
        }
        Command::DeriveAtomics { out } => {
            let tables = derive_atomics()?;
            // each table entry in the compact tile-set form
            let setify = |name: String, tiles: Vec<String>| serde_json::json!({"name": name, "context": "T2", "names": tiles});
            let mut atomic = serde_json::Map::new();
            for (a, tiles) in &tables.atomic {
                atomic.insert(
                    a.to_string(),
                    setify(
                        format!("T_{a}"),
                        tiles.iter().map(|t| t.to_string()).collect(),
                    ),
                );
            }
            let mut pairs = serde_json::Map::new();
            for ((p, c), pair) in &tables.pairs {
                pairs.insert(
                    format!("{p}->{c}"),
                    setify(
                        format!("T_{p}->{c}"),
                        pair.iter().map(|t| t.to_string()).collect(),
                    ),
                );
            }
            let v = serde_json::json!({"atomic": atomic, "pairs": pairs});
            write_out(out, &serde_json::to_string_pretty(&v)?)?;
        }
        Command::Admissible { set } => {
            let s = load_set(set.to_str().unwrap_or_default())?;
            for b in block_admissibility(&s) {
                println!("{}", b.as_str());
            }
        }
        Command::Theorem1 { row } => {
            for r in theorem1_sets() {
                if row.as_deref().is_none_or(|want| want == r.set.name) {
                    println!(
                        "{:<14} {:>3} tiles  admits {:?}  enforces {:?}",
                        r.set.name,
                        r.set.len(),
                        r.admits.iter().map(|b| b.as_str()).collect::<Vec<_>>(),
                        r.enforces
                    );
                }
            }
        }
        Command::UsageCheck { symbol, level } => {
            let s = parse_symbol(&symbol)?;
            let unused = usage_check(&s, level)?;
            if unused.is_empty() {
                println!("all tiles used by level {level}");
            } else {
                for n in unused {
                    println!("{n}");
                }
                std::process::exit(1);
            }
        }
        Command::Supertile {
            context,
            level,
            out,
        } => {
            let ctx = if let Ok(rules) = Rule::parse_list(&context) {
                SupertileContext::Rules(rules)
            } else {
                SupertileContext::Symbol(parse_symbol(&context)?)
            };
            let patch = build_marked_supertile(&ctx, level)?;
            write_out(out, &serde_json::to_string_pretty(&patch_json(&patch))?)?;
        }
        Command::Solve {
            set,
            width,
            height,
            torus,
            count,
            all,
            budget,
            out,
        } => {
            let tiles = load_set(&set)?;
            let budget = Budget { nodes: budget };
            let outcome = if torus {
                torus_search(&tiles, width, height, budget)
            } else if count {
                count_tilings(&tiles, &Region::free(width, height), budget)
            } else if all {
                solve(&tiles, &Region::free(width, height), Mode::All, budget)
            } else {
                solve(&tiles, &Region::free(width, height), Mode::First, budget)
            };
            match outcome {
                Outcome::Sat(patch) => {
                    write_out(out, &serde_json::to_string_pretty(&patch_json(&patch))?)?;
                    std::process::exit(0);
                }
                Outcome::Count(c) => {
                    println!("{c}");
                    std::process::exit(0);
                }
                Outcome::All(patches) => {
                    if patches.is_empty() {
                        println!("UNSAT");
                        std::process::exit(1);
                    }
                    println!("{} solutions", patches.len());
                    std::process::exit(0);
                }
                Outcome::Unsat => {
                    println!("{}", if torus { "NONE" } else { "UNSAT" });
                    std::process::exit(1);
                }
                Outcome::Timeout => {
                    println!("TIMEOUT");
                    std::process::exit(2);
                }
            }
        }
        Command::Render { r#in, style, out } => {
            let text = fs::read_to_string(&r#in)?;
            let v: serde_json::Value = serde_json::from_str(&text)?;
            let spec = RenderSpec::default();
            let rendered = if v.get("dominoes").is_some() {
                let p = engine::patch_from_json(&v)?;
                match style.as_str() {
                    "ascii" => render_ascii(&p),
                    _ => render_domino_svg(&p, &spec),
                }
            } else if let Some(cells) = v.get("cells") {
                let records: Vec<tilings_core::solver::PlacedTile> = cells
                    .as_array()
                    .ok_or_else(|| anyhow!("cells must be an array"))?
                    .iter()
                    .map(|c| {
                        Ok(tilings_core::solver::PlacedTile {
                            x: c["x"].as_i64().unwrap_or_default(),
                            y: c["y"].as_i64().unwrap_or_default(),
                            tile: c["tile"]
                                .as_str()
                                .ok_or_else(|| anyhow!("tile name"))?
                                .parse()?,
                            pose: c["pose"].as_u64().unwrap_or_default() as u8,
                        })
                    })
                    .collect::<Result<_>>()?;
                let patch = MarkedPatch::from_records(&records)?;
                render_marked_svg(&patch, &spec)
            } else {
                bail!("unrecognized patch file");
            };
            write_out(out, &rendered)?;
        }
        Command::Catalogues => {
            for name in tilings_core::tile::CATALOGUE_NAMES {
                let set = catalogue(name)?;
                println!("{name:<8} {:>3} tiles ({})", set.len(), set.context());
            }
        }
    }
    Ok(())
}
