//! Per-symbol tile-set assembly and its checks.
//!
//! `synthesize` builds the enforcing tile set of a full symbol as the
//! union of the common tiles with the atomic sets and boundary pairs of
//! its deterministic components. The atomic tables are stored as a frozen
//! concrete fixture and cross-checked at load time against the generic
//! derivation in `blocks`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::blocks::{self, block_admissibility, closure, BlockType, Rule, T2BlockState};
use crate::error::TileError;
use crate::solver::{solve_with, Budget, MarkedPatch, Mode, Outcome, Region};
use crate::symbol::{Atom, Slot, Symbol};
use crate::tile::{catalogue, TileName, TileSet};

/// The frozen concrete fixture: all sixteen atomic sets and all 256
/// ordered boundary pairs, as canonical tile names.
static FIXTURE: &str = include_str!("../data/atomic_tables.json");

pub struct AtomicTables {
    atomic: BTreeMap<Atom, Vec<TileName>>,
    pairs: BTreeMap<(Atom, Atom), [TileName; 2]>,
}

fn parse_atom(s: &str) -> Option<Atom> {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != 4 {
        return None;
    }
    let mut found = None;
    for (i, c) in chars.iter().enumerate() {
        match c {
            '.' => {}
            '0'..='3' => {
                if found.is_some() {
                    return None;
                }
                found = Some((i, *c as u8 - b'0'));
            }
            _ => return None,
        }
    }
    let (i, d) = found?;
    Some(Atom::new(Slot::ALL[i], d))
}

fn load_fixture() -> AtomicTables {
    let v: serde_json::Value = serde_json::from_str(FIXTURE).expect("fixture parses");
    let mut atomic = BTreeMap::new();
    for (k, arr) in v["atomic"].as_object().expect("atomic map") {
        let atom = parse_atom(k).expect("fixture atom key");
        let tiles: Vec<TileName> = arr
            .as_array()
            .expect("tile list")
            .iter()
            .map(|s| s.as_str().unwrap().parse().expect("fixture tile name"))
            .collect();
        atomic.insert(atom, tiles);
    }
    let mut pairs = BTreeMap::new();
    for (k, arr) in v["pairs"].as_object().expect("pairs map") {
        let (pk, ck) = k.split_once("->").expect("pair key");
        let parent = parse_atom(pk).expect("parent atom");
        let child = parse_atom(ck).expect("child atom");
        let a = arr.as_array().unwrap();
        let t0: TileName = a[0].as_str().unwrap().parse().unwrap();
        let t1: TileName = a[1].as_str().unwrap().parse().unwrap();
        pairs.insert((parent, child), [t0, t1]);
    }
    AtomicTables { atomic, pairs }
}

/// The fixture, verified cell-by-cell against the generic derivation the
/// first time it is used. A mismatch aborts with the offending cell.
pub fn atomic_tables() -> &'static AtomicTables {
    static TABLES: OnceLock<AtomicTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let fixture = load_fixture();
        let derived = blocks::derive_atomics().expect("derivation runs");
        for atom in Atom::all() {
            let f: BTreeSet<&TileName> = fixture.atomic[&atom].iter().collect();
            let d: BTreeSet<&TileName> = derived.atomic[&atom].iter().collect();
            assert_eq!(
                f, d,
                "atomic table mismatch between fixture and derivation at {atom}"
            );
        }
        for parent in Atom::all() {
            for child in Atom::all() {
                let f: BTreeSet<&TileName> = fixture.pairs[&(parent, child)].iter().collect();
                let d = derived.pairs[&(parent, child)];
                let d: BTreeSet<&TileName> = d.iter().collect();
                assert_eq!(
                    f, d,
                    "pair table mismatch between fixture and derivation at {parent}->{child}"
                );
            }
        }
        fixture
    })
}

/// Tiles required by one atomic symbol.
pub fn atomic_tiles(atom: Atom) -> &'static [TileName] {
    &atomic_tables().atomic[&atom]
}

/// The boundary pair required when a child-atom supertile sits in a
/// parent-atom supertile.
pub fn pair_tiles(parent: Atom, child: Atom) -> &'static [TileName; 2] {
    &atomic_tables().pairs[&(parent, child)]
}

/// Assemble the tile set enforcing a full symbol: the common outward and
/// plain tiles plus the atomic sets and boundary pairs of each
/// deterministic component, deduplicated under congruence.
pub fn synthesize(sym: &Symbol) -> Result<TileSet, TileError> {
    if !sym.is_full() {
        return Err(TileError::WrongContext(format!(
            "synthesize needs a full symbol, got {sym}"
        )));
    }
    let mut names: Vec<TileName> = Vec::new();
    names.extend(catalogue("T+2")?.names().copied());
    names.extend(catalogue("T0")?.names().copied());
    for comp in sym.det_components().map_err(TileError::Parse)? {
        let atoms = comp.atoms();
        for a in &atoms {
            names.extend_from_slice(atomic_tiles(*a));
        }
        for p in &atoms {
            for c in &atoms {
                names.extend_from_slice(pair_tiles(*p, *c));
            }
        }
    }
    Ok(TileSet::from_names(&format!("T_{sym}"), names))
}

/// Check the relabelling law: the paired symbol's set is the 2-shift.
pub fn shift_law_check(sym: &Symbol) -> Result<bool, TileError> {
    let a = synthesize(&sym.partner())?;
    let b = synthesize(sym)?.shift(2, "shifted")?;
    Ok(a.tiles().collect::<Vec<_>>() == b.tiles().collect::<Vec<_>>())
}

/// One row of the nine-aperiodic-subsets table.
pub struct Theorem1Row {
    pub set: TileSet,
    pub admits: Vec<BlockType>,
    pub enforces: Vec<&'static str>,
}

/// The nine named subsets of the first catalogue with the systems they
/// enforce, each validated against its block-admissibility row.
pub fn theorem1_sets() -> Vec<Theorem1Row> {
    let t = |n: &str| catalogue(n).unwrap();
    let rows: Vec<(TileSet, Vec<&'static str>)> = vec![
        (t("TPi"), vec!["pi"]),
        (t("TPar"), vec!["par"]),
        (t("TXi"), vec!["xi"]),
        (t("TPibar"), vec!["par", "xi", "pibar"]),
        (t("TPi").union(&t("TPar"), "TPi+TPar"), vec!["pi", "par"]),
        (t("TPi").union(&t("TXi"), "TPi+TXi"), vec!["pi", "xi"]),
        (t("TPar").union(&t("TXi"), "TPar+TXi"), vec!["par", "xi"]),
        (
            t("TPi")
                .union(&t("TPar"), "x")
                .union(&t("TXi"), "TPi+TPar+TXi"),
            vec!["pi", "par", "xi"],
        ),
        (t("T1"), vec!["pi", "par", "xi", "pibar"]),
    ];
    rows.into_iter()
        .map(|(set, enforces)| {
            let admits = block_admissibility(&set);
            Theorem1Row {
                set,
                admits,
                enforces,
            }
        })
        .collect()
}

/// Tiles of `synthesize(sym)` never tallied by iterating the marked-block
/// substitution to the given depth. Expected empty from depth 3 on.
pub fn usage_check(sym: &Symbol, depth: u32) -> Result<Vec<TileName>, TileError> {
    if !sym.is_deterministic() {
        return Err(TileError::WrongContext(
            "usage_check needs a deterministic symbol".into(),
        ));
    }
    let full = synthesize(sym)?;
    let mut used: BTreeSet<TileName> = BTreeSet::new();
    // depth 0: nothing yet; depth 1: common tiles appear with the first
    // marked blocks; depth >= 2: atomic interiors and boundary pairs
    if depth >= 1 {
        used.extend(catalogue("T+2")?.names().copied());
        used.extend(catalogue("T0")?.names().copied());
    }
    if depth >= 2 {
        let mut frontier: Vec<T2BlockState> = Slot::ALL
            .iter()
            .map(|&slot| T2BlockState {
                slot,
                orient: sym.digits().unwrap()[slot.index()],
            })
            .collect();
        let mut seen: BTreeSet<T2BlockState> = frontier.iter().copied().collect();
        for _ in 2..=depth {
            let mut next = Vec::new();
            for st in frontier.drain(..) {
                let (children, tally) = blocks::t2_block_substitute(sym, st)?;
                used.extend(tally);
                for c in children {
                    if seen.insert(c) {
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
    }
    let unused: Vec<TileName> = full
        .names()
        .filter(|n| !used.contains(n))
        .copied()
        .collect();
    Ok(unused)
}

/// Context for building a marked supertile.
#[derive(Debug, Clone)]
pub enum SupertileContext {
    /// One of the first-catalogue rule sets, by closure.
    Rules(Vec<Rule>),
    /// A synthesized second-catalogue set.
    Symbol(Symbol),
}

/// Build the square-lattice realization of a marked supertile at the
/// requested level: level 1 is one 2x4 block, level 2 the four blocks of
/// a doubled domino. The layout is completed by the constraint solver
/// over the context's tile set, with the cornered sublattice pinned to
/// the even lattice; the first solution in canonical order is returned.
pub fn build_marked_supertile(
    ctx: &SupertileContext,
    level: u32,
) -> Result<MarkedPatch, TileError> {
    if !(1..=2).contains(&level) {
        return Err(TileError::WrongContext(format!(
            "no layout recipe for level {level}"
        )));
    }
    let set = match ctx {
        SupertileContext::Rules(rules) => closure(rules)?,
        SupertileContext::Symbol(sym) => synthesize(sym)?,
    };
    let (w, h) = match level {
        1 => (2usize, 4usize),
        _ => (4, 8),
    };
    let seed = |(x, y): (usize, usize), t: &crate::tile::Tile, _p: &crate::tile::Pose| -> bool {
        let want_corner = x % 2 == 0 && y % 2 == 0;
        t.cornered == want_corner
    };
    match solve_with(
        &set,
        &Region::free(w, h),
        Mode::First,
        Budget { nodes: 2_000_000 },
        Some(&seed),
    ) {
        Outcome::Sat(patch) => Ok(patch),
        Outcome::Unsat => Err(TileError::WrongContext(format!(
            "{} admits no {w}x{h} marked patch",
            set.name
        ))),
        Outcome::Timeout => Err(TileError::WrongContext(
            "layout search exhausted its budget".into(),
        )),
        Outcome::Count(_) | Outcome::All(_) => unreachable!(),
    }
}

/// Classify a 2x4 block patch by the structure digits on its boundary.
pub fn classify_block(patch: &MarkedPatch) -> Option<BlockType> {
    // count non-plain structure digits on the boundary ring
    use crate::tile::{E, N, S, W};
    let mut digits: Vec<u8> = Vec::new();
    let (xs, ys): (Vec<i64>, Vec<i64>) = (
        patch.cells.keys().map(|c| c.0).collect(),
        patch.cells.keys().map(|c| c.1).collect(),
    );
    let (x0, x1) = (*xs.iter().min()?, *xs.iter().max()?);
    let (y0, y1) = (*ys.iter().min()?, *ys.iter().max()?);
    for (&(x, y), (tile, pose)) in &patch.cells {
        let p = tile.placements()[*pose as usize];
        for (side, on_boundary) in [(N, y == y1), (E, x == x1), (S, y == y0), (W, x == x0)] {
            if on_boundary {
                let m = p.edges[side];
                if !(m.side == crate::mark::Side::Zero && m.class == 0) {
                    digits.push(m.class);
                }
            }
        }
    }
    digits.sort_unstable();
    match digits.as_slice() {
        [0, 0, 1, 1, ..] => Some(BlockType::U),
        [0, 1, 2, 3, ..] => Some(BlockType::J),
        [2, 2, 3, 3, ..] => Some(BlockType::H), // I shares the multiset
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::verify_patch;

    fn sym(s: &str) -> Symbol {
        s.parse().unwrap()
    }

    #[test]
    fn fixture_matches_derivation() {
        // forces the load-time cross-check of all 16 + 256 cells
        let t = atomic_tables();
        assert_eq!(t.atomic.len(), 16);
        assert_eq!(t.pairs.len(), 256);
    }

    #[test]
    fn atomic_examples_from_the_worked_listings() {
        let strs = |atom| -> BTreeSet<String> {
            atomic_tiles(atom).iter().map(|t| t.to_string()).collect()
        };
        let expect = |v: &[&str]| -> BTreeSet<String> { v.iter().map(|s| s.to_string()).collect() };
        assert_eq!(
            strs(Atom::new(Slot::T, 0)),
            expect(&["[00|32]", "[13|02]", "[10|+]", "[11|+]", "[12|+]"])
        );
        assert_eq!(
            strs(Atom::new(Slot::U, 2)),
            expect(&["[12|33]", "[13|31]", "[10|23]", "[11|21]"])
        );
        let p = pair_tiles(Atom::new(Slot::V, 1), Atom::new(Slot::U, 0));
        assert_eq!(p[0].to_string(), "[31|01]");
        assert_eq!(p[1].to_string(), "[-33|01]");
    }

    #[test]
    fn synthesize_sizes() {
        assert_eq!(synthesize(&sym("1101")).unwrap().len(), 67);
        assert_eq!(synthesize(&sym("1023")).unwrap().len(), 65);
        assert!(synthesize(&sym(".123")).is_err());
        // every full symbol's set contains the 35 common tiles
        let common = catalogue("T+2")
            .unwrap()
            .union(&catalogue("T0").unwrap(), "common");
        assert_eq!(common.len(), 35);
        for s in ["0000", "(01)231", "****"] {
            assert!(common.is_subset(&synthesize(&sym(s)).unwrap()));
        }
    }

    #[test]
    fn synthesize_monotone_and_componentwise() {
        let a = synthesize(&sym("1101")).unwrap();
        let b = synthesize(&sym("1(01)01")).unwrap();
        assert!(a.is_subset(&b));
        // union over components
        let mut names: BTreeSet<String> = BTreeSet::new();
        for c in sym("1(01)01").det_components().unwrap() {
            names.extend(synthesize(&c).unwrap().names().map(|n| n.to_string()));
        }
        let direct: BTreeSet<String> = b.names().map(|n| n.to_string()).collect();
        assert_eq!(names, direct);
    }

    #[test]
    fn shift_law_examples() {
        assert!(shift_law_check(&sym("0231")).unwrap());
        assert!(shift_law_check(&sym("1101")).unwrap());
        // a self-paired full symbol
        let s = sym("03(03)(12)");
        if s.partner() == s {
            assert!(shift_law_check(&s).unwrap());
        }
    }

    #[test]
    fn atomic_sets_mutually_exclusive() {
        for a in Atom::all() {
            for b in Atom::all() {
                if a == b {
                    continue;
                }
                let ta: BTreeSet<&TileName> = atomic_tiles(a).iter().collect();
                let tb: BTreeSet<&TileName> = atomic_tiles(b).iter().collect();
                assert!(
                    ta.difference(&tb).next().is_some() && tb.difference(&ta).next().is_some(),
                    "atomic sets {a} and {b} are not mutually exclusive"
                );
            }
        }
    }

    #[test]
    fn atomic_level_shift_law() {
        // the pairing relabels each atomic set and pair set by the 2-shift
        for a in Atom::all() {
            let shifted: BTreeSet<TileName> = atomic_tiles(a)
                .iter()
                .map(|t| t.shift(2).unwrap())
                .collect();
            let partner: BTreeSet<TileName> = atomic_tiles(a.partner()).iter().copied().collect();
            assert_eq!(shifted, partner, "atomic shift law at {a}");
            for b in Atom::all() {
                let shifted: BTreeSet<TileName> = pair_tiles(b, a)
                    .iter()
                    .map(|t| t.shift(2).unwrap())
                    .collect();
                let partner: BTreeSet<TileName> = pair_tiles(b.partner(), a.partner())
                    .iter()
                    .copied()
                    .collect();
                assert_eq!(shifted, partner, "pair shift law at {b}->{a}");
            }
        }
    }

    #[test]
    fn theorem1_rows() {
        let rows = theorem1_sets();
        assert_eq!(rows.len(), 9);
        let by_name: BTreeMap<String, &Theorem1Row> =
            rows.iter().map(|r| (r.set.name.clone(), r)).collect();
        let admits =
            |name: &str| -> Vec<&str> { by_name[name].admits.iter().map(|b| b.as_str()).collect() };
        assert_eq!(admits("TPi"), vec!["U", "I"]);
        assert_eq!(admits("TPar"), vec!["J"]);
        assert_eq!(admits("TPi+TPar"), vec!["U", "J", "I"]);
        assert_eq!(admits("T1"), vec!["U", "J", "I", "H"]);
        assert_eq!(by_name["TPibar"].enforces, vec!["par", "xi", "pibar"]);
    }

    #[test]
    fn usage_checks() {
        assert_eq!(
            usage_check(&sym("1101"), 3).unwrap(),
            Vec::<TileName>::new()
        );
        assert_eq!(
            usage_check(&sym("1023"), 3).unwrap(),
            Vec::<TileName>::new()
        );
        // at depth 0 every pair tile is still unused
        let unused = usage_check(&sym("1101"), 0).unwrap();
        for p in pair_tiles(Atom::new(Slot::S, 1), Atom::new(Slot::S, 1)) {
            assert!(unused.contains(p));
        }
        assert!(usage_check(&sym("(01)123"), 3).is_err());
    }

    #[test]
    fn marked_supertile_level1() {
        let patch = build_marked_supertile(
            &SupertileContext::Rules(vec![Rule::PibarEven, Rule::PibarOdd]),
            1,
        )
        .unwrap();
        assert_eq!(patch.len(), 8);
        let set = closure(&[Rule::PibarEven, Rule::PibarOdd]).unwrap();
        assert!(verify_patch(&set, &patch).is_empty());
    }
}
