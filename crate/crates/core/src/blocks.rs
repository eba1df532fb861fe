//! The marked-block substitution calculus.
//!
//! Substituting on marked 2x4 blocks, starting from a generic block and
//! tallying the crossing tiles that appear, yields exactly the tile sets
//! that each substitution rule requires. The productions are transcribed
//! data; the evaluator is a generic fixed point over block states.
//!
//! The same machinery, refined with framing digits, derives the atomic
//! tile tables of the second catalogue from the generic templates, the
//! frame variables and the end-marking table, independently of the
//! transcribed per-atom fixtures.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::TileError;
use crate::mark::{frame_vars, FramingCode};
use crate::symbol::{Atom, Slot, Symbol};
use crate::tile::{catalogue, ColClass, RowClass, TileName, TileSet};

/// The four block types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockType {
    U,
    J,
    I,
    H,
}

impl BlockType {
    pub const ALL: [BlockType; 4] = [BlockType::U, BlockType::J, BlockType::I, BlockType::H];

    pub fn as_str(&self) -> &'static str {
        match self {
            BlockType::U => "U",
            BlockType::J => "J",
            BlockType::I => "I",
            BlockType::H => "H",
        }
    }
}

/// A marking class appearing as a block argument: the plain vertical
/// marking, or one of the structure digits, possibly reversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockArg {
    pub class: ArgClass,
    pub reversed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArgClass {
    Plain,
    Digit(u8),
}

impl BlockArg {
    pub const PLUS: BlockArg = BlockArg {
        class: ArgClass::Plain,
        reversed: false,
    };

    pub fn digit(d: u8) -> BlockArg {
        BlockArg {
            class: ArgClass::Digit(d),
            reversed: false,
        }
    }

    pub fn negated(&self) -> BlockArg {
        BlockArg {
            class: self.class,
            reversed: !self.reversed,
        }
    }
}

/// A marked block: type plus the undetermined end marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockState {
    pub btype: BlockType,
    pub arg: BlockArg,
}

/// The fixed markings `i..ix` of each block type. Position `ii` is the
/// generic argument and is excluded here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkingFrame {
    /// positions i, iii, iv, v, vi, vii, viii, ix in order
    pub fixed: [FramePos; 8],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FramePos {
    Plus,
    Digit(u8),
}

pub fn frame_assignment(btype: BlockType) -> MarkingFrame {
    use FramePos::{Digit, Plus};
    let fixed = match btype {
        // i = iii = iv = vii = +; v = vi = 1; viii = ix = 0
        BlockType::U => [
            Plus,
            Plus,
            Plus,
            Digit(1),
            Digit(1),
            Plus,
            Digit(0),
            Digit(0),
        ],
        // i = iii = v = vii = +; iv = 3; vi = 0; viii = 1; ix = 2
        BlockType::J => [
            Plus,
            Plus,
            Digit(3),
            Plus,
            Digit(0),
            Plus,
            Digit(1),
            Digit(2),
        ],
        // i = iii = v = vi = +; iv = vii = 2; viii = ix = 3
        BlockType::I => [
            Plus,
            Plus,
            Digit(2),
            Plus,
            Plus,
            Digit(2),
            Digit(3),
            Digit(3),
        ],
        // i = iii = 2; iv = vii = viii = ix = +; v = vi = 3
        BlockType::H => [
            Digit(2),
            Digit(2),
            Plus,
            Digit(3),
            Digit(3),
            Plus,
            Plus,
            Plus,
        ],
    };
    MarkingFrame { fixed }
}

// ---------------------------------------------------------------------------
// first-catalogue productions

/// Which rule a production belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Pi,
    Par,
    Xi,
    /// The framed rule splits by whether the placement preserves or
    /// reverses left and right.
    PibarEven,
    PibarOdd,
}

impl Rule {
    pub fn parse_list(s: &str) -> Result<Vec<Rule>, TileError> {
        let mut out = Vec::new();
        for part in s.split(',') {
            match part.trim() {
                "pi" => out.push(Rule::Pi),
                "par" => out.push(Rule::Par),
                "xi" => out.push(Rule::Xi),
                "pibar" => {
                    out.push(Rule::PibarEven);
                    out.push(Rule::PibarOdd);
                }
                other => {
                    return Err(TileError::UnknownCatalogue(format!("rule {other:?}")));
                }
            }
        }
        Ok(out)
    }
}

/// A tally entry: a crossing-tile name schema, possibly involving the
/// block argument `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tally {
    /// A concrete first-catalogue crossing tile `[hv]`.
    Fixed(RowClass, ColClass),
    /// `[h x]`: row class with the block argument as column.
    Arg(RowClass),
}

/// A child entry: block type with either a concrete argument or the
/// parent's argument (possibly negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Child {
    Concrete(BlockType, BlockArg),
    PassArg(BlockType, bool),
}

struct Production {
    rule: Rule,
    btype: BlockType,
    children: &'static [Child],
    tally: &'static [Tally],
}

use self::ArgClass as AC;
use self::Child::{Concrete, PassArg};
use self::Tally::{Arg, Fixed};

const fn carg(d: u8) -> BlockArg {
    BlockArg {
        class: AC::Digit(d),
        reversed: false,
    }
}
const PLUS: BlockArg = BlockArg {
    class: AC::Plain,
    reversed: false,
};

/// The displayed productions, one table row per (rule, block type).
static PRODUCTIONS: &[Production] = &[
    // U(x) -> U(+) I(x) I(-x) ; [11] [-0] [-1] [1+] [-+] [0x]
    Production {
        rule: Rule::Pi,
        btype: BlockType::U,
        children: &[
            Concrete(BlockType::U, PLUS),
            PassArg(BlockType::I, false),
            PassArg(BlockType::I, true),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C1),
            Fixed(RowClass::Rm, ColClass::C0),
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R0),
        ],
    },
    // I(x) -> U(2) I(x) I(-x) ; [-3] [1+] [-+] [3x] [-3x]
    Production {
        rule: Rule::Pi,
        btype: BlockType::I,
        children: &[
            Concrete(BlockType::U, carg(2)),
            PassArg(BlockType::I, false),
            PassArg(BlockType::I, true),
        ],
        tally: &[
            Fixed(RowClass::Rm, ColClass::C3),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
        ],
    },
    // J(x) -> J(0) J(+) ; [03] [0+] [-1] [-2] [-3] [-+] [1x] [3x] [-3x] [-x]
    Production {
        rule: Rule::Par,
        btype: BlockType::J,
        children: &[
            Concrete(BlockType::J, carg(0)),
            Concrete(BlockType::J, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R0, ColClass::C3),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::Rm, ColClass::C2),
            Fixed(RowClass::Rm, ColClass::C3),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R1),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // U(x) -> U(+) H(0) ; [11] [-1] [1+] [-+] [0x] [3x] [-3x] [-x]
    Production {
        rule: Rule::Xi,
        btype: BlockType::U,
        children: &[
            Concrete(BlockType::U, PLUS),
            Concrete(BlockType::H, carg(0)),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C1),
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R0),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // H(x) -> U(+) H(+) ; [12] [13] [-2] [-3] [3x] [-3x] [-x]
    Production {
        rule: Rule::Xi,
        btype: BlockType::H,
        children: &[Concrete(BlockType::U, PLUS), Concrete(BlockType::H, PLUS)],
        tally: &[
            Fixed(RowClass::R1, ColClass::C2),
            Fixed(RowClass::R1, ColClass::C3),
            Fixed(RowClass::Rm, ColClass::C2),
            Fixed(RowClass::Rm, ColClass::C3),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // H(x) -> J(2) J(3) H(+) U(+) ; [12] [13] [-2] [-3] [0+] [-+] [3x] [-3x] [-x]
    Production {
        rule: Rule::PibarEven,
        btype: BlockType::H,
        children: &[
            Concrete(BlockType::J, carg(2)),
            Concrete(BlockType::J, carg(3)),
            Concrete(BlockType::H, PLUS),
            Concrete(BlockType::U, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C2),
            Fixed(RowClass::R1, ColClass::C3),
            Fixed(RowClass::Rm, ColClass::C2),
            Fixed(RowClass::Rm, ColClass::C3),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // U(x) -> J(1) J(+) H(0) U(+) ; [11] [-1] [0+] [1+] [-+] [0x] [3x] [-3x] [-x]
    Production {
        rule: Rule::PibarEven,
        btype: BlockType::U,
        children: &[
            Concrete(BlockType::J, carg(1)),
            Concrete(BlockType::J, PLUS),
            Concrete(BlockType::H, carg(0)),
            Concrete(BlockType::U, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C1),
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R0),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // d in {0,2}: J(x) -> J(0) J(+) H(2) U(3) ; [-1] [0+] [1+] [-+] [1x] [3x] [-3x] [-x]
    Production {
        rule: Rule::PibarEven,
        btype: BlockType::J,
        children: &[
            Concrete(BlockType::J, carg(0)),
            Concrete(BlockType::J, PLUS),
            Concrete(BlockType::H, carg(2)),
            Concrete(BlockType::U, carg(3)),
        ],
        tally: &[
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R1),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // the H and U rows hold irrespective of the placement parity
    Production {
        rule: Rule::PibarOdd,
        btype: BlockType::H,
        children: &[
            Concrete(BlockType::J, carg(2)),
            Concrete(BlockType::J, carg(3)),
            Concrete(BlockType::H, PLUS),
            Concrete(BlockType::U, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C2),
            Fixed(RowClass::R1, ColClass::C3),
            Fixed(RowClass::Rm, ColClass::C2),
            Fixed(RowClass::Rm, ColClass::C3),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    Production {
        rule: Rule::PibarOdd,
        btype: BlockType::U,
        children: &[
            Concrete(BlockType::J, carg(1)),
            Concrete(BlockType::J, PLUS),
            Concrete(BlockType::H, carg(0)),
            Concrete(BlockType::U, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R1, ColClass::C1),
            Fixed(RowClass::Rm, ColClass::C1),
            Fixed(RowClass::R0, ColClass::Plus),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R0),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
    // d in {1,3}: J(x) -> J(+) H(1) U(+)
    //   ; [03] [10] [-0] [-2] [-3] [1+] [-+] [1x] [3x] [-3x] [-x]
    // The display lists one child fewer than the even case: the two J
    // children coincide as J(+) under the reversed placement.
    Production {
        rule: Rule::PibarOdd,
        btype: BlockType::J,
        children: &[
            Concrete(BlockType::J, PLUS),
            Concrete(BlockType::H, carg(1)),
            Concrete(BlockType::U, PLUS),
        ],
        tally: &[
            Fixed(RowClass::R0, ColClass::C3),
            Fixed(RowClass::R1, ColClass::C0),
            Fixed(RowClass::Rm, ColClass::C0),
            Fixed(RowClass::Rm, ColClass::C2),
            Fixed(RowClass::Rm, ColClass::C3),
            Fixed(RowClass::R1, ColClass::Plus),
            Fixed(RowClass::Rm, ColClass::Plus),
            Arg(RowClass::R1),
            Arg(RowClass::R3),
            Arg(RowClass::Rm3),
            Arg(RowClass::Rm),
        ],
    },
];

/// Resolve `[h x]` to a canonical tile name for a concrete argument.
///
/// A reversed argument flips the sided rows 3 <-> -3; rows 0, 1 and the
/// plain row absorb the reversal into tile congruence. Reversed arguments
/// never reach row 1 in any production (the orientation restriction on
/// the `(-1)(+2)` marking).
fn resolve_arg_tile(h: RowClass, x: BlockArg) -> TileName {
    let h = if x.reversed {
        match h {
            RowClass::R3 => RowClass::Rm3,
            RowClass::Rm3 => RowClass::R3,
            RowClass::R1 => panic!("reversed argument on the asymmetric row"),
            other => other,
        }
    } else {
        h
    };
    let v = match x.class {
        ArgClass::Plain => ColClass::Plus,
        ArgClass::Digit(0) => ColClass::C0,
        ArgClass::Digit(1) => ColClass::C1,
        ArgClass::Digit(2) => ColClass::C2,
        ArgClass::Digit(3) => ColClass::C3,
        ArgClass::Digit(_) => unreachable!(),
    };
    TileName::Hv { h, v }
}

/// Apply one production to a block state.
pub fn block_substitute(
    rule: Rule,
    st: BlockState,
) -> Result<(Vec<BlockState>, Vec<TileName>), TileError> {
    let prod = PRODUCTIONS
        .iter()
        .find(|p| p.rule == rule && p.btype == st.btype)
        .ok_or_else(|| {
            TileError::WrongContext(format!(
                "rule {rule:?} does not apply to block type {}",
                st.btype.as_str()
            ))
        })?;
    let children = prod
        .children
        .iter()
        .map(|c| match *c {
            Concrete(bt, arg) => BlockState { btype: bt, arg },
            PassArg(bt, negate) => BlockState {
                btype: bt,
                arg: if negate { st.arg.negated() } else { st.arg },
            },
        })
        .collect();
    let tally = prod
        .tally
        .iter()
        .map(|t| match *t {
            Fixed(h, v) => TileName::Hv { h, v }.canonical(),
            Arg(h) => resolve_arg_tile(h, st.arg).canonical(),
        })
        .collect();
    Ok((children, tally))
}

/// Least fixed point of `block_substitute` over reachable states, uniting
/// tallies with the outward tiles.
pub fn closure(rules: &[Rule]) -> Result<TileSet, TileError> {
    // generic seeds: every block type a rule of the set applies to
    let mut frontier: Vec<BlockState> = Vec::new();
    let mut seen: BTreeSet<BlockState> = BTreeSet::new();
    let mut generic_types: BTreeSet<BlockType> = BTreeSet::new();
    for p in PRODUCTIONS {
        if rules.contains(&p.rule) {
            generic_types.insert(p.btype);
        }
    }
    // A generic block argument is tracked symbolically: apply productions
    // to the generic state but instantiate `[h x]` only for the concrete
    // arguments that actually arise, which is what makes the closure halt.
    let mut names: BTreeSet<TileName> = BTreeSet::new();
    for &bt in &generic_types {
        for rule in rules {
            if let Ok((children, tally)) = block_substitute_generic(*rule, bt) {
                for c in children {
                    if seen.insert(c) {
                        frontier.push(c);
                    }
                }
                names.extend(tally);
            }
        }
    }
    while let Some(st) = frontier.pop() {
        for rule in rules {
            let Ok((children, tally)) = block_substitute(*rule, st) else {
                continue;
            };
            for c in children {
                if seen.insert(c) {
                    frontier.push(c);
                }
            }
            names.extend(tally);
        }
    }
    let outward = catalogue("T+")?;
    let mut all: Vec<TileName> = outward.names().copied().collect();
    all.extend(names);
    Ok(TileSet::from_names("closure", all))
}

/// Generic form: children of X(x) with the constant tally entries only;
/// argument-dependent entries wait for concrete arguments.
fn block_substitute_generic(
    rule: Rule,
    btype: BlockType,
) -> Result<(Vec<BlockState>, Vec<TileName>), TileError> {
    let prod = PRODUCTIONS
        .iter()
        .find(|p| p.rule == rule && p.btype == btype)
        .ok_or_else(|| TileError::WrongContext("inapplicable".into()))?;
    let children = prod
        .children
        .iter()
        .filter_map(|c| match *c {
            Concrete(bt, arg) => Some(BlockState { btype: bt, arg }),
            PassArg(..) => None,
        })
        .collect();
    let tally = prod
        .tally
        .iter()
        .filter_map(|t| match *t {
            Fixed(h, v) => Some(TileName::Hv { h, v }.canonical()),
            Arg(_) => None,
        })
        .collect();
    Ok((children, tally))
}

/// The block types whose tile sets are contained in `tiles`.
pub fn block_admissibility(tiles: &TileSet) -> Vec<BlockType> {
    let mut out = Vec::new();
    for bt in BlockType::ALL {
        let set = catalogue(match bt {
            BlockType::U => "TU",
            BlockType::J => "TJ",
            BlockType::I => "TI",
            BlockType::H => "TH",
        })
        .expect("block set");
        if set.is_subset(tiles) {
            out.push(bt);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// second-catalogue calculus

/// Orientation classes of a vertical marking, used to read off the end
/// digit of a boundary pair: `+-` or `+0` give 0, `++` gives 1, `-+` or
/// `-0` give 2, `--` gives 3.
pub fn y_of(dir_out: bool, side: i8) -> u8 {
    match (dir_out, side) {
        (true, -1) | (true, 0) => 0,
        (true, 1) => 1,
        (false, 1) | (false, 0) => 2,
        (false, -1) => 3,
        _ => unreachable!(),
    }
}

/// Role of a framing digit relative to a child orientation `d`:
/// the generic variables d, b, q, p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameVar {
    D,
    B,
    Q,
    P,
}

impl FrameVar {
    pub fn instantiate(&self, d: u8) -> u8 {
        let d = FramingCode::new(d);
        let (b, q, p) = frame_vars(d);
        match self {
            FrameVar::D => d.value(),
            FrameVar::B => b.value(),
            FrameVar::Q => q.value(),
            FrameVar::P => p.value(),
        }
    }
}

/// Generic template of one atomic tile set: tiles `[row y | col w]` whose
/// horizontal framing digit is a frame variable of the child orientation
/// and whose vertical marking is fixed by the slot's quarter.
struct AtomicTemplate {
    slot: Slot,
    entries: &'static [(RowClass, FrameVar, ColClass, Option<u8>)],
}

/// The generic atomic table. Verticals carry the canonical quarter
/// framing of each slot: 0 for the first corner, 2 for the second, 1 and
/// 3 for the remaining pair.
static ATOMIC_TEMPLATES: &[AtomicTemplate] = &[
    AtomicTemplate {
        slot: Slot::S,
        entries: &[
            (RowClass::R1, FrameVar::Q, ColClass::C0, Some(0)),
            (RowClass::R0, FrameVar::B, ColClass::C3, Some(0)),
            (RowClass::R1, FrameVar::D, ColClass::Plus, None),
            (RowClass::R1, FrameVar::B, ColClass::Plus, None),
            (RowClass::R1, FrameVar::P, ColClass::Plus, None),
        ],
    },
    AtomicTemplate {
        slot: Slot::T,
        entries: &[
            (RowClass::R0, FrameVar::D, ColClass::C3, Some(2)),
            (RowClass::R1, FrameVar::P, ColClass::C0, Some(2)),
            (RowClass::R1, FrameVar::D, ColClass::Plus, None),
            (RowClass::R1, FrameVar::B, ColClass::Plus, None),
            (RowClass::R1, FrameVar::Q, ColClass::Plus, None),
        ],
    },
    AtomicTemplate {
        slot: Slot::U,
        entries: &[
            (RowClass::R1, FrameVar::D, ColClass::C3, Some(3)),
            (RowClass::R1, FrameVar::B, ColClass::C3, Some(1)),
            (RowClass::R1, FrameVar::Q, ColClass::C2, Some(3)),
            (RowClass::R1, FrameVar::P, ColClass::C2, Some(1)),
        ],
    },
    AtomicTemplate {
        slot: Slot::V,
        entries: &[
            (RowClass::R1, FrameVar::Q, ColClass::C1, Some(1)),
            (RowClass::R1, FrameVar::P, ColClass::C1, Some(3)),
            (RowClass::R1, FrameVar::D, ColClass::Plus, None),
            (RowClass::R1, FrameVar::B, ColClass::Plus, None),
        ],
    },
];

/// Generic template of one boundary-pair cell: for a parent atom
/// `(slot, digit)` and a child slot, the end digit role of the child and
/// the vertical marking the pair crosses (`None` for the plain column).
struct PairTemplate {
    parent_slot: Slot,
    parent_digit: u8,
    cells: [(FrameVar, Option<(ColClass, u8)>); 4],
}

use ColClass as CC;

/// The generic pair table: sixteen parent atoms by four child slots.
/// Verticals carry the parent-quarter framing; the end digit is the
/// child's own orientation or its `b` variable, according to the
/// orientation and direction of the crossed marking.
static PAIR_TEMPLATES: &[PairTemplate] = &[
    PairTemplate {
        parent_slot: Slot::S,
        parent_digit: 0,
        cells: [
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C0, 0))),
            (FrameVar::B, Some((CC::C2, 0))),
            (FrameVar::D, Some((CC::C3, 0))),
        ],
    },
    PairTemplate {
        parent_slot: Slot::S,
        parent_digit: 1,
        cells: [
            (FrameVar::D, None),
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C1, 0))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::S,
        parent_digit: 2,
        cells: [
            (FrameVar::D, Some((CC::C0, 0))),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C2, 0))),
            (FrameVar::B, Some((CC::C3, 0))),
        ],
    },
    PairTemplate {
        parent_slot: Slot::S,
        parent_digit: 3,
        cells: [
            (FrameVar::D, None),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C1, 0))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::T,
        parent_digit: 0,
        cells: [
            (FrameVar::D, None),
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C1, 2))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::T,
        parent_digit: 1,
        cells: [
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C0, 2))),
            (FrameVar::B, Some((CC::C2, 2))),
            (FrameVar::D, Some((CC::C3, 2))),
        ],
    },
    PairTemplate {
        parent_slot: Slot::T,
        parent_digit: 2,
        cells: [
            (FrameVar::D, None),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C1, 2))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::T,
        parent_digit: 3,
        cells: [
            (FrameVar::D, Some((CC::C0, 2))),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C2, 2))),
            (FrameVar::B, Some((CC::C3, 2))),
        ],
    },
    PairTemplate {
        parent_slot: Slot::U,
        parent_digit: 0,
        cells: [
            (FrameVar::D, Some((CC::C3, 3))),
            (FrameVar::B, Some((CC::C2, 3))),
            (FrameVar::D, None),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::U,
        parent_digit: 1,
        cells: [
            (FrameVar::D, Some((CC::C3, 1))),
            (FrameVar::B, Some((CC::C2, 1))),
            (FrameVar::D, None),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::U,
        parent_digit: 2,
        cells: [
            (FrameVar::D, Some((CC::C2, 3))),
            (FrameVar::B, Some((CC::C3, 3))),
            (FrameVar::D, None),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::U,
        parent_digit: 3,
        cells: [
            (FrameVar::D, Some((CC::C2, 1))),
            (FrameVar::B, Some((CC::C3, 1))),
            (FrameVar::D, None),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::V,
        parent_digit: 0,
        cells: [
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C1, 1))),
            (FrameVar::B, Some((CC::C0, 3))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::V,
        parent_digit: 1,
        cells: [
            (FrameVar::D, None),
            (FrameVar::B, Some((CC::C1, 3))),
            (FrameVar::B, Some((CC::C0, 1))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::V,
        parent_digit: 2,
        cells: [
            (FrameVar::D, Some((CC::C1, 1))),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C0, 3))),
            (FrameVar::D, None),
        ],
    },
    PairTemplate {
        parent_slot: Slot::V,
        parent_digit: 3,
        cells: [
            (FrameVar::D, Some((CC::C1, 3))),
            (FrameVar::D, None),
            (FrameVar::D, Some((CC::C0, 1))),
            (FrameVar::D, None),
        ],
    },
];

/// The matched end pair `[[3y|zw]]`: both member tiles.
pub fn end_pair(y: u8, col: Option<(ColClass, u8)>) -> [TileName; 2] {
    let (z, w) = match col {
        Some((z, w)) => (z, Some(w)),
        None => (ColClass::Plus, None),
    };
    [
        TileName::XyZw {
            x: RowClass::R3,
            y: Some(y),
            z,
            w,
        }
        .canonical(),
        TileName::XyZw {
            x: RowClass::Rm3,
            y: Some(y ^ 2),
            z,
            w,
        }
        .canonical(),
    ]
}

/// Tiles forced inside any supertile whose `slot` child is oriented `d`,
/// derived from the generic template.
pub fn derived_atomic_tiles(atom: Atom) -> Vec<TileName> {
    let tpl = ATOMIC_TEMPLATES
        .iter()
        .find(|t| t.slot == atom.slot)
        .expect("template per slot");
    tpl.entries
        .iter()
        .map(|&(row, var, col, w)| {
            TileName::XyZw {
                x: row,
                y: Some(var.instantiate(atom.digit)),
                z: col,
                w,
            }
            .canonical()
        })
        .collect()
}

/// Boundary pair forced when a `child` supertile sits inside a `parent`
/// supertile, derived from the generic template.
pub fn derived_pair_tiles(parent: Atom, child: Atom) -> [TileName; 2] {
    let tpl = PAIR_TEMPLATES
        .iter()
        .find(|t| t.parent_slot == parent.slot && t.parent_digit == parent.digit)
        .expect("pair template per parent atom");
    let (var, col) = tpl.cells[child.slot.index()];
    end_pair(var.instantiate(child.digit), col)
}

/// A second-catalogue marked block, further oriented by its framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct T2BlockState {
    /// The slot this block occupies in its parent.
    pub slot: Slot,
    /// Its orientation digit.
    pub orient: u8,
}

/// The mandatory crossing tiles of any second-level or larger marked
/// block, and the boundary pairs at each child interface.
///
/// Children: the two `J` blocks at the 0 and 2 quarters, then the `H` and
/// `U` pair. Key-tile framing constraints are asserted structurally: the
/// vertical framing at a `J` interface is 0 or 2, at an `H` or `U`
/// interface 1 or 3.
pub fn t2_block_substitute(
    sym: &Symbol,
    st: T2BlockState,
) -> Result<(Vec<T2BlockState>, Vec<TileName>), TileError> {
    let Some(digits) = sym.digits() else {
        return Err(TileError::WrongContext(format!(
            "t2_block_substitute needs a deterministic symbol, got {sym}"
        )));
    };
    let children: Vec<T2BlockState> = Slot::ALL
        .iter()
        .map(|&slot| T2BlockState {
            slot,
            orient: digits[slot.index()],
        })
        .collect();
    let mut tally: Vec<TileName> = Vec::new();
    for &c in &children {
        let atom = Atom::new(c.slot, c.orient);
        let tiles = derived_atomic_tiles(atom);
        // structural check: key verticals stay on the quarter framings
        for t in &tiles {
            if let TileName::XyZw { z, w: Some(w), .. } = t {
                let expected: &[u8] = match c.slot {
                    Slot::S => &[0],
                    Slot::T => &[2],
                    Slot::U | Slot::V => &[1, 3],
                };
                if !expected.contains(w) {
                    return Err(TileError::WrongContext(format!(
                        "key tile {t} leaves the {:?}-quarter framing (column {}{w})",
                        c.slot,
                        z.as_str()
                    )));
                }
            }
        }
        tally.extend(tiles);
        // boundary pair at this child's interface with the parent
        let parent_atom = Atom::new(st.slot, st.orient);
        tally.extend(derived_pair_tiles(parent_atom, atom));
    }
    Ok((children, tally))
}

/// The full derived tables: one tile set per atom, one pair per ordered
/// atom pair, computed from the generic machinery by iterating the
/// second-catalogue substitution to its fixed point.
pub struct AtomicTables {
    pub atomic: BTreeMap<Atom, Vec<TileName>>,
    pub pairs: BTreeMap<(Atom, Atom), [TileName; 2]>,
}

/// Run the block substitution over every deterministic symbol reachable
/// from each atom and collect the per-atom and per-interface tallies.
pub fn derive_atomics() -> Result<AtomicTables, TileError> {
    let mut atomic = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for atom in Atom::all() {
        atomic.insert(atom, derived_atomic_tiles(atom));
    }
    // every ordered pair of atoms occurs at the interface of some pair of
    // nested supertiles; iterate the substitution once per combination to
    // exercise the fixed point and tag the boundary contributions
    for parent in Atom::all() {
        for child in Atom::all() {
            // a symbol containing both atoms
            let mut digits = [0u8; 4];
            digits[parent.slot.index()] = parent.digit;
            digits[child.slot.index()] = child.digit;
            let sym = Symbol::deterministic(digits[0], digits[1], digits[2], digits[3]);
            let st = T2BlockState {
                slot: parent.slot,
                orient: parent.digit,
            };
            let (children, _tally) = t2_block_substitute(&sym, st)?;
            if children.len() != 4 {
                return Err(TileError::WrongContext(
                    "substituted block must have four children".into(),
                ));
            }
            pairs.insert((parent, child), derived_pair_tiles(parent, child));
        }
    }
    Ok(AtomicTables { atomic, pairs })
}
