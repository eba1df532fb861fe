//! Domino-level substitution geometry: supertile expansion, deflation,
//! decomposition counting, congruence and periodicity scans.
//!
//! The canonical level-n supertile is horizontal, filling a
//! `2^(n+1) x 2^n` rectangle of unit cells. Its four children are two
//! horizontal supertiles stacked in the right square (slots `s` on top,
//! `t` below, 180-rotations of each other) and two vertical supertiles
//! side by side in the left square (slot `u` at the left column, `v` its
//! 180-rotation). A child's digit composes an extra point-group twist of
//! the child about its own box.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

use crate::symbol::{Slot, Symbol};

/// Axis of a placed domino.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "H")]
    Horizontal,
    #[serde(rename = "V")]
    Vertical,
}

/// One placed domino: anchor cell (lower-left), axis, framing code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlacedDomino {
    pub x: i64,
    pub y: i64,
    pub axis: Axis,
    pub code: u8,
}

impl PlacedDomino {
    /// Corner box (x0, y0, x1, y1), half-open.
    fn bbox(&self) -> (i64, i64, i64, i64) {
        match self.axis {
            Axis::Horizontal => (self.x, self.y, self.x + 2, self.y + 1),
            Axis::Vertical => (self.x, self.y, self.x + 1, self.y + 2),
        }
    }
}

/// A finite configuration of placed dominoes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominoPatch {
    pub level: u32,
    pub dominoes: BTreeSet<PlacedDomino>,
}

impl DominoPatch {
    pub fn bbox(&self) -> (i64, i64, i64, i64) {
        let mut it = self.dominoes.iter();
        let first = it.next().expect("empty patch has no bbox").bbox();
        self.dominoes.iter().skip(1).fold(first, |acc, d| {
            let b = d.bbox();
            (
                acc.0.min(b.0),
                acc.1.min(b.1),
                acc.2.max(b.2),
                acc.3.max(b.3),
            )
        })
    }

    /// Translate so the bbox minimum corner is the origin.
    pub fn normalized(&self) -> DominoPatch {
        if self.dominoes.is_empty() {
            return self.clone();
        }
        let (x0, y0, _, _) = self.bbox();
        self.translated(-x0, -y0)
    }

    pub fn translated(&self, dx: i64, dy: i64) -> DominoPatch {
        DominoPatch {
            level: self.level,
            dominoes: self
                .dominoes
                .iter()
                .map(|d| PlacedDomino {
                    x: d.x + dx,
                    y: d.y + dy,
                    ..*d
                })
                .collect(),
        }
    }

    /// Apply one of the eight point-group elements (about the origin),
    /// then normalize. Codes ride along unchanged; callers shift them
    /// separately when modelling a geometric action on the framing.
    pub fn transformed(&self, g: PointGroup) -> DominoPatch {
        let dominoes = self
            .dominoes
            .iter()
            .map(|d| {
                let (x0, y0, x1, y1) = d.bbox();
                let (a, b) = g.apply(x0, y0);
                let (c, dd) = g.apply(x1, y1);
                let (nx0, ny0) = (a.min(c), b.min(dd));
                let (nx1, _ny1) = (a.max(c), b.max(dd));
                PlacedDomino {
                    x: nx0,
                    y: ny0,
                    axis: if nx1 - nx0 == 2 {
                        Axis::Horizontal
                    } else {
                        Axis::Vertical
                    },
                    code: d.code,
                }
            })
            .collect();
        DominoPatch {
            level: self.level,
            dominoes,
        }
        .normalized()
    }

    /// Nim-add `k` to every code.
    pub fn recoded(&self, k: u8) -> DominoPatch {
        DominoPatch {
            level: self.level,
            dominoes: self
                .dominoes
                .iter()
                .map(|d| PlacedDomino {
                    code: d.code ^ k,
                    ..*d
                })
                .collect(),
        }
    }

    /// Reflect top-to-bottom about the patch bbox.
    pub fn flip_vertical(&self) -> DominoPatch {
        self.transformed(PointGroup::MirrorY)
    }

    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }
}

/// The eight isometries of the square lattice fixing the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointGroup {
    Id,
    MirrorX,
    MirrorY,
    Rot180,
    Quarter,
    QuarterMx,
    QuarterMy,
    Rot270,
}

impl PointGroup {
    pub const ALL: [PointGroup; 8] = [
        PointGroup::Id,
        PointGroup::MirrorX,
        PointGroup::MirrorY,
        PointGroup::Rot180,
        PointGroup::Quarter,
        PointGroup::QuarterMx,
        PointGroup::QuarterMy,
        PointGroup::Rot270,
    ];

    fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        match self {
            PointGroup::Id => (x, y),
            PointGroup::MirrorX => (-x, y),
            PointGroup::MirrorY => (x, -y),
            PointGroup::Rot180 => (-x, -y),
            PointGroup::Quarter => (-y, x),
            PointGroup::QuarterMx => (y, x),
            PointGroup::QuarterMy => (-y, -x),
            PointGroup::Rot270 => (y, -x),
        }
    }
}

// ---------------------------------------------------------------------------
// expansion

/// Resolves the digit used for each child when a symbol offers a choice.
#[derive(Debug, Clone)]
pub enum Chooser {
    /// Deterministic symbols only; any choice point is an error.
    Deterministic,
    /// Counter-based pseudorandom stream keyed by (seed, tree path), so
    /// the expansion is reproducible and independent of traversal order.
    Seeded(u64),
    /// Explicit digit choices, consumed by (path, slot) lookup order;
    /// missing entries fall back to the smallest allowed digit.
    Choices(Vec<u8>),
}

impl Chooser {
    fn pick(
        &self,
        sym: &Symbol,
        slot: Slot,
        path: &[u8],
        counter: &mut usize,
    ) -> Result<u8, ParseError> {
        let ds = sym.slot(slot);
        if ds.len() == 1 {
            return Ok(ds.iter().next().unwrap());
        }
        match self {
            Chooser::Deterministic => Err(ParseError::new(format!(
                "symbol {sym} is not deterministic; supply a chooser"
            ))),
            Chooser::Seeded(seed) => {
                let mut h = *seed ^ 0x9e37_79b9_7f4a_7c15;
                for &p in path {
                    h = splitmix(h ^ p as u64);
                }
                h = splitmix(h ^ (slot.index() as u64 + 101));
                let opts: Vec<u8> = ds.iter().collect();
                Ok(opts[(h % opts.len() as u64) as usize])
            }
            Chooser::Choices(list) => {
                let opts: Vec<u8> = ds.iter().collect();
                let pick = list.get(*counter).copied();
                *counter += 1;
                match pick {
                    Some(d) if ds.contains(d) => Ok(d),
                    Some(d) => Err(ParseError::new(format!(
                        "choice {d} not allowed in slot {slot:?} of {sym}"
                    ))),
                    None => Ok(opts[0]),
                }
            }
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Leaf codes record the orientation digit of the final placement step,
/// with digits 2 and 3 trading places; this is the unique assignment
/// (up to relabelling) under which flipping a supertile top-to-bottom and
/// interchanging codes 0<->2, 1<->3 yields the paired symbol's supertile.
fn leaf_code(digit: u8) -> u8 {
    match digit {
        2 => 3,
        3 => 2,
        d => d,
    }
}

#[derive(Clone, Copy)]
struct Iso {
    // 2x2 signed permutation matrix, row-major, acting on corner points
    m: [i64; 4],
    tx: i64,
    ty: i64,
}

impl Iso {
    const ID: Iso = Iso {
        m: [1, 0, 0, 1],
        tx: 0,
        ty: 0,
    };

    fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        (
            self.m[0] * x + self.m[1] * y + self.tx,
            self.m[2] * x + self.m[3] * y + self.ty,
        )
    }

    fn compose(&self, other: &Iso) -> Iso {
        let m = [
            self.m[0] * other.m[0] + self.m[1] * other.m[2],
            self.m[0] * other.m[1] + self.m[1] * other.m[3],
            self.m[2] * other.m[0] + self.m[3] * other.m[2],
            self.m[2] * other.m[1] + self.m[3] * other.m[3],
        ];
        let (tx, ty) = self.apply(other.tx, other.ty);
        Iso { m, tx, ty }
    }
}

/// The intrinsic twist of code `c` about the box `[0,w) x [0,h)`.
fn twist(c: u8, w: i64, h: i64) -> Iso {
    match c {
        0 => Iso::ID,
        1 => Iso {
            m: [-1, 0, 0, 1],
            tx: w,
            ty: 0,
        },
        2 => Iso {
            m: [1, 0, 0, -1],
            tx: 0,
            ty: h,
        },
        3 => Iso {
            m: [-1, 0, 0, -1],
            tx: w,
            ty: h,
        },
        _ => panic!("bad twist code"),
    }
}

/// Base placement of each slot's child (canonical box `[0,2^n) x [0,2^(n-1))`)
/// into the parent box `[0,2^(n+1)) x [0,2^n)`.
fn slot_base(slot: Slot, n: u32) -> Iso {
    let cw = 1i64 << n; // child width = parent half-width
    let ch = 1i64 << (n - 1);
    match slot {
        // right square, top
        Slot::S => Iso {
            m: [1, 0, 0, 1],
            tx: cw,
            ty: ch,
        },
        // right square, bottom: 180-rotation of the s placement
        Slot::T => Iso {
            m: [-1, 0, 0, -1],
            tx: 2 * cw,
            ty: ch,
        },
        // left square, left column: ccw quarter turn
        Slot::U => Iso {
            m: [0, -1, 1, 0],
            tx: ch,
            ty: 0,
        },
        // left square, right column: 180-rotation of the u placement
        Slot::V => Iso {
            m: [0, 1, -1, 0],
            tx: ch,
            ty: cw,
        },
    }
}

/// Expand a full symbol to its level-n supertile.
pub fn expand(sym: &Symbol, n: u32, chooser: &Chooser) -> Result<DominoPatch, ParseError> {
    if !sym.is_full() {
        return Err(ParseError::new(format!(
            "cannot expand non-full symbol {sym}"
        )));
    }
    if n > 12 {
        return Err(ParseError::new(format!(
            "level {n} exceeds the configured expansion bound"
        )));
    }
    let mut dominoes = BTreeSet::new();
    let mut counter = 0usize;
    rec_expand(
        sym,
        n,
        chooser,
        Iso::ID,
        0,
        &mut Vec::new(),
        &mut counter,
        &mut dominoes,
    )?;
    Ok(DominoPatch { level: n, dominoes })
}

#[allow(clippy::too_many_arguments)]
fn rec_expand(
    sym: &Symbol,
    n: u32,
    chooser: &Chooser,
    place: Iso,
    last_digit: u8,
    path: &mut Vec<u8>,
    counter: &mut usize,
    out: &mut BTreeSet<PlacedDomino>,
) -> Result<(), ParseError> {
    if n == 0 {
        let (ax, ay) = place.apply(0, 0);
        let (bx, by) = place.apply(2, 1);
        let (x0, y0) = (ax.min(bx), ay.min(by));
        let (x1, _y1) = (ax.max(bx), ay.max(by));
        out.insert(PlacedDomino {
            x: x0,
            y: y0,
            axis: if x1 - x0 == 2 {
                Axis::Horizontal
            } else {
                Axis::Vertical
            },
            code: leaf_code(last_digit),
        });
        return Ok(());
    }
    let cw = 1i64 << n;
    let ch = 1i64 << (n - 1);
    for slot in Slot::ALL {
        let digit = chooser.pick(sym, slot, path, counter)?;
        let child = place
            .compose(&slot_base(slot, n))
            .compose(&twist(digit, cw, ch));
        path.push(slot.index() as u8 * 4 + digit);
        rec_expand(sym, n - 1, chooser, child, digit, path, counter, out)?;
        path.pop();
    }
    Ok(())
}

/// Convenience: expand a deterministic symbol.
pub fn expand_det(sym: &Symbol, n: u32) -> DominoPatch {
    expand(sym, n, &Chooser::Deterministic).expect("deterministic expansion")
}

// ---------------------------------------------------------------------------
// congruence, deflation, decomposition, periodicity

/// Which transforms `congruent` may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transforms {
    pub translations: bool,
    pub point_group: bool,
    pub code_shifts: bool,
}

impl Transforms {
    pub const TRANSLATIONS: Transforms = Transforms {
        translations: true,
        point_group: false,
        code_shifts: false,
    };
    pub const ALL: Transforms = Transforms {
        translations: true,
        point_group: true,
        code_shifts: true,
    };
}

/// True iff some allowed transform maps `p` exactly onto `q`.
pub fn congruent(p: &DominoPatch, q: &DominoPatch, tr: Transforms) -> bool {
    if p.len() != q.len() {
        return false;
    }
    if p.is_empty() {
        return true;
    }
    let target = if tr.translations {
        q.normalized()
    } else {
        q.clone()
    };
    let gs: &[PointGroup] = if tr.point_group {
        &PointGroup::ALL
    } else {
        &[PointGroup::Id]
    };
    let shifts: &[u8] = if tr.code_shifts { &[0, 1, 2, 3] } else { &[0] };
    for &g in gs {
        let moved = p.transformed(g);
        let moved = if tr.translations {
            moved.normalized()
        } else {
            moved
        };
        for &k in shifts {
            if moved.recoded(k).dominoes == target.dominoes {
                return true;
            }
        }
    }
    false
}

/// Deflation result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deflation {
    Parent(DominoPatch),
    NoDecomposition,
}

/// Invert one substitution step: the unique parent whose expansion equals
/// `p`, for a deterministic symbol.
pub fn deflate(p: &DominoPatch, sym: &Symbol) -> Result<Deflation, ParseError> {
    if !sym.is_deterministic() {
        return Err(ParseError::new("deflate needs a deterministic symbol"));
    }
    let n_dominoes = p.len();
    if n_dominoes < 4
        || !n_dominoes.is_power_of_two()
        || !n_dominoes.trailing_zeros().is_multiple_of(2)
    {
        return Ok(Deflation::NoDecomposition);
    }
    let n = n_dominoes.trailing_zeros() / 2;
    // a canonical supertile is recognized directly; rotated/reflected
    // placements are recognized through their normal form
    let pn = p.normalized();
    for g in PointGroup::ALL {
        if expand_det(sym, n).transformed(g).dominoes == pn.dominoes {
            let parent = expand_det(sym, n - 1).transformed(g);
            return Ok(Deflation::Parent(parent));
        }
    }
    Ok(Deflation::NoDecomposition)
}

/// One way of partitioning a patch into level-k supertiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parse {
    pub level: u32,
    /// For each piece: (bbox min corner, the deterministic symbol it expands).
    pub pieces: Vec<((i64, i64), Symbol)>,
}

/// All ways to partition `p` into level-k supertiles of the given
/// deterministic symbols, by exhaustive search over axis-aligned pieces.
pub fn decompositions(p: &DominoPatch, symbols: &[Symbol], k: u32) -> Vec<Parse> {
    let pn = p.normalized();
    let piece_count = pn.len() >> (2 * k);
    if piece_count == 0 || pn.len() != piece_count << (2 * k) {
        return Vec::new();
    }
    // the supertile templates in all distinct placements
    let mut templates: Vec<(Symbol, DominoPatch)> = Vec::new();
    for sym in symbols {
        if !sym.is_deterministic() {
            continue;
        }
        let base = expand_det(sym, k);
        for g in PointGroup::ALL {
            let t = base.transformed(g);
            if !templates.iter().any(|(s2, t2)| s2 == sym && t2 == &t) {
                templates.push((*sym, t));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let remaining: BTreeSet<PlacedDomino> = pn.dominoes.clone();
    parse_rec(&remaining, &templates, k, &mut chosen, &mut out);
    out
}

fn parse_rec(
    remaining: &BTreeSet<PlacedDomino>,
    templates: &[(Symbol, DominoPatch)],
    k: u32,
    chosen: &mut Vec<((i64, i64), Symbol)>,
    out: &mut Vec<Parse>,
) {
    let Some(first) = remaining.iter().next() else {
        out.push(Parse {
            level: k,
            pieces: chosen.clone(),
        });
        return;
    };
    // the piece covering `first` has its bbox minimum at first's anchor
    // minus some offset within the template; try every template and offset
    let fb = first.bbox();
    for (sym, tmpl) in templates {
        // align each template domino onto `first`
        for td in &tmpl.dominoes {
            if td.axis != first.axis || td.code != first.code {
                continue;
            }
            let tb = td.bbox();
            let dx = fb.0 - tb.0;
            let dy = fb.1 - tb.1;
            let moved = tmpl.translated(dx, dy);
            if moved.dominoes.iter().all(|d| remaining.contains(d)) {
                let next: BTreeSet<PlacedDomino> =
                    remaining.difference(&moved.dominoes).copied().collect();
                let key = {
                    let b = moved.bbox();
                    (b.0, b.1)
                };
                // avoid counting the same placement twice via different
                // alignment dominoes
                if chosen.iter().any(|(kk, ss)| *kk == key && ss == sym) {
                    continue;
                }
                chosen.push((key, *sym));
                // pieces must tile outward from the least remaining domino
                parse_rec(&next, templates, k, chosen, out);
                chosen.pop();
            }
        }
    }
}

/// The two square halves of a level-n supertile patch, each normalized.
pub fn square_halves(p: &DominoPatch) -> (DominoPatch, DominoPatch) {
    let pn = p.normalized();
    let (x0, y0, x1, y1) = pn.bbox();
    // split across the longer side
    let horizontal = x1 - x0 >= y1 - y0;
    let mid = if horizontal {
        (x0 + x1) / 2
    } else {
        (y0 + y1) / 2
    };
    let split = |low: bool| -> DominoPatch {
        let dominoes = pn
            .dominoes
            .iter()
            .filter(|d| {
                let b = d.bbox();
                let (lo, hi) = if horizontal { (b.0, b.2) } else { (b.1, b.3) };
                if low {
                    hi <= mid
                } else {
                    lo >= mid
                }
            })
            .copied()
            .collect();
        DominoPatch {
            level: p.level,
            dominoes,
        }
        .normalized()
    };
    (split(true), split(false))
}

/// For a family symbol (s = t, u = v), the member whose square halves
/// coincide with this one's: the shift by `s xor u`.
pub fn family_mate(sym: &Symbol) -> Option<Symbol> {
    let d = sym.digits()?;
    if d[0] != d[1] || d[2] != d[3] || d[0] == d[2] {
        return None;
    }
    Some(sym.shift(crate::mark::FramingCode::new(d[0] ^ d[2])))
}

/// Identity-transform comparison of level-n supertiles of two symbols.
pub fn hier_equiv_check(a: &Symbol, b: &Symbol, n: u32) -> Result<bool, ParseError> {
    if !a.is_deterministic() || !b.is_deterministic() {
        return Err(ParseError::new(
            "hier_equiv_check needs deterministic symbols",
        ));
    }
    Ok(expand_det(a, n).normalized().dominoes == expand_det(b, n).normalized().dominoes)
}

/// All nonzero translations mapping the patch into itself wherever the
/// translate stays in bounds, provided the overlap covers more than a
/// third of the patch.
pub fn periodicity_scan(p: &DominoPatch) -> Vec<(i64, i64)> {
    if p.len() < 2 {
        return Vec::new();
    }
    let pn = p.normalized();
    let (x0, y0, x1, y1) = pn.bbox();
    let (w, h) = (x1 - x0, y1 - y0);
    let cells: BTreeMap<(i64, i64, i64, i64), u8> =
        pn.dominoes.iter().map(|d| (d.bbox(), d.code)).collect();
    let floor = pn.len() / 3;
    let mut out = Vec::new();
    for dx in -w + 1..w {
        for dy in -h + 1..h {
            if (dx, dy) == (0, 0) {
                continue;
            }
            let mut used = 0usize;
            let mut ok = true;
            for d in &pn.dominoes {
                let b = d.bbox();
                let nb = (b.0 + dx, b.1 + dy, b.2 + dx, b.3 + dy);
                if nb.0 >= x0 && nb.1 >= y0 && nb.2 <= x1 && nb.3 <= y1 {
                    used += 1;
                    if cells.get(&nb) != Some(&d.code) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && used > floor {
                out.push((dx, dy));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// file format

/// Serialize per the patch file schema:
/// `{ "level": int, "dominoes": [ { "x", "y", "axis", "code" } ] }`.
pub fn patch_to_json(p: &DominoPatch) -> serde_json::Value {
    serde_json::to_value(p).expect("patch serialization")
}

pub fn patch_from_json(v: &serde_json::Value) -> Result<DominoPatch, ParseError> {
    serde_json::from_value(v.clone()).map_err(|e| ParseError::new(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Symbol {
        s.parse().unwrap()
    }

    #[test]
    fn expansion_shape() {
        let p = expand_det(&sym("0000"), 0);
        assert_eq!(p.len(), 1);
        let d = p.dominoes.iter().next().unwrap();
        assert_eq!(d.code, 0);
        assert_eq!(d.axis, Axis::Horizontal);
        for n in 0..5 {
            let p = expand_det(&sym("1101"), n);
            assert_eq!(p.len(), 1 << (2 * n));
            let (x0, y0, x1, y1) = p.bbox();
            assert_eq!(x1 - x0, 2 << n);
            assert_eq!(y1 - y0, 1 << n);
        }
    }

    #[test]
    fn mirror_law_all_symbols() {
        for s in 0..4u8 {
            for t in 0..4 {
                for u in 0..4 {
                    for v in 0..4 {
                        let a = Symbol::deterministic(s, t, u, v);
                        let b = a.partner();
                        for n in 1..=2 {
                            let flipped = expand_det(&a, n).flip_vertical().recoded(2);
                            assert_eq!(
                                flipped.dominoes,
                                expand_det(&b, n).normalized().dominoes,
                                "mirror law fails for {a} at level {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_law_level3_spot() {
        for s in ["0231", "1101", "1023", "3210", "0321"] {
            let a = sym(s);
            let b = a.partner();
            let flipped = expand_det(&a, 3).flip_vertical().recoded(2);
            assert!(congruent(
                &flipped,
                &expand_det(&b, 3),
                Transforms::TRANSLATIONS
            ));
        }
    }

    #[test]
    fn congruence_examples() {
        let p = expand_det(&sym("0231"), 2);
        assert!(congruent(&p, &p, Transforms::TRANSLATIONS));
        let flipped = p.flip_vertical().recoded(2);
        let q = expand_det(&sym("1302"), 2);
        assert!(congruent(&flipped, &q, Transforms::TRANSLATIONS));
        assert!(congruent(&p, &q, Transforms::ALL));
        // 0000 vs 1111 differ at level 1 in code fields alone
        let a = expand_det(&sym("0000"), 1);
        let b = expand_det(&sym("1111"), 1);
        assert!(!congruent(&a, &b, Transforms::TRANSLATIONS));
        assert!(congruent(&a, &b, Transforms::ALL));
    }

    #[test]
    fn round_trip() {
        for s in ["0000", "1101", "1023", "0231", "3321"] {
            let sm = sym(s);
            for n in 1..=4u32 {
                let p = expand_det(&sm, n);
                match deflate(&p, &sm).unwrap() {
                    Deflation::Parent(q) => {
                        assert_eq!(q.dominoes, expand_det(&sm, n - 1).dominoes)
                    }
                    Deflation::NoDecomposition => panic!("round trip failed for {s} at {n}"),
                }
            }
        }
    }

    #[test]
    fn deflate_rejections() {
        let single = expand_det(&sym("1101"), 0);
        assert_eq!(
            deflate(&single, &sym("1101")).unwrap(),
            Deflation::NoDecomposition
        );
        let p = expand_det(&sym("0011"), 2);
        assert_eq!(
            deflate(&p, &sym("0123")).unwrap(),
            Deflation::NoDecomposition
        );
        assert!(deflate(&p, &sym("(01)123")).is_err());
    }

    #[test]
    fn distinctness_level3() {
        // non-equivalent deterministic symbols have distinct level-3
        // supertiles under the identity transform
        let pairs = [
            ("0011", "1011"),
            ("0011", "2011"),
            ("1101", "1023"),
            ("0000", "1111"),
            ("0231", "1302"),
        ];
        for (a, b) in pairs {
            assert!(
                !hier_equiv_check(&sym(a), &sym(b), 3).unwrap(),
                "{a} vs {b}"
            );
        }
        assert!(hier_equiv_check(&sym("0231"), &sym("0231"), 3).unwrap());
        assert!(!hier_equiv_check(&sym("0011"), &sym("1011"), 2).unwrap());
    }

    #[test]
    fn family_half_sharing() {
        // 0011 and 1100 share their square halves exactly at level 2
        let a = expand_det(&sym("0011"), 2);
        let b = expand_det(&sym("1100"), 2);
        let (ha, hb) = (halves(&a), halves(&b));
        assert_eq!(ha.0.dominoes, hb.1.dominoes);
        assert_eq!(ha.1.dominoes, hb.0.dominoes);
        assert_ne!(a.normalized().dominoes, b.normalized().dominoes);
    }

    fn halves(p: &DominoPatch) -> (DominoPatch, DominoPatch) {
        let pn = p.normalized();
        let (x0, _, x1, _) = pn.bbox();
        let mid = (x0 + x1) / 2;
        let left: BTreeSet<PlacedDomino> = pn
            .dominoes
            .iter()
            .filter(|d| d.bbox().2 <= mid)
            .copied()
            .collect();
        let right: BTreeSet<PlacedDomino> = pn
            .dominoes
            .iter()
            .filter(|d| d.bbox().0 >= mid)
            .copied()
            .collect();
        (
            DominoPatch {
                level: p.level,
                dominoes: left,
            }
            .normalized(),
            DominoPatch {
                level: p.level,
                dominoes: right,
            }
            .normalized(),
        )
    }

    #[test]
    fn half_parses() {
        // the square half of a level-2 0011 supertile has exactly 2 parses
        // into level-1 supertiles under {0011, 1100}
        let p = expand_det(&sym("0011"), 2);
        let (left, _) = halves(&p);
        let parses = decompositions(&left, &[sym("0011"), sym("1100")], 1);
        assert_eq!(parses.len(), 2);
        // a whole non-family supertile parses uniquely
        let p = expand_det(&sym("0123"), 2);
        let parses = decompositions(&p, &[sym("0123")], 1);
        assert_eq!(parses.len(), 1);
        // a non-supertile patch has no parses
        let mut broken = p.clone();
        let d = *broken.dominoes.iter().next().unwrap();
        broken.dominoes.remove(&d);
        assert_eq!(decompositions(&broken, &[sym("0123")], 1).len(), 0);
    }

    #[test]
    fn periodicity() {
        let p = expand_det(&sym("0000"), 3);
        let periods = periodicity_scan(&p);
        assert!(!periods.is_empty());
        assert!(periods.contains(&(4, 0)), "{periods:?}");
        let p = expand_det(&sym("0011"), 3);
        assert!(periodicity_scan(&p).is_empty());
        let single = expand_det(&sym("0011"), 0);
        assert!(periodicity_scan(&single).is_empty());
    }

    #[test]
    fn seeded_chooser_reproducible() {
        let s = sym("(01)231");
        let a = expand(&s, 3, &Chooser::Seeded(42)).unwrap();
        let b = expand(&s, 3, &Chooser::Seeded(42)).unwrap();
        assert_eq!(a, b);
        let c = expand(&s, 3, &Chooser::Seeded(43)).unwrap();
        assert!(a != c || a == c); // distinct seeds may coincide; just exercise
        assert!(expand(&s, 2, &Chooser::Deterministic).is_err());
        let d = expand(&s, 1, &Chooser::Choices(vec![1])).unwrap();
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn patch_json_round_trip() {
        let p = expand_det(&sym("1101"), 2);
        let v = patch_to_json(&p);
        let q = patch_from_json(&v).unwrap();
        assert_eq!(p, q);
        assert!(v["dominoes"][0]["axis"].is_string());
    }
}
