//! Tiles, congruence, canonical names and the fixed catalogues.
//!
//! A tile is a unit square, cornered or uncornered, with four edge marks.
//! Tiles are identified up to congruence: cyclic rotation of the edge
//! tuple, or reversal with per-mark reflection. Crossing tiles are named
//! `[hv]` in the first catalogue and `[xy|zw]` in the second; outward
//! tiles get fixed descriptive names.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, TileError};
use crate::mark::{mark_matches, mark_reflect, mark_shift, Dir, EdgeMark, FramingCode, Side};

/// Edge indices in display order.
pub const N: usize = 0;
pub const E: usize = 1;
pub const S: usize = 2;
pub const W: usize = 3;

/// A tile in canonical congruence form.
///
/// The stored edge tuple is the lexicographic minimum over the eight
/// images of the tile under the square's point group, so `==` is
/// congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub cornered: bool,
    edges: [EdgeMark; 4],
}

/// Whether all marks point outward, or one passes through three inward ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileRole {
    Outward,
    Crossing,
}

/// One of the eight point-group images of a tile: the edge tuple as placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pose {
    pub cornered: bool,
    pub edges: [EdgeMark; 4],
}

fn rotate(e: &[EdgeMark; 4]) -> [EdgeMark; 4] {
    // quarter turn: the mark that faced east now faces north
    [e[E], e[S], e[W], e[N]]
}

fn mirror(e: &[EdgeMark; 4]) -> [EdgeMark; 4] {
    // reflect across the vertical axis: E and W trade places, all marks
    // flip sidedness
    [
        mark_reflect(&e[N]),
        mark_reflect(&e[W]),
        mark_reflect(&e[S]),
        mark_reflect(&e[E]),
    ]
}

fn all_images(cornered: bool, edges: [EdgeMark; 4]) -> [Pose; 8] {
    let mut out = [Pose { cornered, edges }; 8];
    let mut cur = edges;
    for slot in out.iter_mut().take(4) {
        slot.edges = cur;
        cur = rotate(&cur);
    }
    let mut cur = mirror(&edges);
    for slot in out.iter_mut().skip(4) {
        slot.edges = cur;
        cur = rotate(&cur);
    }
    out
}

impl Tile {
    pub fn new(cornered: bool, edges: [EdgeMark; 4]) -> Tile {
        let canon = all_images(cornered, edges)
            .iter()
            .map(|p| p.edges)
            .min()
            .unwrap();
        Tile {
            cornered,
            edges: canon,
        }
    }

    pub fn edges(&self) -> &[EdgeMark; 4] {
        &self.edges
    }

    pub fn role(&self) -> TileRole {
        if self.edges.iter().all(|m| m.dir == Dir::Out) {
            TileRole::Outward
        } else {
            TileRole::Crossing
        }
    }

    /// All distinct placements of the tile under the square's point group.
    pub fn placements(&self) -> Vec<Pose> {
        let mut seen = Vec::new();
        for p in all_images(self.cornered, self.edges) {
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        seen
    }

    /// True when every edge mark carries a framing channel.
    pub fn has_frame(&self) -> bool {
        self.edges.iter().all(|m| m.has_frame())
    }

    /// Erase the framing channel, mapping a second-catalogue tile onto its
    /// first-catalogue image.
    pub fn forget_frame(&self) -> Result<Tile, TileError> {
        if !self.has_frame() {
            return Err(TileError::WrongContext(
                "forget_frame needs a framed tile".into(),
            ));
        }
        let edges = self.edges.map(|m| EdgeMark { frame: None, ..m });
        Ok(Tile::new(self.cornered, edges))
    }

    /// Nim-add `k` to the framing channel of every mark.
    pub fn shift(&self, k: FramingCode) -> Result<Tile, TileError> {
        if !self.has_frame() {
            return Err(TileError::WrongContext("shift needs a framed tile".into()));
        }
        let mut edges = self.edges;
        for m in &mut edges {
            *m = mark_shift(m, k).map_err(TileError::Parse)?;
        }
        Ok(Tile::new(self.cornered, edges))
    }
}

// ---------------------------------------------------------------------------
// construction of the named tiles

fn em(dir: Dir, side: Side, class: u8, frame: Option<u8>) -> EdgeMark {
    EdgeMark::new(dir, side, class, frame.map(FramingCode::new))
}

/// Horizontal marking pair (west, east) for a crossing-tile row class.
fn row_marks(h: &str, y: Option<u8>, framed: bool) -> ([EdgeMark; 2], bool) {
    let f = |v: Option<u8>| if framed { v.or(Some(0)) } else { None };
    let d = y.unwrap_or(0);
    match h {
        "0" => (
            [
                em(Dir::In, Side::Minus, 0, f(Some(d))),
                em(Dir::In, Side::Plus, 0, f(Some(d ^ 2))),
            ],
            true,
        ),
        "1" => (
            [
                em(Dir::In, Side::Minus, 1, f(Some(d))),
                em(Dir::In, Side::Plus, 2, f(Some(d))),
            ],
            true,
        ),
        "3" => (
            [
                em(Dir::In, Side::Minus, 3, f(Some(d))),
                em(Dir::In, Side::Plus, 3, f(Some(d ^ 1))),
            ],
            true,
        ),
        "-3" => (
            [
                em(Dir::In, Side::Plus, 3, f(Some(d))),
                em(Dir::In, Side::Minus, 3, f(Some(d ^ 1))),
            ],
            true,
        ),
        "-" => (
            [
                em(Dir::In, Side::Zero, 0, f(Some(0))),
                em(Dir::In, Side::Zero, 0, f(Some(0))),
            ],
            false,
        ),
        _ => panic!("bad row class {h}"),
    }
}

/// Vertical marking pair (north, south) for a crossing-tile column class.
fn col_marks(z: &str, w: Option<u8>, framed: bool) -> [EdgeMark; 2] {
    let f = |v: u8| if framed { Some(v) } else { None };
    match z {
        "+" => [
            em(Dir::Out, Side::Zero, 0, f(0)),
            em(Dir::In, Side::Zero, 0, f(0)),
        ],
        _ => {
            let c: u8 = z.parse().expect("bad column class");
            let w = w.unwrap_or(0);
            [
                em(Dir::Out, Side::Plus, c, f(w)),
                em(Dir::In, Side::Minus, c, f(w)),
            ]
        }
    }
}

/// Build the first-catalogue crossing tile named `[hz]` (framing absent).
pub fn crossing_tile(h: &str, z: &str) -> Tile {
    let ([wm, e], _) = row_marks(h, None, false);
    let [n, s] = col_marks(z, None, false);
    Tile::new(false, [n, e, s, wm])
}

fn crossing_tile_framed(h: &str, y: Option<u8>, z: &str, w: Option<u8>) -> Tile {
    let ([wm, e], _) = row_marks(h, y, true);
    let [n, s] = col_marks(z, w, true);
    Tile::new(false, [n, e, s, wm])
}

/// The two outward marking patterns, framed or not, cornered or not.
pub fn outward_tile(pattern: u8, d: Option<u8>, cornered: bool) -> Tile {
    let f = |v: u8| d.map(|_| FramingCode::new(v));
    let dd = d.unwrap_or(0);
    let plus = EdgeMark::new(Dir::Out, Side::Zero, 0, f(0));
    let edges = match pattern {
        1 => [
            plus,
            plus,
            EdgeMark::new(Dir::Out, Side::Plus, 1, f(dd)),
            EdgeMark::new(Dir::Out, Side::Minus, 0, f(dd)),
        ],
        2 => [
            plus,
            EdgeMark::new(Dir::Out, Side::Minus, 2, f(dd)),
            plus,
            EdgeMark::new(Dir::Out, Side::Plus, 3, f(dd)),
        ],
        _ => panic!("bad outward pattern"),
    };
    Tile::new(cornered, edges)
}

// ---------------------------------------------------------------------------
// names

/// A canonical tile name: either a crossing name or an outward name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TileName {
    /// `[hv]`: first-catalogue crossing tile.
    Hv { h: RowClass, v: ColClass },
    /// `[xy|zw]`: second-catalogue crossing tile. `y` is `None` for the
    /// plain row, `w` is `None` for the plain column.
    XyZw {
        x: RowClass,
        y: Option<u8>,
        z: ColClass,
        w: Option<u8>,
    },
    /// Outward tile: marking pattern 1 or 2, cornered flag, optional frame.
    Outward {
        pattern: u8,
        cornered: bool,
        frame: Option<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RowClass {
    R0,
    R1,
    R3,
    Rm3,
    Rm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ColClass {
    C0,
    C1,
    C2,
    C3,
    Plus,
}

impl RowClass {
    pub const ALL: [RowClass; 5] = [
        RowClass::R0,
        RowClass::R1,
        RowClass::R3,
        RowClass::Rm3,
        RowClass::Rm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RowClass::R0 => "0",
            RowClass::R1 => "1",
            RowClass::R3 => "3",
            RowClass::Rm3 => "-3",
            RowClass::Rm => "-",
        }
    }
}

impl ColClass {
    pub const ALL: [ColClass; 5] = [
        ColClass::C0,
        ColClass::C1,
        ColClass::C2,
        ColClass::C3,
        ColClass::Plus,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ColClass::C0 => "0",
            ColClass::C1 => "1",
            ColClass::C2 => "2",
            ColClass::C3 => "3",
            ColClass::Plus => "+",
        }
    }

    pub fn digit(&self) -> Option<u8> {
        match self {
            ColClass::C0 => Some(0),
            ColClass::C1 => Some(1),
            ColClass::C2 => Some(2),
            ColClass::C3 => Some(3),
            ColClass::Plus => None,
        }
    }
}

impl TileName {
    /// Normalize aliases to the lexicographically earlier spelling:
    /// `[00|+] = [02|+]`, `[30|+] = [31|+]`, `[-32|+] = [-33|+]`, ...
    pub fn canonical(self) -> TileName {
        match self {
            TileName::XyZw {
                x,
                y: Some(y),
                z: ColClass::Plus,
                w,
            } => {
                let y = match x {
                    RowClass::R0 => y.min(y ^ 2),
                    RowClass::R3 | RowClass::Rm3 => y.min(y ^ 1),
                    _ => y,
                };
                TileName::XyZw {
                    x,
                    y: Some(y),
                    z: ColClass::Plus,
                    w,
                }
            }
            n => n,
        }
    }

    pub fn build(&self) -> Tile {
        match *self {
            TileName::Hv { h, v } => crossing_tile(h.as_str(), v.as_str()),
            TileName::XyZw { x, y, z, w } => crossing_tile_framed(x.as_str(), y, z.as_str(), w),
            TileName::Outward {
                pattern,
                cornered,
                frame,
            } => outward_tile(pattern, frame, cornered),
        }
    }

    /// Erase the framing channel of a second-catalogue name:
    /// `[xy|zw] -> [xz]`.
    pub fn forget_frame(&self) -> Result<TileName, TileError> {
        match *self {
            TileName::XyZw { x, z, .. } => Ok(TileName::Hv { h: x, v: z }),
            TileName::Outward {
                pattern,
                cornered,
                frame: Some(_),
            } => Ok(TileName::Outward {
                pattern,
                cornered,
                frame: None,
            }),
            _ => Err(TileError::WrongContext(format!(
                "forget_frame of unframed name {self}"
            ))),
        }
    }

    pub fn shift(&self, k: u8) -> Result<TileName, TileError> {
        match *self {
            TileName::XyZw { x, y, z, w } => Ok(TileName::XyZw {
                x,
                y: y.map(|v| v ^ k),
                z,
                w: w.map(|v| v ^ k),
            }
            .canonical()),
            TileName::Outward {
                pattern,
                cornered,
                frame: Some(d),
            } => Ok(TileName::Outward {
                pattern,
                cornered,
                frame: Some(d ^ k),
            }),
            _ => Err(TileError::WrongContext(format!(
                "shift of unframed name {self}"
            ))),
        }
    }
}

impl fmt::Display for TileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TileName::Hv { h, v } => write!(f, "[{}{}]", h.as_str(), v.as_str()),
            TileName::XyZw { x, y, z, w } => {
                write!(f, "[{}", x.as_str())?;
                if let Some(y) = y {
                    write!(f, "{y}")?;
                }
                write!(f, "|{}", z.as_str())?;
                if let Some(w) = w {
                    write!(f, "{w}")?;
                }
                write!(f, "]")
            }
            TileName::Outward {
                pattern,
                cornered,
                frame,
            } => {
                let marks = if *pattern == 1 { "10" } else { "23" };
                write!(f, "o{}{}", marks, if *cornered { "c" } else { "" })?;
                if let Some(d) = frame {
                    write!(f, ":{d}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_row(s: &str) -> Option<RowClass> {
    RowClass::ALL.into_iter().find(|r| r.as_str() == s)
}

fn parse_col(s: &str) -> Option<ColClass> {
    ColClass::ALL.into_iter().find(|c| c.as_str() == s)
}

impl std::str::FromStr for TileName {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<TileName, ParseError> {
        if let Some(rest) = s.strip_prefix('o') {
            let (body, frame) = match rest.split_once(':') {
                Some((b, d)) => (
                    b,
                    Some(
                        d.parse::<u8>()
                            .map_err(|_| ParseError::new(format!("bad frame digit in {s:?}")))?,
                    ),
                ),
                None => (rest, None),
            };
            let (marks, cornered) = match body.strip_suffix('c') {
                Some(m) => (m, true),
                None => (body, false),
            };
            let pattern = match marks {
                "10" => 1,
                "23" => 2,
                _ => return Err(ParseError::new(format!("bad outward name {s:?}"))),
            };
            return Ok(TileName::Outward {
                pattern,
                cornered,
                frame,
            });
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| ParseError::new(format!("tile name must be bracketed: {s:?}")))?;
        if let Some((hs, vs)) = inner.split_once('|') {
            let (x, y) = split_class_digit(hs)?;
            let x = parse_row(x).ok_or_else(|| ParseError::new(format!("bad row in {s:?}")))?;
            let (z, w) = split_class_digit(vs)?;
            let z = parse_col(z).ok_or_else(|| ParseError::new(format!("bad column in {s:?}")))?;
            Ok(TileName::XyZw { x, y, z, w }.canonical())
        } else {
            // first-catalogue [hv]: the column is the final character
            let (hs, vs) = inner.split_at(inner.len() - 1);
            let h = parse_row(hs).ok_or_else(|| ParseError::new(format!("bad row in {s:?}")))?;
            let v = parse_col(vs).ok_or_else(|| ParseError::new(format!("bad column in {s:?}")))?;
            Ok(TileName::Hv { h, v })
        }
    }
}

fn split_class_digit(s: &str) -> Result<(&str, Option<u8>), ParseError> {
    if s == "-" || s == "+" {
        return Ok((s, None));
    }
    let (class, digit) = s.split_at(s.len() - 1);
    let d = digit
        .parse::<u8>()
        .map_err(|_| ParseError::new(format!("bad digit in {s:?}")))?;
    if d > 3 {
        return Err(ParseError::new(format!("digit out of range in {s:?}")));
    }
    Ok((class, Some(d)))
}

// ---------------------------------------------------------------------------
// catalogues

/// A named, deduplicated set of tiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileSet {
    pub name: String,
    tiles: BTreeMap<Tile, TileName>,
}

impl TileSet {
    /// Assemble a set from explicit tiles with display names, for ad hoc
    /// sets outside the named catalogues.
    pub fn from_parts(name: &str, tiles: BTreeMap<Tile, TileName>) -> TileSet {
        TileSet {
            name: name.to_string(),
            tiles,
        }
    }

    pub fn from_names(name: &str, names: impl IntoIterator<Item = TileName>) -> TileSet {
        let mut tiles = BTreeMap::new();
        for n in names {
            let n = n.canonical();
            tiles.entry(n.build()).or_insert(n);
        }
        TileSet {
            name: name.to_string(),
            tiles,
        }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn contains(&self, t: &Tile) -> bool {
        self.tiles.contains_key(t)
    }

    pub fn contains_name(&self, n: &TileName) -> bool {
        self.tiles.values().any(|m| *m == n.canonical())
    }

    pub fn tiles(&self) -> impl Iterator<Item = &Tile> {
        self.tiles.keys()
    }

    pub fn names(&self) -> impl Iterator<Item = &TileName> {
        self.tiles.values()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Tile, &TileName)> {
        self.tiles.iter()
    }

    pub fn union(&self, other: &TileSet, name: &str) -> TileSet {
        TileSet::from_names(name, self.names().chain(other.names()).copied())
    }

    pub fn minus(&self, other: &TileSet, name: &str) -> TileSet {
        TileSet::from_names(
            name,
            self.entries()
                .filter(|(t, _)| !other.contains(t))
                .map(|(_, n)| *n),
        )
    }

    pub fn is_subset(&self, other: &TileSet) -> bool {
        self.tiles().all(|t| other.contains(t))
    }

    /// Nim-add `k` to every tile's framing channel.
    pub fn shift(&self, k: u8, name: &str) -> Result<TileSet, TileError> {
        let names: Result<Vec<_>, _> = self.names().map(|n| n.shift(k)).collect();
        Ok(TileSet::from_names(name, names?))
    }

    /// Canonical name lookup for a tile in this set.
    pub fn name_of(&self, t: &Tile) -> Option<TileName> {
        self.tiles.get(t).copied()
    }
}

/// Name a tile using the full second- and first-catalogue name maps.
pub fn canonical_name(t: &Tile) -> Result<TileName, TileError> {
    let full = full_name_map();
    full.get(t)
        .copied()
        .ok_or_else(|| TileError::Unnameable(format!("{t:?}")))
}

fn full_name_map() -> &'static BTreeMap<Tile, TileName> {
    static MAP: OnceLock<BTreeMap<Tile, TileName>> = OnceLock::new();
    MAP.get_or_init(|| {
        let mut map = BTreeMap::new();
        for set in ["T1", "T2"] {
            for (t, n) in catalogue(set).unwrap().entries() {
                map.entry(*t).or_insert(*n);
            }
        }
        map
    })
}

fn hv(h: RowClass, v: ColClass) -> TileName {
    TileName::Hv { h, v }
}

fn hv_str(name: &str) -> TileName {
    name.parse().unwrap()
}

fn t1_crossing_names() -> Vec<TileName> {
    let mut out = Vec::new();
    for h in RowClass::ALL {
        for v in ColClass::ALL {
            if h == RowClass::R0 && matches!(v, ColClass::C0 | ColClass::C1) {
                continue;
            }
            out.push(hv(h, v));
        }
    }
    out
}

fn outward_names(framed: bool) -> Vec<TileName> {
    let mut out = Vec::new();
    let frames: Vec<Option<u8>> = if framed {
        (0..4).map(Some).collect()
    } else {
        vec![None]
    };
    for pattern in [1, 2] {
        for cornered in [false, true] {
            for &frame in &frames {
                out.push(TileName::Outward {
                    pattern,
                    cornered,
                    frame,
                });
            }
        }
    }
    out
}

fn k1_names() -> Vec<TileName> {
    // [(0,1)(0..3)] minus [00],[01]
    let mut out = Vec::new();
    for h in [RowClass::R0, RowClass::R1] {
        for v in [ColClass::C0, ColClass::C1, ColClass::C2, ColClass::C3] {
            if h == RowClass::R0 && matches!(v, ColClass::C0 | ColClass::C1) {
                continue;
            }
            out.push(hv(h, v));
        }
    }
    out
}

fn k2_names() -> Vec<TileName> {
    let mut out = Vec::new();
    for d in 0..4 {
        for (x, z, w) in [
            (RowClass::R0, ColClass::C3, 0),
            (RowClass::R0, ColClass::C3, 2),
            (RowClass::R1, ColClass::C0, 0),
            (RowClass::R1, ColClass::C0, 2),
            (RowClass::R1, ColClass::C1, 1),
            (RowClass::R1, ColClass::C1, 3),
            (RowClass::R1, ColClass::C2, 1),
            (RowClass::R1, ColClass::C2, 3),
            (RowClass::R1, ColClass::C3, 1),
            (RowClass::R1, ColClass::C3, 3),
        ] {
            out.push(TileName::XyZw {
                x,
                y: Some(d),
                z,
                w: Some(w),
            });
        }
    }
    out
}

fn u2_names() -> Vec<TileName> {
    let mut out = Vec::new();
    // [xy|zw] with x = 3, -3 and y,z,w concrete
    for x in [RowClass::R3, RowClass::Rm3] {
        for y in 0..4 {
            for z in [ColClass::C0, ColClass::C1, ColClass::C2, ColClass::C3] {
                for w in 0..4 {
                    out.push(TileName::XyZw {
                        x,
                        y: Some(y),
                        z,
                        w: Some(w),
                    });
                }
            }
        }
    }
    // [-|zw]
    for z in [ColClass::C0, ColClass::C1, ColClass::C2, ColClass::C3] {
        for w in 0..4 {
            out.push(TileName::XyZw {
                x: RowClass::Rm,
                y: None,
                z,
                w: Some(w),
            });
        }
    }
    // [xy|+] for xy = 00, 01, 10, 11, 12, 13, 30, -30, 32, -32, and [-|+]
    for (x, y) in [
        (RowClass::R0, 0),
        (RowClass::R0, 1),
        (RowClass::R1, 0),
        (RowClass::R1, 1),
        (RowClass::R1, 2),
        (RowClass::R1, 3),
        (RowClass::R3, 0),
        (RowClass::Rm3, 0),
        (RowClass::R3, 2),
        (RowClass::Rm3, 2),
    ] {
        out.push(TileName::XyZw {
            x,
            y: Some(y),
            z: ColClass::Plus,
            w: None,
        });
    }
    out.push(TileName::XyZw {
        x: RowClass::Rm,
        y: None,
        z: ColClass::Plus,
        w: None,
    });
    out
}

fn t0_names() -> Vec<TileName> {
    let mut out = vec![
        TileName::XyZw {
            x: RowClass::Rm,
            y: None,
            z: ColClass::Plus,
            w: None,
        },
        TileName::XyZw {
            x: RowClass::R0,
            y: Some(0),
            z: ColClass::Plus,
            w: None,
        },
        TileName::XyZw {
            x: RowClass::R0,
            y: Some(1),
            z: ColClass::Plus,
            w: None,
        },
    ];
    for z in [ColClass::C0, ColClass::C1, ColClass::C2, ColClass::C3] {
        for w in 0..4 {
            out.push(TileName::XyZw {
                x: RowClass::Rm,
                y: None,
                z,
                w: Some(w),
            });
        }
    }
    out
}

/// The explicit tile lists of the four rule sets.
fn rule_set_names(which: &str) -> Vec<TileName> {
    let mut names = outward_names(false);
    let extra: &[&str] = match which {
        "TPi" => &[
            "[02]", "[11]", "[32]", "[-32]", "[-0]", "[-1]", "[-3]", "[-+]", "[0+]", "[1+]",
            "[3+]", "[-3+]",
        ],
        "TPar" => &[
            "[03]", "[10]", "[30]", "[-30]", "[-0]", "[-1]", "[-2]", "[-3]", "[-+]", "[0+]",
            "[1+]", "[3+]", "[-3+]",
        ],
        "TXi" => &[
            "[11]", "[12]", "[13]", "[30]", "[-30]", "[-0]", "[-1]", "[-2]", "[-3]", "[-+]",
            "[0+]", "[1+]", "[3+]", "[-3+]",
        ],
        _ => panic!("bad rule set {which}"),
    };
    names.extend(extra.iter().map(|s| hv_str(s)));
    names
}

/// The block sets: tiles essential for assembling each 2x4 block.
fn block_set_names(which: &str) -> Vec<TileName> {
    let strs: &[&str] = match which {
        "TU" => &["[11]", "[-0]", "[0+]", "[1+]"],
        "TJ" => &["[03]", "[10]", "[-1]", "[-2]", "[0+]", "[1+]"],
        "TI" => &["[02]", "[-3]", "[1+]"],
        "TH" => &["[12]", "[13]", "[0+]", "[-+]"],
        _ => panic!("bad block set {which}"),
    };
    strs.iter().map(|s| hv_str(s)).collect()
}

/// Build one of the named catalogues.
pub fn catalogue(name: &str) -> Result<TileSet, TileError> {
    let names: Vec<TileName> = match name {
        "T+" => outward_names(false),
        "Thv" => t1_crossing_names(),
        "T1" => {
            let mut v = outward_names(false);
            v.extend(t1_crossing_names());
            v
        }
        "K1" => k1_names(),
        "U1" => t1_crossing_names()
            .into_iter()
            .filter(|n| !k1_names().contains(n))
            .collect(),
        "TU" | "TJ" | "TI" | "TH" => block_set_names(name),
        "TPi" | "TPar" | "TXi" => rule_set_names(name),
        "TPibar" => {
            // T1 minus [02]
            let mut v = outward_names(false);
            v.extend(
                t1_crossing_names()
                    .into_iter()
                    .filter(|n| *n != hv_str("[02]")),
            );
            v
        }
        "T+2" => outward_names(true),
        "K2" => k2_names(),
        "U2" => u2_names(),
        "T0" => t0_names(),
        "T2" => {
            let mut v = outward_names(true);
            v.extend(k2_names());
            v.extend(u2_names());
            v
        }
        other => return Err(TileError::UnknownCatalogue(other.to_string())),
    };
    Ok(TileSet::from_names(name, names))
}

pub const CATALOGUE_NAMES: [&str; 18] = [
    "T1", "T+", "Thv", "K1", "U1", "TU", "TJ", "TI", "TH", "TPi", "TPar", "TXi", "TPibar", "T+2",
    "K2", "U2", "T0", "T2",
];

// ---------------------------------------------------------------------------
// file format

#[derive(Serialize, Deserialize)]
struct TileSetFile {
    name: String,
    context: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tiles: Option<Vec<TileRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct TileRecord {
    cornered: bool,
    edges: BTreeMap<String, String>,
}

impl TileSet {
    pub fn context(&self) -> &'static str {
        if self.tiles().all(|t| t.has_frame()) {
            "T2"
        } else {
            "T1"
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let recs: Vec<TileRecord> = self
            .tiles()
            .map(|t| {
                let e = t.edges();
                let mut edges = BTreeMap::new();
                for (k, i) in [("N", N), ("E", E), ("S", S), ("W", W)] {
                    edges.insert(k.to_string(), e[i].to_string());
                }
                TileRecord {
                    cornered: t.cornered,
                    edges,
                }
            })
            .collect();
        serde_json::to_value(TileSetFile {
            name: self.name.clone(),
            context: self.context().to_string(),
            tiles: Some(recs),
            names: Some(self.names().map(|n| n.to_string()).collect()),
        })
        .expect("tile set serialization")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TileSet, TileError> {
        let file: TileSetFile = serde_json::from_value(v.clone())
            .map_err(|e| TileError::Parse(ParseError::new(e.to_string())))?;
        if let Some(names) = file.names {
            let parsed: Result<Vec<TileName>, ParseError> =
                names.iter().map(|s| s.parse()).collect();
            return Ok(TileSet::from_names(&file.name, parsed?));
        }
        let Some(recs) = file.tiles else {
            return Err(TileError::Parse(ParseError::new(
                "tile set file needs \"tiles\" or \"names\"",
            )));
        };
        let mut tiles = BTreeMap::new();
        for r in recs {
            let mut edges = [EdgeMark::plus(false); 4];
            for (k, i) in [("N", N), ("E", E), ("S", S), ("W", W)] {
                let s = r.edges.get(k).ok_or_else(|| {
                    TileError::Parse(ParseError::new(format!("missing edge {k}")))
                })?;
                edges[i] = s.parse().map_err(TileError::Parse)?;
            }
            let t = Tile::new(r.cornered, edges);
            let n = canonical_name(&t)?;
            tiles.insert(t, n);
        }
        Ok(TileSet {
            name: file.name,
            tiles,
        })
    }
}

/// Edge-level compatibility of two poses placed side by side.
pub fn poses_match_horizontal(left: &Pose, right: &Pose) -> bool {
    mark_matches(&left.edges[E], &right.edges[W])
}

pub fn poses_match_vertical(lower: &Pose, upper: &Pose) -> bool {
    mark_matches(&lower.edges[N], &upper.edges[S])
}
