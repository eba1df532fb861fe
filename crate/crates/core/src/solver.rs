//! Finite-region edge-matching solver over marked square tiles.
//!
//! One variable per cell, domains over (tile, pose) pairs, arc
//! consistency on shared edges plus the cornered-vertex counting
//! constraint. Deterministic branching order, node budgets, and a torus
//! mode used to hunt for periodic tilings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::TileError;
use crate::mark::{mark_matches, EdgeMark};
use crate::tile::{canonical_name, Pose, Tile, TileName, TileSet, E, N, S, W};

/// One boundary edge of a region: the cell it belongs to and the side of
/// that cell facing out of the region.
pub type BoundaryEdge = ((usize, usize), usize);

/// Boundary policy for a rectangular region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundary {
    /// Boundary edges are unconstrained.
    Free,
    /// Prescribed marks on some or all boundary edges: the tile placed at
    /// the cell must present a mark that matches the given one, as if a
    /// neighbor outside the region carried it.
    Fixed(BTreeMap<BoundaryEdge, EdgeMark>),
    /// Wrap around: the region tiles a torus. Requires even sides.
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub width: usize,
    pub height: usize,
    pub boundary: Boundary,
}

impl Region {
    pub fn free(width: usize, height: usize) -> Region {
        Region {
            width,
            height,
            boundary: Boundary::Free,
        }
    }

    pub fn torus(width: usize, height: usize) -> Region {
        Region {
            width,
            height,
            boundary: Boundary::Torus,
        }
    }

    pub fn fixed(width: usize, height: usize, marks: BTreeMap<BoundaryEdge, EdgeMark>) -> Region {
        Region {
            width,
            height,
            boundary: Boundary::Fixed(marks),
        }
    }
}

/// A placed tile in a solved or supplied patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedTile {
    pub x: i64,
    pub y: i64,
    pub tile: TileName,
    pub pose: u8,
}

/// A finite marked patch: tiles keyed by cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkedPatch {
    pub cells: BTreeMap<(i64, i64), (Tile, u8)>,
}

impl MarkedPatch {
    pub fn insert(&mut self, x: i64, y: i64, tile: Tile, pose: u8) {
        self.cells.insert((x, y), (tile, pose));
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn pose_of(&self, key: &(i64, i64)) -> Option<Pose> {
        self.cells
            .get(key)
            .map(|(t, p)| t.placements()[*p as usize])
    }

    pub fn to_records(&self) -> Vec<PlacedTile> {
        self.cells
            .iter()
            .map(|(&(x, y), &(t, pose))| PlacedTile {
                x,
                y,
                tile: canonical_name(&t).expect("placed tile has a name"),
                pose,
            })
            .collect()
    }

    pub fn from_records(records: &[PlacedTile]) -> Result<MarkedPatch, TileError> {
        let mut out = MarkedPatch::default();
        for r in records {
            let tile = r.tile.build();
            let nposes = tile.placements().len();
            if (r.pose as usize) >= nposes {
                return Err(TileError::WrongContext(format!(
                    "pose {} out of range for {}",
                    r.pose, r.tile
                )));
            }
            out.insert(r.x, r.y, tile, r.pose);
        }
        Ok(out)
    }
}

/// A constraint violation discovered by `verify_patch`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Tile at this cell is not in the reference set.
    Membership { cell: (i64, i64) },
    /// The shared edge between these two cells does not match.
    Edge {
        cell: (i64, i64),
        neighbor: (i64, i64),
    },
    /// This lattice vertex touches the wrong number of cornered tiles.
    Vertex { vertex: (i64, i64), count: usize },
}

/// Check membership, all edge matches, and the vertex constraint.
pub fn verify_patch(set: &TileSet, patch: &MarkedPatch) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&cell, (tile, _)) in &patch.cells {
        if !set.contains(tile) {
            out.push(Violation::Membership { cell });
        }
    }
    for &(x, y) in patch.cells.keys() {
        let here = patch.pose_of(&(x, y)).unwrap();
        if let Some(right) = patch.pose_of(&(x + 1, y)) {
            if !mark_matches(&here.edges[E], &right.edges[W]) {
                out.push(Violation::Edge {
                    cell: (x, y),
                    neighbor: (x + 1, y),
                });
            }
        }
        if let Some(above) = patch.pose_of(&(x, y + 1)) {
            if !mark_matches(&here.edges[N], &above.edges[S]) {
                out.push(Violation::Edge {
                    cell: (x, y),
                    neighbor: (x, y + 1),
                });
            }
        }
    }
    // interior vertices: all four incident cells present
    for &(x, y) in patch.cells.keys() {
        let quad = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
        if quad.iter().all(|c| patch.cells.contains_key(c)) {
            let count = quad.iter().filter(|c| patch.cells[*c].0.cornered).count();
            if count != 1 {
                out.push(Violation::Vertex {
                    vertex: (x + 1, y + 1),
                    count,
                });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// solver core

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Count,
    /// Collect every solution (use only where the count is small).
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(MarkedPatch),
    Count(u64),
    All(Vec<MarkedPatch>),
    Unsat,
    Timeout,
}

/// Node budget for the backtracking search.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { nodes: 10_000_000 }
    }
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn full(n: usize) -> BitSet {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        let rem = n % 64;
        if rem != 0 {
            *words.last_mut().unwrap() = (1u64 << rem) - 1;
        }
        BitSet { words }
    }

    fn empty(n: usize) -> BitSet {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    fn and_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let n = *a & *b;
            changed |= n != *a;
            *a = n;
        }
        changed
    }

    fn or_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    fn first(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    fn only(&self, i: usize) -> BitSet {
        let mut b = BitSet::empty(self.words.len() * 64);
        b.words.truncate(self.words.len());
        b.set(i);
        b
    }
}

/// Initial-domain filter: cell coordinates, candidate tile and pose.
pub type SeedFilter<'a> = &'a dyn Fn((usize, usize), &Tile, &Pose) -> bool;

/// Precomputed candidate placements and their compatibility tables.
pub struct SolverTables {
    cands: Vec<(Tile, u8, Pose)>,
    east: Vec<BitSet>,
    north: Vec<BitSet>,
    west: Vec<BitSet>,
    south: Vec<BitSet>,
    cornered: BitSet,
}

impl SolverTables {
    pub fn new(set: &TileSet) -> SolverTables {
        let mut cands = Vec::new();
        for tile in set.tiles() {
            for (pi, pose) in tile.placements().into_iter().enumerate() {
                cands.push((*tile, pi as u8, pose));
            }
        }
        let n = cands.len();
        let mut east = vec![BitSet::empty(n); n];
        let mut north = vec![BitSet::empty(n); n];
        let mut west = vec![BitSet::empty(n); n];
        let mut south = vec![BitSet::empty(n); n];
        for (i, (_, _, pi)) in cands.iter().enumerate() {
            for (j, (_, _, pj)) in cands.iter().enumerate() {
                if mark_matches(&pi.edges[E], &pj.edges[W]) {
                    east[i].set(j);
                    west[j].set(i);
                }
                if mark_matches(&pi.edges[N], &pj.edges[S]) {
                    north[i].set(j);
                    south[j].set(i);
                }
            }
        }
        let mut cornered = BitSet::empty(n);
        for (i, (_, _, p)) in cands.iter().enumerate() {
            if p.cornered {
                cornered.set(i);
            }
        }
        SolverTables {
            cands,
            east,
            north,
            west,
            south,
            cornered,
        }
    }

    pub fn candidate_count(&self) -> usize {
        self.cands.len()
    }
}

struct Search<'a> {
    tables: &'a SolverTables,
    width: usize,
    height: usize,
    torus: bool,
    nodes: u64,
    budget: u64,
    count: u64,
    witness: Option<Vec<usize>>,
    all: Option<Vec<Vec<usize>>>,
    stop_at_first: bool,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    fn neighbor(&self, x: usize, y: usize, dx: i64, dy: i64) -> Option<usize> {
        let (w, h) = (self.width as i64, self.height as i64);
        let (mut nx, mut ny) = (x as i64 + dx, y as i64 + dy);
        if self.torus {
            nx = nx.rem_euclid(w);
            ny = ny.rem_euclid(h);
        } else if nx < 0 || nx >= w || ny < 0 || ny >= h {
            return None;
        }
        Some(self.idx(nx as usize, ny as usize))
    }

    fn propagate(&self, dom: &mut [BitSet]) -> bool {
        let n = self.tables.cands.len();
        let mut queue: Vec<usize> = (0..dom.len()).collect();
        while let Some(k) = queue.pop() {
            if dom[k].is_zero() {
                return false;
            }
            let (x, y) = (k % self.width, k / self.width);
            let dirs: [(i64, i64, &Vec<BitSet>); 4] = [
                (1, 0, &self.tables.east),
                (-1, 0, &self.tables.west),
                (0, 1, &self.tables.north),
                (0, -1, &self.tables.south),
            ];
            for (dx, dy, tab) in dirs {
                let Some(nk) = self.neighbor(x, y, dx, dy) else {
                    continue;
                };
                let mut allowed = BitSet::empty(n);
                for i in dom[k].iter_ones() {
                    allowed.or_with(&tab[i]);
                }
                if dom[nk].and_with(&allowed) {
                    if dom[nk].is_zero() {
                        return false;
                    }
                    queue.push(nk);
                }
            }
        }
        true
    }

    /// Vertex-count propagation: each fully-interior vertex must touch
    /// exactly one cornered tile.
    fn vertex_filter(&self, dom: &mut [BitSet]) -> bool {
        loop {
            let mut changed = false;
            let (w, h) = (self.width as i64, self.height as i64);
            let (vx_range, vy_range) = if self.torus {
                (0..w, 0..h)
            } else {
                (1..w, 1..h)
            };
            for vy in vy_range.clone() {
                for vx in vx_range.clone() {
                    let mut quad = Vec::with_capacity(4);
                    let mut ok = true;
                    for (ddx, ddy) in [(-1, -1), (0, -1), (-1, 0), (0, 0)] {
                        let (mut cx, mut cy) = (vx + ddx, vy + ddy);
                        if self.torus {
                            cx = cx.rem_euclid(w);
                            cy = cy.rem_euclid(h);
                        } else if cx < 0 || cy < 0 {
                            ok = false;
                            break;
                        }
                        quad.push(self.idx(cx as usize, cy as usize));
                    }
                    if !ok {
                        continue;
                    }
                    let mut fixed_corner = 0usize;
                    let mut maybe = Vec::new();
                    for &q in &quad {
                        let d = &dom[q];
                        let mut all_corner = true;
                        let mut any_corner = false;
                        for i in d.iter_ones() {
                            if self.tables.cornered.get(i) {
                                any_corner = true;
                            } else {
                                all_corner = false;
                            }
                        }
                        if all_corner && !d.is_zero() {
                            fixed_corner += 1;
                        } else if any_corner {
                            maybe.push(q);
                        }
                    }
                    if fixed_corner > 1 {
                        return false;
                    }
                    if fixed_corner == 1 {
                        for q in &maybe {
                            let mut keep = BitSet::empty(self.tables.cands.len());
                            for i in dom[*q].iter_ones() {
                                if !self.tables.cornered.get(i) {
                                    keep.set(i);
                                }
                            }
                            if dom[*q].and_with(&keep) {
                                if dom[*q].is_zero() {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                    } else if maybe.is_empty() {
                        return false;
                    } else if maybe.len() == 1 {
                        let q = maybe[0];
                        let mut keep = BitSet::empty(self.tables.cands.len());
                        for i in dom[q].iter_ones() {
                            if self.tables.cornered.get(i) {
                                keep.set(i);
                            }
                        }
                        if dom[q].and_with(&keep) {
                            if dom[q].is_zero() {
                                return false;
                            }
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn solve(&mut self, dom: &mut [BitSet]) -> bool {
        if self.nodes > self.budget {
            self.timed_out = true;
            return true;
        }
        if !self.propagate(dom) || !self.vertex_filter(dom) || !self.propagate(dom) {
            return false;
        }
        // minimum remaining values
        let mut best: Option<(u32, usize)> = None;
        for (k, d) in dom.iter().enumerate() {
            let c = d.count();
            if c == 0 {
                return false;
            }
            if c > 1 && best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, k));
            }
        }
        let Some((_, cell)) = best else {
            self.count += 1;
            let picks: Vec<usize> = dom.iter().map(|d| d.first().unwrap()).collect();
            if self.witness.is_none() {
                self.witness = Some(picks.clone());
            }
            if let Some(all) = &mut self.all {
                all.push(picks);
            }
            return self.stop_at_first;
        };
        let choices: Vec<usize> = dom[cell].iter_ones().collect();
        for i in choices {
            self.nodes += 1;
            let mut next: Vec<BitSet> = dom.to_vec();
            next[cell] = dom[cell].only(i);
            if self.solve(&mut next) {
                return true;
            }
        }
        false
    }
}

fn assemble(tables: &SolverTables, width: usize, picks: &[usize]) -> MarkedPatch {
    let mut patch = MarkedPatch::default();
    for (k, &i) in picks.iter().enumerate() {
        let (tile, pose, _) = tables.cands[i];
        patch.insert((k % width) as i64, (k / width) as i64, tile, pose);
    }
    patch
}

/// Backtracking search over (cell -> tile x pose) assignments.
///
/// `seed` optionally constrains cells before the search starts (e.g. to
/// pin the cornered sublattice); it takes the cell and a candidate and
/// says whether the candidate stays in the initial domain.
pub fn solve_with(
    set: &TileSet,
    region: &Region,
    mode: Mode,
    budget: Budget,
    seed: Option<SeedFilter<'_>>,
) -> Outcome {
    if region.boundary == Boundary::Torus
        && (!region.width.is_multiple_of(2) || !region.height.is_multiple_of(2))
    {
        // odd periods cannot satisfy the cornered-vertex constraint
        return Outcome::Unsat;
    }
    let tables = SolverTables::new(set);
    let ncand = tables.cands.len();
    if ncand == 0 || region.width == 0 || region.height == 0 {
        return Outcome::Unsat;
    }
    let mut dom = vec![BitSet::full(ncand); region.width * region.height];
    if let Some(f) = seed {
        for y in 0..region.height {
            for x in 0..region.width {
                let k = y * region.width + x;
                let mut keep = BitSet::empty(ncand);
                for (i, (t, _, p)) in tables.cands.iter().enumerate() {
                    if f((x, y), t, p) {
                        keep.set(i);
                    }
                }
                dom[k].and_with(&keep);
            }
        }
    } else if region.boundary == Boundary::Torus && mode == Mode::First {
        // translation closure: some cell holds a cornered tile, so pinning
        // one at the origin preserves satisfiability (not counts)
        dom[0].and_with(&tables.cornered.clone());
    }
    if let Boundary::Fixed(marks) = &region.boundary {
        for (&((x, y), side), mark) in marks {
            if x >= region.width || y >= region.height || side >= 4 {
                return Outcome::Unsat;
            }
            let k = y * region.width + x;
            let mut keep = BitSet::empty(ncand);
            for (i, (_, _, p)) in tables.cands.iter().enumerate() {
                if mark_matches(&p.edges[side], mark) {
                    keep.set(i);
                }
            }
            dom[k].and_with(&keep);
        }
    }
    let mut search = Search {
        tables: &tables,
        width: region.width,
        height: region.height,
        torus: region.boundary == Boundary::Torus,
        nodes: 0,
        budget: budget.nodes,
        count: 0,
        witness: None,
        all: (mode == Mode::All).then(Vec::new),
        stop_at_first: mode == Mode::First,
        timed_out: false,
    };
    search.solve(&mut dom);
    if search.timed_out {
        return Outcome::Timeout;
    }
    match mode {
        Mode::First => match search.witness {
            Some(picks) => Outcome::Sat(assemble(&tables, region.width, &picks)),
            None => Outcome::Unsat,
        },
        Mode::Count => Outcome::Count(search.count),
        Mode::All => Outcome::All(
            search
                .all
                .unwrap_or_default()
                .iter()
                .map(|p| assemble(&tables, region.width, p))
                .collect(),
        ),
    }
}

pub fn solve(set: &TileSet, region: &Region, mode: Mode, budget: Budget) -> Outcome {
    solve_with(set, region, mode, budget, None)
}

/// Search the `p x q` torus for a periodic tiling.
pub fn torus_search(set: &TileSet, p: usize, q: usize, budget: Budget) -> Outcome {
    solve(set, &Region::torus(p, q), Mode::First, budget)
}

/// Exact tiling count on a free region.
pub fn count_tilings(set: &TileSet, region: &Region, budget: Budget) -> Outcome {
    solve(set, region, Mode::Count, budget)
}

/// Brute-force oracle: enumerate placements cell by cell in row-major
/// order, rejecting a prefix as soon as an edge or completed vertex
/// fails. No propagation, no variable reordering, no bitsets — a
/// structurally independent count for cross-checking the solver.
pub fn count_tilings_bruteforce(set: &TileSet, width: usize, height: usize) -> u64 {
    let mut cands: Vec<Pose> = Vec::new();
    for tile in set.tiles() {
        cands.extend(tile.placements());
    }
    let mut picks: Vec<usize> = Vec::with_capacity(width * height);
    fn rec(cands: &[Pose], picks: &mut Vec<usize>, width: usize, height: usize) -> u64 {
        let k = picks.len();
        if k == width * height {
            return 1;
        }
        let (x, y) = (k % width, k / width);
        let mut total = 0;
        'cand: for (i, p) in cands.iter().enumerate() {
            if x > 0 {
                let left = &cands[picks[k - 1]];
                if !mark_matches(&left.edges[E], &p.edges[W]) {
                    continue;
                }
            }
            if y > 0 {
                let below = &cands[picks[k - width]];
                if !mark_matches(&below.edges[N], &p.edges[S]) {
                    continue;
                }
            }
            if x > 0 && y > 0 {
                // vertex at (x, y) is now complete
                let quad = [k - width - 1, k - width, k - 1];
                let mut corners = usize::from(p.cornered);
                for q in quad {
                    corners += usize::from(cands[picks[q]].cornered);
                }
                if corners != 1 {
                    continue 'cand;
                }
            }
            picks.push(i);
            total += rec(cands, picks, width, height);
            picks.pop();
        }
        total
    }
    rec(&cands, &mut picks, width, height)
}
