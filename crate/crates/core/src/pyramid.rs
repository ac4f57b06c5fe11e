//! Pyramid partitions as dimer covers asymptotic to the empty room.
//!
//! A [`DimerConfig`] stores, for every vertex of a finite window, the
//! direction of its partner. Outside the window the cover is the empty room
//! of the same length, so dimers that cross the window boundary must agree
//! with it.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, LazyLock, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, usage, Error, Result};
use crate::lattice::{Block, Coloring, Dimer, Direction, Orientation, Parity, Vertex, Window};
use crate::series::{Monomial, TruncatedSeries};
use crate::shuffle;

/// A (possibly partial) dimer cover of a window, labelled by its length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimerConfig {
    n: u32,
    window: Window,
    links: Vec<Option<Direction>>,
}

impl DimerConfig {
    pub(crate) fn from_links(n: u32, window: Window, links: Vec<Option<Direction>>) -> Self {
        debug_assert_eq!(links.len(), window.len());
        DimerConfig { n, window, links }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// The usual coloring for this length.
    pub fn coloring(&self) -> Coloring {
        Coloring::of_length(self.n)
    }

    /// Direction from `v` to its partner, `None` if `v` is uncovered or
    /// outside the window.
    pub fn link(&self, v: Vertex) -> Option<Direction> {
        self.window.index(v).and_then(|i| self.links[i])
    }

    pub(crate) fn set_link(&mut self, v: Vertex, d: Option<Direction>) {
        let i = self.window.index(v).expect("vertex inside window");
        self.links[i] = d;
    }

    /// Whether dimer `d` is present; requires one endpoint in the window.
    pub fn contains_dimer(&self, d: Dimer) -> bool {
        let [a, b] = d.endpoints();
        let dir = Direction::from_delta(b.x - a.x, b.y - a.y).expect("adjacent");
        if self.window.contains(a) {
            self.link(a) == Some(dir)
        } else if self.window.contains(b) {
            self.link(b) == Some(dir.opposite())
        } else {
            false
        }
    }

    pub fn is_covered(&self, v: Vertex) -> bool {
        self.link(v).is_some()
    }

    /// Every dimer with at least one endpoint in the window, sorted.
    pub fn dimers(&self) -> Vec<Dimer> {
        let mut out: Vec<Dimer> = self
            .window
            .vertices()
            .filter_map(|v| self.link(v).map(|d| Dimer::from_link(v, d)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Dimers with both endpoints in the window, sorted.
    pub fn interior_dimers(&self) -> Vec<Dimer> {
        self.dimers()
            .into_iter()
            .filter(|d| self.window.contains(d.u()) && self.window.contains(d.v()))
            .collect()
    }

    /// How block `b` is filled, if it holds two parallel dimers.
    pub fn block_fill(&self, b: Block) -> Option<Orientation> {
        let c = b.corner;
        if !self.window.contains_block(b) {
            return None;
        }
        if self.link(c) == Some(Direction::N) && self.link(c.offset(1, 0)) == Some(Direction::N) {
            Some(Orientation::Vertical)
        } else if self.link(c) == Some(Direction::E) && self.link(c.offset(0, 1)) == Some(Direction::E) {
            Some(Orientation::Horizontal)
        } else {
            None
        }
    }

    /// Fills block `b` with a pair of dimers, or clears it with `None`.
    pub(crate) fn set_block(&mut self, b: Block, fill: Option<Orientation>) {
        let c = b.corner;
        let [ll, lr, ul, ur] = [c, c.offset(1, 0), c.offset(0, 1), c.offset(1, 1)];
        let (a, bb, cc, dd) = match fill {
            None => (None, None, None, None),
            Some(Orientation::Vertical) => {
                (Some(Direction::N), Some(Direction::N), Some(Direction::S), Some(Direction::S))
            }
            Some(Orientation::Horizontal) => {
                (Some(Direction::E), Some(Direction::W), Some(Direction::E), Some(Direction::W))
            }
        };
        self.set_link(ll, a);
        self.set_link(lr, bb);
        self.set_link(ul, cc);
        self.set_link(ur, dd);
    }

    /// Links inside the window are mutual.
    pub fn check_consistent(&self) -> Result<()> {
        for v in self.window.vertices() {
            if let Some(d) = self.link(v) {
                let w = v.step(d);
                if self.window.contains(w) && self.link(w) != Some(d.opposite()) {
                    return invalid(format!("vertex {v} points {d:?} but {w} does not point back"));
                }
            }
        }
        Ok(())
    }

    /// Full validation against the empty room: mutual links, every vertex
    /// covered, and boundary-crossing dimers identical to the empty room.
    pub fn validate(&self) -> Result<()> {
        self.check_consistent()?;
        if let Some(v) = self.window.vertices().find(|&v| !self.is_covered(v)) {
            return invalid(format!("vertex {v} is uncovered"));
        }
        self.check_boundary()
    }

    /// Dimers on the outer ring agree with the empty room.
    pub fn check_boundary(&self) -> Result<()> {
        let empty = empty_room(self.n, self.window)?;
        for v in self.window.vertices().filter(|&v| self.window.on_boundary(v)) {
            if self.link(v) != empty.link(v) {
                return Err(Error::WindowTooSmall(format!(
                    "length-{} config differs from the empty room at boundary vertex {v}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Dimers present here but not in the empty room, and vice versa.
    pub fn diff_from_empty(&self) -> Result<(Vec<Dimer>, Vec<Dimer>)> {
        let empty = empty_room(self.n, self.window)?;
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for (i, (&mine, &theirs)) in self.links.iter().zip(empty.links.iter()).enumerate() {
            if mine != theirs {
                let v = self.window.vertex_at(i);
                if let Some(d) = mine {
                    added.insert(Dimer::from_link(v, d));
                }
                if let Some(d) = theirs {
                    removed.insert(Dimer::from_link(v, d));
                }
            }
        }
        Ok((added.into_iter().collect(), removed.into_iter().collect()))
    }

    /// Deterministic encoding of the symmetric difference with the empty
    /// room. Independent of the window the config happens to be stored in.
    pub fn canonical_key(&self) -> Result<Vec<u8>> {
        let (added, removed) = self.diff_from_empty()?;
        let mut all: Vec<Dimer> = added.into_iter().chain(removed).collect();
        all.sort();
        let mut key = Vec::with_capacity(4 + all.len() * 16);
        key.extend_from_slice(&self.n.to_le_bytes());
        for d in all {
            for v in d.endpoints() {
                key.extend_from_slice(&v.x.to_le_bytes());
                key.extend_from_slice(&v.y.to_le_bytes());
            }
        }
        Ok(key)
    }

    /// Moves the config into another window, cropping or extending with the
    /// empty room. Fails if the cropped part differs from the empty room.
    pub fn rewindow(&self, window: Window) -> Result<DimerConfig> {
        let empty = empty_room(self.n, window)?;
        let mut out = (*empty).clone();
        for v in self.window.vertices() {
            if window.contains(v) {
                out.set_link(v, self.link(v));
            }
        }
        let (added, removed) = self.diff_from_empty()?;
        for d in added.iter().chain(&removed) {
            if !(window.contains(d.u()) && window.contains(d.v())) {
                return Err(Error::WindowTooSmall(format!("dimer {d} differs from the empty room outside {window}")));
            }
        }
        out.check_consistent()?;
        Ok(out)
    }

    pub fn to_json(&self) -> Result<ConfigJson> {
        let (added, _) = self.diff_from_empty()?;
        Ok(ConfigJson {
            n: self.n,
            window: self.window.as_array(),
            diff_dimers: added,
            missing: Vec::new(),
            missing_parity: None,
        })
    }

    /// Rebuilds a full config from its JSON form.
    pub fn from_json(json: &ConfigJson) -> Result<DimerConfig> {
        if !json.missing.is_empty() {
            return usage("config JSON lists missing blocks; load it as a deficient config");
        }
        let cfg = config_from_parts(json.n, window_from_array(json.window)?, &json.diff_dimers, &[])?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub(crate) fn window_from_array(w: [i32; 4]) -> Result<Window> {
    Window::new(w[0], w[1], w[2], w[3])
}

/// Empty room, minus every dimer touching `added` or `missing`, plus `added`.
pub(crate) fn config_from_parts(n: u32, window: Window, added: &[Dimer], missing: &[Block]) -> Result<DimerConfig> {
    if n < 1 {
        return invalid("length must be at least 1");
    }
    let mut cfg = (*empty_room(n, window)?).clone();
    let mut touched: BTreeSet<Vertex> = BTreeSet::new();
    for d in added {
        for v in d.endpoints() {
            if !window.contains(v) {
                return invalid(format!("dimer {d} leaves the window {window}"));
            }
            if !touched.insert(v) {
                return invalid(format!("vertex {v} is covered twice"));
            }
        }
    }
    for b in missing {
        if !window.contains_block(*b) {
            return invalid(format!("missing block {:?} leaves the window", b.corner));
        }
        for v in b.vertices() {
            if !touched.insert(v) {
                return invalid(format!("vertex {v} is both missing and covered"));
            }
        }
    }
    // Clear the empty-room dimers at every touched vertex (both endpoints).
    for &v in &touched {
        if let Some(d) = cfg.link(v) {
            let w = v.step(d);
            if !window.contains(w) {
                return invalid(format!("vertex {v} pairs with {w} outside the window"));
            }
            cfg.set_link(w, None);
        }
        cfg.set_link(v, None);
    }
    for d in added {
        let (a, b) = (d.u(), d.v());
        let dir = Direction::from_delta(b.x - a.x, b.y - a.y).expect("adjacent");
        cfg.set_link(a, Some(dir));
        cfg.set_link(b, Some(dir.opposite()));
    }
    // Vertices freed above but not re-covered would be holes.
    for v in window.vertices() {
        let in_missing = missing.iter().any(|b| b.vertices().contains(&v));
        if !cfg.is_covered(v) && !in_missing {
            return invalid(format!("vertex {v} is left uncovered"));
        }
    }
    Ok(cfg)
}

/// JSON form of a config: the dimers it has beyond the empty room.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub n: u32,
    pub window: [i32; 4],
    pub diff_dimers: Vec<Dimer>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub missing: Vec<Block>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub missing_parity: Option<Parity>,
}

// ---------------------------------------------------------------------------
// Brick model (length 1)

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shade {
    Dark,
    Light,
}

/// A brick of the length-1 empty room. Dark bricks sit at even depths and
/// show two vertical dimers; light bricks sit at odd depths and show two
/// horizontal dimers. The footprint of brick `(i, j)` is the block with
/// corner `(i - 1, j - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Brick {
    pub depth: u32,
    pub i: i32,
    pub j: i32,
}

fn same_parity(a: i32, b: i64) -> bool {
    (i64::from(a) - b).rem_euclid(2) == 0
}

impl Brick {
    pub fn new(i: i32, j: i32, depth: u32) -> Self {
        Brick { depth, i, j }
    }

    pub fn shade(&self) -> Shade {
        if self.depth.is_multiple_of(2) {
            Shade::Dark
        } else {
            Shade::Light
        }
    }

    /// Whether this brick belongs to the length-1 empty room.
    pub fn exists(&self) -> bool {
        let m = i64::from(self.depth / 2);
        let (i, j) = (i64::from(self.i), i64::from(self.j));
        match self.shade() {
            Shade::Dark => i.abs() <= m && j.abs() <= m && same_parity(self.i, m) && same_parity(self.j, m),
            Shade::Light => {
                i.abs() <= m && j.abs() <= m + 1 && same_parity(self.i, m) && same_parity(self.j, m + 1)
            }
        }
    }

    pub fn block(&self) -> Block {
        Block::new(Vertex::new(self.i - 1, self.j - 1))
    }

    /// The two bricks this one rests upon.
    pub fn resting_on(&self) -> [Brick; 2] {
        let d = self.depth + 1;
        match self.shade() {
            Shade::Dark => [Brick::new(self.i, self.j - 1, d), Brick::new(self.i, self.j + 1, d)],
            Shade::Light => [Brick::new(self.i - 1, self.j, d), Brick::new(self.i + 1, self.j, d)],
        }
    }

    /// Bricks of the empty room resting upon this one.
    pub fn supporting(&self) -> Vec<Brick> {
        if self.depth == 0 {
            return Vec::new();
        }
        let d = self.depth - 1;
        let cands = match self.shade() {
            Shade::Dark => [Brick::new(self.i - 1, self.j, d), Brick::new(self.i + 1, self.j, d)],
            Shade::Light => [Brick::new(self.i, self.j - 1, d), Brick::new(self.i, self.j + 1, d)],
        };
        cands.into_iter().filter(Brick::exists).collect()
    }

    /// The brick at `depth` whose footprint contains `v`, if any.
    pub fn covering(v: Vertex, depth: u32) -> Option<Brick> {
        let m = i64::from(depth / 2);
        let pick = |c: i32, parity: i64| if same_parity(c, parity) { c } else { c + 1 };
        let b = if depth.is_multiple_of(2) {
            Brick::new(pick(v.x, m), pick(v.y, m), depth)
        } else {
            Brick::new(pick(v.x, m), pick(v.y, m + 1), depth)
        };
        b.exists().then_some(b)
    }

    /// Direction from `v` to its partner in this brick's stencil.
    fn stencil_link(&self, v: Vertex) -> Direction {
        match self.shade() {
            Shade::Dark => {
                if v.y == self.j - 1 {
                    Direction::N
                } else {
                    Direction::S
                }
            }
            Shade::Light => {
                if v.x == self.i - 1 {
                    Direction::E
                } else {
                    Direction::W
                }
            }
        }
    }
}

/// Bricks removed from the length-1 empty room.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedSet {
    pub bricks: BTreeSet<Brick>,
}

impl RemovedSet {
    pub fn new(bricks: impl IntoIterator<Item = Brick>) -> Self {
        RemovedSet { bricks: bricks.into_iter().collect() }
    }

    /// Every brick is real and everything resting on a removed brick is
    /// removed too.
    pub fn validate(&self) -> Result<()> {
        for b in &self.bricks {
            if !b.exists() {
                return invalid(format!("{b:?} is not a brick of the empty room"));
            }
            for s in b.supporting() {
                if !self.bricks.contains(&s) {
                    return invalid(format!("{b:?} is removed but {s:?}, which rests on it, is not"));
                }
            }
        }
        Ok(())
    }

    /// `q0^#dark q1^#light`.
    pub fn weight(&self) -> Monomial {
        let dark = self.bricks.iter().filter(|b| b.shade() == Shade::Dark).count() as i64;
        Monomial::new(dark, self.bricks.len() as i64 - dark)
    }

    /// Bricks that could be removed next.
    pub fn removable(&self) -> Vec<Brick> {
        let mut cands: BTreeSet<Brick> = BTreeSet::new();
        cands.insert(Brick::new(0, 0, 0));
        for b in &self.bricks {
            cands.extend(b.resting_on());
        }
        cands
            .into_iter()
            .filter(|b| !self.bricks.contains(b) && b.exists())
            .filter(|b| b.supporting().iter().all(|s| self.bricks.contains(s)))
            .collect()
    }
}

/// The length-1 pyramid seen from above after removing `removed`.
pub fn bricks_to_dimers(removed: &RemovedSet, window: Window) -> Result<DimerConfig> {
    removed.validate()?;
    let reach = window
        .xmin
        .abs()
        .max(window.xmax.abs())
        .max(window.ymin.abs())
        .max(window.ymax.abs()) as u32;
    let max_removed = removed.bricks.iter().map(|b| b.depth).max().unwrap_or(0);
    let limit = 2 * reach + max_removed + 8;
    let mut links = Vec::with_capacity(window.len());
    for v in window.vertices() {
        let top = (0..=limit)
            .filter_map(|d| Brick::covering(v, d))
            .find(|b| !removed.bricks.contains(b))
            .ok_or_else(|| Error::Internal(format!("no visible brick above {v}")))?;
        links.push(Some(top.stencil_link(v)));
    }
    let cfg = DimerConfig::from_links(1, window, links);
    cfg.check_consistent()
        .map_err(|e| Error::Internal(format!("brick stencils do not assemble: {e}")))?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// Empty rooms

type RoomCache = Mutex<HashMap<(u32, Window), Arc<DimerConfig>>>;

static EMPTY_ROOMS: LazyLock<RoomCache> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// The empty room of length `n` on `window`.
///
/// Length 1 comes from the brick model; longer rooms come from sliding the
/// odd-deficient room of the previous length, which leaves no blocks to
/// create.
pub fn empty_room(n: u32, window: Window) -> Result<Arc<DimerConfig>> {
    if n < 1 {
        return usage("empty room length must be at least 1");
    }
    if !window.contains_window(&Window::centered(n as i32 + 1)) {
        return usage(format!("window {window} cannot hold the length-{n} empty room"));
    }
    if let Some(hit) = EMPTY_ROOMS.lock().expect("cache lock").get(&(n, window)) {
        return Ok(Arc::clone(hit));
    }
    let room = if n == 1 {
        bricks_to_dimers(&RemovedSet::default(), window)?
    } else {
        let prev = empty_room(n - 1, window.expand(2))?;
        let deficient = shuffle::delete_blocks(&prev, Parity::Odd);
        let (slid_window, links) = shuffle::slide_links(deficient.config(), prev.coloring())?;
        let slid = DimerConfig::from_links(n, slid_window, links);
        let mut out = DimerConfig::from_links(n, window, vec![None; window.len()]);
        for v in window.vertices() {
            out.set_link(v, slid.link(v));
        }
        if let Some(v) = window.vertices().find(|&v| !out.is_covered(v)) {
            return Err(Error::Internal(format!("sliding the length-{} room left {v} uncovered", n - 1)));
        }
        out.check_consistent()?;
        out
    };
    let room = Arc::new(room);
    EMPTY_ROOMS
        .lock()
        .expect("cache lock")
        .insert((n, window), Arc::clone(&room));
    Ok(room)
}

/// Number of blocks of the given parity that hold two parallel dimers.
pub fn count_filled_blocks(cfg: &DimerConfig, parity: Parity) -> usize {
    let col = cfg.coloring();
    cfg.window
        .blocks()
        .filter(|b| b.parity(col) == parity && cfg.block_fill(*b).is_some())
        .count()
}

// ---------------------------------------------------------------------------
// Elementary moves and enumeration

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    /// Odd block, vertical pair to horizontal pair: one more dark brick.
    Odd,
    /// Even block, horizontal pair to vertical pair: one more light brick.
    Even,
}

impl MoveKind {
    pub fn weight(self) -> Monomial {
        match self {
            MoveKind::Odd => Monomial::q0(),
            MoveKind::Even => Monomial::q1(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flip {
    pub block: Block,
    pub kind: MoveKind,
}

/// All block flips that add one brick.
pub fn increasing_flips(cfg: &DimerConfig) -> Vec<Flip> {
    let col = cfg.coloring();
    cfg.window
        .blocks()
        .filter_map(|b| match (b.parity(col), cfg.block_fill(b)) {
            (Parity::Odd, Some(Orientation::Vertical)) => Some(Flip { block: b, kind: MoveKind::Odd }),
            (Parity::Even, Some(Orientation::Horizontal)) => Some(Flip { block: b, kind: MoveKind::Even }),
            _ => None,
        })
        .collect()
}

pub fn apply_flip(cfg: &DimerConfig, flip: Flip) -> DimerConfig {
    let mut out = cfg.clone();
    let target = match flip.kind {
        MoveKind::Odd => Orientation::Horizontal,
        MoveKind::Even => Orientation::Vertical,
    };
    out.set_block(flip.block, Some(target));
    out
}

/// Window used when enumerating length-`n` partitions up to degree `d`.
pub fn enumeration_window(n: u32, d: u32) -> Window {
    Window::centered((n + 2 * d + 4) as i32)
}

#[derive(Clone, Debug)]
pub struct Enumerated {
    pub config: DimerConfig,
    pub weight: Monomial,
    pub key: Vec<u8>,
}

/// Pyramid partitions of length `n` with weight degree at most `d`, in order
/// of degree and then canonical key.
pub fn enumerate_partitions(n: u32, d: u32) -> Result<Vec<Enumerated>> {
    enumerate_partitions_in(n, d, enumeration_window(n, d))
}

pub fn enumerate_partitions_in(n: u32, d: u32, window: Window) -> Result<Vec<Enumerated>> {
    let root = (*empty_room(n, window)?).clone();
    let key = root.canonical_key()?;
    let mut level = vec![Enumerated { config: root, weight: Monomial::ONE, key }];
    let mut out = level.clone();
    for _ in 0..d {
        let mut next: Vec<Enumerated> = level
            .par_iter()
            .flat_map_iter(|e| {
                increasing_flips(&e.config)
                    .into_iter()
                    .map(move |f| (apply_flip(&e.config, f), e.weight * f.kind.weight()))
            })
            .map(|(config, weight)| {
                let key = config.canonical_key()?;
                Ok(Enumerated { config, weight, key })
            })
            .collect::<Result<_>>()?;
        next.par_sort_by(|a, b| a.key.cmp(&b.key));
        next.dedup_by(|a, b| a.key == b.key);
        next.par_iter().try_for_each(|e| e.config.check_boundary())?;
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Ok(out)
}

/// `Σ w0(π)` over the partitions of length `n`, truncated at degree `d`.
pub fn partition_series(n: u32, d: u32) -> Result<TruncatedSeries> {
    let items = enumerate_partitions(n, d)?;
    sum_weights(items.iter().map(|e| e.weight), d)
}

pub(crate) fn sum_weights(weights: impl Iterator<Item = Monomial>, d: u32) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::zero_q(d);
    for w in weights {
        acc = acc.add(&TruncatedSeries::from_terms(
            crate::series::Vars::Q0Q1,
            crate::series::Truncation::TotalDegree(d),
            [(w, 1)],
        )?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::formula_z;

    #[test]
    fn empty_room_one_center_block() {
        let e = empty_room(1, Window::centered(6)).unwrap();
        e.validate().unwrap();
        assert_eq!(e.block_fill(Block::new(Vertex::new(-1, -1))), Some(Orientation::Vertical));
        assert_eq!(count_filled_blocks(&e, Parity::Odd), 1);
    }

    #[test]
    fn empty_rooms_have_n_odd_blocks_in_a_column() {
        for n in 1..=4 {
            let e = empty_room(n, Window::centered(n as i32 + 8)).unwrap();
            e.validate().unwrap();
            let col = e.coloring();
            let odd: Vec<Block> = e
                .window()
                .blocks()
                .filter(|b| b.parity(col) == Parity::Odd && e.block_fill(*b).is_some())
                .collect();
            assert_eq!(odd.len(), n as usize, "n = {n}");
            assert!(odd.iter().all(|b| b.corner.x == odd[0].corner.x), "n = {n}: {odd:?}");
        }
    }

    #[test]
    fn empty_room_is_window_independent() {
        let small = empty_room(3, Window::centered(6)).unwrap();
        let big = empty_room(3, Window::centered(10)).unwrap();
        for v in small.window().vertices() {
            assert_eq!(small.link(v), big.link(v));
        }
    }

    #[test]
    fn empty_room_rejects_tiny_window() {
        assert!(matches!(empty_room(3, Window::centered(2)), Err(Error::Usage(_))));
    }

    #[test]
    fn removing_the_apex_flips_the_center_block() {
        let w = Window::centered(6);
        let apex = RemovedSet::new([Brick::new(0, 0, 0)]);
        let cfg = bricks_to_dimers(&apex, w).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.block_fill(Block::new(Vertex::new(-1, -1))), Some(Orientation::Horizontal));

        let two = RemovedSet::new([Brick::new(0, 0, 0), Brick::new(0, 1, 1)]);
        let cfg2 = bricks_to_dimers(&two, w).unwrap();
        assert_eq!(cfg2.block_fill(Block::new(Vertex::new(-1, 0))), Some(Orientation::Vertical));
    }

    #[test]
    fn non_closed_removed_set_is_rejected() {
        let bad = RemovedSet::new([Brick::new(0, 1, 1)]);
        assert!(matches!(bricks_to_dimers(&bad, Window::centered(5)), Err(Error::Validation(_))));
    }

    #[test]
    fn flips_from_small_configs() {
        let e1 = empty_room(1, Window::centered(8)).unwrap();
        let f = increasing_flips(&e1);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, MoveKind::Odd);
        let after = apply_flip(&e1, f[0]);
        let f2 = increasing_flips(&after);
        assert_eq!(f2.len(), 2);
        assert!(f2.iter().all(|f| f.kind == MoveKind::Even));

        let e2 = empty_room(2, Window::centered(8)).unwrap();
        assert_eq!(increasing_flips(&e2).len(), 2);
    }

    #[test]
    fn enumerate_small_cases() {
        let zero = enumerate_partitions(1, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].weight, Monomial::ONE);
        let one = enumerate_partitions(1, 1).unwrap();
        let ws: Vec<Monomial> = one.iter().map(|e| e.weight).collect();
        assert_eq!(ws, vec![Monomial::ONE, Monomial::q0()]);
        assert_eq!(partition_series(1, 3).unwrap(), formula_z(1, 3).unwrap());
    }

    #[test]
    fn grading_matches_bfs_level() {
        let items = enumerate_partitions(2, 4).unwrap();
        let mut last = 0;
        for e in &items {
            let deg = e.weight.total_degree();
            assert!(deg >= last);
            last = deg;
            let (added, removed) = e.config.diff_from_empty().unwrap();
            assert_eq!(added.len(), removed.len());
            assert!(added.len() as i64 <= 2 * deg);
        }
    }

    #[test]
    fn keys_are_distinct_and_window_independent() {
        let items = enumerate_partitions(1, 4).unwrap();
        let keys: BTreeSet<_> = items.iter().map(|e| e.key.clone()).collect();
        assert_eq!(keys.len(), items.len());
        let e = empty_room(1, Window::centered(7)).unwrap();
        assert_eq!(e.canonical_key().unwrap(), 1u32.to_le_bytes().to_vec());
        let moved = items[3].config.rewindow(Window::centered(12)).unwrap();
        assert_eq!(moved.canonical_key().unwrap(), items[3].key);
    }

    #[test]
    fn two_paths_reach_the_same_key() {
        let e1 = (*empty_room(1, Window::centered(8)).unwrap()).clone();
        let a = apply_flip(&e1, increasing_flips(&e1)[0]);
        let fl = increasing_flips(&a);
        let b1 = apply_flip(&apply_flip(&a, fl[0]), fl[1]);
        let b2 = apply_flip(&apply_flip(&a, fl[1]), fl[0]);
        assert_eq!(b1.canonical_key().unwrap(), b2.canonical_key().unwrap());
    }

    #[test]
    fn json_round_trip() {
        for e in enumerate_partitions(2, 3).unwrap() {
            let j = e.config.to_json().unwrap();
            let text = serde_json::to_string(&j).unwrap();
            let back = DimerConfig::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, e.config);
        }
    }

    #[test]
    fn brick_model_matches_flip_sequences() {
        // Every upward-closed removed set with at most five bricks.
        let w = Window::centered(10);
        let e1 = (*empty_room(1, w).unwrap()).clone();
        let mut frontier = vec![(RemovedSet::default(), e1)];
        let mut seen = BTreeSet::new();
        for _ in 0..5 {
            let mut next = Vec::new();
            for (set, cfg) in &frontier {
                for b in set.removable() {
                    let mut s = set.clone();
                    s.bricks.insert(b);
                    if !seen.insert(s.bricks.clone()) {
                        continue;
                    }
                    let kind = match b.shade() {
                        Shade::Dark => MoveKind::Odd,
                        Shade::Light => MoveKind::Even,
                    };
                    let flip = Flip { block: b.block(), kind };
                    assert!(increasing_flips(cfg).contains(&flip), "{b:?} not flippable");
                    let flipped = apply_flip(cfg, flip);
                    let direct = bricks_to_dimers(&s, w).unwrap();
                    assert_eq!(direct, flipped);
                    direct.validate().unwrap();
                    next.push((s, flipped));
                }
            }
            frontier = next;
        }
        // weights agree with the BFS counts up to degree 5
        let mut by_weight: HashMap<Monomial, usize> = HashMap::new();
        for set in &seen {
            *by_weight.entry(RemovedSet { bricks: set.clone() }.weight()).or_default() += 1;
        }
        let bfs = enumerate_partitions(1, 5).unwrap();
        let mut bfs_w: HashMap<Monomial, usize> = HashMap::new();
        for e in bfs.iter().skip(1) {
            *bfs_w.entry(e.weight).or_default() += 1;
        }
        assert_eq!(by_weight, bfs_w);
    }
}
