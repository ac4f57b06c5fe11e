//! Colored square-lattice geometry.
//!
//! A [`Vertex`] `(x, y)` stands for the half-integer point `(x + ½, y + ½)`.
//! The horizontal axis of the pyramid runs between vertex rows `y = -1` and
//! `y = 0`, and the center face of the lattice is the unit square with lower
//! left corner `(-1, -1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub fn step(self, d: Direction) -> Vertex {
        let (dx, dy) = d.delta();
        Vertex::new(self.x + dx, self.y + dy)
    }

    pub fn offset(self, dx: i32, dy: i32) -> Vertex {
        Vertex::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    S,
    E,
    W,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::N, Direction::S, Direction::E, Direction::W];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::N => (0, 1),
            Direction::S => (0, -1),
            Direction::E => (1, 0),
            Direction::W => (-1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::N => Direction::S,
            Direction::S => Direction::N,
            Direction::E => Direction::W,
            Direction::W => Direction::E,
        }
    }

    pub fn from_delta(dx: i32, dy: i32) -> Option<Direction> {
        match (dx, dy) {
            (0, 1) => Some(Direction::N),
            (0, -1) => Some(Direction::S),
            (1, 0) => Some(Direction::E),
            (-1, 0) => Some(Direction::W),
            _ => None,
        }
    }
}

/// Checkerboard coloring: a vertex is black iff `(x + y) mod 2 == c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring(u8);

impl Coloring {
    pub fn new(c: u8) -> Self {
        Coloring(c & 1)
    }

    /// The usual coloring for length `n`: `c = n mod 2`, which makes the
    /// upper-left vertex `(-1, 0)` of the center face black for odd `n`.
    pub fn of_length(n: u32) -> Self {
        Coloring((n % 2) as u8)
    }

    pub fn bit(self) -> u8 {
        self.0
    }

    pub fn flipped(self) -> Self {
        Coloring(1 - self.0)
    }

    pub fn is_black(self, v: Vertex) -> bool {
        (v.x + v.y).rem_euclid(2) == i32::from(self.0)
    }
}

pub fn is_black(v: Vertex, col: Coloring) -> bool {
    col.is_black(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn other(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }
}

/// An edge between adjacent vertices, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimer {
    u: Vertex,
    v: Vertex,
}

impl Dimer {
    pub fn new(a: Vertex, b: Vertex) -> Result<Dimer> {
        let dx = (a.x - b.x).abs();
        let dy = (a.y - b.y).abs();
        if dx + dy != 1 {
            return invalid(format!("{a} and {b} are not adjacent"));
        }
        Ok(Self::ordered(a, b))
    }

    /// The dimer from `v` in direction `d`.
    pub fn from_link(v: Vertex, d: Direction) -> Dimer {
        Self::ordered(v, v.step(d))
    }

    fn ordered(a: Vertex, b: Vertex) -> Dimer {
        if a <= b {
            Dimer { u: a, v: b }
        } else {
            Dimer { u: b, v: a }
        }
    }

    pub fn horizontal(left: Vertex) -> Dimer {
        Dimer { u: left, v: left.offset(1, 0) }
    }

    pub fn vertical(bottom: Vertex) -> Dimer {
        Dimer { u: bottom, v: bottom.offset(0, 1) }
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.u, self.v]
    }

    pub fn orientation(self) -> Orientation {
        if self.u.y == self.v.y {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn translate(self, dx: i32, dy: i32) -> Dimer {
        Dimer { u: self.u.offset(dx, dy), v: self.v.offset(dx, dy) }
    }

    /// The two blocks containing this dimer.
    pub fn blocks(self) -> [Block; 2] {
        match self.orientation() {
            Orientation::Horizontal => [Block::new(self.u), Block::new(self.u.offset(0, -1))],
            Orientation::Vertical => [Block::new(self.u), Block::new(self.u.offset(-1, 0))],
        }
    }
}

impl fmt::Display for Dimer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl Serialize for Dimer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.u.x, self.u.y], [self.v.x, self.v.y]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dimer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [[x1, y1], [x2, y2]] = <[[i32; 2]; 2]>::deserialize(d)?;
        Dimer::new(Vertex::new(x1, y1), Vertex::new(x2, y2)).map_err(serde::de::Error::custom)
    }
}

/// A 2x2 square of vertices, identified by its lower-left corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub corner: Vertex,
}

impl Block {
    pub fn new(corner: Vertex) -> Self {
        Block { corner }
    }

    pub fn upper_left(self) -> Vertex {
        self.corner.offset(0, 1)
    }

    pub fn vertices(self) -> [Vertex; 4] {
        let c = self.corner;
        [c, c.offset(1, 0), c.offset(0, 1), c.offset(1, 1)]
    }

    pub fn parity(self, col: Coloring) -> Parity {
        block_parity(self, col)
    }

    /// The two parallel dimers filling this block.
    pub fn dimers(self, o: Orientation) -> [Dimer; 2] {
        let c = self.corner;
        match o {
            Orientation::Horizontal => [Dimer::horizontal(c), Dimer::horizontal(c.offset(0, 1))],
            Orientation::Vertical => [Dimer::vertical(c), Dimer::vertical(c.offset(1, 0))],
        }
    }
}

impl Serialize for Block {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.corner.x, self.corner.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[i32; 2]>::deserialize(d)?;
        Ok(Block::new(Vertex::new(x, y)))
    }
}

/// A block is odd iff its upper-left vertex is black.
pub fn block_parity(b: Block, col: Coloring) -> Parity {
    if col.is_black(b.upper_left()) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// The unique odd block containing `d`.
pub fn odd_block_of(d: Dimer, col: Coloring) -> Block {
    let [a, b] = d.blocks();
    // The two upper-left corners differ by one step, so exactly one is black.
    if block_parity(a, col) == Parity::Odd {
        a
    } else {
        b
    }
}

/// The other dimer in the odd block containing `d`; an involution.
pub fn partner_in_odd_block(d: Dimer, col: Coloring) -> Dimer {
    let block = odd_block_of(d, col);
    let [first, second] = block.dimers(d.orientation());
    if first == d {
        second
    } else {
        first
    }
}

/// The direction `d` moves under sliding.
pub fn direction_of(d: Dimer, col: Coloring) -> Direction {
    let p = partner_in_odd_block(d, col);
    Direction::from_delta(p.u.x - d.u.x, p.u.y - d.u.y).expect("partner is one step away")
}

/// An inclusive rectangle of vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    pub xmin: i32,
    pub ymin: i32,
    pub xmax: i32,
    pub ymax: i32,
}

impl Window {
    pub fn new(xmin: i32, ymin: i32, xmax: i32, ymax: i32) -> Result<Self> {
        if xmin > xmax || ymin > ymax {
            return invalid(format!("empty window [{xmin}, {ymin}, {xmax}, {ymax}]"));
        }
        Ok(Window { xmin, ymin, xmax, ymax })
    }

    /// The `2h x 2h` window symmetric about the center face.
    pub fn centered(half_width: i32) -> Self {
        let h = half_width.max(1);
        Window { xmin: -h, ymin: -h, xmax: h - 1, ymax: h - 1 }
    }

    pub fn width(&self) -> usize {
        (self.xmax - self.xmin + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.ymax - self.ymin + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x >= self.xmin && v.x <= self.xmax && v.y >= self.ymin && v.y <= self.ymax
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.xmin >= self.xmin && other.xmax <= self.xmax && other.ymin >= self.ymin && other.ymax <= self.ymax
    }

    pub fn contains_block(&self, b: Block) -> bool {
        self.contains(b.corner) && self.contains(b.corner.offset(1, 1))
    }

    pub fn index(&self, v: Vertex) -> Option<usize> {
        self.contains(v)
            .then(|| (v.y - self.ymin) as usize * self.width() + (v.x - self.xmin) as usize)
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        let w = self.width();
        Vertex::new(self.xmin + (i % w) as i32, self.ymin + (i / w) as i32)
    }

    /// Vertices in row-major order (by `y`, then `x`).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let w = *self;
        (w.ymin..=w.ymax).flat_map(move |y| (w.xmin..=w.xmax).map(move |x| Vertex::new(x, y)))
    }

    /// Blocks lying entirely inside the window.
    pub fn blocks(&self) -> impl Iterator<Item = Block> {
        let w = *self;
        (w.ymin..w.ymax).flat_map(move |y| (w.xmin..w.xmax).map(move |x| Block::new(Vertex::new(x, y))))
    }

    pub fn expand(&self, k: i32) -> Window {
        Window {
            xmin: self.xmin - k,
            ymin: self.ymin - k,
            xmax: self.xmax + k,
            ymax: self.ymax + k,
        }
    }

    pub fn shrink(&self, k: i32) -> Result<Window> {
        Window::new(self.xmin + k, self.ymin + k, self.xmax - k, self.ymax - k)
    }

    /// Whether `v` lies on the outermost ring of the window.
    pub fn on_boundary(&self, v: Vertex) -> bool {
        self.contains(v) && (v.x == self.xmin || v.x == self.xmax || v.y == self.ymin || v.y == self.ymax)
    }

    pub fn as_array(&self) -> [i32; 4] {
        [self.xmin, self.ymin, self.xmax, self.ymax]
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.xmin, self.ymin, self.xmax, self.ymax)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C1: Coloring = Coloring(1);
    const C0: Coloring = Coloring(0);

    #[test]
    fn coloring_examples() {
        assert!(is_black(Vertex::new(-1, 0), C1));
        assert!(!is_black(Vertex::new(0, 0), C1));
        assert!(!is_black(Vertex::new(-1, 0), C0));
        assert_eq!(Coloring::of_length(3), C1);
        assert_eq!(Coloring::of_length(2), C0);
    }

    #[test]
    fn block_parity_examples() {
        assert_eq!(block_parity(Block::new(Vertex::new(-1, -1)), C1), Parity::Odd);
        assert_eq!(block_parity(Block::new(Vertex::new(0, -1)), C1), Parity::Even);
        assert_eq!(block_parity(Block::new(Vertex::new(-1, -1)), C0), Parity::Even);
    }

    #[test]
    fn partner_examples() {
        let d = Dimer::vertical(Vertex::new(-1, -1));
        let p = partner_in_odd_block(d, C1);
        assert_eq!(p, Dimer::vertical(Vertex::new(0, -1)));
        assert_eq!(direction_of(d, C1), Direction::E);
        assert_eq!(partner_in_odd_block(p, C1), d);
        assert_eq!(direction_of(p, C1), Direction::W);

        // The block above {(-1,0),(0,0)} has a white upper-left vertex, so the
        // odd block is the one below and the dimer moves south.
        let h = Dimer::horizontal(Vertex::new(-1, 0));
        assert_eq!(block_parity(Block::new(Vertex::new(-1, 0)), C1), Parity::Even);
        assert_eq!(partner_in_odd_block(h, C1), Dimer::horizontal(Vertex::new(-1, -1)));
        assert_eq!(direction_of(h, C1), Direction::S);
    }

    fn window_dimers(w: Window) -> impl Iterator<Item = Dimer> {
        w.vertices().flat_map(|v| [Dimer::horizontal(v), Dimer::vertical(v)])
    }

    #[test]
    fn exactly_one_odd_block_per_dimer() {
        for col in [C0, C1] {
            for d in window_dimers(Window::centered(10)) {
                let odd = d.blocks().iter().filter(|b| b.parity(col) == Parity::Odd).count();
                assert_eq!(odd, 1, "{d}");
            }
        }
    }

    #[test]
    fn partner_is_involution_and_preserves_orientation() {
        for col in [C0, C1] {
            for d in window_dimers(Window::centered(10)) {
                let p = partner_in_odd_block(d, col);
                assert_eq!(partner_in_odd_block(p, col), d);
                assert_eq!(p.orientation(), d.orientation());
                assert_eq!(direction_of(p, col), direction_of(d, col).opposite());
                let dir = direction_of(d, col);
                match d.orientation() {
                    Orientation::Horizontal => assert!(matches!(dir, Direction::N | Direction::S)),
                    Orientation::Vertical => assert!(matches!(dir, Direction::E | Direction::W)),
                }
                assert_eq!(direction_of(d.translate(2, 0), col), dir);
                assert_eq!(direction_of(d.translate(0, 2), col), dir);
            }
        }
    }

    #[test]
    fn parity_flips_with_coloring() {
        for b in Window::centered(10).blocks() {
            assert_ne!(b.parity(C0), b.parity(C1));
        }
    }

    #[test]
    fn dimer_json_is_sorted_pairs() {
        let d = Dimer::new(Vertex::new(0, 1), Vertex::new(0, 0)).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), "[[0,0],[0,1]]");
        let back: Dimer = serde_json::from_str("[[0,1],[0,0]]").unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Dimer>("[[0,0],[1,1]]").is_err());
    }

    #[test]
    fn window_indexing() {
        let w = Window::centered(3);
        assert_eq!(w.len(), 36);
        for (i, v) in w.vertices().enumerate() {
            assert_eq!(w.index(v), Some(i));
            assert_eq!(w.vertex_at(i), v);
        }
        assert_eq!(w.index(Vertex::new(3, 0)), None);
        assert_eq!(w.blocks().count(), 25);
    }
}
