//! Edge weights for pyramid partitions and their transport under sliding.
//!
//! Vertical edges always weigh 1, so a field only stores horizontal edges,
//! keyed by their left endpoint.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::lattice::{
    direction_of, partner_in_odd_block, Block, Coloring, Dimer, Direction, Orientation, Parity, Vertex, Window,
};
use crate::pyramid::{enumerate_partitions_in, DimerConfig};
use crate::series::{Monomial, TruncatedSeries, Truncation, Vars};
use crate::shuffle::{delete_blocks, slide, DeficientConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightField {
    level: u32,
    coloring: Coloring,
    window: Window,
    /// Horizontal edge weights, row-major by left endpoint, `width - 1` per row.
    horizontal: Vec<Monomial>,
}

impl WeightField {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coloring(&self) -> Coloring {
        self.coloring
    }

    pub fn window(&self) -> Window {
        self.window
    }

    fn h_index(&self, x: i32, y: i32) -> Option<usize> {
        let w = &self.window;
        (x >= w.xmin && x < w.xmax && y >= w.ymin && y <= w.ymax)
            .then(|| (y - w.ymin) as usize * (w.width() - 1) + (x - w.xmin) as usize)
    }

    /// Weight of an edge with both endpoints in the window.
    pub fn weight(&self, d: Dimer) -> Option<Monomial> {
        if !(self.window.contains(d.u()) && self.window.contains(d.v())) {
            return None;
        }
        match d.orientation() {
            Orientation::Vertical => Some(Monomial::ONE),
            Orientation::Horizontal => self.h_index(d.u().x, d.u().y).map(|i| self.horizontal[i]),
        }
    }

    /// Product of the two horizontal edges of `b`.
    pub fn block_product(&self, b: Block) -> Option<Monomial> {
        let [h1, h2] = b.dimers(Orientation::Horizontal);
        Some(self.weight(h1)? * self.weight(h2)?)
    }

    /// Horizontal block products required at this level.
    pub fn expected_block_product(&self, parity: Parity) -> Monomial {
        let a = i64::from(self.level);
        match parity {
            Parity::Odd => Monomial::new(a + 1, a),
            Parity::Even => Monomial::new(a, a - 1),
        }
    }

    /// First block whose horizontal product breaks the level's block law.
    pub fn block_law_violation(&self) -> Option<(Block, Monomial, Monomial)> {
        self.window.blocks().find_map(|b| {
            let got = self.block_product(b).expect("block inside window");
            let want = self.expected_block_product(b.parity(self.coloring));
            (got != want).then_some((b, got, want))
        })
    }

    pub fn to_json(&self) -> FieldJson {
        let mut edges = Vec::with_capacity(self.horizontal.len());
        for y in self.window.ymin..=self.window.ymax {
            for x in self.window.xmin..self.window.xmax {
                let m = self.horizontal[self.h_index(x, y).expect("in range")];
                edges.push(EdgeJson { edge: [[x, y], [x + 1, y]], e0: m.e0, e1: m.e1, weight: m.to_string() });
            }
        }
        FieldJson {
            level: self.level,
            coloring: self.coloring.bit(),
            window: self.window.as_array(),
            vertical_weight: "1",
            horizontal: edges,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldJson {
    pub level: u32,
    pub coloring: u8,
    pub window: [i32; 4],
    pub vertical_weight: &'static str,
    pub horizontal: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeJson {
    pub edge: [[i32; 2]; 2],
    pub e0: i64,
    pub e1: i64,
    pub weight: String,
}

/// The level-0 field for length `n`.
pub fn build_w0_field(n: u32, window: Window) -> WeightField {
    build_w0_field_colored(Coloring::of_length(n), window)
}

/// The level-0 field under an explicit coloring. Each column pair carries a
/// chain of horizontal edges tied together by the block ratios (odd blocks
/// multiply to `q0`, even blocks to `q1^-1`); the northbound edge in rows
/// `-1, 0` is pinned to 1.
pub fn build_w0_field_colored(col: Coloring, window: Window) -> WeightField {
    let lo = window.ymin.min(-1);
    let hi = window.ymax.max(0);
    let odd = Monomial::q0();
    let even = Monomial::q1().inverse();
    let mut horizontal = vec![Monomial::ONE; (window.width() - 1) * window.height()];
    for x in window.xmin..window.xmax {
        let pinned = [-1, 0]
            .into_iter()
            .find(|&r| direction_of(Dimer::horizontal(Vertex::new(x, r)), col) == Direction::N)
            .expect("one of the two rows is northbound");
        let product = |y: i32| {
            let b = Block::new(Vertex::new(x, y));
            if b.parity(col) == Parity::Odd {
                odd
            } else {
                even
            }
        };
        let mut chain: BTreeMap<i32, Monomial> = BTreeMap::new();
        chain.insert(pinned, Monomial::ONE);
        let mut w = Monomial::ONE;
        for y in pinned + 1..=hi {
            w = product(y - 1) / w;
            chain.insert(y, w);
        }
        w = Monomial::ONE;
        for y in (lo..pinned).rev() {
            w = product(y) / w;
            chain.insert(y, w);
        }
        for y in window.ymin..=window.ymax {
            let i = (y - window.ymin) as usize * (window.width() - 1) + (x - window.xmin) as usize;
            horizontal[i] = chain[&y];
        }
    }
    WeightField { level: 0, coloring: col, window, horizontal }
}

/// Pushes a field forward through one slide: the new weight of an edge is the
/// old weight of its partner in the odd block under the old coloring.
pub fn transport_field(f: &WeightField) -> Result<WeightField> {
    let window = f.window.shrink(1)?;
    let mut horizontal = Vec::with_capacity((window.width() - 1) * window.height());
    for y in window.ymin..=window.ymax {
        for x in window.xmin..window.xmax {
            let e = Dimer::horizontal(Vertex::new(x, y));
            let pre = partner_in_odd_block(e, f.coloring);
            horizontal.push(
                f.weight(pre)
                    .ok_or_else(|| Error::Internal(format!("preimage of {e} left the field window")))?,
            );
        }
    }
    Ok(WeightField { level: f.level + 1, coloring: f.coloring.flipped(), window, horizontal })
}

/// The level-`a` field that weighs length-`n` covers on `window`.
pub fn field_for(n: u32, level: u32, window: Window) -> Result<WeightField> {
    // Seeding at length n - a; only the parity of the seed coloring matters.
    let seed = Coloring::of_length(n + level);
    let mut f = build_w0_field_colored(seed, window.expand(level as i32));
    for _ in 0..level {
        f = transport_field(&f)?;
    }
    Ok(f)
}

/// Weight of a cover relative to the empty room of its length: the ratio of
/// the horizontal edges it adds to those it removes.
pub fn weight_under_field(cfg: &DimerConfig, f: &WeightField) -> Result<Monomial> {
    if cfg.coloring() != f.coloring() {
        return usage(format!(
            "length-{} cover cannot be weighed by a field with coloring {}",
            cfg.n(),
            f.coloring().bit()
        ));
    }
    if !f.window().contains_window(&cfg.window()) {
        return usage(format!("field window {} does not contain {}", f.window(), cfg.window()));
    }
    let (added, removed) = cfg.diff_from_empty()?;
    let mut w = Monomial::ONE;
    for d in added {
        w = w * f.weight(d).ok_or_else(|| Error::Internal(format!("no weight for {d}")))?;
    }
    for d in removed {
        w = w / f.weight(d).ok_or_else(|| Error::Internal(format!("no weight for {d}")))?;
    }
    Ok(w)
}

/// Weight of a deficient cover: missing blocks count as vertical pairs.
pub fn weight_deficient(def: &DeficientConfig, f: &WeightField) -> Result<Monomial> {
    weight_under_field(&def.fill_vertical(), f)
}

/// `q0^(a+1) q1^a`, the weight of a horizontal filling of a created block at
/// level `a + 1`.
pub fn fill_factor(a: u32) -> Monomial {
    let a = i64::from(a);
    Monomial::new(a + 1, a)
}

/// An odd-deficient cover with its tracked weight.
#[derive(Clone, Debug)]
pub struct WeightedItem {
    pub def: DeficientConfig,
    pub weight: Monomial,
    pub key: Vec<u8>,
}

/// Window used for `k` propagation steps from length `n` at degree `d`.
pub fn propagation_window(n: u32, d: u32, k: u32) -> Window {
    Window::centered((n + 2 * d + 4 + 2 * k) as i32)
}

fn dedupe(mut items: Vec<WeightedItem>) -> Result<Vec<WeightedItem>> {
    items.par_sort_by(|a, b| a.key.cmp(&b.key));
    let mut out: Vec<WeightedItem> = Vec::with_capacity(items.len());
    for it in items {
        if let Some(last) = out.last() {
            if last.key == it.key {
                if last.weight != it.weight {
                    return Err(Error::Internal(format!(
                        "one deficient cover reached with weights {} and {}",
                        last.weight, it.weight
                    )));
                }
                continue;
            }
        }
        out.push(it);
    }
    Ok(out)
}

/// Deletes the odd blocks of `cfg` (weight `w` at `level`), dividing out the
/// horizontal ones.
fn delete_weighted(cfg: &DimerConfig, w: Monomial, level: u32) -> Result<WeightedItem> {
    let def = delete_blocks(cfg, Parity::Odd);
    let horizontal = def
        .missing()
        .iter()
        .filter(|b| cfg.block_fill(**b) == Some(Orientation::Horizontal))
        .count() as i64;
    // Odd blocks at this level have horizontal product q0^(a+1) q1^a.
    let weight = w / fill_factor(level).pow(horizontal);
    let key = def.canonical_key()?;
    Ok(WeightedItem { def, weight, key })
}

/// Odd-deficient length-`n` covers of degree at most `d` with their level-0
/// weights, ready for `k` propagation steps.
pub fn seed_items(n: u32, d: u32, k: u32) -> Result<Vec<WeightedItem>> {
    let items = enumerate_partitions_in(n, d, propagation_window(n, d, k))?;
    let seeds = items
        .par_iter()
        .map(|e| delete_weighted(&e.config, e.weight, 0))
        .collect::<Result<Vec<_>>>()?;
    dedupe(seeds)
}

/// One shuffling step on weighted items at `level`: slide, fill each created
/// block vertically (factor 1) or horizontally (factor `q0^(a+1) q1^a`),
/// drop weights above degree `d`, and delete the odd blocks of the result.
pub fn propagate_weighted(items: &[WeightedItem], level: u32, d: u32) -> Result<Vec<WeightedItem>> {
    let x = fill_factor(level);
    let next = items
        .par_iter()
        .map(|it| -> Result<Vec<WeightedItem>> {
            let slid = slide(&it.def)?;
            let k = slid.missing_count();
            let mut out = Vec::new();
            // Masks with too many horizontal blocks exceed the degree bound.
            let budget = i64::from(d) - it.weight.total_degree();
            if budget < 0 {
                return Ok(out);
            }
            let max_h = (budget / x.total_degree()) as u32;
            for mask in 0u64..(1u64 << k) {
                let h = mask.count_ones();
                if h > max_h {
                    continue;
                }
                let w = it.weight * x.pow(i64::from(h));
                out.push(delete_weighted(&slid.fill(mask), w, level + 1)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    dedupe(next.into_iter().flatten().collect())
}

/// `Σ (1 + q0^(k+1) q1^k)^m w` over level-`k` items: the truncated sum of
/// level-`k` weights over all fillings.
pub fn filled_sum(items: &[WeightedItem], level: u32, d: u32) -> Result<TruncatedSeries> {
    let trunc = Truncation::TotalDegree(d);
    let one_plus = TruncatedSeries::from_terms(Vars::Q0Q1, trunc, [(Monomial::ONE, 1), (fill_factor(level), 1)])?;
    let mut powers: Vec<TruncatedSeries> = vec![TruncatedSeries::one_q(d)];
    let mut acc = TruncatedSeries::zero_q(d);
    for it in items {
        if !it.weight.is_nonnegative() {
            return Err(Error::Internal(format!("propagated weight {} has a negative exponent", it.weight)));
        }
        let m = it.def.missing_count();
        while powers.len() <= m {
            let next = powers.last().expect("nonempty").mul(&one_plus)?;
            powers.push(next);
        }
        acc = acc.add(&powers[m].mul_monomial(it.weight)?)?;
    }
    Ok(acc)
}

/// Runs `k` steps from length `n` and returns the final items.
pub fn propagate_steps(n: u32, k: u32, d: u32) -> Result<Vec<WeightedItem>> {
    let mut items = seed_items(n, d, k)?;
    for a in 0..k {
        items = propagate_weighted(&items, a, d)?;
    }
    Ok(items)
}

/// Per-item form of one recursion level: for every length-`n` partition of
/// degree at most `d`, sliding its odd-deficient form keeps the weight
/// (`w_{a+1}(S η) = w_a(η)`) and removes exactly `n` blocks. Returns the
/// number of partitions checked.
pub fn check_transport_items(n: u32, a: u32, d: u32) -> Result<usize> {
    let items = enumerate_partitions_in(n, d, propagation_window(n, d, 1))?;
    let window = items[0].config.window();
    let before = field_for(n, a, window)?;
    let after = field_for(n + 1, a + 1, window)?;
    items.par_iter().try_for_each(|e| -> Result<()> {
        let def = delete_blocks(&e.config, Parity::Odd);
        let slid = slide(&def)?;
        let w = weight_deficient(&def, &before)?;
        let w_slid = weight_deficient(&slid, &after)?;
        if w != w_slid {
            return Err(Error::Internal(format!("sliding changed a weight from {w} to {w_slid}")));
        }
        if def.missing_count() != slid.missing_count() + n as usize {
            return Err(Error::Internal(format!(
                "sliding took {} blocks to {}, expected a drop of {n}",
                def.missing_count(),
                slid.missing_count()
            )));
        }
        Ok(())
    })?;
    Ok(items.len())
}
