//! Dimer shuffling: deleting blocks, sliding, and creating.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, usage, Error, Result};
use crate::lattice::{partner_in_odd_block, Block, Coloring, Dimer, Direction, Orientation, Parity, Window};
use crate::pyramid::{config_from_parts, empty_room, window_from_array, ConfigJson, DimerConfig};

/// A partial cover whose holes are a disjoint union of blocks of one parity
/// (relative to the usual coloring of its length).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficientConfig {
    config: DimerConfig,
    missing: Vec<Block>,
    parity: Parity,
}

impl DeficientConfig {
    /// Checks the invariants and wraps. `missing` may be in any order.
    pub fn new(config: DimerConfig, missing: impl IntoIterator<Item = Block>, parity: Parity) -> Result<Self> {
        let mut missing: Vec<Block> = missing.into_iter().collect();
        missing.sort();
        let def = DeficientConfig { config, missing, parity };
        def.validate()?;
        Ok(def)
    }

    pub fn config(&self) -> &DimerConfig {
        &self.config
    }

    pub fn n(&self) -> u32 {
        self.config.n()
    }

    pub fn window(&self) -> Window {
        self.config.window()
    }

    /// Missing blocks sorted by corner.
    pub fn missing(&self) -> &[Block] {
        &self.missing
    }

    pub fn missing_count(&self) -> usize {
        self.missing.len()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = &self.config;
        let col = cfg.coloring();
        cfg.check_consistent()?;
        let mut holes = BTreeSet::new();
        for b in &self.missing {
            if !cfg.window().contains_block(*b) {
                return invalid(format!("missing block at {} leaves the window", b.corner));
            }
            if b.parity(col) != self.parity {
                return invalid(format!("missing block at {} is not {:?}", b.corner, self.parity));
            }
            for v in b.vertices() {
                if !holes.insert(v) {
                    return invalid(format!("missing blocks overlap at {v}"));
                }
                if cfg.window().on_boundary(v) {
                    return Err(Error::WindowTooSmall(format!("missing block touches the boundary at {v}")));
                }
            }
        }
        for v in cfg.window().vertices() {
            if cfg.is_covered(v) == holes.contains(&v) {
                return invalid(format!("vertex {v}: coverage does not match the missing blocks"));
            }
        }
        cfg.check_boundary()
    }

    /// Fills every missing block according to `mask`: bit `i` set means the
    /// `i`-th missing block gets a horizontal pair.
    pub fn fill(&self, mask: u64) -> DimerConfig {
        let mut out = self.config.clone();
        for (i, b) in self.missing.iter().enumerate() {
            let o = if mask >> i & 1 == 1 { Orientation::Horizontal } else { Orientation::Vertical };
            out.set_block(*b, Some(o));
        }
        out
    }

    /// Every missing block filled with a vertical pair.
    pub fn fill_vertical(&self) -> DimerConfig {
        self.fill(0)
    }

    pub fn canonical_key(&self) -> Result<Vec<u8>> {
        let mut key = self.config.canonical_key()?;
        key.push(match self.parity {
            Parity::Odd => 1,
            Parity::Even => 2,
        });
        Ok(key)
    }

    pub fn to_json(&self) -> Result<ConfigJson> {
        let (added, _) = self.config.diff_from_empty()?;
        Ok(ConfigJson {
            n: self.n(),
            window: self.window().as_array(),
            diff_dimers: added,
            missing: self.missing.clone(),
            missing_parity: Some(self.parity),
        })
    }

    pub fn from_json(json: &ConfigJson) -> Result<Self> {
        let parity = match (json.missing_parity, json.missing.is_empty()) {
            (Some(p), _) => p,
            (None, true) => Parity::Odd,
            (None, false) => return usage("missing blocks listed without missing_parity"),
        };
        let cfg = config_from_parts(json.n, window_from_array(json.window)?, &json.diff_dimers, &json.missing)?;
        DeficientConfig::new(cfg, json.missing.iter().copied(), parity)
    }
}

/// Deletes every block of `parity` (under the usual coloring of the config's
/// length) that holds two parallel dimers.
pub fn delete_blocks(cfg: &DimerConfig, parity: Parity) -> DeficientConfig {
    let col = cfg.coloring();
    let mut out = cfg.clone();
    let mut missing = Vec::new();
    for b in cfg.window().blocks() {
        if b.parity(col) == parity && cfg.block_fill(b).is_some() {
            out.set_block(b, None);
            missing.push(b);
        }
    }
    missing.sort();
    DeficientConfig { config: out, missing, parity }
}

/// Replaces every dimer by its partner in the odd block (under `col`) that
/// contains it. The result lives on the window shrunk by one ring.
pub(crate) fn slide_links(cfg: &DimerConfig, col: Coloring) -> Result<(Window, Vec<Option<Direction>>)> {
    let inner = cfg.window().shrink(1)?;
    let mut links = Vec::with_capacity(inner.len());
    for v in inner.vertices() {
        let mut found = None;
        for e in Direction::ALL {
            let d = Dimer::from_link(v, e);
            if cfg.contains_dimer(partner_in_odd_block(d, col)) {
                if found.is_some() {
                    return invalid(format!("vertex {v} receives two dimers when sliding"));
                }
                found = Some(e);
            }
        }
        links.push(found);
    }
    Ok((inner, links))
}

/// Slides under `col`, relabels to length `n`, collects holes into blocks of
/// `hole_parity`, and re-pads the outer ring with the empty room of length `n`.
fn slide_to(def: &DeficientConfig, col: Coloring, n: u32, hole_parity: Parity) -> Result<DeficientConfig> {
    let window = def.window();
    let (inner, links) = slide_links(def.config(), col)?;
    let slid = DimerConfig::from_links(n, inner, links);
    let empty = empty_room(n, window)?;
    let inner_ring = inner.vertices().filter(|&v| inner.on_boundary(v));
    for v in inner_ring {
        if slid.link(v) != empty.link(v) {
            return Err(Error::WindowTooSmall(format!(
                "slid config differs from the length-{n} empty room near the boundary at {v}"
            )));
        }
    }
    let mut out = (*empty).clone();
    for v in inner.vertices() {
        out.set_link(v, slid.link(v));
    }
    let out_col = out.coloring();
    let mut seen = BTreeSet::new();
    let mut missing = Vec::new();
    for v in window.vertices() {
        if out.is_covered(v) || seen.contains(&v) {
            continue;
        }
        let b = Block::new(v);
        let complete = window.contains_block(b) && b.vertices().iter().all(|&u| !out.is_covered(u));
        if !complete || b.parity(out_col) != hole_parity {
            return Err(Error::Internal(format!(
                "holes after sliding do not form {hole_parity:?} blocks (at {v})"
            )));
        }
        seen.extend(b.vertices());
        missing.push(b);
    }
    DeficientConfig::new(out, missing, hole_parity)
        .map_err(|e| Error::Internal(format!("sliding produced an invalid config: {e}")))
}

/// The sliding map: an odd-deficient cover of length `n` becomes an
/// even-deficient cover of length `n + 1`.
pub fn slide(def: &DeficientConfig) -> Result<DeficientConfig> {
    if def.parity() != Parity::Odd {
        return usage("slide expects an odd-deficient config");
    }
    slide_to(def, def.config().coloring(), def.n() + 1, Parity::Even)
}

/// Inverse of [`slide`]: sliding again under the original coloring.
pub fn unslide(def: &DeficientConfig) -> Result<DeficientConfig> {
    if def.parity() != Parity::Even || def.n() < 2 {
        return usage("unslide expects an even-deficient config of length at least 2");
    }
    let n = def.n() - 1;
    slide_to(def, Coloring::of_length(n), n, Parity::Odd)
}

/// Lazy stream of the `2^k` ways to fill `k` missing blocks, in mask order.
pub struct Fillings {
    def: DeficientConfig,
    next: u64,
    end: u64,
}

impl Iterator for Fillings {
    type Item = (DimerConfig, Vec<Orientation>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let choice = (0..self.def.missing.len())
            .map(|i| if mask >> i & 1 == 1 { Orientation::Horizontal } else { Orientation::Vertical })
            .collect();
        Some((self.def.fill(mask), choice))
    }
}

pub fn fillings(def: &DeficientConfig) -> Result<Fillings> {
    let k = def.missing_count();
    if k >= 63 {
        return usage(format!("{k} missing blocks is too many to fill exhaustively"));
    }
    Ok(Fillings { def: def.clone(), next: 0, end: 1u64 << k })
}

/// All length-`n + 1` covers produced by one shuffle of `cfg`.
pub fn shuffle_formal_sum(cfg: &DimerConfig) -> Result<impl Iterator<Item = DimerConfig>> {
    let slid = slide(&delete_blocks(cfg, Parity::Odd))?;
    Ok(fillings(&slid)?.map(|(c, _)| c))
}

/// Summary of one shuffle step, for reports and the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShuffleSummary {
    pub deleted: usize,
    pub created: usize,
}

pub fn shuffle_summary(cfg: &DimerConfig) -> Result<ShuffleSummary> {
    let def = delete_blocks(cfg, Parity::Odd);
    let slid = slide(&def)?;
    Ok(ShuffleSummary { deleted: def.missing_count(), created: slid.missing_count() })
}
