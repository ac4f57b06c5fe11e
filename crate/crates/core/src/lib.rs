//! Pyramid partitions, dimer shuffling, and the generating-function
//! identities that connect them to plane partitions.
//!
//! Configurations are dimer covers of the square lattice stored on finite
//! windows; everything outside a window is taken from the empty room of the
//! same length. Generating functions are exact truncated power series.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod pyramid;
pub mod series;
pub mod shuffle;
pub mod solid;
pub mod svg;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use lattice::{Block, Coloring, Dimer, Direction, Orientation, Parity, Vertex, Window};
pub use pyramid::{empty_room, enumerate_partitions, DimerConfig};
pub use series::{Monomial, TruncatedSeries, Truncation, Vars};
pub use shuffle::{delete_blocks, slide, unslide, DeficientConfig};
pub use weights::WeightField;
