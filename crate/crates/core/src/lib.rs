//! Higher-dimensional Thompson groups nV over exact dyadic arithmetic, and
//! embeddings of right-angled Artin groups into them.
//!
//! - [`dyadic`]: dyadic rationals, intervals and rectangles.
//! - [`nv`]: elements of nV and their group calculus.
//! - [`raag`]: defining graphs, words, and a word-problem oracle.
//! - [`embedding`]: slice maps, generator maps, ping-pong certificates and
//!   the bounded faithfulness harness.
//! - [`io`], [`svg`], [`cli`]: file formats, drawings, command line.

pub mod cli;
pub mod dyadic;
pub mod embedding;
pub mod io;
pub mod nv;
pub mod raag;
pub mod svg;

pub use dyadic::{Dyadic, DyadicInterval, Point, Rectangle};
pub use embedding::GeneratorMap;
pub use nv::{Element, Piece};
pub use raag::{Graph, Word};
