//! Embeddings of right-angled Artin groups into nV.
//!
//! For a graph whose every vertex lies on a complementary edge, each
//! vertex gets one axis per complementary edge through it, a slice on those
//! axes, and the slice map [`lemma_h`] of that slice. Vertices adjacent to
//! everything split off a free abelian factor, which is realized by copies
//! of a fixed infinite-order element on a separate part of the cube.

mod check;
mod pingpong;
mod slices;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dyadic::{DyadicInterval, GeometryError, Rectangle};
use crate::nv::{Element, NvError, Piece};
use crate::raag::{
    validate_d_assignment, AssignmentViolation, DAssignment, Graph, RaagError, Word,
};

pub use check::{bounded_check, CheckOptions, CheckReport, Counterexample};
pub use pingpong::{verify_pingpong, ConditionResult, PingPongCertificate, Witness};
pub use slices::{
    build_slice_pattern, build_slices, complement, fits_axes, is_d_slice, lemma_h, split_slice,
    SliceFamily, SliceSpec,
};

/// Default ceiling on the running piece count while evaluating a word.
pub const DEFAULT_PIECE_CEILING: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("{rect} is not a slice for axes {axes:?}")]
    NotASlice {
        rect: Rectangle,
        axes: BTreeSet<usize>,
    },
    #[error("invalid division of slice {}", .0.slice)]
    InvalidDivision(Box<SliceSpec>),
    #[error("axis set of generator {0} is empty")]
    EmptyAxisSet(usize),
    #[error("axis {axis} outside dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("invalid axis assignment: {0}")]
    InvalidAssignment(#[from] AssignmentViolation),
    #[error(
        "graph has no complementary edges; its group is free abelian (use the abelian embedding)"
    )]
    NoComplementaryEdges,
    #[error("the abelian embedding needs a complete graph")]
    NotComplete,
    #[error("generators {0} and {1} are adjacent but their images do not commute")]
    RelationFails(usize, usize),
    #[error("generator {index} out of range ({count} generators)")]
    UnknownGenerator { index: usize, count: usize },
    #[error("piece count {pieces} exceeds ceiling {limit} after {letters} letters")]
    PieceCeilingExceeded {
        limit: usize,
        pieces: usize,
        letters: usize,
    },
    #[error("embedding carries no slice data; ping-pong certificate unavailable")]
    CertificateUnavailable,
    #[error(transparent)]
    Nv(#[from] NvError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Raag(#[from] RaagError),
}

/// How a [`GeneratorMap`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Slice maps from an axis assignment; ping-pong data available.
    Slices {
        assignment: DAssignment,
        family: SliceFamily,
    },
    /// Central vertices realized in `central_region`, the rest conjugated
    /// into `active_region`.
    Assembled {
        central: Vec<usize>,
        active_region: Rectangle,
        central_region: Rectangle,
    },
    /// Complete graph: one copy of the base element per vertex, `n = 1`.
    Abelian,
}

/// Images of the generators, one element per vertex of the graph.
#[derive(Clone, Debug)]
pub struct GeneratorMap {
    graph: Graph,
    dim: usize,
    generators: Vec<Element>,
    inverses: Vec<Element>,
    construction: Construction,
}

impl GeneratorMap {
    pub fn new(
        graph: Graph,
        dim: usize,
        generators: Vec<Element>,
        construction: Construction,
    ) -> Result<Self, EmbeddingError> {
        if dim == 0 {
            return Err(EmbeddingError::ZeroDimension);
        }
        if generators.len() != graph.len() {
            return Err(EmbeddingError::UnknownGenerator {
                index: generators.len(),
                count: graph.len(),
            });
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(NvError::DimensionMismatch {
                left: dim,
                right: g.dim(),
            }
            .into());
        }
        let inverses = generators.iter().map(Element::inverse).collect();
        Ok(GeneratorMap {
            graph,
            dim,
            generators,
            inverses,
            construction,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator(&self, v: usize) -> &Element {
        &self.generators[v]
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn slice_family(&self) -> Option<&SliceFamily> {
        match &self.construction {
            Construction::Slices { family, .. } => Some(family),
            _ => None,
        }
    }

    pub fn assignment(&self) -> Option<&DAssignment> {
        match &self.construction {
            Construction::Slices { assignment, .. } => Some(assignment),
            _ => None,
        }
    }

    pub(crate) fn letter(
        &self,
        generator: usize,
        inverse: bool,
    ) -> Result<&Element, EmbeddingError> {
        let list = if inverse {
            &self.inverses
        } else {
            &self.generators
        };
        list.get(generator).ok_or(EmbeddingError::UnknownGenerator {
            index: generator,
            count: self.generators.len(),
        })
    }

    /// Whether the images of `a` and `b` commute, decided exactly.
    pub fn images_commute(&self, a: usize, b: usize) -> Result<bool, EmbeddingError> {
        let (ga, gb) = (&self.generators[a], &self.generators[b]);
        Ok(ga.compose(gb)?.equals(&gb.compose(ga)?)?)
    }

    fn check_edge_relations(&self) -> Result<(), EmbeddingError> {
        for (a, b) in self.graph.edges() {
            if !self.images_commute(a, b)? {
                return Err(EmbeddingError::RelationFails(a, b));
            }
        }
        Ok(())
    }

    /// Evaluates a word left to right (`g1 g2` applies `g1` first).
    pub fn evaluate(&self, word: &Word) -> Result<Element, EmbeddingError> {
        self.evaluate_with_ceiling(word, DEFAULT_PIECE_CEILING)
    }

    pub fn evaluate_with_ceiling(
        &self,
        word: &Word,
        ceiling: usize,
    ) -> Result<Element, EmbeddingError> {
        let mut acc = Element::identity(self.dim);
        for (k, l) in word.letters().iter().enumerate() {
            acc = self.step(&acc, l.generator, l.inverse, ceiling, k + 1)?;
        }
        Ok(acc)
    }

    pub(crate) fn step(
        &self,
        acc: &Element,
        generator: usize,
        inverse: bool,
        ceiling: usize,
        letters: usize,
    ) -> Result<Element, EmbeddingError> {
        let next = acc.compose(self.letter(generator, inverse)?)?;
        if next.len() > ceiling {
            return Err(EmbeddingError::PieceCeilingExceeded {
                limit: ceiling,
                pieces: next.len(),
                letters,
            });
        }
        Ok(next.reduce())
    }
}

/// `h_i = lemma_h(S_i)` for the slice family of `assignment`.
pub fn build_embedding_from_assignment(
    graph: &Graph,
    assignment: &DAssignment,
) -> Result<GeneratorMap, EmbeddingError> {
    validate_d_assignment(graph, assignment)?;
    let family = build_slices(&assignment.sets, assignment.dim)?;
    let generators = family
        .slices
        .iter()
        .map(lemma_h)
        .collect::<Result<Vec<_>, _>>()?;
    let map = GeneratorMap::new(
        graph.clone(),
        assignment.dim,
        generators,
        Construction::Slices {
            assignment: assignment.clone(),
            family,
        },
    )?;
    map.check_edge_relations()?;
    Ok(map)
}

/// The affine copy of `f` inside `region`, identity outside.
pub fn conjugate_into(f: &Element, region: &Rectangle) -> Result<Element, EmbeddingError> {
    if f.dim() != region.dim() {
        return Err(NvError::DimensionMismatch {
            left: f.dim(),
            right: region.dim(),
        }
        .into());
    }
    let unit = Rectangle::unit(f.dim());
    let mut pieces: Vec<Piece> = f
        .pieces()
        .iter()
        .map(|p| {
            Piece::new(
                p.domain.transport(&unit, region),
                p.range.transport(&unit, region),
            )
        })
        .collect();
    pieces.extend(
        complement(region)
            .into_iter()
            .map(|r| Piece::new(r.clone(), r)),
    );
    Ok(Element::new(pieces)?)
}

/// `[0,1/2) → [0,1/4)`, `[1/2,3/4) → [1/4,1/2)`, `[3/4,1) → [1/2,1)` on
/// the first axis, identity on the others. Has infinite order.
pub fn base_element(dim: usize) -> Element {
    let iv = |a: &str| DyadicInterval::from_address(a).expect("valid address");
    let unit = Rectangle::unit(dim);
    let piece = |d: &str, r: &str| Piece::new(unit.with_axis(0, iv(d)), unit.with_axis(0, iv(r)));
    Element::new(vec![piece("0", "00"), piece("10", "01"), piece("11", "1")])
        .expect("valid base element")
}

/// `count` pairwise disjoint sub-rectangles of `region`, cut along axis 0.
fn split_region(region: &Rectangle, count: usize) -> Vec<Rectangle> {
    let mut bits = 0u32;
    while (1usize << bits) < count {
        bits += 1;
    }
    let base = region.axis(0);
    (0..count)
        .map(|k| {
            let rel = DyadicInterval::new(k as u64, bits).expect("k < 2^bits");
            let addr = rel
                .relative_to(&DyadicInterval::unit())
                .expect("everything lies in the unit interval");
            region.with_axis(0, base.descend(&addr))
        })
        .collect()
}

/// Embedding of `A_Γ` into nV with `n = |Ē(Γ)|`.
///
/// Vertices adjacent to every other vertex are split off: the rest of the
/// graph is embedded by slice maps and conjugated into `[0,1/2) × I^{n-1}`,
/// and each split-off vertex becomes a copy of [`base_element`] in its own
/// part of `[1/2,1) × I^{n-1}`.
pub fn build_embedding(graph: &Graph) -> Result<GeneratorMap, EmbeddingError> {
    if graph.complementary_edges().is_empty() {
        return Err(EmbeddingError::NoComplementaryEdges);
    }
    let central = graph.v0_vertices();
    if central.is_empty() {
        return build_embedding_from_assignment(graph, &graph.canonical_d_assignment()?);
    }
    let rest: Vec<usize> = (0..graph.len()).filter(|v| !central.contains(v)).collect();
    let sub = graph.induced_subgraph(&rest);
    let inner = build_embedding_from_assignment(&sub, &sub.canonical_d_assignment()?)?;
    let dim = inner.dim();

    let unit = Rectangle::unit(dim);
    let (lo, hi) = DyadicInterval::unit().children();
    let active_region = unit.with_axis(0, lo);
    let central_region = unit.with_axis(0, hi);
    let t = base_element(dim);
    let parts = split_region(&central_region, central.len());

    let mut generators = Vec::with_capacity(graph.len());
    for v in 0..graph.len() {
        let g = match central.iter().position(|&c| c == v) {
            Some(k) => conjugate_into(&t, &parts[k])?,
            None => {
                let idx = rest.iter().position(|&r| r == v).expect("partition");
                conjugate_into(inner.generator(idx), &active_region)?
            }
        };
        generators.push(g);
    }
    let map = GeneratorMap::new(
        graph.clone(),
        dim,
        generators,
        Construction::Assembled {
            central,
            active_region,
            central_region,
        },
    )?;
    map.check_edge_relations()?;
    Ok(map)
}

/// For complete graphs: `Z^m` inside 1V as disjoint copies of the base
/// element.
pub fn build_abelian_embedding(graph: &Graph) -> Result<GeneratorMap, EmbeddingError> {
    if !graph.complementary_edges().is_empty() {
        return Err(EmbeddingError::NotComplete);
    }
    let t = base_element(1);
    let generators = split_region(&Rectangle::unit(1), graph.len())
        .iter()
        .map(|r| conjugate_into(&t, r))
        .collect::<Result<Vec<_>, _>>()?;
    let map = GeneratorMap::new(graph.clone(), 1, generators, Construction::Abelian)?;
    map.check_edge_relations()?;
    Ok(map)
}
