//! Elements of the higher-dimensional Thompson group nV.
//!
//! An element is a list of pieces `(domain, range)`: the domains tile
//! `[0,1)^n`, the ranges tile `[0,1)^n`, and the map sends each domain
//! rectangle onto its range rectangle by the orientation-preserving affine
//! bijection. List position is the numbering of both patterns.
//!
//! Composition is written `f.compose(&g)` and means "f, then g".

mod index;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::dyadic::{map_point_unchecked, Dyadic, GeometryError, Measure, Point, Rectangle};
pub(crate) use index::RectIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NvError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid domain pattern: {0}")]
    InvalidDomain(PatternViolation),
    #[error("invalid range pattern: {0}")]
    InvalidRange(PatternViolation),
    #[error("piece {index} out of range ({len} pieces)")]
    PieceOutOfRange { index: usize, len: usize },
    #[error("point {0} is not in the unit cube")]
    PointOutsideCube(Point),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("element text, line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Why a list of rectangles fails to be a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternViolation {
    #[error("pattern is empty")]
    Empty,
    #[error("rectangle {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("rectangles {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
    #[error("rectangles cover measure {total}, not 1")]
    MeasureDeficit { total: Measure },
}

/// A finite family of pairwise disjoint dyadic rectangles covering
/// `[0,1)^n`. List order is the numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    rects: Vec<Rectangle>,
}

impl Pattern {
    pub fn new(rects: Vec<Rectangle>) -> Result<Self, PatternViolation> {
        validate_pattern(&rects)?;
        Ok(Pattern { rects })
    }

    pub fn rects(&self) -> &[Rectangle] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn into_rects(self) -> Vec<Rectangle> {
        self.rects
    }
}

/// Disjointness is checked pairwise through a trie, and full coverage by
/// the exact measure sum (disjoint rectangles of total measure 1 tile the
/// cube).
pub fn validate_pattern(rects: &[Rectangle]) -> Result<(), PatternViolation> {
    let Some(first) = rects.first() else {
        return Err(PatternViolation::Empty);
    };
    let n = first.dim();
    if let Some((index, r)) = rects.iter().enumerate().find(|(_, r)| r.dim() != n) {
        return Err(PatternViolation::Dimension {
            index,
            expected: n,
            found: r.dim(),
        });
    }
    let index = RectIndex::build(rects.iter());
    let mut cand = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        cand.clear();
        index.candidates(r, &mut cand);
        cand.sort_unstable();
        if let Some(&j) = cand.iter().find(|&&j| j != i && !r.is_disjoint(&rects[j])) {
            return Err(PatternViolation::Overlap {
                first: i.min(j),
                second: i.max(j),
            });
        }
    }
    let total: Measure = rects.iter().map(Rectangle::measure).sum();
    if total != Dyadic::one() {
        return Err(PatternViolation::MeasureDeficit { total });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub domain: Rectangle,
    pub range: Rectangle,
}

impl Piece {
    pub fn new(domain: Rectangle, range: Rectangle) -> Self {
        Piece { domain, range }
    }

    fn swapped(&self) -> Piece {
        Piece {
            domain: self.range.clone(),
            range: self.domain.clone(),
        }
    }
}

/// An element `v(P, Q)` of nV.
#[derive(Clone)]
pub struct Element {
    dim: usize,
    pieces: Vec<Piece>,
    domain_index: OnceLock<RectIndex>,
}

impl PartialEq for Element {
    /// Structural equality of the piece lists. Use [`Element::equals`] for
    /// equality of maps.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pieces == other.pieces
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Element")
            .field("dim", &self.dim)
            .field("pieces", &self.pieces)
            .finish()
    }
}

impl Element {
    /// Checks that domains and ranges both form patterns.
    pub fn new(pieces: Vec<Piece>) -> Result<Self, NvError> {
        let Some(first) = pieces.first() else {
            return Err(NvError::InvalidDomain(PatternViolation::Empty));
        };
        let dim = first.domain.dim();
        let domains: Vec<Rectangle> = pieces.iter().map(|p| p.domain.clone()).collect();
        let ranges: Vec<Rectangle> = pieces.iter().map(|p| p.range.clone()).collect();
        validate_pattern(&domains).map_err(NvError::InvalidDomain)?;
        validate_pattern(&ranges).map_err(NvError::InvalidRange)?;
        if ranges[0].dim() != dim {
            return Err(NvError::DimensionMismatch {
                left: dim,
                right: ranges[0].dim(),
            });
        }
        Ok(Element::from_pieces_unchecked(dim, pieces))
    }

    pub(crate) fn from_pieces_unchecked(dim: usize, pieces: Vec<Piece>) -> Self {
        Element {
            dim,
            pieces,
            domain_index: OnceLock::new(),
        }
    }

    /// Builds `v(P, Q)` from two numbered patterns of equal size.
    pub fn from_patterns(domain: &Pattern, range: &Pattern) -> Result<Self, NvError> {
        if domain.len() != range.len() {
            return Err(NvError::Format {
                line: 0,
                message: format!("pattern sizes differ: {} vs {}", domain.len(), range.len()),
            });
        }
        Element::new(
            domain
                .rects()
                .iter()
                .zip(range.rects())
                .map(|(d, r)| Piece::new(d.clone(), r.clone()))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let unit = Rectangle::unit(n);
        Element::from_pieces_unchecked(n, vec![Piece::new(unit.clone(), unit)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn domain_pattern(&self) -> Vec<Rectangle> {
        self.pieces.iter().map(|p| p.domain.clone()).collect()
    }

    pub fn range_pattern(&self) -> Vec<Rectangle> {
        self.pieces.iter().map(|p| p.range.clone()).collect()
    }

    fn domain_index(&self) -> &RectIndex {
        self.domain_index
            .get_or_init(|| RectIndex::build(self.pieces.iter().map(|p| &p.domain)))
    }

    fn check_dim(&self, other: usize) -> Result<(), NvError> {
        if self.dim == other {
            Ok(())
        } else {
            Err(NvError::DimensionMismatch {
                left: self.dim,
                right: other,
            })
        }
    }

    /// Index of the domain piece containing `p`.
    pub fn piece_at(&self, p: &Point) -> Result<usize, NvError> {
        self.check_dim(p.dim())?;
        let mut cand = Vec::new();
        self.domain_index().point_candidates(p, &mut cand);
        cand.into_iter()
            .filter(|&i| self.pieces[i].domain.contains_point(p))
            .min()
            .ok_or_else(|| NvError::PointOutsideCube(p.clone()))
    }

    pub fn apply(&self, p: &Point) -> Result<Point, NvError> {
        let i = self.piece_at(p)?;
        let piece = &self.pieces[i];
        Ok(map_point_unchecked(&piece.domain, &piece.range, p))
    }

    pub fn inverse(&self) -> Element {
        Element::from_pieces_unchecked(self.dim, self.pieces.iter().map(Piece::swapped).collect())
    }

    /// The map `p ↦ g(f(p))` where `f = self`.
    ///
    /// Every range piece of `f` is cut against every domain piece of `g`
    /// it meets; each overlap is pulled back through `f` and pushed forward
    /// through `g`. Output order is by `f`'s piece, then `g`'s.
    pub fn compose(&self, g: &Element) -> Result<Element, NvError> {
        self.check_dim(g.dim)?;
        let index = g.domain_index();
        let mut out = Vec::new();
        let mut cand = Vec::new();
        for p in &self.pieces {
            cand.clear();
            index.candidates(&p.range, &mut cand);
            cand.sort_unstable();
            for &j in &cand {
                let q = &g.pieces[j];
                if let Some(x) = p.range.intersect(&q.domain) {
                    out.push(Piece {
                        domain: x.transport(&p.range, &p.domain),
                        range: x.transport(&q.domain, &q.range),
                    });
                }
            }
        }
        Ok(Element::from_pieces_unchecked(self.dim, out))
    }

    /// An affine piece is the identity on its domain exactly when it maps
    /// the domain rectangle to itself.
    pub fn is_identity(&self) -> bool {
        self.pieces.iter().all(|p| p.domain == p.range)
    }

    /// Whether `self` and `g` are the same map of `[0,1)^n`, decided on the
    /// common refinement of `self · g⁻¹`.
    pub fn equals(&self, g: &Element) -> Result<bool, NvError> {
        Ok(self.compose(&g.inverse())?.is_identity())
    }

    /// Splits one piece along `axis`; the map is unchanged.
    pub fn refine_piece(&self, piece: usize, axis: usize) -> Result<Element, NvError> {
        let p = self.pieces.get(piece).ok_or(NvError::PieceOutOfRange {
            index: piece,
            len: self.pieces.len(),
        })?;
        let (d0, d1) = p.domain.subdivide(axis)?;
        let (r0, r1) = p.range.subdivide(axis)?;
        let mut pieces = Vec::with_capacity(self.pieces.len() + 1);
        pieces.extend_from_slice(&self.pieces[..piece]);
        pieces.push(Piece::new(d0, r0));
        pieces.push(Piece::new(d1, r1));
        pieces.extend_from_slice(&self.pieces[piece + 1..]);
        Ok(Element::from_pieces_unchecked(self.dim, pieces))
    }

    /// Merges sibling pieces whose union is still a single affine piece.
    /// The map is unchanged; the result is not claimed to be minimal.
    ///
    /// The cube is cut recursively along the first axis no domain piece
    /// straddles, and the two halves are merged bottom-up; regions with no
    /// such axis fall back to greedy pairwise merging. A final greedy pass
    /// runs over the whole element.
    pub fn reduce(&self) -> Element {
        let pieces = reduce_region(&mut vec![0; self.dim], self.pieces.clone());
        Element::from_pieces_unchecked(self.dim, greedy_merge(self.dim, pieces))
    }

    /// The exact image of `r`, as disjoint rectangles in domain-piece order.
    pub fn image_of_rectangle(&self, r: &Rectangle) -> Result<Vec<Rectangle>, NvError> {
        self.check_dim(r.dim())?;
        let mut cand = Vec::new();
        self.domain_index().candidates(r, &mut cand);
        cand.sort_unstable();
        Ok(cand
            .into_iter()
            .filter_map(|i| {
                let p = &self.pieces[i];
                p.domain
                    .intersect(r)
                    .map(|x| x.transport(&p.domain, &p.range))
            })
            .collect())
    }

    /// Image of a union of disjoint rectangles.
    pub fn image_of_region(&self, region: &[Rectangle]) -> Result<Vec<Rectangle>, NvError> {
        let mut out = Vec::new();
        for r in region {
            out.extend(self.image_of_rectangle(r)?);
        }
        Ok(out)
    }

    /// Validates both patterns; elements built by the group operations are
    /// valid by construction, this is for tests and untrusted input.
    pub fn validate(&self) -> Result<(), NvError> {
        validate_pattern(&self.domain_pattern()).map_err(NvError::InvalidDomain)?;
        validate_pattern(&self.range_pattern()).map_err(NvError::InvalidRange)
    }
}

/// The union of `a` and `b` as one affine piece, when `a`'s domain is the
/// lower half and `b`'s the upper half of a common parent along `axis`, and
/// likewise for the ranges.
fn merge_pair(a: &Piece, b: &Piece, axis: usize) -> Option<Piece> {
    if a.domain.sibling_along(axis)? != (b.domain.clone(), true)
        || a.range.sibling_along(axis)? != (b.range.clone(), true)
    {
        return None;
    }
    Some(Piece::new(
        a.domain.parent_along(axis)?,
        a.range.parent_along(axis)?,
    ))
}

/// `pieces` tile a region whose axis `d` has depth `depths[d]`; a piece
/// lies in one half of the region along `d` exactly when its domain is
/// deeper there.
fn reduce_region(depths: &mut [u32], pieces: Vec<Piece>) -> Vec<Piece> {
    if pieces.len() <= 1 {
        return pieces;
    }
    for axis in 0..depths.len() {
        let depth = depths[axis];
        if !pieces.iter().all(|p| p.domain.axis(axis).depth() > depth) {
            continue;
        }
        let (upper, lower): (Vec<Piece>, Vec<Piece>) = pieces
            .into_iter()
            .partition(|p| p.domain.axis(axis).bit(depth));
        depths[axis] += 1;
        let mut lower = reduce_region(depths, lower);
        let upper = reduce_region(depths, upper);
        depths[axis] -= 1;
        if let ([a], [b]) = (lower.as_slice(), upper.as_slice()) {
            if let Some(m) = merge_pair(a, b, axis) {
                return vec![m];
            }
        }
        lower.extend(upper);
        return lower;
    }
    greedy_merge(depths.len(), pieces)
}

/// Repeatedly merges sibling pairs in list order until nothing merges.
fn greedy_merge(dim: usize, pieces: Vec<Piece>) -> Vec<Piece> {
    let mut slots: Vec<Option<Piece>> = pieces.into_iter().map(Some).collect();
    loop {
        let by_domain: HashMap<Rectangle, usize> = slots
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|p| (p.domain.clone(), i)))
            .collect();
        let mut merged_any = false;
        for i in 0..slots.len() {
            let Some(pi) = slots[i].as_ref() else {
                continue;
            };
            let mut merge = None;
            for axis in 0..dim {
                let Some((sib, lower)) = pi.domain.sibling_along(axis) else {
                    continue;
                };
                let Some(&j) = by_domain.get(&sib) else {
                    continue;
                };
                let Some(pj) = slots[j].as_ref() else {
                    continue;
                };
                if pj.domain != sib {
                    continue;
                }
                if pi.range.sibling_along(axis) == Some((pj.range.clone(), lower)) {
                    merge = Some((
                        j,
                        Piece::new(
                            pi.domain.parent_along(axis).expect("has sibling"),
                            pi.range.parent_along(axis).expect("has sibling"),
                        ),
                    ));
                    break;
                }
            }
            if let Some((j, merged)) = merge {
                let (keep, drop) = (i.min(j), i.max(j));
                slots[keep] = Some(merged);
                slots[drop] = None;
                merged_any = true;
            }
        }
        slots.retain(Option::is_some);
        if !merged_any {
            break;
        }
    }
    slots.into_iter().flatten().collect()
}

/// Line-oriented element file:
///
/// ```text
/// nv-element
/// dimension 2
/// pieces 2
/// [{0,1},{0,0}] -> [{1,1},{0,0}]
/// [{1,1},{0,0}] -> [{0,1},{0,0}]
/// ```
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nv-element")?;
        writeln!(f, "dimension {}", self.dim)?;
        writeln!(f, "pieces {}", self.pieces.len())?;
        for p in &self.pieces {
            writeln!(f, "{} -> {}", p.domain, p.range)?;
        }
        Ok(())
    }
}

impl FromStr for Element {
    type Err = NvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| NvError::Format { line, message };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<(usize, String), NvError> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| err(0, format!("missing {key}")))?;
            let rest = line
                .strip_prefix(key)
                .ok_or_else(|| err(no, format!("expected {key:?}")))?;
            Ok((no, rest.trim().to_string()))
        };
        header("nv-element")?;
        let (no, dim) = header("dimension")?;
        let dim: usize = dim.parse().map_err(|_| err(no, "bad dimension".into()))?;
        let (no, count) = header("pieces")?;
        let count: usize = count
            .parse()
            .map_err(|_| err(no, "bad piece count".into()))?;
        let mut pieces = Vec::with_capacity(count);
        for (no, line) in lines {
            let (d, r) = line
                .split_once("->")
                .ok_or_else(|| err(no, "expected `domain -> range`".into()))?;
            let domain: Rectangle = d
                .parse()
                .map_err(|e: GeometryError| err(no, e.to_string()))?;
            let range: Rectangle = r
                .parse()
                .map_err(|e: GeometryError| err(no, e.to_string()))?;
            if domain.dim() != dim || range.dim() != dim {
                return Err(err(no, format!("rectangle dimension differs from {dim}")));
            }
            pieces.push(Piece::new(domain, range));
        }
        if pieces.len() != count {
            return Err(err(
                0,
                format!("declared {count} pieces, found {}", pieces.len()),
            ));
        }
        Element::new(pieces)
    }
}
