//! D-slices, the slice patterns around them, the slice map `h` that
//! squeezes everything outside `S⁻` into `S⁺`, and the slice families that
//! place one slice per generator.

use std::collections::BTreeSet;

use crate::dyadic::{Dyadic, DyadicInterval, Point, Rectangle};
use crate::nv::{Element, Piece};

use super::EmbeddingError;

/// Whether `r` is proper exactly on the axes in `axes`.
pub fn is_d_slice(r: &Rectangle, axes: &BTreeSet<usize>) -> bool {
    axes_in_range(r, axes) && (0..r.dim()).all(|d| axes.contains(&d) != r.axis(d).is_unit())
}

/// Weaker than [`is_d_slice`]: full off `axes`, anything on `axes`. The
/// whole cube fits every axis set.
pub fn fits_axes(r: &Rectangle, axes: &BTreeSet<usize>) -> bool {
    axes_in_range(r, axes) && (0..r.dim()).all(|d| axes.contains(&d) || r.axis(d).is_unit())
}

fn axes_in_range(r: &Rectangle, axes: &BTreeSet<usize>) -> bool {
    !axes.is_empty() && axes.iter().all(|&d| d < r.dim())
}

fn require_fit(r: &Rectangle, axes: &BTreeSet<usize>) -> Result<(), EmbeddingError> {
    if fits_axes(r, axes) {
        Ok(())
    } else {
        Err(EmbeddingError::NotASlice {
            rect: r.clone(),
            axes: axes.clone(),
        })
    }
}

fn sort_by_corner(rects: &mut [Rectangle]) {
    rects.sort_by(Rectangle::cmp_lower_corner);
}

/// A pattern of `axes`-slices containing `s`: on each axis of `axes` the
/// path siblings of `s`'s interval together with the interval itself, and
/// the full interval elsewhere. Sorted by lower corner.
pub fn build_slice_pattern(
    s: &Rectangle,
    axes: &BTreeSet<usize>,
) -> Result<Vec<Rectangle>, EmbeddingError> {
    require_fit(s, axes)?;
    let mut rects = vec![Rectangle::unit(s.dim())];
    for &d in axes {
        let iv = s.axis(d);
        let mut parts = iv.path_siblings();
        parts.push(iv.clone());
        rects = rects
            .iter()
            .flat_map(|r| parts.iter().map(move |p| r.with_axis(d, p.clone())))
            .collect();
    }
    sort_by_corner(&mut rects);
    Ok(rects)
}

/// Tiling of `[0,1)^n − r`, sorted by lower corner. Empty for the cube.
pub fn complement(r: &Rectangle) -> Vec<Rectangle> {
    let proper: BTreeSet<usize> = (0..r.dim()).filter(|&d| !r.axis(d).is_unit()).collect();
    if proper.is_empty() {
        return Vec::new();
    }
    build_slice_pattern(r, &proper)
        .expect("rectangle fits its own proper axes")
        .into_iter()
        .filter(|p| p != r)
        .collect()
}

/// Halves `s` along the smallest axis of `axes`; the lower half is `S⁺`.
pub fn split_slice(
    s: &Rectangle,
    axes: &BTreeSet<usize>,
) -> Result<(Rectangle, Rectangle), EmbeddingError> {
    require_fit(s, axes)?;
    let axis = *axes.first().expect("nonempty axes");
    Ok(s.subdivide(axis)?)
}

/// A slice `S` with its division `S = S⁺ ⊔ S⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSpec {
    pub axes: BTreeSet<usize>,
    pub slice: Rectangle,
    pub plus: Rectangle,
    pub minus: Rectangle,
}

impl SliceSpec {
    /// Uses the division from [`split_slice`].
    pub fn new(axes: BTreeSet<usize>, slice: Rectangle) -> Result<Self, EmbeddingError> {
        let (plus, minus) = split_slice(&slice, &axes)?;
        Ok(SliceSpec {
            axes,
            slice,
            plus,
            minus,
        })
    }

    /// An explicit division; checks `plus ⊔ minus = slice` and that all
    /// three fit `axes`.
    pub fn with_division(
        axes: BTreeSet<usize>,
        slice: Rectangle,
        plus: Rectangle,
        minus: Rectangle,
    ) -> Result<Self, EmbeddingError> {
        let spec = SliceSpec {
            axes,
            slice,
            plus,
            minus,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), EmbeddingError> {
        for r in [&self.slice, &self.plus, &self.minus] {
            require_fit(r, &self.axes)?;
        }
        let divides = self.slice.contains(&self.plus)
            && self.slice.contains(&self.minus)
            && self.plus.is_disjoint(&self.minus)
            && &self.plus.measure() + &self.minus.measure() == self.slice.measure();
        if divides {
            Ok(())
        } else {
            Err(EmbeddingError::InvalidDivision(Box::new(self.clone())))
        }
    }

    /// All three rectangles are proper exactly on `axes`.
    pub fn is_strict(&self) -> bool {
        [&self.slice, &self.plus, &self.minus]
            .iter()
            .all(|r| is_d_slice(r, &self.axes))
    }
}

/// Splits `r` into `count` pieces by halving along `axis`, always keeping
/// the lower half to split again. Returns the corner piece (the final lower
/// half) and the `count - 1` upper halves.
fn halving_chain(r: &Rectangle, axis: usize, count: usize) -> (Rectangle, Vec<Rectangle>) {
    let mut core = r.clone();
    let mut rest = Vec::with_capacity(count.saturating_sub(1));
    for _ in 1..count {
        let (lo, hi) = core.subdivide(axis).expect("axis in range");
        rest.push(hi);
        core = lo;
    }
    (core, rest)
}

/// The slice map `h` for `spec`.
///
/// With `P` the slice pattern around `S` and `|P| = p`, both `S⁺` and `S⁻`
/// are cut into `p` slices by a halving chain; `S⁺⁺`/`S⁻⁻` are the corner
/// pieces. Pieces, in order:
/// the `p-1` slices of `I^n − S` onto those of `S⁺ − S⁺⁺`;
/// `S⁺` onto `S⁺⁺`;
/// the `p-1` slices of `S⁻ − S⁻⁻` onto those of `I^n − S`;
/// `S⁻⁻` onto `S⁻`.
/// Matching within a group is by lower corner.
pub fn lemma_h(spec: &SliceSpec) -> Result<Element, EmbeddingError> {
    spec.validate()?;
    let pattern = build_slice_pattern(&spec.slice, &spec.axes)?;
    let count = pattern.len();
    let outside: Vec<Rectangle> = pattern.into_iter().filter(|r| r != &spec.slice).collect();
    let axis = *spec.axes.first().expect("validated");

    let (plus_core, mut plus_rest) = halving_chain(&spec.plus, axis, count);
    let (minus_core, mut minus_rest) = halving_chain(&spec.minus, axis, count);
    sort_by_corner(&mut plus_rest);
    sort_by_corner(&mut minus_rest);

    let mut pieces = Vec::with_capacity(2 * count);
    pieces.extend(
        outside
            .iter()
            .zip(&plus_rest)
            .map(|(d, r)| Piece::new(d.clone(), r.clone())),
    );
    pieces.push(Piece::new(spec.plus.clone(), plus_core));
    pieces.extend(
        minus_rest
            .iter()
            .zip(&outside)
            .map(|(d, r)| Piece::new(d.clone(), r.clone())),
    );
    pieces.push(Piece::new(minus_core, spec.minus.clone()));
    Ok(Element::new(pieces)?)
}

/// One slice per generator, pairwise disjoint exactly when the axis sets
/// meet, leaving a reserved corner free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFamily {
    /// `[0,1)` is cut into `2^depth` equal parts `J_k`.
    pub depth: u32,
    pub slices: Vec<SliceSpec>,
    /// Every coordinate at the lower end of the reserved part `J_m`.
    pub base_point: Point,
}

/// Slice `i` uses part `J_i` on the axes of `axis_sets[i]`, and the whole
/// interval elsewhere. `2^depth ≥ m + 2` keeps `J_m` unused.
pub fn build_slices(
    axis_sets: &[BTreeSet<usize>],
    dim: usize,
) -> Result<SliceFamily, EmbeddingError> {
    if dim == 0 {
        return Err(EmbeddingError::ZeroDimension);
    }
    for (i, set) in axis_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(EmbeddingError::EmptyAxisSet(i));
        }
        if let Some(&axis) = set.iter().find(|&&a| a >= dim) {
            return Err(EmbeddingError::AxisOutOfRange { axis, dim });
        }
    }
    let m = axis_sets.len();
    let mut depth = 0u32;
    while (1u128 << depth) < (m as u128 + 2) {
        depth += 1;
    }
    let part = |k: usize| DyadicInterval::new(k as u64, depth).expect("k < 2^depth");
    let slices = axis_sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let axes = (0..dim)
                .map(|d| {
                    if set.contains(&d) {
                        part(i)
                    } else {
                        DyadicInterval::unit()
                    }
                })
                .collect();
            SliceSpec::new(set.clone(), Rectangle::new(axes)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let base_point = Point(vec![Dyadic::new(m as u64, depth); dim]);
    Ok(SliceFamily {
        depth,
        slices,
        base_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(axes: &[usize]) -> BTreeSet<usize> {
        axes.iter().copied().collect()
    }

    fn rect(addrs: &[&str]) -> Rectangle {
        Rectangle::new(
            addrs
                .iter()
                .map(|a| DyadicInterval::from_address(a).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn slice_predicates() {
        let s = rect(&["0", "0"]);
        assert!(is_d_slice(&s, &set(&[0, 1])));
        assert!(!is_d_slice(&s, &set(&[0])));
        assert!(!is_d_slice(&Rectangle::unit(1), &set(&[0])));
        assert!(fits_axes(&Rectangle::unit(1), &set(&[0])));
        assert!(!fits_axes(&s, &set(&[0])));
        assert!(!fits_axes(&s, &set(&[])));
    }

    #[test]
    fn quadrant_pattern() {
        let s = rect(&["0", "0"]);
        let p = build_slice_pattern(&s, &set(&[0, 1])).unwrap();
        assert_eq!(
            p,
            vec![
                rect(&["0", "0"]),
                rect(&["0", "1"]),
                rect(&["1", "0"]),
                rect(&["1", "1"])
            ]
        );
    }

    #[test]
    fn trivial_and_deep_patterns() {
        let p = build_slice_pattern(&Rectangle::unit(1), &set(&[0])).unwrap();
        assert_eq!(p, vec![Rectangle::unit(1)]);
        let s = rect(&["", "01", ""]);
        let p = build_slice_pattern(&s, &set(&[1])).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.contains(&s));
        assert!(matches!(
            build_slice_pattern(&s, &set(&[0])),
            Err(EmbeddingError::NotASlice { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let s = rect(&["0", "0"]);
        let (plus, minus) = split_slice(&s, &set(&[0, 1])).unwrap();
        assert_eq!(plus, rect(&["00", "0"]));
        assert_eq!(minus, rect(&["01", "0"]));
        assert_eq!(
            split_slice(&Rectangle::unit(1), &set(&[0])).unwrap(),
            (rect(&["0"]), rect(&["1"]))
        );
        assert_eq!(&plus.measure() + &plus.measure(), s.measure());
        assert_eq!(minus.measure(), plus.measure());
    }

    #[test]
    fn complement_tiles() {
        let r = rect(&["01", ""]);
        let c = complement(&r);
        assert_eq!(c, vec![rect(&["00", ""]), rect(&["1", ""])]);
        assert!(complement(&Rectangle::unit(2)).is_empty());
    }

    #[test]
    fn division_checked() {
        let s = rect(&["0", "0"]);
        let bad = SliceSpec::with_division(
            set(&[0, 1]),
            s.clone(),
            rect(&["00", "0"]),
            rect(&["00", "0"]),
        );
        assert!(matches!(bad, Err(EmbeddingError::InvalidDivision(_))));
        let ok = SliceSpec::with_division(set(&[0, 1]), s, rect(&["0", "00"]), rect(&["0", "01"]));
        assert!(ok.unwrap().is_strict());
    }

    #[test]
    fn degenerate_slice_gives_identity() {
        let spec = SliceSpec::new(set(&[0]), Rectangle::unit(1)).unwrap();
        let h = lemma_h(&spec).unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn single_generator_family() {
        let fam = build_slices(&[set(&[0])], 1).unwrap();
        assert_eq!(fam.depth, 2);
        assert_eq!(fam.slices[0].slice, rect(&["00"]));
        assert_eq!(fam.base_point, Point(vec![Dyadic::new(1u32, 2)]));
        assert!(matches!(
            build_slices(&[set(&[])], 1),
            Err(EmbeddingError::EmptyAxisSet(0))
        ));
        assert!(matches!(
            build_slices(&[set(&[3])], 2),
            Err(EmbeddingError::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn z2_free_z_family() {
        let fam = build_slices(&[set(&[0]), set(&[1]), set(&[0, 1])], 2).unwrap();
        assert_eq!(fam.depth, 3);
        assert_eq!(fam.slices[0].slice, rect(&["000", ""]));
        assert_eq!(fam.slices[1].slice, rect(&["", "001"]));
        assert_eq!(fam.slices[2].slice, rect(&["010", "010"]));
    }
}
