//! Exact dyadic arithmetic: rationals with power-of-two denominators, the
//! dyadic subintervals of `[0,1)`, and products of those (rectangles).
//!
//! Every interval is stored as `(num, depth)`, meaning
//! `[num·2^-depth, (num+1)·2^-depth)`. That makes it impossible to build an
//! interval that did not arise from repeated halving, and it makes the
//! laminar structure explicit: two intervals either nest or are disjoint,
//! decided by a prefix test on their binary addresses.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("rectangles must have at least one axis")]
    ZeroDimension,
    #[error("interval numerator {num} does not fit at depth {depth}")]
    NumeratorOutOfRange { num: BigUint, depth: u32 },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("rectangle {child} is not contained in {parent}")]
    NotContained { child: Rectangle, parent: Rectangle },
    #[error("point {point} lies outside {rect}")]
    PointOutside { point: Point, rect: Rectangle },
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

fn parse_err(what: &'static str, input: &str) -> GeometryError {
    GeometryError::Parse {
        what,
        input: input.to_string(),
    }
}

/// A nonnegative dyadic rational `num / 2^exp` in lowest terms
/// (`num` odd, or `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

/// Measures are plain dyadic rationals; kept as a separate name for
/// readability at call sites.
pub type Measure = Dyadic;

impl Dyadic {
    pub fn new(num: impl Into<BigUint>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(u64::from(exp));
        if tz > 0 {
            num >>= tz;
            exp -= tz as u32;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_inv(k: u32) -> Self {
        Dyadic {
            num: BigUint::one(),
            exp: k,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplies by `2^k` (k may be negative).
    pub fn scaled(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let k = k as u64;
            let drop = k.min(u64::from(self.exp));
            let rest = k - drop;
            Dyadic::new(&self.num << rest, self.exp - drop as u32)
        } else {
            let exp = u64::from(self.exp) + k.unsigned_abs();
            Dyadic::new(
                self.num.clone(),
                u32::try_from(exp).expect("exponent overflow"),
            )
        }
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let (a, b, exp) = align(self, other);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, exp))
        }
    }

    /// `floor(self · 2^depth)`.
    fn floor_scaled(&self, depth: u32) -> BigUint {
        if depth >= self.exp {
            &self.num << (depth - self.exp)
        } else {
            &self.num >> (self.exp - depth)
        }
    }

    /// Exact decimal expansion (every dyadic rational has a finite one).
    pub fn to_decimal(&self) -> String {
        if self.exp == 0 {
            return self.num.to_string();
        }
        // num/2^e = num·5^e / 10^e
        let scaled = &self.num * BigUint::from(5u32).pow(self.exp);
        let digits = scaled.to_string();
        let e = self.exp as usize;
        let (int_part, frac_part) = if digits.len() > e {
            let (i, f) = digits.split_at(digits.len() - e);
            (i.to_string(), f.to_string())
        } else {
            (
                "0".to_string(),
                format!("{}{}", "0".repeat(e - digits.len()), digits),
            )
        };
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            int_part
        } else {
            format!("{int_part}.{frac_part}")
        }
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigUint, BigUint, u32) {
    match a.exp.cmp(&b.exp) {
        Ordering::Equal => (a.num.clone(), b.num.clone(), a.exp),
        Ordering::Less => (&a.num << (b.exp - a.exp), b.num.clone(), b.exp),
        Ordering::Greater => (a.num.clone(), &b.num << (a.exp - b.exp), a.exp),
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, exp) = align(self, rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigUint::one() << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = GeometryError;

    /// Accepts `a` or `a/b` with `b` a power of two.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigUint = num.parse().map_err(|_| parse_err("dyadic rational", s))?;
        let den: BigUint = den.parse().map_err(|_| parse_err("dyadic rational", s))?;
        if den.is_zero() || den.count_ones() != 1 {
            return Err(parse_err("dyadic rational", s));
        }
        let exp = den.trailing_zeros().unwrap_or(0);
        let exp = u32::try_from(exp).map_err(|_| parse_err("dyadic rational", s))?;
        Ok(Dyadic::new(num, exp))
    }
}

/// How two dyadic intervals sit relative to each other. Partial overlap is
/// impossible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalRelation {
    Disjoint,
    Equal,
    AContainsB,
    BContainsA,
}

/// `[num·2^-depth, (num+1)·2^-depth)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    num: BigUint,
    depth: u32,
}

impl DyadicInterval {
    pub fn new(num: impl Into<BigUint>, depth: u32) -> Result<Self, GeometryError> {
        let num = num.into();
        if num.bits() > u64::from(depth) {
            return Err(GeometryError::NumeratorOutOfRange { num, depth });
        }
        Ok(DyadicInterval { num, depth })
    }

    /// The whole of `[0,1)`.
    pub fn unit() -> Self {
        DyadicInterval {
            num: BigUint::zero(),
            depth: 0,
        }
    }

    /// Builds an interval from its halving choices, `'0'` = lower half.
    pub fn from_address(bits: &str) -> Result<Self, GeometryError> {
        let mut iv = DyadicInterval::unit();
        for c in bits.chars() {
            iv = match c {
                '0' => iv.children().0,
                '1' => iv.children().1,
                _ => return Err(parse_err("interval address", bits)),
            };
        }
        Ok(iv)
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_unit(&self) -> bool {
        self.depth == 0
    }

    pub fn lo(&self) -> Dyadic {
        Dyadic::new(self.num.clone(), self.depth)
    }

    pub fn hi(&self) -> Dyadic {
        Dyadic::new(&self.num + 1u32, self.depth)
    }

    pub fn length(&self) -> Dyadic {
        Dyadic::pow2_inv(self.depth)
    }

    /// The `i`-th halving choice from the root (`false` = lower half).
    pub fn bit(&self, i: u32) -> bool {
        debug_assert!(i < self.depth);
        self.num.bit(u64::from(self.depth - 1 - i))
    }

    pub fn address(&self) -> String {
        (0..self.depth)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    pub fn children(&self) -> (DyadicInterval, DyadicInterval) {
        let base = &self.num << 1u32;
        let upper = &base + 1u32;
        (
            DyadicInterval {
                num: base,
                depth: self.depth + 1,
            },
            DyadicInterval {
                num: upper,
                depth: self.depth + 1,
            },
        )
    }

    pub fn parent(&self) -> Option<DyadicInterval> {
        (self.depth > 0).then(|| DyadicInterval {
            num: &self.num >> 1u32,
            depth: self.depth - 1,
        })
    }

    /// The other half of the parent, with `true` when `self` is the lower half.
    pub fn sibling(&self) -> Option<(DyadicInterval, bool)> {
        if self.depth == 0 {
            return None;
        }
        let is_lower = !self.num.bit(0);
        let mut num = self.num.clone();
        num.set_bit(0, is_lower);
        Some((
            DyadicInterval {
                num,
                depth: self.depth,
            },
            is_lower,
        ))
    }

    /// The ancestor at `depth` (which must not exceed `self.depth`).
    pub fn ancestor(&self, depth: u32) -> DyadicInterval {
        debug_assert!(depth <= self.depth);
        DyadicInterval {
            num: &self.num >> (self.depth - depth),
            depth,
        }
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        self.depth <= other.depth && (&other.num >> (other.depth - self.depth)) == self.num
    }

    pub fn relation(&self, other: &DyadicInterval) -> IntervalRelation {
        match self.depth.cmp(&other.depth) {
            Ordering::Equal if self.num == other.num => IntervalRelation::Equal,
            Ordering::Equal => IntervalRelation::Disjoint,
            Ordering::Less if self.contains(other) => IntervalRelation::AContainsB,
            Ordering::Greater if other.contains(self) => IntervalRelation::BContainsA,
            _ => IntervalRelation::Disjoint,
        }
    }

    /// The deeper of two nested intervals, or `None` if disjoint.
    pub fn intersection(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        match self.relation(other) {
            IntervalRelation::Disjoint => None,
            IntervalRelation::Equal | IntervalRelation::BContainsA => Some(self.clone()),
            IntervalRelation::AContainsB => Some(other.clone()),
        }
    }

    /// Half-open membership `lo <= x < hi`.
    pub fn contains_point(&self, x: &Dyadic) -> bool {
        x.floor_scaled(self.depth) == self.num
    }

    /// The halving path from `parent` down to `self`.
    pub fn relative_to(&self, parent: &DyadicInterval) -> Option<AxisAddress> {
        if !parent.contains(self) {
            return None;
        }
        let len = self.depth - parent.depth;
        let mask = (BigUint::one() << len) - 1u32;
        Some(AxisAddress {
            bits: &self.num & mask,
            len,
        })
    }

    pub fn descend(&self, addr: &AxisAddress) -> DyadicInterval {
        DyadicInterval {
            num: (&self.num << addr.len) | &addr.bits,
            depth: self.depth + addr.len,
        }
    }

    /// The intervals hanging off the path from the root to `self`: for each
    /// proper prefix `p·b` of the address, the interval `p·(1-b)`. Together
    /// with `self` they partition `[0,1)`.
    pub fn path_siblings(&self) -> Vec<DyadicInterval> {
        (1..=self.depth)
            .map(|d| self.ancestor(d).sibling().expect("depth >= 1").0)
            .collect()
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.num, self.depth)
    }
}

impl FromStr for DyadicInterval {
    type Err = GeometryError;

    /// `{num,depth}`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| parse_err("interval", s))?;
        let (num, depth) = inner
            .split_once(',')
            .ok_or_else(|| parse_err("interval", s))?;
        let num: BigUint = num.trim().parse().map_err(|_| parse_err("interval", s))?;
        let depth: u32 = depth.trim().parse().map_err(|_| parse_err("interval", s))?;
        DyadicInterval::new(num, depth)
    }
}

/// A halving path of `len` steps, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisAddress {
    bits: BigUint,
    len: u32,
}

impl AxisAddress {
    pub fn empty() -> Self {
        AxisAddress {
            bits: BigUint::zero(),
            len: 0,
        }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl fmt::Display for AxisAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if self.bits.bit(u64::from(i)) {
                "1"
            } else {
                "0"
            })?;
        }
        Ok(())
    }
}

impl FromStr for AxisAddress {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let iv = DyadicInterval::from_address(s)?;
        Ok(AxisAddress {
            bits: iv.num,
            len: iv.depth,
        })
    }
}

/// Per-axis halving paths locating a sub-rectangle inside a rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelAddress(pub Vec<AxisAddress>);

/// A point of `[0,1)^n` with dyadic coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Dyadic>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// An n-dimensional dyadic rectangle, one interval per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rectangle {
    axes: Vec<DyadicInterval>,
}

impl Rectangle {
    pub fn new(axes: Vec<DyadicInterval>) -> Result<Self, GeometryError> {
        if axes.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(Rectangle { axes })
    }

    /// `[0,1)^n`.
    pub fn unit(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Rectangle {
            axes: vec![DyadicInterval::unit(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[DyadicInterval] {
        &self.axes
    }

    pub fn axis(&self, d: usize) -> &DyadicInterval {
        &self.axes[d]
    }

    pub fn is_unit(&self) -> bool {
        self.axes.iter().all(DyadicInterval::is_unit)
    }

    pub fn with_axis(&self, d: usize, iv: DyadicInterval) -> Rectangle {
        let mut axes = self.axes.clone();
        axes[d] = iv;
        Rectangle { axes }
    }

    fn check_dim(&self, other_dim: usize) -> Result<(), GeometryError> {
        if self.dim() == other_dim {
            Ok(())
        } else {
            Err(GeometryError::DimensionMismatch {
                left: self.dim(),
                right: other_dim,
            })
        }
    }

    fn check_axis(&self, axis: usize) -> Result<(), GeometryError> {
        if axis < self.dim() {
            Ok(())
        } else {
            Err(GeometryError::AxisOutOfRange {
                axis,
                dim: self.dim(),
            })
        }
    }

    pub fn intersection(&self, other: &Rectangle) -> Result<Option<Rectangle>, GeometryError> {
        self.check_dim(other.dim())?;
        Ok(self.intersect(other))
    }

    /// Dimension-unchecked intersection.
    pub(crate) fn intersect(&self, other: &Rectangle) -> Option<Rectangle> {
        self.axes
            .iter()
            .zip(&other.axes)
            .map(|(a, b)| a.intersection(b))
            .collect::<Option<Vec<_>>>()
            .map(|axes| Rectangle { axes })
    }

    pub fn is_disjoint(&self, other: &Rectangle) -> bool {
        self.axes
            .iter()
            .zip(&other.axes)
            .any(|(a, b)| a.relation(b) == IntervalRelation::Disjoint)
    }

    /// Per-axis containment of `other` in `self`.
    pub fn contains(&self, other: &Rectangle) -> bool {
        self.dim() == other.dim()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.contains(b))
    }

    pub fn relative_address(&self, parent: &Rectangle) -> Result<RelAddress, GeometryError> {
        self.check_dim(parent.dim())?;
        self.axes
            .iter()
            .zip(&parent.axes)
            .map(|(c, p)| c.relative_to(p))
            .collect::<Option<Vec<_>>>()
            .map(RelAddress)
            .ok_or_else(|| GeometryError::NotContained {
                child: self.clone(),
                parent: parent.clone(),
            })
    }

    pub fn apply_relative_address(&self, rel: &RelAddress) -> Result<Rectangle, GeometryError> {
        self.check_dim(rel.0.len())?;
        Ok(Rectangle {
            axes: self
                .axes
                .iter()
                .zip(&rel.0)
                .map(|(iv, a)| iv.descend(a))
                .collect(),
        })
    }

    /// Carries `self ⊆ src` to the matching sub-rectangle of `dst` under the
    /// orientation-preserving affine map `src → dst`. No checks.
    pub(crate) fn transport(&self, src: &Rectangle, dst: &Rectangle) -> Rectangle {
        Rectangle {
            axes: self
                .axes
                .iter()
                .zip(&src.axes)
                .zip(&dst.axes)
                .map(|((c, s), d)| {
                    let len = c.depth - s.depth;
                    let mask = (BigUint::one() << len) - 1u32;
                    DyadicInterval {
                        num: (&d.num << len) | (&c.num & mask),
                        depth: d.depth + len,
                    }
                })
                .collect(),
        }
    }

    pub fn total_depth(&self) -> u64 {
        self.axes.iter().map(|a| u64::from(a.depth)).sum()
    }

    pub fn measure(&self) -> Measure {
        Dyadic::pow2_inv(u32::try_from(self.total_depth()).expect("depth overflow"))
    }

    pub fn subdivide(&self, axis: usize) -> Result<(Rectangle, Rectangle), GeometryError> {
        self.check_axis(axis)?;
        let (lo, hi) = self.axes[axis].children();
        Ok((self.with_axis(axis, lo), self.with_axis(axis, hi)))
    }

    pub fn parent_along(&self, axis: usize) -> Option<Rectangle> {
        self.axes[axis].parent().map(|p| self.with_axis(axis, p))
    }

    /// The other half of the parent along `axis`, with `true` when `self` is
    /// the lower half.
    pub fn sibling_along(&self, axis: usize) -> Option<(Rectangle, bool)> {
        self.axes[axis]
            .sibling()
            .map(|(s, lower)| (self.with_axis(axis, s), lower))
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && self
                .axes
                .iter()
                .zip(&p.0)
                .all(|(iv, x)| iv.contains_point(x))
    }

    pub fn lower_corner(&self) -> Point {
        Point(self.axes.iter().map(DyadicInterval::lo).collect())
    }

    /// Lexicographic comparison of lower corners (axis 0 first).
    pub fn cmp_lower_corner(&self, other: &Rectangle) -> Ordering {
        self.axes
            .iter()
            .zip(&other.axes)
            .map(|(a, b)| a.lo().cmp(&b.lo()))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, iv) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{iv}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Rectangle {
    type Err = GeometryError;

    /// `[{num,depth},{num,depth},...]`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| parse_err("rectangle", s))?;
        let axes = inner
            .split_inclusive('}')
            .map(|tok| tok.trim().trim_start_matches(',').trim())
            .filter(|tok| !tok.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<DyadicInterval>, _>>()?;
        Rectangle::new(axes)
    }
}

/// Maps `p ∈ src` to `dst` by the orientation-preserving affine bijection
/// `x ↦ (x - src.lo)·(dst.len/src.len) + dst.lo` on each axis.
pub fn affine_map_point(
    src: &Rectangle,
    dst: &Rectangle,
    p: &Point,
) -> Result<Point, GeometryError> {
    src.check_dim(dst.dim())?;
    src.check_dim(p.dim())?;
    if !src.contains_point(p) {
        return Err(GeometryError::PointOutside {
            point: p.clone(),
            rect: src.clone(),
        });
    }
    Ok(map_point_unchecked(src, dst, p))
}

pub(crate) fn map_point_unchecked(src: &Rectangle, dst: &Rectangle, p: &Point) -> Point {
    Point(
        src.axes
            .iter()
            .zip(&dst.axes)
            .zip(&p.0)
            .map(|((s, d), x)| {
                let offset = x.checked_sub(&s.lo()).expect("point inside source");
                let scale = i64::from(s.depth) - i64::from(d.depth);
                &offset.scaled(scale) + &d.lo()
            })
            .collect(),
    )
}
