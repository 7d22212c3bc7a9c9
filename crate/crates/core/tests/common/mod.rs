#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use nv_raag::dyadic::{Dyadic, DyadicInterval, Point, Rectangle};
use nv_raag::nv::{Element, Piece};
use nv_raag::raag::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn iv(addr: &str) -> DyadicInterval {
    DyadicInterval::from_address(addr).unwrap()
}

pub fn rect(addrs: &[&str]) -> Rectangle {
    Rectangle::new(addrs.iter().map(|a| iv(a)).collect()).unwrap()
}

pub fn axes(list: &[usize]) -> BTreeSet<usize> {
    list.iter().copied().collect()
}

/// A pattern with `pieces` rectangles, grown by halving a random
/// rectangle along a random axis. Capped at `max_depth` per axis.
pub fn random_pattern(
    rng: &mut impl Rng,
    n: usize,
    pieces: usize,
    max_depth: u32,
) -> Vec<Rectangle> {
    let mut rects = vec![Rectangle::unit(n)];
    while rects.len() < pieces {
        let i = rng.gen_range(0..rects.len());
        let axis = rng.gen_range(0..n);
        if rects[i].axis(axis).depth() >= max_depth {
            continue;
        }
        let (lo, hi) = rects[i].subdivide(axis).unwrap();
        rects[i] = lo;
        rects.push(hi);
    }
    rects.shuffle(rng);
    rects
}

pub fn random_element(rng: &mut impl Rng, n: usize, max_pieces: usize) -> Element {
    let r = rng.gen_range(1..=max_pieces);
    let p = random_pattern(rng, n, r, 6);
    let q = random_pattern(rng, n, r, 6);
    Element::new(
        p.into_iter()
            .zip(q)
            .map(|(d, r)| Piece::new(d, r))
            .collect(),
    )
    .unwrap()
}

pub fn random_graph(rng: &mut impl Rng, m: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(m, &edges).unwrap()
}

/// Every labelled simple graph on `m` vertices.
pub fn all_graphs(m: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(m, &edges).unwrap()
    })
}

/// Complete graph on `n` vertices plus one isolated vertex.
pub fn free_product_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    Graph::from_edges(n + 1, &edges).unwrap()
}

/// Fixed-point coordinates: `x = value · 2^-SCALE`. Independent of the
/// library's point arithmetic.
pub const SCALE: u32 = 100;

pub type Fixed = Vec<u128>;

fn scaled_lo(iv: &DyadicInterval) -> u128 {
    assert!(
        iv.depth() <= SCALE,
        "depth {} beyond the oracle's scale",
        iv.depth()
    );
    iv.num().to_u128().unwrap() << (SCALE - iv.depth())
}

fn scaled_len(iv: &DyadicInterval) -> u128 {
    1u128 << (SCALE - iv.depth())
}

pub fn fixed_in(r: &Rectangle, x: &[u128]) -> bool {
    r.axes().iter().zip(x).all(|(a, &c)| {
        let lo = scaled_lo(a);
        c >= lo && c - lo < scaled_len(a)
    })
}

/// One axis of a piece: domain `[lo, lo + len)` onto range starting at
/// `image_lo`, scaled by `2^shift`.
#[derive(Clone, Copy)]
struct AxisMap {
    lo: u128,
    len: u128,
    image_lo: u128,
    shift: i32,
}

/// An element as a table of fixed-point affine maps, evaluated by linear
/// scan over the pieces.
pub struct Oracle {
    pieces: Vec<Vec<AxisMap>>,
}

impl Oracle {
    pub fn new(e: &Element) -> Self {
        let pieces = e
            .pieces()
            .iter()
            .map(|p| {
                p.domain
                    .axes()
                    .iter()
                    .zip(p.range.axes())
                    .map(|(d, r)| AxisMap {
                        lo: scaled_lo(d),
                        len: scaled_len(d),
                        image_lo: scaled_lo(r),
                        shift: d.depth() as i32 - r.depth() as i32,
                    })
                    .collect()
            })
            .collect();
        Oracle { pieces }
    }

    pub fn apply(&self, x: &[u128]) -> Fixed {
        let hits: Vec<&Vec<AxisMap>> = self
            .pieces
            .iter()
            .filter(|axes| {
                axes.iter()
                    .zip(x)
                    .all(|(a, &c)| c >= a.lo && c - a.lo < a.len)
            })
            .collect();
        assert_eq!(hits.len(), 1, "point lies in {} domain pieces", hits.len());
        hits[0]
            .iter()
            .zip(x)
            .map(|(a, &c)| {
                let off = c - a.lo;
                let off = if a.shift >= 0 {
                    off << a.shift
                } else {
                    let k = -a.shift;
                    assert_eq!(
                        off & ((1u128 << k) - 1),
                        0,
                        "image below the oracle's resolution"
                    );
                    off >> k
                };
                a.image_lo + off
            })
            .collect()
    }
}

pub fn oracle_apply(e: &Element, x: &[u128]) -> Fixed {
    Oracle::new(e).apply(x)
}

pub fn to_fixed(p: &Point) -> Fixed {
    p.0.iter()
        .map(|x| {
            assert!(x.exponent() <= SCALE);
            x.numerator().to_u128().unwrap() << (SCALE - x.exponent())
        })
        .collect()
}

pub fn from_fixed(x: &[u128]) -> Point {
    Point(
        x.iter()
            .map(|&c| Dyadic::new(BigUint::from(c), SCALE))
            .collect(),
    )
}

/// All points with coordinates in `{k / 2^depth}`, as fixed-point vectors.
pub fn grid(n: usize, depth: u32) -> Vec<Fixed> {
    let side = 1u128 << depth;
    let step = 1u128 << (SCALE - depth);
    let mut out: Vec<Fixed> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..side).map(move |k| {
                    let mut q = p.clone();
                    q.push(k * step);
                    q
                })
            })
            .collect();
    }
    out
}

/// Total measure of `rects` as a numerator over `2^bound`.
pub fn measure_numerator(rects: &[Rectangle], bound: u32) -> BigUint {
    rects
        .iter()
        .map(|r| {
            let d = r.total_depth() as u32;
            assert!(d <= bound);
            BigUint::from(1u8) << (bound - d)
        })
        .sum()
}
