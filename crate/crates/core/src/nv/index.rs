//! Binary trie over the dyadic addresses of one chosen axis. Because dyadic
//! intervals are laminar, every rectangle meeting a query either has an
//! axis interval on the query's root path or one below the query's node.

use std::collections::HashSet;

use crate::dyadic::{Dyadic, Point, Rectangle};

#[derive(Default, Clone, Debug)]
struct Node {
    children: [u32; 2],
    items: Vec<u32>,
}

#[derive(Clone, Debug)]
pub(crate) struct RectIndex {
    axis: usize,
    nodes: Vec<Node>,
}

impl RectIndex {
    pub(crate) fn build<'a>(rects: impl Iterator<Item = &'a Rectangle> + Clone) -> Self {
        let axis = best_axis(rects.clone());
        let mut index = RectIndex {
            axis,
            nodes: vec![Node::default()],
        };
        for (i, r) in rects.enumerate() {
            let iv = r.axis(axis);
            let mut at = 0usize;
            for b in 0..iv.depth() {
                let side = usize::from(iv.bit(b));
                let next = index.nodes[at].children[side];
                at = if next == 0 {
                    index.nodes.push(Node::default());
                    let id = index.nodes.len() - 1;
                    index.nodes[at].children[side] = id as u32;
                    id
                } else {
                    next as usize
                };
            }
            index.nodes[at].items.push(i as u32);
        }
        index
    }

    /// Candidate indices whose axis interval nests with the query's.
    pub(crate) fn candidates(&self, query: &Rectangle, out: &mut Vec<usize>) {
        let iv = query.axis(self.axis);
        let mut at = 0usize;
        out.extend(self.nodes[0].items.iter().map(|&i| i as usize));
        for b in 0..iv.depth() {
            let next = self.nodes[at].children[usize::from(iv.bit(b))];
            if next == 0 {
                return;
            }
            at = next as usize;
            out.extend(self.nodes[at].items.iter().map(|&i| i as usize));
        }
        let mut stack: Vec<u32> = self.nodes[at]
            .children
            .iter()
            .copied()
            .filter(|&c| c != 0)
            .collect();
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            out.extend(node.items.iter().map(|&i| i as usize));
            stack.extend(node.children.iter().copied().filter(|&c| c != 0));
        }
    }

    /// Candidate indices whose axis interval contains the point's coordinate.
    pub(crate) fn point_candidates(&self, p: &Point, out: &mut Vec<usize>) {
        let x = &p.0[self.axis];
        let mut at = 0usize;
        out.extend(self.nodes[0].items.iter().map(|&i| i as usize));
        let mut bit = 0u32;
        loop {
            let next = self.nodes[at].children[usize::from(coordinate_bit(x, bit))];
            if next == 0 {
                return;
            }
            at = next as usize;
            out.extend(self.nodes[at].items.iter().map(|&i| i as usize));
            bit += 1;
        }
    }
}

/// The `i`-th binary digit after the point of `x ∈ [0,1)`.
fn coordinate_bit(x: &Dyadic, i: u32) -> bool {
    let e = x.exponent();
    i < e && x.numerator().bit(u64::from(e - 1 - i))
}

fn best_axis<'a>(rects: impl Iterator<Item = &'a Rectangle> + Clone) -> usize {
    let dim = match rects.clone().next() {
        Some(r) => r.dim(),
        None => return 0,
    };
    (0..dim)
        .max_by_key(|&d| {
            let distinct: HashSet<_> = rects.clone().map(|r| r.axis(d)).collect();
            (distinct.len(), std::cmp::Reverse(d))
        })
        .unwrap_or(0)
}
