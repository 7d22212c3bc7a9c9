//! Defining graphs of right-angled Artin groups, words in their generators,
//! and a word-problem oracle independent of any nV representation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaagError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("duplicate edge {0:?} -- {1:?}")]
    DuplicateEdge(String, String),
    #[error("vertex {0:?} is adjacent to every other vertex and lies on no complementary edge")]
    CentralVertex(String),
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
}

/// A finite simple graph with named, ordered vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adjacency: Vec<Vec<bool>>,
}

/// A non-adjacent pair `a < b` of distinct vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplementaryEdge(pub usize, pub usize);

impl ComplementaryEdge {
    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl Graph {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, RaagError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(RaagError::DuplicateVertex(n.clone()));
            }
        }
        let m = names.len();
        Ok(Graph {
            names,
            adjacency: vec![vec![false; m]; m],
        })
    }

    /// Vertices `v1..vm` with the given 0-based edges.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Self, RaagError> {
        let mut g = Graph::new((1..=m).map(|i| format!("v{i}")))?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), RaagError> {
        let m = self.len();
        for v in [a, b] {
            if v >= m {
                return Err(RaagError::GeneratorOutOfRange { index: v, count: m });
            }
        }
        if a == b {
            return Err(RaagError::Loop(self.names[a].clone()));
        }
        if self.adjacency[a][b] {
            return Err(RaagError::DuplicateEdge(
                self.names[a].clone(),
                self.names[b].clone(),
            ));
        }
        self.adjacency[a][b] = true;
        self.adjacency[b][a] = true;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    /// Whether generators `a` and `b` commute in the group.
    pub fn commute(&self, a: usize, b: usize) -> bool {
        a == b || self.adjacency[a][b]
    }

    /// Edges `(a, b)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.pairs()
            .filter(|&(a, b)| self.adjacency[a][b])
            .collect()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.len();
        (0..m).flat_map(move |a| (a + 1..m).map(move |b| (a, b)))
    }

    /// Non-adjacent distinct pairs, lexicographic by vertex index.
    pub fn complementary_edges(&self) -> Vec<ComplementaryEdge> {
        self.pairs()
            .filter(|&(a, b)| !self.adjacency[a][b])
            .map(|(a, b)| ComplementaryEdge(a, b))
            .collect()
    }

    /// Vertices adjacent to every other vertex.
    pub fn v0_vertices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| (0..self.len()).all(|w| w == v || self.adjacency[v][w]))
            .collect()
    }

    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        Graph {
            names: keep.iter().map(|&v| self.names[v].clone()).collect(),
            adjacency: keep
                .iter()
                .map(|&a| keep.iter().map(|&b| self.adjacency[a][b]).collect())
                .collect(),
        }
    }

    /// One axis per complementary edge; each vertex gets the axes of the
    /// complementary edges it lies on. Needs every vertex to lie on one.
    pub fn canonical_d_assignment(&self) -> Result<DAssignment, RaagError> {
        let comp = self.complementary_edges();
        let sets: Vec<BTreeSet<usize>> = (0..self.len())
            .map(|v| {
                comp.iter()
                    .enumerate()
                    .filter(|(_, e)| e.contains(v))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        if let Some(v) = sets.iter().position(BTreeSet::is_empty) {
            return Err(RaagError::CentralVertex(self.names[v].clone()));
        }
        Ok(DAssignment {
            dim: comp.len(),
            sets,
        })
    }
}

/// Text format: `v <name>` declares a vertex, `e <a> <b>` an edge, `#`
/// starts a comment.
impl FromStr for Graph {
    type Err = RaagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut names: Vec<String> = Vec::new();
        let mut edges: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["v", name] => {
                    if names.iter().any(|n| n == name) {
                        return Err(RaagError::DuplicateVertex(name.to_string()));
                    }
                    names.push(name.to_string());
                }
                ["e", a, b] => edges.push((line_no, a.to_string(), b.to_string())),
                _ => {
                    return Err(RaagError::Parse {
                        line: line_no,
                        message: format!("unrecognised line {line:?}"),
                    })
                }
            }
        }
        let mut g = Graph::new(names)?;
        for (_, a, b) in edges {
            let ia = g.vertex(&a).ok_or(RaagError::UnknownVertex(a))?;
            let ib = g.vertex(&b).ok_or(RaagError::UnknownVertex(b))?;
            g.add_edge(ia, ib)?;
        }
        Ok(g)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.names {
            writeln!(f, "v {n}")?;
        }
        for (a, b) in self.edges() {
            writeln!(f, "e {} {}", self.names[a], self.names[b])?;
        }
        Ok(())
    }
}

/// Vertex `i` ↦ nonempty axis set `D_i ⊆ {0..dim}` (0-based axes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DAssignment {
    pub dim: usize,
    pub sets: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentViolation {
    #[error("{found} axis sets for {expected} vertices")]
    Count { expected: usize, found: usize },
    #[error("vertex {0} has an empty axis set")]
    Empty(usize),
    #[error("vertex {vertex} uses axis {axis} outside dimension {dim}")]
    AxisOutOfRange {
        vertex: usize,
        axis: usize,
        dim: usize,
    },
    #[error("vertices {0} and {1} are adjacent but their axis sets meet")]
    EdgeSetsMeet(usize, usize),
    #[error("vertices {0} and {1} are not adjacent but their axis sets are disjoint")]
    NonEdgeSetsDisjoint(usize, usize),
}

/// `D_i ∩ D_j = ∅` exactly when `{v_i, v_j}` is an edge.
pub fn validate_d_assignment(graph: &Graph, d: &DAssignment) -> Result<(), AssignmentViolation> {
    if d.sets.len() != graph.len() {
        return Err(AssignmentViolation::Count {
            expected: graph.len(),
            found: d.sets.len(),
        });
    }
    for (v, set) in d.sets.iter().enumerate() {
        if set.is_empty() {
            return Err(AssignmentViolation::Empty(v));
        }
        if let Some(&axis) = set.iter().find(|&&a| a >= d.dim) {
            return Err(AssignmentViolation::AxisOutOfRange {
                vertex: v,
                axis,
                dim: d.dim,
            });
        }
    }
    for (a, b) in graph.pairs() {
        let disjoint = d.sets[a].is_disjoint(&d.sets[b]);
        match (graph.is_edge(a, b), disjoint) {
            (true, false) => return Err(AssignmentViolation::EdgeSetsMeet(a, b)),
            (false, true) => return Err(AssignmentViolation::NonEdgeSetsDisjoint(a, b)),
            _ => {}
        }
    }
    Ok(())
}

/// A generator or its inverse. Ordered by generator, `g` before `g⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }

    /// Position in the alphabet `g1, g1⁻¹, g2, g2⁻¹, ...`.
    pub fn rank(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    pub fn from_rank(rank: usize) -> Letter {
        Letter::new(rank / 2, rank % 2 == 1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Whitespace-separated `name` or `name^-1` tokens. A lone `1` is the
    /// empty word unless some vertex is called `1`.
    pub fn parse(text: &str, graph: &Graph) -> Result<Word, RaagError> {
        if text.trim() == "1" && graph.vertex("1").is_none() {
            return Ok(Word::empty());
        }
        text.split_whitespace()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                graph
                    .vertex(name)
                    .map(|g| Letter::new(g, inverse))
                    .ok_or_else(|| RaagError::UnknownVertex(name.to_string()))
            })
            .collect::<Result<_, _>>()
            .map(Word)
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> impl fmt::Display + 'a {
        WordDisplay { word: self, graph }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a Graph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.graph.name(l.generator))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Deletes `x^e u x^-e` pairs whose middle `u` commutes with `x`, until none
/// remain. The survivor is a geodesic for the same element.
fn cancel(word: &Word, graph: &Graph) -> Vec<Letter> {
    let mut w = word.0.clone();
    'outer: loop {
        for i in 0..w.len() {
            let x = w[i];
            for j in i + 1..w.len() {
                let y = w[j];
                if y == x.inv() {
                    w.remove(j);
                    w.remove(i);
                    continue 'outer;
                }
                if !graph.commute(x.generator, y.generator) {
                    break;
                }
            }
        }
        return w;
    }
}

/// Shortlex-least word for the same group element, with letters ordered as
/// in [`Letter`]. Empty exactly when the word is trivial.
pub fn normal_form(word: &Word, graph: &Graph) -> Word {
    let mut rest = cancel(word, graph);
    let mut out = Vec::with_capacity(rest.len());
    // Lexicographically least linear extension: repeatedly take the smallest
    // letter that every earlier letter commutes past.
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for k in 0..rest.len() {
            let free = rest[..k].iter().all(|p| {
                p.generator != rest[k].generator && graph.is_edge(p.generator, rest[k].generator)
            });
            if free && best.is_none_or(|b| rest[k] < rest[b]) {
                best = Some(k);
            }
        }
        out.push(rest.remove(best.expect("first letter is always free")));
    }
    Word(out)
}

pub fn is_trivial(word: &Word, graph: &Graph) -> bool {
    cancel(word, graph).is_empty()
}

/// All words over `generators` generators of length `0..=max_len`, by
/// length then lexicographically in letter order.
pub fn enumerate_words(generators: usize, max_len: usize, freely_reduced: bool) -> WordIter {
    WordIter {
        alphabet: 2 * generators,
        max_len,
        freely_reduced,
        current: Some(Vec::new()),
    }
}

pub struct WordIter {
    alphabet: usize,
    max_len: usize,
    freely_reduced: bool,
    current: Option<Vec<usize>>,
}

impl WordIter {
    fn advance(&mut self, ranks: &mut Vec<usize>) -> bool {
        // odometer increment; on overflow grow the length
        let mut i = ranks.len();
        while i > 0 {
            i -= 1;
            if ranks[i] + 1 < self.alphabet {
                ranks[i] += 1;
                for r in &mut ranks[i + 1..] {
                    *r = 0;
                }
                return true;
            }
        }
        if ranks.len() >= self.max_len || self.alphabet == 0 {
            return false;
        }
        let len = ranks.len() + 1;
        ranks.clear();
        ranks.resize(len, 0);
        true
    }

    fn acceptable(&self, ranks: &[usize]) -> bool {
        !self.freely_reduced
            || ranks
                .windows(2)
                .all(|w| w[0] / 2 != w[1] / 2 || w[0] == w[1])
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let ranks = self.current.take()?;
        let word = Word(ranks.iter().map(|&r| Letter::from_rank(r)).collect());
        let mut next = ranks;
        loop {
            if !self.advance(&mut next) {
                break;
            }
            if self.acceptable(&next) {
                self.current = Some(next);
                break;
            }
        }
        Some(word)
    }
}
