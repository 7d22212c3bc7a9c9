//! Bounded faithfulness harness: every word up to a length is evaluated in
//! nV and compared with the word-problem oracle of the RAAG.

use rayon::prelude::*;

use crate::nv::Element;
use crate::raag::{is_trivial, Letter, Word};

use super::{EmbeddingError, GeneratorMap, DEFAULT_PIECE_CEILING};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_len: usize,
    /// Skip words containing `x x⁻¹` or `x⁻¹ x`.
    pub freely_reduced: bool,
    pub piece_ceiling: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_len: 6,
            freely_reduced: true,
            piece_ceiling: DEFAULT_PIECE_CEILING,
        }
    }
}

/// A word on which the nV image and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: Word,
    /// What the oracle says.
    pub trivial_in_group: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub words: u64,
    pub trivial: u64,
    pub nontrivial: u64,
    pub max_pieces: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn merge(&mut self, other: CheckReport) {
        self.words += other.words;
        self.trivial += other.trivial;
        self.nontrivial += other.nontrivial;
        self.max_pieces = self.max_pieces.max(other.max_pieces);
        self.counterexamples.extend(other.counterexamples);
    }
}

struct Walker<'a> {
    map: &'a GeneratorMap,
    opts: &'a CheckOptions,
    alphabet: usize,
}

impl Walker<'_> {
    fn visit(
        &self,
        word: &mut Vec<Letter>,
        value: &Element,
        report: &mut CheckReport,
    ) -> Result<(), EmbeddingError> {
        let w = Word(word.clone());
        let trivial = is_trivial(&w, self.map.graph());
        report.words += 1;
        if trivial {
            report.trivial += 1;
        } else {
            report.nontrivial += 1;
        }
        report.max_pieces = report.max_pieces.max(value.len());
        if trivial != value.is_identity() {
            report.counterexamples.push(Counterexample {
                word: w,
                trivial_in_group: trivial,
            });
        }
        if word.len() >= self.opts.max_len {
            return Ok(());
        }
        for rank in 0..self.alphabet {
            let l = Letter::from_rank(rank);
            if let Some(next) = self.extend(word, value, l)? {
                word.push(l);
                self.visit(word, &next, report)?;
                word.pop();
            }
        }
        Ok(())
    }

    fn extend(
        &self,
        word: &[Letter],
        value: &Element,
        l: Letter,
    ) -> Result<Option<Element>, EmbeddingError> {
        if self.opts.freely_reduced && word.last() == Some(&l.inv()) {
            return Ok(None);
        }
        self.map
            .step(
                value,
                l.generator,
                l.inverse,
                self.opts.piece_ceiling,
                word.len() + 1,
            )
            .map(Some)
    }
}

/// Checks `evaluate(w) = id ⟺ w = 1` for all words of length `≤ max_len`.
/// Prefix values are shared along a depth-first walk; the subtrees under
/// each first letter run in parallel and merge in letter order.
pub fn bounded_check(
    map: &GeneratorMap,
    opts: &CheckOptions,
) -> Result<CheckReport, EmbeddingError> {
    let walker = Walker {
        map,
        opts,
        alphabet: 2 * map.graph().len(),
    };
    let id = Element::identity(map.dim());
    // the empty word
    let mut report = CheckReport {
        words: 1,
        trivial: 1,
        max_pieces: 1,
        ..CheckReport::default()
    };
    if opts.max_len > 0 {
        let subtrees = (0..walker.alphabet)
            .into_par_iter()
            .map(|rank| -> Result<CheckReport, EmbeddingError> {
                let l = Letter::from_rank(rank);
                let mut sub = CheckReport::default();
                if let Some(value) = walker.extend(&[], &id, l)? {
                    let mut word = vec![l];
                    walker.visit(&mut word, &value, &mut sub)?;
                }
                Ok(sub)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for sub in subtrees {
            report.merge(sub);
        }
    }
    report
        .counterexamples
        .sort_by(|a, b| (a.word.len(), &a.word).cmp(&(b.word.len(), &b.word)));
    Ok(report)
}
