//! Exact verification of the ping-pong hypotheses for slice embeddings.
//!
//! With `S_i = S_i⁺ ⊔ S_i⁻` the slices of the construction, the action on
//! `[0,1)^n` is faithful once:
//! 1. `h_i(S_i⁺) ⊆ S_i⁺` and `h_i⁻¹(S_i⁻) ⊆ S_i⁻`;
//! 2. `h_i(S_j) = S_j` when `v_i, v_j` are adjacent;
//! 3. `h_i(S_j) ⊆ S_i⁺` and `h_i⁻¹(S_j) ⊆ S_i⁻` when they are not;
//! 4. some `x₀` outside every `S_i` has `h_i(x₀) ∈ S_i⁺`, `h_i⁻¹(x₀) ∈ S_i⁻`.
//!
//! Every containment is checked on exact image fragments, every equality by
//! containment plus measure.

use rayon::prelude::*;

use crate::dyadic::{Measure, Point, Rectangle};
use crate::nv::Element;

use super::{EmbeddingError, GeneratorMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An image fragment escaping its target.
    Fragment {
        generator: usize,
        inverse: bool,
        source: Rectangle,
        fragment: Rectangle,
        target: Rectangle,
    },
    /// Fragments inside the target but not covering it.
    Coverage {
        generator: usize,
        source: Rectangle,
        covered: Measure,
        target: Rectangle,
    },
    /// The base point lies in a slice.
    BasePointInSlice { generator: usize, point: Point },
    /// The base point's image misses its target.
    BasePointImage {
        generator: usize,
        inverse: bool,
        image: Point,
        target: Rectangle,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionResult {
    pub checks: usize,
    pub witness: Option<Witness>,
}

impl ConditionResult {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn record(&mut self, outcome: Option<Witness>) {
        self.checks += 1;
        if self.witness.is_none() {
            self.witness = outcome;
        }
    }

    fn merge(&mut self, other: ConditionResult) {
        self.checks += other.checks;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PingPongCertificate {
    pub base_point: Point,
    /// Condition 1.
    pub invariant_halves: ConditionResult,
    /// Condition 2.
    pub commuting: ConditionResult,
    /// Condition 3.
    pub non_commuting: ConditionResult,
    /// Condition 4.
    pub base_point_moves: ConditionResult,
    /// `h_i` fixes every slice (and half) whose axes avoid `D_i`.
    pub slice_invariance: ConditionResult,
}

impl PingPongCertificate {
    pub fn is_valid(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.holds())
    }

    pub fn conditions(&self) -> [(&'static str, &ConditionResult); 5] {
        [
            ("condition-1", &self.invariant_halves),
            ("condition-2", &self.commuting),
            ("condition-3", &self.non_commuting),
            ("condition-4", &self.base_point_moves),
            ("slice-invariance", &self.slice_invariance),
        ]
    }
}

fn escaping_fragment(
    f: &Element,
    generator: usize,
    inverse: bool,
    source: &Rectangle,
    target: &Rectangle,
) -> Result<Option<Witness>, EmbeddingError> {
    Ok(f.image_of_rectangle(source)?
        .into_iter()
        .find(|frag| !target.contains(frag))
        .map(|fragment| Witness::Fragment {
            generator,
            inverse,
            source: source.clone(),
            fragment,
            target: target.clone(),
        }))
}

/// `f(source) = target`: every fragment inside, measures adding up.
fn tiling_failure(
    f: &Element,
    generator: usize,
    source: &Rectangle,
    target: &Rectangle,
) -> Result<Option<Witness>, EmbeddingError> {
    let frags = f.image_of_rectangle(source)?;
    if let Some(fragment) = frags.iter().find(|frag| !target.contains(frag)) {
        return Ok(Some(Witness::Fragment {
            generator,
            inverse: false,
            source: source.clone(),
            fragment: fragment.clone(),
            target: target.clone(),
        }));
    }
    let covered: Measure = frags.iter().map(Rectangle::measure).sum();
    Ok((covered != target.measure()).then(|| Witness::Coverage {
        generator,
        source: source.clone(),
        covered,
        target: target.clone(),
    }))
}

/// Runs every check. Generators are checked in parallel; the first witness
/// in generator order is kept for each condition.
pub fn verify_pingpong(map: &GeneratorMap) -> Result<PingPongCertificate, EmbeddingError> {
    let (Some(family), Some(assignment)) = (map.slice_family(), map.assignment()) else {
        return Err(EmbeddingError::CertificateUnavailable);
    };
    let graph = map.graph();
    let slices = &family.slices;
    let x0 = &family.base_point;

    let per_generator = (0..graph.len())
        .into_par_iter()
        .map(|i| -> Result<[ConditionResult; 5], EmbeddingError> {
            let mut out: [ConditionResult; 5] = Default::default();
            let h = map.letter(i, false)?;
            let hinv = map.letter(i, true)?;
            let si = &slices[i];

            out[0].record(escaping_fragment(h, i, false, &si.plus, &si.plus)?);
            out[0].record(escaping_fragment(hinv, i, true, &si.minus, &si.minus)?);

            for (j, sj) in slices.iter().enumerate() {
                if j == i {
                    continue;
                }
                if graph.is_edge(i, j) {
                    out[1].record(tiling_failure(h, i, &sj.slice, &sj.slice)?);
                } else {
                    out[2].record(escaping_fragment(h, i, false, &sj.slice, &si.plus)?);
                    out[2].record(escaping_fragment(hinv, i, true, &sj.slice, &si.minus)?);
                }
                if assignment.sets[i].is_disjoint(&assignment.sets[j]) {
                    for r in [&sj.slice, &sj.plus, &sj.minus] {
                        out[4].record(tiling_failure(h, i, r, r)?);
                    }
                }
            }

            out[3].record(
                si.slice
                    .contains_point(x0)
                    .then(|| Witness::BasePointInSlice {
                        generator: i,
                        point: x0.clone(),
                    }),
            );
            for (f, inverse, target) in [(h, false, &si.plus), (hinv, true, &si.minus)] {
                let image = f.apply(x0)?;
                out[3].record(
                    (!target.contains_point(&image)).then(|| Witness::BasePointImage {
                        generator: i,
                        inverse,
                        image,
                        target: target.clone(),
                    }),
                );
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut merged: [ConditionResult; 5] = Default::default();
    for parts in per_generator {
        for (acc, part) in merged.iter_mut().zip(parts) {
            acc.merge(part);
        }
    }
    let [invariant_halves, commuting, non_commuting, base_point_moves, slice_invariance] = merged;
    Ok(PingPongCertificate {
        base_point: x0.clone(),
        invariant_halves,
        commuting,
        non_commuting,
        base_point_moves,
        slice_invariance,
    })
}
