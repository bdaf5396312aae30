//! Quasi-isometry subclass of a graph of ℤⁿ-groups with infinitely-ended tree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::{holonomy_generators, ClassifyError, Evidence};
use crate::gog::{Ends, GoGSpec, GraphOfGroups};
use crate::holonomy::{non_discreteness_witness_among, HolonomyData, WitnessOutcome};
use crate::linalg::rational::rat;
use crate::matgrp::{closure::UnipotentKind, closure_describe, pingpong_generators, ClosureDescription};
use crate::verdict::Tri;

/// Witness search: distance bound and word length.
const WITNESS_EPSILON: (i64, i64) = (1, 1000);
const WITNESS_MAX_LENGTH: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhyteCase {
    /// `ℤⁿ ⋊ F` with `F` free in GLₙ(ℤ).
    ProperFree,
    /// Virtually ascending HNN extension; the amenable subclass.
    Ascending,
    /// Everything else, a single quasi-isometry class.
    Folded,
    /// The tree does not have infinitely many ends.
    OutOfScope(Ends),
    Undetermined,
}

impl WhyteCase {
    pub fn is_decided(self) -> bool {
        matches!(self, WhyteCase::ProperFree | WhyteCase::Ascending | WhyteCase::Folded)
    }
}

impl fmt::Display for WhyteCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhyteCase::ProperFree => f.write_str("2a"),
            WhyteCase::Ascending => f.write_str("2b"),
            WhyteCase::Folded => f.write_str("2c"),
            WhyteCase::OutOfScope(e) => write!(f, "out of scope ({e})"),
            WhyteCase::Undetermined => f.write_str("undetermined"),
        }
    }
}

impl Serialize for WhyteCase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WhyteReport {
    pub ends: Ends,
    pub underlying_rank: usize,
    pub amenable: Tri,
    pub amenable_reason: String,
    pub whyte_case: WhyteCase,
    pub notes: Vec<String>,
    pub evidence: Vec<Evidence>,
}

fn index(m: &crate::linalg::IntMatrix) -> BigInt {
    m.det().abs()
}

/// Amenability with its reason and certificate.
fn amenability(g: &GraphOfGroups, ends: Ends, evidence: &mut Vec<Evidence>) -> (Tri, String) {
    match ends {
        Ends::Bounded => return (Tri::Yes, "the tree reduces to a point, so the group is ℤⁿ".into()),
        Ends::TwoEnded => {
            return (
                Tri::Yes,
                "the tree reduces to a line, so the group is virtually polycyclic".into(),
            )
        }
        Ends::InfinitelyMany => {}
    }
    let rank = g.underlying_rank();
    if rank >= 2 {
        let stable_letters = g.stable_edges().into_iter().map(|e| g.edge(e).name.clone()).collect();
        evidence.push(Evidence::FreeQuotient { rank, stable_letters });
        return (
            Tri::No,
            format!("surjects onto the free group of rank {rank} on the stable letters"),
        );
    }
    if rank == 0 {
        evidence.push(Evidence::TreeOfGroups);
        return (
            Tri::No,
            "generated by elliptic vertex groups with no common fixed point on an infinitely-ended tree".into(),
        );
    }
    if g.vertex_count() == 1 && g.edge_count() == 1 {
        let edge = g.edge(0);
        let (ia, io) = (index(&edge.alpha), index(&edge.omega));
        let ascending = ia.is_one() || io.is_one();
        evidence.push(Evidence::AscendingLoop {
            edge: edge.name.clone(),
            alpha_index: ia.clone(),
            omega_index: io.clone(),
        });
        return if ascending {
            (
                Tri::Yes,
                format!("ascending HNN extension: inclusion indices {ia} and {io}"),
            )
        } else {
            (
                Tri::No,
                format!("HNN extension with both inclusion indices proper ({ia} and {io})"),
            )
        };
    }
    (
        Tri::Undetermined,
        "one stable letter but several edges: virtually ascending forms beyond a single loop are not detected".into(),
    )
}

/// Exact non-discreteness from a pair of stable letters whose closure has a
/// dense unipotent part.
fn dense_unipotent(hd: &HolonomyData) -> Option<Evidence> {
    let gens = holonomy_generators(hd).ok()?;
    if gens.dim() != 2 {
        return None;
    }
    let n = gens.len();
    let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    subsets.extend((0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])));
    for idx in subsets {
        let sub = gens.subset(&idx);
        let Ok(desc) = closure_describe(&sub) else { continue };
        if let ClosureDescription::Triangular { unipotent, .. } = &desc {
            if unipotent.kind == UnipotentKind::Dense {
                return Some(Evidence::DenseUnipotent {
                    generators: sub.names().to_vec(),
                    closure: Box::new(desc),
                });
            }
        }
    }
    None
}

/// Near-identity witness, searched over pairs of stable letters first.
fn witness(hd: &HolonomyData) -> WitnessOutcome {
    let eps = rat(WITNESS_EPSILON.0, WITNESS_EPSILON.1);
    let n = hd.stable.len();
    let mut subsets: Vec<Vec<usize>> = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j])).collect();
    if n != 2 {
        subsets.push((0..n).collect());
    }
    let mut last = None;
    for idx in subsets {
        let out = non_discreteness_witness_among(hd, &idx, &eps, WITNESS_MAX_LENGTH);
        match out {
            WitnessOutcome::Found { .. } | WitnessOutcome::DiscreteIntegral => return out,
            WitnessOutcome::NoneFound { .. } => last = Some(out),
        }
    }
    last.unwrap_or(WitnessOutcome::NoneFound {
        max_word_length: WITNESS_MAX_LENGTH,
        matrices_examined: 0,
    })
}

pub(crate) fn classify_graph(g: &GraphOfGroups) -> Result<WhyteReport, ClassifyError> {
    let degrees = g.bass_serre_degrees();
    let ends = degrees.ends;
    let mut evidence = vec![Evidence::BassSerreDegrees(degrees)];
    let mut notes = Vec::new();
    let (amenable, amenable_reason) = amenability(g, ends, &mut evidence);

    let whyte_case = if ends != Ends::InfinitelyMany {
        WhyteCase::OutOfScope(ends)
    } else {
        match amenable {
            Tri::Yes => WhyteCase::Ascending,
            Tri::Undetermined => WhyteCase::Undetermined,
            Tri::No => {
                let hd = HolonomyData::from_graph(g);
                let unimodular = g
                    .spec()
                    .edges
                    .iter()
                    .all(|e| index(&e.alpha).is_one() && index(&e.omega).is_one());
                let integral = hd.stable.iter().all(|s| s.matrix.is_integral_unimodular());
                if unimodular && integral {
                    evidence.push(Evidence::UnimodularIntegral);
                    let gens = holonomy_generators(&hd)?;
                    match pingpong_generators(&gens) {
                        Some(fp) => {
                            evidence.push(Evidence::InjectiveHolonomy(Box::new(fp)));
                            WhyteCase::ProperFree
                        }
                        None => {
                            notes.push(
                                "unimodular with integral holonomy, but injectivity of the holonomy on the \
                                 stable letters is not witnessed; the ℤⁿ ⋊ F form is ambiguous"
                                    .into(),
                            );
                            WhyteCase::Undetermined
                        }
                    }
                } else {
                    let exact = dense_unipotent(&hd);
                    let w = witness(&hd);
                    let found = w.witness().is_some();
                    evidence.push(Evidence::NonDiscreteness(w));
                    let exact_found = exact.is_some();
                    evidence.extend(exact);
                    if found || exact_found {
                        WhyteCase::Folded
                    } else {
                        notes.push("no non-discreteness witness within the search bounds".into());
                        WhyteCase::Undetermined
                    }
                }
            }
        }
    };
    Ok(WhyteReport {
        ends,
        underlying_rank: g.underlying_rank(),
        amenable,
        amenable_reason,
        whyte_case,
        notes,
        evidence,
    })
}

pub fn whyte_classify(spec: &GoGSpec) -> Result<WhyteReport, ClassifyError> {
    classify_graph(&GraphOfGroups::new(spec.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{ascending2, bs12, spec_a, spec_b, unimodular_free};

    #[test]
    fn sample_graphs_are_folded() {
        for spec in [spec_a(), spec_b()] {
            let r = whyte_classify(&spec).unwrap();
            assert_eq!(r.ends, Ends::InfinitelyMany);
            assert_eq!(r.amenable, Tri::No);
            assert_eq!(r.whyte_case, WhyteCase::Folded);
            let w = r.evidence.iter().find_map(|e| match e {
                Evidence::NonDiscreteness(w) => w.witness().map(|w| w.to_string()),
                _ => None,
            });
            assert_eq!(w.as_deref(), Some("h^-5 p h^5"));
            assert!(r.evidence.iter().any(|e| matches!(e, Evidence::DenseUnipotent { .. })));
        }
    }

    #[test]
    fn ascending_loops() {
        for spec in [bs12(), ascending2()] {
            let r = whyte_classify(&spec).unwrap();
            assert_eq!((r.amenable, r.whyte_case), (Tri::Yes, WhyteCase::Ascending));
        }
    }

    #[test]
    fn proper_loops() {
        let mut bs23 = bs12();
        bs23.edges[0].alpha = crate::linalg::IntMatrix::from_i64(&[&[2]]);
        bs23.edges[0].omega = crate::linalg::IntMatrix::from_i64(&[&[3]]);
        let r = whyte_classify(&bs23).unwrap();
        assert_eq!(r.amenable, Tri::No);
        // Holonomy 3/2 is not integral; the witness search decides.
        assert_eq!(r.whyte_case, WhyteCase::Undetermined);
    }

    #[test]
    fn unimodular_free_group_is_proper() {
        let r = whyte_classify(&unimodular_free()).unwrap();
        assert_eq!(r.whyte_case, WhyteCase::ProperFree);
        let fp = r.evidence.iter().find_map(|e| match e {
            Evidence::InjectiveHolonomy(fp) => Some(fp),
            _ => None,
        });
        fp.unwrap().verify(None).unwrap();
    }

    #[test]
    fn small_trees_are_out_of_scope() {
        let mut t = bs12();
        t.edges[0].omega = crate::linalg::IntMatrix::from_i64(&[&[1]]);
        let r = whyte_classify(&t).unwrap();
        assert_eq!(r.whyte_case, WhyteCase::OutOfScope(Ends::TwoEnded));
    }
}
