//! Top-level verdicts for a graph of ℤⁿ-groups: quasi-isometry subclass,
//! Haagerup property and weak amenability, pairwise quasi-isometry, and
//! equivariant compression.
//!
//! Every decided answer carries [`Evidence`] that can be re-checked
//! independently, and names the theorem it relies on through a [`Citation`].

pub mod compression;
pub mod cv;
pub mod qi;
pub mod whyte;

pub use compression::{compression_report, Alpha, CompressionChecklist, CompressionReport};
pub use cv::{cv_properties, CowlingHaagerup, CvReport};
pub use qi::{qi_compare, HausdorffEvidence, QiOutcome, QiVerdict};
pub use whyte::{whyte_classify, WhyteCase, WhyteReport};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::gog::{BassSerreLocalData, GoGSpec, GogError, GraphOfGroups};
use crate::holonomy::{HolonomyData, WitnessOutcome};
use crate::linalg::QMatrix;
use crate::matgrp::{ClosureDescription, CoarseDensity, FreePair, GeneratorSet, MatgrpError, TitsDecision};
use crate::verdict::Tri;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GogError),
    #[error(transparent)]
    Matrix(#[from] MatgrpError),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("compression exponent needs p ≥ 1")]
    BadExponent,
}

/// A theorem the verdict depends on, by descriptive name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Citation {
    pub key: &'static str,
    pub statement: &'static str,
}

pub const WHYTE_CLASSIFICATION: Citation = Citation {
    key: "whyte-qi-classification",
    statement: "GBS_n groups with infinitely-ended Bass-Serre tree: quasi-isometric groups have Hausdorff \
                equivalent holonomy, and each Hausdorff class splits into the QI-invariant subclasses \
                2a (Z^n ⋊ F, F free in GL_n(Z)), 2b (virtually ascending HNN) and 2c (all others, one QI class)",
};

pub const AMENABLE_IS_ASCENDING: Citation = Citation {
    key: "ascending-subclass-is-amenable",
    statement: "in the infinitely-ended case, subclass 2b consists exactly of the amenable groups; \
                subclass 2a has discrete holonomy",
};

pub const HOLONOMY_AMENABILITY: Citation = Citation {
    key: "holonomy-closure-criterion",
    statement: "for a GBS_n group the Haagerup property, weak amenability, Cowling-Haagerup constant 1 \
                and amenability of the closure of the holonomy image are equivalent",
};

pub const TITS_ALTERNATIVE: Citation = Citation {
    key: "tits-alternative",
    statement: "a finitely generated linear group is virtually solvable or contains a free subgroup; \
                a closed subgroup of GL_2(R) is amenable iff it is virtually solvable",
};

pub const PING_PONG: Citation = Citation {
    key: "ping-pong-lemma",
    statement: "two elements moving disjoint domains into each other generate a free group",
};

pub const COMPRESSION_AMENABLE_CLOSURE: Citation = Citation {
    key: "compression-amenable-closure",
    statement: "if the holonomy closure is amenable, cocompact in a closed connected subgroup and the vertex \
                group is exponentially distorted, the equivariant L^p-compression is max(1/p, 1/2)",
};

pub const LP_ACTION_GIVES_HAAGERUP: Citation = Citation {
    key: "lp-proper-action-haagerup",
    statement: "for 1 ≤ p ≤ 2 a proper affine isometric action on L^p yields the Haagerup property, \
                so positive compression forces the Haagerup property",
};

/// Machine-checkable facts behind a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    BassSerreDegrees(BassSerreLocalData),
    /// Killing the vertex groups leaves the free group on the stable letters.
    FreeQuotient {
        rank: usize,
        stable_letters: Vec<String>,
    },
    /// A finite tree of groups is generated by elliptic subgroups; with no
    /// global fixed point on an infinitely-ended tree it contains a free group.
    TreeOfGroups,
    /// Single loop whose inclusion on one side has index 1.
    AscendingLoop {
        edge: String,
        #[serde(serialize_with = "crate::linalg::rational::serialize_bigint")]
        alpha_index: BigInt,
        #[serde(serialize_with = "crate::linalg::rational::serialize_bigint")]
        omega_index: BigInt,
    },
    /// Every edge inclusion is unimodular and every holonomy generator is in GLₙ(ℤ).
    UnimodularIntegral,
    /// The stable letters themselves play ping-pong, so the holonomy is
    /// injective on the free group they generate.
    InjectiveHolonomy(Box<FreePair>),
    NonDiscreteness(WitnessOutcome),
    /// Exact non-discreteness: the closure of this subgroup has a dense
    /// unipotent part.
    DenseUnipotent {
        generators: Vec<String>,
        closure: Box<ClosureDescription>,
    },
    Tits {
        generators: Vec<String>,
        matrices: Vec<QMatrix>,
        decision: TitsDecision,
    },
    Closure {
        generators: Vec<String>,
        description: Box<ClosureDescription>,
    },
    CoarseDensity {
        generators: Vec<String>,
        result: CoarseDensity,
    },
    HausdorffEquivalence(HausdorffEvidence),
    /// Eigenvalue of modulus above 1, witnessing exponential distortion.
    Expanding {
        letter: String,
        eigenvalue: String,
    },
    Note {
        text: String,
    },
}

impl Evidence {
    /// One line for the text report.
    pub fn describe(&self) -> String {
        match self {
            Evidence::BassSerreDegrees(d) => {
                let degs: Vec<String> = d
                    .degrees
                    .iter()
                    .map(|v| format!("{}: {}", v.vertex, v.degree))
                    .collect();
                format!("Bass-Serre tree degrees {}; {}", degs.join(", "), d.ends)
            }
            Evidence::FreeQuotient { rank, stable_letters } => {
                format!("quotient onto the free group F{rank} on {}", stable_letters.join(", "))
            }
            Evidence::TreeOfGroups => "tree of groups: generated by elliptic subgroups".into(),
            Evidence::AscendingLoop {
                edge,
                alpha_index,
                omega_index,
            } => {
                format!("loop {edge} with inclusion indices {alpha_index} and {omega_index}")
            }
            Evidence::UnimodularIntegral => "all inclusions unimodular and holonomy in GLₙ(ℤ)".into(),
            Evidence::InjectiveHolonomy(fp) => format!(
                "stable letters {} and {} play ping-pong (arcs {}, {} and {}, {})",
                fp.g_word, fp.h_word, fp.g_attracting, fp.g_repelling, fp.h_attracting, fp.h_repelling
            ),
            Evidence::NonDiscreteness(w) => format!("holonomy witness: {}", w.describe()),
            Evidence::DenseUnipotent { generators, .. } => {
                format!(
                    "closure of ⟨{}⟩ has dense unipotent part (non-discrete)",
                    generators.join(", ")
                )
            }
            Evidence::Tits {
                generators, decision, ..
            } => match &decision.certificate {
                Some(c) => format!("⟨{}⟩: {}", generators.join(", "), c.describe()),
                None => format!("⟨{}⟩: virtual solvability undetermined", generators.join(", ")),
            },
            Evidence::Closure {
                generators,
                description,
            } => match description.as_ref() {
                ClosureDescription::Triangular {
                    invariant_line,
                    unipotent,
                    ..
                } => format!(
                    "closure of ⟨{}⟩ fixes {invariant_line}; unipotent part {}",
                    generators.join(", "),
                    match &unipotent.kind {
                        crate::matgrp::closure::UnipotentKind::Trivial => "trivial".to_string(),
                        crate::matgrp::closure::UnipotentKind::Dense => "dense".to_string(),
                        crate::matgrp::closure::UnipotentKind::Discrete { generator } => {
                            format!(
                                "discrete, generated by {}",
                                crate::linalg::rational::format_rational(generator)
                            )
                        }
                    }
                ),
                ClosureDescription::NotAvailable { reason } | ClosureDescription::Large { reason } => {
                    format!("closure of ⟨{}⟩: {reason}", generators.join(", "))
                }
            },
            Evidence::CoarseDensity { generators, result } => format!(
                "⟨{}⟩ coarse density: {}{} ({})",
                generators.join(", "),
                result.verdict,
                if result.exact { "" } else { ", sampled" },
                result.evidence.join("; ")
            ),
            Evidence::HausdorffEquivalence(h) => format!(
                "sampled Hausdorff distances {:?} at radii {:?}",
                h.distances
                    .iter()
                    .map(|d| (d * 1000.0).round() / 1000.0)
                    .collect::<Vec<_>>(),
                h.radii
            ),
            Evidence::Expanding { letter, eigenvalue } => {
                format!("hol({letter}) has eigenvalue {eigenvalue} of modulus ≠ 1")
            }
            Evidence::Note { text } => text.clone(),
        }
    }
}

/// The holonomy image as a named generator set (stable letters only; vertex
/// letters map to the identity).
pub(crate) fn holonomy_generators(hd: &HolonomyData) -> Result<GeneratorSet, MatgrpError> {
    let gens: Vec<(String, QMatrix)> = hd.stable.iter().map(|s| (s.letter.clone(), s.matrix.clone())).collect();
    if gens.is_empty() {
        // Trivial image; keep the dimension.
        return GeneratorSet::named(vec![("1".into(), QMatrix::identity(hd.rank))]);
    }
    GeneratorSet::named(gens)
}

/// Combined report for one graph of groups.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub whyte: WhyteReport,
    pub cv: CvReport,
    pub citations: Vec<Citation>,
}

impl ClassificationReport {
    /// `Whyte case: …; Haagerup: …; weakly amenable: …; Λ_cb …`.
    pub fn summary_line(&self) -> String {
        format!(
            "Whyte case: {}; Haagerup: {}; weakly amenable: {}; {}",
            self.whyte.whyte_case, self.cv.haagerup, self.cv.weakly_amenable, self.cv.cowling_haagerup
        )
    }

    /// Whether both halves are decided.
    pub fn is_decided(&self) -> bool {
        self.whyte.whyte_case.is_decided() && self.cv.haagerup.is_decided()
    }
}

pub fn classify(spec: &GoGSpec) -> Result<ClassificationReport, ClassifyError> {
    let graph = GraphOfGroups::new(spec.clone())?;
    let whyte = whyte::classify_graph(&graph)?;
    let cv = cv::properties_of_graph(&graph)?;
    let mut citations = vec![
        WHYTE_CLASSIFICATION,
        AMENABLE_IS_ASCENDING,
        HOLONOMY_AMENABILITY,
        TITS_ALTERNATIVE,
    ];
    if cv.haagerup == Tri::No {
        citations.push(PING_PONG);
    }
    Ok(ClassificationReport { whyte, cv, citations })
}
