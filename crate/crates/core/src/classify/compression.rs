//! Equivariant L^p-compression.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::{
    cv, Citation, ClassifyError, Evidence, COMPRESSION_AMENABLE_CLOSURE, HOLONOMY_AMENABILITY, LP_ACTION_GIVES_HAAGERUP,
};
use crate::gog::{GoGSpec, GraphOfGroups};
use crate::holonomy::HolonomyData;
use crate::linalg::rational::{format_rational, int, rat, Rational};
use crate::linalg::{eigen_directions, EigenDirections, QMatrix};
use crate::matgrp::closure::{UnipotentKind, ValueKind};
use crate::matgrp::{ClosureDescription, TitsCertificate};
use crate::verdict::Tri;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alpha {
    Exact(Rational),
    Undetermined,
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Alpha::Exact(q) => s.serialize_str(&format_rational(q)),
            Alpha::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

/// The three hypotheses of the amenable-closure compression formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressionChecklist {
    pub amenable_closure: bool,
    /// Name of a closed connected group in which the closure is cocompact.
    pub cocompact_in: Option<String>,
    pub exponentially_distorted: bool,
}

impl CompressionChecklist {
    pub fn all(&self) -> bool {
        self.amenable_closure && self.cocompact_in.is_some() && self.exponentially_distorted
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressionReport {
    #[serde(serialize_with = "crate::linalg::rational::serialize")]
    pub p: Rational,
    pub alpha: Alpha,
    pub haagerup: Tri,
    pub checklist: Option<CompressionChecklist>,
    pub reason: String,
    pub citations: Vec<Citation>,
    pub evidence: Vec<Evidence>,
}

fn subscript(p: &Rational) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    if p.is_integer() {
        p.numer()
            .to_string()
            .chars()
            .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
            .collect()
    } else {
        format!("_{{{}}}", format_rational(p))
    }
}

impl fmt::Display for CompressionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alpha {
            Alpha::Exact(a) => write!(f, "α{} = {}", subscript(&self.p), format_rational(a)),
            Alpha::Undetermined => write!(f, "α{} undetermined", subscript(&self.p)),
        }
    }
}

/// Some eigenvalue has modulus other than 1, so conjugating by a power of the
/// letter (or its inverse) expands the vertex group exponentially.
fn expanding_eigenvalue(m: &QMatrix) -> Option<String> {
    let one = int(1);
    if m.dim() == 1 {
        let x = m.get(0, 0);
        return (x.abs() != one).then(|| format_rational(x));
    }
    let ev = match eigen_directions(m).ok()? {
        EigenDirections::Scalar { eigenvalue } => vec![eigenvalue],
        EigenDirections::Directions { eigenvalues, .. } => eigenvalues,
    };
    ev.into_iter()
        .find(|l| {
            if l.is_real() {
                let mag_one = l.cmp_rational(&one) == Ordering::Equal || l.cmp_rational(&-&one) == Ordering::Equal;
                !mag_one
            } else {
                // Complex pair: |λ|² = det.
                !m.det().abs().is_one()
            }
        })
        .map(|l| l.to_string())
}

fn connected_hull(desc: &ClosureDescription) -> Option<String> {
    let ClosureDescription::Triangular { ratio, unipotent, .. } = desc else {
        return None;
    };
    let shape = match (&ratio.kind, &unipotent.kind) {
        (ValueKind::Trivial, _) => "scalars times a one-parameter unipotent group",
        (_, UnipotentKind::Dense) => "the connected upper-triangular group",
        (_, UnipotentKind::Trivial) => "a connected diagonal subgroup",
        (_, UnipotentKind::Discrete { .. }) => return None,
    };
    Some(shape.into())
}

pub fn compression_report(spec: &GoGSpec, p: &Rational) -> Result<CompressionReport, ClassifyError> {
    if *p < int(1) {
        return Err(ClassifyError::BadExponent);
    }
    let g = GraphOfGroups::new(spec.clone())?;
    let cv = cv::properties_of_graph(&g)?;
    let mut report = CompressionReport {
        p: p.clone(),
        alpha: Alpha::Undetermined,
        haagerup: cv.haagerup,
        checklist: None,
        reason: String::new(),
        citations: vec![HOLONOMY_AMENABILITY],
        evidence: Vec::new(),
    };
    match cv.haagerup {
        Tri::No if *p <= int(2) => {
            report.alpha = Alpha::Exact(int(0));
            report.reason = "positive compression for p ≤ 2 would give the Haagerup property, which fails".into();
            report.citations.push(LP_ACTION_GIVES_HAAGERUP);
            report.evidence = cv.evidence;
        }
        Tri::No => report.reason = "Haagerup property fails; compression for p > 2 is not decided".into(),
        Tri::Undetermined => report.reason = "Haagerup property undetermined".into(),
        Tri::Yes => {
            let amenable_closure = cv.evidence.iter().any(|e| {
                matches!(e, Evidence::Tits { decision, .. }
                    if decision.virtually_solvable == Tri::Yes && decision.certificate.is_some())
            });
            let hd = HolonomyData::from_graph(&g);
            let cocompact_in = if hd.rank == 1 {
                Some("the positive reals".to_string())
            } else {
                cv.evidence.iter().find_map(|e| match e {
                    Evidence::Closure { description, .. } => connected_hull(description),
                    Evidence::Tits { decision, .. } if decision.certificate == Some(TitsCertificate::Scalar) => {
                        Some("the scalar matrices".to_string())
                    }
                    _ => None,
                })
            };
            let expanding = hd
                .stable
                .iter()
                .find_map(|s| expanding_eigenvalue(&s.matrix).map(|ev| (s.letter.clone(), ev)));
            let checklist = CompressionChecklist {
                amenable_closure,
                cocompact_in,
                exponentially_distorted: expanding.is_some(),
            };
            report.evidence = cv.evidence;
            if let Some((letter, eigenvalue)) = expanding {
                report.evidence.push(Evidence::Expanding { letter, eigenvalue });
            }
            if checklist.all() {
                let inv = p.recip();
                let half = rat(1, 2);
                report.alpha = Alpha::Exact(if inv > half { inv } else { half });
                report.reason = format!(
                    "amenable holonomy closure, cocompact in {}, with exponentially distorted vertex group",
                    checklist.cocompact_in.as_deref().unwrap_or_default()
                );
                report.citations.push(COMPRESSION_AMENABLE_CLOSURE);
            } else {
                report.reason =
                    "Haagerup property holds but the compression formula's hypotheses are not all certified".into();
            }
            report.checklist = Some(checklist);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{bs12, spec_a, spec_b, unimodular_free};

    fn alpha(spec: &GoGSpec, p: Rational) -> Alpha {
        compression_report(spec, &p).unwrap().alpha
    }

    #[test]
    fn spec_a_values() {
        for (p, a) in [
            (int(1), int(1)),
            (rat(3, 2), rat(2, 3)),
            (int(2), rat(1, 2)),
            (int(3), rat(1, 2)),
            (int(4), rat(1, 2)),
        ] {
            assert_eq!(alpha(&spec_a(), p), Alpha::Exact(a));
        }
        let r = compression_report(&spec_a(), &rat(3, 2)).unwrap();
        assert_eq!(r.to_string(), "α_{3/2} = 2/3");
        assert!(r.checklist.unwrap().all());
    }

    #[test]
    fn spec_b_values() {
        assert_eq!(alpha(&spec_b(), int(1)), Alpha::Exact(int(0)));
        let r = compression_report(&spec_b(), &int(2)).unwrap();
        assert_eq!(r.to_string(), "α₂ = 0");
        assert_eq!(alpha(&spec_b(), int(3)), Alpha::Undetermined);
    }

    #[test]
    fn rank_one_and_discrete_cases() {
        assert_eq!(alpha(&bs12(), int(2)), Alpha::Exact(rat(1, 2)));
        // Free holonomy: Haagerup fails.
        assert_eq!(alpha(&unimodular_free(), int(1)), Alpha::Exact(int(0)));
        assert_eq!(
            compression_report(&bs12(), &rat(1, 2)).unwrap_err(),
            ClassifyError::BadExponent
        );
    }
}
