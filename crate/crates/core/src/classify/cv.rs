//! Haagerup property and weak amenability through the holonomy closure.
//!
//! Both properties hold exactly when the closure of the holonomy image is
//! amenable; in GL₂(ℝ) that is virtual solvability, decided by [`virtually_solvable`].

use std::fmt;

use serde::{Serialize, Serializer};

use super::{holonomy_generators, ClassifyError, Evidence};
use crate::gog::{GoGSpec, GraphOfGroups};
use crate::holonomy::HolonomyData;
use crate::matgrp::{closure_describe, virtually_solvable, TitsCertificate, TitsDecision};
use crate::verdict::Tri;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CowlingHaagerup {
    One,
    /// Not weakly amenable.
    Infinite,
    Undetermined,
}

impl fmt::Display for CowlingHaagerup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CowlingHaagerup::One => "Λ_cb = 1",
            CowlingHaagerup::Infinite => "Λ_cb = ∞",
            CowlingHaagerup::Undetermined => "Λ_cb undetermined",
        })
    }
}

impl Serialize for CowlingHaagerup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CowlingHaagerup::One => s.serialize_str("1"),
            CowlingHaagerup::Infinite => s.serialize_str("infinity"),
            CowlingHaagerup::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvReport {
    /// Amenability of the closure of the holonomy image.
    pub closure_amenable: Tri,
    pub haagerup: Tri,
    pub weakly_amenable: Tri,
    pub cowling_haagerup: CowlingHaagerup,
    pub reason: String,
    pub evidence: Vec<Evidence>,
}

impl CvReport {
    fn from_amenability(closure_amenable: Tri, reason: String, evidence: Vec<Evidence>) -> Self {
        let cowling_haagerup = match closure_amenable {
            Tri::Yes => CowlingHaagerup::One,
            Tri::No => CowlingHaagerup::Infinite,
            Tri::Undetermined => CowlingHaagerup::Undetermined,
        };
        CvReport {
            closure_amenable,
            haagerup: closure_amenable,
            weakly_amenable: closure_amenable,
            cowling_haagerup,
            reason,
            evidence,
        }
    }
}

pub(crate) fn properties_of_graph(g: &GraphOfGroups) -> Result<CvReport, ClassifyError> {
    let hd = HolonomyData::from_graph(g);
    let gens = holonomy_generators(&hd)?;
    let names = gens.names().to_vec();
    let matrices = gens.matrices().to_vec();
    match hd.rank {
        1 => {
            let decision = TitsDecision {
                virtually_solvable: Tri::Yes,
                certificate: Some(TitsCertificate::Scalar),
            };
            let evidence = vec![Evidence::Tits {
                generators: names,
                matrices,
                decision,
            }];
            return Ok(CvReport::from_amenability(
                Tri::Yes,
                "the holonomy lies in the abelian group ℚ^×".into(),
                evidence,
            ));
        }
        2 => {}
        n => {
            return Ok(CvReport::from_amenability(
                Tri::Undetermined,
                format!("closure amenability is decided only for 2×2 holonomy (Tits module limited to n=2, got n={n})"),
                Vec::new(),
            ))
        }
    }
    let decision = virtually_solvable(&gens)?;
    let reason = match &decision.certificate {
        Some(c @ TitsCertificate::FreePair(_)) => {
            format!(
                "{}; the closure contains a free group and is not amenable",
                c.describe()
            )
        }
        Some(c) => format!("{}; the closure is virtually solvable, hence amenable", c.describe()),
        None => "neither an invariant line or pair nor a ping-pong pair was found".into(),
    };
    let amenable = decision.virtually_solvable;
    let mut evidence = vec![Evidence::Tits {
        generators: names.clone(),
        matrices,
        decision,
    }];
    if amenable == Tri::Yes {
        evidence.push(Evidence::Closure {
            generators: names,
            description: Box::new(closure_describe(&gens)?),
        });
    }
    Ok(CvReport::from_amenability(amenable, reason, evidence))
}

pub fn cv_properties(spec: &GoGSpec) -> Result<CvReport, ClassifyError> {
    properties_of_graph(&GraphOfGroups::new(spec.clone())?)
}
