//! Pairwise quasi-isometry through the subclass and the Hausdorff class of
//! the holonomy.
//!
//! Every rule is symmetric in the two inputs; `qi_compare(a, b)` and
//! `qi_compare(b, a)` give the same verdict.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{holonomy_generators, whyte, ClassifyError, Evidence, WhyteCase, WhyteReport};
use crate::gog::{Ends, GoGSpec, GraphOfGroups};
use crate::holonomy::HolonomyData;
use crate::linalg::{cartan_projection, QMatrix};
use crate::matgrp::{coarse_density, CoarseDensity, DensityVerdict, GeneratorSet};

/// Ball radius and mesh for coarse density sampling.
const DENSITY_RADIUS: u32 = 6;
const DENSITY_MESH: f64 = 0.5;
/// Radii of the sampled Hausdorff comparison.
const HAUSDORFF_RADII: [u32; 3] = [4, 6, 8];
const HAUSDORFF_CAP: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QiVerdict {
    QuasiIsometric,
    NotQuasiIsometric,
    Undetermined,
}

impl fmt::Display for QiVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QiVerdict::QuasiIsometric => "quasi-isometric",
            QiVerdict::NotQuasiIsometric => "not quasi-isometric",
            QiVerdict::Undetermined => "undetermined",
        })
    }
}

/// Hausdorff distances between Cartan gap sets of balls of growing radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HausdorffEvidence {
    pub radii: Vec<u32>,
    pub distances: Vec<f64>,
    pub samples: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiOutcome {
    pub verdict: QiVerdict,
    /// False when the verdict rests on sampling.
    pub exact: bool,
    pub reason: String,
    pub left: WhyteReport,
    pub right: WhyteReport,
    pub evidence: Vec<Evidence>,
}

fn density(g: &GraphOfGroups) -> Result<Option<(Vec<String>, CoarseDensity)>, ClassifyError> {
    let hd = HolonomyData::from_graph(g);
    if hd.rank != 2 {
        return Ok(None);
    }
    let gens = holonomy_generators(&hd)?;
    let d = coarse_density(&gens, DENSITY_RADIUS, DENSITY_MESH)?;
    Ok(Some((gens.names().to_vec(), d)))
}

fn gap_set(gens: &GeneratorSet, radius: u32) -> Vec<f64> {
    let letters: Vec<QMatrix> = gens
        .matrices()
        .iter()
        .flat_map(|m| [m.clone(), m.inverse().expect("invertible")])
        .collect();
    let mut seen: HashSet<QMatrix> = HashSet::new();
    seen.insert(QMatrix::identity(2));
    let mut frontier = vec![QMatrix::identity(2)];
    'outer: for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for l in &letters {
                let x = m * l;
                if seen.insert(x.clone()) {
                    next.push(x);
                    if seen.len() >= HAUSDORFF_CAP {
                        break 'outer;
                    }
                }
            }
        }
        frontier = next;
    }
    let mut gaps: Vec<f64> = seen
        .iter()
        .filter_map(|m| cartan_projection(m).ok().map(|c| c.gap()))
        .collect();
    gaps.sort_by(f64::total_cmp);
    gaps
}

/// Largest distance from a point of `xs` to the sorted set `ys`.
fn one_sided(xs: &[f64], ys: &[f64], limit: f64) -> f64 {
    xs.iter()
        .filter(|&&x| x <= limit)
        .map(|&x| {
            let i = ys.partition_point(|&y| y < x);
            let above = ys.get(i).map_or(f64::INFINITY, |y| y - x);
            let below = if i > 0 { x - ys[i - 1] } else { f64::INFINITY };
            above.min(below)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance of the two gap sets on their common range.
fn hausdorff(xs: &[f64], ys: &[f64]) -> f64 {
    let limit = xs.last().copied().unwrap_or(0.0).min(ys.last().copied().unwrap_or(0.0));
    one_sided(xs, ys, limit).max(one_sided(ys, xs, limit))
}

fn sampled_hausdorff(a: &GraphOfGroups, b: &GraphOfGroups) -> Result<HausdorffEvidence, ClassifyError> {
    let ga = holonomy_generators(&HolonomyData::from_graph(a))?;
    let gb = holonomy_generators(&HolonomyData::from_graph(b))?;
    let mut ev = HausdorffEvidence {
        radii: HAUSDORFF_RADII.to_vec(),
        distances: Vec::new(),
        samples: Vec::new(),
    };
    for r in HAUSDORFF_RADII {
        let (xa, xb) = (gap_set(&ga, r), gap_set(&gb, r));
        ev.distances.push(hausdorff(&xa, &xb));
        ev.samples.push((xa.len(), xb.len()));
    }
    Ok(ev)
}

fn outcome(verdict: QiVerdict, exact: bool, reason: impl Into<String>) -> (QiVerdict, bool, String) {
    (verdict, exact, reason.into())
}

pub fn qi_compare(a: &GoGSpec, b: &GoGSpec) -> Result<QiOutcome, ClassifyError> {
    if a.rank != b.rank {
        return Err(ClassifyError::RankMismatch(a.rank, b.rank));
    }
    let (ga, gb) = (GraphOfGroups::new(a.clone())?, GraphOfGroups::new(b.clone())?);
    let (left, right) = (whyte::classify_graph(&ga)?, whyte::classify_graph(&gb)?);
    let mut evidence = Vec::new();
    use QiVerdict::*;
    let (ca, cb) = (left.whyte_case, right.whyte_case);

    let (verdict, exact, reason) = if a == b {
        outcome(QuasiIsometric, true, "identical graphs of groups")
    } else if left.ends != right.ends {
        outcome(
            NotQuasiIsometric,
            true,
            format!("Bass-Serre trees differ: {} vs {}", left.ends, right.ends),
        )
    } else if left.ends == Ends::Bounded {
        outcome(QuasiIsometric, true, format!("both groups are ℤ^{}", a.rank))
    } else if left.amenable.is_decided() && right.amenable.is_decided() && left.amenable != right.amenable {
        outcome(NotQuasiIsometric, true, "one group is amenable and the other is not")
    } else if ca.is_decided() && cb.is_decided() && ca != cb {
        outcome(
            NotQuasiIsometric,
            true,
            format!("different quasi-isometry subclasses {ca} and {cb}"),
        )
    } else if left.ends == Ends::TwoEnded {
        outcome(
            Undetermined,
            false,
            "two-ended trees: virtually polycyclic groups are not compared",
        )
    } else if ca == WhyteCase::Folded && cb == WhyteCase::Folded {
        let (da, db) = (density(&ga)?, density(&gb)?);
        match (da, db) {
            (Some((na, da)), Some((nb, db))) => {
                let dense = |d: &CoarseDensity| d.exact && d.verdict == DensityVerdict::CoarselyDense;
                let sparse = |d: &CoarseDensity| d.exact && d.verdict == DensityVerdict::NotCoarselyDense;
                let result = if dense(&da) && dense(&db) {
                    outcome(
                        QuasiIsometric,
                        true,
                        "subclass 2c with coarsely dense holonomy on both sides, a single Hausdorff class",
                    )
                } else if (dense(&da) && sparse(&db)) || (sparse(&da) && dense(&db)) {
                    outcome(
                        NotQuasiIsometric,
                        true,
                        "holonomy images lie in different Hausdorff classes",
                    )
                } else {
                    let h = sampled_hausdorff(&ga, &gb)?;
                    let shrinking = h.distances.windows(2).all(|w| w[1] <= w[0]);
                    let r = if shrinking {
                        outcome(
                            QuasiIsometric,
                            false,
                            "sampled: Hausdorff distance of Cartan gap sets does not grow with the radius",
                        )
                    } else {
                        outcome(Undetermined, false, "sampled Hausdorff distances grow with the radius")
                    };
                    evidence.push(Evidence::HausdorffEquivalence(h));
                    r
                };
                evidence.push(Evidence::CoarseDensity {
                    generators: na,
                    result: da,
                });
                evidence.push(Evidence::CoarseDensity {
                    generators: nb,
                    result: db,
                });
                result
            }
            _ => outcome(
                Undetermined,
                false,
                "Hausdorff classes are compared only for 2×2 holonomy",
            ),
        }
    } else if (ca, cb) == (WhyteCase::Ascending, WhyteCase::Ascending) {
        outcome(
            Undetermined,
            false,
            "both in subclass 2b; amenable groups are not compared",
        )
    } else if (ca, cb) == (WhyteCase::ProperFree, WhyteCase::ProperFree) {
        outcome(
            Undetermined,
            false,
            "both in subclass 2a; discrete holonomy classes are not compared",
        )
    } else {
        outcome(Undetermined, false, "subclass undetermined for at least one group")
    };
    debug_assert!(verdict != Undetermined || !exact);
    Ok(QiOutcome {
        verdict,
        exact,
        reason,
        left,
        right,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{ascending2, bs12, spec_a, spec_b, unimodular_free};

    #[test]
    fn spec_a_and_spec_b_are_qi() {
        let r = qi_compare(&spec_a(), &spec_b()).unwrap();
        assert_eq!((r.verdict, r.exact), (QiVerdict::QuasiIsometric, true));
        let s = qi_compare(&spec_b(), &spec_a()).unwrap();
        assert_eq!((s.verdict, s.exact), (r.verdict, r.exact));
    }

    #[test]
    fn amenable_side_separates() {
        let r = qi_compare(&spec_a(), &ascending2()).unwrap();
        assert_eq!(r.verdict, QiVerdict::NotQuasiIsometric);
        let r = qi_compare(&unimodular_free(), &spec_a()).unwrap();
        assert_eq!(r.verdict, QiVerdict::NotQuasiIsometric);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        assert_eq!(qi_compare(&spec_a(), &bs12()), Err(ClassifyError::RankMismatch(2, 1)));
    }

    #[test]
    fn hausdorff_of_sets() {
        assert_eq!(hausdorff(&[0.0, 1.0, 2.0], &[0.0, 2.0]), 1.0);
        assert_eq!(hausdorff(&[0.0, 1.0], &[0.0, 1.0, 5.0]), 0.0);
    }
}
