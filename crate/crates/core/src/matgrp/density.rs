//! Coarse density in SL₂(ℝ): finite Hausdorff distance from the whole group.
//!
//! Everything is projective: generators may have any nonzero determinant and
//! the Cartan gap is scale invariant.

use std::collections::HashSet;

use serde::Serialize;

use super::closure::closure_describe;
use super::tits::{virtually_solvable, TitsCertificate};
use super::{GeneratorSet, MatgrpError};
use crate::linalg::rational::Rational;
use crate::linalg::{cartan_projection, QMatrix};
use crate::verdict::Tri;

/// Subsets of at most this many generators are tried on the exact fast path.
const MAX_SUBSET_GENERATORS: usize = 10;
/// Cap on the sampled ball.
const MAX_SAMPLES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityVerdict {
    CoarselyDense,
    NotCoarselyDense,
    Undetermined,
}

impl std::fmt::Display for DensityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityVerdict::CoarselyDense => "coarsely dense",
            DensityVerdict::NotCoarselyDense => "not coarsely dense",
            DensityVerdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshCoverage {
    pub radius: u32,
    pub mesh: f64,
    /// Upper end `c·R` of the covered interval.
    pub extent: f64,
    pub cells: usize,
    pub covered: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoarseDensity {
    pub verdict: DensityVerdict,
    /// The verdict rests on an exact argument rather than sampling.
    pub exact: bool,
    pub evidence: Vec<String>,
    pub coverage: Option<MeshCoverage>,
}

impl CoarseDensity {
    fn exact(verdict: DensityVerdict, evidence: String) -> Self {
        CoarseDensity {
            verdict,
            exact: true,
            evidence: vec![evidence],
            coverage: None,
        }
    }
}

/// `m / s` with `s² = |det m|`, when that square root is rational.
fn normalize_unimodular(m: &QMatrix) -> Option<QMatrix> {
    use num_traits::Signed;
    let d = m.det().abs();
    let (n, q) = (d.numer().sqrt(), d.denom().sqrt());
    if &(&n * &n) != d.numer() || &(&q * &q) != d.denom() {
        return None;
    }
    Some(m.scale(&Rational::new(q, n)))
}

fn all_projectively_integral(gens: &GeneratorSet) -> bool {
    gens.matrices()
        .iter()
        .all(|m| normalize_unimodular(m).is_some_and(|u| u.is_integral_unimodular()))
}

fn fast_path(gens: &GeneratorSet) -> Result<Option<String>, MatgrpError> {
    let n = gens.len().min(MAX_SUBSET_GENERATORS);
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub = gens.subset(&idx);
        if closure_describe(&sub)?.is_cocompact_in_borel() {
            return Ok(Some(format!(
                "⟨{}⟩ fixes a line with nontrivial diagonal ratios and dense unipotent closure, \
                 so its closure is cocompact in a Borel subgroup, which is cocompact in SL₂(ℝ)",
                sub.names().join(", ")
            )));
        }
    }
    Ok(None)
}

fn sample_coverage(gens: &GeneratorSet, radius: u32, mesh: f64) -> Result<MeshCoverage, MatgrpError> {
    let gap = |m: &QMatrix| cartan_projection(m).map(|c| c.gap()).unwrap_or(0.0);
    let c = gens.matrices().iter().map(gap).fold(0.0, f64::max) / 2.0;
    let extent = c * radius as f64;
    let cells = ((extent / mesh).ceil() as usize).max(1);
    let mut hit = vec![false; cells];
    let mut seen: HashSet<QMatrix> = HashSet::new();
    let mut frontier = vec![QMatrix::identity(2)];
    seen.insert(QMatrix::identity(2));
    let letters: Vec<QMatrix> = gens
        .matrices()
        .iter()
        .flat_map(|m| [m.clone(), m.inverse().expect("invertible")])
        .collect();
    let mut mark = |m: &QMatrix| {
        let g = gap(m);
        if g <= extent {
            hit[((g / mesh) as usize).min(cells - 1)] = true;
        }
    };
    mark(&QMatrix::identity(2));
    'outer: for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for l in &letters {
                let x = m * l;
                if seen.insert(x.clone()) {
                    mark(&x);
                    next.push(x);
                    if seen.len() >= MAX_SAMPLES {
                        break 'outer;
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(MeshCoverage {
        radius,
        mesh,
        extent,
        cells,
        covered: hit.iter().filter(|&&h| h).count(),
        samples: seen.len(),
    })
}

pub fn coarse_density(gens: &GeneratorSet, radius: u32, mesh: f64) -> Result<CoarseDensity, MatgrpError> {
    if gens.dim() != 2 {
        return Err(MatgrpError::UnsupportedDimension(gens.dim()));
    }
    if let Some(reason) = fast_path(gens)? {
        return Ok(CoarseDensity::exact(DensityVerdict::CoarselyDense, reason));
    }
    let tits = virtually_solvable(gens)?;
    if tits.virtually_solvable == Tri::Yes {
        let shape = match tits.certificate {
            Some(TitsCertificate::InvariantLine { .. }) => {
                "fixes a line but its closure is not cocompact in the Borel subgroup"
            }
            Some(TitsCertificate::InvariantPair { .. }) => {
                "preserves a pair of points, so it stays near a torus or a compact subgroup"
            }
            _ => "is scalar, so its image is bounded",
        };
        return Ok(CoarseDensity::exact(
            DensityVerdict::NotCoarselyDense,
            format!("the group is virtually solvable and {shape}"),
        ));
    }
    if all_projectively_integral(gens) {
        return Ok(CoarseDensity::exact(
            DensityVerdict::NotCoarselyDense,
            "every generator is a scalar multiple of a matrix in GL₂(ℤ); \
             a discrete group is coarsely dense only if it is a uniform lattice, which no subgroup of GL₂(ℤ) is"
                .into(),
        ));
    }
    if tits.virtually_solvable == Tri::Undetermined {
        return Ok(CoarseDensity {
            verdict: DensityVerdict::Undetermined,
            exact: false,
            evidence: vec!["virtual solvability undetermined".into()],
            coverage: None,
        });
    }
    let coverage = sample_coverage(gens, radius, mesh)?;
    let full = coverage.covered == coverage.cells && coverage.extent > 0.0;
    let evidence = vec![
        "contains a free subgroup certified by ping-pong".into(),
        format!(
            "Cartan gaps of the radius-{} ball ({} elements) hit {}/{} cells of width {} in [0, {:.3}]",
            coverage.radius, coverage.samples, coverage.covered, coverage.cells, coverage.mesh, coverage.extent
        ),
    ];
    Ok(CoarseDensity {
        verdict: if full {
            DensityVerdict::CoarselyDense
        } else {
            DensityVerdict::Undetermined
        },
        exact: false,
        evidence,
        coverage: Some(coverage),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }
    fn p() -> QMatrix {
        QMatrix::from_ints(&[&[1, 1], &[0, 1]])
    }
    fn e() -> QMatrix {
        QMatrix::from_ints(&[&[0, 1], &[-1, 0]])
    }
    fn run(ms: Vec<QMatrix>) -> CoarseDensity {
        coarse_density(&GeneratorSet::from_matrices(ms).unwrap(), 6, 0.5).unwrap()
    }

    #[test]
    fn exact_verdicts() {
        let hp = run(vec![h(), p()]);
        assert_eq!((hp.verdict, hp.exact), (DensityVerdict::CoarselyDense, true));
        let hpe = run(vec![h(), p(), e()]);
        assert_eq!((hpe.verdict, hpe.exact), (DensityVerdict::CoarselyDense, true));
        let id = run(vec![QMatrix::identity(2)]);
        assert_eq!((id.verdict, id.exact), (DensityVerdict::NotCoarselyDense, true));
        let only_h = run(vec![h()]);
        assert_eq!(only_h.verdict, DensityVerdict::NotCoarselyDense);
        let sl2z = run(vec![p(), e()]);
        assert_eq!((sl2z.verdict, sl2z.exact), (DensityVerdict::NotCoarselyDense, true));
    }

    #[test]
    fn scaling_is_ignored() {
        let scaled_h = h().scale(&Rational::from_integer(3.into()));
        let r = run(vec![scaled_h, p().scale(&Rational::new(1.into(), 5.into()))]);
        assert_eq!(r.verdict, DensityVerdict::CoarselyDense);
        let sl2z = run(vec![p().scale(&Rational::from_integer(2.into())), e()]);
        assert_eq!(sl2z.verdict, DensityVerdict::NotCoarselyDense);
    }

    #[test]
    fn sampled_path_is_labelled() {
        // Non-integral, free, and no generator subset is cocompact in a Borel.
        let a = QMatrix::from_fractions_2x2([[(5, 3), (4, 3)], [(4, 3), (5, 3)]]);
        let u = QMatrix::from_ints(&[&[1, 0], &[1, 1]]);
        let r = run(vec![a, u]);
        assert!(!r.exact);
        assert!(r.coverage.is_some() || r.verdict == DensityVerdict::Undetermined);
    }
}
