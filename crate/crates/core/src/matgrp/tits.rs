//! Virtual solvability of subgroups of GL₂(ℚ) with checkable certificates.
//!
//! A virtually solvable subgroup of PGL₂ fixes a point or preserves a pair of
//! points of the projective line over ℚ(√d), and such a point is fixed by
//! every non-scalar element of a finite-index subgroup. Candidates therefore
//! come from eigendirections of short words. The other side of the Tits
//! alternative is certified by ping-pong.

use std::collections::HashSet;

use serde::Serialize;

use super::pingpong::{pingpong_certify, FreePair};
use super::{GeneratorSet, MatgrpError};
use crate::linalg::{eigen_directions, ProjPoint, QMatrix};
use crate::verdict::Tri;

/// Longest pivot word searched for eigendirection candidates.
pub const PIVOT_WORD_LENGTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TitsCertificate {
    /// Every generator is scalar (or the group is 1×1, hence abelian).
    Scalar,
    InvariantLine {
        point: ProjPoint,
    },
    /// Every generator permutes the two points.
    InvariantPair {
        points: [ProjPoint; 2],
    },
    FreePair(Box<FreePair>),
}

impl TitsCertificate {
    /// Re-checks the certificate against every generator.
    pub fn verify(&self, gens: &GeneratorSet) -> Result<(), String> {
        match self {
            TitsCertificate::Scalar => {
                if gens.dim() == 1 || gens.matrices().iter().all(QMatrix::is_scalar) {
                    Ok(())
                } else {
                    Err("a generator is not scalar".into())
                }
            }
            TitsCertificate::InvariantLine { point } => {
                match gens
                    .names()
                    .iter()
                    .zip(gens.matrices())
                    .find(|(_, m)| !point.is_fixed_by(m))
                {
                    Some((name, _)) => Err(format!("{name} moves {point}")),
                    None => Ok(()),
                }
            }
            TitsCertificate::InvariantPair { points } => {
                if points[0] == points[1] {
                    return Err("the pair has a repeated point".into());
                }
                for (name, m) in gens.names().iter().zip(gens.matrices()) {
                    if !preserves_pair(m, points) {
                        return Err(format!("{name} does not permute {{{}, {}}}", points[0], points[1]));
                    }
                }
                Ok(())
            }
            TitsCertificate::FreePair(fp) => fp.verify(Some(gens)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TitsCertificate::Scalar => "all generators are scalar".into(),
            TitsCertificate::InvariantLine { point } => format!("every generator fixes the line {point}"),
            TitsCertificate::InvariantPair { points } => {
                format!("every generator permutes {{{}, {}}}", points[0], points[1])
            }
            TitsCertificate::FreePair(fp) => {
                format!(
                    "{} and {} play ping-pong, so they generate a free group",
                    fp.g_word, fp.h_word
                )
            }
        }
    }
}

fn preserves_pair(m: &QMatrix, points: &[ProjPoint; 2]) -> bool {
    let (a, b) = (points[0].apply(m), points[1].apply(m));
    (a == points[0] && b == points[1]) || (a == points[1] && b == points[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TitsDecision {
    pub virtually_solvable: Tri,
    /// Present exactly when the answer is decided.
    pub certificate: Option<TitsCertificate>,
}

impl TitsDecision {
    fn decided(yes: bool, certificate: TitsCertificate) -> Self {
        TitsDecision {
            virtually_solvable: Tri::from_bool(yes),
            certificate: Some(certificate),
        }
    }
}

/// Invariant line or pair among eigendirections of non-scalar short words.
fn solvable_certificate(gens: &GeneratorSet) -> Option<TitsCertificate> {
    let mut pivots: Vec<QMatrix> = gens.matrices().to_vec();
    pivots.extend(gens.short_words(PIVOT_WORD_LENGTH).into_iter().map(|(_, m)| m));
    let mut tried: HashSet<Vec<ProjPoint>> = HashSet::new();
    for m in pivots.iter().filter(|m| !m.is_scalar()) {
        let Ok(dirs) = eigen_directions(m) else { continue };
        let points = dirs.points().to_vec();
        if !tried.insert(points.clone()) {
            continue;
        }
        for p in points.iter().filter(|p| p.is_rational()) {
            let cert = TitsCertificate::InvariantLine { point: p.clone() };
            if cert.verify(gens).is_ok() {
                return Some(cert);
            }
        }
        if let [p, q] = points.as_slice() {
            let cert = TitsCertificate::InvariantPair {
                points: [p.clone(), q.clone()],
            };
            if cert.verify(gens).is_ok() {
                return Some(cert);
            }
        }
    }
    None
}

pub fn virtually_solvable(gens: &GeneratorSet) -> Result<TitsDecision, MatgrpError> {
    match gens.dim() {
        1 => return Ok(TitsDecision::decided(true, TitsCertificate::Scalar)),
        2 => {}
        n => return Err(MatgrpError::UnsupportedDimension(n)),
    }
    if gens.matrices().iter().all(QMatrix::is_scalar) {
        return Ok(TitsDecision::decided(true, TitsCertificate::Scalar));
    }
    if let Some(cert) = solvable_certificate(gens) {
        return Ok(TitsDecision::decided(true, cert));
    }
    if let Some(fp) = pingpong_certify(gens) {
        return Ok(TitsDecision::decided(false, TitsCertificate::FreePair(Box::new(fp))));
    }
    Ok(TitsDecision {
        virtually_solvable: Tri::Undetermined,
        certificate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::quadratic::QuadraticNumber;
    use crate::linalg::rational::{int, rat};
    use proptest::prelude::*;

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }
    fn p() -> QMatrix {
        QMatrix::from_ints(&[&[1, 1], &[0, 1]])
    }
    fn e() -> QMatrix {
        QMatrix::from_ints(&[&[0, 1], &[-1, 0]])
    }
    fn set(ms: Vec<QMatrix>) -> GeneratorSet {
        GeneratorSet::from_matrices(ms).unwrap()
    }

    #[test]
    fn triangular_group_fixes_first_axis() {
        let gens = set(vec![h(), p()]);
        let d = virtually_solvable(&gens).unwrap();
        assert_eq!(d.virtually_solvable, Tri::Yes);
        let cert = d.certificate.unwrap();
        assert_eq!(
            cert,
            TitsCertificate::InvariantLine {
                point: ProjPoint::from_slope(QuadraticNumber::zero())
            }
        );
        if let TitsCertificate::InvariantLine { point } = &cert {
            assert_eq!(point.to_string(), "(1:0)");
        }
        cert.verify(&gens).unwrap();
    }

    #[test]
    fn rotation_preserves_conjugate_pair() {
        let gens = set(vec![e()]);
        assert!(e().pow(4).unwrap().is_identity());
        let d = virtually_solvable(&gens).unwrap();
        assert_eq!(d.virtually_solvable, Tri::Yes);
        let i = QuadraticNumber::sqrt_of(&int(-1));
        let expected = [ProjPoint::from_slope(i.clone()), ProjPoint::from_slope(-&i)];
        match d.certificate.unwrap() {
            TitsCertificate::InvariantPair { points } => {
                let mut got = points.to_vec();
                got.sort();
                let mut want = expected.to_vec();
                want.sort();
                assert_eq!(got, want);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn dihedral_group_needs_a_product_pivot() {
        // Two reflections whose product has order 4.
        let r1 = QMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        let r2 = QMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let gens = set(vec![r1, r2]);
        let d = virtually_solvable(&gens).unwrap();
        assert_eq!(d.virtually_solvable, Tri::Yes);
        d.certificate.unwrap().verify(&gens).unwrap();
    }

    #[test]
    fn hpe_contains_a_free_group() {
        let gens = set(vec![h(), p(), e()]);
        let d = virtually_solvable(&gens).unwrap();
        assert_eq!(d.virtually_solvable, Tri::No);
        let cert = d.certificate.unwrap();
        cert.verify(&gens).unwrap();
        let TitsCertificate::FreePair(fp) = cert else { panic!() };
        assert!(fp.honesty_check());
    }

    #[test]
    fn scalar_and_dimension_cases() {
        let s = set(vec![QMatrix::scalar(2, rat(3, 2)), QMatrix::identity(2)]);
        assert_eq!(
            virtually_solvable(&s).unwrap().certificate,
            Some(TitsCertificate::Scalar)
        );
        let one = set(vec![QMatrix::from_ints(&[&[2]])]);
        assert_eq!(virtually_solvable(&one).unwrap().virtually_solvable, Tri::Yes);
        let three = set(vec![QMatrix::identity(3)]);
        assert_eq!(virtually_solvable(&three), Err(MatgrpError::UnsupportedDimension(3)));
        let empty = GeneratorSet::from_matrices(Vec::new()).unwrap();
        assert_eq!(virtually_solvable(&empty).unwrap().virtually_solvable, Tri::Yes);
    }

    #[test]
    fn forged_certificates_fail() {
        let gens = set(vec![h(), p(), e()]);
        let line = TitsCertificate::InvariantLine {
            point: ProjPoint::from_slope(QuadraticNumber::zero()),
        };
        assert!(line.verify(&gens).is_err());
        assert!(TitsCertificate::Scalar.verify(&gens).is_err());
    }

    fn conj_matrix() -> impl Strategy<Value = QMatrix> {
        (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3, 1i64..=3)
            .prop_filter("invertible", |(a, b, c, d, q)| a * d != b * c * q)
            .prop_map(|(a, b, c, d, q)| QMatrix::from_fractions_2x2([[(a, q), (b, 1)], [(c, 1), (d, 1)]]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]
        #[test]
        fn conjugation_invariance(g in conj_matrix(), which in 0usize..4) {
            let groups = [vec![h(), p()], vec![e()], vec![h(), p(), e()], vec![p(), h().pow(2).unwrap()]];
            let base = &groups[which];
            let gi = g.inverse().unwrap();
            let conj: Vec<QMatrix> = base.iter().map(|m| &(&g * m) * &gi).collect();
            let d0 = virtually_solvable(&set(base.clone())).unwrap();
            let d1 = virtually_solvable(&set(conj.clone())).unwrap();
            prop_assert_eq!(d0.virtually_solvable, d1.virtually_solvable);
            prop_assert!(d1.virtually_solvable.is_decided());
            let gens = set(conj);
            d1.certificate.as_ref().unwrap().verify(&gens).unwrap();
            // Exclusivity: a solvable verdict admits no free pair.
            if d1.virtually_solvable == Tri::Yes {
                prop_assert!(pingpong_certify(&gens).is_none());
            }
        }
    }
}
