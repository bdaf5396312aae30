//! Shape of the closure of a triangularizable subgroup of GL₂(ℚ).
//!
//! After conjugating the invariant line to the first axis every generator is
//! `[[α, β], [0, δ]]`. The closure is described by two multiplicative value
//! groups (`|α|` and `|α/δ|`) and the closure of the unipotent part, an
//! additive subgroup of ℚ that is either cyclic or dense.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::tits::{virtually_solvable, TitsCertificate};
use super::{GeneratorSet, MatgrpError};
use crate::linalg::rational::{format_rational, Rational};
use crate::linalg::{ProjPoint, QMatrix};
use crate::verdict::Tri;

/// Conjugation depth for the unipotent density test.
pub const UNIPOTENT_WINDOW: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueKind {
    Trivial,
    DiscreteCyclic {
        #[serde(serialize_with = "crate::linalg::rational::serialize")]
        generator: Rational,
    },
    Dense,
}

/// Finitely generated subgroup of the positive rationals under multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueGroup {
    #[serde(serialize_with = "serialize_rationals")]
    pub generators: Vec<Rational>,
    /// Free rank; the group is cyclic iff the rank is at most 1.
    pub rank: usize,
    pub kind: ValueKind,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// Pairwise coprime integers `> 1` over which every input factors.
fn coprime_basis(inputs: &[BigInt]) -> Vec<BigInt> {
    let mut basis: Vec<BigInt> = inputs.iter().filter(|n| **n > BigInt::one()).cloned().collect();
    loop {
        basis.sort();
        basis.dedup();
        let split = (0..basis.len()).find_map(|i| {
            (i + 1..basis.len()).find_map(|j| {
                let g = basis[i].gcd(&basis[j]);
                (!g.is_one()).then_some((i, j, g))
            })
        });
        let Some((i, j, g)) = split else { return basis };
        let (a, b) = (&basis[i] / &g, &basis[j] / &g);
        basis.swap_remove(j);
        basis.swap_remove(i);
        basis.extend([a, b, g].into_iter().filter(|x| *x > BigInt::one()));
    }
}

fn valuation(n: &BigInt, b: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % b).is_zero() {
        n /= b;
        v += 1;
    }
    v
}

/// Exponent vectors of positive rationals over a coprime basis of their
/// numerators and denominators.
fn exponent_vectors(qs: &[Rational]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let parts: Vec<BigInt> = qs.iter().flat_map(|q| [q.numer().clone(), q.denom().clone()]).collect();
    let basis = coprime_basis(&parts);
    let vecs = qs
        .iter()
        .map(|q| {
            basis
                .iter()
                .map(|b| BigInt::from(valuation(q.numer(), b) - valuation(q.denom(), b)))
                .collect()
        })
        .collect();
    (basis, vecs)
}

fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

impl ValueGroup {
    pub fn generated_by(values: &[Rational]) -> Self {
        let mut generators: Vec<Rational> = values.iter().map(Signed::abs).filter(|q| !q.is_one()).collect();
        generators.sort();
        generators.dedup();
        let (basis, vecs) = exponent_vectors(&generators);
        let r = rank(&vecs);
        let kind = match r {
            0 => ValueKind::Trivial,
            1 => {
                // All vectors are integer multiples of one primitive vector.
                let v0 = vecs.iter().find(|v| v.iter().any(|x| !x.is_zero())).expect("rank 1");
                let content = v0.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                let u: Vec<BigInt> = v0.iter().map(|x| x / &content).collect();
                let k = u.iter().position(|x| !x.is_zero()).expect("nonzero");
                let coeff = vecs.iter().fold(BigInt::zero(), |g, v| g.gcd(&(&v[k] / &u[k])));
                let mut gen = Rational::one();
                for (b, e) in basis.iter().zip(&u) {
                    let e = e * &coeff;
                    let p = Rational::from_integer(b.pow(e.magnitude().try_into().expect("small exponent")));
                    gen = if e.is_negative() { gen / p } else { gen * p };
                }
                if gen < Rational::one() {
                    gen = gen.recip();
                }
                ValueKind::DiscreteCyclic { generator: gen }
            }
            _ => ValueKind::Dense,
        };
        ValueGroup {
            generators,
            rank: r,
            kind,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnipotentKind {
    Trivial,
    Discrete {
        #[serde(serialize_with = "crate::linalg::rational::serialize")]
        generator: Rational,
    },
    Dense,
}

/// Closure of the unipotent part, from the additive group generated by
/// conjugates of translation values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnipotentClosure {
    pub kind: UnipotentKind,
    /// Number of ratio factors allowed in a conjugating multiplier.
    pub window: usize,
    /// Translation values of the normal generators of the unipotent part.
    #[serde(serialize_with = "serialize_rationals")]
    pub base_values: Vec<Rational>,
    /// Generator of the group spanned at each window level `0..=window`.
    #[serde(serialize_with = "serialize_rationals")]
    pub gcd_by_level: Vec<Rational>,
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

/// Basis of the integer kernel of `x ↦ Σ xᵢ·rowsᵢ` (rows are the vectors).
fn integer_kernel(vecs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = vecs.len();
    let dim = vecs.first().map_or(0, Vec::len);
    // Columns of `m` are the vectors; `u` tracks the unimodular column operations.
    let mut m: Vec<Vec<BigInt>> = (0..k).map(|j| vecs[j].clone()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|j| (0..k).map(|i| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut pivot = 0;
    for row in 0..dim {
        loop {
            let nz: Vec<usize> = (pivot..k).filter(|&j| !m[j][row].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    m.swap(pivot, j);
                    u.swap(pivot, j);
                    pivot += 1;
                }
                break;
            }
            let p = *nz
                .iter()
                .min_by_key(|&&j| m[j][row].magnitude().clone())
                .expect("nonempty");
            for &j in nz.iter().filter(|&&j| j != p) {
                let q = m[j][row].div_floor(&m[p][row]);
                for r in 0..dim {
                    let d = &q * &m[p][r];
                    m[j][r] -= d;
                }
                for r in 0..k {
                    let d = &q * &u[p][r];
                    u[j][r] -= d;
                }
            }
        }
    }
    u.split_off(pivot)
}

/// `β/α` for a projectively unipotent triangular matrix.
fn translation_value(m: &QMatrix) -> Option<Rational> {
    let (a, b, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
    (a == d).then(|| b / a)
}

fn eval_exponents(mats: &[QMatrix], invs: &[QMatrix], exps: &[BigInt]) -> QMatrix {
    let mut acc = QMatrix::identity(2);
    for (i, e) in exps.iter().enumerate() {
        let base = if e.is_negative() { &invs[i] } else { &mats[i] };
        let n: u64 = e.magnitude().try_into().expect("small exponent");
        for _ in 0..n {
            acc = &acc * base;
        }
    }
    acc
}

fn unipotent_closure(tri: &[QMatrix], ratios: &[Rational]) -> UnipotentClosure {
    let invs: Vec<QMatrix> = tri.iter().map(|m| m.inverse().expect("invertible")).collect();
    let mut base: BTreeSet<Rational> = BTreeSet::new();
    let mut add = |m: &QMatrix| {
        if let Some(v) = translation_value(m) {
            if !v.is_zero() {
                base.insert(v.abs());
            }
        }
    };
    // Normal generators: commutators of generators and lifts of the relations
    // among the ratios.
    for i in 0..tri.len() {
        for j in i + 1..tri.len() {
            add(&(&(&tri[i] * &tri[j]) * &(&invs[i] * &invs[j])));
        }
    }
    let (_, vecs) = exponent_vectors(ratios);
    for rel in integer_kernel(&vecs) {
        add(&eval_exponents(tri, &invs, &rel));
    }
    let base_values: Vec<Rational> = base.into_iter().collect();

    let factors: Vec<Rational> = ratios
        .iter()
        .filter(|r| !r.is_one())
        .flat_map(|r| [r.clone(), r.recip()])
        .collect();
    let mut multipliers: BTreeSet<Rational> = BTreeSet::from([Rational::one()]);
    let mut gcd_by_level = Vec::with_capacity(UNIPOTENT_WINDOW + 1);
    for level in 0..=UNIPOTENT_WINDOW {
        if level > 0 {
            let next: BTreeSet<Rational> = multipliers
                .iter()
                .flat_map(|m| factors.iter().map(move |f| m * f))
                .collect();
            multipliers.extend(next);
        }
        let g = base_values
            .iter()
            .flat_map(|v| multipliers.iter().map(move |m| v * m))
            .fold(
                Rational::zero(),
                |g, x| if g.is_zero() { x } else { rational_gcd(&g, &x) },
            );
        gcd_by_level.push(g);
    }
    let last = &gcd_by_level[UNIPOTENT_WINDOW];
    let kind = if base_values.is_empty() {
        UnipotentKind::Trivial
    } else if *last < gcd_by_level[UNIPOTENT_WINDOW - 1] {
        UnipotentKind::Dense
    } else {
        UnipotentKind::Discrete {
            generator: last.clone(),
        }
    };
    UnipotentClosure {
        kind,
        window: UNIPOTENT_WINDOW,
        base_values,
        gcd_by_level,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureDescription {
    Triangular {
        invariant_line: ProjPoint,
        /// `C` with `C⁻¹·g·C` upper triangular for every generator `g`.
        conjugator: QMatrix,
        triangular: Vec<QMatrix>,
        /// Generated by the `|α|` entries.
        diagonal: ValueGroup,
        /// Generated by `|α/δ|`; this is what survives projectively.
        ratio: ValueGroup,
        unipotent: UnipotentClosure,
    },
    /// Virtually solvable but without a rational invariant line, or undecided.
    NotAvailable { reason: String },
    /// Contains a free subgroup; see the coarse density test.
    Large { reason: String },
}

impl ClosureDescription {
    /// Closure contains a cocompact subgroup of the full upper-triangular group.
    pub fn is_cocompact_in_borel(&self) -> bool {
        matches!(
            self,
            ClosureDescription::Triangular { ratio, unipotent, .. }
                if !ratio.is_trivial() && unipotent.kind == UnipotentKind::Dense
        )
    }
}

fn conjugator_for(p: &ProjPoint) -> QMatrix {
    match p.slope() {
        None => QMatrix::from_ints(&[&[0, 1], &[1, 0]]),
        Some(s) => {
            let s = s.as_rational().expect("rational invariant line").clone();
            QMatrix::from_rows(vec![vec![Rational::one(), Rational::zero()], vec![s, Rational::one()]]).expect("square")
        }
    }
}

pub fn closure_describe(gens: &GeneratorSet) -> Result<ClosureDescription, MatgrpError> {
    if gens.dim() != 2 {
        return Err(MatgrpError::UnsupportedDimension(gens.dim()));
    }
    let decision = virtually_solvable(gens)?;
    let point = match (&decision.virtually_solvable, &decision.certificate) {
        (_, Some(TitsCertificate::InvariantLine { point })) => point.clone(),
        (_, Some(TitsCertificate::Scalar)) => ProjPoint::from_slope(crate::linalg::QuadraticNumber::zero()),
        (_, Some(TitsCertificate::InvariantPair { points })) => {
            return Ok(ClosureDescription::NotAvailable {
                reason: format!(
                    "virtually solvable, preserving the pair {{{}, {}}} but no rational line",
                    points[0], points[1]
                ),
            })
        }
        (Tri::No, _) => {
            return Ok(ClosureDescription::Large {
                reason: "contains a free subgroup: full or large, see coarse density".into(),
            })
        }
        _ => {
            return Ok(ClosureDescription::NotAvailable {
                reason: "virtual solvability undetermined within search bounds".into(),
            })
        }
    };
    let c = conjugator_for(&point);
    let ci = c.inverse().expect("invertible");
    let triangular: Vec<QMatrix> = gens.matrices().iter().map(|g| &(&ci * g) * &c).collect();
    debug_assert!(triangular.iter().all(|t| t.get(1, 0).is_zero()));
    let alphas: Vec<Rational> = triangular.iter().map(|t| t.get(0, 0).clone()).collect();
    let ratios: Vec<Rational> = triangular.iter().map(|t| (t.get(0, 0) / t.get(1, 1)).abs()).collect();
    let unipotent = unipotent_closure(&triangular, &ratios);
    Ok(ClosureDescription::Triangular {
        invariant_line: point,
        conjugator: c,
        diagonal: ValueGroup::generated_by(&alphas),
        ratio: ValueGroup::generated_by(&ratios),
        triangular,
        unipotent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }
    fn p() -> QMatrix {
        QMatrix::from_ints(&[&[1, 1], &[0, 1]])
    }
    fn describe(ms: Vec<QMatrix>) -> ClosureDescription {
        closure_describe(&GeneratorSet::from_matrices(ms).unwrap()).unwrap()
    }

    #[test]
    fn triangular_hp() {
        let ClosureDescription::Triangular {
            diagonal,
            ratio,
            unipotent,
            conjugator,
            ..
        } = describe(vec![h(), p()])
        else {
            panic!("expected a triangular description");
        };
        assert!(conjugator.is_identity());
        assert_eq!(diagonal.kind, ValueKind::DiscreteCyclic { generator: int(2) });
        assert_eq!(ratio.kind, ValueKind::DiscreteCyclic { generator: int(4) });
        assert_eq!(unipotent.kind, UnipotentKind::Dense);
        assert_eq!(unipotent.window, 8);
        // Conjugates of P by Hᵏ translate by 4ᵏ.
        for (k, g) in unipotent.gcd_by_level.iter().enumerate() {
            assert_eq!(*g, Rational::new(1.into(), BigInt::from(4).pow(k as u32)));
        }
    }

    #[test]
    fn cyclic_cases() {
        let ClosureDescription::Triangular {
            diagonal, unipotent, ..
        } = describe(vec![h()])
        else {
            panic!()
        };
        assert_eq!(diagonal.kind, ValueKind::DiscreteCyclic { generator: int(2) });
        assert_eq!(unipotent.kind, UnipotentKind::Trivial);
        let ClosureDescription::Triangular {
            diagonal, unipotent, ..
        } = describe(vec![p()])
        else {
            panic!()
        };
        assert_eq!(diagonal.kind, ValueKind::Trivial);
        assert_eq!(unipotent.kind, UnipotentKind::Discrete { generator: int(1) });
    }

    #[test]
    fn value_group_ranks() {
        assert_eq!(
            ValueGroup::generated_by(&[int(4), int(8)]).kind,
            ValueKind::DiscreteCyclic { generator: int(2) }
        );
        assert_eq!(ValueGroup::generated_by(&[int(2), int(3)]).kind, ValueKind::Dense);
        assert_eq!(
            ValueGroup::generated_by(&[rat(1, 6), int(36)]).kind,
            ValueKind::DiscreteCyclic { generator: int(6) }
        );
        assert_eq!(
            ValueGroup::generated_by(&[rat(2, 3), rat(4, 9), int(-1)]).kind,
            ValueKind::DiscreteCyclic { generator: rat(3, 2) }
        );
        assert_eq!(ValueGroup::generated_by(&[int(12), int(18)]).rank, 2);
    }

    #[test]
    fn relation_lift_exposes_hidden_translation() {
        // Ratios 4 and 16 satisfy a² = b; a²·b⁻¹ translates by 12.
        let a = QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]]);
        let b = QMatrix::from_fractions_2x2([[(4, 1), (3, 1)], [(0, 1), (1, 4)]]);
        let ClosureDescription::Triangular { unipotent, .. } = describe(vec![a, b]) else {
            panic!()
        };
        assert_eq!(unipotent.kind, UnipotentKind::Dense);
        assert!(!unipotent.base_values.is_empty());
    }

    #[test]
    fn conjugated_line() {
        let c = QMatrix::from_ints(&[&[1, 0], &[3, 1]]);
        let ci = c.inverse().unwrap();
        let gens: Vec<QMatrix> = [h(), p()].iter().map(|m| &(&c * m) * &ci).collect();
        let d = describe(gens);
        assert!(d.is_cocompact_in_borel());
        let ClosureDescription::Triangular { invariant_line, .. } = d else {
            panic!()
        };
        assert_eq!(invariant_line.to_string(), "(1:3)");
    }

    #[test]
    fn kernel_basis() {
        let k = integer_kernel(&[vec![BigInt::from(2)], vec![BigInt::from(4)]]);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(&v[0] * 2 + &v[1] * 4, BigInt::zero());
        assert!(integer_kernel(&[
            vec![BigInt::from(1), BigInt::zero()],
            vec![BigInt::zero(), BigInt::from(1)]
        ])
        .is_empty());
    }
}
