//! The holonomy map Γ → GLₙ(ℚ) and its evaluation on words.

use std::collections::HashSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::gog::{GoGSpec, GogError, GraphOfGroups, Step};
use crate::linalg::rational::{format_rational, to_f64, Rational};
use crate::linalg::QMatrix;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableImage {
    pub letter: String,
    pub matrix: QMatrix,
    #[serde(skip)]
    pub inverse: QMatrix,
}

/// Images of the generators under the holonomy map, in the coordinates of the
/// base vertex group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomyData {
    pub base_vertex: String,
    pub rank: usize,
    /// One entry per stable letter, in edge order.
    pub stable: Vec<StableImage>,
    /// Vertex letters; all map to the identity.
    pub vertex_letters: Vec<String>,
}

impl HolonomyData {
    pub fn from_graph(g: &GraphOfGroups) -> Self {
        let n = g.rank();
        // transport[v] maps coordinates at v to coordinates at the base vertex.
        let mut transport: Vec<Option<QMatrix>> = vec![None; g.vertex_count()];
        transport[g.base_vertex()] = Some(QMatrix::identity(n));
        for v in 0..g.vertex_count() {
            let mut c = QMatrix::identity(n);
            for &step in g.tree_path(v) {
                c = &c * &edge_comparison(g, step);
            }
            transport[v] = Some(c);
        }
        let transport: Vec<QMatrix> = transport.into_iter().map(|c| c.expect("tree spans")).collect();
        let stable = g
            .stable_edges()
            .into_iter()
            .map(|e| {
                let edge = g.edge(e);
                let a_inv = edge.alpha.to_qmatrix().inverse().expect("validated inclusion");
                let src_inv = transport[g.source(e)].inverse().expect("invertible transport");
                let matrix = &(&(&transport[g.target(e)] * &edge.omega.to_qmatrix()) * &a_inv) * &src_inv;
                let inverse = matrix.inverse().expect("holonomy is invertible");
                StableImage {
                    letter: edge.name.clone(),
                    matrix,
                    inverse,
                }
            })
            .collect();
        HolonomyData {
            base_vertex: g.vertex_name(g.base_vertex()).to_string(),
            rank: n,
            stable,
            vertex_letters: (0..g.vertex_count())
                .flat_map(|v| g.vertex_letters(v).iter().cloned())
                .collect(),
        }
    }

    pub fn image_generators(&self) -> Vec<QMatrix> {
        self.stable.iter().map(|s| s.matrix.clone()).collect()
    }

    pub fn matrix(&self, letter: &str) -> Option<&QMatrix> {
        self.stable.iter().find(|s| s.letter == letter).map(|s| &s.matrix)
    }

    fn letter_power(&self, name: &str, exp: i64) -> Result<Option<QMatrix>, GogError> {
        if let Some(s) = self.stable.iter().find(|s| s.letter == name) {
            let base = if exp < 0 { &s.inverse } else { &s.matrix };
            return Ok(Some(base.pow(exp.abs()).expect("nonnegative power")));
        }
        if self.vertex_letters.iter().any(|v| v == name) {
            return Ok(None);
        }
        Err(GogError::UnknownLetter(name.to_string()))
    }
}

/// Comparison map across a tree edge: coordinates at the step's end expressed
/// at its start, `S·E⁻¹`.
fn edge_comparison(g: &GraphOfGroups, step: Step) -> QMatrix {
    let s = g.start_inclusion(step).to_qmatrix();
    let e_inv = g
        .end_inclusion(step)
        .to_qmatrix()
        .inverse()
        .expect("validated inclusion");
    &s * &e_inv
}

pub fn compute_holonomy(spec: &GoGSpec) -> Result<HolonomyData, GogError> {
    Ok(HolonomyData::from_graph(&GraphOfGroups::new(spec.clone())?))
}

/// Product of the letter images in word order; vertex letters contribute the identity.
pub fn word_image(hd: &HolonomyData, w: &Word) -> Result<QMatrix, GogError> {
    let mut acc = QMatrix::identity(hd.rank);
    for l in w.letters() {
        if let Some(m) = hd.letter_power(&l.name, l.exp)? {
            acc = &acc * &m;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// Every image generator lies in GLₙ(ℤ), so the image is discrete.
    DiscreteIntegral,
    Found {
        word: Word,
        image: QMatrix,
        #[serde(serialize_with = "crate::linalg::rational::serialize")]
        distance: Rational,
    },
    /// Bounded search only; not a proof of discreteness.
    NoneFound {
        max_word_length: usize,
        matrices_examined: usize,
    },
}

impl WitnessOutcome {
    pub fn witness(&self) -> Option<&Word> {
        match self {
            WitnessOutcome::Found { word, .. } => Some(word),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            WitnessOutcome::DiscreteIntegral => "discrete (integral)".to_string(),
            WitnessOutcome::Found { word, distance, .. } => {
                format!("non-discrete: ‖hol({word}) − I‖ = {}", format_rational(distance))
            }
            WitnessOutcome::NoneFound { max_word_length, .. } => {
                format!("none found (bounded search to length {max_word_length})")
            }
        }
    }
}

/// Shortest, then shortlex-least, stable-letter word whose image is within
/// `epsilon` of the identity without being the identity.
pub fn non_discreteness_witness(hd: &HolonomyData, epsilon: &Rational, max_word_length: usize) -> WitnessOutcome {
    let all: Vec<usize> = (0..hd.stable.len()).collect();
    non_discreteness_witness_among(hd, &all, epsilon, max_word_length)
}

/// As [`non_discreteness_witness`], restricted to the stable letters with the
/// given indices.
pub fn non_discreteness_witness_among(
    hd: &HolonomyData,
    letters: &[usize],
    epsilon: &Rational,
    max_word_length: usize,
) -> WitnessOutcome {
    if hd.stable.iter().all(|s| s.matrix.is_integral_unimodular()) {
        return WitnessOutcome::DiscreteIntegral;
    }
    // Alphabet order: letters in edge order, positive before negative.
    let alphabet: Vec<(usize, i64, &QMatrix)> = letters
        .iter()
        .flat_map(|&i| [(i, 1, &hd.stable[i].matrix), (i, -1, &hd.stable[i].inverse)])
        .collect();
    let identity = QMatrix::identity(hd.rank);
    let mut seen: HashSet<QMatrix> = HashSet::from([identity.clone()]);
    let mut frontier: Vec<(Vec<usize>, QMatrix)> = vec![(Vec::new(), identity)];
    for level in 0..max_word_length {
        if level + 1 == max_word_length {
            // Last level: nothing is expanded further, so screen in floating
            // point and confirm candidates exactly.
            return last_level(hd, &alphabet, &frontier, epsilon, max_word_length, seen.len());
        }
        let children: Vec<Vec<(Vec<usize>, QMatrix)>> = frontier
            .par_iter()
            .map(|(word, m)| {
                alphabet
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| word.last().is_none_or(|&last| !is_inverse_pair(&alphabet, last, *k)))
                    .map(|(k, (_, _, g))| {
                        let mut w = word.clone();
                        w.push(k);
                        (w, m * *g)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (w, m) in children.into_iter().flatten() {
            if seen.contains(&m) {
                continue;
            }
            let d = m.distance_from_identity();
            if !d.is_zero() && &d < epsilon {
                let word = Word::from_letters(
                    w.iter()
                        .map(|&k| (hd.stable[alphabet[k].0].letter.as_str(), alphabet[k].1)),
                );
                return WitnessOutcome::Found {
                    word,
                    image: m,
                    distance: d,
                };
            }
            seen.insert(m.clone());
            next.push((w, m));
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    WitnessOutcome::NoneFound {
        max_word_length,
        matrices_examined: seen.len(),
    }
}

fn to_f64_matrix(m: &QMatrix) -> Vec<f64> {
    let n = m.dim();
    (0..n * n).map(|k| to_f64(m.get(k / n, k % n))).collect()
}

fn last_level(
    hd: &HolonomyData,
    alphabet: &[(usize, i64, &QMatrix)],
    frontier: &[(Vec<usize>, QMatrix)],
    epsilon: &Rational,
    max_word_length: usize,
    seen: usize,
) -> WitnessOutcome {
    let n = hd.rank;
    let eps = to_f64(epsilon);
    let letters: Vec<Vec<f64>> = alphabet.iter().map(|(_, _, g)| to_f64_matrix(g)).collect();
    // Screening threshold well above the rounding error of one product.
    let screen = 2.0 * eps;
    let candidate = |(word, m): &(Vec<usize>, QMatrix)| -> Option<(Vec<usize>, QMatrix, Rational)> {
        let mf = to_f64_matrix(m);
        for (k, g) in letters.iter().enumerate() {
            if word.last().is_some_and(|&last| is_inverse_pair(alphabet, last, k)) {
                continue;
            }
            let mut d: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let v: f64 = (0..n).map(|l| mf[i * n + l] * g[l * n + j]).sum();
                    d = d.max((v - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
            if d <= screen {
                let exact = m * alphabet[k].2;
                let dist = exact.distance_from_identity();
                if !dist.is_zero() && &dist < epsilon {
                    let mut w = word.clone();
                    w.push(k);
                    return Some((w, exact, dist));
                }
            }
        }
        None
    };
    // `find_map_first` keeps the shortlex-least witness.
    match frontier.par_iter().find_map_first(candidate) {
        Some((w, image, distance)) => WitnessOutcome::Found {
            word: Word::from_letters(
                w.iter()
                    .map(|&k| (hd.stable[alphabet[k].0].letter.as_str(), alphabet[k].1)),
            ),
            image,
            distance,
        },
        None => WitnessOutcome::NoneFound {
            max_word_length,
            matrices_examined: seen
                + frontier
                    .iter()
                    .map(|(w, _)| alphabet.len() - usize::from(!w.is_empty()))
                    .sum::<usize>(),
        },
    }
}

fn is_inverse_pair(alphabet: &[(usize, i64, &QMatrix)], a: usize, b: usize) -> bool {
    alphabet[a].0 == alphabet[b].0 && alphabet[a].1 == -alphabet[b].1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};
    use crate::samples::{spec_a, spec_b};
    use proptest::prelude::*;

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }

    #[test]
    fn images_of_sample_letters() {
        let a = compute_holonomy(&spec_a()).unwrap();
        assert_eq!(a.matrix("h"), Some(&h()));
        assert_eq!(a.matrix("p"), Some(&QMatrix::from_ints(&[&[1, 1], &[0, 1]])));
        let b = compute_holonomy(&spec_b()).unwrap();
        assert_eq!(b.matrix("e"), Some(&QMatrix::from_ints(&[&[0, 1], &[-1, 0]])));
        assert_eq!(b.image_generators().len(), 3);
    }

    #[test]
    fn conjugates_of_p() {
        let a = compute_holonomy(&spec_a()).unwrap();
        for k in -5i64..=5 {
            let w = Word::from_letters([("h", k), ("p", 1), ("h", -k)]);
            let m = word_image(&a, &w).unwrap();
            let four_k = if k >= 0 {
                int(4i64.pow(k as u32))
            } else {
                rat(1, 4i64.pow((-k) as u32))
            };
            let expected = QMatrix::from_rows(vec![vec![int(1), four_k], vec![int(0), int(1)]]).unwrap();
            assert_eq!(m, expected, "k = {k}");
        }
        assert!(word_image(&a, &"a".parse().unwrap()).unwrap().is_identity());
        assert!(word_image(&a, &Word::empty()).unwrap().is_identity());
        assert!(word_image(&a, &"q".parse().unwrap()).is_err());
    }

    #[test]
    fn relators_map_to_identity() {
        for spec in [spec_a(), spec_b()] {
            let g = GraphOfGroups::new(spec).unwrap();
            let hd = HolonomyData::from_graph(&g);
            for r in g.presentation().relators() {
                assert!(word_image(&hd, &r).unwrap().is_identity(), "{r}");
            }
        }
    }

    #[test]
    fn flipping_an_edge_inverts_its_image() {
        let mut s = spec_a();
        let e = &mut s.edges[0];
        std::mem::swap(&mut e.alpha, &mut e.omega);
        let flipped = compute_holonomy(&s).unwrap();
        assert_eq!(flipped.matrix("h"), h().inverse().as_ref());
    }

    #[test]
    fn multi_vertex_transport() {
        // Splitting the vertex of spec A along an identity tree edge leaves the holonomy unchanged.
        let mut s = spec_a();
        s.vertices.push("Y".into());
        s.edges[1].target = "Y".into();
        s.edges.push(crate::gog::EdgeSpec {
            name: "f".into(),
            source: "X".into(),
            target: "Y".into(),
            alpha: crate::linalg::IntMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            omega: crate::linalg::IntMatrix::from_i64(&[&[1, 0], &[0, 1]]),
        });
        s.spanning_tree = Some(vec!["f".into()]);
        let hd = compute_holonomy(&s).unwrap();
        assert_eq!(hd.matrix("h"), Some(&h()));
        assert_eq!(hd.matrix("p"), Some(&QMatrix::from_ints(&[&[1, 1], &[0, 1]])));
        let g = GraphOfGroups::new(s).unwrap();
        for r in g.presentation().relators() {
            assert!(word_image(&hd, &r).unwrap().is_identity());
        }
    }

    #[test]
    fn witness_for_spec_a() {
        let a = compute_holonomy(&spec_a()).unwrap();
        let out = non_discreteness_witness(&a, &rat(1, 1000), 11);
        assert_eq!(out.witness().map(|w| w.to_string()).as_deref(), Some("h^-5 p h^5"));
        match out {
            WitnessOutcome::Found { distance, .. } => assert_eq!(distance, rat(1, 1024)),
            _ => unreachable!(),
        }
        assert!(matches!(
            non_discreteness_witness(&a, &rat(1, 1000), 10),
            WitnessOutcome::NoneFound { .. }
        ));
    }

    #[test]
    fn integral_and_diagonal_images() {
        let b = compute_holonomy(&spec_b()).unwrap();
        let mut pe = b.clone();
        pe.stable.retain(|s| s.letter != "h");
        assert_eq!(
            non_discreteness_witness(&pe, &rat(1, 1000), 6),
            WitnessOutcome::DiscreteIntegral
        );
        let mut only_h = b;
        only_h.stable.retain(|s| s.letter == "h");
        assert!(matches!(
            non_discreteness_witness(&only_h, &rat(1, 1000), 12),
            WitnessOutcome::NoneFound { .. }
        ));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((prop::sample::select(vec!["a", "b", "h", "p", "e"]), -3i64..=3), 0..8)
            .prop_map(Word::from_letters)
    }

    proptest! {
        #[test]
        fn word_image_is_multiplicative(u in word_strategy(), v in word_strategy()) {
            let b = compute_holonomy(&spec_b()).unwrap();
            let lhs = word_image(&b, &u.concat(&v)).unwrap();
            let rhs = &word_image(&b, &u).unwrap() * &word_image(&b, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
