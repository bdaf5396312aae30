//! Consistency properties of the classification reports on random
//! single-vertex graphs.

use gbs::classify::{classify, qi_compare, CowlingHaagerup, WhyteCase};
use gbs::gog::{EdgeSpec, Ends, GoGSpec};
use gbs::linalg::IntMatrix;
use gbs::verdict::Tri;
use proptest::prelude::*;

fn loop_edge(name: String, alpha: [i64; 4], omega: [i64; 4]) -> EdgeSpec {
    let m = |x: [i64; 4]| IntMatrix::from_i64(&[&[x[0], x[1]], &[x[2], x[3]]]);
    EdgeSpec {
        name,
        source: "X".into(),
        target: "X".into(),
        alpha: m(alpha),
        omega: m(omega),
    }
}

fn nonsingular() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-3i64..=3).prop_filter("nonsingular", |x| x[0] * x[3] != x[1] * x[2])
}

fn spec() -> impl Strategy<Value = GoGSpec> {
    prop::collection::vec((nonsingular(), nonsingular()), 1..=2).prop_map(|loops| GoGSpec {
        rank: 2,
        vertices: vec!["X".into()],
        edges: loops
            .into_iter()
            .enumerate()
            .map(|(i, (a, o))| loop_edge(format!("t{i}"), a, o))
            .collect(),
        spanning_tree: None,
    })
}

fn rank_one() -> impl Strategy<Value = GoGSpec> {
    (
        prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4]),
        prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4]),
    )
        .prop_map(|(a, o)| GoGSpec {
            rank: 1,
            vertices: vec!["X".into()],
            edges: vec![EdgeSpec {
                name: "t".into(),
                source: "X".into(),
                target: "X".into(),
                alpha: IntMatrix::from_i64(&[&[a]]),
                omega: IntMatrix::from_i64(&[&[o]]),
            }],
            spanning_tree: None,
        })
}

fn check_report(s: &GoGSpec) -> Result<(), TestCaseError> {
    let r = classify(s).unwrap();
    prop_assert_eq!(r.cv.haagerup, r.cv.weakly_amenable);
    prop_assert_eq!(r.cv.cowling_haagerup == CowlingHaagerup::One, r.cv.haagerup == Tri::Yes);
    if r.whyte.ends == Ends::InfinitelyMany && r.whyte.whyte_case.is_decided() {
        prop_assert_eq!(r.whyte.whyte_case == WhyteCase::Ascending, r.whyte.amenable == Tri::Yes);
    }
    if r.whyte.ends != Ends::InfinitelyMany {
        prop_assert_eq!(r.whyte.whyte_case, WhyteCase::OutOfScope(r.whyte.ends));
    }
    // Amenable groups have amenable holonomy closure.
    if r.whyte.amenable == Tri::Yes {
        prop_assert_ne!(r.cv.haagerup, Tri::No);
    }
    if r.is_decided() {
        prop_assert!(!r.whyte.evidence.is_empty() && !r.cv.evidence.is_empty());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rank_two_reports_are_consistent(s in spec()) {
        check_report(&s)?;
    }

    #[test]
    fn rank_one_reports_are_consistent(s in rank_one()) {
        check_report(&s)?;
        let r = classify(&s).unwrap();
        let (a, o) = (s.edges[0].alpha.get(0, 0).clone(), s.edges[0].omega.get(0, 0).clone());
        use num_traits::Signed;
        let ascending = a.abs() == 1.into() || o.abs() == 1.into();
        if r.whyte.ends == Ends::InfinitelyMany {
            prop_assert_eq!(r.whyte.amenable == Tri::Yes, ascending);
        }
    }

    #[test]
    fn comparison_is_symmetric_and_reflexive(a in rank_one(), b in rank_one()) {
        let ab = qi_compare(&a, &b).unwrap();
        let ba = qi_compare(&b, &a).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        prop_assert_eq!(ab.exact, ba.exact);
        prop_assert_eq!(qi_compare(&a, &a).unwrap().verdict, gbs::classify::QiVerdict::QuasiIsometric);
    }
}
