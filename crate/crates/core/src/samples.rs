//! The graphs of groups used throughout the documentation and tests.

use crate::gog::{EdgeSpec, GoGSpec};
use crate::linalg::IntMatrix;

fn edge(name: &str, src: &str, dst: &str, alpha: &[&[i64]], omega: &[&[i64]]) -> EdgeSpec {
    EdgeSpec {
        name: name.to_string(),
        source: src.to_string(),
        target: dst.to_string(),
        alpha: IntMatrix::from_i64(alpha),
        omega: IntMatrix::from_i64(omega),
    }
}

/// One vertex `X` with ℤ², loops `h` (diag(1,2) → diag(2,1)) and `p` (I → [[1,1],[0,1]]).
pub fn spec_a() -> GoGSpec {
    GoGSpec {
        rank: 2,
        vertices: vec!["X".to_string()],
        edges: vec![
            edge("h", "X", "X", &[&[1, 0], &[0, 2]], &[&[2, 0], &[0, 1]]),
            edge("p", "X", "X", &[&[1, 0], &[0, 1]], &[&[1, 1], &[0, 1]]),
        ],
        spanning_tree: None,
    }
}

/// `spec_a` with a third loop `e` (I → [[0,1],[-1,0]]).
pub fn spec_b() -> GoGSpec {
    let mut s = spec_a();
    s.edges
        .push(edge("e", "X", "X", &[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]]));
    s
}

/// BS(1,2) = ⟨a, t | t⁻¹at = a²⟩.
pub fn bs12() -> GoGSpec {
    GoGSpec {
        rank: 1,
        vertices: vec!["X".to_string()],
        edges: vec![edge("t", "X", "X", &[&[1]], &[&[2]])],
        spanning_tree: None,
    }
}

/// Ascending HNN extension of ℤ² by diag(2,1).
pub fn ascending2() -> GoGSpec {
    GoGSpec {
        rank: 2,
        vertices: vec!["X".to_string()],
        edges: vec![edge("t", "X", "X", &[&[1, 0], &[0, 1]], &[&[2, 0], &[0, 1]])],
        spanning_tree: None,
    }
}

/// Two unimodular loops with holonomy [[1,4],[0,1]] and [[1,0],[4,1]], which
/// generate a free subgroup of SL₂(ℤ).
pub fn unimodular_free() -> GoGSpec {
    GoGSpec {
        rank: 2,
        vertices: vec!["X".to_string()],
        edges: vec![
            edge("s", "X", "X", &[&[1, 0], &[0, 1]], &[&[1, 4], &[0, 1]]),
            edge("t", "X", "X", &[&[1, 0], &[0, 1]], &[&[1, 0], &[4, 1]]),
        ],
        spanning_tree: None,
    }
}
