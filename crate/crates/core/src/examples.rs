//! Small resolution graphs used in tests, benchmarks and the CLI demo.

use crate::graph::ResolutionGraph;

/// The cusp `y^2 + x^3`, rooted at the first exceptional curve.
pub fn cusp() -> ResolutionGraph {
    ResolutionGraph::new(vec![3, 2, 1], &[(0, 2), (1, 2)], &[(2, 1)], 0)
}

/// An irreducible curve with two Puiseux pairs, multiplicities `4, 12, 6, 26, 13`.
pub fn two_pairs() -> ResolutionGraph {
    ResolutionGraph::new(
        vec![3, 3, 2, 1, 2],
        &[(0, 1), (1, 2), (1, 3), (3, 4)],
        &[(3, 1)],
        0,
    )
}

/// Two transverse cusps `(y^2 + x^3)(x^2 + y^3)`.
pub fn two_cusps() -> ResolutionGraph {
    ResolutionGraph::new(
        vec![5, 1, 2, 1, 2],
        &[(0, 1), (1, 2), (0, 3), (3, 4)],
        &[(1, 1), (3, 1)],
        0,
    )
}

/// A smooth branch: one curve with one arrowhead.
pub fn smooth() -> ResolutionGraph {
    ResolutionGraph::new(vec![1], &[], &[(0, 1)], 0)
}
