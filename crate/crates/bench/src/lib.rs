//! Inputs shared by the benchmarks.

use skein_core::curves::{reconstruct_from_normal, ExtendedCoords, StatedDiagram};
use skein_core::TriangulatedSurface;

/// Diagram with edge coordinates `n` and no boundary corner coordinates.
pub fn diagram(s: &TriangulatedSurface, n: &[i64]) -> StatedDiagram {
    let v = ExtendedCoords { n: n.to_vec(), hat: vec![0; s.boundary_edges().len()] };
    reconstruct_from_normal(s, &v).expect("balanced coordinates in the basis monoid")
}
