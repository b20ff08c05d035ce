//! Bundled example surfaces.

use crate::surface::TriangulatedSurface;

pub const PUNCTURED_TORUS: &str = include_str!("../fixtures/punctured_torus.surf");
pub const QUADRILATERAL: &str = include_str!("../fixtures/quadrilateral.surf");
pub const PUNCTURED_MONOGON: &str = include_str!("../fixtures/punctured_monogon.surf");
pub const ANNULUS: &str = include_str!("../fixtures/annulus.surf");
pub const GENUS_ONE_BOUNDARY: &str = include_str!("../fixtures/genus_one_boundary.surf");
pub const PUNCTURED_BIGON: &str = include_str!("../fixtures/punctured_bigon.surf");

fn load(text: &str) -> TriangulatedSurface {
    TriangulatedSurface::parse(text).expect("bundled fixture parses")
}

pub fn punctured_torus() -> TriangulatedSurface {
    load(PUNCTURED_TORUS)
}

pub fn quadrilateral() -> TriangulatedSurface {
    load(QUADRILATERAL)
}

pub fn punctured_monogon() -> TriangulatedSurface {
    load(PUNCTURED_MONOGON)
}

pub fn annulus() -> TriangulatedSurface {
    load(ANNULUS)
}

pub fn genus_one_boundary() -> TriangulatedSurface {
    load(GENUS_ONE_BOUNDARY)
}

pub fn punctured_bigon() -> TriangulatedSurface {
    load(PUNCTURED_BIGON)
}

/// The five primary fixtures.
pub fn bundled_surfaces() -> Vec<(&'static str, TriangulatedSurface)> {
    vec![
        ("punctured_torus", punctured_torus()),
        ("quadrilateral", quadrilateral()),
        ("punctured_monogon", punctured_monogon()),
        ("annulus", annulus()),
        ("genus_one_boundary", genus_one_boundary()),
    ]
}

/// Bundled fixtures plus the punctured bigon, which has a self-folded face away from
/// the boundary.
pub fn all_surfaces() -> Vec<(&'static str, TriangulatedSurface)> {
    let mut v = bundled_surfaces();
    v.push(("punctured_bigon", punctured_bigon()));
    v
}

pub fn by_name(name: &str) -> Option<TriangulatedSurface> {
    all_surfaces().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}
