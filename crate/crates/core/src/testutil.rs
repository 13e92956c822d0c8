//! Small fixtures shared by unit tests.

use crate::lattice::{Color, ColoredLattice};

/// The 16-vertex genus-2 octagonal lattice, built on the generalized
/// Petersen graph GP(8, 3).
pub fn h16() -> ColoredLattice {
    ColoredLattice::new(16, 8, h16_edges()).unwrap()
}

/// A lattice shipped in `data/lattices`.
pub fn data_lattice(name: &str) -> ColoredLattice {
    let path = format!(
        "{}/../../data/lattices/{name}.lat",
        env!("CARGO_MANIFEST_DIR")
    );
    ColoredLattice::load(path).unwrap()
}

pub fn h16_edges() -> Vec<(usize, usize, Color)> {
    let mut edges = Vec::new();
    for i in 0..8 {
        let (outer, inner) = if i % 2 == 0 {
            (Color::Green, Color::Red)
        } else {
            (Color::Red, Color::Green)
        };
        edges.push((i, (i + 1) % 8, outer));
        edges.push((i, 8 + i, Color::Blue));
        edges.push((8 + i, 8 + (i + 3) % 8, inner));
    }
    edges
}
