//! Fixtures shared by the benchmarks.

use isostat::constructgen::{self, CapHeight, Platonic};
use isostat::Framework;

pub fn stellated_icosahedron() -> Framework {
    let ico = constructgen::platonic(Platonic::Icosahedron);
    constructgen::cap_all_faces_symmetric(&ico, CapHeight::Stellation).expect("stellation exists")
}

/// Planar rotor with `n` spokes and its long diagonals.
pub fn rotor(n: usize) -> Framework {
    constructgen::rotor(n, false, true)
}
