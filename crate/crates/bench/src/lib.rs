//! Fixtures shared by the benchmarks.

use cyclarc::{build_tower, FieldTower};

/// Tower for a prime `q`, panicking on bad input.
pub fn tower(q: u64) -> FieldTower {
    build_tower(q, 1, cyclarc::gf::DEFAULT_SIZE_LIMIT).expect("benchmark tower")
}
