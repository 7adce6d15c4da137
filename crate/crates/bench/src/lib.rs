//! Shared fixtures for the benchmarks.

use gradiometry::states::flipped_dicke_state;
use gradiometry::{StateVector, TwoWellSpace};

/// Even splits used across the benchmark groups.
pub const SPLITS: [(u32, u32); 3] = [(2, 2), (4, 4), (6, 6)];

pub fn flipped_dicke(na: u32, nb: u32) -> StateVector {
    flipped_dicke_state(TwoWellSpace::new(na, nb).expect("valid split")).expect("even total")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for (na, nb) in SPLITS {
            assert_eq!(flipped_dicke(na, nb).space().dim(), ((na + 1) * (nb + 1)) as usize);
        }
    }
}
