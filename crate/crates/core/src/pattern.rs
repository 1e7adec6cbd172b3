//! Photon occupation patterns.

use alloc::vec;
use alloc::vec::Vec;

/// Photon counts per mode, for both input and output states.
///
/// A pattern of length `m` assigns a non-negative count to each of the `m`
/// modes. "Collision-free" means every count is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationPattern {
    counts: Vec<u32>,
}

impl OccupationPattern {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// All-zero pattern over `modes` modes.
    pub fn zeros(modes: usize) -> Self {
        Self {
            counts: vec![0; modes],
        }
    }

    /// Single photon in each of the given modes (0-based), zero elsewhere.
    pub fn single_photons(modes: usize, occupied: &[usize]) -> Self {
        let mut counts = vec![0u32; modes];
        for &mode in occupied {
            counts[mode] += 1;
        }
        Self { counts }
    }

    /// Number of modes.
    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// True when every count is 0 or 1.
    pub fn is_collision_free(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, mode: usize) -> u32 {
        self.counts[mode]
    }

    /// Modes holding at least one photon, in increasing order.
    pub fn occupied_modes(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Mode index of every photon, with multiplicity, in increasing mode order.
    pub fn photon_modes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for (mode, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(mode);
            }
        }
        out
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [u32] {
        &mut self.counts
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.counts
    }
}

impl From<Vec<u32>> for OccupationPattern {
    fn from(counts: Vec<u32>) -> Self {
        Self::new(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn totals_and_collisions() {
        let p = OccupationPattern::new(vec![2, 0, 1]);
        assert_eq!(p.total(), 3);
        assert_eq!(p.modes(), 3);
        assert!(!p.is_collision_free());
        assert_eq!(p.occupied_modes(), vec![0, 2]);
        assert_eq!(p.photon_modes(), vec![0, 0, 2]);

        let q = OccupationPattern::single_photons(4, &[1, 3]);
        assert_eq!(q.counts(), &[0, 1, 0, 1]);
        assert!(q.is_collision_free());
    }
}
