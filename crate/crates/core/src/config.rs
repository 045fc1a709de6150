use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

/// Set of up-spin sites of a half-filled (Sz = 0) configuration, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinConfiguration {
    up: Vec<usize>,
}

impl SpinConfiguration {
    pub fn new(lattice: &LatticeSpec, mut up: Vec<usize>) -> Result<Self> {
        up.sort_unstable();
        if up.len() != lattice.num_bosons() {
            return Err(Error::InvalidConfiguration(format!(
                "expected {} up spins on {lattice}, got {}",
                lattice.num_bosons(),
                up.len()
            )));
        }
        if up.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfiguration("repeated up-spin site".into()));
        }
        if up.last().is_some_and(|&s| s >= lattice.num_sites()) {
            return Err(Error::InvalidConfiguration("site index out of range".into()));
        }
        Ok(SpinConfiguration { up })
    }

    pub(crate) fn from_unsorted(mut up: Vec<usize>) -> Self {
        up.sort_unstable();
        SpinConfiguration { up }
    }

    /// Configuration whose up spins are the set bits of `mask`.
    pub fn from_mask(lattice: &LatticeSpec, mask: u128) -> Result<Self> {
        let up = (0..128).filter(|&i| mask >> i & 1 == 1).collect();
        Self::new(lattice, up)
    }

    pub fn random<R: Rng + ?Sized>(lattice: &LatticeSpec, rng: &mut R) -> Self {
        let up = sample(rng, lattice.num_sites(), lattice.num_bosons()).into_vec();
        Self::from_unsorted(up)
    }

    pub fn up_sites(&self) -> &[usize] {
        &self.up
    }

    pub fn is_up(&self, site: usize) -> bool {
        self.up.binary_search(&site).is_ok()
    }

    /// Bitmask of up sites; requires fewer than 128 sites.
    pub fn mask(&self) -> u128 {
        self.up.iter().fold(0u128, |m, &i| m | 1u128 << i)
    }

    /// sigma-z eigenvalue (+1 up, -1 down) at `site`.
    pub fn sigma_z(&self, site: usize) -> i32 {
        if self.is_up(site) {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_size_and_repeats() {
        let l = LatticeSpec::new(4, 2).unwrap();
        assert!(SpinConfiguration::new(&l, vec![0, 1, 2]).is_err());
        assert!(SpinConfiguration::new(&l, vec![0, 1, 1, 2]).is_err());
        assert!(SpinConfiguration::new(&l, vec![0, 1, 2, 8]).is_err());
        let c = SpinConfiguration::new(&l, vec![5, 0, 3, 1]).unwrap();
        assert_eq!(c.up_sites(), &[0, 1, 3, 5]);
        assert_eq!(c.mask(), 0b101011);
        assert_eq!(SpinConfiguration::from_mask(&l, c.mask()).unwrap(), c);
        assert_eq!(c.sigma_z(3), 1);
        assert_eq!(c.sigma_z(2), -1);
    }
}
