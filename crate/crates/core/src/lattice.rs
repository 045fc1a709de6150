//! Periodic N1 x N2 square lattice in magnetic-length units.
//!
//! Sites carry labels `n1 = -N1/2+1 ..= N1/2` and `n2 = 1 ..= N2` and sit at
//! `(x, y) = (n1 b, n2 b)` with `b = sqrt(2 pi)`. The labeling fixes the seam:
//! the x-discontinuity between the column `n1 = N1/2` and the column
//! `n1 = -N1/2+1`. Sites are indexed row-major in `(n2, n1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::SpinConfiguration;
use crate::error::{Error, Result};

/// Lattice spacing in magnetic lengths, `b = sqrt(2 pi)`.
pub fn spacing() -> f64 {
    (2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::X => f.write_str("x"),
            Direction::Y => f.write_str("y"),
        }
    }
}

/// A lattice site: its canonical index and its `(n1, n2)` labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub index: usize,
    pub n1: i64,
    pub n2: i64,
}

impl Site {
    pub fn x(&self) -> f64 {
        self.n1 as f64 * spacing()
    }

    pub fn y(&self) -> f64 {
        self.n2 as f64 * spacing()
    }

    /// Checkerboard sublattice parity `(n1 + n2) mod 2`.
    pub fn parity(&self) -> i64 {
        (self.n1 + self.n2).rem_euclid(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    n1: usize,
    n2: usize,
}

impl LatticeSpec {
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidLattice {
            n1,
            n2,
            reason: reason.to_string(),
        };
        if n1 < 2 || n2 < 2 {
            return Err(invalid("N1 and N2 must both be at least 2"));
        }
        if n1 % 2 != 0 {
            return Err(invalid("N1 must be even"));
        }
        Ok(LatticeSpec { n1, n2 })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn spacing(&self) -> f64 {
        spacing()
    }

    pub fn l1(&self) -> f64 {
        self.n1 as f64 * spacing()
    }

    pub fn l2(&self) -> f64 {
        self.n2 as f64 * spacing()
    }

    /// Imaginary part of the aspect ratio `tau = i L2 / L1`.
    pub fn tau_im(&self) -> f64 {
        self.n2 as f64 / self.n1 as f64
    }

    pub fn num_sites(&self) -> usize {
        self.n1 * self.n2
    }

    /// Number of up spins (bosons) in the Sz = 0 sector.
    pub fn num_bosons(&self) -> usize {
        self.num_sites() / 2
    }

    pub fn min_n1(&self) -> i64 {
        1 - (self.n1 as i64) / 2
    }

    pub fn max_n1(&self) -> i64 {
        (self.n1 as i64) / 2
    }

    pub fn site(&self, index: usize) -> Site {
        assert!(index < self.num_sites(), "site index {index} out of range");
        let col = index % self.n1;
        let row = index / self.n1;
        Site {
            index,
            n1: col as i64 + self.min_n1(),
            n2: row as i64 + 1,
        }
    }

    /// Index of the site with labels `(n1, n2)`, reduced periodically into the
    /// canonical label ranges.
    pub fn index_of(&self, n1: i64, n2: i64) -> usize {
        let col = (n1 - self.min_n1()).rem_euclid(self.n1 as i64) as usize;
        let row = (n2 - 1).rem_euclid(self.n2 as i64) as usize;
        row * self.n1 + col
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(move |i| self.site(i))
    }

    /// The reference site used for correlators: labels `(0, 1)`.
    pub fn origin(&self) -> usize {
        self.index_of(0, 1)
    }

    /// Site reached from `index` by `steps` lattice vectors along `dir`.
    pub fn shift(&self, index: usize, dir: Direction, steps: i64) -> usize {
        let s = self.site(index);
        match dir {
            Direction::X => self.index_of(s.n1 + steps, s.n2),
            Direction::Y => self.index_of(s.n1, s.n2 + steps),
        }
    }

    pub fn neighbor(&self, index: usize, dir: Direction) -> usize {
        self.shift(index, dir, 1)
    }

    /// Translate every up spin by one lattice vector along `dir`.
    pub fn translate(&self, c: &SpinConfiguration, dir: Direction) -> SpinConfiguration {
        let ups: Vec<usize> = c.up_sites().iter().map(|&i| self.neighbor(i, dir)).collect();
        SpinConfiguration::from_unsorted(ups)
    }

    /// Site permutation of a translation, `perm[i] = T(i)`.
    pub fn translation_map(&self, dir: Direction, steps: i64) -> Vec<usize> {
        (0..self.num_sites()).map(|i| self.shift(i, dir, steps)).collect()
    }

    /// Sum of x over all sites of the canonical labeling, `L2 L1 / (2b)`.
    pub fn sum_x(&self) -> f64 {
        let b = spacing();
        self.sites().map(|s| s.n1 as f64 * b).sum()
    }

    /// Integer displacement `(dn1, dn2)` from `a` to `b`: the unique periodic
    /// image in x with `|dn1| <= max_steps`, and the minimal image in y (a tie
    /// at `N2/2` takes the sign of `b - a` so that the map is antisymmetric).
    pub fn bond_offset(&self, a: usize, b: usize, max_dx: f64) -> Result<(i64, i64)> {
        let sa = self.site(a);
        let sb = self.site(b);
        let n1 = self.n1 as i64;
        let n2 = self.n2 as i64;
        let max_steps = max_dx / spacing() + 1e-9;

        let base = (sb.n1 - sa.n1).rem_euclid(n1);
        let images: Vec<i64> = (-2..=1)
            .map(|k| base + k * n1)
            .filter(|d| (d.abs() as f64) <= max_steps)
            .collect();
        let dx = match images.len() {
            0 => return Err(Error::BondTooLong { a, b, max_dx }),
            1 => images[0],
            n => {
                return Err(Error::AmbiguousBond {
                    a,
                    b,
                    images: n,
                    max_dx,
                })
            }
        };

        let mut dy = (sb.n2 - sa.n2).rem_euclid(n2);
        if 2 * dy > n2 || (2 * dy == n2 && b < a) {
            dy -= n2;
        }
        Ok((dx, dy))
    }

    /// Physical displacement `(dx, dy)` of a bond from `a` to `b`; see
    /// [`LatticeSpec::bond_offset`].
    pub fn bond_displacement(&self, a: usize, b: usize, max_dx: f64) -> Result<(f64, f64)> {
        let (dx, dy) = self.bond_offset(a, b, max_dx)?;
        let s = spacing();
        Ok((dx as f64 * s, dy as f64 * s))
    }

    /// Minimal-image Euclidean distance in units of b.
    pub fn min_image_distance(&self, a: usize, b: usize) -> f64 {
        let sa = self.site(a);
        let sb = self.site(b);
        let fold = |d: i64, n: i64| {
            let d = d.rem_euclid(n);
            d.min(n - d)
        };
        let dx = fold(sb.n1 - sa.n1, self.n1 as i64);
        let dy = fold(sb.n2 - sa.n2, self.n2 as i64);
        ((dx * dx + dy * dy) as f64).sqrt()
    }

    /// All nearest-neighbor bonds `(i, i + b a)` for `a` in {x, y}, one per
    /// site and direction.
    pub fn nearest_neighbor_bonds(&self) -> Vec<(usize, usize, Direction)> {
        let mut bonds = Vec::with_capacity(2 * self.num_sites());
        for i in 0..self.num_sites() {
            bonds.push((i, self.neighbor(i, Direction::X), Direction::X));
        }
        for i in 0..self.num_sites() {
            bonds.push((i, self.neighbor(i, Direction::Y), Direction::Y));
        }
        bonds
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n1, self.n2)
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::LatticeSyntax(s.to_string());
        let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(syntax)?;
        let n1 = a.trim().parse::<usize>().map_err(|_| syntax())?;
        let n2 = b.trim().parse::<usize>().map_err(|_| syntax())?;
        LatticeSpec::new(n1, n2)
    }
}
