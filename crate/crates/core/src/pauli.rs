use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Action on a single spin (`up = true` for sigma-z = +1): returns the
    /// coefficient and whether the spin is flipped.
    #[inline]
    pub fn act(self, up: bool) -> (Complex64, bool) {
        match (self, up) {
            (Pauli::X, _) => (Complex64::new(1.0, 0.0), true),
            (Pauli::Y, true) => (Complex64::new(0.0, 1.0), true),
            (Pauli::Y, false) => (Complex64::new(0.0, -1.0), true),
            (Pauli::Z, true) => (Complex64::new(1.0, 0.0), false),
            (Pauli::Z, false) => (Complex64::new(-1.0, 0.0), false),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Product of single-site Pauli operators, applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(ops: Vec<(usize, Pauli)>) -> Self {
        PauliString { ops }
    }

    pub fn identity() -> Self {
        PauliString { ops: Vec::new() }
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        PauliString { ops: vec![(site, p)] }
    }

    pub fn pair(i: usize, a: Pauli, j: usize, b: Pauli) -> Self {
        PauliString { ops: vec![(i, a), (j, b)] }
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.ops
    }

    pub fn weight(&self) -> usize {
        let mut sites: Vec<usize> = self.ops.iter().map(|&(s, _)| s).collect();
        sites.sort_unstable();
        sites.dedup();
        sites.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|&(_, p)| p == Pauli::Z)
    }

    pub fn max_site(&self) -> Option<usize> {
        self.ops.iter().map(|&(s, _)| s).max()
    }

    /// Image of the basis state `mask` (bit set = up): `P |mask> = coeff |mask'>`.
    #[inline]
    pub fn apply(&self, mask: u64) -> (Complex64, u64) {
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut m = mask;
        for &(site, p) in self.ops.iter().rev() {
            let (c, flip) = p.act(m >> site & 1 == 1);
            coeff *= c;
            if flip {
                m ^= 1 << site;
            }
        }
        (coeff, m)
    }

    /// Hermitian conjugate (reversed order; Pauli matrices are Hermitian).
    pub fn adjoint(&self) -> Self {
        PauliString {
            ops: self.ops.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        for (k, (s, p)) in self.ops.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.letter(), s)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"X0 Z3"`, `"I"` or the empty string.
    fn from_str(s: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let p = match chars.next() {
                Some('X') | Some('x') => Pauli::X,
                Some('Y') | Some('y') => Pauli::Y,
                Some('Z') | Some('z') => Pauli::Z,
                _ => return Err(Error::InvalidArgument(format!("bad Pauli token {tok:?}"))),
            };
            let site = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad Pauli token {tok:?}")))?;
            ops.push((site, p));
        }
        Ok(PauliString { ops })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_algebra() {
        // XY = iZ on both basis states
        for up in [false, true] {
            let mask = up as u64;
            let (c, m) = PauliString::new(vec![(0, Pauli::X), (0, Pauli::Y)]).apply(mask);
            let (cz, mz) = PauliString::single(0, Pauli::Z).apply(mask);
            assert_eq!(m, mz);
            assert_eq!(c, Complex64::new(0.0, 1.0) * cz);
        }
    }

    #[test]
    fn round_trip_text() {
        let p: PauliString = "X0 Z3 y12".parse().unwrap();
        assert_eq!(p.to_string(), "X0 Z3 Y12");
        assert_eq!(p.weight(), 3);
        assert!(!p.is_diagonal());
        assert!("Q1".parse::<PauliString>().is_err());
        assert_eq!("I".parse::<PauliString>().unwrap(), PauliString::identity());
    }
}
