//! Short-range valence-bond (dimer) coverings of the periodic lattice, their
//! gap parities and the slow-twist expectation of the corresponding
//! singlet-product states.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticeSpec};

/// Which site pairs may carry a bond. Lengths are in units of the lattice
/// spacing `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BondRule {
    /// `(|dx|, |dy|)` equal to `(1, 0)` or `(0, 1)`.
    NearestNeighbor,
    /// `|dx| <= max_dx` and minimal-image `|dy| <= max_dy`.
    Box { max_dx: usize, max_dy: usize },
}

impl Default for BondRule {
    fn default() -> Self {
        BondRule::Box { max_dx: 2, max_dy: 2 }
    }
}

impl BondRule {
    pub fn max_dx(&self) -> usize {
        match *self {
            BondRule::NearestNeighbor => 1,
            BondRule::Box { max_dx, .. } => max_dx,
        }
    }

    fn allows(&self, dx: i64, dy: i64) -> bool {
        match *self {
            BondRule::NearestNeighbor => dx.abs() + dy.abs() == 1,
            BondRule::Box { max_dx, max_dy } => dx.unsigned_abs() as usize <= max_dx && dy.unsigned_abs() as usize <= max_dy,
        }
    }

    /// Fails when some pair would have two x-images within the bound.
    pub fn validate(&self, lattice: &LatticeSpec) -> Result<()> {
        if 2 * self.max_dx() >= lattice.n1() {
            return Err(Error::AmbiguousBondRule {
                max_dx_steps: self.max_dx(),
                n1: lattice.n1(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for BondRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BondRule::NearestNeighbor => write!(f, "nn"),
            BondRule::Box { max_dx, max_dy } => write!(f, "dx<={max_dx}b,dy<={max_dy}b"),
        }
    }
}

/// Bond from site `a` to site `b` (`a < b`) with resolved integer offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub dx: i64,
    pub dy: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimerCovering {
    bonds: Vec<Bond>,
}

impl DimerCovering {
    /// Checks that `pairs` is a perfect matching of allowed bonds.
    pub fn new(lattice: &LatticeSpec, rule: BondRule, pairs: &[(usize, usize)]) -> Result<Self> {
        rule.validate(lattice)?;
        let m = lattice.num_sites();
        let mut seen = vec![false; m];
        let mut bonds = Vec::with_capacity(pairs.len());
        for &(p, q) in pairs {
            let (a, b) = (p.min(q), p.max(q));
            if b >= m || a == b || seen[a] || seen[b] {
                return Err(Error::InvalidArgument(format!("pair ({p},{q}) is not part of a perfect matching")));
            }
            seen[a] = true;
            seen[b] = true;
            let (dx, dy) = lattice.bond_offset(a, b, rule.max_dx() as f64 * lattice.spacing())?;
            if !rule.allows(dx, dy) {
                return Err(Error::InvalidArgument(format!("bond ({a},{b}) violates rule {rule}")));
            }
            bonds.push(Bond { a, b, dx, dy });
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidArgument("some sites are not covered".into()));
        }
        bonds.sort_by_key(|b| b.a);
        Ok(DimerCovering { bonds })
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.bonds.iter().map(|b| (b.a, b.b)).collect()
    }

    /// Image of the covering under a one-step translation.
    pub fn translate(&self, lattice: &LatticeSpec, rule: BondRule, dir: Direction) -> Result<Self> {
        let pairs: Vec<_> = self
            .bonds
            .iter()
            .map(|b| (lattice.neighbor(b.a, dir), lattice.neighbor(b.b, dir)))
            .collect();
        Self::new(lattice, rule, &pairs)
    }
}

/// Allowed partners of every site, in increasing site order.
fn adjacency(lattice: &LatticeSpec, rule: BondRule) -> Result<Vec<Vec<(usize, i64, i64)>>> {
    rule.validate(lattice)?;
    let m = lattice.num_sites();
    let max_dx = rule.max_dx() as f64 * lattice.spacing();
    let mut adj = vec![Vec::new(); m];
    for (a, row) in adj.iter_mut().enumerate() {
        for b in 0..m {
            if a == b {
                continue;
            }
            if let Ok((dx, dy)) = lattice.bond_offset(a, b, max_dx) {
                if rule.allows(dx, dy) {
                    row.push((b, dx, dy));
                }
            }
        }
    }
    Ok(adj)
}

struct Frame {
    site: usize,
    next: usize,
    active: bool,
}

/// Streaming depth-first enumeration of all coverings; each step pairs the
/// first uncovered site (canonical order) with its allowed partners in
/// increasing order.
pub struct Coverings {
    adj: Vec<Vec<(usize, i64, i64)>>,
    covered: Vec<bool>,
    frames: Vec<Frame>,
    chosen: Vec<Bond>,
}

impl Iterator for Coverings {
    type Item = DimerCovering;

    fn next(&mut self) -> Option<DimerCovering> {
        while let Some(top) = self.frames.last_mut() {
            if top.active {
                let bond = self.chosen.pop().expect("active frame owns a bond");
                self.covered[bond.a] = false;
                self.covered[bond.b] = false;
                top.active = false;
            }
            let site = top.site;
            let row = &self.adj[site];
            let mut pick = None;
            while top.next < row.len() {
                let (p, dx, dy) = row[top.next];
                top.next += 1;
                if !self.covered[p] {
                    pick = Some((p, dx, dy));
                    break;
                }
            }
            let Some((p, dx, dy)) = pick else {
                self.frames.pop();
                continue;
            };
            top.active = true;
            self.covered[site] = true;
            self.covered[p] = true;
            // store with a < b, offset pointing from a to b
            self.chosen.push(if site < p {
                Bond { a: site, b: p, dx, dy }
            } else {
                Bond { a: p, b: site, dx: -dx, dy: -dy }
            });
            match (site + 1..self.covered.len()).find(|&s| !self.covered[s]) {
                Some(s) => self.frames.push(Frame {
                    site: s,
                    next: 0,
                    active: false,
                }),
                None => {
                    let mut bonds = self.chosen.clone();
                    bonds.sort_by_key(|b| b.a);
                    return Some(DimerCovering { bonds });
                }
            }
        }
        None
    }
}

pub fn enumerate_coverings(lattice: &LatticeSpec, rule: BondRule) -> Result<Coverings> {
    let adj = adjacency(lattice, rule)?;
    let m = lattice.num_sites();
    Ok(Coverings {
        adj,
        covered: vec![false; m],
        frames: vec![Frame {
            site: 0,
            next: 0,
            active: false,
        }],
        chosen: Vec::with_capacity(m / 2),
    })
}

fn count_from(adj: &[Vec<(usize, i64, i64)>], mask: u128, full: u128) -> u64 {
    if mask == full {
        return 1;
    }
    let s = (!mask).trailing_zeros() as usize;
    let with = mask | 1 << s;
    adj[s]
        .iter()
        .filter(|&&(p, _, _)| with >> p & 1 == 0)
        .map(|&(p, _, _)| count_from(adj, with | 1 << p, full))
        .sum()
}

/// Number of coverings; subtrees below the first bond are counted in parallel.
pub fn count_coverings(lattice: &LatticeSpec, rule: BondRule) -> Result<u64> {
    let m = lattice.num_sites();
    if m > 128 {
        return Err(Error::InvalidArgument("covering count supports at most 128 sites".into()));
    }
    let adj = adjacency(lattice, rule)?;
    let full = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    Ok(adj[0]
        .par_iter()
        .map(|&(p, _, _)| count_from(&adj, 1 | 1 << p, full))
        .sum())
}

/// Random covering from a rewiring walk: starting from horizontal dimers,
/// repeatedly pick two bonds and swap partners when both new bonds are
/// allowed, then apply a random translation. Always `Some` for a valid rule.
pub fn random_covering<R: Rng + ?Sized>(lattice: &LatticeSpec, rule: BondRule, rng: &mut R) -> Result<Option<DimerCovering>> {
    let adj = adjacency(lattice, rule)?;
    let m = lattice.num_sites();
    let n1 = lattice.n1();
    let mut allowed = vec![false; m * m];
    for (a, row) in adj.iter().enumerate() {
        for &(b, _, _) in row {
            allowed[a * m + b] = true;
        }
    }
    // horizontal start: columns (2k, 2k + 1) in every row
    let mut partner: Vec<usize> = (0..m).map(|s| if (s % n1) % 2 == 0 { s + 1 } else { s - 1 }).collect();
    for _ in 0..50 * m {
        let a = rng.gen_range(0..m);
        let c = rng.gen_range(0..m);
        let (b, d) = (partner[a], partner[c]);
        if c == a || c == b {
            continue;
        }
        let (x, y) = if rng.gen::<bool>() { (c, d) } else { (d, c) };
        if allowed[a * m + x] && allowed[b * m + y] {
            partner[a] = x;
            partner[x] = a;
            partner[b] = y;
            partner[y] = b;
        }
    }
    let (sx, sy) = (rng.gen_range(0..n1), rng.gen_range(0..lattice.n2()));
    let shift = |mut s: usize| {
        for _ in 0..sx {
            s = lattice.neighbor(s, Direction::X);
        }
        for _ in 0..sy {
            s = lattice.neighbor(s, Direction::Y);
        }
        s
    };
    let pairs: Vec<_> = (0..m).filter(|&s| s < partner[s]).map(|s| (shift(s), shift(partner[s]))).collect();
    DimerCovering::new(lattice, rule, &pairs).map(Some)
}

fn column(lattice: &LatticeSpec, site: usize) -> i64 {
    lattice.site(site).n1 - lattice.min_n1()
}

/// Parity (0 even, 1 odd) of the number of bonds crossing each vertical gap.
/// Gap `g` lies between columns `g` and `g + 1`; gap `N1 - 1` is the seam.
pub fn gap_parities(lattice: &LatticeSpec, cov: &DimerCovering) -> Vec<u8> {
    gap_counts(lattice, cov).iter().map(|c| (c % 2) as u8).collect()
}

pub fn gap_counts(lattice: &LatticeSpec, cov: &DimerCovering) -> Vec<usize> {
    let n1 = lattice.n1() as i64;
    let mut counts = vec![0usize; n1 as usize];
    for b in &cov.bonds {
        let c = column(lattice, b.a);
        for t in 0..b.dx.abs() {
            let g = if b.dx > 0 { c + t } else { c - 1 - t };
            counts[g.rem_euclid(n1) as usize] += 1;
        }
    }
    counts
}

/// Parity string such as `"eoeoeo"`.
pub fn parity_string(parities: &[u8]) -> String {
    parities.iter().map(|&p| if p == 0 { 'e' } else { 'o' }).collect()
}

/// Number of bonds crossing the seam.
pub fn seam_crossings(lattice: &LatticeSpec, cov: &DimerCovering) -> usize {
    gap_counts(lattice, cov)[lattice.n1() - 1]
}

/// `(-1)^gamma` with `gamma` the number of seam-crossing bonds.
pub fn seam_parity(lattice: &LatticeSpec, cov: &DimerCovering) -> i32 {
    if seam_crossings(lattice, cov) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `<alpha| U_LSM |alpha> = prod_bonds cos(pi dx / L1)` with `dx` the bare
/// label difference `x_a - x_b`.
pub fn ulsm_vb_expectation(lattice: &LatticeSpec, cov: &DimerCovering) -> f64 {
    let n1 = lattice.n1() as f64;
    cov.bonds
        .iter()
        .map(|b| {
            let d = (lattice.site(b.a).n1 - lattice.site(b.b).n1) as f64;
            (PI * d / n1).cos()
        })
        .product()
}

/// Bound on `|<alpha|U|alpha> - (-1)^gamma|` from the folded bond offsets:
/// `0.5 pi^2 sum dx'^2 / L1^2`.
pub fn ulsm_vb_bound(lattice: &LatticeSpec, cov: &DimerCovering) -> f64 {
    let n1 = lattice.n1() as f64;
    0.5 * PI * PI * cov.bonds.iter().map(|b| (b.dx * b.dx) as f64).sum::<f64>() / (n1 * n1)
}
