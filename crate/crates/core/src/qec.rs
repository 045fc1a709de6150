//! Two-dimensional code spanned by the orthogonalized pair `Phi_0`, `Phi_1`
//! and its Knill-Laflamme conditions for weight-1 Pauli errors.

use std::ops::{Add, Range};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{build_state_with_budget, next_mask, overlap, StateVector, CHUNK};
use crate::lattice::{Direction, LatticeSpec};
use crate::pauli::{Pauli, PauliString};
use crate::vmc::{run_vmc, Observable, VmcSchedule};
use crate::wavefunction::{Sector, WaveFunctionSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|<Phi_0|Phi_1>|` above which the pair is treated as parallel.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Orthonormal code basis built by Gram-Schmidt from `Phi_0`, `Phi_1`.
#[derive(Clone, Debug)]
pub struct CodePair {
    pub zero_l: StateVector,
    pub one_l: StateVector,
    /// `<Phi_0|Phi_1>` before orthogonalization.
    pub raw_overlap: Complex64,
}

impl CodePair {
    /// `0_L = a`, `1_L = (b - <a|b> a) / sqrt(1 - |<a|b>|^2)`.
    pub fn from_states(a: StateVector, b: StateVector) -> Result<Self> {
        let ov = overlap(&a, &b)?;
        if ov.norm() > 1.0 - DEGENERACY_TOLERANCE {
            return Err(Error::DegenerateCode { overlap: ov.norm() });
        }
        let amps: Vec<Complex64> = a
            .amplitudes()
            .par_iter()
            .zip(b.amplitudes().par_iter())
            .map(|(x, y)| y - ov * x)
            .collect();
        let one_l = StateVector::from_amplitudes(*a.lattice(), None, amps)?;
        Ok(CodePair {
            zero_l: a,
            one_l,
            raw_overlap: ov,
        })
    }

    /// Same code with the two logical states exchanged.
    pub fn swapped(&self) -> Self {
        CodePair {
            zero_l: self.one_l.clone(),
            one_l: self.zero_l.clone(),
            raw_overlap: self.raw_overlap.conj(),
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        self.zero_l.lattice()
    }

    pub fn state(&self, k: usize) -> &StateVector {
        if k == 0 {
            &self.zero_l
        } else {
            &self.one_l
        }
    }

    /// `max(|<0|0> - 1|, |<1|1> - 1|, |<0|1>|)`.
    pub fn orthonormality_residual(&self) -> Result<f64> {
        let n0 = (overlap(&self.zero_l, &self.zero_l)?.re - 1.0).abs();
        let n1 = (overlap(&self.one_l, &self.one_l)?.re - 1.0).abs();
        let x = overlap(&self.zero_l, &self.one_l)?.norm();
        Ok(n0.max(n1).max(x))
    }
}

pub fn build_code(spec0: &WaveFunctionSpec, spec1: &WaveFunctionSpec, budget: u64) -> Result<CodePair> {
    if spec0.lattice != spec1.lattice {
        return Err(Error::LatticeMismatch(spec0.lattice.to_string(), spec1.lattice.to_string()));
    }
    CodePair::from_states(build_state_with_budget(spec0, budget)?, build_state_with_budget(spec1, budget)?)
}

/// The code of `Phi_0`, `Phi_1` on `lattice`.
pub fn build_lattice_code(lattice: LatticeSpec, budget: u64) -> Result<CodePair> {
    build_code(
        &WaveFunctionSpec::new(lattice, Sector::Zero),
        &WaveFunctionSpec::new(lattice, Sector::One),
        budget,
    )
}

/// Ordered state pairs `(i, j)` of `<i|O|j>`: 00, 11, 01, 10.
pub const COMBOS: [(usize, usize); 4] = [(0, 0), (1, 1), (0, 1), (1, 0)];

/// Moments from which every weight-2 Sz-conserving matrix element follows,
/// one slot per state pair in [`COMBOS`]: with `w = conj(u_c) v_c`, `n_i` the
/// occupation of site `i`, `total = sum w`, `occ[i] = sum w n_i`,
/// `pair[i][j] = sum w n_i n_j` and `hop[i][j] = <u| s+_i s-_j |v>`.
#[derive(Clone, Debug)]
struct Moments {
    m: usize,
    total: [Complex64; 4],
    occ: Vec<[Complex64; 4]>,
    pair: Vec<[Complex64; 4]>,
    hop: Vec<[Complex64; 4]>,
}

impl Moments {
    fn zeros(m: usize, with_hop: bool) -> Self {
        Moments {
            m,
            total: [ZERO; 4],
            occ: vec![[ZERO; 4]; m],
            pair: vec![[ZERO; 4]; m * m],
            hop: vec![[ZERO; 4]; if with_hop { m * m } else { 0 }],
        }
    }
}

impl Default for Moments {
    fn default() -> Self {
        Moments::zeros(0, false)
    }
}

fn add4(a: &mut [Complex64; 4], b: &[Complex64; 4]) {
    for k in 0..4 {
        a[k] += b[k];
    }
}

impl Add for Moments {
    type Output = Moments;

    fn add(mut self, rhs: Moments) -> Moments {
        if self.m == 0 {
            return rhs;
        }
        if rhs.m == 0 {
            return self;
        }
        add4(&mut self.total, &rhs.total);
        for (a, b) in self.occ.iter_mut().zip(&rhs.occ) {
            add4(a, b);
        }
        for (a, b) in self.pair.iter_mut().zip(&rhs.pair) {
            add4(a, b);
        }
        for (a, b) in self.hop.iter_mut().zip(&rhs.hop) {
            add4(a, b);
        }
        self
    }
}

fn same_space(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.lattice() != b.lattice() {
        return Err(Error::LatticeMismatch(a.lattice().to_string(), b.lattice().to_string()));
    }
    Ok(())
}

/// One ordered pass over all configurations, reduced chunk by chunk.
fn moments(a: &StateVector, b: &StateVector, with_hop: bool) -> Result<Moments> {
    same_space(a, b)?;
    let m = a.lattice().num_sites();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let (x, y) = (a.amplitudes(), b.amplitudes());
    let ranker = a.ranker();
    let chunk = |range: Range<usize>| {
        let mut acc = Moments::zeros(m, with_hop);
        let mut mask = ranker.unrank(range.start);
        let mut ups = Vec::with_capacity(m);
        for r in range.clone() {
            if r > range.start {
                mask = next_mask(mask);
            }
            let (b0, b1) = (x[r], y[r]);
            let w = [b0.conj() * b0, b1.conj() * b1, b0.conj() * b1, b1.conj() * b0];
            add4(&mut acc.total, &w);
            ups.clear();
            let mut u = mask;
            while u != 0 {
                ups.push(u.trailing_zeros() as usize);
                u &= u - 1;
            }
            for (k, &i) in ups.iter().enumerate() {
                add4(&mut acc.occ[i], &w);
                for &j in &ups[k + 1..] {
                    add4(&mut acc.pair[i * m + j], &w);
                }
            }
            if !with_hop {
                continue;
            }
            for &j in &ups {
                let mut free = !mask & full;
                while free != 0 {
                    let i = free.trailing_zeros() as usize;
                    free &= free - 1;
                    let rr = ranker.rank(mask ^ (1 << i) ^ (1 << j));
                    let (a0, a1) = (x[rr].conj(), y[rr].conj());
                    let h = &mut acc.hop[i * m + j];
                    h[0] += a0 * b0;
                    h[1] += a1 * b1;
                    h[2] += a0 * b1;
                    h[3] += a1 * b0;
                }
            }
        }
        acc
    };
    let parts: Vec<Moments> = (0..a.dimension().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| chunk(c * CHUNK..((c + 1) * CHUNK).min(a.dimension())))
        .collect();
    let mut out = parts.into_iter().fold(Moments::zeros(m, with_hop), |s, p| s + p);
    // symmetrize the pair table
    for i in 0..m {
        for j in 0..i {
            out.pair[i * m + j] = out.pair[j * m + i];
        }
    }
    Ok(out)
}

impl Moments {
    fn z(&self, c: usize, i: usize) -> Complex64 {
        2.0 * self.occ[i][c] - self.total[c]
    }

    fn zz(&self, c: usize, i: usize, j: usize) -> Complex64 {
        4.0 * self.pair[i * self.m + j][c] - 2.0 * self.occ[i][c] - 2.0 * self.occ[j][c] + self.total[c]
    }

    fn hop(&self, c: usize, i: usize, j: usize) -> Complex64 {
        self.hop[i * self.m + j][c]
    }

    /// `<i|P|j>` for a Pauli string of weight at most two on distinct sites.
    /// Strings with an odd number of flips leave the half-filled sector
    /// and have vanishing matrix elements.
    fn value(&self, c: usize, p: &PauliString) -> Complex64 {
        match *p.ops() {
            [] => self.total[c],
            [(i, Pauli::Z)] => self.z(c, i),
            [_] => ZERO,
            [(i, Pauli::Z), (j, Pauli::Z)] => self.zz(c, i, j),
            [(_, Pauli::Z), _] | [_, (_, Pauli::Z)] => ZERO,
            [(i, a), (j, b)] => {
                let (kij, kji) = (self.hop(c, i, j), self.hop(c, j, i));
                match (a, b) {
                    (Pauli::X, Pauli::X) | (Pauli::Y, Pauli::Y) => kij + kji,
                    (Pauli::X, Pauli::Y) => I * kij - I * kji,
                    _ => -I * kij + I * kji,
                }
            }
            _ => unreachable!("weight-1 products have at most two factors"),
        }
    }
}

/// Linear combination of Pauli strings.
pub type Reduced = Vec<(Complex64, PauliString)>;

/// `sigma^a sigma^b = delta_ab + i eps_abc sigma^c`.
fn same_site(r: usize, a: Pauli, b: Pauli) -> Reduced {
    if a == b {
        return vec![(Complex64::new(1.0, 0.0), PauliString::identity())];
    }
    let (c, sign) = match (a, b) {
        (Pauli::X, Pauli::Y) => (Pauli::Z, 1.0),
        (Pauli::Y, Pauli::Z) => (Pauli::X, 1.0),
        (Pauli::Z, Pauli::X) => (Pauli::Y, 1.0),
        (Pauli::Y, Pauli::X) => (Pauli::Z, -1.0),
        (Pauli::Z, Pauli::Y) => (Pauli::X, -1.0),
        _ => (Pauli::Y, -1.0),
    };
    vec![(Complex64::new(0.0, sign), PauliString::single(r, c))]
}

/// Weight-1 error basis: identity, then `Z_r`, `X_r`, `Y_r` for every site.
pub fn error_basis(lattice: &LatticeSpec) -> Vec<Option<(usize, Pauli)>> {
    let m = lattice.num_sites();
    let mut out = vec![None];
    for p in [Pauli::Z, Pauli::X, Pauli::Y] {
        out.extend((0..m).map(|r| Some((r, p))));
    }
    out
}

pub fn error_label(e: Option<(usize, Pauli)>) -> String {
    match e {
        None => "I".into(),
        Some((r, p)) => PauliString::single(r, p).to_string(),
    }
}

/// `A_a^dagger A_b` reduced to Pauli strings on distinct sites.
pub fn reduce_product(a: Option<(usize, Pauli)>, b: Option<(usize, Pauli)>) -> Reduced {
    let one = Complex64::new(1.0, 0.0);
    match (a, b) {
        (None, None) => vec![(one, PauliString::identity())],
        (None, Some((r, p))) | (Some((r, p)), None) => vec![(one, PauliString::single(r, p))],
        (Some((r, p)), Some((s, q))) if r == s => same_site(r, p, q),
        (Some((r, p)), Some((s, q))) => vec![(one, PauliString::pair(r, p, s, q))],
    }
}

fn reduced_label(t: &Reduced) -> String {
    t.iter()
        .map(|(c, p)| {
            if *c == Complex64::new(1.0, 0.0) {
                p.to_string()
            } else if c.re == 0.0 {
                format!("{}i {p}", if c.im < 0.0 { "-" } else { "" })
            } else {
                format!("{c} {p}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, Serialize)]
pub struct KlEntry {
    pub a: String,
    pub b: String,
    pub product: String,
    pub diag_mismatch: f64,
    pub offdiag: f64,
}

/// `sigma^z sigma^z` mismatches grouped by minimal-image separation.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceBreakdown {
    pub dx: i64,
    pub dy: i64,
    pub distance: f64,
    pub pairs: usize,
    pub max_diag_mismatch: f64,
    pub max_offdiag: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    pub lattice: String,
    pub basis_size: usize,
    pub raw_overlap: Complex64,
    pub max_diag_mismatch: f64,
    pub diag_argmax: KlEntry,
    pub max_offdiag: f64,
    pub offdiag_argmax: KlEntry,
    /// Largest `|<i_L| sigma^a_r |j_L>|` over all sites, components and state pairs.
    pub max_single_pauli: f64,
    /// Largest `|M^(ij)_ab - conj(M^(ji)_ba)|`.
    pub max_hermiticity_error: f64,
    /// Largest `|<Phi_0|Z_r Z_s|Phi_0> - <Phi_1|Z_r Z_s|Phi_1>|` over site
    /// pairs, with `Phi_1` rebuilt from the code basis and the raw overlap.
    pub raw_zz_mismatch: f64,
    pub raw_zz_argmax: (usize, usize),
    /// Largest eigenvalue spread of the 2x2 code-space block of any product,
    /// `sqrt(|M00 - M11|^2 + 4 |M01|^2)`; independent of the code basis.
    pub max_eigen_spread: f64,
    pub zz_by_distance: Vec<DistanceBreakdown>,
    /// Every unordered basis pair, largest violation first.
    pub entries: Vec<KlEntry>,
}

/// Minimal-image `(|dx|, |dy|)` in lattice steps.
fn separation(l: &LatticeSpec, i: usize, j: usize) -> (i64, i64) {
    let (a, b) = (l.site(i), l.site(j));
    let fold = |d: i64, n: i64| {
        let d = d.rem_euclid(n);
        d.min(n - d)
    };
    (fold(b.n1 - a.n1, l.n1() as i64), fold(b.n2 - a.n2, l.n2() as i64))
}

/// KL matrix `M^(ij)_ab = <i_L| A_a^dagger A_b |j_L>` for one state pair.
pub struct KlMatrix {
    pub basis: Vec<Option<(usize, Pauli)>>,
    /// Indexed `[combo][a * n + b]`, combos in [`COMBOS`] order.
    pub values: [Vec<Complex64>; 4],
}

pub fn kl_matrix(code: &CodePair) -> Result<KlMatrix> {
    let mom = moments(&code.zero_l, &code.one_l, true)?;
    let basis = error_basis(code.lattice());
    let n = basis.len();
    let mut values: [Vec<Complex64>; 4] = Default::default();
    for (c, v) in values.iter_mut().enumerate() {
        *v = (0..n * n)
            .map(|k| {
                reduce_product(basis[k / n], basis[k % n])
                    .iter()
                    .map(|(coeff, p)| coeff * mom.value(c, p))
                    .sum()
            })
            .collect();
    }
    Ok(KlMatrix { basis, values })
}

/// Weight-1 Knill-Laflamme analysis of the code.
pub fn kl_check(code: &CodePair) -> Result<ViolationReport> {
    let kl = kl_matrix(code)?;
    let l = *code.lattice();
    let n = kl.basis.len();
    let [v00, v11, v01, v10] = &kl.values;

    let mut entries = Vec::with_capacity(n * (n + 1) / 2);
    let mut herm = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            herm = herm
                .max((v00[a * n + b] - v00[b * n + a].conj()).norm())
                .max((v11[a * n + b] - v11[b * n + a].conj()).norm())
                .max((v01[a * n + b] - v10[b * n + a].conj()).norm());
            if b < a {
                continue;
            }
            let k = a * n + b;
            entries.push(KlEntry {
                a: error_label(kl.basis[a]),
                b: error_label(kl.basis[b]),
                product: reduced_label(&reduce_product(kl.basis[a], kl.basis[b])),
                diag_mismatch: (v00[k] - v11[k]).norm(),
                offdiag: v01[k].norm().max(v10[k].norm()),
            });
        }
    }

    // first entry (basis order) wins ties within rounding
    let argmax = |f: &dyn Fn(&KlEntry) -> f64| {
        let mut best = 0;
        for (k, e) in entries.iter().enumerate() {
            if f(e) > f(&entries[best]) + 1e-12 {
                best = k;
            }
        }
        entries[best].clone()
    };
    let diag_argmax = argmax(&|e| e.diag_mismatch);
    let offdiag_argmax = argmax(&|e| e.offdiag);

    let spread = (0..n * n)
        .map(|k| ((v00[k] - v11[k]).norm_sqr() + 4.0 * v01[k].norm_sqr()).sqrt())
        .fold(0.0, f64::max);

    let mut single = 0.0f64;
    for a in 1..n {
        for v in &kl.values {
            single = single.max(v[a].norm());
        }
    }

    let m = l.num_sites();
    let mut groups: std::collections::BTreeMap<(i64, i64), DistanceBreakdown> = Default::default();
    for i in 0..m {
        for j in (i + 1)..m {
            let (dx, dy) = separation(&l, i, j);
            let (a, b) = (1 + i, 1 + j);
            let k = a * n + b;
            let g = groups.entry((dx, dy)).or_insert(DistanceBreakdown {
                dx,
                dy,
                distance: ((dx * dx + dy * dy) as f64).sqrt(),
                pairs: 0,
                max_diag_mismatch: 0.0,
                max_offdiag: 0.0,
            });
            g.pairs += 1;
            g.max_diag_mismatch = g.max_diag_mismatch.max((v00[k] - v11[k]).norm());
            g.max_offdiag = g.max_offdiag.max(v01[k].norm());
        }
    }
    let ov = code.raw_overlap;
    let t = (1.0 - ov.norm_sqr()).sqrt();
    let mut raw = (0.0f64, (0, 1));
    for i in 0..m {
        for j in (i + 1)..m {
            let k = (1 + i) * n + 1 + j;
            let phi1 = ov.norm_sqr() * v00[k] + t * t * v11[k] + t * ov.conj() * v01[k] + t * ov * v10[k];
            let d = (v00[k] - phi1).norm();
            if d > raw.0 + 1e-12 {
                raw = (d, (i, j));
            }
        }
    }
    let mut zz_by_distance: Vec<_> = groups.into_values().collect();
    zz_by_distance.sort_by(|a, b| a.distance.total_cmp(&b.distance).then((a.dx, a.dy).cmp(&(b.dx, b.dy))));

    entries.sort_by(|x, y| {
        let (p, q) = (x.diag_mismatch.max(x.offdiag), y.diag_mismatch.max(y.offdiag));
        q.total_cmp(&p)
    });

    Ok(ViolationReport {
        lattice: l.to_string(),
        basis_size: n,
        raw_overlap: code.raw_overlap,
        max_diag_mismatch: diag_argmax.diag_mismatch,
        diag_argmax,
        max_offdiag: offdiag_argmax.offdiag,
        offdiag_argmax,
        max_single_pauli: single,
        max_hermiticity_error: herm,
        raw_zz_mismatch: raw.0,
        raw_zz_argmax: raw.1,
        max_eigen_spread: spread,
        zz_by_distance,
        entries,
    })
}

/// Violation predicted from `sigma^z sigma^z` alone, as for a pair of
/// singlets: `(max diag mismatch, max off-diagonal)` over site pairs.
pub fn singlet_reduced_violation(code: &CodePair) -> Result<(f64, f64)> {
    let mom = moments(&code.zero_l, &code.one_l, false)?;
    let m = code.lattice().num_sites();
    let mut diag = 0.0f64;
    let mut off = mom.total[2].norm().max(mom.total[3].norm());
    for i in 0..m {
        for j in (i + 1)..m {
            diag = diag.max((mom.zz(0, i, j) - mom.zz(1, i, j)).norm());
            off = off.max(mom.zz(2, i, j).norm()).max(mom.zz(3, i, j).norm());
        }
    }
    Ok((diag, off))
}

/// Largest difference between the full KL matrix and the one predicted for
/// singlets, where `<i|s^a_r s^b_s|j> = delta_ab <i|Z_r Z_s|j>` and single
/// Paulis vanish. Bounds the difference of both scalar metrics.
pub fn singlet_reduction_check(code: &CodePair) -> Result<f64> {
    let kl = kl_matrix(code)?;
    let mom = moments(&code.zero_l, &code.one_l, false)?;
    let n = kl.basis.len();
    let reduced = |c: usize, p: &PauliString| -> Complex64 {
        match *p.ops() {
            [] => mom.total[c],
            [_] => ZERO,
            [(i, a), (j, b)] if a == b => mom.zz(c, i, j),
            _ => ZERO,
        }
    };
    let mut worst = 0.0f64;
    for c in 0..4 {
        for a in 0..n {
            for b in 0..n {
                let r: Complex64 = reduce_product(kl.basis[a], kl.basis[b])
                    .iter()
                    .map(|(coeff, p)| coeff * reduced(c, p))
                    .sum();
                worst = worst.max((kl.values[c][a * n + b] - r).norm());
            }
        }
    }
    Ok(worst)
}

/// Nearest-neighbor correlator of one bond in both states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BondValue {
    pub site_i: usize,
    pub site_j: usize,
    pub direction: Direction,
    pub value_phi0: f64,
    pub value_phi1: f64,
    pub stderr_phi0: Option<f64>,
    pub stderr_phi1: Option<f64>,
}

/// `<sigma^z_i sigma^z_j>` on every nearest-neighbor bond of two exact states.
pub fn pattern_map(phi0: &StateVector, phi1: &StateVector) -> Result<Vec<BondValue>> {
    let m0 = moments(phi0, phi0, false)?;
    let m1 = moments(phi1, phi1, false)?;
    Ok(phi0
        .lattice()
        .nearest_neighbor_bonds()
        .into_iter()
        .map(|(i, j, direction)| BondValue {
            site_i: i,
            site_j: j,
            direction,
            value_phi0: m0.zz(0, i, j).re,
            value_phi1: m1.zz(0, i, j).re,
            stderr_phi0: None,
            stderr_phi1: None,
        })
        .collect())
}

/// Monte Carlo version of [`pattern_map`] for lattices beyond enumeration.
pub fn pattern_map_vmc(lattice: LatticeSpec, schedule: &VmcSchedule) -> Result<Vec<BondValue>> {
    let bonds = lattice.nearest_neighbor_bonds();
    let obs: Vec<_> = bonds.iter().map(|&(i, j, _)| Observable::Zz(i, j)).collect();
    let mut runs = Vec::new();
    for sector in Sector::both() {
        let seed = crate::vmc::derive_seed(schedule.seed, &lattice, sector);
        let sched = VmcSchedule { seed, ..*schedule };
        runs.push(run_vmc(&WaveFunctionSpec::new(lattice, sector), &sched, &obs)?);
    }
    Ok(bonds
        .iter()
        .enumerate()
        .map(|(k, &(i, j, direction))| BondValue {
            site_i: i,
            site_j: j,
            direction,
            value_phi0: runs[0].estimates[k].mean.re,
            value_phi1: runs[1].estimates[k].mean.re,
            stderr_phi0: Some(runs[0].estimates[k].stderr_re),
            stderr_phi1: Some(runs[1].estimates[k].stderr_re),
        })
        .collect())
}

/// Largest difference between `map0` and `map1` translated by `steps`
/// columns: `map1(T^steps bond)` against `map0(bond)`.
pub fn shift_mismatch(lattice: &LatticeSpec, map: &[BondValue], steps: i64) -> f64 {
    let value1 = |i: usize, j: usize, d: Direction| {
        map.iter()
            .find(|b| b.direction == d && b.site_i == i && b.site_j == j)
            .map(|b| b.value_phi1)
            .expect("every shifted nearest-neighbor bond is in the map")
    };
    map.iter()
        .map(|b| {
            let (i, j) = (
                lattice.shift(b.site_i, Direction::X, steps),
                lattice.shift(b.site_j, Direction::X, steps),
            );
            (b.value_phi0 - value1(i, j, b.direction)).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest change of either map under one y-translation.
pub fn y_translation_mismatch(lattice: &LatticeSpec, map: &[BondValue]) -> f64 {
    let find = |i: usize, j: usize, d: Direction| {
        map.iter()
            .find(|b| b.direction == d && b.site_i == i && b.site_j == j)
            .expect("every shifted nearest-neighbor bond is in the map")
    };
    map.iter()
        .map(|b| {
            let t = find(
                lattice.neighbor(b.site_i, Direction::Y),
                lattice.neighbor(b.site_j, Direction::Y),
                b.direction,
            );
            (b.value_phi0 - t.value_phi0).abs().max((b.value_phi1 - t.value_phi1).abs())
        })
        .fold(0.0, f64::max)
}
