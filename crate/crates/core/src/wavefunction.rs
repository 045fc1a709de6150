//! Torus Laughlin boson wave functions restricted to lattice sites, and the
//! chiral spin liquid states obtained from them by undoing the sublattice
//! rotation.
//!
//! For up spins at `z_i = x_i + i y_i`,
//!
//! ```text
//! Psi_n = F_n(Z) prod_{i<j} theta_1(pi (z_i - z_j) / L1 | tau)^2 prod_i exp(-y_i^2 / 2)
//! F_n(Z) = theta_1(pi (Z - W_n) / L1 | tau)^2,   Z = sum_i z_i,   tau = i L2 / L1
//! Phi_n = prod_i (-1)^{n1_i + n2_i} Psi_n
//! ```
//!
//! Amplitudes are only ever handled as complex logarithms; the absolute
//! normalization is never formed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SpinConfiguration;
use crate::lattice::LatticeSpec;
use crate::theta::{ln_theta1, LogAmplitude};

/// Topological sector label `n` of `Phi_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Zero,
    One,
}

impl Sector {
    pub fn index(self) -> usize {
        match self {
            Sector::Zero => 0,
            Sector::One => 1,
        }
    }

    pub fn from_index(n: usize) -> Option<Sector> {
        match n {
            0 => Some(Sector::Zero),
            1 => Some(Sector::One),
            _ => None,
        }
    }

    pub fn both() -> [Sector; 2] {
        [Sector::Zero, Sector::One]
    }
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Center-of-mass offset `W_n`: `n L1 / 2` for even `N2`, `(2n+1) L1 / 4` for odd `N2`.
pub fn com_offset(n2: usize, sector: Sector, l1: f64) -> f64 {
    let n = sector.index() as f64;
    if n2 % 2 == 0 {
        n * l1 / 2.0
    } else {
        (2.0 * n + 1.0) * l1 / 4.0
    }
}

/// `W_n` in units of `b/4`, always an integer because N1 is even.
fn com_offset_quarters(lattice: &LatticeSpec, sector: Sector) -> i64 {
    let n1 = lattice.n1() as i64;
    let n = sector.index() as i64;
    if lattice.n2() % 2 == 0 {
        2 * n * n1
    } else {
        (2 * n + 1) * n1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveFunctionSpec {
    pub lattice: LatticeSpec,
    pub sector: Sector,
    /// Center-of-mass offset `W_n`.
    pub w: f64,
    /// Toroidal fluxes; `phi1 = 0` always, `phi2 = 0` (N2 even) or `pi` (N2 odd).
    pub phi1: f64,
    pub phi2: f64,
}

impl WaveFunctionSpec {
    pub fn new(lattice: LatticeSpec, sector: Sector) -> Self {
        let phi2 = if lattice.n2() % 2 == 0 { 0.0 } else { PI };
        WaveFunctionSpec {
            lattice,
            sector,
            w: com_offset(lattice.n2(), sector, lattice.l1()),
            phi1: 0.0,
            phi2,
        }
    }
}

/// Largest center-of-mass table kept in memory; beyond it `F_n` is evaluated
/// on demand.
const COM_TABLE_LIMIT: usize = 1 << 22;

/// Evaluator for `Psi_n` / `Phi_n` with the pair and center-of-mass theta
/// factors tabulated over lattice sites.
#[derive(Clone, Debug)]
pub struct Wavefunction {
    spec: WaveFunctionSpec,
    m: usize,
    /// `ln theta_1(pi (z_a - z_b) / L1)^2`, row-major `a * M + b`.
    pair: Vec<Complex64>,
    n1_of: Vec<i64>,
    n2_of: Vec<i64>,
    com: Option<ComTable>,
}

#[derive(Clone, Debug)]
struct ComTable {
    min1: i64,
    min2: i64,
    width: usize,
    values: Vec<Complex64>,
}

/// Running sums over up spins that determine the configuration-dependent
/// non-pair factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CenterOfMass {
    pub sum_n1: i64,
    pub sum_n2: i64,
    pub sum_n2_sq: i64,
}

impl Wavefunction {
    pub fn new(spec: WaveFunctionSpec) -> Self {
        let lattice = spec.lattice;
        let m = lattice.num_sites();
        let t = lattice.tau_im();
        let sites: Vec<_> = lattice.sites().collect();
        let mut pair = vec![Complex64::new(f64::NEG_INFINITY, 0.0); m * m];
        let scale = PI / lattice.n1() as f64;
        for a in 0..m {
            for b in (a + 1)..m {
                let u = Complex64::new(
                    (sites[a].n1 - sites[b].n1) as f64 * scale,
                    (sites[a].n2 - sites[b].n2) as f64 * scale,
                );
                let v = 2.0 * ln_theta1(u, t);
                pair[a * m + b] = v;
                pair[b * m + a] = v;
            }
        }
        let mut wf = Wavefunction {
            spec,
            m,
            pair,
            n1_of: sites.iter().map(|s| s.n1).collect(),
            n2_of: sites.iter().map(|s| s.n2).collect(),
            com: None,
        };
        wf.com = wf.build_com_table();
        wf
    }

    fn build_com_table(&self) -> Option<ComTable> {
        let l = &self.spec.lattice;
        let n = l.num_bosons() as i64;
        let min1 = n * l.min_n1();
        let max1 = n * l.max_n1();
        let min2 = n;
        let max2 = n * l.n2() as i64;
        let width = (max1 - min1 + 1) as usize;
        let height = (max2 - min2 + 1) as usize;
        if width * height > COM_TABLE_LIMIT {
            return None;
        }
        let mut values = Vec::with_capacity(width * height);
        for s2 in min2..=max2 {
            for s1 in min1..=max1 {
                values.push(self.ln_com_direct(s1, s2));
            }
        }
        Some(ComTable {
            min1,
            min2,
            width,
            values,
        })
    }

    pub fn spec(&self) -> &WaveFunctionSpec {
        &self.spec
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.spec.lattice
    }

    #[inline]
    pub fn pair_ln(&self, a: usize, b: usize) -> Complex64 {
        self.pair[a * self.m + b]
    }

    /// `ln F_n(Z)` for `Z = b (sum_n1 + i sum_n2)`.
    fn ln_com_direct(&self, sum_n1: i64, sum_n2: i64) -> Complex64 {
        let l = &self.spec.lattice;
        let n1 = l.n1() as f64;
        // pi (Z - W) / L1 with W = (quarters / 4) b
        let re = PI * (4 * sum_n1 - com_offset_quarters(l, self.spec.sector)) as f64 / (4.0 * n1);
        let im = PI * sum_n2 as f64 / n1;
        2.0 * ln_theta1(Complex64::new(re, im), l.tau_im())
    }

    #[inline]
    pub fn ln_com(&self, sum_n1: i64, sum_n2: i64) -> Complex64 {
        match &self.com {
            Some(t) => {
                let i = (sum_n1 - t.min1) as usize;
                let j = (sum_n2 - t.min2) as usize;
                t.values[j * t.width + i]
            }
            None => self.ln_com_direct(sum_n1, sum_n2),
        }
    }

    pub fn center_of_mass(&self, ups: &[usize]) -> CenterOfMass {
        let mut c = CenterOfMass::default();
        for &s in ups {
            c.sum_n1 += self.n1_of[s];
            c.sum_n2 += self.n2_of[s];
            c.sum_n2_sq += self.n2_of[s] * self.n2_of[s];
        }
        c
    }

    fn ln_non_pair(&self, c: &CenterOfMass, sublattice: bool) -> Complex64 {
        let mut v = self.ln_com(c.sum_n1, c.sum_n2) + Complex64::new(-PI * c.sum_n2_sq as f64, 0.0);
        if sublattice && (c.sum_n1 + c.sum_n2).rem_euclid(2) == 1 {
            v += Complex64::new(0.0, PI);
        }
        v
    }

    /// Unreduced `ln Psi_n` over up-spin sites `ups` (distinct indices).
    pub fn ln_psi(&self, ups: &[usize]) -> Complex64 {
        debug_assert!(distinct(ups), "coincident bosons");
        self.ln_pairs(ups) + self.ln_non_pair(&self.center_of_mass(ups), false)
    }

    /// Unreduced `ln Phi_n` over up-spin sites `ups` (distinct indices).
    pub fn ln_phi(&self, ups: &[usize]) -> Complex64 {
        debug_assert!(distinct(ups), "coincident bosons");
        self.ln_pairs(ups) + self.ln_non_pair(&self.center_of_mass(ups), true)
    }

    fn ln_pairs(&self, ups: &[usize]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &a) in ups.iter().enumerate() {
            let row = &self.pair[a * self.m..(a + 1) * self.m];
            for &b in &ups[k + 1..] {
                acc += row[b];
            }
        }
        acc
    }

    pub fn log_psi(&self, c: &SpinConfiguration) -> LogAmplitude {
        LogAmplitude::from_ln(self.ln_psi(c.up_sites()))
    }

    pub fn log_phi(&self, c: &SpinConfiguration) -> LogAmplitude {
        LogAmplitude::from_ln(self.ln_phi(c.up_sites()))
    }

    /// `ln Phi(c') - ln Phi(c)` for `c'` obtained by moving the up spin
    /// `ups[k]` to the empty site `to`. `com` must be the center of mass of
    /// `ups`. Costs O(N) table lookups.
    pub fn ln_ratio_move(&self, ups: &[usize], com: &CenterOfMass, k: usize, to: usize) -> Complex64 {
        let from = ups[k];
        let row_from = &self.pair[from * self.m..(from + 1) * self.m];
        let row_to = &self.pair[to * self.m..(to + 1) * self.m];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &s) in ups.iter().enumerate() {
            if j != k {
                acc += row_to[s] - row_from[s];
            }
        }
        let moved = self.moved(com, from, to);
        acc + self.ln_non_pair(&moved, true) - self.ln_non_pair(com, true)
    }

    /// Real part of [`Wavefunction::ln_ratio_move`]: `ln |Phi(c') / Phi(c)|`.
    pub fn log_mag_ratio_move(&self, ups: &[usize], com: &CenterOfMass, k: usize, to: usize) -> f64 {
        let from = ups[k];
        let row_from = &self.pair[from * self.m..(from + 1) * self.m];
        let row_to = &self.pair[to * self.m..(to + 1) * self.m];
        let mut acc = 0.0;
        for (j, &s) in ups.iter().enumerate() {
            if j != k {
                acc += row_to[s].re - row_from[s].re;
            }
        }
        let moved = self.moved(com, from, to);
        acc + self.ln_com(moved.sum_n1, moved.sum_n2).re
            - self.ln_com(com.sum_n1, com.sum_n2).re
            - PI * (moved.sum_n2_sq - com.sum_n2_sq) as f64
    }

    pub fn moved(&self, com: &CenterOfMass, from: usize, to: usize) -> CenterOfMass {
        CenterOfMass {
            sum_n1: com.sum_n1 - self.n1_of[from] + self.n1_of[to],
            sum_n2: com.sum_n2 - self.n2_of[from] + self.n2_of[to],
            sum_n2_sq: com.sum_n2_sq - self.n2_of[from] * self.n2_of[from] + self.n2_of[to] * self.n2_of[to],
        }
    }

    /// `ln Psi_n` at arbitrary complex boson positions, evaluated directly
    /// from theta functions without the lattice tables.
    pub fn ln_psi_at(&self, positions: &[Complex64]) -> Complex64 {
        let l = &self.spec.lattice;
        let t = l.tau_im();
        let l1 = l.l1();
        let z_sum: Complex64 = positions.iter().sum();
        let mut acc = 2.0 * ln_theta1(PI * (z_sum - self.spec.w) / l1, t);
        for (i, &zi) in positions.iter().enumerate() {
            for &zj in &positions[i + 1..] {
                acc += 2.0 * ln_theta1(PI * (zi - zj) / l1, t);
            }
            acc -= zi.im * zi.im / 2.0;
        }
        acc
    }

    /// Largest deviation of `Psi(z_k + L1) / Psi` and `Psi(z_k + i L2) / Psi`
    /// from the boundary phases `e^{i phi1}` and `e^{i (phi2 - L2 x_k)}`,
    /// moving each boson of `ups` in turn. `None` on a node of `Psi`.
    pub fn boundary_residual(&self, ups: &[usize]) -> Option<f64> {
        let l = &self.spec.lattice;
        let z: Vec<Complex64> = ups
            .iter()
            .map(|&s| {
                let site = l.site(s);
                Complex64::new(site.x(), site.y())
            })
            .collect();
        let base = self.ln_psi_at(&z);
        if base.re == f64::NEG_INFINITY {
            return None;
        }
        let mut worst = 0.0f64;
        for k in 0..z.len() {
            let mut zx = z.clone();
            zx[k] += l.l1();
            let rx = (self.ln_psi_at(&zx) - base).exp();
            worst = worst.max((rx - Complex64::from_polar(1.0, self.spec.phi1)).norm());

            let mut zy = z.clone();
            zy[k] += Complex64::new(0.0, l.l2());
            let ry = (self.ln_psi_at(&zy) - base).exp();
            worst = worst.max((ry - Complex64::from_polar(1.0, self.spec.phi2 - l.l2() * z[k].re)).norm());
        }
        Some(worst)
    }
}

fn distinct(ups: &[usize]) -> bool {
    let mut v = ups.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

pub fn log_psi(spec: &WaveFunctionSpec, c: &SpinConfiguration) -> LogAmplitude {
    Wavefunction::new(*spec).log_psi(c)
}

pub fn log_phi(spec: &WaveFunctionSpec, c: &SpinConfiguration) -> LogAmplitude {
    Wavefunction::new(*spec).log_phi(c)
}

/// Phase angle in `[0, 2 pi)` of the diagonal slow-twist operator on a
/// configuration with up-spin label sum `sum_n1`:
/// `(-i)^{N2} exp(i 2 pi X / L1)`, `X = b sum_n1`.
pub fn ulsm_angle(lattice: &LatticeSpec, sum_n1: i64) -> f64 {
    let n1 = lattice.n1() as i64;
    let n2 = lattice.n2() as i64;
    let k = (4 * sum_n1 - n1 * n2).rem_euclid(4 * n1);
    PI * k as f64 / (2.0 * n1 as f64)
}

/// Eigenvalue of the slow-twist operator `U_LSM` on configuration `c`.
pub fn ulsm_config_phase(lattice: &LatticeSpec, c: &SpinConfiguration) -> Complex64 {
    let sum_n1: i64 = c.up_sites().iter().map(|&s| lattice.site(s).n1).sum();
    Complex64::from_polar(1.0, ulsm_angle(lattice, sum_n1))
}
