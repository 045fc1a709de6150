use num_complex::Complex64;
use serde::Serialize;

use super::reference::{table1_reference, ReferenceValue, TABLE1};
use super::{run_vmc, Observable, VmcSchedule};
use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticeSpec};
use crate::wavefunction::{Sector, WaveFunctionSpec};

/// Per-run seed derived from a base seed, lattice and sector so distinct
/// runs never share random streams.
pub fn derive_seed(base: u64, lattice: &LatticeSpec, sector: Sector) -> u64 {
    // splitmix64 finalizer
    let mut z = base ^ ((lattice.n1() as u64) << 40 | (lattice.n2() as u64) << 20 | sector.index() as u64);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Entry {
    pub n1: usize,
    pub n2: usize,
    pub sector: Sector,
    pub direction: Direction,
    pub mean: f64,
    pub stderr: f64,
    pub n_blocks: usize,
    pub reference: ReferenceValue,
    pub pull: f64,
    pub acceptance: f64,
    pub seed: u64,
    pub blocking_stable: bool,
    pub chains_consistent: bool,
}

impl Table1Entry {
    pub fn lattice(&self) -> String {
        format!("{}x{}", self.n1, self.n2)
    }
}

pub fn pull(mean: f64, stderr: f64, reference: ReferenceValue) -> f64 {
    (mean - reference.value).abs() / stderr.hypot(reference.error)
}

/// Estimates the nearest-neighbor correlators of the listed lattices (all
/// reference lattices when `lattices` is empty) and compares them with
/// the reference table.
pub fn table1_report(schedule: &VmcSchedule, lattices: &[(usize, usize)]) -> Result<Vec<Table1Entry>> {
    let rows: Vec<_> = if lattices.is_empty() {
        TABLE1.iter().collect()
    } else {
        lattices
            .iter()
            .map(|&(n1, n2)| {
                table1_reference(n1, n2)
                    .ok_or_else(|| Error::InvalidArgument(format!("{n1}x{n2} is not a reference lattice")))
            })
            .collect::<Result<_>>()?
    };
    let mut out = Vec::new();
    for row in rows {
        let lattice = LatticeSpec::new(row.n1, row.n2)?;
        let r0 = lattice.origin();
        let obs = [
            Observable::TranslatedZz(r0, lattice.neighbor(r0, Direction::X)),
            Observable::TranslatedZz(r0, lattice.neighbor(r0, Direction::Y)),
        ];
        for sector in Sector::both() {
            let seed = derive_seed(schedule.seed, &lattice, sector);
            let sched = VmcSchedule { seed, ..*schedule };
            let run = run_vmc(&WaveFunctionSpec::new(lattice, sector), &sched, &obs)?;
            for (k, direction) in [Direction::X, Direction::Y].into_iter().enumerate() {
                let e = &run.estimates[k];
                let reference = row.values[2 * sector.index() + k];
                out.push(Table1Entry {
                    n1: row.n1,
                    n2: row.n2,
                    sector,
                    direction,
                    mean: e.mean.re,
                    stderr: e.stderr_re,
                    n_blocks: e.n_blocks,
                    reference,
                    pull: pull(e.mean.re, e.stderr_re, reference),
                    acceptance: run.mean_acceptance(),
                    seed,
                    blocking_stable: e.blocking_stable,
                    chains_consistent: e.chains_consistent,
                });
            }
        }
    }
    Ok(out)
}

/// Limiting slow-twist eigenvalue of `Phi_n` for large `N1/N2`.
pub fn ulsm_limit(n2: usize, sector: Sector) -> f64 {
    let e = if n2 % 2 == 0 { (n2 + 2) / 2 } else { (n2 + 1) / 2 };
    if (e + sector.index()) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UlsmPoint {
    pub n1: usize,
    pub n2: usize,
    pub inv_n1: f64,
    pub sector: Sector,
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub limit: f64,
    pub acceptance: f64,
    pub seed: u64,
}

pub fn ulsm_scan(n2: usize, n1_list: &[usize], sector: Sector, schedule: &VmcSchedule) -> Result<Vec<UlsmPoint>> {
    let lattices = n1_list
        .iter()
        .map(|&n1| LatticeSpec::new(n1, n2))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for lattice in lattices {
        let seed = derive_seed(schedule.seed, &lattice, sector);
        let sched = VmcSchedule { seed, ..*schedule };
        let run = run_vmc(&WaveFunctionSpec::new(lattice, sector), &sched, &[Observable::Ulsm])?;
        let e = &run.estimates[0];
        out.push(UlsmPoint {
            n1: lattice.n1(),
            n2,
            inv_n1: 1.0 / lattice.n1() as f64,
            sector,
            mean: e.mean,
            stderr_re: e.stderr_re,
            stderr_im: e.stderr_im,
            limit: ulsm_limit(n2, sector),
            acceptance: run.mean_acceptance(),
            seed,
        });
    }
    Ok(out)
}
