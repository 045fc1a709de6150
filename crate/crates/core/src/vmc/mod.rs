//! Metropolis sampling of `|Phi_n|^2` over half-filled configurations.

mod reference;
mod report;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SpinConfiguration;
use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticeSpec};
use crate::pauli::PauliString;
use crate::wavefunction::{ulsm_angle, CenterOfMass, WaveFunctionSpec, Wavefunction};

pub use reference::{table1_reference, ReferenceValue, Table1Row, TABLE1};
pub use report::{derive_seed, pull, table1_report, ulsm_limit, ulsm_scan, Table1Entry, UlsmPoint};

pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3), key = seed_from_u64(seed), stream = chain index";

/// Minimum warmup acceptance rate before a chain is declared stuck.
pub const STUCK_ACCEPTANCE: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VmcSchedule {
    pub n_chains: usize,
    pub sweeps_warmup: usize,
    pub sweeps_measure: usize,
    pub block_size: usize,
    pub seed: u64,
}

impl Default for VmcSchedule {
    fn default() -> Self {
        VmcSchedule {
            n_chains: 4,
            sweeps_warmup: 2000,
            sweeps_measure: 20000,
            block_size: 100,
            seed: 1,
        }
    }
}

impl VmcSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.n_chains < 2 {
            return Err(Error::InvalidSchedule("at least two chains are required".into()));
        }
        if self.block_size == 0 {
            return Err(Error::InvalidSchedule("block size must be positive".into()));
        }
        if self.sweeps_measure % self.block_size != 0 {
            return Err(Error::InvalidSchedule(format!(
                "measurement sweeps {} are not a multiple of block size {}",
                self.sweeps_measure, self.block_size
            )));
        }
        if self.sweeps_measure / self.block_size < 2 {
            return Err(Error::InvalidSchedule("need at least two blocks per chain".into()));
        }
        Ok(())
    }

    pub fn blocks_per_chain(&self) -> usize {
        self.sweeps_measure / self.block_size
    }
}

/// Diagonal observables the sampler can estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observable {
    /// `sigma^z_i sigma^z_j`.
    Zz(usize, usize),
    /// `sigma^z_i sigma^z_j` averaged over the translates of the pair that
    /// leave both states invariant: all y shifts, and x shifts by one column
    /// (even N2) or two columns (odd N2).
    TranslatedZz(usize, usize),
    /// Diagonal phase of the slow-twist operator.
    Ulsm,
    /// Any product of sigma-z operators.
    Pauli(PauliString),
}

impl Observable {
    pub fn label(&self) -> String {
        match self {
            Observable::Zz(i, j) => format!("zz({i},{j})"),
            Observable::TranslatedZz(i, j) => format!("zz_avg({i},{j})"),
            Observable::Ulsm => "ulsm".into(),
            Observable::Pauli(p) => format!("pauli({p})"),
        }
    }
}

/// Pairs summed by [`Observable::TranslatedZz`].
pub fn translated_pairs(lattice: &LatticeSpec, i: usize, j: usize) -> Vec<(usize, usize)> {
    let x_step = if lattice.n2() % 2 == 0 { 1 } else { 2 };
    let mut out = Vec::new();
    for dy in 0..lattice.n2() as i64 {
        for dx in (0..lattice.n1() as i64).step_by(x_step) {
            let shift = |s: usize| lattice.shift(lattice.shift(s, Direction::X, dx), Direction::Y, dy);
            out.push((shift(i), shift(j)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmcEstimate {
    pub mean: Complex64,
    /// `sqrt(stderr_re^2 + stderr_im^2)`.
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n_blocks: usize,
    /// Standard error recomputed with blocks twice as long.
    pub stderr_doubled: f64,
    pub chain_means: Vec<Complex64>,
    /// Doubled-block stderr within 30% of the nominal one.
    pub blocking_stable: bool,
    /// Sample spread of chain means within a factor 3 of `stderr * sqrt(n_chains)`.
    pub chains_consistent: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VmcRun {
    pub spec: WaveFunctionSpec,
    pub schedule: VmcSchedule,
    pub observables: Vec<Observable>,
    pub estimates: Vec<VmcEstimate>,
    /// Measurement-phase acceptance rate per chain.
    pub acceptance: Vec<f64>,
}

impl VmcRun {
    pub fn mean_acceptance(&self) -> f64 {
        self.acceptance.iter().sum::<f64>() / self.acceptance.len() as f64
    }

    pub fn estimate(&self, obs: &Observable) -> Option<&VmcEstimate> {
        self.observables.iter().position(|o| o == obs).map(|k| &self.estimates[k])
    }
}

enum Compiled {
    Pairs(Vec<(usize, usize)>),
    Ulsm(Vec<Complex64>),
    Product(Vec<usize>),
}

fn compile(lattice: &LatticeSpec, obs: &Observable) -> Result<Compiled> {
    let m = lattice.num_sites();
    let check = |s: usize| {
        if s >= m {
            Err(Error::InvalidArgument(format!("site {s} out of range on {lattice}")))
        } else {
            Ok(())
        }
    };
    match obs {
        Observable::Zz(i, j) | Observable::TranslatedZz(i, j) => {
            check(*i)?;
            check(*j)?;
            if i == j {
                return Err(Error::InvalidArgument("zz observable needs two distinct sites".into()));
            }
            Ok(Compiled::Pairs(if matches!(obs, Observable::Zz(..)) {
                vec![(*i, *j)]
            } else {
                translated_pairs(lattice, *i, *j)
            }))
        }
        Observable::Ulsm => Ok(Compiled::Ulsm(
            (0..lattice.n1() as i64)
                .map(|s| Complex64::from_polar(1.0, ulsm_angle(lattice, s)))
                .collect(),
        )),
        Observable::Pauli(p) => {
            if !p.is_diagonal() {
                return Err(Error::NonDiagonalObservable(p.to_string()));
            }
            let sites: Vec<usize> = p.ops().iter().map(|&(s, _)| s).collect();
            for &s in &sites {
                check(s)?;
            }
            Ok(Compiled::Product(sites))
        }
    }
}

struct Chain<'a> {
    wf: &'a Wavefunction,
    ups: Vec<usize>,
    downs: Vec<usize>,
    up: Vec<bool>,
    com: CenterOfMass,
    rng: ChaCha8Rng,
}

impl<'a> Chain<'a> {
    fn start(wf: &'a Wavefunction, seed: u64, chain: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chain as u64);
        let lattice = *wf.lattice();
        for _ in 0..10_000 {
            let c = SpinConfiguration::random(&lattice, &mut rng);
            if wf.ln_phi(c.up_sites()).re.is_finite() {
                let ups = c.up_sites().to_vec();
                let mut up = vec![false; lattice.num_sites()];
                for &s in &ups {
                    up[s] = true;
                }
                let downs = (0..lattice.num_sites()).filter(|&s| !up[s]).collect();
                let com = wf.center_of_mass(&ups);
                return Ok(Chain {
                    wf,
                    ups,
                    downs,
                    up,
                    com,
                    rng,
                });
            }
        }
        Err(Error::StuckChain {
            chain,
            acceptance: 0.0,
        })
    }

    /// One proposed exchange; returns whether it was accepted.
    fn step(&mut self) -> bool {
        let k = self.rng.gen_range(0..self.ups.len());
        let l = self.rng.gen_range(0..self.downs.len());
        let (from, to) = (self.ups[k], self.downs[l]);
        let d = self.wf.log_mag_ratio_move(&self.ups, &self.com, k, to);
        let u: f64 = self.rng.gen();
        if !(d >= 0.0 || u < (2.0 * d).exp()) {
            return false;
        }
        self.com = self.wf.moved(&self.com, from, to);
        self.ups[k] = to;
        self.downs[l] = from;
        self.up[from] = false;
        self.up[to] = true;
        true
    }

    fn sweep(&mut self) -> usize {
        let m = self.up.len();
        (0..m).filter(|_| self.step()).count()
    }

    #[inline]
    fn sz(&self, s: usize) -> f64 {
        if self.up[s] {
            1.0
        } else {
            -1.0
        }
    }

    fn measure(&self, c: &Compiled) -> Complex64 {
        match c {
            Compiled::Pairs(p) => {
                let s: f64 = p.iter().map(|&(i, j)| self.sz(i) * self.sz(j)).sum();
                Complex64::new(s / p.len() as f64, 0.0)
            }
            Compiled::Ulsm(phases) => phases[self.com.sum_n1.rem_euclid(phases.len() as i64) as usize],
            Compiled::Product(sites) => Complex64::new(sites.iter().map(|&s| self.sz(s)).product(), 0.0),
        }
    }
}

struct ChainOutput {
    blocks: Vec<Vec<Complex64>>,
    acceptance: f64,
}

fn run_chain(wf: &Wavefunction, schedule: &VmcSchedule, compiled: &[Compiled], chain: usize) -> Result<ChainOutput> {
    let mut ch = Chain::start(wf, schedule.seed, chain)?;
    let m = wf.lattice().num_sites();
    if schedule.sweeps_warmup > 0 {
        let accepted: usize = (0..schedule.sweeps_warmup).map(|_| ch.sweep()).sum();
        let rate = accepted as f64 / (schedule.sweeps_warmup * m) as f64;
        if rate < STUCK_ACCEPTANCE {
            return Err(Error::StuckChain { chain, acceptance: rate });
        }
    }
    let nb = schedule.blocks_per_chain();
    let mut blocks = vec![Vec::with_capacity(nb); compiled.len()];
    let mut accepted = 0usize;
    for _ in 0..nb {
        let mut sums = vec![Complex64::new(0.0, 0.0); compiled.len()];
        for _ in 0..schedule.block_size {
            accepted += ch.sweep();
            for (acc, c) in sums.iter_mut().zip(compiled) {
                *acc += ch.measure(c);
            }
        }
        for (b, s) in blocks.iter_mut().zip(sums) {
            b.push(s / schedule.block_size as f64);
        }
    }
    Ok(ChainOutput {
        blocks,
        acceptance: accepted as f64 / (schedule.sweeps_measure * m) as f64,
    })
}

fn std_err(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

fn complex_stderr(values: &[Complex64]) -> (f64, f64) {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    (std_err(&re), std_err(&im))
}

/// Combines per-chain block means of one observable.
pub fn combine_blocks(per_chain: &[Vec<Complex64>]) -> VmcEstimate {
    let all: Vec<Complex64> = per_chain.iter().flatten().copied().collect();
    let n = all.len();
    let mean = all.iter().sum::<Complex64>() / n as f64;
    let (se_re, se_im) = complex_stderr(&all);
    let stderr = se_re.hypot(se_im);

    let doubled: Vec<Complex64> = per_chain
        .iter()
        .flat_map(|b| b.chunks_exact(2).map(|p| (p[0] + p[1]) / 2.0))
        .collect();
    let stderr_doubled = if doubled.len() >= 2 {
        let (a, b) = complex_stderr(&doubled);
        a.hypot(b)
    } else {
        f64::NAN
    };
    let blocking_stable = if stderr > 0.0 {
        (stderr_doubled - stderr).abs() <= 0.3 * stderr
    } else {
        stderr_doubled == 0.0
    };

    let chain_means: Vec<Complex64> = per_chain
        .iter()
        .map(|b| b.iter().sum::<Complex64>() / b.len() as f64)
        .collect();
    let spread = {
        let k = chain_means.len() as f64;
        let var = chain_means.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (k - 1.0);
        var.sqrt()
    };
    let expected = stderr * (chain_means.len() as f64).sqrt();
    let chains_consistent = if expected > 0.0 {
        spread <= 3.0 * expected && spread >= expected / 3.0
    } else {
        spread == 0.0
    };

    VmcEstimate {
        mean,
        stderr,
        stderr_re: se_re,
        stderr_im: se_im,
        n_blocks: n,
        stderr_doubled,
        chain_means,
        blocking_stable,
        chains_consistent,
    }
}

pub fn run_vmc(spec: &WaveFunctionSpec, schedule: &VmcSchedule, observables: &[Observable]) -> Result<VmcRun> {
    schedule.validate()?;
    let compiled = observables
        .iter()
        .map(|o| compile(&spec.lattice, o))
        .collect::<Result<Vec<_>>>()?;
    let wf = Wavefunction::new(*spec);
    let outputs = (0..schedule.n_chains)
        .into_par_iter()
        .map(|c| run_chain(&wf, schedule, &compiled, c))
        .collect::<Result<Vec<_>>>()?;
    let estimates = (0..observables.len())
        .map(|k| {
            let per_chain: Vec<Vec<Complex64>> = outputs.iter().map(|o| o.blocks[k].clone()).collect();
            combine_blocks(&per_chain)
        })
        .collect();
    Ok(VmcRun {
        spec: *spec,
        schedule: *schedule,
        observables: observables.to_vec(),
        estimates,
        acceptance: outputs.iter().map(|o| o.acceptance).collect(),
    })
}

/// Replays chain `chain` for `sweeps` sweeps and returns the visited
/// configurations (up-site lists, one per sweep).
pub fn replay_chain(spec: &WaveFunctionSpec, seed: u64, chain: usize, sweeps: usize) -> Result<Vec<Vec<usize>>> {
    let wf = Wavefunction::new(*spec);
    let mut ch = Chain::start(&wf, seed, chain)?;
    Ok((0..sweeps)
        .map(|_| {
            ch.sweep();
            let mut u = ch.ups.clone();
            u.sort_unstable();
            u
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunction::Sector;

    fn short() -> VmcSchedule {
        VmcSchedule {
            n_chains: 2,
            sweeps_warmup: 50,
            sweeps_measure: 200,
            block_size: 20,
            seed: 3,
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(VmcSchedule::default().validate().is_ok());
        let mut s = short();
        s.n_chains = 1;
        assert!(s.validate().is_err());
        let mut s = short();
        s.sweeps_measure = 210;
        assert!(s.validate().is_err());
        let mut s = short();
        s.block_size = 200;
        assert!(s.validate().is_err());
    }

    #[test]
    fn rejects_non_diagonal_observables() {
        let spec = WaveFunctionSpec::new(LatticeSpec::new(4, 2).unwrap(), Sector::Zero);
        let p: PauliString = "X0 X1".parse().unwrap();
        assert!(matches!(
            run_vmc(&spec, &short(), &[Observable::Pauli(p)]),
            Err(Error::NonDiagonalObservable(_))
        ));
        assert!(run_vmc(&spec, &short(), &[Observable::Zz(2, 2)]).is_err());
    }

    #[test]
    fn translated_pairs_cover_equivalent_bonds() {
        let l = LatticeSpec::new(6, 3).unwrap();
        let r0 = l.origin();
        let pairs = translated_pairs(&l, r0, l.neighbor(r0, Direction::X));
        assert_eq!(pairs.len(), 9);
        for (i, j) in pairs {
            let (a, b) = (l.site(i), l.site(j));
            assert_eq!((a.n1 - l.site(r0).n1).rem_euclid(2), 0);
            assert_eq!(l.shift(i, Direction::X, 1), j);
            assert_eq!(a.n2, b.n2);
        }
        let even = LatticeSpec::new(6, 4).unwrap();
        assert_eq!(translated_pairs(&even, 0, 1).len(), 24);
    }

    #[test]
    fn blocking_combination() {
        let per_chain = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)],
            vec![Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)],
        ];
        let e = combine_blocks(&per_chain);
        assert_eq!(e.mean, Complex64::new(2.0, 0.0));
        assert_eq!(e.n_blocks, 4);
        // sample variance 2/3 over 4 blocks
        assert!((e.stderr - (2.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.stderr_im, 0.0);
    }
}
