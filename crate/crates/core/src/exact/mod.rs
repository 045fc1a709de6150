//! Exact state vectors over the full half-filled configuration space.

mod dump;
pub mod rank;

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Direction, LatticeSpec};
use crate::pauli::{Pauli, PauliString};
use crate::wavefunction::{ulsm_angle, Sector, WaveFunctionSpec, Wavefunction};

pub use dump::{read_dump, write_dump};
pub use rank::{binomial, next_mask, Ranker};

pub const DEFAULT_BUDGET: u64 = 3_000_000;

/// Ranks per parallel work item; reductions combine per-chunk partial sums
/// in chunk order.
pub const CHUNK: usize = 1 << 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized amplitudes indexed by [`Ranker`] rank of the up-spin bitmask.
#[derive(Clone, Debug)]
pub struct StateVector {
    lattice: LatticeSpec,
    sector: Option<Sector>,
    ranker: Arc<Ranker>,
    amplitudes: Vec<Complex64>,
}

/// `C(M, M/2)` for the lattice.
pub fn enumeration_dimension(lattice: &LatticeSpec) -> u128 {
    binomial(lattice.num_sites() as u64, lattice.num_bosons() as u64)
}

fn check_budget(lattice: &LatticeSpec, budget: u64) -> Result<()> {
    let dimension = enumeration_dimension(lattice);
    if dimension > budget as u128 || lattice.num_sites() > rank::MAX_SITES {
        return Err(Error::BudgetExceeded { dimension, budget });
    }
    Ok(())
}

pub fn build_state(spec: &WaveFunctionSpec) -> Result<StateVector> {
    build_state_with_budget(spec, DEFAULT_BUDGET)
}

pub fn build_state_with_budget(spec: &WaveFunctionSpec, budget: u64) -> Result<StateVector> {
    let lattice = spec.lattice;
    check_budget(&lattice, budget)?;
    let wf = Wavefunction::new(*spec);
    let ranker = Arc::new(Ranker::new(lattice.num_sites(), lattice.num_bosons()));
    let mut amps = vec![ZERO; ranker.dimension()];
    amps.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
        let mut mask = ranker.unrank(c * CHUNK);
        let mut ups = Vec::with_capacity(lattice.num_bosons());
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                mask = next_mask(mask);
            }
            ups.clear();
            let mut m = mask;
            while m != 0 {
                ups.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            *slot = wf.ln_phi(&ups);
        }
    });
    let max = amps
        .par_chunks(CHUNK)
        .map(|c| c.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::InvalidArgument(format!("wave function vanishes identically on {lattice}")));
    }
    amps.par_iter_mut().for_each(|z| {
        *z = if z.re == f64::NEG_INFINITY {
            ZERO
        } else {
            Complex64::from_polar((z.re - max).exp(), z.im)
        };
    });
    let mut sv = StateVector {
        lattice,
        sector: Some(spec.sector),
        ranker,
        amplitudes: amps,
    };
    sv.normalize()?;
    Ok(sv)
}

impl StateVector {
    /// Wraps and normalizes an arbitrary amplitude table.
    pub fn from_amplitudes(lattice: LatticeSpec, sector: Option<Sector>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_budget(&lattice, u64::MAX)?;
        let ranker = Arc::new(Ranker::new(lattice.num_sites(), lattice.num_bosons()));
        if amplitudes.len() != ranker.dimension() {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for {lattice}, got {}",
                ranker.dimension(),
                amplitudes.len()
            )));
        }
        let mut sv = StateVector {
            lattice,
            sector,
            ranker,
            amplitudes,
        };
        sv.normalize()?;
        Ok(sv)
    }

    /// Builds a vector from a function of the up-spin bitmask.
    pub fn from_fn(lattice: LatticeSpec, f: impl Fn(u64) -> Complex64 + Sync) -> Result<Self> {
        check_budget(&lattice, u64::MAX)?;
        let ranker = Ranker::new(lattice.num_sites(), lattice.num_bosons());
        let amps = (0..ranker.dimension()).into_par_iter().map(|r| f(ranker.unrank(r))).collect();
        Self::from_amplitudes(lattice, None, amps)
    }

    /// Random normalized vector with independent uniform components.
    pub fn random<R: Rng + ?Sized>(lattice: LatticeSpec, rng: &mut R) -> Result<Self> {
        check_budget(&lattice, DEFAULT_BUDGET)?;
        let dim = enumeration_dimension(&lattice) as usize;
        let amps = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self::from_amplitudes(lattice, None, amps)
    }

    fn normalize(&mut self) -> Result<()> {
        let n = chunked(self.dimension(), |r| self.amplitudes[r].iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("state has zero or non-finite norm".into()));
        }
        self.amplitudes.par_iter_mut().for_each(|z| *z /= n);
        Ok(())
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn sector(&self) -> Option<Sector> {
        self.sector
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn ranker(&self) -> &Ranker {
        &self.ranker
    }

    /// Amplitude of the configuration with up-spin bitmask `mask`, zero if
    /// the mask is outside the half-filled sector.
    pub fn amplitude(&self, mask: u64) -> Complex64 {
        if mask >> self.lattice.num_sites() != 0 {
            return ZERO;
        }
        self.ranker.try_rank(mask).map_or(ZERO, |r| self.amplitudes[r])
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked(self.dimension(), |r| self.amplitudes[r].iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Deterministic parallel reduction of `f(rank, mask, amplitude)`.
    pub fn fold<T, F>(&self, f: F) -> T
    where
        T: Send + Default + std::ops::Add<Output = T>,
        F: Fn(usize, u64, Complex64) -> T + Sync,
    {
        chunked(self.dimension(), |range| {
            let mut acc = T::default();
            let mut mask = self.ranker.unrank(range.start);
            for r in range.clone() {
                if r > range.start {
                    mask = next_mask(mask);
                }
                acc = acc + f(r, mask, self.amplitudes[r]);
            }
            acc
        })
    }
}

/// Sums `f` over fixed `CHUNK`-sized rank ranges, in rank order.
pub(crate) fn chunked<T, F>(n: usize, f: F) -> T
where
    T: Send + Default + std::ops::Add<Output = T>,
    F: Fn(Range<usize>) -> T + Sync,
{
    let parts: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| f(c * CHUNK..((c + 1) * CHUNK).min(n)))
        .collect();
    parts.into_iter().fold(T::default(), |a, b| a + b)
}

fn same_lattice(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch(a.lattice.to_string(), b.lattice.to_string()));
    }
    Ok(())
}

fn check_site(l: &LatticeSpec, s: usize) -> Result<()> {
    if s >= l.num_sites() {
        return Err(Error::InvalidArgument(format!("site {s} out of range on {l}")));
    }
    Ok(())
}

/// `<a|b>`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_lattice(a, b)?;
    let (x, y) = (&a.amplitudes, &b.amplitudes);
    Ok(chunked(a.dimension(), |r| r.map(|i| x[i].conj() * y[i]).sum::<Complex64>()))
}

/// `|| S^- |sv> ||`, gathered into the sector with one fewer up spin.
pub fn singlet_defect(sv: &StateVector) -> f64 {
    let m = sv.lattice.num_sites();
    let k = sv.lattice.num_bosons();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let lower = Ranker::new(m, k - 1);
    chunked(lower.dimension(), |range| {
        let mut acc = 0.0;
        let mut d = lower.unrank(range.start);
        for r in range.clone() {
            if r > range.start {
                d = next_mask(d);
            }
            let mut free = !d & full;
            let mut s = ZERO;
            while free != 0 {
                let bit = free & free.wrapping_neg();
                s += sv.amplitudes[sv.ranker.rank(d | bit)];
                free ^= bit;
            }
            acc += s.norm_sqr();
        }
        acc
    })
    .sqrt()
}

/// `<S^2> = || S^+ |sv> ||^2` (valid at Sz = 0).
pub fn total_spin(sv: &StateVector) -> f64 {
    let m = sv.lattice.num_sites();
    let k = sv.lattice.num_bosons();
    let upper = Ranker::new(m, k + 1);
    chunked(upper.dimension(), |range| {
        let mut acc = 0.0;
        let mut u = upper.unrank(range.start);
        for r in range.clone() {
            if r > range.start {
                u = next_mask(u);
            }
            let mut occ = u;
            let mut s = ZERO;
            while occ != 0 {
                let bit = occ & occ.wrapping_neg();
                s += sv.amplitudes[sv.ranker.rank(u ^ bit)];
                occ ^= bit;
            }
            acc += s.norm_sqr();
        }
        acc
    })
}

#[inline]
fn zz_sign(mask: u64, i: usize, j: usize) -> f64 {
    if (mask >> i ^ mask >> j) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `<sv| sigma^z_i sigma^z_j |sv>`.
pub fn zz_correlator(sv: &StateVector, i: usize, j: usize) -> Result<f64> {
    Ok(cross_zz(sv, sv, i, j)?.re)
}

/// `<a| sigma^z_i sigma^z_j |b>`.
pub fn cross_zz(a: &StateVector, b: &StateVector, i: usize, j: usize) -> Result<Complex64> {
    same_lattice(a, b)?;
    check_site(&a.lattice, i)?;
    check_site(&a.lattice, j)?;
    if i == j {
        return Err(Error::InvalidArgument("zz correlator needs two distinct sites".into()));
    }
    let x = &a.amplitudes;
    Ok(b.fold(|r, mask, amp| zz_sign(mask, i, j) * x[r].conj() * amp))
}

/// `<a| P |b>` by explicit application of `P` to every basis state of `b`.
/// Images outside the half-filled sector have no overlap with `a`.
pub fn pauli_matrix_element(a: &StateVector, p: &PauliString, b: &StateVector) -> Result<Complex64> {
    same_lattice(a, b)?;
    if let Some(s) = p.max_site() {
        check_site(&a.lattice, s)?;
    }
    Ok(b.fold(|_, mask, amp| {
        let (coeff, image) = p.apply(mask);
        match a.ranker.try_rank(image) {
            Some(r) => a.amplitudes[r].conj() * coeff * amp,
            None => ZERO,
        }
    }))
}

/// `<a| sigma^alpha_r |b>`.
pub fn single_pauli_expectation(a: &StateVector, b: &StateVector, r: usize, alpha: Pauli) -> Result<Complex64> {
    pauli_matrix_element(a, &PauliString::single(r, alpha), b)
}

/// `<a| T_dir |b>`, where `(T b)(T c) = b(c)` and `T` shifts every site by one step.
pub fn translation_overlap(a: &StateVector, b: &StateVector, dir: Direction) -> Result<Complex64> {
    same_lattice(a, b)?;
    let map = a.lattice.translation_map(dir, 1);
    Ok(b.fold(|_, mask, amp| {
        let mut image = 0u64;
        let mut m = mask;
        while m != 0 {
            image |= 1 << map[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        a.amplitudes[a.ranker.rank(image)].conj() * amp
    }))
}

/// `<sv| U_LSM |sv>` from the diagonal configuration phases.
pub fn ulsm_expectation_exact(sv: &StateVector) -> Complex64 {
    let l = sv.lattice;
    let n1_of: Vec<i64> = l.sites().map(|s| s.n1).collect();
    let n1 = l.n1() as i64;
    let phases: Vec<Complex64> = (0..n1).map(|s| Complex64::from_polar(1.0, ulsm_angle(&l, s))).collect();
    sv.fold(|_, mask, amp| {
        let mut sum = 0i64;
        let mut m = mask;
        while m != 0 {
            sum += n1_of[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        phases[sum.rem_euclid(n1) as usize] * amp.norm_sqr()
    })
}

/// `<sv| sigma_i . (sigma_j x sigma_k) |sv>`.
pub fn chiral_order(sv: &StateVector, triangle: (usize, usize, usize)) -> Result<f64> {
    let (i, j, k) = triangle;
    if i == j || j == k || i == k {
        return Err(Error::InvalidArgument("chiral order needs three distinct sites".into()));
    }
    use Pauli::{X, Y, Z};
    let terms = [
        (X, Y, Z, 1.0),
        (Y, Z, X, 1.0),
        (Z, X, Y, 1.0),
        (X, Z, Y, -1.0),
        (Z, Y, X, -1.0),
        (Y, X, Z, -1.0),
    ];
    let mut total = ZERO;
    for (a, b, c, sign) in terms {
        let p = PauliString::new(vec![(i, a), (j, b), (k, c)]);
        total += sign * pauli_matrix_element(sv, &p, sv)?;
    }
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_guard() {
        let l = LatticeSpec::new(8, 6).unwrap();
        let spec = WaveFunctionSpec::new(l, Sector::Zero);
        match build_state(&spec) {
            Err(Error::BudgetExceeded { dimension, budget }) => {
                assert_eq!(dimension, 32_247_603_683_100);
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("unexpected {other:?}"),
        }
        let small = WaveFunctionSpec::new(LatticeSpec::new(4, 3).unwrap(), Sector::Zero);
        assert!(build_state_with_budget(&small, 100).is_err());
        assert!(build_state_with_budget(&small, 924).is_ok());
    }

    #[test]
    fn amplitudes_match_wavefunction_ratios() {
        let l = LatticeSpec::new(4, 3).unwrap();
        let spec = WaveFunctionSpec::new(l, Sector::One);
        let sv = build_state(&spec).unwrap();
        let wf = Wavefunction::new(spec);
        let (a, b) = (sv.ranker.unrank(3), sv.ranker.unrank(500));
        let ups = |m: u64| (0..12).filter(|&s| m >> s & 1 == 1).collect::<Vec<_>>();
        let expect = (wf.ln_phi(&ups(b)) - wf.ln_phi(&ups(a))).exp();
        let got = sv.amplitude(b) / sv.amplitude(a);
        assert!((expect - got).norm() < 1e-10 * expect.norm());
    }
}
