//! Exact-engine invariant suite for one lattice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::SpinConfiguration;
use crate::error::Result;
use crate::exact::{build_state_with_budget, singlet_defect, total_spin, translation_overlap};
use crate::lattice::{Direction, LatticeSpec};
use crate::wavefunction::{Sector, WaveFunctionSpec, Wavefunction};

pub const SINGLET_TOLERANCE: f64 = 1e-8;
pub const TRANSLATION_TOLERANCE: f64 = 1e-8;
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub lattice: String,
    pub sector: Sector,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn new(lattice: &LatticeSpec, sector: Sector, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            lattice: lattice.to_string(),
            sector,
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

/// Singlet, translation and boundary-condition checks for the listed sectors.
/// Translation checks compare `|<Phi_m| T |Phi_n>|` with 1, where `m = n`
/// except for `T_x` on odd `N2`, which exchanges the sectors.
pub fn verify_lattice(lattice: LatticeSpec, sectors: &[Sector], budget: u64) -> Result<Vec<Check>> {
    let states = [
        build_state_with_budget(&WaveFunctionSpec::new(lattice, Sector::Zero), budget)?,
        build_state_with_budget(&WaveFunctionSpec::new(lattice, Sector::One), budget)?,
    ];
    let mut out = Vec::new();
    for &s in sectors {
        let n = s.index();
        let sv = &states[n];
        out.push(Check::new(&lattice, s, "singlet_defect", singlet_defect(sv), SINGLET_TOLERANCE));
        out.push(Check::new(&lattice, s, "total_spin", total_spin(sv), SINGLET_TOLERANCE));

        let ty = translation_overlap(sv, sv, Direction::Y)?.norm();
        out.push(Check::new(&lattice, s, "T_y fixes", (ty - 1.0).abs(), TRANSLATION_TOLERANCE));
        let (name, target) = if lattice.n2() % 2 == 0 {
            ("T_x fixes", n)
        } else {
            ("T_x swaps", 1 - n)
        };
        let tx = translation_overlap(&states[target], sv, Direction::X)?.norm();
        out.push(Check::new(&lattice, s, name, (tx - 1.0).abs(), TRANSLATION_TOLERANCE));

        let wf = Wavefunction::new(WaveFunctionSpec::new(lattice, s));
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0DA);
        let mut worst = 0.0f64;
        for _ in 0..16 {
            let c = SpinConfiguration::random(&lattice, &mut rng);
            if let Some(r) = wf.boundary_residual(c.up_sites()) {
                worst = worst.max(r);
            }
        }
        out.push(Check::new(&lattice, s, "boundary_conditions", worst, BOUNDARY_TOLERANCE));
    }
    Ok(out)
}
