use cslab::exact::{build_state, cross_zz, pauli_matrix_element, zz_correlator, StateVector, DEFAULT_BUDGET};
use cslab::qec::{
    build_code, build_lattice_code, kl_check, kl_matrix, pattern_map, reduce_product, shift_mismatch,
    singlet_reduced_violation, singlet_reduction_check, y_translation_mismatch, CodePair, COMBOS,
};
use cslab::{Direction, Error, LatticeSpec, Sector, WaveFunctionSpec};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Frozen from an independent arbitrary-precision enumeration (mpmath jtheta).
const OVERLAP_4X2: f64 = 0.2088931871468374;
const ZZ_X_PHI0_4X2: f64 = -0.17333333333333326;
const CROSS_ZZ_X_4X2: f64 = -0.03481553119113956;

fn code(n1: usize, n2: usize) -> CodePair {
    build_lattice_code(LatticeSpec::new(n1, n2).unwrap(), DEFAULT_BUDGET).unwrap()
}

fn state(n1: usize, n2: usize, s: Sector) -> StateVector {
    build_state(&WaveFunctionSpec::new(LatticeSpec::new(n1, n2).unwrap(), s)).unwrap()
}

/// Code with `1_L` mixed with a random vector so it is no longer a singlet.
fn corrupted(n1: usize, n2: usize, weight: f64) -> CodePair {
    let l = LatticeSpec::new(n1, n2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let noise = StateVector::random(l, &mut rng).unwrap();
    let phi1 = state(n1, n2, Sector::One);
    let amps = phi1
        .amplitudes()
        .iter()
        .zip(noise.amplitudes())
        .map(|(a, b)| a + weight * b)
        .collect();
    let mixed = StateVector::from_amplitudes(l, None, amps).unwrap();
    CodePair::from_states(state(n1, n2, Sector::Zero), mixed).unwrap()
}

#[test]
fn code_basis_is_orthonormal() {
    for (n1, n2) in [(4, 2), (4, 3), (4, 4)] {
        let c = code(n1, n2);
        assert!(c.orthonormality_residual().unwrap() <= 1e-12);
        assert!(c.raw_overlap.norm() > 0.1);
    }
    let c = code(4, 2);
    assert!((c.raw_overlap.norm() - OVERLAP_4X2).abs() < 1e-10);
}

#[test]
fn parallel_states_are_degenerate() {
    let spec = WaveFunctionSpec::new(LatticeSpec::new(4, 2).unwrap(), Sector::Zero);
    assert!(matches!(build_code(&spec, &spec, DEFAULT_BUDGET), Err(Error::DegenerateCode { .. })));
    let other = WaveFunctionSpec::new(LatticeSpec::new(4, 3).unwrap(), Sector::One);
    assert!(matches!(build_code(&spec, &other, DEFAULT_BUDGET), Err(Error::LatticeMismatch(..))));
}

#[test]
fn cross_correlator_in_code_basis() {
    let c = code(4, 2);
    let l = *c.lattice();
    let (r0, rx) = (l.origin(), l.neighbor(l.origin(), Direction::X));
    // <0_L|Z Z|1_L> from the raw-state values
    let ov = c.raw_overlap;
    assert!(ov.im.abs() < 1e-12);
    let expect = (CROSS_ZZ_X_4X2 - ov.re * ZZ_X_PHI0_4X2) / (1.0 - ov.re * ov.re).sqrt();
    let got = cross_zz(&c.zero_l, &c.one_l, r0, rx).unwrap();
    assert!((got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-10, "{got} vs {expect}");
    assert!(got.norm() > 1e-3);
}

/// Every KL entry against explicit application of the reduced product.
fn assert_matches_generic(c: &CodePair) {
    let kl = kl_matrix(c).unwrap();
    let n = kl.basis.len();
    for (k, &(i, j)) in COMBOS.iter().enumerate() {
        for a in 0..n {
            for b in 0..n {
                let direct: Complex64 = reduce_product(kl.basis[a], kl.basis[b])
                    .iter()
                    .map(|(coeff, p)| coeff * pauli_matrix_element(c.state(i), p, c.state(j)).unwrap())
                    .sum();
                let v = kl.values[k][a * n + b];
                assert!((v - direct).norm() < 1e-12, "{k} {a} {b}: {v} vs {direct}");
            }
        }
    }
}

#[test]
fn moment_evaluation_matches_explicit_operators() {
    assert_matches_generic(&code(4, 2));
    assert_matches_generic(&corrupted(4, 2, 0.3));
    assert_matches_generic(&code(4, 3));
}

#[test]
fn kl_matrix_is_hermitian_and_swap_invariant() {
    for c in [code(4, 2), code(4, 3), corrupted(4, 2, 0.3)] {
        let r = kl_check(&c).unwrap();
        assert!(r.max_hermiticity_error <= 1e-12);
        assert!(r.max_diag_mismatch >= 0.0 && r.max_offdiag >= 0.0);
        let s = kl_check(&c.swapped()).unwrap();
        assert!((r.max_diag_mismatch - s.max_diag_mismatch).abs() <= 1e-12);
    }
}

#[test]
fn single_pauli_rows_vanish() {
    for c in [code(4, 2), code(4, 3), code(4, 4)] {
        assert!(kl_check(&c).unwrap().max_single_pauli <= 1e-10);
    }
    assert!(kl_check(&corrupted(4, 2, 0.3)).unwrap().max_single_pauli > 1e-3);
}

#[test]
fn singlet_reduction_holds_on_the_code() {
    for (n1, n2) in [(4, 2), (4, 3)] {
        let c = code(n1, n2);
        assert!(singlet_reduction_check(&c).unwrap() <= 1e-10);
        let full = kl_check(&c).unwrap();
        let (diag, off) = singlet_reduced_violation(&c).unwrap();
        assert!((full.max_diag_mismatch - diag).abs() <= 1e-10);
        assert!((full.max_offdiag - off).abs() <= 1e-10);
    }
    assert!(singlet_reduction_check(&corrupted(4, 2, 0.5)).unwrap() > 1e-3);
}

#[test]
fn code_basis_correlators_follow_from_raw_states() {
    let c = code(4, 4);
    let l = *c.lattice();
    let (p0, p1) = (state(4, 4, Sector::Zero), state(4, 4, Sector::One));
    let ov = c.raw_overlap;
    let t2 = 1.0 - ov.norm_sqr();
    for (i, j) in [(0, 1), (0, 4), (0, 5), (3, 10)] {
        let (z00, z11, z01) = (
            cross_zz(&p0, &p0, i, j).unwrap(),
            cross_zz(&p1, &p1, i, j).unwrap(),
            cross_zz(&p0, &p1, i, j).unwrap(),
        );
        // 1_L = (Phi_1 - ov Phi_0) / sqrt(1 - |ov|^2)
        let expect = (z11 - 2.0 * (ov.conj() * z01).re + ov.norm_sqr() * z00) / t2;
        let got = cross_zz(&c.one_l, &c.one_l, i, j).unwrap();
        assert!((got - expect).norm() < 1e-12, "{l} ({i},{j})");
    }
}

#[test]
fn weight_one_violation_across_sizes() {
    let reports: Vec<_> = [(4, 2), (4, 4), (4, 6), (6, 4)]
        .iter()
        .map(|&(n1, n2)| (LatticeSpec::new(n1, n2).unwrap(), kl_check(&code(n1, n2)).unwrap()))
        .collect();

    // raw correlator differences shrink with the width
    let raw: Vec<f64> = reports[..3].iter().map(|(_, r)| r.raw_zz_mismatch).collect();
    assert!(raw[0] > raw[1] && raw[1] > raw[2], "{raw:?}");

    let spread: Vec<f64> = reports[..3].iter().map(|(_, r)| r.max_eigen_spread).collect();
    assert!(spread[0] > spread[1] && spread[1] > spread[2], "{spread:?}");
    for (_, r) in &reports {
        assert!(r.max_eigen_spread >= r.max_diag_mismatch);
    }

    // 4x6 and 6x4 are the same torus rotated by a quarter turn
    assert!((reports[2].1.max_diag_mismatch - reports[3].1.max_diag_mismatch).abs() < 1e-10);

    let (l, r) = &reports[3];
    assert!(r.max_diag_mismatch > 0.02 && r.max_diag_mismatch < 0.17, "{}", r.max_diag_mismatch);
    let arg = &r.diag_argmax;
    assert!(arg.a.starts_with('Z') && arg.b.starts_with('Z'), "{arg:?}");
    let site = |s: &str| s[1..].parse::<usize>().unwrap();
    assert_eq!(l.min_image_distance(site(&arg.a), site(&arg.b)), 1.0);
    assert_eq!(r.zz_by_distance[0].distance, 1.0);
    let by_distance = r.zz_by_distance.iter().map(|d| d.max_diag_mismatch).fold(0.0, f64::max);
    assert!((by_distance - r.max_diag_mismatch).abs() < 1e-12);
    assert!(r.max_single_pauli <= 1e-10);
    assert!(r.max_hermiticity_error <= 1e-12);
}

#[test]
fn pattern_maps_on_odd_width_are_column_shifts() {
    for (n1, n2) in [(4, 3), (6, 3)] {
        let l = LatticeSpec::new(n1, n2).unwrap();
        let (p0, p1) = (state(n1, n2, Sector::Zero), state(n1, n2, Sector::One));
        let map = pattern_map(&p0, &p1).unwrap();
        assert_eq!(map.len(), 2 * l.num_sites());
        assert!(shift_mismatch(&l, &map, 1) <= 1e-8);
        assert!(shift_mismatch(&l, &map, 0) > 1e-2);
        assert!(y_translation_mismatch(&l, &map) <= 1e-8);
        // y-bond correlators agree between the two states
        let r0 = l.origin();
        let ry = l.neighbor(r0, Direction::Y);
        assert!((zz_correlator(&p0, r0, ry).unwrap() - zz_correlator(&p1, r0, ry).unwrap()).abs() <= 1e-8);
    }
}

#[test]
fn pattern_maps_on_even_width_differ() {
    let l = LatticeSpec::new(6, 4).unwrap();
    let map = pattern_map(&state(6, 4, Sector::Zero), &state(6, 4, Sector::One)).unwrap();
    for s in 0..6 {
        assert!(shift_mismatch(&l, &map, s) > 1e-2);
    }
    assert!(y_translation_mismatch(&l, &map) <= 1e-8);
}
