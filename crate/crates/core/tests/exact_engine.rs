use cslab::exact::{
    build_state, chiral_order, cross_zz, overlap, pauli_matrix_element, read_dump, single_pauli_expectation,
    singlet_defect, total_spin, translation_overlap, ulsm_expectation_exact, write_dump, zz_correlator, StateVector,
};
use cslab::{Direction, Error, LatticeSpec, Pauli, PauliString, Sector, WaveFunctionSpec};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice(n1: usize, n2: usize) -> LatticeSpec {
    LatticeSpec::new(n1, n2).unwrap()
}

fn state(n1: usize, n2: usize, s: Sector) -> StateVector {
    build_state(&WaveFunctionSpec::new(lattice(n1, n2), s)).unwrap()
}

fn bonds(l: &LatticeSpec) -> (usize, usize, usize) {
    let r0 = l.origin();
    (r0, l.neighbor(r0, Direction::X), l.neighbor(r0, Direction::Y))
}

// Frozen from an independent arbitrary-precision enumeration (mpmath jtheta).
const ORACLE_4X2: [(f64, f64); 2] = [(-0.17333333333333326, -0.9458816732927238), (-0.4545454545454546, 0.2727272727272728)];
const ORACLE_4X3: [(f64, f64); 2] = [(-0.23053733878036894, -0.2413452158302246), (-0.3007516486671498, -0.24134521583022464)];
const ORACLE_4X4: [(f64, f64); 2] = [(-0.24688654925694134, -0.24688654925694103), (-0.23147083448983732, -0.37714973569678106)];
const OVERLAP_4X2: f64 = 0.2088931871468374;
const OVERLAP_4X3: f64 = 0.37340017574120976;
const OVERLAP_4X4: f64 = 0.6395350168547134;
const CROSS_ZZ_X_4X2: f64 = -0.03481553119113956;
const CHIRAL_4X4: [f64; 2] = [0.6050011827126742, 0.5278740986850947];

#[test]
fn dimensions() {
    assert_eq!(state(4, 2, Sector::Zero).dimension(), 70);
    assert_eq!(state(6, 3, Sector::Zero).dimension(), 48620);
}

#[test]
fn correlators_match_oracle() {
    for (n1, n2, oracle) in [(4, 2, ORACLE_4X2), (4, 3, ORACLE_4X3), (4, 4, ORACLE_4X4)] {
        let l = lattice(n1, n2);
        let (r0, rx, ry) = bonds(&l);
        for s in Sector::both() {
            let sv = state(n1, n2, s);
            let (ex, ey) = oracle[s.index()];
            let zx = zz_correlator(&sv, r0, rx).unwrap();
            let zy = zz_correlator(&sv, r0, ry).unwrap();
            assert!((zx - ex).abs() < 1e-10, "{l} {s} x: {zx} vs {ex}");
            assert!((zy - ey).abs() < 1e-10, "{l} {s} y: {zy} vs {ey}");
        }
    }
}

#[test]
fn correlators_match_published_table() {
    let l = lattice(4, 2);
    let (r0, _, ry) = bonds(&l);
    let y0 = zz_correlator(&state(4, 2, Sector::Zero), r0, ry).unwrap();
    let y1 = zz_correlator(&state(4, 2, Sector::One), r0, ry).unwrap();
    assert!((y0 + 0.946).abs() <= 0.006, "{y0}");
    assert!((y1 - 0.273).abs() <= 0.015, "{y1}");
}

#[test]
fn zz_rejects_coincident_sites() {
    let sv = state(4, 2, Sector::Zero);
    assert!(matches!(zz_correlator(&sv, 3, 3), Err(Error::InvalidArgument(_))));
}

#[test]
fn overlaps() {
    for (n1, n2, expect) in [(4, 2, OVERLAP_4X2), (4, 3, OVERLAP_4X3), (4, 4, OVERLAP_4X4)] {
        let a = state(n1, n2, Sector::Zero);
        let b = state(n1, n2, Sector::One);
        assert!((overlap(&a, &a).unwrap() - 1.0).norm() < 1e-12);
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        assert!((ab.norm() - expect).abs() < 1e-10, "{n1}x{n2}: {}", ab.norm());
    }
    assert!(matches!(
        overlap(&state(4, 2, Sector::Zero), &state(4, 3, Sector::Zero)),
        Err(Error::LatticeMismatch(..))
    ));
}

#[test]
fn overlap_decreases_with_n1_at_two_rows() {
    let values: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&n1| overlap(&state(n1, 2, Sector::Zero), &state(n1, 2, Sector::One)).unwrap().norm())
        .collect();
    assert!(values[0] > values[1] && values[1] > values[2], "{values:?}");
}

#[test]
fn singlets_on_small_lattices() {
    for (n1, n2) in [(4, 2), (6, 2), (8, 2), (4, 3), (6, 3), (4, 4)] {
        for s in Sector::both() {
            let sv = state(n1, n2, s);
            let d = singlet_defect(&sv);
            let s2 = total_spin(&sv);
            assert!(d <= 1e-8, "{n1}x{n2} {s}: defect {d}");
            assert!(s2 <= 1e-8, "{n1}x{n2} {s}: S^2 {s2}");
        }
    }
}

#[test]
fn singlets_on_largest_enumerable_lattices() {
    for (n1, n2) in [(6, 4), (8, 3), (4, 6)] {
        let sv = state(n1, n2, Sector::One);
        let d = singlet_defect(&sv);
        assert!(d <= 1e-8, "{n1}x{n2}: defect {d}");
    }
}

#[test]
fn random_vector_is_not_a_singlet() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sv = StateVector::random(lattice(4, 3), &mut rng).unwrap();
    assert!(singlet_defect(&sv) > 0.5);
    assert!(total_spin(&sv) > 0.5);
}

#[test]
fn total_spin_reference_states() {
    // equal superposition of all Sz=0 configurations has S = M/2
    let l = lattice(4, 3);
    let dicke = StateVector::from_fn(l, |_| Complex64::new(1.0, 0.0)).unwrap();
    let s = 6.0;
    assert!((total_spin(&dicke) - s * (s + 1.0)).abs() < 1e-9);

    // product of two-site singlets on horizontal pairs
    let pairs: Vec<(usize, usize)> = (0..6).map(|k| (2 * k, 2 * k + 1)).collect();
    let vb = StateVector::from_fn(l, |mask| {
        let mut amp = 1.0;
        for &(a, b) in &pairs {
            match (mask >> a & 1, mask >> b & 1) {
                (1, 0) => {}
                (0, 1) => amp = -amp,
                _ => return Complex64::new(0.0, 0.0),
            }
        }
        Complex64::new(amp, 0.0)
    })
    .unwrap();
    assert!(total_spin(&vb) <= 1e-12);
    assert!(singlet_defect(&vb) <= 1e-12);
}

#[test]
fn single_site_expectations_vanish() {
    for (n1, n2) in [(4, 2), (4, 3)] {
        let a = state(n1, n2, Sector::Zero);
        let b = state(n1, n2, Sector::One);
        for r in 0..a.lattice().num_sites() {
            for sv in [&a, &b] {
                assert!(single_pauli_expectation(sv, sv, r, Pauli::Z).unwrap().norm() < 1e-10);
                assert_eq!(single_pauli_expectation(sv, sv, r, Pauli::X).unwrap(), Complex64::new(0.0, 0.0));
                assert_eq!(single_pauli_expectation(sv, sv, r, Pauli::Y).unwrap(), Complex64::new(0.0, 0.0));
            }
            assert!(single_pauli_expectation(&a, &b, r, Pauli::Z).unwrap().norm() < 1e-10);
        }
    }
}

#[test]
fn cross_zz_properties() {
    let l = lattice(4, 2);
    let (r0, rx, _) = bonds(&l);
    let a = state(4, 2, Sector::Zero);
    let b = state(4, 2, Sector::One);
    let ab = cross_zz(&a, &b, r0, rx).unwrap();
    let ba = cross_zz(&b, &a, r0, rx).unwrap();
    assert!((ab - ba.conj()).norm() < 1e-14);
    assert!((ab.re - CROSS_ZZ_X_4X2).abs() < 1e-10 && ab.im.abs() < 1e-10, "{ab}");
    assert!((cross_zz(&a, &a, r0, rx).unwrap().re - zz_correlator(&a, r0, rx).unwrap()).abs() < 1e-15);
}

#[test]
fn two_site_pauli_correlators_are_isotropic() {
    for (n1, n2) in [(4, 2), (4, 3)] {
        let l = lattice(n1, n2);
        let m = l.num_sites();
        let pairs = [(0, 1), (0, n1), (1, m - 1), (2, m / 2 + 1)];
        for s in Sector::both() {
            let sv = state(n1, n2, s);
            for &(i, j) in &pairs {
                let zz = zz_correlator(&sv, i, j).unwrap();
                for a in Pauli::ALL {
                    for b in Pauli::ALL {
                        let v = pauli_matrix_element(&sv, &PauliString::pair(i, a, j, b), &sv).unwrap();
                        let expect = if a == b { zz } else { 0.0 };
                        assert!((v - expect).norm() < 1e-10, "{l} {s} {a:?}{i} {b:?}{j}: {v} vs {expect}");
                    }
                }
            }
        }
    }
}

#[test]
fn translation_table() {
    let odd = (state(4, 3, Sector::Zero), state(4, 3, Sector::One));
    assert!((translation_overlap(&odd.1, &odd.0, Direction::X).unwrap().norm() - 1.0).abs() < 1e-8);
    let even = state(4, 4, Sector::Zero);
    assert!((translation_overlap(&even, &even, Direction::X).unwrap().norm() - 1.0).abs() < 1e-8);
    for (n1, n2) in [(4, 2), (4, 3), (4, 4), (6, 3)] {
        for s in Sector::both() {
            let sv = state(n1, n2, s);
            let t = translation_overlap(&sv, &sv, Direction::Y).unwrap();
            assert!((t.norm() - 1.0).abs() < 1e-8, "{n1}x{n2} {s}: {t}");
        }
    }
}

#[test]
fn ulsm_exact() {
    for (n1, n2) in [(4, 2), (4, 3), (6, 3), (4, 4)] {
        for s in Sector::both() {
            assert!(ulsm_expectation_exact(&state(n1, n2, s)).norm() <= 1.0 + 1e-12);
        }
    }
    let u0 = ulsm_expectation_exact(&state(8, 3, Sector::Zero));
    let u1 = ulsm_expectation_exact(&state(8, 3, Sector::One));
    assert!(u0.re > 0.0 && u1.re < 0.0, "{u0} {u1}");
    let e0 = ulsm_expectation_exact(&state(6, 4, Sector::Zero));
    assert!(e0.re < 0.0, "{e0}");
}

#[test]
fn chiral_order_on_elementary_triangle() {
    let l = lattice(4, 4);
    let (r0, rx, ry) = bonds(&l);
    for s in Sector::both() {
        let sv = state(4, 4, s);
        let c = chiral_order(&sv, (r0, rx, ry)).unwrap();
        assert!((c - CHIRAL_4X4[s.index()]).abs() < 1e-10, "{s}: {c}");
        let rev = chiral_order(&sv, (r0, ry, rx)).unwrap();
        assert!((c + rev).abs() < 1e-12);
    }
    assert!(chiral_order(&state(4, 4, Sector::Zero), (r0, r0, ry)).is_err());
}

#[test]
fn dump_round_trip_and_determinism() {
    let sv = state(4, 3, Sector::One);
    let again = state(4, 3, Sector::One);
    assert!(sv.amplitudes().iter().zip(again.amplitudes()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    let mut buf = Vec::new();
    write_dump(&sv, &mut buf).unwrap();
    assert_eq!(buf.len(), 20 + 16 * 924);
    assert_eq!(&buf[..4], &4u32.to_le_bytes());
    let back = read_dump(buf.as_slice()).unwrap();
    assert_eq!(back.sector(), Some(Sector::One));
    assert_eq!(back.amplitudes(), sv.amplitudes());
    buf.push(0);
    assert!(read_dump(buf.as_slice()).is_err());
    assert!(read_dump(&buf[..30]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn hermitian_symmetry_on_random_vectors(seed in any::<u64>(), i in 0usize..12, j in 0usize..12) {
        prop_assume!(i != j);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = lattice(4, 3);
        let a = StateVector::random(l, &mut rng).unwrap();
        let b = StateVector::random(l, &mut rng).unwrap();
        prop_assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        let ab = overlap(&a, &b).unwrap();
        let ba = overlap(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-14);
        let zab = cross_zz(&a, &b, i, j).unwrap();
        let zba = cross_zz(&b, &a, i, j).unwrap();
        prop_assert!((zab - zba.conj()).norm() < 1e-14);
        prop_assert!(zz_correlator(&a, i, j).unwrap().abs() <= 1.0 + 1e-12);
    }
}
