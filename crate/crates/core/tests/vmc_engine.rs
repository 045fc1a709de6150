use cslab::exact::{build_state, ulsm_expectation_exact, zz_correlator};
use cslab::vmc::{
    replay_chain, run_vmc, table1_reference, table1_report, ulsm_scan, Observable, VmcSchedule, TABLE1,
};
use cslab::{Direction, LatticeSpec, Sector, WaveFunctionSpec};

fn schedule(seed: u64) -> VmcSchedule {
    VmcSchedule {
        seed,
        ..VmcSchedule::default()
    }
}

fn within(mean: f64, exact: f64, stderr: f64, k: f64) -> bool {
    (mean - exact).abs() <= k * stderr
}

#[test]
fn reference_table_is_complete() {
    assert_eq!(TABLE1.len(), 24);
    let row = table1_reference(6, 4).unwrap();
    assert_eq!(row.values[2].value, -0.279);
    assert_eq!(row.values[3].error, 0.003);
    assert!(table1_reference(10, 2).is_none());
}

#[test]
fn agrees_with_exact_on_small_lattices() {
    for (n1, n2) in [(4, 2), (4, 3)] {
        let l = LatticeSpec::new(n1, n2).unwrap();
        let r0 = l.origin();
        let (rx, ry) = (l.neighbor(r0, Direction::X), l.neighbor(r0, Direction::Y));
        let obs = [
            Observable::Zz(r0, rx),
            Observable::Zz(r0, ry),
            Observable::TranslatedZz(r0, rx),
            Observable::TranslatedZz(r0, ry),
            Observable::Ulsm,
        ];
        for s in Sector::both() {
            let spec = WaveFunctionSpec::new(l, s);
            let sv = build_state(&spec).unwrap();
            let exact = [
                zz_correlator(&sv, r0, rx).unwrap(),
                zz_correlator(&sv, r0, ry).unwrap(),
                zz_correlator(&sv, r0, rx).unwrap(),
                zz_correlator(&sv, r0, ry).unwrap(),
            ];
            let run = run_vmc(&spec, &schedule(7), &obs).unwrap();
            for (k, e) in exact.iter().enumerate() {
                let est = &run.estimates[k];
                assert!(within(est.mean.re, *e, est.stderr_re, 3.0), "{l} {s} {}: {} vs {e}", obs[k].label(), est.mean.re);
                assert_eq!(est.mean.im, 0.0);
            }
            let u = ulsm_expectation_exact(&sv);
            let est = &run.estimates[4];
            assert!(within(est.mean.re, u.re, est.stderr_re, 3.0), "{l} {s} Re U: {} vs {}", est.mean.re, u.re);
            assert!(within(est.mean.im, u.im, est.stderr_im, 3.0), "{l} {s} Im U: {} vs {}", est.mean.im, u.im);
            assert!(est.mean.norm() <= 1.0 + 3.0 * est.stderr);
        }
    }
}

#[test]
fn error_bars_are_sane() {
    let l = LatticeSpec::new(6, 3).unwrap();
    let r0 = l.origin();
    let run = run_vmc(
        &WaveFunctionSpec::new(l, Sector::Zero),
        &schedule(11),
        &[Observable::Zz(r0, l.neighbor(r0, Direction::X)), Observable::Ulsm],
    )
    .unwrap();
    for e in &run.estimates {
        assert!(e.stderr > 0.0);
        assert_eq!(e.n_blocks, 4 * 200);
        assert_eq!(e.chain_means.len(), 4);
        assert!(e.blocking_stable, "{e:?}");
    }
    assert!(run.acceptance.iter().all(|&a| a > 0.05 && a < 0.7));
}

#[test]
fn replays_are_bit_stable() {
    let spec = WaveFunctionSpec::new(LatticeSpec::new(6, 4).unwrap(), Sector::One);
    let a = replay_chain(&spec, 42, 1, 50).unwrap();
    let b = replay_chain(&spec, 42, 1, 50).unwrap();
    let c = replay_chain(&spec, 42, 2, 50).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let short = VmcSchedule {
        n_chains: 2,
        sweeps_warmup: 10,
        sweeps_measure: 100,
        block_size: 10,
        seed: 5,
    };
    let obs = [Observable::Ulsm];
    let r1 = run_vmc(&spec, &short, &obs).unwrap();
    let r2 = run_vmc(&spec, &short, &obs).unwrap();
    assert_eq!(r1.estimates, r2.estimates);
}

#[test]
fn table1_rows_spot_check() {
    let entries = table1_report(&schedule(1), &[(6, 3), (6, 4)]).unwrap();
    assert_eq!(entries.len(), 8);
    for e in &entries {
        assert!(e.pull <= 3.0, "{} {} {}: pull {}", e.lattice(), e.sector, e.direction, e.pull);
    }
    // odd-N2 redundancy: both sectors share the y-bond value
    let y: Vec<_> = entries
        .iter()
        .filter(|e| e.n2 == 3 && e.direction == Direction::Y)
        .collect();
    let d = (y[0].mean - y[1].mean).abs() / y[0].stderr.hypot(y[1].stderr);
    assert!(d <= 3.0);
    assert!(table1_report(&schedule(1), &[(10, 2)]).is_err());
}

#[test]
fn slow_twist_scan_trends() {
    let s = schedule(3);
    let p0 = ulsm_scan(3, &[4, 8, 12, 16], Sector::Zero, &s).unwrap();
    let p1 = ulsm_scan(3, &[4, 8, 12, 16], Sector::One, &s).unwrap();
    for w in p0.windows(2) {
        assert!(w[1].mean.re > w[0].mean.re);
    }
    for w in p1.windows(2) {
        assert!(w[1].mean.re < w[0].mean.re);
    }
    assert!((p1[3].mean.re + 1.0).abs() <= 0.25);
    let even = ulsm_scan(4, &[4, 8], Sector::Zero, &s).unwrap();
    assert!(even.iter().all(|p| p.mean.re < 0.0 && p.limit == -1.0));
    assert!(ulsm_scan(3, &[5], Sector::Zero, &s).is_err());
}
