use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use cslab::checks::verify_lattice;
use cslab::exact::build_state_with_budget;
use cslab::qec::{
    build_lattice_code, kl_check, pattern_map, shift_mismatch, singlet_reduction_check, y_translation_mismatch,
    ViolationReport,
};
use cslab::valence_bond::{
    enumerate_coverings, gap_parities, parity_string, seam_crossings, seam_parity, ulsm_vb_bound,
    ulsm_vb_expectation,
};
use cslab::vmc::{derive_seed, run_vmc, table1_report, ulsm_scan, Observable, VmcSchedule};
use cslab::{Direction, Sector, WaveFunctionSpec};

use crate::output::{companion_path, csv_writer, write_json, write_meta, write_rows};
use crate::settings::{Format, Settings};
use crate::CliError;

/// Lattices checked by `verify` when none is given.
pub const VERIFY_LATTICES: &str = "4x2,6x2,4x3,4x4,6x3,4x5,8x3,6x4,4x6";
pub const QEC_LATTICES: [&str; 6] = ["4x2", "4x3", "4x4", "6x3", "4x6", "6x4"];
pub const FIG1_N1: [usize; 4] = [4, 8, 12, 16];
pub const PULL_GATE: f64 = 4.0;
pub const QEC_TOLERANCE: f64 = 1e-10;
pub const SHIFT_TOLERANCE: f64 = 1e-8;
/// Default cap on the number of coverings `vb` will stream.
pub const COVERING_BUDGET: u64 = 100_000_000;

#[derive(Serialize)]
struct CheckRow {
    lattice: String,
    sector: usize,
    check: String,
    value: f64,
    threshold: f64,
    passed: bool,
}

pub fn verify(mut s: Settings) -> Result<(), CliError> {
    s.set_default("lattice", VERIFY_LATTICES);
    let lattices = s.lattices()?;
    let sectors = s.sectors()?;
    let budget = s.budget()?;
    let mut rows = Vec::new();
    for l in lattices {
        for c in verify_lattice(l, &sectors, budget)? {
            eprintln!(
                "{} {} sector {} {}: {:.3e} (<= {:.0e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.lattice,
                c.sector,
                c.name,
                c.value,
                c.threshold
            );
            rows.push(CheckRow {
                lattice: c.lattice,
                sector: c.sector.index(),
                check: c.name,
                value: c.value,
                threshold: c.threshold,
                passed: c.passed,
            });
        }
    }
    let out = s.out();
    write_rows(&rows, s.format(Format::Csv)?, out.as_deref())?;
    write_meta("verify", &s, out.as_deref())?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks failed", rows.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct Table1Row {
    lattice: String,
    sector: usize,
    direction: String,
    mean: f64,
    stderr: f64,
    reference: f64,
    reference_error: f64,
    pull: f64,
    n_blocks: usize,
    acceptance: f64,
    seed: u64,
    blocking_stable: bool,
    chains_consistent: bool,
}

pub fn table1(s: Settings) -> Result<(), CliError> {
    let schedule = s.schedule()?;
    let lattices: Vec<(usize, usize)> = s.lattices()?.iter().map(|l| (l.n1(), l.n2())).collect();
    let sectors = s.sectors()?;
    let rows: Vec<Table1Row> = table1_report(&schedule, &lattices)?
        .into_iter()
        .filter(|e| sectors.contains(&e.sector))
        .map(|e| Table1Row {
            lattice: e.lattice(),
            sector: e.sector.index(),
            direction: e.direction.to_string(),
            mean: e.mean,
            stderr: e.stderr,
            reference: e.reference.value,
            reference_error: e.reference.error,
            pull: e.pull,
            n_blocks: e.n_blocks,
            acceptance: e.acceptance,
            seed: e.seed,
            blocking_stable: e.blocking_stable,
            chains_consistent: e.chains_consistent,
        })
        .collect();
    let out = s.out();
    write_rows(&rows, s.format(Format::Csv)?, out.as_deref())?;
    write_meta("table1", &s, out.as_deref())?;

    let within3 = rows.iter().filter(|r| r.pull <= 3.0).count();
    let worst = rows.iter().max_by(|a, b| a.pull.total_cmp(&b.pull));
    eprintln!("# {within3}/{} entries with pull <= 3", rows.len());
    if let Some(w) = worst {
        eprintln!("# largest pull {:.2} at {} sector {} {}", w.pull, w.lattice, w.sector, w.direction);
        if w.pull > PULL_GATE {
            return Err(CliError::Validation(format!(
                "pull {:.2} at {} sector {} {} exceeds {PULL_GATE}",
                w.pull, w.lattice, w.sector, w.direction
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Fig1Row {
    n1: usize,
    n2: usize,
    inv_n1: f64,
    sector: usize,
    re: f64,
    im: f64,
    stderr_re: f64,
    stderr_im: f64,
    limit: f64,
    toward_limit: bool,
    seed: u64,
}

pub fn fig1(s: Settings) -> Result<(), CliError> {
    let n2 = s.usize_or("n2", 3)?;
    let n1_list = s.usize_list_or("n1", &FIG1_N1)?;
    if let Some(odd) = n1_list.iter().find(|&&n| n % 2 == 1) {
        return Err(CliError::BadArgs(format!("N1 must be even, got {odd}")));
    }
    let schedule = s.schedule()?;
    let mut rows = Vec::new();
    for sector in s.sectors()? {
        let points = ulsm_scan(n2, &n1_list, sector, &schedule)?;
        let mut prev: Option<(f64, f64)> = None;
        for p in points {
            let dist = (p.mean.re - p.limit).abs();
            // a step away counts only beyond three combined standard errors
            let toward = prev.is_none_or(|(d, e)| dist <= d + 3.0 * e.hypot(p.stderr_re));
            prev = Some((dist, p.stderr_re));
            rows.push(Fig1Row {
                n1: p.n1,
                n2: p.n2,
                inv_n1: p.inv_n1,
                sector: sector.index(),
                re: p.mean.re,
                im: p.mean.im,
                stderr_re: p.stderr_re,
                stderr_im: p.stderr_im,
                limit: p.limit,
                toward_limit: toward,
                seed: p.seed,
            });
        }
    }
    let out = s.out();
    write_rows(&rows, s.format(Format::Csv)?, out.as_deref())?;
    write_meta("fig1", &s, out.as_deref())?;
    if let Some(r) = rows.iter().find(|r| !r.toward_limit) {
        return Err(CliError::Validation(format!(
            "sector {} moves away from its limit {} at N1 = {}",
            r.sector, r.limit, r.n1
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassRow {
    pattern: String,
    count: u64,
    seam_parity: i32,
    pattern_ok: bool,
}

#[derive(Serialize)]
struct CoveringRow {
    index: u64,
    seam_crossings: usize,
    seam_parity: i32,
    gaps: String,
    ulsm: f64,
    bound: f64,
    pattern_ok: bool,
}

/// Odd `N2` forces alternating gap parities, even `N2` uniform ones.
fn pattern_ok(n2: usize, parities: &[u8]) -> bool {
    parities
        .windows(2)
        .all(|w| if n2 % 2 == 1 { w[0] != w[1] } else { w[0] == w[1] })
}

pub fn vb(s: Settings) -> Result<(), CliError> {
    let lattice = s.lattice()?;
    let rule = s.bond_rule()?;
    let budget = if s.get("budget").is_some() { s.budget()? } else { COVERING_BUDGET };
    let per_covering = s.flag("coverings")?;
    let out = s.out();
    let n2 = lattice.n2();

    let mut classes: BTreeMap<String, (u64, i32, bool)> = BTreeMap::new();
    let mut writer = if per_covering { Some(csv_writer(out.as_deref())?) } else { None };
    let mut total = 0u64;
    let mut violations = 0u64;
    for cov in enumerate_coverings(&lattice, rule)? {
        total += 1;
        if total > budget {
            return Err(CliError::Infeasible(format!(
                "more than {budget} coverings of {lattice} under {rule}; raise --budget or tighten the bond rule"
            )));
        }
        let parities = gap_parities(&lattice, &cov);
        let ok = pattern_ok(n2, &parities);
        violations += u64::from(!ok);
        let pattern = parity_string(&parities);
        let sign = seam_parity(&lattice, &cov);
        if let Some(w) = writer.as_mut() {
            w.serialize(CoveringRow {
                index: total - 1,
                seam_crossings: seam_crossings(&lattice, &cov),
                seam_parity: sign,
                gaps: pattern.clone(),
                ulsm: ulsm_vb_expectation(&lattice, &cov),
                bound: ulsm_vb_bound(&lattice, &cov),
                pattern_ok: ok,
            })?;
        }
        classes.entry(pattern).or_insert((0, sign, ok)).0 += 1;
    }
    match writer {
        Some(mut w) => w.flush()?,
        None => {
            let rows: Vec<ClassRow> = classes
                .iter()
                .map(|(p, &(count, seam_parity, ok))| ClassRow {
                    pattern: p.clone(),
                    count,
                    seam_parity,
                    pattern_ok: ok,
                })
                .collect();
            write_rows(&rows, s.format(Format::Csv)?, out.as_deref())?;
        }
    }
    write_meta("vb", &s, out.as_deref())?;
    eprintln!("# {lattice} {rule}: {total} coverings in {} gap-parity classes", classes.len());
    if violations > 0 {
        return Err(CliError::Validation(format!(
            "{violations} coverings break the {} gap-parity pattern",
            if n2 % 2 == 1 { "alternating" } else { "uniform" }
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PatternSummary {
    /// Smallest column shift mapping the `Phi_0` map onto the `Phi_1` map, or
    /// the closest one when none matches.
    best_shift: i64,
    best_shift_mismatch: f64,
    unshifted_mismatch: f64,
    y_translation_mismatch: f64,
}

#[derive(Serialize)]
struct QecOutput {
    report: ViolationReport,
    orthonormality_residual: f64,
    singlet_reduction_discrepancy: f64,
    pattern: PatternSummary,
}

#[derive(Serialize)]
struct PatternRow {
    site_i: usize,
    site_j: usize,
    direction: String,
    value_phi0: f64,
    value_phi1: f64,
}

pub fn qec(s: Settings) -> Result<(), CliError> {
    let lattice = s.lattice()?;
    let budget = s.budget()?;
    let code = build_lattice_code(lattice, budget)?;
    let report = kl_check(&code)?;
    let orthonormality_residual = code.orthonormality_residual()?;
    let singlet_reduction_discrepancy = singlet_reduction_check(&code)?;

    let phi0 = build_state_with_budget(&WaveFunctionSpec::new(lattice, Sector::Zero), budget)?;
    let phi1 = build_state_with_budget(&WaveFunctionSpec::new(lattice, Sector::One), budget)?;
    let map = pattern_map(&phi0, &phi1)?;
    let shifts: Vec<(i64, f64)> = (0..lattice.n1() as i64)
        .map(|k| (k, shift_mismatch(&lattice, &map, k)))
        .collect();
    let (best_shift, best_shift_mismatch) = shifts
        .iter()
        .copied()
        .find(|&(_, m)| m <= SHIFT_TOLERANCE)
        .or_else(|| shifts.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)))
        .expect("at least one column");
    let pattern = PatternSummary {
        best_shift,
        best_shift_mismatch,
        unshifted_mismatch: shift_mismatch(&lattice, &map, 0),
        y_translation_mismatch: y_translation_mismatch(&lattice, &map),
    };

    let out = s.out();
    let summary = format!(
        "# {lattice}: max_diag_mismatch {:.4} at {} {}, max_offdiag {:.4}, single Pauli {:.1e}",
        report.max_diag_mismatch,
        report.diag_argmax.a,
        report.diag_argmax.b,
        report.max_offdiag,
        report.max_single_pauli
    );
    let problems = [
        ("single-Pauli element", report.max_single_pauli),
        ("singlet reduction discrepancy", singlet_reduction_discrepancy),
        ("orthonormality residual", orthonormality_residual),
    ]
    .into_iter()
    .filter(|&(_, v)| v > QEC_TOLERANCE)
    .map(|(name, v)| format!("{name} {v:.3e}"))
    .collect::<Vec<_>>();
    write_json(
        &QecOutput {
            report,
            orthonormality_residual,
            singlet_reduction_discrepancy,
            pattern,
        },
        out.as_deref(),
    )?;
    if let Some(path) = out.as_deref() {
        let rows: Vec<PatternRow> = map
            .iter()
            .map(|b| PatternRow {
                site_i: b.site_i,
                site_j: b.site_j,
                direction: b.direction.to_string(),
                value_phi0: b.value_phi0,
                value_phi1: b.value_phi1,
            })
            .collect();
        write_rows(&rows, Format::Csv, Some(&companion_path(path, "pattern", "csv")))?;
    }
    write_meta("qec", &s, out.as_deref())?;
    eprintln!("{summary}");
    if !problems.is_empty() {
        return Err(CliError::Validation(problems.join(", ")));
    }
    Ok(())
}

#[derive(Serialize)]
struct VmcRow {
    lattice: String,
    sector: usize,
    observable: String,
    re: f64,
    im: f64,
    stderr_re: f64,
    stderr_im: f64,
    n_blocks: usize,
    blocking_stable: bool,
    chains_consistent: bool,
    acceptance: f64,
    seed: u64,
}

pub fn vmc(s: Settings) -> Result<(), CliError> {
    let lattice = s.lattice()?;
    let schedule = s.schedule()?;
    let r0 = lattice.origin();
    let observables = [
        Observable::TranslatedZz(r0, lattice.neighbor(r0, Direction::X)),
        Observable::TranslatedZz(r0, lattice.neighbor(r0, Direction::Y)),
        Observable::Ulsm,
    ];
    let mut rows = Vec::new();
    for sector in s.sectors()? {
        let seed = derive_seed(schedule.seed, &lattice, sector);
        let sched = VmcSchedule { seed, ..schedule };
        let run = run_vmc(&WaveFunctionSpec::new(lattice, sector), &sched, &observables)?;
        for (obs, e) in run.observables.iter().zip(&run.estimates) {
            if !e.blocking_stable {
                eprintln!("# warning: {} sector {sector}: blocked error bar not converged", obs.label());
            }
            rows.push(VmcRow {
                lattice: lattice.to_string(),
                sector: sector.index(),
                observable: obs.label(),
                re: e.mean.re,
                im: e.mean.im,
                stderr_re: e.stderr_re,
                stderr_im: e.stderr_im,
                n_blocks: e.n_blocks,
                blocking_stable: e.blocking_stable,
                chains_consistent: e.chains_consistent,
                acceptance: run.mean_acceptance(),
                seed,
            });
        }
    }
    let out = s.out();
    write_rows(&rows, s.format(Format::Csv)?, out.as_deref())?;
    write_meta("vmc", &s, out.as_deref())?;
    Ok(())
}

#[derive(Serialize)]
struct Step {
    step: String,
    output: String,
    exit_code: u8,
    message: Option<String>,
}

pub fn reproduce_paper(s: Settings) -> Result<(), CliError> {
    let dir = s
        .out()
        .ok_or_else(|| CliError::BadArgs("reproduce-paper needs --out DIR".into()))?;
    std::fs::create_dir_all(&dir)?;
    let base = s.without("lattice").without("format").with("format", "csv");
    let file = |name: &str| dir.join(name).display().to_string();

    type Run = fn(Settings) -> Result<(), CliError>;
    let mut plan: Vec<(String, Run, Settings)> = vec![(
        "verify".into(),
        verify,
        base.with("lattice", VERIFY_LATTICES).with("out", file("verify.csv")),
    )];
    plan.push(("table1".into(), table1, base.with("out", file("table1.csv"))));
    for n2 in [3, 4] {
        plan.push((
            format!("fig1 n2={n2}"),
            fig1,
            base.with("n2", n2).with("out", file(&format!("fig1_n2_{n2}.csv"))),
        ));
    }
    plan.push((
        "vb 6x3".into(),
        vb,
        base.with("lattice", "6x3").with("out", file("vb_6x3.csv")),
    ));
    plan.push((
        "vb 6x4 max_dx=1b max_dy=1b".into(),
        vb,
        base.with("lattice", "6x4")
            .with("max_dx", 1)
            .with("max_dy", 1)
            .with("out", file("vb_6x4.csv")),
    ));
    for l in QEC_LATTICES {
        plan.push((
            format!("qec {l}"),
            qec,
            base.with("lattice", l).with("out", file(&format!("qec_{l}.json"))),
        ));
    }

    let mut steps = Vec::new();
    for (name, run, settings) in plan {
        eprintln!("# {name}");
        let output = settings.get("out").unwrap_or_default().to_string();
        let (exit_code, message) = match run(settings) {
            Ok(()) => (0, None),
            Err(e) => {
                eprintln!("# {name}: {e}");
                (e.code(), Some(e.to_string()))
            }
        };
        steps.push(Step {
            step: name,
            output,
            exit_code,
            message,
        });
    }
    let summary = dir.join("summary.json");
    write_json(&steps, Some(&summary))?;
    write_meta("reproduce-paper", &s, Some(&summary))?;

    let failed: Vec<&Step> = steps.iter().filter(|st| st.exit_code != 0).collect();
    match failed.iter().map(|st| st.exit_code).max() {
        None => Ok(()),
        Some(code) => {
            let names = failed.iter().map(|st| st.step.as_str()).collect::<Vec<_>>().join(", ");
            let msg = format!("steps failed: {names}; see {}", Path::new(&summary).display());
            Err(match code {
                3 => CliError::Infeasible(msg),
                4 => CliError::BadArgs(msg),
                2 => CliError::Validation(msg),
                _ => CliError::Other(msg),
            })
        }
    }
}
