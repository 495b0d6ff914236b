//! Subcommand implementations. Each returns the rendered output plus the
//! pass/fail verdict that becomes the exit code.

use opdist::bloch::{validate_state, DensityOperator};
use opdist::linalg::{Complex64, ComplexMatrix};
use opdist::metric::{ordering_check, total_distance, OrderingReport};
use opdist::mub::{rotate_mub, standard_mub, verify_mub, MubSet};
use opdist::sampler::{
    estimate_total_distance, estimate_total_distance_corrected, haar_unitary, log_log_slope,
    random_mixed, random_pure, tomography_scenario, RngSeed,
};
use serde_json::{json, Value};

use crate::config::{PairKind, RunConfig};
use crate::output::{csv_header, fmt_f64, matrix_json, meta_json, render_json, state_json};
use crate::CliError;

pub struct CommandOutcome {
    pub content: String,
    pub pass: bool,
}

/// Verdict threading: every command writes its artifact even when the check
/// it performs fails; the exit code carries the verdict.
type CmdResult = Result<CommandOutcome, CliError>;

// Stream tags for deriving independent sub-seeds from one CLI seed.
const STREAM_ROTATION: u64 = 0;
const STREAM_PAIRS: u64 = 1;
const STREAM_MIXED_TESTS: u64 = 2;
const STREAM_PURE_TESTS: u64 = 3;
const STREAM_REFERENCE: u64 = 4;
const STREAM_SHOT_PAIR: u64 = 5;
const STREAM_SWEEP: u64 = 6;

fn sample_pair(kind: PairKind, d: usize, seed: RngSeed) -> Result<[DensityOperator; 2], CliError> {
    let pair_seed = seed.derive(STREAM_SHOT_PAIR);
    Ok(match kind {
        PairKind::RandomMixed => [
            random_mixed(d, pair_seed.derive(0))?,
            random_mixed(d, pair_seed.derive(1))?,
        ],
        PairKind::RandomPure => [
            random_pure(d, pair_seed.derive(0))?,
            random_pure(d, pair_seed.derive(1))?,
        ],
        PairKind::Orthogonal => [
            DensityOperator::basis_state(d, 0),
            DensityOperator::basis_state(d, 1),
        ],
    })
}

// --- mub -------------------------------------------------------------------

pub fn cmd_mub(cfg: &RunConfig) -> CmdResult {
    let set = standard_mub(cfg.dim)?;
    let report = verify_mub(&set, cfg.tolerance)?;

    let bases: Vec<Value> = set
        .bases()
        .iter()
        .map(|b| {
            json!({
                "label": b.label(),
                "projectors": b.projectors().iter().map(matrix_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let checks: Vec<Value> = report
        .checks()
        .iter()
        .map(|&(name, dev)| json!({ "check": name, "max_deviation": dev }))
        .collect();
    let doc = json!({
        "meta": meta_json(cfg),
        "dim": cfg.dim,
        "bases": bases,
        "verification": {
            "checks": checks,
            "max_deviation": report.max_deviation(),
            "tol": report.tol,
            "pass": report.pass,
        },
    });
    Ok(CommandOutcome {
        content: render_json(&doc),
        pass: report.pass,
    })
}

// --- distance ---------------------------------------------------------------

pub fn cmd_distance(cfg: &RunConfig) -> CmdResult {
    let d = cfg.dim;
    let [rho1, rho2] = sample_pair(cfg.pair, d, cfg.seeds[0])?;
    let set = standard_mub(d)?;
    let report = total_distance(&rho1, &rho2, &set)?;
    let pass = report.deviation <= cfg.tolerance;

    let content = match cfg.format {
        crate::config::OutputFormat::Json => {
            let per_basis: Vec<Value> = report
                .per_basis
                .iter()
                .map(|(label, v)| json!({ "basis": label, "distance": v }))
                .collect();
            render_json(&json!({
                "meta": meta_json(cfg),
                "state1": state_json(&rho1),
                "state2": state_json(&rho2),
                "per_basis": per_basis,
                "total": report.total,
                "hs_distance_sq": report.hs_distance_sq,
                "deviation": report.deviation,
                "pass": pass,
            }))
        }
        crate::config::OutputFormat::Csv => {
            let mut s = csv_header(cfg);
            s.push_str("basis,distance\n");
            for (label, v) in &report.per_basis {
                s.push_str(&format!("{label},{}\n", fmt_f64(*v)));
            }
            s.push_str(&format!("# total: {}\n", fmt_f64(report.total)));
            s.push_str(&format!(
                "# hs_distance_sq: {}\n",
                fmt_f64(report.hs_distance_sq)
            ));
            s.push_str(&format!("# deviation: {}\n", fmt_f64(report.deviation)));
            s.push_str(&format!("# pass: {pass}\n"));
            s
        }
    };
    Ok(CommandOutcome { content, pass })
}

// --- equivalence -------------------------------------------------------------

struct EquivalenceRow {
    seed: u64,
    trial: usize,
    d_total: f64,
    hs_sq: f64,
    deviation: f64,
}

/// Replaces the second basis with a copy of the first; the result still has
/// the right shape but is maximally non-complementary.
fn corrupt_set(set: &MubSet) -> Result<MubSet, CliError> {
    let mut bases = set.bases().to_vec();
    bases[1] = bases[0].clone();
    Ok(MubSet::new(bases)?)
}

pub fn cmd_equivalence(cfg: &RunConfig) -> CmdResult {
    let d = cfg.dim;
    let standard = standard_mub(d)?;

    // the same state pairs are reused for every rotated set, so each row
    // isolates the effect of the measurement choice
    let pair_base = cfg.seeds[0].derive(STREAM_PAIRS);
    let mut pairs = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let s1 = pair_base.derive(2 * t as u64);
        let s2 = pair_base.derive(2 * t as u64 + 1);
        // cycle mixed/pure compositions
        let rho1 = if t % 2 == 0 {
            random_mixed(d, s1)?
        } else {
            random_pure(d, s1)?
        };
        let rho2 = if (t / 2) % 2 == 0 {
            random_mixed(d, s2)?
        } else {
            random_pure(d, s2)?
        };
        pairs.push((rho1, rho2));
    }

    let mut rows = Vec::with_capacity(cfg.seeds.len() * cfg.trials);
    for seed in &cfg.seeds {
        let u = haar_unitary(d, seed.derive(STREAM_ROTATION))?;
        let mut set = rotate_mub(&standard, &u)?;
        if cfg.self_test {
            set = corrupt_set(&set)?;
        }
        for (t, (rho1, rho2)) in pairs.iter().enumerate() {
            let report = total_distance(rho1, rho2, &set)?;
            rows.push(EquivalenceRow {
                seed: seed.0,
                trial: t,
                d_total: report.total,
                hs_sq: report.hs_distance_sq,
                deviation: report.deviation,
            });
        }
    }
    rows.sort_by_key(|r| (r.seed, r.trial));
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let pass = max_deviation <= cfg.tolerance;

    let content = match cfg.format {
        crate::config::OutputFormat::Csv => {
            let mut s = csv_header(cfg);
            s.push_str("seed,trial,d_total,hs_sq,deviation\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.seed,
                    r.trial,
                    fmt_f64(r.d_total),
                    fmt_f64(r.hs_sq),
                    fmt_f64(r.deviation)
                ));
            }
            s.push_str(&format!("# max_deviation: {}\n", fmt_f64(max_deviation)));
            s.push_str(&format!("# pass: {pass}\n"));
            s
        }
        crate::config::OutputFormat::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "seed": r.seed,
                        "trial": r.trial,
                        "d_total": r.d_total,
                        "hs_sq": r.hs_sq,
                        "deviation": r.deviation,
                    })
                })
                .collect();
            render_json(&json!({
                "meta": meta_json(cfg),
                "rows": rows_json,
                "max_deviation": max_deviation,
                "pass": pass,
            }))
        }
    };
    Ok(CommandOutcome { content, pass })
}

// --- ordering -----------------------------------------------------------------

fn ordering_section(sigma: &DensityOperator, report: &OrderingReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "i": v.i,
                "j": v.j,
                "fidelity_i": v.fidelity_i,
                "fidelity_j": v.fidelity_j,
                "distance_i": v.distance_i,
                "distance_j": v.distance_j,
            })
        })
        .collect();
    json!({
        "reference": state_json(sigma),
        "fidelities": report.fidelities,
        "distances": report.distances,
        "violations": violations,
        "violation_count": report.violations.len(),
    })
}

/// The fixed qubit counterexample: reference |0⟩⟨0|, tests diag(0.7, 0.3) and
/// (𝟙 + 0.8σx + 0.5σz)/2. Fidelity prefers the second, distance the first.
fn fixed_counterexample() -> Result<(DensityOperator, Vec<DensityOperator>), CliError> {
    let sigma = DensityOperator::basis_state(2, 0);
    let rho1 = validate_state(&ComplexMatrix::from_real_diag(&[0.7, 0.3]), 1e-9)?;
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.75, 0.0), Complex64::new(0.4, 0.0)],
        vec![Complex64::new(0.4, 0.0), Complex64::new(0.25, 0.0)],
    ])?;
    let rho2 = validate_state(&m, 1e-9)?;
    Ok((sigma, vec![rho1, rho2]))
}

pub fn cmd_ordering(cfg: &RunConfig) -> CmdResult {
    let d = cfg.dim;
    let set = standard_mub(d)?;
    let sigma = random_pure(d, cfg.seeds[0].derive(STREAM_REFERENCE))?;

    let pure_base = cfg.seeds[0].derive(STREAM_PURE_TESTS);
    let pure_tests: Vec<DensityOperator> = (0..cfg.trials)
        .map(|t| random_pure(d, pure_base.derive(t as u64)))
        .collect::<Result<_, _>>()?;
    let pure_report = ordering_check(&sigma, &pure_tests, &set)?;

    let mut doc = json!({
        "meta": meta_json(cfg),
        "pure": ordering_section(&sigma, &pure_report),
    });
    let mut csv_sections: Vec<(String, &OrderingReport)> = vec![("pure".to_string(), &pure_report)];

    let mixed_report;
    let fixed_report;
    let mut mixed_violations = 0usize;
    if !cfg.pure_only {
        let mixed_base = cfg.seeds[0].derive(STREAM_MIXED_TESTS);
        let mixed_tests: Vec<DensityOperator> = (0..cfg.trials)
            .map(|t| random_mixed(d, mixed_base.derive(t as u64)))
            .collect::<Result<_, _>>()?;
        mixed_report = ordering_check(&sigma, &mixed_tests, &set)?;
        mixed_violations += mixed_report.violations.len();
        doc["mixed"] = ordering_section(&sigma, &mixed_report);
        csv_sections.push(("mixed".to_string(), &mixed_report));

        if d == 2 {
            let (fixed_sigma, fixed_tests) = fixed_counterexample()?;
            fixed_report = ordering_check(&fixed_sigma, &fixed_tests, &set)?;
            mixed_violations += fixed_report.violations.len();
            doc["fixed_counterexample"] = ordering_section(&fixed_sigma, &fixed_report);
            csv_sections.push(("fixed".to_string(), &fixed_report));
        }
    }

    let pure_ok = pure_report.violations.is_empty();
    let pass = if cfg.pure_only {
        pure_ok
    } else {
        pure_ok && mixed_violations >= 1
    };
    doc["pure_violations"] = json!(pure_report.violations.len());
    doc["mixed_violations"] = json!(mixed_violations);
    doc["pass"] = json!(pass);

    let content = match cfg.format {
        crate::config::OutputFormat::Json => render_json(&doc),
        crate::config::OutputFormat::Csv => {
            let mut s = csv_header(cfg);
            s.push_str("section,i,j,fidelity_i,fidelity_j,distance_i,distance_j\n");
            for (name, report) in &csv_sections {
                for v in &report.violations {
                    s.push_str(&format!(
                        "{name},{},{},{},{},{},{}\n",
                        v.i,
                        v.j,
                        fmt_f64(v.fidelity_i),
                        fmt_f64(v.fidelity_j),
                        fmt_f64(v.distance_i),
                        fmt_f64(v.distance_j)
                    ));
                }
            }
            s.push_str(&format!(
                "# pure_violations: {}\n",
                pure_report.violations.len()
            ));
            s.push_str(&format!("# mixed_violations: {mixed_violations}\n"));
            s.push_str(&format!("# pass: {pass}\n"));
            s
        }
    };
    Ok(CommandOutcome { content, pass })
}

// --- shots / tomography --------------------------------------------------------

struct SweepRow {
    n: u64,
    seed: u64,
    estimate: f64,
    exact: f64,
    extra: Option<Value>,
}

fn slope_and_pass(rows: &[SweepRow], seeds: usize) -> (Vec<(u64, f64)>, Option<f64>, bool) {
    let mut ns: Vec<u64> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let rms_per_n: Vec<(u64, f64)> = ns
        .iter()
        .map(|&n| {
            let sq: f64 = rows
                .iter()
                .filter(|r| r.n == n)
                .map(|r| (r.estimate - r.exact).powi(2))
                .sum();
            (n, (sq / seeds as f64).sqrt())
        })
        .collect();
    let points: Vec<(f64, f64)> = rms_per_n.iter().map(|&(n, r)| (n as f64, r)).collect();
    let slope = log_log_slope(&points);
    // the estimator error shrinks as n^(−1/2); with a single shot count there
    // is nothing to fit and the sweep passes vacuously
    let pass = slope.is_none_or(|s| (s + 0.5).abs() <= 0.1);
    (rms_per_n, slope, pass)
}

fn render_sweep(
    cfg: &RunConfig,
    rows: &[SweepRow],
    rms_per_n: &[(u64, f64)],
    slope: Option<f64>,
    pass: bool,
    extra_doc: Value,
) -> String {
    match cfg.format {
        crate::config::OutputFormat::Csv => {
            let mut s = csv_header(cfg);
            s.push_str("n,seed,estimate,exact,abs_error\n");
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.n,
                    r.seed,
                    fmt_f64(r.estimate),
                    fmt_f64(r.exact),
                    fmt_f64((r.estimate - r.exact).abs())
                ));
            }
            for &(n, rms) in rms_per_n {
                s.push_str(&format!("# rms n={n}: {}\n", fmt_f64(rms)));
            }
            match slope {
                Some(v) => s.push_str(&format!("# loglog_slope: {}\n", fmt_f64(v))),
                None => s.push_str("# loglog_slope: n/a\n"),
            }
            s.push_str(&format!("# pass: {pass}\n"));
            s
        }
        crate::config::OutputFormat::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut row = json!({
                        "n": r.n,
                        "seed": r.seed,
                        "estimate": r.estimate,
                        "exact": r.exact,
                        "abs_error": (r.estimate - r.exact).abs(),
                    });
                    if let Some(extra) = &r.extra {
                        row["tomography"] = extra.clone();
                    }
                    row
                })
                .collect();
            let rms_json: Vec<Value> = rms_per_n
                .iter()
                .map(|&(n, rms)| json!({ "n": n, "rms": rms }))
                .collect();
            let mut doc = json!({
                "meta": meta_json(cfg),
                "rows": rows_json,
                "rms_per_n": rms_json,
                "loglog_slope": slope,
                "pass": pass,
            });
            if let Value::Object(extra) = extra_doc {
                for (k, v) in extra {
                    doc[k] = v;
                }
            }
            render_json(&doc)
        }
    }
}

pub fn cmd_shots(cfg: &RunConfig) -> CmdResult {
    let d = cfg.dim;
    let set = standard_mub(d)?;
    let [rho1, rho2] = sample_pair(cfg.pair, d, cfg.seeds[0])?;

    let mut rows = Vec::with_capacity(cfg.seeds.len() * cfg.shot_counts.len());
    for seed in &cfg.seeds {
        for &n in &cfg.shot_counts {
            let run_seed = seed.derive(STREAM_SWEEP).derive(n);
            let est = if cfg.bias_corrected {
                estimate_total_distance_corrected(&rho1, &rho2, &set, n, run_seed)?
            } else {
                estimate_total_distance(&rho1, &rho2, &set, n, run_seed)?
            };
            rows.push(SweepRow {
                n,
                seed: seed.0,
                estimate: est.estimate,
                exact: est.exact,
                extra: None,
            });
        }
    }
    rows.sort_by_key(|r| (r.seed, r.n));
    let (rms_per_n, slope, pass) = slope_and_pass(&rows, cfg.seeds.len());

    let extra = json!({
        "state1": state_json(&rho1),
        "state2": state_json(&rho2),
    });
    Ok(CommandOutcome {
        content: render_sweep(cfg, &rows, &rms_per_n, slope, pass, extra),
        pass,
    })
}

pub fn cmd_tomography(cfg: &RunConfig) -> CmdResult {
    let [rho1, rho2] = sample_pair(cfg.pair, 2, cfg.seeds[0])?;

    let mut rows = Vec::with_capacity(cfg.seeds.len() * cfg.shot_counts.len());
    for seed in &cfg.seeds {
        for &n in &cfg.shot_counts {
            let rep = tomography_scenario(&rho1, &rho2, n, seed.derive(STREAM_SWEEP).derive(n))?;
            let settings: Vec<Value> = rep
                .settings
                .iter()
                .map(|s| {
                    json!({
                        "setting": s.setting,
                        "basis": s.basis_label,
                        "counts1": s.counts[0],
                        "counts2": s.counts[1],
                        "frequencies1": s.frequencies[0],
                        "frequencies2": s.frequencies[1],
                    })
                })
                .collect();
            let extra = json!({
                "settings": settings,
                "stokes1": rep.stokes[0],
                "stokes2": rep.stokes[1],
                "rescaled": rep.rescaled,
                "reconstructed1": state_json(&rep.reconstructed[0]),
                "reconstructed2": state_json(&rep.reconstructed[1]),
                "shots_per_setting": rep.shots_per_setting,
                "total_shots": rep.total_shots,
            });
            rows.push(SweepRow {
                n,
                seed: seed.0,
                estimate: rep.estimate,
                exact: rep.exact,
                extra: Some(extra),
            });
        }
    }
    rows.sort_by_key(|r| (r.seed, r.n));
    let (rms_per_n, slope, pass) = slope_and_pass(&rows, cfg.seeds.len());

    let extra = json!({
        "state1": state_json(&rho1),
        "state2": state_json(&rho2),
    });
    Ok(CommandOutcome {
        content: render_sweep(cfg, &rows, &rms_per_n, slope, pass, extra),
        pass,
    })
}
