use std::io::Write;
use std::path::{Path, PathBuf};

use fixpoint_core::classes::{
    assert_unique_fixed_point, check_asymptotic_pseudocontractivity, check_star_condition,
    check_uniform_lipschitz, estimate_power_lipschitz, CheckReport,
};
use fixpoint_core::counterexample::{
    self, corrected_demo, format_exact, parse_exact, verify_note_claims, ExactScalar,
};
use fixpoint_core::sampling::{sample_pairs, sample_points};
use fixpoint_core::scheme::{classify_hypotheses, run, Termination};
use fixpoint_core::{Error as CoreError, NormTag, OperatorKind, OperatorSpec};

use crate::config::{self, CheckPlan, ClassifyPlan, ExperimentConfig, SCHEMA_VERSION};
use crate::error::{CliError, Outcome, Result};
use crate::report::{CheckSection, ClassifyReport};
use crate::trace_csv;

fn out_path(cli: Option<&Path>, cfg: &ExperimentConfig, what: &str) -> Result<PathBuf> {
    cli.map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| {
            CliError::Argument(format!(
                "no {what} output path (use --out or the config's output field)"
            ))
        })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    }
}

/// `fixpoint iterate`: runs the scheme and writes one CSV row per step.
pub fn iterate(config_path: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<Outcome> {
    let cfg = config::load(config_path)?;
    let it = cfg.iteration_config()?;
    let out = out_path(out, &cfg, "CSV")?;
    let w = io_err(&out);

    let h = classify_hypotheses(&it);
    writeln!(
        stdout,
        "hypotheses: cond_i={} cond_ii={} p_valid={} ({})",
        h.cond_i_holds, h.cond_ii_holds, h.p_valid, h.notes
    )
    .map_err(&w)?;

    let stages = it.p() - 1;
    match run(&it) {
        Ok(trace) => {
            trace_csv::write_trace_file(&out, it.dim(), stages, &trace.records)?;
            let last = trace.last();
            match trace.termination {
                Termination::Converged { n } => writeln!(
                    stdout,
                    "termination: converged at n = {n} (residual {} <= tol {})",
                    trace_csv::fmt_float(last.residual.unwrap_or(0.0)),
                    it.tol()
                ),
                Termination::HorizonReached => writeln!(
                    stdout,
                    "termination: horizon n_max = {} reached{}",
                    it.n_max(),
                    last.residual
                        .map(|r| format!(" (residual {})", trace_csv::fmt_float(r)))
                        .unwrap_or_default()
                ),
            }
            .map_err(&w)?;
            writeln!(
                stdout,
                "trace: {} rows written to {}",
                trace.records.len(),
                out.display()
            )
            .map_err(&w)?;
            Ok(Outcome::Success)
        }
        Err(e) => {
            trace_csv::write_trace_file(&out, it.dim(), stages, &e.partial)?;
            writeln!(stdout, "termination: diverged: {}", e.error).map_err(&w)?;
            writeln!(
                stdout,
                "trace: partial, {} rows written to {}",
                e.partial.len(),
                out.display()
            )
            .map_err(&w)?;
            Ok(Outcome::Divergence)
        }
    }
}

const GAP_SAMPLES: [u64; 9] = [1, 2, 3, 4, 5, 10, 16, 32, 64];
const TAIL_SAMPLES: [u64; 6] = [1, 5, 10, 17, 20, 21];

/// `fixpoint counterexample`: exact verification plus the contraction demo.
pub fn counterexample(
    horizon: u64,
    epsilon: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<Outcome> {
    if horizon == 0 {
        return Err(CliError::Argument("--n must be >= 1".into()));
    }
    let eps = epsilon
        .map(|s| {
            let e = parse_exact(s).map_err(|e| CliError::Argument(format!("--epsilon: {e}")))?;
            if e <= ExactScalar::from_integer(0.into()) {
                return Err(CliError::Argument("--epsilon must be > 0".into()));
            }
            Ok(e)
        })
        .transpose()?;
    let w = |source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    };

    let report = match verify_note_claims(horizon, eps.as_ref()) {
        Ok(r) => r,
        Err(e) => {
            writeln!(stdout, "FAILED: {e}").map_err(w)?;
            return Ok(Outcome::CheckFailure);
        }
    };
    writeln!(
        stdout,
        "doubling map T x = 2x, y_n = 1 + 1/n, x_(n+1) = 1 - 1/n"
    )
    .map_err(w)?;
    writeln!(stdout, "verified exactly for every n <= {horizon}:").map_err(w)?;
    for claim in [
        "|y_n - x_(n+1)| = 2/n",
        "|T^n y_n - T^n x_(n+1)| = 2^(n+1)/n",
        "2^(n+1) >= n",
        "|T^n y_n - T^n x_(n+1)| >= 1",
        "n * gap(n) = 2^(n+1) strictly increasing",
    ] {
        writeln!(stdout, "  ok  {claim}").map_err(w)?;
    }
    let mut sampled: Vec<u64> = GAP_SAMPLES
        .iter()
        .copied()
        .filter(|&n| n <= horizon)
        .collect();
    if !sampled.contains(&horizon) {
        sampled.push(horizon);
    }
    for n in sampled {
        let g = counterexample::gap(n).map_err(|e| CliError::Argument(e.to_string()))?;
        writeln!(stdout, "gap({n}) = {}", format_exact(&g)).map_err(w)?;
    }
    let at: Vec<String> = report.min_gap_at.iter().map(u64::to_string).collect();
    writeln!(
        stdout,
        "min gap = {} at n in {{{}}}",
        format_exact(&report.min_gap),
        at.join(", ")
    )
    .map_err(w)?;
    if let (Some(e), Some(t)) = (&report.epsilon, report.epsilon_threshold) {
        writeln!(
            stdout,
            "epsilon = {}: smallest n with |y_n - x_(n+1)| < epsilon is n = {t}",
            format_exact(e)
        )
        .map_err(w)?;
    }

    let one = ExactScalar::from_integer(1.into());
    let half = ExactScalar::new(1.into(), 2.into());
    let demo = match corrected_demo(&half, horizon, &one, &one) {
        Ok(d) => d,
        Err(e) => {
            writeln!(stdout, "FAILED corrected demo: {e}").map_err(w)?;
            return Ok(Outcome::CheckFailure);
        }
    };
    writeln!(
        stdout,
        "contraction T x = x/2, M = L = 1: d_n = M |T^n y_n - T^n x_(n+1)| <= M L 2/n"
    )
    .map_err(w)?;
    for n0 in TAIL_SAMPLES.iter().copied().filter(|&n| n <= horizon) {
        writeln!(
            stdout,
            "  max d_n over n >= {n0}: {}",
            format_exact(demo.tail_max_from(n0))
        )
        .map_err(w)?;
    }
    let micro = ExactScalar::new(1.into(), 1_000_000.into());
    match demo.tail_below(&micro) {
        Some(n0) => writeln!(stdout, "  tail max < 1/1000000 from n0 = {n0}"),
        None => writeln!(
            stdout,
            "  tail max stays >= 1/1000000 within n <= {horizon}"
        ),
    }
    .map_err(w)?;
    writeln!(stdout, "all exact checks passed").map_err(w)?;
    Ok(Outcome::Success)
}

fn describe(op: &OperatorSpec) -> String {
    match op.kind() {
        OperatorKind::Scaling { c } => format!("scaling(c = {c}) on R^{}", op.dim()),
        OperatorKind::TowardPoint { center, r } => {
            format!("toward_point(center = {:?}, r = {r})", center.coords())
        }
        OperatorKind::Affine { matrix, offset } => {
            format!("affine(A = {matrix:?}, b = {:?})", offset.coords())
        }
        OperatorKind::Clamp { lo, hi } => format!("clamp([{lo}, {hi}]) on R^{}", op.dim()),
    }
}

fn run_check(plan: &ClassifyPlan, check: &CheckPlan, tag: NormTag, seed: u64) -> CheckSection {
    let t = &plan.operator;
    let dim = t.dim();
    let pairs = || sample_pairs(dim, plan.samples, seed, plan.radius);
    let points = || sample_points(dim, plan.samples, seed, plan.radius);
    let name = check.name();
    let section = |h: u64, r: fixpoint_core::Result<CheckReport>| match r {
        Ok(r) => CheckSection::from_report(name, h, seed, &r),
        Err(CoreError::NotFixedPoint { residual }) => CheckSection::errored(
            name,
            h,
            seed,
            CoreError::NotFixedPoint { residual }.to_string(),
            Some(residual),
        ),
        Err(e) => CheckSection::errored(name, h, seed, e.to_string(), None),
    };
    match check {
        CheckPlan::LipschitzEstimate { n } => {
            match estimate_power_lipschitz(t, *n, &pairs(), tag) {
                Ok(est) => {
                    let mut s = CheckSection::from_report(
                        name,
                        *n,
                        seed,
                        &CheckReport {
                            verdict: fixpoint_core::classes::Verdict::Pass,
                            first_violation: None,
                            n_tested: 1,
                            samples_tested: plan.samples,
                            note: None,
                        },
                    );
                    s.estimate = Some(est);
                    s.note = Some(format!("lower bound on Lip(T^{n}) over the sampled pairs"));
                    s
                }
                Err(e) => CheckSection::errored(name, *n, seed, e.to_string(), None),
            }
        }
        CheckPlan::UniformLipschitz { lipschitz, n_max } => section(
            *n_max,
            check_uniform_lipschitz(t, *lipschitz, *n_max, &pairs(), tag),
        ),
        CheckPlan::AsymptoticPseudocontractive { k, n_max } => section(
            *n_max,
            check_asymptotic_pseudocontractivity(t, *k, *n_max, &pairs(), tag),
        ),
        CheckPlan::StarCondition {
            xstar,
            k,
            psi,
            n_max,
        } => {
            let mut samples = points();
            samples.push(xstar.clone());
            section(
                *n_max,
                check_star_condition(t, xstar, *k, *psi, *n_max, &samples, tag),
            )
        }
        CheckPlan::UniqueFixedPoint { xstar } => {
            let mut candidates = points();
            candidates.push(xstar.clone());
            section(1, assert_unique_fixed_point(t, xstar, &candidates, tag))
        }
    }
}

/// Builds the classify report without touching the filesystem.
pub fn classify_report(
    cfg: &ExperimentConfig,
    seed_override: Option<u64>,
) -> Result<ClassifyReport> {
    let plan = cfg.classify_plan()?;
    let tag = cfg.norm()?;
    let seed = cfg.effective_seed(seed_override);
    let seed_source = if seed_override.is_some() {
        config::SEED_ENV.to_string()
    } else if cfg.seed.is_some() {
        "config".to_string()
    } else {
        "default".to_string()
    };
    let checks: Vec<CheckSection> = plan
        .checks
        .iter()
        .map(|c| run_check(&plan, c, tag, seed))
        .collect();
    let all_passed = checks
        .iter()
        .all(|c| c.verdict == crate::report::VerdictOut::Pass);
    Ok(ClassifyReport {
        schema_version: SCHEMA_VERSION,
        seed,
        seed_source,
        norm_p: tag.p(),
        operator: describe(&plan.operator),
        all_passed,
        checks,
    })
}

/// `fixpoint classify`: runs the selected checks and writes a JSON report.
pub fn classify(
    config_path: &Path,
    out: Option<&Path>,
    seed_override: Option<u64>,
    stdout: &mut dyn Write,
) -> Result<Outcome> {
    let cfg = config::load(config_path)?;
    let report = classify_report(&cfg, seed_override)?;
    let out = out_path(out, &cfg, "report")?;
    let w = io_err(&out);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    std::fs::write(&out, text).map_err(&w)?;
    for c in &report.checks {
        let detail = match (&c.first_violation, &c.error, c.estimate) {
            (_, Some(e), _) => format!(" ({e})"),
            (Some(v), _, _) => format!(" (first violation at n = {}: {} > {})", v.n, v.lhs, v.rhs),
            (_, _, Some(est)) => format!(" (estimate {est})"),
            _ => String::new(),
        };
        writeln!(stdout, "{}: {:?}{detail}", c.check, c.verdict).map_err(&w)?;
    }
    writeln!(
        stdout,
        "seed {} ({}); report written to {}",
        report.seed,
        report.seed_source,
        out.display()
    )
    .map_err(&w)?;
    Ok(if report.all_passed {
        Outcome::Success
    } else {
        Outcome::CheckFailure
    })
}

/// `fixpoint sweep`: every `*.json` in `dir`, run concurrently. A config with an
/// `iteration` section writes `<stem>.csv`; a `classify` section writes
/// `<stem>.report.json`. Returns the most severe outcome.
pub fn sweep(dir: &Path, seed_override: Option<u64>, stdout: &mut dyn Write) -> Result<Outcome> {
    let mut configs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|source| CliError::ReadConfig {
            path: dir.to_path_buf(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !is_report(p))
        .collect();
    configs.sort();

    let results: Vec<(PathBuf, Vec<u8>, Outcome)> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|path| {
                s.spawn(move || {
                    let mut buf = Vec::new();
                    let outcome = sweep_one(path, seed_override, &mut buf).unwrap_or_else(|e| {
                        let _ = writeln!(buf, "error: {e}");
                        e.outcome()
                    });
                    (path.clone(), buf, outcome)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let w = |source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    };
    let mut worst = Outcome::Success;
    for (path, buf, outcome) in results {
        writeln!(stdout, "== {} (exit {})", path.display(), outcome.code()).map_err(w)?;
        stdout.write_all(&buf).map_err(w)?;
        worst = worst.worst(outcome);
    }
    Ok(worst)
}

fn is_report(p: &Path) -> bool {
    p.to_string_lossy().ends_with(".report.json")
}

fn sweep_one(path: &Path, seed_override: Option<u64>, buf: &mut Vec<u8>) -> Result<Outcome> {
    let cfg = config::load(path)?;
    let stem = path.with_extension("");
    let mut outcome = Outcome::Success;
    if cfg.iteration.is_some() {
        let csv = stem.with_extension("csv");
        outcome = outcome.worst(iterate(path, Some(&csv), buf)?);
    }
    if cfg.classify.is_some() {
        let report = stem.with_extension("report.json");
        outcome = outcome.worst(classify(path, Some(&report), seed_override, buf)?);
    }
    if cfg.iteration.is_none() && cfg.classify.is_none() {
        return Err(CliError::Invalid {
            field: "iteration".into(),
            message: "config has neither an iteration nor a classify section".into(),
        });
    }
    Ok(outcome)
}
