//! Multi-step Mann-type iteration for a family `T_1, ..., T_p`, `p >= 2`.
//!
//! At step `n`, with weights `α_n` and `β_n^1..β_n^{p-1}`:
//!
//! ```text
//! y_n^{p-1} = (1 - β_n^{p-1}) x_n + β_n^{p-1} T_p^n x_n
//! y_n^i     = (1 - β_n^i) x_n     + β_n^i T_{i+1}^n y_n^{i+1}     i = p-2, ..., 1
//! x_{n+1}   = (1 - α_n) x_n       + α_n T_1^n y_n^1
//! ```
//!
//! Stages are evaluated bottom-up: each `y^i` consumes `y^{i+1}`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::classes::CheckReport;
use crate::error::{config, invalid, Error, Result, Stage};
use crate::operator::OperatorSpec;
use crate::space::{distance, within_bound, NormTag, Point};

/// Any coordinate beyond this magnitude aborts the run.
pub const DIVERGENCE_BOUND: f64 = 1e150;
pub const DEFAULT_N_MAX: u64 = 10_000;

/// `s_n = a / (n + b)^q`, clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSpec {
    a: f64,
    b: f64,
    q: f64,
}

impl ScheduleSpec {
    pub fn new(a: f64, b: f64, q: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && a <= 1.0) {
            return Err(invalid("schedule requires 0 < a <= 1"));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid("schedule requires b >= 0"));
        }
        if !(q.is_finite() && q >= 0.0) {
            return Err(invalid("schedule requires q >= 0"));
        }
        Ok(ScheduleSpec { a, b, q })
    }

    /// The all-zero schedule is not expressible as `a/(n+b)^q` with `a > 0`;
    /// this is the degenerate weight used for Mann reductions.
    pub const ZERO: ScheduleSpec = ScheduleSpec {
        a: 0.0,
        b: 0.0,
        q: 0.0,
    };

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn value(&self, n: u64) -> f64 {
        (self.a / libm::pow(n as f64 + self.b, self.q)).clamp(0.0, 1.0)
    }

    /// `s_n -> 0`.
    pub fn vanishes(&self) -> bool {
        self.a == 0.0 || self.q > 0.0
    }

    /// `Σ s_n = ∞`, by the p-series rule on `q`.
    pub fn sum_diverges(&self) -> bool {
        self.a > 0.0 && self.q <= 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    operators: Vec<OperatorSpec>,
    alpha: ScheduleSpec,
    betas: Vec<ScheduleSpec>,
    x1: Point,
    xstar: Option<Point>,
    n_max: u64,
    tol: f64,
    dn_scale: f64,
    norm: NormTag,
}

impl IterationConfig {
    /// `p` operators `T_1..T_p` and `p - 1` inner schedules `β^1..β^{p-1}`.
    pub fn new(
        p: usize,
        operators: Vec<OperatorSpec>,
        alpha: ScheduleSpec,
        betas: Vec<ScheduleSpec>,
        x1: Point,
    ) -> Result<Self> {
        if p < 2 {
            return Err(config("p", format!("p ≥ 2 required (got {p})")));
        }
        if operators.len() != p {
            return Err(config(
                "operators",
                format!("expected {p} operators, found {}", operators.len()),
            ));
        }
        if betas.len() != p - 1 {
            return Err(config(
                "betas",
                format!("expected {} beta schedules, found {}", p - 1, betas.len()),
            ));
        }
        let dim = x1.dim();
        for (i, t) in operators.iter().enumerate() {
            if t.dim() != dim {
                return Err(config(
                    format!("operators[{i}]"),
                    format!("dimension {} does not match x1 dimension {dim}", t.dim()),
                ));
            }
        }
        Ok(IterationConfig {
            operators,
            alpha,
            betas,
            x1,
            xstar: None,
            n_max: DEFAULT_N_MAX,
            tol: 0.0,
            dn_scale: 1.0,
            norm: NormTag::EUCLIDEAN,
        })
    }

    pub fn with_xstar(mut self, xstar: Point) -> Result<Self> {
        if xstar.dim() != self.x1.dim() {
            return Err(config(
                "xstar",
                format!(
                    "dimension {} does not match x1 dimension {}",
                    xstar.dim(),
                    self.x1.dim()
                ),
            ));
        }
        self.xstar = Some(xstar);
        Ok(self)
    }

    pub fn with_n_max(mut self, n_max: u64) -> Result<Self> {
        if n_max == 0 {
            return Err(config("n_max", "n_max must be >= 1"));
        }
        self.n_max = n_max;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(config("tol", "tol must be finite and >= 0"));
        }
        self.tol = tol;
        Ok(self)
    }

    /// The diagnostic constant `M` in `d_n = M ‖T_1^n y_n^1 - T_1^n x_{n+1}‖`.
    pub fn with_dn_scale(mut self, m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(config("dn_scale", "M must be > 0"));
        }
        self.dn_scale = m;
        Ok(self)
    }

    pub fn with_norm(mut self, norm: NormTag) -> Self {
        self.norm = norm;
        self
    }

    pub fn p(&self) -> usize {
        self.operators.len()
    }
    pub fn operators(&self) -> &[OperatorSpec] {
        &self.operators
    }
    pub fn alpha(&self) -> ScheduleSpec {
        self.alpha
    }
    pub fn betas(&self) -> &[ScheduleSpec] {
        &self.betas
    }
    pub fn x1(&self) -> &Point {
        &self.x1
    }
    pub fn xstar(&self) -> Option<&Point> {
        self.xstar.as_ref()
    }
    pub fn n_max(&self) -> u64 {
        self.n_max
    }
    pub fn tol(&self) -> f64 {
        self.tol
    }
    pub fn dn_scale(&self) -> f64 {
        self.dn_scale
    }
    pub fn norm(&self) -> NormTag {
        self.norm
    }
    pub fn dim(&self) -> usize {
        self.x1.dim()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    /// `α_n -> 0` and `β_n^1 -> 0`.
    pub cond_i_holds: bool,
    /// `Σ α_n = ∞`.
    pub cond_ii_holds: bool,
    pub p_valid: bool,
    pub notes: String,
}

/// Classifies the step-size conditions from the schedule exponents alone.
pub fn classify_hypotheses(config: &IterationConfig) -> HypothesisReport {
    let alpha = config.alpha;
    let beta1 = config.betas.first().copied().unwrap_or(ScheduleSpec::ZERO);
    let cond_i_holds = alpha.vanishes() && beta1.vanishes();
    let cond_ii_holds = alpha.sum_diverges();
    let p_valid = config.p() >= 2;
    let mut notes = String::new();
    if !alpha.vanishes() {
        notes.push_str("alpha_n does not tend to 0; ");
    }
    if !beta1.vanishes() {
        notes.push_str("beta_n^1 does not tend to 0; ");
    }
    if !cond_ii_holds {
        notes.push_str("sum of alpha_n converges; ");
    }
    if notes.is_empty() {
        notes.push_str("step-size conditions hold");
    } else {
        notes.truncate(notes.len() - 2);
    }
    HypothesisReport {
        cond_i_holds,
        cond_ii_holds,
        p_valid,
        notes,
    }
}

/// `x + t (v - x)` per coordinate, kept between `x` and `v`.
///
/// When `v == x` (or `t == 0`) the result is `x` bit for bit; `t == 1` gives `v`.
pub(crate) fn combine(x: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    if t == 1.0 {
        return v.to_vec();
    }
    x.iter()
        .zip(v)
        .map(|(&a, &b)| {
            let c = a + t * (b - a);
            if a <= b {
                c.clamp(a, b)
            } else {
                c.clamp(b, a)
            }
        })
        .collect()
}

fn guard(coords: Vec<f64>, n: u64, stage: Stage) -> Result<Point> {
    if coords
        .iter()
        .any(|c| !c.is_finite() || c.abs() > DIVERGENCE_BOUND)
    {
        return Err(Error::Divergence { n, stage });
    }
    Ok(Point::from_raw(coords))
}

fn power(t: &OperatorSpec, n: u64, x: &Point, stage: Stage) -> Result<Point> {
    match t.power_apply(n, x) {
        Ok(p) => guard(p.into_coords(), n, stage),
        Err(Error::Range { .. }) => Err(Error::Divergence { n, stage }),
        Err(e) => Err(e),
    }
}

/// Result of one application of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub x_next: Point,
    /// `[y_n^1, ..., y_n^{p-1}]`.
    pub ys: Vec<Point>,
    /// `T_1^n y_n^1`, reused by the `d_n` diagnostic.
    pub t1_image: Point,
}

/// One step of the scheme from `x_n`.
pub fn step(config: &IterationConfig, x_n: &Point, n: u64) -> Result<Step> {
    if n == 0 {
        return Err(invalid("step index n must be >= 1"));
    }
    x_n.check_dim(config.dim())?;
    let p = config.p();
    let mut ys: Vec<Point> = Vec::with_capacity(p - 1);
    // y^{p-1} consumes x_n; each lower stage consumes the one above it
    let mut input = x_n.clone();
    for i in (1..p).rev() {
        let stage = Stage::Inner(i);
        let image = power(&config.operators[i], n, &input, stage)?;
        let beta = config.betas[i - 1].value(n);
        let y = guard(combine(x_n.coords(), image.coords(), beta), n, stage)?;
        input = y.clone();
        ys.push(y);
    }
    ys.reverse();
    let t1_image = power(&config.operators[0], n, &ys[0], Stage::Outer)?;
    let alpha = config.alpha.value(n);
    let x_next = guard(
        combine(x_n.coords(), t1_image.coords(), alpha),
        n,
        Stage::Outer,
    )?;
    Ok(Step {
        x_next,
        ys,
        t1_image,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: u64,
    pub x_n: Point,
    /// `[y_n^1, ..., y_n^{p-1}]`.
    pub ys: Vec<Point>,
    pub x_next: Point,
    /// `‖x_n - x*‖` when `x*` is known.
    pub residual: Option<f64>,
    /// `‖y_n^1 - x_{n+1}‖`.
    pub pair_gap: f64,
    /// `M ‖T_1^n y_n^1 - T_1^n x_{n+1}‖`.
    pub d_n: f64,
    /// `‖x_{n+1} - x_n‖`; recorded only, never used to stop.
    pub step_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Residual at record `n` fell to `tol` or below.
    Converged {
        n: u64,
    },
    HorizonReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub termination: Termination,
}

impl Trace {
    pub fn last(&self) -> &TraceRecord {
        self.records
            .last()
            .expect("trace holds at least one record")
    }
}

/// A failed run together with every record produced before the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub error: Error,
    pub partial: Vec<TraceRecord>,
}

impl core::fmt::Display for RunError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} after {} complete steps",
            self.error,
            self.partial.len()
        )
    }
}

impl core::error::Error for RunError {}

/// Builds the record for step `n` from `x_n` and the computed step.
fn record(config: &IterationConfig, n: u64, x_n: Point, step: Step) -> Result<TraceRecord> {
    let tag = config.norm;
    let residual = match &config.xstar {
        Some(s) => Some(distance(&x_n, s, tag)?),
        None => None,
    };
    let t1_next = power(&config.operators[0], n, &step.x_next, Stage::Diagnostic)?;
    let pair_gap = distance(&step.ys[0], &step.x_next, tag)?;
    let d_n = config.dn_scale * distance(&step.t1_image, &t1_next, tag)?;
    let step_size = distance(&step.x_next, &x_n, tag)?;
    Ok(TraceRecord {
        n,
        x_n,
        ys: step.ys,
        x_next: step.x_next,
        residual,
        pair_gap,
        d_n,
        step_size,
    })
}

/// Iterates from `x_1` until `n_max`, or until the residual of `x_n` is at most
/// `tol` when `x*` is supplied. Every record carries its step diagnostics,
/// including the terminating one.
pub fn run(config: &IterationConfig) -> core::result::Result<Trace, RunError> {
    let mut records: Vec<TraceRecord> = Vec::new();
    let mut x = config.x1.clone();
    for n in 1..=config.n_max {
        let rec = step(config, &x, n)
            .and_then(|s| record(config, n, x.clone(), s))
            .map_err(|error| RunError {
                error,
                partial: records.clone(),
            })?;
        let converged = rec.residual.is_some_and(|r| r <= config.tol);
        x = rec.x_next.clone();
        records.push(rec);
        if converged {
            return Ok(Trace {
                records,
                termination: Termination::Converged { n },
            });
        }
    }
    Ok(Trace {
        records,
        termination: Termination::HorizonReached,
    })
}

/// Checks `d_n <= M L ‖y_n^1 - x_{n+1}‖` on every record.
pub fn dn_bound_check(trace: &[TraceRecord], lipschitz: f64, m: f64) -> Result<CheckReport> {
    if trace.is_empty() {
        return Err(invalid("empty trace"));
    }
    if !(lipschitz.is_finite() && lipschitz > 0.0 && m.is_finite() && m > 0.0) {
        return Err(invalid("L and M must be > 0"));
    }
    for rec in trace {
        let rhs = m * lipschitz * rec.pair_gap;
        if !within_bound(rec.d_n, rhs) {
            let mut witness = rec.ys.first().cloned().into_iter().collect::<Vec<_>>();
            witness.push(rec.x_next.clone());
            let v = crate::classes::Violation {
                n: rec.n,
                witness,
                lhs: rec.d_n,
                rhs,
            };
            return Ok(CheckReport {
                verdict: crate::classes::Verdict::Fail,
                first_violation: Some(v),
                n_tested: rec.n,
                samples_tested: 1,
                note: None,
            });
        }
    }
    Ok(CheckReport {
        verdict: crate::classes::Verdict::Pass,
        first_violation: None,
        n_tested: trace.len() as u64,
        samples_tested: 1,
        note: None,
    })
}

/// A trace in `R^1` built from the sequences `y_n^1 = 1 + 1/n`, `x_{n+1} = 1 - 1/n`
/// pushed through `T_1`, with `d_n = M |T_1^n y_n^1 - T_1^n x_{n+1}|`.
///
/// `x_1` is not determined by the sequences and is set to 1.
pub fn example_trace(t1: &OperatorSpec, n_max: u64, m: f64) -> Result<Vec<TraceRecord>> {
    if t1.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: t1.dim(),
        });
    }
    let tag = NormTag::EUCLIDEAN;
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let nf = n as f64;
        let y = Point::new(alloc::vec![1.0 + 1.0 / nf])?;
        let x_next = Point::new(alloc::vec![1.0 - 1.0 / nf])?;
        let x_n = if n == 1 {
            Point::new(alloc::vec![1.0])?
        } else {
            Point::new(alloc::vec![1.0 - 1.0 / (nf - 1.0)])?
        };
        let ty = power(t1, n, &y, Stage::Outer)?;
        let tx = power(t1, n, &x_next, Stage::Diagnostic)?;
        out.push(TraceRecord {
            n,
            pair_gap: distance(&y, &x_next, tag)?,
            d_n: m * distance(&ty, &tx, tag)?,
            step_size: distance(&x_next, &x_n, tag)?,
            x_n,
            ys: alloc::vec![y],
            x_next,
            residual: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn half(dim: usize) -> OperatorSpec {
        OperatorSpec::toward_point(Point::zeros(dim).unwrap(), 0.5).unwrap()
    }

    fn harmonic() -> ScheduleSpec {
        ScheduleSpec::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn schedule_values() {
        assert_eq!(ScheduleSpec::new(1.0, 1.0, 1.0).unwrap().value(1), 0.5);
        assert_eq!(ScheduleSpec::new(1.0, 0.0, 0.0).unwrap().value(7), 1.0);
        assert_eq!(ScheduleSpec::new(1.0, 0.0, 0.5).unwrap().value(4), 0.5);
        assert!(ScheduleSpec::new(0.0, 0.0, 1.0).is_err());
        assert!(ScheduleSpec::new(1.5, 0.0, 1.0).is_err());
        assert!(ScheduleSpec::new(1.0, -1.0, 1.0).is_err());
        assert!(ScheduleSpec::new(1.0, 0.0, -1.0).is_err());
    }

    fn config_with(alpha_q: f64, beta_q: f64) -> IterationConfig {
        IterationConfig::new(
            2,
            vec![half(1), half(1)],
            ScheduleSpec::new(1.0, 1.0, alpha_q).unwrap(),
            vec![ScheduleSpec::new(1.0, 1.0, beta_q).unwrap()],
            pt(&[1.0]),
        )
        .unwrap()
    }

    #[test]
    fn classifier_examples() {
        let r = classify_hypotheses(&config_with(1.0, 1.0));
        assert!(r.cond_i_holds && r.cond_ii_holds && r.p_valid);
        let r = classify_hypotheses(&config_with(2.0, 1.0));
        assert!(r.cond_i_holds && !r.cond_ii_holds);
        let r = classify_hypotheses(&config_with(0.0, 1.0));
        assert!(!r.cond_i_holds && r.cond_ii_holds);
    }

    #[test]
    fn rejects_p_below_two() {
        let err =
            IterationConfig::new(1, vec![half(1)], harmonic(), vec![], pt(&[1.0])).unwrap_err();
        match err {
            Error::Config { field, message } => {
                assert_eq!(field, "p");
                assert!(message.contains("p ≥ 2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_counts_and_dims() {
        assert!(
            IterationConfig::new(2, vec![half(1)], harmonic(), vec![harmonic()], pt(&[1.0]))
                .is_err()
        );
        assert!(
            IterationConfig::new(2, vec![half(1), half(1)], harmonic(), vec![], pt(&[1.0]))
                .is_err()
        );
        assert!(IterationConfig::new(
            2,
            vec![half(1), half(2)],
            harmonic(),
            vec![harmonic()],
            pt(&[1.0])
        )
        .is_err());
    }

    #[test]
    fn first_step_hand_value() {
        let cfg = config_with(1.0, 1.0);
        let s = step(&cfg, &pt(&[1.0]), 1).unwrap();
        assert_eq!(s.ys, vec![pt(&[0.75])]);
        assert_eq!(s.x_next, pt(&[11.0 / 16.0]));
    }

    #[test]
    fn zero_alpha_freezes_iterate() {
        let cfg = IterationConfig::new(
            3,
            vec![half(2), OperatorSpec::scaling(3.0, 2).unwrap(), half(2)],
            ScheduleSpec::ZERO,
            vec![harmonic(), harmonic()],
            pt(&[1.5, -2.0]),
        )
        .unwrap();
        for n in 1..20 {
            assert_eq!(
                step(&cfg, &pt(&[1.5, -2.0]), n).unwrap().x_next,
                pt(&[1.5, -2.0])
            );
        }
    }

    #[test]
    fn zero_betas_reduce_to_mann() {
        let t1 = OperatorSpec::scaling(0.75, 1).unwrap();
        let cfg = IterationConfig::new(
            3,
            vec![t1.clone(), half(1), OperatorSpec::scaling(5.0, 1).unwrap()],
            harmonic(),
            vec![ScheduleSpec::ZERO, ScheduleSpec::ZERO],
            pt(&[2.0]),
        )
        .unwrap();
        let x = pt(&[2.0]);
        for n in 1..10 {
            let s = step(&cfg, &x, n).unwrap();
            assert!(s.ys.iter().all(|y| *y == x));
            let tx = t1.power_apply(n, &x).unwrap();
            let alpha = 1.0 / (n as f64 + 1.0);
            let expect = 2.0 + alpha * (tx.coords()[0] - 2.0);
            assert_eq!(s.x_next.coords()[0], expect);
        }
    }

    #[test]
    fn converges_to_fixed_point() {
        let cfg = config_with(1.0, 1.0)
            .with_xstar(pt(&[0.0]))
            .unwrap()
            .with_tol(1e-3)
            .unwrap();
        let trace = run(&cfg).unwrap();
        let last = trace.last();
        assert!(last.residual.unwrap() <= 1e-3);
        assert_eq!(trace.termination, Termination::Converged { n: last.n });
        for (i, r) in trace.records.iter().enumerate() {
            assert_eq!(r.n, i as u64 + 1);
        }
    }

    #[test]
    fn fixed_point_start_stays_put() {
        let xstar = pt(&[0.3, -1.7]);
        let t = OperatorSpec::toward_point(xstar.clone(), 0.25).unwrap();
        let cfg = IterationConfig::new(
            2,
            vec![t.clone(), t],
            harmonic(),
            vec![harmonic()],
            xstar.clone(),
        )
        .unwrap()
        .with_n_max(50)
        .unwrap();
        let trace = run(&cfg).unwrap();
        assert_eq!(trace.records.len(), 50);
        for r in &trace.records {
            assert_eq!(r.x_n, xstar);
            assert_eq!(r.d_n, 0.0);
            assert_eq!(r.pair_gap, 0.0);
        }
        let with_star = cfg.clone().with_xstar(xstar.clone()).unwrap();
        let t2 = run(&with_star).unwrap();
        assert_eq!(t2.records.len(), 1);
        assert_eq!(t2.records[0].residual, Some(0.0));
    }

    #[test]
    fn doubling_diverges_with_partial_trace() {
        let cfg = IterationConfig::new(
            2,
            vec![OperatorSpec::scaling(2.0, 1).unwrap(), half(1)],
            harmonic(),
            vec![harmonic()],
            pt(&[1.0]),
        )
        .unwrap();
        let err = run(&cfg).unwrap_err();
        match err.error {
            Error::Divergence { n, .. } => {
                assert_eq!(err.partial.len() as u64, n - 1);
                assert!(n > 10 && n < 1000);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dn_bound_examples() {
        let cfg = config_with(1.0, 1.0).with_n_max(200).unwrap();
        let trace = run(&cfg).unwrap();
        assert!(dn_bound_check(&trace.records, 0.5, 1.0).unwrap().passed());

        let xstar = pt(&[2.0]);
        let t = OperatorSpec::toward_point(xstar.clone(), 0.5).unwrap();
        let fixed =
            IterationConfig::new(2, vec![t.clone(), t], harmonic(), vec![harmonic()], xstar)
                .unwrap()
                .with_n_max(20)
                .unwrap();
        let trace = run(&fixed).unwrap();
        for l in [1e-6, 1.0, 1e6] {
            assert!(dn_bound_check(&trace.records, l, 1.0).unwrap().passed());
        }

        let dbl = example_trace(&OperatorSpec::scaling(2.0, 1).unwrap(), 60, 1.0).unwrap();
        let r = dn_bound_check(&dbl, 1000.0, 1.0).unwrap();
        // ratio d_n / pair_gap = 2^n first exceeds 1000 at n = 10
        assert_eq!(r.first_violation.unwrap().n, 10);
        assert!(dn_bound_check(&[], 1.0, 1.0).is_err());
    }

    #[test]
    fn example_trace_values() {
        let tr = example_trace(&half(1), 20, 1.0).unwrap();
        for r in &tr {
            let n = r.n as f64;
            assert!((r.pair_gap - 2.0 / n).abs() < 1e-15);
            let expect = libm::pow(2.0, 1.0 - n) / n;
            assert!((r.d_n - expect).abs() <= 1e-13 * expect);
        }
        assert!(dn_bound_check(&tr, 0.5, 1.0).unwrap().passed());
    }

    #[test]
    fn combine_stays_between_endpoints() {
        let x = [0.1, 5.0, -3.0];
        let v = [0.7, 5.0, -3.3];
        for t in [0.0, 0.3, 0.999, 1.0] {
            let c = combine(&x, &v, t);
            for i in 0..3 {
                assert!(c[i] >= x[i].min(v[i]) && c[i] <= x[i].max(v[i]));
            }
        }
        assert_eq!(combine(&x, &v, 1.0), v.to_vec());
        assert_eq!(combine(&x, &v, 0.0), x.to_vec());
    }
}
