//! Horizon-bounded checkers for operator classes.
//!
//! Every "for all n >= 1" is truncated to `n <= n_max`. A failure is a certain
//! refutation; a pass only certifies the tested horizon and sample set.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::operator::OperatorSpec;
use crate::space::{distance, duality_pairing, norm, within_bound, NormTag, Point, REL_TOL};

pub const DEFAULT_HORIZON: u64 = 64;
/// Absolute residual below which `T(x) = x` is accepted.
pub const FIXED_POINT_TOL: f64 = 1e-12;
/// Distance above which two fixed points count as distinct.
pub const SEPARATION_TOL: f64 = 1e-9;

/// `k_n = 1 + c / n^s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSequence {
    c: f64,
    s: f64,
}

impl KSequence {
    /// `k_n ≡ 1`.
    pub const ONE: KSequence = KSequence { c: 0.0, s: 1.0 };

    pub fn new(c: f64, s: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(invalid("k-sequence requires c >= 0"));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid("k-sequence requires s > 0"));
        }
        Ok(KSequence { c, s })
    }

    pub fn value(&self, n: u64) -> f64 {
        1.0 + self.c / libm::pow(n as f64, self.s)
    }
}

/// `Ψ(t) = λ t^m`, strictly increasing with `Ψ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiSpec {
    lambda: f64,
    m: f64,
}

impl PsiSpec {
    pub fn new(lambda: f64, m: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("psi requires lambda > 0"));
        }
        if !(m.is_finite() && m >= 1.0) {
            return Err(invalid("psi requires m >= 1"));
        }
        Ok(PsiSpec { lambda, m })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.lambda * libm::pow(t, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// First `(n, witness)` at which an inequality `lhs <= rhs` broke.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub n: u64,
    pub witness: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub first_violation: Option<Violation>,
    /// Number of powers `n` that were evaluated.
    pub n_tested: u64,
    /// Non-degenerate samples (points or pairs) used per power.
    pub samples_tested: usize,
    /// Free-form remark about how the inequality was read.
    pub note: Option<&'static str>,
}

impl CheckReport {
    fn pass(n_tested: u64, samples_tested: usize) -> Self {
        CheckReport {
            verdict: Verdict::Pass,
            first_violation: None,
            n_tested,
            samples_tested,
            note: None,
        }
    }

    fn fail(v: Violation, samples_tested: usize) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            n_tested: v.n,
            first_violation: Some(v),
            samples_tested,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn check_horizon(n_max: u64) -> Result<()> {
    if n_max == 0 {
        return Err(invalid("horizon n_max must be >= 1"));
    }
    Ok(())
}

fn nondegenerate(pairs: &[(Point, Point)], dim: usize) -> Result<Vec<&(Point, Point)>> {
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        pair.0.check_dim(dim)?;
        pair.1.check_dim(dim)?;
        if pair.0 != pair.1 {
            out.push(pair);
        }
    }
    if out.is_empty() {
        return Err(invalid("every pair is degenerate (x = y)"));
    }
    Ok(out)
}

fn power_ratio(t: &OperatorSpec, n: u64, x: &Point, y: &Point, tag: NormTag) -> Result<f64> {
    let tx = t.power_apply(n, x)?;
    let ty = t.power_apply(n, y)?;
    Ok(distance(&tx, &ty, tag)? / distance(x, y, tag)?)
}

/// `max ‖T^n x - T^n y‖ / ‖x - y‖` over the pairs: a lower bound on `Lip(T^n)`.
pub fn estimate_power_lipschitz(
    t: &OperatorSpec,
    n: u64,
    pairs: &[(Point, Point)],
    tag: NormTag,
) -> Result<f64> {
    let pairs = nondegenerate(pairs, t.dim())?;
    let mut best = 0.0_f64;
    for (x, y) in pairs {
        best = best.max(power_ratio(t, n, x, y, tag)?);
    }
    Ok(best)
}

/// `‖T^n x - T^n y‖ <= L ‖x - y‖` for `n <= n_max`.
///
/// The violation records `lhs` as the ratio `‖T^n x - T^n y‖ / ‖x - y‖` and `rhs = L`.
pub fn check_uniform_lipschitz(
    t: &OperatorSpec,
    lipschitz: f64,
    n_max: u64,
    pairs: &[(Point, Point)],
    tag: NormTag,
) -> Result<CheckReport> {
    if !(lipschitz.is_finite() && lipschitz > 0.0) {
        return Err(invalid("Lipschitz bound L must be > 0"));
    }
    check_horizon(n_max)?;
    let pairs = nondegenerate(pairs, t.dim())?;
    for n in 1..=n_max {
        for (x, y) in &pairs {
            let ratio = power_ratio(t, n, x, y, tag)?;
            if ratio > lipschitz * (1.0 + REL_TOL) {
                let v = Violation {
                    n,
                    witness: alloc::vec![x.clone(), y.clone()],
                    lhs: ratio,
                    rhs: lipschitz,
                };
                return Ok(CheckReport::fail(v, pairs.len()));
            }
        }
    }
    Ok(CheckReport::pass(n_max, pairs.len()))
}

/// `⟨T^n x - T^n y, j(x - y)⟩ <= k_n ‖x - y‖²` for `n <= n_max`.
pub fn check_asymptotic_pseudocontractivity(
    t: &OperatorSpec,
    k: KSequence,
    n_max: u64,
    pairs: &[(Point, Point)],
    tag: NormTag,
) -> Result<CheckReport> {
    check_horizon(n_max)?;
    let pairs = nondegenerate(pairs, t.dim())?;
    for n in 1..=n_max {
        let kn = k.value(n);
        for (x, y) in &pairs {
            let diff = x.sub(y)?;
            let image = t.power_apply(n, x)?.sub(&t.power_apply(n, y)?)?;
            let lhs = duality_pairing(&image, &diff, tag)?;
            let d = norm(&diff, tag);
            let rhs = kn * d * d;
            if !within_bound(lhs, rhs) {
                let v = Violation {
                    n,
                    witness: alloc::vec![x.clone(), y.clone()],
                    lhs,
                    rhs,
                };
                return Ok(CheckReport::fail(v, pairs.len()));
            }
        }
    }
    Ok(CheckReport::pass(n_max, pairs.len()))
}

/// `‖T x* - x*‖`, rejected above [`FIXED_POINT_TOL`].
pub fn require_fixed_point(t: &OperatorSpec, xstar: &Point, tag: NormTag) -> Result<()> {
    let residual = distance(&t.apply(xstar)?, xstar, tag)?;
    if residual > FIXED_POINT_TOL {
        return Err(Error::NotFixedPoint { residual });
    }
    Ok(())
}

pub const STAR_READING: &str = "right-hand side evaluated as k_n*||x - x*||^2 - psi(||x - x*||)";

/// `⟨T^n x - x*, j(x - x*)⟩ <= k_n ‖x - x*‖² - Ψ(‖x - x*‖)` for `n <= n_max`.
pub fn check_star_condition(
    t: &OperatorSpec,
    xstar: &Point,
    k: KSequence,
    psi: PsiSpec,
    n_max: u64,
    samples: &[Point],
    tag: NormTag,
) -> Result<CheckReport> {
    check_horizon(n_max)?;
    xstar.check_dim(t.dim())?;
    for x in samples {
        x.check_dim(t.dim())?;
    }
    if samples.is_empty() {
        return Err(invalid("no sample points"));
    }
    require_fixed_point(t, xstar, tag)?;
    for n in 1..=n_max {
        let kn = k.value(n);
        for x in samples {
            let diff = x.sub(xstar)?;
            let image = t.power_apply(n, x)?.sub(xstar)?;
            let lhs = duality_pairing(&image, &diff, tag)?;
            let d = norm(&diff, tag);
            let rhs = kn * d * d - psi.value(d);
            if !within_bound(lhs, rhs) {
                let v = Violation {
                    n,
                    witness: alloc::vec![x.clone()],
                    lhs,
                    rhs,
                };
                let mut report = CheckReport::fail(v, samples.len());
                report.note = Some(STAR_READING);
                return Ok(report);
            }
        }
    }
    let mut report = CheckReport::pass(n_max, samples.len());
    report.note = Some(STAR_READING);
    Ok(report)
}

/// Fails iff some candidate `y` with `‖T y - y‖ <= 1e-12` lies farther than
/// `1e-9` from `xstar`. The violation stores `lhs = ‖y - x*‖`, `rhs = 1e-9`.
pub fn assert_unique_fixed_point(
    t: &OperatorSpec,
    xstar: &Point,
    candidates: &[Point],
    tag: NormTag,
) -> Result<CheckReport> {
    xstar.check_dim(t.dim())?;
    for y in candidates {
        let residual = distance(&t.apply(y)?, y, tag)?;
        let sep = distance(y, xstar, tag)?;
        if residual <= FIXED_POINT_TOL && sep > SEPARATION_TOL {
            let v = Violation {
                n: 1,
                witness: alloc::vec![y.clone()],
                lhs: sep,
                rhs: SEPARATION_TOL,
            };
            return Ok(CheckReport::fail(v, candidates.len()));
        }
    }
    Ok(CheckReport::pass(1, candidates.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_pairs, sample_points};
    use alloc::vec;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn pairs(dim: usize) -> Vec<(Point, Point)> {
        sample_pairs(dim, 32, 11, 10.0)
    }

    const E: NormTag = NormTag::EUCLIDEAN;

    #[test]
    fn lipschitz_estimates() {
        let t = OperatorSpec::scaling(2.0, 2).unwrap();
        assert_eq!(estimate_power_lipschitz(&t, 1, &pairs(2), E).unwrap(), 2.0);
        assert_eq!(estimate_power_lipschitz(&t, 5, &pairs(2), E).unwrap(), 32.0);
        let id = OperatorSpec::scaling(1.0, 2).unwrap();
        for n in [1, 9, 100] {
            assert_eq!(estimate_power_lipschitz(&id, n, &pairs(2), E).unwrap(), 1.0);
        }
    }

    #[test]
    fn degenerate_pairs() {
        let t = OperatorSpec::scaling(2.0, 1).unwrap();
        let same = vec![(pt(&[1.0]), pt(&[1.0]))];
        assert!(estimate_power_lipschitz(&t, 1, &same, E).is_err());
        let mixed = vec![(pt(&[1.0]), pt(&[1.0])), (pt(&[1.0]), pt(&[3.0]))];
        assert_eq!(estimate_power_lipschitz(&t, 1, &mixed, E).unwrap(), 2.0);
    }

    #[test]
    fn uniform_lipschitz_examples() {
        let half = OperatorSpec::toward_point(pt(&[0.0]), 0.5).unwrap();
        assert!(check_uniform_lipschitz(&half, 0.5, 50, &pairs(1), E)
            .unwrap()
            .passed());

        let dbl = OperatorSpec::scaling(2.0, 1).unwrap();
        let r = check_uniform_lipschitz(&dbl, 100.0, 50, &pairs(1), E).unwrap();
        // first n with 2^n > 100
        let oracle = (1..=50u32).find(|&n| 2f64.powi(n as i32) > 100.0).unwrap();
        assert_eq!(oracle, 7);
        let v = r.first_violation.unwrap();
        assert_eq!(v.n, oracle as u64);
        assert_eq!(v.lhs, 128.0);

        let id = OperatorSpec::scaling(1.0, 3).unwrap();
        assert!(check_uniform_lipschitz(&id, 1.0, 40, &pairs(3), E)
            .unwrap()
            .passed());
    }

    #[test]
    fn pseudocontractivity_examples() {
        let id = OperatorSpec::scaling(1.0, 2).unwrap();
        assert!(
            check_asymptotic_pseudocontractivity(&id, KSequence::ONE, 64, &pairs(2), E)
                .unwrap()
                .passed()
        );

        let dbl = OperatorSpec::scaling(2.0, 2).unwrap();
        let k = KSequence::new(1.0, 1.0).unwrap();
        let r = check_asymptotic_pseudocontractivity(&dbl, k, 64, &pairs(2), E).unwrap();
        let v = r.first_violation.unwrap();
        // oracle: lhs = 2^n ‖x-y‖², rhs = (1 + 1/n) ‖x-y‖², first n with 2^n > 1 + 1/n
        let oracle = (1..=64u64)
            .find(|&n| (1u64 << n) as f64 > 1.0 + 1.0 / n as f64)
            .unwrap();
        assert_eq!(v.n, oracle);
        assert_eq!(v.n, 2);
        assert!((v.lhs / v.rhs - 4.0 / 1.5).abs() < 1e-12);

        let half = OperatorSpec::toward_point(pt(&[0.0, 0.0]), 0.5).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let tag = NormTag::new(p).unwrap();
            assert!(check_asymptotic_pseudocontractivity(
                &half,
                KSequence::ONE,
                64,
                &pairs(2),
                tag
            )
            .unwrap()
            .passed());
        }
    }

    #[test]
    fn star_condition_examples() {
        let half = OperatorSpec::toward_point(pt(&[0.0, 0.0]), 0.5).unwrap();
        let psi = PsiSpec::new(0.5, 2.0).unwrap();
        let samples = sample_points(2, 64, 3, 10.0);
        let r = check_star_condition(
            &half,
            &pt(&[0.0, 0.0]),
            KSequence::ONE,
            psi,
            64,
            &samples,
            E,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.note, Some(STAR_READING));

        let id = OperatorSpec::scaling(1.0, 2).unwrap();
        for psi in [
            PsiSpec::new(1.0, 1.0).unwrap(),
            PsiSpec::new(0.01, 3.0).unwrap(),
        ] {
            for x in &samples {
                let r = check_star_condition(
                    &id,
                    &pt(&[0.0, 0.0]),
                    KSequence::ONE,
                    psi,
                    4,
                    core::slice::from_ref(x),
                    E,
                )
                .unwrap();
                assert!(!r.passed());
                assert_eq!(r.first_violation.unwrap().n, 1);
            }
        }

        // at x = x* the inequality is 0 <= 0
        let r = check_star_condition(
            &id,
            &pt(&[0.0, 0.0]),
            KSequence::ONE,
            psi,
            8,
            &[pt(&[0.0, 0.0])],
            E,
        )
        .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn star_condition_requires_fixed_point() {
        let half = OperatorSpec::toward_point(pt(&[0.0]), 0.5).unwrap();
        let psi = PsiSpec::new(0.5, 2.0).unwrap();
        let err =
            check_star_condition(&half, &pt(&[1.0]), KSequence::ONE, psi, 4, &[pt(&[2.0])], E)
                .unwrap_err();
        assert_eq!(err, Error::NotFixedPoint { residual: 0.5 });
    }

    #[test]
    fn uniqueness_examples() {
        let half = OperatorSpec::toward_point(pt(&[0.0, 0.0]), 0.5).unwrap();
        let cands = sample_points(2, 256, 5, 10.0);
        assert!(
            assert_unique_fixed_point(&half, &pt(&[0.0, 0.0]), &cands, E)
                .unwrap()
                .passed()
        );

        let id = OperatorSpec::scaling(1.0, 1).unwrap();
        let r = assert_unique_fixed_point(&id, &pt(&[0.0]), &[pt(&[0.0]), pt(&[1.0])], E).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_violation.unwrap().witness, vec![pt(&[1.0])]);

        // (I - A) x = b with A = I/2, b = (1,1)  =>  x = (2,2)
        let a =
            OperatorSpec::affine(vec![vec![0.5, 0.0], vec![0.0, 0.5]], pt(&[1.0, 1.0])).unwrap();
        let xstar = pt(&[2.0, 2.0]);
        require_fixed_point(&a, &xstar, E).unwrap();
        let mut cands = sample_points(2, 256, 9, 10.0);
        cands.push(xstar.clone());
        assert!(assert_unique_fixed_point(&a, &xstar, &cands, E)
            .unwrap()
            .passed());
    }

    #[test]
    fn sequences() {
        let k = KSequence::new(2.0, 0.5).unwrap();
        assert_eq!(k.value(4), 2.0);
        assert!(KSequence::new(-1.0, 1.0).is_err());
        assert!(KSequence::new(1.0, 0.0).is_err());
        let psi = PsiSpec::new(0.5, 2.0).unwrap();
        assert_eq!(psi.value(0.0), 0.0);
        assert_eq!(psi.value(2.0), 2.0);
        assert!(PsiSpec::new(0.0, 2.0).is_err());
        assert!(PsiSpec::new(1.0, 0.5).is_err());
    }
}
