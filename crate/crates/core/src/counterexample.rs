//! Exact reproduction of the doubling counterexample.
//!
//! With `T x = 2x` on `R`, `y_n = 1 + 1/n` and `x_{n+1} = 1 - 1/n` the pair gap
//! `|y_n - x_{n+1}| = 2/n` vanishes while
//!
//! ```text
//! |T^n y_n - T^n x_{n+1}| = 2^{n+1} / n >= 1     for every n >= 1,
//! ```
//!
//! so uniform continuity of `T` does not force `T^n y_n - T^n x_{n+1} -> 0`.
//! For a contraction `T x = r x`, `0 < r < 1`, the same quantity is
//! `r^n (2/n) <= L (2/n) -> 0`.
//!
//! Everything here is rational arithmetic; no floating point is involved.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type ExactScalar = BigRational;

pub const DEFAULT_HORIZON: u64 = 4096;

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

fn frac(num: i64, den: u64) -> ExactScalar {
    BigRational::new(BigInt::from(num), int(den))
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << (e as usize)
}

fn require_index(n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("index n must be >= 1"));
    }
    Ok(())
}

/// `(y_n^1, x_{n+1}) = (1 + 1/n, 1 - 1/n)`.
pub fn example_sequences(n: u64) -> Result<(ExactScalar, ExactScalar)> {
    require_index(n)?;
    let one = ExactScalar::one();
    let inv = ExactScalar::new(BigInt::one(), int(n));
    Ok((&one + &inv, &one - &inv))
}

/// `2^n · x`.
pub fn doubling_power(n: u64, x: &ExactScalar) -> Result<ExactScalar> {
    require_index(n)?;
    Ok(ExactScalar::new(
        x.numer() << (n as usize),
        x.denom().clone(),
    ))
}

/// `c^n · x`.
pub fn scaling_power(c: &ExactScalar, n: u64, x: &ExactScalar) -> Result<ExactScalar> {
    require_index(n)?;
    Ok(num_traits::pow(c.clone(), n as usize) * x)
}

/// `2^{n+1} / n`.
pub fn closed_form_gap(n: u64) -> Result<ExactScalar> {
    require_index(n)?;
    Ok(ExactScalar::new(pow2(n + 1), int(n)))
}

/// `|T^n y_n^1 - T^n x_{n+1}|` for `T x = 2x`, checked against `2^{n+1}/n`.
pub fn gap(n: u64) -> Result<ExactScalar> {
    let (y, x) = example_sequences(n)?;
    let g = (doubling_power(n, &y)? - doubling_power(n, &x)?).abs();
    if g != closed_form_gap(n)? {
        return Err(Error::Consistency(format!("gap({n}) != 2^(n+1)/n")));
    }
    Ok(g)
}

/// `|c^n y_n^1 - c^n x_{n+1}|` for `T x = c x`; equals `|c|^n · 2/n`.
pub fn scaled_gap(c: &ExactScalar, n: u64) -> Result<ExactScalar> {
    let (y, x) = example_sequences(n)?;
    Ok((scaling_power(c, n, &y)? - scaling_power(c, n, &x)?).abs())
}

/// Smallest `n` with `2/n < eps`, i.e. `floor(2/eps) + 1`.
pub fn pair_gap_threshold(eps: &ExactScalar) -> Result<u64> {
    if !eps.is_positive() {
        return Err(invalid("epsilon must be > 0"));
    }
    let bound = (ExactScalar::from_integer(int(2)) / eps)
        .floor()
        .to_integer()
        + BigInt::one();
    u64::try_from(bound).map_err(|_| invalid("epsilon too small for a u64 threshold"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoteReport {
    /// Claims verified for every `n <= horizon`.
    pub horizon: u64,
    pub min_gap: ExactScalar,
    /// Every `n` attaining `min_gap`.
    pub min_gap_at: Vec<u64>,
    pub epsilon: Option<ExactScalar>,
    /// Smallest `n` with `|y_n - x_{n+1}| < epsilon`.
    pub epsilon_threshold: Option<u64>,
}

/// Verifies for every `n <= horizon`, exactly:
/// `|y - x| = 2/n`, `gap(n) = 2^{n+1}/n`, `2^{n+1} >= n`, `gap(n) >= 1`,
/// and that `n · gap(n) = 2^{n+1}` is strictly increasing in `n`.
pub fn verify_note_claims(horizon: u64, epsilon: Option<&ExactScalar>) -> Result<NoteReport> {
    require_index(horizon)?;
    let one = ExactScalar::one();
    let mut min_gap: Option<ExactScalar> = None;
    let mut min_gap_at = Vec::new();
    let mut prev_scaled = BigInt::zero();
    for n in 1..=horizon {
        let (y, x) = example_sequences(n)?;
        if (&y - &x).abs() != frac(2, n) {
            return Err(Error::Consistency(format!("|y - x| != 2/n at n = {n}")));
        }
        let g = gap(n)?;
        if pow2(n + 1) < int(n) {
            return Err(Error::Consistency(format!("2^(n+1) < n at n = {n}")));
        }
        if g < one {
            return Err(Error::Consistency(format!("gap < 1 at n = {n}")));
        }
        let scaled = &g * ExactScalar::from_integer(int(n));
        if !scaled.is_integer() || *scaled.numer() <= prev_scaled {
            return Err(Error::Consistency(format!(
                "n * gap(n) not strictly increasing at n = {n}"
            )));
        }
        prev_scaled = scaled.to_integer();
        match &min_gap {
            Some(m) if g > *m => {}
            Some(m) if g == *m => min_gap_at.push(n),
            _ => {
                min_gap = Some(g);
                min_gap_at.clear();
                min_gap_at.push(n);
            }
        }
    }
    let epsilon_threshold = epsilon.map(pair_gap_threshold).transpose()?;
    Ok(NoteReport {
        horizon,
        min_gap: min_gap.expect("horizon >= 1"),
        min_gap_at,
        epsilon: epsilon.cloned(),
        epsilon_threshold,
    })
}

/// `M · |r^n y - r^n x|`.
pub fn corrected_d(
    r: &ExactScalar,
    n: u64,
    y: &ExactScalar,
    x: &ExactScalar,
    m: &ExactScalar,
) -> Result<ExactScalar> {
    Ok(m * (scaling_power(r, n, y)? - scaling_power(r, n, x)?).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedReport {
    pub horizon: u64,
    /// `d[i]` is `d_{i+1}`.
    pub d: Vec<ExactScalar>,
    /// `tail_max[i]` is `max { d_n : i+1 <= n <= horizon }`.
    pub tail_max: Vec<ExactScalar>,
}

impl CorrectedReport {
    pub fn d_at(&self, n: u64) -> &ExactScalar {
        &self.d[(n - 1) as usize]
    }

    pub fn tail_max_from(&self, n0: u64) -> &ExactScalar {
        &self.tail_max[(n0 - 1) as usize]
    }

    /// Smallest `n0` whose tail maximum is strictly below `eps`.
    pub fn tail_below(&self, eps: &ExactScalar) -> Option<u64> {
        self.tail_max
            .iter()
            .position(|t| t < eps)
            .map(|i| i as u64 + 1)
    }
}

/// Runs `T x = r x` over the counterexample sequences for `n <= horizon` and
/// verifies `d_n = M r^n (2/n) <= M L (2/n)` exactly, with nonincreasing tail maxima.
pub fn corrected_demo(
    r: &ExactScalar,
    horizon: u64,
    m: &ExactScalar,
    lipschitz: &ExactScalar,
) -> Result<CorrectedReport> {
    require_index(horizon)?;
    let one = ExactScalar::one();
    if !(r.is_positive() && *r < one) {
        return Err(invalid("r must satisfy 0 < r < 1"));
    }
    if *lipschitz < one {
        return Err(invalid("L must be >= 1"));
    }
    if !m.is_positive() {
        return Err(invalid("M must be > 0"));
    }
    let mut d = Vec::with_capacity(horizon as usize);
    let mut rn = one.clone();
    for n in 1..=horizon {
        rn = &rn * r;
        let (y, x) = example_sequences(n)?;
        let dn = corrected_d(r, n, &y, &x, m)?;
        let pair = frac(2, n);
        if dn != m * &rn * &pair {
            return Err(Error::Consistency(format!("d_n != M r^n 2/n at n = {n}")));
        }
        if dn > m * lipschitz * &pair {
            return Err(Error::Consistency(format!(
                "d_n exceeds M L 2/n at n = {n}"
            )));
        }
        d.push(dn);
    }
    let mut tail_max = d.clone();
    for i in (0..tail_max.len().saturating_sub(1)).rev() {
        if tail_max[i + 1] > tail_max[i] {
            tail_max[i] = tail_max[i + 1].clone();
        }
    }
    Ok(CorrectedReport {
        horizon,
        d,
        tail_max,
    })
}

/// `"numerator/denominator"`, denominator always present.
pub fn format_exact(v: &ExactScalar) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses `"a/b"`, an integer, or a decimal with optional exponent
/// (`"1e-3"`, `"0.25"`, `"-2.5E+2"`) into an exact rational.
pub fn parse_exact(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let bad = || invalid(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(ExactScalar::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(fraction.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut digits = String::with_capacity(whole.len() + fraction.len());
    digits.push_str(whole);
    digits.push_str(fraction);
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - fraction.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        ExactScalar::from_integer(num * factor)
    } else {
        ExactScalar::new(num, factor)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn is_lowest_terms(v: &ExactScalar) -> bool {
        v.denom().is_positive() && v.numer().gcd(v.denom()).is_one()
    }

    fn q(s: &str) -> ExactScalar {
        parse_exact(s).unwrap()
    }

    #[test]
    fn sequences() {
        assert_eq!(example_sequences(1).unwrap(), (q("2"), q("0")));
        assert_eq!(example_sequences(2).unwrap(), (q("3/2"), q("1/2")));
        let (y, x) = example_sequences(10).unwrap();
        assert_eq!((y.clone(), x.clone()), (q("11/10"), q("9/10")));
        assert_eq!(y - x, q("2/10"));
        assert!(example_sequences(0).is_err());
    }

    #[test]
    fn doubling() {
        assert_eq!(doubling_power(3, &q("4/3")).unwrap(), q("32/3"));
        assert_eq!(q("32/3"), q("8") + q("8/3"));
        assert_eq!(doubling_power(1, &q("0")).unwrap(), q("0"));
        let x = q("1") + q("1/64");
        let mut rep = x.clone();
        for _ in 0..64 {
            rep = &rep + &rep;
        }
        let expect = ExactScalar::from_integer(pow2(64) + pow2(58));
        assert_eq!(rep, expect);
        assert_eq!(doubling_power(64, &x).unwrap(), expect);
    }

    #[test]
    fn gaps() {
        assert_eq!(gap(1).unwrap(), q("4"));
        assert_eq!(gap(2).unwrap(), q("4"));
        let (y, x) = example_sequences(10).unwrap();
        let oracle = (doubling_power(10, &y).unwrap() - doubling_power(10, &x).unwrap()).abs();
        assert_eq!(oracle, q("1024/5"));
        assert_eq!(gap(10).unwrap(), oracle);
        assert_eq!(q("1024/5"), q("2048/10"));
    }

    #[test]
    fn note_claims() {
        let r = verify_note_claims(10, None).unwrap();
        assert_eq!(r.min_gap, q("4"));
        assert_eq!(r.min_gap_at, alloc::vec![1, 2]);

        let r1 = verify_note_claims(1, None).unwrap();
        assert_eq!(r1.min_gap, q("4"));

        let r = verify_note_claims(3, Some(&q("1e-3"))).unwrap();
        assert_eq!(r.epsilon_threshold, Some(2001));
        assert!(verify_note_claims(0, None).is_err());
    }

    #[test]
    fn thresholds() {
        // 2/n < eps  <=>  n > 2/eps
        assert_eq!(pair_gap_threshold(&q("1/1000")).unwrap(), 2001);
        assert_eq!(pair_gap_threshold(&q("2")).unwrap(), 2);
        assert_eq!(pair_gap_threshold(&q("3")).unwrap(), 1);
        assert_eq!(pair_gap_threshold(&q("3/7")).unwrap(), 5);
        assert!(pair_gap_threshold(&q("0")).is_err());
        assert!(pair_gap_threshold(&q("-1")).is_err());
    }

    #[test]
    fn corrected() {
        let one = q("1");
        let r = corrected_demo(&q("1/2"), 20, &one, &one).unwrap();
        for n in 1..=20u64 {
            // 2^(1-n) / n
            let expect = ExactScalar::new(BigInt::one(), pow2(n - 1) * int(n));
            assert_eq!(*r.d_at(n), expect);
        }
        assert_eq!(*r.tail_max_from(10), q("1/5120"));
        assert_eq!(*r.d_at(1), q("1"));
        assert!(*r.d_at(1) <= q("2"));

        let y = q("7/3");
        assert_eq!(corrected_d(&q("1/3"), 5, &y, &y, &one).unwrap(), q("0"));

        assert!(corrected_demo(&q("1"), 5, &one, &one).is_err());
        assert!(corrected_demo(&q("0"), 5, &one, &one).is_err());
        assert!(corrected_demo(&q("1/2"), 5, &one, &q("1/2")).is_err());
        assert!(corrected_demo(&q("1/2"), 5, &q("0"), &one).is_err());
    }

    #[test]
    fn scaled_gaps_blow_up() {
        for c in [q("3"), q("5/2")] {
            for n in 1..=128u64 {
                let g = scaled_gap(&c, n).unwrap();
                let expect = num_traits::pow(c.clone(), n as usize) * frac(2, n);
                assert_eq!(g, expect);
            }
            assert!((8..=128).all(|n| scaled_gap(&c, n).unwrap() > q("1")));
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(q("1e-3"), ExactScalar::new(int(1), int(1000)));
        assert_eq!(q("0.25"), q("1/4"));
        assert_eq!(q("-2.5E+2"), q("-250"));
        assert_eq!(q(".5"), q("1/2"));
        assert_eq!(q("6/4"), q("3/2"));
        assert!(is_lowest_terms(&q("6/4")));
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("").is_err());
        assert!(parse_exact("1e").is_err());
        assert_eq!(format_exact(&q("4")), "4/1");
        assert_eq!(format_exact(&q("-1024/10")), "-512/5");
    }
}
