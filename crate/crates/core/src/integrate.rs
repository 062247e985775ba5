//! The brute-force oracle: exact integration of locally constant
//! integrands over valuation annuli, with exact geometric-series tails for
//! the convergent direction.
//!
//! Tails are never inferred: the caller supplies the ratio (with a reason)
//! and the integrator verifies one extra annulus step before closing the
//! geometric sum.  A ratio of exactly 1 is reported as [`Error::RatioOne`];
//! the continuation value c / (1 - r) is the analytic-continuation value
//! used in all downstream identities.

use num_rational::BigRational;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::local::{annulus_cosets, LocalDatum, Measure, PAdicCoset, Side};

/// A locally constant integrand on one side's multiplicative group.
pub struct IntegrandSpec<'a> {
    pub datum: LocalDatum,
    pub side: Side,
    /// Precision (p-steps) at which the evaluator is constant on cosets.
    pub required_precision: u32,
    pub measure: Measure,
    pub evaluator: Box<dyn Fn(&PAdicCoset) -> Result<CycNum> + 'a>,
}

impl<'a> IntegrandSpec<'a> {
    /// Exact integral over the single annulus {w(t) = n}.
    pub fn annulus(&self, n: i64) -> Result<CycNum> {
        let mut acc = CycNum::zero();
        for (coset, m) in annulus_cosets(self.datum, self.side, n, self.required_precision, self.measure) {
            let v = (self.evaluator)(&coset)?;
            if !v.is_zero() {
                acc = acc.try_add(&v.scale(&m))?;
            }
        }
        Ok(acc)
    }
}

/// Sum of annulus integrals over n in [n_min, n_max].
pub fn integrate_annuli(spec: &IntegrandSpec, n_min: i64, n_max: i64) -> Result<CycNum> {
    assert!(n_min <= n_max);
    let mut acc = CycNum::zero();
    for n in n_min..=n_max {
        acc = acc.try_add(&spec.annulus(n)?)?;
    }
    Ok(acc)
}

/// Why the caller believes the tail is geometric; recorded so continuation
/// steps are auditable.
#[derive(Debug, Clone)]
pub struct TailJustification {
    pub ratio: CycNum,
    pub reason: &'static str,
}

/// Finite sum over [n_min, tail_start) plus the closed geometric tail
/// c (1 - r)^(-1), where c is the annulus value at `tail_start` and the
/// supplied ratio r is verified against one extra explicitly computed
/// annulus step.  r = 1 with c != 0 signals an exceptional configuration
/// upstream and raises [`Error::RatioOne`].
pub fn integrate_with_tail(
    spec: &IntegrandSpec,
    n_min: i64,
    tail_start: i64,
    tail: &TailJustification,
) -> Result<CycNum> {
    assert!(n_min <= tail_start);
    let mut finite = CycNum::zero();
    for n in n_min..tail_start {
        finite = finite.try_add(&spec.annulus(n)?)?;
    }
    let c = spec.annulus(tail_start)?;
    // one-step audit of the declared geometric structure
    let next = spec.annulus(tail_start + 1)?;
    if !next.eq_val(&c.mul(&tail.ratio)) {
        return Err(Error::BadDescriptor(format!(
            "declared tail ratio ({}) fails at annulus {}: expected {}, annulus gave {}",
            tail.reason,
            tail_start + 1,
            c.mul(&tail.ratio),
            next
        )));
    }
    if c.is_zero() {
        return Ok(finite);
    }
    let one_minus_r = CycNum::one().sub(&tail.ratio);
    if one_minus_r.is_zero() {
        return Err(Error::RatioOne);
    }
    finite.try_add(&c.mul(&one_minus_r.inv()?))
}

/// Spot-check the caller contract that the evaluator is constant on
/// precision-N cosets: refine cosets of the given annuli to precision N+1
/// and compare, up to `samples` cosets.
pub fn verify_local_constancy(spec: &IntegrandSpec, annuli: &[i64], samples: usize) -> Result<bool> {
    let mut checked = 0usize;
    for &n in annuli {
        for (coset, _) in annulus_cosets(spec.datum, spec.side, n, spec.required_precision, spec.measure) {
            let coarse = (spec.evaluator)(&coset)?;
            for fine in coset.refine() {
                let v = (spec.evaluator)(&fine)?;
                if !v.eq_val(&coarse) {
                    return Ok(false);
                }
            }
            checked += 1;
            if checked >= samples {
                return Ok(true);
            }
        }
    }
    Ok(true)
}

/// Closed geometric tail sum_{k>=0} c r^k = c/(1-r), shared by callers that
/// hold per-annulus constants directly rather than an [`IntegrandSpec`].
pub fn geometric_tail(c: &CycNum, ratio: &CycNum) -> Result<CycNum> {
    if c.is_zero() {
        return Ok(CycNum::zero());
    }
    let one_minus_r = CycNum::one().sub(ratio);
    if one_minus_r.is_zero() {
        return Err(Error::RatioOne);
    }
    c.div(&one_minus_r)
}

/// Total enumerated-coset budget guard used by CLI-driven sweeps.
pub fn check_budget(datum: LocalDatum, side: Side, precision: u32, annuli: u64, cap: u64) -> Result<()> {
    let e = if side == Side::E { datum.e() } else { 1 };
    let q = if side == Side::E { datum.q_e() } else { datum.q_f() };
    let per = (q - 1) * q.saturating_pow(precision * e - 1);
    if per.saturating_mul(annuli) > cap {
        return Err(Error::BudgetExceeded(format!(
            "{per} cosets x {annuli} annuli exceeds cap {cap}"
        )));
    }
    Ok(())
}

/// |t| of the side at valuation n, i.e. q^(-n).
pub fn abs_value_rational(datum: LocalDatum, side: Side, n: i64) -> BigRational {
    use num_bigint::BigInt;
    let q = if side == Side::E { datum.q_e() } else { datum.q_f() };
    crate::local::pow_rational(&BigInt::from(q), -n)
}
