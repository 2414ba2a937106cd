//! Definitional scan oracles for the metric bounds.
//!
//! These evaluate the inf/sup definitions directly on a grid of candidate
//! scalars, without the closed forms, and return the grid points that
//! bracket the exact bounds. The admissibility predicates are monotone in the
//! scalar, so the first admissible grid point is found by bisection over grid
//! indices; the answer is the one a linear sweep would return.

use crate::error::{Error, Result};
use crate::lip;
use crate::raster::{GreyImage, Regime};

/// Grid points bracketing `lambda` and `mu` on the geometric grid `ratio^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultScan {
    /// Smallest grid `alpha` with `f <= alpha ⊠ g` everywhere.
    pub lambda_hat: f64,
    /// Largest grid `alpha` with `alpha ⊠ g <= f` everywhere.
    pub mu_hat: f64,
    pub ratio: f64,
}

impl MultScan {
    /// The exact `lambda` lies in this interval.
    pub fn lambda_bracket(&self) -> (f64, f64) {
        (self.lambda_hat / self.ratio, self.lambda_hat)
    }

    /// The exact `mu` lies in this interval.
    pub fn mu_bracket(&self) -> (f64, f64) {
        (self.mu_hat, self.mu_hat * self.ratio)
    }
}

/// Grid points bracketing `c1` and `c2` on the arithmetic grid `-L + k step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AddScan {
    /// Smallest grid `c` with `f <= c ⊞ g` everywhere.
    pub c1_hat: f64,
    /// Largest grid `c` with `c ⊞ g <= f` everywhere.
    pub c2_hat: f64,
    pub step: f64,
}

impl AddScan {
    pub fn c1_bracket(&self) -> (f64, f64) {
        (self.c1_hat - self.step, self.c1_hat)
    }

    pub fn c2_bracket(&self) -> (f64, f64) {
        (self.c2_hat, self.c2_hat + self.step)
    }
}

pub const DEFAULT_ALPHA_RANGE: f64 = 1e6;
pub const DEFAULT_C_LIMIT: f64 = 1e5;

/// First index in `lo..=hi` where the monotone predicate turns true.
fn first_true(lo: i64, hi: i64, pred: impl Fn(i64) -> bool) -> Option<i64> {
    if !pred(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    if pred(a) {
        return Some(a);
    }
    // pred(a) is false, pred(b) is true
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if pred(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(b)
}

/// Last index in `lo..=hi` where the monotone (true-then-false) predicate holds.
fn last_true(lo: i64, hi: i64, pred: impl Fn(i64) -> bool) -> Option<i64> {
    first_true(lo, hi, |k| !pred(k)).map_or(Some(hi), |k| if k > lo { Some(k - 1) } else { None })
}

/// Scans `alpha` over `ratio^k` within `[1/range, range]`.
pub fn scan_mult(f: &GreyImage, g: &GreyImage, ratio: f64) -> Result<MultScan> {
    scan_mult_with_range(f, g, ratio, DEFAULT_ALPHA_RANGE)
}

pub fn scan_mult_with_range(
    f: &GreyImage,
    g: &GreyImage,
    ratio: f64,
    range: f64,
) -> Result<MultScan> {
    f.check_same_shape(g)?;
    f.check(Regime::Strict)?;
    g.check(Regime::Strict)?;
    if !(ratio > 1.0 && ratio.is_finite() && range > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid ratio must exceed 1 and range must exceed 1, got {ratio} and {range}"
        )));
    }
    let m = f.m();
    let ln_r = ratio.ln();
    let kmax = (range.ln() / ln_r).ceil() as i64;
    let alpha = |k: i64| (k as f64 * ln_r).exp();
    let above = |k: i64| {
        let a = alpha(k);
        f.values()
            .iter()
            .zip(g.values())
            .all(|(&fv, &gv)| fv <= lip::mult(a, gv, m))
    };
    let below = |k: i64| {
        let a = alpha(k);
        f.values()
            .iter()
            .zip(g.values())
            .all(|(&fv, &gv)| lip::mult(a, gv, m) <= fv)
    };
    let out_of_range = || {
        Error::InvalidArgument(format!(
            "bound outside the scanned range [1/{range}, {range}]"
        ))
    };
    let k_lambda = first_true(-kmax, kmax, above).ok_or_else(out_of_range)?;
    let k_mu = last_true(-kmax, kmax, below).ok_or_else(out_of_range)?;
    if k_lambda == -kmax || k_mu == kmax {
        return Err(out_of_range());
    }
    Ok(MultScan {
        lambda_hat: alpha(k_lambda),
        mu_hat: alpha(k_mu),
        ratio,
    })
}

/// Scans `c` over `-L + k step` within `]-L, M[` with `L` = [`DEFAULT_C_LIMIT`].
pub fn scan_add(f: &GreyImage, g: &GreyImage, step: f64) -> Result<AddScan> {
    scan_add_with_limit(f, g, step, DEFAULT_C_LIMIT)
}

pub fn scan_add_with_limit(f: &GreyImage, g: &GreyImage, step: f64, limit: f64) -> Result<AddScan> {
    f.check_same_shape(g)?;
    f.check(Regime::BelowM)?;
    g.check(Regime::BelowM)?;
    if !(step > 0.0 && step.is_finite()) || !(limit > 0.0 && limit.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step and limit must be positive and finite, got {step} and {limit}"
        )));
    }
    let m = f.m();
    let c = |k: i64| -limit + k as f64 * step;
    let mut kmax = ((m.value() + limit) / step).floor() as i64;
    while c(kmax) >= m.value() {
        kmax -= 1;
    }
    let above = |k: i64| {
        let cv = c(k);
        f.values()
            .iter()
            .zip(g.values())
            .all(|(&fv, &gv)| fv <= lip::add(cv, gv, m))
    };
    let below = |k: i64| {
        let cv = c(k);
        f.values()
            .iter()
            .zip(g.values())
            .all(|(&fv, &gv)| lip::add(cv, gv, m) <= fv)
    };
    let out_of_range =
        || Error::InvalidArgument(format!("bound outside the scanned range ]-{limit}, M["));
    let k1 = first_true(1, kmax, above).ok_or_else(out_of_range)?;
    let k2 = last_true(1, kmax, below).ok_or_else(out_of_range)?;
    if k1 == 1 {
        return Err(out_of_range());
    }
    Ok(AddScan {
        c1_hat: c(k1),
        c2_hat: c(k2),
        step,
    })
}
