//! Pointwise LIP algebra.
//!
//! Scalar functions take the grey value(s) and the scale `M` and do no
//! validation; they follow IEEE semantics at the edges, so `tilde(M) = -inf`,
//! `hat(0) = -inf`, `xi(M) = +inf` and `xi_inv(+inf) = M`. The `GreyImage`
//! methods at the bottom of this module check the value regime first.

use crate::error::{Error, Result};
use crate::raster::{GreyImage, Regime, ScaleM};

/// LIP addition `f + g - f g / M`: superimposition of two absorbing layers.
#[inline]
pub fn add(f: f64, g: f64, m: ScaleM) -> f64 {
    f + g - f * g / m.value()
}

/// LIP scalar multiplication `M - M (1 - f/M)^lambda`.
#[inline]
pub fn mult(lambda: f64, f: f64, m: ScaleM) -> f64 {
    let m = m.value();
    m - m * (1.0 - f / m).powf(lambda)
}

/// LIP negation `-f / (1 - f/M)`, singular at `f = M`.
#[inline]
pub fn neg(f: f64, m: ScaleM) -> f64 {
    -f / (1.0 - f / m.value())
}

/// LIP subtraction `(f - g) / (1 - g/M)`, singular at `g = M`.
#[inline]
pub fn sub(f: f64, g: f64, m: ScaleM) -> f64 {
    (f - g) / (1.0 - g / m.value())
}

/// Transmittance `1 - f/M`.
#[inline]
pub fn transmittance(f: f64, m: ScaleM) -> f64 {
    1.0 - f / m.value()
}

/// `ln(1 - f/M)`, in `[-inf, 0]` for `f` in `[0, M]`.
#[inline]
pub fn tilde(f: f64, m: ScaleM) -> f64 {
    (1.0 - f / m.value()).ln()
}

/// `ln(-ln(1 - f/M))`; `-inf` at `0` and `+inf` at `M`.
#[inline]
pub fn hat(f: f64, m: ScaleM) -> f64 {
    // -tilde(0) is -0.0 and ln(-0.0) is already -inf, the abs only keeps the sign tidy.
    (-tilde(f, m)).abs().ln()
}

/// Inverse of [`hat`]: `M (1 - exp(-exp(y)))`.
#[inline]
pub fn hat_inverse(y: f64, m: ScaleM) -> f64 {
    m.value() * (1.0 - (-(y.exp())).exp())
}

/// The isomorphism `-M ln(1 - f/M)` from `[-inf, M]` onto `[-inf, +inf]`.
#[inline]
pub fn xi(f: f64, m: ScaleM) -> f64 {
    -m.value() * tilde(f, m)
}

/// Inverse isomorphism `M (1 - exp(-f/M))`.
#[inline]
pub fn xi_inv(f: f64, m: ScaleM) -> f64 {
    let m = m.value();
    m * (1.0 - (-f / m).exp())
}

/// Complement `M - f`.
#[inline]
pub fn complement(f: f64, m: ScaleM) -> f64 {
    m.value() - f
}

/// Both sides of `(M - f) ⊟ (M - b) = M (1 - f/b)`.
///
/// Returns `(lhs, rhs)` where `lhs` goes through LIP subtraction and `rhs`
/// is the closed form.
pub fn sub_complement_identity(f: f64, b: f64, m: ScaleM) -> Result<(f64, f64)> {
    let mv = m.value();
    if !(0.0..=mv).contains(&f) {
        return Err(Error::Domain {
            x: 0,
            y: 0,
            value: f,
            regime: Regime::Closed.name(),
        });
    }
    if b == 0.0 {
        return Err(Error::Singularity {
            x: 0,
            y: 0,
            what: "probe value 0 in M(1 - f/b)",
        });
    }
    if !(b > 0.0 && b <= mv) {
        return Err(Error::Domain {
            x: 0,
            y: 0,
            value: b,
            regime: "]0, M]",
        });
    }
    let lhs = sub(complement(f, m), complement(b, m), m);
    let rhs = mv * (1.0 - f / b);
    Ok((lhs, rhs))
}

fn first_singular(img: &GreyImage, what: &'static str) -> Result<()> {
    let m = img.m().value();
    match img.values().iter().position(|&v| v == m) {
        None => Ok(()),
        Some(i) => {
            let (x, y) = img.index_to_xy(i);
            Err(Error::Singularity { x, y, what })
        }
    }
}

impl GreyImage {
    /// Pointwise `self ⊞ other` on `]-inf, M]`.
    pub fn lip_add(&self, other: &GreyImage) -> Result<GreyImage> {
        self.check(Regime::BelowMClosed)?;
        other.check(Regime::BelowMClosed)?;
        let m = self.m();
        self.zip_map(other, |f, g| add(f, g, m))
    }

    /// Pointwise `self ⊞ k` for a constant `k <= M`.
    pub fn lip_add_const(&self, k: f64) -> Result<GreyImage> {
        self.check(Regime::BelowMClosed)?;
        if k.is_nan() || k > self.m().value() {
            return Err(Error::InvalidArgument(format!(
                "constant {k} is not in ]-inf, M]"
            )));
        }
        let m = self.m();
        self.map(|f| add(f, k, m))
    }

    /// `lambda ⊠ self` on `[0, M]`.
    pub fn lip_mult(&self, lambda: f64) -> Result<GreyImage> {
        self.check(Regime::Closed)?;
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scalar {lambda} must be finite"
            )));
        }
        let m = self.m();
        self.map(|f| mult(lambda, f, m))
    }

    /// `⊟ self`, defined for values below `M`.
    pub fn lip_neg(&self) -> Result<GreyImage> {
        first_singular(self, "LIP negation of M")?;
        self.check(Regime::BelowMClosed)?;
        let m = self.m();
        self.map(|f| neg(f, m))
    }

    /// `self ⊟ other`; `other` must stay below `M`.
    pub fn lip_sub(&self, other: &GreyImage) -> Result<GreyImage> {
        self.check_same_shape(other)?;
        first_singular(other, "LIP subtraction of M")?;
        self.check(Regime::BelowMClosed)?;
        other.check(Regime::BelowMClosed)?;
        let m = self.m();
        self.zip_map(other, |f, g| sub(f, g, m))
    }

    pub fn transmittance(&self) -> Result<GreyImage> {
        self.check(Regime::Image)?;
        let m = self.m();
        self.map(|f| transmittance(f, m))
    }

    pub fn tilde(&self) -> Result<GreyImage> {
        self.check(Regime::Closed)?;
        let m = self.m();
        self.map(|f| tilde(f, m))
    }

    pub fn hat(&self) -> Result<GreyImage> {
        self.check(Regime::Closed)?;
        let m = self.m();
        self.map(|f| hat(f, m))
    }

    pub fn xi(&self) -> Result<GreyImage> {
        self.check(Regime::BelowMClosed)?;
        let m = self.m();
        self.map(|f| xi(f, m))
    }

    pub fn xi_inv(&self) -> Result<GreyImage> {
        let m = self.m();
        self.map(|f| xi_inv(f, m))
    }

    pub fn complement(&self) -> Result<GreyImage> {
        let m = self.m();
        self.map(|f| complement(f, m))
    }
}
