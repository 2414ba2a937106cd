//! Computing one distance map from the other through the isomorphism `xi`.
//!
//! With `f1 = M - xi(f)` and `b1 = M - xi(b)`:
//!
//! ```text
//! As⊞_{b1} f1 = M (1 - exp(-As⊠_b f)) = xi_inv(M As⊠_b f)
//! As⊠_b f     = xi(As⊞_{b1} f1) / M
//! ```
//!
//! The same relation holds between the two metrics.

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::lip;
use crate::morphology::Probe;
use crate::raster::{FmMap, GreyImage, RealMap, Regime};

use super::{dist_add, dist_mult, map_add, map_mult_with, MapPath};

/// `M - xi(v)`.
fn complement_of_xi(img: &GreyImage) -> Result<GreyImage> {
    let m = img.m();
    img.map(|v| lip::complement(lip::xi(v, m), m))
}

/// `xi_inv(M - v)`.
fn xi_inv_of_complement(img: &GreyImage) -> Result<GreyImage> {
    let m = img.m();
    img.map(|v| lip::xi_inv(lip::complement(v, m), m))
}

/// Multiplicative distance map of `f` computed by the additive map of `M - xi(f)`.
pub fn map_mult_via_add(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    f.m().check_same(b.m())?;
    f.check(Regime::Strict)?;
    b.check(Regime::Strict)?;
    let m = f.m();
    let f1 = complement_of_xi(f)?;
    let b1 = b.map_values(|v| lip::complement(lip::xi(v, m), m))?;
    let add = map_add(&f1, &b1)?;
    Ok(add.map_values(|v| ExtReal::from_f64(lip::xi(v.value(), m) / m.value())))
}

/// Additive distance map of `f1` computed by the multiplicative map of `xi_inv(M - f1)`.
pub fn map_add_via_mult(f1: &GreyImage, b1: &Probe) -> Result<FmMap> {
    map_add_via_mult_with(f1, b1, MapPath::Ratio)
}

pub fn map_add_via_mult_with(f1: &GreyImage, b1: &Probe, path: MapPath) -> Result<FmMap> {
    f1.m().check_same(b1.m())?;
    f1.check(Regime::BelowM)?;
    b1.check(Regime::BelowM)?;
    let m = f1.m();
    let f = xi_inv_of_complement(f1)?;
    let b = b1.map_values(|v| lip::xi_inv(lip::complement(v, m), m))?;
    // Very negative inputs saturate to M after xi_inv; report them on the original raster.
    if let Err(Error::Domain { x, y, .. }) = f.check(Regime::Strict) {
        return Err(Error::Domain {
            x,
            y,
            value: f1.get(x, y),
            regime: "values whose image xi_inv(M - v) lies in ]0, M[",
        });
    }
    let mult = map_mult_with(&f, &b, path)?;
    Ok(mult.map_values(|v| ExtReal::from_f64(lip::xi_inv(m.value() * v.value(), m))))
}

/// The multiplicative metric computed directly and through the additive metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricLink {
    pub direct: f64,
    pub via_isomorphism: f64,
}

impl MetricLink {
    pub fn deviation(&self) -> f64 {
        (self.direct - self.via_isomorphism).abs()
    }

    pub fn verify(&self, tolerance: f64) -> Result<()> {
        let deviation = self.deviation();
        if deviation <= tolerance {
            Ok(())
        } else {
            Err(Error::Verification {
                what: "metric link".into(),
                deviation,
                tolerance,
            })
        }
    }
}

/// `d⊠(f, g)` and `xi(d⊞(M - xi(f), M - xi(g))) / M` for `f, g` in `]0, M[`.
pub fn dist_metric_link(f: &GreyImage, g: &GreyImage) -> Result<MetricLink> {
    let direct = dist_mult(f, g)?;
    let m = f.m();
    let add = dist_add(&complement_of_xi(f)?, &complement_of_xi(g)?)?;
    Ok(MetricLink {
        direct,
        via_isomorphism: lip::xi(add, m) / m.value(),
    })
}
