use std::cmp::Ordering;
use std::fmt;

/// A real number extended with `-inf` and `+inf`.
///
/// Backed by an `f64` that is never NaN, which gives a total order with
/// `-inf < x < +inf` for every finite `x`. Sums that would mix opposite
/// infinities are resolved by the convention of the calling operator:
/// [`ExtReal::add_lower`] lets `-inf` win (sup-plus dilation) and
/// [`ExtReal::sub_upper`] lets `+inf` win (inf-minus erosion).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const NEG_INFINITY: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Returns `None` for NaN.
    pub fn new(value: f64) -> Option<Self> {
        if value.is_nan() {
            None
        } else {
            Some(ExtReal(value))
        }
    }

    /// Wraps a value that the caller knows is not NaN.
    ///
    /// # Panics
    /// Panics in debug builds if `value` is NaN.
    #[inline]
    pub(crate) fn from_f64(value: f64) -> Self {
        debug_assert!(!value.is_nan(), "ExtReal cannot hold NaN");
        ExtReal(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `self + rhs` with `(-inf) + (+inf) = -inf`.
    #[inline]
    pub fn add_lower(self, rhs: ExtReal) -> ExtReal {
        if self.0 == f64::NEG_INFINITY || rhs.0 == f64::NEG_INFINITY {
            ExtReal::NEG_INFINITY
        } else {
            ExtReal(self.0 + rhs.0)
        }
    }

    /// `self - rhs` with `(+inf) - (+inf) = +inf` and `(-inf) - (-inf) = +inf`.
    #[inline]
    pub fn sub_upper(self, rhs: ExtReal) -> ExtReal {
        if self.0 == f64::INFINITY || rhs.0 == f64::NEG_INFINITY {
            ExtReal::INFINITY
        } else {
            ExtReal(self.0 - rhs.0)
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // -0.0 and 0.0 compare equal, unlike f64::total_cmp.
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl From<ExtReal> for f64 {
    fn from(v: ExtReal) -> f64 {
        v.0
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
