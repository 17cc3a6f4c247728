//! Standard normal density and distribution function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[inline]
pub fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `Φ(z)` through the complementary error function, which keeps full
/// relative accuracy deep in the lower tail.
#[inline]
pub fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}
