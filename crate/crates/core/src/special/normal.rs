use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::SpecialError;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_CUTOFF: f64 = 2.5;

/// Complementary error function.
///
/// Below the cutoff, `erf` comes from the all-positive series
/// `erf x = (2/√π) e^{-x²} Σ (2x²)^n x / (2n+1)!!`; above it, `erfc` comes
/// straight from its continued fraction, so the far tail keeps full relative
/// precision.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < SERIES_CUTOFF {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

fn erf_series(x: f64) -> f64 {
    let two_x2 = 2.0 * x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * (-x * x).exp() * sum
}

// erfc x = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), evaluated by modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        d = if d.abs() < TINY { TINY } else { d };
        c = x + a / c;
        c = if c.abs() < TINY { TINY } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal distribution function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

fn check_sigma(sigma: f64) -> Result<(), SpecialError> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(SpecialError::DomainError("sigma must be positive"))
    }
}

pub fn normal_pdf(x: f64, mu: f64, sigma: f64) -> Result<f64, SpecialError> {
    check_sigma(sigma)?;
    Ok(std_normal_pdf((x - mu) / sigma) / sigma)
}

pub fn normal_cdf(x: f64, mu: f64, sigma: f64) -> Result<f64, SpecialError> {
    check_sigma(sigma)?;
    Ok(std_normal_cdf((x - mu) / sigma))
}
