use super::gamma::log_gamma;
use super::SpecialError;

const MAX_TERMS: usize = 10_000;

/// `log B(a, b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64, SpecialError> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Regularized incomplete beta `I_x(a, b)` by continued fraction, using the
/// reflection `I_x(a,b) = 1 − I_{1−x}(b,a)` beyond `x = (a+1)/(a+b+2)`.
pub fn reg_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(SpecialError::DomainError("beta shapes must be positive"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecialError::DomainError("x must lie in [0, 1]"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let log_front = a * x.ln() + b * (-x).ln_1p() - log_beta(a, b)?;
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((log_front.exp() * beta_continued_fraction(x, a, b)? / a).clamp(0.0, 1.0))
    } else {
        Ok((1.0 - log_front.exp() * beta_continued_fraction(1.0 - x, b, a)? / b).clamp(0.0, 1.0))
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> Result<f64, SpecialError> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_TERMS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(SpecialError::BudgetExceeded(MAX_TERMS))
}
