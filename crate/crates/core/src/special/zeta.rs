use super::{AccuracyBudget, SpecialError};

/// `B_{2i} / (2i)!` for i = 1..=7.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];
const START_TERMS: usize = 8;

/// `Σ_{n≥1} (log n)^k n^{-θ}` for `θ > 1`.
///
/// The first `N−1` terms are summed directly; the tail from `N` on is the
/// integral `∫_N^∞ (log x)^k x^{-θ} dx` plus Euler–Maclaurin end corrections.
/// `N` doubles until the first omitted correction is below `abs_tol`; running
/// past `max_terms` is reported as `BudgetExceeded`.
pub fn zeta_log_moment(theta: f64, k: usize, budget: AccuracyBudget) -> Result<f64, SpecialError> {
    if !(theta > 1.0 && theta.is_finite()) {
        return Err(SpecialError::DomainError("zeta requires theta > 1"));
    }
    if !(budget.abs_tol > 0.0) {
        return Err(SpecialError::DomainError("abs_tol must be positive"));
    }
    let mut n = START_TERMS;
    loop {
        if n > budget.max_terms {
            return Err(SpecialError::BudgetExceeded(budget.max_terms));
        }
        let (tail, err) = euler_maclaurin_tail(theta, k, n as f64);
        if err <= 0.1 * budget.abs_tol {
            let head: f64 = (1..n).map(|i| term(theta, k, i as f64)).sum();
            return Ok(head + tail);
        }
        n *= 2;
    }
}

fn term(theta: f64, k: usize, x: f64) -> f64 {
    x.ln().powi(k as i32) * x.powf(-theta)
}

fn poly_at(coeffs: &[f64], l: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * l + c)
}

// Returns the tail estimate and the size of the first omitted correction.
fn euler_maclaurin_tail(theta: f64, k: usize, n: f64) -> (f64, f64) {
    let l = n.ln();
    let u = theta - 1.0;

    // ∫_N^∞ L^k x^{-θ} dx = N^{1-θ} Σ_i k!/(k-i)! L^{k-i} / u^{i+1}
    let mut integral = 0.0;
    let mut falling = 1.0;
    for i in 0..=k {
        integral += falling * l.powi((k - i) as i32) / u.powi(i as i32 + 1);
        falling *= (k - i) as f64;
    }
    integral *= n.powf(1.0 - theta);

    // f^{(j)}(x) = x^{-θ-j} P_j(log x), with P_{j+1}[m] = -(θ+j) P_j[m] + (m+1) P_j[m+1].
    let mut coeffs = vec![0.0; k + 1];
    coeffs[k] = 1.0;
    let mut tail = integral + 0.5 * term(theta, k, n);
    let mut omitted = 0.0;
    for j in 0..14 {
        let next: Vec<f64> = (0..=k)
            .map(|m| -(theta + j as f64) * coeffs[m] + if m < k { (m + 1) as f64 * coeffs[m + 1] } else { 0.0 })
            .collect();
        coeffs = next;
        let order = j + 1;
        if order % 2 == 1 {
            let value = n.powf(-theta - order as f64) * poly_at(&coeffs, l);
            let idx = order / 2;
            let correction = BERNOULLI_OVER_FACTORIAL[idx] * value;
            if idx == BERNOULLI_OVER_FACTORIAL.len() - 1 {
                omitted = correction.abs();
            } else {
                tail -= correction;
            }
        }
    }
    (tail, omitted)
}

/// Riemann zeta `Z(θ) = Σ n^{-θ}` for `θ > 1`.
pub fn riemann_zeta(theta: f64, budget: AccuracyBudget) -> Result<f64, SpecialError> {
    zeta_log_moment(theta, 0, budget)
}

/// `Z′(θ) = −Σ log(n) n^{-θ}`.
pub fn riemann_zeta_deriv(theta: f64, budget: AccuracyBudget) -> Result<f64, SpecialError> {
    Ok(-zeta_log_moment(theta, 1, budget)?)
}

/// `Z″(θ) = Σ log²(n) n^{-θ}`.
pub fn riemann_zeta_deriv2(theta: f64, budget: AccuracyBudget) -> Result<f64, SpecialError> {
    zeta_log_moment(theta, 2, budget)
}
