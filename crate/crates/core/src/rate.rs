use crate::bound::BoundSpec;
use crate::error::SolverError;
use crate::objective::OrientedObjective;
use crate::solver::IterationRecord;

/// Empirical convergence ratio `|ε_{t+1}| / |ε_t|^order` taken from the last
/// pair of records whose errors are still above floating-point noise
/// (`100·ε_mach·|root|`).
pub fn estimate_rate(trace: &[IterationRecord], root: f64, order: u32) -> Result<f64, SolverError> {
    if !(1..=3).contains(&order) || trace.len() < order as usize + 2 {
        return Err(SolverError::InsufficientTrace);
    }
    let floor = 1e2 * f64::EPSILON * root.abs();
    let informative = |e: f64| e.abs() > floor && e != 0.0;
    trace
        .windows(2)
        .map(|w| (w[0].theta - root, w[1].theta - root))
        .filter(|(a, b)| informative(*a) && informative(*b))
        .last()
        .map(|(a, b)| b.abs() / a.abs().powi(order as i32))
        .ok_or(SolverError::InsufficientTrace)
}

/// Asymptotic rate constant of the US iteration for `bound` at `root`:
/// `|1 − g′/b|` for first-derivative bounds, `|b22 − g″| / (2|g′|)` for the
/// second-derivative pair and `|b3 − g‴| / (6|g′|)` for the third.
pub fn theoretical_rate(obj: &OrientedObjective, bound: &BoundSpec, root: f64) -> Result<f64, SolverError> {
    let g1 = obj.g1(root)?;
    Ok(match bound {
        BoundSpec::FlbConstant { b1 } => (1.0 - g1 / b1).abs(),
        BoundSpec::FlbLinear { b1, b2 } => (1.0 - g1 / (b1 + b2 * root)).abs(),
        BoundSpec::FlbCustom { b, .. } => (1.0 - g1 / b(root)).abs(),
        BoundSpec::Slub { b22, .. } => (b22 - obj.g2(root)?).abs() / (2.0 * g1.abs()),
        BoundSpec::Tlb { b3 } => (b3 - obj.g3(root)?).abs() / (6.0 * g1.abs()),
    })
}
