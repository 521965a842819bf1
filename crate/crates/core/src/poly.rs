//! Real roots of low-degree polynomials, used by the surrogate S-steps.

/// Real roots of `a x² + b x + c`, with `a` allowed to be zero.
///
/// Uses the cancellation-free form: the larger-magnitude root comes from
/// `q = -(b + sign(b)·√disc)/2` and the other from `c/q`.
pub fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || !disc.is_finite() {
        return Vec::new();
    }
    let sign_b = if b < 0.0 { -1.0 } else { 1.0 };
    let q = -0.5 * (b + sign_b * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    let r1 = q / a;
    let r2 = c / q;
    if r1 == r2 {
        vec![r1]
    } else {
        vec![r1, r2]
    }
}

fn horner(coeffs: &[f64; 4], x: f64) -> f64 {
    ((coeffs[3] * x + coeffs[2]) * x + coeffs[1]) * x + coeffs[0]
}

fn horner_d(coeffs: &[f64; 4], x: f64) -> f64 {
    (3.0 * coeffs[3] * x + 2.0 * coeffs[2]) * x + coeffs[1]
}

/// Real roots of `c3 x³ + c2 x² + c1 x + c0` in ascending order.
///
/// The stationary points come from the derivative quadratic; they split the
/// line into monotone pieces, each holding at most one root, which is then
/// isolated by a Newton step safeguarded with bisection. A final Newton
/// polish on the unnormalised polynomial is kept only if it lowers the residual.
pub fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        let mut r = quadratic_real_roots(c2, c1, c0);
        r.sort_by(f64::total_cmp);
        return r;
    }
    let p = [c0 / c3, c1 / c3, c2 / c3, 1.0];
    let bound = 1.0 + p[0].abs().max(p[1].abs()).max(p[2].abs());
    let mut crit = quadratic_real_roots(3.0, 2.0 * p[2], p[1]);
    crit.retain(|x| x.abs() < bound);
    crit.sort_by(f64::total_cmp);

    let scale = p[0].abs().max(p[1].abs()).max(p[2].abs()).max(1.0);
    let mut breaks = vec![-bound];
    breaks.extend(crit.iter().copied());
    breaks.push(bound);

    let mut roots = Vec::new();
    for &x in &crit {
        if horner(&p, x).abs() <= 1e-14 * scale {
            roots.push(x);
        }
    }
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (horner(&p, lo), horner(&p, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() != fhi.signum() && fhi != 0.0 {
            roots.push(monotone_root(&p, lo, hi, flo));
        }
    }
    if horner(&p, bound) == 0.0 {
        roots.push(bound);
    }

    let orig = [c0, c1, c2, c3];
    let mut out: Vec<f64> = roots.into_iter().map(|r| polish(&orig, r)).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    out
}

fn monotone_root(p: &[f64; 4], mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let neg_at_lo = flo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = horner(p, x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == neg_at_lo {
            lo = x;
        } else {
            hi = x;
        }
        let d = horner_d(p, x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        x = next;
    }
    x
}

fn polish(c: &[f64; 4], r: f64) -> f64 {
    let f = horner(c, r);
    let d = horner_d(c, r);
    if d == 0.0 || f == 0.0 {
        return r;
    }
    let cand = r - f / d;
    if horner(c, cand).abs() < f.abs() {
        cand
    } else {
        r
    }
}
