//! Bracketed scalar root finding.

/// Bisection on `[lo, hi]` for a function with a sign change.
///
/// Stops when `|f(x)| <= ftol` or the bracket collapses to adjacent floats.
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, ftol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return None;
    }
    // 200 halvings exhaust any f64 bracket
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() <= ftol {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
