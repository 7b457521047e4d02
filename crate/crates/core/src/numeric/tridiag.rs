//! Sturm-sequence bisection for real symmetric tridiagonal matrices.

use crate::error::{Error, Result};

/// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ
/// pivots of `T − x I`.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], x: f64) -> usize {
    if diag.is_empty() {
        return 0;
    }
    let scale = diag.iter().chain(offdiag).fold(x.abs(), |acc, v| acc.max(v.abs()));
    count_below(diag, offdiag, x, f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE))
}

/// A zero pivot is replaced by `-guard`.
fn count_below(diag: &[f64], offdiag: &[f64], x: f64, guard: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut q = diag[0] - x;
    for i in 0..n {
        if i > 0 {
            q = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q;
        }
        if q == 0.0 {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of the symmetric tridiagonal matrix with main diagonal
/// `diag` and off-diagonal `offdiag`, ascending.
pub fn eig_sym_tridiag(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::Dimension("empty diagonal".into()));
    }
    if offdiag.len() != n - 1 {
        return Err(Error::Dimension(format!(
            "off-diagonal length {} does not match diagonal length {n} - 1",
            offdiag.len()
        )));
    }
    if diag.iter().chain(offdiag).any(|v| !v.is_finite()) {
        return Err(Error::Input("tridiagonal entries must be finite".into()));
    }
    if n == 1 {
        return Ok(vec![diag[0]]);
    }

    // Gershgorin bounds.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { offdiag[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = f64::EPSILON * (lo.abs().max(hi.abs())).max(f64::MIN_POSITIVE) * n as f64;
    lo -= pad;
    hi += pad;

    let norm = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * f64::EPSILON * norm;
    // Eigenvalues of a symmetric matrix are only determined to ~eps·‖T‖.
    let tol = 2.0 * f64::EPSILON * norm;

    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        // Smallest x with count(x) > k.
        let mut a = values.last().copied().unwrap_or(lo).max(lo);
        let mut b = hi;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diag, offdiag, mid, guard) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        values.push(0.5 * (a + b));
    }
    Ok(values)
}
