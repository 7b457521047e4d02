//! Dense complex eigensolver: Householder Hessenberg reduction followed by
//! Wilkinson-shifted single-shift QR to complex Schur form. Eigenvectors
//! come from back substitution on the triangular factor.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::hessenberg::hessenberg_reduce;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Default upper bound on the matrix dimension accepted by the dense solver.
pub const DEFAULT_MAX_DIM: usize = 2048;

/// Relative deflation threshold for a subdiagonal entry against its two
/// diagonal neighbours.
pub const DEFLATION_TOL: f64 = 1e-14;

/// Residual bound, relative to the Frobenius norm of the input, that each
/// returned eigenpair is checked against.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigConfig {
    pub want_vectors: bool,
    pub max_dim: usize,
}

impl Default for EigConfig {
    fn default() -> Self {
        Self {
            want_vectors: false,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// Eigenvalues (and optionally unit eigenvectors) sorted by real part, then
/// imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    /// `‖M v_i − λ_i v_i‖₂`; empty when vectors were not requested.
    pub residuals: Vec<f64>,
}

impl EigenDecomposition {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Lexicographic order on (re, im) used for every spectrum in the crate.
pub fn cmp_re_im(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn eig_complex_dense(m: &ComplexMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    eig_complex_dense_with(
        m,
        &EigConfig {
            want_vectors,
            ..EigConfig::default()
        },
    )
}

pub fn eig_complex_dense_with(m: &ComplexMatrix, config: &EigConfig) -> Result<EigenDecomposition> {
    let n = m.dim();
    if n > config.max_dim {
        return Err(Error::Input(format!(
            "matrix dimension {n} exceeds the configured limit {}",
            config.max_dim
        )));
    }

    let (mut t, mut z) = hessenberg_reduce(m);
    schur_qr(&mut t, &mut z)?;

    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_re_im(&values[a], &values[b]));
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();

    if !config.want_vectors {
        return Ok(EigenDecomposition {
            eigenvalues,
            eigenvectors: None,
            residuals: Vec::new(),
        });
    }

    let vectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| schur_eigenvector(&t, &z, k))
        .collect();
    let residuals = vectors
        .iter()
        .zip(&eigenvalues)
        .map(|(v, &lambda)| {
            let mv = m.matvec(v).expect("dimensions agree");
            mv.iter()
                .zip(v)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: Some(vectors),
        residuals,
    })
}

/// Unitary Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c` such
/// that `G [x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Wilkinson shift: eigenvalue of the trailing 2x2 block closest to its
/// bottom-right entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = d - b * c / (half + disc);
    let mu2 = d - b * c / (half - disc);
    let pick = |mu: Complex64| if mu.re.is_finite() && mu.im.is_finite() { Some(mu) } else { None };
    match (pick(mu1), pick(mu2)) {
        (Some(m1), Some(m2)) => {
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        }
        (Some(m), None) | (None, Some(m)) => m,
        (None, None) => d,
    }
}

/// In-place reduction of the Hessenberg matrix `h` to upper triangular Schur
/// form, accumulating the unitary factor into `z`.
fn schur_qr(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.dim();
    if n == 1 {
        return Ok(());
    }
    let norm = h.frobenius_norm();
    // Guards the relative test when both diagonal neighbours vanish.
    let floor = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let max_sweeps = 30 * n;

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let sub = h[(lo, lo - 1)].norm();
            if sub <= DEFLATION_TOL * scale || sub <= floor {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::Convergence {
                deflated: n - 1 - hi,
                n,
            });
        }
        since_deflation += 1;

        let mu = if since_deflation.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            for j in first_col..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            let last_row = (k + 2).min(hi);
            for i in 0..=last_row {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + s.conj() * b;
                h[(i, k + 1)] = -s * a + b * c;
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = a * c + s.conj() * b;
                z[(i, k + 1)] = -s * a + b * c;
            }
        }
    }
    Ok(())
}

/// Eigenvector of the Schur factor `t` for its `k`-th diagonal entry,
/// mapped back through `z` and normalised to unit 2-norm.
fn schur_eigenvector(t: &ComplexMatrix, z: &ComplexMatrix, k: usize) -> Vec<Complex64> {
    let n = t.dim();
    let lambda = t[(k, k)];
    let small = (f64::EPSILON * t.frobenius_norm()).max(f64::MIN_POSITIVE);
    let big = 1e150;

    let mut y = vec![ZERO; n];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let acc: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
        let mut denom = t[(i, i)] - lambda;
        if denom.norm() < small {
            denom = Complex64::new(small, 0.0);
        }
        y[i] = -acc / denom;
        if y[i].norm() > big {
            for v in &mut y[i..=k] {
                *v /= big;
            }
        }
    }

    let mut v: Vec<Complex64> = (0..n)
        .map(|r| (0..=k).map(|j| z[(r, j)] * y[j]).sum())
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    v
}
