//! Localization measures for sampled eigenstates.

use crate::error::{Error, Result};
use crate::wave::WaveField;

/// Least-squares Gaussian envelope `log|ψ| ≈ α + βx + ωx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    /// `−β / 2ω`.
    pub center: f64,
    /// `−2ω`; matches `γ` for an envelope `exp[−½γ(x − x_c)²]`.
    pub rate: f64,
    /// RMS misfit in log-amplitude units.
    pub rms_residual: f64,
    /// Number of samples entering the fit.
    pub samples: usize,
    /// The fitted curvature is not confining (`ω ≥ 0`).
    pub anti_gaussian: bool,
}

/// Samples of `log|ψ|` that trace the envelope: refined local maxima of an
/// oscillating state (flag `true`), or every sample when `|ψ|` has no zeros
/// and fewer than three maxima (a smooth envelope is its own envelope).
fn envelope_samples(wf: &WaveField) -> Result<(Vec<(f64, f64)>, bool)> {
    let m = wf.moduli();
    let x = &wf.positions;
    let n = m.len();
    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if m[i] > 0.0 && m[i] > m[i - 1] && m[i] >= m[i + 1] {
            peaks.push(refine_peak(x[i - 1], x[i], x[i + 1], m[i - 1], m[i], m[i + 1]));
        }
    }
    if peaks.len() >= 3 {
        return Ok((peaks, true));
    }
    if n >= 3 && m.iter().all(|&v| v > 0.0) {
        return Ok((x.iter().zip(&m).map(|(&xi, &mi)| (xi, mi.ln())).collect(), false));
    }
    Err(Error::InsufficientStructure { found: peaks.len() })
}

/// Vertex of the parabola through three `(x, log m)` samples; falls back to
/// the centre sample when a neighbour is zero.
fn refine_peak(x0: f64, x1: f64, x2: f64, m0: f64, m1: f64, m2: f64) -> (f64, f64) {
    if m0 <= 0.0 || m2 <= 0.0 {
        return (x1, m1.ln());
    }
    let (y0, y1, y2) = (m0.ln(), m1.ln(), m2.ln());
    let h = 0.5 * (x2 - x0);
    let curv = y0 - 2.0 * y1 + y2;
    if curv >= 0.0 {
        return (x1, y1);
    }
    let offset = 0.5 * (y0 - y2) / curv;
    let offset = offset.clamp(-0.5, 0.5);
    let y = y1 - 0.25 * (y0 - y2) * offset;
    (x1 + offset * h, y)
}

/// Quadratic `α + βu + ωu²` in `u = (x − mean)/scale`.
#[derive(Debug, Clone, Copy)]
struct Quadratic {
    coef: [f64; 3],
    mean: f64,
    scale: f64,
}

impl Quadratic {
    fn fit(pts: &[(f64, f64)]) -> Result<Self> {
        let count = pts.len() as f64;
        let mean = pts.iter().map(|p| p.0).sum::<f64>() / count;
        let scale = pts
            .iter()
            .map(|p| (p.0 - mean).abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for &(x, y) in pts {
            let u = (x - mean) / scale;
            let row = [1.0, u, u * u];
            for r in 0..3 {
                for c in 0..3 {
                    ata[r][c] += row[r] * row[c];
                }
                atb[r] += row[r] * y;
            }
        }
        let coef = solve3(ata, atb).ok_or(Error::InsufficientStructure { found: pts.len() })?;
        Ok(Self { coef, mean, scale })
    }

    fn value(&self, x: f64) -> f64 {
        let u = (x - self.mean) / self.scale;
        self.coef[0] + self.coef[1] * u + self.coef[2] * u * u
    }

    fn slope(&self, x: f64) -> f64 {
        let u = (x - self.mean) / self.scale;
        (self.coef[1] + 2.0 * self.coef[2] * u) / self.scale
    }
}

/// Wavenumber of the carrier from the median spacing of the maxima of
/// `|sin(kx + φ)|`.
fn carrier_wavenumber(peaks: &[(f64, f64)]) -> Option<f64> {
    let mut gaps: Vec<f64> = peaks.windows(2).map(|w| w[1].0 - w[0].0).collect();
    gaps.sort_by(f64::total_cmp);
    let spacing = *gaps.get(gaps.len() / 2)?;
    (spacing > 0.0).then(|| std::f64::consts::PI / spacing)
}

/// A maximum of `e^{E(x)}·|sin(kx + φ)|` lies below the envelope by
/// `½ ln(1 + (E'/k)²)`.
fn peak_deficit(fit: &Quadratic, x: f64, k: f64) -> f64 {
    let r = fit.slope(x) / k;
    0.5 * r.mul_add(r, 1.0).ln()
}

/// Refits with the deficit added back, re-evaluating it with the current
/// envelope slope until the coefficients settle.
fn lift_peaks(peaks: &[(f64, f64)], first: Quadratic, k: f64) -> Result<Quadratic> {
    let mut fit = first;
    for _ in 0..100 {
        let lifted: Vec<(f64, f64)> = peaks
            .iter()
            .map(|&(x, y)| (x, y + peak_deficit(&fit, x, k)))
            .collect();
        let next = Quadratic::fit(&lifted)?;
        let shift = next
            .coef
            .iter()
            .zip(&fit.coef)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        fit = next;
        if shift <= 1e-12 * (1.0 + fit.coef.iter().map(|c| c.abs()).fold(0.0, f64::max)) {
            break;
        }
    }
    Ok(fit)
}

pub fn envelope_fit(wf: &WaveField) -> Result<EnvelopeFit> {
    let (pts, oscillating) = envelope_samples(wf)?;
    let mut fit = Quadratic::fit(&pts)?;
    let carrier = if oscillating { carrier_wavenumber(&pts) } else { None };
    if let Some(k) = carrier {
        fit = lift_peaks(&pts, fit, k)?;
    }
    let [_, beta_u, omega_u] = fit.coef;
    let omega = omega_u / (fit.scale * fit.scale);
    let center = if omega_u == 0.0 {
        f64::NAN
    } else {
        fit.mean - 0.5 * beta_u * fit.scale / omega_u
    };
    let rms = (pts
        .iter()
        .map(|&(x, y)| {
            let deficit = carrier.map_or(0.0, |k| peak_deficit(&fit, x, k));
            (fit.value(x) - deficit - y).powi(2)
        })
        .sum::<f64>()
        / pts.len() as f64)
        .sqrt();
    Ok(EnvelopeFit {
        center,
        rate: -2.0 * omega,
        rms_residual: rms,
        samples: pts.len(),
        anti_gaussian: omega_u >= 0.0,
    })
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Position of the largest `|ψ|` (first on ties).
pub fn pinning_position(wf: &WaveField) -> f64 {
    let m = wf.moduli();
    let mut best = 0;
    for (i, &v) in m.iter().enumerate() {
        if v > m[best] {
            best = i;
        }
    }
    wf.positions[best]
}

pub fn center_of_mass(wf: &WaveField) -> f64 {
    let w = wf.weights();
    let (num, den) = wf
        .positions
        .iter()
        .zip(&wf.amplitudes)
        .zip(&w)
        .fold((0.0, 0.0), |(n, d), ((x, a), wi)| {
            let p = wi * a.norm_sqr();
            (n + x * p, d + p)
        });
    num / den
}

/// Inverse participation ratio `Σ|ψ|⁴ / (Σ|ψ|²)²`.
pub fn ipr(wf: &WaveField) -> Result<f64> {
    let (s2, s4) = wf.amplitudes.iter().fold((0.0, 0.0), |(s2, s4), a| {
        let p = a.norm_sqr();
        (s2 + p, s4 + p * p)
    });
    if s2 == 0.0 {
        return Err(Error::Input("IPR of a zero vector".into()));
    }
    Ok(s4 / (s2 * s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::ContinuumModel;
    use crate::lattice::{Boundary, LatticeModel};
    use crate::wave::{NormConvention, Sampling};
    use num_complex::Complex64;

    fn sites(amps: Vec<f64>) -> WaveField {
        WaveField::normalized(
            (1..=amps.len()).map(|j| j as f64).collect(),
            amps.into_iter().map(|a| Complex64::new(a, 0.0)).collect(),
            Sampling::Sites,
            NormConvention::UnitL2,
        )
        .unwrap()
    }

    #[test]
    fn obc_state_pinned_at_x0() {
        let m = ContinuumModel::new(0.05, 60.0, 100.0).unwrap();
        let fit = envelope_fit(&m.obc_state(13, 2001).unwrap()).unwrap();
        assert!((fit.center - 60.0).abs() < 0.5, "{fit:?}");
        assert!((fit.rate - 0.05).abs() < 0.005, "{fit:?}");
    }

    #[test]
    fn pbc_state_pinned_at_centre() {
        for x0 in [0.0, 25.0, 60.0] {
            let m = ContinuumModel::new(0.005, x0, 100.0).unwrap();
            let fit = envelope_fit(&m.pbc_state(13, 2001).unwrap()).unwrap();
            assert!((fit.center - 50.0).abs() < 0.5, "{fit:?}");
        }
    }

    #[test]
    fn plane_wave_has_zero_rate() {
        let m = ContinuumModel::new(0.0, 0.0, 100.0).unwrap();
        let fit = envelope_fit(&m.pbc_state(3, 501).unwrap()).unwrap();
        assert!(fit.rate.abs() < 1e-6);
    }

    #[test]
    fn single_arch_is_insufficient() {
        let m = ContinuumModel::new(0.005, 10.0, 100.0).unwrap();
        let r = envelope_fit(&m.obc_state(1, 2001).unwrap());
        assert!(matches!(r, Err(Error::InsufficientStructure { .. })));
    }

    #[test]
    fn anti_gaussian_flagged() {
        let m = ContinuumModel::new(-0.005, 0.0, 100.0).unwrap();
        let fit = envelope_fit(&m.pbc_state(13, 2001).unwrap()).unwrap();
        assert!(fit.anti_gaussian);
    }

    #[test]
    fn lattice_pinning_edges() {
        let left = LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Open).unwrap();
        for n in [13, 30, 50] {
            let (wf, _) = left.analytic_state(n).unwrap();
            assert!(pinning_position(&wf) <= 10.0, "n={n}");
        }
        let right = LatticeModel::new(1.0, -0.005, 0.0, 100, Boundary::Open).unwrap();
        for n in [13, 30, 50] {
            let (wf, _) = right.analytic_state(n).unwrap();
            assert!(pinning_position(&wf) >= 91.0, "n={n}");
        }
    }

    #[test]
    fn hermitian_ground_state_centred() {
        let m = ContinuumModel::new(0.0, 0.0, 100.0).unwrap();
        let wf = m.obc_state(1, 2001).unwrap();
        assert_eq!(pinning_position(&wf), 50.0);
    }

    #[test]
    fn centre_of_mass_cases() {
        let xs: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let flat = WaveField::normalized(xs, vec![Complex64::new(1.0, 0.0); 101], Sampling::Grid, NormConvention::UnitL2).unwrap();
        assert!((center_of_mass(&flat) - 50.0).abs() < 1e-12);

        let mut amps = vec![0.0; 10];
        amps[6] = 1.0;
        assert_eq!(center_of_mass(&sites(amps)), 7.0);

        let m = ContinuumModel::new(0.05, 60.0, 100.0).unwrap();
        assert!((center_of_mass(&m.obc_state(13, 2001).unwrap()) - 60.0).abs() < 1.0);
    }

    #[test]
    fn ipr_cases() {
        assert!((ipr(&sites(vec![1.0; 100])).unwrap() - 0.01).abs() < 1e-15);
        let mut amps = vec![0.0; 100];
        amps[42] = 1.0;
        assert_eq!(ipr(&sites(amps)).unwrap(), 1.0);
        let m = LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Open).unwrap();
        let (wf, _) = m.analytic_state(13).unwrap();
        assert!(ipr(&wf).unwrap() > 0.03);
        let zero = WaveField {
            positions: vec![1.0],
            amplitudes: vec![Complex64::new(0.0, 0.0)],
            norm_convention: NormConvention::UnitL2,
            sampling: Sampling::Sites,
        };
        assert!(ipr(&zero).is_err());
    }
}
