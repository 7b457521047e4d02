//! The continuous model `H = −[∂ₓ + γ(x − x₀)^m]²` on `0 ≤ x ≤ L`.
//!
//! For the linear potential (`m = 1`) the imaginary gauge transformation
//! `ψ = φ · exp[−½γ(x − x₀)²]` maps the problem onto a free particle, which
//! gives closed forms for both boundary conditions:
//!
//! - OBC: `E_n = n²π²/L²`, `ψ_n ∝ exp[−½γ(x − x₀)²] sin(nπx/L)`;
//! - PBC: `E_n = [2nπ/L + iγ(x₀ − L/2)]²`,
//!   `ψ_n ∝ exp[−½γ(x − L/2)² + i2πnx/L]`.
//!
//! For general `m` only the gauge factor is available; [`residual_norm`]
//! checks candidate eigenpairs against the differential operator directly.
//!
//! [`residual_norm`]: ContinuumModel::residual_norm

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{first_derivative, linspace, second_derivative};
use crate::wave::{NormConvention, Sampling, WaveField};

/// Grid size used when callers do not ask for one.
pub const DEFAULT_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumModel {
    /// Rate of the imaginary vector potential.
    pub gamma: f64,
    /// Zero of the potential.
    pub x0: f64,
    /// Domain length.
    pub length: f64,
    /// Power of the potential, `A = iγ(x − x₀)^m`.
    pub order: u32,
}

impl ContinuumModel {
    /// Linear potential (`m = 1`).
    pub fn new(gamma: f64, x0: f64, length: f64) -> Result<Self> {
        Self::with_order(gamma, x0, length, 1)
    }

    pub fn with_order(gamma: f64, x0: f64, length: f64, order: u32) -> Result<Self> {
        if !gamma.is_finite() || !x0.is_finite() {
            return Err(Error::Input("gamma and x0 must be finite".into()));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Input(format!("domain length must be positive, got {length}")));
        }
        Ok(Self {
            gamma,
            x0,
            length,
            order,
        })
    }

    fn require_linear(&self) -> Result<()> {
        if self.order == 1 {
            Ok(())
        } else {
            Err(Error::UnsupportedOrder(self.order))
        }
    }

    /// Imaginary offset `γ(x₀ − L/2)` of the PBC momentum.
    pub fn pbc_shift(&self) -> f64 {
        self.gamma * (self.x0 - 0.5 * self.length)
    }

    pub fn obc_energy(&self, n: i64) -> Result<f64> {
        self.require_linear()?;
        if n < 1 {
            return Err(Error::Input(format!("OBC mode index must be >= 1, got {n}")));
        }
        let k = n as f64 * PI / self.length;
        Ok(k * k)
    }

    pub fn obc_state(&self, n: i64, points: usize) -> Result<WaveField> {
        self.obc_state_with(n, points, NormConvention::UnitL2)
    }

    pub fn obc_state_with(&self, n: i64, points: usize, convention: NormConvention) -> Result<WaveField> {
        self.obc_energy(n)?;
        let xs = self.grid(points)?;
        let k = n as f64 * PI / self.length;
        let last = xs.len() - 1;
        let amps = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if i == 0 || i == last {
                    Complex64::new(0.0, 0.0)
                } else {
                    let d = x - self.x0;
                    Complex64::new((-0.5 * self.gamma * d * d).exp() * (k * x).sin(), 0.0)
                }
            })
            .collect();
        WaveField::normalized(xs, amps, Sampling::Grid, convention)
    }

    pub fn pbc_energy(&self, n: i64) -> Result<Complex64> {
        self.require_linear()?;
        let z = Complex64::new(2.0 * n as f64 * PI / self.length, self.pbc_shift());
        Ok(z * z)
    }

    pub fn pbc_state(&self, n: i64, points: usize) -> Result<WaveField> {
        self.pbc_state_with(n, points, NormConvention::UnitL2)
    }

    pub fn pbc_state_with(&self, n: i64, points: usize, convention: NormConvention) -> Result<WaveField> {
        self.require_linear()?;
        let xs = self.grid(points)?;
        let centre = 0.5 * self.length;
        let amps = xs
            .iter()
            .map(|&x| {
                let d = x - centre;
                let phase = 2.0 * PI * n as f64 * x / self.length;
                Complex64::from_polar((-0.5 * self.gamma * d * d).exp(), phase)
            })
            .collect();
        WaveField::normalized(xs, amps, Sampling::Grid, convention)
    }

    /// `exp[−γ(x − x₀)^{m+1}/(m+1)]`, whose logarithmic derivative cancels the
    /// potential `γ(x − x₀)^m`.
    pub fn gauge_factor(&self, x: f64) -> f64 {
        let p = self.order + 1;
        (-self.gamma * (x - self.x0).powi(p as i32) / p as f64).exp()
    }

    /// Gauge-transformed plane wave `gauge_factor(x)·e^{ikx}`, an exact
    /// solution with energy `k²` for any order `m` (boundary conditions aside).
    pub fn plane_wave_state(&self, k: f64, points: usize) -> Result<(WaveField, Complex64)> {
        let xs = self.grid(points)?;
        let amps = xs
            .iter()
            .map(|&x| Complex64::from_polar(self.gauge_factor(x), k * x))
            .collect();
        let wf = WaveField::normalized(xs, amps, Sampling::Grid, NormConvention::UnitL2)?;
        Ok((wf, Complex64::new(k * k, 0.0)))
    }

    /// Potential `a(x) = γ(x − x₀)^m` and its derivative.
    fn potential(&self, x: f64) -> (f64, f64) {
        let d = x - self.x0;
        let m = self.order as i32;
        let a = self.gamma * d.powi(m);
        let da = if m == 0 {
            0.0
        } else {
            self.gamma * m as f64 * d.powi(m - 1)
        };
        (a, da)
    }

    /// Relative finite-difference residual of `−[∂ₓ + a(x)]²ψ = Eψ`:
    /// the discrete L2 norm of
    /// `−(ψ'' + 2aψ' + (a' + a²)ψ) − Eψ` over interior points, divided by
    /// the L2 norm of `ψ`. Second-order accurate in the grid spacing.
    pub fn residual_norm(&self, wf: &WaveField, energy: Complex64) -> Result<f64> {
        if wf.sampling != Sampling::Grid {
            return Err(Error::Input("residual_norm needs a continuum grid wavefield".into()));
        }
        if wf.len() < 5 {
            return Err(Error::Input("residual_norm needs at least 5 grid points".into()));
        }
        let psi = wf.to_grid_function()?;
        let d1 = first_derivative(&psi)?;
        let d2 = second_derivative(&psi)?;
        let h = psi.spacing();

        let mut acc = 0.0;
        for i in 1..psi.len() - 1 {
            let x = psi.positions()[i];
            let (a, da) = self.potential(x);
            let p = psi.values()[i];
            let hp = -(d2.values()[i] + d1.values()[i] * (2.0 * a) + p * (da + a * a));
            acc += h * (hp - energy * p).norm_sqr();
        }
        let norm = wf.l2_norm();
        if norm == 0.0 {
            return Err(Error::Input("zero wavefield".into()));
        }
        Ok(acc.sqrt() / norm)
    }

    fn grid(&self, points: usize) -> Result<Vec<f64>> {
        if points < 5 {
            return Err(Error::Input(format!("need at least 5 grid points, got {points}")));
        }
        linspace(0.0, self.length, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(gamma: f64, x0: f64) -> ContinuumModel {
        ContinuumModel::new(gamma, x0, 100.0).unwrap()
    }

    #[test]
    fn obc_energy_values() {
        let unit = ContinuumModel::new(0.3, 1.0, PI).unwrap();
        assert!((unit.obc_energy(1).unwrap() - 1.0).abs() < 1e-15);
        let e = model(0.005, 0.0).obc_energy(13).unwrap();
        assert!((e - 0.16679632).abs() < 1e-8);
        assert_eq!(e, model(0.05, 0.0).obc_energy(13).unwrap());
    }

    #[test]
    fn obc_errors() {
        assert!(matches!(model(0.1, 0.0).obc_energy(0), Err(Error::Input(_))));
        let quad = ContinuumModel::with_order(0.1, 0.0, 10.0, 2).unwrap();
        assert!(matches!(quad.obc_energy(1), Err(Error::UnsupportedOrder(2))));
        assert!(matches!(quad.pbc_energy(1), Err(Error::UnsupportedOrder(2))));
    }

    #[test]
    fn invalid_model() {
        assert!(ContinuumModel::new(0.1, 0.0, 0.0).is_err());
        assert!(ContinuumModel::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn pbc_energy_values() {
        let m = model(0.005, 0.0);
        let e0 = m.pbc_energy(0).unwrap();
        assert!((e0 - Complex64::new(-0.0625, 0.0)).norm() < 1e-15);
        let e13 = m.pbc_energy(13).unwrap();
        assert!((e13.re - 0.604685).abs() < 1e-6, "{e13}");
        assert!((e13.im + 0.408407).abs() < 1e-6, "{e13}");
        let centred = model(0.005, 50.0).pbc_energy(7).unwrap();
        assert_eq!(centred.im, 0.0);
        assert!((centred.re - (14.0 * PI / 100.0).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn obc_state_boundaries_and_norm() {
        let wf = model(0.005, 0.0).obc_state(13, 2001).unwrap();
        assert_eq!(wf.amplitudes[0], Complex64::new(0.0, 0.0));
        assert_eq!(wf.amplitudes[2000], Complex64::new(0.0, 0.0));
        assert!((wf.l2_norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hermitian_limit_is_pure_sine() {
        let wf = model(0.0, 37.0).obc_state(1, 101).unwrap();
        let scale = wf.amplitudes[50].re;
        for (x, a) in wf.positions.iter().zip(&wf.amplitudes) {
            assert!((a.re - scale * (PI * x / 100.0).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn gauge_identity_for_obc_state() {
        let m = model(0.02, 30.0);
        let wf = m.obc_state(9, 401).unwrap();
        let mut ratio = None;
        for (x, a) in wf.positions.iter().zip(&wf.amplitudes) {
            let s = (9.0 * PI * x / 100.0).sin();
            if s.abs() < 1e-3 {
                continue;
            }
            let r = a.re / (m.gauge_factor(*x) * s);
            let r0 = *ratio.get_or_insert(r);
            assert!(((r - r0) / r0).abs() < 1e-10);
        }
    }

    #[test]
    fn pbc_state_periodic() {
        for gamma in [0.005, -0.005, 0.0] {
            let wf = model(gamma, 0.0).pbc_state(13, 2001).unwrap();
            assert!((wf.amplitudes[0] - wf.amplitudes[2000]).norm() < 1e-12);
        }
    }

    #[test]
    fn gauge_factor_values() {
        assert_eq!(model(0.005, 3.0).gauge_factor(3.0), 1.0);
        assert!((model(0.005, 0.0).gauge_factor(10.0) - (-0.25f64).exp()).abs() < 1e-15);
        assert!((model(0.005, 0.0).gauge_factor(10.0) - 0.778801).abs() < 1e-6);
        let m0 = ContinuumModel::with_order(0.3, 0.0, 5.0, 0).unwrap();
        assert!((m0.gauge_factor(2.0) - (-0.6f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn residual_small_for_exact_pair_and_order_two() {
        let m = model(0.005, 0.0);
        let e = Complex64::new(m.obc_energy(13).unwrap(), 0.0);
        let r1 = m.residual_norm(&m.obc_state(13, 2001).unwrap(), e).unwrap();
        let r2 = m.residual_norm(&m.obc_state(13, 4001).unwrap(), e).unwrap();
        assert!(r1 < 1e-4, "{r1}");
        let order = (r1 / r2).log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn residual_large_for_wrong_energy() {
        let m = model(0.005, 0.0);
        let wf = m.obc_state(13, 2001).unwrap();
        let r = m.residual_norm(&wf, Complex64::new(0.0, 0.0)).unwrap();
        assert!(r > 0.1, "{r}");
    }

    #[test]
    fn residual_rejects_sites() {
        let m = model(0.005, 0.0);
        let wf = WaveField::normalized(
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            vec![Complex64::new(1.0, 0.0); 5],
            Sampling::Sites,
            NormConvention::UnitL2,
        )
        .unwrap();
        assert!(m.residual_norm(&wf, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn quadratic_potential_plane_wave() {
        let m = ContinuumModel::with_order(0.002, 5.0, 10.0, 2).unwrap();
        let (wf1, e) = m.plane_wave_state(1.3, 1001).unwrap();
        let (wf2, _) = m.plane_wave_state(1.3, 2001).unwrap();
        let r1 = m.residual_norm(&wf1, e).unwrap();
        let r2 = m.residual_norm(&wf2, e).unwrap();
        assert!(r1 < 1e-3);
        assert!(((r1 / r2).log2() - 2.0).abs() < 0.2);
    }
}
