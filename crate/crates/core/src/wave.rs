use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::GridFunction;

/// How a [`WaveField`] was normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormConvention {
    /// Discrete L2 norm equal to one (trapezoid weights on grids, plain sum
    /// on lattice sites).
    #[default]
    UnitL2,
    /// Largest modulus equal to one.
    UnitMax,
}

/// Whether positions are continuum grid points or lattice site indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Grid,
    Sites,
}

/// A sampled complex wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub positions: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    pub norm_convention: NormConvention,
    pub sampling: Sampling,
}

impl WaveField {
    /// Wraps raw samples and normalises them according to `convention`.
    pub fn normalized(
        positions: Vec<f64>,
        amplitudes: Vec<Complex64>,
        sampling: Sampling,
        convention: NormConvention,
    ) -> Result<Self> {
        if positions.len() != amplitudes.len() {
            return Err(Error::Input(format!(
                "{} positions but {} amplitudes",
                positions.len(),
                amplitudes.len()
            )));
        }
        if positions.is_empty() {
            return Err(Error::Input("empty wavefield".into()));
        }
        let mut wf = Self {
            positions,
            amplitudes,
            norm_convention: convention,
            sampling,
        };
        wf.renormalize(convention)?;
        Ok(wf)
    }

    pub fn renormalize(&mut self, convention: NormConvention) -> Result<()> {
        let scale = match convention {
            NormConvention::UnitL2 => self.l2_norm(),
            NormConvention::UnitMax => self.max_abs(),
        };
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Input(format!("cannot normalise a wavefield of norm {scale}")));
        }
        for a in &mut self.amplitudes {
            *a /= scale;
        }
        self.norm_convention = convention;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Quadrature weights: trapezoid on grids, unit on sites.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.len();
        match self.sampling {
            Sampling::Sites => vec![1.0; n],
            Sampling::Grid => {
                if n < 2 {
                    return vec![1.0; n];
                }
                let h = (self.positions[n - 1] - self.positions[0]) / (n - 1) as f64;
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                w
            }
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.weights()
            .iter()
            .zip(&self.amplitudes)
            .map(|(w, a)| w * a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_grid_function(&self) -> Result<GridFunction> {
        GridFunction::new(self.positions.clone(), self.amplitudes.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_l2_on_grid() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let amps = vec![Complex64::new(3.0, 4.0); 11];
        let wf = WaveField::normalized(xs, amps, Sampling::Grid, NormConvention::UnitL2).unwrap();
        assert!((wf.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_max_on_sites() {
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -5.0)];
        let wf = WaveField::normalized(vec![1.0, 2.0], amps, Sampling::Sites, NormConvention::UnitMax).unwrap();
        assert_eq!(wf.max_abs(), 1.0);
    }

    #[test]
    fn zero_field_rejected() {
        let r = WaveField::normalized(vec![0.0], vec![Complex64::new(0.0, 0.0)], Sampling::Sites, NormConvention::UnitL2);
        assert!(r.is_err());
    }
}
