//! Edge states of the continuum model on the half-line `x ≥ 0` with
//! `ψ(0) = 0`, for base energies inside the PBC parabola of `H_{γ₂}`
//! (potential zero at the wall, `x₀ = 0`).
//!
//! An interior energy lies on the PBC parabola of some smaller rate
//! `0 < γ₁ < γ₂`: `E_B = [k + iγ₁(x₀ − L/2)]²`. The PBC eigenstate `f` of
//! `H_{γ₁}` dressed with `e^{−½(γ₂−γ₁)x²}` is a decaying solution `ψ₁` of
//! `H_{γ₂}ψ = E_Bψ`. Reduction of order supplies the second solution
//!
//! ```text
//! ψ₂(x) = ψ₁(x) ∫₀ˣ e^{−γ₂x'²} / ψ₁(x')² dx'
//! ```
//!
//! with the Wronskian weight `e^{−γ₂x²}` fixed by the first-order term
//! `2γ₂xψ'` of the expanded equation. The second solution matched to `ψ₁` at
//! the wall is `ψ̃₂ = ψ₁ + ψ₂`, and the edge state is
//! `C(ψ₁ − ψ̃₂) = −Cψ₂`, which vanishes at `x = 0` and decays.

use num_complex::Complex64;

use crate::continuum::ContinuumModel;
use crate::error::{Error, Result};
use crate::numeric::{cumulative_integral, first_derivative, linspace, GridFunction};
use crate::topology::interior_parabola;
use crate::wave::{NormConvention, Sampling, WaveField};

/// Half-line geometry: rate `γ₂ > 0` of `H_{γ₂}`, the ring length `L` that
/// defines its PBC parabola, and the truncation point of the half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiInfinite {
    pub gamma: f64,
    pub length: f64,
    pub x_max: f64,
}

impl SemiInfinite {
    /// Truncates the half-line at `2L`.
    pub fn new(gamma: f64, length: f64) -> Result<Self> {
        Self::with_x_max(gamma, length, 2.0 * length)
    }

    pub fn with_x_max(gamma: f64, length: f64, x_max: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Input(format!(
                "edge modes are built for γ₂ > 0 (left wall), got {gamma}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Input(format!("length must be positive, got {length}")));
        }
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::Input(format!("x_max must be positive, got {x_max}")));
        }
        Ok(Self {
            gamma,
            length,
            x_max,
        })
    }

    /// The continuum model `H_{γ₂}` with `x₀ = 0`.
    pub fn model(&self) -> ContinuumModel {
        ContinuumModel {
            gamma: self.gamma,
            x0: 0.0,
            length: self.length,
            order: 1,
        }
    }

    fn grid(&self, points: usize) -> Result<Vec<f64>> {
        if points < 5 {
            return Err(Error::Input(format!("need at least 5 grid points, got {points}")));
        }
        linspace(0.0, self.x_max, points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeDecomposition {
    pub k: f64,
    pub gamma1: f64,
    /// `0 < γ₁ < γ₂`.
    pub valid: bool,
}

/// Solves `E_B = [k + iγ₁(x₀ − L/2)]²` (with `x₀ = 0`) for real `k` and
/// `γ₁`. Of the two square roots of `E_B`, the one giving `γ₁ ≥ 0` is used;
/// for `Im E_B < 0` this is the principal root.
pub fn decompose_energy(base: Complex64, geometry: &SemiInfinite) -> Result<EdgeDecomposition> {
    if base == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate("E_B = 0 corresponds to γ₁ = 0".into()));
    }
    let arm = -0.5 * geometry.length;
    let mut root = base.sqrt();
    if root.im / arm < 0.0 {
        root = -root;
    }
    let gamma1 = root.im / arm;
    let valid = gamma1 > 0.0 && gamma1 < geometry.gamma;
    Ok(EdgeDecomposition {
        k: root.re,
        gamma1,
        valid,
    })
}

fn require_valid(dec: &EdgeDecomposition) -> Result<()> {
    if dec.valid {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "decomposition γ₁ = {} is outside (0, γ₂)",
            dec.gamma1
        )))
    }
}

/// `ln ψ₁(x) = −½γ₁(x − L/2)² + ikx − ½(γ₂ − γ₁)x²`.
fn log_psi1(dec: &EdgeDecomposition, geometry: &SemiInfinite, x: f64) -> Complex64 {
    let d = x - 0.5 * geometry.length;
    Complex64::new(
        -0.5 * dec.gamma1 * d * d - 0.5 * (geometry.gamma - dec.gamma1) * x * x,
        dec.k * x,
    )
}

/// Decaying solution `ψ₁ = f(x)·e^{−½(γ₂−γ₁)x²}` sampled on `[0, x_max]`.
pub fn psi1(dec: &EdgeDecomposition, geometry: &SemiInfinite, points: usize) -> Result<GridFunction> {
    require_valid(dec)?;
    let xs = geometry.grid(points)?;
    let values = xs.iter().map(|&x| log_psi1(dec, geometry, x).exp()).collect();
    GridFunction::new(xs, values)
}

/// Reduction-of-order partner of [`psi1`], anchored so that `ψ₂(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondSolution {
    pub psi2: GridFunction,
    /// `ψ₁ψ₂' − ψ₁'ψ₂` from finite differences of the sampled functions.
    pub wronskian: Vec<Complex64>,
}

pub fn psi2(dec: &EdgeDecomposition, geometry: &SemiInfinite, points: usize) -> Result<SecondSolution> {
    let p1 = psi1(dec, geometry, points)?;
    let xs = p1.positions();
    // e^{−γ₂x²}/ψ₁² evaluated in log space; ψ₁ never vanishes.
    let integrand: Vec<Complex64> = xs
        .iter()
        .map(|&x| (Complex64::new(-geometry.gamma * x * x, 0.0) - log_psi1(dec, geometry, x) * 2.0).exp())
        .collect();
    if integrand.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Consistency(
            "reduction-of-order integrand overflowed; shorten x_max or refine the grid".into(),
        ));
    }
    let weight = p1.with_values(integrand)?;
    let running = cumulative_integral(&weight);
    let values: Vec<Complex64> = p1.values().iter().zip(&running).map(|(a, b)| a * b).collect();
    let p2 = p1.with_values(values)?;

    let d1 = first_derivative(&p1)?;
    let d2 = first_derivative(&p2)?;
    let wronskian: Vec<Complex64> = (0..p1.len())
        .map(|i| p1.values()[i] * d2.values()[i] - d1.values()[i] * p2.values()[i])
        .collect();
    // Abel: W(0) = e^0 = 1.
    if (wronskian[0] - 1.0).norm() > 0.1 {
        return Err(Error::Consistency(format!(
            "numerical Wronskian at the wall is {} (expected 1); refine the grid",
            wronskian[0]
        )));
    }
    Ok(SecondSolution { psi2: p2, wronskian })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeState {
    pub decomposition: EdgeDecomposition,
    pub wave: WaveField,
}

impl EdgeState {
    /// First position past the envelope maximum where `|ψ|` drops below
    /// `fraction` of its maximum.
    pub fn decay_position(&self, fraction: f64) -> Option<f64> {
        let moduli = self.wave.moduli();
        let max = moduli.iter().copied().fold(0.0, f64::max);
        let peak = moduli.iter().position(|&m| m == max)?;
        (peak..moduli.len())
            .find(|&i| moduli[i] < fraction * max)
            .map(|i| self.wave.positions[i])
    }
}

/// Normalised edge state for an interior base energy.
pub fn edge_state(base: Complex64, geometry: &SemiInfinite, points: usize) -> Result<EdgeState> {
    if !interior_parabola(&geometry.model(), base)? {
        return Err(Error::Exterior {
            re: base.re,
            im: base.im,
        });
    }
    let dec = decompose_energy(base, geometry)?;
    if !dec.valid {
        return Err(Error::Input(format!(
            "E_B = {base} maps to γ₁ = {} on the boundary of the (0, γ₂) family",
            dec.gamma1
        )));
    }
    let second = psi2(&dec, geometry, points)?;
    let amps = second.psi2.values().iter().map(|v| -v).collect();
    let wave = WaveField::normalized(
        second.psi2.positions().to_vec(),
        amps,
        Sampling::Grid,
        NormConvention::UnitL2,
    )?;
    Ok(EdgeState {
        decomposition: dec,
        wave,
    })
}
