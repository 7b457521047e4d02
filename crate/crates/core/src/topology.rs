//! PBC spectral curves in the complex energy plane and their winding
//! numbers around a base energy.
//!
//! The continuum curve `E(k) = [k + iγ(x₀ − L/2)]²` is an open parabola;
//! the lattice curve `E(k) = 2t·cos(k + iδ)` is a closed ellipse with
//! semi-axes `2t·cosh δ` and `2t·sinh δ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::continuum::ContinuumModel;
use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeModel};

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 64;
/// Base energies closer than this to the curve are rejected.
pub const SINGULAR_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// `[k + i·shift]²`
    Parabola { shift: f64 },
    /// `2t·cos(k + i·shift)`
    Ellipse { t: f64, shift: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCurve {
    pub kind: CurveKind,
    pub k_min: f64,
    pub k_max: f64,
    pub closed: bool,
}

impl SpectralCurve {
    pub fn eval(&self, k: f64) -> Complex64 {
        match self.kind {
            CurveKind::Parabola { shift } => {
                let z = Complex64::new(k, shift);
                z * z
            }
            CurveKind::Ellipse { t, shift } => Complex64::new(k, shift).cos() * (2.0 * t),
        }
    }

    /// Same curve with the parameter range widened to `[-cutoff, cutoff]`.
    pub fn with_cutoff(self, cutoff: f64) -> Self {
        Self {
            k_min: -cutoff,
            k_max: cutoff,
            ..self
        }
    }

    fn k_at(&self, i: usize, samples: usize) -> f64 {
        if i == samples {
            self.k_max
        } else {
            self.k_min + (self.k_max - self.k_min) * i as f64 / samples as f64
        }
    }

    /// Distance from `z` to the curve: best of `samples + 1` uniform samples,
    /// refined by ternary search on the neighbouring intervals.
    pub fn distance_to(&self, z: Complex64, samples: usize) -> f64 {
        let samples = samples.max(2);
        let dist = |k: f64| (self.eval(k) - z).norm();
        let (best, _) = (0..=samples)
            .map(|i| (i, dist(self.k_at(i, samples))))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        let mut lo = self.k_at(best.saturating_sub(1), samples);
        let mut hi = self.k_at((best + 1).min(samples), samples);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if dist(m1) < dist(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        dist(0.5 * (lo + hi)).min(dist(self.k_at(best, samples)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    pub base: Complex64,
    pub winding: f64,
    pub samples: usize,
    /// `|w|` rounds to a nonzero integer.
    pub interior: bool,
}

/// The continuum PBC parabola over the default range `k ∈ [−π, π]`.
pub fn continuum_curve(model: &ContinuumModel) -> Result<SpectralCurve> {
    if model.order != 1 {
        return Err(Error::UnsupportedOrder(model.order));
    }
    Ok(SpectralCurve {
        kind: CurveKind::Parabola {
            shift: model.pbc_shift(),
        },
        k_min: -PI,
        k_max: PI,
        closed: false,
    })
}

/// The lattice PBC ellipse over one Brillouin zone.
pub fn lattice_curve(model: &LatticeModel) -> Result<SpectralCurve> {
    if model.boundary != Boundary::Periodic {
        return Err(Error::Input("spectral loop needs a PBC lattice".into()));
    }
    Ok(SpectralCurve {
        kind: CurveKind::Ellipse {
            t: model.t,
            shift: model.pbc_shift(),
        },
        k_min: -PI,
        k_max: PI,
        closed: true,
    })
}

/// Winding of `E(k) − E_B` as the sum of principal-value phase increments
/// between `samples + 1` uniformly spaced parameter values, divided by 2π.
/// On a closed curve the last sample coincides with the first, which closes
/// the loop.
pub fn winding_number(curve: &SpectralCurve, base: Complex64, samples: usize) -> Result<WindingReport> {
    if samples < MIN_SAMPLES {
        return Err(Error::Input(format!(
            "winding number needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let distance = curve.distance_to(base, samples);
    if distance <= SINGULAR_DISTANCE {
        return Err(Error::SingularBase { distance });
    }

    let mut prev = curve.eval(curve.k_at(0, samples)) - base;
    let mut total = 0.0;
    for i in 1..=samples {
        let cur = curve.eval(curve.k_at(i, samples)) - base;
        total += (cur / prev).arg();
        prev = cur;
    }
    let winding = total / (2.0 * PI);
    Ok(WindingReport {
        base,
        winding,
        samples,
        interior: winding.abs() >= 0.5,
    })
}

/// Strictly inside the PBC parabola of the continuum model:
/// `Re E_B > (Im E_B / 2c)² − c²` with `c = γ(x₀ − L/2)`.
pub fn interior_parabola(model: &ContinuumModel, base: Complex64) -> Result<bool> {
    if model.order != 1 {
        return Err(Error::UnsupportedOrder(model.order));
    }
    let c = model.pbc_shift();
    if c == 0.0 {
        return Err(Error::Degenerate(
            "PBC parabola collapses to the half-line E >= 0 when γ(x₀ − L/2) = 0".into(),
        ));
    }
    let q = base.im / (2.0 * c);
    Ok(base.re > q * q - c * c)
}

/// Strictly inside the lattice PBC ellipse.
pub fn interior_ellipse(model: &LatticeModel, base: Complex64) -> Result<bool> {
    if model.boundary != Boundary::Periodic {
        return Err(Error::Input("interior test needs a PBC lattice".into()));
    }
    let delta = model.pbc_shift();
    if delta == 0.0 {
        return Err(Error::Degenerate(
            "PBC loop collapses to the segment [-2t, 2t] when δ = 0".into(),
        ));
    }
    let a = base.re / (2.0 * model.t * delta.cosh());
    let b = base.im / (2.0 * model.t * delta.sinh());
    Ok(a * a + b * b < 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_continuum(gamma: f64) -> ContinuumModel {
        ContinuumModel::new(gamma, 0.0, 100.0).unwrap()
    }

    fn paper_lattice(gamma: f64) -> LatticeModel {
        LatticeModel::new(1.0, gamma, 0.0, 100, Boundary::Periodic).unwrap()
    }

    #[test]
    fn continuum_curve_vertex() {
        let c = continuum_curve(&paper_continuum(0.005)).unwrap();
        assert!((c.eval(0.0) - Complex64::new(-0.0625, 0.0)).norm() < 1e-15);
        assert!(!c.closed);
        let centred = continuum_curve(&ContinuumModel::new(0.005, 50.0, 100.0).unwrap()).unwrap();
        for k in [-3.0, -0.5, 0.0, 2.0] {
            let e = centred.eval(k);
            assert!(e.im == 0.0 && e.re >= 0.0);
        }
    }

    #[test]
    fn pbc_energies_lie_on_curve() {
        let m = paper_continuum(0.005);
        let c = continuum_curve(&m).unwrap();
        for n in -50..=50 {
            let k = 2.0 * PI * n as f64 / 100.0;
            assert!((c.eval(k) - m.pbc_energy(n).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn lattice_curve_values() {
        let c = lattice_curve(&paper_lattice(0.005)).unwrap();
        assert!((c.eval(0.0).re - 2.0 * 0.2525f64.cosh()).abs() < 1e-14);
        assert!((c.eval(-PI) - c.eval(PI)).norm() < 1e-12);
        let flat = lattice_curve(&paper_lattice(0.0)).unwrap();
        assert!(flat.eval(1.234).im.abs() < 1e-15);
        // Ellipse semi-axes.
        let d: f64 = -0.2525;
        for k in [0.1, 1.0, 2.5] {
            let e = c.eval(k);
            let r = (e.re / (2.0 * d.cosh())).powi(2) + (e.im / (2.0 * d.sinh())).powi(2);
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert!(lattice_curve(&paper_lattice(0.005).with_boundary(Boundary::Open)).is_err());
    }

    #[test]
    fn lattice_centre_winds_once() {
        let c = lattice_curve(&paper_lattice(0.005)).unwrap();
        let w = winding_number(&c, Complex64::new(0.0, 0.0), DEFAULT_SAMPLES).unwrap();
        assert!((w.winding.abs() - 1.0).abs() < 1e-6, "{}", w.winding);
        assert!(w.interior);
    }

    #[test]
    fn continuum_interior_and_exterior() {
        for gamma in [0.005, -0.005] {
            let c = continuum_curve(&paper_continuum(gamma)).unwrap();
            let inside = winding_number(&c, Complex64::new(0.5, 0.0), DEFAULT_SAMPLES).unwrap();
            assert!((inside.winding.abs() - 1.0).abs() < 0.1, "{}", inside.winding);
            let outside = winding_number(&c, Complex64::new(10.0, 5.0), DEFAULT_SAMPLES).unwrap();
            assert!(outside.winding.abs() < 0.05, "{}", outside.winding);
        }
    }

    #[test]
    fn singular_base_rejected() {
        let c = continuum_curve(&paper_continuum(0.005)).unwrap();
        let on = c.eval(0.123_456_7);
        assert!(matches!(winding_number(&c, on, 4096), Err(Error::SingularBase { .. })));
        assert!(winding_number(&c, Complex64::new(1.0, 1.0), 10).is_err());
    }

    #[test]
    fn parabola_interior_examples() {
        let m = paper_continuum(0.005);
        assert!(interior_parabola(&m, Complex64::new(0.0, 0.0)).unwrap());
        assert!(!interior_parabola(&m, Complex64::new(-1.0, 0.0)).unwrap());
        assert!(!interior_parabola(&m, Complex64::new(-0.0625, 0.0)).unwrap());
        for n in 1..40 {
            let e = Complex64::new(m.obc_energy(n).unwrap(), 0.0);
            assert!(interior_parabola(&m, e).unwrap());
        }
        let centred = ContinuumModel::new(0.005, 50.0, 100.0).unwrap();
        assert!(matches!(interior_parabola(&centred, Complex64::new(1.0, 0.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ellipse_interior_examples() {
        let m = paper_lattice(0.005);
        assert!(interior_ellipse(&m, Complex64::new(0.0, 0.0)).unwrap());
        assert!(!interior_ellipse(&m, Complex64::new(3.0, 0.0)).unwrap());
        let obc = m.with_boundary(Boundary::Open);
        for e in obc.analytic_energies().entries {
            assert!(interior_ellipse(&m, e.energy).unwrap());
        }
        assert!(matches!(
            interior_ellipse(&paper_lattice(0.0), Complex64::new(0.0, 0.0)),
            Err(Error::Degenerate(_))
        ));
    }
}
