//! Tight-binding chain with linearly varying asymmetric hopping.
//!
//! Sites are labelled `j = 1..=N`. The bond between `j` and `j + 1` carries
//! the exponent `γ(j − j₀ + ½)`: the backward amplitude (row `j`, column
//! `j + 1`) is `t·e^{+γ(j−j₀+½)}` and the forward amplitude is
//! `t·e^{−γ(j−j₀+½)}`.
//!
//! Under OBC the diagonal similarity `S = diag(e^{γ s(j)})` maps the chain
//! onto a uniform Hermitian chain, so the spectrum is real and independent of
//! `γ`. Under PBC the wrap bond `N → 1` is given the exponent
//! `γ((N+1)/2 − j₀)`, which makes the total imaginary flux around the ring
//! `Nγ((N+1)/2 − j₀)` and yields `E_n = 2t·cos[2πn/N + iγ(j₀ − (N+1)/2)]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{
    cmp_re_im, eig_complex_dense_with, eig_sym_tridiag, ComplexMatrix, EigConfig, DEFAULT_MAX_DIM,
};
use crate::wave::{NormConvention, Sampling, WaveField};

/// Largest exponent magnitude accepted before `exp` would overflow.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeModel {
    pub t: f64,
    pub gamma: f64,
    /// Reference site where the hopping asymmetry vanishes; may be fractional.
    pub j0: f64,
    pub sites: usize,
    pub boundary: Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Numeric,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub index: i64,
    pub energy: Complex64,
    pub provenance: Provenance,
}

/// Eigenenergies sorted by real part, then imaginary part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn from_entries(mut entries: Vec<SpectrumEntry>) -> Self {
        entries.sort_by(|a, b| cmp_re_im(&a.energy, &b.energy).then(a.index.cmp(&b.index)));
        Self { entries }
    }

    /// Numeric eigenvalues, indexed by their position in sorted order.
    pub fn numeric(mut energies: Vec<Complex64>) -> Self {
        energies.sort_by(cmp_re_im);
        Self {
            entries: energies
                .into_iter()
                .enumerate()
                .map(|(i, energy)| SpectrumEntry {
                    index: i as i64 + 1,
                    energy,
                    provenance: Provenance::Numeric,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn energies(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.energy).collect()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.entries.iter().map(|e| e.energy.im.abs()).fold(0.0, f64::max)
    }
}

impl LatticeModel {
    pub fn new(t: f64, gamma: f64, j0: f64, sites: usize, boundary: Boundary) -> Result<Self> {
        if sites < 2 {
            return Err(Error::Input(format!("lattice needs at least 2 sites, got {sites}")));
        }
        if !(t.is_finite() && t != 0.0) {
            return Err(Error::Input(format!("hopping t must be finite and nonzero, got {t}")));
        }
        if !gamma.is_finite() || !j0.is_finite() {
            return Err(Error::Input("gamma and j0 must be finite".into()));
        }
        Ok(Self {
            t,
            gamma,
            j0,
            sites,
            boundary,
        })
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        Self { boundary, ..*self }
    }

    /// Exponent of the bond between sites `j` and `j + 1`.
    pub fn bond_exponent(&self, j: usize) -> f64 {
        self.gamma * (j as f64 - self.j0 + 0.5)
    }

    /// Exponent of the wrap bond `N → 1` under PBC.
    pub fn wrap_exponent(&self) -> f64 {
        self.gamma * (0.5 * (self.sites as f64 + 1.0) - self.j0)
    }

    /// `δ = γ(j₀ − (N+1)/2)`, the imaginary part of the PBC momentum.
    pub fn pbc_shift(&self) -> f64 {
        -self.wrap_exponent()
    }

    fn checked_exp(x: f64) -> Result<f64> {
        if x.abs() > MAX_EXPONENT {
            return Err(Error::ParameterRange(format!(
                "hopping exponent {x} exceeds ±{MAX_EXPONENT}"
            )));
        }
        Ok(x.exp())
    }

    pub fn build_hamiltonian(&self) -> Result<ComplexMatrix> {
        let n = self.sites;
        let mut h = ComplexMatrix::zeros(n);
        for j in 1..n {
            let e = Self::checked_exp(self.bond_exponent(j))?;
            h[(j - 1, j)] += Complex64::new(self.t * e, 0.0);
            h[(j, j - 1)] += Complex64::new(self.t / e, 0.0);
        }
        if self.boundary == Boundary::Periodic {
            let e = Self::checked_exp(self.wrap_exponent())?;
            h[(n - 1, 0)] += Complex64::new(self.t * e, 0.0);
            h[(0, n - 1)] += Complex64::new(self.t / e, 0.0);
        }
        Ok(h)
    }

    pub fn analytic_energies(&self) -> Spectrum {
        let n_sites = self.sites as f64;
        let entries = (1..=self.sites as i64)
            .map(|n| {
                let energy = match self.boundary {
                    Boundary::Open => {
                        Complex64::new(2.0 * self.t * (n as f64 * PI / (n_sites + 1.0)).cos(), 0.0)
                    }
                    Boundary::Periodic => {
                        let z = Complex64::new(2.0 * PI * n as f64 / n_sites, self.pbc_shift());
                        z.cos() * (2.0 * self.t)
                    }
                };
                SpectrumEntry {
                    index: n,
                    energy,
                    provenance: Provenance::Analytic,
                }
            })
            .collect();
        Spectrum::from_entries(entries)
    }

    /// Closed-form eigenstate `n` and the energy it satisfies
    /// `Hψ = Eψ` with.
    ///
    /// OBC: `ψ_j = e^{−½γ(j−j₀)²}(−1)^j sin(nπj/(N+1))`. The alternating sign
    /// flips the band, so this state pairs with `−2t·cos(nπ/(N+1))`, i.e.
    /// entry `N + 1 − n` of [`analytic_energies`](Self::analytic_energies).
    ///
    /// PBC: `ψ_j = e^{−½γ(j−(N+1)/2)²} e^{i2πnj/N}` with energy
    /// `2t·cos[2πn/N + iγ(j₀ − (N+1)/2)]`. For odd `N` the centre is the
    /// site `⌈(N+1)/2⌉`; for even `N` it sits between two sites.
    pub fn analytic_state(&self, n: i64) -> Result<(WaveField, Complex64)> {
        self.analytic_state_with(n, NormConvention::UnitL2)
    }

    pub fn analytic_state_with(&self, n: i64, convention: NormConvention) -> Result<(WaveField, Complex64)> {
        if n < 1 || n > self.sites as i64 {
            return Err(Error::Input(format!(
                "state index {n} outside 1..={}",
                self.sites
            )));
        }
        let n_sites = self.sites as f64;
        let positions: Vec<f64> = (1..=self.sites).map(|j| j as f64).collect();
        let (amplitudes, energy) = match self.boundary {
            Boundary::Open => {
                let theta = n as f64 * PI / (n_sites + 1.0);
                let amps = positions
                    .iter()
                    .map(|&j| {
                        let d = j - self.j0;
                        let sign = if (j as i64) % 2 == 0 { 1.0 } else { -1.0 };
                        Complex64::new(sign * (-0.5 * self.gamma * d * d).exp() * (theta * j).sin(), 0.0)
                    })
                    .collect();
                (amps, Complex64::new(-2.0 * self.t * theta.cos(), 0.0))
            }
            Boundary::Periodic => {
                let centre = 0.5 * (n_sites + 1.0);
                let k = 2.0 * PI * n as f64 / n_sites;
                let amps = positions
                    .iter()
                    .map(|&j| {
                        let d = j - centre;
                        Complex64::from_polar((-0.5 * self.gamma * d * d).exp(), k * j)
                    })
                    .collect();
                let energy = Complex64::new(k, self.pbc_shift()).cos() * (2.0 * self.t);
                (amps, energy)
            }
        };
        let wf = WaveField::normalized(positions, amplitudes, Sampling::Sites, convention)?;
        Ok((wf, energy))
    }

    /// `‖Hψ − Eψ‖₂ / ‖ψ‖₂` with `H` from [`build_hamiltonian`](Self::build_hamiltonian).
    pub fn lattice_residual(&self, wf: &WaveField, energy: Complex64) -> Result<f64> {
        if wf.len() != self.sites {
            return Err(Error::Input(format!(
                "wavefield has {} amplitudes for {} sites",
                wf.len(),
                self.sites
            )));
        }
        let h = self.build_hamiltonian()?;
        let hv = h.matvec(&wf.amplitudes)?;
        let num: f64 = hv
            .iter()
            .zip(&wf.amplitudes)
            .map(|(a, b)| (a - energy * b).norm_sqr())
            .sum();
        let den: f64 = wf.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if den == 0.0 {
            return Err(Error::Input("zero wavefield".into()));
        }
        Ok((num / den).sqrt())
    }

    /// Exponents `s(j)` of the diagonal similarity `S = diag(e^{γ s(j)})`.
    pub fn similarity_scale(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.sites);
        let mut current = 1.0 - self.j0 + 0.5;
        s.push(current);
        for j in 2..=self.sites {
            current += (j - 1) as f64 - self.j0 + 0.5;
            s.push(current);
        }
        s
    }

    /// Applies `S H S⁻¹` to the OBC chain and returns the resulting uniform
    /// Hermitian tridiagonal `(diag, offdiag)`.
    pub fn hermitize(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.boundary != Boundary::Open {
            return Err(Error::Input("similarity map to a Hermitian chain needs OBC".into()));
        }
        let h = self.build_hamiltonian()?;
        let s = self.similarity_scale();
        let scale: Vec<f64> = s
            .iter()
            .map(|&sj| Self::checked_exp(self.gamma * sj))
            .collect::<Result<_>>()?;

        let n = self.sites;
        let mut diag = vec![0.0; n];
        let mut offdiag = Vec::with_capacity(n - 1);
        let mut deviation = 0.0f64;
        for j in 0..n {
            let d = h[(j, j)].re;
            deviation = deviation.max(d.abs());
            diag[j] = d;
            if j + 1 < n {
                let upper = scale[j] * h[(j, j + 1)].re / scale[j + 1];
                let lower = scale[j + 1] * h[(j + 1, j)].re / scale[j];
                deviation = deviation.max((upper - self.t).abs()).max((lower - self.t).abs());
                offdiag.push(self.t.signum() * (upper * lower).sqrt());
            }
        }

        let max_exponent = s.iter().fold(0.0f64, |m, v| m.max((self.gamma * v).abs()));
        let tolerance = 1e-10 * self.t.abs() * (1.0 + max_exponent);
        if deviation > tolerance {
            return Err(Error::Consistency(format!(
                "S H S^-1 deviates from the uniform chain by {deviation:e} (tolerance {tolerance:e})"
            )));
        }
        Ok((diag, offdiag))
    }

    /// OBC spectrum through the similarity map and symmetric bisection.
    pub fn hermitized_spectrum(&self) -> Result<Spectrum> {
        let (diag, offdiag) = self.hermitize()?;
        let values = eig_sym_tridiag(&diag, &offdiag)?;
        Ok(Spectrum::numeric(
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        ))
    }

    /// Eigenvalues of the full non-Hermitian matrix by dense complex QR.
    pub fn numeric_spectrum(&self) -> Result<Spectrum> {
        self.numeric_spectrum_with(DEFAULT_MAX_DIM)
    }

    pub fn numeric_spectrum_with(&self, max_dim: usize) -> Result<Spectrum> {
        let h = self.build_hamiltonian()?;
        let eig = eig_complex_dense_with(
            &h,
            &EigConfig {
                want_vectors: false,
                max_dim,
            },
        )?;
        Ok(Spectrum::numeric(eig.eigenvalues))
    }
}

/// Largest distance between matched eigenvalues: entries of `a` (sorted) are
/// paired greedily with the nearest still-unmatched entry of `b`.
pub fn compare_spectra(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Input(format!(
            "spectra have {} and {} entries",
            a.len(),
            b.len()
        )));
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for ea in &a.entries {
        let mut best: Option<(usize, f64)> = None;
        for (i, eb) in b.entries.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (ea.energy - eb.energy).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (i, d) = best.expect("equal lengths");
        used[i] = true;
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obc(gamma: f64, n: usize) -> LatticeModel {
        LatticeModel::new(1.0, gamma, 0.0, n, Boundary::Open).unwrap()
    }

    #[test]
    fn hermitian_when_gamma_zero() {
        let h = obc(0.0, 6).build_hamiltonian().unwrap();
        assert!(h.is_hermitian(0.0));
        for j in 0..5 {
            assert_eq!(h[(j, j + 1)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn three_site_couplings() {
        let h = obc(0.1, 3).build_hamiltonian().unwrap();
        let close = |z: Complex64, v: f64| (z.re - v).abs() < 1e-6 && z.im == 0.0;
        assert!(close(h[(0, 1)], 1.161834));
        assert!(close(h[(1, 0)], 0.860708));
        assert!(close(h[(1, 2)], 1.284025));
        assert!(close(h[(2, 1)], 0.778801));
        assert_eq!(h[(0, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn wrap_magnitudes() {
        let m = LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Periodic).unwrap();
        let h = m.build_hamiltonian().unwrap();
        assert!((h[(99, 0)].re - 0.2525f64.exp()).abs() < 1e-14);
        assert!((h[(0, 99)].re - (-0.2525f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn overflow_guard() {
        let m = obc(10.0, 100);
        assert!(matches!(m.build_hamiltonian(), Err(Error::ParameterRange(_))));
    }

    #[test]
    fn invalid_models() {
        assert!(LatticeModel::new(1.0, 0.0, 0.0, 1, Boundary::Open).is_err());
        assert!(LatticeModel::new(0.0, 0.0, 0.0, 4, Boundary::Open).is_err());
    }

    #[test]
    fn analytic_energy_examples() {
        let top = obc(0.005, 100).analytic_energies().entries.last().unwrap().energy;
        assert!((top.re - 1.9990326).abs() < 1e-7);
        let pbc = LatticeModel::new(1.0, 0.005, 0.0, 100, Boundary::Periodic).unwrap();
        let spec = pbc.analytic_energies();
        let k0 = spec.entries.iter().find(|e| e.index == 100).unwrap().energy;
        assert!((k0.re - 2.0 * 0.2525f64.cosh()).abs() < 1e-14 && k0.im.abs() < 1e-15);
        assert!((k0.re - 2.0640957).abs() < 1e-7);
        let herm = LatticeModel::new(1.0, 0.0, 0.0, 8, Boundary::Periodic).unwrap();
        for e in &herm.analytic_energies().entries {
            let want = 2.0 * (2.0 * PI * e.index as f64 / 8.0).cos();
            assert!((e.energy.re - want).abs() < 1e-15 && e.energy.im.abs() < 1e-15);
        }
    }

    #[test]
    fn pbc_energies_periodic_in_index() {
        let m = LatticeModel::new(1.0, 0.005, 0.0, 20, Boundary::Periodic).unwrap();
        for n in 1..=20 {
            let a = Complex64::new(2.0 * PI * n as f64 / 20.0, m.pbc_shift()).cos();
            let b = Complex64::new(2.0 * PI * (n + 20) as f64 / 20.0, m.pbc_shift()).cos();
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn analytic_states_satisfy_residual() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            for gamma in [0.005, -0.005, 0.05, 0.0] {
                for n_sites in [7usize, 100] {
                    let m = LatticeModel::new(1.0, gamma, 0.0, n_sites, boundary).unwrap();
                    for n in 1..=n_sites as i64 {
                        let (wf, e) = m.analytic_state(n).unwrap();
                        let r = m.lattice_residual(&wf, e).unwrap();
                        assert!(r < 1e-10, "{boundary:?} γ={gamma} N={n_sites} n={n}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn analytic_state_index_range() {
        let m = obc(0.005, 10);
        assert!(m.analytic_state(0).is_err());
        assert!(m.analytic_state(11).is_err());
    }

    #[test]
    fn residual_negative_control() {
        let m = obc(0.05, 10);
        let wf = WaveField::normalized(
            (1..=10).map(|j| j as f64).collect(),
            (0..10).map(|j| Complex64::new(1.0 + j as f64, 0.0)).collect(),
            Sampling::Sites,
            NormConvention::UnitL2,
        )
        .unwrap();
        assert!(m.lattice_residual(&wf, Complex64::new(0.0, 0.0)).unwrap() > 0.5);
        let short = WaveField::normalized(vec![1.0], vec![Complex64::new(1.0, 0.0)], Sampling::Sites, NormConvention::UnitL2).unwrap();
        assert!(m.lattice_residual(&short, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn similarity_scale_values() {
        let s = obc(0.3, 5).similarity_scale();
        assert_eq!(&s[..4], &[1.5, 3.0, 5.5, 9.0]);
        assert_eq!(s, obc(-2.0, 5).similarity_scale());
        let shifted = LatticeModel::new(1.0, 0.1, 2.5, 4, Boundary::Open).unwrap().similarity_scale();
        assert_eq!(shifted[1] - shifted[0], 1.0 - 2.5 + 0.5);
    }

    #[test]
    fn hermitize_three_sites() {
        let (d, o) = obc(0.1, 3).hermitize().unwrap();
        assert_eq!(d, vec![0.0; 3]);
        for v in o {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hermitize_identity_when_gamma_zero() {
        let (d, o) = obc(0.0, 5).hermitize().unwrap();
        assert_eq!(d, vec![0.0; 5]);
        assert_eq!(o, vec![1.0; 4]);
    }

    #[test]
    fn hermitize_rejects_pbc() {
        let m = LatticeModel::new(1.0, 0.1, 0.0, 4, Boundary::Periodic).unwrap();
        assert!(m.hermitize().is_err());
    }

    #[test]
    fn numeric_three_site() {
        let spec = obc(0.3, 3).numeric_spectrum().unwrap();
        let s2 = 2f64.sqrt();
        for (e, want) in spec.entries.iter().zip([-s2, 0.0, s2]) {
            assert!((e.energy - Complex64::new(want, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn numeric_hermitian_pbc_control() {
        let m = LatticeModel::new(1.0, 0.0, 0.0, 30, Boundary::Periodic).unwrap();
        let d = compare_spectra(&m.analytic_energies(), &m.numeric_spectrum().unwrap()).unwrap();
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn compare_spectra_basics() {
        let s = obc(0.0, 5).analytic_energies();
        assert_eq!(compare_spectra(&s, &s).unwrap(), 0.0);
        let other = obc(0.0, 4).analytic_energies();
        assert!(compare_spectra(&s, &other).is_err());
    }
}
