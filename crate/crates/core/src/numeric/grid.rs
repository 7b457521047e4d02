//! Uniformly sampled complex functions, quadrature and finite differences.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Complex samples on a uniform, ascending grid of at least three points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    positions: Vec<f64>,
    values: Vec<Complex64>,
    spacing: f64,
}

impl GridFunction {
    pub fn new(positions: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::Input(format!(
                "{} positions but {} values",
                positions.len(),
                values.len()
            )));
        }
        let spacing = check_uniform(&positions)?;
        Ok(Self {
            positions,
            values,
            spacing,
        })
    }

    /// Samples `f` at `points` equally spaced positions on `[a, b]`,
    /// endpoints included.
    pub fn sample(a: f64, b: f64, points: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let positions = linspace(a, b, points)?;
        let values = positions.iter().map(|&x| f(x)).collect();
        Self::new(positions, values)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.positions.len() {
            return Err(Error::Input("value count does not match the grid".into()));
        }
        Ok(Self {
            positions: self.positions.clone(),
            values,
            spacing: self.spacing,
        })
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.positions.len() == other.positions.len()
            && self.positions.first() == other.positions.first()
            && self.positions.last() == other.positions.last()
    }
}

/// `points` equally spaced values on `[a, b]` including both endpoints.
pub fn linspace(a: f64, b: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Input(format!("need at least 2 grid points, got {points}")));
    }
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::Input(format!("invalid interval [{a}, {b}]")));
    }
    let h = (b - a) / (points - 1) as f64;
    let mut xs: Vec<f64> = (0..points).map(|i| a + i as f64 * h).collect();
    xs[points - 1] = b;
    Ok(xs)
}

fn check_uniform(positions: &[f64]) -> Result<f64> {
    let n = positions.len();
    if n < 3 {
        return Err(Error::Input(format!("grid needs at least 3 points, got {n}")));
    }
    let first = positions[0];
    let last = positions[n - 1];
    let h = (last - first) / (n - 1) as f64;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Input("grid must be finite and ascending".into()));
    }
    let tol = 1e-12 * h.max(first.abs().max(last.abs()));
    for (i, &x) in positions.iter().enumerate() {
        if (x - (first + i as f64 * h)).abs() > tol {
            return Err(Error::Input(format!("grid is not uniform at index {i}")));
        }
    }
    Ok(h)
}

/// Composite Simpson rule; with an even point count the last interval is
/// closed with the trapezoid rule.
pub fn integrate_samples(f: &GridFunction) -> Result<Complex64> {
    let y = f.values();
    let n = y.len();
    if n < 3 {
        return Err(Error::Input("quadrature needs at least 3 points".into()));
    }
    let h = f.spacing();
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 2 };
    let mut acc = ZERO;
    for i in (0..simpson_end).step_by(2) {
        acc += (y[i] + y[i + 1] * 4.0 + y[i + 2]) * (h / 3.0);
    }
    if simpson_end != n - 1 {
        acc += (y[n - 2] + y[n - 1]) * (0.5 * h);
    }
    Ok(acc)
}

/// Running integral `∫_{x₀}^{x_i} f` at every grid point, fourth-order
/// accurate: each interval is integrated against the cubic through its
/// four nearest samples.
pub fn cumulative_integral(f: &GridFunction) -> Vec<Complex64> {
    let y = f.values();
    let n = y.len();
    let h = f.spacing();
    let mut out = vec![ZERO; n];
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + (y[i - 1] + y[i]) * (0.5 * h);
        }
        return out;
    }
    let w = h / 24.0;
    for i in 0..n - 1 {
        let piece = if i == 0 {
            (y[0] * 9.0 + y[1] * 19.0 - y[2] * 5.0 + y[3]) * w
        } else if i == n - 2 {
            (y[n - 1] * 9.0 + y[n - 2] * 19.0 - y[n - 3] * 5.0 + y[n - 4]) * w
        } else {
            ((y[i] + y[i + 1]) * 13.0 - y[i - 1] - y[i + 2]) * w
        };
        out[i + 1] = out[i] + piece;
    }
    out
}

/// Central first derivative on the interior, second-order one-sided at the
/// ends.
pub fn first_derivative(f: &GridFunction) -> Result<GridFunction> {
    let y = f.values();
    let n = y.len();
    if n < 3 {
        return Err(Error::Input("first derivative needs at least 3 points".into()));
    }
    let h = f.spacing();
    let mut d = vec![ZERO; n];
    d[0] = (y[0] * -3.0 + y[1] * 4.0 - y[2]) / (2.0 * h);
    d[n - 1] = (y[n - 1] * 3.0 - y[n - 2] * 4.0 + y[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    }
    f.with_values(d)
}

/// Three-point central second derivative on the interior, second-order
/// one-sided four-point formulas at the ends.
pub fn second_derivative(f: &GridFunction) -> Result<GridFunction> {
    let y = f.values();
    let n = y.len();
    if n < 5 {
        return Err(Error::Input("second derivative needs at least 5 points".into()));
    }
    let h2 = f.spacing() * f.spacing();
    let mut d = vec![ZERO; n];
    d[0] = (y[0] * 2.0 - y[1] * 5.0 + y[2] * 4.0 - y[3]) / h2;
    d[n - 1] = (y[n - 1] * 2.0 - y[n - 2] * 5.0 + y[n - 3] * 4.0 - y[n - 4]) / h2;
    for i in 1..n - 1 {
        d[i] = (y[i + 1] - y[i] * 2.0 + y[i - 1]) / h2;
    }
    f.with_values(d)
}
