//! Householder reduction of a complex square matrix to upper Hessenberg form.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Reduces `m` to upper Hessenberg `h` with a unitary `q` such that
/// `m = q * h * q^H`.
pub fn hessenberg_reduce(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }

    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        // Column below the subdiagonal: x = h[k+1.., k].
        let tail_norm_sqr: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail_norm_sqr == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (x0.norm_sqr() + tail_norm_sqr).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;

        // v = x - alpha e1, normalised.
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = h[(i, k)];
        }
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }

        // h <- P h with P = I - 2 v v^H (rows k+1..n).
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            let two_dot = dot * 2.0;
            for i in k + 1..n {
                h[(i, j)] -= v[i] * two_dot;
            }
        }
        // h <- h P (columns k+1..n).
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| h[(i, j)] * v[j]).sum();
            let two_dot = dot * 2.0;
            for j in k + 1..n {
                h[(i, j)] -= two_dot * v[j].conj();
            }
        }
        // q <- q P.
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| q[(i, j)] * v[j]).sum();
            let two_dot = dot * 2.0;
            for j in k + 1..n {
                q[(i, j)] -= two_dot * v[j].conj();
            }
        }

        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruct(h: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
        q.matmul(h).unwrap().matmul(&q.adjoint()).unwrap()
    }

    fn unitarity_defect(q: &ComplexMatrix) -> f64 {
        q.adjoint()
            .matmul(q)
            .unwrap()
            .distance(&ComplexMatrix::identity(q.dim()))
    }

    #[test]
    fn two_by_two_unchanged() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let (h, q) = hessenberg_reduce(&m);
        assert_eq!(h, m);
        assert_eq!(q, ComplexMatrix::identity(2));
    }

    #[test]
    fn all_ones_three_by_three() {
        // One reflection maps (1, 1) to (-sqrt2, 0); by hand:
        // H = [[1, -sqrt2, 0], [-sqrt2, 2, 0], [0, 0, 0]].
        let m = ComplexMatrix::from_real_rows(&[vec![1.0; 3], vec![1.0; 3], vec![1.0; 3]]).unwrap();
        let (h, q) = hessenberg_reduce(&m);
        let s2 = 2f64.sqrt();
        let expected = ComplexMatrix::from_real_rows(&[
            vec![1.0, -s2, 0.0],
            vec![-s2, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(h[(2, 0)], ZERO);
        assert!(h.distance(&expected) < 1e-14);
        assert!(reconstruct(&h, &q).distance(&m) < 1e-13);
    }

    #[test]
    fn random_five_by_five() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        for _ in 0..20 {
            let data = (0..25)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let m = ComplexMatrix::from_row_major(5, data).unwrap();
            let (h, q) = hessenberg_reduce(&m);
            let norm = m.frobenius_norm();
            assert!(h.below_subdiagonal_max() < 1e-14 * norm);
            assert!(unitarity_defect(&q) < 1e-12);
            assert!(reconstruct(&h, &q).distance(&m) / norm < 1e-13);
        }
    }
}
