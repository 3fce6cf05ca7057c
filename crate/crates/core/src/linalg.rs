//! Dense symmetric eigendecomposition by the cyclic Jacobi method.
//!
//! Jacobi is slow for large matrices but the graphs handled here are small,
//! and it computes small eigenvalues to high relative accuracy, which the
//! finite-difference checks rely on.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Off-diagonal convergence threshold relative to the Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-12;
/// Sweep cap per matrix dimension.
pub const SWEEPS_PER_DIM: usize = 64;

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: DMatrix<f64>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[(p, q)] * a[(p, q)];
        }
    }
    s.sqrt()
}

/// Flips `v` so that its first entry of largest magnitude is positive.
pub fn sign_normalize(v: &mut DVector<f64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

pub fn symmetric_eigen(matrix: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    let mut a = matrix.clone();
    // enforce exact symmetry; the inputs are symmetric up to rounding
    for p in 0..n {
        for q in p + 1..n {
            let m = 0.5 * (a[(p, q)] + a[(q, p)]);
            a[(p, q)] = m;
            a[(q, p)] = m;
        }
    }
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();
    let cap = SWEEPS_PER_DIM * n.max(1);
    let mut sweeps = 0;
    let mut converged = scale == 0.0 || off_diagonal_norm(&a) <= JACOBI_TOL * scale;
    // one extra sweep after the threshold is met polishes the result to
    // working precision at negligible cost
    let mut polish = true;
    while !converged || polish {
        if converged {
            polish = false;
        }
        if sweeps == cap {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !converged {
            converged = off_diagonal_norm(&a) <= JACOBI_TOL * scale;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut u = v.column(i).into_owned();
        sign_normalize(&mut u);
        vectors.set_column(col, &u);
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 3, 5, 8, 13, 30] {
            let m = random_symmetric(n, &mut rng);
            let ours = symmetric_eigen(&m).unwrap();
            let mut theirs: Vec<f64> = m
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            for (x, y) in ours.values.iter().zip(&theirs) {
                assert!((x - y).abs() < 1e-12, "n={n}: {x} vs {y}");
            }
            let v = &ours.vectors;
            let residual =
                &m * v - v * DMatrix::from_diagonal(&DVector::from_vec(ours.values.clone()));
            assert!(residual.amax() < 1e-12);
            let gram = v.transpose() * v;
            assert!((gram - DMatrix::identity(n, n)).amax() < 1e-13);
        }
    }

    #[test]
    fn diagonal_input_needs_no_rotation() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0, 2.0]));
        let e = symmetric_eigen(&m).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(e.vectors[(1, 0)], 1.0);
    }

    #[test]
    fn sign_rule() {
        let mut v = DVector::from_vec(vec![0.1, -0.9, 0.9]);
        sign_normalize(&mut v);
        assert_eq!(v[1], 0.9);
    }
}
