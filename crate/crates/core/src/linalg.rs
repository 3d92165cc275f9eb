//! Dense real LU with partial pivoting and a one-norm condition estimate.

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds the matrix from its columns.
    pub fn from_columns(cols: &[Vec<f64>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks_exact(self.n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.n).map(|j| (0..self.n).map(|i| self[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    norm_one: f64,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= scale * f64::EPSILON * n as f64 * 1e-3 {
                return Err(Error::SingularMatrix(k));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let m = lu[(i, k)] / d;
                lu[(i, k)] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        lu.data[i * n + j] -= m * lu.data[k * n + j];
                    }
                }
            }
        }
        Ok(Self { lu, perm, norm_one: a.norm_one() })
    }

    pub fn dim(&self) -> usize {
        self.lu.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.n;
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = b, then Lᵀ w = z, then x = Pᵀ w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.lu.n;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                self.solve(&e)
            })
            .collect();
        Matrix::from_columns(&cols)
    }

    /// Estimate of `‖A‖₁‖A⁻¹‖₁` (Hager's method, as refined by Higham).
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.n;
        if n == 0 {
            return 1.0;
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            let new_est: f64 = y.iter().map(|v| v.abs()).sum();
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) =
                z.iter().enumerate().fold(
                    (0, f64::NEG_INFINITY),
                    |b, (i, v)| {
                        if v.abs() > b.1 {
                            (i, v.abs())
                        } else {
                            b
                        }
                    },
                );
            let zx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            est = new_est.max(est);
            if zmax <= zx {
                break;
            }
            x = vec![0.0; n];
            x[j] = 1.0;
        }
        // Higham's alternating-sign vector guards against Hager's blind spots.
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        est.max(alt_est) * self.norm_one
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        m
    }

    #[test]
    fn solves_random_systems() {
        for n in [1, 2, 5, 20] {
            let a = random_matrix(n, n as u64);
            let lu = Lu::factor(&a).unwrap();
            let x: Vec<f64> = (0..n).map(|i| i as f64 - 1.5).collect();
            let b = a.mul_vec(&x);
            let got = lu.solve(&b);
            for (g, e) in got.iter().zip(&x) {
                assert!((g - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn transpose_solve() {
        let a = random_matrix(8, 3);
        let lu = Lu::factor(&a).unwrap();
        let x: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
        let mut at = Matrix::zeros(8);
        for i in 0..8 {
            for j in 0..8 {
                at[(i, j)] = a[(j, i)];
            }
        }
        let got = lu.solve_transpose(&at.mul_vec(&x));
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = random_matrix(10, 7);
        let inv = Lu::factor(&a).unwrap().inverse();
        assert!(a.mul(&inv).max_abs_diff(&Matrix::identity(10)) < 1e-10);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut a = Matrix::zeros(3);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = 1.0;
        assert!(matches!(Lu::factor(&a), Err(Error::SingularMatrix(2))));
    }

    #[test]
    fn condition_estimate_matches_exact_for_diagonal() {
        let mut a = Matrix::identity(4);
        a[(2, 2)] = 1e-6;
        a[(0, 0)] = 3.0;
        let est = Lu::factor(&a).unwrap().condition_estimate();
        assert!((est - 3e6).abs() / 3e6 < 1e-12);
    }

    #[test]
    fn condition_estimate_is_a_lower_bound_within_factor() {
        let a = random_matrix(12, 11);
        let lu = Lu::factor(&a).unwrap();
        let exact = a.norm_one() * lu.inverse().norm_one();
        let est = lu.condition_estimate();
        assert!(est <= exact * (1.0 + 1e-10));
        assert!(est >= exact / 10.0);
    }
}
