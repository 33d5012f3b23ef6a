use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::RadialMeasure;

type C64 = Complex64;

/// Finite section of a localization/Toeplitz operator in the orthonormal
/// monomial basis: `matrix[(m, n)] ~ <T e_n, e_m>`.
#[derive(Debug, Clone)]
pub struct GalerkinOperator {
    pub matrix: DMatrix<C64>,
    pub measure: RadialMeasure,
    pub provenance: String,
    pub quad_tol: f64,
}

/// Eigen-decomposition of a [`GalerkinOperator`], eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `i` is the eigenvector of `eigenvalues[i]`.
    pub eigenvectors: DMatrix<C64>,
    pub residual_norm: f64,
    /// Per-eigenpair `||M v_i - lambda_i v_i||_2`.
    pub residuals: Vec<f64>,
}

impl GalerkinOperator {
    pub fn new(
        matrix: DMatrix<C64>,
        measure: RadialMeasure,
        provenance: impl Into<String>,
        quad_tol: f64,
    ) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        Ok(GalerkinOperator {
            matrix,
            measure,
            provenance: provenance.into(),
            quad_tol,
        })
    }

    pub fn diagonal(
        values: &[f64],
        measure: RadialMeasure,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let n = values.len();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::new(m, measure, provenance, 0.0)
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, m: usize, n: usize) -> C64 {
        self.matrix[(m, n)]
    }

    /// Matrix-vector product in coefficient space.
    pub fn apply(&self, coeffs: &[C64]) -> Result<Vec<C64>> {
        if coeffs.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: coeffs.len(),
            });
        }
        let v = DVector::from_column_slice(coeffs);
        Ok((&self.matrix * v).iter().copied().collect())
    }

    /// `max |M - M^*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Difference `self - other` as a new operator (e.g. `M(Omega_2) - M(Omega_1)`).
    pub fn minus(&self, other: &GalerkinOperator) -> Result<GalerkinOperator> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: other.size(),
            });
        }
        GalerkinOperator::new(
            &self.matrix - &other.matrix,
            self.measure,
            format!("({}) - ({})", self.provenance, other.provenance),
            self.quad_tol + other.quad_tol,
        )
    }

    /// Full Hermitian eigen-decomposition of the symmetrized matrix.
    pub fn eigendecompose(&self) -> Result<Spectrum> {
        let n = self.size();
        let sym = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let max_iter = 200 * n.max(10);
        let eig = nalgebra::linalg::SymmetricEigen::try_new(sym.clone(), 1e-15, max_iter)
            .ok_or_else(|| {
                Error::SolverFailure(format!(
                    "Hermitian QR did not converge within {max_iter} iterations (N = {n})"
                ))
            })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        let residuals: Vec<f64> = (0..n)
            .map(|i| {
                let v = eigenvectors.column(i);
                (&sym * v - v * C64::new(eigenvalues[i], 0.0)).norm()
            })
            .collect();
        let residual_norm = residuals.iter().copied().fold(0.0, f64::max);
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
            residual_norm,
            residuals,
        })
    }
}

impl Spectrum {
    /// `max |V^* V - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.eigenvectors.ncols();
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let e = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((g[(i, j)] - e).norm());
            }
        }
        worst
    }
}
