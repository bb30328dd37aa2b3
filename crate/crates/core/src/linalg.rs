//! Small dense complex matrices (row-major) and the Hermitian solves used at
//! every quadrature node.

use num_complex::Complex64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn scale(&self, factor: f64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Largest entry of `|A - A^H|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise `|A - B|`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `u^H A u`.
    pub fn quadratic_form(&self, u: &[Complex64]) -> Complex64 {
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.data[i * n + j] * u[j];
            }
            acc += u[i].conj() * row;
        }
        acc
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap();
            if a[pivot * n + k].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let akk = a[k * n + k];
            det *= akk;
            for i in k + 1..n {
                let f = a[i * n + k] / akk;
                for j in k + 1..n {
                    let v = a[k * n + j];
                    a[i * n + j] -= f * v;
                }
            }
        }
        det
    }
}

/// Failure of a Cholesky factorization: the matrix is not numerically
/// positive definite. Carries a condition estimate (infinite when a pivot
/// vanished).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub condition: f64,
}

/// In-place Cholesky `A = C C^H` of a Hermitian positive definite matrix.
///
/// Only the lower triangle of `a` is read; on success it holds `C`. Returns
/// the condition estimate `(max c_ii / min c_ii)^2`, and fails when a pivot
/// is non-positive or the estimate exceeds `max_condition`.
pub fn cholesky_in_place(
    a: &mut [Complex64],
    n: usize,
    max_condition: f64,
) -> Result<f64, NotPositiveDefinite> {
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot: f64 = 0.0;
    for j in 0..n {
        let mut d = a[j * n + j].re;
        for k in 0..j {
            d -= a[j * n + k].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(NotPositiveDefinite {
                condition: f64::INFINITY,
            });
        }
        let cjj = d.sqrt();
        a[j * n + j] = Complex64::new(cjj, 0.0);
        min_pivot = min_pivot.min(cjj);
        max_pivot = max_pivot.max(cjj);
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / cjj;
        }
    }
    let condition = (max_pivot / min_pivot).powi(2);
    if condition > max_condition {
        return Err(NotPositiveDefinite { condition });
    }
    Ok(condition)
}

/// Solves `C y = b` in place for lower-triangular `C`.
pub fn forward_substitute(c: &[Complex64], n: usize, b: &mut [Complex64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= c[i * n + k] * b[k];
        }
        b[i] = s / c[i * n + i].re;
    }
}

/// Solves `C^H y = b` in place for lower-triangular `C`.
pub fn backward_substitute_adjoint(c: &[Complex64], n: usize, b: &mut [Complex64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= c[k * n + i].conj() * b[k];
        }
        b[i] = s / c[i * n + i].re;
    }
}

/// Inverse of a Hermitian positive definite matrix from its Cholesky factor.
pub fn cholesky_inverse(c: &[Complex64], n: usize) -> CMatrix {
    let mut inv = CMatrix::zeros(n);
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        forward_substitute(c, n, &mut col);
        backward_substitute_adjoint(c, n, &mut col);
        for i in 0..n {
            inv.set(i, j, col[i]);
        }
    }
    inv
}
