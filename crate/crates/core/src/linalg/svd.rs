use nalgebra::{DMatrix, SymmetricEigen};

use super::{c64, dot, givens, norm2, zero, ComplexMatrix, Schur};
use crate::error::{Error, Result};

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let svd = m.to_nalgebra().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value.
pub fn two_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a tall or square matrix.
pub fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    if m.rows() < m.cols() {
        return Err(Error::Dimension(format!(
            "smallest singular value needs rows >= cols, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(singular_values(m).last().copied().unwrap_or(0.0))
}

/// `A^{-1}`; `SingularMatrix` when `s_min(A) <= TOL_SING s_max(A)`.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let s = singular_values(a);
    if n == 0 || s[n - 1] <= super::TOL_SING * s[0] {
        return Err(Error::SingularMatrix);
    }
    let inv = a
        .to_nalgebra()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularMatrix)?;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| inv[(i, j)]))
}

/// Ascending eigenvalues and unit eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.rows();
    let herm = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Fast `s_min(zI - A)` for many shifts `z`, reusing one Schur form.
#[derive(Debug, Clone)]
pub struct ShiftedSmin {
    t: ComplexMatrix,
}

impl ShiftedSmin {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let schur = super::schur_decompose(a)?;
        Ok(Self::from_schur(&schur))
    }

    pub fn from_schur(schur: &Schur) -> Self {
        Self { t: schur.t.clone() }
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    /// `s_min(zI - A)`.
    pub fn eval(&self, z: c64) -> f64 {
        let r = ComplexMatrix::from_fn(self.t.rows(), self.t.cols(), |i, j| {
            if i == j {
                z - self.t[(i, j)]
            } else {
                -self.t[(i, j)]
            }
        });
        triangular_smin(&r)
    }
}

/// `s_min(z Ĩ - H̃)` for a `(k+1) x k` Hessenberg matrix.
pub fn rect_shifted_smin(h_tilde: &ComplexMatrix, z: c64) -> f64 {
    let k = h_tilde.cols();
    if k == 0 {
        return 0.0;
    }
    let mut m = ComplexMatrix::from_fn(h_tilde.rows(), k, |i, j| {
        if i == j {
            z - h_tilde[(i, j)]
        } else {
            -h_tilde[(i, j)]
        }
    });
    // Hessenberg structure: one rotation per column triangularizes
    for j in 0..k.min(m.rows() - 1) {
        let (g, _) = givens(m[(j, j)], m[(j + 1, j)]);
        g.rotate_rows(&mut m, j, j..k);
        m[(j + 1, j)] = zero();
    }
    triangular_smin(&m.submatrix(0, k, 0, k))
}

fn forward_adjoint_solve(r: &ComplexMatrix, b: &mut [c64]) {
    // R^* y = b with R upper triangular
    let n = r.rows();
    for i in 0..n {
        let mut s = b[i];
        for l in 0..i {
            s -= r[(l, i)].conj() * b[l];
        }
        b[i] = s / r[(i, i)].conj();
    }
}

fn back_solve(r: &ComplexMatrix, b: &mut [c64]) {
    let n = r.rows();
    for i in (0..n).rev() {
        let mut s = b[i];
        let row = r.row(i);
        for l in i + 1..n {
            s -= row[l] * b[l];
        }
        b[i] = s / row[i];
    }
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
fn tridiag_max_eig(alpha: &[f64], beta: &[f64]) -> f64 {
    let n = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    // count of eigenvalues strictly below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..n {
            let b2 = if i > 0 {
                beta[i - 1] * beta[i - 1]
            } else {
                0.0
            };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-16 * hi.abs() {
            break;
        }
        if below(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Smallest singular value of an upper-triangular matrix by Lanczos on
/// `(R^* R)^{-1}` with full reorthogonalization.
pub(crate) fn triangular_smin(r: &ComplexMatrix) -> f64 {
    let n = r.rows();
    if n == 0 {
        return 0.0;
    }
    let dmax = r.diagonal().iter().map(|d| d.norm()).fold(0.0, f64::max);
    if r.diagonal().iter().any(|d| d.norm() == 0.0) || dmax == 0.0 {
        return 0.0;
    }
    if n <= 3 {
        return dense_smin(r);
    }
    let mut q0: Vec<c64> = (0..n)
        .map(|j| c64::from_polar(1.0 + 0.1 * ((j * 7) % 5) as f64, 2.399_963 * j as f64))
        .collect();
    let nq = norm2(&q0);
    q0.iter_mut().for_each(|v| *v /= nq);
    let max_steps = n.min(80);
    let mut basis: Vec<Vec<c64>> = Vec::with_capacity(max_steps);
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = q0;
    let mut prev = 0.0;
    let mut stable = 0;
    let mut theta = 0.0;
    for step in 0..max_steps {
        let mut w = q.clone();
        forward_adjoint_solve(r, &mut w);
        back_solve(r, &mut w);
        if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return dense_smin(r);
        }
        let a = dot(&q, &w).re;
        alpha.push(a);
        basis.push(q.clone());
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
        }
        theta = tridiag_max_eig(&alpha, &beta);
        if !theta.is_finite() {
            return dense_smin(r);
        }
        let b = norm2(&w);
        if (theta - prev).abs() <= 1e-14 * theta {
            stable += 1;
            if stable >= 2 {
                break;
            }
        } else {
            stable = 0;
        }
        prev = theta;
        if b <= 1e-13 * theta || step + 1 == max_steps {
            break;
        }
        beta.push(b);
        q = w.iter().map(|v| v / b).collect();
    }
    if theta <= 0.0 {
        return dense_smin(r);
    }
    1.0 / theta.sqrt()
}

fn dense_smin(r: &ComplexMatrix) -> f64 {
    singular_values(r).last().copied().unwrap_or(0.0)
}
