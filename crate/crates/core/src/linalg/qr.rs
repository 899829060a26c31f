use super::{c64, norm2, zero, ComplexMatrix, TOL_SING};
use crate::error::{Error, Result};

/// Plane rotation `G = [[c, s], [-conj(s), c]]` with real `c`.
#[derive(Debug, Clone, Copy)]
pub struct Givens {
    pub c: f64,
    pub s: c64,
}

/// Rotation with `G [x; y] = [r; 0]`; returns `(G, r)`.
pub fn givens(x: c64, y: c64) -> (Givens, c64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (Givens { c: 1.0, s: zero() }, x);
    }
    if ax == 0.0 {
        return (
            Givens {
                c: 0.0,
                s: y.conj() / ay,
            },
            c64::new(ay, 0.0),
        );
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    let g = Givens {
        c: ax / r,
        s: phase * y.conj() / r,
    };
    (g, phase * r)
}

impl Givens {
    /// `[a; b] <- G [a; b]`.
    #[inline]
    pub fn apply_left(&self, a: &mut c64, b: &mut c64) {
        let (x, y) = (*a, *b);
        *a = x * self.c + self.s * y;
        *b = -self.s.conj() * x + y * self.c;
    }

    /// `[a, b] <- [a, b] G^*` (row vector times the adjoint).
    #[inline]
    pub fn apply_right_adjoint(&self, a: &mut c64, b: &mut c64) {
        let (x, y) = (*a, *b);
        *a = x * self.c + self.s.conj() * y;
        *b = -self.s * x + y * self.c;
    }

    /// Rotates rows `i` and `i + 1` of `m` over columns `cols`.
    pub fn rotate_rows(&self, m: &mut ComplexMatrix, i: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let mut a = m[(i, j)];
            let mut b = m[(i + 1, j)];
            self.apply_left(&mut a, &mut b);
            m[(i, j)] = a;
            m[(i + 1, j)] = b;
        }
    }

    /// Right-multiplies columns `j`, `j + 1` of `m` by `G^*` over `rows`.
    pub fn rotate_cols(&self, m: &mut ComplexMatrix, j: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let mut a = m[(i, j)];
            let mut b = m[(i, j + 1)];
            self.apply_right_adjoint(&mut a, &mut b);
            m[(i, j)] = a;
            m[(i, j + 1)] = b;
        }
    }
}

/// Back substitution for upper-triangular `r` (uses the leading square block).
pub fn solve_upper(r: &ComplexMatrix, b: &[c64]) -> Result<Vec<c64>> {
    let n = r.cols();
    if b.len() < n || r.rows() < n {
        return Err(Error::Dimension("solve_upper size mismatch".into()));
    }
    let mut x = b[..n].to_vec();
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= r[(i, j)] * x[j];
        }
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            return Err(Error::SingularMatrix);
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// Householder QR of `m` applied to `b`; returns `(R, Q^* b)`.
pub(crate) fn householder_qr_apply(m: &ComplexMatrix, b: &[c64]) -> (ComplexMatrix, Vec<c64>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    let mut v = vec![zero(); rows];
    for k in 0..cols.min(rows) {
        let x: Vec<c64> = (k..rows).map(|i| a[(i, k)]).collect();
        let nx = norm2(&x);
        if nx == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            c64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * nx;
        for (vi, xi) in v[k..rows].iter_mut().zip(&x) {
            *vi = *xi;
        }
        v[k] -= alpha;
        let nv = norm2(&v[k..rows]);
        if nv == 0.0 {
            continue;
        }
        for vi in &mut v[k..rows] {
            *vi /= nv;
        }
        for j in k..cols {
            let s: c64 = (k..rows).map(|i| v[i].conj() * a[(i, j)]).sum();
            for i in k..rows {
                a[(i, j)] -= 2.0 * v[i] * s;
            }
        }
        let s: c64 = (k..rows).map(|i| v[i].conj() * rhs[i]).sum();
        for i in k..rows {
            rhs[i] -= 2.0 * v[i] * s;
        }
        for i in k + 1..rows {
            a[(i, k)] = zero();
        }
    }
    (a, rhs)
}

/// Minimizer of `||M x - b||` via Householder QR.
pub fn solve_least_squares(m: &ComplexMatrix, b: &[c64]) -> Result<Vec<c64>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::Dimension(format!(
            "least squares needs rows >= cols, got {rows}x{cols}"
        )));
    }
    if b.len() != rows {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, expected {rows}",
            b.len()
        )));
    }
    if cols == 0 {
        return Ok(Vec::new());
    }
    let (r, qtb) = householder_qr_apply(m, b);
    let diag_max = (0..cols).map(|j| r[(j, j)].norm()).fold(0.0, f64::max);
    for j in 0..cols {
        let p = r[(j, j)].norm();
        if p <= TOL_SING * diag_max || diag_max == 0.0 {
            return Err(Error::RankDeficient { pivot: p });
        }
    }
    solve_upper(&r.submatrix(0, cols, 0, cols), &qtb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn givens_zeroes_second_entry() {
        for (x, y) in [
            (c64::new(3.0, 1.0), c64::new(-2.0, 0.5)),
            (c64::new(0.0, 0.0), c64::new(1.0, -1.0)),
            (c64::new(2.0, 0.0), c64::new(0.0, 0.0)),
        ] {
            let (g, r) = givens(x, y);
            let (mut a, mut b) = (x, y);
            g.apply_left(&mut a, &mut b);
            assert!((a - r).norm() < 1e-14);
            assert!(b.norm() < 1e-14);
            assert!((r.norm() - x.norm().hypot(y.norm())).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_deficient_detected() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]);
        let b = vec![c64::new(1.0, 0.0); 3];
        assert!(matches!(
            solve_least_squares(&m, &b),
            Err(Error::RankDeficient { .. })
        ));
    }
}
