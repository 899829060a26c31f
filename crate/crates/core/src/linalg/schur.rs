use super::{c64, givens, norm2, one, zero, ComplexMatrix};
use crate::error::{Error, Result};

/// Complex Schur form `A = Q T Q^*` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<c64> {
        self.t.diagonal()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.q.matmul(&self.t).matmul(&self.q.adjoint())
    }
}

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Householder reduction to upper Hessenberg form, accumulating `Q`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut v = vec![zero(); n];
    for k in 0..n.saturating_sub(2) {
        let x: Vec<c64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let tail = norm2(&x[1..]);
        if tail == 0.0 {
            continue;
        }
        let nx = norm2(&x);
        let phase = if x[0].norm() == 0.0 {
            one()
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * nx;
        for (vi, xi) in v[k + 1..].iter_mut().zip(&x) {
            *vi = *xi;
        }
        v[k + 1] -= alpha;
        let nv = norm2(&v[k + 1..]);
        for vi in &mut v[k + 1..] {
            *vi /= nv;
        }
        // H <- (I - 2vv*) H
        for j in k..n {
            let s: c64 = (k + 1..n).map(|i| v[i].conj() * h[(i, j)]).sum();
            for i in k + 1..n {
                h[(i, j)] -= 2.0 * v[i] * s;
            }
        }
        // H <- H (I - 2vv*), Q <- Q (I - 2vv*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: c64 = (k + 1..n).map(|j| m[(i, j)] * v[j]).sum();
                for j in k + 1..n {
                    m[(i, j)] -= 2.0 * s * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = zero();
        }
    }
    (q, h)
}

fn wilkinson_shift(a: c64, b: c64, c: c64, d: c64) -> c64 {
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = tr_half + root;
    let l2 = tr_half - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition by shifted QR on the Hessenberg form.
pub fn schur_decompose(a: &ComplexMatrix) -> Result<Schur> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(Schur {
            q: ComplexMatrix::zeros(0, 0),
            t: ComplexMatrix::zeros(0, 0),
        });
    }
    let (mut q, mut t) = hessenberg(a);
    let eps = f64::EPSILON;
    let norm = t.frobenius_norm();
    let small = f64::MIN_POSITIVE * (n as f64) / eps;
    let cap = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    while hi > 0 {
        // locate the active window [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let mut scale = t[(lo, lo)].norm() + t[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if sub <= eps * scale || sub <= small {
                t[(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        total += 1;
        iter_since_deflation += 1;
        if total > cap {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mu = if iter_since_deflation % 10 == 0 {
            // exceptional shift breaks cycling
            let s = t[(hi, hi - 1)].norm()
                + if hi >= 2 {
                    t[(hi - 1, hi - 2)].norm()
                } else {
                    0.0
                };
            t[(hi, hi)] + c64::new(0.75 * s, 0.35 * s)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };
        // implicit single-shift QR sweep over the window
        let mut x = t[(lo, lo)] - mu;
        let mut y = t[(lo + 1, lo)];
        for k in lo..hi {
            let (g, _) = givens(x, y);
            let col_start = if k > lo { k - 1 } else { k };
            g.rotate_rows(&mut t, k, col_start..n);
            let row_end = (k + 3).min(hi + 1);
            g.rotate_cols(&mut t, k, 0..row_end);
            g.rotate_cols(&mut q, k, 0..n);
            if k > lo {
                t[(k + 1, k - 1)] = zero();
            }
            if k + 1 < hi {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = zero();
        }
    }
    Ok(Schur { q, t })
}

/// Reorders the Schur form so the eigenvalues flagged in `select` come first,
/// preserving relative order within each class. Returns the count selected.
pub fn reorder_schur(s: &mut Schur, select: &[bool]) -> usize {
    let n = s.t.rows();
    assert_eq!(select.len(), n);
    let mut sel = select.to_vec();
    let mut placed = 0;
    for i in 0..n {
        if sel[i] {
            let mut j = i;
            while j > placed {
                swap_adjacent(s, j - 1);
                sel.swap(j - 1, j);
                j -= 1;
            }
            placed += 1;
        }
    }
    placed
}

/// Swaps diagonal entries `k` and `k + 1` of the Schur form in place.
fn swap_adjacent(s: &mut Schur, k: usize) {
    let n = s.t.rows();
    let a = s.t[(k, k)];
    let b = s.t[(k + 1, k + 1)];
    let t12 = s.t[(k, k + 1)];
    let (g, _) = givens(t12, b - a);
    g.rotate_rows(&mut s.t, k, k..n);
    g.rotate_cols(&mut s.t, k, 0..k + 2);
    g.rotate_cols(&mut s.q, k, 0..n);
    s.t[(k + 1, k)] = zero();
    s.t[(k, k)] = b;
    s.t[(k + 1, k + 1)] = a;
}

/// Solves `T11 Y - Y T22 = C` for upper-triangular `T11`, `T22` with
/// disjoint spectra.
pub fn solve_sylvester_triangular(
    t11: &ComplexMatrix,
    t22: &ComplexMatrix,
    c: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let p = t11.rows();
    let q = t22.rows();
    if c.rows() != p || c.cols() != q {
        return Err(Error::Dimension("Sylvester right-hand side shape".into()));
    }
    let scale = t11.max_abs().max(t22.max_abs()).max(f64::MIN_POSITIVE);
    let mut y = ComplexMatrix::zeros(p, q);
    for j in 0..q {
        let mut rhs: Vec<c64> = (0..p).map(|i| c[(i, j)]).collect();
        for l in 0..j {
            let coef = t22[(l, j)];
            if coef != zero() {
                for i in 0..p {
                    rhs[i] += y[(i, l)] * coef;
                }
            }
        }
        let shift = t22[(j, j)];
        for i in (0..p).rev() {
            let mut s = rhs[i];
            for l in i + 1..p {
                s -= t11[(i, l)] * y[(l, j)];
            }
            let d = t11[(i, i)] - shift;
            if d.norm() <= 1e-14 * scale {
                return Err(Error::ClusterSplit(format!("{:.6}", shift)));
            }
            y[(i, j)] = s / d;
        }
    }
    Ok(y)
}
