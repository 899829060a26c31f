//! Test matrices with closed-form reference data.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::trial_rng;
use crate::linalg::{c64, ComplexMatrix};

/// How "uniformly distributed" diagonal entries are placed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Spacing {
    /// Midpoints `a + (b - a)(j + 1/2)/m`.
    Equispaced,
    /// Independent uniform draws from a seeded generator.
    Random(u64),
}

/// Known facts about a gallery matrix that the generic machinery can check.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Reference {
    /// Field of values is the closed disk `(center, radius)`.
    pub fov_disk: Option<(c64, f64)>,
    /// Leading 2x2 Jordan block `[[1, α], [0, 1]]`; its ε-pseudospectrum is
    /// the disk about 1 of radius `√(αε + ε²)`.
    pub jordan_alpha: Option<f64>,
    /// Ipsen's exact residuals apply with this `δ` and `r_0 = e_n`.
    pub ipsen_delta: Option<f64>,
    /// Real interval containing the spectrum.
    pub spectrum_interval: Option<(f64, f64)>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    #[serde(skip)]
    pub matrix: ComplexMatrix,
    pub params: BTreeMap<String, f64>,
    pub reference: Reference,
}

fn entry(
    name: &str,
    matrix: ComplexMatrix,
    params: &[(&str, f64)],
    reference: Reference,
) -> GalleryEntry {
    GalleryEntry {
        name: name.to_string(),
        matrix,
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        reference,
    }
}

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// `m` values spread over `[a, b]`.
pub fn uniform_values(a: f64, b: f64, m: usize, spacing: Spacing) -> Vec<f64> {
    match spacing {
        Spacing::Equispaced => (0..m)
            .map(|j| a + (b - a) * (j as f64 + 0.5) / m as f64)
            .collect(),
        Spacing::Random(seed) => {
            let mut rng = trial_rng(seed, 0);
            (0..m).map(|_| a + (b - a) * rng.random::<f64>()).collect()
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.to_string()))
    }
}

/// `αI`.
pub fn scalar(alpha: f64, n: usize) -> Result<GalleryEntry> {
    require(n >= 1, "n must be at least 1")?;
    Ok(entry(
        "scalar",
        ComplexMatrix::identity(n).scale(re(alpha)),
        &[("alpha", alpha), ("n", n as f64)],
        Reference {
            fov_disk: Some((re(alpha), 0.0)),
            ..Default::default()
        },
    ))
}

/// Finite section of the tridiagonal Toeplitz operator with spectrum `[a, b]`:
/// diagonal `(a + b)/2`, off-diagonals `(b - a)/4`.
pub fn toeplitz_interval(a: f64, b: f64, n: usize) -> Result<GalleryEntry> {
    require(0.0 < a && a < b, "need 0 < a < b")?;
    require(n >= 1, "n must be at least 1")?;
    let alpha = 0.5 * (a + b);
    let beta = 0.25 * (b - a);
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            re(alpha)
        } else if i.abs_diff(j) == 1 {
            re(beta)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(entry(
        "toeplitz",
        m,
        &[("a", a), ("b", b), ("n", n as f64)],
        Reference {
            spectrum_interval: Some((a, b)),
            notes: vec!["eigenvalues alpha + 2 beta cos(j pi/(n+1))".into()],
            ..Default::default()
        },
    ))
}

/// 2x2 Jordan block `[[1, α], [0, 1]]`.
pub fn jordan2(alpha: f64) -> Result<GalleryEntry> {
    let m = ComplexMatrix::from_real_rows(&[&[1.0, alpha], &[0.0, 1.0]]);
    Ok(entry(
        "jordan2",
        m,
        &[("alpha", alpha)],
        Reference {
            fov_disk: Some((re(1.0), 0.5 * alpha.abs())),
            jordan_alpha: Some(alpha),
            ..Default::default()
        },
    ))
}

/// `[[1, α], [0, 1]] ⊕ diag(values in [1, b])` of total dimension `n`.
pub fn example_b(alpha: f64, b: f64, n: usize, spacing: Spacing) -> Result<GalleryEntry> {
    require(b > 1.0, "need b > 1")?;
    require(n >= 3, "n must be at least 3")?;
    let diag = uniform_values(1.0, b, n - 2, spacing);
    let jordan = ComplexMatrix::from_real_rows(&[&[1.0, alpha], &[0.0, 1.0]]);
    let m = jordan.direct_sum(&ComplexMatrix::from_diag(
        &diag.iter().map(|x| re(*x)).collect::<Vec<_>>(),
    ));
    let fov_disk = (b <= 0.5 * alpha).then_some((re(1.0), 0.5 * alpha));
    Ok(entry(
        "example-b",
        m,
        &[("alpha", alpha), ("b", b), ("n", n as f64)],
        Reference {
            fov_disk,
            jordan_alpha: Some(alpha),
            notes: vec![
                "min ||p(A)|| <= 2|1-b|^2 ((sqrt(b)-1)/(sqrt(b)+1))^(k-2) for k >= 2".into(),
            ],
            ..Default::default()
        },
    ))
}

/// Ideal GMRES cap for `example_b`, valid for `k >= 2`.
pub fn example_b_cap(b: f64, k: usize) -> f64 {
    let rho = (b.sqrt() - 1.0) / (b.sqrt() + 1.0);
    2.0 * (1.0 - b).powi(2) * rho.powi(k as i32 - 2)
}

/// `δ ⊕ diag(values in [a, b])` of total dimension `n`.
pub fn example_c(delta: f64, a: f64, b: f64, n: usize, spacing: Spacing) -> Result<GalleryEntry> {
    require(0.0 < a && a < b, "need 0 < a < b")?;
    require(n >= 2, "n must be at least 2")?;
    let mut d = vec![re(delta)];
    d.extend(uniform_values(a, b, n - 1, spacing).into_iter().map(re));
    Ok(entry(
        "example-c",
        ComplexMatrix::from_diag(&d),
        &[("delta", delta), ("a", a), ("b", b), ("n", n as f64)],
        Reference::default(),
    ))
}

/// Predicted stagnation length for `example_c`.
pub fn example_c_stagnation(delta: f64, a: f64, b: f64) -> usize {
    let rho = crate::minimax::interval_rate(a, b);
    (1.0 + (delta.abs().ln() - (2.0 * (b - delta)).ln()) / rho.ln()).ceil() as usize
}

/// Upper bidiagonal `I + δN` of dimension `n`.
pub fn example_d(delta: f64, n: usize) -> Result<GalleryEntry> {
    require(n >= 1, "n must be at least 1")?;
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            re(1.0)
        } else if j == i + 1 {
            re(delta)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let r = delta.abs() * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
    Ok(entry(
        "example-d",
        m,
        &[("delta", delta), ("n", n as f64)],
        Reference {
            fov_disk: Some((re(1.0), if n > 1 { r } else { 0.0 })),
            ipsen_delta: Some(delta),
            ..Default::default()
        },
    ))
}

/// `||r_k||/||r_0||` for `example_d` with `r_0 = e_n` (Ipsen).
pub fn ipsen_residual(delta: f64, k: usize) -> f64 {
    let d2 = delta * delta;
    delta.abs().powi(k as i32) * ((1.0 - d2) / (1.0 - d2.powi(k as i32 + 1))).sqrt()
}

/// `diag(1, -1)`.
pub fn example_e_diag() -> GalleryEntry {
    entry(
        "example-e-diag",
        ComplexMatrix::from_diag(&[re(1.0), re(-1.0)]),
        &[],
        Reference {
            spectrum_interval: Some((-1.0, 1.0)),
            ..Default::default()
        },
    )
}

/// `V Λ V^{-1}` with `Λ` spread over `[1, 2]` and `V` upper triangular with
/// first row `[1, √(1-δ), ...]` and diagonal `√δ` below the first entry.
pub fn example_e_fold(delta: f64, n: usize, spacing: Spacing) -> Result<GalleryEntry> {
    require(0.0 < delta && delta <= 1.0, "need 0 < delta <= 1")?;
    require(n >= 2, "n must be at least 2")?;
    let lam = uniform_values(1.0, 2.0, n, spacing);
    let s = (1.0 - delta).sqrt();
    let sd = delta.sqrt();
    // V^{-1} = [[1, -s/√δ 1^T], [0, I/√δ]]
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            re(lam[i])
        } else if i == 0 {
            re(s * (lam[j] - lam[0]) / sd)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(entry(
        "example-e-fold",
        m,
        &[("delta", delta), ("n", n as f64)],
        Reference {
            spectrum_interval: Some((1.0, 2.0)),
            notes: vec![format!("kappa(V) >= {:.6e}", (1.0 + sd) / sd)],
            ..Default::default()
        },
    ))
}

/// Lower bound on `κ(V)` for `example_e_fold`.
pub fn example_e_kappa_lower(delta: f64) -> f64 {
    (1.0 + delta.sqrt()) / delta.sqrt()
}

/// Unit upper bidiagonal with superdiagonal `β/i`, `i = 1..n-1`.
pub fn integration_matrix(beta: f64, n: usize) -> Result<GalleryEntry> {
    require(n >= 1, "n must be at least 1")?;
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            re(1.0)
        } else if j == i + 1 {
            re(beta / (i + 1) as f64)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    Ok(entry(
        "integration",
        m,
        &[("beta", beta), ("n", n as f64)],
        Reference {
            jordan_alpha: (n == 2).then_some(beta),
            notes: vec!["field of values and pseudospectra are disks about 1".into()],
            ..Default::default()
        },
    ))
}

/// Jordan factors `A = X J X^{-1}` of the integration matrix: the diagonal of
/// `X`, `(i-1)!/β^{i-1}`, and `J = I + N`.
pub fn jordan_factors(beta: f64, n: usize) -> (Vec<f64>, ComplexMatrix) {
    let mut x = Vec::with_capacity(n);
    let mut v = 1.0;
    for i in 0..n {
        if i > 0 {
            v *= i as f64 / beta;
        }
        x.push(v);
    }
    let j = example_d(1.0, n)
        .map(|e| e.matrix)
        .unwrap_or_else(|_| ComplexMatrix::zeros(0, 0));
    (x, j)
}

/// `A_{-1} ⊕ A_{+1}`: bidiagonal blocks of dimension `n/2` with diagonals
/// `∓1` and superdiagonals `1/4` and `1/2`.
pub fn cg_pair_matrix(n: usize) -> Result<GalleryEntry> {
    cg_pair_with(n, 0.25, 0.5)
}

/// `cg_pair_matrix` with custom superdiagonals.
pub fn cg_pair_with(n: usize, s_minus: f64, s_plus: f64) -> Result<GalleryEntry> {
    require(n >= 2 && n % 2 == 0, "n must be even and at least 2")?;
    let h = n / 2;
    let block = |d: f64, s: f64| {
        ComplexMatrix::from_fn(h, h, |i, j| {
            if i == j {
                re(d)
            } else if j == i + 1 {
                re(s)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    };
    let m = block(-1.0, s_minus).direct_sum(&block(1.0, s_plus));
    Ok(entry(
        "cg-pair",
        m,
        &[("n", n as f64), ("s_minus", s_minus), ("s_plus", s_plus)],
        Reference {
            notes: vec!["spectrum {-1, +1}; spectral projectors are orthogonal".into()],
            ..Default::default()
        },
    ))
}

/// Streamline diffusion parameter.
#[derive(Debug, Clone, Copy)]
pub enum Upwind {
    /// `δ = (h/2)(1 - 1/Pe_h)` when the mesh Péclet number `Pe_h = h/(2ν)`
    /// exceeds 1, else 0.
    Auto,
    Value(f64),
}

/// The standard mesh-dependent streamline diffusion parameter for unit wind.
pub fn supg_auto_delta(n: usize, nu: f64) -> f64 {
    let h = 1.0 / (n as f64 + 1.0);
    let pe = h / (2.0 * nu);
    if pe > 1.0 {
        0.5 * h * (1.0 - 1.0 / pe)
    } else {
        0.0
    }
}

/// Bilinear finite elements with streamline diffusion for `-νΔu + u_y` on the
/// unit square, `N x N` interior nodes, homogeneous Dirichlet boundary.
pub fn supg_matrix(n: usize, nu: f64, upwind: Upwind) -> Result<GalleryEntry> {
    require(n >= 3, "N must be at least 3")?;
    require(nu > 0.0, "nu must be positive")?;
    let h = 1.0 / (n as f64 + 1.0);
    let delta = match upwind {
        Upwind::Auto => supg_auto_delta(n, nu),
        Upwind::Value(d) => d,
    };
    // 1D stencils at offsets -1, 0, +1
    let mass = [h / 6.0, 4.0 * h / 6.0, h / 6.0];
    let stiff = [-1.0 / h, 2.0 / h, -1.0 / h];
    let conv = [-0.5, 0.0, 0.5];
    let dim = n * n;
    let idx = |ix: usize, iy: usize| iy * n + ix;
    let mut a = ComplexMatrix::zeros(dim, dim);
    for iy in 0..n {
        for ix in 0..n {
            for dy in 0..3usize {
                for dx in 0..3usize {
                    let (jx, jy) = (ix as isize + dx as isize - 1, iy as isize + dy as isize - 1);
                    if jx < 0 || jy < 0 || jx >= n as isize || jy >= n as isize {
                        continue;
                    }
                    let v = nu * (stiff[dx] * mass[dy] + mass[dx] * stiff[dy])
                        + mass[dx] * conv[dy]
                        + delta * mass[dx] * stiff[dy];
                    a[(idx(ix, iy), idx(jx as usize, jy as usize))] += re(v);
                }
            }
        }
    }
    Ok(entry(
        "supg",
        a,
        &[("N", n as f64), ("nu", nu), ("delta", delta)],
        Reference {
            notes: vec![
                "coercive: field of values in the open right half-plane".into(),
                format!("eigenvalues on {n} vertical lines"),
            ],
            ..Default::default()
        },
    ))
}

/// Catalog names accepted by `build`.
pub const NAMES: &[(&str, &str)] = &[
    ("scalar", "alpha*I (alpha=2, n=8)"),
    (
        "toeplitz",
        "tridiagonal Toeplitz section with spectrum in [a,b] (a=1, b=2, n=16)",
    ),
    ("jordan2", "2x2 Jordan block [[1,alpha],[0,1]] (alpha=10)"),
    (
        "example-b",
        "Jordan block plus diagonal on [1,b] (alpha=10, b=1.5, n=102)",
    ),
    (
        "example-c",
        "outlier delta plus diagonal on [a,b] (delta=0.01, a=1, b=2, n=32)",
    ),
    ("example-d", "I + delta*N (delta=0.5, n=32)"),
    ("example-e-diag", "diag(1,-1)"),
    (
        "example-e-fold",
        "V Lambda V^-1 with ill-conditioned V (delta=1e-8, n=64)",
    ),
    ("integration", "integration matrix (beta=2.5, n=64)"),
    ("cg-pair", "direct sum of bidiagonals at -1 and +1 (n=64)"),
    ("supg", "SUPG convection-diffusion (N=13, nu=0.01)"),
];

/// Builds a catalog entry, overriding defaults from `params`.
pub fn build(name: &str, params: &BTreeMap<String, f64>) -> Result<GalleryEntry> {
    let known: &[&str] = match name {
        "scalar" => &["alpha", "n"],
        "toeplitz" => &["a", "b", "n"],
        "jordan2" => &["alpha"],
        "example-b" => &["alpha", "b", "n", "seed"],
        "example-c" => &["delta", "a", "b", "n", "seed"],
        "example-d" => &["delta", "n"],
        "example-e-diag" => &[],
        "example-e-fold" => &["delta", "n", "seed"],
        "integration" => &["beta", "n"],
        "cg-pair" => &["n", "s_minus", "s_plus"],
        "supg" => &["N", "nu", "delta"],
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    if let Some(bad) = params.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "unknown parameter `{bad}` for `{name}`"
        )));
    }
    let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
    let count = |k: &str, d: usize| -> Result<usize> {
        let v = get(k, d as f64);
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "`{k}` must be a nonnegative integer"
            )));
        }
        Ok(v as usize)
    };
    let spacing = match params.get("seed") {
        Some(s) => Spacing::Random(*s as u64),
        None => Spacing::Equispaced,
    };
    match name {
        "scalar" => scalar(get("alpha", 2.0), count("n", 8)?),
        "toeplitz" => toeplitz_interval(get("a", 1.0), get("b", 2.0), count("n", 16)?),
        "jordan2" => jordan2(get("alpha", 10.0)),
        "example-b" => example_b(get("alpha", 10.0), get("b", 1.5), count("n", 102)?, spacing),
        "example-c" => example_c(
            get("delta", 0.01),
            get("a", 1.0),
            get("b", 2.0),
            count("n", 32)?,
            spacing,
        ),
        "example-d" => example_d(get("delta", 0.5), count("n", 32)?),
        "example-e-diag" => Ok(example_e_diag()),
        "example-e-fold" => example_e_fold(get("delta", 1e-8), count("n", 64)?, spacing),
        "integration" => integration_matrix(get("beta", 2.5), count("n", 64)?),
        "cg-pair" => cg_pair_with(count("n", 64)?, get("s_minus", 0.25), get("s_plus", 0.5)),
        "supg" => {
            let upwind = params
                .get("delta")
                .map_or(Upwind::Auto, |d| Upwind::Value(*d));
            supg_matrix(count("N", 13)?, get("nu", 0.01), upwind)
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ipsen_first_step() {
        assert!((ipsen_residual(0.5, 1) - 0.2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ipsen_residual(0.0, 1), 0.0);
    }

    #[test]
    fn equal_params_are_bit_identical() {
        let a = example_b(10.0, 1.5, 20, Spacing::Random(3)).unwrap();
        let b = example_b(10.0, 1.5, 20, Spacing::Random(3)).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn integration_reduces_to_jordan_for_n2() {
        let a = integration_matrix(2.5, 2).unwrap().matrix;
        assert_eq!(a, jordan2(2.5).unwrap().matrix);
    }

    #[test]
    fn unknown_entry_rejected() {
        assert!(matches!(
            build("nope", &BTreeMap::new()),
            Err(Error::UnknownEntry(_))
        ));
        let mut p = BTreeMap::new();
        p.insert("zeta".to_string(), 1.0);
        assert!(matches!(
            build("scalar", &p),
            Err(Error::InvalidArgument(_))
        ));
    }
}
