//! Field of values, ε-pseudospectra on grids, level-set contours and the
//! Crouzeix-Greenbaum region.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    convex_hull, polyline_length, sample_closed, signed_distance_convex, winding_number,
};
use crate::linalg::{c64, hermitian_eigen, inverse, rect_shifted_smin, ComplexMatrix, ShiftedSmin};

/// Default number of rotation angles for `fov_boundary`.
pub const FOV_ANGLES: usize = 256;
/// Default grid resolution per axis.
pub const GRID_SIZE: usize = 200;
/// Default grid resolution per axis for `cg_region`.
pub const CG_GRID_SIZE: usize = 400;

/// Boundary of `W(A)` from `m` support directions.
#[derive(Debug, Clone, Serialize)]
pub struct FovBoundary {
    /// Counter-clockwise convex hull of the boundary points `u*Au`.
    /// Contained in `W(A)`.
    pub vertices: Vec<c64>,
    /// Counter-clockwise polygon cut out by the support lines. Contains `W(A)`.
    pub outer: Vec<c64>,
    /// `μ(A)`, refined between sampled angles.
    pub numerical_radius: f64,
    /// `λ_min((A + A*)/2)`.
    pub min_real_part: f64,
    pub angles: Vec<f64>,
    /// `max_{z ∈ W(A)} Re(e^{iθ} z)` per angle.
    pub support: Vec<f64>,
}

impl FovBoundary {
    /// Arclength-uniform samples of the outer polygon, so that maxima over
    /// the samples bound maxima over `W(A)` up to sampling.
    pub fn boundary_samples(&self, count: usize) -> Vec<c64> {
        sample_closed(&self.outer, count)
    }

    pub fn contains(&self, z: c64, slack: f64) -> bool {
        signed_distance_convex(&self.outer, z) <= slack
    }
}

fn hermitian_part(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    a.scale(c64::from_polar(1.0, theta))
}

/// `(λ_max(H(θ)), u*Au)` with `H(θ) = (e^{iθ}A + e^{-iθ}A*)/2`.
fn support(a: &ComplexMatrix, theta: f64) -> (f64, c64, f64) {
    let (vals, vecs) = hermitian_eigen(&hermitian_part(a, theta));
    let n = vals.len();
    let u = vecs.column(n - 1);
    let au = a.mul_vec(&u);
    let z: c64 = u.iter().zip(&au).map(|(x, y)| x.conj() * y).sum();
    (vals[n - 1], z, vals[0])
}

/// Rotation method: extreme eigenpairs of `H(θ_i)` for `θ_i = 2πi/m`.
pub fn fov_boundary(a: &ComplexMatrix, m: usize) -> Result<FovBoundary> {
    let n = a.require_square()?;
    if m < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 angles, got {m}"
        )));
    }
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let angles: Vec<f64> = (0..m)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / m as f64)
        .collect();
    let samples: Vec<(f64, c64, f64)> = angles.par_iter().map(|&t| support(a, t)).collect();
    let support_vals: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let points: Vec<c64> = samples.iter().map(|s| s.1).collect();
    let min_real_part = samples[0].2;
    let vertices = convex_hull(&points);

    // support line i: x cos θ_i - y sin θ_i = s_i
    let mut corners = Vec::with_capacity(m);
    for i in 0..m {
        let j = (i + 1) % m;
        let (c1, s1) = (angles[i].cos(), -angles[i].sin());
        let (c2, s2) = (angles[j].cos(), -angles[j].sin());
        let det = c1 * s2 - s1 * c2;
        let x = (support_vals[i] * s2 - s1 * support_vals[j]) / det;
        let y = (c1 * support_vals[j] - support_vals[i] * c2) / det;
        corners.push(c64::new(x, y));
    }
    let outer = convex_hull(&corners);

    let best = (0..m)
        .max_by(|&i, &j| support_vals[i].total_cmp(&support_vals[j]))
        .unwrap_or(0);
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let numerical_radius = golden_max(
        |t| support(a, t).0,
        angles[best] - step,
        angles[best] + step,
        60,
    )
    .max(support_vals[best]);
    Ok(FovBoundary {
        vertices,
        outer,
        numerical_radius,
        min_real_part,
        angles,
        support: support_vals,
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = f1.max(f2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        best = best.max(f1).max(f2);
        if hi - lo < 1e-15 {
            break;
        }
    }
    best
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl GridBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate box [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// Bounding box of `points` padded by `pad` on every side.
    pub fn around(points: &[c64], pad: f64) -> Result<Self> {
        let fold = |f: fn(&c64) -> f64, init: f64, op: fn(f64, f64) -> f64| {
            points.iter().map(f).fold(init, op)
        };
        let re_min = fold(|z| z.re, f64::INFINITY, f64::min);
        let re_max = fold(|z| z.re, f64::NEG_INFINITY, f64::max);
        let im_min = fold(|z| z.im, f64::INFINITY, f64::min);
        let im_max = fold(|z| z.im, f64::NEG_INFINITY, f64::max);
        Self::new(re_min - pad, re_max + pad, im_min - pad, im_max + pad)
    }

    /// Eigenvalue bounding box padded by `1.5 max(spread, 0.1 ||A||, ε_max)`,
    /// where `spread` is the larger side of the eigenvalue box.
    pub fn auto(eigenvalues: &[c64], norm_a: f64, eps_max: f64) -> Result<Self> {
        let re = eigenvalues.iter().map(|z| z.re);
        let im = eigenvalues.iter().map(|z| z.im);
        let w = re.clone().fold(f64::NEG_INFINITY, f64::max) - re.fold(f64::INFINITY, f64::min);
        let h = im.clone().fold(f64::NEG_INFINITY, f64::max) - im.fold(f64::INFINITY, f64::min);
        let pad = 1.5 * w.max(h).max(0.1 * norm_a).max(eps_max).max(1e-12);
        Self::around(eigenvalues, pad)
    }

    /// `auto`, grown by 1.5x until `s_min(zI - A) > ε_max` at 64 samples per
    /// side, and never past the Bendixson rectangle padded by `1.05 ε_max`,
    /// which contains every `σ_ε` with `ε ≤ ε_max`.
    pub fn covering(
        a: &ComplexMatrix,
        eigenvalues: &[c64],
        norm_a: f64,
        eps_max: f64,
    ) -> Result<Self> {
        let (re_w, _) = hermitian_eigen(a);
        let (im_w, _) = hermitian_eigen(&a.scale(c64::new(0.0, -1.0)));
        let pad = 1.05 * eps_max + 1e-12 * norm_a.max(1.0);
        let cap = Self::new(
            re_w[0] - pad,
            re_w[re_w.len() - 1] + pad,
            im_w[0] - pad,
            im_w[im_w.len() - 1] + pad,
        )?;
        let smin = ShiftedSmin::new(a)?;
        let mut b = Self::auto(eigenvalues, norm_a, eps_max)?;
        loop {
            let clear = (0..64).into_par_iter().all(|j| {
                let t = (j as f64 + 0.5) / 64.0;
                let x = b.re_min + t * (b.re_max - b.re_min);
                let y = b.im_min + t * (b.im_max - b.im_min);
                [
                    c64::new(x, b.im_min),
                    c64::new(x, b.im_max),
                    c64::new(b.re_min, y),
                    c64::new(b.re_max, y),
                ]
                .iter()
                .all(|&z| smin.eval(z) > eps_max)
            });
            let inside_cap = b.re_min <= cap.re_min
                && b.re_max >= cap.re_max
                && b.im_min <= cap.im_min
                && b.im_max >= cap.im_max;
            if clear || inside_cap {
                return Ok(b);
            }
            let (cx, cy) = (0.5 * (b.re_min + b.re_max), 0.5 * (b.im_min + b.im_max));
            let (hx, hy) = (0.75 * (b.re_max - b.re_min), 0.75 * (b.im_max - b.im_min));
            b = Self::new(
                (cx - hx).max(cap.re_min),
                (cx + hx).min(cap.re_max),
                (cy - hy).max(cap.im_min),
                (cy + hy).min(cap.im_max),
            )?;
        }
    }
}

/// Samples of `s_min(zI - A)` on a uniform grid. `values` is row-major with
/// the imaginary axis outer: `values[iy * nx + ix]`.
#[derive(Debug, Clone, Serialize)]
pub struct RegionGrid {
    pub bbox: GridBox,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl RegionGrid {
    pub fn node(&self, ix: usize, iy: usize) -> c64 {
        grid_node(&self.bbox, self.nx, self.ny, ix, iy)
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.bbox.re_max - self.bbox.re_min) / (self.nx - 1) as f64,
            (self.bbox.im_max - self.bbox.im_min) / (self.ny - 1) as f64,
        )
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation; `None` outside the box.
    pub fn interpolate(&self, z: c64) -> Option<f64> {
        let (hx, hy) = self.spacing();
        let fx = (z.re - self.bbox.re_min) / hx;
        let fy = (z.im - self.bbox.im_min) / hy;
        if !(fx >= 0.0 && fy >= 0.0 && fx <= (self.nx - 1) as f64 && fy <= (self.ny - 1) as f64) {
            return None;
        }
        let ix = (fx.floor() as usize).min(self.nx - 2);
        let iy = (fy.floor() as usize).min(self.ny - 2);
        let (tx, ty) = (fx - ix as f64, fy - iy as f64);
        let v = |i, j| self.value(i, j);
        Some(
            (1.0 - ty) * ((1.0 - tx) * v(ix, iy) + tx * v(ix + 1, iy))
                + ty * ((1.0 - tx) * v(ix, iy + 1) + tx * v(ix + 1, iy + 1)),
        )
    }

    /// CSV with header `re,im,smin`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,smin\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let z = self.node(ix, iy);
                s.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e}\n",
                    z.re,
                    z.im,
                    self.value(ix, iy)
                ));
            }
        }
        s
    }
}

fn grid_node(b: &GridBox, nx: usize, ny: usize, ix: usize, iy: usize) -> c64 {
    c64::new(
        b.re_min + (b.re_max - b.re_min) * ix as f64 / (nx - 1) as f64,
        b.im_min + (b.im_max - b.im_min) * iy as f64 / (ny - 1) as f64,
    )
}

fn check_grid(nx: usize, ny: usize) -> Result<()> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2x2 nodes, got {nx}x{ny}"
        )));
    }
    Ok(())
}

fn fill_grid(bbox: GridBox, nx: usize, ny: usize, f: impl Fn(c64) -> f64 + Sync) -> RegionGrid {
    let values: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| f(grid_node(&bbox, nx, ny, idx % nx, idx / nx)))
        .collect();
    RegionGrid {
        bbox,
        nx,
        ny,
        values,
    }
}

/// `s_min(zI - A)` at every node.
pub fn pseudospectrum_grid(
    a: &ComplexMatrix,
    bbox: GridBox,
    nx: usize,
    ny: usize,
) -> Result<RegionGrid> {
    a.require_square()?;
    check_grid(nx, ny)?;
    let smin = ShiftedSmin::new(a)?;
    Ok(fill_grid(bbox, nx, ny, |z| smin.eval(z)))
}

/// `s_min(zĨ - H̃)` at every node for a `(k+1) x k` Hessenberg `H̃`.
pub fn pseudospectrum_grid_rect(
    h_tilde: &ComplexMatrix,
    bbox: GridBox,
    nx: usize,
    ny: usize,
) -> Result<RegionGrid> {
    check_grid(nx, ny)?;
    if h_tilde.rows() != h_tilde.cols() + 1 {
        return Err(Error::Dimension(format!(
            "expected a (k+1) x k matrix, got {}x{}",
            h_tilde.rows(),
            h_tilde.cols()
        )));
    }
    Ok(fill_grid(bbox, nx, ny, |z| rect_shifted_smin(h_tilde, z)))
}

/// Closed level-set loops.
#[derive(Debug, Clone, Serialize)]
pub struct Contour {
    pub epsilon: f64,
    /// Each loop repeats its first vertex at the end. Outer boundaries run
    /// counter-clockwise, holes clockwise.
    pub loops: Vec<Vec<c64>>,
    pub length: f64,
    /// Some loop winds around the origin.
    pub encloses_origin: bool,
    /// Some loop runs along the grid boundary; `length` then underestimates.
    pub touches_boundary: bool,
    /// Smallest `s_min(zI - A)` over the vertices and edge midpoints; set by
    /// `certify`.
    pub certified_level: Option<f64>,
    /// Every eigenvalue has nonzero total winding; set by `certify`.
    pub encloses_spectrum: Option<bool>,
}

impl Contour {
    pub fn from_loops(epsilon: f64, loops: Vec<Vec<c64>>, touches_boundary: bool) -> Self {
        let length = loops.iter().map(|l| polyline_length(l, false)).sum();
        let origin = c64::new(0.0, 0.0);
        let encloses_origin = loops
            .iter()
            .any(|l| winding_number(&l[..l.len() - 1], origin) != 0);
        Self {
            epsilon,
            loops,
            length,
            encloses_origin,
            touches_boundary,
            certified_level: None,
            encloses_spectrum: None,
        }
    }

    /// Measures `s_min(zI - A)` on the polygon itself and checks that it
    /// surrounds every eigenvalue.
    pub fn certify(mut self, a: &ComplexMatrix, eigenvalues: &[c64]) -> Result<Self> {
        let smin = ShiftedSmin::new(a)?;
        let points: Vec<c64> = self
            .loops
            .iter()
            .flat_map(|l| l.windows(2).flat_map(|w| [w[0], 0.5 * (w[0] + w[1])]))
            .collect();
        let level = points
            .par_iter()
            .map(|&z| smin.eval(z))
            .reduce(|| f64::INFINITY, f64::min);
        self.certified_level = Some(level);
        self.encloses_spectrum = Some(eigenvalues.iter().all(|&z| self.winding(z) != 0));
        Ok(self)
    }

    /// `min(ε, certified_level)`.
    pub fn effective_level(&self) -> f64 {
        self.certified_level
            .map_or(self.epsilon, |l| l.min(self.epsilon))
    }

    /// Total winding number of all loops about `z`: 1 inside the region, 0 outside.
    pub fn winding(&self, z: c64) -> i32 {
        self.loops
            .iter()
            .map(|l| winding_number(&l[..l.len() - 1], z))
            .sum()
    }

    /// Arclength-uniform samples over all loops.
    pub fn samples(&self, count: usize) -> Vec<c64> {
        let open: Vec<Vec<c64>> = self
            .loops
            .iter()
            .map(|l| l[..l.len() - 1].to_vec())
            .collect();
        crate::geometry::sample_loops(&open, count)
    }
}

/// Level-`eps` contour assembled from separate grids of half-width `half`
/// about each centre; resolves components far smaller than their spacing.
/// The boxes must be disjoint.
pub fn zoomed_contour(
    a: &ComplexMatrix,
    centres: &[c64],
    eps: f64,
    half: f64,
    resolution: usize,
) -> Result<Contour> {
    for (i, p) in centres.iter().enumerate() {
        if centres[..i]
            .iter()
            .any(|q| (p.re - q.re).abs() < 2.0 * half && (p.im - q.im).abs() < 2.0 * half)
        {
            return Err(Error::InvalidArgument("zoom boxes overlap".into()));
        }
    }
    let parts: Vec<Contour> = centres
        .par_iter()
        .map(|&c| {
            let bbox = GridBox::new(c.re - half, c.re + half, c.im - half, c.im + half)?;
            extract_contour(&pseudospectrum_grid(a, bbox, resolution, resolution)?, eps)
        })
        .collect::<Result<_>>()?;
    let touches = parts.iter().any(|c| c.touches_boundary);
    Contour::from_loops(
        eps,
        parts.into_iter().flat_map(|c| c.loops).collect(),
        touches,
    )
    .certify(a, centres)
}

/// Level-`eps` isolines of the grid, enclosing the region `value < eps`.
pub fn extract_contour(grid: &RegionGrid, eps: f64) -> Result<Contour> {
    let (min, max) = (grid.min_value(), grid.max_value());
    if !(eps > min && eps < max) {
        return Err(Error::LevelOutOfRange {
            level: eps,
            min,
            max,
        });
    }
    let (loops, touches) = isolines(&grid.values, grid.nx, grid.ny, eps, |ix, iy| {
        grid.node(ix, iy)
    });
    Ok(Contour::from_loops(eps, loops, touches))
}

/// Edge key: (vertical?, padded x, padded y) of the edge's lower/left node.
type EdgeKey = (bool, usize, usize);

/// Marching squares on `field` (row-major, `nx` fastest) padded by a ring of
/// outside nodes. Returns closed loops with the region `field < level` on the
/// left, and whether any loop used the padding.
pub fn isolines(
    field: &[f64],
    nx: usize,
    ny: usize,
    level: f64,
    node: impl Fn(usize, usize) -> c64,
) -> (Vec<Vec<c64>>, bool) {
    let (px, py) = (nx + 2, ny + 2);
    let value = |i: usize, j: usize| -> Option<f64> {
        (i >= 1 && j >= 1 && i <= nx && j <= ny).then(|| field[(j - 1) * nx + (i - 1)])
    };
    let inside = |i: usize, j: usize| value(i, j).is_some_and(|v| v < level);
    let mut touches = false;
    // crossing point on the edge between padded nodes a and b
    let mut crossing = |a: (usize, usize), b: (usize, usize)| -> c64 {
        match (value(a.0, a.1), value(b.0, b.1)) {
            (Some(va), Some(vb)) => {
                let (za, zb) = (node(a.0 - 1, a.1 - 1), node(b.0 - 1, b.1 - 1));
                let t = if vb != va {
                    ((level - va) / (vb - va)).clamp(0.0, 1.0)
                } else {
                    0.5
                };
                za + (zb - za) * t
            }
            (Some(_), None) => {
                touches = true;
                node(a.0 - 1, a.1 - 1)
            }
            (None, Some(_)) => {
                touches = true;
                node(b.0 - 1, b.1 - 1)
            }
            (None, None) => unreachable!("padding nodes never straddle the level"),
        }
    };

    // start key -> (end key, start point)
    let mut next: std::collections::HashMap<EdgeKey, (EdgeKey, c64)> =
        std::collections::HashMap::new();
    for j in 0..py - 1 {
        for i in 0..px - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let ins: Vec<bool> = corners.iter().map(|&(a, b)| inside(a, b)).collect();
            if ins.iter().all(|&b| b) || ins.iter().all(|&b| !b) {
                continue;
            }
            let keys: [EdgeKey; 4] = [
                (false, i, j),
                (true, i + 1, j),
                (false, i, j + 1),
                (true, i, j),
            ];
            let mut exits = Vec::new();
            let mut entries = Vec::new();
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if ins[a] && !ins[b] {
                    exits.push(e);
                } else if !ins[a] && ins[b] {
                    entries.push(e);
                }
            }
            let saddle = exits.len() == 2;
            let centre_inside = saddle && {
                let vals: Vec<Option<f64>> = corners.iter().map(|&(a, b)| value(a, b)).collect();
                vals.iter().all(|v| v.is_some())
                    && vals.iter().map(|v| v.unwrap_or(0.0)).sum::<f64>() / 4.0 < level
            };
            for &ex in &exits {
                // next entry counter-clockwise after ex, or the previous one
                let en = if !saddle || centre_inside {
                    (1..4).map(|d| (ex + d) % 4).find(|e| entries.contains(e))
                } else {
                    (1..4)
                        .map(|d| (ex + 4 - d) % 4)
                        .find(|e| entries.contains(e))
                }
                .expect("each exit has an entry");
                let p = crossing(corners[ex], corners[(ex + 1) % 4]);
                next.insert(keys[ex], (keys[en], p));
            }
        }
    }

    let mut loops = Vec::new();
    let mut starts: Vec<EdgeKey> = next.keys().copied().collect();
    starts.sort();
    for s in starts {
        if !next.contains_key(&s) {
            continue;
        }
        let mut lp: Vec<c64> = Vec::new();
        let mut k = s;
        while let Some((to, p)) = next.remove(&k) {
            if lp.last() != Some(&p) {
                lp.push(p);
            }
            k = to;
        }
        if lp.len() > 1 && lp[0] == lp[lp.len() - 1] {
            lp.pop();
        }
        if lp.len() >= 2 && polyline_length(&lp, true) > 0.0 {
            lp.push(lp[0]);
            loops.push(lp);
        }
    }
    (loops, touches)
}

/// `Ω_CG = W(A) ∩ {|z| ≥ 1/μ(A^{-1})}`.
#[derive(Debug, Clone, Serialize)]
pub struct CgRegion {
    /// Boundary traced on a grid (level 0 of a distance-like field).
    pub contour: Contour,
    /// `1/μ(A^{-1})`.
    pub radius: f64,
    #[serde(skip)]
    pub fov: FovBoundary,
}

impl CgRegion {
    /// Points of `(∂W ∩ {|z| ≥ r}) ∪ (W ∩ {|z| = r})`, a superset of the
    /// region boundary inside the region's closure: maxima over these points
    /// equal maxima over `Ω_CG` up to sampling.
    pub fn boundary_samples(&self, count: usize) -> Vec<c64> {
        let r = self.radius;
        // roundoff slack keeps degenerate regions (a single point) nonempty
        let slack = 1e-10 * r.max(self.fov.numerical_radius);
        let mut pts: Vec<c64> = self
            .fov
            .boundary_samples(count)
            .into_iter()
            .filter(|z| z.norm() >= r - slack)
            .collect();
        for j in 0..count {
            let z = c64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / count as f64);
            if self.fov.contains(z, slack) {
                pts.push(z);
            }
        }
        pts
    }

    /// The minimax problem on the region is trivially 1.
    pub fn surrounds_origin(&self) -> bool {
        self.contour.encloses_origin
    }
}

/// Traces `Ω_CG` on a `resolution x resolution` grid over the padded FOV box.
pub fn cg_region(a: &ComplexMatrix, fov: &FovBoundary, resolution: usize) -> Result<CgRegion> {
    check_grid(resolution, resolution)?;
    let inv = inverse(a)?;
    let mu_inv = fov_boundary(&inv, fov.angles.len().max(8))?.numerical_radius;
    let radius = 1.0 / mu_inv;
    let (mut lo, mut hi) = (
        c64::new(f64::INFINITY, f64::INFINITY),
        c64::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for z in &fov.outer {
        lo = c64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = c64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let scale = fov.outer.iter().map(|z| z.norm()).fold(radius, f64::max);
    let pad = 0.05 * (hi.re - lo.re).max(hi.im - lo.im) + 1e-3 * scale;
    let bbox = GridBox::new(lo.re - pad, hi.re + pad, lo.im - pad, hi.im + pad)?;
    let outer = fov.outer.clone();
    let grid = fill_grid(bbox, resolution, resolution, |z| {
        signed_distance_convex(&outer, z).max(radius - z.norm())
    });
    let (loops, touches) = isolines(&grid.values, grid.nx, grid.ny, 0.0, |ix, iy| {
        grid.node(ix, iy)
    });
    Ok(CgRegion {
        contour: Contour::from_loops(radius, loops, touches),
        radius,
        fov: fov.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fov_of_jordan_block_is_disk() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 10.0], &[0.0, 1.0]]);
        let f = fov_boundary(&a, 64).unwrap();
        for z in &f.vertices {
            assert!(((z - c64::new(1.0, 0.0)).norm() - 5.0).abs() < 1e-10);
        }
        assert!((f.numerical_radius - 6.0).abs() < 1e-10);
        assert!((f.min_real_part + 4.0).abs() < 1e-10);
    }

    #[test]
    fn contour_of_scalar_is_circle() {
        let a = ComplexMatrix::identity(3).scale(c64::new(2.0, 0.0));
        let g =
            pseudospectrum_grid(&a, GridBox::new(1.0, 3.0, -1.0, 1.0).unwrap(), 81, 81).unwrap();
        let c = extract_contour(&g, 0.5).unwrap();
        assert_eq!(c.loops.len(), 1);
        assert!((c.length - std::f64::consts::PI).abs() < 0.02 * std::f64::consts::PI);
        assert!(!c.encloses_origin && !c.touches_boundary);
        assert_eq!(c.winding(c64::new(2.0, 0.0)), 1);
    }

    #[test]
    fn annulus_has_hole() {
        let (nx, ny) = (101, 101);
        let node = |ix: usize, iy: usize| {
            c64::new(
                -2.0 + 4.0 * ix as f64 / 100.0,
                -2.0 + 4.0 * iy as f64 / 100.0,
            )
        };
        let field: Vec<f64> = (0..nx * ny)
            .map(|i| (node(i % nx, i / nx).norm() - 1.0).abs())
            .collect();
        let (loops, touches) = isolines(&field, nx, ny, 0.3, node);
        assert_eq!(loops.len(), 2);
        assert!(!touches);
        let w: i32 = loops
            .iter()
            .map(|l| winding_number(&l[..l.len() - 1], c64::new(0.0, 0.0)))
            .sum();
        assert_eq!(w, 0);
        let w: i32 = loops
            .iter()
            .map(|l| winding_number(&l[..l.len() - 1], c64::new(1.0, 0.0)))
            .sum();
        assert_eq!(w, 1);
    }

    #[test]
    fn level_outside_range_rejected() {
        let a = ComplexMatrix::identity(2);
        let g = pseudospectrum_grid(&a, GridBox::new(0.0, 2.0, -1.0, 1.0).unwrap(), 5, 5).unwrap();
        assert!(matches!(
            extract_contour(&g, 10.0),
            Err(Error::LevelOutOfRange { .. })
        ));
    }
}
