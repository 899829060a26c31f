//! Planar helpers on complex polylines: lengths, sampling, hulls, winding.

use crate::linalg::c64;

/// Length of a polyline, closing it if `closed`.
pub fn polyline_length(pts: &[c64], closed: bool) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let mut l: f64 = pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    if closed {
        l += (pts[0] - pts[pts.len() - 1]).norm();
    }
    l
}

/// `count` points spaced uniformly in arclength along a closed polyline.
/// A degenerate (zero-length) loop returns its distinct vertices.
pub fn sample_closed(pts: &[c64], count: usize) -> Vec<c64> {
    let mut v: Vec<c64> = pts.to_vec();
    if v.len() > 1 && v[0] == v[v.len() - 1] {
        v.pop();
    }
    let total = polyline_length(&v, true);
    if v.is_empty() || count == 0 {
        return Vec::new();
    }
    if total == 0.0 || v.len() == 1 {
        return vec![v[0]];
    }
    let step = total / count as f64;
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    let mut seg_start = 0.0;
    let m = v.len();
    for i in 0..count {
        let s = i as f64 * step;
        loop {
            let a = v[seg % m];
            let b = v[(seg + 1) % m];
            let len = (b - a).norm();
            if s <= seg_start + len || seg + 1 >= m {
                let t = if len > 0.0 {
                    ((s - seg_start) / len).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                out.push(a + (b - a) * t);
                break;
            }
            seg_start += len;
            seg += 1;
        }
    }
    out
}

/// Arclength-uniform samples over several closed loops, at least `count`
/// in total, split in proportion to loop length. Every loop gets a vertex.
pub fn sample_loops(loops: &[Vec<c64>], count: usize) -> Vec<c64> {
    let lengths: Vec<f64> = loops.iter().map(|l| polyline_length(l, true)).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::new();
    for (l, len) in loops.iter().zip(&lengths) {
        let share = if total > 0.0 {
            ((count as f64) * len / total).ceil() as usize
        } else {
            1
        };
        out.extend(sample_closed(l, share.max(8)));
    }
    out
}

/// Winding number of a closed polyline about `p`.
pub fn winding_number(pts: &[c64], p: c64) -> i32 {
    let n = pts.len();
    if n < 2 {
        return 0;
    }
    let mut wn = 0;
    for i in 0..n {
        let a = pts[i] - p;
        let b = pts[(i + 1) % n] - p;
        if a.im <= 0.0 {
            if b.im > 0.0 && cross(a, b) > 0.0 {
                wn += 1;
            }
        } else if b.im <= 0.0 && cross(a, b) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

#[inline]
pub fn cross(a: c64, b: c64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Counter-clockwise convex hull (monotone chain), collinear points removed.
pub fn convex_hull(points: &[c64]) -> Vec<c64> {
    let mut p: Vec<c64> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup_by(|a, b| (*a - *b).norm() <= 1e-15 * (1.0 + a.norm()));
    if p.len() < 3 {
        return p;
    }
    let scale = p.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let tol = 1e-14 * scale * scale;
    let mut lower: Vec<c64> = Vec::new();
    for &z in &p {
        while lower.len() >= 2
            && cross(
                lower[lower.len() - 1] - lower[lower.len() - 2],
                z - lower[lower.len() - 2],
            ) <= tol
        {
            lower.pop();
        }
        lower.push(z);
    }
    let mut upper: Vec<c64> = Vec::new();
    for &z in p.iter().rev() {
        while upper.len() >= 2
            && cross(
                upper[upper.len() - 1] - upper[upper.len() - 2],
                z - upper[upper.len() - 2],
            ) <= tol
        {
            upper.pop();
        }
        upper.push(z);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Distance from `p` to segment `[a, b]`.
pub fn segment_distance(p: c64, a: c64, b: c64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Signed distance to a convex counter-clockwise polygon (negative inside).
/// Points and segments are treated as degenerate polygons (never inside).
pub fn signed_distance_convex(poly: &[c64], p: c64) -> f64 {
    let n = poly.len();
    if n == 0 {
        return f64::INFINITY;
    }
    if n == 1 {
        return (p - poly[0]).norm();
    }
    let mut dist = f64::INFINITY;
    let mut inside = n >= 3;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        dist = dist.min(segment_distance(p, a, b));
        if cross(b - a, p - a) < 0.0 {
            inside = false;
        }
    }
    if inside {
        -dist
    } else {
        dist
    }
}

/// Symmetric Hausdorff distance between two point clouds.
pub fn hausdorff(a: &[c64], b: &[c64]) -> f64 {
    let one_way = |x: &[c64], y: &[c64]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
