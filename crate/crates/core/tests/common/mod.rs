#![allow(dead_code)]

use num_complex::Complex64;
use qscode::state::{haar_sample, DensityMatrix, PureState, SeededSampler};

/// Mixture of `rank` Haar states with uniform-spacing weights.
pub fn random_density(d: usize, rank: usize, s: &mut SeededSampler) -> DensityMatrix {
    let states: Vec<PureState> = (0..rank).map(|_| haar_sample(d, s).unwrap()).collect();
    let raw: Vec<f64> = (0..rank).map(|_| -s.uniform().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let refs: Vec<&PureState> = states.iter().collect();
    DensityMatrix::mixture(&weights, &refs).unwrap()
}

pub fn random_mixed(d: usize, s: &mut SeededSampler) -> DensityMatrix {
    let rank = 1 + (s.next_u64() % (2 * d as u64)) as usize;
    random_density(d, rank, s)
}

/// Bloch coordinates at radius 1/2, computed from the amplitudes directly.
pub fn bloch_of(psi: &PureState) -> [f64; 3] {
    let a = psi.amplitudes()[0];
    let b = psi.amplitudes()[1];
    let c = a.conj() * b;
    [c.re, c.im, 0.5 * (a.norm_sqr() - b.norm_sqr())]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn point_segment(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    let t = if len2 == 0.0 { 0.0 } else { (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0) };
    norm(sub(p, [a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]]))
}

fn point_triangle(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let edges = point_segment(p, a, b).min(point_segment(p, b, c)).min(point_segment(p, a, c));
    let n = cross(sub(b, a), sub(c, a));
    let n2 = dot(n, n);
    if n2 < 1e-24 {
        return edges;
    }
    let ap = sub(p, a);
    let u = dot(cross(sub(b, a), ap), n) / n2;
    let v = dot(cross(ap, sub(c, a)), n) / n2;
    // p = a + v (b - a) + u (c - a) + h n in the plane basis.
    if u >= 0.0 && v >= 0.0 && u + v <= 1.0 {
        (dot(ap, n) / n2.sqrt()).abs()
    } else {
        edges
    }
}

fn in_tetrahedron(p: [f64; 3], v: [[f64; 3]; 4]) -> bool {
    let vol = |a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]| dot(sub(b, a), cross(sub(c, a), sub(d, a)));
    let total = vol(v[0], v[1], v[2], v[3]);
    if total.abs() < 1e-18 {
        return false;
    }
    let parts = [
        vol(p, v[1], v[2], v[3]),
        vol(v[0], p, v[2], v[3]),
        vol(v[0], v[1], p, v[3]),
        vol(v[0], v[1], v[2], p),
    ];
    parts.iter().all(|x| x / total >= -1e-14)
}

/// Euclidean distance from `p` to the convex hull of `pts`, by enumerating
/// every vertex, edge, triangle and tetrahedron.
pub fn hull_distance_bruteforce(p: [f64; 3], pts: &[[f64; 3]]) -> f64 {
    let n = pts.len();
    let mut best = pts.iter().map(|&q| norm(sub(p, q))).fold(f64::INFINITY, f64::min);
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(point_segment(p, pts[i], pts[j]));
            for k in j + 1..n {
                best = best.min(point_triangle(p, pts[i], pts[j], pts[k]));
                for l in k + 1..n {
                    if in_tetrahedron(p, [pts[i], pts[j], pts[k], pts[l]]) {
                        return 0.0;
                    }
                }
            }
        }
    }
    best
}

pub fn complex(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
