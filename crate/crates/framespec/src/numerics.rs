//! Dense complex linear algebra and planar geometry used by every other
//! module. Matrix factorizations delegate to LAPACK via `ndarray-linalg`;
//! the geometry (convex hull, smallest enclosing disk, signed distances)
//! is implemented here.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigValsh, Eigh, Inverse, SVD, UPLO};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;

/// Base absolute tolerance; combined with a relative part as
/// `tol_abs + tol_rel * scale` throughout.
pub const TOL_ABS: f64 = 1e-9;
pub const TOL_REL: f64 = 1e-9;

/// Hybrid tolerance at the given scale (typically a matrix norm).
pub fn tol_at(scale: f64) -> f64 {
    TOL_ABS + TOL_REL * scale
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn validate_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation("matrix has non-finite entries".into()))
    }
}

fn require_square(a: &CMatrix) -> Result<usize> {
    let (r, c) = a.dim();
    if r != c {
        return Err(Error::Dimension(format!("expected square matrix, got {r}x{c}")));
    }
    Ok(r)
}

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[(j, i)].conj())
}

/// Hermitian part `(A + A*)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    let ad = adjoint(a);
    (a + &ad).mapv(|z| z * 0.5)
}

pub fn identity(d: usize) -> CMatrix {
    Array2::from_shape_fn((d, d), |(i, j)| {
        if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    })
}

/// Canonical ordering of complex values: by real part, then imaginary.
pub fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
}

/// Eigenvalues of a square matrix, sorted by (re, im) ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum(Vec<C64>);

impl Spectrum {
    pub fn new(mut vals: Vec<C64>) -> Self {
        sort_complex(&mut vals);
        Spectrum(vals)
    }

    pub fn values(&self) -> &[C64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// All eigenvalues of `a` with algebraic multiplicity, canonically sorted.
pub fn eig(a: &CMatrix) -> Result<Spectrum> {
    require_square(a)?;
    validate_finite(a)?;
    let (vals, _) = a.eig()?;
    Ok(Spectrum::new(vals.to_vec()))
}

/// Real eigenvalues of a Hermitian matrix, ascending. Rejects inputs whose
/// departure from Hermitian symmetry exceeds `1e-10 * max|A|`.
pub fn eig_hermitian(a: &CMatrix) -> Result<Vec<f64>> {
    require_square(a)?;
    validate_finite(a)?;
    let dev = max_abs(&(a - &adjoint(a)));
    let scale = max_abs(a);
    if dev > 1e-10 * scale.max(1.0) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: ||A - A*||_max = {dev:.3e} at scale {scale:.3e}"
        )));
    }
    let vals = a.eigvalsh(UPLO::Lower)?;
    let mut v = vals.to_vec();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(v)
}

/// Singular values, descending.
pub fn svd_sigma(a: &CMatrix) -> Result<Vec<f64>> {
    validate_finite(a)?;
    let (_, s, _) = a.svd(false, false)?;
    let mut v = s.to_vec();
    v.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(v)
}

/// Matrix inverse; fails with a condition estimate when the smallest
/// singular value drops below `1e-12` of the largest.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    require_square(a)?;
    validate_finite(a)?;
    let s = svd_sigma(a)?;
    let (smax, smin) = (s[0], *s.last().unwrap());
    if smin <= 1e-12 * smax {
        return Err(Error::Singular {
            cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            context: "inverse".into(),
        });
    }
    Ok(a.inv()?)
}

/// Inverse square root of a Hermitian positive definite matrix, computed
/// from its eigendecomposition. The result is Hermitian.
pub fn inv_sqrt_hermitian_pd(a: &CMatrix) -> Result<CMatrix> {
    let d = require_square(a)?;
    let (vals, vecs) = hermitian_eig_pairs(a)?;
    let wmax = vals.iter().cloned().fold(0.0, f64::max);
    if vals.iter().any(|&w| w <= 1e-12 * wmax) || wmax <= 0.0 {
        return Err(Error::Validation(
            "matrix is not positive definite within tolerance".into(),
        ));
    }
    let mut b = Array2::zeros((d, d));
    for k in 0..d {
        let w = 1.0 / vals[k].sqrt();
        for i in 0..d {
            for j in 0..d {
                b[(i, j)] += vecs[(i, k)] * vecs[(j, k)].conj() * w;
            }
        }
    }
    Ok(b)
}

/// Eigenpairs of a Hermitian matrix (values ascending, columns of the
/// second component are the matching orthonormal eigenvectors).
pub fn hermitian_eig_pairs(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    require_square(a)?;
    validate_finite(a)?;
    let dev = max_abs(&(a - &adjoint(a)));
    if dev > 1e-10 * max_abs(a).max(1.0) {
        return Err(Error::Validation("matrix is not Hermitian".into()));
    }
    let (vals, vecs): (Array1<f64>, CMatrix) = a.eigh(UPLO::Lower)?;
    // ndarray-linalg returns the conjugated eigenvectors for complex
    // row-major input; undo that so A v_k = w_k v_k holds.
    Ok((vals.to_vec(), vecs.mapv(|z| z.conj())))
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex polygon in the complex plane, vertices counterclockwise.
/// One or two vertices encode the degenerate point / segment cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2D {
    pub vertices: Vec<C64>,
}

impl Polygon2D {
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }
}

/// Convex hull by Andrew's monotone chain. Duplicates and collinear
/// interior points are dropped; 1- and 2-point hulls are returned as-is.
pub fn convex_hull(points: &[C64]) -> Result<Polygon2D> {
    if points.is_empty() {
        return Err(Error::Validation("convex hull of empty point set".into()));
    }
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    pts.dedup_by(|a, b| a == b);

    let scale = pts
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let eps = 1e-12 * scale * scale;

    if pts.len() == 1 {
        return Ok(Polygon2D { vertices: pts });
    }

    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(Polygon2D { vertices: lower })
}

fn dist_to_segment(z: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Signed Euclidean distance to a convex polygon: negative inside,
/// zero on the boundary, positive outside. Degenerate polygons (point,
/// segment) have empty interior, so the result is never negative there.
pub fn dist_to_polygon(z: C64, p: &Polygon2D) -> f64 {
    let v = &p.vertices;
    match v.len() {
        0 => f64::INFINITY,
        1 => (z - v[0]).norm(),
        2 => dist_to_segment(z, v[0], v[1]),
        n => {
            let mut boundary = f64::INFINITY;
            let mut inside = true;
            for i in 0..n {
                let a = v[i];
                let b = v[(i + 1) % n];
                boundary = boundary.min(dist_to_segment(z, a, b));
                if cross(a, b, z) < 0.0 {
                    inside = false;
                }
            }
            if inside {
                -boundary
            } else {
                boundary
            }
        }
    }
}

fn circle_from_two(a: C64, b: C64) -> (C64, f64) {
    let c = (a + b) * 0.5;
    (c, (a - c).norm().max((b - c).norm()))
}

fn circle_from_three(a: C64, b: C64, c: C64) -> Option<(C64, f64)> {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d.abs() < 1e-300 {
        return None;
    }
    let ux = (a.norm_sqr() * (b.im - c.im)
        + b.norm_sqr() * (c.im - a.im)
        + c.norm_sqr() * (a.im - b.im))
        / d;
    let uy = (a.norm_sqr() * (c.re - b.re)
        + b.norm_sqr() * (a.re - c.re)
        + c.norm_sqr() * (b.re - a.re))
        / d;
    let center = C64::new(ux, uy);
    let r = (a - center)
        .norm()
        .max((b - center).norm())
        .max((c - center).norm());
    Some((center, r))
}

fn in_disk(z: C64, center: C64, radius: f64, eps: f64) -> bool {
    (z - center).norm() <= radius + eps
}

/// Smallest disk enclosing all points: Welzl's randomized incremental
/// algorithm with a fixed shuffle seed so results are deterministic.
pub fn min_enclosing_disk(points: &[C64]) -> Result<(C64, f64)> {
    if points.is_empty() {
        return Err(Error::Validation("enclosing disk of empty point set".into()));
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    let eps = 1e-12 * scale;

    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    pts.dedup_by(|a, b| a == b);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    pts.shuffle(&mut rng);

    let mut center = pts[0];
    let mut radius = 0.0_f64;

    for i in 1..pts.len() {
        if in_disk(pts[i], center, radius, eps) {
            continue;
        }
        // pts[i] on the boundary
        center = pts[i];
        radius = 0.0;
        for j in 0..i {
            if in_disk(pts[j], center, radius, eps) {
                continue;
            }
            // pts[i], pts[j] on the boundary
            let (c2, r2) = circle_from_two(pts[i], pts[j]);
            center = c2;
            radius = r2;
            for k in 0..j {
                if in_disk(pts[k], center, radius, eps) {
                    continue;
                }
                if let Some((c3, r3)) = circle_from_three(pts[i], pts[j], pts[k]) {
                    center = c3;
                    radius = r3;
                } else {
                    // collinear support: widest pair wins
                    let cands = [
                        circle_from_two(pts[i], pts[j]),
                        circle_from_two(pts[i], pts[k]),
                        circle_from_two(pts[j], pts[k]),
                    ];
                    let best = cands
                        .iter()
                        .cloned()
                        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap();
                    center = best.0;
                    radius = best.1;
                }
            }
        }
    }
    Ok((center, radius))
}
