//! Finite vector families in `C^d` held as synthesis matrices: frame
//! operators and bounds, canonical and alternate duals, Riesz sub-family
//! bounds, unions of scaled orthonormal bases, and Gabor systems on `Z_d`.

use ndarray::{Array2, ArrayView1};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    self, adjoint, identity, inv_sqrt_hermitian_pd, inverse, max_abs, C64, CMatrix,
};

/// A finite family of vectors in `C^d`, stored as the `d x N` synthesis
/// matrix whose n-th column is the n-th vector. Spanning (i.e. being a
/// frame) is established by [`Frame::validate`] or [`frame_bounds`]; the
/// constructors in this module validate, while [`subfamily`] deliberately
/// does not, since sub-families are often mere Bessel sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub dim: usize,
    pub count: usize,
    pub synthesis: CMatrix,
    pub label: String,
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// A verified dual pair `(φ, ψ)`: `Ψ Φ* = I` up to `defect`.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub phi: Frame,
    pub psi: Frame,
    pub defect: f64,
    pub canonical: bool,
}

/// Gabor system parameters on `Z_d`: translates by multiples of
/// `time_step`, modulations by multiples of `freq_step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaborParams {
    pub dim: usize,
    pub time_step: usize,
    pub freq_step: usize,
    pub window: Vec<C64>,
}

/// Duality defect threshold.
pub const DUAL_TOL: f64 = 1e-9;
/// λ_min(S) at or below this is treated as "not a frame".
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Serialize, Deserialize)]
struct FrameJson {
    dim: usize,
    count: usize,
    label: String,
    /// column-major [re, im] pairs
    synthesis: Vec<[f64; 2]>,
}

impl Frame {
    pub fn from_synthesis(synthesis: CMatrix, label: impl Into<String>) -> Result<Frame> {
        numerics::validate_finite(&synthesis)?;
        let (dim, count) = synthesis.dim();
        if dim == 0 || count == 0 {
            return Err(Error::Validation("empty synthesis matrix".into()));
        }
        Ok(Frame {
            dim,
            count,
            synthesis,
            label: label.into(),
        })
    }

    pub fn vector(&self, n: usize) -> ArrayView1<'_, C64> {
        self.synthesis.column(n)
    }

    /// Checks the lower frame bound; errors when the family does not span.
    pub fn validate(&self) -> Result<FrameBounds> {
        frame_bounds(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut cols = Vec::with_capacity(self.dim * self.count);
        for n in 0..self.count {
            for i in 0..self.dim {
                let z = self.synthesis[(i, n)];
                cols.push([z.re, z.im]);
            }
        }
        serde_json::to_value(FrameJson {
            dim: self.dim,
            count: self.count,
            label: self.label.clone(),
            synthesis: cols,
        })
        .expect("frame serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Frame> {
        let fj: FrameJson = serde_json::from_value(v.clone())?;
        if fj.synthesis.len() != fj.dim * fj.count {
            return Err(Error::Validation(format!(
                "synthesis length {} does not match dim*count = {}",
                fj.synthesis.len(),
                fj.dim * fj.count
            )));
        }
        let mut m = Array2::zeros((fj.dim, fj.count));
        for n in 0..fj.count {
            for i in 0..fj.dim {
                let [re, im] = fj.synthesis[n * fj.dim + i];
                m[(i, n)] = C64::new(re, im);
            }
        }
        Frame::from_synthesis(m, fj.label)
    }
}

/// Standard orthonormal basis of `C^d`.
pub fn onb(d: usize) -> Frame {
    Frame {
        dim: d,
        count: d,
        synthesis: identity(d),
        label: format!("onb(d={d})"),
    }
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases absorbed, deterministic in the RNG state.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    use ndarray_linalg::QR;
    let g: CMatrix = Array2::from_shape_fn((d, d), |_| {
        C64::new(rng.sample(rand_distr_standard()), rng.sample(rand_distr_standard()))
    });
    let (q, r) = g.qr().expect("QR of a random Gaussian matrix");
    let mut q = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn rand_distr_standard() -> rand::distributions::Uniform<f64> {
    rand::distributions::Uniform::new(-1.0, 1.0)
}

/// Union of `k` scaled orthonormal bases with the interleaved ordering:
/// the vector at flat index `i*k + j` (0-based) is `alphas[j]` times the
/// i-th column of `unitaries[j]`.
pub fn scaled_onb_union(d: usize, alphas: &[C64], unitaries: &[CMatrix]) -> Result<Frame> {
    let k = alphas.len();
    if k == 0 || unitaries.len() != k {
        return Err(Error::Validation(
            "need one unitary per scale factor".into(),
        ));
    }
    if alphas.iter().any(|a| a.norm() == 0.0) {
        return Err(Error::Validation("scale factors must be nonzero".into()));
    }
    for u in unitaries {
        if u.dim() != (d, d) {
            return Err(Error::Dimension(format!("unitary is {:?}, expected {d}x{d}", u.dim())));
        }
        let r = u.dot(&adjoint(u)) - identity(d);
        if max_abs(&r) > 1e-10 {
            return Err(Error::Validation("matrix is not unitary within 1e-10".into()));
        }
    }
    let mut synth = Array2::zeros((d, k * d));
    for i in 0..d {
        for (j, u) in unitaries.iter().enumerate() {
            for row in 0..d {
                synth[(row, i * k + j)] = alphas[j] * u[(row, i)];
            }
        }
    }
    Frame::from_synthesis(synth, format!("onb-union(d={d},k={k})"))
}

/// Random Riesz basis of `C^d` with exact bounds `(A, B)`: singular values
/// log-uniform in `[√A, √B]` with both extremes attained.
pub fn random_riesz(d: usize, lower: f64, upper: f64, seed: u64) -> Result<Frame> {
    if !(lower > 0.0 && lower <= upper) {
        return Err(Error::Validation(format!(
            "need 0 < A <= B, got A = {lower}, B = {upper}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(d, &mut rng);
    let v = random_unitary(d, &mut rng);
    let (lo, hi) = (lower.sqrt().ln(), upper.sqrt().ln());
    let mut sv = vec![0.0; d];
    for (i, s) in sv.iter_mut().enumerate() {
        *s = if i == 0 {
            hi.exp()
        } else if i == d - 1 && d > 1 {
            lo.exp()
        } else {
            rng.gen_range(lo..=hi).exp()
        };
    }
    let mut synth = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..d {
                acc += u[(i, k)] * sv[k] * v[(j, k)].conj();
            }
            synth[(i, j)] = acc;
        }
    }
    Frame::from_synthesis(synth, format!("riesz(d={d},A={lower},B={upper},seed={seed})"))
}

/// Frame operator `S = Φ Φ*` (Hermitian positive semi-definite).
pub fn frame_operator(f: &Frame) -> CMatrix {
    f.synthesis.dot(&adjoint(&f.synthesis))
}

/// Optimal bounds `(λ_min(S), λ_max(S))`; errors when the family is not a
/// frame (λ_min at or below the threshold).
pub fn frame_bounds(f: &Frame) -> Result<FrameBounds> {
    let s = frame_operator(f);
    let ev = numerics::eig_hermitian(&s)?;
    let lower = ev[0];
    let upper = *ev.last().unwrap();
    if lower <= FRAME_TOL {
        return Err(Error::NotAFrame(format!(
            "lower frame bound {lower:.3e} at or below threshold {FRAME_TOL:.1e}"
        )));
    }
    Ok(FrameBounds { lower, upper })
}

fn dual_defect(phi: &Frame, psi: &Frame) -> f64 {
    let m = psi.synthesis.dot(&adjoint(&phi.synthesis)) - identity(phi.dim);
    max_abs(&m)
}

/// Canonical dual `ψ_n = S⁻¹ φ_n`.
pub fn canonical_dual(f: &Frame) -> Result<DualPair> {
    frame_bounds(f)?;
    let s = frame_operator(f);
    let sinv = inverse(&s)?;
    let psi = Frame::from_synthesis(sinv.dot(&f.synthesis), format!("{}~canonical-dual", f.label))?;
    let defect = dual_defect(f, &psi);
    Ok(DualPair {
        phi: f.clone(),
        psi,
        defect,
        canonical: true,
    })
}

/// Canonical Parseval frame `ρ_n = S^{-1/2} φ_n`.
pub fn canonical_parseval(f: &Frame) -> Result<Frame> {
    frame_bounds(f)?;
    let s = frame_operator(f);
    let sinvh = inv_sqrt_hermitian_pd(&s)?;
    Frame::from_synthesis(sinvh.dot(&f.synthesis), format!("{}~parseval", f.label))
}

/// Dual parametrized by a `d x N` correction: `Ψ = S⁻¹Φ + V (I - Φ* S⁻¹ Φ)`.
/// `V = 0` gives the canonical dual; for square frames (Riesz bases) the
/// correction vanishes identically.
pub fn alternate_dual(f: &Frame, v: &CMatrix) -> Result<DualPair> {
    if v.dim() != (f.dim, f.count) {
        return Err(Error::Dimension(format!(
            "correction is {:?}, expected {}x{}",
            v.dim(),
            f.dim,
            f.count
        )));
    }
    frame_bounds(f)?;
    let s = frame_operator(f);
    let sinv = inverse(&s)?;
    let canon = sinv.dot(&f.synthesis);
    let proj = identity(f.count) - adjoint(&f.synthesis).dot(&canon);
    let correction = v.dot(&proj);
    let psi_m = &canon + &correction;
    let psi = Frame::from_synthesis(psi_m, format!("{}~dual", f.label))?;
    let defect = dual_defect(f, &psi);
    if defect > DUAL_TOL {
        return Err(Error::Duality(format!("constructed dual has defect {defect:.3e}")));
    }
    let canonical = max_abs(&correction) <= 1e-14 * (1.0 + max_abs(&canon));
    Ok(DualPair {
        phi: f.clone(),
        psi,
        defect,
        canonical,
    })
}

/// Duality test `Ψ Φ* = I`; symmetric in its arguments.
pub fn is_dual_pair(phi: &Frame, psi: &Frame) -> (bool, f64) {
    if phi.dim != psi.dim || phi.count != psi.count {
        return (false, f64::INFINITY);
    }
    let defect = dual_defect(phi, psi);
    (defect <= DUAL_TOL, defect)
}

/// Column selection, no frame validation: sub-families may be mere Bessel
/// sequences.
pub fn subfamily(f: &Frame, indices: &[usize]) -> Result<Frame> {
    if indices.iter().any(|&i| i >= f.count) {
        return Err(Error::Validation("sub-family index out of range".into()));
    }
    let mut m = Array2::zeros((f.dim, indices.len()));
    for (j, &i) in indices.iter().enumerate() {
        for row in 0..f.dim {
            m[(row, j)] = f.synthesis[(row, i)];
        }
    }
    Ok(Frame {
        dim: f.dim,
        count: indices.len(),
        synthesis: m,
        label: format!("{}~sub({})", f.label, indices.len()),
    })
}

/// Riesz lower bound `σ_min(Φ_I)²` of a square spanning sub-family.
pub fn riesz_lower_bound(f: &Frame) -> Result<f64> {
    if f.count != f.dim {
        return Err(Error::NotARieszBasis(format!(
            "family has {} vectors in dimension {}",
            f.count, f.dim
        )));
    }
    let sv = numerics::svd_sigma(&f.synthesis)?;
    let smin = *sv.last().unwrap();
    if smin * smin <= FRAME_TOL {
        return Err(Error::NotARieszBasis(format!(
            "smallest singular value {smin:.3e} too small"
        )));
    }
    Ok(smin * smin)
}

/// Optimal Bessel bound `λ_max(Φ_J Φ_J*)` of any sub-family; 0 for empty.
pub fn bessel_bound(f: &Frame) -> Result<f64> {
    if f.count == 0 {
        return Ok(0.0);
    }
    let sv = numerics::svd_sigma(&f.synthesis)?;
    Ok(sv[0] * sv[0])
}

impl GaborParams {
    /// Window defaulting to the normalized indicator of `[0, time_step)`.
    pub fn with_default_window(dim: usize, time_step: usize, freq_step: usize) -> GaborParams {
        let mut window = vec![C64::new(0.0, 0.0); dim];
        let norm = 1.0 / (time_step as f64).sqrt();
        for w in window.iter_mut().take(time_step) {
            *w = C64::new(norm, 0.0);
        }
        GaborParams {
            dim,
            time_step,
            freq_step,
            window,
        }
    }

    fn check(&self) -> Result<(usize, usize)> {
        if self.time_step == 0 || self.freq_step == 0 || self.dim == 0 {
            return Err(Error::Validation("Gabor parameters must be positive".into()));
        }
        if !self.dim.is_multiple_of(self.time_step) || !self.dim.is_multiple_of(self.freq_step) {
            return Err(Error::Validation(format!(
                "time/freq steps must divide d = {}: got a = {}, b = {}",
                self.dim, self.time_step, self.freq_step
            )));
        }
        if self.window.len() != self.dim {
            return Err(Error::Dimension("window length must equal d".into()));
        }
        Ok((self.dim / self.time_step, self.dim / self.freq_step))
    }
}

/// Gabor family `G(g, a, b)` on `Z_d`: the vector at flat index
/// `n * (d/b) + m` has entries `e^{2πi m b x / d} g((x - n a) mod d)`.
/// The family is returned without a frame check; call [`frame_bounds`]
/// to verify it spans.
pub fn gabor_frame(p: &GaborParams) -> Result<Frame> {
    let (n_trans, n_mod) = p.check()?;
    let d = p.dim;
    let count = n_trans * n_mod;
    let mut synth = Array2::zeros((d, count));
    for n in 0..n_trans {
        for m in 0..n_mod {
            let col = n * n_mod + m;
            for x in 0..d {
                let shifted = (x + d - (n * p.time_step) % d) % d;
                let phase = 2.0 * std::f64::consts::PI * (m * p.freq_step * x) as f64 / d as f64;
                synth[(x, col)] = C64::from_polar(1.0, phase) * p.window[shifted];
            }
        }
    }
    Frame::from_synthesis(
        synth,
        format!("gabor(d={},a={},b={})", d, p.time_step, p.freq_step),
    )
}

/// Index partition of the refined system `G(g, a/N, b)` by translate
/// residue class mod `N`. `p` carries the refined time step `a/N`.
pub fn gabor_riesz_split(p: &GaborParams, n_classes: usize) -> Result<Vec<Vec<usize>>> {
    let (n_trans, n_mod) = p.check()?;
    if n_classes == 0 || n_trans % n_classes != 0 {
        return Err(Error::Validation(format!(
            "cannot split {n_trans} translates into {n_classes} residue classes"
        )));
    }
    let mut classes = vec![Vec::new(); n_classes];
    for n in 0..n_trans {
        for m in 0..n_mod {
            classes[n % n_classes].push(n * n_mod + m);
        }
    }
    Ok(classes)
}
