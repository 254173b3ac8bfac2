//! Multiplier operators `M_{m,φ,ψ} = Φ diag(m) Ψ*`: assembly, norm bounds,
//! spectra, numerical range, and the similarity reduction to the Parseval
//! form.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::numerics::{
    self, adjoint, hermitian_part, C64, CMatrix, Polygon2D, Spectrum,
};

/// Provenance of a symbol truncated from one of the infinite patterns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SymbolGenerator {
    Constant,
    Periodic { pattern: Vec<C64> },
    Rule { name: String, len: usize },
}

/// A finite complex symbol sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    pub values: Vec<C64>,
    pub generator: Option<SymbolGenerator>,
}

impl Symbol {
    pub fn new(values: Vec<C64>) -> Symbol {
        Symbol {
            values,
            generator: None,
        }
    }

    pub fn constant(c: C64, len: usize) -> Symbol {
        Symbol {
            values: vec![c; len],
            generator: Some(SymbolGenerator::Constant),
        }
    }

    /// Tiles `pattern` to length `len`.
    pub fn periodic(pattern: &[C64], len: usize) -> Symbol {
        let values = (0..len).map(|i| pattern[i % pattern.len()]).collect();
        Symbol {
            values,
            generator: Some(SymbolGenerator::Periodic {
                pattern: pattern.to_vec(),
            }),
        }
    }

    pub fn real(values: &[f64]) -> Symbol {
        Symbol::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn real_range(&self) -> Option<(f64, f64)> {
        if !self.is_real(1e-12) {
            return None;
        }
        let lo = self.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}

/// Assembled multiplier matrix together with its provenance.
#[derive(Debug, Clone)]
pub struct Multiplier {
    pub matrix: CMatrix,
    pub symbol: Symbol,
    pub phi_label: String,
    pub psi_label: String,
    /// whether `(φ, ψ)` was verified to be a dual pair at assembly
    pub dual: bool,
}

impl Multiplier {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d = self.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = self.matrix[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        serde_json::json!({
            "dim": d,
            "symbol": self.symbol,
            "phi_label": self.phi_label,
            "psi_label": self.psi_label,
            "dual": self.dual,
            "matrix": entries,
        })
    }
}

/// `M = Φ diag(m) Ψ*`; the `dual` flag records whether `(φ, ψ)` passed the
/// duality test.
pub fn assemble(m: &Symbol, phi: &Frame, psi: &Frame) -> Result<Multiplier> {
    if phi.dim != psi.dim {
        return Err(Error::Dimension(format!(
            "frame dimensions differ: {} vs {}",
            phi.dim, psi.dim
        )));
    }
    if m.len() != phi.count || m.len() != psi.count {
        return Err(Error::Dimension(format!(
            "symbol length {} does not match frame counts {} / {}",
            m.len(),
            phi.count,
            psi.count
        )));
    }
    let mut weighted = phi.synthesis.clone();
    for (n, &mn) in m.values.iter().enumerate() {
        for i in 0..phi.dim {
            weighted[(i, n)] *= mn;
        }
    }
    let matrix = weighted.dot(&adjoint(&psi.synthesis));
    let (dual, _) = frames::is_dual_pair(phi, psi);
    Ok(Multiplier {
        matrix,
        symbol: m.clone(),
        phi_label: phi.label.clone(),
        psi_label: psi.label.clone(),
        dual,
    })
}

/// Operator-norm bound `sup|m| √(B_φ B_ψ)` with optimal upper bounds.
pub fn norm_bound(m: &Symbol, phi: &Frame, psi: &Frame) -> Result<f64> {
    let b_phi = frames::frame_bounds(phi)?.upper;
    let b_psi = frames::frame_bounds(psi)?.upper;
    Ok(m.sup_norm() * (b_phi * b_psi).sqrt())
}

pub fn spectrum_of(m: &Multiplier) -> Result<Spectrum> {
    numerics::eig(&m.matrix)
}

/// Spectral norm `σ_max(M)`.
pub fn spectral_norm(m: &Multiplier) -> Result<f64> {
    Ok(numerics::svd_sigma(&m.matrix)?[0])
}

/// The two similar forms `M_{m,φ,S⁻¹φ}` and `M_{m,ρ,ρ}` with
/// `ρ = S^{-1/2} φ`; their spectra coincide.
pub fn similarity_reduce(m: &Symbol, phi: &Frame) -> Result<(Multiplier, Multiplier)> {
    let dual = frames::canonical_dual(phi)?;
    let canonical_form = assemble(m, phi, &dual.psi)?;
    let rho = frames::canonical_parseval(phi)?;
    let parseval_form = assemble(m, &rho, &rho)?;
    Ok((canonical_form, parseval_form))
}

/// Outer polygonal approximation of the numerical range: intersection of
/// supporting half-planes `Re(e^{-iθ} z) <= λ_max(Re(e^{-iθ} M))` at
/// `count` uniformly spaced angles. Shrinks onto the true range as `count`
/// grows and never undershoots it.
pub fn numerical_range_hull(m: &Multiplier, count: usize) -> Result<Polygon2D> {
    if count < 8 {
        return Err(Error::Validation("need at least 8 support angles".into()));
    }
    let mut support = Vec::with_capacity(count);
    for k in 0..count {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
        let rot = m.matrix.mapv(|z| z * C64::from_polar(1.0, -theta));
        let h = hermitian_part(&rot);
        let ev = numerics::eig_hermitian(&h)?;
        support.push((theta, *ev.last().unwrap()));
    }
    // vertices at intersections of consecutive supporting lines
    let mut pts = Vec::with_capacity(count);
    for k in 0..count {
        let (t0, h0) = support[k];
        let (t1, h1) = support[(k + 1) % count];
        let det = (t1 - t0).sin().abs().max((t1 - t0 + 2.0 * std::f64::consts::PI).sin().abs());
        let s = (t1 - t0).rem_euclid(2.0 * std::f64::consts::PI).sin();
        if s.abs() < 1e-12 || det < 1e-12 {
            continue;
        }
        let x = (h0 * t1.sin() - h1 * t0.sin()) / s;
        let y = (h1 * t0.cos() - h0 * t1.cos()) / s;
        pts.push(C64::new(x, y));
    }
    numerics::convex_hull(&pts)
}

/// Invertibility via the singular value ratio.
pub fn is_invertible(m: &Multiplier) -> Result<(bool, f64)> {
    let sv = numerics::svd_sigma(&m.matrix)?;
    let smin = *sv.last().unwrap();
    Ok((smin > 1e-10 * sv[0], smin))
}

/// `diag(m)` as a multiplier over a trivially dual ONB pair; convenient in
/// tests and oracles.
pub fn diagonal(m: &Symbol) -> Multiplier {
    let d = m.len();
    let mut mat: CMatrix = Array2::zeros((d, d));
    for (i, &v) in m.values.iter().enumerate() {
        mat[(i, i)] = v;
    }
    Multiplier {
        matrix: mat,
        symbol: m.clone(),
        phi_label: "onb".into(),
        psi_label: "onb".into(),
        dual: true,
    }
}
