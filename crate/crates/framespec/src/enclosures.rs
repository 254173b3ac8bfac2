//! Spectral-localization regions: the Bessel-norm disk, the convex-hull
//! enclosure for canonical duals, the dual-pair disks, the Riesz-split
//! criterion, and the ONB-union criterion, together with grid scans that
//! turn resolvent predicates into drawable regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::multipliers::Symbol;
use crate::numerics::{self, C64, Polygon2D};

/// Strict-inequality margin: predicates certify a point only when the
/// inequality holds with at least this slack.
pub const STRICT_MARGIN: f64 = 1e-12;

/// Rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl BoundingBox {
    pub fn inflate(&self, factor: f64) -> BoundingBox {
        let (cx, cy) = ((self.re_lo + self.re_hi) / 2.0, (self.im_lo + self.im_hi) / 2.0);
        let (hw, hh) = (
            (self.re_hi - self.re_lo) / 2.0 * (1.0 + factor),
            (self.im_hi - self.im_lo) / 2.0 * (1.0 + factor),
        );
        BoundingBox {
            re_lo: cx - hw,
            re_hi: cx + hw,
            im_lo: cy - hh,
            im_hi: cy + hh,
        }
    }
}

/// Rectangular grid of points with a bitmask of those CERTIFIED to lie in
/// the resolvent set. "Contains" is conservative: a point counts as inside
/// the enclosure unless a certified grid point lies within half a cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMask {
    pub bbox: BoundingBox,
    pub nx: usize,
    pub ny: usize,
    /// row-major, index `iy * nx + ix`
    pub certified: Vec<bool>,
}

impl GridMask {
    pub fn point(&self, ix: usize, iy: usize) -> C64 {
        let dx = (self.bbox.re_hi - self.bbox.re_lo) / (self.nx - 1) as f64;
        let dy = (self.bbox.im_hi - self.bbox.im_lo) / (self.ny - 1) as f64;
        C64::new(self.bbox.re_lo + ix as f64 * dx, self.bbox.im_lo + iy as f64 * dy)
    }

    pub fn half_cell(&self) -> f64 {
        let dx = (self.bbox.re_hi - self.bbox.re_lo) / (self.nx - 1) as f64;
        let dy = (self.bbox.im_hi - self.bbox.im_lo) / (self.ny - 1) as f64;
        0.5 * dx.min(dy)
    }

    /// Distance from `z` to the nearest certified point among the 3x3
    /// neighborhood of grid cells around `z`, if any.
    fn nearest_certified(&self, z: C64) -> Option<f64> {
        let dx = (self.bbox.re_hi - self.bbox.re_lo) / (self.nx - 1) as f64;
        let dy = (self.bbox.im_hi - self.bbox.im_lo) / (self.ny - 1) as f64;
        let ix0 = ((z.re - self.bbox.re_lo) / dx).round() as isize;
        let iy0 = ((z.im - self.bbox.im_lo) / dy).round() as isize;
        let mut best: Option<f64> = None;
        for iy in (iy0 - 1)..=(iy0 + 1) {
            for ix in (ix0 - 1)..=(ix0 + 1) {
                if ix < 0 || iy < 0 || ix as usize >= self.nx || iy as usize >= self.ny {
                    continue;
                }
                let (ix, iy) = (ix as usize, iy as usize);
                if self.certified[iy * self.nx + ix] {
                    let d = (z - self.point(ix, iy)).norm();
                    best = Some(best.map_or(d, |b: f64| b.min(d)));
                }
            }
        }
        best
    }
}

#[derive(Serialize, Deserialize)]
struct GridMaskJson {
    bbox: BoundingBox,
    nx: usize,
    ny: usize,
    /// per-row run lengths, alternating starting with "not certified";
    /// the first run may be zero
    rle_rows: Vec<Vec<u32>>,
}

impl Serialize for GridMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = Vec::with_capacity(self.ny);
        for iy in 0..self.ny {
            let row = &self.certified[iy * self.nx..(iy + 1) * self.nx];
            let mut runs = Vec::new();
            let mut current = false;
            let mut count = 0u32;
            for &v in row {
                if v == current {
                    count += 1;
                } else {
                    runs.push(count);
                    current = v;
                    count = 1;
                }
            }
            runs.push(count);
            rows.push(runs);
        }
        GridMaskJson {
            bbox: self.bbox,
            nx: self.nx,
            ny: self.ny,
            rle_rows: rows,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridMask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GridMaskJson::deserialize(d)?;
        let mut certified = Vec::with_capacity(j.nx * j.ny);
        for runs in &j.rle_rows {
            let mut v = false;
            for &count in runs {
                certified.extend(std::iter::repeat_n(v, count as usize));
                v = !v;
            }
        }
        if certified.len() != j.nx * j.ny {
            return Err(serde::de::Error::custom("grid mask RLE length mismatch"));
        }
        Ok(GridMask {
            bbox: j.bbox,
            nx: j.nx,
            ny: j.ny,
            certified,
        })
    }
}

/// A tagged region of the complex plane with a containment predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RegionKind {
    Disk { center: C64, radius: f64 },
    Interval { lo: f64, hi: f64 },
    IntervalUnion { intervals: Vec<(f64, f64)> },
    Polygon { polygon: Polygon2D },
    GridMask { mask: GridMask },
    WholePlane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    /// which criterion and inputs produced the region
    pub provenance: String,
}

fn segment_distance(z: C64, lo: f64, hi: f64) -> f64 {
    if z.re < lo {
        (z - C64::new(lo, 0.0)).norm()
    } else if z.re > hi {
        (z - C64::new(hi, 0.0)).norm()
    } else {
        z.im.abs()
    }
}

impl Region {
    /// Signed containment margin: negative means inside (by the distance
    /// to the boundary where the region has interior), positive outside.
    /// Measure-zero regions (intervals, points, segments) report plain
    /// distance, so "inside" is margin 0.
    pub fn signed_margin(&self, z: C64) -> f64 {
        match &self.kind {
            RegionKind::Disk { center, radius } => (z - center).norm() - radius,
            RegionKind::Interval { lo, hi } => segment_distance(z, *lo, *hi),
            RegionKind::IntervalUnion { intervals } => intervals
                .iter()
                .map(|&(lo, hi)| segment_distance(z, lo, hi))
                .fold(f64::INFINITY, f64::min),
            RegionKind::Polygon { polygon } => numerics::dist_to_polygon(z, polygon),
            RegionKind::GridMask { mask } => match mask.nearest_certified(z) {
                Some(d) => mask.half_cell() - d,
                None => -mask.half_cell(),
            },
            RegionKind::WholePlane => f64::NEG_INFINITY,
        }
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.signed_margin(z) <= tol
    }
}

/// Prop. 1.1: the spectrum of any Bessel multiplier lies in the disk at
/// the origin of radius `sup|m| √(B_φ B_ψ)`.
pub fn bessel_disk(m: &Symbol, phi: &Frame, psi: &Frame) -> Result<Region> {
    let b_phi = frames::frame_bounds(phi)?.upper;
    let b_psi = frames::frame_bounds(psi)?.upper;
    Ok(Region {
        kind: RegionKind::Disk {
            center: C64::new(0.0, 0.0),
            radius: m.sup_norm() * (b_phi * b_psi).sqrt(),
        },
        provenance: format!("bessel-disk(phi={}, psi={})", phi.label, psi.label),
    })
}

/// Prop. 3.2: with ψ the canonical dual (computed internally, never caller
/// supplied), the spectrum lies in the closed convex hull of the symbol.
/// Real symbols degenerate to the interval `[inf m, sup m]`.
pub fn hull_enclosure(m: &Symbol, phi: &Frame) -> Result<Region> {
    frames::frame_bounds(phi)?;
    let provenance = format!("hull(phi={})", phi.label);
    if let Some((lo, hi)) = m.real_range() {
        return Ok(Region {
            kind: RegionKind::Interval { lo, hi },
            provenance,
        });
    }
    let hull = numerics::convex_hull(&m.values)?;
    Ok(Region {
        kind: RegionKind::Polygon { polygon: hull },
        provenance,
    })
}

fn require_dual(phi: &Frame, psi: &Frame) -> Result<()> {
    let (ok, defect) = frames::is_dual_pair(phi, psi);
    if !ok {
        return Err(Error::Duality(format!(
            "(phi, psi) is not a dual pair: defect {defect:.3e}; the convex-hull and \
             dual-disk enclosures fail for non-canonical duals in general"
        )));
    }
    Ok(())
}

/// Prop. 3.3 item 1: if every `m_n` lies in the disk `(μ, r)`, the
/// spectrum lies in the disk `(μ, r √(B_φ B_ψ))`.
pub fn dual_disk_item1(
    m: &Symbol,
    phi: &Frame,
    psi: &Frame,
    mu: C64,
    r: f64,
) -> Result<Region> {
    require_dual(phi, psi)?;
    let worst = m.values.iter().map(|v| (v - mu).norm()).fold(0.0, f64::max);
    if worst > r + STRICT_MARGIN {
        return Err(Error::Validation(format!(
            "symbol value at distance {worst:.6e} from mu exceeds radius {r:.6e}"
        )));
    }
    let b_phi = frames::frame_bounds(phi)?.upper;
    let b_psi = frames::frame_bounds(psi)?.upper;
    Ok(Region {
        kind: RegionKind::Disk {
            center: mu,
            radius: r * (b_phi * b_psi).sqrt(),
        },
        provenance: format!("dual-disk-1(mu={mu}, r={r}, phi={})", phi.label),
    })
}

/// Prop. 3.3 item 2 (real symbols): disk centered at the midpoint of
/// `[inf m, sup m]` with radius `half-range * √(B_φ B_ψ)`.
pub fn dual_disk_item2(m: &Symbol, phi: &Frame, psi: &Frame) -> Result<Region> {
    require_dual(phi, psi)?;
    let (lo, hi) = m
        .real_range()
        .ok_or_else(|| Error::Validation("symbol must be real".into()))?;
    let b_phi = frames::frame_bounds(phi)?.upper;
    let b_psi = frames::frame_bounds(psi)?.upper;
    Ok(Region {
        kind: RegionKind::Disk {
            center: C64::new((hi + lo) / 2.0, 0.0),
            radius: (hi - lo) / 2.0 * (b_phi * b_psi).sqrt(),
        },
        provenance: format!("dual-disk-2(phi={})", phi.label),
    })
}

/// Prop. 3.3 condition: `||m - μ||_∞ √(B_φ B_ψ) < |μ - λ|` certifies
/// `λ ∈ ρ(M)`.
pub fn pert_ii_resolvent_predicate(
    lambda: C64,
    mu: C64,
    m: &Symbol,
    phi: &Frame,
    psi: &Frame,
) -> Result<bool> {
    require_dual(phi, psi)?;
    let b_phi = frames::frame_bounds(phi)?.upper;
    let b_psi = frames::frame_bounds(psi)?.upper;
    let dev = m.values.iter().map(|v| (v - mu).norm()).fold(0.0, f64::max);
    Ok(dev * (b_phi * b_psi).sqrt() < (mu - lambda).norm() - STRICT_MARGIN)
}

/// Precomputed bounds for the Riesz-split criterion: `{φ_n}_{n∈I}` and
/// `{ψ_n}_{n∈I}` are Riesz bases with lower bounds `a_phi1`, `a_psi1`;
/// the complements have Bessel bounds `b_phi2`, `b_psi2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszSplitData {
    pub a_phi1: f64,
    pub a_psi1: f64,
    pub b_phi2: f64,
    pub b_psi2: f64,
}

impl RieszSplitData {
    /// Computes the four bounds from the index set.
    pub fn compute(phi: &Frame, psi: &Frame, indices: &[usize]) -> Result<RieszSplitData> {
        let complement: Vec<usize> = (0..phi.count).filter(|i| !indices.contains(i)).collect();
        let a_phi1 = frames::riesz_lower_bound(&frames::subfamily(phi, indices)?)?;
        let a_psi1 = frames::riesz_lower_bound(&frames::subfamily(psi, indices)?)?;
        let b_phi2 = frames::bessel_bound(&frames::subfamily(phi, &complement)?)?;
        let b_psi2 = frames::bessel_bound(&frames::subfamily(psi, &complement)?)?;
        Ok(RieszSplitData {
            a_phi1,
            a_psi1,
            b_phi2,
            b_psi2,
        })
    }
}

fn split_symbol<'a>(m: &'a Symbol, indices: &[usize]) -> (Vec<&'a C64>, Vec<&'a C64>) {
    let inside: Vec<&C64> = indices.iter().map(|&i| &m.values[i]).collect();
    let outside: Vec<&C64> = (0..m.len())
        .filter(|i| !indices.contains(i))
        .map(|i| &m.values[i])
        .collect();
    (inside, outside)
}

/// Thm. 4.1 first part (no duality needed):
/// `sup_{n∉I} |m_n| √(B_φ2 B_ψ2) < inf_{n∈I} |m_n| √(A_φ1 A_ψ1)`
/// implies `M_{m,φ,ψ}` is bijective.
pub fn riesz_split_invertible(
    m: &Symbol,
    indices: &[usize],
    data: &RieszSplitData,
) -> bool {
    let (inside, outside) = split_symbol(m, indices);
    let inf_in = inside.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let sup_out = outside.iter().map(|v| v.norm()).fold(0.0, f64::max);
    sup_out * (data.b_phi2 * data.b_psi2).sqrt()
        < inf_in * (data.a_phi1 * data.a_psi1).sqrt() - STRICT_MARGIN
}

/// Thm. 4.1 second part (requires `(φ, ψ)` dual):
/// `sup_{n∉I} |m_n - λ| √(B_φ2 B_ψ2) < inf_{n∈I} |m_n - λ| √(A_φ1 A_ψ1)`
/// certifies `λ ∈ ρ(M)`. The caller is expected to have verified duality;
/// [`riesz_split_resolvent_checked`] does both.
pub fn riesz_split_resolvent(
    lambda: C64,
    m: &Symbol,
    indices: &[usize],
    data: &RieszSplitData,
) -> bool {
    let (inside, outside) = split_symbol(m, indices);
    let inf_in = inside
        .iter()
        .map(|v| (*v - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let sup_out = outside
        .iter()
        .map(|v| (*v - lambda).norm())
        .fold(0.0, f64::max);
    sup_out * (data.b_phi2 * data.b_psi2).sqrt()
        < inf_in * (data.a_phi1 * data.a_psi1).sqrt() - STRICT_MARGIN
}

pub fn riesz_split_resolvent_checked(
    lambda: C64,
    m: &Symbol,
    phi: &Frame,
    psi: &Frame,
    indices: &[usize],
    data: &RieszSplitData,
) -> Result<bool> {
    require_dual(phi, psi)?;
    Ok(riesz_split_resolvent(lambda, m, indices, data))
}

/// Example 4.2 closed form: for a Parseval frame whose even-indexed half
/// is a Riesz basis with lower bound `A > 1/2` and a 0-1 symbol,
/// `σ(M) ⊆ [0, 1-A] ∪ [A, 1]`.
pub fn riesz_split_region_01(a: f64) -> Result<Region> {
    if !(a > 0.5 && a <= 1.0) {
        return Err(Error::CriterionVoid(format!(
            "the 0-1 split interval is valid only for A in (1/2, 1], got {a}"
        )));
    }
    Ok(Region {
        kind: RegionKind::IntervalUnion {
            intervals: vec![(0.0, 1.0 - a), (a, 1.0)],
        },
        provenance: format!("riesz-split-01(A={a})"),
    })
}

/// §4 Corollary (ψ = canonical dual, bounds derived from `(A, B, A')`):
/// `sup_{n∉I} |m_n - λ| (B-A')/A < inf_{n∈I} |m_n - λ| A'/B` certifies
/// `λ ∈ ρ(M_{m,φ,S⁻¹φ})`.
pub fn corollary_resolvent(
    lambda: C64,
    m: &Symbol,
    phi: &Frame,
    indices: &[usize],
    a_prime: f64,
) -> Result<bool> {
    let bounds = frames::frame_bounds(phi)?;
    let (a, b) = (bounds.lower, bounds.upper);
    let (inside, outside) = split_symbol(m, indices);
    let inf_in = inside
        .iter()
        .map(|v| (*v - lambda).norm())
        .fold(f64::INFINITY, f64::min);
    let sup_out = outside
        .iter()
        .map(|v| (*v - lambda).norm())
        .fold(0.0, f64::max);
    Ok(sup_out * (b - a_prime) / a < inf_in * a_prime / b - STRICT_MARGIN)
}

/// Branch data for the ONB-union criterion (Thm. 5.1): `|α_j|`, the
/// per-branch sub-symbols, and the shift parameters `l_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnbUnionData {
    pub alphas: Vec<f64>,
    pub branch_symbols: Vec<Vec<C64>>,
    pub ells: Vec<C64>,
}

impl OnbUnionData {
    /// Decomposes an interleaved symbol into `k` branches (the exact
    /// inverse of the `scaled_onb_union` ordering) and defaults each
    /// `l_j` to the branch's smallest-enclosing-disk center.
    pub fn from_symbol(m: &Symbol, alphas: &[f64], ells: Option<Vec<C64>>) -> Result<OnbUnionData> {
        let k = alphas.len();
        if k == 0 || !m.len().is_multiple_of(k) {
            return Err(Error::Validation(format!(
                "symbol length {} is not a multiple of branch count {k}",
                m.len()
            )));
        }
        let mut branch_symbols = vec![Vec::with_capacity(m.len() / k); k];
        for (i, &v) in m.values.iter().enumerate() {
            branch_symbols[i % k].push(v);
        }
        let ells = match ells {
            Some(e) => {
                if e.len() != k {
                    return Err(Error::Validation("need one l_j per branch".into()));
                }
                e
            }
            None => branch_symbols
                .iter()
                .map(|b| numerics::min_enclosing_disk(b).map(|(c, _)| c))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(OnbUnionData {
            alphas: alphas.to_vec(),
            branch_symbols,
            ells,
        })
    }

    fn weighted_center(&self) -> C64 {
        self.alphas
            .iter()
            .zip(&self.ells)
            .map(|(&a, &l)| l * (a * a))
            .sum()
    }

    fn weighted_deviation(&self) -> f64 {
        self.alphas
            .iter()
            .zip(&self.branch_symbols)
            .zip(&self.ells)
            .map(|((&a, branch), &l)| {
                a * a * branch.iter().map(|v| (v - l).norm()).fold(0.0, f64::max)
            })
            .sum()
    }
}

/// Thm. 5.1 (pert_III): `Σ_j |α_j|² sup_i |m_ij - l_j| < |Σ_j |α_j|² l_j - λ|`
/// certifies `λ ∈ ρ(M_{m,φ,φ})` for the union-of-scaled-ONBs frame.
pub fn onb_union_resolvent(lambda: C64, data: &OnbUnionData) -> bool {
    data.weighted_deviation() < (data.weighted_center() - lambda).norm() - STRICT_MARGIN
}

/// Thm. 5.1 (pert_IIIfin) for real symbols:
/// `σ(M) ⊆ [Σ_j |α_j|² inf_i m_ij, Σ_j |α_j|² sup_i m_ij]`.
pub fn onb_union_interval(data: &OnbUnionData) -> Result<Region> {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (&a, branch) in data.alphas.iter().zip(&data.branch_symbols) {
        if branch.iter().any(|v| v.im.abs() > 1e-12) {
            return Err(Error::Validation(
                "interval form requires real branch symbols".into(),
            ));
        }
        let inf = branch.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let sup = branch.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        lo += a * a * inf;
        hi += a * a * sup;
    }
    Ok(Region {
        kind: RegionKind::Interval { lo, hi },
        provenance: format!("onb-union-interval(k={})", data.alphas.len()),
    })
}

/// Default scan window: the Prop. 1.1 disk's bounding box inflated 10%.
pub fn default_scan_box(m: &Symbol, phi: &Frame, psi: &Frame) -> Result<BoundingBox> {
    let disk = bessel_disk(m, phi, psi)?;
    let RegionKind::Disk { center, radius } = disk.kind else {
        unreachable!()
    };
    let r = radius.max(1e-3);
    Ok(BoundingBox {
        re_lo: center.re - r,
        re_hi: center.re + r,
        im_lo: center.im - r,
        im_hi: center.im + r,
    }
    .inflate(0.1))
}

pub const DEFAULT_SCAN_RESOLUTION: (usize, usize) = (401, 401);

/// Evaluates a resolvent predicate on a grid; the marked points are those
/// PROVEN to be in the resolvent set, so the unmarked complement is the
/// (conservative) spectral enclosure. Deterministic regardless of
/// scheduling.
pub fn region_scan<P>(
    predicate: P,
    bbox: BoundingBox,
    resolution: (usize, usize),
    provenance: &str,
) -> Result<Region>
where
    P: Fn(C64) -> bool + Sync,
{
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::Validation("grid resolution must be at least 2 per axis".into()));
    }
    if !(bbox.re_hi > bbox.re_lo && bbox.im_hi > bbox.im_lo) {
        return Err(Error::Validation("empty scan box".into()));
    }
    let template = GridMask {
        bbox,
        nx,
        ny,
        certified: Vec::new(),
    };
    let eval_row = |iy: usize| -> Vec<bool> {
        (0..nx).map(|ix| predicate(template.point(ix, iy))).collect()
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<bool>> = {
        use rayon::prelude::*;
        (0..ny).into_par_iter().map(eval_row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<bool>> = (0..ny).map(eval_row).collect();

    Ok(Region {
        kind: RegionKind::GridMask {
            mask: GridMask {
                bbox,
                nx,
                ny,
                certified: rows.concat(),
            },
        },
        provenance: provenance.to_string(),
    })
}

/// Sequential twin of [`region_scan`], kept unconditionally for
/// benchmarking the parallel path against.
pub fn region_scan_seq<P>(
    predicate: P,
    bbox: BoundingBox,
    resolution: (usize, usize),
    provenance: &str,
) -> Result<Region>
where
    P: Fn(C64) -> bool,
{
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::Validation("grid resolution must be at least 2 per axis".into()));
    }
    if !(bbox.re_hi > bbox.re_lo && bbox.im_hi > bbox.im_lo) {
        return Err(Error::Validation("empty scan box".into()));
    }
    let mut mask = GridMask {
        bbox,
        nx,
        ny,
        certified: vec![false; nx * ny],
    };
    for iy in 0..ny {
        for ix in 0..nx {
            mask.certified[iy * nx + ix] = predicate(mask.point(ix, iy));
        }
    }
    Ok(Region {
        kind: RegionKind::GridMask { mask },
        provenance: provenance.to_string(),
    })
}

fn interval_union_normalize(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.retain(|&(lo, hi)| hi >= lo);
    iv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in iv {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                last.1 = last.1.max(hi);
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn as_intervals(r: &Region) -> Option<Vec<(f64, f64)>> {
    match &r.kind {
        RegionKind::Interval { lo, hi } => Some(vec![(*lo, *hi)]),
        RegionKind::IntervalUnion { intervals } => Some(intervals.clone()),
        _ => None,
    }
}

fn region_bbox(r: &Region) -> Option<BoundingBox> {
    match &r.kind {
        RegionKind::Disk { center, radius } => Some(BoundingBox {
            re_lo: center.re - radius,
            re_hi: center.re + radius,
            im_lo: center.im - radius,
            im_hi: center.im + radius,
        }),
        RegionKind::Interval { lo, hi } => Some(BoundingBox {
            re_lo: *lo,
            re_hi: *hi,
            im_lo: 0.0,
            im_hi: 0.0,
        }),
        RegionKind::IntervalUnion { intervals } => {
            let lo = intervals.iter().map(|i| i.0).fold(f64::INFINITY, f64::min);
            let hi = intervals.iter().map(|i| i.1).fold(f64::NEG_INFINITY, f64::max);
            Some(BoundingBox {
                re_lo: lo,
                re_hi: hi,
                im_lo: 0.0,
                im_hi: 0.0,
            })
        }
        RegionKind::Polygon { polygon } => {
            let xs: Vec<f64> = polygon.vertices.iter().map(|v| v.re).collect();
            let ys: Vec<f64> = polygon.vertices.iter().map(|v| v.im).collect();
            Some(BoundingBox {
                re_lo: xs.iter().cloned().fold(f64::INFINITY, f64::min),
                re_hi: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                im_lo: ys.iter().cloned().fold(f64::INFINITY, f64::min),
                im_hi: ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            })
        }
        RegionKind::GridMask { mask } => Some(mask.bbox),
        RegionKind::WholePlane => None,
    }
}

/// Intersection of enclosures. Interval-like inputs intersect exactly;
/// nested disks reduce to the smaller one; anything else is rasterized to
/// a common grid, marking a point certified-resolvent when ANY input
/// excludes it.
pub fn intersect(regions: &[Region]) -> Result<Region> {
    let active: Vec<&Region> = regions
        .iter()
        .filter(|r| r.kind != RegionKind::WholePlane)
        .collect();
    if active.is_empty() {
        return Ok(Region {
            kind: RegionKind::WholePlane,
            provenance: "intersection(empty)".into(),
        });
    }
    if active.len() == 1 {
        return Ok(active[0].clone());
    }
    let provenance = format!(
        "intersection({})",
        active
            .iter()
            .map(|r| r.provenance.as_str())
            .collect::<Vec<_>>()
            .join(" & ")
    );

    if active.iter().all(|r| as_intervals(r).is_some()) {
        let mut acc = interval_union_normalize(as_intervals(active[0]).unwrap());
        for r in &active[1..] {
            let next = interval_union_normalize(as_intervals(r).unwrap());
            let mut out = Vec::new();
            for &(alo, ahi) in &acc {
                for &(blo, bhi) in &next {
                    let lo = alo.max(blo);
                    let hi = ahi.min(bhi);
                    if hi >= lo {
                        out.push((lo, hi));
                    }
                }
            }
            acc = interval_union_normalize(out);
        }
        return Ok(Region {
            kind: if acc.len() == 1 {
                RegionKind::Interval {
                    lo: acc[0].0,
                    hi: acc[0].1,
                }
            } else {
                RegionKind::IntervalUnion { intervals: acc }
            },
            provenance,
        });
    }

    // nested disks intersect exactly
    if active.len() == 2 {
        if let (
            RegionKind::Disk {
                center: c1,
                radius: r1,
            },
            RegionKind::Disk {
                center: c2,
                radius: r2,
            },
        ) = (&active[0].kind, &active[1].kind)
        {
            let d = (c1 - c2).norm();
            if d + r1 <= *r2 {
                return Ok(Region {
                    kind: active[0].kind.clone(),
                    provenance,
                });
            }
            if d + r2 <= *r1 {
                return Ok(Region {
                    kind: active[1].kind.clone(),
                    provenance,
                });
            }
        }
    }

    // rasterize to the tightest common bounding box
    let mut bbox: Option<BoundingBox> = None;
    for r in &active {
        let b = region_bbox(r).expect("whole-plane filtered out");
        bbox = Some(match bbox {
            None => b,
            Some(acc) => BoundingBox {
                re_lo: acc.re_lo.max(b.re_lo),
                re_hi: acc.re_hi.min(b.re_hi),
                im_lo: acc.im_lo.max(b.im_lo),
                im_hi: acc.im_hi.min(b.im_hi),
            },
        });
    }
    let mut bbox = bbox.unwrap();
    if bbox.re_hi <= bbox.re_lo {
        bbox.re_hi = bbox.re_lo + 1e-6;
    }
    if bbox.im_hi <= bbox.im_lo {
        let pad = 1e-6_f64.max((bbox.re_hi - bbox.re_lo) * 1e-3);
        bbox.im_lo -= pad;
        bbox.im_hi += pad;
    }
    let owned: Vec<Region> = active.iter().map(|r| (*r).clone()).collect();
    region_scan(
        move |z| owned.iter().any(|r| !r.contains(z, 0.0)),
        bbox,
        DEFAULT_SCAN_RESOLUTION,
        &provenance,
    )
}
