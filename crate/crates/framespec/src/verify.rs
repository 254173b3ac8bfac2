//! Named experiments reproducing the worked examples, plus a randomized
//! harness asserting that every applicable enclosure actually contains the
//! computed spectrum.

use std::path::Path;

use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enclosures::{self, OnbUnionData, Region, RegionKind, RieszSplitData};
use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::multipliers::{self, Symbol};
use crate::numerics::{self, C64, Spectrum};

pub const DEFAULT_DIM: usize = 64;
/// Containment tolerance for enclosure verdicts.
pub const CONTAIN_TOL: f64 = 1e-7;

/// One enclosure's verdict against a computed spectrum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionReport {
    pub region: Region,
    pub verdict: bool,
    /// max over eigenvalues of the signed containment margin; ≤ tolerance
    /// means every eigenvalue is inside
    pub worst_margin: f64,
}

/// One named check (a scalar assertion rather than a region verdict).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub dim: usize,
    pub eigenvalues: Spectrum,
    pub regions: Vec<RegionReport>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ExperimentResult {
    fn new(name: &str, dim: usize, eigenvalues: Spectrum) -> ExperimentResult {
        ExperimentResult {
            name: name.to_string(),
            dim,
            eigenvalues,
            regions: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }

    fn add_region(&mut self, region: Region) {
        let worst_margin = self
            .eigenvalues
            .values()
            .iter()
            .map(|&z| region.signed_margin(z))
            .fold(f64::NEG_INFINITY, f64::max);
        let verdict = worst_margin <= CONTAIN_TOL;
        self.pass &= verdict;
        self.regions.push(RegionReport {
            region,
            verdict,
            worst_margin,
        });
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameFamily {
    Parseval,
    RieszUnion,
    OnbUnion,
    Gabor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolFamily {
    RealInterval,
    ZeroOne,
    ComplexDisk,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub dim_lo: usize,
    pub dim_hi: usize,
    pub frame_family: FrameFamily,
    pub symbol_family: SymbolFamily,
    pub trials: usize,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim_lo < 2 || self.dim_hi > 256 || self.dim_lo > self.dim_hi {
            return Err(Error::Validation(format!(
                "dims must satisfy 2 <= lo <= hi <= 256, got [{}, {}]",
                self.dim_lo, self.dim_hi
            )));
        }
        if self.trials == 0 {
            return Err(Error::Validation("trial count must be >= 1".into()));
        }
        Ok(())
    }
}

fn trial_seed(base: u64, index: usize) -> u64 {
    base.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(index as u64)
        .wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Footnote-style oracle: for dual Riesz bases the spectrum is exactly the
/// symbol set.
pub fn run_footnote1(d: usize, m: &Symbol, seed: u64) -> Result<ExperimentResult> {
    if m.len() != d {
        return Err(Error::Dimension(format!(
            "need one symbol value per basis vector: {} vs {d}",
            m.len()
        )));
    }
    let phi = frames::random_riesz(d, 0.5, 2.0, seed)?;
    let dual = frames::canonical_dual(&phi)?;
    let mult = multipliers::assemble(m, &dual.phi, &dual.psi)?;
    let spec = multipliers::spectrum_of(&mult)?;
    let mut sorted_m = m.values.clone();
    numerics::sort_complex(&mut sorted_m);
    let worst = spec
        .values()
        .iter()
        .zip(&sorted_m)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let mut res = ExperimentResult::new("footnote1", d, spec);
    res.check(
        "spectrum-equals-symbol",
        worst <= 1e-8,
        format!("max sorted-pairing deviation {worst:.3e}"),
    );
    res.notes
        .push("dual Riesz bases: spectrum is the symbol set itself".into());
    Ok(res)
}

/// The dual pair φ = {e1, e1, e2, ...}, ψ = {i·e1, (1-i)·e1, e2, ...} with
/// m = {2, 1, 1, ...}: the spectrum escapes the convex hull of the symbol.
pub fn run_counterexample_s3(d: usize) -> Result<ExperimentResult> {
    if d < 2 {
        return Err(Error::Dimension("need dimension at least 2".into()));
    }
    let n = d + 1;
    let mut phi_s: Array2<C64> = Array2::zeros((d, n));
    let mut psi_s: Array2<C64> = Array2::zeros((d, n));
    phi_s[(0, 0)] = C64::new(1.0, 0.0);
    phi_s[(0, 1)] = C64::new(1.0, 0.0);
    psi_s[(0, 0)] = C64::new(0.0, 1.0);
    psi_s[(0, 1)] = C64::new(1.0, -1.0);
    for i in 1..d {
        phi_s[(i, i + 1)] = C64::new(1.0, 0.0);
        psi_s[(i, i + 1)] = C64::new(1.0, 0.0);
    }
    let phi = Frame::from_synthesis(phi_s, "s3-phi")?;
    let psi = Frame::from_synthesis(psi_s, "s3-psi")?;
    let (_, defect) = frames::is_dual_pair(&phi, &psi);

    let mut mv = vec![C64::new(1.0, 0.0); n];
    mv[0] = C64::new(2.0, 0.0);
    let m = Symbol::new(mv);
    let mult = multipliers::assemble(&m, &phi, &psi)?;
    let spec = multipliers::spectrum_of(&mult)?;
    let target = C64::new(1.0, -1.0);
    let eig_dist = spec
        .values()
        .iter()
        .map(|z| (z - target).norm())
        .fold(f64::INFINITY, f64::min);
    let hull = enclosures::hull_enclosure(&m, &phi)?;
    let hull_dist = hull.signed_margin(target);

    let mut res = ExperimentResult::new("counterexample_s3", d, spec);
    res.check(
        "duality-defect",
        defect <= 1e-12,
        format!("defect {defect:.3e}"),
    );
    res.check(
        "eigenvalue-1-i-present",
        eig_dist <= 1e-10,
        format!("distance to 1-i: {eig_dist:.3e}"),
    );
    res.check(
        "hull-violated-by-1",
        (hull_dist - 1.0).abs() <= 1e-10,
        format!("distance from 1-i to hull [1,2]: {hull_dist:.12}"),
    );
    res.notes.push(
        "the convex-hull enclosure fails for non-canonical duals: eigenvalue 1-i \
         sits at distance 1 from hull [1, 2]"
            .into(),
    );
    Ok(res)
}

/// Parseval union of a `√A`-scaled ONB (even positions) and a `√(1-A)`-scaled
/// ONB (odd positions); 0-1 symbols give spectra in `[0,1-A] ∪ [A,1]`.
pub fn example_4_2_frame(d: usize, a: f64, seed: u64, aligned: bool) -> Result<Frame> {
    if !(a > 0.5 && a <= 1.0) {
        return Err(Error::CriterionVoid(format!(
            "A must be in (1/2, 1], got {a}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = frames::random_unitary(d, &mut rng);
    let v = if aligned {
        u.clone()
    } else {
        frames::random_unitary(d, &mut rng)
    };
    let alphas = [C64::new(a.sqrt(), 0.0), C64::new((1.0 - a).sqrt(), 0.0)];
    frames::scaled_onb_union(d, &alphas, &[u, v])
}

pub fn run_example_4_2(
    d: usize,
    a: f64,
    m: &Symbol,
    seed: u64,
    aligned: bool,
) -> Result<ExperimentResult> {
    let phi = example_4_2_frame(d, a, seed, aligned)?;
    if m.len() != 2 * d {
        return Err(Error::Dimension(format!(
            "symbol length {} != 2d = {}",
            m.len(),
            2 * d
        )));
    }
    if m.values
        .iter()
        .any(|v| v.norm() > 1e-12 && (v - C64::new(1.0, 0.0)).norm() > 1e-12)
    {
        return Err(Error::Validation("symbol must be 0-1 valued".into()));
    }
    let mult = multipliers::assemble(m, &phi, &phi)?;
    let spec = multipliers::spectrum_of(&mult)?;
    let max_im = spec.max_imag_abs();
    let mut res = ExperimentResult::new("example_4_2", d, spec);
    res.check(
        "eigenvalues-real",
        max_im <= 1e-8,
        format!("max |imag| {max_im:.3e}"),
    );
    res.add_region(enclosures::hull_enclosure(m, &phi)?);
    res.add_region(enclosures::riesz_split_region_01(a)?);
    if aligned {
        // aligned ONBs make M diagonal with entries A·m_even + (1-A)·m_odd
        let allowed = [0.0, 1.0 - a, a, 1.0];
        let worst = res
            .eigenvalues
            .values()
            .iter()
            .map(|z| {
                allowed
                    .iter()
                    .map(|&t| (z - C64::new(t, 0.0)).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        res.check(
            "aligned-four-point-spectrum",
            worst <= 1e-8,
            format!("max distance to {{0, 1-A, A, 1}}: {worst:.3e}"),
        );
    }
    res.notes
        .push(format!("A = {a}, aligned = {aligned}, seed = {seed}"));
    Ok(res)
}

/// 0-1 symbol of length `len` drawn from a seeded RNG.
pub fn random_zero_one_symbol(len: usize, seed: u64) -> Symbol {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Symbol::new(
        (0..len)
            .map(|_| C64::new(if rng.gen::<bool>() { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    )
}

pub fn example_5_2_symbol(len: usize) -> Symbol {
    let third = 1.0 / 3.0;
    Symbol::periodic(
        &[
            C64::new(0.0, 0.0),
            C64::new(third, 0.0),
            C64::new(2.0 * third, 0.0),
            C64::new(1.0, 0.0),
        ],
        len,
    )
}

/// Half-weight union of two ONBs with the period-4 symbol
/// `(0, 1/3, 2/3, 1)`: the spectrum lies in `[1/6, 5/6]`.
pub fn run_example_5_2(d: usize, seed: u64, aligned: bool) -> Result<ExperimentResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = frames::random_unitary(d, &mut rng);
    let v = if aligned {
        u.clone()
    } else {
        frames::random_unitary(d, &mut rng)
    };
    let a = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let phi = frames::scaled_onb_union(d, &[a, a], &[u, v])?;
    let m = example_5_2_symbol(2 * d);
    let mult = multipliers::assemble(&m, &phi, &phi)?;
    let spec = multipliers::spectrum_of(&mult)?;
    let max_im = spec.max_imag_abs();
    let mut res = ExperimentResult::new("example_5_2", d, spec);
    res.check(
        "eigenvalues-real",
        max_im <= 1e-8,
        format!("max |imag| {max_im:.3e}"),
    );
    res.add_region(enclosures::hull_enclosure(&m, &phi)?);
    let data = OnbUnionData::from_symbol(&m, &[a.re, a.re], None)?;
    let interval = enclosures::onb_union_interval(&data)?;
    res.add_region(interval);
    if aligned {
        let vals = res.eigenvalues.values();
        let lo_gap = vals
            .iter()
            .map(|z| (z - C64::new(1.0 / 6.0, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        let hi_gap = vals
            .iter()
            .map(|z| (z - C64::new(5.0 / 6.0, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        res.check(
            "endpoints-attained",
            lo_gap <= 1e-12 && hi_gap <= 1e-12,
            format!("gap to 1/6: {lo_gap:.3e}, gap to 5/6: {hi_gap:.3e}"),
        );
    }
    res.notes
        .push(format!("aligned = {aligned}, seed = {seed}"));
    Ok(res)
}

pub fn remark_5_4_symbol(pairs: usize) -> Symbol {
    let mut values = Vec::with_capacity(2 * pairs);
    for i in 0..pairs {
        let t = 1.0 / (i as f64 + 2.0);
        values.push(C64::new(t, 0.0));
        values.push(C64::new(2.0 - t, 0.0));
    }
    Symbol::new(values)
}

/// Truncation of the `m_{2n-1} = 1/(n+1)`, `m_{2n} = 2 - 1/(n+1)` symbol
/// on a half-weight two-ONB union: spectrum in `[3/4, 5/4]`, invertible.
pub fn run_remark_5_4(pairs: usize, seed: u64) -> Result<ExperimentResult> {
    let d = pairs;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = frames::random_unitary(d, &mut rng);
    let v = frames::random_unitary(d, &mut rng);
    let a = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let phi = frames::scaled_onb_union(d, &[a, a], &[u, v])?;
    let m = remark_5_4_symbol(pairs);
    let mult = multipliers::assemble(&m, &phi, &phi)?;
    let spec = multipliers::spectrum_of(&mult)?;

    let mut res = ExperimentResult::new("remark_5_4", d, spec);
    let data = OnbUnionData::from_symbol(&m, &[a.re, a.re], None)?;
    let finite = enclosures::onb_union_interval(&data)?;
    res.notes.push(format!(
        "finite-N interval {:?}; the limiting interval is [3/4, 5/4]",
        finite.kind
    ));
    res.add_region(finite);
    res.add_region(Region {
        kind: RegionKind::Interval { lo: 0.75, hi: 1.25 },
        provenance: "onb-union-interval(limit)".into(),
    });

    // invertibility by both routes
    let indices: Vec<usize> = (0..2 * pairs).filter(|i| i % 2 == 1).collect();
    let split = RieszSplitData::compute(&phi, &phi, &indices)?;
    let riesz_fires = enclosures::riesz_split_invertible(&m, &indices, &split);
    res.check(
        "riesz-split-invertible",
        riesz_fires,
        format!("{split:?}"),
    );
    let onb_fires = enclosures::onb_union_resolvent(C64::new(0.0, 0.0), &data);
    res.check("onb-union-excludes-zero", onb_fires, "0 certified in resolvent");
    let (_, smin) = multipliers::is_invertible(&mult)?;
    res.check(
        "sigma-min",
        smin >= 0.75 - 1e-8,
        format!("sigma_min {smin:.12}"),
    );
    Ok(res)
}

/// Gabor `(d, a, b)` ONB refined in time by `n`: a union of `n` Riesz
/// bases; the residue-class split feeds the Riesz-split criterion.
pub fn run_gabor_remark_4_3(d: usize, a: usize, b: usize, n: usize) -> Result<ExperimentResult> {
    let base = frames::GaborParams::with_default_window(d, a, b);
    let base_frame = frames::gabor_frame(&base)?;
    let base_bounds = frames::frame_bounds(&base_frame)?;
    if n == 0 || !a.is_multiple_of(n) {
        return Err(Error::Validation(format!(
            "refinement {n} must divide the time step {a}"
        )));
    }
    let refined = frames::GaborParams {
        time_step: a / n,
        ..base.clone()
    };
    let frame = frames::gabor_frame(&refined)?;
    let classes = frames::gabor_riesz_split(&refined, n)?;
    let mut class_bounds = Vec::with_capacity(n);
    for class in &classes {
        class_bounds.push(frames::riesz_lower_bound(&frames::subfamily(
            &frame, class,
        )?)?);
    }

    // 0-1 symbol supported on residue class 0, fed to the split criterion
    let mut mv = vec![C64::new(0.0, 0.0); frame.count];
    for &i in &classes[0] {
        mv[i] = C64::new(1.0, 0.0);
    }
    let m = Symbol::new(mv);
    let dual = frames::canonical_dual(&frame)?;
    let mult = multipliers::assemble(&m, &dual.phi, &dual.psi)?;
    let spec = multipliers::spectrum_of(&mult)?;
    let split = RieszSplitData::compute(&dual.phi, &dual.psi, &classes[0])?;
    let certified_eig = spec
        .values()
        .iter()
        .filter(|&&z| enclosures::riesz_split_resolvent(z, &m, &classes[0], &split))
        .count();
    let eig_total = spec.len();

    let mut res = ExperimentResult::new("gabor_remark_4_3", d, spec);
    res.check(
        "base-is-onb",
        (base_bounds.lower - 1.0).abs() <= 1e-10 && (base_bounds.upper - 1.0).abs() <= 1e-10,
        format!("base bounds ({}, {})", base_bounds.lower, base_bounds.upper),
    );
    let worst_class = class_bounds
        .iter()
        .map(|&x| (x - 1.0).abs())
        .fold(0.0, f64::max);
    res.check(
        "residue-classes-riesz",
        worst_class <= 1e-10,
        format!("class lower bounds {class_bounds:?}"),
    );
    res.check(
        "no-eigenvalue-certified-resolvent",
        certified_eig == 0,
        format!("{certified_eig} of {eig_total} eigenvalues certified"),
    );
    res.add_region(enclosures::bessel_disk(&m, &dual.phi, &dual.psi)?);
    res.notes.push(format!(
        "G(g, {a}, {b}) on Z_{d} refined to time step {}: union of {n} Riesz bases",
        a / n
    ));
    Ok(res)
}

/// Bounded search for a multiplier whose numerical range leaves the convex
/// hull of the symbol while the spectrum stays inside. Absence of a
/// witness is reported, not failed.
pub fn run_numrange_remark_ii(seed: u64, budget: usize) -> Result<ExperimentResult> {
    let d = 2;
    let mut found: Option<(u64, f64)> = None;
    let mut spec_of_witness = Spectrum::new(vec![]);
    for k in 0..budget {
        let trial = trial_seed(seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let count = 3;
        let mut synth: Array2<C64> = Array2::zeros((d, count));
        for i in 0..d {
            for j in 0..count {
                synth[(i, j)] = C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let Ok(phi) = Frame::from_synthesis(synth, format!("numrange-{trial}")) else {
            continue;
        };
        if frames::frame_bounds(&phi).is_err() {
            continue;
        }
        let m = Symbol::new(
            (0..count)
                .map(|_| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
                .collect(),
        );
        let Ok(dual) = frames::canonical_dual(&phi) else {
            continue;
        };
        let Ok(mult) = multipliers::assemble(&m, &dual.phi, &dual.psi) else {
            continue;
        };
        let Ok(hull) = enclosures::hull_enclosure(&m, &phi) else {
            continue;
        };
        let Ok(numrange) = multipliers::numerical_range_hull(&mult, 256) else {
            continue;
        };
        let excess = numrange
            .vertices
            .iter()
            .map(|&v| hull.signed_margin(v))
            .fold(f64::NEG_INFINITY, f64::max);
        let Ok(spec) = multipliers::spectrum_of(&mult) else {
            continue;
        };
        let spec_inside = spec
            .values()
            .iter()
            .all(|&z| hull.signed_margin(z) <= 1e-9);
        if excess > 1e-6 && spec_inside {
            found = Some((trial, excess));
            spec_of_witness = spec;
            break;
        }
    }
    let mut res = ExperimentResult::new("numrange_remark_ii", d, spec_of_witness);
    match found {
        Some((trial, excess)) => {
            res.check(
                "witness-found",
                true,
                format!("seed {trial}: numerical range exceeds symbol hull by {excess:.6e}"),
            );
        }
        None => {
            res.notes.push(format!(
                "no witness found in {budget} seeded trials; reported, not failed"
            ));
        }
    }
    Ok(res)
}

fn random_symbol(family: SymbolFamily, len: usize, rng: &mut ChaCha8Rng) -> Symbol {
    Symbol::new(
        (0..len)
            .map(|_| match family {
                SymbolFamily::RealInterval => C64::new(rng.gen::<f64>(), 0.0),
                SymbolFamily::ZeroOne => {
                    C64::new(if rng.gen::<bool>() { 1.0 } else { 0.0 }, 0.0)
                }
                SymbolFamily::ComplexDisk => loop {
                    let z = C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                    if z.norm() <= 1.0 {
                        break z;
                    }
                },
            })
            .collect(),
    )
}

struct TrialFrame {
    frame: Frame,
    /// branch data when the frame is a scaled-ONB union
    onb_union: Option<Vec<f64>>,
}

fn random_frame(family: FrameFamily, dim: usize, rng: &mut ChaCha8Rng) -> Result<TrialFrame> {
    match family {
        FrameFamily::Parseval => {
            let count = dim + 1 + rng.gen_range(0..dim);
            let mut synth: Array2<C64> = Array2::zeros((dim, count));
            for i in 0..dim {
                for j in 0..count {
                    synth[(i, j)] =
                        C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                }
            }
            let raw = Frame::from_synthesis(synth, "trial-parseval")?;
            Ok(TrialFrame {
                frame: frames::canonical_parseval(&raw)?,
                onb_union: None,
            })
        }
        FrameFamily::RieszUnion => {
            let f1 = frames::random_riesz(dim, 0.5, 2.0, rng.gen())?;
            let f2 = frames::random_riesz(dim, 0.5, 2.0, rng.gen())?;
            let mut synth: Array2<C64> = Array2::zeros((dim, 2 * dim));
            for i in 0..dim {
                for j in 0..dim {
                    synth[(i, j)] = f1.synthesis[(i, j)];
                    synth[(i, dim + j)] = f2.synthesis[(i, j)];
                }
            }
            Ok(TrialFrame {
                frame: Frame::from_synthesis(synth, "trial-riesz-union")?,
                onb_union: None,
            })
        }
        FrameFamily::OnbUnion => {
            let t: f64 = rng.gen_range(0.2..0.8);
            let alphas = [t.sqrt(), (1.0 - t).sqrt()];
            let u = frames::random_unitary(dim, rng);
            let v = frames::random_unitary(dim, rng);
            let frame = frames::scaled_onb_union(
                dim,
                &[C64::new(alphas[0], 0.0), C64::new(alphas[1], 0.0)],
                &[u, v],
            )?;
            Ok(TrialFrame {
                frame,
                onb_union: Some(alphas.to_vec()),
            })
        }
        FrameFamily::Gabor => {
            let presets = [(16usize, 4usize, 4usize), (16, 2, 4), (8, 2, 4), (12, 3, 4)];
            let (d, a, b) = presets[rng.gen_range(0..presets.len())];
            let p = frames::GaborParams::with_default_window(d, a, b);
            Ok(TrialFrame {
                frame: frames::gabor_frame(&p)?,
                onb_union: None,
            })
        }
    }
}

/// One randomized soundness trial: build a frame and symbol, assemble the
/// canonical-dual multiplier, and check every applicable enclosure.
fn soundness_trial(cfg: &TrialConfig, index: usize) -> Result<ExperimentResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, index));
    let dim = rng.gen_range(cfg.dim_lo..=cfg.dim_hi);
    let tf = random_frame(cfg.frame_family, dim, &mut rng)?;
    let phi = tf.frame;
    let m = random_symbol(cfg.symbol_family, phi.count, &mut rng);
    let dual = frames::canonical_dual(&phi)?;
    let mult = multipliers::assemble(&m, &dual.phi, &dual.psi)?;
    let spec = multipliers::spectrum_of(&mult)?;

    let mut res = ExperimentResult::new(&format!("soundness_{index}"), phi.dim, spec);
    res.add_region(enclosures::bessel_disk(&m, &dual.phi, &dual.psi)?);
    res.add_region(enclosures::hull_enclosure(&m, &phi)?);
    let (mu, r) = numerics::min_enclosing_disk(&m.values)?;
    res.add_region(enclosures::dual_disk_item1(&m, &dual.phi, &dual.psi, mu, r)?);
    if m.is_real(1e-12) {
        res.add_region(enclosures::dual_disk_item2(&m, &dual.phi, &dual.psi)?);
    }

    // Eq. (1) norm bound
    let bound = multipliers::norm_bound(&m, &dual.phi, &dual.psi)?;
    let norm = multipliers::spectral_norm(&mult)?;
    res.check(
        "norm-bound",
        norm <= bound + 1e-9,
        format!("||M|| = {norm:.12} vs bound {bound:.12}"),
    );

    // predicate soundness: no eigenvalue may be certified resolvent
    let certified = res
        .eigenvalues
        .values()
        .iter()
        .filter(|&&z| {
            enclosures::pert_ii_resolvent_predicate(z, mu, &m, &dual.phi, &dual.psi)
                .unwrap_or(false)
        })
        .count();
    res.check(
        "pert-ii-predicate-sound",
        certified == 0,
        format!("{certified} eigenvalues certified"),
    );

    if let Some(alphas) = tf.onb_union {
        let data = OnbUnionData::from_symbol(&m, &alphas, None)?;
        let certified = res
            .eigenvalues
            .values()
            .iter()
            .filter(|&&z| enclosures::onb_union_resolvent(z, &data))
            .count();
        res.check(
            "onb-union-predicate-sound",
            certified == 0,
            format!("{certified} eigenvalues certified"),
        );
        if m.is_real(1e-12) {
            res.add_region(enclosures::onb_union_interval(&data)?);
        }
        // Thm 4.1 on the first branch (an ONB union splits into Riesz bases)
        let indices: Vec<usize> = (0..phi.count).filter(|i| i % 2 == 0).collect();
        let split = RieszSplitData::compute(&dual.phi, &dual.psi, &indices)?;
        let certified = res
            .eigenvalues
            .values()
            .iter()
            .filter(|&&z| enclosures::riesz_split_resolvent(z, &m, &indices, &split))
            .count();
        res.check(
            "riesz-split-predicate-sound",
            certified == 0,
            format!("{certified} eigenvalues certified"),
        );
    }
    Ok(res)
}

/// Randomized soundness harness; trials run in parallel and are merged by
/// index, so the output is deterministic.
pub fn run_random_soundness(cfg: &TrialConfig) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| soundness_trial(cfg, i))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..cfg.trials).map(|i| soundness_trial(cfg, i)).collect()
    }
}

/// Formats with 17 significant digits — round-trip exact for f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn region_plot_rows(region: &Region) -> Vec<(f64, f64, u8)> {
    match &region.kind {
        RegionKind::GridMask { mask } => {
            let mut rows = Vec::with_capacity(mask.nx * mask.ny);
            for iy in 0..mask.ny {
                for ix in 0..mask.nx {
                    let p = mask.point(ix, iy);
                    rows.push((p.re, p.im, mask.certified[iy * mask.nx + ix] as u8));
                }
            }
            rows
        }
        RegionKind::Disk { center, radius } => (0..=360)
            .map(|k| {
                let t = k as f64 * std::f64::consts::PI / 180.0;
                (center.re + radius * t.cos(), center.im + radius * t.sin(), 0)
            })
            .collect(),
        RegionKind::Interval { lo, hi } => {
            let n = 100;
            (0..=n)
                .map(|k| (lo + (hi - lo) * k as f64 / n as f64, 0.0, 0))
                .collect()
        }
        RegionKind::IntervalUnion { intervals } => intervals
            .iter()
            .flat_map(|&(lo, hi)| {
                let n = 50;
                (0..=n).map(move |k| (lo + (hi - lo) * k as f64 / n as f64, 0.0, 0))
            })
            .collect(),
        RegionKind::Polygon { polygon } => {
            let mut rows: Vec<(f64, f64, u8)> =
                polygon.vertices.iter().map(|v| (v.re, v.im, 0)).collect();
            if let Some(&first) = rows.first() {
                rows.push(first);
            }
            rows
        }
        RegionKind::WholePlane => vec![],
    }
}

/// Writes `<name>.json`, `<name>_spectrum.csv`, `<name>_region.csv`.
pub fn write_artifacts(out_dir: &Path, res: &ExperimentResult) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let json = serde_json::to_string_pretty(res)?;
    std::fs::write(out_dir.join(format!("{}.json", res.name)), json + "\n")?;

    let mut spectrum_csv = String::from("re,im\n");
    for z in res.eigenvalues.values() {
        spectrum_csv.push_str(&format!("{},{}\n", fmt17(z.re), fmt17(z.im)));
    }
    std::fs::write(
        out_dir.join(format!("{}_spectrum.csv", res.name)),
        spectrum_csv,
    )?;

    let mut region_csv = String::from("x,y,certified\n");
    for report in &res.regions {
        for (x, y, c) in region_plot_rows(&report.region) {
            region_csv.push_str(&format!("{},{},{}\n", fmt17(x), fmt17(y), c));
        }
    }
    std::fs::write(out_dir.join(format!("{}_region.csv", res.name)), region_csv)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Summary {
    pub fn line(&self) -> String {
        if self.passed == self.total {
            format!("PASS {}/{}", self.passed, self.total)
        } else {
            format!("FAIL {}/{}", self.total - self.passed, self.total)
        }
    }
}

pub const EXPERIMENT_NAMES: &[&str] = &[
    "footnote1",
    "counterexample_s3",
    "example_4_2",
    "example_5_2",
    "remark_5_4",
    "gabor_remark_4_3",
    "numrange_remark_ii",
];

/// Runs one named experiment with default parameters.
pub fn run_named(name: &str, seed: u64) -> Result<ExperimentResult> {
    match name {
        "footnote1" => {
            let d = 16;
            let m = Symbol::real(
                &(1..=d).map(|i| i as f64 / d as f64).collect::<Vec<_>>(),
            );
            run_footnote1(d, &m, seed)
        }
        "counterexample_s3" => run_counterexample_s3(DEFAULT_DIM),
        "example_4_2" => {
            let d = DEFAULT_DIM;
            let m = random_zero_one_symbol(2 * d, seed.wrapping_add(1));
            run_example_4_2(d, 0.75, &m, seed, false)
        }
        "example_5_2" => run_example_5_2(DEFAULT_DIM, seed, false),
        "remark_5_4" => run_remark_5_4(DEFAULT_DIM, seed),
        "gabor_remark_4_3" => run_gabor_remark_4_3(64, 8, 8, 2),
        "numrange_remark_ii" => run_numrange_remark_ii(seed, 10_000),
        other => Err(Error::Validation(format!(
            "unknown experiment '{other}'; known: {}",
            EXPERIMENT_NAMES.join(", ")
        ))),
    }
}

/// Runs every named experiment, writing artifacts to `out_dir`.
pub fn run_all(out_dir: &Path, seed: u64) -> Result<Summary> {
    let mut summary = Summary {
        passed: 0,
        total: 0,
        failures: Vec::new(),
    };
    for name in EXPERIMENT_NAMES {
        let res = run_named(name, seed)?;
        write_artifacts(out_dir, &res)?;
        summary.total += 1;
        if res.pass {
            summary.passed += 1;
        } else {
            summary.failures.push(res.name.clone());
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn footnote1_matches_symbol() {
        let d = 8;
        let m = Symbol::real(&(1..=d).map(|i| i as f64 / d as f64).collect::<Vec<_>>());
        let res = run_footnote1(d, &m, 42).unwrap();
        assert!(res.pass, "{:?}", res.checks);
        // eigenvalues are exactly {1/8, ..., 1} sorted
        for (k, z) in res.eigenvalues.values().iter().enumerate() {
            assert_abs_diff_eq!(z.re, (k + 1) as f64 / 8.0, epsilon = 1e-8);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn footnote1_constant_and_permutation() {
        let d = 6;
        let res = run_footnote1(d, &Symbol::constant(C64::new(0.3, 0.0), d), 7).unwrap();
        assert!(res.pass);
        let m1 = Symbol::real(&[0.1, 0.5, 0.9, 0.2, 0.7, 0.4]);
        let m2 = Symbol::real(&[0.9, 0.7, 0.5, 0.4, 0.2, 0.1]);
        let r1 = run_footnote1(d, &m1, 5).unwrap();
        let r2 = run_footnote1(d, &m2, 5).unwrap();
        assert!(r1.pass && r2.pass);
        let worst = r1
            .eigenvalues
            .values()
            .iter()
            .zip(r2.eigenvalues.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8);
    }

    #[test]
    fn counterexample_s3_passes() {
        let res = run_counterexample_s3(16).unwrap();
        assert!(res.pass, "{:?}", res.checks);
    }

    #[test]
    fn example_4_2_aligned_and_random() {
        let d = 16;
        let m = random_zero_one_symbol(2 * d, 99);
        let aligned = run_example_4_2(d, 0.75, &m, 3, true).unwrap();
        assert!(aligned.pass, "{:?}", aligned.checks);
        let random = run_example_4_2(d, 0.75, &m, 3, false).unwrap();
        assert!(random.pass, "{:?}", random.checks);
        // m ≡ 1 gives the identity
        let ones = Symbol::constant(C64::new(1.0, 0.0), 2 * d);
        let res = run_example_4_2(d, 0.75, &ones, 3, false).unwrap();
        for z in res.eigenvalues.values() {
            assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn example_5_2_aligned_attains_endpoints() {
        let res = run_example_5_2(8, 1, true).unwrap();
        assert!(res.pass, "{:?}", res.checks);
        for z in res.eigenvalues.values() {
            let to_lo = (z.re - 1.0 / 6.0).abs();
            let to_hi = (z.re - 5.0 / 6.0).abs();
            assert!(to_lo <= 1e-12 || to_hi <= 1e-12);
        }
        let random = run_example_5_2(8, 1, false).unwrap();
        assert!(random.pass);
    }

    #[test]
    fn example_5_2_minimal_dimension() {
        let res = run_example_5_2(2, 5, false).unwrap();
        assert!(res.pass, "{:?}", res.checks);
        assert_eq!(res.eigenvalues.len(), 2);
    }

    #[test]
    fn remark_5_4_passes() {
        let res = run_remark_5_4(16, 9).unwrap();
        assert!(res.pass, "{:?} {:?}", res.checks, res.regions.iter().map(|r| (r.verdict, r.worst_margin)).collect::<Vec<_>>());
    }

    #[test]
    fn gabor_remark_4_3_passes() {
        let res = run_gabor_remark_4_3(16, 4, 4, 2).unwrap();
        assert!(res.pass, "{:?}", res.checks);
    }

    #[test]
    fn random_soundness_small_run() {
        for family in [
            FrameFamily::Parseval,
            FrameFamily::RieszUnion,
            FrameFamily::OnbUnion,
            FrameFamily::Gabor,
        ] {
            for symbols in [
                SymbolFamily::RealInterval,
                SymbolFamily::ZeroOne,
                SymbolFamily::ComplexDisk,
            ] {
                let cfg = TrialConfig {
                    seed: 1234,
                    dim_lo: 2,
                    dim_hi: 10,
                    frame_family: family,
                    symbol_family: symbols,
                    trials: 5,
                };
                let results = run_random_soundness(&cfg).unwrap();
                for r in &results {
                    assert!(r.pass, "{family:?}/{symbols:?}: {:?} {:?}", r.checks, r.regions.iter().map(|x| (x.region.provenance.clone(), x.worst_margin)).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn soundness_is_deterministic() {
        let cfg = TrialConfig {
            seed: 77,
            dim_lo: 2,
            dim_hi: 8,
            frame_family: FrameFamily::Parseval,
            symbol_family: SymbolFamily::ComplexDisk,
            trials: 4,
        };
        let a = run_random_soundness(&cfg).unwrap();
        let b = run_random_soundness(&cfg).unwrap();
        let ja = serde_json::to_string(&a.iter().map(|r| &r.eigenvalues).collect::<Vec<_>>()).unwrap();
        let jb = serde_json::to_string(&b.iter().map(|r| &r.eigenvalues).collect::<Vec<_>>()).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn trial_config_validation() {
        let mut cfg = TrialConfig {
            seed: 0,
            dim_lo: 1,
            dim_hi: 8,
            frame_family: FrameFamily::Parseval,
            symbol_family: SymbolFamily::RealInterval,
            trials: 1,
        };
        assert!(cfg.validate().is_err());
        cfg.dim_lo = 2;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn artifacts_are_written_and_deterministic() {
        let dir = std::env::temp_dir().join("framespec-verify-test");
        let _ = std::fs::remove_dir_all(&dir);
        let res = run_example_5_2(4, 3, true).unwrap();
        write_artifacts(&dir, &res).unwrap();
        let j1 = std::fs::read(dir.join("example_5_2.json")).unwrap();
        let s1 = std::fs::read(dir.join("example_5_2_spectrum.csv")).unwrap();
        let res2 = run_example_5_2(4, 3, true).unwrap();
        write_artifacts(&dir, &res2).unwrap();
        assert_eq!(j1, std::fs::read(dir.join("example_5_2.json")).unwrap());
        assert_eq!(s1, std::fs::read(dir.join("example_5_2_spectrum.csv")).unwrap());
        assert!(String::from_utf8(s1).unwrap().starts_with("re,im\n"));
        let _ = std::fs::remove_dir_all(&dir);
    }
}
