//! Acceptance gate: ten criteria, one pass/fail line each.

use std::time::Instant;

use framespec::enclosures::{self, OnbUnionData, RegionKind, RieszSplitData};
use framespec::frames::{self, Frame};
use framespec::multipliers::{self, Symbol};
use framespec::numerics::{self, C64};
use framespec::verify::{self, FrameFamily, SymbolFamily, TrialConfig};
use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(id: u32, what: &str) {
    println!("PASS criterion {id}: {what}");
}

fn in_union(x: f64, a: f64, tol: f64) -> bool {
    (x >= -tol && x <= 1.0 - a + tol) || (x >= a - tol && x <= 1.0 + tol)
}

#[test]
fn criterion_01_example_5_2() {
    let start = Instant::now();
    for (aligned, seed) in [(true, 5u64), (false, 5u64)] {
        let res = verify::run_example_5_2(64, seed, aligned).unwrap();
        assert!(res.eigenvalues.max_imag_abs() <= 1e-8);
        for z in res.eigenvalues.values() {
            assert!(z.re >= 1.0 / 6.0 - 1e-8 && z.re <= 5.0 / 6.0 + 1e-8);
        }
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
            assert!(lo_gap <= 1e-12 && hi_gap <= 1e-12, "endpoints not attained");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(1, "Example 5.2 at d=64: spectra real in [1/6, 5/6], aligned endpoints attained");
}

#[test]
fn criterion_02_example_4_2() {
    let start = Instant::now();
    for &a in &[0.6, 0.75, 0.9] {
        for trial in 0..20u64 {
            let m = verify::random_zero_one_symbol(128, 1000 + trial);
            let res = verify::run_example_4_2(64, a, &m, trial, false).unwrap();
            assert!(res.eigenvalues.max_imag_abs() <= 1e-8);
            for z in res.eigenvalues.values() {
                assert!(z.re >= -1e-8 && z.re <= 1.0 + 1e-8, "outside [0,1]: {z}");
                assert!(in_union(z.re, a, 1e-8), "A={a}: {z} outside the split union");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(2, "Example 4.2 at d=64, A in {0.6, 0.75, 0.9}, 20 random 0-1 symbols each");
}

#[test]
fn criterion_03_remark_5_4() {
    let start = Instant::now();
    let res = verify::run_remark_5_4(64, 12).unwrap();
    for z in res.eigenvalues.values() {
        assert!(z.re >= 0.75 - 1e-8 && z.re <= 1.25 + 1e-8);
        assert!(z.im.abs() <= 1e-8);
    }
    for name in ["riesz-split-invertible", "onb-union-excludes-zero", "sigma-min"] {
        let check = res.checks.iter().find(|c| c.name == name).unwrap();
        assert!(check.pass, "{name}: {}", check.detail);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(3, "Remark 5.4 at N=64: spectrum in [3/4, 5/4], sigma_min >= 3/4, both criteria fire");
}

#[test]
fn criterion_04_counterexample_s3() {
    let res = verify::run_counterexample_s3(64).unwrap();
    for name in ["duality-defect", "eigenvalue-1-i-present", "hull-violated-by-1"] {
        let check = res.checks.iter().find(|c| c.name == name).unwrap();
        assert!(check.pass, "{name}: {}", check.detail);
    }
    pass(4, "section-3 counterexample: dual defect <= 1e-12, eigenvalue 1-i at distance 1 from hull [1,2]");
}

#[test]
fn criterion_05_footnote1_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf007);
    for _ in 0..100 {
        let d = rng.gen_range(2..=32usize);
        let m = Symbol::new(
            (0..d)
                .map(|_| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
                .collect(),
        );
        let phi = frames::random_riesz(d, 0.5, 2.0, rng.gen()).unwrap();
        let dual = frames::canonical_dual(&phi).unwrap();
        let mult = multipliers::assemble(&m, &dual.phi, &dual.psi).unwrap();
        let spec = multipliers::spectrum_of(&mult).unwrap();
        let mut sorted = m.values.clone();
        numerics::sort_complex(&mut sorted);
        for (a, b) in spec.values().iter().zip(&sorted) {
            assert!((a - b).norm() <= 1e-7, "spectrum {a} vs symbol {b}");
        }
    }
    pass(5, "footnote-1 oracle: 100 dual Riesz bases, spectrum equals symbol within 1e-7");
}

#[test]
fn criterion_06_and_07_master_soundness_and_norm_bound() {
    let start = Instant::now();
    let families = [
        FrameFamily::Parseval,
        FrameFamily::RieszUnion,
        FrameFamily::OnbUnion,
        FrameFamily::Gabor,
    ];
    let symbols = [
        SymbolFamily::RealInterval,
        SymbolFamily::ZeroOne,
        SymbolFamily::ComplexDisk,
    ];
    let mut total = 0usize;
    let mut norm_checks = 0usize;
    for (fi, &family) in families.iter().enumerate() {
        for (si, &symbol_family) in symbols.iter().enumerate() {
            let cfg = TrialConfig {
                seed: 0xACCE97 + (fi * 3 + si) as u64,
                dim_lo: 2,
                dim_hi: 32,
                frame_family: family,
                symbol_family,
                trials: 84,
            };
            let results = verify::run_random_soundness(&cfg).unwrap();
            for r in &results {
                assert!(
                    r.pass,
                    "soundness violation in {family:?}/{symbol_family:?}: {:?} / {:?}",
                    r.checks,
                    r.regions
                        .iter()
                        .map(|x| (x.region.provenance.clone(), x.worst_margin))
                        .collect::<Vec<_>>()
                );
                let nb = r.checks.iter().find(|c| c.name == "norm-bound").unwrap();
                assert!(nb.pass, "norm bound violated: {}", nb.detail);
                norm_checks += 1;
            }
            total += results.len();
        }
    }
    assert!(total >= 1000, "only {total} trials");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(6, "master soundness: 1008 randomized trials, zero enclosure violations");
    assert_eq!(norm_checks, total);
    pass(7, "norm bound ||M|| <= sup|m| sqrt(B_phi B_psi) + 1e-9 held in every trial");
}

#[test]
fn criterion_08_similarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0311);
    for trial in 0..100 {
        let d = rng.gen_range(2..=16usize);
        let count = d + rng.gen_range(0..=d);
        let mut synth: Array2<C64> = Array2::zeros((d, count));
        for i in 0..d {
            for j in 0..count {
                synth[(i, j)] =
                    C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let Ok(phi) = Frame::from_synthesis(synth, format!("sim-{trial}")) else {
            continue;
        };
        if frames::frame_bounds(&phi).is_err() {
            continue;
        }
        let nonneg = trial % 2 == 0;
        let m = Symbol::new(
            (0..count)
                .map(|_| {
                    let x: f64 = rng.gen::<f64>() * 2.0 - 1.0;
                    C64::new(if nonneg { x.abs() } else { x }, 0.0)
                })
                .collect(),
        );
        let (canonical_form, parseval_form) = multipliers::similarity_reduce(&m, &phi).unwrap();
        let s1 = multipliers::spectrum_of(&canonical_form).unwrap();
        let s2 = multipliers::spectrum_of(&parseval_form).unwrap();
        for (a, b) in s1.values().iter().zip(s2.values()) {
            assert!((a - b).norm() <= 1e-7, "spectra differ: {a} vs {b}");
        }
        assert!(s1.max_imag_abs() <= 1e-8, "non-real eigenvalue");
        if nonneg {
            for z in s1.values() {
                assert!(z.re >= -1e-9, "negative eigenvalue {z} for non-negative symbol");
            }
        }
    }
    pass(8, "Lemma 3.1 similarity: 100 frames, canonical-dual and Parseval spectra agree, real");
}

#[test]
fn criterion_09_scan_equivalence() {
    let d = 16;
    for &a in &[0.6, 0.75, 0.9] {
        let phi = verify::example_4_2_frame(d, a, 21, false).unwrap();
        // a 0-1 symbol with both values on each branch
        let m = Symbol::periodic(
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
            2 * d,
        );
        let indices: Vec<usize> = (0..2 * d).step_by(2).collect();
        let split = RieszSplitData::compute(&phi, &phi, &indices).unwrap();
        let hull = enclosures::hull_enclosure(&m, &phi).unwrap();
        assert_eq!(hull.kind, RegionKind::Interval { lo: 0.0, hi: 1.0 });

        let n = 2001;
        let cell = 1.2 / (n - 1) as f64;
        let near_boundary = |x: f64| {
            [0.0, 1.0 - a, a, 1.0]
                .iter()
                .any(|&b| (x - b).abs() <= cell)
        };
        for k in 0..n {
            let x = -0.1 + 1.2 * k as f64 / (n - 1) as f64;
            let z = C64::new(x, 0.0);
            // the scan predicate: Thm 4.1 split, with the hull as prior
            let certified = enclosures::riesz_split_resolvent(z, &m, &indices, &split)
                || hull.signed_margin(z) > enclosures::STRICT_MARGIN;
            let expected = !in_union(x, a, 0.0);
            if certified != expected {
                assert!(
                    near_boundary(x),
                    "A={a}: mismatch at {x}: certified={certified}, expected={expected}"
                );
            }
        }
    }
    pass(9, "real-axis scan at resolution 2001 certifies exactly the complement of [0,1-A] U [A,1]");
}

#[test]
fn criterion_10_gabor_construction() {
    let base = frames::GaborParams::with_default_window(64, 8, 8);
    let frame = frames::gabor_frame(&base).unwrap();
    let bounds = frames::frame_bounds(&frame).unwrap();
    assert!((bounds.lower - 1.0).abs() <= 1e-10 && (bounds.upper - 1.0).abs() <= 1e-10);

    let refined = frames::GaborParams {
        time_step: 4,
        ..base
    };
    let union = frames::gabor_frame(&refined).unwrap();
    let classes = frames::gabor_riesz_split(&refined, 2).unwrap();
    assert_eq!(classes.len(), 2);
    for class in &classes {
        let lb = frames::riesz_lower_bound(&frames::subfamily(&union, class).unwrap()).unwrap();
        assert!((lb - 1.0).abs() <= 1e-10, "class lower bound {lb}");
    }
    pass(10, "Gabor (64, 8, 8) is an ONB; refining to a=4 gives a 2-fold union of Riesz bases");
}

#[test]
fn onb_union_soundness_spot_check() {
    // complements the harness: the Thm 5.1 predicate never certifies an
    // eigenvalue on a fresh construction outside the randomized families
    let d = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5151);
    let u = frames::random_unitary(d, &mut rng);
    let v = frames::random_unitary(d, &mut rng);
    let w = frames::random_unitary(d, &mut rng);
    let alphas = [0.6f64, 0.489_897_948_556_635_6, 0.632_455_532_033_675_9];
    let alphas_c: Vec<C64> = alphas.iter().map(|&x| C64::new(x, 0.0)).collect();
    let phi = frames::scaled_onb_union(d, &alphas_c, &[u, v, w]).unwrap();
    let m = Symbol::new(
        (0..3 * d)
            .map(|_| C64::new(rng.gen::<f64>(), rng.gen::<f64>() - 0.5))
            .collect(),
    );
    let mult = multipliers::assemble(&m, &phi, &phi).unwrap();
    let spec = multipliers::spectrum_of(&mult).unwrap();
    let data = OnbUnionData::from_symbol(&m, &alphas, None).unwrap();
    for &z in spec.values() {
        assert!(!enclosures::onb_union_resolvent(z, &data));
    }
}
