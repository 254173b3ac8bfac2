//! Property-based invariants over random inputs.

use framespec::enclosures::{self, Region, RegionKind};
use framespec::frames::{self, Frame};
use framespec::multipliers::{self, Symbol};
use framespec::numerics::{self, C64};
use ndarray::Array2;
use proptest::prelude::*;

fn c64_strategy() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn synthesis_strategy(max_dim: usize) -> impl Strategy<Value = Array2<C64>> {
    (2..=max_dim).prop_flat_map(move |d| {
        (d..=2 * d).prop_flat_map(move |n| {
            proptest::collection::vec(c64_strategy(), d * n).prop_map(move |entries| {
                Array2::from_shape_vec((d, n), entries).unwrap()
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_json_roundtrip(synth in synthesis_strategy(5)) {
        let frame = Frame::from_synthesis(synth, "prop").unwrap();
        let back = Frame::from_json(&frame.to_json()).unwrap();
        prop_assert_eq!(frame.dim, back.dim);
        prop_assert_eq!(frame.count, back.count);
        prop_assert!(numerics::max_abs(&(&frame.synthesis - &back.synthesis)) == 0.0);
    }

    #[test]
    fn canonical_parseval_has_unit_bounds(synth in synthesis_strategy(5)) {
        let frame = Frame::from_synthesis(synth, "prop").unwrap();
        prop_assume!(frames::frame_bounds(&frame).is_ok());
        let rho = frames::canonical_parseval(&frame).unwrap();
        let bounds = frames::frame_bounds(&rho).unwrap();
        prop_assert!((bounds.lower - 1.0).abs() <= 1e-8);
        prop_assert!((bounds.upper - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn spectral_norm_never_exceeds_eq1_bound(
        synth in synthesis_strategy(4),
        symbol_seed in proptest::collection::vec(c64_strategy(), 8..=16),
    ) {
        let frame = Frame::from_synthesis(synth, "prop").unwrap();
        prop_assume!(frames::frame_bounds(&frame).is_ok());
        let dual = frames::canonical_dual(&frame).unwrap();
        let m = Symbol::new(symbol_seed.iter().cycle().take(frame.count).cloned().collect());
        let mult = multipliers::assemble(&m, &dual.phi, &dual.psi).unwrap();
        let norm = multipliers::spectral_norm(&mult).unwrap();
        let bound = multipliers::norm_bound(&m, &dual.phi, &dual.psi).unwrap();
        prop_assert!(norm <= bound + 1e-9, "{} > {}", norm, bound);
    }

    #[test]
    fn convex_hull_contains_generators(points in proptest::collection::vec(c64_strategy(), 1..20)) {
        let hull = numerics::convex_hull(&points).unwrap();
        let region = Region {
            kind: RegionKind::Polygon { polygon: hull },
            provenance: "prop".into(),
        };
        for &p in &points {
            prop_assert!(region.signed_margin(p) <= 1e-9);
        }
    }

    #[test]
    fn min_enclosing_disk_covers_points(points in proptest::collection::vec(c64_strategy(), 1..20)) {
        let (center, radius) = numerics::min_enclosing_disk(&points).unwrap();
        let max_pairwise = points
            .iter()
            .flat_map(|a| points.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        for &p in &points {
            prop_assert!((p - center).norm() <= radius + 1e-9);
        }
        // never larger than the trivial diameter bound
        prop_assert!(radius <= max_pairwise + 1e-9);
    }

    #[test]
    fn interval_intersection_agrees_with_membership(
        a in (-2.0f64..2.0, 0.0f64..2.0),
        b in (-2.0f64..2.0, 0.0f64..2.0),
        probes in proptest::collection::vec(-3.0f64..3.0, 20),
    ) {
        let ra = Region { kind: RegionKind::Interval { lo: a.0, hi: a.0 + a.1 }, provenance: "a".into() };
        let rb = Region { kind: RegionKind::Interval { lo: b.0, hi: b.0 + b.1 }, provenance: "b".into() };
        let both = enclosures::intersect(&[ra.clone(), rb.clone()]).unwrap();
        for &x in &probes {
            let z = C64::new(x, 0.0);
            let expected = ra.contains(z, 0.0) && rb.contains(z, 0.0);
            prop_assert_eq!(both.contains(z, 0.0), expected, "at {}", x);
        }
    }

    #[test]
    fn grid_mask_rle_roundtrip(
        rows in 2usize..8,
        cols in 2usize..8,
        seed in any::<u64>(),
    ) {
        use framespec::enclosures::BoundingBox;
        let bbox = BoundingBox { re_lo: 0.0, re_hi: 1.0, im_lo: 0.0, im_hi: 1.0 };
        let region = enclosures::region_scan_seq(
            |z| {
                let h = (z.re.to_bits() ^ z.im.to_bits().rotate_left(17) ^ seed)
                    .wrapping_mul(6364136223846793005);
                h >> 63 == 0
            },
            bbox,
            (cols, rows),
            "prop",
        ).unwrap();
        let json = serde_json::to_value(&region).unwrap();
        let back: Region = serde_json::from_value(json).unwrap();
        prop_assert_eq!(region, back);
    }

    #[test]
    fn eigenvalues_lie_in_bessel_disk(
        synth in synthesis_strategy(4),
        symbol_seed in proptest::collection::vec(c64_strategy(), 8..=16),
    ) {
        let frame = Frame::from_synthesis(synth, "prop").unwrap();
        prop_assume!(frames::frame_bounds(&frame).is_ok());
        let dual = frames::canonical_dual(&frame).unwrap();
        let m = Symbol::new(symbol_seed.iter().cycle().take(frame.count).cloned().collect());
        let mult = multipliers::assemble(&m, &dual.phi, &dual.psi).unwrap();
        let spec = multipliers::spectrum_of(&mult).unwrap();
        let disk = enclosures::bessel_disk(&m, &dual.phi, &dual.psi).unwrap();
        for &z in spec.values() {
            prop_assert!(disk.contains(z, 1e-7), "{} escapes {}", z, disk.provenance);
        }
    }
}
