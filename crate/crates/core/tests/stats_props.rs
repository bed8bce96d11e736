use std::f64::consts::PI;
use std::sync::OnceLock;

use geoloop::census::{enumerate_orbit, CensusSnapshot};
use geoloop::group::{build_genus_two_group, CosetScheme};
use geoloop::stats::*;
use proptest::prelude::*;

fn census() -> &'static CensusSnapshot {
    static C: OnceLock<CensusSnapshot> = OnceLock::new();
    C.get_or_init(|| enumerate_orbit(&build_genus_two_group(), 9.0, 0.0).unwrap())
}

fn grid() -> Vec<f64> {
    uniform_grid(3.0, 9.0, 24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nested_sectors_are_monotone(
        v in 0.0..6.3f64, w in 0.0..6.3f64,
        r1 in 0.05..1.5f64, f1 in 0.2..1.0f64,
        r2 in 0.05..1.5f64, f2 in 0.2..1.0f64,
    ) {
        let c = census();
        let big = count_sector(c, &SectorSpec::new(v, r1 * 2.0).unwrap(), &SectorSpec::new(w, r2 * 2.0).unwrap(), &grid()).unwrap();
        let small = count_sector(c, &SectorSpec::new(v, r1 * 2.0 * f1).unwrap(), &SectorSpec::new(w, r2 * 2.0 * f2).unwrap(), &grid()).unwrap();
        for i in 0..big.len() {
            prop_assert!(small.counts[i] <= big.counts[i]);
            if i > 0 {
                prop_assert!(big.counts[i - 1] <= big.counts[i]);
            }
        }
    }

    #[test]
    fn fit_recovers_manufactured_exponential(h in 0.5..2.0f64, a in 0.05..5.0f64) {
        let g = uniform_grid(5.0, 10.0, 50);
        let series = CountSeries {
            counts: g.iter().map(|t| (a * (h * t).exp() * 1e3).round() as u64).collect(),
            grid: g.clone(),
            filter: "synthetic".into(),
        };
        let fit = fit_asymptotics(&series, (5.0, 10.0)).unwrap();
        prop_assert!((fit.h_estimate - h).abs() < 0.01 * h);
        prop_assert!((fit.a_estimate / 1e3 - a).abs() < 0.01 * a);
    }
}

#[test]
fn full_sectors_reduce_to_count_arcs() {
    let c = census();
    let all = count_arcs(c, &grid()).unwrap();
    let full = count_sector(
        c,
        &SectorSpec::full(),
        &SectorSpec::new(1.0, PI).unwrap(),
        &grid(),
    )
    .unwrap();
    assert_eq!(all.counts, full.counts);
    assert!(all.counts.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn cosets_partition_the_count() {
    let c = census();
    let all = count_arcs(c, &grid()).unwrap();
    for scheme in [
        CosetScheme::mod_m(2),
        CosetScheme::mod_m(3),
        CosetScheme::index_two(2),
        CosetScheme::trivial(),
    ] {
        let parts = count_by_coset(c, &scheme, &grid()).unwrap();
        assert_eq!(parts.len(), scheme.index(2));
        for i in 0..all.len() {
            let sum: u64 = parts.iter().map(|(_, s)| s.counts[i]).sum();
            assert_eq!(sum, all.counts[i]);
        }
    }
    let shares = coset_shares(c, &CosetScheme::mod_m(2), 9.0)
        .unwrap()
        .unwrap();
    assert_eq!(shares.len(), 16);
    assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn grid_beyond_radius_names_the_deficit() {
    let e = count_arcs(census(), &[5.0, 9.5]).unwrap_err();
    match e {
        geoloop::error::GeoError::GridExceedsCensus { deficit, .. } => {
            assert!((deficit - 0.5).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn sector_counts_scale_with_angles() {
    let c = census();
    let n = count_arcs(c, &[9.0]).unwrap().counts[0] as f64;
    let half = count_sector(
        c,
        &SectorSpec::new(0.0, PI / 2.0).unwrap(),
        &SectorSpec::full(),
        &[9.0],
    )
    .unwrap();
    assert!((half.counts[0] as f64 / n - 0.5).abs() < 0.05);
}
