use proptest::prelude::*;
use rydsim_core::devices::{build_gas_switch, GasSwitchSpec};
use rydsim_core::geometry::{
    assign_regions, build_chain, positions_csv, sample_cylinder, sample_cylinder_instance,
    CylinderSpec, Region, RegionPartition,
};
use rydsim_core::Error;

fn min_distance(p: &[[f64; 3]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let d2: f64 = (0..3).map(|k| (p[i][k] - p[j][k]).powi(2)).sum();
            best = best.min(d2);
        }
    }
    best.sqrt()
}

#[test]
fn cylinder_respects_exclusion_and_bounds() {
    let spec = CylinderSpec::new(30.0, 7.0, 3000, 0.1).unwrap();
    let p = sample_cylinder(&spec, 42).unwrap();
    assert_eq!(p.len(), 3000);
    assert!(min_distance(&p) >= 0.1);
    for q in &p {
        assert!((0.0..=30.0).contains(&q[0]));
        assert!(q[1].hypot(q[2]) <= 7.0);
    }
}

#[test]
fn dense_packing_still_respects_exclusion() {
    // Volume fraction about 0.24.
    let spec = CylinderSpec::new(6.0, 1.0, 6000, 0.113).unwrap();
    let p = sample_cylinder(&spec, 9).unwrap();
    assert!(min_distance(&p) >= 0.113);
}

#[test]
fn cylinder_is_uniform_in_radius_and_axis() {
    let spec = CylinderSpec::new(10.0, 2.0, 20_000, 0.01).unwrap();
    let p = sample_cylinder(&spec, 1).unwrap();
    let n = p.len() as f64;
    // Uniform in volume: P(ρ < R/√2) = 1/2, P(x < L/2) = 1/2.
    let inner = p
        .iter()
        .filter(|q| q[1].hypot(q[2]) < 2.0 / 2f64.sqrt())
        .count() as f64;
    let left = p.iter().filter(|q| q[0] < 5.0).count() as f64;
    let sigma = (0.25 / n).sqrt();
    assert!((inner / n - 0.5).abs() < 5.0 * sigma, "{}", inner / n);
    assert!((left / n - 0.5).abs() < 5.0 * sigma, "{}", left / n);
}

#[test]
fn seeds_and_instances_are_reproducible_and_distinct() {
    let spec = CylinderSpec::new(10.0, 2.0, 200, 0.2).unwrap();
    let a = sample_cylinder_instance(&spec, 5, 0).unwrap();
    assert_eq!(a, sample_cylinder_instance(&spec, 5, 0).unwrap());
    assert_eq!(a, sample_cylinder(&spec, 5).unwrap());
    assert_ne!(a, sample_cylinder_instance(&spec, 5, 1).unwrap());
    assert_ne!(a, sample_cylinder_instance(&spec, 6, 0).unwrap());
}

#[test]
fn packing_beyond_jamming_is_rejected() {
    let spec = CylinderSpec::new(1.0, 1.0, 500, 0.2).unwrap();
    assert!(spec.volume_fraction() > 0.3841);
    assert!(matches!(sample_cylinder(&spec, 0), Err(Error::Packing(_))));
}

#[test]
fn chain_gaps_and_csv() {
    let net = build_chain(&[1.0, 0.5, 2.0], vec![0.0, -1.0, -2.0, -3.0], 10.0).unwrap();
    let gaps: Vec<f64> = (0..3).map(|k| net.distance(k, k + 1)).collect();
    assert_eq!(gaps, vec![1.0, 0.5, 2.0]);
    let csv = positions_csv(&net);
    assert_eq!(csv.lines().next(), Some("index,x,y,z,detuning"));
    assert_eq!(csv.lines().count(), 5);
    assert!(build_chain(&[1.0, 0.0], vec![0.0; 3], 10.0).is_err());
    assert!(build_chain(&[1.0], vec![0.0; 3], 10.0).is_err());
}

#[test]
fn region_cuts_belong_to_the_right() {
    let part = RegionPartition::new([5.0, 10.0, 15.0], [0.0, 1.0, 2.0]).unwrap();
    assert_eq!(part.region_of(0.0).unwrap(), Region::Input);
    assert_eq!(part.region_of(5.0).unwrap(), Region::Gate);
    assert_eq!(part.region_of(15.0).unwrap(), Region::Output);
    assert_eq!(part.region_of(30.0).unwrap(), Region::Output);
    assert!(part.region_of(30.5).is_err());
    assert!(part.gate_blocks(4.8));
}

#[test]
fn gas_switch_outputs_are_the_output_region() {
    let spec = GasSwitchSpec::desk_scale();
    let on = build_gas_switch(&spec, true, 3, 0).unwrap();
    let off = build_gas_switch(&spec, false, 3, 0).unwrap();
    // Same positions in both states, only the gate detuning differs.
    assert_eq!(on.network.positions(), off.network.positions());
    assert_eq!(on.output_sites, off.output_sites);
    assert!(!on.output_sites.is_empty());
    let r_f = spec.r_f();
    let cut = (spec.regions[0] + spec.regions[1]) / r_f;
    for &s in &on.output_sites {
        assert!(on.network.positions()[s][0] >= cut - 1e-9);
    }
    assert!(on.initial.excitation_count() == 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn region_assignment_is_idempotent(
        xs in prop::collection::vec(0.0..30.0f64, 1..50),
        dets in prop::array::uniform3(-5.0..5.0f64),
    ) {
        let part = RegionPartition::new([5.0, 10.0, 15.0], dets).unwrap();
        let pos: Vec<[f64; 3]> = xs.iter().map(|&x| [x, 0.0, 0.0]).collect();
        let a = assign_regions(&pos, &part).unwrap();
        let b = assign_regions(&pos, &part).unwrap();
        prop_assert_eq!(&a, &b);
        for (x, d) in xs.iter().zip(&a) {
            prop_assert_eq!(*d, part.detuning(part.region_of(*x).unwrap()));
        }
    }

    #[test]
    fn small_samples_respect_d_min(seed in any::<u64>(), count in 1..300usize) {
        let spec = CylinderSpec::new(8.0, 1.5, count, 0.3).unwrap();
        let p = sample_cylinder(&spec, seed).unwrap();
        prop_assert_eq!(p.len(), count);
        prop_assert!(min_distance(&p) >= 0.3);
    }
}
