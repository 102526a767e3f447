use isostat::constructgen::{self, Platonic};
use isostat::laman::{self, Graph};
use isostat::numrank::{self, DEFAULT_RANK_TOL};
use isostat::symdetect::{self, rotation_matrix, DEFAULT_GEOM_TOL};
use isostat::{maxwell, Framework};
use nalgebra::Vector3;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn solid() -> impl Strategy<Value = Platonic> {
    prop_oneof![
        Just(Platonic::Tetrahedron),
        Just(Platonic::Octahedron),
        Just(Platonic::Icosahedron)
    ]
}

/// Planar frameworks on 3 to 7 joints in the unit square with any bar set.
fn planar() -> impl Strategy<Value = Framework> {
    (3usize..=7)
        .prop_flat_map(|j| {
            let all: Vec<(usize, usize)> = (0..j).flat_map(|u| (u + 1..j).map(move |v| (u, v))).collect();
            let n = all.len();
            (
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), j),
                subsequence(all, 0..=n),
            )
        })
        .prop_filter_map("coincident joints", |(pts, bars)| Framework::new(2, &pts, &bars).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabelling_preserves_group_and_kinematics(
        p in solid(),
        perm in Just((0..12).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let f = constructgen::platonic(p);
        let j = f.joint_count();
        let perm: Vec<usize> = perm.into_iter().filter(|&k| k < j).collect();
        let bars: Vec<usize> = (0..f.bar_count()).rev().collect();
        let g = f.relabel(&perm, &bars).unwrap();
        let (sf, sg) = (
            symdetect::analyze_symmetry(&f, DEFAULT_GEOM_TOL).unwrap(),
            symdetect::analyze_symmetry(&g, DEFAULT_GEOM_TOL).unwrap(),
        );
        prop_assert_eq!(&sf.group.label, &sg.group.label);
        let tf = maxwell::maxwell_trace(&f, &sf).unwrap();
        let tg = maxwell::maxwell_trace(&g, &sg).unwrap();
        prop_assert_eq!(tf.exact, tg.exact);
        let (kf, kg) = (
            numrank::mobility(&f, DEFAULT_RANK_TOL).unwrap(),
            numrank::mobility(&g, DEFAULT_RANK_TOL).unwrap(),
        );
        prop_assert_eq!((kf.m, kf.s), (kg.m, kg.s));
    }

    #[test]
    fn rigid_motion_preserves_group(
        p in solid(),
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0f64..6.28,
        shift in prop::array::uniform3(-5.0f64..5.0),
    ) {
        let axis = Vector3::from(axis);
        prop_assume!(axis.norm() > 0.1);
        let r = rotation_matrix(&axis, angle);
        let f = constructgen::platonic(p);
        let g = f.map_positions(|_, x| r * x + Vector3::from(shift)).unwrap();
        let label = |f: &Framework| symdetect::analyze_symmetry(f, DEFAULT_GEOM_TOL).unwrap().group.label;
        prop_assert_eq!(label(&f), label(&g));
    }

    #[test]
    fn json_round_trip_is_exact(f in planar()) {
        let g = Framework::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(f.bar_pairs(), g.bar_pairs());
        prop_assert!(f.positions().zip(g.positions()).all(|(a, b)| a == b));
    }

    #[test]
    fn mechanisms_minus_stresses_is_the_scalar_count(f in planar()) {
        let k = numrank::mobility(&f, DEFAULT_RANK_TOL).unwrap();
        let expect = 2 * k.j as i64 - k.b as i64 - k.rigid_body_dim as i64;
        prop_assert_eq!(k.m as i64 - k.s as i64, expect);
        prop_assert_eq!(k.rank + k.s, k.b);
    }

    #[test]
    fn pebble_game_independent_count_matches_generic_rank(f in planar(), seed in any::<u64>()) {
        let g = Graph::from_framework(&f);
        let report = laman::pebble_game_2_3(&g).unwrap();
        prop_assert_eq!(report.independent + report.redundant.len(), report.b);
        prop_assert_eq!(report.independent, laman::generic_rank_2d(&g, 3, seed, DEFAULT_RANK_TOL));
    }

    #[test]
    fn small_perturbation_keeps_isostatic_rank(
        p in solid(),
        noise in prop::collection::vec(prop::array::uniform3(-1e-3f64..1e-3), 12),
    ) {
        let f = constructgen::platonic(p);
        let g = f.map_positions(|id, x| x + Vector3::from(noise[id])).unwrap();
        prop_assert!(numrank::mobility(&g, DEFAULT_RANK_TOL).unwrap().isostatic);
    }
}
