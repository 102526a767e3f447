use super::*;
use crate::constructgen::{
    cap_all_faces_symmetric, double_banana, fig2_examples, platonic, rotor, twisted_cap_all_faces, CapHeight,
    Fig2Group, Platonic, DEFAULT_TWIST,
};
use crate::framework::Framework;
use crate::numrank::{mobility, DEFAULT_RANK_TOL};
use crate::symdetect::{analyze_symmetry, catalog_labels, reference_group, DEFAULT_GEOM_TOL};

fn sym(f: &Framework) -> FrameworkSymmetry {
    analyze_symmetry(f, DEFAULT_GEOM_TOL).unwrap()
}

fn class_value(t: &TraceVector, label: &str) -> f64 {
    let k = t.class_labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("{label} in {:?}", t.class_labels));
    t.values[k]
}

fn fixtures() -> Vec<Framework> {
    let mut v: Vec<Framework> = Fig2Group::ALL.iter().map(|&g| fig2_examples(g)).collect();
    v.extend([Platonic::Tetrahedron, Platonic::Octahedron, Platonic::Icosahedron].map(platonic));
    v.push(rotor(6, false, true));
    v.push(rotor(4, true, true));
    v.push(rotor(5, false, false));
    v.push(double_banana());
    v.push(twisted_cap_all_faces(&platonic(Platonic::Octahedron), DEFAULT_TWIST, None).unwrap());
    v.push(cap_all_faces_symmetric(&platonic(Platonic::Icosahedron), CapHeight::Stellation).unwrap());
    v
}

#[test]
fn rigid_body_traces() {
    let e3 = IsometryOp::identity(Dimension::Three);
    assert_eq!(gamma_rigid_body(&e3, Dimension::Three), RigidBodyTrace { translations: 3.0, combined: 6.0 });
    let g = reference_group(Dimension::Three, "Ci").unwrap();
    let inv = g.elements.iter().find(|e| e.kind == OpKind::Inversion).unwrap();
    assert_eq!(gamma_rigid_body(inv, Dimension::Three), RigidBodyTrace { translations: -3.0, combined: 0.0 });
    let g = reference_group(Dimension::Two, "C2").unwrap();
    let c2 = &g.elements[1];
    assert_eq!(gamma_rigid_body(c2, Dimension::Two), RigidBodyTrace { translations: -2.0, combined: -1.0 });
}

#[test]
fn joint_and_bar_traces() {
    let oct = platonic(Platonic::Octahedron);
    let s = sym(&oct);
    let (gj, gb) = (gamma_joint(&s), gamma_bar(&s));
    assert_eq!(class_value(&gj, "6C4"), 2.0);
    assert_eq!(class_value(&gb, "6C4"), 0.0);
    assert_eq!(gj.values[0], 6.0);
    assert_eq!(gb.values[0], 12.0);

    let h = 3f64.sqrt() / 2.0;
    let tri = Framework::new(2, &[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]], &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let s = sym(&tri);
    assert_eq!(class_value(&gamma_joint(&s), "3σ"), 1.0);
    assert_eq!(class_value(&gamma_bar(&s), "3σ"), 1.0);
}

#[test]
fn maxwell_trace_examples() {
    let c2 = fig2_examples(Fig2Group::C2);
    assert_eq!(maxwell_trace(&c2, &sym(&c2)).unwrap().values, vec![0.0, 0.0]);

    let oct = platonic(Platonic::Octahedron);
    let t = maxwell_trace(&oct, &sym(&oct)).unwrap();
    assert!(t.is_zero());

    let r4 = rotor(4, false, true);
    let t = maxwell_trace(&r4, &sym(&r4)).unwrap();
    assert_eq!(class_value(&t, "C4"), -1.0);
}

#[test]
fn traces_match_closed_forms_on_all_fixtures() {
    for f in fixtures() {
        maxwell_trace(&f, &sym(&f)).unwrap();
    }
}

#[test]
fn nonzero_trace_implies_mechanism_and_stress() {
    for f in fixtures() {
        if f.maxwell_count() != 0 {
            continue;
        }
        let t = maxwell_trace(&f, &sym(&f)).unwrap();
        if !t.is_zero() {
            let k = mobility(&f, DEFAULT_RANK_TOL).unwrap();
            assert!(k.m >= 1 && k.s >= 1);
        }
    }
}

#[test]
fn trace_is_equivariant() {
    let f = fig2_examples(Fig2Group::C3vIn);
    let base = maxwell_trace(&f, &sym(&f)).unwrap();
    let moved = f.map_positions(|_, p| nalgebra::Vector3::new(-p.y + 3.0, p.x - 1.0, 0.0)).unwrap();
    let perm: Vec<usize> = (0..f.joint_count()).rev().collect();
    let bar_order: Vec<usize> = (0..f.bar_count()).rev().collect();
    let relabelled = moved.relabel(&perm, &bar_order).unwrap();
    assert_eq!(maxwell_trace(&relabelled, &sym(&relabelled)).unwrap(), base);
}

#[test]
fn planar_fixtures_pass() {
    for g in Fig2Group::ALL {
        let f = fig2_examples(g);
        let r = isostatic_necessary(&f, &sym(&f));
        assert!(r.pass, "{}: {:?}", g.name(), r.failures().collect::<Vec<_>>());
        assert_eq!(r.group_admissible, Some(true));
    }
}

#[test]
fn c2v_central_bar() {
    let f = fig2_examples(Fig2Group::C2v);
    let r = isostatic_necessary(&f, &sym(&f));
    let half_turn = r.checks.iter().find(|c| c.equation == EquationId::HalfTurn2d).unwrap();
    assert_eq!(half_turn.inputs["b_2"], 1);
    let mirrors: Vec<_> = r.checks.iter().filter(|c| c.equation == EquationId::Reflection2d).collect();
    assert_eq!(mirrors.len(), 2);
    assert!(mirrors.iter().all(|c| c.inputs["b_sigma"] == 1));
}

#[test]
fn joint_at_threefold_centre_fails() {
    // Triangle with a central joint braced to all corners: j = 4, b = 6.
    let mut pts: Vec<Vec<f64>> = (0..3)
        .map(|k| {
            let a = (90.0 + 120.0 * k as f64).to_radians();
            vec![a.cos(), a.sin()]
        })
        .collect();
    pts.push(vec![0.0, 0.0]);
    let f = Framework::new(2, &pts, &[(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2)]).unwrap();
    let r = isostatic_necessary(&f, &sym(&f));
    assert!(!r.pass);
    let rot = r.checks.iter().find(|c| c.equation == EquationId::Rotation2d).unwrap();
    assert!(!rot.pass);
    assert_eq!(rot.inputs["j_c"], 1);
    assert_eq!(rot.note.as_deref(), Some("no joint may lie at the centre of rotation"));
}

#[test]
fn rotors_fail_rotation_equation() {
    for (f, label) in [(rotor(6, false, true), "C6"), (rotor(4, false, true), "C4"), (rotor(5, false, false), "C5")] {
        let r = isostatic_necessary(&f, &sym(&f));
        assert_eq!(r.group, label);
        assert!(!r.pass);
        assert_eq!(r.group_admissible, Some(false));
        assert!(r.failures().any(|c| c.equation == EquationId::Rotation2d));
    }
}

#[test]
fn icosahedron_passes() {
    let f = platonic(Platonic::Icosahedron);
    let r = isostatic_necessary(&f, &sym(&f));
    assert!(r.pass);
    assert!(r.group_admissible.is_none());
    let c5 = r.checks.iter().find(|c| c.op == "C5").unwrap();
    assert_eq!((c5.inputs["j_n"], c5.inputs["b_n"]), (2, 0));
    let c2 = r.checks.iter().find(|c| c.equation == EquationId::HalfTurn3d && !c.derived).unwrap();
    assert_eq!((c2.inputs["j_2"], c2.inputs["b_2"]), (0, 2));
    // Three-fold axes pass through face centres; n = 3 leaves j_3 free.
    let c3 = r.checks.iter().find(|c| c.op == "C3").unwrap();
    assert_eq!((c3.inputs["j_n"], c3.inputs["b_n"]), (0, 0));
    assert!(c3.pass);
}

#[test]
fn bar_through_inversion_centre_fails() {
    // Octahedron plus one long diagonal: the diagonal is centred on i.
    let oct = platonic(Platonic::Octahedron);
    let mut bars = oct.bar_pairs();
    bars.push((0, 1));
    let f = Framework::from_points(Dimension::Three, oct.positions().collect(), &bars, 1e-9).unwrap();
    let r = isostatic_necessary(&f, &sym(&f));
    assert!(!r.pass);
    assert!(r.failures().any(|c| c.equation == EquationId::Inversion3d));
    assert!(r.failures().any(|c| c.equation == EquationId::Identity3d));
}

#[test]
fn scope_flags() {
    let f = Framework::new(3, &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(isostatic_necessary(&f, &sym(&f)).outside_scope.is_some());
    let f = fig2_examples(Fig2Group::C1);
    assert!(isostatic_necessary(&f, &sym(&f)).outside_scope.is_none());
}

fn screen_set(dim: Dimension) -> (Vec<String>, Vec<String>) {
    let mut admitted = Vec::new();
    let mut divides = Vec::new();
    for label in catalog_labels(dim) {
        let g = reference_group(dim, &label).unwrap();
        let s = free_placement_screen(&g).unwrap();
        if s.admits_free_placement {
            admitted.push(label.clone());
        }
        if s.order_divides && !divides.contains(&g.order().to_string()) {
            divides.push(g.order().to_string());
        }
    }
    admitted.sort();
    divides.sort();
    (admitted, divides)
}

#[test]
fn free_placement_lists() {
    let (two, d2) = screen_set(Dimension::Two);
    assert_eq!(two, ["C1", "C3"]);
    assert_eq!(d2, ["1", "3"]);
    let (three, d3) = screen_set(Dimension::Three);
    let mut want = vec!["C1", "Cs", "Ci", "C3", "C3h", "C3v", "S6"];
    want.sort();
    assert_eq!(three, want);
    assert_eq!(d3, ["1", "2", "3", "6"]);
}

#[test]
fn free_placement_c2_decomposition() {
    let g = reference_group(Dimension::Three, "C2").unwrap();
    let s = free_placement_screen(&g).unwrap();
    assert!(!s.vanishing);
    assert_eq!(format_decomposition(s.decomposition.as_ref().unwrap()), "A - B");
    let g = reference_group(Dimension::Three, "D3").unwrap();
    assert!(!free_placement_screen(&g).unwrap().vanishing);
}
