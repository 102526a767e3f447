use serde::Serialize;

use super::op::OpKind;
use super::FrameworkSymmetry;
use crate::framework::{Dimension, Framework};

/// Where an unshifted bar sits relative to the symmetry element fixing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BarPlacement {
    /// Both ends on the rotation axis (each end fixed).
    AlongAxis,
    /// Ends swapped by a half turn: centred on and perpendicular to the axis.
    PerpendicularToAxis,
    /// Both ends on the mirror.
    InPlane,
    /// Ends swapped by the mirror.
    PerpendicularToPlane,
    /// Ends swapped through the central point (inversion or `S_n`).
    CenteredAtOrigin,
}

/// Element-specific sub-counts. Only the fields relevant to the element's
/// kind are set; the names follow the usual notation (`j_c`, `b_2`, ...).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SubCounts {
    /// Joints at the central point (0 or 1 since joints are distinct).
    pub j_c: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_sigma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_sigma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_nc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_c: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnshiftedCounts {
    pub element: usize,
    pub kind: OpKind,
    /// Fixed points of the joint permutation.
    pub j_unshifted: usize,
    /// Fixed points of the bar permutation (bars mapped to themselves setwise).
    pub b_unshifted: usize,
    /// Joints lying on the element's fixed set, measured geometrically.
    pub j_on_element: usize,
    pub sub: SubCounts,
    /// Placement of each unshifted bar, by bar id.
    pub bar_placements: Vec<(usize, BarPlacement)>,
    /// Every tag agrees with the geometry within the detection tolerance.
    pub placements_consistent: bool,
}

/// Unshifted joint and bar counts for one group element.
pub fn unshifted_counts(f: &Framework, sym: &FrameworkSymmetry, element: usize) -> UnshiftedCounts {
    let assignment = &sym.assignments[element];
    let op = &assignment.op;
    let tol = sym.geom_tol * 10.0;
    let rel = |p: usize| f.position(p) - sym.centroid;

    let j_unshifted = assignment.fixed_joints();
    let b_unshifted = assignment.fixed_bars();
    let j_c = (0..f.joint_count()).filter(|&u| rel(u).norm() <= tol).count();
    let j_on_element = (0..f.joint_count())
        .filter(|&u| op.distance_to_fixed_set(&rel(u)) <= tol)
        .count();

    let mut placements = Vec::new();
    let mut consistent = true;
    for bar in f.bars() {
        if assignment.bar_perm[bar.id] != bar.id {
            continue;
        }
        let (u, v) = bar.ends;
        let swapped = assignment.joint_perm[u] == v;
        let (pu, pv) = (rel(u), rel(v));
        let mid = (pu + pv) / 2.0;
        let dir = (pv - pu).normalize();
        let placement = match (op.kind, swapped) {
            (OpKind::Rotation { .. }, false) => BarPlacement::AlongAxis,
            (OpKind::Rotation { .. }, true) => BarPlacement::PerpendicularToAxis,
            (OpKind::Reflection, false) => BarPlacement::InPlane,
            (OpKind::Reflection, true) => BarPlacement::PerpendicularToPlane,
            (OpKind::Inversion | OpKind::ImproperRotation { .. }, _) => BarPlacement::CenteredAtOrigin,
            (OpKind::Identity, _) => continue,
        };
        let axis = op.axis;
        let ok = match placement {
            BarPlacement::AlongAxis => {
                op.distance_to_fixed_set(&pu) <= tol && op.distance_to_fixed_set(&pv) <= tol
            }
            BarPlacement::PerpendicularToAxis => {
                op.distance_to_fixed_set(&mid) <= tol && dir.dot(&axis).abs() <= 1e-6
            }
            BarPlacement::InPlane => pu.dot(&axis).abs() <= tol && pv.dot(&axis).abs() <= tol,
            BarPlacement::PerpendicularToPlane => {
                mid.dot(&axis).abs() <= tol && dir.cross(&axis).norm() <= 1e-6
            }
            BarPlacement::CenteredAtOrigin => {
                mid.norm() <= tol
                    && match op.kind {
                        // An S_n with n > 2 can only fix a bar lying along its axis.
                        OpKind::ImproperRotation { .. } => dir.cross(&axis).norm() <= 1e-6,
                        _ => true,
                    }
            }
        };
        consistent &= ok;
        placements.push((bar.id, placement));
    }

    let mut sub = SubCounts {
        j_c,
        ..SubCounts::default()
    };
    match (f.dimension(), op.kind) {
        (_, OpKind::Identity) => {}
        (Dimension::Two, OpKind::Rotation { order: 2, .. }) => sub.b_2 = Some(b_unshifted),
        (Dimension::Two, OpKind::Rotation { .. }) => sub.b_n = Some(b_unshifted),
        (_, OpKind::Reflection) => {
            sub.j_sigma = Some(j_on_element);
            sub.b_sigma = Some(b_unshifted);
        }
        (Dimension::Three, OpKind::Rotation { order: 2, .. }) => {
            sub.j_2 = Some(j_on_element);
            sub.b_2 = Some(b_unshifted);
        }
        (Dimension::Three, OpKind::Rotation { .. }) => {
            sub.j_n = Some(j_on_element);
            sub.b_n = Some(b_unshifted);
        }
        (_, OpKind::Inversion) => sub.b_c = Some(b_unshifted),
        (_, OpKind::ImproperRotation { .. }) => sub.b_nc = Some(b_unshifted),
    }

    UnshiftedCounts {
        element,
        kind: op.kind,
        j_unshifted,
        b_unshifted,
        j_on_element,
        sub,
        bar_placements: placements,
        placements_consistent: consistent,
    }
}

/// Joints and bars partitioned into orbits under the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub joint_orbits: Vec<Vec<usize>>,
    pub bar_orbits: Vec<Vec<usize>>,
}

fn orbit_sets(n: usize, perms: impl Iterator<Item = Vec<usize>> + Clone) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = perms.clone().map(|p| p[start]).collect();
        orbit.push(start);
        orbit.sort_unstable();
        orbit.dedup();
        for &k in &orbit {
            label[k] = out.len();
        }
        out.push(orbit);
    }
    out
}

pub fn orbits(f: &Framework, sym: &FrameworkSymmetry) -> OrbitPartition {
    let joint_perms = sym.assignments.iter().map(|a| a.joint_perm.clone());
    let bar_perms = sym.assignments.iter().map(|a| a.bar_perm.clone());
    OrbitPartition {
        joint_orbits: orbit_sets(f.joint_count(), joint_perms),
        bar_orbits: orbit_sets(f.bar_count(), bar_perms),
    }
}
