//! Point-group symmetry of a framework: detection of the isometries that map
//! joints to joints and bars to bars, classification of the resulting group,
//! orbits, and the per-element counts of unshifted joints and bars.

mod counts;
mod group;
mod op;

use std::collections::HashSet;

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::framework::{Dimension, Framework};

pub use counts::{orbits, unshifted_counts, BarPlacement, OrbitPartition, SubCounts, UnshiftedCounts};
pub use group::{
    catalog_labels, classify_group, generate, reference_group, ConjugacyClass, PointGroupInfo,
    ELEMENT_TOL,
};
pub use op::{reflection_matrix, rotation_matrix, IsometryOp, OpKind};

/// Default geometric tolerance, relative to the framework diameter.
pub const DEFAULT_GEOM_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("two candidate operations agree on every joint but differ as matrices; tolerance too loose")]
    ToleranceAmbiguity,
    #[error("joints are collinear in 3D (or a single point): the symmetry group is infinite")]
    InfiniteGroup,
    #[error("operations do not form a group: {0}")]
    NotAGroup(&'static str),
    #[error("group of order {0} is not in the point-group catalog")]
    UnrecognizedGroup(usize),
    #[error("rotation angle is not a rational fraction of a turn")]
    IrrationalAngle,
    #[error("unknown point-group label {0:?}")]
    UnknownLabel(String),
    #[error("assignment does not belong to this framework")]
    InvalidAssignment,
}

/// One symmetry operation together with the permutations it induces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryAssignment {
    pub op: IsometryOp,
    /// `joint_perm[u]` is the image of joint `u`.
    pub joint_perm: Vec<usize>,
    /// `bar_perm[k]` is the image of bar `k`.
    pub bar_perm: Vec<usize>,
}

impl SymmetryAssignment {
    pub fn fixed_joints(&self) -> usize {
        self.joint_perm.iter().enumerate().filter(|(u, &v)| *u == v).count()
    }

    pub fn fixed_bars(&self) -> usize {
        self.bar_perm.iter().enumerate().filter(|(u, &v)| *u == v).count()
    }
}

/// The detected point group of a framework, with the permutation action of
/// each element. `assignments[k].op` is `group.elements[k]`.
#[derive(Debug, Clone)]
pub struct FrameworkSymmetry {
    pub group: PointGroupInfo,
    pub assignments: Vec<SymmetryAssignment>,
    pub centroid: Vector3<f64>,
    /// Absolute tolerance used for matching (relative tolerance times diameter).
    pub geom_tol: f64,
}

fn absolute_tol(f: &Framework, rel_tol: f64) -> f64 {
    rel_tol * f.diameter().max(f64::MIN_POSITIVE)
}

/// Rank of the centred joint positions.
fn spanned_rank(points: &[Vector3<f64>], dim: usize, tol: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(points.len(), dim, |r, c| points[r][c]);
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

/// Joints grouped into equivalence classes that any symmetry must preserve:
/// same distance from the centroid (within `tol`) and same degree.
fn invariant_classes(points: &[Vector3<f64>], degrees: &[usize], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        degrees[a]
            .cmp(&degrees[b])
            .then(points[a].norm().total_cmp(&points[b].norm()))
    });
    let mut class = vec![0; points.len()];
    let mut next = 0;
    for w in 0..order.len() {
        let u = order[w];
        if w > 0 {
            let p = order[w - 1];
            let same = degrees[p] == degrees[u] && (points[p].norm() - points[u].norm()).abs() <= tol;
            if !same {
                next += 1;
            }
        }
        class[u] = next;
    }
    class
}

fn perpendicular_2d(v: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(-v.y, v.x, 0.0)
}

/// Best orthogonal map (not necessarily proper) sending each `from` to `to`.
fn procrustes(pairs: &[(Vector3<f64>, Vector3<f64>)]) -> Matrix3<f64> {
    let mut h = Matrix3::zeros();
    for (a, b) in pairs {
        h += b * a.transpose();
    }
    let svd = h.svd(true, true);
    svd.u.expect("requested") * svd.v_t.expect("requested")
}

/// Finds every isometry fixing the centroid that permutes joints and bars.
///
/// `rel_tol` is multiplied by the framework diameter to give the matching
/// tolerance. The result is sorted canonically and starts with `E`.
pub fn detect_symmetries(f: &Framework, rel_tol: f64) -> Result<Vec<SymmetryAssignment>, SymmetryError> {
    let tol = absolute_tol(f, rel_tol);
    let dimension = f.dimension();
    let d = dimension.get();
    let centroid = f.centroid();
    let x: Vec<Vector3<f64>> = f.positions().map(|p| p - centroid).collect();
    let degrees = f.degrees();
    let class = invariant_classes(&x, &degrees, tol);
    let class_size = |c: usize| class.iter().filter(|&&k| k == c).count();

    let rank = spanned_rank(&x, d, tol);
    if rank == 0 || (dimension == Dimension::Three && rank == 1) {
        return Err(SymmetryError::InfiniteGroup);
    }

    // Reference frame: joints from small invariant classes, well conditioned.
    let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let pick = |score: &dyn Fn(usize) -> f64| -> Option<usize> {
        let best = (0..x.len()).map(score).fold(0.0, f64::max);
        if best <= tol {
            return None;
        }
        (0..x.len())
            .filter(|&u| score(u) >= 0.5 * best)
            .min_by_key(|&u| (class_size(class[u]), u))
    };
    let a = pick(&|u| x[u].norm()).ok_or(SymmetryError::InfiniteGroup)?;
    let b = pick(&|u| x[a].cross(&x[u]).norm() / scale);
    let c = match (dimension, b) {
        (Dimension::Three, Some(b)) => {
            let n = x[a].cross(&x[b]);
            pick(&|u| n.dot(&x[u]).abs() / (scale * scale))
        }
        _ => None,
    };

    let matches = |u: usize, v: usize| -> bool { class[u] == class[v] };
    let dot_ok = |u: usize, v: usize, u2: usize, v2: usize| -> bool {
        (x[u].dot(&x[v]) - x[u2].dot(&x[v2])).abs() <= 4.0 * tol * scale
    };

    // Candidate images of the reference frame.
    let mut frames: Vec<Vec<(Vector3<f64>, Vector3<f64>)>> = Vec::new();
    for a2 in (0..x.len()).filter(|&v| matches(a, v)) {
        match b {
            None => {
                // Planar, collinear joints: the perpendicular goes to either perpendicular.
                let perp = perpendicular_2d(&x[a]);
                for sign in [1.0, -1.0] {
                    frames.push(vec![(x[a], x[a2]), (perp, sign * perpendicular_2d(&x[a2]))]);
                }
            }
            Some(b) => {
                for b2 in (0..x.len()).filter(|&v| matches(b, v) && dot_ok(a, b, a2, v)) {
                    if a2 == b2 {
                        continue;
                    }
                    match (dimension, c) {
                        (Dimension::Two, _) => frames.push(vec![(x[a], x[a2]), (x[b], x[b2])]),
                        (Dimension::Three, None) => {
                            let n = x[a].cross(&x[b]);
                            let n2 = x[a2].cross(&x[b2]);
                            for sign in [1.0, -1.0] {
                                frames.push(vec![(x[a], x[a2]), (x[b], x[b2]), (n, sign * n2)]);
                            }
                        }
                        (Dimension::Three, Some(c)) => {
                            for c2 in (0..x.len())
                                .filter(|&v| matches(c, v) && dot_ok(a, c, a2, v) && dot_ok(b, c, b2, v))
                            {
                                frames.push(vec![(x[a], x[a2]), (x[b], x[b2]), (x[c], x[c2])]);
                            }
                        }
                    }
                }
            }
        }
    }

    let mut found: Vec<SymmetryAssignment> = Vec::new();
    let mut seen_perms: HashSet<(Vec<usize>, bool)> = HashSet::new();
    for frame in frames {
        let Some(q) = fit_and_verify(f, &x, &frame, tol) else {
            continue;
        };
        let (perm, q) = q;
        let Some(bar_perm) = induced_bar_perm(f, &perm) else {
            continue;
        };
        let proper = q.determinant() > 0.0;
        if let Some(existing) = found.iter().find(|s| s.joint_perm == perm && (s.op.determinant() > 0.0) == proper) {
            if (existing.op.matrix - q).amax() > ELEMENT_TOL {
                return Err(SymmetryError::ToleranceAmbiguity);
            }
            continue;
        }
        if !seen_perms.insert((perm.clone(), proper)) {
            continue;
        }
        let op = IsometryOp::from_matrix(dimension, q).ok_or(SymmetryError::IrrationalAngle)?;
        found.push(SymmetryAssignment {
            op,
            joint_perm: perm,
            bar_perm,
        });
    }
    if found.is_empty() {
        // Identity always verifies; reaching here means the tolerance is unusable.
        return Err(SymmetryError::ToleranceAmbiguity);
    }
    // Same permutation with different matrices is only possible for a planar
    // framework in 3D (the reflection in its own plane); anything else is ambiguous.
    if dimension == Dimension::Three && rank == 3 {
        let perms: HashSet<&Vec<usize>> = found.iter().map(|s| &s.joint_perm).collect();
        if perms.len() != found.len() {
            return Err(SymmetryError::ToleranceAmbiguity);
        }
    }
    found.sort_by(|s, t| s.op.canonical_cmp(&t.op));
    Ok(found)
}

/// Fits an orthogonal map to a frame correspondence, maps every joint, and
/// refits on all correspondences. Returns the joint permutation and matrix.
fn fit_and_verify(
    f: &Framework,
    x: &[Vector3<f64>],
    frame: &[(Vector3<f64>, Vector3<f64>)],
    tol: f64,
) -> Option<(Vec<usize>, Matrix3<f64>)> {
    let mut pairs = frame.to_vec();
    if f.dimension() == Dimension::Two {
        pairs.push((Vector3::z(), Vector3::z()));
    }
    let q0 = procrustes(&pairs);
    let perm = map_joints(x, &q0, 10.0 * tol)?;

    // Refit on every correspondence for accuracy; the frame pairs keep
    // out-of-span directions (normal of a planar set, z in 2D) pinned.
    let mut all: Vec<(Vector3<f64>, Vector3<f64>)> =
        perm.iter().enumerate().map(|(u, &v)| (x[u], x[v])).collect();
    all.extend(pairs.iter().copied());
    let q = procrustes(&all);
    let perm2 = map_joints(x, &q, tol)?;
    (perm2 == perm).then_some((perm, q))
}

fn map_joints(x: &[Vector3<f64>], q: &Matrix3<f64>, tol: f64) -> Option<Vec<usize>> {
    let mut perm = vec![usize::MAX; x.len()];
    let mut used = vec![false; x.len()];
    for (u, p) in x.iter().enumerate() {
        let image = q * p;
        let v = (0..x.len()).find(|&v| (x[v] - image).norm() <= tol)?;
        if used[v] {
            return None;
        }
        used[v] = true;
        perm[u] = v;
    }
    Some(perm)
}

fn induced_bar_perm(f: &Framework, perm: &[usize]) -> Option<Vec<usize>> {
    f.bars()
        .iter()
        .map(|bar| f.bar_between(perm[bar.ends.0], perm[bar.ends.1]))
        .collect()
}

/// Detects symmetries and classifies the group in one step.
pub fn analyze_symmetry(f: &Framework, rel_tol: f64) -> Result<FrameworkSymmetry, SymmetryError> {
    let assignments = detect_symmetries(f, rel_tol)?;
    let ops: Vec<IsometryOp> = assignments.iter().map(|a| a.op.clone()).collect();
    let group = classify_group(&ops)?;
    // classify_group sorts canonically too; realign to be safe.
    let assignments = group
        .elements
        .iter()
        .map(|e| {
            assignments
                .iter()
                .find(|a| a.op.approx_eq(e, ELEMENT_TOL))
                .cloned()
                .ok_or(SymmetryError::NotAGroup("element lost during classification"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrameworkSymmetry {
        group,
        assignments,
        centroid: f.centroid(),
        geom_tol: absolute_tol(f, rel_tol),
    })
}

impl FrameworkSymmetry {
    /// Checks that composing operations composes their joint permutations.
    pub fn permutations_compose(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.group.product(a, b);
                let pa = &self.assignments[a].joint_perm;
                let pb = &self.assignments[b].joint_perm;
                let pab = &self.assignments[ab].joint_perm;
                (0..pa.len()).all(|u| pab[u] == pa[pb[u]])
            })
        })
    }

    pub fn counts(&self, f: &Framework, element: usize) -> UnshiftedCounts {
        unshifted_counts(f, self, element)
    }
}
