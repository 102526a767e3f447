//! Equilibrium, compatibility and rigidity matrices, and the kinematic
//! quantities (rank, mechanisms, states of self-stress) read off them.
//!
//! Ranks are decided on the rigidity matrix with a relative threshold: a
//! singular value counts when it exceeds `tol * sigma_max`.

use nalgebra::{DMatrix, DVector, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::framework::{Dimension, Framework};

/// Relative singular-value cutoff used when none is given.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankError {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("bar {0} has zero length")]
    ZeroLengthBar(usize),
}

/// The three matrices of the bar-joint model.
///
/// `equilibrium` is `dj x b` (columns are bar tensions, rows are load
/// components), `compatibility` is its transpose, and each row of
/// `rigidity` is the matching compatibility row scaled by the bar length.
#[derive(Debug, Clone)]
pub struct EquilibriumSystem {
    pub equilibrium: DMatrix<f64>,
    pub compatibility: DMatrix<f64>,
    pub rigidity: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KinematicSummary {
    pub j: usize,
    pub b: usize,
    pub rank: usize,
    pub rigid_body_dim: usize,
    pub m: usize,
    pub s: usize,
    pub isostatic: bool,
    /// False when the joints do not span the ambient space (collinear in 2D,
    /// coplanar-collinear in 3D); the counts are then generalised values.
    pub spans_space: bool,
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
}

impl KinematicSummary {
    /// The `n` smallest singular values, ascending.
    pub fn smallest_singular_values(&self, n: usize) -> Vec<f64> {
        self.singular_values.iter().rev().take(n).copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct NullspaceBases {
    /// Orthonormal tension vectors (length `b`) with `A t = 0`.
    pub self_stresses: Vec<DVector<f64>>,
    /// Orthonormal displacement vectors (length `dj`) with `C d = 0`,
    /// orthogonal to every rigid-body motion.
    pub mechanisms: Vec<DVector<f64>>,
}

/// Rigidity matrix: `b x dj`, row `k` holds `p_u - p_v` in the block of `u`
/// and `p_v - p_u` in the block of `v` for bar `k = (u, v)`.
pub fn rigidity_matrix(f: &Framework) -> DMatrix<f64> {
    let d = f.dimension().get();
    let mut r = DMatrix::zeros(f.bar_count(), d * f.joint_count());
    for bar in f.bars() {
        let (u, v) = bar.ends;
        let diff = f.position(u) - f.position(v);
        for k in 0..d {
            r[(bar.id, d * u + k)] = diff[k];
            r[(bar.id, d * v + k)] = -diff[k];
        }
    }
    r
}

pub fn build_system(f: &Framework) -> Result<EquilibriumSystem, RankError> {
    let rigidity = rigidity_matrix(f);
    let mut compatibility = rigidity.clone();
    for bar in f.bars() {
        let len = f.bar_length(bar.id);
        if len <= 0.0 {
            return Err(RankError::ZeroLengthBar(bar.id));
        }
        let mut row = compatibility.row_mut(bar.id);
        row /= len;
    }
    let equilibrium = compatibility.transpose();
    Ok(EquilibriumSystem {
        equilibrium,
        compatibility,
        rigidity,
    })
}

fn check_finite(m: &DMatrix<f64>) -> Result<(), RankError> {
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if !m[(r, c)].is_finite() {
                return Err(RankError::NonFiniteEntry { row: r, col: c });
            }
        }
    }
    Ok(())
}

fn sorted_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn count_above(sv: &[f64], tol: f64) -> usize {
    match sv.first() {
        Some(&max) if max > 0.0 => sv.iter().filter(|&&s| s > tol * max).count(),
        _ => 0,
    }
}

/// Rank of `m` as the number of singular values above `tol` times the largest.
pub fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> Result<RankInfo, RankError> {
    check_finite(m)?;
    let singular_values = sorted_singular_values(m);
    let rank = count_above(&singular_values, tol);
    Ok(RankInfo {
        rank,
        singular_values,
    })
}

/// Orthonormal basis of the right null space of `m`, assuming rank `rank`.
fn null_space(m: &DMatrix<f64>, rank: usize) -> Vec<DVector<f64>> {
    let n = m.ncols();
    if n == 0 || rank >= n {
        return Vec::new();
    }
    if m.nrows() == 0 || rank == 0 {
        return (0..n)
            .map(|k| DVector::from_fn(n, |i, _| if i == k { 1.0 } else { 0.0 }))
            .collect();
    }
    // Pad to at least square so the SVD returns a full set of right vectors.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    order[rank..]
        .iter()
        .map(|&k| v_t.row(k).transpose())
        .collect()
}

/// Columns: the `d` translations and the infinitesimal rotations evaluated
/// at the joints (positions taken relative to the centroid).
fn rigid_motion_matrix(f: &Framework) -> DMatrix<f64> {
    let d = f.dimension().get();
    let j = f.joint_count();
    let centroid = f.centroid();
    let cols = f.dimension().rigid_motions();
    let mut t = DMatrix::zeros(d * j, cols);
    for joint in f.joints() {
        let p = joint.position - centroid;
        let base = d * joint.id;
        for k in 0..d {
            t[(base + k, k)] = 1.0;
        }
        match f.dimension() {
            Dimension::Two => {
                t[(base, 2)] = -p.y;
                t[(base + 1, 2)] = p.x;
            }
            Dimension::Three => {
                for axis in 0..3 {
                    let mut w = Vector3::zeros();
                    w[axis] = 1.0;
                    let v = w.cross(&p);
                    for k in 0..3 {
                        t[(base + k, 3 + axis)] = v[k];
                    }
                }
            }
        }
    }
    t
}

/// Dimension of the space of rigid-body motions at this configuration.
pub fn rigid_body_dimension(f: &Framework) -> usize {
    rigid_body_dimension_with_tol(f, DEFAULT_RANK_TOL)
}

pub fn rigid_body_dimension_with_tol(f: &Framework, tol: f64) -> usize {
    if f.joint_count() == 0 {
        return 0;
    }
    let t = rigid_motion_matrix(f);
    count_above(&sorted_singular_values(&t), tol)
}

pub fn mobility(f: &Framework, tol: f64) -> Result<KinematicSummary, RankError> {
    let r = rigidity_matrix(f);
    let info = numeric_rank(&r, tol)?;
    let rbd = rigid_body_dimension_with_tol(f, tol);
    let dj = f.dimension().get() * f.joint_count();
    let b = f.bar_count();
    let m = dj.saturating_sub(info.rank + rbd);
    let s = b - info.rank;
    Ok(KinematicSummary {
        j: f.joint_count(),
        b,
        rank: info.rank,
        rigid_body_dim: rbd,
        m,
        s,
        isostatic: m == 0 && s == 0,
        spans_space: rbd == f.dimension().rigid_motions(),
        singular_values: info.singular_values,
        tolerance_used: tol,
    })
}

pub fn nullspace_bases(f: &Framework, tol: f64) -> Result<NullspaceBases, RankError> {
    let system = build_system(f)?;
    let info = numeric_rank(&system.rigidity, tol)?;
    let rank = info.rank;

    let self_stresses = null_space(&system.equilibrium, rank);

    let kernel = null_space(&system.rigidity, rank);
    let rbd = rigid_body_dimension_with_tol(f, tol);
    let dj = system.rigidity.ncols();
    let m = dj.saturating_sub(rank + rbd);
    let mechanisms = if m == 0 || kernel.is_empty() {
        Vec::new()
    } else {
        // Remove the rigid-body directions, then re-orthonormalise.
        let t = rigid_motion_matrix(f);
        let svd = t.clone().svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let smax = svd.singular_values.max();
        let rigid: Vec<DVector<f64>> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > tol * smax)
            .map(|k| u.column(k).into_owned())
            .collect();
        let projected: Vec<DVector<f64>> = kernel
            .iter()
            .map(|v| {
                let mut w = v.clone();
                for q in &rigid {
                    let c = q.dot(&w);
                    w.axpy(-c, q, 1.0);
                }
                w
            })
            .collect();
        let n = DMatrix::from_columns(&projected);
        let svd = n.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        order[..m.min(order.len())]
            .iter()
            .map(|&k| u.column(k).into_owned())
            .collect()
    };

    Ok(NullspaceBases {
        self_stresses,
        mechanisms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(d: usize, pts: &[&[f64]], bars: &[(usize, usize)]) -> Framework {
        let pts: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
        Framework::new(d, &pts, bars).unwrap()
    }

    fn square(diagonals: bool) -> Framework {
        let mut bars = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        if diagonals {
            bars.extend([(0, 2), (1, 3)]);
        }
        fw(2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]], &bars)
    }

    #[test]
    fn single_bar_row() {
        let f = fw(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[(0, 1)]);
        let r = rigidity_matrix(&f);
        assert_eq!(r.as_slice(), &[-1.0, 0.0, 1.0, 0.0]);
        assert_eq!(numeric_rank(&r, DEFAULT_RANK_TOL).unwrap().rank, 1);
    }

    #[test]
    fn trivial_ranks() {
        let z = DMatrix::<f64>::zeros(3, 4);
        assert_eq!(numeric_rank(&z, DEFAULT_RANK_TOL).unwrap().rank, 0);
        let i = DMatrix::<f64>::identity(3, 3);
        assert_eq!(numeric_rank(&i, DEFAULT_RANK_TOL).unwrap().rank, 3);
        let mut bad = DMatrix::<f64>::identity(2, 2);
        bad[(1, 0)] = f64::NAN;
        assert_eq!(
            numeric_rank(&bad, DEFAULT_RANK_TOL),
            Err(RankError::NonFiniteEntry { row: 1, col: 0 })
        );
    }

    #[test]
    fn system_shapes_and_transpose() {
        let f = square(true);
        let sys = build_system(&f).unwrap();
        assert_eq!(sys.rigidity.shape(), (6, 8));
        assert_eq!(sys.equilibrium.shape(), (8, 6));
        assert_eq!(sys.equilibrium, sys.compatibility.transpose());
        for bar in f.bars() {
            let len = f.bar_length(bar.id);
            for c in 0..8 {
                let scaled = sys.compatibility[(bar.id, c)] * len;
                assert!((scaled - sys.rigidity[(bar.id, c)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rigid_body_dimensions() {
        let f = fw(2, &[&[0.0, 0.0], &[2.0, 1.0]], &[]);
        assert_eq!(rigid_body_dimension(&f), 3);
        let f = fw(3, &[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], &[]);
        assert_eq!(rigid_body_dimension(&f), 6);
        let f = fw(3, &[&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], &[3.0, 3.0, 3.0]], &[]);
        assert_eq!(rigid_body_dimension(&f), 5);
        let f = fw(3, &[&[0.5, 0.2, 0.1]], &[]);
        assert_eq!(rigid_body_dimension(&f), 3);
    }

    #[test]
    fn square_mobility() {
        let s = mobility(&square(false), DEFAULT_RANK_TOL).unwrap();
        assert_eq!((s.rank, s.m, s.s), (4, 1, 0));
        let s = mobility(&square(true), DEFAULT_RANK_TOL).unwrap();
        assert_eq!((s.rank, s.m, s.s), (5, 0, 1));
    }

    #[test]
    fn nullspaces_annihilate() {
        for (f, m, s) in [(square(false), 1, 0), (square(true), 0, 1)] {
            let sys = build_system(&f).unwrap();
            let bases = nullspace_bases(&f, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(bases.mechanisms.len(), m);
            assert_eq!(bases.self_stresses.len(), s);
            for t in &bases.self_stresses {
                assert!((&sys.equilibrium * t).norm() < 1e-9);
                assert!((t.norm() - 1.0).abs() < 1e-12);
            }
            for d in &bases.mechanisms {
                assert!((&sys.rigidity * d).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_framework_is_harmless() {
        let f = fw(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[]);
        let s = mobility(&f, DEFAULT_RANK_TOL).unwrap();
        assert_eq!((s.rank, s.m, s.s), (0, 1, 0));
    }
}
