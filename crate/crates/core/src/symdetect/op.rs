use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::framework::Dimension;

/// Largest rotation order recognised when rationalising angles.
const MAX_ORDER: u32 = 120;
const ANGLE_TOL: f64 = 1e-6;

/// Geometric type of a point-group element.
///
/// Rotations are stored as `2*pi*power/order` with `power/order` in lowest
/// terms and `0 < power/order <= 1/2`; improper rotations use the angle of
/// their rotation part, so a mirror is the `0` case and inversion the `pi` one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OpKind {
    Identity,
    Rotation { order: u32, power: u32 },
    Reflection,
    Inversion,
    ImproperRotation { order: u32, power: u32 },
}

impl OpKind {
    /// True for the `C2` column of the character tables.
    pub fn is_twofold(&self) -> bool {
        matches!(self, OpKind::Rotation { order: 2, .. })
    }

    pub fn is_proper(&self) -> bool {
        matches!(self, OpKind::Identity | OpKind::Rotation { .. })
    }

    fn rank(&self) -> u8 {
        match self {
            OpKind::Identity => 0,
            OpKind::Rotation { .. } => 1,
            OpKind::Inversion => 2,
            OpKind::Reflection => 3,
            OpKind::ImproperRotation { .. } => 4,
        }
    }

    /// Short Schoenflies-style symbol, e.g. `C5^2`, `S6`, `σ`.
    pub fn symbol(&self) -> String {
        match *self {
            OpKind::Identity => "E".into(),
            OpKind::Rotation { order, power: 1 } => format!("C{order}"),
            OpKind::Rotation { order, power } => format!("C{order}^{power}"),
            OpKind::Reflection => "σ".into(),
            OpKind::Inversion => "i".into(),
            OpKind::ImproperRotation { order, power: 1 } => format!("S{order}"),
            OpKind::ImproperRotation { order, power } => format!("S{order}^{power}"),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

/// An orthogonal map fixing the origin, with its classification.
///
/// Planar operations are embedded in 3x3 form acting trivially on `z`;
/// a planar mirror line therefore appears as a reflection whose normal lies
/// in the plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryOp {
    pub dimension: Dimension,
    pub kind: OpKind,
    #[serde(skip)]
    pub matrix: Matrix3<f64>,
    /// Rotation angle of the proper part, in `[0, pi]`.
    pub angle: f64,
    /// Rotation axis, mirror normal, or zero for `E` and `i`.
    #[serde(skip)]
    pub axis: Vector3<f64>,
}

fn rationalise(angle: f64) -> Option<(u32, u32)> {
    let turns = angle / TAU;
    (1..=MAX_ORDER).find_map(|n| {
        let k = (turns * n as f64).round();
        ((turns * n as f64 - k).abs() < ANGLE_TOL * n as f64 && k >= 1.0).then_some((n, k as u32))
    })
}

fn exact_angle(order: u32, power: u32) -> f64 {
    TAU * power as f64 / order as f64
}

fn canonical_direction(mut v: Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n == 0.0 {
        return v;
    }
    v /= n;
    for k in 0..3 {
        if v[k].abs() > 1e-9 {
            if v[k] < 0.0 {
                v = -v;
            }
            break;
        }
    }
    v
}

/// Unit vector spanning the kernel of `m` (smallest right singular vector).
fn kernel_direction(m: Matrix3<f64>) -> Vector3<f64> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let k = svd.singular_values.imin();
    v_t.row(k).transpose()
}

impl IsometryOp {
    /// Classifies an orthogonal matrix. Fails if the angle is not a rational
    /// multiple of a full turn with denominator at most 120.
    pub fn from_matrix(dimension: Dimension, matrix: Matrix3<f64>) -> Option<Self> {
        let det = matrix.determinant();
        let proper = det > 0.0;
        let (kind, angle, axis) = match dimension {
            Dimension::Two => {
                if proper {
                    let phi = matrix[(1, 0)].atan2(matrix[(0, 0)]).abs();
                    if phi < ANGLE_TOL {
                        (OpKind::Identity, 0.0, Vector3::zeros())
                    } else {
                        let (order, power) = rationalise(phi)?;
                        let phi = exact_angle(order, power);
                        (OpKind::Rotation { order, power }, phi, Vector3::z())
                    }
                } else {
                    // In the embedded form the kernel of Q + I is the in-plane normal.
                    let mut normal = kernel_direction(matrix + Matrix3::identity());
                    normal.z = 0.0;
                    (OpKind::Reflection, 0.0, canonical_direction(normal))
                }
            }
            Dimension::Three => {
                if proper {
                    let c = ((matrix.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
                    let phi = c.acos();
                    if phi < ANGLE_TOL {
                        (OpKind::Identity, 0.0, Vector3::zeros())
                    } else {
                        let (order, power) = rationalise(phi)?;
                        let phi = exact_angle(order, power);
                        let axis = rotation_axis(&matrix, phi);
                        (OpKind::Rotation { order, power }, phi, axis)
                    }
                } else {
                    let c = ((matrix.trace() + 1.0) / 2.0).clamp(-1.0, 1.0);
                    let phi = c.acos();
                    if phi < ANGLE_TOL {
                        let normal = kernel_direction(matrix + Matrix3::identity());
                        (OpKind::Reflection, 0.0, canonical_direction(normal))
                    } else if PI - phi < ANGLE_TOL {
                        (OpKind::Inversion, PI, Vector3::zeros())
                    } else {
                        let (order, power) = rationalise(phi)?;
                        let phi = exact_angle(order, power);
                        // -Q is a proper rotation by phi + pi about the same axis.
                        let axis = rotation_axis(&(-matrix), PI - phi);
                        let axis = orient_improper(&matrix, axis);
                        (OpKind::ImproperRotation { order, power }, phi, axis)
                    }
                }
            }
        };
        Some(IsometryOp {
            dimension,
            kind,
            matrix,
            angle,
            axis,
        })
    }

    pub fn identity(dimension: Dimension) -> Self {
        IsometryOp {
            dimension,
            kind: OpKind::Identity,
            matrix: Matrix3::identity(),
            angle: 0.0,
            axis: Vector3::zeros(),
        }
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn is_proper(&self) -> bool {
        self.kind.is_proper()
    }

    pub fn cos_angle(&self) -> f64 {
        self.angle.cos()
    }

    /// `2 cos(phi)` when it is an integer (orders 1, 2, 3, 4, 6), else `None`.
    pub fn twice_cos_exact(&self) -> Option<i64> {
        let v = 2.0 * self.cos_angle();
        let r = v.round();
        ((v - r).abs() < 1e-9).then_some(r as i64)
    }

    /// Order of the element in the group it generates.
    pub fn element_order(&self) -> u32 {
        match self.kind {
            OpKind::Identity => 1,
            OpKind::Rotation { order, .. } => order,
            OpKind::Reflection | OpKind::Inversion => 2,
            OpKind::ImproperRotation { order, .. } => {
                if order % 2 == 0 {
                    order
                } else {
                    2 * order
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &IsometryOp, tol: f64) -> bool {
        (self.matrix - other.matrix).amax() <= tol
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    /// Distance of `p` (relative to the fixed point) from the element's fixed set.
    pub fn distance_to_fixed_set(&self, p: &Vector3<f64>) -> f64 {
        match self.kind {
            OpKind::Identity => 0.0,
            OpKind::Rotation { .. } => match self.dimension {
                Dimension::Two => p.xy().norm(),
                Dimension::Three => (p - self.axis * self.axis.dot(p)).norm(),
            },
            OpKind::Reflection => self.axis.dot(p).abs(),
            OpKind::Inversion | OpKind::ImproperRotation { .. } => p.norm(),
        }
    }

    /// Total order used to list elements reproducibly.
    pub fn canonical_cmp(&self, other: &IsometryOp) -> Ordering {
        let key = |op: &IsometryOp| {
            let (order, power) = match op.kind {
                OpKind::Rotation { order, power } | OpKind::ImproperRotation { order, power } => {
                    (order, power)
                }
                _ => (0, 0),
            };
            (op.kind.rank(), std::cmp::Reverse(order), power)
        };
        key(self).cmp(&key(other)).then_with(|| {
            for (a, b) in self.matrix.iter().zip(other.matrix.iter()) {
                let (a, b) = ((a * 1e6).round(), (b * 1e6).round());
                match b.total_cmp(&a) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

/// Axis of a proper rotation by `phi`, oriented so the rotation is
/// counter-clockwise about it (canonical sign for half turns).
fn rotation_axis(m: &Matrix3<f64>, phi: f64) -> Vector3<f64> {
    let axis = kernel_direction(m - Matrix3::identity());
    if (PI - phi).abs() < 1e-6 {
        return canonical_direction(axis);
    }
    let skew = Vector3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    );
    if skew.dot(&axis) < 0.0 {
        -axis
    } else {
        axis
    }
}

fn orient_improper(m: &Matrix3<f64>, axis: Vector3<f64>) -> Vector3<f64> {
    // Q = sigma_h * R(phi); undo the reflection and orient by R.
    let sigma = Matrix3::identity() - 2.0 * axis * axis.transpose();
    let r = sigma * m;
    let skew = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    );
    if skew.dot(&axis) < 0.0 {
        -axis
    } else {
        axis
    }
}

/// Rotation by `angle` about the unit vector `axis`.
pub fn rotation_matrix(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let a = axis.normalize();
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(a), angle).into_inner()
}

/// Reflection in the plane with the given normal.
pub fn reflection_matrix(normal: &Vector3<f64>) -> Matrix3<f64> {
    let n = normal.normalize();
    Matrix3::identity() - 2.0 * n * n.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify3(m: Matrix3<f64>) -> OpKind {
        IsometryOp::from_matrix(Dimension::Three, m).unwrap().kind
    }

    #[test]
    fn classifies_three_dimensional_kinds() {
        let z = Vector3::z();
        assert_eq!(classify3(Matrix3::identity()), OpKind::Identity);
        assert_eq!(
            classify3(rotation_matrix(&z, TAU / 4.0)),
            OpKind::Rotation { order: 4, power: 1 }
        );
        assert_eq!(
            classify3(rotation_matrix(&z, 2.0 * TAU / 5.0)),
            OpKind::Rotation { order: 5, power: 2 }
        );
        assert_eq!(classify3(-Matrix3::identity()), OpKind::Inversion);
        assert_eq!(classify3(reflection_matrix(&z)), OpKind::Reflection);
        let s6 = reflection_matrix(&z) * rotation_matrix(&z, TAU / 6.0);
        assert_eq!(
            classify3(s6),
            OpKind::ImproperRotation { order: 6, power: 1 }
        );
        let op = IsometryOp::from_matrix(Dimension::Three, s6).unwrap();
        assert_eq!(op.element_order(), 6);
        assert!((op.axis - z).norm() < 1e-9);
        // S3 has order 6.
        let s3 = reflection_matrix(&z) * rotation_matrix(&z, TAU / 3.0);
        assert_eq!(IsometryOp::from_matrix(Dimension::Three, s3).unwrap().element_order(), 6);
    }

    #[test]
    fn rotation_axis_orientation() {
        let axis = Vector3::new(1.0, 2.0, -0.5).normalize();
        let op =
            IsometryOp::from_matrix(Dimension::Three, rotation_matrix(&axis, TAU / 3.0)).unwrap();
        assert!((op.axis - axis).norm() < 1e-9);
        let op =
            IsometryOp::from_matrix(Dimension::Three, rotation_matrix(&axis, -TAU / 3.0)).unwrap();
        assert!((op.axis + axis).norm() < 1e-9);
    }

    #[test]
    fn planar_kinds() {
        let r = rotation_matrix(&Vector3::z(), TAU / 3.0);
        let op = IsometryOp::from_matrix(Dimension::Two, r).unwrap();
        assert_eq!(op.kind, OpKind::Rotation { order: 3, power: 1 });
        assert_eq!(op.twice_cos_exact(), Some(-1));
        let m = reflection_matrix(&Vector3::new(1.0, 1.0, 0.0));
        let op = IsometryOp::from_matrix(Dimension::Two, m).unwrap();
        assert_eq!(op.kind, OpKind::Reflection);
        assert!(op.axis.z.abs() < 1e-12);
        assert!((op.axis.x - op.axis.y).abs() < 1e-9);
    }

    #[test]
    fn irrational_cosines_are_not_exact() {
        let op = IsometryOp::from_matrix(Dimension::Three, rotation_matrix(&Vector3::z(), TAU / 5.0))
            .unwrap();
        assert_eq!(op.twice_cos_exact(), None);
    }
}
