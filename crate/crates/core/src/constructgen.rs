//! Generators for symmetric isostatic frameworks: the deltahedral Platonic
//! solids, face capping (Henneberg moves), twisted-octahedron caps, hat
//! stacks along three-fold axes, and small planar examples for each of the
//! planar groups that admit isostatic frameworks.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::{Dimension, Framework, FrameworkError};
use crate::symdetect::{self, rotation_matrix, OpKind, SymmetryError};

const FACE_TOL: f64 = 1e-9;

/// Default twist of a twisted-octahedron cap, in radians (20 degrees).
pub const DEFAULT_TWIST: f64 = 20.0 * PI / 180.0;
/// Default cap height as a fraction of the face circumradius.
pub const DEFAULT_TWIST_HEIGHT_FACTOR: f64 = 0.8;
/// Default spacing of hats as a fraction of the face circumradius.
pub const DEFAULT_HAT_STEP_FACTOR: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("face {0:?} is degenerate or its edges are not all bars")]
    DegenerateFace([usize; 3]),
    #[error("twist angle {0} rad with height {1} gives a degenerate cap")]
    DegenerateTwist(f64, f64),
    #[error("face {0:?} is not centred on a three-fold axis of the framework")]
    NotOnThreefoldAxis([usize; 3]),
    #[error("no stellation point above face {0:?}")]
    NoStellationPoint([usize; 3]),
    #[error("construction needs a 3D framework")]
    NeedsThreeDimensions,
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platonic {
    Tetrahedron,
    Octahedron,
    Icosahedron,
}

impl std::str::FromStr for Platonic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tetrahedron" => Ok(Platonic::Tetrahedron),
            "octahedron" => Ok(Platonic::Octahedron),
            "icosahedron" => Ok(Platonic::Icosahedron),
            other => Err(format!("unknown platonic solid {other:?}")),
        }
    }
}

/// A triangle of the framework, ordered counter-clockwise seen from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Face(pub [usize; 3]);

impl Face {
    pub fn new(f: &Framework, joints: [usize; 3]) -> Result<Self, ConstructError> {
        let [a, b, c] = joints;
        let edges_ok = [(a, b), (b, c), (c, a)]
            .iter()
            .all(|&(u, v)| u < f.joint_count() && v < f.joint_count() && f.bar_between(u, v).is_some());
        if !edges_ok {
            return Err(ConstructError::DegenerateFace(joints));
        }
        let n = (f.position(b) - f.position(a)).cross(&(f.position(c) - f.position(a)));
        if n.norm() <= FACE_TOL * f.diameter().powi(2) {
            return Err(ConstructError::DegenerateFace(joints));
        }
        Ok(Face(joints))
    }

    pub fn centroid(&self, f: &Framework) -> Vector3<f64> {
        self.0.iter().map(|&u| f.position(u)).sum::<Vector3<f64>>() / 3.0
    }

    /// Unit normal by the right-hand rule on the stored order.
    pub fn normal(&self, f: &Framework) -> Vector3<f64> {
        let [a, b, c] = self.0;
        (f.position(b) - f.position(a))
            .cross(&(f.position(c) - f.position(a)))
            .normalize()
    }

    pub fn circumradius(&self, f: &Framework) -> f64 {
        let g = self.centroid(f);
        // Circumcentre of the triangle.
        let [a, b, c] = self.0.map(|u| f.position(u));
        let (ab, ac) = (b - a, c - a);
        let n = ab.cross(&ac);
        let centre = a + (ac.norm_squared() * n.cross(&ab) + ab.norm_squared() * ac.cross(&n))
            / (2.0 * n.norm_squared());
        let _ = g;
        (a - centre).norm()
    }

    /// Same face with outward orientation relative to `centre`.
    fn oriented_away_from(self, f: &Framework, centre: &Vector3<f64>) -> Face {
        if self.normal(f).dot(&(self.centroid(f) - centre)) < 0.0 {
            let [a, b, c] = self.0;
            Face([a, c, b])
        } else {
            self
        }
    }
}

/// Triangles of the framework whose planes support the convex hull,
/// oriented outward, sorted by joint ids.
pub fn hull_faces(f: &Framework) -> Vec<Face> {
    if f.dimension() != Dimension::Three {
        return Vec::new();
    }
    let adj = f.adjacency();
    let tol = FACE_TOL * f.diameter().max(1.0);
    let centre = f.centroid();
    let mut faces = Vec::new();
    for a in 0..f.joint_count() {
        for &b in adj[a].iter().filter(|&&b| b > a) {
            for &c in adj[b].iter().filter(|&&c| c > b) {
                if f.bar_between(a, c).is_none() {
                    continue;
                }
                let pa = f.position(a);
                let n = (f.position(b) - pa).cross(&(f.position(c) - pa));
                if n.norm() <= tol {
                    continue;
                }
                let n = n.normalize();
                let side: Vec<f64> = f.positions().map(|p| (p - pa).dot(&n)).collect();
                let all_below = side.iter().all(|&s| s <= tol);
                let all_above = side.iter().all(|&s| s >= -tol);
                if all_below || all_above {
                    faces.push(Face([a, b, c]).oriented_away_from(f, &centre));
                }
            }
        }
    }
    faces
}

fn push_joint(points: &mut Vec<Vector3<f64>>, p: Vector3<f64>) -> usize {
    points.push(p);
    points.len() - 1
}

fn rebuild(
    f: &Framework,
    points: Vec<Vector3<f64>>,
    bars: Vec<(usize, usize)>,
) -> Result<Framework, ConstructError> {
    Ok(Framework::from_points(
        f.dimension(),
        points,
        &bars,
        f.separation_tol(),
    )?)
}

pub fn platonic(kind: Platonic) -> Framework {
    let points: Vec<Vector3<f64>> = match kind {
        Platonic::Tetrahedron => vec![
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ],
        Platonic::Octahedron => vec![
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(-1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, -1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(0.0, 0.0, -1.0),
        ],
        Platonic::Icosahedron => {
            let tau = (1.0 + 5f64.sqrt()) / 2.0;
            let mut pts = Vec::new();
            for s1 in [1.0, -1.0] {
                for s2 in [tau, -tau] {
                    pts.push(Vector3::new(0.0, s1, s2));
                    pts.push(Vector3::new(s1, s2, 0.0));
                    pts.push(Vector3::new(s2, 0.0, s1));
                }
            }
            pts
        }
    };
    // Edges join nearest neighbours.
    let mut min = f64::INFINITY;
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            min = min.min((points[a] - points[b]).norm());
        }
    }
    let mut bars = Vec::new();
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            if (points[a] - points[b]).norm() <= min * (1.0 + 1e-9) {
                bars.push((a, b));
            }
        }
    }
    Framework::from_points(Dimension::Three, points, &bars, crate::framework::DEFAULT_SEPARATION_TOL)
        .expect("platonic solids are valid frameworks")
}

fn require_3d(f: &Framework) -> Result<(), ConstructError> {
    if f.dimension() == Dimension::Three {
        Ok(())
    } else {
        Err(ConstructError::NeedsThreeDimensions)
    }
}

/// Outward unit normal of a face, relative to the framework centroid.
fn outward_normal(f: &Framework, face: &Face) -> Vector3<f64> {
    let n = face.normal(f);
    if n.dot(&(face.centroid(f) - f.centroid())) < 0.0 {
        -n
    } else {
        n
    }
}

/// Adds one joint above the face centroid, joined to the three face joints.
pub fn cap_face(f: &Framework, face: &Face, apex_height: f64) -> Result<Framework, ConstructError> {
    require_3d(f)?;
    let face = Face::new(f, face.0)?;
    if apex_height.abs() <= FACE_TOL {
        return Err(ConstructError::DegenerateFace(face.0));
    }
    let apex = face.centroid(f) + apex_height * outward_normal(f, &face);
    let mut points: Vec<_> = f.positions().collect();
    let mut bars = f.bar_pairs();
    let k = push_joint(&mut points, apex);
    bars.extend(face.0.iter().map(|&u| (u, k)));
    rebuild(f, points, bars)
}

/// Height of a cap apex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CapHeight {
    /// Where the planes of the three edge-adjacent faces meet.
    Stellation,
    /// Distance along the outward normal from the face centroid.
    Absolute(f64),
}

/// Intersection point of the planes of the three faces sharing an edge with `face`.
pub fn stellation_point(f: &Framework, faces: &[Face], face: &Face) -> Result<Vector3<f64>, ConstructError> {
    let [a, b, c] = face.0;
    let mut rows = Vec::new();
    for (u, v) in [(a, b), (b, c), (c, a)] {
        let neighbour = faces
            .iter()
            .find(|g| g != &face && g.0.contains(&u) && g.0.contains(&v))
            .ok_or(ConstructError::NoStellationPoint(face.0))?;
        let n = outward_normal(f, neighbour);
        rows.push((n, n.dot(&neighbour.centroid(f))));
    }
    let m = Matrix3::from_rows(&[
        rows[0].0.transpose(),
        rows[1].0.transpose(),
        rows[2].0.transpose(),
    ]);
    let rhs = Vector3::new(rows[0].1, rows[1].1, rows[2].1);
    let p = m
        .lu()
        .solve(&rhs)
        .ok_or(ConstructError::NoStellationPoint(face.0))?;
    let height = (p - face.centroid(f)).dot(&outward_normal(f, face));
    if height <= FACE_TOL {
        return Err(ConstructError::NoStellationPoint(face.0));
    }
    Ok(p)
}

/// Caps every hull face at a common height, keeping the full point group.
pub fn cap_all_faces_symmetric(f: &Framework, height: CapHeight) -> Result<Framework, ConstructError> {
    require_3d(f)?;
    let faces = hull_faces(f);
    let mut points: Vec<_> = f.positions().collect();
    let mut bars = f.bar_pairs();
    for face in &faces {
        let apex = match height {
            CapHeight::Stellation => stellation_point(f, &faces, face)?,
            CapHeight::Absolute(h) => {
                if h.abs() <= FACE_TOL {
                    return Err(ConstructError::DegenerateFace(face.0));
                }
                face.centroid(f) + h * outward_normal(f, face)
            }
        };
        let k = push_joint(&mut points, apex);
        bars.extend(face.0.iter().map(|&u| (u, k)));
    }
    rebuild(f, points, bars)
}

/// Caps every hull face with a twisted octahedron: three new joints form a
/// copy of the face rotated by `twist` about its outward normal and lifted by
/// `height`; each new joint is joined to its two neighbours in the new
/// triangle and to two joints of the old face.
///
/// `height` defaults to `0.8` times the face circumradius.
pub fn twisted_cap_all_faces(
    f: &Framework,
    twist: f64,
    height: Option<f64>,
) -> Result<Framework, ConstructError> {
    require_3d(f)?;
    let third = TAU / 6.0;
    let reduced = twist.rem_euclid(2.0 * third);
    if reduced.abs() < 1e-9 || (reduced - third).abs() < 1e-9 || (2.0 * third - reduced).abs() < 1e-9 {
        return Err(ConstructError::DegenerateTwist(twist, height.unwrap_or(f64::NAN)));
    }
    let faces = hull_faces(f);
    let mut points: Vec<_> = f.positions().collect();
    let mut bars = f.bar_pairs();
    for face in &faces {
        let g = face.centroid(f);
        let n = outward_normal(f, face);
        let h = height.unwrap_or(DEFAULT_TWIST_HEIGHT_FACTOR * face.circumradius(f));
        if h.abs() <= FACE_TOL {
            return Err(ConstructError::DegenerateTwist(twist, h));
        }
        let rot = rotation_matrix(&n, twist);
        let new: Vec<usize> = face
            .0
            .iter()
            .map(|&u| push_joint(&mut points, g + rot * (f.position(u) - g) + h * n))
            .collect();
        for k in 0..3 {
            let next = (k + 1) % 3;
            bars.push((new[k], new[next]));
            bars.push((new[k], face.0[k]));
            bars.push((new[k], face.0[next]));
        }
    }
    rebuild(f, points, bars)
}

/// Adds `k` joints along the axis through `face`'s centroid, each joined to
/// the three joints of `face`. Hats sit at `step, 2*step, ...` above the face.
pub fn hat_stack(f: &Framework, face: &Face, k: usize, step: Option<f64>) -> Result<Framework, ConstructError> {
    require_3d(f)?;
    let face = Face::new(f, face.0)?;
    if k == 0 {
        return Ok(f.clone());
    }
    let sym = symdetect::analyze_symmetry(f, symdetect::DEFAULT_GEOM_TOL)?;
    let g = face.centroid(f) - sym.centroid;
    let on_axis = sym.assignments.iter().any(|a| {
        matches!(a.op.kind, OpKind::Rotation { order: 3, .. })
            && a.op.axis.cross(&g).norm() <= 1e-6 * g.norm().max(1.0)
            && face.0.iter().all(|u| face.0.contains(&a.joint_perm[*u]))
    });
    if !on_axis {
        return Err(ConstructError::NotOnThreefoldAxis(face.0));
    }
    let step = step.unwrap_or(DEFAULT_HAT_STEP_FACTOR * face.circumradius(f));
    if step <= FACE_TOL {
        return Err(ConstructError::DegenerateFace(face.0));
    }
    let n = outward_normal(f, &face);
    let mut points: Vec<_> = f.positions().collect();
    let mut bars = f.bar_pairs();
    for level in 1..=k {
        let hat = push_joint(&mut points, face.centroid(f) + step * level as f64 * n);
        bars.extend(face.0.iter().map(|&u| (u, hat)));
    }
    rebuild(f, points, bars)
}

/// Planar examples, one per group admitting isostatic frameworks. The `Perp`
/// variants have a bar centred on and perpendicular to each mirror; the `In`
/// variants have a bar lying in each mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fig2Group {
    C1,
    C2,
    C3,
    CsPerp,
    CsIn,
    C2v,
    C3vPerp,
    C3vIn,
}

impl Fig2Group {
    pub const ALL: [Fig2Group; 8] = [
        Fig2Group::C1,
        Fig2Group::C2,
        Fig2Group::C3,
        Fig2Group::CsPerp,
        Fig2Group::CsIn,
        Fig2Group::C2v,
        Fig2Group::C3vPerp,
        Fig2Group::C3vIn,
    ];

    /// Schoenflies label of the group the example realises.
    pub fn label(self) -> &'static str {
        match self {
            Fig2Group::C1 => "C1",
            Fig2Group::C2 => "C2",
            Fig2Group::C3 => "C3",
            Fig2Group::CsPerp | Fig2Group::CsIn => "Cs",
            Fig2Group::C2v => "C2v",
            Fig2Group::C3vPerp | Fig2Group::C3vIn => "C3v",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fig2Group::C1 => "C1",
            Fig2Group::C2 => "C2",
            Fig2Group::C3 => "C3",
            Fig2Group::CsPerp => "Cs_perp",
            Fig2Group::CsIn => "Cs_in",
            Fig2Group::C2v => "C2v",
            Fig2Group::C3vPerp => "C3v_perp",
            Fig2Group::C3vIn => "C3v_in",
        }
    }
}

impl std::str::FromStr for Fig2Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fig2Group::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown example group {s:?}"))
    }
}

fn polar(r: f64, angle_deg: f64) -> Vec<f64> {
    let a = angle_deg.to_radians();
    vec![r * a.cos(), r * a.sin()]
}

/// Small planar isostatic framework with the given symmetry group.
pub fn fig2_examples(group: Fig2Group) -> Framework {
    let (pts, bars): (Vec<Vec<f64>>, Vec<(usize, usize)>) = match group {
        // Two triangles on a common edge, no symmetry.
        Fig2Group::C1 => (
            vec![vec![0.0, 0.0], vec![1.0, 0.1], vec![0.3, 1.1], vec![1.4, 1.3]],
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
        ),
        // Parallelogram with one diagonal; the diagonal is centred on the C2 point.
        Fig2Group::C2 => (
            vec![vec![1.0, 0.2], vec![0.3, 0.9], vec![-1.0, -0.2], vec![-0.3, -0.9]],
            vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        ),
        // Inner triangle plus an outer, twisted triangle; outer joints on two inner ones.
        Fig2Group::C3 => {
            let mut pts: Vec<Vec<f64>> = (0..3).map(|k| polar(1.0, 90.0 + 120.0 * k as f64)).collect();
            pts.extend((0..3).map(|k| polar(2.3, 127.0 + 120.0 * k as f64)));
            let mut bars = vec![(0, 1), (1, 2), (2, 0)];
            for k in 0..3 {
                bars.push((3 + k, k));
                bars.push((3 + k, (k + 1) % 3));
            }
            (pts, bars)
        }
        // Isosceles trapezoid; the long base crosses the mirror at right angles.
        Fig2Group::CsPerp => (
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.4, 1.3], vec![-0.4, 1.3]],
            vec![(0, 1), (0, 2), (1, 3), (0, 3), (1, 2)],
        ),
        // Kite; the spine lies in the mirror.
        Fig2Group::CsIn => (
            vec![vec![0.0, 0.0], vec![0.0, 1.5], vec![1.0, 0.6], vec![-1.0, 0.6]],
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
        ),
        // Rhombus with its long diagonal: the diagonal lies in one mirror and
        // crosses the other perpendicularly.
        Fig2Group::C2v => (
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 0.6], vec![0.0, -0.6]],
            vec![(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)],
        ),
        // Triangle with a hat on each edge; each inner edge is perpendicular to a mirror.
        Fig2Group::C3vPerp => {
            let mut pts: Vec<Vec<f64>> = (0..3).map(|k| polar(1.0, 90.0 + 120.0 * k as f64)).collect();
            pts.extend((0..3).map(|k| polar(1.7, 270.0 + 120.0 * k as f64)));
            let mut bars = vec![(0, 1), (1, 2), (2, 0)];
            for k in 0..3 {
                bars.push((3 + k, (k + 1) % 3));
                bars.push((3 + k, (k + 2) % 3));
            }
            (pts, bars)
        }
        // Two aligned concentric triangles joined as K_{3,3}; the radial bars lie in the mirrors.
        Fig2Group::C3vIn => {
            let mut pts: Vec<Vec<f64>> = (0..3).map(|k| polar(1.0, 90.0 + 120.0 * k as f64)).collect();
            pts.extend((0..3).map(|k| polar(2.5, 90.0 + 120.0 * k as f64)));
            let mut bars = Vec::new();
            for k in 0..3 {
                for i in 0..3 {
                    bars.push((3 + k, i));
                }
            }
            (pts, bars)
        }
    };
    Framework::new(2, &pts, &bars).expect("fixtures are valid")
}

/// Planar ring framework with `n`-fold rotational symmetry: an inner n-gon,
/// an outer ring of joints each braced to two consecutive inner joints, and
/// optionally the long diagonals of the inner ring (even `n`). With
/// `mirrored` the outer joints sit on mirror lines, giving `C_nv`; otherwise
/// they are twisted and the group is `C_n`.
pub fn rotor(n: usize, mirrored: bool, diagonals: bool) -> Framework {
    assert!(n >= 3, "rotor needs at least three spokes");
    let step = 360.0 / n as f64;
    let offset = if mirrored { step / 2.0 } else { step * 0.3 };
    let mut pts: Vec<Vec<f64>> = (0..n).map(|k| polar(1.0, step * k as f64)).collect();
    pts.extend((0..n).map(|k| polar(1.9, step * k as f64 + offset)));
    let mut bars = Vec::new();
    for k in 0..n {
        bars.push((k, (k + 1) % n));
        bars.push((n + k, k));
        bars.push((n + k, (k + 1) % n));
    }
    if diagonals && n % 2 == 0 {
        bars.extend((0..n / 2).map(|k| (k, k + n / 2)));
    }
    Framework::new(2, &pts, &bars).expect("rotor is valid")
}

/// Two triangular bipyramids sharing their apexes (no bar between the
/// apexes): 8 joints, 18 bars, scalar count zero, yet one mechanism and one
/// state of self-stress.
pub fn double_banana() -> Framework {
    let pts = vec![
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
        vec![1.0, 0.1, 0.05],
        vec![1.6, 0.7, -0.1],
        vec![1.5, -0.6, 0.1],
        vec![-1.0, 0.15, -0.05],
        vec![-1.55, -0.65, 0.08],
        vec![-1.45, 0.75, -0.12],
    ];
    let mut bars = Vec::new();
    for ring in [[2, 3, 4], [5, 6, 7]] {
        for k in 0..3 {
            bars.push((ring[k], ring[(k + 1) % 3]));
            bars.push((0, ring[k]));
            bars.push((1, ring[k]));
        }
    }
    Framework::new(3, &pts, &bars).expect("double banana is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn platonic_counts() {
        for (kind, j, b) in [
            (Platonic::Tetrahedron, 4, 6),
            (Platonic::Octahedron, 6, 12),
            (Platonic::Icosahedron, 12, 30),
        ] {
            let f = platonic(kind);
            assert_eq!((f.joint_count(), f.bar_count()), (j, b));
            assert_eq!(f.maxwell_count(), 0);
        }
    }

    #[test]
    fn hull_faces_of_platonic_solids() {
        assert_eq!(hull_faces(&platonic(Platonic::Tetrahedron)).len(), 4);
        assert_eq!(hull_faces(&platonic(Platonic::Octahedron)).len(), 8);
        let ico = platonic(Platonic::Icosahedron);
        let faces = hull_faces(&ico);
        assert_eq!(faces.len(), 20);
        for face in faces {
            assert!(outward_normal(&ico, &face).dot(&face.normal(&ico)) > 0.99);
        }
    }

    #[test]
    fn capping_counts() {
        let tet = platonic(Platonic::Tetrahedron);
        let face = hull_faces(&tet)[0];
        let capped = cap_face(&tet, &face, 0.7).unwrap();
        assert_eq!((capped.joint_count(), capped.bar_count()), (5, 9));
        assert_eq!(capped.maxwell_count(), 0);

        let all = cap_all_faces_symmetric(&tet, CapHeight::Absolute(0.5)).unwrap();
        assert_eq!((all.joint_count(), all.bar_count()), (8, 18));

        let ico = platonic(Platonic::Icosahedron);
        let stellated = cap_all_faces_symmetric(&ico, CapHeight::Stellation).unwrap();
        assert_eq!((stellated.joint_count(), stellated.bar_count()), (32, 90));
        assert_eq!(stellated.maxwell_count(), 0);
    }

    #[test]
    fn tetrahedron_has_no_stellation() {
        let tet = platonic(Platonic::Tetrahedron);
        assert!(cap_all_faces_symmetric(&tet, CapHeight::Stellation).is_err());
    }

    #[test]
    fn degenerate_inputs() {
        let tet = platonic(Platonic::Tetrahedron);
        assert!(matches!(
            Face::new(&tet, [0, 1, 7]),
            Err(ConstructError::DegenerateFace(_))
        ));
        let face = hull_faces(&tet)[0];
        assert!(cap_face(&tet, &face, 0.0).is_err());
        assert!(matches!(
            twisted_cap_all_faces(&tet, 0.0, None),
            Err(ConstructError::DegenerateTwist(..))
        ));
        assert!(matches!(
            twisted_cap_all_faces(&tet, PI / 3.0, None),
            Err(ConstructError::DegenerateTwist(..))
        ));
        assert!(twisted_cap_all_faces(&tet, 0.3, Some(0.0)).is_err());
        let planar = fig2_examples(Fig2Group::C1);
        assert_eq!(
            cap_all_faces_symmetric(&planar, CapHeight::Absolute(1.0)),
            Err(ConstructError::NeedsThreeDimensions)
        );
    }

    #[test]
    fn twisted_caps_counts() {
        let oct = platonic(Platonic::Octahedron);
        let t = twisted_cap_all_faces(&oct, DEFAULT_TWIST, None).unwrap();
        assert_eq!((t.joint_count(), t.bar_count()), (6 + 24, 12 + 72));
        assert_eq!(t.maxwell_count(), 0);
    }

    #[test]
    fn hat_stack_counts() {
        let ico = platonic(Platonic::Icosahedron);
        let face = hull_faces(&ico)[0];
        assert_eq!(hat_stack(&ico, &face, 0, None).unwrap(), ico);
        let stacked = hat_stack(&ico, &face, 3, None).unwrap();
        assert_eq!(stacked.joint_count(), 15);
        assert_eq!(stacked.maxwell_count(), 0);
    }

    #[test]
    fn hat_stack_needs_threefold_axis() {
        // A capped tetrahedron loses the three-fold axis through the faces
        // adjacent to the cap.
        let tet = platonic(Platonic::Tetrahedron);
        let faces = hull_faces(&tet);
        let capped = cap_face(&tet, &faces[0], 2.0).unwrap();
        let other = faces[1];
        assert!(matches!(
            hat_stack(&capped, &other, 1, None),
            Err(ConstructError::NotOnThreefoldAxis(_))
        ));
    }

    #[test]
    fn fig2_counts() {
        for g in Fig2Group::ALL {
            let f = fig2_examples(g);
            assert_eq!(f.maxwell_count(), 0, "{}", g.name());
        }
        let c2 = fig2_examples(Fig2Group::C2);
        assert_eq!(c2.joint_count() % 2, 0);
        assert_eq!(c2.bar_count() % 2, 1);
    }

    #[test]
    fn rotor_counts() {
        assert_eq!(rotor(6, false, true).maxwell_count(), 0);
        assert_eq!(rotor(4, false, true).maxwell_count(), -1);
        assert_eq!(rotor(5, false, false).maxwell_count(), 2);
    }

    #[test]
    fn double_banana_counts() {
        let f = double_banana();
        assert_eq!((f.joint_count(), f.bar_count()), (8, 18));
        assert_eq!(f.maxwell_count(), 0);
    }
}
