//! Bar-and-joint frameworks: validated geometry, connectivity and the
//! elementary counts every analysis starts from.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Joints closer than this (in coordinate units) are treated as coincident.
pub const DEFAULT_SEPARATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameworkError {
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("joint {joint} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        joint: usize,
        expected: usize,
        found: usize,
    },
    #[error("joint {0} has a non-finite coordinate")]
    NonFiniteCoordinate(usize),
    #[error("joints {0} and {1} coincide (separation below {2:e})")]
    DuplicateJoint(usize, usize, f64),
    #[error("bars {0} and {1} join the same pair of joints")]
    DuplicateBar(usize, usize),
    #[error("bar {bar} references joint {joint}, which does not exist")]
    DanglingEndpoint { bar: usize, joint: usize },
    #[error("bar {bar} joins joint {joint} to itself")]
    SelfLoop { bar: usize, joint: usize },
    #[error("bar subset is empty")]
    EmptySubset,
    #[error("bar {0} does not exist")]
    UnknownBar(usize),
    #[error("could not parse framework: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Spatial dimension of a framework.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn from_usize(d: usize) -> Result<Self, FrameworkError> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(FrameworkError::BadDimension(other)),
        }
    }

    pub fn get(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Dimension of the Euclidean motion group: translations plus rotations.
    pub fn rigid_motions(self) -> usize {
        match self {
            Dimension::Two => 3,
            Dimension::Three => 6,
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.get() as u64)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}D", self.get())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub id: usize,
    /// Planar frameworks keep `z = 0`.
    pub position: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bar {
    pub id: usize,
    /// Stored with the smaller joint id first.
    pub ends: (usize, usize),
}

impl Bar {
    pub fn touches(&self, joint: usize) -> bool {
        self.ends.0 == joint || self.ends.1 == joint
    }

    pub fn other(&self, joint: usize) -> Option<usize> {
        if self.ends.0 == joint {
            Some(self.ends.1)
        } else if self.ends.1 == joint {
            Some(self.ends.0)
        } else {
            None
        }
    }
}

/// An immutable, validated bar-and-joint framework.
#[derive(Debug, Clone)]
pub struct Framework {
    dimension: Dimension,
    joints: Vec<Joint>,
    bars: Vec<Bar>,
    bar_index: HashMap<(usize, usize), usize>,
    separation_tol: f64,
}

impl PartialEq for Framework {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.joints == other.joints && self.bars == other.bars
    }
}

impl Framework {
    /// Validates and builds a framework with the default separation tolerance.
    pub fn new(
        dimension: usize,
        positions: &[Vec<f64>],
        bar_pairs: &[(usize, usize)],
    ) -> Result<Self, FrameworkError> {
        Self::with_tolerance(dimension, positions, bar_pairs, DEFAULT_SEPARATION_TOL)
    }

    pub fn with_tolerance(
        dimension: usize,
        positions: &[Vec<f64>],
        bar_pairs: &[(usize, usize)],
        separation_tol: f64,
    ) -> Result<Self, FrameworkError> {
        let dim = Dimension::from_usize(dimension)?;
        let mut points = Vec::with_capacity(positions.len());
        for (id, p) in positions.iter().enumerate() {
            if p.len() != dimension {
                return Err(FrameworkError::CoordinateCount {
                    joint: id,
                    expected: dimension,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(FrameworkError::NonFiniteCoordinate(id));
            }
            let z = if dimension == 3 { p[2] } else { 0.0 };
            points.push(Vector3::new(p[0], p[1], z));
        }
        Self::from_points(dim, points, bar_pairs, separation_tol)
    }

    /// Builds from 3-vectors directly; for 2D the `z` components must be zero.
    pub fn from_points(
        dimension: Dimension,
        points: Vec<Vector3<f64>>,
        bar_pairs: &[(usize, usize)],
        separation_tol: f64,
    ) -> Result<Self, FrameworkError> {
        for (id, p) in points.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(FrameworkError::NonFiniteCoordinate(id));
            }
            if dimension == Dimension::Two && p.z != 0.0 {
                return Err(FrameworkError::CoordinateCount {
                    joint: id,
                    expected: 2,
                    found: 3,
                });
            }
        }
        for a in 0..points.len() {
            for b in (a + 1)..points.len() {
                if (points[a] - points[b]).norm() <= separation_tol {
                    return Err(FrameworkError::DuplicateJoint(a, b, separation_tol));
                }
            }
        }

        let mut bars = Vec::with_capacity(bar_pairs.len());
        let mut bar_index = HashMap::with_capacity(bar_pairs.len());
        for (id, &(u, v)) in bar_pairs.iter().enumerate() {
            for end in [u, v] {
                if end >= points.len() {
                    return Err(FrameworkError::DanglingEndpoint { bar: id, joint: end });
                }
            }
            if u == v {
                return Err(FrameworkError::SelfLoop { bar: id, joint: u });
            }
            let ends = (u.min(v), u.max(v));
            if let Some(&prev) = bar_index.get(&ends) {
                return Err(FrameworkError::DuplicateBar(prev, id));
            }
            bar_index.insert(ends, id);
            bars.push(Bar { id, ends });
        }

        let joints = points
            .into_iter()
            .enumerate()
            .map(|(id, position)| Joint { id, position })
            .collect();
        Ok(Framework {
            dimension,
            joints,
            bars,
            bar_index,
            separation_tol,
        })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    pub fn bar_count(&self) -> usize {
        self.bars.len()
    }

    pub fn separation_tol(&self) -> f64 {
        self.separation_tol
    }

    pub fn position(&self, joint: usize) -> Vector3<f64> {
        self.joints[joint].position
    }

    pub fn positions(&self) -> impl Iterator<Item = Vector3<f64>> + '_ {
        self.joints.iter().map(|j| j.position)
    }

    /// Id of the bar joining `u` and `v`, if any.
    pub fn bar_between(&self, u: usize, v: usize) -> Option<usize> {
        self.bar_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn bar_pairs(&self) -> Vec<(usize, usize)> {
        self.bars.iter().map(|b| b.ends).collect()
    }

    pub fn bar_length(&self, bar: usize) -> f64 {
        let (u, v) = self.bars[bar].ends;
        (self.position(u) - self.position(v)).norm()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.joints.len()];
        for bar in &self.bars {
            deg[bar.ends.0] += 1;
            deg[bar.ends.1] += 1;
        }
        deg
    }

    /// Neighbour lists, sorted by joint id.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.joints.len()];
        for bar in &self.bars {
            adj[bar.ends.0].push(bar.ends.1);
            adj[bar.ends.1].push(bar.ends.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Joints not touched by any bar. They are legal but always flex.
    pub fn isolated_joints(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn centroid(&self) -> Vector3<f64> {
        if self.joints.is_empty() {
            return Vector3::zeros();
        }
        self.positions().sum::<Vector3<f64>>() / self.joints.len() as f64
    }

    /// Largest pairwise joint distance.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for a in 0..self.joints.len() {
            for b in (a + 1)..self.joints.len() {
                best = best.max((self.position(a) - self.position(b)).norm());
            }
        }
        best
    }

    /// `3j - b - 6` in 3D, `2j - b - 3` in 2D.
    pub fn maxwell_count(&self) -> i64 {
        let j = self.joint_count() as i64;
        let b = self.bar_count() as i64;
        match self.dimension {
            Dimension::Two => 2 * j - b - 3,
            Dimension::Three => 3 * j - b - 6,
        }
    }

    /// Joints touched and bars counted for a subset of bars, as `(j*, b*)`.
    pub fn induced_counts(&self, bar_subset: &[usize]) -> Result<(usize, usize), FrameworkError> {
        if bar_subset.is_empty() {
            return Err(FrameworkError::EmptySubset);
        }
        let mut touched = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for &id in bar_subset {
            let bar = self.bars.get(id).ok_or(FrameworkError::UnknownBar(id))?;
            seen.insert(id);
            touched.insert(bar.ends.0);
            touched.insert(bar.ends.1);
        }
        Ok((touched.len(), seen.len()))
    }

    /// Same connectivity with every joint moved by `map`.
    pub fn map_positions<F>(&self, mut map: F) -> Result<Framework, FrameworkError>
    where
        F: FnMut(usize, Vector3<f64>) -> Vector3<f64>,
    {
        let points = self
            .joints
            .iter()
            .map(|j| map(j.id, j.position))
            .collect();
        Framework::from_points(self.dimension, points, &self.bar_pairs(), self.separation_tol)
    }

    /// Renumbers joints so that old joint `i` becomes `perm[i]`, and reorders bars by `bar_order`.
    pub fn relabel(&self, perm: &[usize], bar_order: &[usize]) -> Result<Framework, FrameworkError> {
        let mut points = vec![Vector3::zeros(); self.joint_count()];
        for (old, &new) in perm.iter().enumerate() {
            points[new] = self.position(old);
        }
        let pairs: Vec<_> = bar_order
            .iter()
            .map(|&b| {
                let (u, v) = self.bars[b].ends;
                (perm[u], perm[v])
            })
            .collect();
        Framework::from_points(self.dimension, points, &pairs, self.separation_tol)
    }

    pub fn to_file(&self) -> FrameworkFile {
        let d = self.dimension.get();
        FrameworkFile {
            dimension: d,
            joints: self
                .positions()
                .map(|p| p.iter().take(d).copied().collect())
                .collect(),
            bars: self.bars.iter().map(|b| [b.ends.0, b.ends.1]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("framework serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FrameworkError> {
        let file: FrameworkFile =
            serde_json::from_str(text).map_err(|e| FrameworkError::Parse(e.to_string()))?;
        file.into_framework()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FrameworkError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| FrameworkError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    /// Graph-description text (`graph { 0 -- 1; ... }`) for external viewers.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph framework {\n");
        for joint in &self.joints {
            let p = joint.position;
            out.push_str(&format!(
                "  {} [pos=\"{},{}\", z=\"{}\"];\n",
                joint.id, p.x, p.y, p.z
            ));
        }
        for bar in &self.bars {
            out.push_str(&format!("  {} -- {};\n", bar.ends.0, bar.ends.1));
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk framework schema shared by every CLI command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkFile {
    pub dimension: usize,
    pub joints: Vec<Vec<f64>>,
    pub bars: Vec<[usize; 2]>,
}

impl FrameworkFile {
    pub fn into_framework(self) -> Result<Framework, FrameworkError> {
        let pairs: Vec<_> = self.bars.iter().map(|b| (b[0], b[1])).collect();
        Framework::new(self.dimension, &self.joints, &pairs)
    }
}
