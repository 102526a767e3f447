use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::op::{reflection_matrix, rotation_matrix, IsometryOp, OpKind};
use super::SymmetryError;
use crate::framework::Dimension;

/// Entry-wise tolerance for deciding two group elements are the same matrix.
pub const ELEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacyClass {
    /// Element indices, ascending.
    pub members: Vec<usize>,
    pub representative: usize,
    pub kind: OpKind,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A finite point group with its multiplication table and class structure.
#[derive(Debug, Clone)]
pub struct PointGroupInfo {
    pub label: String,
    pub dimension: Dimension,
    pub elements: Vec<IsometryOp>,
    pub classes: Vec<ConjugacyClass>,
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    class_of: Vec<usize>,
}

impl PointGroupInfo {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of `elements[a] * elements[b]` (apply `b` first).
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(ConjugacyClass::size).collect()
    }

    pub fn find(&self, m: &Matrix3<f64>) -> Option<usize> {
        find_matrix(&self.elements, m)
    }

    pub fn has_improper(&self) -> bool {
        self.elements.iter().any(|e| !e.is_proper())
    }

    /// Labels of the classes, e.g. `["E", "2C3", "3σ"]`.
    pub fn class_labels(&self) -> Vec<String> {
        self.classes
            .iter()
            .map(|c| {
                if c.size() == 1 {
                    c.kind.symbol()
                } else {
                    format!("{}{}", c.size(), c.kind.symbol())
                }
            })
            .collect()
    }
}

fn find_matrix(elements: &[IsometryOp], m: &Matrix3<f64>) -> Option<usize> {
    elements
        .iter()
        .position(|e| (e.matrix - m).amax() <= ELEMENT_TOL)
}

/// Builds the group structure and Schoenflies label for a closed set of
/// operations. Elements are re-sorted canonically (identity first).
pub fn classify_group(ops: &[IsometryOp]) -> Result<PointGroupInfo, SymmetryError> {
    let first = ops.first().ok_or(SymmetryError::NotAGroup("empty element list"))?;
    let dimension = first.dimension;
    if ops.iter().any(|o| o.dimension != dimension) {
        return Err(SymmetryError::NotAGroup("mixed dimensions"));
    }
    let mut elements = ops.to_vec();
    elements.sort_by(|a, b| a.canonical_cmp(b));
    for (k, e) in elements.iter().enumerate() {
        if find_matrix(&elements[..k], &e.matrix).is_some() {
            return Err(SymmetryError::NotAGroup("repeated element"));
        }
    }
    if elements[0].kind != OpKind::Identity {
        return Err(SymmetryError::NotAGroup("identity missing"));
    }

    let n = elements.len();
    let mut product = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let m = elements[a].matrix * elements[b].matrix;
            product[a][b] =
                find_matrix(&elements, &m).ok_or(SymmetryError::NotAGroup("not closed"))?;
        }
    }
    let mut inverse = vec![0; n];
    for a in 0..n {
        inverse[a] = (0..n)
            .find(|&b| product[a][b] == 0)
            .ok_or(SymmetryError::NotAGroup("missing inverse"))?;
    }

    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for g in 0..n {
        if class_of[g] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = (0..n)
            .map(|h| product[product[h][g]][inverse[h]])
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(ConjugacyClass {
            representative: members[0],
            kind: elements[members[0]].kind,
            members,
        });
    }

    let label = schoenflies_label(dimension, &elements)?;
    Ok(PointGroupInfo {
        label,
        dimension,
        elements,
        classes,
        product,
        inverse,
        class_of,
    })
}

/// Distinct rotation axes with the highest rotation order seen on each.
fn rotation_axes(elements: &[IsometryOp]) -> Vec<(Vector3<f64>, u32)> {
    let mut axes: Vec<(Vector3<f64>, u32)> = Vec::new();
    for e in elements {
        if let OpKind::Rotation { order, .. } = e.kind {
            let dir = e.axis;
            match axes
                .iter_mut()
                .find(|(a, _)| a.cross(&dir).norm() < 1e-6)
            {
                Some(entry) => entry.1 = entry.1.max(order),
                None => axes.push((dir, order)),
            }
        }
    }
    axes
}

fn schoenflies_label(dimension: Dimension, elements: &[IsometryOp]) -> Result<String, SymmetryError> {
    let order = elements.len();
    let proper = elements.iter().filter(|e| e.is_proper()).count();
    let unrecognised = || SymmetryError::UnrecognizedGroup(order);

    if dimension == Dimension::Two {
        if proper == order {
            return Ok(format!("C{proper}"));
        }
        if 2 * proper != order {
            return Err(unrecognised());
        }
        return Ok(if proper == 1 {
            "Cs".into()
        } else {
            format!("C{proper}v")
        });
    }

    let axes = rotation_axes(elements);
    let count = |n: u32| axes.iter().filter(|(_, o)| *o == n).count();
    let n_max = axes.iter().map(|(_, o)| *o).max().unwrap_or(1);
    let rotation_label = if count(5) >= 2 {
        (proper == 60).then(|| "I".to_string())
    } else if count(4) >= 2 {
        (proper == 24).then(|| "O".to_string())
    } else if count(3) >= 2 {
        (proper == 12).then(|| "T".to_string())
    } else if proper == n_max as usize {
        Some(format!("C{n_max}"))
    } else if proper == 2 * n_max as usize {
        Some(format!("D{n_max}"))
    } else {
        None
    }
    .ok_or_else(unrecognised)?;

    if proper == order {
        return Ok(rotation_label);
    }
    if 2 * proper != order {
        return Err(unrecognised());
    }

    let has_inversion = elements.iter().any(|e| e.kind == OpKind::Inversion);
    let mirrors: Vec<&IsometryOp> = elements
        .iter()
        .filter(|e| e.kind == OpKind::Reflection)
        .collect();
    let n = n_max;
    let label = match rotation_label.as_str() {
        "I" => "Ih".to_string(),
        "O" => "Oh".to_string(),
        "T" if has_inversion => "Th".to_string(),
        "T" => "Td".to_string(),
        l if l.starts_with('D') => {
            let horizontal = if has_inversion { n % 2 == 0 } else { n % 2 == 1 };
            format!("D{n}{}", if horizontal { "h" } else { "d" })
        }
        _ if n == 1 => if has_inversion { "Ci" } else { "Cs" }.to_string(),
        _ => {
            let principal = axes
                .iter()
                .find(|(_, o)| *o == n)
                .map(|(a, _)| *a)
                .ok_or_else(unrecognised)?;
            let sigma_h = mirrors
                .iter()
                .any(|m| m.axis.cross(&principal).norm() < 1e-6);
            let sigma_v = mirrors.iter().any(|m| m.axis.dot(&principal).abs() < 1e-6);
            if has_inversion {
                if n % 2 == 0 {
                    format!("C{n}h")
                } else {
                    format!("S{}", 2 * n)
                }
            } else if sigma_h {
                format!("C{n}h")
            } else if sigma_v {
                format!("C{n}v")
            } else {
                format!("S{}", 2 * n)
            }
        }
    };
    Ok(label)
}

/// Closes a set of generators under multiplication.
pub fn generate(dimension: Dimension, generators: &[Matrix3<f64>]) -> Result<Vec<IsometryOp>, SymmetryError> {
    let mut mats: Vec<Matrix3<f64>> = vec![Matrix3::identity()];
    let mut frontier = mats.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in generators {
                let m = g * a;
                if !mats.iter().any(|x| (x - m).amax() <= ELEMENT_TOL) {
                    mats.push(m);
                    next.push(m);
                }
            }
        }
        if mats.len() > 240 {
            return Err(SymmetryError::NotAGroup("generators produce an infinite group"));
        }
        frontier = next;
    }
    mats.into_iter()
        .map(|m| IsometryOp::from_matrix(dimension, m).ok_or(SymmetryError::IrrationalAngle))
        .collect()
}

fn parse_n(s: &str) -> Option<u32> {
    s.parse().ok().filter(|&n| n >= 1)
}

/// Reference realisation of a labelled point group, with the principal axis
/// along `z` and a secondary two-fold axis (or mirror normal) along `y`.
pub fn reference_group(dimension: Dimension, label: &str) -> Result<PointGroupInfo, SymmetryError> {
    let unknown = || SymmetryError::UnknownLabel(label.to_string());
    let z = Vector3::z();
    let x = Vector3::x();
    let y = Vector3::y();
    let rot = |n: u32| rotation_matrix(&z, TAU / n as f64);
    let gens: Vec<Matrix3<f64>> = match dimension {
        Dimension::Two => {
            if label == "Cs" {
                vec![reflection_matrix(&y)]
            } else if let Some(rest) = label.strip_prefix('C') {
                if let Some(n) = rest.strip_suffix('v').and_then(parse_n) {
                    vec![rot(n), reflection_matrix(&y)]
                } else {
                    vec![rot(parse_n(rest).ok_or_else(unknown)?)]
                }
            } else {
                return Err(unknown());
            }
        }
        Dimension::Three => {
            let c3_body = rotation_matrix(&Vector3::new(1.0, 1.0, 1.0), TAU / 3.0);
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            let c5_vertex = rotation_matrix(&Vector3::new(0.0, 1.0, golden), TAU / 5.0);
            let t = vec![rotation_matrix(&z, PI), rotation_matrix(&x, PI), c3_body];
            let inv = -Matrix3::identity();
            match label {
                "Cs" => vec![reflection_matrix(&z)],
                "Ci" => vec![inv],
                "T" => t,
                "Th" => [t, vec![inv]].concat(),
                "Td" => [t, vec![reflection_matrix(&Vector3::new(1.0, -1.0, 0.0))]].concat(),
                "O" => vec![rotation_matrix(&z, TAU / 4.0), c3_body],
                "Oh" => vec![rotation_matrix(&z, TAU / 4.0), c3_body, inv],
                "I" => [t, vec![c5_vertex]].concat(),
                "Ih" => [t, vec![c5_vertex, inv]].concat(),
                _ => {
                    let (family, rest) = label.split_at(1);
                    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
                    let suffix = &rest[digits.len()..];
                    let n = parse_n(&digits).ok_or_else(unknown)?;
                    match (family, suffix) {
                        ("C", "") => vec![rot(n)],
                        ("C", "v") => vec![rot(n), reflection_matrix(&y)],
                        ("C", "h") => vec![rot(n), reflection_matrix(&z)],
                        ("S", "") if n % 2 == 0 => {
                            vec![reflection_matrix(&z) * rotation_matrix(&z, TAU / n as f64)]
                        }
                        ("D", "") => vec![rot(n), rotation_matrix(&x, PI)],
                        ("D", "h") => vec![rot(n), rotation_matrix(&x, PI), reflection_matrix(&z)],
                        ("D", "d") => {
                            let a = PI / (2.0 * n as f64) + PI / 2.0;
                            let normal = Vector3::new(a.cos(), a.sin(), 0.0);
                            vec![rot(n), rotation_matrix(&x, PI), reflection_matrix(&normal)]
                        }
                        _ => return Err(unknown()),
                    }
                }
            }
        }
    };
    classify_group(&generate(dimension, &gens)?)
}

/// Every group with an embedded reference realisation.
pub fn catalog_labels(dimension: Dimension) -> Vec<String> {
    match dimension {
        Dimension::Two => {
            let mut v: Vec<String> = (1..=6).map(|n| format!("C{n}")).collect();
            v.push("Cs".into());
            v.extend((2..=6).map(|n| format!("C{n}v")));
            v
        }
        Dimension::Three => {
            let mut v: Vec<String> = vec!["Cs".into(), "Ci".into()];
            v.extend((1..=6).map(|n| format!("C{n}")));
            for n in 2..=6 {
                v.push(format!("C{n}v"));
                v.push(format!("C{n}h"));
                v.push(format!("D{n}"));
                v.push(format!("D{n}d"));
                v.push(format!("D{n}h"));
            }
            v.extend((2..=6).map(|n| format!("S{}", 2 * n)));
            v.extend(["T", "Td", "Th", "O", "Oh", "I", "Ih"].map(String::from));
            v
        }
    }
}
