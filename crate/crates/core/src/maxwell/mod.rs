//! Symmetry-extended Maxwell counting: per-class traces of the joint, bar
//! and rigid-body representations, the per-element necessary conditions for
//! isostaticity, and the free-placement screen.

mod chartab;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::framework::{Dimension, Framework};
use crate::symdetect::{FrameworkSymmetry, IsometryOp, OpKind, PointGroupInfo, UnshiftedCounts};

pub use chartab::{
    character_table, decompose_irreps, format_decomposition, CharacterRow, CharacterTable,
    IrrepMultiplicity,
};

const TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxwellError {
    #[error("assembled trace {assembled} differs from closed form {closed} for class {class}")]
    InternalInconsistency {
        class: String,
        assembled: f64,
        closed: f64,
    },
    #[error("multiplicity of {irrep} is {value}, not an integer")]
    NonIntegralMultiplicity { irrep: String, value: f64 },
    #[error("trace vector and character table belong to different groups")]
    TableMismatch,
    #[error("could not compute the character table of {0}")]
    CharacterTable(String),
}

/// Values of a representation's character, one per conjugacy class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceVector {
    pub group: String,
    pub class_labels: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub values: Vec<f64>,
    /// Integer value where the entry is known exactly.
    pub exact: Vec<Option<i64>>,
}

impl TraceVector {
    pub fn from_values(group: &str, labels: &[String], sizes: &[usize], values: Vec<f64>) -> Self {
        let exact = values.iter().map(|&v| exact_int(v)).collect();
        TraceVector {
            group: group.to_string(),
            class_labels: labels.to_vec(),
            class_sizes: sizes.to_vec(),
            values,
            exact,
        }
    }

    fn for_group(g: &PointGroupInfo, values: Vec<f64>) -> Self {
        Self::from_values(&g.label, &g.class_labels(), &g.class_sizes(), values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.abs() < TRACE_TOL)
    }
}

fn exact_int(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() < TRACE_TOL).then_some(r as i64)
}

/// Traces of one operation on displacements and on rigid-body motions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidBodyTrace {
    /// `Γ_xyz` (3D) or `Γ_xy` (2D).
    pub translations: f64,
    /// `Γ_xyz + Γ_R` (3D) or `Γ_xy + Γ_Rz` (2D).
    pub combined: f64,
}

/// `2 cos(phi)` of the operation, snapped to an integer where exact.
fn twice_cos(op: &IsometryOp) -> f64 {
    op.twice_cos_exact()
        .map(|v| v as f64)
        .unwrap_or(2.0 * op.cos_angle())
}

pub fn gamma_rigid_body(op: &IsometryOp, dimension: Dimension) -> RigidBodyTrace {
    let c2 = twice_cos(op);
    match dimension {
        Dimension::Three => {
            if op.is_proper() {
                RigidBodyTrace {
                    translations: c2 + 1.0,
                    combined: 2.0 * c2 + 2.0,
                }
            } else {
                RigidBodyTrace {
                    translations: c2 - 1.0,
                    combined: 0.0,
                }
            }
        }
        Dimension::Two => {
            if op.is_proper() {
                RigidBodyTrace {
                    translations: c2,
                    combined: c2 + 1.0,
                }
            } else {
                RigidBodyTrace {
                    translations: 0.0,
                    combined: -1.0,
                }
            }
        }
    }
}

fn representatives(sym: &FrameworkSymmetry) -> impl Iterator<Item = usize> + '_ {
    sym.group.classes.iter().map(|c| c.representative)
}

/// `Γ(j)`: unshifted joints per class.
pub fn gamma_joint(sym: &FrameworkSymmetry) -> TraceVector {
    let values = representatives(sym)
        .map(|e| sym.assignments[e].fixed_joints() as f64)
        .collect();
    TraceVector::for_group(&sym.group, values)
}

/// `Γ(b)`: unshifted bars per class.
pub fn gamma_bar(sym: &FrameworkSymmetry) -> TraceVector {
    let values = representatives(sym)
        .map(|e| sym.assignments[e].fixed_bars() as f64)
        .collect();
    TraceVector::for_group(&sym.group, values)
}

/// Closed form of `Γ(m) - Γ(s)` for one element, from its sub-counts.
fn closed_form(f: &Framework, c: &UnshiftedCounts, op: &IsometryOp) -> f64 {
    let j = f.joint_count() as f64;
    let b = f.bar_count() as f64;
    let c2 = twice_cos(op);
    let s = &c.sub;
    let get = |v: Option<usize>| v.unwrap_or(0) as f64;
    let jc = s.j_c as f64;
    match (f.dimension(), op.kind) {
        (Dimension::Two, OpKind::Identity) => 2.0 * j - b - 3.0,
        (Dimension::Two, OpKind::Rotation { order: 2, .. }) => -2.0 * jc - get(s.b_2) + 1.0,
        (Dimension::Two, OpKind::Rotation { .. }) => (jc - 1.0) * c2 - 1.0,
        (Dimension::Two, _) => -get(s.b_sigma) + 1.0,
        (Dimension::Three, OpKind::Identity) => 3.0 * j - b - 6.0,
        (Dimension::Three, OpKind::Rotation { order: 2, .. }) => -get(s.j_2) - get(s.b_2) + 2.0,
        (Dimension::Three, OpKind::Rotation { .. }) => (c2 + 1.0) * (get(s.j_n) - 2.0) - get(s.b_n),
        (Dimension::Three, OpKind::Reflection) => get(s.j_sigma) - get(s.b_sigma),
        (Dimension::Three, OpKind::Inversion) => -3.0 * jc - get(s.b_c),
        (Dimension::Three, OpKind::ImproperRotation { .. }) => (c2 - 1.0) * jc - get(s.b_nc),
    }
}

/// `Γ(m) - Γ(s) = Γ(j)×Γ_xyz - Γ(b) - Γ_xyz - Γ_R` per class, checked
/// against the closed form built from the element's sub-counts.
pub fn maxwell_trace(f: &Framework, sym: &FrameworkSymmetry) -> Result<TraceVector, MaxwellError> {
    let labels = sym.group.class_labels();
    let mut values = Vec::with_capacity(labels.len());
    for (k, class) in sym.group.classes.iter().enumerate() {
        let e = class.representative;
        let a = &sym.assignments[e];
        let rb = gamma_rigid_body(&a.op, f.dimension());
        let assembled = a.fixed_joints() as f64 * rb.translations - a.fixed_bars() as f64 - rb.combined;
        let closed = closed_form(f, &sym.counts(f, e), &a.op);
        if (assembled - closed).abs() > TRACE_TOL {
            return Err(MaxwellError::InternalInconsistency {
                class: labels[k].clone(),
                assembled,
                closed,
            });
        }
        values.push(assembled);
    }
    Ok(TraceVector::for_group(&sym.group, values))
}

/// Which scalar class equation a check evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationId {
    Identity2d,
    Reflection2d,
    HalfTurn2d,
    Rotation2d,
    Identity3d,
    Reflection3d,
    Inversion3d,
    HalfTurn3d,
    Rotation3d,
    ImproperRotation3d,
}

impl EquationId {
    pub fn statement(self) -> &'static str {
        match self {
            EquationId::Identity2d => "E: 2j - b = 3",
            EquationId::Reflection2d => "σ: b_σ = 1",
            EquationId::HalfTurn2d => "C2: 2j_c + b_2 = 1",
            EquationId::Rotation2d => "Cn: 2(j_c - 1)cosφ = 1",
            EquationId::Identity3d => "E: 3j - b = 6",
            EquationId::Reflection3d => "σ: b_σ = j_σ",
            EquationId::Inversion3d => "i: 3j_c + b_c = 0",
            EquationId::HalfTurn3d => "C2: j_2 + b_2 = 2",
            EquationId::Rotation3d => "Cn: (j_n - 2)(2cosφ + 1) = b_n",
            EquationId::ImproperRotation3d => "Sn: j_c(2cosφ - 1) = b_nc",
        }
    }
}

/// One evaluated condition for one group element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub class: usize,
    pub element: usize,
    pub op: String,
    pub equation: EquationId,
    pub statement: String,
    pub inputs: BTreeMap<&'static str, i64>,
    /// Both sides in integers, when the equation has integer coefficients.
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    pub pass: bool,
    /// A consequence of the equation rather than the equation itself.
    pub derived: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Planar groups that admit isostatic frameworks.
pub const PLANAR_WHITELIST: [&str; 6] = ["C1", "C2", "C3", "Cs", "C2v", "C3v"];

pub const NECESSARY_ONLY_CAVEAT: &str = "necessary conditions only: the symmetry-extended count cannot detect \
paired mechanisms and states of self-stress of the same symmetry";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub dimension: Dimension,
    pub group: String,
    pub order: usize,
    pub j: usize,
    pub b: usize,
    pub checks: Vec<ConditionCheck>,
    /// Planar only: whether the group is one of the six admissible groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_admissible: Option<bool>,
    /// Reason the input lies outside the setting of the conditions, if it does.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside_scope: Option<String>,
    pub pass: bool,
    pub caveat: &'static str,
}

impl ConditionReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct CheckBuilder<'a> {
    class: usize,
    element: usize,
    op: &'a IsometryOp,
}

impl CheckBuilder<'_> {
    fn make(
        &self,
        equation: EquationId,
        inputs: &[(&'static str, i64)],
        sides: Option<(i64, i64)>,
        pass: bool,
        derived: bool,
        note: Option<String>,
    ) -> ConditionCheck {
        ConditionCheck {
            class: self.class,
            element: self.element,
            op: self.op.kind.symbol(),
            equation,
            statement: equation.statement().to_string(),
            inputs: inputs.iter().copied().collect(),
            lhs: sides.map(|s| s.0),
            rhs: sides.map(|s| s.1),
            pass,
            derived,
            note,
        }
    }

    fn equation(&self, equation: EquationId, inputs: &[(&'static str, i64)], lhs: i64, rhs: i64) -> ConditionCheck {
        self.make(equation, inputs, Some((lhs, rhs)), lhs == rhs, false, None)
    }
}

fn scope_problem(f: &Framework) -> Option<String> {
    if f.bar_count() <= 1 {
        return Some("a single bar (or none) is excluded".into());
    }
    if f.dimension() == Dimension::Three && f.joint_count() <= 3 {
        return Some("3D frameworks need more than three joints".into());
    }
    None
}

fn checks_2d(
    f: &Framework,
    c: &UnshiftedCounts,
    cb: &CheckBuilder<'_>,
    out: &mut Vec<ConditionCheck>,
) {
    let (j, b) = (f.joint_count() as i64, f.bar_count() as i64);
    let jc = c.sub.j_c as i64;
    match cb.op.kind {
        OpKind::Identity => {
            out.push(cb.equation(EquationId::Identity2d, &[("j", j), ("b", b)], 2 * j - b, 3));
        }
        OpKind::Reflection => {
            let bs = c.sub.b_sigma.unwrap_or(0) as i64;
            out.push(cb.equation(EquationId::Reflection2d, &[("b_sigma", bs)], bs, 1));
        }
        OpKind::Rotation { order: 2, .. } => {
            let b2 = c.sub.b_2.unwrap_or(0) as i64;
            out.push(cb.equation(EquationId::HalfTurn2d, &[("j_c", jc), ("b_2", b2)], 2 * jc + b2, 1));
        }
        OpKind::Rotation { order, .. } => {
            let inputs = [("j_c", jc), ("n", order as i64)];
            match cb.op.twice_cos_exact() {
                Some(c2) => {
                    let mut check = cb.equation(EquationId::Rotation2d, &inputs, (jc - 1) * c2, 1);
                    if !check.pass {
                        check.note = Some(if order == 3 {
                            "no joint may lie at the centre of rotation".into()
                        } else {
                            format!("(j_c - 1)cos(2π/{order}) = 1/2 has no solution with j_c ∈ {{0, 1}}")
                        });
                    }
                    out.push(check);
                }
                None => out.push(cb.make(
                    EquationId::Rotation2d,
                    &inputs,
                    None,
                    false,
                    false,
                    Some(format!("2cos(2π/{order}) is irrational: the equation has no solution")),
                )),
            }
        }
        _ => {}
    }
}

fn checks_3d(
    f: &Framework,
    c: &UnshiftedCounts,
    cb: &CheckBuilder<'_>,
    out: &mut Vec<ConditionCheck>,
) {
    let (j, b) = (f.joint_count() as i64, f.bar_count() as i64);
    let jc = c.sub.j_c as i64;
    let get = |v: Option<usize>| v.unwrap_or(0) as i64;
    match cb.op.kind {
        OpKind::Identity => {
            out.push(cb.equation(EquationId::Identity3d, &[("j", j), ("b", b)], 3 * j - b, 6));
        }
        OpKind::Reflection => {
            let (js, bs) = (get(c.sub.j_sigma), get(c.sub.b_sigma));
            out.push(cb.equation(EquationId::Reflection3d, &[("j_sigma", js), ("b_sigma", bs)], bs, js));
        }
        OpKind::Inversion => {
            let bc = get(c.sub.b_c);
            out.push(cb.equation(EquationId::Inversion3d, &[("j_c", jc), ("b_c", bc)], 3 * jc + bc, 0));
        }
        OpKind::Rotation { order: 2, .. } => {
            let (j2, b2) = (get(c.sub.j_2), get(c.sub.b_2));
            let inputs = [("j_2", j2), ("b_2", b2)];
            out.push(cb.equation(EquationId::HalfTurn3d, &inputs, j2 + b2, 2));
            let along = c
                .bar_placements
                .iter()
                .filter(|(_, p)| *p == crate::symdetect::BarPlacement::AlongAxis)
                .count() as i64;
            out.push(cb.make(
                EquationId::HalfTurn3d,
                &[("bars_along_axis", along)],
                Some((along, 0)),
                along == 0,
                true,
                Some("every bar counted in b_2 must be perpendicular to the axis".into()),
            ));
        }
        OpKind::Rotation { order, .. } => {
            let (jn, bn) = (get(c.sub.j_n), get(c.sub.b_n));
            let inputs = [("j_n", jn), ("b_n", bn), ("n", order as i64)];
            match cb.op.twice_cos_exact() {
                Some(c2) => out.push(cb.equation(EquationId::Rotation3d, &inputs, (jn - 2) * (c2 + 1), bn)),
                None => out.push(cb.make(
                    EquationId::Rotation3d,
                    &inputs,
                    None,
                    jn == 2 && bn == 0,
                    false,
                    Some("2cosφ + 1 is irrational: the only solution is j_n = 2, b_n = 0".into()),
                )),
            }
            out.push(cb.make(
                EquationId::Rotation3d,
                &[("b_n", bn)],
                Some((bn, 0)),
                bn == 0,
                true,
                Some("b_n = 0 for every n > 2".into()),
            ));
            if order != 3 {
                out.push(cb.make(
                    EquationId::Rotation3d,
                    &[("j_n", jn)],
                    Some((jn, 2)),
                    jn == 2,
                    true,
                    Some("j_n = 2 unless n = 3".into()),
                ));
            }
        }
        OpKind::ImproperRotation { order, .. } => {
            let bnc = get(c.sub.b_nc);
            let inputs = [("j_c", jc), ("b_nc", bnc), ("n", order as i64)];
            match cb.op.twice_cos_exact() {
                Some(c2) => out.push(cb.equation(EquationId::ImproperRotation3d, &inputs, jc * (c2 - 1), bnc)),
                None => out.push(cb.make(
                    EquationId::ImproperRotation3d,
                    &inputs,
                    None,
                    jc == 0 && bnc == 0,
                    false,
                    Some("2cosφ - 1 is irrational: the only solution is j_c = 0, b_nc = 0".into()),
                )),
            }
        }
    }
}

fn parity_checks(f: &Framework, sym: &FrameworkSymmetry, out: &mut Vec<ConditionCheck>) {
    let (j, b) = (f.joint_count() as i64, f.bar_count() as i64);
    let identity = CheckBuilder {
        class: 0,
        element: 0,
        op: &sym.group.elements[0],
    };
    let mut note = |label: &str, ok: bool, text: &str, inputs: &[(&'static str, i64)]| {
        out.push(identity.make(
            EquationId::Identity2d,
            inputs,
            None,
            ok,
            true,
            Some(format!("{label}: {text}")),
        ));
    };
    match sym.group.label.as_str() {
        "C2" | "C2v" => note(&sym.group.label, j % 2 == 0 && b % 2 == 1, "j is even and b is odd", &[("j", j), ("b", b)]),
        "C3" => note("C3", j % 3 == 0 && b % 3 == 0, "j and b are multiples of 3", &[("j", j), ("b", b)]),
        "Cs" => {
            let k = sym
                .assignments
                .iter()
                .position(|a| a.op.kind == OpKind::Reflection)
                .expect("Cs has a mirror");
            let bs = sym.assignments[k].fixed_bars() as i64;
            note("Cs", (b - bs) % 2 == 0, "b - b_σ is even", &[("b", b), ("b_sigma", bs)]);
        }
        _ => {}
    }
}

/// Evaluates every applicable necessary condition for every group element.
pub fn isostatic_necessary(f: &Framework, sym: &FrameworkSymmetry) -> ConditionReport {
    let mut checks = Vec::new();
    for (k, class) in sym.group.classes.iter().enumerate() {
        for &e in &class.members {
            let counts = sym.counts(f, e);
            let cb = CheckBuilder {
                class: k,
                element: e,
                op: &sym.group.elements[e],
            };
            match f.dimension() {
                Dimension::Two => checks_2d(f, &counts, &cb, &mut checks),
                Dimension::Three => checks_3d(f, &counts, &cb, &mut checks),
            }
        }
    }
    let group_admissible = (f.dimension() == Dimension::Two)
        .then(|| PLANAR_WHITELIST.contains(&sym.group.label.as_str()));
    if f.dimension() == Dimension::Two {
        parity_checks(f, sym, &mut checks);
    }
    let pass = checks.iter().all(|c| c.pass) && group_admissible.unwrap_or(true);
    ConditionReport {
        dimension: f.dimension(),
        group: sym.group.label.clone(),
        order: sym.group.order(),
        j: f.joint_count(),
        b: f.bar_count(),
        checks,
        group_admissible,
        outside_scope: scope_problem(f),
        pass,
        caveat: NECESSARY_ONLY_CAVEAT,
    }
}

/// Whether a framework whose joints and bars all lie in general position
/// (every orbit regular) can be isostatic with the given group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenReport {
    pub group: String,
    pub dimension: Dimension,
    pub order: usize,
    /// `|G|` divides the number of rigid-body motions (6 in 3D, 3 in 2D).
    pub order_divides: bool,
    /// `(d_rb/|G|)Γ_reg - Γ_xyz - Γ_R` per class.
    pub discrepancy: TraceVector,
    pub vanishing: bool,
    pub admits_free_placement: bool,
    /// Irreducible content of the discrepancy: positive parts are mechanisms,
    /// negative parts states of self-stress. Absent when `|G|` does not
    /// divide, since the discrepancy is then not a virtual character.
    pub decomposition: Option<Vec<IrrepMultiplicity>>,
}

pub fn free_placement_screen(group: &PointGroupInfo) -> Result<ScreenReport, MaxwellError> {
    let dim = group.dimension;
    let rb = dim.rigid_motions();
    let order = group.order();
    let values: Vec<f64> = group
        .classes
        .iter()
        .map(|c| {
            let op = &group.elements[c.representative];
            let reg = if op.kind == OpKind::Identity {
                rb as f64
            } else {
                0.0
            };
            reg - gamma_rigid_body(op, dim).combined
        })
        .collect();
    let discrepancy = TraceVector::for_group(group, values);
    let vanishing = discrepancy.is_zero();
    let order_divides = rb % order == 0;
    let decomposition = if order_divides {
        Some(decompose_irreps(&discrepancy, &character_table(group)?)?)
    } else {
        None
    };
    Ok(ScreenReport {
        group: group.label.clone(),
        dimension: dim,
        order,
        order_divides,
        discrepancy,
        vanishing,
        admits_free_placement: order_divides && vanishing,
        decomposition,
    })
}

#[cfg(test)]
mod tests;
