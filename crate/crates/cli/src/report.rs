//! Report structures shared by the subcommands, and their text rendering.

use std::fmt::Write as _;

use isostat::laman::{SparsityReport, SubgraphViolation, SymmetricLamanReport};
use isostat::maxwell::{ConditionReport, IrrepMultiplicity, TraceVector};
use isostat::numrank::KinematicSummary;
use isostat::{Dimension, Framework, FrameworkSymmetry};
use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub rank: f64,
    /// Relative to the framework diameter.
    pub geom: f64,
}

#[derive(Debug, Serialize)]
pub struct FrameworkDigest {
    pub dimension: Dimension,
    pub j: usize,
    pub b: usize,
    pub maxwell_count: i64,
    pub isolated_joints: Vec<usize>,
}

impl FrameworkDigest {
    pub fn new(f: &Framework) -> Self {
        FrameworkDigest {
            dimension: f.dimension(),
            j: f.joint_count(),
            b: f.bar_count(),
            maxwell_count: f.maxwell_count(),
            isolated_joints: f.isolated_joints(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassRow {
    pub label: String,
    pub size: usize,
    pub kind: String,
    pub j_unshifted: usize,
    pub b_unshifted: usize,
    pub sub_counts: isostat::symdetect::SubCounts,
}

#[derive(Debug, Serialize)]
pub struct GroupDigest {
    pub label: String,
    pub order: usize,
    pub classes: Vec<ClassRow>,
    pub joint_orbits: Vec<Vec<usize>>,
    pub bar_orbits: Vec<Vec<usize>>,
}

impl GroupDigest {
    pub fn new(f: &Framework, sym: &FrameworkSymmetry) -> Self {
        let labels = sym.group.class_labels();
        let classes = sym
            .group
            .classes
            .iter()
            .zip(labels)
            .map(|(c, label)| {
                let counts = sym.counts(f, c.representative);
                ClassRow {
                    label,
                    size: c.size(),
                    kind: c.kind.symbol(),
                    j_unshifted: counts.j_unshifted,
                    b_unshifted: counts.b_unshifted,
                    sub_counts: counts.sub,
                }
            })
            .collect();
        let orbits = isostat::symdetect::orbits(f, sym);
        GroupDigest {
            label: sym.group.label.clone(),
            order: sym.group.order(),
            classes,
            joint_orbits: orbits.joint_orbits,
            bar_orbits: orbits.bar_orbits,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct KinematicDigest {
    pub j: usize,
    pub b: usize,
    pub rank: usize,
    pub rigid_body_dim: usize,
    pub m: usize,
    pub s: usize,
    pub isostatic: bool,
    pub smallest_singular_values: Vec<f64>,
}

impl KinematicDigest {
    pub fn new(k: &KinematicSummary) -> Self {
        KinematicDigest {
            j: k.j,
            b: k.b,
            rank: k.rank,
            rigid_body_dim: k.rigid_body_dim,
            m: k.m,
            s: k.s,
            isostatic: k.isostatic,
            smallest_singular_values: k.smallest_singular_values(5),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TraceDigest {
    pub gamma_j: TraceVector,
    pub gamma_b: TraceVector,
    pub gamma_m_minus_s: TraceVector,
    pub decomposition: Vec<IrrepMultiplicity>,
    pub decomposition_text: String,
}

#[derive(Debug, Serialize)]
pub struct Sufficiency {
    pub pass: bool,
    pub basis: isostat::laman::Basis,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub necessary_conditions: bool,
    pub numerically_isostatic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sufficiency: Option<Sufficiency>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outside_scope: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisBundle {
    pub report_version: u32,
    pub tolerances: Tolerances,
    pub framework: FrameworkDigest,
    pub group: GroupDigest,
    pub kinematics: KinematicDigest,
    pub traces: TraceDigest,
    pub conditions: ConditionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<SparsityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric_laman: Option<SymmetricLamanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph_violations: Option<Vec<SubgraphViolation>>,
    pub verdict: Verdict,
}

#[derive(Debug, Serialize)]
pub struct DetectReport {
    pub report_version: u32,
    pub tolerances: Tolerances,
    pub framework: FrameworkDigest,
    pub group: GroupDigest,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub report_version: u32,
    pub tolerances: Tolerances,
    pub conditions: ConditionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric_laman: Option<SymmetricLamanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sufficiency_error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct GenericCheck {
    pub seed: u64,
    pub trials: usize,
    pub generic_rank: usize,
    pub generically_isostatic: bool,
    pub agrees: bool,
}

#[derive(Debug, Serialize)]
pub struct PebbleReport {
    pub report_version: u32,
    pub tolerances: Tolerances,
    pub sparsity: SparsityReport,
    pub generic_check: GenericCheck,
}

fn fmt_value(v: f64, exact: Option<i64>) -> String {
    match exact {
        Some(i) => i.to_string(),
        None => format!("{v:.6}"),
    }
}

fn trace_line(out: &mut String, name: &str, t: &TraceVector) {
    let cells: Vec<String> = t
        .values
        .iter()
        .zip(&t.exact)
        .map(|(&v, &e)| format!("{:>8}", fmt_value(v, e)))
        .collect();
    let _ = writeln!(out, "  {name:<12}{}", cells.join(""));
}

pub fn render_group(out: &mut String, g: &GroupDigest) {
    let _ = writeln!(out, "point group   {} (order {})", g.label, g.order);
    let _ = writeln!(out, "  {:<10}{:>6}{:>8}{:>8}", "class", "size", "j_fix", "b_fix");
    for c in &g.classes {
        let _ = writeln!(out, "  {:<10}{:>6}{:>8}{:>8}", c.label, c.size, c.j_unshifted, c.b_unshifted);
    }
    let _ = writeln!(
        out,
        "orbits        {} joint, {} bar",
        g.joint_orbits.len(),
        g.bar_orbits.len()
    );
}

pub fn render_conditions(out: &mut String, r: &ConditionReport) {
    let _ = writeln!(out, "necessary conditions ({} {}D):", r.group, r.dimension.get());
    let mut seen = std::collections::BTreeSet::new();
    for c in &r.checks {
        // One line per class and equation; members of a class agree.
        let key = (c.class, c.statement.clone(), c.note.clone(), c.pass);
        if !seen.insert(key) {
            continue;
        }
        let inputs: Vec<String> = c.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let sides = match (c.lhs, c.rhs) {
            (Some(l), Some(r)) => format!("  [{l} vs {r}]"),
            _ => String::new(),
        };
        let _ = writeln!(
            out,
            "  {:<4} {:<6} {:<34} {}{}{}",
            if c.pass { "ok" } else { "FAIL" },
            c.op,
            c.statement,
            inputs.join(" "),
            sides,
            c.note.as_ref().map(|n| format!("  ({n})")).unwrap_or_default()
        );
    }
    if let Some(ok) = r.group_admissible {
        let _ = writeln!(
            out,
            "  {:<4} group {} {} one of the six planar groups admitting isostatic frameworks",
            if ok { "ok" } else { "FAIL" },
            r.group,
            if ok { "is" } else { "is not" }
        );
    }
    if let Some(s) = &r.outside_scope {
        let _ = writeln!(out, "  outside scope: {s}");
    }
    let _ = writeln!(out, "  verdict: {}", if r.pass { "pass" } else { "fail" });
    let _ = writeln!(out, "  note: {}", r.caveat);
}

pub fn render_sparsity(out: &mut String, s: &SparsityReport) {
    let _ = writeln!(
        out,
        "pebble game   {:?}: {} of {} bars independent (2j-3 = {})",
        s.verdict,
        s.independent,
        s.b,
        (2 * s.j).saturating_sub(3)
    );
    if let Some(w) = &s.witness {
        let _ = writeln!(
            out,
            "  witness: bars {:?} on {} joints ({} > {})",
            w.bars,
            w.j,
            w.b,
            (2 * w.j).saturating_sub(3)
        );
    }
}

pub fn render_symmetric_laman(out: &mut String, r: &SymmetricLamanReport) {
    let _ = writeln!(
        out,
        "sufficiency   {} ({:?}) under {}",
        if r.pass { "pass" } else { "fail" },
        r.basis,
        r.group
    );
    for c in &r.conditions {
        let _ = writeln!(
            out,
            "  {:<4} {} (value {})",
            if c.pass { "ok" } else { "FAIL" },
            c.statement,
            c.value
        );
    }
    let _ = writeln!(out, "  note: {}", r.caveat);
}

pub fn render_analysis(b: &AnalysisBundle) -> String {
    let mut out = String::new();
    let f = &b.framework;
    let _ = writeln!(
        out,
        "framework     {}D, j = {}, b = {}, scalar count = {}",
        f.dimension.get(),
        f.j,
        f.b,
        f.maxwell_count
    );
    if !f.isolated_joints.is_empty() {
        let _ = writeln!(out, "  isolated joints: {:?}", f.isolated_joints);
    }
    render_group(&mut out, &b.group);
    let k = &b.kinematics;
    let _ = writeln!(
        out,
        "kinematics    rank {}, rigid-body {}, m = {}, s = {}",
        k.rank, k.rigid_body_dim, k.m, k.s
    );
    let _ = writeln!(out, "traces        {}", b.traces.gamma_j.class_labels.join("  "));
    trace_line(&mut out, "Γ(j)", &b.traces.gamma_j);
    trace_line(&mut out, "Γ(b)", &b.traces.gamma_b);
    trace_line(&mut out, "Γ(m)-Γ(s)", &b.traces.gamma_m_minus_s);
    let _ = writeln!(out, "  = {}", b.traces.decomposition_text);
    render_conditions(&mut out, &b.conditions);
    if let Some(s) = &b.sparsity {
        render_sparsity(&mut out, s);
    }
    if let Some(r) = &b.symmetric_laman {
        render_symmetric_laman(&mut out, r);
    }
    if let Some(v) = &b.subgraph_violations {
        let _ = writeln!(out, "subgraph scan {} violation(s)", v.len());
        for x in v {
            let _ = writeln!(out, "  joints {:?}: 3j'-b'-6 = {}", x.joints, x.count);
        }
    }
    let v = &b.verdict;
    let _ = writeln!(
        out,
        "verdict       necessary conditions {}, numerically {}",
        if v.necessary_conditions { "pass" } else { "fail" },
        if v.numerically_isostatic { "isostatic" } else { "not isostatic" }
    );
    if let Some(s) = &v.outside_scope {
        let _ = writeln!(out, "  outside scope: {s}");
    }
    let _ = writeln!(out, "tolerances    rank {:e}, geometric {:e}", b.tolerances.rank, b.tolerances.geom);
    out
}
