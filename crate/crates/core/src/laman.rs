//! Combinatorial rigidity: the (2,3) pebble game, symmetric Laman checks for
//! the planar groups, and an exhaustive subgraph count scan in 3D.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::{Dimension, Framework};
use crate::maxwell::PLANAR_WHITELIST;
use crate::numrank::{numeric_rank, rigidity_matrix};
use crate::symdetect::{FrameworkSymmetry, OpKind};

/// Largest subgraph size the 3D scan will enumerate.
pub const MAX_SCAN_JOINTS: usize = 12;
/// Upper bound on enumerated subgraphs before the scan gives up.
pub const SCAN_BUDGET: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LamanError {
    #[error("the pebble game needs at least two joints")]
    TooFewJoints,
    #[error("edge {0} joins joint {1} to itself")]
    SelfLoop(usize, usize),
    #[error("edge {0} repeats the pair ({1}, {2})")]
    DuplicateEdge(usize, usize, usize),
    #[error("edge {edge} references joint {joint} but there are {joints} joints")]
    DanglingEndpoint { edge: usize, joint: usize, joints: usize },
    #[error("group {0} admits no planar isostatic framework")]
    GroupOutsideWhitelist(String),
    #[error("this check applies to {0} frameworks only")]
    WrongDimension(Dimension),
    #[error("subgraph cap {cap} exceeds the exhaustive bound {max}, or the enumeration budget ran out")]
    CapExceeded { cap: usize, max: usize },
    #[error("could not parse graph: {0}")]
    Parse(String),
}

/// A graph on joints `0..joints`, edges in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    joints: usize,
    edges: Vec<(usize, usize)>,
}

/// Graph-only interchange form: the framework format without coordinates.
/// The joint count defaults to one more than the largest id used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub joint_count: Option<usize>,
    pub bars: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(joints: usize, edges: &[(usize, usize)]) -> Result<Self, LamanError> {
        let mut seen = HashSet::new();
        for (k, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= joints {
                    return Err(LamanError::DanglingEndpoint { edge: k, joint: w, joints });
                }
            }
            if u == v {
                return Err(LamanError::SelfLoop(k, u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(LamanError::DuplicateEdge(k, u, v));
            }
        }
        Ok(Graph {
            joints,
            edges: edges.to_vec(),
        })
    }

    pub fn from_framework(f: &Framework) -> Self {
        Graph {
            joints: f.joint_count(),
            edges: f.bar_pairs(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, LamanError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| LamanError::Parse(e.to_string()))?;
        let max = file.bars.iter().flatten().max().map_or(0, |m| m + 1);
        let joints = file.joint_count.unwrap_or(max);
        let edges: Vec<(usize, usize)> = file.bars.iter().map(|b| (b[0], b[1])).collect();
        Graph::new(joints, &edges)
    }

    pub fn joint_count(&self) -> usize {
        self.joints
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsityVerdict {
    /// `b = 2j - 3` and every subset satisfies `b* <= 2j* - 3`: generically isostatic.
    Tight,
    /// Every subset satisfies the count but there are too few bars.
    IndependentUnderbraced,
    /// Some subset has `b* > 2j* - 3`.
    Dependent,
}

/// Bars of an over-counted subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub bars: Vec<usize>,
    pub joints: Vec<usize>,
    pub j: usize,
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsityReport {
    pub verdict: SparsityVerdict,
    pub j: usize,
    pub b: usize,
    /// Size of a maximal independent bar set.
    pub independent: usize,
    /// Bars rejected by the game, in insertion order.
    pub redundant: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Pebbles and edge orientations during the game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebbleState {
    pub pebbles: Vec<u8>,
    /// `out[u]` holds the heads of edges directed away from `u`.
    pub out: Vec<BTreeSet<usize>>,
    pub placed: Vec<usize>,
}

impl PebbleState {
    fn new(joints: usize) -> Self {
        PebbleState {
            pebbles: vec![2; joints],
            out: vec![BTreeSet::new(); joints],
            placed: Vec::new(),
        }
    }

    /// Free pebbles plus placed edges always equal `2j`, and no joint holds more than two.
    pub fn invariant_holds(&self) -> bool {
        let free: usize = self.pebbles.iter().map(|&p| p as usize).sum();
        let directed: usize = self.out.iter().map(BTreeSet::len).sum();
        self.pebbles.iter().all(|&p| p <= 2)
            && free + self.placed.len() == 2 * self.pebbles.len()
            && directed == self.placed.len()
    }

    /// Moves one pebble to `start` along a directed path, avoiding `blocked`.
    fn fetch(&mut self, start: usize, blocked: &[usize]) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        for &b in blocked {
            visited[b] = true;
        }
        visited[start] = true;
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            if w != start && self.pebbles[w] > 0 {
                let mut node = w;
                while node != start {
                    let prev = parent[node];
                    self.out[prev].remove(&node);
                    self.out[node].insert(prev);
                    node = prev;
                }
                self.pebbles[w] -= 1;
                self.pebbles[start] += 1;
                return true;
            }
            // Reverse order so the smallest id is explored first.
            for &x in self.out[w].iter().rev() {
                if !visited[x] {
                    visited[x] = true;
                    parent[x] = w;
                    stack.push(x);
                }
            }
        }
        false
    }

    fn reach(&self, from: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack = from.to_vec();
        for &s in from {
            seen[s] = true;
        }
        while let Some(w) = stack.pop() {
            for &x in &self.out[w] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        (0..seen.len()).filter(|&k| seen[k]).collect()
    }
}

/// Runs the (2,3) pebble game, calling `observe` after every pebble move and edge placement.
pub fn pebble_game_2_3_observed(
    g: &Graph,
    mut observe: impl FnMut(&PebbleState),
) -> Result<SparsityReport, LamanError> {
    let j = g.joint_count();
    if j < 2 {
        return Err(LamanError::TooFewJoints);
    }
    let mut state = PebbleState::new(j);
    let mut redundant = Vec::new();
    let mut witness = None;
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let mut ok = true;
        while state.pebbles[u] + state.pebbles[v] < 4 {
            let target = if state.pebbles[u] < 2 { u } else { v };
            let other = if target == u { v } else { u };
            if !state.fetch(target, &[other]) {
                ok = false;
                break;
            }
            observe(&state);
        }
        if ok {
            state.pebbles[u] -= 1;
            state.out[u].insert(v);
            state.placed.push(k);
            observe(&state);
            continue;
        }
        redundant.push(k);
        if witness.is_none() {
            let region = state.reach(&[u, v]);
            let inside: HashSet<usize> = region.iter().copied().collect();
            let mut bars: Vec<usize> = state
                .placed
                .iter()
                .copied()
                .filter(|&e| {
                    let (a, b) = g.edges()[e];
                    inside.contains(&a) && inside.contains(&b)
                })
                .collect();
            bars.push(k);
            bars.sort_unstable();
            witness = Some(Witness {
                j: region.len(),
                b: bars.len(),
                joints: region,
                bars,
            });
        }
    }
    let independent = state.placed.len();
    let verdict = if !redundant.is_empty() {
        SparsityVerdict::Dependent
    } else if independent == 2 * j - 3 {
        SparsityVerdict::Tight
    } else {
        SparsityVerdict::IndependentUnderbraced
    };
    Ok(SparsityReport {
        verdict,
        j,
        b: g.edges().len(),
        independent,
        redundant,
        witness,
    })
}

pub fn pebble_game_2_3(g: &Graph) -> Result<SparsityReport, LamanError> {
    pebble_game_2_3_observed(g, |_| {})
}

/// Largest rigidity-matrix rank over `trials` placements drawn uniformly
/// from the unit square. A placement with coincident joints is redrawn.
pub fn generic_rank_2d(g: &Graph, trials: usize, seed: u64, tol: f64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let mut done = 0;
    while done < trials {
        let pts: Vec<Vec<f64>> = (0..g.joint_count())
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let Ok(f) = Framework::new(2, &pts, g.edges()) else {
            continue;
        };
        let rank = numeric_rank(&rigidity_matrix(&f), tol).map_or(0, |r| r.rank);
        best = best.max(rank);
        done += 1;
    }
    best
}

/// Generic isostaticity by random placements: `b = 2j - 3` independent bars.
pub fn generically_isostatic_2d(g: &Graph, trials: usize, seed: u64, tol: f64) -> bool {
    let target = (2 * g.joint_count()).saturating_sub(3);
    g.edges().len() == target && generic_rank_2d(g, trials, seed, tol) == target
}

/// Whether a sufficiency verdict rests on a theorem or on a conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    TheoremBacked,
    Conjectural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCondition {
    pub statement: String,
    pub value: i64,
    pub required: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricLamanReport {
    pub group: String,
    pub sparsity: SparsityReport,
    pub conditions: Vec<GroupCondition>,
    pub pass: bool,
    pub basis: Basis,
    pub caveat: &'static str,
}

pub const GENERICITY_CAVEAT: &str =
    "sufficient only for configurations that are generic subject to the symmetry group";

/// Laman counts plus the group-specific counts for the six planar groups.
pub fn symmetric_laman(f: &Framework, sym: &FrameworkSymmetry) -> Result<SymmetricLamanReport, LamanError> {
    if f.dimension() != Dimension::Two {
        return Err(LamanError::WrongDimension(f.dimension()));
    }
    let label = sym.group.label.clone();
    if !PLANAR_WHITELIST.contains(&label.as_str()) {
        return Err(LamanError::GroupOutsideWhitelist(label));
    }
    let sparsity = pebble_game_2_3(&Graph::from_framework(f))?;
    let mut conditions = Vec::new();
    let mut push = |statement: &str, value: usize, required: i64| {
        conditions.push(GroupCondition {
            statement: statement.into(),
            value: value as i64,
            required,
            pass: value as i64 == required,
        })
    };
    if label != "C1" && label != "Cs" {
        let centre = f
            .positions()
            .filter(|p| (p - sym.centroid).norm() <= 10.0 * sym.geom_tol)
            .count();
        push("j_c = 0", centre, 0);
    }
    for a in &sym.assignments {
        match a.op.kind {
            OpKind::Rotation { order: 2, .. } => push("b_2 = 1", a.fixed_bars(), 1),
            OpKind::Reflection => push("b_σ = 1", a.fixed_bars(), 1),
            _ => {}
        }
    }
    let basis = match label.as_str() {
        "C2v" | "C3v" => Basis::Conjectural,
        _ => Basis::TheoremBacked,
    };
    let pass = sparsity.verdict == SparsityVerdict::Tight && conditions.iter().all(|c| c.pass);
    Ok(SymmetricLamanReport {
        group: label,
        sparsity,
        conditions,
        pass,
        basis,
        caveat: GENERICITY_CAVEAT,
    })
}

/// A connected induced subgraph with `3j' - b' - 6 < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphViolation {
    pub joints: Vec<usize>,
    pub j: usize,
    pub b: usize,
    pub count: i64,
}

/// Every connected induced subgraph with `3 <= j' <= cap` whose count
/// `3j' - b' - 6` is negative; each certifies a state of self-stress.
pub fn subgraph_maxwell_scan_3d(f: &Framework, cap: usize) -> Result<Vec<SubgraphViolation>, LamanError> {
    if f.dimension() != Dimension::Three {
        return Err(LamanError::WrongDimension(f.dimension()));
    }
    let exceeded = LamanError::CapExceeded {
        cap,
        max: MAX_SCAN_JOINTS,
    };
    if cap > MAX_SCAN_JOINTS {
        return Err(exceeded);
    }
    let adj: Vec<BTreeSet<usize>> = f.adjacency().into_iter().map(|n| n.into_iter().collect()).collect();
    let mut scan = Scan {
        adj: &adj,
        cap,
        budget: SCAN_BUDGET,
        found: Vec::new(),
    };
    for v in 0..f.joint_count() {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        if !scan.extend(&mut vec![v], ext, v) {
            return Err(exceeded);
        }
    }
    let mut found = scan.found;
    found.sort_by(|a, b| a.j.cmp(&b.j).then_with(|| a.joints.cmp(&b.joints)));
    Ok(found)
}

struct Scan<'a> {
    adj: &'a [BTreeSet<usize>],
    cap: usize,
    budget: usize,
    found: Vec<SubgraphViolation>,
}

impl Scan<'_> {
    /// Enumerates each connected set whose smallest joint is `root` exactly once.
    fn extend(&mut self, set: &mut Vec<usize>, mut ext: Vec<usize>, root: usize) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        if set.len() >= 3 {
            let b = set
                .iter()
                .map(|&u| set.iter().filter(|&&w| w > u && self.adj[u].contains(&w)).count())
                .sum::<usize>();
            let count = 3 * set.len() as i64 - b as i64 - 6;
            if count < 0 {
                let mut joints = set.clone();
                joints.sort_unstable();
                self.found.push(SubgraphViolation {
                    j: joints.len(),
                    b,
                    count,
                    joints,
                });
            }
        }
        if set.len() == self.cap {
            return true;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &self.adj[w] {
                let exclusive = u > root
                    && !set.contains(&u)
                    && !next.contains(&u)
                    && u != w
                    && !set.iter().any(|&s| self.adj[s].contains(&u));
                if exclusive {
                    next.push(u);
                }
            }
            set.push(w);
            let ok = self.extend(set, next, root);
            set.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructgen::{double_banana, fig2_examples, platonic, rotor, Fig2Group, Platonic};
    use crate::symdetect::{analyze_symmetry, DEFAULT_GEOM_TOL};

    fn graph(j: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(j, e).unwrap()
    }

    fn brute_force_sparse(edges: &[(usize, usize)]) -> bool {
        let b = edges.len();
        (1u32..(1 << b)).all(|mask| {
            let mut touched = HashSet::new();
            let mut count = 0;
            for (k, &(u, v)) in edges.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    touched.insert(u);
                    touched.insert(v);
                    count += 1;
                }
            }
            count <= 2 * touched.len() - 3
        })
    }

    #[test]
    fn triangle_is_tight() {
        let r = pebble_game_2_3(&graph(3, &[(0, 1), (1, 2), (2, 0)])).unwrap();
        assert_eq!(r.verdict, SparsityVerdict::Tight);
        assert!(r.witness.is_none());
    }

    #[test]
    fn k4_is_dependent_with_full_witness() {
        let e = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let r = pebble_game_2_3(&graph(4, &e)).unwrap();
        assert_eq!(r.verdict, SparsityVerdict::Dependent);
        let w = r.witness.unwrap();
        assert_eq!(w.bars, (0..6).collect::<Vec<_>>());
        assert!(w.b > 2 * w.j - 3);
    }

    #[test]
    fn two_triangles_tight() {
        let e = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
        assert!(brute_force_sparse(&e));
        assert_eq!(pebble_game_2_3(&graph(4, &e)).unwrap().verdict, SparsityVerdict::Tight);
    }

    #[test]
    fn underbraced_and_isolated() {
        let r = pebble_game_2_3(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])).unwrap();
        assert_eq!(r.verdict, SparsityVerdict::IndependentUnderbraced);
        assert_eq!(r.independent, 4);
        assert!(pebble_game_2_3(&graph(1, &[])).is_err());
    }

    #[test]
    fn invariant_holds_throughout() {
        let e = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (2, 4), (0, 4)];
        let mut moves = 0;
        pebble_game_2_3_observed(&graph(5, &e), |s| {
            moves += 1;
            assert!(s.invariant_holds());
        })
        .unwrap();
        assert!(moves > e.len());
    }

    #[test]
    fn witnesses_are_overcounted_and_sparsity_matches_brute_force() {
        // Every graph on five joints.
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| ((a + 1)..5).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let e: Vec<_> = (0..pairs.len()).filter(|k| mask & (1 << k) != 0).map(|k| pairs[k]).collect();
            let r = pebble_game_2_3(&graph(5, &e)).unwrap();
            let sparse = e.is_empty() || brute_force_sparse(&e);
            assert_eq!(r.verdict != SparsityVerdict::Dependent, sparse, "{e:?}");
            if let Some(w) = r.witness {
                assert!(w.b > 2 * w.j - 3);
                let g = Graph::new(5, &e).unwrap();
                let touched: BTreeSet<usize> = w.bars.iter().flat_map(|&k| [g.edges()[k].0, g.edges()[k].1]).collect();
                assert!(touched.len() <= w.j);
            }
        }
    }

    #[test]
    fn agrees_with_random_rank_on_small_graphs() {
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|a| ((a + 1)..4).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let e: Vec<_> = (0..pairs.len()).filter(|k| mask & (1 << k) != 0).map(|k| pairs[k]).collect();
            let g = graph(4, &e);
            let tight = pebble_game_2_3(&g).unwrap().verdict == SparsityVerdict::Tight;
            assert_eq!(tight, generically_isostatic_2d(&g, 3, 7, 1e-10), "{e:?}");
        }
    }

    #[test]
    fn graph_json() {
        let g = Graph::from_json(r#"{"bars": [[0,1],[1,2],[2,0]]}"#).unwrap();
        assert_eq!(g.joint_count(), 3);
        let g = Graph::from_json(r#"{"dimension": 2, "joint_count": 5, "bars": [[0,1]]}"#).unwrap();
        assert_eq!(g.joint_count(), 5);
        assert!(matches!(Graph::from_json(r#"{"bars": [[0,0]]}"#), Err(LamanError::SelfLoop(..))));
        assert!(matches!(Graph::from_json("nope"), Err(LamanError::Parse(_))));
    }

    #[test]
    fn symmetric_laman_fixtures() {
        for g in Fig2Group::ALL {
            let f = fig2_examples(g);
            let s = analyze_symmetry(&f, DEFAULT_GEOM_TOL).unwrap();
            let r = symmetric_laman(&f, &s).unwrap();
            assert!(r.pass, "{}", g.name());
            let want = if matches!(g, Fig2Group::C2v | Fig2Group::C3vPerp | Fig2Group::C3vIn) {
                Basis::Conjectural
            } else {
                Basis::TheoremBacked
            };
            assert_eq!(r.basis, want);
        }
    }

    #[test]
    fn c2_with_two_fixed_bars_fails() {
        // Two bars cross the centre of the half turn.
        let pts = vec![
            vec![1.0, 0.3],
            vec![-1.0, -0.3],
            vec![0.2, 1.1],
            vec![-0.2, -1.1],
            vec![1.7, 1.4],
            vec![-1.7, -1.4],
        ];
        let bars = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2), (4, 0), (5, 1)];
        let f = Framework::new(2, &pts, &bars).unwrap();
        let s = analyze_symmetry(&f, DEFAULT_GEOM_TOL).unwrap();
        assert_eq!(s.group.label, "C2");
        let r = symmetric_laman(&f, &s).unwrap();
        assert!(!r.pass);
        let c = r.conditions.iter().find(|c| c.statement == "b_2 = 1").unwrap();
        assert_eq!(c.value, 2);
    }

    #[test]
    fn outside_whitelist() {
        let f = rotor(6, false, true);
        let s = analyze_symmetry(&f, DEFAULT_GEOM_TOL).unwrap();
        assert_eq!(
            symmetric_laman(&f, &s).unwrap_err(),
            LamanError::GroupOutsideWhitelist("C6".into())
        );
    }

    #[test]
    fn scan_examples() {
        let oct = platonic(Platonic::Octahedron);
        assert!(subgraph_maxwell_scan_3d(&oct, 6).unwrap().is_empty());
        let mut bars = oct.bar_pairs();
        bars.push((0, 1));
        let braced = Framework::from_points(Dimension::Three, oct.positions().collect(), &bars, 1e-9).unwrap();
        let v = subgraph_maxwell_scan_3d(&braced, 6).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].j, v[0].b, v[0].count), (6, 13, -1));
        assert!(subgraph_maxwell_scan_3d(&double_banana(), 8).unwrap().is_empty());
        assert!(matches!(
            subgraph_maxwell_scan_3d(&oct, 13),
            Err(LamanError::CapExceeded { .. })
        ));
        assert!(subgraph_maxwell_scan_3d(&fig2_examples(Fig2Group::C1), 4).is_err());
    }

    #[test]
    fn scan_enumerates_each_connected_set_once() {
        // K4 has 4 connected triples and 1 connected quadruple.
        let tet = platonic(Platonic::Tetrahedron);
        let adj: Vec<BTreeSet<usize>> = tet.adjacency().into_iter().map(|n| n.into_iter().collect()).collect();
        let mut scan = Scan {
            adj: &adj,
            cap: 4,
            budget: SCAN_BUDGET,
            found: Vec::new(),
        };
        for v in 0..4 {
            let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
            scan.extend(&mut vec![v], ext, v);
        }
        assert_eq!(SCAN_BUDGET - scan.budget, 4 + 6 + 4 + 1);
    }
}
