//! Reduced sequences and free amalgamated joins of finite relations, and
//! triangle-reduced sequences on systems of three relations.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesrel::{FiniteMeasuredSpace, FiniteRelation, RelationFile, SpaceFile};

/// Label of one step of a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepLabel {
    R1,
    R2,
    F1,
    F2,
    F3,
    E1,
    E2,
    E3,
    R12,
    R13,
    R23,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoopKind {
    Reduced,
    TriangleTypeI,
    TriangleTypeII,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopCertificate {
    pub points: Vec<u32>,
    pub step_labels: Vec<StepLabel>,
    pub kind: LoopKind,
}

impl LoopCertificate {
    pub fn steps(&self) -> usize {
        self.step_labels.len()
    }
}

#[derive(Clone, Debug)]
pub struct RelationTriple {
    pub space: FiniteMeasuredSpace,
    pub r1: FiniteRelation,
    pub r2: FiniteRelation,
    pub r3: FiniteRelation,
}

impl RelationTriple {
    pub fn new(
        space: FiniteMeasuredSpace,
        r1: FiniteRelation,
        r2: FiniteRelation,
        r3: FiniteRelation,
    ) -> Result<RelationTriple> {
        for (name, r) in [("R1", &r1), ("R2", &r2), ("R3", &r3)] {
            r.check_sp_valid(&space)
                .map_err(|e| Error::InvalidRelation(format!("{name}: {e}")))?;
        }
        if !r3.is_subrelation_of(&r1) || !r3.is_subrelation_of(&r2) {
            return Err(Error::InvalidRelation("R3 is not a common subrelation of R1 and R2".into()));
        }
        Ok(RelationTriple { space, r1, r2, r3 })
    }

    pub fn point_count(&self) -> usize {
        self.space.point_count()
    }

    /// The same triple with the two factors swapped.
    pub fn swapped(&self) -> RelationTriple {
        RelationTriple {
            space: self.space.clone(),
            r1: self.r2.clone(),
            r2: self.r1.clone(),
            r3: self.r3.clone(),
        }
    }

    pub fn generated(&self) -> FiniteRelation {
        self.r1.join(&self.r2).expect("same space")
    }
}

/// The factor-class / common-class incidence graph when it is a forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Forest {
    /// One entry per class of the common subrelation: its smallest point and
    /// the class it lies in within each factor.
    pub edges: Vec<ForestEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForestEdge {
    pub representative: u32,
    pub factor_classes: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JoinWitness {
    Forest(Forest),
    Loop(LoopCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeJoinDecision {
    pub free: bool,
    pub witness: JoinWitness,
}

const TWO: [StepLabel; 2] = [StepLabel::R1, StepLabel::R2];
const THREE: [StepLabel; 3] = [StepLabel::F1, StepLabel::F2, StepLabel::F3];

/// Decides whether the join of `factors` is free over `common` by checking
/// that the incidence graph between factor classes and common classes is a
/// forest. A cycle is turned into a reduced loop.
fn free_join_many(factors: &[&FiniteRelation], common: &FiniteRelation, labels: &[StepLabel]) -> FreeJoinDecision {
    let reps: Vec<u32> = common.classes().iter().map(|c| c[0]).collect();
    // Node ids: common classes first, then each factor's classes.
    let mut offsets = vec![reps.len()];
    for f in factors {
        offsets.push(offsets.last().unwrap() + f.class_count());
    }
    let node_count = *offsets.last().unwrap();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); node_count];
    let mut parent: Vec<usize> = (0..node_count).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut edges = Vec::new();
    for (c, &rep) in reps.iter().enumerate() {
        let mut factor_classes = Vec::new();
        for (k, f) in factors.iter().enumerate() {
            let node = offsets[k] + f.class_of(rep) as usize;
            factor_classes.push(f.class_of(rep));
            let (a, b) = (find(&mut parent, c), find(&mut parent, node));
            if a == b {
                let cycle = tree_path(&adj, node, c);
                return FreeJoinDecision {
                    free: false,
                    witness: JoinWitness::Loop(cycle_to_loop(&cycle, &reps, &offsets, labels)),
                };
            }
            parent[a] = b;
            adj[c].push((node, k));
            adj[node].push((c, k));
        }
        edges.push(ForestEdge {
            representative: rep,
            factor_classes,
        });
    }
    FreeJoinDecision {
        free: true,
        witness: JoinWitness::Forest(Forest { edges }),
    }
}

/// Node path from `from` to `to` in the forest built so far.
fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(y, _) in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// A cycle `factor-node, common, factor, common, …, common` closing back to
/// its first node becomes the loop through the common-class representatives.
fn cycle_to_loop(path: &[usize], reps: &[u32], offsets: &[usize], labels: &[StepLabel]) -> LoopCertificate {
    // `path` runs from a factor node to a common node; the closing edge
    // returns to the start. Rotate so it starts at a common node.
    let mut cycle: Vec<usize> = path.to_vec();
    cycle.rotate_right(1);
    let factor_of = |node: usize| offsets.iter().rposition(|&o| node >= o).unwrap();
    let mut points = Vec::new();
    let mut step_labels = Vec::new();
    for pair in cycle.chunks(2) {
        points.push(reps[pair[0]]);
        step_labels.push(labels[factor_of(pair[1])]);
    }
    points.push(points[0]);
    LoopCertificate {
        points,
        step_labels,
        kind: LoopKind::Reduced,
    }
}

pub fn is_free_amalgamated_join(t: &RelationTriple) -> FreeJoinDecision {
    free_join_many(&[&t.r1, &t.r2], &t.r3, &TWO)
}

/// Free join of three relations over a common subrelation.
pub fn is_free_join_of_three(factors: [&FiniteRelation; 3], common: &FiniteRelation) -> FreeJoinDecision {
    free_join_many(&factors, common, &THREE)
}

/// Shortest reduced loop with at most `max_steps` steps, by breadth-first
/// search over (point, last factor) from every start point.
fn reduced_loop_search(
    factors: &[&FiniteRelation],
    common: &FiniteRelation,
    labels: &[StepLabel],
    max_steps: usize,
) -> Option<LoopCertificate> {
    let n = common.point_count();
    let k = factors.len();
    let mut best: Option<LoopCertificate> = None;
    for x0 in 0..n as u32 {
        // State index: point * (k + 1) + last, with last == k meaning none.
        let idx = |x: u32, last: usize| x as usize * (k + 1) + last;
        let mut prev = vec![usize::MAX; n * (k + 1)];
        let start = idx(x0, k);
        prev[start] = start;
        let mut frontier = vec![start];
        let mut found = None;
        'depth: for _ in 0..max_steps {
            let mut next = Vec::new();
            for &s in &frontier {
                let (x, last) = ((s / (k + 1)) as u32, s % (k + 1));
                for (f, rel) in factors.iter().enumerate() {
                    if f == last {
                        continue;
                    }
                    for y in 0..n as u32 {
                        if !rel.contains(x, y) || common.contains(x, y) {
                            continue;
                        }
                        let t = idx(y, f);
                        if y == x0 {
                            prev[t] = s;
                            found = Some(t);
                            break 'depth;
                        }
                        if prev[t] == usize::MAX {
                            prev[t] = s;
                            next.push(t);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let Some(end) = found else { continue };
        let mut states = vec![end];
        let mut s = prev[end];
        while s != start {
            states.push(s);
            s = prev[s];
        }
        states.reverse();
        let mut points = vec![x0];
        let mut step_labels = Vec::new();
        for s in states {
            points.push((s / (k + 1)) as u32);
            step_labels.push(labels[s % (k + 1)]);
        }
        let cert = LoopCertificate {
            points,
            step_labels,
            kind: LoopKind::Reduced,
        };
        if best.as_ref().is_none_or(|b| cert.steps() < b.steps()) {
            best = Some(cert);
        }
    }
    best
}

pub fn find_reduced_loop(t: &RelationTriple, max_steps: usize) -> Option<LoopCertificate> {
    reduced_loop_search(&[&t.r1, &t.r2], &t.r3, &TWO, max_steps)
}

pub fn default_loop_bound(points: usize) -> usize {
    2 * points + 2
}

/// Checks a reduced loop against the definition, independently of how it
/// was found. `factors` are indexed by the labels' position in `labels`.
fn validate_reduced(
    cert: &LoopCertificate,
    factors: &[&FiniteRelation],
    common: &FiniteRelation,
    labels: &[StepLabel],
) -> bool {
    let p = &cert.points;
    if cert.kind != LoopKind::Reduced || p.len() < 3 || p.len() != cert.step_labels.len() + 1 {
        return false;
    }
    if p.first() != p.last() || p.iter().any(|&x| x as usize >= common.point_count()) {
        return false;
    }
    cert.step_labels.windows(2).all(|w| w[0] != w[1])
        && p.windows(2).zip(&cert.step_labels).all(|(w, l)| {
            labels
                .iter()
                .position(|m| m == l)
                .is_some_and(|f| factors[f].contains(w[0], w[1]) && !common.contains(w[0], w[1]))
        })
}

pub fn validate_reduced_loop(cert: &LoopCertificate, t: &RelationTriple) -> bool {
    validate_reduced(cert, &[&t.r1, &t.r2], &t.r3, &TWO)
}

/// The six disjoint step sets of a triangle system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriLabel {
    E1 = 0,
    E2 = 1,
    E3 = 2,
    R12 = 3,
    R13 = 4,
    R23 = 5,
}

pub const TRI_LABELS: [TriLabel; 6] = [
    TriLabel::E1,
    TriLabel::E2,
    TriLabel::E3,
    TriLabel::R12,
    TriLabel::R13,
    TriLabel::R23,
];

impl TriLabel {
    pub fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn is_e(self) -> bool {
        (self as u8) < 3
    }

    pub fn step_label(self) -> StepLabel {
        [StepLabel::E1, StepLabel::E2, StepLabel::E3, StepLabel::R12, StepLabel::R13, StepLabel::R23][self as usize]
    }

    pub fn from_step_label(l: StepLabel) -> Option<TriLabel> {
        TRI_LABELS.iter().copied().find(|t| t.step_label() == l)
    }

    /// The pair set across the triangle from `E_l`.
    fn opposite(self) -> TriLabel {
        match self {
            TriLabel::E1 => TriLabel::R23,
            TriLabel::E2 => TriLabel::R13,
            TriLabel::E3 => TriLabel::R12,
            TriLabel::R23 => TriLabel::E1,
            TriLabel::R13 => TriLabel::E2,
            TriLabel::R12 => TriLabel::E3,
        }
    }

    /// Whether a step labelled `next` may follow one labelled `self`.
    pub fn may_precede(self, next: TriLabel) -> bool {
        self != next && (self.is_e() == next.is_e() || self.opposite() == next)
    }
}

const E_BITS: u8 = 0b000111;
const R_BITS: u8 = 0b111000;

/// Label sets that make a sequence proper of the first type.
pub fn is_type_one(used: u8) -> bool {
    (used & E_BITS).count_ones() >= 2
        || [TriLabel::E1, TriLabel::E2, TriLabel::E3]
            .iter()
            .any(|&e| used & e.bit() != 0 && used & e.opposite().bit() != 0)
}

pub fn is_type_two(used: u8) -> bool {
    used & E_BITS == 0 && used & R_BITS == R_BITS
}

/// Explicit pair labels: `label[x·n + y]` is the set containing `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSets {
    n: usize,
    label: Vec<Option<TriLabel>>,
}

impl PairSets {
    pub fn label(&self, x: u32, y: u32) -> Option<TriLabel> {
        self.label[x as usize * self.n + y as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, l: Option<TriLabel>) {
        self.label[x as usize * self.n + y as usize] = l;
    }

    pub fn count(&self, l: TriLabel) -> usize {
        self.label.iter().filter(|&&m| m == Some(l)).count()
    }
}

#[derive(Clone, Debug)]
pub struct TriangleSystem {
    space: FiniteMeasuredSpace,
    e: [FiniteRelation; 3],
    /// Pairwise intersections in edge order 12, 13, 23.
    r_pair: [FiniteRelation; 3],
    r0: FiniteRelation,
    /// `R_i`, generated by the two intersections at `E_i`.
    r_vertex: [FiniteRelation; 3],
    r: FiniteRelation,
    pairs: PairSets,
}

impl TriangleSystem {
    pub fn new(space: FiniteMeasuredSpace, e: [FiniteRelation; 3]) -> Result<TriangleSystem> {
        let (sys, derived) = Self::derive(space, e)?;
        Self::with_pair_sets_unchecked(sys, derived)
    }

    /// Builds a system from explicitly supplied pair sets. They are checked
    /// for symmetry, both absorption laws, and agreement with the sets
    /// derived from the relations, in that order.
    pub fn with_pair_sets(space: FiniteMeasuredSpace, e: [FiniteRelation; 3], pairs: PairSets) -> Result<TriangleSystem> {
        let (sys, derived) = Self::derive(space, e)?;
        if pairs.n != derived.n {
            return Err(Error::InvalidSystem("pair sets on the wrong number of points".into()));
        }
        let candidate = TriangleSystem { pairs, ..sys };
        candidate.check_symmetry()?;
        candidate.check_absorption()?;
        if candidate.pairs != derived {
            return Err(Error::InvalidSystem("pair sets differ from those derived from E1, E2, E3".into()));
        }
        Ok(candidate)
    }

    fn with_pair_sets_unchecked(sys: TriangleSystem, pairs: PairSets) -> Result<TriangleSystem> {
        let s = TriangleSystem { pairs, ..sys };
        s.check_symmetry()?;
        s.check_absorption()?;
        Ok(s)
    }

    fn derive(space: FiniteMeasuredSpace, e: [FiniteRelation; 3]) -> Result<(TriangleSystem, PairSets)> {
        for (i, r) in e.iter().enumerate() {
            r.check_sp_valid(&space)
                .map_err(|err| Error::InvalidSystem(format!("E{}: {err}", i + 1)))?;
        }
        let r_pair = [e[0].meet(&e[1])?, e[0].meet(&e[2])?, e[1].meet(&e[2])?];
        let r0 = r_pair[0].meet(&r_pair[1])?;
        if r_pair[0].meet(&r_pair[2])? != r0 || r_pair[1].meet(&r_pair[2])? != r0 {
            return Err(Error::InvalidSystem("pairwise intersections disagree".into()));
        }
        let r_vertex = [
            r_pair[0].join(&r_pair[1])?,
            r_pair[0].join(&r_pair[2])?,
            r_pair[1].join(&r_pair[2])?,
        ];
        let r = r_vertex[0].join(&r_vertex[1])?.join(&r_vertex[2])?;
        let n = space.point_count();
        let mut pairs = PairSets {
            n,
            label: vec![None; n * n],
        };
        for x in 0..n as u32 {
            for y in 0..n as u32 {
                let mut found = None;
                for (i, ei) in e.iter().enumerate() {
                    if ei.contains(x, y) && !r_vertex[i].contains(x, y) {
                        found = Some(TRI_LABELS[i]);
                    }
                }
                for (k, rk) in r_pair.iter().enumerate() {
                    if rk.contains(x, y) && !r0.contains(x, y) {
                        if found.is_some() {
                            return Err(Error::InvalidSystem(format!("pair ({x}, {y}) has two labels")));
                        }
                        found = Some(TRI_LABELS[3 + k]);
                    }
                }
                pairs.set(x, y, found);
            }
        }
        let sys = TriangleSystem {
            space,
            e,
            r_pair,
            r0,
            r_vertex,
            r,
            pairs: PairSets { n, label: Vec::new() },
        };
        Ok((sys, pairs))
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.point_count() as u32;
        for x in 0..n {
            for y in 0..n {
                if self.pairs.label(x, y) != self.pairs.label(y, x) {
                    return Err(Error::InvalidSystem(format!("pair sets not symmetric at ({x}, {y})")));
                }
            }
        }
        Ok(())
    }

    /// Both absorption laws, for every vertex and incident intersection.
    pub fn check_absorption(&self) -> Result<()> {
        let n = self.point_count() as u32;
        let incident = [(0, [3, 4]), (1, [3, 5]), (2, [4, 5])];
        for x in 0..n {
            for y in 0..n {
                let Some(l) = self.pairs.label(x, y) else { continue };
                for z in 0..n {
                    let m = self.pairs.label(y, z);
                    if l.is_e() {
                        let (_, rs) = incident[l as usize];
                        if rs.iter().any(|&r| m == Some(TRI_LABELS[r])) && self.pairs.label(x, z) != Some(l) {
                            return Err(Error::InvalidSystem(format!(
                                "absorption fails: ({x},{y}) in {l:?}, ({y},{z}) in {:?}, ({x},{z}) not in {l:?}",
                                m.unwrap()
                            )));
                        }
                    } else if self.r0.contains(y, z) && self.pairs.label(x, z) != Some(l) {
                        return Err(Error::InvalidSystem(format!(
                            "absorption fails: ({x},{y}) in {l:?}, ({y},{z}) in R0, ({x},{z}) not in {l:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &FiniteMeasuredSpace {
        &self.space
    }

    pub fn point_count(&self) -> usize {
        self.space.point_count()
    }

    pub fn e(&self, i: usize) -> &FiniteRelation {
        &self.e[i]
    }

    /// Intersection of `E_i` and `E_j` (0-based, `i < j`).
    pub fn r_pair(&self, i: usize, j: usize) -> &FiniteRelation {
        match (i.min(j), i.max(j)) {
            (0, 1) => &self.r_pair[0],
            (0, 2) => &self.r_pair[1],
            (1, 2) => &self.r_pair[2],
            _ => panic!("no intersection for ({i}, {j})"),
        }
    }

    pub fn r0(&self) -> &FiniteRelation {
        &self.r0
    }

    pub fn r_vertex(&self, i: usize) -> &FiniteRelation {
        &self.r_vertex[i]
    }

    /// The join of the three `R_i`.
    pub fn r(&self) -> &FiniteRelation {
        &self.r
    }

    pub fn pairs(&self) -> &PairSets {
        &self.pairs
    }

    pub fn is_minimal(&self) -> bool {
        (0..3).all(|i| self.e[i] == self.r_vertex[i])
    }

    pub fn generated(&self) -> FiniteRelation {
        self.e[0].join(&self.e[1]).and_then(|r| r.join(&self.e[2])).expect("same space")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    /// A violating loop was found.
    Violated,
    /// No violation, and the search state space was exhausted.
    Holds,
    /// No violation within the step bound, but the search did not finish.
    HoldsAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleJoinVerdict {
    pub status: SearchStatus,
    pub type_one_loop: Option<LoopCertificate>,
    /// A loop of the second type that does not split into single-`R_i` loops.
    pub type_two_loop: Option<LoopCertificate>,
    /// The certificate uses one `E°` and exactly two `R°` sets.
    pub mixed_labels: bool,
    pub steps_searched: usize,
}

impl TriangleJoinVerdict {
    pub fn is_join(&self) -> bool {
        self.status != SearchStatus::Violated
    }
}

struct SearchOutcome {
    found: Option<LoopCertificate>,
    exhausted: bool,
    depth: usize,
}

/// Breadth-first search from each start over states carrying a small
/// summary `S` of the walk so far. `step` returns the summary after moving
/// to a point, and `accept` decides whether arriving back at the start with
/// that summary closes a violating loop.
fn state_search<S: Copy + Eq + std::hash::Hash>(
    sys: &TriangleSystem,
    bound: Option<usize>,
    allowed: u8,
    kind: LoopKind,
    init: impl Fn(u32) -> S,
    step: impl Fn(u32, S, TriLabel, u32) -> S,
    accept: impl Fn(S) -> bool,
) -> SearchOutcome {
    let n = sys.point_count() as u32;
    let mut exhausted = true;
    let mut depth_reached = 0;
    for x0 in 0..n {
        type Key<S> = (u32, Option<TriLabel>, S);
        let start: Key<S> = (x0, None, init(x0));
        let mut prev: HashMap<Key<S>, Key<S>> = HashMap::new();
        prev.insert(start, start);
        let mut frontier = vec![start];
        let mut depth = 0;
        let mut hit = None;
        while !frontier.is_empty() && hit.is_none() {
            if bound.is_some_and(|b| depth >= b) {
                exhausted = false;
                break;
            }
            depth += 1;
            let mut next = Vec::new();
            'states: for &(x, last, s) in &frontier {
                for y in 0..n {
                    let Some(l) = sys.pairs.label(x, y) else { continue };
                    if allowed & l.bit() == 0 || last.is_some_and(|m| !m.may_precede(l)) {
                        continue;
                    }
                    let t = step(x0, s, l, y);
                    let key = (y, Some(l), t);
                    if prev.contains_key(&key) {
                        continue;
                    }
                    prev.insert(key, (x, last, s));
                    if y == x0 && accept(t) {
                        hit = Some(key);
                        break 'states;
                    }
                    next.push(key);
                }
            }
            frontier = next;
        }
        depth_reached = depth_reached.max(depth);
        if let Some(end) = hit {
            let mut points = vec![end.0];
            let mut labels = vec![end.1.unwrap()];
            let mut k = prev[&end];
            while k != start {
                points.push(k.0);
                labels.push(k.1.unwrap());
                k = prev[&k];
            }
            points.push(x0);
            points.reverse();
            labels.reverse();
            return SearchOutcome {
                found: Some(LoopCertificate {
                    points,
                    step_labels: labels.into_iter().map(TriLabel::step_label).collect(),
                    kind,
                }),
                exhausted: true,
                depth: depth_reached,
            };
        }
    }
    SearchOutcome {
        found: None,
        exhausted,
        depth: depth_reached,
    }
}

/// Shortest proper loop of the first type, if any within `bound` steps.
fn type_one_search(sys: &TriangleSystem, bound: Option<usize>) -> SearchOutcome {
    state_search(
        sys,
        bound,
        E_BITS | R_BITS,
        LoopKind::TriangleTypeI,
        |_| 0u8,
        |_, used, l, _| used | l.bit(),
        is_type_one,
    )
}

/// Summary for the second-type search: labels used, which `R_i[x0]` the
/// current excursion from the start has left, and whether an earlier
/// excursion left all three.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct ExcursionState {
    used: u8,
    escaped: u8,
    bad: bool,
}

fn escape_bits(sys: &TriangleSystem, x0: u32, y: u32) -> u8 {
    (0..3).filter(|&i| !sys.r_vertex[i].contains(x0, y)).fold(0, |m, i| m | 1 << i)
}

fn type_two_search(sys: &TriangleSystem, bound: Option<usize>) -> SearchOutcome {
    state_search(
        sys,
        bound,
        R_BITS,
        LoopKind::TriangleTypeII,
        |_| ExcursionState {
            used: 0,
            escaped: 0,
            bad: false,
        },
        |x0, s, l, y| {
            let used = s.used | l.bit();
            if y == x0 {
                ExcursionState {
                    used,
                    escaped: 0,
                    bad: s.bad || s.escaped == 0b111,
                }
            } else {
                ExcursionState {
                    used,
                    escaped: s.escaped | escape_bits(sys, x0, y),
                    bad: s.bad,
                }
            }
        },
        |s| is_type_two(s.used) && s.bad,
    )
}

/// Decides the triangle-join property: no proper loop of the first type,
/// and every proper loop of the second type splits at its returns to the
/// start point into loops each inside one `R_i`. `None` searches until the
/// finite state space is exhausted.
pub fn is_triangle_join(sys: &TriangleSystem, loop_bound: Option<usize>) -> TriangleJoinVerdict {
    let one = type_one_search(sys, loop_bound);
    if let Some(cert) = one.found {
        let mixed = mixed_labels(&cert);
        return TriangleJoinVerdict {
            status: SearchStatus::Violated,
            type_one_loop: Some(cert),
            type_two_loop: None,
            mixed_labels: mixed,
            steps_searched: one.depth,
        };
    }
    let two = type_two_search(sys, loop_bound);
    let status = if two.found.is_some() {
        SearchStatus::Violated
    } else if one.exhausted && two.exhausted {
        SearchStatus::Holds
    } else {
        SearchStatus::HoldsAtBound
    };
    TriangleJoinVerdict {
        status,
        type_one_loop: None,
        type_two_loop: two.found,
        mixed_labels: false,
        steps_searched: one.depth.max(two.depth),
    }
}

fn label_mask(cert: &LoopCertificate) -> Option<u8> {
    cert.step_labels
        .iter()
        .try_fold(0u8, |m, &l| TriLabel::from_step_label(l).map(|t| m | t.bit()))
}

fn mixed_labels(cert: &LoopCertificate) -> bool {
    label_mask(cert).is_some_and(|m| (m & E_BITS).count_ones() == 1 && (m & R_BITS).count_ones() == 2)
}

/// Whether a loop splits, at its returns to the start, into loops each
/// lying inside a single `R_i`.
pub fn splits_into_vertex_loops(sys: &TriangleSystem, points: &[u32]) -> bool {
    let x0 = points[0];
    let mut escaped = 0u8;
    for &y in &points[1..] {
        if y == x0 {
            if escaped == 0b111 {
                return false;
            }
            escaped = 0;
        } else {
            escaped |= escape_bits(sys, x0, y);
        }
    }
    true
}

/// Checks a triangle loop certificate against the raw definitions.
pub fn validate_triangle_loop(cert: &LoopCertificate, sys: &TriangleSystem) -> bool {
    let p = &cert.points;
    if p.len() < 3 || p.len() != cert.step_labels.len() + 1 || p.first() != p.last() {
        return false;
    }
    if p.iter().any(|&x| x as usize >= sys.point_count()) {
        return false;
    }
    let Some(labels) = cert
        .step_labels
        .iter()
        .map(|&l| TriLabel::from_step_label(l))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    // Recompute membership from the relations rather than the stored labels.
    let member = |x: u32, y: u32, l: TriLabel| -> bool {
        match l as usize {
            i @ 0..=2 => sys.e[i].contains(x, y) && !sys.r_vertex[i].contains(x, y),
            k => sys.r_pair[k - 3].contains(x, y) && !sys.r0.contains(x, y),
        }
    };
    if !p.windows(2).zip(&labels).all(|(w, &l)| member(w[0], w[1], l)) {
        return false;
    }
    if !labels.windows(2).all(|w| w[0].may_precede(w[1])) {
        return false;
    }
    let used = labels.iter().fold(0u8, |m, l| m | l.bit());
    match cert.kind {
        LoopKind::TriangleTypeI => is_type_one(used),
        LoopKind::TriangleTypeII => is_type_two(used) && !splits_into_vertex_loops(sys, p),
        LoopKind::Reduced => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeJoinTheoremReport {
    /// `R_1 ∨ R_2` is free over `R_12`.
    pub left: bool,
    /// `R_13 ∨ R_23` is free over `R_0`.
    pub right: bool,
    pub triangle_join: SearchStatus,
    /// The equivalence applies only to verified triangle joins. Otherwise
    /// only the implication from left to right is checked.
    pub applicable: bool,
    pub consistent: bool,
}

/// Compares the two sides of the free-join equivalence on a minimal system.
pub fn check_freejoin_theorem(sys: &TriangleSystem, loop_bound: Option<usize>) -> Result<FreeJoinTheoremReport> {
    if !sys.is_minimal() {
        return Err(Error::InvalidSystem("the free-join equivalence needs a minimal system".into()));
    }
    let left = is_free_amalgamated_join(&RelationTriple::new(
        sys.space.clone(),
        sys.r_vertex[0].clone(),
        sys.r_vertex[1].clone(),
        sys.r_pair[0].clone(),
    )?)
    .free;
    let right = is_free_amalgamated_join(&RelationTriple::new(
        sys.space.clone(),
        sys.r_pair[1].clone(),
        sys.r_pair[2].clone(),
        sys.r0.clone(),
    )?)
    .free;
    let verdict = is_triangle_join(sys, loop_bound);
    let applicable = verdict.is_join();
    let consistent = if applicable { left == right } else { !left || right };
    Ok(FreeJoinTheoremReport {
        left,
        right,
        triangle_join: verdict.status,
        applicable,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub triangle_join: SearchStatus,
    /// `E_i ∨ R` is free over `R_i`, per vertex.
    pub vertex_free: [bool; 3],
    /// The three `F_i = E_i ∨ R` are free over `R`.
    pub free_over_r: bool,
    /// Loop search over the `F_i` agrees with the forest criterion.
    pub loop_search_agrees: bool,
    pub violations: Vec<String>,
}

impl ReductionReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that a triangle join splits as the free join over `R` of the
/// `E_i ∨ R`, each free over `R_i`.
pub fn check_reduction_theorem(sys: &TriangleSystem, loop_bound: Option<usize>) -> Result<ReductionReport> {
    let verdict = is_triangle_join(sys, loop_bound);
    if !verdict.is_join() {
        return Err(Error::InvalidSystem("not a triangle join".into()));
    }
    let r = &sys.r;
    let mut violations = Vec::new();
    let mut vertex_free = [false; 3];
    let mut f = Vec::new();
    for i in 0..3 {
        let t = RelationTriple::new(sys.space.clone(), sys.e[i].clone(), r.clone(), sys.r_vertex[i].clone())?;
        vertex_free[i] = is_free_amalgamated_join(&t).free;
        if !vertex_free[i] {
            violations.push(format!("E{} and R are not free over R{}", i + 1, i + 1));
        }
        f.push(t.generated());
    }
    let d = is_free_join_of_three([&f[0], &f[1], &f[2]], r);
    if !d.free {
        violations.push("E1∨R, E2∨R, E3∨R are not free over R".into());
    }
    let bound = default_loop_bound(sys.point_count()).max(2 * (r.class_count() * 4));
    let found = reduced_loop_search(&[&f[0], &f[1], &f[2]], r, &THREE, bound);
    let loop_search_agrees = found.is_none() == d.free;
    if !loop_search_agrees {
        violations.push("loop search disagrees with the forest criterion".into());
    }
    Ok(ReductionReport {
        triangle_join: verdict.status,
        vertex_free,
        free_over_r: d.free,
        loop_search_agrees,
        violations,
    })
}

/// Label families in the uniqueness statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceShape {
    /// Only `E°` steps, at least two distinct `E°` sets.
    EOnly,
    /// Only `E_l°` and the opposite `R°`, both present.
    Opposite(TriLabel),
}

impl SequenceShape {
    pub const ALL: [SequenceShape; 4] = [
        SequenceShape::EOnly,
        SequenceShape::Opposite(TriLabel::E1),
        SequenceShape::Opposite(TriLabel::E2),
        SequenceShape::Opposite(TriLabel::E3),
    ];

    fn allowed(self) -> u8 {
        match self {
            SequenceShape::EOnly => E_BITS,
            SequenceShape::Opposite(e) => e.bit() | e.opposite().bit(),
        }
    }

    fn complete(self, used: u8) -> bool {
        match self {
            SequenceShape::EOnly => used.count_ones() >= 2,
            SequenceShape::Opposite(_) => used == self.allowed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessViolation {
    pub from: u32,
    pub to: u32,
    pub shape: SequenceShape,
    pub count: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct UniquenessReport {
    /// Ordered pairs joined by more than one sequence, counting sequences
    /// point by point.
    pub literal: Vec<UniquenessViolation>,
    /// The same, after identifying intermediate points equivalent under the
    /// relation shared by their two adjacent steps (`R_lm` between `E_l°`
    /// and `E_m°`, `R_0` otherwise).
    pub up_to_common: Vec<UniquenessViolation>,
}

impl UniquenessReport {
    pub fn holds_literally(&self) -> bool {
        self.literal.is_empty()
    }

    pub fn holds_up_to_common(&self) -> bool {
        self.up_to_common.is_empty()
    }
}

/// Enumerates, for every ordered pair of distinct points and every shape,
/// the triangle-reduced sequences of that shape without repeated points. In
/// a triangle join a repeated point would close a loop of the first type,
/// so these are all such sequences.
pub fn uniqueness_check(sys: &TriangleSystem) -> UniquenessReport {
    let n = sys.point_count() as u32;
    let mut report = UniquenessReport::default();
    for shape in SequenceShape::ALL {
        for x in 0..n {
            let mut found: Vec<Vec<(u32, TriLabel)>> = Vec::new();
            let mut visited = vec![false; n as usize];
            visited[x as usize] = true;
            let mut path = Vec::new();
            collect_paths(sys, shape, x, 0, &mut visited, &mut path, &mut found);
            for y in 0..n {
                if y == x {
                    continue;
                }
                let ending: Vec<_> = found.iter().filter(|p| p.last().unwrap().0 == y).collect();
                if ending.len() > 1 {
                    report.literal.push(UniquenessViolation { from: x, to: y, shape, count: ending.len() });
                }
                let mut classes: Vec<Vec<(u32, TriLabel)>> = ending.iter().map(|p| canonical(sys, p)).collect();
                classes.sort_by_key(|c| c.iter().map(|&(a, l)| (a, l as u8)).collect::<Vec<_>>());
                classes.dedup();
                if classes.len() > 1 {
                    report.up_to_common.push(UniquenessViolation { from: x, to: y, shape, count: classes.len() });
                }
            }
        }
    }
    report
}

/// Replaces each intermediate point by its class under the relation shared
/// by the steps on either side of it.
fn canonical(sys: &TriangleSystem, path: &[(u32, TriLabel)]) -> Vec<(u32, TriLabel)> {
    path.iter()
        .enumerate()
        .map(|(k, &(y, l))| {
            let Some(&(_, next)) = path.get(k + 1) else { return (y, l) };
            let shared = if l.is_e() && next.is_e() {
                sys.r_pair(l as usize, next as usize)
            } else {
                &sys.r0
            };
            (shared.class_of(y), l)
        })
        .collect()
}

fn collect_paths(
    sys: &TriangleSystem,
    shape: SequenceShape,
    x: u32,
    used: u8,
    visited: &mut [bool],
    path: &mut Vec<(u32, TriLabel)>,
    out: &mut Vec<Vec<(u32, TriLabel)>>,
) {
    let last = path.last().map(|&(_, l)| l);
    for y in 0..sys.point_count() as u32 {
        if visited[y as usize] {
            continue;
        }
        let Some(l) = sys.pairs.label(x, y) else { continue };
        if shape.allowed() & l.bit() == 0 || last.is_some_and(|m| !m.may_precede(l)) {
            continue;
        }
        let u = used | l.bit();
        path.push((y, l));
        if shape.complete(u) {
            out.push(path.clone());
        }
        visited[y as usize] = true;
        collect_paths(sys, shape, y, u, visited, path, out);
        visited[y as usize] = false;
        path.pop();
    }
}

/// Shrinks each `E_i` to `R_ij ∨ R_ik` until nothing changes.
pub fn minimal_closure(space: &FiniteMeasuredSpace, mut e: [FiniteRelation; 3]) -> Result<TriangleSystem> {
    loop {
        let r12 = e[0].meet(&e[1])?;
        let r13 = e[0].meet(&e[2])?;
        let r23 = e[1].meet(&e[2])?;
        let next = [r12.join(&r13)?, r12.join(&r23)?, r13.join(&r23)?];
        if next == e {
            return TriangleSystem::new(space.clone(), e);
        }
        e = next;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleFile {
    pub space: SpaceFile,
    #[serde(rename = "R1")]
    pub r1: RelationFile,
    #[serde(rename = "R2")]
    pub r2: RelationFile,
    #[serde(rename = "R3")]
    pub r3: RelationFile,
}

impl TripleFile {
    pub fn from_triple(t: &RelationTriple) -> TripleFile {
        TripleFile {
            space: SpaceFile::from_space(&t.space),
            r1: RelationFile::from_relation(&t.r1),
            r2: RelationFile::from_relation(&t.r2),
            r3: RelationFile::from_relation(&t.r3),
        }
    }

    pub fn to_triple(&self) -> Result<RelationTriple> {
        let space = self.space.to_space()?;
        let n = space.point_count();
        RelationTriple::new(space, self.r1.to_relation(n)?, self.r2.to_relation(n)?, self.r3.to_relation(n)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SystemFile {
    pub space: SpaceFile,
    #[serde(rename = "E1")]
    pub e1: RelationFile,
    #[serde(rename = "E2")]
    pub e2: RelationFile,
    #[serde(rename = "E3")]
    pub e3: RelationFile,
}

impl SystemFile {
    pub fn from_system(s: &TriangleSystem) -> SystemFile {
        SystemFile {
            space: SpaceFile::from_space(&s.space),
            e1: RelationFile::from_relation(&s.e[0]),
            e2: RelationFile::from_relation(&s.e[1]),
            e3: RelationFile::from_relation(&s.e[2]),
        }
    }

    pub fn to_system(&self) -> Result<TriangleSystem> {
        let space = self.space.to_space()?;
        let n = space.point_count();
        TriangleSystem::new(
            space,
            [self.e1.to_relation(n)?, self.e2.to_relation(n)?, self.e3.to_relation(n)?],
        )
    }
}

/// Seeded instance generators for the property harnesses.
pub mod random {
    use rand::Rng;

    use super::*;

    /// A partition with a mix of singletons and a few larger classes.
    pub fn sparse_partition<R: Rng>(rng: &mut R, n: usize) -> FiniteRelation {
        let k = rng.gen_range(1..=n / 2 + 1) as u32;
        let labels = (0..n as u32)
            .map(|x| if rng.gen_bool(0.5) { n as u32 + rng.gen_range(0..k) } else { x })
            .collect();
        FiniteRelation::from_labels(labels)
    }

    pub fn partition<R: Rng>(rng: &mut R, n: usize) -> FiniteRelation {
        let k = rng.gen_range(1..=n) as u32;
        FiniteRelation::from_labels((0..n).map(|_| rng.gen_range(0..k)).collect())
    }

    /// A random subrelation of `r`.
    pub fn refinement<R: Rng>(rng: &mut R, r: &FiniteRelation) -> FiniteRelation {
        let n = r.point_count() as u32;
        let k = rng.gen_range(1..=n);
        FiniteRelation::from_labels((0..n).map(|x| r.class_of(x) * n + rng.gen_range(0..k)).collect())
    }

    pub fn triple<R: Rng>(rng: &mut R, n: usize) -> RelationTriple {
        let r1 = partition(rng, n);
        let r2 = partition(rng, n);
        let r3 = refinement(rng, &r1.meet(&r2).expect("same space"));
        RelationTriple::new(FiniteMeasuredSpace::uniform(n), r1, r2, r3).expect("uniform weights")
    }

    pub fn minimal_system<R: Rng>(rng: &mut R, n: usize) -> TriangleSystem {
        let space = FiniteMeasuredSpace::uniform(n);
        let a = [sparse_partition(rng, n), sparse_partition(rng, n), sparse_partition(rng, n)];
        let e = [
            a[0].join(&a[1]).expect("same space"),
            a[0].join(&a[2]).expect("same space"),
            a[1].join(&a[2]).expect("same space"),
        ];
        minimal_closure(&space, e).expect("uniform weights")
    }

    /// A system whose vertices carry extra structure beyond the minimal part.
    pub fn system<R: Rng>(rng: &mut R, n: usize) -> TriangleSystem {
        let base = minimal_system(rng, n);
        let e = [0, 1, 2].map(|i| {
            if rng.gen_bool(0.5) {
                base.e(i).join(&sparse_partition(rng, n)).expect("same space")
            } else {
                base.e(i).clone()
            }
        });
        TriangleSystem::new(base.space().clone(), e).expect("uniform weights")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesrel::{all_partitions, refinements};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(n: usize, classes: &[&[u32]]) -> FiniteRelation {
        let classes: Vec<Vec<u32>> = classes.iter().map(|c| c.to_vec()).collect();
        FiniteRelation::from_classes(n, &classes).unwrap()
    }

    fn triple(r1: FiniteRelation, r2: FiniteRelation, r3: FiniteRelation) -> RelationTriple {
        let n = r1.point_count();
        RelationTriple::new(FiniteMeasuredSpace::uniform(n), r1, r2, r3).unwrap()
    }

    fn system(e: [FiniteRelation; 3]) -> TriangleSystem {
        TriangleSystem::new(FiniteMeasuredSpace::uniform(e[0].point_count()), e).unwrap()
    }

    fn hexagon() -> TriangleSystem {
        system([
            rel(6, &[&[0, 1, 2], &[3, 4, 5]]),
            rel(6, &[&[0, 1, 5], &[2, 3, 4]]),
            rel(6, &[&[1, 2, 3], &[0, 4, 5]]),
        ])
    }

    fn four_cycle() -> TriangleSystem {
        system([rel(4, &[&[0, 1], &[2, 3]]), rel(4, &[&[1, 2], &[3, 0]]), FiniteRelation::diagonal(4)])
    }

    #[test]
    fn path_shaped_forest_is_free() {
        let t = triple(rel(4, &[&[0, 1], &[2, 3]]), rel(4, &[&[1, 2], &[0], &[3]]), FiniteRelation::diagonal(4));
        let d = is_free_amalgamated_join(&t);
        assert!(d.free);
        assert!(matches!(d.witness, JoinWitness::Forest(ref f) if f.edges.len() == 4));
        assert_eq!(find_reduced_loop(&t, 10), None);
    }

    #[test]
    fn four_cycle_is_not_free() {
        let t = triple(rel(4, &[&[0, 1], &[2, 3]]), rel(4, &[&[1, 2], &[3, 0]]), FiniteRelation::diagonal(4));
        let d = is_free_amalgamated_join(&t);
        assert!(!d.free);
        let JoinWitness::Loop(cert) = d.witness else { panic!("expected a loop") };
        assert_eq!(cert.points.len(), 5);
        assert!(validate_reduced_loop(&cert, &t));
        let mut seen = cert.points[..4].to_vec();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        let found = find_reduced_loop(&t, 6).unwrap();
        assert_eq!(found.points.len(), 5);
        assert!(validate_reduced_loop(&found, &t));
    }

    #[test]
    fn equal_factors_are_free() {
        let r = rel(5, &[&[0, 1, 2], &[3, 4]]);
        let t = triple(r.clone(), r.clone(), r.clone());
        assert!(is_free_amalgamated_join(&t).free);
        assert_eq!(find_reduced_loop(&t, 10), None);
        // R1 = R3 with a different R2.
        let t = triple(r.clone(), FiniteRelation::total(5), r);
        assert_eq!(find_reduced_loop(&t, 10), None);
        assert!(is_free_amalgamated_join(&t).free);
    }

    #[test]
    fn shared_pair_outside_common_is_a_double_edge() {
        let r = rel(3, &[&[0, 1], &[2]]);
        let t = triple(r.clone(), r, FiniteRelation::diagonal(3));
        let d = is_free_amalgamated_join(&t);
        let JoinWitness::Loop(cert) = d.witness else { panic!("expected a loop") };
        assert_eq!(cert.points.len(), 3);
        assert!(validate_reduced_loop(&cert, &t));
    }

    #[test]
    fn rejects_non_common_subrelation() {
        let r1 = rel(3, &[&[0, 1], &[2]]);
        let r2 = FiniteRelation::diagonal(3);
        assert!(RelationTriple::new(FiniteMeasuredSpace::uniform(3), r1.clone(), r2, r1).is_err());
    }

    #[test]
    fn forest_criterion_matches_loop_search_exhaustively() {
        for n in 1..=5 {
            let parts = all_partitions(n);
            for r1 in &parts {
                for r2 in &parts {
                    for r3 in refinements(&r1.meet(r2).unwrap()) {
                        let t = triple(r1.clone(), r2.clone(), r3);
                        let d = is_free_amalgamated_join(&t);
                        let found = find_reduced_loop(&t, default_loop_bound(n));
                        assert_eq!(d.free, found.is_none(), "{t:?}");
                        assert_eq!(d.free, is_free_amalgamated_join(&t.swapped()).free);
                        if let JoinWitness::Loop(c) = &d.witness {
                            assert!(validate_reduced_loop(c, &t));
                        }
                        if let Some(c) = &found {
                            assert!(validate_reduced_loop(c, &t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forest_criterion_matches_loop_search_randomly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rand::Rng::gen_range(&mut rng, 1..=10);
            let t = random::triple(&mut rng, n);
            let d = is_free_amalgamated_join(&t);
            assert_eq!(d.free, find_reduced_loop(&t, default_loop_bound(n)).is_none());
        }
    }

    #[test]
    fn validator_rejects_tampered_loops() {
        let t = triple(rel(4, &[&[0, 1], &[2, 3]]), rel(4, &[&[1, 2], &[3, 0]]), FiniteRelation::diagonal(4));
        let cert = find_reduced_loop(&t, 6).unwrap();
        let mut bad = cert.clone();
        bad.step_labels.swap(0, 1);
        assert!(!validate_reduced_loop(&bad, &t));
        let mut bad = cert.clone();
        *bad.points.last_mut().unwrap() = 3;
        assert!(!validate_reduced_loop(&bad, &t));
        let mut bad = cert;
        bad.step_labels[1] = bad.step_labels[0];
        assert!(!validate_reduced_loop(&bad, &t));
    }

    #[test]
    fn adjacency_rules() {
        use TriLabel::*;
        assert!(E1.may_precede(E2) && E1.may_precede(R23));
        assert!(!E1.may_precede(R12) && !E1.may_precede(E1));
        assert!(R12.may_precede(E3) && R12.may_precede(R13));
        assert!(!R12.may_precede(E1) && !R12.may_precede(R12));
        assert!(is_type_one(E1.bit() | R23.bit()));
        assert!(is_type_one(E1.bit() | E3.bit()));
        assert!(!is_type_one(E1.bit() | R12.bit() | R13.bit()));
        assert!(is_type_two(R12.bit() | R13.bit() | R23.bit()));
        assert!(!is_type_two(R12.bit() | R13.bit() | R23.bit() | E1.bit()));
    }

    #[test]
    fn derived_sets_are_consistent() {
        let s = hexagon();
        assert!(s.is_minimal());
        assert!(s.r0().is_diagonal());
        assert_eq!(s.pairs().count(TriLabel::R12), 4);
        assert_eq!(s.pairs().count(TriLabel::E1), 0);
        let s = four_cycle();
        assert!(!s.is_minimal());
        assert_eq!(s.pairs().count(TriLabel::E1), 4);
    }

    #[test]
    fn hexagon_has_an_indecomposable_second_type_loop() {
        let s = hexagon();
        let v = is_triangle_join(&s, None);
        assert_eq!(v.status, SearchStatus::Violated);
        assert!(v.type_one_loop.is_none());
        let cert = v.type_two_loop.unwrap();
        assert_eq!(cert.steps(), 6);
        assert!(validate_triangle_loop(&cert, &s));
        // Not a join, so only the forward implication is in force: here the
        // left side fails while the right side is free.
        let r = check_freejoin_theorem(&s, None).unwrap();
        assert!(!r.left && r.right && !r.applicable && r.consistent);
    }

    #[test]
    fn four_cycle_in_vertex_sets_breaks_the_join() {
        let s = four_cycle();
        let v = is_triangle_join(&s, Some(default_loop_bound(4)));
        assert_eq!(v.status, SearchStatus::Violated);
        let cert = v.type_one_loop.unwrap();
        assert_eq!(cert.steps(), 4);
        assert!(validate_triangle_loop(&cert, &s));
        assert!(!v.mixed_labels);
    }

    #[test]
    fn degenerate_systems_are_joins() {
        let r = rel(4, &[&[0, 1], &[2], &[3]]);
        let s = system([r.clone(), r.clone(), r]);
        assert!(s.is_minimal());
        let v = is_triangle_join(&s, Some(default_loop_bound(4)));
        assert_eq!(v.status, SearchStatus::Holds);
        let f = check_freejoin_theorem(&s, None).unwrap();
        assert!(f.left && f.right && f.consistent);
        let red = check_reduction_theorem(&s, None).unwrap();
        assert!(red.consistent());
    }

    #[test]
    fn bound_limited_searches_say_so() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = (0..200)
            .map(|_| random::minimal_system(&mut rng, 8))
            .find(|s| is_triangle_join(s, None).status == SearchStatus::Holds && !s.r().is_diagonal())
            .expect("some nontrivial join");
        assert_eq!(is_triangle_join(&s, Some(1)).status, SearchStatus::HoldsAtBound);
    }

    #[test]
    fn free_case_matches_three_factor_free_join() {
        // All pairwise intersections equal R0: triangle join iff the E_i are
        // free over R0.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut compared = 0;
        for _ in 0..3000 {
            let n = rand::Rng::gen_range(&mut rng, 2..=7);
            let r = random::sparse_partition(&mut rng, n);
            let e = [0, 1, 2].map(|_| r.join(&random::sparse_partition(&mut rng, n)).unwrap());
            let s = system(e);
            if !(s.r_pair(0, 1) == s.r0() && s.r_pair(0, 2) == s.r0() && s.r_pair(1, 2) == s.r0()) {
                continue;
            }
            compared += 1;
            let free = is_free_join_of_three([s.e(0), s.e(1), s.e(2)], s.r0()).free;
            let v = is_triangle_join(&s, None);
            assert_eq!(v.is_join(), free, "{:?}", SystemFile::from_system(&s));
            assert!(!(v.status == SearchStatus::HoldsAtBound));
        }
        assert!(compared > 300, "{compared}");
    }

    #[test]
    fn absorption_violation_is_rejected() {
        let s = system([rel(3, &[&[0, 1, 2]]), rel(3, &[&[0], &[1, 2]]), FiniteRelation::diagonal(3)]);
        assert_eq!(s.pairs().label(0, 2), Some(TriLabel::E1));
        assert_eq!(s.pairs().label(1, 2), Some(TriLabel::R12));
        let e = [s.e(0).clone(), s.e(1).clone(), s.e(2).clone()];
        let ok = TriangleSystem::with_pair_sets(s.space().clone(), e.clone(), s.pairs().clone());
        assert!(ok.is_ok());
        let mut corrupted = s.pairs().clone();
        corrupted.set(0, 2, None);
        corrupted.set(2, 0, None);
        let err = TriangleSystem::with_pair_sets(s.space().clone(), e.clone(), corrupted).unwrap_err();
        assert!(err.to_string().contains("absorption"), "{err}");
        let mut asymmetric = s.pairs().clone();
        asymmetric.set(0, 2, None);
        assert!(TriangleSystem::with_pair_sets(s.space().clone(), e, asymmetric).is_err());
    }

    #[test]
    fn random_systems_satisfy_the_theorems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut joins = 0;
        for k in 0..300 {
            let n = 3 + k % 6;
            let s = if k % 2 == 0 { random::minimal_system(&mut rng, n) } else { random::system(&mut rng, n) };
            s.check_absorption().unwrap();
            let v = is_triangle_join(&s, None);
            for c in v.type_one_loop.iter().chain(&v.type_two_loop) {
                assert!(validate_triangle_loop(c, &s));
            }
            if s.is_minimal() {
                assert!(v.type_one_loop.is_none());
                assert!(check_freejoin_theorem(&s, None).unwrap().consistent);
            }
            if v.is_join() {
                joins += 1;
                let r = check_reduction_theorem(&s, None).unwrap();
                assert!(r.consistent(), "{:?} {r:?}", SystemFile::from_system(&s));
                if n <= 6 {
                    let u = uniqueness_check(&s);
                    assert!(u.holds_up_to_common(), "{} {u:?}", serde_json::to_string(&SystemFile::from_system(&s)).unwrap());
                }
            }
        }
        assert!(joins > 50, "{joins}");
    }

    #[test]
    fn sequences_are_unique_only_up_to_the_common_class() {
        let s = system([
            rel(6, &[&[0, 1, 3, 4, 5], &[2]]),
            rel(6, &[&[0], &[1, 2, 3, 4, 5]]),
            rel(6, &[&[0, 1, 4, 5], &[2], &[3]]),
        ]);
        assert_eq!(is_triangle_join(&s, None).status, SearchStatus::Holds);
        let u = uniqueness_check(&s);
        // 0, m, 2 for each m in the R0 class {1, 4, 5}.
        assert!(u
            .literal
            .iter()
            .any(|v| (v.from, v.to, v.shape, v.count) == (0, 2, SequenceShape::Opposite(TriLabel::E2), 3)));
        assert!(u.holds_up_to_common());
    }

    #[test]
    fn uniqueness_fails_without_the_join_property() {
        let s = four_cycle();
        let v = uniqueness_check(&s);
        assert!(v.up_to_common.iter().any(|u| u.shape == SequenceShape::EOnly && u.count == 2));
    }

    #[test]
    fn file_formats() {
        let json = r#"{"space": {"weights": ["1/4","1/4","1/4","1/4"]},
            "R1": {"classes": [[0,1],[2,3]]}, "R2": {"classes": [[1,2],[0],[3]]},
            "R3": {"classes": [[0],[1],[2],[3]]}}"#;
        let t: TripleFile = serde_json::from_str(json).unwrap();
        assert!(is_free_amalgamated_join(&t.to_triple().unwrap()).free);
        let s = SystemFile::from_system(&hexagon());
        let back: SystemFile = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(back.to_system().unwrap().is_minimal());
    }
}
