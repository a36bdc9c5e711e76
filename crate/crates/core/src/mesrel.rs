//! Finite atomic models of measure-preserving equivalence relations:
//! weighted point sets, partial bijections, graphings, their costs, and
//! orbit relations of group actions.

use std::collections::HashMap;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};
use crate::rational::{self, ExactRational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMeasuredSpace {
    weights: Vec<ExactRational>,
    normalized: bool,
}

impl FiniteMeasuredSpace {
    /// A probability space: weights must be positive and sum to 1.
    pub fn new(weights: Vec<ExactRational>) -> Result<FiniteMeasuredSpace> {
        let s = Self::unnormalized(weights)?;
        if !s.total().is_one() {
            return Err(Error::InvalidSpace(format!(
                "weights sum to {}, not 1",
                rational::format(&s.total())
            )));
        }
        Ok(FiniteMeasuredSpace {
            normalized: true,
            ..s
        })
    }

    pub fn unnormalized(weights: Vec<ExactRational>) -> Result<FiniteMeasuredSpace> {
        if weights.is_empty() {
            return Err(Error::InvalidSpace("no points".into()));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidSpace(format!("weight of point {i} is not positive")));
        }
        Ok(FiniteMeasuredSpace {
            weights,
            normalized: false,
        })
    }

    pub fn uniform(n: usize) -> FiniteMeasuredSpace {
        assert!(n > 0, "uniform space needs a point");
        FiniteMeasuredSpace {
            weights: vec![rational::rat(1, n as i64); n],
            normalized: true,
        }
    }

    pub fn point_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[ExactRational] {
        &self.weights
    }

    pub fn weight(&self, x: u32) -> &ExactRational {
        &self.weights[x as usize]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn total(&self) -> ExactRational {
        self.weights.iter().sum()
    }

    fn check_point(&self, x: u32, what: &str) -> Result<()> {
        if (x as usize) < self.point_count() {
            Ok(())
        } else {
            Err(Error::InvalidGraphing(format!(
                "{what} {x} is outside a space of {} points",
                self.point_count()
            )))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialBijection {
    pub pairs: Vec<(u32, u32)>,
}

impl PartialBijection {
    pub fn new(pairs: Vec<(u32, u32)>) -> PartialBijection {
        PartialBijection { pairs }
    }

    pub fn validate(&self, space: &FiniteMeasuredSpace) -> Result<()> {
        let n = space.point_count();
        let mut seen_src = vec![false; n];
        let mut seen_dst = vec![false; n];
        for &(x, y) in &self.pairs {
            space.check_point(x, "source")?;
            space.check_point(y, "target")?;
            if std::mem::replace(&mut seen_src[x as usize], true) {
                return Err(Error::InvalidGraphing(format!("source {x} appears twice")));
            }
            if std::mem::replace(&mut seen_dst[y as usize], true) {
                return Err(Error::InvalidGraphing(format!("target {y} appears twice")));
            }
            if space.weight(x) != space.weight(y) {
                return Err(Error::InvalidGraphing(format!(
                    "pair ({x}, {y}) does not preserve the measure"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graphing {
    pub generators: Vec<PartialBijection>,
}

impl Graphing {
    pub fn new(generators: Vec<PartialBijection>) -> Graphing {
        Graphing { generators }
    }

    pub fn validate(&self, space: &FiniteMeasuredSpace) -> Result<()> {
        for (j, g) in self.generators.iter().enumerate() {
            g.validate(space)
                .map_err(|e| Error::InvalidGraphing(format!("generator {j}: {e}")))?;
        }
        Ok(())
    }

    fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.generators.iter().flat_map(|g| g.pairs.iter().copied())
    }
}

/// Union-find over points, used for generated relations and joins.
struct Components {
    parent: Vec<u32>,
}

impl Components {
    fn new(n: usize) -> Components {
        Components {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = x;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    /// Returns false when `x` and `y` were already connected.
    fn union(&mut self, x: u32, y: u32) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        self.parent[a.max(b) as usize] = a.min(b);
        true
    }

    fn into_relation(mut self) -> FiniteRelation {
        let labels = (0..self.parent.len() as u32).map(|x| self.find(x)).collect();
        FiniteRelation::from_labels(labels)
    }
}

/// An equivalence relation on `{0..n-1}` stored as canonical class labels:
/// classes are numbered in order of their smallest point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteRelation {
    class_of: Vec<u32>,
}

impl FiniteRelation {
    pub fn from_labels(labels: Vec<u32>) -> FiniteRelation {
        let mut renumber = HashMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = renumber.len() as u32;
                *renumber.entry(*l).or_insert(next)
            })
            .collect();
        FiniteRelation { class_of }
    }

    pub fn from_classes(n: usize, classes: &[Vec<u32>]) -> Result<FiniteRelation> {
        let mut labels = vec![u32::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidRelation(format!("class {c} is empty")));
            }
            for &x in class {
                let slot = labels.get_mut(x as usize).ok_or_else(|| {
                    Error::InvalidRelation(format!("point {x} is outside a space of {n} points"))
                })?;
                if *slot != u32::MAX {
                    return Err(Error::InvalidRelation(format!("point {x} lies in two classes")));
                }
                *slot = c as u32;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(Error::InvalidRelation(format!("point {x} lies in no class")));
        }
        Ok(FiniteRelation::from_labels(labels))
    }

    pub fn diagonal(n: usize) -> FiniteRelation {
        FiniteRelation {
            class_of: (0..n as u32).collect(),
        }
    }

    pub fn total(n: usize) -> FiniteRelation {
        FiniteRelation {
            class_of: vec![0; n],
        }
    }

    pub fn point_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, x: u32) -> u32 {
        self.class_of[x as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.class_of
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn classes(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(x as u32);
        }
        out
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.class_of[x as usize] == self.class_of[y as usize]
    }

    pub fn is_diagonal(&self) -> bool {
        self.class_count() == self.point_count()
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn is_subrelation_of(&self, other: &FiniteRelation) -> bool {
        self.point_count() == other.point_count()
            && self.meet(other).map(|m| &m == self).unwrap_or(false)
    }

    /// The smallest equivalence relation containing both.
    pub fn join(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        self.same_space(other)?;
        let mut uf = Components::new(self.point_count());
        let mut first = HashMap::new();
        for x in 0..self.point_count() as u32 {
            for label in [(0u8, self.class_of(x)), (1u8, other.class_of(x))] {
                let rep = *first.entry(label).or_insert(x);
                uf.union(rep, x);
            }
        }
        Ok(uf.into_relation())
    }

    /// The common refinement.
    pub fn meet(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        self.same_space(other)?;
        let mut ids = HashMap::new();
        let labels = self
            .class_of
            .iter()
            .zip(&other.class_of)
            .map(|pair| {
                let next = ids.len() as u32;
                *ids.entry(pair).or_insert(next)
            })
            .collect();
        Ok(FiniteRelation::from_labels(labels))
    }

    fn same_space(&self, other: &FiniteRelation) -> Result<()> {
        if self.point_count() == other.point_count() {
            Ok(())
        } else {
            Err(Error::InvalidRelation(format!(
                "relations on {} and {} points",
                self.point_count(),
                other.point_count()
            )))
        }
    }

    /// All points of each class carry the same weight.
    pub fn is_sp_valid(&self, space: &FiniteMeasuredSpace) -> bool {
        self.point_count() == space.point_count()
            && self
                .classes()
                .iter()
                .all(|c| c.iter().all(|&x| space.weight(x) == space.weight(c[0])))
    }

    pub fn check_sp_valid(&self, space: &FiniteMeasuredSpace) -> Result<()> {
        if self.point_count() != space.point_count() {
            return Err(Error::InvalidRelation(format!(
                "relation on {} points over a space of {} points",
                self.point_count(),
                space.point_count()
            )));
        }
        if !self.is_sp_valid(space) {
            return Err(Error::InvalidRelation(
                "a class mixes points of different weight".into(),
            ));
        }
        Ok(())
    }
}

pub fn join(r1: &FiniteRelation, r2: &FiniteRelation) -> Result<FiniteRelation> {
    r1.join(r2)
}

pub fn meet(r1: &FiniteRelation, r2: &FiniteRelation) -> Result<FiniteRelation> {
    r1.meet(r2)
}

pub fn generate_relation(space: &FiniteMeasuredSpace, g: &Graphing) -> Result<FiniteRelation> {
    g.validate(space)?;
    let mut uf = Components::new(space.point_count());
    for (x, y) in g.edges() {
        uf.union(x, y);
    }
    Ok(uf.into_relation())
}

/// Total measure of the generator domains, counted per generator.
pub fn graphing_cost(space: &FiniteMeasuredSpace, g: &Graphing) -> Result<ExactRational> {
    g.validate(space)?;
    Ok(g.edges().map(|(x, _)| space.weight(x).clone()).sum())
}

/// True when no orbit graph has a cycle. A self-loop or a repeated edge
/// counts as a cycle.
pub fn is_treeing(space: &FiniteMeasuredSpace, g: &Graphing) -> Result<bool> {
    g.validate(space)?;
    let mut uf = Components::new(space.point_count());
    Ok(g.edges().all(|(x, y)| x != y && uf.union(x, y)))
}

#[derive(Clone, Debug)]
pub struct MinCost {
    pub cost: ExactRational,
    /// A treeing generating the relation: one single-pair generator per
    /// spanning-tree edge.
    pub witness: Graphing,
}

/// `Σ (|c| − 1)·w_c` over the classes, with a star-shaped witness.
pub fn relation_min_cost(r: &FiniteRelation, space: &FiniteMeasuredSpace) -> Result<MinCost> {
    r.check_sp_valid(space)?;
    let mut cost = rational::zero();
    let mut generators = Vec::new();
    for class in r.classes() {
        let centre = class[0];
        for &x in &class[1..] {
            cost += space.weight(centre);
            generators.push(PartialBijection::new(vec![(centre, x)]));
        }
    }
    Ok(MinCost {
        cost,
        witness: Graphing::new(generators),
    })
}

/// The same quantity by a second route: `μ(X) − Σ_c w_c`.
pub fn relation_cost_by_measure(r: &FiniteRelation, space: &FiniteMeasuredSpace) -> Result<ExactRational> {
    r.check_sp_valid(space)?;
    let per_class: ExactRational = r.classes().iter().map(|c| space.weight(c[0]).clone()).sum();
    Ok(space.total() - per_class)
}

#[derive(Clone, Debug)]
pub struct ActionRelation {
    pub relation: FiniteRelation,
    /// No non-identity group element fixes a point.
    pub free: bool,
}

/// Orbit relation of an action given by one permutation of the space per
/// group generator. The assignment must extend to a homomorphism.
pub fn relation_from_action(
    group: &PermGroup,
    space: &FiniteMeasuredSpace,
    action: &[Permutation],
) -> Result<ActionRelation> {
    let n = space.point_count();
    if action.len() != group.generators().len() {
        return Err(Error::InvalidAction(format!(
            "{} generator actions for {} group generators",
            action.len(),
            group.generators().len()
        )));
    }
    for (j, a) in action.iter().enumerate() {
        if a.degree() != n {
            return Err(Error::InvalidAction(format!(
                "generator {j} acts on {} points, space has {n}",
                a.degree()
            )));
        }
        if (0..n as u32).any(|x| space.weight(x) != space.weight(a.apply(x))) {
            return Err(Error::InvalidAction(format!("generator {j} does not preserve weights")));
        }
    }
    // Walk the Cayley graph and check every edge g -> g·s.
    let mut image: Vec<Option<Permutation>> = vec![None; group.order()];
    let id = group
        .index_of(&Permutation::identity(group.degree()))
        .expect("identity is an element");
    image[id] = Some(Permutation::identity(n));
    let mut queue = std::collections::VecDeque::from([id]);
    while let Some(i) = queue.pop_front() {
        let gi = group.elements()[i].clone();
        let ai = image[i].clone().expect("queued elements are assigned");
        for (s, a) in group.generators().iter().zip(action) {
            let j = group.index_of(&gi.mul(s)).expect("group is closed");
            let want = ai.mul(a);
            match &image[j] {
                Some(existing) if *existing != want => {
                    return Err(Error::InvalidAction(
                        "generator actions do not satisfy the group's relations".into(),
                    ))
                }
                Some(_) => {}
                None => {
                    image[j] = Some(want);
                    queue.push_back(j);
                }
            }
        }
    }
    let mut uf = Components::new(n);
    for a in action {
        for x in 0..n as u32 {
            uf.union(x, a.apply(x));
        }
    }
    let free = image.iter().enumerate().all(|(i, a)| {
        i == id || a.as_ref().is_some_and(|a| (0..n as u32).all(|x| a.apply(x) != x))
    });
    Ok(ActionRelation {
        relation: uf.into_relation(),
        free,
    })
}

/// `copies` disjoint copies of the left regular action, on a uniform space
/// of `copies·|G|` points.
pub fn regular_action(group: &PermGroup, copies: usize) -> (FiniteMeasuredSpace, Vec<Permutation>) {
    let order = group.order();
    let n = order * copies;
    let action = group
        .generators()
        .iter()
        .map(|s| {
            let mut images = vec![0u32; n];
            for (i, g) in group.elements().iter().enumerate() {
                let j = group.index_of(&s.mul(g)).expect("group is closed");
                for c in 0..copies {
                    images[c * order + i] = (c * order + j) as u32;
                }
            }
            Permutation::new(images).expect("left multiplication is a bijection")
        })
        .collect();
    (FiniteMeasuredSpace::uniform(n), action)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpaceFile {
    #[serde(with = "rational::vec_as_string")]
    pub weights: Vec<ExactRational>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub normalized: bool,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl SpaceFile {
    pub fn from_space(s: &FiniteMeasuredSpace) -> SpaceFile {
        SpaceFile {
            weights: s.weights.clone(),
            normalized: s.normalized,
        }
    }

    pub fn to_space(&self) -> Result<FiniteMeasuredSpace> {
        if self.normalized {
            FiniteMeasuredSpace::new(self.weights.clone())
        } else {
            FiniteMeasuredSpace::unnormalized(self.weights.clone())
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RelationFile {
    pub classes: Vec<Vec<u32>>,
}

impl RelationFile {
    pub fn from_relation(r: &FiniteRelation) -> RelationFile {
        RelationFile { classes: r.classes() }
    }

    pub fn to_relation(&self, n: usize) -> Result<FiniteRelation> {
        FiniteRelation::from_classes(n, &self.classes)
    }
}

/// All equivalence relations on `{0..n-1}`, in lexicographic order of
/// their canonical labels.
pub fn all_partitions(n: usize) -> Vec<FiniteRelation> {
    fn go(prefix: &mut Vec<u32>, n: usize, out: &mut Vec<FiniteRelation>) {
        if prefix.len() == n {
            out.push(FiniteRelation { class_of: prefix.clone() });
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            prefix.push(l);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// All subrelations of `r`: every way of splitting each class.
pub fn refinements(r: &FiniteRelation) -> Vec<FiniteRelation> {
    let mut out = vec![vec![0u32; r.point_count()]];
    let mut used = 0u32;
    for class in r.classes() {
        let splits = all_partitions(class.len());
        let mut next = Vec::with_capacity(out.len() * splits.len());
        for labels in &out {
            for split in &splits {
                let mut l = labels.clone();
                for (k, &x) in class.iter().enumerate() {
                    l[x as usize] = used + split.class_of[k];
                }
                next.push(l);
            }
        }
        out = next;
        used += class.len() as u32;
    }
    out.into_iter().map(FiniteRelation::from_labels).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_CLOSURE_CAP;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn rel(n: usize, classes: &[&[u32]]) -> FiniteRelation {
        let classes: Vec<Vec<u32>> = classes.iter().map(|c| c.to_vec()).collect();
        FiniteRelation::from_classes(n, &classes).unwrap()
    }

    fn single(pairs: &[(u32, u32)]) -> Graphing {
        Graphing::new(pairs.iter().map(|&p| PartialBijection::new(vec![p])).collect())
    }

    /// Cheapest graphing of single-pair generators that generates `r`, by
    /// trying every set of unordered admissible pairs.
    fn brute_min_cost(r: &FiniteRelation, space: &FiniteMeasuredSpace) -> ExactRational {
        let n = space.point_count() as u32;
        let pairs: Vec<(u32, u32)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .filter(|&(x, y)| space.weight(x) == space.weight(y))
            .collect();
        let mut best: Option<ExactRational> = None;
        for mask in 0u32..(1 << pairs.len()) {
            let chosen: Vec<_> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = single(&chosen);
            if generate_relation(space, &g).unwrap() == *r {
                let c = graphing_cost(space, &g).unwrap();
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
        best.expect("the relation is generated by its own pairs")
    }

    #[test]
    fn generated_relations() {
        let s = FiniteMeasuredSpace::uniform(4);
        assert_eq!(generate_relation(&s, &Graphing::default()).unwrap(), FiniteRelation::diagonal(4));
        assert_eq!(generate_relation(&s, &single(&[(0, 1)])).unwrap(), rel(4, &[&[0, 1], &[2], &[3]]));
        assert_eq!(
            generate_relation(&s, &single(&[(0, 1), (1, 2)])).unwrap(),
            rel(4, &[&[0, 1, 2], &[3]])
        );
    }

    #[test]
    fn graphing_costs() {
        let s = FiniteMeasuredSpace::uniform(10);
        let g = Graphing::new(vec![PartialBijection::new(vec![(0, 1), (1, 2), (2, 3)])]);
        assert_eq!(graphing_cost(&s, &g).unwrap(), rat(3, 10));
        assert_eq!(graphing_cost(&s, &Graphing::default()).unwrap(), rat(0, 1));
        let g = Graphing::new(vec![
            PartialBijection::new(vec![(0, 1), (1, 0)]),
            PartialBijection::new(vec![(0, 2), (1, 3), (2, 4)]),
        ]);
        assert_eq!(graphing_cost(&s, &g).unwrap(), rat(5, 10));
    }

    #[test]
    fn invalid_graphings() {
        let s = FiniteMeasuredSpace::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert!(graphing_cost(&s, &single(&[(0, 1)])).is_err());
        assert!(graphing_cost(&s, &single(&[(1, 3)])).is_err());
        let dup = Graphing::new(vec![PartialBijection::new(vec![(1, 2), (1, 1)])]);
        assert!(graphing_cost(&s, &dup).is_err());
        assert!(FiniteMeasuredSpace::new(vec![rat(1, 2), rat(1, 4)]).is_err());
        assert!(FiniteMeasuredSpace::new(vec![rat(1, 1), rat(0, 1)]).is_err());
    }

    #[test]
    fn min_costs() {
        let s = FiniteMeasuredSpace::uniform(5);
        let diag = FiniteRelation::diagonal(5);
        assert_eq!(relation_min_cost(&diag, &s).unwrap().cost, rat(0, 1));
        assert_eq!(relation_min_cost(&FiniteRelation::total(5), &s).unwrap().cost, rat(4, 5));
        let r = rel(5, &[&[0, 1], &[2, 3, 4]]);
        let m = relation_min_cost(&r, &s).unwrap();
        assert_eq!(m.cost, rat(3, 5));
        assert_eq!(brute_min_cost(&r, &s), rat(3, 5));
        assert!(is_treeing(&s, &m.witness).unwrap());
        assert_eq!(generate_relation(&s, &m.witness).unwrap(), r);
    }

    #[test]
    fn mixed_weight_class_rejected() {
        let s = FiniteMeasuredSpace::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert!(relation_min_cost(&FiniteRelation::total(3), &s).is_err());
        assert_eq!(
            relation_min_cost(&rel(3, &[&[0], &[1, 2]]), &s).unwrap().cost,
            rat(1, 4)
        );
    }

    #[test]
    fn treeings() {
        let s = FiniteMeasuredSpace::uniform(3);
        assert!(!is_treeing(&s, &single(&[(0, 1), (1, 0)])).unwrap());
        assert!(!is_treeing(&s, &single(&[(0, 1), (1, 2), (2, 0)])).unwrap());
        assert!(!is_treeing(&s, &single(&[(1, 1)])).unwrap());
        assert!(is_treeing(&s, &single(&[(0, 1), (1, 2)])).unwrap());
    }

    #[test]
    fn actions() {
        let z2 = PermGroup::symmetric(2, DEFAULT_CLOSURE_CAP).unwrap();
        let (s, a) = regular_action(&z2, 1);
        let r = relation_from_action(&z2, &s, &a).unwrap();
        assert!(r.free);
        assert_eq!(r.relation, FiniteRelation::total(2));

        let s3 = PermGroup::symmetric(3, DEFAULT_CLOSURE_CAP).unwrap();
        let natural = FiniteMeasuredSpace::uniform(3);
        let r = relation_from_action(&s3, &natural, s3.generators()).unwrap();
        assert!(!r.free);
        assert_eq!(r.relation.class_count(), 1);

        let (s, a) = regular_action(&s3, 1);
        let r = relation_from_action(&s3, &s, &a).unwrap();
        assert!(r.free);
        assert_eq!(r.relation, FiniteRelation::total(6));
        assert_eq!(relation_min_cost(&r.relation, &s).unwrap().cost, rat(5, 6));
    }

    #[test]
    fn inconsistent_action_rejected() {
        // Z3 generated by a 3-cycle, acting on two points by a swap.
        let z3 = crate::perm::closure(3, &[Permutation::parse_cycles(3, "(0 1 2)").unwrap()], 10).unwrap();
        let s = FiniteMeasuredSpace::uniform(2);
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert!(relation_from_action(&z3, &s, &[swap]).is_err());
    }

    #[test]
    fn free_actions_cost() {
        for gens in [vec!["(0 1)"], vec!["(0 1 2)"], vec!["(0 1 2 3)"], vec!["(0 1)", "(0 1 2)"]] {
            let gens: Vec<_> = gens.iter().map(|g| Permutation::parse_cycles(4, g).unwrap()).collect();
            let g = crate::perm::closure(4, &gens, 100).unwrap();
            for k in 1..=3 {
                let (s, a) = regular_action(&g, k);
                let r = relation_from_action(&g, &s, &a).unwrap();
                assert!(r.free);
                let c = relation_min_cost(&r.relation, &s).unwrap().cost;
                assert_eq!(c, rational::one() - rat(1, g.order() as i64));
            }
        }
    }

    #[test]
    fn partition_counts() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(all_partitions(n).len(), b);
        }
        let r = rel(5, &[&[0, 1, 2], &[3, 4]]);
        let subs = refinements(&r);
        assert_eq!(subs.len(), 5 * 2);
        assert!(subs.iter().all(|s| s.is_subrelation_of(&r)));
        let expected = all_partitions(5).into_iter().filter(|s| s.is_subrelation_of(&r)).count();
        assert_eq!(expected, subs.len());
    }

    #[test]
    fn join_and_meet() {
        let a = rel(4, &[&[0, 1], &[2, 3]]);
        let b = rel(4, &[&[1, 2], &[0], &[3]]);
        assert_eq!(a.join(&b).unwrap(), FiniteRelation::total(4));
        assert_eq!(a.meet(&a).unwrap(), a);
        assert_eq!(a.join(&FiniteRelation::diagonal(4)).unwrap(), a);
        assert_eq!(a.meet(&b).unwrap(), FiniteRelation::diagonal(4));
        assert!(FiniteRelation::diagonal(4).is_subrelation_of(&a));
        assert!(!b.is_subrelation_of(&a));
    }

    #[test]
    fn min_cost_matches_brute_force_exhaustively() {
        let weightings = [
            vec![rat(1, 5); 5],
            vec![rat(1, 4), rat(1, 4), rat(1, 8), rat(1, 8), rat(1, 4)],
        ];
        for w in weightings {
            let s = FiniteMeasuredSpace::new(w).unwrap();
            for r in all_partitions(5) {
                if !r.is_sp_valid(&s) {
                    assert!(relation_min_cost(&r, &s).is_err());
                    continue;
                }
                let c = relation_min_cost(&r, &s).unwrap().cost;
                assert_eq!(c, brute_min_cost(&r, &s), "{r:?}");
                assert_eq!(c, relation_cost_by_measure(&r, &s).unwrap());
            }
        }
    }

    #[test]
    fn file_formats() {
        let s: SpaceFile = serde_json::from_str(r#"{"weights": ["1/4","1/4","1/4","1/4"]}"#).unwrap();
        assert_eq!(s.to_space().unwrap(), FiniteMeasuredSpace::uniform(4));
        let g: Graphing = serde_json::from_str(r#"{"generators": [{"pairs": [[0,1],[2,3]]}]}"#).unwrap();
        assert_eq!(g.generators[0].pairs, vec![(0, 1), (2, 3)]);
        let r: RelationFile = serde_json::from_str(r#"{"classes": [[0,1],[2,3]]}"#).unwrap();
        assert_eq!(r.to_relation(4).unwrap(), rel(4, &[&[0, 1], &[2, 3]]));
        assert!(RelationFile { classes: vec![vec![0, 1], vec![1, 2]] }.to_relation(3).is_err());
        assert_eq!(serde_json::to_string(&SpaceFile::from_space(&s.to_space().unwrap())).unwrap(),
            r#"{"weights":["1/4","1/4","1/4","1/4"]}"#);
    }

    fn arb_graphing(n: u32) -> impl Strategy<Value = Graphing> {
        prop::collection::vec(prop::collection::vec((0..n, 0..n), 0..4), 0..4).prop_map(|gens| {
            Graphing::new(
                gens.into_iter()
                    .map(|pairs| {
                        // Keep the first occurrence of each source and target.
                        let mut src = std::collections::HashSet::new();
                        let mut dst = std::collections::HashSet::new();
                        PartialBijection::new(
                            pairs.into_iter().filter(|&(x, y)| src.insert(x) && dst.insert(y)).collect(),
                        )
                    })
                    .collect(),
            )
        })
    }

    fn arb_relation(n: u32) -> impl Strategy<Value = FiniteRelation> {
        prop::collection::vec(0..n, n as usize).prop_map(FiniteRelation::from_labels)
    }

    proptest! {
        #[test]
        fn graphing_cost_dominates_min_cost(g in arb_graphing(7)) {
            let s = FiniteMeasuredSpace::uniform(7);
            let r = generate_relation(&s, &g).unwrap();
            let c = graphing_cost(&s, &g).unwrap();
            let m = relation_min_cost(&r, &s).unwrap().cost;
            prop_assert!(c >= m);
            prop_assert_eq!(c == m, is_treeing(&s, &g).unwrap());
        }

        #[test]
        fn lattice_laws(a in arb_relation(7), b in arb_relation(7), c in arb_relation(7)) {
            prop_assert_eq!(a.join(&a).unwrap(), a.clone());
            prop_assert_eq!(a.join(&b).unwrap(), b.join(&a).unwrap());
            prop_assert_eq!(a.join(&b).unwrap().join(&c).unwrap(), a.join(&b.join(&c).unwrap()).unwrap());
            prop_assert_eq!(a.meet(&a.join(&b).unwrap()).unwrap(), a.clone());
            prop_assert_eq!(a.meet(&b).unwrap(), b.meet(&a).unwrap());
        }
    }
}
