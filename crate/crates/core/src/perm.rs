//! Permutations on `{0, …, degree-1}`, finite permutation groups held as
//! fully enumerated element lists, and checked embeddings between them.
//!
//! Products follow function composition: `compose(a, b)` maps `x` to
//! `a(b(x))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on the number of elements a closure may enumerate.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Permutation> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub fn identity(degree: usize) -> Permutation {
        assert!(degree > 0, "degree must be positive");
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from disjoint or overlapping cycles, composed
    /// right to left as written.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Permutation> {
        let mut p = Permutation::identity(degree);
        for cycle in cycles.iter().rev() {
            let c = Permutation::cycle(degree, cycle)?;
            p = c.mul(&p);
        }
        Ok(p)
    }

    fn cycle(degree: usize, points: &[u32]) -> Result<Permutation> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = HashSet::new();
        for (k, &x) in points.iter().enumerate() {
            if x as usize >= degree || !seen.insert(x) {
                return Err(Error::InvalidPermutation(format!(
                    "bad cycle {points:?} for degree {degree}"
                )));
            }
            images[x as usize] = points[(k + 1) % points.len()];
        }
        Permutation::new(images)
    }

    /// Parses cycle notation such as `"(0 1)(2 3)"`; `"()"` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(points);
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// `self ∘ other` for permutations of equal degree.
    pub(crate) fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    /// Extends by fixed points up to `degree`.
    pub fn pad(&self, degree: usize) -> Result<Permutation> {
        if degree < self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), degree));
        }
        let mut images = self.images.to_vec();
        images.extend(self.degree() as u32..degree as u32);
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut order: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<u32> {
        (0..self.degree() as u32).filter(|&i| self.apply(i) != i).collect()
    }
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(a.mul(b))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{x}")?;
                x = self.images[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}[{}]", self.degree())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(d)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

struct Elements {
    list: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
}

/// A finite permutation group with its full element list. Cloning is cheap.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Arc<Elements>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    /// Breadth-first closure of `generators`. Elements are listed in BFS
    /// order from the identity, multiplying by generators in the given order.
    pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<PermGroup> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(g.degree(), degree));
            }
        }
        let id = Permutation::identity(degree);
        let mut list = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut head = 0;
        while head < list.len() {
            for s in generators {
                let next = list[head].mul(s);
                if !index.contains_key(&next) {
                    if list.len() >= cap {
                        return Err(Error::TooLarge { cap });
                    }
                    index.insert(next.clone(), list.len() as u32);
                    list.push(next);
                }
            }
            head += 1;
        }
        Ok(PermGroup {
            degree,
            generators: generators.to_vec(),
            elements: Arc::new(Elements { list, index }),
        })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::closure(degree, &[], 1).expect("trivial group")
    }

    /// The full symmetric group on `degree` points, generated by `(0 1)` and
    /// the long cycle.
    pub fn symmetric(degree: usize, cap: usize) -> Result<PermGroup> {
        PermGroup::symmetric_on(degree, &(0..degree as u32).collect::<Vec<_>>(), cap)
    }

    /// Symmetric group on the listed points inside degree `degree`.
    pub fn symmetric_on(degree: usize, points: &[u32], cap: usize) -> Result<PermGroup> {
        let order = (1..=points.len()).try_fold(1usize, |acc, k| acc.checked_mul(k));
        if order.is_none_or(|o| o > cap) {
            return Err(Error::TooLarge { cap });
        }
        let mut gens = Vec::new();
        if points.len() >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&points[..2]])?);
        }
        if points.len() >= 3 {
            gens.push(Permutation::from_cycles(degree, &[points])?);
        }
        PermGroup::closure(degree, &gens, cap)
    }

    /// The subgroup whose elements are exactly `elements`, with a small
    /// generating set chosen greedily in list order. Fails if the set is not
    /// closed under multiplication.
    pub fn from_elements(degree: usize, elements: &[Permutation]) -> Result<PermGroup> {
        let mut group = PermGroup::trivial(degree);
        let mut gens = Vec::new();
        for e in elements {
            if e.degree() != degree {
                return Err(Error::DegreeMismatch(e.degree(), degree));
            }
            if !group.contains(e) {
                gens.push(e.clone());
                group = PermGroup::closure(degree, &gens, elements.len().max(1) + 1)?;
            }
        }
        if group.order() != elements.len()
            || elements.iter().collect::<HashSet<_>>().len() != elements.len()
        {
            return Err(Error::InvalidSubgroups(
                "element set is not closed under multiplication".into(),
            ));
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements.list
    }

    pub fn order(&self) -> usize {
        self.elements.list.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.index.get(p).map(|&i| i as usize)
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.elements().iter().all(|e| other.contains(e))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements().iter().all(|e| other.contains(e))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|a| g.iter().all(|b| a.commutes_with(b)))
    }

    /// The same group regarded in a larger degree (extra points fixed).
    pub fn pad(&self, degree: usize, cap: usize) -> Result<PermGroup> {
        if degree == self.degree {
            return Ok(self.clone());
        }
        let gens = self
            .generators
            .iter()
            .map(|g| g.pad(degree))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::closure(degree, &gens, cap)
    }

    /// `g^-1 H g` for every element.
    pub fn conjugate(&self, g: &Permutation, cap: usize) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch(g.degree(), self.degree));
        }
        let gi = g.inverse();
        let gens: Vec<_> = self.generators.iter().map(|h| gi.mul(h).mul(g)).collect();
        PermGroup::closure(self.degree, &gens, cap)
    }

    /// Right coset representatives of `sub` in `self`, one per coset
    /// `sub · x`, the representative of `sub` itself (the identity) first.
    pub fn right_transversal(&self, sub: &PermGroup) -> Result<Vec<Permutation>> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::InvalidSubgroups("not a subgroup".into()));
        }
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in self.elements() {
            let i = self.index_of(x).unwrap();
            if covered[i] {
                continue;
            }
            for h in sub.elements() {
                covered[self.index_of(&h.mul(x)).unwrap()] = true;
            }
            reps.push(x.clone());
        }
        Ok(reps)
    }
}

/// Group closure capped at `cap` elements.
pub fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<PermGroup> {
    PermGroup::closure(degree, generators, cap)
}

/// The subgroup `a ∩ b`.
pub fn intersect(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let (small, large) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    let common: Vec<Permutation> = small
        .elements()
        .iter()
        .filter(|e| large.contains(e))
        .cloned()
        .collect();
    PermGroup::from_elements(a.degree(), &common)
}

/// Whether the parts together generate exactly `g`.
pub fn is_generated_by(g: &PermGroup, parts: &[PermGroup], cap: usize) -> Result<bool> {
    let mut gens = Vec::new();
    for p in parts {
        if p.degree() != g.degree() {
            return Err(Error::DegreeMismatch(p.degree(), g.degree()));
        }
        gens.extend(p.generators().iter().cloned());
    }
    if gens.iter().any(|x| !g.contains(x)) {
        return Ok(false);
    }
    // The generated subgroup cannot exceed g, so cap at |g| + 1.
    let h = PermGroup::closure(g.degree(), &gens, cap.min(g.order() + 1))?;
    Ok(h.order() == g.order())
}

/// A map from the generators of `source` into `target`, claimed to extend to
/// an injective homomorphism. Images of smaller degree are padded with fixed
/// points.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: PermGroup,
    target: PermGroup,
    generator_images: Vec<Permutation>,
}

impl Embedding {
    pub fn new(
        source: PermGroup,
        target: PermGroup,
        generator_images: Vec<Permutation>,
    ) -> Result<Embedding> {
        if generator_images.len() != source.generators().len() {
            return Err(Error::InvalidSubgroups(format!(
                "{} generator images for {} generators",
                generator_images.len(),
                source.generators().len()
            )));
        }
        let generator_images = generator_images
            .iter()
            .map(|p| {
                if p.degree() > target.degree() {
                    Err(Error::DegreeMismatch(p.degree(), target.degree()))
                } else {
                    p.pad(target.degree())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Embedding {
            source,
            target,
            generator_images,
        })
    }

    /// The embedding given by padding: each source generator maps to itself
    /// with extra fixed points.
    pub fn standard(source: PermGroup, target: PermGroup) -> Result<Embedding> {
        let images = source.generators().to_vec();
        Embedding::new(source, target, images)
    }

    /// The embedding induced by relabelling point `i` of the source as
    /// `points[i]` of the target.
    pub fn relabel(source: PermGroup, target: PermGroup, points: &[u32]) -> Result<Embedding> {
        if points.len() != source.degree() {
            return Err(Error::DegreeMismatch(points.len(), source.degree()));
        }
        let n = target.degree();
        let images = source
            .generators()
            .iter()
            .map(|g| {
                let mut img: Vec<u32> = (0..n as u32).collect();
                for (i, &p) in points.iter().enumerate() {
                    let q = points[g.apply(i as u32) as usize];
                    if p as usize >= n || q as usize >= n {
                        return Err(Error::DegreeMismatch(p.max(q) as usize + 1, n));
                    }
                    img[p as usize] = q;
                }
                Permutation::new(img)
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(source, target, images)
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target(&self) -> &PermGroup {
        &self.target
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.generator_images
    }

    pub fn with_target(&self, target: PermGroup) -> Result<Embedding> {
        Embedding::new(self.source.clone(), target, self.generator_images.clone())
    }

    /// Image of every source element (in source element order), when the
    /// generator map extends to a homomorphism; `None` otherwise.
    pub fn element_map(&self) -> Option<Vec<Permutation>> {
        let src = &self.source;
        let mut images: Vec<Option<Permutation>> = vec![None; src.order()];
        images[0] = Some(Permutation::identity(self.target.degree()));
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let gi = images[i].clone().unwrap();
            for (s, t) in src.generators().iter().zip(&self.generator_images) {
                let j = src.index_of(&src.elements()[i].mul(s)).unwrap();
                let img = gi.mul(t);
                match &images[j] {
                    Some(existing) if *existing != img => return None,
                    Some(_) => {}
                    None => {
                        images[j] = Some(img);
                        queue.push_back(j);
                    }
                }
            }
        }
        Some(images.into_iter().map(|x| x.unwrap()).collect())
    }

    /// True when the generator images lie in the target and extend to an
    /// injective homomorphism, checked on every element of the source.
    pub fn check(&self) -> bool {
        if !self.generator_images.iter().all(|g| self.target.contains(g)) {
            return false;
        }
        let Some(map) = self.element_map() else {
            return false;
        };
        let distinct: HashSet<&Permutation> = map.iter().collect();
        distinct.len() == map.len()
    }

    pub fn map(&self, g: &Permutation) -> Option<Permutation> {
        let i = self.source.index_of(g)?;
        self.element_map().map(|m| m[i].clone())
    }

    /// The image subgroup inside the target's degree.
    pub fn image(&self, cap: usize) -> Result<PermGroup> {
        PermGroup::closure(self.target.degree(), &self.generator_images, cap)
    }

    /// Preimage of a subgroup of the image as a subgroup of the source.
    pub fn preimage(&self, sub: &PermGroup) -> Result<PermGroup> {
        let map = self
            .element_map()
            .ok_or_else(|| Error::InvalidSubgroups("map is not a homomorphism".into()))?;
        let elems: Vec<Permutation> = self
            .source
            .elements()
            .iter()
            .zip(&map)
            .filter(|(_, img)| sub.contains(img))
            .map(|(e, _)| e.clone())
            .collect();
        PermGroup::from_elements(self.source.degree(), &elems)
    }
}

/// Whether `e` extends to an injective homomorphism.
pub fn check_embedding(e: &Embedding) -> bool {
    e.check()
}
