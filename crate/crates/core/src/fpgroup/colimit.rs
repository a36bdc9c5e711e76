//! Colimit (generalized amalgam) presentations of diagrams of presented
//! groups.

use super::presentation::Presentation;
use super::word::{Letter, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PresentedVertex {
    pub name: String,
    pub presentation: Presentation,
}

/// Identifications along one edge: each pair `(u, v)` says the word `u` in
/// the first vertex equals the word `v` in the second.
#[derive(Clone, Debug)]
pub struct EdgeIdentification {
    pub between: (usize, usize),
    pub pairs: Vec<(Word, Word)>,
}

/// A diagram of presented vertex groups glued along edge identifications.
/// Triangles have three vertices and three edges; a two-vertex diagram with a
/// single edge is an ordinary amalgamated product.
#[derive(Clone, Debug)]
pub struct PresentedDiagram {
    pub vertices: Vec<PresentedVertex>,
    pub edges: Vec<EdgeIdentification>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let n = parent[x];
        parent[x] = r;
        x = n;
    }
    r
}

impl PresentedDiagram {
    /// Presentation of the colimit: the disjoint union of vertex generators
    /// and relators plus one relator `u v^-1` per identification. Where an
    /// identification equates two bare generators (with the same sign) the
    /// generators are merged instead.
    pub fn colimit(&self) -> Result<Presentation> {
        let mut offsets = Vec::new();
        let mut total = 0;
        for v in &self.vertices {
            offsets.push(total);
            total += v.presentation.generator_count();
        }
        for e in &self.edges {
            let (i, j) = e.between;
            if i >= self.vertices.len() || j >= self.vertices.len() || i == j {
                return Err(Error::InvalidDiagram(format!("bad edge {:?}", e.between)));
            }
            for (u, v) in &e.pairs {
                let gi = self.vertices[i].presentation.generator_count();
                let gj = self.vertices[j].presentation.generator_count();
                if u.letters().iter().any(|l| l.index() >= gi)
                    || v.letters().iter().any(|l| l.index() >= gj)
                {
                    return Err(Error::InvalidDiagram("identification word out of range".into()));
                }
            }
        }
        let lift = |vertex: usize, w: &Word| -> Word {
            Word(
                w.letters()
                    .iter()
                    .map(|l| {
                        let g = offsets[vertex] + l.index();
                        if l.is_inverse() {
                            Letter::inv_gen(g)
                        } else {
                            Letter::gen(g)
                        }
                    })
                    .collect(),
            )
        };

        let mut parent: Vec<usize> = (0..total).collect();
        let mut extra = Vec::new();
        for e in &self.edges {
            let (i, j) = e.between;
            for (u, v) in &e.pairs {
                let (lu, lv) = (lift(i, u), lift(j, v));
                let single = |w: &Word| (w.len() == 1).then(|| w.letters()[0]);
                match (single(&lu), single(&lv)) {
                    (Some(a), Some(b)) if a.is_inverse() == b.is_inverse() => {
                        let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
                        if ra != rb {
                            let (lo, hi) = (ra.min(rb), ra.max(rb));
                            parent[hi] = lo;
                        }
                    }
                    _ => extra.push(lu.concat(&lv.inverse())),
                }
            }
        }

        // Merged generator classes, numbered by first member.
        let mut class_of = vec![usize::MAX; total];
        let mut reps = Vec::new();
        for g in 0..total {
            let r = find(&mut parent, g);
            if class_of[r] == usize::MAX {
                class_of[r] = reps.len();
                reps.push(g);
            }
            class_of[g] = class_of[r];
        }
        let owner = |g: usize| offsets.iter().rposition(|&o| o <= g).unwrap();
        let local_name = |g: usize| -> &str {
            let v = owner(g);
            &self.vertices[v].presentation.generator_names()[g - offsets[v]]
        };
        let mut names: Vec<String> = reps.iter().map(|&g| local_name(g).to_string()).collect();
        let clashes: Vec<bool> = names
            .iter()
            .map(|n| names.iter().filter(|m| *m == n).count() > 1)
            .collect();
        for (k, &g) in reps.iter().enumerate() {
            if clashes[k] {
                names[k] = format!("{}_{}", self.vertices[owner(g)].name, local_name(g));
            }
        }

        let relabel = |w: &Word| -> Word {
            Word(
                w.letters()
                    .iter()
                    .map(|l| {
                        let c = class_of[l.index()];
                        if l.is_inverse() {
                            Letter::inv_gen(c)
                        } else {
                            Letter::gen(c)
                        }
                    })
                    .collect(),
            )
            .reduced()
        };
        let mut relators = Vec::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            for r in v.presentation.relators() {
                relators.push(relabel(&lift(vi, r)));
            }
        }
        for r in &extra {
            relators.push(relabel(r));
        }
        relators.retain(|r| !r.cyclically_reduced().is_empty());
        let mut seen = std::collections::HashSet::new();
        relators.retain(|r| seen.insert(r.clone()));
        Presentation::new(names, relators)
    }
}

/// The collapsing triangle: three Baumslag–Solitar groups
/// `<a,b | b^a = b^2>`, `<a,c | a^c = a^2>`, `<b,c | c^b = c^2>` glued along
/// their infinite cyclic generators.
pub fn collapsing_triangle() -> PresentedDiagram {
    let v = |name: &str, gens: [&str; 2], rel: &str| PresentedVertex {
        name: name.to_string(),
        presentation: Presentation::parse(&gens, &[rel]).expect("well-formed"),
    };
    let g = |i: usize| Word(vec![Letter::gen(i)]);
    PresentedDiagram {
        vertices: vec![
            v("G1", ["a", "b"], "a^-1 b a b^-2"),
            v("G2", ["a", "c"], "c^-1 a c a^-2"),
            v("G3", ["b", "c"], "b^-1 c b c^-2"),
        ],
        edges: vec![
            EdgeIdentification {
                between: (0, 1),
                pairs: vec![(g(0), g(0))],
            },
            EdgeIdentification {
                between: (0, 2),
                pairs: vec![(g(1), g(0))],
            },
            EdgeIdentification {
                between: (1, 2),
                pairs: vec![(g(1), g(1))],
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::coset::{todd_coxeter, EnumerationResult};

    #[test]
    fn collapsing_colimit_is_three_generator_presentation() {
        let p = collapsing_triangle().colimit().unwrap();
        assert_eq!(p.generator_names(), &["a", "b", "c"]);
        let rels: Vec<String> = p.relators().iter().map(|r| p.render(r)).collect();
        assert_eq!(rels, vec!["a^-1 b a b^-2", "c^-1 a c a^-2", "b^-1 c b c^-2"]);
        assert_eq!(todd_coxeter(&p, &[], 1_000_000), EnumerationResult::Index(1));
    }

    #[test]
    fn free_product_of_three_z2() {
        let z2 = |name: &str, g: &str| PresentedVertex {
            name: name.into(),
            presentation: Presentation::parse(&[g], &[&format!("{g}^2")]).unwrap(),
        };
        let d = PresentedDiagram {
            vertices: vec![z2("X", "a"), z2("Y", "b"), z2("Z", "c")],
            edges: vec![
                EdgeIdentification { between: (0, 1), pairs: vec![] },
                EdgeIdentification { between: (0, 2), pairs: vec![] },
                EdgeIdentification { between: (1, 2), pairs: vec![] },
            ],
        };
        let p = d.colimit().unwrap();
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relators().len(), 3);
        let a = p.word("a").unwrap();
        // Infinite index: an 11-row table cannot close.
        assert_eq!(todd_coxeter(&p, std::slice::from_ref(&a), 11), EnumerationResult::Inconclusive);
        // Adding the commutation relators gives Z2^3, where <a> has index 4.
        let q = p.with_relators(
            ["a b a b", "b c b c", "a c a c"].iter().map(|r| p.word(r).unwrap()),
        );
        assert_eq!(todd_coxeter(&q, &[a], 1000), EnumerationResult::Index(4));
    }

    #[test]
    fn name_clashes_are_prefixed() {
        let v = |name: &str| PresentedVertex {
            name: name.into(),
            presentation: Presentation::parse(&["x"], &["x^2"]).unwrap(),
        };
        let d = PresentedDiagram {
            vertices: vec![v("P"), v("Q")],
            edges: vec![EdgeIdentification { between: (0, 1), pairs: vec![] }],
        };
        let p = d.colimit().unwrap();
        assert_eq!(p.generator_names(), &["P_x", "Q_x"]);
    }
}
