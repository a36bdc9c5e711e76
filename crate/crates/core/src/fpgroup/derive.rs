use std::collections::HashMap;

use super::presentation::Presentation;
use super::word::{Letter, Word};
use crate::error::Result;
use crate::perm::{PermGroup, Permutation};

/// A presentation of a finite permutation group on its own generators, read
/// off the Cayley graph: a breadth-first spanning tree gives every element a
/// word, and every non-tree edge `g --s--> gs` contributes the relator
/// `word(g) s word(gs)^-1`.
#[derive(Clone, Debug)]
pub struct DerivedPresentation {
    pub presentation: Presentation,
    words: Vec<Word>,
    group: PermGroup,
}

impl DerivedPresentation {
    pub fn new(group: &PermGroup, names: Vec<String>) -> Result<DerivedPresentation> {
        let gens = group.generators();
        assert_eq!(names.len(), gens.len(), "one name per generator");
        let n = group.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::new());
        let mut relators = Vec::new();
        let mut seen_rel: HashMap<Word, ()> = HashMap::new();
        for i in 0..n {
            let g = &group.elements()[i];
            let wg = words[i].clone().expect("BFS order assigns words before use");
            for (k, s) in gens.iter().enumerate() {
                let j = group.index_of(&g.mul(s)).expect("closed under generators");
                let mut w = wg.clone();
                w.push(Letter::gen(k));
                match &words[j] {
                    None => words[j] = Some(w),
                    Some(wj) => {
                        if *wj == w {
                            continue;
                        }
                        let r = w.concat(&wj.inverse()).cyclically_reduced();
                        if !r.is_empty() && seen_rel.insert(r.clone(), ()).is_none() {
                            relators.push(r);
                        }
                    }
                }
            }
        }
        Ok(DerivedPresentation {
            presentation: Presentation::new(names, relators)?,
            words: words.into_iter().map(|w| w.unwrap()).collect(),
            group: group.clone(),
        })
    }

    /// Word in the generators evaluating to `g`.
    pub fn word_for(&self, g: &Permutation) -> Option<&Word> {
        self.group.index_of(g).map(|i| &self.words[i])
    }
}

/// Evaluates `w` on permutation generators as the product `x1 x2 … xk`.
pub fn evaluate(generators: &[Permutation], degree: usize, w: &Word) -> Permutation {
    let mut acc = Permutation::identity(degree);
    for l in w.letters() {
        let g = &generators[l.index()];
        acc = if l.is_inverse() {
            acc.mul(&g.inverse())
        } else {
            acc.mul(g)
        };
    }
    acc
}

/// The Coxeter presentation of `S_n` on adjacent transpositions `s1 … s(n-1)`.
pub fn coxeter_symmetric(n: usize) -> Presentation {
    let names: Vec<String> = (1..n).map(|i| format!("s{i}")).collect();
    let mut rels = Vec::new();
    for i in 0..n.saturating_sub(1) {
        rels.push(Word(vec![Letter::gen(i); 2]));
        for j in i + 1..n - 1 {
            let m = if j == i + 1 { 3 } else { 2 };
            let mut w = Word::new();
            for _ in 0..m {
                w.push(Letter::gen(i));
                w.push(Letter::gen(j));
            }
            rels.push(w);
        }
    }
    Presentation::new(names, rels).expect("well-formed")
}
