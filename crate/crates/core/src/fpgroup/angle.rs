//! Gersten–Stallings angles between two subgroups of a finite group.
//!
//! For subgroups `A`, `B` of `G` sharing `K`, the angle is `π/n` where `2n`
//! is the least syllable length of a nontrivial element in the kernel of the
//! natural map `A *_K B → G`. Elements of the amalgam are written in normal
//! form `k · r1 · r2 ⋯ rm` with `k ∈ K` and the `ri` nontrivial right coset
//! representatives of `K`, alternating between `A` and `B`; such a word is in
//! the kernel exactly when `r1 ⋯ rm` evaluates into `K`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{PermGroup, Permutation};

pub const DEFAULT_MAX_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Half the shortest kernel-word length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AngleN {
    /// Shortest nontrivial kernel word has `2n` syllables.
    Exact(usize),
    /// No kernel word with at most `2m` syllables exists.
    LowerBound(usize),
    /// The map is injective (degenerate amalgam); the angle is 0.
    Injective,
}

/// One syllable of a kernel word: the side it comes from and its value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub side: Side,
    pub element: Permutation,
}

#[derive(Clone, Debug)]
pub struct AngleResult {
    pub n: AngleN,
    /// A shortest kernel word when `n` is exact.
    pub witness: Vec<Syllable>,
}

impl AngleResult {
    /// `θ` rendered exactly: `π/n`, `0`, or `< π/m`.
    pub fn theta(&self) -> String {
        match self.n {
            AngleN::Exact(1) => "π".to_string(),
            AngleN::Exact(n) => format!("π/{n}"),
            AngleN::LowerBound(m) => format!("<π/{m}"),
            AngleN::Injective => "0".to_string(),
        }
    }

    /// `θ/π` as an exact fraction, when determined.
    pub fn theta_over_pi(&self) -> Option<Ratio<u64>> {
        match self.n {
            AngleN::Exact(n) => Some(Ratio::new(1, n as u64)),
            AngleN::Injective => Some(Ratio::from_integer(0)),
            AngleN::LowerBound(_) => None,
        }
    }
}

impl fmt::Display for AngleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            AngleN::Exact(n) => write!(f, "n={n} θ={}", self.theta()),
            AngleN::LowerBound(m) => write!(f, "n>{m}"),
            AngleN::Injective => write!(f, "injective θ=0"),
        }
    }
}

fn product(word: &[Syllable], degree: usize) -> Permutation {
    word.iter()
        .fold(Permutation::identity(degree), |acc, s| acc.mul(&s.element))
}

/// Checks that `word` is an alternating word with every syllable outside `k`,
/// that it evaluates to the identity, and that no proper even prefix of length
/// at least 2 does.
pub fn verify_kernel_word(word: &[Syllable], a: &PermGroup, b: &PermGroup, k: &PermGroup) -> bool {
    if word.len() < 2 || !word.len().is_multiple_of(2) {
        return false;
    }
    for (i, s) in word.iter().enumerate() {
        let group = match s.side {
            Side::A => a,
            Side::B => b,
        };
        if !group.contains(&s.element) || k.contains(&s.element) {
            return false;
        }
        if i > 0 && word[i - 1].side == s.side {
            return false;
        }
    }
    let deg = a.degree();
    if !product(word, deg).is_identity() {
        return false;
    }
    (2..word.len())
        .step_by(2)
        .all(|m| !product(&word[..m], deg).is_identity())
}

/// Breadth-first search for the shortest nontrivial kernel word of
/// `A *_K B → G`, up to `2 * max_n` syllables.
pub fn shortest_kernel_word(
    g: &PermGroup,
    a: &PermGroup,
    b: &PermGroup,
    k: &PermGroup,
    max_n: usize,
) -> Result<AngleResult> {
    let deg = g.degree();
    for h in [a, b, k] {
        if h.degree() != deg {
            return Err(Error::DegreeMismatch(h.degree(), deg));
        }
    }
    if !a.is_subgroup_of(g) || !b.is_subgroup_of(g) {
        return Err(Error::InvalidSubgroups("A and B must be subgroups of G".into()));
    }
    if !k.is_subgroup_of(a) || !k.is_subgroup_of(b) {
        return Err(Error::InvalidSubgroups("K must lie in A ∩ B".into()));
    }
    let reps_a: Vec<Permutation> = a.right_transversal(k)?.into_iter().skip(1).collect();
    let reps_b: Vec<Permutation> = b.right_transversal(k)?.into_iter().skip(1).collect();
    if reps_a.is_empty() || reps_b.is_empty() {
        return Ok(AngleResult {
            n: AngleN::Injective,
            witness: Vec::new(),
        });
    }

    // State: (element, side of last syllable, parity of syllable count).
    type State = (usize, Side, bool);
    let mut parent: HashMap<State, Option<(State, usize)>> = HashMap::new();
    let mut frontier: Vec<State> = Vec::new();
    for (side, reps) in [(Side::A, &reps_a), (Side::B, &reps_b)] {
        for (ri, r) in reps.iter().enumerate() {
            let st = (g.index_of(r).unwrap(), side, true);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(st) {
                e.insert(Some(((usize::MAX, side, false), ri)));
                frontier.push(st);
            }
        }
    }
    let mut level = 1;
    while level < 2 * max_n && !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &st in &frontier {
            let (gi, side, odd) = st;
            let new_side = side.other();
            let reps = match new_side {
                Side::A => &reps_a,
                Side::B => &reps_b,
            };
            let cur = &g.elements()[gi];
            for (ri, r) in reps.iter().enumerate() {
                let prod = cur.mul(r);
                let ns = (g.index_of(&prod).unwrap(), new_side, !odd);
                if parent.contains_key(&ns) {
                    continue;
                }
                parent.insert(ns, Some((st, ri)));
                if !ns.2 && k.contains(&prod) {
                    let witness = rebuild(&parent, ns, &reps_a, &reps_b, &prod);
                    return Ok(AngleResult {
                        n: AngleN::Exact(level / 2),
                        witness,
                    });
                }
                next.push(ns);
            }
        }
        frontier = next;
    }
    if frontier.is_empty() {
        // Every state was visited without returning into K.
        return Ok(AngleResult {
            n: AngleN::Injective,
            witness: Vec::new(),
        });
    }
    Ok(AngleResult {
        n: AngleN::LowerBound(max_n),
        witness: Vec::new(),
    })
}

fn rebuild(
    parent: &HashMap<(usize, Side, bool), Option<((usize, Side, bool), usize)>>,
    end: (usize, Side, bool),
    reps_a: &[Permutation],
    reps_b: &[Permutation],
    value: &Permutation,
) -> Vec<Syllable> {
    let mut out = Vec::new();
    let mut st = end;
    loop {
        let Some(Some((prev, ri))) = parent.get(&st) else { break };
        let element = match st.1 {
            Side::A => reps_a[*ri].clone(),
            Side::B => reps_b[*ri].clone(),
        };
        out.push(Syllable {
            side: st.1,
            element,
        });
        if prev.0 == usize::MAX {
            break;
        }
        st = *prev;
    }
    out.reverse();
    // Fold the K-part into the first syllable so the word evaluates to 1.
    let first = value.inverse().mul(&out[0].element);
    out[0].element = first;
    out
}

/// Verdict of the Gersten–Stallings comparison for three angles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleSum {
    /// `θ1 + θ2 + θ3` divided by `π`, as `"p/q"`.
    pub sum_over_pi: String,
    pub sum_exceeds_pi: bool,
    /// The sufficient condition `θ1 + θ2 + θ3 ≤ π` for realizability.
    pub condition_holds: bool,
}

/// Exact comparison of `1/n1 + 1/n2 + 1/n3` with 1. Refuses undetermined
/// angles.
pub fn gersten_stallings_sum(angles: &[AngleResult; 3]) -> Result<AngleSum> {
    let mut sum = Ratio::from_integer(0u64);
    for (i, a) in angles.iter().enumerate() {
        match a.theta_over_pi() {
            Some(t) => sum += t,
            None => {
                return Err(Error::Indeterminate(format!(
                    "angle {} is only bounded ({})",
                    i + 1,
                    a
                )))
            }
        }
    }
    let one = Ratio::from_integer(1);
    Ok(AngleSum {
        sum_over_pi: format!("{}/{}", sum.numer(), sum.denom()),
        sum_exceeds_pi: sum > one,
        condition_holds: sum <= one,
    })
}
