//! Cost identities for finite relations and the exact bound chain for the
//! colimit of Brown's triangles.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::joins::{is_free_amalgamated_join, RelationTriple};
use crate::mesrel::{relation_min_cost, FiniteRelation};
use crate::rational::{self, factorial, ExactRational};

/// `1 − 1/|H|`.
pub fn finite_group_cost(order: u64) -> Result<ExactRational> {
    if order == 0 {
        return Err(Error::InvalidSubgroups("group order must be positive".into()));
    }
    Ok(cost_from_order(&BigInt::from(order)))
}

fn cost_from_order(order: &BigInt) -> ExactRational {
    rational::one() - ExactRational::new(BigInt::one(), order.clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeJoinCostReport {
    /// Minimal cost of `R1 ∨ R2`.
    #[serde(with = "rational::as_string")]
    pub joined: ExactRational,
    /// `C(R1) + C(R2) − C(R3)`.
    #[serde(with = "rational::as_string")]
    pub sum: ExactRational,
    pub equality: bool,
    pub free: bool,
    /// `joined ≤ sum`, with equality exactly when the join is free.
    pub consistent: bool,
}

pub fn check_free_join_cost(t: &RelationTriple) -> Result<FreeJoinCostReport> {
    let c = |r: &FiniteRelation| relation_min_cost(r, &t.space).map(|m| m.cost);
    let joined = c(&t.generated())?;
    let sum = c(&t.r1)? + c(&t.r2)? - c(&t.r3)?;
    let free = is_free_amalgamated_join(t).free;
    let equality = joined == sum;
    Ok(FreeJoinCostReport {
        consistent: joined <= sum && equality == free,
        joined,
        sum,
        equality,
        free,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CostBoundReport {
    /// `C(G_i) + C(G_j) − C(G_ij)` for the edges 12, 13, 23.
    #[serde(with = "rational::vec_as_string")]
    pub pairwise: Vec<ExactRational>,
    #[serde(with = "rational::as_string")]
    pub min: ExactRational,
    /// Edge attaining the minimum (first one on ties).
    pub argmin: usize,
    pub exceeds_one: bool,
}

/// Pairwise cost bounds for a triangle of finite groups given by orders.
pub fn triangle_cost_bound(vertex_orders: [u64; 3], edge_orders: [u64; 3]) -> Result<CostBoundReport> {
    let v = vertex_orders.map(BigInt::from);
    let e = edge_orders.map(BigInt::from);
    bound_from_orders(&v, &e)
}

fn bound_from_orders(v: &[BigInt; 3], e: &[BigInt; 3]) -> Result<CostBoundReport> {
    const ENDS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    if v.iter().chain(e).any(|o| o <= &BigInt::zero()) {
        return Err(Error::InvalidSubgroups("group orders must be positive".into()));
    }
    let mut pairwise = Vec::new();
    for (k, &(i, j)) in ENDS.iter().enumerate() {
        for end in [i, j] {
            if !(&v[end] % &e[k]).is_zero() {
                return Err(Error::InvalidSubgroups(format!(
                    "edge order {} does not divide vertex order {}",
                    e[k], v[end]
                )));
            }
        }
        pairwise.push(cost_from_order(&v[i]) + cost_from_order(&v[j]) - cost_from_order(&e[k]));
    }
    let argmin = (0..3).fold(0, |best, k| if pairwise[k] < pairwise[best] { k } else { best });
    let min = pairwise[argmin].clone();
    Ok(CostBoundReport {
        exceeds_one: min > rational::one(),
        pairwise,
        min,
        argmin,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThompsonBound {
    pub p: u64,
    #[serde(with = "rational::vec_as_string")]
    pub pairwise: Vec<ExactRational>,
    #[serde(with = "rational::as_string")]
    pub min: ExactRational,
    pub closed_form_agrees: bool,
    #[serde(skip)]
    pub argmin: usize,
}

/// `1 − 1/(p+1)! − 1/(p+2)! + 1/p!`.
pub fn thompson_closed_form(p: u64) -> ExactRational {
    let inv = |n: u64| ExactRational::new(BigInt::one(), factorial(n));
    rational::one() - inv(p + 1) - inv(p + 2) + inv(p)
}

/// The same expression with `+1/(p−1)!` in place of `+1/p!`.
pub fn thompson_misprinted_form(p: u64) -> ExactRational {
    let inv = |n: u64| ExactRational::new(BigInt::one(), factorial(n));
    rational::one() - inv(p + 1) - inv(p + 2) + inv(p - 1)
}

/// Minimum over the three pairwise bounds of Brown's triangle for `p`,
/// computed from the group orders `p!`, `(p+1)!`, `(p+2)!` and
/// `(p−1)!`, `2·(p−2)!`, `p!`.
pub fn thompson_bound(p: u64) -> Result<ThompsonBound> {
    if p < 5 {
        return Err(Error::InvalidDiagram(format!("Brown's triangle needs p >= 5, got {p}")));
    }
    let v = [factorial(p), factorial(p + 1), factorial(p + 2)];
    let e = [factorial(p - 1), BigInt::from(2) * factorial(p - 2), factorial(p)];
    let r = bound_from_orders(&v, &e)?;
    Ok(ThompsonBound {
        p,
        closed_form_agrees: r.min == thompson_closed_form(p),
        pairwise: r.pairwise,
        min: r.min,
        argmin: r.argmin,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThompsonConclusion {
    pub bounds: Vec<ThompsonBound>,
    pub all_above_one: bool,
    pub strictly_decreasing: bool,
    pub closed_form_agrees: bool,
    /// Whether the `+1/(p−1)!` variant differs from the computed minimum at
    /// every `p` in range.
    pub misprint_differs: bool,
    #[serde(with = "rational::as_string")]
    pub tolerance: ExactRational,
    /// Smallest `p` in range with `bound − 1 < tolerance`.
    pub first_p_below_tolerance: Option<u64>,
    #[serde(with = "rational::as_string")]
    pub last_excess: ExactRational,
    pub lower_bound: String,
    pub conclusion: Option<String>,
}

impl ThompsonConclusion {
    pub fn holds(&self) -> bool {
        self.conclusion.is_some()
    }
}

pub const SQUEEZE_CONCLUSION: &str = "cost = 1 by squeeze";

/// Checks the bound chain on `5..=p_max` and draws the squeeze conclusion
/// when every check passes and the last bound is within `tolerance` of 1.
pub fn thompson_conclusion(p_max: u64, tolerance: &ExactRational) -> Result<ThompsonConclusion> {
    if p_max < 5 {
        return Err(Error::InvalidDiagram(format!("p_max must be at least 5, got {p_max}")));
    }
    let bounds = (5..=p_max).map(thompson_bound).collect::<Result<Vec<_>>>()?;
    let one = rational::one();
    let all_above_one = bounds.iter().all(|b| b.min > one);
    let strictly_decreasing = bounds.windows(2).all(|w| w[1].min < w[0].min);
    let closed_form_agrees = bounds.iter().all(|b| b.closed_form_agrees);
    let misprint_differs = bounds.iter().all(|b| thompson_misprinted_form(b.p) != b.min);
    let first_p_below_tolerance = bounds.iter().find(|b| &b.min - &one < *tolerance).map(|b| b.p);
    let last_excess = &bounds.last().expect("p_max >= 5").min - &one;
    let ok = all_above_one && strictly_decreasing && closed_form_agrees && last_excess < *tolerance;
    Ok(ThompsonConclusion {
        bounds,
        all_above_one,
        strictly_decreasing,
        closed_form_agrees,
        misprint_differs,
        tolerance: tolerance.clone(),
        first_p_below_tolerance,
        last_excess,
        lower_bound: "an infinite group has cost at least 1 (cited, not re-proved)".into(),
        conclusion: ok.then(|| SQUEEZE_CONCLUSION.to_string()),
    })
}

/// `10^-k` as an exact rational.
pub fn ten_to_minus(k: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::from(10).pow(k))
}
