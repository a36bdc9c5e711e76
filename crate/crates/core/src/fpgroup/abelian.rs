//! Abelianization of a finite presentation through the Smith normal form of
//! its relator exponent-sum matrix.

use super::presentation::Presentation;
use crate::error::{Error, Result};

/// Invariant factors `d1 | d2 | …` (all > 1) and free rank of `G^ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub torsion: Vec<u128>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// `|G^ab|`, or `None` when it is infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d))
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow("smith normal form"))
}

/// Folds the relator rows into at most `cols` Hermite-reduced rows, spanning
/// the same integer row lattice.
fn hermite_rows(rows: impl Iterator<Item = Vec<i64>>, cols: usize) -> Result<Vec<Vec<i128>>> {
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; cols];
    for row in rows {
        let mut r: Vec<i128> = row.into_iter().map(i128::from).collect();
        for c in 0..cols {
            if r[c] == 0 {
                continue;
            }
            match &mut basis[c] {
                None => {
                    if r[c] < 0 {
                        r.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis[c] = Some(r);
                    break;
                }
                Some(b) => {
                    let (g, x, y) = ext_gcd(b[c], r[c]);
                    let (bc, rc) = (b[c] / g, r[c] / g);
                    let mut nb = vec![0i128; cols];
                    let mut nr = vec![0i128; cols];
                    for k in 0..cols {
                        nb[k] = ck(ck(x.checked_mul(b[k]))?.checked_add(ck(y.checked_mul(r[k]))?))?;
                        nr[k] = ck(ck(rc.checked_mul(b[k]))?.checked_sub(ck(bc.checked_mul(r[k]))?))?;
                    }
                    *b = nb;
                    r = nr;
                }
            }
        }
    }
    Ok(basis.into_iter().flatten().collect())
}

/// Diagonal of the Smith normal form of `m` (nonzero entries only).
fn smith_diagonal(mut m: Vec<Vec<i128>>, cols: usize) -> Result<Vec<i128>> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut done = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] = ck(m[i][j].checked_sub(ck(q.checked_mul(m[t][j]))?))?;
                    }
                }
                if m[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        m[i][j] = ck(m[i][j].checked_sub(ck(q.checked_mul(m[i][t]))?))?;
                    }
                }
                if m[t][j] != 0 {
                    done = false;
                }
            }
            if done {
                // Divisibility: fold any entry not divisible by the pivot into row t.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] = ck(m[t][j].checked_add(m[i][j]))?;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    Ok(diag)
}

pub fn abelianization(p: &Presentation) -> Result<AbelianInvariants> {
    let cols = p.generator_count();
    let rows = hermite_rows(p.relators().iter().map(|r| r.exponent_sums(cols)), cols)?;
    let diag = smith_diagonal(rows, cols)?;
    let rank = diag.len();
    Ok(AbelianInvariants {
        torsion: diag.into_iter().filter(|&d| d > 1).map(|d| d as u128).collect(),
        free_rank: cols - rank,
    })
}

/// Number of homomorphisms to `Z_m`, by brute force over generator images.
#[cfg(test)]
pub(crate) fn hom_count_for_tests(p: &Presentation, m: i64) -> usize {
    tests::hom_count(p, m)
}
