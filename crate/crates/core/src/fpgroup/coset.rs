//! Coset enumeration (Todd–Coxeter).
//!
//! Two strategies are provided. HLT with lookahead scans every relator at
//! every coset in definition order, filling gaps by defining new cosets; when
//! the table is full it runs a deduction-only pass over all live cosets
//! (lookahead), compacts, and carries on. Felsch defines cosets strictly in
//! order of the first undefined entry and processes every deduction before
//! the next definition. Both number cosets deterministically.

use super::presentation::Presentation;
use super::word::Word;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Strategy {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStatus {
    Complete,
    CapExceeded,
}

/// Outcome of an enumeration: the exact index, or `Inconclusive` when the cap
/// on simultaneously stored cosets was hit. Never a guessed number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationResult {
    Index(usize),
    Inconclusive,
}

impl EnumerationResult {
    pub fn index(self) -> Option<usize> {
        match self {
            EnumerationResult::Index(n) => Some(n),
            EnumerationResult::Inconclusive => None,
        }
    }
}

/// Counters reported with an enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Total number of cosets ever defined.
    pub defined: usize,
    /// Largest number of simultaneously stored rows.
    pub max_rows: usize,
    pub lookaheads: usize,
}

/// A coset table. Columns are `2g` for generator `g` and `2g+1` for its
/// inverse. Only live rows (see [`CosetTable::live_cosets`]) are meaningful.
#[derive(Clone, Debug)]
pub struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    status: TableStatus,
    stats: EnumerationStats,
}

struct Full;

impl CosetTable {
    fn with_columns(cols: usize) -> CosetTable {
        let mut t = CosetTable {
            cols,
            table: Vec::new(),
            parent: Vec::new(),
            live: 0,
            status: TableStatus::CapExceeded,
            stats: EnumerationStats::default(),
        };
        t.push_row();
        t
    }

    fn push_row(&mut self) -> u32 {
        let c = self.parent.len() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.parent.push(c);
        self.live += 1;
        self.stats.defined += 1;
        self.stats.max_rows = self.stats.max_rows.max(self.parent.len());
        c
    }

    pub fn status(&self) -> TableStatus {
        self.status
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    pub fn rows(&self) -> usize {
        self.parent.len()
    }

    pub fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    pub fn live_cosets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows()).filter(move |&c| self.is_live(c))
    }

    /// Entry `c · x` for column `x`, if defined.
    pub fn get(&self, c: usize, col: usize) -> Option<usize> {
        let v = self.table[c * self.cols + col];
        (v != UNDEF).then_some(v as usize)
    }

    #[inline]
    fn at(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, v: u32) {
        self.table[c as usize * self.cols + col] = v;
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32, queue: &mut Vec<u32>) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            self.live -= 1;
            queue.push(hi);
        }
    }

    /// Identifies cosets `a` and `b` and everything that follows from it.
    /// Newly defined entries are reported through `deductions` when given.
    fn coincidence(&mut self, a: u32, b: u32, mut deductions: Option<&mut Vec<(u32, usize)>>) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.at(g, x);
                if d == UNDEF {
                    continue;
                }
                let ix = x ^ 1;
                if self.at(d, ix) == g {
                    self.set(d, ix, UNDEF);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.at(mu, x);
                if mx != UNDEF {
                    self.merge(nu, mx, &mut queue);
                } else {
                    let nx = self.at(nu, ix);
                    if nx != UNDEF {
                        self.merge(mu, nx, &mut queue);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, ix, mu);
                        if let Some(d) = deductions.as_deref_mut() {
                            d.push((mu, x));
                        }
                    }
                }
            }
        }
    }

    /// Scans `word` at coset `alpha`. With `fill`, gaps are closed by defining
    /// new cosets (returns `Err(Full)` when the row cap is reached); without,
    /// only deductions and coincidences are recorded.
    fn scan(
        &mut self,
        alpha: u32,
        word: &[usize],
        fill: bool,
        cap: usize,
        mut deductions: Option<&mut Vec<(u32, usize)>>,
    ) -> Result<(), Full> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut i = 0usize;
        let mut b = alpha;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                let n = self.at(f, word[i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if (i as isize) > j {
                if f != alpha {
                    self.coincidence(f, alpha, deductions);
                }
                return Ok(());
            }
            while j >= i as isize {
                let n = self.at(b, word[j as usize] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b, deductions);
                return Ok(());
            }
            if j == i as isize {
                let x = word[i];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                if let Some(d) = deductions.as_deref_mut() {
                    d.push((f, x));
                }
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            if self.rows() >= cap {
                return Err(Full);
            }
            let x = word[i];
            let n = self.push_row();
            self.set(f, x, n);
            self.set(n, x ^ 1, f);
            if let Some(d) = deductions.as_deref_mut() {
                d.push((f, x));
            }
        }
    }

    /// Renumbers live cosets consecutively in definition order. Returns, for
    /// every old row, the new index of the first live row at or after it.
    fn compact(&mut self) -> Vec<u32> {
        let rows = self.rows();
        let mut new_index = vec![UNDEF; rows];
        let mut next_live = vec![0u32; rows + 1];
        let mut n = 0u32;
        for c in 0..rows {
            if self.is_live(c) {
                new_index[c] = n;
                n += 1;
            }
        }
        let mut k = n;
        for c in (0..rows).rev() {
            if new_index[c] != UNDEF {
                k = new_index[c];
            }
            next_live[c] = k;
        }
        next_live[rows] = n;
        let mut table = Vec::with_capacity(n as usize * self.cols);
        for c in 0..rows {
            if new_index[c] == UNDEF {
                continue;
            }
            for x in 0..self.cols {
                let v = self.at(c as u32, x);
                table.push(if v == UNDEF {
                    UNDEF
                } else {
                    let r = self.rep(v);
                    new_index[r as usize]
                });
            }
        }
        self.table = table;
        self.parent = (0..n).collect();
        self.live = n as usize;
        next_live
    }

    /// True when every live entry is defined and every relator closes at
    /// every live coset.
    pub fn is_complete_for(&self, relators: &[Vec<usize>]) -> bool {
        for c in self.live_cosets() {
            for x in 0..self.cols {
                match self.get(c, x) {
                    None => return false,
                    Some(d) => {
                        if !self.is_live(d) || self.get(d, x ^ 1) != Some(c) {
                            return false;
                        }
                    }
                }
            }
            for r in relators {
                let mut f = c;
                for &x in r {
                    f = self.table[f * self.cols + x] as usize;
                }
                if f != c {
                    return false;
                }
            }
        }
        true
    }

    /// Coset reached from `c` by reading `w`, if every step is defined.
    pub fn trace(&self, c: usize, w: &Word) -> Option<usize> {
        let mut f = c;
        for l in w.letters() {
            f = self.get(f, l.column())?;
        }
        Some(f)
    }
}

fn columns_of(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.column()).collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// presented by `p`, holding at most `cap` rows at once.
pub fn enumerate_cosets(
    p: &Presentation,
    subgroup: &[Word],
    cap: usize,
    strategy: Strategy,
) -> CosetTable {
    let cols = 2 * p.generator_count();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| columns_of(&r.cyclically_reduced()))
        .filter(|r| !r.is_empty())
        .collect();
    let subgroup: Vec<Vec<usize>> = subgroup.iter().map(|w| columns_of(&w.reduced())).collect();
    let mut t = CosetTable::with_columns(cols);
    let cap = cap.max(1);
    let ok = match strategy {
        Strategy::Hlt => hlt(&mut t, &relators, &subgroup, cap),
        Strategy::Felsch => felsch(&mut t, &relators, &subgroup, cap),
    };
    if ok {
        debug_assert!(t.is_complete_for(&relators));
        t.status = TableStatus::Complete;
    }
    t
}

fn lookahead(t: &mut CosetTable, relators: &[Vec<usize>]) {
    t.stats.lookaheads += 1;
    let mut c = 0;
    while c < t.rows() {
        if t.is_live(c) {
            for r in relators {
                let _ = t.scan(c as u32, r, false, usize::MAX, None);
                if !t.is_live(c) {
                    break;
                }
            }
        }
        c += 1;
    }
}

fn hlt(t: &mut CosetTable, relators: &[Vec<usize>], subgroup: &[Vec<usize>], cap: usize) -> bool {
    let mut current = 0usize;
    let mut sub_done = 0usize;
    loop {
        // Subgroup generators at the base coset.
        while sub_done < subgroup.len() {
            match t.scan(0, &subgroup[sub_done], true, cap, None) {
                Ok(()) => sub_done += 1,
                Err(Full) => {
                    if !make_room(t, relators, &mut current, cap) {
                        return false;
                    }
                }
            }
        }
        while current < t.rows() {
            if !t.is_live(current) {
                current += 1;
                continue;
            }
            let mut full = false;
            for r in relators {
                if t.scan(current as u32, r, true, cap, None).is_err() {
                    full = true;
                    break;
                }
                if !t.is_live(current) {
                    break;
                }
            }
            if !full && t.is_live(current) {
                for x in 0..t.cols {
                    if t.at(current as u32, x) == UNDEF {
                        if t.rows() >= cap {
                            full = true;
                            break;
                        }
                        let n = t.push_row();
                        t.set(current as u32, x, n);
                        t.set(n, x ^ 1, current as u32);
                    }
                }
            }
            if full {
                if !make_room(t, relators, &mut current, cap) {
                    return false;
                }
                continue;
            }
            current += 1;
        }
        if t.is_complete_for(relators) && subgroup_closed(t, subgroup) {
            return true;
        }
        // Coincidences late in the run can reopen gaps in earlier rows.
        current = 0;
        sub_done = 0;
    }
}

fn subgroup_closed(t: &CosetTable, subgroup: &[Vec<usize>]) -> bool {
    subgroup.iter().all(|w| {
        let mut f = 0usize;
        for &x in w {
            match t.get(f, x) {
                Some(n) => f = n,
                None => return false,
            }
        }
        f == 0
    })
}

fn make_room(t: &mut CosetTable, relators: &[Vec<usize>], current: &mut usize, cap: usize) -> bool {
    lookahead(t, relators);
    let next_live = t.compact();
    *current = next_live[*current] as usize;
    t.rows() < cap
}

fn felsch(
    t: &mut CosetTable,
    relators: &[Vec<usize>],
    subgroup: &[Vec<usize>],
    cap: usize,
) -> bool {
    // Cyclic conjugates of relators (and their inverses) indexed by first column.
    let mut by_col: Vec<Vec<Vec<usize>>> = vec![Vec::new(); t.cols];
    for r in relators {
        let inv: Vec<usize> = r.iter().rev().map(|&x| x ^ 1).collect();
        for w in [r, &inv] {
            for s in 0..w.len() {
                let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).copied().collect();
                if !by_col[rot[0]].contains(&rot) {
                    by_col[rot[0]].push(rot);
                }
            }
        }
    }
    let mut deductions: Vec<(u32, usize)> = Vec::new();
    for w in subgroup {
        if t.scan(0, w, true, cap, Some(&mut deductions)).is_err() {
            return false;
        }
    }
    for r in relators {
        let _ = t.scan(0, r, false, cap, Some(&mut deductions));
    }
    let mut c = 0usize;
    let mut x = 0usize;
    loop {
        process_deductions(t, &by_col, &mut deductions);
        // First undefined entry in a live row.
        while c < t.rows() && (!t.is_live(c) || t.at(c as u32, x) != UNDEF) {
            x += 1;
            if x == t.cols {
                x = 0;
                c += 1;
            }
        }
        if c >= t.rows() {
            if t.is_complete_for(relators) && subgroup_closed(t, subgroup) {
                return true;
            }
            c = 0;
            x = 0;
            for cc in 0..t.rows() {
                if t.is_live(cc) {
                    for xx in 0..t.cols {
                        deductions.push((cc as u32, xx));
                    }
                }
            }
            continue;
        }
        if t.rows() >= cap {
            return false;
        }
        let n = t.push_row();
        t.set(c as u32, x, n);
        t.set(n, x ^ 1, c as u32);
        deductions.push((c as u32, x));
    }
}

fn process_deductions(t: &mut CosetTable, by_col: &[Vec<Vec<usize>>], deductions: &mut Vec<(u32, usize)>) {
    while let Some((c, x)) = deductions.pop() {
        let c = t.rep(c);
        let d = t.at(c, x);
        for r in &by_col[x] {
            if !t.is_live(c as usize) {
                break;
            }
            let _ = t.scan(c, r, false, usize::MAX, Some(deductions));
        }
        if d != UNDEF {
            let d = t.rep(d);
            for r in &by_col[x ^ 1] {
                if !t.is_live(d as usize) {
                    break;
                }
                let _ = t.scan(d, r, false, usize::MAX, Some(deductions));
            }
        }
    }
}

/// Index of the subgroup generated by `subgroup_words` in the group presented
/// by `p`, using HLT with lookahead and at most `cap` stored cosets.
pub fn todd_coxeter(p: &Presentation, subgroup_words: &[Word], cap: usize) -> EnumerationResult {
    let t = enumerate_cosets(p, subgroup_words, cap, Strategy::Hlt);
    match t.status() {
        TableStatus::Complete => EnumerationResult::Index(t.live_count()),
        TableStatus::CapExceeded => EnumerationResult::Inconclusive,
    }
}
