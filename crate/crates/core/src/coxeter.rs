//! Todd–Coxeter coset enumeration (HLT with coincidence handling) for
//! groups generated by involutions, and the resulting regular permutation
//! representation.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Coset table of the trivial subgroup: `table[c][g]` is the coset `c . s_g`.
/// Generators are involutions, so each is its own inverse.
pub fn enumerate_cosets(ngens: usize, relators: &[Vec<usize>], max_cosets: usize) -> Result<Vec<Vec<usize>>> {
    let mut e = Enumerator {
        table: vec![vec![None; ngens]],
        parent: vec![0],
        queue: Vec::new(),
        max_cosets,
    };
    // Every generator is an involution.
    let mut rels: Vec<Vec<usize>> = (0..ngens).map(|g| vec![g, g]).collect();
    rels.extend(relators.iter().cloned());

    let mut c = 0;
    while c < e.table.len() {
        if e.live(c) {
            for r in &rels {
                e.scan_and_fill(c, r)?;
                if !e.live(c) {
                    break;
                }
            }
            if e.live(c) {
                for g in 0..ngens {
                    if e.table[c][g].is_none() {
                        let d = e.new_coset()?;
                        e.table[c][g] = Some(d);
                        e.table[d][g] = Some(c);
                    }
                }
            }
        }
        c += 1;
    }

    // Compact the live cosets.
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let renum: HashMap<usize, usize> = live.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut out = Vec::with_capacity(live.len());
    for &c in &live {
        let mut row = Vec::with_capacity(ngens);
        for g in 0..ngens {
            let d = e.table[c][g].ok_or_else(|| Error::Precondition("incomplete coset table".into()))?;
            row.push(renum[&e.rep(d)]);
        }
        out.push(row);
    }
    Ok(out)
}

struct Enumerator {
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    max_cosets: usize,
}

impl Enumerator {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn new_coset(&mut self) -> Result<usize> {
        if self.table.len() >= self.max_cosets {
            return Err(Error::Precondition(format!(
                "coset enumeration exceeded {} cosets",
                self.max_cosets
            )));
        }
        let ngens = self.table[0].len();
        self.table.push(vec![None; ngens]);
        self.parent.push(self.table.len() - 1);
        Ok(self.table.len() - 1)
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(x) => {
                        f = x;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize]] {
                    Some(x) => {
                        b = x;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i]] = Some(f);
                return Ok(());
            }
            let d = self.new_coset()?;
            self.table[f][w[i]] = Some(d);
            self.table[d][w[i]] = Some(f);
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut k = 0;
        while k < self.queue.len() {
            let e = self.queue[k];
            k += 1;
            for x in 0..self.table[e].len() {
                let Some(f) = self.table[e][x] else { continue };
                if self.table[f][x] == Some(e) {
                    self.table[f][x] = None;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t);
                } else if let Some(t) = self.table[f1][x] {
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x] = Some(e1);
                }
            }
        }
    }
}

/// Generators of the group as permutations of the cosets of the trivial
/// subgroup.
pub fn regular_permutations(table: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let ngens = table.first().map_or(0, |r| r.len());
    (0..ngens)
        .map(|g| table.iter().map(|row| row[g]).collect())
        .collect()
}

/// Relators of the Coxeter group with matrix `m` (`m[i][j]` = order of
/// `s_i s_j`; `0` means no relation).
pub fn coxeter_relators(m: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] > 0 {
                rels.push([i, j].repeat(m[i][j]));
            }
        }
    }
    rels
}
