//! Dense brute-force reference engine over F_p.
//!
//! Words are enumerated directly from the alphabet and filtered by a run
//! scan, products are literal concatenations, and spans are computed by
//! dense Gaussian elimination. Nothing here uses the library's automaton,
//! sparse echelon code or closure sweeps.

#![allow(dead_code)]

use std::collections::HashMap;

pub const P: u64 = 32003;

pub type Row = Vec<u64>;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

/// Reduced row echelon basis of the span of `rows`.
pub fn span(rows: impl IntoIterator<Item = Row>) -> Vec<Row> {
    let mut basis: Vec<(usize, Row)> = Vec::new();
    for mut r in rows {
        for (piv, b) in &basis {
            let c = r[*piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(b) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            continue;
        };
        let s = inv(r[piv]);
        for x in r.iter_mut() {
            *x = *x * s % P;
        }
        for (_, b) in basis.iter_mut() {
            let c = b[piv];
            if c != 0 {
                for (x, y) in b.iter_mut().zip(&r) {
                    *x = (*x + P - c * y % P) % P;
                }
            }
        }
        basis.push((piv, r));
    }
    basis.into_iter().map(|(_, r)| r).collect()
}

pub fn rank(rows: impl IntoIterator<Item = Row>) -> usize {
    span(rows).len()
}

/// Ã truncated at `max_degree`, with every layer held densely.
pub struct Oracle {
    pub nil: Vec<u32>,
    pub max_degree: usize,
    pub words: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl Oracle {
    pub fn new(nil: &[u32], max_degree: usize) -> Self {
        let m = nil.len() as u8;
        let mut words: Vec<Vec<Vec<u8>>> = vec![vec![]; max_degree + 1];
        let mut all: Vec<Vec<u8>> = vec![vec![]];
        for d in 1..=max_degree {
            let mut next = Vec::new();
            for w in &all {
                for a in 0..m {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            all = next.into_iter().filter(|w| normal(nil, w)).collect();
            words[d] = all.clone();
        }
        let index = words
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        Oracle {
            nil: nil.to_vec(),
            max_degree,
            words,
            index,
        }
    }

    pub fn dim(&self, d: usize) -> usize {
        self.words[d].len()
    }

    fn word_times(&self, left: &[u8], d: usize, row: &Row, right: &[u8]) -> Option<Row> {
        let e = left.len() + d + right.len();
        if e > self.max_degree {
            return None;
        }
        let mut out = vec![0; self.dim(e)];
        for (i, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut w = left.to_vec();
            w.extend_from_slice(&self.words[d][i]);
            w.extend_from_slice(right);
            if let Some(&j) = self.index[e].get(&w) {
                out[j] = (out[j] + c) % P;
            }
        }
        Some(out)
    }

    /// `ab - ba` for homogeneous rows of degrees `p` and `q`.
    pub fn bracket(&self, p: usize, a: &Row, q: usize, b: &Row) -> Row {
        let e = p + q;
        let mut out = vec![0; self.dim(e)];
        for (i, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in b.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let c = ca * cb % P;
                let u = &self.words[p][i];
                let v = &self.words[q][j];
                let uv: Vec<u8> = u.iter().chain(v).copied().collect();
                let vu: Vec<u8> = v.iter().chain(u).copied().collect();
                if let Some(&k) = self.index[e].get(&uv) {
                    out[k] = (out[k] + c) % P;
                }
                if let Some(&k) = self.index[e].get(&vu) {
                    out[k] = (out[k] + P - c) % P;
                }
            }
        }
        out
    }

    fn unit(&self, d: usize, i: usize) -> Row {
        let mut r = vec![0; self.dim(d)];
        r[i] = 1;
        r
    }

    /// `levels[j][d]` is a basis of A^[j]_d for `j ≤ depth`.
    pub fn derived(&self, depth: usize) -> Vec<Vec<Vec<Row>>> {
        let mut levels = vec![(0..=self.max_degree)
            .map(|d| (0..self.dim(d)).map(|i| self.unit(d, i)).collect())
            .collect::<Vec<Vec<Row>>>()];
        for j in 0..depth {
            let prev = &levels[j];
            let next = (0..=self.max_degree)
                .map(|f| {
                    let mut cands = Vec::new();
                    for p in 1..f {
                        for a in &prev[p] {
                            for b in &prev[f - p] {
                                cands.push(self.bracket(p, a, f - p, b));
                            }
                        }
                    }
                    span(cands)
                })
                .collect();
            levels.push(next);
        }
        levels
    }

    /// Basis of the two-sided ideal generated by `s`, layer by layer,
    /// from all products `u·s·v` with words `u`, `v`.
    pub fn ideal(&self, s: &[Vec<Row>]) -> Vec<Vec<Row>> {
        (0..=self.max_degree)
            .map(|f| {
                let mut cands = Vec::new();
                for d in 1..=f {
                    for a in 0..=(f - d) {
                        let b = f - d - a;
                        let lefts = if a == 0 { vec![vec![]] } else { self.words[a].clone() };
                        let rights = if b == 0 { vec![vec![]] } else { self.words[b].clone() };
                        for row in &s[d] {
                            for l in &lefts {
                                for r in &rights {
                                    if let Some(x) = self.word_times(l, d, row, r) {
                                        cands.push(x);
                                    }
                                }
                            }
                        }
                    }
                }
                span(cands)
            })
            .collect()
    }

    /// Least `n ≤ D` with `A_n ⊆ id(A^[k])`, and `Σ_{d<n} dim (A/I)_d`.
    pub fn nilpotency(&self, k: usize) -> Option<(usize, usize)> {
        let levels = self.derived(k);
        let ideal = self.ideal(&levels[k]);
        let mut total = 0;
        for d in 1..=self.max_degree {
            let q = self.dim(d) - ideal[d].len();
            if q == 0 {
                return Some((d, total));
            }
            total += q;
        }
        None
    }
}

pub fn normal(nil: &[u32], w: &[u8]) -> bool {
    let mut run = 0u32;
    for (i, &a) in w.iter().enumerate() {
        run = if i > 0 && w[i - 1] == a { run + 1 } else { 1 };
        if run >= nil[a as usize] {
            return false;
        }
    }
    true
}

/// The shipped suite presentations.
pub const SUITE: &[&[u32]] = &[&[2, 2], &[3, 3], &[2, 2, 2], &[4]];
