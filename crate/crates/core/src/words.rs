//! Normal words of `⟨x_1, …, x_m | x_i^{n_i} = 0⟩` and their grading.
//!
//! A word is normal when it contains no run of `n_i` consecutive copies of
//! `x_i`. The normal words of length `d` form the basis of the degree-`d`
//! component, ordered lexicographically with `x_1 < … < x_m`. Ordinals are
//! computed by counting completions (no per-word hash tables), so ranking
//! and unranking cost `O(d)` each.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::FieldSpec;

/// The presentation: nil exponents per generator, coefficient field and
/// truncation degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    nil: Vec<u32>,
    field: FieldSpec,
    max_degree: usize,
}

impl AlgebraSpec {
    pub fn new(nil: Vec<u32>, field: FieldSpec, max_degree: usize) -> Result<Self> {
        if nil.is_empty() {
            return Err(Error::InvalidSpec("at least one generator is required".into()));
        }
        if nil.len() > u8::MAX as usize {
            return Err(Error::InvalidSpec(format!(
                "at most {} generators are supported",
                u8::MAX
            )));
        }
        if let Some(i) = nil.iter().position(|&n| n == 0) {
            return Err(Error::InvalidSpec(format!(
                "nil exponent of generator {} must be at least 1",
                i + 1
            )));
        }
        if max_degree == 0 {
            return Err(Error::InvalidSpec("max degree must be at least 1".into()));
        }
        Ok(AlgebraSpec {
            nil,
            field,
            max_degree,
        })
    }

    pub fn generators(&self) -> usize {
        self.nil.len()
    }

    pub fn nil(&self) -> &[u32] {
        &self.nil
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn with_max_degree(&self, max_degree: usize) -> Result<Self> {
        AlgebraSpec::new(self.nil.clone(), self.field, max_degree)
    }

    /// Generators with `n_i = 1`; they vanish in the algebra.
    pub fn dead_generators(&self) -> Vec<usize> {
        (0..self.nil.len()).filter(|&i| self.nil[i] == 1).collect()
    }

    /// Stable textual identity, used for hashing and cache keys.
    pub fn canonical_key(&self) -> String {
        let nil: Vec<String> = self.nil.iter().map(u32::to_string).collect();
        format!(
            "m={};nil={};field={};D={}",
            self.nil.len(),
            nil.join(","),
            self.field,
            self.max_degree
        )
    }

    pub fn fingerprint(&self) -> u64 {
        let digest = Sha256::digest(self.canonical_key().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }

    pub fn letter_name(&self, letter: u8) -> String {
        letter_name(self.generators(), letter)
    }
}

fn letter_name(m: usize, letter: u8) -> String {
    if m <= 3 {
        ["x", "y", "z"][letter as usize].to_string()
    } else {
        format!("x{}", letter as usize + 1)
    }
}

/// A word in the generators; letters are 0-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `x1.x2.x1` form, independent of the generator count.
    pub fn dotted(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|&l| format!("x{}", l + 1)).collect();
        parts.join(".")
    }

    /// `xyx` when `m ≤ 3`, dotted otherwise.
    pub fn render(&self, m: usize) -> String {
        if m <= 3 {
            self.0.iter().map(|&l| letter_name(m, l)).collect()
        } else {
            self.dotted()
        }
    }

    /// Accepts the dotted form always and the compact `x/y/z` form when `m ≤ 3`.
    pub fn parse(s: &str, m: usize) -> Result<Word> {
        let bad = || Error::WordSyntax(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let letters: Vec<u8> = if s.contains('.') || (s.len() > 1 && s[1..].starts_with(|c: char| c.is_ascii_digit())) {
            s.split('.')
                .map(|part| {
                    let idx: usize = part.strip_prefix('x').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    if idx == 0 || idx > m {
                        return Err(bad());
                    }
                    Ok((idx - 1) as u8)
                })
                .collect::<Result<_>>()?
        } else {
            if m > 3 {
                return Err(bad());
            }
            s.chars()
                .map(|c| match c {
                    'x' => Ok(0u8),
                    'y' if m >= 2 => Ok(1),
                    'z' if m >= 3 => Ok(2),
                    _ => Err(bad()),
                })
                .collect::<Result<_>>()?
        };
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dotted())
    }
}

const NONE: u32 = u32::MAX;

/// Basis tables for the graded components `A_1, …, A_D`.
///
/// Automaton states record the last letter and its current run length;
/// `count[len][state]` is the number of normal continuations of length
/// `len`. Flat word tables per degree are materialised on first use.
#[derive(Debug)]
pub struct WordBasis {
    spec: AlgebraSpec,
    states: usize,
    empty: u32,
    next: Vec<u32>,
    count: Vec<Vec<u64>>,
    below: Vec<u64>,
    tables: Vec<OnceLock<Box<[u8]>>>,
}

impl WordBasis {
    pub fn new(spec: &AlgebraSpec) -> Self {
        let m = spec.generators();
        let d_max = spec.max_degree();
        // runs longer than D never occur, so cap the tracked run length
        let cap: Vec<usize> = spec
            .nil()
            .iter()
            .map(|&n| (n as usize).min(d_max + 1))
            .collect();
        let mut offset = vec![0usize; m];
        let mut states = 0usize;
        for c in 0..m {
            offset[c] = states;
            states += cap[c].saturating_sub(1);
        }
        let empty = states as u32;
        let total = states + 1;
        let state_of = |c: usize, r: usize| -> u32 {
            if r < cap[c] {
                (offset[c] + r - 1) as u32
            } else {
                NONE
            }
        };
        let mut next = vec![NONE; total * m];
        for c in 0..m {
            for r in 1..cap[c] {
                let s = state_of(c, r) as usize;
                for a in 0..m {
                    next[s * m + a] = if a == c { state_of(c, r + 1) } else { state_of(a, 1) };
                }
            }
        }
        for a in 0..m {
            next[empty as usize * m + a] = state_of(a, 1);
        }

        let mut count = vec![vec![1u64; total]];
        for len in 1..=d_max {
            let prev = &count[len - 1];
            let row: Vec<u64> = (0..total)
                .map(|s| {
                    (0..m)
                        .filter_map(|a| match next[s * m + a] {
                            NONE => None,
                            ns => Some(prev[ns as usize]),
                        })
                        .fold(0u64, u64::saturating_add)
                })
                .collect();
            count.push(row);
        }

        // below[(rem * total + s) * m + b] = continuations of length rem + 1
        // that start with a letter smaller than b
        let mut below = vec![0u64; d_max.max(1) * total * m];
        for rem in 0..d_max {
            for s in 0..total {
                let mut acc = 0u64;
                for b in 0..m {
                    below[(rem * total + s) * m + b] = acc;
                    let ns = next[s * m + b];
                    if ns != NONE {
                        acc = acc.saturating_add(count[rem][ns as usize]);
                    }
                }
            }
        }

        WordBasis {
            spec: spec.clone(),
            states: total,
            empty,
            next,
            count,
            below,
            tables: (0..d_max).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    fn m(&self) -> usize {
        self.spec.generators()
    }

    /// `dim A_d`, saturating at `u64::MAX`; zero outside `1..=D`.
    pub fn dim(&self, d: usize) -> u64 {
        if d == 0 || d > self.spec.max_degree() {
            0
        } else {
            self.count[d][self.empty as usize]
        }
    }

    pub fn dims(&self) -> Vec<u64> {
        (1..=self.spec.max_degree()).map(|d| self.dim(d)).collect()
    }

    fn check_degree(&self, d: usize) -> Result<()> {
        if d == 0 || d > self.spec.max_degree() {
            Err(Error::DegreeOutOfRange {
                degree: d,
                max_degree: self.spec.max_degree(),
            })
        } else {
            Ok(())
        }
    }

    fn step(&self, state: u32, letter: u8) -> u32 {
        if letter as usize >= self.m() {
            return NONE;
        }
        self.next[state as usize * self.m() + letter as usize]
    }

    pub fn is_normal(&self, letters: &[u8]) -> bool {
        let mut s = self.empty;
        for &l in letters {
            s = self.step(s, l);
            if s == NONE {
                return false;
            }
        }
        true
    }

    /// All normal words of degree `d`, in canonical order.
    pub fn normal_words(&self, d: usize) -> Result<Vec<Word>> {
        self.check_degree(d)?;
        let flat = self.table(d);
        Ok(flat.chunks_exact(d).map(|c| Word(c.to_vec())).collect())
    }

    /// Flat storage of the degree-`d` basis: word `o` is `table[o*d..(o+1)*d]`.
    pub fn table(&self, d: usize) -> &[u8] {
        self.tables[d - 1].get_or_init(|| {
            let n = self.dim(d) as usize;
            let mut flat = Vec::with_capacity(n * d);
            let mut word = Vec::with_capacity(d);
            self.enumerate(d, self.empty, &mut word, &mut flat);
            debug_assert_eq!(flat.len(), n * d);
            flat.into_boxed_slice()
        })
    }

    fn enumerate(&self, d: usize, state: u32, word: &mut Vec<u8>, out: &mut Vec<u8>) {
        if word.len() == d {
            out.extend_from_slice(word);
            return;
        }
        for a in 0..self.m() as u8 {
            let ns = self.step(state, a);
            if ns != NONE {
                word.push(a);
                self.enumerate(d, ns, word, out);
                word.pop();
            }
        }
    }

    pub fn word(&self, d: usize, ordinal: u32) -> &[u8] {
        &self.table(d)[ordinal as usize * d..(ordinal as usize + 1) * d]
    }

    /// Unranks without touching the flat tables.
    pub fn word_at(&self, d: usize, ordinal: u64) -> Result<Word> {
        self.check_degree(d)?;
        if ordinal >= self.dim(d) {
            return Err(Error::DegreeOutOfRange {
                degree: d,
                max_degree: self.spec.max_degree(),
            });
        }
        let mut rest = ordinal;
        let mut s = self.empty;
        let mut letters = Vec::with_capacity(d);
        for pos in 0..d {
            let rem = d - pos - 1;
            for a in 0..self.m() as u8 {
                let ns = self.step(s, a);
                if ns == NONE {
                    continue;
                }
                let c = self.count[rem][ns as usize];
                if rest < c {
                    letters.push(a);
                    s = ns;
                    break;
                }
                rest -= c;
            }
        }
        Ok(Word(letters))
    }

    fn rank_iter<'a>(&self, d: usize, letters: impl Iterator<Item = &'a u8>) -> Option<u64> {
        let m = self.m();
        let mut s = self.empty;
        let mut rank = 0u64;
        for (pos, &b) in letters.enumerate() {
            let rem = d - pos - 1;
            if b as usize >= m {
                return None;
            }
            rank += self.below[(rem * self.states + s as usize) * m + b as usize];
            s = self.step(s, b);
            if s == NONE {
                return None;
            }
        }
        Some(rank)
    }

    /// `(degree, ordinal)` of a normal word.
    pub fn word_index(&self, w: &Word) -> Result<(usize, u64)> {
        let d = w.degree();
        self.check_degree(d)?;
        self.rank_iter(d, w.letters().iter())
            .map(|r| (d, r))
            .ok_or_else(|| Error::NotNormal(w.render(self.m())))
    }

    /// The product of two normal words: their concatenation, or `None` when a
    /// forbidden run straddles the junction.
    pub fn concat(&self, u: &Word, v: &Word) -> Result<Option<Word>> {
        for w in [u, v] {
            if !self.is_normal(w.letters()) || w.degree() == 0 {
                return Err(Error::NotNormal(w.render(self.m())));
            }
        }
        let d = u.degree() + v.degree();
        if d > self.spec.max_degree() {
            return Err(Error::TruncationOverflow {
                degree: d,
                max_degree: self.spec.max_degree(),
            });
        }
        if !self.junction_ok(u.letters(), v.letters()) {
            return Ok(None);
        }
        let mut letters = u.0.clone();
        letters.extend_from_slice(&v.0);
        Ok(Some(Word(letters)))
    }

    /// Both sides normal; only the run through the junction can be forbidden.
    pub fn junction_ok(&self, u: &[u8], v: &[u8]) -> bool {
        let (Some(&c), Some(&first)) = (u.last(), v.first()) else {
            return true;
        };
        if c != first {
            return true;
        }
        let left = u.iter().rev().take_while(|&&l| l == c).count();
        let right = v.iter().take_while(|&&l| l == c).count();
        ((left + right) as u64) < self.spec.nil()[c as usize] as u64
    }

    /// Ordinal of `word(d1, o1) · word(d2, o2)` in degree `d1 + d2`, or `None`
    /// if the product vanishes. The caller guarantees `d1 + d2 ≤ D`.
    pub fn product(&self, d1: usize, o1: u32, d2: usize, o2: u32) -> Option<u32> {
        let u = self.word(d1, o1);
        let v = self.word(d2, o2);
        if !self.junction_ok(u, v) {
            return None;
        }
        self.rank_iter(d1 + d2, u.iter().chain(v.iter()))
            .map(|r| r as u32)
    }
}
