//! Graded sparse vectors and graded subspaces in reduced row echelon form.
//!
//! A subspace keeps, per degree, rows whose leading entry (the pivot) is 1
//! and whose other entries sit only in non-pivot columns. Reducing a vector
//! against such rows is a single pass, and equal subspaces have literally
//! equal row sets.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::words::{AlgebraSpec, Word, WordBasis};

/// Strictly increasing ordinals, no zero coefficients.
pub type SparseVec<E> = Vec<(u32, E)>;

/// Identifies the ambient algebra so that vectors of different algebras are
/// never mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId {
    fingerprint: u64,
    max_degree: usize,
}

impl SpaceId {
    pub fn of(spec: &AlgebraSpec) -> Self {
        SpaceId {
            fingerprint: spec.fingerprint(),
            max_degree: spec.max_degree(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

/// Sums duplicate ordinals and drops zeros.
pub fn combine<F: Field>(field: &F, mut terms: Vec<(u32, F::Elem)>) -> SparseVec<F::Elem> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(terms.len());
    for (k, x) in terms {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = field.add(&last.1, &x),
            _ => {
                if let Some(last) = out.last() {
                    if field.is_zero(&last.1) {
                        out.pop();
                    }
                }
                out.push((k, x));
            }
        }
    }
    if out.last().is_some_and(|l| field.is_zero(&l.1)) {
        out.pop();
    }
    out
}

/// `a - c·b`, also returning the columns of `b` that are new in the result.
fn axpy<F: Field>(
    field: &F,
    a: &[(u32, F::Elem)],
    c: &F::Elem,
    b: &[(u32, F::Elem)],
) -> (SparseVec<F::Elem>, Vec<u32>) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut fresh = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(u32::MAX, |t| t.0);
        let kb = b.get(j).map_or(u32::MAX, |t| t.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, field.neg(&field.mul(c, &b[j].1))));
            fresh.push(kb);
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    (out, fresh)
}

fn scale_sparse<F: Field>(field: &F, c: &F::Elem, v: &[(u32, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(k, x)| (*k, field.mul(c, x))).collect()
}

/// An element of the truncated algebra: degree → sparse coefficients over
/// the normal-word basis of that degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVector<E> {
    space: SpaceId,
    comps: BTreeMap<usize, SparseVec<E>>,
}

impl<E: Clone> GradedVector<E> {
    pub fn zero(space: SpaceId) -> Self {
        GradedVector {
            space,
            comps: BTreeMap::new(),
        }
    }

    /// Homogeneous vector from an already normalised sparse component.
    /// Degrees outside `1..=D` are dropped.
    pub fn homogeneous(space: SpaceId, degree: usize, entries: SparseVec<E>) -> Self {
        let mut v = Self::zero(space);
        if !entries.is_empty() && degree >= 1 && degree <= space.max_degree {
            v.comps.insert(degree, entries);
        }
        v
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.comps.keys().copied()
    }

    pub fn component(&self, degree: usize) -> &[(u32, E)] {
        self.comps.get(&degree).map_or(&[], |c| c.as_slice())
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &[(u32, E)])> {
        self.comps.iter().map(|(d, c)| (*d, c.as_slice()))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.comps.len() <= 1
    }

    /// The lowest degree carrying a nonzero component.
    pub fn degree(&self) -> Option<usize> {
        self.comps.keys().next().copied()
    }

    pub fn homogeneous_parts(&self) -> Vec<GradedVector<E>> {
        self.comps
            .iter()
            .map(|(d, c)| Self::homogeneous(self.space, *d, c.clone()))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.comps.values().map(Vec::len).sum()
    }

    pub(crate) fn insert_component(&mut self, degree: usize, entries: SparseVec<E>) {
        if entries.is_empty() || degree == 0 || degree > self.space.max_degree {
            self.comps.remove(&degree);
        } else {
            self.comps.insert(degree, entries);
        }
    }
}

fn same_space(a: SpaceId, b: SpaceId) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpecMismatch)
    }
}

pub fn vec_add<F: Field>(
    field: &F,
    u: &GradedVector<F::Elem>,
    v: &GradedVector<F::Elem>,
) -> Result<GradedVector<F::Elem>> {
    vec_axpy(field, u, &field.one(), v)
}

pub fn vec_sub<F: Field>(
    field: &F,
    u: &GradedVector<F::Elem>,
    v: &GradedVector<F::Elem>,
) -> Result<GradedVector<F::Elem>> {
    vec_axpy(field, u, &field.from_i64(-1), v)
}

/// `u + c·v`.
pub fn vec_axpy<F: Field>(
    field: &F,
    u: &GradedVector<F::Elem>,
    c: &F::Elem,
    v: &GradedVector<F::Elem>,
) -> Result<GradedVector<F::Elem>> {
    same_space(u.space, v.space)?;
    let mut out = u.clone();
    let minus_c = field.neg(c);
    for (d, comp) in &v.comps {
        let merged = axpy(field, u.component(*d), &minus_c, comp).0;
        out.insert_component(*d, merged);
    }
    Ok(out)
}

pub fn vec_scale<F: Field>(
    field: &F,
    c: &F::Elem,
    v: &GradedVector<F::Elem>,
) -> GradedVector<F::Elem> {
    let mut out = GradedVector::zero(v.space);
    for (d, comp) in &v.comps {
        out.insert_component(*d, scale_sparse(field, c, comp));
    }
    out
}

pub fn vec_from_word<F: Field>(
    field: &F,
    basis: &WordBasis,
    w: &Word,
) -> Result<GradedVector<F::Elem>> {
    let (d, ord) = basis.word_index(w)?;
    Ok(GradedVector::homogeneous(
        SpaceId::of(basis.spec()),
        d,
        vec![(ord as u32, field.one())],
    ))
}

/// One degree of a subspace: reduced row echelon rows with monic pivots.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    rows: Vec<SparseVec<E>>,
    pivot_row: HashMap<u32, u32>,
    // non-pivot column -> rows that may hold it (stale entries allowed)
    occ: HashMap<u32, Vec<u32>>,
}

impl<E: Clone> Default for Echelon<E> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_row: HashMap::new(),
            occ: HashMap::new(),
        }
    }
}

impl<E: Clone> Echelon<E> {
    /// The whole space of dimension `dim`.
    pub fn full(dim: usize, one: E) -> Self {
        Echelon {
            rows: (0..dim as u32).map(|o| vec![(o, one.clone())]).collect(),
            pivot_row: (0..dim as u32).map(|o| (o, o)).collect(),
            occ: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows in insertion order.
    pub fn rows(&self) -> &[SparseVec<E>] {
        &self.rows
    }

    /// Rows ordered by pivot: the canonical basis.
    pub fn canonical_rows(&self) -> Vec<&SparseVec<E>> {
        let mut rows: Vec<&SparseVec<E>> = self.rows.iter().collect();
        rows.sort_unstable_by_key(|r| r[0].0);
        rows
    }

    pub fn reduce<F: Field<Elem = E>>(&self, field: &F, v: &[(u32, E)]) -> SparseVec<E> {
        if !v.iter().any(|(c, _)| self.pivot_row.contains_key(c)) {
            return v.to_vec();
        }
        let mut terms = Vec::with_capacity(v.len() * 2);
        for (c, x) in v {
            match self.pivot_row.get(c) {
                Some(&r) => {
                    let minus = field.neg(x);
                    terms.extend(
                        self.rows[r as usize][1..]
                            .iter()
                            .map(|(k, y)| (*k, field.mul(&minus, y))),
                    );
                }
                None => terms.push((*c, x.clone())),
            }
        }
        combine(field, terms)
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[(u32, E)]) -> bool {
        self.reduce(field, v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, field: &F, v: &[(u32, E)]) -> bool {
        let mut r = self.reduce(field, v);
        if r.is_empty() {
            return false;
        }
        if !field.is_one(&r[0].1) {
            let inv = field.inv(&r[0].1).expect("leading entry is nonzero");
            r = scale_sparse(field, &inv, &r);
        }
        let p = r[0].0;
        let idx = self.rows.len() as u32;
        if let Some(holders) = self.occ.remove(&p) {
            for h in holders {
                let row = &self.rows[h as usize];
                let Ok(pos) = row.binary_search_by_key(&p, |t| t.0) else {
                    continue;
                };
                let c = row[pos].1.clone();
                let (merged, fresh) = axpy(field, row, &c, &r);
                self.rows[h as usize] = merged;
                for col in fresh {
                    self.occ.entry(col).or_default().push(h);
                }
            }
        }
        for (col, _) in &r[1..] {
            self.occ.entry(*col).or_default().push(idx);
        }
        self.pivot_row.insert(p, idx);
        self.rows.push(r);
        true
    }
}

/// A graded subspace of the truncated algebra, degree by degree.
#[derive(Debug, Clone)]
pub struct GradedSubspace<F: Field> {
    field: F,
    space: SpaceId,
    layers: Vec<Echelon<F::Elem>>,
}

impl<F: Field> GradedSubspace<F> {
    pub fn new(field: F, space: SpaceId) -> Self {
        GradedSubspace {
            field,
            space,
            layers: (0..space.max_degree).map(|_| Echelon::default()).collect(),
        }
    }

    /// The whole space `A_1 ⊕ … ⊕ A_D`. Callers bound the dimensions.
    pub fn full(field: F, basis: &WordBasis) -> Self {
        let space = SpaceId::of(basis.spec());
        let one = field.one();
        GradedSubspace {
            layers: (1..=space.max_degree)
                .map(|d| Echelon::full(basis.dim(d) as usize, one.clone()))
                .collect(),
            field,
            space,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn max_degree(&self) -> usize {
        self.space.max_degree
    }

    pub fn layer(&self, degree: usize) -> &Echelon<F::Elem> {
        &self.layers[degree - 1]
    }

    pub(crate) fn set_layer(&mut self, degree: usize, layer: Echelon<F::Elem>) {
        self.layers[degree - 1] = layer;
    }

    pub fn dim_at(&self, degree: usize) -> usize {
        if degree == 0 || degree > self.space.max_degree {
            0
        } else {
            self.layers[degree - 1].rank()
        }
    }

    /// `(degree, dim)` for every degree of positive dimension.
    pub fn dims(&self) -> Vec<(usize, usize)> {
        (1..=self.space.max_degree)
            .map(|d| (d, self.dim_at(d)))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    /// Dimensions for every degree `1..=D`, zeros included.
    pub fn dim_vector(&self) -> Vec<usize> {
        (1..=self.space.max_degree).map(|d| self.dim_at(d)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(|l| l.rank() == 0)
    }

    /// Inserts every homogeneous component of `v`; returns the degrees whose
    /// dimension grew.
    pub fn insert(&mut self, v: &GradedVector<F::Elem>) -> Result<Vec<usize>> {
        same_space(self.space, v.space)?;
        let mut grew = Vec::new();
        for (d, comp) in v.components() {
            if self.layers[d - 1].insert(&self.field, comp) {
                grew.push(d);
            }
        }
        Ok(grew)
    }

    pub fn insert_homogeneous(&mut self, degree: usize, v: &[(u32, F::Elem)]) -> bool {
        self.layers[degree - 1].insert(&self.field, v)
    }

    pub fn contains(&self, v: &GradedVector<F::Elem>) -> Result<bool> {
        same_space(self.space, v.space)?;
        Ok(v
            .components()
            .all(|(d, comp)| self.layers[d - 1].contains(&self.field, comp)))
    }

    pub fn contains_homogeneous(&self, degree: usize, v: &[(u32, F::Elem)]) -> bool {
        if degree == 0 || degree > self.space.max_degree {
            return v.is_empty();
        }
        self.layers[degree - 1].contains(&self.field, v)
    }

    pub fn equal_at(&self, other: &GradedSubspace<F>, degree: usize) -> Result<bool> {
        same_space(self.space, other.space)?;
        if self.dim_at(degree) != other.dim_at(degree) {
            return Ok(false);
        }
        if degree == 0 || degree > self.space.max_degree {
            return Ok(true);
        }
        Ok(self.layers[degree - 1].canonical_rows() == other.layers[degree - 1].canonical_rows())
    }

    /// `self ⊆ other`, degree by degree.
    pub fn is_subspace_of(&self, other: &GradedSubspace<F>) -> Result<bool> {
        same_space(self.space, other.space)?;
        Ok((1..=self.space.max_degree).all(|d| {
            self.layers[d - 1]
                .rows()
                .iter()
                .all(|r| other.layers[d - 1].contains(&self.field, r))
        }))
    }

    /// Canonical basis vectors of one degree.
    pub fn basis_at(&self, degree: usize) -> Vec<GradedVector<F::Elem>> {
        self.layers[degree - 1]
            .canonical_rows()
            .into_iter()
            .map(|r| GradedVector::homogeneous(self.space, degree, r.clone()))
            .collect()
    }

    /// Canonical basis, ordered by (degree, pivot).
    pub fn basis_vectors(&self) -> Vec<GradedVector<F::Elem>> {
        (1..=self.space.max_degree)
            .flat_map(|d| self.basis_at(d))
            .collect()
    }
}
