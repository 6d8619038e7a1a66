//! Products, brackets and closures in the truncated algebra.
//!
//! Every closure is a single sweep in increasing degree: a degree-`f`
//! contribution only involves components of strictly smaller degree, so no
//! fixpoint iteration within a degree is needed.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    self, combine, Echelon, GradedSubspace, GradedVector, SpaceId, SparseVec,
};
use crate::scalar::Field;
use crate::words::{AlgebraSpec, Word, WordBasis};

/// Largest `dim A_d` any computation may touch unless overridden.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

const CHUNK: usize = 256;

/// The truncated algebra over a concrete field, with its word basis and a
/// per-degree work budget.
#[derive(Debug)]
pub struct Algebra<F: Field> {
    spec: AlgebraSpec,
    field: F,
    basis: WordBasis,
    space: SpaceId,
    budget: u64,
}

pub type Vector<F> = GradedVector<<F as Field>::Elem>;

impl<F: Field> Algebra<F> {
    pub fn new(spec: AlgebraSpec, field: F) -> Result<Self> {
        if field.spec() != spec.field() {
            return Err(Error::SpecMismatch);
        }
        let basis = WordBasis::new(&spec);
        let space = SpaceId::of(&spec);
        Ok(Algebra {
            spec,
            field,
            basis,
            space,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn basis(&self) -> &WordBasis {
        &self.basis
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn max_degree(&self) -> usize {
        self.spec.max_degree()
    }

    pub fn dim(&self, d: usize) -> u64 {
        self.basis.dim(d)
    }

    /// Fails if any degree in `1..=d` is larger than the budget.
    pub fn check_budget(&self, d: usize) -> Result<()> {
        for e in 1..=d.min(self.max_degree()) {
            let dim = self.dim(e);
            if dim > self.budget {
                return Err(Error::BudgetExceeded {
                    degree: e,
                    dim,
                    budget: self.budget,
                });
            }
        }
        Ok(())
    }

    fn check_space(&self, v: &Vector<F>) -> Result<()> {
        if v.space() == self.space {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    fn check_vector(&self, v: &Vector<F>) -> Result<()> {
        self.check_space(v)?;
        if let Some(top) = v.degrees().last() {
            self.check_budget(top)?;
        }
        Ok(())
    }

    pub fn zero(&self) -> Vector<F> {
        GradedVector::zero(self.space)
    }

    pub fn word(&self, w: &Word) -> Result<Vector<F>> {
        linalg::vec_from_word(&self.field, &self.basis, w)
    }

    pub fn parse_word(&self, s: &str) -> Result<Vector<F>> {
        self.word(&Word::parse(s, self.spec.generators())?)
    }

    /// `x_j` (0-based), or zero when `n_j = 1`.
    pub fn generator(&self, j: usize) -> Vector<F> {
        match self.generator_ordinal(j) {
            Some(o) => GradedVector::homogeneous(self.space, 1, vec![(o, self.field.one())]),
            None => self.zero(),
        }
    }

    fn generator_ordinal(&self, j: usize) -> Option<u32> {
        self.basis
            .word_index(&Word::new(vec![j as u8]))
            .ok()
            .map(|(_, o)| o as u32)
    }

    fn live_generators(&self) -> Vec<u32> {
        (0..self.spec.generators())
            .filter_map(|j| self.generator_ordinal(j))
            .collect()
    }

    pub fn add(&self, u: &Vector<F>, v: &Vector<F>) -> Result<Vector<F>> {
        linalg::vec_add(&self.field, u, v)
    }

    pub fn sub(&self, u: &Vector<F>, v: &Vector<F>) -> Result<Vector<F>> {
        linalg::vec_sub(&self.field, u, v)
    }

    pub fn scale(&self, c: &F::Elem, v: &Vector<F>) -> Vector<F> {
        linalg::vec_scale(&self.field, c, v)
    }

    /// Product of homogeneous components of degrees `p` and `q`; empty when
    /// `p + q > D`. Degrees must be within budget.
    pub fn mul_homogeneous(
        &self,
        p: usize,
        u: &[(u32, F::Elem)],
        q: usize,
        v: &[(u32, F::Elem)],
    ) -> SparseVec<F::Elem> {
        if p + q > self.max_degree() || u.is_empty() || v.is_empty() {
            return Vec::new();
        }
        let mut terms = Vec::with_capacity(u.len() * v.len());
        for (a, x) in u {
            for (b, y) in v {
                if let Some(k) = self.basis.product(p, *a, q, *b) {
                    terms.push((k, self.field.mul(x, y)));
                }
            }
        }
        combine(&self.field, terms)
    }

    /// `uv - vu` for homogeneous components.
    pub fn bracket_homogeneous(
        &self,
        p: usize,
        u: &[(u32, F::Elem)],
        q: usize,
        v: &[(u32, F::Elem)],
    ) -> SparseVec<F::Elem> {
        self.sym_homogeneous(p, u, q, v, -1)
    }

    fn sym_homogeneous(
        &self,
        p: usize,
        u: &[(u32, F::Elem)],
        q: usize,
        v: &[(u32, F::Elem)],
        sign: i64,
    ) -> SparseVec<F::Elem> {
        if p + q > self.max_degree() || u.is_empty() || v.is_empty() {
            return Vec::new();
        }
        let s = self.field.from_i64(sign);
        let mut terms = Vec::with_capacity(2 * u.len() * v.len());
        for (a, x) in u {
            for (b, y) in v {
                let xy = self.field.mul(x, y);
                if let Some(k) = self.basis.product(p, *a, q, *b) {
                    terms.push((k, xy.clone()));
                }
                if let Some(k) = self.basis.product(q, *b, p, *a) {
                    terms.push((k, self.field.mul(&s, &xy)));
                }
            }
        }
        combine(&self.field, terms)
    }

    fn bilinear(
        &self,
        u: &Vector<F>,
        v: &Vector<F>,
        part: impl Fn(usize, &[(u32, F::Elem)], usize, &[(u32, F::Elem)]) -> SparseVec<F::Elem>,
    ) -> Result<Vector<F>> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        let mut out = self.zero();
        for (p, cu) in u.components() {
            for (q, cv) in v.components() {
                if p + q > self.max_degree() {
                    continue;
                }
                self.check_budget(p + q)?;
                let piece = GradedVector::homogeneous(self.space, p + q, part(p, cu, q, cv));
                out = self.add(&out, &piece)?;
            }
        }
        Ok(out)
    }

    /// Associative product, truncated at `D`.
    pub fn mul(&self, u: &Vector<F>, v: &Vector<F>) -> Result<Vector<F>> {
        self.bilinear(u, v, |p, a, q, b| self.mul_homogeneous(p, a, q, b))
    }

    /// Lie bracket `uv - vu`.
    pub fn bracket(&self, u: &Vector<F>, v: &Vector<F>) -> Result<Vector<F>> {
        self.bilinear(u, v, |p, a, q, b| self.sym_homogeneous(p, a, q, b, -1))
    }

    /// Jordan product `uv + vu`.
    pub fn jordan(&self, u: &Vector<F>, v: &Vector<F>) -> Result<Vector<F>> {
        self.bilinear(u, v, |p, a, q, b| self.sym_homogeneous(p, a, q, b, 1))
    }

    /// `f_1(a, b) = [a, b]`, `f_s = [f_{s-1}(first half), f_{s-1}(second half)]`.
    pub fn eval_f(&self, s: usize, args: &[Vector<F>]) -> Result<Vector<F>> {
        let expected = 1usize.checked_shl(s as u32).filter(|_| s >= 1).unwrap_or(0);
        if s == 0 || args.len() != expected {
            return Err(Error::ArityMismatch {
                s,
                expected,
                got: args.len(),
            });
        }
        if s == 1 {
            return self.bracket(&args[0], &args[1]);
        }
        let (left, right) = args.split_at(expected / 2);
        self.bracket(&self.eval_f(s - 1, left)?, &self.eval_f(s - 1, right)?)
    }

    pub fn empty_subspace(&self) -> GradedSubspace<F> {
        GradedSubspace::new(self.field.clone(), self.space)
    }

    pub fn full_space(&self) -> Result<GradedSubspace<F>> {
        self.check_budget(self.max_degree())?;
        Ok(GradedSubspace::full(self.field.clone(), &self.basis))
    }

    pub fn span(&self, vectors: &[Vector<F>]) -> Result<GradedSubspace<F>> {
        let mut s = self.empty_subspace();
        for v in vectors {
            self.check_vector(v)?;
            s.insert(v)?;
        }
        Ok(s)
    }

    fn check_subspace(&self, s: &GradedSubspace<F>) -> Result<()> {
        if s.space() == self.space {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    /// Feeds candidate vectors into `layer` in chunks until its rank reaches
    /// `cap`. Candidates of one chunk are built in parallel and inserted in
    /// order, so the result does not depend on scheduling.
    fn absorb<J, I, M>(&self, layer: &mut Echelon<F::Elem>, cap: usize, jobs: I, make: M)
    where
        J: Send,
        I: Iterator<Item = J>,
        M: Fn(J) -> SparseVec<F::Elem> + Sync + Send,
    {
        let mut jobs = jobs.peekable();
        while layer.rank() < cap && jobs.peek().is_some() {
            let chunk: Vec<J> = jobs.by_ref().take(CHUNK).collect();
            let built: Vec<SparseVec<F::Elem>> = chunk.into_par_iter().map(&make).collect();
            for v in built {
                if !v.is_empty() {
                    layer.insert(&self.field, &v);
                    if layer.rank() >= cap {
                        break;
                    }
                }
            }
        }
    }

    /// Span of `[a, b]` over `a ∈ rows(p)`, `b ∈ rows(q)`, `p + q = f`,
    /// using antisymmetry to skip mirrored pairs.
    pub(crate) fn bracket_layer(
        &self,
        f: usize,
        seed: Echelon<F::Elem>,
        cap: usize,
        lower: &GradedSubspace<F>,
    ) -> Echelon<F::Elem> {
        let mut layer = seed;
        let pairs = (1..=f / 2).flat_map(move |p| {
            let q = f - p;
            let rows_p = lower.layer(p).rows();
            let rows_q = lower.layer(q).rows();
            (0..rows_p.len()).flat_map(move |a| {
                let start = if p == q { a + 1 } else { 0 };
                (start..rows_q.len()).map(move |b| (p, &rows_p[a], q, &rows_q[b]))
            })
        });
        self.absorb(&mut layer, cap, pairs, |(p, a, q, b)| {
            self.bracket_homogeneous(p, a, q, b)
        });
        layer
    }

    /// One degree of the two-sided ideal sweep:
    /// `I_f = seed + Σ_j (x_j·I_{f-1} + I_{f-1}·x_j)`.
    pub(crate) fn ideal_layer(
        &self,
        f: usize,
        seed: Echelon<F::Elem>,
        previous: Option<&Echelon<F::Elem>>,
    ) -> Echelon<F::Elem> {
        let mut layer = seed;
        let cap = self.dim(f) as usize;
        let Some(prev) = previous else {
            return layer;
        };
        let gens = self.live_generators();
        let one = self.field.one();
        let jobs = prev.rows().iter().flat_map(|r| {
            gens.iter().flat_map(move |&g| [(r, g, true), (r, g, false)])
        });
        self.absorb(&mut layer, cap, jobs, |(r, g, left)| {
            let x = [(g, one.clone())];
            if left {
                self.mul_homogeneous(1, &x, f - 1, r)
            } else {
                self.mul_homogeneous(f - 1, r, 1, &x)
            }
        });
        layer
    }

    /// Smallest two-sided ideal containing `s`, truncated at `D`.
    pub fn ideal_closure(&self, s: &GradedSubspace<F>) -> Result<GradedSubspace<F>> {
        self.check_subspace(s)?;
        self.check_budget(self.max_degree())?;
        let mut out = self.empty_subspace();
        for f in 1..=self.max_degree() {
            let prev = (f > 1).then(|| out.layer(f - 1));
            let layer = self.ideal_layer(f, s.layer(f).clone(), prev);
            out.set_layer(f, layer);
        }
        Ok(out)
    }

    /// Smallest Lie ideal containing `s`: closed under `[A_d, ·]` for every
    /// degree `d`, not just `d = 1`.
    pub fn lie_ideal_closure(&self, s: &GradedSubspace<F>) -> Result<GradedSubspace<F>> {
        self.check_subspace(s)?;
        self.check_budget(self.max_degree())?;
        let mut out = self.empty_subspace();
        for f in 1..=self.max_degree() {
            let mut layer = s.layer(f).clone();
            let cap = self.dim(f) as usize;
            let one = self.field.one();
            let out_ref = &out;
            let jobs = (1..f).flat_map(|d| {
                let rows = out_ref.layer(f - d).rows();
                (0..self.dim(d) as u32)
                    .flat_map(move |w| rows.iter().map(move |u| (d, w, u)))
            });
            self.absorb(&mut layer, cap, jobs, |(d, w, u)| {
                self.bracket_homogeneous(d, &[(w, one.clone())], f - d, u)
            });
            out.set_layer(f, layer);
        }
        Ok(out)
    }

    /// Lie subalgebra generated by `gens`. Inhomogeneous generators are split
    /// into their homogeneous parts first.
    pub fn lie_subalgebra_closure(&self, gens: &[Vector<F>]) -> Result<GradedSubspace<F>> {
        let caps: Vec<usize> = (1..=self.max_degree()).map(|d| self.dim(d) as usize).collect();
        self.lie_subalgebra_closure_capped(gens, &caps)
    }

    /// As [`Self::lie_subalgebra_closure`], but stops filling degree `d` once
    /// its dimension reaches `caps[d - 1]`.
    pub fn lie_subalgebra_closure_capped(
        &self,
        gens: &[Vector<F>],
        caps: &[usize],
    ) -> Result<GradedSubspace<F>> {
        self.check_budget(self.max_degree())?;
        let mut seeds = self.empty_subspace();
        for g in gens {
            self.check_space(g)?;
            for part in g.homogeneous_parts() {
                seeds.insert(&part)?;
            }
        }
        let mut out = self.empty_subspace();
        for f in 1..=self.max_degree() {
            let layer = self.bracket_layer(f, seeds.layer(f).clone(), caps[f - 1], &out);
            out.set_layer(f, layer);
        }
        Ok(out)
    }

    /// A random homogeneous vector of degree `d` with at most `max_terms`
    /// terms; zero when `A_d = 0`.
    pub fn random_homogeneous<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        d: usize,
        max_terms: usize,
    ) -> Vector<F> {
        let dim = self.dim(d);
        if dim == 0 || d > self.max_degree() {
            return self.zero();
        }
        let terms = rng.gen_range(1..=max_terms.max(1).min(dim as usize));
        let raw: Vec<(u32, F::Elem)> = (0..terms)
            .map(|_| (rng.gen_range(0..dim) as u32, self.field.random_nonzero(rng)))
            .collect();
        GradedVector::homogeneous(self.space, d, combine(&self.field, raw))
    }

    /// Human-readable form, e.g. `xy - yx`.
    pub fn render(&self, v: &Vector<F>) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let m = self.spec.generators();
        let minus_one = self.field.from_i64(-1);
        let mut out = String::new();
        for (d, comp) in v.components() {
            for (o, c) in comp {
                let word = Word::new(self.basis.word(d, *o).to_vec()).render(m);
                let (sign, body) = if *c == minus_one {
                    ("-", word)
                } else if self.field.is_one(c) {
                    ("+", word)
                } else {
                    ("+", format!("{}*{}", self.field.render(c), word))
                };
                if out.is_empty() {
                    if sign == "-" {
                        out.push('-');
                    }
                } else {
                    out.push_str(&format!(" {sign} "));
                }
                out.push_str(&body);
            }
        }
        out
    }
}

/// The derived series `A^[0] ⊇ A^[1] ⊇ …`, computed lazily per (level, degree).
#[derive(Debug)]
pub struct DerivedTower<'a, F: Field> {
    alg: &'a Algebra<F>,
    levels: Vec<GradedSubspace<F>>,
    computed: Vec<usize>,
}

impl<'a, F: Field> DerivedTower<'a, F> {
    pub fn new(alg: &'a Algebra<F>) -> Self {
        DerivedTower {
            alg,
            levels: Vec::new(),
            computed: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &'a Algebra<F> {
        self.alg
    }

    /// Highest level allocated so far (not necessarily computed).
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn computed_through(&self, level: usize) -> usize {
        self.computed.get(level).copied().unwrap_or(0)
    }

    /// `A^[level]`; degrees above [`Self::computed_through`] are still empty.
    pub fn level(&self, level: usize) -> &GradedSubspace<F> {
        &self.levels[level]
    }

    fn grow_to(&mut self, level: usize) {
        while self.levels.len() <= level {
            self.levels.push(self.alg.empty_subspace());
            self.computed.push(0);
        }
    }

    /// Installs a complete level (e.g. loaded from a cache).
    pub fn preload(&mut self, level: usize, subspace: GradedSubspace<F>) -> Result<()> {
        self.alg.check_subspace(&subspace)?;
        self.grow_to(level);
        self.levels[level] = subspace;
        self.computed[level] = self.alg.max_degree();
        Ok(())
    }

    /// Makes `A^[level]` available in degrees `1..=degree`.
    pub fn ensure(&mut self, level: usize, degree: usize) -> Result<()> {
        let degree = degree.min(self.alg.max_degree());
        self.grow_to(level);
        if self.computed[level] >= degree {
            return Ok(());
        }
        self.alg.check_budget(degree)?;
        if level == 0 {
            let one = self.alg.field.one();
            for d in self.computed[0] + 1..=degree {
                let full = Echelon::full(self.alg.dim(d) as usize, one.clone());
                self.levels[0].set_layer(d, full);
                self.computed[0] = d;
            }
            return Ok(());
        }
        self.ensure(level - 1, degree - 1)?;
        for f in self.computed[level] + 1..=degree {
            let cap = if self.computed[level - 1] >= f {
                self.levels[level - 1].dim_at(f)
            } else {
                self.alg.dim(f) as usize
            };
            let layer =
                self.alg
                    .bracket_layer(f, Echelon::default(), cap, &self.levels[level - 1]);
            self.levels[level].set_layer(f, layer);
            self.computed[level] = f;
        }
        Ok(())
    }

    pub fn into_levels(self) -> Vec<GradedSubspace<F>> {
        self.levels
    }
}

/// `A^[0], …, A^[i]`, each complete through `D`.
pub fn derived_power<F: Field>(alg: &Algebra<F>, i: usize) -> Result<DerivedTower<'_, F>> {
    let mut tower = DerivedTower::new(alg);
    for level in 0..=i {
        tower.ensure(level, alg.max_degree())?;
    }
    Ok(tower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{FieldSpec, PrimeField};

    fn alg(nil: &[u32], d: usize) -> Algebra<PrimeField> {
        let spec = AlgebraSpec::new(nil.to_vec(), FieldSpec::Prime(32003), d).unwrap();
        Algebra::new(spec, PrimeField::new(32003).unwrap()).unwrap()
    }

    #[test]
    fn product_examples() {
        let a = alg(&[2, 2], 6);
        let x = a.parse_word("x").unwrap();
        let yx = a.parse_word("yx").unwrap();
        let xy = a.parse_word("xy").unwrap();
        assert_eq!(a.mul(&x, &yx).unwrap(), a.parse_word("xyx").unwrap());
        assert!(a.mul(&x, &xy).unwrap().is_zero());
        assert!(a.mul(&x, &a.zero()).unwrap().is_zero());
    }

    #[test]
    fn bracket_examples() {
        let a = alg(&[2, 2], 6);
        let x = a.parse_word("x").unwrap();
        let y = a.parse_word("y").unwrap();
        let yx = a.parse_word("yx").unwrap();
        let expected = a.sub(&a.parse_word("xy").unwrap(), &yx).unwrap();
        assert_eq!(a.bracket(&x, &y).unwrap(), expected);
        assert_eq!(a.render(&expected), "xy - yx");
        assert!(a.bracket(&expected, &expected).unwrap().is_zero());
        assert_eq!(a.bracket(&x, &yx).unwrap(), a.parse_word("xyx").unwrap());
    }

    #[test]
    fn jordan_examples() {
        let a = alg(&[2, 2], 6);
        let x = a.parse_word("x").unwrap();
        let y = a.parse_word("y").unwrap();
        let sum = a.add(&a.parse_word("xy").unwrap(), &a.parse_word("yx").unwrap()).unwrap();
        assert_eq!(a.jordan(&x, &y).unwrap(), sum);
        assert!(a.jordan(&x, &x).unwrap().is_zero());
        assert_eq!(a.jordan(&x, &y).unwrap(), a.jordan(&y, &x).unwrap());
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let a = alg(&[3, 3], 4);
        let u = a.parse_word("xyx").unwrap();
        let v = a.parse_word("yy").unwrap();
        assert!(a.mul(&u, &v).unwrap().is_zero());
    }

    #[test]
    fn eval_f_examples() {
        let a = alg(&[2, 2], 8);
        let x = a.parse_word("x").unwrap();
        let y = a.parse_word("y").unwrap();
        assert_eq!(a.eval_f(1, &[x.clone(), y.clone()]).unwrap(), a.bracket(&x, &y).unwrap());
        let args = [x.clone(), y.clone(), a.parse_word("yx").unwrap(), a.parse_word("xy").unwrap()];
        let expected = a
            .bracket(&a.eval_f(1, &args[..2]).unwrap(), &a.eval_f(1, &args[2..]).unwrap())
            .unwrap();
        assert_eq!(a.eval_f(2, &args).unwrap(), expected);
        assert!(a.eval_f(2, &[x.clone(), a.zero(), y.clone(), x.clone()]).unwrap().is_zero());
        assert!(matches!(
            a.eval_f(2, &args[..3]),
            Err(Error::ArityMismatch { expected: 4, got: 3, .. })
        ));
        assert!(matches!(a.eval_f(0, &[]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn derived_dims_alternating() {
        let a = alg(&[2, 2], 5);
        let tower = derived_power(&a, 2).unwrap();
        assert_eq!(tower.level(0).dim_vector(), vec![2, 2, 2, 2, 2]);
        assert_eq!(tower.level(1).dims(), vec![(2, 1), (3, 2), (4, 1), (5, 2)]);
        assert_eq!(tower.level(2).dims(), vec![(5, 2)]);
    }

    #[test]
    fn third_derived_power_starts_at_ten() {
        let a = alg(&[2, 2], 10);
        let tower = derived_power(&a, 3).unwrap();
        assert_eq!(tower.level(3).dims(), vec![(10, 1)]);
        let expected = a
            .sub(
                &a.parse_word("xyxyxyxyxy").unwrap(),
                &a.parse_word("yxyxyxyxyx").unwrap(),
            )
            .unwrap();
        assert!(tower.level(3).contains(&expected).unwrap());
    }

    #[test]
    fn one_generator_is_commutative() {
        let a = alg(&[5], 6);
        let tower = derived_power(&a, 1).unwrap();
        assert!(tower.level(1).is_zero());
    }

    #[test]
    fn ideal_closure_examples() {
        let a = alg(&[2, 2], 6);
        assert!(a.ideal_closure(&a.empty_subspace()).unwrap().is_zero());
        let c = a.bracket(&a.parse_word("x").unwrap(), &a.parse_word("y").unwrap()).unwrap();
        let s = a.span(&[c]).unwrap();
        let i = a.ideal_closure(&s).unwrap();
        assert_eq!(i.dim_vector(), vec![0, 1, 2, 2, 2, 2]);
        let ii = a.ideal_closure(&i).unwrap();
        assert!((1..=6).all(|d| ii.equal_at(&i, d).unwrap()));
    }

    #[test]
    fn lie_ideal_closure_examples() {
        let a = alg(&[2, 2], 8);
        assert!(a.lie_ideal_closure(&a.empty_subspace()).unwrap().is_zero());
        let tower = derived_power(&a, 2).unwrap();
        for i in 1..=2 {
            let u = a.lie_ideal_closure(tower.level(i)).unwrap();
            assert!((1..=8).all(|d| u.equal_at(tower.level(i), d).unwrap()));
        }
        let s = a.span(&[a.parse_word("xyx").unwrap()]).unwrap();
        assert!(s.is_subspace_of(&a.lie_ideal_closure(&s).unwrap()).unwrap());
    }

    #[test]
    fn lie_subalgebra_closure_examples() {
        let a = alg(&[2, 2], 6);
        assert!(a.lie_subalgebra_closure(&[]).unwrap().is_zero());
        let gens = [a.parse_word("x").unwrap(), a.parse_word("y").unwrap()];
        let l = a.lie_subalgebra_closure(&gens).unwrap();
        assert_eq!(l.dim_at(1), 2);
        assert_eq!(l.dim_at(2), 1);
        // inhomogeneous generator is split
        let mixed = a.add(&gens[0], &a.parse_word("xy").unwrap()).unwrap();
        let l = a.lie_subalgebra_closure(&[mixed]).unwrap();
        // x, xy, [x, xy] = -xyx, [xy, xyx] = xyxyx
        assert_eq!(l.dims(), vec![(1, 1), (2, 1), (3, 1), (5, 1)]);
    }

    #[test]
    fn sweep_is_a_fixpoint() {
        let a = alg(&[3, 3], 7);
        let v = a.sub(&a.parse_word("xxy").unwrap(), &a.parse_word("yxx").unwrap()).unwrap();
        let s = a.span(&[v, a.parse_word("y").unwrap()]).unwrap();
        let l = a.lie_subalgebra_closure(&s.basis_vectors()).unwrap();
        let again = a.lie_subalgebra_closure(&l.basis_vectors()).unwrap();
        assert!((1..=7).all(|d| again.equal_at(&l, d).unwrap()));
        let i = a.ideal_closure(&s).unwrap();
        assert!(a.ideal_closure(&i).unwrap().is_subspace_of(&i).unwrap());
        let u = a.lie_ideal_closure(&s).unwrap();
        assert!(a.lie_ideal_closure(&u).unwrap().is_subspace_of(&u).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = alg(&[2, 2, 2], 8).with_budget(100);
        assert!(matches!(
            derived_power(&a, 1),
            Err(Error::BudgetExceeded { degree: 7, dim: 192, budget: 100 })
        ));
        let mut tower = DerivedTower::new(&a);
        tower.ensure(1, 6).unwrap();
        assert_eq!(tower.computed_through(1), 6);
    }

    #[test]
    fn lazy_tower_matches_eager() {
        let a = alg(&[3, 3], 9);
        let eager = derived_power(&a, 2).unwrap();
        let mut lazy = DerivedTower::new(&a);
        for d in 1..=9 {
            lazy.ensure(2, d).unwrap();
        }
        lazy.ensure(1, 9).unwrap();
        for l in 1..=2 {
            assert!((1..=9).all(|d| lazy.level(l).equal_at(eager.level(l), d).unwrap()));
        }
    }
}
