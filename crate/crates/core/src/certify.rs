//! Nilpotency of `A / id(A^[k])`, finite generating sets of `A^[i]`, and
//! the property checks that back them.
//!
//! The certification pipeline for `A^[i]`:
//!
//! 1. find the least degree `n` with `A_n ⊆ id(A^[i+2])`;
//! 2. take the canonical basis of `A^[i]` in degrees `1..=2n-2`;
//! 3. close it under the bracket and compare with `A^[i]` in every degree
//!    up to `D`, which must be at least `2n - 1`.
//!
//! In degrees `m ≥ 2n - 1` every split `m = p + q` has `p ≥ n` or `q ≥ n`,
//! and then `[A_p, A_q] ⊆ A^[i+1]`; that containment is checked as well.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, DerivedTower, Vector};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, GradedSubspace};
use crate::scalar::Field;
use crate::words::Word;

pub const CERTIFICATE_VERSION: u32 = 1;

/// Dimensions of `B_k = A / id(A^[k])` per degree, and where they vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub k: usize,
    /// Least degree `n` with `A_n ⊆ id(A^[k])`, if reached by `D`.
    pub n: Option<usize>,
    /// `dim (B_k)_d` for `d = 1..=checked_through`.
    pub quotient_dims: Vec<u64>,
    /// `dim B_k`: the sum of the quotient dimensions below `n`.
    pub total_dim: u64,
    /// Last degree at which the ideal was actually computed.
    pub checked_through: usize,
}

/// Least degree at which `id(A^[k])` fills the whole component, and the
/// check that it then stays full through `D` (or the work budget).
pub fn nilpotency_index<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    k: usize,
) -> Result<NilpotencyReport> {
    let alg = tower.algebra();
    let mut n = None;
    let mut quotient_dims = Vec::new();
    let mut prev: Option<Echelon<F::Elem>> = None;
    let mut checked_through = 0;
    for d in 1..=alg.max_degree() {
        let seed = if n.is_none() {
            tower.ensure(k, d)?;
            tower.level(k).layer(d).clone()
        } else {
            // A_d = A_1·A_{d-1}; the sweep alone must fill A_d
            if alg.check_budget(d).is_err() {
                break;
            }
            Echelon::default()
        };
        let layer = alg.ideal_layer(d, seed, prev.as_ref());
        let dim = alg.dim(d);
        let missing = dim - layer.rank() as u64;
        if n.is_some() && missing != 0 {
            return Err(Error::InternalSoundnessFailure(format!(
                "id(A^[{k}]) fills A_{} but not A_{d}",
                n.unwrap_or_default()
            )));
        }
        if n.is_none() && missing == 0 {
            n = Some(d);
        }
        quotient_dims.push(missing);
        checked_through = d;
        prev = Some(layer);
    }
    let below = n.map_or(quotient_dims.len(), |n| n - 1);
    let total_dim = quotient_dims[..below.min(quotient_dims.len())].iter().sum();
    Ok(NilpotencyReport {
        k,
        n,
        quotient_dims,
        total_dim,
        checked_through,
    })
}

/// Canonical basis of `A^[i]` in degrees `1..=2n-2`; for `i = 0`, the
/// nonzero generators.
pub fn generating_set<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    i: usize,
    n: usize,
) -> Result<Vec<Vector<F>>> {
    let alg = tower.algebra();
    let bound = (2 * n).saturating_sub(2);
    if bound > alg.max_degree() {
        return Err(Error::BoundExceedsTruncation {
            bound,
            max_degree: alg.max_degree(),
        });
    }
    if i == 0 {
        return Ok((0..alg.spec().generators())
            .map(|j| alg.generator(j))
            .filter(|g| !g.is_zero())
            .collect());
    }
    tower.ensure(i, bound)?;
    Ok((1..=bound)
        .flat_map(|d| tower.level(i).basis_at(d))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecEcho {
    pub m: usize,
    pub nil: Vec<u32>,
    pub field: String,
    pub max_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub word: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub degree: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DimTables {
    #[serde(rename = "A_i")]
    pub derived: Vec<usize>,
    pub closure: Vec<usize>,
}

/// `[A_p, A_q] ⊆ A^[i+1]` for `p ≥ n`, `p + q ∈ [2n-1, D]`, on basis pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSplitReport {
    pub degrees: (usize, usize),
    pub pairs_checked: u64,
    pub violations: u64,
}

/// Record of one run of the generation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub version: u32,
    pub spec: SpecEcho,
    pub i: usize,
    pub n: Option<usize>,
    pub bound: Option<usize>,
    pub generators: Vec<Generator>,
    pub dims: DimTables,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub nilpotency: Option<NilpotencyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_split: Option<DegreeSplitReport>,
    pub budget: u64,
    pub seed: u64,
    pub timings_ms: BTreeMap<String, u64>,
}

impl Certificate {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serialises");
        s.push('\n');
        s
    }
}

fn echo<F: Field>(alg: &Algebra<F>) -> SpecEcho {
    let spec = alg.spec();
    SpecEcho {
        m: spec.generators(),
        nil: spec.nil().to_vec(),
        field: spec.field().to_string(),
        max_degree: spec.max_degree(),
    }
}

fn render_generator<F: Field>(alg: &Algebra<F>, v: &Vector<F>) -> Generator {
    let degree = v.degree().unwrap_or(0);
    let terms = v
        .components()
        .flat_map(|(d, comp)| {
            comp.iter().map(move |(o, c)| Term {
                word: Word::new(alg.basis().word(d, *o).to_vec()).render(alg.spec().generators()),
                coeff: alg.field().render(c),
            })
        })
        .collect();
    Generator { degree, terms }
}

struct Stopwatch(BTreeMap<String, u64>, Instant);

impl Stopwatch {
    fn new() -> Self {
        Stopwatch(BTreeMap::new(), Instant::now())
    }

    fn lap(&mut self, phase: &str) {
        self.0.insert(phase.to_string(), self.1.elapsed().as_millis() as u64);
        self.1 = Instant::now();
    }
}

/// Runs the generation pipeline for `A^[i]`, `i ≥ 1`.
///
/// Outcomes that depend on the truncation or the work budget come back as
/// an `INCONCLUSIVE` certificate; `Err` is reserved for invalid input and
/// for internal inconsistencies.
pub fn certify_generation<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    i: usize,
    seed: u64,
) -> Result<Certificate> {
    if i == 0 {
        return Err(Error::InvalidSpec("certification needs i >= 1".into()));
    }
    let alg = tower.algebra();
    let max_degree = alg.max_degree();
    let mut clock = Stopwatch::new();
    let mut cert = Certificate {
        version: CERTIFICATE_VERSION,
        spec: echo(alg),
        i,
        n: None,
        bound: None,
        generators: Vec::new(),
        dims: DimTables::default(),
        verdict: Verdict::Inconclusive,
        reason: None,
        nilpotency: None,
        degree_split: None,
        budget: alg.budget(),
        seed,
        timings_ms: BTreeMap::new(),
    };
    let inconclusive = |mut cert: Certificate, reason: String, clock: Stopwatch| {
        cert.reason = Some(reason);
        cert.timings_ms = clock.0;
        Ok(cert)
    };

    let k = i + 2;
    let report = match nilpotency_index(tower, k) {
        Ok(r) => r,
        Err(e @ Error::BudgetExceeded { .. }) => {
            return inconclusive(cert, format!("nilpotency index of B_{k}: {e}"), clock)
        }
        Err(e) => return Err(e),
    };
    clock.lap("nilpotency");
    cert.n = report.n;
    cert.nilpotency = Some(report.clone());
    let Some(n) = report.n else {
        let reason = format!(
            "A/id(A^[{k}]) is not nilpotent through degree {}",
            report.checked_through
        );
        return inconclusive(cert, reason, clock);
    };
    let bound = 2 * n - 2;
    cert.bound = Some(bound);
    if bound > max_degree {
        let reason = format!("bound {bound} exceeds max degree {max_degree}");
        return inconclusive(cert, reason, clock);
    }
    if max_degree < 2 * n - 1 {
        let reason = format!(
            "max degree {max_degree} does not reach 2n-1 = {}; no degree beyond the bound is exercised",
            2 * n - 1
        );
        return inconclusive(cert, reason, clock);
    }

    if let Err(e) = tower.ensure(i, max_degree) {
        return match e {
            Error::BudgetExceeded { .. } => inconclusive(cert, format!("A^[{i}]: {e}"), clock),
            e => Err(e),
        };
    }
    clock.lap("derived_power");
    let gens = generating_set(tower, i, n)?;
    cert.generators = gens.iter().map(|g| render_generator(alg, g)).collect();

    let target = tower.level(i);
    let caps = target.dim_vector();
    let closure = alg.lie_subalgebra_closure_capped(&gens, &caps)?;
    clock.lap("closure");
    if !closure.is_subspace_of(target)? {
        return Err(Error::InternalSoundnessFailure(format!(
            "Lie closure of the generators leaves A^[{i}]"
        )));
    }
    cert.dims = DimTables {
        derived: caps.clone(),
        closure: closure.dim_vector(),
    };
    if let Some(d) = (1..=max_degree).find(|&d| closure.dim_at(d) != caps[d - 1]) {
        let reason = format!(
            "closure has dimension {} but A^[{i}] has {} at degree {d}",
            closure.dim_at(d),
            caps[d - 1]
        );
        return inconclusive(cert, reason, clock);
    }

    let split = degree_split_check(tower, i, n)?;
    clock.lap("degree_split");
    if split.violations > 0 {
        return Err(Error::InternalSoundnessFailure(format!(
            "{} basis brackets of degree >= 2n-1 fall outside A^[{}]",
            split.violations,
            i + 1
        )));
    }
    cert.degree_split = Some(split);
    cert.verdict = Verdict::Verified;
    cert.timings_ms = clock.0;
    Ok(cert)
}

/// For every degree `m ∈ [2n-1, D]` and split `m = p + q` with `p ≥ n`,
/// checks `[a, b] ∈ A^[i+1]` on all basis words `a ∈ A_p`, `b ∈ A_q`.
pub fn degree_split_check<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    i: usize,
    n: usize,
) -> Result<DegreeSplitReport> {
    let alg = tower.algebra();
    let max_degree = alg.max_degree();
    let lo = 2 * n - 1;
    tower.ensure(i + 1, max_degree)?;
    let upper = tower.level(i + 1);
    let one = alg.field().one();
    let mut pairs_checked = 0;
    let mut violations = 0;
    for m in lo..=max_degree {
        for p in n..m {
            let q = m - p;
            for a in 0..alg.dim(p) as u32 {
                for b in 0..alg.dim(q) as u32 {
                    let br = alg.bracket_homogeneous(p, &[(a, one.clone())], q, &[(b, one.clone())]);
                    pairs_checked += 1;
                    if !upper.contains_homogeneous(m, &br) {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(DegreeSplitReport {
        degrees: (lo, max_degree),
        pairs_checked,
        violations,
    })
}

/// Outcome of one property suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub trials: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyResult {
    fn new(property: impl Into<String>) -> Self {
        PropertyResult {
            property: property.into(),
            trials: 0,
            violations: 0,
            counterexample: None,
            note: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.violations += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Degrees `(d_1, …, d_count)`, each at least 1, summing to at most `D`.
fn random_degrees<R: Rng>(rng: &mut R, count: usize, max_degree: usize) -> Option<Vec<usize>> {
    if count > max_degree {
        return None;
    }
    let mut degrees = vec![1; count];
    let extra = rng.gen_range(0..=max_degree - count);
    for _ in 0..extra {
        let j = rng.gen_range(0..count);
        degrees[j] += 1;
    }
    Some(degrees)
}

const MAX_TERMS: usize = 4;

/// Bilinearity-free identities of an associative algebra, on random
/// homogeneous arguments: `xy = ½([x,y] + x∘y)`,
/// `[z, x∘y] = [z,x]∘y + [z,y]∘x`, `[z, x∘y] = [z∘x, y] + [z∘y, x]`,
/// antisymmetry and Jacobi.
pub fn identity_check<F: Field>(
    alg: &Algebra<F>,
    trials: usize,
    seed: u64,
) -> Result<Vec<PropertyResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<PropertyResult> = [
        "product_from_bracket_and_jordan",
        "bracket_over_jordan_left",
        "bracket_over_jordan_right",
        "antisymmetry",
        "jacobi",
    ]
    .into_iter()
    .map(PropertyResult::new)
    .collect();
    let half = alg.field().half();
    for _ in 0..trials {
        let Some(degrees) = random_degrees(&mut rng, 3, alg.max_degree()) else {
            for r in &mut results {
                r.note = Some("max degree below 3; no triples".into());
            }
            break;
        };
        let [x, y, z] = [0, 1, 2].map(|j| alg.random_homogeneous(&mut rng, degrees[j], MAX_TERMS));
        let show = || {
            format!(
                "x = {}, y = {}, z = {}",
                alg.render(&x),
                alg.render(&y),
                alg.render(&z)
            )
        };

        let xy = alg.mul(&x, &y)?;
        let b_xy = alg.bracket(&x, &y)?;
        let j_xy = alg.jordan(&x, &y)?;
        let rhs = alg.scale(&half, &alg.add(&b_xy, &j_xy)?);
        results[0].record(xy == rhs, show);

        let lhs = alg.bracket(&z, &j_xy)?;
        let rhs = alg.add(
            &alg.jordan(&alg.bracket(&z, &x)?, &y)?,
            &alg.jordan(&alg.bracket(&z, &y)?, &x)?,
        )?;
        results[1].record(lhs == rhs, show);

        let rhs = alg.add(
            &alg.bracket(&alg.jordan(&z, &x)?, &y)?,
            &alg.bracket(&alg.jordan(&z, &y)?, &x)?,
        )?;
        results[2].record(lhs == rhs, show);

        let b_yx = alg.bracket(&y, &x)?;
        results[3].record(alg.add(&b_xy, &b_yx)?.is_zero(), show);

        let jacobi = alg.add(
            &alg.add(
                &alg.bracket(&x, &alg.bracket(&y, &z)?)?,
                &alg.bracket(&y, &alg.bracket(&z, &x)?)?,
            )?,
            &alg.bracket(&z, &b_xy)?,
        )?;
        results[4].record(jacobi.is_zero(), show);
    }
    Ok(results)
}

/// Full check that `[A_d, U_e] ⊆ U_{d+e}` on basis elements.
pub fn lie_ideal_violation<F: Field>(
    alg: &Algebra<F>,
    u: &GradedSubspace<F>,
) -> Result<Option<String>> {
    alg.check_budget(alg.max_degree())?;
    let one = alg.field().one();
    for e in 1..alg.max_degree() {
        for row in u.layer(e).rows() {
            for d in 1..=alg.max_degree() - e {
                for w in 0..alg.dim(d) as u32 {
                    let br = alg.bracket_homogeneous(d, &[(w, one.clone())], e, row);
                    if !u.contains_homogeneous(d + e, &br) {
                        let word = Word::new(alg.basis().word(d, w).to_vec());
                        return Ok(Some(format!(
                            "[{}, {}] not in U",
                            word.render(alg.spec().generators()),
                            alg.render(&crate::GradedVector::homogeneous(alg.space(), e, row.clone()))
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// For a Lie ideal `U`: `[id([U,U]), A] ⊆ U`, checked on every basis
/// element of `id([U,U])` against every basis word.
pub fn lemma1_check<F: Field>(
    alg: &Algebra<F>,
    u: &GradedSubspace<F>,
    label: &str,
) -> Result<PropertyResult> {
    if u.space() != alg.space() {
        return Err(Error::SpecMismatch);
    }
    if let Some(witness) = lie_ideal_violation(alg, u)? {
        return Err(Error::NotALieIdeal(witness));
    }
    let mut brackets = alg.empty_subspace();
    for f in 2..=alg.max_degree() {
        let layer = alg.bracket_layer(f, Echelon::default(), alg.dim(f) as usize, u);
        brackets.set_layer(f, layer);
    }
    let ideal = alg.ideal_closure(&brackets)?;
    let mut result = PropertyResult::new(format!("lemma1[{label}]"));
    let one = alg.field().one();
    for e in 1..alg.max_degree() {
        for row in ideal.layer(e).rows() {
            for d in 1..=alg.max_degree() - e {
                for a in 0..alg.dim(d) as u32 {
                    let br = alg.bracket_homogeneous(e, row, d, &[(a, one.clone())]);
                    let ok = u.contains_homogeneous(d + e, &br);
                    result.record(ok, || {
                        format!(
                            "[{}, {}] not in U",
                            alg.render(&crate::GradedVector::homogeneous(alg.space(), e, row.clone())),
                            Word::new(alg.basis().word(d, a).to_vec()).render(alg.spec().generators())
                        )
                    });
                }
            }
        }
    }
    result.note = Some(format!(
        "dim U = {}, dim id([U,U]) = {}",
        u.dim_vector().iter().sum::<usize>(),
        ideal.dim_vector().iter().sum::<usize>()
    ));
    Ok(result)
}

/// `lie_ideal_closure(span{v})` for a random homogeneous `v` of degree at
/// most `max(1, D/2)`.
pub fn random_lie_ideal<F: Field, R: Rng>(
    alg: &Algebra<F>,
    rng: &mut R,
) -> Result<(Vector<F>, GradedSubspace<F>)> {
    let top = (alg.max_degree() / 2).max(1);
    let d = rng.gen_range(1..=top);
    let v = alg.random_homogeneous(rng, d, MAX_TERMS);
    let u = alg.lie_ideal_closure(&alg.span(std::slice::from_ref(&v))?)?;
    Ok((v, u))
}

/// `[id([U,U]), A] ⊆ U` for `A^[1]`, `A^[2]` and `random` seeded random Lie
/// ideals.
pub fn lemma1_suite<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    random: usize,
    seed: u64,
) -> Result<Vec<PropertyResult>> {
    let alg = tower.algebra();
    let mut out = Vec::new();
    for level in 1..=2 {
        tower.ensure(level, alg.max_degree())?;
        out.push(lemma1_check(alg, tower.level(level), &format!("A^[{level}]"))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combined = PropertyResult::new("lemma1[random Lie ideals]");
    for t in 0..random {
        let (v, u) = random_lie_ideal(alg, &mut rng)?;
        let r = lemma1_check(alg, &u, "random")?;
        combined.trials += r.trials;
        combined.violations += r.violations;
        if combined.counterexample.is_none() {
            combined.counterexample = r
                .counterexample
                .map(|c| format!("ideal #{t} generated by {}: {c}", alg.render(&v)));
        }
    }
    combined.note = Some(format!("{random} ideals"));
    out.push(combined);
    Ok(out)
}

/// `f_k(v_1, …, v_{2^k}) ∈ id(A^[k])` (and in fact `∈ A^[k]`) for random
/// homogeneous arguments of total degree at most `D`.
pub fn fk_identity_check<F: Field>(
    tower: &mut DerivedTower<'_, F>,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<PropertyResult> {
    let alg = tower.algebra();
    let mut result = PropertyResult::new(format!("f_{k} in id(A^[{k}])"));
    let arity = 1usize << k;
    if arity > alg.max_degree() {
        result.note = Some(format!("2^{k} arguments do not fit below degree {}", alg.max_degree()));
        return Ok(result);
    }
    tower.ensure(k, alg.max_degree())?;
    let level = tower.level(k);
    let ideal = alg.ideal_closure(level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside_level = 0;
    for _ in 0..trials {
        let degrees = random_degrees(&mut rng, arity, alg.max_degree()).expect("arity fits");
        let args: Vec<Vector<F>> = degrees
            .iter()
            .map(|&d| alg.random_homogeneous(&mut rng, d, MAX_TERMS))
            .collect();
        let value = alg.eval_f(k, &args)?;
        if !level.contains(&value)? {
            outside_level += 1;
        }
        let ok = ideal.contains(&value)?;
        result.record(ok, || {
            let shown: Vec<String> = args.iter().map(|a| alg.render(a)).collect();
            format!("f_{k}({}) = {}", shown.join(", "), alg.render(&value))
        });
    }
    if outside_level > 0 {
        // f_k lands in A^[k] itself; anything else is a defect
        return Err(Error::InternalSoundnessFailure(format!(
            "{outside_level} values of f_{k} outside A^[{k}]"
        )));
    }
    Ok(result)
}
