mod common;

use common::{Oracle, SUITE};
use nilpow::certify::nilpotency_index;
use nilpow::{derived_power, Algebra, AlgebraSpec, DerivedTower, FieldSpec, PrimeField, Rationals};

fn fp(nil: &[u32], d: usize) -> Algebra<PrimeField> {
    let spec = AlgebraSpec::new(nil.to_vec(), FieldSpec::default(), d).unwrap();
    Algebra::new(spec, PrimeField::new(32003).unwrap()).unwrap()
}

#[test]
fn dims_match_dense_engine_through_degree_6() {
    for nil in SUITE {
        let oracle = Oracle::new(nil, 6);
        let levels = oracle.derived(2);
        let ideal = oracle.ideal(&levels[1]);

        let alg = fp(nil, 6);
        let tower = derived_power(&alg, 2).unwrap();
        let closure = alg.ideal_closure(tower.level(1)).unwrap();
        for d in 1..=6 {
            assert_eq!(alg.dim(d) as usize, oracle.dim(d), "{nil:?} A_{d}");
            for j in 1..=2 {
                assert_eq!(
                    tower.level(j).dim_at(d),
                    levels[j][d].len(),
                    "{nil:?} A^[{j}]_{d}"
                );
            }
            assert_eq!(closure.dim_at(d), ideal[d].len(), "{nil:?} id(A^[1])_{d}");
        }
    }
}

#[test]
fn normal_words_match_enumeration() {
    for nil in SUITE {
        let oracle = Oracle::new(nil, 7);
        let alg = fp(nil, 7);
        for d in 1..=7 {
            let words: Vec<Vec<u8>> = alg
                .basis()
                .normal_words(d)
                .unwrap()
                .into_iter()
                .map(|w| w.letters().to_vec())
                .collect();
            assert_eq!(words, oracle.words[d], "{nil:?} degree {d}");
        }
    }
}

#[test]
fn small_values_for_two_square_zero_generators() {
    let oracle = Oracle::new(&[2, 2], 12);
    assert!((1..=12).all(|d| oracle.dim(d) == 2));
    let levels = oracle.derived(3);
    let a1: Vec<usize> = (2..=5).map(|d| levels[1][d].len()).collect();
    assert_eq!(a1, [1, 2, 1, 2]);
    let first = (1..=12).find(|&d| !levels[3][d].is_empty()).unwrap();
    assert_eq!((first, levels[3][first].len()), (10, 1));
    assert_eq!(oracle.nilpotency(1), Some((3, 3)));
    assert_eq!(oracle.nilpotency(3).map(|x| x.0), Some(11));

    let alg = fp(&[2, 2], 12);
    let mut tower = DerivedTower::new(&alg);
    let r1 = nilpotency_index(&mut tower, 1).unwrap();
    assert_eq!((r1.n, r1.total_dim), (Some(3), 3));
    let r3 = nilpotency_index(&mut tower, 3).unwrap();
    assert_eq!(r3.n, Some(11));
    tower.ensure(3, 12).unwrap();
    for d in 1..=12 {
        assert_eq!(tower.level(3).dim_at(d), levels[3][d].len());
    }
}

#[test]
fn nilpotency_index_matches_dense_engine() {
    for (nil, d, k) in [(&[2u32, 2][..], 8, 2), (&[3, 3], 8, 1), (&[2, 2, 2], 6, 1), (&[4], 6, 1)] {
        let oracle = Oracle::new(nil, d);
        let alg = fp(nil, d);
        let mut tower = DerivedTower::new(&alg);
        let report = nilpotency_index(&mut tower, k).unwrap();
        let expected = oracle.nilpotency(k);
        assert_eq!(report.n, expected.map(|x| x.0), "{nil:?} k={k}");
        if let Some((_, total)) = expected {
            assert_eq!(report.total_dim as usize, total, "{nil:?} k={k}");
        }
    }
}

#[test]
fn rational_dims_agree_with_prime_field() {
    for nil in SUITE {
        let spec = AlgebraSpec::new(nil.to_vec(), FieldSpec::Rationals, 6).unwrap();
        let q = Algebra::new(spec, Rationals).unwrap();
        let p = fp(nil, 6);
        let tq = derived_power(&q, 2).unwrap();
        let tp = derived_power(&p, 2).unwrap();
        for j in 0..=2 {
            assert_eq!(tq.level(j).dim_vector(), tp.level(j).dim_vector(), "{nil:?} level {j}");
        }
    }
}
