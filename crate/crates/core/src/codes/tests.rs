use std::collections::HashSet;

use super::*;
use crate::gf::{FieldSpec, Tower};

fn spec(q0: u64) -> FieldSpec {
    FieldSpec::for_order(q0).unwrap()
}

fn cr(code: &LinearCode) -> CRCertificate {
    covering_radius_exact(code, &CoverOptions::default()).unwrap()
}

#[test]
fn full_code_parameters() {
    for (q0, s, n) in [(7, 1, 8), (7, 3, 344), (23, 1, 24), (31, 1, 32), (47, 1, 48)] {
        let c = build_full(spec(q0), s).unwrap();
        assert_eq!(c.len(), n);
        assert_eq!(c.redundancy(), 2 * s as usize);
        assert_eq!(dimension(&c), n - 2 * s as usize);
        assert_eq!(c.kind(), CodeKind::Full);
    }
}

#[test]
fn twisted_half_parameters() {
    for (q0, s, n) in [(7, 1, 4), (7, 3, 172), (23, 1, 12), (31, 1, 16), (47, 1, 24)] {
        let c = build_twisted_half(spec(q0), s).unwrap();
        assert_eq!(c.len(), n);
        assert_eq!(dimension(&c), n - 2 * s as usize);
    }
}

#[test]
fn twisted_half_set_splits_h() {
    let tower = Tower::new(spec(7), 3).unwrap();
    let fq2 = tower.fq2();
    let (ell, half) = twisted_half_set(&tower).unwrap();
    assert_eq!(ell, 3);
    let half: HashSet<Elt> = half.into_iter().collect();
    assert_eq!(half.len(), 172);
    assert!(half.contains(&fq2.one()));
    assert!(!half.contains(&fq2.from_int(-1)));
    let negs: HashSet<Elt> = half.iter().map(|x| fq2.neg(x)).collect();
    assert!(half.is_disjoint(&negs));
    let h: HashSet<Elt> = fq2.subgroup(344).unwrap().iter().collect();
    let union: HashSet<Elt> = half.union(&negs).copied().collect();
    assert_eq!(union, h);
}

#[test]
fn twisted_half_refuses_class_s() {
    // 9 ≡ 1 mod 8
    assert!(matches!(
        build_twisted_half(spec(9), 1),
        Err(CodeError::NotInSEll(9))
    ));
}

#[test]
fn prime_power_base_field() {
    // 3^... has no odd power ≡ 7 mod 8, but the full code is still defined
    let c = build_full(spec(9), 1).unwrap();
    assert_eq!(c.len(), 10);
    assert_eq!(dimension(&c), 8);
}

#[test]
fn covering_radius_small() {
    let full = build_full(spec(7), 1).unwrap();
    let half = build_twisted_half(spec(7), 1).unwrap();
    let a = cr(&full);
    let b = cr(&half);
    assert_eq!((a.rho, b.rho), (2, 2));
    assert_eq!(a.histogram.iter().sum::<u64>(), 49);
    assert_eq!(b.histogram.iter().sum::<u64>(), 49);
    assert!(express(&full, &a.deepest_syndrome, 1).is_none());
    assert!(express(&full, &a.deepest_syndrome, 2).is_some());
}

#[test]
fn covering_radius_q0_7_s_3() {
    let full = build_full(spec(7), 3).unwrap();
    let half = build_twisted_half(spec(7), 3).unwrap();
    let opts = CoverOptions {
        workers: 4,
        ..Default::default()
    };
    let a = covering_radius_exact(&full, &opts).unwrap();
    let b = covering_radius_exact(&half, &opts).unwrap();
    assert_eq!((a.rho, b.rho), (3, 3));
    assert_eq!(a.histogram.iter().sum::<u64>(), 7u64.pow(6));
    assert!(express(&full, &a.deepest_syndrome, 2).is_none());
    let sum = express(&full, &a.deepest_syndrome, 3).unwrap();
    assert_eq!(sum.len(), 3);
}

#[test]
fn worker_count_does_not_change_certificate() {
    let c = build_full(spec(23), 1).unwrap();
    let one = cr(&c);
    for workers in [2, 3, 8] {
        let opts = CoverOptions {
            workers,
            ..Default::default()
        };
        assert_eq!(covering_radius_exact(&c, &opts).unwrap(), one);
    }
}

#[test]
fn invariant_under_permutation_and_scaling() {
    let c = build_twisted_half(spec(23), 1).unwrap();
    let base = cr(&c).rho;
    let n = c.len();
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..5 {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, (next() % (i as u64 + 1)) as usize);
        }
        let scales: Vec<u32> = (0..n).map(|_| 1 + (next() % 22) as u32).collect();
        let other = c.permuted_and_scaled(&perm, &scales);
        assert_eq!(cr(&other).rho, base);
    }
}

#[test]
fn memory_budget_refusal() {
    let c = build_full(spec(23), 3).unwrap();
    match covering_radius_exact(&c, &CoverOptions::default()) {
        Err(CodeError::MemoryBudget { required, budget }) => {
            assert_eq!(required, 5 * 23u128.pow(6));
            assert_eq!(budget, DEFAULT_MEMORY_BUDGET);
        }
        other => panic!("expected refusal, got {other:?}"),
    }
}

#[test]
fn rho_cap_is_enforced() {
    let c = build_full(spec(7), 3).unwrap();
    let opts = CoverOptions {
        rho_cap: 2,
        ..Default::default()
    };
    assert_eq!(
        covering_radius_exact(&c, &opts),
        Err(CodeError::RhoCap(2))
    );
}

#[test]
fn min_distances() {
    assert_eq!(min_distance_small(&build_full(spec(7), 1).unwrap(), 1000), Ok(2));
    for (q0, s) in [(7, 1), (7, 3), (23, 1), (31, 1), (47, 1)] {
        let c = build_twisted_half(spec(q0), s).unwrap();
        let d = min_distance_small(&c, 1000).unwrap();
        assert!(d == 3 || d == 4, "({q0},{s}) gave {d}");
    }
    let big = build_twisted_half(spec(23), 3).unwrap();
    assert!(matches!(
        min_distance_small(&big, 100),
        Err(CodeError::DistanceCap { .. })
    ));
}

#[test]
fn twisted_columns_pairwise_independent() {
    for (q0, s) in [(7, 3), (23, 1), (47, 1)] {
        let c = build_twisted_half(spec(q0), s).unwrap();
        let f = c.scalars();
        let mut seen = HashSet::new();
        for col in c.columns() {
            let lead = *col.iter().find(|&&x| x != 0).unwrap();
            let inv = f.inv(lead);
            let v: Vec<u32> = col.iter().map(|&x| f.mul(inv, x)).collect();
            assert!(seen.insert(v));
        }
    }
}

#[test]
fn report_and_quasi_perfect() {
    let half = build_twisted_half(spec(7), 1).unwrap();
    let rep = CodeReport::compute(&half, &CoverOptions::default(), 1000).unwrap();
    assert_eq!((rep.n, rep.dimension, rep.rho), (4, 2, 2));
    assert!(rep.quasi_perfect);
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["kind"], "twisted_half");
    assert_eq!(json["histogram"].as_array().unwrap().len(), 3);

    let half3 = build_twisted_half(spec(7), 3).unwrap();
    let rep3 = CodeReport::compute(&half3, &CoverOptions::default(), 1000).unwrap();
    assert_eq!(rep3.rho, 3);
    assert!(!rep3.quasi_perfect);
}

#[test]
fn csv_layout() {
    let c = build_full(spec(7), 1).unwrap();
    let mut buf = Vec::new();
    c.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
    // the first column is φ(1) = (1, 0)
    assert!(rows[0].starts_with("1,"));
    assert!(rows[1].starts_with("0,"));
}
