use super::*;
use crate::gf::{Embedding, FieldSpec, Tower};

fn tower(q0: u64, s: u32) -> Tower {
    Tower::new(FieldSpec::for_order(q0).unwrap(), s).unwrap()
}

fn quiet() -> ScanOptions {
    ScanOptions {
        timing: false,
        ..Default::default()
    }
}

#[test]
fn s_equals_one_has_no_npi() {
    let t = tower(7, 1);
    let r = in_i(&t, &quiet()).unwrap();
    assert!(!r.in_i);
    assert_eq!(r.even.scanned, 6);
    assert_eq!(r.odd.scanned, 6);
    assert!(r.even.witness.is_none());
}

#[test]
fn seven_cubed_is_in_i() {
    let t = tower(7, 3);
    let r = in_i(&t, &quiet()).unwrap();
    assert!(r.in_i);
    for rep in [&r.even, &r.odd] {
        if let Some(w) = &rep.witness {
            verify_witness(&t, rep.parity, w).unwrap();
            assert_eq!(rep.scanned, w.exponent + 1);
        } else {
            assert_eq!(rep.scanned, 342);
        }
    }
}

#[test]
fn s_three_not_in_i_for_23_31_47() {
    for q0 in [23, 31, 47] {
        let t = tower(q0, 3);
        let r = in_i(&t, &quiet()).unwrap();
        assert!(!r.in_i, "3 ∈ I({q0})?");
        assert_eq!(r.even.scanned as u128, t.q() - 1);
        assert_eq!(r.odd.scanned as u128, t.q() - 1);
    }
}

#[test]
fn oracle_matches_characterisation() {
    for (q0, s) in [(7, 1), (23, 1), (31, 1), (47, 1), (71, 1), (79, 1), (7, 3)] {
        let t = tower(q0, s);
        let ell = require_ell(&t).unwrap();
        let even = npi_even(&t, &quiet()).unwrap().holds;
        let odd = npi_odd(&t, &quiet()).unwrap().holds;
        for i in 0..1u64 << ell {
            let o = npi_oracle_bruteforce(&t, ell, i).unwrap();
            assert_eq!(o.coset_size as u128, t.q() - 1);
            let expect = if i % 2 == 0 { even } else { odd };
            assert_eq!(o.holds, expect, "q0={q0} s={s} i={i}");
        }
    }
}

#[test]
fn oracle_coset_definition() {
    let t = tower(7, 1);
    let f = t.fq2();
    let theta = f.primitive_2l_root(3).unwrap();
    let g = f.generator();
    let q = t.q();
    for i in 0..8u64 {
        let base = f.pow(&g, i as u128 * ((q + 1) >> 3));
        let step = f.pow(&g, q + 1);
        let mut gamma = base;
        let lhs_rhs = |x: &crate::gf::Elt| {
            (f.pow(x, q), f.mul(&f.pow(&theta, i as u128), x))
        };
        for _ in 0..q - 1 {
            let (a, b) = lhs_rhs(&gamma);
            assert_eq!(a, b);
            gamma = f.mul(&gamma, &step);
        }
        assert!(!npi_oracle_bruteforce(&t, 3, i).unwrap().holds);
    }
    assert!(matches!(
        npi_oracle_bruteforce(&tower(23, 3), 3, 0),
        Err(PropertyError::TooLarge { .. })
    ));
}

#[test]
fn closure_from_three_to_nine() {
    let t3 = tower(7, 3);
    let t9 = tower(7, 9);
    let r3 = in_i(&t3, &quiet()).unwrap();
    let emb = Embedding::new(t3.fq().clone(), t9.fq().clone()).unwrap();
    let f9 = t9.fq();
    for rep in [&r3.even, &r3.odd] {
        let Some(w) = &rep.witness else { continue };
        let x = emb.embed(&t3.fq().from_coeffs(&w.x).unwrap()).unwrap();
        let x2 = f9.square(&x);
        for target in targets(&t9, rep.parity) {
            assert_eq!(f9.eta_euler(&f9.sub(&x2, &target)), 1);
        }
    }
    assert!(in_i(&t9, &quiet()).unwrap().in_i);
}

#[test]
fn shards_merge_to_unsharded_result() {
    for (q0, parity) in [(23, Parity::Even), (7, Parity::Odd), (7, Parity::Even)] {
        let t = tower(q0, 3);
        let whole = npi(&t, parity, &quiet()).unwrap();
        let parts: Vec<_> = (0..4)
            .map(|k| {
                let opts = ScanOptions {
                    shard: Shard::new(k, 4).unwrap(),
                    ..quiet()
                };
                npi(&t, parity, &opts).unwrap()
            })
            .collect();
        let merged = merge_shard_reports(&parts).unwrap();
        assert_eq!(merged.holds, whole.holds);
        assert_eq!(
            merged.witness.as_ref().map(|w| w.exponent),
            whole.witness.as_ref().map(|w| w.exponent)
        );
        if !merged.holds {
            assert_eq!(merged.scanned as u128, t.q() - 1);
        }
    }
    assert!(merge_shard_reports(&[]).is_err());
}

#[test]
fn shard_parsing() {
    assert_eq!("2/4".parse::<Shard>().unwrap(), Shard { index: 2, count: 4 });
    assert!("4/4".parse::<Shard>().is_err());
    assert!("x".parse::<Shard>().is_err());
    let (lo, hi) = Shard::new(3, 4).unwrap().range(342);
    assert_eq!((lo, hi), (256, 342));
}

#[test]
fn worker_count_is_deterministic() {
    let t = tower(31, 3);
    let base = serde_json::to_string(&in_i(&t, &quiet()).unwrap()).unwrap();
    for workers in [2, 5] {
        let opts = ScanOptions {
            workers,
            block: 1000,
            ..quiet()
        };
        let other = in_i(&t, &opts).unwrap();
        assert_eq!(other.even.scanned, 29790);
        assert!(!other.in_i);
        let mut a: serde_json::Value = serde_json::from_str(&base).unwrap();
        let b = serde_json::to_value(&other).unwrap();
        // the checkpoint count depends on the block size
        a["even"]["checkpoints"] = b["even"]["checkpoints"].clone();
        a["odd"]["checkpoints"] = b["odd"]["checkpoints"].clone();
        assert_eq!(a, b);
    }
}

#[test]
fn interrupted_scan_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let t = tower(23, 3);
    let opts = ScanOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        block: 1000,
        max_blocks: Some(3),
        workers: 2,
        ..quiet()
    };
    match npi_odd(&t, &opts) {
        Err(PropertyError::Interrupted { watermark }) => assert_eq!(watermark, 3000),
        other => panic!("expected interruption, got {other:?}"),
    }
    let second = npi_odd(&t, &opts);
    assert!(matches!(second, Err(PropertyError::Interrupted { watermark: 6000 })));
    let finish = ScanOptions {
        max_blocks: None,
        ..opts.clone()
    };
    let resumed = npi_odd(&t, &finish).unwrap();
    let fresh = npi_odd(
        &t,
        &ScanOptions {
            block: 1000,
            ..quiet()
        },
    )
    .unwrap();
    assert_eq!(resumed, fresh);
    // a finished checkpoint is reused as is
    assert_eq!(npi_odd(&t, &finish).unwrap(), fresh);
}

#[test]
fn checkpoint_from_other_scan_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let t = tower(7, 3);
    let opts = ScanOptions {
        checkpoint_dir: Some(dir.path().to_path_buf()),
        ..quiet()
    };
    npi_even(&t, &opts).unwrap();
    let path = dir.path().join("npi-7-3-even-0of1.json");
    let mut ck: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    ck["hi"] = 5.into();
    std::fs::write(&path, serde_json::to_vec(&ck).unwrap()).unwrap();
    assert!(matches!(npi_even(&t, &opts), Err(PropertyError::Checkpoint(_))));
}

#[test]
fn witness_tampering_is_detected() {
    let t = tower(7, 3);
    let r = in_i(&t, &quiet()).unwrap();
    let rep = if r.even.holds { &r.even } else { &r.odd };
    let mut w = rep.witness.clone().unwrap();
    w.y[0] = vec![0; w.y[0].len()];
    assert!(verify_witness(&t, rep.parity, &w).is_err());
}

#[test]
fn requires_class_s_ell() {
    let t = tower(9, 1);
    assert!(matches!(in_i(&t, &quiet()), Err(PropertyError::NotInSEll(9))));
}

#[test]
fn quadratic_relation_and_monic_delta() {
    for (q0, s) in [(7, 1), (23, 1), (7, 3)] {
        let t = tower(q0, s);
        let f = t.fq();
        let half = f.inv(&f.from_int(2)).unwrap();
        let d = f.nonsquare_rep();
        let elems: Vec<_> = f.elements().collect();
        for (case, k) in [(DeltaCase::EvenUnit, f.one()), (DeltaCase::OddD, d)] {
            for alpha in elems.iter().skip(1).step_by(5) {
                let dp = delta_poly(f, alpha, case, Some(&d)).unwrap();
                assert_eq!(dp.delta.len(), 5);
                assert_eq!(dp.delta[4], f.scale(&f.square(alpha), 4));
                let mid = f.mul(&f.add(&f.square(alpha), &k), &half);
                for x1 in elems.iter().step_by(3) {
                    for x2 in elems.iter().step_by(4) {
                        let lhs = f.add(
                            &f.add(
                                &f.mul(&dp.a_at(f, x1), &f.square(x2)),
                                &f.mul(&dp.b_at(f, x1), x2),
                            ),
                            &dp.c_at(f, x1),
                        );
                        let inner = f.sub(
                            &f.sub(&f.add(&f.mul(alpha, x1), &f.mul(alpha, x2)), &f.mul(x1, x2)),
                            &mid,
                        );
                        let rhs = f.sub(
                            &f.mul(&f.sub(&k, &f.square(x1)), &f.sub(&k, &f.square(x2))),
                            &f.square(&inner),
                        );
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn delta_certificates() {
    let t = tower(7, 1);
    let f = t.fq();
    let two = f.from_int(2);
    let cert = delta_not_square_certificate(f, &two, DeltaCase::EvenUnit, None).unwrap();
    // (1 - 4)/2 = -3/2 = 2 in F_7
    assert_eq!(cert.a3, vec![2]);
    assert!(cert.holds());
    assert_eq!(cert.brute_force_no_root, Some(true));
    for bad in [f.one(), f.from_int(-1), f.zero()] {
        assert_eq!(
            delta_not_square_certificate(f, &bad, DeltaCase::EvenUnit, None),
            Err(PropertyError::ExcludedAlpha)
        );
    }
    let d = f.nonsquare_rep();
    for alpha in f.elements().skip(1) {
        let c = delta_not_square_certificate(f, &alpha, DeltaCase::OddD, Some(&d)).unwrap();
        assert!(c.holds(), "odd alpha {:?}", alpha.coeffs());
    }
}

#[test]
fn pi_holds_on_small_fields() {
    for q in [7, 23, 31, 47] {
        let t = tower(q, 1);
        let r = pi_direct_search(&t, require_ell(&t).unwrap()).unwrap();
        assert!(r.holds(), "q = {q}");
        assert_eq!(r.even.alphas, q - 1);
        assert_eq!(r.even.explicit, 2);
    }
    let t = tower(7, 1);
    let r = pi_direct_search(&t, 3).unwrap();
    let first = r.even.solutions.iter().find(|s| s.alpha == vec![1]).unwrap();
    assert_eq!(first.x, [vec![1], vec![1], vec![6]]);
    assert_eq!(first.y, [vec![0], vec![0], vec![0]]);
}

#[test]
fn weil_audit_small() {
    let t = tower(7, 1);
    let r = weil_sum_audit(&t, 64).unwrap();
    assert_eq!(r.even.sum_k_minus_x2, 1);
    assert_eq!(r.odd.sum_k_minus_x2, 1);
    assert_eq!(r.even.rows.len(), 4);
    assert_eq!(r.odd.rows.len(), 6);
    assert!(!r.counting_suffices);
    assert!(r.ok());
    let big = weil_sum_audit(&tower(7, 3), 50).unwrap();
    assert!(big.ok());
    assert!(big.counting_suffices);
    assert_eq!(big.even.rows.len(), 50);
}
