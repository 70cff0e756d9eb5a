use proptest::prelude::*;

use super::*;

fn f7() -> FieldCtx {
    FieldCtx::for_order(7).unwrap()
}

#[test]
fn tower_orders() {
    let t = make_tower(FieldSpec::for_order(7).unwrap(), 1).unwrap();
    assert_eq!((t.q0(), t.q(), t.fq2().order()), (7, 7, 49));
    let t = make_tower(FieldSpec::for_order(7).unwrap(), 3).unwrap();
    assert_eq!((t.q0(), t.q(), t.fq2().order()), (7, 343, 117_649));
    assert_eq!(t.fq2().degree(), 6);
    assert_eq!(
        make_tower(FieldSpec::for_order(7).unwrap(), 2).unwrap_err(),
        GfError::EvenExtension(2)
    );
}

#[test]
fn rejects_bad_specs() {
    assert!(matches!(
        FieldSpec::for_order(8),
        Err(GfError::BadCharacteristic(2))
    ));
    assert!(matches!(
        FieldSpec::for_order(87),
        Err(GfError::NotPrimePower(87))
    ));
    // x^2 + 2 = (x + 3)(x - 3) over F_7
    assert!(FieldSpec::with_modulus(7, vec![5, 0, 1]).is_err());
    assert!(FieldSpec::with_modulus(7, vec![1, 0, 1]).is_ok());
    assert!(FieldSpec::with_modulus(9, vec![1, 1]).is_err());
}

#[test]
fn spec_json_shape() {
    let spec = FieldSpec::new(7, 2).unwrap();
    let json = serde_json::to_string(&spec).unwrap();
    assert_eq!(json, r#"{"p":7,"d":2,"modulus":[1,0,1]}"#);
    let back: FieldSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, spec);
}

#[test]
fn eta_small_values() {
    let f = f7();
    // squares mod 7, by enumeration
    let squares: Vec<i64> = (1..7).map(|x: i64| x * x % 7).collect();
    for v in 0..7i64 {
        let expect = if v == 0 {
            0
        } else if squares.contains(&v) {
            1
        } else {
            -1
        };
        assert_eq!(f.eta(&f.from_int(v)).unwrap(), expect, "eta({v})");
    }
    assert_eq!(f.eta(&f.one()).unwrap(), 1);
    assert_eq!(f.eta(&f.from_int(-1)).unwrap(), -1);
    assert_eq!(f.eta(&f.from_int(3)).unwrap(), -1);
    let other = FieldCtx::for_order(11).unwrap();
    assert_eq!(f.eta(&other.one()), Err(GfError::ContextMismatch));
}

#[test]
fn eta_table_matches_euler() {
    for q in [7u64, 23, 49, 343, 625] {
        let f = FieldCtx::for_order(q).unwrap();
        assert!(f.has_square_table());
        let mut counts = [0usize; 3];
        for x in f.elements() {
            let e = f.eta_fast(&x);
            assert_eq!(e, f.eta_euler(&x));
            counts[(e + 1) as usize] += 1;
        }
        let half = (q as usize - 1) / 2;
        assert_eq!(counts, [half, 1, half]);
    }
    let no_table = FieldCtx::with_square_limit(FieldSpec::for_order(343).unwrap(), 16).unwrap();
    assert!(!no_table.has_square_table());
    assert_eq!(no_table.eta_fast(&no_table.root()), no_table.eta_euler(&no_table.root()));
}

#[test]
fn eta_is_multiplicative() {
    let f = FieldCtx::for_order(343).unwrap();
    let xs: Vec<Elt> = f.elements().step_by(7).collect();
    for x in &xs {
        for y in xs.iter().step_by(5) {
            if !x.is_zero() && !y.is_zero() {
                assert_eq!(f.eta_fast(&f.mul(x, y)), f.eta_fast(x) * f.eta_fast(y));
            }
        }
    }
}

#[test]
fn generator_orders() {
    for (q0, s) in [(7u64, 1u32), (7, 3), (23, 1), (31, 1)] {
        let t = make_tower(FieldSpec::for_order(q0).unwrap(), s).unwrap();
        for ctx in [t.fq0(), t.fq(), t.fq2()] {
            assert_eq!(
                ctx.multiplicative_order(&ctx.generator()).unwrap(),
                ctx.order() - 1
            );
        }
    }
    // order of a non-generator
    let f = f7();
    assert_eq!(f.multiplicative_order(&f.from_int(2)).unwrap(), 3);
    assert_eq!(f.multiplicative_order(&f.from_int(-1)).unwrap(), 2);
}

#[test]
fn primitive_roots_of_two_power_order() {
    let f49 = FieldCtx::for_order(49).unwrap();
    let theta = f49.primitive_2l_root(3).unwrap();
    assert_eq!(f49.pow(&theta, 8), f49.one());
    assert_eq!(f49.pow(&theta, 4), f49.from_int(-1));
    assert_eq!(f49.multiplicative_order(&theta).unwrap(), 8);
    // 32 does not divide 48
    assert!(matches!(
        f49.primitive_2l_root(5),
        Err(GfError::NoRootOfUnity { ell: 5, .. })
    ));

    let t = make_tower(FieldSpec::for_order(7).unwrap(), 3).unwrap();
    let theta = t.fq2().primitive_2l_root(3).unwrap();
    assert_eq!(t.fq2().pow(&theta, 4), t.fq2().from_int(-1));
    assert!(!t.in_fq(&theta));
}

#[test]
fn subgroups() {
    let f49 = FieldCtx::for_order(49).unwrap();
    let h = f49.subgroup(8).unwrap();
    let elems: Vec<Elt> = h.iter().collect();
    assert_eq!(elems.len(), 8);
    assert!(elems.iter().all(|x| f49.pow(x, 8) == f49.one()));
    let distinct: std::collections::HashSet<_> = elems.iter().collect();
    assert_eq!(distinct.len(), 8);
    assert!(matches!(
        f49.subgroup(5),
        Err(GfError::OrderNotDivisor { order: 5, .. })
    ));

    // H ∩ F_{q0} = {1, -1} for q0 = 7, s = 3
    let t = make_tower(FieldSpec::for_order(7).unwrap(), 3).unwrap();
    let fq2 = t.fq2();
    let h = fq2.subgroup(t.q() + 1).unwrap();
    let base: Vec<Elt> = t
        .fq0()
        .elements()
        .map(|x| t.q0_in_q2().embed(&x).unwrap())
        .collect();
    let mut inter: Vec<Elt> = h.iter().filter(|x| base.contains(x)).collect();
    inter.sort_by_key(|x| fq2.index(x));
    assert_eq!(inter, vec![fq2.one(), fq2.from_int(-1)]);
    assert!(h.iter().all(|x| t.norm(&x) == fq2.one()));
}

#[test]
fn nonsquare_representative() {
    let f = f7();
    assert_eq!(f.nonsquare_rep(), f.from_int(3));
    let f343 = FieldCtx::for_order(343).unwrap();
    let d = f343.nonsquare_rep();
    assert_eq!(f343.eta(&d).unwrap(), -1);
    assert_eq!(f343.pow(&d, 171), f343.from_int(-1));
}

#[test]
fn square_roots() {
    for q in [7u64, 13, 49, 343, 625] {
        let f = FieldCtx::for_order(q).unwrap();
        for x in f.elements() {
            match f.sqrt(&x) {
                Some(r) => assert_eq!(f.square(&r), x),
                None => assert_eq!(f.eta_fast(&x), -1),
            }
        }
    }
}

#[test]
fn embeddings_are_homomorphisms_and_invertible() {
    let t = make_tower(FieldSpec::for_order(7).unwrap(), 3).unwrap();
    for emb in [t.q0_in_q(), t.q_in_q2(), t.q0_in_q2()] {
        let (src, dst) = (emb.source(), emb.target());
        let xs: Vec<Elt> = src.elements().step_by(src.order() as usize / 50 + 1).collect();
        for x in &xs {
            let y = emb.embed(x).unwrap();
            assert_eq!(emb.project(&y).unwrap(), *x);
            for z in xs.iter().take(10) {
                let ez = emb.embed(z).unwrap();
                assert_eq!(emb.embed(&src.mul(x, z)).unwrap(), dst.mul(&y, &ez));
                assert_eq!(emb.embed(&src.add(x, z)).unwrap(), dst.add(&y, &ez));
            }
        }
        assert_eq!(emb.embed(&src.one()).unwrap(), dst.one());
    }
    // generator of F_q2 is not in F_q
    assert!(matches!(
        t.q_in_q2().project(&t.fq2().generator()),
        Err(GfError::NotInSubfield)
    ));
    // the composite agrees with the two steps
    for x in t.fq0().elements() {
        let two_step = t.q_in_q2().embed(&t.q0_in_q().embed(&x).unwrap()).unwrap();
        assert_eq!(t.q0_in_q2().embed(&x).unwrap(), two_step);
    }
}

#[test]
fn norm_lands_in_fq() {
    let t = make_tower(FieldSpec::for_order(7).unwrap(), 3).unwrap();
    let fq2 = t.fq2();
    let mut x = fq2.one();
    for _ in 0..200 {
        x = fq2.mul(&x, &fq2.add(&fq2.generator(), &fq2.one()));
        let n = t.norm(&x);
        assert!(t.in_fq(&n));
        assert!(t.q_in_q2().project(&n).is_ok());
    }
}

#[test]
fn prime_power_base_field() {
    // q0 = 343 = 7^3 is itself ≡ 7 mod 8
    let t = make_tower(FieldSpec::for_order(343).unwrap(), 1).unwrap();
    assert_eq!(t.fq2().degree(), 6);
    let emb = t.q0_in_q2();
    for x in t.fq0().elements().step_by(11) {
        let y = emb.embed(&x).unwrap();
        assert!(t.in_fq(&y));
        assert_eq!(emb.project(&y).unwrap(), x);
    }
    assert_eq!(t.base_squares().len(), 171);
}

fn arb_elt(ctx: &'static FieldCtx) -> impl Strategy<Value = Elt> {
    (0..ctx.order() as u64).prop_map(move |i| ctx.element(i))
}

fn f_7_6() -> &'static FieldCtx {
    static CTX: OnceLock<FieldCtx> = OnceLock::new();
    CTX.get_or_init(|| FieldCtx::for_order(117_649).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(a in arb_elt(f_7_6()), b in arb_elt(f_7_6()), c in arb_elt(f_7_6())) {
        let f = f_7_6();
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
        prop_assert_eq!(f.element(f.index(&a)), a);
    }
}
