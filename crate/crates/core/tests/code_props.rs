use lrc_core::bounds::{classify, ParamTuple, Verdict};
use lrc_core::construct::{build, CodeSpecFile, Construction, GoodSource, Verify};
use lrc_core::evalcode::{Provenance, RankSource};
use lrc_core::lifted::{DeltaConvention, Reduction};
use lrc_core::tamo_barg::{build_tb, good_from_multiplicative, verify_good};
use lrc_core::{Elem, Field, MinDistance, UniPoly};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [(u64, u32); 14] =
    [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5), (7, 2), (3, 4), (2, 8)];

fn field_and_elems() -> impl Strategy<Value = (Field, u64, u64, u64)> {
    (0..ORDERS.len()).prop_flat_map(|i| {
        let (p, m) = ORDERS[i];
        let q = p.pow(m);
        (Just(Field::new(p, m).unwrap()), 0..q, 0..q, 0..q)
    })
}

/// (q, r, k) for multiplicative Tamo-Barg codes over prime fields up to 31.
fn tb_params() -> impl Strategy<Value = (u32, usize, usize)> {
    prop::sample::select(vec![5u32, 7, 11, 13, 17, 19, 23, 29, 31])
        .prop_flat_map(|q| {
            let rs: Vec<usize> = (1..q as usize - 1).filter(|r| (q as usize - 1) % (r + 1) == 0).collect();
            (Just(q), prop::sample::select(rs))
        })
        .prop_flat_map(|(q, r)| {
            let blocks = (q as usize - 1) / (r + 1);
            (Just(q), Just(r), 1..=blocks)
        })
        .prop_map(|(q, r, j)| (q, r, r * j))
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_elems()) {
        let (a, b, c) = (f.elem(a).unwrap(), f.elem(b).unwrap(), f.elem(c).unwrap());
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.pow(a, f.order() as u64 - 1), Elem::ONE);
        }
        // Frobenius is additive
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn lagrange_interpolates_evaluations((f, seed, _, _) in field_and_elems(), deg in 0usize..6) {
        prop_assume!((f.order() as usize) > deg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Elem> = (0..=deg).map(|_| f.elem(rand::Rng::gen_range(&mut rng, 0..f.order() as u64)).unwrap()).collect();
        let h = UniPoly::new(&f, coeffs);
        let pts: Vec<(Elem, Elem)> = f.elements().take(deg + 1).map(|x| (x, h.eval(x))).collect();
        prop_assert_eq!(UniPoly::lagrange(&f, &pts).unwrap(), h);
    }

    #[test]
    fn tamo_barg_invariants((q, r, k) in tb_params()) {
        let f = Field::new(q as u64, 1).unwrap();
        let good = good_from_multiplicative(&f, r).unwrap();
        prop_assert!(verify_good(good.g(), good.parts()).is_ok());
        let tb = build_tb(&good, k).unwrap();
        let n = q as usize - 1;
        prop_assert_eq!(tb.code.len(), n);
        prop_assert_eq!(tb.code.dimension(), k);
        prop_assert_eq!(tb.recovery.locality(), r);
        let dd = tb.code.design_distance().unwrap();
        prop_assert_eq!(dd.provenance, Provenance::Formula);
        prop_assert_eq!(dd.value, n - k - k / r + 2);
        let rep = classify(&ParamTuple::new(n as u64, k as u64, dd.value as u64, r as u64, 1).unwrap(), true).unwrap();
        prop_assert_eq!(rep.verdict, Verdict::Optimal);
    }

    #[test]
    fn encoding_is_linear(seed in any::<u64>()) {
        let b = build(&CodeSpecFile::from_pairs("hermitian", &["q=3", "l=2"]).unwrap(), Verify::Fast).unwrap();
        let f = b.code.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = b.code.random_message(&mut rng);
        let v = b.code.random_message(&mut rng);
        let s: Vec<Elem> = u.iter().zip(&v).map(|(&x, &y)| f.add(x, y)).collect();
        let lhs = b.code.encode(&s).unwrap();
        let eu = b.code.encode(&u).unwrap();
        let ev = b.code.encode(&v).unwrap();
        let rhs: Vec<Elem> = eu.iter().zip(&ev).map(|(&x, &y)| f.add(x, y)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn spec_json_round_trips(which in 0usize..6, a in 1u32..40, b in 1u32..40, c in 1usize..40, flag in any::<bool>()) {
        let construction = match which {
            0 => Construction::TamoBarg {
                q: a,
                r: b as usize,
                k: c,
                source: if flag { GoodSource::Additive } else { GoodSource::Multiplicative },
                generators: flag.then(|| vec![1, a as u64]),
            },
            1 => Construction::Hermitian { q: a, l: b },
            2 => Construction::PowerCover { q: a, s: b, y_cap: c as u32 },
            3 => Construction::Gk { q: a, n: b, l: c as u32 },
            4 => Construction::HermitianLifted { q: a },
            _ => Construction::NtLifted {
                r: a,
                delta_convention: if flag { DeltaConvention::Literal } else { DeltaConvention::Interpolation },
                reduction: if flag { Reduction::Intersection } else { Reduction::CurveEquation },
            },
        };
        let mut spec = CodeSpecFile::new(construction);
        if flag {
            spec.points = Some(vec![vec![a, b], vec![b, a]]);
        }
        let text = spec.to_json();
        prop_assert_eq!(CodeSpecFile::from_json(&text).unwrap(), spec.clone());
        let again = CodeSpecFile::from_json(&text).unwrap().to_json();
        prop_assert_eq!(again, text);
    }
}

#[test]
fn tamo_barg_small_distances_meet_the_bound() {
    // exact distance by brute force for every small multiplicative code
    let mut checked = 0;
    for q in [5u32, 7, 11, 13] {
        let f = Field::new(q as u64, 1).unwrap();
        for r in (1..q as usize - 1).filter(|r| (q as usize - 1) % (r + 1) == 0) {
            let blocks = (q as usize - 1) / (r + 1);
            for j in 1..=blocks {
                let k = r * j;
                let tb = build_tb(&good_from_multiplicative(&f, r).unwrap(), k).unwrap();
                let MinDistance::Exact(d) = tb.code.min_distance_bruteforce(5_000_000).unwrap() else {
                    continue;
                };
                assert_eq!(d, tb.code.design_distance().unwrap().value, "q={q} r={r} k={k}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 12, "only {checked} codes scanned");
}

#[test]
fn gk_structural_rank_is_labelled() {
    let b = build(&CodeSpecFile::from_pairs("gk", &["q=2", "N=3", "l=5"]).unwrap(), Verify::Fast).unwrap();
    assert!(matches!(b.code.rank_source(), RankSource::Structural(_)));
    let e = build(&CodeSpecFile::from_pairs("gk", &["q=2", "N=3", "l=2"]).unwrap(), Verify::Fast).unwrap();
    assert_eq!(e.code.rank_source(), &RankSource::Elimination);
}
