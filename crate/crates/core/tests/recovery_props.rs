use lrc_core::construct::{build, BuiltCode, CodeSpecFile, Verify};
use lrc_core::recovery::{derive_lambda, recover_in_order, same_functional};
use lrc_core::{recover, Elem, ReceivedWord};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_codes() -> Vec<BuiltCode> {
    [
        ("tamo-barg", vec!["q=13", "r=2", "k=6"]),
        ("tamo-barg", vec!["q=16", "r=3", "k=6", "source=additive", "generators=1,2"]),
        ("hermitian", vec!["q=3", "l=2"]),
        ("power-cover", vec!["q=3", "s=4", "y_cap=2"]),
        ("gk", vec!["q=2", "N=3", "l=2"]),
        ("hermitian-lifted", vec!["q=4"]),
        ("nt-lifted", vec!["r=4"]),
    ]
    .into_iter()
    .map(|(tag, p)| build(&CodeSpecFile::from_pairs(tag, &p).unwrap(), Verify::Full).unwrap())
    .collect()
}

#[test]
fn certified_groups_recover_random_codewords() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in small_codes() {
        let f = b.code.field();
        for _ in 0..1000 {
            let c = b.code.random_codeword(&mut rng);
            for i in 0..c.len() {
                for g in b.recovery.groups(i) {
                    assert_eq!(g.apply(f, &c), c[i], "{} coordinate {i}", b.spec.construction.tag());
                }
            }
        }
    }
}

#[test]
fn peeling_restores_erased_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for b in small_codes() {
        let n = b.code.len();
        for _ in 0..200 {
            let c = b.code.random_codeword(&mut rng);
            let mut w = ReceivedWord::from_codeword(&c);
            let erase = rng.gen_range(1..=n / 4);
            for i in rand::seq::index::sample(&mut rng, n, erase) {
                w.erase(i).unwrap();
            }
            let (out, rep) = recover(b.code.field(), &w, &b.recovery).unwrap();
            for (i, s) in out.0.iter().enumerate() {
                match s {
                    Some(v) => assert_eq!(*v, c[i]),
                    None => assert!(rep.residual.contains(&i)),
                }
            }
            assert_eq!(rep.repaired.len() + rep.residual.len(), erase);
        }
    }
}

#[test]
fn solved_functionals_agree_with_lagrange() {
    for b in small_codes() {
        for i in [0, b.code.len() / 2, b.code.len() - 1] {
            for g in b.recovery.groups(i) {
                let solved = derive_lambda(&b.code, i, &g.support).unwrap().expect("group is a recovery set");
                assert!(same_functional(&b.code, &g.support, &solved, &g.lambda));
            }
        }
    }
}

#[test]
fn support_from_another_fiber_is_rejected() {
    let b = build(&CodeSpecFile::from_pairs("hermitian", &["q=3", "l=2"]).unwrap(), Verify::Full).unwrap();
    let own = &b.recovery.groups(0)[0].support;
    let j = (1..b.code.len()).find(|j| !own.contains(j)).unwrap();
    let support = b.recovery.groups(j)[0].support.clone();
    assert!(!support.contains(&0));
    assert_eq!(derive_lambda(&b.code, 0, &support).unwrap(), None);
}

fn erased_word(b: &BuiltCode, seed: u64, count: usize) -> (Vec<Elem>, ReceivedWord) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = b.code.random_codeword(&mut rng);
    let mut w = ReceivedWord::from_codeword(&c);
    for i in rand::seq::index::sample(&mut rng, c.len(), count.min(c.len())) {
        w.erase(i).unwrap();
    }
    (c, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn peeling_is_confluent(which in 0usize..7, seed in any::<u64>(), count in 1usize..40) {
        let codes = small_codes();
        let b = &codes[which];
        let (_, w) = erased_word(b, seed, count);
        let f = b.code.field();
        let (base, rep) = recover(f, &w, &b.recovery).unwrap();
        let mut order: Vec<usize> = (0..b.code.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let (other, rep2) = recover_in_order(f, &w, &b.recovery, &order).unwrap();
        prop_assert_eq!(base, other);
        let mut r1 = rep.residual.clone();
        let mut r2 = rep2.residual.clone();
        r1.sort_unstable();
        r2.sort_unstable();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn single_erasure_always_repairs(which in 0usize..7, seed in any::<u64>()) {
        let codes = small_codes();
        let b = &codes[which];
        let (c, w) = erased_word(b, seed, 1);
        let (out, rep) = recover(b.code.field(), &w, &b.recovery).unwrap();
        prop_assert!(rep.residual.is_empty());
        prop_assert_eq!(out.complete().unwrap(), c);
        prop_assert_eq!(rep.bandwidth, rep.repairs[0].support.len());
    }
}
