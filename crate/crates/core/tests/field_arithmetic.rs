mod common;

use agq_core::gf::SubfieldEmbedding;
use agq_core::{Felt, Field};
use common::NaiveField;
use proptest::prelude::*;

const SMALL_FIELDS: [(u32, u32); 8] = [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)];

#[test]
fn tables_agree_with_schoolbook_arithmetic() {
    for (p, e) in SMALL_FIELDS {
        let f = Field::new(p, e).unwrap();
        let naive = NaiveField::mirror(&f);
        for a in 0..f.order() {
            for b in 0..f.order() {
                let (x, y) = (Felt::from_index(a), Felt::from_index(b));
                assert_eq!(f.add(x, y).index(), naive.add(a, b), "GF({p}^{e}) {a}+{b}");
                assert_eq!(f.mul(x, y).index(), naive.mul(a, b), "GF({p}^{e}) {a}*{b}");
            }
            if a != 0 {
                assert_eq!(f.inv(Felt::from_index(a)).unwrap().index(), naive.inv(a).unwrap());
            }
        }
    }
}

#[test]
fn primitive_element_generates_everything() {
    for (p, e) in SMALL_FIELDS.into_iter().chain([(7, 2), (2, 8), (11, 2)]) {
        let f = Field::new(p, e).unwrap();
        let naive = NaiveField::mirror(&f);
        let g = f.primitive().index();
        let mut seen = std::collections::BTreeSet::new();
        let mut x = 1;
        for _ in 0..f.order() - 1 {
            seen.insert(x);
            x = naive.mul(x, g);
        }
        assert_eq!(seen.len() as u32, f.order() - 1, "GF({p}^{e})");
        assert_eq!(x, 1);
    }
}

#[test]
fn frobenius_matches_repeated_multiplication() {
    for (p, e, q) in [(2, 2, 2u64), (3, 2, 3), (2, 4, 4), (5, 2, 5)] {
        let f = Field::new(p, e).unwrap();
        let naive = NaiveField::mirror(&f);
        for a in f.elements() {
            assert_eq!(f.frobenius_q(a).unwrap().index(), naive.pow(a.index(), q));
        }
        let fixed = f.elements().filter(|&a| f.frobenius_q(a).unwrap() == a).count() as u64;
        assert_eq!(fixed, q);
    }
    assert!(Field::new(2, 3).unwrap().frobenius_q(Felt::ONE).is_err());
}

#[test]
fn subfield_embedding_is_a_homomorphism() {
    for (p, small_e, big_e) in [(2, 1, 2), (3, 1, 2), (2, 2, 4), (5, 1, 2)] {
        let small = Field::new(p, small_e).unwrap();
        let big = Field::new(p, big_e).unwrap();
        let emb = SubfieldEmbedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                let (ea, eb) = (emb.embed(a).unwrap(), emb.embed(b).unwrap());
                assert_eq!(emb.embed(small.add(a, b)).unwrap(), big.add(ea, eb));
                assert_eq!(emb.embed(small.mul(a, b)).unwrap(), big.mul(ea, eb));
            }
        }
        let image: std::collections::BTreeSet<_> = emb.image().iter().collect();
        assert_eq!(image.len() as u32, small.order());
    }
}

#[test]
fn invalid_parameters() {
    assert!(Field::new(4, 2).is_err());
    assert!(Field::new(2, 0).is_err());
    assert!(Field::new(1, 3).is_err());
    assert!(Field::with_order(12).is_err());
    assert!(Field::with_modulus(2, 2, vec![1, 0, 1]).is_err());
}

fn field_and_elements() -> impl Strategy<Value = (u32, u32, u32, u32, u32)> {
    prop::sample::select(vec![(3u32, 2u32), (2, 4), (5, 2), (7, 2), (2, 8), (3, 4)]).prop_flat_map(|(p, e)| {
        let q = p.pow(e);
        (Just(p), Just(e), 0..q, 0..q, 0..q)
    })
}

proptest! {
    #[test]
    fn field_axioms((p, e, a, b, c) in field_and_elements()) {
        let f = Field::new(p, e).unwrap();
        let (a, b, c) = (Felt::from_index(a), Felt::from_index(b), Felt::from_index(c));
        prop_assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        } else {
            prop_assert!(f.inv(b).is_err());
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn gf9_additive_inverse(a in 0u32..9) {
        let f = Field::new(3, 2).unwrap();
        let naive = NaiveField::mirror(&f);
        let x = Felt::from_index(a);
        prop_assert_eq!(f.add(x, f.neg(x)), Felt::ZERO);
        prop_assert_eq!(f.neg(x).index(), naive.neg(a));
    }
}
