use ample_core::whitehead::{
    cut_automorphisms, enumerate_whitehead_autos, is_basis, is_free_factor_tuple, is_primitive, minimize, WhiteheadAut,
};
use ample_core::word::{commutator, parse_word, Letter, Word};
use proptest::prelude::*;

fn word(rank: u32, min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank, any::<bool>()).prop_map(|(i, inv)| Letter::new(i, inv)), min..=max)
        .prop_map(Word::from_letters)
}

fn autos(rank: u32) -> Vec<WhiteheadAut> {
    enumerate_whitehead_autos(rank).collect()
}

/// Applies Nielsen moves to the standard basis: `(i, j, inv, right)`
/// replaces `x_i` by `x_i x_j^±1` or `x_j^±1 x_i`.
fn nielsen(rank: u32, moves: &[(usize, usize, bool, bool)]) -> Vec<Word> {
    let mut b: Vec<Word> = (1..=rank).map(Word::gen).collect();
    let r = rank as usize;
    for &(i, j, inv, right) in moves {
        let (i, j) = (i % r, j % r);
        if i == j {
            b[i] = b[i].inverse();
            continue;
        }
        let y = if inv { b[j].inverse() } else { b[j].clone() };
        b[i] = if right { b[i].multiply(&y) } else { y.multiply(&b[i]) };
    }
    b
}

fn abelianization(w: &Word, rank: u32) -> Vec<i64> {
    let mut v = vec![0i64; rank as usize];
    for l in w.letters() {
        v[l.index() as usize - 1] += l.sign() as i64;
    }
    v
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn minimal_length_is_an_orbit_invariant(w in word(3, 1, 10), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..=4)) {
        let all = autos(3);
        let mut image = w.clone();
        for p in &picks {
            image = p.get(&all).apply(&image).unwrap();
        }
        let a = minimize(std::slice::from_ref(&w), 3).unwrap();
        let b = minimize(std::slice::from_ref(&image), 3).unwrap();
        prop_assert_eq!(a.minimal_length(), b.minimal_length());
        prop_assert!(a.replay() && a.recheck_minimality());
    }

    #[test]
    fn nielsen_images_are_primitive(moves in prop::collection::vec((0usize..3, 0usize..3, any::<bool>(), any::<bool>()), 0..8)) {
        let b = nielsen(3, &moves);
        prop_assert!(is_basis(&b, 3));
        let t = minimize(&b, 3).unwrap();
        prop_assert_eq!(t.minimal_length(), 3);
        for x in &b {
            prop_assert!(is_primitive(x, 3).unwrap());
        }
        prop_assert!(is_free_factor_tuple(&b[..2], 3).unwrap());
    }

    #[test]
    fn primitives_have_coprime_abelianization(w in word(2, 1, 10)) {
        if is_primitive(&w, 2).unwrap() {
            let v = abelianization(&w, 2);
            prop_assert_eq!(gcd(v[0], v[1]), 1);
        }
    }

    #[test]
    fn proper_powers_are_not_primitive(w in word(3, 1, 5), k in 2i64..4) {
        prop_assert!(!is_primitive(&w.pow(k), 3).unwrap());
    }

    #[test]
    fn single_occurrence_generator_gives_primitive(u in word(3, 0, 8), v in word(3, 0, 8)) {
        // e4 occurs once in u e4 v, so e4 -> U e4 V sends e4 to it
        let w = u.multiply(&Word::gen(4)).multiply(&v);
        prop_assert!(is_primitive(&w, 4).unwrap());
    }
}

#[test]
fn rank_two_exponent_oracle() {
    // e1^a e2^b is primitive iff one exponent is a unit and the other
    // arbitrary, or one is zero and the other a unit.
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let w = Word::gen(1).pow(a).multiply(&Word::gen(2).pow(b));
            let expected = match (a.abs(), b.abs()) {
                (0, 0) => false,
                (0, y) => y == 1,
                (x, 0) => x == 1,
                (x, y) => x == 1 || y == 1,
            };
            assert_eq!(is_primitive(&w, 2).unwrap(), expected, "e1^{a} e2^{b}");
        }
    }
}

#[test]
fn commutator_products_are_not_primitive() {
    let c1 = commutator(&Word::gen(1), &Word::gen(2));
    let t = minimize(std::slice::from_ref(&c1), 2).unwrap();
    assert_eq!(t.minimal_length(), 4);
    assert!(t.recheck_minimality());
    let c2 = c1.multiply(&commutator(&Word::gen(3), &Word::gen(4)));
    assert!(minimize(std::slice::from_ref(&c2), 4).unwrap().minimal_length() > 1);
    let c3 = c2.multiply(&commutator(&Word::gen(5), &Word::gen(6)));
    let t = minimize(std::slice::from_ref(&c3), 6).unwrap();
    assert!(t.minimal_length() > 1);
    assert!(t.replay() && t.recheck_minimality());
}

#[test]
fn cut_enumeration_counts() {
    // 2r * 4^(r-1) slots, of which 2r are the identity (S = {x})
    for r in 1..=4u32 {
        let slots = 2 * r as usize * 4usize.pow(r - 1);
        assert_eq!(cut_automorphisms(r).count(), slots - 2 * r as usize);
    }
}

#[test]
fn every_automorphism_preserves_bases() {
    let b: Vec<Word> = ["e1 e2", "e2", "e3 E1"].iter().map(|s| parse_word(s).unwrap()).collect();
    assert!(is_basis(&b, 3));
    for a in autos(3) {
        assert!(is_basis(&a.apply_tuple(&b).unwrap(), 3), "{a}");
    }
}
