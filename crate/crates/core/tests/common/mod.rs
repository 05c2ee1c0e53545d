#![allow(dead_code)]

use braidroute::BraidWord;
use proptest::prelude::*;
use rand::Rng;

/// A random word of length `0..=max_len` on `n` strands.
pub fn random_word(rng: &mut impl Rng, n: usize, max_len: usize) -> BraidWord {
    let len = rng.random_range(0..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let i = rng.random_range(1..n as i32);
            if rng.random_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::from_signed(n, &letters).unwrap()
}

pub fn word_on(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let letter = (1..n as i32, any::<bool>()).prop_map(|(i, neg)| if neg { -i } else { i });
    prop::collection::vec(letter, 0..=max_len).prop_map(move |l| BraidWord::from_signed(n, &l).unwrap())
}

pub fn word(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| word_on(n, max_len))
}
