//! The witnessing sequence `a_0 = e1`, `a_(i+1) = a_i [e_(2i+2), e_(2i+3)]`.

use crate::word::{commutator, Word};

/// `[e_(2j), e_(2j+1)]`, the commutator appended at step `j` (`j >= 1`).
pub fn step_commutator(j: usize) -> Word {
    let k = 2 * j as u32;
    commutator(&Word::gen(k), &Word::gen(k + 1))
}

/// `a_i`, a word of length `4i + 1` in `e1, ..., e_(2i+1)`.
pub fn witness(i: usize) -> Word {
    (1..=i).fold(Word::gen(1), |acc, j| acc.multiply(&step_commutator(j)))
}

/// Ambient rank `2i + 1` in which `a_i` lives.
pub fn ambient_rank(i: usize) -> u32 {
    2 * i as u32 + 1
}

/// `a_0, ..., a_n` with the recursion checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSequence {
    pub n: usize,
    pub words: Vec<Word>,
}

impl WitnessSequence {
    pub fn new(n: usize) -> Self {
        let mut words = vec![Word::gen(1)];
        for i in 0..n {
            let next = words[i].multiply(&step_commutator(i + 1));
            words.push(next);
        }
        WitnessSequence { n, words }
    }

    /// `a_0, ..., a_(k-1)`.
    pub fn prefix(&self, k: usize) -> &[Word] {
        &self.words[..k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    #[test]
    fn witness_examples() {
        assert_eq!(witness(0), parse_word("e1").unwrap());
        assert_eq!(witness(1), parse_word("e1 e2 e3 E2 E3").unwrap());
        let a2 = parse_word("e1 [e2,e3] [e4,e5]").unwrap();
        assert_eq!(witness(2), a2);
        assert_eq!(a2.len(), 9);
    }

    #[test]
    fn recursion_and_lengths() {
        let seq = WitnessSequence::new(6);
        for i in 0..=6 {
            assert_eq!(seq.words[i], witness(i));
            assert_eq!(seq.words[i].len(), 4 * i + 1);
            assert_eq!(seq.words[i].max_index(), ambient_rank(i));
        }
        for i in 0..6 {
            assert_eq!(seq.words[i].inverse().multiply(&seq.words[i + 1]), step_commutator(i + 1));
        }
    }
}
