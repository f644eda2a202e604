//! Reduced words over the standard basis `e1, e2, ...` of a free group of
//! countable rank, plus cyclic words (conjugacy classes).
//!
//! Letters print as `e<k>` for a generator and `E<k>` for its inverse. The
//! identity prints as `1`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator index must be at least 1 (byte {position})")]
    IndexZero { position: usize },
    #[error("the identity has no primitive root")]
    EmptyWord,
}

/// A generator `e_k` or its inverse `E_k`.
///
/// The derived order is `e1 < E1 < e2 < E2 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    /// The generator `e_index`. Panics if `index == 0`.
    pub fn gen(index: u32) -> Self {
        assert!(index >= 1, "generator index must be at least 1");
        Letter { index, inverse: false }
    }

    /// The inverse generator `E_index`. Panics if `index == 0`.
    pub fn gen_inv(index: u32) -> Self {
        assert!(index >= 1, "generator index must be at least 1");
        Letter { index, inverse: true }
    }

    pub fn new(index: u32, inverse: bool) -> Self {
        if inverse {
            Letter::gen_inv(index)
        } else {
            Letter::gen(index)
        }
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter { index: self.index, inverse: !self.inverse }
    }

    /// Dense code in `0..2*rank`: `e_k -> 2(k-1)`, `E_k -> 2(k-1)+1`.
    pub fn code(self) -> usize {
        2 * (self.index as usize - 1) + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Letter {
        Letter { index: (code / 2) as u32 + 1, inverse: code % 2 == 1 }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inverse { 'E' } else { 'e' };
        write!(f, "{c}{}", self.index)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn gen(index: u32) -> Self {
        Word { letters: vec![Letter::gen(index)] }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reducing(&mut out, l);
        }
        Word { letters: out }
    }

    /// Builds a word from signed indices (`3` is `e3`, `-3` is `E3`).
    /// Panics on a zero entry.
    pub fn from_signed(indices: &[i32]) -> Self {
        Word::from_letters(indices.iter().map(|&i| {
            assert!(i != 0, "generator index must be nonzero");
            Letter::new(i.unsigned_abs(), i < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index occurring in the word, 0 for the identity.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Generator indices occurring in the word.
    pub fn support(&self) -> BTreeSet<u32> {
        self.letters.iter().map(|l| l.index).collect()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        out.reserve(other.len());
        for &l in &other.letters {
            push_reducing(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `self^exp`; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let (core, conj) = cyclic_reduce(&base);
        let mut body = Vec::with_capacity(core.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            body.extend_from_slice(&core.letters);
        }
        // a cyclically reduced word has reduced powers
        let middle = Word { letters: body };
        conj.multiply(&middle).multiply(&conj.inverse())
    }

    /// `g * self * g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.multiply(self).multiply(&g.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => a != b.inverse() || self.len() == 1,
            _ => true,
        }
    }

    /// Applies a letter substitution: each generator `e_k` is replaced by
    /// `image(k)` and `E_k` by its inverse.
    pub fn substitute<F: Fn(u32) -> Word>(&self, image: F) -> Word {
        let mut out = Vec::new();
        for &l in &self.letters {
            let w = image(l.index);
            if l.inverse {
                for &m in w.letters.iter().rev() {
                    push_reducing(&mut out, m.inverse());
                }
            } else {
                for &m in &w.letters {
                    push_reducing(&mut out, m);
                }
            }
        }
        Word { letters: out }
    }

    /// Shifts every generator index by `offset` (which must keep indices >= 1).
    pub fn shift_indices(&self, offset: i64) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| {
                    let k = l.index as i64 + offset;
                    assert!(k >= 1, "index shift produced a nonpositive index");
                    Letter::new(k as u32, l.inverse)
                })
                .collect(),
        }
    }
}

fn push_reducing(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order: shorter words first, then lexicographic in letter order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_word(&s).map_err(serde::de::Error::custom)
    }
}

/// Commutator `u v u^-1 v^-1`, reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.multiply(v).multiply(&u.inverse()).multiply(&v.inverse())
}

/// Product of a sequence of words.
pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
    words.into_iter().fold(Word::identity(), |acc, w| acc.multiply(w))
}

/// Splits `u` as `conjugator * core * conjugator^-1` with `core` cyclically
/// reduced and `conjugator` as short as possible.
pub fn cyclic_reduce(u: &Word) -> (Word, Word) {
    let ls = &u.letters;
    let mut i = 0;
    let mut j = ls.len();
    while j - i >= 2 && ls[i] == ls[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (Word { letters: ls[i..j].to_vec() }, Word { letters: ls[..i].to_vec() })
}

/// A conjugacy class, stored as the least rotation of a cyclically reduced
/// word under the letter order `e1 < E1 < e2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn new(w: &Word) -> Self {
        let (core, _) = cyclic_reduce(w);
        let start = least_rotation(&core.letters);
        let mut letters = core.letters[start..].to_vec();
        letters.extend_from_slice(&core.letters[..start]);
        CyclicWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The canonical representative as an ordinary word.
    pub fn to_word(&self) -> Word {
        Word { letters: self.letters.clone() }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_word())
    }
}

/// Conjugacy test: the cyclic cores must be rotations of one another.
pub fn is_conjugate(u: &Word, v: &Word) -> bool {
    let (cu, _) = cyclic_reduce(u);
    let (cv, _) = cyclic_reduce(v);
    is_rotation(&cu.letters, &cv.letters)
}

/// Whether `b` is a rotation of `a`, by searching `b` in `a a`.
pub fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let fail = failure_function(b);
    let n = a.len();
    let mut k = 0;
    for idx in 0..(2 * n - 1) {
        let c = &a[idx % n];
        while k > 0 && b[k] != *c {
            k = fail[k - 1];
        }
        if b[k] == *c {
            k += 1;
        }
        if k == b.len() {
            return true;
        }
    }
    false
}

/// KMP prefix function.
fn failure_function<T: PartialEq>(p: &[T]) -> Vec<usize> {
    let mut fail = vec![0; p.len()];
    let mut k = 0;
    for i in 1..p.len() {
        while k > 0 && p[i] != p[k] {
            k = fail[k - 1];
        }
        if p[i] == p[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Start index of the lexicographically least rotation.
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// Writes `u = root^exponent` with `exponent` maximal. The centralizer of `u`
/// in the free group is the cyclic group generated by `root`.
pub fn primitive_root(u: &Word) -> Result<(Word, u32), WordError> {
    if u.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let (core, conj) = cyclic_reduce(u);
    let n = core.len();
    let fail = failure_function(&core.letters);
    let p = n - fail[n - 1];
    let period = if n % p == 0 { p } else { n };
    let root_core = Word { letters: core.letters[..period].to_vec() };
    Ok((root_core.conjugate_by(&conj), (n / period) as u32))
}

/// Parses the textual word grammar.
///
/// ```text
/// word   := factor*
/// factor := 'e' k | 'E' k | '1' | '[' word ',' word ']' | '(' word ')' '^' m
/// ```
///
/// Factors may be separated by whitespace; `k >= 1` and `m >= 0` are decimal.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(w)
}

/// Parses a `;`-separated list of words. Blank entries are skipped.
pub fn parse_word_list(text: &str) -> Result<Vec<Word>, WordError> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_word).collect()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: String) -> WordError {
        WordError::Syntax { position: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u64, WordError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a decimal number".into()));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| WordError::Syntax { position: start, message: "number out of range".into() })
    }

    fn word(&mut self) -> Result<Word, WordError> {
        let mut acc = Word::identity();
        loop {
            match self.peek() {
                None | Some(b',') | Some(b']') | Some(b')') => return Ok(acc),
                Some(_) => {
                    let f = self.factor()?;
                    acc = acc.multiply(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let start = self.pos;
        match self.peek() {
            Some(c @ (b'e' | b'E')) => {
                self.pos += 1;
                let digits_at = self.pos;
                if !self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    return Err(self.error("expected generator index".into()));
                }
                let k = self.number()?;
                if k == 0 {
                    return Err(WordError::IndexZero { position: digits_at });
                }
                let k = u32::try_from(k).map_err(|_| WordError::Syntax {
                    position: digits_at,
                    message: "generator index out of range".into(),
                })?;
                Ok(Word::letter(Letter::new(k, c == b'E')))
            }
            Some(b'1') => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    return Err(WordError::Syntax { position: start, message: "bare number".into() });
                }
                Ok(Word::identity())
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(commutator(&u, &v))
            }
            Some(b'(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b')')?;
                self.expect(b'^')?;
                self.skip_ws();
                let m = self.number()?;
                let m = i64::try_from(m).map_err(|_| self.error("exponent out of range".into()))?;
                Ok(u.pow(m))
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}
