//! Whitehead automorphisms of `F_rank` and greedy orbit minimization.
//!
//! Cut-type automorphisms are indexed densely: for multiplier code `c` (in
//! letter order `e1, E1, e2, ...`) and free subset bits `m`, the index is
//! `c * 2^(2 rank - 2) + m`. Scans run over that index range so that large
//! ranks never materialize the automorphism list.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stallings::SubgroupGraph;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhiteheadError {
    #[error("word uses generator e{index} but the rank is {rank}")]
    RankMismatch { index: u32, rank: u32 },
    #[error("rank {rank} is outside the supported range 1..={max}")]
    UnsupportedRank { rank: u32, max: u32 },
    #[error("cannot minimize an empty tuple")]
    EmptyTuple,
}

/// Hard ceiling on the rank the engine accepts. Subsets are `u64` bitmasks
/// and the slot count `2 rank * 4^(rank-1)` must fit in a `u64`.
pub const MAX_RANK: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WhiteheadAut {
    /// `e_k -> images[k-1]`, each image a single letter.
    Permutation { rank: u32, images: Vec<LetterRepr> },
    /// Multiplier `x`; `subset` holds `x`, never `x^-1`.
    Cut { rank: u32, multiplier: LetterRepr, subset: Vec<LetterRepr> },
}

/// Serialized form of a [`Letter`] (`"e3"`, `"E3"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LetterRepr(pub Letter);

impl TryFrom<String> for LetterRepr {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        let w: Word = s.parse().map_err(|e| format!("{e}"))?;
        match w.letters() {
            [l] => Ok(LetterRepr(*l)),
            _ => Err(format!("expected a single letter, got '{s}'")),
        }
    }
}

impl From<LetterRepr> for String {
    fn from(l: LetterRepr) -> String {
        l.0.to_string()
    }
}

/// A cut-type automorphism in compact form, used by the scanning loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cut {
    multiplier: Letter,
    mask: u64,
}

impl Cut {
    fn from_index(rank: u32, index: u64) -> Cut {
        let free = 2 * rank - 2;
        let code = (index >> free) as usize;
        let m = index & ((1u64 << free) - 1);
        let multiplier = Letter::from_code(code);
        let inv = multiplier.inverse().code();
        let (lo, hi) = if code < inv { (code, inv) } else { (inv, code) };
        // spread the free bits around the two fixed positions
        let below = m & ((1u64 << lo) - 1);
        let mid = (m >> lo) & ((1u64 << (hi - lo - 1)) - 1);
        let above = m >> (hi - 1);
        let mut mask = below | (mid << (lo + 1)) | (above << (hi + 1));
        mask |= 1u64 << code;
        Cut { multiplier, mask }
    }

    fn is_identity(self) -> bool {
        self.mask == 1u64 << self.multiplier.code()
    }

    fn has(self, l: Letter) -> bool {
        self.mask >> l.code() & 1 == 1
    }

    fn push_image(self, l: Letter, out: &mut Vec<Letter>) {
        let x = self.multiplier;
        if l.index() == x.index() {
            push(out, l);
            return;
        }
        if self.has(l.inverse()) {
            push(out, x.inverse());
        }
        push(out, l);
        if self.has(l) {
            push(out, x);
        }
    }

    fn image(self, w: &Word, out: &mut Vec<Letter>) {
        out.clear();
        for &l in w.letters() {
            self.push_image(l, out);
        }
    }

    fn to_aut(self, rank: u32) -> WhiteheadAut {
        let subset = (0..2 * rank as usize)
            .filter(|&c| self.mask >> c & 1 == 1)
            .map(|c| LetterRepr(Letter::from_code(c)))
            .collect();
        WhiteheadAut::Cut { rank, multiplier: LetterRepr(self.multiplier), subset }
    }
}

fn push(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Number of cut-type index slots for `rank`, identities included:
/// `2 rank * 2^(2 rank - 2)`.
pub fn cut_slot_count(rank: u32) -> u64 {
    2 * rank as u64 * (1u64 << (2 * rank - 2))
}

impl WhiteheadAut {
    pub fn rank(&self) -> u32 {
        match self {
            WhiteheadAut::Permutation { rank, .. } | WhiteheadAut::Cut { rank, .. } => *rank,
        }
    }

    pub fn cut(rank: u32, multiplier: Letter, subset: &[Letter]) -> WhiteheadAut {
        let mut s: Vec<Letter> = subset.to_vec();
        if !s.contains(&multiplier) {
            s.push(multiplier);
        }
        s.sort();
        s.dedup();
        assert!(!s.contains(&multiplier.inverse()), "cut subset may not contain the inverse multiplier");
        WhiteheadAut::Cut { rank, multiplier: LetterRepr(multiplier), subset: s.into_iter().map(LetterRepr).collect() }
    }

    fn compact(&self) -> Option<Cut> {
        match self {
            WhiteheadAut::Cut { multiplier, subset, .. } => {
                let mask = subset.iter().fold(0u64, |m, l| m | 1u64 << l.0.code());
                Some(Cut { multiplier: multiplier.0, mask })
            }
            WhiteheadAut::Permutation { .. } => None,
        }
    }

    /// Image of a word. Letters must have index at most `rank`.
    pub fn apply(&self, w: &Word) -> Result<Word, WhiteheadError> {
        check_rank(std::slice::from_ref(w), self.rank())?;
        Ok(self.apply_unchecked(w))
    }

    fn apply_unchecked(&self, w: &Word) -> Word {
        match self {
            WhiteheadAut::Permutation { images, .. } => Word::from_letters(w.letters().iter().map(|l| {
                let img = images[l.index() as usize - 1].0;
                if l.is_inverse() {
                    img.inverse()
                } else {
                    img
                }
            })),
            WhiteheadAut::Cut { .. } => {
                let cut = self.compact().unwrap();
                let mut out = Vec::with_capacity(w.len() + 2);
                cut.image(w, &mut out);
                Word::from_letters(out)
            }
        }
    }

    pub fn apply_tuple(&self, tuple: &[Word]) -> Result<Vec<Word>, WhiteheadError> {
        check_rank(tuple, self.rank())?;
        Ok(tuple.iter().map(|w| self.apply_unchecked(w)).collect())
    }

    pub fn is_identity(&self) -> bool {
        match self {
            WhiteheadAut::Permutation { images, .. } => {
                images.iter().enumerate().all(|(i, l)| l.0 == Letter::gen(i as u32 + 1))
            }
            WhiteheadAut::Cut { .. } => self.compact().unwrap().is_identity(),
        }
    }
}

impl fmt::Display for WhiteheadAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadAut::Permutation { images, .. } => {
                f.write_str("perm(")?;
                for (i, l) in images.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "e{}->{}", i + 1, l.0)?;
                }
                f.write_str(")")
            }
            WhiteheadAut::Cut { multiplier, subset, .. } => {
                write!(f, "cut(x={}; S={{", multiplier.0)?;
                for (i, l) in subset.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", l.0)?;
                }
                f.write_str("})")
            }
        }
    }
}

fn check_rank(tuple: &[Word], rank: u32) -> Result<(), WhiteheadError> {
    for w in tuple {
        let index = w.max_index();
        if index > rank {
            return Err(WhiteheadError::RankMismatch { index, rank });
        }
    }
    Ok(())
}

fn total_length(tuple: &[Word]) -> usize {
    tuple.iter().map(Word::len).sum()
}

/// Signed-permutation generators: each inversion `e_k -> E_k` and each
/// adjacent transposition `e_k <-> e_{k+1}`.
pub fn permutation_generators(rank: u32) -> Vec<WhiteheadAut> {
    let identity: Vec<LetterRepr> = (1..=rank).map(|k| LetterRepr(Letter::gen(k))).collect();
    let mut out = Vec::new();
    for k in 0..rank as usize {
        let mut images = identity.clone();
        images[k] = LetterRepr(images[k].0.inverse());
        out.push(WhiteheadAut::Permutation { rank, images });
    }
    for k in 0..(rank as usize).saturating_sub(1) {
        let mut images = identity.clone();
        images.swap(k, k + 1);
        out.push(WhiteheadAut::Permutation { rank, images });
    }
    out
}

/// Streams every non-identity cut-type automorphism in scan order.
pub fn cut_automorphisms(rank: u32) -> impl Iterator<Item = WhiteheadAut> {
    assert!((1..=MAX_RANK).contains(&rank));
    (0..cut_slot_count(rank))
        .map(move |i| Cut::from_index(rank, i))
        .filter(|c| !c.is_identity())
        .map(move |c| c.to_aut(rank))
}

/// All Whitehead automorphisms of the given rank: cut-type first, then the
/// permutation generators.
pub fn enumerate_whitehead_autos(rank: u32) -> impl Iterator<Item = WhiteheadAut> {
    cut_automorphisms(rank).chain(permutation_generators(rank))
}

/// Audit trail of a greedy descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizationTrace {
    pub rank: u32,
    pub start: Vec<Word>,
    pub end: Vec<Word>,
    pub automorphisms_applied: Vec<WhiteheadAut>,
    /// Total length before the first step and after each step.
    pub total_lengths: Vec<usize>,
    /// Number of cut-type automorphisms checked in the final no-shortening scan.
    pub final_scan_size: u64,
}

impl MinimizationTrace {
    pub fn minimal_length(&self) -> usize {
        *self.total_lengths.last().unwrap()
    }

    /// Replays the recorded steps from `start`; true iff they reproduce `end`
    /// and the recorded lengths, with strict descent throughout.
    pub fn replay(&self) -> bool {
        let mut cur = self.start.clone();
        if self.total_lengths.first() != Some(&total_length(&cur)) {
            return false;
        }
        if self.total_lengths.len() != self.automorphisms_applied.len() + 1 {
            return false;
        }
        for (aut, &len) in self.automorphisms_applied.iter().zip(&self.total_lengths[1..]) {
            cur = match aut.apply_tuple(&cur) {
                Ok(t) => t,
                Err(_) => return false,
            };
            if total_length(&cur) != len {
                return false;
            }
        }
        self.total_lengths.windows(2).all(|p| p[1] < p[0]) && cur == self.end
    }

    /// Re-runs the exhaustive scan at `end`, confirming no Whitehead
    /// automorphism shortens it.
    pub fn recheck_minimality(&self) -> bool {
        best_cut(&self.end, self.rank).is_none()
    }
}

/// Best strictly shortening cut automorphism, ties broken by scan index.
fn best_cut(tuple: &[Word], rank: u32) -> Option<(usize, Cut)> {
    let current = total_length(tuple);
    let best = (0..cut_slot_count(rank))
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let cut = Cut::from_index(rank, i);
            let mut len = 0;
            for w in tuple {
                cut.image(w, buf);
                len += buf.len();
                if len >= current {
                    return None;
                }
            }
            Some((len, i))
        })
        .flatten()
        .min();
    best.map(|(len, i)| (len, Cut::from_index(rank, i)))
}

/// Greedy Whitehead descent: each round applies the cut-type automorphism
/// with the largest length reduction until none reduces the total length.
/// By peak reduction the result has minimal total length in the
/// `Aut(F_rank)`-orbit.
pub fn minimize(tuple: &[Word], rank: u32) -> Result<MinimizationTrace, WhiteheadError> {
    if tuple.is_empty() {
        return Err(WhiteheadError::EmptyTuple);
    }
    if rank == 0 || rank > MAX_RANK {
        return Err(WhiteheadError::UnsupportedRank { rank, max: MAX_RANK });
    }
    check_rank(tuple, rank)?;
    let mut cur = tuple.to_vec();
    let mut lengths = vec![total_length(&cur)];
    let mut applied = Vec::new();
    while let Some((len, cut)) = best_cut(&cur, rank) {
        let aut = cut.to_aut(rank);
        cur = aut.apply_tuple(&cur)?;
        debug_assert_eq!(total_length(&cur), len);
        lengths.push(len);
        applied.push(aut);
    }
    Ok(MinimizationTrace {
        rank,
        start: tuple.to_vec(),
        end: cur,
        automorphisms_applied: applied,
        total_lengths: lengths,
        final_scan_size: cut_slot_count(rank),
    })
}

/// Renames the generators occurring in `tuple` to `e1, e2, ...` in
/// increasing order. Sound for orbit questions: the support generates a free
/// factor, and primitivity and free-factor status are unchanged by passing
/// to a free factor that contains the tuple.
pub fn compact_support(tuple: &[Word]) -> (Vec<Word>, u32) {
    let support: std::collections::BTreeSet<u32> = tuple.iter().flat_map(|w| w.support()).collect();
    let index: std::collections::BTreeMap<u32, u32> =
        support.iter().enumerate().map(|(i, &k)| (k, i as u32 + 1)).collect();
    let out = tuple.iter().map(|w| w.substitute(|k| Word::gen(index[&k]))).collect();
    (out, support.len() as u32)
}

/// Brings `tuple` within `rank`, relabelling its support when some index
/// exceeds the rank but the support itself fits.
fn fit_rank(tuple: &[Word], rank: u32) -> Result<Vec<Word>, WhiteheadError> {
    if check_rank(tuple, rank).is_ok() {
        return Ok(tuple.to_vec());
    }
    let (compact, used) = compact_support(tuple);
    if used > rank {
        let index = tuple.iter().map(Word::max_index).max().unwrap_or(0);
        return Err(WhiteheadError::RankMismatch { index, rank });
    }
    Ok(compact)
}

/// Primitivity via minimization to total length one. The identity is not
/// primitive. A word whose indices exceed `rank` is relabelled first when
/// it uses at most `rank` distinct generators.
pub fn is_primitive(w: &Word, rank: u32) -> Result<bool, WhiteheadError> {
    Ok(primitivity_trace(w, rank)?.is_some_and(|t| t.minimal_length() == 1))
}

/// The minimization trace behind [`is_primitive`]; `None` for the identity.
pub fn primitivity_trace(w: &Word, rank: u32) -> Result<Option<MinimizationTrace>, WhiteheadError> {
    if w.is_empty() {
        return Ok(None);
    }
    let fitted = fit_rank(std::slice::from_ref(w), rank)?;
    minimize(&fitted, rank).map(Some)
}

/// Whether `tuple` is a basis of `F_rank`: it has `rank` entries and
/// generates everything. Free groups are Hopfian, so a generating set of
/// size `rank` is a basis.
pub fn is_basis(tuple: &[Word], rank: u32) -> bool {
    if tuple.len() != rank as usize || tuple.iter().any(|w| w.is_empty() || w.max_index() > rank) {
        return false;
    }
    let g = SubgroupGraph::build(tuple);
    g.vertex_count() == 1 && g.edge_count() == rank as usize
}

/// Whether the subgroup generated by `tuple` is a free factor of `F_rank`.
/// The tuple is first replaced by a Stallings basis of the subgroup it
/// generates; the subgroup is a free factor iff that basis minimizes to
/// distinct single generators.
pub fn is_free_factor_tuple(tuple: &[Word], rank: u32) -> Result<bool, WhiteheadError> {
    Ok(free_factor_trace(tuple, rank)?.is_none_or(|t| ends_in_distinct_generators(&t.end)))
}

/// The minimization trace behind [`is_free_factor_tuple`]; `None` when the
/// tuple generates the trivial subgroup.
pub fn free_factor_trace(tuple: &[Word], rank: u32) -> Result<Option<MinimizationTrace>, WhiteheadError> {
    let fitted = fit_rank(tuple, rank)?;
    let basis = SubgroupGraph::build(&fitted).basis();
    if basis.is_empty() {
        return Ok(None);
    }
    minimize(&basis, rank).map(Some)
}

pub fn ends_in_distinct_generators(tuple: &[Word]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    tuple.iter().all(|w| w.len() == 1 && seen.insert(w.letters()[0].index()))
}
