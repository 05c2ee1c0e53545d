//! Braid words on `n` strands and the operations that do not need the word problem.
//!
//! Generators are 1-based: the letter `i` is `σ_i`, the letter `-i` is `σ_i⁻¹`.
//! Equality of [`BraidWord`] values is equality of letter sequences; equality of the
//! braids they represent is decided by [`crate::dehornoy::is_trivial`].

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_i32(s: i32) -> Option<Sign> {
        match s {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }
}

/// A signed generator `σ_i^{±1}`, stored as `±i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: u32, sign: Sign) -> Letter {
        assert!(index >= 1, "generator indices start at 1");
        Letter(index as i32 * sign.as_i32())
    }

    pub fn from_signed(value: i32) -> Option<Letter> {
        (value != 0).then_some(Letter(value))
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    /// Builds a word after checking every generator index against the strand count.
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<BraidWord> {
        if strands == 0 {
            return Err(Error::InvalidStrands(strands));
        }
        for l in &letters {
            if l.index() >= strands {
                return Err(Error::GeneratorOutOfRange { index: l.signed() as i64, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn from_signed(strands: usize, letters: &[i32]) -> Result<BraidWord> {
        let letters = letters
            .iter()
            .map(|&v| Letter::from_signed(v).ok_or(Error::GeneratorOutOfRange { index: 0, strands }))
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }

    pub fn identity(strands: usize) -> BraidWord {
        assert!(strands >= 1);
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn generator(strands: usize, index: u32, sign: Sign) -> Result<BraidWord> {
        if index == 0 {
            return Err(Error::GeneratorOutOfRange { index: 0, strands });
        }
        BraidWord::new(strands, vec![Letter::new(index, sign)])
    }

    pub(crate) fn from_parts_unchecked(strands: usize, letters: Vec<Letter>) -> BraidWord {
        debug_assert!(letters.iter().all(|l| l.index() < strands));
        BraidWord { strands, letters }
    }

    pub fn strands(&self) -> usize {
        self.strands
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

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Integer power; negative exponents use the inverse word.
    pub fn pow(&self, e: i32) -> BraidWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Cancels adjacent `σ_i σ_i⁻¹` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign().as_i32() as i64).sum()
    }

    /// The induced permutation of strand positions; see [`Permutation`] for the convention.
    pub fn permutation(&self) -> Permutation {
        // origin[p] = starting position of the strand currently at position p
        let mut origin: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let i = l.index() - 1;
            origin.swap(i, i + 1);
        }
        Permutation { images: origin }
    }

    /// Same letters, viewed in `B_m` for `m >= strands`.
    pub fn include(&self, m: usize) -> Result<BraidWord> {
        if m < self.strands {
            return Err(Error::InvalidInclusion { from: self.strands, to: m });
        }
        Ok(BraidWord { strands: m, letters: self.letters.clone() })
    }

    /// Period-doubling cable: every strand becomes a pair of parallel strands, and a
    /// final half-twist `σ_1^{twist}` joins the two copies of the first strand.
    ///
    /// The letter `σ_i^s` becomes `σ_{2i}^s σ_{2i-1}^s σ_{2i+1}^s σ_{2i}^s`, which carries
    /// the pair `{2i-1, 2i}` across the pair `{2i+1, 2i+2}`.
    pub fn pd_cable(&self, twist: Sign) -> BraidWord {
        let mut letters = Vec::with_capacity(4 * self.len() + 1);
        for l in &self.letters {
            let i = l.index() as u32;
            let s = l.sign();
            for idx in [2 * i, 2 * i - 1, 2 * i + 1, 2 * i] {
                letters.push(Letter::new(idx, s));
            }
        }
        letters.push(Letter::new(1, twist));
        BraidWord { strands: 2 * self.strands, letters }
    }

    /// Parses whitespace-separated signed generator indices, e.g. `"-1 2"`.
    pub fn parse(text: &str, strands: usize) -> Result<BraidWord> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                let v: i32 = tok.parse().map_err(|_| Error::Parse(format!("bad letter {tok:?}")))?;
                Letter::from_signed(v).ok_or_else(|| Error::Parse("letter 0 is not a generator".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.signed())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BraidText {
    strands: usize,
    word: String,
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BraidText { strands: self.strands, word: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BraidWord, D::Error> {
        let text = BraidText::deserialize(d)?;
        BraidWord::parse(&text.word, text.strands).map_err(serde::de::Error::custom)
    }
}

/// A permutation of positions `0..n` (printed 1-based).
///
/// Convention: `images[j]` is the starting position of the strand that ends at
/// position `j`. With this convention `permutation(a·b) = permutation(a) ∘ permutation(b)`
/// as functions (the right factor is applied first), i.e. [`Permutation::compose`]
/// applied as `pa.compose(&pb)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v] = j;
        }
        Permutation { images: inv }
    }

    /// Cycles in order of their smallest element, each starting there.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles().iter().map(Vec::len).collect()
    }

    pub fn is_single_cycle(&self) -> bool {
        self.cycles().len() == 1
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| acc.lcm(&(l as u64)))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str(")")
    }
}
