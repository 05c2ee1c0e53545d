//! Handle reduction and the left-invariant linear order on braids.
//!
//! A braid is σ-positive when some word for it contains its lowest-index generator only
//! positively; `a < b` iff `a⁻¹b` is σ-positive.

use std::cmp::Ordering;

use crate::braid::{BraidWord, Letter};
use crate::{Error, Result};

/// Outcome of [`compare`].
pub type ComparisonResult = Ordering;

/// Default bound on handle reductions per call.
pub const DEFAULT_REDUCTION_CAP: u64 = 1_000_000;

/// Position of the leftmost-ending handle `σ_i^e w σ_i^-e` (`w` using only generators
/// of index `> i`), as `(start, end)`. Such a handle contains no other handle.
fn leftmost_handle(word: &[i32], last: &mut [Option<usize>]) -> Option<(usize, usize)> {
    last.iter_mut().for_each(|l| *l = None);
    for (q, &x) in word.iter().enumerate() {
        let i = x.unsigned_abs() as usize;
        if let Some(p) = last[i] {
            if word[p] == -x {
                return Some((p, q));
            }
        }
        last[i] = Some(q);
        for slot in last.iter_mut().skip(i + 1) {
            *slot = None;
        }
    }
    None
}

/// Removes every handle, returning an equivalent handle-free word.
pub fn handle_reduce(a: &BraidWord) -> Result<BraidWord> {
    handle_reduce_with_cap(a, DEFAULT_REDUCTION_CAP)
}

pub fn handle_reduce_with_cap(a: &BraidWord, cap: u64) -> Result<BraidWord> {
    let mut word: Vec<i32> = a.letters().iter().map(|l| l.signed()).collect();
    let mut last = vec![None; a.strands() + 1];
    let mut reductions = 0u64;
    while let Some((p, q)) = leftmost_handle(&word, &mut last) {
        reductions += 1;
        if reductions > cap {
            return Err(Error::ResourceCap { what: "handle reductions", cap });
        }
        let e = word[p].signum();
        let i = word[p].abs();
        let mut middle = Vec::with_capacity(3 * (q - p));
        for &x in &word[p + 1..q] {
            if x.abs() == i + 1 {
                middle.extend([-e * (i + 1), x.signum() * i, e * (i + 1)]);
            } else {
                middle.push(x);
            }
        }
        word.splice(p..=q, middle);
    }
    let letters = word.into_iter().map(|x| Letter::from_signed(x).expect("nonzero letter")).collect();
    Ok(BraidWord::from_parts_unchecked(a.strands(), letters))
}

/// Sign of a handle-free word: `Equal` for the empty word, `Greater` when its
/// lowest-index generator occurs positively, `Less` otherwise.
fn reduced_sign(reduced: &BraidWord) -> Ordering {
    match reduced.letters().iter().min_by_key(|l| l.index()) {
        None => Ordering::Equal,
        Some(l) if l.is_positive() => Ordering::Greater,
        Some(_) => Ordering::Less,
    }
}

/// Compares two braids on the same number of strands.
pub fn compare(a: &BraidWord, b: &BraidWord) -> Result<ComparisonResult> {
    if a.strands() != b.strands() {
        return Err(Error::StrandMismatch { left: a.strands(), right: b.strands() });
    }
    let quotient = a.inverse().compose(b)?;
    // a < b iff a⁻¹b > 1
    Ok(reduced_sign(&handle_reduce(&quotient)?).reverse())
}

/// Word problem: whether `a` is the identity braid.
pub fn is_trivial(a: &BraidWord) -> Result<bool> {
    Ok(handle_reduce(a)?.is_empty())
}

/// Stable ascending sort of items by an associated braid, after including every braid
/// into the largest strand count present.
pub fn sort_by_braid<T, F>(items: Vec<T>, braid: F) -> Result<Vec<T>>
where
    F: Fn(&T) -> &BraidWord,
{
    let strands = items.iter().map(|x| braid(x).strands()).max().unwrap_or(1);
    let keyed = items.into_iter().map(|x| Ok((braid(&x).include(strands)?, x))).collect::<Result<Vec<_>>>()?;
    let sorted = merge_sort(keyed, &|x: &(BraidWord, T), y: &(BraidWord, T)| compare(&x.0, &y.0))?;
    Ok(sorted.into_iter().map(|(_, x)| x).collect())
}

/// Stable ascending sort under [`compare`]; braids are included into the largest strand count.
pub fn sort_braids(braids: Vec<BraidWord>) -> Result<Vec<BraidWord>> {
    let strands = braids.iter().map(BraidWord::strands).max().unwrap_or(1);
    let sorted = sort_by_braid(braids, |b| b)?;
    sorted.into_iter().map(|b| b.include(strands)).collect()
}

fn merge_sort<T, F>(mut items: Vec<T>, cmp: &F) -> Result<Vec<T>>
where
    F: Fn(&T, &T) -> Result<Ordering>,
{
    if items.len() <= 1 {
        return Ok(items);
    }
    let right = items.split_off(items.len() / 2);
    let left = merge_sort(items, cmp)?;
    let right = merge_sort(right, cmp)?;
    let mut out = Vec::with_capacity(left.len() + right.len());
    let mut left = left.into_iter().peekable();
    let mut right = right.into_iter().peekable();
    while let (Some(l), Some(r)) = (left.peek(), right.peek()) {
        if cmp(r, l)? == Ordering::Less {
            out.extend(right.next());
        } else {
            out.extend(left.next());
        }
    }
    out.extend(left);
    out.extend(right);
    Ok(out)
}
