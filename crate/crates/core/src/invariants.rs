//! Continued fractions, p-adic digit series and trace sequences built from cascade data.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::burau::trace_at;
use crate::dehornoy::sort_by_braid;
use crate::{Error, Real, Result};

/// Significant digits in the human-readable decimal rendering of a convergent.
pub const DECIMAL_DIGITS: usize = 30;

/// A finite truncation `c¹, …, cᵈ` of an index sequence; every term is at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSequence(Vec<BigUint>);

impl IndexSequence {
    pub fn new(terms: Vec<BigUint>) -> Result<IndexSequence> {
        if terms.iter().any(Zero::is_zero) {
            return Err(Error::InvalidSequence("index terms must be at least 1".into()));
        }
        Ok(IndexSequence(terms))
    }

    pub fn from_u64s(terms: &[u64]) -> Result<IndexSequence> {
        IndexSequence::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<BigUint>> for IndexSequence {
    type Error = Error;

    fn try_from(terms: Vec<BigUint>) -> Result<IndexSequence> {
        IndexSequence::new(terms)
    }
}

impl From<IndexSequence> for Vec<BigUint> {
    fn from(seq: IndexSequence) -> Vec<BigUint> {
        seq.0
    }
}

/// Convergents `p_n / q_n` of `[c₁; c₂, …, c_d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    fractions: Vec<(BigInt, BigInt)>,
}

impl Convergents {
    pub fn fractions(&self) -> &[(BigInt, BigInt)] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn rational(&self, n: usize) -> BigRational {
        let (p, q) = &self.fractions[n];
        BigRational::new(p.clone(), q.clone())
    }

    /// The exact value of the full finite continued fraction.
    pub fn value(&self) -> BigRational {
        self.rational(self.fractions.len() - 1)
    }

    pub fn decimal(&self) -> String {
        decimal_string(&self.value(), DECIMAL_DIGITS)
    }
}

/// Exact convergents by `p_n = c_n p_{n-1} + p_{n-2}`, `q_n = c_n q_{n-1} + q_{n-2}`.
pub fn continued_fraction(seq: &IndexSequence) -> Result<Convergents> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("continued fraction of an empty sequence".into()));
    }
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    let mut fractions = Vec::with_capacity(seq.len());
    for c in seq.terms() {
        let c = BigInt::from(c.clone());
        let p = &c * &p1 + &p2;
        let q = &c * &q1 + &q2;
        fractions.push((p.clone(), q.clone()));
        (p2, p1, q2, q1) = (p1, p, q1, q);
    }
    Ok(Convergents { fractions })
}

/// Renders `r` with `digits` significant digits, truncating toward zero.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs().to_biguint().expect("nonnegative");
    let den = r.denom().to_biguint().expect("positive");
    let int_part = &num / &den;
    let mut rem = &num % &den;
    let int_str = int_part.to_string();
    let mut significant = if int_part.is_zero() { 0 } else { int_str.len() };
    let mut frac = String::new();
    while significant < digits && !rem.is_zero() {
        rem *= 10u32;
        let d = (&rem / &den).to_u32().unwrap_or(0);
        rem %= &den;
        frac.push(char::from_digit(d, 10).unwrap_or('0'));
        if significant > 0 || d != 0 {
            significant += 1;
        }
    }
    if frac.is_empty() {
        format!("{sign}{int_str}")
    } else {
        format!("{sign}{int_str}.{frac}")
    }
}

/// Digits `c^n mod p` of the p-adic invariant and their partial sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDigits {
    pub p: u64,
    pub digits: Vec<u64>,
    #[serde(with = "biguint_string")]
    pub sum: BigUint,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `Σ (cⁿ mod p) pⁿ⁻¹` truncated at the sequence length.
pub fn padic_expand(seq: &IndexSequence, p: u64) -> Result<PadicDigits> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if seq.is_empty() {
        return Err(Error::InvalidSequence("p-adic expansion of an empty sequence".into()));
    }
    let big_p = BigUint::from(p);
    let digits: Vec<u64> = seq.terms().iter().map(|c| (c % &big_p).to_u64().expect("digit below p")).collect();
    let mut sum = BigUint::zero();
    let mut power = BigUint::one();
    for &d in &digits {
        sum += &power * d;
        power *= &big_p;
    }
    Ok(PadicDigits { p, digits, sum })
}

/// Traces of the Burau matrices of `braids` evaluated at `t0`, in order.
pub fn trace_invariant<T: Real>(braids: &[BraidWord], t0: Complex<T>) -> Result<Vec<Complex<T>>> {
    if t0.re.is_zero() && t0.im.is_zero() {
        return Err(Error::ZeroEvaluationPoint);
    }
    braids.iter().map(|b| trace_at(b, t0)).collect()
}

/// Braids of one cascade with their relative indices, in stage order.
#[derive(Clone, Debug)]
pub struct CascadeIndices {
    pub id: String,
    pub entries: Vec<(BraidWord, BigUint)>,
}

/// Merges the indices of several cascades into a single sequence ordered by braid.
///
/// Ties between equal braids are broken by cascade id and then stage position, so the
/// result does not depend on the order of `per_cascade`.
pub fn route_index_sequence(per_cascade: &[CascadeIndices]) -> Result<IndexSequence> {
    let mut items: Vec<(&str, usize, &BraidWord, &BigUint)> = per_cascade
        .iter()
        .flat_map(|c| c.entries.iter().enumerate().map(move |(i, (b, v))| (c.id.as_str(), i, b, v)))
        .collect();
    if items.is_empty() {
        return Err(Error::InvalidSequence("no cascade braids to order".into()));
    }
    items.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let sorted = sort_by_braid(items, |x| x.2)?;
    IndexSequence::new(sorted.into_iter().map(|x| x.3.clone()).collect())
}

pub(crate) mod biguint_string {
    use std::str::FromStr;

    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::from_str(&text).map_err(serde::de::Error::custom)
    }
}
