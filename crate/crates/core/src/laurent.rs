//! Laurent polynomials in `t` and square matrices over them.
//!
//! Coefficients are generic over [`Coefficient`]; the Burau code uses `BigInt`.
//! Text form of a polynomial: terms `c*t^k` in increasing `k`, joined by `" + "`,
//! with `"0"` for the zero polynomial. A matrix serializes to JSON as an array of
//! rows, each entry being the list of its term strings.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Real, Result};

/// Exact integer-like coefficient ring.
pub trait Coefficient:
    Clone + Debug + Display + FromStr + PartialEq + Zero + One + Integer + Neg<Output = Self> + ToPrimitive + Send + Sync
{
}

impl Coefficient for i64 {}
impl Coefficient for i128 {}
impl Coefficient for BigInt {}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i32, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: i32) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i32, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&e, v)| (e, v.clone() * c.clone())).collect() }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (d_lead_exp, d_lead) = divisor.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let d_min = divisor.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((r_exp, r_coeff)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let r_min = rem.min_exp().unwrap();
            // the quotient's lowest term must still fit the remainder's span
            if r_exp - d_lead_exp < r_min - d_min {
                return None;
            }
            let (q, r) = r_coeff.div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(q, r_exp - d_lead_exp);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Evaluates at a nonzero complex point.
    pub fn eval<T: Real>(&self, t0: Complex<T>) -> Result<Complex<T>> {
        if t0.re.is_zero() && t0.im.is_zero() {
            return Err(Error::ZeroEvaluationPoint);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&e, c) in &self.terms {
            let cf = T::from(c.clone()).unwrap_or_else(T::nan);
            acc = acc + t0.powi(e) * cf;
        }
        Ok(acc)
    }

    /// Term strings `c*t^k` in increasing exponent order.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms.iter().map(|(e, c)| format!("{c}*t^{e}")).collect()
    }

    pub fn parse_term(s: &str) -> Result<(i32, C)> {
        let (c, e) =
            s.trim().split_once("*t^").ok_or_else(|| Error::Parse(format!("term {s:?} is not of the form c*t^k")))?;
        let c = C::from_str(c).map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?;
        let e = e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
        Ok((e, c))
    }

    /// Rebuilds from term strings; rejects zero coefficients and repeated or unsorted
    /// exponents so that parsing inverts [`LaurentPoly::term_strings`] exactly.
    pub fn from_term_strings<S: AsRef<str>>(terms: &[S]) -> Result<Self> {
        let mut out = BTreeMap::new();
        let mut last: Option<i32> = None;
        for s in terms {
            let (e, c) = Self::parse_term(s.as_ref())?;
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient in {:?}", s.as_ref())));
            }
            if last.is_some_and(|l| l >= e) {
                return Err(Error::Parse("terms must have strictly increasing exponents".into()));
            }
            last = Some(e);
            out.insert(e, c);
        }
        Ok(LaurentPoly { terms: out })
    }
}

impl<C: Coefficient> Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&self.term_strings().join(" + "))
    }
}

impl<C: Coefficient> FromStr for LaurentPoly<C> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let parts: Vec<&str> = s.split(" + ").collect();
        Self::from_term_strings(&parts)
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl<C: Coefficient> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.term_strings().serialize(serializer)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for LaurentPoly<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<String>::deserialize(deserializer)?;
        Self::from_term_strings(&terms).map_err(D::Error::custom)
    }
}

/// Square matrix of Laurent polynomials, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix<C> {
    size: usize,
    entries: Vec<LaurentPoly<C>>,
}

impl<C: Coefficient> LaurentMatrix<C> {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![LaurentPoly::zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = LaurentPoly::one();
        }
        LaurentMatrix { size, entries }
    }

    pub fn zeros(size: usize) -> Self {
        LaurentMatrix { size, entries: vec![LaurentPoly::zero(); size * size] }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly<C>>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMatrix("matrix is not square".into()));
        }
        Ok(LaurentMatrix { size, entries: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly<C> {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly<C>) {
        self.entries[r * self.size + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<LaurentPoly<C>>> {
        self.entries.chunks(self.size.max(1)).take(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.size != rhs.size {
            return Err(Error::InvalidMatrix(format!("size {} vs {}", self.size, rhs.size)));
        }
        let n = self.size;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cell = &mut out.entries[r * n + c];
                    *cell = &*cell + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> LaurentPoly<C> {
        (0..self.size).fold(LaurentPoly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over `Z[t, t^-1]`.
    pub fn det(&self) -> LaurentPoly<C> {
        let n = self.size;
        if n == 0 {
            return LaurentPoly::one();
        }
        let mut m = self.rows();
        let mut negate = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return LaurentPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev).expect("Bareiss elimination divides exactly over Z[t, t^-1]");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    /// Entrywise evaluation at a nonzero complex `t`.
    pub fn evaluate<T: Real>(&self, t0: Complex<T>) -> Result<ComplexMatrix<T>> {
        let entries = self.entries.iter().map(|p| p.eval(t0)).collect::<Result<Vec<_>>>()?;
        Ok(ComplexMatrix { size: self.size, entries })
    }
}

impl<C: Coefficient> Serialize for LaurentMatrix<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de, C: Coefficient> Deserialize<'de> for LaurentMatrix<C> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<LaurentPoly<C>>>::deserialize(deserializer)?;
        Self::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    size: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![Complex::new(T::zero(), T::zero()); size * size];
        for i in 0..size {
            entries[i * size + i] = Complex::new(T::one(), T::zero());
        }
        ComplexMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.entries[r * self.size + c]
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.entries
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let mut out = vec![Complex::new(T::zero(), T::zero()); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                for c in 0..n {
                    out[r * n + c] = out[r * n + c] + a * rhs.entries[k * n + c];
                }
            }
        }
        ComplexMatrix { size: n, entries: out }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.size).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    /// Largest entrywise modulus of `self - other`, relative to the larger matrix norm.
    pub fn relative_distance(&self, other: &Self) -> T {
        let scale = self.entries.iter().chain(other.entries.iter()).map(|z| z.norm()).fold(T::one(), T::max);
        self.entries.iter().zip(&other.entries).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = LaurentPoly<BigInt>;

    fn p(terms: &[(i32, i64)]) -> P {
        P::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn arithmetic_cancels_to_no_stored_zeros() {
        let a = p(&[(0, 1), (1, -1)]);
        let b = p(&[(1, 1), (0, -1)]);
        assert!((&a + &b).is_zero());
        assert_eq!(&a * &p(&[(-1, 1)]), p(&[(-1, 1), (0, -1)]));
        assert_eq!((&a * &a).to_string(), "1*t^0 + -2*t^1 + 1*t^2");
    }

    #[test]
    fn exact_division() {
        let a = p(&[(0, 1), (1, -1)]);
        let b = p(&[(-2, 3), (0, 5), (1, 1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert!(p(&[(0, 1)]).exact_div(&p(&[(0, 2)])).is_none());
        assert!(p(&[(0, 1), (2, 1)]).exact_div(&p(&[(0, 1), (1, 1)])).is_none());
    }

    #[test]
    fn text_round_trip() {
        let a = p(&[(-3, 7), (0, -1), (4, 12)]);
        let s = a.to_string();
        assert_eq!(s, "7*t^-3 + -1*t^0 + 12*t^4");
        assert_eq!(s.parse::<P>().unwrap(), a);
        assert_eq!("0".parse::<P>().unwrap(), P::zero());
        assert!("1*t^1 + 1*t^1".parse::<P>().is_err());
        assert!("0*t^1".parse::<P>().is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m =
            LaurentMatrix::from_rows(vec![vec![p(&[(0, 1), (1, -1)]), p(&[(1, 1)])], vec![p(&[(0, 1)]), P::zero()]])
                .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"[[["1*t^0","-1*t^1"],["1*t^1"]],[["1*t^0"],[]]]"#);
        let back: LaurentMatrix<BigInt> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn eval_rejects_zero() {
        let a = p(&[(-1, 1)]);
        assert!(matches!(a.eval(Complex::new(0.0f64, 0.0)), Err(Error::ZeroEvaluationPoint)));
        let v = a.eval(Complex::new(2.0f64, 0.0)).unwrap();
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn det_small_cases() {
        assert!(LaurentMatrix::<BigInt>::identity(3).det().is_one());
        let m =
            LaurentMatrix::from_rows(vec![vec![p(&[(0, 1), (1, -1)]), p(&[(1, 1)])], vec![p(&[(0, 1)]), P::zero()]])
                .unwrap();
        assert_eq!(m.det(), p(&[(1, -1)]));
        // needs a pivot swap
        let s =
            LaurentMatrix::from_rows(vec![vec![P::zero(), p(&[(0, 1)])], vec![p(&[(2, 1)]), p(&[(0, 3)])]]).unwrap();
        assert_eq!(s.det(), p(&[(2, -1)]));
    }
}
