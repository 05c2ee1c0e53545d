//! The unreduced Burau representation `B_n -> GL_n(Z[t, t^-1])`.
//!
//! `σ_i` acts by the block `[[1-t, t], [1, 0]]` on rows/columns `i, i+1`, and `σ_i⁻¹`
//! by its inverse `[[0, 1], [t^-1, 1-t^-1]]`. Products are formed left to right, so the
//! image of a word `w_1 w_2 ... w_k` is `B(w_1) B(w_2) ... B(w_k)`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::braid::{BraidWord, Letter, Sign};
use crate::laurent::{Coefficient, ComplexMatrix, LaurentMatrix, LaurentPoly};
use crate::{Error, Real, Result};

/// Tolerance used when deciding whether an eigenvalue lies on the unit circle.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

/// Burau image of a single generator `σ_i^{sign}` in `B_n`.
pub fn burau_generator<C: Coefficient>(n: usize, i: usize, sign: Sign) -> Result<LaurentMatrix<C>> {
    if i == 0 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
    }
    let (c, d) = (i - 1, i);
    let one = || LaurentPoly::<C>::one();
    let mut m = LaurentMatrix::identity(n);
    match sign {
        Sign::Pos => {
            m.set(c, c, &one() - &LaurentPoly::t());
            m.set(c, d, LaurentPoly::t());
            m.set(d, c, one());
            m.set(d, d, LaurentPoly::zero());
        }
        Sign::Neg => {
            let t_inv = LaurentPoly::monomial(C::one(), -1);
            m.set(c, c, LaurentPoly::zero());
            m.set(c, d, one());
            m.set(d, c, t_inv.clone());
            m.set(d, d, &one() - &t_inv);
        }
    }
    Ok(m)
}

fn apply_letter_symbolic<C: Coefficient>(m: &mut LaurentMatrix<C>, letter: Letter) {
    let n = m.size();
    let (c, d) = (letter.index() - 1, letter.index());
    for r in 0..n {
        let a = m.get(r, c).clone();
        let b = m.get(r, d).clone();
        let (new_c, new_d) = match letter.sign() {
            // [a b] * [[1-t, t], [1, 0]] = [a(1-t) + b, a t]
            Sign::Pos => (&(&a - &a.shift(1)) + &b, a.shift(1)),
            // [a b] * [[0, 1], [t^-1, 1-t^-1]] = [b t^-1, a + b(1 - t^-1)]
            Sign::Neg => (b.shift(-1), &(&a + &b) - &b.shift(-1)),
        };
        m.set(r, c, new_c);
        m.set(r, d, new_d);
    }
}

/// Exact Burau matrix of a braid word.
pub fn burau<C: Coefficient>(word: &BraidWord) -> LaurentMatrix<C> {
    let mut m = LaurentMatrix::identity(word.strands());
    for &l in word.letters() {
        apply_letter_symbolic(&mut m, l);
    }
    m
}

/// Determinant of a Laurent matrix.
pub fn det_laurent<C: Coefficient>(m: &LaurentMatrix<C>) -> LaurentPoly<C> {
    m.det()
}

/// Entrywise evaluation of a Laurent matrix at `t0 != 0`.
pub fn evaluate<C: Coefficient, T: Real>(m: &LaurentMatrix<C>, t0: Complex<T>) -> Result<ComplexMatrix<T>> {
    m.evaluate(t0)
}

/// Numerical Burau matrix at `t0`, built directly by column operations.
pub fn burau_at<T: Real>(word: &BraidWord, t0: Complex<T>) -> Result<ComplexMatrix<T>> {
    if t0.re.is_zero() && t0.im.is_zero() {
        return Err(Error::ZeroEvaluationPoint);
    }
    let n = word.strands();
    let one = Complex::new(T::one(), T::zero());
    let t_inv = one / t0;
    let mut m = ComplexMatrix::identity(n);
    let e = m.entries_mut();
    for &l in word.letters() {
        let (c, d) = (l.index() - 1, l.index());
        for r in 0..n {
            let a = e[r * n + c];
            let b = e[r * n + d];
            let (nc, nd) = match l.sign() {
                Sign::Pos => (a * (one - t0) + b, a * t0),
                Sign::Neg => (b * t_inv, a + b * (one - t_inv)),
            };
            e[r * n + c] = nc;
            e[r * n + d] = nd;
        }
    }
    Ok(m)
}

/// Trace of the Burau matrix evaluated at `t0 != 0`.
pub fn trace_at<T: Real>(word: &BraidWord, t0: Complex<T>) -> Result<Complex<T>> {
    Ok(burau_at(word, t0)?.trace())
}

/// Square integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(size: usize) -> IntMatrix {
        let mut entries = vec![BigInt::zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = BigInt::one();
        }
        IntMatrix { size, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMatrix("matrix is not square".into()));
        }
        Ok(IntMatrix { size, entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect() })
    }

    pub(crate) fn from_parts(size: usize, entries: Vec<BigInt>) -> IntMatrix {
        debug_assert_eq!(entries.len(), size * size);
        IntMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.size + c]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let mut out = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = &self.entries[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * &rhs.entries[k * n + c];
                }
            }
        }
        IntMatrix { size: n, entries: out }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.size).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        self.entries.chunks(self.size.max(1)).take(self.size).map(|r| r.iter().sum()).collect()
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.entries.chunks(n).map(|r| r.to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    m[i][j] = q;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Converts to `f64`, dividing every entry by `2^shift`; returns the shift used.
    fn to_scaled_f64(&self) -> (DMatrix<f64>, u64) {
        let bits = self.entries.iter().map(|v| v.bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(900);
        let n = self.size;
        let data = self.entries.iter().map(|v| (v >> shift as usize).to_f64().unwrap_or(f64::NAN)).collect::<Vec<_>>();
        (DMatrix::from_row_slice(n, n, &data), shift)
    }
}

/// The Burau matrix at `t = -1`, computed exactly over the integers.
pub fn symplectic(word: &BraidWord) -> IntMatrix {
    let n = word.strands();
    let mut m = IntMatrix::identity(n);
    for &l in word.letters() {
        let (c, d) = (l.index() - 1, l.index());
        for r in 0..n {
            let a = m.entries[r * n + c].clone();
            let b = m.entries[r * n + d].clone();
            let (nc, nd) = match l.sign() {
                Sign::Pos => (&a * 2 + &b, -a),
                Sign::Neg => (-b.clone(), a + b * 2),
            };
            m.entries[r * n + c] = nc;
            m.entries[r * n + d] = nd;
        }
    }
    m
}

/// `log(max(1, ρ))` where `ρ` is the spectral radius of [`symplectic`]`(word)`.
pub fn spectral_log(word: &BraidWord) -> f64 {
    let m = symplectic(word);
    if m.size() == 0 {
        return 0.0;
    }
    let (scaled, shift) = m.to_scaled_f64();
    let radius = scaled.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if radius == 0.0 {
        return 0.0;
    }
    let log_radius = radius.ln() + shift as f64 * std::f64::consts::LN_2;
    if log_radius <= SPECTRAL_TOLERANCE {
        0.0
    } else {
        log_radius
    }
}

/// `(-t)^e` as a Laurent polynomial.
pub fn neg_t_power<C: Coefficient>(e: i64) -> LaurentPoly<C> {
    let c = if e % 2 != 0 { -C::one() } else { C::one() };
    LaurentPoly::monomial(c, e as i32)
}
