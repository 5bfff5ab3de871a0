//! Truncated formal power series with exact rational coefficients.
//!
//! A series of order `N` stores `c_0..=c_N`. Binary operations truncate to
//! the smaller operand order; nothing is ever padded to a larger order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,
    #[error("constant term {0} is not the square of a rational")]
    NotASquare(BigRational),
    #[error("coefficient {index} is {value}, not an integer")]
    NotInteger { index: usize, value: BigRational },
}

/// Integer polynomial, constant term first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial(Vec<BigInt>);

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> IntPolynomial {
        let mut p = IntPolynomial(coeffs);
        while p.0.last().is_some_and(Zero::is_zero) {
            p.0.pop();
        }
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPolynomial::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        (0..e).fold(IntPolynomial::from_i64(&[1]), |acc, _| acc.mul(self))
    }

    pub fn to_series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs((0..=order).map(|i| BigRational::from_integer(self.coeff(i))).collect())
    }
}

/// Coefficients `c_0..=c_N` of a power series known modulo `x^(N+1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TruncatedSeries {
    /// Takes ownership of `c_0..=c_N`; an empty vector is not a series.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> TruncatedSeries {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_ints<I: Into<BigInt> + Clone>(coeffs: &[I]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(coeffs.iter().map(|c| BigRational::from_integer(c.clone().into())).collect())
    }

    pub fn zero(order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(vec![BigRational::zero(); order + 1])
    }

    pub fn constant(c: i64, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = rat(c);
        s
    }

    /// The series `x`.
    pub fn x(order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        if order >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    /// A polynomial in `x` given by small integer coefficients.
    pub fn poly(coeffs: &[i64], order: usize) -> TruncatedSeries {
        IntPolynomial::from_i64(coeffs).to_series(order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    /// Integer coefficients, failing on the first non-integer.
    pub fn to_integers(&self) -> Result<Vec<BigInt>, SeriesError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(SeriesError::NotInteger { index, value: c.clone() })
                }
            })
            .collect()
    }

    pub fn scale(&self, k: &BigRational) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries::from_coeffs(out)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<TruncatedSeries, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &out[n - i];
            }
            out.push(-(acc * &inv0));
        }
        Ok(TruncatedSeries::from_coeffs(out))
    }

    pub fn div(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        (0..e).fold(TruncatedSeries::constant(1, self.order()), |acc, _| acc.mul(self))
    }

    /// Principal square root (positive constant term), coefficient by
    /// coefficient from `s * s = a`.
    pub fn sqrt(&self) -> Result<TruncatedSeries, SeriesError> {
        let c0 = &self.coeffs[0];
        let s0 = rational_sqrt(c0).ok_or_else(|| SeriesError::NotASquare(c0.clone()))?;
        if s0.is_zero() {
            // zero constant term: only the zero series has a series root here
            return if self.is_zero() { Ok(self.clone()) } else { Err(SeriesError::NotASquare(c0.clone())) };
        }
        let two_s0 = &s0 * rat(2);
        let mut out = Vec::with_capacity(self.coeffs.len());
        out.push(s0);
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc -= &out[i] * &out[n - i];
            }
            out.push(acc / &two_s0);
        }
        Ok(TruncatedSeries::from_coeffs(out))
    }

    /// Formal derivative; the order drops by one (order 0 stays 0).
    pub fn derivative(&self) -> TruncatedSeries {
        if self.order() == 0 {
            return TruncatedSeries::zero(0);
        }
        TruncatedSeries::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect(),
        )
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift(&self, k: usize) -> TruncatedSeries {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k < out.len() {
                out[i + k] = c.clone();
            }
        }
        TruncatedSeries::from_coeffs(out)
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Coefficients of `num / den` up to `order` by the convolution recurrence
/// `den_0 c_n = num_n - sum_{i>=1} den_i c_{n-i}`.
pub fn from_rational(num: &IntPolynomial, den: &IntPolynomial, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    let d0 = BigRational::from_integer(d0);
    let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = BigRational::from_integer(num.coeff(n));
        for i in 1..=n.min(den.degree().unwrap_or(0)) {
            acc -= BigRational::from_integer(den.coeff(i)) * &out[n - i];
        }
        out.push(acc / &d0);
    }
    Ok(TruncatedSeries::from_coeffs(out))
}

/// Residual of the quartic relation
/// `(2x²+8x−1)A⁴ + (x³+4x²−46x+5)A³ + (3x³−21x²+94x−9)A² + (x³+12x²−82x+7)A + 3x²+26x−2`
/// satisfied by the generating function of permutations avoiding
/// {4231, 4312, 4321}.
pub fn residual_quartic(a: &TruncatedSeries) -> TruncatedSeries {
    let n = a.order();
    let p = |c: &[i64]| TruncatedSeries::poly(c, n);
    let a2 = a.mul(a);
    let a3 = a2.mul(a);
    let a4 = a3.mul(a);
    p(&[-1, 8, 2]).mul(&a4)
        + p(&[5, -46, 4, 1]).mul(&a3)
        + p(&[-9, 94, -21, 3]).mul(&a2)
        + p(&[7, -82, 12, 1]).mul(a)
        + p(&[-2, 26, 3])
}

/// `A − 1 − xA/(1 − xA²)`, zero exactly when `A = 1 + xA/(1 − xA²)` holds
/// to the working order.
pub fn residual_nested(a: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let n = a.order();
    let x = TruncatedSeries::x(n);
    let one = TruncatedSeries::constant(1, n);
    let inner = one.clone() - x.mul(&a.mul(a));
    Ok(a.clone() - one - x.mul(a).div(&inner)?)
}

impl Add for TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self + &rhs
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_coeffs((0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect())
    }
}

impl Sub for TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self - &rhs
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries::from_coeffs((0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect())
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{self}]")
    }
}
