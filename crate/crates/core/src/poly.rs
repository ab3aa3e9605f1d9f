//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Q,
    T,
}

impl Var {
    fn symbol(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::T => "t",
        }
    }
}

/// A counting polynomial, coefficients low to high with no trailing zeros.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountPoly {
    var: Var,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CountPoly {
    pub fn new(var: Var, coeffs: Vec<BigRational>) -> Self {
        let mut p = CountPoly { var, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(var: Var) -> Self {
        CountPoly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: i64) -> Self {
        Self::from_ints(var, &[c])
    }

    pub fn constant_rat(var: Var, c: BigRational) -> Self {
        Self::new(var, vec![c])
    }

    /// The variable itself.
    pub fn x(var: Var) -> Self {
        Self::from_ints(var, &[0, 1])
    }

    /// `x + c`.
    pub fn linear(var: Var, c: i64) -> Self {
        Self::from_ints(var, &[c, 1])
    }

    pub fn monomial(var: Var, coeff: i64, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = rat(coeff);
        Self::new(var, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, or `NonIntegral` if any coefficient is fractional.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral(c.to_string()))
                }
            })
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = CountPoly::constant(self.var, 1);
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates at an integer and requires an integer result.
    pub fn eval_int(&self, x: i64) -> Result<BigInt> {
        let v = self.eval(&rat(x));
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NonIntegral(v.to_string()))
        }
    }

    /// Same as [`eval_int`](Self::eval_int) but narrowed to `i128`.
    pub fn eval_i128(&self, x: i64) -> Result<i128> {
        let v = self.eval_int(x)?;
        v.to_i128()
            .ok_or_else(|| Error::Invalid(format!("value {v} does not fit in i128")))
    }

    /// Euclidean division; returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &CountPoly) -> Result<(CountPoly, CountPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Ok((CountPoly::zero(self.var), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        Ok((Self::new(self.var, quot), Self::new(self.var, rem)))
    }

    /// Division that must leave no remainder.
    pub fn div_exact(&self, divisor: &CountPoly) -> Result<CountPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// `x^d · P(1/x)`; requires `deg P ≤ d`.
    pub fn reciprocal(&self, d: usize) -> Result<CountPoly> {
        if self.degree().is_some_and(|deg| deg > d) {
            return Err(Error::Invalid(format!(
                "degree {} exceeds reciprocal degree {d}",
                self.coeffs.len() - 1
            )));
        }
        let mut coeffs = vec![BigRational::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Ok(Self::new(self.var, coeffs))
    }

    /// Same coefficients under another variable name.
    pub fn with_var(&self, var: Var) -> Self {
        CountPoly { var, coeffs: self.coeffs.clone() }
    }

    /// JSON array of coefficients, low to high. Integral coefficients are
    /// emitted as numbers (or strings when they overflow i64), fractions as
    /// `"a/b"` strings.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(rational_to_json).collect())
    }
}

pub fn rational_to_json(c: &BigRational) -> Value {
    if c.is_integer() {
        bigint_to_json(&c.to_integer())
    } else {
        Value::String(c.to_string())
    }
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

impl Add for &CountPoly {
    type Output = CountPoly;
    fn add(self, rhs: &CountPoly) -> CountPoly {
        debug_assert_eq!(self.var, rhs.var);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        CountPoly::new(self.var, coeffs)
    }
}

impl Sub for &CountPoly {
    type Output = CountPoly;
    fn sub(self, rhs: &CountPoly) -> CountPoly {
        self + &(-rhs)
    }
}

impl Neg for &CountPoly {
    type Output = CountPoly;
    fn neg(self) -> CountPoly {
        CountPoly::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &CountPoly {
    type Output = CountPoly;
    fn mul(self, rhs: &CountPoly) -> CountPoly {
        debug_assert_eq!(self.var, rhs.var);
        if self.is_zero() || rhs.is_zero() {
            return CountPoly::zero(self.var);
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        CountPoly::new(self.var, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CountPoly {
            type Output = CountPoly;
            fn $f(self, rhs: CountPoly) -> CountPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&CountPoly> for CountPoly {
            type Output = CountPoly;
            fn $f(self, rhs: &CountPoly) -> CountPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CountPoly {
    type Output = CountPoly;
    fn neg(self) -> CountPoly {
        -&self
    }
}

impl fmt::Display for CountPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{}", abs)?;
                } else {
                    write!(f, "({})", abs)?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "{x}")?,
                _ => write!(f, "{x}^{i}")?,
            }
        }
        Ok(())
    }
}

/// Truncated power series helpers (coefficients low to high, fixed length).
pub(crate) mod series {
    use super::*;

    pub fn from_poly(p: &CountPoly, len: usize) -> Vec<BigRational> {
        (0..len).map(|i| p.coeff(i)).collect()
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let len = a.len().min(b.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(a: &[BigRational]) -> Result<Vec<BigRational>> {
        let a0 = a.first().filter(|c| !c.is_zero()).ok_or(Error::DivisionByZero)?;
        let inv0 = a0.recip();
        let mut out = vec![BigRational::zero(); a.len()];
        out[0] = inv0.clone();
        for n in 1..a.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                acc += &a[k] * &out[n - k];
            }
            out[n] = -acc * &inv0;
        }
        Ok(out)
    }

    pub fn add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(a: &[BigRational], c: &BigRational) -> Vec<BigRational> {
        a.iter().map(|x| x * c).collect()
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(n choose k)` via the gcd-free route, used only to sanity check
/// [`binomial`] in tests.
#[cfg(test)]
fn binomial_pascal(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Integer power of an i64, as a big integer.
pub fn big_pow(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}
