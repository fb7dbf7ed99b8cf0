//! Integer polynomials and their text form.
//!
//! Accepted input is either a comma separated coefficient list, highest power
//! first (`"2, 2, -1"`), or a sum of monomials (`"2x^2+2x-1"`). Coefficients
//! may be integers or fractions `p/q`; whitespace is ignored everywhere.
//! Rational input is scaled by the lcm of the denominators and the content
//! (gcd of all coefficients) is divided out, so the roots are unchanged.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{bigint_to_f64, gcd_all};

/// `a_0 x^m + a_1 x^(m-1) + ... + a_m` with `a_0 != 0`, `m >= 1` and unit
/// content.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from `a_0 … a_m`, dividing out the content.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if coeffs[0].is_zero() {
            return Err(Error::ZeroLeading);
        }
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooLow);
        }
        let content = gcd_all(&coeffs);
        let coeffs = if content.is_one() {
            coeffs
        } else {
            coeffs.into_iter().map(|c| c / &content).collect()
        };
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds from rational coefficients `a_0 … a_m` by clearing denominators.
    pub fn from_rationals(coeffs: &[BigRational]) -> Result<Self> {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        Self::new(ints)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }

    /// Degree `m`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_0 … a_m`, leading coefficient first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `a_i`.
    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(bigint_to_f64).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| bigint_to_f64(c).abs())
            .fold(0.0, f64::max)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .fold(0.0, |acc, c| acc * x + bigint_to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::zero(), |acc, c| acc * z + bigint_to_f64(c))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exp = m - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if !mag.is_one() || exp == 0 {
                write!(f, "{mag}")?;
            }
            match exp {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{exp}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.pos += 1;
            } else if c.is_whitespace() {
                // "1 2" is not a number; stop at whitespace followed by a digit
                let rest = self.src[self.pos..].trim_start();
                if digits.is_empty() || !rest.starts_with(|d: char| d.is_ascii_digit()) {
                    break;
                }
                return None;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            None
        } else {
            BigInt::from_str(&digits).ok()
        }
    }

    /// `int` or `int "/" int`, unsigned.
    fn magnitude(&mut self) -> Result<Option<BigRational>> {
        let start = self.pos;
        let Some(num) = self.digits() else {
            self.pos = start;
            return Ok(None);
        };
        if self.eat('/') {
            let Some(den) = self.digits() else {
                return self.err("expected denominator after '/'");
            };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Some(BigRational::new(num, den)))
        } else {
            Ok(Some(BigRational::from_integer(num)))
        }
    }

    fn parse(mut self) -> Result<IntPolynomial> {
        if self.src.trim().is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.src.contains(',') {
            self.parse_list()
        } else {
            self.parse_sum()
        }
    }

    fn parse_list(&mut self) -> Result<IntPolynomial> {
        let mut coeffs = Vec::new();
        loop {
            let negative = if self.eat('-') {
                true
            } else {
                self.eat('+');
                false
            };
            let Some(mag) = self.magnitude()? else {
                return self.err("expected coefficient");
            };
            coeffs.push(if negative { -mag } else { mag });
            match self.peek() {
                None => break,
                Some(',') => self.bump(),
                Some(c) => return self.err(format!("unexpected {c:?}")),
            }
        }
        IntPolynomial::from_rationals(&coeffs)
    }

    fn parse_sum(&mut self) -> Result<IntPolynomial> {
        let mut terms: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some('-') => {
                    self.bump();
                    true
                }
                Some('+') => {
                    self.bump();
                    false
                }
                _ if first => false,
                Some(c) => return self.err(format!("expected '+' or '-', found {c:?}")),
                None => unreachable!(),
            };
            first = false;
            let coef = self.magnitude()?;
            if coef.is_some() {
                self.eat('*');
            }
            let exp = if self.eat('x') {
                if self.eat('^') {
                    let Some(e) = self.digits() else {
                        return self.err("expected exponent after '^'");
                    };
                    match usize::try_from(e) {
                        Ok(e) if e <= 1 << 16 => e,
                        _ => return self.err("exponent too large"),
                    }
                } else {
                    1
                }
            } else if coef.is_some() {
                0
            } else {
                return match self.peek() {
                    Some(c) => self.err(format!("unexpected {c:?}")),
                    None => self.err("dangling sign"),
                };
            };
            let coef = coef.unwrap_or_else(BigRational::one);
            let coef = if negative { -coef } else { coef };
            *terms.entry(exp).or_insert_with(BigRational::zero) += coef;
        }
        terms.retain(|_, c| !c.is_zero());
        let Some((&degree, _)) = terms.iter().next_back() else {
            return Err(Error::ZeroLeading);
        };
        let coeffs: Vec<BigRational> = (0..=degree)
            .rev()
            .map(|e| terms.get(&e).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        IntPolynomial::from_rationals(&coeffs)
    }
}
