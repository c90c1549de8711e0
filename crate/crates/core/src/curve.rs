//! Plane curves `f(x, y) = 0` and their text file format.
//!
//! A curve file holds one term per line, `<i> <j> <coeff>`, meaning
//! `coeff * x^i * y^j`. The coefficient may be an integer, a decimal or a
//! fraction `p/q`. Lines starting with `#` and blank lines are skipped.
//! Repeated exponents are summed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::poly::{integer, Exponent, PolyError, RationalPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected `<i> <j> <coeff>`, got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: exponent {token:?} is not a nonnegative integer")]
    BadExponent { line: usize, token: String },
    #[error("line {line}: cannot read coefficient {token:?}")]
    BadCoefficient { line: usize, token: String },
    #[error("curve is the zero polynomial")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("a curve must be a nonzero polynomial")]
    Zero,
    #[error("a curve is a polynomial in two variables, got {0}")]
    Arity(usize),
}

/// A nonzero polynomial in `x, y` together with its total degree.
#[derive(Clone, PartialEq, Debug)]
pub struct Curve {
    poly: RationalPoly,
    degree: u32,
}

impl Curve {
    pub fn new(poly: RationalPoly) -> Result<Self, CurveError> {
        if poly.nvars() != 2 {
            return Err(CurveError::Arity(poly.nvars()));
        }
        let degree = poly.degree().ok_or(CurveError::Zero)?;
        Ok(Curve { poly, degree })
    }

    /// Builds a curve from integer `(i, j, coeff)` triples.
    pub fn from_int_terms(terms: &[(u16, u16, i64)]) -> Result<Self, CurveError> {
        let poly = RationalPoly::from_terms(
            2,
            terms
                .iter()
                .map(|&(i, j, c)| (Exponent::new(&[i, j]), integer(c))),
        )
        .expect("two variables");
        Curve::new(poly)
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `C_{i,j}`, the coefficient of `x^i y^j` (zero when absent).
    pub fn coeff(&self, i: u16, j: u16) -> BigRational {
        self.poly
            .coeff(&Exponent::new(&[i, j]))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `f(x_expr, y_expr)` for polynomials in any common ring.
    pub fn substitute(
        &self,
        x_expr: &RationalPoly,
        y_expr: &RationalPoly,
    ) -> Result<RationalPoly, PolyError> {
        self.poly.compose(&[x_expr.clone(), y_expr.clone()])
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

/// `f(x_expr, y_expr)` where the two expressions are corner coordinates in
/// `(a, b, c, d)`.
pub fn substitute_corner(
    f: &Curve,
    x_expr: &RationalPoly,
    y_expr: &RationalPoly,
) -> Result<RationalPoly, PolyError> {
    f.substitute(x_expr, y_expr)
}

fn parse_coefficient(token: &str) -> Option<BigRational> {
    if let Some((n, d)) = token.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = token.split_once('.') {
        if frac.is_empty() && int.is_empty() {
            return None;
        }
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", int_digits, frac);
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(num, den));
    }
    token.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn parse_curve(text: &str) -> Result<Curve, ParseError> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(ParseError::Malformed {
                line,
                text: raw.to_string(),
            });
        }
        let exp = |tok: &str| {
            tok.parse::<u16>().map_err(|_| ParseError::BadExponent {
                line,
                token: tok.to_string(),
            })
        };
        let i = exp(tokens[0])?;
        let j = exp(tokens[1])?;
        let c = parse_coefficient(tokens[2]).ok_or_else(|| ParseError::BadCoefficient {
            line,
            token: tokens[2].to_string(),
        })?;
        terms.push((Exponent::new(&[i, j]), c));
    }
    let poly = RationalPoly::from_terms(2, terms).expect("two variables");
    Curve::new(poly).map_err(|_| ParseError::ZeroPolynomial)
}

/// Writes the curve in the file format, highest term first. Coefficients
/// are written as integers or `p/q`, so the output parses back exactly.
pub fn format_curve(f: &Curve) -> String {
    let mut out = String::new();
    for (e, c) in f.poly().terms().rev() {
        out.push_str(&format!("{} {} {}\n", e.get(0), e.get(1), c));
    }
    out
}

impl FromStr for Curve {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_curve(s)
    }
}

/// A dense curve of degree `m` with integer coefficients drawn uniformly
/// from `[-bound, bound]`. The coefficient of `x^m` is redrawn until it is
/// nonzero so the degree is exactly `m`.
pub fn random_curve<R: Rng + ?Sized>(m: u32, bound: i64, rng: &mut R) -> Curve {
    let mut terms = Vec::new();
    for total in 0..=m as u16 {
        for i in 0..=total {
            let j = total - i;
            let mut c = rng.random_range(-bound..=bound);
            if i as u32 == m {
                while c == 0 {
                    c = rng.random_range(-bound..=bound);
                }
            }
            terms.push((i, j, c));
        }
    }
    Curve::from_int_terms(&terms).expect("nonzero leading term")
}

/// The largest coefficient magnitude, as a float.
pub fn max_abs_coeff(f: &Curve) -> f64 {
    use num_traits::ToPrimitive;
    f.poly()
        .terms()
        .map(|(_, c)| c.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}
