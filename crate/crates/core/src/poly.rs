//! Sparse multivariate polynomials in up to four variables.
//!
//! Terms live in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded lexicographic, so iteration and printing are deterministic. The
//! same container is used with exact [`BigRational`] coefficients for the
//! symbolic side and with [`Complex64`] coefficients for path tracking.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest number of variables a polynomial may carry.
pub const MAX_VARS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("unsupported variable count {0} (at most {MAX_VARS})")]
    TooManyVars(usize),
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointArity { expected: usize, got: usize },
}

/// A monomial exponent `x1^e1 ... xn^en` with `n <= MAX_VARS`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    entries: [u16; MAX_VARS],
    len: u8,
}

impl Exponent {
    /// Panics if `entries` has more than [`MAX_VARS`] components.
    pub fn new(entries: &[u16]) -> Self {
        assert!(entries.len() <= MAX_VARS, "exponent of length {}", entries.len());
        let mut e = [0; MAX_VARS];
        e[..entries.len()].copy_from_slice(entries);
        Exponent {
            entries: e,
            len: entries.len() as u8,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(&[0; MAX_VARS][..nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = Self::zero(nvars);
        e.entries[var] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries[..self.len()]
    }

    pub fn degree(&self) -> u32 {
        self.entries().iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, var: usize) -> u16 {
        self.entries()[var]
    }

    fn mul(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len, other.len);
        let mut out = *self;
        for (o, e) in out.entries.iter_mut().zip(other.entries.iter()) {
            *o += e;
        }
        out
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then(self.degree().cmp(&other.degree()))
            .then_with(|| self.entries().cmp(other.entries()))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

/// Ring operations a polynomial coefficient has to support.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Used by the pretty printer to decide between `+` and `-`.
    fn is_negative_real(&self) -> bool;
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negative_real(&self) -> bool {
        self.is_negative()
    }
}

impl Coefficient for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_negative_real(&self) -> bool {
        self.im == 0.0 && self.re < 0.0
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A sparse polynomial. Zero coefficients are never stored, so the zero
/// polynomial is the empty term map.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type RationalPoly = MultiPoly<BigRational>;
pub type ComplexPoly = MultiPoly<Complex64>;

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "{} variables", nvars);
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponent::zero(nvars), c);
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, var), C::one())
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVars(nvars));
        }
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::NvarsMismatch {
                    left: nvars,
                    right: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, exp: &Exponent) -> Option<&C> {
        self.terms.get(exp)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone() * s.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The sum of all terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `subs[i]` for variable `i`. The result lives in the ring
    /// of the substituted polynomials.
    pub fn compose(&self, subs: &[MultiPoly<C>]) -> Result<MultiPoly<C>, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::NvarsMismatch {
                left: self.nvars,
                right: subs.len(),
            });
        }
        let target = match subs.first() {
            Some(s) => s.nvars,
            None => {
                return Ok(MultiPoly {
                    nvars: 0,
                    terms: self.terms.clone(),
                })
            }
        };
        for s in subs {
            if s.nvars != target {
                return Err(PolyError::NvarsMismatch {
                    left: target,
                    right: s.nvars,
                });
            }
        }
        // powers[i][e] = subs[i]^e
        let mut powers: Vec<Vec<MultiPoly<C>>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let max = self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0);
            let mut row = vec![MultiPoly::constant(target, C::one())];
            for k in 1..=max as usize {
                let next = &row[k - 1] * s;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &k) in e.entries().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k == 0 {
                continue;
            }
            let mut de = *e;
            de.entries[var] -= 1;
            out.add_term(de, c.clone() * C::from_i64(k as i64));
        }
        out
    }

    pub fn map_coeffs<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Evaluates at a complex point in double precision.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointArity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (x, &k) in point.iter().zip(e.entries()) {
                if k > 0 {
                    t *= x.powu(k as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Sum of coefficient magnitudes.
    pub fn coeff_norm1(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).sum()
    }

    /// Renders with the given variable names, highest graded-lex term first.
    pub fn format_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_real();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    let name = names.get(v).copied().unwrap_or("?");
                    if k == 1 {
                        name.to_string()
                    } else {
                        format!("{}^{}", name, k)
                    }
                })
                .collect();
            let coeff_is_one = mag.is_one();
            let coeff = format!("{}", mag);
            let coeff = if coeff.contains(['+', '-', ' ']) && !mono.is_empty() {
                format!("({})", coeff)
            } else {
                coeff
            };
            match (mono.is_empty(), coeff_is_one) {
                (true, _) => out.push_str(&coeff),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => {
                    out.push_str(&coeff);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }

    fn default_names(&self) -> &'static [&'static str] {
        match self.nvars {
            2 => &["x", "y"],
            4 => &["a", "b", "c", "d"],
            _ => &["x1", "x2", "x3", "x4"],
        }
    }
}

impl RationalPoly {
    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointArity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map_coeffs(|c| c.to_complex())
    }
}

impl<C: Coefficient> Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(self.default_names()))
    }
}

impl<C: Coefficient> Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

// Operator forms panic on a variable-count mismatch; use the `checked_*`
// methods where the arity is not known statically.
impl<C: Coefficient> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        self.checked_add(rhs).expect("polynomial add")
    }
}

impl<C: Coefficient> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        self.checked_sub(rhs).expect("polynomial sub")
    }
}

impl<C: Coefficient> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        self.checked_mul(rhs).expect("polynomial mul")
    }
}

impl<C: Coefficient> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coefficient> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> (RationalPoly, RationalPoly) {
        (RationalPoly::var(2, 0), RationalPoly::var(2, 1))
    }

    fn poly2(terms: &[(u16, u16, i64)]) -> RationalPoly {
        RationalPoly::from_terms(
            2,
            terms
                .iter()
                .map(|&(i, j, c)| (Exponent::new(&[i, j]), integer(c))),
        )
        .unwrap()
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let (x, y) = xy();
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scale(&integer(2)));
        assert_eq!(s.len(), 1);
        let z = &(&x + &y) - &(&x + &y);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn product_of_variables() {
        let (x, y) = xy();
        assert_eq!(&x * &y, poly2(&[(1, 1, 1)]));
    }

    #[test]
    fn degree_counts_total_degree() {
        // 3xy^2 - xy
        let p = poly2(&[(1, 2, 3), (1, 1, -1)]);
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn mismatched_arity_is_an_error() {
        let p = RationalPoly::var(2, 0);
        let q = RationalPoly::var(4, 0);
        assert!(matches!(
            p.checked_add(&q),
            Err(PolyError::NvarsMismatch { left: 2, right: 4 })
        ));
        assert!(p.checked_mul(&q).is_err());
        assert!(p.evaluate(&[Complex64::zero()]).is_err());
    }

    #[test]
    fn homogeneous_parts_of_example() {
        // 3x^3y^3 + xy + 2x^2 + 1
        let p = poly2(&[(3, 3, 3), (1, 1, 1), (2, 0, 2), (0, 0, 1)]);
        assert_eq!(p.homogeneous_part(2), poly2(&[(1, 1, 1), (2, 0, 2)]));
        assert_eq!(p.homogeneous_part(0), poly2(&[(0, 0, 1)]));
        assert_eq!(p.homogeneous_part(6), poly2(&[(3, 3, 3)]));
        assert!(p.homogeneous_part(7).is_zero());
        assert!(p.homogeneous_part(1).is_zero());
    }

    #[test]
    fn evaluate_unit_circle() {
        let p = poly2(&[(2, 0, 1), (0, 2, 1), (0, 0, -1)]);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::zero();
        assert_eq!(p.evaluate(&[one, zero]).unwrap(), zero);
        assert_eq!(p.evaluate(&[zero, zero]).unwrap(), -one);
    }

    #[test]
    fn evaluate_four_variables() {
        // 4ac + 4bd at (0, 0, s, s)
        let a = RationalPoly::var(4, 0);
        let b = RationalPoly::var(4, 1);
        let c = RationalPoly::var(4, 2);
        let d = RationalPoly::var(4, 3);
        let p = (&a * &c).scale(&integer(4)) + (&b * &d).scale(&integer(4));
        let s = Complex64::new(0.5f64.sqrt(), 0.0);
        let v = p
            .evaluate(&[Complex64::zero(), Complex64::zero(), s, s])
            .unwrap();
        assert_eq!(v, Complex64::zero());
    }

    #[test]
    fn compose_matches_binomial_expansion() {
        // x^2 at (a - c, b - d)
        let x2 = poly2(&[(2, 0, 1)]);
        let a = RationalPoly::var(4, 0);
        let b = RationalPoly::var(4, 1);
        let c = RationalPoly::var(4, 2);
        let d = RationalPoly::var(4, 3);
        let got = x2.compose(&[&a - &c, &b - &d]).unwrap();
        let want = &(&(&a * &a) - &(&a * &c).scale(&integer(2))) + &(&c * &c);
        assert_eq!(got, want);
    }

    #[test]
    fn derivative_drops_constants() {
        let p = poly2(&[(2, 1, 3), (0, 0, 5), (1, 0, 1)]);
        assert_eq!(p.derivative(0), poly2(&[(1, 1, 6), (0, 0, 1)]));
        assert_eq!(p.derivative(1), poly2(&[(2, 0, 3)]));
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let p = poly2(&[(0, 0, -1), (2, 0, 1), (0, 2, 4), (1, 1, -3)]);
        assert_eq!(p.to_string(), "x^2 - 3*x*y + 4*y^2 - 1");
        let q = RationalPoly::constant(4, rational(-1, 2));
        assert_eq!(q.to_string(), "-1/2");
        assert_eq!(RationalPoly::zero(4).to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec((0u16..4, 0u16..4, -20i64..20, 1i64..5), 0..6).prop_map(|ts| {
            RationalPoly::from_terms(
                2,
                ts.into_iter()
                    .map(|(i, j, n, d)| (Exponent::new(&[i, j]), rational(n, d))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn distributive_law(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        }

        #[test]
        fn homogeneous_parts_sum_to_whole(p in small_poly()) {
            let deg = p.degree().unwrap_or(0);
            let mut sum = RationalPoly::zero(2);
            for k in 0..=deg + 1 {
                sum = &sum + &p.homogeneous_part(k);
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn exact_and_float_evaluation_agree(
            p in small_poly(),
            xn in -1000i64..1000, xd in 1i64..50,
            yn in -1000i64..1000, yd in 1i64..50,
        ) {
            let pt = [rational(xn, xd), rational(yn, yd)];
            let exact = p.evaluate_exact(&pt).unwrap().to_f64().unwrap();
            let cpt: Vec<Complex64> = pt.iter().map(|r| r.to_complex()).collect();
            let approx = p.evaluate(&cpt).unwrap();
            // compare against the magnitude of the individual terms
            let scale: f64 = p
                .terms()
                .map(|(e, c)| {
                    c.to_complex().norm()
                        * cpt[0].norm().powi(e.get(0) as i32)
                        * cpt[1].norm().powi(e.get(1) as i32)
                })
                .sum::<f64>()
                .max(1e-300);
            prop_assert!((approx.re - exact).abs() <= 1e-12 * scale.max(exact.abs()));
            prop_assert_eq!(approx.im, 0.0);
        }
    }
}
