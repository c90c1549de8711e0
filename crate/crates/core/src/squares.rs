//! Complex squares, the corner generators of a curve and their rewriting.
//!
//! A tuple `(a, b, c, d)` describes the square with center `(a, b)` and
//! corners `(a + c, b + d), (a + d, b - c), (a - c, b - d), (a - d, b + c)`.
//! Evaluating a curve at the four corners gives the naive generators; the
//! rewritten generators `g1..g4` are fixed signed combinations of them with
//! much smaller Newton polytopes.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::poly::{integer, Exponent, RationalPoly};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareParam {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl SquareParam {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        SquareParam { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let r = |v| Complex64::new(v, 0.0);
        SquareParam::new(r(a), r(b), r(c), r(d))
    }

    pub fn from_array(v: [Complex64; 4]) -> Self {
        SquareParam::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest absolute imaginary part over the four parameters.
    pub fn max_imag(&self) -> f64 {
        self.to_array().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Max-norm distance between parameter tuples.
    pub fn distance(&self, other: &SquareParam) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

pub type Point2 = (Complex64, Complex64);

/// The four corners, in the order `(a + c, b + d), (a + d, b - c),
/// (a - c, b - d), (a - d, b + c)`.
pub fn corners(sq: &SquareParam) -> [Point2; 4] {
    let SquareParam { a, b, c, d } = *sq;
    [(a + c, b + d), (a + d, b - c), (a - c, b - d), (a - d, b + c)]
}

/// The four parameter tuples describing the same square.
pub fn orbit(sq: &SquareParam) -> [SquareParam; 4] {
    let SquareParam { a, b, c, d } = *sq;
    [
        SquareParam::new(a, b, c, d),
        SquareParam::new(a, b, d, -c),
        SquareParam::new(a, b, -c, -d),
        SquareParam::new(a, b, -d, c),
    ]
}

fn canonical_key(sq: &SquareParam) -> [f64; 4] {
    [sq.c.re, sq.c.im, sq.d.re, sq.d.im]
}

/// Orbit member with the lexicographically largest `(Re c, Im c, Re d, Im d)`.
///
/// Components closer than `1e-9` (relative to the offset size) count as
/// equal, so rounding noise in a vanishing imaginary part cannot decide the
/// representative.
pub fn canonicalize(sq: &SquareParam) -> SquareParam {
    let members = orbit(sq);
    let scale = 1.0 + sq.c.norm() + sq.d.norm();
    let eps = 1e-9 * scale;
    let mut best = members[0];
    for cand in &members[1..] {
        let (kc, kb) = (canonical_key(cand), canonical_key(&best));
        for (x, y) in kc.iter().zip(kb.iter()) {
            if (x - y).abs() <= eps {
                continue;
            }
            if x > y {
                best = *cand;
            }
            break;
        }
    }
    best
}

/// Degenerate squares have collapsed to a point: `|c| + |d| < tol`.
pub fn is_degenerate(sq: &SquareParam, tol: f64) -> bool {
    sq.c.norm() + sq.d.norm() < tol
}

/// Rows are `g1..g4`, columns the naive generators in corner order
/// `f(a+c,b+d), f(a+d,b-c), f(a-c,b-d), f(a-d,b+c)`.
pub const H_MATRIX: [[i8; 4]; 4] = [
    [1, -1, 1, -1],
    [1, 0, -1, 0],
    [0, -1, 0, 1],
    [0, 1, 0, 0],
];

/// Inverse of [`H_MATRIX`], scaled by two: `2 * naive_j = sum_i R[j][i] g_i`.
pub const RECONSTRUCTION_X2: [[i8; 4]; 4] = [
    [1, 1, 1, 2],
    [0, 0, 0, 2],
    [1, -1, 1, 2],
    [0, 0, 2, 2],
];

/// Row `i` (0-based) of the h-matrix reordered to the sign pattern used by
/// [`presence_coefficient`]: `f(a+c,b+d), f(a-c,b-d), f(a-d,b+c), f(a+d,b-c)`.
pub fn presence_row(i: usize) -> [i8; 4] {
    let r = H_MATRIX[i];
    [r[0], r[2], r[3], r[1]]
}

/// Corner coordinate expressions in `(a, b, c, d)`, in corner order.
pub fn corner_expressions() -> [(RationalPoly, RationalPoly); 4] {
    let v = |i| RationalPoly::var(4, i);
    let (a, b, c, d) = (v(0), v(1), v(2), v(3));
    [
        (&a + &c, &b + &d),
        (&a + &d, &b - &c),
        (&a - &c, &b - &d),
        (&a - &d, &b + &c),
    ]
}

/// `f` evaluated symbolically at the four corners.
pub fn naive_generators(f: &Curve) -> [RationalPoly; 4] {
    corner_expressions().map(|(x, y)| f.substitute(&x, &y).expect("linear forms in four variables"))
}

fn combine(row: &[i8; 4], polys: &[RationalPoly; 4]) -> RationalPoly {
    let mut acc = RationalPoly::zero(4);
    for (&h, p) in row.iter().zip(polys.iter()) {
        match h {
            0 => {}
            1 => acc = &acc + p,
            -1 => acc = &acc - p,
            _ => acc = &acc + &p.scale(&integer(h as i64)),
        }
    }
    acc
}

/// Naive and rewritten corner generators of one curve.
#[derive(Debug, Clone)]
pub struct CornerSystem {
    pub m: u32,
    pub naive: [RationalPoly; 4],
    pub g: [RationalPoly; 4],
}

impl CornerSystem {
    pub fn h_matrix(&self) -> &'static [[i8; 4]; 4] {
        &H_MATRIX
    }

    /// Recovers the naive generators from `g1..g4`.
    pub fn reconstruct_naive(&self) -> [RationalPoly; 4] {
        let half = BigRational::new(1.into(), 2.into());
        RECONSTRUCTION_X2.map(|row| combine(&row, &self.g).scale(&half))
    }

    /// Indices (0-based) of generators that vanish identically.
    pub fn zero_generators(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.g[i].is_zero()).collect()
    }
}

pub fn rewritten_generators(f: &Curve) -> CornerSystem {
    let naive = naive_generators(f);
    let g = H_MATRIX.map(|row| combine(&row, &naive));
    CornerSystem {
        m: f.degree(),
        naive,
        g,
    }
}

/// Whether `a^g1 b^g2 c^g3 d^g4` appears in generator `i` (1-based) of a
/// curve with generic coefficients.
pub fn monomial_present(i: usize, gamma: &Exponent) -> bool {
    let (g3, g4) = (gamma.get(2), gamma.get(3));
    let odd = (g3 + g4) % 2 == 1;
    match i {
        1 => gamma.degree() >= 1 && !odd && !(g3 == g4 && g3 % 2 == 0),
        2 | 3 => odd,
        4 => true,
        _ => panic!("generator index {} out of range 1..=4", i),
    }
}

fn binomial(n: u32, k: u32) -> BigRational {
    let mut acc = num_bigint::BigInt::from(1);
    for t in 0..k {
        acc = acc * (n - t) / (t + 1);
    }
    BigRational::from_integer(acc)
}

fn sign(parity: u16) -> i64 {
    if parity.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Closed-form coefficient of `a^g1 b^g2 c^g3 d^g4` in the generator whose
/// sign row is `h` (ordered as in [`presence_row`]).
pub fn presence_coefficient(gamma: &Exponent, h: &[i8; 4], f: &Curve) -> BigRational {
    let [g1, g2, g3, g4] = [gamma.get(0), gamma.get(1), gamma.get(2), gamma.get(3)];
    let h = h.map(|v| v as i64);
    let first = binomial((g1 + g3) as u32, g1 as u32)
        * binomial((g2 + g4) as u32, g2 as u32)
        * f.coeff(g1 + g3, g2 + g4)
        * integer(h[0] + h[1] * sign(g3 + g4));
    let second = binomial((g1 + g4) as u32, g1 as u32)
        * binomial((g2 + g3) as u32, g2 as u32)
        * f.coeff(g1 + g4, g2 + g3)
        * integer(h[2] * sign(g4) + h[3] * sign(g3));
    first + second
}

/// A rotation with rational entries followed by a rational translation:
/// `p -> R p + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidMotion {
    pub cos: BigRational,
    pub sin: BigRational,
    pub tx: BigRational,
    pub ty: BigRational,
}

const PYTHAGOREAN: [(i64, i64, i64); 8] = [
    (3, 4, 5),
    (5, 12, 13),
    (8, 15, 17),
    (7, 24, 25),
    (20, 21, 29),
    (12, 35, 37),
    (9, 40, 41),
    (28, 45, 53),
];

fn approx_rational(x: f64) -> BigRational {
    let scaled = (x * 1e6).round() as i64;
    BigRational::new(scaled.into(), 1_000_000.into())
}

impl RigidMotion {
    pub fn identity() -> Self {
        RigidMotion {
            cos: integer(1),
            sin: integer(0),
            tx: integer(0),
            ty: integer(0),
        }
    }

    /// Rotation with `cos = p/r, sin = q/r`. Panics unless `p^2 + q^2 = r^2`.
    pub fn from_pythagorean(p: i64, q: i64, r: i64, tx: BigRational, ty: BigRational) -> Self {
        assert_eq!(p * p + q * q, r * r, "not a Pythagorean triple");
        RigidMotion {
            cos: BigRational::new(p.into(), r.into()),
            sin: BigRational::new(q.into(), r.into()),
            tx,
            ty,
        }
    }

    /// Rational rotation close to angle `theta`, through the rational
    /// parametrization of the circle by `u ~ tan(theta / 2)`.
    pub fn from_angle(theta: f64, t: (f64, f64)) -> Self {
        let theta = theta.rem_euclid(std::f64::consts::TAU);
        let (cos, sin) = if (theta - std::f64::consts::PI).abs() < 1e-12 {
            (integer(-1), integer(0))
        } else {
            let u = approx_rational((theta / 2.0).tan());
            let one = integer(1);
            let den = &one + &u * &u;
            ((&one - &u * &u) / &den, (integer(2) * &u) / &den)
        };
        RigidMotion {
            cos,
            sin,
            tx: approx_rational(t.0),
            ty: approx_rational(t.1),
        }
    }

    /// A seeded rotation from a small table of Pythagorean triples with a
    /// translation by multiples of 1/7.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (mut p, mut q, r) = PYTHAGOREAN[rng.random_range(0..PYTHAGOREAN.len())];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut p, &mut q);
        }
        if rng.random_bool(0.5) {
            q = -q;
        }
        let tx = BigRational::new(rng.random_range(-7i64..=7).into(), 7.into());
        let ty = BigRational::new(rng.random_range(-7i64..=7).into(), 7.into());
        RigidMotion::from_pythagorean(p, q, r, tx, ty)
    }

    pub fn is_identity(&self) -> bool {
        *self == RigidMotion::identity()
    }

    fn rotation_f64(&self) -> (f64, f64) {
        (
            self.cos.to_f64().unwrap_or(1.0),
            self.sin.to_f64().unwrap_or(0.0),
        )
    }

    /// Takes a square of the transformed curve to the matching square of
    /// the original curve; corner labels are preserved.
    pub fn map_square(&self, sq: &SquareParam) -> SquareParam {
        let (cs, sn) = self.rotation_f64();
        let t = (
            Complex64::new(self.tx.to_f64().unwrap_or(0.0), 0.0),
            Complex64::new(self.ty.to_f64().unwrap_or(0.0), 0.0),
        );
        let rot = |x: Complex64, y: Complex64| (x * cs - y * sn, x * sn + y * cs);
        let (a, b) = rot(sq.a, sq.b);
        let (c, d) = rot(sq.c, sq.d);
        SquareParam::new(a + t.0, b + t.1, c, d)
    }
}

/// `f'(x, y) = f(R (x, y) + t)`.
pub fn transform_curve(f: &Curve, motion: &RigidMotion) -> Curve {
    let x = RationalPoly::var(2, 0);
    let y = RationalPoly::var(2, 1);
    let k = |c: &BigRational| RationalPoly::constant(2, c.clone());
    let new_x = &(&x.scale(&motion.cos) - &y.scale(&motion.sin)) + &k(&motion.tx);
    let new_y = &(&x.scale(&motion.sin) + &y.scale(&motion.cos)) + &k(&motion.ty);
    let poly = f.substitute(&new_x, &new_y).expect("two variables");
    Curve::new(poly).expect("rigid motions preserve nonzero curves")
}

/// All exponents in four variables of total degree at most `m`.
pub fn exponents_up_to(m: u32) -> Vec<Exponent> {
    let m = m as u16;
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            for c in 0..=m - a - b {
                for d in 0..=m - a - b - c {
                    out.push(Exponent::new(&[a, b, c, d]));
                }
            }
        }
    }
    out
}

/// True when `corners(x)` and `corners(y)` agree as unordered sets.
pub fn same_corner_set(x: &SquareParam, y: &SquareParam, tol: f64) -> bool {
    let cx = corners(x);
    let cy = corners(y);
    cx.iter().all(|p| {
        cy.iter()
            .any(|q| (p.0 - q.0).norm() < tol && (p.1 - q.1).norm() < tol)
    }) && cy.iter().all(|p| {
        cx.iter()
            .any(|q| (p.0 - q.0).norm() < tol && (p.1 - q.1).norm() < tol)
    })
}

impl Default for RigidMotion {
    fn default() -> Self {
        RigidMotion::identity()
    }
}

#[allow(dead_code)]
fn is_zero_rational(r: &BigRational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{parse_curve, random_curve};
    use crate::poly::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn corners_of_unit_diamond() {
        let sq = SquareParam::real(0.0, 0.0, 0.0, 1.0);
        let cs = corners(&sq);
        assert_eq!(cs[0], (c(0.0), c(1.0)));
        assert_eq!(cs[1], (c(1.0), c(0.0)));
        assert_eq!(cs[2], (c(0.0), c(-1.0)));
        assert_eq!(cs[3], (c(-1.0), c(0.0)));
    }

    #[test]
    fn degenerate_square_has_coincident_corners() {
        let sq = SquareParam::real(1.5, -2.0, 0.0, 0.0);
        for p in corners(&sq) {
            assert_eq!(p, (c(1.5), c(-2.0)));
        }
        assert!(is_degenerate(&sq, 1e-8));
        assert!(is_degenerate(&SquareParam::real(1.0, 2.0, 0.0, 0.0), 1e-8));
        assert!(is_degenerate(&SquareParam::real(0.0, 0.0, 1e-12, 0.0), 1e-8));
        assert!(!is_degenerate(&SquareParam::real(0.0, 0.0, 1e-6, 0.0), 1e-8));
        let o = orbit(&sq);
        assert!(o.iter().all(|x| x.distance(&sq) == 0.0));
    }

    #[test]
    fn ellipse_square_corners() {
        let s = 0.2f64.sqrt();
        let cs = corners(&SquareParam::real(0.0, 0.0, s, s));
        assert_eq!(cs[0], (c(s), c(s)));
        assert_eq!(cs[1], (c(s), c(-s)));
        assert_eq!(cs[2], (c(-s), c(-s)));
        assert_eq!(cs[3], (c(-s), c(s)));
    }

    #[test]
    fn orbit_of_unit_diamond() {
        let o = orbit(&SquareParam::real(0.0, 0.0, 0.0, 1.0));
        for want in [(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 1.0)] {
            let want = SquareParam::real(0.0, 0.0, want.0, want.1);
            assert!(o.iter().any(|x| x.distance(&want) == 0.0));
        }
        for x in &o {
            assert_eq!(canonicalize(x), SquareParam::real(0.0, 0.0, 1.0, 0.0));
        }
    }

    #[test]
    fn canonical_representative_ignores_rounding_noise() {
        let s = 0.2f64.sqrt();
        let noisy = SquareParam::new(
            c(0.0),
            c(0.0),
            Complex64::new(s, 1e-17),
            Complex64::new(-s, -3e-17),
        );
        let canon = canonicalize(&noisy);
        assert!((canon.c.re - s).abs() < 1e-15 && (canon.d.re - s).abs() < 1e-15);
    }

    #[test]
    fn orbit_members_share_corners_and_representative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut z = || Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let sq = SquareParam::new(z(), z(), z(), z());
            let canon = canonicalize(&sq);
            for x in orbit(&sq) {
                assert!(same_corner_set(&x, &sq, 1e-12));
                assert_eq!(canonicalize(&x), canon);
            }
        }
    }

    #[test]
    fn naive_generators_of_a_line() {
        let f = parse_curve("1 0 1").unwrap();
        let n = naive_generators(&f);
        let v = |i| RationalPoly::var(4, i);
        assert_eq!(n[0], &v(0) + &v(2));
        assert_eq!(n[1], &v(0) + &v(3));
        assert_eq!(n[2], &v(0) - &v(2));
        assert_eq!(n[3], &v(0) - &v(3));
    }

    #[test]
    fn naive_generator_of_circle() {
        let f = parse_curve("2 0 1\n0 2 1\n0 0 -1").unwrap();
        let n = naive_generators(&f);
        let e = |a, b, c, d, k| (Exponent::new(&[a, b, c, d]), integer(k));
        let want = RationalPoly::from_terms(
            4,
            [
                e(2, 0, 0, 0, 1),
                e(1, 0, 1, 0, 2),
                e(0, 0, 2, 0, 1),
                e(0, 2, 0, 0, 1),
                e(0, 1, 0, 1, 2),
                e(0, 0, 0, 2, 1),
                e(0, 0, 0, 0, -1),
            ],
        )
        .unwrap();
        assert_eq!(n[0], want);
    }

    #[test]
    fn naive_generators_contain_the_simplex_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in 2..6 {
            let f = random_curve(m, 1000, &mut rng);
            let m16 = m as u16;
            for n in naive_generators(&f) {
                assert_eq!(n.degree(), Some(m));
                for e in [[m16, 0, 0, 0], [0, m16, 0, 0], [0, 0, m16, 0], [0, 0, 0, m16], [0; 4]] {
                    assert!(n.coeff(&Exponent::new(&e)).is_some(), "missing {:?}", e);
                }
            }
        }
    }

    #[test]
    fn circle_generators() {
        let f = parse_curve("2 0 1\n0 2 1\n0 0 -1").unwrap();
        let sys = rewritten_generators(&f);
        let e = |a, b, c, d, k| (Exponent::new(&[a, b, c, d]), integer(k));
        assert!(sys.g[0].is_zero());
        assert_eq!(
            sys.g[1],
            RationalPoly::from_terms(4, [e(1, 0, 1, 0, 4), e(0, 1, 0, 1, 4)]).unwrap()
        );
        assert_eq!(
            sys.g[2],
            RationalPoly::from_terms(4, [e(1, 0, 0, 1, -4), e(0, 1, 1, 0, 4)]).unwrap()
        );
        assert_eq!(sys.zero_generators(), vec![0]);
    }

    #[test]
    fn hyperbola_generators() {
        // f = xy: g2 = f(a+c,b+d) - f(a-c,b-d) = 2ad + 2bc
        let f = parse_curve("1 1 1").unwrap();
        let sys = rewritten_generators(&f);
        let e = |a, b, c, d, k| (Exponent::new(&[a, b, c, d]), integer(k));
        assert_eq!(
            sys.g[1],
            RationalPoly::from_terms(4, [e(1, 0, 0, 1, 2), e(0, 1, 1, 0, 2)]).unwrap()
        );
        let zero = Exponent::zero(4);
        for g in &sys.g[..3] {
            assert!(g.coeff(&zero).is_none());
        }
        // g3 = f(a-d,b+c) - f(a+d,b-c) = 2ac - 2bd
        assert_eq!(
            sys.g[2],
            RationalPoly::from_terms(4, [e(1, 0, 1, 0, 2), e(0, 1, 0, 1, -2)]).unwrap()
        );
    }

    #[test]
    fn quartic_g1_matches_worked_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_curve(4, 1000, &mut rng);
        let g1 = &rewritten_generators(&f).g[0];
        let co = |i, j| f.coeff(i, j);
        let at = |e: [u16; 4]| g1.coeff(&Exponent::new(&e)).cloned().unwrap_or_default();
        assert_eq!(at([2, 0, 2, 0]), integer(-2) * co(2, 2) + integer(12) * co(4, 0));
        assert_eq!(at([1, 1, 1, 1]), integer(16) * co(2, 2));
        assert_eq!(at([0, 0, 2, 0]), integer(2) * co(2, 0) - integer(2) * co(0, 2));
        assert_eq!(at([0, 0, 3, 1]), integer(2) * co(1, 3) + integer(2) * co(3, 1));
        assert_eq!(at([1, 0, 1, 1]), integer(8) * co(2, 1));
        assert_eq!(at([0, 0, 1, 1]), integer(4) * co(1, 1));
        assert_eq!(at([0, 2, 0, 2]), integer(12) * co(0, 4) - integer(2) * co(2, 2));
        // exactly the 22 monomials of the worked example
        assert_eq!(g1.len(), 22);
        assert!(g1.coeff(&Exponent::new(&[0, 0, 2, 2])).is_none());
    }

    #[test]
    fn presence_table_entries() {
        assert!(!monomial_present(1, &Exponent::new(&[0, 0, 2, 2])));
        assert!(monomial_present(1, &Exponent::new(&[1, 1, 1, 1])));
        assert!(monomial_present(2, &Exponent::new(&[0, 0, 1, 0])));
        assert!(!monomial_present(2, &Exponent::new(&[1, 0, 1, 1])));
        assert!(!monomial_present(1, &Exponent::zero(4)));
        assert!(monomial_present(4, &Exponent::zero(4)));
    }

    #[test]
    fn presence_formula_collapses_on_even_diagonal() {
        let f = random_curve(5, 100, &mut ChaCha8Rng::seed_from_u64(1));
        let h1 = presence_row(0);
        assert_eq!(h1, [1, 1, -1, -1]);
        let g = Exponent::new(&[1, 0, 2, 2]);
        assert!(presence_coefficient(&g, &h1, &f).is_zero());
        // odd diagonal: 4 * binom * binom * C
        let g = Exponent::new(&[1, 2, 1, 1]);
        let want = integer(4) * integer(2) * integer(3) * f.coeff(2, 3);
        assert_eq!(presence_coefficient(&g, &h1, &f), want);
    }

    #[test]
    fn transform_identity_and_translation() {
        let f = parse_curve("1 1 1\n2 0 3\n0 0 -2").unwrap();
        assert_eq!(transform_curve(&f, &RigidMotion::identity()), f);
        assert!(RigidMotion::from_angle(0.0, (0.0, 0.0)).is_identity());

        let xy = parse_curve("1 1 1").unwrap();
        let shifted = transform_curve(
            &xy,
            &RigidMotion {
                tx: integer(1),
                ty: integer(1),
                ..RigidMotion::identity()
            },
        );
        assert_eq!(shifted, parse_curve("1 1 1\n1 0 1\n0 1 1\n0 0 1").unwrap());
    }

    #[test]
    fn rotations_are_exact_and_preserve_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let mo = RigidMotion::random(&mut rng);
            assert_eq!(&mo.cos * &mo.cos + &mo.sin * &mo.sin, integer(1));
            let f = random_curve(4, 50, &mut rng);
            assert_eq!(transform_curve(&f, &mo).degree(), 4);
        }
        let mo = RigidMotion::from_angle(0.7, (0.25, -1.5));
        assert_eq!(&mo.cos * &mo.cos + &mo.sin * &mo.sin, integer(1));
        assert_eq!(mo.tx, rational(1, 4));
    }

    #[test]
    fn mapped_squares_stay_on_the_curve() {
        // The square (0,0,s,s) on x^2 + 4y^2 = 1, pushed through the inverse
        // picture: a square of f' maps to a square of f.
        let f = parse_curve("2 0 1\n0 2 4\n0 0 -1").unwrap();
        let mo = RigidMotion::from_pythagorean(3, 4, 5, rational(1, 7), rational(-2, 7));
        let fp = transform_curve(&f, &mo);
        // a square of fp: preimage of the known square under p -> R p + t
        let s = 0.2f64.sqrt();
        let (cs, sn) = (0.6, 0.8);
        let inv = |x: f64, y: f64| (cs * x + sn * y, -sn * x + cs * y);
        let (a, b) = inv(-1.0 / 7.0, 2.0 / 7.0);
        let (cc, dd) = inv(s, s);
        let sq_p = SquareParam::real(a, b, cc, dd);
        for (x, y) in corners(&sq_p) {
            assert!(fp.poly().evaluate(&[x, y]).unwrap().norm() < 1e-12);
        }
        let back = mo.map_square(&sq_p);
        assert!(back.distance(&SquareParam::real(0.0, 0.0, s, s)) < 1e-12);
    }
}
