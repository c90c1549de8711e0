//! The simplex `m·Δ` and its two truncations along `x3 + x4`, their
//! triangulation and volumes, and the mixed volume of the corner system.
//!
//! Every halfspace is stored as `normal · x <= bound`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{integer, Exponent, RationalPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("invalid parameters for {kind}: m={m}, l={l}, k={k}")]
    InvalidParams {
        kind: PolytopeKind,
        m: i64,
        l: i64,
        k: i64,
    },
    #[error("generator index {0} is not in 1..=4")]
    GeneratorIndex(usize),
    #[error("closed-form shapes need m >= 4, got {0}")]
    DegreeTooSmall(i64),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("polygon is not convex: a vertex lies strictly inside the hull")]
    NonConvex,
    #[error("polygon has no vertices")]
    EmptyPolygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolytopeKind {
    P0,
    P1,
    P2,
}

impl fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PolytopeKind::P0 => "P0",
            PolytopeKind::P1 => "P1",
            PolytopeKind::P2 => "P2",
        };
        f.write_str(s)
    }
}

pub type Point4 = [i64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Point4,
    pub bound: i64,
}

impl Halfspace {
    pub fn slack(&self, x: &Point4) -> i64 {
        self.bound - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &Point4) -> bool {
        self.slack(x) >= 0
    }
}

fn dot(a: &Point4, b: &Point4) -> i64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// A member of the `P0 / P1 / P2` family. `l` and `k` are zero where unused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolytope {
    kind: PolytopeKind,
    m: i64,
    l: i64,
    k: i64,
}

impl LatticePolytope {
    pub fn p0(m: i64) -> Result<Self, PolytopeError> {
        if m < 1 {
            return Err(PolytopeError::InvalidParams {
                kind: PolytopeKind::P0,
                m,
                l: 0,
                k: 0,
            });
        }
        Ok(LatticePolytope {
            kind: PolytopeKind::P0,
            m,
            l: 0,
            k: 0,
        })
    }

    /// `m·Δ ∩ {x3 + x4 >= l}` with `0 < l < m`.
    pub fn p1(m: i64, l: i64) -> Result<Self, PolytopeError> {
        if !(0 < l && l < m) {
            return Err(PolytopeError::InvalidParams {
                kind: PolytopeKind::P1,
                m,
                l,
                k: 0,
            });
        }
        Ok(LatticePolytope {
            kind: PolytopeKind::P1,
            m,
            l,
            k: 0,
        })
    }

    /// `m·Δ ∩ {l <= x3 + x4 <= k}` with `0 < l < k < m`.
    pub fn p2(m: i64, l: i64, k: i64) -> Result<Self, PolytopeError> {
        if !(0 < l && l < k && k < m) {
            return Err(PolytopeError::InvalidParams {
                kind: PolytopeKind::P2,
                m,
                l,
                k,
            });
        }
        Ok(LatticePolytope {
            kind: PolytopeKind::P2,
            m,
            l,
            k,
        })
    }

    pub fn kind(&self) -> PolytopeKind {
        self.kind
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Vertices in label order (label `i` is index `i - 1`).
    pub fn vertices(&self) -> Vec<Point4> {
        let m = self.m;
        match self.kind {
            PolytopeKind::P0 => vec![
                [0, 0, 0, 0],
                [m, 0, 0, 0],
                [0, m, 0, 0],
                [0, 0, m, 0],
                [0, 0, 0, m],
            ],
            PolytopeKind::P1 => p1_vertices(m, self.l).expect("validated on construction"),
            PolytopeKind::P2 => p2_vertices(m, self.l, self.k).expect("validated on construction"),
        }
    }

    /// Facet halfspaces: `x_i >= 0` for each coordinate, `Σx <= m`, then
    /// `x3 + x4 >= l` and `x3 + x4 <= k` where they apply.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let mut hs = vec![
            Halfspace { normal: [-1, 0, 0, 0], bound: 0 },
            Halfspace { normal: [0, -1, 0, 0], bound: 0 },
            Halfspace { normal: [0, 0, -1, 0], bound: 0 },
            Halfspace { normal: [0, 0, 0, -1], bound: 0 },
            Halfspace { normal: [1, 1, 1, 1], bound: self.m },
        ];
        if self.kind != PolytopeKind::P0 {
            hs.push(Halfspace {
                normal: [0, 0, -1, -1],
                bound: -self.l,
            });
        }
        if self.kind == PolytopeKind::P2 {
            hs.push(Halfspace {
                normal: [0, 0, 1, 1],
                bound: self.k,
            });
        }
        hs
    }

    pub fn contains(&self, x: &Point4) -> bool {
        self.halfspaces().iter().all(|h| h.contains(x))
    }

    /// For each facet, the 0-based indices of the vertices lying on it.
    pub fn facet_vertex_sets(&self) -> Vec<BTreeSet<usize>> {
        let verts = self.vertices();
        self.halfspaces()
            .iter()
            .map(|h| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| h.slack(v) == 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect()
    }

    pub fn volume(&self) -> BigRational {
        match self.kind {
            PolytopeKind::P0 => volume_p1(self.m, 0),
            PolytopeKind::P1 => volume_p1(self.m, self.l),
            PolytopeKind::P2 => volume_p2(self.m, self.l, self.k),
        }
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PolytopeKind::P0 => write!(f, "P0({})", self.m),
            PolytopeKind::P1 => write!(f, "P1({}, {})", self.m, self.l),
            PolytopeKind::P2 => write!(f, "P2({}, {}, {})", self.m, self.l, self.k),
        }
    }
}

pub fn p1_vertices(m: i64, l: i64) -> Result<Vec<Point4>, PolytopeError> {
    LatticePolytope::p1(m, l)?;
    let r = m - l;
    Ok(vec![
        [0, 0, l, 0],
        [r, 0, l, 0],
        [0, r, l, 0],
        [0, 0, m, 0],
        [0, 0, 0, l],
        [r, 0, 0, l],
        [0, r, 0, l],
        [0, 0, 0, m],
    ])
}

pub fn p2_vertices(m: i64, l: i64, k: i64) -> Result<Vec<Point4>, PolytopeError> {
    LatticePolytope::p2(m, l, k)?;
    let (rl, rk) = (m - l, m - k);
    Ok(vec![
        [0, 0, l, 0],
        [rl, 0, l, 0],
        [0, rl, l, 0],
        [0, 0, k, 0],
        [rk, 0, k, 0],
        [0, rk, k, 0],
        [0, 0, 0, l],
        [rl, 0, 0, l],
        [0, rl, 0, l],
        [0, 0, 0, k],
        [rk, 0, 0, k],
        [0, rk, 0, k],
    ])
}

/// Newton polytope of generator `i` (1-based) for a generic curve of
/// degree `m >= 4`.
pub fn shape_of_generator(i: usize, m: i64) -> Result<LatticePolytope, PolytopeError> {
    if !(1..=4).contains(&i) {
        return Err(PolytopeError::GeneratorIndex(i));
    }
    if m < 4 {
        return Err(PolytopeError::DegreeTooSmall(m));
    }
    let even = m % 2 == 0;
    match (i, even) {
        (4, _) => LatticePolytope::p0(m),
        (1, true) => LatticePolytope::p1(m, 2),
        (1, false) => LatticePolytope::p2(m, 2, m - 1),
        (_, true) => LatticePolytope::p2(m, 1, m - 1),
        (_, false) => LatticePolytope::p1(m, 1),
    }
}

/// `N(p) = P`, checked as: every exponent of `p` lies in `P` and every
/// vertex of `P` is an exponent of `p`.
pub fn newton_matches(p: &RationalPoly, poly: &LatticePolytope) -> bool {
    if p.nvars() != 4 {
        return false;
    }
    let hs = poly.halfspaces();
    let inside = p.support().all(|e| {
        let x = [0, 1, 2, 3].map(|i| e.get(i) as i64);
        hs.iter().all(|h| h.contains(&x))
    });
    inside
        && poly.vertices().iter().all(|v| {
            v.iter().all(|&x| (0..=u16::MAX as i64).contains(&x))
                && p.coeff(&Exponent::new(&v.map(|x| x as u16))).is_some()
        })
}

/// Five lattice points in 4-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex4 {
    pub vertices: [Point4; 5],
}

impl Simplex4 {
    pub fn new(vertices: [Point4; 5]) -> Self {
        Simplex4 { vertices }
    }

    /// `det(v1 - v0, ..., v4 - v0)`.
    pub fn determinant(&self) -> BigInt {
        let v0 = self.vertices[0];
        let rows: Vec<Vec<BigInt>> = self.vertices[1..]
            .iter()
            .map(|v| (0..4).map(|j| BigInt::from(v[j] - v0[j])).collect())
            .collect();
        bareiss_determinant(rows)
    }
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `|det| / 4!`; zero for affinely dependent vertices.
pub fn simplex_volume(s: &Simplex4) -> BigRational {
    BigRational::new(s.determinant().abs(), BigInt::from(24))
}

fn affine_rank(points: &[Point4]) -> usize {
    let Some(p0) = points.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| (0..4).map(|j| integer(p[j] - p0[j])).collect())
        .collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= p * &factor;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn triangulate_face(
    face: &BTreeSet<usize>,
    verts: &[Point4],
    facets: &[BTreeSet<usize>],
) -> Vec<BTreeSet<usize>> {
    let pts: Vec<Point4> = face.iter().map(|&i| verts[i]).collect();
    let dim = affine_rank(&pts);
    if face.len() == dim + 1 {
        return vec![face.clone()];
    }
    let apex = *face.iter().next().expect("nonempty face");
    let mut subfaces: Vec<BTreeSet<usize>> = Vec::new();
    for facet in facets {
        let sub: BTreeSet<usize> = facet.intersection(face).copied().collect();
        if sub.contains(&apex) || subfaces.contains(&sub) {
            continue;
        }
        let sub_pts: Vec<Point4> = sub.iter().map(|&i| verts[i]).collect();
        if !sub.is_empty() && affine_rank(&sub_pts) + 1 == dim {
            subfaces.push(sub);
        }
    }
    let mut out = Vec::new();
    for sub in &subfaces {
        for mut s in triangulate_face(sub, verts, facets) {
            s.insert(apex);
            out.push(s);
        }
    }
    out
}

/// Cohen–Hickey triangulation: cone from the lowest-labelled vertex over
/// the triangulated facets not containing it, recursively.
///
/// Returns 1-based vertex label sets together with the simplices.
pub fn cohen_hickey_labels(
    poly: &LatticePolytope,
) -> Result<Vec<BTreeSet<usize>>, PolytopeError> {
    let verts = poly.vertices();
    if affine_rank(&verts) != 4 {
        return Err(PolytopeError::NotFullDimensional);
    }
    let facets = poly.facet_vertex_sets();
    let all: BTreeSet<usize> = (0..verts.len()).collect();
    Ok(triangulate_face(&all, &verts, &facets)
        .into_iter()
        .map(|s| s.into_iter().map(|i| i + 1).collect())
        .collect())
}

pub fn cohen_hickey_triangulation(
    poly: &LatticePolytope,
) -> Result<Vec<Simplex4>, PolytopeError> {
    let verts = poly.vertices();
    Ok(cohen_hickey_labels(poly)?
        .into_iter()
        .map(|labels| {
            let v: Vec<Point4> = labels.iter().map(|&i| verts[i - 1]).collect();
            Simplex4::new([v[0], v[1], v[2], v[3], v[4]])
        })
        .collect())
}

/// `(m - l)^3 (m + 3l) / 24`; `l = 0` gives the simplex `m·Δ`.
pub fn volume_p1(m: i64, l: i64) -> BigRational {
    let r = BigInt::from(m - l);
    let num = &r * &r * &r * BigInt::from(m + 3 * l);
    BigRational::new(num, BigInt::from(24))
}

pub fn volume_p2(m: i64, l: i64, k: i64) -> BigRational {
    volume_p1(m, l) - volume_p1(m, k)
}

/// Integer linear form in `λ1..λ4`.
pub type LinearForm = [i64; 4];

/// `m' = (μ1 + μ2 + λ4) m`, `l' = μ1 l1 + μ2 l2`, `k' = (μ1 + λ4) m + μ2 k`
/// with `μ1` scaling the `P1` summand and `μ2` the `P2` summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiParams {
    pub m: i64,
    pub mu1: LinearForm,
    pub mu2: LinearForm,
    pub l1: i64,
    pub l2: i64,
    pub k: i64,
    pub m_prime: LinearForm,
    pub l_prime: LinearForm,
    pub k_prime: LinearForm,
}

fn lin_add(a: LinearForm, b: LinearForm) -> LinearForm {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn lin_scale(a: LinearForm, s: i64) -> LinearForm {
    a.map(|x| x * s)
}

fn lin_eval(a: &LinearForm, s: &[i64; 4]) -> i64 {
    dot(a, s)
}

const LAMBDA4: LinearForm = [0, 0, 0, 1];

pub fn minkowski_params(m: i64) -> Result<MinkowskiParams, PolytopeError> {
    if m < 4 {
        return Err(PolytopeError::DegreeTooSmall(m));
    }
    let (mu1, mu2, l1, l2) = if m % 2 == 0 {
        ([1, 0, 0, 0], [0, 1, 1, 0], 2, 1)
    } else {
        ([0, 1, 1, 0], [1, 0, 0, 0], 1, 2)
    };
    let k = m - 1;
    Ok(MinkowskiParams {
        m,
        mu1,
        mu2,
        l1,
        l2,
        k,
        m_prime: lin_scale(lin_add(lin_add(mu1, mu2), LAMBDA4), m),
        l_prime: lin_add(lin_scale(mu1, l1), lin_scale(mu2, l2)),
        k_prime: lin_add(lin_scale(lin_add(mu1, LAMBDA4), m), lin_scale(mu2, k)),
    })
}

impl MinkowskiParams {
    /// `(m', l', k')` at integer scalings `s`.
    pub fn evaluate(&self, s: &[i64; 4]) -> (i64, i64, i64) {
        (
            lin_eval(&self.m_prime, s),
            lin_eval(&self.l_prime, s),
            lin_eval(&self.k_prime, s),
        )
    }

    /// The four summands `N(g1), N(g2), N(g3), m·Δ`.
    pub fn summands(&self) -> [LatticePolytope; 4] {
        let p1 = LatticePolytope::p1(self.m, self.l1).expect("m >= 4");
        let p2 = LatticePolytope::p2(self.m, self.l2, self.k).expect("m >= 4");
        let p0 = LatticePolytope::p0(self.m).expect("m >= 4");
        if self.m % 2 == 0 {
            [p1, p2, p2, p0]
        } else {
            [p2, p1, p1, p0]
        }
    }
}

/// Polynomial in `λ1..λ4` with exact rational coefficients.
pub type VolumePoly = RationalPoly;

fn linear_poly(a: &LinearForm) -> RationalPoly {
    let mut p = RationalPoly::zero(4);
    for (i, &c) in a.iter().enumerate() {
        if c != 0 {
            p = &p + &RationalPoly::var(4, i).scale(&integer(c));
        }
    }
    p
}

/// `Vol(λ1 N(g1) + λ2 N(g2) + λ3 N(g3) + λ4 m·Δ)` as a polynomial in the λ.
pub fn minkowski_volume_poly(m: i64) -> Result<VolumePoly, PolytopeError> {
    let p = minkowski_params(m)?;
    let mp = linear_poly(&p.m_prime);
    let lp = linear_poly(&p.l_prime);
    let kp = linear_poly(&p.k_prime);
    let three = integer(3);
    let piece = |t: &RationalPoly| (&mp - t).pow(3) * (&mp + &t.scale(&three));
    let diff = piece(&lp) - piece(&kp);
    Ok(diff.scale(&BigRational::new(1.into(), 24.into())))
}

/// `m^4 - 5m^2 + 4m`.
pub fn mixed_volume_closed_form(m: i64) -> i64 {
    m.pow(4) - 5 * m * m + 4 * m
}

/// Coefficient of `λ1 λ2 λ3 λ4` in [`minkowski_volume_poly`].
pub fn mixed_volume_from_polytopes(m: i64) -> Result<BigRational, PolytopeError> {
    let vp = minkowski_volume_poly(m)?;
    Ok(vp
        .coeff(&Exponent::new(&[1, 1, 1, 1]))
        .cloned()
        .unwrap_or_else(BigRational::zero))
}

/// Mixed volume of the Newton polytopes of `g1..g4`. For `m >= 4` it is
/// read off the Minkowski volume polynomial; below that the shapes are
/// not all four-dimensional and the closed form is used.
pub fn mixed_volume(m: i64) -> i64 {
    if m < 4 {
        return mixed_volume_closed_form(m.max(0));
    }
    let mv = mixed_volume_from_polytopes(m).expect("m >= 4");
    assert!(mv.is_integer(), "mixed volume must be an integer");
    let mv = mv.to_integer().to_i64().expect("fits in i64");
    assert_eq!(mv, mixed_volume_closed_form(m));
    mv
}

/// Upper bound on isolated inscribed squares: a quarter of the mixed volume.
pub fn inscribed_bound(m: i64) -> i64 {
    mixed_volume(m) / 4
}

/// Sums the matched vertices of the scaled summands over the normal cone
/// of each vertex of `P2(m', l', k')` and compares with that vertex.
///
/// Returns `false` if a summand has no unique maximizing vertex or a sum
/// misses its vertex.
pub fn check_minkowski_vertices(m: i64, s: &[i64; 4]) -> Result<bool, PolytopeError> {
    let params = minkowski_params(m)?;
    let (mp, lp, kp) = params.evaluate(s);
    let target = LatticePolytope::p2(mp, lp, kp)?;
    let summands = params.summands();
    let hs = target.halfspaces();
    let summand_verts: Vec<Vec<Point4>> = summands.iter().map(|p| p.vertices()).collect();
    for w in target.vertices() {
        let tight: Vec<&Halfspace> = hs.iter().filter(|h| h.slack(&w) == 0).collect();
        if tight.len() != 4 {
            return Ok(false);
        }
        let alpha = tight
            .iter()
            .fold([0; 4], |acc, h| lin_add(acc, h.normal));
        let mut sum = [0i64; 4];
        for (verts, &scale) in summand_verts.iter().zip(s.iter()) {
            let best = verts.iter().map(|v| dot(&alpha, v)).max().expect("vertices");
            let argmax: Vec<&Point4> = verts.iter().filter(|v| dot(&alpha, v) == best).collect();
            if argmax.len() != 1 {
                return Ok(false);
            }
            sum = lin_add(sum, lin_scale(*argmax[0], scale));
        }
        if sum != w {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Counter-clockwise hull, collinear points dropped.
fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area.
fn double_area(hull: &[(i64, i64)]) -> i128 {
    let n = hull.len();
    if n < 3 {
        return 0;
    }
    (0..n)
        .map(|i| {
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            p.0 as i128 * q.1 as i128 - q.0 as i128 * p.1 as i128
        })
        .sum()
}

fn strictly_inside(hull: &[(i64, i64)], p: (i64, i64)) -> bool {
    hull.len() >= 3 && (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], p) > 0)
}

fn polygon_area(points: &[(i64, i64)]) -> Result<BigRational, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::EmptyPolygon);
    }
    let hull = convex_hull(points);
    if points.iter().any(|&p| strictly_inside(&hull, p)) {
        return Err(PolytopeError::NonConvex);
    }
    Ok(BigRational::new(double_area(&hull).into(), 2.into()))
}

/// `area(P + Q) - area(P) - area(Q)` for convex lattice polygons given by
/// their vertices; segments and points are allowed.
pub fn mixed_area_2d(p: &[(i64, i64)], q: &[(i64, i64)]) -> Result<BigRational, PolytopeError> {
    let ap = polygon_area(p)?;
    let aq = polygon_area(q)?;
    let sums: Vec<(i64, i64)> = p
        .iter()
        .flat_map(|a| q.iter().map(move |b| (a.0 + b.0, a.1 + b.1)))
        .collect();
    let hull = convex_hull(&sums);
    let apq = BigRational::new(double_area(&hull).into(), 2.into());
    Ok(apq - ap - aq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;
    use proptest::prelude::*;

    fn labels(sets: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn p1_vertex_examples() {
        let v = p1_vertices(4, 2).unwrap();
        assert_eq!(v[0], [0, 0, 2, 0]);
        assert_eq!(v[3], [0, 0, 4, 0]);
        assert_eq!(v[7], [0, 0, 0, 4]);
        assert!(p1_vertices(4, 0).is_err());
        assert!(p1_vertices(4, 4).is_err());
    }

    #[test]
    fn p2_vertex_examples() {
        let v = p2_vertices(4, 1, 3).unwrap();
        assert_eq!(v[4], [1, 0, 3, 0]);
        assert_eq!(v[11], [0, 1, 0, 3]);
        assert!(v.iter().all(|x| x[2] + x[3] == 1 || x[2] + x[3] == 3));
        assert!(p2_vertices(4, 3, 3).is_err());
        assert!(p2_vertices(4, 1, 4).is_err());
    }

    #[test]
    fn p1_facets_match_labelling() {
        let p = LatticePolytope::p1(7, 3).unwrap();
        let facets: Vec<BTreeSet<usize>> = p
            .facet_vertex_sets()
            .into_iter()
            .map(|s| s.into_iter().map(|i| i + 1).collect())
            .collect();
        let want = labels(&[
            &[1, 3, 4, 5, 7, 8],
            &[1, 2, 4, 5, 6, 8],
            &[5, 6, 7, 8],
            &[1, 2, 3, 4],
            &[2, 3, 4, 6, 7, 8],
            &[1, 2, 3, 5, 6, 7],
        ]);
        assert_eq!(facets, want);
    }

    #[test]
    fn triangulation_of_p1() {
        let got = cohen_hickey_labels(&LatticePolytope::p1(4, 2).unwrap()).unwrap();
        let want = labels(&[
            &[1, 5, 6, 7, 8],
            &[1, 2, 6, 7, 8],
            &[1, 2, 3, 4, 8],
            &[1, 2, 3, 7, 8],
        ]);
        let got: BTreeSet<_> = got.into_iter().collect();
        let want: BTreeSet<_> = want.into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn triangulation_volume_example() {
        let simplices = cohen_hickey_triangulation(&LatticePolytope::p1(4, 2).unwrap()).unwrap();
        let mut total = BigRational::zero();
        for s in &simplices {
            assert!(!s.determinant().is_zero());
            total += simplex_volume(s);
        }
        assert_eq!(total, rational(10, 3));
        assert_eq!(volume_p1(4, 2), rational(10, 3));
    }

    #[test]
    fn simplex_volumes() {
        let unit = Simplex4::new([[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert_eq!(simplex_volume(&unit), rational(1, 24));
        let m = 7;
        let scaled = Simplex4::new([[0, 0, 0, 0], [m, 0, 0, 0], [0, m, 0, 0], [0, 0, m, 0], [0, 0, 0, m]]);
        assert_eq!(simplex_volume(&scaled), rational(m.pow(4), 24));
        let flat = Simplex4::new([[0, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(simplex_volume(&flat).is_zero());
    }

    #[test]
    fn volume_formulas() {
        for m in 1..10 {
            assert_eq!(volume_p1(m, 0), rational(m.pow(4), 24));
        }
        assert_eq!(volume_p2(4, 1, 3), rational(22, 3));
    }

    #[test]
    fn p2_and_p0_triangulate_to_their_volume() {
        for poly in [
            LatticePolytope::p2(6, 1, 5).unwrap(),
            LatticePolytope::p2(9, 2, 4).unwrap(),
            LatticePolytope::p0(5).unwrap(),
        ] {
            let total: BigRational = cohen_hickey_triangulation(&poly)
                .unwrap()
                .iter()
                .map(simplex_volume)
                .sum();
            assert_eq!(total, poly.volume(), "{}", poly);
        }
    }

    #[test]
    fn shape_table() {
        assert_eq!(shape_of_generator(1, 4).unwrap(), LatticePolytope::p1(4, 2).unwrap());
        assert_eq!(shape_of_generator(2, 5).unwrap(), LatticePolytope::p1(5, 1).unwrap());
        assert_eq!(shape_of_generator(2, 4).unwrap(), LatticePolytope::p2(4, 1, 3).unwrap());
        assert_eq!(shape_of_generator(1, 5).unwrap(), LatticePolytope::p2(5, 2, 4).unwrap());
        assert_eq!(shape_of_generator(3, 6).unwrap(), shape_of_generator(2, 6).unwrap());
        assert_eq!(shape_of_generator(4, 6).unwrap(), LatticePolytope::p0(6).unwrap());
        assert_eq!(shape_of_generator(1, 3), Err(PolytopeError::DegreeTooSmall(3)));
        assert_eq!(shape_of_generator(5, 6), Err(PolytopeError::GeneratorIndex(5)));
    }

    #[test]
    fn mixed_volume_examples() {
        assert_eq!(mixed_volume(4), 192);
        assert_eq!(inscribed_bound(3), 12);
        assert_eq!(inscribed_bound(10), 2385);
        assert_eq!(inscribed_bound(1), 0);
        assert_eq!(inscribed_bound(2), 1);
    }

    #[test]
    fn minkowski_poly_recovers_simplex_volume() {
        for m in 4..9 {
            let vp = minkowski_volume_poly(m).unwrap();
            let at = vp.evaluate_exact(&[integer(0), integer(0), integer(0), integer(1)]).unwrap();
            assert_eq!(at, rational(m.pow(4), 24));
            assert!(vp.terms().all(|(e, c)| e.degree() == 4 && !c.is_negative()));
        }
        let even = minkowski_params(6).unwrap();
        assert_eq!((even.mu1, even.mu2), ([1, 0, 0, 0], [0, 1, 1, 0]));
        let odd = minkowski_params(7).unwrap();
        assert_eq!((odd.mu1, odd.mu2), ([0, 1, 1, 0], [1, 0, 0, 0]));
    }

    #[test]
    fn minkowski_poly_is_symmetric_in_lambda2_lambda3() {
        for m in 4..9 {
            let vp = minkowski_volume_poly(m).unwrap();
            for (e, c) in vp.terms() {
                let swapped = Exponent::new(&[e.get(0), e.get(2), e.get(1), e.get(3)]);
                assert_eq!(vp.coeff(&swapped), Some(c));
            }
        }
    }

    #[test]
    fn single_summand_volumes_appear_on_the_diagonal() {
        // Setting all but one λ to zero leaves the volume of that summand.
        for m in 4..9 {
            let vp = minkowski_volume_poly(m).unwrap();
            let summands = minkowski_params(m).unwrap().summands();
            for i in 0..4 {
                let mut pt = vec![integer(0); 4];
                pt[i] = integer(1);
                assert_eq!(vp.evaluate_exact(&pt).unwrap(), summands[i].volume());
            }
        }
    }

    #[test]
    fn mixed_area_examples() {
        let rect = |a: i64, b: i64| vec![(0, 0), (a, 0), (a, b), (0, b)];
        assert_eq!(mixed_area_2d(&rect(2, 3), &rect(5, 7)).unwrap(), integer(2 * 7 + 5 * 3));
        let tri = vec![(0, 0), (3, 0), (1, 2)];
        assert_eq!(mixed_area_2d(&tri, &tri).unwrap(), integer(6));
        assert_eq!(mixed_area_2d(&rect(1, 1), &[(0, 0), (1, 0)]).unwrap(), integer(1));
        assert_eq!(
            mixed_area_2d(&[(0, 0), (4, 0), (0, 4), (1, 1)], &rect(1, 1)),
            Err(PolytopeError::NonConvex)
        );
        assert_eq!(mixed_area_2d(&[], &rect(1, 1)), Err(PolytopeError::EmptyPolygon));
    }

    proptest! {
        #[test]
        fn vertices_are_simple(m in 4i64..11, l_frac in 0.0f64..1.0, k_frac in 0.0f64..1.0) {
            let l = 1 + ((m - 2) as f64 * l_frac) as i64;
            let p1 = LatticePolytope::p1(m, l).unwrap();
            let hs = p1.halfspaces();
            for v in p1.vertices() {
                prop_assert!(hs.iter().all(|h| h.contains(&v)));
                prop_assert_eq!(hs.iter().filter(|h| h.slack(&v) == 0).count(), 4);
            }
            if l + 1 < m {
                let k = l + 1 + ((m - l - 2) as f64 * k_frac) as i64;
                let p2 = LatticePolytope::p2(m, l, k).unwrap();
                let hs = p2.halfspaces();
                for v in p2.vertices() {
                    prop_assert!(hs.iter().all(|h| h.contains(&v)));
                    prop_assert_eq!(hs.iter().filter(|h| h.slack(&v) == 0).count(), 4);
                }
            }
        }

        #[test]
        fn minkowski_vertices_match_normal_cones(m in 4i64..9, s in prop::array::uniform4(1i64..6)) {
            prop_assert!(check_minkowski_vertices(m, &s).unwrap());
        }

        #[test]
        fn mixed_area_is_symmetric_and_doubles_area(
            p in prop::collection::vec((-5i64..6, -5i64..6), 1..8),
            q in prop::collection::vec((-5i64..6, -5i64..6), 1..8),
        ) {
            let hp = convex_hull(&p);
            let hq = convex_hull(&q);
            let mpq = mixed_area_2d(&hp, &hq).unwrap();
            prop_assert_eq!(&mpq, &mixed_area_2d(&hq, &hp).unwrap());
            prop_assert!(!mpq.is_negative());
            let area = BigRational::new(double_area(&hp).into(), 2.into());
            prop_assert_eq!(mixed_area_2d(&hp, &hp).unwrap(), area * integer(2));
        }
    }
}
