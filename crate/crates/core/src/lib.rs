//! Inscribed squares of plane algebraic curves: the corner system of a
//! curve, the Newton polytopes of its generators with their mixed volume,
//! and a homotopy solver that counts the squares numerically.

pub mod curve;
pub mod poly;
pub mod polytope;
pub mod solver;
pub mod squares;

pub use curve::{format_curve, parse_curve, random_curve, Curve, CurveError, ParseError};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
pub use poly::{ComplexPoly, Exponent, MultiPoly, PolyError, RationalPoly};
pub use polytope::{
    cohen_hickey_triangulation, inscribed_bound, mixed_area_2d, mixed_volume,
    minkowski_volume_poly, newton_matches, shape_of_generator, LatticePolytope, PolytopeError,
    PolytopeKind, Simplex4, VolumePoly,
};
pub use squares::{
    canonicalize, corners, is_degenerate, orbit, rewritten_generators, transform_curve,
    CornerSystem, RigidMotion, SquareParam,
};
pub use solver::{
    count_inscribed_squares, reality_and_render_data, total_degree_start, track_path,
    HomotopySettings, PathResult, PathStatus, PolySystem4, SolveError, SquareReport, Warning,
};
