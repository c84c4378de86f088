//! Exact lattice-polytope toolkit for rank-3 lattices: polar duality,
//! reflexivity, unimodular isomorphism, ambient polytopes of weighted
//! projective 3-spaces, Newton polytopes and coupled weight systems.
//!
//! Everything is generic over an integer [`Scalar`]; the aliases below fix
//! arbitrary precision.

pub mod coupling;
pub mod dual_search;
pub mod intlinalg;
pub mod io;
pub mod lattice_iso;
pub mod polytope;
pub mod registry;
pub mod scalar;
pub mod wps;

pub use scalar::Scalar;

pub type Int = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type IntVec3 = intlinalg::Vec3<Int>;
pub type IntVec4 = intlinalg::Vec4<Int>;
pub type IntMatrix3 = intlinalg::Mat3<Int>;
pub type LatticeBasis = intlinalg::LatticeBasis<Int>;
pub type LatticePolytope = polytope::LatticePolytope<Int>;
pub type RationalPolytope = polytope::RationalPolytope<Int>;
pub type UnimodularMap = lattice_iso::UnimodularMap<Int>;
pub type WeightSystem4 = wps::WeightSystem4<Int>;
pub type WeightedPolynomial = wps::WeightedPolynomial<Int>;
pub type WeightSystem3 = coupling::WeightSystem3<Int>;
pub type MagicSquare = coupling::MagicSquare<Int>;
pub type DualPair = dual_search::DualPair<Int>;
pub type CaseRecord = registry::CaseRecord<Int>;
pub type CaseReport = dual_search::CaseReport<Int>;
