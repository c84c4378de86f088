//! Full-dimensional lattice polytopes in rank 3.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_rational::Ratio;

use thiserror::Error;

use crate::intlinalg::{content, cross, dot3, is_zero3, primitive3, sub3, Vec3};
use crate::scalar::{cast, within_bound, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("points do not span a full-dimensional polytope")]
    Degenerate,
    #[error("the origin is not an interior point")]
    OriginNotInterior,
    #[error("facet index {index} out of range ({count} facets)")]
    FacetIndex { index: usize, count: usize },
    #[error("{0} is not a vertex")]
    NotAVertex(String),
    #[error("coordinate {0} exceeds the exact range of the scalar type")]
    OutOfRange(String),
    #[error("vertex list is not in convex position")]
    NotExtreme,
}

/// Supporting half-space `<normal, x> >= -offset` with a primitive normal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet<T> {
    pub normal: Vec3<T>,
    pub offset: T,
}

impl<T: Scalar> Facet<T> {
    pub fn value(&self, x: &Vec3<T>) -> T {
        dot3(&self.normal, x) + self.offset.clone()
    }

    pub fn contains(&self, x: &Vec3<T>) -> bool {
        !self.value(x).is_negative()
    }

    pub fn is_tight(&self, x: &Vec3<T>) -> bool {
        self.value(x).is_zero()
    }
}

/// Lattice polytope with canonical (sorted) vertices and its facets.
#[derive(Debug, Clone)]
pub struct LatticePolytope<T> {
    vertices: Vec<Vec3<T>>,
    facets: Vec<Facet<T>>,
}

impl<T: Scalar> PartialEq for LatticePolytope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl<T: Scalar> Eq for LatticePolytope<T> {}

impl<T: Scalar> Hash for LatticePolytope<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl<T: Scalar> PartialOrd for LatticePolytope<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for LatticePolytope<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

fn check_range<T: Scalar>(p: &Vec3<T>) -> Result<(), PolytopeError> {
    if p.iter().all(within_bound) {
        Ok(())
    } else {
        Err(PolytopeError::OutOfRange(format!("{:?}", p)))
    }
}

/// Four affinely independent points among `pts`, if any.
fn spans_space<T: Scalar>(pts: &[Vec3<T>]) -> bool {
    let Some(a) = pts.first() else { return false };
    let Some(b) = pts.iter().find(|p| *p != a) else {
        return false;
    };
    let ab = sub3(b, a);
    let Some(n) = pts
        .iter()
        .map(|c| cross(&ab, &sub3(c, a)))
        .find(|n| !is_zero3(n))
    else {
        return false;
    };
    pts.iter().any(|d| !dot3(&n, &sub3(d, a)).is_zero())
}

/// Facets of the hull of a full-dimensional point set, keyed by normal.
fn facets_of<T: Scalar>(pts: &[Vec3<T>]) -> BTreeMap<Vec3<T>, T> {
    let mut out = BTreeMap::new();
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            let ab = sub3(&pts[j], &pts[i]);
            for k in j + 1..n {
                let nrm = cross(&ab, &sub3(&pts[k], &pts[i]));
                if is_zero3(&nrm) {
                    continue;
                }
                let nrm = primitive3(&nrm);
                let base = dot3(&nrm, &pts[i]);
                let (mut above, mut below) = (false, false);
                for p in pts {
                    let v = dot3(&nrm, p);
                    if v > base {
                        above = true;
                    } else if v < base {
                        below = true;
                    }
                    if above && below {
                        break;
                    }
                }
                match (above, below) {
                    (true, true) | (false, false) => {}
                    (true, false) => {
                        out.insert(nrm, -base);
                    }
                    (false, true) => {
                        out.insert(crate::intlinalg::neg3(&nrm), base);
                    }
                }
            }
        }
    }
    out
}

fn rank3<T: Scalar>(normals: &[&Vec3<T>]) -> bool {
    let n = normals.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = cross(normals[i], normals[j]);
            if is_zero3(&c) {
                continue;
            }
            for k in j + 1..n {
                if !dot3(&c, normals[k]).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Iterates the integer points of an axis-aligned box.
fn box_points<T: Scalar>(lo: &Vec3<T>, hi: &Vec3<T>) -> Vec<Vec3<T>> {
    let mut out = Vec::new();
    let mut x = lo[0].clone();
    while x <= hi[0] {
        let mut y = lo[1].clone();
        while y <= hi[1] {
            let mut z = lo[2].clone();
            while z <= hi[2] {
                out.push([x.clone(), y.clone(), z.clone()]);
                z = z + T::one();
            }
            y = y + T::one();
        }
        x = x + T::one();
    }
    out
}

impl<T: Scalar> LatticePolytope<T> {
    /// Convex hull of a finite point set; drops non-extreme points.
    pub fn hull(points: &[Vec3<T>]) -> Result<Self, PolytopeError> {
        let mut pts = points.to_vec();
        for p in &pts {
            check_range(p)?;
        }
        pts.sort();
        pts.dedup();
        if !spans_space(&pts) {
            return Err(PolytopeError::Degenerate);
        }
        let fmap = facets_of(&pts);
        let facets: Vec<Facet<T>> = fmap
            .into_iter()
            .map(|(normal, offset)| Facet { normal, offset })
            .collect();
        let vertices = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<&Vec3<T>> = facets
                    .iter()
                    .filter(|f| f.is_tight(p))
                    .map(|f| &f.normal)
                    .collect();
                rank3(&tight)
            })
            .collect();
        Ok(Self { vertices, facets })
    }

    /// Builds a polytope from a list that must already be its vertex set.
    pub fn from_vertices(vertices: &[Vec3<T>]) -> Result<Self, PolytopeError> {
        let p = Self::hull(vertices)?;
        let mut v = vertices.to_vec();
        v.sort();
        v.dedup();
        if v != p.vertices {
            return Err(PolytopeError::NotExtreme);
        }
        Ok(p)
    }

    /// Hull of the vertices together with one more point.
    pub fn with_point(&self, p: &Vec3<T>) -> Result<Self, PolytopeError> {
        let mut pts = self.vertices.clone();
        pts.push(p.clone());
        Self::hull(&pts)
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    /// Facets sorted by normal.
    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn contains(&self, x: &Vec3<T>) -> bool {
        self.facets.iter().all(|f| f.contains(x))
    }

    pub fn contains_strictly(&self, x: &Vec3<T>) -> bool {
        self.facets.iter().all(|f| f.value(x).is_positive())
    }

    pub fn contains_polytope(&self, other: &Self) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// Every facet has offset 1 (the origin is then the only interior
    /// lattice point and the polar dual is integral).
    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_one())
    }

    pub fn bounding_box(&self) -> (Vec3<T>, Vec3<T>) {
        let lo =
            std::array::from_fn(|i| self.vertices.iter().map(|v| &v[i]).min().unwrap().clone());
        let hi =
            std::array::from_fn(|i| self.vertices.iter().map(|v| &v[i]).max().unwrap().clone());
        (lo, hi)
    }

    /// Lattice points, lexicographically ordered.
    pub fn lattice_points(&self) -> Vec<Vec3<T>> {
        let (lo, hi) = self.bounding_box();
        box_points(&lo, &hi)
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }

    pub fn interior_points(&self) -> Vec<Vec3<T>> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.contains_strictly(p))
            .collect()
    }

    pub fn boundary_points(&self) -> Vec<Vec3<T>> {
        self.lattice_points()
            .into_iter()
            .filter(|p| !self.contains_strictly(p))
            .collect()
    }

    /// Polar dual; its vertices are `normal / offset` over the facets.
    pub fn polar_dual(&self) -> Result<RationalPolytope<T>, PolytopeError> {
        if !self.origin_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let mut vertices: Vec<Vec3<Ratio<T>>> = self
            .facets
            .iter()
            .map(|f| std::array::from_fn(|i| Ratio::new(f.normal[i].clone(), f.offset.clone())))
            .collect();
        vertices.sort();
        Ok(RationalPolytope { vertices })
    }

    /// Polar dual as a lattice polytope, when it is integral.
    pub fn integral_dual(&self) -> Result<Option<Self>, PolytopeError> {
        self.polar_dual()?.to_lattice()
    }

    pub fn facet_dual_vertex(&self, index: usize) -> Result<Vec3<Ratio<T>>, PolytopeError> {
        let f = self.facets.get(index).ok_or(PolytopeError::FacetIndex {
            index,
            count: self.facets.len(),
        })?;
        if !self.origin_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        Ok(std::array::from_fn(|i| {
            Ratio::new(f.normal[i].clone(), f.offset.clone())
        }))
    }

    /// Index of the facet whose supporting plane holds every given point.
    pub fn facet_through(&self, points: &[Vec3<T>]) -> Option<usize> {
        self.facets
            .iter()
            .position(|f| points.iter().all(|p| f.is_tight(p)))
    }

    /// Facets through a vertex, as indices.
    fn facets_at(&self, v: &Vec3<T>) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].is_tight(v))
            .collect()
    }

    /// Edges as pairs of vertex indices (`i < j`).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let at: Vec<Vec<usize>> = self.vertices.iter().map(|v| self.facets_at(v)).collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let shared = at[i].iter().filter(|f| at[j].contains(f)).count();
                if shared >= 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Lattice points strictly inside the edge between two vertices.
    pub fn edge_interior(&self, i: usize, j: usize) -> T {
        content(&sub3(&self.vertices[i], &self.vertices[j])) - T::one()
    }

    /// Interior lattice-point counts of the edges at `vertex`, sorted.
    pub fn edge_interior_counts(&self, vertex: &Vec3<T>) -> Result<Vec<T>, PolytopeError> {
        let idx = self
            .vertices
            .iter()
            .position(|v| v == vertex)
            .ok_or_else(|| PolytopeError::NotAVertex(format!("{:?}", vertex)))?;
        let mut out: Vec<T> = self
            .edges()
            .into_iter()
            .filter(|&(i, j)| i == idx || j == idx)
            .map(|(i, j)| self.edge_interior(i, j))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Number of lattice points in the relative interior of each facet,
    /// in facet order.
    pub fn facet_interior_counts(&self) -> Vec<usize> {
        let bnd = self.boundary_points();
        self.facets
            .iter()
            .enumerate()
            .map(|(k, f)| {
                bnd.iter()
                    .filter(|p| {
                        f.is_tight(p)
                            && self
                                .facets
                                .iter()
                                .enumerate()
                                .all(|(m, g)| m == k || !g.is_tight(p))
                    })
                    .count()
            })
            .collect()
    }

    pub fn cast<U: Scalar>(&self) -> Result<LatticePolytope<U>, PolytopeError> {
        let pts: Option<Vec<Vec3<U>>> = self
            .vertices
            .iter()
            .map(|v| Some([cast(&v[0])?, cast(&v[1])?, cast(&v[2])?]))
            .collect();
        let pts = pts.ok_or_else(|| PolytopeError::OutOfRange(format!("{:?}", self.vertices)))?;
        LatticePolytope::hull(&pts)
    }
}

/// Polytope with rational vertices, such as a polar dual.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPolytope<T: Clone + num_integer::Integer> {
    vertices: Vec<Vec3<Ratio<T>>>,
}

impl<T: Scalar> RationalPolytope<T> {
    /// Checks full dimension and convex position.
    pub fn new(vertices: Vec<Vec3<Ratio<T>>>) -> Result<Self, PolytopeError> {
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let p = Self { vertices };
        let (_, scaled) = p.scaled_hull()?;
        if scaled.vertices().len() != p.vertices.len() {
            return Err(PolytopeError::NotExtreme);
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &[Vec3<Ratio<T>>] {
        &self.vertices
    }

    fn common_denominator(&self) -> T {
        self.vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(T::one(), |l, q| l.lcm(q.denom()))
    }

    fn scaled_by(&self, l: &T) -> Result<LatticePolytope<T>, PolytopeError> {
        let pts: Vec<Vec3<T>> = self.vertices.iter().map(|v| scale(v, l)).collect();
        LatticePolytope::hull(&pts)
    }

    /// `(L, L * P)` with `L` the least common denominator.
    pub fn scaled_hull(&self) -> Result<(T, LatticePolytope<T>), PolytopeError> {
        let l = self.common_denominator();
        let h = self.scaled_by(&l)?;
        Ok((l, h))
    }

    pub fn is_integral(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|q| q.is_integer()))
    }

    pub fn to_lattice(&self) -> Result<Option<LatticePolytope<T>>, PolytopeError> {
        if !self.is_integral() {
            return Ok(None);
        }
        let pts: Vec<Vec3<T>> = self
            .vertices
            .iter()
            .map(|v| std::array::from_fn(|i| v[i].to_integer()))
            .collect();
        LatticePolytope::hull(&pts).map(Some)
    }

    pub fn contains(&self, y: &Vec3<Ratio<T>>) -> Result<bool, PolytopeError> {
        let l = y
            .iter()
            .fold(self.common_denominator(), |l, q| l.lcm(q.denom()));
        Ok(self.scaled_by(&l)?.contains(&scale(y, &l)))
    }
}

fn scale<T: Scalar>(v: &Vec3<Ratio<T>>, l: &T) -> Vec3<T> {
    std::array::from_fn(|i| (v[i].clone() * Ratio::from(l.clone())).to_integer())
}
