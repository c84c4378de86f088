//! Unimodular (GL(3,Z)) equivalence of lattice polytopes.

use std::collections::HashSet;

use crate::intlinalg::{
    adjugate, det3, is_unimodular, mat_mul, mat_vec, unimodular_inverse, Mat3, Vec3,
};
use crate::polytope::{LatticePolytope, PolytopeError};
use crate::scalar::Scalar;

/// Integer matrix of determinant +-1, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMap<T> {
    matrix: Mat3<T>,
}

impl<T: Scalar> UnimodularMap<T> {
    pub fn new(matrix: Mat3<T>) -> Option<Self> {
        is_unimodular(&matrix).then_some(Self { matrix })
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        mat_vec(&self.matrix, v)
    }

    pub fn image(&self, p: &LatticePolytope<T>) -> Result<LatticePolytope<T>, PolytopeError> {
        let pts: Vec<Vec3<T>> = p.vertices().iter().map(|v| self.apply(v)).collect();
        LatticePolytope::hull(&pts)
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: unimodular_inverse(&self.matrix).expect("determinant is +-1"),
        }
    }

    pub fn compose(&self, then: &Self) -> Self {
        Self {
            matrix: mat_mul(&then.matrix, &self.matrix),
        }
    }
}

/// GL(3,Z)-invariants used to rule out isomorphism cheaply.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub vertices: usize,
    pub facets: usize,
    pub lattice_points: usize,
    pub boundary_points: usize,
    pub facet_interior: Vec<usize>,
    pub edge_interior: Vec<usize>,
    /// Sorted interior counts of the edges at each vertex, over all vertices.
    pub vertex_profiles: Vec<Vec<usize>>,
}

fn count<T: Scalar>(x: T) -> usize {
    x.to_usize().expect("lattice point count fits in usize")
}

pub fn invariant_fingerprint<T: Scalar>(p: &LatticePolytope<T>) -> Fingerprint {
    let edges = p.edges();
    let mut edge_interior: Vec<usize> = edges
        .iter()
        .map(|&(i, j)| count(p.edge_interior(i, j)))
        .collect();
    edge_interior.sort_unstable();
    let mut vertex_profiles: Vec<Vec<usize>> = (0..p.vertices().len())
        .map(|v| {
            let mut c: Vec<usize> = edges
                .iter()
                .filter(|&&(i, j)| i == v || j == v)
                .map(|&(i, j)| count(p.edge_interior(i, j)))
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    vertex_profiles.sort();
    let mut facet_interior = p.facet_interior_counts();
    facet_interior.sort_unstable();
    Fingerprint {
        vertices: p.vertices().len(),
        facets: p.facets().len(),
        lattice_points: p.lattice_points().len(),
        boundary_points: p.boundary_points().len(),
        facet_interior,
        edge_interior,
        vertex_profiles,
    }
}

/// Image of `p` equals `q` as vertex sets, and the matrix is unimodular.
pub fn verify_map<T: Scalar>(m: &Mat3<T>, p: &LatticePolytope<T>, q: &LatticePolytope<T>) -> bool {
    if !is_unimodular(m) || p.vertices().len() != q.vertices().len() {
        return false;
    }
    let target: HashSet<&Vec3<T>> = q.vertices().iter().collect();
    p.vertices().iter().all(|v| target.contains(&mat_vec(m, v)))
}

/// Linear unimodular map carrying `p` onto `q`, without the fingerprint
/// prefilter.
pub fn search_map<T: Scalar>(
    p: &LatticePolytope<T>,
    q: &LatticePolytope<T>,
) -> Option<UnimodularMap<T>> {
    let pv = p.vertices();
    let qv = q.vertices();
    if pv.len() != qv.len() {
        return None;
    }
    let n = pv.len();
    // First linearly independent vertex triple of p in lexicographic order.
    let mut base = None;
    'outer: for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = [pv[i].clone(), pv[j].clone(), pv[k].clone()];
                if !det3(&a).is_zero() {
                    base = Some(a);
                    break 'outer;
                }
            }
        }
    }
    let a = base?;
    // M A^t = B^t with rows of A the source points: M = B^t adj(A^t) / det.
    let at: Mat3<T> = std::array::from_fn(|r| std::array::from_fn(|c| a[c][r].clone()));
    let d = det3(&at);
    let adj = adjugate(&at);
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let bt: Mat3<T> = std::array::from_fn(|r| {
                    let cols = [&qv[i], &qv[j], &qv[k]];
                    std::array::from_fn(|c| cols[c][r].clone())
                });
                let num = mat_mul(&bt, &adj);
                if num
                    .iter()
                    .flatten()
                    .any(|x| !(x.clone() % d.clone()).is_zero())
                {
                    continue;
                }
                let m: Mat3<T> =
                    std::array::from_fn(|r| std::array::from_fn(|c| num[r][c].clone() / d.clone()));
                if verify_map(&m, p, q) {
                    return Some(UnimodularMap { matrix: m });
                }
            }
        }
    }
    None
}

/// Fingerprint prefilter, then the exact triple search. The first match in
/// lexicographic order of target triples is returned.
pub fn find_unimodular_map<T: Scalar>(
    p: &LatticePolytope<T>,
    q: &LatticePolytope<T>,
) -> Option<UnimodularMap<T>> {
    if p.vertices().len() != q.vertices().len() || p.facets().len() != q.facets().len() {
        return None;
    }
    if invariant_fingerprint(p) != invariant_fingerprint(q) {
        return None;
    }
    search_map(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::identity;

    type P = LatticePolytope<i64>;

    fn d14() -> P {
        P::hull(&[[-1, -1, 1], [-1, -1, -1], [6, -1, -1], [-1, 2, -1]]).unwrap()
    }

    fn cube() -> P {
        let mut pts = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    pts.push([x, y, z]);
                }
            }
        }
        P::hull(&pts).unwrap()
    }

    #[test]
    fn d14_self_dual() {
        let p = d14();
        let d = p.integral_dual().unwrap().unwrap();
        assert_eq!(invariant_fingerprint(&p), invariant_fingerprint(&d));
        let m = find_unimodular_map(&p, &d).unwrap();
        assert!(verify_map(m.matrix(), &p, &d));
        let paper = [[6, -1, -1], [-1, 2, -1], [-1, -1, 1]];
        assert!(verify_map(&paper, &d, &p));
    }

    #[test]
    fn identity_found_for_equal() {
        let c = cube();
        let m = find_unimodular_map(&c, &c).unwrap();
        assert!(verify_map(m.matrix(), &c, &c));
        assert!(verify_map(&identity(), &c, &c));
    }

    #[test]
    fn cube_not_octahedron() {
        let c = cube();
        let o = c.integral_dual().unwrap().unwrap();
        assert_ne!(invariant_fingerprint(&c), invariant_fingerprint(&o));
        assert!(find_unimodular_map(&c, &o).is_none());
        assert!(!verify_map(&identity(), &c, &o));
    }

    #[test]
    fn non_unimodular_rejected() {
        assert!(UnimodularMap::new([[2i64, 0, 0], [0, 1, 0], [0, 0, 1]]).is_none());
        let c = cube();
        assert!(!verify_map(&[[2, 0, 0], [0, 1, 0], [0, 0, 1]], &c, &c));
    }

    #[test]
    fn inverse_maps_back() {
        let p = d14();
        let d = p.integral_dual().unwrap().unwrap();
        let m = find_unimodular_map(&p, &d).unwrap();
        assert!(verify_map(m.inverse().matrix(), &d, &p));
        assert_eq!(m.compose(&m.inverse()).matrix(), &identity::<i64>());
    }
}
