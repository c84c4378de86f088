//! Exact integer linear algebra in dimensions 3 and 4.

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Scalar;

pub type Vec3<T> = [T; 3];
pub type Vec4<T> = [T; 4];
pub type Mat3<T> = [[T; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("weight vector is zero")]
    ZeroWeight,
    #[error("vector {0} is not in the lattice spanned by the basis")]
    NotInLattice(String),
    #[error("basis vectors are linearly dependent")]
    Dependent,
}

pub fn dot3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn dot4<T: Scalar>(a: &Vec4<T>, b: &Vec4<T>) -> T {
    let mut s = T::zero();
    for i in 0..4 {
        s = s + a[i].clone() * b[i].clone();
    }
    s
}

pub fn sub3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

pub fn neg3<T: Scalar>(a: &Vec3<T>) -> Vec3<T> {
    [-a[0].clone(), -a[1].clone(), -a[2].clone()]
}

pub fn cross<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn is_zero3<T: Scalar>(a: &Vec3<T>) -> bool {
    a.iter().all(Zero::is_zero)
}

/// gcd of the absolute values of the entries (0 for the zero vector).
pub fn content<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive3<T: Scalar>(v: &Vec3<T>) -> Vec3<T> {
    let g = content(v);
    if g.is_zero() {
        return v.clone();
    }
    [
        v[0].clone() / g.clone(),
        v[1].clone() / g.clone(),
        v[2].clone() / g,
    ]
}

pub fn identity<T: Scalar>() -> Mat3<T> {
    let mut m: Mat3<T> = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn det3<T: Scalar>(m: &Mat3<T>) -> T {
    dot3(&m[0], &cross(&m[1], &m[2]))
}

pub fn transpose<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

pub fn mat_mul<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(T::zero(), |s, k| s + a[i][k].clone() * b[k][j].clone())
        })
    })
}

/// Matrix acting on a column vector.
pub fn mat_vec<T: Scalar>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    std::array::from_fn(|i| dot3(&m[i], v))
}

/// Classical adjugate, so that `m * adj(m) = det(m) * I`.
pub fn adjugate<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
    };
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

pub fn is_unimodular<T: Scalar>(m: &Mat3<T>) -> bool {
    det3(m).abs().is_one()
}

/// Integer inverse of a unimodular matrix.
pub fn unimodular_inverse<T: Scalar>(m: &Mat3<T>) -> Option<Mat3<T>> {
    let d = det3(m);
    if !d.abs().is_one() {
        return None;
    }
    let adj = adjugate(m);
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| adj[i][j].clone() * d.clone())
    }))
}

/// Solves `m x = b` over the rationals; `None` when `m` is singular.
pub fn solve3<T: Scalar>(m: &Mat3<T>, b: &Vec3<T>) -> Option<Vec3<Ratio<T>>> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let adj = adjugate(m);
    let x = mat_vec(&adj, b);
    Some(std::array::from_fn(|i| Ratio::new(x[i].clone(), d.clone())))
}

/// Three vectors of Z^4 spanning a rank-3 sublattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis<T> {
    vectors: [Vec4<T>; 3],
}

impl<T: Scalar> LatticeBasis<T> {
    pub fn new(vectors: [Vec4<T>; 3]) -> Result<Self, LinalgError> {
        let b = Self { vectors };
        if b.maximal_minors().iter().all(Zero::is_zero) {
            return Err(LinalgError::Dependent);
        }
        Ok(b)
    }

    pub fn vectors(&self) -> &[Vec4<T>; 3] {
        &self.vectors
    }

    fn minor(&self, cols: [usize; 3]) -> Mat3<T> {
        std::array::from_fn(|i| std::array::from_fn(|j| self.vectors[i][cols[j]].clone()))
    }

    /// Signed 3x3 minors; entry k omits column k, with sign (-1)^k.
    /// For a basis of the kernel of a primitive weight this is +-weight.
    pub fn maximal_minors(&self) -> Vec4<T> {
        let cols = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        std::array::from_fn(|k| {
            let d = det3(&self.minor(cols[k]));
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Normal vector of the spanned hyperplane, made primitive with a
    /// positive leading nonzero entry, together with the index of the basis
    /// in the full kernel lattice of that vector.
    pub fn weight_and_index(&self) -> (Vec4<T>, T) {
        let m = self.maximal_minors();
        let g = content(&m);
        let lead_neg = m
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        let w = std::array::from_fn(|i| {
            let x = m[i].clone() / g.clone();
            if lead_neg {
                -x
            } else {
                x
            }
        });
        (w, g)
    }

    /// True iff every vector is orthogonal to `weight`.
    pub fn annihilates(&self, weight: &Vec4<T>) -> bool {
        self.vectors.iter().all(|b| dot4(b, weight).is_zero())
    }

    pub fn combine(&self, c: &Vec3<T>) -> Vec4<T> {
        std::array::from_fn(|i| {
            (0..3).fold(T::zero(), |s, k| {
                s + c[k].clone() * self.vectors[k][i].clone()
            })
        })
    }
}

/// Row-style Hermite normal form: pivots positive, entries above a pivot
/// reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_normal_form<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // Euclid on column c among rows r.. until one nonzero entry remains.
        loop {
            let piv = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for k in 0..ncols {
                    let t = a[r][k].clone() * q.clone();
                    a[i][k] = a[i][k].clone() - t;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for k in 0..ncols {
                a[r][k] = -a[r][k].clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            for k in 0..ncols {
                let t = a[r][k].clone() * q.clone();
                a[i][k] = a[i][k].clone() - t;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// HNF-reduced basis of `{x in Z^4 : weight . x = 0}`.
pub fn kernel_basis<T: Scalar>(weight: &Vec4<T>) -> Result<LatticeBasis<T>, LinalgError> {
    if weight.iter().all(Zero::is_zero) {
        return Err(LinalgError::ZeroWeight);
    }
    // Rows (w_i | e_i). Unimodular row operations keep the first entry equal
    // to weight . (tail), so rows whose first entry vanishes span the kernel.
    let rows: Vec<Vec<T>> = (0..4)
        .map(|i| {
            let mut r = vec![weight[i].clone()];
            r.extend((0..4).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let h = hermite_normal_form(&rows);
    let kernel: Vec<Vec<T>> = h[1..].iter().map(|r| r[1..].to_vec()).collect();
    let k = hermite_normal_form(&kernel);
    let v: [Vec4<T>; 3] = std::array::from_fn(|i| std::array::from_fn(|j| k[i][j].clone()));
    LatticeBasis::new(v)
}

/// Coordinates of `v` with respect to `basis`.
pub fn express_in_basis<T: Scalar>(
    v: &Vec4<T>,
    basis: &LatticeBasis<T>,
) -> Result<Vec3<T>, LinalgError> {
    let not_in = || LinalgError::NotInLattice(format!("{:?}", v));
    let cols = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    for sel in cols {
        // Columns of the 4x3 matrix whose columns are the basis vectors.
        let m: Mat3<T> =
            std::array::from_fn(|i| std::array::from_fn(|j| basis.vectors[j][sel[i]].clone()));
        let rhs: Vec3<T> = std::array::from_fn(|i| v[sel[i]].clone());
        let Some(x) = solve3(&m, &rhs) else { continue };
        if x.iter().any(|q| !q.is_integer()) {
            return Err(not_in());
        }
        let c: Vec3<T> = std::array::from_fn(|i| x[i].to_integer());
        if basis.combine(&c) != *v {
            return Err(not_in());
        }
        return Ok(c);
    }
    Err(LinalgError::Dependent)
}
