//! Weight systems, the lattice `M` of a weighted projective 3-space,
//! monomials as lattice points, ambient and Newton polytopes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::intlinalg::{express_in_basis, LatticeBasis, LinalgError, Vec3, Vec4};
use crate::polytope::{LatticePolytope, PolytopeError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WpsError {
    #[error("weights must be positive")]
    NonPositive,
    #[error("degree {d} is not the weight sum {sum}")]
    NotAnticanonical { d: String, sum: String },
    #[error("weights {0} are not well-posed")]
    NotWellPosed(String),
    #[error("monomial {monomial:?} has degree {degree}, expected {expected}")]
    WrongDegree {
        monomial: Monomial4,
        degree: String,
        expected: String,
    },
    #[error(transparent)]
    Lattice(#[from] LinalgError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Exponents of `W, X, Y, Z`.
pub type Monomial4 = [u32; 4];

/// `(a0, a1, a2, a3; d)` with `d = a0 + a1 + a2 + a3` and well-posed weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem4<T> {
    a: Vec4<T>,
    d: T,
}

impl<T: Scalar> WeightSystem4<T> {
    pub fn new(a: Vec4<T>, d: T) -> Result<Self, WpsError> {
        if a.iter().any(|x| !x.is_positive()) {
            return Err(WpsError::NonPositive);
        }
        let sum = a.iter().fold(T::zero(), |s, x| s + x.clone());
        if sum != d {
            return Err(WpsError::NotAnticanonical {
                d: d.to_string(),
                sum: sum.to_string(),
            });
        }
        if !is_well_posed(&a) {
            return Err(WpsError::NotWellPosed(format!("{:?}", a)));
        }
        Ok(Self { a, d })
    }

    /// Anticanonical system for the given weights.
    pub fn anticanonical(a: Vec4<T>) -> Result<Self, WpsError> {
        let d = a.iter().fold(T::zero(), |s, x| s + x.clone());
        Self::new(a, d)
    }

    pub fn weights(&self) -> &Vec4<T> {
        &self.a
    }

    pub fn degree(&self) -> &T {
        &self.d
    }

    pub fn degree_of(&self, m: &Monomial4) -> T {
        (0..4).fold(T::zero(), |s, i| {
            s + self.a[i].clone() * T::from_u32(m[i]).unwrap()
        })
    }

    /// All monomials of degree `d`, lexicographic in the exponents.
    pub fn degree_monomials(&self) -> Vec<Monomial4> {
        let mut out = Vec::new();
        let mut e = [0u32; 4];
        self.fill(0, self.d.clone(), &mut e, &mut out);
        out
    }

    fn fill(&self, i: usize, rest: T, e: &mut Monomial4, out: &mut Vec<Monomial4>) {
        if i == 3 {
            if (rest.clone() % self.a[3].clone()).is_zero() {
                e[3] = (rest / self.a[3].clone())
                    .to_u32()
                    .expect("exponent fits in u32");
                out.push(*e);
            }
            return;
        }
        let mut k = 0u32;
        let mut r = rest;
        while !r.is_negative() {
            e[i] = k;
            self.fill(i + 1, r.clone(), e, out);
            r = r - self.a[i].clone();
            k += 1;
        }
    }
}

impl<T: Scalar> fmt::Display for WeightSystem4<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{};{})",
            self.a[0], self.a[1], self.a[2], self.a[3], self.d
        )
    }
}

/// Every 3-subset of the weights has gcd 1.
pub fn is_well_posed<T: Scalar>(a: &Vec4<T>) -> bool {
    (0..4).all(|skip| {
        let g = (0..4)
            .filter(|&i| i != skip)
            .fold(T::zero(), |g, i| g.gcd(&a[i]));
        g.is_one()
    })
}

/// Finite set of degree-`d` monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedPolynomial<T> {
    weight: WeightSystem4<T>,
    monomials: BTreeSet<Monomial4>,
}

impl<T: Scalar> WeightedPolynomial<T> {
    pub fn new<I: IntoIterator<Item = Monomial4>>(
        weight: WeightSystem4<T>,
        monomials: I,
    ) -> Result<Self, WpsError> {
        let monomials: BTreeSet<Monomial4> = monomials.into_iter().collect();
        for m in &monomials {
            let deg = weight.degree_of(m);
            if deg != weight.d {
                return Err(WpsError::WrongDegree {
                    monomial: *m,
                    degree: deg.to_string(),
                    expected: weight.d.to_string(),
                });
            }
        }
        Ok(Self { weight, monomials })
    }

    pub fn weight(&self) -> &WeightSystem4<T> {
        &self.weight
    }

    pub fn monomials(&self) -> &BTreeSet<Monomial4> {
        &self.monomials
    }

    /// Rows of the exponent matrix, in monomial order.
    pub fn exponent_matrix(&self) -> Vec<Monomial4> {
        self.monomials.iter().copied().collect()
    }
}

/// `W^(i+1) X^(j+1) Y^(k+1) Z^(l+1)` goes to the coordinates of `(i,j,k,l)`.
pub fn monomial_to_point<T: Scalar>(
    m: &Monomial4,
    w: &WeightSystem4<T>,
    basis: &LatticeBasis<T>,
) -> Result<Vec3<T>, WpsError> {
    let deg = w.degree_of(m);
    if deg != w.d {
        return Err(WpsError::WrongDegree {
            monomial: *m,
            degree: deg.to_string(),
            expected: w.d.to_string(),
        });
    }
    let v: Vec4<T> = std::array::from_fn(|i| T::from_u32(m[i]).unwrap() - T::one());
    Ok(express_in_basis(&v, basis)?)
}

/// Inverse of [`monomial_to_point`]; `None` when an exponent would be negative.
pub fn point_to_monomial<T: Scalar>(c: &Vec3<T>, basis: &LatticeBasis<T>) -> Option<Monomial4> {
    let v = basis.combine(c);
    let mut m = [0u32; 4];
    for i in 0..4 {
        let e = v[i].clone() + T::one();
        if e.is_negative() {
            return None;
        }
        m[i] = e.to_u32()?;
    }
    Some(m)
}

pub fn newton_polytope<T: Scalar>(
    f: &WeightedPolynomial<T>,
    basis: &LatticeBasis<T>,
) -> Result<LatticePolytope<T>, WpsError> {
    let pts = f
        .monomials
        .iter()
        .map(|m| monomial_to_point(m, &f.weight, basis))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticePolytope::hull(&pts)?)
}

pub fn ambient_polytope<T: Scalar>(
    w: &WeightSystem4<T>,
    basis: &LatticeBasis<T>,
) -> Result<LatticePolytope<T>, WpsError> {
    let pts = w
        .degree_monomials()
        .iter()
        .map(|m| monomial_to_point(m, w, basis))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LatticePolytope::hull(&pts)?)
}
