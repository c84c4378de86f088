//! Weighted magic squares, coupled weight systems and the transpose
//! construction of polynomials.

use rayon::prelude::*;
use thiserror::Error;

use crate::intlinalg::{det3, Mat3, Vec3};
use crate::scalar::Scalar;
use crate::wps::{Monomial4, WeightSystem4, WeightedPolynomial, WpsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CouplingError {
    #[error("weights must be positive")]
    NonPositive,
    #[error("square entries must be nonnegative")]
    NegativeEntry,
    #[error("matrix is not a weighted magic square for the given weights")]
    NotMagic,
    #[error("magic square is not almost primitive")]
    NotCoupled,
    #[error("section variable {0} is out of range")]
    BadSection(usize),
    #[error("degree {d} is not divisible by the section weight {a}")]
    IndivisibleDegree { d: String, a: String },
    #[error("polynomial has {0} monomials; the transpose needs exactly 4")]
    NotSquare(usize),
    #[error("transposed exponents are not anticanonical for {0}")]
    WrongDegree(String),
    #[error(transparent)]
    Wps(#[from] WpsError),
}

/// `(w1, w2, w3; d)`. Pairwise coprimality is not enforced; see
/// [`WeightSystem3::is_well_posed`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem3<T> {
    w: Vec3<T>,
    d: T,
}

impl<T: Scalar> WeightSystem3<T> {
    pub fn new(w: Vec3<T>, d: T) -> Result<Self, CouplingError> {
        if w.iter().any(|x| !x.is_positive()) || !d.is_positive() {
            return Err(CouplingError::NonPositive);
        }
        Ok(Self { w, d })
    }

    pub fn weights(&self) -> &Vec3<T> {
        &self.w
    }

    pub fn degree(&self) -> &T {
        &self.d
    }

    pub fn weight_sum(&self) -> T {
        self.w[0].clone() + self.w[1].clone() + self.w[2].clone()
    }

    /// Every pair of weights is coprime.
    pub fn is_well_posed(&self) -> bool {
        (0..3).all(|i| (i + 1..3).all(|j| self.w[i].gcd(&self.w[j]).is_one()))
    }
}

/// 3x3 matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MagicSquare<T> {
    c: Mat3<T>,
}

impl<T: Scalar> MagicSquare<T> {
    pub fn new(c: Mat3<T>) -> Result<Self, CouplingError> {
        if c.iter().flatten().any(|x| x.is_negative()) {
            return Err(CouplingError::NegativeEntry);
        }
        Ok(Self { c })
    }

    pub fn entries(&self) -> &Mat3<T> {
        &self.c
    }

    pub fn det(&self) -> T {
        det3(&self.c)
    }
}

/// `C w = (d,d,d)` and `w' C = (h,h,h)`.
pub fn is_weighted_magic_square<T: Scalar>(
    c: &MagicSquare<T>,
    w: &WeightSystem3<T>,
    w2: &WeightSystem3<T>,
) -> bool {
    let rows = (0..3)
        .all(|i| (0..3).fold(T::zero(), |s, j| s + c.c[i][j].clone() * w.w[j].clone()) == w.d);
    let cols = (0..3)
        .all(|j| (0..3).fold(T::zero(), |s, i| s + w2.w[i].clone() * c.c[i][j].clone()) == w2.d);
    rows && cols
}

/// Almost primitive: `|det C| = (d - sum w) h = (h - sum w') d`.
pub fn is_coupled<T: Scalar>(
    c: &MagicSquare<T>,
    w: &WeightSystem3<T>,
    w2: &WeightSystem3<T>,
) -> Result<bool, CouplingError> {
    if !is_weighted_magic_square(c, w, w2) {
        return Err(CouplingError::NotMagic);
    }
    let det = c.det().abs();
    let lhs = (w.d.clone() - w.weight_sum()) * w2.d.clone();
    let rhs = (w2.d.clone() - w2.weight_sum()) * w.d.clone();
    Ok(det == lhs && det == rhs)
}

/// Coupled, with a zero entry in every row and every column.
pub fn is_strongly_coupled<T: Scalar>(
    c: &MagicSquare<T>,
    w: &WeightSystem3<T>,
    w2: &WeightSystem3<T>,
) -> Result<bool, CouplingError> {
    if !is_coupled(c, w, w2)? {
        return Err(CouplingError::NotCoupled);
    }
    let rows = (0..3).all(|i| (0..3).any(|j| c.c[i][j].is_zero()));
    let cols = (0..3).all(|j| (0..3).any(|i| c.c[i][j].is_zero()));
    Ok(rows && cols)
}

/// Exponents of `x, y, z`.
pub type Monomial3 = [u32; 3];

/// `f` reads the rows of `C`, `f'` its columns.
pub fn polynomials_from_square<T: Scalar>(c: &MagicSquare<T>) -> (Vec<Monomial3>, Vec<Monomial3>) {
    let e = |x: &T| x.to_u32().expect("exponent fits in u32");
    let f = (0..3)
        .map(|i| std::array::from_fn(|j| e(&c.c[i][j])))
        .collect();
    let f2 = (0..3)
        .map(|j| std::array::from_fn(|i| e(&c.c[i][j])))
        .collect();
    (f, f2)
}

/// All weighted magic squares with entries at most `bound`, in
/// lexicographic order of their entries.
pub fn magic_squares<T: Scalar>(
    w: &WeightSystem3<T>,
    w2: &WeightSystem3<T>,
    bound: u32,
) -> Vec<MagicSquare<T>> {
    let t = |x: u32| T::from_u32(x).unwrap();
    let mut rows: Vec<Vec3<T>> = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                let r = [t(a), t(b), t(c)];
                let s = (0..3).fold(T::zero(), |s, j| s + r[j].clone() * w.w[j].clone());
                if s == w.d {
                    rows.push(r);
                }
            }
        }
    }
    rows.par_iter()
        .flat_map_iter(|r0| {
            let rows = &rows;
            rows.iter().flat_map(move |r1| {
                rows.iter().filter_map(move |r2| {
                    let sq = MagicSquare {
                        c: [r0.clone(), r1.clone(), r2.clone()],
                    };
                    is_weighted_magic_square(&sq, w, w2).then_some(sq)
                })
            })
        })
        .collect()
}

/// Search bound that can never cut off a magic square.
pub fn default_bound<T: Scalar>(w: &WeightSystem3<T>, w2: &WeightSystem3<T>) -> u32 {
    let m = if w.d > w2.d { &w.d } else { &w2.d };
    m.to_u32().expect("degree fits in u32")
}

/// Lifts `f` to four variables and adds the pure power of the section
/// variable of degree `d`.
pub fn projectivise<T: Scalar>(
    f: &[Monomial3],
    target: &WeightSystem4<T>,
    section: usize,
) -> Result<WeightedPolynomial<T>, CouplingError> {
    if section > 3 {
        return Err(CouplingError::BadSection(section));
    }
    let a = &target.weights()[section];
    let d = target.degree();
    if !(d.clone() % a.clone()).is_zero() {
        return Err(CouplingError::IndivisibleDegree {
            d: d.to_string(),
            a: a.to_string(),
        });
    }
    let mut ms: Vec<Monomial4> = f.iter().map(|m| lift(m, section)).collect();
    let mut power = [0u32; 4];
    power[section] = (d.clone() / a.clone())
        .to_u32()
        .expect("exponent fits in u32");
    ms.push(power);
    Ok(WeightedPolynomial::new(target.clone(), ms)?)
}

fn lift(m: &Monomial3, section: usize) -> Monomial4 {
    let mut out = [0u32; 4];
    let mut k = 0;
    for (i, e) in out.iter_mut().enumerate() {
        if i != section {
            *e = m[k];
            k += 1;
        }
    }
    out
}

/// `F` restricted to the vanishing of the section variable.
pub fn restrict<T: Scalar>(f: &WeightedPolynomial<T>, section: usize) -> Vec<Monomial3> {
    f.monomials()
        .iter()
        .filter(|m| m[section] == 0)
        .map(|m| {
            let rest: Vec<u32> = (0..4).filter(|&i| i != section).map(|i| m[i]).collect();
            [rest[0], rest[1], rest[2]]
        })
        .collect()
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j])) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Polynomial whose exponent matrix is the transpose of that of `f`.
///
/// The rows of `f` carry no variable labels, so the k-th monomial of `f` is
/// sent to variable `sigma(k)`; the first permutation `sigma` in
/// lexicographic order giving an anticanonical polynomial for `target` wins.
pub fn transpose_polynomial<T: Scalar>(
    f: &WeightedPolynomial<T>,
    target: &WeightSystem4<T>,
) -> Result<WeightedPolynomial<T>, CouplingError> {
    let a = f.exponent_matrix();
    if a.len() != 4 {
        return Err(CouplingError::NotSquare(a.len()));
    }
    for sigma in permutations4() {
        let ms: Vec<Monomial4> = (0..4)
            .map(|j| {
                let mut e = [0u32; 4];
                for k in 0..4 {
                    e[sigma[k]] = a[k][j];
                }
                e
            })
            .collect();
        if ms.iter().all(|m| target.degree_of(m) == *target.degree()) {
            return Ok(WeightedPolynomial::new(target.clone(), ms)?);
        }
    }
    Err(CouplingError::WrongDegree(target.to_string()))
}

/// Whether the exponent matrix of `g` is the transpose of that of `f` up to
/// the order of monomials and a relabelling of variables.
pub fn is_transpose_pair<T: Scalar>(f: &WeightedPolynomial<T>, g: &WeightedPolynomial<T>) -> bool {
    let a = f.exponent_matrix();
    if a.len() != 4 || g.monomials().len() != 4 {
        return false;
    }
    permutations4().into_iter().any(|sigma| {
        (0..4).all(|j| {
            let mut e = [0u32; 4];
            for k in 0..4 {
                e[sigma[k]] = a[k][j];
            }
            g.monomials().contains(&e)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w3(w: [i64; 3], d: i64) -> WeightSystem3<i64> {
        WeightSystem3::new(w, d).unwrap()
    }

    fn sq(c: [[i64; 3]; 3]) -> MagicSquare<i64> {
        MagicSquare::new(c).unwrap()
    }

    #[test]
    fn magic_examples() {
        let w = w3([1, 1, 1], 3);
        assert!(is_weighted_magic_square(
            &sq([[3, 0, 0], [0, 3, 0], [0, 0, 3]]),
            &w,
            &w
        ));
        assert!(is_weighted_magic_square(&sq([[1; 3]; 3]), &w, &w));
        assert!(!is_weighted_magic_square(
            &sq([[2, 0, 0], [0, 3, 0], [0, 0, 3]]),
            &w,
            &w
        ));
    }

    #[test]
    fn coupling_needs_magic() {
        let w = w3([1, 1, 1], 3);
        assert_eq!(
            is_coupled(&sq([[2, 0, 0], [0, 3, 0], [0, 0, 3]]), &w, &w),
            Err(CouplingError::NotMagic)
        );
        let w = w3([1, 1, 1], 4);
        let c = sq([[4, 0, 0], [0, 4, 0], [0, 0, 4]]);
        assert_eq!(is_coupled(&c, &w, &w), Ok(false));
        assert_eq!(
            is_strongly_coupled(&c, &w, &w),
            Err(CouplingError::NotCoupled)
        );
        assert_eq!(
            is_coupled(&sq([[2, 1, 1], [1, 2, 1], [1, 1, 2]]), &w, &w),
            Ok(true)
        );
    }

    #[test]
    fn strongly_coupled_example() {
        let w = w3([1, 4, 7], 15);
        let c = sq([[11, 1, 0], [1, 0, 2], [0, 2, 1]]);
        assert_eq!(is_coupled(&c, &w, &w), Ok(true));
        assert_eq!(is_strongly_coupled(&c, &w, &w), Ok(true));
    }

    #[test]
    fn polynomials_read_rows_and_columns() {
        let (f, f2) = polynomials_from_square(&sq([[3, 0, 0], [0, 3, 0], [0, 0, 3]]));
        assert_eq!(f, f2);
        let (f, f2) = polynomials_from_square(&sq([[4, 0, 0], [0, 3, 0], [0, 0, 3]]));
        assert_eq!(f, vec![[4, 0, 0], [0, 3, 0], [0, 0, 3]]);
        assert_eq!(f2, f);
        let (g, g2) = polynomials_from_square(&sq([[11, 1, 0], [1, 0, 2], [0, 2, 1]]));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], g2[j][i]);
            }
        }
    }

    #[test]
    fn projectivise_no27() {
        let t = WeightSystem4::new([1i64, 3, 4, 4], 12).unwrap();
        let f = [[4, 0, 0], [0, 3, 0], [0, 0, 3]];
        let big = projectivise(&f, &t, 0).unwrap();
        let want: Vec<Monomial4> = vec![[0, 0, 0, 3], [0, 0, 3, 0], [0, 4, 0, 0], [12, 0, 0, 0]];
        assert_eq!(big.exponent_matrix(), want);
        let mut back = restrict(&big, 0);
        back.sort();
        let mut f = f.to_vec();
        f.sort();
        assert_eq!(back, f);
        assert_eq!(
            projectivise(&f, &t, 4).unwrap_err(),
            CouplingError::BadSection(4)
        );
    }

    #[test]
    fn projectivise_degree_guards() {
        let t = WeightSystem4::new([1i64, 1, 1, 1], 4).unwrap();
        let r = projectivise(&[[3, 0, 0], [0, 3, 0], [0, 0, 3]], &t, 0);
        assert!(matches!(
            r,
            Err(CouplingError::Wps(WpsError::WrongDegree { .. }))
        ));
        let t = WeightSystem4::new([2i64, 3, 5, 7], 17).unwrap();
        let r = projectivise(&[[1, 0, 0]], &t, 0);
        assert!(matches!(r, Err(CouplingError::IndivisibleDegree { .. })));
    }

    #[test]
    fn transpose_symmetric_no27() {
        let t = WeightSystem4::new([1i64, 3, 4, 4], 12).unwrap();
        let f1 = WeightedPolynomial::new(
            t.clone(),
            [[12, 0, 0, 0], [0, 4, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]],
        )
        .unwrap();
        assert_eq!(transpose_polynomial(&f1, &t).unwrap(), f1);
    }

    #[test]
    fn no27_f2_is_not_symmetric() {
        // the W^8 Z row has a lone off-diagonal entry, so the transpose leaves (1,3,4,4;12)
        let t = WeightSystem4::new([1i64, 3, 4, 4], 12).unwrap();
        let f2 = WeightedPolynomial::new(
            t.clone(),
            [[8, 0, 0, 1], [0, 4, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]],
        )
        .unwrap();
        assert!(matches!(
            transpose_polynomial(&f2, &t),
            Err(CouplingError::WrongDegree(_))
        ));
        let other = WeightSystem4::new([3i64, 6, 8, 7], 24).unwrap();
        let g = transpose_polynomial(&f2, &other).unwrap();
        let want: Vec<Monomial4> = vec![[0, 0, 3, 0], [0, 4, 0, 0], [1, 0, 0, 3], [8, 0, 0, 0]];
        assert_eq!(g.exponent_matrix(), want);
        assert!(is_transpose_pair(&f2, &g));
        assert_eq!(transpose_polynomial(&g, &t).unwrap(), f2);
    }

    #[test]
    fn transpose_rejects_bad_shapes() {
        let t = WeightSystem4::new([1i64, 1, 1, 1], 4).unwrap();
        let f = WeightedPolynomial::new(t.clone(), [[4, 0, 0, 0], [0, 4, 0, 0]]).unwrap();
        assert_eq!(
            transpose_polynomial(&f, &t).unwrap_err(),
            CouplingError::NotSquare(2)
        );
        let g =
            WeightedPolynomial::new(t, [[4, 0, 0, 0], [0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]])
                .unwrap();
        let other = WeightSystem4::new([1i64, 1, 1, 3], 6).unwrap();
        assert!(matches!(
            transpose_polynomial(&g, &other),
            Err(CouplingError::WrongDegree(_))
        ));
    }
}
