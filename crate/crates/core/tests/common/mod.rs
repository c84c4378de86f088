#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::Ratio;
use polydual::intlinalg::{Mat3, Vec3};
use polydual::polytope::LatticePolytope;
use polydual::registry::{bundled_registry, CaseRecord};
use polydual::wps::{WeightSystem4, WeightedPolynomial};

pub type P = LatticePolytope<i64>;

pub fn registry() -> &'static [CaseRecord<i64>] {
    static REG: OnceLock<Vec<CaseRecord<i64>>> = OnceLock::new();
    REG.get_or_init(|| bundled_registry().expect("bundled registry loads"))
}

pub fn d14() -> P {
    P::hull(&[[-1, -1, 1], [-1, -1, -1], [6, -1, -1], [-1, 2, -1]]).unwrap()
}

/// Hosts containing the three non-reflexive faces of `d14` as facets, with
/// the face vertices.
pub fn gamma_hosts() -> Vec<(P, [[i64; 3]; 3])> {
    let g1 = [[-1, -1, 0], [6, -1, -1], [-1, 2, -1]];
    let g2 = [[-1, 0, -1], [6, -1, -1], [-1, -1, 1]];
    let g3 = [[0, -1, -1], [-1, -1, 1], [-1, 2, -1]];
    vec![
        (
            P::hull(&[[-1, -1, 0], [-1, -1, 1], [6, -1, -1], [-1, 2, -1]]).unwrap(),
            g1,
        ),
        (
            P::hull(&[[-1, 0, -1], [-1, -1, 1], [6, -1, -1], [-1, 2, -1]]).unwrap(),
            g2,
        ),
        (
            P::hull(&[[0, -1, -1], [-1, -1, 1], [6, -1, -1], [-1, 2, -1]]).unwrap(),
            g3,
        ),
    ]
}

fn det(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Membership in the convex hull of `pts` by a simplex cover: a point of a
/// full-dimensional hull lies in some nondegenerate tetrahedron of its points.
pub fn in_hull_oracle(pts: &[[i64; 3]], x: [i64; 3]) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let (a, b, c, d) = (pts[i], pts[j], pts[k], pts[l]);
                    let vol = det(sub(b, a), sub(c, a), sub(d, a));
                    if vol == 0 {
                        continue;
                    }
                    let parts = [
                        det(sub(b, x), sub(c, x), sub(d, x)),
                        det(sub(x, a), sub(c, a), sub(d, a)),
                        det(sub(b, a), sub(x, a), sub(d, a)),
                        det(sub(b, a), sub(c, a), sub(x, a)),
                    ];
                    if parts.iter().all(|&p| p == 0 || (p > 0) == (vol > 0)) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Lattice points by scanning the bounding box of the vertices.
pub fn lattice_points_oracle(p: &P) -> Vec<[i64; 3]> {
    let v = p.vertices();
    let lo: Vec<i64> = (0..3)
        .map(|i| v.iter().map(|x| x[i]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..3)
        .map(|i| v.iter().map(|x| x[i]).max().unwrap())
        .collect();
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                if in_hull_oracle(v, [x, y, z]) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Facet-wise check that the origin is interior and every facet sits at
/// height one, computed from scratch via plane equations over vertex triples.
pub fn reflexive_oracle(p: &P) -> bool {
    let v = p.vertices();
    let n = v.len();
    let mut seen_facet = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(sub(v[j], v[i]), sub(v[k], v[i]));
                if nrm == [0, 0, 0] {
                    continue;
                }
                let h = dot(nrm, v[i]);
                let vals: Vec<i64> = v.iter().map(|x| dot(nrm, *x)).collect();
                let sign = if vals.iter().all(|&t| t <= h) {
                    1
                } else if vals.iter().all(|&t| t >= h) {
                    -1
                } else {
                    continue;
                };
                seen_facet = true;
                // supporting plane <nrm, x> = h with the polytope on one side
                let g = gcd(gcd(nrm[0].abs(), nrm[1].abs()), nrm[2].abs());
                if sign * h <= 0 || (sign * h) != g {
                    return false;
                }
            }
        }
    }
    seen_facet
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Every reflexive hull of `inner` plus a subset of the extra lattice points
/// of `outer`, by exhaustive subset enumeration.
pub fn brute_force_reflexive(inner: &P, outer: &P) -> BTreeSet<P> {
    let base: Vec<[i64; 3]> = inner.vertices().to_vec();
    let extra: Vec<[i64; 3]> = outer
        .lattice_points()
        .into_iter()
        .filter(|x| !inner.contains(x))
        .collect();
    assert!(
        extra.len() <= 20,
        "oracle is exponential in {} points",
        extra.len()
    );
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << extra.len()) {
        let mut pts = base.clone();
        pts.extend(
            (0..extra.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| extra[i]),
        );
        let h = P::hull(&pts).unwrap();
        if reflexive_oracle(&h) {
            out.insert(h);
        }
    }
    out
}

/// Product of elementary matrices `E_ij(c)` (add `c` times column `j` to
/// column `i`) and sign flips.
pub fn unimodular_from_ops(ops: &[(usize, usize, i64)], flips: [bool; 3]) -> Mat3<i64> {
    let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for &(i, j, c) in ops {
        if i == j {
            continue;
        }
        for row in m.iter_mut() {
            row[i] += c * row[j];
        }
    }
    for (i, f) in flips.iter().enumerate() {
        if *f {
            for row in m.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    m
}

pub fn apply(m: &Mat3<i64>, v: &Vec3<i64>) -> Vec3<i64> {
    std::array::from_fn(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

/// `Q* subset P*` checked on vertices: every vertex `y` of `Q*` satisfies
/// `<y, v> >= -1` at every vertex `v` of `P`.
pub fn dual_contained(q_dual: &[Vec3<Ratio<i64>>], p: &P) -> bool {
    q_dual.iter().all(|y| {
        p.vertices().iter().all(|v| {
            let s = (0..3).fold(Ratio::from_integer(0), |s, i| s + y[i] * v[i]);
            s >= Ratio::from_integer(-1)
        })
    })
}

/// Reflexive polytopes named in the registry, across all cases.
pub fn registry_reflexive(recs: &[CaseRecord<i64>]) -> BTreeSet<P> {
    let mut out = BTreeSet::new();
    for r in recs {
        for p in r.named.values() {
            if p.is_reflexive() {
                out.insert(p.clone());
            }
        }
        for s in [&r.side_a, &r.side_b] {
            for p in [&s.newton, &s.ambient] {
                if p.is_reflexive() {
                    out.insert(p.clone());
                }
            }
        }
    }
    out
}

/// Every polytope appearing in the registry.
pub fn registry_polytopes(recs: &[CaseRecord<i64>]) -> BTreeSet<P> {
    let mut out = BTreeSet::new();
    for r in recs {
        out.extend(r.named.values().cloned());
        for s in [&r.side_a, &r.side_b] {
            out.insert(s.newton.clone());
            out.insert(s.ambient.clone());
        }
    }
    out
}

/// Weights making the transposed exponent matrix anticanonical: solve
/// `A^t q = 1` over the rationals and scale to integers.
pub fn transpose_weights(f: &WeightedPolynomial<i64>) -> Option<WeightSystem4<i64>> {
    let a = f.exponent_matrix();
    // rows of the system: for each variable j, sum_k a[k][j] q_k = 1
    let mut m: Vec<Vec<Ratio<i64>>> = (0..4)
        .map(|j| {
            let mut row: Vec<Ratio<i64>> = (0..4)
                .map(|k| Ratio::from_integer(a[k][j] as i64))
                .collect();
            row.push(Ratio::from_integer(1));
            row
        })
        .collect();
    for c in 0..4 {
        let p = (c..4).find(|&r| m[r][c] != Ratio::from_integer(0))?;
        m.swap(c, p);
        let piv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..4 {
            if r != c {
                let f = m[r][c];
                for k in 0..5 {
                    let v = m[c][k];
                    m[r][k] -= f * v;
                }
            }
        }
    }
    let q: Vec<Ratio<i64>> = (0..4).map(|r| m[r][4]).collect();
    if q.iter().any(|x| *x <= Ratio::from_integer(0)) {
        return None;
    }
    let l = q.iter().fold(1i64, |l, x| num_integer::lcm(l, *x.denom()));
    let w: Vec<i64> = q.iter().map(|x| (x * l).to_integer()).collect();
    WeightSystem4::anticanonical([w[0], w[1], w[2], w[3]])
        .ok()
        .filter(|s| *s.degree() == l)
}

/// Equal after permuting variables that carry the same weight.
pub fn same_up_to_equal_weights(f: &WeightedPolynomial<i64>, g: &WeightedPolynomial<i64>) -> bool {
    let a = f.weight().weights();
    let perms = (0..4usize).flat_map(|p0| {
        (0..4usize).flat_map(move |p1| {
            (0..4usize).flat_map(move |p2| (0..4usize).map(move |p3| [p0, p1, p2, p3]))
        })
    });
    f.weight() == g.weight()
        && perms
            .filter(|p| BTreeSet::from(*p).len() == 4 && (0..4).all(|i| a[p[i]] == a[i]))
            .any(|p| {
                let moved: BTreeSet<[u32; 4]> = f
                    .monomials()
                    .iter()
                    .map(|m| std::array::from_fn(|i| m[p[i]]))
                    .collect();
                &moved == g.monomials()
            })
}
