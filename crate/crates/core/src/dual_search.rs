//! Reflexive polytopes sandwiched between a Newton polytope and an ambient
//! polytope, and polytope-dual pairs across two such families.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::lattice_iso::{
    find_unimodular_map, invariant_fingerprint, verify_map, Fingerprint, UnimodularMap,
};
use crate::polytope::{LatticePolytope, PolytopeError};
use crate::registry::CaseRecord;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("inner polytope is not contained in the outer polytope")]
    NotContained,
    #[error("input polytope {0} is not reflexive")]
    NonReflexiveInput(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Reflexive `delta` with `polar_dual(delta)` carried onto `delta_prime` by
/// `witness`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair<T: Scalar> {
    pub delta: LatticePolytope<T>,
    pub delta_prime: LatticePolytope<T>,
    pub witness: UnimodularMap<T>,
}

/// Result of a sandwich enumeration.
#[derive(Debug, Clone)]
pub struct Enumeration<T: Scalar> {
    /// Distinct reflexive polytopes, sorted.
    pub reflexive: Vec<LatticePolytope<T>>,
    /// Distinct hulls reached by the search.
    pub hulls_visited: usize,
}

/// Depth-first search over hulls of `inner` plus lattice points of `outer`,
/// memoized on the vertex set. A hull with a non-origin interior lattice
/// point is not expanded: every larger hull keeps that point interior.
pub fn enumerate_with_stats<T: Scalar>(
    inner: &LatticePolytope<T>,
    outer: &LatticePolytope<T>,
) -> Result<Enumeration<T>, SearchError> {
    if !outer.contains_polytope(inner) {
        return Err(SearchError::NotContained);
    }
    let universe = outer.lattice_points();
    let mut seen: HashSet<LatticePolytope<T>> = HashSet::new();
    let mut stack = vec![inner.clone()];
    seen.insert(inner.clone());
    let mut reflexive = Vec::new();
    while let Some(h) = stack.pop() {
        let blocked = universe
            .iter()
            .any(|p| !p.iter().all(|x| x.is_zero()) && h.contains_strictly(p));
        if blocked {
            continue;
        }
        if h.is_reflexive() {
            reflexive.push(h.clone());
        }
        for p in &universe {
            if h.contains(p) {
                continue;
            }
            let k = h.with_point(p)?;
            if !seen.contains(&k) {
                seen.insert(k.clone());
                stack.push(k);
            }
        }
    }
    reflexive.sort();
    Ok(Enumeration {
        reflexive,
        hulls_visited: seen.len(),
    })
}

pub fn enumerate_reflexive_between<T: Scalar>(
    inner: &LatticePolytope<T>,
    outer: &LatticePolytope<T>,
) -> Result<Vec<LatticePolytope<T>>, SearchError> {
    Ok(enumerate_with_stats(inner, outer)?.reflexive)
}

/// Every `(P, Q)` in `list_a x list_b` with `polar_dual(P)` isomorphic to
/// `Q`. With `unordered`, the two lists must coincide and only `i <= j` is
/// examined.
pub fn find_dual_pairs<T: Scalar>(
    list_a: &[LatticePolytope<T>],
    list_b: &[LatticePolytope<T>],
    unordered: bool,
) -> Result<Vec<DualPair<T>>, SearchError> {
    for (i, p) in list_a.iter().chain(list_b).enumerate() {
        if !p.is_reflexive() {
            return Err(SearchError::NonReflexiveInput(i));
        }
    }
    let duals: Vec<LatticePolytope<T>> = list_a
        .iter()
        .map(|p| {
            Ok(p.integral_dual()?
                .expect("reflexive polytopes have integral duals"))
        })
        .collect::<Result<_, PolytopeError>>()?;
    let dual_fp: Vec<Fingerprint> = duals.iter().map(invariant_fingerprint).collect();
    let b_fp: Vec<Fingerprint> = list_b.iter().map(invariant_fingerprint).collect();
    let mut out = Vec::new();
    for (i, p) in list_a.iter().enumerate() {
        for (j, q) in list_b.iter().enumerate() {
            if unordered && j < i {
                continue;
            }
            if dual_fp[i] != b_fp[j] {
                continue;
            }
            if let Some(m) = crate::lattice_iso::search_map(&duals[i], q) {
                debug_assert!(verify_map(m.matrix(), &duals[i], q));
                out.push(DualPair {
                    delta: p.clone(),
                    delta_prime: q.clone(),
                    witness: m,
                });
            }
        }
    }
    Ok(out)
}

/// Whether `polar_dual(delta)` is isomorphic to `delta_prime`.
pub fn is_dual_pair<T: Scalar>(
    delta: &LatticePolytope<T>,
    delta_prime: &LatticePolytope<T>,
) -> bool {
    match delta.integral_dual() {
        Ok(Some(d)) => find_unimodular_map(&d, delta_prime).is_some(),
        _ => false,
    }
}

/// Expected pair from the registry and whether the search produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedStatus {
    pub delta: String,
    pub delta_prime: String,
    pub found: bool,
}

/// Outcome of re-running one registry case.
#[derive(Debug, Clone)]
pub struct CaseReport<T: Scalar> {
    pub case_no: u32,
    pub self_coupled: bool,
    /// Reflexive polytopes found on each side.
    pub reflexive_counts: (usize, usize),
    pub hulls_visited: (usize, usize),
    pub pairs: Vec<DualPair<T>>,
    pub expected: Vec<ExpectedStatus>,
    /// Indices into `pairs` that match no expected pair.
    pub extra: Vec<usize>,
    pub expected_count: usize,
    /// Pairs grouped by the fingerprints of both members.
    pub fingerprint_classes: usize,
}

impl<T: Scalar> CaseReport<T> {
    pub fn expected_found(&self) -> bool {
        self.expected.iter().all(|e| e.found)
    }

    /// Every expected pair found, and pairs exist exactly when some are expected.
    pub fn matches_expectation(&self) -> bool {
        self.expected_found() && ((self.expected_count == 0) == self.pairs.is_empty())
    }
}

/// Enumerates both sides of a case and searches for dual pairs. A
/// self-coupled case is enumerated once and reports unordered pairs.
pub fn verify_case<T: Scalar>(record: &CaseRecord<T>) -> Result<CaseReport<T>, SearchError> {
    let self_coupled = record.is_self_coupled();
    let ea = enumerate_with_stats(&record.side_a.newton, &record.side_a.ambient)?;
    let eb = if self_coupled {
        ea.clone()
    } else {
        enumerate_with_stats(&record.side_b.newton, &record.side_b.ambient)?
    };
    let pairs = find_dual_pairs(&ea.reflexive, &eb.reflexive, self_coupled)?;

    let matches = |pair: &DualPair<T>, x: &str, y: &str| {
        let (px, py) = (&record.named[x], &record.named[y]);
        (&pair.delta == px && &pair.delta_prime == py)
            || (self_coupled && &pair.delta == py && &pair.delta_prime == px)
    };
    let expected: Vec<ExpectedStatus> = record
        .expected_pairs
        .iter()
        .map(|(x, y)| ExpectedStatus {
            delta: x.clone(),
            delta_prime: y.clone(),
            found: pairs.iter().any(|p| matches(p, x, y)),
        })
        .collect();
    let extra = pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| !record.expected_pairs.iter().any(|(x, y)| matches(p, x, y)))
        .map(|(i, _)| i)
        .collect();
    let fingerprint_classes = pairs
        .iter()
        .map(|p| {
            (
                invariant_fingerprint(&p.delta),
                invariant_fingerprint(&p.delta_prime),
            )
        })
        .collect::<BTreeSet<_>>()
        .len();
    Ok(CaseReport {
        case_no: record.case_no,
        self_coupled,
        reflexive_counts: (ea.reflexive.len(), eb.reflexive.len()),
        hulls_visited: (ea.hulls_visited, eb.hulls_visited),
        pairs,
        expected,
        extra,
        expected_count: record.expected_count,
        fingerprint_classes,
    })
}
