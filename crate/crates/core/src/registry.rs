//! The case registry: weight systems, bases, polynomials and expected
//! dual pairs for each numbered case, loaded from JSON and validated.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::intlinalg::{is_unimodular, LatticeBasis, Mat3, Vec3, Vec4};
use crate::io::{int, JsonError};
use crate::polytope::LatticePolytope;
use crate::scalar::Scalar;
use crate::wps::{ambient_polytope, newton_polytope, Monomial4, WeightSystem4, WeightedPolynomial};

/// Registry shipped with the crate.
pub const BUNDLED: &str = include_str!("../data/registry.json");
pub const SCHEMA: u64 = 1;
pub const CASE_COUNT: usize = 51;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("{pointer}: {message}")]
    Invalid { pointer: String, message: String },
    #[error("reading registry: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing registry: {0}")]
    Parse(#[from] serde_json::Error),
}

impl From<JsonError> for RegistryError {
    fn from(e: JsonError) -> Self {
        RegistryError::Invalid {
            pointer: e.pointer,
            message: e.message,
        }
    }
}

fn invalid(pointer: &str, message: impl Into<String>) -> RegistryError {
    RegistryError::Invalid {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

/// One side of a coupled pair.
#[derive(Debug, Clone)]
pub struct Side<T> {
    pub yonemura_no: u32,
    pub weight: WeightSystem4<T>,
    pub basis: LatticeBasis<T>,
    pub f: WeightedPolynomial<T>,
    pub newton: LatticePolytope<T>,
    pub ambient: LatticePolytope<T>,
}

/// Named polytope, or its polar dual when `dual` is set (written `name*`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRef {
    pub name: String,
    pub dual: bool,
}

impl PolyRef {
    fn parse(s: &str) -> Self {
        match s.strip_suffix('*') {
            Some(n) => PolyRef {
                name: n.to_string(),
                dual: true,
            },
            None => PolyRef {
                name: s.to_string(),
                dual: false,
            },
        }
    }
}

impl std::fmt::Display for PolyRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.name, if self.dual { "*" } else { "" })
    }
}

/// Isomorphism matrix carrying `source` onto `target`.
#[derive(Debug, Clone)]
pub struct MapRecord<T> {
    pub matrix: Mat3<T>,
    pub source: PolyRef,
    pub target: PolyRef,
}

#[derive(Debug, Clone)]
pub struct CaseRecord<T> {
    pub case_no: u32,
    pub side_a: Side<T>,
    pub side_b: Side<T>,
    pub named: BTreeMap<String, LatticePolytope<T>>,
    pub expected_pairs: Vec<(String, String)>,
    pub maps: Vec<MapRecord<T>>,
    pub expected_count: usize,
}

impl<T: Scalar> CaseRecord<T> {
    /// Both sides carry the same weight system and polynomial.
    pub fn is_self_coupled(&self) -> bool {
        self.side_a.yonemura_no == self.side_b.yonemura_no && self.side_a.f == self.side_b.f
    }

    /// Resolves a reference, dualizing when asked.
    pub fn resolve(&self, r: &PolyRef) -> Option<LatticePolytope<T>> {
        let p = self.named.get(&r.name)?;
        if r.dual {
            p.integral_dual().ok().flatten()
        } else {
            Some(p.clone())
        }
    }
}

fn field<'a>(v: &'a Value, ptr: &str, key: &str) -> Result<&'a Value, RegistryError> {
    v.get(key)
        .ok_or_else(|| invalid(ptr, format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, RegistryError> {
    v.as_array()
        .ok_or_else(|| invalid(ptr, "expected an array"))
}

fn vec_n<T: Scalar, const N: usize>(v: &Value, ptr: &str) -> Result<[T; N], RegistryError> {
    let a = array(v, ptr)?;
    if a.len() != N {
        return Err(invalid(
            ptr,
            format!("expected {N} entries, found {}", a.len()),
        ));
    }
    let mut out = Vec::with_capacity(N);
    for (i, x) in a.iter().enumerate() {
        out.push(int::<T>(x, &format!("{ptr}/{i}"))?);
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

fn points<T: Scalar>(v: &Value, ptr: &str) -> Result<Vec<Vec3<T>>, RegistryError> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, p)| vec_n::<T, 3>(p, &format!("{ptr}/{i}")))
        .collect()
}

fn monomials(v: &Value, ptr: &str) -> Result<Vec<Monomial4>, RegistryError> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let p = format!("{ptr}/{i}");
            let e: [i64; 4] = vec_n(m, &p)?;
            let mut out = [0u32; 4];
            for k in 0..4 {
                out[k] = u32::try_from(e[k])
                    .map_err(|_| invalid(&format!("{p}/{k}"), "exponent must be nonnegative"))?;
            }
            Ok(out)
        })
        .collect()
}

fn parse_side<T: Scalar>(v: &Value, ptr: &str) -> Result<Side<T>, RegistryError> {
    let yon = field(v, ptr, "yonemura_no")?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| invalid(&format!("{ptr}/yonemura_no"), "expected a positive integer"))?;
    let wptr = format!("{ptr}/weights");
    let w: [T; 5] = vec_n(field(v, ptr, "weights")?, &wptr)?;
    let [a0, a1, a2, a3, d] = w;
    let a: Vec4<T> = [a0, a1, a2, a3];
    let weight = WeightSystem4::new(a.clone(), d).map_err(|e| invalid(&wptr, e.to_string()))?;

    let bptr = format!("{ptr}/basis");
    let bv = array(field(v, ptr, "basis")?, &bptr)?;
    if bv.len() != 3 {
        return Err(invalid(&bptr, "expected 3 basis vectors"));
    }
    let vecs: Vec<Vec4<T>> = bv
        .iter()
        .enumerate()
        .map(|(i, b)| vec_n::<T, 4>(b, &format!("{bptr}/{i}")))
        .collect::<Result<_, _>>()?;
    let basis = LatticeBasis::new([vecs[0].clone(), vecs[1].clone(), vecs[2].clone()])
        .map_err(|e| invalid(&bptr, e.to_string()))?;
    if !basis.annihilates(&a) {
        return Err(invalid(
            &bptr,
            "basis does not annihilate the weight vector",
        ));
    }
    let (_, index) = basis.weight_and_index();
    if !index.is_one() {
        return Err(invalid(
            &bptr,
            format!("basis has index {index} in the kernel lattice"),
        ));
    }

    let mptr = format!("{ptr}/monomials");
    let ms = monomials(field(v, ptr, "monomials")?, &mptr)?;
    let f =
        WeightedPolynomial::new(weight.clone(), ms).map_err(|e| invalid(&mptr, e.to_string()))?;
    let newton = newton_polytope(&f, &basis).map_err(|e| invalid(&mptr, e.to_string()))?;
    if let Some(nv) = v.get("newton_vertices") {
        let nptr = format!("{ptr}/newton_vertices");
        let listed = LatticePolytope::hull(&points::<T>(nv, &nptr)?)
            .map_err(|e| invalid(&nptr, e.to_string()))?;
        if listed != newton {
            return Err(invalid(
                &nptr,
                "vertex list disagrees with the Newton polytope of the monomials",
            ));
        }
    }
    let ambient = ambient_polytope(&weight, &basis).map_err(|e| invalid(&wptr, e.to_string()))?;
    if !ambient.contains_polytope(&newton) {
        return Err(invalid(
            &mptr,
            "Newton polytope is not inside the ambient polytope",
        ));
    }
    Ok(Side {
        yonemura_no: yon,
        weight,
        basis,
        f,
        newton,
        ambient,
    })
}

fn parse_case<T: Scalar>(v: &Value, ptr: &str) -> Result<CaseRecord<T>, RegistryError> {
    let case_no = field(v, ptr, "case_no")?
        .as_u64()
        .filter(|n| (1..=CASE_COUNT as u64).contains(n))
        .ok_or_else(|| {
            invalid(
                &format!("{ptr}/case_no"),
                format!("expected an integer in 1..={CASE_COUNT}"),
            )
        })? as u32;
    let side_a = parse_side(field(v, ptr, "side_a")?, &format!("{ptr}/side_a"))?;
    let side_b = parse_side(field(v, ptr, "side_b")?, &format!("{ptr}/side_b"))?;

    let mut named = BTreeMap::new();
    let nptr = format!("{ptr}/named");
    if let Some(obj) = v.get("named") {
        let obj = obj
            .as_object()
            .ok_or_else(|| invalid(&nptr, "expected an object"))?;
        for (k, pv) in obj {
            let p = format!("{nptr}/{k}");
            let verts = points::<T>(pv, &p)?;
            let poly =
                LatticePolytope::from_vertices(&verts).map_err(|e| invalid(&p, e.to_string()))?;
            named.insert(k.clone(), poly);
        }
    }

    let eptr = format!("{ptr}/expected_pairs");
    let mut expected_pairs = Vec::new();
    for (i, pair) in array(field(v, ptr, "expected_pairs")?, &eptr)?
        .iter()
        .enumerate()
    {
        let p = format!("{eptr}/{i}");
        let names = array(pair, &p)?;
        let get = |j: usize| -> Result<String, RegistryError> {
            let n = names
                .get(j)
                .and_then(Value::as_str)
                .ok_or_else(|| invalid(&format!("{p}/{j}"), "expected a polytope name"))?;
            if !named.contains_key(n) {
                return Err(invalid(
                    &format!("{p}/{j}"),
                    format!("unknown polytope `{n}`"),
                ));
            }
            Ok(n.to_string())
        };
        if names.len() != 2 {
            return Err(invalid(&p, "expected a pair of names"));
        }
        let (x, y) = (get(0)?, get(1)?);
        if !side_a.ambient.contains_polytope(&named[&x]) {
            return Err(invalid(
                &format!("{p}/0"),
                format!("`{x}` is not inside the first ambient polytope"),
            ));
        }
        if !side_b.ambient.contains_polytope(&named[&y]) {
            return Err(invalid(
                &format!("{p}/1"),
                format!("`{y}` is not inside the second ambient polytope"),
            ));
        }
        expected_pairs.push((x, y));
    }

    let mut maps = Vec::new();
    if let Some(mv) = v.get("maps") {
        let mptr = format!("{ptr}/maps");
        for (i, m) in array(mv, &mptr)?.iter().enumerate() {
            let p = format!("{mptr}/{i}");
            let rows = array(field(m, &p, "matrix")?, &format!("{p}/matrix"))?;
            if rows.len() != 3 {
                return Err(invalid(&format!("{p}/matrix"), "expected 3 rows"));
            }
            let r: Vec<Vec3<T>> = rows
                .iter()
                .enumerate()
                .map(|(k, row)| vec_n::<T, 3>(row, &format!("{p}/matrix/{k}")))
                .collect::<Result<_, _>>()?;
            let matrix: Mat3<T> = [r[0].clone(), r[1].clone(), r[2].clone()];
            if !is_unimodular(&matrix) {
                return Err(invalid(&format!("{p}/matrix"), "matrix is not unimodular"));
            }
            let mut refs = Vec::new();
            for key in ["source", "target"] {
                let s = field(m, &p, key)?
                    .as_str()
                    .ok_or_else(|| invalid(&format!("{p}/{key}"), "expected a polytope name"))?;
                let r = PolyRef::parse(s);
                if !named.contains_key(&r.name) {
                    return Err(invalid(
                        &format!("{p}/{key}"),
                        format!("unknown polytope `{}`", r.name),
                    ));
                }
                refs.push(r);
            }
            let target = refs.pop().unwrap();
            let source = refs.pop().unwrap();
            maps.push(MapRecord {
                matrix,
                source,
                target,
            });
        }
    }

    let expected_count = field(v, ptr, "expected_count")?.as_u64().ok_or_else(|| {
        invalid(
            &format!("{ptr}/expected_count"),
            "expected a nonnegative integer",
        )
    })? as usize;
    Ok(CaseRecord {
        case_no,
        side_a,
        side_b,
        named,
        expected_pairs,
        maps,
        expected_count,
    })
}

/// Parses and validates a registry document.
pub fn parse_registry<T: Scalar>(text: &str) -> Result<Vec<CaseRecord<T>>, RegistryError> {
    let doc: Value = serde_json::from_str(text)?;
    match doc.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA) => {}
        _ => return Err(invalid("/schema", format!("expected schema {SCHEMA}"))),
    }
    let cases = array(field(&doc, "", "cases")?, "/cases")?;
    let mut out = Vec::with_capacity(cases.len());
    let mut seen = BTreeSet::new();
    for (i, c) in cases.iter().enumerate() {
        let ptr = format!("/cases/{i}");
        let rec = parse_case::<T>(c, &ptr)?;
        if !seen.insert(rec.case_no) {
            return Err(invalid(
                &format!("{ptr}/case_no"),
                format!("duplicate case {}", rec.case_no),
            ));
        }
        out.push(rec);
    }
    out.sort_by_key(|r| r.case_no);
    Ok(out)
}

pub fn load_registry<T: Scalar>(path: &Path) -> Result<Vec<CaseRecord<T>>, RegistryError> {
    parse_registry(&std::fs::read_to_string(path)?)
}

pub fn bundled_registry<T: Scalar>() -> Result<Vec<CaseRecord<T>>, RegistryError> {
    parse_registry(BUNDLED)
}
