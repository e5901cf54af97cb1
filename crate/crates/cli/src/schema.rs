//! JSON input formats and their conversion to validated domain objects.
//!
//! Rationals are written as `[num, den]` pairs inside sparse entries
//! `[k, num, den]`; every table is explicit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use hcyc_core::algebra::{AlgebraViolation, FDAlgebra, Product};
use hcyc_core::cdga::CDGAModel;
use hcyc_core::dd::{MonomialUnitary, Nerve, ProjectiveCocycle};
use hcyc_core::linalg::{frac, Vector};
use hcyc_core::Rational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Sparse coefficient `[k, num, den]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry(pub usize, pub i64, pub i64);

/// `e_i e_j = Σ entries`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRow(pub usize, pub usize, pub Vec<Entry>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Entry>>,
    pub products: Vec<ProductRow>,
}

/// `[label, degree]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graded(pub String, pub usize);

/// `d e_i = Σ entries`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRow(pub usize, pub Vec<Entry>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgaFile {
    /// Generators the basis was built from; informational.
    #[serde(default)]
    pub generators: Vec<Graded>,
    pub basis: Vec<Graded>,
    pub unit: Vec<Entry>,
    pub products: Vec<ProductRow>,
    pub differential: Vec<DifferentialRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveFile {
    pub vertices: usize,
    pub maximal_simplices: Vec<Vec<usize>>,
}

/// `[i, j, perm, exponents]` for the edge `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRow(pub usize, pub usize, pub Vec<usize>, pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleFile {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub n: usize,
    pub edges: Vec<EdgeRow>,
}

fn schema(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.into(),
        msg: msg.into(),
    }
}

fn invalid(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Validation {
        path: path.into(),
        msg: msg.into(),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| schema(&name, e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| schema(&name, e.to_string()))
}

fn rational(path: &str, field: &str, num: i64, den: i64) -> Result<Rational, CliError> {
    if den == 0 {
        return Err(schema(path, format!("{field}: zero denominator")));
    }
    Ok(frac(num, den))
}

fn sparse(path: &str, field: &str, dim: usize, entries: &[Entry]) -> Result<Product, CliError> {
    entries
        .iter()
        .map(|Entry(k, n, d)| {
            if *k >= dim {
                return Err(schema(
                    path,
                    format!("{field}: index {k} out of range 0..{dim}"),
                ));
            }
            Ok((*k, rational(path, field, *n, *d)?))
        })
        .collect()
}

fn dense(dim: usize, p: &Product) -> Vector {
    let mut v = vec![Rational::zero(); dim];
    for (k, c) in p {
        v[*k] += c;
    }
    v
}

fn entries(v: &[(usize, Rational)]) -> Result<Vec<Entry>, CliError> {
    v.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match (c.numer().to_i64(), c.denom().to_i64()) {
            (Some(n), Some(d)) => Ok(Entry(*k, n, d)),
            _ => Err(CliError::Usage(format!(
                "coefficient {c} does not fit the [num, den] encoding"
            ))),
        })
        .collect()
}

fn dense_entries(v: &[Rational]) -> Result<Vec<Entry>, CliError> {
    entries(&v.iter().cloned().enumerate().collect::<Vec<_>>())
}

fn table(path: &str, dim: usize, rows: &[ProductRow]) -> Result<Vec<Vec<Product>>, CliError> {
    let mut t = vec![vec![Product::new(); dim]; dim];
    for (r, ProductRow(i, j, e)) in rows.iter().enumerate() {
        let field = format!("products[{r}]");
        if *i >= dim || *j >= dim {
            return Err(schema(
                path,
                format!("{field}: pair ({i}, {j}) out of range 0..{dim}"),
            ));
        }
        t[*i][*j].extend(sparse(path, &field, dim, e)?);
    }
    Ok(t)
}

fn product_rows(
    dim: usize,
    product: impl Fn(usize, usize) -> Product,
) -> Result<Vec<ProductRow>, CliError> {
    let mut rows = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let p = product(i, j);
            if !p.is_empty() {
                rows.push(ProductRow(i, j, entries(&p)?));
            }
        }
    }
    Ok(rows)
}

fn named_violation(labels: &[String], v: &AlgebraViolation) -> String {
    match v {
        AlgebraViolation::Associativity { triple: (i, j, k) } => format!(
            "associativity fails on basis triple ({i}, {j}, {k}) = ({}, {}, {})",
            labels[*i], labels[*j], labels[*k]
        ),
        other => other.to_string(),
    }
}

pub fn algebra_from_file(path: &str, f: &AlgebraFile) -> Result<FDAlgebra, CliError> {
    let d = f.labels.len();
    if d == 0 {
        return Err(schema(path, "labels: empty basis"));
    }
    let products = table(path, d, &f.products)?;
    let unit = f
        .unit
        .as_ref()
        .map(|u| sparse(path, "unit", d, u).map(|p| dense(d, &p)))
        .transpose()?;
    let a = FDAlgebra::new(f.labels.clone(), products, unit)
        .map_err(|e| invalid(path, e.to_string()))?;
    a.validate()
        .map_err(|v| invalid(path, named_violation(a.labels(), &v)))?;
    Ok(a)
}

pub fn algebra_to_file(a: &FDAlgebra) -> Result<AlgebraFile, CliError> {
    Ok(AlgebraFile {
        labels: a.labels().to_vec(),
        unit: a.unit().map(|u| dense_entries(u)).transpose()?,
        products: product_rows(a.dim(), |i, j| a.product(i, j).clone())?,
    })
}

pub fn load_algebra(path: &Path) -> Result<FDAlgebra, CliError> {
    algebra_from_file(&path.display().to_string(), &read_json(path)?)
}

pub fn cdga_from_file(path: &str, f: &CdgaFile) -> Result<CDGAModel, CliError> {
    let d = f.basis.len();
    if d == 0 {
        return Err(schema(path, "basis: empty"));
    }
    let labels = f.basis.iter().map(|g| g.0.clone()).collect();
    let degrees = f.basis.iter().map(|g| g.1).collect();
    let products = table(path, d, &f.products)?;
    let unit = dense(d, &sparse(path, "unit", d, &f.unit)?);
    let mut diff = vec![Product::new(); d];
    for (r, DifferentialRow(i, e)) in f.differential.iter().enumerate() {
        let field = format!("differential[{r}]");
        if *i >= d {
            return Err(schema(
                path,
                format!("{field}: basis index {i} out of range 0..{d}"),
            ));
        }
        diff[*i].extend(sparse(path, &field, d, e)?);
    }
    let m = CDGAModel::new(labels, degrees, products, unit, diff)
        .map_err(|e| invalid(path, e.to_string()))?;
    m.validate().map_err(|v| invalid(path, v.to_string()))?;
    Ok(m)
}

pub fn cdga_to_file(m: &CDGAModel, generators: &[(&str, usize)]) -> Result<CdgaFile, CliError> {
    Ok(CdgaFile {
        generators: generators
            .iter()
            .map(|(l, k)| Graded(l.to_string(), *k))
            .collect(),
        basis: m
            .labels()
            .iter()
            .zip(m.degrees())
            .map(|(l, k)| Graded(l.clone(), *k))
            .collect(),
        unit: dense_entries(&m.unit())?,
        products: product_rows(m.dim(), |i, j| m.algebra().product(i, j).clone())?,
        differential: (0..m.dim())
            .filter(|&i| !m.d_basis(i).is_empty())
            .map(|i| Ok(DifferentialRow(i, entries(m.d_basis(i))?)))
            .collect::<Result<_, CliError>>()?,
    })
}

pub fn load_cdga(path: &Path) -> Result<CDGAModel, CliError> {
    cdga_from_file(&path.display().to_string(), &read_json(path)?)
}

pub fn nerve_from_file(path: &str, f: &NerveFile) -> Result<Nerve, CliError> {
    Nerve::new(f.vertices, &f.maximal_simplices)
        .map_err(|e| schema(path, format!("maximal_simplices: {e}")))
}

pub fn nerve_to_file(n: &Nerve) -> NerveFile {
    NerveFile {
        vertices: n.vertex_count(),
        maximal_simplices: n.maximal_simplices().to_vec(),
    }
}

pub fn load_nerve(path: &Path) -> Result<Nerve, CliError> {
    nerve_from_file(&path.display().to_string(), &read_json(path)?)
}

pub fn cocycle_from_file(
    path: &str,
    nerve: &Nerve,
    f: &CocycleFile,
) -> Result<ProjectiveCocycle, CliError> {
    if f.modulus < 2 || f.n == 0 {
        return Err(schema(path, "N must be at least 2 and n at least 1"));
    }
    let mut edges = BTreeMap::new();
    for (r, EdgeRow(i, j, perm, exps)) in f.edges.iter().enumerate() {
        let field = format!("edges[{r}]");
        if i >= j {
            return Err(schema(
                path,
                format!("{field}: edge ({i}, {j}) must have i < j"),
            ));
        }
        if perm.len() != f.n || exps.len() != f.n {
            return Err(schema(
                path,
                format!("{field}: perm and exponents must have length n = {}", f.n),
            ));
        }
        let g = MonomialUnitary::new(f.modulus, perm.clone(), exps.clone())
            .map_err(|e| schema(path, format!("{field}: {e}")))?;
        if edges.insert((*i, *j), g).is_some() {
            return Err(schema(
                path,
                format!("{field}: edge ({i}, {j}) given twice"),
            ));
        }
    }
    ProjectiveCocycle::new(nerve.clone(), f.modulus, f.n, edges)
        .map_err(|e| invalid(path, e.to_string()))
}

pub fn cocycle_to_file(g: &ProjectiveCocycle) -> CocycleFile {
    CocycleFile {
        modulus: g.modulus,
        n: g.size,
        edges: g
            .edges
            .iter()
            .map(|((i, j), u)| EdgeRow(*i, *j, u.perm.clone(), u.exps.clone()))
            .collect(),
    }
}

pub fn load_cocycle(path: &Path, nerve: &Nerve) -> Result<ProjectiveCocycle, CliError> {
    cocycle_from_file(&path.display().to_string(), nerve, &read_json(path)?)
}

/// Parses a linear combination of basis labels such as `x3`, `2*b3`,
/// `e1e2e3 - 1/2*f` or `0`.
pub fn parse_element(m: &CDGAModel, expr: &str) -> Result<Vector, CliError> {
    let bad = |msg: String| CliError::Usage(format!("element '{expr}': {msg}"));
    let mut v = m.zero_vector();
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "0" {
        return Ok(v);
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !s[..i].ends_with(['*', '/']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (coef, label) = match t.split_once('*') {
            Some((c, l)) => {
                let (n, d) = match c.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (c, "1"),
                };
                let n: i64 = n
                    .parse()
                    .map_err(|_| bad(format!("bad coefficient '{c}'")))?;
                let d: i64 = d
                    .parse()
                    .map_err(|_| bad(format!("bad coefficient '{c}'")))?;
                if d == 0 {
                    return Err(bad("zero denominator".into()));
                }
                (frac(n, d), l)
            }
            None => (frac(1, 1), t),
        };
        let basis = m
            .element_by_label(label)
            .ok_or_else(|| bad(format!("unknown label '{label}'")))?;
        for (x, b) in v.iter_mut().zip(basis) {
            if neg {
                *x -= &coef * b;
            } else {
                *x += &coef * b;
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hcyc_core::algebra::fixtures::{dual_numbers, matrices};
    use hcyc_core::cdga::fixtures::{s2_times_s3, torus3_transgression};
    use hcyc_core::dd::fixtures::heisenberg_boundary;

    #[test]
    fn algebra_round_trip() {
        for a in [matrices(2), dual_numbers()] {
            let f = algebra_to_file(&a).unwrap();
            let text = serde_json::to_string(&f).unwrap();
            let back = algebra_from_file("mem", &serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(algebra_to_file(&back).unwrap(), f);
        }
    }

    #[test]
    fn associativity_failure_is_named() {
        let f = AlgebraFile {
            labels: vec!["a".into(), "b".into()],
            unit: None,
            products: vec![
                ProductRow(0, 0, vec![Entry(1, 1, 1)]),
                ProductRow(1, 0, vec![Entry(0, 1, 1)]),
            ],
        };
        let err = algebra_from_file("bad.json", &f).unwrap_err().to_string();
        assert_eq!(
            err,
            "bad.json: associativity fails on basis triple (0, 0, 0) = (a, a, a)"
        );
    }

    #[test]
    fn cdga_and_cocycle_round_trip() {
        let m = s2_times_s3();
        let f = cdga_to_file(&m, &[("a2", 2), ("b3", 3)]).unwrap();
        assert_eq!(cdga_from_file("mem", &f).unwrap(), m);
        let g = heisenberg_boundary(3);
        let nf = nerve_to_file(&g.nerve);
        let nerve = nerve_from_file("mem", &nf).unwrap();
        assert_eq!(
            cocycle_from_file("mem", &nerve, &cocycle_to_file(&g)).unwrap(),
            g
        );
    }

    #[test]
    fn elements_parse() {
        let m = torus3_transgression();
        let v = parse_element(&m, "e1e2e3 - 1/2*f").unwrap();
        let mut expect = m.element_by_label("e1e2e3").unwrap();
        for (x, f) in expect.iter_mut().zip(m.element_by_label("f").unwrap()) {
            *x -= frac(1, 2) * f;
        }
        assert_eq!(v, expect);
        assert_eq!(parse_element(&m, "0").unwrap(), m.zero_vector());
        assert!(parse_element(&m, "2*nope").is_err());
        assert_eq!(
            parse_element(&m, "-1*f").unwrap(),
            parse_element(&m, "-f").unwrap()
        );
    }
}
