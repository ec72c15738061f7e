#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use germlift::germ::VectorField;
use germlift::groebner::{ModuleElement, Submodule};
use germlift::io::Manifest;
use germlift::poly::{int, Monomial, Polynomial, Rational, VarSet};
use germlift_oracle::{in_span, monomials_of_degree};
use proptest::prelude::*;

pub fn ring(names: &[&str]) -> Arc<VarSet> {
    VarSet::new(names.iter().copied()).unwrap()
}

pub fn wring(names: &[&str], weights: &[u32]) -> Arc<VarSet> {
    VarSet::with_weights(names.iter().copied(), weights.to_vec()).unwrap()
}

pub fn p(s: &str, r: &Arc<VarSet>) -> Polynomial {
    Polynomial::parse(s, r).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn elem(r: &Arc<VarSet>, entries: &[&str]) -> ModuleElement {
    ModuleElement::new(r, entries.iter().map(|s| p(s, r)).collect()).unwrap()
}

pub fn field(r: &Arc<VarSet>, entries: &[&str]) -> VectorField {
    VectorField::new(r, entries.iter().map(|s| p(s, r)).collect()).unwrap()
}

pub fn module(r: &Arc<VarSet>, rank: usize, gens: &[&[&str]]) -> Submodule {
    Submodule::new(r, rank, gens.iter().map(|g| elem(r, g)).collect()).unwrap()
}

pub fn fixture(name: &str) -> Manifest {
    germlift::fixtures::load(name).unwrap()
}

pub fn fields(m: &Manifest, name: &str) -> Vec<VectorField> {
    m.field_list(name)
        .unwrap_or_else(|| panic!("no field list {name}"))
        .module()
        .generators()
        .iter()
        .map(|g| VectorField::from_element(g.clone()).unwrap())
        .collect()
}

/// Terms as `(exponents, integer coefficient)` pairs.
pub type Terms = Vec<(Vec<u32>, i64)>;

pub fn from_terms(r: &Arc<VarSet>, terms: &Terms) -> Polynomial {
    Polynomial::from_terms(r, terms.iter().map(|(e, c)| (Monomial::from_exps(e), int(*c))))
}

/// Up to `max_terms` terms of total degree at most `max_deg`.
pub fn terms(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), -5i64..=5).prop_filter_map("degree bound", move |(e, c)| {
            (e.iter().sum::<u32>() <= max_deg).then_some((e, c))
        }),
        0..=max_terms,
    )
}

/// Terms without a constant, so the polynomial vanishes at the origin.
pub fn germ_terms(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    terms(n, max_deg, max_terms).prop_map(|t| t.into_iter().filter(|(e, _)| e.iter().any(|&x| x > 0)).collect())
}

/// Homogeneous of standard degree `d` in two variables.
pub fn binary_form(d: u32) -> impl Strategy<Value = Terms> {
    prop::collection::vec(-3i64..=3, (d + 1) as usize)
        .prop_map(move |cs| cs.into_iter().enumerate().map(|(i, c)| (vec![i as u32, d - i as u32], c)).collect())
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect())
}

/// Whether `v` is a combination `Σ c_j g_j` with every `c_j` of degree at
/// most `d`, decided by linear algebra on coefficient vectors. A `false`
/// answer rules out polynomial witnesses up to that degree.
pub fn bounded_member(gens: &[ModuleElement], v: &ModuleElement, d: u32) -> bool {
    let n = v.vars().len();
    let mut index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    let mut sparse = Vec::new();
    let coords = |e: &ModuleElement, index: &mut BTreeMap<_, _>| {
        let mut out = Vec::new();
        for (i, entry) in e.entries().iter().enumerate() {
            for (m, c) in entry.terms() {
                let len = index.len();
                let at = *index.entry((i, m.exps().to_vec())).or_insert(len);
                out.push((at, c.clone()));
            }
        }
        out
    };
    for g in gens {
        for deg in 0..=d {
            for exps in monomials_of_degree(n, deg) {
                let mono = Polynomial::monomial(v.vars(), Monomial::from_exps(&exps), int(1));
                sparse.push(coords(&g.mul_poly(&mono).unwrap(), &mut index));
            }
        }
    }
    let target = coords(v, &mut index);
    let dense = |s: &[(usize, Rational)]| {
        let mut row = vec![int(0); index.len()];
        for (i, c) in s {
            row[*i] = c.clone();
        }
        row
    };
    let rows: Vec<_> = sparse.iter().map(|s| dense(s)).collect();
    in_span(&rows, &dense(&target))
}

/// `g'(0)` from the values `g(0), …, g(D)` of a polynomial of degree at most
/// `D`, by Newton forward differences: `g'(0) = Σ_{j≥1} (−1)^{j+1} Δ^j g(0) / j`.
pub fn derivative_from_values(values: &[Rational]) -> Rational {
    let mut diffs = values.to_vec();
    let mut acc = int(0);
    for j in 1..values.len() {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        let term = &diffs[0] / int(j as i64);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
