//! Brute-force module computations by linear algebra over ℚ.
//!
//! Nothing here touches Gröbner bases. For homogeneous generators the
//! degree-`d` part of a submodule is spanned by monomial multiples, so
//! dimensions, intersections and membership in a fixed degree are plain
//! rank computations. This is the independent side of the engine's tests.

pub mod division;

use std::collections::BTreeMap;

use germlift::groebner::ModuleElement;
use germlift::poly::{Monomial, Rational};
use num_traits::Zero;

/// Exponent vectors of total degree `d` in `n` variables, in lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Standard degree of a homogeneous element, `None` if zero or mixed.
pub fn homogeneous_degree(g: &ModuleElement) -> Option<u32> {
    let mut deg = None;
    for p in g.entries() {
        for (m, _) in p.terms() {
            let d = m.degree() as u32;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
    }
    deg
}

/// Coordinates `(component, exponents)` of degree-`d` elements of a free
/// module of rank `rank` in `n` variables.
#[derive(Clone, Debug)]
pub struct Basis {
    index: BTreeMap<(usize, Vec<u32>), usize>,
}

impl Basis {
    pub fn new(n: usize, rank: usize, d: u32) -> Self {
        let mut index = BTreeMap::new();
        for c in 0..rank {
            for m in monomials_of_degree(n, d) {
                let len = index.len();
                index.insert((c, m), len);
            }
        }
        Basis { index }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Coordinates of `v`, which must be homogeneous of this degree.
    pub fn coordinates(&self, v: &ModuleElement) -> Option<Vec<Rational>> {
        let mut row = vec![Rational::zero(); self.len()];
        for (c, p) in v.entries().iter().enumerate() {
            for (m, a) in p.terms() {
                let i = *self.index.get(&(c, m.exps().to_vec()))?;
                row[i] = a.clone();
            }
        }
        Some(row)
    }
}

/// Rows spanning the degree-`d` part of the module generated by the
/// homogeneous `gens`.
pub fn degree_part(gens: &[ModuleElement], n: usize, rank: usize, d: u32) -> Vec<Vec<Rational>> {
    let basis = Basis::new(n, rank, d);
    let mut rows = Vec::new();
    for g in gens {
        let Some(e) = homogeneous_degree(g) else { continue };
        if e > d {
            continue;
        }
        for m in monomials_of_degree(n, d - e) {
            let mon = Monomial::from_exps(&m);
            let shifted = g.map(|p| p.mul_term(&mon, &Rational::from_integer(1.into())));
            rows.push(basis.coordinates(&shifted).expect("degree matches"));
        }
    }
    rows
}

/// Row echelon form in place; returns the rank.
pub fn echelon(rows: &mut Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    echelon(&mut rows.to_vec())
}

/// Whether `v` lies in the row span.
pub fn in_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let r = rank(rows);
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with) == r
}

/// `dim (A ∩ B)_d = dim A_d + dim B_d − dim (A + B)_d`.
pub fn intersection_dimension(a: &[ModuleElement], b: &[ModuleElement], n: usize, rank_: usize, d: u32) -> usize {
    let ra = degree_part(a, n, rank_, d);
    let rb = degree_part(b, n, rank_, d);
    let mut both = ra.clone();
    both.extend(rb.iter().cloned());
    rank(&ra) + rank(&rb) - rank(&both)
}

/// `dim M_d` for the module generated by the homogeneous `gens`.
pub fn dimension(gens: &[ModuleElement], n: usize, rank_: usize, d: u32) -> usize {
    rank(&degree_part(gens, n, rank_, d))
}

/// Whether the homogeneous `v` lies in the module generated by `gens`.
pub fn member(gens: &[ModuleElement], v: &ModuleElement) -> bool {
    if v.is_zero() {
        return true;
    }
    let Some(d) = homogeneous_degree(v) else { return false };
    let n = v.vars().len();
    let basis = Basis::new(n, v.rank(), d);
    let rows = degree_part(gens, n, v.rank(), d);
    in_span(&rows, &basis.coordinates(v).expect("homogeneous"))
}
