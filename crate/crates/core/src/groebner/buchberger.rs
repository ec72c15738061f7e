//! Buchberger's algorithm for submodules of free modules over `Q[x]`.
//!
//! Pairs are selected by the normal strategy (smallest lcm first, ties broken
//! by generator index) and pruned with the Gebauer–Möller criteria. The
//! product criterion is only applied for ideals; it does not hold for module
//! elements.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};

use super::{GbStats, Limits, ModuleElement, ModuleOrder};
use crate::error::{Error, Result};
use crate::poly::{Monomial, OrderKey, Polynomial, Rational, VarSet};

#[derive(Clone, Debug)]
pub(crate) struct Term {
    key: OrderKey,
    mon: Monomial,
    comp: usize,
    coeff: Rational,
}

/// A module element with its terms sorted strictly decreasing.
#[derive(Clone, Debug, Default)]
pub(crate) struct Vector {
    terms: Vec<Term>,
}

fn mask(m: &Monomial) -> u64 {
    m.exps()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &e)| if e > 0 { acc | 1 << (i % 64) } else { acc })
}

fn add_keys(a: &OrderKey, b: &OrderKey) -> OrderKey {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl Vector {
    pub(crate) fn from_element(e: &ModuleElement, order: &ModuleOrder) -> Vector {
        let mut terms: Vec<Term> = e
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(comp, p)| {
                p.terms().iter().map(move |(m, c)| Term {
                    key: order.key(m.exps(), comp),
                    mon: m.clone(),
                    comp,
                    coeff: c.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        Vector { terms }
    }

    pub(crate) fn to_element(&self, vars: &Arc<VarSet>, rank: usize) -> ModuleElement {
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp].push((t.mon.clone(), t.coeff.clone()));
        }
        let entries = buckets
            .into_iter()
            .map(|b| Polynomial::from_terms(vars, b))
            .collect();
        ModuleElement::new(vars, entries).expect("consistent ambient")
    }

    fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn monic(mut self) -> Vector {
        if let Some(t) = self.terms.first() {
            if !t.coeff.is_one() {
                let inv = t.coeff.recip();
                for t in &mut self.terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
        self
    }

    pub(crate) fn lead_key(&self) -> Option<&OrderKey> {
        self.terms.first().map(|t| &t.key)
    }
}

/// Working polynomial during reduction, keyed by order key.
struct Accumulator {
    map: BTreeMap<OrderKey, (Monomial, usize, Rational)>,
}

impl Accumulator {
    fn from_vector(v: &Vector) -> Self {
        Accumulator {
            map: v
                .terms
                .iter()
                .map(|t| (t.key.clone(), (t.mon.clone(), t.comp, t.coeff.clone())))
                .collect(),
        }
    }

    fn empty() -> Self {
        Accumulator {
            map: BTreeMap::new(),
        }
    }

    /// `self -= c * u * v`, skipping the first `skip` terms of `v`.
    fn sub_scaled(&mut self, v: &Vector, skip: usize, u: &Monomial, delta: &OrderKey, c: &Rational) {
        for t in &v.terms[skip..] {
            let key = add_keys(&t.key, delta);
            let prod = c * &t.coeff;
            match self.map.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let slot = &mut o.get_mut().2;
                    *slot -= prod;
                    if slot.is_zero() {
                        o.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(vac) => {
                    vac.insert((t.mon.mul(u), t.comp, -prod));
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    key: OrderKey,
    i: usize,
    j: usize,
    lcm: Monomial,
    comp: usize,
}

/// Shared reduction machinery over a list of basis vectors.
pub(crate) struct Reducer<'a> {
    order: &'a ModuleOrder,
    zero_key: OrderKey,
    pub(crate) elems: Vec<Vector>,
    leads: Vec<(usize, Monomial, u64)>,
    active: Vec<usize>,
    limits: &'a Limits,
    pub(crate) stats: GbStats,
    started: Instant,
}

pub(crate) enum Halt {
    Limit(String),
}

/// Why a run stopped, with the basis and counters so far.
pub(crate) type Halted = (Halt, Vec<Vector>, GbStats);

impl<'a> Reducer<'a> {
    pub(crate) fn new(order: &'a ModuleOrder, nvars: usize, limits: &'a Limits) -> Self {
        Reducer {
            order,
            zero_key: order.key(&vec![0; nvars], 0),
            elems: Vec::new(),
            leads: Vec::new(),
            active: Vec::new(),
            limits,
            stats: GbStats::default(),
            started: Instant::now(),
        }
    }

    pub(crate) fn with_basis(order: &'a ModuleOrder, nvars: usize, limits: &'a Limits, basis: &[Vector]) -> Self {
        let mut r = Self::new(order, nvars, limits);
        for v in basis {
            r.push(v.clone());
        }
        r.active = (0..r.elems.len()).collect();
        r
    }

    fn push(&mut self, v: Vector) -> usize {
        let lt = v.lead().expect("nonzero basis element");
        self.leads.push((lt.comp, lt.mon.clone(), mask(&lt.mon)));
        self.elems.push(v);
        self.elems.len() - 1
    }

    fn delta(&self, u: &Monomial) -> OrderKey {
        let k = self.order.key(u.exps(), 0);
        k.iter().zip(&self.zero_key).map(|(a, b)| a - b).collect()
    }

    fn find_divisor(&self, mon: &Monomial, comp: usize) -> Option<usize> {
        let m = mask(mon);
        self.active.iter().copied().find(|&g| {
            let (c, lm, lmask) = &self.leads[g];
            *c == comp && lmask & !m == 0 && lm.divides(mon)
        })
    }

    pub(crate) fn check_limits(&self) -> std::result::Result<(), Halt> {
        if let Some(d) = self.limits.deadline {
            if Instant::now() >= d {
                return Err(Halt::Limit(format!(
                    "deadline reached after {:.1} s",
                    self.started.elapsed().as_secs_f64()
                )));
            }
        }
        if self.stats.reductions > self.limits.max_reductions {
            return Err(Halt::Limit(format!(
                "more than {} reduction steps",
                self.limits.max_reductions
            )));
        }
        if self.elems.len() > self.limits.max_basis_size {
            return Err(Halt::Limit(format!(
                "basis grew beyond {} elements",
                self.limits.max_basis_size
            )));
        }
        Ok(())
    }

    fn reduce_acc(&mut self, mut acc: Accumulator) -> std::result::Result<Vector, Halt> {
        let mut rem = Vec::new();
        let mut steps = 0u32;
        while let Some((key, (mon, comp, c))) = acc.map.pop_last() {
            match self.find_divisor(&mon, comp) {
                Some(g) => {
                    let u = self.leads[g].1.quotient_of(&mon).expect("divisor");
                    let delta = self.delta(&u);
                    // basis elements are monic
                    acc.sub_scaled(&self.elems[g], 1, &u, &delta, &c);
                    self.stats.reductions += 1;
                    steps += 1;
                    if steps.is_multiple_of(256) {
                        self.check_limits()?;
                    }
                }
                None => rem.push(Term {
                    key,
                    mon,
                    comp,
                    coeff: c,
                }),
            }
        }
        Ok(Vector { terms: rem })
    }

    pub(crate) fn reduce(&mut self, v: &Vector) -> std::result::Result<Vector, Halt> {
        self.reduce_acc(Accumulator::from_vector(v))
    }

    fn s_vector(&self, p: &Pair) -> Accumulator {
        let mut acc = Accumulator::empty();
        for (idx, sign) in [(p.i, Rational::one()), (p.j, -Rational::one())] {
            let u = self.leads[idx].1.quotient_of(&p.lcm).expect("lcm");
            let delta = self.delta(&u);
            acc.sub_scaled(&self.elems[idx], 1, &u, &delta, &(-sign));
        }
        acc
    }
}

pub(crate) struct Buchberger<'a> {
    red: Reducer<'a>,
    ideal: bool,
    pairs: BTreeSet<Pair>,
}

impl<'a> Buchberger<'a> {
    pub(crate) fn new(order: &'a ModuleOrder, nvars: usize, limits: &'a Limits) -> Self {
        Buchberger {
            red: Reducer::new(order, nvars, limits),
            ideal: order.rank() == 1,
            pairs: BTreeSet::new(),
        }
    }

    fn make_pair(&self, i: usize, j: usize) -> Option<Pair> {
        let (ci, mi, _) = &self.red.leads[i];
        let (cj, mj, _) = &self.red.leads[j];
        if ci != cj {
            return None;
        }
        let lcm = mi.lcm(mj);
        Some(Pair {
            key: self.red.order.key(lcm.exps(), *ci),
            i: i.min(j),
            j: i.max(j),
            lcm,
            comp: *ci,
        })
    }

    fn coprime(&self, p: &Pair) -> bool {
        self.ideal && self.red.leads[p.i].1.is_coprime(&self.red.leads[p.j].1)
    }

    /// Gebauer–Möller update for a new basis element.
    fn insert(&mut self, v: Vector) {
        let h = self.red.push(v);
        let (hc, hm, _) = self.red.leads[h].clone();

        let mut c: Vec<Pair> = self
            .red
            .active
            .iter()
            .filter_map(|&g| self.make_pair(g, h))
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while !c.is_empty() {
            let p = c.remove(0);
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if self.coprime(&p) || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !self.coprime(p)).collect();

        let leads = &self.red.leads;
        self.pairs.retain(|p| {
            if p.comp != hc || !hm.divides(&p.lcm) {
                return true;
            }
            let li = leads[p.i].1.lcm(&hm);
            let lj = leads[p.j].1.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(e);

        self.red.active.retain(|&g| {
            let (gc, gm, _) = &leads[g];
            !(*gc == hc && hm.divides(gm))
        });
        self.red.active.push(h);
    }

    pub(crate) fn run(mut self, input: Vec<Vector>) -> std::result::Result<(Vec<Vector>, GbStats), Halted> {
        macro_rules! halt {
            ($e:expr) => {
                match $e {
                    Ok(v) => v,
                    Err(h) => {
                        let partial = self.red.active.iter().map(|&i| self.red.elems[i].clone()).collect();
                        return Err((h, partial, self.red.stats));
                    }
                }
            };
        }
        halt!(self.red.check_limits());
        let mut input: Vec<Vector> = input.into_iter().filter(|v| !v.is_zero()).collect();
        input.sort_by(|a, b| a.lead_key().cmp(&b.lead_key()));
        for v in input {
            let r = halt!(self.red.reduce(&v));
            if !r.is_zero() {
                self.insert(r.monic());
            }
        }
        while let Some(p) = self.pairs.pop_first() {
            halt!(self.red.check_limits());
            self.red.stats.s_pairs += 1;
            let s = self.red.s_vector(&p);
            let r = halt!(self.red.reduce_acc(s));
            if r.is_zero() {
                self.red.stats.zero_reductions += 1;
            } else {
                self.insert(r.monic());
            }
        }
        // interreduce the minimal basis
        let active = self.red.active.clone();
        let mut out = Vec::with_capacity(active.len());
        for &g in &active {
            let v = self.red.elems[g].clone();
            let lead = v.terms[0].clone();
            let tail = Vector {
                terms: v.terms[1..].to_vec(),
            };
            let mut r = halt!(self.red.reduce(&tail));
            r.terms.insert(0, lead);
            out.push(r);
        }
        out.sort_by(|a, b| a.lead_key().cmp(&b.lead_key()));
        self.red.stats.basis_size = out.len();
        Ok((out, self.red.stats))
    }
}

/// A reduced Gröbner basis together with the order it was computed in.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    vars: Arc<VarSet>,
    rank: usize,
    order: ModuleOrder,
    elems: Vec<Vector>,
    stats: GbStats,
}

impl GroebnerBasis {
    pub(crate) fn compute(
        vars: &Arc<VarSet>,
        rank: usize,
        generators: &[ModuleElement],
        order: &ModuleOrder,
        limits: &Limits,
    ) -> Result<GroebnerBasis> {
        assert_eq!(order.rank(), rank, "module order rank");
        let input = generators
            .iter()
            .map(|g| Vector::from_element(g, order))
            .collect();
        match Buchberger::new(order, vars.len(), limits).run(input) {
            Ok((elems, stats)) => Ok(GroebnerBasis {
                vars: vars.clone(),
                rank,
                order: order.clone(),
                elems,
                stats,
            }),
            Err((Halt::Limit(reason), partial, stats)) => Err(Error::Timeout {
                reason,
                partial: partial.iter().map(|v| v.to_element(vars, rank)).collect(),
                stats,
            }),
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn stats(&self) -> GbStats {
        self.stats
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> Vec<ModuleElement> {
        self.elems
            .iter()
            .map(|v| v.to_element(&self.vars, self.rank))
            .collect()
    }

    /// Leading (component, monomial) of every element.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems
            .iter()
            .map(|v| {
                let t = v.lead().expect("nonzero");
                (t.comp, t.mon.clone())
            })
            .collect()
    }

    /// Fully reduced remainder of `v`. Zero iff `v` lies in the module.
    pub fn normal_form(&self, v: &ModuleElement) -> Result<ModuleElement> {
        if v.rank() != self.rank {
            return Err(Error::Rank {
                expected: self.rank,
                found: v.rank(),
            });
        }
        if v.vars() != &self.vars {
            return Err(Error::ambient(format!("({}) vs ({})", v.vars(), self.vars)));
        }
        let limits = Limits::unbounded();
        let mut red = Reducer::with_basis(&self.order, self.vars.len(), &limits, &self.elems);
        let vec = Vector::from_element(v, &self.order);
        match red.reduce(&vec) {
            Ok(r) => Ok(r.to_element(&self.vars, self.rank)),
            Err(Halt::Limit(_)) => unreachable!("unbounded limits"),
        }
    }

    /// Checks the defining property directly: every S-vector of two elements
    /// with leading terms in the same component reduces to zero.
    pub fn s_vectors_reduce_to_zero(&self) -> bool {
        check_s_vectors(&self.elems, &self.order, self.vars.len())
    }
}

pub(crate) fn check_s_vectors(elems: &[Vector], order: &ModuleOrder, nvars: usize) -> bool {
    let limits = Limits::unbounded();
    let elems: Vec<Vector> = elems.iter().cloned().map(Vector::monic).collect();
    let mut red = Reducer::with_basis(order, nvars, &limits, &elems);
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (ci, mi, _) = &red.leads[i];
            let (cj, mj, _) = &red.leads[j];
            if ci != cj {
                continue;
            }
            let lcm = mi.lcm(mj);
            let p = Pair {
                key: order.key(lcm.exps(), *ci),
                i,
                j,
                lcm,
                comp: *ci,
            };
            let s = red.s_vector(&p);
            match red.reduce_acc(s) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

/// Verifies that `elements` form a Gröbner basis under `order`.
pub fn is_groebner_basis(elements: &[ModuleElement], order: &ModuleOrder) -> bool {
    let Some(first) = elements.first() else {
        return true;
    };
    let vecs: Vec<Vector> = elements
        .iter()
        .map(|e| Vector::from_element(e, order))
        .filter(|v| !v.is_zero())
        .collect();
    check_s_vectors(&vecs, order, first.vars().len())
}
