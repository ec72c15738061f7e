use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use super::{GbStats, GroebnerBasis, Limits, ModuleElement, ModuleOrder, Submodule};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Polynomial, VarSet};

/// Which monomial order to use on a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OrderChoice {
    /// Weighted graded reverse lex when the ring declares weights, graded
    /// reverse lex otherwise.
    #[default]
    Auto,
    GrevLex,
    Lex,
    Weighted,
}

impl OrderChoice {
    pub fn resolve(self, vars: &VarSet) -> Result<MonomialOrder> {
        Ok(match self {
            OrderChoice::Auto => vars.order().clone(),
            OrderChoice::GrevLex => MonomialOrder::GrevLex,
            OrderChoice::Lex => MonomialOrder::Lex,
            OrderChoice::Weighted => match vars.weights() {
                Some(w) => MonomialOrder::WeightedGrevLex(w.to_vec()),
                None => {
                    return Err(Error::Structure(format!(
                        "weighted order requested on unweighted ring ({vars})"
                    )))
                }
            },
        })
    }
}

impl FromStr for OrderChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(OrderChoice::Auto),
            "grevlex" => Ok(OrderChoice::GrevLex),
            "lex" => Ok(OrderChoice::Lex),
            "weighted" => Ok(OrderChoice::Weighted),
            _ => Err(format!("unknown order `{s}` (expected grevlex, lex or weighted)")),
        }
    }
}

impl fmt::Display for OrderChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderChoice::Auto => "auto",
            OrderChoice::GrevLex => "grevlex",
            OrderChoice::Lex => "lex",
            OrderChoice::Weighted => "weighted",
        })
    }
}

/// Outcome of [`Engine::express`].
#[derive(Clone, Debug)]
pub enum Membership {
    /// Coefficients `c` with `Σ c_i · gen_i = v`, already re-expanded.
    Member(Vec<Polynomial>),
    /// The nonzero normal form of `v`.
    NotMember(ModuleElement),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Gröbner basis front end: an order choice, resource limits and counters.
#[derive(Clone, Debug)]
pub struct Engine {
    choice: OrderChoice,
    limits: Limits,
    stats: Arc<Mutex<GbStats>>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(OrderChoice::Auto, Limits::default())
    }
}

impl Engine {
    pub fn new(choice: OrderChoice, limits: Limits) -> Self {
        Engine {
            choice,
            limits,
            stats: Arc::default(),
        }
    }

    pub fn with_timeout(self, budget: Duration) -> Self {
        let limits = self.limits.clone().with_timeout(budget);
        Engine { limits, ..self }
    }

    pub fn choice(&self) -> OrderChoice {
        self.choice
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// Counters summed over every basis computed by this engine (and its clones).
    pub fn stats(&self) -> GbStats {
        *self.stats.lock().unwrap()
    }

    pub fn monomial_order(&self, vars: &VarSet) -> Result<MonomialOrder> {
        self.choice.resolve(vars)
    }

    pub fn module_order(&self, vars: &VarSet, rank: usize) -> Result<ModuleOrder> {
        Ok(ModuleOrder::term_over_position(self.monomial_order(vars)?, rank))
    }

    /// A fresh reduced Gröbner basis under an explicit order.
    pub fn groebner_basis_in(&self, m: &Submodule, order: &ModuleOrder) -> Result<GroebnerBasis> {
        let res = GroebnerBasis::compute(m.vars(), m.rank(), m.generators(), order, &self.limits);
        match &res {
            Ok(gb) => self.stats.lock().unwrap().absorb(&gb.stats()),
            Err(Error::Timeout { stats, .. }) => self.stats.lock().unwrap().absorb(stats),
            Err(_) => {}
        }
        res
    }

    /// The reduced Gröbner basis under the engine's term-over-position order,
    /// computed once per submodule and order.
    pub fn groebner_basis(&self, m: &Submodule) -> Result<Arc<GroebnerBasis>> {
        let order = self.module_order(m.vars(), m.rank())?;
        if let Some(gb) = &m.cache.lock().unwrap().plain {
            if gb.order() == &order {
                return Ok(gb.clone());
            }
        }
        let gb = Arc::new(self.groebner_basis_in(m, &order)?);
        m.cache.lock().unwrap().plain = Some(gb.clone());
        Ok(gb)
    }

    /// Gröbner basis of `{(g_i, e_i)}` in rank `p + m`, with the first `p`
    /// components eliminated first. Tracks how basis elements arise from the
    /// generators.
    fn lifting_basis(&self, m: &Submodule) -> Result<Arc<GroebnerBasis>> {
        let base = self.monomial_order(m.vars())?;
        let (p, n) = (m.rank(), m.len());
        let order = ModuleOrder::eliminating_components(base, p + n, p);
        if let Some(gb) = &m.cache.lock().unwrap().lifting {
            if gb.order() == &order {
                return Ok(gb.clone());
            }
        }
        let vars = m.vars();
        let gens = m
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut entries = g.entries().to_vec();
                entries.extend((0..n).map(|j| {
                    if i == j {
                        Polynomial::one(vars)
                    } else {
                        Polynomial::zero(vars)
                    }
                }));
                ModuleElement::new(vars, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let aug = Submodule::new(vars, p + n, gens)?;
        let gb = Arc::new(self.groebner_basis_in(&aug, &order)?);
        m.cache.lock().unwrap().lifting = Some(gb.clone());
        Ok(gb)
    }

    pub fn normal_form(&self, m: &Submodule, v: &ModuleElement) -> Result<ModuleElement> {
        m.check_element(v)?;
        if m.is_empty() {
            return Ok(v.clone());
        }
        self.groebner_basis(m)?.normal_form(v)
    }

    pub fn contains(&self, m: &Submodule, v: &ModuleElement) -> Result<bool> {
        Ok(self.normal_form(m, v)?.is_zero())
    }

    /// Whether every generator of `inner` lies in `outer`.
    pub fn contains_module(&self, outer: &Submodule, inner: &Submodule) -> Result<bool> {
        for g in inner.generators() {
            if !self.contains(outer, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Two-sided membership.
    pub fn equal(&self, a: &Submodule, b: &Submodule) -> Result<bool> {
        Ok(self.contains_module(a, b)? && self.contains_module(b, a)?)
    }

    /// Membership with explicit coefficients over the generators of `m`.
    pub fn express(&self, m: &Submodule, v: &ModuleElement) -> Result<Membership> {
        let nf = self.normal_form(m, v)?;
        if !nf.is_zero() {
            return Ok(Membership::NotMember(nf));
        }
        if v.is_zero() {
            return Ok(Membership::Member(vec![Polynomial::zero(m.vars()); m.len()]));
        }
        let (p, n) = (m.rank(), m.len());
        let gb = self.lifting_basis(m)?;
        let mut entries = v.entries().to_vec();
        entries.extend((0..n).map(|_| Polynomial::zero(m.vars())));
        let r = gb.normal_form(&ModuleElement::new(m.vars(), entries)?)?;
        if r.entries()[..p].iter().any(|e| !e.is_zero()) {
            return Err(Error::CertificateInvalid(
                "lifting basis disagrees with membership test".into(),
            ));
        }
        let coeffs: Vec<Polynomial> = r.entries()[p..].iter().map(|e| -e.clone()).collect();
        let back = ModuleElement::combination(m.vars(), p, &coeffs, m.generators())?;
        if &back != v {
            return Err(Error::CertificateInvalid(format!(
                "coefficients expand to {back}, expected {v}"
            )));
        }
        Ok(Membership::Member(coeffs))
    }

    /// All relations `Σ c_i gens_i = 0`, as a submodule of `R^len`.
    pub fn syzygy_module(&self, gens: &[ModuleElement]) -> Result<Submodule> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Structure("syzygies of an empty list".into()))?;
        let vars = first.vars().clone();
        let m = Submodule::new(&vars, first.rank(), gens.to_vec())?;
        let (p, n) = (m.rank(), m.len());
        let gb = self.lifting_basis(&m)?;
        let mut syz = Vec::new();
        for e in gb.elements() {
            if e.entries()[..p].iter().all(Polynomial::is_zero) {
                let s = ModuleElement::new(&vars, e.entries()[p..].to_vec())?;
                let expanded = ModuleElement::combination(&vars, p, s.entries(), gens)?;
                if !expanded.is_zero() {
                    return Err(Error::CertificateInvalid(format!(
                        "syzygy {s} expands to {expanded}"
                    )));
                }
                syz.push(s);
            }
        }
        Submodule::new(&vars, n, syz)
    }

    /// `a ∩ b`, by eliminating `t` from `t·a + (1 − t)·b`. Each generator of
    /// the result is checked to lie in both inputs.
    pub fn module_intersect(&self, a: &Submodule, b: &Submodule) -> Result<Submodule> {
        if a.rank() != b.rank() {
            return Err(Error::Rank {
                expected: a.rank(),
                found: b.rank(),
            });
        }
        if a.vars() != b.vars() {
            return Err(Error::ambient(format!("({}) vs ({})", a.vars(), b.vars())));
        }
        let vars = a.vars();
        let rank = a.rank();
        if a.is_empty() || b.is_empty() {
            return Ok(Submodule::zero(vars, rank));
        }
        let tname = fresh_name(vars, "_t");
        let ext = vars.with_prefix(&[tname.as_str()])?;
        let t = Polynomial::var_at(&ext, 0);
        let one_minus_t = &Polynomial::one(&ext) - &t;
        let mut gens = Vec::with_capacity(a.len() + b.len());
        for g in a.generators() {
            gens.push(g.embed(&ext)?.mul_poly(&t)?);
        }
        for g in b.generators() {
            gens.push(g.embed(&ext)?.mul_poly(&one_minus_t)?);
        }
        let base = MonomialOrder::Block(vec![
            (1, MonomialOrder::GrevLex),
            (vars.len(), self.monomial_order(vars)?),
        ]);
        let order = ModuleOrder::term_over_position(base, rank);
        let gb = self.groebner_basis_in(&Submodule::new(&ext, rank, gens)?, &order)?;
        let mut out = Vec::new();
        for e in gb.elements() {
            if e.entries().iter().all(|p| p.degree_in(0) == 0) {
                out.push(e.embed(vars)?);
            }
        }
        let result = Submodule::new(vars, rank, out)?;
        for (i, g) in result.generators().iter().enumerate() {
            if !self.contains(a, g)? || !self.contains(b, g)? {
                return Err(Error::CertificateInvalid(format!(
                    "intersection generator {i} is not in both inputs"
                )));
            }
        }
        Ok(result)
    }

    /// `m ∩ R'` where `R'` is the ring without the variables `elim`.
    /// The result lives over the remaining variables, in their original order.
    pub fn eliminate(&self, m: &Submodule, elim: &[&str]) -> Result<Submodule> {
        let vars = m.vars();
        let mut head = Vec::with_capacity(elim.len());
        for name in elim {
            head.push(vars.require(name)?);
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|i| !head.contains(i)).collect();
        let kept = vars.select(&keep)?;
        let perm: Vec<usize> = head.iter().chain(&keep).copied().collect();
        let permuted = vars.select(&perm)?;
        let gens = m
            .generators()
            .iter()
            .map(|g| g.embed(&permuted))
            .collect::<Result<Vec<_>>>()?;
        let base = MonomialOrder::Block(vec![
            (head.len(), MonomialOrder::GrevLex),
            (keep.len(), self.monomial_order(&kept)?),
        ]);
        let order = ModuleOrder::term_over_position(base, m.rank());
        let gb = self.groebner_basis_in(&Submodule::new(&permuted, m.rank(), gens)?, &order)?;
        let nh = head.len();
        let mut out = Vec::new();
        for e in gb.elements() {
            let free = e
                .entries()
                .iter()
                .all(|p| p.terms().iter().all(|(mon, _)| mon.exps()[..nh].iter().all(|&x| x == 0)));
            if free {
                out.push(e.embed(&kept)?);
            }
        }
        Submodule::new(&kept, m.rank(), out)
    }

    /// Generator of `⟨a⟩ ∩ ⟨b⟩`, primitive.
    pub fn lcm(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        let vars = a.vars();
        let i = self.module_intersect(
            &Submodule::ideal(vars, vec![a.clone()])?,
            &Submodule::ideal(vars, vec![b.clone()])?,
        )?;
        match i.ideal_generators().as_slice() {
            [g] => Ok(g.primitive()),
            [] => Ok(Polynomial::zero(vars)),
            gs => Err(Error::NotPrincipal(gs.len())),
        }
    }

    /// `gcd(a, b) = a·b / lcm(a, b)`, primitive.
    pub fn gcd(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        if a.is_zero() {
            return Ok(b.primitive());
        }
        if b.is_zero() {
            return Ok(a.primitive());
        }
        let l = self.lcm(a, b)?;
        let prod = a.try_mul(b)?;
        prod.div_exact(&l)
            .map(|g| g.primitive())
            .ok_or_else(|| Error::NotDivisible(format!("{prod} by lcm {l}")))
    }
}

fn fresh_name(vars: &VarSet, stem: &str) -> String {
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| vars.index_of(n).is_none())
        .expect("unbounded search")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::is_groebner_basis;
    use crate::poly::rat;

    fn ring(names: &[&str]) -> Arc<VarSet> {
        VarSet::new(names.iter().copied()).unwrap()
    }

    fn p(s: &str, r: &Arc<VarSet>) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    fn el(xs: &[&str], r: &Arc<VarSet>) -> ModuleElement {
        ModuleElement::new(r, xs.iter().map(|s| p(s, r)).collect()).unwrap()
    }

    fn ideal(xs: &[&str], r: &Arc<VarSet>) -> Submodule {
        Submodule::ideal(r, xs.iter().map(|s| p(s, r)).collect()).unwrap()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"]);
        let gb = Engine::default().groebner_basis(&ideal(&["x", "y"], &r)).unwrap();
        let polys: Vec<String> = gb.elements().iter().map(|e| e.entry(0).to_string()).collect();
        assert_eq!(polys, ["y", "x"]);
    }

    #[test]
    fn hand_computed_basis() {
        let r = ring(&["x", "y"]);
        let m = ideal(&["x^2 - y", "x^3"], &r);
        let e = Engine::new(OrderChoice::GrevLex, Limits::default());
        let gb = e.groebner_basis(&m).unwrap();
        assert!(gb.s_vectors_reduce_to_zero());
        assert!(is_groebner_basis(&gb.elements(), gb.order()));
        let polys: Vec<String> = gb.elements().iter().map(|e| e.entry(0).to_string()).collect();
        assert_eq!(polys, ["y^2", "x*y", "x^2 - y"]);
        // y^2 = x*(x*y) - y*(x^2 - y), with x*y = x^3 - x*(x^2 - y)
        assert!(e.contains(&m, &el(&["y^2"], &r)).unwrap());
        assert!(!e.contains(&m, &el(&["y"], &r)).unwrap());
    }

    #[test]
    fn monomial_module_is_unchanged() {
        let r = ring(&["X", "L"]);
        let m = Submodule::new(&r, 2, vec![el(&["1", "0"], &r), el(&["0", "L"], &r)]).unwrap();
        let gb = Engine::default().groebner_basis(&m).unwrap();
        let mut got = gb.elements();
        got.sort_by_key(|e| e.to_string());
        assert_eq!(got, vec![el(&["0", "L"], &r), el(&["1", "0"], &r)]);
    }

    #[test]
    fn normal_forms() {
        let r = ring(&["x", "y"]);
        let e = Engine::default();
        let m = ideal(&["x", "y"], &r);
        assert_eq!(e.normal_form(&m, &el(&["1"], &r)).unwrap(), el(&["1"], &r));
        let m2 = ideal(&["x^2 + y", "y^3 - x"], &r);
        assert!(e.normal_form(&m2, &el(&["x*(x^2 + y)"], &r)).unwrap().is_zero());
        assert!(matches!(
            e.normal_form(&m2, &el(&["1", "1"], &r)),
            Err(Error::Rank { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn express_returns_verified_coefficients() {
        let r = ring(&["x", "y"]);
        let e = Engine::default();
        let m = Submodule::new(&r, 2, vec![el(&["1", "y"], &r), el(&["0", "1"], &r)]).unwrap();
        let v = el(&["1", "y + x"], &r);
        match e.express(&m, &v).unwrap() {
            Membership::Member(c) => assert_eq!(c, vec![p("1", &r), p("x", &r)]),
            other => panic!("{other:?}"),
        }
        let sq = ideal(&["x^2", "y^2"], &r);
        match e.express(&sq, &el(&["x*y"], &r)).unwrap() {
            Membership::NotMember(nf) => assert_eq!(nf, el(&["x*y"], &r)),
            other => panic!("{other:?}"),
        }
        let cusp = ideal(&["x^2 - y^3", "x*y"], &r);
        let v = el(&["x^3 + y^4 - 2*x*y^2"], &r);
        let Membership::Member(c) = e.express(&cusp, &v).unwrap() else {
            panic!("member")
        };
        let back = ModuleElement::combination(&r, 1, &c, cusp.generators()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn intersections() {
        let r = ring(&["x", "y"]);
        let e = Engine::default();
        let i = e.module_intersect(&ideal(&["x"], &r), &ideal(&["y"], &r)).unwrap();
        assert_eq!(i.ideal_generators(), vec![p("x*y", &r)]);

        let m = Submodule::new(&r, 2, vec![el(&["x", "0"], &r), el(&["0", "y"], &r)]).unwrap();
        let n = Submodule::new(&r, 2, vec![el(&["1", "1"], &r)]).unwrap();
        let i = e.module_intersect(&m, &n).unwrap();
        assert_eq!(i.generators(), &[el(&["x*y", "x*y"], &r)]);
    }

    #[test]
    fn syzygies() {
        let r = ring(&["x", "y"]);
        let e = Engine::default();
        let s = e.syzygy_module(&[el(&["x"], &r), el(&["y"], &r)]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.generators()[0].primitive(), el(&["y", "-x"], &r));

        let s = e.syzygy_module(&[el(&["2*x"], &r), el(&["2*y"], &r)]).unwrap();
        assert_eq!(s.generators()[0].primitive(), el(&["y", "-x"], &r));
    }

    #[test]
    fn elimination() {
        let r = ring(&["x", "X", "Y"]);
        let e = Engine::default();
        let i = e.eliminate(&ideal(&["X - x^2", "Y - x^3"], &r), &["x"]).unwrap();
        let gens = i.ideal_generators();
        assert_eq!(gens.len(), 1);
        let target = ring(&["X", "Y"]);
        assert_eq!(gens[0].primitive(), p("X^3 - Y^2", &target));

        let r = ring(&["t", "x", "y"]);
        let i = e.eliminate(&ideal(&["t*x", "(1 - t)*y"], &r), &["t"]).unwrap();
        assert_eq!(i.ideal_generators(), vec![p("x*y", &ring(&["x", "y"]))]);
    }

    #[test]
    fn gcd_and_lcm() {
        let r = ring(&["x", "y"]);
        let e = Engine::default();
        let a = p("(x + y)^2*(x - 1)", &r);
        let b = p("3*(x + y)*(y + 2)", &r);
        assert_eq!(e.gcd(&a, &b).unwrap(), p("x + y", &r));
        assert_eq!(e.lcm(&a, &b).unwrap(), p("(x + y)^2*(x - 1)*(y + 2)", &r).primitive());
    }

    #[test]
    fn shuffled_input_gives_identical_basis() {
        let r = ring(&["x", "y", "z"]);
        let gens = ["x*y - z^2", "y^2 - x*z + 1/2", "x^3 - y*z", "z^3 - x"];
        let e = Engine::default();
        let a = e.groebner_basis_in(&ideal(&gens, &r), &e.module_order(&r, 1).unwrap()).unwrap();
        let rev: Vec<&str> = gens.iter().rev().copied().collect();
        let b = e.groebner_basis_in(&ideal(&rev, &r), &e.module_order(&r, 1).unwrap()).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert!(a.s_vectors_reduce_to_zero());
        for g in a.elements() {
            assert_eq!(g.entry(0).leading_term().unwrap().1, &rat(1, 1));
        }
    }

    #[test]
    fn zero_budget_times_out_immediately() {
        let r = ring(&["x", "y"]);
        let e = Engine::default().with_timeout(Duration::ZERO);
        match e.groebner_basis(&ideal(&["x^2 - y", "x^3"], &r)) {
            Err(Error::Timeout { partial, .. }) => assert!(partial.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn basis_cap_reports_partial_basis() {
        let r = ring(&["x", "y", "z"]);
        let limits = Limits {
            max_basis_size: 2,
            ..Limits::default()
        };
        let e = Engine::new(OrderChoice::Auto, limits);
        let err = e
            .groebner_basis(&ideal(&["x*y - z^2", "y^2 - x*z", "x^3 - y*z"], &r))
            .unwrap_err();
        assert!(err.is_timeout());
    }
}
