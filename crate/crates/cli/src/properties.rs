//! Seeded randomized property suites for the module engine.
//!
//! Each suite draws small instances from a ChaCha stream and checks them
//! against the independent linear-algebra and division oracles.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use germlift::fixtures;
use germlift::germ::{MapGerm, VectorField};
use germlift::groebner::{Engine, Membership, ModuleElement, Submodule};
use germlift::lift::{LiftChecker, LiftVerdict};
use germlift::poly::{Monomial, Polynomial, Rational, VarSet};
use germlift_oracle::division;
use germlift_oracle::{dimension, homogeneous_degree, intersection_dimension, member, monomials_of_degree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Certificate;

pub const DEFAULT_SEED: u64 = 0x6765_726d_6c69_6674;
pub const DEFAULT_CASES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    SVectors,
    Express,
    Intersection,
    Syzygies,
    Certificates,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::SVectors,
        Property::Express,
        Property::Intersection,
        Property::Syzygies,
        Property::Certificates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SVectors => "S-vectors reduce to zero",
            Property::Express => "express agrees with normal form",
            Property::Intersection => "intersection matches the linear-algebra oracle",
            Property::Syzygies => "syzygies expand to zero",
            Property::Certificates => "lift certificates re-verify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub property: Property,
    pub cases: usize,
    pub failures: Vec<String>,
    /// How many cases fell into each instance category.
    pub tally: BTreeMap<&'static str, usize>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random instances in a few small rings.
struct Gen {
    rng: ChaCha8Rng,
    rings: Vec<Arc<VarSet>>,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rings: vec![
                VarSet::new(["x", "y"]).expect("ring"),
                VarSet::new(["x", "y", "z"]).expect("ring"),
            ],
        }
    }

    fn ring(&mut self) -> Arc<VarSet> {
        self.rings.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn coeff(&mut self) -> Rational {
        let mut c = 0;
        while c == 0 {
            c = self.rng.gen_range(-4i64..=4);
        }
        Rational::from_integer(c.into())
    }

    fn exps(&mut self, n: usize, max_deg: u32) -> Vec<u32> {
        let d = self.rng.gen_range(0..=max_deg);
        let all = monomials_of_degree(n, d);
        all.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn poly(&mut self, vars: &Arc<VarSet>, max_deg: u32, max_terms: usize) -> Polynomial {
        let t = self.rng.gen_range(1..=max_terms);
        let terms: Vec<_> = (0..t)
            .map(|_| (Monomial::from_exps(&self.exps(vars.len(), max_deg)), self.coeff()))
            .collect();
        Polynomial::from_terms(vars, terms)
    }

    fn homogeneous(&mut self, vars: &Arc<VarSet>, d: u32, max_terms: usize) -> Polynomial {
        let all = monomials_of_degree(vars.len(), d);
        let t = self.rng.gen_range(1..=max_terms);
        let terms: Vec<_> = (0..t)
            .map(|_| (Monomial::from_exps(all.choose(&mut self.rng).expect("nonempty")), self.coeff()))
            .collect();
        Polynomial::from_terms(vars, terms)
    }

    fn element(&mut self, vars: &Arc<VarSet>, rank: usize, max_deg: u32) -> ModuleElement {
        let hit = self.rng.gen_range(0..rank);
        let entries = (0..rank)
            .map(|i| {
                if i == hit || self.rng.gen_bool(0.5) {
                    self.poly(vars, max_deg, 3)
                } else {
                    Polynomial::zero(vars)
                }
            })
            .collect();
        ModuleElement::new(vars, entries).expect("ring")
    }

    /// A nonzero element whose entries are homogeneous of one degree.
    fn homogeneous_element(&mut self, vars: &Arc<VarSet>, rank: usize, d: u32) -> ModuleElement {
        loop {
            let entries = (0..rank)
                .map(|_| {
                    if self.rng.gen_bool(0.6) {
                        self.homogeneous(vars, d, 2)
                    } else {
                        Polynomial::zero(vars)
                    }
                })
                .collect();
            let e = ModuleElement::new(vars, entries).expect("ring");
            if !e.is_zero() {
                return e;
            }
        }
    }

    fn generators(&mut self, vars: &Arc<VarSet>, rank: usize, count: usize, max_deg: u32) -> Vec<ModuleElement> {
        (0..count)
            .map(|_| loop {
                let g = self.element(vars, rank, max_deg);
                if !g.is_zero() {
                    break g;
                }
            })
            .collect()
    }

    fn rank(&mut self) -> usize {
        if self.rng.gen_bool(0.6) {
            1
        } else {
            2
        }
    }
}

fn expand(vars: &Arc<VarSet>, rank: usize, coeffs: &[Polynomial], gens: &[ModuleElement]) -> ModuleElement {
    let mut acc = ModuleElement::zero(vars, rank);
    for (c, g) in coeffs.iter().zip(gens) {
        for (m, a) in c.terms() {
            acc = acc.try_add(&g.map(|p| p.mul_term(m, a))).expect("same ring");
        }
    }
    acc
}

fn s_vectors(g: &mut Gen, engine: &Engine) -> Result<&'static str, String> {
    let vars = g.ring();
    let rank = g.rank();
    let count = g.rng.gen_range(2..=3);
    let gens = g.generators(&vars, rank, count, 3);
    let m = Submodule::new(&vars, rank, gens.clone()).map_err(|e| e.to_string())?;
    let gb = engine.groebner_basis(&m).map_err(|e| e.to_string())?;
    let elems = gb.elements();
    let order = engine.module_order(&vars, rank).map_err(|e| e.to_string())?;
    if !division::is_groebner(&elems, &order) {
        return Err(format!("S-vector with nonzero remainder for {gens:?}"));
    }
    let leads: Vec<_> = elems.iter().filter_map(|e| division::leading(e, &order)).collect();
    for (i, (ci, mi, ai)) in leads.iter().enumerate() {
        if *ai != Rational::from_integer(1.into()) {
            return Err(format!("basis element {} is not monic", elems[i]));
        }
        for (j, (cj, mj, _)) in leads.iter().enumerate() {
            if i != j && ci == cj && mi.divides(mj) {
                return Err(format!("leading terms of {} and {} are comparable", elems[i], elems[j]));
            }
        }
    }
    for v in &gens {
        if !division::divide(v, &elems, &order).1.is_zero() {
            return Err(format!("input generator {v} does not reduce to zero"));
        }
    }
    let mut shuffled = gens.clone();
    shuffled.shuffle(&mut g.rng);
    let again = Engine::default()
        .groebner_basis(&Submodule::new(&vars, rank, shuffled).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if again.elements() != elems {
        return Err(format!("reduced basis depends on generator order for {gens:?}"));
    }
    Ok(if elems.len() > gens.len() { "basis grew" } else { "basis did not grow" })
}

fn express(g: &mut Gen, engine: &Engine) -> Result<&'static str, String> {
    let vars = g.ring();
    let rank = g.rank();
    let count = g.rng.gen_range(1..=3);
    let gens = g.generators(&vars, rank, count, 2);
    let m = Submodule::new(&vars, rank, gens.clone()).map_err(|e| e.to_string())?;
    let constructed = g.rng.gen_bool(0.5);
    let v = if constructed {
        let coeffs: Vec<_> = (0..count).map(|_| g.poly(&vars, 2, 2)).collect();
        expand(&vars, rank, &coeffs, &gens)
    } else {
        g.element(&vars, rank, 3)
    };
    let nf = engine.normal_form(&m, &v).map_err(|e| e.to_string())?;
    match engine.express(&m, &v).map_err(|e| e.to_string())? {
        Membership::Member(c) => {
            if expand(&vars, rank, &c, &gens) != v {
                return Err(format!("coefficients for {v} do not re-expand"));
            }
            if !nf.is_zero() {
                return Err(format!("{v} expressed but has normal form {nf}"));
            }
            Ok(if constructed { "constructed member" } else { "random member" })
        }
        Membership::NotMember(r) => {
            if constructed {
                return Err(format!("constructed member {v} reported as non-member"));
            }
            if r.is_zero() || r != nf {
                return Err(format!("non-membership certificate {r} disagrees with normal form {nf}"));
            }
            let gb = engine.groebner_basis(&m).map_err(|e| e.to_string())?;
            let order = engine.module_order(&vars, rank).map_err(|e| e.to_string())?;
            let (_, rem) = division::divide(&r, &gb.elements(), &order);
            if rem != r {
                return Err(format!("normal form {r} is not fully reduced"));
            }
            Ok("non-member")
        }
    }
}

fn intersection(g: &mut Gen, engine: &Engine) -> Result<&'static str, String> {
    let vars = g.ring();
    let n = vars.len();
    let rank = g.rank();
    let side = |g: &mut Gen| -> Vec<ModuleElement> {
        let count = g.rng.gen_range(1..=2);
        (0..count)
            .map(|_| {
                let d = g.rng.gen_range(1..=2);
                g.homogeneous_element(&vars, rank, d)
            })
            .collect()
    };
    let a = side(g);
    let b = side(g);
    let ma = Submodule::new(&vars, rank, a.clone()).map_err(|e| e.to_string())?;
    let mb = Submodule::new(&vars, rank, b.clone()).map_err(|e| e.to_string())?;
    let i = engine.module_intersect(&ma, &mb).map_err(|e| e.to_string())?;
    for x in i.generators() {
        if homogeneous_degree(x).is_none() {
            return Err(format!("intersection generator {x} is not homogeneous"));
        }
        if !member(&a, x) || !member(&b, x) {
            return Err(format!("intersection generator {x} is not in both inputs"));
        }
    }
    for d in 0..=4 {
        let want = intersection_dimension(&a, &b, n, rank, d);
        let got = dimension(i.generators(), n, rank, d);
        if want != got {
            return Err(format!("degree {d}: oracle dimension {want}, computed {got} for {a:?} and {b:?}"));
        }
    }
    Ok(if i.is_empty() { "zero intersection" } else { "nonzero intersection" })
}

fn syzygies(g: &mut Gen, engine: &Engine) -> Result<&'static str, String> {
    let vars = g.ring();
    let rank = g.rank();
    let count = g.rng.gen_range(2..=3);
    let gens = g.generators(&vars, rank, count, 2);
    let syz = engine.syzygy_module(&gens).map_err(|e| e.to_string())?;
    for s in syz.generators() {
        if !expand(&vars, rank, s.entries(), &gens).is_zero() {
            return Err(format!("syzygy {s} of {gens:?} does not expand to zero"));
        }
    }
    // Koszul relations must lie in the syzygy module of an ideal.
    if rank == 1 {
        for i in 0..count {
            for j in i + 1..count {
                let mut e = vec![Polynomial::zero(&vars); count];
                e[i] = gens[j].entry(0).clone();
                e[j] = -gens[i].entry(0);
                let k = ModuleElement::new(&vars, e).map_err(|e| e.to_string())?;
                if !engine.contains(&syz, &k).map_err(|e| e.to_string())? {
                    return Err(format!("Koszul relation {k} missing from the syzygies of {gens:?}"));
                }
            }
        }
    }
    Ok(if syz.is_empty() { "no syzygies" } else { "syzygies found" })
}

struct LiftFamily {
    germ: MapGerm,
    lift: Vec<VectorField>,
}

fn lift_families() -> Vec<LiftFamily> {
    let mut out = Vec::new();
    for (file, map, fields) in [
        ("small.manifest", "fold", "lift_fold"),
        ("augment.manifest", "F", "etas"),
        ("hk.manifest", "H2", "lift_H2"),
    ] {
        let m = fixtures::load(file).expect("bundled fixture");
        out.push(LiftFamily {
            germ: m.map(map).expect("bundled map").clone(),
            lift: m.field_list(fields).expect("bundled fields").fields.clone(),
        });
    }
    out
}

fn certificates(g: &mut Gen, engine: &Engine, families: &[LiftFamily]) -> Result<&'static str, String> {
    let fam = families.choose(&mut g.rng).expect("nonempty");
    let t = fam.germ.target();
    let coeffs: Vec<_> = fam
        .lift
        .iter()
        .map(|_| if g.rng.gen_bool(0.6) { g.poly(t, 1, 2) } else { Polynomial::zero(t) })
        .collect();
    let elems: Vec<_> = fam.lift.iter().map(|f| f.as_element().clone()).collect();
    let eta = VectorField::from_element(expand(t, t.len(), &coeffs, &elems)).map_err(|e| e.to_string())?;
    match LiftChecker::new(&fam.germ).check(engine, &eta).map_err(|e| e.to_string())? {
        LiftVerdict::Certified(c) => {
            let cert = Certificate::witness("random", &c);
            cert.verify().map_err(|e| format!("witness for {eta} fails: {e}"))?;
            // A perturbed witness must be rejected.
            let mut bad = cert.clone();
            if let Certificate::Witness { xi, .. } = &mut bad {
                xi[0] = format!("({}) + 1", xi[0]);
            }
            if bad.verify().is_ok() {
                return Err(format!("perturbed witness for {eta} still verifies"));
            }
            Ok("certified")
        }
        LiftVerdict::NotPolynomiallyLiftable { normal_form, .. } => {
            Err(format!("combination {eta} of liftable fields not certified (normal form {normal_form})"))
        }
    }
}

/// Runs one suite for `cases` seeded cases.
pub fn run(property: Property, seed: u64, cases: usize) -> Outcome {
    let start = Instant::now();
    let mut g = Gen::new(seed ^ (property as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let engine = Engine::default();
    let families = match property {
        Property::Certificates => lift_families(),
        _ => Vec::new(),
    };
    let mut failures = Vec::new();
    let mut tally = BTreeMap::new();
    for case in 0..cases {
        let r = match property {
            Property::SVectors => s_vectors(&mut g, &engine),
            Property::Express => express(&mut g, &engine),
            Property::Intersection => intersection(&mut g, &engine),
            Property::Syzygies => syzygies(&mut g, &engine),
            Property::Certificates => certificates(&mut g, &engine, &families),
        };
        match r {
            Ok(kind) => *tally.entry(kind).or_insert(0) += 1,
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    Outcome {
        property,
        cases,
        failures,
        tally,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(seed: u64, cases: usize) -> Vec<Outcome> {
    Property::ALL.iter().map(|&p| run(p, seed, cases)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_a_short_run() {
        for o in run_all(7, 12) {
            assert!(o.passed(), "{}: {:?}", o.property.name(), o.failures);
        }
    }

    #[test]
    fn default_run_covers_both_sides() {
        let tally = |p| run(p, DEFAULT_SEED, DEFAULT_CASES).tally;
        let e = tally(Property::Express);
        assert!(e.get("constructed member").copied().unwrap_or(0) > 50, "{e:?}");
        assert!(e.get("non-member").copied().unwrap_or(0) > 50, "{e:?}");
        let i = tally(Property::Intersection);
        assert!(i.get("nonzero intersection").copied().unwrap_or(0) > 100, "{i:?}");
        let s = tally(Property::SVectors);
        assert!(s.get("basis grew").copied().unwrap_or(0) > 20, "{s:?}");
    }

    #[test]
    fn generator_is_deterministic() {
        let mut a = Gen::new(3);
        let mut b = Gen::new(3);
        let (ra, rb) = (a.ring(), b.ring());
        assert_eq!(a.poly(&ra, 3, 3), b.poly(&rb, 3, 3));
    }
}
