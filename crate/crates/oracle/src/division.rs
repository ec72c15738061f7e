//! Schoolbook multivariate division for module elements.
//!
//! A second reducer, written without the engine's accumulators or pair
//! bookkeeping, used to test the Buchberger criterion from outside.

use std::cmp::Ordering;

use germlift::groebner::{ModuleElement, ModuleOrder};
use germlift::poly::{Monomial, Polynomial, Rational};

/// Leading `(component, monomial, coefficient)` of `v` under `order`.
pub fn leading(v: &ModuleElement, order: &ModuleOrder) -> Option<(usize, Monomial, Rational)> {
    let mut best: Option<(usize, &Monomial, &Rational)> = None;
    for (c, p) in v.entries().iter().enumerate() {
        for (m, a) in p.terms() {
            let better = match best {
                None => true,
                Some((bc, bm, _)) => order.cmp((m.exps(), c), (bm.exps(), bc)) == Ordering::Greater,
            };
            if better {
                best = Some((c, m, a));
            }
        }
    }
    best.map(|(c, m, a)| (c, m.clone(), a.clone()))
}

fn term(v: &ModuleElement, c: usize, m: &Monomial, a: &Rational) -> ModuleElement {
    let vars = v.vars();
    let mut e = ModuleElement::zero(vars, v.rank()).into_entries();
    e[c] = Polynomial::monomial(vars, m.clone(), a.clone());
    ModuleElement::new(vars, e).expect("same ring")
}

/// Quotients `q` and remainder `r` with `v = Σ q_i b_i + r`, where no term
/// of `r` is divisible by a leading term of `basis`.
pub fn divide(v: &ModuleElement, basis: &[ModuleElement], order: &ModuleOrder) -> (Vec<Polynomial>, ModuleElement) {
    let vars = v.vars();
    let leads: Vec<_> = basis.iter().map(|b| leading(b, order).expect("nonzero divisor")).collect();
    let mut q = vec![Polynomial::zero(vars); basis.len()];
    let mut r = ModuleElement::zero(vars, v.rank());
    let mut p = v.clone();
    while let Some((c, m, a)) = leading(&p, order) {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(i, (bc, bm, ba))| (*bc == c).then(|| bm.quotient_of(&m)).flatten().map(|s| (i, s, &a / ba)));
        let lt = term(&p, c, &m, &a);
        match hit {
            Some((i, shift, coeff)) => {
                let t = Polynomial::monomial(vars, shift, coeff);
                p = p.try_sub(&basis[i].mul_poly(&t).expect("same ring")).expect("same ring");
                q[i] = q[i].try_add(&t).expect("same ring");
            }
            None => {
                p = p.try_sub(&lt).expect("same ring");
                r = r.try_add(&lt).expect("same ring");
            }
        }
    }
    (q, r)
}

/// S-vector of two elements whose leading terms share a component.
pub fn s_vector(a: &ModuleElement, b: &ModuleElement, order: &ModuleOrder) -> Option<ModuleElement> {
    let (ca, ma, xa) = leading(a, order)?;
    let (cb, mb, xb) = leading(b, order)?;
    if ca != cb {
        return None;
    }
    let l = ma.lcm(&mb);
    let vars = a.vars();
    let one = Rational::from_integer(1.into());
    let sa = Polynomial::monomial(vars, ma.quotient_of(&l)?, &one / &xa);
    let sb = Polynomial::monomial(vars, mb.quotient_of(&l)?, &one / &xb);
    a.mul_poly(&sa).ok()?.try_sub(&b.mul_poly(&sb).ok()?).ok()
}

/// Buchberger's criterion: every S-vector divides to remainder zero.
pub fn is_groebner(basis: &[ModuleElement], order: &ModuleOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(s) = s_vector(&basis[i], &basis[j], order) {
                if !divide(&s, basis, order).1.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}
