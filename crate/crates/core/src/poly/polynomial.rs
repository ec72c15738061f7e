use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Monomial, Rational, VarSet};
use crate::error::{Error, Result};

/// A polynomial with rational coefficients over a named [`VarSet`].
///
/// Terms are stored strictly decreasing in the ambient's default order with
/// no zero coefficients; the empty term list is the zero polynomial.
/// Arithmetic operators panic on ambient mismatch; use the `try_*` methods
/// when the operands come from untrusted input.
#[derive(Clone)]
pub struct Polynomial {
    vars: Arc<VarSet>,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Arc<VarSet>, c: Rational) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.len(), vars.len(), "monomial arity");
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable at index `i`.
    pub fn var_at(vars: &Arc<VarSet>, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn var(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        Ok(Self::var_at(vars, vars.require(name)?))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated, zero)
    /// terms.
    pub fn from_terms<I>(vars: &Arc<VarSet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial arity");
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = vars.order();
        terms.sort_by(|a, b| order.cmp(b.0.exps(), a.0.exps()));
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// Parses `text` under the expression grammar of [`crate::io::expr`].
    pub fn parse(text: &str, vars: &Arc<VarSet>) -> std::result::Result<Self, crate::io::ParseError> {
        crate::io::parse_poly(text, vars)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under the ambient default order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total (unweighted) degree; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exps()[var]).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(n, _)| n == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::ambient(format!(
                "({}) vs ({})",
                self.vars, other.vars
            )))
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = self.vars.order();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match order.cmp(a[i].0.exps(), b[j].0.exps()) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            let c = if negate { -c } else { c.clone() };
            (m.clone(), c)
        }));
        Polynomial {
            vars: self.vars.clone(),
            terms: out,
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.vars));
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Polynomial::from_terms(&self.vars, acc))
    }

    /// Multiplication by `c * m`; order is preserved so no re-sort is needed.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, d)| (n.mul(m), d * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        self.mul_term(&Monomial::one(self.vars.len()), c)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Scales to coprime integer coefficients with a positive leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den / c.denom());
            num = num.gcd(&v);
        }
        let mut s = Rational::new(den, num);
        if self.terms[0].1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Formal partial derivative with respect to the variable at `i`.
    pub fn derivative_at(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exps()[i];
            if e == 0 {
                return None;
            }
            let mut n = m.clone();
            n.exps_mut()[i] = e - 1;
            Some((n, c * Rational::from_integer(e.into())))
        });
        Polynomial::from_terms(&self.vars, terms)
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Polynomial> {
        Ok(self.derivative_at(self.vars.require(name)?))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Sets the variables at `idx` to zero, keeping the ambient.
    pub fn set_zero(&self, idx: &[usize]) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| idx.iter().all(|&i| m.exps()[i] == 0))
                .cloned()
                .collect(),
        }
    }

    /// Re-expresses the polynomial over `target`, mapping variables by name.
    /// Fails if a variable that actually occurs has no namesake in `target`.
    pub fn embed(&self, target: &Arc<VarSet>) -> Result<Polynomial> {
        if Arc::ptr_eq(&self.vars, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut n = Monomial::one(target.len());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    Error::ambient(format!(
                        "variable `{}` does not exist in ({target})",
                        self.vars.name(i)
                    ))
                })?;
                n.exps_mut()[j] += e;
            }
            terms.push((n, c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Re-expresses the polynomial over `target` by position: variable `i`
    /// becomes the `i`-th variable of `target`.
    pub fn rebase(&self, target: &Arc<VarSet>) -> Result<Polynomial> {
        if target.len() != self.vars.len() {
            return Err(Error::ambient(format!(
                "cannot rebase ({}) onto ({target}) by position",
                self.vars
            )));
        }
        Ok(Polynomial::from_terms(target, self.terms.iter().cloned()))
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Multivariate division by a single polynomial in the default order:
    /// `self = q * divisor + r` with no term of `r` divisible by the leading
    /// monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check(divisor)?;
        let (lm, lc) = divisor
            .leading_term()
            .ok_or_else(|| Error::NotDivisible("division by zero polynomial".into()))?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut q = Vec::new();
        let mut r = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            match lm.quotient_of(&m) {
                Some(u) => {
                    let f = &c / &lc;
                    p = p.merge(&divisor.mul_term(&u, &f), true);
                    q.push((u, f));
                }
                None => {
                    r.push(p.terms.remove(0));
                }
            }
        }
        Ok((
            Polynomial::from_terms(&self.vars, q),
            Polynomial {
                vars: self.vars.clone(),
                terms: r,
            },
        ))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vars.hash(state);
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: terms in descending order, explicit `*` and `^`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let a = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut first = true;
            if !a.is_one() || m.is_one() {
                write_coeff(f, &a)?;
                first = false;
            }
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<'a> $tr<&'a Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                self.$try(rhs).expect("polynomial ambient mismatch")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$try(&rhs).expect("polynomial ambient mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn ring() -> Arc<VarSet> {
        VarSet::new(["x", "y", "u1"]).unwrap()
    }

    fn p(s: &str, r: &Arc<VarSet>) -> Polynomial {
        Polynomial::parse(s, r).unwrap()
    }

    #[test]
    fn cancellation() {
        let r = ring();
        let sum = &p("x + y", &r) + &p("x - y", &r);
        assert_eq!(sum, p("2*x", &r));
        assert_eq!(sum.to_string(), "2*x");
    }

    #[test]
    fn exponent_addition() {
        let r = ring();
        // k = 3: y^3 * y^(3k-4)
        assert_eq!(&p("y^3", &r) * &p("y^5", &r), p("y^8", &r));
    }

    #[test]
    fn expansion_matches_random_points() {
        let r = ring();
        let lhs = &p("y^3 + u1*y", &r) * &p("y^2", &r);
        assert_eq!(lhs, p("y^5 + u1*y^3", &r));
        for pt in [[int(2), int(-3), rat(1, 2)], [rat(-5, 7), int(4), int(9)]] {
            let a = p("y^3 + u1*y", &r).evaluate(&pt) * p("y^2", &r).evaluate(&pt);
            assert_eq!(lhs.evaluate(&pt), a);
        }
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = p("x", &ring());
        let b = p("x", &VarSet::new(["x"]).unwrap());
        assert!(matches!(a.try_add(&b), Err(Error::Ambient(_))));
    }

    #[test]
    fn derivatives() {
        let r = ring();
        assert!(p("7", &r).partial_derivative("x").unwrap().is_zero());
        // H_2 third component
        assert_eq!(
            p("y^5 + x*y", &r).partial_derivative("y").unwrap(),
            p("5*y^4 + x", &r)
        );
        assert!(p("x", &r).partial_derivative("nope").is_err());
    }

    #[test]
    fn derivative_of_h_matches_difference_quotient() {
        let r = VarSet::new(["X", "Y", "Z"]).unwrap();
        let h = p(
            "256*X^3 + 27*Y^4 + 144*X*Y^2*Z + 128*X^2*Z^2 + 4*Y^2*Z^3 + 16*X*Z^4",
            &r,
        );
        let dz = h.partial_derivative("Z").unwrap();
        assert_eq!(dz, p("144*X*Y^2 + 256*X^2*Z + 12*Y^2*Z^2 + 64*X*Z^3", &r));
        // (h(v+t)-h(v))/t is a polynomial in t of degree 3 whose value at t=0
        // is dz(v); recover it from four secants by Lagrange extrapolation.
        let v = [rat(2, 3), int(-1), rat(5, 4)];
        let secant = |t: Rational| {
            let mut w = v.clone();
            w[2] = &w[2] + &t;
            (h.evaluate(&w) - h.evaluate(&v)) / t
        };
        let ts = [int(1), int(2), int(3), int(4)];
        let mut at0 = Rational::zero();
        for (i, ti) in ts.iter().enumerate() {
            let mut l = Rational::one();
            for (j, tj) in ts.iter().enumerate() {
                if i != j {
                    l *= -tj / (ti - tj);
                }
            }
            at0 += l * secant(ti.clone());
        }
        assert_eq!(at0, dz.evaluate(&v));
    }

    #[test]
    fn division() {
        let r = ring();
        let f = p("x^2*y - y^3", &r);
        let g = p("x - y", &r);
        assert_eq!(f.div_exact(&g), Some(p("x*y + y^2", &r)));
        assert_eq!(p("x^2 + 1", &r).div_exact(&g), None);
    }

    #[test]
    fn primitive_normalization() {
        let r = ring();
        assert_eq!(p("-1/2*x + 3/4*y", &r).primitive(), p("2*x - 3*y", &r));
    }

    #[test]
    fn printing() {
        let r = ring();
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
        assert_eq!(p("-x^2*y + 1/3 - y", &r).to_string(), "-x^2*y - y + 1/3");
        assert_eq!(p("-1", &r).to_string(), "-1");
    }
}
