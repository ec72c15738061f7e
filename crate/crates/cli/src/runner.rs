//! Executes manifest tasks and turns the results into [`Report`]s.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use germlift::augment::{pi2_istar, AugmentationSpec, DescentMode};
use germlift::derlog::{derlog_delta, derlog_strict, discriminant, euler_field, Divisor};
use germlift::germ::{check_inverse, transport, Unfolding, VectorField};
use germlift::groebner::{Engine, Limits, Membership, ModuleElement, OrderChoice, Submodule};
use germlift::io::{AugmentCheck, AugmentationDecl, DerlogMode, FieldList, Manifest, Task, TaskArgs, TaskOp};
use germlift::lift::{lift_direct, lift_from_unfolding, phi_project, tau_tilde, LiftChecker, LiftVerdict};
use germlift::poly::{Polynomial, Rational, VarSet};
use germlift::Error;
use num_traits::Zero;

use crate::certificate::Certificate;
use crate::report::{Check, Report, Verdict, REPORT_SCHEMA};

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: OrderChoice,
    pub timeout: Option<Duration>,
    /// Include wall-clock timing in serialized reports.
    pub timing: bool,
}

impl Options {
    pub fn engine(&self) -> Engine {
        let e = Engine::new(self.order, Limits::default());
        match self.timeout {
            Some(t) => e.with_timeout(t),
            None => e,
        }
    }
}

/// A task that cannot even start: a name does not resolve or an argument
/// is missing. The CLI maps this to a usage error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

enum Stop {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Engine(e)
    }
}

type Step<T = ()> = Result<T, Stop>;

fn usage<T>(msg: impl Into<String>) -> Step<T> {
    Err(Stop::Usage(msg.into()))
}

/// Declared label of field `i`, or its position in the named list.
fn label(name: &str, fl: &FieldList, i: usize) -> String {
    fl.labels.get(i).cloned().unwrap_or_else(|| format!("{name}[{}]", i + 1))
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn texts(g: &ModuleElement) -> Vec<String> {
    g.entries().iter().map(|p| p.to_string()).collect()
}

fn module_texts(m: &Submodule) -> Vec<Vec<String>> {
    m.generators().iter().map(texts).collect()
}

fn embed_module(m: &Submodule, vars: &Arc<VarSet>) -> Step<Submodule> {
    let gens = m
        .generators()
        .iter()
        .map(|g| g.embed(vars))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Submodule::new(vars, m.rank(), gens)?)
}

fn embed_fields(fl: &FieldList, vars: &Arc<VarSet>) -> Step<Vec<VectorField>> {
    Ok(fl
        .fields
        .iter()
        .map(|f| f.embed(vars))
        .collect::<Result<Vec<_>, _>>()?)
}

fn module_of(fields: &[VectorField], vars: &Arc<VarSet>) -> Step<Submodule> {
    Ok(Submodule::new(
        vars,
        vars.len(),
        fields.iter().map(|f| f.as_element().clone()).collect(),
    )?)
}

/// Scalar `c` with `a = c · b`, if one exists.
fn proportional(a: &ModuleElement, b: &ModuleElement) -> Option<Rational> {
    let (i, lead) = b
        .entries()
        .iter()
        .enumerate()
        .find_map(|(i, p)| p.leading_term().map(|(m, c)| (i, (m.clone(), c.clone()))))?;
    let c = a.entry(i).coefficient(&lead.0) / lead.1;
    (!c.is_zero() && *a == b.scale(&c)).then_some(c)
}

struct Run<'a> {
    m: &'a Manifest,
    engine: Engine,
    checks: Vec<Check>,
    certificates: Vec<Certificate>,
    outputs: BTreeMap<String, Vec<Vec<String>>>,
}

impl<'a> Run<'a> {
    fn check(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
    }

    fn name<'b>(&self, v: &'b Option<String>, what: &str, op: TaskOp) -> Step<&'b str> {
        match v.as_deref() {
            Some(s) => Ok(s),
            None => usage(format!("`{op}` needs `{what}`")),
        }
    }

    fn fields(&self, name: &str) -> Step<&'a FieldList> {
        self.m
            .field_list(name)
            .map_or_else(|| usage(format!("unknown field list `{name}`")), Ok)
    }

    fn unfolding(&self, name: &str) -> Step<&'a Unfolding> {
        self.m
            .unfolding(name)
            .map_or_else(|| usage(format!("unknown unfolding `{name}`")), Ok)
    }

    fn divisor(&self, name: &str) -> Step<&'a Divisor> {
        self.m
            .divisor(name)
            .map_or_else(|| usage(format!("unknown divisor `{name}`")), Ok)
    }

    /// Two-sided membership with explicit coefficients in both directions.
    fn equal_modules(&mut self, name: &str, computed: &Submodule, expected: &Submodule) -> Step<bool> {
        let expected = embed_module(expected, computed.vars())?;
        let mut missing = Vec::new();
        for (dir, outer, inner) in [
            ("expected in computed", computed, &expected),
            ("computed in expected", &expected, computed),
        ] {
            for (i, g) in inner.generators().iter().enumerate() {
                let label = format!("{name}: {dir}, generator {}", i + 1);
                match self.engine.express(outer, g)? {
                    Membership::Member(c) => {
                        self.certificates
                            .push(Certificate::membership(label, g, outer.generators(), &c));
                    }
                    Membership::NotMember(nf) => {
                        missing.push(format!("{dir} #{}", i + 1));
                        self.certificates.push(Certificate::normal_form(label, &nf));
                    }
                }
            }
        }
        let ok = missing.is_empty();
        self.check(name, Verdict::of(ok), missing.join("; "));
        Ok(ok)
    }

    fn identity(&mut self, name: String, got: &ModuleElement, want: &ModuleElement) -> Step<bool> {
        let want = want.embed(got.vars())?;
        let ok = *got == want;
        if ok {
            self.certificates.push(Certificate::identity(name.clone(), got, &want));
            self.check(name, Verdict::Pass, "");
        } else {
            self.check(name, Verdict::Fail, format!("got {got}, expected {want}"));
        }
        Ok(ok)
    }

    fn quotient(&mut self, name: String, d: &Divisor, eta: &VectorField) -> Step<Option<Polynomial>> {
        match d.quotient(eta)? {
            Some(a) => {
                self.certificates.push(Certificate::quotient(name.clone(), d.equation(), eta, &a));
                self.check(name, Verdict::Pass, "");
                Ok(Some(a))
            }
            None => {
                let v = eta.apply(d.equation())?;
                self.check(name, Verdict::Fail, format!("{}(h) = {v} is not a multiple of h", eta));
                Ok(None)
            }
        }
    }

    fn up_to_scalar(&mut self, name: String, got: &ModuleElement, want: &ModuleElement, claimed: Option<&Rational>) -> Step<bool> {
        let want = want.embed(got.vars())?;
        match proportional(got, &want) {
            Some(c) if claimed.is_none_or(|s| *s == c) => {
                self.certificates.push(Certificate::scalar(name.clone(), got, &want, &c));
                self.check(name, Verdict::Pass, format!("scalar {c}"));
                Ok(true)
            }
            Some(c) => {
                let s = claimed.expect("guarded");
                self.check(name, Verdict::Fail, format!("scalar is {c}, expected {s}"));
                Ok(false)
            }
            None => {
                self.check(name, Verdict::Fail, format!("{got} is not a multiple of {want}"));
                Ok(false)
            }
        }
    }

    // ---- operations ----

    fn lift_check(&mut self, a: &TaskArgs) -> Step<String> {
        let map_name = self.name(&a.map, "map", TaskOp::LiftCheck)?;
        let f = self
            .m
            .map(map_name)
            .map_or_else(|| usage(format!("unknown map `{map_name}`")), Ok)?;
        let fname = self.name(&a.fields, "fields", TaskOp::LiftCheck)?;
        let fl = self.fields(fname)?;
        let checker = LiftChecker::new(f);
        let fields = embed_fields(fl, f.target())?;
        let mut ok = 0;
        for (i, eta) in fields.iter().enumerate() {
            let label = label(fname, fl, i);
            match checker.check(&self.engine, eta)? {
                LiftVerdict::Certified(c) => {
                    ok += 1;
                    self.certificates.push(Certificate::witness(label.clone(), &c));
                    self.check(format!("{label} lifts"), Verdict::Pass, format!("xi = {}", c.xi()));
                }
                LiftVerdict::NotPolynomiallyLiftable {
                    normal_form,
                    conclusive,
                } => {
                    let v = if conclusive { Verdict::Fail } else { Verdict::UndecidedLocal };
                    self.certificates.push(Certificate::normal_form(label.clone(), &normal_form));
                    self.check(format!("{label} lifts"), v, format!("normal form {normal_form}"));
                }
            }
        }
        Ok(format!("{ok}/{} certified over {map_name}", fields.len()))
    }

    fn lift_direct(&mut self, a: &TaskArgs) -> Step<String> {
        let map_name = self.name(&a.map, "map", TaskOp::LiftDirect)?;
        let f = self
            .m
            .map(map_name)
            .map_or_else(|| usage(format!("unknown map `{map_name}`")), Ok)?;
        let lift = lift_direct(&self.engine, f)?;
        let checker = LiftChecker::new(f);
        for (i, g) in lift.generators().iter().enumerate() {
            let name = format!("generator {} lifts", i + 1);
            match checker.check(&self.engine, &VectorField::from_element(g.clone())?)? {
                LiftVerdict::Certified(c) => {
                    self.certificates.push(Certificate::witness(format!("generator {}", i + 1), &c));
                    self.check(name, Verdict::Pass, "");
                }
                _ => self.check(name, Verdict::Fail, "no witness"),
            }
        }
        self.outputs.insert("lift".into(), module_texts(&lift));
        if let Some(e) = &a.expect {
            let fl = self.fields(e)?;
            let expected = module_of(&embed_fields(fl, f.target())?, f.target())?;
            self.equal_modules(&format!("Lift({map_name}) = <{e}>"), &lift, &expected)?;
        }
        Ok(format!("{} by graph elimination", plural(lift.len(), "generator", "generators")))
    }

    fn transport(&mut self, a: &TaskArgs) -> Step<String> {
        let op = TaskOp::Transport;
        let get = |n: &str| self.m.map(n).map_or_else(|| usage(format!("unknown map `{n}`")), Ok);
        let h = get(self.name(&a.map, "map", op)?)?;
        let h_inv = get(self.name(&a.inverse, "inverse", op)?)?;
        let src_name = self.name(&a.fields, "fields", op)?;
        let want_name = self.name(&a.expect, "expect", op)?;
        let src = self.fields(src_name)?;
        let want = self.fields(want_name)?;
        match check_inverse(h, h_inv) {
            Ok(()) => self.check("inverse composes to the identity", Verdict::Pass, ""),
            Err(e) => {
                self.check("inverse composes to the identity", Verdict::Fail, e.to_string());
                return Ok("inverse check failed".into());
            }
        }
        if src.fields.len() != want.fields.len() {
            self.check(
                "table sizes",
                Verdict::Fail,
                format!("{} fields, {} expected", src.fields.len(), want.fields.len()),
            );
            return Ok("table sizes differ".into());
        }
        let mut ok = 0;
        for (i, eta) in embed_fields(src, h.source())?.iter().enumerate() {
            let moved = transport(eta, h, h_inv)?;
            if self.identity(format!("{} transports to {}", label(src_name, src, i), label(want_name, want, i)), moved.as_element(), want.fields[i].as_element())? {
                ok += 1;
            }
        }
        Ok(format!("{ok}/{} generators reproduced term for term", src.fields.len()))
    }

    fn combination(&mut self, a: &TaskArgs) -> Step<String> {
        let name = self.name(&a.combination, "combination", TaskOp::Combination)?;
        let decl = self
            .m
            .combination(name)
            .map_or_else(|| usage(format!("unknown combination `{name}`")), Ok)?;
        let u = self.unfolding(&decl.unfolding)?;
        let t = u.total().target();
        let fl = self.fields(&decl.fields)?;
        let want = self.fields(&decl.expect)?;
        let gens: Vec<ModuleElement> = embed_fields(fl, t)?.into_iter().map(VectorField::into_element).collect();
        let mut ok = 0;
        for (i, row) in decl.rows.iter().enumerate() {
            let coeffs = row
                .coefficients
                .iter()
                .map(|c| c.embed(t))
                .collect::<Result<Vec<_>, _>>()?;
            let comb = VectorField::from_element(ModuleElement::combination(t, t.len(), &coeffs, &gens)?)?;
            let projected = phi_project(&comb, u)?;
            if self.up_to_scalar(
                format!("combination {} projects to {}", i + 1, label(&decl.expect, want, i)),
                projected.as_element(),
                want.fields[i].as_element(),
                row.scalar.as_ref(),
            )? {
                ok += 1;
            }
        }
        Ok(format!("{ok}/{} combinations match up to the stated scalars", decl.rows.len()))
    }

    fn pipeline(&mut self, a: &TaskArgs) -> Step<String> {
        let op = TaskOp::FromUnfolding;
        let uname = self.name(&a.unfolding, "unfolding", op)?;
        let u = self.unfolding(uname)?;
        let fl = self.fields(self.name(&a.fields, "fields", op)?)?;
        let t = u.total().target();
        let lift_f = module_of(&embed_fields(fl, t)?, t)?;
        let out = lift_from_unfolding(&self.engine, u, &lift_f)?;
        self.check(
            "every input generator lifts over the unfolding",
            Verdict::Pass,
            format!("{} inputs", lift_f.len()),
        );
        for (i, c) in out.certificates.iter().enumerate() {
            self.certificates
                .push(Certificate::witness(format!("output generator {}", i + 1), c));
        }
        self.check(
            "every output generator lifts over the core",
            Verdict::Pass,
            format!("{} outputs", out.module.len()),
        );
        self.outputs.insert("lift".into(), module_texts(&out.module));
        let tau: Vec<Vec<String>> = tau_tilde(&out.module)
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        if !tau.is_empty() {
            self.outputs.insert("tau_tilde".into(), tau);
        }
        let core_t = u.core().target();
        if let Some(e) = &a.expect {
            let fl = self.fields(e)?;
            let expected = module_of(&embed_fields(fl, core_t)?, core_t)?;
            self.equal_modules(&format!("computed Lift = <{e}>"), &out.module, &expected)?;
        }
        if let Some(dname) = &a.divisor {
            let d = self.divisor(dname)?;
            let lm = derlog_delta(&self.engine, d)?;
            let derlog = embed_module(&lm.module, core_t)?;
            self.equal_modules(&format!("computed Lift = Derlog({dname})"), &out.module, &derlog)?;
        }
        Ok(format!(
            "{} of Lift from {} ({} after intersecting with G)",
            plural(out.module.len(), "generator", "generators"),
            plural(lift_f.len(), "input", "inputs"),
            out.intersection.len()
        ))
    }

    fn derlog(&mut self, a: &TaskArgs) -> Step<String> {
        let dname = self.name(&a.divisor, "divisor", TaskOp::Derlog)?;
        let d = self.divisor(dname)?;
        let mode = a.mode.unwrap_or(DerlogMode::Delta);
        let module = match mode {
            DerlogMode::Strict => derlog_strict(&self.engine, d)?,
            DerlogMode::Delta => derlog_delta(&self.engine, d)?.module,
        };
        for (i, g) in module.generators().iter().enumerate() {
            let eta = VectorField::from_element(g.clone())?;
            let name = format!("generator {} is logarithmic", i + 1);
            if let Some(alpha) = self.quotient(name.clone(), d, &eta)? {
                if mode == DerlogMode::Strict && !alpha.is_zero() {
                    self.check(name, Verdict::Fail, "strict generator with nonzero quotient");
                }
            }
        }
        self.outputs.insert("derlog".into(), module_texts(&module));
        if let Some(e) = &a.expect {
            let fl = self.fields(e)?;
            let expected = module_of(&embed_fields(fl, d.vars())?, d.vars())?;
            self.equal_modules(&format!("Derlog({dname}) = <{e}>"), &module, &expected)?;
        }
        Ok(format!("{} ({mode})", plural(module.len(), "generator", "generators")))
    }

    fn discriminant(&mut self, a: &TaskArgs) -> Step<String> {
        let map_name = self.name(&a.map, "map", TaskOp::Discriminant)?;
        let f = self
            .m
            .map(map_name)
            .map_or_else(|| usage(format!("unknown map `{map_name}`")), Ok)?;
        let d = self.divisor(self.name(&a.divisor, "divisor", TaskOp::Discriminant)?)?;
        let got = discriminant(&self.engine, f)?;
        self.outputs.insert("equation".into(), vec![vec![got.equation().to_string()]]);
        let one = |p: &Polynomial| ModuleElement::new(p.vars(), vec![p.clone()]);
        self.up_to_scalar(
            "eliminated discriminant matches the declared equation".into(),
            &one(got.equation())?,
            &one(d.equation())?,
            None,
        )?;
        Ok(format!("discriminant of {map_name}: {}", got.equation()))
    }

    fn euler(&mut self, a: &TaskArgs) -> Step<String> {
        let dname = self.name(&a.divisor, "divisor", TaskOp::Euler)?;
        let d = self.divisor(dname)?;
        let e = euler_field(d.vars())?;
        if let Some(x) = &a.expect {
            let fl = self.fields(x)?;
            self.identity(format!("Euler field = {}", label(x, fl, 0)), e.as_element(), fl.fields[0].as_element())?;
        }
        let deg = d.degree().expect("weighted divisor");
        let name = format!("e(h) = {deg}·h");
        if let Some(alpha) = self.quotient(name.clone(), d, &e)? {
            let want = Polynomial::constant(d.vars(), Rational::from_integer(deg.into()));
            if alpha != want {
                self.check(name, Verdict::Fail, format!("quotient {alpha}"));
            }
        }
        Ok(format!("Euler field {e}, weighted degree {deg}"))
    }

    fn augment(&mut self, a: &TaskArgs) -> Step<String> {
        let op = TaskOp::Augment;
        let aname = self.name(&a.augmentation, "augmentation", op)?;
        let decl = self
            .m
            .augmentation(aname)
            .map_or_else(|| usage(format!("unknown augmentation `{aname}`")), Ok)?;
        let Some(k) = a.k else { return usage("`augment` needs `k`") };
        if k == 0 {
            return usage("k must be at least 1");
        }
        let Some(check) = a.check else { return usage("`augment` needs `check`") };
        let u = self.unfolding(&decl.unfolding)?;
        let spec = AugmentationSpec::new(u, k)?;
        match check {
            AugmentCheck::Tilde => self.augment_tilde(decl, &spec),
            AugmentCheck::Pi2 => self.augment_pi2(decl, &spec),
            AugmentCheck::Descend => self.augment_descend(decl, &spec),
        }
    }

    fn augment_tilde(&mut self, decl: &AugmentationDecl, spec: &AugmentationSpec) -> Step<String> {
        let k = spec.k();
        let Some(inst) = decl.instance(k) else {
            return usage(format!("no instance for k = {k}"));
        };
        let big_h = self.divisor(&decl.divisor)?;
        let h = spec.lift_divisor(big_h)?;
        let t = spec.unfolding().total().target();
        let base = embed_fields(self.fields(&decl.base)?, t)?;
        let gens: Vec<ModuleElement> = base.iter().map(|f| f.as_element().clone()).collect();
        let expected = self.fields(&inst.expected)?;
        let at = spec.augmented().target();
        let mut ok = 0;
        for (i, r) in inst.recipes.iter().enumerate() {
            let coeffs = r
                .coefficients
                .iter()
                .map(|c| c.embed(t))
                .collect::<Result<Vec<_>, _>>()?;
            let comb = VectorField::from_element(ModuleElement::combination(t, t.len(), &coeffs, &gens)?)?;
            let label = label(&inst.expected, expected, i);
            let got = match r.mode {
                germlift::io::TransformMode::Tilde => spec.tilde(&comb)?,
                germlift::io::TransformMode::TildeDiv => spec.tilde_div(&comb)?,
            };
            let want = expected.fields[i].embed(at)?;
            let same = self.identity(format!("{} of recipe {} = {label}", r.mode, i + 1), got.as_element(), want.as_element())?;
            let logarithmic = self.quotient(format!("{label} is logarithmic along h"), &h, &want)?.is_some();
            if same && logarithmic {
                ok += 1;
            }
        }
        let dphi = spec.phi_prime();
        for (j, eta) in base.iter().enumerate() {
            let Some(alpha) = big_h.quotient(eta)? else {
                self.check(format!("base field {} is logarithmic along H", j + 1), Verdict::Fail, "");
                continue;
            };
            let moved = spec.tilde(eta)?;
            let want = &dphi * &spec.substitute(&alpha)?;
            let name = format!("tilde of base field {} has quotient phi'(Z)·alpha(X, Z^{k})", j + 1);
            match self.quotient(name.clone(), &h, &moved)? {
                Some(q) if q == want => {}
                Some(q) => self.check(name, Verdict::Fail, format!("quotient {q}, expected {want}")),
                None => {}
            }
        }
        Ok(format!("{ok}/{} transformed fields reproduced at k = {k}", inst.recipes.len()))
    }

    fn augment_pi2(&mut self, decl: &AugmentationDecl, spec: &AugmentationSpec) -> Step<String> {
        let k = spec.k();
        let z = spec.z();
        let big_h = self.divisor(&decl.divisor)?;
        let t = spec.unfolding().total().target();
        let base = module_of(&embed_fields(self.fields(&decl.base)?, t)?, t)?;
        let computed_f = derlog_delta(&self.engine, big_h)?.module;
        self.equal_modules("Derlog(H) = declared Lift(F)", &computed_f, &base)?;
        let i_f = pi2_istar(&base, z)?;

        let af = spec.augmented();
        let h = spec.lift_divisor(big_h)?;
        let disc = discriminant(&self.engine, af)?;
        let one = |p: &Polynomial| ModuleElement::new(p.vars(), vec![p.clone()]);
        self.up_to_scalar(
            format!("discriminant of A^{k}f = H(X, Z^{k})"),
            &one(disc.equation())?,
            &one(h.equation())?,
            None,
        )?;
        let lift_a = derlog_delta(&self.engine, &h)?.module;
        let direct = lift_direct(&self.engine, af)?;
        self.equal_modules(&format!("Lift(A^{k}f) by elimination = Derlog(h)"), &direct, &lift_a)?;
        if let Some(inst) = decl.instance(k) {
            let fl = self.fields(&inst.expected)?;
            let listed = module_of(&embed_fields(fl, af.target())?, af.target())?;
            self.equal_modules(&format!("Derlog(h) = <{}>", inst.expected), &lift_a, &listed)?;
        }
        let i_a = pi2_istar(&lift_a, z)?;
        self.outputs.insert("pi2_lift_F".into(), module_texts(&i_f));
        self.outputs.insert(format!("pi2_lift_A{k}f"), module_texts(&i_a));
        let same = self.equal_modules(&format!("pi2(i*(Lift(A^{k}f))) = pi2(i*(Lift(F)))"), &i_a, &i_f)?;
        if let Some(gens) = &decl.pi2 {
            let ring = gens.first().map_or_else(|| i_f.vars().clone(), |g| g.vars().clone());
            let expected = Submodule::ideal(&ring, gens.clone())?;
            self.equal_modules("pi2(i*(Lift(F))) = declared ideal", &embed_module(&i_f, &ring)?, &expected)?;
        }
        Ok(format!(
            "ideals {} at k = {k}",
            if same { "agree" } else { "differ" }
        ))
    }

    fn augment_descend(&mut self, decl: &AugmentationDecl, spec: &AugmentationSpec) -> Step<String> {
        let k = spec.k();
        let big_h = self.divisor(&decl.divisor)?;
        let h = spec.lift_divisor(big_h)?;
        let t = spec.unfolding().total().target();
        let at = spec.augmented().target();
        let base = embed_fields(self.fields(&decl.base)?, t)?;
        let mut done = 0;
        let mut descended = Vec::new();
        let z = spec.z();
        for (j, eta) in base.iter().enumerate() {
            // Fields tangent to {Λ = 0} go through tilde_div; tilde would
            // only give Z^(k-1) times that image.
            let (moved, via) = if eta.entry(z).set_zero(&[z]).is_zero() {
                (spec.tilde_div(eta)?, "tilde_div")
            } else {
                (spec.tilde(eta)?, "tilde")
            };
            let d = spec.descend(&moved, big_h)?;
            let name = format!("descend({via}(base field {})) = base field {}", j + 1, j + 1);
            if self.identity(name.clone(), d.eta.as_element(), eta.as_element())? && !d.remainder.is_zero() {
                self.check(name, Verdict::Fail, format!("nonzero remainder {}", d.remainder));
            }
            done += 1;
        }
        if let Some(inst) = decl.instance(k) {
            let fl = self.fields(&inst.expected)?;
            for (i, eta_bar) in embed_fields(fl, at)?.iter().enumerate() {
                let label = label(&inst.expected, fl, i);
                let d = spec.descend(eta_bar, big_h)?;
                self.quotient(format!("descent of {label} is logarithmic along H"), big_h, &d.eta)?;
                self.quotient(format!("remainder of {label} is logarithmic along h"), &h, &d.remainder)?;
                let retained = match d.mode {
                    DescentMode::Tilde => spec.tilde(&d.eta)?,
                    DescentMode::TildeDiv => spec.tilde_div(&d.eta)?,
                };
                let sum = retained.as_element().try_add(d.remainder.as_element())?;
                self.identity(format!("{label} = retained + remainder"), &sum, eta_bar.as_element())?;
                if k == 1 {
                    self.identity(format!("k = 1 leaves {label} unchanged"), d.eta.as_element(), eta_bar.as_element())?;
                }
                descended.push(texts(d.eta.as_element()));
                done += 1;
            }
        }
        self.outputs.insert("descended".into(), descended);
        Ok(format!("{done} fields descended at k = {k}"))
    }
}

/// Runs one task on a fresh engine.
pub fn run_task(m: &Manifest, task: &Task, opts: &Options) -> Result<Report, UsageError> {
    let start = Instant::now();
    let mut run = Run {
        m,
        engine: opts.engine(),
        checks: Vec::new(),
        certificates: Vec::new(),
        outputs: BTreeMap::new(),
    };
    let a = &task.args;
    let outcome = match task.op {
        TaskOp::LiftCheck => run.lift_check(a),
        TaskOp::LiftDirect => run.lift_direct(a),
        TaskOp::Transport => run.transport(a),
        TaskOp::Combination => run.combination(a),
        TaskOp::FromUnfolding => run.pipeline(a),
        TaskOp::Derlog => run.derlog(a),
        TaskOp::Discriminant => run.discriminant(a),
        TaskOp::Euler => run.euler(a),
        TaskOp::Augment => run.augment(a),
    };
    let summary = match outcome {
        Ok(s) => s,
        Err(Stop::Usage(msg)) => return Err(UsageError(msg)),
        Err(Stop::Engine(e)) if e.is_timeout() => {
            run.check("resource budget", Verdict::Timeout, e.to_string());
            "stopped by the resource budget".into()
        }
        Err(Stop::Engine(e)) => {
            run.check("computation", Verdict::Fail, e.to_string());
            format!("error: {e}")
        }
    };
    let verdict = match run.checks.iter().map(|c| c.verdict).max() {
        Some(v) => v,
        None => {
            run.check("checks", Verdict::Fail, "nothing was checked");
            Verdict::Fail
        }
    };
    let elapsed = start.elapsed();
    Ok(Report {
        schema: REPORT_SCHEMA,
        task: task.id.clone(),
        op: task.op.to_string(),
        verdict,
        summary,
        checks: run.checks,
        outputs: run.outputs,
        certificates: run.certificates,
        counters: run.engine.stats(),
        timing: opts.timing.then_some(elapsed.as_millis()),
        elapsed,
    })
}

/// Runs every task of the manifest in order, or those whose ids are listed.
pub fn run_manifest(m: &Manifest, only: &[String], opts: &Options) -> Result<Vec<Report>, UsageError> {
    for id in only {
        if m.task(id).is_none() {
            return Err(UsageError(format!("unknown task `{id}`")));
        }
    }
    m.tasks
        .iter()
        .filter(|t| only.is_empty() || only.contains(&t.id))
        .map(|t| run_task(m, t, opts))
        .collect()
}
