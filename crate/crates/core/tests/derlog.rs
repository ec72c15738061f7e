mod common;

use common::*;
use germlift::augment::{pi2_istar, AugmentationSpec, DescentMode};
use germlift::derlog::{derlog_delta, derlog_strict, discriminant, euler_field, Divisor};
use germlift::germ::VectorField;
use germlift::groebner::{Engine, Submodule};
use germlift::io::Manifest;
use germlift::lift::lift_direct;
use germlift::poly::{int, weighted_degree_check, Grading, Polynomial};
use germlift::Error;

fn engine() -> Engine {
    Engine::default()
}

fn aug() -> Manifest {
    fixture("augment.manifest")
}

fn spec(m: &Manifest, k: u32) -> AugmentationSpec {
    AugmentationSpec::new(m.unfolding("Fu").unwrap(), k).unwrap()
}

/// `η` re-expressed over the fixture ring of the same name.
fn over(eta: &VectorField, m: &Manifest, ring_name: &str) -> VectorField {
    eta.embed(m.ring(ring_name).unwrap()).unwrap()
}

#[test]
fn strict_derlog_examples() {
    let e = engine();
    let t = ring(&["X", "Y"]);
    let circle = derlog_strict(&e, &Divisor::new(p("X^2 + Y^2", &t)).unwrap()).unwrap();
    assert!(e.equal(&circle, &module(&t, 2, &[&["Y", "-X"]])).unwrap());
    let cross = derlog_strict(&e, &Divisor::new(p("X*Y", &t)).unwrap()).unwrap();
    assert!(e.contains(&cross, &elem(&t, &["X", "-Y"])).unwrap());

    // Derlog(Δ) = ⟨e⟩ ⊕ Derlog(h) for the quasihomogeneous H
    let m = aug();
    let h = m.divisor("H").unwrap();
    let strict = derlog_strict(&e, h).unwrap();
    let euler = euler_field(h.vars()).unwrap();
    assert!(!e.contains(&strict, euler.as_element()).unwrap());
    for g in strict.generators() {
        assert!(VectorField::from_element(g.clone()).unwrap().apply(h.equation()).unwrap().is_zero());
    }
    let mut gens = strict.generators().to_vec();
    gens.push(euler.into_element());
    let sum = Submodule::new(h.vars(), 3, gens).unwrap();
    assert!(e.equal(&sum, &derlog_delta(&e, h).unwrap().module).unwrap());
}

#[test]
fn smooth_divisor() {
    let e = engine();
    let t = ring(&["X", "Y", "Z"]);
    let m = derlog_delta(&e, &Divisor::new(p("X", &t)).unwrap()).unwrap().module;
    assert!(e.equal(&m, &module(&t, 3, &[&["X", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]])).unwrap());
}

#[test]
fn derlog_of_the_augmentation_divisors() {
    let e = engine();
    let m = aug();
    let cases = [("H", "etas"), ("h1", "etas_tilde_1"), ("h2", "etas_tilde_2"), ("h3", "etas_tilde_3")];
    for (div, listed) in cases {
        let d = m.divisor(div).unwrap();
        let log = derlog_delta(&e, d).unwrap();
        assert!(e.equal(&log.module, &m.field_list(listed).unwrap().module()).unwrap(), "{div}");
        for (g, alpha) in log.module.generators().iter().zip(&log.quotients) {
            let eta = VectorField::from_element(g.clone()).unwrap();
            let residual = &eta.apply(d.equation()).unwrap() - &(alpha * d.equation());
            assert!(residual.is_zero(), "{div}: {eta}");
        }
    }
}

#[test]
fn euler_examples() {
    let m = aug();
    let t = m.ring("FTgt").unwrap();
    assert_eq!(euler_field(t).unwrap(), field(t, &["4*X", "3*Y", "2*Z"]));
    let one = wring(&["X"], &[1]);
    assert_eq!(euler_field(&one).unwrap(), field(&one, &["X"]));
    assert!(euler_field(&ring(&["X"])).is_err());

    // e(h) = d·h for every quasihomogeneous divisor in the fixtures
    let mut seen = 0;
    for name in ["augment.manifest", "small.manifest"] {
        let m = fixture(name);
        for div in ["H", "Hf", "h1", "h2", "h3", "h4", "h5", "XY", "fold_disc"] {
            let Some(d) = m.divisor(div) else { continue };
            let Some(w) = d.vars().weights() else { continue };
            let Grading::Homogeneous(deg) = weighted_degree_check(d.equation(), w) else { continue };
            let e = euler_field(d.vars()).unwrap();
            assert_eq!(e.apply(d.equation()).unwrap(), d.equation().scale(&int(deg as i64)), "{div}");
            seen += 1;
        }
    }
    assert!(seen >= 8);
    let h = m.divisor("H").unwrap();
    assert_eq!(h.degree(), Some(12));
}

#[test]
fn discriminant_examples() {
    let e = engine();
    let small = fixture("small.manifest");
    let fold = small.map("fold").unwrap();
    assert_eq!(discriminant(&e, fold).unwrap().equation(), &p("X", fold.target()));

    let m = aug();
    let big_h = discriminant(&e, m.map("F").unwrap()).unwrap();
    let t = m.ring("FTgt").unwrap();
    assert_eq!(big_h.equation(), &p("256*X^3 + 27*Y^4 + 144*X*Y^2*Z + 128*X^2*Z^2 + 16*X*Z^4 + 4*Y^2*Z^3", t));

    let a2 = spec(&m, 2);
    let by_elimination = discriminant(&e, a2.augmented()).unwrap();
    let by_substitution = a2.substitute(big_h.equation()).unwrap();
    assert_eq!(by_elimination.equation(), &by_substitution);
    let t2 = m.ring("A2Tgt").unwrap();
    assert_eq!(&by_substitution.embed(t2).unwrap(), m.divisor("h2").unwrap().equation());
}

#[test]
fn augmented_maps() {
    let m = aug();
    let a2 = spec(&m, 2);
    let f = a2.augmented();
    let want = ["x^4 + y*x + z^2*x^2", "y", "z"];
    assert_eq!(f.components(), want.map(|c| p(c, f.source())));
    let a1 = spec(&m, 1);
    let big = m.map("F").unwrap();
    assert_eq!(
        a1.augmented().components().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        big.components().iter().map(|c| c.to_string()).collect::<Vec<_>>()
    );

    // AF(x, z, μ) = (f_{z^2 + μ}(x), z, μ)
    let af = a2.build_af().unwrap();
    let s = af.total().source();
    assert_eq!(
        af.total().components(),
        ["x^4 + y*x + (z^2 + mu)*x^2", "y", "z", "mu"].map(|c| p(c, s))
    );
    assert!(AugmentationSpec::new(m.unfolding("Fu").unwrap(), 0).is_err());
}

#[test]
fn tilde_examples() {
    let m = aug();
    let etas = fields(&m, "etas");
    let a2 = spec(&m, 2);
    let t2 = a2.augmented().target();
    assert_eq!(a2.tilde(&etas[1]).unwrap(), field(t2, &["-(18*Y^2*Z + 32*X*Z^3)", "24*Y*Z^3", "48*X + 4*Z^4"]));
    let a1 = spec(&m, 1);
    for eta in &etas {
        assert_eq!(over(&a1.tilde(eta).unwrap(), &m, "FTgt"), *eta);
    }
    for k in 2..=3i64 {
        let a = spec(&m, k as u32);
        let t = a.augmented().target();
        let k_euler = etas[0].as_element().scale(&int(k));
        let got = a.tilde_div(&VectorField::from_element(k_euler).unwrap()).unwrap();
        assert_eq!(got, field(t, &[&format!("{}*X", 4 * k), &format!("{}*Y", 3 * k), "2*Z"]));
        let plain = a.tilde(&etas[0]).unwrap();
        assert_eq!(plain.entry(0), &p(&format!("{}*X*Z^{}", 4 * k, k - 1), t));
    }
}

#[test]
fn tilde_div_examples() {
    let m = aug();
    let etas = fields(&m, "etas");
    let a2 = spec(&m, 2);
    let t = m.ring("FTgt").unwrap();
    // ξ = kYη² − 8kXη³ at k = 2
    let xi = etas[1]
        .as_element()
        .mul_poly(&p("2*Y", t))
        .unwrap()
        .try_sub(&etas[2].as_element().mul_poly(&p("16*X", t)).unwrap())
        .unwrap();
    let got = a2.tilde_div(&VectorField::from_element(xi).unwrap()).unwrap();
    assert_eq!(over(&got, &m, "A2Tgt"), fields(&m, "etas_tilde_2")[3]);

    let flat = field(t, &["X*Y", "Z^3", "0"]);
    assert_eq!(over(&spec(&m, 1).tilde_div(&flat).unwrap(), &m, "FTgt"), flat);
    assert!(matches!(a2.tilde_div(&etas[1]), Err(Error::NotDivisible(_))));
}

#[test]
fn listed_recipes_reproduce_the_instances() {
    let m = aug();
    let decl = m.augmentation("A").unwrap();
    let etas = fields(&m, "etas");
    let t = m.ring("FTgt").unwrap();
    for k in 1..=5 {
        let inst = decl.instance(k).unwrap();
        let a = spec(&m, k);
        let expected = fields(&m, &inst.expected);
        for (recipe, want) in inst.recipes.iter().zip(&expected) {
            let combo = recipe
                .coefficients
                .iter()
                .zip(&etas)
                .fold(germlift::groebner::ModuleElement::zero(t, 3), |acc, (c, eta)| {
                    acc.try_add(&eta.as_element().mul_poly(c).unwrap()).unwrap()
                });
            let combo = VectorField::from_element(combo).unwrap();
            let got = match recipe.mode {
                germlift::io::TransformMode::Tilde => a.tilde(&combo).unwrap(),
                germlift::io::TransformMode::TildeDiv => a.tilde_div(&combo).unwrap(),
            };
            assert_eq!(&over(&got, &m, &format!("A{k}Tgt")), want, "k = {k}");
        }
    }
}

#[test]
fn forward_property_on_computed_derlog() {
    let e = engine();
    let m = aug();
    let big_h = m.divisor("H").unwrap();
    let log = derlog_delta(&e, big_h).unwrap();
    for k in 2..=3 {
        let a = spec(&m, k);
        let h = a.lift_divisor(big_h).unwrap();
        for (g, alpha) in log.module.generators().iter().zip(&log.quotients) {
            let tilde = a.tilde(&VectorField::from_element(g.clone()).unwrap()).unwrap();
            // η̃(h) = φ′ α̃ h
            let q = h.quotient(&tilde).unwrap().expect("divisible by h");
            assert_eq!(q, &a.phi_prime() * &a.substitute(alpha).unwrap(), "k = {k}");
            assert!(q.div_exact(&a.phi_prime()).is_some());
        }
    }
}

#[test]
fn pi2_examples() {
    let e = engine();
    let m = aug();
    let f_tgt = m.ring("fTgt").unwrap();
    let xy = Submodule::ideal(f_tgt, vec![p("X", f_tgt), p("Y", f_tgt)]).unwrap();
    let from_f = pi2_istar(&m.field_list("etas").unwrap().module(), 2).unwrap();
    assert!(e.equal(&from_f.clone(), &xy).unwrap());
    assert_eq!(
        from_f.ideal_generators(),
        vec![p("48*X", f_tgt), p("6*Y", f_tgt)]
    );
    let t = m.ring("FTgt").unwrap();
    let zero = pi2_istar(&Submodule::zero(t, 3), 2).unwrap();
    assert!(zero.is_empty());

    for k in 2..=3 {
        let listed = pi2_istar(&m.field_list(&format!("etas_tilde_{k}")).unwrap().module(), 2).unwrap();
        let computed = pi2_istar(&derlog_delta(&e, m.divisor(&format!("h{k}")).unwrap()).unwrap().module, 2).unwrap();
        let listed = Submodule::ideal(f_tgt, listed.ideal_generators().iter().map(|g| g.embed(f_tgt).unwrap()).collect()).unwrap();
        let computed =
            Submodule::ideal(f_tgt, computed.ideal_generators().iter().map(|g| g.embed(f_tgt).unwrap()).collect()).unwrap();
        assert!(e.equal(&listed, &computed).unwrap() && e.equal(&listed, &xy).unwrap(), "k = {k}");
    }
}

#[test]
fn pi2_of_the_augmented_lift_equals_pi2_of_lift_f() {
    let e = engine();
    let m = aug();
    let a = spec(&m, 2);
    let lift_af = lift_direct(&e, a.augmented()).unwrap();
    let lift_f = m.field_list("etas").unwrap().module();
    let f_tgt = m.ring("fTgt").unwrap();
    let ideal = |s: Submodule| Submodule::ideal(f_tgt, s.ideal_generators().iter().map(|g| g.embed(f_tgt).unwrap()).collect()).unwrap();
    let (left, right) = (ideal(pi2_istar(&lift_af, 2).unwrap()), ideal(pi2_istar(&lift_f, 2).unwrap()));
    assert!(e.equal(&left, &right).unwrap());
}

#[test]
fn descend_examples() {
    let m = aug();
    let etas = fields(&m, "etas");
    let big_h = m.divisor("H").unwrap();
    let a2 = spec(&m, 2);
    let d = a2.descend(&fields(&m, "etas_tilde_2")[1], big_h).unwrap();
    assert_eq!(d.mode, DescentMode::Tilde);
    assert_eq!(over(&d.eta, &m, "FTgt"), etas[1]);
    assert!(d.remainder.is_zero());

    let d = a2.descend(&fields(&m, "etas_tilde_2")[3], big_h).unwrap();
    assert_eq!(d.mode, DescentMode::TildeDiv);
    let eta = over(&d.eta, &m, "FTgt");
    assert_eq!(eta.apply(big_h.equation()).unwrap(), &d.quotient * big_h.equation());
    assert!(eta.entry(2).set_zero(&[2]).is_zero());

    let a1 = spec(&m, 1);
    for (i, eta_bar) in fields(&m, "etas_tilde_1").iter().enumerate() {
        let d = a1.descend(&over(eta_bar, &m, "FTgt"), big_h).unwrap();
        assert_eq!(over(&d.eta, &m, "FTgt"), over(eta_bar, &m, "FTgt"), "generator {i}");
    }

    let not_log = field(m.ring("A2Tgt").unwrap(), &["1", "0", "0"]);
    assert!(matches!(a2.descend(&not_log, big_h), Err(Error::NotLogarithmic(_))));
}

#[test]
fn descend_inverts_tilde_and_tilde_recovers_modulo_derlog() {
    let e = engine();
    let m = aug();
    let big_h = m.divisor("H").unwrap();
    let etas = fields(&m, "etas");
    for k in 2..=3 {
        let a = spec(&m, k);
        let h = a.lift_divisor(big_h).unwrap();
        let derlog_af = derlog_delta(&e, &h).unwrap().module;
        for eta in &etas {
            let z = 2;
            let (image, mode) = if eta.entry(z).set_zero(&[z]).is_zero() {
                (a.tilde_div(eta).unwrap(), DescentMode::TildeDiv)
            } else {
                (a.tilde(eta).unwrap(), DescentMode::Tilde)
            };
            let d = a.descend(&image, big_h).unwrap();
            assert_eq!(d.mode, mode);
            assert_eq!(&over(&d.eta, &m, "FTgt"), eta, "k = {k}");
        }
        for eta_bar in fields(&m, &format!("etas_tilde_{k}")) {
            let eta_bar = eta_bar.embed(a.augmented().target()).unwrap();
            let d = a.descend(&eta_bar, big_h).unwrap();
            let back = match d.mode {
                DescentMode::Tilde => a.tilde(&d.eta).unwrap(),
                DescentMode::TildeDiv => a.tilde_div(&d.eta).unwrap(),
            };
            let diff = eta_bar.as_element().try_sub(back.as_element()).unwrap();
            assert_eq!(&diff, d.remainder.as_element());
            assert!(e.contains(&derlog_af, &diff).unwrap(), "k = {k}");
        }
    }
}

#[test]
fn divisor_requires_vanishing_at_the_origin() {
    let t = ring(&["X"]);
    assert!(Divisor::new(p("X + 1", &t)).is_err());
    assert!(Divisor::new(Polynomial::zero(&t)).is_err());
}
