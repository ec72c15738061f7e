mod common;

use common::*;
use germlift::augment::AugmentationSpec;
use germlift::germ::{check_inverse, transport, MapGerm, Unfolding, VectorField};
use germlift::groebner::ModuleElement;
use germlift::poly::Polynomial;
use germlift::Error;
use proptest::prelude::*;

fn map(src: &std::sync::Arc<germlift::poly::VarSet>, tgt: &std::sync::Arc<germlift::poly::VarSet>, comps: &[&str]) -> MapGerm {
    MapGerm::new(src, tgt, comps.iter().map(|c| p(c, src)).collect()).unwrap()
}

fn assert_matrix<const N: usize>(m: &[Vec<Polynomial>], expected: &[[&str; N]]) {
    assert_eq!(m.len(), expected.len());
    for (row, want) in m.iter().zip(expected) {
        let r = row[0].vars();
        assert_eq!(row, &want.iter().map(|w| p(w, r)).collect::<Vec<_>>());
    }
}

#[test]
fn jacobian_examples() {
    let hk = fixture("hk.manifest");
    assert_matrix(&hk.map("H2").unwrap().jacobian(), &[["1", "0"], ["0", "3*y^2"], ["y", "5*y^4 + x"]]);
    let r = ring(&["x", "y"]);
    assert_matrix(&MapGerm::identity(&r).jacobian(), &[["1", "0"], ["0", "1"]]);
    let aug = fixture("augment.manifest");
    assert_matrix(
        &aug.map("F").unwrap().jacobian(),
        &[["4*x^3 + y + 2*z*x", "x", "x^2"], ["0", "1", "0"], ["0", "0", "1"]],
    );
}

#[test]
fn tf_generator_examples() {
    let small = fixture("small.manifest");
    let fold = small.map("fold").unwrap();
    assert_eq!(fold.tf_generators().generators(), [elem(fold.source(), &["2*x"])]);

    let hk = fixture("hk.manifest");
    let h2 = hk.map("H2").unwrap();
    let s = h2.source();
    assert_eq!(
        h2.tf_generators().generators(),
        [elem(s, &["1", "0", "y"]), elem(s, &["0", "3*y^2", "5*y^4 + x"])]
    );

    let (src, tgt) = (ring(&["x"]), ring(&["X", "Y"]));
    let immersion = map(&src, &tgt, &["x", "0"]);
    assert_eq!(immersion.tf_generators().generators(), [elem(&src, &["1", "0"])]);
}

#[test]
fn wf_examples() {
    let aug = fixture("augment.manifest");
    let f = aug.map("F").unwrap();
    let e = field(f.target(), &["4*X", "3*Y", "2*Z"]);
    assert_eq!(
        f.wf(&e).unwrap(),
        elem(f.source(), &["4*x^4 + 4*x*y + 4*x^2*z", "3*y", "2*z"])
    );
    let c = field(f.target(), &["1", "-2", "1/3"]);
    assert_eq!(f.wf(&c).unwrap(), elem(f.source(), &["1", "-2", "1/3"]));

    let (src, tgt) = (ring(&["x", "l"]), ring(&["X", "L"]));
    let g = map(&src, &tgt, &["x", "l^2"]);
    assert_eq!(g.wf(&field(&tgt, &["0", "L"])).unwrap(), elem(&src, &["0", "l^2"]));
    assert!(g.wf(&field(&src, &["0", "l"])).is_err());
}

/// The table of `Lift(F_k)` generators, as printed for general `k`:
/// `η_ke, η¹_k1, η²_k1, η³_k1, η¹_k2, η²_k2, η³_k2`.
fn lift_fk_table(k: u32) -> Vec<[String; 5]> {
    let (a, b, c, d) = (k - 1, k - 2, 2 * k - 2, 2 * k - 3);
    let k = k as i64;
    let k1 = k - 1;
    vec![
        [
            "2*U1".into(),
            "2*V1".into(),
            format!("V2 - {}*W1^{a}", 3 * k - 4),
            "3*W1".into(),
            "3*W2".into(),
        ],
        [
            "4*U1^2".into(),
            format!("-3*U1*V1 + 3*V2*W1 + 3*W1^{k}"),
            format!("-5*U1*V2 - {}*U1*W1^{a} - 3*W2", 6 * k - 1),
            "6*U1*W1".into(),
            "-3*V1*W1 + 2*U1*W2".into(),
        ],
        [
            "6*U1".into(),
            "-3*V1".into(),
            format!("-6*V2 - {}*W1^{a}", 9 * k - 3),
            "9*W1".into(),
            "0".into(),
        ],
        [
            "9*V1".into(),
            format!("-6*V2^2 - 12*V2*W1^{a} - 6*W1^{c}"),
            format!(
                "-{}*W1^{b}*W2 - {}*U1*V2*W1^{b} - {}*U1*W1^{d}",
                9 * k1,
                3 * k1,
                3 * k1
            ),
            format!("9*W2 + 3*U1*V2 + 3*U1*W1^{a}"),
            format!("3*V1*V2 + 3*V1*W1^{a}"),
        ],
        [
            "0".into(),
            format!("-3*U1*V2 - 3*U1*W1^{a} - 3*W2"),
            "3*V1".into(),
            "0".into(),
            format!("-3*V2*W1 - 3*W1^{k}"),
        ],
        [
            "-9*W1".into(),
            format!("2*U1*V2 + 2*U1*W1^{a}"),
            format!("-3*V1 - {}*U1^2*W1^{b}", 2 * k1),
            "2*U1^2".into(),
            format!("6*V2*W1 + 6*W1^{k} + 2*U1*V1"),
        ],
        [
            format!("-9*W2 - 3*U1*V2 - 3*U1*W1^{a}"),
            format!("-3*V1*V2 - 3*V1*W1^{a}"),
            format!("-{}*U1*V1*W1^{b}", 3 * k1),
            "3*U1*V1".into(),
            format!("6*V2*W2 + 6*W1^{a}*W2 + 3*V1^2"),
        ],
    ]
}

#[test]
fn transport_reproduces_the_lift_fk_table() {
    for k in 2..=5u32 {
        let m = germlift::fixtures::load(&format!("hk{}.manifest", if k == 2 { String::new() } else { k.to_string() }))
            .unwrap();
        let (g, g_inv) = (m.map(&format!("G{k}")).unwrap(), m.map(&format!("G{k}_inv")).unwrap());
        let base = fields(&m, "lift_F");
        for (i, (eta, row)) in base.iter().zip(lift_fk_table(k)).enumerate() {
            let t = transport(eta, g, g_inv).unwrap();
            let want: Vec<&str> = row.iter().map(String::as_str).collect();
            assert_eq!(t, field(g.target(), &want), "k = {k}, generator {i}");
        }
    }
}

#[test]
fn transport_examples() {
    let hk = fixture("hk.manifest");
    let (g, g_inv) = (hk.map("G2").unwrap(), hk.map("G2_inv").unwrap());
    let eta_e = &fields(&hk, "lift_F")[0];
    assert_eq!(
        transport(eta_e, g, g_inv).unwrap(),
        field(g.target(), &["2*U1", "2*V1", "V2 - 2*W1", "3*W1", "3*W2"])
    );
    let id = MapGerm::identity(eta_e.space());
    assert_eq!(&transport(eta_e, &id, &id).unwrap(), eta_e);

    // G2 is not its own inverse
    assert!(check_inverse(g, g).is_err());
    let bad = map(g.target(), g.source(), &["U1", "V1", "V2 + 2*W1", "W1", "W2"]);
    assert!(matches!(transport(eta_e, g, &bad), Err(Error::InverseCheckFailed { .. })));
}

#[test]
fn restriction_examples() {
    let hk = fixture("hk.manifest");
    let u = hk.unfolding("F2u").unwrap();
    assert_eq!(u.source_params(), [0, 2]);
    assert_eq!(u.target_params(), [0, 2]);
    let core = u.restrict().unwrap();
    assert_matrix(&[core.components().to_vec()], &[["x", "y^3", "y^5 + x*y"]]);

    let small = fixture("small.manifest");
    let trivial = small.unfolding("trivial").unwrap();
    assert_eq!(trivial.restrict().unwrap().components(), small.map("fold").unwrap().components());

    let aug = fixture("augment.manifest");
    for k in 1..=3 {
        let a = AugmentationSpec::new(aug.unfolding("Fu").unwrap(), k).unwrap();
        let big = a.build_af().unwrap();
        assert_eq!(big.restrict().unwrap().components(), a.augmented().components(), "k = {k}");
    }
}

#[test]
fn unfolding_law_is_enforced() {
    let (src, tgt) = (ring(&["x", "l"]), ring(&["X", "L"]));
    let (cs, ct) = (ring(&["x"]), ring(&["X"]));
    let core = map(&cs, &ct, &["x^2"]);
    let good = map(&src, &tgt, &["x^2 + l*x", "l"]);
    assert!(Unfolding::new(good, vec![1], vec![1], core.clone()).is_ok());
    let bent = map(&src, &tgt, &["x^2 + l*x", "l + x^2"]);
    assert!(Unfolding::new(bent, vec![1], vec![1], core.clone()).is_err());
    let wrong_core = map(&src, &tgt, &["x^3 + l*x", "l"]);
    assert!(Unfolding::new(wrong_core, vec![1], vec![1], core).is_err());
}

fn ring5() -> std::sync::Arc<germlift::poly::VarSet> {
    fixture("hk.manifest").ring("FTgt").unwrap().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transport_is_a_module_morphism(a in terms(5, 2, 3), b in terms(5, 2, 3), i in 0usize..7, j in 0usize..7) {
        let hk = fixture("hk.manifest");
        let (g, g_inv) = (hk.map("G2").unwrap(), hk.map("G2_inv").unwrap());
        let base = fields(&hk, "lift_F");
        let r = ring5();
        let (a, b) = (from_terms(&r, &a), from_terms(&r, &b));
        let sum = base[i].as_element().mul_poly(&a).unwrap().try_add(&base[j].as_element().mul_poly(&b).unwrap()).unwrap();
        let lhs = transport(&VectorField::from_element(sum).unwrap(), g, g_inv).unwrap();
        let pull = g_inv.pullback();
        let (pa, pb) = (pull.apply(&a).unwrap(), pull.apply(&b).unwrap());
        let rhs = transport(&base[i], g, g_inv).unwrap().as_element().mul_poly(&pa).unwrap()
            .try_add(&transport(&base[j], g, g_inv).unwrap().as_element().mul_poly(&pb).unwrap()).unwrap();
        prop_assert_eq!(lhs.as_element(), &rhs);
    }

    #[test]
    fn transport_back_is_the_inverse(entries in prop::collection::vec(terms(5, 3, 3), 5)) {
        let hk = fixture("hk.manifest");
        let (g, g_inv) = (hk.map("G2").unwrap(), hk.map("G2_inv").unwrap());
        let r = ring5();
        let eta = VectorField::new(&r, entries.iter().map(|t| from_terms(&r, t)).collect()).unwrap();
        let there = transport(&eta, g, g_inv).unwrap();
        prop_assert_eq!(transport(&there, g_inv, g).unwrap(), eta);
    }

    #[test]
    fn jacobian_chain_rule(f in prop::collection::vec(germ_terms(2, 3, 3), 2), g in prop::collection::vec(germ_terms(2, 3, 3), 2)) {
        let (a, b, c) = (ring(&["x", "y"]), ring(&["u", "v"]), ring(&["s", "t"]));
        let f = MapGerm::new(&a, &b, f.iter().map(|t| from_terms(&a, t)).collect()).unwrap();
        let g = MapGerm::new(&b, &c, g.iter().map(|t| from_terms(&b, t)).collect()).unwrap();
        let composed = g.compose(&f).unwrap().jacobian();
        let pull = f.pullback();
        let dg: Vec<Vec<_>> = g.jacobian().iter().map(|row| row.iter().map(|e| pull.apply(e).unwrap()).collect()).collect();
        let df = f.jacobian();
        for i in 0..2 {
            for j in 0..2 {
                let prod = (0..2).fold(Polynomial::zero(&a), |acc, l| &acc + &(&dg[i][l] * &df[l][j]));
                prop_assert_eq!(&composed[i][j], &prod);
            }
        }
        // tf of a composite is df applied to it, entry by entry
        let xi = ModuleElement::new(&a, vec![from_terms(&a, &vec![(vec![1, 0], 1)]), Polynomial::one(&a)]).unwrap();
        let tf = f.tf(&VectorField::from_element(xi.clone()).unwrap()).unwrap();
        for (l, row) in df.iter().enumerate() {
            prop_assert_eq!(tf.entry(l), &(&(&row[0] * xi.entry(0)) + &(&row[1] * xi.entry(1))));
        }
    }
}
