//! Self-contained certificates. Each one carries the variable names and the
//! polynomials it talks about as text, so it can be re-checked from a JSON
//! report alone by re-parsing and expanding.

use std::sync::Arc;

use germlift::germ::{MapGerm, VectorField};
use germlift::groebner::ModuleElement;
use germlift::io::print_poly;
use germlift::lift::LiftCertificate;
use germlift::poly::{Polynomial, Rational, VarSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `df · ξ = η ∘ f`.
    Witness {
        label: String,
        source: Vec<String>,
        target: Vec<String>,
        components: Vec<String>,
        eta: Vec<String>,
        xi: Vec<String>,
    },
    /// `η(h) = α h`.
    Quotient {
        label: String,
        ring: Vec<String>,
        equation: String,
        eta: Vec<String>,
        alpha: String,
    },
    /// `element = Σ coefficients[i] · generators[i]`.
    Membership {
        label: String,
        ring: Vec<String>,
        element: Vec<String>,
        generators: Vec<Vec<String>>,
        coefficients: Vec<String>,
    },
    /// `lhs = scalar · rhs`.
    Scalar {
        label: String,
        ring: Vec<String>,
        lhs: Vec<String>,
        rhs: Vec<String>,
        scalar: String,
    },
    /// `lhs = rhs` term for term.
    Identity {
        label: String,
        ring: Vec<String>,
        lhs: Vec<String>,
        rhs: Vec<String>,
    },
    /// Evidence attached to a failed membership: the nonzero normal form.
    NormalForm { label: String, normal_form: Vec<String> },
}

fn texts(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(print_poly).collect()
}

fn names(v: &VarSet) -> Vec<String> {
    v.names().to_vec()
}

fn ring(names: &[String]) -> Result<Arc<VarSet>, String> {
    VarSet::new(names.iter().cloned()).map_err(|e| e.to_string())
}

fn parse(text: &str, ring: &Arc<VarSet>) -> Result<Polynomial, String> {
    Polynomial::parse(text, ring).map_err(|e| format!("`{text}`: {e}"))
}

fn parse_all(texts: &[String], ring: &Arc<VarSet>) -> Result<Vec<Polynomial>, String> {
    texts.iter().map(|t| parse(t, ring)).collect()
}

fn element(texts: &[String], ring: &Arc<VarSet>) -> Result<ModuleElement, String> {
    ModuleElement::new(ring, parse_all(texts, ring)?).map_err(|e| e.to_string())
}

fn rational(text: &str) -> Result<Rational, String> {
    let empty = ring(&[])?;
    Ok(parse(text, &empty)?.constant_term())
}

impl Certificate {
    pub fn witness(label: impl Into<String>, c: &LiftCertificate) -> Self {
        let f = c.germ();
        Certificate::Witness {
            label: label.into(),
            source: names(f.source()),
            target: names(f.target()),
            components: texts(f.components()),
            eta: texts(c.eta().entries()),
            xi: texts(c.xi().entries()),
        }
    }

    pub fn quotient(label: impl Into<String>, h: &Polynomial, eta: &VectorField, alpha: &Polynomial) -> Self {
        Certificate::Quotient {
            label: label.into(),
            ring: names(h.vars()),
            equation: print_poly(h),
            eta: texts(eta.entries()),
            alpha: print_poly(alpha),
        }
    }

    pub fn membership(
        label: impl Into<String>,
        element: &ModuleElement,
        generators: &[ModuleElement],
        coefficients: &[Polynomial],
    ) -> Self {
        Certificate::Membership {
            label: label.into(),
            ring: names(element.vars()),
            element: texts(element.entries()),
            generators: generators.iter().map(|g| texts(g.entries())).collect(),
            coefficients: texts(coefficients),
        }
    }

    pub fn scalar(label: impl Into<String>, lhs: &ModuleElement, rhs: &ModuleElement, scalar: &Rational) -> Self {
        Certificate::Scalar {
            label: label.into(),
            ring: names(lhs.vars()),
            lhs: texts(lhs.entries()),
            rhs: texts(rhs.entries()),
            scalar: scalar.to_string(),
        }
    }

    pub fn identity(label: impl Into<String>, lhs: &ModuleElement, rhs: &ModuleElement) -> Self {
        Certificate::Identity {
            label: label.into(),
            ring: names(lhs.vars()),
            lhs: texts(lhs.entries()),
            rhs: texts(rhs.entries()),
        }
    }

    pub fn normal_form(label: impl Into<String>, nf: &ModuleElement) -> Self {
        Certificate::NormalForm {
            label: label.into(),
            normal_form: texts(nf.entries()),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Certificate::Witness { label, .. }
            | Certificate::Quotient { label, .. }
            | Certificate::Membership { label, .. }
            | Certificate::Scalar { label, .. }
            | Certificate::Identity { label, .. }
            | Certificate::NormalForm { label, .. } => label,
        }
    }

    /// Whether this certificate asserts an identity (everything except
    /// [`Certificate::NormalForm`]).
    pub fn is_positive(&self) -> bool {
        !matches!(self, Certificate::NormalForm { .. })
    }

    /// Re-checks the identity by expansion. A normal form records a failure
    /// and has nothing to re-check; it verifies when it is nonzero.
    pub fn verify(&self) -> Result<(), String> {
        let holds = match self {
            Certificate::Witness {
                source,
                target,
                components,
                eta,
                xi,
                ..
            } => {
                let (s, t) = (ring(source)?, ring(target)?);
                let f = MapGerm::new(&s, &t, parse_all(components, &s)?).map_err(|e| e.to_string())?;
                let eta = VectorField::new(&t, parse_all(eta, &t)?).map_err(|e| e.to_string())?;
                let xi = VectorField::new(&s, parse_all(xi, &s)?).map_err(|e| e.to_string())?;
                f.tf(&xi).map_err(|e| e.to_string())? == f.wf(&eta).map_err(|e| e.to_string())?
            }
            Certificate::Quotient {
                ring: r,
                equation,
                eta,
                alpha,
                ..
            } => {
                let r = ring(r)?;
                let h = parse(equation, &r)?;
                let eta = VectorField::new(&r, parse_all(eta, &r)?).map_err(|e| e.to_string())?;
                eta.apply(&h).map_err(|e| e.to_string())? == &parse(alpha, &r)? * &h
            }
            Certificate::Membership {
                ring: r,
                element: v,
                generators,
                coefficients,
                ..
            } => {
                let r = ring(r)?;
                let v = element(v, &r)?;
                let gens = generators
                    .iter()
                    .map(|g| element(g, &r))
                    .collect::<Result<Vec<_>, _>>()?;
                let cs = parse_all(coefficients, &r)?;
                ModuleElement::combination(&r, v.rank(), &cs, &gens).map_err(|e| e.to_string())? == v
            }
            Certificate::Scalar {
                ring: r, lhs, rhs, scalar, ..
            } => {
                let r = ring(r)?;
                element(lhs, &r)? == element(rhs, &r)?.scale(&rational(scalar)?)
            }
            Certificate::Identity { ring: r, lhs, rhs, .. } => {
                let r = ring(r)?;
                element(lhs, &r)? == element(rhs, &r)?
            }
            Certificate::NormalForm { normal_form, .. } => normal_form.iter().any(|p| p != "0"),
        };
        if holds {
            Ok(())
        } else {
            Err(format!("certificate `{}` does not hold", self.label()))
        }
    }
}
