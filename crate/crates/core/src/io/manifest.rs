//! The manifest format: named rings, maps, unfoldings, field tables,
//! divisors, augmentation and combination recipes, and an ordered task list,
//! stored as JSON.
//!
//! Every polynomial is parsed against its declared ring and every germ and
//! unfolding is validated at load time. Printing emits the canonical form,
//! so `load(print(m)) == m`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derlog::Divisor;
use crate::germ::{MapGerm, Unfolding, VectorField};
use crate::groebner::Submodule;
use crate::io::{parse_expr, parse_poly, print_poly};
use crate::poly::{Polynomial, Rational, VarSet};

pub const SCHEMA: &str = "germlift-manifest/1";

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid {object}: {message}")]
    Validation { object: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(object: impl Into<String>, message: impl fmt::Display) -> ManifestError {
    ManifestError::Validation {
        object: object.into(),
        message: message.to_string(),
    }
}

// ---- on-disk form ----

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default)]
    rings: BTreeMap<String, RawRing>,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    unfoldings: BTreeMap<String, RawUnfolding>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    fields: BTreeMap<String, RawFields>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    divisors: BTreeMap<String, RawDivisor>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    augmentations: BTreeMap<String, RawAugmentation>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    combinations: BTreeMap<String, RawCombination>,
    #[serde(default)]
    tasks: Vec<RawTask>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source: String,
    target: String,
    components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnfolding {
    map: String,
    core: String,
    source_params: Vec<String>,
    target_params: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    ring: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
    generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDivisor {
    ring: String,
    equation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAugmentation {
    unfolding: String,
    divisor: String,
    base: String,
    instances: Vec<RawInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi2: Option<RawIdeal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    ring: String,
    generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    k: u32,
    expected: String,
    recipes: Vec<RawRecipe>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecipe {
    mode: TransformMode,
    coefficients: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCombination {
    unfolding: String,
    fields: String,
    expect: String,
    rows: Vec<RawRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scalar: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskArgs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unfolding: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combination: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DerlogMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<AugmentCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    id: String,
    op: TaskOp,
    #[serde(flatten)]
    args: TaskArgs,
}

// ---- enums shared by both forms ----

macro_rules! kebab_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "expected one of {}",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

kebab_enum!(
    /// Operations a task can request.
    TaskOp {
        LiftCheck => "lift-check",
        LiftDirect => "lift-direct",
        Transport => "transport",
        Combination => "combination",
        FromUnfolding => "from-unfolding",
        Derlog => "derlog",
        Discriminant => "discriminant",
        Euler => "euler",
        Augment => "augment",
    }
);

kebab_enum!(
    /// How an augmentation recipe turns a combination of base fields into a
    /// field over the augmented target.
    TransformMode {
        Tilde => "tilde",
        TildeDiv => "tilde_div",
    }
);

kebab_enum!(
    DerlogMode {
        Strict => "strict",
        Delta => "delta",
    }
);

kebab_enum!(
    AugmentCheck {
        Tilde => "tilde",
        Pi2 => "pi2",
        Descend => "descend",
    }
);

// ---- resolved form ----

/// A named list of vector fields over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldList {
    pub ring: String,
    pub labels: Vec<String>,
    pub fields: Vec<VectorField>,
}

impl FieldList {
    pub fn space(&self) -> &Arc<VarSet> {
        self.fields[0].space()
    }

    /// Label of the `i`-th field, or its 1-based position.
    pub fn label(&self, i: usize) -> String {
        self.labels.get(i).cloned().unwrap_or_else(|| format!("#{}", i + 1))
    }

    pub fn module(&self) -> Submodule {
        let space = self.space();
        Submodule::new(space, space.len(), self.fields.iter().map(|f| f.as_element().clone()).collect())
            .expect("fields share one space")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recipe {
    pub mode: TransformMode,
    /// One coefficient per base field.
    pub coefficients: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentationInstance {
    pub k: u32,
    /// Name of the expected field list over the augmented target.
    pub expected: String,
    /// One recipe per expected field.
    pub recipes: Vec<Recipe>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentationDecl {
    pub unfolding: String,
    pub divisor: String,
    /// Field list generating `Derlog(Δ(F))`.
    pub base: String,
    pub instances: Vec<AugmentationInstance>,
    /// Expected `π₂(i*(Lift(F)))`, over the target without the parameter.
    pub pi2: Option<Vec<Polynomial>>,
}

impl AugmentationDecl {
    pub fn instance(&self, k: u32) -> Option<&AugmentationInstance> {
        self.instances.iter().find(|i| i.k == k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationRow {
    pub coefficients: Vec<Polynomial>,
    /// Claimed `c` with `π(Σ a_j η_j) = c · expected`; any nonzero `c`
    /// is accepted when absent.
    pub scalar: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationDecl {
    pub unfolding: String,
    pub fields: String,
    pub expect: String,
    pub rows: Vec<CombinationRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Task {
    pub id: String,
    pub op: TaskOp,
    pub args: TaskArgs,
}

/// A loaded and fully validated manifest.
#[derive(Clone, Debug)]
pub struct Manifest {
    raw: RawManifest,
    pub description: Option<String>,
    pub rings: BTreeMap<String, Arc<VarSet>>,
    pub maps: BTreeMap<String, MapGerm>,
    pub unfoldings: BTreeMap<String, Unfolding>,
    pub fields: BTreeMap<String, FieldList>,
    pub divisors: BTreeMap<String, Divisor>,
    pub augmentations: BTreeMap<String, AugmentationDecl>,
    pub combinations: BTreeMap<String, CombinationDecl>,
    pub tasks: Vec<Task>,
}

impl PartialEq for Manifest {
    /// Everything else is a function of the canonical raw form.
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl FromStr for Manifest {
    type Err = ManifestError;
    fn from_str(text: &str) -> Result<Self, ManifestError> {
        Manifest::parse(text)
    }
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Manifest::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawManifest = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if inner.is_syntax() || inner.is_eof() {
                ManifestError::Syntax {
                    line: inner.line(),
                    column: inner.column(),
                    message: inner.to_string(),
                }
            } else {
                ManifestError::Schema {
                    path,
                    message: inner.to_string(),
                }
            }
        })?;
        Resolver::default().run(raw)
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.raw).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn ring(&self, name: &str) -> Option<&Arc<VarSet>> {
        self.rings.get(name)
    }

    pub fn map(&self, name: &str) -> Option<&MapGerm> {
        self.maps.get(name)
    }

    pub fn unfolding(&self, name: &str) -> Option<&Unfolding> {
        self.unfoldings.get(name)
    }

    pub fn field_list(&self, name: &str) -> Option<&FieldList> {
        self.fields.get(name)
    }

    pub fn divisor(&self, name: &str) -> Option<&Divisor> {
        self.divisors.get(name)
    }

    pub fn augmentation(&self, name: &str) -> Option<&AugmentationDecl> {
        self.augmentations.get(name)
    }

    pub fn combination(&self, name: &str) -> Option<&CombinationDecl> {
        self.combinations.get(name)
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }
}

#[derive(Default)]
struct Resolver {
    rings: BTreeMap<String, Arc<VarSet>>,
    maps: BTreeMap<String, MapGerm>,
    unfoldings: BTreeMap<String, Unfolding>,
    fields: BTreeMap<String, FieldList>,
    divisors: BTreeMap<String, Divisor>,
}

fn lookup<'a, T>(table: &'a BTreeMap<String, T>, kind: &str, name: &str, object: &str) -> Result<&'a T, ManifestError> {
    table
        .get(name)
        .ok_or_else(|| invalid(object, format!("unknown {kind} `{name}`")))
}

fn poly_in(text: &mut String, ring: &Arc<VarSet>, object: &str) -> Result<Polynomial, ManifestError> {
    let p = parse_poly(text, ring).map_err(|e| invalid(object, e))?;
    *text = print_poly(&p);
    Ok(p)
}

fn rational(text: &mut String, object: &str) -> Result<Rational, ManifestError> {
    let empty = VarSet::new(Vec::<String>::new()).expect("empty ring");
    let p = parse_expr(text)
        .and_then(|a| a.to_polynomial(&empty))
        .map_err(|e| invalid(object, e))?;
    let c = p.constant_term();
    *text = c.to_string();
    Ok(c)
}

impl Resolver {
    fn run(mut self, mut raw: RawManifest) -> Result<Manifest, ManifestError> {
        if raw.schema != SCHEMA {
            return Err(ManifestError::Schema {
                path: "schema".into(),
                message: format!("expected `{SCHEMA}`, found `{}`", raw.schema),
            });
        }
        for (name, r) in &raw.rings {
            let vs = VarSet::build(r.vars.clone(), r.weights.clone())
                .map_err(|e| invalid(format!("ring `{name}`"), e))?;
            self.rings.insert(name.clone(), vs);
        }
        for (name, m) in raw.maps.iter_mut() {
            let obj = format!("map `{name}`");
            let src = lookup(&self.rings, "ring", &m.source, &obj)?.clone();
            let tgt = lookup(&self.rings, "ring", &m.target, &obj)?.clone();
            let comps = m
                .components
                .iter_mut()
                .map(|c| poly_in(c, &src, &obj))
                .collect::<Result<Vec<_>, _>>()?;
            let g = MapGerm::new(&src, &tgt, comps).map_err(|e| invalid(&obj, e))?;
            self.maps.insert(name.clone(), g);
        }
        for (name, u) in &raw.unfoldings {
            let obj = format!("unfolding `{name}`");
            let total = lookup(&self.maps, "map", &u.map, &obj)?.clone();
            let core = lookup(&self.maps, "map", &u.core, &obj)?.clone();
            let index = |vs: &VarSet, names: &[String]| {
                names
                    .iter()
                    .map(|n| vs.index_of(n).ok_or_else(|| invalid(&obj, format!("unknown parameter `{n}`"))))
                    .collect::<Result<Vec<_>, _>>()
            };
            let sp = index(total.source(), &u.source_params)?;
            let tp = index(total.target(), &u.target_params)?;
            let unf = Unfolding::new(total, sp, tp, core).map_err(|e| invalid(&obj, e))?;
            self.unfoldings.insert(name.clone(), unf);
        }
        for (name, f) in raw.fields.iter_mut() {
            let obj = format!("field list `{name}`");
            let ring = lookup(&self.rings, "ring", &f.ring, &obj)?.clone();
            if f.generators.is_empty() {
                return Err(invalid(&obj, "no generators"));
            }
            if !f.labels.is_empty() && f.labels.len() != f.generators.len() {
                return Err(invalid(&obj, format!("{} labels for {} generators", f.labels.len(), f.generators.len())));
            }
            let mut out = Vec::with_capacity(f.generators.len());
            for (i, g) in f.generators.iter_mut().enumerate() {
                let gobj = format!("{obj}, generator {}", i + 1);
                let entries = g
                    .iter_mut()
                    .map(|c| poly_in(c, &ring, &gobj))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(VectorField::new(&ring, entries).map_err(|e| invalid(&gobj, e))?);
            }
            self.fields.insert(
                name.clone(),
                FieldList {
                    ring: f.ring.clone(),
                    labels: f.labels.clone(),
                    fields: out,
                },
            );
        }
        for (name, d) in raw.divisors.iter_mut() {
            let obj = format!("divisor `{name}`");
            let ring = lookup(&self.rings, "ring", &d.ring, &obj)?.clone();
            let h = poly_in(&mut d.equation, &ring, &obj)?;
            self.divisors
                .insert(name.clone(), Divisor::new(h).map_err(|e| invalid(&obj, e))?);
        }
        let mut augmentations = BTreeMap::new();
        for (name, a) in raw.augmentations.iter_mut() {
            augmentations.insert(name.clone(), self.augmentation(name, a)?);
        }
        let mut combinations = BTreeMap::new();
        for (name, c) in raw.combinations.iter_mut() {
            combinations.insert(name.clone(), self.combination(name, c)?);
        }
        let mut tasks = Vec::with_capacity(raw.tasks.len());
        for t in &raw.tasks {
            if tasks.iter().any(|u: &Task| u.id == t.id) {
                return Err(invalid(format!("task `{}`", t.id), "duplicate id"));
            }
            self.task(t, &augmentations, &combinations)?;
            tasks.push(Task {
                id: t.id.clone(),
                op: t.op,
                args: t.args.clone(),
            });
        }
        Ok(Manifest {
            description: raw.description.clone(),
            raw,
            rings: self.rings,
            maps: self.maps,
            unfoldings: self.unfoldings,
            fields: self.fields,
            divisors: self.divisors,
            augmentations,
            combinations,
            tasks,
        })
    }

    fn augmentation(&self, name: &str, a: &mut RawAugmentation) -> Result<AugmentationDecl, ManifestError> {
        let obj = format!("augmentation `{name}`");
        let u = lookup(&self.unfoldings, "unfolding", &a.unfolding, &obj)?;
        if u.parameter_count() != 1 {
            return Err(invalid(&obj, "unfolding must have exactly one parameter"));
        }
        let d = lookup(&self.divisors, "divisor", &a.divisor, &obj)?;
        let base = lookup(&self.fields, "field list", &a.base, &obj)?;
        let t = u.total().target();
        if d.vars().names() != t.names() || base.space().names() != t.names() {
            return Err(invalid(&obj, "divisor and base fields must live on the unfolding target"));
        }
        let mut instances = Vec::with_capacity(a.instances.len());
        for inst in a.instances.iter_mut() {
            let iobj = format!("{obj}, k = {}", inst.k);
            if inst.k == 0 {
                return Err(invalid(&iobj, "k must be at least 1"));
            }
            let expected = lookup(&self.fields, "field list", &inst.expected, &iobj)?;
            if expected.space().names() != t.names() {
                return Err(invalid(&iobj, "expected fields must use the target variable names"));
            }
            if inst.recipes.len() != expected.fields.len() {
                return Err(invalid(
                    &iobj,
                    format!("{} recipes for {} expected fields", inst.recipes.len(), expected.fields.len()),
                ));
            }
            let mut recipes = Vec::with_capacity(inst.recipes.len());
            for r in inst.recipes.iter_mut() {
                if r.coefficients.len() != base.fields.len() {
                    return Err(invalid(&iobj, format!("recipe needs {} coefficients", base.fields.len())));
                }
                let coefficients = r
                    .coefficients
                    .iter_mut()
                    .map(|c| poly_in(c, base.space(), &iobj))
                    .collect::<Result<Vec<_>, _>>()?;
                recipes.push(Recipe {
                    mode: r.mode,
                    coefficients,
                });
            }
            instances.push(AugmentationInstance {
                k: inst.k,
                expected: inst.expected.clone(),
                recipes,
            });
        }
        let pi2 = match a.pi2.as_mut() {
            Some(ideal) => {
                let pobj = format!("{obj}, pi2");
                let ring = lookup(&self.rings, "ring", &ideal.ring, &pobj)?;
                let z = u.target_params()[0];
                let expected: Vec<&String> =
                    t.names().iter().enumerate().filter(|&(i, _)| i != z).map(|(_, n)| n).collect();
                if ring.names().iter().collect::<Vec<_>>() != expected {
                    return Err(invalid(&pobj, "ring must be the unfolding target without its parameter"));
                }
                let gens = ideal
                    .generators
                    .iter_mut()
                    .map(|g| poly_in(g, ring, &pobj))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(gens)
            }
            None => None,
        };
        Ok(AugmentationDecl {
            unfolding: a.unfolding.clone(),
            divisor: a.divisor.clone(),
            base: a.base.clone(),
            instances,
            pi2,
        })
    }

    fn combination(&self, name: &str, c: &mut RawCombination) -> Result<CombinationDecl, ManifestError> {
        let obj = format!("combination `{name}`");
        let u = lookup(&self.unfoldings, "unfolding", &c.unfolding, &obj)?;
        let fields = lookup(&self.fields, "field list", &c.fields, &obj)?;
        let expect = lookup(&self.fields, "field list", &c.expect, &obj)?;
        if fields.space().names() != u.total().target().names() {
            return Err(invalid(&obj, "fields must live on the unfolding target"));
        }
        if expect.space().names() != u.core().target().names() {
            return Err(invalid(&obj, "expected fields must live on the core target"));
        }
        if c.rows.len() != expect.fields.len() {
            return Err(invalid(&obj, format!("{} rows for {} expected fields", c.rows.len(), expect.fields.len())));
        }
        let mut rows = Vec::with_capacity(c.rows.len());
        for (i, r) in c.rows.iter_mut().enumerate() {
            let robj = format!("{obj}, row {}", i + 1);
            if r.coefficients.len() != fields.fields.len() {
                return Err(invalid(&robj, format!("needs {} coefficients", fields.fields.len())));
            }
            let coefficients = r
                .coefficients
                .iter_mut()
                .map(|a| poly_in(a, fields.space(), &robj))
                .collect::<Result<Vec<_>, _>>()?;
            let scalar = match r.scalar.as_mut() {
                Some(s) => {
                    let v = rational(s, &robj)?;
                    if v.is_zero() {
                        return Err(invalid(&robj, "scalar must be nonzero"));
                    }
                    Some(v)
                }
                None => None,
            };
            rows.push(CombinationRow { coefficients, scalar });
        }
        Ok(CombinationDecl {
            unfolding: c.unfolding.clone(),
            fields: c.fields.clone(),
            expect: c.expect.clone(),
            rows,
        })
    }

    fn task(
        &self,
        t: &RawTask,
        augmentations: &BTreeMap<String, AugmentationDecl>,
        combinations: &BTreeMap<String, CombinationDecl>,
    ) -> Result<(), ManifestError> {
        let obj = format!("task `{}`", t.id);
        let a = &t.args;
        let need = |v: &Option<String>, what: &str| {
            v.as_deref()
                .ok_or_else(|| invalid(&obj, format!("`{}` requires `{what}`", t.op)))
                .map(str::to_string)
        };
        let map = |n: &str| lookup(&self.maps, "map", n, &obj);
        let fields = |n: &str| lookup(&self.fields, "field list", n, &obj);
        match t.op {
            TaskOp::LiftCheck => {
                let m = map(&need(&a.map, "map")?)?;
                let f = fields(&need(&a.fields, "fields")?)?;
                if f.space().names() != m.target().names() {
                    return Err(invalid(&obj, "fields must live on the map target"));
                }
            }
            TaskOp::LiftDirect => {
                map(&need(&a.map, "map")?)?;
                if let Some(e) = &a.expect {
                    fields(e)?;
                }
            }
            TaskOp::Transport => {
                map(&need(&a.map, "map")?)?;
                map(&need(&a.inverse, "inverse")?)?;
                fields(&need(&a.fields, "fields")?)?;
                fields(&need(&a.expect, "expect")?)?;
            }
            TaskOp::Combination => {
                lookup(combinations, "combination", &need(&a.combination, "combination")?, &obj)?;
            }
            TaskOp::FromUnfolding => {
                lookup(&self.unfoldings, "unfolding", &need(&a.unfolding, "unfolding")?, &obj)?;
                fields(&need(&a.fields, "fields")?)?;
                if let Some(e) = &a.expect {
                    fields(e)?;
                }
                if let Some(d) = &a.divisor {
                    lookup(&self.divisors, "divisor", d, &obj)?;
                }
            }
            TaskOp::Derlog => {
                lookup(&self.divisors, "divisor", &need(&a.divisor, "divisor")?, &obj)?;
                if let Some(e) = &a.expect {
                    fields(e)?;
                }
            }
            TaskOp::Discriminant => {
                map(&need(&a.map, "map")?)?;
                lookup(&self.divisors, "divisor", &need(&a.divisor, "divisor")?, &obj)?;
            }
            TaskOp::Euler => {
                lookup(&self.divisors, "divisor", &need(&a.divisor, "divisor")?, &obj)?;
                if let Some(e) = &a.expect {
                    fields(e)?;
                }
            }
            TaskOp::Augment => {
                let decl = lookup(augmentations, "augmentation", &need(&a.augmentation, "augmentation")?, &obj)?;
                let k = a.k.ok_or_else(|| invalid(&obj, "`augment` requires `k`"))?;
                if k == 0 {
                    return Err(invalid(&obj, "k must be at least 1"));
                }
                let check = a.check.ok_or_else(|| invalid(&obj, "`augment` requires `check`"))?;
                if check == AugmentCheck::Tilde && decl.instance(k).is_none() {
                    return Err(invalid(&obj, format!("no instance for k = {k}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
      "schema": "germlift-manifest/1",
      "rings": {
        "s": {"vars": ["x", "l"], "weights": [1, 2]},
        "t": {"vars": ["X", "L"], "weights": [2, 2]},
        "cs": {"vars": ["x"]},
        "ct": {"vars": ["X"]}
      },
      "maps": {
        "F": {"source": "s", "target": "t", "components": ["x^2 + l", "l"]},
        "f": {"source": "cs", "target": "ct", "components": ["x*x"]}
      },
      "unfoldings": {
        "Fu": {"map": "F", "core": "f", "source_params": ["l"], "target_params": ["L"]}
      },
      "fields": {
        "lift": {"ring": "t", "labels": ["e", "d"], "generators": [["2*X", "2*L"], ["1", "1"]]}
      },
      "tasks": [
        {"id": "pipe", "op": "from-unfolding", "unfolding": "Fu", "fields": "lift"}
      ]
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let m = Manifest::parse(SMALL).unwrap();
        assert_eq!(m.maps["f"].component(0).to_string(), "x^2");
        assert_eq!(m.fields["lift"].label(1), "d");
        assert_eq!(m.tasks[0].op, TaskOp::FromUnfolding);
        let printed = m.to_json();
        assert!(printed.contains("\"x^2\""));
        let again = Manifest::parse(&printed).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.to_json(), printed);
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = Manifest::parse("{\n  \"schema\": ").unwrap_err();
        assert!(matches!(err, ManifestError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn schema_errors_report_path() {
        let bad = SMALL.replace(r#""weights": [1, 2]"#, r#""weights": [1, 2.5]"#);
        match Manifest::parse(&bad).unwrap_err() {
            ManifestError::Schema { path, .. } => assert_eq!(path, "rings.s.weights[1]"),
            e => panic!("{e}"),
        }
        let bad = SMALL.replace(r#""op": "from-unfolding""#, r#""op": "frobnicate""#);
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Schema { .. })));
        let bad = SMALL.replace(r#""fields": "lift"}"#, r#""fields": "lift", "colour": 1}"#);
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Schema { .. })));
        let bad = SMALL.replace("germlift-manifest/1", "germlift-manifest/0");
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Schema { .. })));
    }

    #[test]
    fn validation_errors_name_the_object() {
        let bad = SMALL.replace(r#"["x^2 + l", "l"]"#, r#"["x^2 + l", "l + x"]"#);
        match Manifest::parse(&bad).unwrap_err() {
            ManifestError::Validation { object, .. } => assert_eq!(object, "unfolding `Fu`"),
            e => panic!("{e}"),
        }
        let bad = SMALL.replace(r#""x*x""#, r#""x*y""#);
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Validation { .. })));
        let bad = SMALL.replace(r#""x*x""#, r#""x^2 + 1""#);
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Validation { .. })));
        let bad = SMALL.replace(r#""fields": "lift"}"#, r#""fields": "nope"}"#);
        let err = Manifest::parse(&bad).unwrap_err();
        assert!(err.to_string().contains("unknown field list `nope`"), "{err}");
        let bad = SMALL.replace(r#""weights": [2, 2]"#, r#""weights": [2, 0]"#);
        assert!(matches!(Manifest::parse(&bad), Err(ManifestError::Validation { .. })));
    }
}
