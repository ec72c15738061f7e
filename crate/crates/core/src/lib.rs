//! Exact computation and certification of liftable vector fields of
//! polynomial map-germs.
//!
//! The layers, bottom up:
//!
//! * [`poly`]: rings with optional weights, exact rational polynomials,
//!   substitutions.
//! * [`groebner`]: Buchberger bases for submodules of free modules, with
//!   membership witnesses, intersections, syzygies and elimination.
//! * [`germ`]: map-germs, vector fields, `tf`/`wf`, unfoldings and
//!   coordinate changes.
//! * [`lift`]: liftability certificates and `Lift(f)` computed from a stable
//!   unfolding, plus a direct elimination route.
//! * [`derlog`] and [`augment`]: logarithmic fields, discriminants and the
//!   augmentation of a germ.
//! * [`io`]: the expression language and JSON manifests; [`fixtures`]
//!   bundles the manifests used by the acceptance suite.
//!
//! ```
//! use germlift::groebner::Engine;
//! use germlift::lift::lift_from_unfolding;
//!
//! let hk = germlift::fixtures::load("hk.manifest").unwrap();
//! let e = Engine::default();
//! let out = lift_from_unfolding(&e, hk.unfolding("F2u").unwrap(), &hk.field_list("lift_F2").unwrap().module()).unwrap();
//! assert!(e.equal(&out.module, &hk.field_list("lift_H2").unwrap().module()).unwrap());
//! ```

pub mod error;
pub mod groebner;
pub mod io;
pub mod poly;

pub use error::{Error, Result};
pub mod augment;
pub mod derlog;
pub mod fixtures;
pub mod germ;
pub mod lift;

// The guide's listings run as doc-tests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/groebner.md")]
    mod groebner {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/derlog.md")]
    mod derlog {}
}
