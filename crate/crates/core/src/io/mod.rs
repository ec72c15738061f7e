//! Text front-ends: the polynomial expression grammar and the manifest format.

mod expr;
mod manifest;

pub use expr::{parse_expr, parse_poly, print_poly, ExprAst, ParseError};
pub use manifest::{
    AugmentCheck, AugmentationDecl, AugmentationInstance, CombinationDecl, CombinationRow, DerlogMode, FieldList,
    Manifest, ManifestError, Recipe, Task, TaskArgs, TaskOp, TransformMode, SCHEMA,
};
