//! The bundled manifests, embedded at compile time.

use crate::io::{Manifest, ManifestError};

pub const HK2: &str = include_str!("../fixtures/hk.manifest");
pub const HK3: &str = include_str!("../fixtures/hk3.manifest");
pub const HK4: &str = include_str!("../fixtures/hk4.manifest");
pub const HK5: &str = include_str!("../fixtures/hk5.manifest");
pub const AUGMENT: &str = include_str!("../fixtures/augment.manifest");
pub const SMALL: &str = include_str!("../fixtures/small.manifest");

/// `(file name, contents)` for every bundled manifest.
pub const ALL: &[(&str, &str)] = &[
    ("hk.manifest", HK2),
    ("hk3.manifest", HK3),
    ("hk4.manifest", HK4),
    ("hk5.manifest", HK5),
    ("augment.manifest", AUGMENT),
    ("small.manifest", SMALL),
];

/// The `H_k` manifest for `k ∈ {2, 3, 4, 5}`.
pub fn hk(k: u32) -> Option<&'static str> {
    match k {
        2 => Some(HK2),
        3 => Some(HK3),
        4 => Some(HK4),
        5 => Some(HK5),
        _ => None,
    }
}

pub fn load(name: &str) -> Result<Manifest, ManifestError> {
    let (_, text) = ALL
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ManifestError::Validation {
            object: format!("fixture `{name}`"),
            message: "no such bundled manifest".into(),
        })?;
    Manifest::parse(text)
}
