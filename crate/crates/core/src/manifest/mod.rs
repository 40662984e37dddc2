//! Manifests: JSON documents naming charts, structures, groupoids, actions,
//! reductions and bimodules, resolved into checkable objects.

pub mod doc;
pub mod export;
pub mod resolve;
pub mod run;

use std::path::Path;

pub use doc::{ManifestDoc, PolicyDoc, MANIFEST_VERSION};
pub use export::Exporter;
pub use resolve::{Manifest, Route, Structure};
pub use run::{calculus_suite, run_checks, Selection};

use crate::error::{Error, Result};
use crate::symbolic::SamplePolicy;

/// Reads, resolves and validates a manifest file. Policy precedence is
/// `overrides`, then the manifest's own policy, then the defaults.
pub fn load_manifest(path: impl AsRef<Path>, overrides: &PolicyDoc) -> Result<Manifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
    load_str(&text, overrides)
}

pub fn load_str(text: &str, overrides: &PolicyDoc) -> Result<Manifest> {
    let doc = ManifestDoc::from_json(text)?;
    from_doc(doc, overrides)
}

pub fn from_doc(doc: ManifestDoc, overrides: &PolicyDoc) -> Result<Manifest> {
    let policy = effective_policy(&doc, overrides)?;
    Manifest::resolve(doc, &policy)
}

pub fn effective_policy(doc: &ManifestDoc, overrides: &PolicyDoc) -> Result<SamplePolicy> {
    doc.policy.clone().unwrap_or_default().merged(overrides).apply(&SamplePolicy::default())
}
