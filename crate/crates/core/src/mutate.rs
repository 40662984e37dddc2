//! Single-expression edits of a manifest, for checking that a check notices
//! a perturbation.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::gallery::GalleryEntry;
use crate::manifest::{ManifestDoc, PolicyDoc};
use crate::report::{Report, Status};

/// Replaces the expression string at a JSON pointer (RFC 6901) into the
/// manifest. The target must exist, hold a string, and differ from the
/// replacement.
pub fn mutate(doc: &ManifestDoc, target: &str, replacement: &str) -> Result<ManifestDoc> {
    let mut v = doc.to_value();
    let slot = v
        .pointer_mut(target)
        .ok_or_else(|| Error::Missing(format!("mutation target {target}")))?;
    match slot {
        Value::String(s) if s == replacement => {
            return Err(Error::invalid(target, "replacement equals the current expression"));
        }
        Value::String(s) => *s = replacement.to_string(),
        other => return Err(Error::invalid(target, format!("expected an expression string, found {other}"))),
    }
    ManifestDoc::from_json(&v.to_string())
}

/// Runs a gallery entry with one expression replaced; the report must fail,
/// and `named_check` (when given) must be among the failed entries.
pub fn mutate_and_expect_failure(
    entry: &GalleryEntry,
    target: &str,
    replacement: &str,
    named_check: Option<&str>,
    overrides: &PolicyDoc,
) -> Result<Report> {
    let doc = mutate(&entry.build()?, target, replacement)?;
    let report = entry.run_doc(doc, overrides)?;
    if report.passed() {
        return Err(Error::Undetected(format!(
            "mutation {target} := {replacement} of `{}` was not detected",
            entry.name
        )));
    }
    if let Some(id) = named_check {
        match report.entry(id) {
            Some(e) if e.status == Status::Failed => {}
            Some(e) => {
                return Err(Error::Undetected(format!("`{id}` is {} after the mutation", e.status.label())));
            }
            None => return Err(Error::Missing(format!("check `{id}` in the mutated report"))),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn missing_target_is_an_error() {
        let doc = gallery::find("std3").unwrap().build().unwrap();
        assert!(matches!(mutate(&doc, "/structures/std3/eta/terms/x", "1"), Err(Error::Missing(_))));
    }

    #[test]
    fn identical_replacement_is_an_error() {
        let doc = gallery::find("std3").unwrap().build().unwrap();
        assert!(mutate(&doc, "/structures/std3/eta/terms/z", "1").is_err());
    }

    #[test]
    fn perturbed_anchor_breaks_reeb_invariance() {
        let entry = gallery::find("rotation").unwrap();
        let r = mutate_and_expect_failure(
            entry,
            "/actions/rotation.extension/rho/components/xi",
            "(x1^2 + y1^2)/2 + z",
            Some("action.rotation.extension.cosymplectic.anchor_reeb"),
            &PolicyDoc::default(),
        );
        assert!(r.is_ok(), "{:?}", r.err());
    }

    #[test]
    fn perturbed_extension_form_breaks_multiplicativity() {
        let entry = gallery::find("extension_tr1").unwrap();
        let doc = entry.build().unwrap();
        let terms = &doc.groupoids["TR1xR"].omega.as_ref().unwrap().terms;
        let (key, coeff) = terms.iter().next().unwrap();
        let target = format!("/groupoids/TR1xR/omega/terms/{key}");
        let r = mutate_and_expect_failure(
            entry,
            &target,
            &format!("{coeff} + g"),
            Some("groupoid.TR1xR.multiplicative.multiplicative_omega"),
            &PolicyDoc::default(),
        );
        assert!(r.is_ok(), "{:?}", r.err());
    }
}
