use cosym::error::Error;
use cosym::gallery;
use cosym::manifest::{self, load_str, Manifest, ManifestDoc, PolicyDoc, Selection};
use cosym::report::{Overall, Status};
use cosym::symbolic::SamplePolicy;

fn std3_json() -> String {
    gallery::find("std3").unwrap().build().unwrap().to_json()
}

#[test]
fn every_gallery_manifest_round_trips() {
    for e in gallery::entries() {
        let doc = e.build().unwrap();
        let text = doc.to_json();
        let back = ManifestDoc::from_json(&text).unwrap();
        assert_eq!(back, doc, "{}", e.name);
        assert_eq!(back.to_json(), text, "{}", e.name);
        assert!(e.manifest(&PolicyDoc::default()).is_ok(), "{}", e.name);
    }
}

#[test]
fn unknown_coordinate_is_named() {
    let text = std3_json().replace("\"x y\"", "\"x w\"");
    let err = load_str(&text, &PolicyDoc::default()).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("`w`") && msg.contains("x w"), "{msg}");
}

#[test]
fn dangling_reference_is_unresolved() {
    let mut doc = gallery::find("product").unwrap().build().unwrap();
    doc.products.get_mut("std3xstd3").unwrap().right = "nope".into();
    let err = manifest::from_doc(doc, &PolicyDoc::default()).unwrap_err();
    assert!(matches!(err, Error::Unresolved { ref name, .. } if name == "nope"), "{err}");
}

#[test]
fn parse_errors_carry_a_position() {
    let text = std3_json().replace("\"chart\"", "\"chrt\"");
    match ManifestDoc::from_json(&text) {
        Err(Error::Parse { line, .. }) => assert!(line > 1),
        other => panic!("{other:?}"),
    }
    assert!(ManifestDoc::from_json("{\"charts\": {}}").is_err());
    assert!(ManifestDoc::from_json("{\"version\": 7}").is_err());
}

#[test]
fn empty_selection_is_vacuous() {
    let e = gallery::find("std3").unwrap();
    let m = e.manifest(&PolicyDoc::default()).unwrap();
    let r = manifest::run_checks(&m, &[], &m.policy);
    assert_eq!(r.status, Overall::Vacuous);
    // Nothing in the manifest for the groupoid family either.
    let r = manifest::run_checks(&m, &[Selection::Groupoid], &m.policy);
    assert_eq!(r.status, Overall::Vacuous);
}

#[test]
fn selections_parse() {
    assert_eq!(Selection::parse_list("all").unwrap(), Selection::ALL.to_vec());
    assert_eq!(
        Selection::parse_list("morita, structure").unwrap(),
        vec![Selection::Morita, Selection::Structure]
    );
    assert!(Selection::parse_list("bogus").is_err());
}

#[test]
fn reports_are_deterministic() {
    for name in ["skew3", "rotation", "self_bimodule"] {
        let e = gallery::find(name).unwrap();
        let a = e.run(&PolicyDoc::default()).unwrap().to_json(false);
        let b = e.run(&PolicyDoc::default()).unwrap().to_json(false);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn policy_precedence() {
    let mut doc = gallery::find("std3").unwrap().build().unwrap();
    doc.policy = Some(PolicyDoc {
        samples: Some(7),
        seed: Some(3),
        ..PolicyDoc::default()
    });
    let over = PolicyDoc {
        seed: Some(5),
        ..PolicyDoc::default()
    };
    let p = manifest::effective_policy(&doc, &over).unwrap();
    assert_eq!(p.samples(), 7);
    assert_eq!(p.seed(), 5);
    assert_eq!(p.tolerance(), SamplePolicy::default().tolerance());
}

#[test]
fn non_cosymplectic_dependency_fails_the_product() {
    let mut doc = gallery::find("product").unwrap().build().unwrap();
    let bad = gallery::find("degenerate3").unwrap().build().unwrap();
    doc.structures.extend(bad.structures);
    doc.products.get_mut("std3xstd3").unwrap().right = "degenerate3".into();
    let m = manifest::from_doc(doc, &PolicyDoc::default()).unwrap();
    let r = manifest::run_checks(&m, &[Selection::Structure], &m.policy);
    assert_eq!(r.entry("product.std3xstd3.dependency").unwrap().status, Status::Failed);
    assert_eq!(r.entry("structure.degenerate3.validation.volume").unwrap().status, Status::Failed);
}

#[test]
fn manifests_load_from_disk() {
    let dir = std::env::temp_dir().join(format!("cosym-manifest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("std3.json");
    std::fs::write(&path, std3_json()).unwrap();
    let m: Manifest = manifest::load_manifest(&path, &PolicyDoc::default()).unwrap();
    assert!(m.structures.contains_key("std3"));
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(manifest::load_manifest(&path, &PolicyDoc::default()).is_err());
}
