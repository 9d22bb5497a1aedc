use std::path::PathBuf;

use avjet::fixtures;
use avjet::io::{load_atlas, load_chart, IoError};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn chart_files_match_built_ins() {
    for (file, chart) in [("c1.json", fixtures::c1()), ("c2.json", fixtures::c2()), ("c3.json", fixtures::c3())] {
        let loaded = load_chart(fixture(file)).unwrap();
        assert_eq!(loaded.spec(), chart.spec(), "{file}");
    }
}

#[test]
fn atlas_file_matches_built_in() {
    let loaded = load_atlas(fixture("p1.json")).unwrap();
    let built = fixtures::projective_line_atlas();
    assert_eq!(loaded.name, built.name);
    let specs = |a: &avjet::atlas::AtlasSpec| a.charts.iter().map(|c| c.spec().clone()).collect::<Vec<_>>();
    assert_eq!(specs(&loaded), specs(&built));
    assert_eq!(loaded.transitions.len(), built.transitions.len());
    for (a, b) in loaded.transitions.iter().zip(&built.transitions) {
        assert_eq!((a.from(), a.to()), (b.from(), b.to()));
        assert_eq!(a.source().spec(), b.source().spec());
        assert_eq!(a.target().spec(), b.target().spec());
        assert_eq!(a.g(), b.g());
        assert_eq!(a.h(), b.h());
    }
    assert_eq!(loaded.triples.len(), 1);
    for (a, b) in loaded.triples[0].rings.iter().zip(&built.triples[0].rings) {
        assert_eq!(a.spec(), b.spec());
    }
}

#[test]
fn missing_files_and_bad_transitions_are_reported() {
    assert!(matches!(load_chart(fixture("nope.json")), Err(IoError::Read { .. })));
    let bad = r#"{
        "name": "bad",
        "charts": [{"name": "A", "params": ["x"], "denominator": "1"},
                   {"name": "B", "params": ["u"], "denominator": "1"}],
        "overlaps": [{"name": "A|B:x", "params": ["x"], "denominator": "x"},
                     {"name": "A|B:u", "params": ["u"], "denominator": "u"}],
        "transitions": [{"from": "A", "to": "B", "overlap": {"from": "A|B:x", "to": "A|B:u"},
                         "G": ["1/u^2"], "H": ["1/x"]}]
    }"#;
    assert!(matches!(avjet::io::atlas_from_str(bad), Err(IoError::Core(_))));
    let missing = r#"{"name": "m", "charts": [], "overlaps": [], "transitions": [{"from": "A"}]}"#;
    match avjet::io::atlas_from_str(missing) {
        Err(IoError::Schema(items)) => {
            assert!(items.contains(&"transitions[0].to".to_string()));
            assert!(items.contains(&"transitions[0].overlap".to_string()));
            assert!(items.contains(&"transitions[0].G".to_string()));
        }
        other => panic!("unexpected {other:?}"),
    }
}
