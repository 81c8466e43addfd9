//! Shipped data files re-serialize byte-for-byte, and the catalog-wide
//! structural invariants hold on load.

use rnf_core::arith::{is_quadfree, t_multiplicity};
use rnf_core::shell::{
    Catalog, FORMS_JSON, IDENTITIES_JSON, POLYS_JSON, TABLE1_JSON, TABLE2_JSON, TABLE3_JSON,
};

#[test]
fn serialize_load_is_identity_on_shipped_files() {
    let cat = Catalog::builtin().unwrap();
    let shipped = [
        ("table1.json", TABLE1_JSON),
        ("table2.json", TABLE2_JSON),
        ("table3.json", TABLE3_JSON),
        ("forms.json", FORMS_JSON),
        ("polys.json", POLYS_JSON),
        ("identities.json", IDENTITIES_JSON),
    ];
    for ((name, canonical), (_, original)) in cat.to_canonical_files().iter().zip(shipped) {
        assert_eq!(canonical.as_str(), original, "{} is not canonical", name);
    }
}

#[test]
fn twist_classes_have_unit_multiplicity_at_quadfree_levels() {
    let cat = Catalog::builtin().unwrap();
    let classes = cat.twist_classes();
    assert_eq!(classes.len(), 105);
    for c in &classes {
        assert_eq!(c.multiplicity, t_multiplicity(c.level));
        assert!(is_quadfree(c.level), "all supported levels are quadfree");
        assert_eq!(c.multiplicity, 1);
    }
}

#[test]
fn table1_queries_match_stated_cells() {
    let cat = Catalog::builtin().unwrap();
    assert_eq!(cat.table1_count(3, 22), (2, 2));
    assert_eq!(cat.table1_count(30, 8), (6, 0));
    assert!(cat.query_table1(Some(16), None).is_empty());
    assert!(cat.query_table1(Some(9), None).is_empty());
    assert!(cat.query_table1(Some(29), None).is_empty());
    assert_eq!(cat.summatory(50, 30).unwrap(), 1);
    assert_eq!(cat.summatory(12, 0).unwrap(), 0);
    let col12: u64 = cat
        .query_table1(None, Some(12))
        .iter()
        .map(|e| e.count as u64)
        .sum();
    assert_eq!(cat.summatory(12, 30).unwrap(), col12);
    assert!(cat.summatory(8, 31).is_err());
}

#[test]
fn catalog_counts_by_level() {
    let cat = Catalog::builtin().unwrap();
    for (level, want) in [(1u64, 6usize), (2, 23), (3, 13), (4, 6), (6, 47), (8, 10)] {
        assert_eq!(cat.forms_at(Some(level), None, None).len(), want, "level {}", level);
    }
    assert_eq!(cat.polys.len(), 16);
}

#[test]
fn load_catalog_reports_field_diagnostics() {
    let bad = r#"{ "entries": [ { "level": 3, "weight": 22, "count": 1, "unforced": 2 } ],
                   "meta": { "observed_count": {}, "last_level": {}, "cutoff": {} } }"#;
    let err = Catalog::from_strings(bad, TABLE2_JSON, TABLE3_JSON, FORMS_JSON, POLYS_JSON, IDENTITIES_JSON)
        .unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("unforced"), "diagnostic names the field: {}", msg);

    let unparsable = "{ not json";
    let err = Catalog::from_strings(
        unparsable,
        TABLE2_JSON,
        TABLE3_JSON,
        FORMS_JSON,
        POLYS_JSON,
        IDENTITIES_JSON,
    )
    .unwrap_err();
    assert!(err.to_string().contains("line"), "diagnostic carries position: {}", err);
}
