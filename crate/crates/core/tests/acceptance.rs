//! Acceptance suite: every criterion runs as its own test and prints one
//! pass/fail line (run with `--nocapture` to see them in passing runs).

use std::sync::OnceLock;
use std::time::Instant;

use rnf_core::shell::{Catalog, DEFAULT_PMAX, DEFAULT_PRECISION};
use rnf_core::verify::{self, Check};

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::builtin().expect("embedded catalog loads"))
}

fn report(criterion: &str, checks: &[Check], elapsed_note: &str) {
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    if failures.is_empty() {
        println!("criterion {}: PASS ({} checks{})", criterion, checks.len(), elapsed_note);
    } else {
        println!(
            "criterion {}: FAIL ({} of {} checks fail{})",
            criterion,
            failures.len(),
            checks.len(),
            elapsed_note
        );
        for f in &failures {
            println!("  {}: {}", f.name, f.detail);
        }
    }
    assert!(failures.is_empty(), "criterion {} has failing checks", criterion);
}

fn filter<'a>(checks: &'a [Check], prefixes: &[&str]) -> Vec<Check> {
    checks
        .iter()
        .filter(|c| prefixes.iter().any(|p| c.name.starts_with(p)))
        .cloned()
        .collect()
}

fn rings_checks() -> &'static Vec<Check> {
    static CHECKS: OnceLock<Vec<Check>> = OnceLock::new();
    CHECKS.get_or_init(|| {
        verify::suite_rings(catalog(), DEFAULT_PRECISION).expect("rings suite runs")
    })
}

fn galrep_checks() -> &'static Vec<Check> {
    static CHECKS: OnceLock<Vec<Check>> = OnceLock::new();
    CHECKS
        .get_or_init(|| verify::suite_galrep(catalog(), DEFAULT_PMAX).expect("galrep suite runs"))
}

#[test]
fn criterion_1_ring_identities() {
    // the identity work alone: every displayed identity evaluated at
    // precision 200 with exact equality, timed against the 60 s target
    let start = Instant::now();
    let checks =
        verify::suite_identities(catalog(), DEFAULT_PRECISION).expect("identity suite runs");
    let elapsed = start.elapsed().as_secs_f64();
    let note = format!(", {:.1} s", elapsed);
    report("1 (ring identities, exact to precision 200)", &checks, &note);
    // every displayed identity must be present in the database
    for required in [
        "Delta_12_1=eta^24",
        "Q_in_M6",
        "Q_in_M8",
        "R_in_M6",
        "R_in_M8",
        "Delta_8_2_plus=eta",
        "Delta_48_2_minus",
        "Delta_6_3_minus=eta",
        "Delta_22_3_plus_a",
        "Delta_22_3_plus_b",
        "Delta_5_4=eta",
        "Delta_6_4_minus=eta",
        "Q2=pushed_up_Q",
        "R2=pushed_up_R",
        "Delta_20_4_minus",
        "s^2-d^2=8p^2",
        "Delta_4_6_plus_plus=eta",
        "Delta_6_6_minus_plus",
        "Delta_8_6_minus_minus",
        "Delta_10_6_plus_minus",
        "Delta_50_6_minus_minus",
        "Delta_8_4_plus=eta",
        "Delta_8_4_plus_is_generator",
        "Delta_6_8_minus",
        "Delta_8_8_plus",
        "Delta_8_8_minus",
        "Delta_10_8_plus",
        "Delta_10_8_minus",
        "Delta_12_8_minus",
        "Delta_14_8_plus",
        "Delta_16_8_minus_a",
        "Delta_16_8_minus_b",
    ] {
        assert!(
            checks.iter().any(|c| c.name == format!("identity:{}", required)),
            "missing identity {}",
            required
        );
    }
    if !cfg!(debug_assertions) {
        assert!(elapsed < 60.0, "identity suite took {:.1} s", elapsed);
    }
}

#[test]
fn criterion_2_eigenform_suite() {
    let checks = filter(rings_checks(), &["eigenform:", "alsign:"]);
    assert_eq!(checks.len(), 210, "both checks for each of the 105 forms");
    report("2 (T_p g = a_p g for p <= 50, sign data)", &checks, "");
}

#[test]
fn criterion_3_dimension_table() {
    let checks = verify::suite_dims(catalog()).expect("dims suite runs");
    let table = filter(&checks, &["table2:", "mass:"]);
    assert_eq!(table.len(), 24, "12 rows, dims and mass each");
    report("3 (signed dimension table and masses)", &table, "");
    report("3b (periodicity, cross-table counts)", &checks, "");
}

#[test]
fn criterion_4_heuristic_numerics() {
    let checks = verify::suite_heuristic();
    report("4 (ensemble volumes, probabilities, lattice counts)", &checks, "");
}

#[test]
fn criterion_5_congruences() {
    let checks = filter(galrep_checks(), &["congruence:", "mod7_chain:"]);
    assert_eq!(checks.len(), 4);
    report("5 (congruences mod 4572 and 6144, mod-7 chains)", &checks, "");
}

#[test]
fn criterion_6_galois_matching() {
    let checks = filter(galrep_checks(), &["governance:", "disambiguation:", "table3"]);
    report("6 (mod-ell governance and degeneracy)", &checks, "");
}

#[test]
fn criterion_7_multiplicativity() {
    let checks = filter(rings_checks(), &["euler:"]);
    assert_eq!(checks.len(), 105);
    report("7 (Euler-product reconstruction of all forms)", &checks, "");
    // the worked example: a_6 of the discriminant form
    let d = catalog().expansion("Delta_12_1", DEFAULT_PRECISION).unwrap();
    assert_eq!(d.coeff(6), &rnf_core::qseries::int(-6048));
    assert_eq!(d.coeff(2) * d.coeff(3), rnf_core::qseries::int(-6048));
}

#[test]
fn criterion_8_declared_out_of_scope() {
    // the extended-cutoff statistics, the summatory plot beyond the stored
    // range, and Hecke factorizations at large levels need a newform-search
    // engine; the stored metadata is carried verbatim instead
    let meta = &catalog().table1.meta;
    assert_eq!(meta.observed_count.get(&6), Some(&312));
    assert_eq!(meta.last_level.get(&6), Some(&980));
    assert_eq!(meta.cutoff.get(&6), Some(&1000));
    assert!(catalog().summatory(8, 31).is_err());
    println!(
        "criterion 8: declared not reproducible at desk scale; verbatim metadata present \
         for {} weights",
        meta.cutoff.len()
    );
}
