//! Catalog data model and machine-readable assets.
//!
//! Five JSON files ship with the crate and are embedded at build time:
//!
//! - `table1.json` — twist-class counts by (level, weight) with the
//!   unforced-rationality count per cell, plus the extended-cutoff metadata
//!   block, which is stored verbatim and is not recomputable here.
//! - `table2.json` — exact signed new-space dimensions by (level, signs,
//!   weight) with the per-cell count of rational newforms, and the mass of
//!   each sign class.
//! - `table3.json` — the per-(ell, level) field counts and governed-newform
//!   counts, with the catalog totals per level.
//! - `forms.json` — the newform records: label, level, weight, signs, and a
//!   construction expression over the level's ring generators.
//! - `polys.json` — the defining polynomials of the projective mod-ell
//!   representations with factored field discriminants.
//! - `identities.json` — the displayed ring identities, each an (lhs, rhs)
//!   pair of expressions, optionally with a pinned expansion prefix.
//!
//! All of them round-trip byte-for-byte through [`to_canonical_json`].

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use crate::arith::t_multiplicity;
use crate::galrep::ProjPolyRecord;
use crate::qseries::QSeries;
use crate::rings::{Expander, Expr, FormResolver, Signs};
use crate::{Error, Result};

/// Default expansion precision for verification work.
pub const DEFAULT_PRECISION: usize = 200;
/// Default prime bound for mod-ell matching.
pub const DEFAULT_PMAX: u64 = 200;

/// One cataloged rational newform.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: i64,
    pub signs: Signs,
    pub expression: Expr,
    #[serde(skip)]
    cache: OnceLock<QSeries>,
}

impl NewformRecord {
    pub fn new(label: String, level: u64, weight: i64, signs: Signs, expression: Expr) -> Self {
        NewformRecord { label, level, weight, signs, expression, cache: OnceLock::new() }
    }
}

/// One nonzero cell of the twist-class count table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Table1Entry {
    pub level: u64,
    pub weight: i64,
    pub count: u32,
    pub unforced: u32,
}

/// The bottom block of the count table: observed totals, last non-empty
/// level, and search cutoff per weight. Given metadata, not recomputable.
#[derive(Clone, Debug, Serialize, Deserialize, Default, PartialEq, Eq)]
pub struct Table1Meta {
    pub observed_count: BTreeMap<i64, u64>,
    pub last_level: BTreeMap<i64, u64>,
    pub cutoff: BTreeMap<i64, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1 {
    pub entries: Vec<Table1Entry>,
    pub meta: Table1Meta,
}

/// One cell of the signed dimension table.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Table2Cell {
    pub weight: i64,
    pub dim: i64,
    /// Number of rational newforms in the cell (0, 1 or 2).
    pub rational: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2Row {
    pub level: u64,
    pub signs: Signs,
    /// Mass of the sign class, an exact rational in "p/q" form.
    pub mass: String,
    pub cells: Vec<Table2Cell>,
}

impl Table2Row {
    pub fn mass_rational(&self) -> Result<BigRational> {
        self.mass
            .parse()
            .map_err(|e| Error::Data(format!("row ({},{}) mass: {}", self.level, self.signs, e)))
    }

    pub fn cell(&self, weight: i64) -> Option<&Table2Cell> {
        self.cells.iter().find(|c| c.weight == weight)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2 {
    pub rows: Vec<Table2Row>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Table3FieldCount {
    pub ell: u64,
    pub level: u64,
    pub count: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Table3Governed {
    pub ell: u64,
    pub level: u64,
    /// Governed-newform counts in alphabetic order of the polynomial labels.
    pub counts: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table3 {
    pub fields: Vec<Table3FieldCount>,
    pub governed: Vec<Table3Governed>,
    pub totals: BTreeMap<u64, u32>,
}

/// A stored ring identity: lhs = rhs as q-series, with an optional pinned
/// prefix of the common expansion starting at q^0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Identity {
    pub label: String,
    pub level: u64,
    pub lhs: Expr,
    pub rhs: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct FormsFile {
    forms: Vec<NewformRecord>,
}

#[derive(Serialize, Deserialize)]
struct PolysFile {
    polys: Vec<ProjPolyRecord>,
}

#[derive(Serialize, Deserialize)]
struct IdentitiesFile {
    identities: Vec<Identity>,
}

/// The full in-memory catalog, immutable after load.
#[derive(Debug)]
pub struct Catalog {
    pub forms: Vec<NewformRecord>,
    pub table1: Table1,
    pub table2: Table2,
    pub table3: Table3,
    pub polys: Vec<ProjPolyRecord>,
    pub identities: Vec<Identity>,
}

/// A twist class of the catalog: its representative newform and the number
/// of level-N newforms representing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistClass {
    pub label: String,
    pub level: u64,
    pub multiplicity: u64,
}

pub const TABLE1_JSON: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/table1.json"));
pub const TABLE2_JSON: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/table2.json"));
pub const TABLE3_JSON: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/table3.json"));
pub const FORMS_JSON: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/forms.json"));
pub const POLYS_JSON: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/polys.json"));
pub const IDENTITIES_JSON: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/identities.json"));

impl Catalog {
    /// Loads the catalog embedded in the crate.
    pub fn builtin() -> Result<Catalog> {
        Self::from_strings(
            TABLE1_JSON,
            TABLE2_JSON,
            TABLE3_JSON,
            FORMS_JSON,
            POLYS_JSON,
            IDENTITIES_JSON,
        )
    }

    /// Loads the catalog from a directory holding the six data files.
    pub fn load_dir(dir: &Path) -> Result<Catalog> {
        let read = |name: &str| -> Result<String> {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| Error::Data(format!("{}: {}", name, e)))
        };
        Self::from_strings(
            &read("table1.json")?,
            &read("table2.json")?,
            &read("table3.json")?,
            &read("forms.json")?,
            &read("polys.json")?,
            &read("identities.json")?,
        )
    }

    pub fn from_strings(
        table1: &str,
        table2: &str,
        table3: &str,
        forms: &str,
        polys: &str,
        identities: &str,
    ) -> Result<Catalog> {
        let diag = |name: &str, e: serde_json::Error| {
            Error::Data(format!("{} line {} column {}: {}", name, e.line(), e.column(), e))
        };
        let table1: Table1 = serde_json::from_str(table1).map_err(|e| diag("table1.json", e))?;
        let table2: Table2 = serde_json::from_str(table2).map_err(|e| diag("table2.json", e))?;
        let table3: Table3 = serde_json::from_str(table3).map_err(|e| diag("table3.json", e))?;
        let forms: FormsFile = serde_json::from_str(forms).map_err(|e| diag("forms.json", e))?;
        let polys: PolysFile = serde_json::from_str(polys).map_err(|e| diag("polys.json", e))?;
        let identities: IdentitiesFile =
            serde_json::from_str(identities).map_err(|e| diag("identities.json", e))?;
        let cat = Catalog {
            forms: forms.forms,
            table1,
            table2,
            table3,
            polys: polys.polys,
            identities: identities.identities,
        };
        cat.validate()?;
        Ok(cat)
    }

    /// Structural sanity of the loaded data (field-level diagnostics).
    fn validate(&self) -> Result<()> {
        let mut labels = std::collections::HashSet::new();
        for f in &self.forms {
            if !labels.insert(f.label.clone()) {
                return Err(Error::Data(format!("forms.json: duplicate label {}", f.label)));
            }
            let expected = crate::arith::factorize(f.level).len();
            if f.signs.len() != expected {
                return Err(Error::Data(format!(
                    "forms.json: {} has {} signs, level {} needs {}",
                    f.label,
                    f.signs.len(),
                    f.level,
                    expected
                )));
            }
        }
        for e in &self.table1.entries {
            if e.unforced > e.count {
                return Err(Error::Data(format!(
                    "table1.json: ({}, {}) unforced {} exceeds count {}",
                    e.level, e.weight, e.unforced, e.count
                )));
            }
        }
        for row in &self.table2.rows {
            row.mass_rational()?;
            for c in &row.cells {
                if (c.rational as i64) > c.dim {
                    return Err(Error::Data(format!(
                        "table2.json: ({}, {}, {}) rational {} exceeds dim {}",
                        row.level, row.signs, c.weight, c.rational, c.dim
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn form(&self, label: &str) -> Result<&NewformRecord> {
        self.forms
            .iter()
            .find(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Forms filtered on any subset of level, weight, and signs.
    pub fn forms_at(
        &self,
        level: Option<u64>,
        weight: Option<i64>,
        signs: Option<&Signs>,
    ) -> Vec<&NewformRecord> {
        self.forms
            .iter()
            .filter(|f| level.is_none_or(|n| f.level == n))
            .filter(|f| weight.is_none_or(|k| f.weight == k))
            .filter(|f| signs.is_none_or(|s| &f.signs == s))
            .collect()
    }

    /// Exact expansion of a cataloged form. The default precision is cached
    /// once per record; other precisions are computed fresh.
    pub fn expansion(&self, label: &str, prec: usize) -> Result<QSeries> {
        let record = self.form(label)?;
        if prec == DEFAULT_PRECISION {
            if let Some(s) = record.cache.get() {
                return Ok(s.clone());
            }
            let s = self.expand_expr(record.level, &record.expression, prec)?;
            let _ = record.cache.set(s.clone());
            return Ok(s);
        }
        self.expand_expr(record.level, &record.expression, prec)
    }

    fn expand_expr(&self, level: u64, expr: &Expr, prec: usize) -> Result<QSeries> {
        let mut env = Expander::new(prec);
        env.eval(level, expr, Some(self))
    }

    /// Expands every cataloged form at one precision with a shared
    /// generator cache; returns label -> expansion.
    pub fn expand_all(&self, prec: usize) -> Result<BTreeMap<String, QSeries>> {
        let mut env = Expander::new(prec);
        let mut out = BTreeMap::new();
        for f in &self.forms {
            if prec == DEFAULT_PRECISION {
                if let Some(s) = f.cache.get() {
                    out.insert(f.label.clone(), s.clone());
                    continue;
                }
            }
            let s = env.eval(f.level, &f.expression, Some(self))?;
            if prec == DEFAULT_PRECISION {
                let _ = f.cache.set(s.clone());
            }
            out.insert(f.label.clone(), s);
        }
        Ok(out)
    }

    /// Table-1 cells filtered on any subset of keys.
    pub fn query_table1(&self, level: Option<u64>, weight: Option<i64>) -> Vec<&Table1Entry> {
        self.table1
            .entries
            .iter()
            .filter(|e| level.is_none_or(|n| e.level == n))
            .filter(|e| weight.is_none_or(|k| e.weight == k))
            .collect()
    }

    /// (count, unforced) of one cell; blank cells read as zeros.
    pub fn table1_count(&self, level: u64, weight: i64) -> (u32, u32) {
        self.query_table1(Some(level), Some(weight))
            .first()
            .map_or((0, 0), |e| (e.count, e.unforced))
    }

    /// Summatory twist-class count: sum of counts over levels <= x for one
    /// weight. Only the stored range x <= 30 is available.
    pub fn summatory(&self, weight: i64, x: u64) -> Result<u64> {
        if x > 30 {
            return Err(Error::SummatoryRange(x));
        }
        Ok(self
            .table1
            .entries
            .iter()
            .filter(|e| e.weight == weight && e.level <= x)
            .map(|e| e.count as u64)
            .sum())
    }

    /// Twist classes of the catalog: one per cataloged form, each carrying
    /// the multiplicity t(N) of level-N representatives.
    pub fn twist_classes(&self) -> Vec<TwistClass> {
        self.forms
            .iter()
            .map(|f| TwistClass {
                label: f.label.clone(),
                level: f.level,
                multiplicity: t_multiplicity(f.level),
            })
            .collect()
    }

    pub fn poly(&self, label: &str) -> Result<&ProjPolyRecord> {
        self.polys
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Canonical serializations of all six data files, in the shipped
    /// file order.
    pub fn to_canonical_files(&self) -> Vec<(&'static str, String)> {
        vec![
            ("table1.json", to_canonical_json(&self.table1)),
            ("table2.json", to_canonical_json(&self.table2)),
            ("table3.json", to_canonical_json(&self.table3)),
            (
                "forms.json",
                to_canonical_json(&FormsFile { forms: self.forms.clone() }),
            ),
            (
                "polys.json",
                to_canonical_json(&PolysFile { polys: self.polys.clone() }),
            ),
            (
                "identities.json",
                to_canonical_json(&IdentitiesFile { identities: self.identities.clone() }),
            ),
        ]
    }
}

impl FormResolver for Catalog {
    fn form_expr(&self, label: &str) -> Result<(u64, Expr)> {
        let f = self.form(label)?;
        Ok((f.level, f.expression.clone()))
    }
}

/// The canonical on-disk serialization: pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Builds the standard label `Delta_<k>_<N>[_<signs>][_<a|b>]`.
///
/// The weight-4 level-8 cusp generator keeps its traditional name
/// `Delta_8_4_plus` with the subscripts in the other order.
pub fn form_label(weight: i64, level: u64, signs: &Signs, twin: Option<char>) -> String {
    if weight == 4 && level == 8 && signs.0 == vec![1] {
        return "Delta_8_4_plus".to_string();
    }
    let mut label = format!("Delta_{}_{}", weight, level);
    let frag = signs.label_fragment();
    if !frag.is_empty() {
        label.push('_');
        label.push_str(&frag);
    }
    if let Some(c) = twin {
        label.push('_');
        label.push(c);
    }
    label
}

/// Coefficients of a_p for p exactly dividing the level, as forced by the
/// sign formula (e = 1) or the vanishing rule (e > 1).
pub fn bad_prime_ap(level: u64, weight: i64, signs: &Signs) -> Vec<(u64, BigInt)> {
    crate::arith::factorize(level)
        .iter()
        .zip(&signs.0)
        .map(|(&(p, e), &eps)| {
            let ap = if e == 1 {
                -BigInt::from(eps) * BigInt::from(p).pow((weight / 2 - 1) as u32)
            } else {
                BigInt::from(0)
            };
            (p, ap)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_shapes() {
        assert_eq!(form_label(12, 1, &Signs::empty(), None), "Delta_12_1");
        assert_eq!(form_label(22, 3, &Signs(vec![1]), Some('a')), "Delta_22_3_plus_a");
        assert_eq!(form_label(50, 6, &Signs(vec![-1, -1]), None), "Delta_50_6_minus_minus");
    }

    #[test]
    fn bad_prime_coefficients() {
        let v = bad_prime_ap(6, 8, &Signs(vec![-1, 1]));
        assert_eq!(v[0], (2, BigInt::from(8)));
        assert_eq!(v[1], (3, BigInt::from(-27)));
        let v = bad_prime_ap(8, 8, &Signs(vec![1]));
        assert_eq!(v[0], (2, BigInt::from(0)));
    }
}
