//! Mod-ell analysis of the catalog: normalized squares s_p, the
//! correspondence between s_p and factorization degree patterns of the
//! stored defining polynomials, degeneracy certificates of Eisenstein type,
//! congruence checking with Sturm-style bounds, and the discriminant-weight
//! rule.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

use crate::arith::{factor_degrees_mod_p, kronecker, mod_pow, primes_up_to, FactorPattern, Partition};
use crate::qseries::QSeries;
use crate::{Error, Result};

/// The residual primes treated by the catalog.
pub const ELLS: [u64; 4] = [2, 3, 5, 7];

/// Normalized square s_p = a_p^2 / p^(k-1) reduced into F_ell (p != ell).
pub fn sp_reduce(ap: &BigInt, p: u64, k: i64, ell: u64) -> Result<u64> {
    if p == ell {
        return Err(Error::PEqualsEll(p));
    }
    let ap_mod = ap.mod_floor(&BigInt::from(ell)).to_u64().unwrap();
    let pk1 = mod_pow(p % ell, (k - 1) as u64, ell);
    let inv = mod_pow(pk1, ell - 2, ell);
    Ok(ap_mod * ap_mod % ell * inv % ell)
}

/// Factor-degree partitions that can occur at a prime unramified in the
/// projective field, for a given value of s_p in F_ell.
///
/// These are exactly the cycle types of elements of PGL_2(F_ell) acting on
/// the projective line, grouped by s = tr^2/det; the enumeration test below
/// derives the table from scratch.
pub fn correspondence(ell: u64, s: u64) -> Vec<Partition> {
    let parts: &[&[u32]] = match (ell, s) {
        (2, 0) => &[&[2, 1], &[1, 1, 1]],
        (2, 1) => &[&[3]],
        (3, 0) => &[&[2, 2], &[2, 1, 1]],
        (3, 1) => &[&[3, 1], &[1, 1, 1, 1]],
        (3, 2) => &[&[4]],
        (5, 0) => &[&[2, 2, 2], &[2, 2, 1, 1]],
        (5, 1) => &[&[3, 3]],
        (5, 2) => &[&[4, 1, 1]],
        (5, 3) => &[&[6]],
        (5, 4) => &[&[5, 1], &[1, 1, 1, 1, 1, 1]],
        (7, 0) => &[&[2, 2, 2, 2], &[2, 2, 2, 1, 1]],
        (7, 1) => &[&[3, 3, 1, 1]],
        (7, 2) => &[&[4, 4]],
        (7, 3) => &[&[6, 1, 1]],
        (7, 4) => &[&[7, 1], &[1, 1, 1, 1, 1, 1, 1, 1]],
        (7, 5) => &[&[8]],
        (7, 6) => &[&[8]],
        _ => &[],
    };
    parts.iter().map(|p| Partition::new(p.to_vec())).collect()
}

/// The generic partitions for each s (semisimple non-central classes); a
/// surjective projective image realizes all of these at unramified primes.
pub fn generic_partitions(ell: u64) -> Vec<(u64, Partition)> {
    let rows: &[(u64, &[u32])] = match ell {
        2 => &[(0, &[2, 1]), (1, &[3])],
        3 => &[(0, &[2, 2]), (1, &[3, 1]), (2, &[4])],
        5 => &[(0, &[2, 2, 2]), (1, &[3, 3]), (2, &[4, 1, 1]), (3, &[6]), (4, &[5, 1])],
        7 => &[
            (0, &[2, 2, 2, 2]),
            (1, &[3, 3, 1, 1]),
            (2, &[4, 4]),
            (3, &[6, 1, 1]),
            (4, &[7, 1]),
            (5, &[8]),
        ],
        _ => &[],
    };
    rows.iter().map(|&(s, p)| (s, Partition::new(p.to_vec()))).collect()
}

/// Prime factorization of a field discriminant with its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscFactorization {
    pub factors: Vec<(u64, u32)>,
    pub sign: i8,
}

impl DiscFactorization {
    pub fn ord(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for &(p, e) in &self.factors {
            v *= BigInt::from(p).pow(e);
        }
        v
    }
}

impl Serialize for DiscFactorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde_json::{json, Value};
        let mut arr: Vec<Value> = self.factors.iter().map(|&(p, e)| json!([p, e])).collect();
        arr.push(json!(self.sign));
        Value::Array(arr).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscFactorization {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let arr = v.as_array().ok_or_else(|| D::Error::custom("disc must be an array"))?;
        if arr.is_empty() {
            return Err(D::Error::custom("disc must end with a sign"));
        }
        let sign = arr.last().unwrap().as_i64().ok_or_else(|| D::Error::custom("disc sign"))? as i8;
        let mut factors = Vec::new();
        for item in &arr[..arr.len() - 1] {
            let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| D::Error::custom("disc factor"))?;
            let p = pair[0].as_u64().ok_or_else(|| D::Error::custom("disc prime"))?;
            let e = pair[1].as_u64().ok_or_else(|| D::Error::custom("disc exponent"))? as u32;
            factors.push((p, e));
        }
        Ok(DiscFactorization { factors, sign })
    }
}

/// A stored defining polynomial of a projective mod-ell representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjPolyRecord {
    pub label: String,
    pub ell: u64,
    pub level: u64,
    /// Integer coefficients, lowest degree first.
    pub coeffs: Vec<i64>,
    pub disc: DiscFactorization,
    /// Number of catalog newforms this polynomial governs.
    pub governs: u32,
    /// Set when the printed source is unusable as data (see notes).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<String>,
    /// Provenance remark that does not affect behavior.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ProjPolyRecord {
    pub fn coeffs_bigint(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Violations of the stored-discriminant invariants, empty when clean:
    /// primes dividing the discriminant divide N*ell, and for odd ell the
    /// discriminant is a square times chi_-4(ell) * ell.
    pub fn disc_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for &(p, _) in &self.disc.factors {
            if (self.level * self.ell) % p != 0 {
                bad.push(format!("prime {} divides disc but not N*ell", p));
            }
        }
        if self.ell % 2 == 1 {
            let want_sign = kronecker(-4, self.ell as i64) as i8;
            if self.disc.sign != want_sign {
                bad.push(format!("disc sign {} but chi_-4(ell) = {}", self.disc.sign, want_sign));
            }
            for &(p, e) in &self.disc.factors {
                let want_odd = p == self.ell;
                if (e % 2 == 1) != want_odd {
                    bad.push(format!("ord_{}(disc) = {} has wrong parity", p, e));
                }
            }
        }
        bad
    }
}

/// Minimal weight forced by ramification at ell: if ord_ell(D) >= ell + 2
/// the polynomial arises from weight ord_ell(D) + 2 - ell and no lower.
pub fn weight_from_disc(poly: &ProjPolyRecord) -> Option<i64> {
    let ord = poly.disc.ord(poly.ell) as i64;
    if ord >= poly.ell as i64 + 2 {
        Some(ord + 2 - poly.ell as i64)
    } else {
        None
    }
}

/// Verdict of matching one newform against one defining polynomial.
#[derive(Clone, Debug)]
pub struct MatchVerdict {
    pub consistent: bool,
    /// First prime where the observed partition is not allowed, with the
    /// s_p value and the observed partition.
    pub failure: Option<(u64, u64, Partition)>,
    /// Primes skipped because the polynomial is not squarefree mod p.
    pub skipped: Vec<u64>,
    /// Primes actually checked.
    pub checked: Vec<u64>,
}

/// Factor patterns of one polynomial at every admissible prime up to a
/// bound, computed once and shared across the forms being matched.
#[derive(Clone, Debug)]
pub struct PolyPatterns {
    pub ell: u64,
    pub level: u64,
    pub patterns: Vec<(u64, FactorPattern)>,
}

impl PolyPatterns {
    pub fn compute(poly: &ProjPolyRecord, pmax: u64) -> Result<PolyPatterns> {
        let coeffs = poly.coeffs_bigint();
        let mut patterns = Vec::new();
        for p in primes_up_to(pmax) {
            if (poly.level * poly.ell) % p == 0 {
                continue;
            }
            patterns.push((p, factor_degrees_mod_p(&coeffs, p)?));
        }
        Ok(PolyPatterns { ell: poly.ell, level: poly.level, patterns })
    }
}

/// Checks, for every admissible prime p <= pmax, that the factor pattern of
/// the polynomial mod p is allowed for the form's s_p. Primes dividing
/// N*ell and primes of non-squarefree reduction are skipped.
pub fn match_form_to_poly(
    expansion: &QSeries,
    level: u64,
    k: i64,
    poly: &ProjPolyRecord,
    pmax: u64,
) -> Result<MatchVerdict> {
    let patterns = PolyPatterns::compute(poly, pmax)?;
    match_form_to_patterns(expansion, level, k, &patterns)
}

/// The matching loop against precomputed polynomial patterns.
pub fn match_form_to_patterns(
    expansion: &QSeries,
    level: u64,
    k: i64,
    patterns: &PolyPatterns,
) -> Result<MatchVerdict> {
    let ell = patterns.ell;
    debug_assert_eq!(level, patterns.level);
    let mut verdict =
        MatchVerdict { consistent: true, failure: None, skipped: vec![], checked: vec![] };
    for (p, pattern) in &patterns.patterns {
        let p = *p;
        if p as usize >= expansion.precision() {
            break;
        }
        match pattern {
            FactorPattern::NonSquarefree => verdict.skipped.push(p),
            FactorPattern::Degrees(lambda) => {
                let ap = expansion.coeff(p as usize);
                debug_assert!(ap.is_integer());
                let s = sp_reduce(&ap.to_integer(), p, k, ell)?;
                let allowed = correspondence(ell, s);
                verdict.checked.push(p);
                if !allowed.contains(lambda) {
                    verdict.consistent = false;
                    verdict.failure = Some((p, s, lambda.clone()));
                    break;
                }
            }
        }
    }
    Ok(verdict)
}

/// Partitions observed among the squarefree reductions of a polynomial for
/// admissible p <= pmax, for surjectivity witnessing.
pub fn observed_partitions(poly: &ProjPolyRecord, pmax: u64) -> Result<BTreeSet<Partition>> {
    let coeffs = poly.coeffs_bigint();
    let mut seen = BTreeSet::new();
    for p in primes_up_to(pmax) {
        if (poly.level * poly.ell) % p == 0 {
            continue;
        }
        if let FactorPattern::Degrees(lambda) = factor_degrees_mod_p(&coeffs, p)? {
            seen.insert(lambda);
        }
    }
    Ok(seen)
}

/// Searches for exponents 0 <= i <= j <= ell-2 with a_p = p^i + p^j mod ell
/// for every admissible prime p <= pmax, certifying a cyclic (degenerate)
/// projective image.
pub fn classify_degenerate(
    expansion: &QSeries,
    level: u64,
    k: i64,
    ell: u64,
    pmax: u64,
) -> Option<(u32, u32)> {
    let _ = k;
    let ps: Vec<u64> = primes_up_to(pmax)
        .into_iter()
        .filter(|&p| (level * ell) % p != 0 && (p as usize) < expansion.precision())
        .collect();
    let ellb = BigInt::from(ell);
    for i in 0..=(ell - 2) as u32 {
        'pair: for j in i..=(ell - 2) as u32 {
            for &p in &ps {
                let want = (mod_pow(p % ell, i as u64, ell) + mod_pow(p % ell, j as u64, ell)) % ell;
                let ap = expansion.coeff(p as usize).to_integer().mod_floor(&ellb);
                if ap != BigInt::from(want) {
                    continue 'pair;
                }
            }
            return Some((i, j));
        }
    }
    None
}

/// True when a_n(g1) = a_n(g2) mod m for all 1 <= n <= bound.
pub fn congruent_series(g1: &QSeries, g2: &QSeries, m: &BigInt, bound: usize) -> Result<bool> {
    if bound >= g1.precision() || bound >= g2.precision() {
        return Err(Error::PrecisionTooLow {
            have: g1.precision().min(g2.precision()),
            want: bound + 1,
        });
    }
    for n in 1..=bound {
        let d = g1.coeff(n) - g2.coeff(n);
        debug_assert!(d.is_integer());
        if !d.to_integer().mod_floor(m).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sturm-style coefficient bound floor(k N prod(1 + 1/p) / 12) + 1.
pub fn sturm_bound(k: i64, level: u64) -> u64 {
    let mut num = BigRational::from_integer((k * level as i64).into());
    for (p, _) in crate::arith::factorize(level) {
        num *= BigRational::new((p + 1).into(), p.into());
    }
    let idx = (num / BigRational::from_integer(12.into())).floor().to_integer();
    idx.to_u64().unwrap() + 1
}

/// The two weight-graded chains of level-2 newforms congruent mod 7, with
/// their common residual expansions through q^8.
pub const MOD7_CHAINS: [(&[&str], [u64; 9]); 2] = [
    (
        &["Delta_8_2_plus", "Delta_14_2_plus", "Delta_20_2_plus", "Delta_26_2_plus"],
        [0, 1, 6, 5, 1, 0, 2, 1, 6],
    ),
    (
        &["Delta_10_2_minus", "Delta_22_2_minus", "Delta_28_2_minus", "Delta_40_2_minus"],
        [0, 1, 2, 5, 4, 2, 3, 0, 1],
    ),
];

/// Report of one chain verification.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub labels: Vec<String>,
    pub congruent: bool,
    pub residual_matches: bool,
    pub residual: Vec<u64>,
}

/// Verifies both mod-7 chains: all members congruent coefficient-wise up to
/// `bound`, and the common residual matching the stored series through q^8.
pub fn mod7_chain_check(
    lookup: &dyn Fn(&str) -> Result<QSeries>,
    bound: usize,
) -> Result<Vec<ChainReport>> {
    let seven = BigInt::from(7);
    let mut out = Vec::new();
    for (labels, residual) in MOD7_CHAINS {
        let series: Vec<QSeries> =
            labels.iter().map(|l| lookup(l)).collect::<Result<Vec<_>>>()?;
        let mut congruent = true;
        for g in &series[1..] {
            if !congruent_series(&series[0], g, &seven, bound)? {
                congruent = false;
            }
        }
        let got = series[0].mod_m(&seven);
        let got: Vec<u64> = got.iter().take(9).map(|b| b.to_u64().unwrap()).collect();
        let residual_matches = got == residual;
        out.push(ChainReport {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            congruent,
            residual_matches,
            residual: got,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn sp_reduce_examples() {
        // a_p even means s_p = 0 in F_2
        assert_eq!(sp_reduce(&BigInt::from(-24), 3, 12, 2).unwrap(), 0);
        assert_eq!(sp_reduce(&BigInt::from(0), 11, 8, 7).unwrap(), 0);
        // s_3 = 44^2 / 3^7 = 6 in F_7
        assert_eq!(sp_reduce(&BigInt::from(44), 3, 8, 7).unwrap(), 6);
        assert_eq!(sp_reduce(&BigInt::from(-84), 3, 8, 7).unwrap(), 0);
        assert!(sp_reduce(&BigInt::from(1), 7, 8, 7).is_err());
    }

    #[test]
    fn sturm_bounds() {
        assert_eq!(sturm_bound(22, 3), 8);
        assert_eq!(sturm_bound(16, 8), 17);
        assert_eq!(sturm_bound(12, 1), 2);
    }

    #[test]
    fn weight_rule_from_disc() {
        let rec = |ell: u64, factors: Vec<(u64, u32)>| ProjPolyRecord {
            label: "t".into(),
            ell,
            level: 8,
            coeffs: vec![1, 1],
            disc: DiscFactorization { factors, sign: 1 },
            governs: 0,
            defect: None,
            note: None,
        };
        assert_eq!(weight_from_disc(&rec(5, vec![(2, 6), (5, 7)])), Some(4));
        assert_eq!(weight_from_disc(&rec(5, vec![(2, 6), (5, 9)])), Some(6));
        assert_eq!(weight_from_disc(&rec(7, vec![(2, 6), (3, 6), (7, 9)])), Some(4));
        assert_eq!(weight_from_disc(&rec(5, vec![(5, 5)])), None);
    }

    #[test]
    fn congruence_trivial_and_bounds() {
        let g = QSeries::from_ints(&[0, 1, 5, 9, 13]);
        assert!(congruent_series(&g, &g, &BigInt::from(97), 3).unwrap());
        let h = QSeries::from_ints(&[0, 1, 5, 9, 20]);
        assert!(congruent_series(&g, &h, &BigInt::from(7), 4).unwrap());
        assert!(!congruent_series(&g, &h, &BigInt::from(4), 4).unwrap());
        assert!(congruent_series(&g, &h, &BigInt::from(4), 5).is_err());
    }

    /// Enumerates PGL_2(F_ell) and groups cycle types on the projective line
    /// by s = tr^2/det; the correspondence table must agree exactly.
    #[test]
    fn correspondence_matches_group_enumeration() {
        for ell in ELLS {
            let mut by_s: BTreeMap<u64, BTreeSet<Partition>> = BTreeMap::new();
            let points = projective_line(ell);
            let mut seen = BTreeSet::new();
            for a in 0..ell {
                for b in 0..ell {
                    for c in 0..ell {
                        for d in 0..ell {
                            let det = (a * d % ell + ell - b * c % ell) % ell;
                            if det == 0 {
                                continue;
                            }
                            // canonical representative modulo scalars
                            let mut reps: Vec<[u64; 4]> = (1..ell)
                                .map(|t| [a * t % ell, b * t % ell, c * t % ell, d * t % ell])
                                .collect();
                            reps.sort_unstable();
                            let canon = reps[0];
                            if !seen.insert(canon) {
                                continue;
                            }
                            let tr = (a + d) % ell;
                            let s = tr * tr % ell * mod_pow(det, ell - 2, ell) % ell;
                            let cycle = cycle_type(&[a, b, c, d], &points, ell);
                            by_s.entry(s).or_default().insert(cycle);
                        }
                    }
                }
            }
            for (s, types) in by_s {
                let table: BTreeSet<Partition> = correspondence(ell, s).into_iter().collect();
                assert_eq!(types, table, "ell = {}, s = {}", ell, s);
            }
        }
    }

    fn projective_line(ell: u64) -> Vec<(u64, u64)> {
        let mut pts: Vec<(u64, u64)> = (0..ell).map(|x| (x, 1)).collect();
        pts.push((1, 0));
        pts
    }

    fn cycle_type(m: &[u64; 4], points: &[(u64, u64)], ell: u64) -> Partition {
        let norm = |x: u64, y: u64| -> (u64, u64) {
            if y != 0 {
                let inv = mod_pow(y, ell - 2, ell);
                (x * inv % ell, 1)
            } else {
                (1, 0)
            }
        };
        let apply = |pt: (u64, u64)| -> (u64, u64) {
            let (x, y) = pt;
            norm((m[0] * x + m[1] * y) % ell, (m[2] * x + m[3] * y) % ell)
        };
        let mut visited = vec![false; points.len()];
        let mut parts = Vec::new();
        for start in 0..points.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0u32;
            let mut cur = points[start];
            loop {
                let idx = points.iter().position(|&p| p == cur).unwrap();
                if visited[idx] {
                    break;
                }
                visited[idx] = true;
                len += 1;
                cur = apply(cur);
            }
            parts.push(len);
        }
        Partition::new(parts)
    }

    #[test]
    fn generic_partitions_are_in_correspondence() {
        for ell in ELLS {
            for (s, p) in generic_partitions(ell) {
                assert!(correspondence(ell, s).contains(&p));
                assert_eq!(p.sum() as u64, ell + 1);
            }
        }
    }

    #[test]
    fn disc_serialization_round_trip() {
        let d = DiscFactorization { factors: vec![(2, 8), (7, 13)], sign: -1 };
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, "[[2,8],[7,13],-1]");
        let back: DiscFactorization = serde_json::from_str(&json).unwrap();
        assert_eq!(d, back);
        assert_eq!(d.value(), BigInt::from(-256i64 * 96889010407));
    }
}
