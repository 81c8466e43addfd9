//! Bounded search for defining polynomials matching the catalog's s_p data,
//! used to repair the two defective printed polynomials (f_8b, F_3b).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rnf_core::arith::{factor_degrees_mod_p, primes_up_to, FactorPattern, Partition};
use rnf_core::galrep::{correspondence, sp_reduce};
use rnf_core::shell::Catalog;

/// true when the pattern is allowed (non-squarefree reductions pass).
fn allowed(pat: &FactorPattern, allowed_set: &[Partition]) -> bool {
    match pat {
        FactorPattern::NonSquarefree => true,
        FactorPattern::Degrees(p) => allowed_set.contains(p),
    }
}

fn poly_from(head: &[i64], tail: &[i64]) -> Vec<BigInt> {
    // head: descending from the leading coefficient; tail: ascending c0..;
    // output ascending
    let mut out: Vec<BigInt> = tail.iter().map(|&c| BigInt::from(c)).collect();
    out.extend(head.iter().rev().map(|&c| BigInt::from(c)));
    out
}

/// disc(f) for monic f via the subresultant-free route: Res(f, f') / lc(f).
fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let deriv: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i as i64))
        .collect();
    let res = resultant(f, &deriv);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    res * BigInt::from(sign)
}

/// Resultant over Q of integer polynomials (exact, via fraction-free
/// pseudo-remainders would be cleaner; rational arithmetic is fine here).
fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    use num_rational::BigRational;
    let to_rat = |v: &[BigInt]| -> Vec<BigRational> {
        v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let mut a = to_rat(a);
    let mut b = to_rat(b);
    let mut acc = BigRational::from_integer(1.into());
    loop {
        while b.last().is_some_and(|c| c.is_zero()) {
            b.pop();
        }
        if b.is_empty() {
            return BigInt::zero();
        }
        if b.len() == 1 {
            let da = a.len() - 1;
            let r = acc * b[0].pow(da as i32);
            assert!(r.is_integer());
            return r.to_integer();
        }
        let (da, db) = (a.len() - 1, b.len() - 1);
        if da < db {
            std::mem::swap(&mut a, &mut b);
            if da % 2 == 1 && db % 2 == 1 {
                acc = -acc;
            }
            continue;
        }
        // a mod b
        let mut r = a.clone();
        for k in (db..=da).rev() {
            let f = &r[k] / &b[db];
            if f.is_zero() {
                continue;
            }
            for i in 0..=db {
                let t = &f * &b[i];
                r[k - db + i] -= t;
            }
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            return BigInt::zero();
        }
        let dr = r.len() - 1;
        acc *= b[db].pow((da - dr) as i32);
        if da % 2 == 1 && db % 2 == 1 {
            acc = -acc;
        }
        a = b;
        b = r;
    }
}

/// disc must equal sign * ell^odd * 2^even * square; test via stripping.
fn disc_shape_ok(disc: &BigInt, ell: u64, want_sign: i8) -> bool {
    if disc.is_zero() {
        return false;
    }
    if (disc.is_negative() && want_sign > 0) || (disc.is_positive() && want_sign < 0) {
        return false;
    }
    let ellb = BigInt::from(ell);
    let mut v = disc.abs();
    if (&v % &ellb).is_zero() {
        v /= &ellb;
    } else {
        return false;
    }
    // v must be a perfect square now
    let s = v.sqrt();
    &s * &s == v
}

struct Target {
    name: &'static str,
    ell: u64,
    level: u64,
    form_labels: Vec<&'static str>,
    head: Vec<i64>,
    tail_len: usize,
    bound: i64,
    disc_sign: i8,
}

fn main() {
    let cat = Catalog::builtin().unwrap();
    let prec = 252;
    let mut expansions = std::collections::BTreeMap::new();

    let targets = vec![
        Target {
            name: "f_8b",
            ell: 5,
            level: 8,
            form_labels: vec!["Delta_6_8_minus", "Delta_10_8_plus", "Delta_16_8_minus_a"],
            head: vec![1, -2],
            tail_len: 5,
            bound: 20,
            disc_sign: 1,
        },
        Target {
            name: "F_3b",
            ell: 7,
            level: 3,
            form_labels: vec![],
            head: vec![1, -3, -7, 49, 42],
            tail_len: 4,
            bound: 90,
            disc_sign: -1,
        },
    ];

    // identify the F_3b forms: level-3 non-degenerate forms not matching F_3a
    let f3a = cat.poly("F_3a").unwrap();
    let mut f3b_forms: Vec<String> = Vec::new();
    for f in cat.forms_at(Some(3), None, None) {
        let g = cat.expansion(&f.label, prec).unwrap();
        let m = rnf_core::galrep::match_form_to_poly(&g, 3, f.weight, f3a, 200).unwrap();
        let degen = rnf_core::galrep::classify_degenerate(&g, 3, f.weight, 7, 200);
        if !m.consistent && degen.is_none() {
            f3b_forms.push(f.label.clone());
        }
        expansions.insert(f.label.clone(), g);
    }
    println!("F_3b candidate forms: {:?}", f3b_forms);

    for t in targets {
        let labels: Vec<String> = if t.form_labels.is_empty() {
            f3b_forms.clone()
        } else {
            t.form_labels.iter().map(|s| s.to_string()).collect()
        };
        for l in &labels {
            if !expansions.contains_key(l) {
                expansions.insert(l.clone(), cat.expansion(l, prec).unwrap());
            }
        }
        println!("== searching {} (head {:?}, |tail| <= {})", t.name, t.head, t.bound);

        // s_p for each reference form and admissible prime
        let primes: Vec<u64> = primes_up_to(200)
            .into_iter()
            .filter(|&p| (t.level * t.ell) % p != 0 && (p as usize) < prec)
            .collect();
        let forms: Vec<(&str, i64)> = labels
            .iter()
            .map(|l| (l.as_str(), cat.form(l).unwrap().weight))
            .collect();
        // allowed partitions per prime (intersection over the reference forms)
        let mut allowed_by_p: Vec<(u64, Vec<Partition>)> = Vec::new();
        for &p in &primes {
            let mut sets: Vec<Vec<Partition>> = Vec::new();
            for (l, k) in &forms {
                let ap = expansions[*l].coeff(p as usize).to_integer();
                let s = sp_reduce(&ap, p, *k, t.ell).unwrap();
                sets.push(correspondence(t.ell, s));
            }
            let first = sets[0].clone();
            let inter: Vec<Partition> =
                first.into_iter().filter(|q| sets.iter().all(|s| s.contains(q))).collect();
            allowed_by_p.push((p, inter));
        }
        // sanity: reference forms must agree projectively
        for (p, inter) in &allowed_by_p {
            if inter.is_empty() {
                println!("  reference forms disagree at p = {}; aborting target", p);
            }
        }
        if allowed_by_p.iter().any(|(_, i)| i.is_empty()) {
            continue;
        }

        // fast filter tables for the first few primes
        let table_primes: Vec<u64> =
            primes.iter().copied().filter(|&p| p <= 11).collect();
        let mut tables: Vec<(u64, Vec<bool>)> = Vec::new();
        for &p in &table_primes {
            let set = &allowed_by_p.iter().find(|(q, _)| *q == p).unwrap().1;
            let size = (p as usize).pow((t.tail_len + t.head.len()) as u32 - 1);
            let mut tbl = vec![false; size];
            // enumerate all residue vectors of the non-leading coefficients
            let deg = t.tail_len + t.head.len() - 1;
            let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); deg + 1];
            coeffs[deg] = BigInt::from(t.head[0]);
            for (idx, slot) in tbl.iter_mut().enumerate() {
                let mut rem = idx;
                for c in coeffs.iter_mut().take(deg) {
                    *c = BigInt::from((rem % p as usize) as i64);
                    rem /= p as usize;
                }
                let pat = factor_degrees_mod_p(&coeffs, p).unwrap();
                *slot = allowed(&pat, set);
            }
            tables.push((p, tbl));
        }

        let head_rest = &t.head[1..];
        let deg = t.tail_len + t.head.len() - 1;
        let mut tail = vec![-t.bound; t.tail_len];
        let mut survivors: Vec<(i64, Vec<i64>)> = Vec::new();
        'outer: loop {
            // table filters
            let mut pass = true;
            for (p, tbl) in &tables {
                let pu = *p as i64;
                let mut idx = 0usize;
                let mut mult = 1usize;
                for &c in &tail {
                    idx += (c.rem_euclid(pu) as usize) * mult;
                    mult *= *p as usize;
                }
                for &c in head_rest.iter().rev() {
                    idx += (c.rem_euclid(pu) as usize) * mult;
                    mult *= *p as usize;
                }
                if !tbl[idx] {
                    pass = false;
                    break;
                }
            }
            if pass {
                let f = poly_from(&t.head, &tail);
                debug_assert_eq!(f.len(), deg + 1);
                let mut ok = true;
                for (p, set) in &allowed_by_p {
                    if *p <= 11 {
                        continue;
                    }
                    let pat = factor_degrees_mod_p(&f, *p).unwrap();
                    if !allowed(&pat, set) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    let disc = discriminant(&f);
                    if disc_shape_ok(&disc, t.ell, t.disc_sign) {
                        let weight: i64 = tail.iter().map(|c| c.abs()).sum();
                        println!("  candidate tail {:?} (disc {})", tail, disc);
                        survivors.push((weight, tail.clone()));
                    }
                }
            }
            // increment
            for i in 0..t.tail_len {
                tail[i] += 1;
                if tail[i] <= t.bound {
                    continue 'outer;
                }
                tail[i] = -t.bound;
            }
            break;
        }
        survivors.sort();
        println!("  {} survivors; smallest: {:?}", survivors.len(), survivors.first());
    }
}
