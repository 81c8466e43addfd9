//! The random-polynomial splitting model: ensemble volumes V_d(w),
//! splitting probabilities, their weight-indexed specialization, and the
//! exact lattice counts behind the quadratic-ensemble picture.
//!
//! The probability that a degree-d ensemble polynomial factors as a degree-r
//! times a degree-s polynomial is the volume ratio V_r V_s / (2^[r=s] V_d).
//! Everything is computed in log space so that values as small as 1e-37
//! come out without underflow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Parameters of one ensemble: scale w = p^((k-1)/2) and a split r + s = d.
#[derive(Clone, Copy, Debug)]
pub struct EnsembleParams {
    pub p: u64,
    pub k: i64,
    pub r: u32,
    pub s: u32,
}

impl EnsembleParams {
    pub fn degree(&self) -> u32 {
        self.r + self.s
    }

    pub fn scale(&self) -> f64 {
        (self.p as f64).powf((self.k as f64 - 1.0) / 2.0)
    }
}

/// ln of the volume coefficient: V_d(w) = coeff(d) * w^(d(d+1)/2).
fn ln_volume_coeff(d: u32) -> f64 {
    let mut acc = d as f64 * (2.0f64).ln();
    for j in 1..=d as u64 {
        acc -= (j as f64).ln();
    }
    for j in 1..=d {
        let ratio = (2.0 * j as f64) / (2.0 * j as f64 - 1.0);
        acc += (d + 1 - j) as f64 * ratio.ln();
    }
    acc
}

/// ln V_d(w).
pub fn ln_volume(d: u32, w: f64) -> f64 {
    ln_volume_coeff(d) + (d as f64 * (d as f64 + 1.0) / 2.0) * w.ln()
}

/// Approximate number of monic degree-d integer polynomials with all roots
/// real and in [-2w, 2w].
pub fn volume(d: u32, w: f64) -> f64 {
    ln_volume(d, w).exp()
}

/// ln of the splitting probability V_r V_s / (2^[r=s] V_d) at scale w.
pub fn ln_prob_split(r: u32, s: u32, w: f64) -> f64 {
    let d = r + s;
    let mut acc = ln_volume(r, w) + ln_volume(s, w) - ln_volume(d, w);
    if r == s {
        acc -= (2.0f64).ln();
    }
    acc
}

/// Splitting probability as a plain double; use [`ln_prob_split`] when the
/// value may underflow.
pub fn prob_split(r: u32, s: u32, w: f64) -> f64 {
    ln_prob_split(r, s, w).exp()
}

/// The same coefficient assembled without evaluating any volume: the ratio
/// of volume coefficients collapses to an explicit product, which checks the
/// volume route independently.
pub fn ln_prob_split_coeff_form(r: u32, s: u32, w: f64) -> f64 {
    let d = r + s;
    // d!/(r! s!)
    let mut acc = 0.0f64;
    for j in 1..=d as u64 {
        acc += (j as f64).ln();
    }
    for j in 1..=r as u64 {
        acc -= (j as f64).ln();
    }
    for j in 1..=s as u64 {
        acc -= (j as f64).ln();
    }
    if r == s {
        acc -= (2.0f64).ln();
    }
    // product of the per-j volume-coefficient ratios
    for j in 1..=d {
        let ratio = (2.0 * j as f64) / (2.0 * j as f64 - 1.0);
        let mut e = 0i64;
        if j <= r {
            e += (r + 1 - j) as i64;
        }
        if j <= s {
            e += (s + 1 - j) as i64;
        }
        e -= (d + 1 - j) as i64;
        acc += e as f64 * ratio.ln();
    }
    acc - (r as f64 * s as f64) * w.ln()
}

/// Heuristic weight-indexed splitting chance Pr_(r,s)(k), evaluated at the
/// p-independent scale 2^((k-1)/2).
pub fn pr_of_weight(r: u32, s: u32, k: i64) -> f64 {
    assert!(k % 2 == 0, "weight must be even");
    let ln_w = (k as f64 - 1.0) / 2.0 * (2.0f64).ln();
    let d = r + s;
    let mut acc = ln_volume_coeff(r) + ln_volume_coeff(s) - ln_volume_coeff(d);
    if r == s {
        acc -= (2.0f64).ln();
    }
    (acc - (r as f64 * s as f64) * ln_w).exp()
}

/// Exact lattice counts for the quadratic ensemble at scale w = sqrt(w2):
/// the number of integer pairs (b, c) such that x^2 + bx + c has both roots
/// real in [-2w, 2w], and the number of those splitting over the integers
/// (unordered root pairs a1 <= a2 with |a_i| <= 2w).
pub fn count_quadratics(w2: &BigRational) -> (u64, u64) {
    assert!(w2.is_positive(), "w^2 must be positive");
    let four_w2 = w2 * BigRational::from_integer(4.into());
    let a_bound = isqrt_rational_floor(&four_w2);
    let n = 2 * a_bound + 1;
    let split = n * (n + 1) / 2;

    let sixteen_w2 = w2 * BigRational::from_integer(16.into());
    let b_bound = isqrt_rational_floor(&sixteen_w2) as i64;
    let mut total = 0u64;
    for b in -b_bound..=b_bound {
        // c <= b^2/4 and c >= 2w(|b| - 2w), i.e. c + 4w^2 >= 0 with
        // (c + 4w^2)^2 >= 4 w^2 b^2
        let c_max = (b * b).div_euclid(4);
        let c_min = lower_c_bound(w2, b.unsigned_abs());
        if c_min <= c_max {
            total += (c_max - c_min + 1) as u64;
        }
    }
    (total, split)
}

/// Smallest integer c with c >= 2 sqrt(w2) |b| - 4 w2, found by exact
/// rational comparison.
fn lower_c_bound(w2: &BigRational, abs_b: u64) -> i64 {
    let four_w2 = w2 * BigRational::from_integer(4.into());
    let rhs = w2 * BigRational::from_integer(BigInt::from(4 * abs_b as i128 * abs_b as i128));
    let ok = |c: i64| -> bool {
        // c + 4w^2 >= 2 sqrt(w2) |b|
        let lhs = BigRational::from_integer(c.into()) + &four_w2;
        !lhs.is_negative() && &lhs * &lhs >= rhs
    };
    // bracket then binary search
    let mut hi = 1i64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = -1i64;
    while ok(lo) {
        lo *= 2;
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn isqrt_rational_floor(x: &BigRational) -> u64 {
    // floor of sqrt of a positive rational: isqrt of the floor works for the
    // integer lattice test a^2 <= x
    let fl = x.floor().to_integer();
    let s = fl.sqrt();
    let mut v = s.to_u64().unwrap();
    while BigRational::from_integer(BigInt::from((v + 1) as i64 * (v + 1) as i64)) <= *x {
        v += 1;
    }
    while BigRational::from_integer(BigInt::from(v as i64 * v as i64)) > *x {
        v -= 1;
    }
    v
}

/// The lattice points of the quadratic ensemble at scale w = sqrt(w2):
/// all (b, c) in the total region, and the splitting subset.
pub fn figure2_points(w2: &BigRational) -> (Vec<(i64, i64)>, Vec<(i64, i64)>) {
    let sixteen_w2 = w2 * BigRational::from_integer(16.into());
    let b_bound = isqrt_rational_floor(&sixteen_w2) as i64;
    let mut all = Vec::new();
    for b in -b_bound..=b_bound {
        let c_max = (b * b).div_euclid(4);
        let c_min = lower_c_bound(w2, b.unsigned_abs());
        for c in c_min..=c_max {
            all.push((b, c));
        }
    }
    let four_w2 = w2 * BigRational::from_integer(4.into());
    let a_bound = isqrt_rational_floor(&four_w2) as i64;
    let mut split = Vec::new();
    for a1 in -a_bound..=a_bound {
        for a2 in a1..=a_bound {
            split.push((-(a1 + a2), a1 * a2));
        }
    }
    split.sort_unstable();
    split.dedup();
    (all, split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn w2_pow(m: i32) -> BigRational {
        // w = 2^(m/2), so w^2 = 2^m
        BigRational::from_integer(BigInt::from(2).pow(m as u32))
    }

    #[test]
    fn small_volumes() {
        let w = 2f64.powf(2.5);
        assert!((volume(1, w) - 4.0 * w).abs() < 1e-9);
        assert!((volume(2, w) - 32.0 * w.powi(3) / 3.0).abs() < 1e-6);
        assert!((volume(2, w) - 1930.9).abs() < 0.05);
    }

    #[test]
    fn split_probability_examples() {
        let w = 2f64.powf(2.5);
        assert!((prob_split(1, 1, w) - 3.0 / (4.0 * w)).abs() < 1e-12);
        assert!((prob_split(1, 1, w) - 0.1326).abs() < 5e-5);
        assert!((pr_of_weight(1, 1, 6) * 100.0 - 13.3).abs() < 0.05);
        assert!((pr_of_weight(1, 1, 16) * 100.0 - 0.4).abs() < 0.05);
        assert!((pr_of_weight(1, 1, 22) * 100.0 - 0.05).abs() < 0.005);
    }

    #[test]
    fn coefficient_form_matches_volume_ratio() {
        for (r, s) in [(1u32, 1u32), (1, 2), (2, 3), (1, 12), (4, 8), (5, 7), (6, 6)] {
            for &w in &[10.0f64, 2f64.powf(2.5), 123.456] {
                let a = ln_prob_split(r, s, w);
                let b = ln_prob_split_coeff_form(r, s, w);
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "r={} s={} w={}: {} vs {}",
                    r,
                    s,
                    w,
                    a,
                    b
                );
            }
        }
    }

    #[test]
    fn tiny_probabilities_two_significant_figures() {
        let p = pr_of_weight(1, 12, 10);
        assert!((p / 1e-16 - 2.2).abs() < 0.05, "got {}", p);
        let p = pr_of_weight(1, 83, 4);
        assert!((p / 1e-37 - 3.4).abs() < 0.05, "got {}", p);
    }

    #[test]
    fn quadratic_lattice_counts() {
        let (total, split) = count_quadratics(&w2_pow(5));
        assert_eq!((total, split), (1951, 276));
        // tiny scale, cross-checked by brute force below
        let w2 = BigRational::new(1.into(), 4.into());
        let (total, split) = count_quadratics(&w2);
        let (bt, bs) = brute_force_counts(0.5);
        assert_eq!((total, split), (bt, bs));
    }

    #[test]
    fn counts_match_brute_force_at_small_scales() {
        for m in 0..=6 {
            let w2 = w2_pow(m);
            let w = 2f64.powf(m as f64 / 2.0);
            let (total, split) = count_quadratics(&w2);
            let (bt, bs) = brute_force_counts(w);
            assert_eq!((total, split), (bt, bs), "w = 2^{}/2", m);
            assert!(split <= total);
        }
    }

    /// Direct scan of a box with the root-interval test; the root bounds are
    /// evaluated in exact integer arithmetic via squared comparisons.
    fn brute_force_counts(w: f64) -> (u64, u64) {
        let b_lim = (4.0 * w).floor() as i64 + 2;
        let c_lim = (4.0 * w * w).ceil() as i64 + 2;
        let w2_num = (w * w * 4.0).round() as i64; // 4 w^2 is integral for w = 2^(m/2)
        let mut total = 0u64;
        for b in -b_lim..=b_lim {
            for c in -c_lim..=c_lim {
                // disc >= 0
                if b * b < 4 * c {
                    continue;
                }
                // both roots in [-2w, 2w]: f(2w) >= 0, f(-2w) >= 0, |b/2| <= 2w... the
                // vertex condition is b^2 <= 16 w^2
                if b * b > 4 * w2_num {
                    continue;
                }
                // f(±2w) = 4w^2 ± 2wb + c >= 0 <=> c + 4w^2 >= 2w|b|
                let lhs = c + w2_num;
                if lhs < 0 {
                    continue;
                }
                if (lhs as i128) * (lhs as i128) < (w2_num as i128) * (b as i128) * (b as i128) {
                    continue;
                }
                total += 1;
            }
        }
        let a_bound = (2.0 * w).floor() as i64;
        let n = (2 * a_bound + 1) as u64;
        (total, n * (n + 1) / 2)
    }

    #[test]
    fn lattice_counts_approach_volumes() {
        let mut prev_total_err = f64::INFINITY;
        let mut prev_split_err = f64::INFINITY;
        for m in [5, 9, 13] {
            let w = 2f64.powf(m as f64 / 2.0);
            let (total, split) = count_quadratics(&w2_pow(m));
            let total_err = (total as f64 / volume(2, w) - 1.0).abs();
            let split_err = (split as f64 / (volume(1, w).powi(2) / 2.0) - 1.0).abs();
            assert!(total_err < prev_total_err, "total error not decreasing at m={}", m);
            assert!(split_err < prev_split_err, "split error not decreasing at m={}", m);
            prev_total_err = total_err;
            prev_split_err = split_err;
        }
    }

    #[test]
    fn figure2_points_agree_with_counts() {
        let (all, split) = figure2_points(&w2_pow(5));
        assert_eq!(all.len(), 1951);
        assert_eq!(split.len(), 276);
        // every split point lies in the total region
        let all_set: std::collections::HashSet<_> = all.into_iter().collect();
        assert!(split.iter().all(|p| all_set.contains(p)));
    }

    #[test]
    fn pr_ordering_in_weight_and_degree() {
        for (r, s) in [(1u32, 1u32), (1, 2), (2, 2), (1, 4)] {
            for k in (6..=40).step_by(2) {
                assert!(pr_of_weight(r, s, k + 2) < pr_of_weight(r, s, k));
            }
        }
        for k in [6i64, 10, 16] {
            let mut by_rs: Vec<(u32, f64)> = [(1u32, 1u32), (1, 2), (1, 4), (2, 2), (2, 3), (3, 3)]
                .iter()
                .map(|&(r, s)| (r * s, pr_of_weight(r, s, k)))
                .collect();
            by_rs.sort_by_key(|&(rs, _)| rs);
            for pair in by_rs.windows(2) {
                if pair[0].0 < pair[1].0 {
                    assert!(pair[0].1 > pair[1].1, "k={} rs {} vs {}", k, pair[0].0, pair[1].0);
                }
            }
        }
    }

    #[test]
    fn monte_carlo_split_fraction_tracks_prediction() {
        // sample integer points of the total quadratic region and compare the
        // observed splitting fraction with the 3/(4w) prediction
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260810);
        for m in [7i32, 9] {
            let w = 2f64.powf(m as f64 / 2.0);
            let (all, split) = figure2_points(&w2_pow(m));
            let split_set: std::collections::HashSet<_> = split.into_iter().collect();
            let mut hits = 0usize;
            let samples = 4000;
            for _ in 0..samples {
                let p = all[rng.gen_range(0..all.len())];
                if split_set.contains(&p) {
                    hits += 1;
                }
            }
            let frac = hits as f64 / samples as f64;
            let predicted = 3.0 / (4.0 * w);
            assert!(
                (frac - predicted).abs() < 0.35 * predicted,
                "m={} frac={} predicted={}",
                m,
                frac,
                predicted
            );
        }
    }
}
