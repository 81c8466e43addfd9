//! Truncated q-expansions with exact rational coefficients.
//!
//! A [`QSeries`] holds the coefficients of q^0 .. q^(P-1) for an explicit
//! precision P. Arithmetic never reads or writes indices >= P, and products
//! of series with different precisions truncate to the minimum. All
//! coefficients are `BigRational`; nothing in this module touches floating
//! point.
//!
//! Besides ring arithmetic the module provides the series constructors used
//! by the level models ([`eisenstein`], [`eta_product`], [`theta_hex`],
//! [`theta_sq`]) and the operators acting on expansions ([`push_up`],
//! [`hecke_tp`], [`multiplicative_extend`], [`naive_twist`],
//! [`al_sign_from_ap`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{is_fundamental, is_prime, kronecker};
use crate::{Error, Result};

/// Shorthand for an exact rational coefficient.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an exact integer coefficient.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A truncated power series sum a_n q^n, n = 0 .. precision-1, over Q.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[prec {}] {}", self.precision(), self.to_sparse_string(8))
    }
}

impl QSeries {
    /// The zero series at precision `prec`.
    pub fn zero(prec: usize) -> Self {
        QSeries { coeffs: vec![BigRational::zero(); prec] }
    }

    /// The constant series 1 at precision `prec`.
    pub fn one(prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The monomial c * q^n at precision `prec` (zero if n >= prec).
    pub fn monomial(c: BigRational, n: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if n < prec {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds a series from the given exact coefficients.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        QSeries { coeffs }
    }

    /// Builds a series from integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        QSeries { coeffs: coeffs.iter().map(|&c| int(c)).collect() }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^n; panics if n is beyond the precision.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Restricts to a smaller precision (no-op if already smaller).
    pub fn truncate(&self, prec: usize) -> Self {
        QSeries { coeffs: self.coeffs.iter().take(prec).cloned().collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect();
        QSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec).map(|n| &self.coeffs[n] - &other.coeffs[n]).collect();
        QSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product, truncated to the minimum precision of the factors.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.precision().min(other.precision());
        let mut coeffs = vec![BigRational::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs }
    }

    /// Integer power by binary exponentiation at this series' precision.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Self {
        let prec = self.precision();
        assert!(!self.coeffs[0].is_zero(), "series is not a unit");
        let c0 = self.coeffs[0].recip();
        let mut inv = vec![BigRational::zero(); prec];
        inv[0] = c0.clone();
        for n in 1..prec {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &inv[n - k];
                }
            }
            inv[n] = -(acc * &c0);
        }
        QSeries { coeffs: inv }
    }

    /// Exact division g / h when h exactly divides g in the truncated series
    /// ring (h has some leading term c*q^v with v <= order of g). Returns
    /// None if the division leaves a remainder within the joint precision.
    pub fn div_exact(&self, h: &Self) -> Option<Self> {
        let v = h.order()?;
        if let Some(o) = self.order() {
            if o < v {
                return None;
            }
        } else {
            return Some(Self::zero(self.precision().saturating_sub(v)));
        }
        let prec = self.precision().min(h.precision());
        let out_prec = prec - v;
        let lead = h.coeffs[v].recip();
        let mut q = vec![BigRational::zero(); out_prec];
        for n in 0..out_prec {
            let mut acc = self.coeffs[n + v].clone();
            for k in 1..=n {
                if !h.coeffs[v + k].is_zero() {
                    acc -= &h.coeffs[v + k] * &q[n - k];
                }
            }
            q[n] = acc * &lead;
        }
        let check = QSeries { coeffs: q.clone() }.mul(&h.truncate(prec));
        for n in 0..out_prec {
            if check.coeffs[n] != self.coeffs[n] {
                return None;
            }
        }
        Some(QSeries { coeffs: q })
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients reduced mod m (only valid for integral series).
    pub fn mod_m(&self, m: &BigInt) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                let r = c.to_integer() % m;
                if r.is_negative() { r + m } else { r }
            })
            .collect()
    }

    /// Sparse text form `q^n*c + ...`, skipping zero terms.
    pub fn to_sparse_string(&self, max_terms: usize) -> String {
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("q^{}*{}", n, c));
                if parts.len() == max_terms {
                    parts.push("...".to_string());
                    break;
                }
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Dense list of coefficients as decimal strings ("p/q" when fractional).
    pub fn to_dense_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Sum of j-th powers of the positive divisors of n. Panics if n = 0.
pub fn sigma_sum(j: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma_sum requires n >= 1");
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(j);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(j);
            }
        }
        d += 1;
    }
    total
}

/// Which normalized Eisenstein series to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eisenstein {
    /// Weight 4: 1 + 240 sum sigma_3(n) q^n.
    Q,
    /// Weight 6: 1 - 504 sum sigma_5(n) q^n.
    R,
}

/// The normalized Eisenstein series of weight 4 or 6 at precision `prec`.
pub fn eisenstein(kind: Eisenstein, prec: usize) -> QSeries {
    let (j, scale) = match kind {
        Eisenstein::Q => (3, 240i64),
        Eisenstein::R => (5, -504i64),
    };
    let mut coeffs = vec![BigRational::zero(); prec];
    coeffs[0] = BigRational::one();
    for n in 1..prec {
        coeffs[n] = BigRational::from_integer(sigma_sum(j, n as u64) * BigInt::from(scale));
    }
    QSeries::from_coeffs(coeffs)
}

/// An eta product: scale t maps to the exponent of eta(q^t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSpec {
    pub exponents: BTreeMap<u32, i32>,
}

impl EtaSpec {
    pub fn new(pairs: &[(u32, i32)]) -> Self {
        let mut exponents = BTreeMap::new();
        for &(t, e) in pairs {
            if e != 0 {
                *exponents.entry(t).or_insert(0) += e;
            }
        }
        exponents.retain(|_, e| *e != 0);
        EtaSpec { exponents }
    }

    /// Twice the weight: sum of the exponents.
    pub fn weight_x2(&self) -> i64 {
        self.exponents.values().map(|&e| e as i64).sum()
    }

    /// 24 times the leading q-exponent: sum of t * e_t.
    pub fn leading_x24(&self) -> i64 {
        self.exponents.iter().map(|(&t, &e)| t as i64 * e as i64).sum()
    }
}

/// Euler product prod_{n>=1} (1 - q^(tn)) at precision `prec`, expanded by
/// the pentagonal number theorem.
fn euler_factor(t: u32, prec: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); prec];
    coeffs[0] = BigRational::one();
    let t = t as i64;
    let mut k = 1i64;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        let sign = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let mut placed = false;
        for g in [g1, g2] {
            let idx = t * g;
            if idx >= 0 && (idx as usize) < prec {
                coeffs[idx as usize] = sign.clone();
                placed = true;
            }
        }
        if !placed {
            break;
        }
        k += 1;
    }
    QSeries::from_coeffs(coeffs)
}

/// Expands an eta product to a q-series at precision `prec`.
///
/// The leading exponent sum t*e_t / 24 must be a non-negative integer;
/// negative exponents are handled by exact inversion of the unit Euler
/// factors.
pub fn eta_product(spec: &EtaSpec, prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::ZeroPrecision);
    }
    let lead24 = spec.leading_x24();
    if lead24 % 24 != 0 || lead24 < 0 {
        return Err(Error::EtaLeadingExponent(lead24));
    }
    let lead = (lead24 / 24) as usize;
    let mut acc = QSeries::one(prec);
    for (&t, &e) in &spec.exponents {
        let f = euler_factor(t, prec);
        let f = if e < 0 { f.inverse() } else { f };
        acc = acc.mul(&f.pow(e.unsigned_abs()));
    }
    Ok(QSeries::monomial(BigRational::one(), lead, prec).mul(&acc))
}

/// Theta series of the hexagonal form x^2 + xy + y^2 at precision `prec`.
pub fn theta_hex(prec: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); prec.max(1)];
    let bound = (2.0 * (prec as f64).sqrt()).ceil() as i64 + 1;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let n = x * x + x * y + y * y;
            if n >= 0 && (n as usize) < prec {
                coeffs[n as usize] += BigRational::one();
            }
        }
    }
    QSeries::from_coeffs(coeffs)
}

/// Theta series of the square form x^2 at precision `prec`.
pub fn theta_sq(prec: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); prec.max(1)];
    coeffs[0] = BigRational::one();
    let mut x = 1usize;
    while x * x < prec {
        coeffs[x * x] = int(2);
        x += 1;
    }
    QSeries::from_coeffs(coeffs)
}

/// Push-up operator: sum a_n q^n maps to sum a_n q^(tn), precision preserved.
pub fn push_up(g: &QSeries, t: u32) -> QSeries {
    let prec = g.precision();
    let t = t as usize;
    assert!(t >= 1, "push-up scale must be positive");
    let mut coeffs = vec![BigRational::zero(); prec];
    for n in 0..prec {
        if n * t >= prec {
            break;
        }
        coeffs[n * t] = g.coeffs[n].clone();
    }
    QSeries::from_coeffs(coeffs)
}

/// Hecke operator T_p in weight k: coefficient n of the result is
/// a_(pn) + p^(k-1) a_(n/p). The output precision is floor(P/p),
/// enforced structurally.
pub fn hecke_tp(g: &QSeries, p: u64, k: i64) -> Result<QSeries> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let out_prec = g.precision() / p as usize;
    let pk1 = BigRational::from_integer(BigInt::from(p).pow((k - 1) as u32));
    let mut coeffs = vec![BigRational::zero(); out_prec];
    for (n, c) in coeffs.iter_mut().enumerate() {
        let mut v = g.coeffs[n * p as usize].clone();
        if n % p as usize == 0 {
            v += &pk1 * &g.coeffs[n / p as usize];
        }
        *c = v;
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// Rebuilds a full expansion from prime coefficient data.
///
/// a_1 = 1; a_(mn) = a_m a_n for coprime m, n; on prime powers
/// a_(p^(r+1)) = a_p a_(p^r) - p^(k-1) a_(p^(r-1)) for good p, and
/// a_(p^r) = a_p^r for p in `bad_primes`. Every prime below `prec` must
/// have an entry in `ap`.
pub fn multiplicative_extend(
    ap: &BTreeMap<u64, BigInt>,
    bad_primes: &BTreeSet<u64>,
    k: i64,
    prec: usize,
) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::ZeroPrecision);
    }
    let mut coeffs = vec![BigInt::zero(); prec];
    if prec > 1 {
        coeffs[1] = BigInt::one();
    }
    let mut n_factor: Vec<u64> = vec![0; prec];
    for p in 2..prec as u64 {
        if is_prime(p) {
            if !ap.contains_key(&p) {
                return Err(Error::MissingPrime(p));
            }
            let mut m = p as usize;
            while m < prec {
                for idx in (m..prec).step_by(m) {
                    n_factor[idx] = p;
                }
                m = match m.checked_mul(p as usize) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
    }
    // n_factor[n] is now the largest prime dividing n.
    for n in 2..prec {
        let p = n_factor[n];
        let mut pe = p as usize;
        let mut e = 1u32;
        while n % (pe * p as usize) == 0 {
            pe *= p as usize;
            e += 1;
        }
        let rest = n / pe;
        if rest > 1 {
            coeffs[n] = &coeffs[pe] * &coeffs[rest];
            continue;
        }
        // n = p^e
        let apv = &ap[&p];
        if e == 1 {
            coeffs[n] = apv.clone();
        } else if bad_primes.contains(&p) {
            coeffs[n] = apv.pow(e);
        } else {
            let pk1 = BigInt::from(p).pow((k - 1) as u32);
            let prev = pe / p as usize;
            let prev2 = prev / p as usize;
            coeffs[n] = apv * &coeffs[prev] - pk1 * &coeffs[prev2];
        }
    }
    Ok(QSeries::from_coeffs(
        coeffs.into_iter().map(BigRational::from_integer).collect(),
    ))
}

/// Atkin-Lehner sign recovered from a_p when p^e exactly divides the level.
///
/// For e = 1 the relation a_p = -eps_p p^(k/2-1) identifies the sign; for
/// e > 1 the coefficient must vanish and no sign is recoverable.
pub fn al_sign_from_ap(ap: &BigInt, p: u64, e: u32, k: i64) -> Result<Option<i8>> {
    if e > 1 {
        if !ap.is_zero() {
            return Err(Error::AlSignMismatch { ap: ap.to_string(), p, k });
        }
        return Ok(None);
    }
    let half = BigInt::from(p).pow((k / 2 - 1) as u32);
    if *ap == -&half {
        Ok(Some(1))
    } else if *ap == half {
        Ok(Some(-1))
    } else {
        Err(Error::AlSignMismatch { ap: ap.to_string(), p, k })
    }
}

/// Result of a naive quadratic twist: the coefficient-twisted series and the
/// level bound LCM(N, D^2) with a flag telling whether the bound is attained
/// at every prime (true exactly when no prime has ord_p(D^2) = ord_p(N) > 0).
#[derive(Clone, Debug)]
pub struct TwistResult {
    pub series: QSeries,
    pub level_bound: u128,
    pub exact: bool,
}

/// Twists a_n to chi_D(n) a_n for a fundamental discriminant D.
pub fn naive_twist(g: &QSeries, d: i64, level: u64) -> Result<TwistResult> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let coeffs = g
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| match kronecker(d, n as i64) {
            1 => c.clone(),
            -1 => -c,
            _ => BigRational::zero(),
        })
        .collect();
    let d2 = (d as i128 * d as i128).unsigned_abs();
    let mut bound: u128 = 1;
    let mut exact = true;
    let mut primes = BTreeSet::new();
    let mut collect = |mut m: u128| {
        let mut p = 2u128;
        while p * p <= m {
            if m % p == 0 {
                primes.insert(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            primes.insert(m);
        }
    };
    collect(level as u128);
    collect(d2);
    let ord = |mut m: u128, p: u128| {
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        e
    };
    for &p in &primes {
        let a = ord(d2, p);
        let b = ord(level as u128, p);
        bound *= p.pow(a.max(b));
        if a == b && a > 0 {
            exact = false;
        }
    }
    Ok(TwistResult { series: QSeries::from_coeffs(coeffs), level_bound: bound, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn telescoping_product() {
        let a = QSeries::from_ints(&[1, 1, 0, 0]);
        let b = QSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b), QSeries::from_ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_sum(3, 1), BigInt::from(1));
        assert_eq!(sigma_sum(3, 2), BigInt::from(9));
        assert_eq!(sigma_sum(5, 3), BigInt::from(244));
    }

    #[test]
    fn eisenstein_expansions() {
        let q = eisenstein(Eisenstein::Q, 4);
        assert_eq!(q, QSeries::from_ints(&[1, 240, 2160, 6720]));
        let r = eisenstein(Eisenstein::R, 4);
        assert_eq!(r, QSeries::from_ints(&[1, -504, -16632, -122976]));
    }

    #[test]
    fn q_cubed_minus_r_squared() {
        let prec = 8;
        let q = eisenstein(Eisenstein::Q, prec);
        let r = eisenstein(Eisenstein::R, prec);
        let diff = q.pow(3).sub(&r.pow(2));
        assert_eq!(diff.coeff(0), &int(0));
        assert_eq!(diff.coeff(1), &int(1728));
        let delta = diff.scale(&rat(1, 1728));
        assert_eq!(delta.coeffs()[..7], QSeries::from_ints(&[0, 1, -24, 252, -1472, 4830, -6048]).coeffs()[..]);
    }

    #[test]
    fn eta_24_is_delta() {
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), 7).unwrap();
        assert_eq!(d, QSeries::from_ints(&[0, 1, -24, 252, -1472, 4830, -6048]));
    }

    #[test]
    fn eta_24_matches_eisenstein_route_to_500() {
        let prec = 500;
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), prec).unwrap();
        let q = eisenstein(Eisenstein::Q, prec);
        let r = eisenstein(Eisenstein::R, prec);
        let other = q.pow(3).sub(&r.pow(2)).scale(&rat(1, 1728));
        assert_eq!(d, other);
    }

    #[test]
    fn eta_products_from_levels_three_and_four() {
        let d63 = eta_product(&EtaSpec::new(&[(1, 6), (3, 6)]), 5).unwrap();
        assert_eq!(d63, QSeries::from_ints(&[0, 1, -6, 9, 4]));
        let d64 = eta_product(&EtaSpec::new(&[(2, 12)]), 8).unwrap();
        assert_eq!(d64, QSeries::from_ints(&[0, 1, 0, -12, 0, 54, 0, -88]));
    }

    #[test]
    fn eta_fractional_exponent_rejected() {
        assert!(matches!(
            eta_product(&EtaSpec::new(&[(1, 1)]), 4),
            Err(Error::EtaLeadingExponent(1))
        ));
    }

    #[test]
    fn eta_negative_exponent_inverts() {
        // eta(q)^-24 * eta(q)^48 = eta(q)^24
        let a = eta_product(&EtaSpec::new(&[(1, 48), (2, 24), (2, -24)]), 6).unwrap();
        let b = eta_product(&EtaSpec::new(&[(1, 48)]), 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn theta_expansions() {
        let th = theta_hex(8);
        assert_eq!(th, QSeries::from_ints(&[1, 6, 0, 6, 6, 0, 0, 12]));
        let t = theta_sq(17);
        let mut want = vec![0i64; 17];
        want[0] = 1;
        for x in [1usize, 4, 9, 16] {
            want[x] = 2;
        }
        assert_eq!(t, QSeries::from_ints(&want));
        // convolution: coefficient of q^1 in Theta^2 = 1*6 + 6*1
        assert_eq!(th.mul(&th).coeff(1), &int(12));
    }

    #[test]
    fn push_up_basics() {
        let th = theta_hex(12);
        assert_eq!(push_up(&th, 1), th);
        assert_eq!(push_up(&th, 2).coeff(2), &int(6));
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), 12).unwrap();
        assert_eq!(push_up(&d, 2).coeff(3), &int(0));
        // composition of push-ups
        assert_eq!(push_up(&th, 6), push_up(&push_up(&th, 2), 3));
    }

    #[test]
    fn hecke_on_delta() {
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), 40).unwrap();
        let t2 = hecke_tp(&d, 2, 12).unwrap();
        assert_eq!(t2.precision(), 20);
        assert_eq!(t2.coeff(1), &int(-24));
        let t3 = hecke_tp(&d, 3, 12).unwrap();
        assert_eq!(t3, d.scale(&int(252)).truncate(t3.precision()));
        let z = hecke_tp(&QSeries::zero(40), 5, 12).unwrap();
        assert!(z.is_zero());
        assert!(matches!(hecke_tp(&d, 4, 12), Err(Error::NotPrime(4))));
    }

    #[test]
    fn multiplicative_extension_matches_delta() {
        let prec = 60;
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), prec).unwrap();
        let mut ap = BTreeMap::new();
        for p in 2..prec as u64 {
            if is_prime(p) {
                ap.insert(p, d.coeff(p as usize).to_integer());
            }
        }
        let rebuilt = multiplicative_extend(&ap, &BTreeSet::new(), 12, prec).unwrap();
        assert_eq!(rebuilt, d);
        assert_eq!(rebuilt.coeff(1), &int(1));
        assert_eq!(rebuilt.coeff(6), &int(-6048));
        assert_eq!(rebuilt.coeff(4), &int(-1472)); // (-24)^2 - 2^11
        let mut missing = ap.clone();
        missing.remove(&53);
        assert!(multiplicative_extend(&missing, &BTreeSet::new(), 12, prec).is_err());
    }

    #[test]
    fn al_sign_examples() {
        assert_eq!(al_sign_from_ap(&BigInt::from(9), 3, 1, 6).unwrap(), Some(-1));
        assert_eq!(al_sign_from_ap(&BigInt::from(-8), 2, 1, 8).unwrap(), Some(1));
        assert_eq!(al_sign_from_ap(&BigInt::from(0), 2, 2, 8).unwrap(), None);
        assert!(al_sign_from_ap(&BigInt::from(5), 3, 1, 6).is_err());
    }

    #[test]
    fn twist_by_one_is_identity() {
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), 10).unwrap();
        let t = naive_twist(&d, 1, 1).unwrap();
        assert_eq!(t.series, d);
        assert_eq!(t.level_bound, 1);
        assert!(t.exact);
    }

    #[test]
    fn twist_level_bound() {
        let g = QSeries::from_ints(&[0, 1, 0, 0]);
        let t = naive_twist(&g, -4, 8).unwrap();
        assert_eq!(t.level_bound, 16);
        assert!(t.exact);
        // ord_2(D^2) = 4 != ord_2(8) = 3, so the bound is attained
        let t2 = naive_twist(&g, -4, 16).unwrap();
        assert_eq!(t2.level_bound, 16);
        assert!(!t2.exact);
        assert!(naive_twist(&g, 12345, 8).is_err() || is_fundamental(12345));
    }

    #[test]
    fn division_recovers_factor() {
        let d = eta_product(&EtaSpec::new(&[(1, 24)]), 30).unwrap();
        let q = eisenstein(Eisenstein::Q, 30);
        let prod = d.mul(&q);
        let back = prod.div_exact(&d).unwrap();
        assert_eq!(back, q.truncate(back.precision()));
        assert!(q.div_exact(&d).is_none() || q.order() >= Some(1));
    }

    proptest! {
        #[test]
        fn mul_is_commutative_and_associative(
            a in proptest::collection::vec(-50i64..50, 12),
            b in proptest::collection::vec(-50i64..50, 12),
            c in proptest::collection::vec(-50i64..50, 12),
        ) {
            let a = QSeries::from_ints(&a);
            let b = QSeries::from_ints(&b);
            let c = QSeries::from_ints(&c);
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn twisted_coefficients_follow_character(
            coeffs in proptest::collection::vec(-20i64..20, 16),
            d in prop_oneof![Just(1i64), Just(-3), Just(-4), Just(5), Just(8), Just(-8), Just(12), Just(-7)],
        ) {
            let g = QSeries::from_ints(&coeffs);
            let t = naive_twist(&g, d, 6).unwrap();
            for n in 0..16usize {
                let chi = kronecker(d, n as i64);
                prop_assert_eq!(t.series.coeff(n).clone(), g.coeff(n) * int(chi as i64));
            }
        }
    }
}
