//! Number-theoretic utilities: quadratic characters, fundamental
//! discriminants, twist multiplicity, and factorization degree patterns of
//! integer polynomials over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Deterministic primality test by trial division (arguments stay small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to and including `bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// p-adic valuation of n (n > 0).
pub fn ord_p(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Factorization of n > 0 into (prime, exponent) pairs, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Kronecker symbol (a/n), extended to all integer pairs by the standard
/// conventions (including n <= 0 and n = 0).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out twos from n
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = (-1)^((a^2-1)/8), applied `twos` times
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol (a/n) for odd n > 0 by reciprocity
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// True when D is a fundamental discriminant: D = t*d with d squarefree,
/// d = 1 mod 4, and t in {1, -4, 8, -8}.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        is_squarefree(d.unsigned_abs())
    } else if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        (r == 2 || r == 3) && is_squarefree(q.unsigned_abs())
    } else {
        false
    }
}

/// All fundamental discriminants with |D| <= x, ordered by |D| then sign.
pub fn fundamental_discriminants(x: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for m in 1..=x as i64 {
        for d in [m, -m] {
            if is_fundamental(d) {
                out.push(d);
            }
        }
    }
    out
}

/// Number of minimal twists t(N): the multiplicative function with
/// t(2^e) = 1, 2, 4 for e <= 3, e in {4,5}, e >= 6, and t(p^e) = 1 for
/// e <= 1, 2 for e >= 2 at odd p.
pub fn t_multiplicity(n: u64) -> u64 {
    assert!(n >= 1);
    let mut t = 1u64;
    for (p, e) in factorize(n) {
        t *= if p == 2 {
            match e {
                0..=3 => 1,
                4 | 5 => 2,
                _ => 4,
            }
        } else if e >= 2 {
            2
        } else {
            1
        };
    }
    t
}

/// True when t(N) = 1, i.e. ord_2(N) <= 3 and the odd part is squarefree.
pub fn is_quadfree(n: u64) -> bool {
    t_multiplicity(n) == 1
}

/// A partition: multiset of positive parts, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Outcome of reducing an integer polynomial mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorPattern {
    /// f mod p is squarefree; the partition lists the irreducible factor
    /// degrees over the p-element field.
    Degrees(Partition),
    /// gcd(f, f') mod p is nonconstant; the degree pattern over Q_p is not
    /// determined by the mod-p factorization.
    NonSquarefree,
}

/// Dense polynomial over F_p, lowest degree first, normalized (no leading
/// zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModP {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl PolyModP {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyModP { p, coeffs }
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let reduced = coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.to_u64().unwrap()
            })
            .collect();
        Self::new(p, reduced)
    }

    pub fn zero(p: u64) -> Self {
        PolyModP { p, coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    fn x(p: u64) -> Self {
        PolyModP { p, coeffs: vec![0, 1] }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % self.p;
        }
        Self::new(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + self.p - b) % self.p;
        }
        Self::new(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + (a as u128 * b as u128 % self.p as u128) as u64) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    /// Remainder of self modulo `m` (m nonzero).
    pub fn rem(&self, m: &Self) -> Self {
        let p = self.p;
        let md = m.degree().expect("modulus must be nonzero");
        let lead_inv = mod_inverse(m.coeffs[md], p);
        let mut r = self.coeffs.clone();
        while r.len() > md {
            let c = *r.last().unwrap() % p;
            let shift = r.len() - 1 - md;
            if c != 0 {
                let factor = (c as u128 * lead_inv as u128 % p as u128) as u64;
                for (i, &mc) in m.coeffs.iter().enumerate() {
                    let t = (factor as u128 * mc as u128 % p as u128) as u64;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::new(p, r)
    }

    /// Exact quotient self / d when d divides self.
    pub fn div_exact(&self, d: &Self) -> Self {
        let p = self.p;
        if self.is_zero() {
            return Self::zero(p);
        }
        let dd = d.degree().expect("divisor must be nonzero");
        let sd = self.degree().unwrap();
        assert!(sd >= dd);
        let lead_inv = mod_inverse(d.coeffs[dd], p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; sd - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] % p;
            if c != 0 {
                let factor = (c as u128 * lead_inv as u128 % p as u128) as u64;
                q[k] = factor;
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    let t = (factor as u128 * dc as u128 % p as u128) as u64;
                    r[k + i] = (r[k + i] + p - t) % p;
                }
            }
        }
        debug_assert!(r.iter().all(|&c| c % p == 0));
        Self::new(p, q)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let inv = mod_inverse(a.coeffs[d], a.p);
            let coeffs = a
                .coeffs
                .iter()
                .map(|&c| (c as u128 * inv as u128 % a.p as u128) as u64)
                .collect();
            return Self::new(a.p, coeffs);
        }
        a
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u128 % self.p as u128) % self.p as u128) as u64)
            .collect();
        Self::new(self.p, coeffs)
    }

    /// x^(p^e) mod self, by repeated Frobenius powering.
    fn frobenius_power(&self, e: u32) -> Self {
        let mut acc = Self::x(self.p).rem(self);
        for _ in 0..e {
            acc = acc.powmod(self.p, self);
        }
        acc
    }

    fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut result = PolyModP::new(self.p, vec![1]);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        result
    }
}

/// Inverse of a mod p for prime p (Fermat).
pub fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

/// a^e mod m.
pub fn mod_pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Degrees of the irreducible factors of f mod p (distinct-degree
/// factorization), or the non-squarefree flag when gcd(f, f') mod p is
/// nonconstant. The leading coefficient of f must not vanish mod p.
pub fn factor_degrees_mod_p(f: &[BigInt], p: u64) -> Result<FactorPattern> {
    let lead = f.last().ok_or(Error::LeadingCoefficientVanishes(p))?;
    if lead.mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::LeadingCoefficientVanishes(p));
    }
    let fbar = PolyModP::from_bigints(p, f);
    let deriv = fbar.derivative();
    if deriv.is_zero() || fbar.gcd(&deriv).degree() != Some(0) {
        return Ok(FactorPattern::NonSquarefree);
    }
    let mut parts = Vec::new();
    let mut rest = fbar;
    let mut d = 1u32;
    while rest.degree().unwrap_or(0) >= 1 {
        if 2 * d as usize > rest.degree().unwrap() {
            // remaining factor is irreducible
            parts.push(rest.degree().unwrap() as u32);
            break;
        }
        let frob = rest.frobenius_power(d);
        let diff = frob.sub(&PolyModP::x(rest.p).rem(&rest));
        let g = rest.gcd(&diff);
        if let Some(gd) = g.degree() {
            if gd > 0 {
                for _ in 0..gd / d as usize {
                    parts.push(d);
                }
                rest = rest.div_exact(&g);
            }
        }
        d += 1;
    }
    Ok(FactorPattern::Degrees(Partition::new(parts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kronecker_small_values() {
        for n in 1..40 {
            assert_eq!(kronecker(1, n), 1);
        }
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-3, 5), -1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(5, 5), 0);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for &d in &[-8i64, -7, -4, -3, 1, 5, 8, 12, 13, -11] {
            for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23] {
                if d.unsigned_abs() % p == 0 {
                    continue;
                }
                let e = mod_pow(d.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let want = if e == 1 { 1 } else { -1 };
                assert_eq!(kronecker(d, p as i64), want, "d={} p={}", d, p);
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_and_periodic() {
        for &d in &[-3i64, -4, 5, 8, -8, 12, -20] {
            for m in 1..30i64 {
                for n in 1..30i64 {
                    assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
                }
            }
            // periodicity modulo |d| for fundamental d
            if is_fundamental(d) {
                for n in 1..60i64 {
                    assert_eq!(kronecker(d, n), kronecker(d, n + d.abs()));
                }
            }
        }
    }

    #[test]
    fn fundamental_discriminant_classification() {
        for d in [1i64, -3, -4, 5, -8, 8, 12, 13, -20] {
            assert!(is_fundamental(d), "{}", d);
        }
        for d in [-1i64, 0, 2, 3, 4, -9, 25, 18] {
            assert!(!is_fundamental(d), "{}", d);
        }
        // every fundamental D is t*d with d squarefree 1 mod 4
        for d in fundamental_discriminants(200) {
            let ok = [1i64, -4, 8, -8].iter().any(|&t| {
                d % t == 0 && {
                    let m = d / t;
                    m.rem_euclid(4) == 1 && is_squarefree(m.unsigned_abs())
                }
            });
            assert!(ok, "{}", d);
        }
    }

    #[test]
    fn t_multiplicity_table_and_oracle() {
        assert_eq!(t_multiplicity(1), 1);
        assert_eq!(t_multiplicity(64), 4);
        assert_eq!(t_multiplicity(144), 4);
        assert!(is_quadfree(8));
        assert!(!is_quadfree(9));
        assert!(is_quadfree(30));
        // brute-force oracle: t(N) counts fundamental D with D^2 | N
        for n in 1u64..=10_000 {
            let bound = (n as f64).sqrt() as u64 + 1;
            let count = fundamental_discriminants(bound)
                .into_iter()
                .filter(|&d| {
                    let d2 = (d as i128 * d as i128) as u128;
                    d2 <= n as u128 && (n as u128) % d2 == 0
                })
                .count() as u64;
            assert_eq!(t_multiplicity(n), count, "N = {}", n);
        }
    }

    #[test]
    fn factor_degrees_examples() {
        let f: Vec<BigInt> = [-1i64, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(
            factor_degrees_mod_p(&f, 3).unwrap(),
            FactorPattern::Degrees(Partition::new(vec![1, 1]))
        );
        let sq: Vec<BigInt> = [0i64, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(factor_degrees_mod_p(&sq, 5).unwrap(), FactorPattern::NonSquarefree);
        let f: Vec<BigInt> = [3i64, -6, 0, -2, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(factor_degrees_mod_p(&f, 7).unwrap(), brute_force_degrees(&f, 7));
        assert!(factor_degrees_mod_p(&[BigInt::from(3), BigInt::from(7)], 7).is_err());
    }

    /// Exhaustive factor search over F_p for degree <= 4, used as an oracle.
    fn brute_force_degrees(f: &[BigInt], p: u64) -> FactorPattern {
        let fbar = PolyModP::from_bigints(p, f);
        let deriv = fbar.derivative();
        if deriv.is_zero() || fbar.gcd(&deriv).degree() != Some(0) {
            return FactorPattern::NonSquarefree;
        }
        let mut parts = Vec::new();
        let mut rest = fbar;
        'outer: while rest.degree().unwrap_or(0) >= 1 {
            let deg = rest.degree().unwrap();
            for d in 1..=deg / 2 {
                // enumerate monic divisors of degree d
                let mut c = vec![0u64; d + 1];
                c[d] = 1;
                loop {
                    let cand = PolyModP::new(p, c.clone());
                    if rest.rem(&cand).is_zero() && is_irreducible(&cand) {
                        parts.push(d as u32);
                        rest = rest.div_exact(&cand);
                        continue 'outer;
                    }
                    // increment base-p counter over c[0..d]
                    let mut i = 0;
                    loop {
                        if i == d {
                            break;
                        }
                        c[i] += 1;
                        if c[i] < p {
                            break;
                        }
                        c[i] = 0;
                        i += 1;
                    }
                    if i == d {
                        break;
                    }
                }
            }
            parts.push(deg as u32);
            break;
        }
        FactorPattern::Degrees(Partition::new(parts))
    }

    fn is_irreducible(f: &PolyModP) -> bool {
        let deg = f.degree().unwrap_or(0);
        if deg <= 1 {
            return deg == 1;
        }
        for d in 1..=deg / 2 {
            let mut c = vec![0u64; d + 1];
            c[d] = 1;
            loop {
                let cand = PolyModP::new(f.p, c.clone());
                if f.rem(&cand).is_zero() {
                    return false;
                }
                let mut i = 0;
                loop {
                    if i == d {
                        break;
                    }
                    c[i] += 1;
                    if c[i] < f.p {
                        break;
                    }
                    c[i] = 0;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn ddf_agrees_with_brute_force(
            coeffs in proptest::collection::vec(-10i64..10, 3..5),
            pidx in 0usize..4,
        ) {
            let p = [3u64, 5, 7, 11][pidx];
            let mut f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
            f.push(BigInt::from(1)); // monic, degree 3 or 4
            let got = factor_degrees_mod_p(&f, p).unwrap();
            let want = brute_force_degrees(&f, p);
            prop_assert_eq!(&got, &want);
            if let FactorPattern::Degrees(parts) = got {
                prop_assert_eq!(parts.sum() as usize, f.len() - 1);
            }
        }
    }
}
