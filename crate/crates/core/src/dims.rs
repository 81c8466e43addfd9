//! Dimension formulas: the exact level-1 cusp dimension, approximate full
//! and new dimensions with local masses, and exact signed new-space
//! dimensions for the supported levels.

use num_rational::BigRational;

use crate::arith::factorize;
use crate::rings::{monomial_basis, Signs};
use crate::{Error, Result};

/// dim S_k(1) = max(0, (k - 1 - delta_k)/12) with delta periodic mod 12.
pub fn dim_cusp_level1(k: i64) -> Result<i64> {
    if k % 2 != 0 || k < 0 {
        return Err(Error::Data(format!("weight {} is not a non-negative even integer", k)));
    }
    if k == 0 {
        return Ok(0);
    }
    let delta = match k.rem_euclid(12) {
        2 => 13,
        4 => 3,
        6 => 5,
        8 => 7,
        10 => 9,
        0 => -1,
        _ => unreachable!(),
    };
    Ok(((k - 1 - delta) / 12).max(0))
}

/// Approximate full cusp dimension (k-1)/12 * prod p^(e-1)(p+1).
pub fn dim_full_approx(k: i64, level: u64) -> BigRational {
    let mut r = BigRational::new((k - 1).into(), 12.into());
    for (p, e) in factorize(level) {
        let local = p.pow(e - 1) * (p + 1);
        r *= BigRational::from_integer(local.into());
    }
    r
}

/// Unsigned local mass m(p, e).
pub fn local_mass(p: u64, e: u32) -> BigRational {
    let n = match e {
        1 => p as i128 - 1,
        2 => (p as i128) * (p as i128) - p as i128 - 1,
        _ => (p as i128 - 1) * (p as i128 - 1) * (p as i128 + 1) * (p as i128).pow(e - 3),
    };
    BigRational::from_integer(n.into())
}

/// Signed local mass m^eps(p, e).
pub fn local_mass_signed(p: u64, e: u32, eps: i8) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    match e {
        1 => BigRational::from_integer((p as i128 - 1).into()) * &half,
        2 => {
            let base = (p as i128) * (p as i128) - p as i128 - 1;
            let adj = if eps > 0 { base - 1 } else { base + 1 };
            BigRational::from_integer(adj.into()) * &half
        }
        _ => local_mass(p, e) * &half,
    }
}

/// Approximate new dimension (k-1)/12 * prod m(p, e).
pub fn dim_new_approx(k: i64, level: u64) -> BigRational {
    let mut r = BigRational::new((k - 1).into(), 12.into());
    for (p, e) in factorize(level) {
        r *= local_mass(p, e);
    }
    r
}

/// Mass of the sign class eps: prod m^(eps_q)(p, e) over prime powers
/// exactly dividing the level.
pub fn mass(level: u64, eps: &Signs) -> Result<BigRational> {
    let pps = factorize(level);
    if pps.len() != eps.len() {
        return Err(Error::SignMismatch(eps.to_string(), level));
    }
    let mut r = BigRational::from_integer(1.into());
    for ((p, e), &s) in pps.iter().zip(&eps.0) {
        r *= local_mass_signed(*p, *e, s);
    }
    Ok(r)
}

/// Exact dimension of the signed new subspace at the supported levels.
///
/// Counts generator monomials against the cuspidal ideal and removes the
/// old-form contributions: at levels 2 and 3 each sign class absorbs one old
/// form per level-1 cusp dimension; at level 6 each sign pair additionally
/// absorbs the signed new dimensions from levels 2 and 3 matching the
/// respective coordinate; levels 4 and 8 discard old forms through the
/// shifted-ring isolation and need no subtraction.
pub fn dim_new_signed_exact(level: u64, k: i64, eps: &Signs) -> Result<i64> {
    if k % 2 != 0 || k < 2 {
        return Err(Error::Data(format!("weight {} is not an even integer >= 2", k)));
    }
    let count = |lvl: u64, weight: i64, e: &Signs| -> Result<i64> {
        Ok(monomial_basis(lvl, weight, e)?.len() as i64)
    };
    let dim = match level {
        1 => {
            if !eps.is_empty() {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            count(1, k - 12, &Signs::empty())?
        }
        2 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // cusp generator has sign +
            count(2, k - 8, eps)? - dim_cusp_level1(k)?
        }
        3 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // cusp generator has sign -, so monomial sign is -eps
            let flipped = Signs(vec![-eps.0[0]]);
            count(3, k - 6, &flipped)? - dim_cusp_level1(k)?
        }
        4 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            if eps.0[0] > 0 {
                0
            } else {
                // S_k^new(4)^- = M_(k-6)(1) pushed up times the cusp generator
                count(1, k - 6, &Signs::empty())?
            }
        }
        6 => {
            if eps.len() != 2 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            let monos = count(6, k - 4, eps)?;
            let old1 = dim_cusp_level1(k)?;
            let old2 = dim_new_signed_exact(2, k, &Signs(vec![eps.0[0]]))?;
            let old3 = dim_new_signed_exact(3, k, &Signs(vec![eps.0[1]]))?;
            monos - old1 - old2 - old3
        }
        8 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // S_k^new(8)^eps = M(2)_2^eps times the weight-4 cusp generator
            count(8, k - 4, eps)?
        }
        _ => return Err(Error::UnsupportedLevel(level)),
    };
    Ok(dim.max(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    #[test]
    fn level1_dimensions() {
        assert_eq!(dim_cusp_level1(2).unwrap(), 0);
        assert_eq!(dim_cusp_level1(12).unwrap(), 1);
        assert_eq!(dim_cusp_level1(24).unwrap(), 2);
        assert_eq!(dim_cusp_level1(26).unwrap(), 1);
        assert!(dim_cusp_level1(13).is_err());
        // same numbers via monomial counting
        for k in (2..=50).step_by(2) {
            let monos = monomial_basis(1, k - 12, &Signs::empty()).unwrap().len() as i64;
            assert_eq!(dim_cusp_level1(k).unwrap(), monos, "k = {}", k);
        }
    }

    #[test]
    fn approximate_dimensions() {
        assert_eq!(dim_full_approx(12, 1), rat(11, 12));
        assert_eq!(dim_full_approx(12, 6), rat(11, 1));
        assert_eq!(dim_new_approx(12, 1), rat(11, 12));
    }

    #[test]
    fn printed_masses() {
        assert_eq!(mass(8, &Signs(vec![1])).unwrap(), rat(3, 2));
        assert_eq!(mass(8, &Signs(vec![-1])).unwrap(), rat(3, 2));
        assert_eq!(mass(4, &Signs(vec![1])).unwrap(), rat(0, 1));
        assert_eq!(mass(4, &Signs(vec![-1])).unwrap(), rat(1, 1));
        for eps in Signs::all(2) {
            assert_eq!(mass(6, &eps).unwrap(), rat(1, 2));
        }
    }

    #[test]
    fn signed_masses_sum_to_unsigned() {
        for (p, emax) in [(2u64, 6u32), (3, 4), (5, 3), (7, 2)] {
            for e in 1..=emax {
                let total = local_mass_signed(p, e, 1) + local_mass_signed(p, e, -1);
                assert_eq!(total, local_mass(p, e));
            }
        }
    }

    #[test]
    fn exact_dims_match_printed_examples() {
        assert_eq!(dim_new_signed_exact(8, 16, &Signs(vec![-1])).unwrap(), 2);
        assert_eq!(dim_new_signed_exact(2, 16, &Signs(vec![1])).unwrap(), 1);
        assert_eq!(dim_new_signed_exact(2, 16, &Signs(vec![-1])).unwrap(), 0);
        assert_eq!(dim_new_signed_exact(3, 10, &Signs(vec![1])).unwrap(), 1);
        assert_eq!(dim_new_signed_exact(3, 10, &Signs(vec![-1])).unwrap(), 1);
        assert_eq!(dim_new_signed_exact(6, 4, &Signs(vec![1, 1])).unwrap(), 1);
        assert!(dim_new_signed_exact(5, 4, &Signs(vec![1])).is_err());
    }
}
