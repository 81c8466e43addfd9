//! Reconstruction of the newform catalog from the ring models.
//!
//! For each signed cell of the dimension table carrying rational newforms,
//! the cusp space is spanned by cusp-generator multiples of the level's
//! sign-graded monomials, the old subspace is spanned by explicit push-up
//! combinations from the lower levels, and the newforms are the rational
//! eigenvectors of a Hecke operator acting on the quotient. All linear
//! algebra is exact over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

use crate::dims::dim_new_signed_exact;
use crate::qseries::{hecke_tp, push_up, QSeries};
use crate::rings::{monomial_basis, ring_model, Expander, Expr, Monomial, Signs};
use crate::shell::{bad_prime_ap, form_label, NewformRecord, Table2};
use crate::{Error, Result};

type Mat = Vec<Vec<BigRational>>;

fn mat_identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![BigRational::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate().take(inner) {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    let t = &a[i][k] * &bk[j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

fn mat_add_scaled_identity(a: &Mat, c: &BigRational) -> Mat {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += c;
    }
    out
}

fn mat_vec(a: &Mat, v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<BigRational>())
        .collect()
}

fn trace(a: &Mat) -> BigRational {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Gauss-Jordan inverse; None when singular.
fn mat_inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut work: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let inv = work[col][col].recip();
        for x in work[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for c in col..2 * n {
                    let t = &f * &work[col][c];
                    work[r][c] -= t;
                }
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Reduced row echelon form in place; returns the pivot column of each
/// eliminated row.
fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Kernel basis of a square matrix, as column vectors.
fn nullspace(a: &Mat) -> Vec<Vec<BigRational>> {
    nullspace_rect(a)
}

/// Characteristic polynomial by the trace recursion, monic, lowest degree
/// first.
fn charpoly(a: &Mat) -> Vec<BigRational> {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    if n == 0 {
        return coeffs;
    }
    let mut mk = a.clone();
    for k in 1..=n {
        let ck = -trace(&mk) / BigRational::from_integer((k as i64).into());
        coeffs[n - k] = ck.clone();
        if k < n {
            mk = mat_mul(a, &mat_add_scaled_identity(&mk, &ck));
        }
    }
    coeffs
}

/// p(A) by Horner.
fn poly_apply(p: &[BigRational], a: &Mat) -> Mat {
    let n = a.len();
    let mut acc: Mat = mat_identity(n);
    for row in acc.iter_mut() {
        for x in row.iter_mut() {
            *x *= p.last().unwrap();
        }
    }
    for c in p.iter().rev().skip(1) {
        acc = mat_add_scaled_identity(&mat_mul(&acc, a), c);
    }
    acc
}

/// Solves coordinates of series against a fixed basis of series, using
/// coefficient rows q^1 .. q^rows, with full-row consistency checking.
struct BasisSolver {
    rows: usize,
    full: Mat,
    pivot_rows: Vec<usize>,
    inv: Mat,
}

impl BasisSolver {
    fn new(basis: &[QSeries], rows: usize) -> Result<Self> {
        let n = basis.len();
        if rows < n {
            return Err(Error::Data(format!(
                "solver has {} rows for {} basis vectors",
                rows, n
            )));
        }
        let full: Mat = (0..rows)
            .map(|r| basis.iter().map(|b| b.coeff(r + 1).clone()).collect())
            .collect();
        // greedily select n independent rows
        let mut selected: Vec<usize> = Vec::new();
        let mut echelon: Mat = Vec::new();
        for r in 0..rows {
            if selected.len() == n {
                break;
            }
            let mut cand = full[r].clone();
            for e in &echelon {
                let lead = e.iter().position(|x| !x.is_zero()).unwrap();
                if !cand[lead].is_zero() {
                    let f = &cand[lead] / &e[lead];
                    for j in 0..n {
                        let t = &f * &e[j];
                        cand[j] -= t;
                    }
                }
            }
            if cand.iter().any(|x| !x.is_zero()) {
                selected.push(r);
                echelon.push(cand);
            }
        }
        if selected.len() < n {
            return Err(Error::Data("basis series are linearly dependent".into()));
        }
        let square: Mat = selected.iter().map(|&r| full[r].clone()).collect();
        let inv = mat_inverse(&square).ok_or_else(|| Error::Data("singular pivot block".into()))?;
        Ok(BasisSolver { rows, full, pivot_rows: selected, inv })
    }

    /// Coordinates of `target` in the basis; None if it lies outside the
    /// span (checked on every available row).
    fn solve(&self, target: &QSeries) -> Option<Vec<BigRational>> {
        let avail = self.rows.min(target.precision().saturating_sub(1));
        if avail < self.pivot_rows.len() || self.pivot_rows.iter().any(|&r| r >= avail) {
            return None;
        }
        let rhs: Vec<BigRational> =
            self.pivot_rows.iter().map(|&r| target.coeff(r + 1).clone()).collect();
        let x = mat_vec(&self.inv, &rhs);
        for r in 0..avail {
            let lhs: BigRational = self.full[r].iter().zip(&x).map(|(a, b)| a * b).sum();
            if &lhs != target.coeff(r + 1) {
                return None;
            }
        }
        Some(x)
    }
}

fn combine(basis: &[QSeries], coords: &[BigRational]) -> QSeries {
    let mut acc = QSeries::zero(basis[0].precision());
    for (b, c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Square root of a non-negative rational if it is an exact square.
fn sqrt_rational(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let ns = x.numer().sqrt();
    let ds = x.denom().sqrt();
    if &(&ns * &ns) == x.numer() && &(&ds * &ds) == x.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

/// Catalog reconstruction driver with per-level caches.
pub struct Reconstructor {
    env: Expander,
    prec: usize,
    mono_cache: HashMap<(u64, String), QSeries>,
    new_basis_cache: HashMap<(u64, i64, Signs), Vec<QSeries>>,
}

/// One reconstructed newform.
#[derive(Clone, Debug)]
pub struct BuiltForm {
    pub record: NewformRecord,
    pub expansion: QSeries,
}

impl Reconstructor {
    pub fn new(prec: usize) -> Self {
        Reconstructor {
            env: Expander::new(prec),
            prec,
            mono_cache: HashMap::new(),
            new_basis_cache: HashMap::new(),
        }
    }

    fn monomial_series(&mut self, level: u64, mono: &Monomial) -> Result<QSeries> {
        let key = (level, mono.to_string());
        if let Some(s) = self.mono_cache.get(&key) {
            return Ok(s.clone());
        }
        // peel one generator factor and recurse so every distinct monomial
        // costs a single multiplication
        let series = match mono.powers.first().copied() {
            None => QSeries::one(self.prec),
            Some((name, e)) => {
                let mut rest = mono.clone();
                if e == 1 {
                    rest.powers.remove(0);
                } else {
                    rest.powers[0] = (name, e - 1);
                }
                let tail = self.monomial_series(level, &rest)?;
                tail.mul(&self.env.generator(level, name)?)
            }
        };
        self.mono_cache.insert(key, series.clone());
        Ok(series)
    }

    /// Basis of the signed cusp space as cusp-generator multiples of the
    /// level's monomials, together with the monomials.
    fn cusp_space(&mut self, level: u64, k: i64, eps: &Signs) -> Result<(Vec<Monomial>, Vec<QSeries>)> {
        let model = ring_model(level)?;
        let mono_eps = match level {
            1 => Signs::empty(),
            3 => Signs(vec![-eps.0[0]]), // cusp generator carries sign -
            _ => eps.clone(),
        };
        let monos = monomial_basis(level, k - model.cusp_weight, &mono_eps)?;
        let cusp = self.env.generator(level, model.cusp_label)?;
        let series = monos
            .iter()
            .map(|m| Ok(self.monomial_series(level, m)?.mul(&cusp)))
            .collect::<Result<Vec<_>>>()?;
        Ok((monos, series))
    }

    /// Basis of S_k(1) as series.
    fn level1_cusp_series(&mut self, k: i64) -> Result<Vec<QSeries>> {
        let (_, series) = self.cusp_space(1, k, &Signs::empty())?;
        Ok(series)
    }

    /// Old forms inside S_k(p)^eps coming from level 1: f + eps p^(k/2) U_p f.
    fn oldforms_level1_in_prime_level(
        &mut self,
        p: u64,
        k: i64,
        eps: i8,
    ) -> Result<Vec<QSeries>> {
        let scale = BigRational::from_integer(BigInt::from(eps) * BigInt::from(p).pow((k / 2) as u32));
        Ok(self
            .level1_cusp_series(k)?
            .into_iter()
            .map(|f| f.add(&push_up(&f, p as u32).scale(&scale)))
            .collect())
    }

    /// Rational basis of the signed new subspace at level 2 or 3, obtained
    /// by applying the characteristic polynomial of the Hecke action on the
    /// old subspace.
    fn new_space_series(&mut self, level: u64, k: i64, eps: &Signs) -> Result<Vec<QSeries>> {
        let key = (level, k, eps.clone());
        if let Some(v) = self.new_basis_cache.get(&key) {
            return Ok(v.clone());
        }
        let (_, v_basis) = self.cusp_space(level, k, eps)?;
        let old = self.oldforms_level1_in_prime_level(level, k, eps.0[0])?;
        let result = if v_basis.is_empty() {
            vec![]
        } else if old.is_empty() {
            v_basis.clone()
        } else {
            let p0 = first_good_prime(level);
            let n = v_basis.len();
            let rows = self.solver_rows(p0, n)?;
            let solver = BasisSolver::new(&v_basis, rows)?;
            let t = self.hecke_matrix(&v_basis, &solver, p0, k, level)?;
            // characteristic polynomial of the Hecke action on the old space
            let old_rows = self.solver_rows(p0, old.len())?;
            let old_solver = BasisSolver::new(&old, old_rows)?;
            let mut a_old: Mat = vec![vec![BigRational::zero(); old.len()]; old.len()];
            for (j, o) in old.iter().enumerate() {
                let img = hecke_tp(o, p0, k)?;
                let coords = old_solver
                    .solve(&img)
                    .ok_or_else(|| Error::Data("old space is not Hecke stable".into()))?;
                for i in 0..old.len() {
                    a_old[i][j] = coords[i].clone();
                }
            }
            let p_old = charpoly(&a_old);
            let killed = poly_apply(&p_old, &t);
            // column space of p_old(T) spans the new subspace
            let mut cols: Mat = (0..n).map(|j| (0..n).map(|i| killed[i][j].clone()).collect()).collect();
            let pivots = rref(&mut cols);
            let indep: Vec<Vec<BigRational>> = pivots
                .iter()
                .map(|&c| (0..n).map(|i| killed[i][c].clone()).collect())
                .collect();
            if indep.len() != n - old.len() {
                return Err(Error::Data(format!(
                    "new-space projector rank {} at level {}, weight {}, signs {} (expected {})",
                    indep.len(),
                    level,
                    k,
                    eps,
                    n - old.len()
                )));
            }
            indep.iter().map(|coords| combine(&v_basis, coords)).collect()
        };
        self.new_basis_cache.insert(key, result.clone());
        Ok(result)
    }

    /// Old subspace of the signed cusp space at a supported level.
    fn old_space(&mut self, level: u64, k: i64, eps: &Signs) -> Result<Vec<QSeries>> {
        match level {
            1 | 8 => Ok(vec![]),
            2 | 3 => self.oldforms_level1_in_prime_level(level, k, eps.0[0]),
            6 => {
                let (e2, e3) = (eps.0[0], eps.0[1]);
                let s2 = BigRational::from_integer(BigInt::from(e2) * BigInt::from(2).pow((k / 2) as u32));
                let s3 = BigRational::from_integer(BigInt::from(e3) * BigInt::from(3).pow((k / 2) as u32));
                let s6 = &s2 * &s3;
                let mut old = Vec::new();
                for f in self.level1_cusp_series(k)? {
                    let v = f
                        .add(&push_up(&f, 2).scale(&s2))
                        .add(&push_up(&f, 3).scale(&s3))
                        .add(&push_up(&f, 6).scale(&s6));
                    old.push(v);
                }
                for h in self.new_space_series(2, k, &Signs(vec![e2]))? {
                    old.push(h.add(&push_up(&h, 3).scale(&s3)));
                }
                for w in self.new_space_series(3, k, &Signs(vec![e3]))? {
                    old.push(w.add(&push_up(&w, 2).scale(&s2)));
                }
                Ok(old)
            }
            _ => Err(Error::UnsupportedLevel(level)),
        }
    }

    fn solver_rows(&self, p: u64, n: usize) -> Result<usize> {
        let avail = self.prec / p as usize;
        let rows = (n + 8).min(avail.saturating_sub(1));
        if rows < n {
            return Err(Error::Data(format!(
                "precision {} too low for {} basis vectors under T_{}",
                self.prec, n, p
            )));
        }
        Ok(rows)
    }

    fn hecke_matrix(
        &mut self,
        basis: &[QSeries],
        solver: &BasisSolver,
        p: u64,
        k: i64,
        level: u64,
    ) -> Result<Mat> {
        let n = basis.len();
        let mut t: Mat = vec![vec![BigRational::zero(); n]; n];
        for (j, b) in basis.iter().enumerate() {
            let img = hecke_tp(b, p, k)?;
            let coords = solver.solve(&img).ok_or_else(|| {
                Error::Data(format!(
                    "T_{} image leaves the cusp space at level {}, weight {}",
                    p, level, k
                ))
            })?;
            for i in 0..n {
                t[i][j] = coords[i].clone();
            }
        }
        Ok(t)
    }

    /// Reconstructs the rational newforms of one signed cell.
    pub fn reconstruct_cell(
        &mut self,
        level: u64,
        k: i64,
        eps: &Signs,
        expected: usize,
    ) -> Result<Vec<BuiltForm>> {
        if level == 4 {
            return self.reconstruct_level4(k, eps, expected);
        }
        let (monos, v_basis) = self.cusp_space(level, k, eps)?;
        let old = self.old_space(level, k, eps)?;
        let n = v_basis.len();
        let m = old.len();
        let expected_dim = dim_new_signed_exact(level, k, eps)? as usize;
        if n - m != expected_dim || expected_dim != expected {
            return Err(Error::Data(format!(
                "cell ({}, {}, {}): space dims {} - {} disagree with expected {}",
                level, k, eps, n, m, expected
            )));
        }

        let mut primes = good_primes(level);
        let p0 = primes.remove(0);
        let rows = self.solver_rows(p0, n)?;
        let solver = BasisSolver::new(&v_basis, rows)?;
        let t = self.hecke_matrix(&v_basis, &solver, p0, k, level)?;
        let old_coords: Vec<Vec<BigRational>> = old
            .iter()
            .map(|o| {
                solver
                    .solve(o)
                    .ok_or_else(|| Error::Data("old form outside the signed cusp space".into()))
            })
            .collect::<Result<Vec<_>>>()?;

        // extend the old columns to a full basis by unit vectors
        let mut ext_cols: Vec<Vec<BigRational>> = old_coords.clone();
        {
            let mut probe: Mat = ext_cols.clone();
            let mut rank = {
                let mut c = probe.clone();
                rref(&mut c).len()
            };
            for j in 0..n {
                if ext_cols.len() == n {
                    break;
                }
                let mut e = vec![BigRational::zero(); n];
                e[j] = BigRational::one();
                probe.push(e.clone());
                let mut c = probe.clone();
                let r = rref(&mut c).len();
                if r > rank {
                    rank = r;
                    ext_cols.push(e);
                } else {
                    probe.pop();
                }
            }
        }
        let ext: Mat = (0..n).map(|i| ext_cols.iter().map(|col| col[i].clone()).collect()).collect();
        let ext_inv = mat_inverse(&ext).ok_or_else(|| Error::Data("basis extension failed".into()))?;
        let quotient_of = |mat: &Mat| -> Mat {
            let conj = mat_mul(&mat_mul(&ext_inv, mat), &ext);
            (m..n).map(|i| (m..n).map(|j| conj[i][j].clone()).collect()).collect()
        };
        let tq = quotient_of(&t);

        // rational eigenvalues of the quotient
        let q = n - m;
        let eigenvalues: Vec<BigRational> = match q {
            1 => vec![tq[0][0].clone()],
            2 => {
                let tr = &tq[0][0] + &tq[1][1];
                let det = &tq[0][0] * &tq[1][1] - &tq[0][1] * &tq[1][0];
                let disc = &tr * &tr - BigRational::from_integer(4.into()) * det;
                let root = sqrt_rational(&disc).ok_or_else(|| {
                    Error::Data(format!(
                        "cell ({}, {}, {}): quotient eigenvalues are irrational",
                        level, k, eps
                    ))
                })?;
                let half = BigRational::new(1.into(), 2.into());
                let mut vals = vec![(&tr + &root) * &half, (&tr - &root) * &half];
                vals.sort_by(|a, b| b.cmp(a));
                vals
            }
            other => {
                return Err(Error::Data(format!(
                    "cell ({}, {}, {}): unsupported quotient dimension {}",
                    level, k, eps, other
                )))
            }
        };

        let mut built = Vec::new();
        for (idx, lambda) in eigenvalues.iter().enumerate() {
            let shifted = mat_add_scaled_identity(&t, &-lambda.clone());
            let mut kernel = nullspace(&shifted);
            if kernel.len() != 1 {
                // eigenvalue collision with the old spectrum: cut with the
                // next Hecke operator
                let p1 = primes.first().copied().ok_or_else(|| {
                    Error::Data("ran out of auxiliary primes for eigen separation".into())
                })?;
                let rows1 = self.solver_rows(p1, n)?;
                let solver1 = BasisSolver::new(&v_basis, rows1)?;
                let t1 = self.hecke_matrix(&v_basis, &solver1, p1, k, level)?;
                let tq1 = quotient_of(&t1);
                let lambda1 = if q == 1 {
                    tq1[0][0].clone()
                } else {
                    let shifted_q = mat_add_scaled_identity(&tq, &-lambda.clone());
                    let u = nullspace(&shifted_q);
                    if u.len() != 1 {
                        return Err(Error::Data("quotient eigenspace is not simple".into()));
                    }
                    let img = mat_vec(&tq1, &u[0]);
                    let at = u[0].iter().position(|x| !x.is_zero()).unwrap();
                    let ratio = &img[at] / &u[0][at];
                    for (a, b) in img.iter().zip(&u[0]) {
                        if a != &(&ratio * b) {
                            return Err(Error::Data("auxiliary operator does not act by a scalar".into()));
                        }
                    }
                    ratio
                };
                let shifted1 = mat_add_scaled_identity(&t1, &-lambda1.clone());
                // intersect the two kernels
                let mut stacked: Mat = Vec::new();
                for r in 0..n {
                    stacked.push(shifted[r].clone());
                }
                for r in 0..n {
                    stacked.push(shifted1[r].clone());
                }
                kernel = nullspace_rect(&stacked);
                if kernel.len() != 1 {
                    return Err(Error::Data(format!(
                        "cell ({}, {}, {}): eigenvector is not unique",
                        level, k, eps
                    )));
                }
            }
            let coords = &kernel[0];
            let expansion = combine(&v_basis, coords);
            let a1 = expansion.coeff(1).clone();
            if a1.is_zero() {
                return Err(Error::Data("eigenvector has vanishing leading coefficient".into()));
            }
            let inv = a1.recip();
            let coords: Vec<BigRational> = coords.iter().map(|c| c * &inv).collect();
            let expansion = expansion.scale(&inv);

            let twin = if eigenvalues.len() == 2 {
                Some(if idx == 0 { 'a' } else { 'b' })
            } else {
                None
            };
            let label = form_label(k, level, eps, twin);
            let expr = expression_from_coords(level, &monos, &coords)?;
            let record = NewformRecord::new(label, level, k, eps.clone(), expr);
            self.validate_form(&record, &expansion)?;
            built.push(BuiltForm { record, expansion });
        }
        Ok(built)
    }

    /// Level 4 separates old forms through the shifted level-1 ring: the
    /// rational newforms are the weight-(k-6) level-1 monomials in the
    /// pushed-up Eisenstein generators times the cusp generator.
    fn reconstruct_level4(&mut self, k: i64, eps: &Signs, expected: usize) -> Result<Vec<BuiltForm>> {
        if eps.0 != vec![-1] {
            return Err(Error::Data(format!("level 4 has no newforms with signs {}", eps)));
        }
        let monos = monomial_basis(1, k - 6, &Signs::empty())?;
        if monos.len() != 1 || expected != 1 {
            return Err(Error::Data(format!(
                "level-4 cell at weight {} is not one-dimensional",
                k
            )));
        }
        let shifted = Monomial {
            powers: monos[0]
                .powers
                .iter()
                .map(|&(name, e)| match name {
                    "Q" => ("Q2", e),
                    "R" => ("R2", e),
                    other => (other, e),
                })
                .collect(),
        };
        let cusp = self.env.generator(4, "Delta_6_4_minus")?;
        let expansion = self.monomial_series(4, &shifted)?.mul(&cusp);
        let mut factors: Vec<Expr> = shifted
            .powers
            .iter()
            .map(|&(name, e)| Expr::pow(Expr::gen(name), e))
            .collect();
        factors.push(Expr::gen("Delta_6_4_minus"));
        let expr = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) };
        let record = NewformRecord::new(form_label(k, 4, eps, None), 4, k, eps.clone(), expr);
        self.validate_form(&record, &expansion)?;
        Ok(vec![BuiltForm { record, expansion }])
    }

    /// Eigenform, integrality, normalization, and bad-prime checks.
    fn validate_form(&self, record: &NewformRecord, expansion: &QSeries) -> Result<()> {
        let label = &record.label;
        if !expansion.coeff(0).is_zero() || !expansion.coeff(1).is_one() {
            return Err(Error::Data(format!("{}: expansion is not normalized", label)));
        }
        if !expansion.is_integral() {
            return Err(Error::Data(format!("{}: expansion is not integral", label)));
        }
        for p in crate::arith::primes_up_to(50) {
            if record.level % p == 0 {
                continue;
            }
            let img = hecke_tp(expansion, p, record.weight)?;
            let ap = expansion.coeff(p as usize).clone();
            let scaled = expansion.scale(&ap).truncate(img.precision());
            if img != scaled {
                return Err(Error::Data(format!("{}: T_{} eigenform check fails", label, p)));
            }
        }
        for (p, ap) in bad_prime_ap(record.level, record.weight, &record.signs) {
            if expansion.coeff(p as usize) != &BigRational::from_integer(ap.clone()) {
                return Err(Error::Data(format!(
                    "{}: a_{} = {} does not match the sign data",
                    label,
                    p,
                    expansion.coeff(p as usize)
                )));
            }
        }
        Ok(())
    }

    /// Reconstructs every rational newform recorded in the dimension table.
    pub fn reconstruct_catalog(&mut self, table2: &Table2) -> Result<Vec<BuiltForm>> {
        let mut built = Vec::new();
        for row in &table2.rows {
            for cell in &row.cells {
                if cell.rational > 0 {
                    built.extend(self.reconstruct_cell(
                        row.level,
                        cell.weight,
                        &row.signs,
                        cell.rational as usize,
                    )?);
                }
            }
        }
        built.sort_by(|a, b| {
            (a.record.level, a.record.weight, a.record.signs.0.clone(), a.record.label.clone()).cmp(
                &(b.record.level, b.record.weight, b.record.signs.0.clone(), b.record.label.clone()),
            )
        });
        Ok(built)
    }
}

/// Kernel basis of a rectangular (stacked) matrix acting on n columns.
fn nullspace_rect(a: &Mat) -> Vec<Vec<BigRational>> {
    let cols = a[0].len();
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

fn expression_from_coords(
    level: u64,
    monos: &[Monomial],
    coords: &[BigRational],
) -> Result<Expr> {
    let model = ring_model(level)?;
    let mut terms = Vec::new();
    for (mono, c) in monos.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        let powers: Vec<(&str, u32)> = mono.powers.to_vec();
        terms.push(Expr::term(c.clone(), &powers));
    }
    let sum = match terms.len() {
        0 => return Err(Error::Data("empty construction expression".into())),
        1 => terms.pop().unwrap(),
        _ => Expr::Add(terms),
    };
    Ok(Expr::Mul(vec![sum, Expr::gen(model.cusp_label)]))
}

fn good_primes(level: u64) -> Vec<u64> {
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&p| level % p != 0)
        .collect()
}

fn first_good_prime(level: u64) -> u64 {
    good_primes(level)[0]
}

/// Push-ups commute with the sign bookkeeping only if every old-form
/// combination lands in the signed space; exposed for the generation tool's
/// self-checks.
pub fn old_space_dimension_check(level: u64, k: i64, eps: &Signs) -> Result<(usize, usize)> {
    let mut rec = Reconstructor::new(160);
    let (_, v) = rec.cusp_space(level, k, eps)?;
    let old = rec.old_space(level, k, eps)?;
    Ok((v.len(), old.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::int;

    #[test]
    fn reconstructs_level1_delta() {
        let mut rec = Reconstructor::new(64);
        let built = rec.reconstruct_cell(1, 12, &Signs::empty(), 1).unwrap();
        assert_eq!(built.len(), 1);
        assert_eq!(built[0].record.label, "Delta_12_1");
        assert_eq!(built[0].expansion.coeff(2), &int(-24));
        assert_eq!(built[0].expansion.coeff(6), &int(-6048));
    }

    #[test]
    fn reconstructs_first_level2_newforms() {
        let mut rec = Reconstructor::new(96);
        let built = rec.reconstruct_cell(2, 8, &Signs(vec![1]), 1).unwrap();
        assert_eq!(built[0].record.label, "Delta_8_2_plus");
        // eta_1^8 eta_2^8
        let eta = crate::qseries::eta_product(&crate::qseries::EtaSpec::new(&[(1, 8), (2, 8)]), 96).unwrap();
        assert_eq!(built[0].expansion, eta);
        // weight 16 has a newform in the + part only, above the old Delta
        let built = rec.reconstruct_cell(2, 16, &Signs(vec![1]), 1).unwrap();
        assert_eq!(built[0].record.label, "Delta_16_2_plus");
        assert_eq!(built[0].expansion.coeff(2), &int(-128));
    }

    #[test]
    fn reconstructs_level3_twin_pair() {
        let mut rec = Reconstructor::new(96);
        let built = rec.reconstruct_cell(3, 22, &Signs(vec![1]), 2).unwrap();
        assert_eq!(built.len(), 2);
        assert_eq!(built[0].record.label, "Delta_22_3_plus_a");
        assert_eq!(built[0].expansion.coeff(2), &int(1728));
        assert_eq!(built[1].record.label, "Delta_22_3_plus_b");
        assert_eq!(built[1].expansion.coeff(2), &int(-2844));
        // both share a_3 = -3^10
        assert_eq!(built[0].expansion.coeff(3), &int(-59049));
        assert_eq!(built[1].expansion.coeff(3), &int(-59049));
    }

    #[test]
    fn reconstructs_level8_monomial_cell() {
        let mut rec = Reconstructor::new(96);
        let built = rec.reconstruct_cell(8, 6, &Signs(vec![-1]), 1).unwrap();
        assert_eq!(built[0].record.label, "Delta_6_8_minus");
        // A2 * Delta_8_4_plus
        let mut env = Expander::new(96);
        let a2 = env.generator(8, "A2").unwrap();
        let cusp = env.generator(8, "Delta_8_4_plus").unwrap();
        assert_eq!(built[0].expansion, a2.mul(&cusp));
    }

    #[test]
    fn reconstructs_level6_cell_with_all_old_types() {
        let mut rec = Reconstructor::new(128);
        // weight 12, signs --: one newform above level-1 and level-3 old forms
        let built = rec.reconstruct_cell(6, 12, &Signs(vec![-1, -1]), 1).unwrap();
        assert_eq!(built[0].record.label, "Delta_12_6_minus_minus");
        // sign data: a_2 = +2^5, a_3 = +3^5
        assert_eq!(built[0].expansion.coeff(2), &int(32));
        assert_eq!(built[0].expansion.coeff(3), &int(243));
    }

    #[test]
    fn level4_shift_reproduces_eta_power() {
        let mut rec = Reconstructor::new(64);
        let built = rec.reconstruct_cell(4, 6, &Signs(vec![-1]), 1).unwrap();
        assert_eq!(built[0].record.label, "Delta_6_4_minus");
        let eta = crate::qseries::eta_product(&crate::qseries::EtaSpec::new(&[(2, 12)]), 64).unwrap();
        assert_eq!(built[0].expansion, eta);
    }
}
