//! Explicit models of the graded rings M(N) for N in {1, 2, 3, 4, 6, 8}.
//!
//! Each level carries a small set of named generators with Atkin-Lehner sign
//! grading, a distinguished eta-product generator of the cuspidal ideal, and
//! (at level 6) the single relation d^2 - s^2 = 8 p^2. Newform construction
//! expressions and the identity database are stored as [`Expr`] trees over
//! these generators and evaluated here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::qseries::{
    eisenstein, eta_product, push_up, theta_hex, theta_sq, Eisenstein, EtaSpec, QSeries,
};
use crate::{Error, Result};

/// Supported levels, in ascending order.
pub const LEVELS: [u64; 6] = [1, 2, 3, 4, 6, 8];

/// Atkin-Lehner sign string, one entry of +1/-1 per prime power exactly
/// dividing the level (empty at level 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signs(pub Vec<i8>);

impl Signs {
    pub fn empty() -> Self {
        Signs(vec![])
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for ch in s.chars() {
            match ch {
                '+' => v.push(1),
                '-' => v.push(-1),
                _ => return Err(Error::SignMismatch(s.to_string(), 0)),
            }
        }
        Ok(Signs(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All sign strings of the given length.
    pub fn all(len: usize) -> Vec<Signs> {
        if len == 0 {
            return vec![Signs::empty()];
        }
        let mut out = Vec::new();
        for s in Self::all(len - 1) {
            for sign in [1i8, -1] {
                let mut v = s.0.clone();
                v.push(sign);
                out.push(Signs(v));
            }
        }
        out
    }

    /// Label fragment such as "plus_minus"; empty string at level 1.
    pub fn label_fragment(&self) -> String {
        self.0
            .iter()
            .map(|&s| if s > 0 { "plus" } else { "minus" })
            .collect::<Vec<_>>()
            .join("_")
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for Signs {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Signs::parse(s)
    }
}

impl Serialize for Signs {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Signs {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Signs::parse(&s).map_err(D::Error::custom)
    }
}

/// A named ring generator with its weight (stored doubled so theta in weight
/// 1/2 stays integral) and sign grading when it lies in M(N) itself.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: &'static str,
    pub weight_x2: i64,
    pub al_signs: Option<Signs>,
}

/// The generator model of one level.
#[derive(Clone, Debug)]
pub struct RingModel {
    pub level: u64,
    pub generators: Vec<Generator>,
    /// Label of the eta product generating the cuspidal ideal.
    pub cusp_label: &'static str,
    pub cusp_weight: i64,
    pub cusp_signs: Signs,
    pub cusp_eta: Vec<(u32, i32)>,
    /// Polynomial relations among the sign-graded generators (zero series).
    pub relations: Vec<(&'static str, Expr)>,
}

fn gen(name: &'static str, weight_x2: i64, signs: Option<&str>) -> Generator {
    Generator {
        name,
        weight_x2,
        al_signs: signs.map(|s| Signs::parse(s).expect("static sign string")),
    }
}

/// The ring model for a supported level.
pub fn ring_model(level: u64) -> Result<RingModel> {
    let model = match level {
        1 => RingModel {
            level,
            generators: vec![gen("Q", 8, Some("")), gen("R", 12, Some("")), gen("Delta", 24, Some(""))],
            cusp_label: "Delta",
            cusp_weight: 12,
            cusp_signs: Signs::empty(),
            cusp_eta: vec![(1, 24)],
            relations: vec![],
        },
        2 => RingModel {
            level,
            generators: vec![
                gen("A", 4, Some("-")),
                gen("B", 8, Some("-")),
                gen("Delta_8_2_plus", 16, Some("+")),
            ],
            cusp_label: "Delta_8_2_plus",
            cusp_weight: 8,
            cusp_signs: Signs(vec![1]),
            cusp_eta: vec![(1, 8), (2, 8)],
            relations: vec![],
        },
        3 => RingModel {
            level,
            generators: vec![
                gen("Theta", 2, None),
                gen("Phi", 6, None),
                gen("Delta_6_3_minus", 12, Some("-")),
            ],
            cusp_label: "Delta_6_3_minus",
            cusp_weight: 6,
            cusp_signs: Signs(vec![-1]),
            cusp_eta: vec![(1, 6), (3, 6)],
            relations: vec![],
        },
        4 => RingModel {
            level,
            generators: vec![
                gen("theta", 1, None),
                gen("theta2", 1, None),
                gen("C", 4, Some("-")),
                gen("D", 4, Some("+")),
                gen("Q2", 8, Some("+")),
                gen("R2", 12, Some("-")),
                gen("Delta_6_4_minus", 12, Some("-")),
                gen("Delta_5_4", 10, None),
            ],
            cusp_label: "Delta_6_4_minus",
            cusp_weight: 6,
            cusp_signs: Signs(vec![-1]),
            cusp_eta: vec![(2, 12)],
            relations: vec![],
        },
        6 => RingModel {
            level,
            generators: vec![
                gen("Theta1", 2, None),
                gen("Theta2", 2, None),
                gen("s", 4, Some("+-")),
                gen("p", 4, Some("-+")),
                gen("d", 4, Some("--")),
                gen("Delta_4_6_plus_plus", 8, Some("++")),
            ],
            cusp_label: "Delta_4_6_plus_plus",
            cusp_weight: 4,
            cusp_signs: Signs(vec![1, 1]),
            cusp_eta: vec![(1, 2), (2, 2), (3, 2), (6, 2)],
            // the zero relation among s, p, d: s^2 = d^2 + 8p^2
            relations: vec![(
                "s^2 - d^2 - 8p^2",
                Expr::Add(vec![
                    Expr::Pow(Box::new(Expr::Gen("s".into())), 2),
                    Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Gen("d".into())), 2))),
                    Expr::Neg(Box::new(Expr::Mul(vec![
                        Expr::Int(BigInt::from(8)),
                        Expr::Pow(Box::new(Expr::Gen("p".into())), 2),
                    ]))),
                ]),
            )],
        },
        8 => RingModel {
            level,
            generators: vec![
                gen("theta1", 1, None),
                gen("theta2", 1, None),
                gen("A2", 4, Some("-")),
                gen("B2", 8, Some("-")),
                gen("Delta_8_4_plus", 8, Some("+")),
            ],
            cusp_label: "Delta_8_4_plus",
            cusp_weight: 4,
            cusp_signs: Signs(vec![1]),
            cusp_eta: vec![(2, 4), (4, 4)],
            relations: vec![],
        },
        _ => return Err(Error::UnsupportedLevel(level)),
    };
    Ok(model)
}

/// Prime powers q = p^e exactly dividing the level, ascending p.
pub fn level_prime_powers(level: u64) -> Vec<(u64, u32)> {
    crate::arith::factorize(level)
}

/// Expands a named generator at the given level and precision.
pub fn generator_expansion(level: u64, name: &str, prec: usize) -> Result<QSeries> {
    let mut env = Expander::new(prec);
    env.generator(level, name)
}

/// Memoizing expansion context for generators and expressions.
pub struct Expander {
    prec: usize,
    cache: HashMap<(u64, String), QSeries>,
    pow_cache: HashMap<(u64, String, u32), QSeries>,
}

impl Expander {
    pub fn new(prec: usize) -> Self {
        Expander { prec, cache: HashMap::new(), pow_cache: HashMap::new() }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Cached generator power, built incrementally so each exponent costs
    /// one multiplication across all uses.
    pub fn generator_power(&mut self, level: u64, name: &str, e: u32) -> Result<QSeries> {
        if e == 0 {
            return Ok(QSeries::one(self.prec));
        }
        if e == 1 {
            return self.generator(level, name);
        }
        let key = (level, name.to_string(), e);
        if let Some(s) = self.pow_cache.get(&key) {
            return Ok(s.clone());
        }
        let lower = self.generator_power(level, name, e - 1)?;
        let base = self.generator(level, name)?;
        let s = lower.mul(&base);
        self.pow_cache.insert(key, s.clone());
        Ok(s)
    }

    pub fn generator(&mut self, level: u64, name: &str) -> Result<QSeries> {
        if let Some(s) = self.cache.get(&(level, name.to_string())) {
            return Ok(s.clone());
        }
        let prec = self.prec;
        let series = match (level, name) {
            (1, "Q") => eisenstein(Eisenstein::Q, prec),
            (1, "R") => eisenstein(Eisenstein::R, prec),
            (1, "Delta") => eta_product(&EtaSpec::new(&[(1, 24)]), prec)?,
            (2, "A") => {
                let t1 = theta_sq(prec);
                let t2 = push_up(&t1, 2);
                // theta1^4 + 4 theta1^2 theta2^2 - 4 theta2^4
                let t1_2 = t1.pow(2);
                let t2_2 = t2.pow(2);
                t1_2.pow(2)
                    .add(&t1_2.mul(&t2_2).scale(&BigRational::from_integer(4.into())))
                    .sub(&t2_2.pow(2).scale(&BigRational::from_integer(4.into())))
            }
            (2, "B") => {
                let t1 = theta_sq(prec);
                let t2 = push_up(&t1, 2);
                let a = t1.pow(2);
                let b = t2.pow(2);
                // theta1^8 - 24 t1^6 t2^2 + 40 t1^4 t2^4 - 32 t1^2 t2^6 + 16 t2^8
                let terms = [
                    (1i64, 4u32, 0u32),
                    (-24, 3, 1),
                    (40, 2, 2),
                    (-32, 1, 3),
                    (16, 0, 4),
                ];
                let mut acc = QSeries::zero(prec);
                for (c, i, j) in terms {
                    acc = acc.add(
                        &a.pow(i).mul(&b.pow(j)).scale(&BigRational::from_integer(c.into())),
                    );
                }
                acc
            }
            (2, "Delta_8_2_plus") => eta_product(&EtaSpec::new(&[(1, 8), (2, 8)]), prec)?,
            (3, "Theta") => theta_hex(prec),
            (3, "Phi") => {
                let th1 = theta_hex(prec);
                let th2 = push_up(&th1, 2);
                // 4 Theta2^3 - 3 Theta1^2 Theta2
                th2.pow(3)
                    .scale(&BigRational::from_integer(4.into()))
                    .sub(&th1.pow(2).mul(&th2).scale(&BigRational::from_integer(3.into())))
            }
            (3, "Delta_6_3_minus") => eta_product(&EtaSpec::new(&[(1, 6), (3, 6)]), prec)?,
            (4, "theta") => theta_sq(prec),
            (4, "theta2") => push_up(&theta_sq(prec), 2),
            (4, "C") => theta_sq(prec).pow(4),
            (4, "D") => {
                let t1 = theta_sq(prec);
                let t2 = push_up(&t1, 2);
                let a = t1.pow(2);
                let b = t2.pow(2);
                // theta1^4 - 8 theta1^2 theta2^2 + 8 theta2^4
                a.pow(2)
                    .sub(&a.mul(&b).scale(&BigRational::from_integer(8.into())))
                    .add(&b.pow(2).scale(&BigRational::from_integer(8.into())))
            }
            (4, "Q2") => {
                let th8 = self.generator(4, "theta")?.pow(8);
                let d = self.generator(4, "D")?;
                // 2^-2 (3 theta^8 + D^2)
                th8.scale(&BigRational::from_integer(3.into()))
                    .add(&d.pow(2))
                    .scale(&BigRational::new(1.into(), 4.into()))
            }
            (4, "R2") => {
                let th8 = self.generator(4, "theta")?.pow(8);
                let d = self.generator(4, "D")?;
                // 2^-3 D (9 theta^8 - D^2)
                d.mul(&th8.scale(&BigRational::from_integer(9.into())).sub(&d.pow(2)))
                    .scale(&BigRational::new(1.into(), 8.into()))
            }
            (4, "Delta_6_4_minus") => eta_product(&EtaSpec::new(&[(2, 12)]), prec)?,
            (4, "Delta_5_4") => eta_product(&EtaSpec::new(&[(1, 4), (2, 2), (4, 4)]), prec)?,
            (6, "Theta1") => theta_hex(prec),
            (6, "Theta2") => push_up(&theta_hex(prec), 2),
            (6, "s") => {
                let t1 = self.generator(6, "Theta1")?;
                let t2 = self.generator(6, "Theta2")?;
                t1.pow(2).add(&t2.pow(2).scale(&BigRational::from_integer(2.into())))
            }
            (6, "p") => {
                let t1 = self.generator(6, "Theta1")?;
                let t2 = self.generator(6, "Theta2")?;
                t1.mul(&t2)
            }
            (6, "d") => {
                let t1 = self.generator(6, "Theta1")?;
                let t2 = self.generator(6, "Theta2")?;
                t1.pow(2).sub(&t2.pow(2).scale(&BigRational::from_integer(2.into())))
            }
            (6, "Delta_4_6_plus_plus") => {
                eta_product(&EtaSpec::new(&[(1, 2), (2, 2), (3, 2), (6, 2)]), prec)?
            }
            (8, "theta1") => theta_sq(prec),
            (8, "theta2") => push_up(&theta_sq(prec), 2),
            (8, "A2") => push_up(&self.generator(2, "A")?, 2),
            (8, "B2") => push_up(&self.generator(2, "B")?, 2),
            (8, "Delta_8_4_plus") => eta_product(&EtaSpec::new(&[(2, 4), (4, 4)]), prec)?,
            _ => return Err(Error::UnknownGenerator(name.to_string(), level)),
        };
        self.cache.insert((level, name.to_string()), series.clone());
        Ok(series)
    }

    /// Evaluates an expression in the context of a level. Form references
    /// are resolved through `forms` when provided.
    pub fn eval(
        &mut self,
        level: u64,
        expr: &Expr,
        forms: Option<&dyn FormResolver>,
    ) -> Result<QSeries> {
        match expr {
            Expr::Gen(name) => self.generator(level, name),
            Expr::Int(n) => Ok(QSeries::monomial(BigRational::from_integer(n.clone()), 0, self.prec)),
            Expr::Frac(r) => Ok(QSeries::monomial(r.clone(), 0, self.prec)),
            Expr::Add(terms) => {
                let mut acc = QSeries::zero(self.prec);
                for t in terms {
                    acc = acc.add(&self.eval(level, t, forms)?);
                }
                Ok(acc)
            }
            Expr::Mul(factors) => {
                let mut acc = QSeries::one(self.prec);
                for t in factors {
                    acc = acc.mul(&self.eval(level, t, forms)?);
                }
                Ok(acc)
            }
            Expr::Pow(base, e) => {
                if let Expr::Gen(name) = base.as_ref() {
                    return self.generator_power(level, name, *e);
                }
                Ok(self.eval(level, base, forms)?.pow(*e))
            }
            Expr::Neg(inner) => Ok(self.eval(level, inner, forms)?.neg()),
            Expr::Push(inner, t) => Ok(push_up(&self.eval(level, inner, forms)?, *t)),
            Expr::Level(other_level, inner) => self.eval(*other_level, inner, forms),
            Expr::Eta(pairs) => eta_product(&EtaSpec::new(pairs), self.prec),
            Expr::Form(label) => {
                let resolver = forms.ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                let (form_level, form_expr) = resolver.form_expr(label)?;
                self.eval(form_level, &form_expr, forms)
            }
        }
    }
}

/// Resolves a catalog label to (level, construction expression).
pub trait FormResolver {
    fn form_expr(&self, label: &str) -> Result<(u64, Expr)>;
}

/// A polynomial expression over the ring generators, with exact rational
/// scalars. Serialized as nested JSON arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Int(BigInt),
    Frac(BigRational),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    Push(Box<Expr>, u32),
    Level(u64, Box<Expr>),
    Eta(Vec<(u32, i32)>),
    Form(String),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn frac(num: i64, den: i64) -> Expr {
        Expr::Frac(BigRational::new(num.into(), den.into()))
    }

    pub fn gen(name: &str) -> Expr {
        Expr::Gen(name.to_string())
    }

    pub fn pow(base: Expr, e: u32) -> Expr {
        Expr::Pow(Box::new(base), e)
    }

    /// Scalar * product of generator powers, the building block of stored
    /// construction expressions.
    pub fn term(scalar: BigRational, powers: &[(&str, u32)]) -> Expr {
        let mut factors = Vec::new();
        if !scalar.is_one() {
            factors.push(Expr::Frac(scalar));
        }
        for &(name, e) in powers {
            if e == 1 {
                factors.push(Expr::gen(name));
            } else if e > 1 {
                factors.push(Expr::pow(Expr::gen(name), e));
            }
        }
        match factors.len() {
            0 => Expr::int(1),
            1 => factors.pop().unwrap(),
            _ => Expr::Mul(factors),
        }
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde_json::{json, Value};
        fn to_value(e: &Expr) -> Value {
            match e {
                Expr::Gen(n) => json!(["gen", n]),
                Expr::Int(n) => json!(["int", n.to_string()]),
                Expr::Frac(r) => json!(["frac", r.numer().to_string(), r.denom().to_string()]),
                Expr::Add(v) => {
                    let mut arr = vec![json!("add")];
                    arr.extend(v.iter().map(to_value));
                    Value::Array(arr)
                }
                Expr::Mul(v) => {
                    let mut arr = vec![json!("mul")];
                    arr.extend(v.iter().map(to_value));
                    Value::Array(arr)
                }
                Expr::Pow(b, e) => json!(["pow", to_value(b), e]),
                Expr::Neg(i) => json!(["neg", to_value(i)]),
                Expr::Push(i, t) => json!(["push", to_value(i), t]),
                Expr::Level(n, i) => json!(["level", n, to_value(i)]),
                Expr::Eta(pairs) => json!(["eta", pairs]),
                Expr::Form(l) => json!(["form", l]),
            }
        }
        to_value(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        parse_expr(&v).map_err(D::Error::custom)
    }
}

fn parse_expr(v: &serde_json::Value) -> std::result::Result<Expr, String> {
    let arr = v.as_array().ok_or("expression node must be an array")?;
    let tag = arr.first().and_then(|t| t.as_str()).ok_or("missing node tag")?;
    let expect = |n: usize| -> std::result::Result<(), String> {
        if arr.len() == n + 1 {
            Ok(())
        } else {
            Err(format!("node `{}` expects {} arguments", tag, n))
        }
    };
    match tag {
        "gen" => {
            expect(1)?;
            Ok(Expr::Gen(arr[1].as_str().ok_or("gen name")?.to_string()))
        }
        "int" => {
            expect(1)?;
            let s = arr[1].as_str().ok_or("int literal")?;
            Ok(Expr::Int(s.parse().map_err(|e| format!("{}", e))?))
        }
        "frac" => {
            expect(2)?;
            let n: BigInt = arr[1].as_str().ok_or("frac numer")?.parse().map_err(|e| format!("{}", e))?;
            let d: BigInt = arr[2].as_str().ok_or("frac denom")?.parse().map_err(|e| format!("{}", e))?;
            Ok(Expr::Frac(BigRational::new(n, d)))
        }
        "add" | "mul" => {
            let args: std::result::Result<Vec<_>, _> = arr[1..].iter().map(parse_expr).collect();
            let args = args?;
            Ok(if tag == "add" { Expr::Add(args) } else { Expr::Mul(args) })
        }
        "pow" => {
            expect(2)?;
            let base = parse_expr(&arr[1])?;
            let e = arr[2].as_u64().ok_or("pow exponent")? as u32;
            Ok(Expr::Pow(Box::new(base), e))
        }
        "neg" => {
            expect(1)?;
            Ok(Expr::Neg(Box::new(parse_expr(&arr[1])?)))
        }
        "push" => {
            expect(2)?;
            let inner = parse_expr(&arr[1])?;
            let t = arr[2].as_u64().ok_or("push scale")? as u32;
            Ok(Expr::Push(Box::new(inner), t))
        }
        "level" => {
            expect(2)?;
            let n = arr[1].as_u64().ok_or("level number")?;
            Ok(Expr::Level(n, Box::new(parse_expr(&arr[2])?)))
        }
        "eta" => {
            expect(1)?;
            let pairs = arr[1]
                .as_array()
                .ok_or("eta exponent list")?
                .iter()
                .map(|p| {
                    let pa = p.as_array().filter(|a| a.len() == 2).ok_or("eta pair")?;
                    let t = pa[0].as_u64().ok_or("eta scale")? as u32;
                    let e = pa[1].as_i64().ok_or("eta exponent")? as i32;
                    Ok((t, e))
                })
                .collect::<std::result::Result<Vec<_>, String>>()?;
            Ok(Expr::Eta(pairs))
        }
        "form" => {
            expect(1)?;
            Ok(Expr::Form(arr[1].as_str().ok_or("form label")?.to_string()))
        }
        other => Err(format!("unknown expression tag `{}`", other)),
    }
}

/// A monomial in the sign-graded generators of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub powers: Vec<(&'static str, u32)>,
}

impl Monomial {
    pub fn to_expr(&self) -> Expr {
        Expr::term(BigRational::one(), &self.powers.iter().map(|&(n, e)| (n, e)).collect::<Vec<_>>())
    }

    pub fn expand(&self, level: u64, env: &mut Expander) -> Result<QSeries> {
        let mut acc = QSeries::one(env.precision());
        for &(name, e) in &self.powers {
            acc = acc.mul(&env.generator_power(level, name, e)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers
            .iter()
            .map(|&(n, e)| if e == 1 { n.to_string() } else { format!("{}^{}", n, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// All generator monomials of weight k with Atkin-Lehner signs eps at the
/// given level, in the canonical form f1(s,p) + d f2(s,p) at level 6.
pub fn monomial_basis(level: u64, k: i64, eps: &Signs) -> Result<Vec<Monomial>> {
    if k < 0 {
        return Ok(vec![]);
    }
    let k = k as u32;
    let mut out = Vec::new();
    match level {
        1 => {
            if !eps.is_empty() {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // Q^a R^b with 4a + 6b = k
            for b in 0..=k / 6 {
                let rem = k - 6 * b;
                if rem % 4 == 0 {
                    out.push(mono(&[("Q", rem / 4), ("R", b)]));
                }
            }
        }
        2 | 8 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            let (x, y) = if level == 2 { ("A", "B") } else { ("A2", "B2") };
            // x^a y^b with 2a + 4b = k, sign (-1)^(a+b)
            for b in 0..=k / 4 {
                let rem = k - 4 * b;
                if rem % 2 == 0 {
                    let a = rem / 2;
                    let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                    if sign == eps.0[0] {
                        out.push(mono(&[(x, a), (y, b)]));
                    }
                }
            }
        }
        3 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // Theta^a Phi^b with a + 3b = k, k even; w3 acts by (-1)^((a+b)/2)
            for b in 0..=k / 3 {
                let a = k - 3 * b;
                debug_assert!((a + b) % 2 == 0);
                let sign = if (a + b) / 2 % 2 == 0 { 1 } else { -1 };
                if sign == eps.0[0] {
                    out.push(mono(&[("Theta", a), ("Phi", b)]));
                }
            }
        }
        4 => {
            if eps.len() != 1 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // C^a D^b with 2a + 2b = k, sign (-1)^a
            if k % 2 == 0 {
                for a in 0..=k / 2 {
                    let b = k / 2 - a;
                    let sign = if a % 2 == 0 { 1 } else { -1 };
                    if sign == eps.0[0] {
                        out.push(mono(&[("C", a), ("D", b)]));
                    }
                }
            }
        }
        6 => {
            if eps.len() != 2 {
                return Err(Error::SignMismatch(eps.to_string(), level));
            }
            // s^a p^b d^c with 2(a+b+c) = k, c <= 1, signs ((-1)^(b+c), (-1)^(a+c))
            if k % 2 == 0 {
                let total = k / 2;
                for c in 0..=1u32.min(total) {
                    for b in 0..=total - c {
                        let a = total - c - b;
                        let s2 = if (b + c) % 2 == 0 { 1 } else { -1 };
                        let s3 = if (a + c) % 2 == 0 { 1 } else { -1 };
                        if s2 == eps.0[0] && s3 == eps.0[1] {
                            out.push(mono(&[("s", a), ("p", b), ("d", c)]));
                        }
                    }
                }
            }
        }
        _ => return Err(Error::UnsupportedLevel(level)),
    }
    Ok(out)
}

fn mono(powers: &[(&'static str, u32)]) -> Monomial {
    Monomial { powers: powers.iter().copied().filter(|&(_, e)| e > 0).collect() }
}

/// Outcome of checking one stored identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityOutcome {
    Pass,
    /// Index and value of the first differing coefficient.
    FailAt(usize, String),
}

/// Evaluates lhs - rhs at the given precision and reports the first failing
/// coefficient, if any.
pub fn verify_identity(
    level: u64,
    lhs: &Expr,
    rhs: &Expr,
    prec: usize,
    env: &mut Expander,
    forms: Option<&dyn FormResolver>,
) -> Result<IdentityOutcome> {
    let l = env.eval(level, lhs, forms)?;
    let r = env.eval(level, rhs, forms)?;
    let diff = l.sub(&r).truncate(prec);
    match diff.order() {
        None => Ok(IdentityOutcome::Pass),
        Some(n) => Ok(IdentityOutcome::FailAt(n, diff.coeff(n).to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::int;

    #[test]
    fn printed_generator_expansions() {
        let phi = generator_expansion(3, "Phi", 4).unwrap();
        assert_eq!(phi, QSeries::from_ints(&[1, -36, -54, -252]));
        let d = generator_expansion(4, "D", 3).unwrap();
        assert_eq!(d, QSeries::from_ints(&[1, -24, 24]));
        let a = generator_expansion(2, "A", 6).unwrap();
        assert_eq!(a, QSeries::from_ints(&[1, 24, 24, 96, 24, 144]));
        let b = generator_expansion(2, "B", 4).unwrap();
        assert_eq!(b, QSeries::from_ints(&[1, -80, -400, -2240]));
        let cusp8 = generator_expansion(8, "Delta_8_4_plus", 8).unwrap();
        assert_eq!(cusp8, QSeries::from_ints(&[0, 1, 0, -4, 0, -2, 0, 24]));
    }

    #[test]
    fn s_minus_d_is_4_theta2_squared() {
        let mut env = Expander::new(10);
        let s = env.generator(6, "s").unwrap();
        let d = env.generator(6, "d").unwrap();
        let t2 = env.generator(6, "Theta2").unwrap();
        let diff = s.sub(&d);
        assert_eq!(diff.coeff(0), &int(4));
        assert_eq!(diff, t2.pow(2).scale(&int(4)));
    }

    #[test]
    fn level6_relation_holds() {
        let model = ring_model(6).unwrap();
        let mut env = Expander::new(60);
        for (label, rel) in &model.relations {
            let v = env.eval(6, rel, None).unwrap();
            assert!(v.is_zero(), "relation {} fails", label);
        }
    }

    #[test]
    fn cusp_generators_start_at_q() {
        for level in LEVELS {
            let model = ring_model(level).unwrap();
            let g = generator_expansion(level, model.cusp_label, 8).unwrap();
            assert_eq!(g.order(), Some(1), "level {}", level);
            assert_eq!(g.coeff(1), &int(1), "level {}", level);
        }
    }

    #[test]
    fn monomial_bases_match_printed_counts() {
        // weight 12 at level 1: Q^3 and R^2
        let b = monomial_basis(1, 12, &Signs::empty()).unwrap();
        assert_eq!(b.len(), 2);
        // weight 8 even-parity monomials at level 2: A^4, B^2
        let b = monomial_basis(2, 8, &Signs(vec![1])).unwrap();
        assert_eq!(b.len(), 2);
        // weight 2 at level 6: s, p, d with signs +-, -+, --
        assert_eq!(monomial_basis(6, 2, &Signs(vec![1, -1])).unwrap().len(), 1);
        assert_eq!(monomial_basis(6, 2, &Signs(vec![-1, 1])).unwrap().len(), 1);
        assert_eq!(monomial_basis(6, 2, &Signs(vec![-1, -1])).unwrap().len(), 1);
        assert_eq!(monomial_basis(6, 2, &Signs(vec![1, 1])).unwrap().len(), 0);
        assert!(monomial_basis(5, 2, &Signs(vec![1])).is_err());
    }

    #[test]
    fn expr_round_trip() {
        let e = Expr::Mul(vec![
            Expr::frac(1, 256),
            Expr::Add(vec![
                Expr::pow(Expr::gen("A"), 4),
                Expr::Neg(Box::new(Expr::pow(Expr::gen("B"), 2))),
            ]),
            Expr::Push(Box::new(Expr::Level(1, Box::new(Expr::gen("Q")))), 2),
            Expr::Eta(vec![(1, 8), (2, 8)]),
            Expr::Form("Delta_12_1".into()),
        ]);
        let json = serde_json::to_string(&e).unwrap();
        let back: Expr = serde_json::from_str(&json).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn q2_is_pushed_up_eisenstein() {
        let mut env = Expander::new(30);
        let q2 = env.generator(4, "Q2").unwrap();
        let q = env.generator(1, "Q").unwrap();
        assert_eq!(q2, push_up(&q, 2));
        let r2 = env.generator(4, "R2").unwrap();
        let r = env.generator(1, "R").unwrap();
        assert_eq!(r2, push_up(&r, 2));
    }
}
