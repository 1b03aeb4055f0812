//! Sparse multivariate polynomials with exact integer coefficients.

use rustc_hash::FxHashMap;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Reverse;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Maximum number of variables in a polynomial ring.
pub const MAX_VARS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("variable {var} out of range for a ring with {nvars} variables")]
    VariableOutOfRange { var: usize, nvars: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor has no variable of degree exactly one")]
    NoLinearVariable,
    #[error("polynomial rings differ: {0} vs {1} variables")]
    RingMismatch(usize, usize),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

/// Exponent vector. Ordered by total degree, then lexicographically, so the
/// derived order is graded lexicographic with variable 0 largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u16,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        degree: 0,
        exps: [0; MAX_VARS],
    };

    pub fn var(i: usize) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Result<Monomial, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut m = Monomial::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m.degree = exps.iter().map(|&e| e as u16).sum();
        Ok(m)
    }

    pub fn exponent(&self, var: usize) -> u8 {
        self.exps[var]
    }

    pub fn exponents(&self, nvars: usize) -> &[u8] {
        &self.exps[..nvars]
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    fn with_exponent(mut self, var: usize, e: u8) -> Monomial {
        self.degree = self.degree - self.exps[var] as u16 + e as u16;
        self.exps[var] = e;
        self
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }
}

fn checked_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("coefficient overflow")
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// A polynomial in variables `0..nvars`. Terms are kept in strictly
/// decreasing graded-lex order with no zero coefficients, so structural
/// equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: Vec<(Monomial, i128)>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        MPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: i128) -> MPoly {
        let mut p = MPoly::zero(nvars);
        if c != 0 {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars, "variable {i} out of range");
        MPoly {
            nvars,
            terms: vec![(Monomial::var(i), 1)],
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, i128)>,
    ) -> Result<MPoly, PolyError> {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVariables(nvars));
        }
        let mut acc: FxHashMap<Monomial, i128> = FxHashMap::default();
        for (m, c) in terms {
            if let Some(v) = (nvars..MAX_VARS).find(|&v| m.exps[v] != 0) {
                return Err(PolyError::VariableOutOfRange { var: v, nvars });
            }
            let e = acc.entry(m).or_insert(0);
            *e = checked_add(*e, c);
        }
        Ok(MPoly::from_map(nvars, acc))
    }

    fn from_map(nvars: usize, acc: FxHashMap<Monomial, i128>) -> MPoly {
        let mut terms: Vec<_> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable_by_key(|&(m, _)| Reverse(m));
        MPoly { nvars, terms }
    }

    /// Sum of `sign * a * b` over the given triples.
    pub fn sum_of_products<'a>(
        nvars: usize,
        items: impl IntoIterator<Item = (i128, &'a MPoly, &'a MPoly)>,
    ) -> MPoly {
        let mut acc: FxHashMap<Monomial, i128> = FxHashMap::default();
        for (sign, a, b) in items {
            assert_eq!(a.nvars, nvars, "ring mismatch");
            assert_eq!(b.nvars, nvars, "ring mismatch");
            for (ma, ca) in &a.terms {
                let ca = checked_mul(sign, *ca);
                for (mb, cb) in &b.terms {
                    let e = acc.entry(ma.times(mb)).or_insert(0);
                    *e = checked_add(*e, checked_mul(ca, *cb));
                }
            }
        }
        MPoly::from_map(nvars, acc)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, i128)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree == 0)
    }

    /// Coefficient of the given exponent vector (missing slots are zero).
    pub fn coefficient(&self, exps: &[u8]) -> i128 {
        let Ok(m) = Monomial::from_exponents(exps) else {
            return 0;
        };
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map_or(0, |i| self.terms[i].1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u16> {
        self.terms.first().map(|(m, _)| m.degree)
    }

    /// The common degree of all terms, if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u16> {
        let d = self.total_degree()?;
        self.terms.iter().all(|(m, _)| m.degree == d).then_some(d)
    }

    pub fn degree_in(&self, var: usize) -> u8 {
        self.terms
            .iter()
            .map(|(m, _)| m.exps[var])
            .max()
            .unwrap_or(0)
    }

    /// Degree at most one in every variable.
    pub fn is_multilinear(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, _)| m.exps.iter().all(|&e| e <= 1))
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.iter().any(|(m, _)| m.exps[v] != 0))
            .collect()
    }

    /// Same polynomial viewed in a ring with `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<MPoly, PolyError> {
        MPoly::from_terms(nvars, self.terms.iter().copied())
    }

    pub fn scale(&self, c: i128) -> MPoly {
        if c == 0 {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|&(m, a)| (m, checked_mul(a, c)))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.nvars), |acc, _| &acc * self)
    }

    fn combine(&self, other: &MPoly, sign: i128) -> MPoly {
        assert_eq!(self.nvars, other.nvars, "ring mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => b.0.cmp(&a.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    terms.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = other.terms[j];
                    terms.push((m, checked_mul(sign, c)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = checked_add(self.terms[i].1, checked_mul(sign, other.terms[j].1));
                    if c != 0 {
                        terms.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Exact value at an integer point; panics on overflow.
    pub fn eval_i128(&self, point: &[i128]) -> i128 {
        assert!(point.len() >= self.nvars);
        self.terms.iter().fold(0, |acc, (m, c)| {
            let mut t = *c;
            for (v, &e) in m.exps[..self.nvars].iter().enumerate() {
                for _ in 0..e {
                    t = checked_mul(t, point[v]);
                }
            }
            checked_add(acc, t)
        })
    }

    /// Value modulo `q` at a point with entries already reduced mod `q`.
    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        assert!(point.len() >= self.nvars);
        let q128 = q as u128;
        let mut acc: u128 = 0;
        for (m, c) in &self.terms {
            let mut t = c.rem_euclid(q as i128) as u128;
            for (v, &e) in m.exps[..self.nvars].iter().enumerate() {
                for _ in 0..e {
                    t = t * point[v] as u128 % q128;
                }
            }
            acc = (acc + t) % q128;
        }
        acc as u64
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert!(point.len() >= self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exps[..self.nvars]
                    .iter()
                    .enumerate()
                    .fold(*c as f64, |t, (v, &e)| t * point[v].powi(e as i32))
            })
            .sum()
    }

    /// Replaces variable `var` by `value` (a polynomial in the same ring).
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        assert!(var < self.nvars, "variable {var} out of range");
        assert_eq!(value.nvars, self.nvars, "ring mismatch");
        let max_e = self.degree_in(var) as u32;
        let powers: Vec<MPoly> = (0..=max_e).map(|k| value.pow(k)).collect();
        let mut groups: FxHashMap<u8, Vec<(Monomial, i128)>> = FxHashMap::default();
        for &(m, c) in &self.terms {
            groups
                .entry(m.exps[var])
                .or_default()
                .push((m.with_exponent(var, 0), c));
        }
        let mut parts = Vec::new();
        for (e, terms) in groups {
            let rest = MPoly::from_terms(self.nvars, terms).expect("same ring");
            parts.push((e, rest));
        }
        MPoly::sum_of_products(
            self.nvars,
            parts
                .iter()
                .map(|(e, rest)| (1, rest, &powers[*e as usize])),
        )
    }

    /// Replaces every variable `i` by `images[i]`, all in one target ring.
    pub fn compose(&self, images: &[MPoly]) -> Result<MPoly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::RingMismatch(self.nvars, images.len()));
        }
        let target = images.first().map_or(0, MPoly::nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(PolyError::RingMismatch(target, bad.nvars));
        }
        let mut total = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, *c);
            for (v, &e) in m.exps[..self.nvars].iter().enumerate() {
                for _ in 0..e {
                    t = &t * &images[v];
                }
            }
            total = &total + &t;
        }
        Ok(total)
    }

    /// Splits into coefficients of powers of `var`: `self = Σ_k out[k] var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, i128)>> = vec![Vec::new(); deg + 1];
        for &(m, c) in &self.terms {
            buckets[m.exps[var] as usize].push((m.with_exponent(var, 0), c));
        }
        buckets
            .into_iter()
            .map(|b| MPoly::from_terms(self.nvars, b).expect("same ring"))
            .collect()
    }

    /// Returns `Some(r)` with `self = d * r`, or `None` if `d` does not divide `self`.
    ///
    /// Division is carried out in one variable `x` of degree one in `d`:
    /// with `d = d1 x + d0`, the leading `x`-coefficient of the running
    /// remainder is divided exactly by `d1` (recursively) until the
    /// remainder vanishes or the division gets stuck.
    pub fn exact_div(&self, d: &MPoly) -> Result<Option<MPoly>, PolyError> {
        if self.nvars != d.nvars {
            return Err(PolyError::RingMismatch(self.nvars, d.nvars));
        }
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if d.is_constant() {
            let c = d.terms[0].1;
            if self.terms.iter().any(|(_, a)| a % c != 0) {
                return Ok(None);
            }
            return Ok(Some(MPoly {
                nvars: self.nvars,
                terms: self.terms.iter().map(|&(m, a)| (m, a / c)).collect(),
            }));
        }
        let mut last_err = PolyError::NoLinearVariable;
        for x in d.support().into_iter().filter(|&x| d.degree_in(x) == 1) {
            match self.exact_div_in(d, x) {
                Ok(r) => return Ok(r),
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    fn exact_div_in(&self, d: &MPoly, x: usize) -> Result<Option<MPoly>, PolyError> {
        let parts = d.coefficients_in(x);
        let d1 = &parts[1];
        let mut rem = self.clone();
        let mut quotient = MPoly::zero(self.nvars);
        while !rem.is_zero() {
            let k = rem.degree_in(x);
            if k == 0 {
                return Ok(None);
            }
            let lead = rem.coefficients_in(x).swap_remove(k as usize);
            let Some(c) = lead.exact_div(d1)? else {
                return Ok(None);
            };
            let step = c.times_var_power(x, k - 1);
            rem = &rem - &(&step * d);
            quotient = &quotient + &step;
        }
        Ok(Some(quotient))
    }

    fn times_var_power(&self, var: usize, k: u8) -> MPoly {
        let mut out = self.clone();
        for t in &mut out.terms {
            let e = t.0.exps[var].checked_add(k).expect("exponent overflow");
            t.0 = t.0.with_exponent(var, e);
        }
        out.terms.sort_unstable_by_key(|&(m, _)| Reverse(m));
        out
    }

    /// `d` divides `self` exactly.
    pub fn divisible_by(&self, d: &MPoly) -> Result<bool, PolyError> {
        Ok(self.exact_div(d)?.is_some())
    }

    /// Renders the polynomial with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayWith { p: self, names }
    }
}

/// `d` divides `p` as polynomials.
pub fn divides(d: &MPoly, p: &MPoly) -> Result<bool, PolyError> {
    p.divisible_by(d)
}

/// `T1..TN` names used for edge variables.
pub fn edge_variable_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("T{i}")).collect()
}

struct DisplayWith<'a> {
    p: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for DisplayWith<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.p.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            match (i, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (v, &e) in m.exps[..self.p.nvars].iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    _ => factors.push(format!("{}^{e}", self.names[v])),
                }
            }
            if factors.is_empty() || mag != 1 {
                factors.insert(0, mag.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = edge_variable_names(self.nvars);
        DisplayWith {
            p: self,
            names: &names,
        }
        .fmt(f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.combine(rhs, 1)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.combine(rhs, -1)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        MPoly::sum_of_products(self.nvars, [(1, self, rhs)])
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(-1)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    exps: Vec<u8>,
    coef: i128,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exps: m.exps[..self.nvars].to_vec(),
                    coef: *c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exps.len() != raw.vars {
                return Err(D::Error::custom(PolyError::Malformed(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    t.exps.len(),
                    raw.vars
                ))));
            }
            terms.push((
                Monomial::from_exponents(&t.exps).map_err(D::Error::custom)?,
                t.coef,
            ));
        }
        MPoly::from_terms(raw.vars, terms).map_err(D::Error::custom)
    }
}

/// Affine linear form `constant + Σ coef_v · x_v`, used for matrix entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    constant: i128,
    /// `(variable, coefficient)` sorted by variable, no zero coefficients.
    coeffs: Vec<(usize, i128)>,
}

impl LinearForm {
    pub fn zero() -> LinearForm {
        LinearForm::default()
    }

    pub fn constant(c: i128) -> LinearForm {
        LinearForm {
            constant: c,
            coeffs: Vec::new(),
        }
    }

    pub fn var(v: usize) -> LinearForm {
        LinearForm::from_coeffs(0, [(v, 1)])
    }

    pub fn from_coeffs(constant: i128, coeffs: impl IntoIterator<Item = (usize, i128)>) -> Self {
        let mut map: std::collections::BTreeMap<usize, i128> = Default::default();
        for (v, c) in coeffs {
            *map.entry(v).or_insert(0) += c;
        }
        LinearForm {
            constant,
            coeffs: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn constant_term(&self) -> i128 {
        self.constant
    }

    pub fn coeffs(&self) -> &[(usize, i128)] {
        &self.coeffs
    }

    pub fn coeff(&self, v: usize) -> i128 {
        self.coeffs
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.coeffs[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.is_empty()
    }

    /// Largest variable id plus one.
    pub fn var_bound(&self) -> usize {
        self.coeffs.last().map_or(0, |&(v, _)| v + 1)
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        LinearForm::from_coeffs(
            self.constant + other.constant,
            self.coeffs.iter().chain(&other.coeffs).copied(),
        )
    }

    pub fn scale(&self, c: i128) -> LinearForm {
        LinearForm::from_coeffs(
            self.constant * c,
            self.coeffs.iter().map(|&(v, a)| (v, a * c)),
        )
    }

    pub fn to_poly(&self, nvars: usize) -> MPoly {
        let terms = std::iter::once((Monomial::ONE, self.constant))
            .chain(self.coeffs.iter().map(|&(v, c)| (Monomial::var(v), c)));
        MPoly::from_terms(nvars, terms).expect("linear form fits its ring")
    }
}
