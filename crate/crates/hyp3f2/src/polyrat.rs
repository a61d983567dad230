//! Exact sparse multivariate polynomial and rational-function arithmetic over
//! the rationals in the five parameter symbols `a0, a1, a2, a3, a4`.
//!
//! Coefficients are arbitrary-precision rationals; nothing in this module ever
//! touches floating point except the explicit complex evaluation entry points.
//! Rational functions are *not* reduced to lowest terms (multivariate GCD is a
//! non-goal); equality is decided by cross-multiplication, and a cheap
//! content/monomial cancellation pass keeps representatives small.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

/// Number of parameter symbols.
pub const NVARS: usize = 5;

/// Exponent vector of a monomial, one entry per symbol.
pub type Expo = [u16; NVARS];

/// Names used for text rendering.
pub const VAR_NAMES: [&str; NVARS] = ["a0", "a1", "a2", "a3", "a4"];

/// LaTeX names of the symbols.
pub const VAR_NAMES_LATEX: [&str; NVARS] = ["a_0", "a_1", "a_2", "a_3", "a_4"];

/// Errors raised by exact evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// The denominator vanishes at the requested point.
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vector; the map never stores a zero
/// coefficient. Iteration order (and hence serialized output) is
/// lexicographic on exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Polynomial {
    terms: BTreeMap<Expo, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, [0; NVARS])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The symbol `a_i`.
    pub fn var(i: usize) -> Self {
        assert!(i < NVARS, "variable index out of range");
        let mut e = [0u16; NVARS];
        e[i] = 1;
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, e: Expo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs with distinct
    /// exponents, dropping zero coefficients.
    pub fn from_sorted_terms(terms: Vec<(Expo, BigRational)>) -> Self {
        Self {
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the given exponent vector (zero if absent).
    pub fn coeff(&self, e: &Expo) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[0; NVARS])
    }

    /// Lexicographically greatest term, used as the leading term for
    /// normalization and exact division.
    pub fn leading(&self) -> Option<(&Expo, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn insert_add(&mut self, e: Expo, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitutes `images[i]` for `a_i`.
    pub fn substitute(&self, images: &[Polynomial; NVARS]) -> Polynomial {
        // Cache powers of each image up to the maximum exponent used.
        let mut max_exp = [0u16; NVARS];
        for e in self.terms.keys() {
            for k in 0..NVARS {
                max_exp[k] = max_exp[k].max(e[k]);
            }
        }
        let mut pows: [Vec<Polynomial>; NVARS] = Default::default();
        for k in 0..NVARS {
            let mut v = Vec::with_capacity(max_exp[k] as usize + 1);
            v.push(Polynomial::one());
            for j in 1..=max_exp[k] as usize {
                let next = &v[j - 1] * &images[k];
                v.push(next);
            }
            pows[k] = v;
        }
        let mut out = Polynomial::zero();
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for k in 0..NVARS {
                if e[k] > 0 {
                    term = &term * &pows[k][e[k] as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Translation `a_i -> a_i + v_i` by an integer vector.
    pub fn shift(&self, v: &[i64; NVARS]) -> Polynomial {
        if v.iter().all(|&x| x == 0) {
            return self.clone();
        }
        let images = shift_images(v);
        self.substitute(&images)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[BigRational; NVARS]) -> BigRational {
        let mut pows: [Vec<BigRational>; NVARS] = Default::default();
        let mut max_exp = [0u16; NVARS];
        for e in self.terms.keys() {
            for k in 0..NVARS {
                max_exp[k] = max_exp[k].max(e[k]);
            }
        }
        for k in 0..NVARS {
            let mut v = Vec::with_capacity(max_exp[k] as usize + 1);
            v.push(BigRational::one());
            for j in 1..=max_exp[k] as usize {
                let next = &v[j - 1] * &point[k];
                v.push(next);
            }
            pows[k] = v;
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..NVARS {
                if e[k] > 0 {
                    t *= &pows[k][e[k] as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating evaluation; also returns the sum of term magnitudes so the
    /// caller can detect catastrophic cancellation.
    pub fn eval_complex_raw(&self, point: &[Complex64; NVARS]) -> (Complex64, f64) {
        let mut pows: [Vec<Complex64>; NVARS] = Default::default();
        let mut max_exp = [0u16; NVARS];
        for e in self.terms.keys() {
            for k in 0..NVARS {
                max_exp[k] = max_exp[k].max(e[k]);
            }
        }
        for k in 0..NVARS {
            let mut v = Vec::with_capacity(max_exp[k] as usize + 1);
            v.push(Complex64::new(1.0, 0.0));
            for j in 1..=max_exp[k] as usize {
                let next = v[j - 1] * point[k];
                v.push(next);
            }
            pows[k] = v;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mag = 0.0f64;
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for k in 0..NVARS {
                if e[k] > 0 {
                    t *= pows[k][e[k] as usize];
                }
            }
            acc += t;
            mag += t.norm();
        }
        (acc, mag)
    }

    /// Exact evaluation at a complex point with rational real/imaginary parts.
    pub fn eval_qcomplex(&self, point: &[QComplex; NVARS]) -> QComplex {
        let mut pows: [Vec<QComplex>; NVARS] = Default::default();
        let mut max_exp = [0u16; NVARS];
        for e in self.terms.keys() {
            for k in 0..NVARS {
                max_exp[k] = max_exp[k].max(e[k]);
            }
        }
        for k in 0..NVARS {
            let mut v = Vec::with_capacity(max_exp[k] as usize + 1);
            v.push(QComplex::one());
            for j in 1..=max_exp[k] as usize {
                let next = v[j - 1].mul(&point[k]);
                v.push(next);
            }
            pows[k] = v;
        }
        let mut acc = QComplex::zero();
        for (e, c) in &self.terms {
            let mut t = QComplex::real(c.clone());
            for k in 0..NVARS {
                if e[k] > 0 {
                    t = t.mul(&pows[k][e[k] as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Divides every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigRational) -> Polynomial {
        assert!(!c.is_zero(), "division of polynomial by zero scalar");
        Polynomial {
            terms: self.terms.iter().map(|(e, k)| (*e, k / c)).collect(),
        }
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Componentwise minimum exponent over all terms (the largest monomial
    /// dividing the polynomial). `None` for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Expo> {
        let mut it = self.terms.keys();
        let mut m = *it.next()?;
        for e in it {
            for k in 0..NVARS {
                m[k] = m[k].min(e[k]);
            }
        }
        Some(m)
    }

    /// Divides by the monomial `a^e`; every term must be divisible.
    pub fn div_monomial(&self, e: &Expo) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| {
                    let mut out = *t;
                    for k in 0..NVARS {
                        assert!(out[k] >= e[k], "monomial division not exact");
                        out[k] -= e[k];
                    }
                    (out, c.clone())
                })
                .collect(),
        }
    }

    /// Exact polynomial division: returns `q` with `self = q * d`, or `None`
    /// if `d` does not divide `self`. Lexicographic leading terms drive the
    /// reduction, so the loop terminates.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "exact division by zero polynomial");
        let (d_lead_e, d_lead_c) = d.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quo = Polynomial::zero();
        while !rem.is_zero() {
            let (r_e, r_c) = rem.leading().map(|(e, c)| (*e, c.clone())).unwrap();
            let mut q_e = [0u16; NVARS];
            for k in 0..NVARS {
                if r_e[k] < d_lead_e[k] {
                    return None;
                }
                q_e[k] = r_e[k] - d_lead_e[k];
            }
            let q_c = &r_c / d_lead_c;
            let t = Polynomial::monomial(q_c, q_e);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
            // Progress check: the leading term strictly decreases.
            if let Some((new_e, _)) = rem.leading() {
                if *new_e >= r_e {
                    return None;
                }
            }
        }
        Some(quo)
    }

    /// JSON form: array of `{"coeff": "num/den", "exp": [e0..e4]}` in
    /// lexicographic exponent order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    json!({
                        "coeff": format_rational(c),
                        "exp": e.iter().map(|&x| x as u64).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    pub fn to_latex(&self) -> String {
        self.render(&VAR_NAMES_LATEX, true)
    }

    fn render(&self, names: &[&str; NVARS], latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Leading term first reads better.
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut mono = String::new();
            for k in 0..NVARS {
                if e[k] == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push_str(if latex { " " } else { "*" });
                }
                mono.push_str(names[k]);
                if e[k] > 1 {
                    if latex {
                        mono.push_str(&format!("^{{{}}}", e[k]));
                    } else {
                        mono.push_str(&format!("^{}", e[k]));
                    }
                }
            }
            let abs = c.abs();
            let coeff_str = if abs.is_one() && !mono.is_empty() {
                String::new()
            } else {
                rational_string(&abs, latex)
            };
            if idx == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            match (coeff_str.is_empty(), mono.is_empty()) {
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&coeff_str),
                (false, false) => {
                    out.push_str(&coeff_str);
                    out.push_str(if latex { " " } else { "*" });
                    out.push_str(&mono);
                }
                (true, true) => out.push('1'),
            }
        }
        out
    }
}

fn rational_string(c: &BigRational, latex: bool) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else if latex {
        format!("\\tfrac{{{}}}{{{}}}", c.numer(), c.denom())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical `"num/den"` string with the sign on the numerator.
pub fn format_rational(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Substitution images for the shift `a_i -> a_i + v_i`.
pub fn shift_images(v: &[i64; NVARS]) -> [Polynomial; NVARS] {
    std::array::from_fn(|i| &Polynomial::var(i) + &Polynomial::from_int(v[i]))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&VAR_NAMES, false))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        // Multiply over integers with packed exponents; a single rational
        // rescale at the end avoids per-term gcd work in the hot loop.
        let (za, da) = crate::zpoly::ZPoly::from_polynomial(self);
        let (zb, db) = crate::zpoly::ZPoly::from_polynomial(rhs);
        za.mul(&zb)
            .to_polynomial(&BigRational::new(BigInt::one(), da * db))
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident, $t:ty) => {
        impl $imp for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add, Polynomial);
forward_owned_binop!(Sub, sub, Polynomial);
forward_owned_binop!(Mul, mul, Polynomial);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Named polynomials of the parameter space.
// ---------------------------------------------------------------------------

/// `phi1 = a0 + a1 + a2`, first elementary symmetric polynomial of the
/// numerator parameters.
pub fn phi1() -> Polynomial {
    &(&Polynomial::var(0) + &Polynomial::var(1)) + &Polynomial::var(2)
}

/// `phi2 = a0 a1 + a1 a2 + a2 a0`.
pub fn phi2() -> Polynomial {
    let (a0, a1, a2) = (Polynomial::var(0), Polynomial::var(1), Polynomial::var(2));
    &(&(&a0 * &a1) + &(&a1 * &a2)) + &(&a2 * &a0)
}

/// `phi3 = a0 a1 a2`.
pub fn phi3() -> Polynomial {
    &(&Polynomial::var(0) * &Polynomial::var(1)) * &Polynomial::var(2)
}

/// Saalschuetzian index `s = a3 + a4 - a0 - a1 - a2`.
pub fn saalschutz() -> Polynomial {
    &(&Polynomial::var(3) + &Polynomial::var(4)) - &phi1()
}

/// `psi = a3 a4 - phi2 - phi1 - 1`.
pub fn psi() -> Polynomial {
    let b1b2 = &Polynomial::var(3) * &Polynomial::var(4);
    &(&(&b1b2 - &phi2()) - &phi1()) - &Polynomial::one()
}

/// Symbolic Pochhammer symbol `(x, n)` for a polynomial argument and any
/// integer `n`: the rising product for `n >= 0`, and the reciprocal
/// `1 / ((x-1)(x-2)...(x-|n|))` forced by the gamma recursion for `n < 0`.
pub fn pochhammer_symbolic(x: &Polynomial, n: i64) -> RationalFunction {
    if n >= 0 {
        let mut acc = Polynomial::one();
        for k in 0..n {
            acc = &acc * &(x + &Polynomial::from_int(k));
        }
        RationalFunction::from_poly(acc)
    } else {
        let mut acc = Polynomial::one();
        for k in 1..=(-n) {
            acc = &acc * &(x - &Polynomial::from_int(k));
        }
        RationalFunction::from_poly(acc).inv()
    }
}

// ---------------------------------------------------------------------------
// Rational functions.
// ---------------------------------------------------------------------------

/// Quotient of two polynomials, an element of the field `Q(a)`.
///
/// Representatives are not reduced to lowest terms; construction only strips
/// the joint rational content and any common monomial factor, and fixes the
/// sign of the denominator's leading coefficient. Equality compares by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut rf = Self { num, den };
        rf.normalize();
        rf
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::new(p, Polynomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Polynomial::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Content and common-monomial cancellation; not a full reduction.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Polynomial::one();
            return;
        }
        if let (Some(mn), Some(md)) = (self.num.min_exponents(), self.den.min_exponents()) {
            let mut m = [0u16; NVARS];
            let mut any = false;
            for k in 0..NVARS {
                m[k] = mn[k].min(md[k]);
                any |= m[k] > 0;
            }
            if any {
                self.num = self.num.div_monomial(&m);
                self.den = self.den.div_monomial(&m);
            }
        }
        // num/den = (cn/cd) * primitive(num)/primitive(den); with cn/cd = n/d
        // in lowest terms, fold n into the numerator and d into the
        // denominator so both carry integer coefficients with no joint factor.
        let cn = self.num.content();
        let cd = self.den.content();
        let ratio = cn.clone() / cd.clone();
        let n = BigRational::from_integer(ratio.numer().clone());
        let d = BigRational::from_integer(ratio.denom().clone());
        self.num = self.num.div_scalar(&cn).mul_scalar(&n);
        self.den = self.den.div_scalar(&cd).mul_scalar(&d);
        if self
            .den
            .leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            self.num = -&self.num;
            self.den = -&self.den;
        }
    }

    /// True iff `self` and `other` represent the same element of `Q(a)`.
    pub fn rf_equal(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn substitute(&self, images: &[Polynomial; NVARS]) -> Self {
        Self::new(self.num.substitute(images), self.den.substitute(images))
    }

    pub fn shift(&self, v: &[i64; NVARS]) -> Self {
        Self::new(self.num.shift(v), self.den.shift(v))
    }

    /// Exact rational evaluation.
    pub fn eval_rational(&self, point: &[BigRational; NVARS]) -> Result<BigRational, EvalError> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return Err(EvalError::DenominatorVanishes);
        }
        Ok(self.num.eval_rational(point) / d)
    }

    /// Floating evaluation at a complex point. Falls back to exact complex
    /// rational arithmetic when cancellation eats the double-precision
    /// headroom, so results stay accurate for ill-conditioned coefficients.
    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Result<Complex64, EvalError> {
        let n = eval_poly_complex_adaptive(&self.num, point)?;
        let d = eval_poly_complex_adaptive(&self.den, point)?;
        if d.norm() == 0.0 {
            return Err(EvalError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    pub fn to_json(&self) -> Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }

    pub fn to_latex(&self) -> String {
        if self.den == Polynomial::one() {
            self.num.to_latex()
        } else {
            format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
        }
    }
}

fn eval_poly_complex_adaptive(
    p: &Polynomial,
    point: &[Complex64; NVARS],
) -> Result<Complex64, EvalError> {
    let (v, mag) = p.eval_complex_raw(point);
    if !v.is_finite() || (mag > 0.0 && v.norm() < 1e-6 * mag) {
        // Heavy cancellation: redo in exact rational complex arithmetic.
        let qpoint: [QComplex; NVARS] = std::array::from_fn(|k| QComplex::from_f64(point[k]));
        let exact = p.eval_qcomplex(&qpoint);
        return Ok(exact.to_complex64());
    }
    Ok(v)
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl QComplex {
    pub fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    /// Exact conversion: every finite f64 is a rational number.
    pub fn from_f64(z: Complex64) -> Self {
        Self {
            re: BigRational::from_float(z.re).expect("finite real part"),
            im: BigRational::from_float(z.im).expect("finite imaginary part"),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.rf_equal(other)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num - &rhs.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned_binop!(Add, add, RationalFunction);
forward_owned_binop!(Sub, sub, RationalFunction);
forward_owned_binop!(Mul, mul, RationalFunction);
forward_owned_binop!(Div, div, RationalFunction);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}
