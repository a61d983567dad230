//! Connection matrices `A(a;p)` along lattice paths and the three-term
//! relation coefficients they produce.
//!
//! For a shift vector `p` in `Z^5`, the connection matrix is the ordered
//! product of contiguous matrices along any lattice path from the origin to
//! `p`; compatibility makes the product path-independent. Its upper row
//! `(r1(a;p), r(a;p))` expresses `h(a+p)` in the basis `(h(a), h(a+1))`, and
//! solving the two-row linear system for distinct shifts `p`, `q` yields the
//! unique coefficients of `h(a) = u(a) h(a+p) + v(a) h(a+q)`.
//!
//! Products accumulate over a common denominator kept in factored form;
//! factors that divide every numerator entry are cancelled by exact division.
//! This bounds entry growth without a multivariate GCD.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::contiguous::{contiguous_matrix, Matrix2, RatMat2, StepSign};
use crate::zpoly::ZPoly;
use crate::polyrat::{
    pochhammer_symbolic, saalschutz, EvalError, Polynomial, RationalFunction, NVARS,
};

/// Errors from relation construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    /// The two shift vectors coincide; no three-term relation exists.
    #[error("degenerate shifts: p and q must be distinct")]
    DegenerateShifts,
}

/// Integer shift vector `(p0, p1, p2; p3, p4)` acting on the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftVector(pub [i64; NVARS]);

impl ShiftVector {
    pub const ZERO: ShiftVector = ShiftVector([0; NVARS]);

    /// The all-ones shift `(1,1,1;1,1)`.
    pub const ONES: ShiftVector = ShiftVector([1; NVARS]);

    /// The shift `(2,2,2;2,2)`.
    pub const TWOS: ShiftVector = ShiftVector([2; NVARS]);

    /// Standard basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        assert!(i < NVARS);
        let mut v = [0i64; NVARS];
        v[i] = 1;
        ShiftVector(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Saalschuetzian index `s(p) = p3 + p4 - p0 - p1 - p2`.
    pub fn saalschutz_index(&self) -> i64 {
        self.0[3] + self.0[4] - self.0[0] - self.0[1] - self.0[2]
    }

    /// Total step count of any lattice path to this vector.
    pub fn path_length(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn to_json(&self) -> Value {
        json!(self.0.to_vec())
    }
}

impl Add for ShiftVector {
    type Output = ShiftVector;
    fn add(self, rhs: ShiftVector) -> ShiftVector {
        ShiftVector(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for ShiftVector {
    type Output = ShiftVector;
    fn sub(self, rhs: ShiftVector) -> ShiftVector {
        ShiftVector(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl Neg for ShiftVector {
    type Output = ShiftVector;
    fn neg(self) -> ShiftVector {
        ShiftVector(std::array::from_fn(|k| -self.0[k]))
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{};{},{})",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4]
        )
    }
}

/// Canonical lattice path from the origin to `p`: all steps in coordinate 0
/// first (with the sign of `p0`), then coordinates 1 through 4.
pub fn lattice_path(p: &ShiftVector) -> Vec<(usize, StepSign)> {
    let mut path = Vec::with_capacity(p.path_length() as usize);
    for (i, &c) in p.0.iter().enumerate() {
        let sign = if c >= 0 { StepSign::Plus } else { StepSign::Minus };
        for _ in 0..c.unsigned_abs() {
            path.push((i, sign));
        }
    }
    path
}

// ---------------------------------------------------------------------------
// Factored-denominator matrix products.
// ---------------------------------------------------------------------------

/// 2x2 matrix of integer polynomials over a shared factored denominator:
/// the represented matrix is `scale * n / prod(den factors)`.
#[derive(Clone, Debug)]
struct FracMat2 {
    n: [[ZPoly; 2]; 2],
    scale: BigRational,
    den: BTreeMap<ZPoly, u32>,
}

impl FracMat2 {
    fn identity() -> Self {
        Self {
            n: [
                [ZPoly::one(), ZPoly::zero()],
                [ZPoly::zero(), ZPoly::one()],
            ],
            scale: BigRational::one(),
            den: BTreeMap::new(),
        }
    }

    /// Divides the represented matrix by `f`, storing a sign- and
    /// content-normalized factor.
    fn push_den_factor(&mut self, f: &Polynomial) {
        let (z, d) = ZPoly::from_polynomial(f);
        let mut c = z.content();
        assert!(!c.is_zero(), "zero denominator factor");
        let mut z = z.div_int(&c);
        if z.leading().map(|(_, l)| l.is_negative()).unwrap_or(false) {
            z = z.neg();
            c = -c;
        }
        // f = (c/d) * z, so 1/f contributes d/c to the scale.
        self.scale *= BigRational::new(d, c);
        if z == ZPoly::one() {
            return;
        }
        *self.den.entry(z).or_insert(0) += 1;
    }

    /// The contiguous matrix `A_i^sign(a + base)` over its common denominator,
    /// with the denominator kept as a list of linear factors.
    fn contiguous(i: usize, sign: StepSign, base: &[i64; NVARS]) -> Self {
        let s = saalschutz();
        let one = Polynomial::one();
        let var = Polynomial::var;
        let (n, factors): ([[Polynomial; 2]; 2], Vec<Polynomial>) = match (i < 3, sign) {
            (true, StepSign::Plus) => {
                let (j, k) = complement3(i);
                let s2 = &s - &Polynomial::from_int(2);
                let corner = &(&var(j) * &var(k))
                    - &(&(&(&var(i) - &var(3)) + &one) * &(&(&var(i) - &var(4)) + &one));
                (
                    [
                        [&var(i) * &s2, s2.clone()],
                        [crate::polyrat::phi3(), corner],
                    ],
                    vec![s2],
                )
            }
            (false, StepSign::Plus) => {
                let s1 = &s - &one;
                let quad = &(&var(i).pow(2) - &(&crate::polyrat::phi1() * &var(i)))
                    + &crate::polyrat::phi2();
                (
                    [
                        [quad, -&s1],
                        [-&crate::polyrat::phi3(), &var(i) * &s1],
                    ],
                    vec![&var(i) - &var(0), &var(i) - &var(1), &var(i) - &var(2)],
                )
            }
            (true, StepSign::Minus) => {
                let (j, k) = complement3(i);
                let s1 = &s - &one;
                let ajk = &var(j) * &var(k);
                let d34 = &(&var(i) - &var(3)) * &(&var(i) - &var(4));
                let ai1 = &var(i) - &one;
                (
                    [
                        [&d34 - &ajk, s1.clone()],
                        [&ajk * &ai1, -&(&s1 * &ai1)],
                    ],
                    vec![ai1, &var(i) - &var(3), &var(i) - &var(4)],
                )
            }
            (false, StepSign::Minus) => {
                let s2 = &s - &Polynomial::from_int(2);
                let ai1 = &var(i) - &one;
                let corner = &(&ai1.pow(2) - &(&crate::polyrat::phi1() * &ai1))
                    + &crate::polyrat::phi2();
                (
                    [
                        [&ai1 * &s2, s2.clone()],
                        [crate::polyrat::phi3(), corner],
                    ],
                    vec![s2],
                )
            }
        };
        let mut out = Self {
            n: [
                [ZPoly::zero(), ZPoly::zero()],
                [ZPoly::zero(), ZPoly::zero()],
            ],
            scale: BigRational::one(),
            den: BTreeMap::new(),
        };
        let mut den_lcm = num_bigint::BigInt::from(1);
        let zn: [[(ZPoly, num_bigint::BigInt); 2]; 2] = std::array::from_fn(|r| {
            std::array::from_fn(|c| ZPoly::from_polynomial(&n[r][c].shift(base)))
        });
        for row in &zn {
            for (_, d) in row {
                den_lcm = num_integer::Integer::lcm(&den_lcm, d);
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                let (z, d) = &zn[r][c];
                out.n[r][c] = z.mul_int(&(&den_lcm / d));
            }
        }
        out.scale = BigRational::new(1.into(), den_lcm);
        for f in factors {
            out.push_den_factor(&f.shift(base));
        }
        out
    }

    /// Left-multiplies by `lhs`: `self <- lhs * self`, then cancels.
    fn left_mul(&mut self, lhs: &FracMat2) {
        let a = &lhs.n;
        let b = &self.n;
        let mut n: [[ZPoly; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                n[i][j] = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
            }
        }
        self.n = n;
        self.scale *= &lhs.scale;
        for (f, m) in &lhs.den {
            *self.den.entry(f.clone()).or_insert(0) += m;
        }
        self.cancel();
    }

    /// Divides out denominator factors and integer content common to all
    /// entries.
    fn cancel(&mut self) {
        let factors: Vec<ZPoly> = self.den.keys().cloned().collect();
        for f in factors {
            let witness = f.integer_zero_witness();
            loop {
                let mult = *self.den.get(&f).unwrap_or(&0);
                if mult == 0 {
                    break;
                }
                // Necessary condition first: every entry must vanish at a
                // point where the factor does. This rejects non-divisible
                // factors without running the full division.
                if let Some(w) = &witness {
                    let vanish = self
                        .n
                        .iter()
                        .flatten()
                        .all(|e| e.is_zero() || e.eval_bigint(w).is_zero());
                    if !vanish {
                        break;
                    }
                }
                let mut quotients: [[ZPoly; 2]; 2] = Default::default();
                let mut ok = true;
                'outer: for i in 0..2 {
                    for j in 0..2 {
                        if self.n[i][j].is_zero() {
                            quotients[i][j] = ZPoly::zero();
                            continue;
                        }
                        match self.n[i][j].div_exact(&f) {
                            Some(q) => quotients[i][j] = q,
                            None => {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                }
                if !ok {
                    break;
                }
                self.n = quotients;
                if mult == 1 {
                    self.den.remove(&f);
                } else {
                    self.den.insert(f.clone(), mult - 1);
                }
            }
        }
        // Joint integer content of the numerators folds into the scale.
        let mut content = num_bigint::BigInt::from(0);
        for row in &self.n {
            for entry in row {
                if !entry.is_zero() {
                    content = num_integer::Integer::gcd(&content, &entry.content());
                    if content == num_bigint::BigInt::from(1) {
                        break;
                    }
                }
            }
        }
        if content > num_bigint::BigInt::from(1) {
            for row in &mut self.n {
                for entry in row {
                    if !entry.is_zero() {
                        *entry = entry.div_int(&content);
                    }
                }
            }
            self.scale *= BigRational::from_integer(content);
        }
    }

    fn expanded_den(&self) -> Polynomial {
        let mut out = ZPoly::one();
        for (f, m) in &self.den {
            for _ in 0..*m {
                out = out.mul(f);
            }
        }
        out.to_polynomial(&BigRational::one())
    }

    fn upper_row(&self) -> (RationalFunction, RationalFunction) {
        let den = self.expanded_den();
        (
            RationalFunction::new(self.n[0][0].to_polynomial(&self.scale), den.clone()),
            RationalFunction::new(self.n[0][1].to_polynomial(&self.scale), den),
        )
    }

    fn to_matrix2(&self) -> Matrix2 {
        let den = self.expanded_den();
        Matrix2::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                RationalFunction::new(self.n[i][j].to_polynomial(&self.scale), den.clone())
            })
        }))
    }
}

fn complement3(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!("complement only defined for numerator indices"),
    }
}

// ---------------------------------------------------------------------------
// Connection matrices.
// ---------------------------------------------------------------------------

fn frac_product(path: &[(usize, StepSign)], base: &ShiftVector) -> FracMat2 {
    let mut acc = FracMat2::identity();
    let mut pos = base.0;
    for &(i, sign) in path {
        let factor = FracMat2::contiguous(i, sign, &pos);
        acc.left_mul(&factor);
        pos[i] += sign.value();
    }
    acc
}

/// Connection matrix along an explicit path, based at `a + base`.
pub fn connection_matrix_along(path: &[(usize, StepSign)], base: &ShiftVector) -> Matrix2 {
    frac_product(path, base).to_matrix2()
}

/// Connection matrix `A(a + base; p)` along the canonical path.
pub fn connection_matrix_based(base: &ShiftVector, p: &ShiftVector) -> Matrix2 {
    connection_matrix_along(&lattice_path(p), base)
}

/// Connection matrix `A(a; p)` along the canonical path.
pub fn connection_matrix(p: &ShiftVector) -> Matrix2 {
    connection_matrix_based(&ShiftVector::ZERO, p)
}

/// Exact evaluation of `A(point + base; p)` as a rational 2x2 matrix,
/// multiplying evaluated factors (no symbolic products).
pub fn connection_matrix_eval(
    p: &ShiftVector,
    base: &ShiftVector,
    point: &[BigRational; NVARS],
) -> Result<RatMat2, EvalError> {
    let mut acc = RatMat2::identity();
    let mut pos: [BigRational; NVARS] =
        std::array::from_fn(|k| &point[k] + BigRational::from_integer(base.0[k].into()));
    for (i, sign) in lattice_path(p) {
        let factor = contiguous_matrix(i, sign).mat.eval_rational(&pos)?;
        acc = factor.mul(&acc);
        pos[i] += BigRational::from_integer(sign.value().into());
    }
    Ok(acc)
}

/// Closed-form determinant `delta(a;p)` of the connection matrix:
/// `(-1)^(p0+p1+p2) (s(a)-1, s(p)) prod_i (a_i, p_i) / prod_{i<3,j>2} (a_j - a_i, p_j - p_i)`.
pub fn connection_det_formula(p: &ShiftVector) -> RationalFunction {
    let mut out = if (p.0[0] + p.0[1] + p.0[2]).rem_euclid(2) == 1 {
        -RationalFunction::one()
    } else {
        RationalFunction::one()
    };
    let s_minus_1 = &saalschutz() - &Polynomial::one();
    out = &out * &pochhammer_symbolic(&s_minus_1, p.saalschutz_index());
    for i in 0..3 {
        out = &out * &pochhammer_symbolic(&Polynomial::var(i), p.0[i]);
    }
    for i in 0..3 {
        for j in 3..5 {
            let diff = &Polynomial::var(j) - &Polynomial::var(i);
            out = &out / &pochhammer_symbolic(&diff, p.0[j] - p.0[i]);
        }
    }
    out
}

/// Upper row `(r1(a;p), r(a;p))` of the connection matrix, so that
/// `h(a+p) = r1(a;p) h(a) + r(a;p) h(a+1)`.
pub fn upper_row(p: &ShiftVector) -> (RationalFunction, RationalFunction) {
    upper_row_based(&ShiftVector::ZERO, p)
}

fn upper_row_based(base: &ShiftVector, p: &ShiftVector) -> (RationalFunction, RationalFunction) {
    frac_product(&lattice_path(p), base).upper_row()
}

/// A three-term relation `h(a) = u(a) h(a+p) + v(a) h(a+q)`.
#[derive(Clone, Debug)]
pub struct ThreeTermRelation {
    pub p: ShiftVector,
    pub q: ShiftVector,
    pub u: RationalFunction,
    pub v: RationalFunction,
}

impl ThreeTermRelation {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.to_json(),
            "q": self.q.to_json(),
            "u": self.u.to_json(),
            "v": self.v.to_json(),
        })
    }

    pub fn to_latex(&self) -> String {
        format!(
            "h(a) = {} \\, h(a + {}) + {} \\, h(a + {})",
            self.u.to_latex(),
            self.p,
            self.v.to_latex(),
            self.q
        )
    }
}

impl fmt::Display for ThreeTermRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h(a) = u(a) h(a + {}) + v(a) h(a + {})", self.p, self.q)?;
        writeln!(f, "u(a) = {}", self.u)?;
        write!(f, "v(a) = {}", self.v)
    }
}

/// Determinant of the two-relation linear system,
/// `Delta(a;p,q) = r1(a;p) r(a;q) - r(a;p) r1(a;q)`.
pub fn relation_determinant(p: &ShiftVector, q: &ShiftVector) -> RationalFunction {
    let (r1p, rp) = upper_row(p);
    let (r1q, rq) = upper_row(q);
    &(&r1p * &rq) - &(&rp * &r1q)
}

/// The unique coefficients of `h(a) = u(a) h(a+p) + v(a) h(a+q)` for distinct
/// shifts, by solving the upper-row linear system:
/// `u = r(a;q)/Delta`, `v = -r(a;p)/Delta`.
///
/// Working over the shared factored denominators of the two upper rows keeps
/// the common factors out of the result: with rows `s_p N_p / D_p` and
/// `s_q N_q / D_q`, the determinant is `s_p s_q C / (D_p D_q)` with
/// `C = N1_p N_q - N_p N1_q`, so `u = N_q D_p / (s_p C)` and
/// `v = -N_p D_q / (s_q C)`; factors of `D_p` resp. `D_q` that divide `C`
/// are cancelled before expanding.
pub fn three_term_coefficients(
    p: &ShiftVector,
    q: &ShiftVector,
) -> Result<ThreeTermRelation, RelationError> {
    if p == q {
        return Err(RelationError::DegenerateShifts);
    }
    let fp = frac_product(&lattice_path(p), &ShiftVector::ZERO);
    let fq = frac_product(&lattice_path(q), &ShiftVector::ZERO);
    let c = fp.n[0][0]
        .mul(&fq.n[0][1])
        .add(&fp.n[0][1].mul(&fq.n[0][0]).neg());
    assert!(
        !c.is_zero(),
        "relation determinant vanished for distinct shifts {p} and {q}"
    );
    let u = quotient_over_det(&fq.n[0][1], &fp.den, &fp.scale, &c);
    let v = quotient_over_det(&fp.n[0][1], &fq.den, &fq.scale, &c);
    Ok(ThreeTermRelation {
        p: *p,
        q: *q,
        u,
        v: -v,
    })
}

/// Builds `numerator * prod(factors) / (scale * c)`, dividing factors into
/// `c` where possible instead of multiplying them out.
fn quotient_over_det(
    numerator: &ZPoly,
    factors: &BTreeMap<ZPoly, u32>,
    scale: &BigRational,
    c: &ZPoly,
) -> RationalFunction {
    let mut den = c.clone();
    let mut num = numerator.clone();
    for (f, mult) in factors {
        let witness = f.integer_zero_witness();
        let mut remaining = *mult;
        while remaining > 0 {
            let vanishes = match &witness {
                Some(w) => den.eval_bigint(w).is_zero(),
                None => true,
            };
            if !vanishes {
                break;
            }
            match den.div_exact(f) {
                Some(q) => {
                    den = q;
                    remaining -= 1;
                }
                None => break,
            }
        }
        for _ in 0..remaining {
            num = num.mul(f);
        }
    }
    let inv_scale = BigRational::new(scale.denom().clone(), scale.numer().clone());
    RationalFunction::new(num.to_polynomial(&inv_scale), den.to_polynomial(&BigRational::one()))
}

/// Verifies the chain rule `A(a;q) = A(a+p; q-p) A(a;p)` and the determinant
/// link `Delta(a;p,q) = delta(a;p) r(a+p; q-p)` symbolically.
pub fn verify_chain_rule(p: &ShiftVector, q: &ShiftVector) -> bool {
    let a_q = connection_matrix(q);
    let a_p = connection_matrix(p);
    let bridge = connection_matrix_based(p, &(*q - *p));
    if !a_q.rf_equal(&bridge.mul(&a_p)) {
        return false;
    }
    let delta_pq = relation_determinant(p, q);
    let det_p = connection_det_formula(p);
    let (_, r_bridge) = upper_row_based(p, &(*q - *p));
    delta_pq.rf_equal(&(&det_p * &r_bridge))
}
