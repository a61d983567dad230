//! Contiguous matrices of the unit-argument `3F2` series.
//!
//! With `h(a) = (h(a), h(a+1))^t` (where `1 = (1,1,1;1,1)`), a single-step
//! parameter shift acts as `h(a + e*e_i) = A_i^e(a) h(a)`. The four symbolic
//! families `A_i^+`, `A_i^-` (numerator direction `i = 0,1,2` and denominator
//! direction `i = 3,4`) are built here exactly, together with their
//! closed-form determinants and the compatibility conditions
//! `A_i(a + e_j) A_j(a) = A_j(a + e_i) A_i(a)` that make lattice-path
//! products path-independent.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::polyrat::{
    phi1, phi2, phi3, saalschutz, EvalError, Polynomial, RationalFunction, NVARS,
};

/// Direction of a single contiguous step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepSign {
    Plus,
    Minus,
}

impl StepSign {
    pub fn value(self) -> i64 {
        match self {
            StepSign::Plus => 1,
            StepSign::Minus => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            StepSign::Plus => StepSign::Minus,
            StepSign::Minus => StepSign::Plus,
        }
    }
}

impl fmt::Display for StepSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepSign::Plus => "+",
            StepSign::Minus => "-",
        })
    }
}

/// 2x2 matrix over the rational-function field `Q(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix2 {
    pub e: [[RationalFunction; 2]; 2],
}

impl Matrix2 {
    pub fn new(e: [[RationalFunction; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn identity() -> Self {
        Self::new([
            [RationalFunction::one(), RationalFunction::zero()],
            [RationalFunction::zero(), RationalFunction::one()],
        ])
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        let mut out = Self::new([
            [RationalFunction::zero(), RationalFunction::zero()],
            [RationalFunction::zero(), RationalFunction::zero()],
        ]);
        for i in 0..2 {
            for j in 0..2 {
                let t = &(&self.e[i][0] * &rhs.e[0][j]) + &(&self.e[i][1] * &rhs.e[1][j]);
                out.e[i][j] = t;
            }
        }
        out
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    /// Inverse over `Q(a)`; panics if the determinant vanishes identically.
    pub fn inverse(&self) -> Matrix2 {
        let d = self.det();
        assert!(!d.is_zero(), "inverting a singular matrix over Q(a)");
        Matrix2::new([
            [&self.e[1][1] / &d, &(-&self.e[0][1]) / &d],
            [&(-&self.e[1][0]) / &d, &self.e[0][0] / &d],
        ])
    }

    /// Entrywise translation `a -> a + v`.
    pub fn shift(&self, v: &[i64; NVARS]) -> Matrix2 {
        self.map(|x| x.shift(v))
    }

    pub fn substitute(&self, images: &[Polynomial; NVARS]) -> Matrix2 {
        self.map(|x| x.substitute(images))
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Matrix2 {
        Matrix2::new([
            [f(&self.e[0][0]), f(&self.e[0][1])],
            [f(&self.e[1][0]), f(&self.e[1][1])],
        ])
    }

    /// True iff the matrices agree entrywise as elements of `Q(a)`.
    pub fn rf_equal(&self, rhs: &Matrix2) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.e[i][j].rf_equal(&rhs.e[i][j])))
    }

    pub fn eval_rational(&self, point: &[BigRational; NVARS]) -> Result<RatMat2, EvalError> {
        Ok(RatMat2::new([
            [
                self.e[0][0].eval_rational(point)?,
                self.e[0][1].eval_rational(point)?,
            ],
            [
                self.e[1][0].eval_rational(point)?,
                self.e[1][1].eval_rational(point)?,
            ],
        ]))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": [
                [self.e[0][0].to_json(), self.e[0][1].to_json()],
                [self.e[1][0].to_json(), self.e[1][1].to_json()],
            ]
        })
    }

    pub fn to_latex(&self) -> String {
        format!(
            "\\begin{{pmatrix}} {} & {} \\\\ {} & {} \\end{{pmatrix}}",
            self.e[0][0].to_latex(),
            self.e[0][1].to_latex(),
            self.e[1][0].to_latex(),
            self.e[1][1].to_latex()
        )
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[ {} , {} ]", self.e[0][0], self.e[0][1])?;
        write!(f, "[ {} , {} ]", self.e[1][0], self.e[1][1])
    }
}

/// 2x2 matrix over the exact rationals, used for specializations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat2 {
    pub e: [[BigRational; 2]; 2],
}

impl RatMat2 {
    pub fn new(e: [[BigRational; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn from_i64(e: [[(i64, i64); 2]; 2]) -> Self {
        Self::new([
            [
                BigRational::new(e[0][0].0.into(), e[0][0].1.into()),
                BigRational::new(e[0][1].0.into(), e[0][1].1.into()),
            ],
            [
                BigRational::new(e[1][0].0.into(), e[1][0].1.into()),
                BigRational::new(e[1][1].0.into(), e[1][1].1.into()),
            ],
        ])
    }

    pub fn identity() -> Self {
        Self::new([
            [BigRational::one(), BigRational::zero()],
            [BigRational::zero(), BigRational::one()],
        ])
    }

    pub fn mul(&self, rhs: &RatMat2) -> RatMat2 {
        let mut out = Self::identity();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = &(&self.e[i][0] * &rhs.e[0][j]) + &(&self.e[i][1] * &rhs.e[1][j]);
            }
        }
        out
    }

    pub fn det(&self) -> BigRational {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn inverse(&self) -> Option<RatMat2> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        Some(RatMat2::new([
            [&self.e[1][1] / &d, -&self.e[0][1] / &d],
            [-&self.e[1][0] / &d, &self.e[0][0] / &d],
        ]))
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow(&self, n: i64) -> Option<RatMat2> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut out = RatMat2::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.e[0][1].is_zero()
    }

    pub fn max_abs(&self) -> BigRational {
        let mut m = BigRational::zero();
        for row in &self.e {
            for x in row {
                let a = if x < &BigRational::zero() { -x } else { x.clone() };
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    pub fn sub(&self, rhs: &RatMat2) -> RatMat2 {
        RatMat2::new([
            [&self.e[0][0] - &rhs.e[0][0], &self.e[0][1] - &rhs.e[0][1]],
            [&self.e[1][0] - &rhs.e[1][0], &self.e[1][1] - &rhs.e[1][1]],
        ])
    }
}

/// A contiguous matrix `A_i^sign(a)` together with its direction and sign.
#[derive(Clone, Debug)]
pub struct ContiguousMatrix {
    pub mat: Matrix2,
    pub direction: usize,
    pub sign: StepSign,
}

fn var_rf(i: usize) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::var(i))
}

fn int_poly(n: i64) -> Polynomial {
    Polynomial::from_int(n)
}

/// Indices `{j, k}` complementary to `i` inside `{0, 1, 2}`.
fn complement(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!("complement only defined for numerator indices"),
    }
}

fn build_contiguous(i: usize, sign: StepSign) -> Matrix2 {
    assert!(i < NVARS, "direction index out of range");
    let s = saalschutz();
    match (i < 3, sign) {
        (true, StepSign::Plus) => {
            // [[a_i, 1], [phi3/(s-2), (a_j a_k - (a_i-a3+1)(a_i-a4+1))/(s-2)]]
            let (j, k) = complement(i);
            let ai = Polynomial::var(i);
            let den = &s - &int_poly(2);
            let corner = &(&Polynomial::var(j) * &Polynomial::var(k))
                - &(&(&(&ai - &Polynomial::var(3)) + &int_poly(1))
                    * &(&(&ai - &Polynomial::var(4)) + &int_poly(1)));
            Matrix2::new([
                [var_rf(i), RationalFunction::one()],
                [
                    RationalFunction::new(phi3(), den.clone()),
                    RationalFunction::new(corner, den),
                ],
            ])
        }
        (false, StepSign::Plus) => {
            // Denominator-direction raise: common denominator
            // (a_i - a0)(a_i - a1)(a_i - a2).
            let ai = Polynomial::var(i);
            let den = &(&(&ai - &Polynomial::var(0)) * &(&ai - &Polynomial::var(1)))
                * &(&ai - &Polynomial::var(2));
            let s1 = &s - &int_poly(1);
            let quad = &(&ai.pow(2) - &(&phi1() * &ai)) + &phi2();
            Matrix2::new([
                [
                    RationalFunction::new(quad, den.clone()),
                    RationalFunction::new(-&s1, den.clone()),
                ],
                [
                    RationalFunction::new(-&phi3(), den.clone()),
                    RationalFunction::new(&ai * &s1, den),
                ],
            ])
        }
        (true, StepSign::Minus) => {
            // Numerator-direction lower.
            let (j, k) = complement(i);
            let ai = Polynomial::var(i);
            let ajk = &Polynomial::var(j) * &Polynomial::var(k);
            let d34 = &(&ai - &Polynomial::var(3)) * &(&ai - &Polynomial::var(4));
            let row1_den = &(&ai - &int_poly(1)) * &d34;
            let s1 = &s - &int_poly(1);
            Matrix2::new([
                [
                    RationalFunction::new(&d34 - &ajk, row1_den.clone()),
                    RationalFunction::new(s1.clone(), row1_den),
                ],
                [
                    RationalFunction::new(ajk, d34.clone()),
                    RationalFunction::new(-&s1, d34),
                ],
            ])
        }
        (false, StepSign::Minus) => {
            // [[a_i - 1, 1], [phi3/(s-2), ((a_i-1)^2 - phi1 (a_i-1) + phi2)/(s-2)]]
            let ai1 = &Polynomial::var(i) - &int_poly(1);
            let den = &s - &int_poly(2);
            let corner = &(&ai1.pow(2) - &(&phi1() * &ai1)) + &phi2();
            Matrix2::new([
                [RationalFunction::from_poly(ai1), RationalFunction::one()],
                [
                    RationalFunction::new(phi3(), den.clone()),
                    RationalFunction::new(corner, den),
                ],
            ])
        }
    }
}

fn table() -> &'static [[ContiguousMatrix; 2]; NVARS] {
    static TABLE: OnceLock<[[ContiguousMatrix; 2]; NVARS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|i| {
            [
                ContiguousMatrix {
                    mat: build_contiguous(i, StepSign::Plus),
                    direction: i,
                    sign: StepSign::Plus,
                },
                ContiguousMatrix {
                    mat: build_contiguous(i, StepSign::Minus),
                    direction: i,
                    sign: StepSign::Minus,
                },
            ]
        })
    })
}

/// The symbolic contiguous matrix `A_i^sign(a)`.
pub fn contiguous_matrix(i: usize, sign: StepSign) -> &'static ContiguousMatrix {
    let col = match sign {
        StepSign::Plus => 0,
        StepSign::Minus => 1,
    };
    &table()[i][col]
}

/// Closed-form determinant of `A_i^sign(a)`.
pub fn contiguous_det(i: usize, sign: StepSign) -> RationalFunction {
    assert!(i < NVARS, "direction index out of range");
    let s = saalschutz();
    let one = int_poly(1);
    match (i < 3, sign) {
        (true, StepSign::Plus) => {
            // -a_i (a_i - a3 + 1)(a_i - a4 + 1) / (s - 2)
            let ai = Polynomial::var(i);
            let num = &(&ai * &(&(&ai - &Polynomial::var(3)) + &one))
                * &(&(&ai - &Polynomial::var(4)) + &one);
            RationalFunction::new(-&num, &s - &int_poly(2))
        }
        (false, StepSign::Plus) => {
            // (s - 1) / ((a_i - a0)(a_i - a1)(a_i - a2))
            let ai = Polynomial::var(i);
            let den = &(&(&ai - &Polynomial::var(0)) * &(&ai - &Polynomial::var(1)))
                * &(&ai - &Polynomial::var(2));
            RationalFunction::new(&s - &one, den)
        }
        (true, StepSign::Minus) => {
            // -(s - 1) / ((a_i - 1)(a_i - a3)(a_i - a4))
            let ai = Polynomial::var(i);
            let den =
                &(&(&ai - &one) * &(&ai - &Polynomial::var(3))) * &(&ai - &Polynomial::var(4));
            RationalFunction::new(-&(&s - &one), den)
        }
        (false, StepSign::Minus) => {
            // (a_i - a0 - 1)(a_i - a1 - 1)(a_i - a2 - 1) / (s - 2)
            let ai = Polynomial::var(i);
            let num = &(&(&(&ai - &Polynomial::var(0)) - &one)
                * &(&(&ai - &Polynomial::var(1)) - &one))
                * &(&(&ai - &Polynomial::var(2)) - &one);
            RationalFunction::new(num, &s - &int_poly(2))
        }
    }
}

/// Checks `A_i^{ei}(a + ej e_j) A_j^{ej}(a) = A_j^{ej}(a + ei e_i) A_i^{ei}(a)`
/// exactly over `Q(a)`.
pub fn check_compatibility(i: usize, j: usize, ei: StepSign, ej: StepSign) -> bool {
    let mut step_i = [0i64; NVARS];
    step_i[i] = ei.value();
    let mut step_j = [0i64; NVARS];
    step_j[j] = ej.value();
    let ai = &contiguous_matrix(i, ei).mat;
    let aj = &contiguous_matrix(j, ej).mat;
    let lhs = ai.shift(&step_j).mul(aj);
    let rhs = aj.shift(&step_i).mul(ai);
    lhs.rf_equal(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::psi;

    const SIGNS: [StepSign; 2] = [StepSign::Plus, StepSign::Minus];

    #[test]
    fn raise_matrix_matches_printed_form() {
        // (0, +) -> [[a0, 1], [phi3/(s-2), (a1 a2 - (a0-a3+1)(a0-a4+1))/(s-2)]]
        let m = &contiguous_matrix(0, StepSign::Plus).mat;
        assert!(m.e[0][0].rf_equal(&var_rf(0)));
        assert!(m.e[0][1].rf_equal(&RationalFunction::one()));
        let den = &saalschutz() - &int_poly(2);
        assert!(m.e[1][0].rf_equal(&RationalFunction::new(phi3(), den.clone())));
        let a0 = Polynomial::var(0);
        let corner = &(&Polynomial::var(1) * &Polynomial::var(2))
            - &(&(&(&a0 - &Polynomial::var(3)) + &int_poly(1))
                * &(&(&a0 - &Polynomial::var(4)) + &int_poly(1)));
        assert!(m.e[1][1].rf_equal(&RationalFunction::new(corner, den)));
    }

    #[test]
    fn lower_matrix_matches_printed_form() {
        // (3, -) -> [[a3 - 1, 1], [phi3/(s-2), ((a3-1)^2 - phi1(a3-1) + phi2)/(s-2)]]
        let m = &contiguous_matrix(3, StepSign::Minus).mat;
        let a3m1 = &Polynomial::var(3) - &int_poly(1);
        assert!(m.e[0][0].rf_equal(&RationalFunction::from_poly(a3m1.clone())));
        assert!(m.e[0][1].rf_equal(&RationalFunction::one()));
        let den = &saalschutz() - &int_poly(2);
        let corner = &(&a3m1.pow(2) - &(&phi1() * &a3m1)) + &phi2();
        assert!(m.e[1][1].rf_equal(&RationalFunction::new(corner, den)));
    }

    #[test]
    fn determinants_match_closed_forms() {
        for i in 0..NVARS {
            for sign in SIGNS {
                let from_entries = contiguous_matrix(i, sign).mat.det();
                let closed = contiguous_det(i, sign);
                assert!(
                    from_entries.rf_equal(&closed),
                    "determinant mismatch at ({i}, {sign})"
                );
            }
        }
    }

    #[test]
    fn determinant_examples() {
        // (0,+): -a0 (a0-a3+1)(a0-a4+1)/(s-2)
        let d = contiguous_det(0, StepSign::Plus);
        let a0 = Polynomial::var(0);
        let num = &(&a0 * &(&(&a0 - &Polynomial::var(3)) + &int_poly(1)))
            * &(&(&a0 - &Polynomial::var(4)) + &int_poly(1));
        let expect = RationalFunction::new(-&num, &saalschutz() - &int_poly(2));
        assert!(d.rf_equal(&expect));

        // (3,+): (s-1)/((a3-a0)(a3-a1)(a3-a2))
        let d = contiguous_det(3, StepSign::Plus);
        let a3 = Polynomial::var(3);
        let den = &(&(&a3 - &Polynomial::var(0)) * &(&a3 - &Polynomial::var(1)))
            * &(&a3 - &Polynomial::var(2));
        let expect = RationalFunction::new(&saalschutz() - &int_poly(1), den);
        assert!(d.rf_equal(&expect));

        // (4,-): (a4-a0-1)(a4-a1-1)(a4-a2-1)/(s-2)
        let d = contiguous_det(4, StepSign::Minus);
        let a4 = Polynomial::var(4);
        let num = &(&(&(&a4 - &Polynomial::var(0)) - &int_poly(1))
            * &(&(&a4 - &Polynomial::var(1)) - &int_poly(1)))
            * &(&(&a4 - &Polynomial::var(2)) - &int_poly(1));
        let expect = RationalFunction::new(num, &saalschutz() - &int_poly(2));
        assert!(d.rf_equal(&expect));
    }

    #[test]
    fn inverse_relation_all_directions() {
        // A_i^e(a) = A_i^{-e}(a + e e_i)^{-1}, checked as a product with the
        // identity.
        for i in 0..NVARS {
            for sign in SIGNS {
                let mut step = [0i64; NVARS];
                step[i] = sign.value();
                let forward = &contiguous_matrix(i, sign).mat;
                let backward = contiguous_matrix(i, sign.opposite()).mat.shift(&step);
                let product = backward.mul(forward);
                assert!(
                    product.rf_equal(&Matrix2::identity()),
                    "inverse relation failed at ({i}, {sign})"
                );
            }
        }
    }

    #[test]
    fn compatibility_mixed_pair() {
        assert!(check_compatibility(0, 3, StepSign::Plus, StepSign::Plus));
    }

    #[test]
    fn compatibility_same_index() {
        for ei in SIGNS {
            for ej in SIGNS {
                assert!(check_compatibility(1, 1, ei, ej));
            }
        }
    }

    #[test]
    fn raise_then_lower_is_identity() {
        let mut step = [0i64; NVARS];
        step[0] = 1;
        let product = contiguous_matrix(0, StepSign::Minus)
            .mat
            .shift(&step)
            .mul(&contiguous_matrix(0, StepSign::Plus).mat);
        assert!(product.rf_equal(&Matrix2::identity()));
    }

    #[test]
    fn psi_matches_definition() {
        let b1b2 = &Polynomial::var(3) * &Polynomial::var(4);
        let expect = &(&(&b1b2 - &phi2()) - &phi1()) - &int_poly(1);
        assert_eq!(psi(), expect);
    }
}
