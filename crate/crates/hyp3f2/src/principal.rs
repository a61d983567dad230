//! Principal parts of contiguous matrices.
//!
//! Scaling the parameters by `t` and conjugating by `D(t) = diag(1, t)`
//! turns each contiguous matrix into a `t`-independent leading term plus an
//! `O(1/t)` tail: `t^{d_i e} D(t)^{-1} A_i^e(t a) D(t) = B_i(a)^e + O(1/t)`
//! with `d_i = -1` for numerator directions and `+1` for denominator
//! directions. The leading matrices `B_i(a)` commute, so the principal part
//! of a whole connection matrix is the commuting power product
//! `B(a;p) = B_0^{p0} ... B_4^{p4}`. This module builds the `B_i` exactly,
//! evaluates their products at good rational points, and checks the Laurent
//! decay in exact rational arithmetic at finite `t`.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::connection::{connection_matrix_eval, ShiftVector};
use crate::contiguous::{Matrix2, RatMat2};
use crate::polyrat::{phi1, phi2, phi3, saalschutz, Polynomial, RationalFunction, NVARS};

/// Errors from principal-part computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrincipalError {
    /// The parameter point violates the goodness condition
    /// `a0 a1 a2 s(a) prod (b_i - a_j) != 0`, or a denominator vanished
    /// during evaluation.
    #[error("parameter specialization is singular for principal parts")]
    SingularSpecialization,
    /// Hat-matrix products are only defined for `p` with `p0, p1, p2 >= 0`.
    #[error("hat principal parts require non-negative numerator shifts")]
    ShiftOutsideCone,
}

/// A principal-part matrix `B_i(a)` with its direction index.
#[derive(Clone, Debug)]
pub struct PrincipalMatrix {
    pub mat: Matrix2,
    pub index: usize,
}

fn complement3(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => unreachable!(),
    }
}

fn build_principal(i: usize) -> Matrix2 {
    let s = saalschutz();
    let var = Polynomial::var;
    if i < 3 {
        let (j, k) = complement3(i);
        let corner = &(&var(j) * &var(k)) - &(&(&var(i) - &var(3)) * &(&var(i) - &var(4)));
        Matrix2::new([
            [
                RationalFunction::from_poly(var(i)),
                RationalFunction::one(),
            ],
            [
                RationalFunction::new(phi3(), s.clone()),
                RationalFunction::new(corner, s),
            ],
        ])
    } else {
        let den = &(&(&var(i) - &var(0)) * &(&var(i) - &var(1))) * &(&var(i) - &var(2));
        let quad = &(&var(i).pow(2) - &(&phi1() * &var(i))) + &phi2();
        Matrix2::new([
            [
                RationalFunction::new(quad, den.clone()),
                RationalFunction::new(-&s, den.clone()),
            ],
            [
                RationalFunction::new(-&phi3(), den.clone()),
                RationalFunction::new(&var(i) * &s, den),
            ],
        ])
    }
}

fn table() -> &'static [PrincipalMatrix; NVARS] {
    static TABLE: OnceLock<[PrincipalMatrix; NVARS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|i| PrincipalMatrix {
            mat: build_principal(i),
            index: i,
        })
    })
}

/// The symbolic principal part `B_i(a)`.
pub fn principal_matrix(i: usize) -> &'static PrincipalMatrix {
    assert!(i < NVARS, "direction index out of range");
    &table()[i]
}

/// Closed-form determinant of `B_i(a)`.
pub fn principal_det(i: usize) -> RationalFunction {
    assert!(i < NVARS, "direction index out of range");
    let s = saalschutz();
    let var = Polynomial::var;
    if i < 3 {
        let num = &(&var(i) * &(&var(i) - &var(3))) * &(&var(i) - &var(4));
        RationalFunction::new(-&num, s)
    } else {
        let den = &(&(&var(i) - &var(0)) * &(&var(i) - &var(1))) * &(&var(i) - &var(2));
        RationalFunction::new(s, den)
    }
}

/// Goodness condition for specializations:
/// `a0 a1 a2 * s(a) * prod_{i=3,4} prod_{j=0,1,2} (a_i - a_j) != 0`.
pub fn is_good_point(point: &[BigRational; NVARS]) -> bool {
    if point[..3].iter().any(|x| x.is_zero()) {
        return false;
    }
    if saalschutz().eval_rational(point).is_zero() {
        return false;
    }
    for i in 3..5 {
        for j in 0..3 {
            if point[i] == point[j] {
                return false;
            }
        }
    }
    true
}

/// `B_i` evaluated at a good rational point.
pub fn principal_matrix_at(
    i: usize,
    point: &[BigRational; NVARS],
) -> Result<RatMat2, PrincipalError> {
    if !is_good_point(point) {
        return Err(PrincipalError::SingularSpecialization);
    }
    principal_matrix(i)
        .mat
        .eval_rational(point)
        .map_err(|_| PrincipalError::SingularSpecialization)
}

/// The symbolic commuting product `B(a;p) = B_0^{p0} ... B_4^{p4}`.
pub fn principal_product(p: &ShiftVector) -> Matrix2 {
    let mut acc = Matrix2::identity();
    for i in 0..NVARS {
        let n = p.0[i];
        if n == 0 {
            continue;
        }
        let base = if n > 0 {
            principal_matrix(i).mat.clone()
        } else {
            principal_matrix(i).mat.inverse()
        };
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
    }
    acc
}

/// `B(a;p)` evaluated at a good rational point.
pub fn principal_product_at(
    p: &ShiftVector,
    point: &[BigRational; NVARS],
) -> Result<RatMat2, PrincipalError> {
    let mut acc = RatMat2::identity();
    for i in 0..NVARS {
        if p.0[i] == 0 {
            continue;
        }
        let b = principal_matrix_at(i, point)?;
        let powed = b.pow(p.0[i]).ok_or(PrincipalError::SingularSpecialization)?;
        acc = acc.mul(&powed);
    }
    Ok(acc)
}

/// Exact finite-`t` check of the Laurent expansion
/// `t^{s(p)} D(t)^{-1} A(t a; p) D(t) = B(a;p) + O(1/t)`.
///
/// For each supplied `t` the error matrix `E(t)` is computed in exact
/// rational arithmetic; the check passes when the max-entry norm decays at
/// least like `1/t` (with 50% slack) between consecutive `t` values.
pub fn verify_laurent_limit(
    p: &ShiftVector,
    a_point: &[BigRational; NVARS],
    t_values: &[BigRational],
) -> Result<bool, PrincipalError> {
    let b = principal_product_at(p, a_point)?;
    let mut norms: Vec<(BigRational, BigRational)> = Vec::with_capacity(t_values.len());
    for t in t_values {
        if t.is_zero() {
            return Err(PrincipalError::SingularSpecialization);
        }
        let scaled: [BigRational; NVARS] = std::array::from_fn(|k| t * &a_point[k]);
        let m = connection_matrix_eval(p, &ShiftVector::ZERO, &scaled)
            .map_err(|_| PrincipalError::SingularSpecialization)?;
        // D(t)^{-1} M D(t) = [[m00, t m01], [m10/t, m11]]
        let conj = RatMat2::new([
            [m.e[0][0].clone(), t * &m.e[0][1]],
            [&m.e[1][0] / t, m.e[1][1].clone()],
        ]);
        let t_pow = pow_rational(t, p.saalschutz_index());
        let scaled_conj = RatMat2::new(std::array::from_fn(|r| {
            std::array::from_fn(|c| &t_pow * &conj.e[r][c])
        }));
        let err = scaled_conj.sub(&b);
        norms.push((t.clone(), err.max_abs()));
    }
    for w in norms.windows(2) {
        let (t1, n1) = &w[0];
        let (t2, n2) = &w[1];
        if t2 <= t1 {
            return Err(PrincipalError::SingularSpecialization);
        }
        if n1.is_zero() && n2.is_zero() {
            continue;
        }
        // n2 <= n1 * (t1/t2) * 3/2
        let bound = n1 * t1 / t2 * BigRational::new(3.into(), 2.into());
        if *n2 > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pow_rational(t: &BigRational, n: i64) -> BigRational {
    let mut out = BigRational::one();
    let base = if n >= 0 {
        t.clone()
    } else {
        BigRational::one() / t
    };
    for _ in 0..n.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Principal parts specialized at `a0 = a1 = a2 = 0`, as matrices over the
/// rational functions in `(a3, a4)`.
pub fn hat_principal(i: usize) -> Matrix2 {
    assert!(i < NVARS, "direction index out of range");
    let var = Polynomial::var;
    let sum34 = &var(3) + &var(4);
    if i < 3 {
        Matrix2::new([
            [RationalFunction::zero(), RationalFunction::one()],
            [
                RationalFunction::zero(),
                RationalFunction::new(-&(&var(3) * &var(4)), sum34),
            ],
        ])
    } else {
        Matrix2::new([
            [
                RationalFunction::new(Polynomial::one(), var(i)),
                RationalFunction::new(-&sum34, var(i).pow(3)),
            ],
            [
                RationalFunction::zero(),
                RationalFunction::new(sum34, var(i).pow(2)),
            ],
        ])
    }
}

/// Hat-matrix power product for `p` in the cone `p0, p1, p2 >= 0`.
pub fn hat_principal_product(p: &ShiftVector) -> Result<Matrix2, PrincipalError> {
    if p.0[..3].iter().any(|&x| x < 0) {
        return Err(PrincipalError::ShiftOutsideCone);
    }
    let mut acc = Matrix2::identity();
    for i in 0..NVARS {
        let n = p.0[i];
        if n == 0 {
            continue;
        }
        let base = if n > 0 {
            hat_principal(i).clone()
        } else {
            hat_principal(i).inverse()
        };
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn point_i64(p: [i64; 5]) -> [BigRational; 5] {
        std::array::from_fn(|k| BigRational::from_integer(p[k].into()))
    }

    #[test]
    fn printed_forms() {
        // B_0 = [[a0, 1], [phi3/s, (a1 a2 - (a0-a3)(a0-a4))/s]]
        let m = &principal_matrix(0).mat;
        assert!(m.e[0][0].rf_equal(&RationalFunction::from_poly(Polynomial::var(0))));
        assert!(m.e[0][1].rf_equal(&RationalFunction::one()));
        assert!(m.e[1][0].rf_equal(&RationalFunction::new(phi3(), saalschutz())));
        let a0 = Polynomial::var(0);
        let corner = &(&Polynomial::var(1) * &Polynomial::var(2))
            - &(&(&a0 - &Polynomial::var(3)) * &(&a0 - &Polynomial::var(4)));
        assert!(m.e[1][1].rf_equal(&RationalFunction::new(corner, saalschutz())));
    }

    #[test]
    fn first_specialization_fixture() {
        // a = (2,2,2;-7,-7): B0 = B1 = B2 = [[2, 1], [-2/5, 77/20]],
        // B3 = B4 = [[-103/729, -20/729], [8/729, -140/729]].
        let a = point_i64([2, 2, 2, -7, -7]);
        let b0 = principal_matrix_at(0, &a).unwrap();
        let expect0 = RatMat2::from_i64([[(2, 1), (1, 1)], [(-2, 5), (77, 20)]]);
        assert_eq!(b0, expect0);
        assert_eq!(principal_matrix_at(1, &a).unwrap(), expect0);
        assert_eq!(principal_matrix_at(2, &a).unwrap(), expect0);
        let b3 = principal_matrix_at(3, &a).unwrap();
        let expect3 = RatMat2::from_i64([[(-103, 729), (-20, 729)], [(8, 729), (-140, 729)]]);
        assert_eq!(b3, expect3);
        assert_eq!(principal_matrix_at(4, &a).unwrap(), expect3);
    }

    #[test]
    fn second_specialization_fixture() {
        // a = (4,4,4;0,7): B3 = [[-3/4, -5/64], [1, 0]].
        let a = point_i64([4, 4, 4, 0, 7]);
        let b3 = principal_matrix_at(3, &a).unwrap();
        assert_eq!(
            b3,
            RatMat2::from_i64([[(-3, 4), (-5, 64)], [(1, 1), (0, 1)]])
        );
        let b0 = principal_matrix_at(0, &a).unwrap();
        assert_eq!(
            b0,
            RatMat2::from_i64([[(4, 1), (1, 1)], [(-64, 5), (-28, 5)]])
        );
        let b4 = principal_matrix_at(4, &a).unwrap();
        assert_eq!(
            b4,
            RatMat2::from_i64([[(13, 27), (5, 27)], [(-64, 27), (-35, 27)]])
        );
    }

    #[test]
    fn commutativity_all_pairs() {
        for i in 0..NVARS {
            for j in (i + 1)..NVARS {
                let bi = &principal_matrix(i).mat;
                let bj = &principal_matrix(j).mat;
                assert!(
                    bi.mul(bj).rf_equal(&bj.mul(bi)),
                    "B_{i} and B_{j} do not commute"
                );
            }
        }
    }

    #[test]
    fn determinant_closed_forms() {
        for i in 0..NVARS {
            assert!(
                principal_matrix(i).mat.det().rf_equal(&principal_det(i)),
                "determinant mismatch at B_{i}"
            );
        }
    }

    #[test]
    fn product_trivial_cases() {
        assert!(principal_product(&ShiftVector::ZERO).rf_equal(&Matrix2::identity()));
        let a = point_i64([2, 2, 2, -7, -7]);
        let prod = principal_product_at(&ShiftVector([1, 1, 1, 0, 0]), &a).unwrap();
        let b0_cubed = principal_matrix_at(0, &a).unwrap().pow(3).unwrap();
        assert_eq!(prod, b0_cubed);
    }

    #[test]
    fn product_order_independent_at_point() {
        // Exhaustive permutations of the factor sequence at one generic
        // rational point.
        let a: [BigRational; 5] = [rat(1, 3), rat(2, 5), rat(5, 7), rat(13, 2), rat(17, 3)];
        assert!(is_good_point(&a));
        let p = ShiftVector([1, -1, 0, 1, 1]);
        let mut factors: Vec<RatMat2> = Vec::new();
        for i in 0..NVARS {
            let b = principal_matrix_at(i, &a).unwrap();
            let step = if p.0[i] >= 0 {
                b.clone()
            } else {
                b.inverse().unwrap()
            };
            for _ in 0..p.0[i].unsigned_abs() {
                factors.push(step.clone());
            }
        }
        let reference = principal_product_at(&p, &a).unwrap();
        let idx: Vec<usize> = (0..factors.len()).collect();
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permute(&idx, &mut vec![], &mut perms);
        for perm in perms {
            let mut acc = RatMat2::identity();
            for &k in &perm {
                acc = acc.mul(&factors[k]);
            }
            assert_eq!(acc, reference, "order dependence at permutation {perm:?}");
        }
    }

    fn permute(rest: &[usize], acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for (k, &x) in rest.iter().enumerate() {
            let mut next: Vec<usize> = rest.to_vec();
            next.remove(k);
            acc.push(x);
            permute(&next, acc, out);
            acc.pop();
        }
    }

    #[test]
    fn goodness_guard() {
        let bad = point_i64([0, 2, 2, -7, -7]);
        assert_eq!(
            principal_matrix_at(0, &bad).unwrap_err(),
            PrincipalError::SingularSpecialization
        );
        // s = 0 at (1,1,1;1,2)
        let bad = point_i64([1, 1, 1, 1, 2]);
        assert!(!is_good_point(&bad));
    }

    #[test]
    fn laurent_limit_single_raise() {
        let a = point_i64([1, 2, 3, 5, 7]);
        let ts: Vec<BigRational> = [10i64, 20, 40, 80]
            .iter()
            .map(|&t| BigRational::from_integer(t.into()))
            .collect();
        assert!(verify_laurent_limit(&ShiftVector::basis(0), &a, &ts).unwrap());
    }

    #[test]
    fn laurent_limit_zero_shift() {
        let a = point_i64([1, 2, 3, 5, 7]);
        let ts: Vec<BigRational> = [10i64, 20]
            .iter()
            .map(|&t| BigRational::from_integer(t.into()))
            .collect();
        assert!(verify_laurent_limit(&ShiftVector::ZERO, &a, &ts).unwrap());
    }

    #[test]
    fn laurent_limit_mixed_signs() {
        let a: [BigRational; 5] = [rat(1, 3), rat(2, 5), rat(5, 7), rat(13, 2), rat(17, 3)];
        let ts: Vec<BigRational> = [10i64, 20, 40]
            .iter()
            .map(|&t| BigRational::from_integer(t.into()))
            .collect();
        assert!(verify_laurent_limit(&ShiftVector([1, -1, 0, 1, -1]), &a, &ts).unwrap());
    }

    #[test]
    fn hat_forms_match_specialized_principal_parts() {
        let images: [Polynomial; 5] = [
            Polynomial::zero(),
            Polynomial::zero(),
            Polynomial::zero(),
            Polynomial::var(3),
            Polynomial::var(4),
        ];
        for i in 0..NVARS {
            let specialized = principal_matrix(i).mat.substitute(&images);
            assert!(
                specialized.rf_equal(&hat_principal(i)),
                "hat form mismatch at B_{i}"
            );
        }
        // Printed form for i = 0.
        let h0 = hat_principal(0);
        assert!(h0.e[0][0].is_zero());
        assert!(h0.e[0][1].rf_equal(&RationalFunction::one()));
        assert!(h0.e[1][0].is_zero());
        assert!(h0.e[1][1].rf_equal(&RationalFunction::new(
            -&(&Polynomial::var(3) * &Polynomial::var(4)),
            &Polynomial::var(3) + &Polynomial::var(4)
        )));
    }

    #[test]
    fn hat_matrix_example_point() {
        // i = 3 at (a3, a4) = (-2, 3): [[-1/2, 1/8], [0, 1/4]].
        let pt: [BigRational; 5] = [rat(1, 1), rat(1, 1), rat(1, 1), rat(-2, 1), rat(3, 1)];
        let m = hat_principal(3).eval_rational(&pt).unwrap();
        assert_eq!(m, RatMat2::from_i64([[(-1, 2), (1, 8)], [(0, 1), (1, 4)]]));
    }

    #[test]
    fn hat_product_closed_form() {
        // At (a3, a4) = (-2, 3) with p = p0+p1+p2:
        // p = 0: [[(-2)^-p3 3^-p4, 2^(-2p3-1) 3^(-2p4-1) (1 - (-2)^p3 3^p4)],
        //         [0, 2^-2p3 3^-2p4]]
        // p >= 1: [[0, 2^(p-2p3-1) 3^(p-2p4-1)], [0, 2^(p-2p3) 3^(p-2p4)]]
        let pt: [BigRational; 5] = [rat(0, 1), rat(0, 1), rat(0, 1), rat(-2, 1), rat(3, 1)];
        let pow = |b: i64, e: i64| pow_rational(&rat(b, 1), e);
        for (p012, p3, p4) in [
            ([0, 0, 0], 1i64, 0i64),
            ([0, 0, 0], 2, -1),
            ([0, 0, 0], -1, 2),
            ([1, 0, 0], 1, 1),
            ([1, 1, 0], -2, 1),
            ([2, 1, 1], 0, -1),
        ] {
            let shift = ShiftVector([p012[0], p012[1], p012[2], p3, p4]);
            let got = hat_principal_product(&shift)
                .unwrap()
                .eval_rational(&pt)
                .unwrap();
            let p: i64 = p012.iter().sum();
            let expect = if p == 0 {
                let e00 = pow(-2, -p3) * pow(3, -p4);
                let e01 = pow(2, -2 * p3 - 1)
                    * pow(3, -2 * p4 - 1)
                    * (BigRational::one() - pow(-2, p3) * pow(3, p4));
                let e11 = pow(2, -2 * p3) * pow(3, -2 * p4);
                RatMat2::new([[e00, e01], [BigRational::zero(), e11]])
            } else {
                let e01 = pow(2, p - 2 * p3 - 1) * pow(3, p - 2 * p4 - 1);
                let e11 = pow(2, p - 2 * p3) * pow(3, p - 2 * p4);
                RatMat2::new([[BigRational::zero(), e01], [BigRational::zero(), e11]])
            };
            assert_eq!(got, expect, "closed form mismatch at {shift}");
        }
    }

    #[test]
    fn hat_cone_guard() {
        assert_eq!(
            hat_principal_product(&ShiftVector([-1, 0, 0, 1, 0])).unwrap_err(),
            PrincipalError::ShiftOutsideCone
        );
    }

    #[test]
    fn eigen_fixture_first() {
        // a = (2,2,2;-7,-7): P = [[5/8, 4], [1, 1]] diagonalizes
        // B0 with eigenvalues {18/5, 9/4} and B3 with {-5/27, -4/27}.
        let a = point_i64([2, 2, 2, -7, -7]);
        let p = RatMat2::from_i64([[(5, 8), (4, 1)], [(1, 1), (1, 1)]]);
        let p_inv = p.inverse().unwrap();
        let d0 = p_inv.mul(&principal_matrix_at(0, &a).unwrap()).mul(&p);
        assert_eq!(d0, RatMat2::from_i64([[(18, 5), (0, 1)], [(0, 1), (9, 4)]]));
        let d3 = p_inv.mul(&principal_matrix_at(3, &a).unwrap()).mul(&p);
        assert_eq!(
            d3,
            RatMat2::from_i64([[(-5, 27), (0, 1)], [(0, 1), (-4, 27)]])
        );
    }

    #[test]
    fn eigen_fixture_second() {
        // a = (4,4,4;0,7): P = [[-1/8, -5/8], [1, 1]] gives
        // P^-1 (B3 B4^-1) P = diag(1/8, -27/8).
        let a = point_i64([4, 4, 4, 0, 7]);
        let p = RatMat2::from_i64([[(-1, 8), (-5, 8)], [(1, 1), (1, 1)]]);
        let b3 = principal_matrix_at(3, &a).unwrap();
        let b4 = principal_matrix_at(4, &a).unwrap();
        let m = b3.mul(&b4.inverse().unwrap());
        let d = p.inverse().unwrap().mul(&m).mul(&p);
        assert_eq!(d, RatMat2::from_i64([[(1, 8), (0, 1)], [(0, 1), (-27, 8)]]));
    }

    #[test]
    fn eigen_fixture_third() {
        // a = (-6,1,1;0,0): P = [[-1/2, -4/3], [1, 1]] gives
        // P^-1 (B0 B1^-1) P = diag(8, -27).
        let a = point_i64([-6, 1, 1, 0, 0]);
        let b0 = principal_matrix_at(0, &a).unwrap();
        assert_eq!(
            b0,
            RatMat2::from_i64([[(-6, 1), (1, 1)], [(-3, 2), (-35, 4)]])
        );
        let b1 = principal_matrix_at(1, &a).unwrap();
        assert_eq!(
            b1,
            RatMat2::from_i64([[(1, 1), (1, 1)], [(-3, 2), (-7, 4)]])
        );
        let b3 = principal_matrix_at(3, &a).unwrap();
        assert_eq!(
            b3,
            RatMat2::from_i64([[(-11, 6), (-2, 3)], [(1, 1), (0, 1)]])
        );
        let p = RatMat2::from_i64([[(-1, 2), (-4, 3)], [(1, 1), (1, 1)]]);
        let m = b0.mul(&b1.inverse().unwrap());
        let d = p.inverse().unwrap().mul(&m).mul(&p);
        assert_eq!(d, RatMat2::from_i64([[(8, 1), (0, 1)], [(0, 1), (-27, 1)]]));
    }
}
