//! Integer-coefficient polynomial core used inside matrix products.
//!
//! The public [`crate::polyrat::Polynomial`] carries rational coefficients;
//! the product pipeline works with integer coefficients and a single rational
//! scale instead, so the hot loops (multiply, exact division, witness
//! evaluation) run in pure `BigInt` arithmetic with no per-term gcd work.
//!
//! Exponent vectors are packed into a `u64` with 12-bit lanes, most
//! significant lane first, so the natural `u64` ordering is the lexicographic
//! monomial order and key addition is a single integer add.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::polyrat::{Expo, Polynomial, NVARS};

const LANE_BITS: u32 = 12;
const LANE_MAX: u16 = (1 << LANE_BITS) - 1;

fn pack(e: &Expo) -> u64 {
    let mut out = 0u64;
    for k in 0..NVARS {
        assert!(e[k] <= LANE_MAX, "exponent exceeds packed-lane capacity");
        out = (out << LANE_BITS) | e[k] as u64;
    }
    out
}

fn unpack(mut p: u64) -> Expo {
    let mut e = [0u16; NVARS];
    for k in (0..NVARS).rev() {
        e[k] = (p & LANE_MAX as u64) as u16;
        p >>= LANE_BITS;
    }
    e
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct ZPoly {
    terms: BTreeMap<u64, BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0u64, BigInt::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent of each variable over all terms.
    fn max_exponents(&self) -> Expo {
        let mut m = [0u16; NVARS];
        for key in self.terms.keys() {
            let e = unpack(*key);
            for k in 0..NVARS {
                m[k] = m[k].max(e[k]);
            }
        }
        m
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|key| unpack(*key).iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(Expo, &BigInt)> {
        self.terms.iter().next_back().map(|(k, c)| (unpack(*k), c))
    }

    /// Splits a rational-coefficient polynomial into an integer polynomial
    /// and a positive denominator: `p = zpoly / den`.
    pub fn from_polynomial(p: &Polynomial) -> (Self, BigInt) {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let terms = p
            .terms()
            .map(|(e, c)| (pack(e), c.numer() * (&den / c.denom())))
            .collect();
        (Self { terms }, den)
    }

    /// Converts back, multiplying by the rational `scale`.
    pub fn to_polynomial(&self, scale: &BigRational) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (key, c) in &self.terms {
            terms.push((
                unpack(*key),
                BigRational::new(c * scale.numer(), scale.denom().clone()),
            ));
        }
        Polynomial::from_sorted_terms(terms)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    fn insert_add(&mut self, e: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        // Packed keys add as plain integers provided no lane overflows.
        let (ma, mb) = (self.max_exponents(), rhs.max_exponents());
        for k in 0..NVARS {
            assert!(
                ma[k] + mb[k] <= LANE_MAX,
                "polynomial exponent overflow in product"
            );
        }
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc: FxHashMap<u64, BigInt> =
            FxHashMap::with_capacity_and_hasher(large.terms.len() * 2, Default::default());
        for (es, cs) in &small.terms {
            for (el, cl) in &large.terms {
                let e = es + el;
                let prod = cs * cl;
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        Self {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Exact division with an in-place remainder. Returns `None` when `d`
    /// does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (d_lead_key, d_lead_c) = d.terms.iter().next_back()?;
        let d_lead_e = unpack(*d_lead_key);
        let mut rem = self.terms.clone();
        let mut quo: BTreeMap<u64, BigInt> = BTreeMap::new();
        while let Some((re_key, rc)) = rem.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let re = unpack(re_key);
            let mut qe = [0u16; NVARS];
            for k in 0..NVARS {
                if re[k] < d_lead_e[k] {
                    return None;
                }
                qe[k] = re[k] - d_lead_e[k];
            }
            let (qc, r) = rc.div_rem(d_lead_c);
            if !r.is_zero() {
                return None;
            }
            let q_key = pack(&qe);
            // rem -= qc * x^qe * d; the leading term cancels by construction.
            for (fe, fc) in &d.terms {
                let e = fe + q_key;
                let delta = -(fc * &qc);
                match rem.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quo.insert(q_key, qc);
        }
        Some(Self { terms: quo })
    }

    /// Positive gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int(&self, c: &BigInt) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k / c)).collect(),
        }
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn eval_bigint(&self, point: &[BigInt; NVARS]) -> BigInt {
        let max_exp = self.max_exponents();
        let mut pows: [Vec<BigInt>; NVARS] = Default::default();
        for k in 0..NVARS {
            let mut v = Vec::with_capacity(max_exp[k] as usize + 1);
            v.push(BigInt::one());
            for j in 1..=max_exp[k] as usize {
                let next = &v[j - 1] * &point[k];
                v.push(next);
            }
            pows[k] = v;
        }
        let mut acc = BigInt::zero();
        for (key, c) in &self.terms {
            let e = unpack(*key);
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

    /// For a degree-one polynomial with a unit coefficient on some variable,
    /// returns an integer point at which it vanishes.
    pub fn integer_zero_witness(&self) -> Option<[BigInt; NVARS]> {
        if self.total_degree() != 1 {
            return None;
        }
        let mut coeffs: [BigInt; NVARS] = std::array::from_fn(|_| BigInt::zero());
        let mut constant = BigInt::zero();
        for (key, c) in &self.terms {
            let e = unpack(*key);
            match e.iter().position(|&x| x == 1) {
                Some(k) => coeffs[k] = c.clone(),
                None => constant = c.clone(),
            }
        }
        let pivot = (0..NVARS).find(|&k| coeffs[k].abs().is_one())?;
        // Distinct offsets keep the witness away from symmetric accidental
        // zeros in typical numerators.
        let fill = [3i64, 5, 7, 11, 13];
        let mut point: [BigInt; NVARS] = std::array::from_fn(|k| BigInt::from(fill[k]));
        let mut rhs = -constant;
        for k in 0..NVARS {
            if k != pivot {
                rhs -= &coeffs[k] * &point[k];
            }
        }
        point[pivot] = rhs / &coeffs[pivot];
        Some(point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrat::{phi2, saalschutz};

    #[test]
    fn packing_roundtrip_is_lexicographic() {
        let e1: Expo = [1, 0, 4, 0, 2];
        let e2: Expo = [1, 1, 0, 0, 0];
        assert_eq!(unpack(pack(&e1)), e1);
        assert_eq!(unpack(pack(&e2)), e2);
        // lex comparison matches u64 comparison
        assert!(pack(&e2) > pack(&e1));
    }

    #[test]
    fn roundtrip_and_division() {
        let (s, d) = ZPoly::from_polynomial(&saalschutz());
        assert!(d.is_one());
        let (p2, _) = ZPoly::from_polynomial(&phi2());
        let prod = s.mul(&p2);
        assert_eq!(prod.div_exact(&s).unwrap(), p2);
        assert_eq!(prod.div_exact(&p2).unwrap(), s);
        assert!(p2.div_exact(&s).is_none());
        let back = prod.to_polynomial(&BigRational::one());
        assert_eq!(back, &saalschutz() * &phi2());
    }

    #[test]
    fn witness_vanishes_on_factor() {
        let (s2, _) = ZPoly::from_polynomial(
            &(&saalschutz() - &crate::polyrat::Polynomial::from_int(2)),
        );
        let w = s2.integer_zero_witness().expect("unit pivot exists");
        assert!(s2.eval_bigint(&w).is_zero());
        let (p2, _) = ZPoly::from_polynomial(&phi2());
        assert!(!p2.mul(&p2).eval_bigint(&w).is_zero());
    }
}
