//! Laurent polynomials in `q^{1/2}` with integer coefficients.
//!
//! Exponents are stored doubled, so `q^{3/2}` is the key `3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfPowerLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfPowerLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^{k/2}`.
    pub fn monomial(c: impl Into<BigInt>, doubled_exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(doubled_exp, c);
        }
        Self { terms }
    }

    /// `q^{k/2}`.
    pub fn q_half_pow(doubled_exp: i64) -> Self {
        Self::monomial(1, doubled_exp)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The loop value `-q^2 - q^{-2}`.
    pub fn loop_value() -> Self {
        Self::from_terms([(4, -1), (-4, -1)])
    }

    pub fn from_terms<C: Into<BigInt>>(it: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in it {
            out.add_term(k, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, doubled_exp: i64) -> BigInt {
        self.terms.get(&doubled_exp).cloned().unwrap_or_default()
    }

    /// `Some(k)` when the value is exactly `q^{k/2}`.
    pub fn as_q_power(&self) -> Option<i64> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        c.is_one().then_some(*k)
    }

    /// `Some((c, k))` when the value is a single term `c q^{k/2}`.
    pub fn as_monomial(&self) -> Option<(BigInt, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(k, c)| (c.clone(), *k))
    }

    pub fn add_term(&mut self, doubled_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(doubled_exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&doubled_exp);
        }
    }

    /// Multiply by `q^{k/2}`.
    pub fn shift(&self, doubled_exp: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + doubled_exp, c.clone())).collect(),
        }
    }

    /// `q^{1/2} -> q^{-1/2}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Specialize at `q^{1/2} = 1`.
    pub fn evaluate_q1(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|(k, c)| self.terms.get(&-k) == Some(c))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
}

impl From<i64> for HalfPowerLaurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn add(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn add(mut self, rhs: HalfPowerLaurent) -> HalfPowerLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&HalfPowerLaurent> for HalfPowerLaurent {
    fn add_assign(&mut self, rhs: &HalfPowerLaurent) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Neg for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn neg(self) -> HalfPowerLaurent {
        HalfPowerLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn neg(self) -> HalfPowerLaurent {
        -&self
    }
}

impl Sub for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn sub(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        self + &(-rhs)
    }
}

impl Sub for HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn sub(self, rhs: HalfPowerLaurent) -> HalfPowerLaurent {
        &self - &rhs
    }
}

impl Mul for &HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn mul(self, rhs: &HalfPowerLaurent) -> HalfPowerLaurent {
        let mut out = HalfPowerLaurent::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for HalfPowerLaurent {
    type Output = HalfPowerLaurent;
    fn mul(self, rhs: HalfPowerLaurent) -> HalfPowerLaurent {
        &self * &rhs
    }
}

fn fmt_exponent(k: i64) -> String {
    if k % 2 == 0 {
        format!("{}", k / 2)
    } else {
        format!("({}/2)", k)
    }
}

impl fmt::Display for HalfPowerLaurent {
    /// Ascending exponents, `c*q^e` joined by ` + `; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{}*q^{}", c, fmt_exponent(*k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> HalfPowerLaurent {
        HalfPowerLaurent::q_half_pow(k)
    }

    /// Schoolbook convolution over a plain vector, used as an independent check.
    fn convolve(a: &[(i64, i64)], b: &[(i64, i64)]) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (ka, ca) in a {
            for (kb, cb) in b {
                *out.entry(ka + kb).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn half_powers_multiply() {
        assert_eq!(&q(1) * &q(1), q(2));
    }

    #[test]
    fn loop_value_cancels() {
        let l = HalfPowerLaurent::loop_value();
        let m = HalfPowerLaurent::from_terms([(4, 1), (-4, 1)]);
        assert!((&l + &m).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = HalfPowerLaurent::from_terms([(2, 1), (-2, -1)]);
        let b = HalfPowerLaurent::from_terms([(2, 1), (-2, 1)]);
        let expected = convolve(&[(2, 1), (-2, -1)], &[(2, 1), (-2, 1)]);
        let got = &a * &b;
        assert_eq!(got, HalfPowerLaurent::from_terms(expected));
        assert_eq!(got, HalfPowerLaurent::from_terms([(4, 1), (-4, -1)]));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(q(1).bar(), q(-1));
        assert_eq!(HalfPowerLaurent::constant(5).bar(), HalfPowerLaurent::constant(5));
        let l = HalfPowerLaurent::loop_value();
        assert_eq!(l.bar(), l);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(HalfPowerLaurent::loop_value().evaluate_q1(), BigInt::from(-2));
        assert_eq!(q(-1).evaluate_q1(), BigInt::from(1));
        let v = HalfPowerLaurent::from_terms([(3, 1), (3, -1), (-5, -1)]);
        assert_eq!(v.evaluate_q1(), BigInt::from(-1));
    }

    #[test]
    fn rendering() {
        assert_eq!(HalfPowerLaurent::loop_value().to_string(), "-1*q^-2 + -1*q^2");
        assert_eq!(q(3).to_string(), "1*q^(3/2)");
        assert_eq!(q(-5).to_string(), "1*q^(-5/2)");
        assert_eq!(HalfPowerLaurent::zero().to_string(), "0");
    }
}
