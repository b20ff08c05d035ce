//! Quantum tori `T(Q)`: Laurent polynomials in `x_i` with `x_i x_j = q^{Q_ij} x_j x_i`,
//! stored in the basis of Weyl-normalized monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qcoeff::HalfPowerLaurent;

pub type ExpVec = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymForm {
    names: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

impl AntisymForm {
    pub fn new(names: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = names.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("form matrix shape does not match index set".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != -matrix[j][i] {
                    return Err(Error::Precondition(format!(
                        "form is not antisymmetric at ({}, {})",
                        names[i], names[j]
                    )));
                }
            }
        }
        Ok(Self { names, matrix })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// `<k, k'> = sum_ij Q_ij k_i k'_j`.
    pub fn pairing(&self, k: &[i64], k2: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ki) in k.iter().enumerate() {
            if *ki == 0 {
                continue;
            }
            let row = &self.matrix[i];
            for (j, kj) in k2.iter().enumerate() {
                s += row[j] * ki * kj;
            }
        }
        s
    }

    pub fn unit(&self, i: usize) -> ExpVec {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }
}

#[derive(Clone, Debug)]
pub struct TorusElement {
    form: Arc<AntisymForm>,
    terms: BTreeMap<ExpVec, HalfPowerLaurent>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(form: &Arc<AntisymForm>) -> Self {
        Self { form: form.clone(), terms: BTreeMap::new() }
    }

    pub fn one(form: &Arc<AntisymForm>) -> Self {
        Self::monomial(form, vec![0; form.dim()], HalfPowerLaurent::one())
    }

    /// `c * x^k` with `x^k` Weyl-normalized.
    pub fn monomial(form: &Arc<AntisymForm>, k: ExpVec, c: HalfPowerLaurent) -> Self {
        assert_eq!(k.len(), form.dim(), "exponent length does not match the form");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { form: form.clone(), terms }
    }

    pub fn generator(form: &Arc<AntisymForm>, name: &str, power: i64) -> Result<Self> {
        let i = form.index_of(name)?;
        let mut k = vec![0; form.dim()];
        k[i] = power;
        Ok(Self::monomial(form, k, HalfPowerLaurent::one()))
    }

    pub fn form(&self) -> &Arc<AntisymForm> {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &HalfPowerLaurent)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &[i64]) -> HalfPowerLaurent {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: ExpVec, c: &HalfPowerLaurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn check_form(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.form, &other.form) || self.form == other.form {
            Ok(())
        } else {
            Err(Error::FormMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &HalfPowerLaurent) -> Self {
        let mut out = Self::zero(&self.form);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(v * c));
        }
        out
    }

    /// Bilinear extension of `x^k x^{k'} = q^{<k,k'>/2} x^{k+k'}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_form(other)?;
        let mut out = Self::zero(&self.form);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let e = self.form.pairing(k1, k2);
                let k: ExpVec = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(k, &(c1 * c2).shift(e));
            }
        }
        Ok(out)
    }

    /// Reflection anti-involution: fixes normalized monomials, bars coefficients.
    pub fn reflect(&self) -> Self {
        Self {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.bar())).collect(),
        }
    }

    /// Terms of maximal `weight . k`.
    pub fn leading_term(&self, weight: &[i64]) -> Result<Self> {
        let score = |k: &ExpVec| -> i64 { k.iter().zip(weight).map(|(a, b)| a * b).sum() };
        let best = self.terms.keys().map(score).max().ok_or(Error::ZeroElement)?;
        Ok(Self {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| score(k) == best)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        })
    }

    /// Multiplicatively linear map `x^k -> x^{k M}` into `target`; `M` has one row per
    /// source generator. Coefficients are unchanged.
    pub fn map_monomials(&self, target: &Arc<AntisymForm>, m: &[Vec<i64>]) -> Self {
        let mut out = Self::zero(target);
        for (k, c) in &self.terms {
            let mut img = vec![0; target.dim()];
            for (i, ki) in k.iter().enumerate() {
                if *ki != 0 {
                    for (j, mij) in m[i].iter().enumerate() {
                        img[j] += ki * mij;
                    }
                }
            }
            out.add_term(img, c);
        }
        out
    }

    /// Keep only terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&ExpVec) -> bool) -> Self {
        Self {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Commutative specialization `q^{1/2} = 1` of the coefficients.
    pub fn specialize_q1(&self) -> BTreeMap<ExpVec, BigInt> {
        self.terms
            .iter()
            .map(|(k, c)| (k.clone(), c.evaluate_q1()))
            .filter(|(_, c)| *c != BigInt::from(0))
            .collect()
    }

    pub fn render_monomial(&self, k: &[i64]) -> String {
        let parts: Vec<String> = k
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(i, e)| format!("{}^{}", self.form.names()[i], e))
            .collect();
        parts.join(" ")
    }

    /// Rendering of the `q = 1` specialization, same layout as `Display`.
    pub fn render_q1(&self) -> String {
        let spec = self.specialize_q1();
        if spec.is_empty() {
            return "0".into();
        }
        spec.iter()
            .map(|(k, c)| {
                let mono = self.render_monomial(k);
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{} * {}", c, mono)
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `[x_{g_1}^{p_1} ... x_{g_n}^{p_n}]`: the ordered product times
/// `q^{-1/2 sum_{i<j} Q(g_i,g_j) p_i p_j}`.
pub fn weyl_normalize(form: &Arc<AntisymForm>, factors: &[(&str, i64)]) -> Result<TorusElement> {
    let mut prod = TorusElement::one(form);
    let mut idx = Vec::with_capacity(factors.len());
    for (g, p) in factors {
        let i = form.index_of(g)?;
        idx.push((i, *p));
        prod = prod.multiply(&TorusElement::generator(form, g, *p)?)?;
    }
    let mut correction = 0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            correction += form.entry(idx[a].0, idx[b].0) * idx[a].1 * idx[b].1;
        }
    }
    Ok(prod.scale(&HalfPowerLaurent::q_half_pow(-correction)))
}

/// Whether `x^k -> x^{kM}` respects the forms: `M Q_target M^T = Q_source`.
pub fn is_form_compatible(source: &AntisymForm, target: &AntisymForm, m: &[Vec<i64>]) -> bool {
    let n = source.dim();
    for i in 0..n {
        for j in 0..n {
            if target.pairing(&m[i], &m[j]) != source.entry(i, j) {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for TorusElement {
    /// One term per line: `<coeff> * <gen>^<exp> ...`, multi-term coefficients parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let coeff = if c.num_terms() > 1 { format!("({})", c) } else { c.to_string() };
            let mono = self.render_monomial(k);
            if mono.is_empty() {
                write!(f, "{}", coeff)?;
            } else {
                write!(f, "{} * {}", coeff, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form2(q12: i64) -> Arc<AntisymForm> {
        Arc::new(AntisymForm::new(vec!["a".into(), "b".into()], vec![vec![0, q12], vec![-q12, 0]]).unwrap())
    }

    #[test]
    fn weyl_pair_example() {
        let f = form2(2);
        let w = weyl_normalize(&f, &[("a", 1), ("b", 1)]).unwrap();
        assert_eq!(w, TorusElement::monomial(&f, vec![1, 1], HalfPowerLaurent::one()));
        // Independent route: x_a x_b = q^{Q(a,b)} x_b x_a, so x_a x_b = q^{1} x^{(1,1)}.
        let xa = TorusElement::generator(&f, "a", 1).unwrap();
        let xb = TorusElement::generator(&f, "b", 1).unwrap();
        let ab = xa.multiply(&xb).unwrap();
        let ba = xb.multiply(&xa).unwrap();
        assert_eq!(ab, ba.scale(&HalfPowerLaurent::q_half_pow(4)));
        assert_eq!(ab, w.scale(&HalfPowerLaurent::q_half_pow(2)));
    }

    #[test]
    fn weyl_order_independent() {
        let f = form2(-3);
        let w1 = weyl_normalize(&f, &[("a", 2), ("b", -1)]).unwrap();
        let w2 = weyl_normalize(&f, &[("b", -1), ("a", 2)]).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn unknown_generator() {
        let f = form2(1);
        assert!(matches!(weyl_normalize(&f, &[("z", 1)]), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn pairing_example() {
        let f = form2(3);
        assert_eq!(f.pairing(&[1, 1], &[1, -1]), -6);
        assert_eq!(f.pairing(&[1, 0], &[0, 1]), 3);
    }

    #[test]
    fn rendering() {
        let f = form2(1);
        let mut u = TorusElement::monomial(&f, vec![1, -2], HalfPowerLaurent::loop_value());
        u.add_term(vec![0, 0], &HalfPowerLaurent::q_half_pow(1));
        assert_eq!(u.to_string(), "1*q^(1/2)\n(-1*q^-2 + -1*q^2) * a^1 b^-2");
    }

    #[test]
    fn leading_term_example() {
        let f = form2(1);
        let mut u = TorusElement::monomial(&f, vec![2, 0], HalfPowerLaurent::one());
        u.add_term(vec![0, 1], &HalfPowerLaurent::one());
        let lt = u.leading_term(&[1, 0]).unwrap();
        assert_eq!(lt, TorusElement::monomial(&f, vec![2, 0], HalfPowerLaurent::one()));
        assert!(TorusElement::zero(&f).leading_term(&[1, 0]).is_err());
    }
}
