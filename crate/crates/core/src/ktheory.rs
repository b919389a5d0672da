//! K-theoretic push-forwards of Schur functors `S_lambda(R^dual)` from the
//! components of `OG(n, 2n)`, computed by localization.
//!
//! At the fixed point `eps` the character of `S_lambda(R^dual)` is
//! `s_lambda(t_1^{eps_1}, ..., t_n^{eps_n})` and the K-theoretic Euler class
//! of the tangent space `wedge^2 R^dual` is
//! `prod_{i<j} (1 - (t_i^{eps_i} t_j^{eps_j})^{-1})`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, FactoredRatFunc, Monomial, MultiPoly, Rat, VarId};
use crate::pushforward::{enumerate_fixed_points, Component, SignVector};
use crate::symfun::{schur_bialternant, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTheoryError {
    #[error("localization sum did not simplify to a Laurent polynomial: {0}")]
    NotLaurentPolynomial(String),
    #[error("partition has {parts} entries but n = {n}")]
    RankMismatch { parts: usize, n: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Polynomial in `t_1, ..., t_n` with integer exponents and rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        LaurentPoly::monomial(vec![0; n], Rat::one())
    }

    pub fn monomial(exps: Vec<i32>, c: Rat) -> Self {
        let mut p = LaurentPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// `t_i` raised to `e`, with `i` counted from 1.
    pub fn t_pow(n: usize, i: usize, e: i32) -> Self {
        let mut exps = vec![0; n];
        exps[i - 1] = e;
        LaurentPoly::monomial(exps, Rat::one())
    }

    /// Embeds a polynomial in `t_1..t_n`; `z` variables are not allowed.
    pub fn from_poly(p: &MultiPoly, n: usize) -> Self {
        let mut out = LaurentPoly::zero(n);
        for (m, c) in p.terms() {
            assert!(m.z_exps().is_empty(), "polynomial involves z variables");
            let mut exps = vec![0; n];
            for (k, &e) in m.t_exps().iter().enumerate() {
                exps[k] = e as i32;
            }
            out.add_term(exps, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: Rat) {
        assert_eq!(exps.len(), self.n, "exponent vector has wrong length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Rat)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Componentwise minimum of all exponent vectors (zero for the zero
    /// polynomial).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut out = vec![0; self.n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.terms.keys().map(|k| k[i]).min().unwrap_or(0);
        }
        out
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i32]) -> LaurentPoly {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.iter().zip(shift).map(|(a, b)| a + b).collect(), v.clone()))
            .collect();
        LaurentPoly { n: self.n, terms }
    }

    /// Converts to a polynomial, provided no exponent is negative.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (k, c) in &self.terms {
            if k.iter().any(|&e| e < 0) {
                return None;
            }
            let t: Vec<u32> = k.iter().map(|&e| e as u32).collect();
            out.add_term(Monomial::from_exps(&t, &[]), c.clone());
        }
        Some(out)
    }

    /// Applies `t_i -> t_{perm[i]}^{inv[i] ? -1 : 1}`.
    pub fn transform(&self, perm: &[usize], invert: &[bool]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.n);
        for (k, c) in &self.terms {
            let mut e = vec![0; self.n];
            for i in 0..self.n {
                e[perm[i]] += if invert[i] { -k[i] } else { k[i] };
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Terms in display order: smallest `sum |e_i|` first, then descending
    /// degree, then the positive and negative parts of the exponent vector,
    /// each lexicographically descending.
    fn display_order(&self) -> Vec<(&Vec<i32>, &Rat)> {
        let key = |x: &Vec<i32>| {
            let abs: i32 = x.iter().map(|e| e.abs()).sum();
            let deg: i32 = x.iter().sum();
            let pos: Vec<i32> = x.iter().map(|&e| e.max(0)).collect();
            let neg: Vec<i32> = x.iter().map(|&e| (-e).max(0)).collect();
            (abs, std::cmp::Reverse((deg, pos, neg)))
        };
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(k, _)| key(k));
        v
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<Vec<i32>, Rat> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let k: Vec<i32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(k).or_insert_with(Rat::zero) += &(ca * cb);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { n: self.n, terms: acc }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let vars: Vec<String> = k
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Tangent weight `t_i^{eps_i} t_j^{eps_j}` as an exponent vector.
fn weight(eps: &SignVector, i: usize, j: usize) -> Vec<i32> {
    let mut e = vec![0; eps.n()];
    e[i] = eps.signs()[i] as i32;
    e[j] = eps.signs()[j] as i32;
    e
}

/// `prod_{i<j} (1 - (t_i^{eps_i} t_j^{eps_j})^{-1})`.
pub fn k_euler_class(eps: &SignVector) -> LaurentPoly {
    let n = eps.n();
    let mut out = LaurentPoly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            let inv: Vec<i32> = weight(eps, i, j).iter().map(|e| -e).collect();
            let factor = &LaurentPoly::one(n) - &LaurentPoly::monomial(inv, Rat::one());
            out = &out * &factor;
        }
    }
    out
}

/// `s_lambda(t_1^{eps_1}, ..., t_n^{eps_n})`.
pub fn k_restrict_schur(lambda: &Partition, eps: &SignVector) -> LaurentPoly {
    let n = eps.n();
    let s = schur_bialternant(lambda, &VarId::zs(n));
    let mut out = LaurentPoly::zero(n);
    for (m, c) in s.terms() {
        let mut e = vec![0; n];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = m.exp(VarId::z(i as u32 + 1)) as i32 * eps.signs()[i] as i32;
        }
        out.add_term(e, c.clone());
    }
    out
}

/// Localization sum `sum_eps s_lambda(t^eps) / eu^K(eps)` over the fixed
/// points of `component`.
///
/// Each factor `1 - y^{-1}` with `y = y_+ / y_-` is rewritten as
/// `(y_+ - y_-) / y_+`, so every summand becomes a polynomial over a product
/// of binomials once a common monomial is cleared.
pub fn k_localize_pushforward(lambda: &Partition, component: Component) -> Result<LaurentPoly, KTheoryError> {
    let n = lambda.n();
    if n == 0 {
        return Err(KTheoryError::RankMismatch { parts: 0, n });
    }
    let points = enumerate_fixed_points(n, component);
    let mut numerators = Vec::with_capacity(points.len());
    let mut denominators = Vec::with_capacity(points.len());
    for eps in &points {
        let mut num = k_restrict_schur(lambda, eps);
        let mut dens = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = weight(eps, i, j);
                let pos: Vec<i32> = w.iter().map(|&e| e.max(0)).collect();
                let neg: Vec<i32> = w.iter().map(|&e| (-e).max(0)).collect();
                num = &num * &LaurentPoly::monomial(pos.clone(), Rat::one());
                let binomial = &LaurentPoly::monomial(pos, Rat::one()) - &LaurentPoly::monomial(neg, Rat::one());
                dens.push(binomial.to_poly().expect("binomial has nonnegative exponents"));
            }
        }
        numerators.push(num);
        denominators.push(dens);
    }
    let mut shift = vec![0; n];
    for num in &numerators {
        for (s, m) in shift.iter_mut().zip(num.min_exponents()) {
            *s = (*s).max(-m);
        }
    }
    let mut terms = Vec::with_capacity(points.len());
    for (num, dens) in numerators.iter().zip(denominators) {
        let poly = num.shift(&shift).to_poly().expect("shift clears negative exponents");
        terms.push(FactoredRatFunc::new(poly, dens.into_iter().map(|d| (d, 1)))?);
    }
    let total = FactoredRatFunc::sum(&terms);
    let poly = total
        .to_poly()
        .map_err(|_| KTheoryError::NotLaurentPolynomial(total.to_string()))?;
    let back: Vec<i32> = shift.iter().map(|s| -s).collect();
    Ok(LaurentPoly::from_poly(&poly, n).shift(&back))
}

/// True iff the plus and minus push-forwards of `S_lambda(R^dual)` coincide.
pub fn k_component_equality_check(lambda: &Partition) -> Result<bool, KTheoryError> {
    Ok(k_localize_pushforward(lambda, Component::Plus)? == k_localize_pushforward(lambda, Component::Minus)?)
}
