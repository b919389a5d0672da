use std::collections::HashMap;
use std::fmt;

use super::{AlgebraError, Monomial, MultiPoly, Rat, VarId};

/// Splits a nonzero polynomial into a scalar and a list of normalized
/// factors (leading coefficient 1 in graded-lex order), with repetition.
///
/// Monomial content is split into single variables and binomials of the form
/// `m1^2 - s^2 m2^2` are split as a difference of squares, recursively. No
/// other factorization is attempted.
pub fn split_factor(f: &MultiPoly) -> Result<(Rat, Vec<MultiPoly>), AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if let Some(c) = f.constant_value() {
        return Ok((c, Vec::new()));
    }
    let mut out = Vec::new();
    let content = f.monomial_content();
    for (v, e) in content.iter() {
        out.extend(std::iter::repeat_n(MultiPoly::var(v), e as usize));
    }
    let f = if content.is_one() {
        f.clone()
    } else {
        f.exact_div(&MultiPoly::term(content, Rat::one()))?
    };
    let lc = f.leading_term().map(|(_, c)| c.clone()).unwrap();
    let f = f.scale(&lc.recip());
    if f.is_constant() {
        return Ok((lc, out));
    }
    if let Some((a, b)) = difference_of_squares(&f) {
        let (ca, fa) = split_factor(&a)?;
        let (cb, fb) = split_factor(&b)?;
        out.extend(fa);
        out.extend(fb);
        return Ok((lc * ca * cb, out));
    }
    out.push(f);
    Ok((lc, out))
}

fn monomial_sqrt(m: &Monomial) -> Option<Monomial> {
    let half = |v: &[u32]| -> Option<Vec<u32>> { v.iter().map(|e| (e % 2 == 0).then_some(e / 2)).collect() };
    Some(Monomial::from_exps(&half(m.t_exps())?, &half(m.z_exps())?))
}

/// For monic `m1^2 - c m2^2` with `c` a rational square, returns
/// `(m1 - s m2, m1 + s m2)`.
fn difference_of_squares(f: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    if f.num_terms() != 2 {
        return None;
    }
    let mut terms = f.terms().rev();
    let (m1, c1) = terms.next()?;
    let (m2, c2) = terms.next()?;
    debug_assert!(c1.is_one());
    let s = (-c2).sqrt_exact()?;
    let r1 = MultiPoly::term(monomial_sqrt(m1)?, Rat::one());
    let r2 = MultiPoly::term(monomial_sqrt(m2)?, s);
    Some((&r1 - &r2, &r1 + &r2))
}

/// Decides `f | p` by substituting the root of `f` when `f` is linear in a
/// variable with a constant coefficient and that root is a single term.
fn quick_divisibility(f: &MultiPoly, p: &MultiPoly) -> Option<bool> {
    let v = f.vars().into_iter().find(|v| f.degree_in(*v) == 1)?;
    let c = f.coefficients_in(v);
    let slope = c[1].constant_value()?;
    if c[0].num_terms() > 1 {
        return None;
    }
    let root = c[0].scale(&(-slope.recip()));
    Some(p.substitute_one(v, &root).is_zero())
}

/// A rational function `numerator / prod(factor^mult)`.
///
/// Denominator factors are kept normalized (monic, split as far as
/// [`split_factor`] goes) and distinct. Two values are compared by
/// cross-multiplication, see [`FactoredRatFunc::semantic_eq`].
#[derive(Clone, Default)]
pub struct FactoredRatFunc {
    numerator: MultiPoly,
    factors: Vec<(MultiPoly, u32)>,
}

impl FactoredRatFunc {
    pub fn zero() -> Self {
        FactoredRatFunc::default()
    }

    pub fn one() -> Self {
        FactoredRatFunc::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        FactoredRatFunc {
            numerator: p,
            factors: Vec::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        FactoredRatFunc::from_poly(MultiPoly::constant(c))
    }

    /// `numerator / prod(f^m)` for the given factors, normalized and with
    /// common factors cancelled.
    pub fn new(
        numerator: MultiPoly,
        denominator: impl IntoIterator<Item = (MultiPoly, u32)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = FactoredRatFunc::from_poly(numerator);
        for (f, m) in denominator {
            out.push_factor(&f, m)?;
        }
        out.cancel();
        Ok(out)
    }

    fn push_factor(&mut self, f: &MultiPoly, mult: u32) -> Result<(), AlgebraError> {
        if mult == 0 {
            return Ok(());
        }
        let (c, parts) = split_factor(f)?;
        if !c.is_one() {
            self.numerator = self.numerator.scale(&c.pow(mult).recip());
        }
        for p in parts {
            self.insert_normalized(p, mult);
        }
        Ok(())
    }

    fn insert_normalized(&mut self, p: MultiPoly, mult: u32) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += mult,
            None => self.factors.push((p, mult)),
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn factors(&self) -> &[(MultiPoly, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.is_empty()
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> MultiPoly {
        self.factors.iter().map(|(f, m)| f.pow(*m)).product()
    }

    /// Removes every denominator factor that divides the numerator.
    pub fn cancel(&mut self) {
        if self.numerator.is_zero() {
            self.factors.clear();
            return;
        }
        for (f, m) in self.factors.iter_mut() {
            while *m > 0 {
                if quick_divisibility(f, &self.numerator) == Some(false) {
                    break;
                }
                match self.numerator.exact_div(f) {
                    Ok(q) => {
                        self.numerator = q;
                        *m -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
        self.factors.retain(|(_, m)| *m > 0);
    }

    /// Divides by an arbitrary nonzero polynomial.
    pub fn divide_by(&self, p: &MultiPoly) -> Result<FactoredRatFunc, AlgebraError> {
        let mut out = self.clone();
        out.push_factor(p, 1)?;
        out.cancel();
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> FactoredRatFunc {
        if c.is_zero() {
            return FactoredRatFunc::zero();
        }
        FactoredRatFunc {
            numerator: self.numerator.scale(c),
            factors: self.factors.clone(),
        }
    }

    pub fn neg(&self) -> FactoredRatFunc {
        self.scale(&Rat::from(-1))
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> FactoredRatFunc {
        let mut out = FactoredRatFunc {
            numerator: &self.numerator * p,
            factors: self.factors.clone(),
        };
        out.cancel();
        out
    }

    pub fn mul(&self, other: &FactoredRatFunc) -> FactoredRatFunc {
        let mut out = FactoredRatFunc {
            numerator: &self.numerator * &other.numerator,
            factors: self.factors.clone(),
        };
        for (f, m) in &other.factors {
            out.insert_normalized(f.clone(), *m);
        }
        out.cancel();
        out
    }

    pub fn add(&self, other: &FactoredRatFunc) -> FactoredRatFunc {
        FactoredRatFunc::sum([self, other])
    }

    pub fn sub(&self, other: &FactoredRatFunc) -> FactoredRatFunc {
        FactoredRatFunc::sum([self.clone(), other.neg()].iter())
    }

    /// Sum over a common denominator (least common multiple of the factor
    /// multisets), cancelling once at the end.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a FactoredRatFunc>) -> FactoredRatFunc {
        let items: Vec<&FactoredRatFunc> = items.into_iter().filter(|x| !x.is_zero()).collect();
        let mut common: Vec<(MultiPoly, u32)> = Vec::new();
        for item in &items {
            for (f, m) in &item.factors {
                match common.iter_mut().find(|(g, _)| g == f) {
                    Some((_, cm)) => *cm = (*cm).max(*m),
                    None => common.push((f.clone(), *m)),
                }
            }
        }
        let mut numerator = MultiPoly::zero();
        for item in &items {
            let cofactor: MultiPoly = common
                .iter()
                .map(|(f, cm)| {
                    let own = item.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, m)| *m);
                    f.pow(cm - own)
                })
                .product();
            numerator = &numerator + &(&item.numerator * &cofactor);
        }
        let mut out = FactoredRatFunc {
            numerator,
            factors: common,
        };
        out.cancel();
        out
    }

    /// Simultaneous substitution in numerator and denominator factors.
    pub fn substitute(&self, bindings: &HashMap<VarId, MultiPoly>) -> Result<FactoredRatFunc, AlgebraError> {
        let mut out = FactoredRatFunc::from_poly(self.numerator.substitute(bindings));
        for (f, m) in &self.factors {
            out.push_factor(&f.substitute(bindings), *m)?;
        }
        out.cancel();
        Ok(out)
    }

    pub fn involves(&self, v: VarId) -> bool {
        self.numerator.involves(v) || self.factors.iter().any(|(f, _)| f.involves(v))
    }

    /// The polynomial equal to `self`, if every denominator factor cancels.
    pub fn to_poly(&self) -> Result<MultiPoly, AlgebraError> {
        let mut c = self.clone();
        c.cancel();
        if c.factors.is_empty() {
            Ok(c.numerator)
        } else {
            Err(AlgebraError::NotPolynomial(c.to_string()))
        }
    }

    /// Equality of the represented rational functions.
    pub fn semantic_eq(&self, other: &FactoredRatFunc) -> bool {
        let lhs = &self.numerator * &other.denominator();
        let rhs = &other.numerator * &self.denominator();
        lhs == rhs
    }
}

impl From<MultiPoly> for FactoredRatFunc {
    fn from(p: MultiPoly) -> Self {
        FactoredRatFunc::from_poly(p)
    }
}

impl fmt::Display for FactoredRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({}) / (", self.numerator)?;
        for (i, (p, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *m == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{m}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for FactoredRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: u32) -> MultiPoly {
        MultiPoly::t(i)
    }
    fn z(i: u32) -> MultiPoly {
        MultiPoly::z(i)
    }

    #[test]
    fn splits_quadratic_denominators() {
        let f = &(&t(1) * &t(1)) - &(&z(1) * &z(1));
        let (c, parts) = split_factor(&f).unwrap();
        assert_eq!(c, Rat::from(-1));
        assert_eq!(parts.len(), 2);
        let prod: MultiPoly = parts.into_iter().product();
        assert_eq!(prod.scale(&c), f);
    }

    #[test]
    fn splits_monomial_content_and_scalars() {
        let f = (&t(1) * &t(2)).scale(&Rat::from(4)) + (&t(1) * &t(1)).scale(&Rat::from(2));
        let (c, parts) = split_factor(&f).unwrap();
        let prod: MultiPoly = parts.iter().cloned().product();
        assert_eq!(prod.scale(&c), f);
        assert!(parts.contains(&t(1)));
        assert_eq!(split_factor(&MultiPoly::zero()), Err(AlgebraError::ZeroDenominator));
    }

    #[test]
    fn identity_and_cancellation() {
        let a = FactoredRatFunc::new(t(1), [(&t(1) - &z(1), 1)]).unwrap();
        assert!(a.add(&FactoredRatFunc::zero()).semantic_eq(&a));
        let inv = FactoredRatFunc::new(MultiPoly::one(), [(&t(1) - &z(1), 1)]).unwrap();
        let prod = inv.mul_poly(&(&t(1) - &z(1)));
        assert_eq!(prod.to_poly().unwrap(), MultiPoly::one());
    }

    #[test]
    fn to_poly_cases() {
        let sq = &(&t(1) * &t(1)) - &(&z(1) * &z(1));
        let f = FactoredRatFunc::new(sq, [(&t(1) - &z(1), 1)]).unwrap();
        assert_eq!(f.to_poly().unwrap(), &t(1) + &z(1));
        let g = FactoredRatFunc::new(&t(1) + &t(2), [(&t(1) - &t(2), 1)]).unwrap();
        assert!(matches!(g.to_poly(), Err(AlgebraError::NotPolynomial(_))));
    }

    #[test]
    fn localization_terms_of_the_s21_example() {
        // phi = s_{2,1}; plus-component fixed points (t1, t2) and (-t1, -t2)
        let tt = &t(1) * &t(2);
        let a = FactoredRatFunc::new(&tt * &(&t(1) + &t(2)), [(&t(1) + &t(2), 1)]).unwrap();
        let b = FactoredRatFunc::new(&tt * &(-&t(1) - &t(2)), [(-&t(1) - &t(2), 1)]).unwrap();
        assert_eq!(a.add(&b).to_poly().unwrap(), tt.scale(&Rat::from(2)));
    }

    #[test]
    fn semantic_equality_ignores_representation() {
        let a = FactoredRatFunc::new(t(1), [(&t(1) - &t(2), 1)]).unwrap();
        let b = FactoredRatFunc::new(&t(1) * &t(3), [(&t(1) - &t(2), 1), (t(3), 1)]).unwrap();
        assert!(a.semantic_eq(&b));
        let c = FactoredRatFunc::new(-&t(1), [(&t(2) - &t(1), 1)]).unwrap();
        assert!(a.semantic_eq(&c));
        assert!(!a.semantic_eq(&FactoredRatFunc::from_poly(t(1))));
    }

    #[test]
    fn substitution_rejects_vanishing_denominators() {
        let f = FactoredRatFunc::new(MultiPoly::one(), [(&t(1) - &z(1), 1)]).unwrap();
        let b: HashMap<_, _> = [(VarId::z(1), t(1))].into();
        assert_eq!(f.substitute(&b).unwrap_err(), AlgebraError::ZeroDenominator);
    }
}
