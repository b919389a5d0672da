//! Residues of rational functions with factored denominators.
//!
//! Two independent algorithms compute the residue at infinity in one
//! variable:
//!
//! * [`residue_at_infinity_polesum`]: minus the sum of the residues at the
//!   finite poles, every pole being simple and linear.
//! * [`residue_at_infinity_series`]: minus the coefficient of `z^-1` in the
//!   expansion at `z = infinity`, obtained by inverting the denominator as a
//!   power series in `1/z`.
//!
//! The iterated residue applies one of them to `z_1`, then `z_2`, and so on.

use std::collections::HashSet;

use thiserror::Error;

use crate::algebra::{AlgebraError, FactoredRatFunc, MultiPoly, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("not a simple pole of the integrand at {var} = {at}")]
    NotSimplePole { var: VarId, at: String },
    #[error("denominator factor {factor} is not linear in {var}")]
    NonlinearFactor { var: VarId, factor: String },
    #[error("pole of {factor} in {var} is not a polynomial")]
    NonPolynomialRoot { var: VarId, factor: String },
    #[error("pole-sum and series residues disagree in {var}")]
    AlgorithmMismatch { var: VarId },
    #[error("residue order repeats {0}")]
    RepeatedVariable(VarId),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidueAlgorithm {
    #[default]
    PoleSum,
    Series,
}

/// Iteration order for [`iterated_residue_at_infinity`], innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueOrder {
    vars: Vec<VarId>,
}

impl ResidueOrder {
    pub fn new(vars: Vec<VarId>) -> Result<Self, ResidueError> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(*v) {
                return Err(ResidueError::RepeatedVariable(*v));
            }
        }
        Ok(ResidueOrder { vars })
    }

    /// `z_1, ..., z_n`.
    pub fn standard(n: usize) -> Self {
        ResidueOrder { vars: VarId::zs(n) }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }
}

/// `((var - a) f)|_{var = a}` at a simple pole coming from a single linear
/// denominator factor.
pub fn residue_at_simple_pole(f: &FactoredRatFunc, var: VarId, a: &MultiPoly) -> Result<FactoredRatFunc, ResidueError> {
    let not_simple = || ResidueError::NotSimplePole { var, at: a.to_string() };
    let mut vanishing = None;
    let mut others = Vec::with_capacity(f.factors().len());
    for (g, m) in f.factors() {
        if !g.involves(var) {
            others.push((g.clone(), *m));
            continue;
        }
        let g_at = g.substitute_one(var, a);
        if g_at.is_zero() {
            if vanishing.is_some() || *m > 1 {
                return Err(not_simple());
            }
            vanishing = Some(g);
        } else {
            others.push((g_at, *m));
        }
    }
    let g = vanishing.ok_or_else(not_simple)?;
    if g.degree_in(var) != 1 {
        return Err(ResidueError::NonlinearFactor {
            var,
            factor: g.to_string(),
        });
    }
    let slope = g.coefficients_in(var).swap_remove(1);
    others.push((slope, 1));
    Ok(FactoredRatFunc::new(f.numerator().substitute_one(var, a), others)?)
}

/// The root of a denominator factor that is linear in `var`.
fn linear_root(g: &MultiPoly, var: VarId) -> Result<MultiPoly, ResidueError> {
    if g.degree_in(var) != 1 {
        return Err(ResidueError::NonlinearFactor {
            var,
            factor: g.to_string(),
        });
    }
    let c = g.coefficients_in(var);
    let minus_d = -&c[0];
    match c[1].constant_value() {
        Some(k) => Ok(minus_d.scale(&k.recip())),
        None => minus_d.exact_div(&c[1]).map_err(|_| ResidueError::NonPolynomialRoot {
            var,
            factor: g.to_string(),
        }),
    }
}

/// Finite poles of `f` in `var`, one per distinct denominator factor.
pub fn finite_poles(f: &FactoredRatFunc, var: VarId) -> Result<Vec<MultiPoly>, ResidueError> {
    f.factors()
        .iter()
        .filter(|(g, _)| g.involves(var))
        .map(|(g, _)| linear_root(g, var))
        .collect()
}

/// Residue at infinity as minus the sum of all finite residues.
pub fn residue_at_infinity_polesum(f: &FactoredRatFunc, var: VarId) -> Result<FactoredRatFunc, ResidueError> {
    let residues = finite_poles(f, var)?
        .iter()
        .map(|a| residue_at_simple_pole(f, var, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FactoredRatFunc::sum(&residues).neg())
}

/// Residue at infinity as minus the coefficient of `var^-1` in the expansion
/// of `f` in powers of `1/var`.
///
/// With `f = N / P` where `P = A var^D + ... + P_0` collects the denominator
/// factors involving `var`, `1/P = var^-D sum_k r_k / A^(k+1) var^-k` with
/// `r_0 = 1` and `r_k = -sum_{j=1..min(k,D)} P_{D-j} r_{k-j} A^(j-1)`. Only
/// the terms up to order `deg N - D + 1` can reach `var^-1`.
pub fn residue_at_infinity_series(f: &FactoredRatFunc, var: VarId) -> Result<FactoredRatFunc, ResidueError> {
    if f.is_zero() {
        return Ok(FactoredRatFunc::zero());
    }
    let mut rest = Vec::new();
    let mut p = MultiPoly::one();
    for (g, m) in f.factors() {
        if g.involves(var) {
            p = &p * &g.pow(*m);
        } else {
            rest.push((g.clone(), *m));
        }
    }
    let pc = p.coefficients_in(var);
    let d = pc.len() - 1;
    let nc = f.numerator().coefficients_in(var);
    let m = nc.len() - 1;
    if m + 1 < d {
        return Ok(FactoredRatFunc::zero());
    }
    let k_max = m + 1 - d;
    let lead = &pc[d];
    let lead_pows: Vec<MultiPoly> = {
        let mut v = vec![MultiPoly::one()];
        for i in 1..=k_max.max(d) {
            let next = &v[i - 1] * lead;
            v.push(next);
        }
        v
    };
    let mut r: Vec<MultiPoly> = Vec::with_capacity(k_max + 1);
    r.push(MultiPoly::one());
    for k in 1..=k_max {
        let mut acc = MultiPoly::zero();
        for j in 1..=k.min(d) {
            acc = &acc + &(&(&pc[d - j] * &r[k - j]) * &lead_pows[j - 1]);
        }
        r.push(-acc);
    }
    let mut coeff = MultiPoly::zero();
    for (mm, n_m) in nc.iter().enumerate().skip(d.saturating_sub(1)) {
        if n_m.is_zero() {
            continue;
        }
        let k = mm + 1 - d;
        coeff = &coeff + &(&(n_m * &r[k]) * &lead_pows[k_max - k]);
    }
    rest.push((lead.clone(), (k_max + 1) as u32));
    Ok(FactoredRatFunc::new(-coeff, rest)?)
}

pub fn residue_at_infinity(
    f: &FactoredRatFunc,
    var: VarId,
    algorithm: ResidueAlgorithm,
) -> Result<FactoredRatFunc, ResidueError> {
    match algorithm {
        ResidueAlgorithm::PoleSum => residue_at_infinity_polesum(f, var),
        ResidueAlgorithm::Series => residue_at_infinity_series(f, var),
    }
}

/// `res_{v_k = inf}( ... res_{v_1 = inf} f ... )` for `order = (v_1, ..., v_k)`.
pub fn iterated_residue_at_infinity(
    f: &FactoredRatFunc,
    order: &ResidueOrder,
    algorithm: ResidueAlgorithm,
) -> Result<FactoredRatFunc, ResidueError> {
    order
        .vars
        .iter()
        .try_fold(f.clone(), |acc, v| residue_at_infinity(&acc, *v, algorithm))
}

/// Iterated residue where every step is computed by both algorithms and the
/// two results are compared before moving on.
pub fn iterated_residue_cross_checked(
    f: &FactoredRatFunc,
    order: &ResidueOrder,
) -> Result<FactoredRatFunc, ResidueError> {
    let mut acc = f.clone();
    for v in &order.vars {
        let by_poles = residue_at_infinity_polesum(&acc, *v)?;
        let by_series = residue_at_infinity_series(&acc, *v)?;
        if !by_poles.semantic_eq(&by_series) {
            return Err(ResidueError::AlgorithmMismatch { var: *v });
        }
        acc = by_poles;
    }
    Ok(acc)
}
