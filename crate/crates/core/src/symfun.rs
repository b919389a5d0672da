//! Partitions and symmetric polynomials.
//!
//! Schur polynomials come from two independent constructions: the
//! bialternant quotient `det[x_j^(l_i + n - i)] / prod_{i<j}(x_i - x_j)` and
//! the sum over semistandard Young tableaux. The second is only used as an
//! oracle for the first.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{Monomial, MultiPoly, Rat, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymfunError {
    #[error("parts {0:?} are not weakly decreasing")]
    NotWeaklyDecreasing(Vec<u32>),
    #[error("partition {parts:?} has more than {n} nonzero parts")]
    TooManyParts { parts: Vec<u32>, n: usize },
    #[error("polynomial is not symmetric in the requested variables")]
    NotSymmetric,
    #[error("polynomial involves {0}, which is not among the expansion variables")]
    ForeignVariable(VarId),
}

/// A partition, zero-padded to the ambient rank.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Pads `parts` with zeros to length `n`. Trailing zeros beyond `n` are
    /// accepted; further nonzero parts are not.
    pub fn new(parts: &[u32], n: usize) -> Result<Self, SymfunError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SymfunError::NotWeaklyDecreasing(parts.to_vec()));
        }
        if parts.iter().skip(n).any(|&p| p > 0) {
            return Err(SymfunError::TooManyParts {
                parts: parts.to_vec(),
                n,
            });
        }
        let mut padded: Vec<u32> = parts.iter().copied().take(n).collect();
        padded.resize(n, 0);
        Ok(Partition { parts: padded })
    }

    pub fn empty(n: usize) -> Self {
        Partition { parts: vec![0; n] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The ambient rank (padded length).
    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// All partitions with at most `n` parts, each at most `bound`, in
    /// increasing lexicographic order of the parts.
    pub fn in_box(n: usize, bound: u32) -> Vec<Partition> {
        fn rec(prefix: &mut Vec<u32>, n: usize, max: u32, out: &mut Vec<Partition>) {
            if prefix.len() == n {
                out.push(Partition { parts: prefix.clone() });
                return;
            }
            for p in 0..=max {
                prefix.push(p);
                rec(prefix, n, p, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), n, bound, &mut out);
        out.sort_by_key(|p| p.parts.clone());
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The staircase `(k, k-1, ..., 1)` padded to length `n`.
pub fn rho(k: usize, n: usize) -> Partition {
    assert!(k <= n, "rho({k}) does not fit in rank {n}");
    let mut parts: Vec<u32> = (1..=k as u32).rev().collect();
    parts.resize(n, 0);
    Partition { parts }
}

/// Which case of the Schur push-forward formula a partition falls in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParityCase {
    /// `lambda = 2 mu + rho(n-1)`.
    RhoNMinus1(Partition),
    /// `lambda = 2 mu + rho(n)`.
    RhoN(Partition),
    Neither,
}

impl ParityCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ParityCase::RhoNMinus1(_) => "RhoNMinus1",
            ParityCase::RhoN(_) => "RhoN",
            ParityCase::Neither => "Neither",
        }
    }

    pub fn mu(&self) -> Option<&Partition> {
        match self {
            ParityCase::RhoNMinus1(mu) | ParityCase::RhoN(mu) => Some(mu),
            ParityCase::Neither => None,
        }
    }
}

fn half_difference(lambda: &Partition, staircase: &Partition) -> Option<Partition> {
    let mut mu = Vec::with_capacity(lambda.n());
    for (&l, &r) in lambda.parts.iter().zip(&staircase.parts) {
        let d = l.checked_sub(r)?;
        if d % 2 != 0 {
            return None;
        }
        mu.push(d / 2);
    }
    if mu.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    Some(Partition { parts: mu })
}

pub fn decompose_parity(lambda: &Partition) -> ParityCase {
    let n = lambda.n();
    if n == 0 {
        return ParityCase::Neither;
    }
    if let Some(mu) = half_difference(lambda, &rho(n - 1, n)) {
        return ParityCase::RhoNMinus1(mu);
    }
    if let Some(mu) = half_difference(lambda, &rho(n, n)) {
        return ParityCase::RhoN(mu);
    }
    ParityCase::Neither
}

/// Heap's algorithm over index permutations, with signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i64;
    let mut out = vec![(perm.clone(), sign)];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `det[x_j^(a_i)]` expanded as a sum of monomials.
fn alternant(exponents: &[u32], vars: &[VarId]) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (perm, sign) in signed_permutations(vars.len()) {
        let mut m = Monomial::one();
        for (i, &j) in perm.iter().enumerate() {
            m = m.mul(&Monomial::var(vars[j], exponents[i]));
        }
        out.add_term(m, Rat::from(sign));
    }
    out
}

/// `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde(vars: &[VarId]) -> MultiPoly {
    let mut out = MultiPoly::one();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out = &out * &(&MultiPoly::var(vars[i]) - &MultiPoly::var(vars[j]));
        }
    }
    out
}

pub fn schur_bialternant(lambda: &Partition, vars: &[VarId]) -> MultiPoly {
    let n = vars.len();
    assert_eq!(lambda.n(), n, "partition length must match the variable count");
    let exps: Vec<u32> = lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &l)| l + (n - 1 - i) as u32)
        .collect();
    alternant(&exps, vars)
        .exact_div(&vandermonde(vars))
        .expect("alternant is divisible by the Vandermonde product")
}

/// Sum of `x^T` over semistandard Young tableaux `T` of shape `lambda` with
/// entries in `1..=n`.
pub fn schur_tableaux(lambda: &Partition, vars: &[VarId]) -> MultiPoly {
    let n = vars.len();
    let shape: Vec<usize> = lambda.parts.iter().map(|&p| p as usize).filter(|&p| p > 0).collect();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    let mut out = MultiPoly::zero();

    fn fill(
        k: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        n: usize,
        vars: &[VarId],
        out: &mut MultiPoly,
    ) {
        if k == cells.len() {
            let mut m = Monomial::one();
            for row in grid.iter() {
                for &e in row {
                    m = m.mul(&Monomial::var(vars[e - 1], 1));
                }
            }
            out.add_term(m, Rat::one());
            return;
        }
        let (r, c) = cells[k];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for e in lo_row.max(lo_col)..=n {
            grid[r][c] = e;
            fill(k + 1, cells, grid, n, vars, out);
        }
        grid[r][c] = 0;
    }

    fill(0, &cells, &mut grid, n, vars, &mut out);
    out
}

/// Coefficients `c_lambda` with `p = sum c_lambda s_lambda(vars)`.
pub fn schur_expand(p: &MultiPoly, vars: &[VarId]) -> Result<BTreeMap<Partition, Rat>, SymfunError> {
    let mut vars = vars.to_vec();
    vars.sort();
    for v in p.vars() {
        if !vars.contains(&v) {
            return Err(SymfunError::ForeignVariable(v));
        }
    }
    if !p.is_symmetric_in(&vars) {
        return Err(SymfunError::NotSymmetric);
    }
    let n = vars.len();
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some((m, c)) = rest.leading_term() {
        // the leading monomial of a symmetric polynomial carries its largest
        // exponent on the largest variable
        let parts: Vec<u32> = vars.iter().rev().map(|v| m.exp(*v)).collect();
        let lambda = Partition::new(&parts, n).map_err(|_| SymfunError::NotSymmetric)?;
        let c = c.clone();
        rest = &rest - &schur_bialternant(&lambda, &vars).scale(&c);
        out.insert(lambda, c);
    }
    Ok(out)
}

/// Re-sums a Schur expansion.
pub fn schur_sum(coeffs: &BTreeMap<Partition, Rat>, vars: &[VarId]) -> MultiPoly {
    let mut vars = vars.to_vec();
    vars.sort();
    coeffs.iter().map(|(l, c)| schur_bialternant(l, &vars).scale(c)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Elementary,
    PowerSum,
    Complete,
}

pub fn elementary_power_complete(k: u32, kind: BasisKind, vars: &[VarId]) -> MultiPoly {
    match kind {
        BasisKind::PowerSum => vars
            .iter()
            .map(|v| MultiPoly::term(Monomial::var(*v, k), Rat::one()))
            .sum(),
        BasisKind::Elementary => {
            // e_k as the coefficient of u^k in prod (1 + x_i u)
            let mut coeffs = vec![MultiPoly::one()];
            for v in vars {
                let x = MultiPoly::var(*v);
                let mut next = coeffs.clone();
                next.push(MultiPoly::zero());
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] = &next[i + 1] + &(c * &x);
                }
                coeffs = next;
            }
            coeffs.get(k as usize).cloned().unwrap_or_default()
        }
        BasisKind::Complete => {
            // h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)
            let k = k as usize;
            let mut h = vec![MultiPoly::zero(); k + 1];
            h[0] = MultiPoly::one();
            for v in vars {
                let x = MultiPoly::var(*v);
                for d in 1..=k {
                    h[d] = &h[d] + &(&x * &h[d - 1]);
                }
            }
            h[k].clone()
        }
    }
}
