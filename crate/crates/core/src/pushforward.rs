//! Equivariant push-forwards from `OG(n, 2n)` and its two components to a
//! point.
//!
//! Torus fixed points are coordinate isotropic subspaces, encoded as sign
//! vectors `eps`; the restriction of `phi(R^dual)` to `eps` is
//! `phi(eps_1 t_1, ..., eps_n t_n)` and the tangent weights are
//! `eps_i t_i + eps_j t_j` for `i < j`. A fixed point lies on the plus
//! component iff `prod eps_i = +1`.
//!
//! Every route below computes the same polynomial in `t`:
//!
//! * `Oracle`: the localization sum over fixed points.
//! * `Long`: residue at infinity of the integrand with
//!   `prod_{i != j}(z_j - z_i) prod_{i<j}(z_i + z_j) prod z_i / prod_{i,j}(t_i^2 - z_j^2)`.
//! * `Short`: the reduced integrand
//!   `prod_{i<j}(z_j - z_i) prod z_i / prod_i(t_i^2 - z_i^2)`.
//! * `Dp`: `prod z_i^i prod_{i<j}(z_i^2 - z_j^2) / prod_{i,j}(t_i^2 - z_j^2)`,
//!   whole space only.
//! * `Closed`: the case formula for Schur classes.
//!
//! On a single component the residue integrands carry the correction factor
//! `(prod t_i +- prod z_i) / (2 prod t_i)`, which is 1 on the fixed points of
//! that component and 0 on the others.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{AlgebraError, FactoredRatFunc, Monomial, MultiPoly, Rat, VarClass, VarId};
use crate::residue::{
    iterated_residue_at_infinity, iterated_residue_cross_checked, ResidueAlgorithm, ResidueError, ResidueOrder,
};
use crate::symfun::{decompose_parity, schur_bialternant, schur_expand, ParityCase, Partition, SymfunError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PushforwardError {
    #[error("route {route} is not available on component {component}")]
    UnsupportedRoute { route: Route, component: Component },
    #[error("class is not symmetric in z1..z{0}")]
    NotSymmetric(usize),
    #[error("class may only involve z1..z{n}, found {var}")]
    ForeignVariable { var: VarId, n: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("sign vector entries must be +1 or -1")]
    BadSign,
    #[error("result is not of the form A(t^2) + t1...tn B(t^2)")]
    NotWeylInvariant,
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Symfun(#[from] SymfunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Plus,
    Minus,
    Full,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Plus => "plus",
            Component::Minus => "minus",
            Component::Full => "full",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Component {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Component::Plus),
            "minus" | "-" => Ok(Component::Minus),
            "full" => Ok(Component::Full),
            _ => Err(format!("unknown component '{s}' (expected plus, minus or full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Oracle,
    Long,
    Short,
    Dp,
    Closed,
}

impl Route {
    pub const ALL: [Route; 5] = [Route::Oracle, Route::Long, Route::Short, Route::Dp, Route::Closed];

    pub fn name(self) -> &'static str {
        match self {
            Route::Oracle => "oracle",
            Route::Long => "long",
            Route::Short => "short",
            Route::Dp => "dp",
            Route::Closed => "closed",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown route '{s}' (expected oracle, long, short, dp or closed)"))
    }
}

/// A torus fixed point of `OG(n, 2n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(eps: Vec<i8>) -> Result<Self, PushforwardError> {
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(PushforwardError::BadSign);
        }
        Ok(SignVector(eps))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `Plus` or `Minus`, by the parity of the number of `-1` entries.
    pub fn component(&self) -> Component {
        if self.0.iter().filter(|&&e| e < 0).count() % 2 == 0 {
            Component::Plus
        } else {
            Component::Minus
        }
    }

    /// `z_i -> eps_i t_i`.
    pub fn bindings(&self) -> HashMap<VarId, MultiPoly> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let i = i as u32 + 1;
                (VarId::z(i), MultiPoly::t(i).scale(&Rat::from(e as i64)))
            })
            .collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *e > 0 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

/// A characteristic class of the dual tautological bundle, given as a
/// symmetric polynomial in `z_1..z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharClass {
    phi: MultiPoly,
    n: usize,
}

impl CharClass {
    pub fn new(phi: MultiPoly, n: usize) -> Result<Self, PushforwardError> {
        if n == 0 {
            return Err(PushforwardError::ZeroRank);
        }
        for v in phi.vars() {
            if v.class != VarClass::Z || v.index as usize > n {
                return Err(PushforwardError::ForeignVariable { var: v, n });
            }
        }
        if !phi.is_symmetric_in(&VarId::zs(n)) {
            return Err(PushforwardError::NotSymmetric(n));
        }
        Ok(CharClass { phi, n })
    }

    pub fn schur(lambda: &Partition) -> Self {
        let n = lambda.n();
        CharClass {
            phi: schur_bialternant(lambda, &VarId::zs(n)),
            n,
        }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The partition `lambda` when the class is exactly `s_lambda`.
    pub fn as_single_schur(&self) -> Option<Partition> {
        let expansion = schur_expand(&self.phi, &VarId::zs(self.n)).ok()?;
        match expansion.into_iter().collect::<Vec<_>>().as_slice() {
            [(lambda, c)] if c.is_one() => Some(lambda.clone()),
            _ => None,
        }
    }

    /// `phi(eps_1 t_1, ..., eps_n t_n)`.
    pub fn restrict(&self, eps: &SignVector) -> MultiPoly {
        self.phi.substitute(&eps.bindings())
    }
}

pub fn enumerate_fixed_points(n: usize, component: Component) -> Vec<SignVector> {
    (0u32..1 << n)
        .map(|mask| SignVector((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()))
        .filter(|eps| component == Component::Full || eps.component() == component)
        .collect()
}

fn signed_t(eps: &SignVector, i: usize) -> MultiPoly {
    MultiPoly::t(i as u32 + 1).scale(&Rat::from(eps.0[i] as i64))
}

/// The tangent weights `eps_i t_i + eps_j t_j`, `i < j`, at `eps`.
pub fn tangent_weights(eps: &SignVector) -> Vec<MultiPoly> {
    let n = eps.n();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| &signed_t(eps, i) + &signed_t(eps, j))
        .collect()
}

/// Equivariant Euler class of the tangent space at `eps`:
/// `prod_{i<j} (eps_i t_i + eps_j t_j)`.
pub fn euler_class(eps: &SignVector) -> MultiPoly {
    tangent_weights(eps).into_iter().product()
}

/// Localization: `sum_p phi|_p / eu(p)` over the fixed points of `component`.
pub fn localize_pushforward(phi: &CharClass, component: Component) -> Result<MultiPoly, PushforwardError> {
    let terms = enumerate_fixed_points(phi.n, component)
        .iter()
        .map(|eps| FactoredRatFunc::new(phi.restrict(eps), tangent_weights(eps).into_iter().map(|w| (w, 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FactoredRatFunc::sum(&terms).to_poly()?)
}

fn t_product(n: usize) -> MultiPoly {
    (1..=n as u32).map(MultiPoly::t).product()
}

fn z_product(n: usize) -> MultiPoly {
    (1..=n as u32).map(MultiPoly::z).product()
}

fn sq(p: &MultiPoly) -> MultiPoly {
    p * p
}

/// `(prod t_i + prod z_i) / (2 prod t_i)` for `Plus`, with `-` for `Minus`;
/// `1` for `Full`.
pub fn correction_factor(component: Component, n: usize) -> FactoredRatFunc {
    let tp = t_product(n);
    let zp = z_product(n);
    let num = match component {
        Component::Plus => &tp + &zp,
        Component::Minus => &tp - &zp,
        Component::Full => return FactoredRatFunc::one(),
    };
    FactoredRatFunc::new(num, [(tp.scale(&Rat::from(2)), 1)]).expect("prod t_i is nonzero")
}

/// A residue integrand together with the constant (in `z`) prefactor applied
/// after the residue.
#[derive(Debug, Clone)]
pub struct Integrand {
    pub prefactor: FactoredRatFunc,
    pub form: FactoredRatFunc,
}

fn factorial(n: usize) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, k| acc * Rat::from(k))
}

fn two_pow(k: usize) -> Rat {
    Rat::from(2).pow(k as u32)
}

/// The integrand of a residue route, exactly as it appears in the formula.
pub fn integrand(phi: &CharClass, component: Component, route: Route) -> Result<Integrand, PushforwardError> {
    let n = phi.n;
    let z = |i: usize| MultiPoly::z(i as u32 + 1);
    let t = |i: usize| MultiPoly::t(i as u32 + 1);
    let pairs = || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
    let tp = t_product(n);
    let zp = z_product(n);
    let component_numerator = match component {
        Component::Plus => &tp + &zp,
        Component::Minus => &tp - &zp,
        Component::Full => MultiPoly::one(),
    };
    let all_pairs_den = || {
        (0..n)
            .flat_map(move |i| (0..n).map(move |j| (&sq(&t(i)) - &sq(&z(j)), 1)))
            .collect::<Vec<_>>()
    };
    // component prefactor 2^(n-1) / prod t_i, whole space 2^n
    let base = |extra: Rat| -> Result<FactoredRatFunc, AlgebraError> {
        match component {
            Component::Full => Ok(FactoredRatFunc::constant(two_pow(n) * extra)),
            _ => FactoredRatFunc::new(MultiPoly::constant(two_pow(n - 1) * extra), [(tp.clone(), 1)]),
        }
    };
    let (prefactor, numerator, denominator) = match route {
        Route::Long => {
            let mut num = phi.phi.clone();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        num = &num * &(&z(j) - &z(i));
                    }
                }
            }
            for (i, j) in pairs() {
                num = &num * &(&z(i) + &z(j));
            }
            num = &(&num * &zp) * &component_numerator;
            (base(factorial(n).recip())?, num, all_pairs_den())
        }
        Route::Short => {
            let mut num = phi.phi.clone();
            for (i, j) in pairs() {
                num = &num * &(&z(j) - &z(i));
            }
            num = &(&num * &zp) * &component_numerator;
            let disc: Vec<(MultiPoly, u32)> = pairs().map(|(i, j)| (&sq(&t(j)) - &sq(&t(i)), 1)).collect();
            let prefactor = base(Rat::one())?.mul(&FactoredRatFunc::new(MultiPoly::one(), disc)?);
            let den = (0..n).map(|i| (&sq(&t(i)) - &sq(&z(i)), 1)).collect();
            (prefactor, num, den)
        }
        Route::Dp => {
            if component != Component::Full {
                return Err(PushforwardError::UnsupportedRoute { route, component });
            }
            let mut num = phi.phi.clone();
            for i in 0..n {
                num = num.mul_monomial(&Monomial::var(VarId::z(i as u32 + 1), i as u32 + 1));
            }
            for (i, j) in pairs() {
                num = &num * &(&sq(&z(i)) - &sq(&z(j)));
            }
            (base(Rat::one())?, num, all_pairs_den())
        }
        Route::Oracle | Route::Closed => {
            return Err(PushforwardError::UnsupportedRoute { route, component });
        }
    };
    Ok(Integrand {
        prefactor,
        form: FactoredRatFunc::new(numerator, denominator)?,
    })
}

/// How the iterated residue is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidueMode {
    #[default]
    PoleSum,
    Series,
    /// Both algorithms at every step, failing on any disagreement.
    CrossChecked,
}

pub fn residue_pushforward(phi: &CharClass, component: Component, route: Route) -> Result<MultiPoly, PushforwardError> {
    residue_pushforward_with(phi, component, route, ResidueMode::PoleSum)
}

pub fn residue_pushforward_with(
    phi: &CharClass,
    component: Component,
    route: Route,
    mode: ResidueMode,
) -> Result<MultiPoly, PushforwardError> {
    let Integrand { prefactor, form } = integrand(phi, component, route)?;
    let order = ResidueOrder::standard(phi.n);
    let res = match mode {
        ResidueMode::PoleSum => iterated_residue_at_infinity(&form, &order, ResidueAlgorithm::PoleSum)?,
        ResidueMode::Series => iterated_residue_at_infinity(&form, &order, ResidueAlgorithm::Series)?,
        ResidueMode::CrossChecked => iterated_residue_cross_checked(&form, &order)?,
    };
    Ok(prefactor.mul(&res).to_poly()?)
}

/// `s_mu(t_1^2, ..., t_n^2)`.
pub fn schur_in_squares(mu: &Partition) -> MultiPoly {
    let n = mu.n();
    let squares: HashMap<VarId, MultiPoly> = (1..=n as u32).map(|i| (VarId::t(i), sq(&MultiPoly::t(i)))).collect();
    schur_bialternant(mu, &VarId::ts(n)).substitute(&squares)
}

/// Closed form for `pi_* s_lambda` on one component:
/// `2^(n-1) s_mu(t^2)` when `lambda = 2 mu + rho(n-1)`,
/// `+-2^(n-1) t_1...t_n s_mu(t^2)` when `lambda = 2 mu + rho(n)` (plus sign on
/// `Plus`), and zero otherwise. On `Full` the two components are added.
pub fn schur_pushforward_closed(lambda: &Partition, component: Component) -> MultiPoly {
    let n = lambda.n();
    let scale = two_pow(n - 1);
    match (decompose_parity(lambda), component) {
        (ParityCase::RhoNMinus1(mu), Component::Full) => schur_in_squares(&mu).scale(&(scale * Rat::from(2))),
        (ParityCase::RhoNMinus1(mu), _) => schur_in_squares(&mu).scale(&scale),
        (ParityCase::RhoN(_), Component::Full) => MultiPoly::zero(),
        (ParityCase::RhoN(mu), c) => {
            let sign = if c == Component::Plus {
                Rat::one()
            } else {
                Rat::from(-1)
            };
            (&t_product(n) * &schur_in_squares(&mu)).scale(&(scale * sign))
        }
        (ParityCase::Neither, _) => MultiPoly::zero(),
    }
}

/// `p = sum_mu c_mu s_mu(t^2) + t_1...t_n sum_nu d_nu s_nu(t^2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchurT2Expansion {
    pub plain: BTreeMap<Partition, Rat>,
    pub with_t_factor: BTreeMap<Partition, Rat>,
}

impl SchurT2Expansion {
    /// Re-sums the expansion.
    pub fn to_poly(&self, n: usize) -> MultiPoly {
        let plain: MultiPoly = self.plain.iter().map(|(mu, c)| schur_in_squares(mu).scale(c)).sum();
        let odd: MultiPoly = self
            .with_t_factor
            .iter()
            .map(|(nu, c)| schur_in_squares(nu).scale(c))
            .sum();
        &plain + &(&t_product(n) * &odd)
    }
}

pub fn schur_t2_expand(p: &MultiPoly, n: usize) -> Result<SchurT2Expansion, PushforwardError> {
    let mut even = MultiPoly::zero();
    let mut odd = MultiPoly::zero();
    for (m, c) in p.terms() {
        if m.z_exps().iter().any(|&e| e > 0) {
            return Err(PushforwardError::NotWeylInvariant);
        }
        let exps: Vec<u32> = (1..=n as u32).map(|i| m.exp(VarId::t(i))).collect();
        if exps.iter().all(|e| e % 2 == 0) {
            let half: Vec<u32> = exps.iter().map(|e| e / 2).collect();
            even.add_term(Monomial::from_exps(&half, &[]), c.clone());
        } else if exps.iter().all(|e| e % 2 == 1) {
            let half: Vec<u32> = exps.iter().map(|e| (e - 1) / 2).collect();
            odd.add_term(Monomial::from_exps(&half, &[]), c.clone());
        } else {
            return Err(PushforwardError::NotWeylInvariant);
        }
    }
    let ts = VarId::ts(n);
    let expand = |q: &MultiPoly| schur_expand(q, &ts).map_err(|_| PushforwardError::NotWeylInvariant);
    Ok(SchurT2Expansion {
        plain: expand(&even)?,
        with_t_factor: expand(&odd)?,
    })
}

/// Computes one route.
pub fn compute_route(phi: &CharClass, component: Component, route: Route) -> Result<MultiPoly, PushforwardError> {
    match route {
        Route::Oracle => localize_pushforward(phi, component),
        Route::Closed => match phi.as_single_schur() {
            Some(lambda) => Ok(schur_pushforward_closed(&lambda, component)),
            None => Err(PushforwardError::UnsupportedRoute { route, component }),
        },
        _ => residue_pushforward(phi, component, route),
    }
}

/// Results of several routes on one component.
#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub component: Component,
    pub routes: BTreeMap<Route, MultiPoly>,
    pub failures: BTreeMap<Route, String>,
    pub agreement: bool,
    pub schur_t2: Option<SchurT2Expansion>,
}

impl ComponentReport {
    /// The common value when all routes agree.
    pub fn value(&self) -> Option<&MultiPoly> {
        if self.agreement {
            self.routes.values().next()
        } else {
            None
        }
    }
}

/// Evaluates `routes` (plus the oracle, always) on `component`.
pub fn component_report(phi: &CharClass, component: Component, routes: &[Route]) -> ComponentReport {
    let mut wanted = vec![Route::Oracle];
    wanted.extend(routes.iter().copied().filter(|r| *r != Route::Oracle));
    let mut values = BTreeMap::new();
    let mut failures = BTreeMap::new();
    for route in wanted {
        match compute_route(phi, component, route) {
            Ok(p) => {
                values.insert(route, p);
            }
            Err(e) => {
                failures.insert(route, e.to_string());
            }
        }
    }
    let agreement = failures.is_empty() && values.values().all(|p| Some(p) == values.get(&Route::Oracle));
    let schur_t2 = values.get(&Route::Oracle).and_then(|p| schur_t2_expand(p, phi.n).ok());
    ComponentReport {
        component,
        routes: values,
        failures,
        agreement,
        schur_t2,
    }
}

/// All components, all applicable routes, and the additivity check.
#[derive(Debug, Clone)]
pub struct PushforwardReport {
    pub n: usize,
    pub class: MultiPoly,
    pub components: Vec<ComponentReport>,
    /// `Full = Plus + Minus` on the oracle values.
    pub additivity: bool,
    pub agreement: bool,
}

impl PushforwardReport {
    pub fn component(&self, c: Component) -> &ComponentReport {
        self.components
            .iter()
            .find(|r| r.component == c)
            .expect("every component is reported")
    }
}

pub fn cross_validate(phi: &CharClass) -> PushforwardReport {
    let single = phi.as_single_schur().is_some();
    let components: Vec<ComponentReport> = [Component::Plus, Component::Minus, Component::Full]
        .into_iter()
        .map(|c| {
            let mut routes = vec![Route::Oracle, Route::Long, Route::Short];
            if c == Component::Full {
                routes.push(Route::Dp);
            }
            if single {
                routes.push(Route::Closed);
            }
            component_report(phi, c, &routes)
        })
        .collect();
    let oracle = |i: usize| components[i].routes.get(&Route::Oracle);
    let additivity = match (oracle(0), oracle(1), oracle(2)) {
        (Some(p), Some(m), Some(f)) => &(p + m) == f,
        _ => false,
    };
    let agreement = additivity && components.iter().all(|c| c.agreement);
    PushforwardReport {
        n: phi.n,
        class: phi.phi.clone(),
        components,
        additivity,
        agreement,
    }
}
