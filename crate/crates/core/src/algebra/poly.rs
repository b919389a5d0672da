use std::cmp::Ordering;
use std::collections::{btree_map::Entry, BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::{AlgebraError, Rat};

/// The two families of indeterminates: torus characters `t_i` and the formal
/// residue variables `z_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarClass {
    T,
    Z,
}

/// A variable `t_i` or `z_i`, with a 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub class: VarClass,
    pub index: u32,
}

impl VarId {
    pub fn t(index: u32) -> Self {
        assert!(index >= 1, "variable indices are 1-based");
        VarId {
            class: VarClass::T,
            index,
        }
    }

    pub fn z(index: u32) -> Self {
        assert!(index >= 1, "variable indices are 1-based");
        VarId {
            class: VarClass::Z,
            index,
        }
    }

    /// Checked constructor against the ambient rank `n`.
    pub fn checked(class: VarClass, index: u32, n: usize) -> Result<Self, AlgebraError> {
        if index == 0 || index as usize > n {
            return Err(AlgebraError::VariableOutOfRange { class, index, n });
        }
        Ok(VarId { class, index })
    }

    pub fn ts(n: usize) -> Vec<VarId> {
        (1..=n as u32).map(VarId::t).collect()
    }

    pub fn zs(n: usize) -> Vec<VarId> {
        (1..=n as u32).map(VarId::z).collect()
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            VarClass::T => write!(f, "t{}", self.index),
            VarClass::Z => write!(f, "z{}", self.index),
        }
    }
}

type Exps = SmallVec<[u32; 4]>;

fn trim(v: &mut Exps) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// A power product of `t` and `z` variables. Exponent vectors are stored with
/// trailing zeros trimmed so that equal monomials have equal representations
/// regardless of the ambient rank.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    t: Exps,
    z: Exps,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId, e: u32) -> Self {
        let mut m = Monomial::one();
        m.set_exp(v, e);
        m
    }

    pub fn from_exps(t: &[u32], z: &[u32]) -> Self {
        let mut t: Exps = t.iter().copied().collect();
        let mut z: Exps = z.iter().copied().collect();
        trim(&mut t);
        trim(&mut z);
        let deg = t.iter().sum::<u32>() + z.iter().sum::<u32>();
        Monomial { deg, t, z }
    }

    fn slot(&self, class: VarClass) -> &Exps {
        match class {
            VarClass::T => &self.t,
            VarClass::Z => &self.z,
        }
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.slot(v.class).get(v.index as usize - 1).copied().unwrap_or(0)
    }

    pub fn set_exp(&mut self, v: VarId, e: u32) {
        let old = self.exp(v);
        let slot = match v.class {
            VarClass::T => &mut self.t,
            VarClass::Z => &mut self.z,
        };
        let i = v.index as usize - 1;
        if slot.len() <= i {
            slot.resize(i + 1, 0);
        }
        slot[i] = e;
        trim(slot);
        self.deg = self.deg - old + e;
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn t_exps(&self) -> &[u32] {
        &self.t
    }

    pub fn z_exps(&self) -> &[u32] {
        &self.z
    }

    /// Variables with a positive exponent, with that exponent.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        let ts = self
            .t
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarId::t(i as u32 + 1), e));
        let zs = self
            .z
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarId::z(i as u32 + 1), e));
        ts.chain(zs)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        fn add(a: &Exps, b: &Exps) -> Exps {
            let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            let mut out = long.clone();
            for (o, s) in out.iter_mut().zip(short.iter()) {
                *o += s;
            }
            out
        }
        Monomial {
            deg: self.deg + other.deg,
            t: add(&self.t, &other.t),
            z: add(&self.z, &other.z),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        fn sub(a: &Exps, b: &Exps) -> Option<Exps> {
            if b.len() > a.len() {
                return None;
            }
            let mut out = a.clone();
            for (o, s) in out.iter_mut().zip(b.iter()) {
                if *o < *s {
                    return None;
                }
                *o -= s;
            }
            trim(&mut out);
            Some(out)
        }
        Some(Monomial {
            deg: self.deg - other.deg.min(self.deg),
            t: sub(&self.t, &other.t)?,
            z: sub(&self.z, &other.z)?,
        })
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        fn min(a: &Exps, b: &Exps) -> Exps {
            let mut out: Exps = a.iter().zip(b.iter()).map(|(x, y)| *x.min(y)).collect();
            trim(&mut out);
            out
        }
        let t = min(&self.t, &other.t);
        let z = min(&self.z, &other.z);
        let deg = t.iter().sum::<u32>() + z.iter().sum::<u32>();
        Monomial { deg, t, z }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        let scale = |v: &Exps| -> Exps { v.iter().map(|x| x * e).collect() };
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            deg: self.deg * e,
            t: scale(&self.t),
            z: scale(&self.z),
        }
    }
}

fn cmp_rev(a: &Exps, b: &Exps) -> Ordering {
    let len = a.len().max(b.len());
    for i in (0..len).rev() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Graded lexicographic order with `t1 < ... < tn < z1 < ... < zn`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| cmp_rev(&self.z, &other.z))
            .then_with(|| cmp_rev(&self.t, &other.t))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multivariate polynomial over the rationals in `t_i` and `z_i`.
///
/// The term map never stores a zero coefficient, so structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        MultiPoly::term(Monomial::one(), c)
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(Rat::from(c))
    }

    pub fn var(v: VarId) -> Self {
        MultiPoly::term(Monomial::var(v, 1), Rat::one())
    }

    pub fn t(i: u32) -> Self {
        MultiPoly::var(VarId::t(i))
    }

    pub fn z(i: u32) -> Self {
        MultiPoly::var(VarId::z(i))
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.terms.keys().all(|m| m.degree() == d).then_some(d)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The coefficients of `self` viewed as a univariate polynomial in `v`;
    /// entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: VarId) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exp(v);
            let mut rest = m.clone();
            rest.set_exp(v, 0);
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Simultaneous substitution `v -> bindings[v]`.
    pub fn substitute(&self, bindings: &HashMap<VarId, MultiPoly>) -> MultiPoly {
        if bindings.is_empty() {
            return self.clone();
        }
        // fast path: every image is a single term
        let single: Option<HashMap<VarId, (Monomial, Rat)>> = bindings
            .iter()
            .map(|(v, p)| match p.terms.len() {
                1 => {
                    let (m, c) = p.terms.iter().next().unwrap();
                    Some((*v, (m.clone(), c.clone())))
                }
                _ => None,
            })
            .collect();
        if let Some(single) = single {
            let mut out = MultiPoly::zero();
            for (m, c) in &self.terms {
                let mut mono = m.clone();
                let mut coeff = c.clone();
                for (v, (img, k)) in &single {
                    let e = m.exp(*v);
                    if e > 0 {
                        mono.set_exp(*v, 0);
                        mono = mono.mul(&img.pow(e));
                        coeff *= &k.pow(e);
                    }
                }
                out.add_term(mono, coeff);
            }
            return out;
        }
        let mut powers: HashMap<(VarId, u32), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut free = m.clone();
            let mut acc = MultiPoly::constant(c.clone());
            for (v, e) in m.iter() {
                if let Some(img) = bindings.get(&v) {
                    free.set_exp(v, 0);
                    let p = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                    acc = &acc * &*p;
                }
            }
            for (k, x) in acc.terms {
                out.add_term(k.mul(&free), x);
            }
        }
        out
    }

    pub fn substitute_one(&self, v: VarId, value: &MultiPoly) -> MultiPoly {
        let mut b = HashMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }

    /// Renames variables; variables missing from `map` are kept.
    pub fn rename(&self, map: &HashMap<VarId, VarId>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut mono = Monomial::one();
            for (v, e) in m.iter() {
                let w = map.get(&v).copied().unwrap_or(v);
                mono.set_exp(w, mono.exp(w) + e);
            }
            out.add_term(mono, c.clone());
        }
        out
    }

    /// True if `self` is invariant under every permutation of `vars`.
    pub fn is_symmetric_in(&self, vars: &[VarId]) -> bool {
        if vars.len() < 2 {
            return true;
        }
        // a transposition and a full cycle generate the symmetric group
        let swap: HashMap<VarId, VarId> = [(vars[0], vars[1]), (vars[1], vars[0])].into();
        let cycle: HashMap<VarId, VarId> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, vars[(i + 1) % vars.len()]))
            .collect();
        &self.rename(&swap) == self && &self.rename(&cycle) == self
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        let (lm, lc) = divisor
            .leading_term()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(AlgebraError::DivisionByZero)?;
        if divisor.terms.len() == 1 {
            let inv = lc.recip();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                let q = m.div(&lm).ok_or(AlgebraError::NotDivisible)?;
                terms.insert(q, c * &inv);
            }
            return Ok(MultiPoly { terms });
        }
        let inv = lc.recip();
        let rest: Vec<(Monomial, Rat)> = divisor
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut rem = self.terms.clone();
        let mut quot = MultiPoly::zero();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm).ok_or(AlgebraError::NotDivisible)?;
            let qc = &c * &inv;
            for (dm, dc) in &rest {
                let prod = qm.mul(dm);
                let delta = &qc * dc;
                match rem.entry(prod) {
                    Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    Entry::Occupied(mut e) => {
                        *e.get_mut() -= &delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            quot.terms.insert(qm, qc);
        }
        Ok(quot)
    }

    /// Monomial gcd of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rat) -> Rat) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl From<Rat> for MultiPoly {
    fn from(c: Rat) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<VarId> for MultiPoly {
    fn from(v: VarId) -> Self {
        MultiPoly::var(v)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut acc: HashMap<Monomial, Rat> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let c = c1 * c2;
                match acc.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &c;
                    }
                }
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $method:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for MultiPoly {
    fn product<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::one(), |acc, p| &acc * &p)
    }
}

/// Canonical rendering: terms in descending graded-lex order, explicit `*`
/// and `^`, e.g. `2*t1*t2` or `t2 - t1`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
