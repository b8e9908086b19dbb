//! Charge-graded bosonic Fock space.
//!
//! Basis states are the unnormalized monomials `b₋λ₁⋯b₋λₖ R^ℓ Ω`, labelled by
//! a charge `ℓ` and a partition `λ`. Momenta are measured in units of `2π/L`,
//! so the Heisenberg relations read `[b_m, b_n] = m δ_{m+n,0}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub charge: i64,
    pub parts: Partition,
}

impl FockState {
    pub fn new(charge: i64, parts: Partition) -> FockState {
        FockState { charge, parts }
    }

    /// The charge-`ℓ` vacuum `R^ℓ Ω`.
    pub fn vacuum(charge: i64) -> FockState {
        FockState { charge, parts: Partition::empty() }
    }

    pub fn level(&self) -> u32 {
        self.parts.weight()
    }

    /// `‖b₋λ R^ℓ Ω‖² = Π_m m^{k_m} k_m!`.
    pub fn norm_squared(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (m, k) in self.parts.multiplicities() {
            acc *= num_traits::pow(BigInt::from(m), k as usize);
            for i in 2..=k {
                acc *= BigInt::from(i);
            }
        }
        acc
    }
}

/// Finite linear combination of basis states. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<S> {
    terms: BTreeMap<FockState, S>,
}

impl<S: Scalar> Default for FockVector<S> {
    fn default() -> Self {
        FockVector::zero()
    }
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    pub fn basis(state: FockState) -> Self {
        let mut v = FockVector::zero();
        v.add_term(state, S::one());
        v
    }

    pub fn vacuum(charge: i64) -> Self {
        FockVector::basis(FockState::vacuum(charge))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FockState, S)>) -> Self {
        let mut v = FockVector::zero();
        for (s, c) in terms {
            v.add_term(s, c);
        }
        v
    }

    pub fn add_term(&mut self, state: FockState, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&state);
                }
            }
            None => {
                self.terms.insert(state, coeff);
            }
        }
    }

    pub fn coeff(&self, state: &FockState) -> S {
        self.terms.get(state).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero up to the scalar's own tolerance.
    pub fn is_negligible(&self) -> bool {
        self.terms.values().all(|c| c.is_negligible())
    }

    pub fn scale(&self, k: &S) -> Self {
        FockVector::from_terms(self.terms.iter().map(|(s, c)| (s.clone(), c.clone() * k.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), -c.clone());
        }
        out
    }

    /// `self += k·other`.
    pub fn axpy(&mut self, k: &S, other: &Self) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone() * k.clone());
        }
    }

    /// Distinct `(charge, level)` sectors present.
    pub fn sectors(&self) -> Vec<(i64, u32)> {
        let mut out: Vec<(i64, u32)> = self.terms.keys().map(|s| (s.charge, s.level())).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn project(&self, charge: i64, level: u32) -> Self {
        FockVector {
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.charge == charge && s.level() == level)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_level(&self) -> u32 {
        self.terms.keys().map(FockState::level).max().unwrap_or(0)
    }

    /// If `self = k·other` for a scalar `k`, returns `k`. Zero vectors are
    /// proportional to everything with factor 0.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        if self.is_zero() {
            return Some(S::zero());
        }
        let (state, c) = other.terms.iter().next()?;
        let k = self.coeff(state) / c.clone();
        let diff = self.sub(&other.scale(&k));
        diff.is_negligible().then_some(k)
    }
}

/// Applies the boson mode `b_m` (`m ≠ 0`).
///
/// Negative `m` appends a part `|m|`; positive `m` contracts one part `m`
/// with weight `m·k_m`.
pub fn apply_mode<S: Scalar>(m: i64, v: &FockVector<S>) -> Result<FockVector<S>> {
    if m == 0 {
        return Err(Error::ZeroMode);
    }
    let mut out = FockVector::zero();
    let part = m.unsigned_abs() as u32;
    for (s, c) in v.iter() {
        if m < 0 {
            out.add_term(FockState::new(s.charge, s.parts.with_part(part)), c.clone());
        } else {
            let k = s.parts.count(part);
            if k == 0 {
                continue;
            }
            let parts = s.parts.without_part(part).expect("part present");
            out.add_term(FockState::new(s.charge, parts), c.clone() * S::from_i64(m * k as i64));
        }
    }
    Ok(out)
}

/// Fock inner product, antilinear in the left argument.
pub fn inner<S: Scalar>(v: &FockVector<S>, w: &FockVector<S>) -> S {
    let mut acc = S::zero();
    for (s, c) in v.iter() {
        if let Some(d) = w.terms.get(s) {
            let n = s.norm_squared().to_i64().expect("norm fits in i64");
            acc = acc + c.conj() * d.clone() * S::from_i64(n);
        }
    }
    acc
}

/// One normal-ordered monomial `coeff · b₋(creations) Q^q b(annihilations)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<S> {
    pub coeff: S,
    pub creations: Partition,
    pub q_power: u32,
    pub annihilations: Partition,
}

impl<S: Scalar> Monomial<S> {
    /// `|annihilations| − |creations|`.
    pub fn momentum_defect(&self) -> i64 {
        self.annihilations.weight() as i64 - self.creations.weight() as i64
    }

    fn apply_to_state(&self, state: &FockState, coeff: &S, out: &mut FockVector<S>) {
        let mut weight = BigInt::one();
        let mut parts = state.parts.clone();
        for (m, r) in self.annihilations.multiplicities() {
            let k = state.parts.count(m);
            if k < r {
                return;
            }
            // b_m^r b₋m^k = m^r k!/(k−r)! b₋m^{k−r} on the vacuum
            weight *= num_traits::pow(BigInt::from(m), r as usize);
            for i in (k - r + 1)..=k {
                weight *= BigInt::from(i);
            }
            for _ in 0..r {
                parts = parts.without_part(m).expect("part present");
            }
        }
        let mut c = coeff.clone() * self.coeff.clone() * S::from_i64(weight.to_i64().expect("weight fits"));
        if self.q_power > 0 {
            c = c * S::from_i64(state.charge).powi(self.q_power);
        }
        if c.is_zero() {
            return;
        }
        out.add_term(FockState::new(state.charge, parts.union(&self.creations)), c);
    }
}

/// Infinite families of normal-ordered terms, expanded only up to the level
/// of the vector they act on.
#[derive(Clone, Debug, PartialEq)]
pub enum ModeSeries<S> {
    /// `coeff · Q^q · Σ_{m>0} m^weight b₋m b_m`
    Bilinear { coeff: S, weight: u32, q_power: u32 },
    /// `coeff · Q^q · Σ_{a,b>0} (b₋a b₋b b_{a+b} + b₋(a+b) b_a b_b)`
    Cubic { coeff: S, q_power: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum OpTerm<S> {
    Monomial(Monomial<S>),
    Series(ModeSeries<S>),
}

/// Finite sum of normal-ordered terms in the boson modes and the charge `Q`.
/// All terms conserve charge; creations act last.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalOrderedOp<S> {
    terms: Vec<OpTerm<S>>,
}

impl<S: Scalar> Default for NormalOrderedOp<S> {
    fn default() -> Self {
        NormalOrderedOp::zero()
    }
}

impl<S: Scalar> NormalOrderedOp<S> {
    pub fn zero() -> Self {
        NormalOrderedOp { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        NormalOrderedOp::charge_power(S::one(), 0)
    }

    /// `coeff · Q^q`
    pub fn charge_power(coeff: S, q_power: u32) -> Self {
        NormalOrderedOp::monomial(coeff, Partition::empty(), q_power, Partition::empty())
    }

    pub fn monomial(coeff: S, creations: Partition, q_power: u32, annihilations: Partition) -> Self {
        NormalOrderedOp { terms: vec![OpTerm::Monomial(Monomial { coeff, creations, q_power, annihilations })] }
            .canonical()
    }

    pub fn series(series: ModeSeries<S>) -> Self {
        NormalOrderedOp { terms: vec![OpTerm::Series(series)] }.canonical()
    }

    pub fn terms(&self) -> &[OpTerm<S>] {
        &self.terms
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        NormalOrderedOp { terms }.canonical()
    }

    pub fn scaled(&self, k: &S) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                OpTerm::Monomial(m) => OpTerm::Monomial(Monomial { coeff: m.coeff.clone() * k.clone(), ..m.clone() }),
                OpTerm::Series(ModeSeries::Bilinear { coeff, weight, q_power }) => {
                    OpTerm::Series(ModeSeries::Bilinear { coeff: coeff.clone() * k.clone(), weight: *weight, q_power: *q_power })
                }
                OpTerm::Series(ModeSeries::Cubic { coeff, q_power }) => {
                    OpTerm::Series(ModeSeries::Cubic { coeff: coeff.clone() * k.clone(), q_power: *q_power })
                }
            })
            .collect();
        NormalOrderedOp { terms }.canonical()
    }

    /// Left multiplication by `Q^k`, which commutes with every boson mode.
    pub fn times_charge(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                OpTerm::Monomial(m) => OpTerm::Monomial(Monomial { q_power: m.q_power + k, ..m.clone() }),
                OpTerm::Series(ModeSeries::Bilinear { coeff, weight, q_power }) => {
                    OpTerm::Series(ModeSeries::Bilinear { coeff: coeff.clone(), weight: *weight, q_power: q_power + k })
                }
                OpTerm::Series(ModeSeries::Cubic { coeff, q_power }) => {
                    OpTerm::Series(ModeSeries::Cubic { coeff: coeff.clone(), q_power: q_power + k })
                }
            })
            .collect();
        NormalOrderedOp { terms }.canonical()
    }

    /// Merges terms of identical shape and drops vanishing ones.
    fn canonical(self) -> Self {
        let mut merged: Vec<OpTerm<S>> = Vec::new();
        for t in self.terms {
            let slot = merged.iter_mut().find(|m| same_shape(m, &t));
            match slot {
                Some(existing) => add_coeff(existing, &t),
                None => merged.push(t),
            }
        }
        merged.retain(|t| !term_coeff(t).is_zero());
        NormalOrderedOp { terms: merged }
    }

    /// Explicit monomials with annihilation weight at most `max_level`.
    pub fn monomials_up_to(&self, max_level: u32) -> Vec<Monomial<S>> {
        let mut out = Vec::new();
        for t in &self.terms {
            match t {
                OpTerm::Monomial(m) => {
                    if m.annihilations.weight() <= max_level {
                        out.push(m.clone());
                    }
                }
                OpTerm::Series(ModeSeries::Bilinear { coeff, weight, q_power }) => {
                    for m in 1..=max_level {
                        let part = Partition::new(vec![m]);
                        out.push(Monomial {
                            coeff: coeff.clone() * S::from_i64(m as i64).powi(*weight),
                            creations: part.clone(),
                            q_power: *q_power,
                            annihilations: part,
                        });
                    }
                }
                OpTerm::Series(ModeSeries::Cubic { coeff, q_power }) => {
                    for a in 1..max_level {
                        for b in 1..=(max_level - a) {
                            let pair = Partition::new(vec![a, b]);
                            let single = Partition::new(vec![a + b]);
                            out.push(Monomial {
                                coeff: coeff.clone(),
                                creations: pair.clone(),
                                q_power: *q_power,
                                annihilations: single.clone(),
                            });
                            out.push(Monomial {
                                coeff: coeff.clone(),
                                creations: single,
                                q_power: *q_power,
                                annihilations: pair,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

fn term_coeff<S>(t: &OpTerm<S>) -> &S {
    match t {
        OpTerm::Monomial(m) => &m.coeff,
        OpTerm::Series(ModeSeries::Bilinear { coeff, .. }) | OpTerm::Series(ModeSeries::Cubic { coeff, .. }) => coeff,
    }
}

fn same_shape<S>(x: &OpTerm<S>, y: &OpTerm<S>) -> bool {
    match (x, y) {
        (OpTerm::Monomial(a), OpTerm::Monomial(b)) => {
            a.creations == b.creations && a.q_power == b.q_power && a.annihilations == b.annihilations
        }
        (
            OpTerm::Series(ModeSeries::Bilinear { weight: w1, q_power: q1, .. }),
            OpTerm::Series(ModeSeries::Bilinear { weight: w2, q_power: q2, .. }),
        ) => w1 == w2 && q1 == q2,
        (OpTerm::Series(ModeSeries::Cubic { q_power: q1, .. }), OpTerm::Series(ModeSeries::Cubic { q_power: q2, .. })) => {
            q1 == q2
        }
        _ => false,
    }
}

fn add_coeff<S: Scalar>(into: &mut OpTerm<S>, from: &OpTerm<S>) {
    let extra = term_coeff(from).clone();
    match into {
        OpTerm::Monomial(m) => m.coeff = m.coeff.clone() + extra,
        OpTerm::Series(ModeSeries::Bilinear { coeff, .. }) | OpTerm::Series(ModeSeries::Cubic { coeff, .. }) => {
            *coeff = coeff.clone() + extra
        }
    }
}

/// Applies a normal-ordered operator: annihilations first, then the charge
/// powers, then creations.
pub fn apply_op<S: Scalar>(op: &NormalOrderedOp<S>, v: &FockVector<S>) -> FockVector<S> {
    let monomials = op.monomials_up_to(v.max_level());
    let mut out = FockVector::zero();
    for (state, c) in v.iter() {
        let level = state.level();
        for m in &monomials {
            if m.annihilations.weight() <= level {
                m.apply_to_state(state, c, &mut out);
            }
        }
    }
    out
}

/// Matrix of an operator on one `(charge, level)` sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorMatrix<S> {
    pub charge: i64,
    pub level: u32,
    /// Basis partitions in the crate's basis order.
    pub basis: Vec<Partition>,
    /// `entries[i][j]` is the coefficient of `basis[i]` in `op(basis[j])`.
    pub entries: Vec<Vec<S>>,
}

impl<S: Scalar> SectorMatrix<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Applies the matrix to a coefficient vector in the sector basis.
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    /// Gram matrix of the sector basis (the Fock norms, diagonal).
    pub fn gram(charge: i64, level: u32) -> SectorMatrix<S> {
        let basis = partitions(level);
        let n = basis.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            let st = FockState::new(charge, basis[i].clone());
                            S::from_i64(st.norm_squared().to_i64().expect("norm fits"))
                        } else {
                            S::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        SectorMatrix { charge, level, basis, entries }
    }
}

/// Coefficient vector of `v` in the basis of sector `(charge, level)`.
pub fn sector_coordinates<S: Scalar>(v: &FockVector<S>, charge: i64, level: u32) -> Result<Vec<S>> {
    if v.iter().any(|(s, _)| s.charge != charge || s.level() != level) {
        return Err(Error::OutsideSector { charge, level });
    }
    Ok(partitions(level)
        .into_iter()
        .map(|p| v.coeff(&FockState::new(charge, p)))
        .collect())
}

pub fn sector_matrix<S: Scalar>(op: &NormalOrderedOp<S>, charge: i64, level: u32) -> Result<SectorMatrix<S>> {
    if op.monomials_up_to(level).iter().any(|m| m.momentum_defect() != 0) {
        return Err(Error::LevelChanging { charge, level });
    }
    let basis = partitions(level);
    let n = basis.len();
    let mut entries = vec![vec![S::zero(); n]; n];
    for (j, p) in basis.iter().enumerate() {
        let image = apply_op(op, &FockVector::basis(FockState::new(charge, p.clone())));
        for (i, q) in basis.iter().enumerate() {
            entries[i][j] = image.coeff(&FockState::new(charge, q.clone()));
        }
    }
    Ok(SectorMatrix { charge, level, basis, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadNum;
    use num_traits::Zero;

    type V = FockVector<QuadNum>;

    fn st(charge: i64, parts: &[u32]) -> FockState {
        FockState::new(charge, Partition::new(parts.to_vec()))
    }

    #[test]
    fn single_commutator_contraction() {
        let v = V::basis(st(1, &[1]));
        assert_eq!(apply_mode(1, &v).unwrap(), V::vacuum(1));
    }

    #[test]
    fn annihilators_kill_vacuum() {
        assert!(apply_mode(2, &V::vacuum(0)).unwrap().is_zero());
        assert_eq!(apply_mode(-3, &V::vacuum(0)).unwrap(), V::basis(st(0, &[3])));
        assert_eq!(apply_mode(0, &V::vacuum(0)), Err(Error::ZeroMode));
    }

    #[test]
    fn contraction_weight_counts_multiplicity() {
        // b_2 b₋2² Ω = 2·2 b₋2 Ω
        let v = V::basis(st(0, &[2, 2]));
        assert_eq!(apply_mode(2, &v).unwrap(), V::basis(st(0, &[2])).scale(&QuadNum::from_int(4)));
    }

    #[test]
    fn inner_products() {
        let r = V::vacuum(1);
        assert_eq!(inner(&r, &r), QuadNum::one());
        let b2 = V::basis(st(0, &[2]));
        assert_eq!(inner(&b2, &b2), QuadNum::from_int(2));
        assert_eq!(inner(&r, &V::vacuum(0)), QuadNum::zero());
        // ‖b₋1² b₋3 Ω‖² = 1²·2!·3 = 6
        assert_eq!(st(0, &[3, 1, 1]).norm_squared(), BigInt::from(6));
    }

    #[test]
    fn charge_operator_on_charged_vacuum() {
        let q = NormalOrderedOp::charge_power(QuadNum::one(), 1);
        assert_eq!(apply_op(&q, &V::vacuum(1)), V::vacuum(1));
        assert_eq!(apply_op(&q, &V::vacuum(-2)), V::vacuum(-2).scale(&QuadNum::from_int(-2)));
    }

    #[test]
    fn level_operator_weighted() {
        let c = NormalOrderedOp::series(ModeSeries::Bilinear { coeff: QuadNum::one(), weight: 1, q_power: 0 });
        let v = V::basis(st(1, &[2]));
        assert_eq!(apply_op(&c, &v), v.scale(&QuadNum::from_int(4)));
    }

    #[test]
    fn level_changing_op_rejected() {
        let op = NormalOrderedOp::monomial(QuadNum::one(), Partition::new(vec![1]), 0, Partition::empty());
        assert_eq!(sector_matrix(&op, 0, 1), Err(Error::LevelChanging { charge: 0, level: 1 }));
    }

    #[test]
    fn canonical_merges_and_drops() {
        let q = NormalOrderedOp::charge_power(QuadNum::one(), 2);
        let sum = q.plus(&q.scaled(&QuadNum::from_int(-1)));
        assert!(sum.terms().is_empty());
        let twice = q.plus(&q);
        assert_eq!(twice.terms().len(), 1);
    }

    #[test]
    fn ratio_detects_proportionality() {
        let v = V::from_terms([(st(0, &[1, 1]), QuadNum::from_int(2)), (st(0, &[2]), QuadNum::from_int(3))]);
        let w = v.scale(&QuadNum::ratio(-1, 3));
        assert_eq!(w.ratio_to(&v), Some(QuadNum::ratio(-1, 3)));
        let u = V::basis(st(0, &[2]));
        assert_eq!(u.ratio_to(&v), None);
    }
}
