//! Fourier modes of the anyon vertex operators and the N-anyon states they
//! generate from the vacuum.
//!
//! The mode `φ̂^ν(p)` acts on `b₋q₁⋯b₋qₙ R^ℓ Ω` as
//!
//! ```text
//! Σ′ (−ν)^{Σδᵢ} Π b₋qᵢ^{1−δᵢ} Π_j ν^{m_j}/(m_j! j^{m_j}) b₋j^{m_j} R^{ℓ+1} Ω
//! ```
//!
//! summed over `δᵢ ∈ {0,1}` and `m_j ≥ 0` with `Σ j·m_j = p + Σ δᵢ qᵢ`. The
//! modes are normalized so that `φ̂^ν(0) R^ℓ Ω = R^{ℓ+1} Ω`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::fock::{FockState, FockVector};
use crate::partition::{partitions, Partition};
use crate::scalar::{binomial, Scalar};

/// Integer anyon momenta `n = (n₁,…,n_N)` in units of `2π/L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MomentumVector(Vec<i64>);

impl MomentumVector {
    pub fn new(n: Vec<i64>) -> MomentumVector {
        assert!(!n.is_empty(), "momentum vector needs at least one entry");
        MomentumVector(n)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `n₁ ≥ n₂ ≥ ⋯ ≥ n_N ≥ 0`.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && *self.0.last().unwrap() >= 0
    }

    /// `n + k(e_j − e_l)` with 0-based indices.
    pub fn shifted(&self, j: usize, l: usize, k: i64) -> MomentumVector {
        let mut v = self.0.clone();
        v[j] += k;
        v[l] -= k;
        MomentumVector(v)
    }

    /// Zero-padded entries of a partition.
    pub fn from_partition(p: &Partition, n: usize) -> Option<MomentumVector> {
        let padded = p.padded(n)?;
        Some(MomentumVector(padded.into_iter().map(i64::from).collect()))
    }
}

impl fmt::Display for MomentumVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<Vec<i64>> for MomentumVector {
    fn from(v: Vec<i64>) -> Self {
        MomentumVector::new(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaState<S> {
    pub nu: S,
    pub n: MomentumVector,
    pub vector: FockVector<S>,
}

impl<S: Scalar> EtaState<S> {
    pub fn charge(&self) -> i64 {
        self.n.len() as i64
    }

    pub fn level(&self) -> i64 {
        self.n.total()
    }
}

/// Expansion of the level-`t` part of `exp(ν Σ_j b₋j / j)`.
fn creation_block<S: Scalar>(nu: &S, t: u32) -> Vec<(Partition, S)> {
    partitions(t)
        .into_iter()
        .map(|p| {
            let mut c = S::one();
            for (j, m) in p.multiplicities() {
                let mut denom = S::one();
                for i in 1..=m {
                    denom = denom * S::from_i64(i as i64 * j as i64);
                }
                c = c * nu.powi(m) / denom;
            }
            (p, c)
        })
        .collect()
}

/// `φ̂^ν(p) v`.
pub fn vertex_mode<S: Scalar>(nu: &S, p: i64, v: &FockVector<S>) -> FockVector<S> {
    let mut blocks: HashMap<u32, Vec<(Partition, S)>> = HashMap::new();
    let minus_nu = -nu.clone();
    let mut out = FockVector::zero();
    for (state, c) in v.iter() {
        let mult = state.parts.multiplicities();
        // choose r_j of the k_j copies of each distinct part j
        let mut choice = vec![0u32; mult.len()];
        loop {
            let mut removed = 0i64;
            let mut weight = c.clone();
            let mut rest = Vec::new();
            let mut taken = 0u32;
            for (&(j, k), &r) in mult.iter().zip(&choice) {
                removed += (j * r) as i64;
                taken += r;
                weight = weight * binomial(&S::from_i64(k as i64), r);
                rest.extend(std::iter::repeat_n(j, (k - r) as usize));
            }
            let t = p + removed;
            if t >= 0 {
                let weight = weight * minus_nu.powi(taken);
                let rest = Partition::new(rest);
                let block = blocks.entry(t as u32).or_insert_with(|| creation_block(nu, t as u32));
                for (kappa, b) in block.iter() {
                    out.add_term(FockState::new(state.charge + 1, rest.union(kappa)), weight.clone() * b.clone());
                }
            }
            // next choice (odometer)
            let mut i = 0;
            while i < choice.len() {
                if choice[i] < mult[i].1 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out
}

/// `η_{ν,N}(n) = φ̂^ν(n₁)⋯φ̂^ν(n_N) Ω`, rightmost mode applied first.
pub fn build_eta<S: Scalar>(nu: &S, n: &MomentumVector) -> EtaState<S> {
    let mut v = FockVector::vacuum(0);
    for &p in n.entries().iter().rev() {
        v = vertex_mode(nu, p, &v);
        if v.is_zero() {
            break;
        }
    }
    EtaState { nu: nu.clone(), n: n.clone(), vector: v }
}

/// Necessary conditions for `η(n) ≠ 0`: `Σ n_j ≥ 0` and
/// `n_l + Σ_{j>l} 2^{j−1−l} n_j ≥ 0` for every `l`.
pub fn support_filter(n: &MomentumVector) -> bool {
    let e = n.entries();
    if n.total() < 0 {
        return false;
    }
    // suffix value s_l = n_l + 2 s'_{l+1}... computed right to left:
    // c_l = n_l + Σ_{j>l} 2^{j−1−l} n_j satisfies c_l = n_l + T_{l+1} with
    // T_l = n_l + 2 T_{l+1}.
    let mut doubled_tail = 0i64;
    for &x in e.iter().rev() {
        if x + doubled_tail < 0 {
            return false;
        }
        doubled_tail = x + 2 * doubled_tail;
    }
    true
}

/// `P_j = n_j + ν²(N − j + ½)` in units of `2π/L`, with `j` 1-based.
pub fn anyon_momenta<S: Scalar>(nu: &S, n: &MomentumVector) -> Vec<S> {
    let nu2 = nu.clone() * nu.clone();
    let big_n = n.len() as i64;
    n.entries()
        .iter()
        .enumerate()
        .map(|(i, &nj)| {
            let j = i as i64 + 1;
            S::from_i64(nj) + nu2.clone() * S::ratio(2 * (big_n - j) + 1, 2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadNum;
    use num_rational::BigRational;
    use num_traits::One;

    fn nu_sqrt(r: i64) -> QuadNum {
        QuadNum::sqrt_of(&BigRational::from_integer(r.into())).unwrap()
    }

    fn st(charge: i64, parts: &[u32]) -> FockState {
        FockState::new(charge, Partition::new(parts.to_vec()))
    }

    #[test]
    fn zero_mode_shifts_charge() {
        let nu = nu_sqrt(2);
        for l in -3..=3 {
            assert_eq!(vertex_mode(&nu, 0, &FockVector::vacuum(l)), FockVector::vacuum(l + 1));
        }
    }

    #[test]
    fn low_modes_on_vacuum() {
        let nu = nu_sqrt(3);
        let v1 = vertex_mode(&nu, 1, &FockVector::vacuum(0));
        assert_eq!(v1, FockVector::basis(st(1, &[1])).scale(&nu));
        let v2 = vertex_mode(&nu, 2, &FockVector::vacuum(0));
        let expect = FockVector::from_terms([
            (st(1, &[1, 1]), &nu * &nu / QuadNum::from_int(2)),
            (st(1, &[2]), &nu / &QuadNum::from_int(2)),
        ]);
        assert_eq!(v2, expect);
        assert!(vertex_mode(&nu, -1, &FockVector::vacuum(0)).is_zero());
    }

    #[test]
    fn annihilating_part_of_mode() {
        // φ̂(−1) b₋1 Ω = −ν R Ω
        let nu = QuadNum::ratio(3, 2);
        let v = vertex_mode(&nu, -1, &FockVector::basis(st(0, &[1])));
        assert_eq!(v, FockVector::vacuum(1).scale(&-nu));
    }

    #[test]
    fn eta_examples() {
        let nu = nu_sqrt(2);
        let zero = build_eta(&nu, &MomentumVector::new(vec![0, 0, 0]));
        assert_eq!(zero.vector, FockVector::vacuum(3));
        assert!(build_eta(&nu, &MomentumVector::new(vec![0, -1])).vector.is_zero());
        let two = build_eta(&nu, &MomentumVector::new(vec![2]));
        assert_eq!(two.vector, vertex_mode(&nu, 2, &FockVector::vacuum(0)));
    }

    #[test]
    fn filter_examples() {
        assert!(support_filter(&MomentumVector::new(vec![0, 0, 0])));
        assert!(!support_filter(&MomentumVector::new(vec![1, -2])));
        assert!(support_filter(&MomentumVector::new(vec![-1, 3])));
        // l=1: 2 + (−1) + 2·1 ≥ 0, l=2: −1 + 1 ≥ 0
        assert!(support_filter(&MomentumVector::new(vec![2, -1, 1])));
        assert!(!support_filter(&MomentumVector::new(vec![0, -2, 1])));
    }

    #[test]
    fn momenta_examples() {
        let nu = nu_sqrt(2);
        assert_eq!(anyon_momenta(&nu, &MomentumVector::new(vec![1, 0])), vec![QuadNum::from_int(4), QuadNum::one()]);
        let one = QuadNum::one();
        assert_eq!(anyon_momenta(&one, &MomentumVector::new(vec![0, 0])), vec![QuadNum::ratio(3, 2), QuadNum::ratio(1, 2)]);
        let r = QuadNum::ratio(5, 7);
        let nu = QuadNum::sqrt_of(&BigRational::new(5.into(), 7.into())).unwrap();
        assert_eq!(anyon_momenta(&nu, &MomentumVector::new(vec![0])), vec![&r / &QuadNum::from_int(2)]);
    }
}
