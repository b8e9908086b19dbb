//! The conserved charges `W^s`, their anyonic deformations `W^{ν,s}` and the
//! second-quantized Calogero–Sutherland Hamiltonians, all in units with
//! `2π/L = 1`.
//!
//! ```text
//! W³      = Q³/3 − Q/12 + 2Q Σ b₋m b_m + Σ_{a,b} (b₋a b₋b b_{a+b} + b₋(a+b) b_a b_b)
//! W^{ν,1} = νQ
//! W^{ν,2} = W² + (ν²−1)/2 Q²
//! W^{ν,3} = W³ + 2(ν−1) Q W² + (ν−1)²(ν+2)/3 Q³ + (1−ν³)/12 Q
//! H^{ν,3} = ν W^{ν,3} + (1−ν²) C,   C = Σ m b₋m b_m
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{apply_op, ModeSeries, NormalOrderedOp};
use crate::fock::FockVector;
use crate::scalar::Scalar;
use crate::solver::eigenvalue;
use crate::vertex::{build_eta, support_filter, MomentumVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChargeKind {
    W1,
    W2,
    W3,
    Wnu1,
    Wnu2,
    Wnu3,
    C,
    H2,
    H3,
}

impl ChargeKind {
    pub const ALL: [ChargeKind; 9] = [
        ChargeKind::W1,
        ChargeKind::W2,
        ChargeKind::W3,
        ChargeKind::Wnu1,
        ChargeKind::Wnu2,
        ChargeKind::Wnu3,
        ChargeKind::C,
        ChargeKind::H2,
        ChargeKind::H3,
    ];

    pub fn needs_nu(self) -> bool {
        !matches!(self, ChargeKind::W1 | ChargeKind::W2 | ChargeKind::W3 | ChargeKind::C)
    }

    pub fn name(self) -> &'static str {
        match self {
            ChargeKind::W1 => "W1",
            ChargeKind::W2 => "W2",
            ChargeKind::W3 => "W3",
            ChargeKind::Wnu1 => "Wnu1",
            ChargeKind::Wnu2 => "Wnu2",
            ChargeKind::Wnu3 => "Wnu3",
            ChargeKind::C => "C",
            ChargeKind::H2 => "H2",
            ChargeKind::H3 => "H3",
        }
    }
}

impl fmt::Display for ChargeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChargeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChargeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown operator kind {s:?}")))
    }
}

fn level_op<S: Scalar>(coeff: S, weight: u32) -> NormalOrderedOp<S> {
    NormalOrderedOp::series(ModeSeries::Bilinear { coeff, weight, q_power: 0 })
}

fn w2<S: Scalar>() -> NormalOrderedOp<S> {
    NormalOrderedOp::charge_power(S::ratio(1, 2), 2).plus(&level_op(S::one(), 0))
}

fn w3<S: Scalar>() -> NormalOrderedOp<S> {
    NormalOrderedOp::charge_power(S::ratio(1, 3), 3)
        .plus(&NormalOrderedOp::charge_power(S::ratio(-1, 12), 1))
        .plus(&level_op(S::from_i64(2), 0).times_charge(1))
        .plus(&NormalOrderedOp::series(ModeSeries::Cubic { coeff: S::one(), q_power: 0 }))
}

fn wnu2<S: Scalar>(nu: &S) -> NormalOrderedOp<S> {
    let nu2 = nu.clone() * nu.clone();
    w2().plus(&NormalOrderedOp::charge_power((nu2 - S::one()) / S::from_i64(2), 2))
}

fn wnu3<S: Scalar>(nu: &S) -> NormalOrderedOp<S> {
    let m = nu.clone() - S::one();
    let cubic = m.clone() * m.clone() * (nu.clone() + S::from_i64(2)) / S::from_i64(3);
    let linear = (S::one() - nu.powi(3)) / S::from_i64(12);
    w3().plus(&w2().times_charge(1).scaled(&(m * S::from_i64(2))))
        .plus(&NormalOrderedOp::charge_power(cubic, 3))
        .plus(&NormalOrderedOp::charge_power(linear, 1))
}

/// Builds the operator of the given kind. The `Wnu*` and `H*` kinds need `ν`.
pub fn make_operator<S: Scalar>(kind: ChargeKind, nu: Option<&S>) -> Result<NormalOrderedOp<S>> {
    let nu = match (kind.needs_nu(), nu) {
        (true, None) => return Err(Error::MissingParameter(kind.name())),
        (_, nu) => nu,
    };
    let nu = || nu.expect("checked above");
    Ok(match kind {
        ChargeKind::W1 => NormalOrderedOp::charge_power(S::one(), 1),
        ChargeKind::W2 => w2(),
        ChargeKind::W3 => w3(),
        ChargeKind::C => level_op(S::one(), 1),
        ChargeKind::Wnu1 => NormalOrderedOp::charge_power(nu().clone(), 1),
        ChargeKind::Wnu2 | ChargeKind::H2 => wnu2(nu()),
        ChargeKind::Wnu3 => wnu3(nu()),
        ChargeKind::H3 => {
            let nu = nu();
            let c = S::one() - nu.clone() * nu.clone();
            wnu3(nu).scaled(nu).plus(&level_op(c, 1))
        }
    })
}

/// `γ = 2ν²(ν²−1)`.
pub fn gamma<S: Scalar>(nu: &S) -> S {
    let nu2 = nu.clone() * nu.clone();
    S::from_i64(2) * nu2.clone() * (nu2 - S::one())
}

/// Both sides of `H^{ν,3}η(n) = ℰ(n)η(n) − γ Σ_{j<l} Σ_{k≥1} k η(n + k(e_j − e_l))`.
#[derive(Clone, Debug, PartialEq)]
pub struct C2Check<S> {
    pub lhs: FockVector<S>,
    pub rhs: FockVector<S>,
    pub residual: FockVector<S>,
}

impl<S: Scalar> C2Check<S> {
    pub fn holds(&self) -> bool {
        self.residual.is_negligible()
    }
}

/// `Σ_{j<l} Σ_{k≥1} k η(n + k(e_j − e_l))`. The inner sum stops at the first
/// `k` failing the support filter; every filter sum is non-increasing in `k`,
/// so no later term can survive.
pub fn raising_sum<S: Scalar>(nu: &S, n: &MomentumVector) -> FockVector<S> {
    let big_n = n.len();
    let mut acc = FockVector::zero();
    for j in 0..big_n {
        for l in (j + 1)..big_n {
            for k in 1.. {
                let shifted = n.shifted(j, l, k);
                if !support_filter(&shifted) {
                    break;
                }
                acc.axpy(&S::from_i64(k), &build_eta(nu, &shifted).vector);
            }
        }
    }
    acc
}

pub fn check_c2<S: Scalar>(nu: &S, n: &MomentumVector) -> Result<C2Check<S>> {
    let h3 = make_operator(ChargeKind::H3, Some(nu))?;
    let eta = build_eta(nu, n).vector;
    let lhs = apply_op(&h3, &eta);
    let mut rhs = eta.scale(&eigenvalue(nu, n));
    rhs.axpy(&-gamma(nu), &raising_sum(nu, n));
    let residual = lhs.sub(&rhs);
    Ok(C2Check { lhs, rhs, residual })
}
