//! Symmetric polynomials in the monomial basis, the two routes from anyon
//! states to polynomials, the Calogero–Sutherland operator in `z`-variables
//! and numerical evaluation of the resulting wave functions.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corr::b_log;
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::partition::{partitions_bounded, Partition};
use crate::scalar::{binomial, Scalar};
use crate::solver::{build_eigenvector, eigenvalue, eigenvalue_gauged, EigenResult};
use crate::vertex::{anyon_momenta, MomentumVector};

type Exponent = Vec<u32>;

/// Homogeneous symmetric polynomial `Σ c_λ m_λ(z₁,…,z_N)`.
#[derive(Clone, Debug)]
pub struct SymPoly<S> {
    vars: usize,
    degree: u32,
    coeffs: BTreeMap<Partition, S>,
}

// the degree of the zero polynomial carries no information
impl<S: PartialEq> PartialEq for SymPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.coeffs == other.coeffs
            && (self.degree == other.degree || self.coeffs.is_empty())
    }
}

impl<S: Scalar> SymPoly<S> {
    pub fn zero(vars: usize, degree: u32) -> Self {
        SymPoly { vars, degree, coeffs: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        SymPoly::monomial(vars, Partition::empty(), S::one())
    }

    /// `c·m_λ`; `λ` must have at most `vars` parts.
    pub fn monomial(vars: usize, lambda: Partition, c: S) -> Self {
        assert!(lambda.len() <= vars, "{lambda} has more than {vars} parts");
        let mut p = SymPoly::zero(vars, lambda.weight());
        p.add_term(lambda, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &S)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, lambda: &Partition) -> S {
        self.coeffs.get(lambda).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_negligible(&self) -> bool {
        self.coeffs.values().all(S::is_negligible)
    }

    fn add_term(&mut self, lambda: Partition, c: S) {
        assert_eq!(lambda.weight(), self.degree, "inhomogeneous term {lambda}");
        if c.is_zero() || lambda.len() > self.vars {
            return;
        }
        let slot = self.coeffs.entry(lambda).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn axpy(&mut self, k: &S, other: &Self) {
        assert_eq!(self.vars, other.vars);
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        for (l, c) in &other.coeffs {
            self.add_term(l.clone(), k.clone() * c.clone());
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = SymPoly::zero(self.vars, self.degree);
        out.axpy(k, self);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(&-S::one(), other);
        out
    }

    /// If `self = k·other`, returns `k`.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        if self.is_zero() {
            return Some(S::zero());
        }
        let (lambda, c) = other.coeffs.iter().next_back()?;
        let k = self.coeff(lambda) / c.clone();
        self.sub(&other.scale(&k)).is_negligible().then_some(k)
    }

    /// Largest partition in the crate's basis order with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&Partition, &S)> {
        self.coeffs.iter().next_back()
    }

    /// Coefficients mapped through `f`, e.g. into a floating type.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymPoly<T> {
        let mut out = SymPoly::zero(self.vars, self.degree);
        for (l, c) in &self.coeffs {
            out.add_term(l.clone(), f(c));
        }
        out
    }

    fn to_dense(&self) -> BTreeMap<Exponent, S> {
        let mut out = BTreeMap::new();
        for (lambda, c) in &self.coeffs {
            for e in distinct_permutations(&lambda.padded(self.vars).expect("checked length")) {
                out.insert(e, c.clone());
            }
        }
        out
    }

    fn from_dense(vars: usize, degree: u32, dense: &BTreeMap<Exponent, S>) -> Self {
        let mut out = SymPoly::zero(vars, degree);
        for (e, c) in dense {
            if e.windows(2).all(|w| w[0] >= w[1]) {
                out.add_term(Partition::new(e.clone()), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let a = self.to_dense();
        let b = other.to_dense();
        let mut prod: BTreeMap<Exponent, S> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                // only the sorted representatives are read back
                if e.windows(2).all(|w| w[0] >= w[1]) {
                    let slot = prod.entry(e).or_insert_with(S::zero);
                    *slot = slot.clone() + ca.clone() * cb.clone();
                }
            }
        }
        SymPoly::from_dense(self.vars, self.degree + other.degree, &prod)
    }

    /// Evaluates at complex points `z`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.vars);
        self.dense_f64().iter().map(|(e, c)| c * monomial_value(e, z)).sum()
    }

    fn dense_f64(&self) -> Vec<(Exponent, Complex64)> {
        self.to_dense().into_iter().map(|(e, c)| (e, c.to_complex())).collect()
    }
}

fn monomial_value(e: &[u32], z: &[Complex64]) -> Complex64 {
    e.iter().zip(z).fold(Complex64::new(1.0, 0.0), |acc, (&k, zi)| acc * zi.powu(k))
}

fn distinct_permutations(v: &[u32]) -> Vec<Exponent> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Integer expansion of the power sum `p_λ` in the monomial basis of `N` variables.
fn power_sum_table(vars: usize, lambda: &Partition) -> Vec<(Partition, i64)> {
    type Table = HashMap<(usize, Partition), Vec<(Partition, i64)>>;
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (vars, lambda.clone());
    if let Some(hit) = table.read().expect("table lock").get(&key) {
        return hit.clone();
    }
    let mut acc = SymPoly::<i64>::one_int(vars);
    for &k in lambda.parts() {
        acc = acc.mul_int(&SymPoly::<i64>::power_sum_int(vars, k));
    }
    let value: Vec<(Partition, i64)> = acc.coeffs.into_iter().collect();
    table.write().expect("table lock").insert(key, value.clone());
    value
}

// integer polynomials only serve the power-sum table
impl SymPoly<i64> {
    fn one_int(vars: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Partition::empty(), 1);
        SymPoly { vars, degree: 0, coeffs }
    }

    fn power_sum_int(vars: usize, k: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Partition::new(vec![k]), 1);
        SymPoly { vars, degree: k, coeffs }
    }

    fn mul_int(&self, other: &Self) -> Self {
        let dense = |p: &Self| -> Vec<(Exponent, i64)> {
            p.coeffs
                .iter()
                .flat_map(|(l, &c)| distinct_permutations(&l.padded(p.vars).unwrap()).into_iter().map(move |e| (e, c)))
                .collect()
        };
        let mut coeffs: BTreeMap<Partition, i64> = BTreeMap::new();
        for (ea, ca) in dense(self) {
            for (eb, cb) in dense(other) {
                let e: Exponent = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if e.windows(2).all(|w| w[0] >= w[1]) {
                    *coeffs.entry(Partition::new(e)).or_insert(0) += ca * cb;
                }
            }
        }
        coeffs.retain(|_, c| *c != 0);
        SymPoly { vars: self.vars, degree: self.degree + other.degree, coeffs }
    }
}

/// `p_λ(z₁,…,z_N)` in the monomial basis.
pub fn power_sum<S: Scalar>(vars: usize, lambda: &Partition) -> SymPoly<S> {
    let mut out = SymPoly::zero(vars, lambda.weight());
    for (mu, c) in power_sum_table(vars, lambda) {
        out.add_term(mu, S::from_i64(c));
    }
    out
}

/// Fock route: `(ℓ, λ) ↦ δ_{ℓ,N} ν^{len λ} p_λ`, coefficients conjugated.
pub fn poly_from_fock<S: Scalar>(nu: &S, v: &FockVector<S>, vars: usize) -> SymPoly<S> {
    let degree = v.iter().find(|(s, _)| s.charge == vars as i64).map(|(s, _)| s.level()).unwrap_or(0);
    let mut out = SymPoly::zero(vars, degree);
    for (state, c) in v.iter() {
        if state.charge != vars as i64 {
            continue;
        }
        let k = c.conj() * nu.powi(state.parts.len() as u32);
        out.axpy(&k, &power_sum(vars, &state.parts));
    }
    out
}

/// `Σ_{|m|=M} Π_l binom(−ν², m_l)(−z_l)^{m_l}` in the monomial basis.
fn row_factor<S: Scalar>(minus_nu2: &S, vars: usize, total: u32) -> SymPoly<S> {
    let mut out = SymPoly::zero(vars, total);
    for lambda in partitions_bounded(total, vars) {
        let c = lambda.parts().iter().fold(S::one(), |acc, &m| {
            let sign = if m % 2 == 0 { S::one() } else { -S::one() };
            acc * binomial(minus_nu2, m) * sign
        });
        out.add_term(lambda, c);
    }
    out
}

/// Direct route: the closed expansion of the anyon state polynomial,
///
/// ```text
/// Σ′ Π_j Π_{j'<j} binom(ν², μ_{jj'}) (−1)^{μ_{jj'}} Π_{j,l} binom(−ν², m_{jl}) (−z_l)^{m_{jl}}
/// ```
///
/// over `μ_{jj'}, m_{jl} ≥ 0` with `Σ_{j'<j} μ_{jj'} − Σ_{j'>j} μ_{j'j} + Σ_l m_{jl} = n_j`.
pub fn poly_from_eta<S: Scalar>(nu: &S, n: &MomentumVector) -> SymPoly<S> {
    let vars = n.len();
    let nu2 = nu.clone() * nu.clone();
    let minus_nu2 = -nu2.clone();
    let degree = n.total().max(0) as u32;
    let mut out = SymPoly::zero(vars, degree);
    if n.total() < 0 {
        return out;
    }
    let mut rows: HashMap<u32, SymPoly<S>> = HashMap::new();
    // mu[j][j'] for j' < j; rows are filled from the last one upwards so the
    // inflow Σ_{j'>j} μ_{j'j} into row j is known when it is reached.
    let mut mu = vec![vec![0u32; vars]; vars];
    let mut assignments: Vec<(S, Vec<u32>)> = Vec::new();
    walk_rows(vars, vars, n.entries(), &nu2, &mut mu, &mut assignments);
    for (w, totals) in assignments {
        let mut prod = SymPoly::one(vars);
        for t in totals {
            let f = rows.entry(t).or_insert_with(|| row_factor(&minus_nu2, vars, t));
            prod = prod.mul(f);
        }
        out.axpy(&w, &prod);
    }
    out
}

fn walk_rows<S: Scalar>(
    vars: usize,
    row: usize,
    n: &[i64],
    nu2: &S,
    mu: &mut Vec<Vec<u32>>,
    out: &mut Vec<(S, Vec<u32>)>,
) {
    if row == 0 {
        let mut weight = S::one();
        let mut totals = Vec::with_capacity(vars);
        for j in 0..vars {
            let outflow: i64 = (0..j).map(|jp| mu[j][jp] as i64).sum();
            let inflow: i64 = ((j + 1)..vars).map(|jp| mu[jp][j] as i64).sum();
            let m = n[j] - outflow + inflow;
            if m < 0 {
                return;
            }
            totals.push(m as u32);
            for &k in &mu[j][..j] {
                let sign = if k.is_multiple_of(2) { S::one() } else { -S::one() };
                weight = weight * binomial(nu2, k) * sign;
            }
        }
        if !weight.is_zero() {
            out.push((weight, totals));
        }
        return;
    }
    let j = row - 1;
    let inflow: i64 = ((j + 1)..vars).map(|jp| mu[jp][j] as i64).sum();
    let budget = n[j] + inflow;
    if budget < 0 {
        return;
    }
    fill_row(vars, j, 0, budget as u32, n, nu2, mu, out);
}

#[allow(clippy::too_many_arguments)]
fn fill_row<S: Scalar>(
    vars: usize,
    j: usize,
    jp: usize,
    budget: u32,
    n: &[i64],
    nu2: &S,
    mu: &mut Vec<Vec<u32>>,
    out: &mut Vec<(S, Vec<u32>)>,
) {
    if jp == j {
        walk_rows(vars, j, n, nu2, mu, out);
        return;
    }
    for k in 0..=budget {
        mu[j][jp] = k;
        fill_row(vars, j, jp + 1, budget - k, n, nu2, mu, out);
    }
    mu[j][jp] = 0;
}

/// `Σ_j D_j² P + ν² Σ_{j<k} (z_j+z_k)/(z_j−z_k) (D_j − D_k) P` with
/// `D_j = z_j ∂/∂z_j`: the Calogero–Sutherland operator on `P(e^{−ix})`
/// with the ground-state factor removed, for `2π/L = 1`.
pub fn cs_operator_apply<S: Scalar>(nu2: &S, p: &SymPoly<S>) -> SymPoly<S> {
    let vars = p.vars;
    let dense = p.to_dense();
    let mut out: BTreeMap<Exponent, S> = BTreeMap::new();
    let mut push = |e: Exponent, c: S| {
        if e.windows(2).all(|w| w[0] >= w[1]) {
            let slot = out.entry(e).or_insert_with(S::zero);
            *slot = slot.clone() + c;
        }
    };
    for (e, c) in &dense {
        let diag: i64 = e.iter().map(|&k| (k as i64) * (k as i64)).sum();
        push(e.clone(), c.clone() * S::from_i64(diag));
        for j in 0..vars {
            for k in (j + 1)..vars {
                let (a, b) = (e[j], e[k]);
                if a <= b {
                    continue;
                }
                // (a−b)(z_j+z_k) z_j^b z_k^b Σ_{i<a−b} z_j^i z_k^{a−b−1−i}, which is the
                // combined image of z^e and its (j,k)-swap
                let w = c.clone() * nu2.clone() * S::from_i64((a - b) as i64);
                let d = a - b;
                for i in 0..d {
                    for (sj, sk) in [(1, 0), (0, 1)] {
                        let mut f = e.clone();
                        f[j] = b + i + sj;
                        f[k] = b + (d - 1 - i) + sk;
                        push(f, w.clone());
                    }
                }
            }
        }
    }
    SymPoly::from_dense(vars, p.degree, &out)
}

/// `Σ_j (n_j² + ν² n_j (N+1−2j))`.
pub fn cs_eigenvalue<S: Scalar>(nu2: &S, n: &MomentumVector) -> S {
    let big_n = n.len() as i64;
    n.entries().iter().enumerate().fold(S::zero(), |acc, (i, &nj)| {
        let j = i as i64 + 1;
        acc + S::from_i64(nj * nj) + nu2.clone() * S::from_i64(nj * (big_n + 1 - 2 * j))
    })
}

/// Jack polynomial for `α = 1/ν²` in `N` variables, monic in `m_λ`, from
/// triangular back-substitution of [`cs_operator_apply`] over the partitions
/// dominated by `λ`.
pub fn jack_oracle<S: Scalar>(nu2: &S, lambda: &Partition, vars: usize) -> Result<SymPoly<S>> {
    if lambda.len() > vars {
        return Err(Error::InvalidInput(format!("{lambda} has more than {vars} parts")));
    }
    let mut below: Vec<Partition> = partitions_bounded(lambda.weight(), vars)
        .into_iter()
        .filter(|mu| lambda.dominates(mu))
        .collect();
    // basis order is a linear extension of dominance; walk downwards
    below.sort();
    below.reverse();
    let images: Vec<SymPoly<S>> = below.iter().map(|mu| cs_operator_apply(nu2, &SymPoly::monomial(vars, mu.clone(), S::one()))).collect();
    let diag = |i: usize| images[i].coeff(&below[i]);
    let e_top = diag(0);
    let mut c: Vec<S> = vec![S::zero(); below.len()];
    c[0] = S::one();
    for i in 1..below.len() {
        let mut rhs = S::zero();
        for k in 0..i {
            if !c[k].is_zero() {
                rhs = rhs + c[k].clone() * images[k].coeff(&below[i]);
            }
        }
        let gap = e_top.clone() - diag(i);
        if gap.is_negligible() {
            if rhs.is_negligible() {
                continue;
            }
            return Err(Error::EigenvalueCollision(lambda.to_string(), below[i].to_string()));
        }
        c[i] = rhs / gap;
    }
    let mut out = SymPoly::zero(vars, lambda.weight());
    for (mu, ci) in below.into_iter().zip(c) {
        out.add_term(mu, ci);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JackReport<S> {
    pub lambda: Partition,
    pub vars: usize,
    pub poly: SymPoly<S>,
    pub jack: SymPoly<S>,
    pub ratio: Option<S>,
}

impl<S: Scalar> JackReport<S> {
    pub fn matches(&self) -> bool {
        self.ratio.as_ref().is_some_and(|r| !r.is_negligible())
    }
}

/// Compares the eigenfunction polynomial for label `λ` with the Jack oracle.
pub fn jack_compare<S: Scalar>(nu: &S, lambda: &Partition, vars: usize) -> Result<JackReport<S>> {
    let n = MomentumVector::from_partition(lambda, vars)
        .ok_or_else(|| Error::InvalidInput(format!("{lambda} has more than {vars} parts")))?;
    let res = build_eigenvector(nu, &n)?;
    let poly = eigen_polynomial(&res)?;
    let nu2 = nu.clone() * nu.clone();
    let jack = jack_oracle(&nu2, lambda, vars)?;
    let ratio = poly.ratio_to(&jack);
    Ok(JackReport { lambda: lambda.clone(), vars, poly, jack, ratio })
}

/// `Σ_μ conj α(μ) · poly_from_eta(ν, n ∔ μ)`, checked against the Fock route.
pub fn eigen_polynomial<S: Scalar>(res: &EigenResult<S>) -> Result<SymPoly<S>> {
    let vars = res.size();
    let mut direct = SymPoly::zero(vars, res.n.total() as u32);
    for (mu, a) in &res.alpha {
        direct.axpy(&a.conj(), &poly_from_eta(&res.nu, &mu.apply(&res.n)));
    }
    let fock = poly_from_fock(&res.nu, &res.psi, vars);
    if !direct.sub(&fock).is_negligible() {
        return Err(Error::RouteMismatch(res.n.entries().to_vec()));
    }
    Ok(direct)
}

/// A certified eigenfunction ready for numerical evaluation:
/// `ψ(x) = e^{iκ Σx} Δ^{ν²}(x) P(e^{−2πix₁/L}, …)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunctionSpec<S> {
    pub nu: S,
    pub n: MomentumVector,
    /// Centre-of-mass gauge `μ_g`; `None` keeps the ungauged form.
    pub gauge: Option<u32>,
    pub length: f64,
    pub poly: SymPoly<S>,
}

pub fn assemble_eigenfunction<S: Scalar>(res: &EigenResult<S>, gauge: Option<u32>, length: f64) -> Result<WaveFunctionSpec<S>> {
    if !res.certified {
        return Err(Error::Certification { n: res.n.entries().to_vec(), terms: 0 });
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidInput(format!("ring length {length} must be positive")));
    }
    let poly = eigen_polynomial(res)?;
    Ok(WaveFunctionSpec { nu: res.nu.clone(), n: res.n.clone(), gauge, length, poly })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticReport {
    pub pde_residual: f64,
    pub momentum_residual: f64,
}

impl<S: Scalar> WaveFunctionSpec<S> {
    fn beta(&self) -> f64 {
        let nu = self.nu.to_complex().re;
        nu * nu
    }

    fn unit(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Total plane-wave rate `κ` of the prefactor `e^{iκ Σx}`.
    fn kappa(&self) -> f64 {
        let big_n = self.n.len() as f64;
        let base = -PI * self.beta() * big_n / self.length;
        match self.gauge {
            None => base,
            Some(mu) => base + PI * (self.beta() * big_n + 2.0 * mu as f64) / self.length,
        }
    }

    /// Energy in physical units `(2π/L)²`.
    pub fn energy(&self) -> f64 {
        let u = match self.gauge {
            None => eigenvalue(&self.nu, &self.n),
            Some(mu) => eigenvalue_gauged(&self.nu, &self.n, mu as i64),
        };
        u.to_complex().re * self.unit() * self.unit()
    }

    /// Eigenvalue of `Σ_j i∂_j`.
    pub fn momentum(&self) -> f64 {
        let total: S = anyon_momenta(&self.nu, &self.n).into_iter().fold(S::zero(), |a, b| a + b);
        let shift = match self.gauge {
            None => 0.0,
            Some(mu) => self.n.len() as f64 * PI * (self.beta() * self.n.len() as f64 + 2.0 * mu as f64) / self.length,
        };
        total.to_complex().re * self.unit() - shift
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        let l = self.length;
        if x.len() != self.n.len() {
            return Err(Error::InadmissiblePoint(format!("expected {} coordinates, got {}", self.n.len(), x.len())));
        }
        for (j, &xj) in x.iter().enumerate() {
            if !(xj.abs() < l / 2.0) {
                return Err(Error::InadmissiblePoint(format!("x{} = {xj} outside the open ring", j + 1)));
            }
            for &xk in &x[j + 1..] {
                if (xj - xk).abs() < l / 20.0 {
                    return Err(Error::InadmissiblePoint(format!("points {xj} and {xk} closer than L/20")));
                }
            }
        }
        Ok(())
    }

    /// `ψ(x)` with `Δ^{ν²}` continued from the sector `x₁ > x₂ > ⋯`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        self.check_point(x)?;
        let beta = self.beta();
        let mut log_g = Complex64::new(0.0, self.kappa() * x.iter().sum::<f64>());
        for j in 0..x.len() {
            for k in (j + 1)..x.len() {
                log_g += beta * b_log(x[j] - x[k], 0.0, self.length);
            }
        }
        let z: Vec<Complex64> = x.iter().map(|&xi| Complex64::from_polar(1.0, -self.unit() * xi)).collect();
        Ok(log_g.exp() * self.poly.eval(&z))
    }

    /// Relative residuals of `(H − E)ψ` and `(Σ i∂_j − Π)ψ` at the given points,
    /// using analytic derivatives of the ground-state factor.
    pub fn analytic_checks(&self, points: &[Vec<f64>]) -> Result<AnalyticReport> {
        let beta = self.beta();
        let unit = self.unit();
        let h = PI / self.length;
        let energy = self.energy();
        let momentum = self.momentum();
        let dense = self.poly.dense_f64();
        let mut pde = 0.0f64;
        let mut mom = 0.0f64;
        for x in points {
            self.check_point(x)?;
            let big_n = x.len();
            let z: Vec<Complex64> = x.iter().map(|&xi| Complex64::from_polar(1.0, -unit * xi)).collect();
            // P, D_j P and D_j² P at z
            let mut p = Complex64::new(0.0, 0.0);
            let mut dp = vec![Complex64::new(0.0, 0.0); big_n];
            let mut d2p = vec![Complex64::new(0.0, 0.0); big_n];
            for (e, c) in &dense {
                let v = c * monomial_value(e, &z);
                p += v;
                for j in 0..big_n {
                    let k = e[j] as f64;
                    dp[j] += v * k;
                    d2p[j] += v * k * k;
                }
            }
            let i = Complex64::new(0.0, 1.0);
            let mut h_over_g = Complex64::new(0.0, 0.0);
            let mut p_over_g = Complex64::new(0.0, 0.0);
            for j in 0..big_n {
                let mut cot = 0.0;
                let mut csc2 = 0.0;
                for k in 0..big_n {
                    if k != j {
                        let t = h * (x[j] - x[k]);
                        cot += t.cos() / t.sin();
                        csc2 += 1.0 / (t.sin() * t.sin());
                    }
                }
                let g = i * self.kappa() + beta * h * cot;
                let dg = -beta * h * h * csc2;
                // ∂_x = −i·unit·D on P(e^{−i·unit·x})
                let d1 = -i * unit * dp[j];
                let d2 = -(unit * unit) * d2p[j];
                h_over_g -= (g * g + dg) * p + 2.0 * g * d1 + d2;
                p_over_g += i * (g * p + d1);
                for k in 0..big_n {
                    if k != j {
                        let s = (h * (x[j] - x[k])).sin();
                        h_over_g += h * h * beta * (beta - 1.0) / (s * s) * p;
                    }
                }
            }
            let scale = p.norm().max(f64::MIN_POSITIVE);
            pde = pde.max((h_over_g - energy * p).norm() / (energy.abs().max(1.0) * scale));
            mom = mom.max((p_over_g - momentum * p).norm() / (momentum.abs().max(1.0) * scale));
        }
        Ok(AnalyticReport { pde_residual: pde, momentum_residual: mom })
    }

    /// Evaluation table: `x1..xN, re, im, residual`, one row per point.
    pub fn evaluation_csv(&self, points: &[Vec<f64>]) -> Result<String> {
        let mut out = String::new();
        let cols: Vec<String> = (1..=self.n.len()).map(|j| format!("x{j}")).collect();
        writeln!(out, "{},re,im,residual", cols.join(",")).expect("string write");
        for x in points {
            let psi = self.evaluate(x)?;
            let r = self.analytic_checks(std::slice::from_ref(x))?;
            let xs: Vec<String> = x.iter().map(|v| format!("{v:.12e}")).collect();
            writeln!(out, "{},{:.12e},{:.12e},{:.3e}", xs.join(","), psi.re, psi.im, r.pde_residual).expect("string write");
        }
        Ok(out)
    }
}

/// Random points in `(−L/2, L/2)^N`, pairwise at least `L/20` apart and at
/// least `L/40` from the ends, sorted decreasingly.
pub fn admissible_points(vars: usize, length: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = length / 2.0 - length / 40.0;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut x: Vec<f64> = (0..vars).map(|_| rng.gen_range(-half..half)).collect();
        x.sort_by(|a, b| b.total_cmp(a));
        if x.windows(2).all(|w| w[0] - w[1] >= length / 20.0 * 1.0001) {
            out.push(x);
        }
    }
    out
}
