//! Eigenvectors of `H^{ν,3}` as finite combinations of anyon states,
//!
//! ```text
//! Ψ(n) = Σ_μ α(μ) η(n ∔ μ),   α(0) = 1,
//! α(μ) = γ/b(μ) · Σ_{j<l} Σ_{k≥1} k α(μ − k E_{jl}),
//! ```
//!
//! where `b(μ) = ℰ(n ∔ μ) − ℰ(n)` is the gap and `γ = 2ν²(ν²−1)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{apply_op, FockVector};
use crate::scalar::Scalar;
use crate::vertex::{anyon_momenta, build_eta, support_filter, MomentumVector};
use crate::wcharges::{gamma, make_operator, ChargeKind};

/// Largest offset lattice the solver will walk.
pub const MU_LIMIT: usize = 2_000_000;

/// Offsets `μ = Σ_{j<l} μ_{jl} E_{jl}`, stored in the pair order
/// `(0,1), (0,2), …, (0,N−1), (1,2), …` with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuOffset {
    size: usize,
    entries: Vec<u32>,
}

fn pair_index(size: usize, j: usize, l: usize) -> usize {
    debug_assert!(j < l && l < size);
    j * (2 * size - j - 1) / 2 + (l - j - 1)
}

impl MuOffset {
    pub fn zero(size: usize) -> MuOffset {
        MuOffset { size, entries: vec![0; size * size.saturating_sub(1) / 2] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, l: usize) -> u32 {
        self.entries[pair_index(self.size, j, l)]
    }

    pub fn set(&mut self, j: usize, l: usize, k: u32) {
        let i = pair_index(self.size, j, l);
        self.entries[i] = k;
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&k| k == 0)
    }

    /// `μ − k E_{jl}` if it stays non-negative.
    pub fn lowered(&self, j: usize, l: usize, k: u32) -> Option<MuOffset> {
        let i = pair_index(self.size, j, l);
        let mut out = self.clone();
        out.entries[i] = self.entries[i].checked_sub(k)?;
        Some(out)
    }

    /// Nonzero entries as `(j, l, μ_{jl})` with 1-based indices.
    pub fn terms(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for j in 0..self.size {
            for l in (j + 1)..self.size {
                let k = self.get(j, l);
                if k > 0 {
                    out.push((j + 1, l + 1, k));
                }
            }
        }
        out
    }

    /// `n ∔ μ`: component `k` gains `Σ_{l>k} μ_{kl}` and loses `Σ_{j<k} μ_{jk}`.
    pub fn apply(&self, n: &MomentumVector) -> MomentumVector {
        assert_eq!(n.len(), self.size);
        let mut v = n.entries().to_vec();
        for j in 0..self.size {
            for l in (j + 1)..self.size {
                let k = self.get(j, l) as i64;
                v[j] += k;
                v[l] -= k;
            }
        }
        MomentumVector::new(v)
    }

    /// Traversal key: total first, then the entries lexicographically.
    fn order_key(&self) -> (u32, &[u32]) {
        (self.total(), &self.entries)
    }
}

impl fmt::Display for MuOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let t: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(j, l, k)| if k == 1 { format!("E{j}{l}") } else { format!("{k}E{j}{l}") })
            .collect();
        write!(f, "{}", t.join("+"))
    }
}

/// `ℰ(n) = Σ_j P_j²`.
pub fn eigenvalue<S: Scalar>(nu: &S, n: &MomentumVector) -> S {
    anyon_momenta(nu, n).into_iter().fold(S::zero(), |acc, p| acc + p.clone() * p)
}

/// `Σ_j [n_j − μ_g + ν²(N+1−2j)/2]²`.
pub fn eigenvalue_gauged<S: Scalar>(nu: &S, n: &MomentumVector, mu_g: i64) -> S {
    let nu2 = nu.clone() * nu.clone();
    let big_n = n.len() as i64;
    n.entries().iter().enumerate().fold(S::zero(), |acc, (i, &nj)| {
        let j = i as i64 + 1;
        let p = S::from_i64(nj - mu_g) + nu2.clone() * S::ratio(big_n + 1 - 2 * j, 2);
        acc + p.clone() * p
    })
}

/// `b(μ) = Σ_j (2 Σ_{l>j} μ_{jl}[n_j − n_l + (l−j)ν²] + [Σ_{l<j} μ_{lj} − Σ_{l>j} μ_{jl}]²)`.
pub fn gap<S: Scalar>(nu: &S, n: &MomentumVector, mu: &MuOffset) -> S {
    let nu2 = nu.clone() * nu.clone();
    let e = n.entries();
    let size = n.len();
    let mut acc = S::zero();
    for j in 0..size {
        let mut inflow = 0i64;
        let mut outflow = 0i64;
        for l in 0..j {
            inflow += mu.get(l, j) as i64;
        }
        for l in (j + 1)..size {
            let k = mu.get(j, l) as i64;
            outflow += k;
            if k > 0 {
                let spread = S::from_i64(e[j] - e[l]) + nu2.clone() * S::from_i64((l - j) as i64);
                acc = acc + S::from_i64(2 * k) * spread;
            }
        }
        let d = inflow - outflow;
        acc = acc + S::from_i64(d * d);
    }
    acc
}

fn require_ordered(n: &MomentumVector) -> Result<()> {
    if n.is_ordered() {
        Ok(())
    } else {
        Err(Error::NotOrdered(n.entries().to_vec()))
    }
}

/// Upper bounds on the column sums `Σ_{j<l} μ_{jl}` for offsets that pass
/// the support filter. Two bounds are combined: the recursive caps
/// `C_N = n_N`, `C_l = n_l + Σ_{k>l} 2^{k−l−1}(n_k + C_k)`, and the bound
/// that also accounts for inflow into column `l` from its own row.
pub fn column_caps(n: &MomentumVector) -> Vec<i64> {
    let e = n.entries();
    let size = e.len();
    let mut plain = vec![0i64; size];
    let mut derived = vec![0i64; size];
    // tail[k] = Σ_{k'>k} derived[k']
    let mut tail = vec![0i64; size + 1];
    for l in (0..size).rev() {
        let mut c = e[l];
        let mut d = e[l] + tail[l + 1];
        for k in (l + 1)..size {
            let w = 1i64 << (k - l - 1);
            c += w * (e[k] + plain[k]);
            d += w * (e[k] + tail[k + 1]);
        }
        plain[l] = c;
        derived[l] = d;
        tail[l] = tail[l + 1] + d;
    }
    plain.iter().zip(&derived).map(|(c, d)| (*c).max(*d).max(0)).collect()
}

/// Offsets within the column caps whose shifted labels pass the support
/// filter, in traversal order.
pub fn enumerate_offsets(n: &MomentumVector) -> Result<Vec<MuOffset>> {
    let size = n.len();
    let caps = column_caps(n);
    let mut out = vec![MuOffset::zero(size)];
    for l in 1..size {
        let mut next = Vec::new();
        for base in &out {
            let mut col = vec![0u32; l];
            fill_column(base, l, 0, caps[l] as u32, &mut col, &mut next);
            if next.len() > MU_LIMIT {
                return Err(Error::EnumerationLimit(MU_LIMIT));
            }
        }
        out = next;
    }
    out.retain(|mu| support_filter(&mu.apply(n)));
    out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    Ok(out)
}

fn fill_column(base: &MuOffset, l: usize, j: usize, budget: u32, col: &mut Vec<u32>, out: &mut Vec<MuOffset>) {
    if j == l {
        let mut mu = base.clone();
        for (jj, &k) in col.iter().enumerate() {
            mu.set(jj, l, k);
        }
        out.push(mu);
        return;
    }
    for k in 0..=budget {
        col[j] = k;
        fill_column(base, l, j + 1, budget - k, col, out);
    }
    col[j] = 0;
}

/// Anyon states for one solver job, built once per label.
pub struct EtaCache<S> {
    nu: S,
    map: HashMap<MomentumVector, FockVector<S>>,
}

impl<S: Scalar> EtaCache<S> {
    pub fn new(nu: &S) -> Self {
        EtaCache { nu: nu.clone(), map: HashMap::new() }
    }

    pub fn get(&mut self, n: &MomentumVector) -> &FockVector<S> {
        let nu = &self.nu;
        self.map.entry(n.clone()).or_insert_with(|| {
            if support_filter(n) {
                build_eta(nu, n).vector
            } else {
                FockVector::zero()
            }
        })
    }
}

/// Recursion coefficients; entries with `η(n ∔ μ) = 0` or `α(μ) = 0` are omitted.
pub fn solve_coefficients<S: Scalar>(nu: &S, n: &MomentumVector) -> Result<BTreeMap<MuOffset, S>> {
    let mut cache = EtaCache::new(nu);
    solve_with_cache(nu, n, &mut cache)
}

fn solve_with_cache<S: Scalar>(nu: &S, n: &MomentumVector, cache: &mut EtaCache<S>) -> Result<BTreeMap<MuOffset, S>> {
    require_ordered(n)?;
    let size = n.len();
    let g = gamma(nu);
    let mut alpha: BTreeMap<MuOffset, S> = BTreeMap::new();
    alpha.insert(MuOffset::zero(size), S::one());
    if g.is_zero() {
        return Ok(alpha);
    }
    for mu in enumerate_offsets(n)?.into_iter().filter(|m| !m.is_zero()) {
        let mut source = S::zero();
        for j in 0..size {
            for l in (j + 1)..size {
                for k in 1..=mu.get(j, l) {
                    if let Some(a) = mu.lowered(j, l, k).and_then(|m| alpha.get(&m)) {
                        source = source + S::from_i64(k as i64) * a.clone();
                    }
                }
            }
        }
        if source.is_zero() || cache.get(&mu.apply(n)).is_zero() {
            continue;
        }
        let b = gap(nu, n, &mu);
        if b.is_zero() {
            return Err(Error::ZeroGap(mu.to_string()));
        }
        let value = g.clone() * source / b;
        if !value.is_zero() {
            alpha.insert(mu, value);
        }
    }
    Ok(alpha)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult<S> {
    pub nu: S,
    pub n: MomentumVector,
    pub energy: S,
    pub alpha: BTreeMap<MuOffset, S>,
    pub psi: FockVector<S>,
    pub certified: bool,
}

impl<S: Scalar> EigenResult<S> {
    pub fn size(&self) -> usize {
        self.n.len()
    }
}

/// Assembles `Ψ(n)` and certifies `H^{ν,3}Ψ = ℰ(n)Ψ` exactly.
pub fn build_eigenvector<S: Scalar>(nu: &S, n: &MomentumVector) -> Result<EigenResult<S>> {
    let mut cache = EtaCache::new(nu);
    let alpha = solve_with_cache(nu, n, &mut cache)?;
    let mut psi = FockVector::zero();
    for (mu, a) in &alpha {
        psi.axpy(a, cache.get(&mu.apply(n)));
    }
    let energy = eigenvalue(nu, n);
    let h3 = make_operator(ChargeKind::H3, Some(nu))?;
    let residual = apply_op(&h3, &psi).sub(&psi.scale(&energy));
    if !residual.is_negligible() {
        return Err(Error::Certification { n: n.entries().to_vec(), terms: residual.len() });
    }
    Ok(EigenResult { nu: nu.clone(), n: n.clone(), energy, alpha, psi, certified: true })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport<S> {
    pub nu: S,
    pub n: MomentumVector,
    pub is_eigen: bool,
    pub e_found: Option<S>,
    pub e_formula: S,
    pub matches: bool,
    /// Eigenvalue obtained from the operator identity with the charges as
    /// implemented here.
    pub e_derived: S,
    pub derived_matches: bool,
}

/// `E₀(Q;ν) = c(4(4ν⁴−3ν³−4ν²−9ν−5)Q² − 3ν⁴+2ν³+5ν²−2ν−3)Q`, `c = (ν²+1)/(6ν²)`.
pub fn dual_offset<S: Scalar>(nu: &S, charge: i64) -> S {
    let p = |k: u32| nu.powi(k);
    let q = S::from_i64(charge);
    let c = (p(2) + S::one()) / (S::from_i64(6) * p(2));
    let quad = S::from_i64(4)
        * (S::from_i64(4) * p(4) - S::from_i64(3) * p(3) - S::from_i64(4) * p(2) - S::from_i64(9) * p(1) - S::from_i64(5));
    let rest = -(S::from_i64(3) * p(4)) + S::from_i64(2) * p(3) + S::from_i64(5) * p(2) - S::from_i64(2) * p(1)
        - S::from_i64(3);
    c * (quad * q.clone() * q.clone() + rest) * q
}

/// `−ν² Σ P̃_j² − 2(ν²+1) N Σ P̃_j + E₀(N,ν)` with `P̃` the momenta at `−1/ν`.
pub fn dual_eigenvalue_formula<S: Scalar>(nu: &S, n: &MomentumVector) -> S {
    let dual = -(S::one() / nu.clone());
    let nu2 = nu.clone() * nu.clone();
    let p = anyon_momenta(&dual, n);
    let sum = p.iter().fold(S::zero(), |acc, x| acc + x.clone());
    let sq = p.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone());
    let big_n = n.len() as i64;
    -(nu2.clone() * sq) - S::from_i64(2 * big_n) * (nu2 + S::one()) * sum + dual_offset(nu, big_n)
}

/// `−ν² Σ P̃_j² + 2(ν²+1) N Σ P̃_j + (ν²+1)²(ν²−2)/(3ν²) N³ − (ν⁶+1)/(12ν²) N`,
/// read off from `H^{ν,3} = −ν² H^{−1/ν,3} + ν(W^{ν,3} − W^{−1/ν,3})`.
pub fn dual_eigenvalue_derived<S: Scalar>(nu: &S, n: &MomentumVector) -> S {
    let dual = -(S::one() / nu.clone());
    let nu2 = nu.clone() * nu.clone();
    let p = anyon_momenta(&dual, n);
    let sum = p.iter().fold(S::zero(), |acc, x| acc + x.clone());
    let sq = p.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone());
    let q = S::from_i64(n.len() as i64);
    let one = S::one();
    let cubic = (nu2.clone() + one.clone()) * (nu2.clone() + one.clone()) * (nu2.clone() - S::from_i64(2))
        / (S::from_i64(3) * nu2.clone());
    let linear = (nu2.powi(3) + one.clone()) / (S::from_i64(12) * nu2.clone());
    -(nu2.clone() * sq) + S::from_i64(2) * q.clone() * (nu2 + one) * sum + cubic * q.powi(3) - linear * q
}

/// Tests whether `Ψ_{−1/ν}(n)` is an eigenvector of `H^{ν,3}` and compares
/// the eigenvalue found with the closed formula.
pub fn duality_check<S: Scalar>(nu: &S, n: &MomentumVector) -> Result<DualityReport<S>> {
    let dual = -(S::one() / nu.clone());
    let psi = build_eigenvector(&dual, n)?.psi;
    let h3 = make_operator(ChargeKind::H3, Some(nu))?;
    let image = apply_op(&h3, &psi);
    let e_found = image.ratio_to(&psi);
    let e_formula = dual_eigenvalue_formula(nu, n);
    let matches = e_found.as_ref().is_some_and(|e| (e.clone() - e_formula.clone()).is_negligible());
    let e_derived = dual_eigenvalue_derived(nu, n);
    let derived_matches = e_found.as_ref().is_some_and(|e| (e.clone() - e_derived.clone()).is_negligible());
    Ok(DualityReport {
        nu: nu.clone(),
        n: n.clone(),
        is_eigen: e_found.is_some(),
        e_found,
        e_formula,
        matches,
        e_derived,
        derived_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::QuadNum;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    type Q = QuadNum;

    fn sqrt(r: i64) -> Q {
        Q::sqrt_of(&BigRational::from_integer(r.into())).unwrap()
    }

    fn mv(v: &[i64]) -> MomentumVector {
        MomentumVector::new(v.to_vec())
    }

    fn e12() -> MuOffset {
        let mut mu = MuOffset::zero(2);
        mu.set(0, 1, 1);
        mu
    }

    #[test]
    fn pair_indices_are_dense() {
        let size = 4;
        let mut seen = Vec::new();
        for j in 0..size {
            for l in (j + 1)..size {
                seen.push(pair_index(size, j, l));
            }
        }
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn gap_examples() {
        let nu = sqrt(2);
        assert_eq!(gap(&nu, &mv(&[1, 1]), &e12()), Q::from_int(6));
        assert_eq!(gap(&nu, &mv(&[1, 0]), &e12()), Q::from_int(8));
        assert_eq!(gap(&nu, &mv(&[3, 1, 0]), &MuOffset::zero(3)), Q::zero());
    }

    #[test]
    fn gap_is_energy_difference() {
        let nu = Q::ratio(3, 2);
        let n = mv(&[3, 1, 1]);
        let mut mu = MuOffset::zero(3);
        mu.set(0, 2, 1);
        mu.set(1, 2, 2);
        assert_eq!(gap(&nu, &n, &mu), eigenvalue(&nu, &mu.apply(&n)) - eigenvalue(&nu, &n));
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(&sqrt(2), &mv(&[1, 1])), Q::from_int(20));
        assert_eq!(eigenvalue_gauged(&Q::one(), &mv(&[0, 0]), 0), Q::ratio(1, 2));
        let nu = Q::sqrt_of(&BigRational::new(3.into(), 5.into())).unwrap();
        let k = Q::from_int(4) + Q::ratio(3, 10);
        assert_eq!(eigenvalue(&nu, &mv(&[4])), &k * &k);
    }

    #[test]
    fn coefficients_for_two_anyons() {
        let alpha = solve_coefficients(&sqrt(2), &mv(&[1, 1])).unwrap();
        let expect: BTreeMap<MuOffset, Q> = [(MuOffset::zero(2), Q::one()), (e12(), Q::ratio(2, 3))].into_iter().collect();
        assert_eq!(alpha, expect);
        assert_eq!(solve_coefficients(&sqrt(3), &mv(&[0, 0, 0])).unwrap().len(), 1);
        assert_eq!(solve_coefficients(&Q::one(), &mv(&[3, 2, 1])).unwrap().len(), 1);
    }

    #[test]
    fn unordered_labels_rejected() {
        assert_eq!(solve_coefficients(&sqrt(2), &mv(&[0, 1])), Err(Error::NotOrdered(vec![0, 1])));
    }

    #[test]
    fn certified_eigenvector_two_anyons() {
        let nu = sqrt(2);
        let res = build_eigenvector(&nu, &mv(&[1, 1])).unwrap();
        let expect = build_eta(&nu, &mv(&[1, 1])).vector.add(&build_eta(&nu, &mv(&[2, 0])).vector.scale(&Q::ratio(2, 3)));
        assert_eq!(res.psi, expect);
        assert_eq!(res.energy, Q::from_int(20));
        assert!(res.certified);
    }

    #[test]
    fn ground_state_is_charged_vacuum() {
        let nu = Q::ratio(1, 2);
        let res = build_eigenvector(&nu, &mv(&[0, 0, 0])).unwrap();
        assert_eq!(res.psi, FockVector::vacuum(3));
        let nu4 = nu.pow(4);
        let expect = [5, 3, 1].iter().fold(Q::zero(), |acc, &h| acc + &nu4 * &Q::ratio(h * h, 4));
        assert_eq!(res.energy, expect);
    }

    #[test]
    fn caps_cover_simple_cases() {
        assert_eq!(column_caps(&mv(&[2, 0])), vec![2, 0]);
        let caps = column_caps(&mv(&[2, 2, 2]));
        assert!(caps[2] >= 2 && caps[1] >= 4);
    }

    #[test]
    fn duality_small_cases() {
        let r = duality_check(&Q::from_int(2), &mv(&[1])).unwrap();
        assert!(r.is_eigen);
        let r = duality_check(&Q::one(), &mv(&[2, 1])).unwrap();
        assert!(r.is_eigen);
    }

    #[test]
    fn dual_eigenvalue_at_nu_two() {
        // H^{2,3} on the vacuum R Ω: ν W^{ν,3} = 2(1/4 + 2 + 4/3 − 7/12) = 4
        let r = duality_check(&Q::from_int(2), &mv(&[0])).unwrap();
        assert_eq!(r.e_found, Some(Q::from_int(4)));
        assert_eq!(r.e_derived, Q::from_int(4));
        assert_eq!(r.e_formula, Q::ratio(-71, 16));
        assert!(r.derived_matches && !r.matches);
    }

    #[test]
    fn offset_display() {
        let mut mu = MuOffset::zero(3);
        mu.set(0, 2, 2);
        mu.set(1, 2, 1);
        assert_eq!(mu.to_string(), "2E13+E23");
        assert_eq!(mu.terms(), vec![(1, 3, 2), (2, 3, 1)]);
    }
}
