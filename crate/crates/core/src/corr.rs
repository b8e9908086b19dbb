//! Regularized anyon correlation functions on the ring `[−L/2, L/2]`, the
//! smoothed sign function and the exchange and braid identities built on it.
//!
//! ```text
//! C = δ_{w₁+w₂+Σμ_j, 0} e^{iπ(w₁−w₂)ν₀ Σ ν_j x_j / L} Π_{j<k} b(x_j − x_k; ε_j + ε_k)^{ν_j ν_k}
//! b(x, ε) = e^{−iπx/L} − e^{−2πε/L} e^{iπx/L}
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockState;

pub fn b_factor(x: f64, eps: f64, length: f64) -> Complex64 {
    if eps == 0.0 && (x / length).fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let h = PI / length;
    Complex64::from_polar(1.0, -h * x) - (-2.0 * h * eps).exp() * Complex64::from_polar(1.0, h * x)
}

/// `log b(x, ε)` continued in `ε` from `ε = ∞`, where `b → e^{−iπx/L}`.
/// Valid for `|x| < L` and, when `ε = 0`, `x ≠ 0`.
pub fn b_log(x: f64, eps: f64, length: f64) -> Complex64 {
    let h = PI / length;
    let lambda = (-2.0 * h * eps).exp();
    // 1 − λe^{iθ} has non-negative real part for λ ≤ 1, so the principal log
    // is continuous in ε
    let w = Complex64::new(1.0, 0.0) - lambda * Complex64::from_polar(1.0, 2.0 * h * x);
    Complex64::new(0.0, -h * x) + w.ln()
}

pub fn b_power(x: f64, eps: f64, length: f64, exponent: f64) -> Complex64 {
    (exponent * b_log(x, eps, length)).exp()
}

/// `sgn(x; ε) = (1/π)[2πx/L + α⁺(x) + α⁻(x)]`. With `θ = 2πx/L` and
/// `λ = e^{−2πε/L}` the two logarithms combine to `−2 arg(1 − λe^{iθ})`.
pub fn sgn_reg(x: f64, eps: f64, length: f64) -> f64 {
    let theta = 2.0 * PI * x / length;
    let lambda = (-2.0 * PI * eps / length).exp();
    let w = Complex64::new(1.0 - lambda * theta.cos(), -lambda * theta.sin());
    (theta - 2.0 * w.arg()) / PI
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrSpec {
    pub length: f64,
    pub nu0: f64,
    /// `μ_j` with `ν_j = μ_j ν₀`.
    pub charges: Vec<i64>,
    pub positions: Vec<f64>,
    pub eps: Vec<f64>,
    pub w1: i64,
    pub w2: i64,
}

impl CorrSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.charges.len();
        if self.positions.len() != n || self.eps.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} charges, {} positions and {} regulators",
                n,
                self.positions.len(),
                self.eps.len()
            )));
        }
        if !(self.length > 0.0) || !(self.nu0 > 0.0) {
            return Err(Error::InvalidInput("L and ν₀ must be positive".into()));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0)) {
            return Err(Error::InvalidInput(format!("regulator {e} must be positive")));
        }
        if let Some(x) = self.positions.iter().find(|x| !(x.abs() <= self.length / 2.0)) {
            return Err(Error::InvalidInput(format!("position {x} outside [−L/2, L/2]")));
        }
        Ok(())
    }

    pub fn nu(&self, j: usize) -> f64 {
        self.charges[j] as f64 * self.nu0
    }

    /// Copy with entries `j` and `j+1` exchanged.
    pub fn swapped(&self, j: usize) -> CorrSpec {
        let mut s = self.clone();
        s.charges.swap(j, j + 1);
        s.positions.swap(j, j + 1);
        s.eps.swap(j, j + 1);
        s
    }
}

pub fn corr_eval(spec: &CorrSpec) -> Result<Complex64> {
    spec.validate()?;
    let n = spec.charges.len();
    if spec.w1 + spec.w2 + spec.charges.iter().sum::<i64>() != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let moment: f64 = (0..n).map(|j| spec.nu(j) * spec.positions[j]).sum();
    let mut log = Complex64::new(0.0, PI * (spec.w1 - spec.w2) as f64 * spec.nu0 * moment / spec.length);
    for j in 0..n {
        for k in (j + 1)..n {
            let x = spec.positions[j] - spec.positions[k];
            log += spec.nu(j) * spec.nu(k) * b_log(x, spec.eps[j] + spec.eps[k], spec.length);
        }
    }
    Ok(log.exp())
}

/// `|C − e^{−iπν_jν_{j+1} sgn(x_j − x_{j+1}; ε_j+ε_{j+1})} C(j ↔ j+1)|` with
/// `j` 0-based.
pub fn exchange_residual(spec: &CorrSpec, j: usize) -> Result<f64> {
    if j + 1 >= spec.charges.len() {
        return Err(Error::InvalidInput(format!("no pair at index {j}")));
    }
    let c = corr_eval(spec)?;
    let swapped = corr_eval(&spec.swapped(j))?;
    let s = sgn_reg(spec.positions[j] - spec.positions[j + 1], spec.eps[j] + spec.eps[j + 1], spec.length);
    let phase = Complex64::from_polar(1.0, -PI * spec.nu(j) * spec.nu(j + 1) * s);
    Ok((c - phase * swapped).norm())
}

/// Random single-species configurations with positions sorted decreasingly.
pub fn random_specs(n: usize, nu0: f64, length: f64, count: usize, seed: u64) -> Vec<CorrSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let charges: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            let mut positions: Vec<f64> = (0..n).map(|_| rng.gen_range(-length / 2.0..length / 2.0)).collect();
            positions.sort_by(|a, b| b.total_cmp(a));
            let eps = (0..n).map(|_| rng.gen_range(0.01..0.5) * length / 10.0).collect();
            let total: i64 = charges.iter().sum();
            CorrSpec { length, nu0, charges, positions, eps, w1: -total, w2: 0 }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
struct BraidState {
    points: Vec<f64>,
    phase: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BraidReport {
    pub square: f64,
    pub far_commutation: f64,
    pub yang_baxter: f64,
}

impl BraidReport {
    pub fn worst(&self) -> f64 {
        self.square.max(self.far_commutation).max(self.yang_baxter)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

struct Braid {
    nu2: f64,
    eps: f64,
    length: f64,
}

impl Braid {
    fn sigma(&self, i: usize, s: &BraidState) -> BraidState {
        let sg = sgn_reg(s.points[i] - s.points[i + 1], self.eps, self.length);
        let mut points = s.points.clone();
        points.swap(i, i + 1);
        BraidState { points, phase: s.phase * Complex64::from_polar(1.0, -PI * self.nu2 * sg / 2.0) }
    }

    fn word(&self, w: &[usize], s: &BraidState) -> BraidState {
        // rightmost generator acts first
        w.iter().rev().fold(s.clone(), |acc, &i| self.sigma(i, &acc))
    }
}

fn distance(a: &BraidState, b: &BraidState) -> f64 {
    let dx = a.points.iter().zip(&b.points).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    dx.max((a.phase - b.phase).norm())
}

/// Braid relations for the generators `σ_i`: swap `x_i, x_{i+1}` and multiply
/// by `e^{−iπν² sgn(x_i − x_{i+1}; ε)/2}`. Reports the largest deviation of
/// each relation over `trials` random tuples.
pub fn braid_check(n: usize, nu2: f64, eps: f64, trials: usize, seed: u64) -> BraidReport {
    let length = 2.0 * PI;
    let braid = Braid { nu2, eps, length };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BraidReport { square: 0.0, far_commutation: 0.0, yang_baxter: 0.0 };
    for _ in 0..trials {
        let s = BraidState {
            points: (0..n).map(|_| rng.gen_range(-length / 2.0..length / 2.0)).collect(),
            phase: Complex64::from_polar(1.0, rng.gen_range(-PI..PI)),
        };
        for i in 0..n.saturating_sub(1) {
            report.square = report.square.max(distance(&braid.word(&[i, i], &s), &s));
            for j in (i + 2)..n.saturating_sub(1) {
                let d = distance(&braid.word(&[i, j], &s), &braid.word(&[j, i], &s));
                report.far_commutation = report.far_commutation.max(d);
            }
            if i + 2 < n {
                let d = distance(&braid.word(&[i, i + 1, i], &s), &braid.word(&[i + 1, i, i + 1], &s));
                report.yang_baxter = report.yang_baxter.max(d);
            }
        }
    }
    report
}

/// `e^{−iπν²N Σx/L} Δ^{ν²}(x)` with `Δ^{ν²} = Π_{j<k} b(x_j − x_k; 0)^{ν²}`.
pub fn ground_state_factor(nu2: f64, x: &[f64], length: f64) -> Complex64 {
    let n = x.len() as f64;
    let mut log = Complex64::new(0.0, -PI * nu2 * n * x.iter().sum::<f64>() / length);
    for j in 0..x.len() {
        for k in (j + 1)..x.len() {
            log += nu2 * b_log(x[j] - x[k], 0.0, length);
        }
    }
    log.exp()
}

/// Closed form of `lim ⟨η_b, φ(x₁)⋯φ(x_N)Ω⟩` for the basis state
/// `η_b = b₋q₁⋯b₋qₙ R^ℓ Ω`, with `ν₀ = ν`:
/// `δ_{ℓ,N} e^{−iπν²NΣx/L} Π_j (Σ_k ν e^{−2πi q_j x_k/L}) Δ^{ν²}`.
pub fn fetab_eval(nu: f64, state: &FockState, x: &[f64], length: f64) -> Complex64 {
    if state.charge != x.len() as i64 {
        return Complex64::new(0.0, 0.0);
    }
    let u = 2.0 * PI / length;
    let sums: Complex64 = state
        .parts
        .parts()
        .iter()
        .map(|&q| x.iter().map(|&xk| nu * Complex64::from_polar(1.0, -u * q as f64 * xk)).sum::<Complex64>())
        .product();
    sums * ground_state_factor(nu * nu, x, length)
}

/// Sweep table: `x1..xN, eps1..epsN, re, im`.
pub fn corr_csv(specs: &[CorrSpec]) -> Result<String> {
    let n = specs.first().map_or(0, |s| s.charges.len());
    let mut out = String::new();
    let mut head: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    head.extend((1..=n).map(|j| format!("eps{j}")));
    head.extend(["re".to_string(), "im".to_string()]);
    writeln!(out, "{}", head.join(",")).expect("string write");
    for s in specs {
        if s.charges.len() != n {
            return Err(Error::InvalidInput("sweep rows differ in particle number".into()));
        }
        let c = corr_eval(s)?;
        let row: Vec<String> = s.positions.iter().chain(&s.eps).map(|v| format!("{v:.12e}")).collect();
        writeln!(out, "{},{:.12e},{:.12e}", row.join(","), c.re, c.im).expect("string write");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    const L: f64 = 2.0 * PI;

    fn spec(charges: Vec<i64>, positions: Vec<f64>, eps: Vec<f64>, nu0: f64) -> CorrSpec {
        CorrSpec { length: L, nu0, charges, positions, eps, w1: 0, w2: 0 }
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_factor(0.0, 0.0, L), Complex64::new(0.0, 0.0));
        assert!((b_factor(L / 2.0, 0.0, L) - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        for i in 0..100 {
            let x = -L / 2.0 + L * i as f64 / 99.0;
            let eps = 0.001 + 0.01 * i as f64;
            let h = PI / L;
            let dual = Complex64::new(0.0, -2.0) * (-h * eps).exp() * (h * Complex64::new(x, eps)).sin();
            assert!((b_factor(x, eps, L) - dual).norm() <= 1e-14);
            assert!((b_log(x, eps, L).exp() - b_factor(x, eps, L)).norm() <= 1e-14);
        }
    }

    #[test]
    fn sgn_examples() {
        assert_eq!(sgn_reg(0.0, 0.3, L), 0.0);
        assert!((sgn_reg(L / 4.0, 1e-6, L) - 1.0).abs() <= 1e-4);
        assert!((sgn_reg(-L / 4.0, 1e-6, L) + 1.0).abs() <= 1e-4);
        for i in 0..50 {
            let x = L * (i as f64 / 50.0 - 0.5);
            assert!((sgn_reg(x, 0.2, L) + sgn_reg(-x, 0.2, L)).abs() <= 1e-14);
        }
    }

    #[test]
    fn corr_examples() {
        let nu = 0.8;
        let s = spec(vec![1, -1], vec![0.7, -0.4], vec![0.1, 0.2], nu);
        let expect = b_power(1.1, 0.3 + 0.0, L, -nu * nu);
        assert!((corr_eval(&s).unwrap() - expect).norm() < 1e-14);
        let s = spec(vec![1, 1], vec![0.7, -0.4], vec![0.1, 0.2], nu);
        assert_eq!(corr_eval(&s).unwrap(), Complex64::new(0.0, 0.0));
        let vac = CorrSpec { length: L, nu0: 1.0, charges: vec![], positions: vec![], eps: vec![], w1: 3, w2: -3 };
        assert_eq!(corr_eval(&vac).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exchange_examples() {
        let s = spec(vec![1, -1], vec![0.3, 0.3], vec![0.1, 0.1], 0.7);
        assert!(exchange_residual(&s, 0).unwrap() <= 1e-12);
        let s = spec(vec![1, 1, -1], vec![1.2, -0.5, -2.0], vec![0.05, 0.1, 0.2], 1.0);
        let s = CorrSpec { w1: -1, ..s };
        assert!(exchange_residual(&s, 0).unwrap() <= 1e-12);
        assert!(exchange_residual(&s, 1).unwrap() <= 1e-12);
        for s in random_specs(2, 0.5f64.sqrt(), L, 50, 3) {
            assert!(exchange_residual(&s, 0).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn braid_examples() {
        assert!(braid_check(4, 0.7, 0.1, 20, 1).passes(1e-12));
        assert!(braid_check(3, 1.0 / 3.0, 0.05, 20, 2).passes(1e-12));
    }

    #[test]
    fn pair_correlation_inverts_ground_factor() {
        let nu2: f64 = 0.6;
        let x = [1.0, -0.9];
        let c = corr_eval(&spec(vec![1, -1], x.to_vec(), vec![5e-13, 5e-13], nu2.sqrt())).unwrap();
        let delta = b_power(x[0] - x[1], 0.0, L, nu2);
        assert!((c * delta - 1.0).norm() < 1e-8);
    }

    #[test]
    fn fetab_on_vacuum_sector() {
        let st = FockState::new(2, Partition::empty());
        let x = [0.4, -1.3];
        assert!((fetab_eval(1.3, &st, &x, L) - ground_state_factor(1.69, &x, L)).norm() < 1e-15);
        assert_eq!(fetab_eval(1.3, &FockState::new(1, Partition::empty()), &x, L), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bad_specs_rejected() {
        let s = spec(vec![1], vec![0.0, 1.0], vec![0.1], 1.0);
        assert!(corr_eval(&s).is_err());
        let s = spec(vec![1, -1], vec![0.0, 1.0], vec![0.1, 0.0], 1.0);
        assert!(corr_eval(&s).is_err());
    }
}
