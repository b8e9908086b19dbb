//! Acceptance criteria. Each criterion prints one line; the process exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use anyon_cs::corr::{b_factor, braid_check, corr_eval, sgn_reg, CorrSpec};
use anyon_cs::fock::{apply_mode, apply_op, sector_matrix, FockState, FockVector};
use anyon_cs::partition::{partitions, partitions_bounded, Partition};
use anyon_cs::solver::{build_eigenvector, duality_check, MuOffset};
use anyon_cs::sympoly::{admissible_points, assemble_eigenfunction, jack_compare, poly_from_eta, poly_from_fock, SymPoly};
use anyon_cs::vertex::{build_eta, support_filter, vertex_mode, MomentumVector};
use anyon_cs::wcharges::{make_operator, ChargeKind};
use anyon_cs::{Exact, ExactFock};
use num_complex::Complex64;
use num_rational::BigRational;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> Exact {
    Exact::ratio(n, d)
}

fn int(n: i64) -> Exact {
    Exact::from_int(n)
}

fn root(r: i64) -> Exact {
    Exact::sqrt_of(&BigRational::from_integer(r.into())).unwrap()
}

fn nus() -> Vec<Exact> {
    vec![int(1), int(2), q(1, 2), q(3, 2), root(2), root(3)]
}

fn mv(v: &[i64]) -> MomentumVector {
    MomentumVector::new(v.to_vec())
}

fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec())
}

/// Every `n ∈ ℕ₀^N` with `Σn ≤ total`, `1 ≤ N ≤ max_n`.
fn all_momenta(max_n: usize, total: i64) -> Vec<MomentumVector> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut v = vec![0i64; n];
        loop {
            if v.iter().sum::<i64>() <= total {
                out.push(MomentumVector::new(v.clone()));
            }
            let mut i = 0;
            while i < n && v[i] == total {
                v[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
    out
}

fn ordered_momenta(max_n: usize, total: u32) -> Vec<MomentumVector> {
    all_momenta(max_n, total as i64).into_iter().filter(|n| n.is_ordered()).collect()
}

/// `Σ_j (n_j + ν²(N−j+½))` and its square-sum counterpart.
fn momenta(nu: &Exact, n: &MomentumVector) -> Vec<Exact> {
    let nu2 = nu * nu;
    let big_n = n.len() as i64;
    n.entries().iter().enumerate().map(|(i, &nj)| int(nj) + &nu2 * &q(2 * (big_n - i as i64 - 1) + 1, 2)).collect()
}

fn energy(nu: &Exact, n: &MomentumVector) -> Exact {
    momenta(nu, n).iter().fold(int(0), |a, p| a + p * p)
}

fn heisenberg() -> Outcome {
    let mut count = 0;
    for charge in -1..=1 {
        for level in 0..=8 {
            for p in partitions(level) {
                let v: ExactFock = FockVector::basis(FockState::new(charge, p));
                for m in (-6..=6).filter(|m| *m != 0) {
                    for n in (-6..=6).filter(|n| *n != 0) {
                        let mn = apply_mode(m, &apply_mode(n, &v).unwrap()).unwrap();
                        let nm = apply_mode(n, &apply_mode(m, &v).unwrap()).unwrap();
                        let expect = if m + n == 0 { v.scale(&int(m)) } else { FockVector::zero() };
                        if mn.sub(&nm) != expect {
                            return Err(format!("[b{m}, b{n}] fails at charge {charge}"));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} commutators exact"))
}

fn zero_mode() -> Outcome {
    for nu in nus() {
        for l in -3..=3 {
            if vertex_mode(&nu, 0, &FockVector::vacuum(l)) != FockVector::vacuum(l + 1) {
                return Err(format!("ν = {nu}, ℓ = {l}"));
            }
        }
    }
    Ok("ℓ ∈ [−3, 3], 6 values of ν".into())
}

fn support() -> Outcome {
    let mut count = 0;
    for n in 1..=3usize {
        let mut v = vec![-4i64; n];
        loop {
            let m = MomentumVector::new(v.clone());
            if !support_filter(&m) {
                for nu in [root(2), q(3, 2), int(2)] {
                    if !build_eta(&nu, &m).vector.is_zero() {
                        return Err(format!("η({m}) ≠ 0 at ν = {nu}"));
                    }
                }
                count += 1;
            }
            let mut i = 0;
            while i < n && v[i] == 4 {
                v[i] = -4;
                i += 1;
            }
            if i == n {
                break;
            }
            v[i] += 1;
        }
    }
    Ok(format!("{count} filtered labels vanish"))
}

fn momentum_eigen() -> Outcome {
    let grid = all_momenta(3, 6);
    for nu in nus() {
        let h2 = make_operator(ChargeKind::H2, Some(&nu)).unwrap();
        for n in &grid {
            let eta = build_eta(&nu, n).vector;
            let total = momenta(&nu, n).into_iter().fold(int(0), |a, b| a + b);
            if apply_op(&h2, &eta) != eta.scale(&total) {
                return Err(format!("ν = {nu}, n = {n}"));
            }
        }
    }
    Ok(format!("{} labels × 6 values of ν", grid.len()))
}

fn hamiltonian_on_eta() -> Outcome {
    let grid = all_momenta(3, 6);
    for nu in nus() {
        let h3 = make_operator(ChargeKind::H3, Some(&nu)).unwrap();
        let nu2 = &nu * &nu;
        let gamma = int(2) * &nu2 * &(&nu2 - &int(1));
        for n in &grid {
            let eta = build_eta(&nu, n).vector;
            let mut rhs = eta.scale(&energy(&nu, n));
            for j in 0..n.len() {
                for l in (j + 1)..n.len() {
                    // the level is at most 6, so larger k leave the support
                    for k in 1..=12 {
                        rhs.axpy(&(-(&gamma * &int(k))), &build_eta(&nu, &n.shifted(j, l, k)).vector);
                    }
                }
            }
            if apply_op(&h3, &eta) != rhs {
                return Err(format!("ν = {nu}, n = {n}"));
            }
        }
        // level-2 single-anyon sector by hand, basis (1,1), (2)
        let shift = int(5) * &(&nu - &int(1)) + (&nu - &int(1)) * (&nu - &int(1)) * (&nu + &int(2)) / int(3)
            + (int(1) - nu.pow(3)) / int(12);
        let diag = &nu * &(q(17, 4) + shift);
        let c = int(1) - &nu2;
        let expect = vec![
            vec![&diag + &(int(2) * &c), int(2) * &nu],
            vec![int(2) * &nu, &diag + &(int(4) * &c)],
        ];
        if sector_matrix(&h3, 1, 2).unwrap().entries != expect {
            return Err(format!("level-2 sector matrix at ν = {nu}"));
        }
        let e2 = int(2) + &nu2 / &int(2);
        let eta = build_eta(&nu, &mv(&[2])).vector;
        if apply_op(&h3, &eta) != eta.scale(&(&e2 * &e2)) {
            return Err(format!("ℰ(2) at ν = {nu}"));
        }
    }
    Ok(format!("{} labels × 6 values of ν, hand anchors", grid.len()))
}

fn eigenvectors() -> Outcome {
    let grid = ordered_momenta(3, 6);
    for nu in nus() {
        let h3 = make_operator(ChargeKind::H3, Some(&nu)).unwrap();
        for n in &grid {
            let r = build_eigenvector(&nu, n).map_err(|e| format!("ν = {nu}, n = {n}: {e}"))?;
            let e = energy(&nu, n);
            if !r.certified || r.energy != e || apply_op(&h3, &r.psi) != r.psi.scale(&e) || r.psi.is_zero() {
                return Err(format!("ν = {nu}, n = {n}"));
            }
        }
    }
    // ν² = 2, n = (1,1): with η(1,1) ↦ ν⁴[(1−ν²)/2 m₂ + (2−ν²) m₁₁] and
    // η(2,0) ↦ (ν⁴+ν²)/2 m₂ + ν⁴ m₁₁, the eigenvector must cancel m₂
    let nu = root(2);
    let nu2 = &nu * &nu;
    let nu4 = &nu2 * &nu2;
    let a11 = &nu4 * &(int(1) - &nu2) / int(2);
    let a20 = (&nu4 + &nu2) / int(2);
    let alpha_expected = -(a11 / a20);
    let r = build_eigenvector(&nu, &mv(&[1, 1])).unwrap();
    let mut e12 = MuOffset::zero(2);
    e12.set(0, 1, 1);
    let alpha = r.alpha.get(&e12).cloned();
    if alpha != Some(alpha_expected.clone()) || r.energy != int(20) || r.alpha.get(&MuOffset::zero(2)) != Some(&int(1)) {
        return Err(format!("anchor: α(E12) = {alpha:?}, expected {alpha_expected}; ℰ = {}", r.energy));
    }
    Ok(format!("{} labels × 6 values of ν; α(E12) = {alpha_expected}, ℰ = 20", grid.len()))
}

fn two_routes() -> Outcome {
    let grid = ordered_momenta(3, 6);
    for nu in nus() {
        for n in &grid {
            let eta = build_eta(&nu, n).vector;
            if poly_from_fock(&nu, &eta, n.len()) != poly_from_eta(&nu, n) {
                return Err(format!("ν = {nu}, n = {n}"));
            }
        }
        let expect = SymPoly::monomial(2, part(&[1]), &nu * &nu);
        if poly_from_eta(&nu, &mv(&[1, 0])) != expect {
            return Err(format!("anchor (1,0) at ν = {nu}"));
        }
    }
    Ok(format!("{} labels × 6 values of ν", grid.len()))
}

/// Semistandard tableaux of shape `lambda` with content `mu`, by filling
/// cells in reading order.
fn kostka(lambda: &[u32], mu: &[u32]) -> i64 {
    fn fill(cells: &[(usize, usize)], at: usize, grid: &mut Vec<Vec<u32>>, left: &mut Vec<u32>) -> i64 {
        if at == cells.len() {
            return 1;
        }
        let (r, c) = cells[at];
        let mut total = 0;
        for v in 0..left.len() as u32 {
            if left[v as usize] == 0 {
                continue;
            }
            if c > 0 && grid[r][c - 1] > v {
                continue;
            }
            if r > 0 && grid[r - 1][c] >= v {
                continue;
            }
            left[v as usize] -= 1;
            grid[r][c] = v;
            total += fill(cells, at + 1, grid, left);
            left[v as usize] += 1;
        }
        total
    }
    let cells: Vec<(usize, usize)> = lambda.iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<u32>> = lambda.iter().map(|&l| vec![0; l as usize]).collect();
    fill(&cells, 0, &mut grid, &mut mu.to_vec())
}

fn jack() -> Outcome {
    let mut count = 0;
    for vars in 1..=4usize {
        for total in 0..=6u32 {
            for lambda in partitions_bounded(total, vars) {
                for nu in nus() {
                    let r = jack_compare(&nu, &lambda, vars).map_err(|e| format!("{lambda}, N = {vars}: {e}"))?;
                    if !r.matches() {
                        return Err(format!("ν = {nu}, λ = {lambda}, N = {vars}"));
                    }
                    count += 1;
                }
                let mut schur = SymPoly::zero(vars, total);
                for mu in partitions_bounded(total, vars) {
                    schur.axpy(&int(kostka(lambda.parts(), mu.parts())), &SymPoly::monomial(vars, mu, int(1)));
                }
                let r = jack_compare(&int(1), &lambda, vars).unwrap();
                if r.poly.ratio_to(&schur).is_none_or(|k| k == int(0)) {
                    return Err(format!("Schur at λ = {lambda}, N = {vars}"));
                }
            }
        }
    }
    for nu in nus() {
        let nu2 = &nu * &nu;
        let r = jack_compare(&nu, &part(&[1, 1]), 2).unwrap();
        if r.poly.ratio_to(&SymPoly::monomial(2, part(&[1, 1]), int(1))).is_none() {
            return Err(format!("(1,1) at ν = {nu}"));
        }
        let mut two = SymPoly::monomial(2, part(&[2]), int(1));
        two.axpy(&(int(2) * &nu2 / (&nu2 + &int(1))), &SymPoly::monomial(2, part(&[1, 1]), int(1)));
        let r = jack_compare(&nu, &part(&[2]), 2).unwrap();
        if r.jack != two || r.poly.ratio_to(&two).is_none() {
            return Err(format!("(2) at ν = {nu}"));
        }
    }
    Ok(format!("{count} comparisons, Schur at ν = 1, anchors"))
}

fn pde() -> Outcome {
    let grid = ordered_momenta(3, 6);
    let length = 2.0 * PI;
    let (mut worst_pde, mut worst_mom) = (0.0f64, 0.0f64);
    for nu in nus() {
        for n in &grid {
            let r = build_eigenvector(&nu, n).map_err(|e| e.to_string())?;
            let spec = assemble_eigenfunction(&r, None, length).map_err(|e| e.to_string())?;
            let pts = admissible_points(n.len(), length, 20, 1000 + n.total() as u64);
            let a = spec.analytic_checks(&pts).map_err(|e| e.to_string())?;
            worst_pde = worst_pde.max(a.pde_residual);
            worst_mom = worst_mom.max(a.momentum_residual);
        }
    }
    let detail = format!("worst PDE {worst_pde:.2e}, momentum {worst_mom:.2e}");
    if worst_pde <= 1e-8 && worst_mom <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn duality() -> Outcome {
    let (mut mismatches, mut derived, mut total) = (0, 0, 0);
    for nu in [int(2), int(3), q(1, 2)] {
        for n in ordered_momenta(2, 4) {
            let r = duality_check(&nu, &n).map_err(|e| e.to_string())?;
            if !r.is_eigen {
                return Err(format!("Ψ_(−1/ν)({n}) is not an eigenvector at ν = {nu}"));
            }
            total += 1;
            if !r.matches {
                mismatches += 1;
            }
            if r.derived_matches {
                derived += 1;
            }
        }
    }
    Ok(format!(
        "{total} dual eigenvectors; printed closed form differs in {mismatches}, rederived form agrees in {derived}"
    ))
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn correlations() -> Outcome {
    let length = 2.0 * PI;
    let h = PI / length;
    let mut worst_b: f64 = 0.0;
    for i in 0..100 {
        let x = -length / 2.0 + length * i as f64 / 99.0;
        let eps = 0.002 * (i + 1) as f64;
        let dual = Complex64::new(0.0, -2.0) * (-h * eps).exp() * (h * Complex64::new(x, eps)).sin();
        worst_b = worst_b.max((b_factor(x, eps, length) - dual).norm());
    }
    let mut rng = Lcg(42);
    let mut worst_x: f64 = 0.0;
    for nu2 in [1.0f64, 0.5, 1.0 / 3.0] {
        for _ in 0..50 {
            let mut x = [rng.next() - 0.5, rng.next() - 0.5].map(|t| t * length);
            x.sort_by(|a, b| b.total_cmp(a));
            let charges = if rng.next() < 0.5 { vec![1, -1] } else { vec![1, 1] };
            let eps = vec![0.01 + 0.2 * rng.next(), 0.01 + 0.2 * rng.next()];
            let w1 = -charges.iter().sum::<i64>();
            let spec = CorrSpec { length, nu0: nu2.sqrt(), charges, positions: x.to_vec(), eps, w1, w2: 0 };
            let mut swapped = spec.clone();
            swapped.charges.swap(0, 1);
            swapped.positions.swap(0, 1);
            swapped.eps.swap(0, 1);
            let nn = spec.charges[0] as f64 * spec.charges[1] as f64 * nu2;
            let phase = Complex64::from_polar(1.0, -PI * nn * sgn_reg(x[0] - x[1], spec.eps[0] + spec.eps[1], length));
            let r = (corr_eval(&spec).unwrap() - phase * corr_eval(&swapped).unwrap()).norm();
            worst_x = worst_x.max(r);
        }
    }
    let mut worst_braid: f64 = 0.0;
    for (n, nu2) in [(3, 1.0 / 3.0), (3, 0.5), (4, 1.0), (4, 1.0 / 3.0)] {
        worst_braid = worst_braid.max(braid_check(n, nu2, 0.05, 50, 9).worst());
    }
    let detail = format!("b {worst_b:.2e}, exchange {worst_x:.2e}, braid {worst_braid:.2e}");
    if worst_b <= 1e-14 && worst_x <= 1e-10 && worst_braid <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_anyon-cs");
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["verify", "--suite", "all", "--format", "json"]);
        if let Some(t) = threads {
            cmd.env("ANYON_CS_THREADS", t);
        }
        cmd.output().expect("binary runs")
    };
    let a = run(None);
    let b = run(None);
    let c = run(Some("1"));
    if !a.status.success() {
        return Err(format!("verify exited with {:?}", a.status.code()));
    }
    if a.stdout != b.stdout || a.stdout != c.stdout {
        return Err("reports differ between runs".into());
    }
    Ok(format!("{} identical bytes over three runs", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Heisenberg relations", heisenberg),
        (2, "vertex zero mode", zero_mode),
        (3, "support conditions", support),
        (4, "second charge on anyon states", momentum_eigen),
        (5, "Hamiltonian on anyon states", hamiltonian_on_eta),
        (6, "certified eigenvectors", eigenvectors),
        (7, "two polynomial routes", two_routes),
        (8, "Jack identification", jack),
        (9, "PDE and momentum residuals", pde),
        (10, "duality", duality),
        (11, "correlation identities", correlations),
        (12, "deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} {name}: PASS ({detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({detail}; {secs:.1}s)");
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
