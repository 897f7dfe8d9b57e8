//! Gramians, quasi-balanced realizations and structure-preserving truncation.
//!
//! A quasi-balanced realization has both Gramians in paired-diagonal form,
//! `P = diag(σ_{P,k} I₂)` and `Q = diag(σ_{Q,k} I₂)`. Modes are ordered by
//! `σ_{b,k} = √(σ_{P,k} σ_{Q,k})` descending, so truncation always keeps a
//! leading block of modes.

use crate::error::{Error, Result};
use crate::lqss::{check_physical_realizability, symplectic_similarity, truncate_subsystem, QuadratureModel};
use crate::numerics::{
    complexify, default_hurwitz_tol, eigenvalues, hinf_norm, is_hurwitz, solve_lyapunov, Complex64,
    ComplexMatrix, HinfMethod, Lti, RealMatrix,
};
use crate::symplectic::{
    codiagonalize_commuting, gramian_commutator, j_form, mode_permutation_matrix, paired_diagonal,
    paired_diagonal_part, symplectic_eigenvalues, SymplecticTransform, GROUP_TOL,
};

/// Default relative tolerance for the commutation tests.
pub const CLASSIFY_TOL: f64 = 1e-8;
/// Relative threshold below which `σ_P·σ_Q` counts as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Relative accuracy of H∞ evaluations inside [`reduce`].
pub const HINF_TOL: f64 = 1e-6;

/// Controllability and observability Gramians with their spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianPair {
    /// `A·P + P·Aᵀ + B·Bᵀ = 0`.
    pub p: RealMatrix,
    /// `Aᵀ·Q + Q·A + Cᵀ·C = 0`.
    pub q: RealMatrix,
    /// Symplectic eigenvalues of `P`; `None` when `Jn·P` is not diagonalizable.
    pub sigma_p: Option<Vec<f64>>,
    pub sigma_q: Option<Vec<f64>>,
    /// `√eig(P·Q)`, descending, length `2n`.
    pub hankel: Vec<f64>,
}

pub fn gramians(g: &QuadratureModel) -> Result<GramianPair> {
    let p = solve_lyapunov(&g.a, &(&g.b * g.b.transpose()))?;
    let q = solve_lyapunov(&g.a.transpose(), &(g.c.transpose() * &g.c))?;
    let hankel = hankel_values(&p, &q);
    Ok(GramianPair {
        sigma_p: symplectic_eigenvalues(&p).ok(),
        sigma_q: symplectic_eigenvalues(&q).ok(),
        p,
        q,
        hankel,
    })
}

/// `√eig(P·Q)` via the symmetric product `P^{1/2}·Q·P^{1/2}`.
pub fn hankel_values(p: &RealMatrix, q: &RealMatrix) -> Vec<f64> {
    if p.nrows() == 0 {
        return Vec::new();
    }
    let e = p.clone().symmetric_eigen();
    let roots = e.eigenvalues.map(|x| x.max(0.0).sqrt());
    let sqrt_p = &e.eigenvectors * RealMatrix::from_diagonal(&roots) * e.eigenvectors.transpose();
    let m = &sqrt_p * q * &sqrt_p;
    let m = (&m + m.transpose()) * 0.5;
    let mut h: Vec<f64> = m.symmetric_eigenvalues().iter().map(|x| x.max(0.0).sqrt()).collect();
    h.sort_by(|a, b| b.total_cmp(a));
    h
}

/// Which co-diagonalization the Gramians admit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Codiagonalizability {
    /// Neither test passed; only a supplied certificate can decide.
    Unknown,
    /// `[Jn·P, Q·Jn] = 0`: both Gramians can be paired-diagonal at once.
    QuasiBalanced,
    /// `Jn·P = Q·Jn`: a physically realizable balanced realization exists.
    FullyBalanced,
}

pub fn classify_codiagonalizability(gp: &GramianPair, tol: f64) -> Codiagonalizability {
    let n = gp.p.nrows() / 2;
    let j = j_form(n);
    let scale = gp.p.norm().max(gp.q.norm()).max(f64::MIN_POSITIVE);
    if (&j * &gp.p - &gp.q * &j).norm() <= tol * scale {
        return Codiagonalizability::FullyBalanced;
    }
    match gramian_commutator(&gp.p, &gp.q) {
        Ok(c) if c <= tol => Codiagonalizability::QuasiBalanced,
        _ => Codiagonalizability::Unknown,
    }
}

/// A group of modes sharing one value of `σ_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelGroup {
    pub value: f64,
    pub modes: usize,
}

/// Quasi-balanced realization of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiBalancedRealization {
    pub model: QuadratureModel,
    /// Maps original states to quasi-balanced states.
    pub transform: SymplecticTransform,
    pub sigma_p: Vec<f64>,
    pub sigma_q: Vec<f64>,
    /// `σ_{b,k} = √(σ_{P,k} σ_{Q,k})` per mode, descending.
    pub sigma_b: Vec<f64>,
    /// Distinct `σ_b` values with multiplicities (in modes).
    pub groups: Vec<HankelGroup>,
}

impl QuasiBalancedRealization {
    /// Partial sums `j_r` of group sizes, in modes (`j_μ = n`).
    pub fn boundaries(&self) -> Vec<usize> {
        self.groups
            .iter()
            .scan(0, |acc, g| {
                *acc += g.modes;
                Some(*acc)
            })
            .collect()
    }

    /// `ν`: modes with `σ_P·σ_Q` above [`RANK_TOL`] relative to the largest.
    pub fn nu(&self) -> usize {
        let prods: Vec<f64> = self.sigma_p.iter().zip(&self.sigma_q).map(|(a, b)| a * b).collect();
        let top = prods.iter().cloned().fold(0.0, f64::max);
        prods.iter().filter(|&&x| x > RANK_TOL * top).count()
    }

    pub fn sigma_p_matrix(&self) -> RealMatrix {
        paired_diagonal(&self.sigma_p)
    }

    pub fn sigma_q_matrix(&self) -> RealMatrix {
        paired_diagonal(&self.sigma_q)
    }
}

fn group_values(sigma_b: &[f64]) -> Vec<HankelGroup> {
    let top = sigma_b.first().copied().unwrap_or(0.0);
    let mut groups: Vec<HankelGroup> = Vec::new();
    let mut head = f64::NAN;
    for &s in sigma_b {
        match groups.last_mut() {
            Some(g) if head - s <= GROUP_TOL * top => g.modes += 1,
            _ => {
                head = s;
                groups.push(HankelGroup { value: s, modes: 1 });
            }
        }
    }
    groups
}

/// Quasi-balances `g`; fails with [`Error::NotCoDiagonalizable`] unless the
/// Gramian products commute.
pub fn quasi_balance(g: &QuadratureModel) -> Result<QuasiBalancedRealization> {
    quasi_balance_with_tol(g, CLASSIFY_TOL)
}

pub fn quasi_balance_with_tol(g: &QuadratureModel, tol: f64) -> Result<QuasiBalancedRealization> {
    let gp = gramians(g)?;
    if classify_codiagonalizability(&gp, tol) == Codiagonalizability::Unknown {
        let c = gramian_commutator(&gp.p, &gp.q)?;
        return Err(Error::NotCoDiagonalizable(format!("relative commutator {c:e}")));
    }
    let cd = codiagonalize_commuting(&gp.p, &gp.q, tol)?;
    let n = g.n;
    let sigma_b: Vec<f64> =
        cd.sigma_p.iter().zip(&cd.sigma_q).map(|(a, b)| (a * b).max(0.0).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma_b[b].total_cmp(&sigma_b[a]));
    let perm = mode_permutation_matrix(&order)?;
    let transform = SymplecticTransform::new(perm * &cd.transform.matrix)?;
    let model = symplectic_similarity(g, &transform)?;

    let check = gramians(&model)?;
    let (sigma_p, rp) = paired_diagonal_part(&check.p);
    let (sigma_q, rq) = paired_diagonal_part(&check.q);
    if rp > 1e-6 * check.p.norm() || rq > 1e-6 * check.q.norm() {
        return Err(Error::NotCoDiagonalizable(format!(
            "transformed Gramians off-diagonal by {rp:e} (P), {rq:e} (Q)"
        )));
    }
    let sigma_b: Vec<f64> =
        sigma_p.iter().zip(&sigma_q).map(|(a, b)| (a * b).max(0.0).sqrt()).collect();
    let groups = group_values(&sigma_b);
    Ok(QuasiBalancedRealization { model, transform, sigma_p, sigma_q, sigma_b, groups })
}

/// `T_b = diag((σ_{Q,j}/σ_{P,j})^{1/4} I₂)` turning both Gramians into `Σ_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancingDiagonal {
    pub matrix: RealMatrix,
    pub sigma_b: Vec<f64>,
    /// `T_b` is symplectic only when every scale factor is 1.
    pub symplectic: bool,
}

pub fn balancing_diagonal(sigma_p: &[f64], sigma_q: &[f64]) -> Result<BalancingDiagonal> {
    if sigma_p.len() != sigma_q.len() {
        return Err(Error::DimensionMismatch("σ_P and σ_Q lengths differ".into()));
    }
    if sigma_p.iter().chain(sigma_q).any(|&s| !(s > 0.0)) {
        return Err(Error::SingularGramian);
    }
    let scales: Vec<f64> = sigma_p.iter().zip(sigma_q).map(|(p, q)| (q / p).powf(0.25)).collect();
    let sigma_b = sigma_p.iter().zip(sigma_q).map(|(p, q)| (p * q).sqrt()).collect();
    let symplectic = scales.iter().all(|t| (t * t - 1.0).abs() <= 1e-12);
    Ok(BalancingDiagonal { matrix: paired_diagonal(&scales), sigma_b, symplectic })
}

fn split(m: &RealMatrix, k: usize) -> (RealMatrix, RealMatrix, RealMatrix, RealMatrix) {
    let d = m.nrows();
    (
        m.view((0, 0), (k, k)).into_owned(),
        m.view((0, k), (k, d - k)).into_owned(),
        m.view((k, 0), (d - k, k)).into_owned(),
        m.view((k, k), (d - k, d - k)).into_owned(),
    )
}

/// `σ̄(Ξ_G(iω) − Ξ_{G_r}(iω))` from the closed form in `Δ_r(iω)`, where `G_r`
/// keeps the leading `keep` modes of the quasi-balanced realization.
pub fn truncation_error_exact(qb: &QuasiBalancedRealization, keep: usize, omega: f64) -> Result<f64> {
    let n = qb.model.n;
    if keep == n {
        return Ok(0.0);
    }
    if keep == 0 || keep > n {
        return Err(Error::BadRange { r: keep, n });
    }
    let k = 2 * keep;
    let (a11, a12, a21, a22) = split(&qb.model.a, k);
    if !is_hurwitz(&a11, default_hurwitz_tol(&a11)) {
        return Err(Error::HurwitzChainBroken(keep));
    }
    let s = Complex64::new(0.0, omega);
    let res11 = ComplexMatrix::identity(k, k) * s - complexify(&a11);
    let inner = res11
        .lu()
        .solve(&complexify(&a12))
        .ok_or_else(|| Error::SingularResolvent(s.to_string()))?;
    let rest = 2 * n - k;
    let delta = ComplexMatrix::identity(rest, rest) * s - complexify(&a22) - complexify(&a21) * inner;
    let delta_inv = delta
        .clone()
        .try_inverse()
        .filter(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
        .ok_or(Error::SingularDelta(omega))?;
    let sp2 = complexify(&paired_diagonal(&qb.sigma_p[keep..]));
    let sq2 = complexify(&paired_diagonal(&qb.sigma_q[keep..]));
    let left = &sp2 + &delta_inv * &sp2 * delta.adjoint();
    let right = delta_inv.adjoint() * &sq2 * &delta + &sq2;
    let lam = eigenvalues(&(left * right))?
        .iter()
        .map(|z| z.re)
        .fold(0.0, f64::max);
    Ok(lam.sqrt())
}

/// `2·Σ_{k>r} σ_{b,k}` over distinct values, for a truncation at group boundary `keep`.
/// Also certifies that the kept block is Hurwitz.
pub fn truncation_error_bound(qb: &QuasiBalancedRealization, keep: usize) -> Result<f64> {
    let n = qb.model.n;
    if keep == 0 || keep > n {
        return Err(Error::BadRange { r: keep, n });
    }
    let boundaries = qb.boundaries();
    let Some(r) = boundaries.iter().position(|&j| j == keep) else {
        return Err(Error::GroupBoundaryViolation { keep, boundaries });
    };
    if keep < n {
        let a11 = qb.model.a.view((0, 0), (2 * keep, 2 * keep)).into_owned();
        if !is_hurwitz(&a11, default_hurwitz_tol(&a11)) {
            return Err(Error::HurwitzChainBroken(keep));
        }
    }
    Ok(2.0 * qb.groups[r + 1..].iter().map(|g| g.value).sum::<f64>())
}

/// Verifies a weak co-diagonalization certificate `(T_P, T_Q, D_P, D_Q)` and
/// returns `T = D_P⁻¹·T_P`.
pub fn verify_point3_certificate(
    p: &RealMatrix,
    q: &RealMatrix,
    tp: &RealMatrix,
    tq: &RealMatrix,
    dp: &RealMatrix,
    dq: &RealMatrix,
) -> Result<SymplecticTransform> {
    let invalid = |what: &str| Error::CertificateInvalid(what.to_string());
    let tp_s = SymplecticTransform::new(tp.clone()).map_err(|_| invalid("i-symplectic"))?;
    let tq_s = SymplecticTransform::new(tq.clone()).map_err(|_| invalid("ii-symplectic"))?;

    let check_williamson = |x: &RealMatrix, y: &RealMatrix, label: &str| -> Result<()> {
        let (sigma, resid) = paired_diagonal_part(y);
        if resid > 1e-6 * x.norm().max(f64::MIN_POSITIVE) {
            return Err(invalid(label));
        }
        let mut got = sigma.clone();
        got.sort_by(|a, b| b.total_cmp(a));
        let want = symplectic_eigenvalues(x).map_err(|_| invalid(label))?;
        let scale = want.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        if got.iter().zip(&want).any(|(a, b)| (a - b).abs() > 1e-6 * scale) {
            return Err(invalid(label));
        }
        Ok(())
    };
    check_williamson(p, &(tp * p * tp.transpose()), "i")?;
    let tq_inv = tq_s.inverse_matrix();
    check_williamson(q, &(tq_inv.transpose() * q * &tq_inv), "ii")?;

    for d in [dp, dq] {
        if d.shape() != tp.shape() {
            return Err(invalid("iii-structure"));
        }
        let off = d - RealMatrix::from_diagonal(&d.diagonal());
        let pairs_ok = (0..d.nrows() / 2).all(|k| (d[(2 * k, 2 * k)] * d[(2 * k + 1, 2 * k + 1)] - 1.0).abs() <= 1e-10);
        if off.norm() > 0.0 || !pairs_ok {
            return Err(invalid("iii-structure"));
        }
    }
    let dp_inv = RealMatrix::from_diagonal(&dp.diagonal().map(|x| 1.0 / x));
    let t = &dp_inv * &tp_s.matrix;
    let gap = (&t - dq * &tq_s.matrix).norm();
    if gap > 1e-8 * t.norm().max(1.0) {
        return Err(invalid("iii"));
    }
    let t = SymplecticTransform::new(t).map_err(|_| invalid("iii"))?;
    let t_inv = t.inverse_matrix();
    for y in [&t.matrix * p * t.matrix.transpose(), t_inv.transpose() * q * &t_inv] {
        let off = &y - RealMatrix::from_diagonal(&y.diagonal());
        if off.norm() > 1e-6 * y.norm().max(f64::MIN_POSITIVE) {
            return Err(invalid("iii-diagonal"));
        }
    }
    Ok(t)
}

/// How many modes [`reduce`] should keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReductionTarget {
    Keep(usize),
    /// Smallest admissible order whose a-priori bound is within the budget.
    Budget(f64),
}

/// Outcome of [`reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub reduced: QuadratureModel,
    pub kept: usize,
    /// Modes with nonzero `σ_P·σ_Q`.
    pub nu: usize,
    pub bound: f64,
    /// `‖Ξ_G − Ξ_{G_r}‖_∞`.
    pub exact_error: f64,
    pub exact_error_omega: f64,
    pub hinf_method: HinfMethod,
    /// `√eig(P·Q)` of the original system, length `2n`.
    pub hankel: Vec<f64>,
    /// Hurwitz flag of the leading block for each admissible order from `n − 1` down to `kept`.
    pub hurwitz_chain: Vec<bool>,
    pub realization: QuasiBalancedRealization,
}

/// Orders that [`reduce`] may keep: group boundaries up to `ν`, then every order from `ν` to `n`.
pub fn admissible_orders(qb: &QuasiBalancedRealization) -> Vec<usize> {
    let n = qb.model.n;
    let nu = qb.nu();
    let mut out: Vec<usize> = qb.boundaries().into_iter().filter(|&j| j <= nu && j >= 1).collect();
    out.extend(nu.max(1)..=n);
    out.sort_unstable();
    out.dedup();
    out
}

/// Bound for any admissible order; modes beyond `ν` contribute nothing.
fn admissible_bound(qb: &QuasiBalancedRealization, keep: usize) -> f64 {
    let nu = qb.nu();
    if keep >= nu {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut start = 0;
    for g in &qb.groups {
        if start >= keep {
            acc += g.value;
        }
        start += g.modes;
    }
    2.0 * acc
}

/// Quasi-balances, truncates and certifies the result.
pub fn reduce(g: &QuadratureModel, target: ReductionTarget) -> Result<TruncationReport> {
    let qb = quasi_balance(g)?;
    let n = g.n;
    let orders = admissible_orders(&qb);
    let keep = match target {
        ReductionTarget::Keep(k) => {
            if k == 0 || k > n {
                return Err(Error::BadRange { r: k, n });
            }
            if !orders.contains(&k) {
                return Err(Error::GroupBoundaryViolation { keep: k, boundaries: qb.boundaries() });
            }
            k
        }
        ReductionTarget::Budget(e) => orders
            .iter()
            .copied()
            .find(|&k| admissible_bound(&qb, k) <= e)
            .ok_or(Error::BudgetInfeasible(e))?,
    };

    let mut hurwitz_chain = Vec::new();
    for &j in orders.iter().rev().filter(|&&j| j >= keep && j < n) {
        let a11 = qb.model.a.view((0, 0), (2 * j, 2 * j)).into_owned();
        let ok = is_hurwitz(&a11, default_hurwitz_tol(&a11));
        hurwitz_chain.push(ok);
        if !ok {
            return Err(Error::HurwitzChainBroken(j));
        }
    }

    let hankel = gramians(g)?.hankel;
    let bound = admissible_bound(&qb, keep);
    if keep == n {
        let mut reduced = qb.model.clone();
        reduced.pr_certified = check_physical_realizability(&reduced, 1e-8).passed;
        return Ok(TruncationReport {
            reduced,
            kept: n,
            nu: qb.nu(),
            bound: 0.0,
            exact_error: 0.0,
            exact_error_omega: 0.0,
            hinf_method: HinfMethod::Bisection,
            hankel,
            hurwitz_chain,
            realization: qb,
        });
    }

    let mut reduced = truncate_subsystem(&qb.model, keep)?;
    let pr = check_physical_realizability(&reduced, 1e-8);
    if !pr.passed {
        return Err(Error::Verification(format!(
            "reduced model fails physical realizability (residual {:e})",
            pr.max_residual()
        )));
    }
    reduced.pr_certified = true;
    let (ae, be, ce, de) = error_system(g, &reduced);
    let h = hinf_norm(&Lti::new(&ae, &be, &ce, &de)?, HINF_TOL)?;
    Ok(TruncationReport {
        reduced,
        kept: keep,
        nu: qb.nu(),
        bound,
        exact_error: h.value,
        exact_error_omega: h.peak_frequency,
        hinf_method: h.method,
        hankel,
        hurwitz_chain,
        realization: qb,
    })
}

/// State-space form of `Ξ_{G1} − Ξ_{G2}`.
pub fn error_system(g1: &QuadratureModel, g2: &QuadratureModel) -> (RealMatrix, RealMatrix, RealMatrix, RealMatrix) {
    let (d1, d2) = (2 * g1.n, 2 * g2.n);
    let mut a = RealMatrix::zeros(d1 + d2, d1 + d2);
    a.view_mut((0, 0), (d1, d1)).copy_from(&g1.a);
    a.view_mut((d1, d1), (d2, d2)).copy_from(&g2.a);
    let mut b = RealMatrix::zeros(d1 + d2, g1.b.ncols());
    b.view_mut((0, 0), (d1, g1.b.ncols())).copy_from(&g1.b);
    b.view_mut((d1, 0), (d2, g2.b.ncols())).copy_from(&g2.b);
    let mut c = RealMatrix::zeros(g1.c.nrows(), d1 + d2);
    c.view_mut((0, 0), (g1.c.nrows(), d1)).copy_from(&g1.c);
    c.view_mut((0, d1), (g2.c.nrows(), d2)).copy_from(&(-&g2.c));
    (a, b, c, &g1.d - &g2.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lqss::{build_from_slh, concatenate, select_outputs, SlhParams};

    fn cavity(gamma: f64) -> SlhParams {
        let h = 0.5 * gamma.sqrt();
        let k = ComplexMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(h, 0.0), Complex64::new(0.0, h), Complex64::new(h, 0.0), Complex64::new(0.0, h)],
        );
        SlhParams::new(ComplexMatrix::identity(2, 2), k, RealMatrix::zeros(2, 2)).unwrap()
    }

    #[test]
    fn cavity_gramians() {
        let g = select_outputs(&build_from_slh(&cavity(12e6)).unwrap(), &[0]).unwrap();
        let gp = gramians(&g).unwrap();
        assert!((&gp.p - RealMatrix::identity(2, 2)).norm() < 1e-10);
        // Q = CᵀC/(2γ) = I/2: products commute but differ.
        assert!((&gp.q - RealMatrix::identity(2, 2) * 0.5).norm() < 1e-10);
        assert_eq!(classify_codiagonalizability(&gp, 1e-8), Codiagonalizability::QuasiBalanced);
        let i = RealMatrix::identity(2, 2);
        let same = GramianPair { p: i.clone(), q: i, sigma_p: None, sigma_q: None, hankel: vec![] };
        assert_eq!(classify_codiagonalizability(&same, 1e-8), Codiagonalizability::FullyBalanced);
    }

    #[test]
    fn balancing_diagonal_one_mode() {
        let b = balancing_diagonal(&[1.0], &[4.0]).unwrap();
        assert!((b.matrix[(0, 0)] - 2f64.sqrt()).abs() < 1e-15);
        assert!((b.sigma_b[0] - 2.0).abs() < 1e-15);
        assert!(!b.symplectic);
        let same = balancing_diagonal(&[3.0, 1.0], &[3.0, 1.0]).unwrap();
        assert!(same.symplectic);
        assert!(matches!(balancing_diagonal(&[0.0], &[1.0]), Err(Error::SingularGramian)));
    }

    #[test]
    fn certificate_identity_case() {
        let i = RealMatrix::identity(4, 4);
        let t = verify_point3_certificate(&i, &i, &i, &i, &i, &i).unwrap();
        assert_eq!(t.matrix, i);
        let mut dp = i.clone();
        dp[(0, 0)] = 2.0;
        assert!(matches!(
            verify_point3_certificate(&i, &i, &i, &i, &dp, &i),
            Err(Error::CertificateInvalid(w)) if w == "iii-structure"
        ));
    }

    #[test]
    fn grouping_of_values() {
        let g = group_values(&[3.0, 3.0, 1.0, 0.5, 0.5]);
        assert_eq!(g.iter().map(|x| x.modes).collect::<Vec<_>>(), vec![2, 1, 2]);
    }

    #[test]
    fn keep_everything_is_exact() {
        let g = build_from_slh(&concatenate(&cavity(1.0), &cavity(3.0))).unwrap();
        let g = select_outputs(&g, &[0, 2]).unwrap();
        let rep = reduce(&g, ReductionTarget::Keep(2)).unwrap();
        assert_eq!(rep.exact_error, 0.0);
        assert_eq!(rep.bound, 0.0);
    }

    #[test]
    fn exact_error_matches_subtraction() {
        let spec = crate::network::CavityNetworkSpec::new(2, 1.0).unwrap();
        let qb = quasi_balance(&crate::network::build_network(&spec).unwrap()).unwrap();
        let red = truncate_subsystem(&qb.model, 1).unwrap();
        for w in [0.0, 0.3, 1.0, 7.0] {
            let s = Complex64::new(0.0, w);
            let diff = qb.model.lti().transfer_at(s).unwrap() - red.lti().transfer_at(s).unwrap();
            let direct = crate::numerics::max_singular_value(&diff);
            let exact = truncation_error_exact(&qb, 1, w).unwrap();
            assert!((exact - direct).abs() <= 1e-10 * direct.max(1e-12), "{w}: {exact} vs {direct}");
        }
    }
}
