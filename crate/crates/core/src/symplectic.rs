//! Symplectic structure, Williamson diagonalization and simultaneous
//! co-diagonalization of commuting Gramians.
//!
//! State vectors use pair ordering `(q₁, p₁, …, qₙ, pₙ)` with form
//! `Jn = I_n ⊗ [[0, 1], [−1, 0]]`. The block ordering `(q₁…qₙ, p₁…pₙ)` with
//! form `Kn = [[0, I], [−I, 0]]` is reached through the permutation `Ps`.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{
    asymmetry, complexify, eigen_decompose, real_part, Complex64, ComplexMatrix, EigenDecomposition,
    RealMatrix,
};

/// Relative width of a group of equal symplectic eigenvalues.
pub const GROUP_TOL: f64 = 1e-6;
const PAIRING_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-10;

/// `Jn = I_n ⊗ [[0, 1], [−1, 0]]`.
pub fn j_form(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// `Kn = [[0, I_n], [−I_n, 0]]`.
pub fn k_form(n: usize) -> RealMatrix {
    let mut k = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        k[(i, n + i)] = 1.0;
        k[(n + i, i)] = -1.0;
    }
    k
}

/// `Ps` with `Ps·(q₁, p₁, …) = (q₁, …, qₙ, p₁, …, pₙ)`.
pub fn pair_to_block_permutation(n: usize) -> RealMatrix {
    let mut p = RealMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        p[(k, 2 * k)] = 1.0;
        p[(n + k, 2 * k + 1)] = 1.0;
    }
    p
}

/// Pair-block permutation matrix: mode `k` of `P·x` is mode `perm[k]` of `x`.
pub fn mode_permutation_matrix(perm: &[usize]) -> Result<RealMatrix> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::BadPermutation(format!("{perm:?}")));
        }
        seen[p] = true;
    }
    let mut m = RealMatrix::zeros(2 * n, 2 * n);
    for (k, &p) in perm.iter().enumerate() {
        m[(2 * k, 2 * p)] = 1.0;
        m[(2 * k + 1, 2 * p + 1)] = 1.0;
    }
    Ok(m)
}

/// `diag(σ₁I₂, …, σₙI₂)`.
pub fn paired_diagonal(sigma: &[f64]) -> RealMatrix {
    let d: Vec<f64> = sigma.iter().flat_map(|&s| [s, s]).collect();
    RealMatrix::from_diagonal(&DVector::from_vec(d))
}

/// Reads the paired diagonal of `x` and returns `(σ, ‖x − diag(σ I₂)‖_F)`.
pub fn paired_diagonal_part(x: &RealMatrix) -> (Vec<f64>, f64) {
    let n = x.nrows() / 2;
    let sigma: Vec<f64> = (0..n)
        .map(|k| 0.5 * (x[(2 * k, 2 * k)] + x[(2 * k + 1, 2 * k + 1)]))
        .collect();
    let resid = (x - paired_diagonal(&sigma)).norm();
    (sigma, resid)
}

/// Structure constants of the symplectic form on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    pub n: usize,
    pub jn: RealMatrix,
    pub kn: RealMatrix,
    pub ps: RealMatrix,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        SymplecticForm { n, jn: j_form(n), kn: k_form(n), ps: pair_to_block_permutation(n) }
    }
}

fn even_order(t: &RealMatrix) -> Result<usize> {
    if t.nrows() != t.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if !t.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(t.nrows()));
    }
    Ok(t.nrows() / 2)
}

/// `‖T·Jn·Tᵀ − Jn‖_F`.
pub fn symplectic_residual(t: &RealMatrix) -> Result<f64> {
    let n = even_order(t)?;
    let j = j_form(n);
    Ok((t * &j * t.transpose() - j).norm())
}

pub fn is_symplectic(t: &RealMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(t)? <= tol)
}

/// A real symplectic change of variables with its certified residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    pub matrix: RealMatrix,
    pub residual: f64,
}

impl SymplecticTransform {
    /// Accepts `t` when its residual is within `1e-8·max(1, ‖T‖_F²)`.
    pub fn new(t: RealMatrix) -> Result<Self> {
        let residual = symplectic_residual(&t)?;
        let bound = 1e-8 * t.norm_squared().max(1.0);
        if !(residual <= bound) {
            return Err(Error::NotSymplectic(residual));
        }
        Ok(SymplecticTransform { matrix: t, residual })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticTransform { matrix: RealMatrix::identity(2 * n, 2 * n), residual: 0.0 }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `T⁻¹ = −Jn·Tᵀ·Jn`.
    pub fn inverse_matrix(&self) -> RealMatrix {
        let j = j_form(self.modes());
        -(&j * self.matrix.transpose() * &j)
    }

    pub fn inverse(&self) -> Self {
        let m = self.inverse_matrix();
        let residual = symplectic_residual(&m).unwrap_or(f64::INFINITY);
        SymplecticTransform { matrix: m, residual }
    }

    pub fn compose(&self, rhs: &SymplecticTransform) -> Result<Self> {
        SymplecticTransform::new(&self.matrix * &rhs.matrix)
    }

    /// `‖TᵀT − I‖_F ≤ tol`.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let d = self.matrix.nrows();
        (self.matrix.transpose() * &self.matrix - RealMatrix::identity(d, d)).norm() <= tol
    }
}

fn check_gramian(p: &RealMatrix) -> Result<usize> {
    let n = even_order(p)?;
    let asym = asymmetry(p);
    if asym > 1e-10 {
        return Err(Error::NotSymmetric(asym));
    }
    if n > 0 {
        let sym = (p + p.transpose()) * 0.5;
        let lo = sym.symmetric_eigenvalues().min();
        if lo < -1e-10 * p.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::NotPositiveSemidefinite(lo));
        }
    }
    Ok(n)
}

/// The `n` largest eigenvalues of `i·Jn·P`, descending and clamped at zero.
pub fn symplectic_eigenvalues(p: &RealMatrix) -> Result<Vec<f64>> {
    let n = check_gramian(p)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let ijp = complexify(&(j_form(n) * p)) * Complex64::new(0.0, 1.0);
    let eig = eigen_decompose(&ijp)?;
    let cond = eig.condition_number();
    if !(cond < 1e8) {
        return Err(Error::NotDiagonalizable(format!(
            "eigenvector condition number {cond:e}"
        )));
    }
    let scale = p.norm();
    let mut vals: Vec<f64> = eig.values.iter().map(|z| z.re).collect();
    if let Some(z) = eig.values.iter().find(|z| z.im.abs() > PAIRING_TOL * scale) {
        return Err(Error::EigenPairing(format!("eigenvalue {z} of iJP is not real")));
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    for k in 0..n {
        let gap = vals[k] + vals[2 * n - 1 - k];
        if gap.abs() > PAIRING_TOL * scale {
            return Err(Error::EigenPairing(format!(
                "{} and {} are not a ± pair",
                vals[k],
                vals[2 * n - 1 - k]
            )));
        }
    }
    let top = &vals[..n];
    if let Some(&neg) = top.iter().find(|&&v| v < -1e-8 * scale.max(1.0)) {
        return Err(Error::NotPositiveSemidefinite(neg));
    }
    Ok(top.iter().map(|&v| v.max(0.0)).collect())
}

/// `−i·Uᴴ·K·V` for complex column blocks.
fn form_product(u: &ComplexMatrix, k: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    u.adjoint() * k * v * Complex64::new(0.0, -1.0)
}

/// Builds `V = [v₁ … vₙ v₁# … vₙ#]` from an eigen decomposition of `Kn·P̃`.
///
/// Returns `V` and the symplectic eigenvalues (descending). Columns satisfy
/// `−i·V†·Kn·V = diag(I, −I)` and `Kn·P̃·v_k = iσ_k·v_k`.
pub fn normalize_eigenbasis(
    raw: &EigenDecomposition,
    p_tilde: &RealMatrix,
    n: usize,
) -> Result<(ComplexMatrix, Vec<f64>)> {
    let dim = 2 * n;
    if raw.values.len() != dim || p_tilde.nrows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {dim} eigenpairs for {n} modes"
        )));
    }
    let scale = p_tilde.norm();
    let kc = complexify(&k_form(n));
    let pc = complexify(p_tilde);

    if let Some(z) = raw.values.iter().find(|z| z.re.abs() > PAIRING_TOL * scale.max(1.0)) {
        return Err(Error::EigenPairing(format!("eigenvalue {z} is off the imaginary axis")));
    }
    let max_sigma = raw.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let zero_tol = (GROUP_TOL * max_sigma).max(1e-14 * scale);

    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<f64> = Vec::new();
    let mut zero: Vec<usize> = Vec::new();
    for (i, z) in raw.values.iter().enumerate() {
        if z.im > zero_tol {
            pos.push(i);
        } else if z.im < -zero_tol {
            neg.push(-z.im);
        } else {
            zero.push(i);
        }
    }
    let mut pos_vals: Vec<f64> = pos.iter().map(|&i| raw.values[i].im).collect();
    pos_vals.sort_by(|a, b| b.total_cmp(a));
    neg.sort_by(|a, b| b.total_cmp(a));
    if pos_vals.len() != neg.len() || !zero.len().is_multiple_of(2) {
        return Err(Error::EigenPairing(format!(
            "{} positive, {} negative, {} zero eigenvalues",
            pos_vals.len(),
            neg.len(),
            zero.len()
        )));
    }
    for (a, b) in pos_vals.iter().zip(&neg) {
        if (a - b).abs() > PAIRING_TOL * scale.max(1.0) {
            return Err(Error::EigenPairing(format!("{a} has no partner (nearest {b})")));
        }
    }

    // Positive family, grouped by σ.
    pos.sort_by(|&a, &b| raw.values[b].im.total_cmp(&raw.values[a].im));
    let mut blocks: Vec<ComplexMatrix> = Vec::new();
    let mut start = 0;
    while start < pos.len() {
        let head = raw.values[pos[start]].im;
        let mut end = start + 1;
        while end < pos.len() && head - raw.values[pos[end]].im <= GROUP_TOL * max_sigma {
            end += 1;
        }
        let mut z = ComplexMatrix::zeros(dim, end - start);
        for (j, &idx) in pos[start..end].iter().enumerate() {
            z.set_column(j, &raw.vectors.column(idx));
        }
        blocks.push(form_gram_schmidt(z, &kc)?);
        start = end;
    }
    if !zero.is_empty() {
        let mut z = ComplexMatrix::zeros(dim, zero.len());
        for (j, &idx) in zero.iter().enumerate() {
            z.set_column(j, &raw.vectors.column(idx));
        }
        blocks.push(kernel_basis(&z, &kc)?);
    }

    // Hermitian refinement: diagonalize Z†·P̃·Z inside each group.
    let mut cols: Vec<(f64, DVector<Complex64>)> = Vec::with_capacity(n);
    for z in blocks {
        let h = z.adjoint() * &pc * &z;
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let refined = &z * &eig.eigenvectors;
        for j in 0..refined.ncols() {
            let mut v: DVector<Complex64> = refined.column(j).into_owned();
            fix_phase(&mut v);
            cols.push((eig.eigenvalues[j].max(0.0), v));
        }
    }
    cols.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut v = ComplexMatrix::zeros(dim, dim);
    let mut sigma = Vec::with_capacity(n);
    for (k, (s, col)) in cols.iter().enumerate() {
        v.set_column(k, col);
        v.set_column(n + k, &col.map(|z| z.conj()));
        sigma.push(*s);
    }

    let mut target = ComplexMatrix::identity(dim, dim);
    for k in n..dim {
        target[(k, k)] = Complex64::new(-1.0, 0.0);
    }
    let norm_resid = (form_product(&v, &kc, &v) - target).norm();
    if norm_resid > 1e-7 * (dim as f64).sqrt() {
        return Err(Error::Verification(format!(
            "eigenbasis normalization residual {norm_resid:e}"
        )));
    }
    Ok((v, sigma))
}

/// Modified Gram–Schmidt under `⟨u, v⟩ = −i·u†·K·v`.
fn form_gram_schmidt(mut z: ComplexMatrix, kc: &ComplexMatrix) -> Result<ComplexMatrix> {
    for j in 0..z.ncols() {
        for l in 0..j {
            let zl = z.column(l).into_owned();
            let zj = z.column(j).into_owned();
            let ip = (zl.adjoint() * kc * &zj)[(0, 0)] * Complex64::new(0.0, -1.0);
            z.set_column(j, &(zj - zl * ip));
        }
        let zj = z.column(j).into_owned();
        let nrm = zj.norm_squared();
        let pivot = ((zj.adjoint() * kc * &zj)[(0, 0)] * Complex64::new(0.0, -1.0)).re;
        if !(pivot > PIVOT_TOL * nrm) {
            return Err(Error::DegenerateFormBreakdown(pivot / nrm.max(f64::MIN_POSITIVE)));
        }
        z.set_column(j, &(zj / Complex64::new(pivot.sqrt(), 0.0)));
    }
    Ok(z)
}

/// Form-normalized positive family on the zero-σ eigenspace.
///
/// A real orthonormal basis `Z` of the eigenspace carries the restricted form
/// `Ω = Zᵀ·K·Z`. Eigenvectors `u` of `i·Ω` with eigenvalue `λ < 0`, scaled to
/// `|u|² = 1/|λ|`, give `v = Z·u` with `−i·v†·K·v = 1`.
fn kernel_basis(raw: &ComplexMatrix, kc: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = raw.nrows();
    let k2 = raw.ncols();
    let mut stacked = RealMatrix::zeros(dim, 2 * k2);
    stacked.view_mut((0, 0), (dim, k2)).copy_from(&real_part(raw));
    stacked.view_mut((0, k2), (dim, k2)).copy_from(&raw.map(|c| c.im));
    let svd = stacked.svd(true, false);
    let u = svd.u.ok_or_else(|| Error::SolveFailure("SVD returned no left vectors".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut z = RealMatrix::zeros(dim, k2);
    for (j, &idx) in order.iter().take(k2).enumerate() {
        z.set_column(j, &u.column(idx));
    }
    let kr = real_part(kc);
    let omega = z.transpose() * kr * &z;
    let i_omega = complexify(&omega) * Complex64::new(0.0, 1.0);
    let i_omega = (&i_omega + i_omega.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = i_omega.symmetric_eigen();
    let mut picked: Vec<usize> = (0..k2).filter(|&i| eig.eigenvalues[i] < 0.0).collect();
    picked.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if picked.len() != k2 / 2 {
        return Err(Error::DegenerateFormBreakdown(0.0));
    }
    let zc = complexify(&z);
    let mut out = ComplexMatrix::zeros(dim, k2 / 2);
    for (j, &i) in picked.iter().enumerate() {
        let lam = eig.eigenvalues[i];
        if lam.abs() < PIVOT_TOL {
            return Err(Error::DegenerateFormBreakdown(lam.abs()));
        }
        let col = eig.eigenvectors.column(i) * Complex64::new(1.0 / lam.abs().sqrt(), 0.0);
        out.set_column(j, &(&zc * col));
    }
    Ok(out)
}

/// Rotates `v` so that its largest-magnitude entry is real and positive.
fn fix_phase(v: &mut DVector<Complex64>) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Output of [`williamson`]: `T·P·Tᵀ = diag(σ₁I₂, …, σₙI₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonResult {
    pub transform: SymplecticTransform,
    pub sigma: Vec<f64>,
    pub sigma_matrix: RealMatrix,
}

/// Symplectic diagonalization of a positive semidefinite `P`.
pub fn williamson(p: &RealMatrix) -> Result<WilliamsonResult> {
    let n = check_gramian(p)?;
    if n == 0 {
        return Ok(WilliamsonResult {
            transform: SymplecticTransform::identity(0),
            sigma: vec![],
            sigma_matrix: RealMatrix::zeros(0, 0),
        });
    }
    let form = SymplecticForm::new(n);
    let p_tilde = &form.ps * p * form.ps.transpose();
    let raw = eigen_decompose(&(&form.kn * &p_tilde))?;
    let cond = raw.condition_number();
    if !(cond < 1e8) {
        return Err(Error::NotDiagonalizable(format!(
            "eigenvector condition number {cond:e}"
        )));
    }
    let (v, sigma) = normalize_eigenbasis(&raw, &p_tilde, n)?;

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        u[(2 * k, 2 * k)] = Complex64::new(h, 0.0);
        u[(2 * k, 2 * k + 1)] = Complex64::new(0.0, -h);
        u[(2 * k + 1, 2 * k)] = Complex64::new(h, 0.0);
        u[(2 * k + 1, 2 * k + 1)] = Complex64::new(0.0, h);
    }
    let psc = complexify(&form.ps);
    let tc = (psc.transpose() * v * &psc * u).transpose();
    let imag = tc.map(|z| z.im).norm();
    if imag > 1e-8 * tc.norm().max(1.0) {
        return Err(Error::ImaginaryResidual(imag));
    }
    let transform = SymplecticTransform::new(real_part(&tc))?;
    let sigma_matrix = paired_diagonal(&sigma);
    let resid = (&transform.matrix * p * transform.matrix.transpose() - &sigma_matrix).norm();
    if resid > 1e-7 * p.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Verification(format!("T·P·Tᵀ differs from Σ by {resid:e}")));
    }
    Ok(WilliamsonResult { transform, sigma, sigma_matrix })
}

/// One symplectic `T` putting `P` and `Q` in paired-diagonal form at once:
/// `T·P·Tᵀ = diag(σ_P I₂)`, `T⁻ᵀ·Q·T⁻¹ = diag(σ_Q I₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoDiagonalization {
    pub transform: SymplecticTransform,
    pub sigma_p: Vec<f64>,
    pub sigma_q: Vec<f64>,
}

/// Relative commutator `‖[Jn·P, Q·Jn]‖_F / (‖P‖_F·‖Q‖_F)`.
pub fn gramian_commutator(p: &RealMatrix, q: &RealMatrix) -> Result<f64> {
    let n = even_order(p)?;
    let j = j_form(n);
    let jp = &j * p;
    let qj = q * &j;
    let denom = p.norm() * q.norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((&jp * &qj - &qj * &jp).norm() / denom)
}

/// Co-diagonalizes Gramians whose products `Jn·P` and `Q·Jn` commute.
///
/// Modes are ordered by `σ_P` descending and, inside each degenerate `σ_P`
/// group, by `σ_Q` descending.
pub fn codiagonalize_commuting(p: &RealMatrix, q: &RealMatrix, tol: f64) -> Result<CoDiagonalization> {
    let n = check_gramian(p)?;
    if q.shape() != p.shape() {
        return Err(Error::DimensionMismatch("P and Q differ in shape".into()));
    }
    check_gramian(q)?;
    let comm = gramian_commutator(p, q)?;
    if comm > tol {
        return Err(Error::NotCommuting(comm));
    }
    let wp = williamson(p)?;
    let tp = &wp.transform;
    let tp_inv = tp.inverse_matrix();
    let q1 = tp_inv.transpose() * q * &tp_inv;
    let q1 = (&q1 + q1.transpose()) * 0.5;

    let max_sigma = wp.sigma.first().copied().unwrap_or(0.0);
    let mut block = RealMatrix::identity(2 * n, 2 * n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && wp.sigma[start] - wp.sigma[end] <= GROUP_TOL * max_sigma {
            end += 1;
        }
        let size = 2 * (end - start);
        let qb = q1.view((2 * start, 2 * start), (size, size)).into_owned();
        let wq = williamson(&qb)?;
        let sb = wq.transform.inverse_matrix().transpose();
        block.view_mut((2 * start, 2 * start), (size, size)).copy_from(&sb);
        start = end;
    }
    let transform = SymplecticTransform::new(block * &tp.matrix)?;
    let t_inv = transform.inverse_matrix();
    let pd = &transform.matrix * p * transform.matrix.transpose();
    let qd = t_inv.transpose() * q * &t_inv;
    let (sigma_p, rp) = paired_diagonal_part(&pd);
    let (sigma_q, rq) = paired_diagonal_part(&qd);
    if rp > 1e-6 * p.norm() || rq > 1e-6 * q.norm() {
        return Err(Error::NotCoDiagonalizable(format!(
            "off-diagonal residuals {rp:e} (P), {rq:e} (Q)"
        )));
    }
    Ok(CoDiagonalization { transform, sigma_p, sigma_q })
}

/// Symmetric `2n×2n` matrix with standard normal entries, scaled.
fn random_symmetric<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> RealMatrix {
    let g = RealMatrix::from_fn(2 * n, 2 * n, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&g + g.transpose()) * (0.5 * scale)
}

/// `exp(Jn·S)` for a random symmetric `S` of entry scale `scale`.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> RealMatrix {
    let s = random_symmetric(n, scale, rng);
    (j_form(n) * s).exp()
}

/// Random orthogonal symplectic matrix: `exp(Jn·S)` with `S` commuting with `Jn`.
pub fn random_unitary_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let j = j_form(n);
    let s0 = random_symmetric(n, 1.0, rng);
    let s = (&s0 + &j * &s0 * j.transpose()) * 0.5;
    (j * s).exp()
}
