//! Linear quantum stochastic systems: SLH parameters, the quadrature
//! state-space form, physical realizability, complete passivity, network
//! products and subsystem truncation.
//!
//! Quadratures are `x = (q₁, p₁, …)` with annihilation vector `a = Σ_n·x`,
//! where row `j` of `Σ_n` is `½(e_{2j−1} + i·e_{2j})`. Field quadratures are
//! `w = 2(Re 𝒜₁, Im 𝒜₁, …)`. Rates are in rad/s, couplings in √(rad/s).

use crate::error::{Error, Result};
use crate::numerics::{
    asymmetry, complexify, imag_part, real_part, symmetrize, Complex64, ComplexMatrix, Lti,
    RealMatrix,
};
use crate::symplectic::{j_form, mode_permutation_matrix, SymplecticTransform};

const UNITARY_TOL: f64 = 1e-10;

/// Physical parameterization `(S, L = K·x, H = ½xᵀRx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlhParams {
    /// `m×m` unitary scattering matrix.
    pub s: ComplexMatrix,
    /// `m×2n` coupling matrix.
    pub k: ComplexMatrix,
    /// `2n×2n` symmetric Hamiltonian matrix.
    pub r: RealMatrix,
}

impl SlhParams {
    pub fn new(s: ComplexMatrix, k: ComplexMatrix, r: RealMatrix) -> Result<Self> {
        let m = s.nrows();
        if s.ncols() != m || k.nrows() != m || !k.ncols().is_multiple_of(2) || r.shape() != (k.ncols(), k.ncols()) {
            return Err(Error::DimensionMismatch(format!(
                "S {:?}, K {:?}, R {:?}",
                s.shape(),
                k.shape(),
                r.shape()
            )));
        }
        let resid = (&s * s.adjoint() - ComplexMatrix::identity(m, m)).norm();
        if resid > UNITARY_TOL {
            return Err(Error::NonUnitaryScattering(resid));
        }
        let asym = asymmetry(&r);
        if asym > 1e-10 {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(SlhParams { s, k, r: symmetrize(&r) })
    }

    /// `m` pass-through channels with no internal modes.
    pub fn identity(m: usize) -> Self {
        SlhParams {
            s: ComplexMatrix::identity(m, m),
            k: ComplexMatrix::zeros(m, 0),
            r: RealMatrix::zeros(0, 0),
        }
    }

    pub fn modes(&self) -> usize {
        self.k.ncols() / 2
    }

    pub fn channels(&self) -> usize {
        self.s.nrows()
    }
}

/// Passive form `H = ½a†R̃a`, `L = K̃a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveParams {
    /// `n×n` Hermitian.
    pub r_tilde: ComplexMatrix,
    /// `m×n`.
    pub k_tilde: ComplexMatrix,
}

impl PassiveParams {
    /// Coupling rates `γ_ij = |K̃_ij|²`.
    pub fn rates(&self) -> RealMatrix {
        self.k_tilde.map(|z| z.norm_sqr())
    }

    /// Coupling phases `θ_ij = arg K̃_ij`.
    pub fn phases(&self) -> RealMatrix {
        self.k_tilde.map(|z| z.arg())
    }
}

/// Quadrature realization `dx = A·x dt + B·dw`, `dy = C·x dt + D·dw`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureModel {
    pub n: usize,
    pub m: usize,
    pub n_y: usize,
    pub a: RealMatrix,
    pub b: RealMatrix,
    pub c: RealMatrix,
    pub d: RealMatrix,
    pub pr_certified: bool,
}

impl QuadratureModel {
    /// Shape-checked model; `pr_certified` starts false.
    pub fn new(a: RealMatrix, b: RealMatrix, c: RealMatrix, d: RealMatrix) -> Result<Self> {
        let dim = a.nrows();
        if a.ncols() != dim
            || !dim.is_multiple_of(2)
            || b.nrows() != dim
            || !b.ncols().is_multiple_of(2)
            || c.ncols() != dim
            || !c.nrows().is_multiple_of(2)
            || d.nrows() != c.nrows()
            || d.ncols() != b.ncols()
        {
            return Err(Error::DimensionMismatch(format!(
                "A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(QuadratureModel {
            n: dim / 2,
            m: b.ncols() / 2,
            n_y: c.nrows(),
            a,
            b,
            c,
            d,
            pr_certified: false,
        })
    }

    pub fn lti(&self) -> Lti<'_> {
        Lti { a: &self.a, b: &self.b, c: &self.c, d: &self.d }
    }

    /// Sets `pr_certified` from a fresh residual check at `tol`.
    pub fn certify(mut self, tol: f64) -> Self {
        self.pr_certified = check_physical_realizability(&self, tol).passed;
        self
    }
}

/// Scaled residuals of the three physical-realizability identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrReport {
    /// `‖A·Jn + Jn·Aᵀ + B·Jm·Bᵀ‖_F / max(1, 2‖A‖_F + ‖B‖_F²)`.
    pub state: f64,
    /// `‖Jn·Cᵀ + B·Jm·Dᵀ‖_F / max(1, ‖C‖_F + ‖B‖_F·‖D‖_F)`.
    pub cross: f64,
    /// `‖D·Jm·Dᵀ − J_{n_y/2}‖_F / max(1, ‖D‖_F²)`.
    pub output: f64,
    pub tol: f64,
    pub passed: bool,
}

impl PrReport {
    pub fn max_residual(&self) -> f64 {
        self.state.max(self.cross).max(self.output)
    }
}

pub fn check_physical_realizability(g: &QuadratureModel, tol: f64) -> PrReport {
    let jn = j_form(g.n);
    let jm = j_form(g.m);
    let jy = j_form(g.n_y / 2);
    let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
    let state = (a * &jn + &jn * a.transpose() + b * &jm * b.transpose()).norm()
        / (2.0 * a.norm() + b.norm_squared()).max(1.0);
    let cross = (&jn * c.transpose() + b * &jm * d.transpose()).norm()
        / (c.norm() + b.norm() * d.norm()).max(1.0);
    let output = (d * &jm * d.transpose() - jy).norm() / d.norm_squared().max(1.0);
    let passed = state <= tol && cross <= tol && output <= tol;
    PrReport { state, cross, output, tol, passed }
}

/// `Σ_n`: `n×2n` with row `j` equal to `½(e_{2j−1} + i·e_{2j})`.
pub fn sigma_map(n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(n, 2 * n);
    for j in 0..n {
        s[(j, 2 * j)] = Complex64::new(0.5, 0.0);
        s[(j, 2 * j + 1)] = Complex64::new(0.0, 0.5);
    }
    s
}

/// Annihilation-basis image `W = 2·[Σ; Σ#]·T·[Σ†, Σᵀ]` of a real `2n×2n` matrix.
pub fn bogoliubov_matrix(t: &RealMatrix) -> ComplexMatrix {
    let n = t.nrows() / 2;
    let sig = sigma_map(n);
    let mut top = ComplexMatrix::zeros(2 * n, 2 * n);
    top.view_mut((0, 0), (n, 2 * n)).copy_from(&sig);
    top.view_mut((n, 0), (n, 2 * n)).copy_from(&sig.map(|z| z.conj()));
    let right = top.adjoint() * Complex64::new(2.0, 0.0);
    top * complexify(t) * right
}

/// The block `W₁` of `W = diag(W₁, W₁#)` for a unitary symplectic `T`.
///
/// Fails when the off-diagonal blocks exceed `tol` or `W₁` is not unitary to `tol`.
pub fn unitary_block(t: &RealMatrix, tol: f64) -> Result<ComplexMatrix> {
    let n = t.nrows() / 2;
    let w = bogoliubov_matrix(t);
    let off = w.view((0, n), (n, n)).norm() + w.view((n, 0), (n, n)).norm();
    let w1 = w.view((0, 0), (n, n)).into_owned();
    let unit = (&w1 * w1.adjoint() - ComplexMatrix::identity(n, n)).norm();
    if off > tol || unit > tol {
        return Err(Error::Verification(format!(
            "annihilation block: off-diagonal {off:e}, unitarity {unit:e}"
        )));
    }
    Ok(w1)
}

/// Real `2m×2m` image of a complex `m×m` field map: blocks `[[Re, −Im], [Im, Re]]`.
fn realify(s: &ComplexMatrix) -> RealMatrix {
    let (r, c) = s.shape();
    let mut d = RealMatrix::zeros(2 * r, 2 * c);
    for j in 0..r {
        for k in 0..c {
            let z = s[(j, k)];
            d[(2 * j, 2 * k)] = z.re;
            d[(2 * j, 2 * k + 1)] = -z.im;
            d[(2 * j + 1, 2 * k)] = z.im;
            d[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    d
}

/// Quadrature model of an SLH triple; always PR-certified.
pub fn build_from_slh(p: &SlhParams) -> Result<QuadratureModel> {
    let m = p.channels();
    let n = p.modes();
    let resid = (&p.s * p.s.adjoint() - ComplexMatrix::identity(m, m)).norm();
    if resid > UNITARY_TOL {
        return Err(Error::NonUnitaryScattering(resid));
    }
    let jn = j_form(n);
    let kk = p.k.adjoint() * &p.k;
    let a = &jn * (&p.r + imag_part(&kk)) * 2.0;
    let b = &jn * imag_part(&(p.k.adjoint() * &p.s * sigma_map(m))) * 4.0;
    let mut c = RealMatrix::zeros(2 * m, 2 * n);
    for j in 0..m {
        for l in 0..2 * n {
            c[(2 * j, l)] = 2.0 * p.k[(j, l)].re;
            c[(2 * j + 1, l)] = 2.0 * p.k[(j, l)].im;
        }
    }
    let d = realify(&p.s);
    let mut g = QuadratureModel::new(a, b, c, d)?;
    g.pr_certified = true;
    Ok(g)
}

/// Recovers `(S, K, R)` from a model with `n_y = 2m` and unitary-symplectic `D`.
/// Models with fewer outputs are completed first.
pub fn slh_from_model(g: &QuadratureModel) -> Result<SlhParams> {
    let full = if g.n_y < 2 * g.m { with_completed_outputs(g)? } else { g.clone() };
    if full.n_y != 2 * full.m {
        return Err(Error::DimensionMismatch(format!(
            "{} output quadratures for {} channels",
            full.n_y, full.m
        )));
    }
    let (n, m) = (full.n, full.m);
    let mut s = ComplexMatrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            s[(j, k)] = Complex64::new(full.d[(2 * j, 2 * k)], full.d[(2 * j + 1, 2 * k)]);
        }
    }
    let mut k = ComplexMatrix::zeros(m, 2 * n);
    for j in 0..m {
        for l in 0..2 * n {
            k[(j, l)] = Complex64::new(full.c[(2 * j, l)], full.c[(2 * j + 1, l)]) * 0.5;
        }
    }
    let jn = j_form(n);
    let r = -(&jn * &full.a) * 0.5 - imag_part(&(k.adjoint() * &k));
    SlhParams::new(s, k, symmetrize(&r))
}

/// Extra output rows `(C′, D′)` completing a model with `n_y < 2m` to `2m` outputs.
///
/// `D′` extends the rows of `D` to a symplectic basis of `R^{2m}` by symplectic
/// Gram–Schmidt with pivoting over the standard basis; `C′ = D′·Jm·Bᵀ·Jn`,
/// the unique rows satisfying `Jn·C′ᵀ + B·Jm·D′ᵀ = 0`.
pub fn complete_outputs(g: &QuadratureModel) -> Result<(RealMatrix, RealMatrix)> {
    let dim = 2 * g.m;
    let extra = dim.saturating_sub(g.n_y);
    if extra == 0 {
        return Ok((RealMatrix::zeros(0, 2 * g.n), RealMatrix::zeros(0, dim)));
    }
    let jm = j_form(g.m);
    let mut pairs: Vec<(nalgebra::RowDVector<f64>, nalgebra::RowDVector<f64>)> = (0..g.n_y / 2)
        .map(|k| (g.d.row(2 * k).into_owned(), g.d.row(2 * k + 1).into_owned()))
        .collect();
    let project = |u: &nalgebra::RowDVector<f64>,
                   pairs: &[(nalgebra::RowDVector<f64>, nalgebra::RowDVector<f64>)]| {
        let mut u = u.clone();
        for (e, f) in pairs {
            let uf = (&u * &jm * f.transpose())[(0, 0)];
            let ue = (&u * &jm * e.transpose())[(0, 0)];
            u = u - e * uf + f * ue;
        }
        u
    };
    let mut dp = RealMatrix::zeros(extra, dim);
    for p in 0..extra / 2 {
        let mut best: Option<nalgebra::RowDVector<f64>> = None;
        for i in 0..dim {
            let mut e = nalgebra::RowDVector::<f64>::zeros(dim);
            e[i] = 1.0;
            let u = project(&e, &pairs);
            if best.as_ref().is_none_or(|b| u.norm() > b.norm()) {
                best = Some(u);
            }
        }
        let r1 = best.unwrap_or_else(|| nalgebra::RowDVector::zeros(dim));
        let n1 = r1.norm();
        if n1 < 1e-10 {
            return Err(Error::CompletionFailure(n1));
        }
        let r1 = r1 / n1;
        let r2 = project(&(&r1 * &jm), &pairs);
        let pivot = (&r1 * &jm * r2.transpose())[(0, 0)];
        if pivot.abs() < 1e-10 {
            return Err(Error::CompletionFailure(pivot.abs()));
        }
        let r2 = r2 / pivot;
        dp.set_row(2 * p, &r1);
        dp.set_row(2 * p + 1, &r2);
        pairs.push((r1, r2));
    }
    let cp = &dp * &jm * g.b.transpose() * j_form(g.n);
    Ok((cp, dp))
}

/// The model with `complete_outputs` rows appended.
pub fn with_completed_outputs(g: &QuadratureModel) -> Result<QuadratureModel> {
    let (cp, dp) = complete_outputs(g)?;
    let c = stack_rows(&g.c, &cp);
    let d = stack_rows(&g.d, &dp);
    let mut out = QuadratureModel::new(g.a.clone(), g.b.clone(), c, d)?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

fn stack_rows(top: &RealMatrix, bottom: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    m.view_mut((0, 0), top.shape()).copy_from(top);
    m.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    m
}

/// Complete-passivity test; returns the extracted `(R̃, K̃)` when it holds.
///
/// Requires `Jn·R = R·Jn` and `K_(·,2j) = i·K_(·,2j−1)` to relative `tol`;
/// `S` is unitary by construction of [`SlhParams`].
pub fn is_completely_passive(p: &SlhParams, tol: f64) -> (bool, Option<PassiveParams>) {
    let n = p.modes();
    let m = p.channels();
    let jn = j_form(n);
    let r_comm = (&jn * &p.r - &p.r * &jn).norm() / p.r.norm().max(1.0);
    let mut k_err = 0.0;
    for j in 0..n {
        let lhs = p.k.column(2 * j + 1);
        let rhs = p.k.column(2 * j) * Complex64::new(0.0, 1.0);
        k_err += (lhs - rhs).norm_squared();
    }
    let k_err = k_err.sqrt() / p.k.norm().max(1.0);
    if r_comm > tol || k_err > tol {
        return (false, None);
    }
    let mut k_tilde = ComplexMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            k_tilde[(i, j)] = p.k[(i, 2 * j)] * 2.0;
        }
    }
    let mut r_tilde = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            r_tilde[(j, k)] = Complex64::new(p.r[(2 * j, 2 * k)], p.r[(2 * j + 1, 2 * k)]) * 4.0;
        }
    }
    let r_tilde = (&r_tilde + r_tilde.adjoint()) * Complex64::new(0.5, 0.0);
    (true, Some(PassiveParams { r_tilde, k_tilde }))
}

/// SLH triple of the passive form: `R = Re(Σ†·R̃·Σ)`, `K = K̃·Σ`.
pub fn slh_from_passive(pp: &PassiveParams, s: ComplexMatrix) -> Result<SlhParams> {
    let n = pp.r_tilde.nrows();
    let sig = sigma_map(n);
    let r = real_part(&(sig.adjoint() * &pp.r_tilde * &sig));
    let k = &pp.k_tilde * sig;
    SlhParams::new(s, k, symmetrize(&r))
}

fn block_diag_complex(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

fn block_diag(a: &RealMatrix, b: &RealMatrix) -> RealMatrix {
    let mut m = RealMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

/// Concatenation product `G1 ⊞ G2`; modes and channels of `G1` come first.
pub fn concatenate(g1: &SlhParams, g2: &SlhParams) -> SlhParams {
    SlhParams {
        s: block_diag_complex(&g1.s, &g2.s),
        k: block_diag_complex(&g1.k, &g2.k),
        r: block_diag(&g1.r, &g2.r),
    }
}

/// Series product `G2 ◁ G1` (output of `G1` feeds `G2`); modes of `G1` come first.
///
/// The Hamiltonian gains `Im{L₂†S₂L₁}`, i.e. `ΔR = M + Mᵀ` with
/// `M = Im{K₂†S₂K₁}` over the joint mode space.
pub fn series(g2: &SlhParams, g1: &SlhParams) -> Result<SlhParams> {
    let (m1, m2) = (g1.channels(), g2.channels());
    if m1 != m2 {
        return Err(Error::ChannelMismatch(m2, m1));
    }
    let (d1, d2) = (g1.k.ncols(), g2.k.ncols());
    let mut k1 = ComplexMatrix::zeros(m1, d1 + d2);
    k1.view_mut((0, 0), (m1, d1)).copy_from(&g1.k);
    let mut k2 = ComplexMatrix::zeros(m2, d1 + d2);
    k2.view_mut((0, d1), (m2, d2)).copy_from(&g2.k);
    let s = &g2.s * &g1.s;
    let k = &g2.s * &k1 + &k2;
    let mm = imag_part(&(k2.adjoint() * &g2.s * &k1));
    let r = block_diag(&g1.r, &g2.r) + &mm + mm.transpose();
    SlhParams::new(s, k, r)
}

fn check_pairs(pairs: &[usize], limit: usize) -> Result<()> {
    let mut seen = vec![false; limit];
    for &p in pairs {
        if p >= limit || seen[p] {
            return Err(Error::IndexOverlap(p));
        }
        seen[p] = true;
    }
    Ok(())
}

fn pair_rows(m: &RealMatrix, pairs: &[usize]) -> RealMatrix {
    let mut out = RealMatrix::zeros(2 * pairs.len(), m.ncols());
    for (k, &p) in pairs.iter().enumerate() {
        out.set_row(2 * k, &m.row(2 * p));
        out.set_row(2 * k + 1, &m.row(2 * p + 1));
    }
    out
}

fn pair_cols(m: &RealMatrix, pairs: &[usize]) -> RealMatrix {
    let mut out = RealMatrix::zeros(m.nrows(), 2 * pairs.len());
    for (k, &p) in pairs.iter().enumerate() {
        out.set_column(2 * k, &m.column(2 * p));
        out.set_column(2 * k + 1, &m.column(2 * p + 1));
    }
    out
}

fn complement(pairs: &[usize], total: usize) -> Vec<usize> {
    (0..total).filter(|i| !pairs.contains(i)).collect()
}

/// Feeds output pairs `out_pairs` of `up` into input pairs `in_pairs` of `down`.
///
/// State is `(x_up; x_down)`. Inputs are all `up` inputs followed by the
/// unconnected `down` inputs; outputs are all `down` outputs followed by the
/// unconnected `up` outputs.
pub fn interconnect_partial(
    up: &QuadratureModel,
    out_pairs: &[usize],
    down: &QuadratureModel,
    in_pairs: &[usize],
) -> Result<QuadratureModel> {
    if out_pairs.len() != in_pairs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} output pairs vs {} input pairs",
            out_pairs.len(),
            in_pairs.len()
        )));
    }
    check_pairs(out_pairs, up.n_y / 2)?;
    check_pairs(in_pairs, down.m)?;
    let up_rest = complement(out_pairs, up.n_y / 2);
    let down_rest = complement(in_pairs, down.m);

    let c1o = pair_rows(&up.c, out_pairs);
    let d1o = pair_rows(&up.d, out_pairs);
    let c1u = pair_rows(&up.c, &up_rest);
    let d1u = pair_rows(&up.d, &up_rest);
    let b2i = pair_cols(&down.b, in_pairs);
    let d2i = pair_cols(&down.d, in_pairs);
    let b2u = pair_cols(&down.b, &down_rest);
    let d2u = pair_cols(&down.d, &down_rest);

    let (s1, s2) = (2 * up.n, 2 * down.n);
    let (i1, i2) = (2 * up.m, b2u.ncols());
    let (o2, o1) = (down.n_y, c1u.nrows());

    let mut a = RealMatrix::zeros(s1 + s2, s1 + s2);
    a.view_mut((0, 0), (s1, s1)).copy_from(&up.a);
    a.view_mut((s1, 0), (s2, s1)).copy_from(&(&b2i * &c1o));
    a.view_mut((s1, s1), (s2, s2)).copy_from(&down.a);

    let mut b = RealMatrix::zeros(s1 + s2, i1 + i2);
    b.view_mut((0, 0), (s1, i1)).copy_from(&up.b);
    b.view_mut((s1, 0), (s2, i1)).copy_from(&(&b2i * &d1o));
    b.view_mut((s1, i1), (s2, i2)).copy_from(&b2u);

    let mut c = RealMatrix::zeros(o2 + o1, s1 + s2);
    c.view_mut((0, 0), (o2, s1)).copy_from(&(&d2i * &c1o));
    c.view_mut((0, s1), (o2, s2)).copy_from(&down.c);
    c.view_mut((o2, 0), (o1, s1)).copy_from(&c1u);

    let mut d = RealMatrix::zeros(o2 + o1, i1 + i2);
    d.view_mut((0, 0), (o2, i1)).copy_from(&(&d2i * &d1o));
    d.view_mut((0, i1), (o2, i2)).copy_from(&d2u);
    d.view_mut((o2, 0), (o1, i1)).copy_from(&d1u);

    let mut g = QuadratureModel::new(a, b, c, d)?;
    g.pr_certified = up.pr_certified && down.pr_certified;
    Ok(g)
}

/// Keeps the listed output pairs, in the given order.
pub fn select_outputs(g: &QuadratureModel, pairs: &[usize]) -> Result<QuadratureModel> {
    check_pairs(pairs, g.n_y / 2)?;
    let mut out = QuadratureModel::new(
        g.a.clone(),
        g.b.clone(),
        pair_rows(&g.c, pairs),
        pair_rows(&g.d, pairs),
    )?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

/// Reorders input channel pairs: new input `k` is old input `perm[k]`.
pub fn permute_inputs(g: &QuadratureModel, perm: &[usize]) -> Result<QuadratureModel> {
    if perm.len() != g.m {
        return Err(Error::BadPermutation(format!("{perm:?} for {} inputs", g.m)));
    }
    let p = mode_permutation_matrix(perm)?;
    let mut out = QuadratureModel::new(
        g.a.clone(),
        &g.b * p.transpose(),
        g.c.clone(),
        &g.d * p.transpose(),
    )?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

/// Reorders modes: new mode `k` is old mode `perm[k]`.
pub fn permute_modes(g: &QuadratureModel, perm: &[usize]) -> Result<QuadratureModel> {
    if perm.len() != g.n {
        return Err(Error::BadPermutation(format!("{perm:?} for {} modes", g.n)));
    }
    let p = mode_permutation_matrix(perm)?;
    let mut out = QuadratureModel::new(
        &p * &g.a * p.transpose(),
        &p * &g.b,
        &g.c * p.transpose(),
        g.d.clone(),
    )?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

/// Leading `r` modes `(A₁₁, B₁, C₁, D)`.
pub fn truncate_subsystem(g: &QuadratureModel, r: usize) -> Result<QuadratureModel> {
    if r == 0 || r >= g.n {
        return Err(Error::BadRange { r, n: g.n });
    }
    let k = 2 * r;
    let mut out = QuadratureModel::new(
        g.a.view((0, 0), (k, k)).into_owned(),
        g.b.rows(0, k).into_owned(),
        g.c.columns(0, k).into_owned(),
        g.d.clone(),
    )?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

/// `(T·A·T⁻¹, T·B, C·T⁻¹, D)`.
pub fn symplectic_similarity(g: &QuadratureModel, t: &SymplecticTransform) -> Result<QuadratureModel> {
    let fresh = SymplecticTransform::new(t.matrix.clone())?;
    if fresh.modes() != g.n {
        return Err(Error::DimensionMismatch(format!(
            "transform on {} modes, model has {}",
            fresh.modes(),
            g.n
        )));
    }
    let ti = fresh.inverse_matrix();
    let mut out = QuadratureModel::new(
        &fresh.matrix * &g.a * &ti,
        &fresh.matrix * &g.b,
        &g.c * &ti,
        g.d.clone(),
    )?;
    out.pr_certified = g.pr_certified;
    Ok(out)
}

/// `C·(sI − A)⁻¹·B + D`.
pub fn transfer_function_at(g: &QuadratureModel, s: Complex64) -> Result<ComplexMatrix> {
    g.lti().transfer_at(s)
}
