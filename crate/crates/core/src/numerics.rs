//! Dense matrix substrate: Lyapunov solves, eigen decompositions, stability
//! tests, singular values and the H-infinity norm.
//!
//! Everything here works on small dense matrices (a few dozen rows at most).

use nalgebra::{Complex, ComplexField, DMatrix};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
/// Real dense matrix. Entries are dimensionless unless a caller says otherwise.
pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

const SCHUR_MAX_ITER: usize = 10_000;

pub fn complexify(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.re)
}

pub fn imag_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|z| z.im)
}

/// `(M + Mᵀ) / 2`.
pub fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()) * 0.5
}

/// Relative asymmetry `‖M − Mᵀ‖_F / max(‖M‖_F, tiny)`.
pub fn asymmetry(m: &RealMatrix) -> f64 {
    let n = m.norm();
    if n == 0.0 {
        return 0.0;
    }
    (m - m.transpose()).norm() / n
}

pub(crate) fn check_square(m: &RealMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Default Hurwitz margin: `1e-10 · max(1, ‖A‖_F)`.
pub fn default_hurwitz_tol(a: &RealMatrix) -> f64 {
    1e-10 * a.norm().max(1.0)
}

/// Eigenvalues of a real or complex square matrix from its complex Schur form.
pub fn eigenvalues<T>(m: &DMatrix<T>) -> Result<Vec<Complex64>>
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mc: ComplexMatrix = m.map(|x| Complex64::new(x.clone().real(), x.imaginary()));
    let schur = mc
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::SolveFailure("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Largest real part over the spectrum; `-inf` for an empty matrix.
pub fn spectral_abscissa(a: &RealMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// True iff every eigenvalue of `a` has real part `< -tol`.
pub fn is_hurwitz(a: &RealMatrix, tol: f64) -> bool {
    match spectral_abscissa(a) {
        Ok(alpha) => alpha < -tol,
        Err(_) => false,
    }
}

/// Solves `A·X + X·Aᵀ + W = 0` by Bartels–Stewart on the complex Schur form of `A`.
///
/// One step of iterative refinement is applied and the residual is checked
/// against `1e-9 · (‖A‖_F·‖X‖_F + ‖W‖_F)`. The returned `X` is exactly symmetric.
pub fn solve_lyapunov(a: &RealMatrix, w: &RealMatrix) -> Result<RealMatrix> {
    let n = check_square(a, "A")?;
    if w.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "W is {}x{}, expected {n}x{n}",
            w.nrows(),
            w.ncols()
        )));
    }
    if n == 0 {
        return Ok(RealMatrix::zeros(0, 0));
    }
    let asym = asymmetry(w);
    if asym > 1e-10 {
        return Err(Error::NotSymmetric(asym));
    }

    let schur = complexify(a)
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::SolveFailure("Schur iteration did not converge".into()))?;
    let (u, t) = schur.unpack();
    let abscissa = (0..n).map(|i| t[(i, i)].re).fold(f64::NEG_INFINITY, f64::max);
    if abscissa >= -1e-12 * a.norm() {
        return Err(Error::NotHurwitz { abscissa });
    }

    let solve = |rhs: &RealMatrix| -> Result<RealMatrix> {
        let c = u.adjoint() * complexify(rhs) * &u;
        let y = solve_triangular_lyapunov(&t, &c)?;
        Ok(real_part(&(&u * y * u.adjoint())))
    };

    let mut x = symmetrize(&solve(w)?);
    let resid = a * &x + &x * a.transpose() + w;
    let correction = solve(&symmetrize(&resid))?;
    x = symmetrize(&(x + correction));

    let resid = (a * &x + &x * a.transpose() + w).norm();
    let scale = a.norm() * x.norm() + w.norm();
    if resid > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SolveFailure(format!(
            "Lyapunov residual {resid:e} exceeds bound for scale {scale:e}"
        )));
    }
    Ok(x)
}

/// Solves `T·Y + Y·Tᴴ + C = 0` with `T` upper triangular, column by column from the right.
fn solve_triangular_lyapunov(t: &ComplexMatrix, c: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = t.nrows();
    let mut y = ComplexMatrix::zeros(n, n);
    for j in (0..n).rev() {
        let shift = t[(j, j)].conj();
        let mut rhs: Vec<Complex64> = (0..n).map(|i| -c[(i, j)]).collect();
        for k in (j + 1)..n {
            let coef = t[(j, k)].conj();
            if coef != Complex64::new(0.0, 0.0) {
                for (i, r) in rhs.iter_mut().enumerate() {
                    *r -= coef * y[(i, k)];
                }
            }
        }
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for l in (i + 1)..n {
                acc -= t[(i, l)] * y[(l, j)];
            }
            let pivot = t[(i, i)] + shift;
            if pivot.norm() < f64::EPSILON * t.norm().max(f64::MIN_POSITIVE) {
                return Err(Error::SolveFailure(format!(
                    "near-singular Sylvester pivot at ({i},{j})"
                )));
            }
            y[(i, j)] = acc / pivot;
        }
    }
    Ok(y)
}

/// Largest singular value; zero for an empty matrix.
pub fn max_singular_value<T>(m: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// All singular values, descending.
pub fn singular_values<T>(m: &DMatrix<T>) -> Vec<f64>
where
    T: ComplexField<RealField = f64>,
{
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenpairs of a square matrix; column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Largest column residual `‖M·v_k − λ_k·v_k‖`.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        let mv = m * &self.vectors;
        (0..self.values.len())
            .map(|k| (mv.column(k) - self.vectors.column(k) * self.values[k]).norm())
            .fold(0.0, f64::max)
    }

    /// 2-norm condition number of the eigenvector matrix.
    pub fn condition_number(&self) -> f64 {
        let s = singular_values(&self.vectors);
        match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        }
    }
}

/// Eigen decomposition of a general (real or complex) square matrix.
///
/// Eigenvalues come from the complex Schur form. Eigenvalues within
/// `1e-7·‖M‖_F` of each other are clustered and each cluster's eigenspace is
/// taken as the numerical null space of `M − λ̄I` (unit-norm columns). A cluster
/// whose null space does not have full dimension means `M` is defective, which
/// is reported as [`Error::NotDiagonalizable`].
pub fn eigen_decompose<T>(m: &DMatrix<T>) -> Result<EigenDecomposition>
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch("eigen_decompose needs a square matrix".into()));
    }
    let mc: ComplexMatrix = m.map(|x| Complex64::new(x.clone().real(), x.imaginary()));
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: mc });
    }
    let scale = mc.norm().max(f64::MIN_POSITIVE);
    let raw = eigenvalues(&mc)?;
    let clusters = cluster_values(&raw, 1e-7 * scale);

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut col = 0;
    for cluster in clusters {
        let k = cluster.len();
        let mean = cluster.iter().fold(Complex64::new(0.0, 0.0), |acc, &i| acc + raw[i])
            / k as f64;
        let spread = cluster.iter().map(|&i| (raw[i] - mean).norm()).fold(0.0, f64::max);
        let shifted = &mc - ComplexMatrix::identity(n, n) * mean;
        let basis = null_space(&shifted, k)?;
        for j in 0..k {
            let v = basis.column(j);
            let resid = (&shifted * v).norm();
            if resid > 1e-9 * scale + 4.0 * spread {
                return Err(Error::NotDiagonalizable(format!(
                    "eigenvalue {mean} has residual {resid:e}; eigenspace is deficient"
                )));
            }
            vectors.set_column(col, &v);
            values.push(mean);
            col += 1;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Single-linkage clustering of eigenvalues; returns index groups.
fn cluster_values(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut label, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Orthonormal basis for the `k`-dimensional numerical null space of `m`
/// (right singular vectors of the `k` smallest singular values).
pub fn null_space(m: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let n = m.ncols();
    if k == 0 {
        return Ok(ComplexMatrix::zeros(n, 0));
    }
    // Pad to square so that the SVD always returns n right singular vectors.
    let padded = if m.nrows() < n {
        let mut p = ComplexMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::SolveFailure("SVD did not return right singular vectors".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut basis = ComplexMatrix::zeros(n, k);
    for (j, &idx) in order.iter().take(k).enumerate() {
        let row = v_t.row(idx).adjoint();
        basis.set_column(j, &row);
    }
    Ok(basis)
}

/// Borrowed state-space view `(A, B, C, D)` of a continuous-time system.
#[derive(Debug, Clone, Copy)]
pub struct Lti<'a> {
    pub a: &'a RealMatrix,
    pub b: &'a RealMatrix,
    pub c: &'a RealMatrix,
    pub d: &'a RealMatrix,
}

impl<'a> Lti<'a> {
    pub fn new(
        a: &'a RealMatrix,
        b: &'a RealMatrix,
        c: &'a RealMatrix,
        d: &'a RealMatrix,
    ) -> Result<Self> {
        let n = check_square(a, "A")?;
        if b.nrows() != n || c.ncols() != n || d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Lti { a, b, c, d })
    }

    /// `C·(sI − A)⁻¹·B + D`.
    pub fn transfer_at(&self, s: Complex64) -> Result<ComplexMatrix> {
        let n = self.a.nrows();
        let d = complexify(self.d);
        if n == 0 {
            return Ok(d);
        }
        let resolvent = ComplexMatrix::identity(n, n) * s - complexify(self.a);
        let lu = resolvent.lu();
        let x = lu
            .solve(&complexify(self.b))
            .ok_or_else(|| Error::SingularResolvent(s.to_string()))?;
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::SingularResolvent(s.to_string()));
        }
        Ok(complexify(self.c) * x + d)
    }

    /// `σ̄(Ξ(iω))`.
    pub fn gain_at(&self, omega: f64) -> Result<f64> {
        Ok(max_singular_value(&self.transfer_at(Complex64::new(0.0, omega))?))
    }
}

/// How an H-infinity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HinfMethod {
    /// Hamiltonian imaginary-axis bisection converged.
    Bisection,
    /// Grid sweep with golden-section refinement; the Hamiltonian test was
    /// unusable (ill-conditioned or a numerically zero system).
    GridFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HinfNorm {
    pub value: f64,
    /// Frequency (rad/s, ≥ 0) at which `value` is attained; `inf` for the feedthrough limit.
    pub peak_frequency: f64,
    pub method: HinfMethod,
}

/// `‖Ξ‖_∞ = sup_ω σ̄(Ξ(iω))` to relative accuracy `tol`.
///
/// A log-spaced sweep (anchored on the pole magnitudes) gives a lower bound,
/// then the level is raised by the Boyd–Balakrishnan iteration: at
/// `γ = (1 + 2·tol)·lower` the imaginary-axis eigenvalues of the Hamiltonian
/// matrix locate the frequency intervals where `σ̄ > γ`, and their midpoints
/// are evaluated. The loop stops when no crossing remains.
pub fn hinf_norm(sys: &Lti<'_>, tol: f64) -> Result<HinfNorm> {
    let n = sys.a.nrows();
    let abscissa = spectral_abscissa(sys.a)?;
    if n > 0 && abscissa >= -default_hurwitz_tol(sys.a) {
        return Err(Error::NotHurwitz { abscissa });
    }
    let tol = tol.max(1e-12);
    let d_gain = max_singular_value(sys.d);
    let mut best = HinfNorm {
        value: d_gain,
        peak_frequency: f64::INFINITY,
        method: HinfMethod::Bisection,
    };
    if n == 0 || sys.b.ncols() == 0 || sys.c.nrows() == 0 {
        return Ok(best);
    }

    let grid = frequency_sweep(sys.a)?;
    let mut gains = Vec::with_capacity(grid.len());
    for &w in &grid {
        let g = sys.gain_at(w)?;
        gains.push(g);
        if g > best.value {
            best.value = g;
            best.peak_frequency = w;
        }
    }

    let min_decay = eigenvalues(sys.a)?
        .iter()
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min);
    let natural = d_gain + sys.b.norm() * sys.c.norm() / min_decay.max(f64::MIN_POSITIVE);
    if best.value <= 1e-12 * natural {
        return Ok(grid_refine(sys, &grid, &gains, best));
    }

    let a_scale = sys.a.norm();
    for _ in 0..100 {
        let gamma = (1.0 + 2.0 * tol) * best.value;
        let crossings = match imaginary_crossings(sys, gamma, a_scale) {
            Some(c) => c,
            None => return Ok(grid_refine(sys, &grid, &gains, best)),
        };
        if crossings.is_empty() {
            return Ok(best);
        }
        let mut pts: Vec<f64> = crossings.iter().flat_map(|&w| [w, -w]).collect();
        pts.sort_by(|a, b| a.total_cmp(b));
        let mut improved = false;
        for pair in pts.windows(2) {
            let mid = 0.5 * (pair[0] + pair[1]);
            let g = sys.gain_at(mid.abs())?;
            if g > best.value {
                improved = true;
                best.value = g;
                best.peak_frequency = mid.abs();
            }
        }
        if !improved {
            return Ok(best);
        }
    }
    Ok(best)
}

/// Verified non-negative frequencies where `γ` is a singular value of `Ξ(iω)`.
/// `None` when the Hamiltonian cannot be formed reliably.
fn imaginary_crossings(sys: &Lti<'_>, gamma: f64, a_scale: f64) -> Option<Vec<f64>> {
    let n = sys.a.nrows();
    let m = sys.b.ncols();
    let (a, b, c, d) = (sys.a, sys.b, sys.c, sys.d);
    let r = RealMatrix::identity(m, m) * (gamma * gamma) - d.transpose() * d;
    let r_lu = r.clone().lu();
    let r_inv = r_lu.try_inverse()?;
    if !r_inv.iter().all(|x| x.is_finite()) {
        return None;
    }
    let ae = a + b * &r_inv * d.transpose() * c;
    let top_right = b * &r_inv * b.transpose();
    let bottom_left =
        -(c.transpose() * (RealMatrix::identity(d.nrows(), d.nrows()) + d * &r_inv * d.transpose()) * c);
    let mut h = RealMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&ae);
    h.view_mut((0, n), (n, n)).copy_from(&top_right);
    h.view_mut((n, 0), (n, n)).copy_from(&bottom_left);
    h.view_mut((n, n), (n, n)).copy_from(&(-ae.transpose()));
    if !h.iter().all(|x| x.is_finite()) {
        return None;
    }
    let eigs = eigenvalues(&h).ok()?;
    let mut found: Vec<f64> = Vec::new();
    for z in eigs {
        if z.re.abs() > 1e-6 * (z.im.abs() + a_scale) {
            continue;
        }
        let w = z.im.abs();
        if found.iter().any(|&f| (f - w).abs() <= 1e-12 * (w + a_scale)) {
            continue;
        }
        let tf = sys.transfer_at(Complex64::new(0.0, w)).ok()?;
        let hit = singular_values(&tf)
            .iter()
            .any(|&s| (s - gamma).abs() <= 1e-7 * gamma);
        if hit {
            found.push(w);
        }
    }
    Some(found)
}

/// Log-spaced sweep spanning three decades beyond the pole magnitudes, plus
/// zero and the pole frequencies themselves.
fn frequency_sweep(a: &RealMatrix) -> Result<Vec<f64>> {
    let poles = eigenvalues(a)?;
    let mags: Vec<f64> = poles.iter().map(|z| z.norm()).filter(|&x| x > 0.0).collect();
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = mags.iter().cloned().fold(0.0, f64::max);
    let (lo, hi) = if lo.is_finite() && hi > 0.0 { (lo * 1e-3, hi * 1e3) } else { (1e-3, 1e3) };
    let points = 240;
    let mut grid = vec![0.0];
    let (l0, l1) = (lo.log10(), hi.log10());
    grid.extend((0..points).map(|k| 10f64.powf(l0 + (l1 - l0) * k as f64 / (points - 1) as f64)));
    grid.extend(poles.iter().map(|z| z.im.abs()).filter(|&w| w > 0.0));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    Ok(grid)
}

/// Golden-section refinement of the best grid point (in log frequency).
fn grid_refine(sys: &Lti<'_>, grid: &[f64], gains: &[f64], mut best: HinfNorm) -> HinfNorm {
    best.method = HinfMethod::GridFallback;
    let Some(idx) = gains
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
    else {
        return best;
    };
    let lo = grid[idx.saturating_sub(1)];
    let hi = grid[(idx + 1).min(grid.len() - 1)];
    if hi <= lo {
        return best;
    }
    let gain = |w: f64| sys.gain_at(w).unwrap_or(0.0);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (gain(x1), gain(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = gain(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = gain(x1);
        }
        if (b - a) <= 1e-12 * b.max(1e-300) {
            break;
        }
    }
    for (w, f) in [(x1, f1), (x2, f2)] {
        if f > best.value {
            best.value = f;
            best.peak_frequency = w;
        }
    }
    best
}

/// Flattened Kronecker-free helper: `max |M_ij|`.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
