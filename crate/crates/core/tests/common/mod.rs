//! Independent oracles. Nothing here calls the library's numerics.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

pub type M = DMatrix<f64>;
pub type CM = DMatrix<Complex<f64>>;

pub fn j_oracle(n: usize) -> M {
    let mut j = M::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

pub fn gaussian<R: Rng>(r: usize, c: usize, rng: &mut R) -> M {
    M::from_fn(r, c, |_, _| rng.sample(StandardNormal))
}

/// Random matrix shifted left past its spectral norm, hence Hurwitz.
pub fn random_stable<R: Rng>(n: usize, rng: &mut R) -> M {
    let g = gaussian(n, n, rng);
    let s = g.clone().svd(false, false).singular_values.max();
    let shift = s + 0.1 + rng.random::<f64>();
    g - M::identity(n, n) * shift
}

/// `A·X + X·Aᵀ + W = 0` through `(I⊗A + A⊗I)·vec X = −vec W`.
pub fn kron_lyapunov(a: &M, w: &M) -> M {
    let n = a.nrows();
    let i = M::identity(n, n);
    let big = i.kronecker(a) + a.kronecker(&i);
    let rhs = -DMatrix::from_column_slice(n * n, 1, w.as_slice());
    let x = big.lu().solve(&rhs).expect("Kronecker system singular");
    M::from_column_slice(n, n, x.as_slice())
}

/// Symplectic eigenvalues as `|Im λ|` of `J·P`, real-Schur eigensolver, descending.
pub fn symplectic_eigs_oracle(p: &M) -> Vec<f64> {
    let n = p.nrows() / 2;
    let mut im: Vec<f64> = (j_oracle(n) * p).complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
    im.sort_by(|a, b| b.total_cmp(a));
    im.into_iter().step_by(2).collect()
}

pub fn to_complex(m: &M) -> CM {
    m.map(|x| Complex::new(x, 0.0))
}

/// `C·(iωI − A)⁻¹·B + D` by dense LU.
pub fn transfer(a: &M, b: &M, c: &M, d: &M, omega: f64) -> CM {
    let n = a.nrows();
    let s = CM::identity(n, n) * Complex::new(0.0, omega) - to_complex(a);
    let x = s.lu().solve(&to_complex(b)).expect("resolvent singular");
    to_complex(c) * x + to_complex(d)
}

pub fn sigma_max(m: &CM) -> f64 {
    m.clone().svd(false, false).singular_values.max()
}

/// `σ̄(Ξ₁(iω) − Ξ₂(iω))` by direct subtraction.
pub fn direct_error(s1: [&M; 4], s2: [&M; 4], omega: f64) -> f64 {
    let t1 = transfer(s1[0], s1[1], s1[2], s1[3], omega);
    let t2 = transfer(s2[0], s2[1], s2[2], s2[3], omega);
    sigma_max(&(t1 - t2))
}

/// Dense-grid peak gain with golden-section refinement around the best point.
pub fn dense_grid_hinf(a: &M, b: &M, c: &M, d: &M, lo: f64, hi: f64, points: usize) -> f64 {
    let gain = |w: f64| sigma_max(&transfer(a, b, c, d, w));
    let grid: Vec<f64> = (0..points)
        .map(|k| lo * (hi / lo).powf(k as f64 / (points - 1) as f64))
        .collect();
    let (mut best, mut arg) = (gain(0.0), 0usize);
    for (k, &w) in grid.iter().enumerate() {
        let g = gain(w);
        if g > best {
            best = g;
            arg = k;
        }
    }
    let (mut x0, mut x1) = (grid[arg.saturating_sub(1)], grid[(arg + 1).min(points - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (m1, m2) = (x1 - phi * (x1 - x0), x0 + phi * (x1 - x0));
        if gain(m1) > gain(m2) {
            x1 = m2;
        } else {
            x0 = m1;
        }
    }
    best.max(gain(0.5 * (x0 + x1)))
}

/// Physical-realizability residuals computed from scratch, each normalized like the library.
pub fn pr_residuals(a: &M, b: &M, c: &M, d: &M) -> [f64; 3] {
    let (n, m, ny) = (a.nrows() / 2, b.ncols() / 2, c.nrows() / 2);
    let (jn, jm, jy) = (j_oracle(n), j_oracle(m), j_oracle(ny));
    [
        (a * &jn + &jn * a.transpose() + b * &jm * b.transpose()).norm()
            / (2.0 * a.norm() + b.norm_squared()).max(1.0),
        (&jn * c.transpose() + b * &jm * d.transpose()).norm() / (c.norm() + b.norm() * d.norm()).max(1.0),
        (d * &jm * d.transpose() - jy).norm() / d.norm_squared().max(1.0),
    ]
}

pub fn max_real_eig(a: &M) -> f64 {
    a.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}
