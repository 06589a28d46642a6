//! Small dense complex linear algebra for dimensions 2, 3 and 4.
//!
//! Everything in this crate lives in `M_2` or in `C^2`/`C^3`/`C^4`, so the
//! matrix and vector types carry their dimension in the type. All values are
//! immutable after construction and all operations are pure.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use thiserror::Error;

/// Orthonormality / subspace-equality tolerance.
pub const TOL_ORTHO: f64 = 1e-9;
/// Rank decision threshold in Gram-Schmidt style eliminations.
pub const TOL_RANK: f64 = 1e-8;
/// Residual target for the quartic root finder.
pub const TOL_EIG: f64 = 1e-9;
/// Iteration cap for the quartic root finder.
pub const MAX_ITER: usize = 500;

#[derive(Debug, Error, PartialEq)]
pub enum CmatrixError {
    #[error("inner product form is degenerate: <x,x> = {0} for a nonzero probe")]
    DegenerateForm(f64),
    #[error("root finder did not reach residual {target:e} after {iters} iterations")]
    NoConvergence { target: f64, iters: usize },
}

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense square complex matrix with compile-time dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<const N: usize> {
    pub e: [[Complex64; N]; N],
}

pub type Mat2 = CMat<2>;
pub type Mat4 = CMat<4>;

/// Dense complex vector with compile-time dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec<const N: usize> {
    pub v: [Complex64; N],
}

pub type CVec2 = CVec<2>;
pub type CVec3 = CVec<3>;
pub type CVec4 = CVec<4>;

impl<const N: usize> CMat<N> {
    pub fn zero() -> Self {
        CMat { e: [[ZERO; N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.e[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: [[Complex64; N]; N]) -> Self {
        CMat { e: rows }
    }

    pub fn diag(d: [Complex64; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.e[i][i] = d[i];
        }
        m
    }

    /// Real matrix promoted entrywise to complex.
    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = cr(rows[i][j]);
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] *= s;
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = self.e[j][i];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = m.e[i][j].conj();
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.e[i][i]).sum()
    }

    pub fn mul_vec(&self, x: &CVec<N>) -> CVec<N> {
        let mut out = CVec::zero();
        for i in 0..N {
            let mut acc = ZERO;
            for j in 0..N {
                acc += self.e[i][j] * x.v[j];
            }
            out.v[i] = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                s += self.e[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Largest entrywise absolute difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                d = d.max((self.e[i][j] - other.e[i][j]).norm());
            }
        }
        d
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (*self * *other - *other * *self).frobenius_norm()
    }

    /// Solves `A x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` for (numerically) singular systems.
    pub fn solve(&self, b: &CVec<N>) -> Option<CVec<N>> {
        let mut a = self.e;
        let mut rhs = b.v;
        for col in 0..N {
            let mut piv = col;
            for row in col + 1..N {
                if a[row][col].norm() > a[piv][col].norm() {
                    piv = row;
                }
            }
            if a[piv][col].norm() < 1e-300 {
                return None;
            }
            a.swap(col, piv);
            rhs.swap(col, piv);
            let d = a[col][col];
            for row in col + 1..N {
                let f = a[row][col] / d;
                for k in col..N {
                    let sub = f * a[col][k];
                    a[row][k] -= sub;
                }
                let sub = f * rhs[col];
                rhs[row] -= sub;
            }
        }
        let mut x = [ZERO; N];
        for row in (0..N).rev() {
            let mut acc = rhs[row];
            for k in row + 1..N {
                acc -= a[row][k] * x[k];
            }
            x[row] = acc / a[row][row];
        }
        Some(CVec { v: x })
    }
}

impl Mat2 {
    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.e[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.e[i][j] += a * rhs.e[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.e[idx.0][idx.1]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.e[idx.0][idx.1]
    }
}

impl<const N: usize> CVec<N> {
    pub fn zero() -> Self {
        CVec { v: [ZERO; N] }
    }

    pub fn from(v: [Complex64; N]) -> Self {
        CVec { v }
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.v[i] = ONE;
        v
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.v[i] *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.v[i] += other.v[i];
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.v[i] -= other.v[i];
        }
        out
    }

    /// Standard sesquilinear inner product, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        let mut acc = ZERO;
        for i in 0..N {
            acc += self.v[i].conj() * other.v[i];
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).re.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..N {
            d = d.max((self.v[i] - other.v[i]).norm());
        }
        d
    }

    /// Rank-one matrix `self * other^dagger`.
    pub fn outer(&self, other: &Self) -> CMat<N> {
        let mut m = CMat::zero();
        for i in 0..N {
            for j in 0..N {
                m.e[i][j] = self.v[i] * other.v[j].conj();
            }
        }
        m
    }
}

/// Kronecker product of two 2x2 matrices, `[a (x) b]_{2(i-1)+j, 2(k-1)+l} = a_ik b_jl`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.e[2 * i + j][2 * k + l] = a.e[i][k] * b.e[j][l];
                }
            }
        }
    }
    m
}

/// Row-major vectorization `e_ij -> f_{2(i-1)+j}`.
pub fn vec2(x: &Mat2) -> CVec4 {
    CVec::from([x.e[0][0], x.e[0][1], x.e[1][0], x.e[1][1]])
}

pub fn unvec2(v: &CVec4) -> Mat2 {
    Mat2::from_rows([[v.v[0], v.v[1]], [v.v[2], v.v[3]]])
}

/// Orthonormalizes `vectors` with respect to the positive definite sesquilinear
/// form `inner` (conjugate-linear in the first slot). Dependent inputs are
/// dropped; the processing order is the input order.
pub fn gram_schmidt<F>(vectors: &[Mat2], inner: F) -> Result<Vec<Mat2>, CmatrixError>
where
    F: Fn(&Mat2, &Mat2) -> Complex64,
{
    let mut out: Vec<Mat2> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = *v;
        // two-pass re-orthogonalization
        for _ in 0..2 {
            for b in &out {
                let coeff = inner(b, &w);
                w = w - b.scale(coeff);
            }
        }
        let sq = inner(&w, &w);
        if sq.im.abs() > 1e-7 * (1.0 + sq.re.abs()) {
            return Err(CmatrixError::DegenerateForm(sq.re));
        }
        let n = sq.re;
        if w.frobenius_norm() > 1e3 * TOL_RANK && n <= 0.0 {
            return Err(CmatrixError::DegenerateForm(n));
        }
        if n.max(0.0).sqrt() < TOL_RANK {
            continue;
        }
        out.push(w.scale(cr(1.0 / n.sqrt())));
    }
    Ok(out)
}

/// The two roots of the characteristic polynomial of a 2x2 matrix,
/// lexicographically ordered by (re, im).
pub fn eigenvalues2(a: &Mat2) -> (Complex64, Complex64) {
    let t = a.trace();
    let d = a.det();
    let disc = (t * t - cr(4.0) * d).sqrt();
    let l1 = (t + disc) * cr(0.5);
    let l2 = (t - disc) * cr(0.5);
    let mut roots = [l1, l2];
    sort_lex(&mut roots);
    (roots[0], roots[1])
}

fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap()
        .then(a.im.partial_cmp(&b.im).unwrap())
}

pub fn sort_lex(roots: &mut [Complex64]) {
    roots.sort_by(lex_cmp);
}

/// Characteristic polynomial coefficients of a 4x4 matrix via Newton's
/// identities on power sums: returns `[c0, c1, c2, c3]` with
/// `p(z) = z^4 + c3 z^3 + c2 z^2 + c1 z + c0`.
fn char_poly4(a: &Mat4) -> [Complex64; 4] {
    let a2 = *a * *a;
    let a3 = a2 * *a;
    let a4 = a3 * *a;
    let p1 = a.trace();
    let p2 = a2.trace();
    let p3 = a3.trace();
    let p4 = a4.trace();
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / cr(2.0);
    let e3 = (e2 * p1 - e1 * p2 + p3) / cr(3.0);
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / cr(4.0);
    [e4, -e3, e2, -e1]
}

fn poly_eval(coeffs: &[Complex64; 4], z: Complex64) -> Complex64 {
    ((z + coeffs[3]) * z + coeffs[2]) * z * z + coeffs[1] * z + coeffs[0]
}

/// All four eigenvalues of a 4x4 complex matrix, lexicographically sorted.
///
/// Roots of the characteristic polynomial are located by Durand-Kerner
/// iteration and then polished against the matrix itself by shifted inverse
/// iteration, which recovers full precision for semisimple repeated
/// eigenvalues where the polynomial alone bottoms out near sqrt(eps).
pub fn eigenvalues4(a: &Mat4) -> Result<[Complex64; 4], CmatrixError> {
    let coeffs = char_poly4(a);
    let scale = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);

    // initial guesses on a circle, rotated by a fixed irrational angle to
    // break symmetric stalls
    let theta0 = 2.0 * std::f64::consts::PI * 0.618_033_988_749_894_9;
    let mut z: [Complex64; 4] = std::array::from_fn(|k| {
        Complex64::from_polar(
            scale,
            theta0 + 2.0 * std::f64::consts::PI * (k as f64) / 4.0,
        )
    });

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..4 {
            let mut denom = ONE;
            for j in 0..4 {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() < 1e-300 {
                // perturb coincident iterates
                z[i] += c(1e-8 * scale, 1e-8 * scale);
                continue;
            }
            let step = poly_eval(&coeffs, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        let max_resid = z
            .iter()
            .map(|&zi| poly_eval(&coeffs, zi).norm())
            .fold(0.0, f64::max);
        if max_resid < TOL_EIG * scale || max_step < 1e-15 * scale.max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        let max_resid = z
            .iter()
            .map(|&zi| poly_eval(&coeffs, zi).norm())
            .fold(0.0, f64::max);
        if max_resid > TOL_EIG * scale {
            return Err(CmatrixError::NoConvergence {
                target: TOL_EIG,
                iters: MAX_ITER,
            });
        }
    }

    let anorm = a.frobenius_norm().max(1.0);
    for zi in z.iter_mut() {
        *zi = polish_eigenvalue(a, *zi, anorm);
    }
    sort_lex(&mut z);
    Ok(z)
}

/// A few rounds of shifted inverse iteration with Rayleigh-quotient updates.
/// The polished value is accepted only when the eigenpair residual is small,
/// so defective (Jordan) eigenvalues keep their polynomial estimate.
fn polish_eigenvalue(a: &Mat4, lambda0: Complex64, anorm: f64) -> Complex64 {
    let mut mu = lambda0;
    let mut v = CVec::<4>::from([c(0.324, 0.112), c(-0.77, 0.41), c(0.21, -0.95), c(0.55, 0.18)]);
    v = v.scale(cr(1.0 / v.norm()));
    let mut best = lambda0;
    let mut best_resid = f64::INFINITY;
    for _ in 0..6 {
        let shift = mu + c(1e-13 * anorm, 1e-13 * anorm);
        let mut shifted = *a;
        for i in 0..4 {
            shifted.e[i][i] -= shift;
        }
        let Some(w) = shifted.solve(&v) else { break };
        let n = w.norm();
        if !n.is_finite() || n < 1e-300 {
            break;
        }
        v = w.scale(cr(1.0 / n));
        let av = a.mul_vec(&v);
        let rayleigh = v.dot(&av);
        let resid = av.sub(&v.scale(rayleigh)).norm();
        if resid < best_resid {
            best_resid = resid;
            best = rayleigh;
        }
        mu = rayleigh;
    }
    if best_resid < 1e-10 * anorm {
        best
    } else {
        lambda0
    }
}

/// Smallest possible value of the largest pairwise distance over all
/// matchings of two equal-length spectra. Exact over all permutations, which
/// is cheap for the degree-4 spectra used here; sorted comparison alone can
/// swap members of a conjugate pair whose real parts tie at rounding level.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let worst = (0..n)
            .map(|i| (a[i] - b[p[i]]).norm())
            .fold(0.0, f64::max);
        if worst < best {
            best = worst;
        }
    });
    best
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// A linear subspace of `C^N` stored as an orthonormal basis plus its
/// orthogonal projector (standard inner product).
#[derive(Debug, Clone)]
pub struct Subspace<const N: usize> {
    basis: Vec<CVec<N>>,
    projector: CMat<N>,
}

impl<const N: usize> Subspace<N> {
    /// Orthonormalizes `spanners` under the standard inner product; vectors
    /// whose residual after projection is below `TOL_RANK` are dropped.
    pub fn from_spanners(spanners: &[CVec<N>]) -> Self {
        let mut basis: Vec<CVec<N>> = Vec::new();
        for s in spanners {
            let mut w = *s;
            for _ in 0..2 {
                for b in &basis {
                    let coeff = b.dot(&w);
                    w = w.sub(&b.scale(coeff));
                }
            }
            let n = w.norm();
            if n < TOL_RANK {
                continue;
            }
            basis.push(w.scale(cr(1.0 / n)));
        }
        let mut projector = CMat::zero();
        for b in &basis {
            projector = projector + b.outer(b);
        }
        Subspace { basis, projector }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVec<N>] {
        &self.basis
    }

    pub fn projector(&self) -> &CMat<N> {
        &self.projector
    }

    pub fn contains(&self, v: &CVec<N>, tol: f64) -> bool {
        let pv = self.projector.mul_vec(v);
        pv.sub(v).norm() <= tol * v.norm().max(1.0)
    }

    /// Frobenius norm of the projector difference; zero exactly for equal
    /// subspaces.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.projector - other.projector).frobenius_norm()
    }

    /// Image under an invertible linear map; for unitary `m` the transformed
    /// basis stays orthonormal, which `from_spanners` re-detects cheaply.
    pub fn apply(&self, m: &CMat<N>) -> Self {
        let spanners: Vec<CVec<N>> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Subspace::from_spanners(&spanners)
    }
}
