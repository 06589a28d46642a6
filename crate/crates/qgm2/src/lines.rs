//! Canonical spanning vectors of complex lines under real rotations.
//!
//! Lines in `C^2` are classified up to `SO(2)` (and up to `O(2)`) through the
//! Moebius action on the extended complex plane: a line `span{v}` is encoded
//! as `phi(v) = v1/v2`, the rotation orbits become circles `|P . z| = r` for
//! `P = (1, -i; 1, i)`, and the orbit invariant `r` is converted to the
//! canonical parameter `beta` with `(1+beta)/(1-beta) = r`. Every function
//! returning a canonical `beta` also returns an explicit witness `(R, lambda)`
//! with `lambda R v` equal to the canonical vector.

use crate::cmatrix::{c, cr, CVec, Mat2, ONE, ZERO};
use num_complex::Complex64;
use thiserror::Error;

/// Snapping and comparison tolerance for canonical parameters.
pub const TOL_CANON: f64 = 1e-9;

pub type CVec2 = CVec<2>;
pub type CVec3 = CVec<3>;
pub type Rot2 = [[f64; 2]; 2];
pub type Rot3 = [[f64; 3]; 3];

#[derive(Debug, Error, PartialEq)]
pub enum LinesError {
    #[error("zero vector has no canonical line form")]
    ZeroVector,
    #[error("Moebius transformation needs an invertible matrix (|det| = {0:e})")]
    SingularMatrix(f64),
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobiusPoint {
    Finite(Complex64),
    Infinity,
}

impl MobiusPoint {
    pub fn abs(&self) -> f64 {
        match self {
            MobiusPoint::Finite(z) => z.norm(),
            MobiusPoint::Infinity => f64::INFINITY,
        }
    }
}

/// `(a b; c d) . z = (az + b)/(cz + d)` with the usual conventions at
/// infinity.
pub fn mobius_apply(m: &Mat2, z: MobiusPoint) -> Result<MobiusPoint, LinesError> {
    let det = m.det().norm();
    if det < crate::cmatrix::TOL_RANK {
        return Err(LinesError::SingularMatrix(det));
    }
    let (a, b, cc, d) = (m.e[0][0], m.e[0][1], m.e[1][0], m.e[1][1]);
    Ok(match z {
        MobiusPoint::Infinity => {
            if cc.norm() == 0.0 {
                MobiusPoint::Infinity
            } else {
                MobiusPoint::Finite(a / cc)
            }
        }
        MobiusPoint::Finite(z) => {
            let denom = cc * z + d;
            if denom.norm() == 0.0 {
                MobiusPoint::Infinity
            } else {
                MobiusPoint::Finite((a * z + b) / denom)
            }
        }
    })
}

/// `phi(v) = v1 / v2`, the line coordinate on the complex sphere.
pub fn phi(v: &CVec2) -> Result<MobiusPoint, LinesError> {
    if v.norm() == 0.0 {
        return Err(LinesError::ZeroVector);
    }
    if v.v[1].norm() == 0.0 {
        Ok(MobiusPoint::Infinity)
    } else {
        Ok(MobiusPoint::Finite(v.v[0] / v.v[1]))
    }
}

/// Which rotation group classifies the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineGroup {
    /// `beta` ranges over `[-1, 1]`.
    So2,
    /// `beta` ranges over `[0, 1]`; the reflection `diag(-1, 1)` folds
    /// `beta` to `|beta|`.
    O2,
}

/// Canonical form of a line in `C^2`: `scalar * rotation * v = (1, i beta)`.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalLineC2 {
    pub beta: f64,
    pub rotation: Rot2,
    pub scalar: Complex64,
}

/// Canonical form of a line in `C^3`: `scalar * rotation * v = (1, i beta, 0)`
/// with `beta` in `[0, 1]`.
#[derive(Debug, Clone)]
pub struct CanonicalLineC3 {
    pub beta: f64,
    pub rotation: Rot3,
    pub scalar: Complex64,
}

fn snap(x: f64, targets: &[f64]) -> f64 {
    for &t in targets {
        if (x - t).abs() < TOL_CANON {
            return t;
        }
    }
    x
}

/// Rotation by `t` whose conjugation by `P = (1,-i;1,i)` is
/// `diag(e^{it}, e^{-it})`.
fn rot2_for(t: f64) -> Rot2 {
    let (s, co) = t.sin_cos();
    [[co, s], [-s, co]]
}

pub(crate) fn apply_rot2(r: &Rot2, v: &CVec2) -> CVec2 {
    CVec2::from([
        v.v[0] * cr(r[0][0]) + v.v[1] * cr(r[0][1]),
        v.v[0] * cr(r[1][0]) + v.v[1] * cr(r[1][1]),
    ])
}

pub(crate) fn rot2_mul(a: &Rot2, b: &Rot2) -> Rot2 {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

pub fn det2(r: &Rot2) -> f64 {
    r[0][0] * r[1][1] - r[0][1] * r[1][0]
}

/// Unique `beta` with `lambda R v = (1, i beta)` for some rotation in the
/// chosen group, together with the witness pair `(R, lambda)`.
pub fn canonical_beta_c2(v: &CVec2, group: LineGroup) -> Result<CanonicalLineC2, LinesError> {
    let scale = v.norm();
    if scale == 0.0 {
        return Err(LinesError::ZeroVector);
    }

    // coordinates after P = (1, -i; 1, i); rotations become diagonal there
    let u1 = v.v[0] - c(0.0, 1.0) * v.v[1];
    let u2 = v.v[0] + c(0.0, 1.0) * v.v[1];

    let (flipped, u1, u2) = match group {
        LineGroup::So2 => (false, u1, u2),
        LineGroup::O2 => {
            if u1.norm() < u2.norm() {
                // P diag(-1,1) P^{-1} = (0,-1;-1,0): swap and negate
                (true, -u2, -u1)
            } else {
                (false, u1, u2)
            }
        }
    };

    let (beta, t, lambda) = if u2.norm() <= TOL_CANON * scale {
        // rho = infinity
        (1.0, 0.0, cr(2.0) / u1)
    } else if u1.norm() <= TOL_CANON * scale {
        // rho = 0
        (-1.0, 0.0, cr(2.0) / u2)
    } else {
        let rho = u1.norm() / u2.norm();
        let beta = snap((rho - 1.0) / (rho + 1.0), &[-1.0, 0.0, 1.0]);
        if beta >= 1.0 {
            (1.0, 0.0, cr(2.0) / u1)
        } else if beta <= -1.0 {
            (-1.0, 0.0, cr(2.0) / u2)
        } else {
            // e^{2it} = (1+beta) u2 / ((1-beta) u1) aligns both components
            let ratio = (cr(1.0 + beta) * u2) / (cr(1.0 - beta) * u1);
            let t = ratio.arg() / 2.0;
            let lambda = cr(1.0 + beta) / (Complex64::from_polar(1.0, t) * u1);
            (beta, t, lambda)
        }
    };

    let mut rotation = rot2_for(t);
    if flipped {
        rotation = rot2_mul(&rotation, &[[-1.0, 0.0], [0.0, 1.0]]);
    }
    Ok(CanonicalLineC2 {
        beta,
        rotation,
        scalar: lambda,
    })
}

pub(crate) fn apply_rot3(r: &Rot3, v: &CVec3) -> CVec3 {
    let mut out = CVec3::zero();
    for i in 0..3 {
        let mut acc = ZERO;
        for j in 0..3 {
            acc += cr(r[i][j]) * v.v[j];
        }
        out.v[i] = acc;
    }
    out
}

pub fn rot3_mul(a: &Rot3, b: &Rot3) -> Rot3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

/// Rotation sending the unit vector `a` to `e_1` (Rodrigues construction).
fn align_to_e1(a: [f64; 3]) -> Rot3 {
    let dot = a[0];
    if dot > 1.0 - 1e-14 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    if dot < -1.0 + 1e-14 {
        // half turn about e_2
        return [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    // axis = a x e_1 = (0, a3, -a2)
    let axis = [0.0, a[2], -a[1]];
    let norm = (axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = [0.0, axis[1] / norm, axis[2] / norm];
    let cos_t = dot;
    let sin_t = norm;
    let kx: Rot3 = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    let kx2 = rot3_mul(&kx, &kx);
    let mut r = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = if i == j { 1.0 } else { 0.0 };
            r[i][j] += sin_t * kx[i][j] + (1.0 - cos_t) * kx2[i][j];
        }
    }
    r
}

/// Unique `beta` in `[0,1]` with `lambda R v = (1, i beta, 0)` for some
/// `R` in `SO(3)`, with the composed witness.
///
/// The construction aligns the real part of `v` with `e_1` (identity when the
/// real part vanishes), rotates the remaining imaginary components onto the
/// second axis, and reduces the leading two components as a line in `C^2`
/// under `O(2)`, absorbing the reflection sign into the third axis.
pub fn canonical_beta_c3(v: &CVec3) -> Result<CanonicalLineC3, LinesError> {
    let scale = v.norm();
    if scale == 0.0 {
        return Err(LinesError::ZeroVector);
    }
    let x = [v.v[0].re, v.v[1].re, v.v[2].re];
    let xn = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let r1 = if xn > TOL_CANON * scale {
        align_to_e1([x[0] / xn, x[1] / xn, x[2] / xn])
    } else {
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    };
    let w = apply_rot3(&r1, v);

    // rotate the imaginary parts of the last two components onto axis 2
    let y2 = w.v[1].im;
    let y3 = w.v[2].im;
    let m = (y2 * y2 + y3 * y3).sqrt();
    let r2: Rot2 = if m > TOL_CANON * scale {
        [[y2 / m, y3 / m], [-y3 / m, y2 / m]]
    } else {
        [[1.0, 0.0], [0.0, 1.0]]
    };
    let r2_embedded: Rot3 = [
        [1.0, 0.0, 0.0],
        [0.0, r2[0][0], r2[0][1]],
        [0.0, r2[1][0], r2[1][1]],
    ];
    let w2 = apply_rot3(&r2_embedded, &w);

    // now w2 = (a + ib, ic, ~0); classify the leading pair under O(2)
    let lead = CVec2::from([w2.v[0], w2.v[1]]);
    let c2 = canonical_beta_c2(&lead, LineGroup::O2)?;
    let kappa = det2(&c2.rotation);
    let r3_embedded: Rot3 = [
        [c2.rotation[0][0], c2.rotation[0][1], 0.0],
        [c2.rotation[1][0], c2.rotation[1][1], 0.0],
        [0.0, 0.0, kappa],
    ];
    let rotation = rot3_mul(&r3_embedded, &rot3_mul(&r2_embedded, &r1));
    Ok(CanonicalLineC3 {
        beta: c2.beta,
        rotation,
        scalar: c2.scalar,
    })
}

/// Whether `(lambda, r)` fixes the canonical vector `(1, i beta, 0)`: the
/// stabilizer is a circle family for `beta = 1`, the two signed dilations
/// for `beta` strictly between 0 and 1, and a block `lambda (+) Q` with
/// `det Q = lambda` for `beta = 0`.
pub fn stabilizer_check_c3(beta: f64, lambda: Complex64, r: &Rot3) -> bool {
    let tol = 1e-7;
    if beta > 1.0 - TOL_CANON {
        let (x, y) = (lambda.re, lambda.im);
        if (lambda.norm() - 1.0).abs() > tol {
            return false;
        }
        let expected = [[x, -y, 0.0], [y, x, 0.0], [0.0, 0.0, 1.0]];
        return rot3_close(r, &expected, tol);
    }
    if beta > TOL_CANON {
        let s = if (lambda - ONE).norm() < tol {
            1.0
        } else if (lambda + ONE).norm() < tol {
            -1.0
        } else {
            return false;
        };
        let expected = [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, 1.0]];
        return rot3_close(r, &expected, tol);
    }
    // beta = 0
    let s = if (lambda - ONE).norm() < tol {
        1.0
    } else if (lambda + ONE).norm() < tol {
        -1.0
    } else {
        return false;
    };
    if (r[0][0] - s).abs() > tol {
        return false;
    }
    if r[0][1].abs() > tol || r[0][2].abs() > tol || r[1][0].abs() > tol || r[2][0].abs() > tol {
        return false;
    }
    let q = [[r[1][1], r[1][2]], [r[2][1], r[2][2]]];
    let ortho = (q[0][0] * q[0][0] + q[1][0] * q[1][0] - 1.0)
        .abs()
        .max((q[0][1] * q[0][1] + q[1][1] * q[1][1] - 1.0).abs())
        .max((q[0][0] * q[0][1] + q[1][0] * q[1][1]).abs());
    ortho < tol && (det2(&q) - s).abs() < tol
}

/// Whether `(lambda, r)` fixes `(1, i beta)` in `C^2` under `SO(2)`.
pub fn stabilizer_check_c2(beta: f64, lambda: Complex64, r: &Rot2) -> bool {
    let tol = 1e-7;
    if beta.abs() > 1.0 - TOL_CANON {
        let sign = beta.signum();
        let (x, y) = (lambda.re, lambda.im);
        if (lambda.norm() - 1.0).abs() > tol {
            return false;
        }
        let expected = [[x, -sign * y], [sign * y, x]];
        return rot2_close(r, &expected, tol);
    }
    let s = if (lambda - ONE).norm() < tol {
        1.0
    } else if (lambda + ONE).norm() < tol {
        -1.0
    } else {
        return false;
    };
    rot2_close(r, &[[s, 0.0], [0.0, s]], tol)
}

fn rot2_close(a: &Rot2, b: &Rot2, tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).abs() < tol))
}

fn rot3_close(a: &Rot3, b: &Rot3, tol: f64) -> bool {
    (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).abs() < tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::Subspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn rand_rot3(rng: &mut ChaCha8Rng) -> Rot3 {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (q.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let (w, x, y, z) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - z * w),
                2.0 * (x * z + y * w),
            ],
            [
                2.0 * (x * y + z * w),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - x * w),
            ],
            [
                2.0 * (x * z - y * w),
                2.0 * (y * z + x * w),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    fn line_distance2(a: &CVec2, b: &CVec2) -> f64 {
        Subspace::from_spanners(&[*a]).distance(&Subspace::from_spanners(&[*b]))
    }

    fn line_distance3(a: &CVec3, b: &CVec3) -> f64 {
        Subspace::from_spanners(&[*a]).distance(&Subspace::from_spanners(&[*b]))
    }

    fn canonical2(beta: f64) -> CVec2 {
        CVec2::from([ONE, c(0.0, beta)])
    }

    #[test]
    fn mobius_examples() {
        let id = Mat2::identity();
        let z = MobiusPoint::Finite(c(0.3, -0.8));
        assert_eq!(mobius_apply(&id, z).unwrap(), z);
        assert_eq!(
            mobius_apply(&id, MobiusPoint::Infinity).unwrap(),
            MobiusPoint::Infinity
        );

        // P . (-i / beta) = (1 + beta)/(1 - beta)
        let p = Mat2::from_rows([[ONE, c(0.0, -1.0)], [ONE, c(0.0, 1.0)]]);
        let beta = 0.6;
        let got = mobius_apply(&p, MobiusPoint::Finite(c(0.0, -1.0 / beta))).unwrap();
        match got {
            MobiusPoint::Finite(w) => {
                assert!((w - cr((1.0 + beta) / (1.0 - beta))).norm() < 1e-12)
            }
            _ => panic!("expected finite value"),
        }

        let singular = Mat2::from_rows([[ONE, ONE], [ONE, ONE]]);
        assert!(matches!(
            mobius_apply(&singular, z),
            Err(LinesError::SingularMatrix(_))
        ));
    }

    #[test]
    fn phi_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = Mat2::from_rows([
                [rand_c(&mut rng), rand_c(&mut rng)],
                [rand_c(&mut rng), rand_c(&mut rng)],
            ]);
            if x.det().norm() < 0.05 {
                continue;
            }
            let u = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            if u.norm() < 0.05 {
                continue;
            }
            let xu = CVec2::from([
                x.e[0][0] * u.v[0] + x.e[0][1] * u.v[1],
                x.e[1][0] * u.v[0] + x.e[1][1] * u.v[1],
            ]);
            let lhs = phi(&xu).unwrap();
            let rhs = mobius_apply(&x, phi(&u).unwrap()).unwrap();
            match (lhs, rhs) {
                (MobiusPoint::Finite(a), MobiusPoint::Finite(b)) => {
                    assert!((a - b).norm() < 1e-6 * (1.0 + a.norm()))
                }
                (MobiusPoint::Infinity, MobiusPoint::Infinity) => {}
                (MobiusPoint::Finite(a), MobiusPoint::Infinity) => {
                    assert!(a.norm() > 1e6)
                }
                (MobiusPoint::Infinity, MobiusPoint::Finite(b)) => {
                    assert!(b.norm() > 1e6)
                }
            }
        }
    }

    #[test]
    fn canonical_c2_examples() {
        let v = CVec2::from([ONE, ZERO]);
        let out = canonical_beta_c2(&v, LineGroup::So2).unwrap();
        assert!(out.beta.abs() < TOL_CANON);

        let v = CVec2::from([ONE, c(0.0, 1.0)]);
        let out = canonical_beta_c2(&v, LineGroup::So2).unwrap();
        assert!((out.beta - 1.0).abs() < TOL_CANON);

        // (1+i, 1-i): beta = -1 under SO(2), folds to +1 under O(2)
        let v = CVec2::from([c(1.0, 1.0), c(1.0, -1.0)]);
        let so2 = canonical_beta_c2(&v, LineGroup::So2).unwrap();
        assert!((so2.beta + 1.0).abs() < TOL_CANON);
        let o2 = canonical_beta_c2(&v, LineGroup::O2).unwrap();
        assert!((o2.beta - 1.0).abs() < TOL_CANON);
        assert!((det2(&o2.rotation) + 1.0).abs() < 1e-12);

        assert!(matches!(
            canonical_beta_c2(&CVec2::zero(), LineGroup::So2),
            Err(LinesError::ZeroVector)
        ));
    }

    #[test]
    fn witnesses_map_exactly_to_canonical_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let v = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 {
                continue;
            }
            for group in [LineGroup::So2, LineGroup::O2] {
                let out = canonical_beta_c2(&v, group).unwrap();
                let moved = apply_rot2(&out.rotation, &v).scale(out.scalar);
                assert!(
                    moved.sub(&canonical2(out.beta)).norm() < 1e-7,
                    "witness defect for {v:?}"
                );
                let d = det2(&out.rotation);
                match group {
                    LineGroup::So2 => assert!((d - 1.0).abs() < 1e-12),
                    LineGroup::O2 => assert!((d.abs() - 1.0).abs() < 1e-12),
                }
            }
        }
    }

    #[test]
    fn orbit_invariance_c2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let v = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 {
                continue;
            }
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut r = rot2_for(theta);
            let beta0 = canonical_beta_c2(&v, LineGroup::So2).unwrap().beta;
            let rotated = apply_rot2(&r, &v).scale(rand_c(&mut rng) + cr(2.0));
            let beta1 = canonical_beta_c2(&rotated, LineGroup::So2).unwrap().beta;
            assert!((beta0 - beta1).abs() < 1e-7);

            // O(2): also allow a reflection
            if rng.gen_bool(0.5) {
                r = rot2_mul(&r, &[[-1.0, 0.0], [0.0, 1.0]]);
            }
            let beta0 = canonical_beta_c2(&v, LineGroup::O2).unwrap().beta;
            let reflected = apply_rot2(&r, &v).scale(rand_c(&mut rng) + cr(2.0));
            let beta1 = canonical_beta_c2(&reflected, LineGroup::O2).unwrap().beta;
            assert!((beta0 - beta1).abs() < 1e-7);
        }
    }

    #[test]
    fn fold_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let v = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 {
                continue;
            }
            let so2 = canonical_beta_c2(&v, LineGroup::So2).unwrap().beta;
            let o2 = canonical_beta_c2(&v, LineGroup::O2).unwrap().beta;
            assert!((o2 - so2.abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn uniqueness_against_angle_grid() {
        // vectors with different beta are never connected by a rotation
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let v = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            let w = CVec2::from([rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 || w.norm() < 0.05 {
                continue;
            }
            let bv = canonical_beta_c2(&v, LineGroup::So2).unwrap().beta;
            let bw = canonical_beta_c2(&w, LineGroup::So2).unwrap().beta;
            if (bv - bw).abs() < 10.0 * TOL_CANON {
                continue;
            }
            let mut min_d = f64::INFINITY;
            for k in 0..10_000 {
                let theta = std::f64::consts::TAU * (k as f64) / 10_000.0;
                let moved = apply_rot2(&rot2_for(theta), &v);
                min_d = min_d.min(line_distance2(&moved, &w));
            }
            assert!(
                min_d > 0.05 * (bv - bw).abs(),
                "grid found a near-match despite beta {bv} vs {bw}"
            );
        }
    }

    #[test]
    fn canonical_c3_examples() {
        let out = canonical_beta_c3(&CVec3::from([ONE, ZERO, ZERO])).unwrap();
        assert!(out.beta.abs() < TOL_CANON);

        let out = canonical_beta_c3(&CVec3::from([ONE, c(0.0, 1.0), ZERO])).unwrap();
        assert!((out.beta - 1.0).abs() < TOL_CANON);

        let out = canonical_beta_c3(&CVec3::from([ZERO, c(1.0, 1.0), c(1.0, -1.0)])).unwrap();
        assert!((out.beta - 1.0).abs() < TOL_CANON);

        assert!(matches!(
            canonical_beta_c3(&CVec3::zero()),
            Err(LinesError::ZeroVector)
        ));
    }

    #[test]
    fn c3_witness_validity_and_orbit_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..500 {
            let v = CVec3::from([rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 {
                continue;
            }
            let out = canonical_beta_c3(&v).unwrap();
            assert!(crate::pauli::so3_defect(&out.rotation) < 1e-9);
            let moved = apply_rot3(&out.rotation, &v).scale(out.scalar);
            let target = CVec3::from([ONE, c(0.0, out.beta), ZERO]);
            assert!(moved.sub(&target).norm() < 1e-7, "{v:?}");

            // invariance under a random rotation and rescaling
            let r = rand_rot3(&mut rng);
            let rotated = apply_rot3(&r, &v).scale(rand_c(&mut rng) + cr(2.0));
            let out2 = canonical_beta_c3(&rotated).unwrap();
            assert!((out.beta - out2.beta).abs() < 1e-7);
        }
    }

    #[test]
    fn c3_uniqueness_against_random_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let v = CVec3::from([rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng)]);
            let w = CVec3::from([rand_c(&mut rng), rand_c(&mut rng), rand_c(&mut rng)]);
            if v.norm() < 0.05 || w.norm() < 0.05 {
                continue;
            }
            let bv = canonical_beta_c3(&v).unwrap().beta;
            let bw = canonical_beta_c3(&w).unwrap().beta;
            if (bv - bw).abs() < 10.0 * TOL_CANON {
                continue;
            }
            let mut min_d = f64::INFINITY;
            for _ in 0..2000 {
                let r = rand_rot3(&mut rng);
                min_d = min_d.min(line_distance3(&apply_rot3(&r, &v), &w));
            }
            assert!(min_d > 0.01 * (bv - bw).abs());
        }
    }

    #[test]
    fn stabilizer_c3_cases() {
        // beta in (0,1): the two signed dilations stabilize
        assert!(stabilizer_check_c3(
            0.5,
            cr(-1.0),
            &[[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]
        ));
        // beta = 1: circle family
        for theta in [0.0, 0.7, 2.1, 4.4] {
            let lambda = Complex64::from_polar(1.0, theta);
            let (x, y) = (lambda.re, lambda.im);
            assert!(stabilizer_check_c3(
                1.0,
                lambda,
                &[[x, -y, 0.0], [y, x, 0.0], [0.0, 0.0, 1.0]]
            ));
        }
        // a rotation that moves the vector is rejected
        let t: f64 = 0.1;
        assert!(!stabilizer_check_c3(
            0.5,
            ONE,
            &[
                [t.cos(), -t.sin(), 0.0],
                [t.sin(), t.cos(), 0.0],
                [0.0, 0.0, 1.0]
            ]
        ));
        // beta = 0: block lambda (+) Q with det Q = lambda
        assert!(stabilizer_check_c3(
            0.0,
            cr(-1.0),
            &[[-1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]
        ));
    }

    #[test]
    fn stabilizer_c3_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let beta = match rng.gen_range(0..3) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.05..0.95),
            };
            // half the samples are planted stabilizer elements
            let (lambda, r): (Complex64, Rot3) = if rng.gen_bool(0.5) {
                if beta > 1.0 - 1e-12 {
                    let l = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                    (l, [[l.re, -l.im, 0.0], [l.im, l.re, 0.0], [0.0, 0.0, 1.0]])
                } else if beta > 0.0 {
                    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    (cr(s), [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, 1.0]])
                } else {
                    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let t = rng.gen_range(0.0..std::f64::consts::TAU);
                    // Q in O(2) with det Q = s
                    let q: Rot2 = if s > 0.0 {
                        rot2_for(t)
                    } else {
                        rot2_mul(&rot2_for(t), &[[1.0, 0.0], [0.0, -1.0]])
                    };
                    (
                        cr(s),
                        [
                            [s, 0.0, 0.0],
                            [0.0, q[0][0], q[0][1]],
                            [0.0, q[1][0], q[1][1]],
                        ],
                    )
                }
            } else {
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                let axis_turn = rot2_for(t);
                (
                    Complex64::from_polar(
                        rng.gen_range(0.5..1.5),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    ),
                    [
                        [axis_turn[0][0], 0.0, axis_turn[0][1]],
                        [0.0, 1.0, 0.0],
                        [axis_turn[1][0], 0.0, axis_turn[1][1]],
                    ],
                )
            };
            let vc = CVec3::from([ONE, c(0.0, beta), ZERO]);
            let direct = apply_rot3(&r, &vc).scale(lambda).sub(&vc).norm() < 1e-9;
            assert_eq!(stabilizer_check_c3(beta, lambda, &r), direct);
        }
    }

    #[test]
    fn stabilizer_c2_cases() {
        assert!(stabilizer_check_c2(0.0, cr(-1.0), &[[-1.0, 0.0], [0.0, -1.0]]));
        for theta in [0.3, 1.2, 5.0] {
            let lambda = Complex64::from_polar(1.0, theta);
            let (x, y) = (lambda.re, lambda.im);
            assert!(stabilizer_check_c2(1.0, lambda, &[[x, -y], [y, x]]));
            assert!(stabilizer_check_c2(-1.0, lambda, &[[x, y], [-y, x]]));
        }
        // |beta| < 1 forces lambda = +-1
        assert!(!stabilizer_check_c2(0.3, c(0.0, 1.0), &[[0.0, -1.0], [1.0, 0.0]]));
    }

    #[test]
    fn stabilizer_c2_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let beta: f64 = match rng.gen_range(0..3) {
                0 => -1.0,
                1 => 1.0,
                _ => rng.gen_range(-0.95..0.95),
            };
            let (lambda, r): (Complex64, Rot2) = if rng.gen_bool(0.5) {
                if beta.abs() > 1.0 - 1e-12 {
                    let l = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                    (l, [[l.re, -beta * l.im], [beta * l.im, l.re]])
                } else {
                    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    (cr(s), [[s, 0.0], [0.0, s]])
                }
            } else {
                (
                    Complex64::from_polar(
                        rng.gen_range(0.5..1.5),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    ),
                    rot2_for(rng.gen_range(0.0..std::f64::consts::TAU)),
                )
            };
            let vc = canonical2(beta);
            let direct = apply_rot2(&r, &vc).scale(lambda).sub(&vc).norm() < 1e-9;
            assert_eq!(stabilizer_check_c2(beta, lambda, &r), direct, "beta={beta}");
        }
    }
}
