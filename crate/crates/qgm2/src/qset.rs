//! The quantum set `(M_2, psi_q)`.
//!
//! For `q` in `(0,1]` the functional `psi_q = Tr(rho_q .)` with
//! `rho_q = (1+q^2) diag(q^-2, 1)` is, up to unitary equivalence, the unique
//! faithful positive functional on `M_2` whose comultiplication satisfies
//! `m m* = Id`. `q = 1` gives the tracial functional `tau = 2 Tr`.

use crate::cmatrix::{c, cr, kron, CmatrixError, Mat2, Mat4, ONE, ZERO};
use num_complex::Complex64;
use thiserror::Error;

/// Exact-equality margin for the tracial test `q = 1`.
pub const TOL_Q: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum QsetError {
    #[error("deformation parameter q = {0} outside (0, 1]")]
    InvalidQ(f64),
}

/// Which inner product on `M_2` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerProductKind {
    /// `<x,y> = psi(x* y)`
    GnsPsi,
    /// `<x,y> = Tr(x* rho^{1/2} y rho^{1/2})`
    KmsPsi,
    /// `<x,y> = Tr(x* rho^{-1/2} y rho^{-1/2})`
    KmsPsiInverse,
}

/// The quantum set `(M_2, psi_q)` with its density matrix and the powers of
/// it that the edge-space calculus needs.
#[derive(Debug, Clone)]
pub struct QuantumSet {
    q: f64,
    rho: Mat2,
    rho_half: Mat2,
    rho_inv_half: Mat2,
    rho_quarter: Mat2,
    rho_inv_quarter: Mat2,
    rho_inv: Mat2,
}

impl QuantumSet {
    pub fn new(q: f64) -> Result<Self, QsetError> {
        if !(q > 0.0 && q <= 1.0) || !q.is_finite() {
            return Err(QsetError::InvalidQ(q));
        }
        Ok(QuantumSet {
            q,
            rho: Self::rho_power_of(q, 1.0),
            rho_half: Self::rho_power_of(q, 0.5),
            rho_inv_half: Self::rho_power_of(q, -0.5),
            rho_quarter: Self::rho_power_of(q, 0.25),
            rho_inv_quarter: Self::rho_power_of(q, -0.25),
            rho_inv: Self::rho_power_of(q, -1.0),
        })
    }

    pub fn tracial() -> Self {
        Self::new(1.0).unwrap()
    }

    fn rho_power_of(q: f64, t: f64) -> Mat2 {
        let s = 1.0 + q * q;
        Mat2::diag([cr(s.powf(t) * q.powf(-2.0 * t)), cr(s.powf(t))])
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_tracial(&self) -> bool {
        (self.q - 1.0).abs() < TOL_Q
    }

    pub fn rho(&self) -> &Mat2 {
        &self.rho
    }

    pub fn rho_inv(&self) -> &Mat2 {
        &self.rho_inv
    }

    pub fn rho_quarter(&self) -> &Mat2 {
        &self.rho_quarter
    }

    pub fn rho_inv_quarter(&self) -> &Mat2 {
        &self.rho_inv_quarter
    }

    pub fn rho_inv_half(&self) -> &Mat2 {
        &self.rho_inv_half
    }

    /// `psi_q(x) = Tr(rho_q x) = (1+q^2)(q^-2 x_11 + x_22)`.
    pub fn functional(&self, x: &Mat2) -> Complex64 {
        (self.rho * *x).trace()
    }

    /// The selected inner product, conjugate-linear in `x`.
    pub fn inner(&self, kind: InnerProductKind, x: &Mat2, y: &Mat2) -> Complex64 {
        match kind {
            InnerProductKind::GnsPsi => (self.rho * x.adjoint() * *y).trace(),
            InnerProductKind::KmsPsi => {
                (x.adjoint() * self.rho_half * *y * self.rho_half).trace()
            }
            InnerProductKind::KmsPsiInverse => {
                (x.adjoint() * self.rho_inv_half * *y * self.rho_inv_half).trace()
            }
        }
    }

    /// Comultiplication `m*`, the GNS-adjoint of multiplication, returned in
    /// the Kronecker carrier for `M_2 (x) M_2`. On the generators it acts as
    /// `m*(e_ij rho^-1) = sum_k e_ik rho^-1 (x) e_kj rho^-1`.
    pub fn comultiplication(&self, x: &Mat2) -> Mat4 {
        // coefficients of x in the basis { e_ij rho^-1 }: x = sum c_ij e_ij rho^-1
        // means x rho = sum c_ij e_ij.
        let coeff = *x * self.rho;
        let mut out = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                let cij = coeff.e[i][j];
                if cij == ZERO {
                    continue;
                }
                for k in 0..2 {
                    let left = unit(i, k) * self.rho_inv;
                    let right = unit(k, j) * self.rho_inv;
                    out = out + kron(&left, &right).scale(cij);
                }
            }
        }
        out
    }

    /// Multiplication `m` on the Kronecker carrier: the linear extension of
    /// `e_ij (x) e_kl -> e_ij e_kl`.
    pub fn multiplication(&self, t: &Mat4) -> Mat2 {
        multiply_tensor(t)
    }

    /// Modular map `sigma_z(x) = rho^{iz} x rho^{-iz}` via diagonal functional
    /// calculus (principal branch; `rho_q` has positive diagonal).
    pub fn modular_map(&self, z: Complex64, x: &Mat2) -> Mat2 {
        let iz = c(0.0, 1.0) * z;
        let r1 = self.rho.e[0][0].re;
        let r2 = self.rho.e[1][1].re;
        let p = Mat2::diag([(iz * r1.ln()).exp(), (iz * r2.ln()).exp()]);
        let pinv = Mat2::diag([(-iz * r1.ln()).exp(), (-iz * r2.ln()).exp()]);
        p * *x * pinv
    }

    /// The Gram matrix of the chosen inner product in the vectorized matrix
    /// unit basis `(e_11, e_12, e_21, e_22)`; diagonal because `rho_q` is.
    pub fn gram(&self, kind: InnerProductKind) -> Mat4 {
        let r1 = self.rho.e[0][0].re;
        let r2 = self.rho.e[1][1].re;
        match kind {
            InnerProductKind::GnsPsi => Mat4::diag([cr(r1), cr(r2), cr(r1), cr(r2)]),
            InnerProductKind::KmsPsi => {
                let m = (r1 * r2).sqrt();
                Mat4::diag([cr(r1), cr(m), cr(m), cr(r2)])
            }
            InnerProductKind::KmsPsiInverse => {
                let m = (r1 * r2).sqrt();
                Mat4::diag([cr(1.0 / r1), cr(1.0 / m), cr(1.0 / m), cr(1.0 / r2)])
            }
        }
    }

    /// KMS(psi^-1)-orthonormalization of `spanners`, dependent inputs dropped.
    pub fn orthonormalize(&self, spanners: &[Mat2]) -> Result<Vec<Mat2>, CmatrixError> {
        crate::cmatrix::gram_schmidt(spanners, |x, y| {
            self.inner(InnerProductKind::KmsPsiInverse, x, y)
        })
    }

    /// Residual of `m(m*(x)) = x` over the matrix unit basis.
    pub fn mm_star_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let x = unit(i, j);
                let back = self.multiplication(&self.comultiplication(&x));
                worst = worst.max(back.max_abs_diff(&x));
            }
        }
        worst
    }
}

/// Matrix unit `e_{ij}` (zero-based indices).
pub fn unit(i: usize, j: usize) -> Mat2 {
    let mut m = Mat2::zero();
    m.e[i][j] = ONE;
    m
}

/// Multiplication `m` on the Kronecker carrier, independent of the quantum
/// set: `m(a (x) b) = ab`.
pub fn multiply_tensor(t: &Mat4) -> Mat2 {
    // coefficient of e_ij (x) e_kl sits at [2i + k, 2j + l]; the product
    // e_ij e_kl = delta_jk e_il collapses the inner index.
    let mut out = Mat2::zero();
    for i in 0..2 {
        for l in 0..2 {
            let mut acc = ZERO;
            for j in 0..2 {
                acc += t.e[2 * i + j][2 * j + l];
            }
            out.e[i][l] = acc;
        }
    }
    out
}

/// Applies a linear map `f` on `M_2` to the left tensor leg of the Kronecker
/// carrier.
pub fn map_left_leg<F>(t: &Mat4, f: F) -> Mat4
where
    F: Fn(&Mat2) -> Mat2,
{
    let mut out = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let w = t.e[2 * i + k][2 * j + l];
                    if w == ZERO {
                        continue;
                    }
                    let img = f(&unit(i, j));
                    for a in 0..2 {
                        for b in 0..2 {
                            out.e[2 * a + k][2 * b + l] += w * img.e[a][b];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Applies a linear map `f` on `M_2` to the right tensor leg.
pub fn map_right_leg<F>(t: &Mat4, f: F) -> Mat4
where
    F: Fn(&Mat2) -> Mat2,
{
    let mut out = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let w = t.e[2 * i + k][2 * j + l];
                    if w == ZERO {
                        continue;
                    }
                    let img = f(&unit(k, l));
                    for a in 0..2 {
                        for b in 0..2 {
                            out.e[2 * i + a][2 * j + b] += w * img.e[a][b];
                        }
                    }
                }
            }
        }
    }
    out
}

/// GNS (x) GNS inner product of two elements of `M_2 (x) M_2` in the
/// Kronecker carrier.
pub fn tensor_gns_inner(qs: &QuantumSet, u: &Mat4, v: &Mat4) -> Complex64 {
    let r = [qs.rho.e[0][0].re, qs.rho.e[1][1].re];
    let mut acc = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let w = cr(r[j] * r[l]);
                    acc += u.e[2 * i + k][2 * j + l].conj() * v.e[2 * i + k][2 * j + l] * w;
                }
            }
        }
    }
    acc
}

/// Verifies orthonormality of a family under the KMS(psi^-1) form.
pub fn is_kms_orthonormal(qs: &QuantumSet, basis: &[Mat2], tol: f64) -> bool {
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let g = qs.inner(InnerProductKind::KmsPsiInverse, x, y);
            let target = if i == j { ONE } else { ZERO };
            if (g - target).norm() > tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{I, TOL_EIG, TOL_ORTHO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_mat2(rng: &mut ChaCha8Rng) -> Mat2 {
        Mat2::from_rows([
            [
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ],
            [
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ],
        ])
    }

    #[test]
    fn rejects_invalid_q() {
        assert!(QuantumSet::new(0.0).is_err());
        assert!(QuantumSet::new(1.5).is_err());
        assert!(QuantumSet::new(-0.3).is_err());
    }

    #[test]
    fn rho_has_unit_inverse_trace() {
        for q in [0.1, 0.3, 0.7, 1.0] {
            let qs = QuantumSet::new(q).unwrap();
            assert!(((qs.rho_inv().trace()) - ONE).norm() < TOL_ORTHO);
        }
    }

    #[test]
    fn functional_values() {
        let tracial = QuantumSet::tracial();
        assert!((tracial.functional(&Mat2::identity()) - cr(4.0)).norm() < TOL_ORTHO);

        let qs = QuantumSet::new(0.5).unwrap();
        assert!((qs.functional(&unit(0, 0)) - cr(5.0)).norm() < TOL_ORTHO);
        assert!(qs.functional(&Mat2::zero()).norm() < TOL_ORTHO);
    }

    #[test]
    fn kms_inverse_unit_norm_and_pauli_orthogonality() {
        for q in [0.3, 0.5, 1.0] {
            let qs = QuantumSet::new(q).unwrap();
            let id = Mat2::identity();
            assert!(
                (qs.inner(InnerProductKind::KmsPsiInverse, &id, &id) - ONE).norm() < TOL_ORTHO
            );
        }

        // at q = 1 the identity is orthogonal to all Pauli matrices
        let tracial = QuantumSet::tracial();
        let paulis = [
            Mat2::from_rows([[ZERO, ONE], [ONE, ZERO]]),
            Mat2::from_rows([[ZERO, -I], [I, ZERO]]),
            Mat2::diag([ONE, -ONE]),
        ];
        for p in &paulis {
            assert!(
                tracial
                    .inner(InnerProductKind::KmsPsiInverse, &Mat2::identity(), p)
                    .norm()
                    < TOL_ORTHO
            );
        }

        // the q-adjusted third Pauli matrix is orthogonal to the identity
        let q = 0.5;
        let qs = QuantumSet::new(q).unwrap();
        let sigma3q = Mat2::diag([cr(1.0 / (q * q)), cr(-1.0)]);
        assert!(
            qs.inner(InnerProductKind::KmsPsiInverse, &Mat2::identity(), &sigma3q)
                .norm()
                < TOL_ORTHO
        );
    }

    #[test]
    fn comultiplication_of_e11_at_q1() {
        let qs = QuantumSet::tracial();
        let got = qs.comultiplication(&unit(0, 0));
        let expected = (kron(&unit(0, 0), &unit(0, 0)) + kron(&unit(0, 1), &unit(1, 0)))
            .scale(cr(0.5));
        assert!(got.approx_eq(&expected, TOL_ORTHO));
        assert!(qs.comultiplication(&Mat2::zero()).approx_eq(&Mat4::zero(), 0.0));
    }

    #[test]
    fn m_after_m_star_is_identity_on_grid() {
        for i in 1..=10 {
            let q = i as f64 / 10.0;
            let qs = QuantumSet::new(q).unwrap();
            assert!(qs.mm_star_defect() < TOL_ORTHO, "q = {q}");
        }
    }

    #[test]
    fn multiplication_examples() {
        let qs = QuantumSet::tracial();
        assert!(qs
            .multiplication(&kron(&unit(0, 1), &unit(1, 0)))
            .approx_eq(&unit(0, 0), 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = rand_mat2(&mut rng);
        assert!(qs
            .multiplication(&kron(&Mat2::identity(), &x))
            .approx_eq(&x, TOL_ORTHO));
    }

    #[test]
    fn comultiplication_is_gns_adjoint_of_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for qi in [0.2, 0.5, 0.9, 1.0] {
            let qs = QuantumSet::new(qi).unwrap();
            for _ in 0..50 {
                let a = rand_mat2(&mut rng);
                let b = rand_mat2(&mut rng);
                let cc = rand_mat2(&mut rng);
                let lhs = tensor_gns_inner(&qs, &qs.comultiplication(&a), &kron(&b, &cc));
                let rhs = qs.inner(InnerProductKind::GnsPsi, &a, &(b * cc));
                assert!((lhs - rhs).norm() < 1e-8 * (1.0 + rhs.norm()), "q={qi}");
            }
        }
    }

    #[test]
    fn inner_products_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [
            InnerProductKind::GnsPsi,
            InnerProductKind::KmsPsi,
            InnerProductKind::KmsPsiInverse,
        ] {
            for _ in 0..200 {
                let q = rng.gen_range(0.05..1.0f64);
                let qs = QuantumSet::new(q).unwrap();
                let x = rand_mat2(&mut rng);
                if x.frobenius_norm() < 1e-6 {
                    continue;
                }
                let g = qs.inner(kind, &x, &x);
                assert!(g.re > 0.0 && g.im.abs() < 1e-10 * (1.0 + g.re));
            }
        }
    }

    #[test]
    fn kms_equals_gns_when_tracial() {
        let qs = QuantumSet::tracial();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x = rand_mat2(&mut rng);
            let y = rand_mat2(&mut rng);
            let a = qs.inner(InnerProductKind::KmsPsi, &x, &y);
            let b = qs.inner(InnerProductKind::GnsPsi, &x, &y);
            assert!((a - b).norm() < TOL_ORTHO);
        }
    }

    #[test]
    fn modular_map_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let qs = QuantumSet::new(0.4).unwrap();
        let x = rand_mat2(&mut rng);

        // z = 0 is the identity
        assert!(qs.modular_map(ZERO, &x).approx_eq(&x, TOL_ORTHO));

        // tracial sets have trivial modular flow
        let tracial = QuantumSet::tracial();
        let z = c(0.7, -0.3);
        assert!(tracial.modular_map(z, &x).approx_eq(&x, TOL_ORTHO));

        // sigma_{i/2} is conjugation by rho^{-1/2} ... rho^{1/2}
        let half_i = c(0.0, 0.5);
        let direct = qs.rho_inv_half * x * qs.rho_half;
        assert!(qs.modular_map(half_i, &x).approx_eq(&direct, TOL_EIG));

        // sigma_z . sigma_{-z} = Id
        let back = qs.modular_map(-z, &qs.modular_map(z, &x));
        assert!(back.approx_eq(&x, 1e-9));
    }

    #[test]
    fn comultiplication_matches_general_alpha_reference() {
        // reference implementation with psi = alpha Tr(rho .), evaluated at
        // alpha = 1, as an independent route to the same tensor
        let qs = QuantumSet::new(0.6).unwrap();
        let alpha = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let x = rand_mat2(&mut rng);
            let coeff = x * *qs.rho();
            let mut reference = Mat4::zero();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let left = unit(i, k) * *qs.rho_inv();
                        let right = unit(k, j) * *qs.rho_inv();
                        reference =
                            reference + kron(&left, &right).scale(coeff.e[i][j] * cr(1.0 / alpha));
                    }
                }
            }
            assert!(qs.comultiplication(&x).approx_eq(&reference, 1e-10));
        }
    }
}
