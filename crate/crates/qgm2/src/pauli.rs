//! Pauli-space coordinates of edge spaces and the automorphism group of
//! `(M_2, psi_q)` as block rotations on those coordinates.
//!
//! A subspace `S` of `M_2` is rewritten in the basis `sigma_0..sigma_3`
//! (tracial case) or with `sigma_3` replaced by `sigma_3^(q) = diag(q^-2, -1)`
//! (nontracial case). Automorphisms act as `diag(1, R)` with `R` in `SO(3)`
//! when tracial and as `diag(1, R, 1)` with `R` in `SO(2)` otherwise, so the
//! isomorphism problem becomes a rotation-orbit problem on `C^4`.

use crate::cmatrix::{c, cr, CVec4, Mat2, Mat4, Subspace, I, ONE, TOL_ORTHO, ZERO};
use crate::qset::QuantumSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("rotation parameter is not special orthogonal (defect {0:e})")]
    NotOrthogonal(f64),
    #[error("rotation parameter kind does not match the quantum set")]
    KindMismatch,
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("conjugation does not preserve the functional (defect {0:e})")]
    NotFunctionalPreserving(f64),
}

pub fn sigma0() -> Mat2 {
    Mat2::identity()
}

pub fn sigma1() -> Mat2 {
    Mat2::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma2() -> Mat2 {
    Mat2::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn sigma3() -> Mat2 {
    Mat2::diag([ONE, -ONE])
}

/// `sigma_3^(q) = diag(q^-2, -1)`, orthogonal to the identity under the
/// KMS(psi_q^-1) form.
pub fn sigma3_q(q: f64) -> Mat2 {
    Mat2::diag([cr(1.0 / (q * q)), -ONE])
}

/// Which basis the coordinates refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PauliBasisKind {
    Standard,
    QAdjusted { q: f64 },
}

impl PauliBasisKind {
    pub fn for_set(qs: &QuantumSet) -> Self {
        if qs.is_tracial() {
            PauliBasisKind::Standard
        } else {
            PauliBasisKind::QAdjusted { q: qs.q() }
        }
    }

    fn third_basis_matrix(&self) -> Mat2 {
        match self {
            PauliBasisKind::Standard => sigma3(),
            PauliBasisKind::QAdjusted { q } => sigma3_q(*q),
        }
    }
}

/// A subspace of `C^4` in (q-adjusted) Pauli coordinates.
#[derive(Debug, Clone)]
pub struct PauliSpace {
    pub kind: PauliBasisKind,
    pub space: Subspace<4>,
}

impl PauliSpace {
    pub fn rank(&self) -> usize {
        self.space.rank()
    }
}

/// Coordinates of a single matrix in the (q-adjusted) Pauli basis.
pub fn pauli_coords(kind: PauliBasisKind, m: &Mat2) -> CVec4 {
    let m11 = m.e[0][0];
    let m12 = m.e[0][1];
    let m21 = m.e[1][0];
    let m22 = m.e[1][1];
    let x1 = (m12 + m21) * cr(0.5);
    let x2 = (m21 - m12) * c(0.0, -0.5);
    match kind {
        PauliBasisKind::Standard => {
            let x0 = (m11 + m22) * cr(0.5);
            let x3 = (m11 - m22) * cr(0.5);
            CVec4::from([x0, x1, x2, x3])
        }
        PauliBasisKind::QAdjusted { q } => {
            // m11 = x0 + q^-2 x3, m22 = x0 - x3
            let qi2 = 1.0 / (q * q);
            let denom = cr(1.0 + qi2);
            let x3 = (m11 - m22) / denom;
            let x0 = (m11 + m22 * cr(qi2)) / denom;
            CVec4::from([x0, x1, x2, x3])
        }
    }
}

/// Matrix with the given (q-adjusted) Pauli coordinates.
pub fn from_pauli_coords(kind: PauliBasisKind, v: &CVec4) -> Mat2 {
    let third = kind.third_basis_matrix();
    sigma0().scale(v.v[0])
        + sigma1().scale(v.v[1])
        + sigma2().scale(v.v[2])
        + third.scale(v.v[3])
}

/// The (q-adjusted) Pauli space of the span of `s_basis`.
pub fn to_pauli(qs: &QuantumSet, s_basis: &[Mat2]) -> PauliSpace {
    let kind = PauliBasisKind::for_set(qs);
    let coords: Vec<CVec4> = s_basis.iter().map(|m| pauli_coords(kind, m)).collect();
    PauliSpace {
        kind,
        space: Subspace::from_spanners(&coords),
    }
}

/// Spanning matrices of a Pauli space; the round trip with [`to_pauli`] is
/// the identity on subspaces.
pub fn from_pauli(qs: &QuantumSet, ps: &PauliSpace) -> Result<Vec<Mat2>, PauliError> {
    if PauliBasisKind::for_set(qs) != ps.kind {
        return Err(PauliError::KindMismatch);
    }
    Ok(ps
        .space
        .basis()
        .iter()
        .map(|v| from_pauli_coords(ps.kind, v))
        .collect())
}

/// Rotation parameter for the automorphism group: a full `SO(3)` matrix in
/// the tracial case, an angle (acting on the `sigma_1, sigma_2` coordinates)
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rotation {
    So3([[f64; 3]; 3]),
    So2 { angle: f64 },
}

impl Rotation {
    pub fn identity_for(qs: &QuantumSet) -> Self {
        if qs.is_tracial() {
            Rotation::So3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        } else {
            Rotation::So2 { angle: 0.0 }
        }
    }
}

pub(crate) fn so3_defect(r: &[[f64; 3]; 3]) -> f64 {
    let mut defect: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut dot = 0.0;
            for k in 0..3 {
                dot += r[k][i] * r[k][j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - target).abs());
        }
    }
    defect.max((det3(r) - 1.0).abs())
}

pub(crate) fn det3(r: &[[f64; 3]; 3]) -> f64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// The automorphism as a 4x4 matrix on (q-adjusted) Pauli coordinates.
pub fn automorphism_action(qs: &QuantumSet, r: &Rotation) -> Result<Mat4, PauliError> {
    match (qs.is_tracial(), r) {
        (true, Rotation::So3(m)) => {
            let defect = so3_defect(m);
            if defect > TOL_ORTHO {
                return Err(PauliError::NotOrthogonal(defect));
            }
            let mut a = Mat4::zero();
            a.e[0][0] = ONE;
            for i in 0..3 {
                for j in 0..3 {
                    a.e[i + 1][j + 1] = cr(m[i][j]);
                }
            }
            Ok(a)
        }
        (false, Rotation::So2 { angle }) => {
            let (s, co) = angle.sin_cos();
            let mut a = Mat4::identity();
            a.e[1][1] = cr(co);
            a.e[1][2] = cr(-s);
            a.e[2][1] = cr(s);
            a.e[2][2] = cr(co);
            Ok(a)
        }
        _ => Err(PauliError::KindMismatch),
    }
}

/// Applies the automorphism to a Pauli space.
pub fn apply_action(ps: &PauliSpace, action: &Mat4) -> PauliSpace {
    PauliSpace {
        kind: ps.kind,
        space: ps.space.apply(action),
    }
}

/// Applies the automorphism to a single element of `M_2` through its Pauli
/// coordinates.
pub fn apply_automorphism(qs: &QuantumSet, r: &Rotation, x: &Mat2) -> Result<Mat2, PauliError> {
    let action = automorphism_action(qs, r)?;
    let kind = PauliBasisKind::for_set(qs);
    let coords = pauli_coords(kind, x);
    Ok(from_pauli_coords(kind, &action.mul_vec(&coords)))
}

/// Conjugation `x -> u x u*` by a unitary, used as an independent oracle that
/// the block-rotation action realizes genuine functional-preserving
/// *-automorphisms. For nontracial sets `u` must be diagonal.
pub fn unitary_conjugation_oracle(
    qs: &QuantumSet,
    u: &Mat2,
    s_basis: &[Mat2],
) -> Result<Vec<Mat2>, PauliError> {
    let defect = (u.adjoint() * *u - Mat2::identity()).frobenius_norm();
    if defect > TOL_ORTHO {
        return Err(PauliError::NotUnitary(defect));
    }
    if !qs.is_tracial() {
        let off = u.e[0][1].norm().max(u.e[1][0].norm());
        if off > TOL_ORTHO {
            return Err(PauliError::KindMismatch);
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let x = crate::qset::unit(i, j);
            let moved = *u * x * u.adjoint();
            worst = worst.max((qs.functional(&moved) - qs.functional(&x)).norm());
        }
    }
    if worst > 1e-8 {
        return Err(PauliError::NotFunctionalPreserving(worst));
    }
    Ok(s_basis.iter().map(|x| *u * *x * u.adjoint()).collect())
}
