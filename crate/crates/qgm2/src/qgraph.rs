//! Quantum graphs on `(M_2, psi_q)` and their three presentations.
//!
//! A graph is stored as a KMS(psi^-1)-orthonormal basis of its quantum edge
//! space `S`. From that basis the quantum adjacency matrix
//! `A = sum_i (rho^-1/4 X_i rho^1/4) (x) conj(rho^-1/4 X_i rho^1/4)` and the
//! quantum edge projection
//! `P = sum_{i,k,l} rho^-1/4 X_i e_kl rho^-1/4 (x) (rho^-1/4 X_i* e_lk rho^-1/4)^op`
//! are derived. Structural properties are decided on `S` and cross-checked
//! against the equivalent conditions on `A` and `P`; a disagreement between
//! the routes is surfaced as an error, never swallowed.

use crate::cmatrix::{
    cr, eigenvalues4, kron, sort_lex, vec2, CVec4, CmatrixError, Mat2, Mat4, Subspace, ONE,
};
use crate::qset::{
    is_kms_orthonormal, map_left_leg, map_right_leg, multiply_tensor, unit, InnerProductKind,
    QuantumSet,
};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Boolean property threshold on (scale-normalized) residuals.
pub const TOL_PROP: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum QgraphError {
    #[error("the equivalent property characterizations disagree: {0:?}")]
    CharacterizationDisagreement(Box<PropertyReport>),
    #[error("graph is not loopfree (identity overlap {0:e})")]
    NotLoopfree(f64),
    #[error(transparent)]
    Numeric(#[from] CmatrixError),
    #[error("basis is not KMS(psi^-1)-orthonormal")]
    NotOrthonormal,
    #[error("parameters outside the family index set: {0}")]
    FamilyMismatch(String),
}

/// A quantum graph: quantum set plus KMS(psi^-1)-orthonormal edge basis.
#[derive(Debug, Clone)]
pub struct QuantumGraph {
    qset: QuantumSet,
    basis: Vec<Mat2>,
}

/// The quantum adjacency matrix in the Kronecker carrier.
#[derive(Debug, Clone, Copy)]
pub struct AdjacencyMatrix {
    pub matrix: Mat4,
}

/// The quantum edge projection. The second tensor leg carries the opposite
/// multiplication: storage is a plain 4x4 array, only [`EdgeProjection::op_mul`]
/// differs from the ordinary product.
#[derive(Debug, Clone, Copy)]
pub struct EdgeProjection {
    pub tensor: Mat4,
}

/// Raw residuals behind the boolean answers, for auditability. Each property
/// carries the residuals of its edge-space, adjacency and projection route.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PropertyResiduals {
    pub reflexive: [f64; 3],
    pub loopfree: [f64; 3],
    pub kms_undirected: [f64; 3],
    pub gns_undirected: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub edge_count: usize,
    pub reflexive: bool,
    pub loopfree: bool,
    pub gns_undirected: bool,
    pub kms_undirected: bool,
    pub characterization_agreement: bool,
    pub residuals: PropertyResiduals,
}

impl QuantumGraph {
    /// Orthonormalizes `spanners` under the KMS(psi^-1) form; dependent
    /// spanners are dropped.
    pub fn from_spanners(qs: &QuantumSet, spanners: &[Mat2]) -> Result<Self, QgraphError> {
        let basis = qs.orthonormalize(spanners)?;
        Ok(QuantumGraph {
            qset: qs.clone(),
            basis,
        })
    }

    /// Wraps an already orthonormal basis without re-orthonormalizing, so the
    /// derived presentations can be tested against basis changes.
    pub fn from_orthonormal_basis(qs: &QuantumSet, basis: Vec<Mat2>) -> Result<Self, QgraphError> {
        if !is_kms_orthonormal(qs, &basis, 1e-7) {
            return Err(QgraphError::NotOrthonormal);
        }
        Ok(QuantumGraph {
            qset: qs.clone(),
            basis,
        })
    }

    pub fn empty(qs: &QuantumSet) -> Self {
        QuantumGraph {
            qset: qs.clone(),
            basis: Vec::new(),
        }
    }

    pub fn complete(qs: &QuantumSet) -> Self {
        let units = vec![unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)];
        Self::from_spanners(qs, &units).expect("matrix units always orthonormalize")
    }

    pub fn trivial(qs: &QuantumSet) -> Self {
        Self::from_spanners(qs, &[Mat2::identity()]).expect("identity has unit norm")
    }

    pub fn qset(&self) -> &QuantumSet {
        &self.qset
    }

    pub fn basis(&self) -> &[Mat2] {
        &self.basis
    }

    pub fn edge_count(&self) -> usize {
        self.basis.len()
    }

    /// The edge space vectorized as a subspace of `C^4` (standard inner
    /// product carrier, used for basis-free subspace comparisons).
    pub fn edge_space(&self) -> Subspace<4> {
        let vs: Vec<CVec4> = self.basis.iter().map(vec2).collect();
        Subspace::from_spanners(&vs)
    }

    /// Largest overlap of the identity with the edge basis under the
    /// KMS(psi^-1) form; zero exactly for loopfree graphs.
    pub fn identity_overlap(&self) -> f64 {
        self.basis
            .iter()
            .map(|x| {
                self.qset
                    .inner(InnerProductKind::KmsPsiInverse, &Mat2::identity(), x)
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_loopfree(&self) -> bool {
        self.identity_overlap() < TOL_PROP
    }
}

/// `A = sum_i (rho^-1/4 X_i rho^1/4) (x) conj(rho^-1/4 X_i rho^1/4)`.
pub fn adjacency(g: &QuantumGraph) -> AdjacencyMatrix {
    let qs = g.qset();
    let mut a = Mat4::zero();
    for x in g.basis() {
        let m = *qs.rho_inv_quarter() * *x * *qs.rho_quarter();
        a = a + kron(&m, &m.conj());
    }
    AdjacencyMatrix { matrix: a }
}

impl AdjacencyMatrix {
    /// The graph operator applied to an element of `M_2`.
    pub fn apply(&self, x: &Mat2) -> Mat2 {
        crate::cmatrix::unvec2(&self.matrix.mul_vec(&vec2(x)))
    }

    /// Residual of the real structure `A(x*) = A(x)*` over the unit basis.
    pub fn real_structure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let x = unit(i, j);
                let lhs = self.apply(&x.adjoint());
                let rhs = self.apply(&x).adjoint();
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        worst
    }

    /// Residual of the Schur-type idempotency `m (A (x) A) m* = A`.
    pub fn schur_idempotency_defect(&self, qs: &QuantumSet) -> f64 {
        let composed = sandwich_matrix(qs, self, true);
        composed.max_abs_diff(&self.matrix)
    }

    /// Adjoint with respect to a diagonal Gram matrix: `G^-1 A^dagger G`.
    pub fn adjoint_wrt(&self, gram: &Mat4) -> Mat4 {
        let mut out = self.matrix.adjoint();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = out.e[i][j] * gram.e[j][j] / gram.e[i][i];
            }
        }
        out
    }
}

/// Matrix (in the vectorized unit basis) of `x -> m((A (x) B)(m*(x)))` where
/// `B` is the identity map or a second copy of `A`.
fn sandwich_matrix(qs: &QuantumSet, a: &AdjacencyMatrix, both_legs: bool) -> Mat4 {
    let mut out = Mat4::zero();
    for col in 0..4 {
        let x = unit(col / 2, col % 2);
        let mut t = qs.comultiplication(&x);
        t = map_left_leg(&t, |y| a.apply(y));
        if both_legs {
            t = map_right_leg(&t, |y| a.apply(y));
        }
        let y = multiply_tensor(&t);
        let yv = vec2(&y);
        for row in 0..4 {
            out.e[row][col] = yv.v[row];
        }
    }
    out
}

/// `P = sum_{i,k,l} rho^-1/4 X_i e_kl rho^-1/4 (x) (rho^-1/4 X_i* e_lk rho^-1/4)^op`.
pub fn edge_projection(g: &QuantumGraph) -> EdgeProjection {
    let qs = g.qset();
    let r = *qs.rho_inv_quarter();
    let mut p = Mat4::zero();
    for x in g.basis() {
        for k in 0..2 {
            for l in 0..2 {
                let left = r * *x * unit(k, l) * r;
                let right = r * x.adjoint() * unit(l, k) * r;
                p = p + kron(&left, &right);
            }
        }
    }
    EdgeProjection { tensor: p }
}

/// Partial transpose on the second tensor leg; conjugating the ordinary 4x4
/// product by it realizes the opposite multiplication on that leg.
fn partial_transpose_right(t: &Mat4) -> Mat4 {
    let mut out = Mat4::zero();
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    out.e[2 * a + d][2 * b + cc] = t.e[2 * a + cc][2 * b + d];
                }
            }
        }
    }
    out
}

/// Swap of the two tensor legs, `a (x) b^op -> b (x) a^op`; maps the edge
/// projection of `S` to the edge projection of `S*`.
pub fn flip_legs(t: &Mat4) -> Mat4 {
    let mut out = Mat4::zero();
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    out.e[2 * cc + a][2 * d + b] = t.e[2 * a + cc][2 * b + d];
                }
            }
        }
    }
    out
}

impl EdgeProjection {
    /// Product in `M_2 (x) M_2^op`: `(a (x) b^op)(c (x) d^op) = ac (x) (db)^op`.
    pub fn op_mul(&self, other: &EdgeProjection) -> EdgeProjection {
        let lhs = partial_transpose_right(&self.tensor);
        let rhs = partial_transpose_right(&other.tensor);
        EdgeProjection {
            tensor: partial_transpose_right(&(lhs * rhs)),
        }
    }

    pub fn idempotency_defect(&self) -> f64 {
        self.op_mul(self).tensor.max_abs_diff(&self.tensor)
    }

    pub fn self_adjointness_defect(&self) -> f64 {
        self.tensor.adjoint().max_abs_diff(&self.tensor)
    }

    /// Trace in the Kronecker carrier; equals the number of quantum edges.
    pub fn op_trace(&self) -> Complex64 {
        self.tensor.trace()
    }
}

/// `m((Id (x) sigma_{i/2}) P)`, the matrix whose value (identity or zero)
/// decides reflexivity and loopfreeness in the projection presentation.
fn projection_marker(qs: &QuantumSet, p: &EdgeProjection) -> Mat2 {
    let conjugated = map_right_leg(&p.tensor, |y| *qs.rho_inv_half() * *y * rho_half(qs));
    multiply_tensor(&conjugated)
}

fn rho_half(qs: &QuantumSet) -> Mat2 {
    let r = qs.rho();
    Mat2::diag([cr(r.e[0][0].re.sqrt()), cr(r.e[1][1].re.sqrt())])
}

/// All structural properties, each decided by its edge-space characterization
/// and cross-checked against the adjacency-matrix and edge-projection
/// characterizations.
pub fn properties(g: &QuantumGraph) -> Result<PropertyReport, QgraphError> {
    properties_tol(g, TOL_PROP)
}

pub fn properties_tol(g: &QuantumGraph, tol: f64) -> Result<PropertyReport, QgraphError> {
    let qs = g.qset();
    let k = g.edge_count();
    let space = g.edge_space();
    let a = adjacency(g);
    let p = edge_projection(g);
    let a_scale = 1.0 + a.matrix.frobenius_norm();
    let p_scale = 1.0 + p.tensor.frobenius_norm();

    let id = Mat2::identity();
    let id_vec = vec2(&id);

    // --- reflexive ---
    let refl_s = {
        let proj = space.projector().mul_vec(&id_vec);
        proj.sub(&id_vec).norm() / id_vec.norm()
    };
    let sandwich = sandwich_matrix(qs, &a, false);
    let refl_a = sandwich.max_abs_diff(&Mat4::identity()) / a_scale;
    let marker = projection_marker(qs, &p);
    let refl_p = marker.max_abs_diff(&id) / p_scale;

    // --- loopfree ---
    let loop_s = g.identity_overlap();
    let loop_a = sandwich.max_abs_diff(&Mat4::zero()) / a_scale;
    let loop_p = marker.max_abs_diff(&Mat2::zero()) / p_scale;

    // --- KMS-undirected: S = S* ---
    let adj_space = {
        let vs: Vec<CVec4> = g.basis().iter().map(|x| vec2(&x.adjoint())).collect();
        Subspace::from_spanners(&vs)
    };
    let kms_s = space.distance(&adj_space);
    let kms_a = a
        .adjoint_wrt(&qs.gram(InnerProductKind::KmsPsi))
        .max_abs_diff(&a.matrix)
        / a_scale;
    let kms_p = flip_legs(&p.tensor).max_abs_diff(&p.tensor) / p_scale;

    // --- GNS-undirected: S = S* and rho S rho^-1 = S ---
    let mod_space = {
        let vs: Vec<CVec4> = g
            .basis()
            .iter()
            .map(|x| vec2(&(*qs.rho() * *x * *qs.rho_inv())))
            .collect();
        Subspace::from_spanners(&vs)
    };
    let gns_s = kms_s.max(space.distance(&mod_space));
    let gns_a = a
        .adjoint_wrt(&qs.gram(InnerProductKind::GnsPsi))
        .max_abs_diff(&a.matrix)
        / a_scale;
    let rho_tensor = kron(qs.rho(), qs.rho());
    let gns_p = kms_p
        .max(rho_tensor.commutator_norm(&p.tensor) / (p_scale * rho_tensor.frobenius_norm()));

    let residuals = PropertyResiduals {
        reflexive: [refl_s, refl_a, refl_p],
        loopfree: [loop_s, loop_a, loop_p],
        kms_undirected: [kms_s, kms_a, kms_p],
        gns_undirected: [gns_s, gns_a, gns_p],
    };

    let vote = |r: &[f64; 3]| [r[0] < tol, r[1] < tol, r[2] < tol];
    let refl_votes = vote(&residuals.reflexive);
    let loop_votes = vote(&residuals.loopfree);
    let kms_votes = vote(&residuals.kms_undirected);
    let gns_votes = vote(&residuals.gns_undirected);

    let unanimous = |v: &[bool; 3]| v.iter().all(|&b| b == v[0]);
    let agreement = unanimous(&refl_votes)
        && unanimous(&loop_votes)
        && unanimous(&kms_votes)
        && unanimous(&gns_votes);

    let report = PropertyReport {
        edge_count: k,
        reflexive: refl_votes[0],
        loopfree: loop_votes[0],
        gns_undirected: gns_votes[0],
        kms_undirected: kms_votes[0],
        characterization_agreement: agreement,
        residuals,
    };

    // internal consistency of the notions themselves
    let consistent = !(report.reflexive && report.loopfree && k >= 1)
        && (!report.gns_undirected || report.kms_undirected);
    if !agreement || !consistent {
        return Err(QgraphError::CharacterizationDisagreement(Box::new(report)));
    }
    Ok(report)
}

/// The complement graph: orthogonal complement of `S` under KMS(psi^-1).
pub fn complement(g: &QuantumGraph) -> QuantumGraph {
    let qs = g.qset();
    let mut candidates = g.basis().to_vec();
    candidates.extend([unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)]);
    let all = qs
        .orthonormalize(&candidates)
        .expect("KMS form is positive definite");
    let basis = all[g.edge_count()..].to_vec();
    QuantumGraph {
        qset: qs.clone(),
        basis,
    }
}

/// The loopfree complement `S' = S^perp (-) C I` of a loopfree graph.
pub fn loopfree_complement(g: &QuantumGraph) -> Result<QuantumGraph, QgraphError> {
    let overlap = g.identity_overlap();
    if overlap >= TOL_PROP {
        return Err(QgraphError::NotLoopfree(overlap));
    }
    let comp = complement(g);
    let qs = g.qset();
    let mut candidates = vec![Mat2::identity()];
    candidates.extend(comp.basis().iter().copied());
    let all = qs.orthonormalize(&candidates)?;
    Ok(QuantumGraph {
        qset: qs.clone(),
        basis: all[1..].to_vec(),
    })
}

/// Numeric spectrum of a quantum adjacency matrix, lexicographically sorted.
pub fn spectrum(a: &AdjacencyMatrix) -> Result<[Complex64; 4], QgraphError> {
    Ok(eigenvalues4(&a.matrix)?)
}

/// One-edge families with a closed-form spectrum, the analytic cross-check
/// for [`spectrum`].
#[derive(Debug, Clone, Copy)]
pub enum OneEdgeFamily {
    /// Edge space spanned by `(alpha, 1+beta; 1-beta, alpha)` on the tracial
    /// set; `beta` in `[0, 1]`.
    TracialLine { alpha: Complex64, beta: f64 },
    /// Edge space spanned by `diag(alpha + q^-2, alpha - 1)`.
    NontracialAxis { alpha: Complex64, q: f64 },
    /// Edge space spanned by `(alpha + q^-2 gamma, 1+beta; 1-beta, alpha - gamma)`;
    /// `beta` in `[-1, 1]`.
    NontracialLine {
        alpha: Complex64,
        beta: f64,
        gamma: Complex64,
        q: f64,
    },
}

pub fn closed_form_spectrum_1edge(family: &OneEdgeFamily) -> Result<[Complex64; 4], QgraphError> {
    let (t_plus, t_minus, c) = match *family {
        OneEdgeFamily::TracialLine { alpha, beta } => {
            if !(0.0..=1.0).contains(&beta) {
                return Err(QgraphError::FamilyMismatch(format!(
                    "tracial line needs beta in [0,1], got {beta}"
                )));
            }
            let root = cr(1.0 - beta * beta).sqrt();
            let c = alpha.norm_sqr() + 1.0 + beta * beta;
            (alpha + root, alpha - root, c)
        }
        OneEdgeFamily::NontracialAxis { alpha, q } => {
            if q <= 0.0 || q >= 1.0 {
                return Err(QgraphError::FamilyMismatch(format!(
                    "nontracial axis needs q in (0,1), got {q}"
                )));
            }
            let qi2 = 1.0 / (q * q);
            let tp = alpha + cr(qi2);
            let tm = alpha - ONE;
            let c = (q * q * tp.norm_sqr() + tm.norm_sqr()) / (1.0 + q * q);
            (tp, tm, c)
        }
        OneEdgeFamily::NontracialLine {
            alpha,
            beta,
            gamma,
            q,
        } => {
            if !(-1.0..=1.0).contains(&beta) || q <= 0.0 || q >= 1.0 {
                return Err(QgraphError::FamilyMismatch(format!(
                    "nontracial line needs beta in [-1,1] and q in (0,1), got beta={beta}, q={q}"
                )));
            }
            let qi2 = 1.0 / (q * q);
            let half_diff = cr((qi2 - 1.0) / 2.0);
            let half_sum = cr((qi2 + 1.0) / 2.0);
            let root = (half_sum * half_sum * gamma * gamma + cr(1.0 - beta * beta)).sqrt();
            let s_plus = alpha + half_diff * gamma + root;
            let s_minus = alpha + half_diff * gamma - root;
            let a_plus = alpha + cr(qi2) * gamma;
            let a_minus = alpha - gamma;
            let c = (q * q * a_plus.norm_sqr()
                + 2.0 * q * (1.0 + beta * beta)
                + a_minus.norm_sqr())
                / (1.0 + q * q);
            (s_plus, s_minus, c)
        }
    };
    let inv_c = cr(1.0 / c);
    let mut out = [
        t_plus * t_plus.conj() * inv_c,
        t_plus * t_minus.conj() * inv_c,
        t_minus * t_plus.conj() * inv_c,
        t_minus * t_minus.conj() * inv_c,
    ];
    sort_lex(&mut out);
    Ok(out)
}
