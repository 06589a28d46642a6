//! Canonical forms and the isomorphism decider.
//!
//! Every quantum graph on `(M_2, psi_q)` is reduced to a unique family tag
//! plus parameters. One-edge graphs and non-loopfree two-edge graphs are
//! canonicalized directly on their (q-adjusted) Pauli spaces; loopfree
//! two-edge graphs and three-edge graphs are routed through the loopfree
//! complement and the complement, which are bijections on isomorphism
//! classes. Two graphs are isomorphic exactly when their canonical forms
//! agree.

use crate::cmatrix::{c, cr, CVec4, Mat2, ONE, ZERO};
use crate::lines::{
    canonical_beta_c2, canonical_beta_c3, CVec2, CVec3, LineGroup, LinesError, TOL_CANON,
};
use crate::pauli::{from_pauli_coords, sigma0, sigma1, sigma2, sigma3_q, to_pauli, PauliBasisKind, PauliSpace};
use crate::qgraph::{complement, loopfree_complement, QgraphError, QuantumGraph};
use crate::qset::{QsetError, QuantumSet, TOL_Q};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error("expected a Pauli space of rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("plane is loopfree; route it through the loopfree complement")]
    IsLoopfree,
    #[error("parameters violate the family's index-set conditions: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Lines(#[from] LinesError),
    #[error(transparent)]
    Graph(#[from] QgraphError),
    #[error(transparent)]
    Qset(#[from] QsetError),
    #[error("complement of a {0}-edge graph produced an unexpected family")]
    ComplementMismatch(usize),
}

/// Isomorphism class of a quantum graph: family tag plus the parameters of
/// the representative edge space. Complement families carry the parameters
/// of the one-edge graph they complement.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Empty,
    /// Trivial graph `span{I}` on the tracial set.
    T1a,
    /// `span{(alpha, 1+beta; 1-beta, alpha)}`.
    T1b { alpha: Complex64, beta: f64 },
    /// `span{(0, 1+beta; 1-beta, 0), (1+delta, -i gamma (1-beta); i gamma (1+beta), 1-delta)}`.
    T2 {
        beta: f64,
        gamma: Complex64,
        delta: Complex64,
    },
    /// Loopfree complement of `T1b { alpha: 0, beta }`.
    T2lc { beta: f64 },
    /// Complement of the trivial graph.
    T3cA,
    /// Complement of `T1b { alpha, beta }`.
    T3cB { alpha: Complex64, beta: f64 },
    /// Trivial graph on a nontracial set.
    Nt1a,
    /// `span{diag(alpha + q^-2, alpha - 1)}`.
    Nt1b { alpha: Complex64 },
    /// `span{(alpha + q^-2 gamma, 1+beta; 1-beta, alpha - gamma)}`.
    Nt1c {
        alpha: Complex64,
        beta: f64,
        gamma: Complex64,
    },
    /// Two-edge family with q-adjusted Pauli vectors `(0, 1, i beta, delta)`
    /// and `(1, i alpha beta - gamma conj(delta), alpha, gamma)`.
    Nt2 {
        alpha: Complex64,
        beta: f64,
        gamma: Complex64,
        delta: Complex64,
    },
    /// Nontracial planes whose unique loop-orthogonal line is the
    /// `sigma_3^(q)` axis: q-adjusted Pauli vectors `(0,0,0,1)` and
    /// `(1, w1, w2, 0)`. Disjoint from `Nt2`, where that line always has a
    /// nonvanishing `sigma_1, sigma_2` part.
    Nt2Axis { w1: Complex64, w2: Complex64 },
    /// Loopfree complement of `Nt1b { alpha: 0 }`.
    Nt2lcB,
    /// Loopfree complement of `Nt1c { alpha: 0, beta, gamma }`.
    Nt2lcC { beta: f64, gamma: Complex64 },
    /// Complement of the trivial graph on a nontracial set.
    Nt3cA,
    /// Complement of `Nt1b { alpha }`.
    Nt3cB { alpha: Complex64 },
    /// Complement of `Nt1c { alpha, beta, gamma }`.
    Nt3cC {
        alpha: Complex64,
        beta: f64,
        gamma: Complex64,
    },
    Complete,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Empty => "Empty",
            Family::T1a => "T1A",
            Family::T1b { .. } => "T1B",
            Family::T2 { .. } => "T2",
            Family::T2lc { .. } => "T2LC",
            Family::T3cA => "T3C_A",
            Family::T3cB { .. } => "T3C_B",
            Family::Nt1a => "NT1A",
            Family::Nt1b { .. } => "NT1B",
            Family::Nt1c { .. } => "NT1C",
            Family::Nt2 { .. } => "NT2",
            Family::Nt2Axis { .. } => "NT2B",
            Family::Nt2lcB => "NT2LC_B",
            Family::Nt2lcC { .. } => "NT2LC_C",
            Family::Nt3cA => "NT3C_A",
            Family::Nt3cB { .. } => "NT3C_B",
            Family::Nt3cC { .. } => "NT3C_C",
            Family::Complete => "Complete",
        }
    }

    /// Named parameters for serialization; `beta` is real, all others complex.
    pub fn params(&self) -> Vec<(&'static str, Complex64)> {
        match *self {
            Family::T1b { alpha, beta } => vec![("alpha", alpha), ("beta", cr(beta))],
            Family::T2 { beta, gamma, delta } => {
                vec![("beta", cr(beta)), ("gamma", gamma), ("delta", delta)]
            }
            Family::T2lc { beta } => vec![("beta", cr(beta))],
            Family::T3cB { alpha, beta } => vec![("alpha", alpha), ("beta", cr(beta))],
            Family::Nt1b { alpha } => vec![("alpha", alpha)],
            Family::Nt1c { alpha, beta, gamma } => {
                vec![("alpha", alpha), ("beta", cr(beta)), ("gamma", gamma)]
            }
            Family::Nt2 {
                alpha,
                beta,
                gamma,
                delta,
            } => vec![
                ("alpha", alpha),
                ("beta", cr(beta)),
                ("gamma", gamma),
                ("delta", delta),
            ],
            Family::Nt2Axis { w1, w2 } => vec![("w1", w1), ("w2", w2)],
            Family::Nt2lcC { beta, gamma } => vec![("beta", cr(beta)), ("gamma", gamma)],
            Family::Nt3cB { alpha } => vec![("alpha", alpha)],
            Family::Nt3cC { alpha, beta, gamma } => {
                vec![("alpha", alpha), ("beta", cr(beta)), ("gamma", gamma)]
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub q: f64,
    pub edge_count: usize,
    pub family: Family,
}

impl CanonicalForm {
    /// Largest parameter deviation from `other`; infinite when the families
    /// (or quantum sets) differ.
    pub fn distance(&self, other: &CanonicalForm) -> f64 {
        if (self.q - other.q).abs() > TOL_Q
            || self.edge_count != other.edge_count
            || std::mem::discriminant(&self.family) != std::mem::discriminant(&other.family)
        {
            return f64::INFINITY;
        }
        self.family
            .params()
            .iter()
            .zip(other.family.params().iter())
            .map(|((_, a), (_, b))| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn equal_within(&self, other: &CanonicalForm, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

fn snap_zero(z: Complex64, scale: f64) -> Complex64 {
    if z.norm() < TOL_CANON * scale.max(1.0) {
        ZERO
    } else {
        z
    }
}

/// Sign that moves `z` into the closed upper half plane with the boundary
/// convention `arg` in `[0, pi)` (and `arg(0) = 0`). Values within tolerance
/// of the negative real axis flip to the positive side.
fn halfplane_sign(z: Complex64) -> f64 {
    if z == ZERO {
        return 1.0;
    }
    let tol_im = TOL_CANON * z.norm().max(1.0);
    if z.im < -tol_im {
        -1.0
    } else if z.im.abs() <= tol_im && z.re < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn in_halfplane(z: Complex64) -> bool {
    halfplane_sign(z) > 0.0
}

fn is_nonneg_real(z: Complex64) -> bool {
    let tol = TOL_CANON * z.norm().max(1.0);
    z.im.abs() <= tol && z.re >= -tol
}

/// Canonical form of a one-dimensional Pauli space on the tracial set.
pub fn canonicalize_line_tracial(ps: &PauliSpace) -> Result<Family, CanonicalError> {
    if ps.rank() != 1 {
        return Err(CanonicalError::RankMismatch {
            expected: 1,
            got: ps.rank(),
        });
    }
    let v = ps.space.basis()[0];
    let tail = CVec3::from([v.v[1], v.v[2], v.v[3]]);
    if tail.norm() < TOL_CANON {
        return Ok(Family::T1a);
    }
    let line = canonical_beta_c3(&tail)?;
    let beta = line.beta;
    let mut alpha = snap_zero(line.scalar * v.v[0], line.scalar.norm());
    if beta >= 1.0 - TOL_CANON {
        alpha = cr(alpha.norm());
    } else {
        alpha *= cr(halfplane_sign(alpha));
    }
    Ok(Family::T1b { alpha, beta })
}

/// Canonical form of a one-dimensional q-adjusted Pauli space.
pub fn canonicalize_line_nontracial(ps: &PauliSpace) -> Result<Family, CanonicalError> {
    if ps.rank() != 1 {
        return Err(CanonicalError::RankMismatch {
            expected: 1,
            got: ps.rank(),
        });
    }
    let v = ps.space.basis()[0];
    let mid = CVec2::from([v.v[1], v.v[2]]);
    if mid.norm() < TOL_CANON {
        return if v.v[3].norm() < TOL_CANON {
            Ok(Family::Nt1a)
        } else {
            Ok(Family::Nt1b {
                alpha: snap_zero(v.v[0] / v.v[3], 1.0 / v.v[3].norm()),
            })
        };
    }
    let line = canonical_beta_c2(&mid, LineGroup::So2)?;
    let beta = line.beta;
    let mut alpha = snap_zero(line.scalar * v.v[0], line.scalar.norm());
    let mut gamma = snap_zero(line.scalar * v.v[3], line.scalar.norm());
    if beta.abs() >= 1.0 - TOL_CANON {
        // the full circle acts on (alpha, gamma) jointly
        if alpha != ZERO {
            let phase = Complex64::from_polar(1.0, -alpha.arg());
            alpha = cr(alpha.norm());
            gamma *= phase;
        } else {
            gamma = cr(gamma.norm());
        }
    } else {
        let s = if alpha != ZERO {
            halfplane_sign(alpha)
        } else {
            halfplane_sign(gamma)
        };
        alpha *= cr(s);
        gamma *= cr(s);
    }
    Ok(Family::Nt1c { alpha, beta, gamma })
}

/// Splits a rank-2 subspace into its unique loop-orthogonal line `v` (first
/// coordinate zero) and an orthogonal completion `w` normalized to first
/// coordinate one.
fn split_plane(ps: &PauliSpace) -> Result<(CVec4, CVec4), CanonicalError> {
    if ps.rank() != 2 {
        return Err(CanonicalError::RankMismatch {
            expected: 2,
            got: ps.rank(),
        });
    }
    let b1 = ps.space.basis()[0];
    let b2 = ps.space.basis()[1];
    let v_raw = b1.scale(b2.v[0]).sub(&b2.scale(b1.v[0]));
    let vn = v_raw.norm();
    if vn < TOL_CANON {
        return Err(CanonicalError::IsLoopfree);
    }
    let v = v_raw.scale(cr(1.0 / vn));

    let mut w = b1.sub(&v.scale(v.dot(&b1)));
    if w.norm() < 0.5 {
        w = b2.sub(&v.scale(v.dot(&b2)));
    }
    if w.v[0].norm() < TOL_CANON {
        return Err(CanonicalError::IsLoopfree);
    }
    let w = w.scale(ONE / w.v[0]);
    Ok((v, w))
}

/// Canonical form of a non-loopfree plane on the tracial set.
pub fn canonicalize_plane_tracial(ps: &PauliSpace) -> Result<Family, CanonicalError> {
    let (v, w) = split_plane(ps)?;
    let tail = CVec3::from([v.v[1], v.v[2], v.v[3]]);
    let line = canonical_beta_c3(&tail)?;
    let beta = line.beta;

    // rotate the completion by the same witness; its first coordinate stays 1
    let wt = crate::lines::apply_rot3(&line.rotation, &CVec3::from([w.v[1], w.v[2], w.v[3]]));
    let mut gamma = snap_zero(wt.v[1], 1.0);
    let mut delta = snap_zero(wt.v[2], 1.0);

    if beta >= 1.0 - TOL_CANON {
        // gamma rotates freely on the circle, delta is pinned
        gamma = cr(gamma.norm());
    } else if beta > TOL_CANON {
        gamma *= cr(halfplane_sign(gamma));
    } else {
        // beta = 0: the full O(2) acts on (gamma, delta)
        let pair = CVec2::from([gamma, delta]);
        if pair.norm() >= TOL_CANON {
            let sub = canonical_beta_c2(&pair, LineGroup::O2)?;
            let eta = sub.beta;
            let kappa = ONE / sub.scalar;
            let kappa = if eta >= 1.0 - TOL_CANON {
                cr(kappa.norm())
            } else {
                kappa * cr(halfplane_sign(kappa))
            };
            gamma = kappa;
            delta = c(0.0, eta) * kappa;
        }
    }
    Ok(Family::T2 { beta, gamma, delta })
}

/// Canonical form of a non-loopfree plane on a nontracial set (q-adjusted
/// coordinates).
pub fn canonicalize_plane_nontracial(ps: &PauliSpace) -> Result<Family, CanonicalError> {
    let (v, w) = split_plane(ps)?;
    let mid = CVec2::from([v.v[1], v.v[2]]);

    if mid.norm() < TOL_CANON {
        // the distinguished line is the sigma_3^(q) axis; only an SO(2)
        // rotation of the completion's middle components remains
        let pair = CVec2::from([w.v[1], w.v[2]]);
        let x = [pair.v[0].re, pair.v[1].re];
        let y = [pair.v[0].im, pair.v[1].im];
        let xn = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let yn = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let (w1, w2) = if xn >= TOL_CANON {
            let dot = (x[0] * y[0] + x[1] * y[1]) / xn;
            let cross = (x[0] * y[1] - x[1] * y[0]) / xn;
            (c(xn, dot), c(0.0, cross))
        } else if yn >= TOL_CANON {
            (c(0.0, yn), ZERO)
        } else {
            (ZERO, ZERO)
        };
        return Ok(Family::Nt2Axis { w1, w2 });
    }

    let line = canonical_beta_c2(&mid, LineGroup::So2)?;
    let beta = line.beta;
    let mut delta = snap_zero(line.scalar * v.v[3], line.scalar.norm());
    let wt = crate::lines::apply_rot2(&line.rotation, &CVec2::from([w.v[1], w.v[2]]));
    let mut alpha = snap_zero(wt.v[1], 1.0);
    let gamma = snap_zero(w.v[3], 1.0);

    if beta.abs() >= 1.0 - TOL_CANON {
        if delta != ZERO {
            // spend the circle freedom pinning delta > 0; this acts on the
            // completion through the paired stabilizer rotation, which mixes
            // a gamma * conj(delta) cross term into alpha
            let lambda = Complex64::from_polar(1.0, -delta.arg());
            let (x, y) = (lambda.re, lambda.im);
            let stab = [[x, -beta.signum() * y], [beta.signum() * y, x]];
            let wt2 = crate::lines::apply_rot2(&stab, &CVec2::from([wt.v[0], wt.v[1]]));
            alpha = snap_zero(wt2.v[1], 1.0);
            delta = cr(delta.norm());
        } else if alpha != ZERO {
            alpha = cr(alpha.norm());
        }
    } else {
        let s = if delta != ZERO {
            halfplane_sign(delta)
        } else {
            halfplane_sign(alpha)
        };
        delta *= cr(s);
        alpha *= cr(s);
    }
    Ok(Family::Nt2 {
        alpha,
        beta,
        gamma,
        delta,
    })
}

/// The canonical form of an arbitrary quantum graph. Zero and four edges are
/// the empty and complete graphs; one-edge graphs and non-loopfree planes are
/// canonicalized directly; loopfree planes go through the loopfree
/// complement and three-edge graphs through the complement.
pub fn canonicalize(g: &QuantumGraph) -> Result<CanonicalForm, CanonicalError> {
    let qs = g.qset();
    let q = qs.q();
    let k = g.edge_count();
    let family = match k {
        0 => Family::Empty,
        4 => Family::Complete,
        1 => canonicalize_line(qs, g)?,
        2 => {
            if g.is_loopfree() {
                let lc = loopfree_complement(g)?;
                match canonicalize_line(qs, &lc)? {
                    Family::T1b { alpha, beta } if alpha.norm() < 1e-7 => Family::T2lc { beta },
                    Family::Nt1b { alpha } if alpha.norm() < 1e-7 => Family::Nt2lcB,
                    Family::Nt1c { alpha, beta, gamma } if alpha.norm() < 1e-7 => {
                        Family::Nt2lcC { beta, gamma }
                    }
                    _ => return Err(CanonicalError::ComplementMismatch(2)),
                }
            } else {
                let ps = to_pauli(qs, g.basis());
                if qs.is_tracial() {
                    canonicalize_plane_tracial(&ps)?
                } else {
                    canonicalize_plane_nontracial(&ps)?
                }
            }
        }
        3 => {
            let comp = complement(g);
            match canonicalize_line(qs, &comp)? {
                Family::T1a => Family::T3cA,
                Family::T1b { alpha, beta } => Family::T3cB { alpha, beta },
                Family::Nt1a => Family::Nt3cA,
                Family::Nt1b { alpha } => Family::Nt3cB { alpha },
                Family::Nt1c { alpha, beta, gamma } => Family::Nt3cC { alpha, beta, gamma },
                _ => return Err(CanonicalError::ComplementMismatch(3)),
            }
        }
        _ => unreachable!("edge counts are at most four"),
    };
    Ok(CanonicalForm {
        q,
        edge_count: k,
        family,
    })
}

fn canonicalize_line(qs: &QuantumSet, g: &QuantumGraph) -> Result<Family, CanonicalError> {
    let ps = to_pauli(qs, g.basis());
    if qs.is_tracial() {
        canonicalize_line_tracial(&ps)
    } else {
        canonicalize_line_nontracial(&ps)
    }
}

/// Isomorphism decision with the canonical pair as evidence.
pub fn is_isomorphic(
    g1: &QuantumGraph,
    g2: &QuantumGraph,
) -> Result<(bool, CanonicalForm, CanonicalForm), CanonicalError> {
    let cf1 = canonicalize(g1)?;
    let cf2 = canonicalize(g2)?;
    let same_set = (g1.qset().q() - g2.qset().q()).abs() <= TOL_Q;
    let verdict = same_set && cf1.equal_within(&cf2, TOL_CANON * 10.0);
    Ok((verdict, cf1, cf2))
}

/// Builds the representative quantum graph of a canonical form, after
/// validating the index-set conditions. The round trip
/// `canonicalize(realize(cf)) = cf` holds for every valid form.
pub fn realize(cf: &CanonicalForm) -> Result<QuantumGraph, CanonicalError> {
    let qs = QuantumSet::new(cf.q)?;
    validate(cf, &qs)?;
    let kind = PauliBasisKind::for_set(&qs);
    let coords_graph = |coords: &[CVec4]| -> Result<QuantumGraph, CanonicalError> {
        let spanners: Vec<Mat2> = coords.iter().map(|v| from_pauli_coords(kind, v)).collect();
        Ok(QuantumGraph::from_spanners(&qs, &spanners)?)
    };
    let graph = match cf.family {
        Family::Empty => QuantumGraph::empty(&qs),
        Family::Complete => QuantumGraph::complete(&qs),
        Family::T1a | Family::Nt1a => QuantumGraph::trivial(&qs),
        Family::T1b { alpha, beta } => {
            coords_graph(&[CVec4::from([alpha, ONE, c(0.0, beta), ZERO])])?
        }
        Family::T2 { beta, gamma, delta } => coords_graph(&[
            CVec4::from([ZERO, ONE, c(0.0, beta), ZERO]),
            CVec4::from([ONE, c(0.0, beta) * gamma, gamma, delta]),
        ])?,
        Family::Nt1b { alpha } => coords_graph(&[CVec4::from([alpha, ZERO, ZERO, ONE])])?,
        Family::Nt1c { alpha, beta, gamma } => {
            coords_graph(&[CVec4::from([alpha, ONE, c(0.0, beta), gamma])])?
        }
        Family::Nt2 {
            alpha,
            beta,
            gamma,
            delta,
        } => coords_graph(&[
            CVec4::from([ZERO, ONE, c(0.0, beta), delta]),
            CVec4::from([
                ONE,
                c(0.0, beta) * alpha - gamma * delta.conj(),
                alpha,
                gamma,
            ]),
        ])?,
        Family::Nt2Axis { w1, w2 } => coords_graph(&[
            CVec4::from([ZERO, ZERO, ZERO, ONE]),
            CVec4::from([ONE, w1, w2, ZERO]),
        ])?,
        Family::T2lc { beta } => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::T1b { alpha: ZERO, beta },
            })?;
            loopfree_complement(&inner)?
        }
        Family::Nt2lcB => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::Nt1b { alpha: ZERO },
            })?;
            loopfree_complement(&inner)?
        }
        Family::Nt2lcC { beta, gamma } => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::Nt1c {
                    alpha: ZERO,
                    beta,
                    gamma,
                },
            })?;
            loopfree_complement(&inner)?
        }
        Family::T3cA | Family::Nt3cA => complement(&QuantumGraph::trivial(&qs)),
        Family::T3cB { alpha, beta } => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::T1b { alpha, beta },
            })?;
            complement(&inner)
        }
        Family::Nt3cB { alpha } => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::Nt1b { alpha },
            })?;
            complement(&inner)
        }
        Family::Nt3cC { alpha, beta, gamma } => {
            let inner = realize(&CanonicalForm {
                q: cf.q,
                edge_count: 1,
                family: Family::Nt1c { alpha, beta, gamma },
            })?;
            complement(&inner)
        }
    };
    if graph.edge_count() != cf.edge_count {
        return Err(CanonicalError::InvalidParameters(format!(
            "edge count {} does not match the family's {}",
            cf.edge_count,
            graph.edge_count()
        )));
    }
    Ok(graph)
}

fn validate(cf: &CanonicalForm, qs: &QuantumSet) -> Result<(), CanonicalError> {
    let tracial = qs.is_tracial();
    let fail = |msg: String| Err(CanonicalError::InvalidParameters(msg));
    let family_is_tracial = matches!(
        cf.family,
        Family::T1a
            | Family::T1b { .. }
            | Family::T2 { .. }
            | Family::T2lc { .. }
            | Family::T3cA
            | Family::T3cB { .. }
    );
    let family_is_universal = matches!(cf.family, Family::Empty | Family::Complete);
    if !family_is_universal && family_is_tracial != tracial {
        return fail(format!(
            "family {} does not live on q = {}",
            cf.family.name(),
            cf.q
        ));
    }
    match cf.family {
        Family::T1b { alpha, beta } | Family::T3cB { alpha, beta } => {
            if !(0.0..=1.0).contains(&beta) {
                return fail(format!("beta = {beta} outside [0,1]"));
            }
            if beta >= 1.0 - TOL_CANON {
                if !is_nonneg_real(alpha) {
                    return fail(format!("beta = 1 requires alpha >= 0, got {alpha}"));
                }
            } else if !in_halfplane(alpha) {
                return fail(format!("arg(alpha) outside [0, pi): {alpha}"));
            }
        }
        Family::T2lc { beta } => {
            if !(0.0..=1.0).contains(&beta) {
                return fail(format!("beta = {beta} outside [0,1]"));
            }
        }
        Family::T2 { beta, gamma, delta } => {
            if !(0.0..=1.0).contains(&beta) {
                return fail(format!("beta = {beta} outside [0,1]"));
            }
            if beta >= 1.0 - TOL_CANON {
                if !is_nonneg_real(gamma) {
                    return fail(format!("beta = 1 requires gamma >= 0, got {gamma}"));
                }
            } else if beta > TOL_CANON {
                if !in_halfplane(gamma) {
                    return fail(format!("arg(gamma) outside [0, pi): {gamma}"));
                }
            } else {
                // beta = 0: delta = i eta gamma with eta in [0, 1]
                let scale = gamma.norm().max(delta.norm());
                if scale >= TOL_CANON {
                    if gamma.norm() < TOL_CANON * scale.max(1.0) {
                        return fail(format!(
                            "beta = 0 requires |delta| <= |gamma|, got gamma = {gamma}, delta = {delta}"
                        ));
                    }
                    let eta = delta / (c(0.0, 1.0) * gamma);
                    let tol = 1e-7;
                    if eta.im.abs() > tol || !(-tol..=1.0 + tol).contains(&eta.re) {
                        return fail(format!(
                            "beta = 0 requires delta = i eta gamma with eta in [0,1], got eta = {eta}"
                        ));
                    }
                    if eta.re >= 1.0 - tol {
                        if !is_nonneg_real(gamma) {
                            return fail(format!(
                                "beta = 0 with |delta| = |gamma| requires gamma >= 0, got {gamma}"
                            ));
                        }
                    } else if !in_halfplane(gamma) {
                        return fail(format!("arg(gamma) outside [0, pi): {gamma}"));
                    }
                }
            }
        }
        Family::Nt1c { alpha, beta, gamma } | Family::Nt3cC { alpha, beta, gamma } => {
            validate_nt1c(alpha, beta, gamma)?;
        }
        Family::Nt2lcC { beta, gamma } => {
            validate_nt1c(ZERO, beta, gamma)?;
        }
        Family::Nt2 {
            alpha,
            beta,
            delta,
            ..
        } => {
            if !(-1.0..=1.0).contains(&beta) {
                return fail(format!("beta = {beta} outside [-1,1]"));
            }
            if beta.abs() >= 1.0 - TOL_CANON {
                if delta.norm() >= TOL_CANON {
                    if !is_nonneg_real(delta) {
                        return fail(format!(
                            "beta = +-1 with delta != 0 requires delta > 0, got {delta}"
                        ));
                    }
                } else if !is_nonneg_real(alpha) {
                    return fail(format!(
                        "beta = +-1 with delta = 0 requires alpha >= 0, got {alpha}"
                    ));
                }
            } else if delta.norm() >= TOL_CANON {
                if !in_halfplane(delta) {
                    return fail(format!("arg(delta) outside [0, pi): {delta}"));
                }
            } else if !in_halfplane(alpha) {
                return fail(format!("arg(alpha) outside [0, pi): {alpha}"));
            }
        }
        Family::Nt2Axis { w1, w2 } => {
            let tol = TOL_CANON * (w1.norm() + w2.norm()).max(1.0);
            let ok = if w1.re.abs() >= tol {
                w1.re > 0.0 && w2.re.abs() <= tol
            } else if w1.im.abs() >= tol {
                w1.im > 0.0 && w2.norm() <= tol
            } else {
                w2.norm() <= tol
            };
            if !ok {
                return fail(format!(
                    "axis-plane completion not in canonical position: w1 = {w1}, w2 = {w2}"
                ));
            }
        }
        _ => {}
    }
    Ok(())
}

fn validate_nt1c(alpha: Complex64, beta: f64, gamma: Complex64) -> Result<(), CanonicalError> {
    let fail = |msg: String| Err(CanonicalError::InvalidParameters(msg));
    if !(-1.0..=1.0).contains(&beta) {
        return fail(format!("beta = {beta} outside [-1,1]"));
    }
    if beta.abs() >= 1.0 - TOL_CANON {
        if alpha.norm() >= TOL_CANON {
            if !is_nonneg_real(alpha) {
                return fail(format!(
                    "beta = +-1 with alpha != 0 requires alpha > 0, got {alpha}"
                ));
            }
        } else if !is_nonneg_real(gamma) {
            return fail(format!(
                "beta = +-1 with alpha = 0 requires gamma >= 0, got {gamma}"
            ));
        }
    } else if alpha.norm() >= TOL_CANON {
        if !in_halfplane(alpha) {
            return fail(format!("arg(alpha) outside [0, pi): {alpha}"));
        }
    } else if !in_halfplane(gamma) {
        return fail(format!("arg(gamma) outside [0, pi): {gamma}"));
    }
    Ok(())
}

/// The representative edge-space spanner of the one-edge families, used by
/// tests and examples.
pub fn one_edge_spanner(qs: &QuantumSet, family: &Family) -> Option<Mat2> {
    match *family {
        Family::T1b { alpha, beta } => {
            Some(sigma0().scale(alpha) + sigma1() + sigma2().scale(c(0.0, beta)))
        }
        Family::Nt1b { alpha } => Some(sigma0().scale(alpha) + sigma3_q(qs.q())),
        Family::Nt1c { alpha, beta, gamma } => Some(
            sigma0().scale(alpha)
                + sigma1()
                + sigma2().scale(c(0.0, beta))
                + sigma3_q(qs.q()).scale(gamma),
        ),
        _ => None,
    }
}
