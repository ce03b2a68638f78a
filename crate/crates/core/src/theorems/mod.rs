//! Gram-determinant decision procedures and their converse classifiers.

mod casey;
mod penner;
mod ptolemy;
mod relation;

pub use casey::{
    casey_classify, casey_matrix, casey_test, casey_witness_check, corollary_d_matrix,
    corollary_d_test, CaseyCase, CaseyVerdict, CorollaryDVerdict, EuclideanCase, WitnessReport,
    MAX_SIGN_SEARCH, WITNESS_TOL,
};
pub use penner::{penner_matrix, penner_test, PennerVerdict};
pub use ptolemy::{
    fit_umbilical, ptolemy1_test, ptolemy2_classify, ptolemy2_test, ptolemy_matrix, PtolemyVerdict,
    SurfaceKind, UmbilicalFit, UmbilicalSurface,
};
pub use relation::{four_term_factorization, four_term_relation, Alternative, FourTermRelation};

use crate::lorentz::LorentzVector;
use crate::objects::CoHyperplane;
use nalgebra::DMatrix;

/// Symmetric matrix with zero diagonal and `M_{ij} = f(i,j)` for `i < j`.
pub(crate) fn pairwise_matrix(m: usize, f: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            let v = f(i, j);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Unit spacelike hyperplane normal with its first nonzero coordinate positive.
pub(crate) fn unit_witness(w: &[f64]) -> Option<CoHyperplane> {
    let v = LorentzVector::from_vec(w.to_vec());
    if v.norm_sq() <= 0.0 {
        return None;
    }
    CoHyperplane::new(v.normalized_unit()?.sign_normalized()).ok()
}
