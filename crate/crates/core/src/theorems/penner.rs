//! Horospheres whose centres lie on the ideal boundary of a hyperplane.

use super::{pairwise_matrix, unit_witness};
use crate::error::{GeomError, Result};
use crate::lorentz::{
    check_tol, codim1_test, degeneracy, lorentz_complement, max_abs, spacelike_in_span, DegeneracyVerdict,
    LorentzVector,
};
use crate::objects::{lambda_length, same_centre, CoHyperplane, Horosphere};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PennerVerdict {
    pub verdict: DegeneracyVerdict,
    /// Hyperplane whose ideal boundary contains every centre.
    pub witness: Option<CoHyperplane>,
    /// `max_i |⟨rep_i, normal⟩|`, relative to the largest representative coordinate.
    pub witness_residual: Option<f64>,
    /// All horospheres share one centre; every hyperplane through it works.
    pub same_centre: bool,
}

/// `A_{ij} = λ(Σ_i, Σ_j)²`.
pub fn penner_matrix(hs: &[Horosphere]) -> DMatrix<f64> {
    pairwise_matrix(hs.len(), |i, j| {
        let l = lambda_length(&hs[i], &hs[j]);
        l * l
    })
}

fn check_family(hs: &[Horosphere]) -> Result<usize> {
    let first = hs.first().ok_or(GeomError::WrongCount { expected: 3, got: 0 })?;
    let n = first.dim();
    if let Some(h) = hs.iter().find(|h| h.dim() != n) {
        return Err(GeomError::DimensionMismatch { expected: n, got: h.dim() });
    }
    if hs.len() != n + 1 {
        return Err(GeomError::WrongCount { expected: n + 1, got: hs.len() });
    }
    Ok(n)
}

pub fn penner_test(hs: &[Horosphere], tol: f64) -> Result<PennerVerdict> {
    check_tol(tol)?;
    check_family(hs)?;
    let verdict = degeneracy(&penner_matrix(hs), tol)?;
    let all_same = hs.iter().all(|h| same_centre(h, &hs[0]));
    if !verdict.is_degenerate {
        return Ok(PennerVerdict {
            verdict,
            witness: None,
            witness_residual: None,
            same_centre: all_same,
        });
    }
    let reps: Vec<LorentzVector> = hs.iter().map(|h| h.rep().normalized_max()).collect();
    let normal = if all_same {
        // Any hyperplane through the shared centre: a spacelike vector
        // orthogonal to the common lightlike representative.
        let rep = reps[0].coords().to_vec();
        spacelike_in_span(&lorentz_complement(std::slice::from_ref(&rep), tol, rep.len() - 1), tol)
            .map(LorentzVector::from_vec)
    } else {
        codim1_test(&reps, tol)?.normal
    };
    let witness = normal.and_then(|w| unit_witness(w.coords()));
    let witness_residual = witness.as_ref().map(|w| {
        hs.iter()
            .map(|h| h.rep().dot(w.normal()).abs() / max_abs(h.rep().coords()))
            .fold(0.0, f64::max)
    });
    Ok(PennerVerdict {
        verdict,
        witness,
        witness_residual,
        same_centre: all_same,
    })
}
