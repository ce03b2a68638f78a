//! The three-alternative Ptolemy/Penner relation on four objects.

use crate::error::{GeomError, Result};
use serde::Serialize;

/// Which product equals the sum of the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Alternative {
    /// `x₁₂x₃₄ = x₁₃x₂₄ + x₁₄x₂₃`
    Alt12_34,
    /// `x₁₃x₂₄ = x₁₂x₃₄ + x₁₄x₂₃`
    Alt13_24,
    /// `x₁₄x₂₃ = x₁₂x₃₄ + x₁₃x₂₄`
    Alt14_23,
    None,
}

const ORDER: [Alternative; 3] = [
    Alternative::Alt12_34,
    Alternative::Alt13_24,
    Alternative::Alt14_23,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourTermRelation {
    pub which: Alternative,
    /// `[x₁₂x₃₄, x₁₃x₂₄, x₁₄x₂₃]`
    pub products: [f64; 3],
    /// Residual of the selected alternative, or the smallest one when none holds.
    pub residual: f64,
    /// Residual `|p_k − Σ_{j≠k} p_j|` of every alternative.
    pub residuals: [f64; 3],
}

impl FourTermRelation {
    /// All alternatives holding within `tol·(p₁+p₂+p₃)`.
    pub fn alternatives_within(&self, tol: f64) -> Vec<Alternative> {
        let bound = tol * self.products.iter().sum::<f64>();
        ORDER
            .iter()
            .zip(&self.residuals)
            .filter(|(_, &r)| r <= bound)
            .map(|(a, _)| *a)
            .collect()
    }
}

fn validate(x: &[[f64; 4]; 4]) -> Result<()> {
    for i in 0..4 {
        if x[i][i] != 0.0 {
            return Err(GeomError::InvalidObject(format!(
                "diagonal entry {i} must be zero, got {}",
                x[i][i]
            )));
        }
        for j in 0..4 {
            let v = x[i][j];
            if !v.is_finite() {
                return Err(GeomError::InvalidObject("non-finite entry".into()));
            }
            if v < 0.0 {
                return Err(GeomError::NegativeInput(v));
            }
            if (v - x[j][i]).abs() > 1e-12 * v.abs().max(x[j][i].abs()).max(1.0) {
                return Err(GeomError::NotSymmetric {
                    asymmetry: (v - x[j][i]).abs(),
                });
            }
        }
    }
    Ok(())
}

fn products(x: &[[f64; 4]; 4]) -> [f64; 3] {
    [x[0][1] * x[2][3], x[0][2] * x[1][3], x[0][3] * x[1][2]]
}

/// Finds the alternative whose product is the sum of the other two. Among
/// several within tolerance the smallest residual wins, exact ties going to
/// the earlier alternative.
pub fn four_term_relation(x: &[[f64; 4]; 4], tol: f64) -> Result<FourTermRelation> {
    crate::lorentz::check_tol(tol)?;
    validate(x)?;
    let p = products(x);
    let total: f64 = p.iter().sum();
    let residuals = [
        (p[0] - p[1] - p[2]).abs(),
        (p[1] - p[0] - p[2]).abs(),
        (p[2] - p[0] - p[1]).abs(),
    ];
    let mut best = 0;
    for k in 1..3 {
        if residuals[k] < residuals[best] {
            best = k;
        }
    }
    let which = if residuals[best] <= tol * total {
        ORDER[best]
    } else {
        Alternative::None
    };
    Ok(FourTermRelation {
        which,
        products: p,
        residual: residuals[best],
        residuals,
    })
}

/// Closed form of the determinant of the 4×4 matrix with entries `x_{ij}²`:
/// `−(a+b+c)(a+b−c)(a−b+c)(−a+b+c)` with `a = x₁₄x₂₃`, `b = x₁₃x₂₄`,
/// `c = x₁₂x₃₄`.
pub fn four_term_factorization(x: &[[f64; 4]; 4]) -> f64 {
    let [c, b, a] = products(x);
    -(a + b + c) * (a + b - c) * (a - b + c) * (-a + b + c)
}
