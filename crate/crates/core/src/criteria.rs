//! Positivity and separability certificates.
//!
//! Both criteria are inequality tests on the global invariants: a state is
//! positive iff
//!
//! ```text
//!     A2 - A1 + A0 <= 1,   2 A2 - A1 <= 4,   A2 <= 6,
//! ```
//!
//! and separable iff the analogous inequalities hold for its PPT transform
//! (s, t, C) -> (-s, t, -C), which is unitarily equivalent to the partial
//! transpose and therefore decides separability for two qubits:
//!
//! ```text
//!     A2 - A1 + A0 <= 1 + 16 det E,   2 A2 - A1 <= 4 + 16 det C,   A2 <= 6.
//! ```
//!
//! Every report also carries the minimum eigenvalue from a direct
//! eigensolve. The two routes are redundant by construction, so a clear
//! disagreement means numerical pathology and is reported as an error
//! rather than silently resolved.

use crate::error::{Error, Result};
use crate::invariants::{entanglement_dyadic, global_invariants, positivity_inequalities};
use crate::statecore::PauliRep;

/// Outcome of a positivity or separability test: the three signed
/// inequality margins, with the eigenvalue oracle alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionReport {
    /// All margins >= -tol.
    pub satisfied: bool,
    /// Signed slack of the three inequalities.
    pub margins: [f64; 3],
    /// Minimum eigenvalue of the tested matrix (the state itself for
    /// positivity, its PPT transform for separability).
    pub min_eigenvalue: f64,
    /// Number of eigenvalues below -tol; at most one for the PPT
    /// transform of a positive state.
    pub negative_count: usize,
}

/// Margin flicker within this many tolerances of the boundary is treated
/// as legitimate; a verdict disagreement outside it is a hard error.
const CROSS_CHECK_GUARD: f64 = 100.0;

/// The PPT transform (-s, t, -C). An involution; positivity of the
/// result decides separability.
pub fn ppt_transform(p: &PauliRep) -> PauliRep {
    PauliRep {
        s: crate::statecore::BlochVector(-p.s.0),
        t: p.t,
        c: crate::statecore::CrossDyadic(-p.c.0),
    }
}

/// The spin-flip transform (-s, -t, C). An involution; the flipped state
/// has the same spectrum as the original and enters the concurrence.
pub fn spin_flip(p: &PauliRep) -> PauliRep {
    PauliRep {
        s: crate::statecore::BlochVector(-p.s.0),
        t: crate::statecore::BlochVector(-p.t.0),
        c: p.c,
    }
}

fn report(margins: [f64; 3], eigs: [f64; 4], tol: f64) -> Result<CriterionReport> {
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let min_eigenvalue = eigs[0];
    let satisfied = min_margin >= -tol;
    let eigen_verdict = min_eigenvalue >= -tol;
    if satisfied != eigen_verdict && (min_eigenvalue + tol).abs() > CROSS_CHECK_GUARD * tol {
        return Err(Error::CrossCheckMismatch {
            margins_verdict: satisfied,
            eigen_verdict,
            min_margin,
            min_eigenvalue,
        });
    }
    Ok(CriterionReport {
        satisfied,
        margins,
        min_eigenvalue,
        negative_count: eigs.iter().filter(|e| **e < -tol).count(),
    })
}

/// Tests positivity through the inequality margins, cross-checked against
/// the eigenvalues of the density matrix.
pub fn is_positive(p: &PauliRep, tol: f64) -> Result<CriterionReport> {
    let margins = positivity_inequalities(&global_invariants(p));
    let eigs = p.to_matrix().eigenvalues();
    report(margins, eigs, tol)
}

/// Tests separability of a positive state through the PPT inequality
/// margins, cross-checked against the PPT-transform eigenvalues.
/// Indefinite inputs are refused.
pub fn is_separable(p: &PauliRep, tol: f64) -> Result<CriterionReport> {
    let positive = is_positive(p, tol)?;
    if !positive.satisfied {
        return Err(Error::NotPositive {
            min_eigenvalue: positive.min_eigenvalue,
        });
    }
    let margins = separability_margins(p);
    let eigs = ppt_transform(p).to_matrix().eigenvalues();
    report(margins, eigs, tol)
}

/// The three separability margins
/// (1 + 16 det E - (A2 - A1 + A0), 4 + 16 det C - (2 A2 - A1), 6 - A2),
/// identical to the positivity margins of the PPT transform.
pub fn separability_margins(p: &PauliRep) -> [f64; 3] {
    let g = global_invariants(p);
    let det_c = p.c.determinant();
    let det_e = entanglement_dyadic(p).0.determinant();
    [
        1.0 + 16.0 * det_e - (g.a2 - g.a1 + g.a0),
        4.0 + 16.0 * det_c - (2.0 * g.a2 - g.a1),
        6.0 - g.a2,
    ]
}

/// Rank and negative-eigenvalue count of the PPT transform of a positive
/// state. A non-separable state always yields rank 3 or 4 with exactly
/// one negative eigenvalue.
pub fn ppt_rank_profile(p: &PauliRep, tol: f64) -> Result<(usize, usize)> {
    let positive = is_positive(p, tol)?;
    if !positive.satisfied {
        return Err(Error::NotPositive {
            min_eigenvalue: positive.min_eigenvalue,
        });
    }
    let eigs = ppt_transform(p).to_matrix().eigenvalues();
    let rank = eigs.iter().filter(|e| e.abs() > tol).count();
    let negative = eigs.iter().filter(|e| **e < -tol).count();
    Ok((rank, negative))
}
