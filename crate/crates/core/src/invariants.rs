//! Unitary and local polynomial invariants of a two-qubit state.
//!
//! The eigenvalues of the traceless operator K = 1 - 4P solve the quartic
//!
//! ```text
//!     kappa^4 - A2 kappa^2 + A1 kappa - A0 = 0,
//! ```
//!
//! so (A2, A1, A0) are invariant under every unitary. They are always
//! computed from matrix traces of K,
//!
//! ```text
//!     A2 = Tr[K^2]/2,  A1 = -Tr[K^3]/3,  A0 = Tr[K^4]/4 - Tr[K^2]^2/8,
//! ```
//!
//! which is the authoritative route in this crate. A closed form in
//! (s, t, C) is provided as a diagnostics cross-check; note that the
//! widely quoted version of that formula has the overall sign of A1
//! flipped and omits a -2 Tr[(C^T C)^2] term in A0, which direct
//! evaluation on the singlet (K spectrum {-3,1,1,1}, so A1 = +8, A0 = 3)
//! exposes immediately. The corrected form below is verified against the
//! trace route by tests.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat4};
use crate::statecore::PauliRep;

/// Coefficients of the characteristic quartic of K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalInvariants {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

/// The nine local polynomial invariants of degree four or lower.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalInvariantVector {
    /// Tr(C^T C)
    pub tr_ctc: f64,
    /// det C
    pub det_c: f64,
    /// Tr[(C^T C)^2]
    pub tr_ctc_sq: f64,
    /// s.s
    pub s_sq: f64,
    /// t.t
    pub t_sq: f64,
    /// s.C.t
    pub s_c_t: f64,
    /// s.(C C^T).s
    pub s_cct_s: f64,
    /// t.(C^T C).t
    pub t_ctc_t: f64,
    /// det E
    pub det_e: f64,
}

/// The entanglement dyadic E = C - s t^T; it vanishes exactly for
/// product states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementDyadic(pub Matrix3<f64>);

/// The three root parameters of the Appendix parameterization
/// kappa_{1,2} = +-(l1 - l2) - l3, kappa_{3,4} = -+(l1 + l2) + l3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaTriple {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl GlobalInvariants {
    /// Trace route on an explicit Hermitian traceless 4x4 matrix.
    pub fn from_k_matrix(k: &CMat4) -> Self {
        let k2 = k * k;
        let k3 = k2 * k;
        let k4 = k2 * k2;
        let tr2 = k2.trace().re;
        let tr3 = k3.trace().re;
        let tr4 = k4.trace().re;
        GlobalInvariants {
            a2: 0.5 * tr2,
            a1: -tr3 / 3.0,
            a0: 0.25 * tr4 - 0.125 * tr2 * tr2,
        }
    }
}

/// Global invariants of a state, via traces of K = 1 - 4P.
pub fn global_invariants(p: &PauliRep) -> GlobalInvariants {
    GlobalInvariants::from_k_matrix(&p.k_operator())
}

/// Closed form of the global invariants in (s, t, C). Diagnostics only;
/// `global_invariants` is the route of record. See the module docs for
/// the sign corrections relative to the commonly printed expression.
pub fn closed_form_invariants(p: &PauliRep) -> GlobalInvariants {
    let v = local_invariants(p);
    let a2 = 2.0 * v.tr_ctc + 2.0 * (v.s_sq + v.t_sq);
    let a1 = -8.0 * v.det_c + 8.0 * v.s_c_t;
    let a0 = -(0.5 * a2) * (0.5 * a2) + 2.0 * v.tr_ctc * v.tr_ctc - 2.0 * v.tr_ctc_sq
        + 4.0 * v.s_sq * v.t_sq
        + 4.0 * v.s_cct_s
        + 4.0 * v.t_ctc_t
        + 8.0 * v.det_e
        - 8.0 * v.det_c;
    GlobalInvariants { a2, a1, a0 }
}

/// The nine local polynomial invariants.
pub fn local_invariants(p: &PauliRep) -> LocalInvariantVector {
    let c = &p.c.0;
    let s = &p.s.0;
    let t = &p.t.0;
    let ctc = c.transpose() * c;
    let cct = c * c.transpose();
    LocalInvariantVector {
        tr_ctc: ctc.trace(),
        det_c: c.determinant(),
        tr_ctc_sq: (ctc * ctc).trace(),
        s_sq: s.norm_squared(),
        t_sq: t.norm_squared(),
        s_c_t: (s.transpose() * c * t)[0],
        s_cct_s: (s.transpose() * cct * s)[0],
        t_ctc_t: (t.transpose() * ctc * t)[0],
        det_e: entanglement_dyadic(p).0.determinant(),
    }
}

impl LocalInvariantVector {
    pub fn as_array(&self) -> [f64; 9] {
        [
            self.tr_ctc,
            self.det_c,
            self.tr_ctc_sq,
            self.s_sq,
            self.t_sq,
            self.s_c_t,
            self.s_cct_s,
            self.t_ctc_t,
            self.det_e,
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// E = C - s t^T.
pub fn entanglement_dyadic(p: &PauliRep) -> EntanglementDyadic {
    EntanglementDyadic(p.c.0 - p.s.0 * p.t.0.transpose())
}

/// Relative tolerance for declaring a quartic root real: imaginary parts
/// up to 1e-8 times the largest root magnitude are rounding noise of the
/// companion-matrix eigensolve.
const ROOT_IMAG_REL_TOL: f64 = 1e-8;

/// Backward-error tolerance for the realness rescue of clustered roots.
/// A multiple real root scatters companion eigenvalues by O(eps^(1/m))
/// with imaginary parts far above `ROOT_IMAG_REL_TOL`; projecting such a
/// root onto the real axis leaves a polynomial residual that is rounding
/// noise, while a genuinely complex pair leaves an O(Im^2) residual.
const ROOT_BACKWARD_TOL: f64 = 1e-11;

/// The four real roots of kappa^4 - A2 kappa^2 + A1 kappa - A0, sorted
/// ascending. Fails when a complex pair appears, which signals that the
/// coefficients did not come from a Hermitian K.
pub fn quartic_roots(g: &GlobalInvariants) -> Result<[f64; 4]> {
    let roots = linalg::quartic_depressed_roots(g.a2, g.a1, g.a0);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let poly = |x: f64| ((x * x - g.a2) * x + g.a1) * x - g.a0;
    let coeff_scale = |x: f64| {
        let ax = x.abs();
        let x2 = ax * ax;
        x2 * x2 + g.a2.abs() * x2 + g.a1.abs() * ax + g.a0.abs() + 1.0
    };

    let mut out = [0.0f64; 4];
    let mut max_imag = 0.0f64;
    for (slot, z) in out.iter_mut().zip(roots.iter()) {
        let is_real = z.im.abs() <= ROOT_IMAG_REL_TOL * scale
            || poly(z.re).abs() <= ROOT_BACKWARD_TOL * coeff_scale(z.re);
        if !is_real {
            max_imag = max_imag.max(z.im.abs());
        }
        *slot = z.re;
    }
    if max_imag > 0.0 {
        return Err(Error::ComplexRoots { max_imag });
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Collapse eigenvalue clusters born from multiple roots onto their
    // centroid; the scatter is O(eps^(1/m)) but the centroid cancels it.
    // The residual gate keeps genuinely distinct roots untouched.
    let cluster_gap = 2e-3 * scale;
    let mut i = 0;
    while i < 4 {
        let mut j = i;
        while j + 1 < 4 && out[j + 1] - out[j] <= cluster_gap {
            j += 1;
        }
        if j > i {
            let mean = out[i..=j].iter().sum::<f64>() / (j - i + 1) as f64;
            if poly(mean).abs() <= ROOT_BACKWARD_TOL * coeff_scale(mean) {
                out[i..=j].iter_mut().for_each(|r| *r = mean);
            }
        }
        i = j + 1;
    }
    Ok(out)
}

/// Signed slack of the positivity inequalities:
/// (1 - A2 + A1 - A0, 4 - 2 A2 + A1, 6 - A2). All non-negative iff every
/// root of the quartic is <= 1 (given real roots); the first margin equals
/// the product (1-k1)(1-k2)(1-k3)(1-k4).
pub fn positivity_inequalities(g: &GlobalInvariants) -> [f64; 3] {
    [
        1.0 - g.a2 + g.a1 - g.a0,
        4.0 - 2.0 * g.a2 + g.a1,
        6.0 - g.a2,
    ]
}

/// Tolerance on the root sum for the lambda parameterization.
const ROOT_SUM_TOL: f64 = 1e-8;

/// The (l1, l2, l3) parameterization of four traceless roots, taken in
/// input order: l1 = (k1+k4)/2, l2 = (k2+k4)/2, l3 = (k3+k4)/2.
pub fn lambda_parameterization(roots: &[f64; 4]) -> Result<LambdaTriple> {
    let sum: f64 = roots.iter().sum();
    let scale = roots.iter().map(|r| r.abs()).fold(1.0, f64::max);
    if sum.abs() > ROOT_SUM_TOL * scale {
        return Err(Error::RootSumNonzero { sum });
    }
    Ok(LambdaTriple {
        l1: 0.5 * (roots[0] + roots[3]),
        l2: 0.5 * (roots[1] + roots[3]),
        l3: 0.5 * (roots[2] + roots[3]),
    })
}

impl LambdaTriple {
    /// Rebuilds the roots: (l1-l2)-l3, -(l1-l2)-l3, -(l1+l2)+l3, (l1+l2)+l3.
    /// The sum is zero by construction.
    pub fn reconstruct_roots(&self) -> [f64; 4] {
        [
            (self.l1 - self.l2) - self.l3,
            -(self.l1 - self.l2) - self.l3,
            -(self.l1 + self.l2) + self.l3,
            (self.l1 + self.l2) + self.l3,
        ]
    }

    /// The quartic coefficients implied by the parameterization:
    /// A2 = 2(l1^2+l2^2+l3^2), A1 = -8 l1 l2 l3,
    /// A0 = 2(l1^2 l2^2 + l2^2 l3^2 + l3^2 l1^2) - (l1^4 + l2^4 + l3^4).
    pub fn implied_invariants(&self) -> GlobalInvariants {
        let (a, b, c) = (self.l1, self.l2, self.l3);
        let (a2, b2, c2) = (a * a, b * b, c * c);
        GlobalInvariants {
            a2: 2.0 * (a2 + b2 + c2),
            a1: -8.0 * a * b * c,
            a0: 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statecore::{pure_state, random_state, BlochVector, CrossDyadic, RandomMeasure};

    fn counterexample_pair() -> (PauliRep, PauliRep) {
        // Two class-F states that share all nine local invariants:
        // both have C = diag(1/2, 1/4, 0), t = 0, and s of length
        // sqrt(5)/4 distributed differently over the axes.
        let c = CrossDyadic::diagonal(0.5, 0.25, 0.0);
        let p1 = PauliRep::new(BlochVector::new(0.25, 0.0, 0.5), BlochVector::zero(), c).unwrap();
        let p2 = PauliRep::new(BlochVector::new(0.0, 0.5, 0.25), BlochVector::zero(), c).unwrap();
        (p1, p2)
    }

    #[test]
    fn bell_invariants_are_6_8_3() {
        let g = global_invariants(&PauliRep::bell());
        assert!((g.a2 - 6.0).abs() < 1e-12);
        assert!((g.a1 - 8.0).abs() < 1e-12);
        assert!((g.a0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chaotic_invariants_vanish() {
        let g = global_invariants(&PauliRep::chaotic());
        assert!(g.a2.abs() < 1e-14 && g.a1.abs() < 1e-14 && g.a0.abs() < 1e-14);
    }

    #[test]
    fn every_pure_state_has_bell_invariants() {
        for p in [0.0, 0.3, 0.77, 1.0] {
            let g = global_invariants(&pure_state(p).unwrap());
            assert!((g.a2 - 6.0).abs() < 1e-11);
            assert!((g.a1 - 8.0).abs() < 1e-11);
            assert!((g.a0 - 3.0).abs() < 1e-11);
        }
    }

    #[test]
    fn closed_form_matches_trace_route() {
        for seed in 0..50 {
            let p = random_state(seed, RandomMeasure::HilbertSchmidt).unwrap();
            let g = global_invariants(&p);
            let c = closed_form_invariants(&p);
            assert!((g.a2 - c.a2).abs() < 1e-10, "A2 mismatch at seed {seed}");
            assert!((g.a1 - c.a1).abs() < 1e-10, "A1 mismatch at seed {seed}");
            assert!((g.a0 - c.a0).abs() < 1e-10, "A0 mismatch at seed {seed}");
        }
    }

    #[test]
    fn bell_local_invariants() {
        let v = local_invariants(&PauliRep::bell());
        let expected = [3.0, -1.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0];
        for (a, b) in v.as_array().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn counterexample_states_share_local_invariants() {
        let (p1, p2) = counterexample_pair();
        assert!(local_invariants(&p1).max_abs_diff(&local_invariants(&p2)) < 1e-12);
    }

    #[test]
    fn entanglement_dyadic_examples() {
        let prod = crate::statecore::product_state(
            BlochVector::new(0.3, -0.4, 0.1),
            BlochVector::new(0.0, 0.5, 0.5),
        )
        .unwrap();
        assert!(entanglement_dyadic(&prod).0.amax() < 1e-15);

        let e = entanglement_dyadic(&PauliRep::bell()).0;
        assert!((e + Matrix3::identity()).amax() < 1e-15);

        let e = entanglement_dyadic(&pure_state(0.6).unwrap()).0;
        let want = Matrix3::from_diagonal(&nalgebra::Vector3::new(-0.64, -0.8, -0.8));
        assert!((e - want).amax() < 1e-15);
    }

    #[test]
    fn quartic_roots_examples() {
        let roots = quartic_roots(&GlobalInvariants {
            a2: 6.0,
            a1: 8.0,
            a0: 3.0,
        })
        .unwrap();
        assert!((roots[0] + 3.0).abs() < 1e-8);
        for r in &roots[1..] {
            assert!((r - 1.0).abs() < 1e-8);
        }

        let roots = quartic_roots(&GlobalInvariants {
            a2: 0.0,
            a1: 0.0,
            a0: 0.0,
        })
        .unwrap();
        assert!(roots.iter().all(|r| r.abs() < 1e-12));

        // All positivity margins hold, but (kappa^2 - 1)^2 + 1 = 0 has no
        // real solutions.
        let g = GlobalInvariants {
            a2: 2.0,
            a1: 0.0,
            a0: -2.0,
        };
        assert!(positivity_inequalities(&g).iter().all(|m| *m >= 0.0));
        assert!(matches!(quartic_roots(&g), Err(Error::ComplexRoots { .. })));
    }

    #[test]
    fn positivity_margin_examples() {
        let margins = positivity_inequalities(&GlobalInvariants {
            a2: 6.0,
            a1: 8.0,
            a0: 3.0,
        });
        assert!(margins.iter().all(|m| m.abs() < 1e-12));

        let margins = positivity_inequalities(&GlobalInvariants {
            a2: 0.0,
            a1: 0.0,
            a0: 0.0,
        });
        assert_eq!(margins, [1.0, 4.0, 6.0]);

        // K = -2 sigma_1 x 1: an over-long Bloch vector violates A2 <= 6.
        let k = crate::linalg::computational_generators().sigma[0].map(|z| z.scale(-2.0));
        let g = GlobalInvariants::from_k_matrix(&k);
        assert!((g.a2 - 8.0).abs() < 1e-12);
        let margins = positivity_inequalities(&g);
        assert!((margins[2] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_parameterization_examples() {
        let lam = lambda_parameterization(&[-3.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((lam.l1, lam.l2, lam.l3), (-1.0, 1.0, 1.0));
        let implied = lam.implied_invariants();
        assert!((implied.a2 - 6.0).abs() < 1e-12);
        assert!((implied.a1 - 8.0).abs() < 1e-12);
        assert!((implied.a0 - 3.0).abs() < 1e-12);

        let mut roots = lam.reconstruct_roots();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(roots, [-3.0, 1.0, 1.0, 1.0]);

        let zero = lambda_parameterization(&[0.0; 4]).unwrap();
        assert_eq!((zero.l1, zero.l2, zero.l3), (0.0, 0.0, 0.0));

        assert!(lambda_parameterization(&[1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn lambda_roundtrip_on_random_spectra() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..100 {
            let mut k: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let s: f64 = k.iter().sum();
            k.push(-s);
            let roots = [k[0], k[1], k[2], k[3]];
            let lam = lambda_parameterization(&roots).unwrap();
            let mut rebuilt = lam.reconstruct_roots();
            let mut sorted = roots;
            rebuilt.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in rebuilt.iter().zip(sorted) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
