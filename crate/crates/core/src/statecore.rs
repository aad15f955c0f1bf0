//! Core data model for two-qubit states.
//!
//! A state is held either as a 4x4 density matrix in the computational
//! basis |00>,|01>,|10>,|11> (first qubit = left tensor factor) or in the
//! Pauli form
//!
//! ```text
//!     P = (1 + sigma.s + t.tau + sigma.C.tau) / 4
//! ```
//!
//! with Bloch vectors `s`, `t` and the 3x3 cross dyadic `C`. Conversions,
//! the named-state constructors, local/swap transforms, and seeded random
//! sampling all live here. Generic-form constructors map axes 1,2,3 to
//! x,y,z. The Pauli form is Hermitian with unit trace by construction;
//! positivity is a separate check (see `criteria`).

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat4, C64};

/// Default absolute tolerance for Hermiticity/trace validation.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Expectation values of one qubit's Pauli vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector(Vector3::new(x, y, z))
    }

    pub fn zero() -> Self {
        BlochVector(Vector3::zeros())
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// The correlation matrix C_ab = <sigma_a tau_b>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossDyadic(pub Matrix3<f64>);

impl CrossDyadic {
    pub fn zero() -> Self {
        CrossDyadic(Matrix3::zeros())
    }

    pub fn diagonal(c1: f64, c2: f64, c3: f64) -> Self {
        CrossDyadic(Matrix3::from_diagonal(&Vector3::new(c1, c2, c3)))
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// A two-qubit state in Pauli form. Hermitian and unit-trace by
/// construction; positivity is not implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliRep {
    pub s: BlochVector,
    pub t: BlochVector,
    pub c: CrossDyadic,
}

/// A 4x4 complex density matrix, validated Hermitian and unit-trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat4,
}

/// A pair of proper rotations acting on the sigma- and tau-frames; the
/// adjoint action of a local unitary on the Pauli parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalRotation {
    pub r_sigma: Matrix3<f64>,
    pub r_tau: Matrix3<f64>,
}

/// Sampling measures for `random_state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomMeasure {
    /// G G^H / tr for a 4x4 complex Gaussian G.
    HilbertSchmidt,
    /// Same with a 4xk Gaussian block, giving rank <= k.
    RankConstrained(u8),
    /// Uniform (s, t, C) in [-1,1]^15, rejecting non-positive candidates.
    PauliRejection,
}

impl PauliRep {
    /// Builds a Pauli representation, rejecting non-finite entries.
    pub fn new(s: BlochVector, t: BlochVector, c: CrossDyadic) -> Result<Self> {
        if !s.is_finite() || !t.is_finite() || !c.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(PauliRep { s, t, c })
    }

    /// The maximally mixed state: s = t = 0, C = 0.
    pub fn chaotic() -> Self {
        PauliRep {
            s: BlochVector::zero(),
            t: BlochVector::zero(),
            c: CrossDyadic::zero(),
        }
    }

    /// The Bell-family representative with C = -identity (the singlet).
    pub fn bell() -> Self {
        PauliRep {
            s: BlochVector::zero(),
            t: BlochVector::zero(),
            c: CrossDyadic::diagonal(-1.0, -1.0, -1.0),
        }
    }

    /// The density matrix (1 + sigma.s + t.tau + sigma.C.tau)/4.
    pub fn to_matrix(&self) -> DensityMatrix {
        let m = linalg::pauli_operator_matrix(
            &self.s.0,
            &self.t.0,
            &self.c.0,
            linalg::computational_generators(),
        );
        let entries = (CMat4::identity() + m).map(|z| z.scale(0.25));
        DensityMatrix { entries }
    }

    /// Reads the Pauli parameters back off a validated density matrix:
    /// s_a = Tr[(sigma_a x 1) m] and so on.
    pub fn from_matrix(m: &DensityMatrix) -> Self {
        let gens = linalg::computational_generators();
        let tr = |a: &CMat4| -> f64 {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for k in 0..4 {
                    acc += a[(i, k)] * m.entries[(k, i)];
                }
            }
            acc.re
        };
        let s = Vector3::from_fn(|j, _| tr(&gens.sigma[j]));
        let t = Vector3::from_fn(|k, _| tr(&gens.tau[k]));
        let c = Matrix3::from_fn(|j, k| tr(&gens.prod[j][k]));
        PauliRep {
            s: BlochVector(s),
            t: BlochVector(t),
            c: CrossDyadic(c),
        }
    }

    /// The traceless recentering K = 1 - 4P.
    pub fn k_operator(&self) -> CMat4 {
        CMat4::identity() - self.to_matrix().entries.map(|z| z.scale(4.0))
    }

    /// The matrix of sigma.s + t.tau + sigma.C.tau (= 4P - 1 = -K) in the
    /// magic basis, where single-qubit generators are imaginary
    /// antisymmetric and products sigma_j tau_k are real symmetric; for
    /// diagonal C the product part is diagonal. See
    /// `linalg::magic_generators` for the exact basis. Entry assembly is
    /// reproducible bit for bit.
    pub fn magic_basis_matrix(&self) -> CMat4 {
        linalg::pauli_operator_matrix(&self.s.0, &self.t.0, &self.c.0, linalg::magic_generators())
    }

    /// Frobenius norm of P(1-P); zero exactly for pure-state projectors.
    pub fn purity_defect(&self) -> f64 {
        let p = self.to_matrix().entries;
        linalg::frobenius_norm(&(p - p * p))
    }

    /// Rotates the sigma-frame by `r.r_sigma` and the tau-frame by
    /// `r.r_tau`: s -> R s, t -> R' t, C -> R C R'^T. The spectrum of the
    /// density matrix is unchanged.
    pub fn apply_local(&self, r: &LocalRotation) -> Self {
        PauliRep {
            s: BlochVector(r.r_sigma * self.s.0),
            t: BlochVector(r.r_tau * self.t.0),
            c: CrossDyadic(r.r_sigma * self.c.0 * r.r_tau.transpose()),
        }
    }

    /// Exchanges the two qubits: (s, t, C) -> (t, s, C^T). An involution.
    pub fn swap_qubits(&self) -> Self {
        PauliRep {
            s: self.t,
            t: self.s,
            c: CrossDyadic(self.c.0.transpose()),
        }
    }

    /// Entrywise distance between two Pauli representations.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let ds = (self.s.0 - other.s.0).amax();
        let dt = (self.t.0 - other.t.0).amax();
        let dc = (self.c.0 - other.c.0).amax();
        ds.max(dt).max(dc)
    }
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace within `tol` (absolute).
    pub fn new(entries: CMat4, tol: f64) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let herm = linalg::hermiticity_defect(&entries);
        if herm > tol {
            return Err(Error::NotHermitian { defect: herm });
        }
        let tr = entries.trace();
        let tr_defect = (tr - C64::new(1.0, 0.0)).norm();
        if tr_defect > tol {
            return Err(Error::TraceDeviation { defect: tr_defect });
        }
        Ok(DensityMatrix { entries })
    }

    pub(crate) fn from_valid(entries: CMat4) -> Self {
        DensityMatrix { entries }
    }

    pub fn entries(&self) -> &CMat4 {
        &self.entries
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        linalg::frobenius_norm(&(self.entries - other.entries))
    }
}

impl LocalRotation {
    /// Validates that both factors are proper rotations within `tol`.
    pub fn new(r_sigma: Matrix3<f64>, r_tau: Matrix3<f64>, tol: f64) -> Result<Self> {
        for r in [&r_sigma, &r_tau] {
            let ortho = (r.transpose() * r - Matrix3::identity()).amax();
            let det = r.determinant();
            if ortho > tol || (det - 1.0).abs() > tol {
                return Err(Error::ImproperRotation {
                    ortho_defect: ortho,
                    det,
                });
            }
        }
        Ok(LocalRotation { r_sigma, r_tau })
    }

    pub fn identity() -> Self {
        LocalRotation {
            r_sigma: Matrix3::identity(),
            r_tau: Matrix3::identity(),
        }
    }

    /// A uniformly random pair of proper rotations.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        LocalRotation {
            r_sigma: random_rotation(rng),
            r_tau: random_rotation(rng),
        }
    }

    /// The same rotation on both frames.
    pub fn equal<R: Rng>(rng: &mut R) -> Self {
        let r = random_rotation(rng);
        LocalRotation {
            r_sigma: r,
            r_tau: r,
        }
    }
}

/// A uniformly random proper rotation (via a random unit quaternion).
pub fn random_rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let q = Quaternion::new(
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
    );
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// Eigenvalues of a Hermitian 4x4 matrix, ascending. Exposed for working
/// with `k_operator` and `magic_basis_matrix` outputs.
pub fn hermitian_spectrum(m: &CMat4) -> [f64; 4] {
    linalg::hermitian_eigenvalues(m)
}

/// The pure-state family (p + sqrt(1-p^2) parameterization):
/// s = (p,0,0), t = (-p,0,0), C = diag(-1,-q,-q) with q = sqrt(1-p^2).
pub fn pure_state(p_param: f64) -> Result<PauliRep> {
    if !(0.0..=1.0).contains(&p_param) || !p_param.is_finite() {
        return Err(Error::OutOfDomain {
            what: "pure-state parameter p",
            value: p_param,
        });
    }
    let q = (1.0 - p_param * p_param).sqrt();
    Ok(PauliRep {
        s: BlochVector::new(p_param, 0.0, 0.0),
        t: BlochVector::new(-p_param, 0.0, 0.0),
        c: CrossDyadic::diagonal(-1.0, -q, -q),
    })
}

/// The Werner family (1 - x sigma.tau)/4, positive for -1/3 <= x <= 1.
pub fn werner_state(x: f64) -> Result<PauliRep> {
    if !(-1.0 / 3.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfDomain {
            what: "Werner parameter x",
            value: x,
        });
    }
    Ok(PauliRep {
        s: BlochVector::zero(),
        t: BlochVector::zero(),
        c: CrossDyadic::diagonal(-x, -x, -x),
    })
}

/// The rank-2 family
/// (1 + (sigma3 + x tau3) sin(theta) + (sigma1 tau1 - x sigma2 tau2) cos(theta)
///  + x sigma3 tau3)/4 for -1 < x < 1.
pub fn rank_two_state(x: f64, theta: f64) -> Result<PauliRep> {
    if x.abs() >= 1.0 || !x.is_finite() || !theta.is_finite() {
        return Err(Error::OutOfDomain {
            what: "rank-2 parameter x",
            value: x,
        });
    }
    let (sin, cos) = theta.sin_cos();
    Ok(PauliRep {
        s: BlochVector::new(0.0, 0.0, sin),
        t: BlochVector::new(0.0, 0.0, x * sin),
        c: CrossDyadic::diagonal(cos, -x * cos, x),
    })
}

/// The product state with C = s t^T; its entanglement dyadic vanishes.
pub fn product_state(s: BlochVector, t: BlochVector) -> Result<PauliRep> {
    if !s.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite);
    }
    for (v, what) in [(&s, "length of s"), (&t, "length of t")] {
        if v.norm() > 1.0 + 1e-12 {
            return Err(Error::OutOfDomain {
                what,
                value: v.norm(),
            });
        }
    }
    Ok(PauliRep {
        s,
        t,
        c: CrossDyadic(s.0 * t.0.transpose()),
    })
}

/// Draws a positive unit-trace state, deterministically for a fixed
/// (seed, measure).
pub fn random_state(seed: u64, measure: RandomMeasure) -> Result<PauliRep> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match measure {
        RandomMeasure::HilbertSchmidt => Ok(gaussian_state(&mut rng, 4)),
        RandomMeasure::RankConstrained(k) => {
            if !(1..=4).contains(&k) {
                return Err(Error::OutOfDomain {
                    what: "rank constraint k",
                    value: k as f64,
                });
            }
            Ok(gaussian_state(&mut rng, k as usize))
        }
        RandomMeasure::PauliRejection => {
            // Positive states fill only ~5e-7 of the [-1,1]^15 hypercube,
            // so candidates are pre-screened with the closed-form
            // inequality margins (~100 flops) and the rare finalist is
            // confirmed by the eigenvalue check.
            for _ in 0..200_000_000u64 {
                let mut draw = || rng.gen_range(-1.0..=1.0);
                let s = BlochVector::new(draw(), draw(), draw());
                let t = BlochVector::new(draw(), draw(), draw());
                let c = CrossDyadic(Matrix3::from_fn(|_, _| draw()));
                if s.0.norm_squared() > 1.0 || t.0.norm_squared() > 1.0 {
                    continue;
                }
                let candidate = PauliRep { s, t, c };
                let g = crate::invariants::closed_form_invariants(&candidate);
                if crate::invariants::positivity_inequalities(&g)
                    .iter()
                    .any(|m| *m < 0.0)
                {
                    continue;
                }
                if candidate.to_matrix().min_eigenvalue() >= 0.0 {
                    return Ok(candidate);
                }
            }
            unreachable!("rejection sampling failed to accept after 2e8 draws")
        }
    }
}

fn gaussian_state<R: Rng>(rng: &mut R, rank: usize) -> PauliRep {
    // G G^H for a 4 x rank complex Gaussian block, normalized to trace 1.
    let mut g = [[C64::new(0.0, 0.0); 4]; 4];
    for row in g.iter_mut() {
        for entry in row.iter_mut().take(rank) {
            *entry = C64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            );
        }
    }
    let mut m = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..rank {
                m[(i, j)] += g[i][k] * g[j][k].conj();
            }
        }
    }
    let tr = m.trace().re;
    let rho = m.map(|z| z.unscale(tr));
    PauliRep::from_matrix(&DensityMatrix::from_valid(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_entry;

    fn assert_entries(m: &CMat4, expected: [[(f64, f64); 4]; 4], tol: f64) {
        for i in 0..4 {
            for j in 0..4 {
                let (re, im) = expected[i][j];
                assert!(
                    (m[(i, j)].re - re).abs() <= tol && (m[(i, j)].im - im).abs() <= tol,
                    "entry ({i},{j}) = {:?}, expected ({re},{im})",
                    m[(i, j)]
                );
            }
        }
    }

    #[test]
    fn chaotic_state_matrix_is_identity_over_four() {
        let m = PauliRep::chaotic().to_matrix();
        let z = (0.0, 0.0);
        let q = (0.25, 0.0);
        assert_entries(
            m.entries(),
            [[q, z, z, z], [z, q, z, z], [z, z, q, z], [z, z, z, q]],
            0.0,
        );
    }

    #[test]
    fn bell_state_matrix_is_singlet_projector() {
        let m = PauliRep::bell().to_matrix();
        let z = (0.0, 0.0);
        let h = (0.5, 0.0);
        let mh = (-0.5, 0.0);
        assert_entries(
            m.entries(),
            [[z, z, z, z], [z, h, mh, z], [z, mh, h, z], [z, z, z, z]],
            0.0,
        );
    }

    #[test]
    fn product_of_up_up_is_projector_on_00() {
        let p = product_state(BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(0.0, 0.0, 1.0))
            .unwrap();
        let m = p.to_matrix();
        let z = (0.0, 0.0);
        assert_entries(
            m.entries(),
            [
                [(1.0, 0.0), z, z, z],
                [z, z, z, z],
                [z, z, z, z],
                [z, z, z, z],
            ],
            0.0,
        );
    }

    #[test]
    fn from_matrix_recovers_bell_parameters() {
        let p = PauliRep::from_matrix(&PauliRep::bell().to_matrix());
        assert!(p.s.norm() < 1e-14 && p.t.norm() < 1e-14);
        assert!((p.c.0 + Matrix3::identity()).amax() < 1e-14);
    }

    #[test]
    fn density_matrix_validation_rejects_bad_trace() {
        let m = CMat4::identity().map(|z| z.scale(0.225)); // trace 0.9
        match DensityMatrix::new(m, VALIDATION_TOL) {
            Err(Error::TraceDeviation { defect }) => assert!((defect - 0.1).abs() < 1e-12),
            other => panic!("expected trace error, got {other:?}"),
        }
    }

    #[test]
    fn k_operator_spectra() {
        assert!(max_abs_entry(&PauliRep::chaotic().k_operator()) == 0.0);
        let spec = hermitian_spectrum(&PauliRep::bell().k_operator());
        let expected = [-3.0, 1.0, 1.0, 1.0];
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let spec = hermitian_spectrum(&pure_state(0.37).unwrap().k_operator());
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_state_family() {
        let p = pure_state(0.6).unwrap();
        assert_eq!(p.s.0, Vector3::new(0.6, 0.0, 0.0));
        assert_eq!(p.t.0, Vector3::new(-0.6, 0.0, 0.0));
        assert_eq!(p.c.0, Matrix3::from_diagonal(&Vector3::new(-1.0, -0.8, -0.8)));
        assert!(p.purity_defect() < 1e-15);

        assert!(pure_state(0.0).unwrap().max_abs_diff(&PauliRep::bell()) == 0.0);
        assert!(pure_state(1.5).is_err());
        assert!(pure_state(-0.1).is_err());
    }

    #[test]
    fn werner_state_family() {
        assert!(werner_state(1.0).unwrap().max_abs_diff(&PauliRep::bell()) == 0.0);
        assert!(werner_state(0.0).unwrap().max_abs_diff(&PauliRep::chaotic()) == 0.0);
        let eigs = werner_state(0.6).unwrap().to_matrix().eigenvalues();
        let expected = [0.1, 0.1, 0.1, 0.7];
        for (a, b) in eigs.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(werner_state(1.01).is_err());
        assert!(werner_state(-0.34).is_err());
    }

    #[test]
    fn rank_two_state_family() {
        let p = rank_two_state(0.5, 0.0).unwrap();
        assert!(p.s.norm() == 0.0 && p.t.norm() == 0.0);
        assert_eq!(p.c.0, Matrix3::from_diagonal(&Vector3::new(1.0, -0.5, 0.5)));
        let eigs = p.to_matrix().eigenvalues();
        assert!(eigs[0] > -1e-12, "should be positive, got {eigs:?}");
        assert!(eigs[1].abs() < 1e-12, "rank should be <= 2, got {eigs:?}");
        assert!(rank_two_state(1.0, 0.3).is_err());
    }

    #[test]
    fn purity_defect_of_chaos_is_three_eighths() {
        assert!((PauliRep::chaotic().purity_defect() - 0.375).abs() < 1e-15);
        assert!(werner_state(0.5).unwrap().purity_defect() > 0.1);
    }

    #[test]
    fn apply_local_preserves_spectrum_and_composes() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let p = random_state(3, RandomMeasure::HilbertSchmidt).unwrap();
        let r1 = LocalRotation::random(&mut rng);
        let r2 = LocalRotation::random(&mut rng);

        let rotated = p.apply_local(&r1);
        let e0 = p.to_matrix().eigenvalues();
        let e1 = rotated.to_matrix().eigenvalues();
        for i in 0..4 {
            assert!((e0[i] - e1[i]).abs() < 1e-10);
        }

        let composed = LocalRotation {
            r_sigma: r2.r_sigma * r1.r_sigma,
            r_tau: r2.r_tau * r1.r_tau,
        };
        assert!(rotated.apply_local(&r2).max_abs_diff(&p.apply_local(&composed)) < 1e-12);
    }

    #[test]
    fn apply_local_examples() {
        let id = LocalRotation::identity();
        let p = pure_state(0.3).unwrap();
        assert!(p.apply_local(&id).max_abs_diff(&p) == 0.0);

        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let equal = LocalRotation::equal(&mut rng);
        assert!(PauliRep::bell().apply_local(&equal).max_abs_diff(&PauliRep::bell()) < 1e-12);

        // Rotating x -> z on the sigma side turns product(x,z) into product(z,z).
        let rot_x_to_z = Matrix3::new(0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        let r = LocalRotation::new(rot_x_to_z, Matrix3::identity(), 1e-12).unwrap();
        let p = product_state(BlochVector::new(1.0, 0.0, 0.0), BlochVector::new(0.0, 0.0, 1.0))
            .unwrap();
        let q = product_state(BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(0.0, 0.0, 1.0))
            .unwrap();
        assert!(p.apply_local(&r).max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn improper_rotation_is_rejected() {
        let reflect = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        assert!(LocalRotation::new(reflect, Matrix3::identity(), 1e-12).is_err());
    }

    #[test]
    fn swap_examples() {
        assert!(PauliRep::bell().swap_qubits().max_abs_diff(&PauliRep::bell()) == 0.0);
        let p = product_state(BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(1.0, 0.0, 0.0))
            .unwrap();
        let q = product_state(BlochVector::new(1.0, 0.0, 0.0), BlochVector::new(0.0, 0.0, 1.0))
            .unwrap();
        assert!(p.swap_qubits().max_abs_diff(&q) == 0.0);
        let r = random_state(5, RandomMeasure::HilbertSchmidt).unwrap();
        assert!(r.swap_qubits().swap_qubits().max_abs_diff(&r) == 0.0);
    }

    #[test]
    fn random_state_contract() {
        for measure in [
            RandomMeasure::HilbertSchmidt,
            RandomMeasure::RankConstrained(2),
            RandomMeasure::PauliRejection,
        ] {
            let a = random_state(42, measure).unwrap();
            let b = random_state(42, measure).unwrap();
            assert!(a.max_abs_diff(&b) == 0.0, "determinism for {measure:?}");
            assert!(a.to_matrix().min_eigenvalue() >= -1e-12);
        }
        let pure = random_state(9, RandomMeasure::RankConstrained(1)).unwrap();
        assert!(pure.purity_defect() < 1e-12);
        assert!(random_state(0, RandomMeasure::RankConstrained(5)).is_err());
    }

    #[test]
    fn magic_basis_examples() {
        // s-only input populates the printed antisymmetric pattern.
        let p = PauliRep::new(
            BlochVector::new(1.0, 0.0, 0.0),
            BlochVector::zero(),
            CrossDyadic::zero(),
        )
        .unwrap();
        let m = p.magic_basis_matrix();
        assert_eq!(m[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(m[(2, 3)], C64::new(0.0, 1.0));
        assert_eq!(m[(3, 2)], C64::new(0.0, -1.0));
        assert_eq!(m.map(|z| z.norm()).sum(), 4.0);

        // Isotropic C gives diag(1,1,1,-3).
        let p = PauliRep::new(
            BlochVector::zero(),
            BlochVector::zero(),
            CrossDyadic::diagonal(1.0, 1.0, 1.0),
        )
        .unwrap();
        let m = p.magic_basis_matrix();
        for (i, want) in [1.0, 1.0, 1.0, -3.0].into_iter().enumerate() {
            assert_eq!(m[(i, i)], C64::new(want, 0.0));
        }

        assert!(max_abs_entry(&PauliRep::chaotic().magic_basis_matrix()) == 0.0);
    }

    #[test]
    fn magic_basis_spectrum_matches_minus_k() {
        for seed in 0..5 {
            let p = random_state(seed, RandomMeasure::HilbertSchmidt).unwrap();
            let a = hermitian_spectrum(&p.magic_basis_matrix());
            let b = hermitian_spectrum(&p.k_operator().map(|z| -z));
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
