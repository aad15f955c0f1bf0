//! Concurrence, Lewenstein-Sanpera decompositions, and the conjectured
//! bound S + C <= 1.
//!
//! Every two-qubit state splits as a convex sum
//!
//! ```text
//!     P = lambda P_sep + (1 - lambda) P_pure
//! ```
//!
//! of a separable state and a pure state. The largest feasible lambda is
//! the degree of separability S; the separable part of that optimal
//! decomposition is always barely separable (its PPT transform has a zero
//! eigenvalue). For a fixed pure part, feasibility is monotone in
//! mu = 1/lambda because the remainder is affine in mu and the separable
//! set is convex, so the largest lambda comes from a one-dimensional
//! bracket-and-bisect on the inequality margins. The outer search over
//! pure parts runs a derivative-free simplex descent in the support of P
//! with seeded restarts; every reported S is certified from below by an
//! explicit feasible decomposition.
//!
//! The concurrence C comes from the spin-flipped state: the r_k are the
//! square roots of the eigenvalues of P Pbar, computed through the
//! Hermitian similarity sqrt(P) Pbar sqrt(P), which shares its spectrum
//! with the non-Hermitian product.

use std::cell::Cell;

use nalgebra::Vector4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::classify::{class_of, ClassLabel};
use crate::criteria::{is_separable, ppt_transform, separability_margins, spin_flip};
use crate::error::{Error, Result};
use crate::invariants::{global_invariants, positivity_inequalities};
use crate::linalg::{self, CMat4, C64};
use crate::statecore::{DensityMatrix, LocalRotation, PauliRep, VALIDATION_TOL};

/// Concurrence value with the four sorted r-values behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    /// max{0, 2 max_k r_k - sum_k r_k}, in [0, 1].
    pub value: f64,
    /// The r_k, descending.
    pub r_values: [f64; 4],
}

/// Tuning knobs for the optimal-decomposition search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsdOptions {
    /// Simplex restarts; the first few start from the support
    /// eigenvectors, the rest from seeded Gaussian draws.
    pub restarts: usize,
    /// Seed for the restart starting points.
    pub seed: u64,
    /// Bisection tolerance on lambda in the inner feasibility solve.
    pub inner_tol: f64,
    /// Convergence tolerance on lambda in the outer simplex search.
    pub outer_tol: f64,
}

impl Default for LsdOptions {
    fn default() -> Self {
        LsdOptions {
            restarts: 16,
            seed: 0,
            inner_tol: 1e-8,
            outer_tol: 1e-4,
        }
    }
}

/// Numerical certificates attached to a decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsdCertificates {
    /// Minimum eigenvalue of the separable part.
    pub min_eig_sep: f64,
    /// Minimum eigenvalue of the PPT transform of the separable part;
    /// approximately zero at the optimum (barely separable).
    pub min_eig_ppt_sep: f64,
    /// Frobenius norm of P_pure (1 - P_pure).
    pub pure_defect: f64,
    /// Frobenius distance of lambda P_sep + (1-lambda) P_pure from P.
    pub reconstruction_error: f64,
}

/// Search bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub restarts: usize,
    pub evaluations: usize,
    pub seed: u64,
}

/// An optimal Lewenstein-Sanpera decomposition with certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct LsdResult {
    /// The degree of separability S (largest feasible lambda).
    pub lambda: f64,
    pub sep_part: DensityMatrix,
    pub pure_part: DensityMatrix,
    /// False for separable inputs, where lambda = 1 leaves the pure part
    /// arbitrary and a placeholder projector is reported.
    pub pure_part_used: bool,
    pub converged: bool,
    pub certificates: LsdCertificates,
    pub search_stats: SearchStats,
}

/// One record of the conjectured bound 0 < S + C <= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureRecord {
    pub s_value: f64,
    pub c_value: f64,
    pub sum: f64,
    pub label: ClassLabel,
    pub state_seed: u64,
}

/// A transform expected to leave a state invariant.
#[derive(Debug, Clone)]
pub enum Symmetry {
    Local(LocalRotation),
    Swap,
}

impl Symmetry {
    fn apply(&self, p: &PauliRep) -> PauliRep {
        match self {
            Symmetry::Local(r) => p.apply_local(r),
            Symmetry::Swap => p.swap_qubits(),
        }
    }
}

/// Outcome of the invariance-inheritance check: the optimal parts of an
/// invariant state must share its symmetries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InheritanceReport {
    pub transforms_checked: usize,
    pub max_sep_deviation: f64,
    pub max_pure_deviation: f64,
    pub passed: bool,
}

/// Wootters concurrence of a positive state.
pub fn concurrence(p: &PauliRep) -> Result<ConcurrenceResult> {
    let m = p.to_matrix();
    let min_eig = m.min_eigenvalue();
    if min_eig < -VALIDATION_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    let flipped = spin_flip(p).to_matrix();
    let sq = linalg::psd_sqrt(m.entries());
    let product = sq * flipped.entries() * sq;
    let eigs = linalg::hermitian_eigenvalues(&product);
    let mut r = [0.0f64; 4];
    for (slot, e) in r.iter_mut().zip(eigs.iter().rev()) {
        // Eigenvalues of the product below 1e-12 are rounding noise that
        // the square root would amplify to 1e-6-scale errors in the r_k.
        *slot = if *e < 1e-12 { 0.0 } else { e.sqrt() };
    }
    let sum: f64 = r.iter().sum();
    Ok(ConcurrenceResult {
        value: (2.0 * r[0] - sum).max(0.0),
        r_values: r,
    })
}

/// Absolute slack allowed on the inequality margins inside the
/// feasibility predicate; pure rounding headroom.
const FEASIBILITY_TOL: f64 = 1e-12;

/// Numerical-rank threshold for the support of P.
const RANK_THRESHOLD: f64 = 1e-9;

/// Cap on mu = 1/lambda in the bracket scan; decompositions with
/// lambda < 1e-3 are reported as lambda = 0.
const MU_CAP: f64 = 1e3;

fn mix_rep(p: &PauliRep, pure: &PauliRep, mu: f64) -> PauliRep {
    let w = mu - 1.0;
    PauliRep {
        s: crate::statecore::BlochVector(p.s.0 * mu - pure.s.0 * w),
        t: crate::statecore::BlochVector(p.t.0 * mu - pure.t.0 * w),
        c: crate::statecore::CrossDyadic(p.c.0 * mu - pure.c.0 * w),
    }
}

fn remainder_positive(p: &PauliRep, pure: &PauliRep, mu: f64) -> bool {
    let r = mix_rep(p, pure, mu);
    positivity_inequalities(&global_invariants(&r))
        .iter()
        .all(|m| *m >= -FEASIBILITY_TOL)
}

/// Whether (mu P - (mu-1) Pi) is a separable state: positivity and PPT
/// margins together.
fn remainder_feasible(p: &PauliRep, pure: &PauliRep, mu: f64) -> bool {
    remainder_positive(p, pure, mu) && {
        let r = mix_rep(p, pure, mu);
        separability_margins(&r).iter().all(|m| *m >= -FEASIBILITY_TOL)
    }
}

/// Largest lambda such that (P - (1-lambda) pure)/lambda is separable.
///
/// The remainder is affine in mu = 1/lambda, so both the positivity set
/// (which contains mu = 1) and the PPT set are intervals. The search
/// first pins the positivity edge mu_pos, then bisects the combined
/// feasibility crossing inside [1, mu_pos]; if the combined set does not
/// reach mu_pos, a uniform interior scan brackets it first. Returns 0
/// when no feasible mu <= `MU_CAP` exists. `hint` is a previously
/// feasible mu that skips the edge hunt when still feasible.
fn lambda_max_impl(p: &PauliRep, pure: &PauliRep, lam_tol: f64, hint: Option<f64>) -> f64 {
    if remainder_feasible(p, pure, 1.0) {
        return 1.0;
    }

    // Bisect the lower feasibility edge on (lo, hi] with hi feasible.
    let bisect = |mut lo: f64, mut hi: f64| -> f64 {
        let mut iter = 0;
        while (hi - lo) > lam_tol * lo * hi && iter < 200 {
            let mid = 0.5 * (lo + hi);
            if remainder_feasible(p, pure, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            iter += 1;
        }
        1.0 / hi
    };

    if let Some(h) = hint {
        if h > 1.0 && h <= MU_CAP && remainder_feasible(p, pure, h) {
            return bisect(1.0, h);
        }
    }

    // Positivity edge: positivity holds at mu = 1 and fails for large mu
    // (the pure part never majorizes a mixed state), so hunt the first
    // failure geometrically and bisect the edge.
    let mu_pos = if remainder_positive(p, pure, MU_CAP) {
        MU_CAP
    } else {
        let mut ok = 1.0f64;
        let mut step = 1e-3;
        let mut bad = MU_CAP;
        while ok + step < MU_CAP {
            let mu = ok + step;
            if remainder_positive(p, pure, mu) {
                ok = mu;
                step *= 2.0;
            } else {
                bad = mu;
                break;
            }
        }
        let mut iter = 0;
        while (bad - ok) > 1e-10 * bad && iter < 100 {
            let mid = 0.5 * (ok + bad);
            if remainder_positive(p, pure, mid) {
                ok = mid;
            } else {
                bad = mid;
            }
            iter += 1;
        }
        ok
    };

    if remainder_feasible(p, pure, mu_pos) {
        return bisect(1.0, mu_pos);
    }

    // The feasible interval, if any, lies strictly inside (1, mu_pos) --
    // and at the optimal pure part it degenerates to a single touching
    // point where the worst margin reaches exactly zero. Scan the
    // interior; on a strictly feasible point, bisect the lower edge.
    // Otherwise refine the best grid point by ternary search on the
    // worst margin and accept a touching point.
    let worst_margin = |mu: f64| -> f64 {
        let r = mix_rep(p, pure, mu);
        let pos = positivity_inequalities(&global_invariants(&r));
        let sep = separability_margins(&r);
        pos.iter().chain(sep.iter()).cloned().fold(f64::INFINITY, f64::min)
    };

    const INTERIOR_STEPS: usize = 96;
    let mut best_k = 0usize;
    let mut best_g = f64::NEG_INFINITY;
    for k in 1..INTERIOR_STEPS {
        let mu = 1.0 + (mu_pos - 1.0) * (k as f64) / (INTERIOR_STEPS as f64);
        let g = worst_margin(mu);
        if g >= -FEASIBILITY_TOL {
            return bisect(1.0, mu);
        }
        if g > best_g {
            best_g = g;
            best_k = k;
        }
    }
    if best_k == 0 {
        return 0.0;
    }
    let width = (mu_pos - 1.0) / (INTERIOR_STEPS as f64);
    let mut a = 1.0 + width * (best_k as f64 - 1.0);
    let mut b = 1.0 + width * (best_k as f64 + 1.0);
    for _ in 0..90 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if worst_margin(m1) < worst_margin(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let mu_touch = 0.5 * (a + b);
    // The margins are degree <= 4 polynomials of order-one coefficients,
    // so a -1e-10 worst margin puts the remainder within ~1e-11 of the
    // separable set: close enough to certify the touching decomposition.
    if worst_margin(mu_touch) >= -1e-10 {
        1.0 / mu_touch
    } else {
        0.0
    }
}

/// Largest lambda for a caller-supplied pure part. The pure part must be
/// a rank-1 projector within `tol`; bisection runs to `tol` in lambda.
pub fn lsd_lambda_max(p: &PauliRep, pure: &DensityMatrix, tol: f64) -> Result<f64> {
    let pure_rep = PauliRep::from_matrix(pure);
    let defect = pure_rep.purity_defect();
    if defect > tol.max(1e-8) {
        return Err(Error::InvalidPurePart { defect });
    }
    let min_eig = p.to_matrix().min_eigenvalue();
    if min_eig < -VALIDATION_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    Ok(lambda_max_impl(p, &pure_rep, tol, None))
}

/// Projector onto a unit vector.
fn projector(v: &Vector4<C64>) -> CMat4 {
    let mut m = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = v[i] * v[j].conj();
        }
    }
    m
}

/// Largest beta for which beta P + (1 - beta) chaos is separable; used to
/// build a barely separable companion state when lambda = 0.
fn ppt_boundary_mix(p: &PauliRep) -> PauliRep {
    let scaled = |beta: f64| PauliRep {
        s: crate::statecore::BlochVector(p.s.0 * beta),
        t: crate::statecore::BlochVector(p.t.0 * beta),
        c: crate::statecore::CrossDyadic(p.c.0 * beta),
    };
    let sep = |beta: f64| {
        separability_margins(&scaled(beta))
            .iter()
            .all(|m| *m >= -FEASIBILITY_TOL)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if sep(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    scaled(lo)
}

/// Simplex (Nelder-Mead) minimizer; returns (best x, best f, converged).
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_iter: usize,
    ftol: f64,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = f(x0);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if simplex[n].1 - simplex[0].1 < ftol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let at = |coef: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + coef * (centroid[k] - simplex[n].0[k]))
                .collect()
        };

        let xr = at(alpha);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = at(gamma);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = at(-rho);
            let fc = f(&xc);
            if fc < simplex[n].1 {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for k in 0..n {
                        entry.0[k] = best[k] + sigma * (entry.0[k] - best[k]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (simplex[0].0.clone(), simplex[0].1, converged)
}

/// Finds the optimal Lewenstein-Sanpera decomposition of a positive state.
///
/// The pure part is a unit vector in the support of P (every part of any
/// decomposition inherits orthogonality to the kernel of P), parameterized
/// by the real and imaginary parts of its support amplitudes; the
/// redundant norm and phase directions are flat for the objective. Each
/// restart runs a simplex descent on -lambda_max; results merge by best
/// lambda, first-come on ties, so the search is deterministic for a fixed
/// seed.
pub fn optimal_lsd(p: &PauliRep, options: &LsdOptions) -> Result<LsdResult> {
    let m = p.to_matrix();
    let min_eig = m.min_eigenvalue();
    if min_eig < -VALIDATION_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }

    let sep_report = is_separable(p, VALIDATION_TOL)?;
    if sep_report.satisfied {
        // lambda = 1 leaves the pure part arbitrary; report the top
        // eigenvector as a placeholder.
        let (_, vecs) = linalg::hermitian_eigen(m.entries());
        let top = vecs.column(3).into_owned();
        let pure = projector(&top);
        let pure_m = DensityMatrix::from_valid(pure);
        let pure_rep = PauliRep::from_matrix(&pure_m);
        return Ok(LsdResult {
            lambda: 1.0,
            sep_part: m.clone(),
            pure_part: pure_m,
            pure_part_used: false,
            converged: true,
            certificates: LsdCertificates {
                min_eig_sep: min_eig,
                min_eig_ppt_sep: sep_report.min_eigenvalue,
                pure_defect: pure_rep.purity_defect(),
                reconstruction_error: 0.0,
            },
            search_stats: SearchStats {
                restarts: 0,
                evaluations: 0,
                seed: options.seed,
            },
        });
    }

    let (vals, vecs) = linalg::hermitian_eigen(m.entries());
    let rank = vals.iter().filter(|v| **v > RANK_THRESHOLD).count().max(1);
    // Support vectors, descending eigenvalue.
    let support: Vec<Vector4<C64>> = (0..rank).map(|k| vecs.column(3 - k).into_owned()).collect();

    if rank == 1 {
        // A pure entangled state: lambda = 0, the pure part is the state
        // itself, and the separable companion reported alongside is the
        // barely separable mix of P with the chaotic state.
        let sep_rep = ppt_boundary_mix(p);
        let sep_m = sep_rep.to_matrix();
        return Ok(LsdResult {
            lambda: 0.0,
            certificates: LsdCertificates {
                min_eig_sep: sep_m.min_eigenvalue(),
                min_eig_ppt_sep: ppt_transform(&sep_rep).to_matrix().min_eigenvalue(),
                pure_defect: p.purity_defect(),
                reconstruction_error: 0.0,
            },
            sep_part: sep_m,
            pure_part: m,
            pure_part_used: true,
            converged: true,
            search_stats: SearchStats {
                restarts: 0,
                evaluations: 0,
                seed: options.seed,
            },
        });
    }

    let dim = 2 * rank;
    let evaluations = Cell::new(0usize);
    let hint = Cell::new(f64::NAN);

    let vector_of = |x: &[f64]| -> Option<Vector4<C64>> {
        let mut v = Vector4::from_element(C64::new(0.0, 0.0));
        for k in 0..x.len() / 2 {
            let amp = C64::new(x[2 * k], x[2 * k + 1]);
            v += support[k] * amp;
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        Some(v.map(|z| z.unscale(norm)))
    };

    let mut objective = |x: &[f64]| -> f64 {
        evaluations.set(evaluations.get() + 1);
        let Some(v) = vector_of(x) else {
            return 0.0;
        };
        let pure_rep = PauliRep::from_matrix(&DensityMatrix::from_valid(projector(&v)));
        let h = hint.get();
        let lam = lambda_max_impl(
            p,
            &pure_rep,
            options.inner_tol,
            if h.is_finite() { Some(h) } else { None },
        );
        if lam > 0.0 {
            hint.set(1.0 / lam);
        }
        -lam
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut any_converged = false;
    for ridx in 0..options.restarts.max(1) {
        let x0: Vec<f64> = if ridx < rank {
            let mut x = vec![0.0; dim];
            x[2 * ridx] = 1.0;
            x
        } else {
            let mut rng = ChaCha12Rng::seed_from_u64(
                options.seed ^ (ridx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
        };
        let (x_best, f_best, conv) = nelder_mead(
            &mut objective,
            &x0,
            0.35,
            200 + 40 * dim,
            options.outer_tol * 1e-2,
        );
        any_converged |= conv;
        let lam = -f_best;
        let better = match &best {
            None => true,
            Some((b, _)) => lam > *b + 1e-15,
        };
        if better {
            best = Some((lam, x_best));
        }
    }

    let (lambda, x_best) = best.expect("at least one restart runs");
    if lambda <= options.inner_tol {
        // No feasible decomposition found anywhere: report lambda = 0
        // honestly, with the barely separable companion.
        let sep_rep = ppt_boundary_mix(p);
        let sep_m = sep_rep.to_matrix();
        let pure = m.clone();
        let recon = pure.frobenius_distance(&m);
        return Ok(LsdResult {
            lambda: 0.0,
            certificates: LsdCertificates {
                min_eig_sep: sep_m.min_eigenvalue(),
                min_eig_ppt_sep: ppt_transform(&sep_rep).to_matrix().min_eigenvalue(),
                pure_defect: PauliRep::from_matrix(&pure).purity_defect(),
                reconstruction_error: recon,
            },
            sep_part: sep_m,
            pure_part: pure,
            pure_part_used: true,
            converged: false,
            search_stats: SearchStats {
                restarts: options.restarts.max(1),
                evaluations: evaluations.get(),
                seed: options.seed,
            },
        });
    }

    let v = vector_of(&x_best).expect("optimal vector is normalizable");
    let pure = projector(&v);
    let sep_entries = (m.entries() - pure.map(|z| z.scale(1.0 - lambda))).map(|z| z.unscale(lambda));
    let sep_m = DensityMatrix::from_valid(sep_entries);
    let sep_rep = PauliRep::from_matrix(&sep_m);
    let pure_m = DensityMatrix::from_valid(pure);
    let recon_entries = sep_entries.map(|z| z.scale(lambda))
        + pure.map(|z| z.scale(1.0 - lambda))
        - m.entries();
    Ok(LsdResult {
        lambda,
        certificates: LsdCertificates {
            min_eig_sep: sep_m.min_eigenvalue(),
            min_eig_ppt_sep: ppt_transform(&sep_rep).to_matrix().min_eigenvalue(),
            pure_defect: PauliRep::from_matrix(&pure_m).purity_defect(),
            reconstruction_error: linalg::frobenius_norm(&recon_entries),
        },
        sep_part: sep_m,
        pure_part: pure_m,
        pure_part_used: true,
        converged: any_converged,
        search_stats: SearchStats {
            restarts: options.restarts.max(1),
            evaluations: evaluations.get(),
            seed: options.seed,
        },
    })
}

/// Minimum PPT eigenvalue of a separable state; approximately zero
/// certifies that the state sits on the separability boundary.
pub fn barely_separable_residual(sep: &DensityMatrix, tol: f64) -> Result<f64> {
    let rep = PauliRep::from_matrix(sep);
    let min_eig = sep.min_eigenvalue();
    if min_eig < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    let ppt_min = ppt_transform(&rep).to_matrix().min_eigenvalue();
    if ppt_min < -tol {
        return Err(Error::NotSeparable {
            min_ppt_eigenvalue: ppt_min,
        });
    }
    Ok(ppt_min)
}

/// Verifies that the parts of a decomposition inherit the symmetries of
/// the state: each transform must fix `p` within `tol`, and then both
/// parts must be invariant within `10 * tol`.
pub fn check_invariance_inheritance(
    p: &PauliRep,
    result: &LsdResult,
    transforms: &[Symmetry],
    tol: f64,
) -> Result<InheritanceReport> {
    let sep_rep = PauliRep::from_matrix(&result.sep_part);
    let pure_rep = PauliRep::from_matrix(&result.pure_part);
    let mut max_sep = 0.0f64;
    let mut max_pure = 0.0f64;
    for tf in transforms {
        let dev = tf.apply(p).max_abs_diff(p);
        if dev > tol {
            return Err(Error::TransformNotSymmetry { deviation: dev });
        }
        max_sep = max_sep.max(tf.apply(&sep_rep).max_abs_diff(&sep_rep));
        max_pure = max_pure.max(tf.apply(&pure_rep).max_abs_diff(&pure_rep));
    }
    Ok(InheritanceReport {
        transforms_checked: transforms.len(),
        max_sep_deviation: max_sep,
        max_pure_deviation: max_pure,
        passed: max_sep <= 10.0 * tol && max_pure <= 10.0 * tol,
    })
}

/// Computes S and C for one state and records their sum; violations of
/// the conjectured bound are never clamped, only reported.
pub fn conjecture_check(
    p: &PauliRep,
    options: &LsdOptions,
    state_seed: u64,
) -> Result<ConjectureRecord> {
    let s_value = optimal_lsd(p, options)?.lambda;
    let c_value = concurrence(p)?.value;
    Ok(ConjectureRecord {
        s_value,
        c_value,
        sum: s_value + c_value,
        label: class_of(p, VALIDATION_TOL),
        state_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statecore::{
        product_state, pure_state, rank_two_state, random_state, werner_state, BlochVector,
        PauliRep, RandomMeasure,
    };

    #[test]
    fn concurrence_of_pure_states_is_q() {
        for p in [0.0f64, 0.6, 1.0] {
            let q = (1.0 - p * p).sqrt();
            let c = concurrence(&pure_state(p).unwrap()).unwrap();
            assert!((c.value - q).abs() < 1e-9, "p = {p}");
        }
    }

    #[test]
    fn concurrence_of_rank_two_family() {
        let c = concurrence(&rank_two_state(0.5, std::f64::consts::FRAC_PI_3).unwrap()).unwrap();
        assert!((c.value - 0.25).abs() < 1e-9);
        let c = concurrence(&rank_two_state(0.0, 1.1).unwrap()).unwrap();
        assert!(c.value < 1e-9);
    }

    #[test]
    fn concurrence_of_werner_states() {
        let c = concurrence(&werner_state(0.6).unwrap()).unwrap();
        assert!((c.value - 0.4).abs() < 1e-10);
        let c = concurrence(&werner_state(0.2).unwrap()).unwrap();
        assert!(c.value == 0.0);
        let c = concurrence(&product_state(
            BlochVector::new(0.3, 0.0, 0.4),
            BlochVector::new(0.0, 0.5, 0.0),
        )
        .unwrap())
        .unwrap();
        assert!(c.value == 0.0);
    }

    #[test]
    fn concurrence_is_spin_flip_symmetric() {
        for seed in 0..20 {
            let p = random_state(seed, RandomMeasure::HilbertSchmidt).unwrap();
            let a = concurrence(&p).unwrap().value;
            let b = concurrence(&spin_flip(&p)).unwrap().value;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lambda_max_examples() {
        // Werner x = 0.6 against the Bell projector: remainder is a
        // Werner state, separable up to x' = 1/3, so lambda = 0.6.
        let w = werner_state(0.6).unwrap();
        let bell = PauliRep::bell().to_matrix();
        let lam = lsd_lambda_max(&w, &bell, 1e-9).unwrap();
        assert!((lam - 0.6).abs() < 1e-6, "got {lam}");

        // Separable states take lambda = 1 for any pure part.
        let sep = werner_state(0.2).unwrap();
        let lam = lsd_lambda_max(&sep, &bell, 1e-9).unwrap();
        assert!(lam == 1.0);

        // A pure entangled state admits no separable remainder.
        let lam = lsd_lambda_max(&PauliRep::bell(), &bell, 1e-9).unwrap();
        assert!(lam == 0.0);

        // Mixed, non-projector pure part is refused.
        assert!(matches!(
            lsd_lambda_max(&w, &PauliRep::chaotic().to_matrix(), 1e-9),
            Err(Error::InvalidPurePart { .. })
        ));
    }

    #[test]
    fn optimal_lsd_of_werner() {
        let result = optimal_lsd(&werner_state(0.6).unwrap(), &LsdOptions::default()).unwrap();
        assert!((result.lambda - 0.6).abs() < 1e-3, "S = {}", result.lambda);
        assert!(result.certificates.reconstruction_error < 1e-8);
        assert!(result.certificates.pure_defect < 1e-8);
        assert!(result.certificates.min_eig_sep > -1e-9);
        assert!(
            result.certificates.min_eig_ppt_sep > -1e-9
                && result.certificates.min_eig_ppt_sep < 1e-2
        );
    }

    #[test]
    fn optimal_lsd_of_rank_two_state() {
        let p = rank_two_state(0.5, std::f64::consts::FRAC_PI_3).unwrap();
        let result = optimal_lsd(&p, &LsdOptions::default()).unwrap();
        assert!((result.lambda - 0.5).abs() < 1e-3, "S = {}", result.lambda);
        assert!(result.certificates.reconstruction_error < 1e-8);
    }

    #[test]
    fn optimal_lsd_of_separable_state() {
        let p = werner_state(0.25).unwrap();
        let result = optimal_lsd(&p, &LsdOptions::default()).unwrap();
        assert!(result.lambda == 1.0);
        assert!(!result.pure_part_used);
        assert!(result.sep_part.frobenius_distance(&p.to_matrix()) == 0.0);
    }

    #[test]
    fn optimal_lsd_of_pure_entangled_state() {
        let p = pure_state(0.5).unwrap();
        let result = optimal_lsd(&p, &LsdOptions::default()).unwrap();
        assert!(result.lambda == 0.0);
        assert!(result.certificates.min_eig_ppt_sep.abs() < 1e-6);
        assert!(result.certificates.reconstruction_error < 1e-12);
    }

    #[test]
    fn barely_separable_residual_examples() {
        let chaos = PauliRep::chaotic().to_matrix();
        assert!((barely_separable_residual(&chaos, 1e-9).unwrap() - 0.25).abs() < 1e-12);

        let boundary = werner_state(1.0 / 3.0).unwrap().to_matrix();
        assert!(barely_separable_residual(&boundary, 1e-9).unwrap().abs() < 1e-12);

        let result = optimal_lsd(&werner_state(0.6).unwrap(), &LsdOptions::default()).unwrap();
        let residual = barely_separable_residual(&result.sep_part, 1e-6).unwrap();
        assert!(residual.abs() < 1e-6, "residual = {residual}");

        assert!(barely_separable_residual(&PauliRep::bell().to_matrix(), 1e-9).is_err());
    }

    #[test]
    fn inheritance_on_werner_state() {
        use rand::SeedableRng;
        let p = werner_state(0.6).unwrap();
        let result = optimal_lsd(&p, &LsdOptions::default()).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        let transforms = vec![
            Symmetry::Local(LocalRotation::equal(&mut rng)),
            Symmetry::Local(LocalRotation::equal(&mut rng)),
            Symmetry::Swap,
            Symmetry::Local(LocalRotation::identity()),
        ];
        let report = check_invariance_inheritance(&p, &result, &transforms, 1e-6).unwrap();
        assert!(report.passed, "{report:?}");

        // A transform that moves the state is rejected.
        let moved = pure_state(0.4).unwrap();
        let res2 = optimal_lsd(&moved, &LsdOptions::default()).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(14);
        let bad = vec![Symmetry::Local(LocalRotation::random(&mut rng))];
        assert!(check_invariance_inheritance(&moved, &res2, &bad, 1e-9).is_err());
    }

    #[test]
    fn conjecture_records() {
        let rec = conjecture_check(
            &rank_two_state(0.5, std::f64::consts::FRAC_PI_3).unwrap(),
            &LsdOptions::default(),
            7,
        )
        .unwrap();
        assert!((rec.s_value - 0.5).abs() < 1e-3);
        assert!((rec.c_value - 0.25).abs() < 1e-9);
        assert!((rec.sum - 0.75).abs() < 1.5e-3);

        let rec = conjecture_check(&werner_state(0.6).unwrap(), &LsdOptions::default(), 8).unwrap();
        assert!((rec.sum - 1.0).abs() < 1.5e-3);

        let rec = conjecture_check(
            &product_state(BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(0.0, 0.0, 1.0))
                .unwrap(),
            &LsdOptions::default(),
            9,
        )
        .unwrap();
        assert!(rec.s_value == 1.0 && rec.c_value == 0.0 && rec.sum == 1.0);
    }
}
