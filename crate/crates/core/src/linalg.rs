//! Small dense linear-algebra helpers shared by the analysis modules.
//!
//! Everything here is 2x2/3x3/4x4 work: Pauli generator tables in the
//! computational and magic bases, Hermitian eigensolves, PSD square roots,
//! a sign-carrying proper SVD for 3x3 real matrices, and a companion-matrix
//! quartic solver.

use std::sync::OnceLock;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3, Vector4};

pub type C64 = Complex<f64>;
pub type CMat4 = Matrix4<C64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);
pub const M_I: C64 = Complex::new(0.0, -1.0);

/// Generator tables for one matrix representation of the two-qubit Pauli
/// algebra: `sigma[j]` is the first-qubit operator, `tau[k]` the second,
/// `prod[j][k]` their product.
pub struct Generators {
    pub sigma: [CMat4; 3],
    pub tau: [CMat4; 3],
    pub prod: [[CMat4; 3]; 3],
}

impl Generators {
    fn from_single(sigma: [CMat4; 3], tau: [CMat4; 3]) -> Self {
        let prod = std::array::from_fn(|j| std::array::from_fn(|k| sigma[j] * tau[k]));
        Generators { sigma, tau, prod }
    }
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn pauli2() -> [Matrix2<C64>; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, M_I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Generators in the computational basis |00>,|01>,|10>,|11> with the
/// first (sigma) qubit as the left tensor factor.
pub fn computational_generators() -> &'static Generators {
    static GENS: OnceLock<Generators> = OnceLock::new();
    GENS.get_or_init(|| {
        let p = pauli2();
        let id = Matrix2::identity();
        let sigma = std::array::from_fn(|j| kron2(&p[j], &id));
        let tau = std::array::from_fn(|k| kron2(&id, &p[k]));
        Generators::from_single(sigma, tau)
    })
}

/// Generators in the magic basis.
///
/// The basis columns are the phase-adjusted Bell states
///   b1 = (|01>+|10>)/sqrt2,  b2 = -i(|00>+|11>)/sqrt2,
///   b3 = (|00>-|11>)/sqrt2,  b4 = -i(|01>-|10>)/sqrt2.
/// In this basis every single-qubit generator is i times a real
/// antisymmetric matrix and every product sigma_j tau_k is real symmetric;
/// sigma_j tau_j is diagonal. The entries are hard-coded so that arithmetic
/// on them stays exact in f64.
pub fn magic_generators() -> &'static Generators {
    static GENS: OnceLock<Generators> = OnceLock::new();
    GENS.get_or_init(|| {
        let e = |entries: [(usize, usize, C64); 4]| {
            let mut m = CMat4::zeros();
            for (r, c, v) in entries {
                m[(r, c)] = v;
            }
            m
        };
        let sigma = [
            e([(0, 1, M_I), (1, 0, I), (2, 3, I), (3, 2, M_I)]),
            e([(0, 2, I), (2, 0, M_I), (1, 3, I), (3, 1, M_I)]),
            e([(0, 3, M_I), (3, 0, I), (1, 2, I), (2, 1, M_I)]),
        ];
        let tau = [
            e([(0, 1, M_I), (1, 0, I), (2, 3, M_I), (3, 2, I)]),
            e([(0, 2, I), (2, 0, M_I), (1, 3, M_I), (3, 1, I)]),
            e([(0, 3, I), (3, 0, M_I), (1, 2, I), (2, 1, M_I)]),
        ];
        Generators::from_single(sigma, tau)
    })
}

/// The magic-basis change-of-basis matrix (columns are the basis kets in
/// the computational basis), scaled by sqrt2 so all entries are exact.
pub fn magic_basis_times_sqrt2() -> CMat4 {
    CMat4::from_columns(&[
        Vector4::new(ZERO, ONE, ONE, ZERO),
        Vector4::new(M_I, ZERO, ZERO, M_I),
        Vector4::new(ONE, ZERO, ZERO, -ONE),
        Vector4::new(ZERO, M_I, I, ZERO),
    ])
}

/// Assembles sigma.s + t.tau + sigma.C.tau in the given representation.
///
/// Terms accumulate entrywise in a fixed order (s1..s3, t1..t3, C row-major)
/// so the result is reproducible bit for bit.
pub fn pauli_operator_matrix(
    s: &Vector3<f64>,
    t: &Vector3<f64>,
    c: &Matrix3<f64>,
    gens: &Generators,
) -> CMat4 {
    let mut m = CMat4::zeros();
    for j in 0..3 {
        m += gens.sigma[j].map(|g| g.scale(s[j]));
    }
    for k in 0..3 {
        m += gens.tau[k].map(|g| g.scale(t[k]));
    }
    for j in 0..3 {
        for k in 0..3 {
            m += gens.prod[j][k].map(|g| g.scale(c[(j, k)]));
        }
    }
    m
}

pub fn frobenius_norm(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_entry(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermiticity defect: max entry of |M - M^H|.
pub fn hermiticity_defect(m: &CMat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian 4x4 matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat4) -> [f64; 4] {
    let vals = m.symmetric_eigenvalues();
    let mut out = [vals[0], vals[1], vals[2], vals[3]];
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Eigendecomposition of a Hermitian 4x4 matrix with eigenvalues ascending;
/// columns of the returned matrix are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMat4) -> ([f64; 4], CMat4) {
    let se = nalgebra::SymmetricEigen::new(*m);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals = std::array::from_fn(|i| se.eigenvalues[order[i]]);
    let vecs = CMat4::from_columns(&[
        se.eigenvectors.column(order[0]).into_owned(),
        se.eigenvectors.column(order[1]).into_owned(),
        se.eigenvectors.column(order[2]).into_owned(),
        se.eigenvectors.column(order[3]).into_owned(),
    ]);
    (vals, vecs)
}

/// Square root of a Hermitian PSD matrix; eigenvalues below zero are
/// clamped (they can only be rounding noise for a valid input).
pub fn psd_sqrt(m: &CMat4) -> CMat4 {
    let (vals, vecs) = hermitian_eigen(m);
    let mut out = CMat4::zeros();
    for i in 0..4 {
        let r = vals[i].max(0.0).sqrt();
        let v = vecs.column(i);
        for p in 0..4 {
            for q in 0..4 {
                out[(p, q)] += v[p] * v[q].conj() * r;
            }
        }
    }
    out
}

/// Sign-carrying proper SVD of a real 3x3 matrix:
/// `C = sign * E * diag(c) * N` with `sign = +1` iff `det C >= 0`,
/// `c` sorted descending and non-negative, and both `E` (columns) and `N`
/// (rows) proper rotations.
pub fn proper_svd3(c: &Matrix3<f64>) -> (f64, [f64; 3], Matrix3<f64>, Matrix3<f64>) {
    let det = c.determinant();
    let sign = if det >= 0.0 { 1.0 } else { -1.0 };
    let target = c.map(|x| sign * x);

    let svd = target.svd(true, true);
    let mut e = svd.u.unwrap();
    let mut n = svd.v_t.unwrap();
    let vals = svd.singular_values;
    let mut cvals = [vals[0], vals[1], vals[2]];

    // The dedicated 3x3 SVD can leave near-degenerate values marginally
    // out of order; sort, permuting the frame pairs along.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| cvals[b].partial_cmp(&cvals[a]).unwrap());
    if order != [0, 1, 2] {
        let old_e = e;
        let old_n = n;
        let old_c = cvals;
        for (slot, &src) in order.iter().enumerate() {
            e.set_column(slot, &old_e.column(src));
            n.set_row(slot, &old_n.row(src));
            cvals[slot] = old_c[src];
        }
    }

    let de = e.determinant();
    let dn = n.determinant();
    if de < 0.0 && dn < 0.0 {
        // Flip a column/row pair; the reconstruction is unchanged.
        for r in 0..3 {
            e[(r, 2)] = -e[(r, 2)];
            n[(2, r)] = -n[(2, r)];
        }
    } else if de < 0.0 {
        // det(target) >= 0 forces the smallest singular value to vanish
        // here, so the lone flip does not disturb the reconstruction.
        for r in 0..3 {
            e[(r, 2)] = -e[(r, 2)];
        }
        cvals[2] = 0.0;
    } else if dn < 0.0 {
        for r in 0..3 {
            n[(2, r)] = -n[(2, r)];
        }
        cvals[2] = 0.0;
    }
    (sign, cvals, e, n)
}

/// Largest real root of z^3 + a z^2 + b z + c.
fn largest_real_cubic_root(a: f64, b: f64, c: f64) -> f64 {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = 0.25 * q * q + p * p * p / 27.0;
    if disc > 0.0 {
        // single real root
        let s = disc.sqrt();
        shift + (-0.5 * q + s).cbrt() + (-0.5 * q - s).cbrt()
    } else {
        // three real roots; the k = 0 trigonometric branch is the largest
        let m = (-p / 3.0).sqrt();
        if m == 0.0 {
            return shift;
        }
        let cos_phi = (-0.5 * q / (m * m * m)).clamp(-1.0, 1.0);
        shift + 2.0 * m * (cos_phi.acos() / 3.0).cos()
    }
}

/// All four complex roots of kappa^4 - a2 kappa^2 + a1 kappa - a0.
///
/// The quartic is already depressed, so it factors into two quadratics
/// through the resolvent cubic; a few complex Newton steps polish the
/// result. Realness is judged by callers. (An iterative companion-matrix
/// eigensolve is not used here: QR iteration stalls on the nilpotent
/// companion matrix of kappa^4 = 0.)
pub fn quartic_depressed_roots(a2: f64, a1: f64, a0: f64) -> [C64; 4] {
    let p = -a2;
    let q = a1;
    let r = -a0;

    let mut roots = if q == 0.0 {
        // biquadratic
        let d = C64::new(p * p - 4.0 * r, 0.0).sqrt();
        let h1 = (C64::new(-p, 0.0) + d).scale(0.5).sqrt();
        let h2 = (C64::new(-p, 0.0) - d).scale(0.5).sqrt();
        [h1, -h1, h2, -h2]
    } else {
        // x^4 + p x^2 + q x + r = (x^2 + u x + v)(x^2 - u x + w) where
        // u^2 is a root of z^3 + 2p z^2 + (p^2 - 4r) z - q^2 = 0; the
        // resolvent is negative at z = 0, so its largest root is > 0.
        let z = largest_real_cubic_root(2.0 * p, p * p - 4.0 * r, -q * q).max(0.0);
        let u = z.sqrt();
        let w = 0.5 * (p + z + q / u);
        let v = 0.5 * (p + z - q / u);
        let d1 = C64::new(u * u - 4.0 * v, 0.0).sqrt();
        let d2 = C64::new(u * u - 4.0 * w, 0.0).sqrt();
        [
            (C64::new(-u, 0.0) + d1).scale(0.5),
            (C64::new(-u, 0.0) - d1).scale(0.5),
            (C64::new(u, 0.0) + d2).scale(0.5),
            (C64::new(u, 0.0) - d2).scale(0.5),
        ]
    };

    let poly = |x: C64| ((x * x - C64::new(a2, 0.0)) * x + C64::new(a1, 0.0)) * x
        - C64::new(a0, 0.0);
    let dpoly = |x: C64| (x * x).scale(4.0) * x - x.scale(2.0 * a2) + C64::new(a1, 0.0);
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let d = dpoly(*root);
            if d.norm() < 1e-12 {
                break;
            }
            let step = poly(*root) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *root -= step;
        }
    }
    roots
}
