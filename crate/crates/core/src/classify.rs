//! Classification of two-qubit states into families of locally
//! equivalent states.
//!
//! Local unitaries rotate the sigma- and tau-frames independently, so the
//! cross dyadic can always be brought to the diagonal form
//! `C = +- (e1 c1 n1 + e2 c2 n2 + e3 c3 n3)` with characteristic values
//! `c1 >= c2 >= c3 >= 0` (the minus sign applies when det C < 0). The
//! degeneracy pattern of the characteristic values splits all states into
//! six classes:
//!
//! ```text
//!     A: c1 = c2 = c3 = 0        B: c1 = c2 = c3 > 0
//!     C: c1 > c2 = c3 = 0        D: c1 > c2 = c3 > 0
//!     E: c1 = c2 > c3            F: c1 > c2 > c3
//! ```
//!
//! Classes B, D, E, F split further into +- subclasses; A and C always
//! carry the plus sign. The frame freedom left by the decomposition is
//! spent making as many of the s- and t-components in the adapted frames
//! vanish as possible and giving definite signs to most of the rest, so
//! each family of locally equivalent states is pinned down by nine
//! numbers: the three characteristic values and the canonical components
//! of s and t. Two states belong to the same family exactly when those
//! descriptors coincide.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::linalg::proper_svd3;
use crate::statecore::{CrossDyadic, PauliRep};

/// Overall sign of the characteristic decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    fn factor(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The six degeneracy classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Class {
    pub fn as_str(&self) -> &'static str {
        match self {
            Class::A => "A",
            Class::B => "B",
            Class::C => "C",
            Class::D => "D",
            Class::E => "E",
            Class::F => "F",
        }
    }
}

/// Class plus sign subclass. A and C always carry `Sign::Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub class: Class,
    pub sign: Sign,
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.class.as_str(), self.sign.as_str())
    }
}

/// Sign-carrying singular value decomposition of the cross dyadic:
/// `C = sign * (e1 c1 n1 + e2 c2 n2 + e3 c3 n3)` with proper rotation
/// frames (columns of `e_frame`, rows of `n_frame`).
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicDecomposition {
    pub sign: Sign,
    pub c: [f64; 3],
    pub e_frame: Matrix3<f64>,
    pub n_frame: Matrix3<f64>,
}

impl CharacteristicDecomposition {
    /// Rebuilds the cross dyadic from the decomposition.
    pub fn reconstruct(&self) -> Matrix3<f64> {
        let d = Matrix3::from_diagonal(&Vector3::new(self.c[0], self.c[1], self.c[2]));
        (self.e_frame * d * self.n_frame).map(|x| self.sign.factor() * x)
    }
}

/// The nine family parameters: characteristic values plus the canonical
/// s- and t-components, with the class label. Equal descriptors (within
/// tolerance) identify locally equivalent states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyDescriptor {
    pub label: ClassLabel,
    pub c: [f64; 3],
    pub s: [f64; 3],
    pub t: [f64; 3],
}

impl FamilyDescriptor {
    /// Largest entrywise difference of the nine parameters, or infinity
    /// when the labels differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.label != other.label {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..3 {
            worst = worst.max((self.c[i] - other.c[i]).abs());
            worst = worst.max((self.s[i] - other.s[i]).abs());
            worst = worst.max((self.t[i] - other.t[i]).abs());
        }
        worst
    }

    /// The representative state with identity frames: C = sign diag(c).
    pub fn rebuild_state(&self) -> PauliRep {
        let f = self.label.sign.factor();
        PauliRep {
            s: crate::statecore::BlochVector(Vector3::from_column_slice(&self.s)),
            t: crate::statecore::BlochVector(Vector3::from_column_slice(&self.t)),
            c: CrossDyadic::diagonal(f * self.c[0], f * self.c[1], f * self.c[2]),
        }
    }
}

/// The canonical frames fixed by `canonicalize`; applying them to the
/// descriptor's representative state reconstructs the input.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFrames {
    /// Columns are the adapted sigma-frame vectors.
    pub e_frame: Matrix3<f64>,
    /// Rows are the adapted tau-frame vectors.
    pub n_frame: Matrix3<f64>,
}

/// The auxiliary pair (a, b) built from the three local invariants of C;
/// they satisfy a^2 <= b^3, with equality exactly when two characteristic
/// values coincide (and b = 0 when all three do).
pub fn auxiliary_ab(p: &PauliRep) -> (f64, f64) {
    let c = &p.c.0;
    let ctc = c.transpose() * c;
    let tr = ctc.trace();
    let tr2 = (ctc * ctc).trace();
    let det = c.determinant();
    let a = 2.25 * tr * tr2 - 1.25 * tr * tr * tr + 13.5 * det * det;
    let b = 1.5 * tr2 - 0.5 * tr * tr;
    (a, b)
}

fn degeneracy_scale(c: &[f64; 3]) -> f64 {
    c[0].max(1.0)
}

/// Classifies by the degeneracy pattern of the characteristic values,
/// testing the class-table equalities (a^2 = b^3 and so on) through their
/// equivalent form as coincidences among the c_k, at relative tolerance
/// `tol * max(1, c1)`. The sign subclass follows det C.
pub fn class_of(p: &PauliRep, tol: f64) -> ClassLabel {
    let svd = p.c.0.svd(false, false);
    let c = [
        svd.singular_values[0],
        svd.singular_values[1],
        svd.singular_values[2],
    ];
    let scale = degeneracy_scale(&c);
    let zero = |x: f64| x <= tol * scale;
    let eq = |x: f64, y: f64| (x - y).abs() <= tol * scale;

    let class = if zero(c[0]) {
        Class::A
    } else if eq(c[0], c[1]) && eq(c[1], c[2]) {
        Class::B
    } else if eq(c[0], c[1]) {
        Class::E
    } else if eq(c[1], c[2]) {
        if zero(c[1]) {
            Class::C
        } else {
            Class::D
        }
    } else {
        Class::F
    };

    let det = p.c.determinant();
    let sign = if det < -(tol * scale).powi(3) {
        Sign::Minus
    } else {
        Sign::Plus
    };
    // A and C always carry the plus sign (their det C vanishes).
    let sign = match class {
        Class::A | Class::C => Sign::Plus,
        _ => sign,
    };
    ClassLabel { class, sign }
}

/// First world axis with a usable component orthogonal to `v` (unit),
/// normalized; completing `v` to a right-handed frame (v, a, v x a).
fn orthogonal_axis(v: &Vector3<f64>) -> Vector3<f64> {
    for ax in [Vector3::x(), Vector3::y(), Vector3::z()] {
        let w = ax - v * v.dot(&ax);
        if w.norm() > 0.3 {
            return w.normalize();
        }
    }
    unreachable!("a unit vector cannot be parallel to all three world axes")
}

fn orthonormalize_columns(m: &mut Matrix3<f64>) {
    let mut a = m.column(0).into_owned();
    a.normalize_mut();
    let mut b = m.column(1).into_owned();
    b -= a * a.dot(&b);
    b.normalize_mut();
    let mut c = m.column(2).into_owned();
    c -= a * a.dot(&c) + b * b.dot(&c);
    c.normalize_mut();
    m.set_column(0, &a);
    m.set_column(1, &b);
    m.set_column(2, &c);
}

/// Sign-carrying singular value decomposition of the cross dyadic with
/// deterministic frames: degenerate nonzero sectors are realigned toward
/// the world axes by a shared rotation, and zero sectors are completed
/// independently on both sides.
pub fn characteristic_decomposition(c: &CrossDyadic, tol: f64) -> CharacteristicDecomposition {
    let (sgn, cv, mut e, mut n) = proper_svd3(&c.0);
    let scale = degeneracy_scale(&cv);
    let zero_thr = tol * scale;

    // Degenerate nonzero groups share one rotation between the frames.
    let mut i = 0;
    while i < 3 {
        let mut j = i;
        while j + 1 < 3 && cv[i] - cv[j + 1] <= tol * scale && cv[j + 1] > zero_thr {
            j += 1;
        }
        if j > i && cv[i] > zero_thr {
            realign_group_to_world(&mut e, &mut n, i, j);
        }
        i = j + 1;
    }

    // Zero block: both frames are free independently; complete each from
    // the world axes and restore right-handedness on the last vector.
    let first_zero = (0..3).find(|&k| cv[k] <= zero_thr).unwrap_or(3);
    if first_zero < 3 {
        complete_zero_block_cols(&mut e, first_zero);
        let mut nt = n.transpose();
        complete_zero_block_cols(&mut nt, first_zero);
        n = nt.transpose();
    }

    CharacteristicDecomposition {
        sign: if sgn >= 0.0 { Sign::Plus } else { Sign::Minus },
        c: cv,
        e_frame: e,
        n_frame: n,
    }
}

/// Replaces the columns `lo..=hi` of `e` by the world axes projected into
/// their span (Gram-Schmidt), applying the compensating shared rotation
/// to the matching rows of `n`.
fn realign_group_to_world(e: &mut Matrix3<f64>, n: &mut Matrix3<f64>, lo: usize, hi: usize) {
    let size = hi - lo + 1;
    let cols: Vec<Vector3<f64>> = (lo..=hi).map(|k| e.column(k).into_owned()).collect();
    let project = |x: &Vector3<f64>| -> Vector3<f64> {
        cols.iter().map(|ek| ek * ek.dot(x)).sum()
    };

    let mut fresh: Vec<Vector3<f64>> = Vec::with_capacity(size);
    for ax in [Vector3::x(), Vector3::y(), Vector3::z()] {
        if fresh.len() == size {
            break;
        }
        let mut w = project(&ax);
        for f in &fresh {
            w -= f * f.dot(&w);
        }
        if w.norm() > 0.3 {
            fresh.push(w.normalize());
        }
    }
    // A d-dimensional subspace always yields d usable world projections.
    assert_eq!(fresh.len(), size, "degenerate subspace completion failed");

    // r[m][k] = <old_m, new_k>; enforce det = +1 by flipping the last
    // fresh vector if necessary, then rotate the n-rows along.
    let mut r = vec![vec![0.0f64; size]; size];
    let fill = |r: &mut Vec<Vec<f64>>, fresh: &Vec<Vector3<f64>>| {
        for (m, old) in cols.iter().enumerate() {
            for (k, new) in fresh.iter().enumerate() {
                r[m][k] = old.dot(new);
            }
        }
    };
    fill(&mut r, &fresh);
    let det = match size {
        2 => r[0][0] * r[1][1] - r[0][1] * r[1][0],
        _ => Matrix3::from_fn(|i, j| r[i][j]).determinant(),
    };
    if det < 0.0 {
        let flipped = -fresh[size - 1];
        fresh[size - 1] = flipped;
        fill(&mut r, &fresh);
    }

    for (k, f) in fresh.iter().enumerate() {
        e.set_column(lo + k, f);
    }
    let old_rows: Vec<Vector3<f64>> = (lo..=hi).map(|m| n.row(m).transpose()).collect();
    for k in 0..size {
        let mut new_row = Vector3::zeros();
        for (m, row) in old_rows.iter().enumerate() {
            new_row += row * r[m][k];
        }
        n.set_row(lo + k, &new_row.transpose());
    }
}

/// Completes the columns `from..` of `m` against the earlier ones using
/// world axes, then restores det = +1 by flipping the last column.
fn complete_zero_block_cols(m: &mut Matrix3<f64>, from: usize) {
    for k in from..3 {
        let mut chosen = None;
        for ax in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let mut w = ax;
            for prev in 0..k {
                let p = m.column(prev).into_owned();
                w -= p * p.dot(&w);
            }
            if w.norm() > 0.3 {
                chosen = Some(w.normalize());
                break;
            }
        }
        m.set_column(k, &chosen.expect("completion axis exists"));
    }
    if m.determinant() < 0.0 {
        let last = -m.column(2).into_owned();
        m.set_column(2, &last);
    }
}

/// Working copy of the adapted-frame data during canonicalization.
struct Working {
    /// s-components in the current e-frame.
    s: Vector3<f64>,
    /// t-components in the current n-frame.
    t: Vector3<f64>,
    e: Matrix3<f64>,
    n: Matrix3<f64>,
}

impl Working {
    fn apply_shared(&mut self, r: &Matrix3<f64>) {
        self.e *= r;
        self.n = r.transpose() * self.n;
        self.s = r.transpose() * self.s;
        self.t = r.transpose() * self.t;
    }

    fn apply_flip(&mut self, f: &[f64; 3]) {
        for k in 0..3 {
            if f[k] < 0.0 {
                let col = -self.e.column(k).into_owned();
                self.e.set_column(k, &col);
                let row = -self.n.row(k).into_owned();
                self.n.set_row(k, &row);
                self.s[k] = -self.s[k];
                self.t[k] = -self.t[k];
            }
        }
    }
}

/// Rotation in the (i, j) sector sending the sector components (x_i, x_j)
/// to (0, h) when `null_first`, or to (h, 0) otherwise.
fn sector_rotation(i: usize, j: usize, xi: f64, xj: f64, null_first: bool) -> Matrix3<f64> {
    let h = (xi * xi + xj * xj).sqrt();
    let mut r = Matrix3::identity();
    if h == 0.0 {
        return r;
    }
    let (a, b) = (xi / h, xj / h);
    if null_first {
        // columns ((xj, -xi), (xi, xj)) / h
        r[(i, i)] = b;
        r[(j, i)] = -a;
        r[(i, j)] = a;
        r[(j, j)] = b;
    } else {
        // columns ((xi, xj), (-xj, xi)) / h
        r[(i, i)] = a;
        r[(j, i)] = b;
        r[(i, j)] = -b;
        r[(j, j)] = a;
    }
    r
}

/// The four proper sign-flip patterns (pairs of simultaneous column/row
/// negations on both frames).
const FLIPS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [-1.0, -1.0, 1.0],
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
];

/// Picks the flip with the lexicographically best sign pattern on
/// (s1, t1, s2, t2, s3, t3), skipping flips that would negate a pinned
/// component. Ties break toward the earlier flip.
fn best_flip(w: &Working, tol: f64, pinned: &[(usize, bool)]) -> [f64; 3] {
    let mut best: Option<([i8; 6], [f64; 6], [f64; 3])> = None;
    'candidates: for f in FLIPS {
        for &(idx, is_s) in pinned {
            let val = if is_s { w.s[idx] } else { w.t[idx] };
            if f[idx] < 0.0 && val > tol {
                continue 'candidates;
            }
        }
        let vals = [
            f[0] * w.s[0],
            f[0] * w.t[0],
            f[1] * w.s[1],
            f[1] * w.t[1],
            f[2] * w.s[2],
            f[2] * w.t[2],
        ];
        let pattern: [i8; 6] = std::array::from_fn(|k| {
            if vals[k] > tol {
                1
            } else if vals[k] < -tol {
                -1
            } else {
                0
            }
        });
        let better = match &best {
            None => true,
            Some((bp, bv, _)) => match pattern.cmp(bp) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => vals.iter().gt(bv.iter()),
                std::cmp::Ordering::Less => false,
            },
        };
        if better {
            best = Some((pattern, vals, f));
        }
    }
    best.expect("the identity flip is always admissible").2
}

/// Brings a positive state to its canonical generic form: the class label,
/// the nine family parameters, and the frames that map the canonical
/// representative back onto the input.
pub fn canonicalize(p: &PauliRep, tol: f64) -> Result<(FamilyDescriptor, CanonicalFrames)> {
    let min_eig = p.to_matrix().min_eigenvalue();
    if min_eig < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }

    let label = class_of(p, tol);
    let (sgn, cv, e, n) = proper_svd3(&p.c.0);
    let mut w = Working {
        s: e.transpose() * p.s.0,
        t: n * p.t.0,
        e,
        n,
    };

    match label.class {
        Class::A => canonicalize_a(p, &mut w, tol),
        Class::B => canonicalize_b(p, &mut w, sgn, &cv, tol),
        Class::C => canonicalize_c(p, &mut w, &cv, tol),
        Class::D => canonicalize_sector(&mut w, 1, 2, tol),
        Class::E => canonicalize_sector(&mut w, 0, 1, tol),
        Class::F => {
            let f = best_flip(&w, tol, &[]);
            w.apply_flip(&f);
        }
    }

    let descriptor = FamilyDescriptor {
        label,
        c: cv,
        s: [w.s[0], w.s[1], w.s[2]],
        t: [w.t[0], w.t[1], w.t[2]],
    };
    let frames = CanonicalFrames {
        e_frame: w.e,
        n_frame: w.n,
    };
    Ok((descriptor, frames))
}

/// Class A: C = 0, so both frames are free and independent; align each
/// with its Bloch vector.
fn canonicalize_a(p: &PauliRep, w: &mut Working, tol: f64) {
    let e1 = if p.s.norm() > tol {
        p.s.0.normalize()
    } else {
        Vector3::x()
    };
    let e2 = orthogonal_axis(&e1);
    let e3 = e1.cross(&e2);
    w.e = Matrix3::from_columns(&[e1, e2, e3]);

    let n1 = if p.t.norm() > tol {
        p.t.0.normalize()
    } else {
        Vector3::x()
    };
    let n2 = orthogonal_axis(&n1);
    let n3 = n1.cross(&n2);
    w.n = Matrix3::from_columns(&[n1, n2, n3]).transpose();

    w.s = w.e.transpose() * p.s.0;
    w.t = w.n * p.t.0;
}

/// Class B: C is sign * c * Q for a rotation Q, so the whole e-frame is
/// free and the n-frame follows through Q. Align e1 with s, then spend
/// the shared rotation about axis 1 on t (or start from t when s = 0).
fn canonicalize_b(p: &PauliRep, w: &mut Working, sgn: f64, cv: &[f64; 3], tol: f64) {
    let cbar = (cv[0] + cv[1] + cv[2]) / 3.0;
    let q = p.c.0.map(|x| x / (sgn * cbar));

    if p.s.norm() > tol {
        let e1 = p.s.0.normalize();
        let n1 = (q.transpose() * e1).normalize();
        let t1 = n1.dot(&p.t.0);
        let t_perp = p.t.0 - n1 * t1;
        let n3 = if t_perp.norm() > tol {
            t_perp.normalize()
        } else {
            orthogonal_axis(&n1)
        };
        let n2 = n3.cross(&n1);
        w.n = Matrix3::from_columns(&[n1, n2, n3]).transpose();
        let mut e = q * w.n.transpose();
        orthonormalize_columns(&mut e);
        w.e = e;
    } else if p.t.norm() > tol {
        let n1 = p.t.0.normalize();
        let e1 = (q * n1).normalize();
        let e2 = orthogonal_axis(&e1);
        let e3 = e1.cross(&e2);
        w.e = Matrix3::from_columns(&[e1, e2, e3]);
        let mut nt = q.transpose() * w.e;
        orthonormalize_columns(&mut nt);
        w.n = nt.transpose();
    } else {
        w.e = Matrix3::identity();
        let mut nt = q.transpose();
        orthonormalize_columns(&mut nt);
        w.n = nt.transpose();
    }
    w.s = w.e.transpose() * p.s.0;
    w.t = w.n * p.t.0;
}

/// Class C: only c1 is nonzero, fixing the (e1, n1) pair up to a joint
/// flip; the 2-3 sectors of the two frames rotate independently and are
/// aligned with the transverse parts of s and t.
fn canonicalize_c(p: &PauliRep, w: &mut Working, cv: &[f64; 3], tol: f64) {
    let e1 = w.e.column(0).into_owned();
    let n1 = (p.c.0.transpose() * e1 / cv[0]).normalize();

    let s1 = e1.dot(&p.s.0);
    let s_perp = p.s.0 - e1 * s1;
    let e3 = if s_perp.norm() > tol {
        s_perp.normalize()
    } else {
        orthogonal_axis(&e1)
    };
    let e2 = e3.cross(&e1);
    w.e = Matrix3::from_columns(&[e1, e2, e3]);

    let t1 = n1.dot(&p.t.0);
    let t_perp = p.t.0 - n1 * t1;
    let n3 = if t_perp.norm() > tol {
        t_perp.normalize()
    } else {
        orthogonal_axis(&n1)
    };
    let n2 = n3.cross(&n1);
    w.n = Matrix3::from_columns(&[n1, n2, n3]).transpose();

    w.s = w.e.transpose() * p.s.0;
    w.t = w.n * p.t.0;

    // Joint flip of the 1-2 pairs: make s1 >= 0, falling back to t1.
    if w.s[0] < -tol || (w.s[0].abs() <= tol && w.t[0] < -tol) {
        w.apply_flip(&[-1.0, -1.0, 1.0]);
    }
}

/// Classes D and E: one shared rotation in the degenerate (i, j) sector,
/// spent on s when it has a transverse part and on t otherwise, then the
/// discrete flips. Class D (sector 2-3) nulls the first sector slot so
/// s lands on (s1, 0, s3); class E (sector 1-2) nulls the second slot so
/// s lands on (s1, 0, s3) as well.
fn canonicalize_sector(w: &mut Working, i: usize, j: usize, tol: f64) {
    let mut pinned: Vec<(usize, bool)> = Vec::new();
    let s_sector = (w.s[i] * w.s[i] + w.s[j] * w.s[j]).sqrt();
    let t_sector = (w.t[i] * w.t[i] + w.t[j] * w.t[j]).sqrt();
    let null_first = i == 1; // D: (s2, s3) -> (0, h); E: (s1, s2) -> (h, 0)
    if s_sector > tol {
        let r = sector_rotation(i, j, w.s[i], w.s[j], null_first);
        w.apply_shared(&r);
        pinned.push((if null_first { j } else { i }, true));
    } else if t_sector > tol {
        let r = sector_rotation(i, j, w.t[i], w.t[j], null_first);
        w.apply_shared(&r);
        pinned.push((if null_first { j } else { i }, false));
    }
    let f = best_flip(w, tol, &pinned);
    w.apply_flip(&f);
}

/// Whether two positive states belong to the same family of locally
/// equivalent states, i.e. whether their canonical descriptors agree
/// entrywise within `tol`.
pub fn same_family(p: &PauliRep, q: &PauliRep, tol: f64) -> Result<bool> {
    let (dp, _) = canonicalize(p, tol)?;
    let (dq, _) = canonicalize(q, tol)?;
    Ok(dp.max_abs_diff(&dq) <= tol)
}
