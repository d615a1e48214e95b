//! Closed-form 2×2 complex matrix algebra.
//!
//! Hermitian matrices are handled through their coordinates in the
//! orthonormal basis {σ0, σx, σy, σz} of ℍ₂ under ⟨X,Y⟩ = ½ Tr XY, with
//!
//! ```text
//! σ0 = [[1,0],[0,1]]  σx = [[0,1],[1,0]]  σy = [[0,i],[-i,0]]  σz = [[1,0],[0,-1]]
//! ```
//!
//! Note that σy here is the negative of the usual physics convention. Every
//! spectral function (exp, log, sqrt, powers) is evaluated through the
//! spectral projectors ½(I ± n·σ), so no iterative eigensolver is involved.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical thresholds shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity check, relative to `max(1, max |entry|)`.
    pub herm: f64,
    /// Positivity threshold for eigenvalues and determinants.
    pub pd: f64,
    /// Equality of computed matrices, relative to the operand scale.
    pub eq: f64,
    /// Classification decisions and black-box residuals.
    pub class: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        herm: 1e-12,
        pd: 1e-12,
        eq: 1e-9,
        class: 1e-6,
    };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("herm", self.herm),
            ("pd", self.pd),
            ("eq", self.eq),
            ("class", self.class),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    pub fn from_parts(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> Self {
        let mut out = Mat2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = C64::new(re[i][j], im[i][j]);
            }
        }
        out
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Mat2::from_real([[a, 0.0], [0.0, b]])
    }

    pub fn scalar(a: f64) -> Self {
        Mat2::diag(a, a)
    }

    pub fn re(&self) -> [[f64; 2]; 2] {
        let m = &self.0;
        [[m[0][0].re, m[0][1].re], [m[1][0].re, m[1][1].re]]
    }

    pub fn im(&self) -> [[f64; 2]; 2] {
        let m = &self.0;
        [[m[0][0].im, m[0][1].im], [m[1][0].im, m[1][1].im]]
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Adjugate; for 2×2 matrices this is (Tr A)I − A up to the sign swap of
    /// the off-diagonal entries, and satisfies adj(A)·A = det(A)·I.
    pub fn adj(&self) -> Self {
        let m = &self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn inv(&self, tol_pd: f64) -> Result<Self> {
        let det = self.det();
        if det.norm() <= tol_pd {
            return Err(Error::Singular { det: det.norm() });
        }
        Ok(self.adj().scale_c(det.inv()))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn frobenius(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// ‖self − other‖_F / (1 + ‖other‖_F).
    pub fn rel_dist(&self, other: &Mat2) -> f64 {
        (*self - *other).frobenius() / (1.0 + other.frobenius())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale(rhs)
    }
}

/// Coordinates of a Hermitian matrix in the basis {σ0, σx, σy, σz}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliCoords {
    pub a0: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl PauliCoords {
    pub fn new(a0: f64, ax: f64, ay: f64, az: f64) -> Self {
        PauliCoords { a0, ax, ay, az }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a0, self.ax, self.ay, self.az]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        PauliCoords::new(a[0], a[1], a[2], a[3])
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }

    pub fn dot(&self, other: &PauliCoords) -> f64 {
        self.a0 * other.a0 + self.ax * other.ax + self.ay * other.ay + self.az * other.az
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// The four basis matrices, as Hermitian values.
pub fn pauli_basis() -> [Herm2; 4] {
    [
        Herm2::from_pauli(PauliCoords::new(1.0, 0.0, 0.0, 0.0)),
        Herm2::from_pauli(PauliCoords::new(0.0, 1.0, 0.0, 0.0)),
        Herm2::from_pauli(PauliCoords::new(0.0, 0.0, 1.0, 0.0)),
        Herm2::from_pauli(PauliCoords::new(0.0, 0.0, 0.0, 1.0)),
    ]
}

/// A Hermitian matrix, stored exactly Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm2(Mat2);

impl Herm2 {
    pub fn new(m: Mat2) -> Result<Self> {
        Self::with_tol(m, Tolerances::DEFAULT.herm)
    }

    /// Checks `m = m*` up to `tol · max(1, max |entry|)` and symmetrizes.
    pub fn with_tol(m: Mat2, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = (m - m.adjoint()).max_abs();
        if deviation > tol * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrize(m))
    }

    /// (m + m*)/2 without any check. Used where Hermiticity holds by construction.
    pub fn symmetrize(m: Mat2) -> Self {
        let s = (m + m.adjoint()).scale(0.5);
        let mut out = s.0;
        out[0][0].im = 0.0;
        out[1][1].im = 0.0;
        Herm2(Mat2(out))
    }

    pub fn from_pauli(c: PauliCoords) -> Self {
        Herm2(Mat2([
            [C64::new(c.a0 + c.az, 0.0), C64::new(c.ax, c.ay)],
            [C64::new(c.ax, -c.ay), C64::new(c.a0 - c.az, 0.0)],
        ]))
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Herm2(Mat2::diag(a, b))
    }

    pub fn scalar(a: f64) -> Self {
        Herm2(Mat2::scalar(a))
    }

    pub fn zero() -> Self {
        Herm2(Mat2::ZERO)
    }

    pub fn identity() -> Self {
        Herm2(Mat2::IDENTITY)
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_mat(self) -> Mat2 {
        self.0
    }

    pub fn pauli(&self) -> PauliCoords {
        pauli_decompose(self)
    }

    pub fn add(&self, other: &Herm2) -> Herm2 {
        Herm2(self.0 + other.0)
    }

    pub fn sub(&self, other: &Herm2) -> Herm2 {
        Herm2(self.0 - other.0)
    }

    pub fn scale(&self, s: f64) -> Herm2 {
        Herm2(self.0.scale(s))
    }

    pub fn trace(&self) -> f64 {
        self.0[(0, 0)].re + self.0[(1, 1)].re
    }

    /// Real determinant h00·h11 − |h01|².
    pub fn det(&self) -> f64 {
        let m = &self.0 .0;
        m[0][0].re * m[1][1].re - m[0][1].norm_sqr()
    }

    /// Traceless part h − (½ Tr h)·I.
    pub fn traceless_part(&self) -> Traceless2 {
        let mut c = self.pauli();
        c.a0 = 0.0;
        Traceless2(Herm2::from_pauli(c))
    }

    /// Eigenvalues (λ1 ≥ λ2).
    pub fn eigenvalues(&self) -> (f64, f64) {
        let c = self.pauli();
        let r = half_gap(&c);
        (c.a0 + r, c.a0 - r)
    }

    /// f(h) through the spectral projectors.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Herm2 {
        let c = self.pauli();
        let r = half_gap(&c);
        let l1 = c.a0 + r;
        if degenerate(l1, c.a0 - r, Tolerances::DEFAULT.pd) {
            return Herm2::scalar(f(c.a0));
        }
        let (f1, f2) = (f(l1), f(c.a0 - r));
        let mean = 0.5 * (f1 + f2);
        let slope = 0.5 * (f1 - f2) / r;
        Herm2::from_pauli(PauliCoords::new(
            mean,
            slope * c.ax,
            slope * c.ay,
            slope * c.az,
        ))
    }

    /// u·h·u*.
    pub fn conjugate_by(&self, u: &Mat2) -> Herm2 {
        Herm2::symmetrize(*u * self.0 * u.adjoint())
    }

    /// a·h·a for Hermitian a (congruence).
    pub fn sandwich(a: &Herm2, b: &Herm2) -> Herm2 {
        Herm2::symmetrize(a.0 * b.0 * a.0)
    }
}

impl std::ops::Index<(usize, usize)> for Mat2 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

fn half_gap(c: &PauliCoords) -> f64 {
    (c.ax * c.ax + c.ay * c.ay + c.az * c.az).sqrt()
}

fn degenerate(l1: f64, l2: f64, tol_pd: f64) -> bool {
    (l1 - l2).abs() <= tol_pd * l1.abs().max(1.0)
}

/// A traceless Hermitian matrix, an element of ℍ₂,₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Traceless2(Herm2);

impl Traceless2 {
    /// Projects onto the traceless subspace.
    pub fn project(h: &Herm2) -> Self {
        h.traceless_part()
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        Traceless2(Herm2::from_pauli(PauliCoords::new(0.0, v[0], v[1], v[2])))
    }

    pub fn herm(&self) -> &Herm2 {
        &self.0
    }

    pub fn vector(&self) -> [f64; 3] {
        self.0.pauli().vector()
    }
}

/// A strictly positive definite matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pd2(Herm2);

impl Pd2 {
    pub fn new(h: Herm2) -> Result<Self> {
        Self::with_tol(h, Tolerances::DEFAULT.pd)
    }

    pub fn with_tol(h: Herm2, tol_pd: f64) -> Result<Self> {
        let (_, l2) = h.eigenvalues();
        if l2 > tol_pd {
            Ok(Pd2(h))
        } else {
            Err(Error::NotPositiveDefinite { min_eigenvalue: l2 })
        }
    }

    pub fn from_mat(m: Mat2) -> Result<Self> {
        Pd2::new(Herm2::new(m)?)
    }

    pub fn diag(a: f64, b: f64) -> Result<Self> {
        Pd2::new(Herm2::diag(a, b))
    }

    pub fn identity() -> Self {
        Pd2(Herm2::identity())
    }

    pub fn herm(&self) -> &Herm2 {
        &self.0
    }

    pub fn mat(&self) -> &Mat2 {
        self.0.mat()
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    pub fn inv(&self) -> Pd2 {
        Pd2(self.0.map_spectrum(|x| 1.0 / x))
    }

    pub fn sqrt(&self) -> Pd2 {
        Pd2(self.0.map_spectrum(f64::sqrt))
    }

    pub fn powf(&self, p: f64) -> Pd2 {
        Pd2(self.0.map_spectrum(|x| x.powf(p)))
    }

    pub fn log(&self) -> Herm2 {
        self.0.map_spectrum(f64::ln)
    }

    /// A·B·A (Jordan triple product); positive definite by congruence.
    pub fn triple(&self, b: &Pd2) -> Pd2 {
        Pd2(Herm2::sandwich(&self.0, &b.0))
    }

    pub fn scale(&self, s: f64) -> Pd2 {
        debug_assert!(s > 0.0);
        Pd2(self.0.scale(s))
    }

    pub fn conjugate_by(&self, u: &Mat2) -> Pd2 {
        Pd2(self.0.conjugate_by(u))
    }

    pub(crate) fn from_herm_unchecked(h: Herm2) -> Self {
        Pd2(h)
    }
}

/// An effect: 0 ≤ A ≤ I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effect2(Herm2);

impl Effect2 {
    pub fn new(h: Herm2) -> Result<Self> {
        Self::with_tol(h, Tolerances::DEFAULT.pd)
    }

    pub fn with_tol(h: Herm2, tol_pd: f64) -> Result<Self> {
        let (hi, lo) = h.eigenvalues();
        if lo >= -tol_pd && hi <= 1.0 + tol_pd {
            Ok(Effect2(h))
        } else {
            Err(Error::NotEffect { lo, hi })
        }
    }

    pub fn from_mat(m: Mat2) -> Result<Self> {
        Effect2::new(Herm2::new(m)?)
    }

    pub fn diag(a: f64, b: f64) -> Result<Self> {
        Effect2::new(Herm2::diag(a, b))
    }

    pub fn zero() -> Self {
        Effect2(Herm2::zero())
    }

    pub fn identity() -> Self {
        Effect2(Herm2::identity())
    }

    pub fn herm(&self) -> &Herm2 {
        &self.0
    }

    pub fn mat(&self) -> &Mat2 {
        self.0.mat()
    }

    /// Determinant, clipped at 0 against rounding.
    pub fn det(&self) -> f64 {
        self.0.det().max(0.0)
    }

    /// Square root; eigenvalues within rounding of 0 (relative to the
    /// largest) are taken as exactly 0.
    pub fn sqrt(&self) -> Effect2 {
        let floor = 8.0 * f64::EPSILON * self.0.eigenvalues().0.max(0.0);
        Effect2(
            self.0
                .map_spectrum(|x| if x <= floor { 0.0 } else { x.sqrt() }),
        )
    }

    pub fn is_invertible(&self, tol_pd: f64) -> bool {
        self.0.eigenvalues().1 > tol_pd
    }

    pub fn to_pd(&self) -> Result<Pd2> {
        Pd2::new(self.0)
    }

    pub fn conjugate_by(&self, u: &Mat2) -> Effect2 {
        Effect2(self.0.conjugate_by(u))
    }

    pub(crate) fn from_herm_unchecked(h: Herm2) -> Self {
        Effect2(h)
    }
}

/// A 2×2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn new(m: Mat2) -> Result<Self> {
        Self::with_tol(m, Tolerances::DEFAULT.eq)
    }

    pub fn with_tol(m: Mat2, tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = (m * m.adjoint() - Mat2::IDENTITY).max_abs();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary2(m))
    }

    pub fn identity() -> Self {
        Unitary2(Mat2::IDENTITY)
    }

    /// The matrix [[0,1],[−1,0]].
    pub fn j() -> Self {
        Unitary2(Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]))
    }

    /// Column swap [[0,1],[1,0]].
    pub fn swap() -> Self {
        Unitary2(Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]))
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary2(self.0.adjoint())
    }

    pub fn compose(&self, other: &Unitary2) -> Unitary2 {
        Unitary2(self.0 * other.0)
    }

    pub fn det(&self) -> C64 {
        self.0.det()
    }

    pub fn scale_phase(&self, phase: C64) -> Unitary2 {
        Unitary2(self.0.scale_c(phase / phase.norm()))
    }

    pub fn column(&self, j: usize) -> [C64; 2] {
        [self.0 .0[0][j], self.0 .0[1][j]]
    }

    pub(crate) fn from_mat_unchecked(m: Mat2) -> Self {
        Unitary2(m)
    }

    /// Smallest entrywise distance to ζ·other over unimodular ζ.
    pub fn phase_distance(&self, other: &Unitary2) -> f64 {
        let overlap = (other.0.adjoint() * self.0).trace();
        let zeta = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (self.0 - other.0.scale_c(zeta)).max_abs()
    }
}

/// Spectral decomposition h = u·diag(λ1, λ2)·u*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eig2 {
    pub l1: f64,
    pub l2: f64,
    pub u: Unitary2,
}

/// First component of a vector whose modulus exceeds this is taken as
/// "nonzero" when fixing the eigenvector phase.
const GAUGE_EPS: f64 = 1e-12;

fn gauge_column(v: [C64; 2]) -> [C64; 2] {
    let lead = if v[0].norm() > GAUGE_EPS { v[0] } else { v[1] };
    if lead.norm() == 0.0 {
        return v;
    }
    let phase = lead.conj() / lead.norm();
    [v[0] * phase, v[1] * phase]
}

/// Closed-form eigendecomposition with λ1 ≥ λ2 and gauge-fixed columns
/// (first nonzero component real and ≥ 0). Degenerate spectra give u = I.
pub fn eig2(h: &Herm2) -> Eig2 {
    let c = h.pauli();
    let r = half_gap(&c);
    let (l1, l2) = (c.a0 + r, c.a0 - r);
    if degenerate(l1, l2, Tolerances::DEFAULT.pd) {
        return Eig2 {
            l1,
            l2,
            u: Unitary2::identity(),
        };
    }
    let (nx, ny, nz) = (c.ax / r, c.ay / r, c.az / r);
    // Columns of the projector ½(I + n·σ) span the λ1 eigenspace.
    let col0 = [C64::new(1.0 + nz, 0.0), C64::new(nx, -ny)];
    let col1 = [C64::new(nx, ny), C64::new(1.0 - nz, 0.0)];
    let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&col0) >= norm(&col1) {
        col0
    } else {
        col1
    };
    let n = norm(&v);
    let v1 = gauge_column([v[0] / n, v[1] / n]);
    let v2 = gauge_column([-v1[1].conj(), v1[0].conj()]);
    Eig2 {
        l1,
        l2,
        u: Unitary2(Mat2([[v1[0], v2[0]], [v1[1], v2[1]]])),
    }
}

pub fn pauli_decompose(h: &Herm2) -> PauliCoords {
    let m = &h.0 .0;
    PauliCoords {
        a0: 0.5 * (m[0][0].re + m[1][1].re),
        ax: m[0][1].re,
        ay: m[0][1].im,
        az: 0.5 * (m[0][0].re - m[1][1].re),
    }
}

pub fn pauli_recompose(c: PauliCoords) -> Herm2 {
    Herm2::from_pauli(c)
}

/// ⟨x, y⟩ = ½ Tr(xy).
pub fn hs_inner(x: &Herm2, y: &Herm2) -> f64 {
    0.5 * (x.0 * y.0).trace().re
}

pub fn hs_norm(x: &Herm2) -> f64 {
    pauli_decompose(x).norm()
}

/// Operator norm: max |λ|.
pub fn spec_norm(x: &Herm2) -> f64 {
    let c = x.pauli();
    c.a0.abs() + half_gap(&c)
}

pub fn mexp(h: &Herm2) -> Pd2 {
    Pd2(h.map_spectrum(f64::exp))
}

/// cosh‖X‖·I + sinh‖X‖·X/‖X‖ for traceless X.
pub fn mexp_traceless(x: &Traceless2) -> Pd2 {
    let n = hs_norm(&x.0);
    if n == 0.0 {
        return Pd2::identity();
    }
    let c = x.0.pauli();
    let s = n.sinh() / n;
    Pd2(Herm2::from_pauli(PauliCoords::new(
        n.cosh(),
        s * c.ax,
        s * c.ay,
        s * c.az,
    )))
}

pub fn mlog(p: &Pd2) -> Result<Herm2> {
    mlog_with_tol(p.herm(), Tolerances::DEFAULT.pd)
}

/// Principal logarithm of a Hermitian matrix that is expected to be positive
/// definite.
pub fn mlog_with_tol(h: &Herm2, tol_pd: f64) -> Result<Herm2> {
    let (_, l2) = h.eigenvalues();
    if l2 <= tol_pd {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: l2 });
    }
    Ok(h.map_spectrum(f64::ln))
}

/// Square root of a positive semi-definite matrix; eigenvalues in
/// [−tol_pd, 0) are clipped to 0.
pub fn msqrt(h: &Herm2) -> Result<Herm2> {
    let (_, l2) = h.eigenvalues();
    if l2 < -Tolerances::DEFAULT.pd {
        return Err(Error::NotPsd { min_eigenvalue: l2 });
    }
    Ok(h.map_spectrum(|x| x.max(0.0).sqrt()))
}
