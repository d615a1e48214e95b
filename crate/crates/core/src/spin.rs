//! The double cover SU(2) → SO(3) in Pauli coordinates, and its lift.
//!
//! A unitary `u` acts on ℍ₂ by `h ↦ u h u*`. That action fixes σ0 and
//! rotates the traceless coordinates (ax, ay, az) by a rotation `R`. The
//! kernel of `u ↦ R` is {±I}, so the lift back to SU(2) is only defined up to
//! sign; [`SpinU`] fixes that sign deterministically.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::mat2::{pauli_basis, Mat2, Tolerances, Unitary2, C64};

/// Components below this modulus are skipped when fixing the sign of a spin.
const SIGN_GAUGE_EPS: f64 = 1e-8;

/// An element of SU(2), sign-normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinU(Unitary2);

impl SpinU {
    pub fn new(u: Unitary2) -> Result<Self> {
        let deviation = (u.det() - C64::new(1.0, 0.0)).norm();
        if deviation > Tolerances::DEFAULT.eq {
            return Err(Error::NotSpecialUnitary { deviation });
        }
        Ok(SpinU(u))
    }

    /// Divides out a square root of the determinant and fixes the sign gauge.
    pub fn from_unitary(u: &Unitary2) -> Self {
        let root = u.det().sqrt();
        let m = u.mat().scale_c(root.inv());
        SpinU(Unitary2::from_mat_unchecked(m)).gauge_fixed()
    }

    pub fn identity() -> Self {
        SpinU(Unitary2::identity())
    }

    pub fn unitary(&self) -> Unitary2 {
        self.0
    }

    pub fn mat(&self) -> &Mat2 {
        self.0.mat()
    }

    pub fn neg(&self) -> SpinU {
        SpinU(Unitary2::from_mat_unchecked(-*self.0.mat()))
    }

    /// Chooses between ±u: the first of (Re u00, Im u00, Re u01, Im u01) with
    /// modulus above 1e-8 is made positive.
    pub fn gauge_fixed(&self) -> SpinU {
        let m = self.0.mat();
        let key = [m[(0, 0)].re, m[(0, 0)].im, m[(0, 1)].re, m[(0, 1)].im];
        match key.iter().find(|x| x.abs() > SIGN_GAUGE_EPS) {
            Some(x) if *x < 0.0 => self.neg(),
            _ => *self,
        }
    }
}

impl Mul for SpinU {
    type Output = SpinU;
    fn mul(self, rhs: SpinU) -> SpinU {
        SpinU(self.0.compose(&rhs.0))
    }
}

/// A 3×3 rotation matrix acting on (ax, ay, az).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot3(pub [[f64; 3]; 3]);

impl Rot3 {
    pub const IDENTITY: Rot3 = Rot3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn new(r: [[f64; 3]; 3]) -> Result<Self> {
        Self::with_tol(r, Tolerances::DEFAULT.eq)
    }

    pub fn with_tol(r: [[f64; 3]; 3], tol: f64) -> Result<Self> {
        let (orthogonality, det) = rotation_defect(&r);
        if !(orthogonality <= tol && (det - 1.0).abs() <= tol) {
            return Err(Error::NotRotation { orthogonality, det });
        }
        Ok(Rot3(r))
    }

    /// Rotation by `angle` about the unit `axis`.
    pub fn axis_angle(axis: [f64; 3], angle: f64) -> Rot3 {
        let [x, y, z] = axis;
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rot3([
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ])
    }

    pub fn transpose(&self) -> Rot3 {
        let r = &self.0;
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = r[j][i];
            }
        }
        Rot3(t)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let r = &self.0;
        [0, 1, 2].map(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2])
    }

    pub fn max_abs_diff(&self, other: &Rot3) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }
}

impl Mul for Rot3 {
    type Output = Rot3;
    fn mul(self, rhs: Rot3) -> Rot3 {
        Rot3(mat3_mul(&self.0, &rhs.0))
    }
}

pub(crate) fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub(crate) fn det3(r: &[[f64; 3]; 3]) -> f64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

/// (max |rᵀr − I|, det r).
pub(crate) fn rotation_defect(r: &[[f64; 3]; 3]) -> (f64, f64) {
    let mut orth: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((dot - target).abs());
        }
    }
    (orth, det3(r))
}

/// R_jk = ½ Tr(σ_j · u σ_k u*) over the traceless basis. Works for any
/// unitary; the global phase drops out.
pub fn rotation_of(u: &Unitary2) -> Rot3 {
    let basis = pauli_basis();
    let mut r = [[0.0; 3]; 3];
    for (k, sk) in basis[1..].iter().enumerate() {
        let image = sk.conjugate_by(u.mat()).pauli().vector();
        for j in 0..3 {
            r[j][k] = image[j];
        }
    }
    Rot3(r)
}

pub fn su2_to_so3(u: &SpinU) -> Rot3 {
    rotation_of(&u.unitary())
}

pub fn so3_to_su2(r: &Rot3) -> Result<SpinU> {
    so3_to_su2_with_tol(r, Tolerances::DEFAULT.eq)
}

/// Lift a rotation of Pauli coordinates to SU(2).
///
/// The quaternion is extracted with the four-branch maximal-diagonal rule,
/// which keeps the division well conditioned at angles near π. Since σy here
/// is minus the textbook σy, the y row and column are flipped before
/// extraction and the textbook correspondence
/// u = w·I − i(x σx + y σy' + z σz) (σy' the textbook matrix) is then used.
pub fn so3_to_su2_with_tol(r: &Rot3, tol: f64) -> Result<SpinU> {
    let (orthogonality, det) = rotation_defect(&r.0);
    if !(orthogonality <= tol && (det - 1.0).abs() <= tol) {
        return Err(Error::NotRotation { orthogonality, det });
    }
    let flip = [1.0, -1.0, 1.0];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = r.0[i][j] * flip[i] * flip[j];
        }
    }
    let tr = m[0][0] + m[1][1] + m[2][2];
    let q = if tr >= m[0][0] && tr >= m[1][1] && tr >= m[2][2] {
        let w = 0.5 * (1.0 + tr).max(0.0).sqrt();
        let k = 0.25 / w;
        [
            w,
            (m[2][1] - m[1][2]) * k,
            (m[0][2] - m[2][0]) * k,
            (m[1][0] - m[0][1]) * k,
        ]
    } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
        let x = 0.5 * (1.0 + m[0][0] - m[1][1] - m[2][2]).max(0.0).sqrt();
        let k = 0.25 / x;
        [
            (m[2][1] - m[1][2]) * k,
            x,
            (m[0][1] + m[1][0]) * k,
            (m[0][2] + m[2][0]) * k,
        ]
    } else if m[1][1] >= m[2][2] {
        let y = 0.5 * (1.0 - m[0][0] + m[1][1] - m[2][2]).max(0.0).sqrt();
        let k = 0.25 / y;
        [
            (m[0][2] - m[2][0]) * k,
            (m[0][1] + m[1][0]) * k,
            y,
            (m[1][2] + m[2][1]) * k,
        ]
    } else {
        let z = 0.5 * (1.0 - m[0][0] - m[1][1] + m[2][2]).max(0.0).sqrt();
        let k = 0.25 / z;
        [
            (m[1][0] - m[0][1]) * k,
            (m[0][2] + m[2][0]) * k,
            (m[1][2] + m[2][1]) * k,
            z,
        ]
    };
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    let u = Mat2::new(
        C64::new(w, -z),
        C64::new(-y, -x),
        C64::new(y, -x),
        C64::new(w, z),
    );
    Ok(SpinU(Unitary2::from_mat_unchecked(u)).gauge_fixed())
}
