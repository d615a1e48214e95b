//! The three canonical families of continuous Jordan triple endomorphisms of
//! the positive definite cone P₂:
//!
//! * `B1(U, c)`:  A ↦ (Det A)^c · U A U*
//! * `B2(V, d)`:  A ↦ (Det A)^d · V A⁻¹ V*
//! * `B3(W, c1, c2)`:  A ↦ W · diag((Det A)^c1, (Det A)^c2) · W*

use crate::linearize::LinMapH2;
use crate::mat2::{mexp, Herm2, Mat2, PauliCoords, Pd2, Unitary2};
use crate::spin::rotation_of;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JteForm {
    B1 { u: Unitary2, c: f64 },
    B2 { v: Unitary2, d: f64 },
    B3 { w: Unitary2, c1: f64, c2: f64 },
}

/// Which canonical family a form belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JteKind {
    B1,
    B2,
    B3,
}

impl JteForm {
    pub fn kind(&self) -> JteKind {
        match self {
            JteForm::B1 { .. } => JteKind::B1,
            JteForm::B2 { .. } => JteKind::B2,
            JteForm::B3 { .. } => JteKind::B3,
        }
    }

    pub fn unitary(&self) -> &Unitary2 {
        match self {
            JteForm::B1 { u, .. } => u,
            JteForm::B2 { v, .. } => v,
            JteForm::B3 { w, .. } => w,
        }
    }

    pub fn identity() -> Self {
        JteForm::B1 {
            u: Unitary2::identity(),
            c: 0.0,
        }
    }

    pub fn apply(&self, a: &Pd2) -> Pd2 {
        let det = a.det();
        match *self {
            JteForm::B1 { u, c } => a.conjugate_by(u.mat()).scale(det.powf(c)),
            JteForm::B2 { v, d } => {
                // D^d · A⁻¹ = D^(d-1) · adj A
                let adj = Herm2::symmetrize(a.mat().adj());
                Pd2::from_herm_unchecked(adj.conjugate_by(v.mat()).scale(det.powf(d - 1.0)))
            }
            JteForm::B3 { w, c1, c2 } => Pd2::from_herm_unchecked(
                Herm2::diag(det.powf(c1), det.powf(c2)).conjugate_by(w.mat()),
            ),
        }
    }

    /// k such that Det(apply(A)) = (Det A)^k.
    pub fn det_exponent(&self) -> f64 {
        match *self {
            JteForm::B1 { c, .. } => 2.0 * c + 1.0,
            JteForm::B2 { d, .. } => 2.0 * d - 1.0,
            JteForm::B3 { c1, c2, .. } => c1 + c2,
        }
    }

    /// B3 with c1 ≥ c2 (W's columns swapped to match); other forms unchanged.
    pub fn normalized(&self) -> JteForm {
        match *self {
            JteForm::B3 { w, c1, c2 } if c1 < c2 => JteForm::B3 {
                w: w.compose(&Unitary2::swap()),
                c1: c2,
                c2: c1,
            },
            other => other,
        }
    }

    /// Bijectivity criterion: B1 needs c ≠ −½, B2 needs
    /// d ≠ ½, and B3 never is one (its range commutes).
    pub fn is_automorphism(&self) -> bool {
        match *self {
            JteForm::B1 { c, .. } => c != -0.5,
            JteForm::B2 { d, .. } => d != 0.5,
            JteForm::B3 { .. } => false,
        }
    }

    /// The linear map f on ℍ₂ with apply(A) = exp(f(log A)), in closed form.
    pub fn log_linear_map(&self) -> LinMapH2 {
        let mut f = [[0.0; 4]; 4];
        match *self {
            JteForm::B1 { u, c } => {
                f[0][0] = 1.0 + 2.0 * c;
                let r = rotation_of(&u);
                for i in 0..3 {
                    for j in 0..3 {
                        f[i + 1][j + 1] = r.0[i][j];
                    }
                }
            }
            JteForm::B2 { v, d } => {
                f[0][0] = 2.0 * d - 1.0;
                let r = rotation_of(&v);
                for i in 0..3 {
                    for j in 0..3 {
                        f[i + 1][j + 1] = -r.0[i][j];
                    }
                }
            }
            JteForm::B3 { w, c1, c2 } => {
                let col = Herm2::diag(2.0 * c1, 2.0 * c2)
                    .conjugate_by(w.mat())
                    .pauli()
                    .to_array();
                for (i, v) in col.iter().enumerate() {
                    f[i][0] = *v;
                }
            }
        }
        LinMapH2::new(f)
    }

    /// Decides whether two forms define the same map on P₂.
    ///
    /// Within a family the parameters are compared modulo their gauge
    /// freedom (global phase of U or V; column phases and, for c1 = c2, all
    /// of W). Across families the maps are compared on a fixed probe set.
    pub fn gauge_equal(&self, other: &JteForm, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0);
        match (self.normalized(), other.normalized()) {
            (JteForm::B1 { u: u1, c: a }, JteForm::B1 { u: u2, c: b })
            | (JteForm::B2 { v: u1, d: a }, JteForm::B2 { v: u2, d: b }) => {
                close(a, b) && u1.phase_distance(&u2) <= tol
            }
            (
                JteForm::B3 {
                    w: w1,
                    c1: a1,
                    c2: a2,
                },
                JteForm::B3 {
                    w: w2,
                    c1: b1,
                    c2: b2,
                },
            ) => {
                if !(close(a1, b1) && close(a2, b2)) {
                    return false;
                }
                if close(a1, a2) {
                    return true;
                }
                let m = w1.mat().adjoint() * *w2.mat();
                m[(0, 1)].norm() <= tol && m[(1, 0)].norm() <= tol
            }
            (a, b) => probes()
                .iter()
                .all(|p| a.apply(p).mat().rel_dist(b.apply(p).mat()) <= tol),
        }
    }
}

/// Probe set used to compare forms from different families:
/// exp(±σ/2) for each traceless basis element, e·I and e⁻¹·I.
pub fn probes() -> Vec<Pd2> {
    let mut out = Vec::with_capacity(8);
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[axis] = 0.5 * sign;
            out.push(mexp(&Herm2::from_pauli(PauliCoords::new(
                0.0, v[0], v[1], v[2],
            ))));
        }
    }
    out.push(mexp(&Herm2::scalar(1.0)));
    out.push(mexp(&Herm2::scalar(-1.0)));
    out
}

/// A·B·A.
pub fn jordan_triple(a: &Pd2, b: &Pd2) -> Pd2 {
    a.triple(b)
}

/// The form of `A ↦ e2(e1(A))`.
///
/// With k = det exponent of e1, the composite's exponents follow from
/// Det(e1(A)) = (Det A)^k.
pub fn compose(e2: &JteForm, e1: &JteForm) -> JteForm {
    let k = e1.det_exponent();
    match (*e2, *e1) {
        (JteForm::B1 { u: u2, c: c2 }, JteForm::B1 { u: u1, c: c1 }) => JteForm::B1 {
            u: u2.compose(&u1),
            c: c1 + c2 * k,
        },
        (JteForm::B1 { u: u2, c: c2 }, JteForm::B2 { v: v1, d: d1 }) => JteForm::B2 {
            v: u2.compose(&v1),
            d: d1 + c2 * k,
        },
        (JteForm::B1 { u: u2, c: c2 }, JteForm::B3 { w, c1: a, c2: b }) => JteForm::B3 {
            w: u2.compose(&w),
            c1: a + c2 * k,
            c2: b + c2 * k,
        },
        (JteForm::B2 { v: v2, d: d2 }, JteForm::B1 { u: u1, c: c1 }) => JteForm::B2 {
            v: v2.compose(&u1),
            d: -c1 + d2 * k,
        },
        (JteForm::B2 { v: v2, d: d2 }, JteForm::B2 { v: v1, d: d1 }) => JteForm::B1 {
            u: v2.compose(&v1),
            c: -d1 + d2 * k,
        },
        (JteForm::B2 { v: v2, d: d2 }, JteForm::B3 { w, c1: a, c2: b }) => JteForm::B3 {
            w: v2.compose(&w),
            c1: -a + d2 * k,
            c2: -b + d2 * k,
        },
        (JteForm::B3 { w, c1: a, c2: b }, _) => JteForm::B3 {
            w,
            c1: a * k,
            c2: b * k,
        },
    }
}

/// The unitary J = [[0,1],[−1,0]] for which Aᵗʳ = (Det A)·J A⁻¹ J* on P₂;
/// in other words, transposition is the form B2(J, 1).
pub fn transpose_as_b2() -> (Unitary2, JteForm) {
    let j = Unitary2::j();
    (j, JteForm::B2 { v: j, d: 1.0 })
}

/// Relative residual of Aᵗʳ = (Det A)·J A⁻¹ J*.
pub fn transpose_identity_residual(a: &Pd2) -> f64 {
    let j = Unitary2::j();
    let inv = a
        .mat()
        .inv(0.0)
        .expect("positive definite matrices are invertible");
    let rhs: Mat2 = (*j.mat() * inv * j.mat().adjoint()).scale(a.det());
    a.mat().transpose().rel_dist(&rhs)
}
