//! Recovering the linear map behind a black-box Jordan triple endomorphism.
//!
//! A continuous Jordan triple endomorphism φ of P₂ has the form
//! φ(A) = exp(f(log A)) for a linear f on ℍ₂. [`extract_f`] samples φ at the
//! exponentials of the basis matrices and returns f as a 4×4 real matrix in
//! Pauli coordinates. The residual checks then measure how far φ is from
//! being log-linear, and from obeying the triple law at all.

use rand::Rng;

use crate::canonical::JteForm;
use crate::error::{Error, Result};
use crate::mat2::{mexp, mlog_with_tol, pauli_basis, Herm2, Mat2, PauliCoords, Pd2, Tolerances};
use crate::sample;

/// A map on the positive definite cone, evaluated as a black box.
///
/// Implementations must be deterministic and side-effect free. Outputs are
/// plain matrices; callers validate them with [`eval_checked`].
pub trait ConeMap {
    fn eval(&self, a: &Pd2) -> Mat2;
}

impl<F> ConeMap for F
where
    F: Fn(&Pd2) -> Mat2,
{
    fn eval(&self, a: &Pd2) -> Mat2 {
        self(a)
    }
}

impl ConeMap for JteForm {
    fn eval(&self, a: &Pd2) -> Mat2 {
        *self.apply(a).mat()
    }
}

/// Evaluates `phi` and checks that the output lies in P₂.
///
/// The positivity test is relative to the largest eigenvalue: outputs of a
/// genuine form can have condition numbers beyond 1/ε, and then the small
/// eigenvalue is only known to rounding.
pub fn eval_checked<M: ConeMap + ?Sized>(phi: &M, a: &Pd2, tol: &Tolerances) -> Result<Pd2> {
    let out = phi.eval(a);
    let h = Herm2::with_tol(out, tol.herm).map_err(|e| Error::NotPositiveOutput(e.to_string()))?;
    let (hi, lo) = h.eigenvalues();
    if hi > 0.0 && lo > -tol.pd * hi {
        Ok(Pd2::from_herm_unchecked(h))
    } else {
        Err(Error::NotPositiveOutput(format!(
            "eigenvalues {hi:e} and {lo:e} are not both positive"
        )))
    }
}

/// A real-linear map on ℍ₂ as a 4×4 matrix acting on Pauli coordinates.
/// Column j holds the coordinates of f(σ_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinMapH2(pub [[f64; 4]; 4]);

impl LinMapH2 {
    pub fn new(f: [[f64; 4]; 4]) -> Self {
        LinMapH2(f)
    }

    pub fn identity() -> Self {
        let mut f = [[0.0; 4]; 4];
        for (i, row) in f.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LinMapH2(f)
    }

    pub fn from_columns(cols: [PauliCoords; 4]) -> Self {
        let mut f = [[0.0; 4]; 4];
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.to_array().iter().enumerate() {
                f[i][j] = *v;
            }
        }
        LinMapH2(f)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn column(&self, j: usize) -> PauliCoords {
        PauliCoords::from_array([0, 1, 2, 3].map(|i| self.0[i][j]))
    }

    pub fn apply(&self, c: &PauliCoords) -> PauliCoords {
        let x = c.to_array();
        PauliCoords::from_array([0, 1, 2, 3].map(|i| (0..4).map(|j| self.0[i][j] * x[j]).sum()))
    }

    pub fn apply_herm(&self, h: &Herm2) -> Herm2 {
        Herm2::from_pauli(self.apply(&h.pauli()))
    }

    /// Row 0: f0(σ_j) = ⟨f(σ_j), σ0⟩.
    pub fn f0_row(&self) -> [f64; 4] {
        self.0[0]
    }

    /// The block acting ℍ₂,₀ → ℍ₂,₀.
    pub fn traceless_block(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[i + 1][j + 1];
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &LinMapH2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The cone map A ↦ exp(f(log A)) for a given linear f.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearMap(pub LinMapH2);

impl ConeMap for LogLinearMap {
    fn eval(&self, a: &Pd2) -> Mat2 {
        *mexp(&self.0.apply_herm(&a.log())).mat()
    }
}

fn log_image<M: ConeMap + ?Sized>(phi: &M, h: &Herm2, tol: &Tolerances) -> Result<PauliCoords> {
    let out = eval_checked(phi, &mexp(h), tol)?;
    Ok(mlog_with_tol(out.herm(), tol.pd)?.pauli())
}

/// Column j = Pauli coordinates of log φ(exp σ_j).
pub fn extract_f<M: ConeMap + ?Sized>(phi: &M) -> Result<LinMapH2> {
    extract_f_with_tol(phi, &Tolerances::DEFAULT)
}

pub fn extract_f_with_tol<M: ConeMap + ?Sized>(phi: &M, tol: &Tolerances) -> Result<LinMapH2> {
    let basis = pauli_basis();
    let mut cols = [PauliCoords::default(); 4];
    for (col, s) in cols.iter_mut().zip(basis.iter()) {
        *col = log_image(phi, s, tol)?;
    }
    let f = LinMapH2::from_columns(cols);
    if !f.is_finite() {
        return Err(Error::NotPositiveOutput("non-finite logarithm".into()));
    }
    Ok(f)
}

fn require_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        Err(Error::InvalidArgument("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// max over random h (‖h‖ ≤ 2) of
/// ‖log φ(exp h) − f(h)‖ / (1 + ‖f(h)‖), in Pauli coordinates.
pub fn check_linearity<M: ConeMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    f: &LinMapH2,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    check_linearity_with_tol(phi, f, trials, rng, &Tolerances::DEFAULT)
}

pub fn check_linearity_with_tol<M: ConeMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    f: &LinMapH2,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<f64> {
    require_trials(trials)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let h = sample::herm(rng, 2.0);
        let got = log_image(phi, &h, tol)?.to_array();
        let want = f.apply(&h.pauli());
        let diff = PauliCoords::from_array([0, 1, 2, 3].map(|i| got[i] - want.to_array()[i]));
        worst = worst.max(diff.norm() / (1.0 + want.norm()));
    }
    Ok(worst)
}

/// max over random pairs with spectra in [e⁻², e²] of
/// ‖φ(ABA) − φ(A)φ(B)φ(A)‖_F / (1 + ‖φ(A)φ(B)φ(A)‖_F).
pub fn check_jte<M: ConeMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    check_jte_with_tol(phi, trials, rng, &Tolerances::DEFAULT)
}

pub fn check_jte_with_tol<M: ConeMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<f64> {
    require_trials(trials)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = sample::pd(rng);
        let b = sample::pd(rng);
        let lhs = eval_checked(phi, &a.triple(&b), tol)?;
        let pa = eval_checked(phi, &a, tol)?;
        let pb = eval_checked(phi, &b, tol)?;
        let rhs = pa.triple(&pb);
        worst = worst.max(lhs.mat().rel_dist(rhs.mat()));
    }
    Ok(worst)
}

/// max_j ‖[f(I), f(σ_j)]‖_F / (1 + ‖f(I)‖·‖f(σ_j)‖).
///
/// Commuting pairs in ℍ₂ are spanned by {h, I}, so for a linear f the
/// commutativity-preserving property reduces to f(σ_j) commuting with f(I).
pub fn commutativity_residual(f: &LinMapH2) -> f64 {
    let fi = Herm2::from_pauli(f.column(0));
    (1..4)
        .map(|j| {
            let fj = Herm2::from_pauli(f.column(j));
            fi.mat().commutator(fj.mat()).frobenius()
                / (1.0 + fi.mat().frobenius() * fj.mat().frobenius())
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizeReport {
    pub f: LinMapH2,
    pub linearity_residual: f64,
    pub commutativity_residual: f64,
    pub jte_residual: f64,
}

/// Extracts f and computes all three residuals.
pub fn linearize<M: ConeMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<LinearizeReport> {
    require_trials(trials)?;
    // Purity smoke test: the same probe must give the same output twice.
    let probe = mexp(&Herm2::from_pauli(PauliCoords::new(0.1, 0.2, -0.3, 0.4)));
    if phi.eval(&probe) != phi.eval(&probe) {
        return Err(Error::InvalidArgument(
            "black box is not deterministic".into(),
        ));
    }
    let f = extract_f_with_tol(phi, tol)?;
    let linearity_residual = check_linearity_with_tol(phi, &f, trials, rng, tol)?;
    let jte_residual = check_jte_with_tol(phi, trials, rng, tol)?;
    Ok(LinearizeReport {
        f,
        linearity_residual,
        commutativity_residual: commutativity_residual(&f),
        jte_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::Unitary2;
    use crate::spin::{det3, mat3_mul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_map_gives_identity_f() {
        let f = extract_f(&JteForm::identity()).unwrap();
        assert!(f.max_abs_diff(&LinMapH2::identity()) < 1e-14);
    }

    #[test]
    fn pure_inverse_gives_minus_identity() {
        let f = extract_f(&JteForm::B2 {
            v: Unitary2::identity(),
            d: 0.0,
        })
        .unwrap();
        let mut minus = LinMapH2::identity();
        for i in 0..4 {
            minus.0[i][i] = -1.0;
        }
        assert!(f.max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn b1_has_block_form_with_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let u = sample::unitary(&mut rng);
            let c = rng.random_range(-2.0..2.0);
            let f = extract_f(&JteForm::B1 { u, c }).unwrap();
            assert!((f.0[0][0] - (1.0 + 2.0 * c)).abs() < 1e-12);
            for k in 1..4 {
                assert!(f.0[0][k].abs() < 1e-12 && f.0[k][0].abs() < 1e-12);
            }
            // Independent route: coordinates of u σ_k u* directly.
            let basis = pauli_basis();
            let m = f.traceless_block();
            for k in 0..3 {
                let moved = basis[k + 1].conjugate_by(u.mat()).pauli().vector();
                for j in 0..3 {
                    assert!((m[j][k] - moved[j]).abs() < 1e-12);
                }
            }
            assert!((det3(&m) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn witnesses_hold_for_extracted_maps_of_canonical_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for i in 0..60 {
            let u = sample::unitary(&mut rng);
            let x = rng.random_range(-2.0..2.0);
            let y = rng.random_range(-2.0..2.0);
            let form = match i % 3 {
                0 => JteForm::B1 { u, c: x },
                1 => JteForm::B2 { v: u, d: x },
                _ => JteForm::B3 { w: u, c1: x, c2: y },
            };
            let f = extract_f(&form).unwrap();
            // f0 vanishes on the traceless subspace.
            for k in 1..4 {
                assert!(f.f0_row()[k].abs() < 1e-12);
            }
            // MᵀM = p²I.
            let m = f.traceless_block();
            let mut mt = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    mt[a][b] = m[b][a];
                }
            }
            let g = mat3_mul(&mt, &m);
            let p2 = (g[0][0] + g[1][1] + g[2][2]) / 3.0;
            for a in 0..3 {
                for b in 0..3 {
                    let target = if a == b { p2 } else { 0.0 };
                    assert!((g[a][b] - target).abs() < 1e-12);
                }
            }
            if i % 3 != 2 {
                assert!((p2 - 1.0).abs() < 1e-12);
                // Block decoupling.
                for k in 1..4 {
                    assert!(f.0[k][0].abs() < 1e-12);
                }
            }
            assert!(f.max_abs_diff(&form.log_linear_map()) < 1e-12);
        }
    }

    #[test]
    fn linearity_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let b3 = JteForm::B3 {
            w: Unitary2::identity(),
            c1: 1.0,
            c2: 0.0,
        };
        let f = extract_f(&b3).unwrap();
        assert!(check_linearity(&b3, &f, 100, &mut rng).unwrap() < 1e-9);

        let shifted = |a: &Pd2| *a.mat() + Mat2::IDENTITY;
        let f = extract_f(&shifted).unwrap();
        assert!(check_linearity(&shifted, &f, 100, &mut rng).unwrap() > 0.1);

        assert!(matches!(
            check_linearity(&b3, &f, 0, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn jte_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for i in 0..9 {
            let u = sample::unitary(&mut rng);
            let form = match i % 3 {
                0 => JteForm::B1 { u, c: 0.7 },
                1 => JteForm::B2 { v: u, d: -1.3 },
                _ => JteForm::B3 {
                    w: u,
                    c1: 0.5,
                    c2: -0.25,
                },
            };
            assert!(check_jte(&form, 100, &mut rng).unwrap() < 1e-9);
        }
        let square = |a: &Pd2| *a.mat() * *a.mat();
        assert!(check_jte(&square, 100, &mut rng).unwrap() > 0.1);
        let transpose = |a: &Pd2| a.mat().transpose();
        assert!(check_jte(&transpose, 100, &mut rng).unwrap() < 1e-9);
    }

    #[test]
    fn non_positive_output_is_reported() {
        let negate = |a: &Pd2| -*a.mat();
        assert!(matches!(
            extract_f(&negate),
            Err(Error::NotPositiveOutput(_))
        ));
        let skew = |_: &Pd2| Mat2::from_real([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(extract_f(&skew), Err(Error::NotPositiveOutput(_))));
    }

    #[test]
    fn report_collects_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let form = JteForm::B3 {
            w: sample::unitary(&mut rng),
            c1: 1.5,
            c2: -0.5,
        };
        let rep = linearize(&form, 20, &mut rng, &Tolerances::DEFAULT).unwrap();
        assert!(rep.linearity_residual < 1e-9);
        assert!(rep.jte_residual < 1e-9);
        assert!(rep.commutativity_residual < 1e-12);
        let square = |a: &Pd2| *a.mat() * *a.mat();
        let rep = linearize(&square, 20, &mut rng, &Tolerances::DEFAULT).unwrap();
        assert!(rep.jte_residual > 0.1);
    }
}
