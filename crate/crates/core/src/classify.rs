//! Black-box classification of continuous Jordan triple endomorphisms.
//!
//! The decision follows the structure of f (φ = exp ∘ f ∘ log):
//!
//! 1. f(I) not a multiple of I: φ is diagonal in the eigenbasis of f(I), and
//!    the form is B3 with exponents half the eigenvalues of f(I).
//! 2. f(I) = v·I and f vanishes on ℍ₂,₀: φ(A) = (Det A)^(v/2)·I, again B3.
//! 3. f(I) = v·I and f restricted to ℍ₂,₀ is p·M with M orthogonal: p must
//!    be 1, and M ∈ SO(3) gives B1 while −M ∈ SO(3) gives B2. The unitary is
//!    the SU(2) lift of ±M.

use std::fmt::Write as _;

use crate::canonical::JteForm;
use crate::error::{Error, Result};
use crate::linearize::{
    check_jte_with_tol, check_linearity_with_tol, eval_checked, extract_f_with_tol, ConeMap,
    LinMapH2,
};
use crate::mat2::{eig2, Herm2, PauliCoords, Tolerances, Unitary2};
use crate::sample;
use crate::spin::{det3, mat3_mul, so3_to_su2_with_tol, Rot3};

/// Which case of the decision procedure fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// f(I) is not scalar.
    NonScalar,
    /// f(I) scalar, traceless block ≈ 0.
    DegenerateBlock,
    /// f(I) scalar, traceless block a rotation.
    DetPositive,
    /// f(I) scalar, traceless block minus a rotation.
    DetNegative,
}

impl Branch {
    pub fn describe(&self) -> &'static str {
        match self {
            Branch::NonScalar => "f(I) not scalar: diagonal family in the eigenbasis of f(I)",
            Branch::DegenerateBlock => {
                "f(I) scalar, f vanishes on traceless matrices: scalar family"
            }
            Branch::DetPositive => "f(I) scalar, det M > 0: traceless block is a rotation",
            Branch::DetNegative => "f(I) scalar, det M < 0: traceless block is minus a rotation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyDiagnostics {
    pub branch: Branch,
    /// ½ Tr f(I).
    pub v: f64,
    /// Eigenvalues of f(I), descending.
    pub f_identity_eigenvalues: (f64, f64),
    /// Traceless block of f.
    pub m: [[f64; 3]; 3],
    /// Isometry scale of `m` (mean column norm).
    pub p: f64,
    /// Sign of det `m`, 0 in the degenerate and non-scalar branches.
    pub det_m_sign: i8,
    /// Structural residual of the decision (block decoupling, diagonality
    /// in the recovered basis, isometry defect).
    pub consistency: f64,
    pub jte_residual: f64,
    pub linearity_residual: f64,
    /// Max relative deviation of the classified form from φ on the
    /// verification set.
    pub residual: f64,
    pub f: LinMapH2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyResult {
    pub form: JteForm,
    pub diagnostics: ClassifyDiagnostics,
}

/// Sampling parameters for [`classify_jte_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: Tolerances,
    pub seed: u64,
    pub jte_trials: usize,
    pub linearity_trials: usize,
    pub verify_trials: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: Tolerances::DEFAULT,
            seed: sample::DEFAULT_SEED,
            jte_trials: 50,
            linearity_trials: 50,
            verify_trials: 50,
        }
    }
}

impl ClassifyOptions {
    pub fn with_tol(tol: Tolerances) -> Self {
        ClassifyOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Output of the purely linear-algebraic part of the decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub form: JteForm,
    pub branch: Branch,
    pub v: f64,
    pub f_identity_eigenvalues: (f64, f64),
    pub m: [[f64; 3]; 3],
    pub p: f64,
    pub det_m_sign: i8,
    pub consistency: f64,
}

fn transpose3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn frobenius3(m: &[[f64; 3]; 3]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Runs the case split on an already extracted f.
pub fn classify_linear_map(f: &LinMapH2, tol: &Tolerances) -> Result<Decision> {
    let f_identity = f.column(0);
    let v = f_identity.a0;
    let m = f.traceless_block();
    let fi = Herm2::from_pauli(f_identity);
    let eig = eig2(&fi);
    let traceless_norm = f_identity
        .vector()
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();

    if traceless_norm > tol.class * v.abs().max(1.0) {
        // f(σ_j) must be diagonal in the eigenbasis of f(I).
        let w = eig.u;
        let mut consistency: f64 = 0.0;
        for j in 1..4 {
            let fj = Herm2::from_pauli(f.column(j));
            let rotated = w.mat().adjoint() * *fj.mat() * *w.mat();
            consistency = consistency.max(rotated[(0, 1)].norm());
        }
        let form = JteForm::B3 {
            w,
            c1: eig.l1 / 2.0,
            c2: eig.l2 / 2.0,
        };
        if consistency > tol.class {
            return Err(Error::VerificationFailed {
                residual: consistency,
            });
        }
        return Ok(Decision {
            form,
            branch: Branch::NonScalar,
            v,
            f_identity_eigenvalues: (eig.l1, eig.l2),
            m,
            p: frobenius3(&m) / 3f64.sqrt(),
            det_m_sign: 0,
            consistency,
        });
    }

    // f(I) is scalar; the off-diagonal blocks must vanish.
    let f0 = f.f0_row();
    let decoupling = (1..4)
        .map(|k| f0[k].abs().max(f.0[k][0].abs()))
        .fold(0.0, f64::max);

    if frobenius3(&m) <= tol.class {
        if decoupling > tol.class {
            return Err(Error::VerificationFailed {
                residual: decoupling,
            });
        }
        return Ok(Decision {
            form: JteForm::B3 {
                w: Unitary2::identity(),
                c1: v / 2.0,
                c2: v / 2.0,
            },
            branch: Branch::DegenerateBlock,
            v,
            f_identity_eigenvalues: (eig.l1, eig.l2),
            m,
            p: 0.0,
            det_m_sign: 0,
            consistency: decoupling,
        });
    }

    let p = (0..3)
        .map(|j| (0..3).map(|i| m[i][j] * m[i][j]).sum::<f64>().sqrt())
        .sum::<f64>()
        / 3.0;
    let gram = mat3_mul(&transpose3(&m), &m);
    let mut defect: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { p * p } else { 0.0 };
            defect = defect.max((gram[i][j] - target).abs());
        }
    }
    if defect > tol.class * (p * p).max(1.0) {
        return Err(Error::NotIsometry { p, defect });
    }
    if (p - 1.0).abs() > tol.class {
        return Err(Error::ScaleNotOne { p });
    }
    let consistency = decoupling.max(defect);
    if decoupling > tol.class {
        return Err(Error::VerificationFailed {
            residual: decoupling,
        });
    }
    let det_m = det3(&m);
    let sign = if det_m > 0.0 { 1.0 } else { -1.0 };
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = sign * m[i][j] / p;
        }
    }
    let u = so3_to_su2_with_tol(&Rot3(r), tol.class)?.unitary();
    let (form, branch) = if sign > 0.0 {
        (
            JteForm::B1 {
                u,
                c: (v - 1.0) / 2.0,
            },
            Branch::DetPositive,
        )
    } else {
        (
            JteForm::B2 {
                v: u,
                d: (v + 1.0) / 2.0,
            },
            Branch::DetNegative,
        )
    };
    Ok(Decision {
        form,
        branch,
        v,
        f_identity_eigenvalues: (eig.l1, eig.l2),
        m,
        p,
        det_m_sign: sign as i8,
        consistency,
    })
}

pub fn classify_jte<M: ConeMap + ?Sized>(phi: &M, tol: &Tolerances) -> Result<ClassifyResult> {
    classify_jte_with(phi, &ClassifyOptions::with_tol(*tol))
}

/// Full pipeline: triple-law check, extraction of f, linearity check, case
/// split, and verification of the resulting form against `phi`.
pub fn classify_jte_with<M: ConeMap + ?Sized>(
    phi: &M,
    opts: &ClassifyOptions,
) -> Result<ClassifyResult> {
    let tol = &opts.tol;
    tol.validate()?;
    let mut rng = sample::rng_from_seed(opts.seed);

    let jte_residual = check_jte_with_tol(phi, opts.jte_trials, &mut rng, tol)?;
    if jte_residual > tol.class {
        return Err(Error::NotJte {
            residual: jte_residual,
        });
    }
    let f = extract_f_with_tol(phi, tol)?;
    let linearity_residual =
        check_linearity_with_tol(phi, &f, opts.linearity_trials, &mut rng, tol)?;
    if linearity_residual > tol.class {
        return Err(Error::NotLinear {
            residual: linearity_residual,
        });
    }
    let decision = classify_linear_map(&f, tol)?;
    let form = decision.form.normalized();

    let mut residual: f64 = 0.0;
    for _ in 0..opts.verify_trials.max(1) {
        let a = sample::pd(&mut rng);
        let want = eval_checked(phi, &a, tol)?;
        residual = residual.max(form.apply(&a).mat().rel_dist(want.mat()));
    }
    if residual > tol.class {
        return Err(Error::VerificationFailed { residual });
    }

    Ok(ClassifyResult {
        form,
        diagnostics: ClassifyDiagnostics {
            branch: decision.branch,
            v: decision.v,
            f_identity_eigenvalues: decision.f_identity_eigenvalues,
            m: decision.m,
            p: decision.p,
            det_m_sign: decision.det_m_sign,
            consistency: decision.consistency,
            jte_residual,
            linearity_residual,
            residual,
            f,
        },
    })
}

fn form_summary(form: &JteForm) -> String {
    match form {
        JteForm::B1 { c, .. } => format!("B1: A -> (Det A)^c U A U*, c = {c}"),
        JteForm::B2 { d, .. } => format!("B2: A -> (Det A)^d V A^-1 V*, d = {d}"),
        JteForm::B3 { c1, c2, .. } => {
            format!("B3: A -> W Diag[(Det A)^c1, (Det A)^c2] W*, c1 = {c1}, c2 = {c2}")
        }
    }
}

/// Human-readable trace of the decision path.
pub fn explain(result: &ClassifyResult) -> String {
    let d = &result.diagnostics;
    let mut out = String::new();
    let _ = writeln!(out, "form: {}", form_summary(&result.form));
    let _ = writeln!(out, "branch: {}", d.branch.describe());
    match d.branch {
        Branch::NonScalar => {
            let _ = writeln!(
                out,
                "eigenvalues of f(I): {} and {} (exponents are half of these)",
                d.f_identity_eigenvalues.0, d.f_identity_eigenvalues.1
            );
        }
        Branch::DegenerateBlock => {
            let _ = writeln!(out, "v = {}, ||M|| below threshold", d.v);
        }
        Branch::DetPositive | Branch::DetNegative => {
            let _ = writeln!(
                out,
                "v = {}, p = {}, det M sign = {:+}",
                d.v, d.p, d.det_m_sign
            );
        }
    }
    let _ = writeln!(
        out,
        "residuals: jte = {:e}, linearity = {:e}, consistency = {:e}, verification = {:e}",
        d.jte_residual, d.linearity_residual, d.consistency, d.residual
    );
    out
}

/// Report for a failed classification.
pub fn explain_error(err: &Error) -> String {
    match err {
        Error::ScaleNotOne { p } => format!(
            "rejected: f(I) scalar and the traceless block is p times a rotation with p = {p}; \
             the triple law forces p = 1, so the input is not a Jordan triple endomorphism"
        ),
        Error::NotIsometry { p, defect } => format!(
            "rejected: traceless block is not a multiple of an isometry (p = {p}, defect = {defect:e})"
        ),
        Error::NotJte { residual } => {
            format!("rejected: triple law violated, residual = {residual:e}")
        }
        Error::NotLinear { residual } => {
            format!("rejected: map is not of the form exp(f(log A)), residual = {residual:e}")
        }
        other => format!("rejected: {other}"),
    }
}

/// Coordinates of f(I) as a Hermitian matrix, for reporting.
pub fn f_identity(f: &LinMapH2) -> Herm2 {
    Herm2::from_pauli(PauliCoords::from_array([0, 1, 2, 3].map(|i| f.0[i][0])))
}
