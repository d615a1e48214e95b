//! The effect algebra E₂ = {A : 0 ≤ A ≤ I} with the sequential product
//! A∘B = √A·B·√A, its continuous endomorphisms, and a classifier for them.
//!
//! Forms (D = Det A, 0⁰ = 1):
//!
//! * `D1(U, c)`, c ≥ 0:  A ↦ D^c · U A U*
//! * `D2(V)`:  A ↦ V adj(A) V*
//! * `D3(V, d)`, d > 1:  A ↦ D^(d−1) · V adj(A) V* for invertible A, 0 otherwise
//! * `D4(W, c1, c2)`, c1, c2 ≥ 0:  A ↦ W diag(D^c1, D^c2) W*
//! * `Zero`, and `RankOneImage(W, c)`:  A ↦ W diag(D^c, 0) W*
//!
//! The last two are not unital. They come out of the reduction by the
//! projection φ(I) and are reported as such.

use rand::Rng;

use crate::canonical::JteForm;
use crate::classify::{classify_jte_with, ClassifyOptions, ClassifyResult};
use crate::error::{Error, Result};
use crate::linearize::ConeMap;
use crate::mat2::{
    eig2, mexp, mlog_with_tol, spec_norm, Effect2, Herm2, Mat2, Pd2, Tolerances, Unitary2, C64,
};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeqForm {
    Zero,
    D1 { u: Unitary2, c: f64 },
    D2 { v: Unitary2 },
    D3 { v: Unitary2, d: f64 },
    D4 { w: Unitary2, c1: f64, c2: f64 },
    RankOneImage { w: Unitary2, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqKind {
    Zero,
    D1,
    D2,
    D3,
    D4,
    RankOneImage,
}

impl SeqKind {
    pub const ALL: [SeqKind; 6] = [
        SeqKind::Zero,
        SeqKind::D1,
        SeqKind::D2,
        SeqKind::D3,
        SeqKind::D4,
        SeqKind::RankOneImage,
    ];
}

/// Det A, with values at rounding level relative to (Tr A)² read as 0.
///
/// A rank-one effect assembled from rounded entries has a determinant of
/// order ε rather than 0, and D^c for small c would magnify that.
fn effect_det(a: &Effect2) -> f64 {
    let d = a.det();
    let t = a.herm().trace();
    if d <= 8.0 * f64::EPSILON * t * t {
        0.0
    } else {
        d
    }
}

fn adj_herm(h: &Herm2) -> Herm2 {
    Herm2::symmetrize(h.mat().adj())
}

impl SeqForm {
    pub fn kind(&self) -> SeqKind {
        match self {
            SeqForm::Zero => SeqKind::Zero,
            SeqForm::D1 { .. } => SeqKind::D1,
            SeqForm::D2 { .. } => SeqKind::D2,
            SeqForm::D3 { .. } => SeqKind::D3,
            SeqForm::D4 { .. } => SeqKind::D4,
            SeqForm::RankOneImage { .. } => SeqKind::RankOneImage,
        }
    }

    /// Checks the exponent constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.into()));
        match *self {
            SeqForm::D1 { c, .. } | SeqForm::RankOneImage { c, .. } if !(c >= 0.0) => {
                bad("exponent c must be finite and non-negative")
            }
            SeqForm::D3 { d, .. } if !(d > 1.0 && d.is_finite()) => bad("exponent d must exceed 1"),
            SeqForm::D4 { c1, c2, .. } if !(c1 >= 0.0 && c2 >= 0.0) => {
                bad("exponents c1, c2 must be non-negative")
            }
            SeqForm::D1 { c, .. } | SeqForm::RankOneImage { c, .. } if !c.is_finite() => {
                bad("exponent c must be finite")
            }
            SeqForm::D4 { c1, c2, .. } if !(c1.is_finite() && c2.is_finite()) => {
                bad("exponents must be finite")
            }
            _ => Ok(()),
        }
    }

    /// φ(I) = I.
    pub fn is_unital(&self) -> bool {
        !matches!(self, SeqForm::Zero | SeqForm::RankOneImage { .. })
    }

    /// The cone form that agrees with this one on invertible effects.
    pub fn as_jte(&self) -> Option<JteForm> {
        match *self {
            SeqForm::D1 { u, c } => Some(JteForm::B1 { u, c }),
            SeqForm::D2 { v } => Some(JteForm::B2 { v, d: 1.0 }),
            SeqForm::D3 { v, d } => Some(JteForm::B2 { v, d }),
            SeqForm::D4 { w, c1, c2 } => Some(JteForm::B3 { w, c1, c2 }),
            _ => None,
        }
    }

    /// k with φ(λA) = λ^k φ(A) for all λ > 0, if such k exists.
    pub fn homogeneity_exponent(&self) -> Option<f64> {
        match *self {
            SeqForm::D4 { c1, c2, .. } if c1 != c2 => None,
            SeqForm::RankOneImage { .. } | SeqForm::Zero => None,
            _ => self.as_jte().map(|f| f.det_exponent()),
        }
    }

    pub fn apply_seq(&self, a: &Effect2) -> Effect2 {
        self.apply_seq_with_tol(a, Tolerances::DEFAULT.pd)
    }

    /// `tol_pd` is the determinant threshold below which D3 returns 0.
    pub fn apply_seq_with_tol(&self, a: &Effect2, tol_pd: f64) -> Effect2 {
        let det = effect_det(a);
        let h = match *self {
            SeqForm::Zero => Herm2::zero(),
            SeqForm::D1 { u, c } => a.herm().conjugate_by(u.mat()).scale(det.powf(c)),
            SeqForm::D2 { v } => adj_herm(a.herm()).conjugate_by(v.mat()),
            SeqForm::D3 { v, d } => {
                if det <= tol_pd {
                    Herm2::zero()
                } else {
                    adj_herm(a.herm())
                        .conjugate_by(v.mat())
                        .scale(det.powf(d - 1.0))
                }
            }
            SeqForm::D4 { w, c1, c2 } => {
                Herm2::diag(det.powf(c1), det.powf(c2)).conjugate_by(w.mat())
            }
            SeqForm::RankOneImage { w, c } => Herm2::diag(det.powf(c), 0.0).conjugate_by(w.mat()),
        };
        Effect2::from_herm_unchecked(h)
    }

    /// Same map on E₂, up to the gauge freedom of each family.
    pub fn gauge_equal(&self, other: &SeqForm, tol: f64) -> bool {
        match (self, other) {
            (SeqForm::Zero, SeqForm::Zero) => true,
            (SeqForm::RankOneImage { w: w1, c: a }, SeqForm::RankOneImage { w: w2, c: b }) => {
                let m = w1.mat().adjoint() * *w2.mat();
                (a - b).abs() <= tol * a.abs().max(1.0) && (1.0 - m[(0, 0)].norm()).abs() <= tol
            }
            (x, y) if x.kind() == y.kind() => match (x.as_jte(), y.as_jte()) {
                (Some(p), Some(q)) => p.gauge_equal(&q, tol),
                _ => false,
            },
            (x, y) => effect_probes()
                .iter()
                .all(|p| x.apply_seq(p).mat().rel_dist(y.apply_seq(p).mat()) <= tol),
        }
    }
}

/// Fixed probe set: a few invertible effects plus the coordinate rank-one
/// projections.
pub fn effect_probes() -> Vec<Effect2> {
    let mut out = singular_probes_fixed().to_vec();
    for h in [
        Herm2::diag(0.3, 0.8),
        Herm2::from_pauli(crate::mat2::PauliCoords::new(0.5, 0.2, -0.1, 0.15)),
        Herm2::from_pauli(crate::mat2::PauliCoords::new(0.6, -0.1, 0.25, 0.05)),
        Herm2::identity(),
    ] {
        out.push(Effect2::new(h).expect("probe is an effect"));
    }
    out
}

fn singular_probes_fixed() -> [Effect2; 2] {
    [Effect2::axis_projection(0), Effect2::axis_projection(1)]
}

impl Effect2 {
    /// Projection onto the k-th coordinate axis.
    pub fn axis_projection(k: usize) -> Effect2 {
        if k == 0 {
            Effect2::from_herm_unchecked(Herm2::diag(1.0, 0.0))
        } else {
            Effect2::from_herm_unchecked(Herm2::diag(0.0, 1.0))
        }
    }
}

/// The two coordinate rank-one projections and one random rank-one projection.
pub fn singular_probes<R: Rng + ?Sized>(rng: &mut R) -> [Effect2; 3] {
    let [p, q] = singular_probes_fixed();
    [p, q, sample::rank_one_projection(rng)]
}

/// A black-box map on E₂. Implementations must be deterministic.
pub trait EffectMap {
    fn eval(&self, a: &Effect2) -> Mat2;
}

impl<F> EffectMap for F
where
    F: Fn(&Effect2) -> Mat2,
{
    fn eval(&self, a: &Effect2) -> Mat2 {
        self(a)
    }
}

impl EffectMap for SeqForm {
    fn eval(&self, a: &Effect2) -> Mat2 {
        *self.apply_seq(a).mat()
    }
}

pub fn eval_effect_checked<M: EffectMap + ?Sized>(
    phi: &M,
    a: &Effect2,
    tol: &Tolerances,
) -> Result<Effect2> {
    let m = phi.eval(a);
    let h = Herm2::with_tol(m, tol.herm).map_err(|e| Error::NotEffectOutput(e.to_string()))?;
    Effect2::with_tol(h, tol.class).map_err(|e| Error::NotEffectOutput(e.to_string()))
}

/// (λ, v) with A = λ·v v*, when A is numerically of rank at most one.
fn rank_one_factor(a: &Effect2) -> Option<(f64, [C64; 2])> {
    if effect_det(a) > 0.0 {
        return None;
    }
    let e = eig2(a.herm());
    Some((e.l1.max(0.0), e.u.column(0)))
}

/// λ·w w*.
fn outer(lambda: f64, w: [C64; 2]) -> Herm2 {
    let m = Mat2::new(
        C64::from(w[0].norm_sqr()),
        w[0] * w[1].conj(),
        w[1] * w[0].conj(),
        C64::from(w[1].norm_sqr()),
    );
    Herm2::symmetrize(m.scale(lambda))
}

/// A∘B = √A·B·√A.
///
/// When either factor is numerically rank-one the product is assembled as
/// an outer product, so that it is singular to rounding relative to its own
/// size and not only to the size of the factors.
pub fn seq_product(a: &Effect2, b: &Effect2) -> Effect2 {
    let h = if let Some((lambda, v)) = rank_one_factor(b) {
        let r = a.sqrt();
        let m = r.mat();
        let w = [
            m[(0, 0)] * v[0] + m[(0, 1)] * v[1],
            m[(1, 0)] * v[0] + m[(1, 1)] * v[1],
        ];
        outer(lambda, w)
    } else if let Some((lambda, u)) = rank_one_factor(a) {
        let m = b.mat();
        let bu = [
            m[(0, 0)] * u[0] + m[(0, 1)] * u[1],
            m[(1, 0)] * u[0] + m[(1, 1)] * u[1],
        ];
        let q = (u[0].conj() * bu[0] + u[1].conj() * bu[1]).re;
        outer(lambda * q, u)
    } else {
        Herm2::sandwich(a.sqrt().herm(), b.herm())
    };
    Effect2::from_herm_unchecked(h)
}

pub fn order_leq(a: &Effect2, b: &Effect2) -> bool {
    order_leq_with_tol(a, b, Tolerances::DEFAULT.pd)
}

/// b − a is positive semi-definite up to `tol_pd`.
pub fn order_leq_with_tol(a: &Effect2, b: &Effect2, tol_pd: f64) -> bool {
    b.herm().sub(a.herm()).eigenvalues().1 >= -tol_pd
}

/// C with b∘C = a, for a ≤ b and b invertible.
pub fn seq_factor(a: &Effect2, b: &Effect2) -> Result<Effect2> {
    seq_factor_with_tol(a, b, &Tolerances::DEFAULT)
}

pub fn seq_factor_with_tol(a: &Effect2, b: &Effect2, tol: &Tolerances) -> Result<Effect2> {
    if !order_leq_with_tol(a, b, tol.pd) {
        return Err(Error::NotDominated);
    }
    if !b.is_invertible(tol.pd) {
        return Err(Error::SingularBase);
    }
    let inv_sqrt = b.herm().map_spectrum(|x| 1.0 / x.sqrt());
    let c = Herm2::sandwich(&inv_sqrt, a.herm()).map_spectrum(|x| x.clamp(0.0, 1.0));
    Ok(Effect2::from_herm_unchecked(c))
}

/// (AB = BA, A∘B = B∘A), each within `tol_eq` in Frobenius norm.
pub fn commute_iff_seq_commute(a: &Effect2, b: &Effect2, tol_eq: f64) -> (bool, bool) {
    let plain = a.mat().commutator(b.mat()).frobenius() <= tol_eq;
    let seq = (*seq_product(a, b).mat() - *seq_product(b, a).mat()).frobenius() <= tol_eq;
    (plain, seq)
}

fn random_effect<R: Rng + ?Sized>(rng: &mut R, i: usize) -> Effect2 {
    if i % 5 == 4 {
        sample::singular_effect(rng)
    } else {
        sample::effect(rng)
    }
}

/// max over random pairs (every fifth one singular) of
/// ‖φ(A∘B) − φ(A)∘φ(B)‖_F / (1 + ‖φ(A)∘φ(B)‖_F).
pub fn check_seq<M: EffectMap + ?Sized, R: Rng + ?Sized>(
    phi: &M,
    trials: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut worst: f64 = 0.0;
    for i in 0..trials {
        let a = random_effect(rng, i);
        let b = random_effect(rng, i + 2);
        let lhs = eval_effect_checked(phi, &seq_product(&a, &b), tol)?;
        let rhs = seq_product(
            &eval_effect_checked(phi, &a, tol)?,
            &eval_effect_checked(phi, &b, tol)?,
        );
        worst = worst.max(lhs.mat().rel_dist(rhs.mat()));
    }
    Ok(worst)
}

/// Φ(A) = ‖A‖^c · φ(A/‖A‖) on P₂, ‖·‖ the spectral norm.
#[derive(Debug, Clone, Copy)]
pub struct ConeExtension<'a, M: ?Sized> {
    phi: &'a M,
    c: f64,
}

impl<M: EffectMap + ?Sized> ConeMap for ConeExtension<'_, M> {
    fn eval(&self, a: &Pd2) -> Mat2 {
        let s = spec_norm(a.herm());
        let inner = Effect2::from_herm_unchecked(a.herm().scale(1.0 / s));
        self.phi.eval(&inner).scale(s.powf(self.c))
    }
}

/// Extends a c-homogeneous map from E₂ to P₂. Homogeneity is checked on
/// 50 seeded samples λ ∈ [0.05, 1], A invertible.
pub fn extend_to_cone<'a, M: EffectMap + ?Sized>(
    phi: &'a M,
    c: f64,
    tol: &Tolerances,
) -> Result<ConeExtension<'a, M>> {
    let mut rng = sample::rng_from_seed(sample::DEFAULT_SEED);
    let mut residual: f64 = 0.0;
    for _ in 0..50 {
        let a = sample::invertible_effect(&mut rng, 0.05);
        let lambda = rng.random_range(0.05..=1.0);
        let scaled = Effect2::from_herm_unchecked(a.herm().scale(lambda));
        let lhs = eval_effect_checked(phi, &scaled, tol)?;
        let rhs = eval_effect_checked(phi, &a, tol)?
            .herm()
            .scale(lambda.powf(c));
        residual = residual.max(lhs.mat().rel_dist(rhs.mat()));
    }
    if residual > tol.class {
        return Err(Error::NotHomogeneous {
            exponent: c,
            residual,
        });
    }
    Ok(ConeExtension { phi, c })
}

/// Φ(A) = φ(I/s)^(−½) · φ(A/s) · φ(I/s)^(−½) with s = ‖A‖.
///
/// Needs no exponent and also covers unital maps that are not homogeneous
/// (D4 with c1 ≠ c2). Requires φ to send invertible effects to invertible
/// effects.
#[derive(Debug, Clone, Copy)]
pub struct NormalizedConeExtension<'a, M: ?Sized> {
    phi: &'a M,
}

pub fn extend_to_cone_normalized<M: EffectMap + ?Sized>(phi: &M) -> NormalizedConeExtension<'_, M> {
    NormalizedConeExtension { phi }
}

impl<M: EffectMap + ?Sized> ConeMap for NormalizedConeExtension<'_, M> {
    fn eval(&self, a: &Pd2) -> Mat2 {
        let s = spec_norm(a.herm());
        let inner = Effect2::from_herm_unchecked(a.herm().scale(1.0 / s));
        let base = Herm2::symmetrize(
            self.phi
                .eval(&Effect2::from_herm_unchecked(Herm2::scalar(1.0 / s))),
        );
        let w = base.map_spectrum(|x| 1.0 / x.sqrt());
        *Herm2::sandwich(&w, &Herm2::symmetrize(self.phi.eval(&inner))).mat()
    }
}

/// exp(f(log A)) with f recovered from φ on {H ≤ 0} by the shift
/// f(H) = g(H − λI) + λ·f(I), g = log∘φ∘exp, f(I) = −g(−I).
///
/// Outputs on the deep interior of {H ≤ 0} can be far below `tol_pd`, so
/// the logarithm only requires strict positivity.
struct RecoveredCone<'a, M: ?Sized> {
    phi: &'a M,
    f_identity: Herm2,
    tol_pd: f64,
}

impl<'a, M: EffectMap + ?Sized> RecoveredCone<'a, M> {
    fn new(phi: &'a M, tol_pd: f64) -> Result<Self> {
        let mut out = RecoveredCone {
            phi,
            f_identity: Herm2::zero(),
            tol_pd,
        };
        out.f_identity = out.g(&Herm2::scalar(-1.0))?.scale(-1.0);
        Ok(out)
    }

    fn g(&self, h: &Herm2) -> Result<Herm2> {
        let e = Effect2::from_herm_unchecked(*mexp(h).herm());
        let out = Herm2::symmetrize(self.phi.eval(&e));
        mlog_with_tol(&out, self.tol_pd)
    }

    fn f(&self, h: &Herm2) -> Result<Herm2> {
        let lambda = h.eigenvalues().0.max(0.0) + 1.0;
        Ok(self
            .g(&h.sub(&Herm2::scalar(lambda)))?
            .add(&self.f_identity.scale(lambda)))
    }
}

impl<M: EffectMap + ?Sized> ConeMap for RecoveredCone<'_, M> {
    fn eval(&self, a: &Pd2) -> Mat2 {
        match self.f(&a.log()) {
            Ok(h) => *mexp(&h).mat(),
            Err(_) => Mat2::scalar(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeqDiagnostics {
    /// Sequential-law residual on random pairs.
    pub seq_residual: f64,
    /// ‖Q² − Q‖_F for Q = φ(I).
    pub projection_defect: f64,
    pub rank: u8,
    /// Cone classification of the unital part, if one was run.
    pub jte: Option<ClassifyResult>,
    /// max ‖φ(P)‖_F over singular probes, checked for D3.
    pub boundary_residual: Option<f64>,
    /// Max relative deviation of the classified form from φ.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeqClassifyResult {
    pub form: SeqForm,
    pub diagnostics: SeqDiagnostics,
}

pub fn classify_seq<M: EffectMap + ?Sized>(phi: &M, tol: &Tolerances) -> Result<SeqClassifyResult> {
    classify_seq_with(phi, &ClassifyOptions::with_tol(*tol))
}

pub fn classify_seq_with<M: EffectMap + ?Sized>(
    phi: &M,
    opts: &ClassifyOptions,
) -> Result<SeqClassifyResult> {
    let tol = &opts.tol;
    tol.validate()?;
    let mut rng = sample::rng_from_seed(opts.seed);

    let q = eval_effect_checked(phi, &Effect2::identity(), tol)?;
    let projection_defect = (*q.mat() * *q.mat() - *q.mat()).frobenius();
    if projection_defect > tol.class {
        return Err(Error::NotProjectionAtI {
            defect: projection_defect,
        });
    }
    let seq_residual = check_seq(phi, opts.jte_trials, &mut rng, tol)?;
    if seq_residual > tol.class {
        return Err(Error::NotSeqEndo {
            residual: seq_residual,
        });
    }
    let rank = q.herm().trace().round().clamp(0.0, 2.0) as u8;

    let mut diagnostics = SeqDiagnostics {
        seq_residual,
        projection_defect,
        rank,
        jte: None,
        boundary_residual: None,
        residual: 0.0,
    };

    let form = match rank {
        0 => SeqForm::Zero,
        1 => {
            let eig = eig2(q.herm());
            let complement = Herm2::identity().sub(q.herm());
            let lifted = |a: &Effect2| phi.eval(a) + *complement.mat();
            let inner = classify_seq_with(&lifted as &dyn EffectMap, opts)?;
            let (w2, c1, c2) = match inner.form {
                SeqForm::D4 { w, c1, c2 } => (w, c1, c2),
                other => {
                    return Err(Error::NotEffectValued(format!(
                        "unital part of a rank-one image classified as {:?}",
                        other.kind()
                    )))
                }
            };
            let overlap = (eig.u.mat().adjoint() * *w2.mat())[(0, 0)].norm();
            let (c, rest) = if overlap * overlap >= 0.5 {
                (c1, c2)
            } else {
                (c2, c1)
            };
            if rest.abs() > tol.class {
                return Err(Error::VerificationFailed {
                    residual: rest.abs(),
                });
            }
            diagnostics.jte = inner.diagnostics.jte;
            SeqForm::RankOneImage { w: eig.u, c }
        }
        _ => {
            let recovered = RecoveredCone::new(phi, 0.0)
                .map_err(|e| Error::NotEffectOutput(format!("φ(I/e) has no logarithm: {e}")))?;
            let res = classify_jte_with(&recovered, opts)?;
            diagnostics.jte = Some(res);
            let nonneg = |x: f64| x >= -tol.class;
            // Exponents indistinguishable from 0 are taken as exactly 0: on
            // singular effects 0⁰ = 1 differs from 0^c = 0 for any c > 0.
            let snap = |x: f64| if x.abs() <= tol.class { 0.0 } else { x };
            match res.form {
                JteForm::B1 { u, c } if nonneg(c) => SeqForm::D1 { u, c: snap(c) },
                JteForm::B2 { v, d } if (d - 1.0).abs() <= tol.class => SeqForm::D2 { v },
                JteForm::B2 { v, d } if d > 1.0 => {
                    let mut worst: f64 = 0.0;
                    for p in singular_probes(&mut rng) {
                        worst = worst.max(eval_effect_checked(phi, &p, tol)?.mat().frobenius());
                    }
                    diagnostics.boundary_residual = Some(worst);
                    if worst > tol.class {
                        return Err(Error::VerificationFailed { residual: worst });
                    }
                    SeqForm::D3 { v, d }
                }
                JteForm::B3 { w, c1, c2 } if nonneg(c1) && nonneg(c2) => SeqForm::D4 {
                    w,
                    c1: snap(c1),
                    c2: snap(c2),
                },
                other => {
                    return Err(Error::NotEffectValued(format!(
                        "cone form {:?} has a negative exponent (det exponent {})",
                        other.kind(),
                        other.det_exponent()
                    )))
                }
            }
        }
    };

    let mut residual: f64 = 0.0;
    for i in 0..opts.verify_trials.max(1) {
        let a = random_effect(&mut rng, i);
        let want = eval_effect_checked(phi, &a, tol)?;
        residual = residual.max(
            form.apply_seq_with_tol(&a, tol.pd)
                .mat()
                .rel_dist(want.mat()),
        );
    }
    diagnostics.residual = residual;
    if residual > tol.class {
        return Err(Error::VerificationFailed { residual });
    }
    Ok(SeqClassifyResult { form, diagnostics })
}

/// Human-readable account of a sequential classification.
pub fn explain_seq(result: &SeqClassifyResult) -> String {
    let d = &result.diagnostics;
    let mut out = format!("form: {:?}\n", result.form.kind());
    out.push_str(&format!("rank of phi(I): {}\n", d.rank));
    if !result.form.is_unital() {
        out.push_str("non-unital: arises from the reduction by the projection phi(I)\n");
    }
    if let Some(jte) = &d.jte {
        out.push_str(&format!(
            "cone form: {:?}, branch: {}\n",
            jte.form.kind(),
            jte.diagnostics.branch.describe()
        ));
    }
    if let Some(b) = d.boundary_residual {
        out.push_str(&format!("singular probes: max |phi(P)| = {b:e}\n"));
    }
    out.push_str(&format!(
        "residuals: sequential = {:e}, projection = {:e}, verification = {:e}\n",
        d.seq_residual, d.projection_defect, d.residual
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearize::check_jte_with_tol;
    use crate::mat2::PauliCoords;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn eff(a0: f64, ax: f64, ay: f64, az: f64) -> Effect2 {
        Effect2::new(Herm2::from_pauli(PauliCoords::new(a0, ax, ay, az))).unwrap()
    }

    #[test]
    fn seq_product_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let b = sample::effect(&mut rng);
        assert!(
            seq_product(&Effect2::identity(), &b)
                .mat()
                .rel_dist(b.mat())
                < 1e-15
        );
        let p = sample::rank_one_projection(&mut rng);
        assert!(seq_product(&p, &p).mat().rel_dist(p.mat()) < 1e-14);
        let got = seq_product(
            &Effect2::diag(0.25, 1.0).unwrap(),
            &eff(0.5, 0.25, 0.0, 0.0),
        );
        let want = Mat2::from_real([[0.125, 0.125], [0.125, 0.5]]);
        assert!((*got.mat() - want).max_abs() < 1e-15);
    }

    #[test]
    fn order_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let a = sample::effect(&mut rng);
        assert!(order_leq(&Effect2::zero(), &a));
        assert!(order_leq(&a, &Effect2::identity()));
        assert!(!order_leq(
            &Effect2::diag(0.5, 0.5).unwrap(),
            &Effect2::diag(0.25, 1.0).unwrap()
        ));
    }

    #[test]
    fn seq_factor_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..100 {
            let b = sample::invertible_effect(&mut rng, 0.1);
            let c = sample::effect(&mut rng);
            let a = seq_product(&b, &c);
            let got = seq_factor(&a, &b).unwrap();
            assert!(got.mat().rel_dist(c.mat()) < 1e-9);
            assert!(seq_product(&b, &got).mat().rel_dist(a.mat()) < 1e-9);
        }
        let a = sample::effect(&mut rng);
        assert!(
            seq_factor(&a, &Effect2::identity())
                .unwrap()
                .mat()
                .rel_dist(a.mat())
                < 1e-14
        );
        assert_eq!(
            seq_factor(
                &Effect2::diag(1.0, 0.0).unwrap(),
                &Effect2::diag(0.5, 0.5).unwrap()
            ),
            Err(Error::NotDominated)
        );
        assert_eq!(
            seq_factor(&Effect2::zero(), &Effect2::diag(1.0, 0.0).unwrap()),
            Err(Error::SingularBase)
        );
    }

    #[test]
    fn apply_seq_examples() {
        let d2 = SeqForm::D2 {
            v: Unitary2::identity(),
        };
        let out = d2.apply_seq(&Effect2::diag(0.3, 0.7).unwrap());
        assert!((*out.mat() - Mat2::diag(0.7, 0.3)).max_abs() < 1e-15);

        let d3 = SeqForm::D3 {
            v: Unitary2::identity(),
            d: 2.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..20 {
            assert_eq!(
                *d3.apply_seq(&sample::rank_one_projection(&mut rng)).mat(),
                Mat2::ZERO
            );
        }

        let d1 = SeqForm::D1 {
            u: Unitary2::identity(),
            c: 0.0,
        };
        let a = sample::singular_effect(&mut rng);
        assert!(d1.apply_seq(&a).mat().rel_dist(a.mat()) < 1e-15);
    }

    #[test]
    fn validation_of_exponents() {
        let u = Unitary2::identity();
        assert!(SeqForm::D1 { u, c: -0.1 }.validate().is_err());
        assert!(SeqForm::D3 { v: u, d: 1.0 }.validate().is_err());
        assert!(SeqForm::D4 {
            w: u,
            c1: 0.0,
            c2: -1.0
        }
        .validate()
        .is_err());
        assert!(SeqForm::RankOneImage { w: u, c: f64::NAN }
            .validate()
            .is_err());
        assert!(SeqForm::D3 { v: u, d: 1.5 }.validate().is_ok());
    }

    #[test]
    fn sequential_law_holds_for_every_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for kind in SeqKind::ALL {
            for _ in 0..5 {
                let form = sample::seq_form(&mut rng, kind);
                let r = check_seq(&form, 100, &mut rng, &TOL).unwrap();
                assert!(r < 1e-9, "{form:?}: {r}");
            }
        }
    }

    #[test]
    fn order_square_and_projection_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for kind in SeqKind::ALL {
            let form = sample::seq_form(&mut rng, kind);
            for _ in 0..100 {
                let b = sample::effect(&mut rng);
                let a = seq_product(&b, &sample::effect(&mut rng));
                assert!(order_leq_with_tol(
                    &form.apply_seq(&a),
                    &form.apply_seq(&b),
                    1e-10
                ));

                let sq = seq_product(&b, &b);
                let fb = form.apply_seq(&b);
                assert!(
                    form.apply_seq(&sq)
                        .mat()
                        .rel_dist(seq_product(&fb, &fb).mat())
                        < 1e-9
                );
                assert!(form.apply_seq(&b.sqrt()).mat().rel_dist(fb.sqrt().mat()) < 1e-7);

                let p = form.apply_seq(&sample::rank_one_projection(&mut rng));
                assert!((*p.mat() * *p.mat() - *p.mat()).frobenius() < 1e-9);
            }
        }
    }

    #[test]
    fn d2_is_continuous_boundary_of_d_equals_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let v = sample::unitary(&mut rng);
        let d2 = SeqForm::D2 { v };
        for _ in 0..100 {
            let a = sample::invertible_effect(&mut rng, 0.01);
            let via_inverse = JteForm::B2 { v, d: 1.0 }.apply(&a.to_pd().unwrap());
            assert!(d2.apply_seq(&a).mat().rel_dist(via_inverse.mat()) < 1e-12);
        }
        let p = sample::singular_effect(&mut rng);
        let near = Effect2::new(p.herm().add(&Herm2::scalar(1e-9)).scale(1.0 - 1e-9)).unwrap();
        assert!(d2.apply_seq(&near).mat().rel_dist(d2.apply_seq(&p).mat()) < 1e-8);
    }

    #[test]
    fn commuting_predicates_agree() {
        let p = Effect2::diag(1.0, 0.0).unwrap();
        let q = eff(0.5, 0.5, 0.0, 0.0);
        assert_eq!(commute_iff_seq_commute(&p, &q, 1e-9), (false, false));
        let a = Effect2::diag(0.2, 0.9).unwrap();
        let b = Effect2::diag(0.7, 0.1).unwrap();
        assert_eq!(commute_iff_seq_commute(&a, &b, 1e-9), (true, true));
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..300 {
            let (x, y) = (sample::effect(&mut rng), sample::effect(&mut rng));
            let (c1, c2) = commute_iff_seq_commute(&x, &y, 1e-9);
            assert_eq!(c1, c2);
        }
    }

    #[test]
    fn cone_extension_examples() {
        let id = SeqForm::D1 {
            u: Unitary2::identity(),
            c: 0.0,
        };
        let ext = extend_to_cone(&id, 1.0, &TOL).unwrap();
        let two = Pd2::diag(2.0, 2.0).unwrap();
        assert!(ext.eval(&two).rel_dist(two.mat()) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(58);
        let u = sample::unitary(&mut rng);
        let d1 = SeqForm::D1 { u, c: 0.7 };
        let ext = extend_to_cone(&d1, 2.4, &TOL).unwrap();
        let b1 = JteForm::B1 { u, c: 0.7 };
        for _ in 0..50 {
            let a = sample::pd(&mut rng);
            assert!(ext.eval(&a).rel_dist(b1.apply(&a).mat()) < 1e-10);
        }
        assert!(check_jte_with_tol(&ext, 200, &mut rng, &TOL).unwrap() < 1e-8);
    }

    #[test]
    fn cone_extension_rejects_wrong_exponent_and_unequal_d4() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let d1 = SeqForm::D1 {
            u: sample::unitary(&mut rng),
            c: 0.7,
        };
        assert!(matches!(
            extend_to_cone(&d1, 1.0, &TOL),
            Err(Error::NotHomogeneous { .. })
        ));
        let d4 = SeqForm::D4 {
            w: sample::unitary(&mut rng),
            c1: 0.3,
            c2: 1.2,
        };
        assert!(d4.homogeneity_exponent().is_none());
        assert!(matches!(
            extend_to_cone(&d4, 1.5, &TOL),
            Err(Error::NotHomogeneous { .. })
        ));
        let ext = extend_to_cone_normalized(&d4);
        assert!(check_jte_with_tol(&ext, 200, &mut rng, &TOL).unwrap() < 1e-8);
        let b3 = d4.as_jte().unwrap();
        for _ in 0..50 {
            let a = sample::pd(&mut rng);
            assert!(ext.eval(&a).rel_dist(b3.apply(&a).mat()) < 1e-9);
        }
    }

    #[test]
    fn classify_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for kind in SeqKind::ALL {
            for _ in 0..4 {
                let form = sample::seq_form(&mut rng, kind);
                let res = classify_seq(&form, &TOL).unwrap_or_else(|e| panic!("{form:?}: {e}"));
                assert_eq!(res.form.kind(), kind, "{form:?} -> {:?}", res.form);
                assert!(
                    res.form.gauge_equal(&form, 1e-6),
                    "{form:?} -> {:?}",
                    res.form
                );
            }
        }
    }

    #[test]
    fn classify_d3_checks_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let form = SeqForm::D3 {
            v: sample::unitary(&mut rng),
            d: 1.5,
        };
        let res = classify_seq(&form, &TOL).unwrap();
        match res.form {
            SeqForm::D3 { d, .. } => assert!((d - 1.5).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        assert_eq!(res.diagnostics.boundary_residual, Some(0.0));
    }

    #[test]
    fn constant_identity_is_d4_with_zero_exponents() {
        let constant = |_: &Effect2| Mat2::IDENTITY;
        let res = classify_seq(&constant, &TOL).unwrap();
        match res.form {
            SeqForm::D4 { c1, c2, .. } => assert!(c1.abs() < 1e-9 && c2.abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn classify_rejections() {
        let half = |a: &Effect2| a.mat().scale(0.5);
        assert!(matches!(
            classify_seq(&half, &TOL),
            Err(Error::NotProjectionAtI { .. })
        ));
        let square = |a: &Effect2| *a.mat() * *a.mat();
        assert!(matches!(
            classify_seq(&square, &TOL),
            Err(Error::NotSeqEndo { .. })
        ));
        let explain = explain_seq(&classify_seq(&SeqForm::Zero, &TOL).unwrap());
        assert!(explain.contains("non-unital"));
    }
}
