//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jordan2::canonical::transpose_identity_residual;
use jordan2::classify::{classify_linear_map, Branch};
use jordan2::effects::{
    check_seq, commute_iff_seq_commute, extend_to_cone, extend_to_cone_normalized,
    order_leq_with_tol, singular_probes,
};
use jordan2::linearize::check_jte_with_tol;
use jordan2::mat2::pauli_decompose;
use jordan2::proofcheck::{decompose, gh_independence_det, sandwich_closed_form, trace_pair};
use jordan2::sample;
use jordan2::spin::{so3_to_su2, su2_to_so3, Rot3};
use jordan2::{
    classify_jte, classify_seq, seq_product, Error, Herm2, JteForm, JteKind, LinMapH2, Mat2, Pd2,
    SeqForm, SeqKind, Tolerances, Unitary2,
};
use rand::Rng;

const TOL: Tolerances = Tolerances::DEFAULT;
const JTE_KINDS: [JteKind; 3] = [JteKind::B1, JteKind::B2, JteKind::B3];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn run(name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    println!(
        "{} {name}: {} [{:.3} s, budget {:.0} s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64(),
        if in_time { "" } else { ", over budget" },
    );
    pass
}

fn gh_determinant() -> Outcome {
    let det = gh_independence_det();
    Outcome::new(
        det > -0.6 && det < -0.4,
        format!("gh_det = {det:.10} (required in (-0.6, -0.4))"),
    )
}

fn sandwich() -> Outcome {
    let mut rng = sample::rng_from_seed(1);
    let (mut closed, mut det, mut log) = (0f64, 0f64, 0f64);
    for _ in 0..1000 {
        let s = 3.0 * (1.0 - rng.random::<f64>());
        let t = 3.0 * (1.0 - rng.random::<f64>());
        let d = decompose(s, t).expect("positive arguments");
        closed = closed.max(d.product.mat().rel_dist(sandwich_closed_form(s, t).mat()));
        det = det.max((d.product.det() - 1.0).abs());
        log = log.max(d.log_residual());
    }
    Outcome::new(
        closed <= 1e-9 && det <= 1e-9 && log <= 1e-8,
        format!("1000 pairs: closed form {closed:.2e} (<= 1e-9), |Det - 1| {det:.2e} (<= 1e-9), log vs rW {log:.2e} (<= 1e-8)"),
    )
}

fn converse() -> Outcome {
    let mut rng = sample::rng_from_seed(2);
    let mut worst_jte: f64 = 0.0;
    let mut worst_seq: f64 = 0.0;
    for kind in JTE_KINDS {
        for _ in 0..100 {
            let form = sample::jte_form(&mut rng, kind);
            worst_jte = worst_jte
                .max(check_jte_with_tol(&form, 1000, &mut rng, &TOL).expect("cone-valued"));
        }
    }
    for kind in SeqKind::ALL {
        for _ in 0..100 {
            let form = sample::seq_form(&mut rng, kind);
            worst_seq =
                worst_seq.max(check_seq(&form, 1000, &mut rng, &TOL).expect("effect-valued"));
        }
    }
    Outcome::new(
        worst_jte <= 1e-9 && worst_seq <= 1e-9,
        format!("100 forms x 1000 pairs per family: triple law {worst_jte:.2e}, sequential law {worst_seq:.2e} (<= 1e-9)"),
    )
}

/// max over columns of min over phases |ζ a_j − b_j|.
fn column_gauge_error(a: &Unitary2, b: &Unitary2) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..2 {
        let (ca, cb) = (a.column(j), b.column(j));
        let ip = ca[0].conj() * cb[0] + ca[1].conj() * cb[1];
        let phase = if ip.norm() > 0.0 {
            ip / ip.norm()
        } else {
            jordan2::C64::new(1.0, 0.0)
        };
        for i in 0..2 {
            worst = worst.max((ca[i] * phase - cb[i]).norm());
        }
    }
    worst
}

/// (scalar parameter error, unitary error up to gauge).
fn parameter_errors(got: &JteForm, want: &JteForm) -> Option<(f64, f64)> {
    match (got.normalized(), want.normalized()) {
        (JteForm::B1 { u: a, c: x }, JteForm::B1 { u: b, c: y })
        | (JteForm::B2 { v: a, d: x }, JteForm::B2 { v: b, d: y }) => {
            Some(((x - y).abs(), a.phase_distance(&b)))
        }
        (
            JteForm::B3 {
                w: a,
                c1: x1,
                c2: x2,
            },
            JteForm::B3 {
                w: b,
                c1: y1,
                c2: y2,
            },
        ) => {
            let scalar = (x1 - y1).abs().max((x2 - y2).abs());
            let unitary = if (y1 - y2).abs() < 1e-3 {
                0.0
            } else {
                column_gauge_error(&a, &b)
            };
            Some((scalar, unitary))
        }
        _ => None,
    }
}

fn round_trip() -> Outcome {
    let mut rng = sample::rng_from_seed(3);
    let (mut scalar, mut unitary) = (0f64, 0f64);
    let mut failures = Vec::new();
    for kind in JTE_KINDS {
        let branch = match kind {
            JteKind::B1 => Branch::DetPositive,
            JteKind::B2 => Branch::DetNegative,
            JteKind::B3 => Branch::NonScalar,
        };
        for i in 0..100 {
            let form = sample::jte_form(&mut rng, kind);
            match classify_jte(&form, &TOL) {
                Ok(res) => {
                    let errs = parameter_errors(&res.form, &form);
                    let ok = res.form.gauge_equal(&form, 1e-6) && res.diagnostics.branch == branch;
                    match errs {
                        Some((s, u)) if ok => {
                            scalar = scalar.max(s);
                            unitary = unitary.max(u);
                        }
                        _ => failures.push(format!("{kind:?}#{i} -> {:?}", res.form.kind())),
                    }
                }
                Err(e) => failures.push(format!("{kind:?}#{i}: {e}")),
            }
        }
    }
    let mut seq_failures = 0;
    for kind in SeqKind::ALL {
        for _ in 0..100 {
            let form = sample::seq_form(&mut rng, kind);
            match classify_seq(&form, &TOL) {
                Ok(res) if res.form.kind() == kind && res.form.gauge_equal(&form, 1e-6) => {}
                _ => seq_failures += 1,
            }
        }
    }
    Outcome::new(
        failures.is_empty() && seq_failures == 0 && scalar <= 1e-6 && unitary <= 1e-6,
        format!(
            "300 cone forms: parameter error {scalar:.2e}, unitary error {unitary:.2e} (<= 1e-6), branch mismatches {}; 600 effect forms: {seq_failures} mismatches{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn witnesses() -> Outcome {
    let mut rng = sample::rng_from_seed(4);
    let (mut row, mut iso, mut scale, mut lm) = (0f64, 0f64, 0f64, 0f64);
    let mut errors = 0;
    for kind in JTE_KINDS {
        for _ in 0..100 {
            let form = sample::jte_form(&mut rng, kind);
            let Ok(res) = classify_jte(&form, &TOL) else {
                errors += 1;
                continue;
            };
            let f: LinMapH2 = res.diagnostics.f;
            let f0 = f.f0_row();
            row = row.max(f0[1].abs().max(f0[2].abs()).max(f0[3].abs()));
            let m = f.traceless_block();
            let mut gram = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    gram[i][j] = (0..3).map(|k| m[k][i] * m[k][j]).sum::<f64>();
                }
            }
            let p2 = (gram[0][0] + gram[1][1] + gram[2][2]) / 3.0;
            for (i, gi) in gram.iter().enumerate() {
                for (j, g) in gi.iter().enumerate() {
                    iso = iso.max((g - if i == j { p2 } else { 0.0 }).abs());
                }
            }
            // |p − 1| applies where the block is non-zero; for the
            // diagonal family M = 0 and p = 0.
            if kind != JteKind::B3 {
                scale = scale.max((p2.sqrt() - 1.0).abs());
            }
            for _ in 0..100 {
                let s = 3.0 * (1.0 - rng.random::<f64>());
                let t = 3.0 * (1.0 - rng.random::<f64>());
                let (l, m) = trace_pair(&f, s, t).expect("positive arguments");
                lm = lm.max((l - m).abs() / m.abs());
            }
        }
    }
    Outcome::new(
        errors == 0 && row <= 1e-8 && iso <= 1e-8 && scale <= 1e-8 && lm <= 1e-8,
        format!(
            "300 instances: f0 row {row:.2e}, M^T M - p^2 I {iso:.2e}, |p - 1| {scale:.2e}, l vs m {lm:.2e} (all <= 1e-8)"
        ),
    )
}

fn spin_covering() -> Outcome {
    let mut rng = sample::rng_from_seed(5);
    let (mut hom, mut kernel, mut transport, mut lift, mut near_pi) =
        (0f64, 0f64, 0f64, 0f64, 0f64);
    let minus = Unitary2::new(Mat2::scalar(-1.0)).expect("unitary");
    for _ in 0..1000 {
        let u = sample::su2(&mut rng);
        let v = sample::su2(&mut rng);
        let ru = su2_to_so3(&u);
        hom = hom.max(su2_to_so3(&(u * v)).max_abs_diff(&(ru * su2_to_so3(&v))));
        kernel = kernel
            .max(su2_to_so3(&u.neg()).max_abs_diff(&ru))
            .max(jordan2::spin::rotation_of(&minus).max_abs_diff(&Rot3::IDENTITY));

        let h = sample::herm(&mut rng, 3.0);
        let moved = pauli_decompose(&h.conjugate_by(u.mat())).vector();
        let rotated = ru.apply(h.pauli().vector());
        for k in 0..3 {
            transport = transport.max((moved[k] - rotated[k]).abs());
        }

        let back = so3_to_su2(&ru).expect("rotation");
        let d = (*back.mat() - *u.mat())
            .max_abs()
            .min((*back.mat() + *u.mat()).max_abs());
        lift = lift.max(d);

        let axis = sample::unit_vector(&mut rng);
        let angle = std::f64::consts::PI - 1e-6 * rng.random::<f64>();
        let r = Rot3::axis_angle(axis, angle);
        match so3_to_su2(&r) {
            Ok(w) => near_pi = near_pi.max(su2_to_so3(&w).max_abs_diff(&r)),
            Err(_) => near_pi = f64::INFINITY,
        }
    }
    let bound = 1e-10;
    Outcome::new(
        hom <= bound && kernel <= bound && transport <= bound && lift <= bound && near_pi <= bound,
        format!(
            "1000 trials: homomorphism {hom:.2e}, kernel {kernel:.2e}, transport {transport:.2e}, lift {lift:.2e}, near-pi lift {near_pi:.2e} (<= 1e-10)"
        ),
    )
}

fn transpose() -> Outcome {
    let mut rng = sample::rng_from_seed(6);
    let worst = (0..1000)
        .map(|_| transpose_identity_residual(&sample::pd(&mut rng)))
        .fold(0.0, f64::max);
    let tr = |a: &Pd2| a.mat().transpose();
    let (ok, d) = match classify_jte(&tr, &TOL).map(|r| r.form) {
        Ok(JteForm::B2 { d, .. }) => ((d - 1.0).abs() <= 1e-6, d),
        _ => (false, f64::NAN),
    };
    Outcome::new(
        worst <= 1e-10 && ok,
        format!("1000 matrices: identity residual {worst:.2e} (<= 1e-10); classified as B2 with d = {d:.12}"),
    )
}

fn effects() -> Outcome {
    let mut rng = sample::rng_from_seed(7);

    let mut disagreements = 0;
    let mut commuting = 0;
    for i in 0..1000 {
        let a = sample::effect(&mut rng);
        let b = if i % 2 == 0 {
            sample::effect(&mut rng)
        } else {
            // Same eigenbasis as a: commuting pair.
            let (hi, lo) = (rng.random::<f64>(), rng.random::<f64>());
            let u = jordan2::mat2::eig2(a.herm()).u;
            jordan2::Effect2::new(Herm2::diag(hi, lo).conjugate_by(u.mat())).expect("effect")
        };
        let (x, y) = commute_iff_seq_commute(&a, &b, 1e-9);
        commuting += x as usize;
        disagreements += (x != y) as usize;
    }

    let mut nonzero = 0;
    let mut probes = 0;
    for _ in 0..100 {
        let form = sample::seq_form(&mut rng, SeqKind::D3);
        let mut ps = singular_probes(&mut rng).to_vec();
        ps.push(sample::singular_effect(&mut rng));
        for p in ps {
            probes += 1;
            nonzero += (*form.apply_seq(&p).mat() != Mat2::ZERO) as usize;
        }
    }

    let mut order_violations = 0;
    let mut order_pairs = 0;
    for kind in SeqKind::ALL {
        let form = sample::seq_form(&mut rng, kind);
        for _ in 0..1000 {
            let b = sample::effect(&mut rng);
            let a = seq_product(&b, &sample::effect(&mut rng));
            order_pairs += 1;
            if !order_leq_with_tol(&form.apply_seq(&a), &form.apply_seq(&b), TOL.pd) {
                order_violations += 1;
            }
        }
    }

    let mut cone: f64 = 0.0;
    let mut cone_errors = Vec::new();
    for kind in [SeqKind::D1, SeqKind::D2, SeqKind::D3, SeqKind::D4] {
        for i in 0..10 {
            let mut form = sample::seq_form(&mut rng, kind);
            if kind == SeqKind::D4 && i % 2 == 0 {
                if let SeqForm::D4 { w, c1, .. } = form {
                    form = SeqForm::D4 { w, c1, c2: c1 };
                }
            }
            let r = match form.homogeneity_exponent() {
                Some(c) => extend_to_cone(&form, c, &TOL)
                    .and_then(|ext| check_jte_with_tol(&ext, 200, &mut rng, &TOL)),
                None => {
                    if !matches!(
                        extend_to_cone(&form, form.as_jte().unwrap().det_exponent(), &TOL),
                        Err(Error::NotHomogeneous { .. })
                    ) {
                        cone_errors.push(format!("{kind:?}: inhomogeneous form accepted"));
                    }
                    check_jte_with_tol(&extend_to_cone_normalized(&form), 200, &mut rng, &TOL)
                }
            };
            match r {
                Ok(x) => cone = cone.max(x),
                Err(e) => cone_errors.push(format!("{kind:?}: {e}")),
            }
        }
    }

    Outcome::new(
        disagreements == 0 && nonzero == 0 && order_violations == 0 && cone <= 1e-8 && cone_errors.is_empty(),
        format!(
            "commute predicates disagree on {disagreements}/1000 ({commuting} commuting); D3 nonzero on {nonzero}/{probes} singular probes; order violations {order_violations}/{order_pairs}; cone extension triple law {cone:.2e} (<= 1e-8){}",
            cone_errors.first().map(|e| format!("; error: {e}")).unwrap_or_default()
        ),
    )
}

fn negative_controls() -> Outcome {
    fn residual_of(err: &Error) -> Option<f64> {
        match err {
            Error::NotJte { residual } | Error::NotLinear { residual } => Some(*residual),
            Error::ScaleNotOne { p } => Some((p - 1.0).abs()),
            _ => None,
        }
    }
    let mut rng = sample::rng_from_seed(8);
    let u = sample::unitary(&mut rng);
    let base = JteForm::B1 { u, c: 0.3 };
    let square = |a: &Pd2| *a.mat() * *a.mat();
    let shift = |a: &Pd2| *a.mat() + Mat2::IDENTITY;
    // exp(2 f(log A)): the traceless block is twice a rotation.
    let doubled = move |a: &Pd2| {
        let b = base.apply(a);
        *b.mat() * *b.mat()
    };
    let mut doubled_f = base.log_linear_map();
    for row in doubled_f.0.iter_mut() {
        for x in row.iter_mut() {
            *x *= 2.0;
        }
    }

    let mut lines = Vec::new();
    let mut pass = true;
    let black_boxes: [(&str, &dyn jordan2::ConeMap); 3] = [
        ("A^2", &square),
        ("A + I", &shift),
        ("p = 2 scaled", &doubled),
    ];
    for (name, phi) in black_boxes {
        match classify_jte(phi, &TOL) {
            Err(e) => {
                let r = residual_of(&e);
                pass &= r.is_some_and(|r| r > 0.01);
                lines.push(format!("{name}: {e}"));
            }
            Ok(res) => {
                pass = false;
                lines.push(format!("{name}: accepted as {:?}", res.form.kind()));
            }
        }
    }
    match classify_linear_map(&doubled_f, &TOL) {
        Err(e @ Error::ScaleNotOne { .. }) => lines.push(format!("p = 2 linear map: {e}")),
        other => {
            pass = false;
            lines.push(format!("p = 2 linear map: {other:?}"));
        }
    }
    Outcome::new(pass, lines.join("; "))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        run("gh independence determinant", secs(1), gh_determinant),
        run("sandwich identity", secs(2), sandwich),
        run("converse morphism laws", secs(30), converse),
        run("classifier round-trip", secs(60), round_trip),
        run("row and isometry witnesses", secs(60), witnesses),
        run("spin covering", secs(60), spin_covering),
        run("transpose identity", secs(60), transpose),
        run("effects", secs(60), effects),
        run("negative controls", secs(60), negative_controls),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
