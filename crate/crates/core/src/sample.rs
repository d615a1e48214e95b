//! Seeded random generators for matrices, unitaries, cone and effect
//! elements. Everything here is driven by a caller-supplied [`rand::Rng`];
//! the crate itself uses [`rand_chacha::ChaCha8Rng`] so that draws are
//! portable across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::canonical::{JteForm, JteKind};
use crate::effects::{SeqForm, SeqKind};
use crate::mat2::{mexp, Effect2, Herm2, Mat2, PauliCoords, Pd2, Traceless2, Unitary2, C64};
use crate::spin::SpinU;

/// Seed used by the library when the caller does not provide an RNG.
pub const DEFAULT_SEED: u64 = 0x05EE_D2B2;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Unit 3-vector, uniform on the sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Arbitrary complex matrix with standard normal entries.
pub fn mat<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut z = || C64::new(normal(rng), normal(rng));
    Mat2::new(z(), z(), z(), z())
}

/// Hermitian matrix with Hilbert–Schmidt norm at most `max_norm`.
pub fn herm<R: Rng + ?Sized>(rng: &mut R, max_norm: f64) -> Herm2 {
    let dir = loop {
        let c = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            break c.map(|x| x / n);
        }
    };
    let r = max_norm * rng.random::<f64>();
    Herm2::from_pauli(PauliCoords::from_array(dir.map(|x| x * r)))
}

pub fn traceless<R: Rng + ?Sized>(rng: &mut R, max_norm: f64) -> Traceless2 {
    let v = unit_vector(rng);
    let r = max_norm * rng.random::<f64>();
    Traceless2::from_vector(v.map(|x| x * r))
}

/// Haar-distributed element of SU(2), from a uniform unit quaternion.
pub fn su2<R: Rng + ?Sized>(rng: &mut R) -> SpinU {
    let q = loop {
        let q = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            break q.map(|x| x / n);
        }
    };
    let m = Mat2::new(
        C64::new(q[0], q[1]),
        C64::new(q[2], q[3]),
        C64::new(-q[2], q[3]),
        C64::new(q[0], -q[1]),
    );
    SpinU::from_unitary(&Unitary2::new(m).expect("quaternion matrix is unitary"))
}

/// Haar-distributed element of U(2): a random SU(2) element times a phase.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    su2(rng).unitary().scale_phase(C64::from_polar(1.0, theta))
}

/// U·diag(e^{x1}, e^{x2})·U* with x_i uniform in [lo, hi].
pub fn pd_log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Pd2 {
    let u = unitary(rng);
    let x1 = rng.random_range(lo..=hi);
    let x2 = rng.random_range(lo..=hi);
    mexp(&Herm2::diag(x1, x2)).conjugate_by(u.mat())
}

/// Positive definite matrix with spectrum in [e⁻², e²].
pub fn pd<R: Rng + ?Sized>(rng: &mut R) -> Pd2 {
    pd_log_uniform(rng, -2.0, 2.0)
}

/// Effect U·diag(x1, x2)·U* with x_i uniform in [0, 1].
pub fn effect<R: Rng + ?Sized>(rng: &mut R) -> Effect2 {
    let u = unitary(rng);
    let h = Herm2::diag(rng.random::<f64>(), rng.random::<f64>());
    Effect2::new(h.conjugate_by(u.mat())).expect("spectrum lies in [0, 1]")
}

/// Effect with spectrum in [lo, 1], lo > 0 (invertible effects).
pub fn invertible_effect<R: Rng + ?Sized>(rng: &mut R, lo: f64) -> Effect2 {
    let u = unitary(rng);
    let h = Herm2::diag(rng.random_range(lo..=1.0), rng.random_range(lo..=1.0));
    Effect2::new(h.conjugate_by(u.mat())).expect("spectrum lies in [lo, 1]")
}

/// Rank-one projection onto a uniformly random direction.
pub fn rank_one_projection<R: Rng + ?Sized>(rng: &mut R) -> Effect2 {
    let v = unit_vector(rng);
    Effect2::new(Herm2::from_pauli(PauliCoords::new(
        0.5,
        0.5 * v[0],
        0.5 * v[1],
        0.5 * v[2],
    )))
    .expect("projection is an effect")
}

/// Singular effect: a rank-one projection scaled by a factor in (0, 1].
pub fn singular_effect<R: Rng + ?Sized>(rng: &mut R) -> Effect2 {
    let p = rank_one_projection(rng);
    let s = rng.random_range(0.05..=1.0);
    Effect2::new(p.herm().scale(s)).expect("scaled projection is an effect")
}

/// Random JTE form of the given family, exponents uniform in [−2, 2].
pub fn jte_form<R: Rng + ?Sized>(rng: &mut R, kind: JteKind) -> JteForm {
    let u = unitary(rng);
    let mut x = || rng.random_range(-2.0..=2.0);
    match kind {
        JteKind::B1 => JteForm::B1 { u, c: x() },
        JteKind::B2 => JteForm::B2 { v: u, d: x() },
        JteKind::B3 => JteForm::B3 {
            w: u,
            c1: x(),
            c2: x(),
        },
    }
}

/// Random sequential form of the given family: c, c1, c2 uniform in
/// [0, 2] and d uniform in (1, 3].
pub fn seq_form<R: Rng + ?Sized>(rng: &mut R, kind: SeqKind) -> SeqForm {
    let u = unitary(rng);
    match kind {
        SeqKind::Zero => SeqForm::Zero,
        SeqKind::D1 => SeqForm::D1 {
            u,
            c: rng.random_range(0.0..=2.0),
        },
        SeqKind::D2 => SeqForm::D2 { v: u },
        SeqKind::D3 => SeqForm::D3 {
            v: u,
            d: 3.0 - rng.random_range(0.0..2.0),
        },
        SeqKind::D4 => SeqForm::D4 {
            w: u,
            c1: rng.random_range(0.0..=2.0),
            c2: rng.random_range(0.0..=2.0),
        },
        SeqKind::RankOneImage => SeqForm::RankOneImage {
            w: u,
            c: rng.random_range(0.0..=2.0),
        },
    }
}
