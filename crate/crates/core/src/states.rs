//! Channel-state constructors and a Groverian entanglement measure for pure
//! states.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{c, CVec, StateVector, C64, NORM_TOL};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Input-state parameterization on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// θ ∈ [0, π], φ ∈ [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::contract(format!("theta {theta} outside [0, π]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::contract(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(BlochAngles { theta, phi })
    }

    /// Like [`BlochAngles::new`] but reduces φ modulo 2π, so grid endpoints
    /// such as φ = 2π are accepted.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        let mut p = phi % (2.0 * PI);
        if p < 0.0 {
            p += 2.0 * PI;
        }
        // Guard against 2π surviving the reduction through rounding.
        if p >= 2.0 * PI {
            p = 0.0;
        }
        Self::new(theta, p)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// cos(θ/2)e^{iφ/2}|0⟩ + sin(θ/2)e^{−iφ/2}|1⟩.
pub fn bloch_state(angles: &BlochAngles) -> StateVector {
    let half = angles.theta / 2.0;
    let a0 = C64::from_polar(half.cos(), angles.phi / 2.0);
    let a1 = C64::from_polar(half.sin(), -angles.phi / 2.0);
    StateVector::from_slice(&[a0, a1]).expect("Bloch state is unit-norm by construction")
}

/// The entangled states usable as teleportation channels.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    /// (|00⟩ + |11⟩)/√2
    Epr,
    /// (|000⟩ + |111⟩)/√2
    GhzStd,
    /// (|100⟩ + |010⟩ + √2|001⟩)/2
    WStd,
    /// a|000⟩ + b|111⟩ with |a|² + |b|² = 1
    GhzGeneral { a: C64, b: C64 },
    /// a|001⟩ + b|010⟩ + c|100⟩ with |a|² + |b|² + |c|² = 1
    WGeneral { a: C64, b: C64, c: C64 },
    /// (|00 q₁⟩ + |11 q₂⟩)/√2 for arbitrary normalized one-qubit q₁, q₂
    PsiTilde { q1: [C64; 2], q2: [C64; 2] },
}

impl ChannelKind {
    pub fn n_qubits(&self) -> usize {
        match self {
            ChannelKind::Epr => 2,
            _ => 3,
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |sum_sq: f64, what: &str| {
            if (sum_sq - 1.0).abs() > NORM_TOL {
                Err(Error::contract(format!(
                    "{what} normalization defect {:.3e}",
                    (sum_sq - 1.0).abs()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            ChannelKind::Epr | ChannelKind::GhzStd | ChannelKind::WStd => Ok(()),
            ChannelKind::GhzGeneral { a, b } => check(a.norm_sqr() + b.norm_sqr(), "GHZ(a,b)"),
            ChannelKind::WGeneral { a, b, c } => {
                check(a.norm_sqr() + b.norm_sqr() + c.norm_sqr(), "W(a,b,c)")
            }
            ChannelKind::PsiTilde { q1, q2 } => {
                check(q1[0].norm_sqr() + q1[1].norm_sqr(), "q1")?;
                check(q2[0].norm_sqr() + q2[1].norm_sqr(), "q2")
            }
        }
    }
}

/// Construct the channel state for a [`ChannelKind`].
pub fn make_channel(kind: &ChannelKind) -> Result<StateVector> {
    kind.validate()?;
    let state = match kind {
        ChannelKind::Epr => {
            let mut amps = vec![c(0.0); 4];
            amps[0] = c(SQRT_HALF);
            amps[3] = c(SQRT_HALF);
            amps
        }
        ChannelKind::GhzStd => {
            let mut amps = vec![c(0.0); 8];
            amps[0] = c(SQRT_HALF);
            amps[7] = c(SQRT_HALF);
            amps
        }
        ChannelKind::WStd => {
            let mut amps = vec![c(0.0); 8];
            amps[4] = c(0.5);
            amps[2] = c(0.5);
            amps[1] = c(SQRT_HALF);
            amps
        }
        ChannelKind::GhzGeneral { a, b } => {
            let mut amps = vec![c(0.0); 8];
            amps[0] = *a;
            amps[7] = *b;
            amps
        }
        ChannelKind::WGeneral { a, b, c: cc } => {
            let mut amps = vec![c(0.0); 8];
            amps[1] = *a;
            amps[2] = *b;
            amps[4] = *cc;
            amps
        }
        ChannelKind::PsiTilde { q1, q2 } => {
            let mut amps = vec![c(0.0); 8];
            amps[0] = q1[0] * SQRT_HALF;
            amps[1] = q1[1] * SQRT_HALF;
            amps[6] = q2[0] * SQRT_HALF;
            amps[7] = q2[1] * SQRT_HALF;
            amps
        }
    };
    StateVector::new(CVec::from(state))
}

/// Number of random multi-starts in [`groverian_pure`].
pub const GROVERIAN_STARTS: usize = 20;
/// Per-start cap on alternating-optimization sweeps.
pub const GROVERIAN_MAX_SWEEPS: usize = 10_000;
/// Convergence tolerance on successive P_max values.
pub const GROVERIAN_TOL: f64 = 1e-14;
/// Default seed for the multi-start random source.
pub const GROVERIAN_DEFAULT_SEED: u64 = 20_080_527;

/// Groverian measure G(ψ) = √(1 − P_max) of a 2- or 3-qubit pure state,
/// where P_max is the squared overlap with the closest product state.
///
/// P_max is found by alternating single-qubit optimization: with all factors
/// but one fixed, the optimal remaining factor is the normalized partial
/// contraction of ψ, so each sweep is monotone in P. Multi-starts guard
/// against local maxima of the 3-qubit landscape.
pub fn groverian_pure(psi: &StateVector) -> Result<f64> {
    groverian_pure_seeded(psi, GROVERIAN_DEFAULT_SEED)
}

/// [`groverian_pure`] with an explicit seed; start k draws from a stream
/// seeded with `seed + k`, so starts can run concurrently and reproducibly.
pub fn groverian_pure_seeded(psi: &StateVector, seed: u64) -> Result<f64> {
    let n = psi.n_qubits();
    if !(2..=3).contains(&n) {
        return Err(Error::contract(format!(
            "Groverian measure supports 2 or 3 qubits, got {n}"
        )));
    }
    let amps = psi.amplitudes().clone();
    let best: f64 = exec::map_indexed(GROVERIAN_STARTS, move |start| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(start as u64));
        run_start(&amps, n, &mut rng)
    })
    .into_iter()
    .fold(0.0, f64::max);
    Ok((1.0 - best).max(0.0).sqrt())
}

fn random_factor(rng: &mut impl Rng) -> [C64; 2] {
    loop {
        let g: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let v = [C64::new(g[0], g[1]), C64::new(g[2], g[3])];
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm];
        }
    }
}

/// One multi-start: returns the converged P value.
fn run_start(amps: &CVec, n: usize, rng: &mut impl Rng) -> f64 {
    let dim = 1 << n;
    let mut factors: Vec<[C64; 2]> = (0..n).map(|_| random_factor(rng)).collect();
    let mut p_prev = -1.0;
    let mut p = 0.0;
    for _sweep in 0..GROVERIAN_MAX_SWEEPS {
        for k in 0..n {
            // v[b] = Σ ψ[idx] Π_{j≠k} conj(factor_j[bit_j]), over idx with bit_k = b.
            let mut v = [C64::new(0.0, 0.0); 2];
            for idx in 0..dim {
                let mut w = amps[idx];
                for (j, factor) in factors.iter().enumerate() {
                    if j == k {
                        continue;
                    }
                    let bit = (idx >> (n - 1 - j)) & 1;
                    w *= factor[bit].conj();
                }
                let bk = (idx >> (n - 1 - k)) & 1;
                v[bk] += w;
            }
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm > 1e-15 {
                factors[k] = [v[0] / norm, v[1] / norm];
            }
            p = norm * norm;
        }
        if (p - p_prev).abs() < GROVERIAN_TOL {
            break;
        }
        p_prev = p;
    }
    p
}
