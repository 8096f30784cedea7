//! Gauss–Legendre nodes and the uniform Bloch-sphere average.

use std::f64::consts::PI;

use crate::exec;

/// Polar nodes (Gauss–Legendre in cos θ).
pub const THETA_NODES: usize = 16;
/// Azimuthal nodes (periodic trapezoid in φ).
pub const PHI_NODES: usize = 32;

/// Gauss–Legendre nodes and weights on (−1, 1), by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for Pₙ(x) and Pₙ'(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Uniform average of f(θ, φ) over the Bloch sphere,
/// (1/4π) ∫dφ ∫dθ sinθ f, with a 16-node Gauss–Legendre rule in cosθ and a
/// 32-node periodic trapezoid rule in φ. Exact for the low-degree
/// trigonometric polynomials that arise here.
pub fn bloch_average<F>(f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    let (xs, ws) = gauss_legendre(THETA_NODES);
    let n_total = THETA_NODES * PHI_NODES;
    let values = exec::map_indexed(n_total, |idx| {
        let i = idx / PHI_NODES;
        let j = idx % PHI_NODES;
        let theta = xs[i].clamp(-1.0, 1.0).acos();
        let phi = 2.0 * PI * j as f64 / PHI_NODES as f64;
        ws[i] * f(theta, phi)
    });
    // Fixed summation order keeps the result bit-identical across runs.
    let total: f64 = values.iter().sum();
    total * (2.0 * PI / PHI_NODES as f64) / (4.0 * PI)
}

/// The (θ, φ) nodes used by [`bloch_average`], in evaluation order.
pub fn bloch_nodes() -> Vec<(f64, f64)> {
    let (xs, _) = gauss_legendre(THETA_NODES);
    let mut out = Vec::with_capacity(THETA_NODES * PHI_NODES);
    for x in &xs {
        for j in 0..PHI_NODES {
            out.push((x.clamp(-1.0, 1.0).acos(), 2.0 * PI * j as f64 / PHI_NODES as f64));
        }
    }
    out
}
