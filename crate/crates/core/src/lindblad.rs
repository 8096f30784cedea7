//! Lindblad engine: per-qubit Pauli dephasing/flip noise on the channel
//! register, solved two independent ways (exact superoperator exponential
//! and fixed-step RK4), plus transcriptions of the analytic channel
//! matrices used as oracles.
//!
//! The master equation is dρ/dt = Σ (LρL† − ½{L†L, ρ}) with
//! L = √κ σ_α on one qubit and no Hamiltonian part.


use crate::error::{Error, Result};
use crate::linalg::{
    c, dagger, embed_one, expm, eye, kron, kron_all, max_abs, max_abs_diff, CMat, CVec,
    DensityMatrix, QubitIndex, C64,
};
use crate::states::{make_channel, ChannelKind};

/// Pauli axis of a decoherence term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(&self) -> CMat {
        let mut m = CMat::zeros((2, 2));
        match self {
            Axis::X => {
                m[(0, 1)] = c(1.0);
                m[(1, 0)] = c(1.0);
            }
            Axis::Y => {
                m[(0, 1)] = C64::new(0.0, -1.0);
                m[(1, 0)] = C64::new(0.0, 1.0);
            }
            Axis::Z => {
                m[(0, 0)] = c(1.0);
                m[(1, 1)] = c(-1.0);
            }
        }
        m
    }

    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn label(&self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// One decoherence term L = √κ σ_α acting on a channel qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladTerm {
    pub qubit: QubitIndex,
    pub axis: Axis,
    pub kappa: f64,
}

impl LindbladTerm {
    pub fn new(qubit: QubitIndex, axis: Axis, kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::contract(format!("kappa must be >= 0, got {kappa}")));
        }
        Ok(LindbladTerm { qubit, axis, kappa })
    }
}

/// A set of Lindblad terms with no duplicate (qubit, axis) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    terms: Vec<LindbladTerm>,
}

impl NoiseSpec {
    pub fn new(terms: Vec<LindbladTerm>) -> Result<Self> {
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[..i] {
                if a.qubit == b.qubit && a.axis == b.axis {
                    return Err(Error::contract(format!(
                        "duplicate Lindblad term on qubit {} axis {}",
                        a.qubit.get(),
                        a.axis.label()
                    )));
                }
            }
        }
        Ok(NoiseSpec { terms })
    }

    /// The same axis on every qubit of a k-qubit channel register, common κ.
    pub fn same_axis(n_qubits: usize, axis: Axis, kappa: f64) -> Result<Self> {
        let terms = (1..=n_qubits)
            .map(|qi| LindbladTerm::new(QubitIndex::new(qi)?, axis, kappa))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    /// One axis per qubit (mixed-axis assignments), common κ.
    pub fn per_qubit_axes(axes: &[Axis], kappa: f64) -> Result<Self> {
        let terms = axes
            .iter()
            .enumerate()
            .map(|(idx, ax)| LindbladTerm::new(QubitIndex::new(idx + 1)?, *ax, kappa))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms)
    }

    pub fn terms(&self) -> &[LindbladTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_kappa(&self) -> f64 {
        self.terms.iter().map(|t| t.kappa).fold(0.0, f64::max)
    }
}

/// Convenience taxonomy: one shared κ on every channel qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    AxisX,
    AxisY,
    AxisZ,
    Isotropic,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [
        NoiseKind::AxisX,
        NoiseKind::AxisY,
        NoiseKind::AxisZ,
        NoiseKind::Isotropic,
    ];

    /// Expand over a k-qubit channel register: k terms for an axis kind,
    /// 3k for the isotropic kind.
    pub fn spec(&self, n_qubits: usize, kappa: f64) -> NoiseSpec {
        let spec = match self {
            NoiseKind::AxisX => NoiseSpec::same_axis(n_qubits, Axis::X, kappa),
            NoiseKind::AxisY => NoiseSpec::same_axis(n_qubits, Axis::Y, kappa),
            NoiseKind::AxisZ => NoiseSpec::same_axis(n_qubits, Axis::Z, kappa),
            NoiseKind::Isotropic => {
                let mut terms = Vec::with_capacity(3 * n_qubits);
                for qi in 1..=n_qubits {
                    for ax in Axis::ALL {
                        terms.push(LindbladTerm::new(QubitIndex::new(qi).unwrap(), ax, kappa).unwrap());
                    }
                }
                NoiseSpec::new(terms)
            }
        };
        spec.expect("expansion of a NoiseKind is always well-formed")
    }

    pub fn label(&self) -> &'static str {
        match self {
            NoiseKind::AxisX => "x",
            NoiseKind::AxisY => "y",
            NoiseKind::AxisZ => "z",
            NoiseKind::Isotropic => "iso",
        }
    }
}

/// Column-stacking vectorization: v[col·dim + row] = m[row, col].
pub fn vec_col(m: &CMat) -> CVec {
    let dim = m.nrows();
    let mut v = CVec::zeros(dim * dim);
    for col in 0..dim {
        for row in 0..dim {
            v[col * dim + row] = m[(row, col)];
        }
    }
    v
}

/// Inverse of [`vec_col`].
pub fn unvec_col(v: &CVec, dim: usize) -> CMat {
    assert_eq!(v.len(), dim * dim, "unvec_col: length mismatch");
    let mut m = CMat::zeros((dim, dim));
    for col in 0..dim {
        for row in 0..dim {
            m[(row, col)] = v[col * dim + row];
        }
    }
    m
}

/// The superoperator L with dρ/dt = L·vec(ρ) under column stacking:
/// each term contributes (L̄ ⊗ L) − ½(I ⊗ L†L) − ½((L†L)ᵀ ⊗ I).
pub fn liouvillian(spec: &NoiseSpec, n_qubits: usize) -> Result<CMat> {
    let dim = 1 << n_qubits;
    let id = eye(dim);
    let mut sup = CMat::zeros((dim * dim, dim * dim));
    for term in spec.terms() {
        let op = embed_one(&term.axis.pauli(), term.qubit, n_qubits)?;
        let l = op.mapv(|z| z * c(term.kappa.sqrt()));
        let l_conj = l.mapv(|z| z.conj());
        let ldl = dagger(&l).dot(&l);
        let ldl_t = ldl.t().to_owned();
        sup = sup + kron(&l_conj, &l)
            - kron(&id, &ldl).mapv(|z| z * c(0.5))
            - kron(&ldl_t, &id).mapv(|z| z * c(0.5));
    }
    Ok(sup)
}

/// Exact propagation: unvec(expm(L t)·vec(ρ₀)).
pub fn evolve_expm(rho0: &DensityMatrix, spec: &NoiseSpec, t: f64) -> Result<DensityMatrix> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::contract(format!("time must be >= 0, got {t}")));
    }
    if t == 0.0 || spec.is_empty() {
        return Ok(rho0.clone());
    }
    let n = rho0.n_qubits();
    let sup = liouvillian(spec, n)?;
    let prop = expm(&sup.mapv(|z| z * c(t)))?;
    let v = prop.dot(&vec_col(rho0.matrix()).insert_axis(ndarray::Axis(1)));
    let out = unvec_col(&v.index_axis(ndarray::Axis(1), 0).to_owned(), rho0.dim());
    DensityMatrix::new(out)
        .map_err(|e| Error::internal(format!("evolve_expm produced an invalid state: {e}")))
}

/// Default step count for [`evolve_rk4`]: max(1000, ⌈100·κ_max·t⌉).
pub fn default_rk4_steps(spec: &NoiseSpec, t: f64) -> usize {
    let kt = spec.max_kappa() * t.max(0.0);
    1000usize.max((100.0 * kt).ceil() as usize)
}

/// Classical fixed-step RK4 on dρ/dt, independent of the superoperator path.
pub fn evolve_rk4(
    rho0: &DensityMatrix,
    spec: &NoiseSpec,
    t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::contract(format!("time must be >= 0, got {t}")));
    }
    if steps == 0 {
        return Err(Error::contract("steps must be >= 1"));
    }
    if t == 0.0 || spec.is_empty() {
        return Ok(rho0.clone());
    }
    let n = rho0.n_qubits();
    let ops: Vec<(CMat, CMat)> = spec
        .terms()
        .iter()
        .map(|term| {
            let op = embed_one(&term.axis.pauli(), term.qubit, n)?;
            let l = op.mapv(|z| z * c(term.kappa.sqrt()));
            let ldl = dagger(&l).dot(&l);
            Ok((l, ldl))
        })
        .collect::<Result<Vec<_>>>()?;

    let rhs = |rho: &CMat| -> CMat {
        let mut out = CMat::zeros(rho.dim());
        for (l, ldl) in &ops {
            let jump = l.dot(rho).dot(&dagger(l));
            let anti = ldl.dot(rho) + rho.dot(ldl);
            out = out + jump - anti.mapv(|z| z * c(0.5));
        }
        out
    };

    let dt = t / steps as f64;
    let mut rho = rho0.matrix().clone();
    for _ in 0..steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&(&rho + &k1.mapv(|z| z * c(dt / 2.0))));
        let k3 = rhs(&(&rho + &k2.mapv(|z| z * c(dt / 2.0))));
        let k4 = rhs(&(&rho + &k3.mapv(|z| z * c(dt))));
        rho = rho
            + (k1 + k2.mapv(|z| z * c(2.0)) + k3.mapv(|z| z * c(2.0)) + k4).mapv(|z| z * c(dt / 6.0));
    }
    DensityMatrix::new(rho)
        .map_err(|e| Error::internal(format!("evolve_rk4 produced an invalid state: {e}")))
}

// ---------------------------------------------------------------------------
// Analytic channel matrices (oracles), transcribed verbatim with their signs.
// ---------------------------------------------------------------------------

fn ghz_like_matrix(s00: f64, soff_main: f64, s07: f64, soff_anti: f64) -> CMat {
    // diag(s00, m, m, m, m, m, m, s00) plus anti-diagonal entries; Hermitian real.
    let mut m = CMat::zeros((8, 8));
    for i in 0..8 {
        m[(i, i)] = c(if i == 0 || i == 7 { s00 } else { soff_main });
    }
    m[(0, 7)] = c(s07);
    m[(7, 0)] = c(s07);
    for (i, j) in [(1, 6), (2, 5), (3, 4)] {
        m[(i, j)] = c(soff_anti);
        m[(j, i)] = c(soff_anti);
    }
    m
}

fn closed_ghz(noise: NoiseKind, kt: f64) -> CMat {
    match noise {
        NoiseKind::AxisZ => {
            let mut m = CMat::zeros((8, 8));
            m[(0, 0)] = c(0.5);
            m[(7, 7)] = c(0.5);
            m[(0, 7)] = c((-6.0 * kt).exp() / 2.0);
            m[(7, 0)] = m[(0, 7)];
            m
        }
        NoiseKind::AxisX => {
            let ap = 1.0 + 3.0 * (-4.0 * kt).exp();
            let am = 1.0 - (-4.0 * kt).exp();
            ghz_like_matrix(ap / 8.0, am / 8.0, ap / 8.0, am / 8.0)
        }
        NoiseKind::AxisY => {
            let ap = 1.0 + 3.0 * (-4.0 * kt).exp();
            let am = 1.0 - (-4.0 * kt).exp();
            let b1 = 3.0 * (-2.0 * kt).exp() + (-6.0 * kt).exp();
            let b2 = (-2.0 * kt).exp() - (-6.0 * kt).exp();
            ghz_like_matrix(ap / 8.0, am / 8.0, b1 / 8.0, -b2 / 8.0)
        }
        NoiseKind::Isotropic => {
            let ap = 1.0 + 3.0 * (-8.0 * kt).exp();
            let am = 1.0 - (-8.0 * kt).exp();
            let gamma = 4.0 * (-12.0 * kt).exp();
            let mut m = ghz_like_matrix(ap / 8.0, am / 8.0, gamma / 8.0, 0.0);
            m[(1, 6)] = c(0.0);
            m[(6, 1)] = c(0.0);
            m[(2, 5)] = c(0.0);
            m[(5, 2)] = c(0.0);
            m[(3, 4)] = c(0.0);
            m[(4, 3)] = c(0.0);
            m
        }
    }
}

fn closed_w(noise: NoiseKind, kt: f64) -> CMat {
    let r2 = std::f64::consts::SQRT_2;
    match noise {
        NoiseKind::AxisZ => {
            let q = (-4.0 * kt).exp();
            let mut m = CMat::zeros((8, 8));
            m[(1, 1)] = c(2.0 / 4.0);
            m[(2, 2)] = c(1.0 / 4.0);
            m[(4, 4)] = c(1.0 / 4.0);
            for (i, j, v) in [(1, 2, r2 * q), (1, 4, r2 * q), (2, 4, q)] {
                m[(i, j)] = c(v / 4.0);
                m[(j, i)] = c(v / 4.0);
            }
            m
        }
        NoiseKind::AxisX | NoiseKind::AxisY => {
            let e2 = (-2.0 * kt).exp();
            let e4 = (-4.0 * kt).exp();
            let e6 = (-6.0 * kt).exp();
            let a1 = 1.0 + e2 + e4 + e6;
            let a2 = 1.0 + e2 - e4 - e6;
            let a3 = 1.0 - e2 - e4 + e6;
            let a4 = 1.0 - e2 + e4 - e6;
            let bp = 1.0 + e6;
            let bm = 1.0 - e6;
            // Sign on the a2/a3 blocks distinguishes the y matrix from the x one.
            let s = if noise == NoiseKind::AxisX { 1.0 } else { -1.0 };
            let rows: [[f64; 8]; 8] = [
                [2.0 * a2, 0.0, 0.0, s * r2 * a2, 0.0, s * r2 * a2, s * a2, 0.0],
                [0.0, 2.0 * a1, r2 * a1, 0.0, r2 * a1, 0.0, 0.0, s * a3],
                [0.0, r2 * a1, 2.0 * bp, 0.0, a1, 0.0, 0.0, s * r2 * a3],
                [s * r2 * a2, 0.0, 0.0, 2.0 * bm, 0.0, a4, r2 * a4, 0.0],
                [0.0, r2 * a1, a1, 0.0, 2.0 * bp, 0.0, 0.0, s * r2 * a3],
                [s * r2 * a2, 0.0, 0.0, a4, 0.0, 2.0 * bm, r2 * a4, 0.0],
                [s * a2, 0.0, 0.0, r2 * a4, 0.0, r2 * a4, 2.0 * a4, 0.0],
                [0.0, s * a3, s * r2 * a3, 0.0, s * r2 * a3, 0.0, 0.0, 2.0 * a3],
            ];
            from_rows(&rows, 1.0 / 16.0)
        }
        NoiseKind::Isotropic => {
            let e4 = (-4.0 * kt).exp();
            let e8 = (-8.0 * kt).exp();
            let e12 = (-12.0 * kt).exp();
            let a1 = 1.0 + e4 + e8 + e12;
            let a2 = 1.0 + e4 - e8 - e12;
            let a3 = 1.0 - e4 - e8 + e12;
            let a4 = 1.0 - e4 + e8 - e12;
            let bp = 1.0 + e12;
            let bm = 1.0 - e12;
            let gp = e8 + e12;
            let gm = e8 - e12;
            let rows: [[f64; 8]; 8] = [
                [a2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, a1, r2 * gp, 0.0, r2 * gp, 0.0, 0.0, 0.0],
                [0.0, r2 * gp, bp, 0.0, gp, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, bm, 0.0, gm, r2 * gm, 0.0],
                [0.0, r2 * gp, gp, 0.0, bp, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, gm, 0.0, bm, r2 * gm, 0.0],
                [0.0, 0.0, 0.0, r2 * gm, 0.0, r2 * gm, a4, 0.0],
                [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, a3],
            ];
            from_rows(&rows, 1.0 / 8.0)
        }
    }
}

fn from_rows(rows: &[[f64; 8]; 8], scale: f64) -> CMat {
    let mut m = CMat::zeros((8, 8));
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = c(v * scale);
        }
    }
    m
}

/// The analytic mixed channel state ε(ρ) at a given κt, transcribed from the
/// closed-form solutions of the master equation.
pub fn closed_channel(channel: &ChannelKind, noise: NoiseKind, kt: f64) -> Result<DensityMatrix> {
    if !kt.is_finite() || kt < 0.0 {
        return Err(Error::contract(format!("kt must be >= 0, got {kt}")));
    }
    let m = match channel {
        ChannelKind::GhzStd => closed_ghz(noise, kt),
        ChannelKind::WStd => closed_w(noise, kt),
        other => {
            return Err(Error::contract(format!(
                "no closed channel solution for {other:?}"
            )))
        }
    };
    DensityMatrix::new(m)
        .map_err(|e| Error::internal(format!("closed channel matrix invalid at kt={kt}: {e}")))
}

// ---------------------------------------------------------------------------
// Appendix verification: the off-diagonal ODE systems for x- and y-noise on
// the GHZ channel, and the conjugated trajectory that solves the y-noise
// equation while missing the boundary condition.
// ---------------------------------------------------------------------------

/// Verdicts of [`appendix_check`]; `pass` thresholds are fixed constants.
#[derive(Debug, Clone, Copy)]
pub struct AppendixReport {
    /// Max residual of the closed x-noise off-diagonals in their ODE system.
    pub x_system_residual: f64,
    /// Max residual of the closed y-noise off-diagonals in their ODE system.
    pub y_system_residual: f64,
    /// Max residual of the conjugated x-solution in the y-noise master
    /// equation.
    pub conjugated_residual: f64,
    /// Max-entry distance of the conjugated trajectory at t = 0 from the GHZ
    /// state.
    pub boundary_distance: f64,
}

/// Residual tolerance for the closed-form ODE systems.
pub const APPENDIX_SYSTEM_TOL: f64 = 1e-12;
/// Residual tolerance for the conjugated trajectory in the y-noise equation.
pub const APPENDIX_CONJUGATION_TOL: f64 = 1e-10;
/// The conjugated trajectory must miss the initial condition by more than
/// this.
pub const APPENDIX_BOUNDARY_MIN: f64 = 0.1;

impl AppendixReport {
    pub fn pass(&self) -> bool {
        self.x_system_residual < APPENDIX_SYSTEM_TOL
            && self.y_system_residual < APPENDIX_SYSTEM_TOL
            && self.conjugated_residual < APPENDIX_CONJUGATION_TOL
            && self.boundary_distance > APPENDIX_BOUNDARY_MIN
    }
}

/// The single-qubit unitary with u σ_x u† = σ_y used for the conjugated
/// trajectory.
pub fn conjugating_unitary() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMat::zeros((2, 2));
    u[(0, 1)] = C64::new(s, -s);
    u[(1, 0)] = C64::new(s, s);
    u
}

/// Check the appendix ODE structure on a grid of κt values (κ = 1).
pub fn appendix_check(kt_grid: &[f64]) -> Result<AppendixReport> {
    if kt_grid.is_empty() {
        return Err(Error::contract("kt grid must be nonempty"));
    }
    let kappa = 1.0;

    // (i) x-noise system: σ07 = α+/8, σ16 = σ25 = σ34 = α−/8, all symmetric.
    // dσ07/dt = −κ(3σ07 − σ16 − σ25 − σ34), and cyclically for the others.
    let mut x_res = 0.0f64;
    for &kt in kt_grid {
        let e4 = (-4.0 * kt).exp();
        let s07 = (1.0 + 3.0 * e4) / 8.0;
        let soff = (1.0 - e4) / 8.0;
        let d07 = -12.0 * kappa * e4 / 8.0;
        let doff = 4.0 * kappa * e4 / 8.0;
        let r1 = d07 + kappa * (3.0 * s07 - 3.0 * soff);
        let r2 = doff + kappa * (3.0 * soff - s07 - 2.0 * soff);
        x_res = x_res.max(r1.abs()).max(r2.abs());
    }

    // (ii) y-noise system: σ07 = β1/8, σ16 = σ25 = σ34 = −β2/8, with the
    // sign-flipped coupling dσ07/dt = −κ(3σ07 + σ16 + σ25 + σ34).
    let mut y_res = 0.0f64;
    for &kt in kt_grid {
        let e2 = (-2.0 * kt).exp();
        let e6 = (-6.0 * kt).exp();
        let s07 = (3.0 * e2 + e6) / 8.0;
        let soff = -(e2 - e6) / 8.0;
        let d07 = (-6.0 * kappa * e2 - 6.0 * kappa * e6) / 8.0;
        let doff = -(-2.0 * kappa * e2 + 6.0 * kappa * e6) / 8.0;
        let r1 = d07 + kappa * (3.0 * s07 + 3.0 * soff);
        let r2 = doff + kappa * (3.0 * soff + s07 + 2.0 * soff);
        y_res = y_res.max(r1.abs()).max(r2.abs());
    }

    // (iii) conjugated trajectory W(t) = (u⊗u⊗u) σˣ(t) (u⊗u⊗u)†:
    // dW/dt = U₃ Lx(σˣ) U₃† must equal Ly(W).
    let u = conjugating_unitary();
    let u3 = kron_all(&[&u, &u, &u]);
    let u3d = dagger(&u3);
    let lx = liouvillian(&NoiseKind::AxisX.spec(3, kappa), 3)?;
    let ly = liouvillian(&NoiseKind::AxisY.spec(3, kappa), 3)?;
    let mut conj_res = 0.0f64;
    for &kt in kt_grid {
        let sx = closed_channel(&ChannelKind::GhzStd, NoiseKind::AxisX, kt)?;
        let w = u3.dot(sx.matrix()).dot(&u3d);
        let dsx = unvec_col(
            &lx.dot(&vec_col(sx.matrix()).insert_axis(ndarray::Axis(1)))
                .index_axis(ndarray::Axis(1), 0)
                .to_owned(),
            8,
        );
        let lhs = u3.dot(&dsx).dot(&u3d);
        let rhs = unvec_col(
            &ly.dot(&vec_col(&w).insert_axis(ndarray::Axis(1)))
                .index_axis(ndarray::Axis(1), 0)
                .to_owned(),
            8,
        );
        conj_res = conj_res.max(max_abs_diff(&lhs, &rhs));
    }

    let ghz = make_channel(&ChannelKind::GhzStd)?.density();
    let w0 = u3.dot(ghz.matrix()).dot(&u3d);
    let boundary_distance = max_abs_diff(&w0, ghz.matrix());

    Ok(AppendixReport {
        x_system_residual: x_res,
        y_system_residual: y_res,
        conjugated_residual: conj_res,
        boundary_distance,
    })
}

/// Apply the Liouvillian of `spec` to a matrix (helper for residual checks).
pub fn apply_liouvillian(spec: &NoiseSpec, m: &CMat) -> Result<CMat> {
    let n = (m.nrows().trailing_zeros()) as usize;
    let sup = liouvillian(spec, n)?;
    let v = sup.dot(&vec_col(m).insert_axis(ndarray::Axis(1)));
    Ok(unvec_col(
        &v.index_axis(ndarray::Axis(1), 0).to_owned(),
        m.nrows(),
    ))
}

/// Residual of the maximally mixed state as a fixed point, max |L·vec(I/d)|.
pub fn fixed_point_residual(spec: &NoiseSpec, n_qubits: usize) -> Result<f64> {
    let dim = 1 << n_qubits;
    let mixed = eye(dim).mapv(|z| z * c(1.0 / dim as f64));
    Ok(max_abs(&apply_liouvillian(spec, &mixed)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use approx::assert_abs_diff_eq;

    fn ghz_rho() -> DensityMatrix {
        make_channel(&ChannelKind::GhzStd).unwrap().density()
    }

    fn w_rho() -> DensityMatrix {
        make_channel(&ChannelKind::WStd).unwrap().density()
    }

    #[test]
    fn empty_spec_gives_zero_liouvillian() {
        let spec = NoiseSpec::new(vec![]).unwrap();
        let sup = liouvillian(&spec, 1).unwrap();
        assert_eq!(max_abs(&sup), 0.0);
    }

    #[test]
    fn single_qubit_dephasing_rate() {
        // One z-term with rate κ: the coherence coordinate of vec(ρ) decays
        // at 2κ, i.e. L has −2κ there.
        let kappa = 0.7;
        let spec =
            NoiseSpec::new(vec![LindbladTerm::new(q(1), Axis::Z, kappa).unwrap()]).unwrap();
        let sup = liouvillian(&spec, 1).unwrap();
        // vec index of ρ01 under column stacking: col 1, row 0 → 2.
        assert_abs_diff_eq!(sup[(2, 2)].re, -2.0 * kappa, epsilon = 1e-14);
        assert_abs_diff_eq!(sup[(0, 0)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn ghz_z_coherence_decays_at_six_kappa() {
        // (L_{2,z}, L_{3,z}, L_{4,z}): dσ07/dt = −6κ σ07.
        let spec = NoiseKind::AxisZ.spec(3, 1.0);
        let sup = liouvillian(&spec, 3).unwrap();
        let v = vec_col(ghz_rho().matrix());
        let dv = sup.dot(&v.insert_axis(ndarray::Axis(1)));
        let dm = unvec_col(&dv.index_axis(ndarray::Axis(1), 0).to_owned(), 8);
        // σ07 = 1/2 initially, so dσ07/dt must be −3.
        assert_abs_diff_eq!(dm[(0, 7)].re, -6.0 * 0.5, epsilon = 1e-13);
    }

    #[test]
    fn evolve_expm_at_zero_time_is_identity() {
        let rho = ghz_rho();
        let spec = NoiseKind::AxisX.spec(3, 1.0);
        let out = evolve_expm(&rho, &spec, 0.0).unwrap();
        assert_eq!(max_abs_diff(out.matrix(), rho.matrix()), 0.0);
    }

    #[test]
    fn evolve_expm_matches_ghz_z_solution() {
        let kt = 0.2;
        let out = evolve_expm(&ghz_rho(), &NoiseKind::AxisZ.spec(3, 1.0), kt).unwrap();
        let m = out.matrix();
        assert_abs_diff_eq!(m[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(7, 7)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(0, 7)].re, (-1.2f64).exp() / 2.0, epsilon = 1e-12);
        // Everything else vanishes.
        let mut residue = 0.0f64;
        for i in 0..8 {
            for j in 0..8 {
                if (i, j) != (0, 0) && (i, j) != (7, 7) && (i, j) != (0, 7) && (i, j) != (7, 0) {
                    residue = residue.max(m[(i, j)].norm());
                }
            }
        }
        assert!(residue < 1e-12);
    }

    #[test]
    fn evolve_expm_matches_w_z_solution() {
        let kt = 0.2;
        let out = evolve_expm(&w_rho(), &NoiseKind::AxisZ.spec(3, 1.0), kt).unwrap();
        let want = closed_channel(&ChannelKind::WStd, NoiseKind::AxisZ, kt).unwrap();
        assert!(max_abs_diff(out.matrix(), want.matrix()) < 1e-12);
        // Off-diagonal factor e^{−0.8}.
        assert_abs_diff_eq!(
            out.matrix()[(2, 4)].re,
            (-0.8f64).exp() / 4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn oracle_equivalence_all_combinations() {
        for (label, rho, kind) in [
            ("ghz", ghz_rho(), ChannelKind::GhzStd),
            ("w", w_rho(), ChannelKind::WStd),
        ] {
            for noise in NoiseKind::ALL {
                for kt in [0.05, 0.1, 0.5, 1.0, 2.0] {
                    let num = evolve_expm(&rho, &noise.spec(3, 1.0), kt).unwrap();
                    let closed = closed_channel(&kind, noise, kt).unwrap();
                    let d = max_abs_diff(num.matrix(), closed.matrix());
                    assert!(
                        d < 1e-10,
                        "{label}/{} at kt={kt}: residual {d:.3e}",
                        noise.label()
                    );
                }
            }
        }
    }

    #[test]
    fn closed_channel_boundary_values() {
        // GHZ/x at kt = 0 is the pure GHZ state (α+ = 4, α− = 0).
        let m = closed_channel(&ChannelKind::GhzStd, NoiseKind::AxisX, 0.0).unwrap();
        assert!(max_abs_diff(m.matrix(), ghz_rho().matrix()) < 1e-15);

        // GHZ/y at kt = 0.1: entry (0,7) = (3e^{−0.2} + e^{−0.6})/8.
        let m = closed_channel(&ChannelKind::GhzStd, NoiseKind::AxisY, 0.1).unwrap();
        let want = (3.0 * (-0.2f64).exp() + (-0.6f64).exp()) / 8.0;
        assert_abs_diff_eq!(m.matrix()[(0, 7)].re, want, epsilon = 1e-15);

        // W/iso saturates to the maximally mixed state.
        let m = closed_channel(&ChannelKind::WStd, NoiseKind::Isotropic, 60.0).unwrap();
        let mixed = eye(8).mapv(|z| z * c(1.0 / 8.0));
        assert!(max_abs_diff(m.matrix(), &mixed) < 1e-12);
    }

    #[test]
    fn closed_channel_rejects_epr() {
        assert!(closed_channel(&ChannelKind::Epr, NoiseKind::AxisX, 0.1).is_err());
    }

    #[test]
    fn rk4_at_zero_time_is_identity() {
        let spec = NoiseKind::AxisY.spec(3, 1.0);
        let out = evolve_rk4(&w_rho(), &spec, 0.0, 100).unwrap();
        assert_eq!(max_abs_diff(out.matrix(), w_rho().matrix()), 0.0);
        assert!(evolve_rk4(&w_rho(), &spec, 0.5, 0).is_err());
    }

    #[test]
    fn rk4_matches_expm() {
        let spec = NoiseKind::AxisX.spec(3, 1.0);
        let kt = 0.5;
        let reference = evolve_expm(&ghz_rho(), &spec, kt).unwrap();
        let steps = default_rk4_steps(&spec, kt);
        let got = evolve_rk4(&ghz_rho(), &spec, kt, steps).unwrap();
        assert!(max_abs_diff(got.matrix(), reference.matrix()) < 1e-9);
        // σ00 = (1 + 3e^{−4κt})/8 at κt = 0.5.
        let want = (1.0 + 3.0 * (-2.0f64).exp()) / 8.0;
        assert_abs_diff_eq!(got.matrix()[(0, 0)].re, want, epsilon = 1e-9);
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let spec = NoiseKind::AxisX.spec(3, 1.0);
        let reference = evolve_expm(&ghz_rho(), &spec, 0.5).unwrap();
        let coarse = evolve_rk4(&ghz_rho(), &spec, 0.5, 50).unwrap();
        let fine = evolve_rk4(&ghz_rho(), &spec, 0.5, 100).unwrap();
        let e_coarse = max_abs_diff(coarse.matrix(), reference.matrix());
        let e_fine = max_abs_diff(fine.matrix(), reference.matrix());
        let ratio = e_coarse / e_fine;
        assert!(
            (8.0..32.0).contains(&ratio),
            "expected ~16x error reduction, got {ratio:.2}"
        );
    }

    #[test]
    fn semigroup_property() {
        let spec = NoiseKind::AxisY.spec(3, 1.0);
        let one_shot = evolve_expm(&w_rho(), &spec, 0.7).unwrap();
        let mid = evolve_expm(&w_rho(), &spec, 0.3).unwrap();
        let two_shot = evolve_expm(&mid, &spec, 0.4).unwrap();
        assert!(max_abs_diff(one_shot.matrix(), two_shot.matrix()) < 1e-11);
    }

    #[test]
    fn maximally_mixed_state_is_stationary() {
        for noise in NoiseKind::ALL {
            let r = fixed_point_residual(&noise.spec(3, 1.0), 3).unwrap();
            assert!(r < 1e-13, "{}: residual {r:.3e}", noise.label());
        }
    }

    #[test]
    fn duplicate_terms_rejected() {
        let t1 = LindbladTerm::new(q(1), Axis::X, 1.0).unwrap();
        let t2 = LindbladTerm::new(q(1), Axis::X, 0.5).unwrap();
        assert!(NoiseSpec::new(vec![t1, t2]).is_err());
    }

    #[test]
    fn negative_kappa_rejected() {
        assert!(LindbladTerm::new(q(1), Axis::X, -1.0).is_err());
    }

    #[test]
    fn noise_kind_expansion_counts() {
        assert_eq!(NoiseKind::AxisX.spec(3, 1.0).terms().len(), 3);
        assert_eq!(NoiseKind::Isotropic.spec(3, 1.0).terms().len(), 9);
        assert_eq!(NoiseKind::Isotropic.spec(2, 1.0).terms().len(), 6);
    }

    #[test]
    fn appendix_verdicts() {
        let report = appendix_check(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        assert!(report.x_system_residual < APPENDIX_SYSTEM_TOL);
        assert!(report.y_system_residual < APPENDIX_SYSTEM_TOL);
        assert!(report.conjugated_residual < APPENDIX_CONJUGATION_TOL);
        assert!(report.boundary_distance > APPENDIX_BOUNDARY_MIN);
        assert!(report.pass());
        // The distance is in fact 1/√2.
        assert_abs_diff_eq!(
            report.boundary_distance,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn appendix_boundary_only_grid() {
        let report = appendix_check(&[0.0]).unwrap();
        assert!(report.boundary_distance > APPENDIX_BOUNDARY_MIN);
        assert!(report.x_system_residual < APPENDIX_SYSTEM_TOL);
        assert!(report.y_system_residual < APPENDIX_SYSTEM_TOL);
    }

    #[test]
    fn conjugating_unitary_maps_x_to_y() {
        let u = conjugating_unitary();
        let got = u.dot(&Axis::X.pauli()).dot(&dagger(&u));
        assert!(max_abs_diff(&got, &Axis::Y.pauli()) < 1e-15);
    }
}
