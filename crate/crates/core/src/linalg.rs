//! Dense complex linear algebra over small qubit registers.
//!
//! Registers use the convention that qubit 1 is the most significant bit of
//! the computational-basis index: an n-qubit basis state |b₁b₂…bₙ⟩ sits at
//! index Σ bₖ 2^(n−k), so |00…0⟩ ↔ 0 and |11…1⟩ ↔ 2ⁿ−1. Everything here is
//! dense; register sizes never exceed a handful of qubits.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

/// Maximum entrywise deviation from M = M† accepted by [`DensityMatrix`].
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum |tr ρ − 1| accepted by [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor absorbing roundoff in positivity checks.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Maximum |‖ψ‖² − 1| accepted by [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn eye(dim: usize) -> CMat {
    Array2::eye(dim)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().mapv(|z| z.conj())
}

pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise |a − b|.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Induced 1-norm (maximum absolute column sum).
pub fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum())
        .fold(0.0, f64::max)
}

pub fn trace(m: &CMat) -> C64 {
    m.diag().iter().sum()
}

/// Kronecker product; the left operand indexes the most significant qubits.
///
/// Panics on non-finite input, matching the operation's only precondition.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    assert!(all_finite(a) && all_finite(b), "kron: non-finite input");
    ndarray::linalg::kron(a, b)
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all(factors: &[&CMat]) -> CMat {
    let mut out = eye(1);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

/// Embed a single-qubit operator into an n-qubit register.
pub fn embed_one(op: &CMat, qubit: QubitIndex, n_qubits: usize) -> Result<CMat> {
    assert_eq!(op.dim(), (2, 2), "embed_one: operator must be 2x2");
    let q = qubit.check(n_qubits)?;
    let left = eye(1 << (q - 1));
    let right = eye(1 << (n_qubits - q));
    Ok(kron(&kron(&left, op), &right))
}

/// 1-based qubit label within a register; qubit 1 is the most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitIndex(usize);

impl QubitIndex {
    pub fn new(value: usize) -> Result<Self> {
        if value == 0 {
            return Err(Error::contract("qubit indices are 1-based"));
        }
        Ok(QubitIndex(value))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Validate against a register size, returning the raw 1-based value.
    pub fn check(self, n_qubits: usize) -> Result<usize> {
        if self.0 > n_qubits {
            return Err(Error::contract(format!(
                "qubit {} outside register of {} qubits",
                self.0, n_qubits
            )));
        }
        Ok(self.0)
    }
}

/// Shorthand used pervasively in tests and fixtures.
pub fn q(value: usize) -> QubitIndex {
    QubitIndex::new(value).expect("qubit index must be >= 1")
}

/// Normalized pure state over a qubit register.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: CVec,
}

impl StateVector {
    /// Requires a power-of-two dimension and unit norm within [`NORM_TOL`].
    pub fn new(amps: CVec) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::contract(format!(
                "state dimension {dim} is not a power of two >= 2"
            )));
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invariant("state vector has non-finite amplitudes"));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::invariant(format!(
                "state vector norm² = {norm_sq}, expected 1"
            )));
        }
        Ok(StateVector { amps })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(CVec::from(amps.to_vec()))
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut m = CMat::zeros((dim, dim));
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix::trusted(self.n_qubits(), m)
    }
}

/// Structural diagnostics for a would-be density matrix.
#[derive(Debug, Clone, Copy)]
pub struct StateDiagnostics {
    /// max |M − M†| entrywise
    pub hermiticity_defect: f64,
    /// |tr M − 1|
    pub trace_defect: f64,
    /// smallest eigenvalue of the Hermitian part
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn pass(&self) -> bool {
        self.hermiticity_defect <= HERMITICITY_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= EIGENVALUE_FLOOR
    }
}

/// Report Hermiticity defect, trace defect and minimum eigenvalue.
pub fn validate(m: &CMat) -> StateDiagnostics {
    let herm = max_abs_diff(m, &dagger(m));
    let tr = trace(m);
    let trace_defect = (tr - c(1.0)).norm();
    // Positivity is judged on the Hermitian part so roundoff asymmetry
    // cannot produce complex eigenvalues.
    let h = (m + &dagger(m)).mapv(|z| z * 0.5);
    let eigs = hermitian_eigenvalues(&h);
    let min_eigenvalue = eigs.into_iter().fold(f64::INFINITY, f64::min);
    StateDiagnostics {
        hermiticity_defect: herm,
        trace_defect,
        min_eigenvalue,
    }
}

/// Trace-1 Hermitian positive-semidefinite matrix over a qubit register.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(mat: CMat) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::contract(format!(
                "density matrix must be square with power-of-two dimension >= 2, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite(&mat) {
            return Err(Error::invariant("density matrix has non-finite entries"));
        }
        let diag = validate(&mat);
        if !diag.pass() {
            return Err(Error::invariant(format!(
                "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
                diag.hermiticity_defect, diag.trace_defect, diag.min_eigenvalue
            )));
        }
        Ok(DensityMatrix {
            n_qubits: dim.trailing_zeros() as usize,
            mat,
        })
    }

    /// Construct without validation where validity is structurally guaranteed.
    pub(crate) fn trusted(n_qubits: usize, mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n_qubits);
        DensityMatrix { n_qubits, mat }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        validate(&self.mat)
    }

    /// Eigenvalues of the state, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }
}

/// Trace out the given qubits, preserving the order of the rest.
pub fn partial_trace(rho: &DensityMatrix, traced: &[QubitIndex]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let mut flags = vec![false; n];
    for t in traced {
        let v = t.check(n)?;
        if flags[v - 1] {
            return Err(Error::contract(format!("qubit {v} traced twice")));
        }
        flags[v - 1] = true;
    }
    let n_traced = traced.len();
    if n_traced == 0 {
        return Err(Error::contract("traced set must be nonempty"));
    }
    if n_traced == n {
        return Err(Error::contract("cannot trace out the entire register"));
    }

    let kept: Vec<usize> = (0..n).filter(|k| !flags[*k]).collect();
    let tr: Vec<usize> = (0..n).filter(|k| flags[*k]).collect();
    let n_kept = kept.len();
    let out_dim = 1 << n_kept;
    let env_dim = 1 << n_traced;

    // Assemble full-register indices from (kept bits, traced bits); bit
    // position of 0-based qubit k is n-1-k.
    let index_of = |kept_bits: usize, env_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, qk) in kept.iter().enumerate() {
            let bit = (kept_bits >> (n_kept - 1 - pos)) & 1;
            idx |= bit << (n - 1 - qk);
        }
        for (pos, qt) in tr.iter().enumerate() {
            let bit = (env_bits >> (n_traced - 1 - pos)) & 1;
            idx |= bit << (n - 1 - qt);
        }
        idx
    };

    let m = rho.matrix();
    let mut out = CMat::zeros((out_dim, out_dim));
    for a in 0..out_dim {
        for b in 0..out_dim {
            let mut acc = C64::new(0.0, 0.0);
            for e in 0..env_dim {
                acc += m[(index_of(a, e), index_of(b, e))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::trusted(n_kept, out))
}

const THETA_13: f64 = 5.371920351148152;

/// Padé(13) coefficients for the matrix exponential (Higham 2005, eq. 10.33,
/// as exact integers).
const PADE_B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé
/// approximant (Higham 2005).
pub fn expm(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::contract("expm: matrix must be square"));
    }
    if !all_finite(a) {
        return Err(Error::contract("expm: non-finite input"));
    }
    if n == 0 {
        return Ok(CMat::zeros((0, 0)));
    }

    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scale = c(0.5f64.powi(s));
    let a1 = a.mapv(|z| z * scale);

    let id = eye(n);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let u_hi = a6.mapv(|z| z * c(PADE_B[13])) + a4.mapv(|z| z * c(PADE_B[11])) + a2.mapv(|z| z * c(PADE_B[9]));
    let u_lo = a6.mapv(|z| z * c(PADE_B[7]))
        + a4.mapv(|z| z * c(PADE_B[5]))
        + a2.mapv(|z| z * c(PADE_B[3]))
        + id.mapv(|z| z * c(PADE_B[1]));
    let u = a1.dot(&(a6.dot(&u_hi) + u_lo));

    let v_hi = a6.mapv(|z| z * c(PADE_B[12])) + a4.mapv(|z| z * c(PADE_B[10])) + a2.mapv(|z| z * c(PADE_B[8]));
    let v = a6.dot(&v_hi)
        + a6.mapv(|z| z * c(PADE_B[6]))
        + a4.mapv(|z| z * c(PADE_B[4]))
        + a2.mapv(|z| z * c(PADE_B[2]))
        + id.mapv(|z| z * c(PADE_B[0]));

    let p = &v + &u;
    let q_mat = &v - &u;
    let mut r = lu_solve(&q_mat, &p)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

/// Solve A·X = B by LU with partial pivoting.
pub fn lu_solve(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::contract("lu_solve: dimension mismatch"));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (mut pivot_row, mut pivot_mag) = (k, lu[(k, k)].norm());
        for r in (k + 1)..n {
            let mag = lu[(r, k)].norm();
            if mag > pivot_mag {
                pivot_row = r;
                pivot_mag = mag;
            }
        }
        if pivot_mag == 0.0 {
            return Err(Error::Numerical("lu_solve: singular matrix".into()));
        }
        if pivot_row != k {
            for jj in 0..n {
                lu.swap((k, jj), (pivot_row, jj));
            }
            perm.swap(k, pivot_row);
        }
        let pivot = lu[(k, k)];
        for r in (k + 1)..n {
            let factor = lu[(r, k)] / pivot;
            lu[(r, k)] = factor;
            for jj in (k + 1)..n {
                let sub = factor * lu[(k, jj)];
                lu[(r, jj)] -= sub;
            }
        }
    }

    // Apply the row permutation to the right-hand sides.
    let mut permuted = CMat::zeros(x.dim());
    for (r, &p) in perm.iter().enumerate() {
        for jj in 0..x.ncols() {
            permuted[(r, jj)] = b[(p, jj)];
        }
    }
    x.assign(&permuted);

    // Forward substitution (unit lower factor).
    for col in 0..x.ncols() {
        for r in 0..n {
            let mut acc = x[(r, col)];
            for k in 0..r {
                acc -= lu[(r, k)] * x[(k, col)];
            }
            x[(r, col)] = acc;
        }
        // Back substitution.
        for r in (0..n).rev() {
            let mut acc = x[(r, col)];
            for k in (r + 1)..n {
                acc -= lu[(r, k)] * x[(k, col)];
            }
            x[(r, col)] = acc / lu[(r, r)];
        }
    }
    Ok(x)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Runs cyclic Jacobi on the real symmetric embedding
/// [[Re A, −Im A], [Im A, Re A]], whose spectrum is that of A with every
/// eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(m.ncols(), n, "hermitian_eigenvalues: square input required");
    if n == 0 {
        return Vec::new();
    }
    let dim = 2 * n;
    let mut s = vec![0.0f64; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            s[i * dim + j] = z.re;
            s[i * dim + (n + j)] = -z.im;
            s[(n + i) * dim + j] = z.im;
            s[(n + i) * dim + (n + j)] = z.re;
        }
    }

    let frob: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-15 * frob.max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..dim {
            for q_col in (p + 1)..dim {
                off += 2.0 * s[p * dim + q_col] * s[p * dim + q_col];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..dim {
            for q_col in (p + 1)..dim {
                let apq = s[p * dim + q_col];
                if apq.abs() <= tol / (dim as f64) {
                    continue;
                }
                let app = s[p * dim + p];
                let aqq = s[q_col * dim + q_col];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cth = 1.0 / (t * t + 1.0).sqrt();
                let sth = t * cth;
                for k in 0..dim {
                    let skp = s[k * dim + p];
                    let skq = s[k * dim + q_col];
                    s[k * dim + p] = cth * skp - sth * skq;
                    s[k * dim + q_col] = sth * skp + cth * skq;
                }
                for k in 0..dim {
                    let spk = s[p * dim + k];
                    let sqk = s[q_col * dim + k];
                    s[p * dim + k] = cth * spk - sth * sqk;
                    s[q_col * dim + k] = sth * spk + cth * sqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..dim).map(|i| s[i * dim + i]).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Doubled spectrum: keep every other entry of the sorted list.
    eigs.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag2(a: f64, b: f64) -> CMat {
        let mut m = CMat::zeros((2, 2));
        m[(0, 0)] = c(a);
        m[(1, 1)] = c(b);
        m
    }

    #[test]
    fn kron_identities() {
        let i2 = eye(2);
        assert_eq!(max_abs_diff(&kron(&i2, &i2), &eye(4)), 0.0);
        let p0 = diag2(1.0, 0.0);
        let got = kron(&p0, &p0);
        let mut want = CMat::zeros((4, 4));
        want[(0, 0)] = c(1.0);
        assert_eq!(max_abs_diff(&got, &want), 0.0);
    }

    #[test]
    fn kron_pure_product_is_rank_one() {
        // |ψ_in⟩⟨ψ_in| ⊗ ρ_GHZ at θ=π/2, φ=0 must stay pure.
        let angles = crate::states::BlochAngles::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let rin = crate::states::bloch_state(&angles).density();
        let ghz = crate::states::make_channel(&crate::states::ChannelKind::GhzStd)
            .unwrap()
            .density();
        let prod = kron(rin.matrix(), ghz.matrix());
        assert_abs_diff_eq!(trace(&prod).re, 1.0, epsilon = 1e-13);
        let eigs = hermitian_eigenvalues(&prod);
        let rank = eigs.iter().filter(|e| e.abs() > 1e-10).count();
        assert_eq!(rank, 1);
        assert_abs_diff_eq!(*eigs.last().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        // |00⟩⟨00| traced over qubit 1 leaves |0⟩⟨0|.
        let psi = StateVector::from_slice(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let rho = psi.density();
        let red = partial_trace(&rho, &[q(1)]).unwrap();
        assert_eq!(red.n_qubits(), 1);
        assert_abs_diff_eq!(red.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(red.matrix()[(1, 1)].re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_epr_marginal_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_slice(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let red = partial_trace(&psi.density(), &[q(1)]).unwrap();
        let want = eye(2).mapv(|z| z * c(0.5));
        assert!(max_abs_diff(red.matrix(), &want) < 1e-14);
    }

    #[test]
    fn partial_trace_ghz_drop_last_qubit() {
        // Tracing qubit 3 of |GHZ⟩ leaves (|00⟩⟨00| + |11⟩⟨11|)/2.
        let ghz = crate::states::make_channel(&crate::states::ChannelKind::GhzStd).unwrap();
        let red = partial_trace(&ghz.density(), &[q(3)]).unwrap();
        let mut want = CMat::zeros((4, 4));
        want[(0, 0)] = c(0.5);
        want[(3, 3)] = c(0.5);
        assert!(max_abs_diff(red.matrix(), &want) < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_sets() {
        let psi = StateVector::from_slice(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let rho = psi.density();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[q(1), q(2)]).is_err());
        assert!(partial_trace(&rho, &[q(3)]).is_err());
        assert!(partial_trace(&rho, &[q(1), q(1)]).is_err());
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMat::zeros((4, 4));
        assert!(max_abs_diff(&expm(&z).unwrap(), &eye(4)) < 1e-15);
    }

    #[test]
    fn expm_diagonal_matches_scalar_exponential() {
        // diag(−6κt) at κt = 0.1; the scalar exponential is the oracle.
        let m = diag2(-0.6, -0.6);
        let want = (-0.6f64).exp(); // 0.5488116360940264
        let got = expm(&m).unwrap();
        assert_abs_diff_eq!(got[(0, 0)].re, want, epsilon = 1e-14);
        assert_abs_diff_eq!(got[(0, 0)].re, 0.548_811_636_094_026_4, epsilon = 1e-13);
    }

    #[test]
    fn expm_rejects_nonsquare() {
        let m = CMat::zeros((2, 3));
        assert!(expm(&m).is_err());
    }

    #[test]
    fn lu_solve_roundtrip() {
        let mut a = CMat::zeros((3, 3));
        a[(0, 0)] = C64::new(2.0, 1.0);
        a[(0, 1)] = c(1.0);
        a[(0, 2)] = C64::new(0.0, -1.0);
        a[(1, 0)] = c(0.5);
        a[(1, 1)] = C64::new(-1.0, 0.5);
        a[(1, 2)] = c(3.0);
        a[(2, 0)] = C64::new(0.0, 2.0);
        a[(2, 1)] = c(4.0);
        a[(2, 2)] = C64::new(1.0, 1.0);
        let x = lu_solve(&a, &eye(3)).unwrap();
        assert!(max_abs_diff(&a.dot(&x), &eye(3)) < 1e-12);
    }

    #[test]
    fn hermitian_eigenvalues_known_spectrum() {
        // σ_x has eigenvalues ±1.
        let mut sx = CMat::zeros((2, 2));
        sx[(0, 1)] = c(1.0);
        sx[(1, 0)] = c(1.0);
        let eigs = hermitian_eigenvalues(&sx);
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 1.0, epsilon = 1e-12);

        // σ_y exercises the imaginary part of the embedding.
        let mut sy = CMat::zeros((2, 2));
        sy[(0, 1)] = C64::new(0.0, -1.0);
        sy[(1, 0)] = C64::new(0.0, 1.0);
        let eigs = hermitian_eigenvalues(&sy);
        assert_abs_diff_eq!(eigs[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn validate_flags_trace_defect() {
        let m = diag2(0.5, 0.4);
        let d = validate(&m);
        assert!(!d.pass());
        assert_abs_diff_eq!(d.trace_defect, 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(d.hermiticity_defect, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn validate_passes_ghz() {
        let ghz = crate::states::make_channel(&crate::states::ChannelKind::GhzStd).unwrap();
        assert!(ghz.density().diagnostics().pass());
    }

    #[test]
    fn density_matrix_rejects_nonpositive() {
        let m = diag2(1.5, -0.5);
        assert!(DensityMatrix::new(m).is_err());
    }
}
