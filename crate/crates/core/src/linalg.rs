//! Fixed-size complex matrix algebra for two-qubit states.
//!
//! Everything lives in the computational basis |00⟩, |01⟩, |10⟩, |11⟩
//! (row-major, index `2a + b` for side-A bit `a` and side-B bit `b`).

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance for operators and states.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of a state's trace from 1.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;

/// Off-diagonal Frobenius norm (relative to the full norm) at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A single-qubit operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[C64; 2]; 2]);

impl Matrix2 {
    pub fn identity() -> Self {
        Matrix2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Matrix2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Eigenvalues of a Hermitian 2×2 matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - radius, mean + radius]
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut m = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        m
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += rhs.0[r][c];
            }
        }
        out
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, z) in row.iter_mut().enumerate() {
                *z = self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c];
            }
        }
        Matrix2(out)
    }
}

/// The Pauli matrix for `axis`. σ_z has |0⟩ as its +1 eigenvector.
pub fn pauli(axis: Axis) -> Matrix2 {
    match axis {
        Axis::X => Matrix2([[ZERO, ONE], [ONE, ZERO]]),
        Axis::Y => Matrix2([[ZERO, -I], [I, ZERO]]),
        Axis::Z => Matrix2([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// A 4×4 complex matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4 {
    entries: [[C64; 4]; 4],
}

impl ComplexMatrix4 {
    pub fn new(entries: [[C64; 4]; 4]) -> Result<Self> {
        if entries.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix4 { entries })
    }

    pub fn zero() -> Self {
        ComplexMatrix4 { entries: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = ONE;
        }
        m
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64; 4], v: &[C64; 4]) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.entries[r][c] = u[r] * v[c].conj();
            }
        }
        m
    }

    /// Kronecker product with `a` as the left (side A) factor.
    pub fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        let mut m = Self::zero();
        for ra in 0..2 {
            for ca in 0..2 {
                for rb in 0..2 {
                    for cb in 0..2 {
                        m.entries[2 * ra + rb][2 * ca + cb] = a.0[ra][ca] * b.0[rb][cb];
                    }
                }
            }
        }
        m
    }

    /// `op` acting on `side`, identity on the other qubit.
    pub fn local(op: &Matrix2, side: Side) -> Self {
        match side {
            Side::A => Self::kron(op, &Matrix2::identity()),
            Side::B => Self::kron(&Matrix2::identity(), op),
        }
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.entries[r][c] = self.entries[c][r].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for z in m.entries.iter_mut().flatten() {
            *z *= s;
        }
        m
    }

    /// `self · rho · self†`.
    pub fn sandwich(&self, rho: &ComplexMatrix4) -> Self {
        *self * *rho * self.adjoint()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix4) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M − M†| entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn add(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut m = self;
        for (a, b) in m.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a += b;
        }
        m
    }
}

impl Sub for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn sub(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut m = self;
        for (a, b) in m.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a -= b;
        }
        m
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.entries[r][k] * rhs.entries[k][c];
                }
                m.entries[r][c] = acc;
            }
        }
        m
    }
}

/// σ_i ⊗ σ_j with side A on the left.
pub fn pauli_tensor(i: Axis, j: Axis) -> ComplexMatrix4 {
    ComplexMatrix4::kron(&pauli(i), &pauli(j))
}

/// A validated two-qubit density matrix: Hermitian, unit trace and PSD
/// within [`HERMITIAN_TOL`], [`TRACE_TOL`] and [`PSD_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix4,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix4) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (error {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&matrix)
            .map_err(|e| Error::InvalidState(e.to_string()))?[0];
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// |ψ⟩⟨ψ| for a ket, normalised on the way in.
    pub fn from_pure(ket: [C64; 4]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("ket has zero or non-finite norm".into()));
        }
        let k = ket.map(|z| z / norm);
        Self::new(ComplexMatrix4::outer(&k, &k))
    }

    /// ρ_A ⊗ ρ_B for single-qubit states.
    pub fn product(a: &Matrix2, b: &Matrix2) -> Result<Self> {
        Self::new(ComplexMatrix4::kron(a, b))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix { matrix: ComplexMatrix4::identity().scale(0.25) }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    /// Convex combination Σ wᵢ ρᵢ; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let mut m = ComplexMatrix4::zero();
        for (w, rho) in parts {
            if !(*w >= 0.0) {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            m = m + rho.matrix.scale(*w);
        }
        Self::new(m)
    }
}

/// Tr[Oρ] for Hermitian `op`; the imaginary residue is discarded.
pub fn expectation(rho: &DensityMatrix, op: &ComplexMatrix4) -> Result<f64> {
    let herm = op.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::NonHermitianOperator(herm));
    }
    Ok(trace_product(op, rho.matrix()))
}

/// Re Tr[AB] without forming the product.
pub(crate) fn trace_product(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    let mut acc = ZERO;
    for r in 0..4 {
        for k in 0..4 {
            acc += a.entries[r][k] * b.entries[k][r];
        }
    }
    acc.re
}

/// Partial transpose on the given side. Pure index rearrangement.
pub fn partial_transpose(rho: &DensityMatrix, side: Side) -> ComplexMatrix4 {
    partial_transpose_matrix(rho.matrix(), side)
}

pub fn partial_transpose_matrix(m: &ComplexMatrix4, side: Side) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zero();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let (src_r, src_c) = match side {
                        Side::A => (2 * a2 + b, 2 * a + b2),
                        Side::B => (2 * a + b2, 2 * a2 + b),
                    };
                    out.entries[2 * a + b][2 * a2 + b2] = m.entries[src_r][src_c];
                }
            }
        }
    }
    out
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone, Copy)]
pub struct Eigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[C64; N]; N],
}

impl<const N: usize> Eigen<N> {
    pub fn vector(&self, k: usize) -> [C64; N] {
        std::array::from_fn(|r| self.vectors[r][k])
    }
}

/// Cyclic complex Jacobi diagonalisation of a Hermitian N×N matrix.
///
/// Each rotation first removes the phase of the pivot a_pq, then applies the
/// real symmetric Jacobi rotation to the now-real 2×2 block.
pub fn jacobi_eigen<const N: usize>(m: [[C64; N]; N]) -> Result<Eigen<N>> {
    let mut a = m;
    let mut v = [[ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = ONE;
    }

    let full = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= JACOBI_TOL * full {
            converged = true;
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > JACOBI_TOL * full {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let values = order.map(|i| a[i][i].re);
    let mut vectors = [[ZERO; N]; N];
    for (k, &src) in order.iter().enumerate() {
        for r in 0..N {
            vectors[r][k] = v[r][src];
        }
    }
    Ok(Eigen { values, vectors })
}

fn off_diagonal_norm<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    let mut s = 0.0;
    for (r, row) in a.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            if r != c {
                s += z.norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate<const N: usize>(a: &mut [[C64; N]; N], v: &mut [[C64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 { -t } else { t }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let ph = phase.conj();
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = ph * (-s);
    let u_qq = ph * c;

    // A <- A U
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u_pp + y * u_qp;
        row[q] = x * u_pq + y * u_qq;
    }
    // A <- U† A
    for col in 0..N {
        let (x, y) = (a[p][col], a[q][col]);
        a[p][col] = u_pp.conj() * x + u_qp.conj() * y;
        a[q][col] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p] = C64::new(a[p][p].re, 0.0);
    a[q][q] = C64::new(a[q][q].re, 0.0);
    // V <- V U
    for row in v.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u_pp + y * u_qp;
        row[q] = x * u_pq + y * u_qq;
    }
}

/// Full eigendecomposition of a Hermitian 4×4 matrix.
pub fn hermitian_eigen(m: &ComplexMatrix4) -> Result<Eigen<4>> {
    let herm = m.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::NonHermitianOperator(herm));
    }
    jacobi_eigen(m.entries)
}

/// Ascending eigenvalues of a Hermitian 4×4 matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Ascending eigenvalues of a real symmetric 3×3 matrix, via the same Jacobi routine.
pub fn symmetric_eigenvalues3(m: &[[f64; 3]; 3]) -> Result<[f64; 3]> {
    let embedded = m.map(|row| row.map(|x| C64::new(x, 0.0)));
    jacobi_eigen(embedded).map(|e| e.values)
}

/// Pauli (Hilbert–Schmidt) coordinates of a two-qubit operator:
/// ρ = ¼[I⊗I + Σ aₘ σₘ⊗I + Σ bₙ I⊗σₙ + Σ tₘₙ σₘ⊗σₙ].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertSchmidtForm {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl HilbertSchmidtForm {
    pub fn zero() -> Self {
        HilbertSchmidtForm { a: [0.0; 3], b: [0.0; 3], t: [[0.0; 3]; 3] }
    }

    /// The operator this form describes, without positivity checks.
    pub fn to_operator(&self) -> ComplexMatrix4 {
        let id = Matrix2::identity();
        let mut m = ComplexMatrix4::identity();
        for ax in Axis::ALL {
            let i = ax.index();
            m = m + ComplexMatrix4::kron(&pauli(ax), &id).scale(self.a[i]);
            m = m + ComplexMatrix4::kron(&id, &pauli(ax)).scale(self.b[i]);
            for bx in Axis::ALL {
                m = m + pauli_tensor(ax, bx).scale(self.t[i][bx.index()]);
            }
        }
        m.scale(0.25)
    }
}

pub fn hs_decompose(rho: &DensityMatrix) -> HilbertSchmidtForm {
    hs_decompose_operator(rho.matrix())
}

pub fn hs_decompose_operator(m: &ComplexMatrix4) -> HilbertSchmidtForm {
    let id = Matrix2::identity();
    let mut f = HilbertSchmidtForm::zero();
    for ax in Axis::ALL {
        let i = ax.index();
        f.a[i] = trace_product(&ComplexMatrix4::kron(&pauli(ax), &id), m);
        f.b[i] = trace_product(&ComplexMatrix4::kron(&id, &pauli(ax)), m);
        for bx in Axis::ALL {
            f.t[i][bx.index()] = trace_product(&pauli_tensor(ax, bx), m);
        }
    }
    f
}

/// Inverse of [`hs_decompose`]; fails with `InvalidState` if the result is not a state.
pub fn hs_compose(form: &HilbertSchmidtForm) -> Result<DensityMatrix> {
    DensityMatrix::new(form.to_operator())
}
