//! Dense complex linear algebra for 2×2 and 4×4 operators.
//!
//! Matrices are stored row-major. Two-qubit operators use the product basis
//! `|00⟩, |01⟩, |10⟩, |11⟩`, i.e. composite index `2·i + k` for qubit-A index
//! `i` and qubit-B index `k`. With this ordering `kron(A, B)` acts as `A ⊗ B`.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Entrywise tolerance used by [`ComplexMatrix::is_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default off-diagonal threshold of the Jacobi eigensolver.
pub const DEFAULT_JACOBI_TOL: f64 = 1e-14;
/// Default sweep limit of the Jacobi eigensolver.
pub const DEFAULT_MAX_SWEEPS: usize = 50;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} = {} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn diag_real(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex::new(d, 0.0);
        }
        m
    }

    /// The projector-like outer product `|v⟩⟨v|`.
    pub fn outer(v: &[Complex]) -> Self {
        Self::outer2(v, v)
    }

    /// `|u⟩⟨v|`.
    pub fn outer2(u: &[Complex], v: &[Complex]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.data[i * v.len() + j] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Complex> {
        (row < self.rows && col < self.cols).then(|| self.data[row * self.cols + col])
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    fn ensure_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    fn zip_map(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex::new(factor, 0.0))
    }

    /// `self += factor · other`, used for accumulating convex sums.
    pub fn add_scaled_assign(&mut self, factor: f64, other: &Self) -> Result<()> {
        self.same_shape(other)?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows on the right operand", self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex> {
        self.ensure_square()?;
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    /// Kronecker product: entry `(i·B.rows + k, j·B.cols + l)` is `A[i,j]·B[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let row = i * other.rows + k;
                        let col = j * other.cols + l;
                        data[row * cols + col] = a * other.data[k * other.cols + l];
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// Transposes the qubit-B indices of a two-qubit operator:
    /// `out(i,l; j,k) = M(i,k; j,l)`.
    ///
    /// Only entries are permuted, so applying it twice is exactly the identity.
    pub fn partial_transpose_b(&self) -> Result<Self> {
        if self.rows != 4 || self.cols != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4 two-qubit operator".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let mut out = Self::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.data[(2 * i + l) * 4 + (2 * j + k)] = self.data[(2 * i + k) * 4 + (2 * j + l)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise `|M - M†|`; `f64::INFINITY` for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_TOL
    }

    /// Largest entrywise `|self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn max_off_diagonal(&self) -> f64 {
        let n = self.rows;
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(self.data[i * n + j].norm());
                }
            }
        }
        off
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        &self.data[row * self.cols + col]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.data[i * self.cols + j];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

/// `σ_y = ((0, −i), (i, 0))`.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, Complex::new(0.0, -1.0), Complex::new(0.0, 1.0), ZERO])
        .expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// `v·σ = v_x σ_x + v_y σ_y + v_z σ_z`.
pub fn pauli_dot(v: [f64; 3]) -> ComplexMatrix {
    let [x, y, z] = v;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex::new(z, 0.0),
            Complex::new(x, -y),
            Complex::new(x, y),
            Complex::new(-z, 0.0),
        ],
    )
    .expect("2x2")
}

/// Eigenvalues of a Hermitian matrix, ascending, with the default sweep limit.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    hermitian_eigenvalues_with(m, tol, DEFAULT_MAX_SWEEPS)
}

/// Cyclic complex Jacobi iteration.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then annihilates the now-real pivot with a plane rotation. Sweeps
/// continue until every off-diagonal magnitude is below `tol`.
pub fn hermitian_eigenvalues_with(m: &ComplexMatrix, tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive",
        });
    }
    m.ensure_square()?;
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    let n = m.rows;
    let mut a = m.clone();
    // Symmetrize away sub-tolerance asymmetry so the iteration stays Hermitian.
    for i in 0..n {
        a.data[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let avg = (a.data[i * n + j] + a.data[j * n + i].conj()) * 0.5;
            a.data[i * n + j] = avg;
            a.data[j * n + i] = avg.conj();
        }
    }

    let mut sweeps = 0;
    while a.max_off_diagonal() >= tol {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                residual: a.max_off_diagonal(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q, sweeps);
            }
        }
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

fn rotate(a: &mut ComplexMatrix, p: usize, q: usize, sweep: usize) {
    let n = a.rows;
    let apq = a.data[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    // Pivot below the rounding floor of both diagonal entries.
    let g = 100.0 * r;
    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        a.data[p * n + q] = ZERO;
        a.data[q * n + p] = ZERO;
        return;
    }

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = (apq / r).conj();

    // U restricted to (p, q): [[c, s], [-s·phase, c·phase]].
    let u_pp = Complex::new(c, 0.0);
    let u_pq = Complex::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    // A ← A·U
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * u_pp + akq * u_qp;
        a.data[k * n + q] = akp * u_pq + akq * u_qq;
    }
    // A ← U†·A
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a.data[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }

    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;
}
