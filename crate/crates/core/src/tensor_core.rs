//! Dense complex linear algebra on small matrices, plus the spin-1 and
//! Pauli operator constants every other module builds on.
//!
//! Spin-1 operators are written in the `S^z` eigenbasis ordered
//! `(|+1>, |0>, |-1>)`. Qubit operators use `(|0>, |1>)` = `(|up>, |down>)`.
//!
//! Matrices are plain [`nalgebra::DMatrix`] values; the helpers here add
//! shape checking and the handful of spectral routines the simulator needs.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance used when a Hermitian or unitary property is asserted.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Spin component label, shared by string operators and symmetry generators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    pub const ALL: [SpinAxis; 3] = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z];

    pub fn spin1(self) -> CMatrix {
        let (sx, sy, sz) = spin1_operators();
        match self {
            SpinAxis::X => sx,
            SpinAxis::Y => sy,
            SpinAxis::Z => sz,
        }
    }

    pub fn pauli(self) -> CMatrix {
        match self {
            SpinAxis::X => pauli_x(),
            SpinAxis::Y => pauli_y(),
            SpinAxis::Z => pauli_z(),
        }
    }
}

impl fmt::Display for SpinAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinAxis::X => "x",
            SpinAxis::Y => "y",
            SpinAxis::Z => "z",
        })
    }
}

impl std::str::FromStr for SpinAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(SpinAxis::X),
            "y" => Ok(SpinAxis::Y),
            "z" => Ok(SpinAxis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Build a matrix from row slices.
pub fn from_rows(rows: &[&[C64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Standard spin-1 matrices `(Sx, Sy, Sz)`.
pub fn spin1_operators() -> (CMatrix, CMatrix, CMatrix) {
    let s = cr(FRAC_1_SQRT_2);
    let z = cr(0.0);
    let is = c(0.0, FRAC_1_SQRT_2);
    let sx = from_rows(&[&[z, s, z], &[s, z, s], &[z, s, z]]);
    let sy = from_rows(&[&[z, -is, z], &[is, z, -is], &[z, is, z]]);
    let sz = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.0), z, cr(-1.0)]));
    (sx, sy, sz)
}

pub fn pauli_x() -> CMatrix {
    from_rows(&[&[cr(0.0), cr(1.0)], &[cr(1.0), cr(0.0)]])
}

pub fn pauli_y() -> CMatrix {
    from_rows(&[&[cr(0.0), c(0.0, -1.0)], &[c(0.0, 1.0), cr(0.0)]])
}

pub fn pauli_z() -> CMatrix {
    from_rows(&[&[cr(1.0), cr(0.0)], &[cr(0.0), cr(-1.0)]])
}

/// Qubit rotation `exp(-i angle P / 2)` about a Pauli axis.
pub fn pauli_rotation(axis: SpinAxis, angle: f64) -> CMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    identity(2) * cr(co) - axis.pauli() * c(0.0, s)
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermiticity_deviation(m) < tol
}

pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(m.adjoint() * m), &identity(m.nrows()))
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    unitarity_deviation(m) < tol
}

/// Largest entry modulus of `a - b`; infinite when shapes differ.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.ncols() != b.nrows() {
        return Err(Error::ShapeMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(a * b)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn trace(a: &CMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            op: "trace",
            left: a.shape(),
            right: a.shape(),
        });
    }
    Ok(a.trace())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
/// the unitary whose columns are the eigenvectors.
pub fn hermitian_eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let dev = hermiticity_deviation(h);
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let sym = (h + h.adjoint()) * cr(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), h.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    let (values, _) = hermitian_eigh(h)?;
    Ok(values.first().copied().unwrap_or(0.0))
}

/// `exp(i * angle * h)` for Hermitian `h`, by spectral decomposition.
pub fn exp_i_hermitian(h: &CMatrix, angle: f64) -> Result<CMatrix> {
    let (values, vecs) = hermitian_eigh(h)?;
    let phases = CVector::from_iterator(
        values.len(),
        values.iter().map(|&lam| C64::from_polar(1.0, angle * lam)),
    );
    Ok(&vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint())
}

/// `exp(i pi S)` for a Hermitian spin component `S`.
pub fn exp_i_pi_spin(axis_op: &CMatrix) -> Result<CMatrix> {
    exp_i_hermitian(axis_op, PI)
}

/// `h^{-1/2}` for a Hermitian positive-definite matrix.
pub fn inv_sqrt_hermitian(h: &CMatrix) -> Result<CMatrix> {
    let (values, vecs) = hermitian_eigh(h)?;
    if values.iter().any(|&v| v <= 1e-14) {
        return Err(Error::InvalidArgument(
            "matrix is not positive definite".into(),
        ));
    }
    let d = CVector::from_iterator(values.len(), values.iter().map(|&v| cr(v.sqrt().recip())));
    Ok(&vecs * CMatrix::from_diagonal(&d) * vecs.adjoint())
}

/// Eigenvalue of largest modulus of a general square matrix, with a unit-norm
/// eigenvector spanning the corresponding (numerical) null space of `m - lambda`.
pub fn dominant_eigenpair(m: &CMatrix) -> Result<(C64, CVector)> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::ShapeMismatch {
            op: "dominant_eigenpair",
            left: m.shape(),
            right: m.shape(),
        });
    }
    let n = m.nrows();
    let schur = Schur::new(m.clone());
    let (_, t) = schur.unpack();
    let lambda = (0..n)
        .map(|i| t[(i, i)])
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("non-empty");
    let shifted = m - identity(n) * lambda;
    let svd = SVD::new(shifted, false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let v = CVector::from_iterator(n, v_t.row(k).iter().map(|x| x.conj()));
    Ok((lambda, v))
}
