//! Logical state and process tomography from Pauli expectations.
//!
//! States are reconstructed by linear inversion `rho = 2^-n sum <P> P`
//! followed by projection onto the closest density matrix (negative
//! eigenvalues clipped, trace renormalized). An iterative maximum-likelihood
//! refinement is available through [`refine_mle`].

use super::fidelity::{label, FidelityError, LogicalExpectations};
use crate::circuit::Pauli;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Matrix = DMatrix<C>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TomographyError {
    #[error("incomplete Pauli set: {0}")]
    Incomplete(#[from] FidelityError),
    #[error("only 1 or 2 logical qubits are supported, got {0}")]
    UnsupportedSize(usize),
    #[error("process tomography needs 4 input states, got {0}")]
    WrongInputCount(usize),
}

fn pauli_matrix(p: Pauli) -> Matrix {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    let v = match p {
        Pauli::I => [l, o, o, l],
        Pauli::X => [o, l, l, o],
        Pauli::Y => [o, -i, i, o],
        Pauli::Z => [l, o, o, -l],
    };
    DMatrix::from_row_slice(2, 2, &v)
}

/// Matrix of a Pauli product; the first factor is the most significant
/// tensor slot, so basis index `2*b1 + b2` labels `|b1 b2>`.
pub fn pauli_product(factors: &[Pauli]) -> Matrix {
    factors
        .iter()
        .fold(DMatrix::identity(1, 1), |acc, &p| acc.kronecker(&pauli_matrix(p)))
}

fn all_products(n: usize) -> Vec<Vec<Pauli>> {
    (0..4usize.pow(n as u32))
        .map(|k| (0..n).map(|j| Pauli::ALL[(k >> (2 * (n - 1 - j))) & 3]).collect())
        .collect()
}

/// Linear-inversion estimate, Hermitian and unit-trace but possibly not
/// positive.
pub fn linear_inversion(e: &LogicalExpectations, n: usize) -> Result<Matrix, TomographyError> {
    if !(1..=2).contains(&n) {
        return Err(TomographyError::UnsupportedSize(n));
    }
    let dim = 1 << n;
    let mut rho = DMatrix::zeros(dim, dim);
    for factors in all_products(n) {
        let v = e.get(&label(&factors))?.value;
        rho += pauli_product(&factors) * C::new(v / dim as f64, 0.0);
    }
    Ok(rho)
}

/// Closest positive semidefinite unit-trace matrix obtained by clipping
/// negative eigenvalues.
pub fn project_psd(m: &Matrix) -> Matrix {
    let herm = (m + m.adjoint()) * C::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let dim = m.nrows();
    if total <= 0.0 {
        return DMatrix::identity(dim, dim) * C::new(1.0 / dim as f64, 0.0);
    }
    let mut out = DMatrix::zeros(dim, dim);
    for (k, &l) in clipped.iter().enumerate() {
        if l > 0.0 {
            let v = eig.eigenvectors.column(k);
            out += (v * v.adjoint()) * C::new(l / total, 0.0);
        }
    }
    out
}

pub fn reconstruct_state(e: &LogicalExpectations, n: usize) -> Result<Matrix, TomographyError> {
    Ok(project_psd(&linear_inversion(e, n)?))
}

/// `R rho R` maximum-likelihood iteration started from the projected
/// linear-inversion estimate. Outcome frequencies are `(1 +- <P>)/2` for
/// every non-identity product `P`.
pub fn refine_mle(e: &LogicalExpectations, n: usize, iterations: usize) -> Result<Matrix, TomographyError> {
    let mut rho = reconstruct_state(e, n)?;
    let dim = 1 << n;
    let id = DMatrix::<C>::identity(dim, dim);
    let mut povm = Vec::new();
    for factors in all_products(n).into_iter().skip(1) {
        let p = pauli_product(&factors);
        let v = e.get(&label(&factors))?.value;
        for sign in [1.0, -1.0] {
            let f = (1.0 + sign * v) / 2.0;
            if f > 0.0 {
                povm.push((f, (&id + &p * C::new(sign, 0.0)) * C::new(0.5, 0.0)));
            }
        }
    }
    for _ in 0..iterations {
        let mut r = DMatrix::zeros(dim, dim);
        for (f, proj) in &povm {
            let prob = (proj * &rho).trace().re;
            if prob > 1e-15 {
                r += proj * C::new(f / prob, 0.0);
            }
        }
        let next = &r * &rho * &r;
        let tr = next.trace().re;
        rho = next / C::new(tr, 0.0);
    }
    Ok(rho)
}

/// Process matrix in the basis `{I, X, Y, Z}` from output expectations for
/// the inputs `|0>, |1>, |+>, |+i>` (in that order).
///
/// The four outputs determine the channel on every operator `|i><j|`; these
/// assemble into the Choi matrix `J = sum |i><j| (x) E(|i><j|)`, and
/// `chi_mn = <v_m|J|v_n> / 4` with `|v_m> = sum_i |i> (x) sigma_m|i>`.
pub fn reconstruct_process(inputs: &[LogicalExpectations]) -> Result<Matrix, TomographyError> {
    if inputs.len() != 4 {
        return Err(TomographyError::WrongInputCount(inputs.len()));
    }
    let out: Vec<Matrix> = inputs
        .iter()
        .map(|e| linear_inversion(e, 1))
        .collect::<Result<_, _>>()?;
    let (e0, e1, ep, ei) = (&out[0], &out[1], &out[2], &out[3]);
    let diag = e0 + e1;
    let i = C::new(0.0, 1.0);
    // |0><1| = |+><+| + i|+i><+i| - (1+i)/2 I, and |1><0| is its adjoint
    let e01 = ep + ei * i - &diag * C::new(0.5, 0.5);
    let e10 = ep - ei * i - &diag * C::new(0.5, -0.5);
    let blocks = [[e0, &e01], [&e10, e1]];
    let mut choi = DMatrix::<C>::zeros(4, 4);
    for (a, row) in blocks.iter().enumerate() {
        for (b, block) in row.iter().enumerate() {
            choi.view_mut((2 * a, 2 * b), (2, 2)).copy_from(*block);
        }
    }
    let vecs: Vec<Matrix> = Pauli::ALL
        .iter()
        .map(|&p| {
            let s = pauli_matrix(p);
            let mut v = DMatrix::zeros(4, 1);
            for col in 0..2 {
                for row in 0..2 {
                    v[(2 * col + row, 0)] = s[(row, col)];
                }
            }
            v
        })
        .collect();
    let chi = DMatrix::from_fn(4, 4, |m, n| (vecs[m].adjoint() * &choi * &vecs[n])[(0, 0)] / 4.0);
    Ok(project_psd(&chi))
}

/// Complex matrix serialized as nested `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson(pub Vec<Vec<[f64; 2]>>);

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson(
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect(),
        )
    }
}
