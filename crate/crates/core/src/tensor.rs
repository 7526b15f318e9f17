//! Fixed-size second-order tensors in two and three dimensions.
//!
//! Three storage roles are kept apart at the type level:
//!
//! - [`Tensor`]: a general `N x N` real matrix (deformation gradients, plastic
//!   distortions, rank-one directions).
//! - [`SymTensor`]: a matrix whose storage is exactly symmetric (log strains,
//!   Kirchhoff and Cauchy stresses).
//! - [`PosDefSymTensor`]: a symmetric matrix with strictly positive spectrum
//!   (stretch and Cauchy-Green tensors).
//!
//! Only `N = 2` (planar mode) and `N = 3` are supported; other sizes fail to
//! compile.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest admissible ratio `lambda_min / lambda_max` for a positive-definite matrix.
pub const POSDEF_REL_THRESHOLD: f64 = 1e-14;

const MAX_JACOBI_SWEEPS: usize = 100;
const MAX_POLAR_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("tensor is not invertible with positive determinant (det = {det:e})")]
    NonInvertible { det: f64 },
    #[error("tensor is not positive definite (eigenvalues in [{min:e}, {max:e}])")]
    NotPositiveDefinite { min: f64, max: f64 },
}

/// General `N x N` tensor, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tensor<const N: usize>(#[serde(with = "rows_serde")] [[f64; N]; N]);

pub type Tensor2 = Tensor<2>;
pub type Tensor3 = Tensor<3>;

impl<const N: usize> Tensor<N> {
    const SUPPORTED: () = assert!(N == 2 || N == 3, "only 2x2 and 3x3 tensors are supported");

    pub fn from_rows(rows: [[f64; N]; N]) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::SUPPORTED;
        Tensor(rows)
    }

    pub fn zero() -> Self {
        Self::from_rows([[0.0; N]; N])
    }

    pub fn identity() -> Self {
        Self::scalar(1.0)
    }

    /// `c * identity`
    pub fn scalar(c: f64) -> Self {
        Self::from_diagonal([c; N])
    }

    pub fn from_diagonal(d: [f64; N]) -> Self {
        let mut t = Self::zero();
        for i in 0..N {
            t.0[i][i] = d[i];
        }
        t
    }

    /// Dyadic product `a ⊗ b`, i.e. the matrix `a b^T`.
    pub fn outer(a: &[f64; N], b: &[f64; N]) -> Self {
        let mut t = Self::zero();
        for i in 0..N {
            for j in 0..N {
                t.0[i][j] = a[i] * b[j];
            }
        }
        t
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[[f64; N]; N]) -> Self {
        let mut t = Self::zero();
        for j in 0..N {
            for i in 0..N {
                t.0[i][j] = cols[j][i];
            }
        }
        t
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.0
    }

    pub fn column(&self, j: usize) -> [f64; N] {
        std::array::from_fn(|i| self.0[i][j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i])))
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        if N == 2 {
            a[0][0] * a[1][1] - a[0][1] * a[1][0]
        } else {
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        }
    }

    /// Inverse by the adjugate formula; `None` for singular or non-finite input.
    pub fn try_inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let a = &self.0;
        let mut inv = Self::zero();
        if N == 2 {
            inv.0[0][0] = a[1][1] / det;
            inv.0[0][1] = -a[0][1] / det;
            inv.0[1][0] = -a[1][0] / det;
            inv.0[1][1] = a[0][0] / det;
        } else {
            for i in 0..3 {
                for j in 0..3 {
                    // cofactor of a[j][i]
                    let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                    let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                    inv.0[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
                }
            }
        }
        Some(inv)
    }

    /// Frobenius inner product `sum_ij A_ij B_ij`.
    pub fn inner(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Symmetric part `(A + A^T) / 2`.
    pub fn sym(&self) -> SymTensor<N> {
        SymTensor::from_tensor(self)
    }

    /// Skew part `(A - A^T) / 2`.
    pub fn skew(&self) -> Self {
        (*self - self.transpose()) * 0.5
    }

    /// Deviatoric projection `A - tr(A)/N * identity`.
    pub fn dev(&self) -> Self {
        *self - Self::scalar(self.trace() / N as f64)
    }

    pub fn mul_vec(&self, v: &[f64; N]) -> [f64; N] {
        std::array::from_fn(|i| (0..N).map(|j| self.0[i][j] * v[j]).sum())
    }

    /// Embeds into a 3x3 array; planar tensors get a unit out-of-plane entry
    /// when `unit_out_of_plane` is set and zero otherwise.
    pub fn embed3(&self, unit_out_of_plane: bool) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.0[i][j];
            }
        }
        if N == 2 && unit_out_of_plane {
            out[2][2] = 1.0;
        }
        out
    }
}

impl<const N: usize> Default for Tensor<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> Index<(usize, usize)> for Tensor<N> {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Tensor<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Tensor<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])))
    }
}

impl<const N: usize> AddAssign for Tensor<N> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const N: usize> Sub for Tensor<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])))
    }
}

impl<const N: usize> Neg for Tensor<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl<const N: usize> Mul<f64> for Tensor<N> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] * c)))
    }
}

impl<const N: usize> Mul<Tensor<N>> for f64 {
    type Output = Tensor<N>;
    fn mul(self, t: Tensor<N>) -> Tensor<N> {
        t * self
    }
}

impl<const N: usize> Mul for Tensor<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_rows(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

impl<const N: usize> Mul<&Tensor<N>> for &Tensor<N> {
    type Output = Tensor<N>;
    fn mul(self, rhs: &Tensor<N>) -> Tensor<N> {
        *self * *rhs
    }
}

/// Symmetric tensor; storage is exactly symmetric by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct SymTensor<const N: usize>(Tensor<N>);

pub type SymTensor2 = SymTensor<2>;
pub type SymTensor3 = SymTensor<3>;

impl<const N: usize> SymTensor<N> {
    /// Symmetric part of `t`; the result is bitwise symmetric.
    pub fn from_tensor(t: &Tensor<N>) -> Self {
        let mut s = Tensor::zero();
        for i in 0..N {
            s.0[i][i] = t.0[i][i];
            for j in (i + 1)..N {
                let v = 0.5 * (t.0[i][j] + t.0[j][i]);
                s.0[i][j] = v;
                s.0[j][i] = v;
            }
        }
        SymTensor(s)
    }

    pub fn zero() -> Self {
        SymTensor(Tensor::zero())
    }

    pub fn identity() -> Self {
        SymTensor(Tensor::identity())
    }

    pub fn scalar(c: f64) -> Self {
        SymTensor(Tensor::scalar(c))
    }

    pub fn from_diagonal(d: [f64; N]) -> Self {
        SymTensor(Tensor::from_diagonal(d))
    }

    /// `Q diag(values) Q^T` with `Q` holding eigenvectors in its columns.
    pub fn from_spectral(values: &[f64; N], vectors: &Tensor<N>) -> Self {
        let mut t = Tensor::zero();
        for (a, &v) in values.iter().enumerate() {
            let q = vectors.column(a);
            t += Tensor::outer(&q, &q) * v;
        }
        Self::from_tensor(&t)
    }

    pub fn as_tensor(&self) -> &Tensor<N> {
        &self.0
    }

    pub fn to_tensor(self) -> Tensor<N> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.0.inner(&other.0)
    }

    pub fn dev(&self) -> Self {
        SymTensor(self.0.dev())
    }

    /// Similarity transform `R S R^T`, symmetrized.
    pub fn rotate(&self, r: &Tensor<N>) -> Self {
        Self::from_tensor(&(*r * self.0 * r.transpose()))
    }

    pub fn eigen(&self) -> SymEigen<N> {
        SymEigen::new(self)
    }

    /// Checked principal logarithm.
    pub fn try_log(&self) -> Result<Self, TensorError> {
        PosDefSymTensor::try_new(*self).map(|p| p.log())
    }

    pub fn exp(&self) -> PosDefSymTensor<N> {
        sym_exp(self)
    }

    /// Components `(11, 22, 33, 12, 23, 13)` of the 3x3 embedding.
    pub fn voigt6(&self) -> [f64; 6] {
        let a = self.0.embed3(false);
        [a[0][0], a[1][1], a[2][2], a[0][1], a[1][2], a[0][2]]
    }
}

impl<const N: usize> Index<(usize, usize)> for SymTensor<N> {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.0[ij]
    }
}

impl<const N: usize> Add for SymTensor<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        SymTensor(self.0 + rhs.0)
    }
}

impl<const N: usize> Sub for SymTensor<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        SymTensor(self.0 - rhs.0)
    }
}

impl<const N: usize> Mul<f64> for SymTensor<N> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        SymTensor(self.0 * c)
    }
}

impl<const N: usize> From<SymTensor<N>> for Tensor<N> {
    fn from(s: SymTensor<N>) -> Self {
        s.0
    }
}

/// Symmetric positive-definite tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PosDefSymTensor<const N: usize>(SymTensor<N>);

pub type PosDefSymTensor2 = PosDefSymTensor<2>;
pub type PosDefSymTensor3 = PosDefSymTensor<3>;

impl<const N: usize> PosDefSymTensor<N> {
    /// Accepts `s` when `lambda_min > POSDEF_REL_THRESHOLD * lambda_max > 0`.
    pub fn try_new(s: SymTensor<N>) -> Result<Self, TensorError> {
        let eig = s.eigen();
        let (min, max) = (eig.values[0], eig.values[N - 1]);
        if !(max > 0.0) || !(min > POSDEF_REL_THRESHOLD * max) || !max.is_finite() {
            return Err(TensorError::NotPositiveDefinite { min, max });
        }
        Ok(PosDefSymTensor(s))
    }

    pub fn identity() -> Self {
        PosDefSymTensor(SymTensor::identity())
    }

    pub fn as_sym(&self) -> &SymTensor<N> {
        &self.0
    }

    pub fn as_tensor(&self) -> &Tensor<N> {
        self.0.as_tensor()
    }

    pub fn log(&self) -> SymTensor<N> {
        sym_log(self)
    }

    pub fn det(&self) -> f64 {
        self.0.as_tensor().det()
    }
}

impl<const N: usize> From<PosDefSymTensor<N>> for SymTensor<N> {
    fn from(p: PosDefSymTensor<N>) -> Self {
        p.0
    }
}

/// Spectral decomposition of a symmetric tensor; eigenvalues ascending,
/// eigenvectors in the columns of `vectors` (a proper rotation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Tensor<N>,
}

impl<const N: usize> SymEigen<N> {
    /// Cyclic Jacobi iteration.
    pub fn new(s: &SymTensor<N>) -> Self {
        let mut a = s.0 .0;
        let mut v = Tensor::<N>::identity().0;
        let scale: f64 = (0..N).map(|i| a[i][i] * a[i][i]).sum::<f64>() + 2.0 * off_diagonal_sq(&a);
        if scale > 0.0 && scale.is_finite() {
            for _ in 0..MAX_JACOBI_SWEEPS {
                let off = off_diagonal_sq(&a);
                if off <= 1e-36 * scale {
                    break;
                }
                for p in 0..N {
                    for q in (p + 1)..N {
                        jacobi_rotate(&mut a, &mut v, p, q);
                    }
                }
            }
        }
        let mut order: [usize; N] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
        let values = std::array::from_fn(|k| a[order[k]][order[k]]);
        let mut cols: [[f64; N]; N] = std::array::from_fn(|k| std::array::from_fn(|r| v[r][order[k]]));
        let mut vectors = Tensor::from_columns(&cols);
        if vectors.det() < 0.0 {
            for x in cols[0].iter_mut() {
                *x = -*x;
            }
            vectors = Tensor::from_columns(&cols);
        }
        SymEigen { values, vectors }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymTensor<N> {
        let mapped = self.values.map(f);
        SymTensor::from_spectral(&mapped, &self.vectors)
    }
}

fn off_diagonal_sq<const N: usize>(a: &[[f64; N]; N]) -> f64 {
    let mut s = 0.0;
    for p in 0..N {
        for q in (p + 1)..N {
            s += a[p][q] * a[p][q];
        }
    }
    s
}

fn jacobi_rotate<const N: usize>(a: &mut [[f64; N]; N], v: &mut [[f64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    a[p][p] -= t * apq;
    a[q][q] += t * apq;
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for r in 0..N {
        if r != p && r != q {
            let (arp, arq) = (a[r][p], a[r][q]);
            a[r][p] = c * arp - s * arq;
            a[p][r] = a[r][p];
            a[r][q] = s * arp + c * arq;
            a[q][r] = a[r][q];
        }
    }
    for row in v.iter_mut() {
        let (vp, vq) = (row[p], row[q]);
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

/// Right polar decomposition `F = R U`.
///
/// `R` comes from the scaled Newton iteration `X <- (z X + X^{-T}/z) / 2`,
/// `U` is the symmetric part of `R^T F`.
pub fn polar_right<const N: usize>(f: &Tensor<N>) -> Result<(Tensor<N>, PosDefSymTensor<N>), TensorError> {
    let det = f.det();
    if !f.is_finite() || !(det > 0.0) || !det.is_finite() {
        return Err(TensorError::NonInvertible { det });
    }
    let mut x = *f;
    let mut scaled = true;
    for _ in 0..MAX_POLAR_ITERATIONS {
        let inv_t = x.try_inverse().ok_or(TensorError::NonInvertible { det })?.transpose();
        // determinant scaling only while far from convergence
        let zeta = if scaled { x.det().abs().powf(-1.0 / N as f64) } else { 1.0 };
        let next = (x * zeta + inv_t * (1.0 / zeta)) * 0.5;
        let change = (next - x).norm();
        x = next;
        if change <= 4.0 * f64::EPSILON * x.norm() {
            break;
        }
        scaled = change > 1e-2 * x.norm();
    }
    let u = SymTensor::from_tensor(&(x.transpose() * *f));
    let u = PosDefSymTensor::try_new(u).map_err(|_| TensorError::NonInvertible { det })?;
    Ok((x, u))
}

/// Principal logarithm of a positive-definite tensor via its spectral decomposition.
pub fn sym_log<const N: usize>(p: &PosDefSymTensor<N>) -> SymTensor<N> {
    p.0.eigen().map(f64::ln)
}

/// Spectral exponential of a symmetric tensor.
pub fn sym_exp<const N: usize>(s: &SymTensor<N>) -> PosDefSymTensor<N> {
    PosDefSymTensor(s.eigen().map(f64::exp))
}

/// General matrix exponential by scaling and squaring with a Taylor kernel.
pub fn mat_exp<const N: usize>(a: &Tensor<N>) -> Tensor<N> {
    let norm = a.norm();
    let mut squarings = 0;
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as i32;
    }
    let scaled = *a * 0.5f64.powi(squarings);
    // ||scaled|| <= 1/4: 18 terms put the truncation far below one ulp
    let mut result = Tensor::identity();
    let mut term = Tensor::identity();
    for k in 1..=18 {
        term = term * scaled * (1.0 / k as f64);
        result += term;
    }
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

/// `S - tr(S)/n * identity`; `n` must match the tensor size.
pub fn dev<const N: usize>(s: &SymTensor<N>, n: usize) -> SymTensor<N> {
    debug_assert_eq!(n, N, "dev dimension must match tensor size");
    s.dev()
}

/// Frobenius inner product.
pub fn inner<const N: usize>(a: &Tensor<N>, b: &Tensor<N>) -> f64 {
    a.inner(b)
}

pub(crate) mod rows_serde {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(rows: &[[f64; N]; N], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(d: D) -> Result<[[f64; N]; N], D::Error> {
        let v: Vec<Vec<f64>> = Vec::deserialize(d)?;
        if v.len() != N || v.iter().any(|r| r.len() != N) {
            return Err(D::Error::custom(format!("expected a {N}x{N} array of rows")));
        }
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| v[i][j])))
    }
}
