//! Operators on the truncated Hermite basis.
//!
//! Quantized symbols are banded: the angular harmonic `e^{inθ}` populates the
//! diagonal `row − col = n` only. Dynamics at large N works directly on the
//! bands; dense form is materialized for eigendecompositions, products and
//! functional calculus at diagnostic sizes.

use std::collections::BTreeMap;

use faer::{Mat, Side};

use crate::basis::HermiteBasis;
use crate::error::CoreError;
use crate::{Result, C64};

#[derive(Debug, Clone)]
enum Storage {
    Banded(BTreeMap<i64, Vec<C64>>),
    Dense(Mat<C64>),
}

/// A complex matrix on the truncated Hermite basis with band metadata.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    basis: HermiteBasis,
    storage: Storage,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn zeros(basis: HermiteBasis) -> Self {
        OperatorMatrix {
            basis,
            storage: Storage::Banded(BTreeMap::new()),
            hermitian: true,
        }
    }

    pub fn identity(basis: HermiteBasis) -> Self {
        Self::diagonal(basis, &vec![C64::new(1.0, 0.0); basis.size()])
    }

    pub fn diagonal(basis: HermiteBasis, diag: &[C64]) -> Self {
        assert_eq!(diag.len(), basis.size());
        let mut bands = BTreeMap::new();
        bands.insert(0, diag.to_vec());
        let hermitian = diag.iter().all(|z| z.im == 0.0);
        OperatorMatrix {
            basis,
            storage: Storage::Banded(bands),
            hermitian,
        }
    }

    /// The harmonic oscillator `H0 = diag(k + ½)`.
    pub fn h0(basis: HermiteBasis) -> Self {
        let diag: Vec<C64> = basis.h0_diagonal().iter().map(|&d| C64::new(d, 0.0)).collect();
        Self::diagonal(basis, &diag)
    }

    /// Build from explicit bands; `bands[d]` holds the entries of diagonal
    /// `row − col = d`, indexed so that entry t sits at
    /// `(t + max(d,0), t + max(-d,0))`.
    pub fn from_bands(basis: HermiteBasis, bands: BTreeMap<i64, Vec<C64>>) -> Result<Self> {
        let n = basis.size();
        for (d, v) in &bands {
            let expect = n - (d.unsigned_abs() as usize).min(n);
            if v.len() != expect {
                return Err(CoreError::InvalidInput(format!(
                    "band {d} has length {} but basis size {n} requires {expect}",
                    v.len()
                )));
            }
        }
        let mut m = OperatorMatrix {
            basis,
            storage: Storage::Banded(bands),
            hermitian: false,
        };
        m.hermitian = m.hermiticity_error() <= 1e-12 * m.max_abs().max(1.0);
        Ok(m)
    }

    pub fn from_dense(basis: HermiteBasis, dense: Mat<C64>) -> Self {
        assert_eq!(dense.nrows(), basis.size());
        assert_eq!(dense.ncols(), basis.size());
        let mut m = OperatorMatrix {
            basis,
            storage: Storage::Dense(dense),
            hermitian: false,
        };
        m.hermitian = m.hermiticity_error() <= 1e-12 * m.max_abs().max(1.0);
        m
    }

    pub fn basis(&self) -> HermiteBasis {
        self.basis
    }

    pub fn size(&self) -> usize {
        self.basis.size()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_banded(&self) -> bool {
        matches!(self.storage, Storage::Banded(_))
    }

    /// Nonzero diagonals (row − col).
    pub fn bands(&self) -> Vec<i64> {
        match &self.storage {
            Storage::Banded(b) => b
                .iter()
                .filter(|(_, v)| v.iter().any(|z| z.norm() > 0.0))
                .map(|(d, _)| *d)
                .collect(),
            Storage::Dense(m) => {
                let n = self.size() as i64;
                (-(n - 1)..n)
                    .filter(|&d| {
                        let len = (n - d.abs()) as usize;
                        (0..len).any(|t| {
                            let (i, j) = band_coords(d, t);
                            m[(i, j)].norm() > 1e-300
                        })
                    })
                    .collect()
            }
        }
    }

    pub fn band(&self, d: i64) -> Option<&[C64]> {
        match &self.storage {
            Storage::Banded(b) => b.get(&d).map(|v| v.as_slice()),
            Storage::Dense(_) => None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match &self.storage {
            Storage::Banded(b) => {
                let d = i as i64 - j as i64;
                b.get(&d)
                    .map(|v| v[i.min(j)])
                    .unwrap_or_else(|| C64::new(0.0, 0.0))
            }
            Storage::Dense(m) => m[(i, j)],
        }
    }

    pub fn to_dense(&self) -> Mat<C64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Banded(bands) => {
                let n = self.size();
                let mut m = Mat::<C64>::zeros(n, n);
                for (&d, v) in bands {
                    for (t, z) in v.iter().enumerate() {
                        let (i, j) = band_coords(d, t);
                        m[(i, j)] = *z;
                    }
                }
                m
            }
        }
    }

    /// y = M x.
    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        let n = self.size();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        y.fill(C64::new(0.0, 0.0));
        match &self.storage {
            Storage::Banded(bands) => {
                for (&d, v) in bands {
                    for (t, z) in v.iter().enumerate() {
                        let (i, j) = band_coords(d, t);
                        y[i] += z * x[j];
                    }
                }
            }
            Storage::Dense(m) => {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += m[(i, j)] * x[j];
                    }
                    y[i] = acc;
                }
            }
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.size(), other.size());
        match (&self.storage, &other.storage) {
            (Storage::Banded(a), Storage::Banded(b)) => {
                let mut out = a.clone();
                for (&d, v) in b {
                    let slot = out
                        .entry(d)
                        .or_insert_with(|| vec![C64::new(0.0, 0.0); v.len()]);
                    for (t, z) in v.iter().enumerate() {
                        slot[t] += z;
                    }
                }
                OperatorMatrix {
                    basis: self.basis,
                    storage: Storage::Banded(out),
                    hermitian: self.hermitian && other.hermitian,
                }
            }
            _ => {
                let mut m = self.to_dense();
                let o = other.to_dense();
                for i in 0..self.size() {
                    for j in 0..self.size() {
                        m[(i, j)] += o[(i, j)];
                    }
                }
                OperatorMatrix {
                    basis: self.basis,
                    storage: Storage::Dense(m),
                    hermitian: self.hermitian && other.hermitian,
                }
            }
        }
    }

    pub fn scale(&self, s: C64) -> OperatorMatrix {
        let storage = match &self.storage {
            Storage::Banded(b) => Storage::Banded(
                b.iter()
                    .map(|(&d, v)| (d, v.iter().map(|z| z * s).collect()))
                    .collect(),
            ),
            Storage::Dense(m) => {
                let mut m = m.clone();
                for i in 0..self.size() {
                    for j in 0..self.size() {
                        m[(i, j)] *= s;
                    }
                }
                Storage::Dense(m)
            }
        };
        OperatorMatrix {
            basis: self.basis,
            storage,
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        match &self.storage {
            Storage::Banded(b) => {
                let bands = b
                    .iter()
                    .map(|(&d, v)| (-d, v.iter().map(|z| z.conj()).collect()))
                    .collect();
                OperatorMatrix {
                    basis: self.basis,
                    storage: Storage::Banded(bands),
                    hermitian: self.hermitian,
                }
            }
            Storage::Dense(m) => {
                let n = self.size();
                let mut a = Mat::<C64>::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] = m[(j, i)].conj();
                    }
                }
                OperatorMatrix {
                    basis: self.basis,
                    storage: Storage::Dense(a),
                    hermitian: self.hermitian,
                }
            }
        }
    }

    /// Dense product via faer.
    pub fn matmul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let p = self.to_dense() * other.to_dense();
        let mut m = OperatorMatrix {
            basis: self.basis,
            storage: Storage::Dense(p),
            hermitian: false,
        };
        m.hermitian = m.hermiticity_error() <= 1e-10 * m.max_abs().max(1.0);
        m
    }

    /// `i [A, B] = i (AB − BA)`; Hermitian when A and B are.
    pub fn commutator_i(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let ab = self.to_dense() * other.to_dense();
        let ba = other.to_dense() * self.to_dense();
        let n = self.size();
        let mut m = Mat::<C64>::zeros(n, n);
        let i_unit = C64::new(0.0, 1.0);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = i_unit * (ab[(r, c)] - ba[(r, c)]);
            }
        }
        let mut out = OperatorMatrix {
            basis: self.basis,
            storage: Storage::Dense(m),
            hermitian: false,
        };
        out.hermitian = out.hermiticity_error() <= 1e-10 * out.max_abs().max(1.0);
        out
    }

    /// max |M_{ij} − conj(M_{ji})|.
    pub fn hermiticity_error(&self) -> f64 {
        match &self.storage {
            Storage::Banded(bands) => {
                let mut err = 0.0f64;
                for (&d, v) in bands {
                    let mirror = bands.get(&(-d));
                    for (t, z) in v.iter().enumerate() {
                        let m = mirror
                            .map(|mv| mv[t])
                            .unwrap_or_else(|| C64::new(0.0, 0.0));
                        err = err.max((z - m.conj()).norm());
                        if mirror.is_none() && d == 0 {
                            err = err.max(z.im.abs());
                        }
                    }
                }
                err
            }
            Storage::Dense(m) => {
                let n = self.size();
                let mut err = 0.0f64;
                for i in 0..n {
                    for j in 0..=i {
                        err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
                err
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Banded(b) => b
                .values()
                .flat_map(|v| v.iter().map(|z| z.norm()))
                .fold(0.0, f64::max),
            Storage::Dense(m) => {
                let n = self.size();
                let mut mx = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        mx = mx.max(m[(i, j)].norm());
                    }
                }
                mx
            }
        }
    }

    /// Max entry magnitude of `self − other` over the interior block
    /// (rows and columns below 0.9 N), excluding the truncation edge.
    pub fn max_abs_diff_interior(&self, other: &OperatorMatrix) -> f64 {
        let cut = self.basis.interior_end();
        let mut mx = 0.0f64;
        for i in 0..cut {
            for j in 0..cut {
                mx = mx.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        mx
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        match &self.storage {
            Storage::Banded(b) => b
                .values()
                .flat_map(|v| v.iter().map(|z| z.norm_sqr()))
                .sum::<f64>()
                .sqrt(),
            Storage::Dense(m) => {
                let n = self.size();
                let mut s = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        s += m[(i, j)].norm_sqr();
                    }
                }
                s.sqrt()
            }
        }
    }

    /// Hermitian eigendecomposition (ascending eigenvalues).
    pub fn eigendecompose(&self) -> Result<EigenDecomposition> {
        if !self.hermitian {
            return Err(CoreError::NonHermitian(format!(
                "eigendecomposition requested, hermiticity error {:.3e}",
                self.hermiticity_error()
            )));
        }
        let dense = self.to_dense();
        let evd = dense
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| CoreError::InvalidInput(format!("eigensolver failed: {e:?}")))?;
        let n = self.size();
        let values: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
        let u = evd.U().to_owned();
        Ok(EigenDecomposition {
            basis: self.basis,
            values,
            u,
        })
    }

    /// Spectral (operator) norm of a Hermitian matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = self.eigendecompose()?;
        Ok(eig
            .values
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs())))
    }

    /// Restriction to the leading `block × block` principal submatrix.
    pub fn principal_block(&self, block: usize) -> OperatorMatrix {
        let nb = HermiteBasis::new(block);
        let mut m = Mat::<C64>::zeros(block, block);
        for i in 0..block {
            for j in 0..block {
                m[(i, j)] = self.entry(i, j);
            }
        }
        OperatorMatrix {
            basis: nb,
            storage: Storage::Dense(m),
            hermitian: self.hermitian,
        }
    }

    /// Nonzero entries as (row, col, value), row-major, for dumps.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, C64)> {
        let mut out = Vec::new();
        match &self.storage {
            Storage::Banded(bands) => {
                for (&d, v) in bands {
                    for (t, z) in v.iter().enumerate() {
                        if z.norm() > 0.0 {
                            let (i, j) = band_coords(d, t);
                            out.push((i, j, *z));
                        }
                    }
                }
            }
            Storage::Dense(m) => {
                for i in 0..self.size() {
                    for j in 0..self.size() {
                        if m[(i, j)].norm() > 0.0 {
                            out.push((i, j, m[(i, j)]));
                        }
                    }
                }
            }
        }
        out.sort_by_key(|(i, j, _)| (*i, *j));
        out
    }
}

#[inline]
fn band_coords(d: i64, t: usize) -> (usize, usize) {
    if d >= 0 {
        (t + d as usize, t)
    } else {
        (t, t + (-d) as usize)
    }
}

/// Eigendecomposition `M = U Λ U*` of a Hermitian operator.
pub struct EigenDecomposition {
    pub basis: HermiteBasis,
    pub values: Vec<f64>,
    pub u: Mat<C64>,
}

impl EigenDecomposition {
    /// `U f(Λ) U*` as a dense operator.
    pub fn apply_scalar_function(&self, f: impl Fn(f64) -> f64) -> OperatorMatrix {
        let n = self.values.len();
        let mut scaled = Mat::<C64>::zeros(n, n);
        for j in 0..n {
            let fj = C64::new(f(self.values[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] = self.u[(i, j)] * fj;
            }
        }
        let m = scaled * self.u.adjoint();
        OperatorMatrix::from_dense(self.basis, m)
    }

    /// `U f(Λ) U* x` for a complex-valued spectral function (e.g. e^{-itλ}).
    pub fn apply_to_state(&self, f: impl Fn(f64) -> C64, x: &[C64]) -> Vec<C64> {
        let n = self.values.len();
        assert_eq!(x.len(), n);
        // y = U* x
        let mut y = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                acc += self.u[(i, j)].conj() * x[i];
            }
            y[j] = acc * f(self.values[j]);
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            let yj = y[j];
            if yj.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                out[i] += self.u[(i, j)] * yj;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn banded_matvec_matches_dense() {
        let basis = HermiteBasis::new(6);
        let mut bands = BTreeMap::new();
        bands.insert(0i64, (0..6).map(|k| c(k as f64, 0.0)).collect::<Vec<_>>());
        bands.insert(2i64, (0..4).map(|k| c(0.5, 0.1 * k as f64)).collect::<Vec<_>>());
        bands.insert(-2i64, (0..4).map(|k| c(0.5, -0.1 * k as f64)).collect::<Vec<_>>());
        let m = OperatorMatrix::from_bands(basis, bands).unwrap();
        assert!(m.is_hermitian());
        let x: Vec<C64> = (0..6).map(|k| c(1.0 / (k as f64 + 1.0), 0.2)).collect();
        let mut y1 = vec![c(0.0, 0.0); 6];
        m.matvec(&x, &mut y1);
        let d = m.to_dense();
        for i in 0..6 {
            let mut acc = c(0.0, 0.0);
            for j in 0..6 {
                acc += d[(i, j)] * x[j];
            }
            assert_abs_diff_eq!((acc - y1[i]).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn commutator_of_matrix_with_itself_vanishes() {
        let basis = HermiteBasis::new(5);
        let h0 = OperatorMatrix::h0(basis);
        let comm = h0.commutator_i(&h0);
        assert!(comm.max_abs() < 1e-14);
    }

    #[test]
    fn eigendecomposition_reconstructs_operator() {
        let basis = HermiteBasis::new(8);
        let mut bands = BTreeMap::new();
        bands.insert(0i64, (0..8).map(|k| c((k as f64) * 0.3, 0.0)).collect::<Vec<_>>());
        bands.insert(1i64, (0..7).map(|_| c(0.2, 0.05)).collect::<Vec<_>>());
        bands.insert(-1i64, (0..7).map(|_| c(0.2, -0.05)).collect::<Vec<_>>());
        let m = OperatorMatrix::from_bands(basis, bands).unwrap();
        let eig = m.eigendecompose().unwrap();
        let rebuilt = eig.apply_scalar_function(|l| l);
        assert!(m.max_abs_diff_interior(&rebuilt) < 1e-12);
    }

    #[test]
    fn apply_to_state_matches_matrix_route() {
        let basis = HermiteBasis::new(6);
        let h0 = OperatorMatrix::h0(basis);
        let eig = h0.eigendecompose().unwrap();
        let x: Vec<C64> = (0..6).map(|k| c(0.3 * k as f64, -0.1)).collect();
        let y = eig.apply_to_state(|l| C64::new(0.0, -l).exp(), &x);
        for (k, yk) in y.iter().enumerate() {
            let lam = k as f64 + 0.5;
            let expect = C64::new(0.0, -lam).exp() * x[k];
            assert_abs_diff_eq!((yk - expect).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
