//! Dense complex linear algebra over registers of at most six qubits.
//!
//! Matrices are stored row-major. Qubit ordering follows ket notation: the
//! leftmost label of a [`QubitRegister`] is the most significant bit of a
//! basis index, so `|q_A q_B q_C q_D⟩` has index `8·q_A + 4·q_B + 2·q_C + q_D`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the kernels are sized for (64×64 operators).
pub const MAX_QUBITS: usize = 6;
/// Maximum `|M - M†|` entry accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry.
pub const EIGEN_NEG_TOL: f64 = 1e-12;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Allowed deviation of a state vector norm from one.
pub const NORM_TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Shape { rows, cols, len: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| real(x)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = real(d);
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(real(k))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Checks Hermiticity, unit trace and positivity.
    pub fn check_density(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotDensity(format!("non-square {}x{}", self.rows, self.cols)));
        }
        let dev = self.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NotDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(self)?[0];
        if min < -EIGEN_NEG_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension { expected: self.cols, found: v.dim() });
        }
        let amps = (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)] * v.amps[c]).sum()).collect();
        Ok(StateVector { amps })
    }

    /// `self · rho · self†`
    pub fn conjugate(&self, rho: &Self) -> Self {
        &(self * rho) * &self.dagger()
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A pure state (or unnormalized amplitude vector) over a qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self { amps: amps.iter().map(|&x| real(x)).collect() }
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(real(1.0 / n)))
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { amps: self.amps.iter().map(|z| z * k).collect() }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// `|self⟩⟨self|`
    pub fn density(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |r, c| self.amps[r] * self.amps[c].conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Ordered, uniquely labelled qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitRegister {
    labels: Vec<String>,
}

impl QubitRegister {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(Error::RegisterSize { got: labels.len(), max: MAX_QUBITS });
        }
        let mut out: Vec<String> = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            if out.iter().any(|x| x == l) {
                return Err(Error::DuplicateLabel(l.to_owned()));
            }
            out.push(l.to_owned());
        }
        Ok(Self { labels: out })
    }

    /// Register whose labels are the characters of `labels`, e.g. `"ABCD"`.
    pub fn from_chars(labels: &str) -> Result<Self> {
        let v: Vec<String> = labels.chars().map(String::from).collect();
        Self::new(&v)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Sorted register positions of `labels`.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut pos = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if pos.contains(&p) {
                return Err(Error::DuplicateLabel(l.as_ref().to_owned()));
            }
            pos.push(p);
        }
        pos.sort_unstable();
        Ok(pos)
    }

    /// Sub-register keeping the given labels in register order.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let pos = self.positions(labels)?;
        Ok(Self { labels: pos.into_iter().map(|p| self.labels[p].clone()).collect() })
    }

    /// Positions not contained in `pos`.
    pub(crate) fn complement(&self, pos: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|p| !pos.contains(p)).collect()
    }

    pub(crate) fn check_square(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::Dimension { expected: self.dim(), found: m.cols() });
        }
        if m.rows() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: m.rows() });
        }
        Ok(())
    }
}

/// Splits register indices into a subset of qubits and its complement.
///
/// `compose(sub, rest)` rebuilds the full index from the sub-index over
/// `positions` and the sub-index over the remaining qubits, both in register
/// order.
#[derive(Clone, Debug)]
pub(crate) struct IndexSplit {
    n: usize,
    positions: Vec<usize>,
    rest: Vec<usize>,
}

impl IndexSplit {
    pub(crate) fn new(n: usize, positions: Vec<usize>) -> Self {
        let rest = (0..n).filter(|p| !positions.contains(p)).collect();
        Self { n, positions, rest }
    }

    pub(crate) fn sub_dim(&self) -> usize {
        1 << self.positions.len()
    }

    pub(crate) fn rest_dim(&self) -> usize {
        1 << self.rest.len()
    }

    fn scatter(&self, value: usize, positions: &[usize]) -> usize {
        let k = positions.len();
        positions.iter().enumerate().fold(0, |acc, (i, &p)| {
            let bit = (value >> (k - 1 - i)) & 1;
            acc | (bit << (self.n - 1 - p))
        })
    }

    pub(crate) fn compose(&self, sub: usize, rest: usize) -> usize {
        self.scatter(sub, &self.positions) | self.scatter(rest, &self.rest)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Reduced matrix over the `keep` qubits (in register order).
pub fn partial_trace<S: AsRef<str>>(m: &ComplexMatrix, reg: &QubitRegister, keep: &[S]) -> Result<ComplexMatrix> {
    reg.check_square(m)?;
    let split = IndexSplit::new(reg.len(), reg.positions(keep)?);
    let kd = split.sub_dim();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for i in 0..kd {
        for j in 0..kd {
            out[(i, j)] = (0..split.rest_dim()).map(|t| m[(split.compose(i, t), split.compose(j, t))]).sum();
        }
    }
    Ok(out)
}

/// Transposes the indices of the `on` qubits only.
pub fn partial_transpose<S: AsRef<str>>(m: &ComplexMatrix, reg: &QubitRegister, on: &[S]) -> Result<ComplexMatrix> {
    reg.check_square(m)?;
    let pos = reg.positions(on)?;
    let n = reg.len();
    let mask = pos.iter().fold(0usize, |acc, &p| acc | (1 << (n - 1 - p)));
    Ok(ComplexMatrix::from_fn(m.rows, m.cols, |i, j| {
        let ii = (i & !mask) | (j & mask);
        let jj = (j & !mask) | (i & mask);
        m[(ii, jj)]
    }))
}

/// Eigenvalues (ascending) with matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let lambda = ComplexMatrix::from_diag(&self.values);
        &(v * &lambda) * &v.dagger()
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Dimension { expected: m.rows, found: m.cols });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian(dev));
    }
    // Symmetrize so round-off below the tolerance cannot leak into the solver.
    let sym = (&(m + &m.dagger())).scale_real(0.5);
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let n = m.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let svd = SVD::new(m.to_nalgebra(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Pauli operator `σ_k` for `k` in 1..=3; `k = 0` gives the identity.
pub fn pauli(k: usize) -> ComplexMatrix {
    let e = match k {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, c64(0.0, -1.0), c64(0.0, 1.0), ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix { rows: 2, cols: 2, data: e.to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bell_phi_plus() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(&[h, 0.0, 0.0, h]).density()
    }

    fn ab() -> QubitRegister {
        QubitRegister::from_chars("AB").unwrap()
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| ComplexMatrix::new(n, n, v.into_iter().map(|(a, b)| c64(a, b)).collect()).unwrap())
    }

    fn arb_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        arb_matrix(n).prop_map(|m| (&m + &m.dagger()).scale_real(0.5))
    }

    #[test]
    fn shape_is_checked() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![ZERO; 3]), Err(Error::Shape { .. })));
    }

    #[test]
    fn kron_of_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_places_basis_projectors() {
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_of_schmidt_pairs_matches_expansion() {
        let (p0, q0) = (0.3f64, 0.4f64);
        let (p1, q1) = (1.0 - p0, 1.0 - q0);
        let ab = StateVector::from_real(&[p0.sqrt(), 0.0, 0.0, p1.sqrt()]);
        let cd = StateVector::from_real(&[q0.sqrt(), 0.0, 0.0, q1.sqrt()]);
        let full = ab.kron(&cd);
        // |0000⟩, |0011⟩, |1100⟩, |1111⟩
        let mut expected = vec![0.0; 16];
        expected[0b0000] = (p0 * q0).sqrt();
        expected[0b0011] = (p0 * q1).sqrt();
        expected[0b1100] = (p1 * q0).sqrt();
        expected[0b1111] = (p1 * q1).sqrt();
        assert!(full.max_abs_diff(&StateVector::from_real(&expected)) < 1e-15);
        // Same through the matrix route on column vectors.
        let col = |v: &StateVector| ComplexMatrix::new(v.dim(), 1, v.amps().to_vec()).unwrap();
        let via_matrix = kron(&col(&ab), &col(&cd));
        assert_eq!(via_matrix.data(), full.amps());
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let r = partial_trace(&bell_phi_plus(), &ab(), &["A"]).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_of_schmidt_state() {
        let v = StateVector::from_real(&[0.3f64.sqrt(), 0.0, 0.0, 0.7f64.sqrt()]);
        let r = partial_trace(&v.density(), &ab(), &["A"]).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[0.3, 0.7])) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let rx = ComplexMatrix::new(2, 2, vec![real(0.25), c64(0.1, 0.2), c64(0.1, -0.2), real(0.75)]).unwrap();
        let ry = ComplexMatrix::from_diag(&[0.6, 0.4]);
        let prod = kron(&rx, &ry);
        assert!(partial_trace(&prod, &ab(), &["A"]).unwrap().max_abs_diff(&rx) < 1e-15);
        assert!(partial_trace(&prod, &ab(), &["B"]).unwrap().max_abs_diff(&ry) < 1e-15);
    }

    #[test]
    fn partial_trace_keeps_middle_qubits() {
        // |0⟩_A |1⟩_B |0⟩_C: keeping B alone yields |1⟩⟨1|.
        let reg = QubitRegister::from_chars("ABC").unwrap();
        let v = StateVector::basis(8, 0b010);
        let r = partial_trace(&v.density(), &reg, &["B"]).unwrap();
        assert_eq!(r, ComplexMatrix::from_diag(&[0.0, 1.0]));
    }

    #[test]
    fn unknown_label_is_rejected() {
        let err = partial_trace(&bell_phi_plus(), &ab(), &["Z"]).unwrap_err();
        assert_eq!(err, Error::UnknownLabel("Z".into()));
        assert!(partial_transpose(&bell_phi_plus(), &ab(), &["Q"]).is_err());
    }

    #[test]
    fn register_rejects_duplicates_and_oversize() {
        assert!(matches!(QubitRegister::from_chars("AA"), Err(Error::DuplicateLabel(_))));
        assert!(matches!(QubitRegister::from_chars("ABCDEFG"), Err(Error::RegisterSize { .. })));
        assert_eq!(QubitRegister::from_chars("ABCDEF").unwrap().dim(), 64);
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let reg = QubitRegister::from_chars("ABC").unwrap();
        assert!(matches!(partial_trace(&bell_phi_plus(), &reg, &["A"]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn partial_transpose_leaves_diagonal_alone() {
        let d = ComplexMatrix::from_diag(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&d, &ab(), &["B"]).unwrap(), d);
    }

    #[test]
    fn partial_transpose_follows_index_swap_rule() {
        // ⟨i,j|ρ^{T_B}|k,l⟩ = ⟨i,l|ρ|k,j⟩
        let m = ComplexMatrix::from_fn(4, 4, |r, c| c64(r as f64, c as f64));
        let pt = partial_transpose(&m, &ab(), &["B"]).unwrap();
        for (i, j, k, l) in itertools(2) {
            assert_eq!(pt[(2 * i + j, 2 * k + l)], m[(2 * i + l, 2 * k + j)]);
        }
        let pa = partial_transpose(&m, &ab(), &["A"]).unwrap();
        for (i, j, k, l) in itertools(2) {
            assert_eq!(pa[(2 * i + j, 2 * k + l)], m[(2 * k + j, 2 * i + l)]);
        }
    }

    fn itertools(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        (0..d).flat_map(move |i| (0..d).flat_map(move |j| (0..d).flat_map(move |k| (0..d).map(move |l| (i, j, k, l)))))
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell_phi_plus(), &ab(), &["B"]).unwrap();
        let ev = hermitian_eigenvalues(&pt).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-14);
        for e in &ev[1..] {
            assert!((e - 0.5).abs() < 1e-14);
        }
        assert!((trace_norm(&pt) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_of_maximally_mixed() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        assert!((trace_norm(&m) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_values_are_absolute_and_descending() {
        let s = singular_values(&ComplexMatrix::from_diag(&[3.0, -4.0]));
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn density_check() {
        assert!(bell_phi_plus().check_density().is_ok());
        assert!(ComplexMatrix::from_diag(&[1.2, -0.2]).check_density().is_err());
        assert!(ComplexMatrix::from_diag(&[0.5, 0.6]).check_density().is_err());
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in arb_matrix(2), b in arb_matrix(2), c in arb_matrix(2)) {
            let left = kron(&kron(&a, &b), &c);
            let right = kron(&a, &kron(&b, &c));
            prop_assert!(left.max_abs_diff(&right) <= 1e-14);
        }

        #[test]
        fn partial_trace_of_kron_scales_by_trace(a in arb_matrix(4), b in arb_matrix(2)) {
            let reg = QubitRegister::from_chars("ABC").unwrap();
            let r = partial_trace(&kron(&a, &b), &reg, &["A", "B"]).unwrap();
            prop_assert!(r.max_abs_diff(&a.scale(b.trace())) <= 1e-12);
        }

        #[test]
        fn partial_transpose_is_involution(m in arb_hermitian(8)) {
            let reg = QubitRegister::from_chars("ABC").unwrap();
            let once = partial_transpose(&m, &reg, &["A", "C"]).unwrap();
            let twice = partial_transpose(&once, &reg, &["A", "C"]).unwrap();
            prop_assert_eq!(twice, m);
        }

        #[test]
        fn trace_norm_bounds_trace(m in arb_matrix(4)) {
            prop_assert!(trace_norm(&m) + 1e-12 >= m.trace().norm());
        }

        #[test]
        fn trace_norm_equals_trace_for_psd(m in arb_matrix(4)) {
            let psd = &m * &m.dagger();
            prop_assert!((trace_norm(&psd) - psd.trace().re).abs() <= 1e-12);
        }

        #[test]
        fn eigen_reconstructs(m in arb_hermitian(8)) {
            let eig = hermitian_eigen(&m).unwrap();
            prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
        }
    }
}
