//! Replacement matrices, spectral shifts and exact characteristic polynomials.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Dense square matrix of big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row.iter().cloned().map(Into::into));
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self[(i, i)]).sum()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// `self + c·I`
    pub fn add_scalar_identity(mut self, c: &BigInt) -> IntMatrix {
        for i in 0..self.n {
            self[(i, i)] += c;
        }
        self
    }

    pub fn scale(mut self, c: &BigInt) -> IntMatrix {
        for x in &mut self.data {
            *x *= c;
        }
        self
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows()
            .map(|r| r.iter().map(crate::numeric::bigint_to_f64).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Where a replacement matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixSource {
    Plain,
    Shifted { alpha: i64, beta: i64 },
}

impl MatrixSource {
    /// `(α, β)` such that the matrix is `αI + βR`; `(0, 1)` for plain.
    pub fn shift(&self) -> (i64, i64) {
        match *self {
            MatrixSource::Plain => (0, 1),
            MatrixSource::Shifted { alpha, beta } => (alpha, beta),
        }
    }
}

/// The iteration operator `R` (or `αI + βR`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReplacementMatrix {
    entries: IntMatrix,
    source: MatrixSource,
}

impl ReplacementMatrix {
    /// First row `(-a_1 … -a_m)`, `a_0` on the subdiagonal, zero elsewhere.
    /// Its eigenvalues are `a_0·r_i` with eigenvectors `(r_i^(m-1), …, r_i, 1)`.
    pub fn from_polynomial(p: &IntPolynomial) -> Self {
        let m = p.degree();
        let mut entries = IntMatrix::zeros(m);
        for j in 0..m {
            entries[(0, j)] = -p.coeff(j + 1);
        }
        for i in 1..m {
            entries[(i, i - 1)] = p.leading().clone();
        }
        Self {
            entries,
            source: MatrixSource::Plain,
        }
    }

    /// Wraps an arbitrary integer matrix as a plain operator.
    pub fn from_matrix(entries: IntMatrix) -> Self {
        Self {
            entries,
            source: MatrixSource::Plain,
        }
    }

    /// `αI + βR`. Shifting keeps every eigenvector and maps the eigenvalue
    /// `λ` to `α + βλ`.
    pub fn shifted(&self, alpha: i64, beta: i64) -> Result<Self> {
        if beta == 0 {
            return Err(Error::ZeroBeta);
        }
        if let MatrixSource::Shifted { alpha, beta } = self.source {
            return Err(Error::DoubleShift { alpha, beta });
        }
        let entries = self
            .entries
            .clone()
            .scale(&BigInt::from(beta))
            .add_scalar_identity(&BigInt::from(alpha));
        Ok(Self {
            entries,
            source: MatrixSource::Shifted { alpha, beta },
        })
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn source(&self) -> MatrixSource {
        self.source
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.entries.mul_vec(v)
    }

    /// Monic characteristic polynomial `det(λI - M)`.
    pub fn scaled_char_coeffs(&self) -> ScaledCharCoeffs {
        ScaledCharCoeffs::of(&self.entries)
    }

    /// The characteristic polynomial evaluated at the matrix itself.
    pub fn cayley_hamilton_residual(&self) -> IntMatrix {
        self.scaled_char_coeffs().eval_at(&self.entries)
    }
}

impl fmt::Display for ReplacementMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.fmt(f)
    }
}

/// `(1, c_1, …, c_m)` with `det(λI - M) = λ^m + c_1 λ^(m-1) + … + c_m`.
///
/// For a plain replacement matrix this is `(1, a_1, a_0 a_2, …, a_0^(m-1) a_m)`,
/// the coefficient set of the integer recurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledCharCoeffs(Vec<BigInt>);

impl ScaledCharCoeffs {
    /// Faddeev–LeVerrier. Every division by `k` is exact over the integers.
    pub fn of(a: &IntMatrix) -> Self {
        let n = a.dim();
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(BigInt::one());
        let mut aux = IntMatrix::identity(n);
        for k in 1..=n {
            let am = a.mul(&aux);
            let c = -am.trace() / BigInt::from(k);
            debug_assert!((am.trace() % BigInt::from(k)).is_zero());
            if k < n {
                aux = am.add_scalar_identity(&c);
            }
            coeffs.push(c);
        }
        Self(coeffs)
    }

    /// Panics unless the list is monic.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(
            coeffs.first().is_some_and(One::is_one),
            "coefficients must be monic"
        );
        Self(coeffs)
    }

    /// `(1, a_1, a_0 a_2, …, a_0^(m-1) a_m)` read off the polynomial directly.
    pub fn from_polynomial(p: &IntPolynomial) -> Self {
        let mut coeffs = vec![BigInt::one()];
        let mut pow = BigInt::one();
        for i in 1..=p.degree() {
            coeffs.push(&pow * p.coeff(i));
            pow *= p.leading();
        }
        Self(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    /// `c_k` for `k = 1..=m`.
    pub fn tail(&self) -> &[BigInt] {
        &self.0[1..]
    }

    pub fn eval_at(&self, m: &IntMatrix) -> IntMatrix {
        let mut acc = IntMatrix::identity(m.dim());
        for c in self.tail() {
            acc = m.mul(&acc).add_scalar_identity(c);
        }
        acc
    }
}
