//! Floating-point ground truth: all complex roots by Aberth–Ehrlich
//! simultaneous iteration.
//!
//! Used by tests, dominance certificates and the `verify` command. No exact
//! engine reads anything computed here.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ReplacementMatrix;
use crate::numeric::bigint_to_f64;
use crate::poly::IntPolynomial;

const MAX_SWEEPS: usize = 1000;
/// Rotation of the initial roots-of-unity guesses, in radians (1/√2).
const START_ANGLE: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Roots closer than this (relative) are reported as one multiple root.
const CLUSTER_TOL: f64 = 1e-6;
const REAL_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRoot {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl OracleRoot {
    pub fn is_real(&self) -> bool {
        self.value.im.abs() <= REAL_TOL * self.value.norm().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatRootSet {
    /// Distinct roots, sorted by real part then imaginary part.
    pub roots: Vec<OracleRoot>,
    /// Largest `|p(z)| / scale(z)` over the raw iterates.
    pub max_residual: f64,
    pub sweeps: usize,
}

impl FloatRootSet {
    /// Every root repeated by multiplicity.
    pub fn all(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|r| r.is_real())
            .map(|r| r.value.re)
            .collect()
    }

    /// Real root of largest modulus, if the largest modulus is attained by
    /// a real root.
    pub fn dominant_real_root(&self) -> Option<f64> {
        let top = self
            .roots
            .iter()
            .max_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))?;
        top.is_real().then_some(top.value.re)
    }
}

/// Residual scale `Σ|a_i| · max(1, |z|)^m`.
pub fn residual_scale(p: &IntPolynomial, z: Complex64) -> f64 {
    let sum: f64 = p.coeffs().iter().map(|c| bigint_to_f64(c).abs()).sum();
    sum * z.norm().max(1.0).powi(p.degree() as i32)
}

/// All `m` complex roots, deterministic: the start points are the `m`-th
/// roots of unity scaled by the Cauchy bound and rotated by [`START_ANGLE`].
pub fn all_roots_float(p: &IntPolynomial) -> Result<FloatRootSet> {
    let a = p.coeffs_f64();
    let m = p.degree();
    let lead = a[0];
    let monic: Vec<f64> = a.iter().map(|c| c / lead).collect();
    let deriv: Vec<f64> = (0..m).map(|i| monic[i] * (m - i) as f64).collect();

    let bound = 1.0 + monic[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + START_ANGLE;
            Complex64::from_polar(bound, angle)
        })
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step: f64 = 0.0;
        for k in 0..m {
            let zk = z[k];
            let pk = horner(&monic, zk);
            if pk == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pk / horner(&deriv, zk);
            let repulsion: Complex64 = (0..m).filter(|&j| j != k).map(|j| (zk - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] = zk - step;
                max_step = max_step.max(step.norm() / zk.norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let max_residual = z
        .iter()
        .map(|&zk| p.eval_complex(zk).norm() / residual_scale(p, zk))
        .fold(0.0, f64::max);
    if max_residual.is_nan() || max_residual > 1e-9 {
        return Err(Error::OracleNonConvergence {
            sweeps,
            residual: max_residual,
        });
    }

    Ok(FloatRootSet {
        roots: cluster(z),
        max_residual,
        sweeps,
    })
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn cluster(mut z: Vec<Complex64>) -> Vec<OracleRoot> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    'next: for zk in z {
        for (centre, count) in &mut out {
            if (*centre - zk).norm() <= CLUSTER_TOL * zk.norm().max(1.0) {
                *centre = (*centre * *count as f64 + zk) / (*count + 1) as f64;
                *count += 1;
                continue 'next;
            }
        }
        out.push((zk, 1));
    }
    out.into_iter()
        .map(|(value, multiplicity)| {
            let value = if multiplicity > 1 && value.im.abs() <= CLUSTER_TOL * value.norm().max(1.0)
            {
                Complex64::new(value.re, 0.0)
            } else {
                value
            };
            OracleRoot {
                value,
                multiplicity,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dominance {
    /// The top eigenvalue modulus is strictly largest. `gap` is
    /// `|λ_1| / |λ_2| − 1` (infinite when `m = 1` or `λ_2 = 0`) and `root` is
    /// the root of `p` owning `λ_1`.
    Unique {
        gap: f64,
        root: Complex64,
        eigenvalue: Complex64,
    },
    Tied,
}

impl Dominance {
    pub fn gap(&self) -> Option<f64> {
        match self {
            Dominance::Unique { gap, .. } => Some(*gap),
            Dominance::Tied => None,
        }
    }
}

/// Eigenvalue moduli of `matrix` predicted from the roots of `p`
/// (`α + β·a_0·r_i`), compared at the top.
pub fn dominance_gap(p: &IntPolynomial, matrix: &ReplacementMatrix) -> Result<Dominance> {
    let roots = all_roots_float(p)?;
    Ok(dominance_from_roots(p, &roots, matrix))
}

pub fn dominance_from_roots(
    p: &IntPolynomial,
    roots: &FloatRootSet,
    matrix: &ReplacementMatrix,
) -> Dominance {
    let (alpha, beta) = matrix.source().shift();
    let a0 = bigint_to_f64(p.leading());
    let mut eig: Vec<(f64, Complex64, Complex64)> = roots
        .all()
        .into_iter()
        .map(|r| {
            let lambda = alpha as f64 + beta as f64 * a0 * r;
            (lambda.norm(), r, lambda)
        })
        .collect();
    eig.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (top, root, eigenvalue) = eig[0];
    let Some(&(second, _, _)) = eig.get(1) else {
        return Dominance::Unique {
            gap: f64::INFINITY,
            root,
            eigenvalue,
        };
    };
    if top - second <= TIE_TOL * top.max(1.0) {
        return Dominance::Tied;
    }
    let gap = if second == 0.0 {
        f64::INFINITY
    } else {
        top / second - 1.0
    };
    Dominance::Unique {
        gap,
        root,
        eigenvalue,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn quadratic_roots() {
        let set = all_roots_float(&poly(&[2, 2, -1])).unwrap();
        let s3 = 3f64.sqrt();
        let real = set.real_roots();
        assert_eq!(real.len(), 2);
        assert!((real[0] - (-1.0 - s3) / 2.0).abs() < 1e-12);
        assert!((real[1] - (-1.0 + s3) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn cube_roots_of_two() {
        let set = all_roots_float(&poly(&[1, 0, 0, -2])).unwrap();
        let cbrt2 = 2f64.cbrt();
        assert_eq!(set.roots.len(), 3);
        assert_eq!(set.real_roots().len(), 1);
        assert!((set.real_roots()[0] - cbrt2).abs() < 1e-12);
        for r in &set.roots {
            assert!((r.value.norm() - cbrt2).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_is_flagged() {
        let set = all_roots_float(&poly(&[1, -2, 1])).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_eq!(set.roots[0].multiplicity, 2);
        assert!(set.roots[0].is_real());
        assert!((set.roots[0].value.re - 1.0).abs() < 1e-7);
    }

    #[test]
    fn vieta_self_check() {
        let p = poly(&[3, -7, 0, 5, 2, -9]);
        let set = all_roots_float(&p).unwrap();
        let all = set.all();
        let sum: Complex64 = all.iter().sum();
        let prod: Complex64 = all.iter().product();
        assert!((sum.re - 7.0 / 3.0).abs() < 1e-8 * (7.0 / 3.0));
        assert!(sum.im.abs() < 1e-8);
        // (−1)^5 · a_5 / a_0 = 9/3
        assert!((prod.re - 3.0).abs() < 1e-8 * 3.0);
    }

    #[test]
    fn dominance() {
        let p = poly(&[2, 2, -1]);
        let r = ReplacementMatrix::from_polynomial(&p);
        let d = dominance_gap(&p, &r).unwrap();
        let s3 = 3f64.sqrt();
        let expected = (s3 + 1.0) / (s3 - 1.0) - 1.0;
        assert!((d.gap().unwrap() - expected).abs() < 1e-9);

        let p = poly(&[1, 0, 0, -2]);
        let r = ReplacementMatrix::from_polynomial(&p);
        assert_eq!(dominance_gap(&p, &r).unwrap(), Dominance::Tied);
        match dominance_gap(&p, &r.shifted(1, 1).unwrap()).unwrap() {
            Dominance::Unique {
                gap,
                root,
                eigenvalue,
            } => {
                assert!((eigenvalue.norm() - 2.259921).abs() < 1e-6);
                assert!((gap - (2.259921 / 1.152158 - 1.0)).abs() < 1e-5);
                assert!((root.re - 2f64.cbrt()).abs() < 1e-12);
            }
            Dominance::Tied => panic!("shift should break the tie"),
        }
    }
}
