//! Dominant-root driver and the integer shift search for other real roots.
//!
//! Under `R' = αI + βR` the eigenvector `(r^(m−1), …, r, 1)` of each root is
//! kept, so the ratio read off a converged run of `R'` is a root of `p`
//! itself, whichever eigenvalue `α + β·a_0·r` became dominant.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::convergence::{Status, StoppingRule};
use crate::error::Result;
use crate::matrix::ReplacementMatrix;
use crate::oracle::{self, Dominance};
use crate::poly::IntPolynomial;
use crate::recurrence::{self, default_seed, RootEstimate};
use crate::rewrite::{self, RewriteMode, Word};

pub const DEDUP_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const CANDIDATE_BUDGET: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    RewriteCount,
    Recurrence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub rule: StoppingRule,
    pub alpha_max: i64,
    pub beta_max: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            rule: StoppingRule::default().with_budget(CANDIDATE_BUDGET),
            alpha_max: 3,
            beta_max: 1,
        }
    }
}

/// `m = 1` has the single root `−a_1 / a_0`.
fn linear_root(p: &IntPolynomial) -> RootEstimate {
    let root = BigRational::new(-p.coeff(1), p.leading().clone());
    RootEstimate::exact(root, Status::Converged).with_residual(p)
}

/// Runs `engine` on the plain replacement matrix from the default start.
pub fn find_dominant_real_root(
    p: &IntPolynomial,
    engine: Engine,
    rule: &StoppingRule,
) -> Result<RootEstimate> {
    if p.degree() == 1 {
        return Ok(linear_root(p));
    }
    let matrix = ReplacementMatrix::from_polynomial(p);
    run_engine(p, &matrix, engine, rule)
}

pub fn run_engine(
    p: &IntPolynomial,
    matrix: &ReplacementMatrix,
    engine: Engine,
    rule: &StoppingRule,
) -> Result<RootEstimate> {
    let estimate = match engine {
        Engine::Recurrence => recurrence::run(matrix, &default_seed(matrix.dim()), rule)?.estimate,
        Engine::RewriteCount => {
            rewrite::run(matrix, &Word::letter(0), rule, RewriteMode::Counts)?.estimate
        }
    };
    Ok(estimate.with_residual(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCandidate {
    pub alpha: i64,
    pub beta: i64,
    pub estimate: RootEstimate,
    /// Converged and passed the residual check.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoundRoot {
    pub value: f64,
    /// Exact estimate from the converged run with the most iterations.
    pub witness: BigRational,
    /// First shift in search order that found this root.
    pub alpha: i64,
    pub beta: i64,
    /// Shift and length of the run that supplied `witness`.
    pub witness_shift: (i64, i64),
    pub iterations: usize,
    /// How many shift candidates converged to this root.
    pub discoveries: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Sorted by value, pairwise further apart than [`DEDUP_TOL`].
    pub roots: Vec<FoundRoot>,
    /// Every candidate tried, in search order.
    pub candidates: Vec<ShiftCandidate>,
}

/// `(α, β)` pairs in search order: increasing `|α|`, then `α`, then `β`.
pub fn search_order(alpha_max: i64, beta_max: i64) -> Vec<(i64, i64)> {
    let mut alphas: Vec<i64> = (-alpha_max..=alpha_max).collect();
    alphas.sort_by_key(|&a| (a.abs(), a));
    alphas
        .into_iter()
        .flat_map(|a| (1..=beta_max).map(move |b| (a, b)))
        .collect()
}

/// Tries every shift in `[−α_max, α_max] × [1, β_max]` with the recurrence
/// engine and collects the verified real roots.
pub fn find_real_roots(p: &IntPolynomial, config: &SearchConfig) -> Result<RootSet> {
    if p.degree() == 1 {
        let est = linear_root(p);
        let witness = est.value.clone().expect("linear root is exact");
        let root = FoundRoot {
            value: est.float.unwrap_or(f64::NAN),
            witness,
            alpha: 0,
            beta: 1,
            witness_shift: (0, 1),
            iterations: 0,
            discoveries: 1,
        };
        return Ok(RootSet {
            roots: vec![root],
            candidates: vec![ShiftCandidate {
                alpha: 0,
                beta: 1,
                estimate: est,
                accepted: true,
            }],
        });
    }

    let plain = ReplacementMatrix::from_polynomial(p);
    let residual_bound = RESIDUAL_TOL * p.max_abs_coeff();
    let candidates = search_order(config.alpha_max, config.beta_max.max(1))
        .into_par_iter()
        .map(|(alpha, beta)| -> Result<ShiftCandidate> {
            let matrix = plain.shifted(alpha, beta)?;
            let estimate = run_engine(p, &matrix, Engine::Recurrence, &config.rule)?;
            let accepted =
                estimate.is_converged() && estimate.residual.is_some_and(|r| r <= residual_bound);
            Ok(ShiftCandidate {
                alpha,
                beta,
                estimate,
                accepted,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut roots: Vec<FoundRoot> = Vec::new();
    for c in candidates.iter().filter(|c| c.accepted) {
        let (Some(value), Some(witness)) = (c.estimate.float, c.estimate.value.clone()) else {
            continue;
        };
        match roots
            .iter_mut()
            .find(|r| (r.value - value).abs() <= DEDUP_TOL * value.abs().max(1.0))
        {
            Some(found) => {
                found.discoveries += 1;
                if c.estimate.iterations > found.iterations {
                    found.value = value;
                    found.witness = witness;
                    found.witness_shift = (c.alpha, c.beta);
                    found.iterations = c.estimate.iterations;
                }
            }
            None => roots.push(FoundRoot {
                value,
                witness,
                alpha: c.alpha,
                beta: c.beta,
                witness_shift: (c.alpha, c.beta),
                iterations: c.estimate.iterations,
                discoveries: 1,
            }),
        }
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(RootSet { roots, candidates })
}

/// Oracle cross-check of one converged shift run.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub alpha: i64,
    pub beta: i64,
    /// The oracle's nearest real root.
    pub oracle_root: Option<f64>,
    pub error: Option<f64>,
    /// Relative gap between the top two shifted eigenvalue moduli, if the
    /// reported root owns the strictly dominant one.
    pub dominance_gap: Option<f64>,
    /// Converged although the oracle does not see this root as dominant by
    /// at least 1%.
    pub lucky: bool,
}

/// Checks each accepted candidate of `set` against the float oracle.
pub fn certify(p: &IntPolynomial, set: &RootSet) -> Result<Vec<Certificate>> {
    let roots = oracle::all_roots_float(p)?;
    let real = roots.real_roots();
    let plain = ReplacementMatrix::from_polynomial(p);
    let mut out = Vec::new();
    for c in set.candidates.iter().filter(|c| c.accepted) {
        let Some(value) = c.estimate.float else {
            continue;
        };
        let nearest = real
            .iter()
            .copied()
            .min_by(|a, b| (a - value).abs().total_cmp(&(b - value).abs()));
        let dominance = if p.degree() == 1 {
            Dominance::Unique {
                gap: f64::INFINITY,
                root: num_complex::Complex64::new(value, 0.0),
                eigenvalue: num_complex::Complex64::new(0.0, 0.0),
            }
        } else {
            oracle::dominance_from_roots(p, &roots, &plain.shifted(c.alpha, c.beta)?)
        };
        let gap = match dominance {
            Dominance::Unique { gap, root, .. }
                if (root.re - value).abs() <= 1e-6 * value.abs().max(1.0) =>
            {
                Some(gap)
            }
            _ => None,
        };
        out.push(Certificate {
            alpha: c.alpha,
            beta: c.beta,
            oracle_root: nearest,
            error: nearest.map(|r| (r - value).abs()),
            dominance_gap: gap,
            lucky: !gap.is_some_and(|g| g >= 0.01),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn order_is_small_shifts_first() {
        assert_eq!(
            search_order(2, 2),
            vec![
                (0, 1),
                (0, 2),
                (-1, 1),
                (-1, 2),
                (1, 1),
                (1, 2),
                (-2, 1),
                (-2, 2),
                (2, 1),
                (2, 2)
            ]
        );
    }

    #[test]
    fn dominant_root_of_worked_quadratic() {
        let p = poly(&[2, 2, -1]);
        for engine in [Engine::Recurrence, Engine::RewriteCount] {
            let est = find_dominant_real_root(&p, engine, &StoppingRule::default()).unwrap();
            assert_eq!(est.status, Status::Converged);
            assert!((est.float.unwrap() + 1.3660254037844386).abs() < 1e-9);
            assert!(est.residual.unwrap() < 1e-9);
        }
    }

    #[test]
    fn tied_cubic_oscillates() {
        let p = poly(&[1, 0, 0, -2]);
        let est =
            find_dominant_real_root(&p, Engine::Recurrence, &StoppingRule::default()).unwrap();
        assert_eq!(est.status, Status::Oscillating);
    }

    #[test]
    fn linear_short_circuit() {
        let est = find_dominant_real_root(
            &poly(&[1, -2]),
            Engine::Recurrence,
            &StoppingRule::default(),
        )
        .unwrap();
        assert_eq!(est.value, Some(BigRational::from_integer(2.into())));
        assert_eq!(est.float, Some(2.0));
        assert_eq!(est.iterations, 0);
    }

    #[test]
    fn finds_both_quadratic_roots() {
        let set = find_real_roots(&poly(&[2, 2, -1]), &SearchConfig::default()).unwrap();
        let values: Vec<f64> = set.roots.iter().map(|r| r.value).collect();
        assert_eq!(values.len(), 2);
        assert!((values[0] + 1.3660254037844386).abs() < 1e-9);
        assert!((values[1] - 0.3660254037844386).abs() < 1e-9);
        assert_eq!(set.roots[1].alpha, 2);
        assert_eq!(set.roots[1].discoveries, 2);
        // α = ±1 ties the moduli (|1 ± √3|) and must not produce a root
        let tied = set.candidates.iter().find(|c| c.alpha == 1).unwrap();
        assert!(!tied.accepted);
    }

    #[test]
    fn cube_root_of_two_via_shift() {
        let cfg = SearchConfig {
            alpha_max: 2,
            ..SearchConfig::default()
        };
        let set = find_real_roots(&poly(&[1, 0, 0, -2]), &cfg).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert!((set.roots[0].value - 2f64.cbrt()).abs() < 1e-9);
        // α = 1 finds it first; α = 2 runs longer and supplies the witness
        assert_eq!(set.roots[0].discoveries, 2);
        assert_eq!((set.roots[0].alpha, set.roots[0].beta), (1, 1));
        assert_eq!(set.roots[0].witness_shift, (2, 1));
        let certs = certify(&poly(&[1, 0, 0, -2]), &set).unwrap();
        assert!(certs.iter().all(|c| !c.lucky));
    }

    #[test]
    fn unit_roots_separate_under_shift() {
        let set = find_real_roots(&poly(&[1, 0, -1]), &SearchConfig::default()).unwrap();
        let values: Vec<f64> = set.roots.iter().map(|r| r.value).collect();
        assert_eq!(values.len(), 2);
        assert!((values[0] + 1.0).abs() < 1e-9 && (values[1] - 1.0).abs() < 1e-9);
        assert_eq!((set.roots[0].alpha, set.roots[1].alpha), (-1, 1));
    }

    #[test]
    fn no_real_roots() {
        let set = find_real_roots(&poly(&[1, 0, 1]), &SearchConfig::default()).unwrap();
        assert!(set.roots.is_empty());
    }
}
