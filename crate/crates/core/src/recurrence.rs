//! Integer-recurrence engine.
//!
//! With `(1, c_1, …, c_m)` the monic characteristic polynomial of `M`,
//! Cayley–Hamilton gives `M^j = −c_1 M^(j−1) − … − c_m M^(j−m)`, so every
//! component of `S_j = M^j S_0` obeys the same `m`-term recurrence. The
//! engine seeds the first `m` vectors by matrix products and then only runs
//! the scalar recurrence on each component sequence. The cross-sequence
//! ratio `S_j^(m−1) / S_j^(m)` tends to the dominant root.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::convergence::{ConvergenceMonitor, Status, StoppingRule};
use crate::error::{Error, Result};
use crate::matrix::{ReplacementMatrix, ScaledCharCoeffs};
use crate::numeric::{gcd_all, max_bits, ratio_to_f64, rational_to_f64};
use crate::poly::IntPolynomial;
use crate::rewrite::designated_pair;

/// Outcome of an engine run.
#[derive(Debug, Clone, PartialEq)]
pub struct RootEstimate {
    /// Exact ratio at the last step; `None` when its denominator was zero.
    pub value: Option<BigRational>,
    pub float: Option<f64>,
    /// Number of rows evaluated.
    pub iterations: usize,
    pub status: Status,
    /// `|p(value)|`, filled in by callers that know `p`.
    pub residual: Option<f64>,
}

impl RootEstimate {
    pub(crate) fn from_ratio(
        pair: Option<(&BigInt, &BigInt)>,
        iterations: usize,
        status: Status,
    ) -> Self {
        let value = pair
            .filter(|(_, d)| !d.is_zero())
            .map(|(n, d)| BigRational::new(n.clone(), d.clone()));
        let float = value.as_ref().map(rational_to_f64);
        Self {
            value,
            float,
            iterations,
            status,
            residual: None,
        }
    }

    pub fn exact(value: BigRational, status: Status) -> Self {
        let float = Some(rational_to_f64(&value));
        Self {
            value: Some(value),
            float,
            iterations: 0,
            status,
            residual: None,
        }
    }

    pub fn with_residual(mut self, p: &IntPolynomial) -> Self {
        self.residual = self.float.map(|x| p.eval_f64(x).abs());
        self
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// `S_0` and the seed vectors `S_j = M^j S_0`, `j = 0 … m−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedState {
    pub s0: Vec<BigInt>,
    pub columns: Vec<Vec<BigInt>>,
}

pub fn seed_sequences(matrix: &ReplacementMatrix, s0: &[BigInt]) -> Result<SeedState> {
    let m = matrix.dim();
    if s0.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: s0.len(),
        });
    }
    if s0.iter().all(Zero::is_zero) {
        return Err(Error::ZeroSeed);
    }
    let mut columns = vec![s0.to_vec()];
    for _ in 1..m {
        let next = matrix.apply(columns.last().unwrap())?;
        columns.push(next);
    }
    Ok(SeedState {
        s0: s0.to_vec(),
        columns,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rescale {
    pub step: usize,
    pub divisor: BigInt,
}

/// The last `m` terms of each of the `m` sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    /// `sequences[i]` holds `S^(i)_(j−m+1) … S^(i)_j`, oldest first.
    sequences: Vec<VecDeque<BigInt>>,
    step: usize,
    rescales: Vec<Rescale>,
}

impl SequenceWindow {
    pub fn from_seed(seed: &SeedState) -> Self {
        let m = seed.s0.len();
        let sequences = (0..m)
            .map(|i| seed.columns.iter().map(|col| col[i].clone()).collect())
            .collect();
        Self {
            sequences,
            step: m - 1,
            rescales: Vec::new(),
        }
    }

    /// Builds a window directly from per-sequence terms, oldest first,
    /// ending at step `step`.
    pub fn from_terms(terms: Vec<Vec<BigInt>>, step: usize) -> Self {
        Self {
            sequences: terms.into_iter().map(VecDeque::from).collect(),
            step,
            rescales: Vec::new(),
        }
    }

    /// Index `j` of the newest term.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn sequence(&self, i: usize) -> impl Iterator<Item = &BigInt> {
        self.sequences[i].iter()
    }

    /// `S_j`, the newest term of every sequence.
    pub fn latest(&self) -> Vec<BigInt> {
        self.sequences
            .iter()
            .map(|s| s.back().cloned().unwrap_or_default())
            .collect()
    }

    pub fn rescales(&self) -> &[Rescale] {
        &self.rescales
    }

    /// Cross-sequence ratios `S^(i)_j / S^(i+1)_j` at the newest step.
    pub fn ratios(&self) -> Vec<Option<BigRational>> {
        crate::rewrite::ratio_estimates(&crate::rewrite::CountVector(self.latest()))
    }

    fn advance(&mut self, coeffs: &ScaledCharCoeffs) {
        let tail = coeffs.tail();
        for seq in &mut self.sequences {
            let mut next = BigInt::zero();
            // c_k multiplies S_(j−k); the deque is oldest first
            for (c, s) in tail.iter().zip(seq.iter().rev()) {
                if !c.is_zero() && !s.is_zero() {
                    next -= c * s;
                }
            }
            seq.pop_front();
            seq.push_back(next);
        }
        self.step += 1;
    }

    fn rescale_in_place(&mut self) -> Option<BigInt> {
        let g = gcd_all(self.sequences.iter().flatten());
        if g.is_zero() || g.is_one() {
            return None;
        }
        for x in self.sequences.iter_mut().flatten() {
            *x /= &g;
        }
        self.rescales.push(Rescale {
            step: self.step,
            divisor: g.clone(),
        });
        Some(g)
    }

    fn max_bits(&self) -> u64 {
        max_bits(self.sequences.iter().flatten())
    }
}

/// One recurrence step: appends `−Σ c_k S_(j−k)` to every sequence and drops
/// the oldest term.
pub fn recurrence_step(coeffs: &ScaledCharCoeffs, window: &SequenceWindow) -> SequenceWindow {
    let mut next = window.clone();
    next.advance(coeffs);
    next
}

/// Divides the whole window by the gcd of its entries when that exceeds 1.
/// Cross-sequence ratios are unchanged.
pub fn gcd_rescale(window: &SequenceWindow) -> SequenceWindow {
    let mut out = window.clone();
    out.rescale_in_place();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub j: usize,
    pub values: Vec<BigInt>,
}

impl TraceRow {
    pub fn estimate(&self) -> Option<BigRational> {
        designated_pair(&self.values)
            .filter(|(_, d)| !d.is_zero())
            .map(|(n, d)| BigRational::new(n.clone(), d.clone()))
    }

    pub fn estimate_f64(&self) -> Option<f64> {
        designated_pair(&self.values).and_then(|(n, d)| ratio_to_f64(n, d))
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceRun {
    pub estimate: RootEstimate,
    pub trace: Vec<TraceRow>,
    pub rescales: Vec<Rescale>,
}

/// Rows `j = 0, 1, …` of the recurrence table: the seed vectors, then one
/// recurrence step per row. Rescales whenever the window grows past
/// `rescale_bits`.
pub struct TraceRows {
    seed: std::vec::IntoIter<Vec<BigInt>>,
    window: SequenceWindow,
    coeffs: ScaledCharCoeffs,
    rescale_bits: u64,
    j: usize,
}

impl TraceRows {
    pub fn new(matrix: &ReplacementMatrix, s0: &[BigInt], rescale_bits: u64) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DegreeTooLow);
        }
        let seed = seed_sequences(matrix, s0)?;
        Ok(Self {
            window: SequenceWindow::from_seed(&seed),
            seed: seed.columns.into_iter(),
            coeffs: matrix.scaled_char_coeffs(),
            rescale_bits,
            j: 0,
        })
    }

    pub fn rescales(&self) -> &[Rescale] {
        self.window.rescales()
    }
}

impl Iterator for TraceRows {
    type Item = TraceRow;

    fn next(&mut self) -> Option<TraceRow> {
        let values = match self.seed.next() {
            Some(col) => col,
            None => {
                self.window.advance(&self.coeffs);
                if self.window.max_bits() > self.rescale_bits {
                    self.window.rescale_in_place();
                }
                self.window.latest()
            }
        };
        let row = TraceRow { j: self.j, values };
        self.j += 1;
        Some(row)
    }
}

/// Exactly `rows` rows of the table, with no stopping rule.
pub fn table(
    matrix: &ReplacementMatrix,
    s0: &[BigInt],
    rows: usize,
    rescale_bits: u64,
) -> Result<(Vec<TraceRow>, Vec<Rescale>)> {
    let mut it = TraceRows::new(matrix, s0, rescale_bits)?;
    let trace: Vec<TraceRow> = it.by_ref().take(rows).collect();
    Ok((trace, it.rescales().to_vec()))
}

/// Seeds from `s0` and runs the recurrence of `matrix` until the stopping
/// rule fires. Requires `m ≥ 2`.
pub fn run(
    matrix: &ReplacementMatrix,
    s0: &[BigInt],
    rule: &StoppingRule,
) -> Result<RecurrenceRun> {
    let mut rows = TraceRows::new(matrix, s0, rule.rescale_bits)?;
    let mut monitor = ConvergenceMonitor::new(rule.clone(), matrix.dim());
    let mut trace = Vec::new();
    let status = loop {
        let row = rows.next().expect("rows never run out");
        let status = monitor.observe(row.estimate_f64());
        trace.push(row);
        if let Some(s) = status {
            break s;
        }
    };

    let last = trace.last().expect("at least one row");
    let estimate = RootEstimate::from_ratio(designated_pair(&last.values), trace.len(), status);
    Ok(RecurrenceRun {
        estimate,
        rescales: rows.rescales().to_vec(),
        trace,
    })
}

/// `(1, 0, …, 0)`.
pub fn default_seed(m: usize) -> Vec<BigInt> {
    let mut s0 = vec![BigInt::zero(); m];
    if m > 0 {
        s0[0] = BigInt::one();
    }
    s0
}
