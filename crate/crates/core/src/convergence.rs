//! Stopping rule shared by the count and recurrence engines.
//!
//! The engines feed one ratio estimate per step (or `None` when the
//! denominator is zero). A run stops as soon as one of these holds:
//!
//! - **converged**: the estimate moved by at most `tol·max(1, |e|)` on each
//!   of the last `window` steps;
//! - **oscillating**: for `oscillation_window` consecutive steps the estimate
//!   repeats with some period `p ≥ 2` (each value within `tol·max(1, |e|)` of
//!   the value `p` steps earlier) while visiting values more than
//!   `100·tol·max(1, |e|)` apart. Undefined estimates count as one value.
//!   This is what tied dominant moduli produce;
//! - **degenerate start**: the denominator was zero on `m` consecutive steps;
//! - **budget exhausted**: `budget` estimates were seen without any of the
//!   above.

use std::collections::VecDeque;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    Oscillating,
    BudgetExhausted,
    DegenerateStart,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Oscillating => "oscillating",
            Status::BudgetExhausted => "budget-exhausted",
            Status::DegenerateStart => "degenerate-start",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoppingRule {
    pub tol: f64,
    /// Consecutive small changes required for convergence.
    pub window: usize,
    /// Maximum number of estimates (rows `j = 0 … budget-1`).
    pub budget: usize,
    pub oscillation_window: usize,
    /// Longest repetition period tested for oscillation.
    pub max_period: usize,
    /// Recurrence windows are divided by their gcd once an entry exceeds
    /// this many bits.
    pub rescale_bits: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            window: 3,
            budget: 10_000,
            oscillation_window: 20,
            max_period: 12,
            rescale_bits: 4096,
        }
    }
}

impl StoppingRule {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Incremental evaluation of a [`StoppingRule`].
#[derive(Debug, Clone)]
pub struct ConvergenceMonitor {
    rule: StoppingRule,
    dim: usize,
    history: VecDeque<Option<f64>>,
    seen: usize,
    small_steps: usize,
    zero_denominators: usize,
}

impl ConvergenceMonitor {
    /// `dim` is the matrix dimension; `m` consecutive undefined estimates
    /// mean a degenerate start.
    pub fn new(rule: StoppingRule, dim: usize) -> Self {
        Self {
            history: VecDeque::with_capacity(rule.oscillation_window + rule.max_period + 1),
            rule,
            dim: dim.max(1),
            seen: 0,
            small_steps: 0,
            zero_denominators: 0,
        }
    }

    pub fn steps(&self) -> usize {
        self.seen
    }

    /// Records the next estimate and reports a terminal status, if any.
    pub fn observe(&mut self, estimate: Option<f64>) -> Option<Status> {
        let tol = self.rule.tol;
        let previous = self.history.back().copied().flatten();
        self.seen += 1;
        self.history.push_back(estimate);
        if self.history.len() > self.rule.oscillation_window + self.rule.max_period {
            self.history.pop_front();
        }

        match estimate {
            None => {
                self.zero_denominators += 1;
                self.small_steps = 0;
            }
            Some(e) => {
                self.zero_denominators = 0;
                match previous {
                    Some(prev) if (e - prev).abs() <= tol * e.abs().max(1.0) => {
                        self.small_steps += 1;
                    }
                    _ => self.small_steps = 0,
                }
            }
        }

        if self.small_steps >= self.rule.window {
            return Some(Status::Converged);
        }
        if self.zero_denominators >= self.dim {
            return Some(Status::DegenerateStart);
        }
        if self.is_oscillating() {
            return Some(Status::Oscillating);
        }
        if self.seen >= self.rule.budget {
            return Some(Status::BudgetExhausted);
        }
        None
    }

    fn is_oscillating(&self) -> bool {
        let w = self.rule.oscillation_window;
        let tol = self.rule.tol;
        let len = self.history.len();
        if w == 0 || len < w + 2 {
            return false;
        }
        let recent: Vec<Option<f64>> = self.history.iter().skip(len - w).copied().collect();
        let spread = recent.iter().enumerate().any(|(i, a)| {
            recent[i + 1..]
                .iter()
                .any(|b| !same_value(*a, *b, 100.0 * tol))
        });
        if !spread {
            return false;
        }
        (2..=self.rule.max_period).any(|p| {
            if len < w + p {
                return false;
            }
            (len - w..len).all(|t| same_value(self.history[t], self.history[t - p], tol))
        })
    }
}

fn same_value(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feed(
        rule: StoppingRule,
        dim: usize,
        xs: impl IntoIterator<Item = Option<f64>>,
    ) -> (Option<Status>, usize) {
        let mut mon = ConvergenceMonitor::new(rule, dim);
        for x in xs {
            if let Some(s) = mon.observe(x) {
                return (Some(s), mon.steps());
            }
        }
        (None, mon.steps())
    }

    #[test]
    fn constant_sequence_converges_after_window() {
        let (s, n) = feed(StoppingRule::default(), 2, std::iter::repeat(Some(2.0)));
        assert_eq!(s, Some(Status::Converged));
        assert_eq!(n, 4);
    }

    #[test]
    fn geometric_approach_converges() {
        let xs = (0..).map(|k| Some(1.0 + 0.5f64.powi(k)));
        let (s, n) = feed(StoppingRule::default(), 2, xs);
        assert_eq!(s, Some(Status::Converged));
        assert!(n > 40 && n < 50, "{n}");
    }

    #[test]
    fn alternating_convergence_is_not_oscillation() {
        // ratio of subdominant to dominant of 0.9, sign flipping
        let xs = (0..).map(|k| Some(-1.3 + (-0.9f64).powi(k)));
        let (s, _) = feed(StoppingRule::default(), 2, xs);
        assert_eq!(s, Some(Status::Converged));
    }

    #[test]
    fn period_two_with_undefined() {
        let xs = (0..).map(|k| if k % 2 == 0 { None } else { Some(0.0) });
        let (s, n) = feed(StoppingRule::default(), 2, xs);
        assert_eq!(s, Some(Status::Oscillating));
        assert_eq!(n, 22);
    }

    #[test]
    fn period_three() {
        let xs = (0..).map(|k| if k % 3 == 2 { Some(0.0) } else { None });
        let (s, _) = feed(StoppingRule::default(), 3, xs);
        assert_eq!(s, Some(Status::Oscillating));
    }

    #[test]
    fn degenerate_and_budget() {
        let (s, n) = feed(StoppingRule::default(), 3, std::iter::repeat(None));
        assert_eq!((s, n), (Some(Status::DegenerateStart), 3));

        let rule = StoppingRule::default().with_budget(9);
        let (s, n) = feed(rule, 2, (0..).map(|k| Some(k as f64)));
        assert_eq!((s, n), (Some(Status::BudgetExhausted), 9));
    }
}
