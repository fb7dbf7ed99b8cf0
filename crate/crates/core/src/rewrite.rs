//! Replacement rules over a `2m`-letter alphabet and signed symbol counting.
//!
//! Column `j` of an integer matrix `M` becomes the rule for letter `j`: for
//! each row `i` in ascending order, letter `i` repeated `M[i][j]` times when
//! the entry is positive, or its conjugate repeated `|M[i][j]|` times when it
//! is negative. The rule for a conjugate letter is the letter-wise conjugate
//! of the rule for the letter itself. With `n(W)_i = #i − #conj(i)`, one
//! rewrite maps `n(W)` to `M·n(W)`, so counting symbols performs power
//! iteration on `M`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::convergence::{ConvergenceMonitor, StoppingRule};
use crate::error::{Error, Result};
use crate::matrix::ReplacementMatrix;
use crate::numeric::ratio_to_f64;
use crate::recurrence::RootEstimate;

/// Letters are `0 … 2m-1`; letter `m + i` is the conjugate of letter `i`.
pub type Letter = u32;

pub const DEFAULT_WORD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    m: usize,
    glyphs: Vec<String>,
}

impl Alphabet {
    /// Digits `0 … m-1` with `~` marking conjugates, except `B G R` for
    /// `m = 3`.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let base: Vec<String> = if m == 3 {
            ["B", "G", "R"].iter().map(|s| s.to_string()).collect()
        } else {
            (0..m).map(|i| i.to_string()).collect()
        };
        Self::with_glyphs(&base)
    }

    /// Custom glyphs for letters `0 … m-1`; conjugates get a `~` suffix.
    pub fn with_glyphs<S: AsRef<str>>(base: &[S]) -> Self {
        let m = base.len();
        assert!(m >= 1);
        let mut glyphs: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).collect();
        glyphs.extend(base.iter().map(|s| format!("{}~", s.as_ref())));
        Self { m, glyphs }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn conj(&self, letter: Letter) -> Letter {
        conj(letter, self.m)
    }

    pub fn glyph(&self, letter: Letter) -> &str {
        &self.glyphs[letter as usize]
    }

    pub fn render(&self, word: &Word) -> String {
        word.0.iter().map(|&l| self.glyph(l)).collect()
    }

    /// Greedy longest-glyph match; whitespace between glyphs is ignored.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut order: Vec<(usize, &str)> = self
            .glyphs
            .iter()
            .enumerate()
            .map(|(i, g)| (i, g.as_str()))
            .collect();
        order.sort_by_key(|(_, g)| std::cmp::Reverse(g.len()));
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < text.len() {
            let rest = &text[pos..];
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                pos += c.len_utf8();
                continue;
            }
            match order.iter().find(|(_, g)| rest.starts_with(g)) {
                Some((i, g)) => {
                    letters.push(*i as Letter);
                    pos += g.len();
                }
                None => {
                    return Err(Error::UnknownGlyph {
                        word: text.to_string(),
                        pos,
                    })
                }
            }
        }
        Ok(Word(letters))
    }
}

fn conj(letter: Letter, m: usize) -> Letter {
    let m = m as Letter;
    if letter < m {
        letter + m
    } else {
        letter - m
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letter(l: Letter) -> Self {
        Self(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn conjugate(&self, m: usize) -> Word {
        Word(self.0.iter().map(|&l| conj(l, m)).collect())
    }
}

/// Signed symbol counts `n_i(W) − n_i~(W)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountVector(pub Vec<BigInt>);

impl CountVector {
    pub fn zeros(m: usize) -> Self {
        Self(vec![BigInt::zero(); m])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// One replacement word per letter, conjugates included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementRuleSet {
    m: usize,
    rules: Vec<Vec<Letter>>,
}

impl ReplacementRuleSet {
    /// Rules for an integer matrix. Entries must fit in `usize` repetitions.
    pub fn from_matrix(matrix: &ReplacementMatrix) -> Self {
        let m = matrix.dim();
        let entries = matrix.entries();
        let mut rules = vec![Vec::new(); 2 * m];
        for j in 0..m {
            let mut rule = Vec::new();
            for i in 0..m {
                let e = &entries[(i, j)];
                let reps = e
                    .abs()
                    .to_usize()
                    .expect("matrix entry too large for a rule");
                let letter = if e.is_negative() {
                    conj(i as Letter, m)
                } else {
                    i as Letter
                };
                rule.extend(std::iter::repeat_n(letter, reps));
            }
            rules[j + m] = rule.iter().map(|&l| conj(l, m)).collect();
            rules[j] = rule;
        }
        Self { m, rules }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn rule(&self, letter: Letter) -> &[Letter] {
        &self.rules[letter as usize]
    }

    /// Length of the image of `w`, without building it.
    pub fn image_len(&self, w: &Word) -> u128 {
        w.0.iter()
            .map(|&l| self.rules[l as usize].len() as u128)
            .sum()
    }

    /// The image of `w`: the concatenation of the rules of its letters.
    /// Fails with [`Error::WordCapExceeded`] rather than build a word longer
    /// than `cap`.
    pub fn rewrite(&self, w: &Word, cap: usize) -> Result<Word> {
        let len = self.image_len(w);
        if len > cap as u128 {
            return Err(Error::WordCapExceeded { len, cap });
        }
        let mut out = Vec::with_capacity(len as usize);
        for &l in &w.0 {
            out.extend_from_slice(&self.rules[l as usize]);
        }
        Ok(Word(out))
    }

    /// `w0, R*(w0), …, (R*)^steps(w0)`, stopping early at the word cap.
    pub fn iterate(&self, w0: &Word, steps: usize, cap: usize) -> WordIteration {
        let mut words = vec![w0.clone()];
        for _ in 0..steps {
            match self.rewrite(words.last().unwrap(), cap) {
                Ok(w) => words.push(w),
                Err(_) => {
                    return WordIteration {
                        words,
                        truncated: true,
                    }
                }
            }
        }
        WordIteration {
            words,
            truncated: false,
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> Vec<String> {
        (0..2 * self.m)
            .map(|l| {
                let l = l as Letter;
                format!(
                    "{} -> {}",
                    alphabet.glyph(l),
                    alphabet.render(&Word(self.rule(l).to_vec()))
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordIteration {
    pub words: Vec<Word>,
    /// Set when the cap stopped the iteration before the requested step.
    pub truncated: bool,
}

pub fn count_symbols(w: &Word, m: usize) -> CountVector {
    let mut counts = vec![0i64; m];
    for &l in &w.0 {
        let l = l as usize;
        if l < m {
            counts[l] += 1;
        } else {
            counts[l - m] -= 1;
        }
    }
    CountVector::from_i64(&counts)
}

/// Removes `min(#i, #conj(i))` occurrences of both `i` and `conj(i)`, the
/// earliest ones first. Counts are unchanged.
pub fn reduce_conjugates(w: &Word, m: usize) -> Word {
    let mut plus = vec![0usize; m];
    let mut minus = vec![0usize; m];
    for &l in &w.0 {
        let l = l as usize;
        if l < m {
            plus[l] += 1;
        } else {
            minus[l - m] += 1;
        }
    }
    let mut drop: Vec<usize> = plus.iter().zip(&minus).map(|(a, b)| *a.min(b)).collect();
    let mut drop_conj = drop.clone();
    let mut out = Vec::with_capacity(w.len());
    for &l in &w.0 {
        let li = l as usize;
        let budget = if li < m {
            &mut drop[li]
        } else {
            &mut drop_conj[li - m]
        };
        if *budget > 0 {
            *budget -= 1;
        } else {
            out.push(l);
        }
    }
    Word(out)
}

pub fn count_step(matrix: &ReplacementMatrix, n: &CountVector) -> Result<CountVector> {
    Ok(CountVector(matrix.apply(&n.0)?))
}

/// `n_j / n_{j+1}` for `j = 1 … m-1`; `None` where the denominator is zero.
pub fn ratio_estimates(n: &CountVector) -> Vec<Option<BigRational>> {
    n.0.windows(2)
        .map(|w| (!w[1].is_zero()).then(|| BigRational::new(w[0].clone(), w[1].clone())))
        .collect()
}

/// The designated estimate `n_{m-1} / n_m` as `(numerator, denominator)`.
pub(crate) fn designated_pair(n: &[BigInt]) -> Option<(&BigInt, &BigInt)> {
    let m = n.len();
    (m >= 2).then(|| (&n[m - 2], &n[m - 1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteMode {
    /// Build the words while they fit under the cap, then continue on counts.
    Explicit {
        cap: usize,
    },
    Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRow {
    pub step: usize,
    /// Present while the word fits under the cap in explicit mode.
    pub word: Option<Word>,
    pub counts: CountVector,
}

impl RewriteRow {
    pub fn estimate(&self) -> Option<BigRational> {
        designated_pair(&self.counts.0)
            .filter(|(_, d)| !d.is_zero())
            .map(|(n, d)| BigRational::new(n.clone(), d.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct RewriteRun {
    pub estimate: RootEstimate,
    pub rows: Vec<RewriteRow>,
}

/// Rewrites (or counts) from `w0` until the stopping rule fires. Every
/// explicit word is checked against the count iteration as it is produced.
pub fn run(
    matrix: &ReplacementMatrix,
    w0: &Word,
    rule: &StoppingRule,
    mode: RewriteMode,
) -> Result<RewriteRun> {
    let m = matrix.dim();
    let rules = ReplacementRuleSet::from_matrix(matrix);
    let mut monitor = ConvergenceMonitor::new(rule.clone(), m);
    let mut word = match mode {
        RewriteMode::Explicit { .. } => Some(w0.clone()),
        RewriteMode::Counts => None,
    };
    let mut counts = count_symbols(w0, m);
    let mut rows = Vec::new();
    let mut step = 0;
    let status = loop {
        let estimate = designated_pair(&counts.0).and_then(|(n, d)| ratio_to_f64(n, d));
        rows.push(RewriteRow {
            step,
            word: word.clone(),
            counts: counts.clone(),
        });
        if let Some(status) = monitor.observe(estimate) {
            break status;
        }
        let next = count_step(matrix, &counts)?;
        if let (Some(w), RewriteMode::Explicit { cap }) = (&word, mode) {
            word = rules.rewrite(w, cap).ok();
            if let Some(w) = &word {
                debug_assert_eq!(count_symbols(w, m), next);
            }
        }
        counts = next;
        step += 1;
    };
    let last = rows.last().expect("at least one row");
    let estimate = RootEstimate::from_ratio(designated_pair(&last.counts.0), rows.len(), status);
    Ok(RewriteRun { estimate, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::Status;
    use crate::matrix::IntMatrix;

    fn matrix(rows: &[&[i64]]) -> ReplacementMatrix {
        ReplacementMatrix::from_matrix(IntMatrix::from_rows(
            &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        ))
    }

    fn quadratic_rules() -> (ReplacementRuleSet, Alphabet) {
        (
            ReplacementRuleSet::from_matrix(&matrix(&[&[-2, 1], &[2, 0]])),
            Alphabet::new(2),
        )
    }

    #[test]
    fn rules_from_quadratic_matrix() {
        let (rules, a) = quadratic_rules();
        assert_eq!(
            rules.display(&a),
            ["0 -> 0~0~11", "1 -> 0", "0~ -> 001~1~", "1~ -> 0~"]
        );
    }

    #[test]
    fn rules_from_shifted_matrix() {
        let rules = ReplacementRuleSet::from_matrix(&matrix(&[&[0, 1], &[2, 2]]));
        assert_eq!(
            rules.display(&Alphabet::new(2)),
            ["0 -> 11", "1 -> 011", "0~ -> 1~1~", "1~ -> 0~1~1~"]
        );
    }

    #[test]
    fn rules_for_cube_doubling() {
        let rules = ReplacementRuleSet::from_matrix(&matrix(&[&[1, 0, 2], &[1, 1, 0], &[0, 1, 1]]));
        let a = Alphabet::new(3);
        assert_eq!(rules.display(&a)[..3], ["B -> BG", "G -> GR", "R -> BBR"]);
        // the order inside a rule does not matter for counting: R -> RBB
        let r_rule = Word(rules.rule(2).to_vec());
        assert_eq!(
            count_symbols(&r_rule, 3),
            count_symbols(&a.parse("RBB").unwrap(), 3)
        );
    }

    #[test]
    fn zero_column_gives_empty_rule() {
        let rules = ReplacementRuleSet::from_matrix(&matrix(&[&[1, 0], &[1, 0]]));
        assert!(rules.rule(1).is_empty());
        assert!(rules.rule(3).is_empty());
    }

    #[test]
    fn rewrites_words() {
        let (rules, a) = quadratic_rules();
        let w = rules
            .rewrite(&a.parse("0").unwrap(), DEFAULT_WORD_CAP)
            .unwrap();
        assert_eq!(a.render(&w), "0~0~11");
        let w = rules.rewrite(&w, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(a.render(&w), "001~1~001~1~00");

        let shifted = ReplacementRuleSet::from_matrix(&matrix(&[&[0, 1], &[2, 2]]));
        let w = shifted
            .rewrite(&a.parse("011011").unwrap(), DEFAULT_WORD_CAP)
            .unwrap();
        assert_eq!(a.render(&w), "11 011 011 11 011 011".replace(' ', ""));
    }

    #[test]
    fn rewrite_respects_cap() {
        let (rules, a) = quadratic_rules();
        let w = a.parse("0~0~11").unwrap();
        assert!(matches!(
            rules.rewrite(&w, 9),
            Err(Error::WordCapExceeded { len: 10, cap: 9 })
        ));
        let it = rules.iterate(&a.parse("0").unwrap(), 5, 20);
        assert!(it.truncated);
        assert_eq!(it.words.len(), 3);
    }

    #[test]
    fn iterates() {
        let (rules, a) = quadratic_rules();
        let it = rules.iterate(&a.parse("0").unwrap(), 2, DEFAULT_WORD_CAP);
        let shown: Vec<String> = it.words.iter().map(|w| a.render(w)).collect();
        assert_eq!(shown, ["0", "0~0~11", "001~1~001~1~00"]);
        assert!(!it.truncated);

        let shifted = ReplacementRuleSet::from_matrix(&matrix(&[&[0, 1], &[2, 2]]));
        let it = shifted.iterate(&a.parse("0").unwrap(), 2, DEFAULT_WORD_CAP);
        let shown: Vec<String> = it.words.iter().map(|w| a.render(w)).collect();
        assert_eq!(shown, ["0", "11", "011011"]);

        let it = rules.iterate(&a.parse("1~").unwrap(), 0, DEFAULT_WORD_CAP);
        assert_eq!(it.words, vec![a.parse("1~").unwrap()]);
    }

    #[test]
    fn counts() {
        let a = Alphabet::new(2);
        assert_eq!(
            count_symbols(&a.parse("0~0~11").unwrap(), 2),
            CountVector::from_i64(&[-2, 2])
        );
        assert_eq!(
            count_symbols(&a.parse("001~1~001~1~00").unwrap(), 2),
            CountVector::from_i64(&[6, -4])
        );
        assert_eq!(count_symbols(&Word::default(), 2), CountVector::zeros(2));
    }

    #[test]
    fn reduces_conjugate_pairs() {
        let a = Alphabet::new(2);
        let r = |s: &str| a.render(&reduce_conjugates(&a.parse(s).unwrap(), 2));
        assert_eq!(r("00~"), "");
        assert_eq!(r("001~1~00"), "001~1~00");
        assert_eq!(r("010~"), "1");
        assert_eq!(r("0~1001~1"), "01");
    }

    #[test]
    fn count_steps() {
        let r = matrix(&[&[-2, 1], &[2, 0]]);
        let step = |v: &[i64]| count_step(&r, &CountVector::from_i64(v)).unwrap();
        assert_eq!(step(&[1, 0]), CountVector::from_i64(&[-2, 2]));
        assert_eq!(step(&[-896, 656]), CountVector::from_i64(&[2448, -1792]));
        assert_eq!(step(&[0, 0]), CountVector::zeros(2));
        assert!(count_step(&r, &CountVector::zeros(3)).is_err());
    }

    #[test]
    fn ratios() {
        let q = |n: i64, d: i64| Some(BigRational::new(n.into(), d.into()));
        assert_eq!(
            ratio_estimates(&CountVector::from_i64(&[2448, -1792])),
            vec![q(-2448, 1792)]
        );
        assert_eq!(
            ratio_estimates(&CountVector::from_i64(&[12, 32])),
            vec![q(3, 8)]
        );
        assert_eq!(ratio_estimates(&CountVector::from_i64(&[1, 0])), vec![None]);
        assert_eq!(
            ratio_estimates(&CountVector::from_i64(&[4, 2, 1])),
            vec![q(2, 1), q(2, 1)]
        );
    }

    #[test]
    fn glyph_parsing() {
        let a = Alphabet::new(12);
        let w = a.parse("10 1 0~ 11~").unwrap();
        assert_eq!(w.0, vec![10, 1, 12, 23]);
        assert!(matches!(
            Alphabet::new(2).parse("02"),
            Err(Error::UnknownGlyph { pos: 1, .. })
        ));
    }

    #[test]
    fn explicit_run_switches_to_counts() {
        let r = matrix(&[&[-2, 1], &[2, 0]]);
        let rule = StoppingRule::default().with_budget(12);
        let out = run(
            &r,
            &Word::letter(0),
            &rule,
            RewriteMode::Explicit { cap: 200 },
        )
        .unwrap();
        assert_eq!(out.rows.len(), 12);
        assert!(out.rows[4].word.is_some());
        assert!(out.rows.last().unwrap().word.is_none());
        assert_eq!(out.estimate.status, Status::BudgetExhausted);
    }
}
