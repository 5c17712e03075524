//! Binary set cover, fractional coverage and repetition planning.

use std::fmt;

use itertools::Itertools;

use crate::bits::to_bitstring;
use crate::error::{Error, Result};
use crate::table::{ClassicalFaultTable, QuantumFaultTable};

/// Largest row count accepted by [`exact_min_cover`].
pub const EXACT_ROW_LIMIT: usize = 20;

const EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestStep {
    pub input: usize,
    pub repetitions: u32,
}

/// Ordered tests with repetition counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSequence {
    pub n: usize,
    pub steps: Vec<TestStep>,
}

impl TestSequence {
    pub fn new(n: usize) -> Self {
        Self { n, steps: Vec::new() }
    }

    /// Every step run once.
    pub fn once(n: usize, inputs: &[usize]) -> Self {
        Self {
            n,
            steps: inputs.iter().map(|&input| TestStep { input, repetitions: 1 }).collect(),
        }
    }

    pub fn push(&mut self, input: usize, repetitions: u32) {
        self.steps.push(TestStep { input, repetitions });
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.input).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_executions(&self) -> u64 {
        self.steps.iter().map(|s| u64::from(s.repetitions)).sum()
    }
}

impl fmt::Display for TestSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("{} x{}", to_bitstring(s.input, self.n), s.repetitions))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassCoverage {
    pub class: String,
    pub gamma: f64,
}

impl ClassCoverage {
    pub fn fully_covered(&self) -> bool {
        self.gamma >= 1.0 - EPS
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub classes: Vec<ClassCoverage>,
    /// Faults that no test can ever detect.
    pub undetectable: Vec<String>,
}

impl CoverageReport {
    pub fn gamma(&self, class: &str) -> Option<f64> {
        self.classes.iter().find(|c| c.class == class).map(|c| c.gamma)
    }

    pub fn fully_covered(&self) -> Vec<&str> {
        self.classes
            .iter()
            .filter(|c| c.fully_covered())
            .map(|c| c.class.as_str())
            .collect()
    }

    /// Classes still below `tau`.
    pub fn residual(&self, tau: f64) -> Vec<&str> {
        self.classes
            .iter()
            .filter(|c| c.gamma < tau - EPS)
            .map(|c| c.class.as_str())
            .collect()
    }
}

/// Γ per class: `1 - Π (1 - p)^k` over the executed tests.
pub fn coverage_gamma(table: &QuantumFaultTable, seq: &TestSequence) -> Result<CoverageReport> {
    let rows = seq
        .steps
        .iter()
        .map(|s| {
            table
                .row_of_input(s.input)
                .map(|r| (r, s.repetitions))
                .ok_or_else(|| Error::UnknownInput(input_label(s.input, table.n)))
        })
        .collect::<Result<Vec<_>>>()?;
    let classes = table
        .classes
        .iter()
        .map(|class| {
            let miss: f64 = rows
                .iter()
                .map(|&(r, k)| (1.0 - class.probabilities[r]).powi(k as i32))
                .product();
            ClassCoverage {
                class: class.name(),
                gamma: (1.0 - miss).clamp(0.0, 1.0),
            }
        })
        .collect();
    Ok(CoverageReport {
        classes,
        undetectable: table.undetectable.clone(),
    })
}

fn input_label(x: usize, n: usize) -> String {
    let width = n.max((usize::BITS - x.leading_zeros()) as usize);
    to_bitstring(x, width)
}

/// True when every column has a 1 in at least one of the given rows.
pub fn is_complete(table: &ClassicalFaultTable, rows: &[usize]) -> bool {
    (0..table.cols()).all(|c| rows.iter().any(|&r| table.detects(r, c)))
}

/// Row indices of the inputs, in the given order.
pub fn rows_for_inputs(table: &ClassicalFaultTable, inputs: &[usize]) -> Result<Vec<usize>> {
    inputs
        .iter()
        .map(|&x| {
            table
                .row_of_input(x)
                .ok_or_else(|| Error::UnknownInput(input_label(x, table.n)))
        })
        .collect()
}

fn check_coverable(table: &ClassicalFaultTable) -> Result<()> {
    match (0..table.cols()).find(|&c| (0..table.rows()).all(|r| !table.detects(r, c))) {
        Some(c) => Err(Error::UncoverableColumn(table.names[c].clone())),
        None => Ok(()),
    }
}

/// One greedy pick and the table left after it.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverStep {
    pub input: usize,
    pub newly_covered: Vec<String>,
    pub remaining: ClassicalFaultTable,
}

/// Drop the picked rows and every column they cover.
pub fn reduce(table: &ClassicalFaultTable, picked_inputs: &[usize]) -> Result<ClassicalFaultTable> {
    let picked = rows_for_inputs(table, picked_inputs)?;
    let keep_cols: Vec<usize> = (0..table.cols())
        .filter(|&c| picked.iter().all(|&r| !table.detects(r, c)))
        .collect();
    let keep_rows: Vec<usize> = (0..table.rows()).filter(|r| !picked.contains(r)).collect();
    Ok(ClassicalFaultTable {
        n: table.n,
        inputs: keep_rows.iter().map(|&r| table.inputs[r]).collect(),
        good: keep_rows.iter().map(|&r| table.good[r]).collect(),
        names: keep_cols.iter().map(|&c| table.names[c].clone()).collect(),
        entries: keep_rows
            .iter()
            .map(|&r| keep_cols.iter().map(|&c| table.entries[r][c]).collect())
            .collect(),
    })
}

/// Greedy cover with its reduction trace.
///
/// Each pick is the row covering the most remaining columns; ties go to the
/// lowest input value.
pub fn greedy_cover_traced(table: &ClassicalFaultTable) -> Result<Vec<CoverStep>> {
    check_coverable(table)?;
    let mut current = table.clone();
    let mut trace = Vec::new();
    while current.cols() > 0 {
        let best = (0..current.rows())
            .map(|r| (r, current.entries[r].iter().filter(|&&d| d).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(current.inputs[b.0].cmp(&current.inputs[a.0])))
            .map(|(r, _)| r)
            .expect("coverable table has rows");
        let input = current.inputs[best];
        let newly_covered = (0..current.cols())
            .filter(|&c| current.detects(best, c))
            .map(|c| current.names[c].clone())
            .collect();
        current = reduce(&current, &[input])?;
        trace.push(CoverStep {
            input,
            newly_covered,
            remaining: current.clone(),
        });
    }
    Ok(trace)
}

pub fn greedy_cover(table: &ClassicalFaultTable) -> Result<TestSequence> {
    let picks: Vec<usize> = greedy_cover_traced(table)?.iter().map(|s| s.input).collect();
    Ok(TestSequence::once(table.n, &picks))
}

/// Minimum-cardinality cover by subset search in increasing size.
pub fn exact_min_cover(table: &ClassicalFaultTable) -> Result<TestSequence> {
    if table.rows() > EXACT_ROW_LIMIT {
        return Err(Error::InstanceTooLarge {
            rows: table.rows(),
            limit: EXACT_ROW_LIMIT,
        });
    }
    check_coverable(table)?;
    for size in 0..=table.rows() {
        if let Some(rows) = (0..table.rows())
            .combinations(size)
            .find(|rows| is_complete(table, rows))
        {
            let inputs: Vec<usize> = rows.iter().map(|&r| table.inputs[r]).collect();
            return Ok(TestSequence::once(table.n, &inputs));
        }
    }
    unreachable!("the full row set covers a coverable table")
}

/// Smallest `k` with `1 - (1-p)^k >= tau`.
pub fn repetitions_needed(p: f64, tau: f64) -> Result<u32> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidThreshold(tau));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::UnreachableCoverage(p));
    }
    if p >= 1.0 - EPS {
        return Ok(1);
    }
    if tau >= 1.0 {
        return Err(Error::UnreachableCoverage(p));
    }
    let reached = |k: u32| 1.0 - (1.0 - p).powi(k as i32) >= tau - EPS;
    let mut k = ((1.0 - tau).ln() / (1.0 - p).ln()).ceil().max(1.0) as u32;
    while k > 1 && reached(k - 1) {
        k -= 1;
    }
    while !reached(k) {
        k += 1;
    }
    Ok(k)
}

/// Exhaustive testing cost next to a plan's cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaselineComparison {
    pub zeta: u64,
    pub n: u32,
    pub m: u64,
    /// `zeta * 2^n`.
    pub exhaustive_detect: u128,
    /// `zeta * 2^n * m`.
    pub exhaustive_localize_bound: u128,
    pub plan_tests: u64,
}

impl BaselineComparison {
    pub fn with_plan(mut self, plan_tests: u64) -> Self {
        self.plan_tests = plan_tests;
        self
    }
}

impl fmt::Display for BaselineComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exhaustive: {} vs plan: {} executions",
            self.exhaustive_detect, self.plan_tests
        )
    }
}

pub fn exhaustive_baseline(n: u32, m: u64, zeta: u64) -> BaselineComparison {
    let space = 1u128.checked_shl(n).unwrap_or(u128::MAX);
    let detect = space.saturating_mul(u128::from(zeta));
    BaselineComparison {
        zeta,
        n,
        m,
        exhaustive_detect: detect,
        exhaustive_localize_bound: detect.saturating_mul(u128::from(m)),
        plan_tests: 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanConfig {
    pub tau: f64,
    pub zeta: u64,
    /// Stage count for the localisation bound.
    pub stages: u64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            tau: 0.99,
            zeta: 1,
            stages: 1,
        }
    }
}

/// A fractional class and the repetitions planned for it.
#[derive(Clone, Debug, PartialEq)]
pub struct RepeatedClass {
    pub class: String,
    pub input: usize,
    pub probability: f64,
    pub repetitions: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestPlan {
    /// Greedy picks for the certain-detection classes, each run once.
    pub deterministic: Vec<usize>,
    pub repeated: Vec<RepeatedClass>,
    pub sequence: TestSequence,
    pub coverage: CoverageReport,
    pub baseline: BaselineComparison,
}

/// Plan a sequence reaching `tau` on every detectable class.
///
/// Classes with a certain detection are covered greedily first. Each
/// remaining class is repeated on its best row; classes sharing a row share
/// the largest repetition count. Undetectable faults are reported only.
pub fn plan_tests(table: &QuantumFaultTable, cfg: &PlanConfig) -> Result<TestPlan> {
    if !(cfg.tau > 0.0 && cfg.tau <= 1.0) {
        return Err(Error::InvalidThreshold(cfg.tau));
    }
    let certain: Vec<usize> = (0..table.classes.len())
        .filter(|&c| table.classes[c].max_probability() >= 1.0 - EPS)
        .collect();
    let sub = ClassicalFaultTable {
        n: table.n,
        inputs: table.inputs.clone(),
        good: table.good.clone(),
        names: certain.iter().map(|&c| table.classes[c].name()).collect(),
        entries: (0..table.rows())
            .map(|r| {
                certain
                    .iter()
                    .map(|&c| table.classes[c].probabilities[r] >= 1.0 - EPS)
                    .collect()
            })
            .collect(),
    };
    let deterministic = if certain.is_empty() {
        Vec::new()
    } else {
        greedy_cover(&sub)?.inputs()
    };

    let mut repeated = Vec::new();
    for class in &table.classes {
        let best = class.max_probability();
        if best >= 1.0 - EPS || best <= EPS {
            continue;
        }
        let row = (0..table.rows())
            .filter(|&r| class.probabilities[r] >= best - EPS)
            .min_by_key(|&r| table.inputs[r])
            .expect("some row attains the maximum");
        repeated.push(RepeatedClass {
            class: class.name(),
            input: table.inputs[row],
            probability: best,
            repetitions: repetitions_needed(best, cfg.tau)?,
        });
    }

    let mut sequence = TestSequence::once(table.n, &deterministic);
    let mut grouped: Vec<TestStep> = Vec::new();
    for r in &repeated {
        match grouped.iter_mut().find(|s| s.input == r.input) {
            Some(step) => step.repetitions = step.repetitions.max(r.repetitions),
            None => grouped.push(TestStep {
                input: r.input,
                repetitions: r.repetitions,
            }),
        }
    }
    sequence.steps.extend(grouped);

    let coverage = coverage_gamma(table, &sequence)?;
    let baseline = exhaustive_baseline(table.n as u32, cfg.stages, cfg.zeta).with_plan(sequence.total_executions());
    Ok(TestPlan {
        deterministic,
        repeated,
        sequence,
        coverage,
        baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::FaultClass;

    fn classical(rows: &[&[u8]]) -> ClassicalFaultTable {
        let n = (usize::BITS - (rows.len().max(2) - 1).leading_zeros()) as usize;
        ClassicalFaultTable {
            n,
            inputs: (0..rows.len()).collect(),
            good: (0..rows.len()).collect(),
            names: (0..rows[0].len()).map(|c| format!("f{c}")).collect(),
            entries: rows.iter().map(|r| r.iter().map(|&v| v == 1).collect()).collect(),
        }
    }

    fn quantum(cols: &[(&str, &[f64])]) -> QuantumFaultTable {
        let rows = cols[0].1.len();
        QuantumFaultTable::new(
            2,
            (0..rows).collect(),
            (0..rows).collect(),
            cols.iter()
                .map(|(name, p)| FaultClass {
                    members: vec![name.to_string()],
                    probabilities: p.to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn repetitions_examples() {
        assert_eq!(repetitions_needed(0.5, 0.99).unwrap(), 7);
        assert_eq!(repetitions_needed(1.0, 0.3).unwrap(), 1);
        assert_eq!(repetitions_needed(1.0, 1.0).unwrap(), 1);
        assert_eq!(repetitions_needed(0.9, 0.968).unwrap(), 2);
        assert_eq!(repetitions_needed(0.5, 0.5).unwrap(), 1);
        assert_eq!(repetitions_needed(0.5, 0.75).unwrap(), 2);
        assert_eq!(repetitions_needed(0.0, 0.9), Err(Error::UnreachableCoverage(0.0)));
        assert_eq!(repetitions_needed(0.5, 1.0), Err(Error::UnreachableCoverage(0.5)));
        assert_eq!(repetitions_needed(0.5, 0.0), Err(Error::InvalidThreshold(0.0)));
    }

    #[test]
    fn baseline_examples() {
        let b = exhaustive_baseline(2, 5, 1);
        assert_eq!((b.exhaustive_detect, b.exhaustive_localize_bound), (4, 20));
        let b = exhaustive_baseline(1, 1, 1);
        assert_eq!((b.exhaustive_detect, b.exhaustive_localize_bound), (2, 2));
        let b = exhaustive_baseline(10, 100, 3);
        assert_eq!((b.exhaustive_detect, b.exhaustive_localize_bound), (3072, 307200));
        assert_eq!(b.with_plan(8).to_string(), "exhaustive: 3072 vs plan: 8 executions");
        assert_eq!(exhaustive_baseline(200, 2, 2).exhaustive_detect, u128::MAX);
    }

    #[test]
    fn gamma_examples() {
        let t = quantum(&[("a", &[0.5, 0.0])]);
        let r = coverage_gamma(&t, &TestSequence::new(2)).unwrap();
        assert_eq!(r.gamma("a"), Some(0.0));
        let mut seq = TestSequence::new(2);
        seq.push(0, 3);
        assert!((coverage_gamma(&t, &seq).unwrap().gamma("a").unwrap() - 0.875).abs() < 1e-12);
        seq.push(9, 1);
        assert_eq!(coverage_gamma(&t, &seq), Err(Error::UnknownInput("1001".into())));
    }

    #[test]
    fn greedy_trivial_tables() {
        let all = classical(&[&[0, 0, 0], &[1, 1, 1], &[1, 0, 0]]);
        assert_eq!(greedy_cover(&all).unwrap().inputs(), [1]);
        let diag = classical(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert_eq!(greedy_cover(&diag).unwrap().inputs(), [0, 1, 2, 3]);
        assert_eq!(exact_min_cover(&diag).unwrap().len(), 4);
    }

    #[test]
    fn uncoverable_column_is_named() {
        let t = classical(&[&[1, 0], &[1, 0]]);
        assert_eq!(greedy_cover(&t), Err(Error::UncoverableColumn("f1".into())));
        assert_eq!(exact_min_cover(&t), Err(Error::UncoverableColumn("f1".into())));
    }

    #[test]
    fn exact_single_row() {
        let t = classical(&[&[1, 1]]);
        assert_eq!(exact_min_cover(&t).unwrap().inputs(), [0]);
    }

    #[test]
    fn exact_rejects_large_instances() {
        let rows: Vec<Vec<u8>> = (0..21).map(|_| vec![1]).collect();
        let refs: Vec<&[u8]> = rows.iter().map(|r| r.as_slice()).collect();
        assert_eq!(
            exact_min_cover(&classical(&refs)),
            Err(Error::InstanceTooLarge { rows: 21, limit: 20 })
        );
    }

    #[test]
    fn plan_only_certain_entries() {
        let t = quantum(&[("a", &[1.0, 0.0]), ("b", &[0.0, 1.0])]);
        let plan = plan_tests(&t, &PlanConfig::default()).unwrap();
        assert_eq!(plan.sequence.inputs(), [0, 1]);
        assert!(plan.sequence.steps.iter().all(|s| s.repetitions == 1));
        assert_eq!(plan.coverage.fully_covered(), ["a", "b"]);
    }

    #[test]
    fn plan_shares_repetitions_on_a_row() {
        let t = quantum(&[("a", &[0.5, 0.25]), ("b", &[0.9, 0.0])]);
        let plan = plan_tests(
            &t,
            &PlanConfig {
                tau: 0.99,
                ..PlanConfig::default()
            },
        )
        .unwrap();
        assert_eq!(
            plan.sequence.steps,
            [TestStep {
                input: 0,
                repetitions: 7
            }]
        );
        assert!(plan.coverage.residual(0.99).is_empty());
    }

    #[test]
    fn plan_rejects_bad_threshold() {
        let t = quantum(&[("a", &[0.5])]);
        for tau in [0.0, 1.5, f64::NAN] {
            assert!(matches!(
                plan_tests(
                    &t,
                    &PlanConfig {
                        tau,
                        ..PlanConfig::default()
                    }
                ),
                Err(Error::InvalidThreshold(_))
            ));
        }
    }
}
