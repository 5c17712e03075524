//! Pulse-sequence circuits: stages, division slots, compilation and truth tables.
//!
//! A circuit file is line oriented, `#` starts a comment:
//!
//! ```text
//! qubits 2
//! stage S1 RZ 2 +0.5pi
//! stage S4 J 1 2 -0.5pi
//! ```
//!
//! Angles are radians, written either as plain decimals or as multiples of π
//! (`0.5pi`, `-pi`, `pi/4`, `-3pi/2`).

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::bits::to_bitstring;
use crate::error::{Error, Result};
use crate::matrix::{lift_coupling, lift_single, rotation_gate, Axis, ComplexMatrix};

/// How a list of stage operators `M1, M2, …, Mm` is multiplied into one operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductOrder {
    /// `U = M1·M2⋯Mm`: stages are factors of the operator product as written,
    /// so the last-listed stage is the first to act on a state.
    Written,
    /// `U = Mm⋯M2·M1`: the first-listed stage acts first.
    Chronological,
}

/// Product order used by [`Circuit::compile_unitary`] and fault injection.
///
/// `Written` is the only order under which the CNOT pulse sequence in
/// `corpus/cnot5.qc` reproduces the reference faulty-operator matrices in `golden` and
/// D1..D6 / S1..S5 labelling; `Chronological` reproduces the fault-free CNOT
/// but mislabels the division slots.
pub const PRODUCT_ORDER: ProductOrder = ProductOrder::Written;

#[derive(Clone, Debug, PartialEq)]
pub enum StageKind {
    Rotation { axis: Axis, qubit: usize },
    Coupling { qubits: (usize, usize) },
}

/// One pulse of the sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub label: String,
    pub kind: StageKind,
    /// Radians.
    pub angle: f64,
}

impl Stage {
    pub fn rotation(label: impl Into<String>, axis: Axis, qubit: usize, angle: f64) -> Self {
        Self {
            label: label.into(),
            kind: StageKind::Rotation { axis, qubit },
            angle,
        }
    }

    pub fn coupling(label: impl Into<String>, a: usize, b: usize, angle: f64) -> Self {
        Self {
            label: label.into(),
            kind: StageKind::Coupling { qubits: (a, b) },
            angle,
        }
    }

    /// The stage's unitary on an `n_qubits` register.
    pub fn operator(&self, n_qubits: usize) -> ComplexMatrix {
        match self.kind {
            StageKind::Rotation { axis, qubit } => lift_single(&rotation_gate(axis, self.angle), qubit, n_qubits),
            StageKind::Coupling { qubits: (a, b) } => lift_coupling(self.angle, a, b, n_qubits),
        }
    }

    /// The stage undoing this one.
    pub fn inverse(&self) -> Stage {
        Stage {
            label: format!("{}_inv", self.label),
            kind: self.kind.clone(),
            angle: -self.angle,
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match self.kind {
            StageKind::Rotation { qubit, .. } => vec![qubit],
            StageKind::Coupling { qubits: (a, b) } => vec![a, b],
        }
    }
}

/// Insertion slot `D<index>`, 1-based: slot `k` sits immediately before stage
/// `k`, and slot `stages + 1` after the last stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Division(pub usize);

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    stages: Vec<Stage>,
}

impl Circuit {
    pub fn new(n_qubits: usize, stages: Vec<Stage>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Parse {
                line: 0,
                message: "circuit needs at least one qubit".into(),
            });
        }
        let mut labels = HashSet::new();
        for stage in &stages {
            validate_stage(stage, n_qubits).map_err(|message| Error::Parse { line: 0, message })?;
            if !labels.insert(stage.label.clone()) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate stage label `{}`", stage.label),
                });
            }
        }
        Ok(Self { n_qubits, stages })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage_index(&self, label: &str) -> Option<usize> {
        self.stages.iter().position(|s| s.label == label)
    }

    /// Number of division slots per qubit.
    pub fn division_count(&self) -> usize {
        self.stages.len() + 1
    }

    pub fn stage_operators(&self) -> Vec<ComplexMatrix> {
        self.stages.iter().map(|s| s.operator(self.n_qubits)).collect()
    }

    pub fn compile_unitary(&self) -> ComplexMatrix {
        self.compile_with(PRODUCT_ORDER)
    }

    pub fn compile_with(&self, order: ProductOrder) -> ComplexMatrix {
        compose(&self.stage_operators(), self.n_qubits, order)
    }

    /// All `(qubit, division)` slots, qubit-major.
    pub fn enumerate_divisions(&self) -> Vec<(usize, Division)> {
        (1..=self.n_qubits)
            .flat_map(|q| (1..=self.division_count()).map(move |d| (q, Division(d))))
            .collect()
    }

    /// A copy with the stage-wise inverse appended in reverse order; compiles to the identity.
    pub fn followed_by_inverse(&self) -> Circuit {
        let mut stages = self.stages.clone();
        stages.extend(self.stages.iter().rev().map(Stage::inverse));
        Circuit {
            n_qubits: self.n_qubits,
            stages,
        }
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_circuit(s)
    }
}

/// Multiply stage operators according to `order`.
pub fn compose(operators: &[ComplexMatrix], n_qubits: usize, order: ProductOrder) -> ComplexMatrix {
    let id = ComplexMatrix::identity_qubits(n_qubits);
    match order {
        ProductOrder::Written => operators
            .iter()
            .fold(id, |acc, m| acc.mat_mul(m).expect("stage dimensions agree")),
        ProductOrder::Chronological => operators
            .iter()
            .fold(id, |acc, m| m.mat_mul(&acc).expect("stage dimensions agree")),
    }
}

fn validate_stage(stage: &Stage, n_qubits: usize) -> std::result::Result<(), String> {
    for q in stage.qubits() {
        if q == 0 || q > n_qubits {
            return Err(format!(
                "stage `{}`: qubit {q} out of range 1..={n_qubits}",
                stage.label
            ));
        }
    }
    if let StageKind::Coupling { qubits: (a, b) } = stage.kind {
        if a == b {
            return Err(format!("stage `{}`: coupling qubits must differ", stage.label));
        }
    }
    if !stage.angle.is_finite() {
        return Err(format!("stage `{}`: angle is not finite", stage.label));
    }
    Ok(())
}

/// Parse the circuit text format.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut stages: Vec<Stage> = Vec::new();
    let mut labels = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "qubits" => {
                if n_qubits.is_some() {
                    return Err(err("`qubits` given twice".into()));
                }
                let [_, count] = tokens[..] else {
                    return Err(err("expected `qubits <n>`".into()));
                };
                let n: usize = count
                    .parse()
                    .map_err(|_| err(format!("invalid qubit count `{count}`")))?;
                if n == 0 {
                    return Err(err("qubit count must be at least 1".into()));
                }
                n_qubits = Some(n);
            }
            "stage" => {
                let n = n_qubits.ok_or_else(|| err("`stage` before `qubits`".into()))?;
                let stage = parse_stage(&tokens).map_err(err)?;
                validate_stage(&stage, n).map_err(err)?;
                if !labels.insert(stage.label.clone()) {
                    return Err(err(format!("duplicate stage label `{}`", stage.label)));
                }
                stages.push(stage);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let n_qubits = n_qubits.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `qubits` directive".into(),
    })?;
    Ok(Circuit { n_qubits, stages })
}

fn parse_stage(tokens: &[&str]) -> std::result::Result<Stage, String> {
    let qubit = |s: &str| s.parse::<usize>().map_err(|_| format!("invalid qubit index `{s}`"));
    let angle = |s: &str| parse_angle(s).ok_or_else(|| format!("invalid angle `{s}`"));
    match tokens {
        [_, label, gate @ ("RX" | "RY" | "RZ"), q, a] => {
            let axis: Axis = gate[1..].parse()?;
            Ok(Stage::rotation(*label, axis, qubit(q)?, angle(a)?))
        }
        [_, label, "J", qa, qb, a] => Ok(Stage::coupling(*label, qubit(qa)?, qubit(qb)?, angle(a)?)),
        [_, _, gate, ..] if !matches!(*gate, "RX" | "RY" | "RZ" | "J") => Err(format!("unknown gate `{gate}`")),
        _ => {
            Err("expected `stage <label> RX|RY|RZ <qubit> <angle>` or `stage <label> J <qubit> <qubit> <angle>`".into())
        }
    }
}

/// Parse an angle: decimal radians, or `[±][c]pi[/d]` meaning `c·π/d`.
pub fn parse_angle(s: &str) -> Option<f64> {
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite());
    };
    let (coef, rest) = (&s[..pos], &s[pos + 2..]);
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().ok()?,
    };
    let denom = match rest {
        "" => 1.0,
        r => r.strip_prefix('/')?.parse::<f64>().ok().filter(|d| *d != 0.0)?,
    };
    let value = coef * PI / denom;
    value.is_finite().then_some(value)
}

/// Truth table of a permutative operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermTable {
    pub n: usize,
    /// `mapping[x]` is the output basis state for input `x`.
    pub mapping: Vec<usize>,
}

impl PermTable {
    pub fn output(&self, input: usize) -> usize {
        self.mapping[input]
    }
}

impl fmt::Display for PermTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in self.mapping.iter().enumerate() {
            writeln!(f, "{} -> {}", to_bitstring(x, self.n), to_bitstring(*y, self.n))?;
        }
        Ok(())
    }
}

/// Extract the basis-state mapping of `u`, failing if some column spreads over
/// several outcomes.
pub fn truth_table(u: &ComplexMatrix, tol: f64) -> Result<PermTable> {
    let dim = u.dim();
    let mut mapping = Vec::with_capacity(dim);
    for col in 0..dim {
        let support: Vec<usize> = (0..dim).filter(|&r| u.get(r, col).norm() > tol).collect();
        match support[..] {
            [row] if (u.get(row, col).norm() - 1.0).abs() <= tol => mapping.push(row),
            _ => {
                return Err(Error::NotPermutative {
                    column: col,
                    outcomes: support.len(),
                })
            }
        }
    }
    let mut seen = vec![false; dim];
    for &y in &mapping {
        if std::mem::replace(&mut seen[y], true) {
            return Err(Error::NonUnitary);
        }
    }
    Ok(PermTable {
        n: u.n_qubits(),
        mapping,
    })
}
