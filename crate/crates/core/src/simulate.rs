//! Single-fault injection and computational-basis detection probabilities.

use num_complex::Complex64;

use crate::bits::to_bitstring;
use crate::circuit::{compose, truth_table, Circuit, PermTable, ProductOrder, StageKind, PRODUCT_ORDER};
use crate::error::{Error, Result};
use crate::fault::{fault_operator, Fault};
use crate::matrix::{bit, rotation_gate, ComplexMatrix, TOLERANCE};

/// Stage operators of `circuit` with `fault` applied, in stage-list order.
pub fn faulty_operators(circuit: &Circuit, fault: &Fault) -> Result<Vec<ComplexMatrix>> {
    fault.validate_for(circuit)?;
    let mut ops = circuit.stage_operators();
    match fault {
        Fault::PauliInsertion { division, .. } => {
            ops.insert(division.0 - 1, fault_operator(fault, circuit.n_qubits())?);
        }
        Fault::StageRemoval { stage } => {
            let idx = circuit.stage_index(stage).expect("validated");
            ops.remove(idx);
        }
        Fault::StuckAt { .. } => unreachable!("rejected by validate_for"),
    }
    Ok(ops)
}

/// The operator realised by `circuit` carrying `fault`.
pub fn inject(circuit: &Circuit, fault: &Fault) -> Result<ComplexMatrix> {
    Ok(compose(
        &faulty_operators(circuit, fault)?,
        circuit.n_qubits(),
        PRODUCT_ORDER,
    ))
}

/// `|⟨y|U|x⟩|²` for every basis state `y`.
pub fn output_distribution(u: &ComplexMatrix, input: usize) -> Result<Vec<f64>> {
    if !u.is_unitary(TOLERANCE) {
        return Err(Error::NonUnitary);
    }
    if input >= u.dim() {
        return Err(Error::InvalidBitstring(format!("{input}")));
    }
    Ok(u.column(input).iter().map(|z| z.norm_sqr()).collect())
}

/// Fault-free truth table, required for every detection computation.
pub fn good_table(circuit: &Circuit) -> Result<PermTable> {
    truth_table(&circuit.compile_unitary(), TOLERANCE)
}

/// Probability that measuring `U|x⟩` disagrees with the expected output `good(x)`.
pub fn detection_from_unitary(u: &ComplexMatrix, good: &PermTable, input: usize) -> Result<f64> {
    let dist = output_distribution(u, input)?;
    Ok((1.0 - dist[good.output(input)]).clamp(0.0, 1.0))
}

pub fn detection_prob(circuit: &Circuit, fault: &Fault, input: usize) -> Result<f64> {
    let good = good_table(circuit)?;
    detection_from_unitary(&inject(circuit, fault)?, &good, input)
}

/// Outcome of one basis input under one fault.
#[derive(Clone, Debug, PartialEq)]
pub struct InputOutcome {
    pub input: usize,
    pub expected: usize,
    pub distribution: Vec<f64>,
    pub detection: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionProfile {
    pub fault: Fault,
    pub n_qubits: usize,
    pub per_input: Vec<InputOutcome>,
}

impl DetectionProfile {
    pub fn probabilities(&self) -> Vec<f64> {
        self.per_input.iter().map(|o| o.detection).collect()
    }

    /// Single most likely output of `input` if it is certain.
    pub fn deterministic_output(&self, input: usize) -> Option<usize> {
        let dist = &self.per_input[input].distribution;
        dist.iter().position(|&p| p >= 1.0 - TOLERANCE)
    }

    /// Per-qubit measurement description, e.g. `0(50%) 1(50%) | 1`.
    pub fn outcome_label(&self, input: usize) -> String {
        let dist = &self.per_input[input].distribution;
        (1..=self.n_qubits)
            .map(|q| {
                let one: f64 = dist
                    .iter()
                    .enumerate()
                    .filter(|(y, _)| bit(*y, q, self.n_qubits) == 1)
                    .map(|(_, p)| p)
                    .sum();
                if one <= TOLERANCE {
                    "0".to_string()
                } else if one >= 1.0 - TOLERANCE {
                    "1".to_string()
                } else {
                    format!("0({}%) 1({}%)", percent(1.0 - one), percent(one))
                }
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

fn percent(p: f64) -> String {
    let v = (p * 1000.0).round() / 10.0;
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Detection behaviour of `fault` over every basis input.
pub fn build_profile(circuit: &Circuit, fault: &Fault) -> Result<DetectionProfile> {
    let good = good_table(circuit)?;
    profile_against(circuit, fault, &good)
}

pub(crate) fn profile_against(circuit: &Circuit, fault: &Fault, good: &PermTable) -> Result<DetectionProfile> {
    let u = inject(circuit, fault)?;
    let per_input = (0..u.dim())
        .map(|x| {
            let distribution = output_distribution(&u, x)?;
            let expected = good.output(x);
            let detection = (1.0 - distribution[expected]).clamp(0.0, 1.0);
            Ok(InputOutcome {
                input: x,
                expected,
                distribution,
                detection,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DetectionProfile {
        fault: fault.clone(),
        n_qubits: circuit.n_qubits(),
        per_input,
    })
}

/// Human-readable input label, e.g. `T2(01)`.
pub fn test_label(row: usize, input: usize, n: usize) -> String {
    format!("T{}({})", row + 1, to_bitstring(input, n))
}

/// A second, matrix-free simulation path.
///
/// Gates act directly on a `2^n` amplitude vector without building register-wide
/// operators, so its results can be cross-checked against [`inject`].
pub mod statevector {
    use super::*;

    enum LocalOp {
        Single { gate: [Complex64; 4], qubit: usize },
        Coupling { theta: f64, a: usize, b: usize },
    }

    fn local_ops(circuit: &Circuit, fault: Option<&Fault>) -> Result<Vec<LocalOp>> {
        let as_array = |m: &ComplexMatrix| [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
        let mut ops: Vec<LocalOp> = circuit
            .stages()
            .iter()
            .map(|s| match s.kind {
                StageKind::Rotation { axis, qubit } => LocalOp::Single {
                    gate: as_array(&rotation_gate(axis, s.angle)),
                    qubit,
                },
                StageKind::Coupling { qubits: (a, b) } => LocalOp::Coupling { theta: s.angle, a, b },
            })
            .collect();
        if let Some(fault) = fault {
            fault.validate_for(circuit)?;
            match fault {
                Fault::PauliInsertion { axis, qubit, division } => ops.insert(
                    division.0 - 1,
                    LocalOp::Single {
                        gate: as_array(&axis.pauli()),
                        qubit: *qubit,
                    },
                ),
                Fault::StageRemoval { stage } => {
                    ops.remove(circuit.stage_index(stage).expect("validated"));
                }
                Fault::StuckAt { .. } => unreachable!("rejected by validate_for"),
            }
        }
        Ok(ops)
    }

    fn apply(op: &LocalOp, state: &mut [Complex64], n: usize) {
        match *op {
            LocalOp::Single { gate, qubit } => {
                let stride = 1usize << (n - qubit);
                for base in 0..state.len() {
                    if base & stride != 0 {
                        continue;
                    }
                    let (a0, a1) = (state[base], state[base | stride]);
                    state[base] = gate[0] * a0 + gate[1] * a1;
                    state[base | stride] = gate[2] * a0 + gate[3] * a1;
                }
            }
            LocalOp::Coupling { theta, a, b } => {
                for (x, amp) in state.iter_mut().enumerate() {
                    let z = if bit(x, a, n) == bit(x, b, n) { 1.0 } else { -1.0 };
                    *amp *= Complex64::from_polar(1.0, -z * theta / 2.0);
                }
            }
        }
    }

    /// Final state for basis input `input`, honouring [`PRODUCT_ORDER`].
    pub fn run(circuit: &Circuit, fault: Option<&Fault>, input: usize) -> Result<Vec<Complex64>> {
        let n = circuit.n_qubits();
        let mut state = vec![Complex64::new(0.0, 0.0); 1 << n];
        state[input] = Complex64::new(1.0, 0.0);
        let ops = local_ops(circuit, fault)?;
        match PRODUCT_ORDER {
            ProductOrder::Written => ops.iter().rev().for_each(|op| apply(op, &mut state, n)),
            ProductOrder::Chronological => ops.iter().for_each(|op| apply(op, &mut state, n)),
        }
        Ok(state)
    }

    pub fn detection_prob(circuit: &Circuit, fault: &Fault, input: usize) -> Result<f64> {
        let good = run(circuit, None, input)?;
        let expected = good
            .iter()
            .position(|a| a.norm_sqr() >= 1.0 - TOLERANCE)
            .ok_or(Error::NotPermutative {
                column: input,
                outcomes: good.iter().filter(|a| a.norm_sqr() > TOLERANCE).count(),
            })?;
        let faulty = run(circuit, Some(fault), input)?;
        Ok((1.0 - faulty[expected].norm_sqr()).clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::fault::{FaultModelConfig, FaultUniverse};
    use crate::matrix::Axis;

    fn cnot5() -> Circuit {
        parse_circuit(include_str!("../../../corpus/cnot5.qc")).unwrap()
    }

    fn fault(s: &str) -> Fault {
        s.parse().unwrap()
    }

    fn probs(s: &str) -> Vec<f64> {
        build_profile(&cnot5(), &fault(s)).unwrap().probabilities()
    }

    #[test]
    fn x_on_q1_at_d1_flips_the_target() {
        let c = cnot5();
        assert_eq!(detection_prob(&c, &fault("X-Q1@D1"), 0b00).unwrap(), 1.0);
        let p = build_profile(&c, &fault("X-Q1@D1")).unwrap();
        assert_eq!(p.deterministic_output(0b00), Some(0b10));
    }

    #[test]
    fn identity_insertion_is_never_detected() {
        let c = cnot5();
        let good = good_table(&c).unwrap();
        for d in 0..=c.stages().len() {
            let mut ops = c.stage_operators();
            ops.insert(d, ComplexMatrix::identity(4).unwrap());
            let u = compose(&ops, 2, PRODUCT_ORDER);
            for x in 0..4 {
                assert!(detection_from_unitary(&u, &good, x).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn removal_and_pauli_profiles() {
        // Constant one half: the removal of S2 spreads Q1 evenly over both outcomes.
        for p in probs("S2-removed") {
            assert!((p - 0.5).abs() < 1e-12);
        }
        assert!(probs("Z-Q2@D1").iter().all(|&p| p.abs() < 1e-12));
        assert!(probs("X-Q2@D5").iter().all(|&p| (p - 1.0).abs() < 1e-12));
        // Removing the coupling leaves R_z(Q2)⊗R_x(Q1), which also splits Q1 evenly.
        for p in probs("S4-removed") {
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn z_on_q2_only_changes_phases() {
        let c = cnot5();
        let u = inject(&c, &fault("Z-Q2@D3")).unwrap();
        assert!(!u.phase_equal(&c.compile_unitary(), TOLERANCE).unwrap());
        assert_eq!(truth_table(&u, TOLERANCE).unwrap(), good_table(&c).unwrap());
    }

    #[test]
    fn output_distribution_examples() {
        let c = cnot5();
        let gc = c.compile_unitary();
        let d = output_distribution(&gc, 0b01).unwrap();
        assert!((d[0b11] - 1.0).abs() < 1e-12);
        let s2 = inject(&c, &fault("S2-removed")).unwrap();
        let d = output_distribution(&s2, 0b00).unwrap();
        assert!((d[0b00] - 0.5).abs() < 1e-12 && (d[0b10] - 0.5).abs() < 1e-12);
        let id = ComplexMatrix::identity(4).unwrap();
        assert_eq!(output_distribution(&id, 0b10).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        let ones = ComplexMatrix::from_real_rows(&[&[1., 1.], &[1., 1.]]).unwrap();
        assert_eq!(output_distribution(&ones, 0), Err(Error::NonUnitary));
    }

    #[test]
    fn non_permutative_good_circuit_is_rejected() {
        let c = parse_circuit("qubits 1\nstage H RY 1 0.5pi\n").unwrap();
        let err = detection_prob(&c, &fault("X-Q1@D1"), 0).unwrap_err();
        assert!(matches!(err, Error::NotPermutative { .. }));
    }

    #[test]
    fn invalid_pairings_are_rejected() {
        let c = cnot5();
        assert!(inject(&c, &fault("Sa0@1")).is_err());
        assert!(inject(&c, &fault("X-Q1@D9")).is_err());
        assert!(inject(&c, &fault("S9-removed")).is_err());
    }

    #[test]
    fn outcome_labels_show_marginals() {
        let c = cnot5();
        let p = build_profile(&c, &fault("S2-removed")).unwrap();
        assert_eq!(p.outcome_label(0b00), "0(50%) 1(50%) | 0");
        assert_eq!(p.outcome_label(0b01), "0(50%) 1(50%) | 1");
        let gc = build_profile(&c, &fault("Z-Q2@D2")).unwrap();
        assert_eq!(gc.outcome_label(0b01), "1 | 1");
    }

    #[test]
    fn statevector_path_agrees_with_matrices() {
        let c = cnot5();
        for f in c.enumerate_faults(&FaultModelConfig::QUANTUM).unwrap() {
            let via_matrix = build_profile(&c, &f).unwrap().probabilities();
            for (x, expected) in via_matrix.into_iter().enumerate() {
                let via_state = statevector::detection_prob(&c, &f, x).unwrap();
                assert!((via_state - expected).abs() <= 1e-12, "{f} {x}");
            }
        }
    }

    #[test]
    fn double_insertion_restores_good_operator() {
        let c = cnot5();
        let gc = c.compile_unitary();
        for f in c.enumerate_faults(&"pauli".parse().unwrap()).unwrap() {
            let Fault::PauliInsertion { axis, qubit, division } = f else {
                unreachable!()
            };
            let mut ops = c.stage_operators();
            let op = crate::matrix::lift_single(&Axis::pauli(axis), qubit, 2);
            ops.insert(division.0 - 1, op.clone());
            ops.insert(division.0 - 1, op);
            let u = compose(&ops, 2, PRODUCT_ORDER);
            assert!(u.max_norm_diff(&gc).unwrap() < 1e-12);
        }
    }
}
