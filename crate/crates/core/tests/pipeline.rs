//! End-to-end runs of the five-pulse CNOT through tables, emission and planning.

use qtestgen_core::circuit::{parse_circuit, truth_table, ProductOrder};
use qtestgen_core::cover::{coverage_gamma, plan_tests, PlanConfig};
use qtestgen_core::fault::{Fault, FaultModelConfig, FaultUniverse};
use qtestgen_core::golden;
use qtestgen_core::matrix::TOLERANCE;
use qtestgen_core::simulate::{build_profile, detection_prob, statevector};
use qtestgen_core::table::{
    build_quantum_table, build_quantum_table_with_inputs, emit_table, raw_quantum_table, ClassicalFaultTable,
    TableFormat,
};
use qtestgen_core::Error;

fn universe() -> Vec<Fault> {
    golden::cnot5().enumerate_faults(&FaultModelConfig::QUANTUM).unwrap()
}

#[test]
fn universe_has_41_faults() {
    let faults = universe();
    assert_eq!(faults.len(), 41);
    assert_eq!(faults[0].name(), "X-Q1@D1");
    assert_eq!(faults[35].name(), "Z-Q2@D6");
    assert_eq!(faults[40].name(), "S5-removed");
}

#[test]
fn table_has_two_classes() {
    let table = build_quantum_table(&golden::cnot5(), &universe()).unwrap();
    assert_eq!(table.classes.len(), 2);
    assert_eq!(table.classes[0].members.len(), 24);
    assert_eq!(table.classes[1].name(), "S2-removed|S4-removed|S5-removed");
    assert_eq!(table.undetectable.len(), 14);
    assert_eq!(table.all_members().len(), 41);
}

#[test]
fn matrix_and_statevector_paths_agree() {
    let c = golden::cnot5();
    for f in universe() {
        for x in 0..4 {
            let a = detection_prob(&c, &f, x).unwrap();
            let b = statevector::detection_prob(&c, &f, x).unwrap();
            assert!((a - b).abs() < 1e-12, "{f} on {x}: {a} vs {b}");
        }
    }
}

#[test]
fn input_order_changes_presentation_only() {
    let c = golden::cnot5();
    let faults = universe();
    let natural = build_quantum_table(&c, &faults).unwrap();
    let shuffled = build_quantum_table_with_inputs(&c, &faults, &[3, 1, 0, 2]).unwrap();
    let members = |t: &qtestgen_core::QuantumFaultTable| {
        let mut v: Vec<Vec<String>> = t
            .classes
            .iter()
            .map(|k| {
                let mut m = k.members.clone();
                m.sort();
                m
            })
            .collect();
        v.sort();
        v
    };
    assert_eq!(members(&natural), members(&shuffled));
    assert_eq!(shuffled.good, [0b01, 0b11, 0b00, 0b10]);
}

#[test]
fn unknown_input_rows_are_rejected() {
    let c = golden::cnot5();
    assert_eq!(
        raw_quantum_table(&c, &universe(), &[0, 4]).unwrap_err(),
        Error::UnknownInput("4".into())
    );
}

#[test]
fn csv_is_deterministic() {
    let c = golden::cnot5();
    let a = emit_table(&build_quantum_table(&c, &universe()).unwrap(), TableFormat::Csv, None);
    let b = emit_table(&build_quantum_table(&c, &universe()).unwrap(), TableFormat::Csv, None);
    assert_eq!(a, b);
    assert!(a.lines().nth(1).unwrap().ends_with(",1,.5"));
    let fixed = emit_table(
        &build_quantum_table(&c, &universe()).unwrap(),
        TableFormat::Csv,
        Some(2),
    );
    assert!(fixed.lines().nth(1).unwrap().ends_with(",1.00,0.50"));
}

#[test]
fn pauli_only_table_binarises() {
    let c = golden::cnot5();
    let pauli = c.enumerate_faults(&"pauli".parse().unwrap()).unwrap();
    let q = build_quantum_table(&c, &pauli).unwrap();
    let b = ClassicalFaultTable::from_quantum(&q).unwrap();
    assert!(b.entries.iter().all(|row| row.iter().all(|&d| d)));
    assert_eq!(b.to_quantum().classes.len(), q.classes.len());
}

#[test]
fn removal_outcome_labels_for_half_spread() {
    let p = build_profile(&golden::cnot5(), &"S5-removed".parse().unwrap()).unwrap();
    assert_eq!(p.outcome_label(0b01), "0(50%) 1(50%) | 1");
    assert_eq!(p.deterministic_output(0b01), None);
    let p = build_profile(&golden::cnot5(), &"S1-removed".parse().unwrap()).unwrap();
    assert_eq!(p.deterministic_output(0b01), Some(0b11));
}

#[test]
fn chronological_order_relabels_divisions() {
    let c = golden::cnot5();
    let chrono = c.compile_with(ProductOrder::Chronological);
    assert!(truth_table(&chrono, TOLERANCE).unwrap().mapping != golden::CNOT_MAPPING);
}

#[test]
fn empty_circuit_is_identity() {
    let c = parse_circuit("qubits 2\n").unwrap();
    assert_eq!(
        truth_table(&c.compile_unitary(), TOLERANCE).unwrap().mapping,
        [0, 1, 2, 3]
    );
    let faults = c.enumerate_faults(&FaultModelConfig::QUANTUM).unwrap();
    assert_eq!(faults.len(), 6);
}

#[test]
fn plan_reaches_threshold() {
    let table = build_quantum_table(&golden::cnot5(), &universe()).unwrap();
    for tau in [0.5, 0.9, 0.99, 0.999] {
        let plan = plan_tests(
            &table,
            &PlanConfig {
                tau,
                zeta: 1,
                stages: 5,
            },
        )
        .unwrap();
        let report = coverage_gamma(&table, &plan.sequence).unwrap();
        assert!(report.residual(tau).is_empty(), "tau {tau}");
        assert_eq!(report, plan.coverage);
    }
    let plan = plan_tests(
        &table,
        &PlanConfig {
            tau: 0.5,
            zeta: 1,
            stages: 5,
        },
    )
    .unwrap();
    assert_eq!(plan.sequence.total_executions(), 2);
    assert!(matches!(
        plan_tests(
            &table,
            &PlanConfig {
                tau: 1.0,
                zeta: 1,
                stages: 5
            }
        ),
        Err(Error::UnreachableCoverage(_))
    ));
}
