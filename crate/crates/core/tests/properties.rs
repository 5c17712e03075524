//! Randomised checks of the algebraic and solver invariants.

use proptest::prelude::*;

use qtestgen_core::circuit::{Circuit, Stage};
use qtestgen_core::cover::{repetitions_needed, TestSequence};
use qtestgen_core::fault::{Fault, FaultModelConfig, FaultUniverse};
use qtestgen_core::matrix::{lift_single, rotation_gate, Axis, ComplexMatrix};
use qtestgen_core::simulate::{detection_prob, statevector};
use qtestgen_core::table::{emit_table, format_probability, FaultClass, QuantumFaultTable, TableFormat};

fn arb_axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((arb_axis(), 1..=n, 1..=n, -6.3f64..6.3, any::<bool>()), 0..5).prop_map(move |params| {
            let stages = params
                .into_iter()
                .enumerate()
                .map(|(i, (axis, a, b, theta, couple))| {
                    if couple && a != b {
                        Stage::coupling(format!("P{i}"), a, b, theta)
                    } else {
                        Stage::rotation(format!("P{i}"), axis, a, theta)
                    }
                })
                .collect();
            Circuit::new(n, stages).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rotations_are_unitary(axis in arb_axis(), theta in -10.0f64..10.0, q in 1usize..=3) {
        prop_assert!(lift_single(&rotation_gate(axis, theta), q, 3).is_unitary(1e-9));
    }

    #[test]
    fn dagger_is_an_involution(axis in arb_axis(), theta in -10.0f64..10.0) {
        let g = rotation_gate(axis, theta);
        prop_assert!(g.dagger().dagger().max_norm_diff(&g).unwrap() < 1e-15);
    }

    #[test]
    fn kron_dimensions_multiply(a in 1usize..=2, b in 1usize..=2) {
        let m = ComplexMatrix::identity_qubits(a).kron(&ComplexMatrix::identity_qubits(b));
        prop_assert_eq!(m.n_qubits(), a + b);
    }

    #[test]
    fn inverse_appended_gives_identity(c in arb_circuit()) {
        let id = ComplexMatrix::identity_qubits(c.n_qubits());
        prop_assert!(c.followed_by_inverse().compile_unitary().phase_equal(&id, 1e-9).unwrap());
    }

    #[test]
    fn statevector_matches_matrix_path(c in arb_circuit(), pick in any::<prop::sample::Index>(), x in any::<prop::sample::Index>()) {
        let faults = c.enumerate_faults(&FaultModelConfig::QUANTUM).unwrap();
        let f = &faults[pick.index(faults.len())];
        let input = x.index(1 << c.n_qubits());
        let matrix = qtestgen_core::simulate::inject(&c, f).unwrap();
        let state = statevector::run(&c, Some(f), input).unwrap();
        for (row, amp) in state.iter().enumerate() {
            prop_assert!((matrix.get(row, input) - amp).norm() < 1e-12);
        }
    }

    #[test]
    fn repetition_count_is_tight(p in 0.01f64..1.0, tau in 0.01f64..0.999) {
        let k = repetitions_needed(p, tau).unwrap() as i32;
        prop_assert!(1.0 - (1.0 - p).powi(k) >= tau - 1e-12);
        if k > 1 {
            prop_assert!(1.0 - (1.0 - p).powi(k - 1) < tau);
        }
    }

    #[test]
    fn fault_names_round_trip(axis in arb_axis(), q in 1usize..9, d in 1usize..20) {
        let f = Fault::PauliInsertion { axis, qubit: q, division: qtestgen_core::Division(d) };
        prop_assert_eq!(f.name().parse::<Fault>().unwrap(), f);
    }

    #[test]
    fn probability_text_parses_back(p in 0.0f64..=1.0) {
        let text = format_probability(p, None);
        let back: f64 = text.parse().unwrap();
        prop_assert!((back - p).abs() < 1e-9);
    }

    #[test]
    fn binary_gamma_is_set_cover(entries in prop::collection::vec(prop::collection::vec(any::<bool>(), 3), 4), picks in prop::collection::vec(0usize..4, 0..4)) {
        let classes = (0..3)
            .map(|c| FaultClass {
                members: vec![format!("f{c}")],
                probabilities: entries.iter().map(|r| if r[c] { 1.0 } else { 0.0 }).collect(),
            })
            .collect();
        let t = QuantumFaultTable::new(2, vec![0, 1, 2, 3], vec![0, 1, 2, 3], classes).unwrap();
        let report = qtestgen_core::coverage_gamma(&t, &TestSequence::once(2, &picks)).unwrap();
        for (c, cov) in report.classes.iter().enumerate() {
            let hit = picks.iter().any(|&r| entries[r][c]);
            prop_assert_eq!(cov.fully_covered(), hit);
            prop_assert!(cov.gamma == 0.0 || hit);
        }
    }
}

#[test]
fn detection_on_identity_circuit_is_zero_for_z() {
    let c = Circuit::new(2, vec![]).unwrap();
    for q in 1..=2 {
        let f: Fault = format!("Z-Q{q}@D1").parse().unwrap();
        for x in 0..4 {
            assert_eq!(detection_prob(&c, &f, x).unwrap(), 0.0);
        }
    }
    let t = QuantumFaultTable::new(2, vec![0], vec![0], vec![]).unwrap();
    assert_eq!(emit_table(&t, TableFormat::Csv, None), "input,GC\n00,00\n");
}
