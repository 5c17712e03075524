//! The single-fault universe: Pauli insertions, stage removals and stuck-at lines.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Division};
use crate::error::{Error, Result};
use crate::matrix::{lift_single, Axis, ComplexMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fault {
    /// A Pauli generator inserted on `qubit` at division slot `division`.
    PauliInsertion {
        axis: Axis,
        qubit: usize,
        division: Division,
    },
    /// The named stage is missing from the sequence.
    StageRemoval { stage: String },
    /// A wire segment of a reversible circuit forced to a constant.
    StuckAt { value: bool, location: usize },
}

impl Fault {
    /// Stable name used in every table, e.g. `X-Q1@D4`, `S2-removed`, `Sa0@3`.
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Checks indices against `circuit`.
    pub fn validate_for(&self, circuit: &Circuit) -> Result<()> {
        let invalid = |reason: String| Error::InvalidFault {
            fault: self.name(),
            reason,
        };
        match self {
            Fault::PauliInsertion { qubit, division, .. } => {
                if *qubit == 0 || *qubit > circuit.n_qubits() {
                    return Err(invalid(format!("qubit outside 1..={}", circuit.n_qubits())));
                }
                if division.0 == 0 || division.0 > circuit.division_count() {
                    return Err(invalid(format!("division outside D1..=D{}", circuit.division_count())));
                }
                Ok(())
            }
            Fault::StageRemoval { stage } => circuit
                .stage_index(stage)
                .map(|_| ())
                .ok_or_else(|| invalid("no such stage".into())),
            Fault::StuckAt { .. } => Err(invalid("stuck-at faults apply to reversible circuits only".into())),
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::PauliInsertion { axis, qubit, division } => write!(f, "{axis}-Q{qubit}@{division}"),
            Fault::StageRemoval { stage } => write!(f, "{stage}-removed"),
            Fault::StuckAt { value, location } => write!(f, "Sa{}@{location}", u8::from(*value)),
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidFault {
            fault: s.to_string(),
            reason: "unrecognised fault name".into(),
        };
        let positive = |t: &str| t.parse::<usize>().ok().filter(|&v| v > 0);
        if let Some(stage) = s.strip_suffix("-removed") {
            if stage.is_empty() || stage.contains(char::is_whitespace) {
                return Err(invalid());
            }
            return Ok(Fault::StageRemoval {
                stage: stage.to_string(),
            });
        }
        if let Some(rest) = s.strip_prefix("Sa") {
            let (value, loc) = rest.split_once('@').ok_or_else(invalid)?;
            let value = match value {
                "0" => false,
                "1" => true,
                _ => return Err(invalid()),
            };
            let location = positive(loc).ok_or_else(invalid)?;
            return Ok(Fault::StuckAt { value, location });
        }
        let (axis, rest) = s.split_once("-Q").ok_or_else(invalid)?;
        let (qubit, division) = rest.split_once("@D").ok_or_else(invalid)?;
        Ok(Fault::PauliInsertion {
            axis: axis.parse().map_err(|_| invalid())?,
            qubit: positive(qubit).ok_or_else(invalid)?,
            division: Division(positive(division).ok_or_else(invalid)?),
        })
    }
}

/// Which fault kinds make up the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaultModelConfig {
    pub pauli: bool,
    pub removal: bool,
    pub stuck_at: bool,
}

impl FaultModelConfig {
    pub const QUANTUM: Self = Self {
        pauli: true,
        removal: true,
        stuck_at: false,
    };
    pub const CLASSICAL: Self = Self {
        pauli: false,
        removal: false,
        stuck_at: true,
    };

    pub fn validate(&self) -> Result<()> {
        if self.pauli || self.removal || self.stuck_at {
            Ok(())
        } else {
            Err(Error::EmptyFaultModel)
        }
    }
}

impl FromStr for FaultModelConfig {
    type Err = Error;

    /// Comma-separated kinds: `pauli,removal,stuckat`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = FaultModelConfig {
            pauli: false,
            removal: false,
            stuck_at: false,
        };
        for kind in s.split(',').map(str::trim).filter(|k| !k.is_empty()) {
            match kind {
                "pauli" => cfg.pauli = true,
                "removal" => cfg.removal = true,
                "stuckat" | "stuck-at" => cfg.stuck_at = true,
                other => {
                    return Err(Error::InvalidFault {
                        fault: other.to_string(),
                        reason: "unknown fault kind (expected pauli, removal or stuckat)".into(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Anything that can enumerate its own single-fault universe.
pub trait FaultUniverse {
    fn enumerate_faults(&self, cfg: &FaultModelConfig) -> Result<Vec<Fault>>;
}

impl FaultUniverse for Circuit {
    /// Pauli insertions axis-major, then qubit, then division; removals follow in stage order.
    fn enumerate_faults(&self, cfg: &FaultModelConfig) -> Result<Vec<Fault>> {
        cfg.validate()?;
        if cfg.stuck_at {
            return Err(Error::InvalidFault {
                fault: "stuckat".into(),
                reason: "stuck-at faults apply to reversible circuits only".into(),
            });
        }
        let mut faults = Vec::new();
        if cfg.pauli {
            for axis in Axis::ALL {
                for (qubit, division) in self.enumerate_divisions() {
                    faults.push(Fault::PauliInsertion { axis, qubit, division });
                }
            }
        }
        if cfg.removal {
            faults.extend(
                self.stages()
                    .iter()
                    .map(|s| Fault::StageRemoval { stage: s.label.clone() }),
            );
        }
        Ok(faults)
    }
}

pub fn enumerate_faults<C: FaultUniverse + ?Sized>(circuit: &C, cfg: &FaultModelConfig) -> Result<Vec<Fault>> {
    circuit.enumerate_faults(cfg)
}

/// The register-wide operator of a Pauli insertion.
pub fn fault_operator(fault: &Fault, n_qubits: usize) -> Result<ComplexMatrix> {
    match fault {
        Fault::PauliInsertion { axis, qubit, .. } if (1..=n_qubits).contains(qubit) => {
            Ok(lift_single(&axis.pauli(), *qubit, n_qubits))
        }
        Fault::PauliInsertion { .. } => Err(Error::InvalidFault {
            fault: fault.name(),
            reason: format!("qubit outside 1..={n_qubits}"),
        }),
        _ => Err(Error::InvalidFault {
            fault: fault.name(),
            reason: "only Pauli insertions have an operator".into(),
        }),
    }
}
