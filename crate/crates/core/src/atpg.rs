//! Stuck-at fault simulation for classical reversible circuits.
//!
//! Line 1 is the most significant bit of an input. Every line has one wire
//! segment per gate boundary; locations are numbered line by line, so a single
//! CNOT has `1 = a-in`, `2 = a-out`, `3 = b-in`, `4 = b-out`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fault::{Fault, FaultModelConfig, FaultUniverse};
use crate::table::{ClassicalFaultTable, ReversibleColumn, ReversibleFaultTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReversibleGate {
    Not { target: usize },
    Cnot { control: usize, target: usize },
    Toffoli { controls: (usize, usize), target: usize },
}

impl ReversibleGate {
    fn lines(&self) -> Vec<usize> {
        match *self {
            ReversibleGate::Not { target } => vec![target],
            ReversibleGate::Cnot { control, target } => vec![control, target],
            ReversibleGate::Toffoli { controls, target } => vec![controls.0, controls.1, target],
        }
    }

    /// Apply to a state where `values[line - 1]` is the bit on `line`.
    fn apply(&self, values: &mut [bool]) {
        match *self {
            ReversibleGate::Not { target } => values[target - 1] ^= true,
            ReversibleGate::Cnot { control, target } => values[target - 1] ^= values[control - 1],
            ReversibleGate::Toffoli { controls, target } => {
                values[target - 1] ^= values[controls.0 - 1] && values[controls.1 - 1]
            }
        }
    }
}

impl fmt::Display for ReversibleGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReversibleGate::Not { target } => write!(f, "NOT {target}"),
            ReversibleGate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            ReversibleGate::Toffoli { controls, target } => {
                write!(f, "TOFFOLI {} {} {target}", controls.0, controls.1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleCircuit {
    lines: usize,
    gates: Vec<ReversibleGate>,
}

/// A wire segment forced to a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StuckAtSite {
    pub location: usize,
    pub value: bool,
}

impl StuckAtSite {
    pub fn fault(self) -> Fault {
        Fault::StuckAt {
            value: self.value,
            location: self.location,
        }
    }
}

impl TryFrom<&Fault> for StuckAtSite {
    type Error = Error;

    fn try_from(f: &Fault) -> Result<Self> {
        match *f {
            Fault::StuckAt { value, location } => Ok(StuckAtSite { location, value }),
            _ => Err(Error::InvalidFault {
                fault: f.name(),
                reason: "reversible circuits only take stuck-at faults".into(),
            }),
        }
    }
}

impl ReversibleCircuit {
    pub fn new(lines: usize, gates: Vec<ReversibleGate>) -> Result<Self> {
        if lines == 0 {
            return Err(Error::InvalidDimension(0));
        }
        for (i, gate) in gates.iter().enumerate() {
            let used = gate.lines();
            let distinct: HashSet<_> = used.iter().collect();
            if used.iter().any(|&l| l == 0 || l > lines) || distinct.len() != used.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("gate `{gate}` needs distinct lines in 1..={lines}"),
                });
            }
        }
        Ok(Self { lines, gates })
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn gates(&self) -> &[ReversibleGate] {
        &self.gates
    }

    pub fn location_count(&self) -> usize {
        self.lines * (self.gates.len() + 1)
    }

    /// Location of `line` after `boundary` gates.
    pub fn location_of(&self, line: usize, boundary: usize) -> usize {
        (line - 1) * (self.gates.len() + 1) + boundary + 1
    }

    /// `(line, boundary)` of a location.
    pub fn segment(&self, location: usize) -> Option<(usize, usize)> {
        if location == 0 || location > self.location_count() {
            return None;
        }
        let per_line = self.gates.len() + 1;
        Some(((location - 1) / per_line + 1, (location - 1) % per_line))
    }

    pub fn validate_site(&self, site: StuckAtSite) -> Result<()> {
        match self.segment(site.location) {
            Some(_) => Ok(()),
            None => Err(Error::InvalidFault {
                fault: site.fault().name(),
                reason: format!("location outside 1..={}", self.location_count()),
            }),
        }
    }

    fn unpack(&self, x: usize) -> Vec<bool> {
        (1..=self.lines).map(|l| (x >> (self.lines - l)) & 1 == 1).collect()
    }

    fn pack(&self, values: &[bool]) -> usize {
        values.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    fn run(&self, x: usize, site: Option<(usize, usize, bool)>) -> usize {
        let mut values = self.unpack(x);
        let force = |values: &mut [bool], boundary: usize| {
            if let Some((line, b, v)) = site {
                if b == boundary {
                    values[line - 1] = v;
                }
            }
        };
        force(&mut values, 0);
        for (i, gate) in self.gates.iter().enumerate() {
            gate.apply(&mut values);
            force(&mut values, i + 1);
        }
        self.pack(&values)
    }

    /// Fault-free output.
    pub fn evaluate(&self, x: usize) -> usize {
        self.run(x, None)
    }

    pub fn truth_table(&self) -> Vec<usize> {
        (0..1usize << self.lines).map(|x| self.evaluate(x)).collect()
    }
}

/// Output of `c` on `x` with `site` forced.
pub fn simulate_stuckat(c: &ReversibleCircuit, site: StuckAtSite, x: usize) -> Result<usize> {
    let (line, boundary) = c.segment(site.location).ok_or_else(|| Error::InvalidFault {
        fault: site.fault().name(),
        reason: format!("location outside 1..={}", c.location_count()),
    })?;
    if x >= 1usize << c.lines {
        return Err(Error::UnknownInput(x.to_string()));
    }
    Ok(c.run(x, Some((line, boundary, site.value))))
}

impl FaultUniverse for ReversibleCircuit {
    /// All stuck-at-0 sites by location, then all stuck-at-1 sites.
    fn enumerate_faults(&self, cfg: &FaultModelConfig) -> Result<Vec<Fault>> {
        cfg.validate()?;
        if cfg.pauli || cfg.removal {
            return Err(Error::InvalidFault {
                fault: if cfg.pauli { "pauli" } else { "removal" }.into(),
                reason: "reversible circuits only take stuck-at faults".into(),
            });
        }
        Ok([false, true]
            .into_iter()
            .flat_map(|value| (1..=self.location_count()).map(move |location| Fault::StuckAt { value, location }))
            .collect())
    }
}

/// Output table and detectability table over the full stuck-at universe.
pub fn build_stuckat_tables(c: &ReversibleCircuit) -> Result<(ReversibleFaultTable, ClassicalFaultTable)> {
    let inputs: Vec<usize> = (0..1usize << c.lines).collect();
    let columns = c
        .enumerate_faults(&FaultModelConfig::CLASSICAL)?
        .iter()
        .map(|f| {
            let site = StuckAtSite::try_from(f)?;
            Ok(ReversibleColumn {
                name: f.name(),
                outputs: inputs
                    .iter()
                    .map(|&x| simulate_stuckat(c, site, x))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let outputs = ReversibleFaultTable {
        n: c.lines,
        good: c.truth_table(),
        inputs,
        columns,
    };
    let binary = outputs.to_classical();
    Ok((outputs, binary))
}

/// Parse `lines <n>` followed by `gate NOT|CNOT|TOFFOLI <lines…>` directives.
pub fn parse_reversible(text: &str) -> Result<ReversibleCircuit> {
    let mut lines: Option<usize> = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| Error::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "lines" => {
                if lines.is_some() {
                    return Err(err("`lines` given twice".into()));
                }
                let [_, count] = tokens[..] else {
                    return Err(err("expected `lines <n>`".into()));
                };
                match count.parse::<usize>() {
                    Ok(n) if n > 0 => lines = Some(n),
                    _ => return Err(err(format!("invalid line count `{count}`"))),
                }
            }
            "gate" => {
                let n = lines.ok_or_else(|| err("`gate` before `lines`".into()))?;
                let idx: Vec<usize> = tokens
                    .iter()
                    .skip(2)
                    .map(|t| t.parse().map_err(|_| err(format!("invalid line index `{t}`"))))
                    .collect::<Result<_>>()?;
                let name = tokens.get(1).map(|s| s.to_ascii_uppercase()).unwrap_or_default();
                let gate = match (name.as_str(), &idx[..]) {
                    ("NOT", &[target]) => ReversibleGate::Not { target },
                    ("CNOT", &[control, target]) => ReversibleGate::Cnot { control, target },
                    ("TOFFOLI" | "CCNOT", &[a, b, target]) => ReversibleGate::Toffoli {
                        controls: (a, b),
                        target,
                    },
                    _ => {
                        return Err(err(
                            "expected `gate NOT t`, `gate CNOT c t` or `gate TOFFOLI c1 c2 t`".into()
                        ))
                    }
                };
                let used = gate.lines();
                let distinct: HashSet<_> = used.iter().collect();
                if used.iter().any(|&l| l == 0 || l > n) || distinct.len() != used.len() {
                    return Err(err(format!("gate `{gate}` needs distinct lines in 1..={n}")));
                }
                gates.push(gate);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let lines = lines.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `lines` directive".into(),
    })?;
    ReversibleCircuit::new(lines, gates)
}

impl FromStr for ReversibleCircuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_reversible(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnot() -> ReversibleCircuit {
        parse_reversible(include_str!("../../../corpus/cnot.rc")).unwrap()
    }

    fn site(value: bool, location: usize) -> StuckAtSite {
        StuckAtSite { location, value }
    }

    #[test]
    fn cnot_truth_table() {
        assert_eq!(cnot().truth_table(), [0b00, 0b01, 0b11, 0b10]);
    }

    #[test]
    fn stuck_at_examples() {
        let c = cnot();
        assert_eq!(simulate_stuckat(&c, site(false, 1), 0b10).unwrap(), 0b00);
        assert_eq!(simulate_stuckat(&c, site(true, 1), 0b00).unwrap(), 0b11);
        for loc in 1..=4 {
            assert_eq!(simulate_stuckat(&c, site(false, loc), 0b00).unwrap(), 0b00);
        }
        assert!(simulate_stuckat(&c, site(false, 5), 0).is_err());
    }

    #[test]
    fn location_numbering_is_line_major() {
        let c = cnot();
        assert_eq!(c.segment(1), Some((1, 0)));
        assert_eq!(c.segment(2), Some((1, 1)));
        assert_eq!(c.segment(3), Some((2, 0)));
        assert_eq!(c.segment(4), Some((2, 1)));
        assert_eq!(c.location_of(2, 1), 4);
    }

    #[test]
    fn cnot_tables_have_half_coverage() {
        let (outputs, binary) = build_stuckat_tables(&cnot()).unwrap();
        assert_eq!(outputs.columns.len(), 8);
        assert_eq!(outputs.columns[0].name, "Sa0@1");
        assert_eq!(outputs.columns[4].name, "Sa1@1");
        for r in 0..4 {
            assert_eq!(binary.entries[r].iter().filter(|&&d| d).count(), 4);
        }
        for c in 0..8 {
            assert_eq!((0..4).filter(|&r| binary.detects(r, c)).count(), 2);
        }
    }

    #[test]
    fn toffoli_and_not() {
        let c: ReversibleCircuit = "lines 3\ngate TOFFOLI 1 2 3\ngate NOT 1".parse().unwrap();
        assert_eq!(c.evaluate(0b110), 0b011);
        assert_eq!(c.evaluate(0b000), 0b100);
        assert_eq!(c.location_count(), 9);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_reversible("lines 2\ngate CNOT 1 1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_reversible("gate CNOT 1 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_reversible("lines 2\ngate SWAP 1 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn only_stuck_at_faults() {
        let c = cnot();
        assert!(c.enumerate_faults(&FaultModelConfig::QUANTUM).is_err());
        assert_eq!(c.enumerate_faults(&FaultModelConfig::CLASSICAL).unwrap().len(), 8);
    }
}
