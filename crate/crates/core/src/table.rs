//! Fault tables: rows are basis-input tests, columns are faults or fault classes.
//!
//! Three flavours exist. A [`ReversibleFaultTable`] records the faulty output
//! per input, a [`ClassicalFaultTable`] records binary detectability and a
//! [`QuantumFaultTable`] records detection probabilities in `[0, 1]`.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::bits::to_bitstring;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::simulate::{good_table, profile_against, test_label};

/// Tolerance for merging equal detection columns.
pub const COLLAPSE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ReversibleColumn {
    pub name: String,
    pub outputs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReversibleFaultTable {
    pub n: usize,
    pub inputs: Vec<usize>,
    pub good: Vec<usize>,
    pub columns: Vec<ReversibleColumn>,
}

impl ReversibleFaultTable {
    pub fn detectable(&self, row: usize, col: usize) -> bool {
        self.columns[col].outputs[row] != self.good[row]
    }

    pub fn column(&self, name: &str) -> Option<&ReversibleColumn> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn to_classical(&self) -> ClassicalFaultTable {
        ClassicalFaultTable {
            n: self.n,
            inputs: self.inputs.clone(),
            good: self.good.clone(),
            names: self.columns.iter().map(|c| c.name.clone()).collect(),
            entries: (0..self.inputs.len())
                .map(|r| (0..self.columns.len()).map(|c| self.detectable(r, c)).collect())
                .collect(),
        }
    }
}

/// Per-fault output columns; fails on the first fault whose outcome is not certain.
pub fn build_reversible_table(circuit: &Circuit, faults: &[Fault]) -> Result<ReversibleFaultTable> {
    let good = good_table(circuit)?;
    let inputs: Vec<usize> = (0..1usize << circuit.n_qubits()).collect();
    let mut columns = Vec::with_capacity(faults.len());
    for fault in faults {
        let profile = profile_against(circuit, fault, &good)?;
        let outputs = inputs
            .iter()
            .map(|&x| {
                profile
                    .deterministic_output(x)
                    .ok_or_else(|| Error::NonDeterministicColumn(fault.name()))
            })
            .collect::<Result<Vec<_>>>()?;
        columns.push(ReversibleColumn {
            name: fault.name(),
            outputs,
        });
    }
    Ok(ReversibleFaultTable {
        n: circuit.n_qubits(),
        good: inputs.iter().map(|&x| good.output(x)).collect(),
        inputs,
        columns,
    })
}

/// Binary detectability table.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalFaultTable {
    pub n: usize,
    pub inputs: Vec<usize>,
    pub good: Vec<usize>,
    pub names: Vec<String>,
    /// `entries[row][col]`.
    pub entries: Vec<Vec<bool>>,
}

impl ClassicalFaultTable {
    pub fn rows(&self) -> usize {
        self.inputs.len()
    }

    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn detects(&self, row: usize, col: usize) -> bool {
        self.entries[row][col]
    }

    pub fn row_of_input(&self, input: usize) -> Option<usize> {
        self.inputs.iter().position(|&x| x == input)
    }

    /// Binarise a probability table whose entries are all 0 or 1.
    pub fn from_quantum(table: &QuantumFaultTable) -> Option<ClassicalFaultTable> {
        let binary = |p: f64| {
            if p.abs() <= 1e-12 {
                Some(false)
            } else if (p - 1.0).abs() <= 1e-12 {
                Some(true)
            } else {
                None
            }
        };
        let entries = (0..table.inputs.len())
            .map(|r| {
                table
                    .classes
                    .iter()
                    .map(|c| binary(c.probabilities[r]))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ClassicalFaultTable {
            n: table.n,
            inputs: table.inputs.clone(),
            good: table.good.clone(),
            names: table.classes.iter().map(FaultClass::name).collect(),
            entries,
        })
    }

    /// One singleton class per column, nothing collapsed.
    pub fn to_quantum(&self) -> QuantumFaultTable {
        QuantumFaultTable {
            n: self.n,
            inputs: self.inputs.clone(),
            good: self.good.clone(),
            classes: self
                .names
                .iter()
                .enumerate()
                .map(|(c, name)| FaultClass {
                    members: vec![name.clone()],
                    probabilities: self.entries.iter().map(|row| if row[c] { 1.0 } else { 0.0 }).collect(),
                })
                .collect(),
            undetectable: Vec::new(),
        }
    }
}

/// Faults sharing one detection-probability column.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultClass {
    pub members: Vec<String>,
    /// One entry per table row.
    pub probabilities: Vec<f64>,
}

impl FaultClass {
    /// Canonical column name: the member list joined with `|`.
    pub fn name(&self) -> String {
        self.members.join("|")
    }

    pub fn max_probability(&self) -> f64 {
        self.probabilities.iter().copied().fold(0.0, f64::max)
    }

    /// Members grouped by family, e.g. `X-Q1(D1,D2) + removed(S2,S5)`.
    pub fn family_summary(&self) -> String {
        let mut families: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut order: Vec<String> = Vec::new();
        for member in &self.members {
            let (family, item) = match member.parse::<Fault>() {
                Ok(Fault::PauliInsertion { axis, qubit, division }) => {
                    (format!("{axis}-Q{qubit}"), division.to_string())
                }
                Ok(Fault::StageRemoval { stage }) => ("removed".to_string(), stage),
                _ => (member.clone(), String::new()),
            };
            if !families.contains_key(&family) {
                order.push(family.clone());
            }
            families.entry(family).or_default().push(item);
        }
        order
            .iter()
            .map(|fam| {
                let items: Vec<&String> = families[fam].iter().filter(|s| !s.is_empty()).collect();
                if items.is_empty() {
                    fam.clone()
                } else {
                    format!(
                        "{fam}({})",
                        items.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumFaultTable {
    pub n: usize,
    /// Basis input of each row, in presentation order.
    pub inputs: Vec<usize>,
    /// Fault-free output of each row.
    pub good: Vec<usize>,
    pub classes: Vec<FaultClass>,
    /// Faults with an all-zero column, removed from `classes`.
    pub undetectable: Vec<String>,
}

impl QuantumFaultTable {
    pub fn new(n: usize, inputs: Vec<usize>, good: Vec<usize>, classes: Vec<FaultClass>) -> Result<Self> {
        if good.len() != inputs.len() {
            return Err(Error::DimensionMismatch {
                left: inputs.len(),
                right: good.len(),
            });
        }
        for class in &classes {
            if class.probabilities.len() != inputs.len() {
                return Err(Error::DimensionMismatch {
                    left: inputs.len(),
                    right: class.probabilities.len(),
                });
            }
            if let Some(&p) = class.probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidThreshold(p));
            }
        }
        Ok(Self {
            n,
            inputs,
            good,
            classes,
            undetectable: Vec::new(),
        })
    }

    pub fn rows(&self) -> usize {
        self.inputs.len()
    }

    pub fn row_of_input(&self, input: usize) -> Option<usize> {
        self.inputs.iter().position(|&x| x == input)
    }

    pub fn class_containing(&self, member: &str) -> Option<&FaultClass> {
        self.classes.iter().find(|c| c.members.iter().any(|m| m == member))
    }

    /// Every fault name in the table, detectable or not.
    pub fn all_members(&self) -> Vec<String> {
        self.classes
            .iter()
            .flat_map(|c| c.members.iter().cloned())
            .chain(self.undetectable.iter().cloned())
            .collect()
    }
}

/// Detection-probability table over all basis inputs, collapsed.
pub fn build_quantum_table(circuit: &Circuit, faults: &[Fault]) -> Result<QuantumFaultTable> {
    let inputs: Vec<usize> = (0..1usize << circuit.n_qubits()).collect();
    build_quantum_table_with_inputs(circuit, faults, &inputs)
}

/// As [`build_quantum_table`] with rows in the given input order.
pub fn build_quantum_table_with_inputs(
    circuit: &Circuit,
    faults: &[Fault],
    inputs: &[usize],
) -> Result<QuantumFaultTable> {
    let raw = raw_quantum_table(circuit, faults, inputs)?;
    Ok(collapse_equivalent(&raw, COLLAPSE_TOLERANCE).0)
}

/// One column per fault, before collapsing.
pub fn raw_quantum_table(circuit: &Circuit, faults: &[Fault], inputs: &[usize]) -> Result<QuantumFaultTable> {
    let good = good_table(circuit)?;
    let dim = 1usize << circuit.n_qubits();
    if let Some(&bad) = inputs.iter().find(|&&x| x >= dim) {
        return Err(Error::UnknownInput(bad.to_string()));
    }
    let classes = faults
        .iter()
        .map(|f| {
            let profile = profile_against(circuit, f, &good)?;
            Ok(FaultClass {
                members: vec![f.name()],
                probabilities: inputs.iter().map(|&x| profile.per_input[x].detection).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumFaultTable::new(
        circuit.n_qubits(),
        inputs.to_vec(),
        inputs.iter().map(|&x| good.output(x)).collect(),
        classes,
    )
}

/// Merge columns whose probability vectors agree within `tol` and move
/// all-zero columns to the undetectable list.
///
/// Classes keep the order of their first member; the returned list is the
/// table's complete undetectable set.
pub fn collapse_equivalent(table: &QuantumFaultTable, tol: f64) -> (QuantumFaultTable, Vec<String>) {
    let mut classes: Vec<FaultClass> = Vec::new();
    let mut undetectable = table.undetectable.clone();
    for class in &table.classes {
        if class.max_probability() <= tol {
            undetectable.extend(class.members.iter().cloned());
            continue;
        }
        let same = |other: &FaultClass| {
            other
                .probabilities
                .iter()
                .zip(&class.probabilities)
                .all(|(a, b)| (a - b).abs() <= tol)
        };
        match classes.iter_mut().find(|c| same(c)) {
            Some(existing) => existing.members.extend(class.members.iter().cloned()),
            None => classes.push(class.clone()),
        }
    }
    let collapsed = QuantumFaultTable {
        n: table.n,
        inputs: table.inputs.clone(),
        good: table.good.clone(),
        classes,
        undetectable: undetectable.clone(),
    };
    (collapsed, undetectable)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Probability in the compact style `1`, `0`, `.5`, `.25`; fixed decimals with `precision`.
pub fn format_probability(p: f64, precision: Option<usize>) -> String {
    if let Some(digits) = precision {
        return format!("{p:.digits$}");
    }
    if p.abs() <= 1e-12 {
        return "0".into();
    }
    if (p - 1.0).abs() <= 1e-12 {
        return "1".into();
    }
    let s = format!("{p:.10}");
    let s = s.trim_end_matches('0');
    s.strip_prefix('0').unwrap_or(s).to_string()
}

/// Something that can be laid out as a header plus string rows.
pub trait TabularView {
    fn header(&self, format: TableFormat) -> Vec<String>;
    fn body(&self, format: TableFormat, precision: Option<usize>) -> Vec<Vec<String>>;
}

fn row_label(format: TableFormat, row: usize, input: usize, n: usize) -> String {
    match format {
        TableFormat::Csv => to_bitstring(input, n),
        TableFormat::Markdown => test_label(row, input, n),
    }
}

fn first_header(format: TableFormat) -> String {
    match format {
        TableFormat::Csv => "input".into(),
        TableFormat::Markdown => "Test Vector".into(),
    }
}

impl TabularView for QuantumFaultTable {
    fn header(&self, format: TableFormat) -> Vec<String> {
        let mut h = vec![first_header(format), "GC".into()];
        h.extend(self.classes.iter().map(|c| match format {
            TableFormat::Csv => c.name(),
            TableFormat::Markdown => c.family_summary(),
        }));
        h
    }

    fn body(&self, format: TableFormat, precision: Option<usize>) -> Vec<Vec<String>> {
        (0..self.rows())
            .map(|r| {
                let mut row = vec![
                    row_label(format, r, self.inputs[r], self.n),
                    to_bitstring(self.good[r], self.n),
                ];
                row.extend(
                    self.classes
                        .iter()
                        .map(|c| format_probability(c.probabilities[r], precision)),
                );
                row
            })
            .collect()
    }
}

impl TabularView for ClassicalFaultTable {
    fn header(&self, format: TableFormat) -> Vec<String> {
        let mut h = vec![first_header(format), "GC".into()];
        h.extend(self.names.iter().cloned());
        h
    }

    fn body(&self, format: TableFormat, _precision: Option<usize>) -> Vec<Vec<String>> {
        (0..self.rows())
            .map(|r| {
                let mut row = vec![
                    row_label(format, r, self.inputs[r], self.n),
                    to_bitstring(self.good[r], self.n),
                ];
                row.extend(self.entries[r].iter().map(|&d| if d { "1" } else { "0" }.to_string()));
                row
            })
            .collect()
    }
}

impl TabularView for ReversibleFaultTable {
    fn header(&self, format: TableFormat) -> Vec<String> {
        let mut h = vec![first_header(format), "GC".into()];
        h.extend(self.columns.iter().map(|c| c.name.clone()));
        h
    }

    /// Detectable cells carry a `*` suffix in CSV and are bold in Markdown.
    fn body(&self, format: TableFormat, _precision: Option<usize>) -> Vec<Vec<String>> {
        (0..self.inputs.len())
            .map(|r| {
                let mut row = vec![
                    row_label(format, r, self.inputs[r], self.n),
                    to_bitstring(self.good[r], self.n),
                ];
                row.extend(self.columns.iter().enumerate().map(|(c, col)| {
                    let bits = to_bitstring(col.outputs[r], self.n);
                    match (self.detectable(r, c), format) {
                        (false, _) => bits,
                        (true, TableFormat::Csv) => format!("{bits}*"),
                        (true, TableFormat::Markdown) => format!("**{bits}**"),
                    }
                }));
                row
            })
            .collect()
    }
}

/// Deterministic text serialisation of a table.
pub fn emit_table(table: &dyn TabularView, format: TableFormat, precision: Option<usize>) -> String {
    let header = table.header(format);
    let body = table.body(format, precision);
    match format {
        TableFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            writer.write_record(&header).expect("in-memory write");
            for row in &body {
                writer.write_record(row).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for row in &body {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            out
        }
    }
}
