//! Dense complex matrices for few-qubit operators.
//!
//! Basis states are ordered `|00…0⟩ … |11…1⟩` with qubit 1 as the most
//! significant bit, so `kron(a, b)` puts `a` on the lower-numbered qubit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for operator comparisons.
pub const TOLERANCE: f64 = 1e-9;

pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);

/// Rotation axis, also used to name the Pauli generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The 2×2 Pauli matrix for this axis.
    pub fn pauli(self) -> ComplexMatrix {
        let entries = match self {
            Axis::X => [ZERO, ONE, ONE, ZERO],
            Axis::Y => [ZERO, -J, J, ZERO],
            Axis::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix {
            dim: 2,
            data: entries.to_vec(),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "X" | "x" => Ok(Axis::X),
            "Y" | "y" => Ok(Axis::Y),
            "Z" | "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis `{other}`")),
        }
    }
}

/// Square complex matrix of dimension `2^k`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    /// Identity on `n_qubits` qubits.
    pub fn identity_qubits(n_qubits: usize) -> Self {
        Self::identity(1 << n_qubits).expect("n_qubits >= 1")
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Build from real-valued rows, convenient for permutation-like operators.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * m.dim + i] = z;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the operator acts on.
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Column `col`, i.e. the image of basis state `|col⟩`.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn mat_mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(ComplexMatrix { dim: n, data })
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the more significant qubits.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        ComplexMatrix { dim: n, data }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_norm_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff `max |A†A − I| <= tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let product = self.dagger().mat_mul(self).expect("dagger preserves dimension");
        let id = ComplexMatrix::identity(self.dim).expect("valid dimension");
        product.max_norm_diff(&id).expect("same dimension") <= tol
    }

    /// Equality up to a global phase.
    ///
    /// The phase is taken from the ratio at the largest-modulus entry of `other`,
    /// normalised to unit modulus.
    pub fn phase_equal(&self, other: &ComplexMatrix, tol: f64) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self.relative_phase(other, tol).is_some())
    }

    /// The unit-modulus `φ` with `self ≈ φ·other`, if one exists within `tol`.
    pub fn relative_phase(&self, other: &ComplexMatrix, tol: f64) -> Option<Complex64> {
        if self.dim != other.dim {
            return None;
        }
        let (pivot, pivot_norm) = other
            .data
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_norm <= tol {
            let self_max = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
            return (self_max <= tol).then_some(ONE);
        }
        let ratio = self.data[pivot] / other.data[pivot];
        if ratio.norm() == 0.0 {
            return None;
        }
        let phase = ratio / ratio.norm();
        let diff = self.max_norm_diff(&other.scale(phase)).expect("dimensions checked");
        (diff <= tol).then_some(phase)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let cells: Vec<String> = (0..self.dim).map(|c| format_scalar(self.get(r, c))).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Compact rendering of a complex scalar, e.g. `0.7071-0.7071j`.
pub fn format_scalar(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    let num = |x: f64| {
        let s = format!("{x:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => num(re),
        (true, false) => format!("{}j", num(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{}{}j", num(re), sign, num(im.abs()))
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

/// `R_axis(θ) = exp(−jθσ/2) = cos(θ/2)·I − j·sin(θ/2)·σ`.
pub fn rotation_gate(axis: Axis, theta: f64) -> ComplexMatrix {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    let sigma = axis.pauli();
    let data = (0..4)
        .map(|i| {
            let id = if i == 0 || i == 3 { ONE } else { ZERO };
            c * id + s * sigma.data[i]
        })
        .collect();
    ComplexMatrix { dim: 2, data }
}

/// Ising coupling `exp(−j(θ/2)·Z⊗Z)`.
pub fn coupling_gate(theta: f64) -> ComplexMatrix {
    let minus = Complex64::from_polar(1.0, -theta / 2.0);
    let plus = Complex64::from_polar(1.0, theta / 2.0);
    ComplexMatrix::diagonal(&[minus, plus, plus, minus]).expect("4 is a power of two")
}

/// Lift a 2×2 operator onto `qubit` (1-based) of an `n_qubits` register.
pub fn lift_single(gate: &ComplexMatrix, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    assert_eq!(gate.dim, 2, "single-qubit operator expected");
    assert!((1..=n_qubits).contains(&qubit), "qubit out of range");
    let id = ComplexMatrix::identity(2).expect("2 is valid");
    let mut acc: Option<ComplexMatrix> = None;
    for q in 1..=n_qubits {
        let factor = if q == qubit { gate } else { &id };
        acc = Some(match acc {
            None => factor.clone(),
            Some(m) => m.kron(factor),
        });
    }
    acc.expect("n_qubits >= 1")
}

/// Ising coupling between qubits `a` and `b` of an `n_qubits` register.
///
/// The operator is diagonal: basis state `|x⟩` picks up `e^{∓jθ/2}` according
/// to whether bits `a` and `b` of `x` agree.
pub fn lift_coupling(theta: f64, a: usize, b: usize, n_qubits: usize) -> ComplexMatrix {
    assert!(a != b, "coupling qubits must differ");
    let dim = 1usize << n_qubits;
    let entries: Vec<Complex64> = (0..dim)
        .map(|x| {
            let parity = bit(x, a, n_qubits) ^ bit(x, b, n_qubits);
            let z = if parity == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(1.0, -z * theta / 2.0)
        })
        .collect();
    ComplexMatrix::diagonal(&entries).expect("power of two")
}

/// Bit of basis index `x` that belongs to `qubit` (1-based, qubit 1 is the MSB).
pub fn bit(x: usize, qubit: usize, n_qubits: usize) -> usize {
    (x >> (n_qubits - qubit)) & 1
}
