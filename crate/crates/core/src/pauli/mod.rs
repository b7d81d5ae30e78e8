//! Pauli algebra, frame propagation and the two circuit simulators.
//!
//! [`frame`] is the fast bit-packed sampler used for Monte-Carlo runs.
//! [`tableau`] is a slow full stabilizer simulator used only to check that
//! detector annotations are deterministic.

pub mod frame;
pub mod rng;
pub mod tableau;

use std::fmt;
use std::ops::{Mul, MulAssign};

use serde::{Deserialize, Serialize};

/// Single-qubit Pauli without phase.
///
/// Encoded as an (x, z) bit pair: `I = 00`, `X = 10`, `Z = 01`, `Y = 11`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pauli {
    x: bool,
    z: bool,
}

impl Pauli {
    pub const I: Pauli = Pauli { x: false, z: false };
    pub const X: Pauli = Pauli { x: true, z: false };
    pub const Y: Pauli = Pauli { x: true, z: true };
    pub const Z: Pauli = Pauli { x: false, z: true };

    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub const fn from_bits(x: bool, z: bool) -> Self {
        Pauli { x, z }
    }

    pub const fn x_bit(self) -> bool {
        self.x
    }

    pub const fn z_bit(self) -> bool {
        self.z
    }

    pub const fn is_identity(self) -> bool {
        !self.x && !self.z
    }

    /// True when the two Paulis commute (symplectic product is zero).
    pub const fn commutes_with(self, other: Pauli) -> bool {
        !((self.x & other.z) ^ (self.z & other.x))
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        Pauli {
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
        }
    }
}

impl MulAssign for Pauli {
    fn mul_assign(&mut self, rhs: Pauli) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match (self.x, self.z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Measurement or preparation basis. Only Z and X are used by the circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    pub fn other(self) -> Basis {
        match self {
            Basis::X => Basis::Z,
            Basis::Z => Basis::X,
        }
    }

    /// The Pauli whose eigenstates this basis consists of.
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Z => Pauli::Z,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::X => write!(f, "X"),
            Basis::Z => write!(f, "Z"),
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "X" | "x" => Ok(Basis::X),
            "Z" | "z" => Ok(Basis::Z),
            _ => Err(format!("unknown basis `{s}` (expected X or Z)")),
        }
    }
}

/// Gate kinds understood by the simulators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    ResetZ,
    ResetX,
    H,
    Cnot,
    MeasureZ,
    MeasureX,
    Idle,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::ResetZ,
        GateKind::ResetX,
        GateKind::H,
        GateKind::Cnot,
        GateKind::MeasureZ,
        GateKind::MeasureX,
        GateKind::Idle,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn is_measurement(self) -> bool {
        matches!(self, GateKind::MeasureZ | GateKind::MeasureX)
    }

    pub fn is_reset(self) -> bool {
        matches!(self, GateKind::ResetZ | GateKind::ResetX)
    }

    pub fn is_unitary(self) -> bool {
        matches!(self, GateKind::H | GateKind::Cnot | GateKind::Idle)
    }
}

/// Conjugates the Pauli on the gate's support in place.
///
/// Resets clear the frame of the reset qubit. Measurements leave the frame
/// untouched and return `true` when it anticommutes with the measured
/// operator, i.e. when the recorded outcome is flipped. Every other gate
/// returns `false`.
pub fn conjugate(gate: GateKind, support: &mut [Pauli]) -> bool {
    debug_assert_eq!(support.len(), gate.arity());
    match gate {
        GateKind::ResetZ | GateKind::ResetX => {
            support[0] = Pauli::I;
            false
        }
        GateKind::H => {
            let p = support[0];
            support[0] = Pauli::from_bits(p.z, p.x);
            false
        }
        GateKind::Cnot => {
            let (c, t) = (support[0], support[1]);
            support[0] = Pauli::from_bits(c.x, c.z ^ t.z);
            support[1] = Pauli::from_bits(t.x ^ c.x, t.z);
            false
        }
        GateKind::MeasureZ => support[0].x,
        GateKind::MeasureX => support[0].z,
        GateKind::Idle => false,
    }
}
