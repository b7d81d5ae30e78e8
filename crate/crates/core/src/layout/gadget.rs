use thiserror::Error;

use super::{realize, Builder, Gadget, Role, Side};
use crate::pauli::tableau::{Form, Tableau};
use crate::pauli::{Basis, Pauli};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GadgetCheckError {
    #[error("{gadget} {kind}{kind} gadget on input {input}: outcome is not deterministic")]
    Random { gadget: Gadget, kind: Basis, input: String },
    #[error("{gadget} {kind}{kind} gadget on input {input}: expected {expected:+}, got {got:+}")]
    Mismatch {
        gadget: Gadget,
        kind: Basis,
        input: String,
        expected: i8,
        got: i8,
    },
    #[error("{gadget} {kind}{kind} gadget on input {input}: data state disturbed")]
    Disturbed { gadget: Gadget, kind: Basis, input: String },
}

#[derive(Clone, Copy)]
enum Input {
    /// Product eigenstate of the measured Pauli on each qubit.
    Product(bool, bool),
    /// Bell state with the given ZZ and XX eigenvalue bits.
    Bell { zz: bool, xx: bool },
}

impl Input {
    fn name(self, kind: Basis) -> String {
        match (self, kind) {
            (Input::Product(a, b), Basis::Z) => format!("|{}{}>", a as u8, b as u8),
            (Input::Product(a, b), Basis::X) => {
                let s = |v: bool| if v { '-' } else { '+' };
                format!("|{}{}>", s(a), s(b))
            }
            (Input::Bell { zz, xx }, _) => {
                format!("{}{}", if zz { "Psi" } else { "Phi" }, if xx { "-" } else { "+" })
            }
        }
    }
}

/// Measures Z⊗Z (or X⊗X) of two data qubits on opposite sides of the
/// interface with the given gadget, noiselessly, for every ±1 eigenstate
/// among the product and Bell states. Pauli-frame corrections of the GT
/// gadget are applied classically. Also checks that the measurement leaves
/// the input state intact.
pub fn gadget_equivalence_check(gadget: Gadget, kind: Basis) -> Result<(), GadgetCheckError> {
    let inputs = [
        Input::Product(false, false),
        Input::Product(false, true),
        Input::Product(true, false),
        Input::Product(true, true),
        Input::Bell { zz: false, xx: false },
        Input::Bell { zz: true, xx: false },
        Input::Bell { zz: false, xx: true },
        Input::Bell { zz: true, xx: true },
    ];
    for input in inputs {
        check_one(gadget, kind, input)?;
    }
    Ok(())
}

fn check_one(gadget: Gadget, kind: Basis, input: Input) -> Result<(), GadgetCheckError> {
    let mut b = Builder { qubits: Vec::new() };
    let q0 = b.add([0.0, 0.0], Role::Data, Side::Left);
    let q1 = b.add([1.0, 0.0], Role::Data, Side::Right);
    let offset = if gadget.depth() == 5 { 2 } else { 1 };
    let s = realize(&mut b, kind, [0.5, 0.5], &[(q0, 0), (q1, 1)], gadget, offset);
    let mut t = Tableau::new(b.qubits.len());

    // Prepare the input.
    let (expected, other) = match input {
        Input::Product(a, c) => {
            for (q, v) in [(q0, a), (q1, c)] {
                if v {
                    t.apply_pauli(q as usize, Pauli::X);
                }
            }
            if kind == Basis::X {
                t.h(q0 as usize);
                t.h(q1 as usize);
            }
            (a ^ c, None)
        }
        Input::Bell { zz, xx } => {
            t.h(q0 as usize);
            t.cnot(q0 as usize, q1 as usize);
            if zz {
                t.apply_pauli(q1 as usize, Pauli::X);
            }
            if xx {
                t.apply_pauli(q0 as usize, Pauli::Z);
            }
            match kind {
                Basis::Z => (zz, Some(xx)),
                Basis::X => (xx, Some(zz)),
            }
        }
    };
    let fail_name = || input.name(kind);

    for &(q, basis) in &s.resets {
        match basis {
            Basis::Z => t.reset_z(q as usize),
            Basis::X => t.reset_x(q as usize),
        }
    }
    let last = s.cnots.iter().map(|c| c.tick).max().unwrap_or(0);
    for tick in 1..=last {
        for c in s.cnots.iter().filter(|c| c.tick == tick) {
            t.cnot(c.control as usize, c.target as usize);
        }
    }
    // Byproduct sources are idle after their CNOT tick, so they can be read
    // out first and their corrections applied before anything else.
    let mut forms: Vec<Option<Form>> = vec![None; s.measurements.len()];
    let measure = |t: &mut Tableau, (q, basis): (u32, Basis)| match basis {
        Basis::Z => t.measure_z(q as usize),
        Basis::X => t.measure_x(q as usize),
    };
    for bp in &s.byproducts {
        if forms[bp.source].is_none() {
            forms[bp.source] = Some(measure(&mut t, s.measurements[bp.source]));
        }
        let cond = forms[bp.source].clone().unwrap_or_default();
        t.apply_pauli_if(bp.qubit as usize, bp.pauli.pauli(), &cond);
    }
    for (i, f) in forms.iter_mut().enumerate() {
        if f.is_none() {
            *f = Some(measure(&mut t, s.measurements[i]));
        }
    }
    let mut result = Form::default();
    for &i in &s.outcome {
        result.xor_assign(forms[i].as_ref().unwrap_or(&Form::default()));
    }
    let got = result.value().ok_or_else(|| GadgetCheckError::Random {
        gadget,
        kind,
        input: fail_name(),
    })?;
    if got != expected {
        let sign = |v: bool| if v { -1 } else { 1 };
        return Err(GadgetCheckError::Mismatch {
            gadget,
            kind,
            input: fail_name(),
            expected: sign(expected),
            got: sign(got),
        });
    }

    // The data must still be in the input state.
    let intact = match (input, other) {
        (Input::Product(a, c), _) => {
            let read = |t: &mut Tableau, q: u32| match kind {
                Basis::Z => t.measure_z(q as usize),
                Basis::X => t.measure_x(q as usize),
            };
            read(&mut t, q0).value() == Some(a) && read(&mut t, q1).value() == Some(c)
        }
        (Input::Bell { .. }, Some(other_bit)) => {
            // Parity of the complementary Pauli pair.
            let (mut m0, m1) = match kind {
                Basis::Z => (t.measure_x(q0 as usize), t.measure_x(q1 as usize)),
                Basis::X => (t.measure_z(q0 as usize), t.measure_z(q1 as usize)),
            };
            m0.xor_assign(&m1);
            m0.value() == Some(other_bit)
        }
        (Input::Bell { .. }, None) => true,
    };
    if !intact {
        return Err(GadgetCheckError::Disturbed {
            gadget,
            kind,
            input: fail_name(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_gadgets_measure_zz_and_xx() {
        for g in Gadget::ALL {
            for kind in [Basis::Z, Basis::X] {
                gadget_equivalence_check(g, kind).unwrap_or_else(|e| panic!("{e}"));
            }
        }
    }

    #[test]
    fn input_names() {
        assert_eq!(Input::Product(false, true).name(Basis::Z), "|01>");
        assert_eq!(Input::Product(false, false).name(Basis::X), "|++>");
    }
}
