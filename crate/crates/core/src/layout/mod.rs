//! Layouts, syndrome-extraction schedules and memory-experiment circuits.
//!
//! Two distance-d patches sit side by side, giving a code that is d data
//! rows tall and two patches wide, with the interface running vertically
//! between them. Logical Z is the top row and crosses the interface
//! ("across"); logical X is the left column and runs parallel to it.

mod experiment;
mod gadget;
mod geometry;

pub use experiment::{build_memory_experiment, layout_memory_experiment, MemoryExperiment};
pub use gadget::{gadget_equivalence_check, GadgetCheckError};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Qubit;
use crate::pauli::Basis;
use geometry::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Rotated,
    Unrotated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Gadget {
    /// Direct link: the standard circuit with noisy cross-interface CNOTs.
    DL,
    /// Bell-pair ancilla spanning the interface.
    CAT,
    /// Gate teleportation of each cross-interface CNOT.
    GT,
}

impl Gadget {
    pub const ALL: [Gadget; 3] = [Gadget::DL, Gadget::CAT, Gadget::GT];

    /// CNOT ticks per round.
    pub fn depth(self) -> usize {
        match self {
            Gadget::DL => 4,
            Gadget::CAT | Gadget::GT => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Across,
    Parallel,
}

/// Where the two patches meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    /// Staircase cut; rotated codes only. Every crossing weight-4 check is
    /// split 3–1.
    Zigzag,
    /// Vertical cut. On rotated codes this splits checks 2–2 and is only
    /// useful as a negative control.
    Straight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Data,
    AncillaX,
    AncillaZ,
    GadgetExtra,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitInfo {
    pub id: Qubit,
    pub coord: [f64; 2],
    pub role: Role,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledCnot {
    /// Tick within the round, starting at 1.
    pub tick: usize,
    pub control: Qubit,
    pub target: Qubit,
    pub boundary: bool,
}

/// A Pauli on `qubit` right after tick `after_tick`, conditioned on the
/// outcome of measurement `source` of the same stabilizer. It is never
/// applied physically; its effect is folded into the detector definitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Byproduct {
    pub source: usize,
    pub qubit: Qubit,
    pub pauli: Basis,
    pub after_tick: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stabilizer {
    pub kind: Basis,
    pub coord: [f64; 2],
    pub data: Vec<Qubit>,
    /// Original ancilla followed by any gadget extras.
    pub ancillas: Vec<Qubit>,
    pub crossing: bool,
    pub resets: Vec<(Qubit, Basis)>,
    pub cnots: Vec<ScheduledCnot>,
    pub measurements: Vec<(Qubit, Basis)>,
    /// Indices into `measurements` whose parity is the stabilizer outcome.
    pub outcome: Vec<usize>,
    pub byproducts: Vec<Byproduct>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableSpec {
    /// `None` for a single patch.
    pub orientation: Option<Orientation>,
    pub support: Vec<Qubit>,
    pub pauli: Basis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterfaceConfig {
    pub code: CodeKind,
    pub gadget: Gadget,
    pub d: usize,
    pub basis: Basis,
    pub cut: Cut,
}

impl InterfaceConfig {
    /// Uses the standard cut for the code: zigzag for rotated, straight for
    /// unrotated.
    pub fn new(code: CodeKind, gadget: Gadget, d: usize, basis: Basis) -> Self {
        let cut = match code {
            CodeKind::Rotated => Cut::Zigzag,
            CodeKind::Unrotated => Cut::Straight,
        };
        InterfaceConfig {
            code,
            gadget,
            d,
            basis,
            cut,
        }
    }

    pub fn with_cut(mut self, cut: Cut) -> Self {
        self.cut = cut;
        self
    }

    /// Orientation of the observable tested by a `basis` memory experiment.
    pub fn orientation(&self) -> Orientation {
        orientation_of(self.basis)
    }

    pub fn check(&self) -> Result<(), LayoutError> {
        check_distance(self.d)?;
        if self.code == CodeKind::Unrotated && self.cut == Cut::Zigzag {
            return Err(LayoutError::InvalidConfig(
                "the zigzag cut is only defined for rotated codes".into(),
            ));
        }
        Ok(())
    }

    /// All six code/gadget pairs with the standard cut.
    pub fn all(d: usize, basis: Basis) -> Vec<InterfaceConfig> {
        [CodeKind::Rotated, CodeKind::Unrotated]
            .into_iter()
            .flat_map(|code| Gadget::ALL.into_iter().map(move |g| InterfaceConfig::new(code, g, d, basis)))
            .collect()
    }
}

impl fmt::Display for InterfaceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/d={}/{}", self.code, self.gadget, self.d, self.basis)?;
        if self.cut == Cut::Straight && self.code == CodeKind::Rotated {
            write!(f, "/straight")?;
        }
        Ok(())
    }
}

pub(crate) fn orientation_of(basis: Basis) -> Orientation {
    match basis {
        Basis::Z => Orientation::Across,
        Basis::X => Orientation::Parallel,
    }
}

macro_rules! lowercase_enum_text {
    ($ty:ty, $($variant:ident => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $name),+ })
            }
        }

        impl FromStr for $ty {
            type Err = LayoutError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $(if s.eq_ignore_ascii_case($name) { return Ok(Self::$variant); })+
                Err(LayoutError::InvalidConfig(format!("unknown value `{s}`")))
            }
        }
    };
}

lowercase_enum_text!(CodeKind, Rotated => "rotated", Unrotated => "unrotated");
lowercase_enum_text!(Gadget, DL => "DL", CAT => "CAT", GT => "GT");
lowercase_enum_text!(Orientation, Across => "across", Parallel => "parallel");
lowercase_enum_text!(Cut, Zigzag => "zigzag", Straight => "straight");

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("distance must be odd and at least 3, got {0}")]
    InvalidDistance(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

fn check_distance(d: usize) -> Result<(), LayoutError> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(LayoutError::InvalidDistance(d));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub code: CodeKind,
    /// `None` for a single patch.
    pub gadget: Option<Gadget>,
    pub d: usize,
    pub cut: Option<Cut>,
    /// CNOT ticks per round.
    pub depth: usize,
    pub qubits: Vec<QubitInfo>,
    pub stabilizers: Vec<Stabilizer>,
    /// Logical Z then logical X.
    pub observables: Vec<ObservableSpec>,
}

impl Layout {
    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn data_qubits(&self) -> Vec<Qubit> {
        self.qubits
            .iter()
            .filter(|q| q.role == Role::Data)
            .map(|q| q.id)
            .collect()
    }

    pub fn observable(&self, basis: Basis) -> &ObservableSpec {
        self.observables
            .iter()
            .find(|o| o.pauli == basis)
            .expect("layout defines both logical operators")
    }

    /// Every CNOT of one round that crosses the interface.
    pub fn boundary_gates(&self) -> Vec<ScheduledCnot> {
        self.stabilizers
            .iter()
            .flat_map(|s| s.cnots.iter().filter(|c| c.boundary).copied())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }

    /// Data split (left, right) of a stabilizer.
    pub fn split(&self, s: &Stabilizer) -> (usize, usize) {
        let left = s
            .data
            .iter()
            .filter(|&&q| self.qubits[q as usize].side == Side::Left)
            .count();
        (left, s.data.len() - left)
    }
}

/// Incrementally assigns qubit ids.
struct Builder {
    qubits: Vec<QubitInfo>,
}

impl Builder {
    fn add(&mut self, coord: [f64; 2], role: Role, side: Side) -> Qubit {
        let id = self.qubits.len() as Qubit;
        self.qubits.push(QubitInfo {
            id,
            coord,
            role,
            side,
        });
        id
    }

    fn side(&self, q: Qubit) -> Side {
        self.qubits[q as usize].side
    }

    fn coord(&self, q: Qubit) -> [f64; 2] {
        self.qubits[q as usize].coord
    }
}

/// Data coupling of a stabilizer: (data qubit, bulk slot 0..4).
type Coupling = (Qubit, usize);

/// Turns one check into resets, CNOTs and measurements for the chosen
/// gadget. `offset` is the tick of slot 0. Checks that do not cross the
/// interface always use the plain circuit.
fn realize(
    b: &mut Builder,
    kind: Basis,
    coord: [f64; 2],
    couplings: &[Coupling],
    gadget: Gadget,
    offset: usize,
) -> Stabilizer {
    let left = couplings.iter().filter(|&&(q, _)| b.side(q) == Side::Left).count();
    let right = couplings.len() - left;
    let anc_side = if left >= right { Side::Left } else { Side::Right };
    let role = match kind {
        Basis::X => Role::AncillaX,
        Basis::Z => Role::AncillaZ,
    };
    let a = b.add(coord, role, anc_side);
    let crossing = left > 0 && right > 0;
    let mut s = Stabilizer {
        kind,
        coord,
        data: couplings.iter().map(|&(q, _)| q).collect(),
        ancillas: vec![a],
        crossing,
        resets: vec![(a, kind)],
        cnots: Vec::new(),
        measurements: vec![(a, kind)],
        outcome: vec![0],
        byproducts: Vec::new(),
    };
    // Control/target for a coupling between ancilla-side qubit `anc` and
    // data qubit `q`.
    let couple = |b: &Builder, anc: Qubit, q: Qubit, tick: usize| {
        let (control, target) = match kind {
            Basis::X => (anc, q),
            Basis::Z => (q, anc),
        };
        ScheduledCnot {
            tick,
            control,
            target,
            boundary: b.side(control) != b.side(target),
        }
    };
    let mid = |p: [f64; 2], q: [f64; 2], t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];

    match gadget {
        _ if !crossing => {
            for &(q, slot) in couplings {
                s.cnots.push(couple(b, a, q, offset + slot));
            }
        }
        Gadget::DL => {
            for &(q, slot) in couplings {
                s.cnots.push(couple(b, a, q, offset + slot));
            }
        }
        Gadget::CAT => {
            let far_side = match anc_side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            let far: Vec<Qubit> = couplings
                .iter()
                .filter(|&&(q, _)| b.side(q) == far_side)
                .map(|&(q, _)| q)
                .collect();
            let mean = far.iter().fold([0.0, 0.0], |acc, &q| {
                let c = b.coord(q);
                [acc[0] + c[0] / far.len() as f64, acc[1] + c[1] / far.len() as f64]
            });
            let e = b.add(mid(coord, mean, 0.5), Role::GadgetExtra, far_side);
            s.ancillas.push(e);
            // Bell pair: the first qubit is reset in X, the second in Z.
            s.resets = vec![(a, Basis::X), (e, Basis::Z)];
            s.cnots.push(ScheduledCnot {
                tick: offset - 1,
                control: a,
                target: e,
                boundary: true,
            });
            for &(q, slot) in couplings {
                let anc = if b.side(q) == anc_side { a } else { e };
                s.cnots.push(couple(b, anc, q, offset + slot));
            }
            s.measurements = vec![(a, kind), (e, kind)];
            s.outcome = vec![0, 1];
        }
        Gadget::GT => {
            for &(q, slot) in couplings {
                let tick = offset + slot;
                if b.side(q) == anc_side {
                    s.cnots.push(couple(b, a, q, tick));
                    continue;
                }
                let near = b.add(mid(coord, b.coord(q), 1.0 / 3.0), Role::GadgetExtra, anc_side);
                let far = b.add(mid(coord, b.coord(q), 2.0 / 3.0), Role::GadgetExtra, b.side(q));
                s.ancillas.extend([near, far]);
                s.resets.extend([(near, Basis::X), (far, Basis::Z)]);
                s.cnots.push(ScheduledCnot {
                    tick: offset - 1,
                    control: near,
                    target: far,
                    boundary: true,
                });
                let local = |c, t| ScheduledCnot {
                    tick,
                    control: c,
                    target: t,
                    boundary: false,
                };
                // Teleported CNOT: the control side measures its half of the
                // pair in Z, the target side in X. The Z outcome heralds an X
                // on the target, the X outcome a Z on the control.
                let (ctrl, tgt, ctrl_half, tgt_half) = match kind {
                    Basis::Z => (q, a, far, near),
                    Basis::X => (a, q, near, far),
                };
                s.cnots.push(local(ctrl, ctrl_half));
                s.cnots.push(local(tgt_half, tgt));
                let m1 = s.measurements.len();
                s.measurements.push((ctrl_half, Basis::Z));
                s.measurements.push((tgt_half, Basis::X));
                s.byproducts.push(Byproduct {
                    source: m1,
                    qubit: tgt,
                    pauli: Basis::X,
                    after_tick: tick,
                });
                s.byproducts.push(Byproduct {
                    source: m1 + 1,
                    qubit: ctrl,
                    pauli: Basis::Z,
                    after_tick: tick,
                });
            }
        }
    }
    s.cnots.sort_by_key(|c| c.tick);
    s
}

fn assemble(
    code: CodeKind,
    gadget: Option<Gadget>,
    d: usize,
    cut: Option<Cut>,
    grid: Grid,
    side: impl Fn([i32; 2]) -> Side,
) -> Layout {
    let g = gadget.unwrap_or(Gadget::DL);
    let mut b = Builder { qubits: Vec::new() };
    let data: Vec<Qubit> = grid
        .data
        .iter()
        .map(|&p| b.add([p[0] as f64, p[1] as f64], Role::Data, side(p)))
        .collect();
    let mut checks = grid.checks.clone();
    checks.sort_by(|a, c| {
        (a.coord[1], a.coord[0])
            .partial_cmp(&(c.coord[1], c.coord[0]))
            .expect("finite coordinates")
    });
    // With a gadget the first tick prepares the pair; bulk slots follow.
    let offset = if g.depth() == 5 { 2 } else { 1 };
    let stabilizers = checks
        .iter()
        .map(|c| {
            let couplings: Vec<Coupling> = c.couplings.iter().map(|&(i, s)| (data[i], s)).collect();
            realize(&mut b, c.kind, c.coord, &couplings, g, offset)
        })
        .collect();
    let orientation = |basis| gadget.map(|_| orientation_of(basis));
    let observables = vec![
        ObservableSpec {
            orientation: orientation(Basis::Z),
            support: grid.logical_z().iter().map(|&i| data[i]).collect(),
            pauli: Basis::Z,
        },
        ObservableSpec {
            orientation: orientation(Basis::X),
            support: grid.logical_x().iter().map(|&i| data[i]).collect(),
            pauli: Basis::X,
        },
    ];
    Layout {
        code,
        gadget,
        d,
        cut,
        depth: g.depth(),
        qubits: b.qubits,
        stabilizers,
        observables,
    }
}

/// A single distance-d patch with the standard schedule.
pub fn build_patch(code: CodeKind, d: usize) -> Result<Layout, LayoutError> {
    check_distance(d)?;
    let n = d as i32;
    let grid = match code {
        CodeKind::Rotated => geometry::rotated(n, n),
        CodeKind::Unrotated => geometry::unrotated(2 * n - 1, 2 * n - 1),
    };
    Ok(assemble(code, None, d, None, grid, |_| Side::Left))
}

/// Two patches joined by the configured gadget.
pub fn build_interface(cfg: &InterfaceConfig) -> Result<Layout, LayoutError> {
    cfg.check()?;
    let n = cfg.d as i32;
    let (grid, cut): (Grid, Box<dyn Fn([i32; 2]) -> Side>) = match (cfg.code, cfg.cut) {
        (CodeKind::Rotated, Cut::Zigzag) => (
            geometry::rotated(2 * n, n),
            // Rows alternate between d and d + 1 left-patch columns. This
            // phase leaves the single qubit of every split X check in the
            // check's top row.
            Box::new(move |[x, y]| if x < n + y % 2 { Side::Left } else { Side::Right }),
        ),
        (CodeKind::Rotated, Cut::Straight) => (
            geometry::rotated(2 * n, n),
            Box::new(move |[x, _]| if x < n { Side::Left } else { Side::Right }),
        ),
        (CodeKind::Unrotated, _) => (
            geometry::unrotated(4 * n - 1, 2 * n - 1),
            Box::new(move |[x, _]| if x <= 2 * n - 2 { Side::Left } else { Side::Right }),
        ),
    };
    Ok(assemble(cfg.code, Some(cfg.gadget), cfg.d, Some(cfg.cut), grid, cut))
}
