//! Data and check positions of rotated and unrotated surface codes.
//!
//! Coordinates have `y` pointing down. The logical Z operator of every code
//! built here is the top row of data qubits and the logical X operator is
//! the left column.

use crate::pauli::Basis;

/// Compass position of a data qubit relative to its check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Dir {
    NW,
    NE,
    SW,
    SE,
    N,
    E,
    W,
    S,
}

/// CNOT slot (0..4) of a data qubit in the bulk schedule.
///
/// Rotated X checks go NW, NE, SW, SE and Z checks NW, SW, NE, SE, so hook
/// errors on X checks are horizontal and on Z checks vertical, each
/// perpendicular to the logical operator it could shorten. The unrotated
/// orders N, E, W, S (X) and N, W, E, S (Z) are collision-free and keep
/// every X/Z pair commuting at each time step.
pub(crate) fn slot(kind: Basis, dir: Dir) -> usize {
    use Dir::*;
    match (kind, dir) {
        (Basis::X, NW) | (Basis::Z, NW) => 0,
        (Basis::X, NE) | (Basis::Z, SW) => 1,
        (Basis::X, SW) | (Basis::Z, NE) => 2,
        (Basis::X, SE) | (Basis::Z, SE) => 3,
        (_, N) => 0,
        (Basis::X, E) | (Basis::Z, W) => 1,
        (Basis::X, W) | (Basis::Z, E) => 2,
        (_, S) => 3,
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CheckGeom {
    pub kind: Basis,
    pub coord: [f64; 2],
    /// (data index, slot)
    pub couplings: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Grid {
    pub data: Vec<[i32; 2]>,
    pub checks: Vec<CheckGeom>,
}

impl Grid {
    fn data_index(&self, x: i32, y: i32) -> Option<usize> {
        self.data.iter().position(|&p| p == [x, y])
    }

    /// Logical Z support: the top row.
    pub fn logical_z(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.data.len()).filter(|&i| self.data[i][1] == 0).collect();
        v.sort_by_key(|&i| self.data[i][0]);
        v
    }

    /// Logical X support: the left column.
    pub fn logical_x(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.data.len()).filter(|&i| self.data[i][0] == 0).collect();
        v.sort_by_key(|&i| self.data[i][1]);
        v
    }
}

/// Rotated code with `width` x `height` data qubits.
pub(crate) fn rotated(width: i32, height: i32) -> Grid {
    let mut data = Vec::new();
    for y in 0..height {
        for x in 0..width {
            data.push([x, y]);
        }
    }
    let mut grid = Grid {
        data,
        checks: Vec::new(),
    };
    // Plaquettes are indexed by their north-west corner.
    for py in -1..height {
        for px in -1..width {
            let kind = if (px + py).rem_euclid(2) == 0 { Basis::X } else { Basis::Z };
            let vertical_edge = px == -1 || px == width - 1;
            let horizontal_edge = py == -1 || py == height - 1;
            let keep = match (vertical_edge, horizontal_edge) {
                (false, false) => true,
                (true, true) => false,
                (true, false) => kind == Basis::Z,
                (false, true) => kind == Basis::X,
            };
            if !keep {
                continue;
            }
            let corners = [
                (px, py, Dir::NW),
                (px + 1, py, Dir::NE),
                (px, py + 1, Dir::SW),
                (px + 1, py + 1, Dir::SE),
            ];
            let couplings = corners
                .iter()
                .filter_map(|&(x, y, dir)| grid.data_index(x, y).map(|i| (i, slot(kind, dir))))
                .collect();
            grid.checks.push(CheckGeom {
                kind,
                coord: [px as f64 + 0.5, py as f64 + 0.5],
                couplings,
            });
        }
    }
    grid
}

/// Unrotated code on a `width` x `height` lattice of sites; data where
/// x + y is even, X checks at (odd, even), Z checks at (even, odd).
pub(crate) fn unrotated(width: i32, height: i32) -> Grid {
    let mut data = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if (x + y) % 2 == 0 {
                data.push([x, y]);
            }
        }
    }
    let mut grid = Grid {
        data,
        checks: Vec::new(),
    };
    for y in 0..height {
        for x in 0..width {
            let kind = match (x % 2, y % 2) {
                (1, 0) => Basis::X,
                (0, 1) => Basis::Z,
                _ => continue,
            };
            let nbrs = [
                (x, y - 1, Dir::N),
                (x + 1, y, Dir::E),
                (x - 1, y, Dir::W),
                (x, y + 1, Dir::S),
            ];
            let couplings = nbrs
                .iter()
                .filter_map(|&(nx, ny, dir)| grid.data_index(nx, ny).map(|i| (i, slot(kind, dir))))
                .collect();
            grid.checks.push(CheckGeom {
                kind,
                coord: [x as f64, y as f64],
                couplings,
            });
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn overlap(a: &CheckGeom, b: &CheckGeom) -> usize {
        a.couplings
            .iter()
            .filter(|(i, _)| b.couplings.iter().any(|(j, _)| i == j))
            .count()
    }

    fn check_grid(g: &Grid) {
        for a in &g.checks {
            for b in &g.checks {
                if a.kind != b.kind {
                    assert_eq!(overlap(a, b) % 2, 0, "{:?} {:?}", a.coord, b.coord);
                }
            }
        }
        // Each data qubit uses each slot at most once.
        let mut used = vec![[false; 4]; g.data.len()];
        for c in &g.checks {
            let mut slots = [false; 4];
            for &(i, s) in &c.couplings {
                assert!(!used[i][s]);
                assert!(!slots[s]);
                used[i][s] = true;
                slots[s] = true;
            }
        }
        let lz = g.logical_z();
        let lx = g.logical_x();
        for c in &g.checks {
            let support = if c.kind == Basis::X { &lz } else { &lx };
            let n = c.couplings.iter().filter(|(i, _)| support.contains(i)).count();
            assert_eq!(n % 2, 0);
        }
        assert_eq!(lz.iter().filter(|i| lx.contains(i)).count(), 1);
    }

    #[test]
    fn rotated_patch_counts() {
        for d in [3, 5, 7] {
            let g = rotated(d, d);
            assert_eq!(g.data.len(), (d * d) as usize);
            assert_eq!(g.checks.len(), (d * d - 1) as usize);
            check_grid(&g);
        }
        let g = rotated(3, 3);
        let x = g.checks.iter().filter(|c| c.kind == Basis::X).count();
        assert_eq!(x, 4);
    }

    #[test]
    fn rotated_double_width() {
        let g = rotated(6, 3);
        check_grid(&g);
        assert_eq!(g.checks.len(), 17);
        assert_eq!(g.checks.iter().filter(|c| c.kind == Basis::X).count(), 10);
    }

    #[test]
    fn unrotated_patch_counts() {
        for d in [3, 5] {
            let g = unrotated(2 * d - 1, 2 * d - 1);
            let d = d as usize;
            assert_eq!(g.data.len(), d * d + (d - 1) * (d - 1));
            assert_eq!(g.checks.len(), 2 * d * (d - 1));
            check_grid(&g);
        }
        check_grid(&unrotated(11, 5));
    }
}
