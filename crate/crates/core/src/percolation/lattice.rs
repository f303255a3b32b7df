use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PercolationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Triangular,
    Square,
    Honeycomb,
    Fcc,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 4] = [Self::Triangular, Self::Square, Self::Honeycomb, Self::Fcc];

    pub fn coordination(self) -> usize {
        match self {
            Self::Triangular => 6,
            Self::Square => 4,
            Self::Honeycomb => 3,
            Self::Fcc => 12,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Self::Fcc => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Triangular => "triangular",
            Self::Square => "square",
            Self::Honeycomb => "honeycomb",
            Self::Fcc => "fcc",
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeKind {
    type Err = PercolationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PercolationError::UnknownLattice(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Wrap,
}

impl FromStr for Boundary {
    type Err = PercolationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Self::Open),
            "wrap" | "periodic" => Ok(Self::Wrap),
            _ => Err(PercolationError::UnknownBoundary(s.to_string())),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Open => "open",
            Self::Wrap => "wrap",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub size: usize,
    pub boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(kind: LatticeKind, size: usize, boundary: Boundary) -> Self {
        Self {
            kind,
            size,
            boundary,
        }
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        Self { boundary, ..self }
    }
}

/// Nearest-neighbor bond; `shift` is the coordinate displacement from `a` to
/// `b` before any periodic wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bond {
    pub a: u32,
    pub b: u32,
    pub shift: [i32; 3],
}

#[derive(Clone, Debug)]
pub struct LatticeGraph {
    spec: LatticeSpec,
    coords: Vec<[i32; 3]>,
    bonds: Vec<Bond>,
    /// Coordinate period per axis (0 for unused axes).
    extent: [i32; 3],
}

impl LatticeGraph {
    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn num_nodes(&self) -> usize {
        self.coords.len()
    }

    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn coords(&self) -> &[[i32; 3]] {
        &self.coords
    }

    pub fn coord(&self, node: usize) -> [i32; 3] {
        self.coords[node]
    }

    pub fn extent(&self) -> [i32; 3] {
        self.extent
    }

    pub fn coordination(&self) -> usize {
        self.spec.kind.coordination()
    }

    pub fn dimension(&self) -> usize {
        self.spec.kind.dimension()
    }

    /// Node at the given coordinates (wrapped into the box for periodic lattices).
    pub fn node_at(&self, c: [i32; 3]) -> Option<usize> {
        let c = match self.spec.boundary {
            Boundary::Wrap => wrap(c, self.extent),
            Boundary::Open => c,
        };
        index_of(self.spec, c)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes()];
        for b in &self.bonds {
            deg[b.a as usize] += 1;
            deg[b.b as usize] += 1;
        }
        deg
    }
}

fn wrap(c: [i32; 3], extent: [i32; 3]) -> [i32; 3] {
    let mut out = c;
    for axis in 0..3 {
        if extent[axis] > 0 {
            out[axis] = c[axis].rem_euclid(extent[axis]);
        }
    }
    out
}

fn index_of(spec: LatticeSpec, c: [i32; 3]) -> Option<usize> {
    let l = spec.size as i32;
    match spec.kind {
        LatticeKind::Fcc => {
            let e = 2 * l;
            let inside = c.iter().all(|&v| (0..e).contains(&v));
            if !inside || (c[0] + c[1] + c[2]).rem_euclid(2) != 0 {
                return None;
            }
            Some((((c[2] * e + c[1]) * l) + c[0] / 2) as usize)
        }
        _ => {
            if c[2] != 0 || !(0..l).contains(&c[0]) || !(0..l).contains(&c[1]) {
                return None;
            }
            Some((c[1] * l + c[0]) as usize)
        }
    }
}

/// Half of the neighbor offsets; the other half are their negatives.
fn forward_offsets(kind: LatticeKind, c: [i32; 3]) -> Vec<[i32; 3]> {
    match kind {
        LatticeKind::Square => vec![[1, 0, 0], [0, 1, 0]],
        LatticeKind::Triangular => vec![[1, 0, 0], [0, 1, 0], [-1, 1, 0]],
        // brick-wall embedding: vertical rungs alternate with the checkerboard parity
        LatticeKind::Honeycomb => {
            if (c[0] + c[1]).rem_euclid(2) == 0 {
                vec![[1, 0, 0], [0, 1, 0]]
            } else {
                vec![[1, 0, 0]]
            }
        }
        LatticeKind::Fcc => vec![
            [1, 1, 0],
            [1, -1, 0],
            [1, 0, 1],
            [1, 0, -1],
            [0, 1, 1],
            [0, 1, -1],
        ],
    }
}

pub fn build_lattice(spec: LatticeSpec) -> Result<LatticeGraph, PercolationError> {
    if spec.size < 2 {
        return Err(PercolationError::BadSize {
            spec,
            reason: "size must be at least 2",
        });
    }
    if spec.kind == LatticeKind::Honeycomb
        && spec.boundary == Boundary::Wrap
        && spec.size % 2 != 0
    {
        return Err(PercolationError::BadSize {
            spec,
            reason: "periodic honeycomb needs an even size",
        });
    }
    let l = spec.size as i32;
    let mut coords = Vec::new();
    let extent = match spec.kind {
        LatticeKind::Fcc => {
            let e = 2 * l;
            for z in 0..e {
                for y in 0..e {
                    for x in 0..e {
                        if (x + y + z) % 2 == 0 {
                            coords.push([x, y, z]);
                        }
                    }
                }
            }
            [e, e, e]
        }
        _ => {
            for y in 0..l {
                for x in 0..l {
                    coords.push([x, y, 0]);
                }
            }
            [l, l, 0]
        }
    };
    let max_nodes = u32::MAX as usize;
    if coords.len() > max_nodes {
        return Err(PercolationError::BadSize {
            spec,
            reason: "too many nodes",
        });
    }
    for (i, &c) in coords.iter().enumerate() {
        debug_assert_eq!(index_of(spec, c), Some(i));
    }

    let mut bonds = Vec::with_capacity(coords.len() * spec.kind.coordination() / 2);
    for (i, &c) in coords.iter().enumerate() {
        for off in forward_offsets(spec.kind, c) {
            let target = [c[0] + off[0], c[1] + off[1], c[2] + off[2]];
            let target = match spec.boundary {
                Boundary::Wrap => wrap(target, extent),
                Boundary::Open => target,
            };
            let Some(j) = index_of(spec, target) else {
                continue;
            };
            if i == j {
                return Err(PercolationError::BadSize {
                    spec,
                    reason: "lattice too small: bond wraps onto itself",
                });
            }
            let bond = if i < j {
                Bond {
                    a: i as u32,
                    b: j as u32,
                    shift: off,
                }
            } else {
                Bond {
                    a: j as u32,
                    b: i as u32,
                    shift: [-off[0], -off[1], -off[2]],
                }
            };
            bonds.push(bond);
        }
    }
    bonds.sort_unstable();
    if bonds.windows(2).any(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
        return Err(PercolationError::BadSize {
            spec,
            reason: "lattice too small: duplicate bonds under wrapping",
        });
    }
    Ok(LatticeGraph {
        spec,
        coords,
        bonds,
        extent,
    })
}
