//! Mixed-state networks: feasibility on arbitrary graphs and lattice-level
//! simulation of bond strategies.

mod feasibility;
mod file;
mod strategy;

pub use feasibility::{feasibility_check, Feasibility, Witness};
pub use file::{EdgeRecord, NetworkFile};
pub use strategy::{
    bond_scp, comparator_scp, distance_pair, effective_lattice, run_network, simulate_network,
    BondModel, BondScp, EffectiveLattice, NetworkRun, Strategy,
};

use thiserror::Error;

use crate::percolation::{LatticeKind, PercolationError};
use crate::protocols::ProtocolError;
use crate::qstate::{PmsParams, QStateError};
use crate::sweep::SweepError;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("terminals must be distinct (both are {0:?})")]
    SameTerminals(String),
    #[error("network has no terminals")]
    NoTerminals,
    #[error("a bond needs at least one edge")]
    EmptyBond,
    #[error("strategy {strategy} takes {expected} edges, bond has {got}")]
    ArityMismatch {
        strategy: Strategy,
        expected: usize,
        got: usize,
    },
    #[error("strategy {0} needs identical edges")]
    NonIdenticalEdges(Strategy),
    #[error("strategy {0} needs edges with gamma = 0")]
    NeedsPureFamily(Strategy),
    #[error("strategy {strategy} cannot run on a {base} lattice")]
    Incompatible { strategy: Strategy, base: LatticeKind },
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("invalid network file: {0}")]
    Parse(String),
    #[error(transparent)]
    State(#[from] QStateError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Percolation(#[from] PercolationError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkEdge {
    pub u: usize,
    pub v: usize,
    pub params: PmsParams,
}

impl NetworkEdge {
    /// Edge usable for singlet conversion.
    pub fn qualifies(&self) -> bool {
        self.u != self.v && self.params.is_entangled()
    }

    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Multigraph of named nodes whose edges are mixed states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneralNetwork {
    nodes: Vec<String>,
    edges: Vec<NetworkEdge>,
    terminals: Option<(usize, usize)>,
}

impl GeneralNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str) -> Result<usize, NetworkError> {
        if self.node_index(name).is_some() {
            return Err(NetworkError::DuplicateNode(name.to_string()));
        }
        self.nodes.push(name.to_string());
        Ok(self.nodes.len() - 1)
    }

    fn ensure_node(&mut self, name: &str) -> usize {
        self.node_index(name).unwrap_or_else(|| {
            self.nodes.push(name.to_string());
            self.nodes.len() - 1
        })
    }

    pub fn add_edge(&mut self, from: &str, to: &str, params: PmsParams) -> Result<usize, NetworkError> {
        params.validate()?;
        let u = self.require(from)?;
        let v = self.require(to)?;
        self.edges.push(NetworkEdge { u, v, params });
        Ok(self.edges.len() - 1)
    }

    pub fn set_terminals(&mut self, a: &str, b: &str) -> Result<(), NetworkError> {
        let (ia, ib) = (self.require(a)?, self.require(b)?);
        if ia == ib {
            return Err(NetworkError::SameTerminals(a.to_string()));
        }
        self.terminals = Some((ia, ib));
        Ok(())
    }

    pub fn terminals(&self) -> Option<(&str, &str)> {
        self.terminals
            .map(|(a, b)| (self.nodes[a].as_str(), self.nodes[b].as_str()))
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize, NetworkError> {
        self.node_index(name)
            .ok_or_else(|| NetworkError::UnknownNode(name.to_string()))
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[NetworkEdge] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Copy without edge `e`; edge indices above `e` shift down by one.
    pub fn without_edge(&self, e: usize) -> Self {
        let mut out = self.clone();
        out.edges.remove(e);
        out
    }
}
