use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::NetworkError;
use crate::percolation::{
    build_lattice, connection_sweep, reference_threshold, ConnectionSweep, LatticeGraph,
    LatticeKind, LatticeSpec,
};
use crate::protocols::{
    scp_cep_1d, scp_cep_square, scp_direct_1d, scp_distillable_subspace, scp_hybrid_1d, scp_pair,
    scp_recycling, scp_square, PairScpInput,
};
use crate::qstate::PmsParams;
use crate::sweep::SweepResult;

/// The edges making up one bond. All bonds of a lattice share the same model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondModel {
    pub edges: Vec<PmsParams>,
}

impl BondModel {
    pub fn new(edges: Vec<PmsParams>) -> Result<Self, NetworkError> {
        if edges.is_empty() {
            return Err(NetworkError::EmptyBond);
        }
        for e in &edges {
            e.validate()?;
        }
        Ok(Self { edges })
    }

    pub fn identical(edge: PmsParams, n: usize) -> Result<Self, NetworkError> {
        Self::new(vec![edge; n])
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn entangled_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_entangled()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    CepPairwise,
    CepRecycling { n: usize },
    CepSubspace { n: usize },
    Hybrid1d,
    Direct1d,
    SquareEmbed,
    FccHybridEmbed,
}

impl Strategy {
    pub fn arity(self) -> usize {
        match self {
            Self::CepRecycling { n } | Self::CepSubspace { n } => n,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::CepPairwise => "cep_pairwise",
            Self::CepRecycling { .. } => "cep_recycling",
            Self::CepSubspace { .. } => "cep_subspace",
            Self::Hybrid1d => "hybrid_1d",
            Self::Direct1d => "direct_1d",
            Self::SquareEmbed => "square_embed",
            Self::FccHybridEmbed => "fcc_hybrid_embed",
        }
    }

    /// Converts one bond into a singlet directly, without lattice embedding.
    pub fn is_plain(self) -> bool {
        matches!(
            self,
            Self::CepPairwise | Self::CepRecycling { .. } | Self::CepSubspace { .. }
        )
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CepRecycling { n } | Self::CepSubspace { n } => write!(f, "{}:{n}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Strategy {
    type Err = NetworkError;

    /// Accepts `name` or `name:n` (for the `n`-edge strategies).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || NetworkError::UnknownStrategy(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg.trim().parse::<usize>().map_err(|_| unknown())?)),
            None => (s, None),
        };
        let strat = match (name.trim().to_ascii_lowercase().as_str(), arg) {
            ("cep_pairwise", None) => Self::CepPairwise,
            ("cep_recycling", Some(n)) => Self::CepRecycling { n },
            ("cep_subspace", Some(n)) => Self::CepSubspace { n },
            ("hybrid_1d", None) => Self::Hybrid1d,
            ("direct_1d", None) => Self::Direct1d,
            ("square_embed", None) => Self::SquareEmbed,
            ("fcc_hybrid_embed", None) => Self::FccHybridEmbed,
            _ => return Err(unknown()),
        };
        Ok(strat)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BondScp {
    pub value: f64,
    /// False when fewer than two edges are entangled.
    pub feasible: bool,
}

fn check_arity(model: &BondModel, strat: Strategy) -> Result<(), NetworkError> {
    if model.len() != strat.arity() {
        return Err(NetworkError::ArityMismatch {
            strategy: strat,
            expected: strat.arity(),
            got: model.len(),
        });
    }
    Ok(())
}

fn pure_family(model: &BondModel, strat: Strategy) -> Result<(), NetworkError> {
    if model.edges.iter().any(|e| e.gamma != 0.0) {
        return Err(NetworkError::NeedsPureFamily(strat));
    }
    Ok(())
}

fn shared_edge(model: &BondModel, strat: Strategy) -> Result<PmsParams, NetworkError> {
    pure_family(model, strat)?;
    let first = model.edges[0];
    if model.edges.iter().any(|e| *e != first) {
        return Err(NetworkError::NonIdenticalEdges(strat));
    }
    Ok(first)
}

/// Singlet conversion probability of one bond under the given strategy.
///
/// Two-sided strategies read the first edge as `(α, λ)` and the second as `(β, ν)`.
pub fn bond_scp(model: &BondModel, strat: Strategy) -> Result<BondScp, NetworkError> {
    check_arity(model, strat)?;
    if model.entangled_count() < 2 {
        return Ok(BondScp {
            value: 0.0,
            feasible: false,
        });
    }
    let e = &model.edges;
    let value = match strat {
        Strategy::CepPairwise => scp_pair(&PairScpInput::new(e[0], e[1])?)?,
        Strategy::CepRecycling { n } => {
            let p = shared_edge(model, strat)?;
            scp_recycling(n, p.alpha, p.lam)?
        }
        Strategy::CepSubspace { n } => {
            let p = shared_edge(model, strat)?;
            scp_distillable_subspace(n, p.alpha, p.lam)?
        }
        Strategy::Hybrid1d | Strategy::FccHybridEmbed => {
            pure_family(model, strat)?;
            scp_hybrid_1d(e[0].alpha, e[0].lam, e[1].alpha, e[1].lam)?
        }
        Strategy::Direct1d => {
            pure_family(model, strat)?;
            scp_direct_1d(e[0].alpha, e[0].lam, e[1].alpha, e[1].lam)?
        }
        Strategy::SquareEmbed => {
            pure_family(model, strat)?;
            scp_square(e[0].alpha, e[0].lam, e[1].alpha, e[1].lam)?
        }
    };
    Ok(BondScp {
        value,
        feasible: true,
    })
}

/// Classical-percolation counterpart of a swapping strategy, if it has one.
pub fn comparator_scp(model: &BondModel, strat: Strategy) -> Result<Option<f64>, NetworkError> {
    check_arity(model, strat)?;
    let e = &model.edges;
    let value = match strat {
        Strategy::Hybrid1d | Strategy::Direct1d | Strategy::FccHybridEmbed => {
            pure_family(model, strat)?;
            Some(scp_cep_1d(e[0].alpha, e[0].lam, e[1].alpha, e[1].lam)?)
        }
        Strategy::SquareEmbed => {
            pure_family(model, strat)?;
            Some(scp_cep_square(e[0].alpha, e[0].lam, e[1].alpha, e[1].lam)?)
        }
        _ => None,
    };
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EffectiveLattice {
    pub spec: LatticeSpec,
    pub p_bond: f64,
    pub feasible: bool,
    pub comparator: Option<f64>,
}

/// Lattice and per-bond occupation probability seen by classical percolation.
///
/// Embedded strategies describe a super-bond of the larger lattice: hybrid
/// swapping yields fcc bonds, the square protocol yields triangular bonds.
pub fn effective_lattice(
    base: LatticeSpec,
    strat: Strategy,
    model: &BondModel,
) -> Result<EffectiveLattice, NetworkError> {
    let required = match strat {
        Strategy::FccHybridEmbed => Some(LatticeKind::Fcc),
        Strategy::SquareEmbed => Some(LatticeKind::Triangular),
        Strategy::Hybrid1d | Strategy::Direct1d => {
            return Err(NetworkError::Incompatible {
                strategy: strat,
                base: base.kind,
            })
        }
        _ => None,
    };
    if required.is_some_and(|k| k != base.kind) {
        return Err(NetworkError::Incompatible {
            strategy: strat,
            base: base.kind,
        });
    }
    let scp = bond_scp(model, strat)?;
    Ok(EffectiveLattice {
        spec: base,
        p_bond: scp.value,
        feasible: scp.feasible,
        comparator: comparator_scp(model, strat)?,
    })
}

/// Node pair at graph distance `d` along the first lattice direction, starting
/// at the origin.
pub fn distance_pair(g: &LatticeGraph, d: usize) -> Option<(usize, usize)> {
    let d = d as i32;
    let target = match g.spec().kind {
        LatticeKind::Fcc => [d, d, 0],
        _ => [d, 0, 0],
    };
    Some((g.node_at([0, 0, 0])?, g.node_at(target)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkRun {
    pub lattice: EffectiveLattice,
    pub threshold: f64,
    pub supercritical: bool,
    pub pairs: Vec<(usize, usize)>,
    pub sweep: ConnectionSweep,
}

pub fn simulate_network(
    spec: LatticeSpec,
    model: &BondModel,
    strat: Strategy,
    pairs: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Result<NetworkRun, NetworkError> {
    let lattice = effective_lattice(spec, strat, model)?;
    let g = build_lattice(lattice.spec)?;
    let sweep = connection_sweep(&g, lattice.p_bond, pairs, trials, seed)?;
    let threshold = reference_threshold(lattice.spec.kind);
    Ok(NetworkRun {
        lattice,
        threshold,
        supercritical: lattice.p_bond > threshold,
        pairs: pairs.to_vec(),
        sweep,
    })
}

impl NetworkRun {
    pub fn to_sweep_result(&self) -> Result<SweepResult, NetworkError> {
        let mut out = SweepResult::new([
            "node_a",
            "node_b",
            "p_bond",
            "threshold",
            "supercritical",
            "connection",
            "connection_se",
            "largest_cluster",
            "largest_cluster_se",
        ]);
        let spec = self.lattice.spec;
        out.meta("lattice", spec.kind)
            .meta("size", spec.size)
            .meta("boundary", spec.boundary)
            .meta("trials", self.sweep.largest_fraction.trials)
            .meta("feasible", self.lattice.feasible);
        if let Some(c) = self.lattice.comparator {
            out.meta("comparator_p", crate::sweep::format_sig(c));
        }
        for (&(a, b), est) in self.pairs.iter().zip(&self.sweep.pairs) {
            out.push(vec![
                a.into(),
                b.into(),
                self.lattice.p_bond.into(),
                self.threshold.into(),
                self.supercritical.into(),
                est.mean.into(),
                est.std_error.into(),
                self.sweep.largest_fraction.mean.into(),
                self.sweep.largest_fraction.std_error.into(),
            ])?;
        }
        Ok(out)
    }
}

/// Per-pair connection probabilities on the effective lattice.
pub fn run_network(
    spec: LatticeSpec,
    model: &BondModel,
    strat: Strategy,
    pairs: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Result<SweepResult, NetworkError> {
    simulate_network(spec, model, strat, pairs, trials, seed)?.to_sweep_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::Boundary;

    fn edge(alpha: f64, lam: f64) -> PmsParams {
        PmsParams::pure_family(alpha, lam).unwrap()
    }

    #[test]
    fn two_edge_pairwise_half() {
        for lam in [0.3, 0.8, 1.0] {
            let m = BondModel::identical(edge(0.5, lam), 2).unwrap();
            let s = bond_scp(&m, Strategy::CepPairwise).unwrap();
            assert!(s.feasible);
            assert!((s.value - lam * lam / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_edge_flagged() {
        let m = BondModel::identical(edge(0.5, 0.9), 1).unwrap();
        let s = bond_scp(&m, Strategy::CepRecycling { n: 1 }).unwrap();
        assert_eq!(s, BondScp { value: 0.0, feasible: false });
        let unentangled = BondModel::new(vec![edge(0.5, 0.9), edge(1.0, 0.9)]).unwrap();
        assert!(!bond_scp(&unentangled, Strategy::CepPairwise).unwrap().feasible);
    }

    #[test]
    fn three_edge_subspace() {
        let (a, l) = (0.7, 0.85);
        let m = BondModel::identical(edge(a, l), 3).unwrap();
        let s = bond_scp(&m, Strategy::CepSubspace { n: 3 }).unwrap();
        assert!((s.value - 3.0 * l * l * a * (1.0 - a)).abs() < 1e-12);
    }

    #[test]
    fn arity_and_family_errors() {
        let m = BondModel::identical(edge(0.5, 0.9), 3).unwrap();
        assert!(matches!(
            bond_scp(&m, Strategy::CepPairwise),
            Err(NetworkError::ArityMismatch { expected: 2, got: 3, .. })
        ));
        let mixed = BondModel::new(vec![edge(0.5, 0.9), edge(0.6, 0.9)]).unwrap();
        assert!(matches!(
            bond_scp(&mixed, Strategy::CepRecycling { n: 2 }),
            Err(NetworkError::NonIdenticalEdges(_))
        ));
        let gamma = BondModel::identical(PmsParams::new(0.5, 0.1, 0.9).unwrap(), 2).unwrap();
        assert!(bond_scp(&gamma, Strategy::CepPairwise).is_ok());
        assert!(matches!(
            bond_scp(&gamma, Strategy::Hybrid1d),
            Err(NetworkError::NeedsPureFamily(_))
        ));
        assert!(BondModel::new(vec![]).is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::CepPairwise,
            Strategy::CepRecycling { n: 4 },
            Strategy::CepSubspace { n: 16 },
            Strategy::Hybrid1d,
            Strategy::Direct1d,
            Strategy::SquareEmbed,
            Strategy::FccHybridEmbed,
        ] {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
        assert!("cep_recycling".parse::<Strategy>().is_err());
        assert!("teleport".parse::<Strategy>().is_err());
    }

    #[test]
    fn embeddings_dispatch() {
        let m = BondModel::new(vec![edge(0.7, 0.95), edge(0.5, 0.95)]).unwrap();
        let fcc = LatticeSpec::new(LatticeKind::Fcc, 4, Boundary::Wrap);
        let eff = effective_lattice(fcc, Strategy::FccHybridEmbed, &m).unwrap();
        assert_eq!(eff.p_bond, scp_hybrid_1d(0.7, 0.95, 0.5, 0.95).unwrap());
        assert_eq!(eff.comparator, Some(scp_cep_1d(0.7, 0.95, 0.5, 0.95).unwrap()));

        let half = BondModel::identical(edge(0.5, 1.0), 2).unwrap();
        let tri = LatticeSpec::new(LatticeKind::Triangular, 8, Boundary::Wrap);
        let eff = effective_lattice(tri, Strategy::SquareEmbed, &half).unwrap();
        assert!((eff.p_bond - 7.0 / 16.0).abs() < 1e-12);
        assert!((eff.comparator.unwrap() - 7.0 / 16.0).abs() < 1e-12);

        let sq = LatticeSpec::new(LatticeKind::Square, 8, Boundary::Wrap);
        let eff = effective_lattice(sq, Strategy::CepPairwise, &half).unwrap();
        assert_eq!((eff.spec, eff.p_bond, eff.comparator), (sq, 0.5, None));

        assert!(effective_lattice(sq, Strategy::SquareEmbed, &half).is_err());
        assert!(effective_lattice(tri, Strategy::FccHybridEmbed, &half).is_err());
        assert!(effective_lattice(tri, Strategy::Hybrid1d, &half).is_err());
    }

    #[test]
    fn certain_bonds_connect_everything() {
        let spec = LatticeSpec::new(LatticeKind::Square, 8, Boundary::Wrap);
        let g = build_lattice(spec).unwrap();
        let pairs = [distance_pair(&g, 3).unwrap(), distance_pair(&g, 4).unwrap()];
        let many = BondModel::identical(edge(0.5, 1.0), 64).unwrap();
        let strat = Strategy::CepSubspace { n: 64 };
        let run = simulate_network(spec, &many, strat, &pairs, 10, 1).unwrap();
        assert!(run.lattice.p_bond > 1.0 - 1e-12);
        assert!(run.supercritical);
        let table = run_network(spec, &many, strat, &pairs, 10, 1).unwrap();
        assert_eq!(table.column("connection").unwrap(), vec![1.0, 1.0]);
        assert_eq!(table.metadata_value("lattice"), Some("square"));
    }
}
