//! Bond percolation on regular lattices.
//!
//! Every trial draws one uniform per bond from a seed derived from the master
//! seed and the trial index, and a bond is occupied iff its uniform is below
//! `p`. Results are collected in trial order, so they do not depend on the
//! number of worker threads.

mod lattice;
mod union_find;

pub use lattice::{build_lattice, Boundary, Bond, LatticeGraph, LatticeKind, LatticeSpec};
pub use union_find::{DisplacementUnionFind, UnionFind};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const MIN_THRESHOLD_TOL: f64 = 0.005;
pub const MAX_BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PercolationError {
    #[error("unknown lattice kind {0:?}")]
    UnknownLattice(String),
    #[error("unknown boundary {0:?}")]
    UnknownBoundary(String),
    #[error("invalid lattice {spec:?}: {reason}")]
    BadSize {
        spec: LatticeSpec,
        reason: &'static str,
    },
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("threshold tolerance {0} below the minimum {MIN_THRESHOLD_TOL}")]
    BadTolerance(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("node {node} out of range for a lattice with {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("occupancy has {got} entries, lattice has {expected} bonds")]
    OccupancyLength { expected: usize, got: usize },
    #[error("bisection did not reach width {tol} after {steps} steps (width {width})")]
    NotConverged { tol: f64, steps: usize, width: f64 },
}

/// Reference thresholds for infinite lattices.
pub fn reference_threshold(kind: LatticeKind) -> f64 {
    let tri = 2.0 * (std::f64::consts::PI / 18.0).sin();
    match kind {
        LatticeKind::Triangular => tri,
        LatticeKind::Square => 0.5,
        LatticeKind::Honeycomb => 1.0 - tri,
        LatticeKind::Fcc => 0.120,
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one trial; a pure function of the master seed and trial index.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(master) ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn bond_uniforms(num_bonds: usize, seed: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(num_bonds);
    fill_uniforms(&mut out, num_bonds, seed);
    out
}

fn fill_uniforms(buf: &mut Vec<f64>, num_bonds: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    buf.clear();
    buf.extend((0..num_bonds).map(|_| rng.random::<f64>()));
}

fn check_probability(p: f64) -> Result<(), PercolationError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(PercolationError::BadProbability(p))
    }
}

pub fn sample_occupancy(g: &LatticeGraph, p: f64, seed: u64) -> Result<Vec<bool>, PercolationError> {
    check_probability(p)?;
    Ok(bond_uniforms(g.num_bonds(), seed)
        .into_iter()
        .map(|u| u < p)
        .collect())
}

/// Incremental cluster bookkeeping with crossing detection.
struct Tracker {
    uf: DisplacementUnionFind,
    /// bit 0: touches the low x face, bit 1: touches the high x face (open boundary)
    faces: Vec<u8>,
    boundary: Boundary,
    crossing: bool,
}

impl Tracker {
    fn new(g: &LatticeGraph) -> Self {
        let mut t = Self {
            uf: DisplacementUnionFind::new(g.num_nodes()),
            faces: vec![0; g.num_nodes()],
            boundary: g.spec().boundary,
            crossing: false,
        };
        t.reset(g);
        t
    }

    fn reset(&mut self, g: &LatticeGraph) {
        self.uf.reset();
        self.crossing = false;
        let hi = g.extent()[0] - 1;
        for (f, c) in self.faces.iter_mut().zip(g.coords()) {
            *f = u8::from(c[0] == 0) | (u8::from(c[0] == hi) << 1);
        }
    }

    fn add(&mut self, bond: &Bond) {
        let (a, b) = (bond.a as usize, bond.b as usize);
        match self.boundary {
            Boundary::Wrap => {
                if let Some(w) = self.uf.union(a, b, bond.shift) {
                    self.crossing |= w[0] != 0;
                }
            }
            Boundary::Open => {
                let fa = self.faces[self.uf.find(a).0];
                let fb = self.faces[self.uf.find(b).0];
                self.uf.union(a, b, bond.shift);
                let root = self.uf.find(a).0;
                self.faces[root] = fa | fb;
                self.crossing |= fa | fb == 3;
            }
        }
    }

    fn root(&mut self, node: usize) -> usize {
        self.uf.find(node).0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterStats {
    pub largest_fraction: f64,
    pub crossing: bool,
    pub num_clusters: usize,
    /// Smallest node index of each node's component.
    pub labels: Vec<usize>,
}

pub fn cluster_stats(g: &LatticeGraph, occupied: &[bool]) -> Result<ClusterStats, PercolationError> {
    if occupied.len() != g.num_bonds() {
        return Err(PercolationError::OccupancyLength {
            expected: g.num_bonds(),
            got: occupied.len(),
        });
    }
    let mut t = Tracker::new(g);
    for (bond, _) in g.bonds().iter().zip(occupied).filter(|(_, &o)| o) {
        t.add(bond);
    }
    let n = g.num_nodes();
    let roots: Vec<usize> = (0..n).map(|i| t.root(i)).collect();
    let mut size = vec![0usize; n];
    let mut smallest = vec![usize::MAX; n];
    for (i, &r) in roots.iter().enumerate() {
        size[r] += 1;
        smallest[r] = smallest[r].min(i);
    }
    Ok(ClusterStats {
        largest_fraction: *size.iter().max().unwrap_or(&0) as f64 / n as f64,
        crossing: t.crossing,
        num_clusters: size.iter().filter(|&&s| s > 0).count(),
        labels: roots.iter().map(|&r| smallest[r]).collect(),
    })
}

/// Sample mean of Bernoulli outcomes with its Wald standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        let mean = successes as f64 / trials as f64;
        Self {
            mean,
            std_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
        }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n).sqrt(),
            trials: xs.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectionSweep {
    pub p: f64,
    pub pairs: Vec<Estimate>,
    pub largest_fraction: Estimate,
    pub crossing: Estimate,
}

struct TrialOutcome {
    connected: Vec<bool>,
    largest_fraction: f64,
    crossing: bool,
}

/// Connection probabilities for several node pairs from one set of trials.
pub fn connection_sweep(
    g: &LatticeGraph,
    p: f64,
    pairs: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Result<ConnectionSweep, PercolationError> {
    check_probability(p)?;
    if trials == 0 {
        return Err(PercolationError::NoTrials);
    }
    let n = g.num_nodes();
    for &(a, b) in pairs {
        for node in [a, b] {
            if node >= n {
                return Err(PercolationError::NodeOutOfRange { node, nodes: n });
            }
        }
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map_init(
            || (Tracker::new(g), Vec::new(), vec![0u32; n]),
            |(t, uniforms, size), trial| {
                t.reset(g);
                fill_uniforms(uniforms, g.num_bonds(), trial_seed(seed, trial as u64));
                for (bond, &u) in g.bonds().iter().zip(uniforms.iter()) {
                    if u < p {
                        t.add(bond);
                    }
                }
                size.fill(0);
                for i in 0..n {
                    size[t.root(i)] += 1;
                }
                TrialOutcome {
                    connected: pairs.iter().map(|&(a, b)| t.root(a) == t.root(b)).collect(),
                    largest_fraction: *size.iter().max().unwrap_or(&0) as f64 / n as f64,
                    crossing: t.crossing,
                }
            },
        )
        .collect();
    let pair_estimates = (0..pairs.len())
        .map(|k| Estimate::from_counts(outcomes.iter().filter(|o| o.connected[k]).count(), trials))
        .collect();
    let fractions: Vec<f64> = outcomes.iter().map(|o| o.largest_fraction).collect();
    Ok(ConnectionSweep {
        p,
        pairs: pair_estimates,
        largest_fraction: Estimate::from_samples(&fractions),
        crossing: Estimate::from_counts(outcomes.iter().filter(|o| o.crossing).count(), trials),
    })
}

pub fn connection_probability(
    g: &LatticeGraph,
    p: f64,
    a: usize,
    b: usize,
    trials: usize,
    seed: u64,
) -> Result<Estimate, PercolationError> {
    Ok(connection_sweep(g, p, &[(a, b)], trials, seed)?.pairs[0])
}

/// Occupation level at which the trial's configuration first crosses: the
/// trial crosses at `p` iff `p` exceeds the returned value.
pub fn critical_point(g: &LatticeGraph, seed: u64) -> f64 {
    let mut t = Tracker::new(g);
    let mut scratch = SortScratch::default();
    critical_point_with(g, seed, &mut t, &mut scratch)
}

#[derive(Default)]
struct SortScratch {
    uniforms: Vec<f64>,
    start: Vec<u32>,
    order: Vec<u32>,
}

fn critical_point_with(g: &LatticeGraph, seed: u64, t: &mut Tracker, s: &mut SortScratch) -> f64 {
    let nb = g.num_bonds();
    t.reset(g);
    fill_uniforms(&mut s.uniforms, nb, seed);
    // counting sort into nb buckets, then exact order within each bucket
    let bucket = |u: f64| ((u * nb as f64) as usize).min(nb - 1);
    s.start.clear();
    s.start.resize(nb + 1, 0);
    for &u in &s.uniforms {
        s.start[bucket(u) + 1] += 1;
    }
    for i in 0..nb {
        s.start[i + 1] += s.start[i];
    }
    s.order.clear();
    s.order.resize(nb, 0);
    let mut next = s.start.clone();
    for (i, &u) in s.uniforms.iter().enumerate() {
        let k = bucket(u);
        s.order[next[k] as usize] = i as u32;
        next[k] += 1;
    }
    let uniforms = &s.uniforms;
    for k in 0..nb {
        let slot = &mut s.order[s.start[k] as usize..s.start[k + 1] as usize];
        slot.sort_unstable_by(|&x, &y| uniforms[x as usize].total_cmp(&uniforms[y as usize]));
        for &i in slot.iter() {
            t.add(&g.bonds()[i as usize]);
            if t.crossing {
                return uniforms[i as usize];
            }
        }
    }
    1.0
}

/// Per-trial critical points, in trial order.
pub fn critical_points(g: &LatticeGraph, trials: usize, seed: u64) -> Vec<f64> {
    (0..trials)
        .into_par_iter()
        .map_init(
            || (Tracker::new(g), SortScratch::default()),
            |(t, s), trial| critical_point_with(g, trial_seed(seed, trial as u64), t, s),
        )
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub trials: usize,
    /// Fraction of trials crossing at `p_hat`.
    pub crossing_at_estimate: f64,
}

/// Locates the occupation probability where half the trials cross, using a
/// periodic box and wrap detection along the first axis.
///
/// Trials are coupled across bisection points, so each trial contributes a
/// single critical point and the crossing fraction at any `p` is exact for
/// that trial set.
pub fn estimate_threshold(
    spec: LatticeSpec,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<ThresholdEstimate, PercolationError> {
    if !(tol >= MIN_THRESHOLD_TOL) {
        return Err(PercolationError::BadTolerance(tol));
    }
    if trials == 0 {
        return Err(PercolationError::NoTrials);
    }
    let g = build_lattice(spec.with_boundary(Boundary::Wrap))?;
    let points = critical_points(&g, trials, seed);
    let crossing_fraction =
        |p: f64| points.iter().filter(|&&c| c < p).count() as f64 / trials as f64;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut steps = 0;
    while hi - lo > tol {
        if steps == MAX_BISECTION_STEPS {
            return Err(PercolationError::NotConverged {
                tol,
                steps,
                width: hi - lo,
            });
        }
        let mid = 0.5 * (lo + hi);
        if crossing_fraction(mid) >= 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    let p_hat = 0.5 * (lo + hi);
    Ok(ThresholdEstimate {
        p_hat,
        lo,
        hi,
        steps,
        trials,
        crossing_at_estimate: crossing_fraction(p_hat),
    })
}
