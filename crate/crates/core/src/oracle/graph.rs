//! Exhaustive two-path search and random multigraph corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::GeneralNetwork;
use crate::qstate::PmsParams;

struct PathSearch {
    /// (edge index, u, v) of qualifying edges
    edges: Vec<(usize, usize, usize)>,
    n: usize,
    a: usize,
    b: usize,
    on_path: Vec<bool>,
    used: Vec<bool>,
}

impl PathSearch {
    fn extend(&mut self, x: usize) -> bool {
        if x == self.b {
            return self.reachable_without_used();
        }
        for k in 0..self.edges.len() {
            let (i, u, v) = self.edges[k];
            let y = match (u == x, v == x) {
                (true, _) => v,
                (_, true) => u,
                _ => continue,
            };
            if self.on_path[y] {
                continue;
            }
            self.on_path[y] = true;
            self.used[i] = true;
            let found = self.extend(y);
            self.on_path[y] = false;
            self.used[i] = false;
            if found {
                return true;
            }
        }
        false
    }

    fn reachable_without_used(&self) -> bool {
        let mut seen = vec![false; self.n];
        seen[self.a] = true;
        let mut stack = vec![self.a];
        while let Some(x) = stack.pop() {
            for &(i, u, v) in &self.edges {
                if self.used[i] {
                    continue;
                }
                for (p, q) in [(u, v), (v, u)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen[self.b]
    }
}

/// True iff some simple path of qualifying edges from `a` to `b` leaves `b`
/// reachable once its edges are removed.
pub fn two_paths_exhaustive(net: &GeneralNetwork, a: usize, b: usize) -> bool {
    let edges = net
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.qualifies())
        .map(|(i, e)| (i, e.u, e.v))
        .collect();
    let mut s = PathSearch {
        edges,
        n: net.num_nodes(),
        a,
        b,
        on_path: vec![false; net.num_nodes()],
        used: vec![false; net.edges().len()],
    };
    s.on_path[a] = true;
    s.extend(a)
}

/// Random multigraph on nodes `n0..n{k}` (2 ≤ k ≤ `max_nodes`) with up to
/// `max_edges` edges, about a quarter of them unentangled, and terminals
/// `n0`, `n1`.
pub fn random_multigraph(seed: u64, max_nodes: usize, max_edges: usize) -> GeneralNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes.max(2));
    let m = rng.random_range(0..=max_edges);
    let mut net = GeneralNetwork::new();
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    for name in &names {
        net.add_node(name).expect("distinct names");
    }
    for _ in 0..m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let params = if rng.random_bool(0.25) {
            // product state: no entanglement to distill
            PmsParams::pure_family(1.0, rng.random_range(0.0..=1.0))
        } else {
            PmsParams::pure_family(rng.random_range(0.05..0.95), rng.random_range(0.1..=1.0))
        }
        .expect("valid parameters");
        net.add_edge(&names[u], &names[v], params).expect("known nodes");
    }
    net.set_terminals("n0", "n1").expect("two distinct terminals");
    net
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let g = random_multigraph(3, 8, 12);
        assert!(g.num_nodes() <= 8 && g.edges().len() <= 12);
        let p = PmsParams::pure_family(0.5, 1.0).unwrap();
        let mut net = GeneralNetwork::new();
        for n in ["A", "x", "B"] {
            net.add_node(n).unwrap();
        }
        net.add_edge("A", "x", p).unwrap();
        net.add_edge("x", "B", p).unwrap();
        assert!(!two_paths_exhaustive(&net, 0, 2));
        net.add_edge("A", "B", p).unwrap();
        assert!(two_paths_exhaustive(&net, 0, 2));
    }
}
