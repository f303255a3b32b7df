use std::collections::VecDeque;

use serde::Serialize;

use super::{GeneralNetwork, NetworkError};

/// Evidence for the feasibility verdict. Paths and cuts hold edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Two edge-disjoint simple paths from A to B, edges listed in walk order.
    Paths([Vec<usize>; 2]),
    /// Qualifying edges whose removal separates A from B (at most one).
    Cut(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Max-flow value, capped at 2.
    pub flow: usize,
    pub witness: Witness,
}

/// Unit-capacity max flow (capped at two augmentations) over qualifying edges.
struct Flow<'a> {
    net: &'a GeneralNetwork,
    /// per edge: +1 if one unit flows u→v, −1 for v→u
    flow: Vec<i8>,
    adj: Vec<Vec<usize>>,
}

impl<'a> Flow<'a> {
    fn new(net: &'a GeneralNetwork) -> Self {
        let mut adj = vec![Vec::new(); net.num_nodes()];
        for (i, e) in net.edges().iter().enumerate() {
            if e.qualifies() {
                adj[e.u].push(i);
                adj[e.v].push(i);
            }
        }
        Self {
            net,
            flow: vec![0; net.edges().len()],
            adj,
        }
    }

    /// Remaining capacity of edge `e` when traversed from `from`.
    fn residual(&self, e: usize, from: usize) -> i8 {
        let dir = if self.net.edges()[e].u == from { 1 } else { -1 };
        1 - dir * self.flow[e]
    }

    fn push(&mut self, e: usize, from: usize) {
        let dir = if self.net.edges()[e].u == from { 1 } else { -1 };
        self.flow[e] += dir;
    }

    /// BFS in canonical edge order; returns predecessor edges if `b` is reached.
    fn search(&self, a: usize) -> Vec<Option<usize>> {
        let n = self.net.num_nodes();
        let mut pred = vec![None; n];
        let mut seen = vec![false; n];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.adj[x] {
                let y = self.net.edges()[e].other(x);
                if !seen[y] && self.residual(e, x) > 0 {
                    seen[y] = true;
                    pred[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
        pred
    }

    fn augment(&mut self, a: usize, b: usize) -> bool {
        let pred = self.search(a);
        if pred[b].is_none() {
            return false;
        }
        let mut y = b;
        while y != a {
            let e = pred[y].expect("path back to source");
            let x = self.net.edges()[e].other(y);
            self.push(e, x);
            y = x;
        }
        true
    }

    fn reachable(&self, a: usize) -> Vec<bool> {
        let pred = self.search(a);
        (0..self.net.num_nodes())
            .map(|v| v == a || pred[v].is_some())
            .collect()
    }

    /// Peels one simple A→B path off the flow, removing any loops on the way.
    fn extract_path(&mut self, a: usize, b: usize) -> Vec<usize> {
        let mut path: Vec<(usize, usize)> = Vec::new(); // (node left, edge)
        let mut x = a;
        while x != b {
            let e = *self.adj[x]
                .iter()
                .find(|&&e| self.carries_from(e, x))
                .expect("flow conservation");
            self.flow[e] = 0;
            let y = self.net.edges()[e].other(x);
            path.push((x, e));
            if let Some(pos) = path.iter().position(|&(node, _)| node == y) {
                path.truncate(pos);
            }
            x = y;
        }
        path.into_iter().map(|(_, e)| e).collect()
    }

    fn carries_from(&self, e: usize, x: usize) -> bool {
        let dir = if self.net.edges()[e].u == x { 1 } else { -1 };
        self.flow[e] * dir == 1
    }
}

/// Checks whether A and B are joined by two edge-disjoint paths of
/// qualifying (entangled) edges.
pub fn feasibility_check(net: &GeneralNetwork, a: &str, b: &str) -> Result<Feasibility, NetworkError> {
    let ia = net
        .node_index(a)
        .ok_or_else(|| NetworkError::UnknownNode(a.to_string()))?;
    let ib = net
        .node_index(b)
        .ok_or_else(|| NetworkError::UnknownNode(b.to_string()))?;
    if ia == ib {
        return Err(NetworkError::SameTerminals(a.to_string()));
    }
    let mut flow = Flow::new(net);
    let mut value = 0;
    while value < 2 && flow.augment(ia, ib) {
        value += 1;
    }
    if value == 2 {
        let first = flow.extract_path(ia, ib);
        let second = flow.extract_path(ia, ib);
        return Ok(Feasibility {
            feasible: true,
            flow: 2,
            witness: Witness::Paths([first, second]),
        });
    }
    let side = flow.reachable(ia);
    let cut = net
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.qualifies() && side[e.u] != side[e.v])
        .map(|(i, _)| i)
        .collect();
    Ok(Feasibility {
        feasible: false,
        flow: value,
        witness: Witness::Cut(cut),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PmsParams;

    fn good() -> PmsParams {
        PmsParams::pure_family(0.6, 0.9).unwrap()
    }

    fn bad() -> PmsParams {
        PmsParams::pure_family(1.0, 0.9).unwrap()
    }

    fn network(nodes: &[&str], edges: &[(&str, &str, PmsParams)]) -> GeneralNetwork {
        let mut net = GeneralNetwork::new();
        for n in nodes {
            net.add_node(n).unwrap();
        }
        for &(u, v, p) in edges {
            net.add_edge(u, v, p).unwrap();
        }
        net
    }

    #[test]
    fn single_path_is_infeasible_with_unit_cut() {
        let net = network(&["A", "x", "B"], &[("A", "x", good()), ("x", "B", good())]);
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert!(!f.feasible);
        assert_eq!(f.flow, 1);
        let Witness::Cut(cut) = f.witness else { panic!() };
        assert_eq!(cut.len(), 1);
        assert!(!feasibility_check(&net.without_edge(cut[0]), "A", "B").unwrap().feasible);
    }

    #[test]
    fn parallel_pair_is_feasible() {
        let net = network(&["A", "B"], &[("A", "B", good()), ("B", "A", good())]);
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert!(f.feasible);
        assert_eq!(f.witness, Witness::Paths([vec![0], vec![1]]));
    }

    #[test]
    fn cycle_with_pendants() {
        let net = network(
            &["A", "x", "B", "y", "p", "q"],
            &[
                ("A", "x", good()),
                ("x", "B", good()),
                ("B", "y", good()),
                ("y", "A", good()),
                ("A", "p", bad()),
                ("p", "B", bad()),
                ("x", "q", good()),
            ],
        );
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert!(f.feasible);
        let Witness::Paths([p1, p2]) = f.witness else { panic!() };
        assert_eq!(p1, vec![0, 1]);
        assert_eq!(p2, vec![3, 2]);
    }

    #[test]
    fn non_qualifying_second_path_does_not_count() {
        let net = network(&["A", "B"], &[("A", "B", good()), ("A", "B", bad())]);
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert!(!f.feasible);
        assert_eq!(f.witness, Witness::Cut(vec![0]));
    }

    #[test]
    fn disconnected_gives_empty_cut() {
        let net = network(&["A", "B"], &[]);
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert_eq!((f.feasible, f.flow), (false, 0));
        assert_eq!(f.witness, Witness::Cut(vec![]));
    }

    #[test]
    fn terminal_errors() {
        let net = network(&["A", "B"], &[]);
        assert!(feasibility_check(&net, "A", "Z").is_err());
        assert!(feasibility_check(&net, "A", "A").is_err());
    }

    #[test]
    fn augmenting_path_reroutes_through_reverse_flow() {
        // the first BFS path A-x-y-B blocks the naive second path; the
        // second augmentation must cancel flow on x-y
        let net = network(
            &["A", "x", "y", "B"],
            &[
                ("A", "x", good()),
                ("A", "y", good()),
                ("x", "y", good()),
                ("x", "B", good()),
                ("y", "B", good()),
            ],
        );
        let f = feasibility_check(&net, "A", "B").unwrap();
        assert!(f.feasible);
        let Witness::Paths([p1, p2]) = &f.witness else { panic!() };
        assert!(p1.iter().all(|e| !p2.contains(e)));
    }
}
