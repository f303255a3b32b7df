use mixperc_core::network::{feasibility_check, GeneralNetwork, Witness};
use mixperc_core::oracle::graph::{random_multigraph, two_paths_exhaustive};

fn verdict(net: &GeneralNetwork) -> (bool, usize, Witness) {
    let (a, b) = net.terminals().unwrap();
    let f = feasibility_check(net, a, b).unwrap();
    (f.feasible, f.flow, f.witness)
}

#[test]
fn max_flow_matches_exhaustive_search() {
    let mut feasible = 0;
    for seed in 0..1000 {
        let net = random_multigraph(seed, 8, 12);
        let (ok, flow, witness) = verdict(&net);
        assert_eq!(ok, two_paths_exhaustive(&net, 0, 1), "seed {seed}");
        match witness {
            Witness::Paths([p1, p2]) => {
                assert!(ok);
                assert!(p1.iter().all(|e| !p2.contains(e)));
                for path in [&p1, &p2] {
                    let mut at = 0;
                    for &e in path {
                        let edge = net.edges()[e];
                        assert!(edge.qualifies());
                        assert!(edge.u == at || edge.v == at);
                        at = edge.other(at);
                    }
                    assert_eq!(at, 1);
                }
            }
            Witness::Cut(cut) => {
                assert!(!ok);
                // flow value equals cut size
                assert_eq!(cut.len(), flow);
                assert!(cut.len() <= 1);
            }
        }
        feasible += usize::from(ok);
    }
    assert!(feasible > 100 && feasible < 900, "corpus too lopsided: {feasible}");
}

#[test]
fn cut_edges_really_disconnect() {
    for seed in 0..300 {
        let net = random_multigraph(seed, 8, 12);
        if let (false, 1, Witness::Cut(cut)) = verdict(&net) {
            let reduced = net.without_edge(cut[0]);
            assert!(!two_paths_exhaustive(&reduced, 0, 1));
            let (_, flow, _) = verdict(&reduced);
            assert_eq!(flow, 0, "seed {seed}");
        }
    }
}

#[test]
fn removing_a_witness_edge_leaves_flow_one_or_more() {
    for seed in 0..300 {
        let net = random_multigraph(seed, 8, 12);
        if let (true, _, Witness::Paths([p1, _])) = verdict(&net) {
            let (_, flow, _) = verdict(&net.without_edge(p1[0]));
            assert!(flow >= 1, "seed {seed}");
        }
    }
}
