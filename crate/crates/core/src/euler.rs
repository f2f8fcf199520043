//! Eulerian circuits in directed multigraphs (Hierholzer).

/// A directed edge with a caller-supplied label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge<T> {
    pub from: usize,
    pub to: usize,
    pub label: T,
}

/// Eulerian circuit starting and ending at `start`, as a sequence of edge
/// positions in `edges`. Edges leaving a vertex are taken in input order,
/// so the result is deterministic.
///
/// Returns `None` if the edges do not form a connected balanced multigraph
/// containing `start` (an empty edge list gives an empty circuit).
pub fn eulerian_circuit<T>(vertices: usize, edges: &[Edge<T>], start: usize) -> Option<Vec<usize>> {
    if edges.is_empty() {
        return Some(Vec::new());
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    let mut balance = vec![0i64; vertices];
    for (k, e) in edges.iter().enumerate() {
        out[e.from].push(k);
        balance[e.from] += 1;
        balance[e.to] -= 1;
    }
    if balance.iter().any(|&b| b != 0) || out[start].is_empty() {
        return None;
    }
    // reverse so that pop() yields edges in input order
    for adj in &mut out {
        adj.reverse();
    }
    let mut circuit = Vec::with_capacity(edges.len());
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    while let Some(&(v, via)) = stack.last() {
        match out[v].pop() {
            Some(k) => stack.push((edges[k].to, Some(k))),
            None => {
                stack.pop();
                if let Some(k) = via {
                    circuit.push(k);
                }
            }
        }
    }
    circuit.reverse();
    (circuit.len() == edges.len()).then_some(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete_with_loops(n: usize, copies: usize) -> Vec<Edge<()>> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..copies {
                    e.push(Edge {
                        from: i,
                        to: j,
                        label: (),
                    });
                }
            }
        }
        e
    }

    fn check_circuit<T>(edges: &[Edge<T>], c: &[usize], start: usize) {
        let mut used = vec![false; edges.len()];
        let mut at = start;
        for &k in c {
            assert_eq!(edges[k].from, at);
            assert!(!std::mem::replace(&mut used[k], true));
            at = edges[k].to;
        }
        assert_eq!(at, start);
        assert!(used.iter().all(|&u| u));
    }

    #[test]
    fn single_loop_and_empty() {
        let e = vec![Edge {
            from: 0,
            to: 0,
            label: 7,
        }];
        assert_eq!(eulerian_circuit(1, &e, 0), Some(vec![0]));
        assert_eq!(eulerian_circuit::<()>(3, &[], 1), Some(vec![]));
    }

    #[test]
    fn unbalanced_or_disconnected() {
        let e = vec![Edge {
            from: 0,
            to: 1,
            label: (),
        }];
        assert_eq!(eulerian_circuit(2, &e, 0), None);
        let e = vec![
            Edge {
                from: 0,
                to: 0,
                label: (),
            },
            Edge {
                from: 1,
                to: 1,
                label: (),
            },
        ];
        assert_eq!(eulerian_circuit(2, &e, 0), None);
    }

    proptest! {
        #[test]
        fn complete_digraphs(n in 1usize..6, copies in 1usize..4, start in 0usize..6) {
            let start = start % n;
            let edges = complete_with_loops(n, copies);
            let c = eulerian_circuit(n, &edges, start).unwrap();
            check_circuit(&edges, &c, start);
        }
    }
}
