//! Dinic maximum flow on `f64` capacities.
//!
//! Edge order is insertion order and BFS/DFS visit edges in that order, so the
//! returned flow is a deterministic function of the network.

use std::collections::VecDeque;

/// Residual capacities at or below this are treated as saturated.
const RESIDUAL_EPS: f64 = 1e-15;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    rev: usize,
    cap: f64,
    flow: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Edge>>,
}

/// Handle to an edge added with [`FlowNetwork::add_edge`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeId {
    from: usize,
    index: usize,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes] }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> EdgeId {
        let index = self.adj[from].len();
        let rev = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Edge { to, rev, cap, flow: 0.0 });
        self.adj[to].push(Edge { to: from, rev: index, cap: 0.0, flow: 0.0 });
        EdgeId { from, index }
    }

    pub fn flow(&self, id: EdgeId) -> f64 {
        self.adj[id.from][id.index].flow.max(0.0)
    }

    fn residual(e: &Edge) -> f64 {
        e.cap - e.flow
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if level[e.to] == usize::MAX && Self::residual(e) > RESIDUAL_EPS {
                    level[e.to] = level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn push(&mut self, u: usize, t: usize, limit: f64, level: &[usize], next: &mut [usize]) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let k = next[u];
            let (to, res) = {
                let e = &self.adj[u][k];
                (e.to, Self::residual(e))
            };
            if res > RESIDUAL_EPS && level[to] == level[u] + 1 {
                let pushed = self.push(to, t, limit.min(res), level, next);
                if pushed > 0.0 {
                    let rev = self.adj[u][k].rev;
                    self.adj[u][k].flow += pushed;
                    self.adj[to][rev].flow -= pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Maximum `s`-`t` flow value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.push(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= 0.0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

/// Bipartite transportation flow: source → row `i` (cap `row_cap[i]`), row → column
/// on the listed `(i, j, cap)` arcs, column `j` → sink (cap `col_cap[j]`).
///
/// Returns the flow value and the `rows × cols` flow matrix.
pub(crate) fn bipartite_max_flow(row_cap: &[f64], col_cap: &[f64], arcs: &[(usize, usize, f64)]) -> (f64, Vec<f64>) {
    let (n, m) = (row_cap.len(), col_cap.len());
    let source = n + m;
    let sink = source + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    for (i, &c) in row_cap.iter().enumerate() {
        if c > 0.0 {
            net.add_edge(source, i, c);
        }
    }
    let ids: Vec<(usize, usize, EdgeId)> = arcs.iter().map(|&(i, j, cap)| (i, j, net.add_edge(i, n + j, cap))).collect();
    for (j, &c) in col_cap.iter().enumerate() {
        if c > 0.0 {
            net.add_edge(n + j, sink, c);
        }
    }
    let value = net.max_flow(source, sink);
    let mut matrix = vec![0.0; n * m];
    for (i, j, id) in ids {
        matrix[i * m + j] += net.flow(id);
    }
    (value, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_small_network() {
        // CLRS-style example with known max flow 23
        let mut net = FlowNetwork::new(6);
        for (u, v, c) in [
            (0, 1, 16.0),
            (0, 2, 13.0),
            (1, 2, 10.0),
            (2, 1, 4.0),
            (1, 3, 12.0),
            (3, 2, 9.0),
            (2, 4, 14.0),
            (4, 3, 7.0),
            (3, 5, 20.0),
            (4, 5, 4.0),
        ] {
            net.add_edge(u, v, c);
        }
        assert_eq!(net.max_flow(0, 5), 23.0);
    }

    #[test]
    fn bipartite_respects_arcs() {
        let (v, m) = bipartite_max_flow(&[0.5, 0.5], &[0.5, 0.5], &[(0, 1, f64::INFINITY)]);
        assert_eq!(v, 0.5);
        assert_eq!(m, vec![0.0, 0.5, 0.0, 0.0]);
    }
}
