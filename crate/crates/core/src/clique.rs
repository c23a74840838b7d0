//! Maximal-clique search on graphs of at most 128 vertices.
//!
//! Pivoting Bron–Kerbosch over a degeneracy ordering, with a branch-and-bound cut:
//! the objective is monotone under inclusion, so a branch whose optimistic bound
//! cannot reach the incumbent is skipped. Ties are broken toward the
//! lexicographically smallest vertex set.

use crate::error::{Error, Result};

pub(crate) const MAX_VERTICES: usize = 128;

/// Values closer than this are treated as equal when ranking cliques.
const RANK_EPS: f64 = 1e-12;

/// Adjacency rows without self loops.
pub(crate) fn graph<F>(n: usize, edge: F) -> Result<Vec<u128>>
where
    F: Fn(usize, usize) -> bool,
{
    if n > MAX_VERTICES {
        return Err(Error::InstanceTooLarge { what: "compatibility graph vertices", size: n as u128, budget: MAX_VERTICES as u128 });
    }
    let mut adj = vec![0u128; n];
    for a in 0..n {
        for b in a + 1..n {
            if edge(a, b) {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    Ok(adj)
}

pub(crate) fn members(set: u128) -> impl Iterator<Item = usize> {
    let mut s = set;
    std::iter::from_fn(move || {
        (s != 0).then(|| {
            let k = s.trailing_zeros() as usize;
            s &= s - 1;
            k
        })
    })
}

/// Lexicographic order on the sorted member lists.
pub(crate) fn lex_less(a: u128, b: u128) -> bool {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return false,
            (true, false) => return true,
            (false, true) => return false,
            _ => {}
        }
        let (ia, ib) = (a.trailing_zeros(), b.trailing_zeros());
        if ia != ib {
            return ia < ib;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

fn degeneracy_order(adj: &[u128]) -> Vec<usize> {
    let n = adj.len();
    let mut alive: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while alive != 0 {
        let v = members(alive).min_by_key(|&v| ((adj[v] & alive).count_ones(), v)).expect("nonempty");
        order.push(v);
        alive &= !(1 << v);
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Best {
    pub set: u128,
    pub value: f64,
}

struct Search<'a, B, E> {
    adj: &'a [u128],
    bound: B,
    eval: E,
    best: Option<Best>,
    visited: u64,
    budget: u64,
}

impl<B, E> Search<'_, B, E>
where
    B: Fn(u128) -> f64,
    E: FnMut(u128) -> f64,
{
    fn hopeless(&self, reach: u128) -> bool {
        match self.best {
            Some(b) => (self.bound)(reach) < b.value - RANK_EPS,
            None => false,
        }
    }

    fn report(&mut self, r: u128) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::InstanceTooLarge { what: "maximal cliques", size: self.visited as u128, budget: self.budget as u128 });
        }
        if self.hopeless(r) {
            return Ok(());
        }
        let v = (self.eval)(r);
        let better = match self.best {
            None => true,
            Some(b) => v > b.value + RANK_EPS || ((v - b.value).abs() <= RANK_EPS && lex_less(r, b.set)),
        };
        if better {
            self.best = Some(Best { set: r, value: v });
        }
        Ok(())
    }

    fn expand(&mut self, r: u128, mut p: u128, mut x: u128) -> Result<()> {
        if p == 0 && x == 0 {
            return self.report(r);
        }
        if self.hopeless(r | p) {
            return Ok(());
        }
        let pivot = members(p | x).max_by_key(|&u| ((p & self.adj[u]).count_ones(), std::cmp::Reverse(u))).expect("nonempty");
        for v in members(p & !self.adj[pivot]) {
            self.expand(r | 1 << v, p & self.adj[v], x & self.adj[v])?;
            p &= !(1 << v);
            x |= 1 << v;
        }
        Ok(())
    }
}

/// Maximal clique maximizing `eval`, where `bound(S) ≥ eval(T)` for all `T ⊂ S`.
/// `budget` caps the number of maximal cliques reached. `None` for the empty graph.
pub(crate) fn best_clique<B, E>(adj: &[u128], bound: B, eval: E, budget: u64) -> Result<Option<Best>>
where
    B: Fn(u128) -> f64,
    E: FnMut(u128) -> f64,
{
    let order = degeneracy_order(adj);
    let mut s = Search { adj, bound, eval, best: None, visited: 0, budget };
    let mut earlier: u128 = 0;
    let mut later: u128 = order.iter().fold(0, |acc, &v| acc | 1 << v);
    for &v in &order {
        later &= !(1 << v);
        s.expand(1 << v, adj[v] & later, adj[v] & earlier)?;
        earlier |= 1 << v;
    }
    Ok(s.best)
}

/// Every maximal clique, for tests.
#[cfg(test)]
pub(crate) fn all_maximal(adj: &[u128]) -> Vec<u128> {
    use std::cell::RefCell;
    let out = RefCell::new(Vec::new());
    best_clique(
        adj,
        |_| f64::INFINITY,
        |r| {
            out.borrow_mut().push(r);
            0.0
        },
        u64::MAX,
    )
    .unwrap();
    let mut v = out.into_inner();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_maximal(adj: &[u128]) -> Vec<u128> {
        let n = adj.len();
        let is_clique = |s: u128| members(s).all(|a| members(s).all(|b| a == b || adj[a] >> b & 1 == 1));
        let mut out: Vec<u128> =
            (1u128..1 << n).filter(|&s| is_clique(s)).filter(|&s| (0..n).all(|v| s >> v & 1 == 1 || !is_clique(s | 1 << v))).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn enumerates_every_maximal_clique() {
        // path 0-1-2 plus triangle 2-3-4
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4)];
        let adj = graph(5, |a, b| edges.contains(&(a, b))).unwrap();
        assert_eq!(all_maximal(&adj), brute_maximal(&adj));
        assert_eq!(all_maximal(&adj), vec![0b00011, 0b00110, 0b11100]);
    }

    #[test]
    fn lexicographic_ties() {
        assert!(lex_less(0b011, 0b101));
        assert!(lex_less(0b001, 0b011));
        assert!(!lex_less(0b110, 0b011));
    }

    #[test]
    fn budget_is_enforced() {
        let adj = graph(6, |a, b| a / 2 != b / 2).unwrap();
        // complete 3-partite K(2,2,2): 8 maximal cliques
        assert_eq!(all_maximal(&adj).len(), 8);
        assert!(best_clique(&adj, |_| f64::INFINITY, |_| 0.0, 7).is_err());
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(bits in proptest::collection::vec(proptest::bool::ANY, 28)) {
            let mut k = 0;
            let mut e = [[false; 8]; 8];
            for a in 0..8 {
                for b in a + 1..8 {
                    e[a][b] = bits[k];
                    k += 1;
                }
            }
            let adj = graph(8, |a, b| e[a][b]).unwrap();
            proptest::prop_assert_eq!(all_maximal(&adj), brute_maximal(&adj));

            let w: Vec<f64> = (0..8).map(|v| ((v * 7 + 3) % 5) as f64).collect();
            let weight = |s: u128| members(s).map(|v| w[v]).sum::<f64>();
            let best = best_clique(&adj, weight, weight, u64::MAX).unwrap().unwrap();
            let want = brute_maximal(&adj)
                .into_iter()
                .fold(0.0f64, |acc, s| acc.max(weight(s)));
            proptest::prop_assert_eq!(best.value, want);
        }
    }
}
