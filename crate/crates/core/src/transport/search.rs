//! Cycle-move descent over the coupling polytope.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Coupling;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Full passes over the cycle list.
    pub rounds: usize,
    /// Objective evaluations, including the start.
    pub evaluations: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { rounds: 50, evaluations: 20_000, seed: 0 }
    }
}

/// Smallest step tried along a cycle, as a fraction of its full extent.
const MIN_FRACTION: f64 = 1.0 / 64.0;
const IMPROVEMENT: f64 = 1e-12;

/// Repeatedly moves mass around 4-cycles `(i,j) → (i,j') → (i',j') → (i',j)`,
/// accepting strict improvements. Each pass visits the cycles in a seeded random
/// order; for each, full-extent moves in both directions are tried first, then
/// halved steps. Stops after a pass without improvement or when the budget runs out.
pub fn local_search<F>(objective: F, start: &Coupling, budget: SearchBudget) -> Coupling
where
    F: Fn(&Coupling) -> f64,
{
    let rows: Vec<usize> = (0..start.rows()).filter(|&i| start.row_marginal()[i] > 0.0).collect();
    let cols: Vec<usize> = (0..start.cols()).filter(|&j| start.col_marginal()[j] > 0.0).collect();
    let mut cycles = Vec::new();
    for (p, &i) in rows.iter().enumerate() {
        for &i2 in &rows[p + 1..] {
            for (q, &j) in cols.iter().enumerate() {
                for &j2 in &cols[q + 1..] {
                    cycles.push((i, j, i2, j2));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best = start.clone();
    let mut value = objective(&best);
    let mut evals = 1;

    for _ in 0..budget.rounds {
        cycles.shuffle(&mut rng);
        let mut improved = false;
        for &(i, j, i2, j2) in &cycles {
            let up = best.get(i, j2).min(best.get(i2, j));
            let down = best.get(i, j).min(best.get(i2, j2));
            let mut fraction = 1.0;
            'steps: while fraction >= MIN_FRACTION {
                for theta in [up * fraction, -down * fraction] {
                    if theta == 0.0 {
                        continue;
                    }
                    if evals >= budget.evaluations {
                        return best;
                    }
                    let cand = shifted(&best, (i, j, i2, j2), theta);
                    let v = objective(&cand);
                    evals += 1;
                    if v < value - IMPROVEMENT {
                        best = cand;
                        value = v;
                        improved = true;
                        break 'steps;
                    }
                }
                fraction /= 2.0;
            }
        }
        if !improved {
            break;
        }
    }
    best
}

/// `+θ` on `(i,j)` and `(i',j')`, `−θ` on `(i,j')` and `(i',j)`; marginals are kept.
fn shifted(c: &Coupling, (i, j, i2, j2): (usize, usize, usize, usize), theta: f64) -> Coupling {
    let m = c.cols();
    let mut data = c.data().to_vec();
    data[i * m + j] += theta;
    data[i2 * m + j2] += theta;
    data[i * m + j2] -= theta;
    data[i2 * m + j] -= theta;
    for k in [i * m + j, i2 * m + j2, i * m + j2, i2 * m + j] {
        data[k] = data[k].max(0.0);
    }
    Coupling::from_parts(data, c.row_marginal(), c.col_marginal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{MMSpace, MetricSpace};
    use crate::transport::independent_coupling;

    #[test]
    fn constant_objective_keeps_start() {
        let x = MMSpace::uniform(MetricSpace::two_point(1.0).unwrap());
        let start = independent_coupling(&x, &x);
        assert_eq!(local_search(|_| 1.0, &start, SearchBudget::default()), start);
    }

    #[test]
    fn reaches_diagonal_vertex() {
        let x = MMSpace::uniform(MetricSpace::two_point(1.0).unwrap());
        let start = independent_coupling(&x, &x);
        let obj = |c: &Coupling| 1.0 - c.get(0, 0) - c.get(1, 1);
        let out = local_search(obj, &start, SearchBudget::default());
        assert!(obj(&out).abs() < 1e-15);
        out.check_marginals(1e-9).unwrap();
    }

    #[test]
    fn deterministic_per_seed() {
        let s = MetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
        let x = MMSpace::new(s, vec![0.2, 0.3, 0.5]).unwrap();
        let start = independent_coupling(&x, &x);
        let obj = |c: &Coupling| (c.get(0, 2) - 0.1).abs() + (c.get(1, 1) - 0.25).abs();
        let b = SearchBudget { seed: 9, ..SearchBudget::default() };
        assert_eq!(local_search(obj, &start, b), local_search(obj, &start, b));
    }
}
