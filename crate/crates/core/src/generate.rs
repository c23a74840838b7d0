//! Seeded generators for spaces and couplings.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; a uniform `f64` is
//! `(next_u64 >> 11) · 2⁻⁵³`. The random space of size `n` draws `n` points in the
//! unit square (x then y, point by point), takes Euclidean distances, then draws
//! masses `w_i = −ln(1 − u_i)` for fresh uniforms `u_i` and normalizes them, which
//! is a Dirichlet(1, …, 1) sample.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::{MMSpace, MetricSpace};
use crate::transport::{northwest_corner, Coupling};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Dirichlet(1, …, 1) via normalized exponentials.
pub fn dirichlet<R: RngCore>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - uniform01(rng)).ln()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / n as f64; n]
    }
}

/// `n` points in the unit square with Euclidean distances and Dirichlet masses.
pub fn random_space<R: RngCore>(n: usize, rng: &mut R) -> Result<MMSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (uniform01(rng), uniform01(rng))).collect();
    let rows = pts.iter().map(|p| pts.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).collect()).collect();
    let mass = dirichlet(n, rng);
    MMSpace::new(MetricSpace::new(rows)?, mass)
}

/// Shortest-path closure of a complete graph whose edge weights are drawn from `weights`.
pub fn random_graph_metric<R: Rng>(n: usize, weights: &[f64], rng: &mut R) -> Result<MetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidArgument("edge weights must be positive and finite"));
    }
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = weights[rng.random_range(0..weights.len())];
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    floyd_warshall(&mut d);
    MetricSpace::new(d)
}

fn floyd_warshall(d: &mut [Vec<f64>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Path `0 − 1 − … − (n−1)` with unit edges.
pub fn line(n: usize) -> Result<MetricSpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1"));
    }
    MetricSpace::new((0..n).map(|i| (0..n).map(|j| i.abs_diff(j) as f64).collect()).collect())
}

/// Cycle graph on `n` vertices with unit edges.
pub fn cycle(n: usize) -> Result<MetricSpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1"));
    }
    MetricSpace::new((0..n).map(|i| (0..n).map(|j| i.abs_diff(j).min(n - i.abs_diff(j)) as f64).collect()).collect())
}

/// Largest hypercube dimension accepted by [`cube`].
pub const MAX_CUBE_DIM: usize = 8;

/// Hypercube graph `Q_n`: `2^n` bit strings with Hamming distance.
pub fn cube(n: usize) -> Result<MetricSpace> {
    if n == 0 || n > MAX_CUBE_DIM {
        return Err(Error::InvalidArgument("cube dimension must be between 1 and 8"));
    }
    let size = 1usize << n;
    let space = MetricSpace::new((0..size).map(|i| (0..size).map(|j| f64::from((i ^ j).count_ones())).collect()).collect())?;
    space.with_labels((0..size).map(|i| format!("{i:0n$b}")).collect())
}

/// A random coupling: a Dirichlet mixture of `vertices` northwest-corner vertices
/// taken under random row and column orders.
pub fn random_coupling<R: Rng>(mx: &[f64], my: &[f64], vertices: usize, rng: &mut R) -> Coupling {
    use rand::seq::SliceRandom;
    let (n, m) = (mx.len(), my.len());
    let weights = dirichlet(vertices.max(1), rng);
    let mut data = vec![0.0; n * m];
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m).collect();
    for w in weights {
        rows.shuffle(rng);
        cols.shuffle(rng);
        let sup: Vec<f64> = rows.iter().map(|&i| mx[i]).collect();
        let dem: Vec<f64> = cols.iter().map(|&j| my[j]).collect();
        let v = northwest_corner(&sup, &dem);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                data[i * m + j] += w * v[a * m + b];
            }
        }
    }
    Coupling::from_parts(data, mx, my)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_kinds() {
        let l = line(3).unwrap();
        assert_eq!(l.rows(), vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]);
        let c = cycle(4).unwrap();
        assert_eq!(c.d(0, 2), 2.0);
        assert_eq!(c.d(0, 3), 1.0);
        let q = cube(3).unwrap();
        assert_eq!(q.len(), 8);
        assert_eq!(q.d(0, 7), 3.0);
        assert_eq!(q.labels().unwrap()[5], "101");
        assert!(line(0).is_err());
        assert!(cube(9).is_err());
    }

    #[test]
    fn random_space_is_deterministic() {
        let a = random_space(4, &mut rng(7)).unwrap();
        let b = random_space(4, &mut rng(7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_space(4, &mut rng(8)).unwrap());
        assert!((a.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_couplings_are_feasible() {
        let mut r = rng(3);
        for _ in 0..20 {
            let mx = dirichlet(3, &mut r);
            let my = dirichlet(4, &mut r);
            let c = random_coupling(&mx, &my, 3, &mut r);
            c.check_marginals(1e-12).unwrap();
        }
    }

    #[test]
    fn graph_metrics_validate() {
        let mut r = rng(1);
        for n in 1..6 {
            random_graph_metric(n, &[1.0, 2.0, 3.0], &mut r).unwrap();
        }
    }
}
