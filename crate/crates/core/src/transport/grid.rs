//! A total-variation net of the coupling polytope.
//!
//! On supports of sizes `n' × m'` the polytope has dimension `D = (n'−1)(m'−1)`;
//! the top-left `(n'−1) × (m'−1)` block are free coordinates (equivalently, the
//! amplitudes of the elementary cycles through the last row and column). Each free
//! coordinate `T_ij` is discretized on `[0, min(a_i, b_j)]` with spacing at most
//! `h = step / (4D)`, the last row and column are determined by the marginals, and
//! candidates that are too far outside the polytope are pruned. A surviving point
//! `T` is mapped back to a feasible coupling by a max-flow under caps `max(T, 0)`
//! routed by the northwest-corner rule on the remainder.
//!
//! Guarantee: for `π` in the polytope, rounding its free block to the grid gives
//! an unpruned `T` with `‖π − T‖₁ ≤ 2Dh`, the repair moves `T` by at most
//! `2‖π − T‖₁`, so the emitted coupling is within TV `3Dh < step` of `π`.

use crate::error::{Error, Result};
use crate::par;
use crate::space::MMSpace;

use super::{bipartite_max_flow, complete_partial, independent_of, Coupling};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Total-variation radius of the net.
    pub step: f64,
    /// Largest polytope dimension accepted.
    pub max_dim: usize,
    /// Largest number of grid points accepted.
    pub max_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { step: 1.0 / 64.0, max_dim: 4, max_points: 200_000 }
    }
}

impl GridConfig {
    pub fn with_step(step: f64) -> Self {
        GridConfig { step, ..Self::default() }
    }
}

/// A finite TV-net of `Π(m_X, m_Y)` of radius `step`.
#[derive(Debug, Clone)]
pub struct CouplingGrid {
    pub step: f64,
    pub dim: usize,
    pub points: Vec<Coupling>,
}

/// `(n' − 1)(m' − 1)` for the supports of the two masses.
pub fn polytope_dim(mx: &[f64], my: &[f64]) -> usize {
    let n = mx.iter().filter(|&&v| v > 0.0).count();
    let m = my.iter().filter(|&&v| v > 0.0).count();
    n.saturating_sub(1) * m.saturating_sub(1)
}

pub fn coupling_grid(x: &MMSpace, y: &MMSpace, config: &GridConfig) -> Result<CouplingGrid> {
    grid_of(x.mass(), y.mass(), config)
}

/// Like [`coupling_grid`], doubling the step from `config.step` until the point
/// budget is met. Fails only on the dimension budget.
pub fn coupling_grid_adaptive(x: &MMSpace, y: &MMSpace, config: &GridConfig) -> Result<CouplingGrid> {
    let mut cfg = *config;
    loop {
        match grid_of(x.mass(), y.mass(), &cfg) {
            Err(Error::InstanceTooLarge { what: "coupling grid points", .. }) => cfg.step *= 2.0,
            other => return other,
        }
    }
}

pub(crate) fn grid_of(mx: &[f64], my: &[f64], config: &GridConfig) -> Result<CouplingGrid> {
    if !(config.step > 0.0) {
        return Err(Error::InvalidArgument("grid step must be positive"));
    }
    let rows: Vec<usize> = (0..mx.len()).filter(|&i| mx[i] > 0.0).collect();
    let cols: Vec<usize> = (0..my.len()).filter(|&j| my[j] > 0.0).collect();
    let (n, m) = (rows.len(), cols.len());
    let dim = n.saturating_sub(1) * m.saturating_sub(1);
    if dim > config.max_dim {
        return Err(Error::InstanceTooLarge { what: "coupling polytope dimension", size: dim as u128, budget: config.max_dim as u128 });
    }
    if dim == 0 || config.step >= 1.0 {
        // TV never exceeds 1, and at dimension 0 the polytope is a point
        return Ok(CouplingGrid { step: config.step, dim, points: vec![independent_of(mx, my)] });
    }
    let a: Vec<f64> = rows.iter().map(|&i| mx[i]).collect();
    let b: Vec<f64> = cols.iter().map(|&j| my[j]).collect();
    let h = config.step / (4.0 * dim as f64);

    let mut e = Enumerator::new(&a, &b, h, config.max_points);
    e.run(0)?;
    let blocks = e.out;

    let points = par::map(&blocks, |free| {
        let t = complete_block(free, &a, &b);
        let arcs: Vec<(usize, usize, f64)> = (0..n * m).filter(|&k| t[k] > 0.0).map(|k| (k / m, k % m, t[k])).collect();
        let (_, flow) = bipartite_max_flow(&a, &b, &arcs);
        complete_partial(flow, &a, &b).lift(&rows, &cols, mx, my)
    });
    Ok(CouplingGrid { step: config.step, dim, points })
}

/// Full `n × m` matrix from the free `(n−1) × (m−1)` block; may have negative entries.
fn complete_block(free: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let (n, m) = (a.len(), b.len());
    let mut t = vec![0.0; n * m];
    for i in 0..n - 1 {
        for j in 0..m - 1 {
            t[i * m + j] = free[i * (m - 1) + j];
        }
        t[i * m + m - 1] = a[i] - t[i * m..i * m + m - 1].iter().sum::<f64>();
    }
    for j in 0..m {
        t[(n - 1) * m + j] = b[j] - (0..n - 1).map(|i| t[i * m + j]).sum::<f64>();
    }
    t
}

struct Enumerator<'a> {
    a: &'a [f64],
    b: &'a [f64],
    levels: Vec<Vec<f64>>,
    row_slack: f64,
    col_slack: f64,
    corner_floor: f64,
    row_sum: Vec<f64>,
    col_sum: Vec<f64>,
    current: Vec<f64>,
    out: Vec<Vec<f64>>,
    max_points: usize,
}

impl<'a> Enumerator<'a> {
    fn new(a: &'a [f64], b: &'a [f64], h: f64, max_points: usize) -> Self {
        let (n, m) = (a.len(), b.len());
        let dim = (n - 1) * (m - 1);
        let mut levels = Vec::with_capacity(dim);
        for i in 0..n - 1 {
            for j in 0..m - 1 {
                let hi = a[i].min(b[j]);
                let k = (hi / h).ceil().max(1.0) as usize;
                levels.push((0..=k).map(|s| hi * s as f64 / k as f64).collect());
            }
        }
        let head: f64 = a[..n - 1].iter().sum();
        Enumerator {
            a,
            b,
            levels,
            row_slack: (m - 1) as f64 * h / 2.0,
            col_slack: (n - 1) as f64 * h / 2.0,
            corner_floor: head - b[m - 1] - dim as f64 * h / 2.0,
            row_sum: vec![0.0; n - 1],
            col_sum: vec![0.0; m - 1],
            current: Vec::with_capacity(dim),
            out: Vec::new(),
            max_points,
        }
    }

    fn run(&mut self, k: usize) -> Result<()> {
        let w = self.b.len() - 1;
        if k == self.levels.len() {
            let total: f64 = self.row_sum.iter().sum();
            let last_col_ok = (0..w).all(|j| self.col_sum[j] <= self.b[j] + self.col_slack);
            if total >= self.corner_floor && last_col_ok {
                if self.out.len() == self.max_points {
                    return Err(Error::InstanceTooLarge {
                        what: "coupling grid points",
                        size: self.max_points as u128 + 1,
                        budget: self.max_points as u128,
                    });
                }
                self.out.push(self.current.clone());
            }
            return Ok(());
        }
        let (i, j) = (k / w, k % w);
        for s in 0..self.levels[k].len() {
            let v = self.levels[k][s];
            let rs = self.row_sum[i] + v;
            let cs = self.col_sum[j] + v;
            // sums only grow along a row or column, so overshooting ends the level scan
            if rs > self.a[i] + self.row_slack || cs > self.b[j] + self.col_slack {
                break;
            }
            self.row_sum[i] = rs;
            self.col_sum[j] = cs;
            self.current.push(v);
            self.run(k + 1)?;
            self.current.pop();
            self.row_sum[i] -= v;
            self.col_sum[j] -= v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;

    fn x2(m: [f64; 2]) -> MMSpace {
        MMSpace::new(MetricSpace::two_point(1.0).unwrap(), m.to_vec()).unwrap()
    }

    #[test]
    fn point_target_gives_unique_coupling() {
        let g = coupling_grid(&x2([0.75, 0.25]), &MMSpace::point(), &GridConfig::with_step(0.01)).unwrap();
        assert_eq!(g.dim, 0);
        assert_eq!(g.points.len(), 1);
        assert_eq!(g.points[0].data(), &[0.75, 0.25]);
    }

    #[test]
    fn two_point_grid_contains_vertices() {
        let u = x2([0.5, 0.5]);
        let g = coupling_grid(&u, &u, &GridConfig::with_step(0.25)).unwrap();
        let has = |d: [f64; 4]| g.points.iter().any(|c| c.data().iter().zip(d).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(has([0.5, 0.0, 0.0, 0.5]));
        assert!(has([0.0, 0.5, 0.5, 0.0]));
        for c in &g.points {
            c.check_marginals(1e-9).unwrap();
            assert!(c.data().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn dimension_budget() {
        let s = MetricSpace::new(vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let big =
            MMSpace::uniform(MetricSpace::new((0..4).map(|i| (0..4).map(|j| f64::from(u8::from(i != j))).collect()).collect()).unwrap());
        let t = MMSpace::uniform(s);
        assert!(matches!(coupling_grid(&big, &t, &GridConfig::default()), Err(Error::InstanceTooLarge { .. })));
        let g = coupling_grid_adaptive(&t, &t, &GridConfig::default()).unwrap();
        assert_eq!(g.dim, 4);
        assert!(g.points.len() <= GridConfig::default().max_points);
    }

    #[test]
    fn zero_mass_points_do_not_add_dimensions() {
        let pad = x2([1.0, 0.0]);
        assert_eq!(polytope_dim(pad.mass(), &[0.5, 0.5]), 0);
        let g = coupling_grid(&pad, &x2([0.5, 0.5]), &GridConfig::default()).unwrap();
        assert_eq!(g.points.len(), 1);
    }
}
