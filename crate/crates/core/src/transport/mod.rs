//! The coupling polytope `Π(m_X, m_Y)`.
//!
//! Couplings are dense row-major matrices carrying the marginals they were built
//! for. [`max_mass_on`] solves the inner maximization `max_π π(S)` exactly as a
//! bipartite max-flow; [`glue`] and [`project13`] implement the finite gluing
//! construction used for triangle inequalities; [`grid`] and [`search`] traverse
//! the polytope for the Eurandom and observable solvers.

mod flow;
pub mod grid;
pub mod search;

pub(crate) use flow::bipartite_max_flow;

use crate::error::{Error, Result};
use crate::pairset::PairSet;
use crate::space::{MMSpace, TOL};

pub use grid::{coupling_grid, CouplingGrid, GridConfig};
pub use search::{local_search, SearchBudget};

/// A transport plan between two mass vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    row_marginal: Vec<f64>,
    col_marginal: Vec<f64>,
}

impl Coupling {
    /// Validates entries and marginals (within [`TOL`]) against `mx`, `my`.
    pub fn new(data: Vec<f64>, mx: &[f64], my: &[f64]) -> Result<Self> {
        let (rows, cols) = (mx.len(), my.len());
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { what: "coupling matrix", expected: rows * cols, actual: data.len() });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidCoupling(format!("entry ({}, {}) = {}", k / cols, k % cols, data[k])));
        }
        let c = Coupling { rows, cols, data, row_marginal: mx.to_vec(), col_marginal: my.to_vec() };
        c.check_marginals(TOL)?;
        Ok(c)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>, mx: &[f64], my: &[f64]) -> Result<Self> {
        Self::new(rows.into_iter().flatten().collect(), mx, my)
    }

    /// Caller guarantees feasibility up to rounding.
    pub(crate) fn from_parts(data: Vec<f64>, mx: &[f64], my: &[f64]) -> Self {
        debug_assert_eq!(data.len(), mx.len() * my.len());
        Coupling { rows: mx.len(), cols: my.len(), data, row_marginal: mx.to_vec(), col_marginal: my.to_vec() }
    }

    pub fn check_marginals(&self, tol: f64) -> Result<()> {
        for (i, (&want, got)) in self.row_marginal.iter().zip(self.row_sums()).enumerate() {
            if (want - got).abs() > tol {
                return Err(Error::MarginalMismatch { index: i, left: got, right: want });
            }
        }
        for (j, (&want, got)) in self.col_marginal.iter().zip(self.col_sums()).enumerate() {
            if (want - got).abs() > tol {
                return Err(Error::MarginalMismatch { index: self.rows + j, left: got, right: want });
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn row_marginal(&self) -> &[f64] {
        &self.row_marginal
    }

    pub fn col_marginal(&self) -> &[f64] {
        &self.col_marginal
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for r in self.data.chunks(self.cols) {
            for (acc, v) in s.iter_mut().zip(r) {
                *acc += v;
            }
        }
        s
    }

    /// `π(S)`.
    pub fn mass_on(&self, s: &PairSet) -> f64 {
        s.iter().map(|(i, j)| self.get(i, j)).sum()
    }

    /// Atoms with positive mass, lexicographic.
    pub fn atoms(&self) -> Vec<(usize, usize, f64)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = self.get(i, j);
                (v > 0.0).then_some((i, j, v))
            })
            .collect()
    }

    /// Pairs carrying more than `threshold` mass.
    pub fn support_above(&self, threshold: f64) -> PairSet {
        let pairs = self.atoms().into_iter().filter(|a| a.2 > threshold).map(|a| (a.0, a.1));
        PairSet::from_pairs(self.rows, self.cols, pairs).expect("atoms are in range")
    }

    pub fn support(&self) -> PairSet {
        self.support_above(0.0)
    }

    pub fn transpose(&self) -> Coupling {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        Coupling {
            rows: self.cols,
            cols: self.rows,
            data,
            row_marginal: self.col_marginal.clone(),
            col_marginal: self.row_marginal.clone(),
        }
    }

    /// Total-variation distance `½ Σ |π − π'|`.
    pub fn tv_distance(&self, other: &Coupling) -> f64 {
        0.5 * self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// Re-embeds a coupling of restricted spaces into the full index ranges.
    pub(crate) fn lift(&self, row_index: &[usize], col_index: &[usize], mx: &[f64], my: &[f64]) -> Coupling {
        let mut data = vec![0.0; mx.len() * my.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[row_index[i] * my.len() + col_index[j]] = self.get(i, j);
            }
        }
        Coupling::from_parts(data, mx, my)
    }

    /// Lexicographic comparison of the matrices, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Coupling) -> std::cmp::Ordering {
        for (a, b) in self.data.iter().zip(&other.data) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// `m_X ⊗ m_Y`.
pub fn independent_coupling(x: &MMSpace, y: &MMSpace) -> Coupling {
    independent_of(x.mass(), y.mass())
}

pub fn independent_of(mx: &[f64], my: &[f64]) -> Coupling {
    let data = mx.iter().flat_map(|&a| my.iter().map(move |&b| a * b)).collect();
    Coupling::from_parts(data, mx, my)
}

/// `(id, id)_* m_X`.
pub fn diagonal_coupling(x: &MMSpace) -> Coupling {
    let n = x.len();
    let mut data = vec![0.0; n * n];
    for (i, &m) in x.mass().iter().enumerate() {
        data[i * n + i] = m;
    }
    Coupling::from_parts(data, x.mass(), x.mass())
}

/// The coupling `(id, f)_* m_X` induced by a point map given as `(x, y)` pairs.
pub fn map_coupling(x: &MMSpace, y: &MMSpace, map: &[(usize, usize)]) -> Result<Coupling> {
    let m = y.len();
    let mut data = vec![0.0; x.len() * m];
    for &(a, b) in map {
        if a >= x.len() || b >= m {
            return Err(Error::IndexOutOfRange { row: a, col: b, rows: x.len(), cols: m });
        }
        data[a * m + b] += x.mass()[a];
    }
    Coupling::new(data, x.mass(), y.mass())
}

/// Northwest-corner rule: a vertex of the transportation polytope with the given
/// (equal-total) supplies and demands.
pub fn northwest_corner(supply: &[f64], demand: &[f64]) -> Vec<f64> {
    let (n, m) = (supply.len(), demand.len());
    let mut r: Vec<f64> = supply.iter().map(|v| v.max(0.0)).collect();
    let mut c: Vec<f64> = demand.iter().map(|v| v.max(0.0)).collect();
    let mut out = vec![0.0; n * m];
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let a = r[i].min(c[j]);
        out[i * m + j] += a;
        r[i] -= a;
        c[j] -= a;
        if r[i] <= c[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// `max_{π ∈ Π(m_X, m_Y)} π(S)` and a maximizing coupling.
///
/// Solved as a max-flow (source → X with capacities `m_X`, X → Y on `S` uncapacitated,
/// Y → sink with capacities `m_Y`); the unsaturated remainder is routed by the
/// northwest-corner rule so the result is a full coupling.
pub fn max_mass_on(s: &PairSet, x: &MMSpace, y: &MMSpace) -> Result<(f64, Coupling)> {
    s.check_shape(x.len(), y.len())?;
    Ok(max_mass_on_masses(s, x.mass(), y.mass()))
}

pub(crate) fn max_mass_on_masses(s: &PairSet, mx: &[f64], my: &[f64]) -> (f64, Coupling) {
    let arcs: Vec<(usize, usize, f64)> = s.iter().map(|(i, j)| (i, j, f64::INFINITY)).collect();
    let (_, flow) = bipartite_max_flow(mx, my, &arcs);
    let coupling = complete_partial(flow, mx, my);
    (coupling.mass_on(s), coupling)
}

/// Value of [`max_mass_on`] without building the coupling.
pub(crate) fn max_mass_value(s: &PairSet, mx: &[f64], my: &[f64]) -> f64 {
    let arcs: Vec<(usize, usize, f64)> = s.iter().map(|(i, j)| (i, j, f64::INFINITY)).collect();
    bipartite_max_flow(mx, my, &arcs).0
}

/// Adds a northwest-corner routing of the residual supplies to a sub-coupling.
pub(crate) fn complete_partial(mut partial: Vec<f64>, mx: &[f64], my: &[f64]) -> Coupling {
    let m = my.len();
    let residual_rows: Vec<f64> = mx.iter().enumerate().map(|(i, &a)| a - partial[i * m..(i + 1) * m].iter().sum::<f64>()).collect();
    let residual_cols: Vec<f64> = my.iter().enumerate().map(|(j, &b)| b - (0..mx.len()).map(|i| partial[i * m + j]).sum::<f64>()).collect();
    let rest = northwest_corner(&residual_rows, &residual_cols);
    for (p, r) in partial.iter_mut().zip(rest) {
        *p += r;
    }
    Coupling::from_parts(partial, mx, my)
}

/// A measure on `X × Y × Z`, index `(i * m + j) * k + l`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriCoupling {
    n: usize,
    m: usize,
    k: usize,
    data: Vec<f64>,
}

impl TriCoupling {
    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        self.data[(i * self.m + j) * self.k + l]
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n, self.m, self.k)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn marginal(&self, keep: (usize, usize)) -> Vec<f64> {
        let dims = [self.n, self.m, self.k];
        let cols = dims[keep.1];
        let mut out = vec![0.0; dims[keep.0] * cols];
        for i in 0..self.n {
            for j in 0..self.m {
                for l in 0..self.k {
                    let idx = [i, j, l];
                    out[idx[keep.0] * cols + idx[keep.1]] += self.get(i, j, l);
                }
            }
        }
        out
    }

    pub fn marginal12(&self) -> Vec<f64> {
        self.marginal((0, 1))
    }

    pub fn marginal23(&self) -> Vec<f64> {
        self.marginal((1, 2))
    }
}

/// Gluing: `π_XYZ[i][j][k] = π_XY[i][j] · π_YZ[j][k] / m_Y[j]` (zero where `m_Y[j] = 0`).
pub fn glue(pxy: &Coupling, pyz: &Coupling) -> Result<TriCoupling> {
    let middle = pxy.col_sums();
    let other = pyz.row_sums();
    if middle.len() != other.len() {
        return Err(Error::LengthMismatch { what: "middle marginal", expected: middle.len(), actual: other.len() });
    }
    for (j, (&a, &b)) in middle.iter().zip(&other).enumerate() {
        if (a - b).abs() > TOL {
            return Err(Error::MarginalMismatch { index: j, left: a, right: b });
        }
    }
    let (n, m, k) = (pxy.rows(), pxy.cols(), pyz.cols());
    let mut data = vec![0.0; n * m * k];
    for i in 0..n {
        for j in 0..m {
            if middle[j] <= 0.0 {
                continue;
            }
            let w = pxy.get(i, j) / middle[j];
            for l in 0..k {
                data[(i * m + j) * k + l] = w * pyz.get(j, l);
            }
        }
    }
    Ok(TriCoupling { n, m, k, data })
}

/// `(pr₁₃)_* π_XYZ`. Marginals are taken from the two outer factors of the tensor.
pub fn project13(t: &TriCoupling) -> Coupling {
    let data = t.marginal((0, 2));
    let mx: Vec<f64> = data.chunks(t.k).map(|r| r.iter().sum()).collect();
    let mut mz = vec![0.0; t.k];
    for r in data.chunks(t.k) {
        for (acc, v) in mz.iter_mut().zip(r) {
            *acc += v;
        }
    }
    Coupling::from_parts(data, &mx, &mz)
}

/// `π ⊗ π` as a mass vector over `(X×Y) × (X×Y)`; entry `((i,j),(i',j'))` sits at
/// `(i*m + j) * nm + (i'*m + j')`.
pub fn product_measure(p: &Coupling) -> Vec<f64> {
    let d = p.data();
    d.iter().flat_map(|&a| d.iter().map(move |&b| a * b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;

    fn x2u() -> MMSpace {
        MMSpace::uniform(MetricSpace::two_point(1.0).unwrap())
    }

    #[test]
    fn canonical_couplings() {
        let x = x2u();
        let p = MMSpace::point();
        assert_eq!(independent_coupling(&x, &p).data(), &[0.5, 0.5]);
        assert_eq!(independent_coupling(&x, &x).data(), &[0.25; 4]);
        assert_eq!(diagonal_coupling(&x).data(), &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(diagonal_coupling(&p).data(), &[1.0]);
        let skew = MMSpace::new(MetricSpace::two_point(1.0).unwrap(), vec![1.0, 0.0]).unwrap();
        assert_eq!(diagonal_coupling(&skew).support(), PairSet::from_pairs(2, 2, [(0, 0)]).unwrap());
    }

    #[test]
    fn coupling_validation() {
        let m = [0.5, 0.5];
        assert!(Coupling::new(vec![0.5, 0.0, 0.0, 0.5], &m, &m).is_ok());
        assert!(matches!(Coupling::new(vec![0.5, 0.5, 0.0, 0.0], &m, &m), Err(Error::MarginalMismatch { .. })));
        assert!(Coupling::new(vec![0.6, -0.1, -0.1, 0.6], &m, &m).is_err());
    }

    #[test]
    fn max_mass_examples() {
        let x = x2u();
        let (v, c) = max_mass_on(&PairSet::full(2, 2), &x, &x).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        c.check_marginals(1e-12).unwrap();
        let (v, _) = max_mass_on(&PairSet::empty(2, 2), &x, &x).unwrap();
        assert_eq!(v, 0.0);
        let (v, c) = max_mass_on(&PairSet::from_pairs(2, 2, [(0, 1)]).unwrap(), &x, &x).unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(c.get(0, 1), 0.5);
        c.check_marginals(1e-12).unwrap();
    }

    #[test]
    fn glue_examples() {
        let x = x2u();
        let d = diagonal_coupling(&x);
        let t = glue(&d, &d).unwrap();
        assert_eq!(t.get(0, 0, 0), 0.5);
        assert_eq!(t.get(1, 1, 1), 0.5);
        assert_eq!(t.data().iter().filter(|&&v| v > 0.0).count(), 2);
        assert_eq!(project13(&t).data(), d.data());

        let skew = [0.75, 0.25];
        let z = MMSpace::new(MetricSpace::two_point(2.0).unwrap(), skew.to_vec()).unwrap();
        let t = glue(&independent_coupling(&x, &x), &independent_coupling(&x, &z)).unwrap();
        // hand computation: m_X[i] m_Y[j] m_Z[l]
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    assert!((t.get(i, j, l) - 0.25 * skew[l]).abs() < 1e-15);
                }
            }
        }
        let xz = project13(&t);
        assert_eq!(xz.data(), independent_coupling(&x, &z).data());
        let bad = independent_coupling(&z, &x);
        assert!(matches!(glue(&independent_coupling(&x, &z), &independent_coupling(&x, &z)), Err(Error::MarginalMismatch { .. })));
        assert!(glue(&independent_coupling(&x, &z), &bad).is_ok());
    }

    #[test]
    fn product_measure_examples() {
        let x = x2u();
        let pd = product_measure(&diagonal_coupling(&x));
        assert_eq!(pd.iter().sum::<f64>(), 1.0);
        assert_eq!(pd.iter().filter(|&&v| v == 0.25).count(), 4);
        assert_eq!(pd.iter().filter(|&&v| v > 0.0).count(), 4);
        let pi = product_measure(&independent_coupling(&x, &x));
        assert_eq!(pi.len(), 16);
        assert!(pi.iter().all(|&v| v == 1.0 / 16.0));
    }

    #[test]
    fn northwest_corner_is_feasible() {
        let sup = [0.2, 0.5, 0.3];
        let dem = [0.6, 0.4];
        let c = Coupling::new(northwest_corner(&sup, &dem), &sup, &dem).unwrap();
        assert_eq!(c.atoms().len(), 4);
    }
}
