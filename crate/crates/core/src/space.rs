//! Finite metric spaces and metric measure spaces.
//!
//! A [`MetricSpace`] is a full distance matrix over `n` points that satisfies the
//! metric axioms (up to [`INPUT_TOL`] for symmetry and the triangle inequality).
//! An [`MMSpace`] pairs it with a probability vector. Zero-mass points are
//! allowed; support-aware operations skip them.

use crate::error::{Error, Result};

/// Tolerance for validating user input (mass normalization, triangle inequality).
pub const INPUT_TOL: f64 = 1e-12;

/// Tolerance for comparing derived quantities.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl MetricSpace {
    /// Builds a space from a full (not triangular) row-major matrix.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, row, len: r.len() });
            }
            dist.extend_from_slice(r);
        }
        Self::from_flat(n, dist)
    }

    pub fn from_flat(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if dist.len() != n * n {
            return Err(Error::LengthMismatch { what: "distance matrix", expected: n * n, actual: dist.len() });
        }
        let space = MetricSpace { n, dist, labels: None };
        space.validate()?;
        Ok(space)
    }

    /// Attaches point names. The label count must equal the point count.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch { what: "labels", expected: self.n, actual: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The one-point space.
    pub fn point() -> Self {
        MetricSpace { n: 1, dist: vec![0.0], labels: None }
    }

    /// Two points at distance `d > 0`.
    pub fn two_point(d: f64) -> Result<Self> {
        Self::from_flat(2, vec![0.0, d, d, 0.0])
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let v = self.d(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFiniteDistance { row: i, col: j });
                }
                if v < 0.0 {
                    return Err(Error::NegativeDistance { row: i, col: j, value: v });
                }
            }
        }
        for i in 0..n {
            let v = self.d(i, i);
            if v != 0.0 {
                return Err(Error::NonzeroDiagonal { index: i, value: v });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (self.d(i, j), self.d(j, i));
                if (a - b).abs() > INPUT_TOL {
                    return Err(Error::Asymmetric { row: i, col: j, forward: a, backward: b });
                }
                if a == 0.0 {
                    return Err(Error::ZeroDistance { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let direct = self.d(i, k);
                    let detour = self.d(i, j) + self.d(j, k);
                    if direct > detour + INPUT_TOL {
                        return Err(Error::TriangleViolation { i, j, k, direct, detour });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Distinct off-diagonal distance values, ascending.
    pub fn distance_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.dist.iter().copied().filter(|&d| d > 0.0).collect();
        sort_dedup(&mut v);
        v
    }

    /// The sub-space on `points` (in the given order).
    pub fn subspace(&self, points: &[usize]) -> MetricSpace {
        let k = points.len();
        let mut dist = Vec::with_capacity(k * k);
        for &a in points {
            for &b in points {
                dist.push(self.d(a, b));
            }
        }
        let labels = self.labels.as_ref().map(|l| points.iter().map(|&p| l[p].clone()).collect());
        MetricSpace { n: k, dist, labels }
    }

    /// Same space with points renumbered so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> MetricSpace {
        self.subspace(perm)
    }
}

/// The l¹ product `X × Y`; point `(i, j)` has index `i * |Y| + j`.
pub fn product_space(x: &MetricSpace, y: &MetricSpace) -> MetricSpace {
    let (n, m) = (x.len(), y.len());
    let nm = n * m;
    let mut dist = Vec::with_capacity(nm * nm);
    for i in 0..n {
        for j in 0..m {
            for i2 in 0..n {
                for j2 in 0..m {
                    dist.push(x.d(i, i2) + y.d(j, j2));
                }
            }
        }
    }
    let labels = match (x.labels(), y.labels()) {
        (Some(lx), Some(ly)) => Some(lx.iter().flat_map(|a| ly.iter().map(move |b| format!("({a},{b})"))).collect()),
        _ => None,
    };
    MetricSpace { n: nm, dist, labels }
}

/// A finite metric measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct MMSpace {
    space: MetricSpace,
    mass: Vec<f64>,
}

impl MMSpace {
    /// Mass vectors must be nonnegative and sum to 1 within [`INPUT_TOL`]; they are never renormalized.
    pub fn new(space: MetricSpace, mass: Vec<f64>) -> Result<Self> {
        check_mass(&mass, space.len())?;
        Ok(MMSpace { space, mass })
    }

    pub fn uniform(space: MetricSpace) -> Self {
        let n = space.len();
        MMSpace { space, mass: vec![1.0 / n as f64; n] }
    }

    /// The one-point mm-space.
    pub fn point() -> Self {
        MMSpace { space: MetricSpace::point(), mass: vec![1.0] }
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.space.d(i, j)
    }

    pub fn support(&self) -> Vec<usize> {
        support(&self.mass)
    }

    /// Drops zero-mass points; returns the restricted space and the original
    /// index of every retained point.
    pub fn restrict_to_support(&self) -> (MMSpace, Vec<usize>) {
        let supp = self.support();
        let space = self.space.subspace(&supp);
        let mass = supp.iter().map(|&i| self.mass[i]).collect();
        (MMSpace { space, mass }, supp)
    }

    pub fn permuted(&self, perm: &[usize]) -> MMSpace {
        MMSpace { space: self.space.permuted(perm), mass: perm.iter().map(|&p| self.mass[p]).collect() }
    }
}

/// Validates a probability vector of length `n`.
pub fn check_mass(mass: &[f64], n: usize) -> Result<()> {
    if mass.len() != n {
        return Err(Error::LengthMismatch { what: "mass vector", expected: n, actual: mass.len() });
    }
    for (index, &value) in mass.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidMass { index, value });
        }
    }
    let sum: f64 = mass.iter().sum();
    if (sum - 1.0).abs() > INPUT_TOL {
        return Err(Error::MassNotNormalized { sum });
    }
    Ok(())
}

/// Indices carrying positive mass.
pub fn support(mass: &[f64]) -> Vec<usize> {
    mass.iter().enumerate().filter(|(_, &m)| m > 0.0).map(|(i, _)| i).collect()
}

/// `(f_* mu)[j] = sum of mu[i] over f(i) = j`.
pub fn pushforward(mu: &[f64], map: &[usize], target_len: usize) -> Result<Vec<f64>> {
    if map.len() != mu.len() {
        return Err(Error::LengthMismatch { what: "point map", expected: mu.len(), actual: map.len() });
    }
    let mut out = vec![0.0; target_len];
    for (&m, &j) in mu.iter().zip(map) {
        if j >= target_len {
            return Err(Error::PointOutOfRange { index: j, len: target_len });
        }
        out[j] += m;
    }
    Ok(out)
}

pub(crate) fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(MetricSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]), Err(Error::Asymmetric { row: 0, col: 1, .. })));
        assert!(matches!(MetricSpace::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]), Err(Error::ZeroDistance { .. })));
        assert!(matches!(MetricSpace::new(vec![vec![1.0]]), Err(Error::NonzeroDiagonal { .. })));
        assert!(matches!(MetricSpace::new(vec![vec![0.0, 1.0]]), Err(Error::NotSquare { .. })));
        let bad_triangle = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert!(matches!(MetricSpace::new(bad_triangle), Err(Error::TriangleViolation { .. })));
        assert!(matches!(MetricSpace::new(vec![]), Err(Error::EmptySpace)));
    }

    #[test]
    fn mass_is_never_renormalized() {
        let x = MetricSpace::two_point(1.0).unwrap();
        assert!(matches!(MMSpace::new(x.clone(), vec![0.5, 0.4]), Err(Error::MassNotNormalized { .. })));
        assert!(matches!(MMSpace::new(x.clone(), vec![1.5, -0.5]), Err(Error::InvalidMass { index: 1, .. })));
        assert!(MMSpace::new(x, vec![1.0, 0.0]).is_ok());
    }

    #[test]
    fn product_with_point_is_isometric() {
        let y = MetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]]).unwrap();
        let p = product_space(&MetricSpace::point(), &y);
        assert_eq!(p, y);
        let x2 = MetricSpace::two_point(1.0).unwrap();
        assert_eq!(product_space(&x2, &MetricSpace::point()), x2);
        let sq = product_space(&x2, &x2);
        assert_eq!(sq.len(), 4);
        // (a,a) = 0, (b,b) = 3
        assert_eq!(sq.d(0, 3), 2.0);
        assert_eq!(sq.d(1, 2), 2.0);
        assert_eq!(sq.d(0, 1), 1.0);
    }

    #[test]
    fn pushforward_examples() {
        let mu = [0.75, 0.25];
        assert_eq!(pushforward(&mu, &[0, 1], 2).unwrap(), vec![0.75, 0.25]);
        assert_eq!(pushforward(&[0.5, 0.5], &[0, 0], 1).unwrap(), vec![1.0]);
        assert_eq!(pushforward(&mu, &[1, 0], 2).unwrap(), vec![0.25, 0.75]);
        assert!(pushforward(&mu, &[0, 2], 2).is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&[0.5, 0.5]), vec![0, 1]);
        assert_eq!(support(&[1.0, 0.0]), vec![0]);
    }

    #[test]
    fn restriction_keeps_positive_points() {
        let x = MetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
        let mm = MMSpace::new(x, vec![0.5, 0.0, 0.5]).unwrap();
        let (r, idx) = mm.restrict_to_support();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(r.d(0, 1), 2.0);
        assert_eq!(r.mass(), &[0.5, 0.5]);
    }
}
