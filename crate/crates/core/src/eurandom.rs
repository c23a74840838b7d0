//! Eurandom distance `d_Eur(X, Y) = min_π dis_Eur(π ⊗ π)`, where
//! `dis_Eur μ = inf_ε max{ε, μ(|d_X − d_Y| > ε)}`.
//!
//! For a fixed coupling the value is exact. The outer minimum is exact on a
//! 0-dimensional polytope and grid-certified up to `2δ` at small dimension:
//! couplings within total variation `δ` have product measures within `2δ`, and
//! `dis_Eur` is 1-Lipschitz for the Prohorov (hence TV) distance.

use crate::boxdist::{box_distance, oriented, BoxOptions};
use crate::error::{Error, Result};
use crate::kyfan::min_max_tail;
use crate::order::mm_isomorphic;
use crate::par;
use crate::space::{MMSpace, TOL};
use crate::transport::grid::{coupling_grid_adaptive, polytope_dim, GridConfig};
use crate::transport::{independent_coupling, local_search, map_coupling, northwest_corner, Coupling, SearchBudget};

/// Largest `|X|·|Y|` accepted by [`dis_eur`].
pub const MAX_PAIRS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct EurCertificate {
    /// `dis_Eur(π ⊗ π)` of the stored coupling.
    pub upper: f64,
    pub coupling: Coupling,
    /// Least `ε` with `(π⊗π)(|d_X − d_Y| > ε) ≤ ε`; equals `upper`.
    pub epsilon: f64,
    /// `upper − lower` when a certificate applies (`0` means exact).
    pub certified_error: Option<f64>,
    /// TV radius of the grid behind `certified_error`, if one was used.
    pub grid_step: Option<f64>,
}

impl EurCertificate {
    pub fn lower(&self) -> Option<f64> {
        self.certified_error.map(|e| (self.upper - e).max(0.0))
    }

    pub fn is_exact(&self) -> bool {
        self.certified_error.is_some_and(|e| e <= TOL)
    }

    fn transpose(self) -> Self {
        EurCertificate { coupling: self.coupling.transpose(), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EurOptions {
    pub grid: GridConfig,
    pub search: SearchBudget,
}

/// `(value, ε)`: `dis_Eur(p ⊗ p)` and its minimizing `ε`.
pub fn dis_eur(p: &Coupling, x: &MMSpace, y: &MMSpace) -> Result<(f64, f64)> {
    if p.rows() != x.len() || p.cols() != y.len() {
        return Err(Error::LengthMismatch { what: "coupling shape", expected: x.len() * y.len(), actual: p.rows() * p.cols() });
    }
    if x.len() * y.len() > MAX_PAIRS {
        return Err(Error::InstanceTooLarge { what: "Eurandom quadruples", size: (x.len() * y.len()) as u128, budget: MAX_PAIRS as u128 });
    }
    let v = dis_eur_unchecked(p, x, y);
    Ok((v, v))
}

fn dis_eur_unchecked(p: &Coupling, x: &MMSpace, y: &MMSpace) -> f64 {
    let atoms = p.atoms();
    let mut values = Vec::with_capacity(atoms.len() * atoms.len());
    let mut weights = Vec::with_capacity(atoms.len() * atoms.len());
    for &(i, j, a) in &atoms {
        for &(i2, j2, b) in &atoms {
            values.push((x.d(i, i2) - y.d(j, j2)).abs());
            weights.push(a * b);
        }
    }
    min_max_tail(&values, &weights)
}

/// Minimizes [`dis_eur`] over the coupling polytope.
pub fn eurandom_distance(x: &MMSpace, y: &MMSpace, options: &EurOptions) -> Result<EurCertificate> {
    if x.len() * y.len() > MAX_PAIRS {
        return Err(Error::InstanceTooLarge { what: "Eurandom quadruples", size: (x.len() * y.len()) as u128, budget: MAX_PAIRS as u128 });
    }
    oriented(x, y, |a, b| Ok(eur_oriented(a, b, options)), EurCertificate::transpose)
}

fn eur_oriented(x: &MMSpace, y: &MMSpace, options: &EurOptions) -> EurCertificate {
    let (mx, my) = (x.mass(), y.mass());
    let objective = |c: &Coupling| dis_eur_unchecked(c, x, y);
    let dim = polytope_dim(mx, my);
    if dim == 0 {
        let c = independent_coupling(x, y);
        let v = objective(&c);
        return EurCertificate { upper: v, coupling: c, epsilon: v, certified_error: Some(0.0), grid_step: None };
    }

    let mut candidates = vec![independent_coupling(x, y), Coupling::from_parts(northwest_corner(mx, my), mx, my)];
    if let Some(map) = mm_isomorphic(x, y) {
        if let Ok(c) = map_coupling(x, y, &map) {
            candidates.push(c);
        }
    }
    if let Ok(b) = box_distance(x, y, BoxOptions::default()) {
        candidates.push(b.coupling);
    }

    let grid = (dim <= options.grid.max_dim).then(|| coupling_grid_adaptive(x, y, &options.grid).ok()).flatten();
    let mut grid_best = None;
    if let Some(g) = &grid {
        let values = par::map(&g.points, |c| objective(c));
        let k = best_index(&values, &g.points);
        grid_best = Some(values[k]);
        candidates.push(g.points[k].clone());
    }

    let values = par::map(&candidates, |c| objective(c));
    let k = best_index(&values, &candidates);
    let refined = local_search(objective, &candidates[k], options.search);
    let (coupling, upper) = {
        let v = objective(&refined);
        if v < values[k] {
            (refined, v)
        } else {
            (candidates[k].clone(), values[k])
        }
    };
    let (certified_error, grid_step) = match (grid_best, &grid) {
        (Some(b), Some(g)) => {
            let lower = (b - 2.0 * g.step).max(0.0);
            (Some((upper - lower).max(0.0)), Some(g.step))
        }
        _ => (None, None),
    };
    EurCertificate { upper, coupling, epsilon: upper, certified_error, grid_step }
}

/// Minimum value, ties broken by the lexicographically smallest coupling.
fn best_index(values: &[f64], couplings: &[Coupling]) -> usize {
    let mut best = 0;
    for k in 1..values.len() {
        let ord = values[k].total_cmp(&values[best]).then_with(|| couplings[k].lex_cmp(&couplings[best]));
        if ord == std::cmp::Ordering::Less {
            best = k;
        }
    }
    best
}

/// `d_Eur(X, Y) = 0`, decided from a certified lower bound.
pub fn eur_is_zero(x: &MMSpace, y: &MMSpace) -> Result<bool> {
    if polytope_dim(x.mass(), y.mass()) > GridConfig::default().max_dim {
        return Err(Error::Uncertified("coupling polytope dimension exceeds the grid budget"));
    }
    let c = eurandom_distance(x, y, &EurOptions::default())?;
    match c.certified_error {
        Some(e) => Ok(c.upper <= e + TOL),
        None => Err(Error::Uncertified("no grid certificate")),
    }
}
