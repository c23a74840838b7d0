//! Observable distance through couplings:
//! `d_conc^π = d_H(pr₁*Lip₁(X), pr₂*Lip₁(Y))` in the Ky Fan metric of `π`, and
//! `d_conc = min_π d_conc^π`.
//!
//! The inner problem `inf_{g ∈ Lip₁(Y)} d_KF^π(f∘pr₁, g∘pr₂)` is solved exactly.
//! Keeping a set `K` of atoms of `π` within `ε` is possible for some 1-Lipschitz
//! `g` iff `|f(i) − f(i')| − d_Y(j, j') ≤ 2ε` on all pairs of `K` (interval-constrained
//! McShane extension), so the best `K` at a given `ε` is a maximum-weight clique of
//! the corresponding compatibility graph and the value is `min_ε max{ε, 1 − π(K)}`.
//!
//! Lower bounds evaluate the inner problem on a library of 1-Lipschitz functions
//! (distance functions, cones, seeded random cones, and for at most three support
//! points a grid over anchored functions). The upper bound is `dis π`: for
//! `(π, S)` and `f ∈ Lip₁(X)`, `g(y) = min_{(x, y') ∈ S} f(x) + d_Y(y, y') + dis S`
//! is 1-Lipschitz and within `dis S` of `f` on `S`.

use rand::Rng;

use crate::boxdist::{box_distance, dis_coupling_budget, BoxOptions, Mode, DEFAULT_CLIQUE_BUDGET};
use crate::clique::{self, best_clique, members};
use crate::error::{Error, Result};
use crate::generate;
use crate::order::mm_isomorphic;
use crate::par;
use crate::scan::scan_thresholds;
use crate::space::{sort_dedup, MMSpace, MetricSpace, TOL};
use crate::transport::grid::{coupling_grid_adaptive, polytope_dim, GridConfig};
use crate::transport::{independent_coupling, local_search, map_coupling, northwest_corner, Coupling, SearchBudget};

/// Largest atom count for [`inner_kf_min_bruteforce`].
pub const MAX_ENUMERATED_ATOMS: usize = 14;

/// A 1-Lipschitz function on the points of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct LipFunction(Vec<f64>);

impl LipFunction {
    pub fn new(values: Vec<f64>, space: &MetricSpace) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { what: "function", expected: space.len(), actual: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("function values must be finite"));
        }
        for i in 0..values.len() {
            for j in 0..values.len() {
                if (values[i] - values[j]).abs() > space.d(i, j) + TOL {
                    return Err(Error::InvalidArgument("function is not 1-Lipschitz"));
                }
            }
        }
        Ok(LipFunction(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Which side of the Hausdorff distance a witness function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// Result of the inner minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerValue {
    pub value: f64,
    /// False when the clique budget forced the greedy upper bound.
    pub exact: bool,
}

/// `inf_{g ∈ Lip₁(Y)} d_KF^p(f∘pr₁, g∘pr₂)` for `f` on the rows of `p`.
pub fn inner_kf_min(f: &[f64], p: &Coupling, y: &MetricSpace) -> Result<InnerValue> {
    inner_with_budget(f, p, y, DEFAULT_CLIQUE_BUDGET)
}

fn atoms_of(f: &[f64], p: &Coupling, y: &MetricSpace) -> Result<Vec<(usize, usize, f64)>> {
    if f.len() != p.rows() {
        return Err(Error::LengthMismatch { what: "function", expected: p.rows(), actual: f.len() });
    }
    if y.len() != p.cols() {
        return Err(Error::LengthMismatch { what: "target space", expected: p.cols(), actual: y.len() });
    }
    Ok(p.atoms())
}

fn conflict(f: &[f64], y: &MetricSpace, a: (usize, usize, f64), b: (usize, usize, f64)) -> f64 {
    ((f[a.0] - f[b.0]).abs() - y.d(a.1, b.1)) / 2.0
}

fn inner_with_budget(f: &[f64], p: &Coupling, y: &MetricSpace, budget: u64) -> Result<InnerValue> {
    let atoms = atoms_of(f, p, y)?;
    let total: f64 = atoms.iter().map(|a| a.2).sum();
    let mut ts = vec![0.0];
    for (k, &a) in atoms.iter().enumerate() {
        for &b in &atoms[k + 1..] {
            let c = conflict(f, y, a, b);
            if c > 0.0 {
                ts.push(c);
            }
        }
    }
    sort_dedup(&mut ts);
    let weight = |s: u128| members(s).map(|k| atoms[k].2).sum::<f64>();

    if atoms.len() <= clique::MAX_VERTICES {
        let failed = std::cell::Cell::new(false);
        let r = scan_thresholds(&ts, |k| {
            if failed.get() {
                return 0.0;
            }
            let adj = clique::graph(atoms.len(), |a, b| conflict(f, y, atoms[a], atoms[b]) <= ts[k]).expect("within cap");
            match best_clique(&adj, weight, weight, budget) {
                Ok(b) => b.map_or(0.0, |b| b.value) + (1.0 - total),
                Err(_) => {
                    failed.set(true);
                    0.0
                }
            }
        });
        if !failed.get() {
            return Ok(InnerValue { value: r.value, exact: true });
        }
    }
    Ok(InnerValue { value: greedy_inner(f, y, &atoms, &ts, total), exact: false })
}

/// Per threshold, drops the atom with the largest conflicting mass until none remain.
fn greedy_inner(f: &[f64], y: &MetricSpace, atoms: &[(usize, usize, f64)], ts: &[f64], total: f64) -> f64 {
    let mut best = f64::INFINITY;
    for &t in ts {
        if t >= best {
            break;
        }
        let mut kept: Vec<bool> = vec![true; atoms.len()];
        loop {
            let pressure: Vec<f64> = (0..atoms.len())
                .map(|a| {
                    if !kept[a] {
                        return 0.0;
                    }
                    (0..atoms.len()).filter(|&b| kept[b] && conflict(f, y, atoms[a], atoms[b]) > t).map(|b| atoms[b].2).sum::<f64>()
                        / atoms[a].2
                })
                .collect();
            let worst =
                (0..atoms.len()).filter(|&a| pressure[a] > 0.0).max_by(|&a, &b| pressure[a].total_cmp(&pressure[b]).then(b.cmp(&a)));
            match worst {
                Some(a) => kept[a] = false,
                None => break,
            }
        }
        let dropped: f64 = (0..atoms.len()).filter(|&a| !kept[a]).map(|a| atoms[a].2).sum();
        best = best.min(t.max(dropped + (1.0 - total)));
    }
    best
}

/// Enumerates every violator set `D` of atoms: `min_D max{ε*(D), p(D)}`. Test oracle.
pub fn inner_kf_min_bruteforce(f: &[f64], p: &Coupling, y: &MetricSpace) -> Result<f64> {
    let atoms = atoms_of(f, p, y)?;
    let k = atoms.len();
    if k > MAX_ENUMERATED_ATOMS {
        return Err(Error::InstanceTooLarge { what: "violator subsets", size: 1u128 << k, budget: 1u128 << MAX_ENUMERATED_ATOMS });
    }
    let total: f64 = atoms.iter().map(|a| a.2).sum();
    let mut best = f64::INFINITY;
    for d in 0usize..1 << k {
        let mut eps: f64 = 0.0;
        let mut kept_mass = 0.0;
        for a in 0..k {
            if d >> a & 1 == 1 {
                continue;
            }
            kept_mass += atoms[a].2;
            for b in a + 1..k {
                if d >> b & 1 == 0 {
                    eps = eps.max(conflict(f, y, atoms[a], atoms[b]));
                }
            }
        }
        best = best.min(eps.max(total - kept_mass + (1.0 - total)));
    }
    Ok(best)
}

/// Knobs for the observable bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcEffort {
    /// Random cone functions per side.
    pub random_cones: usize,
    pub seed: u64,
    /// Grid over anchored functions when the support has at most 3 points.
    pub function_grid: bool,
    /// Grid cells per unit of the sup-norm range `[−diam, diam]`.
    pub function_grid_cells: usize,
    /// Coupling grid searched for upper bounds.
    pub coupling_grid: GridConfig,
    /// Coupling grid whose per-point lower bounds certify the global lower bound.
    pub lower_grid: GridConfig,
    pub search: SearchBudget,
    pub clique_budget: u64,
}

impl Default for ConcEffort {
    fn default() -> Self {
        ConcEffort {
            random_cones: 64,
            seed: 0,
            function_grid: true,
            function_grid_cells: 32,
            coupling_grid: GridConfig { max_points: 5_000, ..GridConfig::default() },
            lower_grid: GridConfig { max_points: 400, ..GridConfig::default() },
            search: SearchBudget { rounds: 10, evaluations: 2_000, seed: 0 },
            clique_budget: DEFAULT_CLIQUE_BUDGET,
        }
    }
}

impl ConcEffort {
    /// Cheap settings used for per-coupling lower bounds inside a grid.
    fn light(&self) -> ConcEffort {
        ConcEffort { random_cones: self.random_cones.min(16), function_grid: false, ..*self }
    }
}

/// How the lower bound of [`ConcBounds`] is justified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerCertificate {
    /// `lower` is `d_conc^π` bounded from below for the reported coupling only.
    PerCoupling,
    /// The polytope is a single coupling.
    UniqueCoupling,
    /// Minimum of per-coupling lower bounds over a TV-net of radius `step`, minus `step`
    /// (`d_conc^π` is 1-Lipschitz for the total-variation distance).
    Grid { step: f64 },
    /// No global lower bound is available; `lower` is `0`.
    Uncertified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcBounds {
    pub lower: f64,
    pub upper: f64,
    pub coupling: Coupling,
    /// Function realizing `lower` (on X or Y per `witness_side`), if any.
    pub witness_f: Option<LipFunction>,
    pub witness_side: Option<Side>,
    pub certificate: LowerCertificate,
    /// Whether `upper` is `dis π` computed exactly (rather than a heuristic `dis` bound).
    pub upper_exact: bool,
}

impl ConcBounds {
    /// `lower == upper` within tolerance and the lower bound is global.
    pub fn is_exact(&self) -> bool {
        self.upper - self.lower <= TOL && !matches!(self.certificate, LowerCertificate::Uncertified)
    }
}

/// Candidate 1-Lipschitz functions on `x`: `±d(x_i, ·)`, `±min(d(x_i, ·), d(x_j, ·))`,
/// and seeded random cones `min_k c_k + d(x_k, ·)`.
pub fn candidate_functions(x: &MetricSpace, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        out.push(x.row(i).to_vec());
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push((0..n).map(|p| x.d(i, p).min(x.d(j, p))).collect());
        }
    }
    let mut rng = generate::rng(seed);
    let diam = x.diameter();
    for _ in 0..count {
        let k = rng.random_range(1..=n);
        let centers: Vec<(usize, f64)> = (0..k).map(|_| (rng.random_range(0..n), generate::uniform01(&mut rng) * diam)).collect();
        out.push((0..n).map(|p| centers.iter().map(|&(c, h)| h + x.d(c, p)).fold(f64::INFINITY, f64::min)).collect());
    }
    let negated: Vec<Vec<f64>> = out.iter().map(|f| f.iter().map(|v| -v).collect()).collect();
    out.extend(negated);
    out
}

/// Best exact inner value over `fs`; returns `(value, index)`.
fn best_inner(fs: &[Vec<f64>], p: &Coupling, y: &MetricSpace, budget: u64) -> (f64, Option<usize>) {
    let values = par::map(fs, |f| inner_with_budget(f, p, y, budget).ok().filter(|v| v.exact).map(|v| v.value));
    let mut best = (0.0, None);
    for (k, v) in values.into_iter().enumerate() {
        if let Some(v) = v {
            if v > best.0 {
                best = (v, Some(k));
            }
        }
    }
    best
}

/// Anchored functions on the support of `mass` with grid spacing `s`, within slack `s`
/// of 1-Lipschitz; `None` when the support is larger than 3.
fn function_grid(x: &MetricSpace, mass: &[f64], cells: usize) -> Option<(Vec<Vec<f64>>, f64)> {
    let supp: Vec<usize> = (0..x.len()).filter(|&i| mass[i] > 0.0).collect();
    if supp.len() > 3 || supp.len() < 2 {
        return None;
    }
    let diam = supp.iter().flat_map(|&a| supp.iter().map(move |&b| x.d(a, b))).fold(0.0, f64::max);
    let s = diam / cells as f64;
    let anchor = supp[0];
    let levels: Vec<Vec<f64>> = supp[1..]
        .iter()
        .map(|&i| {
            let r = x.d(anchor, i);
            let k = (r / s).ceil() as i64;
            (-k..=k).map(|t| t as f64 * s).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; levels.len()];
    loop {
        let mut f = vec![0.0; x.len()];
        for (q, &i) in supp[1..].iter().enumerate() {
            f[i] = levels[q][idx[q]];
        }
        let near = supp.iter().all(|&a| supp.iter().all(|&b| (f[a] - f[b]).abs() <= x.d(a, b) + s + 1e-12));
        if near {
            out.push(f);
        }
        let mut q = 0;
        loop {
            if q == idx.len() {
                return Some((out, s));
            }
            idx[q] += 1;
            if idx[q] < levels[q].len() {
                break;
            }
            idx[q] = 0;
            q += 1;
        }
    }
}

/// `f ↦ min_y f(y) + d(·, y)` over the support, shifted by `s/2`: 1-Lipschitz on the
/// support and within `s/2` of a function that is `s`-nearly 1-Lipschitz.
fn lipschitz_projection(f: &[f64], x: &MetricSpace, mass: &[f64], s: f64) -> Vec<f64> {
    let supp: Vec<usize> = (0..x.len()).filter(|&i| mass[i] > 0.0).collect();
    (0..x.len()).map(|p| supp.iter().map(|&q| f[q] + x.d(p, q)).fold(f64::INFINITY, f64::min) + s / 2.0).collect()
}

/// One-sided sup bound: `(lower, witness, certified_upper)`.
fn one_side(p: &Coupling, x: &MetricSpace, y: &MetricSpace, effort: &ConcEffort, seed: u64) -> (f64, Option<Vec<f64>>, Option<f64>) {
    let mut fs = candidate_functions(x, effort.random_cones, seed);
    let mut certified = None;
    if effort.function_grid {
        if let Some((grid, s)) = function_grid(x, p.row_marginal(), effort.function_grid_cells) {
            let raw = par::map(&grid, |f| inner_with_budget(f, p, y, effort.clique_budget).ok().filter(|v| v.exact).map(|v| v.value));
            if raw.iter().all(Option::is_some) {
                // every anchored 1-Lipschitz f is within s/2 of a grid point
                certified = Some(raw.iter().flatten().fold(0.0f64, |a, &b| a.max(b)) + s / 2.0);
            }
            fs.extend(grid.iter().map(|f| lipschitz_projection(f, x, p.row_marginal(), s)));
        }
    }
    let (v, k) = best_inner(&fs, p, y, effort.clique_budget);
    (v, k.map(|k| fs[k].clone()), certified)
}

/// Bounds on `d_conc^π` for a fixed coupling.
pub fn dconc_pi_bounds(p: &Coupling, x: &MMSpace, y: &MMSpace, effort: &ConcEffort) -> Result<ConcBounds> {
    if p.rows() != x.len() || p.cols() != y.len() {
        return Err(Error::LengthMismatch { what: "coupling shape", expected: x.len() * y.len(), actual: p.rows() * p.cols() });
    }
    let (dis, _, upper_exact) = dis_coupling_budget(p, x, y, Mode::Auto, effort.clique_budget)?;
    let (lx, fx, cx) = one_side(p, x.space(), y.space(), effort, effort.seed);
    let pt = p.transpose();
    let (ly, fy, cy) = one_side(&pt, y.space(), x.space(), effort, effort.seed.wrapping_add(1));
    let mut upper = dis;
    if let (Some(a), Some(b)) = (cx, cy) {
        upper = upper.min(a.max(b));
    }
    let (lower, witness) = if ly > lx { (ly, fy.map(|f| (f, Side::Y))) } else { (lx, fx.map(|f| (f, Side::X))) };
    Ok(ConcBounds {
        lower,
        upper,
        coupling: p.clone(),
        witness_side: witness.as_ref().map(|w| w.1),
        witness_f: witness.map(|w| LipFunction(w.0)),
        certificate: LowerCertificate::PerCoupling,
        upper_exact,
    })
}

/// Bounds on `d_conc(X, Y) = min_π d_conc^π`.
pub fn dconc_bounds(x: &MMSpace, y: &MMSpace, effort: &ConcEffort) -> Result<ConcBounds> {
    dconc_bounds_with(x, y, effort, &[])
}

/// As [`dconc_bounds`], with extra candidate couplings for the upper bound.
pub fn dconc_bounds_with(x: &MMSpace, y: &MMSpace, effort: &ConcEffort, extra: &[Coupling]) -> Result<ConcBounds> {
    let (mx, my) = (x.mass(), y.mass());
    for c in extra {
        if c.rows() != x.len() || c.cols() != y.len() {
            return Err(Error::LengthMismatch { what: "candidate coupling", expected: x.len() * y.len(), actual: c.rows() * c.cols() });
        }
    }
    let dim = polytope_dim(mx, my);
    if dim == 0 {
        let mut b = dconc_pi_bounds(&independent_coupling(x, y), x, y, effort)?;
        b.certificate = LowerCertificate::UniqueCoupling;
        return Ok(b);
    }

    let dis = |c: &Coupling| dis_coupling_budget(c, x, y, Mode::Auto, effort.clique_budget).map(|r| r.0).unwrap_or(f64::INFINITY);
    let mut candidates: Vec<Coupling> = extra.to_vec();
    candidates.push(box_distance(x, y, BoxOptions { mode: Mode::Auto, clique_budget: effort.clique_budget })?.coupling);
    if let Some(map) = mm_isomorphic(x, y) {
        candidates.push(map_coupling(x, y, &map)?);
    }
    candidates.push(independent_coupling(x, y));
    candidates.push(Coupling::from_parts(northwest_corner(mx, my), mx, my));
    if dim <= effort.coupling_grid.max_dim {
        if let Ok(g) = coupling_grid_adaptive(x, y, &effort.coupling_grid) {
            candidates.extend(g.points);
        }
    }
    let values = par::map(&candidates, |c| dis(c));
    let mut k = 0;
    for j in 1..values.len() {
        if values[j] < values[k] {
            k = j;
        }
    }
    let refined = local_search(dis, &candidates[k], effort.search);
    let best = if dis(&refined) < values[k] { refined } else { candidates[k].clone() };
    let mut bounds = dconc_pi_bounds(&best, x, y, effort)?;

    if dim <= effort.lower_grid.max_dim {
        if let Ok(g) = coupling_grid_adaptive(x, y, &effort.lower_grid) {
            let light = effort.light();
            let lows = par::map(&g.points, |c| dconc_pi_bounds(c, x, y, &light).map(|b| b.lower).unwrap_or(0.0));
            let min = lows.into_iter().fold(f64::INFINITY, f64::min);
            let global = (min - g.step).max(0.0);
            bounds.lower = global.min(bounds.upper);
            bounds.certificate = LowerCertificate::Grid { step: g.step };
            if bounds.lower <= 0.0 {
                bounds.witness_f = None;
                bounds.witness_side = None;
            }
            return Ok(bounds);
        }
    }
    bounds.lower = 0.0;
    bounds.witness_f = None;
    bounds.witness_side = None;
    bounds.certificate = LowerCertificate::Uncertified;
    Ok(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::diagonal_coupling;

    fn x2(m: [f64; 2]) -> MMSpace {
        MMSpace::new(MetricSpace::two_point(1.0).unwrap(), m.to_vec()).unwrap()
    }

    #[test]
    fn inner_examples() {
        let u = x2([0.5, 0.5]);
        let p = MMSpace::point();
        let c = independent_coupling(&u, &p);
        assert_eq!(inner_kf_min(&[3.0, 3.0], &c, p.space()).unwrap().value, 0.0);
        assert_eq!(inner_kf_min(&[0.0, 1.0], &c, p.space()).unwrap().value, 0.5);
        let d = diagonal_coupling(&u);
        assert_eq!(inner_kf_min(&[0.0, 1.0], &d, u.space()).unwrap().value, 0.0);
        let skew = x2([0.75, 0.25]);
        let c = independent_coupling(&skew, &p);
        assert_eq!(inner_kf_min(&[0.0, 1.0], &c, p.space()).unwrap().value, 0.25);
        assert_eq!(inner_kf_min_bruteforce(&[0.0, 1.0], &c, p.space()).unwrap(), 0.25);
    }

    #[test]
    fn pi_bounds_examples() {
        let u = x2([0.5, 0.5]);
        let e = ConcEffort::default();
        let b = dconc_pi_bounds(&diagonal_coupling(&u), &u, &u, &e).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let p = MMSpace::point();
        let b = dconc_pi_bounds(&independent_coupling(&u, &p), &u, &p, &e).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 0.5));
        assert_eq!(b.witness_side, Some(Side::X));
    }

    #[test]
    fn dconc_examples() {
        let e = ConcEffort::default();
        let u = x2([0.5, 0.5]);
        let p = MMSpace::point();
        let b = dconc_bounds(&u, &p, &e).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 0.5));
        assert_eq!(b.certificate, LowerCertificate::UniqueCoupling);
        assert!(b.is_exact());
        let b = dconc_bounds(&x2([0.75, 0.25]), &p, &e).unwrap();
        assert_eq!((b.lower, b.upper), (0.25, 0.25));
        let b = dconc_bounds(&u, &u, &e).unwrap();
        assert_eq!(b.upper, 0.0);
        assert_eq!(b.lower, 0.0);
        assert_eq!(b.certificate, LowerCertificate::Grid { step: 1.0 / 64.0 });
    }

    #[test]
    fn candidates_are_lipschitz() {
        let s = MetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]]).unwrap();
        for f in candidate_functions(&s, 16, 3) {
            LipFunction::new(f, &s).unwrap();
        }
        let m = [0.2, 0.3, 0.5];
        let (grid, step) = function_grid(&s, &m, 8).unwrap();
        for f in &grid {
            LipFunction::new(lipschitz_projection(f, &s, &m, step), &s).unwrap();
        }
    }
}
