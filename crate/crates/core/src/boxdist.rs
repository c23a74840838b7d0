//! Box distance `□(X, Y) = min_{π, S} max{1 − π(S), dis S}`.
//!
//! For a threshold `t` the sets with `dis S ≤ t` are the cliques of the
//! `t`-compatibility graph on `supp m_X × supp m_Y`, and `π(S)` is monotone in `S`,
//! so `M(t) = max_π π(S)` over maximal cliques. `M` only changes at pairwise
//! distortion values, so scanning those (and `0`) is exact.

use crate::clique::{self, best_clique, members};
use crate::distortion::distortion;
use crate::error::{Error, Result};
use crate::pairset::PairSet;
use crate::scan::scan_thresholds;
use crate::space::{sort_dedup, MMSpace, TOL};
use crate::transport::{independent_coupling, max_mass_on_masses, max_mass_value, northwest_corner, Coupling};

/// Default cap on maximal cliques visited per threshold.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 1_000_000;

/// Thresholds beyond this count are subsampled by the heuristic scan.
const HEURISTIC_THRESHOLDS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact; fails with `InstanceTooLarge` past the clique budget.
    Exact,
    /// Upper bound from alternating `(π, S)` improvement.
    Heuristic,
    /// Exact when the budget allows, otherwise heuristic with `downgraded` set.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxOptions {
    pub mode: Mode,
    pub clique_budget: u64,
}

impl Default for BoxOptions {
    fn default() -> Self {
        BoxOptions { mode: Mode::Auto, clique_budget: DEFAULT_CLIQUE_BUDGET }
    }
}

impl BoxOptions {
    pub fn exact() -> Self {
        BoxOptions { mode: Mode::Exact, ..Self::default() }
    }

    pub fn heuristic() -> Self {
        BoxOptions { mode: Mode::Heuristic, ..Self::default() }
    }
}

/// An optimal (or, when not `exact`, feasible) `(π, S, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCertificate {
    pub value: f64,
    pub coupling: Coupling,
    pub pairset: PairSet,
    pub threshold: f64,
    pub exact: bool,
    /// Set when `Mode::Auto` fell back to the heuristic.
    pub downgraded: bool,
}

impl BoxCertificate {
    /// `max{t, 1 − π(S)}` from the stored witnesses.
    pub fn evaluate(&self) -> f64 {
        self.threshold.max(1.0 - self.coupling.mass_on(&self.pairset))
    }

    /// Checks the certificate invariants against the two spaces.
    pub fn verify(&self, x: &MMSpace, y: &MMSpace, tol: f64) -> Result<()> {
        self.coupling.check_marginals(tol)?;
        if (self.coupling.row_marginal() != x.mass()) || (self.coupling.col_marginal() != y.mass()) {
            return Err(Error::InvalidCoupling("certificate coupling has foreign marginals".into()));
        }
        if (self.evaluate() - self.value).abs() > tol {
            return Err(Error::InvalidCoupling(format!("value {} does not re-evaluate ({})", self.value, self.evaluate())));
        }
        match distortion(&self.pairset, x, y)?.finite() {
            Some(d) if d <= self.threshold + tol => Ok(()),
            _ => Err(Error::InvalidCoupling("pair set distortion exceeds threshold".into())),
        }
    }

    pub fn transpose(&self) -> BoxCertificate {
        BoxCertificate { coupling: self.coupling.transpose(), pairset: self.pairset.transpose(), ..self.clone() }
    }
}

/// Ordering key used to put the pair `(X, Y)` in a canonical orientation.
fn orientation_key(x: &MMSpace) -> (usize, Vec<u64>) {
    let mut key: Vec<u64> = x.mass().iter().map(|v| v.to_bits()).collect();
    for i in 0..x.len() {
        key.extend(x.space().row(i).iter().map(|v| v.to_bits()));
    }
    (x.len(), key)
}

/// Runs the computation with the spaces in canonical order so that swapping the
/// arguments yields bit-identical (transposed) results.
pub(crate) fn oriented<T, F, R>(x: &MMSpace, y: &MMSpace, f: F, flip: R) -> Result<T>
where
    F: Fn(&MMSpace, &MMSpace) -> Result<T>,
    R: Fn(T) -> T,
{
    if orientation_key(y) < orientation_key(x) {
        f(y, x).map(flip)
    } else {
        f(x, y)
    }
}

/// Support pairs of `X × Y`, row-major: these are the graph vertices.
fn support_pairs(x: &MMSpace, y: &MMSpace) -> Vec<(usize, usize)> {
    let sy = y.support();
    x.support().into_iter().flat_map(|i| sy.iter().map(move |&j| (i, j))).collect()
}

fn pair_gap(x: &MMSpace, y: &MMSpace, a: (usize, usize), b: (usize, usize)) -> f64 {
    (x.d(a.0, b.0) - y.d(a.1, b.1)).abs()
}

/// `{0} ∪ {|d_X − d_Y|}` over pairs of `nodes`, ascending.
fn distortion_thresholds(x: &MMSpace, y: &MMSpace, nodes: &[(usize, usize)]) -> Vec<f64> {
    let mut ts = vec![0.0];
    for (k, &a) in nodes.iter().enumerate() {
        for &b in &nodes[k + 1..] {
            ts.push(pair_gap(x, y, a, b));
        }
    }
    sort_dedup(&mut ts);
    ts
}

fn to_pairset(set: u128, nodes: &[(usize, usize)], rows: usize, cols: usize) -> PairSet {
    PairSet::from_pairs(rows, cols, members(set).map(|k| nodes[k])).expect("nodes are in range")
}

fn compat_graph(x: &MMSpace, y: &MMSpace, nodes: &[(usize, usize)], t: f64) -> Result<Vec<u128>> {
    clique::graph(nodes.len(), |a, b| pair_gap(x, y, nodes[a], nodes[b]) <= t)
}

/// `dis π = min_S max{dis S, 1 − π(S)}` for a fixed coupling, with a minimizing `S`.
///
/// Exact mode runs the threshold scan over maximum-weight cliques on the atoms of
/// `p`; heuristic mode builds cliques greedily and returns an upper bound.
pub fn dis_coupling(p: &Coupling, x: &MMSpace, y: &MMSpace, mode: Mode) -> Result<(f64, PairSet)> {
    dis_coupling_budget(p, x, y, mode, DEFAULT_CLIQUE_BUDGET).map(|(v, s, _)| (v, s))
}

/// As [`dis_coupling`], also reporting whether the value is exact.
pub fn dis_coupling_budget(p: &Coupling, x: &MMSpace, y: &MMSpace, mode: Mode, budget: u64) -> Result<(f64, PairSet, bool)> {
    if p.rows() != x.len() || p.cols() != y.len() {
        return Err(Error::LengthMismatch { what: "coupling shape", expected: x.len() * y.len(), actual: p.rows() * p.cols() });
    }
    let nodes: Vec<(usize, usize)> = p.atoms().into_iter().map(|a| (a.0, a.1)).collect();
    if mode != Mode::Heuristic {
        match dis_coupling_exact(p, x, y, &nodes, budget) {
            Ok((v, s)) => return Ok((v, s, true)),
            Err(e @ Error::InstanceTooLarge { .. }) if mode == Mode::Exact => return Err(e),
            Err(Error::InstanceTooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let (v, s) = dis_coupling_greedy(p, x, y, &nodes);
    Ok((v, s, false))
}

fn dis_coupling_exact(p: &Coupling, x: &MMSpace, y: &MMSpace, nodes: &[(usize, usize)], budget: u64) -> Result<(f64, PairSet)> {
    if nodes.len() > clique::MAX_VERTICES {
        return Err(Error::InstanceTooLarge { what: "coupling atoms", size: nodes.len() as u128, budget: clique::MAX_VERTICES as u128 });
    }
    let w: Vec<f64> = nodes.iter().map(|&(i, j)| p.get(i, j)).collect();
    let weight = |s: u128| members(s).map(|k| w[k]).sum::<f64>();
    let ts = distortion_thresholds(x, y, nodes);
    let sets = std::cell::RefCell::new(vec![None; ts.len()]);
    let failure = std::cell::RefCell::new(None);
    scan_thresholds(&ts, |k| {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match compat_graph(x, y, nodes, ts[k]).and_then(|adj| best_clique(&adj, weight, weight, budget)) {
            Ok(best) => {
                let b = best.map_or(0, |b| b.set);
                sets.borrow_mut()[k] = Some(b);
                weight(b)
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let sets = sets.into_inner();
    let mut best: Option<(usize, u128, f64)> = None;
    for (k, s) in sets.iter().enumerate() {
        if let Some(s) = *s {
            let v = ts[k].max(1.0 - weight(s));
            if best.is_none_or(|b| v < b.2) {
                best = Some((k, s, v));
            }
        }
    }
    let (k, set, _) = best.expect("scan evaluates a threshold");
    let s = to_pairset(set, nodes, x.len(), y.len());
    Ok((ts[k].max(1.0 - p.mass_on(&s)), s))
}

/// Greedy clique by descending weight, restarted from the heaviest few seeds.
fn greedy_clique(adj: &[u128], w: &[f64]) -> u128 {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut best = (0u128, -1.0);
    for &seed in order.iter().take(8) {
        let mut set: u128 = 1 << seed;
        let mut cand = adj[seed];
        for &v in &order {
            if cand >> v & 1 == 1 {
                set |= 1 << v;
                cand &= adj[v];
            }
        }
        let value: f64 = members(set).map(|k| w[k]).sum();
        if value > best.1 + 1e-15 {
            best = (set, value);
        }
    }
    best.0
}

fn heuristic_thresholds(ts: Vec<f64>) -> Vec<f64> {
    if ts.len() <= HEURISTIC_THRESHOLDS {
        return ts;
    }
    let stride = ts.len().div_ceil(HEURISTIC_THRESHOLDS);
    let mut out: Vec<f64> = ts.iter().step_by(stride).copied().collect();
    if out.last() != ts.last() {
        out.push(*ts.last().expect("nonempty"));
    }
    out
}

fn dis_coupling_greedy(p: &Coupling, x: &MMSpace, y: &MMSpace, nodes: &[(usize, usize)]) -> (f64, PairSet) {
    let w: Vec<f64> = nodes.iter().map(|&(i, j)| p.get(i, j)).collect();
    let mut best: Option<(f64, PairSet)> = None;
    // beyond the vertex cap only the heaviest atoms are used
    let (nodes, w) = heaviest(nodes, &w, clique::MAX_VERTICES);
    for t in heuristic_thresholds(distortion_thresholds(x, y, &nodes)) {
        let adj = compat_graph(x, y, &nodes, t).expect("within vertex cap");
        let s = to_pairset(greedy_clique(&adj, &w), &nodes, x.len(), y.len());
        let v = t.max(1.0 - p.mass_on(&s));
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, s));
        }
    }
    best.unwrap_or_else(|| (1.0, PairSet::empty(x.len(), y.len())))
}

fn heaviest(nodes: &[(usize, usize)], w: &[f64], cap: usize) -> (Vec<(usize, usize)>, Vec<f64>) {
    if nodes.len() <= cap {
        return (nodes.to_vec(), w.to_vec());
    }
    let mut idx: Vec<usize> = (0..nodes.len()).collect();
    idx.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    idx.truncate(cap);
    idx.sort_unstable();
    (idx.iter().map(|&k| nodes[k]).collect(), idx.iter().map(|&k| w[k]).collect())
}

/// `□(X, Y)` with its certificate.
pub fn box_distance(x: &MMSpace, y: &MMSpace, options: BoxOptions) -> Result<BoxCertificate> {
    oriented(x, y, |a, b| box_oriented(a, b, options), |c| c.transpose())
}

fn box_oriented(x: &MMSpace, y: &MMSpace, options: BoxOptions) -> Result<BoxCertificate> {
    if options.mode != Mode::Heuristic {
        match box_exact(x, y, options.clique_budget) {
            Ok(c) => return Ok(c),
            Err(e @ Error::InstanceTooLarge { .. }) if options.mode == Mode::Exact => return Err(e),
            Err(Error::InstanceTooLarge { .. }) => {
                let mut c = box_heuristic(x, y);
                c.downgraded = true;
                return Ok(c);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(box_heuristic(x, y))
}

fn box_exact(x: &MMSpace, y: &MMSpace, budget: u64) -> Result<BoxCertificate> {
    let nodes = support_pairs(x, y);
    if nodes.len() > clique::MAX_VERTICES {
        return Err(Error::InstanceTooLarge { what: "support pairs", size: nodes.len() as u128, budget: clique::MAX_VERTICES as u128 });
    }
    let (mx, my) = (x.mass(), y.mass());
    let rows: Vec<f64> = nodes.iter().map(|&(i, _)| mx[i]).collect();
    let cols: Vec<f64> = nodes.iter().map(|&(_, j)| my[j]).collect();
    let (n, m) = (x.len(), y.len());
    // min(m_X(pr₁ S), m_Y(pr₂ S)) bounds max_π π(S)
    let bound = |s: u128| {
        let mut seen_r = vec![false; n];
        let mut seen_c = vec![false; m];
        let (mut a, mut b) = (0.0, 0.0);
        for k in members(s) {
            let (i, j) = nodes[k];
            if !seen_r[i] {
                seen_r[i] = true;
                a += rows[k];
            }
            if !seen_c[j] {
                seen_c[j] = true;
                b += cols[k];
            }
        }
        f64::min(a, b)
    };
    let mass = |s: u128| max_mass_value(&to_pairset(s, &nodes, n, m), mx, my);
    let ts = distortion_thresholds(x, y, &nodes);

    let sets = std::cell::RefCell::new(vec![None; ts.len()]);
    let failure = std::cell::RefCell::new(None);
    scan_thresholds(&ts, |k| {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match compat_graph(x, y, &nodes, ts[k]).and_then(|adj| best_clique(&adj, bound, mass, budget)) {
            Ok(best) => {
                let b = best.expect("support pairs are nonempty");
                sets.borrow_mut()[k] = Some(b);
                b.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    });
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let sets = sets.into_inner();
    let mut best: Option<(usize, u128, f64)> = None;
    for (k, s) in sets.iter().enumerate() {
        if let Some(b) = s {
            let v = ts[k].max(1.0 - b.value);
            if best.is_none_or(|c| v < c.2) {
                best = Some((k, b.set, v));
            }
        }
    }
    let (k, set, _) = best.expect("scan evaluates a threshold");
    let pairset = to_pairset(set, &nodes, n, m);
    let (_, coupling) = max_mass_on_masses(&pairset, mx, my);
    let threshold = ts[k];
    let value = threshold.max(1.0 - coupling.mass_on(&pairset));
    Ok(BoxCertificate { value, coupling, pairset, threshold, exact: true, downgraded: false })
}

/// Alternates `S ← greedy dis-minimizer for π` and `π ← max_mass_on(S)` from a few starts.
fn box_heuristic(x: &MMSpace, y: &MMSpace) -> BoxCertificate {
    let (mx, my) = (x.mass(), y.mass());
    let mut starts = vec![independent_coupling(x, y), Coupling::from_parts(northwest_corner(mx, my), mx, my)];
    if let Some(map) = crate::order::mm_isomorphic(x, y) {
        if let Ok(c) = crate::transport::map_coupling(x, y, &map) {
            starts.insert(0, c);
        }
    }
    let mut best: Option<BoxCertificate> = None;
    for start in starts {
        let mut p = start;
        let mut last = f64::INFINITY;
        for _ in 0..16 {
            let nodes: Vec<(usize, usize)> = p.atoms().into_iter().map(|a| (a.0, a.1)).collect();
            let (_, s) = dis_coupling_greedy(&p, x, y, &nodes);
            if s.is_empty() {
                break;
            }
            let (_, q) = max_mass_on_masses(&s, mx, my);
            let threshold = distortion(&s, x, y).ok().and_then(|d| d.finite()).unwrap_or(f64::INFINITY);
            let value = threshold.max(1.0 - q.mass_on(&s));
            let cert = BoxCertificate { value, coupling: q.clone(), pairset: s, threshold, exact: false, downgraded: false };
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(cert);
            }
            if value >= last - 1e-15 {
                break;
            }
            last = value;
            p = q;
        }
    }
    best.unwrap_or_else(|| full_set_certificate(x, y))
}

/// `S = X × Y`: value `max{dis(X×Y), 0}`, always feasible.
fn full_set_certificate(x: &MMSpace, y: &MMSpace) -> BoxCertificate {
    let s = PairSet::full(x.len(), y.len());
    let threshold = distortion(&s, x, y).ok().and_then(|d| d.finite()).unwrap_or(0.0);
    let coupling = independent_coupling(x, y);
    let value = threshold.max(1.0 - coupling.mass_on(&s));
    BoxCertificate { value, coupling, pairset: s, threshold, exact: false, downgraded: false }
}

/// Largest `|X|·|Y|` accepted by [`box_bruteforce`].
pub const MAX_BRUTEFORCE_PAIRS: usize = 12;

/// `min` over all nonempty `S ⊂ X × Y` of `max{dis S, 1 − max_π π(S)}`, for testing.
pub fn box_bruteforce(x: &MMSpace, y: &MMSpace) -> Result<f64> {
    let (n, m) = (x.len(), y.len());
    if n * m > MAX_BRUTEFORCE_PAIRS {
        return Err(Error::InstanceTooLarge {
            what: "box subset enumeration",
            size: (n * m) as u128,
            budget: MAX_BRUTEFORCE_PAIRS as u128,
        });
    }
    let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let values = crate::par::map_range((1usize << all.len()) - 1, |k| {
        let bits = k + 1;
        let s = PairSet::from_pairs(n, m, (0..all.len()).filter(|b| bits >> b & 1 == 1).map(|b| all[b])).expect("in range");
        let d = distortion(&s, x, y).expect("shape").finite().expect("nonempty");
        d.max(1.0 - max_mass_value(&s, x.mass(), y.mass()))
    });
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// `T ∘ S = {(i, k) : (i, j) ∈ S and (j, k) ∈ T for some j}`.
pub fn compose_pairsets(s: &PairSet, t: &PairSet) -> Result<PairSet> {
    if s.cols() != t.rows() {
        return Err(Error::LengthMismatch { what: "inner index range", expected: s.cols(), actual: t.rows() });
    }
    let mut out = PairSet::empty(s.rows(), t.cols());
    for (i, j) in s.iter() {
        for (j2, k) in t.iter() {
            if j == j2 {
                out.insert(i, k)?;
            }
        }
    }
    Ok(out)
}

/// `□(X, Y) ≤ 1e-9` in exact mode.
pub fn box_is_zero(x: &MMSpace, y: &MMSpace) -> Result<bool> {
    Ok(box_distance(x, y, BoxOptions::exact())?.value <= TOL)
}

/// Reads the support of a zero-value certificate as a point map `supp X → supp Y`,
/// which then is a measure-preserving isometry.
pub fn isometry_from_support(cert: &BoxCertificate, x: &MMSpace, y: &MMSpace) -> Option<Vec<(usize, usize)>> {
    let supp = cert.coupling.support_above(TOL);
    let mut map = Vec::new();
    for i in x.support() {
        let images: Vec<usize> = supp.iter().filter(|p| p.0 == i).map(|p| p.1).collect();
        if images.len() != 1 {
            return None;
        }
        map.push((i, images[0]));
    }
    let mut targets: Vec<usize> = map.iter().map(|p| p.1).collect();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() != map.len() || targets != y.support() {
        return None;
    }
    let isometric = map.iter().all(|&(a, b)| map.iter().all(|&(c, d)| (x.d(a, c) - y.d(b, d)).abs() <= TOL));
    let preserving = map.iter().all(|&(a, b)| (x.mass()[a] - y.mass()[b]).abs() <= TOL);
    (isometric && preserving).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;
    use crate::transport::diagonal_coupling;

    fn x2(m: [f64; 2]) -> MMSpace {
        MMSpace::new(MetricSpace::two_point(1.0).unwrap(), m.to_vec()).unwrap()
    }

    #[test]
    fn dis_coupling_examples() {
        let u = x2([0.5, 0.5]);
        let (v, s) = dis_coupling(&diagonal_coupling(&u), &u, &u, Mode::Exact).unwrap();
        assert_eq!((v, s), (0.0, PairSet::diagonal(2)));
        let (v, s) = dis_coupling(&independent_coupling(&u, &u), &u, &u, Mode::Exact).unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(s.len(), 2);
        let p = MMSpace::point();
        let (v, _) = dis_coupling(&independent_coupling(&u, &p), &u, &p, Mode::Exact).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn box_examples() {
        let u = x2([0.5, 0.5]);
        let p = MMSpace::point();
        let c = box_distance(&u, &p, BoxOptions::exact()).unwrap();
        assert_eq!(c.value, 0.5);
        c.verify(&u, &p, 1e-9).unwrap();
        let skew = x2([0.75, 0.25]);
        let c = box_distance(&skew, &p, BoxOptions::exact()).unwrap();
        assert_eq!(c.value, 0.25);
        assert_eq!(c.threshold, 0.0);
        assert_eq!(c.pairset, PairSet::from_pairs(2, 1, [(0, 0)]).unwrap());
        assert_eq!(box_distance(&u, &u, BoxOptions::exact()).unwrap().value, 0.0);
        assert!(box_distance(&u, &skew, BoxOptions::exact()).unwrap().value >= 0.25 - 1e-12);
    }

    #[test]
    fn bruteforce_examples() {
        let u = x2([0.5, 0.5]);
        assert_eq!(box_bruteforce(&u, &MMSpace::point()).unwrap(), 0.5);
        assert_eq!(box_bruteforce(&u, &u.permuted(&[1, 0])).unwrap(), 0.0);
    }

    #[test]
    fn swapping_transposes_the_certificate() {
        let s = MetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.5], vec![2.0, 1.5, 0.0]]).unwrap();
        let a = MMSpace::new(s, vec![0.2, 0.3, 0.5]).unwrap();
        let b = x2([0.6, 0.4]);
        let ab = box_distance(&a, &b, BoxOptions::exact()).unwrap();
        let ba = box_distance(&b, &a, BoxOptions::exact()).unwrap();
        assert_eq!(ab.value, ba.value);
        assert_eq!(ab.transpose(), ba);
        ab.verify(&a, &b, 1e-9).unwrap();
        ba.verify(&b, &a, 1e-9).unwrap();
    }

    #[test]
    fn composition_examples() {
        let s = PairSet::from_pairs(2, 3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(compose_pairsets(&s, &PairSet::diagonal(3)).unwrap(), s);
        assert!(compose_pairsets(&PairSet::empty(2, 3), &PairSet::full(3, 2)).unwrap().is_empty());
        assert!(compose_pairsets(&s, &PairSet::full(2, 2)).is_err());
    }

    #[test]
    fn zero_detection() {
        let u = x2([0.5, 0.5]);
        assert!(box_is_zero(&u, &u.permuted(&[1, 0])).unwrap());
        assert!(!box_is_zero(&u, &MMSpace::point()).unwrap());
        assert!(!box_is_zero(&u, &x2([0.75, 0.25])).unwrap());
        let skew = x2([0.75, 0.25]);
        let flipped = skew.permuted(&[1, 0]);
        let c = box_distance(&skew, &flipped, BoxOptions::exact()).unwrap();
        assert_eq!(isometry_from_support(&c, &skew, &flipped), Some(vec![(0, 1), (1, 0)]));
    }

    #[test]
    fn auto_mode_downgrades() {
        let u = x2([0.5, 0.5]);
        let opts = BoxOptions { mode: Mode::Auto, clique_budget: 0 };
        let c = box_distance(&u, &MMSpace::point(), opts).unwrap();
        assert!(c.downgraded && !c.exact);
        assert!(c.value >= 0.5 - 1e-12);
        let exact = BoxOptions { mode: Mode::Exact, clique_budget: 0 };
        assert!(matches!(box_distance(&u, &MMSpace::point(), exact), Err(Error::InstanceTooLarge { .. })));
    }
}
