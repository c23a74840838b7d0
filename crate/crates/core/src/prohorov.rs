//! Prohorov distance between two measures on one finite space.
//!
//! [`prohorov_bruteforce`] follows the definition over all subsets;
//! [`prohorov_strassen`] uses the coupling representation
//! `d_P(μ, ν) = min_{π, S} max{dis_Δ S, 1 − π(S)}`, where for a fixed threshold the
//! best `S` is the whole sublevel set `{d ≤ t}`.

use crate::error::{Error, Result};
use crate::pairset::PairSet;
use crate::par;
use crate::scan::scan_thresholds;
use crate::space::{check_mass, MetricSpace, INPUT_TOL};
use crate::transport::{max_mass_on_masses, max_mass_value, Coupling};

/// Largest space accepted by [`prohorov_bruteforce`].
pub const MAX_BRUTEFORCE_POINTS: usize = 16;

/// A minimizing `(π, S, t)` for the coupling representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProhorovCertificate {
    pub value: f64,
    pub coupling: Coupling,
    pub pairset: PairSet,
    pub threshold: f64,
}

impl ProhorovCertificate {
    /// `max{t, 1 − π(S)}` recomputed from the witnesses.
    pub fn evaluate(&self) -> f64 {
        self.threshold.max(1.0 - saturate(self.coupling.mass_on(&self.pairset)))
    }
}

/// `{(i, j) : d(i, j) ≤ t}`.
pub fn sublevel_set(x: &MetricSpace, t: f64) -> PairSet {
    let n = x.len();
    let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| x.d(i, j) <= t);
    PairSet::from_pairs(n, n, pairs).expect("indices in range")
}

/// `0` followed by the distinct positive distances.
fn thresholds(x: &MetricSpace) -> Vec<f64> {
    let mut ts = vec![0.0];
    ts.extend(x.distance_values());
    ts
}

/// Least `ε ≥ 0` with `μ(U_ε(A)) ≥ ν(A) − ε` for every `A ⊂ X`.
///
/// For a fixed `A` the condition only changes at the values of `d(·, A)`, so the
/// per-set infimum is `min_k max{d_k, ν(A) − μ{d(·, A) ≤ d_k}}` over the distinct
/// values `d_k`; the answer is the maximum over nonempty `A`, visited in Gray-code order.
pub fn prohorov_bruteforce(mu: &[f64], nu: &[f64], x: &MetricSpace) -> Result<f64> {
    let n = x.len();
    check_mass(mu, n)?;
    check_mass(nu, n)?;
    if n > MAX_BRUTEFORCE_POINTS {
        return Err(Error::InstanceTooLarge {
            what: "Prohorov subset enumeration",
            size: 1u128 << n,
            budget: 1u128 << MAX_BRUTEFORCE_POINTS,
        });
    }
    let total = 1usize << n;
    let chunk = 1usize << n.min(8);
    let chunks = total.div_ceil(chunk);
    let worst = par::map_range(chunks, |c| {
        let mut worst = 0.0f64;
        let mut dist = vec![0.0; n];
        let mut order: Vec<usize> = (0..n).collect();
        for g in c * chunk..((c + 1) * chunk).min(total) {
            let a = g ^ (g >> 1);
            if a == 0 {
                continue;
            }
            worst = worst.max(per_set_bound(a, mu, nu, x, &mut dist, &mut order));
        }
        worst
    });
    Ok(worst.into_iter().fold(0.0, f64::max))
}

fn per_set_bound(a: usize, mu: &[f64], nu: &[f64], x: &MetricSpace, dist: &mut [f64], order: &mut [usize]) -> f64 {
    let n = x.len();
    let mut nu_a = 0.0;
    for y in 0..n {
        if a >> y & 1 == 1 {
            nu_a += nu[y];
        }
        dist[y] = (0..n).filter(|&p| a >> p & 1 == 1).map(|p| x.d(y, p)).fold(f64::INFINITY, f64::min);
    }
    order.sort_by(|&p, &q| dist[p].total_cmp(&dist[q]));
    let mut best = f64::INFINITY;
    let mut within = 0.0;
    let mut k = 0;
    while k < n {
        let level = dist[order[k]];
        while k < n && dist[order[k]] == level {
            within += mu[order[k]];
            k += 1;
        }
        let gap = nu_a - within;
        best = best.min(level.max(if gap <= INPUT_TOL { 0.0 } else { gap }));
    }
    best
}

/// `min_t max{t, 1 − max_π π({d ≤ t})}` with its witnesses.
pub fn prohorov_strassen(mu: &[f64], nu: &[f64], x: &MetricSpace) -> Result<ProhorovCertificate> {
    let n = x.len();
    check_mass(mu, n)?;
    check_mass(nu, n)?;
    let ts = thresholds(x);
    let sets: Vec<PairSet> = ts.iter().map(|&t| sublevel_set(x, t)).collect();
    let best = scan_thresholds(&ts, |k| saturate(max_mass_value(&sets[k], mu, nu)));
    let pairset = sets[best.index].clone();
    let (_, coupling) = max_mass_on_masses(&pairset, mu, nu);
    let threshold = ts[best.index];
    let value = threshold.max(1.0 - saturate(coupling.mass_on(&pairset)));
    Ok(ProhorovCertificate { value, coupling, pairset, threshold })
}

/// Shorthand for `prohorov_strassen(..).value`.
pub fn prohorov(mu: &[f64], nu: &[f64], x: &MetricSpace) -> Result<f64> {
    Ok(prohorov_strassen(mu, nu, x)?.value)
}

/// `dis_Δ π = min_t max{t, 1 − π({d ≤ t})}` for a coupling of two measures on `x`.
pub fn dis_delta_coupling(p: &Coupling, x: &MetricSpace) -> Result<(f64, PairSet)> {
    if p.rows() != x.len() || p.cols() != x.len() {
        return Err(Error::LengthMismatch { what: "coupling on X × X", expected: x.len(), actual: p.rows().max(p.cols()) });
    }
    let ts = thresholds(x);
    let best = scan_thresholds(&ts, |k| saturate(p.mass_on(&sublevel_set(x, ts[k]))));
    let s = sublevel_set(x, ts[best.index]);
    Ok((ts[best.index].max(1.0 - saturate(p.mass_on(&s))), s))
}

/// Masses within rounding of 1 count as full.
pub(crate) fn saturate(m: f64) -> f64 {
    if m >= 1.0 - INPUT_TOL {
        1.0
    } else {
        m
    }
}
