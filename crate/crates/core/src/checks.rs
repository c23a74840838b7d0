//! Seeded invariant suites: oracle equivalences, metric axioms, continuity and
//! composition inequalities, cross-metric bounds and certificate re-evaluation.
//!
//! Every check returns an [`Outcome`] holding the number of cases and a verbatim
//! description of each counterexample.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::boxdist::{box_bruteforce, box_distance, box_is_zero, compose_pairsets, dis_coupling, BoxOptions, Mode};
use crate::distortion::{distortion, distortion_diag, enlargement};
use crate::eurandom::{dis_eur, eurandom_distance, EurOptions};
use crate::generate::{dirichlet, random_coupling, random_graph_metric, random_space, rng, uniform01};
use crate::kyfan::{ky_fan, min_max_tail, RealFunction};
use crate::observable::{candidate_functions, dconc_bounds, dconc_pi_bounds, inner_kf_min, ConcEffort, LowerCertificate, Side};
use crate::order::mm_isomorphic;
use crate::pairset::PairSet;
use crate::prohorov::{dis_delta_coupling, prohorov, prohorov_bruteforce, prohorov_strassen};
use crate::space::{product_space, MMSpace, MetricSpace};
use crate::transport::{glue, product_measure, project13, Coupling};

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shared knobs for the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the per-check default number of random cases.
    pub count: Option<usize>,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, count: None, tolerance: 1e-9 }
    }
}

impl SuiteConfig {
    fn cases(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        rng(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

struct Recorder {
    name: String,
    cases: usize,
    failures: Vec<String>,
    start: Instant,
}

impl Recorder {
    fn new(name: &str) -> Self {
        Recorder { name: name.to_string(), cases: 0, failures: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn error(&mut self, e: impl std::fmt::Display, describe: impl FnOnce() -> String) {
        self.cases += 1;
        self.failures.push(format!("{}: {e}", describe()));
    }

    fn finish(self) -> Outcome {
        Outcome { name: self.name, cases: self.cases, failures: self.failures, elapsed: self.start.elapsed() }
    }
}

/// `{"dist": [...], "mass": [...]}` with shortest round-trip decimals.
pub fn describe_space(x: &MMSpace) -> String {
    let mut s = String::from("{\"dist\": [");
    for i in 0..x.len() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&describe_vec(x.space().row(i)));
    }
    let _ = write!(s, "], \"mass\": {}}}", describe_vec(x.mass()));
    s
}

fn describe_metric(x: &MetricSpace) -> String {
    let rows: Vec<String> = (0..x.len()).map(|i| describe_vec(x.row(i))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn describe_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", parts.join(", "))
}

fn random_metric(r: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    if r.random_bool(0.5) {
        random_space(n, r).expect("n >= 1").space().clone()
    } else {
        random_graph_metric(n, &[0.5, 1.0, 1.5, 2.0], r).expect("n >= 1")
    }
}

/// Dirichlet masses, sometimes uniform, sometimes with zero entries.
fn random_masses(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    match r.random_range(0..4) {
        0 => vec![1.0 / n as f64; n],
        1 if n > 1 => {
            let mut m = dirichlet(n, r);
            let k = r.random_range(0..n);
            m[k] = 0.0;
            let s: f64 = m.iter().sum();
            m.iter().map(|v| v / s).collect()
        }
        _ => dirichlet(n, r),
    }
}

fn random_mm(r: &mut ChaCha8Rng, n: usize) -> MMSpace {
    let x = random_metric(r, n);
    let m = random_masses(r, n);
    MMSpace::new(x, m).expect("normalized")
}

fn random_pairset(r: &mut ChaCha8Rng, n: usize, m: usize) -> PairSet {
    let mut s = PairSet::empty(n, m);
    for i in 0..n {
        for j in 0..m {
            if r.random_bool(0.4) {
                s.insert(i, j).expect("in range");
            }
        }
    }
    if s.is_empty() {
        s.insert(r.random_range(0..n), r.random_range(0..m)).expect("in range");
    }
    s
}

/// A coupling-shaped measure with its own marginals (any probability on `X × Y`).
fn measure_on(data: Vec<f64>, n: usize, m: usize) -> Coupling {
    let rows: Vec<f64> = data.chunks(m).map(|c| c.iter().sum()).collect();
    let cols: Vec<f64> = (0..m).map(|j| (0..n).map(|i| data[i * m + j]).sum()).collect();
    Coupling::from_parts(data, &rows, &cols)
}

/// A random measure and a nearby one (random mixture weight towards another measure).
fn measure_pair(r: &mut ChaCha8Rng, n: usize, m: usize) -> (Coupling, Coupling) {
    let mx = random_masses(r, n);
    let my = random_masses(r, m);
    let p = random_coupling(&mx, &my, 3, r);
    let q = if r.random_bool(0.5) {
        let my2 = random_masses(r, m);
        random_coupling(&mx, &my2, 3, r)
    } else {
        measure_on(dirichlet(n * m, r), n, m)
    };
    let lambda = [0.02, 0.1, 0.3, 1.0][r.random_range(0..4)];
    let data: Vec<f64> = p.data().iter().zip(q.data()).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
    (measure_on(p.data().to_vec(), n, m), measure_on(data, n, m))
}

/// Criterion: `prohorov_strassen = prohorov_bruteforce` on random instances, `n ≤ 8`.
pub fn strassen_equivalence(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("prohorov strassen = bruteforce");
    let mut r = cfg.rng(1);
    for _ in 0..cfg.cases(200) {
        let n = r.random_range(1..=8);
        let x = random_metric(&mut r, n);
        let mu = random_masses(&mut r, n);
        let nu = random_masses(&mut r, n);
        let show = || format!("X = {}, mu = {}, nu = {}", describe_metric(&x), describe_vec(&mu), describe_vec(&nu));
        match (prohorov_bruteforce(&mu, &nu, &x), prohorov_strassen(&mu, &nu, &x)) {
            (Ok(a), Ok(b)) => {
                let witnessed = (b.evaluate() - b.value).abs() <= cfg.tolerance
                    && distortion_diag(&b.pairset, &x).is_ok_and(|d| d <= b.threshold + cfg.tolerance);
                rec.check((a - b.value).abs() <= cfg.tolerance && witnessed, || {
                    format!("{}: bruteforce {a}, strassen {}", show(), b.value)
                });
            }
            (Err(e), _) | (_, Err(e)) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Criterion: exact box distance equals the subset oracle for `n·m ≤ 9`.
pub fn box_oracle(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("box exact = bruteforce");
    let mut r = cfg.rng(2);
    for _ in 0..cfg.cases(100) {
        let n = r.random_range(1..=3);
        let m = r.random_range(1..=9 / n);
        let (x, y) = (random_mm(&mut r, n), random_mm(&mut r, m));
        let show = || format!("X = {}, Y = {}", describe_space(&x), describe_space(&y));
        match (box_bruteforce(&x, &y), box_distance(&x, &y, BoxOptions::exact())) {
            (Ok(a), Ok(c)) => {
                let verified = c.verify(&x, &y, cfg.tolerance).is_ok();
                rec.check((a - c.value).abs() <= cfg.tolerance && verified, || format!("{}: bruteforce {a}, exact {}", show(), c.value));
            }
            (Err(e), _) | (_, Err(e)) => rec.error(e, show),
        }
    }
    rec.finish()
}

fn x2(m: [f64; 2]) -> MMSpace {
    MMSpace::new(MetricSpace::two_point(1.0).expect("positive"), m.to_vec()).expect("normalized")
}

/// Criterion: the small hand-derived values.
pub fn hand_values(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("hand-derived values");
    let (u, skew, p) = (x2([0.5, 0.5]), x2([0.75, 0.25]), MMSpace::point());
    let tol = cfg.tolerance;
    let cases: Vec<(&str, crate::error::Result<f64>, f64)> = vec![
        ("box(X2, P1)", box_distance(&u, &p, BoxOptions::exact()).map(|c| c.value), 0.5),
        ("box(X2(3/4,1/4), P1)", box_distance(&skew, &p, BoxOptions::exact()).map(|c| c.value), 0.25),
        ("eur(X2, P1)", eurandom_distance(&u, &p, &EurOptions::default()).map(|c| c.upper), 0.5),
        ("eur(X2(3/4,1/4), P1)", eurandom_distance(&skew, &p, &EurOptions::default()).map(|c| c.upper), 0.375),
        ("dconc(X2, P1) lower", dconc_bounds(&u, &p, &ConcEffort::default()).map(|b| b.lower), 0.5),
        ("dconc(X2, P1) upper", dconc_bounds(&u, &p, &ConcEffort::default()).map(|b| b.upper), 0.5),
    ];
    for (name, got, want) in cases {
        match got {
            Ok(v) => rec.check((v - want).abs() <= tol, || format!("{name} = {v}, expected {want}")),
            Err(e) => rec.error(e, || name.to_string()),
        }
    }
    match eurandom_distance(&skew, &p, &EurOptions::default()) {
        Ok(c) => rec.check(c.is_exact(), || "eur(X2(3/4,1/4), P1) is not certified exact".into()),
        Err(e) => rec.error(e, || "eur(X2(3/4,1/4), P1)".into()),
    }
    rec.finish()
}

/// Criterion: box symmetry and triangle inequality on random triples, `n ≤ 4`.
pub fn box_axioms(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("box symmetry and triangle inequality");
    let mut r = cfg.rng(3);
    for _ in 0..cfg.cases(100) {
        let sizes: Vec<usize> = (0..3).map(|_| r.random_range(1..=4)).collect();
        let sp: Vec<MMSpace> = sizes.iter().map(|&n| random_mm(&mut r, n)).collect();
        let show = || sp.iter().map(describe_space).collect::<Vec<_>>().join(", ");
        let b = |a: &MMSpace, c: &MMSpace| box_distance(a, c, BoxOptions::exact()).map(|c| c.value);
        match (b(&sp[0], &sp[1]), b(&sp[1], &sp[0]), b(&sp[1], &sp[2]), b(&sp[0], &sp[2])) {
            (Ok(xy), Ok(yx), Ok(yz), Ok(xz)) => {
                rec.check(xy == yx, || format!("{}: box(X,Y) = {xy}, box(Y,X) = {yx}", show()));
                rec.check(xz <= xy + yz + cfg.tolerance, || format!("{}: box(X,Z) = {xz} > {xy} + {yz}", show()));
            }
            (Err(e), ..) | (_, Err(e), ..) | (_, _, Err(e), _) | (.., Err(e)) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Criterion: Prohorov symmetry, triangle inequality and identity of indiscernibles.
pub fn prohorov_axioms(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("prohorov metric axioms");
    let mut r = cfg.rng(4);
    for _ in 0..cfg.cases(100) {
        let n = r.random_range(1..=6);
        let x = random_metric(&mut r, n);
        let ms: Vec<Vec<f64>> = (0..3).map(|_| random_masses(&mut r, n)).collect();
        let show =
            || format!("X = {}, measures = {}", describe_metric(&x), ms.iter().map(|m| describe_vec(m)).collect::<Vec<_>>().join(", "));
        let d = |a: &[f64], b: &[f64]| prohorov(a, b, &x);
        match (d(&ms[0], &ms[1]), d(&ms[1], &ms[0]), d(&ms[1], &ms[2]), d(&ms[0], &ms[2]), d(&ms[0], &ms[0])) {
            (Ok(ab), Ok(ba), Ok(bc), Ok(ac), Ok(aa)) => {
                rec.check((ab - ba).abs() <= cfg.tolerance, || format!("{}: d(a,b) = {ab}, d(b,a) = {ba}", show()));
                rec.check(ac <= ab + bc + cfg.tolerance, || format!("{}: d(a,c) = {ac} > {ab} + {bc}", show()));
                rec.check(aa == 0.0, || format!("{}: d(a,a) = {aa}", show()));
                let differ = ms[0].iter().zip(&ms[1]).any(|(p, q)| (p - q).abs() > cfg.tolerance);
                rec.check(!differ || ab > 0.0, || format!("{}: distinct measures at distance 0", show()));
                rec.check(ab <= 1.0 + cfg.tolerance, || format!("{}: d(a,b) = {ab} > 1", show()));
            }
            (Err(e), ..) | (_, Err(e), ..) | (_, _, Err(e), ..) | (_, _, _, Err(e), _) | (.., Err(e)) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Every uniform-mass space on at most 3 points with distances in `{1, 2, 3}`.
pub fn exhaustive_corpus() -> Vec<MMSpace> {
    let mut out = vec![MMSpace::point()];
    for d in [1.0, 2.0, 3.0] {
        out.push(MMSpace::uniform(MetricSpace::two_point(d).expect("positive")));
    }
    for a in [1.0, 2.0, 3.0] {
        for b in [1.0, 2.0, 3.0] {
            for c in [1.0, 2.0, 3.0] {
                if let Ok(s) = MetricSpace::new(vec![vec![0.0, a, b], vec![a, 0.0, c], vec![b, c, 0.0]]) {
                    out.push(MMSpace::uniform(s));
                }
            }
        }
    }
    out
}

/// Criterion: `box = 0 ⇔ mm-isomorphic` on the exhaustive corpus.
pub fn box_nondegeneracy(_cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("box nondegeneracy on exhaustive corpus");
    let corpus = exhaustive_corpus();
    for (a, x) in corpus.iter().enumerate() {
        for y in &corpus[a..] {
            let iso = mm_isomorphic(x, y).is_some();
            match box_is_zero(x, y) {
                Ok(z) => {
                    rec.check(z == iso, || format!("X = {}, Y = {}: box zero {z}, isomorphic {iso}", describe_space(x), describe_space(y)))
                }
                Err(e) => rec.error(e, || format!("X = {}, Y = {}", describe_space(x), describe_space(y))),
            }
        }
    }
    rec.finish()
}

/// `dis_Δ U_t(S) ≤ dis_Δ S + t` on `X × X` with the l¹ metric.
pub fn lemma_diagonal_enlargement(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("dis_D U_t(S) <= dis_D S + t");
    let mut r = cfg.rng(5);
    for _ in 0..cfg.cases(200) {
        let n = r.random_range(1..=5);
        let x = random_metric(&mut r, n);
        let s = random_pairset(&mut r, n, n);
        let t = uniform01(&mut r) * 1.5 * x.diameter().max(1.0);
        let show = || format!("X = {}, S = {s}, t = {t:?}", describe_metric(&x));
        match enlargement(&s, t, &x, &x).and_then(|u| Ok((distortion_diag(&u, &x)?, distortion_diag(&s, &x)?))) {
            Ok((lhs, ds)) => rec.check(lhs <= ds + t + cfg.tolerance, || format!("{}: {lhs} > {ds} + t", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `dis U_t(S) ≤ dis S + 2t` on `X × Y` with the l¹ metric, `t > 0`.
pub fn lemma_enlargement(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("dis U_t(S) <= dis S + 2t");
    let mut r = cfg.rng(6);
    for _ in 0..cfg.cases(200) {
        let (n, m) = (r.random_range(1..=4), r.random_range(1..=4));
        let (x, y) = (random_metric(&mut r, n), random_metric(&mut r, m));
        let s = random_pairset(&mut r, n, m);
        let t = (1.0 - uniform01(&mut r)) * x.diameter().max(y.diameter()).max(1.0);
        let show = || format!("X = {}, Y = {}, S = {s}, t = {t:?}", describe_metric(&x), describe_metric(&y));
        let res = enlargement(&s, t, &x, &y)
            .and_then(|u| Ok((crate::distortion::distortion_of(&u, &x, &y)?, crate::distortion::distortion_of(&s, &x, &y)?)));
        match res {
            Ok((lhs, ds)) => rec.check(lhs.le_within(ds + 2.0 * t, cfg.tolerance), || format!("{}: {lhs} > {ds} + 2t", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `|dis_Δ π − dis_Δ π'| ≤ d_P(π, π')` for measures on `X × X`.
pub fn lemma_diagonal_continuity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("|dis_D p - dis_D p'| <= d_P(p, p')");
    let mut r = cfg.rng(7);
    for _ in 0..cfg.cases(200) {
        let n = r.random_range(1..=4);
        let x = random_metric(&mut r, n);
        let (p, q) = measure_pair(&mut r, n, n);
        let xx = product_space(&x, &x);
        let show = || format!("X = {}, p = {}, p' = {}", describe_metric(&x), describe_vec(p.data()), describe_vec(q.data()));
        let res = (|| {
            Ok::<_, crate::error::Error>((dis_delta_coupling(&p, &x)?.0, dis_delta_coupling(&q, &x)?.0, prohorov(p.data(), q.data(), &xx)?))
        })();
        match res {
            Ok((a, b, d)) => rec.check((a - b).abs() <= d + cfg.tolerance, || format!("{}: |{a} - {b}| > {d}", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `|dis π − dis π'| ≤ 2 d_P(π, π')` for measures on `X × Y`.
pub fn lemma_distortion_continuity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("|dis p - dis p'| <= 2 d_P(p, p')");
    let mut r = cfg.rng(8);
    for _ in 0..cfg.cases(200) {
        let (n, m) = (r.random_range(1..=3), r.random_range(1..=3));
        let (x, y) = (random_metric(&mut r, n), random_metric(&mut r, m));
        let (p, q) = measure_pair(&mut r, n, m);
        let mx = MMSpace::new(x.clone(), p.row_sums());
        let my = MMSpace::new(y.clone(), p.col_sums());
        let show = || {
            format!(
                "X = {}, Y = {}, p = {}, p' = {}",
                describe_metric(&x),
                describe_metric(&y),
                describe_vec(p.data()),
                describe_vec(q.data())
            )
        };
        let xy = product_space(&x, &y);
        let res = (|| {
            let (ux, uy) = (mx?, my?);
            let a = dis_coupling(&p, &ux, &uy, Mode::Exact)?.0;
            let b = dis_coupling(&q, &ux, &uy, Mode::Exact)?.0;
            Ok::<_, crate::error::Error>((a, b, prohorov(p.data(), q.data(), &xy)?))
        })();
        match res {
            Ok((a, b, d)) => rec.check((a - b).abs() <= 2.0 * d + cfg.tolerance, || format!("{}: |{a} - {b}| > 2 * {d}", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `|d_KF^μ(f, g) − d_KF^ν(f, g)| ≤ 2 d_P(μ, ν)` for 1-Lipschitz `f, g`.
pub fn lemma_ky_fan_continuity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("|d_KF^mu(f,g) - d_KF^nu(f,g)| <= 2 d_P(mu, nu)");
    let mut r = cfg.rng(9);
    for _ in 0..cfg.cases(200) {
        let n = r.random_range(1..=6);
        let x = random_metric(&mut r, n);
        let fs = candidate_functions(&x, 8, r.random());
        let f = &fs[r.random_range(0..fs.len())];
        let g = &fs[r.random_range(0..fs.len())];
        let mu = random_masses(&mut r, n);
        let lambda = [0.05, 0.3, 1.0][r.random_range(0..3)];
        let other = random_masses(&mut r, n);
        let nu: Vec<f64> = mu.iter().zip(&other).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
        let show = || {
            format!(
                "X = {}, f = {}, g = {}, mu = {}, nu = {}",
                describe_metric(&x),
                describe_vec(f),
                describe_vec(g),
                describe_vec(&mu),
                describe_vec(&nu)
            )
        };
        let res = (|| {
            let (ff, gg) = (RealFunction::new(f.clone())?, RealFunction::new(g.clone())?);
            Ok::<_, crate::error::Error>((ky_fan(&ff, &gg, &mu)?, ky_fan(&ff, &gg, &nu)?, prohorov(&mu, &nu, &x)?))
        })();
        match res {
            Ok((a, b, d)) => rec.check((a - b).abs() <= 2.0 * d + cfg.tolerance, || format!("{}: |{a} - {b}| > 2 * {d}", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `|d_conc^π − d_conc^π'| ≤ 2 d_P(π, π')`, checked on certified brackets:
/// `lower(π) ≤ upper(π') + 2 d_P` in both directions.
pub fn lemma_observable_continuity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("|dconc_p - dconc_p'| <= 2 d_P(p, p')");
    let mut r = cfg.rng(15);
    let effort = ConcEffort::default();
    for _ in 0..cfg.cases(200) {
        let (n, m) = (r.random_range(1..=3), r.random_range(1..=3));
        let (x, y) = (random_metric(&mut r, n), random_metric(&mut r, m));
        let (p, q) = measure_pair(&mut r, n, m);
        let show = || {
            format!(
                "X = {}, Y = {}, p = {}, p' = {}",
                describe_metric(&x),
                describe_metric(&y),
                describe_vec(p.data()),
                describe_vec(q.data())
            )
        };
        let xy = product_space(&x, &y);
        let res = (|| {
            let ux = MMSpace::new(x.clone(), p.row_sums())?;
            let uy = MMSpace::new(y.clone(), p.col_sums())?;
            let a = dconc_pi_bounds(&p, &ux, &uy, &effort)?;
            let b = dconc_pi_bounds(&q, &ux, &uy, &effort)?;
            Ok::<_, crate::error::Error>((a, b, prohorov(p.data(), q.data(), &xy)?))
        })();
        match res {
            Ok((a, b, d)) => {
                let ok = a.lower <= b.upper + 2.0 * d + cfg.tolerance && b.lower <= a.upper + 2.0 * d + cfg.tolerance;
                rec.check(ok, || format!("{}: [{}, {}] vs [{}, {}], d_P = {d}", show(), a.lower, a.upper, b.lower, b.upper));
            }
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// `dis_Eur μ` for a measure on `(X × Y)²` indexed like [`product_measure`].
fn dis_eur_measure(mu: &[f64], x: &MetricSpace, y: &MetricSpace) -> f64 {
    let (n, m) = (x.len(), y.len());
    let nm = n * m;
    let values: Vec<f64> = (0..nm * nm)
        .map(|k| {
            let (a, b) = (k / nm, k % nm);
            (x.d(a / m, b / m) - y.d(a % m, b % m)).abs()
        })
        .collect();
    min_max_tail(&values, mu)
}

/// `|dis_Eur(p⊗p) − dis_Eur(p'⊗p')| ≤ d_P(p⊗p, p'⊗p')` on the l¹ product `(X × Y)²`.
pub fn lemma_eurandom_continuity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("|dis_Eur(pp) - dis_Eur(p'p')| <= d_P(pp, p'p')");
    let mut r = cfg.rng(10);
    for _ in 0..cfg.cases(200) {
        let (n, m) = (r.random_range(1..=3), r.random_range(1..=3));
        let (x, y) = (random_metric(&mut r, n), random_metric(&mut r, m));
        let (p, q) = measure_pair(&mut r, n, m);
        let (pp, qq) = (product_measure(&p), product_measure(&q));
        let xy = product_space(&x, &y);
        let big = product_space(&xy, &xy);
        let show = || {
            format!(
                "X = {}, Y = {}, p = {}, p' = {}",
                describe_metric(&x),
                describe_metric(&y),
                describe_vec(p.data()),
                describe_vec(q.data())
            )
        };
        let (a, b) = (dis_eur_measure(&pp, &x, &y), dis_eur_measure(&qq, &x, &y));
        match prohorov(&pp, &qq, &big) {
            Ok(d) => rec.check((a - b).abs() <= d + cfg.tolerance, || format!("{}: |{a} - {b}| > {d}", show())),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Random spaces on at most 3 points (uniform or Dirichlet masses).
fn small_pair(r: &mut ChaCha8Rng) -> (MMSpace, MMSpace) {
    let (n, m) = (r.random_range(1..=3), r.random_range(1..=3));
    (random_mm(r, n), random_mm(r, m))
}

/// `dis_eur(π_box) ≤ 2 □` and `dconc upper ≤ □` on exact instances, `n ≤ 3`.
pub fn cross_metric(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("dis_eur(pi_box) <= 2 box and dconc <= box");
    let mut r = cfg.rng(11);
    for _ in 0..cfg.cases(50) {
        let (x, y) = small_pair(&mut r);
        let show = || format!("X = {}, Y = {}", describe_space(&x), describe_space(&y));
        let res = (|| {
            let b = box_distance(&x, &y, BoxOptions::exact())?;
            let e = dis_eur(&b.coupling, &x, &y)?.0;
            let d = eurandom_distance(&x, &y, &EurOptions::default())?.upper;
            let c = dconc_bounds(&x, &y, &ConcEffort::default())?;
            Ok::<_, crate::error::Error>((b.value, e, d, c))
        })();
        match res {
            Ok((b, e, d, c)) => {
                rec.check(e <= 2.0 * b + cfg.tolerance, || format!("{}: dis_eur(pi_box) = {e} > 2 * {b}", show()));
                rec.check(d <= 2.0 * b + cfg.tolerance, || format!("{}: d_Eur = {d} > 2 * {b}", show()));
                rec.check(c.upper <= b + cfg.tolerance, || format!("{}: dconc upper {} > box {b}", show(), c.upper));
                rec.check(c.lower <= c.upper + cfg.tolerance, || format!("{}: dconc bracket [{}, {}]", show(), c.lower, c.upper));
            }
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Composition inequalities from gluing two couplings.
pub fn gluing(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("gluing: dis(T o S) and glued mass");
    let mut r = cfg.rng(12);
    for _ in 0..cfg.cases(100) {
        let sizes: Vec<usize> = (0..3).map(|_| r.random_range(1..=4)).collect();
        let sp: Vec<MMSpace> = sizes.iter().map(|&n| random_mm(&mut r, n)).collect();
        let pxy = random_coupling(sp[0].mass(), sp[1].mass(), 3, &mut r);
        let pyz = random_coupling(sp[1].mass(), sp[2].mass(), 3, &mut r);
        let s = random_pairset(&mut r, sizes[0], sizes[1]);
        let mut t = random_pairset(&mut r, sizes[1], sizes[2]);
        let (_, j) = s.iter().next().expect("nonempty");
        if !(0..sizes[2]).any(|k| t.contains(j, k)) {
            t.insert(j, r.random_range(0..sizes[2])).expect("in range");
        }
        let show = || format!("spaces = {}, S = {s}, T = {t}", sp.iter().map(describe_space).collect::<Vec<_>>().join(", "));
        let res = (|| {
            let ts = compose_pairsets(&s, &t)?;
            let pxz = project13(&glue(&pxy, &pyz)?);
            let d_ts = distortion(&ts, &sp[0], &sp[2])?;
            let rhs = distortion(&s, &sp[0], &sp[1])? + distortion(&t, &sp[1], &sp[2])?;
            Ok::<_, crate::error::Error>((d_ts, rhs, pxz.mass_on(&ts), pxy.mass_on(&s) + pyz.mass_on(&t) - 1.0, pxz))
        })();
        match res {
            Ok((d_ts, rhs, lhs_mass, rhs_mass, pxz)) => {
                rec.check(d_ts.le_within(rhs, cfg.tolerance), || format!("{}: dis(T o S) = {d_ts} > {rhs}", show()));
                rec.check(lhs_mass >= rhs_mass - cfg.tolerance, || format!("{}: pi_XZ(T o S) = {lhs_mass} < {rhs_mass}", show()));
                let feasible = Coupling::new(pxz.data().to_vec(), sp[0].mass(), sp[2].mass()).is_ok();
                rec.check(feasible, || format!("{}: glued projection is not a coupling", show()));
            }
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Re-evaluates the certificates of all four distances on random instances.
pub fn certificates(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("certificate re-evaluation");
    let mut r = cfg.rng(13);
    for _ in 0..cfg.cases(30) {
        let (x, y) = small_pair(&mut r);
        certify_pair(&mut rec, &x, &y, cfg.tolerance);
        let n = r.random_range(1..=5);
        let z = random_metric(&mut r, n);
        let (mu, nu) = (random_masses(&mut r, n), random_masses(&mut r, n));
        let show = || format!("X = {}, mu = {}, nu = {}", describe_metric(&z), describe_vec(&mu), describe_vec(&nu));
        match prohorov_strassen(&mu, &nu, &z) {
            Ok(c) => rec.check((c.evaluate() - c.value).abs() <= cfg.tolerance, || {
                format!("{}: prohorov certificate {} vs {}", show(), c.evaluate(), c.value)
            }),
            Err(e) => rec.error(e, show),
        }
    }
    rec.finish()
}

/// Runs box / Eurandom / observable on one pair and re-checks every certificate.
pub fn certify_pair_outcome(x: &MMSpace, y: &MMSpace, tolerance: f64) -> Vec<String> {
    let mut rec = Recorder::new("");
    certify_pair(&mut rec, x, y, tolerance);
    rec.failures
}

fn certify_pair(rec: &mut Recorder, x: &MMSpace, y: &MMSpace, tol: f64) {
    let show = || format!("X = {}, Y = {}", describe_space(x), describe_space(y));
    match box_distance(x, y, BoxOptions::default()) {
        Ok(c) => {
            let v = c.verify(x, y, tol);
            rec.check(v.is_ok(), || format!("{}: box certificate {v:?}", show()));
        }
        Err(e) => rec.error(e, show),
    }
    match eurandom_distance(x, y, &EurOptions::default()) {
        Ok(c) => {
            let again = dis_eur(&c.coupling, x, y).map(|v| v.0).unwrap_or(f64::NAN);
            rec.check((again - c.upper).abs() <= tol && (c.epsilon - c.upper).abs() <= tol, || {
                format!("{}: eurandom certificate {again} vs {}", show(), c.upper)
            });
        }
        Err(e) => rec.error(e, show),
    }
    match dconc_bounds(x, y, &ConcEffort::default()) {
        Ok(b) => {
            let again = dconc_pi_bounds(&b.coupling, x, y, &ConcEffort::default());
            match again {
                Ok(a) => rec.check((a.upper - b.upper).abs() <= tol, || format!("{}: dconc upper {} vs {}", show(), a.upper, b.upper)),
                Err(e) => rec.error(e, show),
            }
            if let (Some(f), Some(side), LowerCertificate::UniqueCoupling | LowerCertificate::PerCoupling) =
                (&b.witness_f, b.witness_side, b.certificate)
            {
                let v = match side {
                    Side::X => inner_kf_min(f.values(), &b.coupling, y.space()),
                    Side::Y => inner_kf_min(f.values(), &b.coupling.transpose(), x.space()),
                };
                let v = v.map(|v| v.value).unwrap_or(f64::NAN);
                rec.check((v - b.lower).abs() <= tol, || format!("{}: dconc witness gives {v}, lower {}", show(), b.lower));
            }
        }
        Err(e) => rec.error(e, show),
    }
}

/// The `axioms` suite.
pub fn axioms_suite(cfg: &SuiteConfig) -> Vec<Outcome> {
    vec![random_space_validity(cfg), box_axioms(cfg), prohorov_axioms(cfg), box_nondegeneracy(cfg)]
}

/// The `lemmas` suite.
pub fn lemmas_suite(cfg: &SuiteConfig) -> Vec<Outcome> {
    vec![
        lemma_diagonal_enlargement(cfg),
        lemma_enlargement(cfg),
        lemma_diagonal_continuity(cfg),
        lemma_distortion_continuity(cfg),
        lemma_ky_fan_continuity(cfg),
        lemma_observable_continuity(cfg),
        lemma_eurandom_continuity(cfg),
        gluing(cfg),
    ]
}

/// Oracle equivalences, hand values, cross-metric bounds and certificates.
pub fn oracles_suite(cfg: &SuiteConfig) -> Vec<Outcome> {
    vec![strassen_equivalence(cfg), box_oracle(cfg), hand_values(cfg), cross_metric(cfg), certificates(cfg)]
}

/// Generated spaces pass validation when rebuilt from their matrices.
pub fn random_space_validity(cfg: &SuiteConfig) -> Outcome {
    let mut rec = Recorder::new("generated spaces satisfy the metric axioms");
    let mut r = cfg.rng(14);
    for _ in 0..cfg.cases(50) {
        let n = r.random_range(1..=4);
        let x = random_mm(&mut r, n);
        let rebuilt = MetricSpace::new(x.space().rows()).and_then(|s| MMSpace::new(s, x.mass().to_vec()));
        rec.check(rebuilt.is_ok(), || format!("{}: {:?}", describe_space(&x), rebuilt.err()));
    }
    rec.finish()
}
