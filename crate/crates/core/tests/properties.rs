use mmdist::boxdist::{box_distance, dis_coupling, BoxOptions, Mode};
use mmdist::eurandom::{dis_eur, eurandom_distance, EurOptions};
use mmdist::generate::{dirichlet, random_coupling, random_graph_metric, random_space, rng};
use mmdist::observable::{dconc_bounds, dconc_pi_bounds, ConcEffort, LowerCertificate};
use mmdist::pairset::PairSet;
use mmdist::prohorov::{prohorov, prohorov_bruteforce};
use mmdist::space::MMSpace;
use mmdist::transport::{glue, max_mass_on, Coupling};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn space(r: &mut ChaCha8Rng, n: usize) -> MMSpace {
    if r.random_bool(0.5) {
        random_space(n, r).unwrap()
    } else {
        let s = random_graph_metric(n, &[1.0, 2.0], r).unwrap();
        MMSpace::new(s, dirichlet(n, r)).unwrap()
    }
}

fn pair(seed: u64, max: usize) -> (ChaCha8Rng, MMSpace, MMSpace) {
    let mut r = rng(seed);
    let (n, m) = (r.random_range(1..=max), r.random_range(1..=max));
    let (x, y) = (space(&mut r, n), space(&mut r, m));
    (r, x, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prohorov_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=7);
        let x = space(&mut r, n);
        let nu = dirichlet(n, &mut r);
        let a = prohorov(x.mass(), &nu, x.space()).unwrap();
        let b = prohorov_bruteforce(x.mass(), &nu, x.space()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn box_below_every_feasible_pair(seed in any::<u64>()) {
        let (mut r, x, y) = pair(seed, 3);
        let b = box_distance(&x, &y, BoxOptions::exact()).unwrap();
        let p = random_coupling(x.mass(), y.mass(), 3, &mut r);
        let (dis, _) = dis_coupling(&p, &x, &y, Mode::Exact).unwrap();
        prop_assert!(b.value <= dis + 1e-9);
        let h = box_distance(&x, &y, BoxOptions::heuristic()).unwrap();
        prop_assert!(b.value <= h.value + 1e-9);
        prop_assert!(b.value <= 1.0 + 1e-12);
    }

    #[test]
    fn max_mass_monotone(seed in any::<u64>()) {
        let (mut r, x, y) = pair(seed, 4);
        let mut s = PairSet::empty(x.len(), y.len());
        let mut last = 0.0;
        for _ in 0..x.len() * y.len() {
            s.insert(r.random_range(0..x.len()), r.random_range(0..y.len())).unwrap();
            let (v, c) = max_mass_on(&s, &x, &y).unwrap();
            prop_assert!(v + 1e-12 >= last);
            prop_assert!(c.check_marginals(1e-9).is_ok());
            prop_assert!((c.mass_on(&s) - v).abs() <= 1e-9);
            last = v;
        }
    }

    #[test]
    fn glue_marginals(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sizes: Vec<usize> = (0..3).map(|_| r.random_range(1..=4)).collect();
        let ms: Vec<Vec<f64>> = sizes.iter().map(|&n| dirichlet(n, &mut r)).collect();
        let a = random_coupling(&ms[0], &ms[1], 2, &mut r);
        let b = random_coupling(&ms[1], &ms[2], 2, &mut r);
        let t = glue(&a, &b).unwrap();
        for (u, v) in t.marginal12().iter().zip(a.data()) {
            prop_assert!((u - v).abs() <= 1e-9);
        }
        for (u, v) in t.marginal23().iter().zip(b.data()) {
            prop_assert!((u - v).abs() <= 1e-9);
        }
    }

    #[test]
    fn eurandom_tv_continuity(seed in any::<u64>()) {
        let (mut r, x, y) = pair(seed, 3);
        let p = random_coupling(x.mass(), y.mass(), 3, &mut r);
        let q = random_coupling(x.mass(), y.mass(), 3, &mut r);
        let lambda = r.random_range(0.0..0.2);
        let data: Vec<f64> = p.data().iter().zip(q.data()).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
        let pq = Coupling::new(data, x.mass(), y.mass()).unwrap();
        let delta = p.tv_distance(&pq);
        let (a, b) = (dis_eur(&p, &x, &y).unwrap().0, dis_eur(&pq, &x, &y).unwrap().0);
        prop_assert!((a - b).abs() <= 2.0 * delta + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eurandom_lower_is_sound(seed in any::<u64>()) {
        let (mut r, x, y) = pair(seed, 3);
        let c = eurandom_distance(&x, &y, &EurOptions::default()).unwrap();
        prop_assert_eq!(dis_eur(&c.coupling, &x, &y).unwrap().0, c.upper);
        if let Some(lower) = c.lower() {
            for _ in 0..20 {
                let p = random_coupling(x.mass(), y.mass(), 3, &mut r);
                prop_assert!(lower <= dis_eur(&p, &x, &y).unwrap().0 + 1e-9);
            }
        }
    }

    #[test]
    fn dconc_lower_is_sound(seed in any::<u64>()) {
        let (mut r, x, y) = pair(seed, 2);
        let effort = ConcEffort::default();
        let b = dconc_bounds(&x, &y, &effort).unwrap();
        prop_assert!(b.lower <= b.upper + 1e-9);
        if !matches!(b.certificate, LowerCertificate::Uncertified) {
            for _ in 0..5 {
                let p = random_coupling(x.mass(), y.mass(), 3, &mut r);
                let u = dconc_pi_bounds(&p, &x, &y, &effort).unwrap();
                prop_assert!(b.lower <= u.upper + 1e-9);
            }
        }
    }
}
