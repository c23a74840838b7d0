//! Ky Fan metric and the `inf_ε max{ε, mass(> ε)}` scan it shares with the
//! Eurandom distortion.

use crate::error::{Error, Result};

/// A real function on the points of a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction(Vec<f64>);

impl RealFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("function values must be finite"));
        }
        Ok(RealFunction(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Mass of `{values > eps}`, summed in index order.
pub fn tail_mass(values: &[f64], weights: &[f64], eps: f64) -> f64 {
    values.iter().zip(weights).filter(|(&v, _)| v > eps).map(|(_, &w)| w).sum()
}

/// `inf_{ε ≥ 0} max{ε, h(ε)}` with `h(ε) = Σ weights[values > ε]`.
///
/// `h` is a right-continuous non-increasing step function that only jumps at the
/// values, so the infimum is attained at `0` or one of the values, and the returned
/// number is also the least `ε` with `h(ε) ≤ ε`.
pub fn min_max_tail(values: &[f64], weights: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), weights.len());
    let mut order: Vec<usize> = (0..values.len()).filter(|&k| weights[k] > 0.0).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    // Walk distinct values from the top, accumulating the tail strictly above each.
    let mut best = f64::INFINITY;
    let mut tail = 0.0;
    let mut k = order.len();
    while k > 0 {
        let v = values[order[k - 1]];
        // tail currently holds mass strictly above v
        best = best.min(v.max(0.0).max(tail));
        while k > 0 && values[order[k - 1]] == v {
            tail += weights[order[k - 1]];
            k -= 1;
        }
    }
    // ε = 0 (covers the case where every value is positive)
    best.min(tail)
}

/// Ky Fan distance `inf{ε ≥ 0 : μ(|f − g| > ε) ≤ ε}`.
pub fn ky_fan(f: &RealFunction, g: &RealFunction, mu: &[f64]) -> Result<f64> {
    if f.len() != mu.len() || g.len() != mu.len() {
        return Err(Error::LengthMismatch { what: "function", expected: mu.len(), actual: f.len().min(g.len()) });
    }
    let diff: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs()).collect();
    Ok(min_max_tail(&diff, mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(v: &[f64]) -> RealFunction {
        RealFunction::new(v.to_vec()).unwrap()
    }

    /// Checks every breakpoint candidate directly; independent of the sorted walk.
    fn scan_oracle(values: &[f64], weights: &[f64]) -> f64 {
        let mut cands: Vec<f64> = vec![0.0];
        cands.extend_from_slice(values);
        for &v in values {
            cands.push(tail_mass(values, weights, v));
        }
        cands.push(tail_mass(values, weights, 0.0));
        cands.into_iter().filter(|&e| e >= 0.0 && tail_mass(values, weights, e) <= e).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn ky_fan_examples() {
        let u = [0.5, 0.5];
        assert_eq!(ky_fan(&rf(&[0.3, 2.0]), &rf(&[0.3, 2.0]), &u).unwrap(), 0.0);
        assert_eq!(ky_fan(&rf(&[0.0, 1.0]), &rf(&[0.0, 0.0]), &u).unwrap(), 0.5);
        assert_eq!(ky_fan(&rf(&[0.0, 0.3]), &rf(&[0.0, 0.0]), &u).unwrap(), 0.3);
    }

    #[test]
    fn plateau_pins_the_minimum() {
        // h = 0.2 on [0.1, 0.9): minimum is the plateau height 0.2
        let values = [0.1, 0.9, 0.0];
        let weights = [0.3, 0.2, 0.5];
        assert_eq!(min_max_tail(&values, &weights), 0.2);
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(ky_fan(&rf(&[0.0]), &rf(&[0.0, 1.0]), &[0.5, 0.5]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn sorted_walk_matches_breakpoint_oracle(
            raw in proptest::collection::vec((0.0f64..2.0, 0.0f64..1.0), 1..9)
        ) {
            let total: f64 = raw.iter().map(|r| r.1).sum();
            proptest::prop_assume!(total > 1e-6);
            let values: Vec<f64> = raw.iter().map(|r| (r.0 * 8.0).round() / 8.0).collect();
            let weights: Vec<f64> = raw.iter().map(|r| r.1 / total).collect();
            let got = min_max_tail(&values, &weights);
            let want = scan_oracle(&values, &weights);
            proptest::prop_assert!((got - want).abs() <= 1e-12, "got {got}, want {want}");
        }

        #[test]
        fn ky_fan_is_a_pseudometric(
            f in proptest::collection::vec(-2.0f64..2.0, 4),
            g in proptest::collection::vec(-2.0f64..2.0, 4),
            h in proptest::collection::vec(-2.0f64..2.0, 4),
            w in proptest::collection::vec(0.01f64..1.0, 4),
        ) {
            let s: f64 = w.iter().sum();
            let mu: Vec<f64> = w.iter().map(|x| x / s).collect();
            let (f, g, h) = (rf(&f), rf(&g), rf(&h));
            let fg = ky_fan(&f, &g, &mu).unwrap();
            proptest::prop_assert_eq!(ky_fan(&f, &f, &mu).unwrap(), 0.0);
            proptest::prop_assert!((fg - ky_fan(&g, &f, &mu).unwrap()).abs() <= 1e-12);
            let fh = ky_fan(&f, &h, &mu).unwrap();
            let gh = ky_fan(&g, &h, &mu).unwrap();
            proptest::prop_assert!(fh <= fg + gh + 1e-12);
        }
    }
}
