//! Threshold scans of `min_k max{t_k, 1 − M(t_k)}` for nondecreasing `M`.
//!
//! Since `t ↦ t` increases and `t ↦ 1 − M(t)` does not, the minimum over the
//! ascending grid sits at the first index `k*` where `1 − M ≤ t` or just before
//! it, so a binary search needs `O(log n)` evaluations of `M`.

use std::cell::RefCell;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScanResult {
    pub index: usize,
    pub value: f64,
}

/// `thresholds` ascending; `mass(k)` nondecreasing in `k`. Ties go to the smallest threshold.
pub(crate) fn scan_thresholds<F>(thresholds: &[f64], mass: F) -> ScanResult
where
    F: Fn(usize) -> f64,
{
    assert!(!thresholds.is_empty());
    let memo = RefCell::new(vec![None; thresholds.len()]);
    let gap = |k: usize| -> f64 {
        if let Some(v) = memo.borrow()[k] {
            return v;
        }
        let v = 1.0 - mass(k);
        memo.borrow_mut()[k] = Some(v);
        v
    };
    let n = thresholds.len();
    // first k with gap(k) <= t_k
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if gap(mid) <= thresholds[mid] {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let k = lo;
    let right = (k < n).then(|| ScanResult { index: k, value: thresholds[k] });
    let left = (k > 0).then(|| {
        let g = gap(k - 1);
        // earliest index on the plateau of gap(k - 1)
        let (mut lo, mut hi) = (0, k - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if gap(mid) <= g {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        ScanResult { index: lo, value: gap(lo).max(thresholds[lo]) }
    });
    match (left, right) {
        (Some(l), Some(r)) => {
            if l.value <= r.value {
                l
            } else {
                r
            }
        }
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (None, None) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(thresholds: &[f64], masses: &[f64]) -> ScanResult {
        let mut best = ScanResult { index: 0, value: f64::INFINITY };
        for (k, (&t, &m)) in thresholds.iter().zip(masses).enumerate() {
            let v = t.max(1.0 - m);
            if v < best.value {
                best = ScanResult { index: k, value: v };
            }
        }
        best
    }

    proptest::proptest! {
        #[test]
        fn binary_scan_matches_linear(
            steps in proptest::collection::vec((0u8..4, 0u8..4), 1..12)
        ) {
            let mut t = 0.0;
            let mut m = 0.0;
            let mut ts = Vec::new();
            let mut ms = Vec::new();
            for (k, &(dt, dm)) in steps.iter().enumerate() {
                if k > 0 {
                    t += 0.125 * f64::from(dt + 1);
                }
                m = f64::min(1.0, m + 0.125 * f64::from(dm));
                ts.push(t);
                ms.push(m);
            }
            let got = scan_thresholds(&ts, |k| ms[k]);
            proptest::prop_assert_eq!(got, linear(&ts, &ms));
        }
    }
}
