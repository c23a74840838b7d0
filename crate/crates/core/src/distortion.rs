//! Distortion functionals on pair sets and open neighborhoods.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::pairset::PairSet;
use crate::space::{MMSpace, MetricSpace};

/// A nonnegative real or `+∞`. The distortion of the empty set is `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }

    /// `self <= other + tol`, saturating at infinity.
    pub fn le_within(self, other: ExtendedReal, tol: f64) -> bool {
        match (self, other) {
            (_, ExtendedReal::Infinite) => true,
            (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => false,
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a <= b + tol,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
            (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Some(Ordering::Less),
            (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => Some(Ordering::Greater),
            (ExtendedReal::Infinite, ExtendedReal::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::Infinite,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: f64) -> ExtendedReal {
        self + ExtendedReal::Finite(rhs)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinite => write!(f, "inf"),
        }
    }
}

/// `max |d_X(i,i') - d_Y(j,j')|` over pairs of members of `s`; infinite for the empty set.
pub fn distortion(s: &PairSet, x: &MMSpace, y: &MMSpace) -> Result<ExtendedReal> {
    distortion_of(s, x.space(), y.space())
}

pub fn distortion_of(s: &PairSet, x: &MetricSpace, y: &MetricSpace) -> Result<ExtendedReal> {
    s.check_shape(x.len(), y.len())?;
    if s.is_empty() {
        return Ok(ExtendedReal::Infinite);
    }
    let pairs: Vec<(usize, usize)> = s.iter().collect();
    let mut worst = 0.0f64;
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            worst = worst.max((x.d(i, i2) - y.d(j, j2)).abs());
        }
    }
    Ok(ExtendedReal::Finite(worst))
}

/// `max d_X(i, j)` over `(i, j)` in `s`; zero for the empty set.
pub fn distortion_diag(s: &PairSet, x: &MetricSpace) -> Result<f64> {
    s.check_shape(x.len(), x.len())?;
    Ok(s.iter().map(|(i, j)| x.d(i, j)).fold(0.0, f64::max))
}

/// Open `t`-neighborhood of `s` in the l¹ product `X × Y`:
/// pairs at distance strictly less than `t` from some member of `s`.
pub fn enlargement(s: &PairSet, t: f64, x: &MetricSpace, y: &MetricSpace) -> Result<PairSet> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument("enlargement radius must be nonnegative"));
    }
    s.check_shape(x.len(), y.len())?;
    let mut out = PairSet::empty(x.len(), y.len());
    for i in 0..x.len() {
        for j in 0..y.len() {
            if s.iter().any(|(i2, j2)| x.d(i, i2) + y.d(j, j2) < t) {
                out.insert(i, j)?;
            }
        }
    }
    Ok(out)
}

/// Open `t`-neighborhood of a point set inside one space.
pub fn neighborhood(points: &[usize], t: f64, space: &MetricSpace) -> Vec<usize> {
    (0..space.len()).filter(|&y| points.iter().any(|&a| space.d(y, a) < t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::product_space;

    fn x2() -> MMSpace {
        MMSpace::uniform(MetricSpace::two_point(1.0).unwrap())
    }

    #[test]
    fn distortion_examples() {
        let (x, p) = (x2(), MMSpace::point());
        assert_eq!(distortion(&PairSet::empty(2, 1), &x, &p).unwrap(), ExtendedReal::Infinite);
        let single = PairSet::from_pairs(2, 1, [(1, 0)]).unwrap();
        assert_eq!(distortion(&single, &x, &p).unwrap(), ExtendedReal::Finite(0.0));
        let both = PairSet::from_pairs(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(distortion(&both, &x, &p).unwrap(), ExtendedReal::Finite(1.0));
        let bad = PairSet::from_pairs(3, 1, [(2, 0)]).unwrap();
        assert!(matches!(distortion(&bad, &x, &p), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn diagonal_distortion_examples() {
        let x = MetricSpace::two_point(1.0).unwrap();
        assert_eq!(distortion_diag(&PairSet::empty(2, 2), &x).unwrap(), 0.0);
        assert_eq!(distortion_diag(&PairSet::from_pairs(2, 2, [(0, 0)]).unwrap(), &x).unwrap(), 0.0);
        assert_eq!(distortion_diag(&PairSet::from_pairs(2, 2, [(0, 1)]).unwrap(), &x).unwrap(), 1.0);
    }

    #[test]
    fn enlargement_examples() {
        let x = MetricSpace::two_point(1.0).unwrap();
        assert!(enlargement(&PairSet::empty(2, 2), 5.0, &x, &x).unwrap().is_empty());
        let s = PairSet::from_pairs(2, 2, [(0, 0)]).unwrap();
        assert_eq!(enlargement(&s, 0.0, &x, &x).unwrap(), PairSet::empty(2, 2));
        assert_eq!(enlargement(&s, 1e-6, &x, &x).unwrap(), s);
        // l1 distances from (a,a): (a,b)=1, (b,a)=1, (b,b)=2
        let expect = PairSet::from_pairs(2, 2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(enlargement(&s, 1.5, &x, &x).unwrap(), expect);
    }

    #[test]
    fn enlargement_matches_product_neighborhood() {
        let x = MetricSpace::new(vec![vec![0.0, 1.0, 1.5], vec![1.0, 0.0, 0.7], vec![1.5, 0.7, 0.0]]).unwrap();
        let y = MetricSpace::two_point(0.4).unwrap();
        let prod = product_space(&x, &y);
        let s = PairSet::from_pairs(3, 2, [(0, 1), (2, 0)]).unwrap();
        let flat: Vec<usize> = s.iter().map(|(i, j)| i * 2 + j).collect();
        for t in [0.0, 0.3, 0.5, 0.9, 1.2, 2.0] {
            let via_product: Vec<usize> = neighborhood(&flat, t, &prod);
            let direct: Vec<usize> = enlargement(&s, t, &x, &y).unwrap().iter().map(|(i, j)| i * 2 + j).collect();
            assert_eq!(via_product, direct, "t = {t}");
        }
    }

    #[test]
    fn extended_real_arithmetic_saturates() {
        let inf = ExtendedReal::Infinite;
        assert!((inf + 1.0).is_infinite());
        assert_eq!(ExtendedReal::Finite(1.0) + 2.0, ExtendedReal::Finite(3.0));
        assert!(ExtendedReal::Finite(1e300) < inf);
        assert!(ExtendedReal::Finite(2.0).le_within(inf, 0.0));
        assert!(!inf.le_within(ExtendedReal::Finite(2.0), 0.0));
    }
}
