//! mm-isomorphism and the Lipschitz order, decided by exhaustive search.

use crate::error::{Error, Result};
use crate::space::{MMSpace, TOL};

/// Default cap on `|supp Y|^|supp X|` for [`dominates`].
pub const DEFAULT_MAP_BUDGET: u128 = 10_000_000;

/// Searches for a measure-preserving isometry `supp m_X → supp m_Y`.
///
/// Returns the witness as `(x, y)` pairs over original indices. Distances and
/// masses are compared within [`TOL`]; zero-mass points are ignored.
pub fn mm_isomorphic(x: &MMSpace, y: &MMSpace) -> Option<Vec<(usize, usize)>> {
    let sx = x.support();
    let sy = y.support();
    if sx.len() != sy.len() {
        return None;
    }
    if !same_multiset(sx.iter().map(|&i| x.mass()[i]).collect(), sy.iter().map(|&j| y.mass()[j]).collect()) {
        return None;
    }
    let dx = sx.iter().flat_map(|&a| sx.iter().map(move |&b| x.d(a, b))).collect();
    let dy = sy.iter().flat_map(|&a| sy.iter().map(move |&b| y.d(a, b))).collect();
    if !same_multiset(dx, dy) {
        return None;
    }

    struct Search<'a> {
        x: &'a MMSpace,
        y: &'a MMSpace,
        sx: &'a [usize],
        sy: &'a [usize],
        image: Vec<usize>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn go(&mut self, k: usize) -> bool {
            if k == self.sx.len() {
                return true;
            }
            let a = self.sx[k];
            for c in 0..self.sy.len() {
                if self.used[c] {
                    continue;
                }
                let b = self.sy[c];
                if (self.x.mass()[a] - self.y.mass()[b]).abs() > TOL {
                    continue;
                }
                let ok = (0..k).all(|p| (self.x.d(a, self.sx[p]) - self.y.d(b, self.sy[self.image[p]])).abs() <= TOL);
                if !ok {
                    continue;
                }
                self.used[c] = true;
                self.image.push(c);
                if self.go(k + 1) {
                    return true;
                }
                self.image.pop();
                self.used[c] = false;
            }
            false
        }
    }

    let mut s = Search { x, y, sx: &sx, sy: &sy, image: Vec::new(), used: vec![false; sy.len()] };
    if s.go(0) {
        Some(sx.iter().zip(&s.image).map(|(&a, &c)| (a, sy[c])).collect())
    } else {
        None
    }
}

fn same_multiset(mut a: Vec<f64>, mut b: Vec<f64>) -> bool {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.len() == b.len() && a.iter().zip(&b).all(|(p, q)| (p - q).abs() <= TOL)
}

/// Is `Y ≺ X`? Looks for a map `supp m_X → Y`, 1-Lipschitz on `supp m_X`, pushing
/// `m_X` forward to `m_Y`. Returns the map as `(x, y)` pairs.
///
/// Only points of `supp m_Y` can be images: anything else would receive positive mass.
pub fn dominates(x: &MMSpace, y: &MMSpace, budget: u128) -> Result<Option<Vec<(usize, usize)>>> {
    let mut sx = x.support();
    let sy = y.support();
    let size = (sy.len() as u128).checked_pow(sx.len() as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::InstanceTooLarge { what: "Lipschitz-order map search", size, budget });
    }
    // heavy points first: they hit the mass caps sooner
    sx.sort_by(|&a, &b| x.mass()[b].total_cmp(&x.mass()[a]).then(a.cmp(&b)));

    struct Search<'a> {
        x: &'a MMSpace,
        y: &'a MMSpace,
        sx: &'a [usize],
        sy: &'a [usize],
        image: Vec<usize>,
        load: Vec<f64>,
    }
    impl Search<'_> {
        fn go(&mut self, k: usize) -> bool {
            if k == self.sx.len() {
                return self.sy.iter().enumerate().all(|(c, &b)| (self.load[c] - self.y.mass()[b]).abs() <= TOL);
            }
            let a = self.sx[k];
            let m = self.x.mass()[a];
            for c in 0..self.sy.len() {
                let b = self.sy[c];
                if self.load[c] + m > self.y.mass()[b] + TOL {
                    continue;
                }
                let lipschitz = (0..k).all(|p| self.y.d(b, self.sy[self.image[p]]) <= self.x.d(a, self.sx[p]) + TOL);
                if !lipschitz {
                    continue;
                }
                self.load[c] += m;
                self.image.push(c);
                if self.go(k + 1) {
                    return true;
                }
                self.image.pop();
                self.load[c] -= m;
            }
            false
        }
    }

    let mut s = Search { x, y, sx: &sx, sy: &sy, image: Vec::new(), load: vec![0.0; sy.len()] };
    if !s.go(0) {
        return Ok(None);
    }
    let mut map: Vec<(usize, usize)> = sx.iter().zip(&s.image).map(|(&a, &c)| (a, sy[c])).collect();
    map.sort_unstable();
    Ok(Some(map))
}
