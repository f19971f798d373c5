//! Closed convex hull membership and intersection via exact feasibility.

use num_traits::{One, Zero};

use super::lp::{feasible_vertex, LinearSystem};
use super::{check_same_dim, Point, Scalar};
use crate::error::{Error, Result};

/// Whether `q` lies in the closed convex hull of `s`.
pub fn in_convex_hull(q: &Point, s: &[Point]) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty generator set".into()));
    }
    check_same_dim(q.dim(), s)?;
    Ok(in_hull_unchecked(q, s.iter()))
}

pub(crate) fn in_hull_unchecked<'a, I>(q: &Point, s: I) -> bool
where
    I: Iterator<Item = &'a Point> + Clone,
{
    let d = q.dim();
    let mut k = 0usize;
    for p in s.clone() {
        if p == q {
            return true;
        }
        k += 1;
    }
    // bounding box rejection
    for c in 0..d {
        let mut below = false;
        let mut above = false;
        for p in s.clone() {
            if p[c] <= q[c] {
                below = true;
            }
            if p[c] >= q[c] {
                above = true;
            }
        }
        if !(below && above) {
            return false;
        }
    }
    if d == 2 {
        return in_planar_hull(q, s.collect());
    }
    lp_membership(q, s, k)
}

fn lp_membership<'a, I>(q: &Point, s: I, k: usize) -> bool
where
    I: Iterator<Item = &'a Point> + Clone,
{
    let mut sys = LinearSystem::new(k);
    for c in 0..q.dim() {
        sys.push(s.clone().map(|p| p[c].clone()).collect(), q[c].clone());
    }
    sys.push(vec![Scalar::one(); k], Scalar::one());
    feasible_vertex(&sys).is_some()
}

fn cross(o: &Point, a: &Point, b: &Point) -> Scalar {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Monotone-chain hull (counterclockwise, no collinear vertices), then one
/// orientation test per edge.
fn in_planar_hull(q: &Point, mut pts: Vec<&Point>) -> bool {
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return pts[0] == q;
    }
    let mut hull: Vec<&Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let base = hull.len();
        let iter: Box<dyn Iterator<Item = &&Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= base + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= Scalar::zero()
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 {
        // segment: collinear and within the bounding box
        let (a, b) = (hull[0], hull[1]);
        return cross(a, b, q).is_zero()
            && (0..2).all(|c| {
                let (lo, hi) = if a[c] <= b[c] { (&a[c], &b[c]) } else { (&b[c], &a[c]) };
                lo <= &q[c] && &q[c] <= hi
            });
    }
    (0..hull.len()).all(|i| cross(hull[i], hull[(i + 1) % hull.len()], q) >= Scalar::zero())
}

/// Whether the closed convex hulls of `s1` and `s2` intersect.
pub fn hulls_intersect(s1: &[Point], s2: &[Point]) -> Result<bool> {
    Ok(common_point(&[s1, s2])?.is_some())
}

/// A point common to the closed convex hulls of all groups, if one exists.
///
/// The point is a vertex of the feasibility polytope selected by the
/// deterministic simplex pivot order, so repeated calls agree.
pub fn common_point(groups: &[&[Point]]) -> Result<Option<Point>> {
    let Some(first) = groups.first() else {
        return Err(Error::InvalidInput("no groups".into()));
    };
    let Some(p0) = first.first() else {
        return Err(Error::InvalidInput("empty generator set".into()));
    };
    let d = p0.dim();
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidInput("empty generator set".into()));
        }
        check_same_dim(d, g.iter())?;
    }
    if groups.len() == 1 {
        return Ok(Some(p0.clone()));
    }
    let offsets: Vec<usize> = groups
        .iter()
        .scan(0, |acc, g| {
            let o = *acc;
            *acc += g.len();
            Some(o)
        })
        .collect();
    let vars: usize = groups.iter().map(|g| g.len()).sum();
    let mut sys = LinearSystem::new(vars);
    // sum_i lambda^0_i p_i - sum_i lambda^g_i p_i = 0 for every later group g
    for (g, group) in groups.iter().enumerate().skip(1) {
        for c in 0..d {
            let mut row = vec![Scalar::zero(); vars];
            for (i, p) in first.iter().enumerate() {
                row[i] = p[c].clone();
            }
            for (i, p) in group.iter().enumerate() {
                row[offsets[g] + i] = -p[c].clone();
            }
            sys.push(row, Scalar::zero());
        }
    }
    for (g, group) in groups.iter().enumerate() {
        let mut row = vec![Scalar::zero(); vars];
        for i in 0..group.len() {
            row[offsets[g] + i] = Scalar::one();
        }
        sys.push(row, Scalar::one());
    }
    Ok(feasible_vertex(&sys).map(|x| {
        let mut acc = Point::origin(d);
        for (lam, p) in x.iter().zip(first.iter()) {
            if !lam.is_zero() {
                acc = &acc + &p.scale(lam);
            }
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn pts(rows: &[&[i64]]) -> Vec<Point> {
        rows.iter().map(|r| Point::from_ints(r)).collect()
    }

    #[test]
    fn membership_examples() {
        let sq = pts(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let half = Point::new(vec![ratio(1, 2), ratio(1, 2)]);
        assert!(in_convex_hull(&half, &sq).unwrap());
        assert!(!in_convex_hull(&Point::from_ints(&[2, 2]), &sq).unwrap());
        let seg = pts(&[&[1, 0], &[0, 1]]);
        assert!(in_convex_hull(&half, &seg).unwrap());
        assert!(!in_convex_hull(&Point::new(vec![ratio(1, 3), ratio(1, 3)]), &seg).unwrap());
    }

    #[test]
    fn planar_path_matches_lp() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..400 {
            let k = rng.gen_range(1..7);
            let collinear = rng.gen_bool(0.3);
            let gen = |rng: &mut rand_chacha::ChaCha8Rng| {
                let x = rng.gen_range(-3..=3);
                let y = if collinear { 2 * x - 1 } else { rng.gen_range(-3..=3) };
                Point::from_ints(&[x, y])
            };
            let s: Vec<Point> = (0..k).map(|_| gen(&mut rng)).collect();
            let q = if rng.gen_bool(0.5) {
                gen(&mut rng)
            } else {
                Point::new(vec![ratio(rng.gen_range(-7..=7), 2), ratio(rng.gen_range(-7..=7), 2)])
            };
            let fast = in_convex_hull(&q, &s).unwrap();
            let slow = s.contains(&q) || lp_membership(&q, s.iter(), s.len());
            assert_eq!(fast, slow, "q = {q:?}, s = {s:?}");
        }
    }

    #[test]
    fn membership_errors() {
        assert!(in_convex_hull(&Point::from_ints(&[0, 0]), &[]).is_err());
        assert!(matches!(
            in_convex_hull(&Point::from_ints(&[0, 0]), &pts(&[&[0, 0, 0]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let a = pts(&[&[0, 0], &[2, 2]]);
        let b = pts(&[&[2, 0], &[0, 2]]);
        assert!(hulls_intersect(&a, &b).unwrap());
        assert_eq!(
            common_point(&[&a, &b]).unwrap(),
            Some(Point::from_ints(&[1, 1]))
        );
        let c = pts(&[&[0, 0], &[1, 0]]);
        let e = pts(&[&[0, 1], &[1, 1]]);
        assert!(!hulls_intersect(&c, &e).unwrap());
        assert!(hulls_intersect(&c, &c).unwrap());
    }
}
