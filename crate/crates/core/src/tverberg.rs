//! Radon and Tverberg partitions with exact intersection points.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    common_point, first_dependent_tuple, in_convex_hull, Point, PointSequence, Scalar,
};
use crate::homogeneous::is_orientation_homogeneous;

/// A Tverberg partition of an input list together with a common point of
/// the convex hulls of its parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TverbergResult {
    #[serde(serialize_with = "crate::io::serialize_point")]
    pub point: Point,
    /// Parts as increasing index lists, ordered by their smallest element.
    pub partition: Vec<Vec<usize>>,
}

impl TverbergResult {
    /// Re-checks that `point` lies in the hull of every part.
    pub fn verify(&self, q: &[Point]) -> Result<bool> {
        for part in &self.partition {
            let pts: Vec<Point> = part.iter().map(|&i| q[i].clone()).collect();
            if !in_convex_hull(&self.point, &pts)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Tverberg arity for point selection in `R^d`: `s = floor(d/2) + 1` parts
/// and `D = (s-1)(d+1) + 1` points.
pub fn selection_arity(d: usize) -> (usize, usize) {
    let s = d / 2 + 1;
    (s, (s - 1) * (d + 1) + 1)
}

fn canonical(mut parts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);
    parts
}

/// Non-trivial affine dependence of `d+2` points (kernel of the lifted matrix).
fn affine_dependence(q: &[Point]) -> Option<Vec<Scalar>> {
    let d = q[0].dim();
    let cols = q.len();
    // rows: coordinates then the all-ones row
    let mut m: Vec<Vec<Scalar>> = (0..d)
        .map(|r| q.iter().map(|p| p[r].clone()).collect())
        .collect();
    m.push(vec![Scalar::from_integer(1.into()); cols]);
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let pv = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v /= &pv;
        }
        let prow = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (v, pvv) in line.iter_mut().zip(&prow) {
                    *v -= &f * pvv;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut lam = vec![Scalar::zero(); cols];
    lam[free] = Scalar::from_integer(1.into());
    for (r, &pc) in pivots.iter().enumerate() {
        lam[pc] = -m[r][free].clone();
    }
    Some(lam)
}

/// The unique Radon partition and Radon point of `d+2` points in general position.
pub fn radon_point(q: &[Point]) -> Result<TverbergResult> {
    let Some(first) = q.first() else {
        return Err(Error::SizeMismatch("empty input".into()));
    };
    let d = first.dim();
    let seq = PointSequence::new(d, q.to_vec())?;
    if q.len() != d + 2 {
        return Err(Error::SizeMismatch(format!(
            "Radon point needs d+2 = {} points, got {}",
            d + 2,
            q.len()
        )));
    }
    if let Some(t) = first_dependent_tuple(&seq) {
        return Err(Error::GeneralPositionViolation(format!(
            "affinely dependent tuple {t:?}"
        )));
    }
    let lam = affine_dependence(q)
        .ok_or_else(|| Error::InternalInvariantViolation("no affine dependence".into()))?;
    let pos: Vec<usize> = (0..q.len()).filter(|&i| lam[i].is_positive()).collect();
    let neg: Vec<usize> = (0..q.len()).filter(|&i| lam[i].is_negative()).collect();
    if pos.len() + neg.len() != q.len() {
        // a zero coefficient means d+1 of the points are dependent
        return Err(Error::GeneralPositionViolation(
            "zero coefficient in affine dependence".into(),
        ));
    }
    let total: Scalar = pos.iter().map(|&i| lam[i].clone()).sum();
    let mut point = Point::origin(d);
    for &i in &pos {
        point = &point + &q[i].scale(&(&lam[i] / &total));
    }
    let res = TverbergResult {
        point,
        partition: canonical(vec![pos, neg]),
    };
    if !res.verify(q)? {
        return Err(Error::InternalInvariantViolation(
            "Radon point outside a part hull".into(),
        ));
    }
    Ok(res)
}

/// Calls `f` on each assignment of `n` items to exactly `s` unlabeled parts,
/// as restricted growth strings in lexicographic order, until `f` returns `true`.
fn find_set_partition(n: usize, s: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        a: &mut Vec<usize>,
        n: usize,
        s: usize,
        used: usize,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let i = a.len();
        if i == n {
            return used == s && f(a);
        }
        // not enough items left to open the remaining parts
        if used + (n - i) < s {
            return false;
        }
        let top = (used + 1).min(s);
        for label in 0..top {
            a.push(label);
            let hit = rec(a, n, s, used.max(label + 1), f);
            a.pop();
            if hit {
                return true;
            }
        }
        false
    }
    let mut a = Vec::with_capacity(n);
    rec(&mut a, n, s, 0, &mut f)
}

/// A Tverberg partition of `(s-1)(d+1)+1` points into `s` parts, with an exact
/// common point; the first feasible partition in lexicographic order wins.
pub fn tverberg_point(q: &[Point], s: usize) -> Result<TverbergResult> {
    let Some(first) = q.first() else {
        return Err(Error::SizeMismatch("empty input".into()));
    };
    let d = first.dim();
    let seq = PointSequence::new(d, q.to_vec())?;
    if s < 2 {
        return Err(Error::SizeMismatch(format!("need s >= 2 parts, got {s}")));
    }
    let need = (s - 1) * (d + 1) + 1;
    if q.len() != need {
        return Err(Error::SizeMismatch(format!(
            "Tverberg partition into {s} parts needs {need} points in R^{d}, got {}",
            q.len()
        )));
    }
    if s == 2 && first_dependent_tuple(&seq).is_none() {
        return radon_point(q);
    }
    let mut found: Option<TverbergResult> = None;
    let mut err: Option<Error> = None;
    find_set_partition(q.len(), s, |labels| {
        let mut parts: Vec<Vec<Point>> = vec![Vec::new(); s];
        let mut idx: Vec<Vec<usize>> = vec![Vec::new(); s];
        for (i, &l) in labels.iter().enumerate() {
            parts[l].push(q[i].clone());
            idx[l].push(i);
        }
        let groups: Vec<&[Point]> = parts.iter().map(|p| p.as_slice()).collect();
        match common_point(&groups) {
            Ok(Some(point)) => {
                found = Some(TverbergResult {
                    point,
                    partition: canonical(idx),
                });
                true
            }
            Ok(None) => false,
            Err(e) => {
                err = Some(e);
                true
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let res = found.ok_or_else(|| {
        Error::InternalInvariantViolation("Tverberg search exhausted every partition".into())
    })?;
    if !res.verify(q)? {
        return Err(Error::InternalInvariantViolation(
            "Tverberg point outside a part hull".into(),
        ));
    }
    Ok(res)
}

/// Point selection on a homogeneous sequence of `2D+1` points: the Tverberg
/// point of the even positions lies in the hull of the odd positions.
pub fn point_selection_check(seq: &PointSequence) -> Result<bool> {
    let d = seq.dim();
    let (s, big_d) = selection_arity(d);
    if s < 2 {
        return Err(Error::SizeMismatch(format!(
            "point selection needs s >= 2 parts; d = {d} gives s = {s}"
        )));
    }
    if seq.len() != 2 * big_d + 1 {
        return Err(Error::SizeMismatch(format!(
            "point selection in R^{d} needs {} points, got {}",
            2 * big_d + 1,
            seq.len()
        )));
    }
    if !is_orientation_homogeneous(seq) {
        return Err(Error::NotHomogeneous);
    }
    // 1-based p_2, p_4, ... are 0-based odd positions
    let q: Vec<Point> = seq.iter().skip(1).step_by(2).cloned().collect();
    let r: Vec<Point> = seq.iter().step_by(2).cloned().collect();
    let tv = tverberg_point(&q, s)?;
    in_convex_hull(&tv.point, &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[i64]]) -> Vec<Point> {
        rows.iter().map(|r| Point::from_ints(r)).collect()
    }

    #[test]
    fn radon_examples() {
        let r = radon_point(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]])).unwrap();
        assert_eq!(r.partition, vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(r.point, Point::from_ints(&[1, 1]));

        let r = radon_point(&pts(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]])).unwrap();
        assert_eq!(r.partition, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(r.point, Point::from_ints(&[1, 1]));

        assert!(matches!(
            radon_point(&pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]])),
            Err(Error::GeneralPositionViolation(_))
        ));
    }

    #[test]
    fn tverberg_examples() {
        let sq = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        assert_eq!(tverberg_point(&sq, 2).unwrap(), radon_point(&sq).unwrap());

        let hex = pts(&[
            &[2, 0],
            &[1, 2],
            &[-1, 2],
            &[-2, 0],
            &[-1, -2],
            &[1, -2],
            &[0, 0],
        ]);
        let r = tverberg_point(&hex, 3).unwrap();
        assert_eq!(r.partition.len(), 3);
        assert!(r.verify(&hex).unwrap());
        let mut all: Vec<usize> = r.partition.concat();
        all.sort_unstable();
        assert_eq!(all, (0..7).collect::<Vec<_>>());

        let line = pts(&[&[0], &[2], &[1]]);
        let r = tverberg_point(&line, 2).unwrap();
        assert_eq!(r.partition, vec![vec![0, 1], vec![2]]);
        assert_eq!(r.point, Point::from_ints(&[1]));
    }

    #[test]
    fn tverberg_size_checks() {
        assert!(matches!(
            tverberg_point(&pts(&[&[0, 0], &[1, 0], &[0, 1]]), 2),
            Err(Error::SizeMismatch(_))
        ));
        assert!(matches!(
            tverberg_point(&pts(&[&[0, 0]]), 1),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn set_partitions_count_matches_stirling() {
        let mut count = 0;
        find_set_partition(7, 3, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 301);
    }

    #[test]
    fn point_selection_on_parabola() {
        let rows: Vec<Vec<i64>> = (1..=9).map(|i| vec![i, i * i]).collect();
        let seq =
            PointSequence::new(2, rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap();
        assert!(point_selection_check(&seq).unwrap());
        let line = PointSequence::from_ints(&[&[1], &[2], &[3]]).unwrap();
        assert!(matches!(
            point_selection_check(&line),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn point_selection_rejects_non_homogeneous() {
        let mut rows: Vec<Vec<i64>> = (1..=9).map(|i| vec![i, i * i]).collect();
        rows.swap(0, 4);
        let seq =
            PointSequence::new(2, rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap();
        assert!(matches!(
            point_selection_check(&seq),
            Err(Error::NotHomogeneous)
        ));
    }
}
