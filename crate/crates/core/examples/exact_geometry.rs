//! Exact orientation, hull membership and hull intersection.
use onesided::geometry::{common_point, format_scalar, hulls_intersect, in_convex_hull, orient, ratio, Point};

fn main() -> onesided::error::Result<()> {
    let a = Point::from_ints(&[0, 0]);
    let b = Point::from_ints(&[4, 0]);
    let c = Point::from_ints(&[0, 4]);
    println!("orient(a, b, c) = {}", orient(&[&a, &b, &c])?);
    println!("orient(b, a, c) = {}", orient(&[&b, &a, &c])?);

    let tri = vec![a.clone(), b.clone(), c.clone()];
    // on the hypotenuse: exactly on the boundary, no rounding
    let edge = Point::new(vec![ratio(4, 3), ratio(8, 3)]);
    let outside = Point::new(vec![ratio(4, 3), ratio(8, 3) + ratio(1, 1_000_000_000)]);
    println!("edge point inside: {}", in_convex_hull(&edge, &tri)?);
    println!("nudged point inside: {}", in_convex_hull(&outside, &tri)?);

    let seg = vec![Point::from_ints(&[-1, 1]), Point::from_ints(&[5, 1])];
    println!("segment meets triangle: {}", hulls_intersect(&tri, &seg)?);
    if let Some(q) = common_point(&[&tri, &seg])? {
        let s: Vec<String> = q.coords().iter().map(format_scalar).collect();
        println!("a common point: ({})", s.join(", "));
    }
    Ok(())
}
