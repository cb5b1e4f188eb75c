//! Erosion of a polygonal domain by an axis-aligned box.
//!
//! A point `x` of `S` keeps its box inside `S` exactly when no boundary edge
//! meets the open box around `x`. So the erosion is `S` minus the interiors of
//! the sweeps `e + B` over all boundary edges `e`. Each sweep is a convex
//! polygon with at most six vertices. The boundary of the difference is
//! extracted from the arrangement of all these segments: every atomic piece is
//! classified by which of its two sides lies in the result.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::geom::hull::{convex_hull, ConvexPolygon};
use crate::geom::point::{angle_cmp, segment_intersections, Point, Segment};
use crate::geom::polygon::{canonicalize_ring, locate_in_ring, ring_area, signed_area2, Location, PolygonalDomain};
use crate::scalar::Scalar;

/// Whether the closed box of the given half-extents centered at `c` lies in `s`.
pub fn box_fits<T: Scalar>(s: &PolygonalDomain<T>, c: &Point<T>, hw: &T, hh: &T) -> bool {
    if !s.contains(c) {
        return false;
    }
    let lo = Point::new(c.x.clone() - hw.clone(), c.y.clone() - hh.clone());
    let hi = Point::new(c.x.clone() + hw.clone(), c.y.clone() + hh.clone());
    for (_, e) in s.edges() {
        if segment_meets_open_box(&e, &lo, &hi) {
            return false;
        }
    }
    true
}

/// Whether the box moving straight from `a` to `b` stays inside `s`. The
/// swept region is the hull of both boxes; it lies in `s` exactly when both
/// end boxes do and no boundary edge enters its interior.
pub fn swept_box_fits<T: Scalar>(s: &PolygonalDomain<T>, a: &Point<T>, b: &Point<T>, hw: &T, hh: &T) -> bool {
    if !box_fits(s, a, hw, hh) || !box_fits(s, b, hw, hh) {
        return false;
    }
    if a == b {
        return true;
    }
    let mut corners = Vec::with_capacity(8);
    for c in [a, b] {
        for (sx, sy) in [(-1, -1), (1, -1), (1, 1), (-1, 1)] {
            corners.push(Point::new(c.x.clone() + hw.clone() * T::int(sx), c.y.clone() + hh.clone() * T::int(sy)));
        }
    }
    let hull = ConvexPolygon::hull_of(&corners);
    debug_assert!(hull.vertices.len() >= 3, "boxes have positive extent");
    let hp = hull.half_planes();
    s.edges().iter().all(|(_, e)| !segment_meets_open_convex(e, &hp))
}

/// Whether a closed segment meets the interior of the convex polygon given
/// by half-planes `a x + b y <= c`.
fn segment_meets_open_convex<T: Scalar>(e: &Segment<T>, hp: &[(T, T, T)]) -> bool {
    let d = e.dir();
    let mut t0 = T::zero();
    let mut t1 = T::one();
    for (a, b, c) in hp {
        let f0 = a.clone() * e.a.x.clone() + b.clone() * e.a.y.clone() - c.clone();
        let df = a.clone() * d.x.clone() + b.clone() * d.y.clone();
        if df.is_zero() {
            if f0 > T::zero() {
                return false;
            }
        } else {
            let r = -f0 / df.clone();
            if df > T::zero() {
                if r < t1 {
                    t1 = r;
                }
            } else if r > t0 {
                t0 = r;
            }
        }
    }
    if t0 > t1 {
        return false;
    }
    // the interior points of a chord form a dense open subset of it
    let m = e.a.lerp(&e.b, &((t0 + t1) / T::two()));
    hp.iter().all(|(a, b, c)| a.clone() * m.x.clone() + b.clone() * m.y.clone() < *c)
}

/// Whether a closed segment meets the open box `(lo, hi)`.
pub fn segment_meets_open_box<T: Scalar>(e: &Segment<T>, lo: &Point<T>, hi: &Point<T>) -> bool {
    // Liang-Barsky clipping against the closed box, then check that the
    // clipped piece reaches the interior.
    let d = e.dir();
    let mut t0 = T::zero();
    let mut t1 = T::one();
    let checks = [
        (-d.x.clone(), e.a.x.clone() - lo.x.clone()),
        (d.x.clone(), hi.x.clone() - e.a.x.clone()),
        (-d.y.clone(), e.a.y.clone() - lo.y.clone()),
        (d.y.clone(), hi.y.clone() - e.a.y.clone()),
    ];
    for (p, q) in checks {
        if p.is_zero() {
            if q <= T::zero() {
                return false;
            }
        } else {
            let r = q / p.clone();
            if p < T::zero() {
                if r > t0 {
                    t0 = r;
                }
            } else if r < t1 {
                t1 = r;
            }
        }
    }
    if t0 > t1 {
        return false;
    }
    let mid = e.a.lerp(&e.b, &((t0 + t1) / T::two()));
    mid.x > lo.x && mid.x < hi.x && mid.y > lo.y && mid.y < hi.y
}

fn sweep_hull<T: Scalar>(e: &Segment<T>, hw: &T, hh: &T) -> Vec<Point<T>> {
    let mut pts = Vec::with_capacity(8);
    for p in [&e.a, &e.b] {
        for (sx, sy) in [(-1, -1), (1, -1), (1, 1), (-1, 1)] {
            pts.push(Point::new(p.x.clone() + hw.clone() * T::int(sx), p.y.clone() + hh.clone() * T::int(sy)));
        }
    }
    convex_hull(&pts)
}

type BBox<T> = (Point<T>, Point<T>);

fn seg_bbox<T: Scalar>(s: &Segment<T>) -> BBox<T> {
    let lo = Point::new(crate::scalar::min_of(&s.a.x, &s.b.x), crate::scalar::min_of(&s.a.y, &s.b.y));
    let hi = Point::new(crate::scalar::max_of(&s.a.x, &s.b.x), crate::scalar::max_of(&s.a.y, &s.b.y));
    (lo, hi)
}

fn bbox_overlap<T: Scalar>(a: &BBox<T>, b: &BBox<T>) -> bool {
    a.0.x <= b.1.x && b.0.x <= a.1.x && a.0.y <= b.1.y && b.0.y <= a.1.y
}

/// Which sides (left, right) of the atomic piece `s` lie in the closed region
/// bounded by `ring` (interior on the left of every ring edge).
fn sides_in_ring<T: Scalar>(ring: &[Point<T>], s: &Segment<T>, m: &Point<T>) -> (bool, bool) {
    match locate_in_ring(ring, m) {
        Location::Inside => (true, true),
        Location::Outside => (false, false),
        Location::Boundary => {
            let n = ring.len();
            for i in 0..n {
                let e = Segment::new(ring[i].clone(), ring[(i + 1) % n].clone());
                if e.contains(m) {
                    let same = e.dir().dot(&s.dir()) > T::zero();
                    return (same, !same);
                }
            }
            unreachable!("boundary point lies on some edge")
        }
    }
}

fn sides_in_domain<T: Scalar>(s_dom: &PolygonalDomain<T>, s: &Segment<T>, m: &Point<T>) -> (bool, bool) {
    let (mut l, mut r) = sides_in_ring(&s_dom.outer, s, m);
    for h in &s_dom.holes {
        // holes are clockwise, so their complement lies on the left
        let (hl, hr) = sides_in_ring(h, s, m);
        let (hl, hr) = match locate_in_ring(h, m) {
            Location::Boundary => (hl, hr),
            Location::Inside => (false, false),
            Location::Outside => (true, true),
        };
        l = l && hl;
        r = r && hr;
    }
    (l, r)
}

/// Erosion of `s` by the box with half-extents `(hw, hh)`. Returns one domain
/// per two-dimensional component; an empty list means no placement fits.
/// Lower-dimensional pieces (segments and isolated points where the box fits
/// exactly) are not part of the result.
pub fn inner_minkowski<T: Scalar>(s: &PolygonalDomain<T>, hw: &T, hh: &T) -> Vec<PolygonalDomain<T>> {
    let mut segs: Vec<Segment<T>> = s.edges().into_iter().map(|(_, e)| e).collect();
    let hulls: Vec<Vec<Point<T>>> = segs.iter().map(|e| sweep_hull(e, hw, hh)).collect();
    for h in &hulls {
        let n = h.len();
        for i in 0..n {
            segs.push(Segment::new(h[i].clone(), h[(i + 1) % n].clone()));
        }
    }
    let hull_boxes: Vec<BBox<T>> = hulls
        .iter()
        .map(|h| {
            let mut lo = h[0].clone();
            let mut hi = h[0].clone();
            for p in h {
                lo = Point::new(crate::scalar::min_of(&lo.x, &p.x), crate::scalar::min_of(&lo.y, &p.y));
                hi = Point::new(crate::scalar::max_of(&hi.x, &p.x), crate::scalar::max_of(&hi.y, &p.y));
            }
            (lo, hi)
        })
        .collect();
    let (dlo, dhi) = s.bbox();
    let dom_box = (dlo, dhi);

    // split every segment at all intersection points
    let boxes: Vec<BBox<T>> = segs.iter().map(seg_bbox).collect();
    let mut cuts: Vec<Vec<Point<T>>> = segs.iter().map(|e| vec![e.a.clone(), e.b.clone()]).collect();
    for i in 0..segs.len() {
        if !bbox_overlap(&boxes[i], &dom_box) {
            continue;
        }
        for j in (i + 1)..segs.len() {
            if !bbox_overlap(&boxes[i], &boxes[j]) {
                continue;
            }
            for p in segment_intersections(&segs[i], &segs[j]) {
                cuts[i].push(p.clone());
                cuts[j].push(p);
            }
        }
    }
    let mut atoms: Vec<(Point<T>, Point<T>)> = Vec::new();
    for (i, e) in segs.iter().enumerate() {
        if !bbox_overlap(&boxes[i], &dom_box) {
            continue;
        }
        let mut pts = std::mem::take(&mut cuts[i]);
        let d = e.dir();
        pts.sort_by(|p, q| p.sub(&e.a).dot(&d).cmp(&q.sub(&e.a).dot(&d)));
        pts.dedup();
        for w in pts.windows(2) {
            let (a, b) = if w[0] < w[1] { (w[0].clone(), w[1].clone()) } else { (w[1].clone(), w[0].clone()) };
            atoms.push((a, b));
        }
    }
    atoms.sort();
    atoms.dedup();

    // classify each atomic piece and keep oriented boundary edges
    let mut edges: Vec<(Point<T>, Point<T>)> = Vec::new();
    for (a, b) in atoms {
        let seg = Segment::new(a.clone(), b.clone());
        let m = a.midpoint(&b);
        let (mut l, mut r) = sides_in_domain(s, &seg, &m);
        if !l && !r {
            continue;
        }
        let sb = seg_bbox(&seg);
        for (h, hb) in hulls.iter().zip(&hull_boxes) {
            if !(l || r) {
                break;
            }
            if !bbox_overlap(&sb, hb) {
                continue;
            }
            // interior of the sweep: on its boundary only the inner side is removed
            let (hl, hr) = sides_in_ring(h, &seg, &m);
            l = l && !hl;
            r = r && !hr;
        }
        match (l, r) {
            (true, false) => edges.push((a, b)),
            (false, true) => edges.push((b, a)),
            _ => {}
        }
    }

    let rings = trace_rings(&edges);
    assemble(rings)
}

/// Walks directed edges into closed rings, keeping the region on the left.
/// At each vertex the next edge is the first one clockwise from the reversed
/// incoming direction.
fn trace_rings<T: Scalar>(edges: &[(Point<T>, Point<T>)]) -> Vec<Vec<Point<T>>> {
    let mut out_of: HashMap<Point<T>, Vec<usize>> = HashMap::new();
    for (i, (a, _)) in edges.iter().enumerate() {
        out_of.entry(a.clone()).or_default().push(i);
    }
    let mut used = vec![false; edges.len()];
    let mut rings = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut ring = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            let (a, b) = &edges[cur];
            ring.push(a.clone());
            let back = a.sub(b);
            let cands = out_of.get(b).map(|v| v.as_slice()).unwrap_or(&[]);
            let next = cands
                .iter()
                .copied()
                .filter(|&c| !used[c] || c == start)
                .max_by(|&c1, &c2| {
                    let d1 = edges[c1].1.sub(&edges[c1].0);
                    let d2 = edges[c2].1.sub(&edges[c2].0);
                    rel_angle_cmp(&back, &d1, &d2)
                });
            match next {
                Some(n) if n == start => break,
                Some(n) => cur = n,
                None => break,
            }
        }
        rings.push(ring);
    }
    rings
}

/// Compares counterclockwise angles of `d1` and `d2` measured from `r`, in `[0, 2pi)`.
fn rel_angle_cmp<T: Scalar>(r: &Point<T>, d1: &Point<T>, d2: &Point<T>) -> Ordering {
    let rot = |d: &Point<T>| Point::new(d.dot(r), r.cross(d));
    angle_cmp(&rot(d1), &rot(d2))
}

fn assemble<T: Scalar>(rings: Vec<Vec<Point<T>>>) -> Vec<PolygonalDomain<T>> {
    let mut outers: Vec<(Vec<Point<T>>, Vec<Vec<Point<T>>>)> = Vec::new();
    let mut holes: Vec<Vec<Point<T>>> = Vec::new();
    for r in rings {
        let r = canonicalize_ring(&r);
        if r.len() < 3 {
            continue;
        }
        match signed_area2(&r).cmp(&T::zero()) {
            Ordering::Greater => outers.push((r, Vec::new())),
            Ordering::Less => holes.push(r),
            Ordering::Equal => {}
        }
    }
    for h in holes {
        let probe = h[0].midpoint(&h[1]);
        let owner = outers
            .iter()
            .enumerate()
            .filter(|(_, (o, _))| locate_in_ring(o, &probe) != Location::Outside)
            .min_by(|(_, (a, _)), (_, (b, _))| ring_area(a).cmp(&ring_area(b)))
            .map(|(i, _)| i);
        if let Some(i) = owner {
            outers[i].1.push(h);
        }
    }
    let mut doms: Vec<PolygonalDomain<T>> = outers
        .into_iter()
        .map(|(o, hs)| {
            let o = rotate_to_min(o);
            let mut hs: Vec<Vec<Point<T>>> = hs.into_iter().map(rotate_to_min).collect();
            hs.sort();
            PolygonalDomain::from_rings_unchecked(o, hs)
        })
        .collect();
    doms.sort_by(|a, b| a.outer[0].cmp(&b.outer[0]));
    doms.into_iter().enumerate().map(|(i, d)| d.with_id(i)).collect()
}

fn rotate_to_min<T: Scalar>(mut r: Vec<Point<T>>) -> Vec<Point<T>> {
    let k = (0..r.len()).min_by(|&i, &j| r[i].cmp(&r[j])).unwrap_or(0);
    r.rotate_left(k);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swept_box_catches_corner_cutting() {
        type Q = num_rational::BigRational;
        // L shape: a diagonal move across the inner corner leaves the domain
        let l = PolygonalDomain::new(
            vec![Point::ints(0, 0), Point::ints(4, 0), Point::ints(4, 1), Point::ints(1, 1), Point::ints(1, 4), Point::ints(0, 4)],
            vec![],
        )
        .unwrap();
        let h = Q::new(1.into(), 2.into());
        let a = Point::new(Q::new(7.into(), 2.into()), h.clone());
        let b = Point::new(h.clone(), Q::new(7.into(), 2.into()));
        let corner = Point::new(h.clone(), h.clone());
        assert!(!swept_box_fits(&l, &a, &b, &h, &h));
        assert!(swept_box_fits(&l, &a, &corner, &h, &h));
        assert!(swept_box_fits(&l, &corner, &b, &h, &h));
    }
    use num_rational::BigRational;

    type Q = BigRational;
    type P = Point<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn pts(v: &[(i64, i64)], den: i64) -> Vec<P> {
        v.iter().map(|&(x, y)| P::new(q(x, den), q(y, den))).collect()
    }

    #[test]
    fn square_shrinks_uniformly() {
        let s = PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(4), Q::int(4));
        let e = inner_minkowski(&s, &Q::half(), &Q::half());
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].outer, pts(&[(1, 1), (7, 1), (7, 7), (1, 7)], 2));
        assert!(e[0].holes.is_empty());
    }

    #[test]
    fn narrow_corridor_disconnects() {
        // two 4x4 rooms joined by a corridor of length 2 and height 0.8
        let outer = pts(
            &[(0, 0), (40, 0), (40, 16), (60, 16), (60, 0), (100, 0), (100, 40), (60, 40), (60, 24), (40, 24), (40, 40), (0, 40)],
            10,
        );
        let s = PolygonalDomain::new(outer, vec![]).unwrap();
        let e = inner_minkowski(&s, &Q::half(), &Q::half());
        assert_eq!(e.len(), 2);
        for c in &e {
            assert_eq!(c.area(), Q::int(9));
            assert_eq!(c.outer.len(), 4);
        }
    }

    #[test]
    fn l_shape_gets_notch() {
        let outer = pts(&[(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)], 1);
        let s = PolygonalDomain::new(outer, vec![]).unwrap();
        let e = inner_minkowski(&s, &Q::half(), &Q::half());
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].outer, pts(&[(1, 1), (7, 1), (7, 3), (3, 3), (3, 7), (1, 7)], 2));
    }

    #[test]
    fn hole_grows() {
        let s = PolygonalDomain::new(
            pts(&[(0, 0), (8, 0), (8, 8), (0, 8)], 1),
            vec![pts(&[(3, 3), (5, 3), (5, 5), (3, 5)], 1)],
        )
        .unwrap();
        let e = inner_minkowski(&s, &Q::half(), &Q::half());
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].holes.len(), 1);
        assert_eq!(e[0].area(), Q::int(49 - 9));
    }

    #[test]
    fn slanted_edge_offsets_by_support() {
        // right triangle with legs 4: the hypotenuse x + y <= 4 moves to x + y <= 3
        let s = PolygonalDomain::new(pts(&[(0, 0), (4, 0), (0, 4)], 1), vec![]).unwrap();
        let e = inner_minkowski(&s, &Q::half(), &Q::half());
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].outer, pts(&[(1, 1), (5, 1), (1, 5)], 2));
    }

    #[test]
    fn box_fits_matches_definition() {
        let s = PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(4), Q::int(4));
        assert!(box_fits(&s, &P::ints(2, 2), &Q::half(), &Q::half()));
        assert!(box_fits(&s, &P::new(q(1, 2), q(1, 2)), &Q::half(), &Q::half()));
        assert!(!box_fits(&s, &P::new(q(2, 5), q(2, 1)), &Q::half(), &Q::half()));
    }
}
