//! Trapezoidal decompositions by axis-parallel cuts from every vertex.
//!
//! Built with a slab sweep: between consecutive vertex heights the
//! non-horizontal edges crossing the slab alternate between entering and
//! leaving the region, so pairing them in x order yields the interior
//! intervals. Consecutive slab pieces bounded by the same pair of edges are
//! merged, which is exactly the effect of cutting only at vertices visible
//! inside the piece.

use crate::geom::hull::ConvexPolygon;
use crate::geom::point::{Point, Segment};
use crate::geom::polygon::{EdgeRef, PolygonalDomain};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Horizontal cuts; trapezoids have horizontal parallel sides.
    Horizontal,
    /// Vertical cuts; trapezoids have vertical parallel sides.
    Vertical,
}

/// One non-parallel side of a trapezoid: a piece of a domain edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Side<T> {
    pub segment: Segment<T>,
    pub edge: EdgeRef,
}

/// For horizontal decompositions `lo..hi` is the y-range and the sides are
/// left and right; for vertical ones `lo..hi` is the x-range and the sides
/// are bottom and top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trapezoid<T> {
    pub id: usize,
    pub axis: Axis,
    pub lo: T,
    pub hi: T,
    pub low_side: Side<T>,
    pub high_side: Side<T>,
    /// Counterclockwise corners, three when one parallel side degenerates.
    pub vertices: Vec<Point<T>>,
    pub parent_domain: usize,
    pub parent_region: usize,
}

impl<T: Scalar> Trapezoid<T> {
    pub fn polygon(&self) -> ConvexPolygon<T> {
        ConvexPolygon { vertices: self.vertices.clone() }
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        self.polygon().contains(p)
    }

    pub fn area(&self) -> T {
        crate::geom::polygon::ring_area(&self.vertices)
    }

    pub fn bbox(&self) -> (Point<T>, Point<T>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for p in &self.vertices {
            lo = Point::new(crate::scalar::min_of(&lo.x, &p.x), crate::scalar::min_of(&lo.y, &p.y));
            hi = Point::new(crate::scalar::max_of(&hi.x, &p.x), crate::scalar::max_of(&hi.y, &p.y));
        }
        (lo, hi)
    }

    /// Point of the low (left/bottom) side at the given sweep coordinate.
    pub fn low_side_at(&self, s: &T) -> Point<T> {
        side_at(&self.low_side.segment, self.axis, s)
    }

    pub fn high_side_at(&self, s: &T) -> Point<T> {
        side_at(&self.high_side.segment, self.axis, s)
    }
}

/// Degenerate trapezoid consisting of a single point.
pub fn point_trapezoid<T: Scalar>(p: Point<T>) -> Trapezoid<T> {
    let side = Side { segment: Segment::new(p.clone(), p.clone()), edge: EdgeRef { ring: 0, index: 0 } };
    Trapezoid {
        id: 0,
        axis: Axis::Horizontal,
        lo: p.y.clone(),
        hi: p.y.clone(),
        low_side: side.clone(),
        high_side: side,
        vertices: vec![p],
        parent_domain: 0,
        parent_region: 0,
    }
}

fn side_at<T: Scalar>(seg: &Segment<T>, axis: Axis, s: &T) -> Point<T> {
    match axis {
        Axis::Horizontal => Point::new(seg.x_at(s), s.clone()),
        Axis::Vertical => Point::new(s.clone(), seg.swapped().x_at(s)),
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub axis: Axis,
    pub trapezoids: Vec<Trapezoid<T>>,
    /// Pairs `(a, b)` with `a < b` of trapezoids sharing a cut of positive length.
    pub adjacency: Vec<(usize, usize)>,
    /// Corners of trapezoids that are not vertices of the region.
    pub steiner_vertices: Vec<Point<T>>,
    /// Sorted distinct sweep coordinates and, per slab, the trapezoids spanning it.
    breaks: Vec<T>,
    slabs: Vec<Vec<usize>>,
}

impl<T: Scalar> Decomposition<T> {
    /// The lowest-id trapezoid containing `p` (closed), or `None` outside.
    pub fn locate(&self, p: &Point<T>) -> Option<usize> {
        let s = match self.axis {
            Axis::Horizontal => &p.y,
            Axis::Vertical => &p.x,
        };
        if self.breaks.is_empty() || *s < self.breaks[0] || *s > self.breaks[self.breaks.len() - 1] {
            return None;
        }
        let mut slabs = Vec::with_capacity(2);
        match self.breaks.binary_search(s) {
            Ok(i) => {
                if i > 0 {
                    slabs.push(i - 1);
                }
                if i < self.slabs.len() {
                    slabs.push(i);
                }
            }
            Err(i) => slabs.push(i - 1),
        }
        slabs
            .into_iter()
            .flat_map(|k| self.slabs[k].iter().copied())
            .filter(|&t| self.trapezoids[t].contains(p))
            .min()
    }

    pub fn total_area(&self) -> T {
        self.trapezoids.iter().fold(T::zero(), |acc, t| acc + t.area())
    }
}

/// Decomposes one eroded region. `parent_domain` and `parent_region` are
/// recorded on each trapezoid; ids are assigned sweep-first, then left to right.
pub fn decompose<T: Scalar>(r: &PolygonalDomain<T>, axis: Axis) -> Decomposition<T> {
    decompose_with_ids(r, axis, 0, r.id, 0)
}

pub(crate) fn decompose_with_ids<T: Scalar>(
    r: &PolygonalDomain<T>,
    axis: Axis,
    first_id: usize,
    parent_domain: usize,
    parent_region: usize,
) -> Decomposition<T> {
    match axis {
        Axis::Horizontal => sweep(r, first_id, parent_domain, parent_region),
        Axis::Vertical => {
            let sw = r.swapped();
            let d = sweep(&sw, first_id, parent_domain, parent_region);
            swap_back(r, d)
        }
    }
}

fn sweep<T: Scalar>(r: &PolygonalDomain<T>, first_id: usize, parent_domain: usize, parent_region: usize) -> Decomposition<T> {
    let edges: Vec<(EdgeRef, Segment<T>)> = r.edges().into_iter().filter(|(_, s)| s.a.y != s.b.y).collect();
    let mut ys: Vec<T> = r.vertices().into_iter().map(|p| p.y).collect();
    ys.sort();
    ys.dedup();

    struct Open<T> {
        left: usize,
        right: usize,
        lo: T,
    }
    let mut pieces: Vec<(usize, usize, T, T)> = Vec::new();
    let mut open: Vec<Open<T>> = Vec::new();
    let mut slab_members: Vec<Vec<(usize, usize)>> = Vec::new();
    for w in ys.windows(2) {
        let (y0, y1) = (&w[0], &w[1]);
        let mid = (y0.clone() + y1.clone()) / T::two();
        let mut crossing: Vec<(T, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| {
                let (lo, hi) = if s.a.y < s.b.y { (&s.a.y, &s.b.y) } else { (&s.b.y, &s.a.y) };
                lo <= y0 && hi >= y1
            })
            .map(|(i, (_, s))| (s.x_at(&mid), i))
            .collect();
        crossing.sort();
        let pairs: Vec<(usize, usize)> = crossing.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0].1, c[1].1)).collect();
        let mut next_open = Vec::new();
        for o in open.drain(..) {
            if pairs.contains(&(o.left, o.right)) {
                next_open.push(o);
            } else {
                pieces.push((o.left, o.right, o.lo, y0.clone()));
            }
        }
        for &(l, rr) in &pairs {
            if !next_open.iter().any(|o| o.left == l && o.right == rr) {
                next_open.push(Open { left: l, right: rr, lo: y0.clone() });
            }
        }
        open = next_open;
        slab_members.push(pairs);
    }
    if let Some(top) = ys.last() {
        for o in open.drain(..) {
            pieces.push((o.left, o.right, o.lo, top.clone()));
        }
    }
    // ids: by bottom, then by x of the left side at mid-height
    pieces.sort_by(|a, b| {
        a.2.cmp(&b.2).then_with(|| {
            let ma = (a.2.clone() + a.3.clone()) / T::two();
            let mb = (b.2.clone() + b.3.clone()) / T::two();
            edges[a.0].1.x_at(&ma).cmp(&edges[b.0].1.x_at(&mb))
        })
    });
    let mut traps = Vec::with_capacity(pieces.len());
    for (k, (l, rr, lo, hi)) in pieces.into_iter().enumerate() {
        let (le, ls) = &edges[l];
        let (re, rs) = &edges[rr];
        let clip = |s: &Segment<T>| Segment::new(Point::new(s.x_at(&lo), lo.clone()), Point::new(s.x_at(&hi), hi.clone()));
        let lseg = clip(ls);
        let rseg = clip(rs);
        let mut verts = vec![lseg.a.clone(), rseg.a.clone(), rseg.b.clone(), lseg.b.clone()];
        verts.dedup();
        if verts.len() > 1 && verts.first() == verts.last() {
            verts.pop();
        }
        traps.push(Trapezoid {
            id: first_id + k,
            axis: Axis::Horizontal,
            lo,
            hi,
            low_side: Side { segment: lseg, edge: *le },
            high_side: Side { segment: rseg, edge: *re },
            vertices: verts,
            parent_domain,
            parent_region,
        });
    }
    // slab membership by interval overlap
    let slabs: Vec<Vec<usize>> = ys
        .windows(2)
        .map(|w| {
            traps
                .iter()
                .filter(|t| t.lo <= w[0] && t.hi >= w[1])
                .map(|t| t.id)
                .collect()
        })
        .collect();
    let adjacency = adjacency_of(&traps, first_id);
    let vset: std::collections::HashSet<Point<T>> = r.vertices().into_iter().collect();
    let mut steiner: Vec<Point<T>> =
        traps.iter().flat_map(|t| t.vertices.iter().cloned()).filter(|p| !vset.contains(p)).collect();
    steiner.sort();
    steiner.dedup();
    Decomposition { axis: Axis::Horizontal, trapezoids: traps, adjacency, steiner_vertices: steiner, breaks: ys, slabs }
}

fn adjacency_of<T: Scalar>(traps: &[Trapezoid<T>], first_id: usize) -> Vec<(usize, usize)> {
    let mut adj = Vec::new();
    for a in traps {
        for b in traps {
            if a.hi != b.lo {
                continue;
            }
            let y = &a.hi;
            let (a0, a1) = (a.low_side_at(y).x, a.high_side_at(y).x);
            let (b0, b1) = (b.low_side_at(y).x, b.high_side_at(y).x);
            let lo = crate::scalar::max_of(&a0, &b0);
            let hi = crate::scalar::min_of(&a1, &b1);
            if lo < hi {
                let (i, j) = (a.id.min(b.id), a.id.max(b.id));
                adj.push((i, j));
            }
        }
    }
    let _ = first_id;
    adj.sort();
    adj.dedup();
    adj
}

fn swap_back<T: Scalar>(orig: &PolygonalDomain<T>, d: Decomposition<T>) -> Decomposition<T> {
    // the swapped domain reverses every ring: swapped edge j is original edge
    // (2n - 2 - j) mod n, traversed backwards
    let map_edge = |e: EdgeRef| {
        let n = orig.ring(e.ring).len();
        EdgeRef { ring: e.ring, index: (2 * n - 2 - e.index) % n }
    };
    let trapezoids = d
        .trapezoids
        .into_iter()
        .map(|t| {
            let mut verts: Vec<Point<T>> = t.vertices.iter().map(|p| p.swapped()).collect();
            verts.reverse();
            Trapezoid {
                id: t.id,
                axis: Axis::Vertical,
                lo: t.lo,
                hi: t.hi,
                low_side: Side { segment: t.low_side.segment.swapped(), edge: map_edge(t.low_side.edge) },
                high_side: Side { segment: t.high_side.segment.swapped(), edge: map_edge(t.high_side.edge) },
                vertices: verts,
                parent_domain: t.parent_domain,
                parent_region: t.parent_region,
            }
        })
        .collect();
    Decomposition {
        axis: Axis::Vertical,
        trapezoids,
        adjacency: d.adjacency,
        steiner_vertices: {
            let mut s: Vec<Point<T>> = d.steiner_vertices.iter().map(|p| p.swapped()).collect();
            s.sort();
            s
        },
        breaks: d.breaks,
        slabs: d.slabs,
    }
}

/// Convex hull of two trapezoids with the width and height of its bounding box.
pub fn hull_of_two_trapezoids<T: Scalar>(x: &Trapezoid<T>, y: &Trapezoid<T>) -> (ConvexPolygon<T>, T, T) {
    let z = if x == y {
        x.polygon()
    } else {
        let pts: Vec<Point<T>> = x.vertices.iter().chain(y.vertices.iter()).cloned().collect();
        ConvexPolygon::hull_of(&pts)
    };
    let w = z.width();
    let h = z.height();
    (z, w, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::point::orient;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = Point<Q>;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn pts(v: &[(i64, i64)], den: i64) -> Vec<P> {
        v.iter().map(|&(x, y)| P::new(q(x, den), q(y, den))).collect()
    }

    fn rect_trap(x0: i64, y0: i64, x1: i64, y1: i64, den: i64) -> Trapezoid<Q> {
        let d = PolygonalDomain::new(pts(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)], den), vec![]).unwrap();
        decompose(&d, Axis::Horizontal).trapezoids.remove(0)
    }

    #[test]
    fn rectangle_is_one_trapezoid() {
        let d = PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(3), Q::int(2));
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let dec = decompose(&d, axis);
            assert_eq!(dec.trapezoids.len(), 1);
            assert_eq!(dec.locate(&P::ints(1, 1)), Some(0));
            assert_eq!(dec.locate(&P::ints(5, 1)), None);
            assert!(dec.steiner_vertices.is_empty());
        }
    }

    #[test]
    fn square_with_hole_gives_four() {
        let d = PolygonalDomain::new(
            pts(&[(1, 1), (7, 1), (7, 7), (1, 7)], 2),
            vec![pts(&[(3, 3), (5, 3), (5, 5), (3, 5)], 2)],
        )
        .unwrap();
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let dec = decompose(&d, axis);
            assert_eq!(dec.trapezoids.len(), 4);
            assert_eq!(dec.total_area(), d.area());
            assert_eq!(dec.steiner_vertices.len(), 4);
            assert_eq!(dec.adjacency.len(), 4);
        }
    }

    #[test]
    fn triangle_single_trapezoid() {
        let d = PolygonalDomain::new(pts(&[(0, 0), (4, 0), (0, 4)], 1), vec![]).unwrap();
        let dec = decompose(&d, Axis::Horizontal);
        assert_eq!(dec.trapezoids.len(), 1);
        assert_eq!(dec.trapezoids[0].vertices.len(), 3);
        assert_eq!(dec.total_area(), Q::int(8));
    }

    #[test]
    fn cut_points_go_to_lower_id() {
        let d = PolygonalDomain::new(pts(&[(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)], 1), vec![]).unwrap();
        let dec = decompose(&d, Axis::Horizontal);
        assert_eq!(dec.trapezoids.len(), 2);
        assert_eq!(dec.locate(&P::ints(1, 2)), Some(0));
        assert_eq!(dec.locate(&P::ints(1, 3)), Some(1));
        let v = decompose(&d, Axis::Vertical);
        assert_eq!(v.trapezoids.len(), 2);
        assert_eq!(v.locate(&P::ints(2, 1)), Some(0));
        assert_eq!(v.trapezoids[0].axis, Axis::Vertical);
        // vertical sides of the vertical decomposition are horizontal edges
        let t = &v.trapezoids[1];
        assert_eq!(t.low_side.segment.a.y, t.low_side.segment.b.y);
        assert_eq!(d.edge(t.low_side.edge).a.y, t.low_side.segment.a.y);
    }

    #[test]
    fn hull_examples() {
        let x = rect_trap(0, 0, 2, 1, 1);
        let (z, w, h) = hull_of_two_trapezoids(&x, &x);
        assert_eq!(z.vertices.len(), 4);
        assert_eq!((w, h), (Q::int(2), Q::int(1)));

        let a = rect_trap(0, 0, 1, 1, 1);
        let b = rect_trap(3, 0, 4, 1, 1);
        let (z, w, h) = hull_of_two_trapezoids(&a, &b);
        assert_eq!(z.vertices, pts(&[(0, 0), (4, 0), (4, 1), (0, 1)], 1));
        assert_eq!((w, h), (Q::int(4), Q::int(1)));

        let a = rect_trap(0, 0, 10, 4, 10);
        let b = rect_trap(20, 6, 30, 10, 10);
        let (z, w, h) = hull_of_two_trapezoids(&a, &b);
        // brute-force hull: corners outside every triangle of the other corners
        let corners: Vec<P> = a.vertices.iter().chain(&b.vertices).cloned().collect();
        let in_tri = |p: &P, u: &P, v: &P, w: &P| {
            let o = [orient(u, v, p), orient(v, w, p), orient(w, u, p)];
            !(o.contains(&std::cmp::Ordering::Less) && o.contains(&std::cmp::Ordering::Greater))
        };
        let extreme = corners
            .iter()
            .filter(|p| {
                let others: Vec<&P> = corners.iter().filter(|c| c != p).collect();
                let mut inside = false;
                for i in 0..others.len() {
                    for j in (i + 1)..others.len() {
                        for k in (j + 1)..others.len() {
                            inside |= in_tri(p, others[i], others[j], others[k]);
                        }
                    }
                }
                !inside
            })
            .count();
        assert_eq!(extreme, 6);
        assert_eq!(z.vertices.len(), 6);
        assert_eq!((w, h), (Q::int(3), Q::int(1)));
    }
}
