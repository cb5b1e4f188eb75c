use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geom::point::{orient, segment_intersections, Point, Segment};
use crate::scalar::Scalar;

/// Twice the signed area of a closed ring (positive for counterclockwise).
pub fn signed_area2<T: Scalar>(ring: &[Point<T>]) -> T {
    let n = ring.len();
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + ring[i].cross(&ring[(i + 1) % n]);
    }
    acc
}

pub fn ring_area<T: Scalar>(ring: &[Point<T>]) -> T {
    signed_area2(ring).abs() / T::two()
}

/// Removes repeated and collinear vertices. Returns fewer than three points
/// when the ring is degenerate.
pub fn canonicalize_ring<T: Scalar>(ring: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = Vec::with_capacity(ring.len());
    for p in ring {
        if pts.last() != Some(p) {
            pts.push(p.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let next = &pts[(i + 1) % n];
            if orient(prev, &pts[i], next) == Ordering::Equal {
                pts.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return pts;
        }
    }
}

pub fn ring_edges<T: Scalar>(ring: &[Point<T>]) -> impl Iterator<Item = Segment<T>> + '_ {
    let n = ring.len();
    (0..n).map(move |i| Segment::new(ring[i].clone(), ring[(i + 1) % n].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Exact point-in-ring test (even-odd with explicit boundary detection).
pub fn locate_in_ring<T: Scalar>(ring: &[Point<T>], p: &Point<T>) -> Location {
    let mut inside = false;
    for e in ring_edges(ring) {
        if e.contains(p) {
            return Location::Boundary;
        }
        let (a, b) = (&e.a, &e.b);
        if (a.y > p.y) != (b.y > p.y) {
            // x of the crossing compared to p.x without division
            let lhs = (p.x.clone() - a.x.clone()) * (b.y.clone() - a.y.clone());
            let rhs = (b.x.clone() - a.x.clone()) * (p.y.clone() - a.y.clone());
            let crosses = if b.y > a.y { lhs < rhs } else { lhs > rhs };
            if crosses {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Reference to one directed boundary edge of a domain: ring 0 is the outer
/// boundary, ring `h + 1` is hole `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub ring: usize,
    pub index: usize,
}

/// Outer counterclockwise ring plus clockwise holes. The interior always lies
/// to the left of every directed edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonalDomain<T> {
    pub outer: Vec<Point<T>>,
    pub holes: Vec<Vec<Point<T>>>,
    pub id: usize,
}

impl<T: Scalar> PolygonalDomain<T> {
    /// Validating constructor: canonicalizes rings, fixes orientation, and
    /// rejects self-intersections and misplaced holes.
    pub fn new(outer: Vec<Point<T>>, holes: Vec<Vec<Point<T>>>) -> Result<Self> {
        let mut outer = canonicalize_ring(&outer);
        if outer.len() < 3 {
            return Err(Error::InvalidPolygon("outer ring is degenerate".into()));
        }
        if signed_area2(&outer) < T::zero() {
            outer.reverse();
        }
        let mut hs = Vec::with_capacity(holes.len());
        for (i, h) in holes.iter().enumerate() {
            let mut h = canonicalize_ring(h);
            if h.len() < 3 {
                return Err(Error::InvalidPolygon(format!("hole {i} is degenerate")));
            }
            if signed_area2(&h) > T::zero() {
                h.reverse();
            }
            hs.push(h);
        }
        let dom = PolygonalDomain { outer, holes: hs, id: 0 };
        dom.check_simple()?;
        Ok(dom)
    }

    /// Unchecked constructor for rings already in canonical orientation.
    pub fn from_rings_unchecked(outer: Vec<Point<T>>, holes: Vec<Vec<Point<T>>>) -> Self {
        PolygonalDomain { outer, holes, id: 0 }
    }

    pub fn rect(x0: T, y0: T, x1: T, y1: T) -> Self {
        let outer = vec![
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ];
        PolygonalDomain::new(outer, Vec::new()).expect("rectangle is valid")
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point<T>>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn ring(&self, r: usize) -> &[Point<T>] {
        if r == 0 {
            &self.outer
        } else {
            &self.holes[r - 1]
        }
    }

    pub fn edge(&self, e: EdgeRef) -> Segment<T> {
        let ring = self.ring(e.ring);
        Segment::new(ring[e.index].clone(), ring[(e.index + 1) % ring.len()].clone())
    }

    pub fn edges(&self) -> Vec<(EdgeRef, Segment<T>)> {
        let mut out = Vec::new();
        for (r, ring) in self.rings().enumerate() {
            for (i, s) in ring_edges(ring).enumerate() {
                out.push((EdgeRef { ring: r, index: i }, s));
            }
        }
        out
    }

    pub fn vertices(&self) -> Vec<Point<T>> {
        self.rings().flat_map(|r| r.iter().cloned()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.rings().map(|r| r.len()).sum()
    }

    pub fn area(&self) -> T {
        let mut a = ring_area(&self.outer);
        for h in &self.holes {
            a = a - ring_area(h);
        }
        a
    }

    /// Closed point location.
    pub fn locate(&self, p: &Point<T>) -> Location {
        match locate_in_ring(&self.outer, p) {
            Location::Outside => return Location::Outside,
            Location::Boundary => return Location::Boundary,
            Location::Inside => {}
        }
        for h in &self.holes {
            match locate_in_ring(h, p) {
                Location::Inside => return Location::Outside,
                Location::Boundary => return Location::Boundary,
                Location::Outside => {}
            }
        }
        Location::Inside
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        self.locate(p) != Location::Outside
    }

    /// The directed boundary edge containing `p`, if any.
    pub fn boundary_edge_at(&self, p: &Point<T>) -> Option<(EdgeRef, Segment<T>)> {
        self.edges().into_iter().find(|(_, s)| s.contains(p))
    }

    pub fn bbox(&self) -> (Point<T>, Point<T>) {
        let mut lo = self.outer[0].clone();
        let mut hi = self.outer[0].clone();
        for p in &self.outer {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        (lo, hi)
    }

    pub fn is_rectilinear(&self) -> bool {
        self.edges().iter().all(|(_, s)| s.a.x == s.b.x || s.a.y == s.b.y)
    }

    /// Coordinate swap (x, y) -> (y, x), keeping the interior on the left.
    pub fn swapped(&self) -> Self {
        let sw = |ring: &Vec<Point<T>>| -> Vec<Point<T>> {
            let mut r: Vec<Point<T>> = ring.iter().map(|p| p.swapped()).collect();
            r.reverse();
            r
        };
        PolygonalDomain { outer: sw(&self.outer), holes: self.holes.iter().map(sw).collect(), id: self.id }
    }

    fn check_simple(&self) -> Result<()> {
        let edges = self.edges();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (ri, si) = &edges[i];
                let (rj, sj) = &edges[j];
                let shared = segment_intersections(si, sj);
                if shared.is_empty() {
                    continue;
                }
                let adjacent = ri.ring == rj.ring && {
                    let n = self.ring(ri.ring).len();
                    (ri.index + 1) % n == rj.index || (rj.index + 1) % n == ri.index
                };
                if adjacent {
                    // adjacent edges may only share their common vertex
                    if shared.len() == 1 && (shared[0] == si.a || shared[0] == si.b) {
                        continue;
                    }
                }
                return Err(Error::InvalidPolygon(format!(
                    "boundary edges {:?} and {:?} intersect at {:?}",
                    ri, rj, shared[0]
                )));
            }
        }
        for (h, hole) in self.holes.iter().enumerate() {
            if locate_in_ring(&self.outer, &hole[0]) != Location::Inside {
                return Err(Error::InvalidPolygon(format!("hole {h} is not inside the outer ring")));
            }
            for (g, other) in self.holes.iter().enumerate() {
                if g != h && locate_in_ring(other, &hole[0]) != Location::Outside {
                    return Err(Error::InvalidPolygon(format!("holes {g} and {h} overlap")));
                }
            }
        }
        Ok(())
    }
}
