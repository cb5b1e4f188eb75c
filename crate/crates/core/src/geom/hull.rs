use std::cmp::Ordering;

use crate::geom::point::{orient, Point};
use crate::geom::polygon::{locate_in_ring, Location};
use crate::lp::{LinExpr, LinearProgram, LpStatus, Relation};
use crate::scalar::Scalar;

/// Convex polygon with counterclockwise vertices and no collinear triples.
/// May degenerate to a segment (two vertices) or a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon<T> {
    pub vertices: Vec<Point<T>>,
}

impl<T: Scalar> ConvexPolygon<T> {
    pub fn hull_of(points: &[Point<T>]) -> Self {
        ConvexPolygon { vertices: convex_hull(points) }
    }

    pub fn width(&self) -> T {
        let xs = self.vertices.iter().map(|p| &p.x);
        let (lo, hi) = min_max(xs);
        hi - lo
    }

    pub fn height(&self) -> T {
        let ys = self.vertices.iter().map(|p| &p.y);
        let (lo, hi) = min_max(ys);
        hi - lo
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => crate::geom::Segment::new(self.vertices[0].clone(), self.vertices[1].clone()).contains(p),
            _ => locate_in_ring(&self.vertices, p) != Location::Outside,
        }
    }

    /// Half-planes `a x + b y <= c` whose intersection is the polygon
    /// (only meaningful with at least three vertices).
    pub fn half_planes(&self) -> Vec<(T, T, T)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let p = &self.vertices[i];
                let q = &self.vertices[(i + 1) % n];
                let a = q.y.clone() - p.y.clone();
                let b = p.x.clone() - q.x.clone();
                let c = a.clone() * p.x.clone() + b.clone() * p.y.clone();
                (a, b, c)
            })
            .collect()
    }
}

impl<T: Scalar> ConvexPolygon<T> {
    /// Constrains the LP point `(x, y)` to lie in the polygon, including the
    /// degenerate point and segment cases.
    pub fn add_membership(&self, lp: &mut LinearProgram<T>, x: &LinExpr<T>, y: &LinExpr<T>) {
        match self.vertices.len() {
            0 => lp.add_constraint(LinExpr::new(), Relation::Ge, T::one()),
            1 => {
                let p = &self.vertices[0];
                lp.add_constraint(x.clone(), Relation::Eq, p.x.clone());
                lp.add_constraint(y.clone(), Relation::Eq, p.y.clone());
            }
            2 => {
                let (p, q) = (&self.vertices[0], &self.vertices[1]);
                let a = q.y.clone() - p.y.clone();
                let b = p.x.clone() - q.x.clone();
                let c = a.clone() * p.x.clone() + b.clone() * p.y.clone();
                lp.add_constraint(x.clone().scale(&a).add(&y.clone().scale(&b)), Relation::Eq, c);
                // stay between the endpoints along the segment direction
                let (dx, dy) = (q.x.clone() - p.x.clone(), q.y.clone() - p.y.clone());
                let along = x.clone().scale(&dx).add(&y.clone().scale(&dy));
                lp.add_constraint(along.clone(), Relation::Ge, dx.clone() * p.x.clone() + dy.clone() * p.y.clone());
                lp.add_constraint(along, Relation::Le, dx * q.x.clone() + dy * q.y.clone());
            }
            _ => {
                for (a, b, c) in self.half_planes() {
                    lp.add_constraint(x.clone().scale(&a).add(&y.clone().scale(&b)), Relation::Le, c);
                }
            }
        }
    }
}

fn min_max<'a, T: Scalar>(mut it: impl Iterator<Item = &'a T>) -> (T, T) {
    let first = it.next().expect("nonempty").clone();
    let mut lo = first.clone();
    let mut hi = first;
    for v in it {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    (lo, hi)
}

/// Andrew's monotone chain; returns counterclockwise hull without collinear points.
pub fn convex_hull<T: Scalar>(points: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Ordering::Greater {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Ordering::Greater {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether some axis-aligned box with the given half-extents fits inside the
/// convex polygon. Decided by a feasibility program for the box center with
/// every supporting half-plane shifted inward by the box's support value.
pub fn contains_box<T: Scalar>(z: &ConvexPolygon<T>, half_w: &T, half_h: &T) -> bool {
    if z.vertices.len() < 3 {
        return false;
    }
    let mut lp = LinearProgram::new();
    let cx = lp.free_var("cx");
    let cy = lp.free_var("cy");
    for (a, b, c) in z.half_planes() {
        let support = a.abs() * half_w.clone() + b.abs() * half_h.clone();
        let expr = LinExpr::new().term(cx, a).term(cy, b);
        lp.add_constraint(expr, Relation::Le, c - support);
    }
    lp.minimize(LinExpr::new());
    lp.solve().status == LpStatus::Optimal
}

pub fn contains_unit_square<T: Scalar>(z: &ConvexPolygon<T>) -> bool {
    contains_box(z, &T::half(), &T::half())
}
