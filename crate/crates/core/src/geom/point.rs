use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{max_of, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(T::int(x), T::int(y))
    }

    pub fn origin() -> Self {
        Point::new(T::zero(), T::zero())
    }

    pub fn add(&self, o: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn sub(&self, o: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn scale(&self, s: &T) -> Point<T> {
        Point::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn midpoint(&self, o: &Point<T>) -> Point<T> {
        self.add(o).scale(&T::half())
    }

    /// Point at parameter `t` on the segment `self -> o`.
    pub fn lerp(&self, o: &Point<T>, t: &T) -> Point<T> {
        self.add(&o.sub(self).scale(t))
    }

    pub fn dot(&self, o: &Point<T>) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn cross(&self, o: &Point<T>) -> T {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn swapped(&self) -> Point<T> {
        Point::new(self.y.clone(), self.x.clone())
    }

    pub fn l1_norm(&self) -> T {
        self.x.abs() + self.y.abs()
    }

    pub fn linf_norm(&self) -> T {
        max_of(&self.x.abs(), &self.y.abs())
    }
}

impl<T: fmt::Debug> fmt::Debug for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `|x(p)-x(q)| + |y(p)-y(q)|`.
pub fn l1_dist<T: Scalar>(p: &Point<T>, q: &Point<T>) -> T {
    p.sub(q).l1_norm()
}

/// `max(|x(p)-x(q)|, |y(p)-y(q)|)`.
pub fn linf_dist<T: Scalar>(p: &Point<T>, q: &Point<T>) -> T {
    p.sub(q).linf_norm()
}

/// Sign of the turn `a -> b -> c`: positive for counterclockwise.
pub fn orient<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> Ordering {
    b.sub(a).cross(&c.sub(a)).cmp(&T::zero())
}

/// Total order on directions by counterclockwise angle from the positive x axis.
pub fn angle_cmp<T: Scalar>(u: &Point<T>, v: &Point<T>) -> Ordering {
    fn half_plane<T: Scalar>(p: &Point<T>) -> u8 {
        if p.y > T::zero() || (p.y.is_zero() && p.x > T::zero()) {
            0
        } else {
            1
        }
    }
    half_plane(u)
        .cmp(&half_plane(v))
        .then_with(|| T::zero().cmp(&u.cross(v)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment<T> {
    pub a: Point<T>,
    pub b: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point<T>, b: Point<T>) -> Self {
        Segment { a, b }
    }

    pub fn dir(&self) -> Point<T> {
        self.b.sub(&self.a)
    }

    pub fn swapped(&self) -> Segment<T> {
        Segment::new(self.a.swapped(), self.b.swapped())
    }

    pub fn reversed(&self) -> Segment<T> {
        Segment::new(self.b.clone(), self.a.clone())
    }

    /// Closed containment of a point on the segment.
    pub fn contains(&self, p: &Point<T>) -> bool {
        if orient(&self.a, &self.b, p) != Ordering::Equal {
            return false;
        }
        let d = self.dir();
        let t = p.sub(&self.a).dot(&d);
        t >= T::zero() && t <= d.dot(&d)
    }

    /// x coordinate of the supporting line at height `y` (segment must not be horizontal).
    pub fn x_at(&self, y: &T) -> T {
        let dy = self.b.y.clone() - self.a.y.clone();
        self.a.x.clone() + (self.b.x.clone() - self.a.x.clone()) * (y.clone() - self.a.y.clone()) / dy
    }

    /// Parameter of a point known to lie on the supporting line.
    pub fn param_of(&self, p: &Point<T>) -> T {
        let d = self.dir();
        p.sub(&self.a).dot(&d) / d.dot(&d)
    }

    pub fn l1_len(&self) -> T {
        l1_dist(&self.a, &self.b)
    }
}

/// Points shared by two closed segments: empty, one point, or the two endpoints
/// of a collinear overlap.
pub fn segment_intersections<T: Scalar>(s: &Segment<T>, t: &Segment<T>) -> Vec<Point<T>> {
    let d1 = s.dir();
    let d2 = t.dir();
    let denom = d1.cross(&d2);
    if denom.is_zero() {
        if orient(&s.a, &s.b, &t.a) != Ordering::Equal {
            return Vec::new();
        }
        // collinear: clip t's endpoints against s and vice versa
        let mut pts: Vec<Point<T>> = Vec::new();
        for p in [&s.a, &s.b] {
            if t.contains(p) {
                pts.push(p.clone());
            }
        }
        for p in [&t.a, &t.b] {
            if s.contains(p) {
                pts.push(p.clone());
            }
        }
        pts.sort();
        pts.dedup();
        if pts.len() > 2 {
            let first = pts[0].clone();
            let last = pts[pts.len() - 1].clone();
            pts = vec![first, last];
        }
        return pts;
    }
    let w = t.a.sub(&s.a);
    let u = w.cross(&d2) / denom.clone();
    let v = w.cross(&d1) / denom;
    let zero = T::zero();
    let one = T::one();
    if u >= zero && u <= one && v >= zero && v <= one {
        vec![s.a.lerp(&s.b, &u)]
    } else {
        Vec::new()
    }
}
