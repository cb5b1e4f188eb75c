//! Two-robot feasibility inside a polygonal domain.
//!
//! Every feasible configuration can be pushed, without changing the order of
//! the robots, to a pair of corners: points that are vertices of the eroded
//! region or corners of its horizontal and vertical decompositions. Two
//! configurations are mutually reachable exactly when their corner pairs lie
//! in the same component of the corner-pair graph, whose edges move one robot
//! along one boundary or cut piece while the other waits.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::{
    decompose, inner_minkowski, segment_meets_open_box, Axis, Decomposition, Point, PolygonalDomain, Segment,
};
use crate::model::{Configuration, RobotShape, Schedule, Trajectory};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct FeasibilityStructure<T> {
    pub domain: PolygonalDomain<T>,
    pub shape: RobotShape<T>,
    /// Components of the region of feasible reference points.
    pub regions: Vec<PolygonalDomain<T>>,
    pub horizontal: Vec<Decomposition<T>>,
    pub vertical: Vec<Decomposition<T>>,
    /// The corner set, sorted.
    pub corners: Vec<Point<T>>,
    index: BTreeMap<Point<T>, usize>,
    /// Corner adjacency along boundary edges and decomposition cuts.
    network: Vec<Vec<usize>>,
    /// Component label of each feasible corner pair, row-major.
    labels: Vec<Option<usize>>,
    components: usize,
}

/// Result of pushing a configuration to a corner pair.
#[derive(Clone, Debug)]
pub struct Normalization<T> {
    pub corner: (usize, usize),
    pub configuration: Configuration<T>,
    /// Decoupled motion from the input to the corner pair.
    pub schedule: Schedule<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Push {
    Left,
    Right,
    Down,
    Up,
}

/// Builds the structure for two unit squares.
pub fn build_feasibility<T: Scalar>(s: &PolygonalDomain<T>) -> Result<FeasibilityStructure<T>> {
    build_feasibility_for(s, RobotShape::unit())
}

/// Builds the structure for two robots of the same shape.
pub fn build_feasibility_for<T: Scalar>(s: &PolygonalDomain<T>, shape: RobotShape<T>) -> Result<FeasibilityStructure<T>> {
    let regions = inner_minkowski(s, &shape.half_width, &shape.half_height);
    if regions.is_empty() {
        return Err(Error::EmptyErosion);
    }
    let horizontal: Vec<Decomposition<T>> = regions.iter().map(|r| decompose(r, Axis::Horizontal)).collect();
    let vertical: Vec<Decomposition<T>> = regions.iter().map(|r| decompose(r, Axis::Vertical)).collect();

    let mut corner_set = BTreeSet::new();
    for (r, reg) in regions.iter().enumerate() {
        corner_set.extend(reg.vertices());
        for d in [&horizontal[r], &vertical[r]] {
            for t in &d.trapezoids {
                corner_set.extend(t.vertices.iter().cloned());
            }
        }
    }
    let corners: Vec<Point<T>> = corner_set.into_iter().collect();
    let index: BTreeMap<Point<T>, usize> = corners.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    let mut links: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); corners.len()];
    for (r, reg) in regions.iter().enumerate() {
        let mut segs: Vec<Segment<T>> = reg.edges().into_iter().map(|(_, e)| e).collect();
        for d in [&horizontal[r], &vertical[r]] {
            for t in &d.trapezoids {
                let n = t.vertices.len();
                for i in 0..n {
                    segs.push(Segment::new(t.vertices[i].clone(), t.vertices[(i + 1) % n].clone()));
                }
            }
        }
        for seg in segs {
            if seg.a == seg.b {
                continue;
            }
            let mut on: Vec<(T, usize)> =
                corners.iter().enumerate().filter(|(_, p)| seg.contains(p)).map(|(i, p)| (seg.param_of(p), i)).collect();
            on.sort();
            for w in on.windows(2) {
                links[w[0].1].insert(w[1].1);
                links[w[1].1].insert(w[0].1);
            }
        }
    }
    let network: Vec<Vec<usize>> = links.into_iter().map(|s| s.into_iter().collect()).collect();

    let mut f = FeasibilityStructure {
        domain: s.clone(),
        shape,
        regions,
        horizontal,
        vertical,
        corners,
        index,
        network,
        labels: Vec::new(),
        components: 0,
    };
    f.label_components();
    Ok(f)
}

impl<T: Scalar> FeasibilityStructure<T> {
    pub fn corner_count(&self) -> usize {
        self.corners.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Corners adjacent to corner `i` in the boundary and cut network.
    pub fn network_neighbors(&self, i: usize) -> &[usize] {
        &self.network[i]
    }

    pub fn corner_index(&self, p: &Point<T>) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Whether robots at corners `i` and `j` are separated.
    pub fn is_feasible_pair(&self, i: usize, j: usize) -> bool {
        let (p, q) = (&self.corners[i], &self.corners[j]);
        let dx = (p.x.clone() - q.x.clone()).abs();
        let dy = (p.y.clone() - q.y.clone()).abs();
        dx >= self.width() || dy >= self.height()
    }

    /// Component label of the feasible corner pair `(i, j)`.
    pub fn component_of(&self, i: usize, j: usize) -> Option<usize> {
        self.labels[i * self.corners.len() + j]
    }

    /// Feasible corner pairs reachable from `(i, j)` by one single-robot move.
    pub fn pair_neighbors(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &a in &self.network[i] {
            if self.move_is_free(i, a, j) {
                out.push((a, j));
            }
        }
        for &b in &self.network[j] {
            if self.move_is_free(j, b, i) {
                out.push((i, b));
            }
        }
        out
    }

    pub fn pair_edge_count(&self) -> usize {
        let n = self.corners.len();
        let mut count = 0;
        for i in 0..n {
            for j in 0..n {
                if self.labels[i * n + j].is_some() {
                    count += self.pair_neighbors(i, j).len();
                }
            }
        }
        count / 2
    }

    fn width(&self) -> T {
        self.shape.half_width.clone() * T::two()
    }

    fn height(&self) -> T {
        self.shape.half_height.clone() * T::two()
    }

    /// Whether a robot moving straight from corner `from` to corner `to`
    /// keeps its box interior-disjoint from a robot resting at `other`.
    fn move_is_free(&self, from: usize, to: usize, other: usize) -> bool {
        let q = &self.corners[other];
        let lo = Point::new(q.x.clone() - self.width(), q.y.clone() - self.height());
        let hi = Point::new(q.x.clone() + self.width(), q.y.clone() + self.height());
        let seg = Segment::new(self.corners[from].clone(), self.corners[to].clone());
        !segment_meets_open_box(&seg, &lo, &hi)
    }

    fn label_components(&mut self) {
        let n = self.corners.len();
        let mut labels: Vec<Option<usize>> = vec![None; n * n];
        let mut next = 0;
        for i in 0..n {
            for j in 0..n {
                if i == j || labels[i * n + j].is_some() || !self.is_feasible_pair(i, j) {
                    continue;
                }
                labels[i * n + j] = Some(next);
                let mut queue = VecDeque::from([(i, j)]);
                while let Some((a, b)) = queue.pop_front() {
                    for (c, d) in self.pair_neighbors(a, b) {
                        if labels[c * n + d].is_none() {
                            labels[c * n + d] = Some(next);
                            queue.push_back((c, d));
                        }
                    }
                }
                next += 1;
            }
        }
        self.labels = labels;
        self.components = next;
    }

    fn region_of(&self, p: &Point<T>) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(p))
    }

    fn check_input(&self, c: &Configuration<T>) -> Result<()> {
        if c.k() != 2 {
            return Err(Error::RobotCount(format!("feasibility needs two robots, got {}", c.k())));
        }
        if c.shapes.iter().any(|s| *s != self.shape) {
            return Err(Error::Invalid("robot shapes differ from the structure's shape".into()));
        }
        if let Some((i, j)) = c.first_overlap() {
            return Err(Error::InfeasibleConfiguration(i, j));
        }
        if c.points.iter().any(|p| self.region_of(p).is_none()) {
            return Err(Error::NotInDomain);
        }
        Ok(())
    }

    /// Moves `p` straight in direction `dir` until it reaches the region
    /// boundary, then along that boundary piece to its far end unless the
    /// hit point is already a corner. Pieces parallel to the push slide away
    /// from `other`. Returns the polyline from `p` to a corner.
    fn push(&self, p: &Point<T>, other: &Point<T>, dir: Push) -> Vec<Point<T>> {
        let r = self.region_of(p).expect("checked input");
        let (dec, s) = match dir {
            Push::Left | Push::Right => (&self.horizontal[r], &p.y),
            Push::Down | Push::Up => (&self.vertical[r], &p.x),
        };
        let t = &dec.trapezoids[dec.locate(p).expect("point inside its region")];
        let (hit, side) = match dir {
            Push::Left | Push::Down => (t.low_side_at(s), &t.low_side.segment),
            Push::Right | Push::Up => (t.high_side_at(s), &t.high_side.segment),
        };
        if self.index.contains_key(&hit) {
            return vec![p.clone(), hit.clone(), hit];
        }
        // larger key means farther from the bisector, then farther from `other`
        let key = |q: &Point<T>| -> (T, T) {
            match dir {
                Push::Left => (-q.x.clone(), away(&q.y, &p.y, &other.y)),
                Push::Right => (q.x.clone(), away(&q.y, &p.y, &other.y)),
                Push::Down => (-q.y.clone(), away(&q.x, &p.x, &other.x)),
                Push::Up => (q.y.clone(), away(&q.x, &p.x, &other.x)),
            }
        };
        let end = if key(&side.a) >= key(&side.b) { side.a.clone() } else { side.b.clone() };
        vec![p.clone(), hit, end]
    }

    /// Pushes both robots away from a separating axis-parallel line onto a
    /// corner pair. The line is chosen by the larger separation gap; ties
    /// use a horizontal line.
    pub fn normalize_to_corner(&self, c: &Configuration<T>) -> Result<Normalization<T>> {
        self.check_input(c)?;
        let (p, q) = (&c.points[0], &c.points[1]);
        let gap_x = (p.x.clone() - q.x.clone()).abs() - self.width();
        let gap_y = (p.y.clone() - q.y.clone()).abs() - self.height();
        let (d0, d1) = if gap_x > gap_y {
            if p.x < q.x {
                (Push::Left, Push::Right)
            } else {
                (Push::Right, Push::Left)
            }
        } else if p.y < q.y {
            (Push::Down, Push::Up)
        } else {
            (Push::Up, Push::Down)
        };
        let path0 = self.push(p, q, d0);
        let path1 = self.push(q, p, d1);
        let corner = (
            self.corner_index(&path0[2]).expect("pushes end at corners"),
            self.corner_index(&path1[2]).expect("pushes end at corners"),
        );
        let configuration = Configuration::unchecked(vec![path0[2].clone(), path1[2].clone()], c.shapes.clone());
        let schedule = decoupled_schedule(c, &[(0, path0), (1, path1)]);
        Ok(Normalization { corner, configuration, schedule })
    }

    /// Whether `b` can be reached from `a` without collisions inside the domain.
    pub fn query_feasible(&self, a: &Configuration<T>, b: &Configuration<T>) -> Result<bool> {
        let na = self.normalize_to_corner(a)?;
        let nb = self.normalize_to_corner(b)?;
        Ok(self.component_of(na.corner.0, na.corner.1) == self.component_of(nb.corner.0, nb.corner.1))
    }

    /// A path for a single robot from `p` to `q` inside the feasible region,
    /// through the corner network.
    pub fn single_robot_path(&self, p: &Point<T>, q: &Point<T>) -> Result<Vec<Point<T>>> {
        let (rp, rq) = (self.region_of(p), self.region_of(q));
        if rp.is_none() || rq.is_none() {
            return Err(Error::NotInDomain);
        }
        if p == q {
            return Ok(vec![p.clone()]);
        }
        if rp != rq {
            return Err(Error::NotReachable);
        }
        let head = self.push(p, p, Push::Left);
        let tail = self.push(q, q, Push::Left);
        let from = self.corner_index(&head[2]).expect("pushes end at corners");
        let to = self.corner_index(&tail[2]).expect("pushes end at corners");
        let mut parent = vec![usize::MAX; self.corners.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.network[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[to] == usize::MAX {
            return Err(Error::NotReachable);
        }
        let mut mid = vec![to];
        while *mid.last().expect("nonempty") != from {
            let u = *mid.last().expect("nonempty");
            mid.push(parent[u]);
        }
        let mut out = head;
        out.extend(mid.into_iter().rev().map(|i| self.corners[i].clone()));
        out.extend(tail.into_iter().rev());
        out.dedup();
        Ok(out)
    }

    /// Shortest sequence of feasible corner pairs from `from` to `to`.
    pub fn corner_path(&self, from: (usize, usize), to: (usize, usize)) -> Option<Vec<(usize, usize)>> {
        let n = self.corners.len();
        let mut parent: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        parent.insert(from, from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![u];
                let mut cur = u;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for v in self.pair_neighbors(u.0, u.1) {
                debug_assert!(v.0 < n && v.1 < n);
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(v) {
                    e.insert(u);
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// A collision-free schedule from `a` to `b` inside the domain in which
    /// at most one robot moves at any time.
    pub fn reconstruct_zero_exposure_schedule(&self, a: &Configuration<T>, b: &Configuration<T>) -> Result<Schedule<T>> {
        let na = self.normalize_to_corner(a)?;
        let nb = self.normalize_to_corner(b)?;
        let path = self.corner_path(na.corner, nb.corner).ok_or(Error::NotReachable)?;
        let mut moves = Vec::with_capacity(path.len());
        for w in path.windows(2) {
            let robot = if w[0].0 != w[1].0 { 0 } else { 1 };
            let (from, to) = if robot == 0 { (w[0].0, w[1].0) } else { (w[0].1, w[1].1) };
            moves.push((robot, vec![self.corners[from].clone(), self.corners[to].clone()]));
        }
        let middle = decoupled_schedule(&na.configuration, &moves);
        Ok(na.schedule.then(&middle).then(&nb.schedule.reversed()))
    }
}

/// Signed displacement of `v` from `own` in the direction pointing away from
/// `other`; toward lower coordinates when the two agree.
fn away<T: Scalar>(v: &T, own: &T, other: &T) -> T {
    if own > other {
        v.clone() - own.clone()
    } else {
        own.clone() - v.clone()
    }
}

/// Runs the given single-robot polylines one after another at unit speed
/// while the other robots wait, starting at time zero from `start`.
pub fn decoupled_schedule<T: Scalar>(start: &Configuration<T>, moves: &[(usize, Vec<Point<T>>)]) -> Schedule<T> {
    let mut bps: Vec<Vec<(T, Point<T>)>> = start.points.iter().map(|p| vec![(T::zero(), p.clone())]).collect();
    let mut t = T::zero();
    for (robot, poly) in moves {
        for q in poly.iter().skip(1) {
            let last = bps[*robot].last().expect("nonempty").1.clone();
            t = t + crate::geom::l1_dist(&last, q);
            bps[*robot].push((t.clone(), q.clone()));
        }
        for b in bps.iter_mut() {
            let last = b.last().expect("nonempty").1.clone();
            b.push((t.clone(), last));
        }
    }
    let trajectories = bps.into_iter().map(|b| Trajectory::new(b).expect("times are nondecreasing")).collect();
    Schedule { trajectories, shapes: start.shapes.clone() }
}
