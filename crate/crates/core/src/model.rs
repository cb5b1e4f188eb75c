//! Configurations, schedules, objective measurement and exact validation.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{box_fits, l1_dist, swept_box_fits, Point, PolygonalDomain};
use crate::scalar::{max_of, Scalar};

/// Planning objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    Makespan,
    Sum,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "makespan" => Ok(Objective::Makespan),
            "sum" => Ok(Objective::Sum),
            _ => Err(Error::Invalid(format!("unknown objective {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RobotShape<T> {
    pub half_width: T,
    pub half_height: T,
}

impl<T: Scalar> RobotShape<T> {
    pub fn new(half_width: T, half_height: T) -> Result<Self> {
        if half_width <= T::zero() || half_height <= T::zero() {
            return Err(Error::Invalid("robot half-extents must be positive".into()));
        }
        Ok(RobotShape { half_width, half_height })
    }

    pub fn unit() -> Self {
        RobotShape { half_width: T::half(), half_height: T::half() }
    }

    /// Full-size rectangle `w x h`.
    pub fn rect(w: T, h: T) -> Result<Self> {
        Self::new(w / T::two(), h / T::two())
    }
}

/// Required center offsets `(sx, sy)` for two robots to be separated along x or y.
pub fn pair_offsets<T: Scalar>(a: &RobotShape<T>, b: &RobotShape<T>) -> (T, T) {
    (
        a.half_width.clone() + b.half_width.clone(),
        a.half_height.clone() + b.half_height.clone(),
    )
}

/// `max(|dx| - sx, |dy| - sy)`; nonnegative exactly when the interiors are disjoint.
pub fn separation<T: Scalar>(p: &Point<T>, q: &Point<T>, sa: &RobotShape<T>, sb: &RobotShape<T>) -> T {
    let (sx, sy) = pair_offsets(sa, sb);
    let d = p.sub(q);
    max_of(&(d.x.abs() - sx), &(d.y.abs() - sy))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration<T> {
    pub points: Vec<Point<T>>,
    pub shapes: Vec<RobotShape<T>>,
}

impl<T: Scalar> Configuration<T> {
    /// Validating constructor: rejects overlapping robots.
    pub fn new(points: Vec<Point<T>>, shapes: Vec<RobotShape<T>>) -> Result<Self> {
        if points.len() != shapes.len() {
            return Err(Error::RobotCount(format!("{} points but {} shapes", points.len(), shapes.len())));
        }
        let c = Configuration { points, shapes };
        if let Some((i, j)) = c.first_overlap() {
            return Err(Error::InfeasibleConfiguration(i, j));
        }
        Ok(c)
    }

    pub fn unit(points: Vec<Point<T>>) -> Result<Self> {
        let shapes = vec![RobotShape::unit(); points.len()];
        Self::new(points, shapes)
    }

    pub fn unchecked(points: Vec<Point<T>>, shapes: Vec<RobotShape<T>>) -> Self {
        Configuration { points, shapes }
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn separation(&self, i: usize, j: usize) -> T {
        separation(&self.points[i], &self.points[j], &self.shapes[i], &self.shapes[j])
    }

    pub fn first_overlap(&self) -> Option<(usize, usize)> {
        for i in 0..self.k() {
            for j in (i + 1)..self.k() {
                if self.separation(i, j) < T::zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_feasible(&self) -> bool {
        self.first_overlap().is_none()
    }

    /// Sub-configuration of the given robots.
    pub fn select(&self, idx: &[usize]) -> Self {
        Configuration {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            shapes: idx.iter().map(|&i| self.shapes[i].clone()).collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Configuration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `max_i |a_i - b_i|`.
pub fn diameter<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> T {
    a.points.iter().zip(&b.points).fold(T::zero(), |m, (p, q)| max_of(&m, &l1_dist(p, q)))
}

/// `sum_i |a_i - b_i|`.
pub fn distance_sum<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> T {
    a.points.iter().zip(&b.points).fold(T::zero(), |s, (p, q)| s + l1_dist(p, q))
}

/// Piecewise-linear motion through time-stamped positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory<T> {
    pub breakpoints: Vec<(T, Point<T>)>,
}

impl<T: Scalar> Trajectory<T> {
    /// Breakpoints must have nondecreasing times; zero-duration steps are
    /// collapsed when they do not move.
    pub fn new(breakpoints: Vec<(T, Point<T>)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Invalid("trajectory without breakpoints".into()));
        }
        let mut out: Vec<(T, Point<T>)> = Vec::with_capacity(breakpoints.len());
        for (t, p) in breakpoints {
            if let Some((lt, lp)) = out.last() {
                if t < *lt {
                    return Err(Error::Invalid("trajectory times decrease".into()));
                }
                if t == *lt {
                    if p != *lp {
                        return Err(Error::Invalid("trajectory jumps at a single instant".into()));
                    }
                    continue;
                }
            }
            out.push((t, p));
        }
        Ok(Trajectory { breakpoints: out })
    }

    pub fn stationary(p: Point<T>, t0: T, t1: T) -> Self {
        if t0 == t1 {
            Trajectory { breakpoints: vec![(t0, p)] }
        } else {
            Trajectory { breakpoints: vec![(t0, p.clone()), (t1, p)] }
        }
    }

    pub fn start_time(&self) -> &T {
        &self.breakpoints[0].0
    }

    pub fn end_time(&self) -> &T {
        &self.breakpoints[self.breakpoints.len() - 1].0
    }

    pub fn start(&self) -> &Point<T> {
        &self.breakpoints[0].1
    }

    pub fn end(&self) -> &Point<T> {
        &self.breakpoints[self.breakpoints.len() - 1].1
    }

    /// Position at time `t`, clamped to the trajectory's interval.
    pub fn position_at(&self, t: &T) -> Point<T> {
        let bp = &self.breakpoints;
        if t <= &bp[0].0 {
            return bp[0].1.clone();
        }
        for w in bp.windows(2) {
            let (t0, p0) = &w[0];
            let (t1, p1) = &w[1];
            if t <= t1 {
                let s = (t.clone() - t0.clone()) / (t1.clone() - t0.clone());
                return p0.lerp(p1, &s);
            }
        }
        bp[bp.len() - 1].1.clone()
    }

    pub fn length(&self) -> T {
        self.breakpoints.windows(2).fold(T::zero(), |acc, w| acc + l1_dist(&w[0].1, &w[1].1))
    }

    /// L1 length traveled during `[a, b]`.
    pub fn length_between(&self, a: &T, b: &T) -> T {
        let mut times: Vec<T> = vec![a.clone()];
        times.extend(self.breakpoints.iter().map(|(t, _)| t.clone()).filter(|t| t > a && t < b));
        times.push(b.clone());
        times
            .windows(2)
            .fold(T::zero(), |acc, w| acc + l1_dist(&self.position_at(&w[0]), &self.position_at(&w[1])))
    }

    /// Number of points on the image where two segments of different
    /// orientation meet.
    pub fn turns(&self) -> usize {
        let mut pts: Vec<&Point<T>> = Vec::new();
        for (_, p) in &self.breakpoints {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        let mut turns = 0;
        for w in pts.windows(3) {
            let d1 = w[1].sub(w[0]);
            let d2 = w[2].sub(w[1]);
            let same = d1.cross(&d2).is_zero() && d1.dot(&d2) > T::zero();
            if !same {
                turns += 1;
            }
        }
        turns
    }

    pub fn shifted(&self, dt: &T) -> Self {
        Trajectory { breakpoints: self.breakpoints.iter().map(|(t, p)| (t.clone() + dt.clone(), p.clone())).collect() }
    }

    /// Extends the trajectory with a stationary wait up to `t`.
    pub fn hold_until(&mut self, t: &T) {
        if t > self.end_time() {
            let p = self.end().clone();
            self.breakpoints.push((t.clone(), p));
        }
    }

    /// Appends `other`, whose start must coincide with this trajectory's end.
    pub fn append(&mut self, other: &Trajectory<T>) {
        debug_assert_eq!(self.end(), other.start());
        debug_assert_eq!(self.end_time(), other.start_time());
        for (t, p) in other.breakpoints.iter().skip(1) {
            self.breakpoints.push((t.clone(), p.clone()));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule<T> {
    pub trajectories: Vec<Trajectory<T>>,
    pub shapes: Vec<RobotShape<T>>,
}

impl<T: Scalar> Schedule<T> {
    pub fn stationary(c: &Configuration<T>, t0: T, t1: T) -> Self {
        Schedule {
            trajectories: c.points.iter().map(|p| Trajectory::stationary(p.clone(), t0.clone(), t1.clone())).collect(),
            shapes: c.shapes.clone(),
        }
    }

    pub fn k(&self) -> usize {
        self.trajectories.len()
    }

    pub fn start_time(&self) -> T {
        self.trajectories[0].start_time().clone()
    }

    pub fn end_time(&self) -> T {
        self.trajectories[0].end_time().clone()
    }

    pub fn common_interval(&self) -> Result<(T, T)> {
        let t0 = self.start_time();
        let t1 = self.end_time();
        if self.trajectories.iter().any(|m| *m.start_time() != t0 || *m.end_time() != t1) {
            return Err(Error::MismatchedIntervals);
        }
        Ok((t0, t1))
    }

    pub fn configuration_at(&self, t: &T) -> Configuration<T> {
        Configuration::unchecked(self.trajectories.iter().map(|m| m.position_at(t)).collect(), self.shapes.clone())
    }

    pub fn start_configuration(&self) -> Configuration<T> {
        Configuration::unchecked(self.trajectories.iter().map(|m| m.start().clone()).collect(), self.shapes.clone())
    }

    pub fn end_configuration(&self) -> Configuration<T> {
        Configuration::unchecked(self.trajectories.iter().map(|m| m.end().clone()).collect(), self.shapes.clone())
    }

    /// Sorted distinct breakpoint times of all trajectories.
    pub fn breakpoint_times(&self) -> Vec<T> {
        let mut ts: Vec<T> = self.trajectories.iter().flat_map(|m| m.breakpoints.iter().map(|(t, _)| t.clone())).collect();
        ts.sort();
        ts.dedup();
        ts
    }

    pub fn makespan(&self) -> T {
        self.end_time() - self.start_time()
    }

    pub fn sum(&self) -> T {
        self.trajectories.iter().fold(T::zero(), |acc, m| acc + m.length())
    }

    /// `t -> M(t1 - t + t0)`.
    pub fn reversed(&self) -> Self {
        let t0 = self.start_time();
        let t1 = self.end_time();
        let trajectories = self
            .trajectories
            .iter()
            .map(|m| {
                let bps = m
                    .breakpoints
                    .iter()
                    .rev()
                    .map(|(t, p)| (t1.clone() - t.clone() + t0.clone(), p.clone()))
                    .collect();
                Trajectory { breakpoints: bps }
            })
            .collect();
        Schedule { trajectories, shapes: self.shapes.clone() }
    }

    pub fn shifted(&self, dt: &T) -> Self {
        Schedule { trajectories: self.trajectories.iter().map(|m| m.shifted(dt)).collect(), shapes: self.shapes.clone() }
    }

    /// Runs `next` right after `self`; `next` must start where `self` ends.
    pub fn then(&self, next: &Schedule<T>) -> Self {
        let end = self.end_time();
        let next = next.shifted(&(end.clone() - next.start_time()));
        let mut out = self.clone();
        for (m, n) in out.trajectories.iter_mut().zip(&next.trajectories) {
            m.hold_until(&end);
            m.append(n);
        }
        out
    }

    /// Restriction to the given robots.
    pub fn select(&self, idx: &[usize]) -> Self {
        Schedule {
            trajectories: idx.iter().map(|&i| self.trajectories[i].clone()).collect(),
            shapes: idx.iter().map(|&i| self.shapes[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<T> {
    /// Robots `i` and `j` overlap at time `t` with the given (negative) separation.
    Collision { i: usize, j: usize, t: T, separation: T },
    /// Robot moves faster than unit L1 speed on `[t0, t1]`.
    Speed { robot: usize, t0: T, t1: T },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<T> {
    pub valid: bool,
    /// Number of (time segment, robot pair) checks performed.
    pub checks: usize,
    pub violations: Vec<Violation<T>>,
    pub makespan: T,
    pub sum: T,
}

impl<T: Scalar> ValidationReport<T> {
    pub fn first_violation(&self) -> Option<&Violation<T>> {
        self.violations.first()
    }
}

/// Candidate times in `[t0, t1]` where `max(|dx|-sx, |dy|-sy)` can attain its
/// minimum, for gaps affine in time.
fn separation_candidates<T: Scalar>(t0: &T, t1: &T, dx: (&T, &T), dy: (&T, &T), sx: &T, sy: &T) -> Vec<T> {
    let mut ts = vec![t0.clone(), t1.clone()];
    let span = t1.clone() - t0.clone();
    let root = |v0: &T, v1: &T| -> Option<T> {
        // v(t) = v0 + (v1 - v0) * s for s in [0, 1]
        let dv = v1.clone() - v0.clone();
        if dv.is_zero() {
            return None;
        }
        let s = -v0.clone() / dv;
        (s > T::zero() && s < T::one()).then_some(s)
    };
    let mut ss = Vec::new();
    ss.extend(root(dx.0, dx.1));
    ss.extend(root(dy.0, dy.1));
    for a in [T::one(), -T::one()] {
        for b in [T::one(), -T::one()] {
            // a*dx - sx = b*dy - sy
            let f0 = a.clone() * dx.0.clone() - sx.clone() - b.clone() * dy.0.clone() + sy.clone();
            let f1 = a.clone() * dx.1.clone() - sx.clone() - b.clone() * dy.1.clone() + sy.clone();
            ss.extend(root(&f0, &f1));
        }
    }
    for s in ss {
        ts.push(t0.clone() + span.clone() * s);
    }
    ts
}

/// Exact check that the schedule keeps all robots interior-disjoint and
/// within unit L1 speed.
pub fn validate_schedule<T: Scalar>(m: &Schedule<T>) -> Result<ValidationReport<T>> {
    if m.k() != m.shapes.len() {
        return Err(Error::RobotCount("schedule shapes do not match trajectories".into()));
    }
    m.common_interval()?;
    let mut violations = Vec::new();
    for (r, traj) in m.trajectories.iter().enumerate() {
        for w in traj.breakpoints.windows(2) {
            if l1_dist(&w[0].1, &w[1].1) > w[1].0.clone() - w[0].0.clone() {
                violations.push(Violation::Speed { robot: r, t0: w[0].0.clone(), t1: w[1].0.clone() });
            }
        }
    }
    let times = m.breakpoint_times();
    let positions: Vec<Vec<Point<T>>> = times.iter().map(|t| m.trajectories.iter().map(|tr| tr.position_at(t)).collect()).collect();
    let mut checks = 0;
    let k = m.k();
    for i in 0..k {
        for j in (i + 1)..k {
            let (sx, sy) = pair_offsets(&m.shapes[i], &m.shapes[j]);
            let mut reported = false;
            if times.len() == 1 {
                checks += 1;
                let s = separation(&positions[0][i], &positions[0][j], &m.shapes[i], &m.shapes[j]);
                if s < T::zero() {
                    violations.push(Violation::Collision { i, j, t: times[0].clone(), separation: s });
                }
                continue;
            }
            for (u, w) in times.windows(2).enumerate() {
                checks += 1;
                if reported {
                    continue;
                }
                let d0 = positions[u][i].sub(&positions[u][j]);
                let d1 = positions[u + 1][i].sub(&positions[u + 1][j]);
                let cands = separation_candidates(&w[0], &w[1], (&d0.x, &d1.x), (&d0.y, &d1.y), &sx, &sy);
                let span = w[1].clone() - w[0].clone();
                let mut worst: Option<(T, T)> = None;
                for t in cands {
                    let s = (t.clone() - w[0].clone()) / span.clone();
                    let dx = d0.x.clone() + (d1.x.clone() - d0.x.clone()) * s.clone();
                    let dy = d0.y.clone() + (d1.y.clone() - d0.y.clone()) * s;
                    let g = max_of(&(dx.abs() - sx.clone()), &(dy.abs() - sy.clone()));
                    if g < T::zero() && worst.as_ref().map_or(true, |(_, wg)| g < *wg) {
                        worst = Some((t, g));
                    }
                }
                if let Some((t, g)) = worst {
                    violations.push(Violation::Collision { i, j, t, separation: g });
                    reported = true;
                }
            }
        }
    }
    violations.sort_by(|a, b| violation_time(a).cmp(violation_time(b)));
    Ok(ValidationReport { valid: violations.is_empty(), checks, violations, makespan: m.makespan(), sum: m.sum() })
}

fn violation_time<T>(v: &Violation<T>) -> &T {
    match v {
        Violation::Collision { t, .. } => t,
        Violation::Speed { t0, .. } => t0,
    }
}

pub fn measure_makespan<T: Scalar>(m: &Schedule<T>) -> T {
    m.makespan()
}

pub fn measure_sum<T: Scalar>(m: &Schedule<T>) -> T {
    m.sum()
}

/// Every robot's box lies inside a single covering domain.
pub fn is_covered<T: Scalar>(p: &Configuration<T>, cover: &[PolygonalDomain<T>]) -> bool {
    p.points
        .iter()
        .zip(&p.shapes)
        .all(|(q, s)| cover.iter().any(|d| box_fits(d, q, &s.half_width, &s.half_height)))
}

/// Whether every robot's box stays inside `s` for the whole schedule.
pub fn schedule_in_domain<T: Scalar>(m: &Schedule<T>, s: &PolygonalDomain<T>) -> bool {
    m.trajectories.iter().zip(&m.shapes).all(|(tr, sh)| {
        if tr.breakpoints.len() == 1 {
            return box_fits(s, tr.start(), &sh.half_width, &sh.half_height);
        }
        tr.breakpoints.windows(2).all(|w| swept_box_fits(s, &w[0].1, &w[1].1, &sh.half_width, &sh.half_height))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureReport<T> {
    /// Sum over maximal exposed intervals of the longest distance any robot
    /// travels during the interval.
    pub exposure: T,
    /// Total exposed elapsed time.
    pub exposed_time: T,
    pub intervals: Vec<(T, T)>,
}

/// Times in `(t0, t1)` where a box moving linearly from `p0` to `p1` may
/// change its containment status in `d`: a box corner crosses an edge line or
/// a box side crosses a vertex.
fn containment_events<T: Scalar>(
    d: &PolygonalDomain<T>,
    shape: &RobotShape<T>,
    t0: &T,
    t1: &T,
    p0: &Point<T>,
    p1: &Point<T>,
    out: &mut Vec<T>,
) {
    let v = p1.sub(p0);
    if v.x.is_zero() && v.y.is_zero() {
        return;
    }
    let span = t1.clone() - t0.clone();
    let mut push = |s: T| {
        if s > T::zero() && s < T::one() {
            out.push(t0.clone() + span.clone() * s);
        }
    };
    let (hw, hh) = (&shape.half_width, &shape.half_height);
    for (_, e) in d.edges() {
        let n = Point::new(e.b.y.clone() - e.a.y.clone(), e.a.x.clone() - e.b.x.clone());
        let c = n.dot(&e.a);
        let nv = n.dot(&v);
        if nv.is_zero() {
            continue;
        }
        for sx in [T::one(), -T::one()] {
            for sy in [T::one(), -T::one()] {
                let corner = Point::new(p0.x.clone() + sx.clone() * hw.clone(), p0.y.clone() + sy.clone() * hh.clone());
                push((c.clone() - n.dot(&corner)) / nv.clone());
            }
        }
    }
    for q in d.vertices() {
        for s in [T::one(), -T::one()] {
            if !v.x.is_zero() {
                push((q.x.clone() + s.clone() * hw.clone() - p0.x.clone()) / v.x.clone());
            }
            if !v.y.is_zero() {
                push((q.y.clone() + s.clone() * hh.clone() - p0.y.clone()) / v.y.clone());
            }
        }
    }
}

/// Exposure of a schedule: the schedule's interval is split into maximal
/// exposed intervals (a single covered instant splits an interval), and for
/// each of them the longest distance traveled by any robot is added.
pub fn measure_exposure<T: Scalar>(m: &Schedule<T>, cover: &[PolygonalDomain<T>]) -> ExposureReport<T> {
    let mut ts = m.breakpoint_times();
    let base = ts.clone();
    for w in base.windows(2) {
        for (r, tr) in m.trajectories.iter().enumerate() {
            let p0 = tr.position_at(&w[0]);
            let p1 = tr.position_at(&w[1]);
            for d in cover {
                containment_events(d, &m.shapes[r], &w[0], &w[1], &p0, &p1, &mut ts);
            }
        }
    }
    ts.sort();
    ts.dedup();
    let covered_at = |t: &T| is_covered(&m.configuration_at(t), cover);
    let mut intervals: Vec<(T, T)> = Vec::new();
    let mut open: Option<T> = None;
    for (u, t) in ts.iter().enumerate() {
        let here = covered_at(t);
        if here {
            if let Some(s) = open.take() {
                intervals.push((s, t.clone()));
            }
        } else if open.is_none() {
            open = Some(t.clone());
        }
        if let Some(next) = ts.get(u + 1) {
            let mid = (t.clone() + next.clone()) / T::two();
            let inside = covered_at(&mid);
            if !inside && open.is_none() {
                open = Some(t.clone());
            } else if inside {
                if let Some(s) = open.take() {
                    if s != *t || !here {
                        intervals.push((s, t.clone()));
                    }
                }
            }
        }
    }
    if let (Some(s), Some(last)) = (open, ts.last()) {
        intervals.push((s, last.clone()));
    }
    let mut exposure = T::zero();
    let mut exposed_time = T::zero();
    for (a, b) in &intervals {
        exposed_time = exposed_time + (b.clone() - a.clone());
        let longest = m.trajectories.iter().fold(T::zero(), |acc, tr| max_of(&acc, &tr.length_between(a, b)));
        exposure = exposure + longest;
    }
    ExposureReport { exposure, exposed_time, intervals }
}

/// The three-step schedule over `[0, d]`: every robot first moves along x at
/// unit speed, waits until `d - |dy|`, then moves along y.
pub fn three_step_schedule<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, d: &T) -> Schedule<T> {
    let trajectories = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| {
            let dx = (q.x.clone() - p.x.clone()).abs();
            let dy = (q.y.clone() - p.y.clone()).abs();
            let corner = Point::new(q.x.clone(), p.y.clone());
            let bps = vec![
                (T::zero(), p.clone()),
                (dx, corner.clone()),
                (d.clone() - dy, corner),
                (d.clone(), q.clone()),
            ];
            Trajectory::new(bps).expect("three-step breakpoints are monotone")
        })
        .collect();
    Schedule { trajectories, shapes: a.shapes.clone() }
}
