//! Brute-force lattice oracles used as ground truth in tests.
//!
//! Robots live on the lattice `step * Z^2`. In one time step of length
//! `step` every robot either waits or moves to one of its four lattice
//! neighbors. A joint move is admitted only when the continuous straight-line
//! motion keeps all boxes interior-disjoint, so same-target moves and swaps
//! are excluded and every lattice schedule is a valid continuous schedule.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::geom::{box_fits, Point, PolygonalDomain};
use crate::model::{pair_offsets, Configuration, Objective, RobotShape, Schedule, Trajectory};
use crate::scalar::Scalar;

pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct GridInstance<T> {
    pub step: T,
    /// Closed lattice window `(lo, hi)`; robots never leave it.
    pub window: (Point<T>, Point<T>),
    pub start: Configuration<T>,
    pub target: Configuration<T>,
    /// Placements must keep each box inside this domain.
    pub domain: Option<PolygonalDomain<T>>,
    pub cover: Vec<PolygonalDomain<T>>,
    /// Maximum number of joint configurations settled before giving up.
    pub budget: usize,
}

impl<T: Scalar> GridInstance<T> {
    /// Half-unit lattice over the bounding box of both endpoints, widened by
    /// two units on every side.
    pub fn new(start: Configuration<T>, target: Configuration<T>) -> Self {
        let mut pts: Vec<Point<T>> = start.points.clone();
        pts.extend(target.points.iter().cloned());
        let window = widen(bbox(&pts), &T::two());
        GridInstance { step: T::half(), window, start, target, domain: None, cover: Vec::new(), budget: DEFAULT_BUDGET }
    }

    /// Restricts placements to `d` and shrinks the window to its bounding box.
    pub fn with_domain(mut self, d: PolygonalDomain<T>) -> Self {
        self.window = d.bbox();
        self.domain = Some(d);
        self
    }

    /// Adds covering domains and widens the window to include them.
    pub fn with_cover(mut self, cover: Vec<PolygonalDomain<T>>) -> Self {
        let mut pts = vec![self.window.0.clone(), self.window.1.clone()];
        for c in &cover {
            let (lo, hi) = c.bbox();
            pts.push(lo);
            pts.push(hi);
        }
        self.window = bbox(&pts);
        self.cover = cover;
        self
    }

    pub fn with_step(mut self, step: T) -> Self {
        self.step = step;
        self
    }

    pub fn with_window(mut self, lo: Point<T>, hi: Point<T>) -> Self {
        self.window = (lo, hi);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

/// Optimal lattice value with one witness: the joint configuration after
/// every time step.
#[derive(Clone, Debug)]
pub struct GridSolution<T> {
    pub value: T,
    pub steps: Vec<Configuration<T>>,
    pub step: T,
}

impl<T: Scalar> GridSolution<T> {
    /// The witness as a continuous schedule starting at time zero.
    pub fn schedule(&self) -> Schedule<T> {
        let k = self.steps[0].k();
        let trajectories = (0..k)
            .map(|r| {
                let bps = self
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (self.step.clone() * T::int(i as i64), c.points[r].clone()))
                    .collect();
                Trajectory::new(bps).expect("increasing times")
            })
            .collect();
        Schedule { trajectories, shapes: self.steps[0].shapes.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cost {
    /// One unit per time step.
    Steps,
    /// One unit per moving robot per time step.
    Moves,
    /// One unit per step unless it stays covered.
    Exposed,
}

pub fn grid_cmp<T: Scalar>(inst: &GridInstance<T>, objective: Objective) -> Result<T> {
    Ok(grid_cmp_solution(inst, objective)?.value)
}

pub fn grid_cmp_solution<T: Scalar>(inst: &GridInstance<T>, objective: Objective) -> Result<GridSolution<T>> {
    let cost = match objective {
        Objective::Makespan => Cost::Steps,
        Objective::Sum => Cost::Moves,
    };
    Lattice::new(inst)?.search(cost)?.ok_or(Error::Unreachable)
}

/// Whether `b` is reachable from `a` on the lattice with every box inside `domain`.
pub fn grid_feasibility<T: Scalar>(domain: &PolygonalDomain<T>, a: &Configuration<T>, b: &Configuration<T>) -> Result<bool> {
    let inst = GridInstance::new(a.clone(), b.clone()).with_domain(domain.clone());
    Ok(grid_feasibility_solution(&inst)?.is_some())
}

pub fn grid_feasibility_solution<T: Scalar>(inst: &GridInstance<T>) -> Result<Option<GridSolution<T>>> {
    let lat = Lattice::new(inst)?;
    if !lat.placeable(&lat.start) || !lat.placeable(&lat.target) {
        return Err(Error::NotInDomain);
    }
    lat.search(Cost::Steps)
}

/// Minimum exposed time: a step is free when both its endpoints are
/// covered and every moving robot stays inside one covering domain.
pub fn grid_exposure<T: Scalar>(inst: &GridInstance<T>) -> Result<T> {
    Ok(grid_exposure_solution(inst)?.value)
}

pub fn grid_exposure_solution<T: Scalar>(inst: &GridInstance<T>) -> Result<GridSolution<T>> {
    Lattice::new(inst)?.search(Cost::Exposed)?.ok_or(Error::Unreachable)
}

fn bbox<T: Scalar>(pts: &[Point<T>]) -> (Point<T>, Point<T>) {
    let mut lo = pts[0].clone();
    let mut hi = pts[0].clone();
    for p in pts {
        lo = Point::new(crate::scalar::min_of(&lo.x, &p.x), crate::scalar::min_of(&lo.y, &p.y));
        hi = Point::new(crate::scalar::max_of(&hi.x, &p.x), crate::scalar::max_of(&hi.y, &p.y));
    }
    (lo, hi)
}

fn widen<T: Scalar>(b: (Point<T>, Point<T>), m: &T) -> (Point<T>, Point<T>) {
    (
        Point::new(b.0.x.clone() - m.clone(), b.0.y.clone() - m.clone()),
        Point::new(b.1.x.clone() + m.clone(), b.1.y.clone() + m.clone()),
    )
}

/// `v / step` as an integer, or `NotLatticeExact`.
fn cells<T: Scalar>(v: &T, step: &T) -> Result<i64> {
    let q = v.clone() / step.clone();
    let n = q.to_i64().ok_or(Error::NotLatticeExact)?;
    if T::int(n) == q {
        Ok(n)
    } else {
        Err(Error::NotLatticeExact)
    }
}

const MOVES: [(i64, i64); 5] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];

struct Lattice<'a, T> {
    inst: &'a GridInstance<T>,
    origin: (i64, i64),
    nx: i64,
    ny: i64,
    k: usize,
    /// Pair offsets in lattice units, indexed `i * k + j`.
    offsets: Vec<(i64, i64)>,
    /// Per robot, per cell: whether the placement is allowed.
    allowed: Vec<Vec<bool>>,
    /// Per robot, per cell: index of the covering domain containing the box.
    covered_by: Vec<Vec<Option<usize>>>,
    start: Vec<(i64, i64)>,
    target: Vec<(i64, i64)>,
}

impl<'a, T: Scalar> Lattice<'a, T> {
    fn new(inst: &'a GridInstance<T>) -> Result<Self> {
        let step = &inst.step;
        if *step <= T::zero() {
            return Err(Error::Invalid("lattice step must be positive".into()));
        }
        let k = inst.start.k();
        if inst.target.k() != k || k == 0 || k > 4 {
            return Err(Error::RobotCount(format!("oracle supports 1 to 4 robots, got {k}")));
        }
        let origin = (cells(&inst.window.0.x, step)?, cells(&inst.window.0.y, step)?);
        let nx = cells(&inst.window.1.x, step)? - origin.0 + 1;
        let ny = cells(&inst.window.1.y, step)? - origin.1 + 1;
        if nx <= 0 || ny <= 0 || nx * ny > u16::MAX as i64 {
            return Err(Error::BudgetExceeded(inst.budget));
        }
        if let Some(d) = &inst.domain {
            for p in d.vertices() {
                cells(&p.x, step)?;
                cells(&p.y, step)?;
            }
        }
        for c in &inst.cover {
            for p in c.vertices() {
                cells(&p.x, step)?;
                cells(&p.y, step)?;
            }
        }
        let shapes: &[RobotShape<T>] = &inst.start.shapes;
        let mut offsets = vec![(0, 0); k * k];
        for i in 0..k {
            for j in 0..k {
                let (sx, sy) = pair_offsets(&shapes[i], &shapes[j]);
                offsets[i * k + j] = (cells(&sx, step)?, cells(&sy, step)?);
            }
        }
        let to_cell = |p: &Point<T>| -> Result<(i64, i64)> {
            Ok((cells(&p.x, step)? - origin.0, cells(&p.y, step)? - origin.1))
        };
        let start = inst.start.points.iter().map(to_cell).collect::<Result<Vec<_>>>()?;
        let target = inst.target.points.iter().map(to_cell).collect::<Result<Vec<_>>>()?;
        let mut allowed = Vec::with_capacity(k);
        let mut covered_by = Vec::with_capacity(k);
        for s in shapes {
            let mut al = Vec::with_capacity((nx * ny) as usize);
            let mut cv = Vec::with_capacity((nx * ny) as usize);
            for iy in 0..ny {
                for ix in 0..nx {
                    let p = Point::new(
                        step.clone() * T::int(ix + origin.0),
                        step.clone() * T::int(iy + origin.1),
                    );
                    al.push(inst.domain.as_ref().map_or(true, |d| box_fits(d, &p, &s.half_width, &s.half_height)));
                    cv.push(inst.cover.iter().position(|c| box_fits(c, &p, &s.half_width, &s.half_height)));
                }
            }
            allowed.push(al);
            covered_by.push(cv);
        }
        let lat = Lattice { inst, origin, nx, ny, k, offsets, allowed, covered_by, start, target };
        for c in lat.start.iter().chain(&lat.target) {
            if !lat.in_window(*c) {
                return Err(Error::Invalid("endpoint outside the lattice window".into()));
            }
        }
        for c in [&lat.start, &lat.target] {
            if !lat.separated(c) {
                return Err(Error::InfeasibleConfiguration(0, 1));
            }
        }
        Ok(lat)
    }

    fn in_window(&self, c: (i64, i64)) -> bool {
        c.0 >= 0 && c.1 >= 0 && c.0 < self.nx && c.1 < self.ny
    }

    fn cell(&self, c: (i64, i64)) -> usize {
        (c.1 * self.nx + c.0) as usize
    }

    fn encode(&self, s: &[(i64, i64)]) -> u64 {
        s.iter().fold(0u64, |acc, &c| (acc << 16) | self.cell(c) as u64)
    }

    fn decode(&self, mut code: u64) -> Vec<(i64, i64)> {
        let mut out = vec![(0, 0); self.k];
        for r in (0..self.k).rev() {
            let c = (code & 0xffff) as i64;
            out[r] = (c % self.nx, c / self.nx);
            code >>= 16;
        }
        out
    }

    fn placeable(&self, s: &[(i64, i64)]) -> bool {
        s.iter().enumerate().all(|(r, &c)| self.allowed[r][self.cell(c)])
    }

    fn separated(&self, s: &[(i64, i64)]) -> bool {
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                let (wx, wy) = self.offsets[i * self.k + j];
                if (s[i].0 - s[j].0).abs() < wx && (s[i].1 - s[j].1).abs() < wy {
                    return false;
                }
            }
        }
        true
    }

    /// Whether straight simultaneous motion from `a` to `b` over one step
    /// keeps robots `i` and `j` interior-disjoint.
    fn pair_move_ok(&self, a: &[(i64, i64)], b: &[(i64, i64)], i: usize, j: usize) -> bool {
        let (wx, wy) = self.offsets[i * self.k + j];
        let open = |d0: i64, d1: i64, w: i64| -> Option<(Ratio<i64>, Ratio<i64>)> {
            // times in [0, 1] with |d0 + (d1 - d0) t| < w, as an open interval
            let v = d1 - d0;
            if v == 0 {
                return if d0.abs() < w { Some((Ratio::from(-1), Ratio::from(2))) } else { None };
            }
            let t1 = Ratio::new(-w - d0, v);
            let t2 = Ratio::new(w - d0, v);
            Some(if t1 < t2 { (t1, t2) } else { (t2, t1) })
        };
        let ix = open(a[i].0 - a[j].0, b[i].0 - b[j].0, wx);
        let iy = open(a[i].1 - a[j].1, b[i].1 - b[j].1, wy);
        match (ix, iy) {
            (Some((l1, h1)), Some((l2, h2))) => {
                let lo = l1.max(l2);
                let hi = h1.min(h2);
                !(lo < hi && lo < Ratio::from(1) && hi > Ratio::from(0))
            }
            _ => true,
        }
    }

    fn successors(&self, s: &[(i64, i64)], out: &mut Vec<(Vec<(i64, i64)>, usize)>) {
        out.clear();
        let total = 5usize.pow(self.k as u32);
        'combo: for code in 1..total {
            let mut next = s.to_vec();
            let mut c = code;
            let mut moving = 0;
            for n in next.iter_mut() {
                let (dx, dy) = MOVES[c % 5];
                c /= 5;
                if (dx, dy) != (0, 0) {
                    moving += 1;
                }
                *n = (n.0 + dx, n.1 + dy);
            }
            for (r, &p) in next.iter().enumerate() {
                if !self.in_window(p) || !self.allowed[r][self.cell(p)] {
                    continue 'combo;
                }
            }
            for i in 0..self.k {
                for j in (i + 1)..self.k {
                    if (next[i] != s[i] || next[j] != s[j]) && !self.pair_move_ok(s, &next, i, j) {
                        continue 'combo;
                    }
                }
            }
            out.push((next, moving));
        }
    }

    fn covered(&self, s: &[(i64, i64)]) -> bool {
        s.iter().enumerate().all(|(r, &c)| self.covered_by[r][self.cell(c)].is_some())
    }

    fn step_cost(&self, cost: Cost, a: &[(i64, i64)], b: &[(i64, i64)], moving: usize) -> u64 {
        match cost {
            Cost::Steps => 1,
            Cost::Moves => moving as u64,
            Cost::Exposed => {
                let free = self.covered(a)
                    && self.covered(b)
                    && (0..self.k).all(|r| self.covered_by[r][self.cell(a[r])] == self.covered_by[r][self.cell(b[r])]);
                u64::from(!free)
            }
        }
    }

    fn to_configuration(&self, s: &[(i64, i64)]) -> Configuration<T> {
        let step = &self.inst.step;
        let pts = s
            .iter()
            .map(|c| Point::new(step.clone() * T::int(c.0 + self.origin.0), step.clone() * T::int(c.1 + self.origin.1)))
            .collect();
        Configuration::unchecked(pts, self.inst.start.shapes.clone())
    }

    /// Dijkstra over joint configurations; ties settle in insertion order.
    fn search(&self, cost: Cost) -> Result<Option<GridSolution<T>>> {
        let src = self.encode(&self.start);
        let dst = self.encode(&self.target);
        let mut best: HashMap<u64, (u64, u64)> = HashMap::new();
        best.insert(src, (0, src));
        let mut heap = BinaryHeap::new();
        let mut counter = 0u64;
        heap.push(Reverse((0u64, counter, src)));
        let mut settled = 0usize;
        let mut buf = Vec::new();
        while let Some(Reverse((d, _, u))) = heap.pop() {
            if best[&u].0 < d {
                continue;
            }
            if u == dst {
                return Ok(Some(self.unwind(&best, src, dst, d)));
            }
            settled += 1;
            if settled > self.inst.budget {
                return Err(Error::BudgetExceeded(self.inst.budget));
            }
            let s = self.decode(u);
            self.successors(&s, &mut buf);
            for (next, moving) in &buf {
                let nd = d + self.step_cost(cost, &s, next, *moving);
                let v = self.encode(next);
                let improve = match best.entry(v) {
                    Entry::Vacant(e) => {
                        e.insert((nd, u));
                        true
                    }
                    Entry::Occupied(mut e) => {
                        if nd < e.get().0 {
                            e.insert((nd, u));
                            true
                        } else {
                            false
                        }
                    }
                };
                if improve {
                    counter += 1;
                    heap.push(Reverse((nd, counter, v)));
                }
            }
        }
        Ok(None)
    }

    fn unwind(&self, best: &HashMap<u64, (u64, u64)>, src: u64, dst: u64, d: u64) -> GridSolution<T> {
        let mut codes = vec![dst];
        let mut cur = dst;
        while cur != src {
            cur = best[&cur].1;
            codes.push(cur);
        }
        codes.reverse();
        let steps = codes.iter().map(|&c| self.to_configuration(&self.decode(c))).collect();
        GridSolution { value: self.inst.step.clone() * T::int(d as i64), steps, step: self.inst.step.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_schedule;
    use num_rational::BigRational;

    type Q = BigRational;

    fn conf(pts: &[(i64, i64)]) -> Configuration<Q> {
        Configuration::unit(pts.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn identical_endpoints_cost_nothing() {
        let a = conf(&[(0, 0), (3, 0)]);
        let inst = GridInstance::new(a.clone(), a);
        assert_eq!(grid_cmp(&inst, Objective::Makespan).unwrap(), Q::int(0));
        assert_eq!(grid_cmp(&inst, Objective::Sum).unwrap(), Q::int(0));
    }

    #[test]
    fn translation_costs_the_diameter() {
        let a = conf(&[(0, 0), (2, 0)]);
        let b = conf(&[(3, 1), (5, 1)]);
        let inst = GridInstance::new(a, b);
        assert_eq!(grid_cmp(&inst, Objective::Makespan).unwrap(), Q::int(4));
        assert_eq!(grid_cmp(&inst, Objective::Sum).unwrap(), Q::int(8));
    }

    #[test]
    fn witnesses_validate() {
        let a = conf(&[(0, 0), (3, 0)]);
        let b = conf(&[(3, 0), (0, 0)]);
        let inst = GridInstance::new(a.clone(), b.clone());
        for obj in [Objective::Makespan, Objective::Sum] {
            let sol = grid_cmp_solution(&inst, obj).unwrap();
            let m = sol.schedule();
            assert!(validate_schedule(&m).unwrap().valid);
            assert_eq!(m.start_configuration().points, a.points);
            assert_eq!(m.end_configuration().points, b.points);
            let measured = match obj {
                Objective::Makespan => m.makespan(),
                Objective::Sum => m.sum(),
            };
            assert!(measured <= sol.value);
        }
    }

    #[test]
    fn lattice_must_be_exact() {
        let a = Configuration::unit(vec![Point::new(Q::new(1.into(), 3.into()), Q::int(0)), Point::ints(3, 0)]).unwrap();
        let inst = GridInstance::new(a.clone(), a);
        assert_eq!(grid_cmp(&inst, Objective::Makespan).unwrap_err(), Error::NotLatticeExact);
    }

    #[test]
    fn corridor_feasibility() {
        let wide = PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(10), Q::int(3));
        let narrow = PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(10), Q::frac(3, 2));
        let y = Q::frac(3, 4);
        let a = Configuration::unit(vec![Point::new(Q::int(2), y.clone()), Point::new(Q::int(5), y.clone())]).unwrap();
        let b = Configuration::unit(vec![Point::new(Q::int(5), y.clone()), Point::new(Q::int(2), y)]).unwrap();
        // y = 3/4 is off the half lattice
        assert_eq!(grid_feasibility(&narrow, &a, &b).unwrap_err(), Error::NotLatticeExact);
        let a = conf(&[(2, 1), (5, 1)]);
        let b = conf(&[(5, 1), (2, 1)]);
        assert!(grid_feasibility(&wide, &a, &b).unwrap());
        assert!(grid_feasibility(&wide, &a, &a).unwrap());
        let narrow = PolygonalDomain::rect(Q::int(0), Q::frac(1, 2), Q::int(10), Q::int(2));
        assert!(!grid_feasibility(&narrow, &a, &b).unwrap());
    }

    #[test]
    fn exposure_extremes() {
        let a = conf(&[(1, 1), (3, 1)]);
        let b = conf(&[(3, 1), (1, 1)]);
        let big = PolygonalDomain::rect(Q::int(-1), Q::int(-1), Q::int(5), Q::int(4));
        let inst = GridInstance::new(a.clone(), b.clone()).with_cover(vec![big]);
        assert_eq!(grid_exposure(&inst).unwrap(), Q::int(0));
        let bare = GridInstance::new(a, b);
        assert_eq!(grid_exposure(&bare).unwrap(), grid_cmp(&bare, Objective::Makespan).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let a = conf(&[(0, 0), (3, 0)]);
        let b = conf(&[(3, 0), (0, 0)]);
        let inst = GridInstance::new(a, b).with_budget(10);
        assert_eq!(grid_cmp(&inst, Objective::Makespan).unwrap_err(), Error::BudgetExceeded(10));
    }
}
