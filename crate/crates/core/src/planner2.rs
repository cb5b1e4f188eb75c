//! Exact planners for two robots in the open plane.
//!
//! A schedule between two configurations follows a simple path on the
//! four-cycle of orderings. For each path, a linear program places the
//! diagonal configurations where consecutive orderings meet; consecutive
//! waypoints are commonly ordered and joined by three-step schedules.

use crate::error::{Error, Result};
use crate::geom::{Point, Trapezoid};
use crate::lp::{add_l1_leq, LinExpr, LinearProgram, Relation};
use crate::model::{diameter, pair_offsets, three_step_schedule, Configuration, Objective, RobotShape, Schedule};
use crate::orderings::{commonly_ordered, Ordering, PairRelation};
use crate::scalar::Scalar;

/// A state: robot 1 somewhere in `x`, robot 2 somewhere in `y`, with the
/// relative-position restriction `sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State2<T> {
    pub x: Trapezoid<T>,
    pub y: Trapezoid<T>,
    /// One of `-2..=2`: robot 1 stays left of (`1`), right of (`-1`), below
    /// (`2`) or above (`-2`) robot 2; `0` leaves them unrestricted.
    pub sigma: i8,
}

/// Adds the sigma restriction for a robot pair.
pub fn add_sigma_constraint<T: Scalar>(
    lp: &mut LinearProgram<T>,
    sigma: i8,
    p1: (&LinExpr<T>, &LinExpr<T>),
    p2: (&LinExpr<T>, &LinExpr<T>),
    s1: &RobotShape<T>,
    s2: &RobotShape<T>,
) {
    let (sx, sy) = pair_offsets(s1, s2);
    match sigma {
        1 => lp.add_cmp(p1.0.clone(), Relation::Le, p2.0.clone().plus_const(-sx)),
        -1 => lp.add_cmp(p1.0.clone(), Relation::Ge, p2.0.clone().plus_const(sx)),
        2 => lp.add_cmp(p1.1.clone(), Relation::Le, p2.1.clone().plus_const(-sy)),
        -2 => lp.add_cmp(p1.1.clone(), Relation::Ge, p2.1.clone().plus_const(sy)),
        _ => {}
    }
}

/// Whether two points satisfy the sigma restriction.
pub fn sigma_holds<T: Scalar>(sigma: i8, p1: &Point<T>, p2: &Point<T>, s1: &RobotShape<T>, s2: &RobotShape<T>) -> bool {
    let (sx, sy) = pair_offsets(s1, s2);
    match sigma {
        1 => p1.x.clone() + sx <= p2.x,
        -1 => p1.x >= p2.x.clone() + sx,
        2 => p1.y.clone() + sy <= p2.y,
        -2 => p1.y >= p2.y.clone() + sy,
        _ => true,
    }
}

/// Result of a planner: optimal value, the waypoints where orderings
/// change (first and last are the endpoints), the ordering sequence and the
/// stitched schedule.
#[derive(Clone, Debug)]
pub struct Plan<T> {
    pub value: T,
    pub waypoints: Vec<Configuration<T>>,
    pub orderings: Vec<Ordering>,
    pub schedule: Schedule<T>,
}

impl<T: Scalar> Plan<T> {
    pub fn start(&self) -> &Configuration<T> {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &Configuration<T> {
        &self.waypoints[self.waypoints.len() - 1]
    }
}

/// The three-step schedule of duration `d` between commonly ordered
/// configurations; every robot turns at most once.
pub fn same_ordering_schedule<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, d: &T) -> Result<Schedule<T>> {
    if a.k() != b.k() {
        return Err(Error::RobotCount(format!("{} vs {} robots", a.k(), b.k())));
    }
    if !commonly_ordered(a, b) {
        return Err(Error::NotCommonlyOrdered);
    }
    let diam = diameter(a, b);
    if *d < diam {
        return Err(Error::DBelowDiameter { requested: d.to_string(), diameter: diam.to_string() });
    }
    Ok(three_step_schedule(a, b, d))
}

/// Concatenates minimum-duration three-step schedules through the waypoints.
pub fn stitch_waypoints<T: Scalar>(waypoints: &[Configuration<T>]) -> Schedule<T> {
    let mut out = Schedule::stationary(&waypoints[0], T::zero(), T::zero());
    for w in waypoints.windows(2) {
        let seg = three_step_schedule(&w[0], &w[1], &diameter(&w[0], &w[1]));
        out = out.then(&seg);
    }
    out
}

/// An endpoint of a two-robot LP: fixed, or free inside a state.
enum End<'a, T> {
    Fixed(&'a Configuration<T>),
    Free(&'a State2<T>),
}

const CYCLE: [PairRelation; 4] = PairRelation::ALL;

/// Simple paths on the four-cycle between the given start and end relations,
/// shortest first, then lexicographic by relation index.
fn cycle_paths(starts: &[PairRelation], ends: &[PairRelation]) -> Vec<Vec<PairRelation>> {
    let mut out: Vec<Vec<PairRelation>> = Vec::new();
    fn grow(path: &mut Vec<PairRelation>, len: usize, ends: &[PairRelation], out: &mut Vec<Vec<PairRelation>>) {
        let last = *path.last().unwrap();
        if path.len() == len + 1 {
            if ends.contains(&last) {
                out.push(path.clone());
            }
            return;
        }
        for r in CYCLE {
            if r != last && r != last.opposite() && !path.contains(&r) {
                path.push(r);
                grow(path, len, ends, out);
                path.pop();
            }
        }
    }
    for len in 0..4 {
        let mut s = starts.to_vec();
        s.sort();
        for r in s {
            grow(&mut vec![r], len, ends, &mut out);
        }
    }
    out
}

fn relations_of<T: Scalar>(c: &Configuration<T>) -> Vec<PairRelation> {
    CYCLE.iter().copied().filter(|r| r.holds(&c.points[0], &c.points[1], &c.shapes[0], &c.shapes[1])).collect()
}

/// Solves the LP for one path; returns the value and all waypoints.
fn path_lp<T: Scalar>(
    a: &End<T>,
    b: &End<T>,
    shapes: &[RobotShape<T>],
    path: &[PairRelation],
    objective: Objective,
    separate: bool,
) -> Option<(T, Vec<Configuration<T>>)> {
    let ell = path.len() - 1;
    let mut lp = LinearProgram::new();
    // coordinates per waypoint: [x1, y1, x2, y2]
    let mut coords: Vec<[LinExpr<T>; 4]> = Vec::with_capacity(ell + 2);
    let push_free = |lp: &mut LinearProgram<T>, name: &str, coords: &mut Vec<[LinExpr<T>; 4]>| {
        let v = [
            lp.free_var(format!("{name}_x1")),
            lp.free_var(format!("{name}_y1")),
            lp.free_var(format!("{name}_x2")),
            lp.free_var(format!("{name}_y2")),
        ];
        coords.push(v.map(LinExpr::var));
    };
    let fixed = |c: &Configuration<T>| -> [LinExpr<T>; 4] {
        [
            LinExpr::constant(c.points[0].x.clone()),
            LinExpr::constant(c.points[0].y.clone()),
            LinExpr::constant(c.points[1].x.clone()),
            LinExpr::constant(c.points[1].y.clone()),
        ]
    };
    match a {
        End::Fixed(c) => {
            coords.push(fixed(c));
        }
        End::Free(_) => push_free(&mut lp, "a", &mut coords),
    }
    for u in 1..=ell {
        push_free(&mut lp, &format!("i{u}"), &mut coords);
    }
    match b {
        End::Fixed(c) => {
            coords.push(fixed(c));
        }
        End::Free(_) => push_free(&mut lp, "b", &mut coords),
    }

    let sep = |lp: &mut LinearProgram<T>, c: &[LinExpr<T>; 4], r: PairRelation| {
        if !separate {
            return;
        }
        r.add_to_lp(lp, (&c[0], &c[1]), (&c[2], &c[3]), &shapes[0], &shapes[1]);
    };
    for u in 1..=ell {
        sep(&mut lp, &coords[u], path[u - 1]);
        sep(&mut lp, &coords[u], path[u]);
    }
    for (end, idx, rel) in [(a, 0, path[0]), (b, ell + 1, path[ell])] {
        if let End::Free(s) = end {
            let c = &coords[idx];
            sep(&mut lp, c, rel);
            s.x.polygon().add_membership(&mut lp, &c[0], &c[1]);
            s.y.polygon().add_membership(&mut lp, &c[2], &c[3]);
            add_sigma_constraint(&mut lp, s.sigma, (&c[0], &c[1]), (&c[2], &c[3]), &shapes[0], &shapes[1]);
        }
    }

    // norm[u][r] >= |waypoint u+1 - waypoint u| for robot r
    let mut norms: Vec<[LinExpr<T>; 2]> = Vec::with_capacity(ell + 1);
    for u in 0..=ell {
        let mut pair = [LinExpr::new(), LinExpr::new()];
        for (r, slot) in pair.iter_mut().enumerate() {
            let n = LinExpr::var(lp.nonneg_var(format!("n{u}_{r}")));
            let dx = coords[u + 1][2 * r].clone().sub(&coords[u][2 * r]);
            let dy = coords[u + 1][2 * r + 1].clone().sub(&coords[u][2 * r + 1]);
            add_l1_leq(&mut lp, &dx, &dy, &n);
            *slot = n;
        }
        norms.push(pair);
    }
    let phi = LinExpr::var(lp.free_var("phi"));
    match objective {
        Objective::Makespan => {
            // phi bounds every choice of one robot per segment
            for mask in 0..(1u32 << (ell + 1)) {
                let total = (0..=ell).fold(LinExpr::new(), |acc, u| acc.add(&norms[u][((mask >> u) & 1) as usize]));
                lp.add_cmp(phi.clone(), Relation::Ge, total);
            }
        }
        Objective::Sum => {
            let total = norms.iter().fold(LinExpr::new(), |acc, n| acc.add(&n[0]).add(&n[1]));
            lp.add_cmp(phi.clone(), Relation::Ge, total);
        }
    }
    lp.minimize(phi);
    let sol = lp.solve();
    if !sol.is_optimal() {
        return None;
    }
    let waypoints: Vec<Configuration<T>> = coords
        .iter()
        .map(|c| {
            let pts = (0..2)
                .map(|r| Point::new(c[2 * r].eval(&sol.values), c[2 * r + 1].eval(&sol.values)))
                .collect();
            Configuration::unchecked(pts, shapes.to_vec())
        })
        .collect();
    let value = measure(&waypoints, objective);
    debug_assert_eq!(value, sol.objective);
    Some((value, waypoints))
}

fn measure<T: Scalar>(waypoints: &[Configuration<T>], objective: Objective) -> T {
    waypoints.windows(2).fold(T::zero(), |acc, w| {
        acc + match objective {
            Objective::Makespan => diameter(&w[0], &w[1]),
            Objective::Sum => crate::model::distance_sum(&w[0], &w[1]),
        }
    })
}

fn best_plan<T: Scalar>(
    a: End<T>,
    b: End<T>,
    starts: &[PairRelation],
    ends: &[PairRelation],
    shapes: &[RobotShape<T>],
    objective: Objective,
) -> Option<Plan<T>> {
    // ignoring collisions gives a bound that ends the search once attained
    let bound = match (&a, &b) {
        (End::Fixed(x), End::Fixed(y)) => Some(measure(&[(*x).clone(), (*y).clone()], objective)),
        _ => Some(path_lp(&a, &b, shapes, &[PairRelation::LeftOf], objective, false)?.0),
    };
    let mut best: Option<(T, Vec<Configuration<T>>, Vec<PairRelation>)> = None;
    for path in cycle_paths(starts, ends) {
        if let Some((v, w)) = path_lp(&a, &b, shapes, &path, objective, true) {
            if best.as_ref().map_or(true, |(bv, _, _)| v < *bv) {
                let done = bound.as_ref() == Some(&v);
                best = Some((v, w, path));
                if done {
                    break;
                }
            }
        }
    }
    let (value, waypoints, path) = best?;
    let schedule = stitch_waypoints(&waypoints);
    Some(Plan { value, waypoints, orderings: path.into_iter().map(|r| Ordering::new(vec![r])).collect(), schedule })
}

fn check_pair<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> Result<()> {
    if a.k() != 2 || b.k() != 2 {
        return Err(Error::RobotCount("two-robot planner needs exactly two robots".into()));
    }
    if a.shapes != b.shapes {
        return Err(Error::Invalid("start and target use different robot shapes".into()));
    }
    for c in [a, b] {
        if let Some((i, j)) = c.first_overlap() {
            return Err(Error::InfeasibleConfiguration(i, j));
        }
    }
    Ok(())
}

fn plan2<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, objective: Objective) -> Result<Plan<T>> {
    check_pair(a, b)?;
    best_plan(End::Fixed(a), End::Fixed(b), &relations_of(a), &relations_of(b), &a.shapes, objective)
        .ok_or_else(|| Error::Invalid("no ordering path admits a schedule".into()))
}

/// Minimum makespan between two feasible two-robot configurations.
pub fn plan_makespan2<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> Result<Plan<T>> {
    plan2(a, b, Objective::Makespan)
}

/// Minimum total traveled distance between two feasible configurations.
pub fn plan_sum2<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> Result<Plan<T>> {
    plan2(a, b, Objective::Sum)
}

fn plan_state<T: Scalar>(sa: &State2<T>, sb: &State2<T>, shapes: &[RobotShape<T>], objective: Objective) -> Result<Plan<T>> {
    if shapes.len() != 2 {
        return Err(Error::RobotCount("two-robot planner needs exactly two robots".into()));
    }
    best_plan(End::Free(sa), End::Free(sb), &CYCLE, &CYCLE, shapes, objective).ok_or(Error::StateInfeasible)
}

/// Minimum makespan over all start placements in `sa` and end placements in `sb`.
pub fn plan_state_makespan<T: Scalar>(sa: &State2<T>, sb: &State2<T>, shapes: &[RobotShape<T>]) -> Result<Plan<T>> {
    plan_state(sa, sb, shapes, Objective::Makespan)
}

pub fn plan_state_sum<T: Scalar>(sa: &State2<T>, sb: &State2<T>, shapes: &[RobotShape<T>]) -> Result<Plan<T>> {
    plan_state(sa, sb, shapes, Objective::Sum)
}

/// A state containing exactly one point per robot, for tests and tools.
pub fn point_state<T: Scalar>(c: &Configuration<T>) -> State2<T> {
    let tz = |p: &Point<T>| crate::geom::point_trapezoid(p.clone());
    State2 { x: tz(&c.points[0]), y: tz(&c.points[1]), sigma: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{decompose, point_trapezoid, Axis, PolygonalDomain};
    use crate::model::{distance_sum, validate_schedule};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    fn cfg(pts: &[(i64, i64)]) -> Configuration<Q> {
        Configuration::unit(pts.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    fn check(plan: &Plan<Q>, objective: Objective) {
        let r = validate_schedule(&plan.schedule).unwrap();
        assert!(r.valid, "{:?}", r.first_violation());
        let measured = match objective {
            Objective::Makespan => r.makespan,
            Objective::Sum => r.sum,
        };
        assert_eq!(measured, plan.value);
    }

    #[test]
    fn same_ordering_examples() {
        let a = cfg(&[(0, 0), (2, 0)]);
        let b = cfg(&[(1, 3), (3, 1)]);
        let m = same_ordering_schedule(&a, &b, &q(4)).unwrap();
        let times = |r: usize| m.trajectories[r].breakpoints.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>();
        assert_eq!(times(0), vec![q(0), q(1), q(4)]);
        assert_eq!(times(1), vec![q(0), q(1), q(3), q(4)]);
        let long = same_ordering_schedule(&a, &b, &q(10)).unwrap();
        assert_eq!(long.makespan(), q(10));
        assert!(validate_schedule(&long).unwrap().valid);
        let still = same_ordering_schedule(&a, &a, &q(0)).unwrap();
        assert_eq!(still.makespan(), q(0));
        assert_eq!(still.sum(), q(0));
        assert!(matches!(same_ordering_schedule(&a, &b, &q(3)), Err(Error::DBelowDiameter { .. })));
        let swapped = cfg(&[(2, 0), (0, 0)]);
        assert_eq!(same_ordering_schedule(&a, &swapped, &q(9)).unwrap_err(), Error::NotCommonlyOrdered);
    }

    #[test]
    fn swap_family() {
        for d in 1..=6 {
            let a = cfg(&[(0, 0), (d, 0)]);
            let b = cfg(&[(d, 0), (0, 0)]);
            let m = plan_makespan2(&a, &b).unwrap();
            assert_eq!(m.value, q(d + 1), "makespan D={d}");
            check(&m, Objective::Makespan);
            let s = plan_sum2(&a, &b).unwrap();
            assert_eq!(s.value, q(2 * d + 2), "sum D={d}");
            check(&s, Objective::Sum);
        }
    }

    #[test]
    fn commonly_ordered_meets_lower_bounds() {
        let a = cfg(&[(0, 0), (2, 0)]);
        let b = cfg(&[(1, 3), (3, 1)]);
        assert_eq!(plan_makespan2(&a, &b).unwrap().value, diameter(&a, &b));
        assert_eq!(plan_sum2(&a, &b).unwrap().value, distance_sum(&a, &b));
        assert_eq!(plan_sum2(&a, &a).unwrap().value, q(0));
    }

    #[test]
    fn diagonal_exchange() {
        let a = cfg(&[(0, 0), (1, 1)]);
        let b = cfg(&[(1, 1), (0, 0)]);
        let m = plan_makespan2(&a, &b).unwrap();
        assert_eq!(m.value, q(2));
        assert_eq!(m.orderings.len(), 2);
        check(&m, Objective::Makespan);
        let s = plan_sum2(&a, &b).unwrap();
        assert_eq!(s.value, q(4));
        check(&s, Objective::Sum);
    }

    #[test]
    fn rectangles_use_half_width_sums() {
        // two 2x1 robots swapping along a line need a vertical detour of 1
        let sh = vec![RobotShape::rect(q(2), q(1)).unwrap(); 2];
        let a = Configuration::new(vec![Point::ints(0, 0), Point::ints(4, 0)], sh.clone()).unwrap();
        let b = Configuration::new(vec![Point::ints(4, 0), Point::ints(0, 0)], sh).unwrap();
        let m = plan_makespan2(&a, &b).unwrap();
        assert_eq!(m.value, q(5));
        check(&m, Objective::Makespan);
        assert_eq!(plan_sum2(&a, &b).unwrap().value, q(10));
    }

    #[test]
    fn state_planning() {
        let big = decompose(&PolygonalDomain::rect(q(0), q(0), q(3), q(3)), Axis::Horizontal).trapezoids[0].clone();
        let s = State2 { x: big.clone(), y: big, sigma: 0 };
        let shapes = vec![RobotShape::unit(); 2];
        let p = plan_state_makespan(&s, &s, &shapes).unwrap();
        assert_eq!(p.value, q(0));
        assert!(p.start().is_feasible());

        let a = cfg(&[(0, 0), (3, 0)]);
        let b = cfg(&[(3, 0), (0, 0)]);
        let p = plan_state_makespan(&point_state(&a), &point_state(&b), &shapes).unwrap();
        assert_eq!(p.value, q(4));
        check(&p, Objective::Makespan);
        let p = plan_state_sum(&point_state(&a), &point_state(&b), &shapes).unwrap();
        assert_eq!(p.value, q(8));

        let far = decompose(&PolygonalDomain::rect(q(13), q(0), q(16), q(3)), Axis::Horizontal).trapezoids[0].clone();
        let near = decompose(&PolygonalDomain::rect(q(0), q(0), q(3), q(3)), Axis::Horizontal).trapezoids[0].clone();
        let sa = State2 { x: near.clone(), y: near, sigma: 0 };
        let sb = State2 { x: far.clone(), y: far, sigma: 0 };
        let p = plan_state_makespan(&sa, &sb, &shapes).unwrap();
        assert!(p.value >= q(10));
        check(&p, Objective::Makespan);
        assert_eq!(plan_makespan2(p.start(), p.end()).unwrap().value, p.value);
    }

    #[test]
    fn sigma_can_make_states_infeasible() {
        // both robots pinned to one point-like column: separation impossible
        let seg = decompose(&PolygonalDomain::rect(q(0), q(0), q(1), q(1)), Axis::Horizontal).trapezoids[0].clone();
        let s = State2 { x: seg.clone(), y: seg, sigma: 0 };
        let shapes = vec![RobotShape::unit(); 2];
        let tiny = State2 { x: point_trapezoid(Point::ints(0, 0)), y: point_trapezoid(Point::ints(0, 0)), sigma: 0 };
        assert_eq!(plan_state_makespan(&tiny, &s, &shapes).unwrap_err(), Error::StateInfeasible);
        // sigma = 1 keeps robot 1 on the left
        let r1 = point_trapezoid(Point::ints(3, 0));
        let r2 = point_trapezoid(Point::ints(0, 0));
        let bad = State2 { x: r1.clone(), y: r2.clone(), sigma: 1 };
        assert_eq!(plan_state_makespan(&bad, &bad, &shapes).unwrap_err(), Error::StateInfeasible);
        let ok = State2 { x: r1, y: r2, sigma: -1 };
        assert_eq!(plan_state_makespan(&ok, &ok, &shapes).unwrap().value, q(0));
    }
}
