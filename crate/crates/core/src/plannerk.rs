//! Planners for k robots over paths in the transition graph.
//!
//! Paths are searched in nondecreasing length. Each path is priced by a
//! linear program over the diagonal waypoints between consecutive orderings.
//! The search stops as soon as a path meets a lower bound; otherwise the
//! result is exact only when every simple path was examined.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Point, Trapezoid};
use crate::lp::{add_l1_leq, LinExpr, LinearProgram, LpStatus};
use crate::model::{diameter, distance_sum, Configuration, Objective, RobotShape, Schedule};
use crate::orderings::{
    build_transition_graph_capped, commonly_ordered, enumerate_simple_paths, orderings_containing, robot_pairs,
    Ordering, TransitionGraph, DEFAULT_MAX_ROBOTS,
};
use crate::planner2::{
    add_sigma_constraint, plan_makespan2, plan_state_makespan, plan_state_sum, plan_sum2, stitch_waypoints, State2,
};
use crate::scalar::{max_of, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    /// The value is optimal: it meets a lower bound or all simple paths were searched.
    Exact,
    /// Optimal among paths of at most `max_len` edges.
    BoundedSearch,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_len: usize,
    pub max_robots: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_len: 4, max_robots: DEFAULT_MAX_ROBOTS }
    }
}

/// A k-robot state: robot `i` somewhere in `trapezoids[i]`, with one sigma
/// restriction per robot pair in lexicographic pair order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateK<T> {
    pub trapezoids: Vec<Trapezoid<T>>,
    pub sigmas: Vec<i8>,
}

impl<T: Scalar> StateK<T> {
    pub fn of_points(c: &Configuration<T>) -> Self {
        let k = c.k();
        StateK {
            trapezoids: c.points.iter().map(|p| crate::geom::point_trapezoid(p.clone())).collect(),
            sigmas: vec![0; k * (k - 1) / 2],
        }
    }
}

#[derive(Clone, Debug)]
pub struct PathLpResult<T> {
    /// Start, intermediates and target.
    pub waypoints: Vec<Configuration<T>>,
    pub value: T,
    /// Per-segment contribution; sums to `value`.
    pub segment_values: Vec<T>,
}

impl<T: Scalar> PathLpResult<T> {
    pub fn intermediates(&self) -> &[Configuration<T>] {
        &self.waypoints[1..self.waypoints.len() - 1]
    }
}

#[derive(Clone, Debug)]
pub struct PlanK<T> {
    pub value: T,
    pub waypoints: Vec<Configuration<T>>,
    pub orderings: Vec<Ordering>,
    pub schedule: Schedule<T>,
    pub exactness: Exactness,
    pub lower_bound: T,
}

/// The three-step schedule of duration `diam(a, b)`.
pub fn same_ordering_schedule_k<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> Result<Schedule<T>> {
    crate::planner2::same_ordering_schedule(a, b, &diameter(a, b))
}

enum EndK<'a, T> {
    Fixed(&'a Configuration<T>),
    Free(&'a StateK<T>),
}

type Coords<T> = (Vec<LinExpr<T>>, Vec<LinExpr<T>>);

fn end_coords<T: Scalar>(lp: &mut LinearProgram<T>, end: &EndK<T>, name: &str, shapes: &[RobotShape<T>]) -> Coords<T> {
    match end {
        EndK::Fixed(c) => (
            c.points.iter().map(|p| LinExpr::constant(p.x.clone())).collect(),
            c.points.iter().map(|p| LinExpr::constant(p.y.clone())).collect(),
        ),
        EndK::Free(s) => {
            let c = free_coords(lp, name, shapes.len());
            for (i, tz) in s.trapezoids.iter().enumerate() {
                tz.polygon().add_membership(lp, &c.0[i], &c.1[i]);
            }
            for (n, (i, j)) in robot_pairs(shapes.len()).into_iter().enumerate() {
                add_sigma_constraint(lp, s.sigmas[n], (&c.0[i], &c.1[i]), (&c.0[j], &c.1[j]), &shapes[i], &shapes[j]);
            }
            c
        }
    }
}

fn free_coords<T: Scalar>(lp: &mut LinearProgram<T>, name: &str, k: usize) -> Coords<T> {
    let mut xs = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    for r in 0..k {
        xs.push(LinExpr::var(lp.free_var(format!("{name}_x{r}"))));
        ys.push(LinExpr::var(lp.free_var(format!("{name}_y{r}"))));
    }
    (xs, ys)
}

/// LP over waypoints for one ordering sequence; `None` when infeasible.
/// With `seq` empty the separation constraints are dropped entirely.
fn solve_path<T: Scalar>(
    a: &EndK<T>,
    b: &EndK<T>,
    shapes: &[RobotShape<T>],
    seq: &[&Ordering],
    objective: Objective,
) -> Option<PathLpResult<T>> {
    let k = shapes.len();
    let ell = seq.len().saturating_sub(1);
    let mut lp = LinearProgram::new();
    let mut pts: Vec<Coords<T>> = Vec::with_capacity(ell + 2);
    pts.push(end_coords(&mut lp, a, "a", shapes));
    for u in 1..=ell {
        pts.push(free_coords(&mut lp, &format!("i{u}"), k));
    }
    pts.push(end_coords(&mut lp, b, "b", shapes));
    if !seq.is_empty() {
        for u in 1..=ell {
            seq[u - 1].add_to_lp(&mut lp, &pts[u].0, &pts[u].1, shapes);
            seq[u].add_to_lp(&mut lp, &pts[u].0, &pts[u].1, shapes);
        }
        if let EndK::Free(_) = a {
            seq[0].add_to_lp(&mut lp, &pts[0].0, &pts[0].1, shapes);
        }
        if let EndK::Free(_) = b {
            seq[ell].add_to_lp(&mut lp, &pts[ell + 1].0, &pts[ell + 1].1, shapes);
        }
    }
    let mut total = LinExpr::new();
    for u in 0..=ell {
        let dx = |r: usize| pts[u + 1].0[r].clone().sub(&pts[u].0[r]);
        let dy = |r: usize| pts[u + 1].1[r].clone().sub(&pts[u].1[r]);
        match objective {
            Objective::Makespan => {
                let phi = LinExpr::var(lp.nonneg_var(format!("phi{u}")));
                for r in 0..k {
                    add_l1_leq(&mut lp, &dx(r), &dy(r), &phi);
                }
                total = total.add(&phi);
            }
            Objective::Sum => {
                for r in 0..k {
                    let n = LinExpr::var(lp.nonneg_var(format!("d{u}_{r}")));
                    add_l1_leq(&mut lp, &dx(r), &dy(r), &n);
                    total = total.add(&n);
                }
            }
        }
    }
    lp.minimize(total);
    let sol = lp.solve();
    if sol.status != LpStatus::Optimal {
        return None;
    }
    let waypoints: Vec<Configuration<T>> = pts
        .iter()
        .map(|(xs, ys)| {
            let p = xs.iter().zip(ys).map(|(x, y)| Point::new(x.eval(&sol.values), y.eval(&sol.values))).collect();
            Configuration::unchecked(p, shapes.to_vec())
        })
        .collect();
    let segment_values: Vec<T> = waypoints
        .windows(2)
        .map(|w| match objective {
            Objective::Makespan => diameter(&w[0], &w[1]),
            Objective::Sum => distance_sum(&w[0], &w[1]),
        })
        .collect();
    let value = segment_values.iter().fold(T::zero(), |s, v| s + v.clone());
    debug_assert_eq!(value, sol.objective);
    Some(PathLpResult { waypoints, value, segment_values })
}

/// Prices a fixed ordering sequence between fixed endpoints.
pub fn path_lp<T: Scalar>(
    a: &Configuration<T>,
    b: &Configuration<T>,
    seq: &[Ordering],
    objective: Objective,
) -> Option<PathLpResult<T>> {
    if seq.is_empty() || !seq[0].contains(a) || !seq[seq.len() - 1].contains(b) {
        return None;
    }
    let refs: Vec<&Ordering> = seq.iter().collect();
    solve_path(&EndK::Fixed(a), &EndK::Fixed(b), &a.shapes, &refs, objective)
}

fn check_instance<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, opts: &SearchOptions) -> Result<()> {
    if a.k() != b.k() || a.k() < 2 {
        return Err(Error::RobotCount(format!("start has {} robots, target {}", a.k(), b.k())));
    }
    if a.k() > opts.max_robots {
        return Err(Error::ResourceBound(format!("{} robots exceeds the cap of {}", a.k(), opts.max_robots)));
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

/// Lower bound from the trivial bound and every two-robot subproblem.
fn pairwise_bound<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, objective: Objective) -> Result<T> {
    let mut bound = match objective {
        Objective::Makespan => diameter(a, b),
        Objective::Sum => distance_sum(a, b),
    };
    for (i, j) in robot_pairs(a.k()) {
        let (pa, pb) = (a.select(&[i, j]), b.select(&[i, j]));
        bound = match objective {
            Objective::Makespan => max_of(&bound, &plan_makespan2(&pa, &pb)?.value),
            Objective::Sum => {
                let extra = plan_sum2(&pa, &pb)?.value - distance_sum(&pa, &pb);
                max_of(&bound, &(distance_sum(a, b) + extra))
            }
        };
    }
    Ok(bound)
}

fn search<T: Scalar>(
    g: &TransitionGraph<T>,
    a: EndK<T>,
    b: EndK<T>,
    from: &[usize],
    to: &[usize],
    bound: T,
    objective: Objective,
    max_len: usize,
) -> Option<PlanK<T>> {
    let shapes = &g.shapes;
    let mut best: Option<(T, PathLpResult<T>, Vec<usize>)> = None;
    let mut exhausted = max_len + 1 >= g.vertices.len();
    let mut paths = enumerate_simple_paths(g, from, to, max_len).peekable();
    while let Some(first) = paths.next() {
        let len = first.len();
        let mut batch = vec![first];
        while let Some(p) = paths.next_if(|p| p.len() == len) {
            batch.push(p);
        }
        let priced: Vec<Option<PathLpResult<T>>> = batch
            .par_iter()
            .map(|p| {
                if p.windows(2).any(|w| !edge_realizable(g, w[0], w[1])) {
                    return None;
                }
                let seq: Vec<&Ordering> = p.iter().map(|&v| &g.vertices[v]).collect();
                solve_path(&a, &b, shapes, &seq, objective)
            })
            .collect();
        for (p, r) in batch.iter().zip(priced) {
            if let Some(r) = r {
                if best.as_ref().map_or(true, |(v, _, _)| r.value < *v) {
                    best = Some((r.value.clone(), r, p.clone()));
                }
            }
        }
        if best.as_ref().is_some_and(|(v, _, _)| *v == bound) {
            exhausted = true;
            break;
        }
    }
    let (value, result, path) = best?;
    let exactness = if exhausted || value == bound { Exactness::Exact } else { Exactness::BoundedSearch };
    Some(PlanK {
        schedule: stitch_waypoints(&result.waypoints),
        value,
        waypoints: result.waypoints,
        orderings: path.iter().map(|&v| g.vertices[v].clone()).collect(),
        exactness,
        lower_bound: bound,
    })
}

fn edge_realizable<T: Scalar>(g: &TransitionGraph<T>, u: usize, v: usize) -> bool {
    let key = (u.min(v), u.max(v));
    g.edges.binary_search(&key).map(|e| g.edge_realizable[e]).unwrap_or(false)
}

fn plan_k<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, objective: Objective, opts: &SearchOptions) -> Result<PlanK<T>> {
    check_instance(a, b, opts)?;
    let g = build_transition_graph_capped(a.k(), &a.shapes, opts.max_robots)?;
    plan_k_in(&g, a, b, objective, opts)
}

/// Planning against a prebuilt transition graph.
pub fn plan_k_in<T: Scalar>(
    g: &TransitionGraph<T>,
    a: &Configuration<T>,
    b: &Configuration<T>,
    objective: Objective,
    opts: &SearchOptions,
) -> Result<PlanK<T>> {
    check_instance(a, b, opts)?;
    let bound = pairwise_bound(a, b, objective)?;
    if commonly_ordered(a, b) {
        let schedule = same_ordering_schedule_k(a, b)?;
        let value = match objective {
            Objective::Makespan => schedule.makespan(),
            Objective::Sum => schedule.sum(),
        };
        let o = crate::orderings::common_ordering(a, b).expect("commonly ordered");
        return Ok(PlanK {
            value,
            waypoints: vec![a.clone(), b.clone()],
            orderings: vec![o],
            schedule,
            exactness: Exactness::Exact,
            lower_bound: bound,
        });
    }
    let from = orderings_containing(a, g)?;
    let to = orderings_containing(b, g)?;
    search(g, EndK::Fixed(a), EndK::Fixed(b), &from, &to, bound, objective, opts.max_len).ok_or_else(|| {
        Error::ResourceBound(format!("no ordering path of length at most {} connects the configurations", opts.max_len))
    })
}

pub fn plan_makespan_k<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, opts: &SearchOptions) -> Result<PlanK<T>> {
    plan_k(a, b, Objective::Makespan, opts)
}

pub fn plan_sum_k<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>, opts: &SearchOptions) -> Result<PlanK<T>> {
    plan_k(a, b, Objective::Sum, opts)
}

/// Orderings compatible with some placement in the state.
fn state_orderings<T: Scalar>(g: &TransitionGraph<T>, s: &StateK<T>) -> Vec<usize> {
    (0..g.vertices.len())
        .into_par_iter()
        .filter(|&v| solve_path(&EndK::Free(s), &EndK::Free(s), &g.shapes, &[&g.vertices[v]], Objective::Makespan).is_some())
        .collect()
}

fn plan_state_k<T: Scalar>(
    sa: &StateK<T>,
    sb: &StateK<T>,
    shapes: &[RobotShape<T>],
    objective: Objective,
    opts: &SearchOptions,
) -> Result<PlanK<T>> {
    let k = shapes.len();
    let pairs = k * k.saturating_sub(1) / 2;
    for s in [sa, sb] {
        if s.trapezoids.len() != k || s.sigmas.len() != pairs {
            return Err(Error::RobotCount("state does not match the robot count".into()));
        }
    }
    let g = build_transition_graph_capped(k, shapes, opts.max_robots)?;
    let (a, b) = (EndK::Free(sa), EndK::Free(sb));
    let mut bound = solve_path(&a, &b, shapes, &[], objective).ok_or(Error::StateInfeasible)?.value;
    // every robot pair is a two-robot state problem on its own
    for (n, (i, j)) in robot_pairs(k).into_iter().enumerate() {
        let sub = |s: &StateK<T>| State2 { x: s.trapezoids[i].clone(), y: s.trapezoids[j].clone(), sigma: s.sigmas[n] };
        let pair_shapes = [shapes[i].clone(), shapes[j].clone()];
        let pair = match objective {
            Objective::Makespan => plan_state_makespan(&sub(sa), &sub(sb), &pair_shapes),
            Objective::Sum => plan_state_sum(&sub(sa), &sub(sb), &pair_shapes),
        };
        bound = max_of(&bound, &pair?.value);
    }
    let from = state_orderings(&g, sa);
    let to = state_orderings(&g, sb);
    if from.is_empty() || to.is_empty() {
        return Err(Error::StateInfeasible);
    }
    search(&g, a, b, &from, &to, bound, objective, opts.max_len).ok_or(Error::StateInfeasible)
}

/// Minimum makespan between any placements of two k-robot states.
pub fn plan_state_makespan_k<T: Scalar>(
    sa: &StateK<T>,
    sb: &StateK<T>,
    shapes: &[RobotShape<T>],
    opts: &SearchOptions,
) -> Result<PlanK<T>> {
    plan_state_k(sa, sb, shapes, Objective::Makespan, opts)
}

pub fn plan_state_sum_k<T: Scalar>(
    sa: &StateK<T>,
    sb: &StateK<T>,
    shapes: &[RobotShape<T>],
    opts: &SearchOptions,
) -> Result<PlanK<T>> {
    plan_state_k(sa, sb, shapes, Objective::Sum, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{decompose, Axis, PolygonalDomain};
    use crate::model::validate_schedule;
    use crate::orderings::PairRelation;
    use crate::planner2::point_state;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    fn cfg(pts: &[(i64, i64)]) -> Configuration<Q> {
        Configuration::unit(pts.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
    }

    fn check(p: &PlanK<Q>, objective: Objective) {
        let r = validate_schedule(&p.schedule).unwrap();
        assert!(r.valid, "{:?}", r.first_violation());
        let m = match objective {
            Objective::Makespan => r.makespan,
            Objective::Sum => r.sum,
        };
        assert_eq!(m, p.value);
    }

    #[test]
    fn same_ordering_k_examples() {
        let a = cfg(&[(0, 0), (2, 0), (4, 0)]);
        let b = cfg(&[(0, 5), (2, 5), (4, 5)]);
        let m = same_ordering_schedule_k(&a, &b).unwrap();
        assert_eq!(m.makespan(), q(5));
        assert!(m.trajectories.iter().all(|t| t.turns() == 0));
        let b2 = cfg(&[(1, 3), (4, -1), (6, 2)]);
        let m = same_ordering_schedule_k(&a, &b2).unwrap();
        assert!(validate_schedule(&m).unwrap().valid);
        assert_eq!(m.makespan(), diameter(&a, &b2));
        for (i, j) in robot_pairs(3) {
            assert!(validate_schedule(&m.select(&[i, j])).unwrap().valid);
        }
        assert_eq!(same_ordering_schedule_k(&a, &a).unwrap().makespan(), q(0));
    }

    #[test]
    fn path_lp_examples() {
        let a = cfg(&[(0, 0), (3, 0)]);
        let b = cfg(&[(3, 0), (0, 0)]);
        let o = |r| Ordering::new(vec![r]);
        let seq = vec![o(PairRelation::LeftOf), o(PairRelation::Below), o(PairRelation::RightOf)];
        let r = path_lp(&a, &b, &seq, Objective::Makespan).unwrap();
        assert_eq!(r.value, q(4));
        assert_eq!(r.intermediates().len(), 2);
        assert_eq!(r.segment_values.iter().fold(q(0), |s, v| s + v.clone()), r.value);
        let c = cfg(&[(0, 0), (0, 3)]);
        let single = path_lp(&a, &c, &[o(PairRelation::LeftOf)], Objective::Sum);
        assert!(single.is_none());
        let d = cfg(&[(1, 1), (4, 5)]);
        let r = path_lp(&a, &d, &[o(PairRelation::LeftOf)], Objective::Sum).unwrap();
        assert_eq!(r.value, distance_sum(&a, &d));
    }

    #[test]
    fn k3_commonly_ordered_is_exact() {
        let a = cfg(&[(0, 0), (2, 0), (4, 0)]);
        let b = cfg(&[(1, 3), (4, -1), (6, 2)]);
        let p = plan_makespan_k(&a, &b, &SearchOptions::default()).unwrap();
        assert_eq!(p.value, diameter(&a, &b));
        assert_eq!(p.exactness, Exactness::Exact);
    }

    #[test]
    fn k3_bystander_swap() {
        let a = cfg(&[(0, 0), (3, 0), (20, 20)]);
        let b = cfg(&[(3, 0), (0, 0), (20, 20)]);
        let p = plan_makespan_k(&a, &b, &SearchOptions::default()).unwrap();
        assert_eq!(p.value, q(4));
        assert_eq!(p.exactness, Exactness::Exact);
        check(&p, Objective::Makespan);
        let s = plan_sum_k(&a, &b, &SearchOptions::default()).unwrap();
        assert_eq!(s.value, q(8));
        check(&s, Objective::Sum);
    }

    #[test]
    fn k2_matches_two_robot_planner_on_swap() {
        let a = cfg(&[(0, 0), (3, 0)]);
        let b = cfg(&[(3, 0), (0, 0)]);
        let p = plan_makespan_k(&a, &b, &SearchOptions { max_len: 3, ..Default::default() }).unwrap();
        assert_eq!(p.value, plan_makespan2(&a, &b).unwrap().value);
        assert_eq!(p.exactness, Exactness::Exact);
    }

    #[test]
    fn rectangles_swap() {
        let sh = vec![RobotShape::rect(q(2), q(1)).unwrap(); 2];
        let a = Configuration::new(vec![Point::ints(0, 0), Point::ints(4, 0)], sh.clone()).unwrap();
        let b = Configuration::new(vec![Point::ints(4, 0), Point::ints(0, 0)], sh).unwrap();
        let p = plan_makespan_k(&a, &b, &SearchOptions::default()).unwrap();
        assert_eq!(p.value, q(5));
        check(&p, Objective::Makespan);
    }

    #[test]
    fn state_versions() {
        let shapes = vec![RobotShape::unit(); 2];
        let a = cfg(&[(0, 0), (3, 0)]);
        let b = cfg(&[(3, 0), (0, 0)]);
        let pk = plan_state_makespan_k(&StateK::of_points(&a), &StateK::of_points(&b), &shapes, &SearchOptions::default()).unwrap();
        let p2 = plan_state_makespan(&point_state(&a), &point_state(&b), &shapes).unwrap();
        assert_eq!(pk.value, p2.value);

        let a3 = cfg(&[(0, 0), (3, 0), (20, 20)]);
        let b3 = cfg(&[(3, 0), (0, 0), (20, 20)]);
        let shapes3 = vec![RobotShape::unit(); 3];
        let pk = plan_state_makespan_k(&StateK::of_points(&a3), &StateK::of_points(&b3), &shapes3, &SearchOptions::default()).unwrap();
        assert_eq!(pk.value, q(4));

        let big = decompose(&PolygonalDomain::rect(q(0), q(0), q(10), q(10)), Axis::Horizontal).trapezoids[0].clone();
        let s = StateK { trapezoids: vec![big.clone(); 3], sigmas: vec![0; 3] };
        let p = plan_state_makespan_k(&s, &s, &shapes3, &SearchOptions::default()).unwrap();
        assert_eq!(p.value, q(0));
        assert!(p.waypoints[0].is_feasible());
    }

    #[test]
    fn robot_cap() {
        let a = cfg(&[(0, 0), (2, 0), (4, 0), (6, 0), (8, 0)]);
        assert!(matches!(plan_makespan_k(&a, &a, &SearchOptions::default()), Err(Error::ResourceBound(_))));
    }
}
