//! Two-robot minimum exposure among covering domains.
//!
//! Vertices are states `(X, Y, sigma)` over pairs of trapezoids of the
//! eroded covering domains. Two states are joined by a zero edge when the
//! robots can move between them without leaving the cover, and otherwise by
//! a positive edge weighted with the cover-ignoring minimum makespan between
//! the states. The minimum exposure is a shortest-path distance.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feas2::{build_feasibility, decoupled_schedule, FeasibilityStructure};
use crate::geom::decompose_with_ids;
use crate::geom::{
    box_fits, contains_unit_square, hull_of_two_trapezoids, inner_minkowski, segment_intersections, Axis, Location,
    Point, PolygonalDomain, Segment, Trapezoid,
};
use crate::model::{is_covered, measure_exposure, Configuration, ExposureReport, RobotShape, Schedule};
use crate::planner2::{plan_makespan2, plan_state_makespan, point_state, sigma_holds, State2};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Zero,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExposureEdge<T> {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub weight: T,
}

#[derive(Clone, Debug)]
pub struct ExposureVertex<T> {
    pub state: State2<T>,
    /// A separated configuration in the state, used for feasibility queries.
    pub representative: Configuration<T>,
}

#[derive(Clone, Debug)]
pub struct ExposureGraph<T> {
    pub cover: Vec<PolygonalDomain<T>>,
    /// All trapezoids of the horizontal decompositions of the eroded cover.
    pub trapezoids: Vec<Trapezoid<T>>,
    pub vertices: Vec<ExposureVertex<T>>,
    /// Edges between state vertices, `u < v`, sorted.
    pub edges: Vec<ExposureEdge<T>>,
    /// Candidate states dropped for lack of a separated representative.
    pub dropped: usize,
    feasibility: Vec<Option<FeasibilityStructure<T>>>,
}

/// Result of a minimum exposure query.
#[derive(Clone, Debug)]
pub struct ExposurePlan<T> {
    /// Shortest-path distance in the graph.
    pub value: T,
    pub schedule: Schedule<T>,
    /// Vertex ids along the path; `vertices.len()` is the start and
    /// `vertices.len() + 1` the target.
    pub path: Vec<usize>,
    pub path_kinds: Vec<EdgeKind>,
    /// Exposure of the returned schedule, measured independently.
    pub measured: ExposureReport<T>,
}

/// Rejects covers whose domains share interior points.
pub fn check_cover<T: Scalar>(cover: &[PolygonalDomain<T>]) -> Result<()> {
    for i in 0..cover.len() {
        for j in (i + 1)..cover.len() {
            if interiors_overlap(&cover[i], &cover[j]) || interiors_overlap(&cover[j], &cover[i]) {
                return Err(Error::OverlappingCover(i, j));
            }
        }
    }
    Ok(())
}

/// Whether some point near the boundary of `a`, on its interior side, lies
/// in the interior of `b`. Checked together with the swapped call this
/// decides interior overlap for polygonal domains.
fn interiors_overlap<T: Scalar>(a: &PolygonalDomain<T>, b: &PolygonalDomain<T>) -> bool {
    let b_edges: Vec<Segment<T>> = b.edges().into_iter().map(|(_, e)| e).collect();
    for (_, e) in a.edges() {
        let mut cuts = vec![T::zero(), T::one()];
        for f in &b_edges {
            for p in segment_intersections(&e, f) {
                cuts.push(e.param_of(&p));
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let m = e.a.lerp(&e.b, &((w[0].clone() + w[1].clone()) / T::two()));
            match b.locate(&m) {
                Location::Inside => return true,
                Location::Outside => {}
                Location::Boundary => {
                    // shared boundary: overlap when both interiors lie on the same side
                    let same = b_edges.iter().any(|f| f.contains(&m) && f.dir().dot(&e.dir()) > T::zero());
                    if same {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Sigma values for the pair `(x, y)`: `0` when the hull of both contains a
/// unit square; otherwise `±1` when it is at least one unit wide and `±2`
/// when it is at least one unit tall.
pub fn state_sigmas<T: Scalar>(x: &Trapezoid<T>, y: &Trapezoid<T>) -> Vec<i8> {
    let (z, w, h) = hull_of_two_trapezoids(x, y);
    if contains_unit_square(&z) {
        return vec![0];
    }
    let mut out = Vec::new();
    if w >= T::one() {
        out.extend([1, -1]);
    }
    if h >= T::one() {
        out.extend([2, -2]);
    }
    out
}

fn extreme<T: Scalar>(t: &Trapezoid<T>, key: impl Fn(&Point<T>) -> (T, T)) -> Point<T> {
    t.vertices.iter().min_by_key(|p| key(p)).expect("trapezoids have corners").clone()
}

/// A separated configuration in the state, following the extremal rule for
/// each sigma: leftmost of `X` with rightmost of `Y` for `1`, bottom of `X`
/// with top of `Y` for `2`, mirrored for negative values, and the first
/// separated extremal combination for `0`.
pub fn representative_configuration<T: Scalar>(s: &State2<T>) -> Result<Configuration<T>> {
    let unit: RobotShape<T> = RobotShape::unit();
    let left = |t: &Trapezoid<T>| extreme(t, |p| (p.x.clone(), p.y.clone()));
    let right = |t: &Trapezoid<T>| extreme(t, |p| (-p.x.clone(), p.y.clone()));
    let bottom = |t: &Trapezoid<T>| extreme(t, |p| (p.y.clone(), p.x.clone()));
    let top = |t: &Trapezoid<T>| extreme(t, |p| (-p.y.clone(), p.x.clone()));
    let candidates: Vec<(Point<T>, Point<T>)> = match s.sigma {
        1 => vec![(left(&s.x), right(&s.y))],
        -1 => vec![(right(&s.x), left(&s.y))],
        2 => vec![(bottom(&s.x), top(&s.y))],
        -2 => vec![(top(&s.x), bottom(&s.y))],
        _ => {
            let mut c = vec![
                (left(&s.x), right(&s.y)),
                (right(&s.x), left(&s.y)),
                (bottom(&s.x), top(&s.y)),
                (top(&s.x), bottom(&s.y)),
            ];
            for p in &s.x.vertices {
                for q in &s.y.vertices {
                    c.push((p.clone(), q.clone()));
                }
            }
            c
        }
    };
    for (p, q) in candidates {
        if sigma_holds(s.sigma, &p, &q, &unit, &unit) {
            if let Ok(c) = Configuration::unit(vec![p, q]) {
                return Ok(c);
            }
        }
    }
    Err(Error::NoRepresentative)
}

/// Trapezoids of all eroded covering domains, with ids in cover order.
pub fn cover_trapezoids<T: Scalar>(cover: &[PolygonalDomain<T>]) -> Vec<Trapezoid<T>> {
    let h = T::half();
    let mut out: Vec<Trapezoid<T>> = Vec::new();
    for (i, s) in cover.iter().enumerate() {
        for (j, r) in inner_minkowski(s, &h, &h).iter().enumerate() {
            let d = decompose_with_ids(r, Axis::Horizontal, out.len(), i, j);
            out.extend(d.trapezoids);
        }
    }
    out
}

/// Candidate state vertices over all ordered trapezoid pairs, keeping those
/// with a separated representative. Returns the vertices and the number of
/// dropped candidates.
pub fn build_state_vertices<T: Scalar>(w: &[Trapezoid<T>]) -> (Vec<ExposureVertex<T>>, usize) {
    let mut out = Vec::new();
    let mut dropped = 0;
    for x in w {
        for y in w {
            for sigma in state_sigmas(x, y) {
                let state = State2 { x: x.clone(), y: y.clone(), sigma };
                match representative_configuration(&state) {
                    Ok(representative) => out.push(ExposureVertex { state, representative }),
                    Err(_) => dropped += 1,
                }
            }
        }
    }
    (out, dropped)
}

/// Builds the state graph for unit-square robots.
pub fn build_exposure_graph<T: Scalar>(cover: &[PolygonalDomain<T>]) -> Result<ExposureGraph<T>> {
    check_cover(cover)?;
    let trapezoids = cover_trapezoids(cover);
    let (vertices, dropped) = build_state_vertices(&trapezoids);
    let feasibility: Vec<Option<FeasibilityStructure<T>>> =
        cover.iter().map(|s| build_feasibility(s).ok()).collect();
    let mut g = ExposureGraph { cover: cover.to_vec(), trapezoids, vertices, edges: Vec::new(), dropped, feasibility };
    let n = g.vertices.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let edges: Result<Vec<ExposureEdge<T>>> = pairs.par_iter().map(|&(u, v)| g.state_edge(u, v)).collect();
    g.edges = edges?;
    Ok(g)
}

impl<T: Scalar> ExposureGraph<T> {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn zero_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Zero).count()
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Positive).count()
    }

    pub fn feasibility(&self, domain: usize) -> Option<&FeasibilityStructure<T>> {
        self.feasibility.get(domain).and_then(|f| f.as_ref())
    }

    fn state_edge(&self, u: usize, v: usize) -> Result<ExposureEdge<T>> {
        let (a, b) = (&self.vertices[u], &self.vertices[v]);
        if self.zero_reachable(&a.representative, &b.representative)? {
            return Ok(ExposureEdge { u, v, kind: EdgeKind::Zero, weight: T::zero() });
        }
        let shapes = vec![RobotShape::unit(); 2];
        let weight = plan_state_makespan(&a.state, &b.state, &shapes)?.value;
        Ok(ExposureEdge { u, v, kind: EdgeKind::Positive, weight })
    }

    /// Covering domain and eroded component holding a robot at `p`.
    fn scope_of(&self, p: &Point<T>) -> Option<(usize, usize)> {
        let h = T::half();
        let d = self.cover.iter().position(|s| box_fits(s, p, &h, &h))?;
        let f = self.feasibility(d)?;
        let r = f.regions.iter().position(|r| r.contains(p))?;
        Some((d, r))
    }

    /// Whether `a` reaches `b` without leaving the cover. Robots in one
    /// domain are decided by its feasibility structure; robots in different
    /// (interior-disjoint) domains cannot collide and move independently.
    pub fn zero_reachable(&self, a: &Configuration<T>, b: &Configuration<T>) -> Result<bool> {
        let sa: Vec<_> = a.points.iter().map(|p| self.scope_of(p)).collect();
        let sb: Vec<_> = b.points.iter().map(|p| self.scope_of(p)).collect();
        if sa.iter().chain(&sb).any(|s| s.is_none()) {
            return Ok(false);
        }
        let (da, db) = (sa[0].expect("checked").0, sa[1].expect("checked").0);
        if sb[0].expect("checked").0 != da || sb[1].expect("checked").0 != db {
            return Ok(false);
        }
        if da == db {
            let f = self.feasibility(da).expect("scope has a structure");
            f.query_feasible(a, b)
        } else {
            Ok(sa == sb)
        }
    }

    /// Covered schedule from `a` to `b`; fails with `NotReachable`.
    pub fn zero_schedule(&self, a: &Configuration<T>, b: &Configuration<T>) -> Result<Schedule<T>> {
        if a.points == b.points {
            return Ok(Schedule::stationary(a, T::zero(), T::zero()));
        }
        if !self.zero_reachable(a, b)? {
            return Err(Error::NotReachable);
        }
        let d0 = self.scope_of(&a.points[0]).expect("reachable").0;
        let d1 = self.scope_of(&a.points[1]).expect("reachable").0;
        if d0 == d1 {
            return self.feasibility(d0).expect("scope has a structure").reconstruct_zero_exposure_schedule(a, b);
        }
        let p0 = self.feasibility(d0).expect("scope").single_robot_path(&a.points[0], &b.points[0])?;
        let p1 = self.feasibility(d1).expect("scope").single_robot_path(&a.points[1], &b.points[1])?;
        Ok(decoupled_schedule(a, &[(0, p0), (1, p1)]))
    }

    /// Graphviz rendering: zero edges solid, positive edges dashed with
    /// their weights.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exposure {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"X{} Y{} s={}\"];", v.state.x.id, v.state.y.id, v.state.sigma);
        }
        for e in &self.edges {
            match e.kind {
                EdgeKind::Zero => {
                    let _ = writeln!(s, "  v{} -- v{};", e.u, e.v);
                }
                EdgeKind::Positive => {
                    let _ = writeln!(s, "  v{} -- v{} [style=dashed, label=\"{}\"];", e.u, e.v, e.weight);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the graph and answers one query.
pub fn plan_exposure2<T: Scalar>(
    a: &Configuration<T>,
    b: &Configuration<T>,
    cover: &[PolygonalDomain<T>],
) -> Result<ExposurePlan<T>> {
    let g = build_exposure_graph(cover)?;
    plan_exposure_in(&g, a, b)
}

/// How one step of the path is realized.
#[derive(Clone, Debug)]
enum Link<T> {
    Zero,
    /// Exposed transfer; the witness plan from a configuration of the first
    /// vertex to one of the second.
    Positive(T),
}

/// Minimum exposure between `a` and `b` in a prebuilt graph.
pub fn plan_exposure_in<T: Scalar>(g: &ExposureGraph<T>, a: &Configuration<T>, b: &Configuration<T>) -> Result<ExposurePlan<T>> {
    if a.k() != 2 || b.k() != 2 {
        return Err(Error::RobotCount("exposure planning needs two robots".into()));
    }
    let unit: RobotShape<T> = RobotShape::unit();
    if a.shapes.iter().chain(&b.shapes).any(|s| *s != unit) {
        return Err(Error::Invalid("exposure planning needs unit squares".into()));
    }
    if let Some((i, j)) = a.first_overlap().or_else(|| b.first_overlap()) {
        return Err(Error::InfeasibleConfiguration(i, j));
    }
    let n = g.vertices.len();
    let (src, dst) = (n, n + 1);
    let total = n + 2;
    let mut adj: Vec<Vec<Option<Link<T>>>> = vec![vec![None; total]; total];
    for e in &g.edges {
        let l = match e.kind {
            EdgeKind::Zero => Link::Zero,
            EdgeKind::Positive => Link::Positive(e.weight.clone()),
        };
        adj[e.u][e.v] = Some(l.clone());
        adj[e.v][e.u] = Some(l);
    }
    let shapes = vec![unit.clone(), unit];
    for (end, c) in [(src, a), (dst, b)] {
        let links: Vec<(usize, Link<T>)> = if is_covered(c, &g.cover) {
            // zero edges to the states containing the configuration
            let mut out = Vec::new();
            for (i, v) in g.vertices.iter().enumerate() {
                let s = &v.state;
                let inside = s.x.contains(&c.points[0])
                    && s.y.contains(&c.points[1])
                    && sigma_holds(s.sigma, &c.points[0], &c.points[1], &shapes[0], &shapes[1]);
                if inside && g.zero_reachable(c, &v.representative)? {
                    out.push((i, Link::Zero));
                }
            }
            out
        } else {
            let ps = point_state(c);
            g.vertices
                .par_iter()
                .enumerate()
                .map(|(i, v)| Ok((i, Link::Positive(plan_state_makespan(&ps, &v.state, &shapes)?.value))))
                .collect::<Result<Vec<_>>>()?
        };
        for (i, l) in links {
            adj[end][i] = Some(l.clone());
            adj[i][end] = Some(l);
        }
    }
    let direct = plan_makespan2(a, b)?;
    adj[src][dst] = Some(Link::Positive(direct.value.clone()));
    adj[dst][src] = Some(Link::Positive(direct.value));

    let path = shortest_path(&adj, src, dst).ok_or(Error::Unreachable)?;
    let mut value = T::zero();
    let mut kinds = Vec::with_capacity(path.len());
    for w in path.windows(2) {
        match adj[w[0]][w[1]].as_ref().expect("path uses edges") {
            Link::Zero => kinds.push(EdgeKind::Zero),
            Link::Positive(x) => {
                value = value + x.clone();
                kinds.push(EdgeKind::Positive);
            }
        }
    }
    let schedule = reconstruct(g, a, b, &path, &kinds)?;
    let measured = measure_exposure(&schedule, &g.cover);
    Ok(ExposurePlan { value, schedule, path, path_kinds: kinds, measured })
}

/// Dijkstra on a dense graph. Ties prefer fewer edges, then the smaller
/// predecessor id.
fn shortest_path<T: Scalar>(adj: &[Vec<Option<Link<T>>>], src: usize, dst: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut best: Vec<Option<(T, usize)>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    best[src] = Some((T::zero(), 0));
    loop {
        let u = (0..n)
            .filter(|&i| !done[i] && best[i].is_some())
            .min_by(|&i, &j| best[i].cmp(&best[j]).then(i.cmp(&j)))?;
        done[u] = true;
        if u == dst {
            break;
        }
        let (du, hu) = best[u].clone().expect("settled vertices have distances");
        for v in 0..n {
            let Some(l) = &adj[u][v] else { continue };
            if done[v] {
                continue;
            }
            let w = match l {
                Link::Zero => T::zero(),
                Link::Positive(x) => x.clone(),
            };
            let cand = (du.clone() + w, hu + 1);
            let better = match &best[v] {
                None => true,
                Some(cur) => cand < *cur || (cand == *cur && u < pred[v]),
            };
            if better {
                best[v] = Some(cand);
                pred[v] = u;
            }
        }
    }
    let mut path = vec![dst];
    while *path.last().expect("nonempty") != src {
        path.push(pred[*path.last().expect("nonempty")]);
    }
    path.reverse();
    Some(path)
}

fn reconstruct<T: Scalar>(
    g: &ExposureGraph<T>,
    a: &Configuration<T>,
    b: &Configuration<T>,
    path: &[usize],
    kinds: &[EdgeKind],
) -> Result<Schedule<T>> {
    let n = g.vertices.len();
    let shapes = vec![RobotShape::unit(); 2];
    let state_of = |i: usize| -> State2<T> {
        if i == n {
            point_state(a)
        } else if i == n + 1 {
            point_state(b)
        } else {
            g.vertices[i].state.clone()
        }
    };
    let config_of = |i: usize| -> Configuration<T> {
        if i == n {
            a.clone()
        } else if i == n + 1 {
            b.clone()
        } else {
            g.vertices[i].representative.clone()
        }
    };
    let mut schedule = Schedule::stationary(a, T::zero(), T::zero());
    let mut cur = a.clone();
    for (w, kind) in path.windows(2).zip(kinds) {
        match kind {
            EdgeKind::Zero => {
                let target = config_of(w[1]);
                schedule = schedule.then(&g.zero_schedule(&cur, &target)?);
                cur = target;
            }
            EdgeKind::Positive => {
                let plan = if w[0] >= n && w[1] >= n {
                    plan_makespan2(&cur, &config_of(w[1]))?
                } else {
                    plan_state_makespan(&state_of(w[0]), &state_of(w[1]), &shapes)?
                };
                let start = plan.start().clone();
                if start.points != cur.points {
                    schedule = schedule.then(&g.zero_schedule(&cur, &start)?);
                }
                schedule = schedule.then(&plan.schedule);
                cur = plan.end().clone();
            }
        }
    }
    debug_assert_eq!(cur.points, b.points);
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_schedule;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> PolygonalDomain<Q> {
        PolygonalDomain::rect(Q::int(x0), Q::int(y0), Q::int(x1), Q::int(y1))
    }

    fn conf(a: (Q, Q), b: (Q, Q)) -> Configuration<Q> {
        Configuration::unit(vec![Point::new(a.0, a.1), Point::new(b.0, b.1)]).unwrap()
    }

    fn ci(a: (i64, i64), b: (i64, i64)) -> Configuration<Q> {
        conf((Q::int(a.0), Q::int(a.1)), (Q::int(b.0), Q::int(b.1)))
    }

    #[test]
    fn single_square_gives_one_vertex() {
        let g = build_exposure_graph(&[rect(0, 0, 3, 3)]).unwrap();
        assert_eq!(g.trapezoids.len(), 1);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges.is_empty());
        let r = &g.vertices[0].representative;
        assert!(r.separation(0, 1) >= Q::int(0));
    }

    #[test]
    fn thin_strips_only_get_horizontal_sigmas() {
        // side by side, together wider than one unit but lower than one
        let w = vec![rect(0, 0, 2, 1), rect(2, 0, 4, 1)];
        let t = cover_trapezoids(&w);
        // each erosion is a segment, so no trapezoids at all
        assert!(t.is_empty());
        let strips = vec![
            PolygonalDomain::rect(Q::int(0), Q::int(0), Q::int(3), q(19, 10)),
            PolygonalDomain::rect(Q::int(3), Q::int(0), Q::int(6), q(19, 10)),
        ];
        let t = cover_trapezoids(&strips);
        assert_eq!(t.len(), 2);
        for x in &t {
            for y in &t {
                assert_eq!(state_sigmas(x, y), vec![1, -1]);
            }
        }
    }

    #[test]
    fn overlapping_cover_is_rejected() {
        let err = build_exposure_graph(&[rect(0, 0, 3, 3), rect(2, 2, 5, 5)]).unwrap_err();
        assert_eq!(err, Error::OverlappingCover(0, 1));
        let err = build_exposure_graph(&[rect(0, 0, 3, 3), rect(0, 0, 3, 3)]).unwrap_err();
        assert_eq!(err, Error::OverlappingCover(0, 1));
        // touching along an edge is fine
        assert!(check_cover(&[rect(0, 0, 3, 3), rect(3, 0, 6, 3)]).is_ok());
        assert!(check_cover(&[rect(0, 0, 10, 10), rect(2, 2, 3, 3)]).is_err());
    }

    #[test]
    fn covered_endpoints_cost_nothing() {
        let cover = vec![rect(0, 0, 4, 4)];
        let a = ci((1, 1), (3, 3));
        let b = ci((3, 3), (1, 1));
        let p = plan_exposure2(&a, &b, &cover).unwrap();
        assert_eq!(p.value, Q::int(0));
        assert!(validate_schedule(&p.schedule).unwrap().valid);
        assert_eq!(p.measured.exposure, Q::int(0));
        assert_eq!(p.schedule.start_configuration().points, a.points);
        assert_eq!(p.schedule.end_configuration().points, b.points);
    }

    #[test]
    fn empty_cover_is_the_makespan() {
        let a = ci((0, 0), (3, 0));
        let b = ci((3, 0), (0, 0));
        let p = plan_exposure2(&a, &b, &[]).unwrap();
        assert_eq!(p.value, Q::int(4));
        assert_eq!(p.path.len(), 2);
        assert!(validate_schedule(&p.schedule).unwrap().valid);
        assert!(p.measured.exposure <= p.value);
    }

    #[test]
    fn two_squares_with_a_gap() {
        let cover = vec![rect(0, 0, 3, 3), rect(5, 0, 8, 3)];
        let g = build_exposure_graph(&cover).unwrap();
        assert_eq!(g.vertex_count(), 4);
        let a = ci((1, 1), (2, 2));
        let b = ci((6, 1), (7, 2));
        let p = plan_exposure_in(&g, &a, &b).unwrap();
        let direct = plan_makespan2(&a, &b).unwrap().value;
        assert!(p.value <= direct);
        assert!(validate_schedule(&p.schedule).unwrap().valid);
        assert!(p.measured.exposure <= p.value);
        assert_eq!(p.schedule.end_configuration().points, b.points);
    }

    #[test]
    fn dot_output_lists_edges() {
        let cover = vec![rect(0, 0, 3, 3), rect(5, 0, 8, 3)];
        let g = build_exposure_graph(&cover).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph exposure {"));
        assert_eq!(dot.matches(" -- ").count(), g.edges.len());
    }
}
