//! Property tests over random instances.

mod common;

use common::{gen_domain, placements, q, random_pair, Rng8, SeedableRng};
use proptest::prelude::*;
use rectmotion::exposure::{build_exposure_graph, plan_exposure_in, representative_configuration, ExposureGraph};
use rectmotion::feas2::build_feasibility;
use rectmotion::geom::{box_fits, contains_unit_square, decompose, inner_minkowski, Axis, ConvexPolygon};
use rectmotion::lp::{LinExpr, LinearProgram, LpStatus, Relation, Var};
use rectmotion::model::{
    diameter, distance_sum, measure_exposure, validate_schedule, Objective, RobotShape, Schedule, Trajectory,
};
use rectmotion::oracle::{grid_cmp, GridInstance};
use rectmotion::orderings::{build_transition_graph, commonly_ordered, orderings_containing, robot_pairs};
use rectmotion::planner2::{plan_makespan2, plan_state_makespan, plan_state_sum, plan_sum2, point_state};
use rectmotion::plannerk::{plan_k_in, same_ordering_schedule_k, SearchOptions};
use num_traits::Zero;
use rectmotion::{Configuration, Point, PolygonalDomain, Rational, Scalar};
use std::sync::OnceLock;

fn rat(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rational> {
    (lo * den..=hi * den).prop_map(move |n| q(n, den))
}

fn pt(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Point> {
    (rat(lo, hi, den), rat(lo, hi, den)).prop_map(|(x, y)| Point::new(x, y))
}

/// Feasible unit-square configurations of `k` robots.
fn config(k: usize, lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Configuration> {
    proptest::collection::vec(pt(lo, hi, den), k)
        .prop_filter_map("robots overlap", |pts| Configuration::unit(pts).ok())
}

fn pair_instance() -> impl Strategy<Value = (Configuration, Configuration)> {
    (config(2, -6, 6, 4), config(2, -6, 6, 4))
}

fn swap_labels(c: &Configuration) -> Configuration {
    Configuration::unit(vec![c.points[1].clone(), c.points[0].clone()]).unwrap()
}

fn domain_and_config(seed: u64) -> Option<(PolygonalDomain, Configuration)> {
    let mut rng = Rng8::seed_from_u64(seed);
    let d = gen_domain(&mut rng);
    let spots = placements(&d);
    random_pair(&mut rng, &spots).map(|c| (d, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn erosion_matches_box_containment(seed in 0u64..10_000, samples in proptest::collection::vec((0i64..80, 0i64..80), 40)) {
        let mut rng = Rng8::seed_from_u64(seed);
        let d = gen_domain(&mut rng);
        let h = q(1, 2);
        let regions = inner_minkowski(&d, &h, &h);
        let (lo, _) = d.bbox();
        for (i, j) in samples {
            // quarter lattice, reaching past the domain on two sides
            let p = Point::new(lo.x.clone() + q(i, 4) - Rational::int(1), lo.y.clone() + q(j, 4) - Rational::int(1));
            let inside = regions.iter().any(|r| r.contains(&p));
            prop_assert_eq!(inside, box_fits(&d, &p, &h, &h), "at {:?}", p);
        }
    }

    #[test]
    fn decompositions_partition_regions(seed in 0u64..10_000, weights in proptest::collection::vec(1i64..9, 4)) {
        let mut rng = Rng8::seed_from_u64(seed);
        let d = gen_domain(&mut rng);
        let h = q(1, 2);
        for r in inner_minkowski(&d, &h, &h) {
            for axis in [Axis::Horizontal, Axis::Vertical] {
                let dec = decompose(&r, axis);
                prop_assert_eq!(dec.total_area(), r.area());
                for (id, t) in dec.trapezoids.iter().enumerate() {
                    if t.area().is_zero() {
                        continue;
                    }
                    // strictly positive weights give an interior point
                    let mut sx = Rational::zero();
                    let mut sy = Rational::zero();
                    let mut total = Rational::zero();
                    for (v, w) in t.vertices.iter().zip(weights.iter().cycle()) {
                        let w = Rational::int(*w);
                        sx += v.x.clone() * w.clone();
                        sy += v.y.clone() * w.clone();
                        total += w;
                    }
                    let p = Point::new(sx / total.clone(), sy / total);
                    prop_assert_eq!(dec.locate(&p), Some(id));
                    prop_assert!(r.contains(&p));
                }
            }
        }
    }

    #[test]
    fn unit_square_test_is_monotone(
        base in proptest::collection::vec(pt(-2, 2, 2), 3..7),
        extra in proptest::collection::vec(pt(-3, 3, 2), 1..4),
    ) {
        let z = ConvexPolygon::hull_of(&base);
        let mut all = base.clone();
        all.extend(extra);
        let z2 = ConvexPolygon::hull_of(&all);
        if contains_unit_square(&z) {
            prop_assert!(contains_unit_square(&z2));
        }
    }

    #[test]
    fn small_lps_reach_the_best_vertex(
        rows in proptest::collection::vec((-4i64..=4, -4i64..=4, -6i64..=12), 1..5),
        cost in (-3i64..=3, -3i64..=3),
    ) {
        // box |x|, |y| <= 10 keeps every program bounded
        let mut cons: Vec<(i64, i64, i64)> = vec![(1, 0, 10), (-1, 0, 10), (0, 1, 10), (0, -1, 10)];
        cons.extend(rows.into_iter().filter(|r| r.0 != 0 || r.1 != 0));
        let mut lp = LinearProgram::new();
        let x = lp.free_var("x");
        let y = lp.free_var("y");
        for &(a, b, c) in &cons {
            lp.add_constraint(
                LinExpr::new().term(x, Rational::int(a)).term(y, Rational::int(b)),
                Relation::Le,
                Rational::int(c),
            );
        }
        lp.minimize(LinExpr::new().term(x, Rational::int(cost.0)).term(y, Rational::int(cost.1)));
        let sol = lp.solve();

        let mut best: Option<Rational> = None;
        for (i, &(a1, b1, c1)) in cons.iter().enumerate() {
            for &(a2, b2, c2) in &cons[i + 1..] {
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let px = q(c1 * b2 - c2 * b1, det);
                let py = q(a1 * c2 - a2 * c1, det);
                let ok = cons.iter().all(|&(a, b, c)| Rational::int(a) * px.clone() + Rational::int(b) * py.clone() <= Rational::int(c));
                if ok {
                    let v = Rational::int(cost.0) * px + Rational::int(cost.1) * py;
                    if best.as_ref().map_or(true, |b| v < *b) {
                        best = Some(v);
                    }
                }
            }
        }
        match best {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some(b) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!(lp.satisfied_by(&sol.values));
                prop_assert_eq!(sol.objective, b);
            }
        }
    }

    #[test]
    fn schedule_measures_respect_bounds(
        legs in proptest::collection::vec(proptest::collection::vec((pt(-4, 4, 2), 0i64..3), 1..4), 2..4),
        starts in proptest::collection::vec(pt(-4, 4, 2), 2..4),
        cover_corner in pt(-4, 2, 2),
    ) {
        // unit-speed trajectories with random waits, all padded to one horizon
        let k = legs.len().min(starts.len());
        let mut trajectories = Vec::new();
        for (s, path) in starts.iter().zip(&legs).take(k) {
            let mut t = Rational::zero();
            let mut bps = vec![(t.clone(), s.clone())];
            let mut at = s.clone();
            for (p, wait) in path {
                t += rectmotion::geom::l1_dist(&at, p);
                bps.push((t.clone(), p.clone()));
                t += Rational::int(*wait);
                bps.push((t.clone(), p.clone()));
                at = p.clone();
            }
            trajectories.push(Trajectory::new(bps).unwrap());
        }
        let end = trajectories.iter().map(|t| t.end_time().clone()).max().unwrap();
        for t in &mut trajectories {
            t.hold_until(&end);
        }
        let m = Schedule { trajectories, shapes: vec![RobotShape::unit(); k] };
        let a = m.start_configuration();
        let b = m.end_configuration();
        prop_assert!(m.makespan() >= diameter(&a, &b));
        prop_assert!(m.sum() >= distance_sum(&a, &b));

        let report = validate_schedule(&m).unwrap();
        let back = validate_schedule(&m.reversed()).unwrap();
        prop_assert_eq!(report.valid, back.valid);

        let cover = vec![PolygonalDomain::rect(
            cover_corner.x.clone(), cover_corner.y.clone(),
            cover_corner.x.clone() + Rational::int(3), cover_corner.y.clone() + Rational::int(3),
        )];
        prop_assert!(measure_exposure(&m, &cover).exposure <= m.makespan());
    }

    #[test]
    fn orderings_agree_with_lp_constraints(c in config(3, -4, 4, 2)) {
        let shapes = c.shapes.clone();
        let g = build_transition_graph(3, &shapes).unwrap();
        let direct = orderings_containing(&c, &g).unwrap();
        let values: Vec<Rational> = c.points.iter().flat_map(|p| [p.x.clone(), p.y.clone()]).collect();
        let xs: Vec<LinExpr<Rational>> = (0..3).map(|i| LinExpr::var(Var(2 * i))).collect();
        let ys: Vec<LinExpr<Rational>> = (0..3).map(|i| LinExpr::var(Var(2 * i + 1))).collect();
        let mut by_lp = Vec::new();
        for (v, o) in g.vertices.iter().enumerate() {
            let mut lp = LinearProgram::new();
            for i in 0..6 {
                lp.free_var(format!("v{i}"));
            }
            o.add_to_lp(&mut lp, &xs, &ys, &shapes);
            if lp.satisfied_by(&values) {
                by_lp.push(v);
            }
        }
        prop_assert_eq!(direct, by_lp);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_robot_plans_are_sound((a, b) in pair_instance()) {
        for objective in [Objective::Makespan, Objective::Sum] {
            let p = match objective {
                Objective::Makespan => plan_makespan2(&a, &b).unwrap(),
                Objective::Sum => plan_sum2(&a, &b).unwrap(),
            };
            let r = validate_schedule(&p.schedule).unwrap();
            prop_assert!(r.valid);
            prop_assert_eq!(&p.schedule.start_configuration(), &a);
            prop_assert_eq!(&p.schedule.end_configuration(), &b);
            let (measured, bound) = match objective {
                Objective::Makespan => (r.makespan, diameter(&a, &b)),
                Objective::Sum => (r.sum, distance_sum(&a, &b)),
            };
            prop_assert_eq!(&measured, &p.value);
            prop_assert!(p.value >= bound);
            if commonly_ordered(&a, &b) {
                prop_assert_eq!(p.value, bound);
            }
        }
    }

    #[test]
    fn two_robot_values_are_symmetric((a, b) in pair_instance()) {
        let m = plan_makespan2(&a, &b).unwrap().value;
        let s = plan_sum2(&a, &b).unwrap().value;
        prop_assert_eq!(&plan_makespan2(&b, &a).unwrap().value, &m);
        prop_assert_eq!(&plan_sum2(&b, &a).unwrap().value, &s);
        let (a2, b2) = (swap_labels(&a), swap_labels(&b));
        prop_assert_eq!(&plan_makespan2(&a2, &b2).unwrap().value, &m);
        prop_assert_eq!(&plan_sum2(&a2, &b2).unwrap().value, &s);
        let shapes = a.shapes.clone();
        prop_assert_eq!(plan_state_makespan(&point_state(&a), &point_state(&b), &shapes).unwrap().value, m);
        prop_assert_eq!(plan_state_sum(&point_state(&a), &point_state(&b), &shapes).unwrap().value, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn same_ordering_pairs_validate(
        a in config(3, -5, 5, 2),
        shift in pt(-6, 6, 2),
        jitter in proptest::collection::vec(pt(0, 1, 4), 3),
    ) {
        let pts: Vec<Point> = a.points.iter().zip(&jitter).map(|(p, j)| Point::new(p.x.clone() + shift.x.clone() + j.x.clone(), p.y.clone() + shift.y.clone() + j.y.clone())).collect();
        let b = Configuration::unit(pts);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        prop_assume!(commonly_ordered(&a, &b));
        let m = same_ordering_schedule_k(&a, &b).unwrap();
        prop_assert!(validate_schedule(&m).unwrap().valid);
        prop_assert_eq!(m.makespan(), diameter(&a, &b));
        for (i, j) in robot_pairs(3) {
            prop_assert!(validate_schedule(&m.select(&[i, j])).unwrap().valid);
        }
    }

    #[test]
    fn longer_searches_never_hurt(a in config(3, -3, 3, 1), b in config(3, -3, 3, 1)) {
        static GRAPH: OnceLock<rectmotion::orderings::TransitionGraph<Rational>> = OnceLock::new();
        let g = GRAPH.get_or_init(|| build_transition_graph(3, &[RobotShape::unit(), RobotShape::unit(), RobotShape::unit()]).unwrap());
        let mut last: Option<Rational> = None;
        for max_len in 1..=3 {
            let opts = SearchOptions { max_len, ..SearchOptions::default() };
            if let Ok(p) = plan_k_in(g, &a, &b, Objective::Makespan, &opts) {
                prop_assert!(validate_schedule(&p.schedule).unwrap().valid);
                prop_assert_eq!(&p.schedule.makespan(), &p.value);
                if let Some(prev) = &last {
                    prop_assert!(p.value <= *prev);
                }
                last = Some(p.value);
            } else {
                prop_assert!(last.is_none(), "a longer search lost a solution");
            }
        }
    }

    #[test]
    fn normalization_keeps_relations(seed in 0u64..10_000) {
        let Some((d, c)) = domain_and_config(seed) else { return Ok(()) };
        let f = build_feasibility(&d).unwrap();
        let n = f.normalize_to_corner(&c).unwrap();
        prop_assert_eq!(&n.schedule.start_configuration().points, &c.points);
        prop_assert_eq!(&n.schedule.end_configuration(), &n.configuration);
        let g = build_transition_graph(2, &c.shapes).unwrap();
        let before = orderings_containing(&c, &g).unwrap();
        // relations are half-planes, so checking breakpoints covers the segments between
        for t in n.schedule.breakpoint_times() {
            let now = orderings_containing(&n.schedule.configuration_at(&t), &g).unwrap();
            for o in &before {
                prop_assert!(now.contains(o), "ordering {} lost at t = {}", g.vertices[*o], t);
            }
        }
    }

    #[test]
    fn reconstruction_moves_one_robot_at_a_time(seed in 0u64..10_000) {
        let Some((d, a)) = domain_and_config(seed) else { return Ok(()) };
        let mut rng = Rng8::seed_from_u64(seed ^ 0x5eed);
        let Some(b) = random_pair(&mut rng, &placements(&d)) else { return Ok(()) };
        let f = build_feasibility(&d).unwrap();
        prop_assume!(f.query_feasible(&a, &b).unwrap());
        let m = f.reconstruct_zero_exposure_schedule(&a, &b).unwrap();
        prop_assert!(rectmotion::model::schedule_in_domain(&m, &d));
        let times = m.breakpoint_times();
        for w in times.windows(2) {
            let (p, q) = (m.configuration_at(&w[0]), m.configuration_at(&w[1]));
            let moving = (0..2).filter(|&i| p.points[i] != q.points[i]).count();
            prop_assert!(moving <= 1);
        }
    }

    #[test]
    fn exposure_distances_behave((a, b) in (config(2, 0, 8, 2), config(2, 0, 8, 2)), via in 0usize..64) {
        static GRAPH: OnceLock<ExposureGraph<Rational>> = OnceLock::new();
        let g = GRAPH.get_or_init(|| {
            let cover = vec![
                PolygonalDomain::rect(Rational::int(0), Rational::int(0), Rational::int(3), Rational::int(3)),
                PolygonalDomain::rect(Rational::int(5), Rational::int(0), Rational::int(8), Rational::int(3)),
            ];
            build_exposure_graph(&cover).unwrap()
        });
        let p = plan_exposure_in(g, &a, &b).unwrap();
        prop_assert!(validate_schedule(&p.schedule).unwrap().valid);
        prop_assert_eq!(&p.schedule.start_configuration(), &a);
        prop_assert_eq!(&p.schedule.end_configuration(), &b);
        prop_assert!(p.measured.exposure <= p.value);
        prop_assert!(p.value <= plan_makespan2(&a, &b).unwrap().value);
        let c = representative_configuration(&g.vertices[via % g.vertices.len()].state).unwrap();
        let ac = plan_exposure_in(g, &a, &c).unwrap().value;
        let cb = plan_exposure_in(g, &c, &b).unwrap().value;
        prop_assert!(p.value <= ac + cb);
    }

    #[test]
    fn oracle_respects_lower_bounds((a, b) in (config(2, 0, 3, 1), config(2, 0, 3, 1))) {
        let inst = GridInstance::new(a.clone(), b.clone()).with_step(Rational::int(1));
        let m = grid_cmp(&inst, Objective::Makespan).unwrap();
        let s = grid_cmp(&inst, Objective::Sum).unwrap();
        prop_assert!(m >= diameter(&a, &b));
        prop_assert!(s >= distance_sum(&a, &b));
        prop_assert!(plan_makespan2(&a, &b).unwrap().value <= m);
        prop_assert!(plan_sum2(&a, &b).unwrap().value <= s);
    }
}
