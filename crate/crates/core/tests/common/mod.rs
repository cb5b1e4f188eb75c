//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rectmotion::geom::box_fits;
use rectmotion::{Configuration, Point, PolygonalDomain, Rational};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Point from half-unit lattice coordinates.
pub fn half_pt(x: i64, y: i64) -> Point {
    Point::new(q(x, 2), q(y, 2))
}

pub fn rect_h(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<Point> {
    vec![half_pt(x0, y0), half_pt(x1, y0), half_pt(x1, y1), half_pt(x0, y1)]
}

/// Rectilinear domains on the half lattice: corridors, rooms with a hole,
/// rooms split by a hanging wall, and L shapes. No passage has width exactly
/// one robot, where the feasible region would degenerate to a segment.
pub fn gen_domain(rng: &mut Rng8) -> PolygonalDomain {
    match rng.gen_range(0..4) {
        0 => {
            let w = rng.gen_range(8..=18);
            let h = *[3, 4, 5, 6, 7].choose(rng).unwrap();
            PolygonalDomain::new(rect_h(0, 0, w, h), vec![]).unwrap()
        }
        1 => {
            let margins = [1, 3, 4, 5];
            let (l, r, b, t) =
                (*margins.choose(rng).unwrap(), *margins.choose(rng).unwrap(), *margins.choose(rng).unwrap(), *margins.choose(rng).unwrap());
            let hw = rng.gen_range(2..=6);
            let hh = rng.gen_range(2..=5);
            let (w, h) = (l + hw + r, b + hh + t);
            PolygonalDomain::new(rect_h(0, 0, w, h), vec![rect_h(l, b, l + hw, b + hh)]).unwrap()
        }
        2 => {
            let w = rng.gen_range(10..=18);
            let h = rng.gen_range(4..=7);
            let a = rng.gen_range(3..=w - 5);
            let ww = rng.gen_range(1..=3);
            let gap = *[1, 3, 4].choose(rng).unwrap();
            let ring = vec![
                half_pt(0, 0),
                half_pt(w, 0),
                half_pt(w, h),
                half_pt(a + ww, h),
                half_pt(a + ww, gap),
                half_pt(a, gap),
                half_pt(a, h),
                half_pt(0, h),
            ];
            PolygonalDomain::new(ring, vec![]).unwrap()
        }
        _ => {
            let arm = [3, 4, 5, 6];
            let w = rng.gen_range(8..=14);
            let h = rng.gen_range(8..=14);
            let aw = *arm.choose(rng).unwrap();
            let ah = *arm.choose(rng).unwrap();
            let ring = vec![half_pt(0, 0), half_pt(w, 0), half_pt(w, ah), half_pt(aw, ah), half_pt(aw, h), half_pt(0, h)];
            PolygonalDomain::new(ring, vec![]).unwrap()
        }
    }
}

/// Half-lattice placements of a unit square inside `d`.
pub fn placements(d: &PolygonalDomain) -> Vec<Point> {
    let (lo, hi) = d.bbox();
    let two = Rational::from_integer(2.into());
    let to_i = |v: &Rational| -> i64 { (v * &two).to_integer().try_into().unwrap() };
    let h = q(1, 2);
    let mut out = Vec::new();
    for x in to_i(&lo.x)..=to_i(&hi.x) {
        for y in to_i(&lo.y)..=to_i(&hi.y) {
            let p = half_pt(x, y);
            if box_fits(d, &p, &h, &h) {
                out.push(p);
            }
        }
    }
    out
}

pub fn random_pair(rng: &mut Rng8, spots: &[Point]) -> Option<Configuration> {
    for _ in 0..200 {
        let a = spots.choose(rng)?.clone();
        let b = spots.choose(rng)?.clone();
        if let Ok(c) = Configuration::unit(vec![a, b]) {
            return Some(c);
        }
    }
    None
}

pub fn swapped(c: &Configuration) -> Configuration {
    Configuration::unit(vec![c.points[1].clone(), c.points[0].clone()]).unwrap()
}
