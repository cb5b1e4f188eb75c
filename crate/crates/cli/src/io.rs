//! JSON reading and writing. Numbers travel as `"p/q"` strings; plain JSON
//! numbers are accepted on input.

use std::fs;
use std::path::Path;

use rectmotion::model::{validate_schedule, Violation};
use rectmotion::{
    format_rational, parse_rational, Configuration, Point, PolygonalDomain, Rational, RobotShape, Schedule, Trajectory,
};
use serde_json::{json, Map, Value};

use crate::CliError;

type Res<T> = std::result::Result<T, CliError>;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Reads and parses a JSON file; syntax errors carry line and column.
pub fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| input(format!("{}:{}:{}: {}", path.display(), e.line(), e.column(), e)))
}

pub fn rational(v: &Value, at: &str) -> Res<Rational> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(input(format!("{at}: expected a number or a \"p/q\" string"))),
    };
    parse_rational(&s).map_err(|e| input(format!("{at}: {e}")))
}

fn array<'a>(v: &'a Value, at: &str) -> Res<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| input(format!("{at}: expected an array")))
}

pub fn point(v: &Value, at: &str) -> Res<Point> {
    let a = array(v, at)?;
    if a.len() != 2 {
        return Err(input(format!("{at}: expected [x, y]")));
    }
    Ok(Point::new(rational(&a[0], &format!("{at}[0]"))?, rational(&a[1], &format!("{at}[1]"))?))
}

/// `[w, h]`, full width and height.
pub fn shape(v: &Value, at: &str) -> Res<RobotShape> {
    let a = array(v, at)?;
    if a.len() != 2 {
        return Err(input(format!("{at}: expected [w, h]")));
    }
    let w = rational(&a[0], &format!("{at}[0]"))?;
    let h = rational(&a[1], &format!("{at}[1]"))?;
    RobotShape::rect(w, h).map_err(|e| input(format!("{at}: {e}")))
}

fn ring(v: &Value, at: &str) -> Res<Vec<Point>> {
    array(v, at)?.iter().enumerate().map(|(i, p)| point(p, &format!("{at}[{i}]"))).collect()
}

pub fn polygon(v: &Value, at: &str) -> Res<PolygonalDomain> {
    let outer = ring(v.get("outer").ok_or_else(|| input(format!("{at}: missing \"outer\"")))?, &format!("{at}.outer"))?;
    let holes = match v.get("holes") {
        None | Some(Value::Null) => Vec::new(),
        Some(h) => array(h, &format!("{at}.holes"))?
            .iter()
            .enumerate()
            .map(|(i, r)| ring(r, &format!("{at}.holes[{i}]")))
            .collect::<Res<_>>()?,
    };
    PolygonalDomain::new(outer, holes).map_err(|e| input(format!("{at}: {e}")))
}

/// A cover file holds a list of polygons, one polygon, or an object with a
/// `"cover"` list.
pub fn cover(v: &Value, at: &str) -> Res<Vec<PolygonalDomain>> {
    if let Some(c) = v.get("cover") {
        return cover(c, &format!("{at}.cover"));
    }
    if v.get("outer").is_some() {
        return Ok(vec![polygon(v, at)?]);
    }
    array(v, at)?.iter().enumerate().map(|(i, p)| polygon(p, &format!("{at}[{i}]"))).collect()
}

/// `"x,y;x,y;..."` from the command line.
pub fn points_arg(s: &str, what: &str) -> Res<Vec<Point>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| input(format!("{what}: expected x,y in {p:?}")))?;
            let x = parse_rational(x).map_err(|e| input(format!("{what}: {e}")))?;
            let y = parse_rational(y).map_err(|e| input(format!("{what}: {e}")))?;
            Ok(Point::new(x, y))
        })
        .collect()
}

/// `"WxH,WxH,..."` from the command line.
pub fn shapes_arg(s: &str) -> Res<Vec<RobotShape>> {
    s.split(',')
        .map(|p| {
            let (w, h) = p.split_once('x').ok_or_else(|| input(format!("--shapes: expected WxH in {p:?}")))?;
            let w = parse_rational(w).map_err(|e| input(format!("--shapes: {e}")))?;
            let h = parse_rational(h).map_err(|e| input(format!("--shapes: {e}")))?;
            RobotShape::rect(w, h).map_err(|e| input(format!("--shapes: {e}")))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub start: Configuration,
    pub target: Configuration,
    pub cover: Vec<PolygonalDomain>,
    pub domain: Option<PolygonalDomain>,
    pub metadata: Value,
}

pub fn configuration(points: Vec<Point>, shapes: Vec<RobotShape>, at: &str) -> Res<Configuration> {
    Configuration::new(points, shapes).map_err(|e| input(format!("{at}: {e}")))
}

impl Instance {
    pub fn from_json(v: &Value) -> Res<Instance> {
        let robots = array(v.get("robots").ok_or_else(|| input("missing \"robots\""))?, "robots")?;
        if robots.is_empty() {
            return Err(input("robots: at least one robot is required"));
        }
        let (mut starts, mut targets, mut shapes) = (Vec::new(), Vec::new(), Vec::new());
        for (i, r) in robots.iter().enumerate() {
            let at = format!("robots[{i}]");
            let field = |k: &str| r.get(k).ok_or_else(|| input(format!("{at}: missing \"{k}\"")));
            starts.push(point(field("start")?, &format!("{at}.start"))?);
            targets.push(point(field("target")?, &format!("{at}.target"))?);
            shapes.push(match r.get("shape") {
                None | Some(Value::Null) => RobotShape::unit(),
                Some(s) => shape(s, &format!("{at}.shape"))?,
            });
        }
        let cover = match v.get("cover") {
            None | Some(Value::Null) => Vec::new(),
            Some(c) => cover(c, "cover")?,
        };
        let domain = match v.get("domain") {
            None | Some(Value::Null) => None,
            Some(d) => Some(polygon(d, "domain")?),
        };
        Ok(Instance {
            start: configuration(starts, shapes.clone(), "robots (start)")?,
            target: configuration(targets, shapes, "robots (target)")?,
            cover,
            domain,
            metadata: v.get("metadata").cloned().unwrap_or(Value::Null),
        })
    }

    pub fn load(path: &Path) -> Res<Instance> {
        Instance::from_json(&read_json(path)?).map_err(|e| match e {
            CliError::Input(m) => input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Replaces all robot shapes, re-checking both endpoints.
    pub fn with_shapes(self, shapes: Vec<RobotShape>) -> Res<Instance> {
        if shapes.len() != self.start.k() {
            return Err(input(format!("--shapes: {} shapes for {} robots", shapes.len(), self.start.k())));
        }
        Ok(Instance {
            start: configuration(self.start.points, shapes.clone(), "robots (start)")?,
            target: configuration(self.target.points, shapes, "robots (target)")?,
            ..self
        })
    }
}

pub fn num(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn point_json(p: &Point) -> Value {
    json!([num(&p.x), num(&p.y)])
}

fn shape_json(s: &RobotShape) -> Value {
    let two = Rational::from_integer(2.into());
    json!([num(&(s.half_width.clone() * two.clone())), num(&(s.half_height.clone() * two))])
}

pub fn configuration_json(c: &Configuration) -> Value {
    Value::Array(c.points.iter().map(point_json).collect())
}

pub fn schedule_json(m: &Schedule) -> Value {
    let trajectories: Vec<Value> = m
        .trajectories
        .iter()
        .map(|tr| {
            Value::Array(
                tr.breakpoints.iter().map(|(t, p)| json!({"t": num(t), "x": num(&p.x), "y": num(&p.y)})).collect(),
            )
        })
        .collect();
    json!({
        "trajectories": trajectories,
        "shapes": m.shapes.iter().map(shape_json).collect::<Vec<_>>(),
    })
}

/// Accepts a bare schedule, a plan output with a `"schedule"` field, or a
/// bare list of trajectories. Shapes missing from the file come from
/// `fallback`.
pub fn schedule(v: &Value, fallback: &[RobotShape], at: &str) -> Res<Schedule> {
    if let Some(s) = v.get("schedule") {
        return schedule(s, fallback, &format!("{at}.schedule"));
    }
    let (trs, tr_at) = match v.get("trajectories") {
        Some(t) => (array(t, &format!("{at}.trajectories"))?, format!("{at}.trajectories")),
        None => (array(v, at)?, at.to_string()),
    };
    let mut trajectories = Vec::new();
    for (i, tr) in trs.iter().enumerate() {
        let at = format!("{tr_at}[{i}]");
        let mut bps = Vec::new();
        for (j, b) in array(tr, &at)?.iter().enumerate() {
            let at = format!("{at}[{j}]");
            let get = |k: &str| b.get(k).ok_or_else(|| input(format!("{at}: missing \"{k}\"")));
            let t = rational(get("t")?, &format!("{at}.t"))?;
            let x = rational(get("x")?, &format!("{at}.x"))?;
            let y = rational(get("y")?, &format!("{at}.y"))?;
            bps.push((t, Point::new(x, y)));
        }
        trajectories.push(Trajectory::new(bps).map_err(|e| input(format!("{at}: {e}")))?);
    }
    let shapes = match v.get("shapes") {
        Some(s) => array(s, &format!("{at}.shapes"))?
            .iter()
            .enumerate()
            .map(|(i, s)| shape(s, &format!("{at}.shapes[{i}]")))
            .collect::<Res<Vec<_>>>()?,
        None => fallback.to_vec(),
    };
    if shapes.len() != trajectories.len() {
        return Err(input(format!("{at}: {} trajectories but {} shapes", trajectories.len(), shapes.len())));
    }
    let m = Schedule { trajectories, shapes };
    m.common_interval().map_err(|e| input(format!("{at}: {e}")))?;
    Ok(m)
}

/// Validation summary of a schedule as JSON, plus whether it is valid.
pub fn validation_json(m: &Schedule) -> Res<(Value, bool)> {
    let r = validate_schedule(m).map_err(|e| input(e.to_string()))?;
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| match v {
            Violation::Collision { i, j, t, separation } => json!({
                "kind": "collision", "robots": [i, j], "t": num(t), "separation": num(separation),
            }),
            Violation::Speed { robot, t0, t1 } => json!({
                "kind": "speed", "robot": robot, "t0": num(t0), "t1": num(t1),
            }),
        })
        .collect();
    let mut o = Map::new();
    o.insert("valid".into(), Value::Bool(r.valid));
    o.insert("checks".into(), json!(r.checks));
    o.insert("violations".into(), Value::Array(violations));
    o.insert("makespan".into(), num(&r.makespan));
    o.insert("sum".into(), num(&r.sum));
    Ok((Value::Object(o), r.valid))
}
