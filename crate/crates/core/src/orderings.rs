//! Orderings of k robots and the transition graph between them.
//!
//! An ordering fixes, for every robot pair `i < j`, an axis-parallel
//! separator: robot `i` lies left of, right of, below or above robot `j`.
//! Two orderings are adjacent when no pair has opposite relations in them.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::lp::{LinExpr, LinearProgram, LpStatus, Relation, Var};
use crate::model::{pair_offsets, Configuration, RobotShape};
use crate::scalar::Scalar;

/// Default upper bound on the number of robots for graph construction.
pub const DEFAULT_MAX_ROBOTS: usize = 4;

/// Position of robot `i` relative to robot `j` (for the pair `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairRelation {
    LeftOf,
    RightOf,
    Below,
    Above,
}

impl PairRelation {
    pub const ALL: [PairRelation; 4] = [PairRelation::LeftOf, PairRelation::RightOf, PairRelation::Below, PairRelation::Above];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Self {
        match self {
            PairRelation::LeftOf => PairRelation::RightOf,
            PairRelation::RightOf => PairRelation::LeftOf,
            PairRelation::Below => PairRelation::Above,
            PairRelation::Above => PairRelation::Below,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, PairRelation::LeftOf | PairRelation::RightOf)
    }

    /// `(axis, sign)` such that the relation reads `sign * (c_j - c_i) >= offset`
    /// along axis 0 (x) or 1 (y).
    fn axis_sign(self) -> (usize, i64) {
        match self {
            PairRelation::LeftOf => (0, 1),
            PairRelation::RightOf => (0, -1),
            PairRelation::Below => (1, 1),
            PairRelation::Above => (1, -1),
        }
    }

    /// Whether robots at `p` (robot i) and `q` (robot j) satisfy the relation.
    pub fn holds<T: Scalar>(self, p: &crate::geom::Point<T>, q: &crate::geom::Point<T>, si: &RobotShape<T>, sj: &RobotShape<T>) -> bool {
        let (sx, sy) = pair_offsets(si, sj);
        match self {
            PairRelation::LeftOf => q.x.clone() - p.x.clone() >= sx,
            PairRelation::RightOf => p.x.clone() - q.x.clone() >= sx,
            PairRelation::Below => q.y.clone() - p.y.clone() >= sy,
            PairRelation::Above => p.y.clone() - q.y.clone() >= sy,
        }
    }

    /// Adds the separation inequality for LP coordinates `(xi, yi)`, `(xj, yj)`.
    pub fn add_to_lp<T: Scalar>(
        self,
        lp: &mut LinearProgram<T>,
        pi: (&LinExpr<T>, &LinExpr<T>),
        pj: (&LinExpr<T>, &LinExpr<T>),
        si: &RobotShape<T>,
        sj: &RobotShape<T>,
    ) {
        let (sx, sy) = pair_offsets(si, sj);
        let (axis, sign) = self.axis_sign();
        let (ci, cj, off) = if axis == 0 { (pi.0, pj.0, sx) } else { (pi.1, pj.1, sy) };
        let diff = cj.clone().sub(ci).scale(&T::int(sign));
        lp.add_constraint(diff, Relation::Ge, off);
    }
}

impl fmt::Display for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairRelation::LeftOf => "left-of",
            PairRelation::RightOf => "right-of",
            PairRelation::Below => "below",
            PairRelation::Above => "above",
        })
    }
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn robot_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordering {
    /// One relation per pair, in [`robot_pairs`] order.
    pub relations: Vec<PairRelation>,
}

impl Ordering {
    pub fn new(relations: Vec<PairRelation>) -> Self {
        Ordering { relations }
    }

    /// Base-4 code with the first pair as the least significant digit.
    pub fn id(&self) -> u64 {
        self.relations.iter().rev().fold(0u64, |acc, r| acc * 4 + r.index() as u64)
    }

    pub fn from_id(id: u64, pairs: usize) -> Self {
        let mut id = id;
        let relations = (0..pairs)
            .map(|_| {
                let r = PairRelation::ALL[(id % 4) as usize];
                id /= 4;
                r
            })
            .collect();
        Ordering { relations }
    }

    pub fn k(&self) -> usize {
        let mut k = 1;
        while k * (k - 1) / 2 < self.relations.len() {
            k += 1;
        }
        k
    }

    /// Relation of robot `i` to robot `j`, for any `i != j`.
    pub fn relation(&self, i: usize, j: usize) -> PairRelation {
        let k = self.k();
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let idx = a * (2 * k - a - 1) / 2 + (b - a - 1);
        let r = self.relations[idx];
        if flip {
            r.opposite()
        } else {
            r
        }
    }

    /// Direct inequality check.
    pub fn contains<T: Scalar>(&self, p: &Configuration<T>) -> bool {
        robot_pairs(p.k())
            .into_iter()
            .zip(&self.relations)
            .all(|((i, j), r)| r.holds(&p.points[i], &p.points[j], &p.shapes[i], &p.shapes[j]))
    }

    /// No pair has opposite relations.
    pub fn adjacent_to(&self, other: &Ordering) -> bool {
        self != other && self.relations.iter().zip(&other.relations).all(|(a, b)| *a != b.opposite())
    }

    /// Adds this ordering's separation constraints on LP coordinates.
    pub fn add_to_lp<T: Scalar>(&self, lp: &mut LinearProgram<T>, xs: &[LinExpr<T>], ys: &[LinExpr<T>], shapes: &[RobotShape<T>]) {
        for ((i, j), r) in robot_pairs(shapes.len()).into_iter().zip(&self.relations) {
            r.add_to_lp(lp, (&xs[i], &ys[i]), (&xs[j], &ys[j]), &shapes[i], &shapes[j]);
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k();
        for (n, ((i, j), r)) in robot_pairs(k).into_iter().zip(&self.relations).enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "R{} {} R{}", i + 1, r, j + 1)?;
        }
        Ok(())
    }
}

/// Whether some configuration satisfies all given orderings simultaneously,
/// decided by a feasibility LP.
pub fn realizable_lp<T: Scalar>(orderings: &[&Ordering], shapes: &[RobotShape<T>]) -> bool {
    let k = shapes.len();
    let mut lp = LinearProgram::new();
    let vars: Vec<(Var, Var)> = (0..k).map(|i| (lp.free_var(format!("x{i}")), lp.free_var(format!("y{i}")))).collect();
    let xs: Vec<LinExpr<T>> = vars.iter().map(|v| LinExpr::var(v.0)).collect();
    let ys: Vec<LinExpr<T>> = vars.iter().map(|v| LinExpr::var(v.1)).collect();
    for o in orderings {
        o.add_to_lp(&mut lp, &xs, &ys, shapes);
    }
    lp.solve().status != LpStatus::Infeasible
}

/// Combinatorial realizability: the horizontal and vertical precedence
/// relations must both be acyclic.
pub fn realizable_acyclic(orderings: &[&Ordering], k: usize) -> bool {
    let mut succ = [vec![Vec::new(); k], vec![Vec::new(); k]];
    for o in orderings {
        for ((i, j), r) in robot_pairs(k).into_iter().zip(&o.relations) {
            let (axis, sign) = r.axis_sign();
            let (lo, hi) = if sign > 0 { (i, j) } else { (j, i) };
            succ[axis][lo].push(hi);
        }
    }
    succ.iter().all(|g| is_acyclic(g))
}

fn is_acyclic(succ: &[Vec<usize>]) -> bool {
    let n = succ.len();
    let mut indeg = vec![0; n];
    for s in succ {
        for &v in s {
            indeg[v] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = stack.pop() {
        seen += 1;
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                stack.push(v);
            }
        }
    }
    seen == n
}

#[derive(Clone, Debug)]
pub struct TransitionGraph<T> {
    pub k: usize,
    pub shapes: Vec<RobotShape<T>>,
    /// Realizable orderings sorted by id.
    pub vertices: Vec<Ordering>,
    /// Undirected edges `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Whether the two endpoint orderings of each edge have a common configuration.
    pub edge_realizable: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
}

impl<T: Scalar> TransitionGraph<T> {
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn vertex_of(&self, o: &Ordering) -> Option<usize> {
        self.index.get(&o.id()).copied()
    }

    /// DOT rendering with one node per ordering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph transitions {\n  node [shape=box, fontsize=10];\n");
        for (v, o) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  o{} [label=\"{}\"];", v, o);
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let style = if self.edge_realizable[e] { "" } else { " [style=dashed]" };
            let _ = writeln!(s, "  o{u} -- o{v}{style};");
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_transition_graph<T: Scalar>(k: usize, shapes: &[RobotShape<T>]) -> Result<TransitionGraph<T>> {
    build_transition_graph_capped(k, shapes, DEFAULT_MAX_ROBOTS)
}

pub fn build_transition_graph_capped<T: Scalar>(k: usize, shapes: &[RobotShape<T>], max_robots: usize) -> Result<TransitionGraph<T>> {
    if k < 2 {
        return Err(Error::RobotCount(format!("transition graph needs at least 2 robots, got {k}")));
    }
    if shapes.len() != k {
        return Err(Error::RobotCount(format!("{} shapes for {k} robots", shapes.len())));
    }
    if k > max_robots {
        return Err(Error::ResourceBound(format!("{k} robots exceeds the cap of {max_robots}")));
    }
    let pairs = k * (k - 1) / 2;
    let total = 4u64.pow(pairs as u32);
    let mut vertices = Vec::new();
    for id in 0..total {
        let o = Ordering::from_id(id, pairs);
        if realizable_lp(&[&o], shapes) {
            vertices.push(o);
        }
    }
    let index: HashMap<u64, usize> = vertices.iter().enumerate().map(|(v, o)| (o.id(), v)).collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut edges = Vec::new();
    let mut edge_realizable = Vec::new();
    for (u, o) in vertices.iter().enumerate() {
        // every neighbor keeps or turns each relation by a quarter
        let mut choices: Vec<Vec<PairRelation>> = Vec::with_capacity(pairs);
        for r in &o.relations {
            choices.push(PairRelation::ALL.iter().copied().filter(|c| *c != r.opposite()).collect());
        }
        let mut digits = vec![0usize; pairs];
        loop {
            let rel: Vec<PairRelation> = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
            let cand = Ordering::new(rel);
            if let Some(&v) = index.get(&cand.id()) {
                if v != u {
                    adjacency[u].push(v);
                    if u < v {
                        edges.push((u, v));
                        edge_realizable.push(realizable_acyclic(&[o, &cand], k));
                    }
                }
            }
            let mut p = 0;
            while p < pairs {
                digits[p] += 1;
                if digits[p] < 3 {
                    break;
                }
                digits[p] = 0;
                p += 1;
            }
            if p == pairs {
                break;
            }
        }
        adjacency[u].sort_unstable();
    }
    Ok(TransitionGraph { k, shapes: shapes.to_vec(), vertices, edges, edge_realizable, adjacency, index })
}

/// Vertices (indices into `g.vertices`) whose ordering contains `p`.
pub fn orderings_containing<T: Scalar>(p: &Configuration<T>, g: &TransitionGraph<T>) -> Result<Vec<usize>> {
    if p.k() != g.k {
        return Err(Error::RobotCount(format!("configuration has {} robots, graph has {}", p.k(), g.k)));
    }
    if let Some((i, j)) = p.first_overlap() {
        return Err(Error::InfeasibleConfiguration(i, j));
    }
    Ok((0..g.vertices.len()).filter(|&v| g.vertices[v].contains(p)).collect())
}

/// Simple paths from `from` to `to` with at most `max_len` edges, produced
/// in nondecreasing length and, within one length, lexicographic vertex order.
pub fn enumerate_simple_paths<'g, T: Scalar>(
    g: &'g TransitionGraph<T>,
    from: &[usize],
    to: &[usize],
    max_len: usize,
) -> SimplePaths<'g, T> {
    let mut from = from.to_vec();
    from.sort_unstable();
    from.dedup();
    let mut is_target = vec![false; g.vertices.len()];
    for &t in to {
        is_target[t] = true;
    }
    SimplePaths { g, from, is_target, max_len, len: 0, batch: Vec::new().into_iter() }
}

pub struct SimplePaths<'g, T> {
    g: &'g TransitionGraph<T>,
    from: Vec<usize>,
    is_target: Vec<bool>,
    max_len: usize,
    len: usize,
    batch: std::vec::IntoIter<Vec<usize>>,
}

impl<T: Scalar> SimplePaths<'_, T> {
    fn paths_of_len(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut on_path = vec![false; self.g.vertices.len()];
        for &s in &self.from {
            let mut path = vec![s];
            on_path[s] = true;
            self.extend(&mut path, &mut on_path, len, &mut out);
            on_path[s] = false;
        }
        out
    }

    fn extend(&self, path: &mut Vec<usize>, on_path: &mut [bool], len: usize, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().expect("nonempty path");
        if path.len() == len + 1 {
            if self.is_target[u] {
                out.push(path.clone());
            }
            return;
        }
        for &v in self.g.neighbors(u) {
            if !on_path[v] {
                on_path[v] = true;
                path.push(v);
                self.extend(path, on_path, len, out);
                path.pop();
                on_path[v] = false;
            }
        }
    }
}

impl<T: Scalar> Iterator for SimplePaths<'_, T> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if let Some(p) = self.batch.next() {
                return Some(p);
            }
            if self.len > self.max_len || self.len >= self.g.vertices.len() {
                return None;
            }
            self.batch = self.paths_of_len(self.len).into_iter();
            self.len += 1;
        }
    }
}

/// Whether `a` and `b` share an ordering (every pair has a common relation).
pub fn commonly_ordered<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> bool {
    a.k() == b.k()
        && robot_pairs(a.k()).into_iter().all(|(i, j)| {
            PairRelation::ALL.iter().any(|r| {
                r.holds(&a.points[i], &a.points[j], &a.shapes[i], &a.shapes[j])
                    && r.holds(&b.points[i], &b.points[j], &b.shapes[i], &b.shapes[j])
            })
        })
}

/// One ordering containing both configurations, if any.
pub fn common_ordering<T: Scalar>(a: &Configuration<T>, b: &Configuration<T>) -> Option<Ordering> {
    let mut rel = Vec::new();
    for (i, j) in robot_pairs(a.k()) {
        let r = PairRelation::ALL.iter().copied().find(|r| {
            r.holds(&a.points[i], &a.points[j], &a.shapes[i], &a.shapes[j])
                && r.holds(&b.points[i], &b.points[j], &b.shapes[i], &b.shapes[j])
        })?;
        rel.push(r);
    }
    Some(Ordering::new(rel))
}
