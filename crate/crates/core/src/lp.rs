//! Exact linear programming.
//!
//! Programs are small (tens to a few hundred columns), so a dense two-phase
//! tableau simplex is used, switching to Bland's rule on degenerate stalls so
//! that it always terminates. Every arithmetic step is exact.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinExpr<T> {
    pub terms: Vec<(Var, T)>,
    pub constant: T,
}

impl<T: Scalar> Default for LinExpr<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> LinExpr<T> {
    pub fn new() -> Self {
        LinExpr { terms: Vec::new(), constant: T::zero() }
    }

    pub fn var(v: Var) -> Self {
        Self::new().term(v, T::one())
    }

    pub fn constant(c: T) -> Self {
        LinExpr { terms: Vec::new(), constant: c }
    }

    pub fn term(mut self, v: Var, coef: T) -> Self {
        if !coef.is_zero() {
            self.terms.push((v, coef));
        }
        self
    }

    pub fn plus_const(mut self, c: T) -> Self {
        self.constant = self.constant + c;
        self
    }

    pub fn add(mut self, other: &LinExpr<T>) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self.constant = self.constant + other.constant.clone();
        self
    }

    pub fn sub(self, other: &LinExpr<T>) -> Self {
        self.add(&other.clone().scale(&-T::one()))
    }

    pub fn scale(mut self, s: &T) -> Self {
        for (_, c) in self.terms.iter_mut() {
            *c = c.clone() * s.clone();
        }
        self.constant = self.constant * s.clone();
        self
    }

    pub fn neg(self) -> Self {
        self.scale(&-T::one())
    }

    /// Merges duplicate variables and drops zero coefficients.
    pub fn normalized(&self) -> Self {
        let mut terms: Vec<(Var, T)> = Vec::new();
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for (v, c) in sorted {
            match terms.last_mut() {
                Some((lv, lc)) if *lv == v => *lc = lc.clone() + c,
                _ => terms.push((v, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        LinExpr { terms, constant: self.constant.clone() }
    }

    pub fn eval(&self, values: &[T]) -> T {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (v, c)| acc + c.clone() * values[v.0].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub expr: LinExpr<T>,
    pub rel: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn holds(&self, values: &[T]) -> bool {
        let lhs = self.expr.eval(values);
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Free,
    NonNegative,
}

#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    pub constraints: Vec<Constraint<T>>,
    pub objective: LinExpr<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub values: Vec<T>,
    pub objective: T,
}

impl<T: Scalar> LpSolution<T> {
    pub fn value(&self, v: Var) -> &T {
        &self.values[v.0]
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl<T: Scalar> Default for LinearProgram<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new() -> Self {
        LinearProgram { names: Vec::new(), kinds: Vec::new(), constraints: Vec::new(), objective: LinExpr::new() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, kind: VarKind) -> Var {
        self.names.push(name.into());
        self.kinds.push(kind);
        Var(self.names.len() - 1)
    }

    pub fn free_var(&mut self, name: impl Into<String>) -> Var {
        self.add_var(name, VarKind::Free)
    }

    pub fn nonneg_var(&mut self, name: impl Into<String>) -> Var {
        self.add_var(name, VarKind::NonNegative)
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Adds `expr rel rhs`; the expression's constant is moved to the right side.
    pub fn add_constraint(&mut self, expr: LinExpr<T>, rel: Relation, rhs: T) {
        let expr = expr.normalized();
        debug_assert!(expr.terms.iter().all(|(v, _)| v.0 < self.names.len()));
        let rhs = rhs - expr.constant.clone();
        let expr = LinExpr { terms: expr.terms, constant: T::zero() };
        self.constraints.push(Constraint { expr, rel, rhs });
    }

    /// `lhs rel rhs` for two expressions.
    pub fn add_cmp(&mut self, lhs: LinExpr<T>, rel: Relation, rhs: LinExpr<T>) {
        self.add_constraint(lhs.sub(&rhs), rel, T::zero());
    }

    pub fn minimize(&mut self, objective: LinExpr<T>) {
        self.objective = objective.normalized();
    }

    pub fn solve(&self) -> LpSolution<T> {
        Simplex::build(self).run(self)
    }

    /// Checks an assignment against every constraint.
    pub fn satisfied_by(&self, values: &[T]) -> bool {
        self.constraints.iter().all(|c| c.holds(values))
            && values
                .iter()
                .zip(&self.kinds)
                .all(|(v, k)| *k == VarKind::Free || *v >= T::zero())
    }
}

impl<T: Scalar> fmt::Display for LinearProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, e: &LinExpr<T>| -> fmt::Result {
            if e.terms.is_empty() {
                write!(f, "0")?;
            }
            for (i, (v, c)) in e.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{} {}", c, self.names[v.0])?;
            }
            Ok(())
        };
        write!(f, "minimize ")?;
        show(f, &self.objective)?;
        writeln!(f)?;
        writeln!(f, "subject to")?;
        for c in &self.constraints {
            write!(f, "  ")?;
            show(f, &c.expr)?;
            let op = match c.rel {
                Relation::Le => "<=",
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            writeln!(f, " {} {}", op, c.rhs)?;
        }
        for (n, k) in self.names.iter().zip(&self.kinds) {
            if *k == VarKind::Free {
                writeln!(f, "  {} free", n)?;
            }
        }
        Ok(())
    }
}

/// `|expr| <= bound` as the pair `expr <= bound`, `-expr <= bound`.
pub fn add_abs_leq<T: Scalar>(lp: &mut LinearProgram<T>, expr: &LinExpr<T>, bound: &LinExpr<T>) {
    lp.add_cmp(expr.clone(), Relation::Le, bound.clone());
    lp.add_cmp(expr.clone().neg(), Relation::Le, bound.clone());
}

/// `|dx| + |dy| <= bound` as the four sign combinations.
pub fn add_l1_leq<T: Scalar>(lp: &mut LinearProgram<T>, dx: &LinExpr<T>, dy: &LinExpr<T>, bound: &LinExpr<T>) {
    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let e = dx.clone().scale(&T::int(sx)).add(&dy.clone().scale(&T::int(sy)));
        lp.add_cmp(e, Relation::Le, bound.clone());
    }
}

// ---------------------------------------------------------------------------

struct Simplex<T> {
    /// rows: constraint coefficients followed by the right-hand side
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
    /// original variable -> (positive column, optional negative column)
    var_cols: Vec<(usize, Option<usize>)>,
    artificial_start: usize,
}

impl<T: Scalar> Simplex<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0;
        for k in &lp.kinds {
            match k {
                VarKind::NonNegative => {
                    var_cols.push((ncols, None));
                    ncols += 1;
                }
                VarKind::Free => {
                    var_cols.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let structural = ncols;
        let m = lp.constraints.len();
        // rows with nonnegative right-hand side
        let mut dense: Vec<(Vec<(usize, T)>, Relation, T)> = Vec::with_capacity(m);
        for c in &lp.constraints {
            let mut coeffs = Vec::new();
            for (v, a) in &c.expr.terms {
                let (p, n) = var_cols[v.0];
                coeffs.push((p, a.clone()));
                if let Some(n) = n {
                    coeffs.push((n, -a.clone()));
                }
            }
            let (coeffs, rel, rhs) = if c.rhs < T::zero() {
                let flipped = match c.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (coeffs.into_iter().map(|(j, a)| (j, -a)).collect(), flipped, -c.rhs.clone())
            } else {
                (coeffs, c.rel, c.rhs.clone())
            };
            dense.push((coeffs, rel, rhs));
        }
        let n_slack = dense.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let n_art = dense.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let artificial_start = structural + n_slack;
        let total = artificial_start + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = structural;
        let mut art = artificial_start;
        for (coeffs, rel, rhs) in dense {
            let mut row = vec![T::zero(); total + 1];
            for (j, a) in coeffs {
                row[j] = row[j].clone() + a;
            }
            row[total] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Simplex { rows, basis, ncols: total, var_cols, artificial_start }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [T]) {
        let width = self.rows[r].len();
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for j in 0..width {
                if !self.rows[r][j].is_zero() {
                    self.rows[r][j] = self.rows[r][j].clone() / p.clone();
                }
            }
        }
        let nz: Vec<usize> = (0..width).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let prow: Vec<T> = nz.iter().map(|&j| self.rows[r][j].clone()).collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for (k, &j) in nz.iter().enumerate() {
                row[j] = row[j].clone() - f.clone() * prow[k].clone();
            }
        }
        let f = obj[c].clone();
        if !f.is_zero() {
            for (k, &j) in nz.iter().enumerate() {
                obj[j] = obj[j].clone() - f.clone() * prow[k].clone();
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row (last entry is minus the objective value) for costs over all columns.
    fn reduced_costs(&self, costs: &[T]) -> Vec<T> {
        let width = self.ncols + 1;
        let mut obj: Vec<T> = (0..width).map(|j| if j < costs.len() { costs[j].clone() } else { T::zero() }).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = obj[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !self.rows[i][j].is_zero() {
                    obj[j] = obj[j].clone() - cb.clone() * self.rows[i][j].clone();
                }
            }
        }
        obj
    }

    /// Simplex iterations over the allowed columns. Returns false when unbounded.
    ///
    /// Entering columns are priced by most negative reduced cost until a run
    /// of degenerate pivots is seen; from then on Bland's rule is used, which
    /// rules out cycling.
    fn iterate(&mut self, obj: &mut Vec<T>, allowed: usize) -> bool {
        const DEGENERATE_RUN: usize = 32;
        let rhs = self.ncols;
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            let entering = if bland {
                (0..allowed).find(|&j| obj[j] < T::zero())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..allowed {
                    if obj[j] < T::zero() && best.map_or(true, |b| obj[j] < obj[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > T::zero() {
                    let ratio = row[rhs].clone() / row[c].clone();
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return false,
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                        bland |= degenerate >= DEGENERATE_RUN;
                    } else {
                        degenerate = 0;
                    }
                    self.pivot(r, c, obj)
                }
            }
        }
    }

    fn run(mut self, lp: &LinearProgram<T>) -> LpSolution<T> {
        let rhs = self.ncols;
        // phase one: minimize the sum of artificials
        if self.artificial_start < self.ncols {
            let mut costs = vec![T::zero(); self.ncols];
            for c in costs.iter_mut().skip(self.artificial_start) {
                *c = T::one();
            }
            let mut obj = self.reduced_costs(&costs);
            self.iterate(&mut obj, self.ncols);
            if !obj[rhs].is_zero() {
                return LpSolution { status: LpStatus::Infeasible, values: Vec::new(), objective: T::zero() };
            }
            // drive remaining artificials out of the basis
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.artificial_start {
                    match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(c) => {
                            let mut dummy = vec![T::zero(); self.ncols + 1];
                            self.pivot(i, c, &mut dummy);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
            // drop artificial columns
            let keep = self.artificial_start;
            for row in self.rows.iter_mut() {
                let r = row[rhs].clone();
                row.truncate(keep);
                row.push(r);
            }
            self.ncols = keep;
        }
        let rhs = self.ncols;
        let mut costs = vec![T::zero(); self.ncols];
        for (v, c) in &lp.objective.terms {
            let (p, n) = self.var_cols[v.0];
            costs[p] = costs[p].clone() + c.clone();
            if let Some(n) = n {
                costs[n] = costs[n].clone() - c.clone();
            }
        }
        let mut obj = self.reduced_costs(&costs);
        if !self.iterate(&mut obj, self.ncols) {
            return LpSolution { status: LpStatus::Unbounded, values: Vec::new(), objective: T::zero() };
        }
        let mut col_val = vec![T::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.rows[i][rhs].clone();
        }
        let values: Vec<T> = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => col_val[p].clone() - col_val[n].clone(),
                None => col_val[p].clone(),
            })
            .collect();
        let objective = lp.objective.eval(&values);
        LpSolution { status: LpStatus::Optimal, values, objective }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    #[test]
    fn trivial_nonnegative_minimum() {
        let mut lp = LinearProgram::<Q>::new();
        let phi = lp.free_var("phi");
        lp.add_constraint(LinExpr::var(phi), Relation::Ge, q(0));
        lp.minimize(LinExpr::var(phi));
        let s = lp.solve();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective, q(0));
    }

    #[test]
    fn abs_bound_binds() {
        let mut lp = LinearProgram::<Q>::new();
        let x = lp.free_var("x");
        let phi = lp.free_var("phi");
        lp.add_constraint(LinExpr::var(x), Relation::Eq, q(3));
        add_abs_leq(&mut lp, &LinExpr::var(x), &LinExpr::var(phi));
        lp.minimize(LinExpr::var(phi));
        assert_eq!(lp.solve().objective, q(3));

        let mut lp = LinearProgram::<Q>::new();
        let x = lp.free_var("x");
        let y = lp.free_var("y");
        let phi = lp.free_var("phi");
        lp.add_cmp(LinExpr::var(x), Relation::Eq, LinExpr::var(y));
        add_abs_leq(&mut lp, &LinExpr::var(x).sub(&LinExpr::var(y)), &LinExpr::var(phi));
        lp.minimize(LinExpr::var(phi));
        assert_eq!(lp.solve().objective, q(0));
    }

    #[test]
    fn l1_norm_via_auxiliary_abs_terms_matches_distance() {
        // |px - qx| <= u, |py - qy| <= v, u + v <= phi with p=(0,0), q=(3,4)
        let mut lp = LinearProgram::<Q>::new();
        let u = lp.free_var("u");
        let v = lp.free_var("v");
        let phi = lp.free_var("phi");
        add_abs_leq(&mut lp, &LinExpr::constant(q(0) - q(3)), &LinExpr::var(u));
        add_abs_leq(&mut lp, &LinExpr::constant(q(0) - q(4)), &LinExpr::var(v));
        lp.add_cmp(LinExpr::var(u).add(&LinExpr::var(v)), Relation::Le, LinExpr::var(phi));
        lp.minimize(LinExpr::var(phi));
        let s = lp.solve();
        assert_eq!(s.objective, q(7));
        assert!(lp.satisfied_by(&s.values));
    }

    #[test]
    fn one_dimensional_midpoint_is_tight() {
        // phi >= |i - 0| + |i - 4|
        let mut lp = LinearProgram::<Q>::new();
        let i = lp.free_var("i");
        let phi = lp.free_var("phi");
        for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let e = LinExpr::var(i).scale(&q(s1)).add(&LinExpr::var(i).plus_const(q(-4)).scale(&q(s2)));
            lp.add_cmp(e, Relation::Le, LinExpr::var(phi));
        }
        lp.minimize(LinExpr::var(phi));
        let s = lp.solve();
        assert_eq!(s.objective, q(4));
        let iv = s.value(i).clone();
        assert!(iv >= q(0) && iv <= q(4));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::<Q>::new();
        let x = lp.nonneg_var("x");
        lp.add_constraint(LinExpr::var(x), Relation::Le, q(-1));
        lp.minimize(LinExpr::var(x));
        assert_eq!(lp.solve().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::<Q>::new();
        let x = lp.free_var("x");
        lp.add_constraint(LinExpr::var(x), Relation::Le, q(5));
        lp.minimize(LinExpr::var(x));
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_handled() {
        let mut lp = LinearProgram::<Q>::new();
        let x = lp.free_var("x");
        let y = lp.free_var("y");
        let sum = LinExpr::var(x).add(&LinExpr::var(y));
        lp.add_constraint(sum.clone(), Relation::Eq, q(2));
        lp.add_constraint(sum.scale(&q(2)), Relation::Eq, q(4));
        lp.add_constraint(LinExpr::var(x), Relation::Ge, q(0));
        lp.add_constraint(LinExpr::var(y), Relation::Ge, q(0));
        lp.minimize(LinExpr::var(x).scale(&q(3)).add(&LinExpr::var(y)));
        let s = lp.solve();
        assert_eq!(s.objective, q(2));
        assert_eq!(s.value(x), &q(0));
    }

    #[test]
    fn display_dumps_text_format() {
        let mut lp = LinearProgram::<Q>::new();
        let x = lp.free_var("x");
        lp.add_constraint(LinExpr::var(x), Relation::Ge, q(1));
        lp.minimize(LinExpr::var(x));
        let text = lp.to_string();
        assert!(text.contains("minimize 1 x"));
        assert!(text.contains("x free"));
    }
}
