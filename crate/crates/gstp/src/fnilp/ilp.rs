//! Bounded integer feasibility: model type, LP-style listing and a complete
//! depth-first search with interval propagation.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lb: i64,
    pub ub: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, i64)>,
    pub rel: Relation,
    pub rhs: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IlpModel {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlpResult {
    Sat(Vec<i64>),
    Unsat,
}

impl IlpResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, IlpResult::Sat(_))
    }
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: i64, ub: i64) -> usize {
        assert!(lb <= ub, "empty domain");
        self.vars.push(Variable { name: name.into(), lb, ub });
        self.vars.len() - 1
    }

    /// Adds `Σ c·x rel rhs`. Zero coefficients are dropped and repeated
    /// variables merged.
    pub fn add_constraint(&mut self, terms: Vec<(usize, i64)>, rel: Relation, rhs: i64) {
        let mut merged: Vec<(usize, i64)> = Vec::new();
        for (v, c) in terms {
            assert!(v < self.vars.len(), "undeclared variable {v}");
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(t) => t.1 += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        merged.sort_unstable();
        self.constraints.push(Constraint { terms: merged, rel, rhs });
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Checks bounds and every constraint.
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, &xi)| v.lb <= xi && xi <= v.ub)
            && self.constraints.iter().all(|c| {
                let lhs: i64 = c.terms.iter().map(|&(v, a)| a * x[v]).sum();
                match c.rel {
                    Relation::Eq => lhs == c.rhs,
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    /// One `var <name> <lb> <ub>` line per variable, then one
    /// `con <rel> <rhs> <coef> <name> ...` line per constraint.
    pub fn to_lp(&self) -> String {
        let mut s = String::new();
        for v in &self.vars {
            writeln!(s, "var {} {} {}", v.name, v.lb, v.ub).unwrap();
        }
        for c in &self.constraints {
            write!(s, "con {} {}", c.rel.symbol(), c.rhs).unwrap();
            for &(v, a) in &c.terms {
                write!(s, " {} {}", a, self.vars[v].name).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

struct Search {
    /// Each constraint as `Σ a x <= rhs` rows (equalities give two rows).
    rows: Vec<(Vec<(usize, i64)>, i64)>,
    rows_of: Vec<Vec<usize>>,
    order_key: Vec<usize>,
}

impl Search {
    fn new(m: &IlpModel) -> Self {
        let mut rows = Vec::new();
        for c in &m.constraints {
            let neg: Vec<(usize, i64)> = c.terms.iter().map(|&(v, a)| (v, -a)).collect();
            match c.rel {
                Relation::Le => rows.push((c.terms.clone(), c.rhs)),
                Relation::Ge => rows.push((neg, -c.rhs)),
                Relation::Eq => {
                    rows.push((c.terms.clone(), c.rhs));
                    rows.push((neg, -c.rhs));
                }
            }
        }
        let mut rows_of = vec![Vec::new(); m.vars.len()];
        for (r, (terms, _)) in rows.iter().enumerate() {
            for &(v, _) in terms {
                rows_of[v].push(r);
            }
        }
        let mut by_name: Vec<usize> = (0..m.vars.len()).collect();
        by_name.sort_by(|&a, &b| m.vars[a].name.cmp(&m.vars[b].name));
        let mut order_key = vec![0; m.vars.len()];
        for (rank, v) in by_name.into_iter().enumerate() {
            order_key[v] = rank;
        }
        Search { rows, rows_of, order_key }
    }

    /// Tightens `lo`/`hi` to a fixpoint; false on an empty domain.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64], dirty: Vec<usize>) -> bool {
        let mut queue = dirty;
        let mut queued = vec![false; self.rows.len()];
        for &r in &queue {
            queued[r] = true;
        }
        while let Some(r) = queue.pop() {
            queued[r] = false;
            let (terms, rhs) = &self.rows[r];
            let min_act: i64 = terms.iter().map(|&(v, a)| if a > 0 { a * lo[v] } else { a * hi[v] }).sum();
            if min_act > *rhs {
                return false;
            }
            for &(v, a) in terms {
                let own = if a > 0 { a * lo[v] } else { a * hi[v] };
                let slack = rhs - (min_act - own);
                let changed = if a > 0 {
                    let nb = div_floor(slack, a);
                    if nb < hi[v] {
                        hi[v] = nb;
                        true
                    } else {
                        false
                    }
                } else {
                    let nb = div_ceil(slack, a);
                    if nb > lo[v] {
                        lo[v] = nb;
                        true
                    } else {
                        false
                    }
                };
                if changed {
                    if lo[v] > hi[v] {
                        return false;
                    }
                    for &r2 in &self.rows_of[v] {
                        if !queued[r2] {
                            queued[r2] = true;
                            queue.push(r2);
                        }
                    }
                }
            }
        }
        true
    }

    fn dfs(&self, lo: &mut Vec<i64>, hi: &mut Vec<i64>) -> bool {
        let pick = (0..lo.len()).filter(|&v| lo[v] < hi[v]).min_by_key(|&v| (hi[v] - lo[v], self.order_key[v]));
        let Some(v) = pick else {
            return true;
        };
        for val in lo[v]..=hi[v] {
            let (mut l2, mut h2) = (lo.clone(), hi.clone());
            l2[v] = val;
            h2[v] = val;
            if self.propagate(&mut l2, &mut h2, self.rows_of[v].clone()) && self.dfs(&mut l2, &mut h2) {
                *lo = l2;
                *hi = h2;
                return true;
            }
        }
        false
    }
}

/// Complete search: propagation, then branching on the unfixed variable with
/// the smallest domain (ties by name), values in increasing order.
pub fn ilp_feasible(m: &IlpModel) -> IlpResult {
    let s = Search::new(m);
    let mut lo: Vec<i64> = m.vars.iter().map(|v| v.lb).collect();
    let mut hi: Vec<i64> = m.vars.iter().map(|v| v.ub).collect();
    if !s.propagate(&mut lo, &mut hi, (0..s.rows.len()).collect()) || !s.dfs(&mut lo, &mut hi) {
        return IlpResult::Unsat;
    }
    debug_assert!(m.satisfied_by(&lo));
    if m.satisfied_by(&lo) {
        IlpResult::Sat(lo)
    } else {
        IlpResult::Unsat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tiny_models() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 1);
        m.add_constraint(vec![(x, 1)], Relation::Eq, 1);
        assert_eq!(ilp_feasible(&m), IlpResult::Sat(vec![1]));

        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 2);
        let y = m.add_var("y", 0, 2);
        m.add_constraint(vec![(x, 1), (y, 1)], Relation::Eq, 5);
        assert_eq!(ilp_feasible(&m), IlpResult::Unsat);
    }

    #[test]
    fn parity_needs_branching() {
        // 2x + 2y = 3 has no integer solution although bounds allow it.
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 3);
        let y = m.add_var("y", 0, 3);
        m.add_constraint(vec![(x, 2), (y, 2)], Relation::Eq, 3);
        assert_eq!(ilp_feasible(&m), IlpResult::Unsat);
        m.add_constraint(vec![(x, 1)], Relation::Ge, 1);
        assert!(!ilp_feasible(&m).is_sat());
    }

    #[test]
    fn lp_listing() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 4);
        let y = m.add_var("y", -1, 1);
        m.add_constraint(vec![(x, 2), (y, -1), (x, 1)], Relation::Le, 3);
        assert_eq!(m.to_lp(), "var x 0 4\nvar y -1 1\ncon <= 3 3 x -1 y\n");
        assert_eq!(m.var_index("y"), Some(1));
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(div_floor(-3, 2), -2);
        assert_eq!(div_floor(3, -2), -2);
        assert_eq!(div_ceil(-3, 2), -1);
        assert_eq!(div_ceil(3, 2), 2);
    }

    fn random_model() -> impl Strategy<Value = IlpModel> {
        let var = (-2i64..=1, 0i64..=3).prop_map(|(lb, w)| (lb, lb + w));
        let con = (proptest::collection::vec(-3i64..=3, 3), 0usize..3, -4i64..=6);
        (proptest::collection::vec(var, 3), proptest::collection::vec(con, 1..4)).prop_map(|(vs, cs)| {
            let mut m = IlpModel::new();
            for (i, (lb, ub)) in vs.into_iter().enumerate() {
                m.add_var(format!("x{i}"), lb, ub);
            }
            for (coefs, rel, rhs) in cs {
                let rel = [Relation::Eq, Relation::Le, Relation::Ge][rel];
                m.add_constraint(coefs.into_iter().enumerate().collect(), rel, rhs);
            }
            m
        })
    }

    fn brute(m: &IlpModel) -> bool {
        let v = m.vars();
        let mut x: Vec<i64> = v.iter().map(|v| v.lb).collect();
        loop {
            if m.satisfied_by(&x) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == x.len() {
                    return false;
                }
                if x[i] < v[i].ub {
                    x[i] += 1;
                    break;
                }
                x[i] = v[i].lb;
                i += 1;
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(m in random_model()) {
            let r = ilp_feasible(&m);
            prop_assert_eq!(r.is_sat(), brute(&m));
            if let IlpResult::Sat(x) = r {
                prop_assert!(m.satisfied_by(&x));
            }
        }
    }
}
