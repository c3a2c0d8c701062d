use serde::{Deserialize, Serialize};

use crate::construction::EquationSystem;
use crate::words::Letter;
use crate::{Elem, FiniteGroup};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    /// Domain size of every variable after the unary constraints.
    pub domain_sizes: Vec<usize>,
    /// Variables fixed by solving an equation for them.
    pub forced: u64,
    /// Extra searches spent pinning down the lexicographically first solution.
    pub canonical_searches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    /// The lexicographically first solution (variable 0 most significant).
    pub solution: Option<Vec<Elem>>,
    /// The search covered the whole domain product; with no solution this
    /// proves unsolvability.
    pub exhausted: bool,
    pub stats: SolveStats,
}

struct Prepared<'a> {
    h: &'a FiniteGroup,
    words: Vec<&'a [Letter]>,
    /// Distinct variables of each equation.
    vars: Vec<Vec<usize>>,
    /// Equations mentioning each variable.
    occurs: Vec<Vec<usize>>,
}

enum Abort {
    Budget,
}

impl<'a> Prepared<'a> {
    fn new(system: &'a EquationSystem, h: &'a FiniteGroup) -> Self {
        let n = system.nvars();
        let mut vars = Vec::new();
        let mut occurs = vec![Vec::new(); n];
        let mut words = Vec::new();
        for (e, eq) in system.equations().iter().enumerate() {
            let mut vs: Vec<usize> = eq
                .word
                .letters()
                .iter()
                .filter_map(|l| match *l {
                    Letter::Var { id, .. } => Some(id as usize),
                    Letter::Coeff(_) => None,
                })
                .collect();
            vs.sort_unstable();
            vs.dedup();
            for &v in &vs {
                occurs[v].push(e);
            }
            vars.push(vs);
            words.push(eq.word.letters());
        }
        Prepared { h, words, vars, occurs }
    }

    fn value(&self, e: usize, assign: &[Option<Elem>]) -> Elem {
        let h = self.h;
        self.words[e].iter().fold(Elem::IDENTITY, |acc, l| {
            let x = match *l {
                Letter::Var { id, inverse } => {
                    let v = assign[id as usize].expect("assigned");
                    if inverse {
                        h.inverse(v)
                    } else {
                        v
                    }
                }
                Letter::Coeff(c) => c,
            };
            h.op(acc, x)
        })
    }

    /// For `word = A·u^{±1}·B` with `u` the only unassigned variable, occurring
    /// once: the unique value of `u`.
    fn solve_for(&self, e: usize, u: usize, assign: &[Option<Elem>]) -> Option<Elem> {
        let h = self.h;
        let mut before = Elem::IDENTITY;
        let mut after = Elem::IDENTITY;
        let mut seen: Option<bool> = None;
        for l in self.words[e] {
            let x = match *l {
                Letter::Var { id, inverse } if id as usize == u => {
                    if seen.is_some() {
                        return None;
                    }
                    seen = Some(inverse);
                    continue;
                }
                Letter::Var { id, inverse } => {
                    let v = assign[id as usize].expect("assigned");
                    if inverse {
                        h.inverse(v)
                    } else {
                        v
                    }
                }
                Letter::Coeff(c) => c,
            };
            if seen.is_some() {
                after = h.op(after, x);
            } else {
                before = h.op(before, x);
            }
        }
        // u^{±1} = A⁻¹·B⁻¹
        let t = h.op(h.inverse(before), h.inverse(after));
        Some(if seen? { h.inverse(t) } else { t })
    }

    fn unassigned_in(&self, e: usize, assign: &[Option<Elem>]) -> (usize, Option<usize>) {
        let mut count = 0;
        let mut which = None;
        for &v in &self.vars[e] {
            if assign[v].is_none() {
                count += 1;
                which = Some(v);
            }
        }
        (count, which)
    }

    /// Keeps the values of `u` that make equation `e` hold, all other
    /// variables being assigned.
    fn filter(&self, e: usize, u: usize, domain: &[Elem], assign: &mut [Option<Elem>]) -> Vec<Elem> {
        let out = domain
            .iter()
            .copied()
            .filter(|&x| {
                assign[u] = Some(x);
                self.value(e, assign) == Elem::IDENTITY
            })
            .collect();
        assign[u] = None;
        out
    }
}

struct Search<'p, 'a> {
    prep: &'p Prepared<'a>,
    budget: u64,
    stats: SolveStats,
}

impl Search<'_, '_> {
    /// Depth-first search with forward checking; `Ok(None)` means the
    /// subtree has no solution.
    fn run(&mut self, assign: &mut Vec<Option<Elem>>, domains: &[Vec<Elem>]) -> Result<Option<Vec<Elem>>, Abort> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Err(Abort::Budget);
        }
        // smallest domain first, lowest index on ties
        let Some(var) = (0..assign.len())
            .filter(|&v| assign[v].is_none())
            .min_by_key(|&v| (domains[v].len(), v))
        else {
            return Ok(Some(assign.iter().map(|a| a.unwrap()).collect()));
        };
        for &value in &domains[var] {
            assign[var] = Some(value);
            if let Some(next) = self.propagate(var, assign, domains) {
                if let Some(sol) = self.run(assign, &next)? {
                    assign[var] = None;
                    return Ok(Some(sol));
                }
            }
        }
        assign[var] = None;
        Ok(None)
    }

    /// Domains after assigning `var`, or `None` on a contradiction.
    fn propagate(&mut self, var: usize, assign: &mut [Option<Elem>], domains: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
        let prep = self.prep;
        let mut next = domains.to_vec();
        next[var] = vec![assign[var].unwrap()];
        for &e in &prep.occurs[var] {
            match prep.unassigned_in(e, assign) {
                (0, _) => {
                    if prep.value(e, assign) != Elem::IDENTITY {
                        return None;
                    }
                }
                (1, Some(u)) => {
                    if let Some(x) = prep.solve_for(e, u, assign) {
                        if !next[u].contains(&x) {
                            return None;
                        }
                        if next[u].len() > 1 {
                            self.stats.forced += 1;
                        }
                        next[u] = vec![x];
                    } else {
                        next[u] = prep.filter(e, u, &next[u], assign);
                        if next[u].is_empty() {
                            return None;
                        }
                    }
                }
                _ => {}
            }
        }
        Some(next)
    }
}

/// Finds the lexicographically first solution of `system` over `h` or
/// proves there is none, visiting at most `budget` search nodes.
///
/// Unary equations filter the domains up front. The search then picks the
/// variable with the smallest domain, tries values in ascending order, and
/// after every assignment checks the equations it completes and narrows the
/// domain of any equation's last open variable (solving for it directly
/// when it occurs once). A found solution is made canonical by fixing
/// variables one at a time to their smallest feasible value.
pub fn backtracking_solve(system: &EquationSystem, h: &FiniteGroup, budget: u64) -> SolveOutcome {
    let prep = Prepared::new(system, h);
    let n = system.nvars();
    let mut assign: Vec<Option<Elem>> = vec![None; n];
    let mut domains: Vec<Vec<Elem>> = vec![h.elements().collect(); n];
    let mut stats = SolveStats::default();

    for e in 0..system.len() {
        if prep.vars[e].len() == 1 {
            let u = prep.vars[e][0];
            domains[u] = prep.filter(e, u, &domains[u], &mut assign);
        } else if prep.vars[e].is_empty() && prep.value(e, &assign) != Elem::IDENTITY {
            domains.iter_mut().for_each(Vec::clear);
        }
    }
    stats.domain_sizes = domains.iter().map(Vec::len).collect();
    let unsat = |stats| SolveOutcome {
        solution: None,
        exhausted: true,
        stats,
    };
    if n == 0 {
        let ok = (0..system.len()).all(|e| prep.value(e, &assign) == Elem::IDENTITY);
        return SolveOutcome {
            solution: ok.then(Vec::new),
            exhausted: true,
            stats,
        };
    }
    if domains.iter().any(Vec::is_empty) {
        return unsat(stats);
    }

    let mut search = Search {
        prep: &prep,
        budget,
        stats,
    };
    let first = match search.run(&mut assign, &domains) {
        Err(Abort::Budget) => {
            return SolveOutcome {
                solution: None,
                exhausted: false,
                stats: search.stats,
            }
        }
        Ok(None) => return unsat(search.stats),
        Ok(Some(sol)) => sol,
    };

    // canonical form: fix x_0, x_1, … to their least feasible values
    let mut fixed = domains.clone();
    let mut best = first;
    let mut exhausted = true;
    for v in 0..n {
        let candidates: Vec<Elem> = fixed[v].iter().copied().filter(|&x| x < best[v]).collect();
        for x in candidates {
            let mut trial = fixed.clone();
            trial[v] = vec![x];
            search.stats.canonical_searches += 1;
            let mut a = vec![None; n];
            match search.run(&mut a, &trial) {
                Ok(Some(sol)) => {
                    best = sol;
                    break;
                }
                Ok(None) => {}
                Err(Abort::Budget) => {
                    exhausted = false;
                    break;
                }
            }
        }
        if !exhausted {
            break;
        }
        fixed[v] = vec![best[v]];
    }
    SolveOutcome {
        solution: Some(best),
        exhausted,
        stats: search.stats,
    }
}

/// Plain enumeration of all assignments in lexicographic order; the
/// reference the backtracking search is checked against.
pub fn enumerate_solve(system: &EquationSystem, h: &FiniteGroup) -> Option<Vec<Elem>> {
    let n = system.nvars();
    let order = h.order() as u64;
    let total = (0..n).fold(1u64, |acc, _| acc.saturating_mul(order));
    let mut a = vec![Elem::IDENTITY; n];
    for idx in 0..total {
        let mut rest = idx;
        for v in (0..n).rev() {
            a[v] = Elem((rest % order) as u32);
            rest /= order;
        }
        if system
            .equations()
            .iter()
            .all(|eq| eq.word.evaluate_in(h, &a).is_ok_and(|x| x == Elem::IDENTITY))
        {
            return Some(a);
        }
    }
    None
}
