//! The 3SAT reduction to min-cost Pareto-optimal matchings.
//!
//! A formula is first normalised by [`transform_formula`]: every `¬X_i`
//! becomes a fresh `X_{n+i}`, and the clauses `(X_i ∨ X_{n+i})` and
//! `(¬X_i ∨ ¬X_{n+i})` tie the two together. [`build_gadget_instance`] then
//! builds one 4-node gadget per positive-literal occurrence and one per
//! variable; gadget edges cost 0, every other edge costs 1. The formula is
//! satisfiable iff the instance has a Pareto-optimal matching of cost 0.
//!
//! Gadget states: an occurrence gadget is *true* when it holds
//! `(a, b'), (a', b)` and *false* when it holds `(a, b), (a', b')`; a
//! variable gadget is *true* with `(c, d), (c', d')` and *false* with
//! `(c, d'), (c', d)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::instance::{Edge, Instance, Node};
use crate::matching::{matching_cost, Matching};
use crate::oracle::brute_sat;
use crate::popularity::is_pareto_optimal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {0} is out of range")]
    LiteralOutOfRange(i32),
    #[error("clause {0} has more than 3 literals")]
    ClauseTooLong(usize),
    #[error("clause {0} has a shape without a gadget")]
    UnsupportedClause(usize),
    #[error("variable {0} must occur negated exactly once")]
    NegativeOccurrence(usize),
    #[error("assignment does not satisfy the formula")]
    NotSatisfying,
    #[error("matching has positive cost")]
    PositiveCost,
    #[error("matching is not Pareto-optimal")]
    NotParetoOptimal,
    #[error("formula exceeds {vars} variables or {clauses} clauses")]
    SizeBound { vars: usize, clauses: usize },
}

/// Clauses over variables `1..=num_vars`; a literal is `±v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, HardnessError> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(HardnessError::LiteralOutOfRange(l));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// `x[i]` is the value of variable `i + 1`.
    pub fn eval(&self, x: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| x[l.unsigned_abs() as usize - 1] == (l > 0)))
    }
}

fn dedup_clause(c: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(c.len());
    for &l in c {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// Repeated literals are dropped, then every unit clause `(ℓ)` becomes
/// `(ℓ ∨ y) ∧ (ℓ ∨ ¬y)` for one shared fresh variable `y`.
pub fn pad_unit_clauses(psi: &CnfFormula) -> CnfFormula {
    let clauses: Vec<Vec<i32>> = psi.clauses.iter().map(|c| dedup_clause(c)).collect();
    if !clauses.iter().any(|c| c.len() == 1) {
        return CnfFormula {
            num_vars: psi.num_vars,
            clauses,
        };
    }
    let y = psi.num_vars as i32 + 1;
    let mut out = Vec::new();
    for c in clauses {
        if c.len() == 1 {
            out.push(vec![c[0], y]);
            out.push(vec![c[0], -y]);
        } else {
            out.push(c);
        }
    }
    CnfFormula {
        num_vars: psi.num_vars + 1,
        clauses: out,
    }
}

/// `¬X_i ↦ X_{n+i}` in every clause (repeated literals dropped), then
/// `(X_i ∨ X_{n+i})` and `(¬X_i ∨ ¬X_{n+i})` for `i = 1..=n`.
pub fn transform_formula(psi: &CnfFormula) -> Result<CnfFormula, HardnessError> {
    let n = psi.num_vars as i32;
    let mut clauses = Vec::with_capacity(psi.clauses.len() + 2 * psi.num_vars);
    for (j, c) in psi.clauses.iter().enumerate() {
        if c.is_empty() {
            return Err(HardnessError::EmptyClause(j));
        }
        if c.len() > 3 {
            return Err(HardnessError::ClauseTooLong(j));
        }
        let pos: Vec<i32> = c.iter().map(|&l| if l > 0 { l } else { n - l }).collect();
        clauses.push(dedup_clause(&pos));
    }
    for i in 1..=n {
        clauses.push(vec![i, n + i]);
    }
    for i in 1..=n {
        clauses.push(vec![-i, -(n + i)]);
    }
    Ok(CnfFormula {
        num_vars: 2 * psi.num_vars,
        clauses,
    })
}

/// One positive-literal occurrence: variable `var` (0-based) in clause
/// `clause`, with its four gadget nodes (A indices `a`, `a2`; B indices `b`,
/// `b2` for `a'`, `b'`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub var: usize,
    pub clause: usize,
    pub a: usize,
    pub b: usize,
    pub a2: usize,
    pub b2: usize,
}

impl Occurrence {
    pub fn true_edges(&self) -> [Edge; 2] {
        [Edge::new(self.a, self.b2), Edge::new(self.a2, self.b)]
    }

    pub fn false_edges(&self) -> [Edge; 2] {
        [Edge::new(self.a, self.b), Edge::new(self.a2, self.b2)]
    }
}

/// The gadget of a variable: A indices `c`, `c2`; B indices `d`, `d2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VariableGadget {
    pub var: usize,
    /// The other variable of its negative clause.
    pub partner: usize,
    pub clause: usize,
    pub c: usize,
    pub d: usize,
    pub c2: usize,
    pub d2: usize,
}

impl VariableGadget {
    pub fn true_edges(&self) -> [Edge; 2] {
        [Edge::new(self.c, self.d), Edge::new(self.c2, self.d2)]
    }

    pub fn false_edges(&self) -> [Edge; 2] {
        [Edge::new(self.c, self.d2), Edge::new(self.c2, self.d)]
    }
}

#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub instance: Instance,
    pub formula: CnfFormula,
    pub occurrences: Vec<Occurrence>,
    pub variables: Vec<VariableGadget>,
}

/// One state per gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetState {
    pub variable_true: Vec<bool>,
    pub occurrence_true: Vec<bool>,
}

impl GadgetInstance {
    pub fn occurrences_of(&self, var: usize) -> impl Iterator<Item = &Occurrence> + '_ {
        self.occurrences.iter().filter(move |o| o.var == var)
    }

    /// The perfect, cost-0 matching that puts every gadget in the given state.
    pub fn state_matching(&self, st: &GadgetState) -> Matching {
        let mut edges = Vec::with_capacity(2 * (self.occurrences.len() + self.variables.len()));
        for (o, &t) in self.occurrences.iter().zip(&st.occurrence_true) {
            edges.extend(if t { o.true_edges() } else { o.false_edges() });
        }
        for (g, &t) in self.variables.iter().zip(&st.variable_true) {
            edges.extend(if t { g.true_edges() } else { g.false_edges() });
        }
        edges.sort_unstable();
        Matching::from_edges(&self.instance, &edges).expect("gadget edges are disjoint")
    }
}

/// Builds the gadget instance of a transformed formula.
///
/// Positive clauses need 2 or 3 literals; negative clauses exactly 2
/// distinct variables; every variable must occur negated exactly once. No
/// clause may mix signs.
pub fn build_gadget_instance(psi_t: &CnfFormula) -> Result<GadgetInstance, HardnessError> {
    let nv = psi_t.num_vars;
    let mut neg_clause: Vec<Option<(usize, usize)>> = vec![None; nv];
    let mut positive: Vec<(usize, Vec<usize>)> = Vec::new();
    for (j, c) in psi_t.clauses.iter().enumerate() {
        if c.is_empty() {
            return Err(HardnessError::EmptyClause(j));
        }
        let vars: Vec<usize> = c.iter().map(|&l| l.unsigned_abs() as usize - 1).collect();
        if c.iter().all(|&l| l > 0) {
            if c.len() < 2 || c.len() > 3 || vars.iter().collect::<BTreeSet<_>>().len() != c.len() {
                return Err(HardnessError::UnsupportedClause(j));
            }
            positive.push((j, vars));
        } else if c.iter().all(|&l| l < 0) {
            if c.len() != 2 || vars[0] == vars[1] {
                return Err(HardnessError::UnsupportedClause(j));
            }
            for (k, &v) in vars.iter().enumerate() {
                if neg_clause[v].is_some() {
                    return Err(HardnessError::NegativeOccurrence(v + 1));
                }
                neg_clause[v] = Some((j, vars[1 - k]));
            }
        } else {
            return Err(HardnessError::UnsupportedClause(j));
        }
    }
    if let Some(v) = neg_clause.iter().position(Option::is_none) {
        return Err(HardnessError::NegativeOccurrence(v + 1));
    }

    let mut names_a: Vec<String> = Vec::new();
    let mut names_b: Vec<String> = Vec::new();
    let mut occurrences = Vec::new();
    for (j, vars) in &positive {
        for &v in vars {
            let tag = format!("{}.{}", v + 1, j + 1);
            occurrences.push(Occurrence {
                var: v,
                clause: *j,
                a: names_a.len(),
                a2: names_a.len() + 1,
                b: names_b.len(),
                b2: names_b.len() + 1,
            });
            names_a.push(format!("a{tag}"));
            names_a.push(format!("ap{tag}"));
            names_b.push(format!("b{tag}"));
            names_b.push(format!("bp{tag}"));
        }
    }
    let mut variables = Vec::with_capacity(nv);
    for (v, nc) in neg_clause.iter().enumerate() {
        let (clause, partner) = nc.expect("checked above");
        variables.push(VariableGadget {
            var: v,
            partner,
            clause,
            c: names_a.len(),
            c2: names_a.len() + 1,
            d: names_b.len(),
            d2: names_b.len() + 1,
        });
        names_a.push(format!("c{}", v + 1));
        names_a.push(format!("cp{}", v + 1));
        names_b.push(format!("d{}", v + 1));
        names_b.push(format!("dp{}", v + 1));
    }

    let mut prefs_a = vec![Vec::new(); names_a.len()];
    let mut prefs_b = vec![Vec::new(); names_b.len()];
    let mut start = 0;
    for (_, vars) in &positive {
        let k = vars.len();
        let group = &occurrences[start..start + k];
        for t in 0..k {
            let o = group[t];
            let next = group[(t + 1) % k];
            let prev = group[(t + k - 1) % k];
            let g = variables[o.var];
            prefs_a[o.a] = vec![prev.b, o.b, g.d2, o.b2];
            prefs_b[o.b] = vec![next.a, o.a, o.a2];
            prefs_a[o.a2] = vec![o.b, o.b2];
            prefs_b[o.b2] = vec![o.a2, g.c, o.a];
        }
        start += k;
    }
    for g in &variables {
        let h = variables[g.partner];
        let mut c_list = vec![h.d, g.d];
        let mut d2_list = vec![g.c2];
        for o in occurrences.iter().filter(|o| o.var == g.var) {
            c_list.push(o.b2);
            d2_list.push(o.a);
        }
        c_list.push(g.d2);
        d2_list.push(g.c);
        prefs_a[g.c] = c_list;
        prefs_a[g.c2] = vec![g.d, g.d2];
        prefs_b[g.d] = vec![h.c, g.c, g.c2];
        prefs_b[g.d2] = d2_list;
    }

    let base = Instance::new(names_a, names_b, prefs_a, prefs_b)
        .expect("gadget lists are mutual by construction");
    let internal: BTreeSet<Edge> = occurrences
        .iter()
        .flat_map(|o| o.true_edges().into_iter().chain(o.false_edges()))
        .chain(
            variables
                .iter()
                .flat_map(|g| g.true_edges().into_iter().chain(g.false_edges())),
        )
        .collect();
    let costs: Vec<(Edge, i64)> = base
        .edges()
        .iter()
        .filter(|e| !internal.contains(e))
        .map(|&e| (e, 1))
        .collect();
    let instance = base.with_costs(costs).expect("costs on edges");
    Ok(GadgetInstance {
        instance,
        formula: psi_t.clone(),
        occurrences,
        variables,
    })
}

/// The cost-0 matching of a satisfying assignment of the transformed
/// formula: every gadget takes its variable's value.
pub fn assignment_to_matching(
    g: &GadgetInstance,
    assignment: &[bool],
) -> Result<Matching, HardnessError> {
    if assignment.len() != g.formula.num_vars || !g.formula.eval(assignment) {
        return Err(HardnessError::NotSatisfying);
    }
    Ok(g.state_matching(&GadgetState {
        variable_true: assignment.to_vec(),
        occurrence_true: g.occurrences.iter().map(|o| assignment[o.var]).collect(),
    }))
}

/// Reads an assignment off a cost-0 Pareto-optimal matching: a variable is
/// false iff its gadget is in the false state.
pub fn matching_to_assignment(g: &GadgetInstance, m: &Matching) -> Result<Vec<bool>, HardnessError> {
    if matching_cost(&g.instance, m) != 0 {
        return Err(HardnessError::PositiveCost);
    }
    if !is_pareto_optimal(&g.instance, m).optimal {
        return Err(HardnessError::NotParetoOptimal);
    }
    let x: Vec<bool> = g
        .variables
        .iter()
        .map(|v| !v.false_edges().iter().all(|&e| m.contains(e)))
        .collect();
    if !g.formula.eval(&x) {
        return Err(HardnessError::NotSatisfying);
    }
    Ok(x)
}

/// Bounds for [`check_reduction`] inputs.
pub const MAX_CHECK_VARS: usize = 4;
pub const MAX_CHECK_CLAUSES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub satisfiable: bool,
    pub transformed_satisfiable: bool,
    pub nodes: usize,
    pub edges: usize,
    /// Complete gadget-state combinations checked for Pareto-optimality.
    pub candidates: usize,
    /// Partial combinations discarded through a verified all-blocking cycle.
    pub pruned: usize,
    /// Pruning steps whose cycle failed to verify (must be 0).
    pub prune_failures: usize,
    pub pareto_cost0: usize,
    /// Every cost-0 Pareto-optimal matching found is perfect.
    pub all_perfect: bool,
    /// No cost-0 Pareto-optimal matching holds a true occurrence of a false
    /// variable.
    pub consistency_holds: bool,
    /// Every cost-0 Pareto-optimal matching decodes to a satisfying
    /// assignment of the input.
    pub decodes_satisfy: bool,
    /// For satisfiable inputs: the matching of a satisfying assignment is
    /// cost-0 and Pareto-optimal.
    pub constructive_ok: Option<bool>,
}

impl ReductionReport {
    /// Cost-0 Pareto-optimal matchings exist iff the input is satisfiable,
    /// and every side check passed.
    pub fn equivalence_holds(&self) -> bool {
        self.satisfiable == self.transformed_satisfiable
            && self.satisfiable == (self.pareto_cost0 > 0)
            && self.prune_failures == 0
            && self.all_perfect
            && self.consistency_holds
            && self.decodes_satisfy
            && self.constructive_ok.unwrap_or(true)
    }
}

/// Pads, transforms and builds the gadget instance of an arbitrary formula
/// with clauses of 1 to 3 literals.
pub fn reduce(psi: &CnfFormula) -> Result<GadgetInstance, HardnessError> {
    build_gadget_instance(&transform_formula(&pad_unit_clauses(psi))?)
}

/// Confirms the reduction on a tiny formula.
///
/// A cost-0 matching uses gadget edges only. A gadget left with fewer than
/// two of its edges has an edge between two unmatched nodes, so a cost-0
/// Pareto-optimal matching puts every gadget in one of its two states. The
/// checker walks those state combinations variable by variable and drops a
/// partial combination only after exhibiting an alternating cycle inside the
/// decided gadgets whose non-matching edges all block; every completion is
/// then dominated. The remaining combinations are checked in full.
pub fn check_reduction(psi: &CnfFormula) -> Result<ReductionReport, HardnessError> {
    if psi.num_vars > MAX_CHECK_VARS || psi.clauses.len() > MAX_CHECK_CLAUSES {
        return Err(HardnessError::SizeBound {
            vars: MAX_CHECK_VARS,
            clauses: MAX_CHECK_CLAUSES,
        });
    }
    let padded = pad_unit_clauses(psi);
    let psi_t = transform_formula(&padded)?;
    let g = build_gadget_instance(&psi_t)?;
    let satisfiable = brute_sat(psi).is_some();
    let sat_t = brute_sat(&psi_t);

    let mut search = Search {
        g: &g,
        psi,
        order: Vec::new(),
        decided: vec![false; psi_t.num_vars],
        state: GadgetState {
            variable_true: vec![false; psi_t.num_vars],
            occurrence_true: vec![false; g.occurrences.len()],
        },
        report: ReductionReport {
            satisfiable,
            transformed_satisfiable: sat_t.is_some(),
            nodes: g.instance.num_a() + g.instance.num_b(),
            edges: g.instance.num_edges(),
            candidates: 0,
            pruned: 0,
            prune_failures: 0,
            pareto_cost0: 0,
            all_perfect: true,
            consistency_holds: true,
            decodes_satisfy: true,
            constructive_ok: None,
        },
    };
    let n = padded.num_vars;
    for i in 0..n {
        search.order.push(i);
        search.order.push(n + i);
    }
    search.run(0);
    let mut report = search.report;

    if let Some(x) = sat_t {
        let m = assignment_to_matching(&g, &x)?;
        report.constructive_ok = Some(
            matching_cost(&g.instance, &m) == 0 && is_pareto_optimal(&g.instance, &m).optimal,
        );
    }
    Ok(report)
}

struct Search<'a> {
    g: &'a GadgetInstance,
    psi: &'a CnfFormula,
    order: Vec<usize>,
    decided: Vec<bool>,
    state: GadgetState,
    report: ReductionReport,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.leaf();
            return;
        }
        let v = self.order[depth];
        let occ: Vec<usize> = (0..self.g.occurrences.len())
            .filter(|&i| self.g.occurrences[i].var == v)
            .collect();
        self.decided[v] = true;
        for value in [false, true] {
            self.state.variable_true[v] = value;
            for mask in 0u32..1 << occ.len() {
                for (k, &i) in occ.iter().enumerate() {
                    self.state.occurrence_true[i] = mask >> k & 1 == 1;
                }
                if self.prunable(v) {
                    self.report.pruned += 1;
                } else {
                    self.run(depth + 1);
                }
            }
        }
        for &i in &occ {
            self.state.occurrence_true[i] = false;
        }
        self.decided[v] = false;
    }

    /// Looks for a dominating cycle that the latest decision completed.
    fn prunable(&mut self, v: usize) -> bool {
        let g = self.g;
        let mut cycles: Vec<Vec<Node>> = Vec::new();
        let vg = g.variables[v];
        if !self.state.variable_true[v] {
            // a true occurrence of a false variable
            for o in g.occurrences_of(v) {
                let i = g.occurrences.iter().position(|x| x == o).expect("present");
                if self.state.occurrence_true[i] {
                    cycles.push(vec![Node::A(vg.c), Node::B(vg.d2), Node::A(o.a), Node::B(o.b2)]);
                }
            }
        } else if self.decided[vg.partner] && self.state.variable_true[vg.partner] {
            // both literals of a negative clause false
            let h = g.variables[vg.partner];
            cycles.push(vec![Node::A(vg.c), Node::B(vg.d), Node::A(h.c), Node::B(h.d)]);
        }
        // positive clauses through v that are now fully decided and all false
        let mut start = 0;
        while start < g.occurrences.len() {
            let clause = g.occurrences[start].clause;
            let end = (start..g.occurrences.len())
                .find(|&i| g.occurrences[i].clause != clause)
                .unwrap_or(g.occurrences.len());
            let group = &g.occurrences[start..end];
            if group.iter().any(|o| o.var == v)
                && group.iter().all(|o| self.decided[o.var])
                && (start..end).all(|i| !self.state.occurrence_true[i])
            {
                cycles.push(
                    group
                        .iter()
                        .flat_map(|o| [Node::A(o.a), Node::B(o.b)])
                        .collect(),
                );
            }
            start = end;
        }
        for cycle in cycles {
            if self.all_blocking(&cycle) {
                return true;
            }
            self.report.prune_failures += 1;
        }
        false
    }

    /// Partner of a node under the current (partial) state; `None` if its
    /// gadget is undecided.
    fn partner(&self, node: Node) -> Option<Node> {
        let g = self.g;
        for (i, o) in g.occurrences.iter().enumerate() {
            if !self.decided[o.var] {
                continue;
            }
            let es = if self.state.occurrence_true[i] {
                o.true_edges()
            } else {
                o.false_edges()
            };
            if let Some(x) = mate_in(&es, node) {
                return Some(x);
            }
        }
        for vg in &g.variables {
            if !self.decided[vg.var] {
                continue;
            }
            let es = if self.state.variable_true[vg.var] {
                vg.true_edges()
            } else {
                vg.false_edges()
            };
            if let Some(x) = mate_in(&es, node) {
                return Some(x);
            }
        }
        None
    }

    /// `cycle` alternates matched and unmatched steps starting with a
    /// matched one; every unmatched edge must block.
    fn all_blocking(&self, cycle: &[Node]) -> bool {
        let inst = &self.g.instance;
        let k = cycle.len();
        if k < 4 || !k.is_multiple_of(2) {
            return false;
        }
        for i in 0..k {
            let (x, y) = (cycle[i], cycle[(i + 1) % k]);
            let (a, b) = match (x, y) {
                (Node::A(a), Node::B(b)) | (Node::B(b), Node::A(a)) => (a, b),
                _ => return false,
            };
            if !inst.has_edge(a, b) {
                return false;
            }
            let (pa, pb) = match (self.partner(Node::A(a)), self.partner(Node::B(b))) {
                (Some(Node::B(pa)), Some(Node::A(pb))) => (pa, pb),
                _ => return false,
            };
            let matched = pa == b;
            if matched != (i % 2 == 0) {
                return false;
            }
            if !matched && !(inst.a_prefers(a, Some(b), Some(pa)) && inst.b_prefers(b, Some(a), Some(pb))) {
                return false;
            }
        }
        true
    }

    fn leaf(&mut self) {
        self.report.candidates += 1;
        let g = self.g;
        let m = g.state_matching(&self.state);
        if !is_pareto_optimal(&g.instance, &m).optimal {
            return;
        }
        self.report.pareto_cost0 += 1;
        if 2 * m.len() != g.instance.num_a() + g.instance.num_b() {
            self.report.all_perfect = false;
        }
        for o in &g.occurrences {
            let vg = g.variables[o.var];
            if m.contains(o.true_edges()[0]) && m.contains(vg.false_edges()[0]) {
                self.report.consistency_holds = false;
            }
        }
        match matching_to_assignment(g, &m) {
            Ok(x) if self.psi.eval(&x[..self.psi.num_vars]) => {}
            _ => self.report.decodes_satisfy = false,
        }
    }
}

fn mate_in(es: &[Edge; 2], node: Node) -> Option<Node> {
    es.iter().find_map(|e| match node {
        Node::A(a) if e.a == a => Some(Node::B(e.b)),
        Node::B(b) if e.b == b => Some(Node::A(e.a)),
        _ => None,
    })
}
