//! Program graphs over finitely-valued shared variables.
//!
//! A shared-variable system is an ordered tuple of program graphs, each
//! owning a set of declared variables with explicit finite domains.
//! Guards and parallel-assignment actions are expressions in a small
//! language over integers and enum atoms. The state graph has one vertex
//! per location tuple and evaluation, and one edge per enabled transition
//! instance; [`lts_model`] restricts it to the part reachable from the
//! initial state and equips it with the process-order relation on labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hda::{Hda, HdaMorphism, Label};
use crate::lts::{self, LtsSystem, Relation};
use crate::pcs::{CellId, Path, PcsBuilder};

/// A variable value: an integer or an enum atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Sym(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: Vec<Value>,
}

/// An assignment of a value to each variable in some set.
pub type Evaluation = BTreeMap<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
            Op::And => "&&",
            Op::Or => "||",
        }
    }
}

/// An expression over integers, booleans, variables, and enum atoms. An
/// identifier denotes a variable when one of that name is in scope and an
/// atom constant otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Ident(String),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Not(e) => write!(f, "!({e})"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

impl Expr {
    /// All identifiers occurring in the expression.
    pub fn idents(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        fn walk<'a>(e: &'a Expr, out: &mut BTreeSet<&'a str>) {
            match e {
                Expr::Ident(s) => {
                    out.insert(s.as_str());
                }
                Expr::Not(e) | Expr::Neg(e) => walk(e, out),
                Expr::Bin(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProggError {
    #[error("parse error in expression: {0}")]
    Parse(String),
    #[error("type error evaluating expression: {0}")]
    Eval(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("process {process} action {action} assigns {value} to {variable}, outside its domain")]
    DomainViolation { process: usize, action: String, variable: String, value: Value },
    #[error("evaluations overlap on variable {0}")]
    Overlap(String),
    #[error("conflicting declarations for shared variable {0}")]
    DeclConflict(String),
    #[error("systems share declared variables: {0:?}")]
    SharedVariables(Vec<String>),
    #[error("systems are not isomorphic: {0}")]
    NotIsomorphic(String),
    #[error(transparent)]
    Lts(#[from] lts::LtsError),
}

// ---------------------------------------------------------------------------
// expression parsing and evaluation

struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Int(i64),
    Ident(&'a str),
    Sym(&'a str),
}

fn tokenize(s: &str) -> Result<Vec<Tok<'_>>, ProggError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n = s[start..i].parse().map_err(|_| ProggError::Parse("integer overflow".into()))?;
            out.push(Tok::Int(n));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(&s[start..i]));
        } else {
            let two = ["==", "!=", "<=", ">=", "&&", "||"];
            if i + 1 < b.len() && two.contains(&&s[i..i + 2]) {
                out.push(Tok::Sym(&s[i..i + 2]));
                i += 2;
            } else if "+-*<>!()".contains(c) {
                out.push(Tok::Sym(&s[i..i + 1]));
                i += 1;
            } else {
                return Err(ProggError::Parse(format!("unexpected character {c:?} in {s:?}")));
            }
        }
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).copied()
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.peek() == Some(Tok::Sym(sym)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Expr, ProggError> {
        let mut e = self.and()?;
        while self.eat_sym("||") {
            e = Expr::Bin(Op::Or, Box::new(e), Box::new(self.and()?));
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr, ProggError> {
        let mut e = self.cmp()?;
        while self.eat_sym("&&") {
            e = Expr::Bin(Op::And, Box::new(e), Box::new(self.cmp()?));
        }
        Ok(e)
    }

    fn cmp(&mut self) -> Result<Expr, ProggError> {
        let mut e = self.sum()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym("==")) => Op::Eq,
                Some(Tok::Sym("!=")) => Op::Ne,
                Some(Tok::Sym("<=")) => Op::Le,
                Some(Tok::Sym(">=")) => Op::Ge,
                Some(Tok::Sym("<")) => Op::Lt,
                Some(Tok::Sym(">")) => Op::Gt,
                _ => break,
            };
            self.pos += 1;
            e = Expr::Bin(op, Box::new(e), Box::new(self.sum()?));
        }
        Ok(e)
    }

    fn sum(&mut self) -> Result<Expr, ProggError> {
        let mut e = self.product()?;
        loop {
            if self.eat_sym("+") {
                e = Expr::Bin(Op::Add, Box::new(e), Box::new(self.product()?));
            } else if self.eat_sym("-") {
                e = Expr::Bin(Op::Sub, Box::new(e), Box::new(self.product()?));
            } else {
                break;
            }
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, ProggError> {
        let mut e = self.unary()?;
        while self.eat_sym("*") {
            e = Expr::Bin(Op::Mul, Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ProggError> {
        if self.eat_sym("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ProggError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident("true")) => {
                self.pos += 1;
                Ok(Expr::Bool(true))
            }
            Some(Tok::Ident("false")) => {
                self.pos += 1;
                Ok(Expr::Bool(false))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident(name.to_string()))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.or()?;
                if !self.eat_sym(")") {
                    return Err(ProggError::Parse("missing closing parenthesis".into()));
                }
                Ok(e)
            }
            other => Err(ProggError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ProggError> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.or()?;
    if p.pos != p.toks.len() {
        return Err(ProggError::Parse(format!("trailing input after expression in {s:?}")));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Evaled {
    V(Value),
    B(bool),
}

fn eval_expr(e: &Expr, eta: &Evaluation) -> Result<Evaled, ProggError> {
    let int = |v: Evaled| match v {
        Evaled::V(Value::Int(n)) => Ok(n),
        other => Err(ProggError::Eval(format!("expected an integer, got {other:?}"))),
    };
    let boolean = |v: Evaled| match v {
        Evaled::B(b) => Ok(b),
        other => Err(ProggError::Eval(format!("expected a boolean, got {other:?}"))),
    };
    Ok(match e {
        Expr::Int(n) => Evaled::V(Value::Int(*n)),
        Expr::Bool(b) => Evaled::B(*b),
        Expr::Ident(name) => match eta.get(name) {
            Some(v) => Evaled::V(v.clone()),
            None => Evaled::V(Value::Sym(name.clone())),
        },
        Expr::Not(e) => Evaled::B(!boolean(eval_expr(e, eta)?)?),
        Expr::Neg(e) => Evaled::V(Value::Int(-int(eval_expr(e, eta)?)?)),
        Expr::Bin(op, a, b) => {
            let a = eval_expr(a, eta)?;
            match op {
                Op::And => Evaled::B(boolean(a)? && boolean(eval_expr(b, eta)?)?),
                Op::Or => Evaled::B(boolean(a)? || boolean(eval_expr(b, eta)?)?),
                _ => {
                    let b = eval_expr(b, eta)?;
                    match op {
                        Op::Add => Evaled::V(Value::Int(int(a)? + int(b)?)),
                        Op::Sub => Evaled::V(Value::Int(int(a)? - int(b)?)),
                        Op::Mul => Evaled::V(Value::Int(int(a)? * int(b)?)),
                        Op::Lt => Evaled::B(int(a)? < int(b)?),
                        Op::Le => Evaled::B(int(a)? <= int(b)?),
                        Op::Gt => Evaled::B(int(a)? > int(b)?),
                        Op::Ge => Evaled::B(int(a)? >= int(b)?),
                        Op::Eq | Op::Ne => {
                            let (Evaled::V(x), Evaled::V(y)) = (&a, &b) else {
                                return Err(ProggError::Eval(
                                    "equality requires two values".into(),
                                ));
                            };
                            Evaled::B((x == y) == matches!(op, Op::Eq))
                        }
                        _ => unreachable!(),
                    }
                }
            }
        }
    })
}

/// Evaluates a guard expression to a boolean.
pub fn eval_guard(g: &Expr, eta: &Evaluation) -> Result<bool, ProggError> {
    match eval_expr(g, eta)? {
        Evaled::B(b) => Ok(b),
        other => Err(ProggError::Eval(format!("guard is not boolean: {other:?}"))),
    }
}

// ---------------------------------------------------------------------------
// program graphs and systems

/// A named parallel-assignment action: all right-hand sides are evaluated
/// in the pre-state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    pub assigns: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub action: String,
    pub to: String,
    pub guard: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramGraph {
    pub declared: BTreeSet<String>,
    pub locations: Vec<String>,
    pub initial: String,
    pub actions: Vec<Action>,
    pub transitions: Vec<Transition>,
}

impl ProgramGraph {
    pub fn action(&self, name: &str) -> Option<&Action> {
        self.actions.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedVariableSystem {
    pub variables: Vec<VarDecl>,
    pub initial: Evaluation,
    pub graphs: Vec<ProgramGraph>,
}

impl SharedVariableSystem {
    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn validate(&self) -> Result<(), ProggError> {
        let err = |m: String| Err(ProggError::InvalidSystem(m));
        let mut names = BTreeSet::new();
        for v in &self.variables {
            if !names.insert(&v.name) {
                return err(format!("variable {} declared twice", v.name));
            }
            if v.domain.is_empty() {
                return err(format!("variable {} has an empty domain", v.name));
            }
            if v.domain.iter().collect::<BTreeSet<_>>().len() != v.domain.len() {
                return err(format!("variable {} has duplicate domain values", v.name));
            }
        }
        for v in &self.variables {
            match self.initial.get(&v.name) {
                Some(val) if v.domain.contains(val) => {}
                Some(val) => {
                    return err(format!("initial value {val} of {} is outside its domain", v.name))
                }
                None => return err(format!("variable {} has no initial value", v.name)),
            }
        }
        if self.initial.len() != self.variables.len() {
            return err("initial evaluation mentions undeclared variables".into());
        }
        for (gi, g) in self.graphs.iter().enumerate() {
            let gi = gi + 1;
            if g.locations.iter().collect::<BTreeSet<_>>().len() != g.locations.len() {
                return err(format!("process {gi} has duplicate locations"));
            }
            if !g.locations.contains(&g.initial) {
                return err(format!("process {gi} initial location {} unknown", g.initial));
            }
            for v in &g.declared {
                if self.var(v).is_none() {
                    return err(format!("process {gi} declares unknown variable {v}"));
                }
            }
            if g.actions.iter().map(|a| &a.name).collect::<BTreeSet<_>>().len() != g.actions.len() {
                return err(format!("process {gi} has duplicate action names"));
            }
            let scope_ok = |e: &Expr| {
                e.idents()
                    .iter()
                    .all(|id| self.var(id).is_none() || g.declared.contains(*id))
            };
            for a in &g.actions {
                for (target, rhs) in &a.assigns {
                    if !g.declared.contains(target) {
                        return err(format!(
                            "process {gi} action {} assigns undeclared variable {target}",
                            a.name
                        ));
                    }
                    if !scope_ok(rhs) {
                        return err(format!(
                            "process {gi} action {} reads a variable outside its declared set",
                            a.name
                        ));
                    }
                }
            }
            for t in &g.transitions {
                if !g.locations.contains(&t.from) || !g.locations.contains(&t.to) {
                    return err(format!("process {gi} transition uses an unknown location"));
                }
                if g.action(&t.action).is_none() {
                    return err(format!("process {gi} transition uses unknown action {}", t.action));
                }
                if !scope_ok(&t.guard) {
                    return err(format!(
                        "process {gi} guard on {} reads a variable outside its declared set",
                        t.action
                    ));
                }
            }
        }
        Ok(())
    }

    /// True when no two transitions of any graph share start location and
    /// action.
    pub fn is_syntactically_deterministic(&self) -> bool {
        self.graphs.iter().all(|g| {
            let keys: BTreeSet<(&str, &str)> = g
                .transitions
                .iter()
                .map(|t| (t.from.as_str(), t.action.as_str()))
                .collect();
            keys.len() == g.transitions.len()
        })
    }
}

/// Applies a parallel-assignment action of process `process` to an
/// evaluation of its declared variables; every right-hand side is
/// evaluated in `eta`, and each result is checked against the target's
/// domain.
pub fn apply_action(
    a: &Action,
    eta: &Evaluation,
    sys: &SharedVariableSystem,
    process: usize,
) -> Result<Evaluation, ProggError> {
    let mut out = eta.clone();
    for (target, rhs) in &a.assigns {
        let value = match eval_expr(rhs, eta)? {
            Evaled::V(v) => v,
            Evaled::B(_) => {
                return Err(ProggError::Eval(format!(
                    "assignment to {target} produced a boolean"
                )))
            }
        };
        let decl = sys.var(target).expect("validated target");
        if !decl.domain.contains(&value) {
            return Err(ProggError::DomainViolation {
                process,
                action: a.name.clone(),
                variable: target.clone(),
                value,
            });
        }
        out.insert(target.clone(), value);
    }
    Ok(out)
}

/// Joins two evaluations over disjoint variable sets.
pub fn star(a: &Evaluation, b: &Evaluation) -> Result<Evaluation, ProggError> {
    let mut out = a.clone();
    for (k, v) in b {
        if out.insert(k.clone(), v.clone()).is_some() {
            return Err(ProggError::Overlap(k.clone()));
        }
    }
    Ok(out)
}

fn restrict(eta: &Evaluation, vars: &BTreeSet<String>) -> Evaluation {
    eta.iter().filter(|(k, _)| vars.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// All evaluations of the given variables, in lexicographic order.
pub fn enumerate_evaluations(vars: &[&VarDecl]) -> Vec<Evaluation> {
    let mut out = vec![Evaluation::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|eta| {
                v.domain.iter().map(move |val| {
                    let mut e = eta.clone();
                    e.insert(v.name.clone(), val.clone());
                    e
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------
// state graph and transition-system model

/// A state: one location per process plus an evaluation of all variables.
pub type StateTuple = (Vec<String>, Evaluation);

/// The data determining one state-graph edge: process `i`, a transition of
/// that process, the other processes' locations, an evaluation `gamma` of
/// the process's variables satisfying the guard, and an evaluation `eta`
/// of the remaining variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeTuple {
    pub process: usize,
    pub transition: usize,
    pub others: Vec<String>,
    pub gamma: Evaluation,
    pub eta: Evaluation,
}

/// Recomputes the two endpoint states of an edge from its tuple alone:
/// the start substitutes the transition's start location and `gamma ∗
/// eta`, the end substitutes the end location and `a(gamma) ∗ eta`.
pub fn edge_faces(
    sys: &SharedVariableSystem,
    e: &EdgeTuple,
) -> Result<(StateTuple, StateTuple), ProggError> {
    let g = &sys.graphs[e.process - 1];
    let t = &g.transitions[e.transition];
    let action = g.action(&t.action).expect("validated action");
    let insert = |loc: &str| {
        let mut locs = e.others.clone();
        locs.insert(e.process - 1, loc.to_string());
        locs
    };
    let start = (insert(&t.from), star(&e.gamma, &e.eta)?);
    let end = (
        insert(&t.to),
        star(&apply_action(action, &e.gamma, sys, e.process)?, &e.eta)?,
    );
    Ok((start, end))
}

/// The full state graph: every location tuple and evaluation, whether
/// reachable or not, with decoders from cell indices back to tuples.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub cells: crate::pcs::PrecubicalSet,
    pub states: Vec<StateTuple>,
    pub state_index: BTreeMap<StateTuple, usize>,
    pub edges: Vec<EdgeTuple>,
}

/// Cartesian product of the location sets of all graphs, in declaration
/// order.
fn location_tuples(graphs: &[ProgramGraph]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for g in graphs {
        out = out
            .into_iter()
            .flat_map(|locs| {
                g.locations.iter().map(move |l| {
                    let mut v = locs.clone();
                    v.push(l.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Enumerates every edge tuple of the system, in (process, transition,
/// other-locations, gamma, eta) order. Shared by the eager state graph
/// and, filtered by a source predicate, the reachable model.
fn all_edges(sys: &SharedVariableSystem) -> Result<Vec<EdgeTuple>, ProggError> {
    let mut out = Vec::new();
    for (pi, g) in sys.graphs.iter().enumerate() {
        let process = pi + 1;
        let own: Vec<&VarDecl> =
            sys.variables.iter().filter(|v| g.declared.contains(&v.name)).collect();
        let rest: Vec<&VarDecl> =
            sys.variables.iter().filter(|v| !g.declared.contains(&v.name)).collect();
        let others: Vec<Vec<String>> = location_tuples(
            &sys.graphs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != pi)
                .map(|(_, g)| g.clone())
                .collect::<Vec<_>>(),
        );
        for (ti, t) in g.transitions.iter().enumerate() {
            for gamma in enumerate_evaluations(&own) {
                if !eval_guard(&t.guard, &gamma)? {
                    continue;
                }
                for other in &others {
                    for eta in enumerate_evaluations(&rest) {
                        out.push(EdgeTuple {
                            process,
                            transition: ti,
                            others: other.clone(),
                            gamma: gamma.clone(),
                            eta,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Builds the full (eager) state graph of a system. Any action result
/// outside a variable's domain aborts the construction with a diagnostic
/// naming the process, action, and variable.
pub fn state_graph(sys: &SharedVariableSystem) -> Result<StateGraph, ProggError> {
    sys.validate()?;
    let all_vars: Vec<&VarDecl> = sys.variables.iter().collect();
    let mut states = Vec::new();
    let mut state_index = BTreeMap::new();
    for locs in location_tuples(&sys.graphs) {
        for eta in enumerate_evaluations(&all_vars) {
            let s = (locs.clone(), eta);
            state_index.insert(s.clone(), states.len());
            states.push(s);
        }
    }
    let mut b = PcsBuilder::new();
    b.add_vertices(states.len());
    let edges = all_edges(sys)?;
    for e in &edges {
        let (src, dst) = edge_faces(sys, e)?;
        b.add_edge(CellId::new(0, state_index[&src]), CellId::new(0, state_index[&dst]))
            .unwrap();
    }
    Ok(StateGraph { cells: b.build(), states, state_index, edges })
}

/// The reachable transition-system model of a system, with decoders and
/// breadth-first witness data.
#[derive(Debug, Clone)]
pub struct LtsModel {
    pub system: LtsSystem,
    pub states: Vec<StateTuple>,
    pub state_index: BTreeMap<StateTuple, usize>,
    pub edges: Vec<EdgeTuple>,
    /// For each non-initial state, the edge that first reached it.
    parents: Vec<Option<usize>>,
}

impl LtsModel {
    /// A concrete path from the initial state to `state`, built from the
    /// breadth-first discovery edges.
    pub fn witness_path(&self, state: usize) -> Path {
        let mut rev = Vec::new();
        let mut cur = state;
        while let Some(e) = self.parents[cur] {
            rev.push(CellId::new(1, e));
            cur = self.system.hda.cells.edge_src(CellId::new(1, e)).idx;
        }
        rev.reverse();
        Path::from_steps(self.system.hda.initial, rev, &self.system.hda.cells)
            .expect("parent edges chain to the initial state")
    }
}

/// Builds the reachable restriction of the state graph from the initial
/// state, labels each edge with its process ID and action name, and takes
/// as related exactly the process-ordered label pairs `(i,a) ⋉ (j,b)`,
/// `i < j`, that are witnessed by an independence square. Finals are
/// empty.
pub fn lts_model(sys: &SharedVariableSystem) -> Result<LtsModel, ProggError> {
    sys.validate()?;
    let initial_state: StateTuple = (
        sys.graphs.iter().map(|g| g.initial.clone()).collect(),
        sys.initial.clone(),
    );
    let mut states = vec![initial_state.clone()];
    let mut state_index: BTreeMap<StateTuple, usize> = [(initial_state, 0)].into();
    let mut parents: Vec<Option<usize>> = vec![None];
    let mut edges: Vec<EdgeTuple> = Vec::new();
    let mut edge_ends: Vec<(usize, usize, Label)> = Vec::new();
    let mut frontier = vec![0usize];
    while let Some(si) = frontier.pop() {
        let (locs, eta) = states[si].clone();
        for (pi, g) in sys.graphs.iter().enumerate() {
            let process = pi + 1;
            let gamma = restrict(&eta, &g.declared);
            let rest: Evaluation = eta
                .iter()
                .filter(|(k, _)| !g.declared.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            for (ti, t) in g.transitions.iter().enumerate() {
                if t.from != locs[pi] || !eval_guard(&t.guard, &gamma)? {
                    continue;
                }
                let tuple = EdgeTuple {
                    process,
                    transition: ti,
                    others: locs
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != pi)
                        .map(|(_, l)| l.clone())
                        .collect(),
                    gamma: gamma.clone(),
                    eta: rest.clone(),
                };
                let (_, dst) = edge_faces(sys, &tuple)?;
                let di = match state_index.get(&dst) {
                    Some(&d) => d,
                    None => {
                        let d = states.len();
                        state_index.insert(dst.clone(), d);
                        states.push(dst);
                        parents.push(Some(edges.len()));
                        frontier.push(d);
                        d
                    }
                };
                edge_ends.push((si, di, Label::act(process, &t.action)));
                edges.push(tuple);
            }
        }
    }
    let mut b = PcsBuilder::new();
    b.add_vertices(states.len());
    let mut labels = Vec::new();
    for (src, dst, l) in &edge_ends {
        b.add_edge(CellId::new(0, *src), CellId::new(0, *dst)).unwrap();
        labels.push(l.clone());
    }
    let alphabet: BTreeSet<Label> = labels.iter().cloned().collect();
    let hda = Hda::new(b.build(), CellId::new(0, 0), BTreeSet::new(), alphabet.clone(), labels)
        .expect("constructed labeling is total");
    // the process-order relation over present labels, trimmed to the pairs
    // actually witnessed by an independence square
    let full: Relation = alphabet
        .iter()
        .flat_map(|a| alphabet.iter().map(move |b| (a.clone(), b.clone())))
        .filter(|(a, b)| match (a, b) {
            (Label::Act { process: i, .. }, Label::Act { process: j, .. }) => i < j,
            _ => false,
        })
        .collect();
    let relation: Relation = lts::squares_of(&hda, &full)
        .into_iter()
        .map(|sq| (hda.label(sq.front2).clone(), hda.label(sq.front1).clone()))
        .collect();
    let system = LtsSystem::new(hda, relation)?;
    Ok(LtsModel { system, states, state_index, edges, parents })
}

// ---------------------------------------------------------------------------
// composition and the isomorphism theorems

/// Concatenates the graph tuples and merges variable tables and initial
/// evaluations. A variable shared by name must have identical declarations
/// and initial values.
pub fn parallel_compose(
    sys1: &SharedVariableSystem,
    sys2: &SharedVariableSystem,
) -> Result<SharedVariableSystem, ProggError> {
    let mut variables = sys1.variables.clone();
    for v in &sys2.variables {
        match sys1.var(&v.name) {
            Some(prev) if prev != v => return Err(ProggError::DeclConflict(v.name.clone())),
            Some(_) => {}
            None => variables.push(v.clone()),
        }
    }
    let mut initial = sys1.initial.clone();
    for (k, v) in &sys2.initial {
        match initial.get(k) {
            Some(prev) if prev != v => return Err(ProggError::DeclConflict(k.clone())),
            Some(_) => {}
            None => {
                initial.insert(k.clone(), v.clone());
            }
        }
    }
    Ok(SharedVariableSystem {
        variables,
        initial,
        graphs: sys1.graphs.iter().chain(&sys2.graphs).cloned().collect(),
    })
}

/// The label re-indexing of a composition: left labels keep their process
/// ID, right labels are shifted by the number of left processes.
fn shift_label_map(m1: &LtsSystem, m2: &LtsSystem, n1: usize) -> BTreeMap<Label, Label> {
    let mut out = BTreeMap::new();
    for l in &m1.hda.alphabet {
        out.insert(l.clone().left(), l.clone());
    }
    for l in &m2.hda.alphabet {
        let shifted = match l {
            Label::Act { process, action } => Label::act(process + n1, action),
            other => other.clone(),
        };
        out.insert(l.clone().right(), shifted);
    }
    out
}

/// Checks that `f` is an isomorphism of systems `a → b`: a bijective
/// morphism whose label map is a bijection carrying the relation exactly
/// onto the target relation.
pub fn verify_lts_iso(f: &HdaMorphism, a: &LtsSystem, b: &LtsSystem) -> Result<(), ProggError> {
    let report = lts::check_lts_morphism(f, a, b);
    if !report.is_empty() {
        return Err(ProggError::NotIsomorphic(format!("not a morphism: {:?}", report[0])));
    }
    if !f.is_bijective(&b.hda) {
        return Err(ProggError::NotIsomorphic("cell map is not bijective".into()));
    }
    let image: BTreeSet<&Label> = f.label_map.values().collect();
    if image.len() != f.label_map.len() || image != b.hda.alphabet.iter().collect() {
        return Err(ProggError::NotIsomorphic("label map is not a bijection of alphabets".into()));
    }
    let rel_image: Relation = a
        .relation
        .iter()
        .map(|(x, y)| (f.label_map[x].clone(), f.label_map[y].clone()))
        .collect();
    if rel_image != b.relation {
        return Err(ProggError::NotIsomorphic("relations do not correspond".into()));
    }
    Ok(())
}

/// The explicit isomorphism from the interleaving of the two component
/// models to the model of the parallel composition: location tuples are
/// concatenated, evaluations joined, and right-hand labels re-indexed.
/// Requires the two systems to declare disjoint variables.
pub fn interleaving_iso(
    sys1: &SharedVariableSystem,
    sys2: &SharedVariableSystem,
) -> Result<HdaMorphism, ProggError> {
    let shared: Vec<String> = sys1
        .variables
        .iter()
        .filter(|v| sys2.var(&v.name).is_some())
        .map(|v| v.name.clone())
        .collect();
    if !shared.is_empty() {
        return Err(ProggError::SharedVariables(shared));
    }
    let m1 = lts_model(sys1)?;
    let m2 = lts_model(sys2)?;
    let comp = lts_model(&parallel_compose(sys1, sys2)?)?;
    let (inter, prov) = lts::interleave(&m1.system, &m2.system);
    let label_map = shift_label_map(&m1.system, &m2.system, sys1.graphs.len());

    let mut vertex_map = Vec::with_capacity(inter.hda.cells.count(0));
    for v in inter.hda.cells.cells(0) {
        let (x, y) = prov.split(v);
        let (l1, e1) = &m1.states[x.idx];
        let (l2, e2) = &m2.states[y.idx];
        let state = (l1.iter().chain(l2).cloned().collect::<Vec<_>>(), star(e1, e2)?);
        match comp.state_index.get(&state) {
            Some(&i) => vertex_map.push(i),
            None => {
                return Err(ProggError::NotIsomorphic(format!(
                    "interleaving state {state:?} is unreachable in the composition"
                )))
            }
        }
    }
    let f = close_edges(vec![vertex_map], label_map, &inter, &comp.system)?;
    verify_lts_iso(&f, &inter, &comp.system)?;
    Ok(f)
}

/// Completes a vertex map and label map to a full morphism by matching
/// each edge with the target edge of equal endpoints and mapped label;
/// well-defined because the target is extensional.
fn close_edges(
    mut cell_map: Vec<Vec<usize>>,
    label_map: BTreeMap<Label, Label>,
    a: &LtsSystem,
    b: &LtsSystem,
) -> Result<HdaMorphism, ProggError> {
    let mut by_key: BTreeMap<(CellId, CellId, &Label), CellId> = BTreeMap::new();
    for e in b.hda.cells.cells(1) {
        by_key.insert((b.hda.cells.edge_src(e), b.hda.cells.edge_dst(e), b.hda.label(e)), e);
    }
    let mut level = Vec::with_capacity(a.hda.cells.count(1));
    for e in a.hda.cells.cells(1) {
        let src = CellId::new(0, cell_map[0][a.hda.cells.edge_src(e).idx]);
        let dst = CellId::new(0, cell_map[0][a.hda.cells.edge_dst(e).idx]);
        let label = label_map.get(a.hda.label(e)).ok_or_else(|| {
            ProggError::NotIsomorphic(format!("label {} has no image", a.hda.label(e)))
        })?;
        match by_key.get(&(src, dst, label)) {
            Some(y) => level.push(y.idx),
            None => {
                return Err(ProggError::NotIsomorphic(format!(
                    "no target edge {src:?} → {dst:?} labeled {label}"
                )))
            }
        }
    }
    cell_map.push(level);
    Ok(HdaMorphism { cell_map, label_map })
}

/// Searches for the unique label-respecting isomorphism between two
/// deterministic systems under a given label bijection, by matching states
/// breadth-first from the initial vertices. Used to detect nondeterministic
/// sums and accidental coincidences of composition semantics.
pub fn forced_iso(
    a: &LtsSystem,
    b: &LtsSystem,
    label_map: BTreeMap<Label, Label>,
) -> Result<HdaMorphism, ProggError> {
    for t in [a, b] {
        if let Err((e1, e2)) = lts::is_deterministic_lts(t) {
            return Err(ProggError::NotIsomorphic(format!(
                "system is not deterministic: edges {e1:?}, {e2:?}"
            )));
        }
    }
    if a.hda.cells.count(0) != b.hda.cells.count(0)
        || a.hda.cells.count(1) != b.hda.cells.count(1)
    {
        return Err(ProggError::NotIsomorphic("cell counts differ".into()));
    }
    let mut by_key: BTreeMap<(CellId, &Label), CellId> = BTreeMap::new();
    for e in b.hda.cells.cells(1) {
        by_key.insert((b.hda.cells.edge_src(e), b.hda.label(e)), e);
    }
    let mut vmap: Vec<Option<usize>> = vec![None; a.hda.cells.count(0)];
    vmap[a.hda.initial.idx] = Some(b.hda.initial.idx);
    let mut queue = vec![a.hda.initial.idx];
    let mut by_src: BTreeMap<usize, Vec<CellId>> = BTreeMap::new();
    for e in a.hda.cells.cells(1) {
        by_src.entry(a.hda.cells.edge_src(e).idx).or_default().push(e);
    }
    while let Some(v) = queue.pop() {
        let img = CellId::new(0, vmap[v].unwrap());
        for &e in by_src.get(&v).into_iter().flatten() {
            let label = label_map.get(a.hda.label(e)).ok_or_else(|| {
                ProggError::NotIsomorphic(format!("label {} has no image", a.hda.label(e)))
            })?;
            let Some(&ie) = by_key.get(&(img, label)) else {
                return Err(ProggError::NotIsomorphic(format!(
                    "no edge labeled {label} at the image of vertex {v}"
                )));
            };
            let d = a.hda.cells.edge_dst(e).idx;
            let id = b.hda.cells.edge_dst(ie).idx;
            match vmap[d] {
                Some(prev) if prev != id => {
                    return Err(ProggError::NotIsomorphic(format!(
                        "vertex {d} forced onto two distinct images"
                    )))
                }
                Some(_) => {}
                None => {
                    vmap[d] = Some(id);
                    queue.push(d);
                }
            }
        }
    }
    let vertex_map: Vec<usize> = vmap
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| ProggError::NotIsomorphic("some vertex is unreachable".into()))?;
    let f = close_edges(vec![vertex_map], label_map, a, b)?;
    verify_lts_iso(&f, a, b)?;
    Ok(f)
}

/// Tests whether the composition of two one-process systems is their
/// nondeterministic sum: the model of the composition must be isomorphic
/// to the coproduct of the component models under the canonical state
/// match.
pub fn nondeterministic_sum_iso(
    sys1: &SharedVariableSystem,
    sys2: &SharedVariableSystem,
) -> Result<HdaMorphism, ProggError> {
    let m1 = lts_model(sys1)?;
    let m2 = lts_model(sys2)?;
    let comp = lts_model(&parallel_compose(sys1, sys2)?)?;
    let (sum, _) = lts::coproduct_lts(&m1.system, &m2.system);
    let label_map = shift_label_map(&m1.system, &m2.system, sys1.graphs.len());
    forced_iso(&sum, &comp.system, label_map)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One increment/decrement process over a variable with domain
    /// {0,1,2}; guards keep all action results in the domain.
    pub fn incdec(var: &str) -> SharedVariableSystem {
        let graph = incdec_graph(var, "true");
        SharedVariableSystem {
            variables: vec![VarDecl {
                name: var.into(),
                domain: vec![Value::Int(0), Value::Int(1), Value::Int(2)],
            }],
            initial: [(var.to_string(), Value::Int(0))].into(),
            graphs: vec![graph],
        }
    }

    fn incdec_graph(var: &str, inc_guard: &str) -> ProgramGraph {
        ProgramGraph {
            declared: [var.to_string()].into(),
            locations: vec!["0".into(), "1".into()],
            initial: "0".into(),
            actions: vec![
                Action {
                    name: format!("{var}++"),
                    assigns: vec![(
                        var.to_string(),
                        parse_expr(&format!("{var} + 1")).unwrap(),
                    )],
                },
                Action {
                    name: format!("{var}--"),
                    assigns: vec![(
                        var.to_string(),
                        parse_expr(&format!("{var} - 1")).unwrap(),
                    )],
                },
            ],
            transitions: vec![
                Transition {
                    from: "0".into(),
                    action: format!("{var}++"),
                    to: "1".into(),
                    guard: parse_expr(&format!("({var} <= 1) && ({inc_guard})")).unwrap(),
                },
                Transition {
                    from: "1".into(),
                    action: format!("{var}--"),
                    to: "0".into(),
                    guard: parse_expr(&format!("{var} >= 1")).unwrap(),
                },
            ],
        }
    }

    /// The two-process system: two copies of the increment/decrement
    /// process sharing one variable.
    pub fn incdec2() -> SharedVariableSystem {
        parallel_compose(&incdec("x"), &incdec("x")).unwrap()
    }

    /// The modified system whose increments are guarded to fire only at 0.
    pub fn incdec2_guarded() -> SharedVariableSystem {
        let one = |_: ()| SharedVariableSystem {
            graphs: vec![incdec_graph("x", "x == 0")],
            ..incdec("x")
        };
        parallel_compose(&one(()), &one(())).unwrap()
    }

    #[test]
    fn expression_round_trip_and_eval() {
        for src in ["x + 1", "(x <= 1) && (y == red)", "!(x == 0) || false", "-x * 3 - 2"] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
        let eta: Evaluation = [("x".to_string(), Value::Int(0))].into();
        assert!(eval_guard(&parse_expr("x == 0").unwrap(), &eta).unwrap());
        assert!(!eval_guard(&parse_expr("x >= 1").unwrap(), &eta).unwrap());
        // an undeclared identifier is an enum atom equal only to itself
        let eta: Evaluation = [("c".to_string(), Value::Sym("red".into()))].into();
        assert!(eval_guard(&parse_expr("c == red").unwrap(), &eta).unwrap());
        assert!(!eval_guard(&parse_expr("c == green").unwrap(), &eta).unwrap());
        assert!(eval_guard(&parse_expr("1 + 2 * 3 == 7").unwrap(), &eta).unwrap());
        assert!(matches!(
            eval_guard(&parse_expr("x + true").unwrap(), &eta),
            Err(ProggError::Eval(_))
        ));
        assert!(matches!(parse_expr("x +"), Err(ProggError::Parse(_))));
    }

    #[test]
    fn action_and_star_semantics() {
        let sys = incdec("x");
        let inc = sys.graphs[0].action("x++").unwrap();
        let eta: Evaluation = [("x".to_string(), Value::Int(0))].into();
        let out = apply_action(inc, &eta, &sys, 1).unwrap();
        assert_eq!(out["x"], Value::Int(1));
        let eta2: Evaluation = [("x".to_string(), Value::Int(2))].into();
        assert_eq!(
            apply_action(inc, &eta2, &sys, 1),
            Err(ProggError::DomainViolation {
                process: 1,
                action: "x++".into(),
                variable: "x".into(),
                value: Value::Int(3),
            })
        );

        let a: Evaluation = [("x".to_string(), Value::Int(1))].into();
        let b: Evaluation = [("y".to_string(), Value::Int(2))].into();
        let joined = star(&a, &b).unwrap();
        assert_eq!(joined.len(), 2);
        assert_eq!(star(&Evaluation::new(), &a).unwrap(), a);
        assert_eq!(star(&a, &a), Err(ProggError::Overlap("x".into())));
        // parallel assignment evaluates right-hand sides in the pre-state
        let swap = Action {
            name: "swap".into(),
            assigns: vec![
                ("x".into(), parse_expr("y").unwrap()),
                ("y".into(), parse_expr("x").unwrap()),
            ],
        };
        let sys2 = SharedVariableSystem {
            variables: vec![
                VarDecl { name: "x".into(), domain: vec![Value::Int(1), Value::Int(2)] },
                VarDecl { name: "y".into(), domain: vec![Value::Int(1), Value::Int(2)] },
            ],
            initial: [
                ("x".to_string(), Value::Int(1)),
                ("y".to_string(), Value::Int(2)),
            ]
            .into(),
            graphs: vec![],
        };
        let pre: Evaluation =
            [("x".to_string(), Value::Int(1)), ("y".to_string(), Value::Int(2))].into();
        let post = apply_action(&swap, &pre, &sys2, 1).unwrap();
        assert_eq!(post["x"], Value::Int(2));
        assert_eq!(post["y"], Value::Int(1));
    }

    #[test]
    fn eager_state_graph_counts() {
        let sg = state_graph(&incdec2()).unwrap();
        assert_eq!(sg.states.len(), 2 * 2 * 3);
        assert_eq!(sg.cells.count(0), 12);
        // per process: x++ with gamma ∈ {0,1} plus x-- with gamma ∈ {1,2},
        // each at 2 locations of the other process
        assert_eq!(sg.cells.count(1), 2 * (2 + 2) * 2);
        // one process, no transitions
        let mut sys = incdec("x");
        sys.graphs[0].transitions.clear();
        let sg = state_graph(&sys).unwrap();
        assert_eq!(sg.cells.count(0), 2 * 3);
        assert_eq!(sg.cells.count(1), 0);
    }

    #[test]
    fn figure_two_reproduction() {
        let m = lts_model(&incdec2()).unwrap();
        let t = &m.system;
        assert_eq!(t.hda.cells.count(0), 4);
        assert_eq!(t.hda.cells.count(1), 8);
        let states: BTreeSet<(Vec<String>, Vec<i64>)> = m
            .states
            .iter()
            .map(|(l, e)| {
                (l.clone(), e.values().map(|v| match v {
                    Value::Int(n) => *n,
                    _ => unreachable!(),
                }).collect())
            })
            .collect();
        let want: BTreeSet<(Vec<String>, Vec<i64>)> = [
            (vec!["0".to_string(), "0".to_string()], vec![0]),
            (vec!["1".to_string(), "0".to_string()], vec![1]),
            (vec!["0".to_string(), "1".to_string()], vec![1]),
            (vec!["1".to_string(), "1".to_string()], vec![2]),
        ]
        .into();
        assert_eq!(states, want);
        assert_eq!(m.states[0], (vec!["0".to_string(), "0".to_string()], [
            ("x".to_string(), Value::Int(0))
        ].into()));
        let want_rel: Relation = [
            (Label::act(1, "x++"), Label::act(2, "x++")),
            (Label::act(1, "x++"), Label::act(2, "x--")),
            (Label::act(1, "x--"), Label::act(2, "x++")),
            (Label::act(1, "x--"), Label::act(2, "x--")),
        ]
        .into();
        assert_eq!(t.relation, want_rel);
        assert!(lts::is_asymmetric(&t.relation).is_ok());
        assert!(lts::is_deterministic_lts(t).is_ok());
    }

    #[test]
    fn one_process_model() {
        let m = lts_model(&incdec("x")).unwrap();
        assert_eq!(m.system.hda.cells.f_vector(), vec![2, 2]);
        assert!(m.system.relation.is_empty());
        assert!(m.system.hda.finals.is_empty());
    }

    #[test]
    fn guarded_system_has_empty_relation() {
        let m = lts_model(&incdec2_guarded()).unwrap();
        assert_eq!(m.system.hda.cells.count(0), 3);
        assert_eq!(m.system.hda.cells.count(1), 4);
        assert!(m.system.relation.is_empty());
    }

    #[test]
    fn witness_paths_replay() {
        let sys = incdec2();
        let m = lts_model(&sys).unwrap();
        for s in 0..m.states.len() {
            let path = m.witness_path(s);
            assert_eq!(path.endpoint(&m.system.hda.cells).idx, s);
            // replay the path through the semantic functions
            let mut cur = m.states[0].clone();
            for &e in path.steps() {
                let (start, end) = edge_faces(&sys, &m.edges[e.idx]).unwrap();
                assert_eq!(start, cur);
                cur = end;
            }
            assert_eq!(cur, m.states[s]);
        }
    }

    #[test]
    fn face_formulas_match_stored_endpoints() {
        let sys = incdec2();
        let m = lts_model(&sys).unwrap();
        for (i, tuple) in m.edges.iter().enumerate() {
            let (start, end) = edge_faces(&sys, tuple).unwrap();
            let e = CellId::new(1, i);
            assert_eq!(m.state_index[&start], m.system.hda.cells.edge_src(e).idx);
            assert_eq!(m.state_index[&end], m.system.hda.cells.edge_dst(e).idx);
        }
    }

    #[test]
    fn compose_shifts_process_ids() {
        let sys = parallel_compose(&incdec("x"), &incdec("y")).unwrap();
        assert_eq!(sys.graphs.len(), 2);
        assert_eq!(sys.variables.len(), 2);
        let m = lts_model(&sys).unwrap();
        assert!(m.system.hda.alphabet.contains(&Label::act(2, "y++")));
        // conflicting domains are rejected
        let mut other = incdec("x");
        other.variables[0].domain.pop();
        other.initial.insert("x".into(), Value::Int(0));
        assert_eq!(
            parallel_compose(&incdec("x"), &other),
            Err(ProggError::DeclConflict("x".into()))
        );
    }

    #[test]
    fn interleaving_iso_disjoint_variables() {
        let f = interleaving_iso(&incdec("x"), &incdec("y")).unwrap();
        assert_eq!(f.cell_map[0].len(), 4);
        assert_eq!(f.cell_map[1].len(), 8);
    }

    #[test]
    fn interleaving_iso_rejects_shared_variable() {
        assert_eq!(
            interleaving_iso(&incdec("x"), &incdec("x")),
            Err(ProggError::SharedVariables(vec!["x".into()]))
        );
    }

    #[test]
    fn shared_variable_coincidence() {
        // the hypotheses of the disjointness theorem fail, yet for this
        // system the interleaving and the composition are isomorphic anyway
        let m1 = lts_model(&incdec("x")).unwrap();
        let comp = lts_model(&incdec2()).unwrap();
        let (inter, _) = lts::interleave(&m1.system, &m1.system);
        let label_map = shift_label_map(&m1.system, &m1.system, 1);
        let f = forced_iso(&inter, &comp.system, label_map).unwrap();
        assert!(f.is_bijective(&comp.system.hda));
    }

    #[test]
    fn guarded_system_is_nondeterministic_sum() {
        let one = SharedVariableSystem {
            graphs: vec![incdec_graph("x", "x == 0")],
            ..incdec("x")
        };
        assert!(nondeterministic_sum_iso(&one, &one).is_ok());
        // the unguarded system is not a sum: cell counts differ
        assert!(matches!(
            nondeterministic_sum_iso(&incdec("x"), &incdec("x")),
            Err(ProggError::NotIsomorphic(_))
        ));
    }

    #[test]
    fn validation_catches_scope_errors() {
        let mut sys = incdec("x");
        sys.graphs[0].transitions[0].guard = parse_expr("y == 0").unwrap();
        assert!(sys.validate().is_ok()); // y is an atom, not a variable
        sys.variables.push(VarDecl { name: "y".into(), domain: vec![Value::Int(0)] });
        sys.initial.insert("y".into(), Value::Int(0));
        assert!(matches!(sys.validate(), Err(ProggError::InvalidSystem(_))));
    }

    #[test]
    fn syntactic_determinism() {
        let sys = incdec("x");
        assert!(sys.is_syntactically_deterministic());
        let mut nd = incdec("x");
        let mut extra = nd.graphs[0].transitions[0].clone();
        extra.to = "0".into();
        nd.graphs[0].transitions.push(extra);
        assert!(!nd.is_syntactically_deterministic());
    }
}
