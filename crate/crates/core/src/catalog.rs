//! The rank-2 and rank-3 classification tables as data: parameterized
//! diagram templates with side conditions, instantiation, the verification
//! run, and the rank-3 re-derivation by exhaustive search over `mu_N`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicharacter::Bicharacter;
use crate::diagram::DynkinDiagram;
use crate::equivalence::{
    build_graph_from, describe_group, generate_wb, infinite_order_witness, wb_generators, wb_group_direct, weyl_equivalent, Equivalence, GroupDescriptor,
    WbOutcome,
};
use crate::error::{Error, Result};
use crate::exponents::{GroupContext, GroupElement, Order};
use crate::groupoid::{explore, is_arithmetic, Arithmetic, Caps, Verdict};
use crate::lattice;
use crate::subsystems;

/// The tables shipped with the crate, one template per line.
pub const BUILTIN: &str = include_str!("../data/catalog.jsonl");

/// Largest torsion order tried when looking for specializations.
const SPECIALIZATION_SEARCH: u64 = 64;

/// Rank-2 rows a rank-2 subsystem of a connected rank-3 system may land in.
pub const RANK2_SUBSYSTEM_ROWS: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 11];

/// A monomial `±x^a*y^b...` in the parameters; a leading `-` multiplies by -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    negated: bool,
    factors: Vec<(String, i64)>,
}

impl Word {
    pub fn parse(s: &str) -> Result<Word> {
        let t = s.trim();
        let (negated, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("empty word `{s}`")));
        }
        let mut factors: Vec<(String, i64)> = Vec::new();
        for f in body.split('*') {
            let f = f.trim();
            if f == "1" {
                continue;
            }
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?,
                ),
                None => (f, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(Error::Parse(format!("bad factor `{f}` in `{s}`")));
            }
            match factors.iter_mut().find(|(n, _)| n == name) {
                Some(x) => x.1 += exp,
                None => factors.push((name.to_string(), exp)),
            }
        }
        factors.retain(|(_, e)| *e != 0);
        Ok(Word { negated, factors })
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn factors(&self) -> &[(String, i64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        !self.negated && self.factors.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.factors.iter().find(|(n, _)| n == name).map_or(0, |f| f.1)
    }

    pub fn eval(&self, a: &Assignment) -> Result<GroupElement> {
        let mut x = if self.negated {
            a.ctx
                .minus_one()
                .ok_or_else(|| Error::Precondition(format!("`{self}` needs -1, absent for N = {}", a.ctx.torsion_order())))?
        } else {
            a.ctx.identity()
        };
        for (n, e) in &self.factors {
            let v = a
                .get(n)
                .ok_or_else(|| Error::Precondition(format!("parameter `{n}` unassigned")))?;
            x = x.mul(&v.pow(*e));
        }
        Ok(x)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (n, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A side condition of a table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Ne(Word, Word),
    Eq(Word, Word),
    /// Exact multiplicative order is one of the listed values.
    InRoots(Word, Vec<u64>),
    NotInRoots(Word, u64),
}

fn parse_root_set(s: &str) -> Result<u64> {
    s.trim()
        .strip_prefix('R')
        .and_then(|m| m.parse::<u64>().ok())
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Parse(format!("expected `R<m>`, got `{s}`")))
}

impl Constraint {
    pub fn parse(s: &str) -> Result<Constraint> {
        if let Some((a, b)) = s.split_once("!=") {
            Ok(Constraint::Ne(Word::parse(a)?, Word::parse(b)?))
        } else if let Some((a, b)) = s.split_once(" !in ") {
            Ok(Constraint::NotInRoots(Word::parse(a)?, parse_root_set(b)?))
        } else if let Some((a, b)) = s.split_once(" in ") {
            let orders = b.split('|').map(parse_root_set).collect::<Result<Vec<_>>>()?;
            Ok(Constraint::InRoots(Word::parse(a)?, orders))
        } else if let Some((a, b)) = s.split_once('=') {
            Ok(Constraint::Eq(Word::parse(a)?, Word::parse(b)?))
        } else {
            Err(Error::Parse(format!("unrecognized constraint `{s}`")))
        }
    }

    pub fn holds(&self, a: &Assignment) -> Result<bool> {
        Ok(match self {
            Constraint::Ne(x, y) => x.eval(a)? != y.eval(a)?,
            Constraint::Eq(x, y) => x.eval(a)? == y.eval(a)?,
            Constraint::InRoots(x, orders) => matches!(x.eval(a)?.order(), Order::Finite(m) if orders.contains(&m)),
            Constraint::NotInRoots(x, m) => !x.eval(a)?.in_primitive_roots(*m),
        })
    }

    fn words(&self) -> Vec<&Word> {
        match self {
            Constraint::Ne(x, y) | Constraint::Eq(x, y) => vec![x, y],
            Constraint::InRoots(x, _) | Constraint::NotInRoots(x, _) => vec![x],
        }
    }
}

fn subscript(m: u64) -> String {
    m.to_string()
        .chars()
        .map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap_or(0)).unwrap_or(c))
        .collect()
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Ne(x, y) if y.is_one() => write!(f, "{x} ∈ k^*∖{{1}}"),
            Constraint::Ne(x, y) => write!(f, "{x} ≠ {y}"),
            Constraint::Eq(x, y) => write!(f, "{x} = {y}"),
            Constraint::InRoots(x, orders) => {
                let sets: Vec<String> = orders.iter().map(|m| format!("R{}", subscript(*m))).collect();
                write!(f, "{x} ∈ {}", sets.join(" ∪ "))
            }
            Constraint::NotInRoots(x, m) => write!(f, "{x} ∉ R{}", subscript(*m)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Param {
    /// Any value; generically a free generator.
    Free { name: String },
    /// A primitive root of unity of one of the given orders.
    Root { name: String, orders: Vec<u64> },
    /// Determined by the other parameters.
    Derived { name: String, value: String },
}

impl Param {
    pub fn name(&self) -> &str {
        match self {
            Param::Free { name } | Param::Root { name, .. } | Param::Derived { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Chain,
    Triangle,
}

/// One line of the catalog file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateRecord {
    pub table: u8,
    pub row: u32,
    pub template: u32,
    pub shape: Shape,
    pub params: Vec<Param>,
    #[serde(default)]
    pub constraints: Vec<String>,
    pub vertices: Vec<String>,
    /// `(i, j, label)`, 0-based; absent pairs carry no edge.
    #[serde(default)]
    pub edges: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wb: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Template {
    pub number: u32,
    pub shape: Shape,
    pub vertices: Vec<Word>,
    pub edges: Vec<(usize, usize, Word)>,
}

impl Template {
    pub fn render(&self) -> String {
        let v: Vec<String> = self.vertices.iter().enumerate().map(|(k, w)| format!("[{}: {w}]", k + 1)).collect();
        let e: Vec<String> = self.edges.iter().map(|(i, j, w)| format!("({}-{}: {w})", i + 1, j + 1)).collect();
        format!("{} {}", v.join(" "), e.join(" ")).trim_end().to_string()
    }
}

/// A table row: shared parameters and side conditions, and the diagrams of
/// one Weyl equivalence class.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub table: u8,
    pub row: u32,
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    pub templates: Vec<Template>,
    pub expected_wb: Option<String>,
}

/// Parameter values in a common context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    ctx: GroupContext,
    values: BTreeMap<String, GroupElement>,
}

impl Assignment {
    pub fn new(ctx: GroupContext) -> Self {
        Assignment {
            ctx,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: GroupElement) -> Result<Self> {
        if *value.context() != self.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: *value.context(),
            });
        }
        self.values.insert(name.to_string(), value);
        Ok(self)
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn get(&self, name: &str) -> Option<&GroupElement> {
        self.values.get(name)
    }

    pub fn values(&self) -> &BTreeMap<String, GroupElement> {
        &self.values
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={}", v.render())).collect();
        write!(
            f,
            "{} (free rank {}, N = {})",
            parts.join(", "),
            self.ctx.free_rank(),
            self.ctx.torsion_order()
        )
    }
}

/// An assignment with a short tag saying how it was chosen.
#[derive(Debug, Clone)]
pub struct Instance {
    pub tag: String,
    pub assignment: Assignment,
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

impl CatalogEntry {
    pub fn label(&self) -> String {
        format!("Table {} row {}", self.table, self.row)
    }

    pub fn rank(&self) -> usize {
        self.templates[0].vertices.len()
    }

    fn free_params(&self) -> Vec<&str> {
        self.params
            .iter()
            .filter_map(|p| match p {
                Param::Free { name } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    fn root_params(&self) -> Vec<(&str, &[u64])> {
        self.params
            .iter()
            .filter_map(|p| match p {
                Param::Root { name, orders } => Some((name.as_str(), orders.as_slice())),
                _ => None,
            })
            .collect()
    }

    /// `"z ∈ R₃"` for each root parameter under `a`.
    pub fn root_orders(&self, a: &Assignment) -> String {
        let parts: Vec<String> = self
            .root_params()
            .iter()
            .filter_map(|(name, _)| match a.get(name)?.order() {
                Order::Finite(m) => Some(format!("{name} ∈ R{}", subscript(m))),
                Order::Infinite => None,
            })
            .collect();
        parts.join(", ")
    }

    /// Fills in derived parameters.
    pub fn complete(&self, a: &Assignment) -> Result<Assignment> {
        let mut out = a.clone();
        for p in &self.params {
            if let Param::Derived { name, value } = p {
                let v = Word::parse(value)?.eval(&out)?;
                if let Some(given) = a.get(name) {
                    if *given != v {
                        return Err(Error::Constraint(format!("{name} = {value} violated by {a}")));
                    }
                }
                out.values.insert(name.clone(), v);
            }
        }
        Ok(out)
    }

    /// All side conditions, including the implicit `z ∈ R_m` of root
    /// parameters; the error names the first violated clause.
    pub fn check(&self, a: &Assignment) -> Result<()> {
        for p in &self.params {
            if a.get(p.name()).is_none() {
                return Err(Error::Precondition(format!("parameter `{}` unassigned", p.name())));
            }
            if let Param::Root { name, orders } = p {
                let c = Constraint::InRoots(Word::parse(name)?, orders.clone());
                if !c.holds(a)? {
                    return Err(Error::Constraint(format!("{c} violated by {a}")));
                }
            }
        }
        for c in &self.constraints {
            if !c.holds(a)? {
                return Err(Error::Constraint(format!("{c} violated by {a}")));
            }
        }
        Ok(())
    }

    /// Structure constants `q_ii` = vertex label, `q_ij` = edge label for
    /// `i < j`, `q_ji` = 1.
    pub fn instantiate(&self, template: usize, a: &Assignment) -> Result<Bicharacter> {
        let t = self
            .templates
            .get(template)
            .ok_or_else(|| Error::Precondition(format!("{} has no template {}", self.label(), template + 1)))?;
        let a = self.complete(a)?;
        self.check(&a)?;
        let ctx = a.ctx;
        let n = t.vertices.len();
        let mut q = vec![vec![ctx.identity(); n]; n];
        for (k, w) in t.vertices.iter().enumerate() {
            q[k][k] = w.eval(&a)?;
        }
        for (i, j, w) in &t.edges {
            let label = w.eval(&a)?;
            if label.is_one() {
                return Err(Error::Constraint(format!(
                    "edge {}-{} label {w} is trivial under {a}",
                    i + 1,
                    j + 1
                )));
            }
            q[*i.min(j)][*i.max(j)] = label;
        }
        Bicharacter::new(ctx, q)
    }

    pub fn instantiate_diagram(&self, template: usize, a: &Assignment) -> Result<DynkinDiagram> {
        Ok(self.instantiate(template, a)?.standard_diagram())
    }

    /// Free parameters as free generators, one assignment per choice of
    /// root orders.
    pub fn generic_assignments(&self) -> Vec<Assignment> {
        let free = self.free_params();
        let roots = self.root_params();
        let order_choices: Vec<Vec<u64>> = roots.iter().map(|(_, o)| o.to_vec()).collect();
        let mut out = Vec::new();
        for orders in product(&order_choices) {
            let n = orders.iter().fold(2u64, |l, m| l.lcm(m));
            let Ok(ctx) = GroupContext::new(free.len(), n) else { continue };
            let mut a = Assignment::new(ctx);
            for (k, name) in free.iter().enumerate() {
                a.values.insert(name.to_string(), ctx.free_generator(k).expect("k < free rank"));
            }
            for ((name, _), m) in roots.iter().zip(&orders) {
                a.values.insert(name.to_string(), ctx.primitive_root(*m).expect("m divides N"));
            }
            if let Ok(a) = self.complete(&a) {
                if self.check(&a).is_ok() {
                    out.push(a);
                }
            }
        }
        out
    }

    /// Up to `count` torsion specializations of the free parameters: for
    /// increasing `M`, the lexicographically first admissible values in
    /// `mu_M` of combined order exactly `M`.
    pub fn specializations(&self, count: usize) -> Vec<Assignment> {
        let free = self.free_params();
        if free.is_empty() {
            return Vec::new();
        }
        let roots = self.root_params();
        let base = roots.iter().fold(2u64, |l, (_, o)| l.lcm(&o[0]));
        let mut out = Vec::new();
        for m in 2..=SPECIALIZATION_SEARCH {
            if out.len() == count {
                break;
            }
            let n = base.lcm(&m);
            let ctx = GroupContext::torsion(n).expect("n >= 1");
            let mut exps = vec![0u64; free.len()];
            'search: loop {
                let combined = exps.iter().fold(1u64, |l, &e| l.lcm(&(m / e.gcd(&m))));
                if combined == m {
                    let mut a = Assignment::new(ctx);
                    for (name, &e) in free.iter().zip(&exps) {
                        a.values.insert(name.to_string(), ctx.torsion_element((e * (n / m)) as i64));
                    }
                    for (name, o) in &roots {
                        a.values.insert(name.to_string(), ctx.primitive_root(o[0]).expect("order divides N"));
                    }
                    if let Ok(a) = self.complete(&a) {
                        if self.check(&a).is_ok() {
                            out.push(a);
                            break 'search;
                        }
                    }
                }
                let mut k = exps.len();
                loop {
                    if k == 0 {
                        break 'search;
                    }
                    k -= 1;
                    exps[k] += 1;
                    if exps[k] < m {
                        break;
                    }
                    exps[k] = 0;
                }
            }
        }
        out
    }

    /// Generic assignments followed by three specializations.
    pub fn instances(&self) -> Vec<Instance> {
        let mut out: Vec<Instance> = self
            .generic_assignments()
            .into_iter()
            .map(|a| Instance {
                tag: "generic".into(),
                assignment: a,
            })
            .collect();
        out.extend(self.specializations(3).into_iter().map(|a| Instance {
            tag: format!("special N={}", a.ctx.torsion_order()),
            assignment: a,
        }));
        out
    }

    /// Every admissible assignment with values in `mu_n`.
    pub fn assignments_over(&self, n: u64) -> Vec<Assignment> {
        let Ok(ctx) = GroupContext::torsion(n) else { return Vec::new() };
        let all: Vec<GroupElement> = ctx.roots_of_unity().collect();
        let mut names = Vec::new();
        let mut choices = Vec::new();
        for p in &self.params {
            match p {
                Param::Free { name } => {
                    names.push(name.clone());
                    choices.push(all.clone());
                }
                Param::Root { name, orders } => {
                    names.push(name.clone());
                    choices.push(
                        all.iter()
                            .filter(|x| matches!(x.order(), Order::Finite(m) if orders.contains(&m)))
                            .cloned()
                            .collect(),
                    );
                }
                Param::Derived { .. } => {}
            }
        }
        product(&choices)
            .into_iter()
            .filter_map(|vals| {
                let mut a = Assignment::new(ctx);
                for (name, v) in names.iter().zip(vals) {
                    a.values.insert(name.clone(), v);
                }
                let a = self.complete(&a).ok()?;
                self.check(&a).ok()?;
                Some(a)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN).expect("bundled catalog is well formed")
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let mut records: Vec<(usize, TemplateRecord)> = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r: TemplateRecord = serde_json::from_str(line).map_err(|e| {
                Error::Parse(format!("catalog line {}, column {}: {e}", k + 1, e.column()))
            })?;
            records.push((k + 1, r));
        }
        let mut entries: Vec<CatalogEntry> = Vec::new();
        for (line, r) in records {
            let at = |msg: String| Error::Parse(format!("catalog line {line}: {msg}"));
            let want = match r.table {
                1 => 2,
                2 => 3,
                t => return Err(at(format!("unknown table {t}"))),
            };
            if r.vertices.len() != want {
                return Err(at(format!("table {} templates have {want} vertices", r.table)));
            }
            let declared: HashSet<&str> = r.params.iter().map(Param::name).collect();
            if declared.len() != r.params.len() {
                return Err(at("duplicate parameter".into()));
            }
            let known = |w: &Word| -> Result<()> {
                match w.factors.iter().find(|(n, _)| !declared.contains(n.as_str())) {
                    Some((n, _)) => Err(at(format!("undeclared parameter `{n}`"))),
                    None => Ok(()),
                }
            };
            for p in &r.params {
                match p {
                    Param::Derived { value, .. } => known(&Word::parse(value).map_err(|e| at(e.to_string()))?)?,
                    Param::Root { orders, .. } if orders.is_empty() || orders.contains(&0) => {
                        return Err(at("root parameter needs positive orders".into()))
                    }
                    _ => {}
                }
            }
            let vertices = r
                .vertices
                .iter()
                .map(|s| Word::parse(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| at(e.to_string()))?;
            let mut edges = Vec::new();
            let mut seen = HashSet::new();
            for (i, j, s) in &r.edges {
                if *i >= want || *j >= want || i == j || !seen.insert((*i.min(j), *i.max(j))) {
                    return Err(at(format!("bad edge ({i}, {j})")));
                }
                edges.push((*i, *j, Word::parse(s).map_err(|e| at(e.to_string()))?));
            }
            let constraints = r
                .constraints
                .iter()
                .map(|s| Constraint::parse(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| at(e.to_string()))?;
            for w in vertices.iter().chain(edges.iter().map(|e| &e.2)) {
                known(w)?;
            }
            for c in &constraints {
                for w in c.words() {
                    known(w)?;
                }
            }
            let shape_ok = match (r.shape, want) {
                (Shape::Chain, 2) => edges.len() <= 1,
                (Shape::Chain, _) => edges.len() == 2,
                (Shape::Triangle, 3) => edges.len() == 3,
                _ => false,
            };
            if !shape_ok {
                return Err(at(format!("edges do not match shape {:?}", r.shape)));
            }
            if r.table == 2 && r.wb.is_none() {
                return Err(at("Table 2 templates need a W^B symbol".into()));
            }
            let template = Template {
                number: r.template,
                shape: r.shape,
                vertices,
                edges,
            };
            match entries.last_mut() {
                Some(e) if e.table == r.table && e.row == r.row => {
                    if e.params != r.params || e.constraints != constraints || e.expected_wb != r.wb {
                        return Err(at("templates of one row must share parameters, constraints and W^B".into()));
                    }
                    if r.template as usize != e.templates.len() + 1 {
                        return Err(at(format!("expected template {}", e.templates.len() + 1)));
                    }
                    e.templates.push(template);
                }
                _ => {
                    if entries.iter().any(|e| e.table == r.table && e.row == r.row) {
                        return Err(at(format!("row {} of table {} is split", r.row, r.table)));
                    }
                    if r.template != 1 {
                        return Err(at("rows start at template 1".into()));
                    }
                    entries.push(CatalogEntry {
                        table: r.table,
                        row: r.row,
                        params: r.params,
                        constraints,
                        templates: vec![template],
                        expected_wb: r.wb,
                    });
                }
            }
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn table(&self, table: u8) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.table == table)
    }

    pub fn entry(&self, table: u8, row: u32) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.table == table && e.row == row)
    }

    pub fn template_count(&self) -> usize {
        self.entries.iter().map(|e| e.templates.len()).sum()
    }
}

/// Necessary condition on a finite rank-2 system: one of the five factors
/// vanishes, or `q11 q^2 q22 = -1` with a vertex of order 3.
pub fn rank2_condition(chi: &Bicharacter) -> bool {
    let q11 = chi.structure_constant(0, 0);
    let q22 = chi.structure_constant(1, 1);
    let e = chi.structure_constant(0, 1).mul(chi.structure_constant(1, 0));
    let minus = chi.context().minus_one();
    let is_minus = |x: &GroupElement| minus.as_ref() == Some(x);
    e.is_one()
        || is_minus(q11)
        || is_minus(q22)
        || q11.mul(&e).is_one()
        || e.mul(q22).is_one()
        || (is_minus(&q11.mul(&e.pow(2)).mul(q22)) && (q11.in_primitive_roots(3) || q22.in_primitive_roots(3)))
}

/// For every vertex with two nontrivial edges: the third edge is trivial or
/// the product of the three edge labels is 1.
pub fn triangle_condition(d: &DynkinDiagram) -> bool {
    let n = d.rank();
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                if i == j || i == k || !d.has_edge(i, j) || !d.has_edge(i, k) {
                    continue;
                }
                if d.has_edge(j, k) && !d.edge(i, j).mul(d.edge(i, k)).mul(d.edge(j, k)).is_one() {
                    return false;
                }
            }
        }
    }
    true
}

/// Necessary conditions on a connected finite rank-3 diagram beyond the
/// triangle condition: a cycle has a vertex -1, and a vertex `i` joined to
/// `j` and `k` with no edge `j-k` satisfies
/// `(q_ii + 1)(q_ii e_ij - 1)(q_ii e_ik - 1)(q_ii e_ij e_ik + 1) = 0`.
pub fn rank3_condition_failure(d: &DynkinDiagram) -> Option<String> {
    let minus = d.context().minus_one();
    let is_minus = |x: &GroupElement| minus.as_ref() == Some(x);
    let (a, b, c) = (0, 1, 2);
    if d.has_edge(a, b) && d.has_edge(b, c) && d.has_edge(a, c) && !d.vertices().iter().any(is_minus) {
        return Some("cycle without a vertex -1".into());
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if !d.has_edge(i, j) || !d.has_edge(i, k) || d.has_edge(j, k) {
            continue;
        }
        let q = d.vertex(i);
        let (x, y) = (d.edge(i, j), d.edge(i, k));
        let ok = is_minus(q) || q.mul(x).is_one() || q.mul(y).is_one() || is_minus(&q.mul(x).mul(y));
        if !ok {
            return Some(format!("vertex {} violates the two-edge condition", i + 1));
        }
    }
    None
}

/// Table 1 `(row, template, assignment)` triples reproducing the rank-2
/// diagram `d` over its own context.
pub fn match_rank2(catalog: &Catalog, d: &DynkinDiagram, rows: Option<&[u32]>) -> Vec<(u32, u32, Assignment)> {
    let target = d.canonical();
    let ctx = *d.context();
    let labels_for = |perm: &[usize]| -> Vec<GroupElement> {
        vec![d.vertex(perm[0]).clone(), d.edge(perm[0], perm[1]).clone(), d.vertex(perm[1]).clone()]
    };
    let orderings = [labels_for(&[0, 1]), labels_for(&[1, 0])];
    let mut out = Vec::new();
    for entry in catalog.table(1) {
        if rows.is_some_and(|r| !r.contains(&entry.row)) || d.rank() != 2 {
            continue;
        }
        let roots = entry.root_params();
        let root_choices: Vec<Vec<GroupElement>> = roots
            .iter()
            .map(|(_, orders)| {
                if ctx.free_rank() > 0 && ctx.torsion_order() == 1 {
                    return Vec::new();
                }
                orders.iter().filter_map(|m| {
                    (ctx.torsion_order() % m == 0).then(|| {
                        ctx.roots_of_unity().filter(|x| x.in_primitive_roots(*m)).collect::<Vec<_>>()
                    })
                }).flatten().collect()
            })
            .collect();
        for (ti, t) in entry.templates.iter().enumerate() {
            let edge = t.edges.first().map_or(Word { negated: false, factors: Vec::new() }, |e| e.2.clone());
            let slots = [t.vertices[0].clone(), edge, t.vertices[1].clone()];
            for labels in &orderings {
                for rv in product(&root_choices) {
                    let mut a = Assignment::new(ctx);
                    for ((name, _), v) in roots.iter().zip(rv) {
                        a.values.insert(name.to_string(), v);
                    }
                    if !solve_free(entry, &slots, labels, &mut a) {
                        continue;
                    }
                    let Ok(chi) = entry.instantiate(ti, &a) else { continue };
                    if chi.standard_diagram().canonical() == target {
                        out.push((entry.row, t.number, a));
                    }
                }
            }
        }
    }
    out
}

/// Solves the free parameters one at a time from slots where a single
/// unknown occurs with exponent ±1.
fn solve_free(entry: &CatalogEntry, slots: &[Word], labels: &[GroupElement], a: &mut Assignment) -> bool {
    let unknown: Vec<&str> = entry.free_params();
    for name in unknown {
        let mut solved = false;
        for (w, label) in slots.iter().zip(labels) {
            let e = w.exponent(name);
            if e.abs() != 1 || w.factors.iter().any(|(n, _)| n != name && a.get(n).is_none()) {
                continue;
            }
            let rest = Word {
                negated: w.negated,
                factors: w.factors.iter().filter(|(n, _)| n != name).cloned().collect(),
            };
            let Ok(known) = rest.eval(a) else { return false };
            let v = label.div(&known).pow(e);
            a.values.insert(name.to_string(), v);
            solved = true;
            break;
        }
        if !solved {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub table: u8,
    pub row: u32,
    pub template: Option<u32>,
    pub assignment: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub table: u8,
    pub row: u32,
    pub templates: usize,
    pub instances: Vec<String>,
    /// Diagrams in the Weyl class of the first generic instance.
    pub class_size: Option<usize>,
    pub expected_wb: Option<String>,
    pub wb: Option<GroupDescriptor>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<RowReport>,
    pub templates: usize,
    pub instantiations: usize,
    pub cross_pairs: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} rows, {} templates ({} instantiations) + {}-pair equivalence matrix verified: {} failures",
            self.rows.len(),
            self.templates,
            self.instantiations,
            self.cross_pairs,
            self.failures.len()
        )
    }

    fn merge(&mut self, other: VerifyReport) {
        self.rows.extend(other.rows);
        self.templates += other.templates;
        self.instantiations += other.instantiations;
        self.cross_pairs += other.cross_pairs;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}

/// Both tables.
pub fn verify_tables(catalog: &Catalog, caps: &Caps) -> VerifyReport {
    let mut r = verify_table(catalog, 1, caps);
    r.merge(verify_table(catalog, 2, caps));
    r
}

/// Every template of every row of one table over its instances: arithmetic,
/// in the Weyl class of the row's first template, the rank-2 condition
/// (Table 1), `W^B` and the rank-2 subsystems (Table 2); then the cross-row
/// non-equivalence matrix on the generic instances.
pub fn verify_table(catalog: &Catalog, table: u8, caps: &Caps) -> VerifyReport {
    let entries: Vec<&CatalogEntry> = catalog.table(table).collect();
    let results: Vec<(RowReport, Vec<Failure>, usize)> =
        entries.par_iter().map(|e| verify_row(catalog, e, caps)).collect();
    let mut report = VerifyReport {
        rows: Vec::new(),
        templates: 0,
        instantiations: 0,
        cross_pairs: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for (row, failures, n) in results {
        report.templates += row.templates;
        report.instantiations += n;
        report.rows.push(row);
        report.failures.extend(failures);
    }

    let primaries: Vec<(&CatalogEntry, Option<Bicharacter>)> = entries
        .iter()
        .map(|e| {
            let chi = e.generic_assignments().first().and_then(|a| e.instantiate(0, a).ok());
            (*e, chi)
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..primaries.len())
        .flat_map(|a| (a + 1..primaries.len()).map(move |b| (a, b)))
        .collect();
    report.cross_pairs = pairs.len();
    let cross: Vec<Option<Failure>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (ea, ca) = &primaries[a];
            let (eb, cb) = &primaries[b];
            let fail = |message: String| Failure {
                table,
                row: ea.row,
                template: None,
                assignment: "generic".into(),
                message,
            };
            let (Some(ca), Some(cb)) = (ca, cb) else {
                return Some(fail(format!("row {} or {} has no generic instance", ea.row, eb.row)));
            };
            match weyl_equivalent(ca, cb, caps) {
                Ok(Equivalence::NotEquivalent) => None,
                Ok(Equivalence::Equivalent) => Some(fail(format!("Weyl-equivalent to row {}", eb.row))),
                Ok(Equivalence::Indeterminate) => Some(fail(format!("equivalence with row {} indeterminate", eb.row))),
                Err(e) => Some(fail(format!("comparison with row {}: {e}", eb.row))),
            }
        })
        .collect();
    report.failures.extend(cross.into_iter().flatten());

    // Rows whose root parameter has several admissible orders.
    for e in &entries {
        let generic = e.generic_assignments();
        if generic.len() < 2 {
            continue;
        }
        let chis: Vec<Bicharacter> = generic.iter().filter_map(|a| e.instantiate(0, a).ok()).collect();
        for x in 0..chis.len() {
            for y in x + 1..chis.len() {
                let verdict = weyl_equivalent(&chis[x], &chis[y], caps);
                report.notes.push(format!(
                    "{}: {} vs {}: {}",
                    e.label(),
                    e.root_orders(&generic[x]),
                    e.root_orders(&generic[y]),
                    match verdict {
                        Ok(Equivalence::Equivalent) => "one Weyl class".to_string(),
                        Ok(Equivalence::NotEquivalent) => "distinct Weyl classes".to_string(),
                        Ok(Equivalence::Indeterminate) => "indeterminate".to_string(),
                        Err(err) => err.to_string(),
                    }
                ));
            }
        }
    }
    report.rows.sort_by_key(|r| (r.table, r.row));
    report.failures.sort_by_key(|f| (f.table, f.row, f.template));
    report
}

fn verify_row(catalog: &Catalog, e: &CatalogEntry, caps: &Caps) -> (RowReport, Vec<Failure>, usize) {
    let mut failures = Vec::new();
    let instances = e.instances();
    let mut class_size = None;
    let mut count = 0;
    for (idx, inst) in instances.iter().enumerate() {
        let a = &inst.assignment;
        let mut fail = |template: Option<u32>, message: String| {
            failures.push(Failure {
                table: e.table,
                row: e.row,
                template,
                assignment: format!("{} {a}", inst.tag),
                message,
            })
        };
        let mut diagrams = Vec::new();
        for (k, t) in e.templates.iter().enumerate() {
            count += 1;
            let chi = match e.instantiate(k, a) {
                Ok(c) => c,
                Err(err) => {
                    fail(Some(t.number), err.to_string());
                    continue;
                }
            };
            match is_arithmetic(&chi, caps) {
                Arithmetic::Yes(_) => {}
                Arithmetic::No(why) => fail(Some(t.number), format!("not arithmetic: {why}")),
                Arithmetic::Indeterminate(cap) => fail(Some(t.number), format!("indeterminate at cap {cap}")),
            }
            if e.table == 1 && !rank2_condition(&chi) {
                fail(Some(t.number), "violates the rank-2 condition".into());
            }
            if e.table == 2 {
                for msg in rank2_subsystem_failures(catalog, &chi, caps) {
                    fail(Some(t.number), msg);
                }
            }
            diagrams.push((t.number, chi.standard_diagram()));
        }
        let Some((_, first)) = diagrams.first() else { continue };
        let g = build_graph_from(first, caps);
        if !g.is_complete() {
            fail(Some(1), format!("diagram graph incomplete: {:?}", g.verdict));
            continue;
        }
        for (number, d) in &diagrams[1..] {
            if !g.contains(d) {
                fail(Some(*number), "not Weyl-equivalent to template 1".into());
            }
        }
        let listed: HashSet<DynkinDiagram> = diagrams.iter().map(|(_, d)| d.canonical()).collect();
        if let Some(extra) = g.nodes.iter().find(|d| !listed.contains(*d)) {
            fail(None, format!("class has {} diagrams, row lists {}; e.g. {}", g.nodes.len(), listed.len(), extra.render()));
        }
        if idx == 0 {
            class_size = Some(g.nodes.len());
        }
    }

    let mut wb = None;
    if let (Some(expected), Some(a)) = (&e.expected_wb, e.generic_assignments().first()) {
        let mut fail = |message: String| {
            failures.push(Failure {
                table: e.table,
                row: e.row,
                template: Some(1),
                assignment: format!("generic {a}"),
                message,
            })
        };
        match e.instantiate(0, a) {
            Ok(chi) => match generate_wb(&chi, caps) {
                WbOutcome::Finite(g) => {
                    let desc = describe_group(&g);
                    if !desc.matches_symbol(expected) {
                        fail(format!("W^B is {:?} (order {}), expected {expected}", desc.matches, desc.order));
                    }
                    let explored = explore(&chi, caps);
                    match wb_group_direct(&chi, &explored) {
                        Ok(direct) if direct.order() == g.order() => {}
                        Ok(direct) => fail(format!(
                            "W^B order {} from generators, {} from objects",
                            g.order(),
                            direct.order()
                        )),
                        Err(err) => fail(format!("W^B from objects: {err}")),
                    }
                    wb = Some(desc);
                }
                WbOutcome::NotFull => fail("W^B: diagram graph not full".into()),
                WbOutcome::Exceeded(cap) => fail(format!("W^B: cap {cap} exceeded")),
            },
            Err(err) => fail(err.to_string()),
        }
    }

    let row = RowReport {
        table: e.table,
        row: e.row,
        templates: e.templates.len(),
        instances: instances.iter().map(|i| format!("{} {}", i.tag, i.assignment)).collect(),
        class_size,
        expected_wb: e.expected_wb.clone(),
        wb,
    };
    (row, failures, count)
}

/// Restricts to `span{e_i, e_j}` for each pair and checks the result is an
/// arithmetic rank-2 system appearing in the allowed rows of Table 1.
pub fn rank2_subsystem_failures(catalog: &Catalog, chi: &Bicharacter, caps: &Caps) -> Vec<String> {
    let mut out = Vec::new();
    let parent = explore(chi, caps);
    if parent.verdict != Verdict::Finite {
        return vec!["parent not finite; rank-2 subsystems skipped".into()];
    }
    let n = chi.rank();
    for i in 0..n {
        for j in i + 1..n {
            let f = vec![lattice::unit_vector(n, i), lattice::unit_vector(n, j)];
            let sub = match subsystems::restrict(chi, &parent, &f, caps) {
                Ok(s) => s,
                Err(err) => {
                    out.push(format!("subsystem ({}, {}): {err}", i + 1, j + 1));
                    continue;
                }
            };
            let rchi = sub.restricted_chi();
            if !sub.closure_ok || !is_arithmetic(rchi, caps).is_yes() {
                out.push(format!("subsystem ({}, {}) is not arithmetic", i + 1, j + 1));
                continue;
            }
            if match_rank2(catalog, &rchi.standard_diagram(), Some(&RANK2_SUBSYSTEM_ROWS)).is_empty() {
                out.push(format!(
                    "subsystem ({}, {}) diagram {} not in Table 1 rows 1-7, 11",
                    i + 1,
                    j + 1,
                    rchi.standard_diagram().render()
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub torsion: u64,
    /// Connected rank-3 diagrams over `mu_N` up to relabeling.
    pub scanned: usize,
    /// Weyl classes of arithmetic diagrams, each sorted, sorted by first
    /// element.
    pub classes: Vec<Vec<DynkinDiagram>>,
    /// Classes whose exploration hit a cap but where some diagram violates a
    /// necessary condition for finiteness; with the reason.
    pub excluded: Vec<(Vec<DynkinDiagram>, String)>,
    /// Classes that hit a cap with no certificate either way.
    pub unresolved: Vec<Vec<DynkinDiagram>>,
}

impl ClassifyReport {
    pub fn diagrams(&self) -> Vec<DynkinDiagram> {
        let mut v: Vec<DynkinDiagram> = self.classes.iter().flatten().cloned().collect();
        v.sort();
        v
    }
}

/// All connected rank-3 diagrams with labels in `mu_N`, canonical and
/// sorted. Vertex labels 1 next to an edge make an m-value undefined, and
/// every vertex of a connected diagram has an edge, so they are skipped.
pub fn connected_rank3_diagrams(n: u64) -> Result<Vec<DynkinDiagram>> {
    let ctx = GroupContext::torsion(n)?;
    let all: Vec<GroupElement> = ctx.roots_of_unity().collect();
    let verts: Vec<GroupElement> = all.iter().filter(|x| !x.is_one()).cloned().collect();
    let edges: Vec<GroupElement> = verts.clone();
    let mut seen = BTreeSet::new();
    for v in product(&[verts.clone(), verts.clone(), verts]) {
        for e in product(&[edges.clone(), edges.clone()]) {
            let chain = DynkinDiagram::from_edge_list(ctx, v.clone(), &[(0, 1, e[0].clone()), (1, 2, e[1].clone())])?;
            seen.insert(chain.canonical());
            for e3 in &edges {
                let tri = DynkinDiagram::from_edge_list(
                    ctx,
                    v.clone(),
                    &[(0, 1, e[0].clone()), (1, 2, e[1].clone()), (0, 2, e3.clone())],
                )?;
                seen.insert(tri.canonical());
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Exhaustive rank-3 search over `mu_N`: diagrams are grouped into Weyl
/// classes through the diagram graph, and one representative per full
/// class is explored.
pub fn classify_rank3(n: u64, caps: &Caps) -> Result<ClassifyReport> {
    let all = connected_rank3_diagrams(n)?;
    let mut visited: HashSet<DynkinDiagram> = HashSet::new();
    let mut candidates: Vec<Vec<DynkinDiagram>> = Vec::new();
    for d in &all {
        if visited.contains(d) {
            continue;
        }
        let g = build_graph_from(d, caps);
        visited.extend(g.nodes.iter().cloned());
        visited.insert(d.clone());
        if g.is_complete() {
            let mut nodes = g.nodes.clone();
            nodes.sort();
            candidates.push(nodes);
        }
    }
    let verdicts: Vec<Verdict> = candidates
        .par_iter()
        .map(|class| explore(&class[0].to_bicharacter(), caps).verdict)
        .collect();
    let mut classes = Vec::new();
    let mut excluded = Vec::new();
    let mut unresolved = Vec::new();
    for (class, v) in candidates.into_iter().zip(verdicts) {
        match v {
            Verdict::Finite => classes.push(class),
            Verdict::Exceeded { .. } => match wb_certificate(&class[0], caps).or_else(|| class.iter().find_map(infinitude_certificate)) {
                Some(why) => excluded.push((class, why)),
                None => unresolved.push(class),
            },
            Verdict::NotFull { .. } => {}
        }
    }
    classes.sort();
    excluded.sort();
    unresolved.sort();
    Ok(ClassifyReport {
        torsion: n,
        scanned: all.len(),
        classes,
        excluded,
        unresolved,
    })
}

/// A finite groupoid has a finite `W^B`; an element of infinite order rules
/// that out.
pub fn wb_certificate(d: &DynkinDiagram, caps: &Caps) -> Option<String> {
    let g = build_graph_from(d, caps);
    if !g.is_complete() {
        return None;
    }
    let gens: Vec<_> = wb_generators(&g).into_iter().map(|x| x.matrix).collect();
    infinite_order_witness(&gens, 5000).map(|m| format!("W^B contains {:?} of infinite order", m.rows()))
}

/// A necessary condition for a finite root system that `d` violates: the
/// triangle condition, the rank-2 condition on an induced pair, or Cartan
/// type without finite type.
pub fn infinitude_certificate(d: &DynkinDiagram) -> Option<String> {
    if !triangle_condition(d) {
        return Some(format!("{} violates the triangle condition", d.render()));
    }
    let n = d.rank();
    for i in 0..n {
        for j in i + 1..n {
            if !rank2_condition(&d.induced(&[i, j]).to_bicharacter()) {
                return Some(format!("{}: pair ({}, {}) violates the rank-2 condition", d.render(), i + 1, j + 1));
            }
        }
    }
    if n == 3 && d.is_connected() {
        if let Some(why) = rank3_condition_failure(d) {
            return Some(format!("{}: {why}", d.render()));
        }
    }
    let c = d.to_bicharacter().cartan_verdict(&crate::bicharacter::Basis::standard(n));
    if c.is_cartan && !c.is_finite_type {
        return Some(format!("{} is of Cartan type, not finite type", d.render()));
    }
    let table1 = rank2_catalog();
    for i in 0..n {
        for j in i + 1..n {
            let rows = d.is_connected().then_some(&RANK2_SUBSYSTEM_ROWS[..]);
            if match_rank2(table1, &d.induced(&[i, j]), rows).is_empty() {
                return Some(format!(
                    "{}: pair ({}, {}) is not in the admissible rows of Table 1",
                    d.render(),
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    None
}

fn rank2_catalog() -> &'static Catalog {
    static CELL: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
    CELL.get_or_init(Catalog::builtin)
}

/// Canonical `mu_N` diagrams produced by the Table 2 templates, with the
/// rows they come from. Parameters range over `mu_2N` so that signs are
/// available; only diagrams with all labels in `mu_N` are kept.
pub fn table2_diagrams_over(catalog: &Catalog, n: u64) -> Result<BTreeMap<DynkinDiagram, BTreeSet<u32>>> {
    let target = GroupContext::torsion(n)?;
    let mut out: BTreeMap<DynkinDiagram, BTreeSet<u32>> = BTreeMap::new();
    for e in catalog.table(2) {
        for a in e.assignments_over(2 * n) {
            for k in 0..e.templates.len() {
                let Ok(d) = e.instantiate_diagram(k, &a) else { continue };
                if let Ok(r) = d.restrict_to(&target) {
                    out.entry(r.canonical()).or_default().insert(e.row);
                }
            }
        }
    }
    Ok(out)
}

/// Set comparison of a search result against the catalog.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyComparison {
    pub torsion: u64,
    pub classes: usize,
    pub diagrams: usize,
    pub catalog_diagrams: usize,
    /// Rows with at least one diagram over `mu_N`.
    pub rows_expressible: Vec<u32>,
    pub rows_not_expressible: Vec<u32>,
    /// Rendered diagrams found by the search but absent from the catalog.
    pub unmatched: Vec<String>,
    /// Rendered catalog diagrams the search did not return.
    pub missing: Vec<String>,
    pub excluded_classes: usize,
    pub unresolved_classes: usize,
}

impl ClassifyComparison {
    pub fn agrees(&self) -> bool {
        self.unmatched.is_empty() && self.missing.is_empty() && self.unresolved_classes == 0
    }
}

pub fn compare_with_catalog(report: &ClassifyReport, catalog: &Catalog) -> Result<ClassifyComparison> {
    let expected = table2_diagrams_over(catalog, report.torsion)?;
    let found: BTreeSet<DynkinDiagram> = report.diagrams().into_iter().collect();
    let rows: BTreeSet<u32> = expected.values().flatten().copied().collect();
    Ok(ClassifyComparison {
        torsion: report.torsion,
        classes: report.classes.len(),
        diagrams: found.len(),
        catalog_diagrams: expected.len(),
        rows_expressible: rows.iter().copied().collect(),
        rows_not_expressible: catalog.table(2).map(|e| e.row).filter(|r| !rows.contains(r)).collect(),
        unmatched: found.iter().filter(|d| !expected.contains_key(*d)).map(|d| d.render()).collect(),
        missing: expected.keys().filter(|d| !found.contains(*d)).map(|d| d.render()).collect(),
        excluded_classes: report.excluded.len(),
        unresolved_classes: report.unresolved.len(),
    })
}
