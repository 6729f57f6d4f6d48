//! The diagram graph, twist and Weyl equivalence, the group `W^B` and its
//! structure.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::bicharacter::{Basis, Bicharacter};
use crate::coxeter;
use crate::diagram::DynkinDiagram;
use crate::error::{Error, Result};
use crate::groupoid::{CapKind, Caps, ExplorationResult};
use crate::lattice::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphVerdict {
    Complete,
    NotFull { node: usize, i: usize, j: usize },
    Exceeded { cap: CapKind },
}

/// Canonical diagrams reachable by reflections, with arrows
/// `(node, vertex) -> node` in the node's own vertex numbering.
#[derive(Debug, Clone)]
pub struct DiagramGraph {
    pub nodes: Vec<DynkinDiagram>,
    pub arrows: Vec<Vec<Option<usize>>>,
    pub verdict: GraphVerdict,
    /// `transforms[j]`: a basis matrix `T` (columns = basis) with
    /// `diagram(chi, T(E)) == nodes[j]` as labeled diagrams.
    pub transforms: Vec<IntMatrix>,
    /// Pending generator data: `(node, vertex, target, T_j R_k P_sigma)`.
    edges_taken: Vec<(usize, usize, usize, IntMatrix)>,
    index: HashMap<DynkinDiagram, usize>,
}

impl DiagramGraph {
    pub fn is_complete(&self) -> bool {
        self.verdict == GraphVerdict::Complete
    }

    pub fn contains(&self, d: &DynkinDiagram) -> bool {
        self.index.contains_key(&d.canonical())
    }

    pub fn node_set(&self) -> HashSet<&DynkinDiagram> {
        self.nodes.iter().collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph diagram_graph {\n");
        for (k, d) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  n{k} [label=\"{}\"];\n", d.render().replace('"', "'")));
        }
        for (k, row) in self.arrows.iter().enumerate() {
            for (v, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    s.push_str(&format!("  n{k} -> n{t} [label=\"{}\"];\n", v + 1));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Reflection matrix in local coordinates: column `l` is `e_l + m_kl e_k`,
/// column `k` is `-e_k`.
fn local_reflection(d: &DynkinDiagram, k: usize) -> Result<IntMatrix> {
    let n = d.rank();
    let m = d.m_row(k)?;
    let mut r = IntMatrix::identity(n);
    for l in 0..n {
        r.set(k, l, if l == k { -1 } else { m[l] });
    }
    Ok(r)
}

pub fn build_diagram_graph(chi: &Bicharacter, caps: &Caps) -> DiagramGraph {
    build_graph_from(&chi.standard_diagram(), caps)
}

pub fn build_graph_from(start: &DynkinDiagram, caps: &Caps) -> DiagramGraph {
    let n = start.rank();
    let (c0, sigma) = start.canonical_with_perm();
    let mut g = DiagramGraph {
        nodes: vec![c0.clone()],
        arrows: vec![vec![None; n]],
        verdict: GraphVerdict::Complete,
        transforms: vec![IntMatrix::permutation(&sigma)],
        edges_taken: Vec::new(),
        index: HashMap::from([(c0, 0)]),
    };
    let mut depth = vec![0usize];
    let mut k = 0;
    while k < g.nodes.len() {
        for v in 0..n {
            let node = &g.nodes[k];
            let reflected = match node.reflect(v) {
                Ok(d) => d,
                Err(Error::UndefinedMValue { i, j }) => {
                    g.verdict = GraphVerdict::NotFull { node: k, i, j };
                    return g;
                }
                Err(e) => panic!("{e}"),
            };
            let r = local_reflection(node, v).expect("reflection defined");
            let (canon, perm) = reflected.canonical_with_perm();
            let t = g.transforms[k].mul(&r).mul(&IntMatrix::permutation(&perm));
            let target = match g.index.get(&canon) {
                Some(&t) => t,
                None => {
                    if g.nodes.len() >= caps.max_objects {
                        g.verdict = GraphVerdict::Exceeded {
                            cap: CapKind::MaxObjects,
                        };
                        return g;
                    }
                    if depth[k] + 1 > caps.max_depth {
                        g.verdict = GraphVerdict::Exceeded {
                            cap: CapKind::MaxDepth,
                        };
                        return g;
                    }
                    let id = g.nodes.len();
                    g.index.insert(canon.clone(), id);
                    g.nodes.push(canon);
                    g.arrows.push(vec![None; n]);
                    g.transforms.push(t.clone());
                    depth.push(depth[k] + 1);
                    id
                }
            };
            g.arrows[k][v] = Some(target);
            g.edges_taken.push((k, v, target, t));
        }
        k += 1;
    }
    g
}

/// Same generalized Dynkin diagram up to relabeling; contexts are joined.
pub fn twist_equivalent(a: &Bicharacter, b: &Bicharacter) -> Result<bool> {
    let (da, db) = joined_diagrams(a, b)?;
    Ok(da.canonical() == db.canonical())
}

fn joined_diagrams(a: &Bicharacter, b: &Bicharacter) -> Result<(DynkinDiagram, DynkinDiagram)> {
    if a.rank() != b.rank() {
        return Err(Error::Dimension(format!("ranks {} and {}", a.rank(), b.rank())));
    }
    let ctx = a.context().join(b.context());
    Ok((
        a.standard_diagram().embed(&ctx)?,
        b.standard_diagram().embed(&ctx)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    Equivalent,
    NotEquivalent,
    Indeterminate,
}

/// Weyl equivalence via the diagram graphs: equivalent iff one graph contains
/// a node of the other.
pub fn weyl_equivalent(a: &Bicharacter, b: &Bicharacter, caps: &Caps) -> Result<Equivalence> {
    let (da, db) = joined_diagrams(a, b)?;
    Ok(weyl_equivalent_diagrams(&da, &db, caps))
}

pub fn weyl_equivalent_diagrams(a: &DynkinDiagram, b: &DynkinDiagram, caps: &Caps) -> Equivalence {
    let ga = build_graph_from(a, caps);
    if ga.contains(b) {
        return Equivalence::Equivalent;
    }
    if ga.is_complete() {
        return Equivalence::NotEquivalent;
    }
    let gb = build_graph_from(b, caps);
    if gb.contains(a) {
        Equivalence::Equivalent
    } else if gb.is_complete() {
        Equivalence::NotEquivalent
    } else {
        Equivalence::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub matrix: IntMatrix,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WBGroup {
    /// Sorted, duplicate-free.
    pub elements: Vec<IntMatrix>,
    pub generators: Vec<Generator>,
}

impl WBGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Closed under products and contains the identity.
    pub fn is_closed(&self) -> bool {
        let n = self.elements.first().map_or(0, |m| m.dim());
        self.contains(&IntMatrix::identity(n))
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| self.contains(&a.mul(b))))
    }
}

/// Whether `t` preserves every `q_ii` and every `q_ij q_ji`.
pub fn preserves_diagram(chi: &Bicharacter, t: &IntMatrix) -> bool {
    let cols = t.columns();
    let n = chi.rank();
    let e = Basis::standard(n);
    for i in 0..n {
        if chi.eval(&cols[i], &cols[i]) != chi.eval(&e.vectors()[i], &e.vectors()[i]) {
            return false;
        }
        for j in i + 1..n {
            if chi.sym(&cols[i], &cols[j]) != chi.sym(&e.vectors()[i], &e.vectors()[j]) {
                return false;
            }
        }
    }
    true
}

/// `W^B` from its definition: every ordering of every object whose labeled
/// diagram equals the diagram at `E`.
pub fn wb_group_direct(chi: &Bicharacter, explored: &ExplorationResult) -> Result<WBGroup> {
    if !explored.is_finite() {
        return Err(Error::Precondition("W^B needs a finite exploration".into()));
    }
    let target = chi.standard_diagram();
    let perms = crate::diagram::permutations(chi.rank());
    let mut elements = Vec::new();
    for o in &explored.objects {
        for p in &perms {
            if o.diagram.permuted(p) == target {
                elements.push(o.basis.permuted(p).matrix());
            }
        }
    }
    elements.sort();
    elements.dedup();
    Ok(WBGroup {
        elements,
        generators: Vec::new(),
    })
}

#[derive(Debug, Clone)]
pub enum WbOutcome {
    Finite(WBGroup),
    NotFull,
    Exceeded(CapKind),
}

/// `W^B` from generators read off the diagram graph. If `Y(E)` and `T_i(E)`
/// carry the same labeled diagram then `Y T_i^-1` preserves the quadratic
/// form, hence maps objects to objects; the arrows and diagram automorphisms
/// of every node give such `Y`.
pub fn generate_wb(chi: &Bicharacter, caps: &Caps) -> WbOutcome {
    let g = build_diagram_graph(chi, caps);
    match g.verdict {
        GraphVerdict::Complete => {}
        GraphVerdict::NotFull { .. } => return WbOutcome::NotFull,
        GraphVerdict::Exceeded { cap } => return WbOutcome::Exceeded(cap),
    }
    let gens = wb_generators(&g);
    match close_group(&gens.iter().map(|x| x.matrix.clone()).collect::<Vec<_>>(), chi.rank(), caps) {
        Ok(elements) => WbOutcome::Finite(WBGroup {
            elements,
            generators: gens,
        }),
        Err(cap) => WbOutcome::Exceeded(cap),
    }
}

pub fn wb_generators(g: &DiagramGraph) -> Vec<Generator> {
    let inv: Vec<IntMatrix> = g
        .transforms
        .iter()
        .map(|t| t.inverse_unimodular().expect("transforms are unimodular"))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |m: IntMatrix, source: String| {
        if !m.is_identity() && seen.insert(m.clone()) {
            out.push(Generator { matrix: m, source });
        }
    };
    for (j, node) in g.nodes.iter().enumerate() {
        for tau in node.automorphisms() {
            let y = g.transforms[j].mul(&IntMatrix::permutation(&tau));
            push(y.mul(&inv[j]), format!("automorphism {tau:?} of node {j}"));
        }
    }
    for (j, v, target, t) in &g.edges_taken {
        push(t.mul(&inv[*target]), format!("reflection {} at node {j} -> node {target}", v + 1));
    }
    out
}

/// An element of infinite order among the first `limit` elements of the
/// group generated by `gens`, in breadth-first order. Finite-order elements
/// of `GL(2, Z)` and `GL(3, Z)` have order 1, 2, 3, 4 or 6, so `M^12 != 1`
/// is a witness; larger ranks are not checked.
pub fn infinite_order_witness(gens: &[IntMatrix], limit: usize) -> Option<IntMatrix> {
    let n = gens.first()?.dim();
    if n > 3 {
        return None;
    }
    let infinite = |m: &IntMatrix| {
        let mut p = IntMatrix::identity(n);
        for _ in 0..12 {
            match p.try_mul(m) {
                Ok(x) => p = x,
                Err(_) => return false,
            }
        }
        !p.is_identity()
    };
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() && seen.len() < limit {
        let mut next = Vec::new();
        for a in &frontier {
            for s in gens {
                let Ok(p) = a.try_mul(s) else { continue };
                if seen.len() >= limit || !seen.insert(p.clone()) {
                    continue;
                }
                if infinite(&p) {
                    return Some(p);
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    None
}

/// Closure of `gens` under multiplication, or the cap that stopped it.
pub fn close_group(gens: &[IntMatrix], n: usize, caps: &Caps) -> std::result::Result<Vec<IntMatrix>, CapKind> {
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for s in gens {
                let p = a.try_mul(s).map_err(|_| CapKind::MaxRootNorm)?;
                if seen.contains(&p) {
                    continue;
                }
                if (0..n).any(|i| (0..n).any(|j| p.get(i, j).abs() > caps.max_root_norm)) {
                    return Err(CapKind::MaxRootNorm);
                }
                if seen.len() >= caps.max_objects {
                    return Err(CapKind::MaxObjects);
                }
                seen.insert(p.clone());
                next.push(p);
            }
        }
        frontier = next;
    }
    let mut v: Vec<IntMatrix> = seen.into_iter().collect();
    v.sort();
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Finite,
    NotFull,
    Indeterminate,
}

/// Finite iff the diagram graph and `W^B` are both finite.
pub fn finiteness_criterion(chi: &Bicharacter, caps: &Caps) -> Criterion {
    match generate_wb(chi, caps) {
        WbOutcome::Finite(_) => Criterion::Finite,
        WbOutcome::NotFull => Criterion::NotFull,
        WbOutcome::Exceeded(_) => Criterion::Indeterminate,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub order: usize,
    /// element order -> multiplicity
    pub element_orders: BTreeMap<usize, usize>,
    /// Elementary divisors of the abelianization.
    pub abelian_invariants: Vec<usize>,
    /// Names of all reference groups with the same invariants; empty means
    /// unknown.
    pub matches: Vec<String>,
}

impl GroupDescriptor {
    pub fn name(&self) -> &str {
        self.matches.first().map_or("unknown", |s| s.as_str())
    }

    pub fn matches_symbol(&self, symbol: &str) -> bool {
        self.matches.iter().any(|m| m == symbol)
    }

    fn invariants(&self) -> (usize, &BTreeMap<usize, usize>, &[usize]) {
        (self.order, &self.element_orders, &self.abelian_invariants)
    }
}

/// Order, element orders and abelianization of a finite group given by its
/// elements and multiplication.
fn invariants_of<T, F>(elements: &[T], identity: &T, mul: F) -> (usize, BTreeMap<usize, usize>, Vec<usize>)
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let idx: HashMap<&T, usize> = elements.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let n = elements.len();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| idx[&mul(a, b)]).collect())
        .collect();
    let e = idx[identity];
    let inverse: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| table[a][b] == e).expect("group inverse"))
        .collect();
    let elt_order = |a: usize| {
        let mut k = 1;
        let mut x = a;
        while x != e {
            x = table[x][a];
            k += 1;
        }
        k
    };
    let mut orders = BTreeMap::new();
    for a in 0..n {
        *orders.entry(elt_order(a)).or_insert(0) += 1;
    }

    // Commutator subgroup: closure of all commutators.
    let comms: Vec<usize> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| table[table[inverse[a]][inverse[b]]][table[a][b]])
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let mut derived: HashSet<usize> = HashSet::from([e]);
    let mut frontier = vec![e];
    while let Some(x) = frontier.pop() {
        for &c in &comms {
            let y = table[x][c];
            if derived.insert(y) {
                frontier.push(y);
            }
        }
    }
    // Cosets of the (normal) derived subgroup, labelled by their least member.
    let coset_of: Vec<usize> = (0..n)
        .map(|a| derived.iter().map(|&h| table[a][h]).min().unwrap())
        .collect();
    let reps: Vec<usize> = {
        let mut r: Vec<usize> = coset_of.clone();
        r.sort();
        r.dedup();
        r
    };
    let quotient_order = |a: usize| {
        let mut k = 1;
        let mut x = a;
        while coset_of[x] != coset_of[e] {
            x = table[x][a];
            k += 1;
        }
        k
    };
    let quotient_orders: Vec<usize> = reps.iter().map(|&a| quotient_order(a)).collect();
    (n, orders, elementary_divisors(&quotient_orders))
}

/// Elementary divisors (prime powers, sorted) of a finite abelian group from
/// the list of its element orders.
fn elementary_divisors(orders: &[usize]) -> Vec<usize> {
    let size = orders.len();
    let mut primes = Vec::new();
    let mut m = size;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    let mut out = Vec::new();
    for p in primes {
        // |A[p^k]| = p^(sum_i min(k, e_i))
        let mut s = vec![0u32];
        let mut k = 1;
        loop {
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count();
            let exp = count.ilog(p);
            if exp == *s.last().unwrap() {
                break;
            }
            s.push(exp);
            k += 1;
        }
        // number of cyclic factors with exponent >= k is s[k] - s[k-1]
        let ge: Vec<u32> = (1..s.len()).map(|k| s[k] - s[k - 1]).collect();
        for k in 1..=ge.len() {
            let next = if k < ge.len() { ge[k] } else { 0 };
            for _ in 0..(ge[k - 1] - next) {
                out.push(p.pow(k as u32));
            }
        }
    }
    out.sort();
    out
}

/// A Coxeter presentation on involutions `s_1..s_k` with `(s_i s_j)^m_ij`.
fn reference_descriptor(name: &str, m: &[Vec<usize>]) -> GroupDescriptor {
    let table = coxeter::enumerate_cosets(m.len(), &coxeter::coxeter_relators(m), 100_000)
        .expect("reference presentation is finite");
    let gens = coxeter::regular_permutations(&table);
    let size = table.len();
    let id: Vec<usize> = (0..size).collect();
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { (0..a.len()).map(|x| b[a[x]]).collect() };
    let mut elements = vec![id.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut k = 0;
    while k < elements.len() {
        for g in &gens {
            let p = compose(&elements[k], g);
            if seen.insert(p.clone()) {
                elements.push(p);
            }
        }
        k += 1;
    }
    let (order, element_orders, abelian_invariants) = invariants_of(&elements, &id, compose);
    GroupDescriptor {
        order,
        element_orders,
        abelian_invariants,
        matches: vec![name.to_string()],
    }
}

/// `Z2 x [m]`: involutions `s1, s2, z` with `(s1 s2)^m` and `z` central.
fn z2_times(m: usize) -> Vec<Vec<usize>> {
    vec![vec![1, m, 2], vec![m, 1, 2], vec![2, 2, 1]]
}

fn dihedral(m: usize) -> Vec<Vec<usize>> {
    vec![vec![1, m], vec![m, 1]]
}

/// Descriptors of the reference groups, computed by coset enumeration.
pub fn reference_groups() -> &'static [GroupDescriptor] {
    static REFS: std::sync::OnceLock<Vec<GroupDescriptor>> = std::sync::OnceLock::new();
    REFS.get_or_init(|| {
        let mut v = vec![GroupDescriptor {
            order: 1,
            element_orders: BTreeMap::from([(1, 1)]),
            abelian_invariants: vec![],
            matches: vec!["trivial".into()],
        }];
        v.push(reference_descriptor("Z2", &[vec![1]]));
        v.push(reference_descriptor("Z2^3", &z2_times(2)));
        for m in 3..=6 {
            v.push(reference_descriptor(&format!("Z2x[{m}]"), &z2_times(m)));
        }
        for m in 2..=6 {
            v.push(reference_descriptor(&format!("[{m}]"), &dihedral(m)));
        }
        v.push(reference_descriptor(
            "[3,3]",
            &[vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]],
        ));
        v.push(reference_descriptor(
            "[3,4]",
            &[vec![1, 3, 2], vec![3, 1, 4], vec![2, 4, 1]],
        ));
        v
    })
}

pub fn describe_group(g: &WBGroup) -> GroupDescriptor {
    let n = g.elements.first().map_or(0, |m| m.dim());
    let (order, element_orders, abelian_invariants) =
        invariants_of(&g.elements, &IntMatrix::identity(n), |a, b| a.mul(b));
    let mut d = GroupDescriptor {
        order,
        element_orders,
        abelian_invariants,
        matches: Vec::new(),
    };
    d.matches = reference_groups()
        .iter()
        .filter(|r| r.invariants() == d.invariants())
        .map(|r| r.matches[0].clone())
        .collect();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::GroupContext;
    use crate::groupoid::explore;

    fn chain(
        ctx: GroupContext,
        v: [crate::GroupElement; 3],
        e: [crate::GroupElement; 2],
    ) -> DynkinDiagram {
        DynkinDiagram::from_edge_list(
            ctx,
            v.to_vec(),
            &[(0, 1, e[0].clone()), (1, 2, e[1].clone())],
        )
        .unwrap()
    }

    fn refs(name: &str) -> &'static GroupDescriptor {
        reference_groups().iter().find(|r| r.matches[0] == name).unwrap()
    }

    #[test]
    fn reference_orders() {
        // frozen from coset enumeration of the presentations
        let want = [
            ("Z2^3", 8),
            ("Z2x[3]", 12),
            ("[6]", 12),
            ("Z2x[4]", 16),
            ("Z2x[6]", 24),
            ("[3,4]", 48),
        ];
        for (name, order) in want {
            assert_eq!(refs(name).order, order, "{name}");
        }
        assert_eq!(refs("Z2^3").element_orders, BTreeMap::from([(1, 1), (2, 7)]));
        assert_eq!(refs("Z2^3").abelian_invariants, vec![2, 2, 2]);
        assert_eq!(refs("[3,4]").abelian_invariants, vec![2, 2]);
        assert_eq!(refs("Z2x[6]").abelian_invariants, vec![2, 2, 2]);
    }

    #[test]
    fn z2x3_and_6_are_indistinguishable() {
        // D6 = Z2 x S3: the invariants coincide, so both names are reported.
        assert_eq!(refs("Z2x[3]").invariants(), refs("[6]").invariants());
        assert_eq!(
            refs("[6]").element_orders,
            BTreeMap::from([(1, 1), (2, 7), (3, 2), (6, 2)])
        );
    }

    #[test]
    fn elementary_divisor_recovery() {
        // Z4 x Z2: orders 1,2,2,2,4,4,4,4
        assert_eq!(elementary_divisors(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        assert_eq!(elementary_divisors(&[1, 3, 3]), vec![3]);
        assert_eq!(elementary_divisors(&[1, 2, 3, 6, 3, 6]), vec![2, 3]);
        assert_eq!(elementary_divisors(&[1]), Vec::<usize>::new());
    }

    #[test]
    fn cartan_a2_graph_is_a_single_loop() {
        let c = GroupContext::new(1, 1).unwrap();
        let q = c.free_generator(0).unwrap();
        let d = DynkinDiagram::from_edge_list(c, vec![q.clone(), q.clone()], &[(0, 1, q.inv())])
            .unwrap();
        let g = build_graph_from(&d, &Caps::default());
        assert!(g.is_complete());
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(g.arrows[0], vec![Some(0), Some(0)]);
    }

    #[test]
    fn edgeless_graph() {
        let c = GroupContext::torsion(3).unwrap();
        let z = c.torsion_generator();
        let d = DynkinDiagram::from_edge_list(c, vec![z.clone(), z], &[]).unwrap();
        assert_eq!(build_graph_from(&d, &Caps::default()).nodes.len(), 1);
    }

    #[test]
    fn a3_wb_routes_agree() {
        let c = GroupContext::new(1, 1).unwrap();
        let q = c.free_generator(0).unwrap();
        let chi = chain(c, [q.clone(), q.clone(), q.clone()], [q.inv(), q.inv()]).to_bicharacter();
        let direct = wb_group_direct(&chi, &explore(&chi, &Caps::default())).unwrap();
        let WbOutcome::Finite(gen) = generate_wb(&chi, &Caps::default()) else {
            panic!("expected finite")
        };
        assert_eq!(direct.elements, gen.elements);
        assert!(direct.is_closed());
        // Weyl group of A3 = S4, plus the diagram flip.
        assert_eq!(direct.order(), 48);
        let desc = describe_group(&direct);
        assert!(desc.matches_symbol("[3,4]"));
        for t in &direct.elements {
            assert!(preserves_diagram(&chi, t));
        }
    }

    #[test]
    fn affine_group_closure_breaks_cap() {
        let c = GroupContext::new(1, 1).unwrap();
        let q = c.free_generator(0).unwrap();
        let d = DynkinDiagram::from_edge_list(c, vec![q.clone(), q.clone()], &[(0, 1, q.pow(-2))])
            .unwrap();
        let chi = d.to_bicharacter();
        let g = build_diagram_graph(&chi, &Caps::default());
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(finiteness_criterion(&chi, &Caps::default()), Criterion::Indeterminate);
    }

    #[test]
    fn rank_one_criterion() {
        let c = GroupContext::torsion(2).unwrap();
        let chi = Bicharacter::new(c, vec![vec![c.minus_one().unwrap()]]).unwrap();
        assert_eq!(finiteness_criterion(&chi, &Caps::default()), Criterion::Finite);
        let WbOutcome::Finite(g) = generate_wb(&chi, &Caps::default()) else {
            panic!()
        };
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn twist_and_weyl() {
        let c = GroupContext::new(1, 1).unwrap();
        let q = c.free_generator(0).unwrap();
        let one = c.identity();
        let a = Bicharacter::new(c, vec![vec![q.clone(), q.inv()], vec![one.clone(), q.clone()]])
            .unwrap();
        let b = Bicharacter::new(c, vec![vec![q.clone(), q.clone()], vec![q.pow(-2), q.clone()]])
            .unwrap();
        assert!(twist_equivalent(&a, &b).unwrap());
        assert!(twist_equivalent(&a, &a).unwrap());
        assert_eq!(weyl_equivalent(&a, &a, &Caps::default()).unwrap(), Equivalence::Equivalent);
        let c2 = GroupContext::new(1, 2).unwrap();
        let q2 = c2.free_generator(0).unwrap();
        let m1 = c2.minus_one().unwrap();
        let other = DynkinDiagram::from_edge_list(c2, vec![q2.clone(), m1], &[(0, 1, q2.inv())])
            .unwrap()
            .to_bicharacter();
        assert!(!twist_equivalent(&a, &other).unwrap());
        assert_eq!(
            weyl_equivalent(&a, &other, &Caps::default()).unwrap(),
            Equivalence::NotEquivalent
        );
    }
}
