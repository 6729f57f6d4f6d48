//! Generalized Dynkin diagrams: vertex labels `q_ii`, edge labels
//! `q_ij q_ji`, the label-only reflection update, and canonical forms up to
//! vertex relabeling.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bicharacter::{m_value_labels, Bicharacter};
use crate::error::{Error, Result};
use crate::exponents::{ElementRepr, GroupContext, GroupElement};

/// Vertex labels plus a symmetric matrix of edge labels (diagonal = 1); an
/// edge `{i, j}` is present iff its label is not 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinDiagram {
    ctx: GroupContext,
    vertices: Vec<GroupElement>,
    edges: Vec<Vec<GroupElement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRepr {
    pub i: usize,
    pub j: usize,
    pub label: ElementRepr,
}

/// JSON form; indices are 0-based, absent edges carry label 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRepr {
    pub context: GroupContext,
    pub n: usize,
    pub vertices: Vec<ElementRepr>,
    pub edges: Vec<EdgeRepr>,
}

impl DynkinDiagram {
    pub fn new(
        ctx: GroupContext,
        vertices: Vec<GroupElement>,
        edges: Vec<Vec<GroupElement>>,
    ) -> Result<Self> {
        let n = vertices.len();
        if edges.len() != n || edges.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("edge matrix must be n x n".into()));
        }
        for x in vertices.iter().chain(edges.iter().flatten()) {
            if *x.context() != ctx {
                return Err(Error::ContextMismatch {
                    left: ctx,
                    right: *x.context(),
                });
            }
        }
        for i in 0..n {
            if !edges[i][i].is_one() {
                return Err(Error::Precondition(format!("self-edge at vertex {}", i + 1)));
            }
            for j in 0..i {
                if edges[i][j] != edges[j][i] {
                    return Err(Error::Precondition(format!(
                        "edge labels ({}, {}) not symmetric",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(DynkinDiagram {
            ctx,
            vertices,
            edges,
        })
    }

    /// From a vertex list and `(i, j, label)` triples; missing pairs get 1.
    pub fn from_edge_list(
        ctx: GroupContext,
        vertices: Vec<GroupElement>,
        edge_list: &[(usize, usize, GroupElement)],
    ) -> Result<Self> {
        let n = vertices.len();
        let mut edges = vec![vec![ctx.identity(); n]; n];
        for (i, j, label) in edge_list {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || i == j {
                return Err(Error::Dimension(format!("bad edge ({i}, {j}) for {n} vertices")));
            }
            if !edges[i][j].is_one() && edges[i][j] != *label {
                return Err(Error::Precondition(format!("edge ({i}, {j}) given twice")));
            }
            edges[i][j] = label.clone();
            edges[j][i] = label.clone();
        }
        Self::new(ctx, vertices, edges)
    }

    pub fn from_repr(repr: &DiagramRepr) -> Result<Self> {
        if repr.vertices.len() != repr.n {
            return Err(Error::Dimension(format!(
                "n = {} but {} vertex labels",
                repr.n,
                repr.vertices.len()
            )));
        }
        let ctx = repr.context;
        let vertices = repr
            .vertices
            .iter()
            .map(|v| GroupElement::from_repr(&ctx, v))
            .collect::<Result<Vec<_>>>()?;
        let edges = repr
            .edges
            .iter()
            .map(|e| Ok((e.i, e.j, GroupElement::from_repr(&ctx, &e.label)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edge_list(ctx, vertices, &edges)
    }

    pub fn to_repr(&self) -> DiagramRepr {
        DiagramRepr {
            context: self.ctx,
            n: self.rank(),
            vertices: self.vertices.iter().map(GroupElement::to_repr).collect(),
            edges: self
                .edge_list()
                .into_iter()
                .map(|(i, j, l)| EdgeRepr {
                    i,
                    j,
                    label: l.to_repr(),
                })
                .collect(),
        }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &GroupElement {
        &self.vertices[i]
    }

    /// `q_ij q_ji` (1 when there is no edge, and on the diagonal).
    pub fn edge(&self, i: usize, j: usize) -> &GroupElement {
        &self.edges[i][j]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        !self.edges[i][j].is_one()
    }

    /// Present edges as `(i, j, label)` with `i < j`.
    pub fn edge_list(&self) -> Vec<(usize, usize, GroupElement)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.has_edge(i, j) {
                    out.push((i, j, self.edges[i][j].clone()));
                }
            }
        }
        out
    }

    pub fn embed(&self, target: &GroupContext) -> Result<DynkinDiagram> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.embed(target))
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|r| r.iter().map(|x| x.embed(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        DynkinDiagram::new(*target, vertices, edges)
    }

    pub fn restrict_to(&self, target: &GroupContext) -> Result<DynkinDiagram> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.restrict_to(target))
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|r| r.iter().map(|x| x.restrict_to(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        DynkinDiagram::new(*target, vertices, edges)
    }

    /// A bicharacter with this diagram: `q_ij` = edge label for `i < j`,
    /// `q_ji = 1`.
    pub fn to_bicharacter(&self) -> Bicharacter {
        let n = self.rank();
        let mut q = vec![vec![self.ctx.identity(); n]; n];
        for i in 0..n {
            q[i][i] = self.vertices[i].clone();
            for j in i + 1..n {
                q[i][j] = self.edges[i][j].clone();
            }
        }
        Bicharacter::new(self.ctx, q).expect("same context")
    }

    pub fn m_value(&self, i: usize, j: usize) -> Option<i64> {
        if i == j {
            return Some(-2);
        }
        m_value_labels(&self.vertices[i], &self.edges[i][j])
    }

    /// All `m(i, j)` for `j != i`, or the first undefined pair.
    pub fn m_row(&self, i: usize) -> Result<Vec<i64>> {
        (0..self.rank())
            .map(|j| self.m_value(i, j).ok_or(Error::UndefinedMValue { i, j }))
            .collect()
    }

    pub fn is_reflectable(&self, i: usize) -> bool {
        (0..self.rank()).all(|j| self.m_value(i, j).is_some())
    }

    /// Diagram of the reflected basis, computed from labels only.
    ///
    /// With `p_ij = 1` if `q_ii^m q_ij q_ji = 1` for some integer `m` and
    /// `p_ij = q_ii^-1 q_ij q_ji` otherwise, the new labels are
    /// `q'_jj = p_ij^m_ij q_jj`, `(q'q')_ij = p_ij^-2 (qq)_ij` and
    /// `(q'q')_jl = p_ij^m_il p_il^m_ij (qq)_jl`. Vertex indices are kept.
    pub fn reflect(&self, i: usize) -> Result<DynkinDiagram> {
        let n = self.rank();
        let m = self.m_row(i)?;
        let qi = &self.vertices[i];
        let p: Vec<GroupElement> = (0..n)
            .map(|j| {
                if j == i {
                    return self.ctx.identity();
                }
                let s = &self.edges[i][j];
                if crate::exponents::has_integer_exponent(qi, s).expect("same context") {
                    self.ctx.identity()
                } else {
                    qi.inv().mul(s)
                }
            })
            .collect();
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        for j in 0..n {
            if j == i {
                continue;
            }
            vertices[j] = p[j].pow(m[j]).mul(&self.vertices[j]);
            let e = p[j].pow(-2).mul(&self.edges[i][j]);
            edges[i][j] = e.clone();
            edges[j][i] = e;
            for l in j + 1..n {
                if l == i {
                    continue;
                }
                let e = p[j].pow(m[l]).mul(&p[l].pow(m[j])).mul(&self.edges[j][l]);
                edges[j][l] = e.clone();
                edges[l][j] = e;
            }
        }
        DynkinDiagram::new(self.ctx, vertices, edges)
    }

    /// Relabeled diagram with new vertex `k` = old vertex `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> DynkinDiagram {
        let n = self.rank();
        assert_eq!(perm.len(), n);
        let vertices = perm.iter().map(|&p| self.vertices[p].clone()).collect();
        let edges = (0..n)
            .map(|a| (0..n).map(|b| self.edges[perm[a]][perm[b]].clone()).collect())
            .collect();
        DynkinDiagram {
            ctx: self.ctx,
            vertices,
            edges,
        }
    }

    fn less_under(&self, a: &[usize], b: &[usize]) -> std::cmp::Ordering {
        // Compare the encodings (vertex[k], edges[k][l] for l > k) without
        // materializing them.
        let n = self.rank();
        for k in 0..n {
            let c = self.vertices[a[k]].cmp(&self.vertices[b[k]]);
            if c.is_ne() {
                return c;
            }
            for l in k + 1..n {
                let c = self.edges[a[k]][a[l]].cmp(&self.edges[b[k]][b[l]]);
                if c.is_ne() {
                    return c;
                }
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Lexicographically least relabeling, and the permutation producing it
    /// (`canonical = self.permuted(perm)`).
    pub fn canonical_with_perm(&self) -> (DynkinDiagram, Vec<usize>) {
        let perms = permutations(self.rank());
        let mut best = &perms[0];
        for p in &perms[1..] {
            if self.less_under(p, best).is_lt() {
                best = p;
            }
        }
        (self.permuted(best), best.clone())
    }

    pub fn canonical(&self) -> DynkinDiagram {
        self.canonical_with_perm().0
    }

    /// Vertex permutations fixing the diagram (always includes the identity).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let id: Vec<usize> = (0..self.rank()).collect();
        permutations(self.rank())
            .into_iter()
            .filter(|p| self.less_under(p, &id).is_eq())
            .collect()
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..n {
                    if !seen[j] && self.has_edge(i, j) {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Sub-diagram on the given vertices, in the given order.
    pub fn induced(&self, idx: &[usize]) -> DynkinDiagram {
        let vertices = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let edges = idx
            .iter()
            .map(|&a| idx.iter().map(|&b| self.edges[a][b].clone()).collect())
            .collect();
        DynkinDiagram {
            ctx: self.ctx,
            vertices,
            edges,
        }
    }

    /// One-line text form, vertices 1-based: `[1: q] [2: q] (1-2: q^-1)`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = write!(s, "[{}: {}] ", i + 1, v);
        }
        for (i, j, l) in self.edge_list() {
            let _ = write!(s, "({}-{}: {}) ", i + 1, j + 1, l);
        }
        s.trim_end().to_string()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph diagram {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  {} [label=\"{}\"];", i + 1, v);
        }
        for (i, j, l) in self.edge_list() {
            let _ = writeln!(s, "  {} -- {} [label=\"{}\"];", i + 1, j + 1, l);
        }
        s.push_str("}\n");
        s
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicharacter::Basis;

    fn chain(ctx: GroupContext, v: [&GroupElement; 3], e: [&GroupElement; 2]) -> DynkinDiagram {
        DynkinDiagram::from_edge_list(
            ctx,
            v.iter().map(|x| (*x).clone()).collect(),
            &[(0, 1, e[0].clone()), (1, 2, e[1].clone())],
        )
        .unwrap()
    }

    #[test]
    fn reflection_example_step1() {
        // chain (-r^-1, -1, -1, r, -1) at vertex 3 -> (-r^-1, -1, r, r^-1, -1)
        let c = GroupContext::new(1, 2).unwrap();
        let r = c.free_generator(0).unwrap();
        let m1 = c.minus_one().unwrap();
        let d = chain(c, [&m1.mul(&r.inv()), &m1, &m1], [&m1, &r]);
        let got = d.reflect(2).unwrap();
        let want = chain(c, [&m1.mul(&r.inv()), &r, &m1], [&m1, &r.inv()]);
        assert_eq!(got, want);
    }

    #[test]
    fn reflection_example_step3() {
        // chain (-1, r^2, r^-2, r, -1) at vertex 1 -> (-1, r^-2, -1, r, -1)
        let c = GroupContext::new(1, 2).unwrap();
        let r = c.free_generator(0).unwrap();
        let m1 = c.minus_one().unwrap();
        let d = chain(c, [&m1, &r.pow(-2), &m1], [&r.pow(2), &r]);
        let got = d.reflect(0).unwrap();
        let want = chain(c, [&m1, &m1, &m1], [&r.pow(-2), &r]);
        assert_eq!(got, want);
    }

    #[test]
    fn reflect_twice_is_identity() {
        let c = GroupContext::torsion(12).unwrap();
        let z = c.torsion_generator();
        let d = chain(c, [&z.pow(2), &z.pow(6), &z.pow(5)], [&z.pow(3), &z.pow(7)]);
        for i in 0..3 {
            assert_eq!(d.reflect(i).unwrap().reflect(i).unwrap(), d);
        }
    }

    #[test]
    fn reflect_matches_basis_reflection() {
        let c = GroupContext::new(1, 6).unwrap();
        let q = c.free_generator(0).unwrap();
        let z = c.torsion_generator();
        let d = chain(c, [&q, &q, &z.pow(3)], [&q.inv(), &q.inv()]);
        let chi = d.to_bicharacter();
        let e = Basis::standard(3);
        for i in 0..3 {
            let f = chi.reflect_basis(&e, i).unwrap();
            assert_eq!(d.reflect(i).unwrap(), chi.diagram(&f));
        }
    }

    #[test]
    fn twist_split_is_invisible() {
        let c = GroupContext::new(1, 1).unwrap();
        let q = c.free_generator(0).unwrap();
        let one = c.identity();
        let a = Bicharacter::new(c, vec![vec![q.clone(), q.clone()], vec![q.pow(-3), q.clone()]])
            .unwrap();
        let b = Bicharacter::new(c, vec![vec![q.clone(), q.pow(-2)], vec![one, q.clone()]]).unwrap();
        assert_eq!(a.standard_diagram(), b.standard_diagram());
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let c = GroupContext::torsion(6).unwrap();
        let z = c.torsion_generator();
        let d = chain(c, [&z, &z.pow(3), &z.pow(2)], [&z.pow(5), &z.pow(4)]);
        let (canon, perm) = d.canonical_with_perm();
        assert_eq!(d.permuted(&perm), canon);
        for p in permutations(3) {
            assert_eq!(d.permuted(&p).canonical(), canon);
        }
        assert_eq!(d.automorphisms(), vec![vec![0, 1, 2]]);
        let sym = chain(c, [&z, &z, &z], [&z.pow(5), &z.pow(5)]);
        assert_eq!(sym.automorphisms().len(), 2);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn json_round_trip() {
        let c = GroupContext::new(1, 4).unwrap();
        let q = c.free_generator(0).unwrap();
        let d = chain(c, [&q, &c.torsion_element(2), &q], [&q.inv(), &c.torsion_element(1)]);
        let s = serde_json::to_string(&d.to_repr()).unwrap();
        let back = DynkinDiagram::from_repr(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, d);
        assert!(d.to_dot().contains("1 -- 2 [label=\"g1^-1\"]"));
    }

    #[test]
    fn rejects_asymmetric_edges() {
        let c = GroupContext::torsion(3).unwrap();
        let z = c.torsion_generator();
        let one = c.identity();
        let bad = DynkinDiagram::new(
            c,
            vec![z.clone(), z.clone()],
            vec![vec![one.clone(), z.clone()], vec![one.clone(), one.clone()]],
        );
        assert!(bad.is_err());
    }
}
