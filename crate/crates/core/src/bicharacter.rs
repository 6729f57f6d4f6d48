//! Bicharacters on `Z^n` given by structure constants, the m-values, simple
//! reflections of bases, and the Cartan-type tests.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::diagram::DynkinDiagram;
use crate::error::{Error, Result};
use crate::exponents::{solve_min_exponent, ElementRepr, GroupContext, GroupElement, Order};
use crate::lattice::{self, IntMatrix, Vector};

/// `chi(e_i, e_j) = q[i][j]` for the standard basis `e_1..e_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bicharacter {
    ctx: GroupContext,
    q: Vec<Vec<GroupElement>>,
    // q_ij flattened to (free exponents, torsion exponent) for evaluation.
    flat_free: Vec<Vec<i64>>,
    flat_tor: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicharacterRepr {
    pub context: GroupContext,
    pub n: usize,
    pub q: Vec<Vec<ElementRepr>>,
}

impl Bicharacter {
    pub fn new(ctx: GroupContext, q: Vec<Vec<GroupElement>>) -> Result<Self> {
        let n = q.len();
        for row in &q {
            if row.len() != n {
                return Err(Error::Dimension("structure constants must form an n x n matrix".into()));
            }
            for x in row {
                if *x.context() != ctx {
                    return Err(Error::ContextMismatch {
                        left: ctx,
                        right: *x.context(),
                    });
                }
            }
        }
        let flat_free = q.iter().flatten().map(|x| x.free_part().to_vec()).collect();
        let flat_tor = q.iter().flatten().map(|x| x.torsion_part()).collect();
        Ok(Bicharacter {
            ctx,
            q,
            flat_free,
            flat_tor,
        })
    }

    pub fn from_repr(repr: &BicharacterRepr) -> Result<Self> {
        if repr.q.len() != repr.n {
            return Err(Error::Dimension(format!(
                "n = {} but q has {} rows",
                repr.n,
                repr.q.len()
            )));
        }
        let q = repr
            .q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| GroupElement::from_repr(&repr.context, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(repr.context, q)
    }

    pub fn to_repr(&self) -> BicharacterRepr {
        BicharacterRepr {
            context: self.ctx,
            n: self.rank(),
            q: self
                .q
                .iter()
                .map(|r| r.iter().map(GroupElement::to_repr).collect())
                .collect(),
        }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &GroupElement {
        &self.q[i][j]
    }

    /// `chi(a, b) = prod q_ij^(a_i b_j)`.
    pub fn eval(&self, a: &[i64], b: &[i64]) -> GroupElement {
        let n = self.rank();
        assert!(a.len() == n && b.len() == n, "vector length must equal rank");
        let r = self.ctx.free_rank();
        let modn = self.ctx.torsion_order() as i128;
        let mut free = vec![0i128; r];
        let mut tor = 0i128;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let c = a[i] as i128 * b[j] as i128;
                let k = i * n + j;
                tor = (tor + c * self.flat_tor[k] as i128).rem_euclid(modn);
                for (acc, &f) in free.iter_mut().zip(&self.flat_free[k]) {
                    *acc += c * f as i128;
                }
            }
        }
        let free = free
            .into_iter()
            .map(|x| i64::try_from(x).expect("exponent overflow in eval"))
            .collect();
        self.ctx.element(free, tor as i64).expect("context rank")
    }

    /// `chi(a, b) chi(b, a)`.
    pub fn sym(&self, a: &[i64], b: &[i64]) -> GroupElement {
        self.eval(a, b).mul(&self.eval(b, a))
    }

    /// `chi o (T x T)`: structure constants w.r.t. the columns of `t`.
    pub fn transformed(&self, t: &IntMatrix) -> Bicharacter {
        let cols = t.columns();
        let q = cols
            .iter()
            .map(|a| cols.iter().map(|b| self.eval(a, b)).collect())
            .collect();
        Bicharacter::new(self.ctx, q).expect("same context")
    }

    /// Bicharacter on a sublattice with the given basis vectors.
    pub fn restricted(&self, basis: &[Vector]) -> Bicharacter {
        let q = basis
            .iter()
            .map(|a| basis.iter().map(|b| self.eval(a, b)).collect())
            .collect();
        Bicharacter::new(self.ctx, q).expect("same context")
    }

    pub fn embed(&self, target: &GroupContext) -> Result<Bicharacter> {
        let q = self
            .q
            .iter()
            .map(|r| r.iter().map(|x| x.embed(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Bicharacter::new(*target, q)
    }

    pub fn diagram(&self, f: &Basis) -> DynkinDiagram {
        let v = f.vectors();
        let n = v.len();
        let vertices = v.iter().map(|x| self.eval(x, x)).collect();
        let mut edges = vec![vec![self.ctx.identity(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let s = self.sym(&v[i], &v[j]);
                edges[j][i] = s.clone();
                edges[i][j] = s;
            }
        }
        DynkinDiagram::new(self.ctx, vertices, edges).expect("well-formed by construction")
    }

    /// Diagram w.r.t. the standard basis.
    pub fn standard_diagram(&self) -> DynkinDiagram {
        self.diagram(&Basis::standard(self.rank()))
    }

    /// `m(f_i, f_j)`; `Some(-2)` on the diagonal, `None` when undefined.
    pub fn m_value(&self, f: &Basis, i: usize, j: usize) -> Option<i64> {
        if i == j {
            return Some(-2);
        }
        let v = f.vectors();
        m_value_labels(&self.eval(&v[i], &v[i]), &self.sym(&v[i], &v[j]))
    }

    /// `s_{f_i, F}(F)`: `f_j -> f_j + m(f_i, f_j) f_i`.
    pub fn reflect_basis(&self, f: &Basis, i: usize) -> Result<Basis> {
        let v = f.vectors();
        let qi = self.eval(&v[i], &v[i]);
        let mut out = Vec::with_capacity(v.len());
        for j in 0..v.len() {
            if j == i {
                out.push(lattice::neg(&v[i]));
                continue;
            }
            let m = m_value_labels(&qi, &self.sym(&v[i], &v[j]))
                .ok_or(Error::UndefinedMValue { i, j })?;
            out.push(lattice::add(&v[j], &lattice::scale(&v[i], m)));
        }
        Ok(Basis(out))
    }

    /// Components of the graph with an edge `{i, j}` whenever
    /// `sym(e_i, e_j) != 1`.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.standard_diagram().connected_components()
    }

    pub fn cartan_verdict(&self, f: &Basis) -> CartanVerdict {
        let d = self.diagram(f);
        let n = d.rank();
        let mut c = IntMatrix::identity(n);
        for i in 0..n {
            c.set(i, i, 2);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let Some(m) = d.m_value(i, j) else {
                    return CartanVerdict::not_cartan(format!(
                        "m-value undefined at ({}, {})",
                        i + 1,
                        j + 1
                    ));
                };
                if !d.vertex(i).pow(m).mul(d.edge(i, j)).is_one() {
                    return CartanVerdict::not_cartan(format!(
                        "q_ii^m sym != 1 at ({}, {})",
                        i + 1,
                        j + 1
                    ));
                }
                c.set(i, j, -m);
            }
        }
        let is_finite_type = cartan_is_finite_type(&c);
        CartanVerdict {
            is_cartan: true,
            cartan_matrix: Some(c),
            is_finite_type,
            reason: None,
        }
    }
}

/// m-value from labels alone: least `m >= 0` with `q^m sym = 1`, or with
/// `q^(m+1) = 1` and `q != 1`.
pub fn m_value_labels(q: &GroupElement, sym: &GroupElement) -> Option<i64> {
    let first = solve_min_exponent(q, sym).expect("same context");
    let second = match q.order() {
        Order::Finite(k) if k > 1 => Some(k - 1),
        _ => None,
    };
    match (first, second) {
        (Some(a), Some(b)) => Some(a.min(b) as i64),
        (Some(a), None) | (None, Some(a)) => Some(a as i64),
        (None, None) => None,
    }
}

/// An ordered `Z`-basis of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vector>", into = "Vec<Vector>")]
pub struct Basis(Vec<Vector>);

impl TryFrom<Vec<Vector>> for Basis {
    type Error = Error;

    fn try_from(v: Vec<Vector>) -> Result<Self> {
        Basis::new(v)
    }
}

impl From<Basis> for Vec<Vector> {
    fn from(b: Basis) -> Self {
        b.0
    }
}

impl Basis {
    pub fn new(vectors: Vec<Vector>) -> Result<Self> {
        let m = IntMatrix::from_columns(&vectors)?;
        let d = m.det();
        if d.abs() != 1 {
            return Err(Error::NotABasis(format!("determinant {d}")));
        }
        Ok(Basis(vectors))
    }

    pub fn standard(n: usize) -> Self {
        Basis((0..n).map(|k| lattice::unit_vector(n, k)).collect())
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.0).expect("square")
    }

    /// New basis with `new[k] = old[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Basis {
        Basis(perm.iter().map(|&p| self.0[p].clone()).collect())
    }

    /// The vectors as a sorted list: identity of the object up to ordering.
    pub fn key(&self) -> Vec<Vector> {
        let mut k = self.0.clone();
        k.sort();
        k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanVerdict {
    pub is_cartan: bool,
    pub cartan_matrix: Option<IntMatrix>,
    pub is_finite_type: bool,
    pub reason: Option<String>,
}

impl CartanVerdict {
    fn not_cartan(reason: String) -> Self {
        CartanVerdict {
            is_cartan: false,
            cartan_matrix: None,
            is_finite_type: false,
            reason: Some(reason),
        }
    }
}

fn matrix_components(c: &IntMatrix) -> Vec<Vec<usize>> {
    let n = c.dim();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..n {
                if comp[j] == usize::MAX && (c.get(i, j) != 0 || c.get(j, i) != 0) {
                    comp[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort();
        out.push(members);
    }
    out
}

/// `D C` with minimal positive integer weights `D` making it symmetric, or
/// `None` if the generalized Cartan matrix is not symmetrizable.
pub fn symmetrize(c: &IntMatrix) -> Option<IntMatrix> {
    let n = c.dim();
    let mut w: Vec<Option<Ratio<i64>>> = vec![None; n];
    for comp in matrix_components(c) {
        w[comp[0]] = Some(Ratio::from_integer(1));
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i == j || (c.get(i, j) == 0 && c.get(j, i) == 0) {
                    continue;
                }
                if c.get(i, j) == 0 || c.get(j, i) == 0 {
                    return None;
                }
                // d_i c_ij = d_j c_ji
                let wj = w[i].unwrap() * Ratio::new(c.get(i, j), c.get(j, i));
                match w[j] {
                    Some(x) if x != wj => return None,
                    Some(_) => {}
                    None => {
                        w[j] = Some(wj);
                        stack.push(j);
                    }
                }
            }
        }
        // Scale the component to coprime positive integers.
        let lcm = comp
            .iter()
            .fold(1i64, |l, &i| num_integer::lcm(l, *w[i].unwrap().denom()));
        let ints: Vec<i64> = comp.iter().map(|&i| (w[i].unwrap() * lcm).to_integer()).collect();
        let g = ints.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        for (&i, x) in comp.iter().zip(ints) {
            w[i] = Some(Ratio::from_integer(x / g));
        }
    }
    let mut b = c.clone();
    for i in 0..n {
        let d = w[i].unwrap().to_integer();
        if d <= 0 {
            return None;
        }
        for j in 0..n {
            b.set(i, j, d * c.get(i, j));
        }
    }
    Some(b)
}

/// Finite type: symmetrizable and positive definite on every component.
pub fn cartan_is_finite_type(c: &IntMatrix) -> bool {
    let Some(b) = symmetrize(c) else {
        return false;
    };
    matrix_components(c).iter().all(|comp| {
        b.principal(comp).leading_minors().iter().all(|&m| m > 0)
    })
}

/// Affine type (connected): singular, with every proper principal
/// submatrix of finite type.
pub fn cartan_is_affine(c: &IntMatrix) -> bool {
    let n = c.dim();
    if matrix_components(c).len() != 1 || n < 2 {
        return false;
    }
    let Some(b) = symmetrize(c) else {
        return false;
    };
    if b.det() != 0 {
        return false;
    }
    (0..n).all(|skip| {
        let idx: Vec<usize> = (0..n).filter(|&k| k != skip).collect();
        cartan_is_finite_type(&c.principal(&idx))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(r: usize) -> GroupContext {
        GroupContext::new(r, 1).unwrap()
    }

    fn a2_chi() -> Bicharacter {
        let c = generic(1);
        let q = c.free_generator(0).unwrap();
        Bicharacter::new(c, vec![vec![q.clone(), q.inv()], vec![c.identity(), q]]).unwrap()
    }

    #[test]
    fn eval_basics() {
        let chi = a2_chi();
        let c = *chi.context();
        let q = c.free_generator(0).unwrap();
        assert_eq!(chi.eval(&[1, 0], &[0, 1]), q.inv());
        assert!(chi.eval(&[0, 0], &[3, -2]).is_one());
        assert_eq!(chi.eval(&[1, 1], &[1, 1]), q);
        assert_eq!(chi.sym(&[1, 0], &[1, 0]), chi.eval(&[1, 0], &[1, 0]).pow(2));
    }

    #[test]
    fn m_value_examples() {
        let c3 = GroupContext::torsion(3).unwrap();
        let z = c3.torsion_generator();
        // first branch m = 1 beats second branch m = 2; frozen from enumeration
        assert_eq!(m_value_labels(&z, &z.inv()), Some(1));
        assert_eq!(m_value_labels(&z, &c3.identity()), Some(0));

        let c = generic(2);
        let g1 = c.free_generator(0).unwrap();
        let g2 = c.free_generator(1).unwrap();
        assert_eq!(m_value_labels(&g1, &g2), None);
        assert_eq!(m_value_labels(&g1, &g1.pow(-3)), Some(3));
    }

    #[test]
    fn m_value_enumeration_oracle() {
        // Independent scan of the definition for every pair in mu_N.
        for n in 1..=12u64 {
            let c = GroupContext::torsion(n).unwrap();
            for a in 0..n as i64 {
                for b in 0..n as i64 {
                    let q = c.torsion_element(a);
                    let s = c.torsion_element(b);
                    let mut expected = None;
                    for m in 0..=(2 * n as i64) {
                        let first = q.pow(m).mul(&s).is_one();
                        let second = !q.is_one() && q.pow(m + 1).is_one();
                        if first || second {
                            expected = Some(m);
                            break;
                        }
                    }
                    assert_eq!(m_value_labels(&q, &s), expected, "N={n} q=z^{a} s=z^{b}");
                }
            }
        }
    }

    #[test]
    fn reflect_a2() {
        let chi = a2_chi();
        let e = Basis::standard(2);
        let f = chi.reflect_basis(&e, 0).unwrap();
        assert_eq!(f.vectors(), &[vec![-1, 0], vec![1, 1]]);
        assert_eq!(chi.reflect_basis(&f, 0).unwrap(), e);
    }

    #[test]
    fn undefined_reflection_reports_pair() {
        let c = generic(2);
        let g1 = c.free_generator(0).unwrap();
        let g2 = c.free_generator(1).unwrap();
        let chi =
            Bicharacter::new(c, vec![vec![g1.clone(), g2], vec![c.identity(), g1]]).unwrap();
        let err = chi.reflect_basis(&Basis::standard(2), 0).unwrap_err();
        assert_eq!(err, Error::UndefinedMValue { i: 0, j: 1 });
    }

    #[test]
    fn components() {
        let c = GroupContext::torsion(2).unwrap();
        let m = c.minus_one().unwrap();
        let one = c.identity();
        let chi = Bicharacter::new(
            c,
            vec![
                vec![m.clone(), m.clone(), one.clone()],
                vec![one.clone(), m.clone(), one.clone()],
                vec![one.clone(), one.clone(), m.clone()],
            ],
        )
        .unwrap();
        assert_eq!(chi.connected_components(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn cartan_verdicts() {
        let c = generic(1);
        let q = c.free_generator(0).unwrap();
        let one = c.identity();
        let a3 = Bicharacter::new(
            c,
            vec![
                vec![q.clone(), q.inv(), one.clone()],
                vec![one.clone(), q.clone(), q.inv()],
                vec![one.clone(), one.clone(), q.clone()],
            ],
        )
        .unwrap();
        let v = a3.cartan_verdict(&Basis::standard(3));
        assert!(v.is_cartan && v.is_finite_type);
        let expected =
            IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(v.cartan_matrix, Some(expected));

        let aff = Bicharacter::new(c, vec![vec![q.clone(), q.pow(-2)], vec![one.clone(), q.clone()]])
            .unwrap();
        let v = aff.cartan_verdict(&Basis::standard(2));
        assert!(v.is_cartan && !v.is_finite_type);
        let cm = v.cartan_matrix.unwrap();
        assert_eq!(cm, IntMatrix::from_rows(&[vec![2, -2], vec![-2, 2]]).unwrap());
        assert!(cartan_is_affine(&cm));

        let one_d = Bicharacter::new(c, vec![vec![q]]).unwrap();
        let v = one_d.cartan_verdict(&Basis::standard(1));
        assert!(v.is_finite_type);
    }

    #[test]
    fn rank2_finite_type_oracle() {
        // [[2,-a],[-b,2]] is finite iff ab <= 3 (with a = 0 <=> b = 0).
        for a in 0..6 {
            for b in 0..6 {
                if (a == 0) != (b == 0) {
                    continue;
                }
                let c = IntMatrix::from_rows(&[vec![2, -a], vec![-b, 2]]).unwrap();
                assert_eq!(cartan_is_finite_type(&c), a * b <= 3, "a={a} b={b}");
                assert_eq!(cartan_is_affine(&c), a * b == 4, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn rank3_finite_types() {
        let m = |r: &[[i64; 3]; 3]| {
            IntMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
        };
        // A3, B3, C3 finite; affine A2 (triangle), G2~ style chains not.
        assert!(cartan_is_finite_type(&m(&[[2, -1, 0], [-1, 2, -1], [0, -1, 2]])));
        assert!(cartan_is_finite_type(&m(&[[2, -1, 0], [-1, 2, -2], [0, -1, 2]])));
        assert!(cartan_is_finite_type(&m(&[[2, -1, 0], [-1, 2, -1], [0, -2, 2]])));
        let a2_aff = m(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]);
        assert!(!cartan_is_finite_type(&a2_aff));
        assert!(cartan_is_affine(&a2_aff));
        assert!(!cartan_is_finite_type(&m(&[[2, -1, 0], [-1, 2, -3], [0, -1, 2]])));
        // non-symmetrizable cycle
        assert!(symmetrize(&m(&[[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])).is_none());
    }

    #[test]
    fn basis_validation() {
        assert!(Basis::new(vec![vec![1, 0], vec![1, 2]]).is_err());
        assert!(Basis::new(vec![vec![1, 1], vec![0, 1]]).is_ok());
    }
}
