//! Restriction of a finite root system to the span `H` of chosen roots:
//! `Delta ∩ H`, the basis `E_H`, and the restricted bicharacter.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bicharacter::{Basis, Bicharacter};
use crate::error::{Error, Result};
use crate::groupoid::{explore, positive_roots, Caps, ExplorationResult, Verdict};
use crate::lattice::{self, Vector};

/// How `E_H` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EhMethod {
    /// Positive roots in `H` that are not a sum of two such roots.
    Indecomposables,
    /// Basis of an object on which a generic functional is positive.
    Functional,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subsystem {
    pub span: Vec<Vector>,
    /// Integer basis of the orthogonal complement of `H`.
    pub normals: Vec<Vector>,
    /// `Z`-basis of `Gamma = span_R(Delta ∩ H) ∩ Z^n`.
    pub gamma_basis: Vec<Vector>,
    pub roots_in_h: Vec<Vector>,
    pub positive_in_h: Vec<Vector>,
    /// Sorted.
    pub e_h: Vec<Vector>,
    pub method: EhMethod,
    /// Whether `E_H` is also a `Z`-basis of `Gamma`.
    pub e_h_spans_gamma: bool,
    #[serde(skip)]
    pub restricted: Option<Bicharacter>,
    /// The restricted triple explored to a finite system whose roots, mapped
    /// back through `E_H`, are exactly `Delta ∩ H`.
    pub closure_ok: bool,
}

impl Subsystem {
    pub fn restricted_chi(&self) -> &Bicharacter {
        self.restricted.as_ref().expect("set by restrict")
    }
}

fn check_inputs(parent: &ExplorationResult, f: &[Vector]) -> Result<usize> {
    if !parent.is_finite() {
        return Err(Error::Precondition("parent system is not finite".into()));
    }
    let n = parent.objects[0].basis.rank();
    if f.is_empty() {
        return Err(Error::Precondition("need at least one root".into()));
    }
    for v in f {
        if v.len() != n {
            return Err(Error::Dimension(format!("{v:?} has length {}, rank is {n}", v.len())));
        }
        if !parent.contains_root(v) {
            return Err(Error::Precondition(format!("{v:?} is not a root")));
        }
    }
    if lattice::rank(f) != f.len() {
        return Err(Error::Precondition("roots are linearly dependent".into()));
    }
    Ok(n)
}

fn in_h(normals: &[Vector], v: &[i64]) -> bool {
    normals.iter().all(|p| lattice::dot(p, v) == 0)
}

/// `E_H` by the simple-root characterization, if the sandwich holds.
fn indecomposables(positive_in_h: &[Vector], l: usize) -> Option<Vec<Vector>> {
    let set: std::collections::HashSet<&Vector> = positive_in_h.iter().collect();
    let cand: Vec<Vector> = positive_in_h
        .iter()
        .filter(|b| {
            !positive_in_h
                .iter()
                .any(|a| set.contains(&lattice::sub(b, a)))
        })
        .cloned()
        .collect();
    (cand.len() == l && sandwich_holds(&cand, positive_in_h)).then_some(cand)
}

/// Every element of `pos` is a nonnegative integer combination of `e_h`.
pub fn sandwich_holds(e_h: &[Vector], pos: &[Vector]) -> bool {
    e_h.iter().all(|e| pos.contains(e))
        && lattice::rank(e_h) == e_h.len()
        && pos.iter().all(|b| {
            lattice::solve_integer(e_h, b).is_some_and(|c| c.iter().all(|&x| x >= 0))
        })
}

/// The functional method: `phi = M alpha + (1, ..., 1)` with `alpha ⊥ H`
/// generic and `M` large enough that the sign of `phi` on roots outside `H`
/// is that of `alpha`. The object on which `phi` is positive contains `E_H`.
fn functional_basis(parent: &ExplorationResult, normals: &[Vector], l: usize) -> Result<Vec<Vector>> {
    let n = parent.objects[0].basis.rank();
    let outside: Vec<&Vector> = parent.roots.iter().filter(|r| !in_h(normals, r)).collect();
    let maxsum = parent
        .roots
        .iter()
        .map(|r| r.iter().sum::<i64>().abs())
        .max()
        .unwrap_or(0);
    let mut alpha = None;
    'search: for seed in 1..=64i64 {
        let mut a = vec![0i64; n];
        let mut c = 1i64;
        for p in normals {
            a = lattice::add(&a, &lattice::scale(p, c));
            c = c * (seed + 1) + 1;
        }
        if outside.iter().all(|r| lattice::dot(&a, r) != 0) {
            alpha = Some(a);
            break 'search;
        }
    }
    let alpha = alpha.ok_or_else(|| Error::Precondition("no generic functional found".into()))?;
    let mu = outside
        .iter()
        .map(|r| lattice::dot(&alpha, r).abs())
        .min()
        .unwrap_or(1);
    let big_m = 2 * maxsum / mu + 1;
    let phi: Vector = alpha.iter().map(|a| big_m * a + 1).collect();
    for o in &parent.objects {
        if o.basis.vectors().iter().all(|f| lattice::dot(&phi, f) > 0) {
            let e_h: Vec<Vector> = o
                .basis
                .vectors()
                .iter()
                .filter(|f| in_h(normals, f))
                .cloned()
                .collect();
            if e_h.len() == l {
                return Ok(e_h);
            }
        }
    }
    Err(Error::Precondition("no object is positive on the functional".into()))
}

pub fn restrict(chi: &Bicharacter, parent: &ExplorationResult, f: &[Vector], caps: &Caps) -> Result<Subsystem> {
    let n = check_inputs(parent, f)?;
    let l = f.len();
    let normals = lattice::integer_kernel(f, n);
    let gamma_basis = lattice::integer_kernel(&normals, n);
    let roots_in_h: Vec<Vector> = parent.roots.iter().filter(|r| in_h(&normals, r)).cloned().collect();
    let positive: Vec<Vector> = positive_roots(parent, &Basis::standard(n))?;
    let positive_in_h: Vec<Vector> = positive.into_iter().filter(|r| in_h(&normals, r)).collect();

    let (mut e_h, method) = match indecomposables(&positive_in_h, l) {
        Some(e) => (e, EhMethod::Indecomposables),
        None => (functional_basis(parent, &normals, l)?, EhMethod::Functional),
    };
    e_h.sort();
    if !sandwich_holds(&e_h, &positive_in_h) {
        return Err(Error::Precondition(format!("no basis E_H found for span {f:?}")));
    }
    let e_h_spans_gamma = gamma_basis
        .iter()
        .all(|g| lattice::solve_integer(&e_h, g).is_some());

    let restricted = chi.restricted(&e_h);
    let sub = explore(&restricted, caps);
    let closure_ok = sub.verdict == Verdict::Finite && {
        let mut mapped: Vec<Vector> = sub
            .roots
            .iter()
            .map(|c| {
                (0..n)
                    .map(|k| (0..l).map(|i| c[i] * e_h[i][k]).sum())
                    .collect()
            })
            .collect();
        mapped.sort();
        mapped == roots_in_h
    };

    Ok(Subsystem {
        span: f.to_vec(),
        normals,
        gamma_basis,
        roots_in_h,
        positive_in_h,
        e_h,
        method,
        e_h_spans_gamma,
        restricted: Some(restricted),
        closure_ok,
    })
}

/// `k alpha` for some `k >= 1` and root `alpha`.
fn in_n_delta(parent: &ExplorationResult, v: &[i64]) -> bool {
    if lattice::is_zero(v) {
        return false;
    }
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    (1..=g).filter(|k| g % k == 0).any(|k| {
        let a: Vector = v.iter().map(|x| x / k).collect();
        parent.contains_root(&a)
    })
}

/// Scan of the condition `f_i - sum_{j>i} m_j f_j ∉ N·Delta` for all
/// nonzero `m` with coordinates up to the largest root coordinate.
pub fn check_lbasis_scan(parent: &ExplorationResult, f: &[Vector]) -> Result<bool> {
    check_inputs(parent, f)?;
    let l = f.len();
    let bound = parent.roots.iter().map(|r| lattice::inf_norm(r)).max().unwrap_or(1);
    for i in 0..l.saturating_sub(1) {
        let k = l - i - 1;
        let mut m = vec![0i64; k];
        loop {
            // next m in [0, bound]^k, skipping zero
            let mut pos = 0;
            while pos < k && m[pos] == bound {
                m[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
            m[pos] += 1;
            let mut v = f[i].clone();
            for (t, &mj) in m.iter().enumerate() {
                v = lattice::sub(&v, &lattice::scale(&f[i + 1 + t], mj));
            }
            if in_n_delta(parent, &v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Delta ∩ H ⊂ R+ span(f) ∪ -R+ span(f)`, tested directly.
pub fn check_lbasis_direct(parent: &ExplorationResult, f: &[Vector]) -> Result<bool> {
    let n = check_inputs(parent, f)?;
    let normals = lattice::integer_kernel(f, n);
    let zero = num_rational::Ratio::from_integer(0);
    Ok(parent.roots.iter().filter(|r| in_h(&normals, r)).all(|r| {
        let c = lattice::solve_rational(f, r).expect("root lies in the span");
        c.iter().all(|x| *x >= zero) || c.iter().all(|x| *x <= zero)
    }))
}

/// The linear-independence criterion; errors if the scan and the direct
/// half-space test disagree.
pub fn check_lbasis(parent: &ExplorationResult, f: &[Vector]) -> Result<bool> {
    let scan = check_lbasis_scan(parent, f)?;
    let direct = check_lbasis_direct(parent, f)?;
    if scan != direct {
        return Err(Error::Precondition(format!(
            "criterion scan ({scan}) disagrees with the half-space test ({direct}) for {f:?}"
        )));
    }
    Ok(scan)
}
