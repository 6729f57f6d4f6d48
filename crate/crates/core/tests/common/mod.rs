//! Checks shared by the property suite and the acceptance report. Each check
//! returns a one-line summary on success and the first few offenders on
//! failure.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use arsys_core::bicharacter::Basis;
use arsys_core::catalog::{self, Catalog};
use arsys_core::coxeter::{coxeter_relators, enumerate_cosets};
use arsys_core::equivalence::{finiteness_criterion, Criterion};
use arsys_core::groupoid::{explore, positive_roots, Caps, ExplorationResult, Verdict};
use arsys_core::lattice::{self, IntMatrix, Vector};
use arsys_core::subsystems::{check_lbasis_direct, check_lbasis_scan, restrict, sandwich_holds};
use arsys_core::{solve_min_exponent, Bicharacter, DynkinDiagram, GroupContext, GroupElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Check = Result<String, String>;

pub struct Case {
    pub label: String,
    pub table: u8,
    pub chi: Bicharacter,
    pub res: ExplorationResult,
}

/// Every template of every catalog row at every instance, explored once.
pub fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let catalog = Catalog::builtin();
        let mut todo = Vec::new();
        for e in catalog.entries() {
            for inst in e.instances() {
                for t in 0..e.templates.len() {
                    let chi = e
                        .instantiate(t, &inst.assignment)
                        .unwrap_or_else(|err| panic!("{} template {}: {err}", e.label(), t + 1));
                    let label = format!("{} template {} [{}] {}", e.label(), t + 1, inst.tag, inst.assignment);
                    todo.push((label, e.table, chi));
                }
            }
        }
        let caps = Caps::default();
        todo.into_par_iter()
            .map(|(label, table, chi)| {
                let res = explore(&chi, &caps);
                Case { label, table, chi, res }
            })
            .collect()
    })
}

fn finite_cases() -> impl Iterator<Item = &'static Case> {
    cases().iter().filter(|c| c.res.is_finite())
}

fn report(what: &str, checked: usize, bad: Vec<String>) -> Check {
    if bad.is_empty() {
        Ok(format!("{what}: {checked} checked"))
    } else {
        let shown: Vec<&String> = bad.iter().take(5).collect();
        Err(format!("{what}: {} of {checked} failed, e.g. {shown:?}", bad.len()))
    }
}

pub fn root_multiples() -> Check {
    let mut bad = Vec::new();
    let mut n = 0;
    for c in finite_cases() {
        let bound = c.res.roots.iter().map(|r| lattice::inf_norm(r)).max().unwrap_or(0);
        for r in &c.res.roots {
            n += 1;
            if !c.res.contains_root(&lattice::neg(r)) {
                bad.push(format!("{}: -{r:?} missing", c.label));
            }
            for k in 2..=bound.max(2) {
                for s in [k, -k] {
                    if c.res.contains_root(&lattice::scale(r, s)) {
                        bad.push(format!("{}: {s}*{r:?} is a root", c.label));
                    }
                }
            }
        }
    }
    report("root multiples", n, bad)
}

/// Coordinates with respect to every object are sign-uniform, and the
/// positive part together with its negative is all of `Delta`.
pub fn positive_negative_split() -> Check {
    let mut bad = Vec::new();
    let mut n = 0;
    for c in finite_cases() {
        let half = c.res.roots.len() / 2;
        for o in &c.res.objects {
            n += 1;
            let inv = o.basis.matrix().inverse_unimodular().expect("objects are bases");
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            for r in &c.res.roots {
                let co = inv.mul_vec(r);
                if co.iter().all(|&x| x >= 0) {
                    pos.insert(r.clone());
                } else if co.iter().all(|&x| x <= 0) {
                    neg.insert(r.clone());
                } else {
                    bad.push(format!("{}: {r:?} mixed at {:?}", c.label, o.basis.vectors()));
                }
            }
            let negated: BTreeSet<Vector> = pos.iter().map(|r| lattice::neg(r)).collect();
            let lib: BTreeSet<Vector> = positive_roots(&c.res, &o.basis)
                .map(|v| v.into_iter().collect())
                .unwrap_or_default();
            if negated != neg || pos.len() != half || lib != pos {
                bad.push(format!("{}: split fails at {:?}", c.label, o.basis.vectors()));
            }
        }
    }
    report("Delta = Delta+ u -Delta+", n, bad)
}

pub fn reflection_involution() -> Check {
    let mut bad = Vec::new();
    let mut n = 0;
    for c in finite_cases() {
        for o in &c.res.objects {
            for i in 0..o.basis.rank() {
                n += 1;
                let once = c.chi.reflect_basis(&o.basis, i).expect("full");
                let twice = c.chi.reflect_basis(&once, i).expect("full");
                let d = o.diagram.reflect(i).and_then(|d| d.reflect(i));
                if twice != o.basis || d.as_ref() != Ok(&o.diagram) {
                    bad.push(format!("{}: vertex {} at {:?}", c.label, i + 1, o.basis.vectors()));
                }
            }
        }
    }
    report("reflection involution", n, bad)
}

fn random_element(rng: &mut ChaCha8Rng, ctx: &GroupContext) -> GroupElement {
    let free = (0..ctx.free_rank()).map(|_| rng.gen_range(-2..=2)).collect();
    let tor = rng.gen_range(0..ctx.torsion_order() as i64);
    ctx.element(free, tor).unwrap()
}

/// Diagram-level reflection against recomputing the diagram of the
/// reflected basis from the bicharacter, along random reflection walks.
pub fn reflect_diagram_random(instances: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let (mut done, mut steps, mut attempts) = (0, 0, 0);
    while done < instances && attempts < 100 * instances {
        attempts += 1;
        let ctx = GroupContext::new(rng.gen_range(0..=1), rng.gen_range(1..=12)).unwrap();
        let n = rng.gen_range(2..=3);
        let q: Vec<Vec<GroupElement>> =
            (0..n).map(|_| (0..n).map(|_| random_element(&mut rng, &ctx)).collect()).collect();
        let chi = Bicharacter::new(ctx, q).unwrap();
        let mut basis = Basis::standard(n);
        let mut d = chi.diagram(&basis);
        if !(0..n).any(|i| d.is_reflectable(i)) {
            continue;
        }
        done += 1;
        for _ in 0..4 {
            let i = rng.gen_range(0..n);
            steps += 1;
            match (d.reflect(i), chi.reflect_basis(&basis, i)) {
                (Ok(dd), Ok(b)) => {
                    let direct = chi.diagram(&b);
                    if dd != direct {
                        bad.push(format!("{chi:?} vertex {}: {} vs {}", i + 1, dd.render(), direct.render()));
                        break;
                    }
                    d = dd;
                    basis = b;
                }
                (Err(_), Err(_)) => {}
                (a, b) => {
                    bad.push(format!("{chi:?} vertex {}: definedness {} vs {}", i + 1, a.is_ok(), b.is_ok()));
                    break;
                }
            }
        }
    }
    if done < instances {
        bad.push(format!("only {done} usable instances"));
    }
    report(&format!("reflect_diagram vs direct ({done} instances, {steps} steps)"), steps, bad)
}

pub fn triangle_lemma() -> Check {
    let mut bad = Vec::new();
    let mut n = 0;
    for c in finite_cases().filter(|c| c.chi.rank() == 3) {
        for o in &c.res.objects {
            n += 1;
            if !catalog::triangle_condition(&o.diagram) {
                bad.push(format!("{}: {}", c.label, o.diagram.render()));
            }
        }
    }
    report("triangle condition on rank-3 objects", n, bad)
}

fn two_subsets<T: Clone>(v: &[T]) -> Vec<[T; 2]> {
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push([v[i].clone(), v[j].clone()]);
        }
    }
    out
}

/// For every independent pair of roots: `E_H` satisfies the sandwich, it is
/// the only 2-subset of `Delta+ ∩ H` that does, pairs with the same span give
/// the same `E_H`, and the restricted triple reproduces `Delta ∩ H`.
pub fn subsystem_sandwich() -> Check {
    let caps = Caps::default();
    let per_case: Vec<(usize, Vec<String>)> = cases()
        .par_iter()
        .filter(|c| c.table == 2 && c.res.is_finite())
        .map(|c| {
            let mut bad = Vec::new();
            let mut n = 0;
            let mut by_span: HashMap<Vec<Vector>, Vec<Vector>> = HashMap::new();
            for pair in two_subsets(&c.res.roots) {
                if lattice::rank(&pair) < 2 {
                    continue;
                }
                n += 1;
                let sub = match restrict(&c.chi, &c.res, &pair, &caps) {
                    Ok(s) => s,
                    Err(e) => {
                        bad.push(format!("{}: {pair:?}: {e}", c.label));
                        continue;
                    }
                };
                let fitting = two_subsets(&sub.positive_in_h)
                    .into_iter()
                    .filter(|s| sandwich_holds(s, &sub.positive_in_h))
                    .count();
                if !sandwich_holds(&sub.e_h, &sub.positive_in_h) || fitting != 1 || !sub.closure_ok {
                    bad.push(format!(
                        "{}: {pair:?}: fitting={fitting} closure={}",
                        c.label, sub.closure_ok
                    ));
                }
                let prev = by_span.entry(sub.normals.clone()).or_insert_with(|| sub.e_h.clone());
                if *prev != sub.e_h {
                    bad.push(format!("{}: span of {pair:?} gives two bases", c.label));
                }
            }
            (n, bad)
        })
        .collect();
    let n = per_case.iter().map(|p| p.0).sum();
    report("subsystem sandwich + uniqueness", n, per_case.into_iter().flat_map(|p| p.1).collect())
}

fn diagram_of(ctx: &GroupContext, vertices: &[i64], edges: &[(usize, usize, i64)]) -> Bicharacter {
    let v = vertices.iter().map(|&t| ctx.torsion_element(t)).collect();
    let e: Vec<(usize, usize, GroupElement)> = edges.iter().map(|&(i, j, t)| (i, j, ctx.torsion_element(t))).collect();
    DynkinDiagram::from_edge_list(*ctx, v, &e).unwrap().to_bicharacter()
}

/// Cases outside the catalog where neither side may claim finiteness.
pub fn negative_cases() -> Vec<(String, Bicharacter, bool)> {
    let free = GroupContext::new(1, 1).unwrap();
    let q = free.free_generator(0).unwrap();
    let affine = DynkinDiagram::from_edge_list(free, vec![q.clone(), q.clone()], &[(0, 1, q.pow(-2))])
        .unwrap()
        .to_bicharacter();
    let mu2 = GroupContext::torsion(2).unwrap();
    let triangle = diagram_of(&mu2, &[1, 1, 1], &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
    let not_full = DynkinDiagram::from_edge_list(free, vec![free.identity(), q.clone()], &[(0, 1, q.clone())])
        .unwrap()
        .to_bicharacter();
    vec![
        ("affine A1".into(), affine, false),
        ("all -1 triangle".into(), triangle, false),
        ("vertex 1 on an edge".into(), not_full, true),
    ]
}

/// `explore` is Finite exactly when the diagram graph and `W^B` are finite.
pub fn finiteness_agreement() -> Check {
    let caps = Caps::default();
    let mut bad: Vec<String> = cases()
        .par_iter()
        .filter_map(|c| {
            let crit = finiteness_criterion(&c.chi, &caps);
            let agree = matches!(
                (&c.res.verdict, crit),
                (Verdict::Finite, Criterion::Finite)
                    | (Verdict::NotFull { .. }, Criterion::NotFull)
                    | (Verdict::Exceeded { .. }, Criterion::Indeterminate)
            );
            (!agree).then(|| format!("{}: {:?} vs {crit:?}", c.label, c.res.verdict))
        })
        .collect();
    let small = Caps::new(5_000, 40, 64).unwrap();
    let negs = negative_cases();
    for (name, chi, not_full) in &negs {
        let v = explore(chi, &small).verdict;
        let crit = finiteness_criterion(chi, &small);
        let ok = if *not_full {
            matches!(v, Verdict::NotFull { .. }) && crit == Criterion::NotFull
        } else {
            matches!(v, Verdict::Exceeded { .. }) && crit == Criterion::Indeterminate
        };
        if !ok {
            bad.push(format!("{name}: {v:?} vs {crit:?}"));
        }
    }
    report("finiteness criterion vs explore", cases().len() + negs.len(), bad)
}

/// The half-space test against the bounded scan, on all 1- and 2-element
/// root families of the rank-3 instances.
pub fn lbasis_agreement() -> Check {
    let per_case: Vec<(usize, Vec<String>)> = cases()
        .par_iter()
        .filter(|c| c.table == 2 && c.res.is_finite())
        .map(|c| {
            let mut fams: Vec<Vec<Vector>> = c.res.roots.iter().map(|r| vec![r.clone()]).collect();
            for i in 0..c.res.roots.len() {
                for j in 0..c.res.roots.len() {
                    let f = vec![c.res.roots[i].clone(), c.res.roots[j].clone()];
                    if i != j && lattice::rank(&f) == 2 {
                        fams.push(f);
                    }
                }
            }
            let bad = fams
                .iter()
                .filter(|f| check_lbasis_scan(&c.res, f).unwrap() != check_lbasis_direct(&c.res, f).unwrap())
                .map(|f| format!("{}: {f:?}", c.label))
                .collect();
            (fams.len(), bad)
        })
        .collect();
    let n = per_case.iter().map(|p| p.0).sum();
    report("l-basis scan vs direct", n, per_case.into_iter().flat_map(|p| p.1).collect())
}

/// `e_j + m e_i` is a root exactly for `0 <= m <= m(e_i, e_j)`, at every
/// object. Also counts the objects at which the other index placement,
/// "`e_i + m e_j` is a root iff `m(e_i, e_j) <= m`", fails.
pub fn root_strings() -> (Check, usize) {
    let mut bad = Vec::new();
    let (mut n, mut literal_violations) = (0, 0);
    for c in finite_cases() {
        let bound = c.res.roots.iter().map(|r| lattice::inf_norm(r)).max().unwrap_or(0) + 1;
        for o in &c.res.objects {
            let f = o.basis.vectors();
            let mut literal_ok = true;
            for i in 0..f.len() {
                for j in 0..f.len() {
                    if i == j {
                        continue;
                    }
                    n += 1;
                    let mij = o.diagram.m_value(i, j).expect("full");
                    for m in 0..=bound {
                        let v = lattice::add(&f[j], &lattice::scale(&f[i], m));
                        if c.res.contains_root(&v) != (m <= mij) {
                            bad.push(format!("{}: f{} + {m} f{} at {f:?}", c.label, j + 1, i + 1));
                        }
                        let w = lattice::add(&f[i], &lattice::scale(&f[j], m));
                        if c.res.contains_root(&w) != (mij <= m) {
                            literal_ok = false;
                        }
                    }
                }
            }
            if !literal_ok {
                literal_violations += 1;
            }
        }
    }
    (report("root strings e_j + m e_i", n, bad), literal_violations)
}

pub fn min_exponent_oracle(max_n: u64) -> Check {
    let mut bad = Vec::new();
    let mut n = 0;
    for order in 1..=max_n {
        let ctx = GroupContext::torsion(order).unwrap();
        for a in 0..order as i64 {
            for b in 0..order as i64 {
                n += 1;
                let (q, p) = (ctx.torsion_element(a), ctx.torsion_element(b));
                let brute = (0..order).find(|&m| (a * m as i64 + b).rem_euclid(order as i64) == 0);
                let got = solve_min_exponent(&q, &p).unwrap();
                if got != brute {
                    bad.push(format!("N={order} q=z^{a} p=z^{b}: {got:?} vs {brute:?}"));
                }
            }
        }
    }
    report(&format!("solve_min_exponent vs scan, N <= {max_n}"), n, bad)
}

/// Positive roots of a Cartan matrix by closing the simple roots under the
/// simple reflections `s_i(v) = v - <v, a_i> e_i`.
pub fn classical_positive_roots(cartan: &[Vec<i64>]) -> BTreeSet<Vector> {
    let n = cartan.len();
    let mut seen: BTreeSet<Vector> = (0..n).map(|i| lattice::unit_vector(n, i)).collect();
    let mut queue: Vec<Vector> = seen.iter().cloned().collect();
    while let Some(v) = queue.pop() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| v[j] * cartan[i][j]).sum();
            let mut w = v.clone();
            w[i] -= pairing;
            if seen.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect()
}

pub fn row1_matches_a3() -> Check {
    let catalog = Catalog::builtin();
    let e = catalog.entry(2, 1).ok_or("no Table 2 row 1")?;
    let a = e.generic_assignments().into_iter().next().ok_or("no generic instance")?;
    let chi = e.instantiate(0, &a).map_err(|x| x.to_string())?;
    let res = explore(&chi, &Caps::default());
    let got: BTreeSet<Vector> = positive_roots(&res, &Basis::standard(3))
        .map_err(|x| x.to_string())?
        .into_iter()
        .collect();
    let a3 = classical_positive_roots(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
    if got == a3 && a3.len() == 6 {
        Ok(format!("row 1 positive roots = A3 oracle ({} roots)", got.len()))
    } else {
        Err(format!("row 1 positive roots {got:?} vs A3 {a3:?}"))
    }
}

/// Orders of the `W^B` symbols by coset enumeration of their Coxeter
/// presentations (`Z2x[m]`: a central involution times the dihedral group).
pub fn symbol_order_by_cosets(symbol: &str) -> Option<usize> {
    let m: Vec<Vec<usize>> = match symbol {
        "[3,4]" => vec![vec![1, 3, 2], vec![3, 1, 4], vec![2, 4, 1]],
        "Z2^3" => vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]],
        s if s.starts_with("Z2x[") => {
            let k: usize = s.trim_start_matches("Z2x[").trim_end_matches(']').parse().ok()?;
            vec![vec![1, k, 2], vec![k, 1, 2], vec![2, 2, 1]]
        }
        s if s.starts_with('[') => {
            let k: usize = s.trim_matches(|c| c == '[' || c == ']').parse().ok()?;
            vec![vec![1, k], vec![k, 1]]
        }
        _ => return None,
    };
    Some(enumerate_cosets(m.len(), &coxeter_relators(&m), 10_000).ok()?.len())
}

/// Frozen from `symbol_order_by_cosets`.
pub const WB_ORDERS: [(&str, usize); 6] =
    [("[3,4]", 48), ("Z2x[6]", 24), ("Z2x[4]", 16), ("Z2x[3]", 12), ("[6]", 12), ("Z2^3", 8)];

/// Row orders quoted for the `W^B` column.
pub const ROW_ORDERS: [(u32, usize); 11] = [
    (8, 8),
    (9, 8),
    (17, 8),
    (4, 12),
    (16, 12),
    (5, 16),
    (6, 16),
    (10, 16),
    (14, 16),
    (7, 24),
    (15, 24),
];

/// Every connected-or-not diagram of rank `<= 3` over `mu_n` (labels may
/// be 1), up to relabeling, of Cartan type at the standard basis.
pub fn cartan_type_diagrams(n: u64) -> Vec<(Bicharacter, IntMatrix)> {
    let ctx = GroupContext::torsion(n).unwrap();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let nn = n as i64;
    for rank in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..rank).flat_map(|i| (i + 1..rank).map(move |j| (i, j))).collect();
        let total = nn.pow((rank + pairs.len()) as u32);
        for code in 0..total {
            let mut c = code;
            let mut digit = || {
                let d = c % nn;
                c /= nn;
                d
            };
            let v: Vec<i64> = (0..rank).map(|_| digit()).collect();
            let e: Vec<(usize, usize, i64)> = pairs.iter().map(|&(i, j)| (i, j, digit())).collect();
            let vs = v.iter().map(|&t| ctx.torsion_element(t)).collect();
            let es: Vec<(usize, usize, GroupElement)> =
                e.iter().map(|&(i, j, t)| (i, j, ctx.torsion_element(t))).collect();
            let d = DynkinDiagram::from_edge_list(ctx, vs, &es).unwrap();
            if !seen.insert(d.canonical()) {
                continue;
            }
            let chi = d.to_bicharacter();
            let verdict = chi.cartan_verdict(&Basis::standard(rank));
            if let Some(cm) = verdict.cartan_matrix.filter(|_| verdict.is_cartan) {
                out.push((chi, cm));
            }
        }
    }
    out
}

pub struct CartanSweep {
    pub instances: usize,
    pub finite_type: usize,
    pub mismatches: Vec<String>,
    pub slowest_non_finite: Duration,
}

pub fn cartan_sweep(max_n: u64) -> CartanSweep {
    let caps = Caps::default();
    let all: Vec<(Bicharacter, IntMatrix)> = (1..=max_n).flat_map(cartan_type_diagrams).collect();
    let results: Vec<(bool, Option<String>, Duration)> = all
        .par_iter()
        .map(|(chi, cm)| {
            let finite_type = arsys_core::bicharacter::cartan_is_finite_type(cm);
            let t = Instant::now();
            let v = explore(chi, &caps).verdict;
            let dt = t.elapsed();
            let ok = match v {
                Verdict::Finite => finite_type,
                Verdict::Exceeded { .. } => !finite_type,
                Verdict::NotFull { .. } => false,
            };
            let msg = (!ok).then(|| format!("{} (N = {}): {v:?}", chi.standard_diagram().render(), chi.context().torsion_order()));
            (finite_type, msg, if finite_type { Duration::ZERO } else { dt })
        })
        .collect();
    CartanSweep {
        instances: all.len(),
        finite_type: results.iter().filter(|r| r.0).count(),
        mismatches: results.iter().filter_map(|r| r.1.clone()).collect(),
        slowest_non_finite: results.iter().map(|r| r.2).max().unwrap_or_default(),
    }
}

/// Reference orders of the fixture agree with coset enumeration.
pub fn wb_fixture() -> Check {
    let bad: Vec<String> = WB_ORDERS
        .iter()
        .filter(|(s, o)| symbol_order_by_cosets(s) != Some(*o))
        .map(|(s, o)| format!("{s}: fixture {o}, cosets {:?}", symbol_order_by_cosets(s)))
        .collect();
    report("W^B order fixture vs coset enumeration", WB_ORDERS.len(), bad)
}

pub fn fixture_order(symbol: &str) -> Option<usize> {
    WB_ORDERS.iter().find(|(s, _)| *s == symbol).map(|p| p.1)
}
