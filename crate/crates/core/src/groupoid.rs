//! Breadth-first exploration of the Weyl groupoid `W_{chi,E}` from the
//! standard basis, with fullness/finiteness verdicts and root sets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bicharacter::{Basis, Bicharacter};
use crate::diagram::DynkinDiagram;
use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_objects: usize,
    pub max_root_norm: i64,
    pub max_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 100_000,
            max_root_norm: 60,
            max_depth: 64,
        }
    }
}

impl Caps {
    pub fn new(max_objects: usize, max_root_norm: i64, max_depth: usize) -> Result<Self> {
        if max_objects == 0 || max_root_norm < 1 || max_depth == 0 {
            return Err(Error::Precondition("caps must be positive".into()));
        }
        Ok(Caps {
            max_objects,
            max_root_norm,
            max_depth,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapKind {
    MaxObjects,
    MaxRootNorm,
    MaxDepth,
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapKind::MaxObjects => "max_objects",
            CapKind::MaxRootNorm => "max_root_norm",
            CapKind::MaxDepth => "max_depth",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Finite,
    /// Reflection at vertex `i` of object `object` is undefined because
    /// `m(f_i, f_j)` is.
    NotFull { object: usize, i: usize, j: usize },
    Exceeded { cap: CapKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidObject {
    pub basis: Basis,
    pub diagram: DynkinDiagram,
    pub depth: usize,
}

impl GroupoidObject {
    /// `T` with `T(E) = F`: the columns are the basis vectors.
    pub fn transform(&self) -> IntMatrix {
        self.basis.matrix()
    }
}

#[derive(Debug, Clone)]
pub struct ExplorationResult {
    pub verdict: Verdict,
    pub objects: Vec<GroupoidObject>,
    /// Sorted `Delta`; empty unless the verdict is `Finite`.
    pub roots: Vec<Vector>,
    index: HashMap<Vec<Vector>, usize>,
}

impl ExplorationResult {
    pub fn is_finite(&self) -> bool {
        self.verdict == Verdict::Finite
    }

    /// Index of the object whose basis is `f` as a set.
    pub fn find_object(&self, f: &Basis) -> Option<usize> {
        self.index.get(&f.key()).copied()
    }

    pub fn contains_root(&self, v: &[i64]) -> bool {
        self.roots.binary_search_by(|r| r.as_slice().cmp(v)).is_ok()
    }
}

/// BFS over objects, level by level; each level is processed in the order of
/// its sorted basis keys, so runs are reproducible.
pub fn explore(chi: &Bicharacter, caps: &Caps) -> ExplorationResult {
    let n = chi.rank();
    let start = Basis::standard(n);
    let mut objects = vec![make_object(chi, start.clone(), 0)];
    let mut index = HashMap::from([(start.key(), 0usize)]);
    let mut level = vec![0usize];
    let mut depth = 0;

    let finish = |verdict: Verdict, objects: Vec<GroupoidObject>, index| {
        let roots = if verdict == Verdict::Finite {
            collect_roots(&objects)
        } else {
            Vec::new()
        };
        ExplorationResult {
            verdict,
            objects,
            roots,
            index,
        }
    };

    while !level.is_empty() {
        let mut next: Vec<usize> = Vec::new();
        for &k in &level {
            for i in 0..n {
                let f = match chi.reflect_basis(&objects[k].basis, i) {
                    Ok(f) => f,
                    Err(Error::UndefinedMValue { i, j }) => {
                        return finish(Verdict::NotFull { object: k, i, j }, objects, index);
                    }
                    Err(e) => panic!("unexpected reflection failure: {e}"),
                };
                let key = f.key();
                if index.contains_key(&key) {
                    continue;
                }
                if f.vectors().iter().any(|v| lattice::inf_norm(v) > caps.max_root_norm) {
                    return finish(
                        Verdict::Exceeded {
                            cap: CapKind::MaxRootNorm,
                        },
                        objects,
                        index,
                    );
                }
                if objects.len() >= caps.max_objects {
                    return finish(
                        Verdict::Exceeded {
                            cap: CapKind::MaxObjects,
                        },
                        objects,
                        index,
                    );
                }
                index.insert(key, objects.len());
                next.push(objects.len());
                objects.push(make_object(chi, f, depth + 1));
            }
        }
        if !next.is_empty() && depth + 1 > caps.max_depth {
            return finish(
                Verdict::Exceeded {
                    cap: CapKind::MaxDepth,
                },
                objects,
                index,
            );
        }
        next.sort_by(|a, b| objects[*a].basis.key().cmp(&objects[*b].basis.key()));
        level = next;
        depth += 1;
    }
    finish(Verdict::Finite, objects, index)
}

fn make_object(chi: &Bicharacter, basis: Basis, depth: usize) -> GroupoidObject {
    GroupoidObject {
        diagram: chi.diagram(&basis),
        basis,
        depth,
    }
}

fn collect_roots(objects: &[GroupoidObject]) -> Vec<Vector> {
    let mut roots: Vec<Vector> = objects
        .iter()
        .flat_map(|o| o.basis.vectors().iter())
        .flat_map(|v| [v.clone(), lattice::neg(v)])
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arithmetic {
    Yes(Vec<Vector>),
    No(String),
    Indeterminate(CapKind),
}

impl Arithmetic {
    pub fn is_yes(&self) -> bool {
        matches!(self, Arithmetic::Yes(_))
    }
}

pub fn is_arithmetic(chi: &Bicharacter, caps: &Caps) -> Arithmetic {
    let res = explore(chi, caps);
    match res.verdict {
        Verdict::Finite => Arithmetic::Yes(res.roots),
        Verdict::NotFull { object, i, j } => Arithmetic::No(format!(
            "not full: m-value undefined at object {} (basis {:?}), vertices ({}, {})",
            object,
            res.objects[object].basis.vectors(),
            i + 1,
            j + 1
        )),
        Verdict::Exceeded { cap } => Arithmetic::Indeterminate(cap),
    }
}

/// When exploration gave up at a cap and `chi` is of Cartan type with a
/// Cartan matrix that is not of finite type, the Cartan theorem says the
/// groupoid is not finite. This is only ever reported as a note.
pub fn advisory(chi: &Bicharacter, verdict: &Verdict) -> Option<String> {
    if !matches!(verdict, Verdict::Exceeded { .. }) {
        return None;
    }
    let v = chi.cartan_verdict(&Basis::standard(chi.rank()));
    (v.is_cartan && !v.is_finite_type).then(|| {
        "of Cartan type with a Cartan matrix not of finite type; by the Cartan-type theorem \
         the groupoid is not finite (advisory only)"
            .to_string()
    })
}

/// `Delta^+_F`: roots with nonnegative coordinates w.r.t. `F`. Checks that
/// every root is either positive or negative.
pub fn positive_roots(result: &ExplorationResult, f: &Basis) -> Result<Vec<Vector>> {
    if !result.is_finite() {
        return Err(Error::Precondition("exploration is not finite".into()));
    }
    if result.find_object(f).is_none() {
        return Err(Error::Precondition(format!(
            "{:?} is not an object of the groupoid",
            f.vectors()
        )));
    }
    let inv = f.matrix().inverse_unimodular()?;
    let mut pos = Vec::new();
    for r in &result.roots {
        let c = inv.mul_vec(r);
        if lattice::is_nonnegative(&c) {
            pos.push(r.clone());
        } else if !lattice::is_nonnegative(&lattice::neg(&c)) {
            return Err(Error::Precondition(format!(
                "root {r:?} has mixed signs w.r.t. {:?}",
                f.vectors()
            )));
        }
    }
    Ok(pos)
}
