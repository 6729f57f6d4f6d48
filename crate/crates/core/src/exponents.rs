//! Exact arithmetic in the value group `Z^r x Z/N`.
//!
//! Every structure constant of a bicharacter lives in the multiplicative
//! subgroup of `k^*` generated by finitely many parameters. In characteristic
//! zero that subgroup is a finitely generated abelian group, so it is written
//! additively here: `r` free exponents for generic parameters and one residue
//! mod `N` for the roots of unity. Equality is then decidable and exact.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ambient group `Z^free_rank x Z/torsion_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawContext")]
pub struct GroupContext {
    free_rank: usize,
    torsion_order: u64,
}

#[derive(Deserialize)]
struct RawContext {
    free_rank: usize,
    torsion_order: u64,
}

impl TryFrom<RawContext> for GroupContext {
    type Error = Error;

    fn try_from(raw: RawContext) -> Result<Self> {
        GroupContext::new(raw.free_rank, raw.torsion_order)
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{} x Z/{}", self.free_rank, self.torsion_order)
    }
}

impl GroupContext {
    pub fn new(free_rank: usize, torsion_order: u64) -> Result<Self> {
        if torsion_order == 0 {
            return Err(Error::InvalidContext("torsion order must be at least 1".into()));
        }
        if torsion_order > i64::MAX as u64 {
            return Err(Error::InvalidContext("torsion order too large".into()));
        }
        Ok(GroupContext {
            free_rank,
            torsion_order,
        })
    }

    /// Torsion-only context `mu_N`.
    pub fn torsion(torsion_order: u64) -> Result<Self> {
        Self::new(0, torsion_order)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    /// Smallest context both `self` and `other` embed into: the larger free
    /// rank and the lcm of the torsion orders.
    pub fn join(&self, other: &GroupContext) -> GroupContext {
        GroupContext {
            free_rank: self.free_rank.max(other.free_rank),
            torsion_order: self.torsion_order.lcm(&other.torsion_order),
        }
    }

    /// Whether elements of `self` can be mapped into `target` by
    /// [`GroupElement::embed`].
    pub fn embeds_into(&self, target: &GroupContext) -> bool {
        target.free_rank >= self.free_rank && target.torsion_order % self.torsion_order == 0
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            ctx: *self,
            free: vec![0; self.free_rank],
            tor: 0,
        }
    }

    /// The `k`-th free generator (0-based).
    pub fn free_generator(&self, k: usize) -> Result<GroupElement> {
        if k >= self.free_rank {
            return Err(Error::Dimension(format!(
                "free generator {k} out of range for rank {}",
                self.free_rank
            )));
        }
        let mut e = self.identity();
        e.free[k] = 1;
        Ok(e)
    }

    /// The torsion generator `z`, a primitive `N`-th root of unity.
    pub fn torsion_generator(&self) -> GroupElement {
        self.torsion_element(1)
    }

    /// `z^t`.
    pub fn torsion_element(&self, t: i64) -> GroupElement {
        GroupElement {
            ctx: *self,
            free: vec![0; self.free_rank],
            tor: reduce(t as i128, self.torsion_order),
        }
    }

    /// `-1`, when `N` is even.
    pub fn minus_one(&self) -> Option<GroupElement> {
        (self.torsion_order % 2 == 0).then(|| self.torsion_element((self.torsion_order / 2) as i64))
    }

    /// The primitive `order`-th root of unity `z^(N/order)`, when `order | N`.
    pub fn primitive_root(&self, order: u64) -> Option<GroupElement> {
        (order >= 1 && self.torsion_order % order == 0)
            .then(|| self.torsion_element((self.torsion_order / order) as i64))
    }

    /// All elements of `mu_N`, in exponent order.
    pub fn roots_of_unity(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.torsion_order as i64).map(move |t| self.torsion_element(t))
    }

    pub fn element(&self, free: Vec<i64>, tor: i64) -> Result<GroupElement> {
        if free.len() != self.free_rank {
            return Err(Error::Dimension(format!(
                "free part has length {}, context rank is {}",
                free.len(),
                self.free_rank
            )));
        }
        Ok(GroupElement {
            ctx: *self,
            free,
            tor: reduce(tor as i128, self.torsion_order),
        })
    }
}

fn reduce(t: i128, n: u64) -> u64 {
    t.rem_euclid(n as i128) as u64
}

/// Multiplicative order of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Finite(u64),
    Infinite,
}

/// An element `(free, tor)` of `Z^r x Z/N`, read multiplicatively as
/// `g_1^free[0] ... g_r^free[r-1] * z^tor`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    ctx: GroupContext,
    free: Vec<i64>,
    tor: u64,
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ctx
            .cmp(&other.ctx)
            .then_with(|| self.free.cmp(&other.free))
            .then_with(|| self.tor.cmp(&other.tor))
    }
}

/// Wire form `{"free": [..], "tor": t}`; the context travels separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub free: Vec<i64>,
    pub tor: i64,
}

impl GroupElement {
    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn free_part(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_part(&self) -> u64 {
        self.tor
    }

    pub fn from_repr(ctx: &GroupContext, repr: &ElementRepr) -> Result<Self> {
        ctx.element(repr.free.clone(), repr.tor)
    }

    pub fn to_repr(&self) -> ElementRepr {
        ElementRepr {
            free: self.free.clone(),
            tor: self.tor as i64,
        }
    }

    fn check_ctx(&self, other: &GroupElement) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: other.ctx,
            });
        }
        Ok(())
    }

    pub fn is_one(&self) -> bool {
        self.tor == 0 && self.free.iter().all(|&x| x == 0)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(|&x| x == 0)
    }

    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check_ctx(other)?;
        let free = self
            .free
            .iter()
            .zip(&other.free)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("group multiplication")))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement {
            ctx: self.ctx,
            free,
            tor: reduce(self.tor as i128 + other.tor as i128, self.ctx.torsion_order),
        })
    }

    pub fn try_pow(&self, m: i64) -> Result<GroupElement> {
        let free = self
            .free
            .iter()
            .map(|a| a.checked_mul(m).ok_or(Error::Overflow("group power")))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement {
            ctx: self.ctx,
            free,
            tor: reduce(self.tor as i128 * m as i128, self.ctx.torsion_order),
        })
    }

    /// Group product. Panics on a context mismatch or on exponent overflow;
    /// use [`GroupElement::try_mul`] for the fallible form.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn inv(&self) -> GroupElement {
        self.pow(-1)
    }

    /// `self^m` for any integer `m`. Panics on exponent overflow.
    pub fn pow(&self, m: i64) -> GroupElement {
        self.try_pow(m).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn div(&self, other: &GroupElement) -> GroupElement {
        self.mul(&other.inv())
    }

    pub fn order(&self) -> Order {
        if !self.is_torsion() {
            return Order::Infinite;
        }
        let n = self.ctx.torsion_order;
        Order::Finite(n / self.tor.gcd(&n))
    }

    /// Whether `self` is a primitive `m`-th root of unity.
    pub fn in_primitive_roots(&self, m: u64) -> bool {
        self.order() == Order::Finite(m)
    }

    /// Map into a larger context: free part padded with zeros, torsion
    /// exponent scaled by `N'/N`.
    pub fn embed(&self, target: &GroupContext) -> Result<GroupElement> {
        if !self.ctx.embeds_into(target) {
            return Err(Error::Embedding {
                from: self.ctx,
                into: *target,
            });
        }
        let mut free = self.free.clone();
        free.resize(target.free_rank, 0);
        let scale = target.torsion_order / self.ctx.torsion_order;
        Ok(GroupElement {
            ctx: *target,
            free,
            tor: reduce(self.tor as i128 * scale as i128, target.torsion_order),
        })
    }

    /// Inverse of [`GroupElement::embed`]: succeeds when `self` lies in the
    /// image of `target`.
    pub fn restrict_to(&self, target: &GroupContext) -> Result<GroupElement> {
        let fail = || Error::Embedding {
            from: self.ctx,
            into: *target,
        };
        if !target.embeds_into(&self.ctx) {
            return Err(fail());
        }
        if self.free[target.free_rank..].iter().any(|&x| x != 0) {
            return Err(fail());
        }
        let scale = self.ctx.torsion_order / target.torsion_order;
        if self.tor % scale != 0 {
            return Err(fail());
        }
        Ok(GroupElement {
            ctx: *target,
            free: self.free[..target.free_rank].to_vec(),
            tor: self.tor / scale,
        })
    }

    /// Human-readable label. `z` is the torsion generator, `g1, g2, ...` the
    /// free generators; when `N` is even the upper half of `mu_N` is written
    /// with a sign, e.g. `-z^2`.
    pub fn render(&self) -> String {
        self.render_with(&[])
    }

    /// Like [`GroupElement::render`] but with custom names for the free
    /// generators.
    pub fn render_with(&self, free_names: &[&str]) -> String {
        let n = self.ctx.torsion_order;
        let mut sign = false;
        let mut zexp = self.tor;
        if n % 2 == 0 && self.tor >= n / 2 {
            sign = true;
            zexp = self.tor - n / 2;
        }
        let mut factors = Vec::new();
        if zexp != 0 {
            factors.push(power("z", zexp as i64));
        }
        for (k, &e) in self.free.iter().enumerate() {
            if e != 0 {
                let name = free_names
                    .get(k)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("g{}", k + 1));
                factors.push(power(&name, e));
            }
        }
        let body = factors.join("*");
        match (sign, body.is_empty()) {
            (false, true) => "1".into(),
            (true, true) => "-1".into(),
            (false, false) => body,
            (true, false) => format!("-{body}"),
        }
    }
}

fn power(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Least `m >= 0` with `q^m * p = 1`, or `None` when no such `m` exists.
///
/// The free part is an exact integer linear equation in `m`; the torsion
/// part is the congruence `m * tq + tp = 0 (mod N)`.
pub fn solve_min_exponent(q: &GroupElement, p: &GroupElement) -> Result<Option<u64>> {
    q.check_ctx(p)?;
    let n = q.ctx.torsion_order as i128;

    // Free part: m * fq + fp = 0.
    let mut forced: Option<i128> = None;
    for (&a, &b) in q.free.iter().zip(&p.free) {
        let (a, b) = (a as i128, b as i128);
        if a == 0 {
            if b != 0 {
                return Ok(None);
            }
            continue;
        }
        if b % a != 0 {
            return Ok(None);
        }
        let m = -b / a;
        match forced {
            Some(prev) if prev != m => return Ok(None),
            _ => forced = Some(m),
        }
    }

    let tq = q.tor as i128;
    let tp = p.tor as i128;
    if let Some(m) = forced {
        if m < 0 {
            return Ok(None);
        }
        return Ok(((m * tq + tp).rem_euclid(n) == 0).then_some(m as u64));
    }

    // m * tq = -tp (mod n)
    let rhs = (-tp).rem_euclid(n);
    let g = tq.gcd(&n);
    if rhs % g != 0 {
        return Ok(None);
    }
    let modulus = n / g;
    if modulus == 1 {
        return Ok(Some(0));
    }
    let a = (tq / g).rem_euclid(modulus);
    let inv = mod_inverse(a, modulus).expect("coprime after dividing by gcd");
    Ok(Some(((rhs / g) * inv).rem_euclid(modulus) as u64))
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Whether `q^m * p = 1` for some integer `m` (any sign).
pub fn has_integer_exponent(q: &GroupElement, p: &GroupElement) -> Result<bool> {
    if solve_min_exponent(q, p)?.is_some() {
        return Ok(true);
    }
    Ok(solve_min_exponent(&q.inv(), p)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_axioms() {
        let ctx = GroupContext::new(2, 12).unwrap();
        let g = ctx.element(vec![3, -1], 7).unwrap();
        assert!(g.mul(&g.inv()).is_one());
        assert_eq!(g.pow(0), ctx.identity());
    }

    #[test]
    fn torsion_power_wraps() {
        let ctx = GroupContext::torsion(3).unwrap();
        let z = ctx.torsion_generator();
        assert_eq!(z.pow(4), z);
    }

    #[test]
    fn negative_power_is_inverse() {
        let ctx = GroupContext::new(1, 1).unwrap();
        let q = ctx.free_generator(0).unwrap();
        assert_eq!(q.pow(-2), q.pow(2).inv());
    }

    #[test]
    fn orders() {
        let ctx = GroupContext::new(1, 12).unwrap();
        assert_eq!(ctx.identity().order(), Order::Finite(1));
        assert_eq!(ctx.torsion_element(4).order(), Order::Finite(3));
        assert_eq!(ctx.free_generator(0).unwrap().order(), Order::Infinite);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = GroupContext::torsion(3).unwrap().torsion_generator();
        let b = GroupContext::torsion(4).unwrap().torsion_generator();
        assert!(matches!(a.try_mul(&b), Err(Error::ContextMismatch { .. })));
        assert!(solve_min_exponent(&a, &b).is_err());
    }

    #[test]
    fn min_exponent_examples() {
        let c3 = GroupContext::torsion(3).unwrap();
        let one = c3.identity();
        assert_eq!(solve_min_exponent(&one, &one).unwrap(), Some(0));
        let z = c3.torsion_generator();
        assert_eq!(solve_min_exponent(&z, &z).unwrap(), Some(2));

        let c = GroupContext::new(2, 1).unwrap();
        let g1 = c.free_generator(0).unwrap();
        let g2 = c.free_generator(1).unwrap();
        assert_eq!(solve_min_exponent(&g1, &g2).unwrap(), None);
        // q^m * q^-3 = 1 at m = 3; q^m * q^2 = 1 needs m = -2.
        assert_eq!(solve_min_exponent(&g1, &g1.pow(-3)).unwrap(), Some(3));
        assert_eq!(solve_min_exponent(&g1, &g1.pow(2)).unwrap(), None);
        assert!(has_integer_exponent(&g1, &g1.pow(2)).unwrap());
    }

    #[test]
    fn mixed_free_and_torsion() {
        let c = GroupContext::new(1, 4).unwrap();
        let q = c.element(vec![1], 1).unwrap();
        // q^m * p = 1 with p = g^-2 z^2: m = 2 on the free part, 2 + 2 = 0 mod 4.
        let p = c.element(vec![-2], 2).unwrap();
        assert_eq!(solve_min_exponent(&q, &p).unwrap(), Some(2));
        let p = c.element(vec![-2], 1).unwrap();
        assert_eq!(solve_min_exponent(&q, &p).unwrap(), None);
    }

    #[test]
    fn embedding_round_trip() {
        let small = GroupContext::new(1, 3).unwrap();
        let big = small.join(&GroupContext::torsion(4).unwrap());
        assert_eq!(big.torsion_order(), 12);
        let x = small.element(vec![2], 2).unwrap();
        let y = x.embed(&big).unwrap();
        assert_eq!(y.torsion_part(), 8);
        assert_eq!(y.restrict_to(&small).unwrap(), x);
        assert!(big.minus_one().unwrap().restrict_to(&small).is_err());
    }

    #[test]
    fn rendering() {
        let c = GroupContext::new(1, 6).unwrap();
        assert_eq!(c.identity().render(), "1");
        assert_eq!(c.minus_one().unwrap().render(), "-1");
        assert_eq!(c.torsion_element(5).render(), "-z^2");
        assert_eq!(c.torsion_element(2).render(), "z^2");
        assert_eq!(c.element(vec![-1], 3).unwrap().render(), "-g1^-1");
        assert_eq!(c.element(vec![2], 1).unwrap().render_with(&["q"]), "z*q^2");
    }

    #[test]
    fn zero_torsion_order_rejected() {
        assert!(GroupContext::new(0, 0).is_err());
        let parsed: std::result::Result<GroupContext, _> =
            serde_json::from_str(r#"{"free_rank": 1, "torsion_order": 0}"#);
        assert!(parsed.is_err());
    }
}
