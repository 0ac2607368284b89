//! Open invariants `F_{(r, r_L)}(α, β)` of the cotangent bundles of S², RP² and S³.
//!
//! Values come from a curated table, and otherwise from two reduction relations:
//!
//! * R2 (`r_L ≥ 1`): trade a conjugate pair for a prescribed orbit,
//!   `F_{(r,r_L)}(α,β) = Σ_{β_k>0} k·F_{(r,r_L−1)}(α+e_k, β−e_k)`;
//! * R1 (`r_L = 0`, `r ≥ 2`): collide two real points,
//!   `F_{(r,0,c)} = 2F_{(r−2,0,c+1)} + F_{(r−2,1,c)}`, where `c` counts
//!   prescribed real double points.
//!
//! Keys with more prescribed double points than a cylinder can carry vanish.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;

use crate::contact::{double_point_bound, f_point_count, ContactVector, LagrangianKind};
use crate::error::{Error, Result};
use crate::tables::{self, FEntry, FRole};

const BUILTIN: &str = include_str!("../data/cotangent.json");

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FKey {
    kind: LagrangianKind,
    alpha: ContactVector,
    beta: ContactVector,
    r: u32,
    r_l: u32,
    crosses: u32,
}

impl FKey {
    /// Key with `r_L` conjugate pairs; the real-point count is implied.
    pub fn new(kind: LagrangianKind, alpha: ContactVector, beta: ContactVector, r_l: u32) -> Result<Self> {
        Self::with_crosses(kind, alpha, beta, r_l, 0)
    }

    /// Key with an explicit real-point count, checked against the dimension equation.
    pub fn with_points(
        kind: LagrangianKind,
        alpha: ContactVector,
        beta: ContactVector,
        r: u32,
        r_l: u32,
    ) -> Result<Self> {
        let key = Self::new(kind, alpha, beta, r_l)?;
        if key.r != r {
            return Err(Error::NegativeDimension(format!(
                "{kind} ({}, {}) with r_L = {r_l} needs r = {}, not {r}",
                key.alpha, key.beta, key.r
            )));
        }
        Ok(key)
    }

    pub(crate) fn with_crosses(
        kind: LagrangianKind,
        alpha: ContactVector,
        beta: ContactVector,
        r_l: u32,
        crosses: u32,
    ) -> Result<Self> {
        let full = f_point_count(kind, &alpha, &beta, r_l)?;
        let r = full.checked_sub(2 * crosses).ok_or_else(|| {
            Error::NegativeDimension(format!("{kind} ({alpha}, {beta}) with {crosses} double points"))
        })?;
        Ok(Self { kind, alpha, beta, r, r_l, crosses })
    }

    pub fn kind(&self) -> LagrangianKind {
        self.kind
    }
    pub fn alpha(&self) -> &ContactVector {
        &self.alpha
    }
    pub fn beta(&self) -> &ContactVector {
        &self.beta
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn r_l(&self) -> u32 {
        self.r_l
    }
    /// Number of prescribed real double points (zero on every key built through the public constructors).
    pub fn crosses(&self) -> u32 {
        self.crosses
    }
}

impl fmt::Display for FKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F^{}_({}", self.kind, self.r)?;
        match self.crosses {
            0 => {}
            1 => f.write_str("+x")?,
            c => write!(f, "+{c}x")?,
        }
        write!(f, ",{})({}, {})", self.r_l, self.alpha, self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Table(FRole),
    DoublePointBound,
    R1,
    R2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Table(role) => write!(f, "table ({})", format!("{role:?}").to_lowercase()),
            Rule::DoublePointBound => f.write_str("vanishes: too many double points"),
            Rule::R1 => f.write_str("R1"),
            Rule::R2 => f.write_str("R2"),
        }
    }
}

/// One step of an audit trail.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub key: FKey,
    pub rule: Rule,
    pub value: BigInt,
    pub terms: Vec<(BigInt, Derivation)>,
}

impl Derivation {
    /// Several conjugate pairs are traded one at a time by iterating R2.
    pub fn derived_by_iteration(&self) -> bool {
        self.rule == Rule::R2 && self.key.r_l >= 2
    }

    fn write(&self, out: &mut String, depth: usize, coef: Option<&BigInt>) {
        let pad = "  ".repeat(depth);
        let c = coef.map(|c| format!("{c} * ")).unwrap_or_default();
        let iter = if self.derived_by_iteration() { " [derived by iteration]" } else { "" };
        out.push_str(&format!("{pad}{c}{} = {}  [{}]{iter}\n", self.key, self.value, self.rule));
        for (k, d) in &self.terms {
            d.write(out, depth + 1, Some(k));
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0, None);
        s
    }
}

/// Curated F values with their roles.
#[derive(Clone, Debug)]
pub struct FTable {
    entries: HashMap<FKey, (BigInt, FRole, String)>,
}

impl FTable {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("built-in F table is well formed")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_entries(tables::parse(text, "F table")?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_entries(tables::read(path)?)
    }

    pub fn from_entries(list: Vec<FEntry>) -> Result<Self> {
        let mut entries = HashMap::new();
        for e in list {
            let key = FKey::with_crosses(e.kind, e.alpha, e.beta, e.r_l, e.crosses)
                .map_err(|err| Error::Table(err.to_string()))?;
            if key.r != e.r {
                return Err(Error::Table(format!("{key}: listed with r = {}", e.r)));
            }
            if e.kind.is_torus() {
                return Err(Error::Table(format!("{key}: torus entries are not supported")));
            }
            if entries.insert(key.clone(), (BigInt::from(e.value), e.role, e.source_quote)).is_some() {
                return Err(Error::Table(format!("{key}: duplicate entry")));
            }
        }
        Ok(Self { entries })
    }

    /// Keeps only entries whose role is in `roles`.
    pub fn restricted(&self, roles: &[FRole]) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(_, (_, role, _))| roles.contains(role))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self { entries }
    }

    pub fn get(&self, key: &FKey) -> Option<&BigInt> {
        self.entries.get(key).map(|(v, _, _)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in a stable order.
    pub fn entries(&self) -> Vec<(&FKey, &BigInt, FRole)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, (v, role, _))| (k, v, *role)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
}

/// R2 expansion of a key with at least one conjugate pair.
pub fn reduce_pair_to_real(key: &FKey) -> Result<Vec<(BigInt, FKey)>> {
    if key.r_l == 0 {
        return Err(Error::UnresolvableFKey(format!("{key}: R2 needs a conjugate pair")));
    }
    if key.beta.is_zero() {
        return Err(Error::EmptyBeta(key.to_string()));
    }
    let mut out = Vec::new();
    for k in 1..=key.beta.max_order() {
        if let Some(beta) = key.beta.minus_e(k) {
            let t = FKey::with_crosses(key.kind, key.alpha.plus_e(k), beta, key.r_l - 1, key.crosses)?;
            debug_assert_eq!(t.r, key.r);
            out.push((BigInt::from(k), t));
        }
    }
    Ok(out)
}

/// R1 expansion of a key with no conjugate pair and at least two real points.
pub fn reduce_real_pair_to_cross(key: &FKey) -> Result<Vec<(BigInt, FKey)>> {
    if key.r < 2 || key.r_l != 0 {
        return Err(Error::InsufficientRealPoints(key.to_string()));
    }
    let crossed = FKey::with_crosses(key.kind, key.alpha.clone(), key.beta.clone(), 0, key.crosses + 1)?;
    let paired = FKey::with_crosses(key.kind, key.alpha.clone(), key.beta.clone(), 1, key.crosses)?;
    Ok(vec![(BigInt::from(2), crossed), (BigInt::from(1), paired)])
}

enum Step {
    Value(BigInt, Rule),
    Expand(Rule, Vec<(BigInt, FKey)>),
}

/// Resolver for F values over a given table.
#[derive(Clone, Debug)]
pub struct FInvariants {
    table: FTable,
}

impl Default for FInvariants {
    fn default() -> Self {
        Self::new(FTable::builtin())
    }
}

impl FInvariants {
    pub fn new(table: FTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &FTable {
        &self.table
    }

    fn step(&self, key: &FKey) -> Result<Step> {
        if let Some((v, role, _)) = self.table.entries.get(key) {
            return Ok(Step::Value(v.clone(), Rule::Table(*role)));
        }
        if !matches!(key.kind, LagrangianKind::Sphere2 | LagrangianKind::RP2) {
            return Err(Error::UnresolvableFKey(key.to_string()));
        }
        let bound = double_point_bound(key.kind, key.alpha.weight() + key.beta.weight())?;
        if key.crosses as u64 > bound {
            return Ok(Step::Value(BigInt::zero(), Rule::DoublePointBound));
        }
        if key.r_l >= 1 {
            if key.beta.is_zero() {
                return Err(Error::UnresolvableFKey(key.to_string()));
            }
            return Ok(Step::Expand(Rule::R2, reduce_pair_to_real(key)?));
        }
        if key.r >= 2 {
            return Ok(Step::Expand(Rule::R1, reduce_real_pair_to_cross(key)?));
        }
        Err(Error::UnresolvableFKey(key.to_string()))
    }

    pub fn f_invariant(&self, key: &FKey) -> Result<BigInt> {
        let mut memo = HashMap::new();
        self.eval(key, &mut memo)
    }

    /// Same value, but every expansion is evaluated in an order drawn from `rng`
    /// and nothing is shared between branches.
    pub fn f_invariant_shuffled(&self, key: &FKey, rng: &mut StdRng) -> Result<BigInt> {
        self.eval_shuffled(key, rng)
    }

    fn eval(&self, key: &FKey, memo: &mut HashMap<FKey, BigInt>) -> Result<BigInt> {
        if let Some(v) = memo.get(key) {
            return Ok(v.clone());
        }
        let v = match self.step(key)? {
            Step::Value(v, _) => v,
            Step::Expand(_, terms) => {
                let mut acc = BigInt::zero();
                for (c, t) in terms {
                    acc += c * self.eval(&t, memo)?;
                }
                acc
            }
        };
        memo.insert(key.clone(), v.clone());
        Ok(v)
    }

    fn eval_shuffled(&self, key: &FKey, rng: &mut StdRng) -> Result<BigInt> {
        match self.step(key)? {
            Step::Value(v, _) => Ok(v),
            Step::Expand(_, mut terms) => {
                terms.shuffle(rng);
                let mut acc = BigInt::zero();
                for (c, t) in terms {
                    acc += c * self.eval_shuffled(&t, rng)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn derive(&self, key: &FKey) -> Result<Derivation> {
        match self.step(key)? {
            Step::Value(value, rule) => Ok(Derivation { key: key.clone(), rule, value, terms: vec![] }),
            Step::Expand(rule, terms) => {
                let mut value = BigInt::zero();
                let mut sub = Vec::with_capacity(terms.len());
                for (c, t) in terms {
                    let d = self.derive(&t)?;
                    value += &c * &d.value;
                    sub.push((c, d));
                }
                Ok(Derivation { key: key.clone(), rule, value, terms: sub })
            }
        }
    }
}

/// `F` from the built-in tables.
pub fn f_invariant(key: &FKey) -> Result<BigInt> {
    FInvariants::default().f_invariant(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LagrangianKind::*;

    fn cv(s: &str) -> ContactVector {
        s.parse().unwrap()
    }

    fn plain(kind: LagrangianKind, a: &str, b: &str) -> FKey {
        FKey::new(kind, cv(a), cv(b), 0).unwrap()
    }

    #[test]
    fn lookups() {
        let f = FInvariants::default();
        let k = plain(Sphere2, "0", "2e1");
        assert_eq!(k.r(), 7);
        assert_eq!(f.f_invariant(&k).unwrap(), 6.into());
        let k = plain(RP2, "0", "e1+e2");
        assert_eq!(k.r(), 6);
        assert_eq!(f.f_invariant(&k).unwrap(), 24.into());
        let k = plain(Sphere3, "e1", "0");
        assert_eq!(k.r(), 1);
        assert_eq!(f.f_invariant(&k).unwrap(), (-1).into());
    }

    #[test]
    fn r2_examples() {
        let f = FInvariants::default();
        let k = FKey::with_points(Sphere2, cv("0"), cv("e2"), 3, 1).unwrap();
        let terms = reduce_pair_to_real(&k).unwrap();
        assert_eq!(terms, vec![(2.into(), plain(Sphere2, "e2", "0"))]);
        assert_eq!(f.f_invariant(&k).unwrap(), 4.into());

        let k = FKey::with_points(RP2, cv("0"), cv("e1+e2"), 4, 1).unwrap();
        assert_eq!(f.f_invariant(&k).unwrap(), 16.into());

        let k = FKey::with_points(Sphere2, cv("0"), cv("2e1"), 5, 1).unwrap();
        let terms = reduce_pair_to_real(&k).unwrap();
        assert_eq!(terms, vec![(1.into(), plain(Sphere2, "e1", "e1"))]);
        assert_eq!(f.f_invariant(&k).unwrap(), 4.into());

        let k = FKey::new(Sphere2, cv("e2"), cv("0"), 1).unwrap();
        assert!(matches!(reduce_pair_to_real(&k), Err(Error::EmptyBeta(_))));
    }

    #[test]
    fn r1_examples() {
        let closure = FInvariants::new(FTable::builtin().restricted(&[
            FRole::Cross,
            FRole::Vanishing,
            FRole::Base,
        ]));
        assert_eq!(closure.f_invariant(&plain(Sphere2, "0", "2e1")).unwrap(), 6.into());
        assert_eq!(closure.f_invariant(&plain(RP2, "e3", "0")).unwrap(), 2.into());
        assert_eq!(closure.f_invariant(&plain(Sphere2, "2e1", "0")).unwrap(), 2.into());
        let t = reduce_real_pair_to_cross(&plain(Sphere2, "2e1", "0")).unwrap();
        assert_eq!(t[0].1.crosses(), 1);
        assert_eq!(t[0].1.r(), 1);
        assert_eq!(t[1].1.r_l(), 1);
        assert!(matches!(
            reduce_real_pair_to_cross(&plain(RP2, "e1", "0")),
            Err(Error::InsufficientRealPoints(_))
        ));
    }

    #[test]
    fn derivation_trace() {
        let f = FInvariants::default();
        let d = f.derive(&FKey::new(RP2, cv("0"), cv("2e1"), 2).unwrap()).unwrap();
        assert!(d.derived_by_iteration());
        assert_eq!(d.value, f.f_invariant(&d.key).unwrap());
        assert!(d.render().contains("derived by iteration"));
    }

    #[test]
    fn unknown_keys_error() {
        let f = FInvariants::default();
        assert!(matches!(
            f.f_invariant(&plain(RP2, "e4", "0")),
            Err(Error::UnresolvableFKey(_))
        ));
        assert!(f.f_invariant(&plain(Torus2, "0", "e1")).is_err());
        assert!(f.f_invariant(&plain(Sphere3, "0", "e1")).is_err());
    }
}
