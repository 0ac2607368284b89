//! Relative invariants of the ruled surfaces Σ_n (tangency to the exceptional
//! section E = e − nf), rational curve counts on the quadric surface, and the
//! derived counts N₃ on the ruled threefold over the quadric.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::contact::ContactVector;
use crate::error::{Error, Result};
use crate::tables::{self, RelativeEntry};

const BUILTIN: &str = include_str!("../data/relative.json");

/// Class `a·e + b·f` on Σ_n, where `e² = n` and `f` is a fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuledSurfaceClass {
    pub n: u32,
    pub a: u32,
    pub b: u32,
}

impl RuledSurfaceClass {
    /// Intersection number with the exceptional section.
    pub fn dot_exceptional(&self) -> u32 {
        self.b
    }
}

impl fmt::Display for RuledSurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.a {
            0 => String::new(),
            1 => "e".to_string(),
            a => format!("{a}e"),
        };
        let fib = match self.b {
            0 => String::new(),
            1 => "f".to_string(),
            b => format!("{b}f"),
        };
        match (e.is_empty(), fib.is_empty()) {
            (false, false) => write!(f, "{e}+{fib}"),
            (false, true) => f.write_str(&e),
            (true, false) => f.write_str(&fib),
            (true, true) => f.write_str("0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelativeKey {
    pub class: RuledSurfaceClass,
    pub alpha: ContactVector,
    pub beta: ContactVector,
}

impl RelativeKey {
    pub fn new(n: u32, a: u32, b: u32, alpha: ContactVector, beta: ContactVector) -> Result<Self> {
        let key = Self { class: RuledSurfaceClass { n, a, b }, alpha, beta };
        if a == 0 && b == 0 {
            return Err(Error::UnknownInvariant(format!("{key}: zero class")));
        }
        if key.alpha.weight() + key.beta.weight() != b {
            return Err(Error::UnknownInvariant(format!(
                "{key}: contact weight {} differs from D.E = {b}",
                key.alpha.weight() + key.beta.weight()
            )));
        }
        Ok(key)
    }

    /// Number of generic points the curves must pass through.
    pub fn point_count(&self) -> i64 {
        let RuledSurfaceClass { n, a, b } = self.class;
        (n as i64 + 2) * a as i64 + 2 * b as i64
            - 1
            - self.alpha.weight() as i64
            - (self.beta.weight() as i64 - self.beta.size() as i64)
    }

    fn is_simple_fiber(&self) -> bool {
        self.class.a == 0 && self.class.b == 1
    }
}

impl fmt::Display for RelativeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N_{}^{{{}}}({}, {})", self.class.n, self.class, self.alpha, self.beta)
    }
}

pub fn point_count(key: &RelativeKey) -> i64 {
    key.point_count()
}

/// Anything that can answer relative-invariant queries.
pub trait RelativeProvider: Send + Sync {
    fn n_sigma(&self, key: &RelativeKey) -> Result<BigInt>;
}

fn check_points(key: &RelativeKey) -> Result<()> {
    if key.point_count() < 0 {
        return Err(Error::NegativePointCount(key.to_string()));
    }
    Ok(())
}

/// Curated values, keyed exactly; simple fibers are answered by rule.
#[derive(Clone, Debug)]
pub struct CuratedTable {
    entries: HashMap<RelativeKey, (BigInt, String)>,
}

impl CuratedTable {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("built-in relative table is well formed")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_entries(tables::parse(text, "relative table")?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_entries(tables::read(path)?)
    }

    pub fn from_entries(list: Vec<RelativeEntry>) -> Result<Self> {
        let mut entries = HashMap::new();
        for e in list {
            let key = RelativeKey::new(e.n, e.a, e.b, e.alpha, e.beta)
                .map_err(|err| Error::Table(err.to_string()))?;
            if key.point_count() < 0 {
                return Err(Error::Table(format!("{key}: negative point count")));
            }
            if e.value < 0 {
                return Err(Error::Table(format!("{key}: negative count {}", e.value)));
            }
            if entries.insert(key.clone(), (BigInt::from(e.value), e.source_quote)).is_some() {
                return Err(Error::Table(format!("{key}: duplicate entry")));
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in a stable order.
    pub fn entries(&self) -> Vec<(&RelativeKey, &BigInt, &str)> {
        let mut v: Vec<_> = self.entries.iter().map(|(k, (v, q))| (k, v, q.as_str())).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn contains(&self, key: &RelativeKey) -> bool {
        self.entries.contains_key(key) || key.is_simple_fiber()
    }
}

impl RelativeProvider for CuratedTable {
    fn n_sigma(&self, key: &RelativeKey) -> Result<BigInt> {
        check_points(key)?;
        if let Some((v, _)) = self.entries.get(key) {
            return Ok(v.clone());
        }
        if key.is_simple_fiber() {
            return Ok(BigInt::one());
        }
        Err(Error::UnknownInvariant(key.to_string()))
    }
}

/// Genus-zero degeneration recursion on Σ_n: a point is pushed onto E, and the
/// limit is E plus curves in class D − E glued to E along one node each.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChRecursion;

pub const RECURSION_MAX_A: u32 = 2;

impl RelativeProvider for ChRecursion {
    fn n_sigma(&self, key: &RelativeKey) -> Result<BigInt> {
        ch_recursion(key)
    }
}

pub fn ch_recursion(key: &RelativeKey) -> Result<BigInt> {
    if key.class.a > RECURSION_MAX_A {
        return Err(Error::RecursionOutOfScope(key.to_string()));
    }
    check_points(key)?;
    let mut memo = HashMap::new();
    Ok(recurse(key, &mut memo))
}

#[derive(Clone, Debug)]
struct Piece {
    key: RelativeKey,
    gamma: ContactVector,
    node_order: u32,
    points: i64,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn recurse(key: &RelativeKey, memo: &mut HashMap<RelativeKey, BigInt>) -> BigInt {
    if let Some(v) = memo.get(key) {
        return v.clone();
    }
    let v = recurse_uncached(key, memo);
    memo.insert(key.clone(), v.clone());
    v
}

fn recurse_uncached(key: &RelativeKey, memo: &mut HashMap<RelativeKey, BigInt>) -> BigInt {
    let RuledSurfaceClass { n, a, b } = key.class;
    let upsilon = key.point_count();
    if upsilon < 0 || key.alpha.weight() + key.beta.weight() != b {
        return BigInt::zero();
    }
    if a == 0 {
        // only a single fiber is irreducible
        return if b == 1 { BigInt::one() } else { BigInt::zero() };
    }

    // first kind: a free contact becomes a prescribed one
    let mut total = BigRational::zero();
    for k in 1..=key.beta.max_order() {
        if let Some(beta) = key.beta.minus_e(k) {
            let sub = RelativeKey { class: key.class, alpha: key.alpha.plus_e(k), beta };
            total += BigRational::from_integer(recurse(&sub, memo) * k);
        }
    }

    // second kind: E splits off, leaving components in class (a-1)e + (b+n)f
    let big_b = b + n;
    let mut pieces = Vec::new();
    for ai in 0..a {
        for bi in 0..=big_b {
            if ai == 0 && bi != 1 {
                continue;
            }
            for alpha_i in key.alpha.sub_vectors() {
                let Some(rest) = bi.checked_sub(alpha_i.weight()) else { continue };
                for beta_i in ContactVector::of_weight(rest) {
                    for gamma in beta_i.sub_vectors() {
                        if !gamma.le(&key.beta) {
                            continue;
                        }
                        let node = beta_i.checked_sub(&gamma).expect("gamma <= beta_i");
                        if node.size() != 1 {
                            continue;
                        }
                        let pk = RelativeKey {
                            class: RuledSurfaceClass { n, a: ai, b: bi },
                            alpha: alpha_i.clone(),
                            beta: beta_i.clone(),
                        };
                        let points = pk.point_count();
                        if points < 0 {
                            continue;
                        }
                        pieces.push(Piece { key: pk, gamma, node_order: node.max_order(), points });
                    }
                }
            }
        }
    }

    let mut chosen: Vec<usize> = Vec::new();
    let ctx = SplitCtx { key, pieces: &pieces, upsilon };
    ctx.walk(0, a - 1, big_b, &key.alpha, &key.beta, &mut chosen, memo, &mut total);

    assert!(total.is_integer(), "non-integral recursion value for {key}: {total}");
    total.to_integer()
}

struct SplitCtx<'a> {
    key: &'a RelativeKey,
    pieces: &'a [Piece],
    upsilon: i64,
}

impl SplitCtx<'_> {
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        start: usize,
        rem_a: u32,
        rem_b: u32,
        rem_alpha: &ContactVector,
        rem_gamma: &ContactVector,
        chosen: &mut Vec<usize>,
        memo: &mut HashMap<RelativeKey, BigInt>,
        total: &mut BigRational,
    ) {
        if rem_a == 0 && rem_b == 0 {
            if rem_gamma.is_zero() && !chosen.is_empty() {
                *total += self.term(chosen, memo);
            }
            return;
        }
        // pieces are taken in non-decreasing index order; repeats are divided out in `term`
        for i in start..self.pieces.len() {
            let p = &self.pieces[i];
            if p.key.class.a > rem_a || p.key.class.b > rem_b {
                continue;
            }
            let Some(alpha) = rem_alpha.checked_sub(&p.key.alpha) else { continue };
            let Some(gamma) = rem_gamma.checked_sub(&p.gamma) else { continue };
            chosen.push(i);
            self.walk(i, rem_a - p.key.class.a, rem_b - p.key.class.b, &alpha, &gamma, chosen, memo, total);
            chosen.pop();
        }
    }

    fn term(&self, chosen: &[usize], memo: &mut HashMap<RelativeKey, BigInt>) -> BigRational {
        let pts: i64 = chosen.iter().map(|&i| self.pieces[i].points).sum();
        if pts != self.upsilon - 1 {
            return BigRational::zero();
        }
        let mut num = factorial((self.upsilon - 1) as u32);
        let mut den = BigInt::one();
        for &i in chosen {
            let p = &self.pieces[i];
            let value = recurse(&p.key, memo);
            if value.is_zero() {
                return BigRational::zero();
            }
            den *= factorial(p.points as u32);
            num *= value * p.node_order;
            for k in 1..=p.key.beta.max_order() {
                num *= binom(p.key.beta.get(k), p.gamma.get(k));
            }
        }
        // which prescribed points go to which component (the rest stay on E)
        let alpha = &self.key.alpha;
        for k in 1..=alpha.max_order() {
            let mut used = 0;
            num *= factorial(alpha.get(k));
            for &i in chosen {
                let x = self.pieces[i].key.alpha.get(k);
                den *= factorial(x);
                used += x;
            }
            den *= factorial(alpha.get(k) - used);
        }
        // identical components
        let mut run = 1u32;
        for w in chosen.windows(2) {
            if w[0] == w[1] {
                run += 1;
                den *= run;
            } else {
                run = 1;
            }
        }
        BigRational::new(num, den)
    }
}

/// Which provider answers keys missing from the curated table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Engine {
    #[default]
    Table,
    Recursion,
}

/// Curated table first, recursion engine as a fallback when enabled.
#[derive(Clone, Debug)]
pub struct RelativeInvariants {
    table: CuratedTable,
    engine: Engine,
}

impl Default for RelativeInvariants {
    fn default() -> Self {
        Self::new(CuratedTable::builtin(), Engine::Table)
    }
}

impl RelativeInvariants {
    pub fn new(table: CuratedTable, engine: Engine) -> Self {
        Self { table, engine }
    }

    pub fn table(&self) -> &CuratedTable {
        &self.table
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }
}

impl RelativeProvider for RelativeInvariants {
    fn n_sigma(&self, key: &RelativeKey) -> Result<BigInt> {
        match self.table.n_sigma(key) {
            Err(Error::UnknownInvariant(msg)) => match self.engine {
                Engine::Table => Err(Error::UnknownInvariant(msg)),
                Engine::Recursion => match ch_recursion(key) {
                    Err(Error::RecursionOutOfScope(_)) => Err(Error::UnknownInvariant(msg)),
                    other => other,
                },
            },
            other => other,
        }
    }
}

/// Number of rational curves of bidegree `(a, b)` on the quadric surface through
/// `2(a+b) − 1` generic points.
pub fn quadric_count(a: u32, b: u32) -> Result<BigInt> {
    let v: u32 = match (a.min(b), a.max(b)) {
        (0, 1) | (1, 1) | (1, 3) => 1,
        (2, 2) => 12,
        (0, m) if m >= 2 => 0,
        _ => return Err(Error::UnknownInvariant(format!("quadric bidegree ({a},{b})"))),
    };
    Ok(BigInt::from(v))
}

/// Rational curves in class `(a,b) + k·f` on the ruled threefold over the
/// quadric, with one contact of order `k` (prescribed if `alpha = e_k`, free if
/// `beta = e_k`) along the section at infinity.
///
/// The curve projects to a rational `(a, b)` curve through the projected
/// points; when the projection is rigid, the lift is counted on the ruled surface
/// Σ_{a+b} cut out over it.
pub fn n_three(
    a: u32,
    b: u32,
    k: u32,
    alpha: &ContactVector,
    beta: &ContactVector,
    sigma: &dyn RelativeProvider,
) -> Result<BigInt> {
    let label = || format!("N3^{{({a},{b})+{k}f}}({alpha}, {beta})");
    let ek = ContactVector::e(k.max(1));
    let prescribed = match (alpha == &ek && beta.is_zero(), beta == &ek && alpha.is_zero()) {
        (true, _) => true,
        (_, true) => false,
        _ => return Err(Error::UnknownInvariant(label())),
    };
    if k != 1 {
        return Err(Error::UnknownInvariant(label()));
    }
    let h = a + b;
    if h == 0 {
        // a fiber: through its point, or through the prescribed contact
        return Ok(BigInt::one());
    }
    let twice = 3 * h + k + 1 - if prescribed { 2 } else { 0 };
    if twice % 2 != 0 {
        return Err(Error::NegativePointCount(label()));
    }
    let points = (twice / 2) as i64;
    let rigid = 2 * h as i64 - 1;
    if points > rigid {
        return Ok(BigInt::zero());
    }
    if points < rigid {
        return Err(Error::UnknownInvariant(label()));
    }
    let q = quadric_count(a, b)?;
    if q.is_zero() {
        return Ok(q);
    }
    let key = RelativeKey::new(h, 1, k, alpha.clone(), beta.clone())?;
    if key.point_count() != points {
        return Err(Error::UnknownInvariant(label()));
    }
    Ok(q * sigma.n_sigma(&key)?)
}
