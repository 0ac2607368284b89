//! Welschinger invariants assembled from decorated trees, `F` values of the
//! cotangent bundle and relative invariants of the complement.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::contact::{genus_smooth, degree_expected, ContactVector, GeometryKind};
use crate::cotangent::{FInvariants, FKey};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::relative::{n_three, RelativeInvariants, RelativeKey, RelativeProvider};
use crate::trees::{self, json_integer, DecoratedTree, Sign, TreeFamily, TreeWithCount};

/// One factor `N` of a tree contribution, with a readable key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeFactor {
    pub key: String,
    #[serde(serialize_with = "ser_big")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub tree: String,
    pub sign: i8,
    #[serde(serialize_with = "ser_big")]
    pub assignment_count: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub multiplicity: BigInt,
    pub f_key: String,
    #[serde(serialize_with = "ser_big")]
    pub f_value: BigInt,
    pub relative: Vec<RelativeFactor>,
    #[serde(serialize_with = "ser_big")]
    pub contribution: BigInt,
}

impl LedgerEntry {
    /// Product of the recorded factors; equals `contribution` for a sound row.
    pub fn remultiply(&self) -> BigInt {
        let mut v = BigInt::from(self.sign) * &self.assignment_count * &self.multiplicity * &self.f_value;
        for f in &self.relative {
            v *= &f.value;
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiResult {
    pub geometry: GeometryKind,
    pub d: u32,
    pub r: u32,
    #[serde(serialize_with = "ser_big")]
    pub value: BigInt,
    pub ledger: Vec<LedgerEntry>,
}

impl ChiResult {
    /// Every row re-multiplies to its contribution and the rows add up to the value.
    pub fn ledger_is_consistent(&self) -> bool {
        let mut sum = BigInt::zero();
        for row in &self.ledger {
            if row.remultiply() != row.contribution {
                return false;
            }
            sum += &row.contribution;
        }
        sum == self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ChiEntry {
    Value {
        #[serde(serialize_with = "ser_big")]
        value: BigInt,
    },
    Unavailable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiPolynomial {
    pub geometry: GeometryKind,
    pub d: u32,
    pub coefficients: BTreeMap<u32, ChiEntry>,
}

impl ChiPolynomial {
    pub fn get(&self, r: u32) -> Option<&BigInt> {
        match self.coefficients.get(&r) {
            Some(ChiEntry::Value { value }) => Some(value),
            _ => None,
        }
    }
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_integer(v).serialize(s)
}

#[derive(Clone, Debug, Default)]
pub struct Calculator {
    pub relative: RelativeInvariants,
    pub f: FInvariants,
    pub strategy: Strategy,
}

impl Calculator {
    pub fn new(relative: RelativeInvariants, f: FInvariants, strategy: Strategy) -> Self {
        Self { relative, f, strategy }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn chi(&self, geometry: GeometryKind, d: u32, r: u32) -> Result<ChiResult> {
        let family = TreeFamily::for_geometry(geometry);
        let list = trees::enumerate_trees_with(self.strategy, family, d, r)?;
        let ledger = exec::try_map(self.strategy, &list, |t| {
            self.contribution(t).map_err(|e| Error::InTree {
                tree: t.tree.to_string(),
                source_err: Box::new(e),
            })
        })?;
        let value = ledger.iter().map(|row| &row.contribution).sum();
        Ok(ChiResult { geometry, d, r, value, ledger })
    }

    /// The value row of one tree.
    pub fn contribution(&self, item: &TreeWithCount) -> Result<LedgerEntry> {
        let t = &item.tree;
        let kind = t.family.lagrangian();
        let fkey = FKey::with_points(kind, t.alpha_minus(), t.beta_plus(), t.r, 0)?;
        let relative = self.relative_factors(t)?;
        // A vanishing complement factor makes the F value irrelevant; we still
        // resolve it so that missing data is reported rather than hidden.
        let f_value = self.f.f_invariant(&fkey)?;
        let sign: i8 = match t.family {
            TreeFamily::ThreeSpherical => 1,
            _ if t.even_count() % 2 == 1 => 1,
            _ => -1,
        };
        let multiplicity = trees::multiplicity(t);
        let mut row = LedgerEntry {
            tree: t.to_string(),
            sign,
            assignment_count: item.assignment_count.clone(),
            multiplicity,
            f_key: fkey.to_string(),
            f_value,
            relative,
            contribution: BigInt::zero(),
        };
        row.contribution = row.remultiply();
        Ok(row)
    }

    fn relative_factors(&self, t: &DecoratedTree) -> Result<Vec<RelativeFactor>> {
        let n = match t.family {
            TreeFamily::Projective => 4,
            TreeFamily::TwoSpherical => 2,
            TreeFamily::ThreeSpherical => 0,
        };
        let mut out = Vec::new();
        for s in t.odd_vertices() {
            let g = t.nodes[s].g();
            let k_s = t.k_at(s);
            let sign = t.nodes[s].sign();
            if t.family == TreeFamily::ThreeSpherical {
                let (alpha, beta) = match sign {
                    Some(Sign::Plus) => (ContactVector::e(k_s), ContactVector::zero()),
                    _ => (ContactVector::zero(), ContactVector::e(k_s)),
                };
                let mut sum = BigInt::zero();
                for a in 0..=g {
                    sum += n_three(a, g - a, k_s, &alpha, &beta, &self.relative)?;
                }
                out.push(RelativeFactor {
                    key: format!("sum_{{a+b={g}}} N3^{{(a,b)+{k_s}f}}({alpha}, {beta})"),
                    value: sum,
                });
                continue;
            }
            let all = t.contacts_at(s);
            let key = if sign == Some(Sign::Plus) {
                let k0 = t.root_edge_of(s).expect("Plus vertices sit next to the root");
                let rest = all.minus_e(k0).expect("the root edge is among the vertex edges");
                RelativeKey::new(n, g, k_s, ContactVector::e(k0), rest)?
            } else {
                RelativeKey::new(n, g, k_s, ContactVector::zero(), all)?
            };
            let value = self.relative.n_sigma(&key)?;
            out.push(RelativeFactor { key: key.to_string(), value });
        }
        Ok(out)
    }

    /// χ for every admissible `r ≤ r_max`; entries that need unavailable data are
    /// flagged instead of dropped.
    pub fn chi_polynomial(&self, geometry: GeometryKind, d: u32, r_max: u32) -> ChiPolynomial {
        let rs: Vec<u32> = (0..=r_max).filter(|&r| geometry.split_points(d, r).is_some()).collect();
        let per_r = exec::map(self.strategy, &rs, |&r| match self.chi(geometry, d, r) {
            Ok(res) => ChiEntry::Value { value: res.value },
            Err(e) => ChiEntry::Unavailable { reason: e.to_string() },
        });
        ChiPolynomial { geometry, d, coefficients: rs.into_iter().zip(per_r).collect() }
    }

    pub fn lower_bound_report(&self, geometry: GeometryKind, d: u32, r: u32) -> Result<LowerBound> {
        let chi = self.chi(geometry, d, r)?.value;
        Ok(LowerBound { abs_lower_bound: chi.abs(), chi, upper_bound: "not computed" })
    }

    /// Computable `(d, r)` pairs for `d ≤ d_max`, with the missing key for the rest.
    pub fn frontier(&self, geometry: GeometryKind, d_max: u32) -> Vec<FrontierEntry> {
        let mut pairs = Vec::new();
        for d in 1..=d_max {
            let top = match geometry {
                GeometryKind::EllipsoidQuadric3 => 3 * d / 2,
                _ => degree_expected(geometry, d).max(0) as u32,
            };
            for r in 0..=top {
                if geometry.split_points(d, r).is_some() {
                    pairs.push((d, r));
                }
            }
        }
        exec::map(self.strategy, &pairs, |&(d, r)| {
            let missing = match self.chi(geometry, d, r) {
                Ok(_) => None,
                Err(e) => Some(e.root_cause().to_string()),
            };
            FrontierEntry { geometry, d, r, computable: missing.is_none(), missing }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    #[serde(serialize_with = "ser_big")]
    pub chi: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub abs_lower_bound: BigInt,
    pub upper_bound: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrontierEntry {
    pub geometry: GeometryKind,
    pub d: u32,
    pub r: u32,
    pub computable: bool,
    pub missing: Option<String>,
}

/// χ with the built-in tables.
pub fn chi(geometry: GeometryKind, d: u32, r: u32) -> Result<ChiResult> {
    Calculator::default().chi(geometry, d, r)
}

pub fn chi_polynomial(geometry: GeometryKind, d: u32, r_max: u32) -> ChiPolynomial {
    Calculator::default().chi_polynomial(geometry, d, r_max)
}

pub fn lower_bound_report(geometry: GeometryKind, d: u32, r: u32) -> Result<LowerBound> {
    Calculator::default().lower_bound_report(geometry, d, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub power_of_two: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub geometry: GeometryKind,
    pub d: u32,
    pub r: u32,
    pub clauses: Vec<Clause>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

fn divides(power: u32, value: &BigInt) -> bool {
    value.is_zero() || (value.abs() % (BigInt::one() << power)).is_zero()
}

/// Divisibility by powers of two that the invariant is known to satisfy; only
/// the clauses whose hypotheses hold are listed.
pub fn check_congruence(geometry: GeometryKind, d: u32, r: u32, value: &BigInt) -> CheckReport {
    let mut clauses = Vec::new();
    let mut push = |name: String, p: u32| clauses.push(Clause { pass: divides(p, value), name, power_of_two: p });
    let (d_, r_) = (d as i64, r as i64);
    match geometry {
        GeometryKind::ProjectivePlane => {
            if let Some(rx) = geometry.split_points(d, r) {
                let rx = rx as i64;
                if r_ + 1 < rx {
                    push("r+1 < r_X".into(), (rx - r_ - 1) as u32);
                }
                if r_ < rx && (r_ - d_ - 1).rem_euclid(4) == 0 {
                    push("r < r_X, r = d+1 mod 4".into(), (rx - r_) as u32);
                }
            }
            if r_ + 1 < d_ {
                push("r+1 < d".into(), 6);
            }
        }
        GeometryKind::EllipsoidQuadric2 => {
            if r_ < 2 * d_ - 1 {
                push("r < 2d-1".into(), (2 * d_ - r_ - 1) as u32);
            }
            if r_ < 2 * d_ && (r_ - 2 * d_ - 1).rem_euclid(4) == 0 {
                push("r < 2d, r = 2d+1 mod 4".into(), (2 * d_ - r_) as u32);
            }
            if d >= 2 && r_ == 2 * d_ - 3 {
                push("r = 2d-3".into(), 4);
            }
        }
        GeometryKind::EllipsoidQuadric3 => {
            let q = 3 * (d_ - 2 * r_);
            if 6 * r_ < 3 * d_ && q.is_multiple_of(&4) {
                push("6r+1 <= 3d".into(), (q / 4) as u32);
            }
        }
    }
    CheckReport { geometry, d, r, clauses }
}

/// Sign constraints: `(−1)^{g_d} χ ≥ 0` for `r ≤ 1` on surfaces, and `χ_1 ≤ 0` on
/// the threefold when `3d = 2 mod 4`.
pub fn check_sign_law(geometry: GeometryKind, d: u32, r: u32, value: &BigInt) -> CheckReport {
    let mut clauses = Vec::new();
    match geometry {
        GeometryKind::EllipsoidQuadric3 => {
            if r == 1 && (3 * d) % 4 == 2 {
                clauses.push(Clause { name: "chi_1 <= 0".into(), power_of_two: 0, pass: !value.is_positive() });
            }
        }
        _ => {
            if r <= 1 {
                let g = genus_smooth(geometry, d).expect("surfaces have a smooth genus");
                let signed = if g.rem_euclid(2) == 1 { -value } else { value.clone() };
                clauses.push(Clause {
                    name: format!("(-1)^{g} chi >= 0"),
                    power_of_two: 0,
                    pass: !signed.is_negative(),
                });
            }
        }
    }
    CheckReport { geometry, d, r, clauses }
}
