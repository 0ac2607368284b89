//! Self-check suite: published invariant values, tree counts, table closure and
//! structural properties, one report per criterion.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::assembly::{check_congruence, check_sign_law, Calculator};
use crate::contact::{ContactVector, GeometryKind};
use crate::cotangent::{FInvariants, FTable};
use crate::error::Error;
use crate::relative::{ch_recursion, CuratedTable, RelativeKey, RelativeProvider};
use crate::tables::FRole;
use crate::trees::{self, canonical_form, count_underlying, DecoratedTree, Edge, TreeFamily};

use GeometryKind::{EllipsoidQuadric2 as Q2, EllipsoidQuadric3 as Q3, ProjectivePlane as P2};

pub const CP2_VALUES: [(u32, u32, i64); 8] = [
    (4, 1, 0),
    (5, 0, 64),
    (5, 2, 64),
    (6, 1, 1024),
    (6, 3, 1536),
    (7, 0, -14336),
    (7, 2, 11776),
    (8, 1, -280576),
];

pub const QUADRIC2_VALUES: [(u32, u32, i64); 8] = [
    (2, 3, 2),
    (2, 5, 4),
    (2, 7, 6),
    (3, 1, 16),
    (3, 3, 16),
    (4, 1, -256),
    (4, 3, 320),
    (5, 1, 26880),
];

pub const QUADRIC3_VALUES: [(u32, u32, i64); 3] = [(2, 1, -1), (6, 1, 0), (10, 1, -896)];

pub const TREE_COUNTS: [(TreeFamily, u32, u32, usize); 15] = [
    (TreeFamily::Projective, 4, 1, 0),
    (TreeFamily::Projective, 5, 0, 1),
    (TreeFamily::Projective, 5, 2, 1),
    (TreeFamily::Projective, 6, 1, 2),
    (TreeFamily::Projective, 6, 3, 2),
    (TreeFamily::Projective, 7, 0, 2),
    (TreeFamily::Projective, 7, 2, 5),
    (TreeFamily::Projective, 8, 1, 4),
    (TreeFamily::TwoSpherical, 3, 1, 1),
    (TreeFamily::TwoSpherical, 3, 3, 1),
    (TreeFamily::TwoSpherical, 4, 1, 1),
    (TreeFamily::TwoSpherical, 4, 3, 3),
    (TreeFamily::TwoSpherical, 5, 1, 2),
    (TreeFamily::ThreeSpherical, 2, 1, 1),
    (TreeFamily::ThreeSpherical, 10, 1, 1),
];

/// Every published `(geometry, d, r, χ)`.
pub fn golden_values() -> Vec<(GeometryKind, u32, u32, i64)> {
    let tag = |g: GeometryKind, v: &[(u32, u32, i64)]| v.iter().map(move |&(d, r, x)| (g, d, r, x)).collect::<Vec<_>>();
    [tag(P2, &CP2_VALUES), tag(Q2, &QUADRIC2_VALUES), tag(Q3, &QUADRIC3_VALUES)].concat()
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl CriterionReport {
    fn new(id: u32, name: &'static str, failures: Vec<String>) -> Self {
        Self { id, name, pass: failures.is_empty(), failures }
    }
}

fn golden(calc: &Calculator, g: GeometryKind, values: &[(u32, u32, i64)]) -> Vec<String> {
    let mut bad = Vec::new();
    for &(d, r, want) in values {
        match calc.chi(g, d, r) {
            Ok(res) if res.value == BigInt::from(want) => {}
            Ok(res) => bad.push(format!("{g} ({d},{r}): got {}, expected {want}", res.value)),
            Err(e) => bad.push(format!("{g} ({d},{r}): {e}")),
        }
    }
    bad
}

fn tree_counts() -> Vec<String> {
    let mut bad = Vec::new();
    for &(fam, d, r, want) in &TREE_COUNTS {
        match trees::enumerate_trees(fam, d, r) {
            Ok(list) if count_underlying(&list) == want => {}
            Ok(list) => bad.push(format!("{fam} ({d},{r}): {} trees, expected {want}", count_underlying(&list))),
            Err(e) => bad.push(format!("{fam} ({d},{r}): {e}")),
        }
    }
    bad
}

/// Plain table entries re-derived from the base, cross-marked and vanishing
/// entries alone, in `orderings` random expansion orders.
pub fn f_closure(table: &FTable, orderings: u64) -> Vec<String> {
    let base = FInvariants::new(table.restricted(&[FRole::Base, FRole::Cross, FRole::Vanishing]));
    let mut bad = Vec::new();
    for (key, want, role) in table.entries() {
        if role != FRole::Plain {
            continue;
        }
        for seed in 0..orderings {
            let mut rng = StdRng::seed_from_u64(seed);
            match base.f_invariant_shuffled(key, &mut rng) {
                Ok(v) if &v == want => {}
                Ok(v) => {
                    bad.push(format!("{key}: derived {v}, table {want} (ordering {seed})"));
                    break;
                }
                Err(e) => {
                    bad.push(format!("{key}: {e}"));
                    break;
                }
            }
        }
    }
    bad
}

fn congruences(values: &[(GeometryKind, u32, u32, i64)]) -> Vec<String> {
    let mut bad = Vec::new();
    for &(g, d, r, v) in values {
        let rep = check_congruence(g, d, r, &BigInt::from(v));
        for c in rep.clauses.iter().filter(|c| !c.pass) {
            bad.push(format!("{g} ({d},{r}) = {v}: 2^{} does not divide ({})", c.power_of_two, c.name));
        }
    }
    bad
}

fn sign_laws(values: &[(GeometryKind, u32, u32, i64)]) -> Vec<String> {
    let mut bad = Vec::new();
    for &(g, d, r, v) in values {
        let rep = check_sign_law(g, d, r, &BigInt::from(v));
        for c in rep.clauses.iter().filter(|c| !c.pass) {
            bad.push(format!("{g} ({d},{r}) = {v}: {}", c.name));
        }
    }
    bad
}

/// The recursion engine against every curated entry.
pub fn recursion_gate(table: &CuratedTable) -> Vec<String> {
    let mut bad = Vec::new();
    for (key, want, _) in table.entries() {
        match ch_recursion(key) {
            Ok(v) if &v == want => {}
            Ok(v) => bad.push(format!("{key}: recursion {v}, table {want}")),
            Err(e) => bad.push(format!("{key}: {e}")),
        }
    }
    bad
}

/// Random relabeling of the vertices of `t`, root included.
pub fn relabel(t: &DecoratedTree, rng: &mut impl Rng) -> DecoratedTree {
    let mut perm: Vec<usize> = (0..t.nodes.len()).collect();
    perm.shuffle(rng);
    let mut nodes = t.nodes.clone();
    for (old, &new) in perm.iter().enumerate() {
        nodes[new] = t.nodes[old];
    }
    let mut edges: Vec<Edge> = t
        .edges
        .iter()
        .map(|e| if rng.gen() { Edge { u: perm[e.u], v: perm[e.v], k: e.k } } else { Edge { u: perm[e.v], v: perm[e.u], k: e.k } })
        .collect();
    edges.shuffle(rng);
    DecoratedTree { root: perm[t.root], nodes, edges, ..t.clone() }
}

/// A random key outside the curated table (and outside the fiber rule).
pub fn random_off_table_key(table: &CuratedTable, rng: &mut impl Rng) -> RelativeKey {
    loop {
        let n = *[2u32, 4].choose(rng).unwrap();
        let a = rng.gen_range(1..=4);
        let b = rng.gen_range(1..=5);
        let parts = ContactVector::of_weight(b);
        let whole = parts.choose(rng).unwrap().clone();
        let subs = whole.sub_vectors();
        let alpha = subs.choose(rng).unwrap().clone();
        let beta = whole.checked_sub(&alpha).unwrap();
        let Ok(key) = RelativeKey::new(n, a, b, alpha, beta) else { continue };
        if !table.contains(&key) {
            return key;
        }
    }
}

fn properties(calc: &Calculator) -> Vec<String> {
    let mut bad = Vec::new();
    let mut rng = StdRng::seed_from_u64(7);
    let mut all = Vec::new();
    for &(fam, d, r, _) in &TREE_COUNTS {
        if let Ok(list) = trees::enumerate_trees(fam, d, r) {
            all.extend(list);
        }
    }
    for t in &all {
        if let Err(v) = t.tree.validate() {
            bad.push(format!("{}: {}", t.tree, v.join("; ")));
        }
    }
    if !all.is_empty() {
        for _ in 0..200 {
            let t = &all[rng.gen_range(0..all.len())].tree;
            if canonical_form(&relabel(t, &mut rng)) != canonical_form(t) {
                bad.push(format!("relabeling changed the canonical form of {t}"));
                break;
            }
        }
    }
    let table = calc.relative.table();
    for _ in 0..100 {
        let key = random_off_table_key(table, &mut rng);
        match table.n_sigma(&key) {
            Err(Error::UnknownInvariant(_)) | Err(Error::NegativePointCount(_)) => {}
            other => {
                bad.push(format!("{key}: expected an error, got {other:?}"));
                break;
            }
        }
    }
    for (g, d, r, _) in golden_values() {
        if let Ok(res) = calc.chi(g, d, r) {
            if !res.ledger_is_consistent() {
                bad.push(format!("{g} ({d},{r}): ledger does not re-multiply to the value"));
            }
        }
    }
    bad
}

/// Runs criteria 1–9 with the given calculator.
pub fn run_all(calc: &Calculator) -> Vec<CriterionReport> {
    let values = golden_values();
    vec![
        CriterionReport::new(1, "projective plane values", golden(calc, P2, &CP2_VALUES)),
        CriterionReport::new(2, "two-dimensional quadric values", golden(calc, Q2, &QUADRIC2_VALUES)),
        CriterionReport::new(3, "three-dimensional quadric values", golden(calc, Q3, &QUADRIC3_VALUES)),
        CriterionReport::new(4, "tree counts", tree_counts()),
        CriterionReport::new(5, "F closure", f_closure(calc.f.table(), 10)),
        CriterionReport::new(6, "congruences", congruences(&values)),
        CriterionReport::new(7, "sign laws", sign_laws(&values)),
        CriterionReport::new(8, "recursion engine", recursion_gate(calc.relative.table())),
        CriterionReport::new(9, "properties", properties(calc)),
    ]
}
