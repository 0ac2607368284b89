use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{canonical_form, stabilizer_count, aut_count, DecoratedTree, Edge, Sign, TreeFamily};

/// Product over Minus vertices of the number of their edges whose multiplicity
/// equals that of the edge to the root.
pub fn m1_minus(t: &DecoratedTree) -> BigInt {
    let adj = t.adjacency();
    let mut m = BigInt::one();
    for s in t.with_sign(Sign::Minus) {
        let k0 = t.root_edge_of(s).expect("Minus vertices sit next to the root");
        m *= adj[s].iter().filter(|&&(_, k)| k == k0).count();
    }
    m
}

/// Injections from Plus vertices carrying points into root edges toward Plus
/// vertices, preserving multiplicity.
pub fn m1_plus(t: &DecoratedTree) -> BigInt {
    let mut slots: BTreeMap<u32, u32> = BTreeMap::new();
    let mut need: BTreeMap<u32, u32> = BTreeMap::new();
    for s in t.with_sign(Sign::Plus) {
        let k = t.root_edge_of(s).expect("Plus vertices sit next to the root");
        *slots.entry(k).or_default() += 1;
        if t.nodes[s].f_size() > 0 {
            *need.entry(k).or_default() += 1;
        }
    }
    let mut m = BigInt::one();
    for (k, j) in need {
        let n = slots[&k];
        for i in 0..j {
            m *= n - i;
        }
    }
    m
}

fn matchings(items: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if items.is_empty() {
        out.push(acc.clone());
        return;
    }
    let first = items.remove(0);
    for i in 0..items.len() {
        let other = items.remove(i);
        acc.push((first, other));
        matchings(items, acc, out);
        acc.pop();
        items.insert(i, other);
    }
    items.insert(0, first);
}

/// Ways to reconnect the forest left by removing the bivalent connectors into
/// a tree isomorphic to the original.
pub fn m2_reconnection(t: &DecoratedTree) -> BigInt {
    let connectors = t.bivalent_connectors();
    if connectors.is_empty() {
        return BigInt::one();
    }
    let is_conn = |v: usize| connectors.contains(&v);
    let base: Vec<Edge> = t.edges.iter().copied().filter(|e| !is_conn(e.u) && !is_conn(e.v)).collect();
    let mut ends = Vec::new();
    for &c in &connectors {
        for e in &t.edges {
            if e.u == c {
                ends.push(e.v);
            } else if e.v == c {
                ends.push(e.u);
            }
        }
    }
    let target = canonical_form(t);
    let mut all = Vec::new();
    let mut idx: Vec<usize> = (0..ends.len()).collect();
    matchings(&mut idx, &mut Vec::new(), &mut all);
    let mut count = BigInt::zero();
    for m in all {
        let mut edges = base.clone();
        for (&(a, b), &c) in m.iter().zip(&connectors) {
            edges.push(Edge { u: ends[a], v: c, k: 1 });
            edges.push(Edge { u: c, v: ends[b], k: 1 });
        }
        let cand = DecoratedTree { edges, ..t.clone() };
        if cand.depths().is_some() && canonical_form(&cand) == target {
            count += 1;
        }
    }
    count
}

/// Number of inequivalent ways to hand out `r_x` labelled point pairs with the
/// tree's `#f` profile, up to decorated automorphisms (Burnside: only automorphisms
/// fixing every vertex with points fix an assignment).
pub fn assignment_count(t: &DecoratedTree, r_x: u32) -> BigInt {
    assert_eq!(t.r_x(), r_x, "f sizes do not add up to r_X");
    let mut multinomial: BigInt = (1..=r_x).fold(BigInt::one(), |a, i| a * i);
    for n in &t.nodes {
        for i in 1..=n.f_size() {
            multinomial /= i;
        }
    }
    multinomial * stabilizer_count(t) / aut_count(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityParts {
    pub power_of_two: u32,
    pub m1_plus: BigInt,
    pub m1_minus: BigInt,
    pub m2: BigInt,
    pub edge_product: BigInt,
}

impl MultiplicityParts {
    pub fn value(&self) -> BigInt {
        (BigInt::one() << self.power_of_two) * &self.m1_plus * &self.m1_minus * &self.m2 * &self.edge_product
    }
}

pub fn multiplicity_parts(t: &DecoratedTree) -> MultiplicityParts {
    let mut pow = 0u32;
    for s in t.odd_vertices() {
        let n = &t.nodes[s];
        pow += if n.sign() == Some(Sign::Plus) { n.f_size() } else { n.f_size().saturating_sub(1) };
    }
    let one = BigInt::one();
    match t.family {
        TreeFamily::Projective => MultiplicityParts {
            power_of_two: pow + t.bivalent_connectors().len() as u32,
            m1_plus: m1_plus(t),
            m1_minus: m1_minus(t),
            m2: m2_reconnection(t),
            edge_product: t.edge_product(),
        },
        TreeFamily::TwoSpherical => MultiplicityParts {
            power_of_two: pow + t.even_count() as u32 - 1,
            m1_plus: m1_plus(t),
            m1_minus: m1_minus(t),
            m2: one,
            edge_product: t.edge_product(),
        },
        TreeFamily::ThreeSpherical => MultiplicityParts {
            power_of_two: pow,
            m1_plus: m1_plus(t),
            m1_minus: one.clone(),
            m2: one,
            edge_product: t.edge_product(),
        },
    }
}

pub fn multiplicity(t: &DecoratedTree) -> BigInt {
    multiplicity_parts(t).value()
}
