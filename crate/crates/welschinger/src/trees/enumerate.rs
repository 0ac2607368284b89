use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::{
    assignment_count, aut_count, canonical_form, canonicalize, shape_form, DecoratedTree, Edge,
    Node, Sign, TreeFamily,
};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Branch {
    g: u32,
    kids: Vec<Kid>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kid {
    /// Even leaf hanging off an odd vertex by an edge of multiplicity `k`.
    Leaf(u32),
    /// Bivalent even connector leading to another odd vertex.
    Via(Box<Branch>),
}

struct Gen {
    family: TreeFamily,
    memo: HashMap<u32, Vec<(Branch, u32)>>,
}

impl Gen {
    /// Branches hanging below a connector (edge of multiplicity 1 to their parent)
    /// with cost at most `budget`, each paired with its cost.
    fn sub_branches(&mut self, budget: u32) -> Vec<(Branch, u32)> {
        if let Some(v) = self.memo.get(&budget) {
            return v.clone();
        }
        let out = self.branches(budget, true);
        self.memo.insert(budget, out.clone());
        out
    }

    fn branches(&mut self, budget: u32, simple_parent: bool) -> Vec<(Branch, u32)> {
        let gw = self.family.genus_weight();
        let mut out = Vec::new();
        for g in 0..=budget / gw {
            if g == 0 {
                // A component with g = 0 is a simple fiber: no further edges.
                if simple_parent {
                    out.push((Branch { g: 0, kids: Vec::new() }, 0));
                }
                continue;
            }
            let rest = budget - gw * g;
            let options = self.kid_options(rest);
            let mut acc = Vec::new();
            multisets(&options, 0, rest, &mut acc, &mut |kids, c| {
                out.push((Branch { g, kids: kids.to_vec() }, gw * g + c));
            });
        }
        out
    }

    fn kid_options(&mut self, budget: u32) -> Vec<(Kid, u32)> {
        let ew = self.family.edge_weight();
        match self.family {
            TreeFamily::ThreeSpherical => Vec::new(),
            TreeFamily::TwoSpherical => {
                if budget >= ew {
                    vec![(Kid::Leaf(1), ew)]
                } else {
                    Vec::new()
                }
            }
            TreeFamily::Projective => {
                let mut v = Vec::new();
                if budget >= 2 * ew {
                    v.push((Kid::Leaf(2), 2 * ew));
                    for (b, c) in self.sub_branches(budget - 2 * ew) {
                        v.push((Kid::Via(Box::new(b)), 2 * ew + c));
                    }
                }
                v
            }
        }
    }
}

/// Calls `emit` for every multiset drawn from `options[start..]` with total cost
/// at most `budget`.
fn multisets<T: Clone>(
    options: &[(T, u32)],
    start: usize,
    budget: u32,
    acc: &mut Vec<T>,
    emit: &mut dyn FnMut(&[T], u32),
) {
    fn go<T: Clone>(
        options: &[(T, u32)],
        start: usize,
        budget: u32,
        spent: u32,
        acc: &mut Vec<T>,
        emit: &mut dyn FnMut(&[T], u32),
    ) {
        emit(acc, spent);
        for i in start..options.len() {
            let (ref item, c) = options[i];
            if c == 0 || spent + c > budget {
                continue;
            }
            acc.push(item.clone());
            go(options, i, budget, spent + c, acc, emit);
            acc.pop();
        }
    }
    go(options, start, budget, 0, acc, emit)
}

#[derive(Clone, Debug)]
pub struct TreeWithCount {
    pub tree: DecoratedTree,
    pub assignment_count: BigInt,
    pub aut_count: BigInt,
}

/// Top-level piece: root-edge multiplicity and the branch behind it.
type Top = (u32, Branch);

fn build(family: TreeFamily, d: u32, r: u32, tops: &[(Top, Sign)]) -> DecoratedTree {
    fn add(nodes: &mut Vec<Node>, edges: &mut Vec<Edge>, parent: usize, k: u32, b: &Branch, sign: Option<Sign>) {
        let id = nodes.len();
        nodes.push(Node::Odd { g: b.g, f_size: 0, sign });
        edges.push(Edge { u: parent, v: id, k });
        for kid in &b.kids {
            let e = nodes.len();
            nodes.push(Node::Even);
            match kid {
                Kid::Leaf(k) => edges.push(Edge { u: id, v: e, k: *k }),
                Kid::Via(sub) => {
                    edges.push(Edge { u: id, v: e, k: 1 });
                    add(nodes, edges, e, 1, sub, None);
                }
            }
        }
    }
    let mut nodes = vec![Node::Even];
    let mut edges = Vec::new();
    for ((k, b), s) in tops {
        add(&mut nodes, &mut edges, 0, *k, b, Some(*s));
    }
    let mut t = DecoratedTree { family, d, r, root: 0, nodes, edges };
    for i in 0..t.nodes.len() {
        if let Node::Odd { g, sign, .. } = t.nodes[i] {
            let f = family
                .point_count(g, t.k_at(i), t.valence(i), sign)
                .unwrap_or(u32::MAX);
            t.nodes[i] = Node::Odd { g, f_size: f, sign };
        }
    }
    t
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            go(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn trees_for_profile(family: TreeFamily, d: u32, r: u32, r_x: u32, tops: &[Top]) -> Vec<DecoratedTree> {
    let k0: u32 = tops.iter().map(|t| t.0).sum();
    let Some(r_l) = family.root_pairs(k0, tops.len() as u32, r) else {
        return Vec::new();
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for minus in combinations(tops.len(), r_l as usize) {
        let signed: Vec<(Top, Sign)> = tops
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), if minus.contains(&i) { Sign::Minus } else { Sign::Plus }))
            .collect();
        let t = build(family, d, r, &signed);
        if t.nodes.iter().any(|n| n.f_size() == u32::MAX) {
            continue;
        }
        if t.r_x() != r_x {
            continue;
        }
        if seen.insert(canonical_form(&t)) {
            out.push(t);
        }
    }
    out
}

/// All decorated trees of the family's geometry for degree `d` and `r` real
/// points, each with the number of point assignments it carries. The output is
/// sorted by canonical form and vertices are numbered in canonical preorder.
pub fn enumerate_trees(family: TreeFamily, d: u32, r: u32) -> Result<Vec<TreeWithCount>> {
    enumerate_trees_with(Strategy::default(), family, d, r)
}

pub fn enumerate_trees_with(strategy: Strategy, family: TreeFamily, d: u32, r: u32) -> Result<Vec<TreeWithCount>> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let r_x = family.r_x(d, r).ok_or(Error::InadmissiblePair {
        what: family.geometry().to_string(),
        d,
        r,
    })?;
    let ew = family.edge_weight();
    let mut gen = Gen { family, memo: HashMap::new() };
    let mut options: Vec<(Top, u32)> = Vec::new();
    for k in 1..=d / ew {
        for (b, c) in gen.branches(d - ew * k, k == 1) {
            options.push(((k, b), ew * k + c));
        }
    }
    options.sort();
    let mut profiles: Vec<Vec<Top>> = Vec::new();
    multisets(&options, 0, d, &mut Vec::new(), &mut |tops, c| {
        if c == d && !tops.is_empty() {
            profiles.push(tops.to_vec());
        }
    });
    let per_profile = exec::map(strategy, &profiles, |tops| trees_for_profile(family, d, r, r_x, tops));
    let mut seen = BTreeSet::new();
    let mut out: Vec<(Vec<u8>, TreeWithCount)> = Vec::new();
    for t in per_profile.into_iter().flatten() {
        let key = canonical_form(&t);
        if !seen.insert(key.clone()) {
            continue;
        }
        let tree = canonicalize(&t);
        let aut = aut_count(&tree);
        let count = assignment_count(&tree, r_x);
        out.push((key, TreeWithCount { tree, assignment_count: count, aut_count: aut }));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|x| x.1).collect())
}

/// Number of distinct underlying trees (ignoring signs and point sizes).
pub fn count_underlying(trees: &[TreeWithCount]) -> usize {
    trees.iter().map(|t| shape_form(&t.tree)).collect::<BTreeSet<_>>().len()
}
