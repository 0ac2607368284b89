//! AHU-style encodings of rooted decorated trees, and automorphism counts read
//! off the same recursion.

use num_bigint::BigInt;
use num_traits::One;

use super::{DecoratedTree, Node, Sign};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Labels {
    Full,
    Shape,
    /// Full labels, with every vertex carrying points made unique.
    PinPoints,
}

fn label(node: &Node, id: usize, mode: Labels) -> String {
    match *node {
        Node::Even => "E".to_string(),
        Node::Odd { g, f_size, sign } => {
            if mode == Labels::Shape {
                return format!("O{g}");
            }
            let s = match sign {
                Some(Sign::Plus) => '+',
                Some(Sign::Minus) => '-',
                None => '.',
            };
            if mode == Labels::PinPoints && f_size > 0 {
                format!("O{g}{s}{f_size}#{id}")
            } else {
                format!("O{g}{s}{f_size}")
            }
        }
    }
}

/// Returns the encoding and automorphism count of the subtree at `v`, plus the
/// children of `v` sorted by encoding.
fn encode(
    t: &DecoratedTree,
    adj: &[Vec<(usize, u32)>],
    v: usize,
    parent: Option<usize>,
    mode: Labels,
    order: &mut Option<&mut Vec<Vec<usize>>>,
) -> (String, BigInt) {
    let mut kids: Vec<(String, BigInt, usize)> = adj[v]
        .iter()
        .filter(|&&(w, _)| Some(w) != parent)
        .map(|&(w, k)| {
            let (s, a) = encode(t, adj, w, Some(v), mode, order);
            (format!("{k}:{s}"), a, w)
        })
        .collect();
    kids.sort_by(|a, b| a.0.cmp(&b.0));
    let mut aut = BigInt::one();
    let mut run = 0u32;
    for i in 0..kids.len() {
        run = if i > 0 && kids[i].0 == kids[i - 1].0 { run + 1 } else { 1 };
        aut *= &kids[i].1 * run;
    }
    if let Some(o) = order.as_deref_mut() {
        o[v] = kids.iter().map(|k| k.2).collect();
    }
    let body: Vec<&str> = kids.iter().map(|k| k.0.as_str()).collect();
    (format!("{}({})", label(&t.nodes[v], v, mode), body.join(",")), aut)
}

fn run(t: &DecoratedTree, mode: Labels) -> (String, BigInt) {
    let adj = t.adjacency();
    encode(t, &adj, t.root, None, mode, &mut None)
}

/// Isomorphism-invariant encoding with every decoration folded into the labels.
pub fn canonical_form(t: &DecoratedTree) -> Vec<u8> {
    let (s, _) = run(t, Labels::Full);
    format!("{}|{}|{}|{}", t.family, t.d, t.r, s).into_bytes()
}

/// Encoding of the underlying tree: shape, multiplicities and `g` only.
pub fn shape_form(t: &DecoratedTree) -> Vec<u8> {
    let (s, _) = run(t, Labels::Shape);
    format!("{}|{}|{}", t.family, t.d, s).into_bytes()
}

/// Order of the group of root-fixing automorphisms preserving all decorations.
pub fn aut_count(t: &DecoratedTree) -> BigInt {
    run(t, Labels::Full).1
}

/// Order of the subgroup fixing every vertex that carries points.
pub fn stabilizer_count(t: &DecoratedTree) -> BigInt {
    run(t, Labels::PinPoints).1
}

/// Relabels vertices in canonical preorder (root first) and lists edges in
/// discovery order, so isomorphic trees become identical values.
pub fn canonicalize(t: &DecoratedTree) -> DecoratedTree {
    let adj = t.adjacency();
    let mut order = vec![Vec::new(); t.nodes.len()];
    encode(t, &adj, t.root, None, Labels::Full, &mut Some(&mut order));
    let mut new_id = vec![usize::MAX; t.nodes.len()];
    let mut nodes = Vec::with_capacity(t.nodes.len());
    let mut edges = Vec::with_capacity(t.edges.len());
    let mut stack = vec![(t.root, None::<(usize, u32)>)];
    while let Some((v, from)) = stack.pop() {
        new_id[v] = nodes.len();
        nodes.push(t.nodes[v]);
        if let Some((p, k)) = from {
            edges.push(super::Edge { u: new_id[p], v: new_id[v], k });
        }
        for &w in order[v].iter().rev() {
            let k = adj[v].iter().find(|&&(x, _)| x == w).map(|&(_, k)| k).unwrap();
            stack.push((w, Some((v, k))));
        }
    }
    DecoratedTree { family: t.family, d: t.d, r: t.r, root: 0, nodes, edges }
}
