use std::collections::BTreeSet;

use num_bigint::BigInt;
use welschinger::trees::{
    assignment_count, canonical_form, count_underlying, enumerate_trees, m1_minus, m1_plus,
    m2_reconnection, multiplicity, DecoratedTree, Edge, Node, Sign, TreeFamily,
};
use welschinger::Error;

use TreeFamily::{Projective, ThreeSpherical, TwoSpherical};

fn minus(g: u32, f_size: u32) -> Node {
    Node::Odd { g, f_size, sign: Some(Sign::Minus) }
}
fn plus(g: u32, f_size: u32) -> Node {
    Node::Odd { g, f_size, sign: Some(Sign::Plus) }
}
fn inner(g: u32, f_size: u32) -> Node {
    Node::Odd { g, f_size, sign: None }
}
const E: Node = Node::Even;

fn tree(family: TreeFamily, d: u32, r: u32, nodes: Vec<Node>, edges: &[(usize, usize, u32)]) -> DecoratedTree {
    DecoratedTree {
        family,
        d,
        r,
        root: 0,
        nodes,
        edges: edges.iter().map(|&(u, v, k)| Edge { u, v, k }).collect(),
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn enumeration_examples() {
    assert!(enumerate_trees(Projective, 4, 1).unwrap().is_empty());
    assert_eq!(count_underlying(&enumerate_trees(Projective, 7, 2).unwrap()), 5);
    assert_eq!(count_underlying(&enumerate_trees(TwoSpherical, 4, 3).unwrap()), 3);
    assert_eq!(enumerate_trees(ThreeSpherical, 10, 1).unwrap().len(), 1);
}

#[test]
fn decorated_classes_can_outnumber_underlying_trees() {
    // At (6,3) one underlying tree carries two sign partitions.
    let list = enumerate_trees(Projective, 6, 3).unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(count_underlying(&list), 2);
}

#[test]
fn enumeration_rejects_bad_pairs() {
    assert!(matches!(enumerate_trees(Projective, 6, 2), Err(Error::InadmissiblePair { .. })));
    assert!(matches!(enumerate_trees(ThreeSpherical, 3, 0), Err(Error::InadmissiblePair { .. })));
    assert!(matches!(enumerate_trees(Projective, 0, 0), Err(Error::ZeroDegree)));
}

#[test]
fn enumeration_is_sorted_and_canonically_numbered() {
    let list = enumerate_trees(Projective, 8, 1).unwrap();
    let forms: Vec<_> = list.iter().map(|t| canonical_form(&t.tree)).collect();
    let mut sorted = forms.clone();
    sorted.sort();
    assert_eq!(forms, sorted);
    for t in &list {
        assert_eq!(t.tree.root, 0);
        assert_eq!(welschinger::trees::canonicalize(&t.tree), t.tree);
    }
}

#[test]
fn multiplicity_examples() {
    let t = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert_eq!(multiplicity(&t), big(64));
    // 2^7 · 2; the relative factor N^{e+2f}(0, e2) = 2 brings the term to 512
    let t = tree(Projective, 6, 1, vec![E, minus(1, 8)], &[(0, 1, 2)]);
    assert_eq!(multiplicity(&t), big(256));
    let term = welschinger::chi(welschinger::GeometryKind::ProjectivePlane, 6, 1)
        .unwrap()
        .ledger
        .into_iter()
        .find(|row| row.multiplicity == big(256))
        .unwrap();
    assert_eq!(term.contribution, big(512));
    let t = tree(ThreeSpherical, 10, 1, vec![E, minus(4, 7)], &[(0, 1, 1)]);
    assert_eq!(multiplicity(&t), big(64));
}

#[test]
fn m1_minus_examples() {
    let t = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert_eq!(m1_minus(&t), big(1));
    // (7,0): a Minus vertex with two simple edges, one toward a fiber
    let t = tree(Projective, 7, 0, vec![E, minus(1, 9), E, inner(0, 1)], &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]);
    assert_eq!(m1_minus(&t), big(2));
    let t = tree(Projective, 7, 0, vec![E, minus(1, 9), E], &[(0, 1, 2), (1, 2, 1)]);
    assert_eq!(m1_minus(&t), big(1));
}

#[test]
fn m1_plus_examples() {
    let t = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert_eq!(m1_plus(&t), big(1));
    // One Plus vertex carries points; it may use either of the two simple root
    // edges toward Plus vertices, so there are two injections.
    let t = tree(Projective, 5, 4, vec![E, plus(1, 6), plus(0, 0)], &[(0, 1, 1), (0, 2, 1)]);
    assert_eq!(m1_plus(&t), big(2));
    let t = tree(Projective, 5, 4, vec![E, plus(0, 0)], &[(0, 1, 1)]);
    assert_eq!(m1_plus(&t), big(1));
}

#[test]
fn m2_examples() {
    let t = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert_eq!(m2_reconnection(&t), big(1));
    // (8,1): one connector with a free contact on each side
    let t = tree(
        Projective,
        8,
        1,
        vec![E, inner(0, 1), minus(1, 9), E, minus(0, 1)],
        &[(0, 2, 1), (2, 3, 1), (3, 1, 1), (0, 4, 1)],
    );
    assert_eq!(m2_reconnection(&t), big(1));
    // Two connectors from s to identical branches t1, t2. Of the three pairings
    // of the ends {s, t1, s, t2}, (s,t1)(s,t2) and (s,t2)(t1,s) rebuild the tree
    // and (s,s)(t1,t2) does not.
    let t = tree(
        Projective,
        13,
        0,
        vec![E, minus(1, 0), E, inner(1, 0), E, inner(1, 0)],
        &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (1, 4, 1), (4, 5, 1)],
    );
    assert_eq!(m2_reconnection(&t), big(2));
}

#[test]
fn assignment_count_examples() {
    let t = tree(Projective, 6, 1, vec![E, minus(0, 1), minus(1, 7)], &[(0, 1, 1), (0, 2, 1)]);
    assert_eq!(assignment_count(&t, 8), big(8));
    let t = tree(
        Projective,
        8,
        1,
        vec![E, minus(0, 1), minus(1, 9), E, inner(0, 1)],
        &[(0, 1, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1)],
    );
    assert_eq!(assignment_count(&t, 11), big(110));
    let t = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert_eq!(assignment_count(&t, 7), big(1));
}

#[test]
fn canonical_form_separates_decorations() {
    let a = tree(Projective, 6, 1, vec![E, minus(0, 1), minus(1, 7)], &[(0, 1, 1), (0, 2, 1)]);
    let relabeled = DecoratedTree {
        root: 2,
        nodes: vec![minus(1, 7), minus(0, 1), E],
        edges: vec![Edge { u: 1, v: 2, k: 1 }, Edge { u: 2, v: 0, k: 1 }],
        ..a.clone()
    };
    assert_eq!(canonical_form(&a), canonical_form(&relabeled));
    let other_g = tree(Projective, 6, 1, vec![E, minus(0, 1), minus(2, 7)], &[(0, 1, 1), (0, 2, 1)]);
    assert_ne!(canonical_form(&a), canonical_form(&other_g));
    let other_sign = tree(Projective, 6, 1, vec![E, plus(0, 1), minus(1, 7)], &[(0, 1, 1), (0, 2, 1)]);
    assert_ne!(canonical_form(&a), canonical_form(&other_sign));
}

#[test]
fn validator_reports_violations() {
    let good = tree(Projective, 5, 0, vec![E, minus(1, 7)], &[(0, 1, 1)]);
    assert!(good.validate().is_ok());
    let wrong_f = tree(Projective, 5, 0, vec![E, minus(1, 6)], &[(0, 1, 1)]);
    assert!(wrong_f.validate().is_err());
    let cyclic = tree(Projective, 5, 0, vec![E, minus(1, 7), E], &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
    assert!(cyclic.validate().is_err());
    let fat_fiber = tree(Projective, 2, 1, vec![E, minus(0, 1)], &[(0, 1, 2)]);
    assert!(fat_fiber.validate().is_err());
}

/// Root-fixing automorphisms by brute force over label-preserving bijections.
fn automorphisms(t: &DecoratedTree) -> Vec<Vec<usize>> {
    let n = t.nodes.len();
    let has = |u: usize, v: usize, k: u32| t.edges.iter().any(|e| e.k == k && ((e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)));
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        t: &DecoratedTree,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        has: &dyn Fn(usize, usize, u32) -> bool,
    ) {
        let n = t.nodes.len();
        if i == n {
            if t.edges.iter().all(|e| has(perm[e.u], perm[e.v], e.k)) {
                out.push(perm.clone());
            }
            return;
        }
        for j in 0..n {
            if used[j] || t.nodes[j] != t.nodes[i] || (i == t.root) != (j == t.root) || t.valence(i) != t.valence(j) {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            go(i + 1, t, perm, used, out, has);
            used[j] = false;
        }
    }
    go(0, t, &mut perm, &mut used, &mut out, &has);
    out
}

/// Orbits of labelled point-pair assignments under the automorphisms.
fn orbit_count(t: &DecoratedTree) -> Option<usize> {
    let slots: Vec<(usize, u32)> =
        (0..t.nodes.len()).filter(|&v| t.nodes[v].f_size() > 0).map(|v| (v, t.nodes[v].f_size())).collect();
    let r_x: u32 = slots.iter().map(|s| s.1).sum();
    if r_x > 12 {
        return None;
    }
    let autos = automorphisms(t);
    let mut reps = BTreeSet::new();
    let mut cur = Vec::new();
    let mut left: Vec<u32> = slots.iter().map(|s| s.1).collect();
    fn go(
        i: u32,
        r_x: u32,
        slots: &[(usize, u32)],
        left: &mut Vec<u32>,
        cur: &mut Vec<usize>,
        autos: &[Vec<usize>],
        reps: &mut BTreeSet<Vec<usize>>,
    ) {
        if i == r_x {
            let rep = autos.iter().map(|p| cur.iter().map(|&v| p[v]).collect::<Vec<_>>()).min().unwrap();
            reps.insert(rep);
            return;
        }
        for s in 0..slots.len() {
            if left[s] > 0 {
                left[s] -= 1;
                cur.push(slots[s].0);
                go(i + 1, r_x, slots, left, cur, autos, reps);
                cur.pop();
                left[s] += 1;
            }
        }
    }
    go(0, r_x, &slots, &mut left, &mut cur, &autos, &mut reps);
    Some(reps.len())
}

#[test]
fn assignment_counts_match_brute_force_orbits() {
    let pairs = [
        (Projective, 3, 0),
        (Projective, 3, 2),
        (Projective, 5, 2),
        (Projective, 6, 1),
        (Projective, 6, 3),
        (Projective, 7, 0),
        (Projective, 7, 2),
        (Projective, 8, 1),
        (TwoSpherical, 3, 1),
        (TwoSpherical, 4, 3),
        (TwoSpherical, 4, 5),
        (TwoSpherical, 5, 1),
        (ThreeSpherical, 6, 1),
    ];
    let mut checked = 0;
    for (fam, d, r) in pairs {
        for t in enumerate_trees(fam, d, r).unwrap() {
            if let Some(n) = orbit_count(&t.tree) {
                assert_eq!(t.assignment_count, BigInt::from(n), "{}", t.tree);
                assert_eq!(t.aut_count, BigInt::from(automorphisms(&t.tree).len()), "{}", t.tree);
                checked += 1;
            }
        }
    }
    assert!(checked >= 15, "only {checked} trees small enough for brute force");
}

#[test]
fn multiplicity_is_positive_and_divisible_by_edge_product() {
    for fam in TreeFamily::ALL {
        for d in 1..=8 {
            for r in 0..=12 {
                let Ok(list) = enumerate_trees(fam, d, r) else { continue };
                for t in list {
                    let m = multiplicity(&t.tree);
                    assert!(m >= big(1));
                    assert_eq!(&m % t.tree.edge_product(), big(0));
                    assert!(t.tree.validate().is_ok(), "{}", t.tree);
                }
            }
        }
    }
}

#[test]
fn dump_is_json_with_stable_ids() {
    let list = enumerate_trees(Projective, 7, 2).unwrap();
    let a = serde_json::to_string(&list.iter().map(|t| t.dump()).collect::<Vec<_>>()).unwrap();
    let b = serde_json::to_string(&enumerate_trees(Projective, 7, 2).unwrap().iter().map(|t| t.dump()).collect::<Vec<_>>()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), list.len());
    assert_eq!(v[0]["vertices"][0]["parity"], "even");
}
