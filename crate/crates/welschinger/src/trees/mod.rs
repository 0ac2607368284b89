//! Decorated trees coding two-level degenerations of real rational curves.
//!
//! The root `s₀` is the real component in the cotangent bundle; vertices at odd
//! distance are pairs of conjugate curves in the complement, and even vertices
//! other than the root are components glued along closed geodesics.

mod canon;
mod enumerate;
mod mult;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::contact::{ContactVector, GeometryKind, LagrangianKind};

pub use canon::{aut_count, canonical_form, canonicalize, shape_form, stabilizer_count};
pub use enumerate::{count_underlying, enumerate_trees, enumerate_trees_with, TreeWithCount};
pub use mult::{
    assignment_count, m1_minus, m1_plus, m2_reconnection, multiplicity, multiplicity_parts,
    MultiplicityParts,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TreeFamily {
    Projective,
    TwoSpherical,
    ThreeSpherical,
}

impl TreeFamily {
    pub const ALL: [TreeFamily; 3] =
        [TreeFamily::Projective, TreeFamily::TwoSpherical, TreeFamily::ThreeSpherical];

    pub fn for_geometry(g: GeometryKind) -> Self {
        match g {
            GeometryKind::ProjectivePlane => Self::Projective,
            GeometryKind::EllipsoidQuadric2 => Self::TwoSpherical,
            GeometryKind::EllipsoidQuadric3 => Self::ThreeSpherical,
        }
    }

    pub fn geometry(self) -> GeometryKind {
        match self {
            Self::Projective => GeometryKind::ProjectivePlane,
            Self::TwoSpherical => GeometryKind::EllipsoidQuadric2,
            Self::ThreeSpherical => GeometryKind::EllipsoidQuadric3,
        }
    }

    pub fn lagrangian(self) -> LagrangianKind {
        self.geometry().lagrangian()
    }

    /// Degree contributed by one unit of edge multiplicity.
    pub(crate) fn edge_weight(self) -> u32 {
        match self {
            Self::ThreeSpherical => 2,
            _ => 1,
        }
    }

    /// Degree contributed by one unit of `g`.
    pub(crate) fn genus_weight(self) -> u32 {
        match self {
            Self::Projective => 4,
            _ => 2,
        }
    }

    /// Conjugate pairs `r_X` for real points `r`, if `(d, r)` is admissible.
    pub fn r_x(self, d: u32, r: u32) -> Option<u32> {
        self.geometry().split_points(d, r)
    }

    /// Number of Minus vertices forced by the root window, or `None` outside it.
    pub fn root_pairs(self, k0: u32, v0: u32, r: u32) -> Option<u32> {
        let (k0, v0, r) = (k0 as i64, v0 as i64, r as i64);
        let twice = match self {
            Self::Projective => k0 - 1 + 2 * v0 - r,
            Self::TwoSpherical => 2 * k0 - 1 + 2 * v0 - r,
            Self::ThreeSpherical => {
                let q = 4 * k0 + 2 * v0 - 2 * r;
                if q % 4 != 0 {
                    return None;
                }
                q / 2
            }
        };
        if twice < 0 || twice % 2 != 0 || twice / 2 > v0 {
            return None;
        }
        Some((twice / 2) as u32)
    }

    /// Pairs of points a vertex must pass through, from its genus-like degree `g`,
    /// adjacent multiplicity `k_s`, valence `v` and sign.
    pub fn point_count(self, g: u32, k_s: u32, v: u32, sign: Option<Sign>) -> Option<u32> {
        let plus = sign == Some(Sign::Plus);
        let (g, k, v) = (g as i64, k_s as i64, v as i64);
        let f = match self {
            Self::Projective => 6 * g + k + v - 1 - plus as i64,
            Self::TwoSpherical => 4 * g + k + v - 1 - plus as i64,
            Self::ThreeSpherical => {
                let t = 3 * g + k + 1 - 2 * plus as i64;
                if t % 2 != 0 {
                    return None;
                }
                t / 2
            }
        };
        (f >= 0).then_some(f as u32)
    }
}

impl fmt::Display for TreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Projective => "projective",
            Self::TwoSpherical => "two-spherical",
            Self::ThreeSpherical => "three-spherical",
        })
    }
}

impl FromStr for TreeFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "projective" => Ok(Self::Projective),
            "two-spherical" => Ok(Self::TwoSpherical),
            "three-spherical" => Ok(Self::ThreeSpherical),
            _ => Err(format!("unknown tree family `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Even,
    /// `sign` is set exactly on the vertices adjacent to the root.
    Odd { g: u32, f_size: u32, sign: Option<Sign> },
}

impl Node {
    pub fn is_odd(&self) -> bool {
        matches!(self, Node::Odd { .. })
    }
    pub fn g(&self) -> u32 {
        match self {
            Node::Odd { g, .. } => *g,
            Node::Even => 0,
        }
    }
    pub fn f_size(&self) -> u32 {
        match self {
            Node::Odd { f_size, .. } => *f_size,
            Node::Even => 0,
        }
    }
    pub fn sign(&self) -> Option<Sign> {
        match self {
            Node::Odd { sign, .. } => *sign,
            Node::Even => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub k: u32,
}

/// Parent vertex and the multiplicity of the edge to it; `None` at the root.
pub type Parent = Option<(usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    pub family: TreeFamily,
    pub d: u32,
    pub r: u32,
    pub root: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl DecoratedTree {
    pub fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push((e.v, e.k));
            adj[e.v].push((e.u, e.k));
        }
        adj
    }

    /// BFS distances from the root and parents, or `None` unless this is a tree.
    pub fn depths(&self) -> Option<(Vec<u32>, Vec<Parent>)> {
        let n = self.nodes.len();
        if self.root >= n || self.edges.len() + 1 != n {
            return None;
        }
        if self.edges.iter().any(|e| e.u >= n || e.v >= n || e.u == e.v) {
            return None;
        }
        let adj = self.adjacency();
        let mut depth = vec![u32::MAX; n];
        let mut parent = vec![None; n];
        depth[self.root] = 0;
        let mut q = VecDeque::from([self.root]);
        while let Some(x) = q.pop_front() {
            for &(y, k) in &adj[x] {
                if depth[y] == u32::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, k));
                    q.push_back(y);
                }
            }
        }
        depth.iter().all(|&d| d != u32::MAX).then_some((depth, parent))
    }

    pub fn valence(&self, v: usize) -> u32 {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count() as u32
    }

    /// Total multiplicity of the edges at `v`.
    pub fn k_at(&self, v: usize) -> u32 {
        self.edges.iter().filter(|e| e.u == v || e.v == v).map(|e| e.k).sum()
    }

    /// Multiset of multiplicities of the edges at `v`.
    pub fn contacts_at(&self, v: usize) -> ContactVector {
        let ks: Vec<u32> = self.edges.iter().filter(|e| e.u == v || e.v == v).map(|e| e.k).collect();
        ContactVector::from_orders(&ks)
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.edges.iter().map(|e| e.k).sum()
    }

    pub fn edge_product(&self) -> BigInt {
        self.edges.iter().fold(BigInt::from(1), |acc, e| acc * e.k)
    }

    /// `(neighbour, k)` for every edge at the root.
    pub fn root_edges(&self) -> Vec<(usize, u32)> {
        self.adjacency()[self.root].clone()
    }

    pub fn root_edge_of(&self, v: usize) -> Option<u32> {
        self.root_edges().into_iter().find(|&(w, _)| w == v).map(|(_, k)| k)
    }

    pub fn odd_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_odd())
    }

    pub fn with_sign(&self, s: Sign) -> Vec<usize> {
        self.odd_vertices().filter(|&i| self.nodes[i].sign() == Some(s)).collect()
    }

    pub fn r_x(&self) -> u32 {
        self.nodes.iter().map(Node::f_size).sum()
    }

    pub fn genus_total(&self) -> u32 {
        self.nodes.iter().map(Node::g).sum()
    }

    /// Even vertices, root included.
    pub fn even_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_odd()).count()
    }

    /// Bivalent even vertices other than the root.
    pub fn bivalent_connectors(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| i != self.root && !self.nodes[i].is_odd() && self.valence(i) == 2)
            .collect()
    }

    /// Root-edge multiplicities toward Minus vertices (the prescribed orbits of the root).
    pub fn alpha_minus(&self) -> ContactVector {
        self.root_profile(Sign::Minus)
    }

    /// Root-edge multiplicities toward Plus vertices (the free orbits of the root).
    pub fn beta_plus(&self) -> ContactVector {
        self.root_profile(Sign::Plus)
    }

    fn root_profile(&self, s: Sign) -> ContactVector {
        let ks: Vec<u32> = self
            .root_edges()
            .into_iter()
            .filter(|&(w, _)| self.nodes[w].sign() == Some(s))
            .map(|(_, k)| k)
            .collect();
        ContactVector::from_orders(&ks)
    }

    /// Checks every structural and numerical constraint of the family; returns
    /// the list of violations.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut bad = Vec::new();
        let Some((depth, _)) = self.depths() else {
            return Err(vec!["not a tree rooted at the given root".into()]);
        };
        let adj = self.adjacency();
        for e in &self.edges {
            if e.k == 0 {
                bad.push(format!("edge {}-{} has multiplicity 0", e.u, e.v));
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let odd_depth = depth[i] % 2 == 1;
            if odd_depth != node.is_odd() {
                bad.push(format!("vertex {i} has the wrong parity"));
                continue;
            }
            if node.is_odd() && node.sign().is_some() != (depth[i] == 1) {
                bad.push(format!("vertex {i}: signs are carried exactly by root neighbours"));
            }
            if i == self.root || node.is_odd() {
                continue;
            }
            let ks: Vec<u32> = adj[i].iter().map(|&(_, k)| k).collect();
            let ok = match self.family {
                TreeFamily::Projective => ks == [2] || ks == [1, 1],
                TreeFamily::TwoSpherical => ks == [1],
                TreeFamily::ThreeSpherical => false,
            };
            if !ok {
                bad.push(format!("even vertex {i} has edges {ks:?}, not allowed in a {} tree", self.family));
            }
        }
        if self.family == TreeFamily::ThreeSpherical && depth.iter().any(|&d| d > 1) {
            bad.push("three-spherical trees have depth one".into());
        }
        for i in self.odd_vertices() {
            let Node::Odd { g, f_size, sign } = self.nodes[i] else { unreachable!() };
            let k_s = self.k_at(i);
            if g == 0 && k_s != 1 {
                bad.push(format!("vertex {i}: a component with g = 0 must be a simple fiber (k_s = {k_s})"));
            }
            match self.family.point_count(g, k_s, self.valence(i), sign) {
                Some(f) if f == f_size => {}
                other => bad.push(format!("vertex {i}: #f = {f_size}, point equation gives {other:?}")),
            }
        }
        let k0: u32 = adj[self.root].iter().map(|&(_, k)| k).sum();
        let v0 = adj[self.root].len() as u32;
        match self.family.root_pairs(k0, v0, self.r) {
            None => bad.push(format!("r = {} outside the root window (K = {k0}, v = {v0})", self.r)),
            Some(rl) => {
                let minus = self.with_sign(Sign::Minus).len() as u32;
                if minus != rl {
                    bad.push(format!("{minus} Minus vertices, root window requires {rl}"));
                }
            }
        }
        let deg = self.family.edge_weight() * self.total_multiplicity()
            + self.family.genus_weight() * self.genus_total();
        if deg != self.d {
            bad.push(format!("degree equation gives {deg}, expected {}", self.d));
        }
        match self.family.r_x(self.d, self.r) {
            Some(rx) if rx == self.r_x() => {}
            other => bad.push(format!("sum of #f is {}, expected {other:?}", self.r_x())),
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&canonical_form(self)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexDump {
    pub id: usize,
    pub parity: &'static str,
    pub sign: Option<Sign>,
    pub g: u32,
    pub f_size: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeDump {
    pub family: TreeFamily,
    pub d: u32,
    pub r: u32,
    pub vertices: Vec<VertexDump>,
    pub edges: Vec<Edge>,
    pub assignment_count: serde_json::Value,
    pub multiplicity: serde_json::Value,
}

/// Integer as a JSON number when it fits in 64 bits, as a decimal string otherwise.
pub fn json_integer(v: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

impl TreeWithCount {
    pub fn dump(&self) -> TreeDump {
        let t = &self.tree;
        TreeDump {
            family: t.family,
            d: t.d,
            r: t.r,
            vertices: t
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| VertexDump {
                    id,
                    parity: if n.is_odd() { "odd" } else { "even" },
                    sign: n.sign(),
                    g: n.g(),
                    f_size: n.f_size(),
                })
                .collect(),
            edges: t.edges.clone(),
            assignment_count: json_integer(&self.assignment_count),
            multiplicity: json_integer(&multiplicity(t)),
        }
    }
}
