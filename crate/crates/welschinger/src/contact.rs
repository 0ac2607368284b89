//! Contact vectors, Lagrangian and ambient geometry kinds, and the closed-form
//! index, dimension and bound formulas that the rest of the crate builds on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of contact orders, stored as `counts[i-1]` = number of contacts of order `i`.
///
/// Trailing zeros are always trimmed, so derived equality and hashing are on the
/// canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct ContactVector {
    counts: Vec<u32>,
}

impl From<Vec<u32>> for ContactVector {
    fn from(counts: Vec<u32>) -> Self {
        Self::from_counts(counts)
    }
}

impl From<ContactVector> for Vec<u32> {
    fn from(v: ContactVector) -> Self {
        v.counts
    }
}

impl ContactVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_counts(mut counts: Vec<u32>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self { counts }
    }

    /// A single contact of order `k` (`e_k`).
    pub fn e(k: u32) -> Self {
        assert!(k >= 1, "contact orders start at 1");
        let mut counts = vec![0; k as usize];
        counts[k as usize - 1] = 1;
        Self { counts }
    }

    /// Builds the vector from a list of orders, e.g. `[1, 1, 2]` is `2e1 + e2`.
    pub fn from_orders(orders: &[u32]) -> Self {
        let mut v = Self::zero();
        for &k in orders {
            v.add_order(k, 1);
        }
        v
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, k: u32) -> u32 {
        if k == 0 {
            return 0;
        }
        self.counts.get(k as usize - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn weight(&self) -> u32 {
        self.counts.iter().enumerate().map(|(i, c)| (i as u32 + 1) * c).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.counts.len() as u32
    }

    /// Orders in increasing order, repeated by multiplicity.
    pub fn orders(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(i as u32 + 1).take(c as usize));
        }
        out
    }

    fn add_order(&mut self, k: u32, c: u32) {
        let i = k as usize - 1;
        if self.counts.len() <= i {
            self.counts.resize(i + 1, 0);
        }
        self.counts[i] += c;
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }

    pub fn plus_e(&self, k: u32) -> Self {
        let mut v = self.clone();
        v.add_order(k, 1);
        v
    }

    /// Removes one contact of order `k`, or `None` if there is none.
    pub fn minus_e(&self, k: u32) -> Option<Self> {
        if self.get(k) == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[k as usize - 1] -= 1;
        Some(Self::from_counts(counts))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.counts.len().max(other.counts.len());
        let counts = (0..n)
            .map(|i| self.counts.get(i).unwrap_or(&0) + other.counts.get(i).unwrap_or(&0))
            .collect();
        Self::from_counts(counts)
    }

    /// `self - other`, or `None` unless `other <= self` entrywise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if other.counts.len() > self.counts.len() {
            return None;
        }
        let mut counts = self.counts.clone();
        for (i, &c) in other.counts.iter().enumerate() {
            counts[i] = counts[i].checked_sub(c)?;
        }
        Some(Self::from_counts(counts))
    }

    pub fn le(&self, other: &Self) -> bool {
        other.checked_sub(self).is_some()
    }

    /// Every sub-multiset `0 <= v <= self`.
    pub fn sub_vectors(&self) -> Vec<Self> {
        let mut out = vec![Vec::new()];
        for &c in &self.counts {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (0..=c).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(Self::from_counts).collect()
    }

    /// Every contact vector of the given weight (integer partitions of `w`).
    pub fn of_weight(w: u32) -> Vec<Self> {
        fn rec(max_part: u32, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<ContactVector>) {
            if rem == 0 {
                out.push(ContactVector::from_orders(cur));
                return;
            }
            for p in (1..=max_part.min(rem)).rev() {
                cur.push(p);
                rec(p, rem - p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(w, w, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for ContactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if c > 1 {
                write!(f, "{c}")?;
            }
            write!(f, "e{}", i + 1)?;
        }
        Ok(())
    }
}

impl FromStr for ContactVector {
    type Err = String;

    /// Accepts `0`, or a sum of terms `[c]e<k>` such as `2e1+e3`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut v = Self::zero();
        for term in s.split('+') {
            let term = term.trim();
            let (coef, order) = term
                .split_once('e')
                .ok_or_else(|| format!("bad contact term `{term}`"))?;
            let c: u32 = if coef.is_empty() {
                1
            } else {
                coef.parse().map_err(|_| format!("bad coefficient in `{term}`"))?
            };
            let k: u32 = order.parse().map_err(|_| format!("bad order in `{term}`"))?;
            if k == 0 {
                return Err(format!("contact order must be positive in `{term}`"));
            }
            if c > 0 {
                v.add_order(k, c);
            }
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LagrangianKind {
    Sphere2,
    RP2,
    Sphere3,
    RP3,
    Torus2,
    Torus3,
}

impl LagrangianKind {
    pub const ALL: [LagrangianKind; 6] = [
        LagrangianKind::Sphere2,
        LagrangianKind::RP2,
        LagrangianKind::Sphere3,
        LagrangianKind::RP3,
        LagrangianKind::Torus2,
        LagrangianKind::Torus3,
    ];

    pub fn dim(self) -> u32 {
        match self {
            Self::Sphere2 | Self::RP2 | Self::Torus2 => 2,
            Self::Sphere3 | Self::RP3 | Self::Torus3 => 3,
        }
    }

    pub fn is_sphere(self) -> bool {
        matches!(self, Self::Sphere2 | Self::Sphere3)
    }

    pub fn is_projective(self) -> bool {
        matches!(self, Self::RP2 | Self::RP3)
    }

    pub fn is_torus(self) -> bool {
        matches!(self, Self::Torus2 | Self::Torus3)
    }

    /// Covering factor of the geodesic flow: 2 on spheres, 1 on projective spaces.
    /// Tori have no such constant.
    pub fn epsilon(self) -> Option<i64> {
        match self {
            Self::Sphere2 | Self::Sphere3 => Some(2),
            Self::RP2 | Self::RP3 => Some(1),
            _ => None,
        }
    }

    fn check_dim(self, n: u32) -> Result<i64> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { kind: self, n });
        }
        Ok(n as i64)
    }
}

impl fmt::Display for LagrangianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sphere2 => "S2",
            Self::RP2 => "RP2",
            Self::Sphere3 => "S3",
            Self::RP3 => "RP3",
            Self::Torus2 => "T2",
            Self::Torus3 => "T3",
        })
    }
}

impl FromStr for LagrangianKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "s2" | "sphere2" => Self::Sphere2,
            "rp2" => Self::RP2,
            "s3" | "sphere3" => Self::Sphere3,
            "rp3" => Self::RP3,
            "t2" | "torus2" => Self::Torus2,
            "t3" | "torus3" => Self::Torus3,
            other => return Err(format!("unknown Lagrangian kind `{other}`")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeometryKind {
    ProjectivePlane,
    EllipsoidQuadric2,
    EllipsoidQuadric3,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 3] = [
        GeometryKind::ProjectivePlane,
        GeometryKind::EllipsoidQuadric2,
        GeometryKind::EllipsoidQuadric3,
    ];

    /// `d·d` for the class of degree `δ`; undefined in the threefold.
    pub fn square(self, delta: u32) -> Option<i64> {
        let d = delta as i64;
        match self {
            Self::ProjectivePlane => Some(d * d),
            Self::EllipsoidQuadric2 => Some(2 * d * d),
            Self::EllipsoidQuadric3 => None,
        }
    }

    pub fn c1_dot(self, delta: u32) -> i64 {
        let d = delta as i64;
        match self {
            Self::ProjectivePlane => 3 * d,
            Self::EllipsoidQuadric2 => 4 * d,
            Self::EllipsoidQuadric3 => 3 * d,
        }
    }

    /// The real Lagrangian sitting in this geometry.
    pub fn lagrangian(self) -> LagrangianKind {
        match self {
            Self::ProjectivePlane => LagrangianKind::RP2,
            Self::EllipsoidQuadric2 => LagrangianKind::Sphere2,
            Self::EllipsoidQuadric3 => LagrangianKind::Sphere3,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Self::ProjectivePlane => "cp2",
            Self::EllipsoidQuadric2 => "quadric2",
            Self::EllipsoidQuadric3 => "quadric3",
        }
    }

    /// Real points `r` and conjugate pairs `r_X` with `r + 2 r_X = c_d`
    /// (`2r + 4r_X = 3δ` in the threefold), or `None` when no such split exists.
    pub fn split_points(self, delta: u32, r: u32) -> Option<u32> {
        let r = r as i64;
        let rem = match self {
            Self::EllipsoidQuadric3 => {
                let total = 3 * delta as i64 - 2 * r;
                if total < 0 || total % 4 != 0 {
                    return None;
                }
                return Some((total / 4) as u32);
            }
            _ => degree_expected(self, delta) - r,
        };
        if rem < 0 || rem % 2 != 0 {
            return None;
        }
        Some((rem / 2) as u32)
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for GeometryKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "cp2" | "projectiveplane" | "plane" => Self::ProjectivePlane,
            "quadric2" | "ellipsoid2" => Self::EllipsoidQuadric2,
            "quadric3" | "ellipsoid3" => Self::EllipsoidQuadric3,
            other => return Err(format!("unknown geometry `{other}`")),
        })
    }
}

/// Smooth genus `g_d = (d² − c₁·d + 2)/2`.
pub fn genus_smooth(geometry: GeometryKind, delta: u32) -> Result<i64> {
    if delta == 0 {
        return Err(Error::ZeroDegree);
    }
    let sq = geometry.square(delta).ok_or(Error::NotASurface)?;
    let twice = sq - geometry.c1_dot(delta) + 2;
    debug_assert!(twice % 2 == 0);
    Ok(twice / 2)
}

/// Expected number of point conditions `c_d = c₁·d − 1`.
pub fn degree_expected(geometry: GeometryKind, delta: u32) -> i64 {
    geometry.c1_dot(delta) - 1
}

/// Maslov index of a genus-`χ`-defect curve in the cotangent bundle with total
/// asymptotic multiplicity `k`.
pub fn maslov_cotangent(kind: LagrangianKind, n: u32, k: u32, chi: i64) -> Result<i64> {
    let n = kind.check_dim(n)?;
    let k = k as i64;
    Ok(match kind.epsilon() {
        Some(eps) => eps * (n - 1) * k - 2 * chi,
        None => -2 * chi,
    })
}

pub fn deformation_dimension(
    kind: LagrangianKind,
    n: u32,
    mu: i64,
    g: u32,
    v_minus: u32,
) -> Result<i64> {
    let n = kind.check_dim(n)?;
    let g = g as i64;
    let v = v_minus as i64;
    Ok(if kind.is_torus() {
        mu + (n - 1) * (2 - 2 * g - v)
    } else {
        mu + (n - 1) * (2 - 2 * g)
    })
}

/// Maximal number of real double points of a cylinder with conjugate ends of total multiplicity `k`.
pub fn double_point_bound(kind: LagrangianKind, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::NegativeDimension(format!("double_point_bound({kind}, 0)")));
    }
    let k = k as u64;
    match kind {
        LagrangianKind::Sphere2 => Ok((k - 1) * (k - 1)),
        LagrangianKind::RP2 => Ok((k - 1) * k.saturating_sub(2) / 2),
        _ => Err(Error::UnsupportedKind { kind }),
    }
}

pub fn intersection_bound(kind: LagrangianKind, k: u32) -> Result<u64> {
    let k = k as u64;
    match kind {
        LagrangianKind::Sphere2 => Ok(2 * k * k),
        LagrangianKind::RP2 => Ok(k * k),
        _ => Err(Error::UnsupportedKind { kind }),
    }
}

/// Number of real points `r` making the moduli space of cotangent curves with
/// prescribed orbits `α`, free orbits `β` and `r_L` conjugate pairs rigid.
pub fn f_point_count(
    kind: LagrangianKind,
    alpha: &ContactVector,
    beta: &ContactVector,
    r_l: u32,
) -> Result<u32> {
    let sa = alpha.size() as i64;
    let sb = beta.size() as i64;
    let w = (alpha.weight() + beta.weight()) as i64;
    let rl = r_l as i64;
    let r = match kind {
        LagrangianKind::Sphere2 => 2 * sb + 2 * w - 1 - 2 * rl,
        LagrangianKind::RP2 => 2 * sb + w - 1 - 2 * rl,
        LagrangianKind::Sphere3 => sb - sa + 2 * w - 2 * rl,
        LagrangianKind::RP3 => sb - sa + w - 2 * rl,
        LagrangianKind::Torus2 | LagrangianKind::Torus3 => {
            if !alpha.is_zero() {
                return Err(Error::TorusPrescribedOrbit);
            }
            let n = kind.dim() as i64;
            let rhs = 2 * sb + n - 3;
            if rhs % (n - 1) != 0 {
                return Err(Error::NegativeDimension(format!("{kind} ({alpha}, {beta})")));
            }
            rhs / (n - 1) - 2 * rl
        }
    };
    if r < 0 {
        return Err(Error::NegativeDimension(format!(
            "{kind} (alpha={alpha}, beta={beta}, r_L={r_l})"
        )));
    }
    Ok(r as u32)
}

/// Inputs of the Fredholm index of the evaluation map on a moduli space of
/// cotangent curves. Complex problems count conjugate-invariant curves in `T*L`
/// with `points` complex point conditions; real problems split the conditions
/// into real points and conjugate pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexProblem {
    Complex {
        punctures: u32,
        multiplicity: u32,
        points: u32,
        prescribed: u32,
    },
    Real {
        punctures: u32,
        multiplicity: u32,
        real_points: u32,
        pairs: u32,
        prescribed: u32,
    },
}

pub fn fredholm_index(kind: LagrangianKind, n: u32, problem: IndexProblem) -> Result<i64> {
    let n = kind.check_dim(n)?;
    let m = n - 1;
    Ok(match problem {
        IndexProblem::Complex { punctures, multiplicity, points, prescribed } => {
            let (v, k, r, vm) = (punctures as i64, multiplicity as i64, points as i64, prescribed as i64);
            match kind.epsilon() {
                Some(eps) => eps * m * k + 2 * v - 2 - 2 * m * r - 2 * m * vm,
                None => 2 * v + 2 * n - 6 - 2 * m * r - m * vm,
            }
        }
        IndexProblem::Real { punctures, multiplicity, real_points, pairs, prescribed } => {
            let (v, k, r, rl, vm) = (
                punctures as i64,
                multiplicity as i64,
                real_points as i64,
                pairs as i64,
                prescribed as i64,
            );
            match kind.epsilon() {
                Some(eps) => eps * m * k + 2 * v - 1 - m * r - 2 * m * rl - 2 * m * vm,
                None => 2 * v + n - 3 - m * r - 2 * m * rl - m * vm,
            }
        }
    })
}
