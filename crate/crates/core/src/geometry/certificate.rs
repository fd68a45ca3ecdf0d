//! Exact certificates for combinatorial claims.
//!
//! A [`Certificate`] is only produced by code paths that ran every listed
//! check in exact arithmetic. Failures name the first violated check.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::geometry::polytope::Halfspace;
use crate::linalg::{self, Matrix};
use crate::rational::{self, Point, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    ValidRealization,
    CombinatorialCube,
    CombinatorialCrosspolytope,
    ConvexUnion,
    OrthogonalConcurrent,
}

/// Data that was checked, kept so a reader can re-run the checks.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witness {
    /// Oriented facet hyperplanes, in candidate order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperplanes: Vec<Halfspace>,
    /// Number of strict inequalities verified.
    pub strict_checks: usize,
    /// Number of exact equalities verified.
    pub equality_checks: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_point")]
    pub point: Option<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witness: Witness,
}

impl Certificate {
    pub(crate) fn new(kind: CertificateKind, witness: Witness) -> Self {
        Certificate { kind, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CertificateFailure {
    DimensionMismatch { vertex: usize },
    NotFullDimensional,
    /// The candidate's vertices do not span exactly one hyperplane.
    NonCoplanar { facet: usize },
    WrongSide { facet: usize, vertex: usize },
    TooFewFacetsAtVertex { vertex: usize },
    DuplicateHyperplane { first: usize, second: usize },
    /// Some ridge of this facet is not shared with another candidate.
    BoundaryNotClosed { facet: usize },
    NotCube,
    NotCrosspolytope,
    NotCubical { facet: usize },
    NotOrthogonal { i: usize, j: usize },
    NotConcurrent { i: usize },
    IncidenceChanged,
    ConvexUnion { vertex: usize, facet: usize, detail: String },
    FaceCount { expected: usize, found: usize },
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateFailure::DimensionMismatch { vertex } => {
                write!(f, "vertex {vertex} has the wrong dimension")
            }
            CertificateFailure::NotFullDimensional => write!(f, "vertex set is not full-dimensional"),
            CertificateFailure::NonCoplanar { facet } => {
                write!(f, "candidate facet {facet} does not span a hyperplane")
            }
            CertificateFailure::WrongSide { facet, vertex } => {
                write!(f, "vertex {vertex} is not strictly inside candidate facet {facet}")
            }
            CertificateFailure::TooFewFacetsAtVertex { vertex } => {
                write!(f, "vertex {vertex} is not pinned by its candidate facets")
            }
            CertificateFailure::DuplicateHyperplane { first, second } => {
                write!(f, "candidate facets {first} and {second} share a hyperplane")
            }
            CertificateFailure::BoundaryNotClosed { facet } => {
                write!(f, "boundary is not closed at candidate facet {facet}")
            }
            CertificateFailure::NotCube => write!(f, "incidence is not that of a cube"),
            CertificateFailure::NotCrosspolytope => {
                write!(f, "incidence is not that of a crosspolytope")
            }
            CertificateFailure::NotCubical { facet } => write!(f, "facet {facet} is not a combinatorial cube"),
            CertificateFailure::NotOrthogonal { i, j } => {
                write!(f, "diagonals {i} and {j} are not orthogonal")
            }
            CertificateFailure::NotConcurrent { i } => {
                write!(f, "diagonal {i} misses the common point")
            }
            CertificateFailure::IncidenceChanged => write!(f, "vertex-facet incidence changed"),
            CertificateFailure::ConvexUnion { vertex, facet, detail } => {
                write!(f, "convex union fails at vertex {vertex}, facet {facet}: {detail}")
            }
            CertificateFailure::FaceCount { expected, found } => {
                write!(f, "face count {found}, expected {expected}")
            }
        }
    }
}

/// Hyperplane through the given points, as `(normal, offset)` with
/// `normal . v = offset`. `None` unless the points span exactly a hyperplane.
pub fn hyperplane_through(points: &[&Point], dim: usize) -> Option<(Point, Rational)> {
    let homs: Vec<Vec<BigInt>> = points.iter().map(|p| linalg::homogenize(p)).collect();
    let h = integer_hyperplane(homs.iter().collect(), dim)?;
    let a: Point = h[..dim].iter().map(|x| Rational::from_integer(x.clone())).collect();
    Some((a, -Rational::from_integer(h[dim].clone())))
}

/// Primitive integer `(a, -beta)` vanishing on the homogeneous points.
fn integer_hyperplane(homs: Vec<&Vec<BigInt>>, dim: usize) -> Option<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = homs.into_iter().cloned().collect();
    let mut ns = linalg::integer_null_space(rows, dim + 1);
    if ns.len() != 1 {
        return None;
    }
    let h = ns.pop().unwrap();
    if h[..dim].iter().all(Zero::is_zero) {
        return None;
    }
    Some(h)
}

/// Checks that `candidates` (vertex index sets) is exactly the facet list of
/// `conv(vertices)` and that every listed point is a vertex.
///
/// Beyond per-facet checks this proves completeness: within each facet the
/// shared ridges must themselves form a closed boundary, recursively.
pub fn verify_realization(
    vertices: &[Point],
    candidates: &[VertexSet],
) -> Result<Certificate, CertificateFailure> {
    let n = vertices.len();
    let dim = vertices.first().map_or(0, Vec::len);
    if let Some(v) = vertices.iter().position(|v| v.len() != dim) {
        return Err(CertificateFailure::DimensionMismatch { vertex: v });
    }
    let homs: Vec<Vec<BigInt>> = vertices.iter().map(|v| linalg::homogenize(v)).collect();
    if dim == 0 || linalg::integer_rank(homs.clone()) != dim + 1 {
        return Err(CertificateFailure::NotFullDimensional);
    }
    let mut witness = Witness::default();
    for (fi, set) in candidates.iter().enumerate() {
        let members: Vec<&Vec<BigInt>> = set.iter().filter(|&i| i < n).map(|i| &homs[i]).collect();
        witness.equality_checks += members.len();
        let Some(h) = integer_hyperplane(members, dim) else {
            return Err(CertificateFailure::NonCoplanar { facet: fi });
        };
        let mut sign = 0i8;
        for (vi, w) in homs.iter().enumerate() {
            if set.contains(vi) {
                continue;
            }
            // The homogenizing coordinate is positive, so this is the sign
            // of `a . v - beta`.
            let s = linalg::integer_dot(&h, w);
            let this = if s.is_positive() {
                1
            } else if s.is_negative() {
                -1
            } else {
                return Err(CertificateFailure::WrongSide { facet: fi, vertex: vi });
            };
            if sign == 0 {
                sign = this;
            } else if sign != this {
                return Err(CertificateFailure::WrongSide { facet: fi, vertex: vi });
            }
            witness.strict_checks += 1;
        }
        let mut a: Point = h[..dim].iter().map(|x| Rational::from_integer(x.clone())).collect();
        let mut beta = -Rational::from_integer(h[dim].clone());
        if sign > 0 {
            a = rational::neg(&a);
            beta = -beta;
        }
        witness.hyperplanes.push(Halfspace::new(a, beta));
    }
    for i in 0..witness.hyperplanes.len() {
        for j in 0..i {
            if witness.hyperplanes[i] == witness.hyperplanes[j] {
                return Err(CertificateFailure::DuplicateHyperplane { first: j, second: i });
            }
        }
    }
    for vi in 0..n {
        let tight: Vec<Vec<BigInt>> = candidates
            .iter()
            .zip(&witness.hyperplanes)
            .filter(|(s, _)| s.contains(vi))
            .map(|(_, h)| h.normal.iter().map(|x| x.numer().clone()).collect())
            .collect();
        if tight.len() < dim || linalg::integer_rank(tight) < dim {
            return Err(CertificateFailure::TooFewFacetsAtVertex { vertex: vi });
        }
    }
    let mut ranks = RankCache::new(&homs);
    if let Some(facet) = first_open_facet(candidates, dim - 1, &mut ranks) {
        return Err(CertificateFailure::BoundaryNotClosed { facet });
    }
    Ok(Certificate::new(CertificateKind::ValidRealization, witness))
}

struct RankCache<'a> {
    homs: &'a [Vec<BigInt>],
    dims: HashMap<VertexSet, usize>,
}

impl<'a> RankCache<'a> {
    fn new(homs: &'a [Vec<BigInt>]) -> Self {
        RankCache { homs, dims: HashMap::new() }
    }

    /// Affine dimension of the vertex subset.
    fn dim(&mut self, s: &VertexSet) -> isize {
        match s.len() {
            0 => return -1,
            1 => return 0,
            2 => return 1,
            _ => {}
        }
        if let Some(&d) = self.dims.get(s) {
            return d as isize;
        }
        let d = linalg::integer_rank(s.iter().map(|i| self.homs[i].clone()).collect()) - 1;
        self.dims.insert(s.clone(), d);
        d as isize
    }
}

/// `faces` claims to be the facet list (each of dimension `k`) of a
/// `(k+1)`-dimensional face. Returns the index of a face whose boundary is
/// not covered by the others.
fn first_open_facet(faces: &[VertexSet], k: usize, ranks: &mut RankCache) -> Option<usize> {
    if k == 0 {
        let distinct = faces.len() == 2 && faces[0] != faces[1];
        return if distinct { None } else { Some(faces.len().min(1)) };
    }
    for (fi, f) in faces.iter().enumerate() {
        let mut ridges: Vec<VertexSet> = Vec::new();
        for (gi, g) in faces.iter().enumerate() {
            if gi == fi {
                continue;
            }
            let r = f.intersection(g);
            if r.len() < k || ridges.contains(&r) {
                continue;
            }
            if ranks.dim(&r) == k as isize - 1 {
                ridges.push(r);
            }
        }
        if first_open_facet(&ridges, k - 1, ranks).is_some() {
            return Some(fi);
        }
    }
    None
}

/// Orthogonality and concurrency of the diagonals `conv(p_a, p_b)` of a
/// crosspolytope given by its pairs.
pub fn check_orthogonal_concurrent(
    vertices: &[Point],
    pairs: &[(usize, usize)],
) -> Result<Certificate, CertificateFailure> {
    let dirs: Vec<Point> = pairs
        .iter()
        .map(|&(a, b)| rational::sub(&vertices[a], &vertices[b]))
        .collect();
    let mut witness = Witness {
        pairs: pairs.to_vec(),
        ..Witness::default()
    };
    for i in 0..dirs.len() {
        for j in 0..i {
            if !rational::dot(&dirs[i], &dirs[j]).is_zero() {
                return Err(CertificateFailure::NotOrthogonal { i: j, j: i });
            }
            witness.equality_checks += 1;
        }
    }
    // Orthogonal nonzero directions form a basis. A point on diagonal i has
    // the same projection onto every u_j (j != i) as p_a(i), so the candidate
    // is fixed by <u_j, x> = <u_j, p_a(j+1)>; each diagonal must contain it.
    let n = pairs.len();
    let x = if n == 1 {
        rational::midpoint(&vertices[pairs[0].0], &vertices[pairs[0].1])
    } else {
        let m = Matrix::from_rows(dirs.clone());
        let rhs: Vec<Rational> = (0..n)
            .map(|j| rational::dot(&dirs[j], &vertices[pairs[(j + 1) % n].0]))
            .collect();
        m.solve(&rhs).map_err(|_| CertificateFailure::NotConcurrent { i: 0 })?
    };
    for (i, (&(_, b), u)) in pairs.iter().zip(&dirs).enumerate() {
        let uu = rational::dot(u, u);
        let t = rational::dot(u, &rational::sub(&x, &vertices[b])) / &uu;
        let on_line = rational::add(&vertices[b], &rational::scale(u, &t));
        if on_line != x || t.is_negative() || t > Rational::one() {
            return Err(CertificateFailure::NotConcurrent { i });
        }
        witness.equality_checks += x.len();
    }
    witness.point = Some(x);
    Ok(Certificate::new(CertificateKind::OrthogonalConcurrent, witness))
}

mod opt_point {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Option<Point>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => s.serialize_some(&p.iter().map(rational::format).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Point>, D::Error> {
        use serde::de::Error;
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|v| v.iter().map(|s| rational::parse(s).map_err(D::Error::custom)).collect())
            .transpose()
    }
}
