//! Polytope representations.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::geometry::certificate::{verify_realization, Certificate};
use crate::geometry::incidence::IncidenceStructure;
use crate::geometry::venum;
use crate::linalg::Matrix;
use crate::rational::{self, Point, Rational};

/// The inequality `normal . x <= offset`, scaled so the normal is a
/// primitive integer vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "RawHalfspace")]
pub struct Halfspace {
    #[serde(with = "rational::serde_rat_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "rational::serde_rat")]
    pub offset: Rational,
}

#[derive(Deserialize)]
struct RawHalfspace {
    #[serde(with = "rational::serde_rat_vec")]
    normal: Vec<Rational>,
    #[serde(with = "rational::serde_rat")]
    offset: Rational,
}

impl From<RawHalfspace> for Halfspace {
    fn from(r: RawHalfspace) -> Self {
        Halfspace::new(r.normal, r.offset)
    }
}

impl Halfspace {
    /// Canonicalizes by a positive factor. A zero normal is kept as is.
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Self {
        let (ints, factor) = rational::primitive_scaling(&normal);
        Halfspace {
            normal: ints.into_iter().map(Rational::from_integer).collect(),
            offset: offset * factor,
        }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `offset - normal . x`; nonnegative inside, zero on the hyperplane.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.offset - rational::dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.slack(x).is_zero()
    }

    /// Homogeneous row `(normal, -offset)`, so `h . (x, 1) <= 0`.
    pub fn homogeneous(&self) -> Vec<Rational> {
        let mut h = self.normal.clone();
        h.push(-self.offset.clone());
        h
    }

    pub fn from_homogeneous(h: &[Rational]) -> Self {
        let d = h.len() - 1;
        Halfspace::new(h[..d].to_vec(), -h[d].clone())
    }

    pub fn translated(&self, t: &[Rational]) -> Self {
        Halfspace::new(self.normal.clone(), &self.offset + rational::dot(&self.normal, t))
    }
}

impl fmt::Debug for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.normal.iter().map(rational::format).collect();
        write!(f, "[{}] <= {}", n.join(" "), self.offset)
    }
}

/// A vertex list; every point is a vertex of the full-dimensional hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    pub dim: usize,
    #[serde(with = "rational::serde_rat_mat")]
    pub vertices: Vec<Point>,
}

/// An irredundant, bounded, full-dimensional inequality system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolytope {
    pub dim: usize,
    pub rows: Vec<Halfspace>,
}

impl HPolytope {
    pub fn sorted_rows(&self) -> Vec<Halfspace> {
        let mut r = self.rows.clone();
        r.sort();
        r
    }
}

/// Paired V- and H-representation with exact incidence, certified on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Halfspace>,
    incidence: IncidenceStructure,
    certificate: Certificate,
}

impl Polytope {
    /// Builds from vertices and the vertex sets of the facets, certifying the
    /// facet list with [`verify_realization`].
    pub fn from_facet_sets(vertices: Vec<Point>, facet_sets: Vec<VertexSet>) -> Result<Self> {
        let certificate = verify_realization(&vertices, &facet_sets)?;
        let dim = vertices[0].len();
        let facets = certificate.witness.hyperplanes.clone();
        let incidence = IncidenceStructure::new(dim, vertices.len(), facet_sets);
        Ok(Polytope {
            dim,
            vertices,
            facets,
            incidence,
            certificate,
        })
    }

    /// Convex hull of a point set. Points that are not vertices are dropped;
    /// surviving vertices keep their relative order.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        let dim = check_dims(points)?;
        let refs: Vec<&Point> = points.iter().collect();
        if crate::linalg::affine_rank(&refs) != dim + 1 {
            return Err(Error::Degenerate);
        }
        let c = rational::centroid(points);
        let shifted: Vec<Halfspace> = points
            .iter()
            .map(|p| Halfspace::new(rational::sub(p, &c), Rational::one()))
            .collect();
        let polar_vertices = venum::enumerate_vertices(&shifted, dim)?;
        let facets: Vec<Halfspace> = polar_vertices
            .iter()
            .map(|y| Halfspace::new(y.clone(), Rational::one() + rational::dot(y, &c)))
            .collect();
        let keep: Vec<usize> = (0..points.len())
            .filter(|&i| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|h| h.is_tight(&points[i]))
                    .map(|h| h.normal.clone())
                    .collect();
                tight.len() >= dim && Matrix::from_rows(tight).rank() == dim
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        let vertices: Vec<Point> = keep
            .into_iter()
            .filter(|&i| seen.insert(points[i].clone()))
            .map(|i| points[i].clone())
            .collect();
        Polytope::from_vertices_and_facets(vertices, facets)
    }

    /// Solves an inequality system. Redundant rows are an error.
    pub fn from_halfspaces(rows: &[Halfspace]) -> Result<Self> {
        let p = Polytope::from_halfspaces_irredundant(rows)?;
        if p.facets.len() != rows.len() {
            let bad = rows
                .iter()
                .position(|h| !p.facets.contains(h))
                .unwrap_or(0);
            return Err(Error::FacetDegenerated(format!("row {bad} is redundant")));
        }
        // keep caller's row order
        p.reorder_facets(rows)
    }

    /// Solves an inequality system, dropping redundant and duplicate rows.
    pub fn from_halfspaces_irredundant(rows: &[Halfspace]) -> Result<Self> {
        let dim = rows.first().map(Halfspace::dim).ok_or(Error::Degenerate)?;
        if rows.iter().any(|h| h.dim() != dim) {
            return Err(Error::Input("rows of mixed dimension".into()));
        }
        if let Some(i) = rows.iter().position(|h| rational::is_zero(&h.normal)) {
            return Err(Error::Input(format!("row {i} has a zero normal")));
        }
        let vertices = venum::enumerate_vertices(rows, dim)?;
        let refs: Vec<&Point> = vertices.iter().collect();
        if crate::linalg::affine_rank(&refs) != dim + 1 {
            return Err(Error::Degenerate);
        }
        let mut facets: Vec<Halfspace> = Vec::new();
        for h in rows {
            if facets.contains(h) {
                continue;
            }
            let tight: Vec<&Point> = vertices.iter().filter(|v| h.is_tight(v)).collect();
            if crate::linalg::affine_rank(&tight) == dim {
                facets.push(h.clone());
            }
        }
        Polytope::from_vertices_and_facets(vertices, facets)
    }

    /// Pairs a vertex list with a facet list, checking that they describe
    /// the same polytope.
    pub fn from_vertices_and_facets(vertices: Vec<Point>, facets: Vec<Halfspace>) -> Result<Self> {
        let dim = check_dims(&vertices)?;
        let n = vertices.len();
        let mut sets = Vec::with_capacity(facets.len());
        for (fi, h) in facets.iter().enumerate() {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
            let mut s = VertexSet::new(n);
            for (vi, v) in vertices.iter().enumerate() {
                let sl = h.slack(v);
                if sl.is_negative() {
                    return Err(Error::RepresentationMismatch(format!(
                        "vertex {vi} violates row {fi}"
                    )));
                }
                if sl.is_zero() {
                    s.insert(vi);
                }
            }
            if s.is_empty() {
                return Err(Error::RepresentationMismatch(format!("row {fi} is tight on no vertex")));
            }
            sets.push(s);
        }
        let p = Polytope::from_facet_sets(vertices, sets).map_err(|e| match e {
            Error::Certificate(f) => Error::RepresentationMismatch(f.to_string()),
            e => e,
        })?;
        if p.facets != facets {
            return Err(Error::RepresentationMismatch("facet hyperplanes disagree".into()));
        }
        Ok(p)
    }

    fn reorder_facets(self, order: &[Halfspace]) -> Result<Self> {
        let facets: Vec<Halfspace> = order.to_vec();
        Polytope::from_vertices_and_facets(self.vertices, facets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn incidence(&self) -> &IncidenceStructure {
        &self.incidence
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn facet_sets(&self) -> &[VertexSet] {
        self.incidence.facet_sets()
    }

    pub fn vpolytope(&self) -> VPolytope {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    pub fn hpolytope(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            rows: self.facets.clone(),
        }
    }

    /// Facet rows in sorted order; equal for equal polytopes.
    pub fn canonical_rows(&self) -> Vec<Halfspace> {
        self.hpolytope().sorted_rows()
    }

    pub fn same_set(&self, other: &Polytope) -> bool {
        self.dim == other.dim && self.canonical_rows() == other.canonical_rows()
    }

    /// True iff the origin lies strictly inside.
    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|h| h.offset.is_positive())
    }

    pub fn centroid(&self) -> Point {
        rational::centroid(&self.vertices)
    }

    pub fn translated(&self, t: &[Rational]) -> Result<Self> {
        let vertices = self.vertices.iter().map(|v| rational::add(v, t)).collect();
        Polytope::from_facet_sets(vertices, self.facet_sets().to_vec())
    }
}

fn check_dims(points: &[Point]) -> Result<usize> {
    let dim = points.first().map(Vec::len).ok_or(Error::Degenerate)?;
    if dim == 0 {
        return Err(Error::Degenerate);
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ipoint, rat};

    pub(crate) fn cube_rows(d: usize) -> Vec<Halfspace> {
        (0..d)
            .flat_map(|k| {
                [
                    Halfspace::new(rational::unit(d, k), int(1)),
                    Halfspace::new(rational::neg(&rational::unit(d, k)), int(1)),
                ]
            })
            .collect()
    }

    #[test]
    fn halfspace_canonical_form() {
        let h = Halfspace::new(vec![rat(1, 2), rat(-1, 3)], rat(5, 6));
        assert_eq!(h.normal, vec![int(3), int(-2)]);
        assert_eq!(h.offset, int(5));
        assert_eq!(h, Halfspace::new(vec![int(6), int(-4)], int(10)));
    }

    #[test]
    fn cube_from_halfspaces_and_points() {
        let p = Polytope::from_halfspaces(&cube_rows(3)).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert!(p.origin_interior());
        let mut pts = p.vertices().to_vec();
        pts.push(ipoint(&[0, 0, 0]));
        pts.push(ipoint(&[1, 0, 1]));
        let q = Polytope::from_points(&pts).unwrap();
        assert_eq!(q.vertices().len(), 8);
        assert!(p.same_set(&q));
    }

    #[test]
    fn redundant_rows() {
        let mut rows = cube_rows(2);
        rows.push(Halfspace::new(ipoint(&[1, 1]), int(3)));
        assert!(matches!(Polytope::from_halfspaces(&rows), Err(Error::FacetDegenerated(_))));
        assert_eq!(Polytope::from_halfspaces_irredundant(&rows).unwrap().facets().len(), 4);
    }

    #[test]
    fn unbounded_and_empty() {
        let rows = vec![
            Halfspace::new(ipoint(&[1, 0]), int(1)),
            Halfspace::new(ipoint(&[0, 1]), int(1)),
            Halfspace::new(ipoint(&[-1, -1]), int(1)),
            Halfspace::new(ipoint(&[-1, 0]), int(1)),
        ];
        assert!(Polytope::from_halfspaces(&rows[..3]).is_ok());
        let open = vec![rows[0].clone(), rows[3].clone(), rows[1].clone()];
        assert_eq!(Polytope::from_halfspaces(&open).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn mismatched_representations() {
        let p = Polytope::from_halfspaces(&cube_rows(2)).unwrap();
        let mut v = p.vertices().to_vec();
        v[0] = ipoint(&[2, 2]);
        assert!(matches!(
            Polytope::from_vertices_and_facets(v, p.facets().to_vec()),
            Err(Error::RepresentationMismatch(_))
        ));
        // a missing facet is caught by the closed-boundary check
        let f = p.facets()[..3].to_vec();
        assert!(Polytope::from_vertices_and_facets(p.vertices().to_vec(), f).is_err());
    }
}
