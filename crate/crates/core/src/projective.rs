//! Projective maps, ray scalings and normal transformations.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::polytope::{HPolytope, Halfspace, Polytope, VPolytope};
use num_bigint::BigInt;

use crate::linalg::{self, Matrix};
use crate::rational::{self, Point, Rational};

/// `x -> (A x + b) / (c . x + alpha)`, stored as the homogeneous block
/// `[[A, b], [c^T, alpha]]` scaled so its first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct ProjectiveMap {
    block: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    block: Matrix,
}

impl TryFrom<RawMap> for ProjectiveMap {
    type Error = Error;
    fn try_from(r: RawMap) -> Result<Self> {
        ProjectiveMap::from_block(r.block)
    }
}

impl From<ProjectiveMap> for RawMap {
    fn from(m: ProjectiveMap) -> Self {
        RawMap { block: m.block }
    }
}

impl ProjectiveMap {
    pub fn new(a: &Matrix, b: &[Rational], c: &[Rational], alpha: Rational) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d || b.len() != d || c.len() != d {
            return Err(Error::Input("inconsistent projective map blocks".into()));
        }
        let mut rows: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut r = a.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut last = c.to_vec();
        last.push(alpha);
        rows.push(last);
        ProjectiveMap::from_block(Matrix::from_rows(rows))
    }

    pub fn from_block(block: Matrix) -> Result<Self> {
        let n = block.nrows();
        if n < 2 || block.ncols() != n {
            return Err(Error::Input("projective block must be square of size d+1".into()));
        }
        if block.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(ProjectiveMap::normalized(block))
    }

    pub fn identity(d: usize) -> Self {
        ProjectiveMap { block: Matrix::identity(d + 1) }
    }

    /// `x -> A x + t`.
    pub fn affine(a: &Matrix, t: &[Rational]) -> Result<Self> {
        let d = a.nrows();
        ProjectiveMap::new(a, t, &rational::zero_point(d), Rational::one())
    }

    pub fn translation(t: &[Rational]) -> Self {
        ProjectiveMap::affine(&Matrix::identity(t.len()), t).expect("translations are nonsingular")
    }

    pub fn dim(&self) -> usize {
        self.block.nrows() - 1
    }

    pub fn block(&self) -> &Matrix {
        &self.block
    }

    pub fn a(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_rows((0..d).map(|i| self.block.row(i)[..d].to_vec()).collect())
    }

    pub fn b(&self) -> Point {
        let d = self.dim();
        (0..d).map(|i| self.block.get(i, d).clone()).collect()
    }

    pub fn c(&self) -> Point {
        let d = self.dim();
        self.block.row(d)[..d].to_vec()
    }

    pub fn alpha(&self) -> Rational {
        let d = self.dim();
        self.block.get(d, d).clone()
    }

    pub fn is_identity(&self) -> bool {
        self.block.is_identity()
    }

    /// True when `c = 0`, so the map is affine.
    pub fn is_affine(&self) -> bool {
        rational::is_zero(&self.c())
    }

    pub fn denominator(&self, x: &[Rational]) -> Rational {
        let d = self.dim();
        rational::dot(&self.block.row(d)[..d], x) + self.block.get(d, d)
    }

    pub fn apply_point(&self, x: &[Rational]) -> Result<Point> {
        Ok(self.apply_points(std::slice::from_ref(&x.to_vec()))?.remove(0))
    }

    /// Maps many points through an integer multiple of the block.
    pub fn apply_points(&self, xs: &[Point]) -> Result<Vec<Point>> {
        let d = self.dim();
        let den = self
            .block
            .rows()
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| rational::lcm(&acc, v.denom()));
        let m: Vec<Vec<BigInt>> = self
            .block
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.numer() * (&den / v.denom())).collect())
            .collect();
        xs.iter()
            .map(|x| {
                if x.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: x.len() });
                }
                let w = linalg::homogenize(x);
                let y: Vec<BigInt> = m.iter().map(|r| linalg::integer_dot(r, &w)).collect();
                if y[d].is_zero() {
                    return Err(Error::InadmissibleMap("point sent to infinity".into()));
                }
                Ok(y[..d].iter().map(|v| rational::ratio(v.clone(), y[d].clone())).collect())
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ProjectiveMap) -> ProjectiveMap {
        ProjectiveMap::normalized(self.block.mul(&inner.block))
    }

    pub fn inverse(&self) -> ProjectiveMap {
        ProjectiveMap::normalized(self.block.inverse().expect("block is nonsingular"))
    }

    /// Canonical scaling of a block already known to be nonsingular.
    fn normalized(block: Matrix) -> Self {
        let first = block
            .rows()
            .iter()
            .flatten()
            .find(|x| !x.is_zero())
            .cloned()
            .expect("nonsingular block has a nonzero entry");
        ProjectiveMap { block: block.scale(&(Rational::one() / first)) }
    }

    /// Sign of the denominator, if it is the same strict sign on every point.
    pub fn admissible_sign(&self, points: &[Point]) -> Result<i8> {
        let mut sign = 0i8;
        for (i, p) in points.iter().enumerate() {
            let den = self.denominator(p);
            let s = if den.is_positive() {
                1
            } else if den.is_negative() {
                -1
            } else {
                return Err(Error::InadmissibleMap(format!("denominator vanishes at vertex {i}")));
            };
            if sign != 0 && s != sign {
                return Err(Error::InadmissibleMap(format!("denominator changes sign at vertex {i}")));
            }
            sign = s;
        }
        Ok(sign)
    }

    /// Image of the inequality `h` under the map, for a map whose
    /// denominator has sign `sign` on the region.
    pub fn map_halfspace(&self, h: &Halfspace, sign: i8) -> Halfspace {
        let inv = self.block.inverse().expect("block is nonsingular");
        let row = inv.vec_mul(&h.homogeneous());
        let row = if sign < 0 { rational::neg(&row) } else { row };
        Halfspace::from_homogeneous(&row)
    }
}

fn flip_last(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            if (i == n - 1) != (j == n - 1) {
                out.set(i, j, -m.get(i, j).clone());
            }
        }
    }
    out
}

/// The polar action `x -> (A^T x - c) / (-b^T x + alpha)`: if `Q = phi(P)`
/// with the origin inside both, the returned map takes `polar(Q)` onto
/// `polar(P)`.
pub fn dual_map(phi: &ProjectiveMap) -> ProjectiveMap {
    ProjectiveMap::normalized(flip_last(&phi.block.transpose()))
}

/// The primal map whose polar action is `t`, i.e. `polar(phi(P)) =
/// t(polar(P))`. Inverse of `phi -> dual_map(phi)^-1`.
pub fn primal_of_polar(t: &ProjectiveMap) -> ProjectiveMap {
    let inv_t = t.block.inverse().expect("block is nonsingular").transpose();
    ProjectiveMap::normalized(flip_last(&inv_t))
}

/// Applies an admissible map to a paired polytope. The incidence is carried
/// over and re-certified.
pub fn apply_projective_polytope(phi: &ProjectiveMap, p: &Polytope) -> Result<Polytope> {
    if phi.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: phi.dim() });
    }
    phi.admissible_sign(p.vertices())?;
    let vertices = phi.apply_points(p.vertices())?;
    Polytope::from_facet_sets(vertices, p.facet_sets().to_vec())
}

pub fn apply_projective(phi: &ProjectiveMap, p: &VPolytope) -> Result<VPolytope> {
    let full = Polytope::from_points(&p.vertices)?;
    if full.vertices() != p.vertices.as_slice() {
        return Err(Error::Input("listed points are not all vertices".into()));
    }
    Ok(apply_projective_polytope(phi, &full)?.vpolytope())
}

/// Shifts the polar of `p` by `v`: returns the map `x -> x / (v . x + 1)`
/// and `polar(phi(p)) = polar(p) + v`. Admissible exactly when `-v` is
/// interior to the polar, i.e. `v . x > -1` on `p`.
pub fn origin_shift(p: &Polytope, v: &[Rational]) -> Result<(ProjectiveMap, Polytope)> {
    let d = p.dim();
    if v.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: v.len() });
    }
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let phi = ProjectiveMap::new(&Matrix::identity(d), &rational::zero_point(d), v, Rational::one())?;
    let sign = phi
        .admissible_sign(p.vertices())
        .map_err(|_| Error::InadmissibleMap("shift vector is not interior to the polar".into()))?;
    if sign < 0 {
        return Err(Error::InadmissibleMap("shift vector is not interior to the polar".into()));
    }
    let image = apply_projective_polytope(&phi, p)?;
    Ok((phi, crate::geometry::polar::polar(&image)?))
}

/// Per-vertex positive scalars along the rays from the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RayScaling {
    #[serde(with = "rational::serde_rat_vec")]
    pub lambdas: Vec<Rational>,
}

impl RayScaling {
    pub fn new(lambdas: Vec<Rational>) -> Result<Self> {
        if let Some(i) = lambdas.iter().position(|l| !l.is_positive()) {
            return Err(Error::Input(format!("ray scalar {i} is not positive")));
        }
        Ok(RayScaling { lambdas })
    }

    pub fn identity(n: usize) -> Self {
        RayScaling { lambdas: vec![Rational::one(); n] }
    }

    pub fn is_identity(&self) -> bool {
        self.lambdas.iter().all(One::is_one)
    }

    /// Scalars of `self` applied after `first`.
    pub fn after(&self, first: &RayScaling) -> RayScaling {
        RayScaling {
            lambdas: self.lambdas.iter().zip(&first.lambdas).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> RayScaling {
        RayScaling {
            lambdas: self.lambdas.iter().map(|l| Rational::one() / l).collect(),
        }
    }
}

/// Scales vertex `i` by `lambda_i`, re-certifying the combinatorial type.
pub fn ray_scale_polytope(p: &Polytope, s: &RayScaling) -> Result<Polytope> {
    if s.lambdas.len() != p.vertices().len() {
        return Err(Error::DimensionMismatch { expected: p.vertices().len(), found: s.lambdas.len() });
    }
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let vertices = p
        .vertices()
        .iter()
        .zip(&s.lambdas)
        .map(|(v, l)| rational::scale(v, l))
        .collect();
    Polytope::from_facet_sets(vertices, p.facet_sets().to_vec()).map_err(|e| match e {
        Error::Certificate(f) => Error::TypeChange(f),
        e => e,
    })
}

pub fn ray_scale(p: &VPolytope, s: &RayScaling) -> Result<VPolytope> {
    let full = Polytope::from_points(&p.vertices)?;
    if full.vertices() != p.vertices.as_slice() {
        return Err(Error::Input("listed points are not all vertices".into()));
    }
    Ok(ray_scale_polytope(&full, s)?.vpolytope())
}

/// Replacement offsets for the facet rows, normals unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalTransform {
    #[serde(with = "rational::serde_rat_vec")]
    pub new_offsets: Vec<Rational>,
}

/// New offsets; the vertex list is recomputed from each vertex's facets so
/// vertex and facet order carry over. Falls back to full vertex enumeration
/// when the combinatorial type changes.
pub fn normal_transform_polytope(p: &Polytope, t: &NormalTransform) -> Result<Polytope> {
    if t.new_offsets.len() != p.facets().len() {
        return Err(Error::DimensionMismatch { expected: p.facets().len(), found: t.new_offsets.len() });
    }
    let rows: Vec<Halfspace> = p
        .facets()
        .iter()
        .zip(&t.new_offsets)
        .map(|(h, b)| Halfspace::new(h.normal.clone(), b.clone()))
        .collect();
    if let Some(q) = same_type_transform(p, &rows) {
        return Ok(q);
    }
    Polytope::from_halfspaces(&rows)
}

fn same_type_transform(p: &Polytope, rows: &[Halfspace]) -> Option<Polytope> {
    let d = p.dim();
    let inc = p.incidence();
    let mut vertices = Vec::with_capacity(p.vertices().len());
    for v in 0..p.vertices().len() {
        let mut basis: Vec<usize> = Vec::new();
        for j in inc.facets_of_vertex(v) {
            let mut trial: Vec<Vec<Rational>> = basis.iter().map(|&k| rows[k].normal.clone()).collect();
            trial.push(rows[j].normal.clone());
            if Matrix::from_rows(trial).rank() == basis.len() + 1 {
                basis.push(j);
            }
            if basis.len() == d {
                break;
            }
        }
        let a = Matrix::from_rows(basis.iter().map(|&k| rows[k].normal.clone()).collect());
        let b: Vec<Rational> = basis.iter().map(|&k| rows[k].offset.clone()).collect();
        vertices.push(a.solve(&b).ok()?);
    }
    let q = Polytope::from_facet_sets(vertices, p.facet_sets().to_vec()).ok()?;
    (q.facets() == rows).then_some(q)
}

pub fn normal_transform(p: &HPolytope, t: &NormalTransform) -> Result<HPolytope> {
    if t.new_offsets.len() != p.rows.len() {
        return Err(Error::DimensionMismatch { expected: p.rows.len(), found: t.new_offsets.len() });
    }
    let rows: Vec<Halfspace> = p
        .rows
        .iter()
        .zip(&t.new_offsets)
        .map(|(h, b)| Halfspace::new(h.normal.clone(), b.clone()))
        .collect();
    Ok(Polytope::from_halfspaces(&rows)?.hpolytope())
}

/// Offsets of the primal facets after a polar ray scaling: `b_k / lambda_k`.
pub fn normal_of_ray(p: &Polytope, s: &RayScaling) -> NormalTransform {
    NormalTransform {
        new_offsets: p.facets().iter().zip(&s.lambdas).map(|(h, l)| &h.offset / l).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polar::polar;
    use crate::rational::{int, ipoint, rat};

    fn cube(d: usize) -> Polytope {
        let rows: Vec<Halfspace> = (0..d)
            .flat_map(|k| {
                [
                    Halfspace::new(rational::unit(d, k), int(1)),
                    Halfspace::new(rational::neg(&rational::unit(d, k)), int(1)),
                ]
            })
            .collect();
        Polytope::from_halfspaces(&rows).unwrap()
    }

    fn skew() -> ProjectiveMap {
        let a = Matrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(0), int(1), rat(1, 2)],
            vec![int(1), int(0), int(3)],
        ]);
        ProjectiveMap::new(&a, &ipoint(&[1, 0, -1]), &[rat(1, 5), rat(-1, 7), rat(1, 9)], int(2)).unwrap()
    }

    #[test]
    fn canonical_scaling_is_syntactic() {
        let m = skew();
        let scaled = ProjectiveMap::from_block(m.block().scale(&rat(-3, 2))).unwrap();
        assert_eq!(m, scaled);
        assert!(m.compose(&m.inverse()).is_identity());
    }

    #[test]
    fn dual_is_contravariant() {
        let a = skew();
        let b = ProjectiveMap::translation(&[rat(1, 3), int(0), int(-2)]);
        assert_eq!(dual_map(&a.compose(&b)), dual_map(&b).compose(&dual_map(&a)));
        assert!(dual_map(&ProjectiveMap::identity(3)).is_identity());
    }

    #[test]
    fn shift_dual_inverse_is_translation() {
        let v = vec![rat(1, 4), int(0), rat(-1, 8)];
        let phi = ProjectiveMap::new(&Matrix::identity(3), &rational::zero_point(3), &v, int(1)).unwrap();
        assert_eq!(dual_map(&phi).inverse(), ProjectiveMap::translation(&v));
        assert_eq!(primal_of_polar(&ProjectiveMap::translation(&v)), phi);
    }

    #[test]
    fn projective_image_matches_polar_action() {
        let p = cube(3);
        let phi = skew();
        let image = apply_projective_polytope(&phi, &p).unwrap();
        // shift so that both sides have the origin inside
        let c = image.centroid();
        let q = image.translated(&rational::neg(&c)).unwrap();
        let phi = ProjectiveMap::translation(&rational::neg(&c)).compose(&phi);
        let pq = polar(&q).unwrap();
        let pp = polar(&p).unwrap();
        let via = apply_projective_polytope(&dual_map(&phi).inverse(), &pp).unwrap();
        assert!(via.same_set(&pq));
        // halfspace images agree with the recomputed facets
        let sign = phi.admissible_sign(p.vertices()).unwrap();
        let mapped: Vec<Halfspace> = p.facets().iter().map(|h| phi.map_halfspace(h, sign)).collect();
        assert_eq!(mapped, q.facets());
    }

    #[test]
    fn inadmissible_maps_are_rejected() {
        let p = cube(2);
        let phi = ProjectiveMap::new(&Matrix::identity(2), &ipoint(&[0, 0]), &ipoint(&[1, 0]), int(1)).unwrap();
        assert!(matches!(apply_projective_polytope(&phi, &p), Err(Error::InadmissibleMap(_))));
        let ok = ProjectiveMap::new(&Matrix::identity(2), &ipoint(&[0, 0]), &[rat(1, 4), int(0)], int(1)).unwrap();
        let (_, shifted) = origin_shift(&p, &[rat(1, 4), int(0)]).unwrap();
        let expect: Vec<Point> = polar(&p)
            .unwrap()
            .vertices()
            .iter()
            .map(|x| rational::add(x, &[rat(1, 4), int(0)]))
            .collect();
        assert_eq!(shifted.vertices(), expect.as_slice());
        assert!(apply_projective_polytope(&ok, &p).is_ok());
        assert!(origin_shift(&p, &[rat(9, 10), rat(9, 10)]).is_err());
    }

    #[test]
    fn normal_transform_box() {
        let p = cube(3);
        let t = NormalTransform { new_offsets: vec![int(2), int(1), int(1), int(1), int(1), int(1)] };
        let q = normal_transform_polytope(&p, &t).unwrap();
        assert!(q.vertices().iter().any(|v| v == &ipoint(&[2, 1, 1])));
        assert_eq!(q.incidence(), p.incidence());
        let h = normal_transform(&p.hpolytope(), &t).unwrap();
        assert_eq!(h.sorted_rows(), q.canonical_rows());
        let bad = NormalTransform { new_offsets: vec![int(1), int(-1), int(1), int(1), int(1), int(1)] };
        assert!(normal_transform_polytope(&p, &bad).is_err());
    }

    #[test]
    fn ray_scaling_detects_type_change() {
        let kite = Polytope::from_points(&[ipoint(&[2, 0]), ipoint(&[1, 1]), ipoint(&[-1, 0]), ipoint(&[1, -1])]).unwrap();
        let ok = RayScaling::new(vec![int(100), int(1), int(1), int(1)]).unwrap();
        assert!(ray_scale_polytope(&kite, &ok).is_ok());
        for l in [rat(1, 2), rat(1, 4)] {
            let s = RayScaling::new(vec![l, int(1), int(1), int(1)]).unwrap();
            assert!(matches!(ray_scale_polytope(&kite, &s), Err(Error::TypeChange(_))));
        }
    }
}
