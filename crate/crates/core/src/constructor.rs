//! Prism lifts of normally equivalent cubes, projective gluing along a
//! common facet, towers and the C-connected sum.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::enumerative::{tower_f, FVector};
use crate::error::{Error, Result};
use crate::geometry::{
    f_vector_of, is_combinatorial_cube, Certificate, CertificateFailure, CertificateKind, HPolytope, Halfspace,
    Polytope,
};
use crate::geometry::certificate::Witness;
use crate::linalg::Matrix;
use crate::normalizer::{self, Step};
use crate::projective::ProjectiveMap;
use crate::rational::{self, Point, Rational};

/// Smallest gluing parameter tried is `2^-GLUE_FLOOR`.
pub const GLUE_FLOOR: u32 = 64;

/// The d-cube `{(x, t) : A x + (b1 - b2) t <= b1, 0 <= t <= 1}` with bottom
/// `q1` at height 0 and top `q2` at height 1. Facets keep the row order of
/// `q1`, followed by the top and the bottom facet.
pub fn prism_lift(q1: &HPolytope, q2: &HPolytope) -> Result<Polytope> {
    let e = q1.dim;
    if q2.dim != e {
        return Err(Error::DimensionMismatch { expected: e, found: q2.dim });
    }
    if q1.rows.len() != q2.rows.len() {
        return Err(Error::NotNormallyEquivalent);
    }
    let mut rows = Vec::with_capacity(q1.rows.len() + 2);
    for r1 in &q1.rows {
        let mut matches = q2.rows.iter().filter(|r2| r2.normal == r1.normal);
        let (Some(r2), None) = (matches.next(), matches.next()) else {
            return Err(Error::NotNormallyEquivalent);
        };
        let mut normal = r1.normal.clone();
        normal.push(&r1.offset - &r2.offset);
        rows.push(Halfspace::new(normal, r1.offset.clone()));
    }
    rows.push(Halfspace::new(rational::unit(e + 1, e), Rational::one()));
    rows.push(Halfspace::new(rational::neg(&rational::unit(e + 1, e)), Rational::zero()));
    let p = Polytope::from_halfspaces(&rows).map_err(|_| Error::NotACube)?;
    if !is_combinatorial_cube(p.incidence()) {
        return Err(Error::NotACube);
    }
    Ok(p)
}

pub fn prism_top(p: &Polytope) -> usize {
    p.facets().len() - 2
}

pub fn prism_bottom(p: &Polytope) -> usize {
    p.facets().len() - 1
}

/// Outcome of [`glue`]. Indices of `Q`'s vertices and facets in the result
/// are recorded so later steps can follow them.
#[derive(Clone, Debug)]
pub struct GlueResult {
    pub polytope: Polytope,
    /// The map applied to `Q`, flattening included.
    pub map_used: ProjectiveMap,
    /// The common facet's vertices in the result's indexing; it is not a
    /// facet of the result.
    pub shared_facet: VertexSet,
    pub shared_hyperplane: Halfspace,
    pub parameter_exponent: u32,
    pub reflected: bool,
    pub certificate: Certificate,
    pub q_vertex_index: Vec<usize>,
    pub q_facet_index: Vec<Option<usize>>,
}

/// Serializable summary of one glue step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueRecord {
    pub parameter_exponent: u32,
    pub reflected: bool,
    pub strict_checks: usize,
    pub equality_checks: usize,
}

impl From<&GlueResult> for GlueRecord {
    fn from(g: &GlueResult) -> Self {
        GlueRecord {
            parameter_exponent: g.parameter_exponent,
            reflected: g.reflected,
            strict_checks: g.certificate.witness.strict_checks,
            equality_checks: g.certificate.witness.equality_checks,
        }
    }
}

/// Glues `Q` onto `P` so that facet `f2` of `Q` lands on facet `f1` of
/// `P` and the union is convex.
///
/// `map` must take the vertices of facet `f2` onto those of facet `f1`. It
/// is composed with a member of the homology family that fixes the
/// hyperplane of `f2` pointwise and contracts `Q` toward the vertex centroid
/// of `f2` with ratio `2^-k`; `k` increases from 0 until the exact
/// convex-union certificate passes. Both sides of the hyperplane are tried
/// at each `k`.
pub fn glue(p: &Polytope, f1: usize, q: &Polytope, f2: usize, map: &ProjectiveMap) -> Result<GlueResult> {
    let d = p.dim();
    if q.dim() != d || map.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: q.dim().min(map.dim()) });
    }
    if f1 >= p.facets().len() || f2 >= q.facets().len() {
        return Err(Error::Input("facet index out of range".into()));
    }
    let face2: Vec<usize> = q.facet_sets()[f2].iter().collect();
    let face1: Vec<usize> = p.facet_sets()[f1].iter().collect();
    if face1.len() != face2.len() {
        return Err(Error::NoProjectiveCorrespondence("facets have different vertex counts".into()));
    }
    let f2_points: Vec<Point> = face2.iter().map(|&i| q.vertices()[i].clone()).collect();
    let images = map
        .admissible_sign(&f2_points)
        .and_then(|_| map.apply_points(&f2_points))
        .map_err(|e| Error::NoProjectiveCorrespondence(e.to_string()))?;
    let by_point: HashMap<&Point, usize> = face1.iter().map(|&i| (&p.vertices()[i], i)).collect();
    let mut correspondence = HashMap::new();
    for (&j, img) in face2.iter().zip(&images) {
        let Some(&i) = by_point.get(img) else {
            return Err(Error::NoProjectiveCorrespondence(format!("vertex {j} does not land on a vertex of the facet")));
        };
        correspondence.insert(j, i);
    }
    if correspondence.values().collect::<std::collections::HashSet<_>>().len() != face1.len() {
        return Err(Error::NoProjectiveCorrespondence("correspondence is not a bijection".into()));
    }

    let h2 = &q.facets()[f2];
    let centre = rational::centroid(&f2_points);
    let reflection = reflection_through(h2)?;
    for k in 0..=GLUE_FLOOR {
        let g = homology(h2, &centre, k)?;
        for reflected in [false, true] {
            let inner = if reflected { reflection.compose(&g) } else { g.clone() };
            let phi = map.compose(&inner);
            if let Some(mut res) = try_union(p, f1, q, f2, &phi, &correspondence)? {
                res.parameter_exponent = k;
                res.reflected = reflected;
                return Ok(res);
            }
        }
    }
    Err(Error::SearchExhausted(GLUE_FLOOR))
}

/// `x -> x + 2 l(x) m` with `l(x) = n.x - beta` and `n.m = -1`.
fn reflection_through(h: &Halfspace) -> Result<ProjectiveMap> {
    let d = h.dim();
    let nn = rational::dot(&h.normal, &h.normal);
    let m = rational::scale(&h.normal, &(-Rational::one() / nn));
    let mut a = Matrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            let v = a.get(i, j) + Rational::from_integer(2.into()) * &m[i] * &h.normal[j];
            a.set(i, j, v);
        }
    }
    let t = rational::scale(&m, &(-Rational::from_integer(2.into()) * &h.offset));
    ProjectiveMap::affine(&a, &t)
}

/// Homogeneous block `s I - (1 - s) (c, 1) (n, -beta)^T` with `s = 2^-k`:
/// fixes the hyperplane pointwise and sends the far side toward `c`.
fn homology(h: &Halfspace, c: &[Rational], k: u32) -> Result<ProjectiveMap> {
    let d = h.dim();
    if k == 0 {
        return Ok(ProjectiveMap::identity(d));
    }
    let s = rational::pow2(-(k as i64));
    let one_minus = Rational::one() - &s;
    let mut centre = c.to_vec();
    centre.push(Rational::one());
    let mut ell = h.normal.clone();
    ell.push(-h.offset.clone());
    let mut block = Matrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        for j in 0..=d {
            let mut v = -(&one_minus * &centre[i] * &ell[j]);
            if i == j {
                v += &s;
            }
            block.set(i, j, v);
        }
    }
    ProjectiveMap::from_block(block)
}

fn strictly_inside(h: &Halfspace, x: &[Rational]) -> bool {
    h.slack(x).is_positive()
}

/// Runs the convex-union checks for one candidate map. `Ok(None)` means the
/// candidate fails and the search should continue.
fn try_union(
    p: &Polytope,
    f1: usize,
    q: &Polytope,
    f2: usize,
    phi: &ProjectiveMap,
    correspondence: &HashMap<usize, usize>,
) -> Result<Option<GlueResult>> {
    let Ok(sign) = phi.admissible_sign(q.vertices()) else {
        return Ok(None);
    };
    let images = phi.apply_points(q.vertices())?;
    let h1 = &p.facets()[f1];
    let set2 = &q.facet_sets()[f2];
    let set1 = &p.facet_sets()[f1];
    let mut strict = 0usize;
    for (j, y) in images.iter().enumerate() {
        if set2.contains(j) {
            if y != &p.vertices()[correspondence[&j]] {
                return Err(Error::NoProjectiveCorrespondence(format!("vertex {j} moved off the facet")));
            }
            continue;
        }
        if h1.slack(y).is_positive() || h1.slack(y).is_zero() {
            return Ok(None);
        }
        for (i, h) in p.facets().iter().enumerate() {
            if i != f1 && !strictly_inside(h, y) {
                return Ok(None);
            }
            strict += 1;
        }
    }
    let q_rows: Vec<Halfspace> = q.facets().iter().map(|h| phi.map_halfspace(h, sign)).collect();
    let flipped = Halfspace::new(rational::neg(&h1.normal), -h1.offset.clone());
    if q_rows[f2] != flipped {
        return Err(Error::Certificate(CertificateFailure::ConvexUnion {
            vertex: 0,
            facet: f2,
            detail: "mapped facet hyperplane differs from the target facet".into(),
        }));
    }
    for (v, x) in p.vertices().iter().enumerate() {
        if set1.contains(v) {
            continue;
        }
        for (i, h) in q_rows.iter().enumerate() {
            if i != f2 && !strictly_inside(h, x) {
                return Ok(None);
            }
            strict += 1;
        }
    }

    let mut vertices = p.vertices().to_vec();
    let mut q_vertex_index = vec![0usize; q.vertices().len()];
    for (j, y) in images.into_iter().enumerate() {
        if set2.contains(j) {
            q_vertex_index[j] = correspondence[&j];
        } else {
            q_vertex_index[j] = vertices.len();
            vertices.push(y);
        }
    }
    let n = vertices.len();
    let mut sets: Vec<VertexSet> = Vec::new();
    for (i, s) in p.facet_sets().iter().enumerate() {
        if i != f1 {
            sets.push(VertexSet::from_indices(n, s.iter()));
        }
    }
    let mut q_facet_index = vec![None; q.facets().len()];
    for (i, s) in q.facet_sets().iter().enumerate() {
        if i != f2 {
            q_facet_index[i] = Some(sets.len());
            sets.push(VertexSet::from_indices(n, s.iter().map(|j| q_vertex_index[j])));
        }
    }
    let union = Polytope::from_facet_sets(vertices, sets)?;
    for (i, idx) in q_facet_index.iter().enumerate() {
        if let Some(idx) = idx {
            if union.facets()[*idx] != q_rows[i] {
                return Err(Error::InternalAssertion(format!("glued facet {i} disagrees with its mapped row")));
            }
        }
    }
    check_face_counts(p, f1, q, &union)?;

    let shared_facet = VertexSet::from_indices(n, set1.iter());
    let witness = Witness {
        hyperplanes: vec![h1.clone()],
        strict_checks: strict,
        equality_checks: set1.len(),
        ..Witness::default()
    };
    Ok(Some(GlueResult {
        polytope: union,
        map_used: phi.clone(),
        shared_facet,
        shared_hyperplane: h1.clone(),
        parameter_exponent: 0,
        reflected: false,
        certificate: Certificate::new(CertificateKind::ConvexUnion, witness),
        q_vertex_index,
        q_facet_index,
    }))
}

/// `f_i(R) = f_i(P) + f_i(Q) - f_i(F)` below the facets, and two facets
/// fewer than `P` and `Q` together.
fn check_face_counts(p: &Polytope, f1: usize, q: &Polytope, r: &Polytope) -> Result<()> {
    let d = p.dim();
    let fp = f_vector_of(p.incidence())?;
    let fq = f_vector_of(q.incidence())?;
    let fr = f_vector_of(r.incidence())?;
    let (facet_inc, _) = p.incidence().facet_incidence(f1);
    let ff: Vec<u64> = if d >= 2 { f_vector_of(&facet_inc)?.entries().to_vec() } else { vec![] };
    for i in 0..d {
        let lost = if i + 1 == d { 2 } else { ff.get(i).copied().unwrap_or(0) };
        let expected = fp.entries()[i] + fq.entries()[i] - lost;
        let found = fr.entries()[i];
        if found != expected {
            return Err(Error::Certificate(CertificateFailure::FaceCount {
                expected: expected as usize,
                found: found as usize,
            }));
        }
    }
    Ok(())
}

/// `(x, t) -> (phi(x), t / den)`: the extension of a map on `R^(d-1)` that
/// keeps the hyperplane `t = 0` and acts as `phi` on it.
pub fn extend_map(phi: &ProjectiveMap) -> ProjectiveMap {
    let e = phi.dim();
    let b = phi.block();
    let src = |i: usize| if i < e { i } else { e };
    let mut block = Matrix::zeros(e + 2, e + 2);
    block.set(e, e, Rational::one());
    for i in (0..e + 2).filter(|&i| i != e) {
        for j in (0..e + 2).filter(|&j| j != e) {
            block.set(i, j, b.get(src(i), src(j)).clone());
        }
    }
    ProjectiveMap::from_block(block).expect("extension of a nonsingular block")
}

fn lift(p: &Point) -> Point {
    let mut x = p.clone();
    x.push(Rational::zero());
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "cubes")]
pub enum TowerSize {
    /// One cube per merged run of normal steps (at least one).
    Minimal,
    /// Pads with right prisms on the top facet up to exactly this many cubes.
    Exact(usize),
}

/// A stack of d-cubes, each glued onto the top facet of the previous one.
#[derive(Clone, Debug)]
pub struct Tower {
    pub polytope: Polytope,
    pub cube_count: usize,
    pub bottom_facet: usize,
    pub top_facet: usize,
    /// `(y, 0)` for each vertex `y` of the first input maps to the bottom
    /// facet.
    pub bottom_map: ProjectiveMap,
    /// `(y, 0)` for each vertex `y` of the second input maps to the top facet.
    pub top_map: ProjectiveMap,
    pub glue_steps: Vec<GlueRecord>,
}

impl Tower {
    /// Checks that the witness maps reproduce the inputs on the marked facets.
    pub fn check_witnesses(&self, q: &Polytope, q2: &Polytope) -> Result<()> {
        for (name, map, input, facet) in
            [("bottom", &self.bottom_map, q, self.bottom_facet), ("top", &self.top_map, q2, self.top_facet)]
        {
            let lifted: Vec<Point> = input.vertices().iter().map(lift).collect();
            let mut got = map.apply_points(&lifted)?;
            let mut want: Vec<Point> =
                self.polytope.facet_sets()[facet].iter().map(|i| self.polytope.vertices()[i].clone()).collect();
            got.sort();
            want.sort();
            if got != want {
                return Err(Error::InternalAssertion(format!("{name} witness does not reproduce the input")));
            }
        }
        Ok(())
    }

    /// Cubical, `m` cubes and the tower f-vector.
    pub fn check_structure(&self) -> Result<FVector> {
        let inc = self.polytope.incidence();
        for j in 0..inc.n_facets() {
            if !is_combinatorial_cube(&inc.facet_incidence(j).0) {
                return Err(Error::Certificate(CertificateFailure::NotCubical { facet: j }));
            }
        }
        let f = f_vector_of(inc)?;
        let expected = tower_f(self.polytope.dim(), self.cube_count)?;
        if f != expected {
            return Err(Error::InternalAssertion(format!("tower f-vector {f} differs from {expected}")));
        }
        Ok(f)
    }
}

struct TowerBuilder {
    d: usize,
    tower: Option<(Polytope, usize, usize)>,
    bottom_map: Option<ProjectiveMap>,
    /// Projective steps seen before the first cube.
    pre: ProjectiveMap,
    /// `(y, 0)` for `y` in the current cross-section maps onto the top facet.
    embed: ProjectiveMap,
    cubes: usize,
    glue_steps: Vec<GlueRecord>,
}

impl TowerBuilder {
    fn add_cube(&mut self, from: &Polytope, to: &Polytope) -> Result<()> {
        let prism = prism_lift(&from.hpolytope(), &to.hpolytope())?;
        let shift = ProjectiveMap::translation(&rational::unit(self.d, self.d - 1));
        match self.tower.take() {
            None => {
                self.bottom_map = Some(extend_map(&self.pre));
                self.tower = Some((prism.clone(), prism_bottom(&prism), prism_top(&prism)));
                self.embed = shift;
            }
            Some((t, bottom, top)) => {
                let g = glue(&t, top, &prism, prism_bottom(&prism), &self.embed)?;
                let new_top = g.q_facet_index[prism_top(&prism)].expect("top facet survives gluing");
                let new_bottom = bottom - usize::from(bottom > top);
                self.embed = g.map_used.compose(&shift);
                self.glue_steps.push(GlueRecord::from(&g));
                self.tower = Some((g.polytope, new_bottom, new_top));
            }
        }
        self.cubes += 1;
        Ok(())
    }

    fn projective(&mut self, phi: &ProjectiveMap) {
        if self.tower.is_none() {
            self.pre = phi.compose(&self.pre);
        } else {
            self.embed = self.embed.compose(&extend_map(&phi.inverse()));
        }
    }
}

/// A d-tower whose bottom and top facets are projectively equivalent to the
/// (d-1)-cubes `q` and `q2`, from the normal steps of [`normalizer::relate_cubes`].
pub fn build_tower(q: &Polytope, q2: &Polytope) -> Result<Tower> {
    build_tower_sized(q, q2, TowerSize::Minimal)
}

pub fn build_tower_sized(q: &Polytope, q2: &Polytope, size: TowerSize) -> Result<Tower> {
    let e = q.dim();
    if e < 2 {
        return Err(Error::UnsupportedDimension(e + 1));
    }
    let d = e + 1;
    let log = normalizer::relate_cubes(q, q2)?;
    let mut b = TowerBuilder {
        d,
        tower: None,
        bottom_map: None,
        pre: ProjectiveMap::identity(e),
        embed: ProjectiveMap::identity(d),
        cubes: 0,
        glue_steps: Vec::new(),
    };
    let states = &log.snapshots;
    let mut run_start: Option<usize> = None;
    for (i, step) in log.steps().enumerate() {
        match step {
            Step::Normal { .. } => {
                run_start.get_or_insert(i);
            }
            Step::Projective { map } => {
                if let Some(s) = run_start.take() {
                    flush(&mut b, &states[s], &states[i])?;
                }
                b.projective(map);
            }
            Step::Ray { .. } => return Err(Error::InternalAssertion("ray step in a primal log".into())),
        }
    }
    let last = states.len() - 1;
    if let Some(s) = run_start.take() {
        flush(&mut b, &states[s], &states[last])?;
    }
    let target = match size {
        TowerSize::Minimal => 1,
        TowerSize::Exact(m) => m,
    };
    if b.cubes > target && matches!(size, TowerSize::Exact(_)) {
        return Err(Error::BoundViolation { step: b.cubes, detail: format!("tower needs {} cubes, {target} requested", b.cubes) });
    }
    while b.cubes < target {
        b.add_cube(&states[last], &states[last])?;
    }
    let (polytope, bottom_facet, top_facet) = b.tower.take().expect("at least one cube");
    let tower = Tower {
        polytope,
        cube_count: b.cubes,
        bottom_facet,
        top_facet,
        bottom_map: b.bottom_map.take().expect("set with the first cube"),
        top_map: b.embed.clone(),
        glue_steps: b.glue_steps,
    };
    if tower.cube_count > 4 * d {
        return Err(Error::BoundViolation { step: tower.cube_count, detail: format!("more than {} cubes", 4 * d) });
    }
    tower.check_witnesses(q, q2)?;
    tower.check_structure()?;
    Ok(tower)
}

/// A merged run of normal steps becomes one cube unless it is trivial.
fn flush(b: &mut TowerBuilder, from: &Polytope, to: &Polytope) -> Result<()> {
    if from.canonical_rows() == to.canonical_rows() {
        return Ok(());
    }
    b.add_cube(from, to)
}

/// Affine chart of a facet hyperplane `a.x = beta`: drops the first
/// coordinate `k` with `a_k != 0`. The returned map sends `(y, t)` to the
/// point of the hyperplane with the remaining coordinates `y`, moved by `t`
/// along `e_k`.
pub fn facet_chart(h: &Halfspace) -> Result<(usize, ProjectiveMap)> {
    let d = h.dim();
    let k = h.normal.iter().position(|x| !x.is_zero()).ok_or(Error::Degenerate)?;
    let ak = h.normal[k].clone();
    let mut a = Matrix::zeros(d, d);
    let mut t = rational::zero_point(d);
    let others: Vec<usize> = (0..d).filter(|&j| j != k).collect();
    for (col, &j) in others.iter().enumerate() {
        a.set(j, col, Rational::one());
        a.set(k, col, -(&h.normal[j] / &ak));
    }
    a.set(k, d - 1, Rational::one());
    t[k] = &h.offset / &ak;
    Ok((k, ProjectiveMap::affine(&a, &t)?))
}

/// The facet as a (d-1)-polytope in its chart.
pub fn facet_in_chart(p: &Polytope, f: usize) -> Result<Polytope> {
    let (k, _) = facet_chart(&p.facets()[f])?;
    let pts: Vec<Point> = p.facet_sets()[f]
        .iter()
        .map(|i| p.vertices()[i].iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect())
        .collect();
    Polytope::from_points(&pts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSumProvenance {
    pub connector_cubes: usize,
    pub connector_glue: Vec<GlueRecord>,
    pub glue: Vec<GlueRecord>,
}

#[derive(Clone, Debug)]
pub struct ConnectedSum {
    pub polytope: Polytope,
    pub connector: Tower,
    pub provenance: ConnectedSumProvenance,
}

/// `Q1 #_{F1} C #_{F2} Q2` with `C` a tower between the two facets.
pub fn c_connected_sum(q1: &Polytope, f1: usize, q2: &Polytope, f2: usize, size: TowerSize) -> Result<ConnectedSum> {
    let d = q1.dim();
    if q2.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: q2.dim() });
    }
    if f1 >= q1.facets().len() || f2 >= q2.facets().len() {
        return Err(Error::Input("facet index out of range".into()));
    }
    let y1 = facet_in_chart(q1, f1)?;
    let y2 = facet_in_chart(q2, f2)?;
    let tower = build_tower_sized(&y1, &y2, size)?;
    let (_, chart1) = facet_chart(&q1.facets()[f1])?;
    let (_, chart2) = facet_chart(&q2.facets()[f2])?;

    let to_q1 = chart1.compose(&tower.bottom_map.inverse());
    let g1 = glue(q1, f1, &tower.polytope, tower.bottom_facet, &to_q1)?;
    let top = g1.q_facet_index[tower.top_facet].expect("top facet survives gluing");
    let to_top = g1.map_used.compose(&tower.top_map).compose(&chart2.inverse());
    let g2 = glue(&g1.polytope, top, q2, f2, &to_top)?;
    let inc = g2.polytope.incidence();
    for j in 0..inc.n_facets() {
        if !is_combinatorial_cube(&inc.facet_incidence(j).0) {
            return Err(Error::Certificate(CertificateFailure::NotCubical { facet: j }));
        }
    }
    let provenance = ConnectedSumProvenance {
        connector_cubes: tower.cube_count,
        connector_glue: tower.glue_steps.clone(),
        glue: vec![GlueRecord::from(&g1), GlueRecord::from(&g2)],
    };
    Ok(ConnectedSum { polytope: g2.polytope, connector: tower, provenance })
}
