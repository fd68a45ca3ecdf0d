//! Normalisation of combinatorial cubes through their polar crosspolytopes,
//! and relating two cubes by projective and normal transformations.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::certificate::{check_orthogonal_concurrent, Certificate, CertificateFailure, CertificateKind};
use crate::geometry::incidence::{crosspolytope_pairing, cube_structure, OppositePairing};
use crate::geometry::polar::polar;
use crate::geometry::polytope::Polytope;
use crate::linalg::Matrix;
use crate::projective::{
    apply_projective_polytope, normal_of_ray, normal_transform_polytope, primal_of_polar, ray_scale_polytope,
    NormalTransform, ProjectiveMap, RayScaling,
};
use crate::rational::{self, rat, Point, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum Step {
    Projective { map: ProjectiveMap },
    Normal { transform: NormalTransform },
    Ray { scaling: RayScaling },
}

impl Step {
    pub fn apply(&self, p: &Polytope) -> Result<Polytope> {
        match self {
            Step::Projective { map } => apply_projective_polytope(map, p),
            Step::Normal { transform } => normal_transform_polytope(p, transform),
            Step::Ray { scaling } => ray_scale_polytope(p, scaling),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Step::Projective { .. } => "projective",
            Step::Normal { .. } => "normal",
            Step::Ray { .. } => "ray",
        }
    }

    /// Identity as a transformation of `p`.
    pub fn is_identity_on(&self, p: &Polytope) -> bool {
        match self {
            Step::Projective { map } => map.is_identity(),
            Step::Ray { scaling } => scaling.is_identity(),
            Step::Normal { transform } => p.facets().iter().zip(&transform.new_offsets).all(|(h, b)| &h.offset == b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    #[serde(flatten)]
    pub step: Step,
    pub certificate: Certificate,
    pub snapshot: usize,
}

/// Whether a log acts on cubes or on their polar crosspolytopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Primal,
    Polar,
}

/// Ordered steps with the polytope after each one; `snapshots[0]` is the
/// input and `snapshots[k]` follows entry `k-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformLog {
    pub space: Space,
    pub bound: usize,
    pub entries: Vec<LogEntry>,
    pub snapshots: Vec<Polytope>,
}

impl TransformLog {
    fn start(space: Space, bound: usize, input: Polytope) -> Self {
        TransformLog { space, bound, entries: Vec::new(), snapshots: vec![input] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn input(&self) -> &Polytope {
        &self.snapshots[0]
    }

    pub fn final_polytope(&self) -> &Polytope {
        self.snapshots.last().expect("log has an input snapshot")
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.entries.iter().map(|e| &e.step)
    }

    fn push(&mut self, step: Step, next: Polytope) -> Result<()> {
        let certificate = match self.space {
            Space::Primal => cube_certificate(&next)?,
            Space::Polar => crosspolytope_certificate(&next)?,
        };
        self.entries.push(LogEntry { step, certificate, snapshot: self.snapshots.len() });
        self.snapshots.push(next);
        Ok(())
    }

    fn apply_and_push(&mut self, step: Step) -> Result<()> {
        let i = self.entries.len();
        let next = step
            .apply(self.final_polytope())
            .map_err(|e| Error::InternalAssertion(format!("step {i} ({}): {e}", step.tag())))?;
        self.push(step, next)
    }

    fn extend(&mut self, other: TransformLog) {
        let offset = self.snapshots.len() - 1;
        for mut e in other.entries {
            e.snapshot += offset;
            self.entries.push(e);
        }
        self.snapshots.extend(other.snapshots.into_iter().skip(1));
    }

    /// Applies the steps to `input`, re-certifying each intermediate
    /// polytope, and returns the result.
    pub fn replay(&self, input: &Polytope) -> Result<Polytope> {
        replay(input, self.steps(), self.space)
    }

    pub fn check_bound(&self) -> Result<()> {
        if self.entries.len() > self.bound {
            return Err(Error::BoundViolation {
                step: self.entries.len() - 1,
                detail: format!("{} steps exceed the bound {}", self.entries.len(), self.bound),
            });
        }
        Ok(())
    }
}

pub fn replay<'a>(input: &Polytope, steps: impl IntoIterator<Item = &'a Step>, space: Space) -> Result<Polytope> {
    let mut cur = input.clone();
    for (i, step) in steps.into_iter().enumerate() {
        cur = step
            .apply(&cur)
            .map_err(|e| Error::InternalAssertion(format!("replay step {i}: {e}")))?;
        match space {
            Space::Primal => cube_certificate(&cur)?,
            Space::Polar => crosspolytope_certificate(&cur)?,
        };
    }
    Ok(cur)
}

pub fn cube_certificate(p: &Polytope) -> Result<Certificate> {
    let (pairing, _) = cube_structure(p.incidence()).ok_or(Error::Certificate(CertificateFailure::NotCube))?;
    let mut w = p.certificate().witness.clone();
    w.pairs = pairing.pairs;
    Ok(Certificate::new(CertificateKind::CombinatorialCube, w))
}

pub fn crosspolytope_certificate(p: &Polytope) -> Result<Certificate> {
    let pairing =
        crosspolytope_pairing(p.incidence()).ok_or(Error::Certificate(CertificateFailure::NotCrosspolytope))?;
    let mut w = p.certificate().witness.clone();
    w.pairs = pairing.pairs;
    Ok(Certificate::new(CertificateKind::CombinatorialCrosspolytope, w))
}

/// Hyperplane `<direction, x> = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    #[serde(with = "rational::serde_rat_vec")]
    pub direction: Point,
    #[serde(with = "rational::serde_rat")]
    pub offset: Rational,
}

/// Polar crosspolytope during normalisation. Axis `i` is recorded once its
/// separating hyperplane is fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationState {
    pub crosspolytope: Polytope,
    pub pairing: OppositePairing,
    pub completed_axes: Vec<Axis>,
}

impl IterationState {
    fn vertex(&self, i: usize) -> &Point {
        &self.crosspolytope.vertices()[i]
    }

    fn diagonal(&self, i: usize) -> (usize, usize) {
        self.pairing.pairs[i]
    }

    fn direction(&self, i: usize) -> Point {
        let (a, b) = self.diagonal(i);
        rational::sub(self.vertex(a), self.vertex(b))
    }

    /// Moves the origin to `t`.
    fn translate(&mut self, t: &[Rational], log: &mut TransformLog) -> Result<()> {
        let step = Step::Projective { map: ProjectiveMap::translation(&rational::neg(t)) };
        log.apply_and_push(step)?;
        self.crosspolytope = log.final_polytope().clone();
        for h in &mut self.completed_axes {
            h.offset -= rational::dot(&h.direction, t);
        }
        Ok(())
    }

    fn ray(&mut self, s: RayScaling, log: &mut TransformLog) -> Result<()> {
        log.apply_and_push(Step::Ray { scaling: s })?;
        self.crosspolytope = log.final_polytope().clone();
        Ok(())
    }
}

/// `c = max(1, max_{j != a} <u, p_j> / <u, p_a>)` with `u = p_a - p_b` for
/// the diagonal `(a, b)` of axis `i`. Any `c' > c` strictly separates the
/// scaled `c' p_a` from the other vertices.
pub fn separation_threshold(state: &IterationState, i: usize) -> Result<Rational> {
    let (a, b) = state.diagonal(i);
    if !rational::is_zero(&rational::midpoint(state.vertex(a), state.vertex(b))) {
        return Err(Error::Input(format!("origin is not the midpoint of diagonal {i}")));
    }
    let u = state.direction(i);
    if rational::is_zero(&u) {
        return Err(Error::DegenerateSegment(i));
    }
    let upa = rational::dot(&u, state.vertex(a));
    let mut c = Rational::one();
    for (j, p) in state.crosspolytope.vertices().iter().enumerate() {
        if j != a {
            let r = rational::dot(&u, p) / &upa;
            if r > c {
                c = r;
            }
        }
    }
    Ok(c)
}

/// Scalars moving every vertex off diagonal `i` along its ray onto the
/// recorded hyperplane of axis `i`.
pub fn flatten_onto_hyperplane(state: &IterationState, i: usize) -> Result<RayScaling> {
    let (a, b) = state.diagonal(i);
    let h = state
        .completed_axes
        .get(i)
        .ok_or_else(|| Error::Input(format!("hyperplane of axis {i} is not fixed yet")))?;
    let lambdas = state
        .crosspolytope
        .vertices()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            if j == a || j == b {
                return Ok(Rational::one());
            }
            let den = rational::dot(&h.direction, p);
            if den.is_zero() {
                return Err(Error::InternalAssertion(format!("ray of vertex {j} is parallel to H_{i}")));
            }
            let l = &h.offset / den;
            if !l.is_positive() {
                return Err(Error::InternalAssertion(format!("vertex {j} is on the wrong side of H_{i}")));
            }
            Ok(l)
        })
        .collect::<Result<Vec<_>>>()?;
    RayScaling::new(lambdas)
}

fn run_iteration(state: &mut IterationState, log: &mut TransformLog, i: usize) -> Result<()> {
    let (a, b) = state.diagonal(i);
    // (1) origin to the midpoint of the diagonal
    let mid = rational::midpoint(state.vertex(a), state.vertex(b));
    state.translate(&mid, log)?;
    // (2) push p_a beyond the threshold
    let c = separation_threshold(state, i)?;
    let u = state.direction(i);
    let pa = state.vertex(a).clone();
    let upa = rational::dot(&u, &pa);
    let mut lambdas = vec![Rational::one(); state.crosspolytope.vertices().len()];
    lambdas[a] = &c + Rational::one();
    state.ray(RayScaling::new(lambdas)?, log)?;
    state.completed_axes.push(Axis { direction: u, offset: (&c + rat(1, 2)) * &upa });
    // (3) origin between H_i and the new p_a
    state.translate(&rational::scale(&pa, &(&c + rat(7, 10))), log)?;
    // (4) flatten the other vertices onto H_i
    let s = flatten_onto_hyperplane(state, i)?;
    state.ray(s, log)?;
    check_persistence(state, i)
}

/// After iteration `i`: every diagonal `l_j`, `j != k`, lies on `H_k` for all
/// `k <= i`, and the first `i+1` diagonals are pairwise orthogonal.
fn check_persistence(state: &IterationState, i: usize) -> Result<()> {
    for k in 0..=i {
        let h = &state.completed_axes[k];
        for j in 0..state.pairing.dim() {
            if j == k {
                continue;
            }
            let (a, b) = state.diagonal(j);
            for v in [a, b] {
                if rational::dot(&h.direction, state.vertex(v)) != h.offset {
                    return Err(Error::InternalAssertion(format!(
                        "after iteration {i}: vertex {v} of diagonal {j} left H_{k}"
                    )));
                }
            }
        }
        for j in 0..k {
            if !rational::dot(&state.direction(j), &state.direction(k)).is_zero() {
                return Err(Error::InternalAssertion(format!("after iteration {i}: diagonals {j} and {k} not orthogonal")));
            }
        }
    }
    Ok(())
}

fn check_pairing(p: &Polytope, pairing: &OppositePairing) -> Result<()> {
    let found = crosspolytope_pairing(p.incidence()).ok_or(Error::NotACrosspolytope)?;
    let norm = |v: &[(usize, usize)]| {
        let mut v: Vec<(usize, usize)> = v.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort();
        v
    };
    if norm(&found.pairs) != norm(&pairing.pairs) {
        return Err(Error::Input("pairing does not match the antipodal vertices".into()));
    }
    Ok(())
}

/// The 4d steps of the iteration on a crosspolytope with the origin inside.
pub fn normalize_crosspolytope(x: &Polytope, pairing: &OppositePairing) -> Result<(TransformLog, IterationState)> {
    check_pairing(x, pairing)?;
    if !x.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let d = x.dim();
    let mut log = TransformLog::start(Space::Polar, 4 * d, x.clone());
    let mut state = IterationState { crosspolytope: x.clone(), pairing: pairing.clone(), completed_axes: Vec::new() };
    for i in 0..d {
        run_iteration(&mut state, &mut log, i)?;
    }
    Ok((log, state))
}

/// Frame change `x -> M (x - z)` with rows `u_k / <u_k, u_k>` followed by
/// the ray scaling to `conv(+-e_k)`.
pub fn standardize_tail(p: &Polytope, pairing: &OppositePairing) -> Result<TransformLog> {
    let d = p.dim();
    let cert = check_orthogonal_concurrent(p.vertices(), &pairing.pairs)?;
    let z = cert.witness.point.clone().expect("concurrency witness has a point");
    let rows: Vec<Point> = pairing
        .pairs
        .iter()
        .map(|&(a, b)| {
            let u = rational::sub(&p.vertices()[a], &p.vertices()[b]);
            let uu = rational::dot(&u, &u);
            rational::scale(&u, &(Rational::one() / uu))
        })
        .collect();
    let m = Matrix::from_rows(rows);
    let frame = ProjectiveMap::affine(&m, &rational::neg(&m.mul_vec(&z)))?;
    let mut log = TransformLog::start(Space::Polar, 2, p.clone());
    log.apply_and_push(Step::Projective { map: frame })?;
    let framed = log.final_polytope().clone();
    let mut lambdas = vec![Rational::one(); 2 * d];
    for (k, &(a, b)) in pairing.pairs.iter().enumerate() {
        lambdas[a] = Rational::one() / &framed.vertices()[a][k];
        lambdas[b] = -Rational::one() / &framed.vertices()[b][k];
    }
    log.apply_and_push(Step::Ray { scaling: RayScaling::new(lambdas)? })?;
    let fin = log.final_polytope();
    for (k, &(a, b)) in pairing.pairs.iter().enumerate() {
        let e = rational::unit(d, k);
        if fin.vertices()[a] != e || fin.vertices()[b] != rational::neg(&e) {
            return Err(Error::InternalAssertion(format!("tail did not reach the standard frame on axis {k}")));
        }
    }
    Ok(log)
}

fn cube_pairing(q: &Polytope) -> Result<OppositePairing> {
    cube_structure(q.incidence()).map(|(p, _)| p).ok_or(Error::NotACube)
}

/// `q` moved so the origin is interior, and the shift used.
fn centred(q: &Polytope) -> Result<(Polytope, Option<Point>)> {
    if q.origin_interior() {
        Ok((q.clone(), None))
    } else {
        let c = q.centroid();
        Ok((q.translated(&rational::neg(&c))?, Some(c)))
    }
}

/// Converts polar steps into the corresponding primal steps acting on `q`.
/// `pre` is a shift applied to `q` before the polar steps, `post` one applied
/// after; both are folded into the adjacent projective step when there is
/// one. When `polar_states` is given, every primal state is checked against
/// the polar of the matching polar state.
/// Whether `x` is the polar of `p`, vertex `j` of `x` matching facet `j`.
fn is_polar_of(x: &Polytope, p: &Polytope) -> bool {
    let facets = p.facets();
    facets.len() == x.vertices().len()
        && facets.iter().zip(x.vertices()).all(|(h, v)| {
            h.offset.is_positive() && rational::scale(&h.normal, &(Rational::one() / &h.offset)) == *v
        })
        && x.incidence().transpose() == *p.incidence()
}

fn to_primal(
    q: &Polytope,
    pre: Option<&Point>,
    post: Option<&Point>,
    polar_steps: &[Step],
    polar_states: Option<&[Polytope]>,
    bound: usize,
) -> Result<TransformLog> {
    let mut log = TransformLog::start(Space::Primal, bound, q.clone());
    let mut pending_pre = pre.map(|c| ProjectiveMap::translation(&rational::neg(c)));
    if pending_pre.is_some() && !matches!(polar_steps.first(), Some(Step::Projective { .. })) {
        log.apply_and_push(Step::Projective { map: pending_pre.take().unwrap() })?;
    }
    let n = polar_steps.len();
    for (i, step) in polar_steps.iter().enumerate() {
        let primal = match step {
            Step::Projective { map } => {
                let mut phi = primal_of_polar(map);
                if let Some(t) = pending_pre.take() {
                    phi = phi.compose(&t);
                }
                if i + 1 == n {
                    if let Some(c) = post {
                        phi = ProjectiveMap::translation(c).compose(&phi);
                    }
                }
                Step::Projective { map: phi }
            }
            Step::Ray { scaling } => Step::Normal { transform: normal_of_ray(log.final_polytope(), scaling) },
            Step::Normal { .. } => return Err(Error::InternalAssertion("normal step in a polar log".into())),
        };
        log.apply_and_push(primal)?;
        if let Some(states) = polar_states {
            if !is_polar_of(&states[i + 1], log.final_polytope()) {
                return Err(Error::InternalAssertion(format!("primal step {i} disagrees with the polar step")));
            }
        }
    }
    if let Some(c) = post {
        if !matches!(polar_steps.last(), Some(Step::Projective { .. })) {
            log.apply_and_push(Step::Projective { map: ProjectiveMap::translation(c) })?;
        }
    }
    Ok(log)
}

/// Polar-side normalisation of a cube: the 4d iteration steps and the
/// 2-step tail, on the polar of `q` (moved to its centroid first when the
/// origin is not interior).
pub fn normalize_cube_polar(q: &Polytope) -> Result<(TransformLog, Option<Point>)> {
    let pairing = cube_pairing(q)?;
    let (q0, pre) = centred(q)?;
    let x = polar(&q0)?;
    let (mut log, state) = normalize_crosspolytope(&x, &pairing)?;
    let tail = standardize_tail(&state.crosspolytope, &pairing)?;
    log.extend(tail);
    log.bound = 4 * q.dim() + 2;
    Ok((log, pre))
}

/// Steps taking `q` to the standard cube `[-1, 1]^d`.
pub fn normalize_cube(q: &Polytope) -> Result<TransformLog> {
    let (plog, pre) = normalize_cube_polar(q)?;
    let steps: Vec<Step> = plog.steps().cloned().collect();
    let log = to_primal(q, pre.as_ref(), None, &steps, Some(&plog.snapshots), 4 * q.dim() + 2)?;
    let fin = log.final_polytope();
    if fin.canonical_rows() != standard_cube(q.dim()).canonical_rows() {
        return Err(Error::InternalAssertion("normalisation did not reach the standard cube".into()));
    }
    log.check_bound()?;
    Ok(log)
}

pub fn standard_cube(d: usize) -> Polytope {
    let rows: Vec<_> = (0..d)
        .flat_map(|k| {
            let e = rational::unit(d, k);
            [
                crate::geometry::polytope::Halfspace::new(e.clone(), Rational::one()),
                crate::geometry::polytope::Halfspace::new(rational::neg(&e), Rational::one()),
            ]
        })
        .collect();
    Polytope::from_halfspaces(&rows).expect("standard cube")
}

pub fn standard_crosspolytope(d: usize) -> Polytope {
    polar(&standard_cube(d)).expect("standard cube contains the origin")
}

/// Merges adjacent steps of the same kind and drops identities.
pub fn simplify_polar_steps(steps: Vec<Step>) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(steps.len());
    for s in steps {
        let s = match (out.last(), &s) {
            (Some(Step::Projective { map: top }), Step::Projective { map }) => {
                let merged = map.compose(top);
                out.pop();
                Step::Projective { map: merged }
            }
            (Some(Step::Ray { scaling: top }), Step::Ray { scaling }) => {
                let merged = scaling.after(top);
                out.pop();
                Step::Ray { scaling: merged }
            }
            _ => s,
        };
        let identity = match &s {
            Step::Projective { map } => map.is_identity(),
            Step::Ray { scaling } => scaling.is_identity(),
            Step::Normal { .. } => false,
        };
        if !identity {
            out.push(s);
        }
    }
    out
}

/// Steps taking `q` onto `q2`, at most `8d - 1`.
///
/// Both polars are run through the 4d iteration steps. After the last
/// flattening both are orthogonal-concurrent crosspolytopes `W`, `W'`; a
/// linear map `L` and a ray scaling `N` take `W` to `W'`. Writing `S` for
/// the steps of `q` and `S'` for those of `q2`, the sequence is
/// `S[..4d-2]`, `L S[4d-2]`, one merged ray step, then `S'` inverted.
pub fn relate_cubes(q: &Polytope, q2: &Polytope) -> Result<TransformLog> {
    let d = q.dim();
    if q2.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: q2.dim() });
    }
    let pairing = cube_pairing(q)?;
    let pairing2 = cube_pairing(q2)?;
    let (q0, pre) = centred(q)?;
    let (q20, pre2) = centred(q2)?;
    let (log1, st1) = normalize_crosspolytope(&polar(&q0)?, &pairing)?;
    let (log2, st2) = normalize_crosspolytope(&polar(&q20)?, &pairing2)?;
    let s1: Vec<Step> = log1.steps().cloned().collect();
    let s2: Vec<Step> = log2.steps().cloned().collect();

    // sigma: polar vertex of q -> polar vertex of q2
    let n = 2 * d;
    let mut sigma = vec![0usize; n];
    for (&(a, b), &(a2, b2)) in pairing.pairs.iter().zip(&pairing2.pairs) {
        sigma[a] = a2;
        sigma[b] = b2;
    }
    let (l, nscale) = bridge(&st1, &st2)?;

    let mut steps: Vec<Step> = s1[..4 * d - 2].to_vec();
    let Step::Projective { map: t3 } = &s1[4 * d - 2] else {
        return Err(Error::InternalAssertion("expected a projective step".into()));
    };
    steps.push(Step::Projective { map: l.compose(t3) });
    let (Step::Ray { scaling: r1 }, Step::Ray { scaling: r2 }) = (&s1[4 * d - 1], &s2[4 * d - 1]) else {
        return Err(Error::InternalAssertion("expected a ray step".into()));
    };
    let merged: Vec<Rational> = (0..n)
        .map(|j| &r1.lambdas[j] * &nscale[j] / &r2.lambdas[sigma[j]])
        .collect();
    steps.push(Step::Ray { scaling: RayScaling::new(merged)? });
    for s in s2[..4 * d - 1].iter().rev() {
        steps.push(match s {
            Step::Projective { map } => Step::Projective { map: map.inverse() },
            Step::Ray { scaling } => Step::Ray {
                scaling: RayScaling { lambdas: (0..n).map(|j| Rational::one() / &scaling.lambdas[sigma[j]]).collect() },
            },
            Step::Normal { .. } => unreachable!("polar logs hold no normal steps"),
        });
    }
    let steps = simplify_polar_steps(steps);
    let log = to_primal(q, pre.as_ref(), pre2.as_ref(), &steps, None, 8 * d - 1)?;
    if log.final_polytope().canonical_rows() != q2.canonical_rows() {
        return Err(Error::InternalAssertion("related log does not end at the target cube".into()));
    }
    log.check_bound()?;
    Ok(log)
}

/// Linear `L` and per-vertex scalars `N` with `N_j L(w_j) = w'_sigma(j)`.
/// With `A` the matrix of the first vertices `a_j` of the pairs and
/// `b_k = sum_j beta_kj a_j`, `L = A' diag(mu) A^-1` and `N = 1/mu` on the
/// `a_j`, `1/nu_k` on the `b_k`, where `mu_j beta_kj = nu_k beta'_kj`.
fn bridge(st1: &IterationState, st2: &IterationState) -> Result<(ProjectiveMap, Vec<Rational>)> {
    let d = st1.pairing.dim();
    let cols = |st: &IterationState, second: bool| -> Matrix {
        let pts: Vec<Point> = st
            .pairing
            .pairs
            .iter()
            .map(|&(a, b)| st.vertex(if second { b } else { a }).clone())
            .collect();
        Matrix::from_rows(pts).transpose()
    };
    let (a1, a2) = (cols(st1, false), cols(st2, false));
    let (b1, b2) = (cols(st1, true), cols(st2, true));
    let a1_inv = a1.inverse().map_err(|_| Error::InternalAssertion("first vertices are dependent".into()))?;
    let a2_inv = a2.inverse().map_err(|_| Error::InternalAssertion("first vertices are dependent".into()))?;
    // beta[j][k]: coordinate j of b_k
    let beta1 = a1_inv.mul(&b1);
    let beta2 = a2_inv.mul(&b2);
    // unknowns mu_0..mu_{d-1}, nu_0..nu_{d-1}
    let mut rows = Vec::with_capacity(d * d);
    for k in 0..d {
        for j in 0..d {
            let mut r = vec![Rational::zero(); 2 * d];
            r[j] = beta1.get(j, k).clone();
            r[d + k] = -beta2.get(j, k).clone();
            rows.push(r);
        }
    }
    let ns = Matrix::from_rows(rows).null_space();
    if ns.len() != 1 {
        return Err(Error::InternalAssertion(format!("bridge system has a {}-dimensional solution space", ns.len())));
    }
    let mut v = ns.into_iter().next().unwrap();
    if v[0].is_negative() {
        v = rational::neg(&v);
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Err(Error::InternalAssertion("bridge scalars are not all positive".into()));
    }
    let v = rational::scale(&v, &(Rational::one() / &v[0]));
    let mut diag = Matrix::zeros(d, d);
    for j in 0..d {
        diag.set(j, j, v[j].clone());
    }
    let l = a2.mul(&diag).mul(&a1_inv);
    let map = ProjectiveMap::affine(&l, &rational::zero_point(d))?;
    let mut nscale = vec![Rational::zero(); 2 * d];
    for (k, &(a, b)) in st1.pairing.pairs.iter().enumerate() {
        nscale[a] = Rational::one() / &v[k];
        nscale[b] = Rational::one() / &v[d + k];
    }
    Ok((map, nscale))
}

pub const CONTINUITY_CONSTANT: f64 = 1.0e4;

/// Outcome of the perturbation probe: drift of the tail frame per unit of
/// perturbation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    #[serde(with = "rational::serde_rat")]
    pub epsilon: Rational,
    pub max_drift: f64,
    pub ratio: f64,
    pub constant: f64,
    pub within_bound: bool,
}

fn tail_frame(q: &Polytope) -> Result<Vec<Rational>> {
    let (log, _) = normalize_cube_polar(q)?;
    let Step::Projective { map } = &log.entries[4 * q.dim()].step else {
        return Err(Error::InternalAssertion("tail does not start with a projective step".into()));
    };
    let alpha = map.alpha();
    Ok(map.block().rows().iter().flatten().map(|x| x / &alpha).collect())
}

/// Perturbs the facet offsets of `q` by a deterministic pattern of size
/// `epsilon` and compares the tail frames of the two normalisations. The
/// result is advisory: a large ratio is flagged, not treated as an error.
pub fn continuity_probe(q: &Polytope, epsilon: &Rational) -> Result<ContinuityReport> {
    let (q0, _) = centred(q)?;
    let x = polar(&q0)?;
    let vertices: Vec<Point> = x
        .vertices()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            p.iter()
                .enumerate()
                .map(|(k, c)| c + epsilon * rat(((3 * j + 5 * k) % 7) as i64 - 3, 3))
                .collect()
        })
        .collect();
    let xp = Polytope::from_facet_sets(vertices, x.facet_sets().to_vec())?;
    let qp = polar(&xp)?;
    let f0 = tail_frame(&q0)?;
    let f1 = tail_frame(&qp)?;
    let max_drift = f0
        .iter()
        .zip(&f1)
        .map(|(a, b)| rational::to_f64(&(a - b)).abs())
        .fold(0.0, f64::max);
    let ratio = max_drift / rational::to_f64(epsilon);
    Ok(ContinuityReport {
        epsilon: epsilon.clone(),
        max_drift,
        ratio,
        constant: CONTINUITY_CONSTANT,
        within_bound: ratio <= CONTINUITY_CONSTANT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Halfspace;
    use crate::rational::{int, ipoint, point};

    fn octahedron() -> Polytope {
        let pts = vec![
            point(&[(1, 1), (0, 1), (1, 1)]),
            point(&[(-1, 1), (0, 1), (1, 2)]),
            ipoint(&[0, 1, 0]),
            point(&[(0, 1), (-1, 1), (3, 4)]),
            ipoint(&[0, 0, 2]),
            ipoint(&[0, 0, -1]),
        ];
        Polytope::from_points(&pts).unwrap()
    }

    fn pairing_of(p: &Polytope) -> OppositePairing {
        crosspolytope_pairing(p.incidence()).unwrap()
    }

    #[test]
    fn standard_crosspolytope_runs_canonically() {
        for d in 2..=4 {
            let x = standard_crosspolytope(d);
            let pairing = pairing_of(&x);
            let (log, state) = normalize_crosspolytope(&x, &pairing).unwrap();
            assert_eq!(log.len(), 4 * d);
            assert!(log.steps().step_by(2).all(|s| s.tag() == "projective"));
            assert!(log.steps().skip(1).step_by(2).all(|s| s.tag() == "ray"));
            check_orthogonal_concurrent(state.crosspolytope.vertices(), &pairing.pairs).unwrap();
            let tail = standardize_tail(&state.crosspolytope, &pairing).unwrap();
            assert_eq!(tail.final_polytope().canonical_rows(), x.canonical_rows());
        }
    }

    #[test]
    fn threshold_on_standard_crosspolytope() {
        let x = standard_crosspolytope(3);
        let state = IterationState { crosspolytope: x.clone(), pairing: pairing_of(&x), completed_axes: vec![] };
        assert_eq!(separation_threshold(&state, 0).unwrap(), int(1));
    }

    #[test]
    fn octahedron_walkthrough() {
        let x = octahedron();
        // the walkthrough axis joins (0,0,-1) and (0,0,2)
        let lo = x.vertices().iter().position(|v| v == &ipoint(&[0, 0, -1])).unwrap();
        let hi = x.vertices().iter().position(|v| v == &ipoint(&[0, 0, 2])).unwrap();
        let mut pairs: Vec<(usize, usize)> = pairing_of(&x)
            .pairs
            .into_iter()
            .filter(|&(a, b)| !(a == lo || b == lo))
            .collect();
        pairs.insert(0, (lo, hi));
        let pairing = OppositePairing::new(pairs).unwrap();
        let mut state = IterationState { crosspolytope: x.clone(), pairing, completed_axes: vec![] };
        let mut log = TransformLog::start(Space::Polar, 12, x.clone());
        let mid = rational::midpoint(state.vertex(lo), state.vertex(hi));
        state.translate(&mid, &mut log).unwrap();
        let c = separation_threshold(&state, 0).unwrap();
        assert_eq!(c, int(1));
        assert!(c < rat(5, 3));
        state.translate(&rational::neg(&mid), &mut log).unwrap();
        let mut state = IterationState { completed_axes: vec![], ..state };
        let mut log = TransformLog::start(Space::Polar, 12, state.crosspolytope.clone());
        run_iteration(&mut state, &mut log, 0).unwrap();
        let h = &state.completed_axes[0];
        for j in 0..6 {
            if j != lo && j != hi {
                assert_eq!(rational::dot(&h.direction, state.vertex(j)), h.offset);
            }
        }
    }

    #[test]
    fn cube_normalisation_reaches_standard() {
        let rows = vec![
            Halfspace::new(ipoint(&[1, 0, 0]), int(2)),
            Halfspace::new(ipoint(&[-1, 0, 0]), int(1)),
            Halfspace::new(ipoint(&[0, 1, 0]), int(1)),
            Halfspace::new(ipoint(&[0, -1, 0]), int(1)),
            Halfspace::new(ipoint(&[0, 0, 1]), int(1)),
            Halfspace::new(ipoint(&[0, 0, -1]), int(1)),
        ];
        let q = Polytope::from_halfspaces(&rows).unwrap();
        let log = normalize_cube(&q).unwrap();
        assert_eq!(log.len(), 14);
        assert!(log.final_polytope().same_set(&standard_cube(3)));
        let again = log.replay(&q).unwrap();
        assert!(again.same_set(&standard_cube(3)));
        let shifted = q.translated(&ipoint(&[5, 0, 0])).unwrap();
        let log = normalize_cube(&shifted).unwrap();
        assert!(log.final_polytope().same_set(&standard_cube(3)));
    }

    #[test]
    fn relate_identical_cubes_collapses() {
        let q = standard_cube(3);
        let log = relate_cubes(&q, &q).unwrap();
        assert!(log.len() <= 1, "{}", log.len());
    }

    #[test]
    fn relate_box_and_cube() {
        let q = standard_cube(3);
        let b = Polytope::from_halfspaces(&[
            Halfspace::new(ipoint(&[1, 0, 0]), int(2)),
            Halfspace::new(ipoint(&[-1, 0, 0]), int(1)),
            Halfspace::new(ipoint(&[0, 1, 0]), int(1)),
            Halfspace::new(ipoint(&[0, -1, 0]), int(1)),
            Halfspace::new(ipoint(&[0, 0, 1]), int(1)),
            Halfspace::new(ipoint(&[0, 0, -1]), int(1)),
        ])
        .unwrap();
        let log = relate_cubes(&q, &b).unwrap();
        assert!(log.len() <= 23);
        assert!(log.replay(&q).unwrap().same_set(&b));
        let back = relate_cubes(&b, &q).unwrap();
        assert!(back.replay(&b).unwrap().same_set(&q));
    }

    #[test]
    fn continuity_on_standard_cube() {
        let r = continuity_probe(&standard_cube(3), &rat(1, 1_000_000)).unwrap();
        assert!(r.max_drift < 1e-3, "{r:?}");
    }
}
