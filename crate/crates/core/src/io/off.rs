use std::collections::BTreeSet;
use std::fmt::Write;

use num_traits::{One, Signed};

use crate::bitset::VertexSet;
use crate::constructor::facet_chart;
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::linalg;
use crate::rational::{self, Point, Rational};

/// The 2-faces of `p`, each as a cyclic vertex sequence following the edges.
/// For `d = 3` these are the facets, oriented counter-clockwise seen from
/// outside.
pub fn two_faces(p: &Polytope) -> Result<Vec<Vec<usize>>> {
    let d = p.dim();
    let n = p.vertices().len();
    let sets = p.facet_sets();
    let candidates: Vec<VertexSet> = match d {
        2 => vec![VertexSet::full(n)],
        3 => sets.to_vec(),
        _ => {
            let mut all = BTreeSet::new();
            let mut faces = sets.to_vec();
            for _ in 3..d {
                let mut next = BTreeSet::new();
                for (i, f) in faces.iter().enumerate() {
                    for g in &faces[i + 1..] {
                        let r = f.intersection(g);
                        if r.len() >= 3 && face_dim(p, &r) + 1 == face_dim(p, f) {
                            next.insert(r);
                        }
                    }
                }
                faces = next.into_iter().collect();
            }
            all.extend(faces);
            all.into_iter().collect()
        }
    };
    let mut out = Vec::with_capacity(candidates.len());
    for (fi, face) in candidates.iter().enumerate() {
        let verts: Vec<usize> = face.iter().collect();
        let mut cycle = vec![verts[0]];
        let mut prev = usize::MAX;
        while cycle.len() < verts.len() {
            let cur = *cycle.last().unwrap();
            let next = verts
                .iter()
                .copied()
                .find(|&w| w != cur && w != prev && !cycle.contains(&w) && is_edge(p, cur, w))
                .ok_or_else(|| Error::InternalAssertion(format!("2-face {fi} is not a cycle")))?;
            prev = cur;
            cycle.push(next);
        }
        if d == 3 && !outward(p, fi, &cycle) {
            cycle.reverse();
        }
        out.push(cycle);
    }
    Ok(out)
}

fn face_dim(p: &Polytope, s: &VertexSet) -> usize {
    let pts: Vec<&Point> = s.iter().map(|i| &p.vertices()[i]).collect();
    linalg::affine_rank(&pts) - 1
}

/// `{u, w}` is an edge iff the facets containing both meet only in them.
fn is_edge(p: &Polytope, u: usize, w: usize) -> bool {
    let n = p.vertices().len();
    let mut common = VertexSet::full(n);
    let mut any = false;
    for f in p.facet_sets() {
        if f.contains(u) && f.contains(w) {
            common = common.intersection(f);
            any = true;
        }
    }
    any && common.len() == 2
}

fn outward(p: &Polytope, facet: usize, cycle: &[usize]) -> bool {
    let v = |i: usize| &p.vertices()[cycle[i]];
    let a = rational::sub(v(1), v(0));
    let b = rational::sub(v(2), v(0));
    let cross = vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ];
    rational::dot(&cross, &p.facets()[facet].normal).is_positive()
}

/// Point just beyond facet `f` and beneath every other facet.
fn schlegel_eye(p: &Polytope, f: usize) -> Result<Point> {
    let c = p.centroid();
    let members: Vec<Point> = p.facet_sets()[f].iter().map(|i| p.vertices()[i].clone()).collect();
    let cf = rational::centroid(&members);
    let dir = rational::sub(&cf, &c);
    let mut t = Rational::one();
    for _ in 0..64 {
        let z = rational::add(&cf, &rational::scale(&dir, &t));
        let beyond = p.facets()[f].slack(&z).is_negative();
        let beneath = p.facets().iter().enumerate().all(|(i, h)| i == f || h.slack(&z).is_positive());
        if beyond && beneath {
            return Ok(z);
        }
        t /= Rational::from_integer(2.into());
    }
    Err(Error::InternalAssertion("no Schlegel projection point".into()))
}

/// OFF text with `digits` decimals. Dimensions 2 and 3 are written
/// directly (z = 0 for polygons). For `d = 4` the vertices are projected
/// from a point just beyond facet 0 onto that facet's hyperplane, written
/// in the facet's coordinate chart, and the 2-faces are listed.
pub fn export_off(p: &Polytope, digits: usize) -> Result<String> {
    let d = p.dim();
    let coords: Vec<Vec<Rational>> = match d {
        2 => p.vertices().iter().map(|v| vec![v[0].clone(), v[1].clone(), Rational::from_integer(0.into())]).collect(),
        3 => p.vertices().to_vec(),
        4 => {
            let h = &p.facets()[0];
            let z = schlegel_eye(p, 0)?;
            let (k, _) = facet_chart(h)?;
            p.vertices()
                .iter()
                .map(|v| {
                    let dir = rational::sub(v, &z);
                    let lambda = (&h.offset - rational::dot(&h.normal, &z)) / rational::dot(&h.normal, &dir);
                    let x = rational::add(&z, &rational::scale(&dir, &lambda));
                    x.into_iter().enumerate().filter(|&(j, _)| j != k).map(|(_, c)| c).collect()
                })
                .collect()
        }
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    let faces = two_faces(p)?;
    let edges = count_edges(p, &faces);
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(out, "{} {} {}", coords.len(), faces.len(), edges).unwrap();
    for c in &coords {
        let parts: Vec<String> = c.iter().map(|x| rational::to_decimal(x, digits)).collect();
        writeln!(out, "{}", parts.join(" ")).unwrap();
    }
    for f in &faces {
        let parts: Vec<String> = f.iter().map(usize::to_string).collect();
        writeln!(out, "{} {}", f.len(), parts.join(" ")).unwrap();
    }
    Ok(out)
}

fn count_edges(_p: &Polytope, faces: &[Vec<usize>]) -> usize {
    let mut edges = BTreeSet::new();
    for f in faces {
        for i in 0..f.len() {
            let (a, b) = (f[i], f[(i + 1) % f.len()]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges.len()
}
