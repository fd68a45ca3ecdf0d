//! Vertex-facet incidence and the combinatorial tests built on it.

use std::collections::HashSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::VertexSet;
use crate::enumerative::FVector;
use crate::error::{Error, Result};

/// Facet-major incidence: `facets[j]` is the set of vertices on facet `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    dim: usize,
    n_vertices: usize,
    facets: Vec<VertexSet>,
}

impl IncidenceStructure {
    pub fn new(dim: usize, n_vertices: usize, facets: Vec<VertexSet>) -> Self {
        IncidenceStructure { dim, n_vertices, facets }
    }

    pub fn from_lists(dim: usize, n_vertices: usize, facets: &[Vec<usize>]) -> Self {
        let sets = facets
            .iter()
            .map(|f| VertexSet::from_indices(n_vertices, f.iter().copied()))
            .collect();
        IncidenceStructure::new(dim, n_vertices, sets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facet_sets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn get(&self, vertex: usize, facet: usize) -> bool {
        self.facets[facet].contains(vertex)
    }

    pub fn facets_of_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len()).filter(|&j| self.facets[j].contains(v)).collect()
    }

    /// Vertex-by-facet boolean matrix.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n_vertices)
            .map(|v| self.facets.iter().map(|f| f.contains(v)).collect())
            .collect()
    }

    /// Swaps the roles of vertices and facets, giving the incidence of the
    /// polar.
    pub fn transpose(&self) -> IncidenceStructure {
        let nf = self.facets.len();
        let sets = (0..self.n_vertices)
            .map(|v| VertexSet::from_indices(nf, (0..nf).filter(|&j| self.facets[j].contains(v))))
            .collect();
        IncidenceStructure::new(self.dim, nf, sets)
    }

    /// Same incidence up to a permutation of facets.
    pub fn same_up_to_facet_order(&self, other: &IncidenceStructure) -> bool {
        let mut a = self.facets.clone();
        let mut b = other.facets.clone();
        a.sort();
        b.sort();
        self.n_vertices == other.n_vertices && a == b
    }

    /// The facets of facet `j`, as vertex sets over the whole vertex range:
    /// maximal nonempty intersections with the other facets.
    pub fn ridges_of(&self, j: usize) -> Vec<VertexSet> {
        let f = &self.facets[j];
        let mut cands: Vec<VertexSet> = Vec::new();
        for (k, g) in self.facets.iter().enumerate() {
            if k == j {
                continue;
            }
            let r = f.intersection(g);
            if !r.is_empty() && !cands.contains(&r) {
                cands.push(r);
            }
        }
        let maximal: Vec<VertexSet> = cands
            .iter()
            .filter(|r| !cands.iter().any(|s| s != *r && r.is_subset(s)))
            .cloned()
            .collect();
        maximal
    }

    /// Incidence of facet `j` as a `(d-1)`-polytope, with vertices
    /// renumbered in increasing order of their global index.
    pub fn facet_incidence(&self, j: usize) -> (IncidenceStructure, Vec<usize>) {
        let verts = self.facets[j].to_vec();
        let local = |g: usize| verts.binary_search(&g).unwrap();
        let ridges = self
            .ridges_of(j)
            .iter()
            .map(|r| VertexSet::from_indices(verts.len(), r.iter().map(local)))
            .collect();
        (IncidenceStructure::new(self.dim - 1, verts.len(), ridges), verts)
    }
}

#[derive(Serialize, Deserialize)]
struct IncidenceDoc {
    dim: usize,
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

impl Serialize for IncidenceStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IncidenceDoc {
            dim: self.dim,
            vertices: self.n_vertices,
            facets: self.facets.iter().map(VertexSet::to_vec).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IncidenceStructure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = IncidenceDoc::deserialize(d)?;
        if let Some(bad) = doc.facets.iter().flatten().find(|&&v| v >= doc.vertices) {
            return Err(serde::de::Error::custom(format!("vertex index {bad} out of range")));
        }
        Ok(IncidenceStructure::from_lists(doc.dim, doc.vertices, &doc.facets))
    }
}

/// `d` disjoint index pairs covering `0..2d`: opposite facets of a cube or
/// antipodal vertices of a crosspolytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OppositePairing {
    pub pairs: Vec<(usize, usize)>,
}

impl OppositePairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let n = 2 * pairs.len();
        let mut seen = vec![false; n];
        for &(a, b) in &pairs {
            for i in [a, b] {
                if i >= n || seen[i] {
                    return Err(Error::Input(format!("pairing does not partition 0..{n}")));
                }
                seen[i] = true;
            }
        }
        Ok(OppositePairing { pairs })
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Partner of index `i`.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| match i {
            _ if i == a => Some(b),
            _ if i == b => Some(a),
            _ => None,
        })
    }
}

/// Facet pairing and per-vertex sign vectors of a combinatorial cube, or
/// `None`. Pairs are listed by their smaller facet index; `signs[v][k]` is
/// true when vertex `v` lies on the second facet of pair `k`.
pub fn cube_structure(inc: &IncidenceStructure) -> Option<(OppositePairing, Vec<Vec<bool>>)> {
    let d = inc.dim;
    let f = inc.facets.len();
    if d == 0 || f != 2 * d || d >= usize::BITS as usize - 1 || inc.n_vertices != 1 << d {
        return None;
    }
    let mut pairs = Vec::with_capacity(d);
    let mut used = vec![false; f];
    for j in 0..f {
        let opp: Vec<usize> = (0..f)
            .filter(|&k| k != j && inc.facets[j].is_disjoint(&inc.facets[k]))
            .collect();
        if opp.len() != 1 {
            return None;
        }
        if !used[j] {
            let k = opp[0];
            if used[k] {
                return None;
            }
            used[j] = true;
            used[k] = true;
            pairs.push((j, k));
        }
    }
    let mut seen = HashSet::with_capacity(inc.n_vertices);
    let mut signs = Vec::with_capacity(inc.n_vertices);
    for v in 0..inc.n_vertices {
        let mut s = Vec::with_capacity(d);
        for &(a, b) in &pairs {
            match (inc.facets[a].contains(v), inc.facets[b].contains(v)) {
                (true, false) => s.push(false),
                (false, true) => s.push(true),
                _ => return None,
            }
        }
        if !seen.insert(s.clone()) {
            return None;
        }
        signs.push(s);
    }
    // each vertex is on exactly d facets, the ones its sign vector names
    if (0..inc.n_vertices).any(|v| inc.facets.iter().filter(|s| s.contains(v)).count() != d) {
        return None;
    }
    Some((OppositePairing { pairs }, signs))
}

pub fn is_combinatorial_cube(inc: &IncidenceStructure) -> bool {
    cube_structure(inc).is_some()
}

/// Antipodal vertex pairing of a combinatorial crosspolytope.
pub fn crosspolytope_pairing(inc: &IncidenceStructure) -> Option<OppositePairing> {
    cube_structure(&inc.transpose()).map(|(p, _)| p)
}

pub fn is_combinatorial_crosspolytope(inc: &IncidenceStructure) -> bool {
    crosspolytope_pairing(inc).is_some()
}

/// Every facet is a combinatorial `(d-1)`-cube.
pub fn is_cubical(inc: &IncidenceStructure) -> bool {
    if inc.dim <= 1 {
        return inc.dim == 1 && inc.n_vertices == 2;
    }
    (0..inc.facets.len()).all(|j| is_combinatorial_cube(&inc.facet_incidence(j).0))
}

/// Face numbers `f_0..f_{d-1}` from the intersection closure of the facets.
/// Dimensions come from chain lengths in the resulting poset.
pub fn f_vector_of(inc: &IncidenceStructure) -> Result<FVector> {
    let d = inc.dim;
    let mut faces: Vec<VertexSet> = Vec::new();
    let mut seen: HashSet<VertexSet> = HashSet::new();
    for f in &inc.facets {
        if f.is_empty() {
            return Err(Error::DegenerateIncidence("empty facet".into()));
        }
        if seen.insert(f.clone()) {
            faces.push(f.clone());
        }
    }
    let mut i = 0;
    while i < faces.len() {
        for f in &inc.facets {
            let g = faces[i].intersection(f);
            if !g.is_empty() && seen.insert(g.clone()) {
                faces.push(g);
            }
        }
        i += 1;
    }
    faces.sort_by_key(VertexSet::len);
    let mut dims = vec![0usize; faces.len()];
    for a in 0..faces.len() {
        let mut best: Option<usize> = None;
        for b in 0..a {
            if faces[b].len() < faces[a].len() && faces[b].is_subset(&faces[a]) {
                best = Some(best.map_or(dims[b], |x: usize| x.max(dims[b])));
            }
        }
        dims[a] = best.map_or(0, |x| x + 1);
    }
    let mut counts = vec![0u64; d];
    for (face, &k) in faces.iter().zip(&dims) {
        if k >= d || (k == 0 && face.len() != 1) {
            return Err(Error::DegenerateIncidence(format!("face {face:?} has rank {k}")));
        }
        counts[k] += 1;
    }
    if counts[0] != inc.n_vertices as u64 {
        return Err(Error::DegenerateIncidence(format!(
            "{} vertices are not intersections of facets",
            inc.n_vertices as u64 - counts[0].min(inc.n_vertices as u64)
        )));
    }
    if d >= 1 && counts[d - 1] != inc.facets.len() as u64 {
        return Err(Error::DegenerateIncidence("facet of low rank".into()));
    }
    FVector::new(d, counts)
}
