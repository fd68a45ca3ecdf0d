//! Polar duality for polytopes with the origin in the interior.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::geometry::polytope::{HPolytope, Halfspace, Polytope, VPolytope};
use crate::rational::{self, Point};

/// `conv(r_i / b_i)` for the rows `r_i . x <= b_i` of `p`.
pub fn polar_dual(p: &HPolytope) -> Result<VPolytope> {
    if p.rows.iter().any(|h| !h.offset.is_positive()) {
        return Err(Error::OriginNotInterior);
    }
    let full = Polytope::from_halfspaces(&p.rows)?;
    Ok(polar(&full)?.vpolytope())
}

/// Rows `v_i . y <= 1`, one per vertex of `p`.
pub fn polar_dual_v(p: &VPolytope) -> Result<HPolytope> {
    let full = Polytope::from_points(&p.vertices)?;
    if full.vertices().len() != p.vertices.len() {
        return Err(Error::Input("listed points are not all vertices".into()));
    }
    if !full.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(HPolytope {
        dim: p.dim,
        rows: p
            .vertices
            .iter()
            .map(|v| Halfspace::new(v.clone(), rational::Rational::one()))
            .collect(),
    })
}

/// Polar of a paired polytope: vertex `j` of the result is facet `j` of
/// `p`, facet `i` of the result is vertex `i` of `p`.
pub fn polar(p: &Polytope) -> Result<Polytope> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let vertices: Vec<Point> = p
        .facets()
        .iter()
        .map(|h| rational::scale(&h.normal, &(rational::Rational::one() / &h.offset)))
        .collect();
    let sets = p.incidence().transpose().facet_sets().to_vec();
    Polytope::from_facet_sets(vertices, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ipoint, point};

    fn rows_2d(box_: &[(i64, i64)]) -> Vec<Halfspace> {
        box_.iter()
            .enumerate()
            .flat_map(|(k, &(lo, hi))| {
                [
                    Halfspace::new(rational::unit(2, k), int(hi)),
                    Halfspace::new(rational::neg(&rational::unit(2, k)), int(-lo)),
                ]
            })
            .collect()
    }

    #[test]
    fn box_polar_by_hand() {
        let h = HPolytope { dim: 2, rows: rows_2d(&[(-1, 2), (-1, 1)]) };
        let v = polar_dual(&h).unwrap();
        let expect = vec![point(&[(1, 2), (0, 1)]), ipoint(&[-1, 0]), ipoint(&[0, 1]), ipoint(&[0, -1])];
        assert_eq!(v.vertices, expect);
    }

    #[test]
    fn origin_outside_is_rejected() {
        let h = HPolytope { dim: 2, rows: rows_2d(&[(1, 2), (-1, 1)]) };
        assert_eq!(polar_dual(&h).unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn cross_polytope_polar_rows() {
        let v = VPolytope {
            dim: 2,
            vertices: vec![ipoint(&[1, 0]), ipoint(&[-1, 0]), ipoint(&[0, 1]), ipoint(&[0, -1])],
        };
        let h = polar_dual_v(&v).unwrap();
        assert_eq!(h.rows.len(), 4);
        let back = polar_dual(&h).unwrap();
        assert_eq!(back.vertices, v.vertices);
    }
}
