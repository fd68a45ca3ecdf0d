//! Vertex enumeration of a bounded inequality system by basis enumeration.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::geometry::polytope::Halfspace;
use crate::linalg::Matrix;
use crate::rational::{self, Point, Rational};

/// All vertices of `{x : rows}` in lexicographic order. Fails with
/// [`Error::Unbounded`] when the recession cone is nontrivial and with
/// [`Error::Degenerate`] when the system is infeasible.
pub fn enumerate_vertices(rows: &[Halfspace], dim: usize) -> Result<Vec<Point>> {
    check_bounded(rows, dim)?;
    let mut found = BTreeSet::new();
    for basis in (0..rows.len()).combinations(dim) {
        let a = Matrix::from_rows(basis.iter().map(|&i| rows[i].normal.clone()).collect());
        let b: Vec<Rational> = basis.iter().map(|&i| rows[i].offset.clone()).collect();
        let Ok(x) = a.solve(&b) else {
            continue;
        };
        if found.contains(&x) {
            continue;
        }
        if rows.iter().all(|h| h.contains(&x)) {
            found.insert(x);
        }
    }
    if found.is_empty() {
        return Err(Error::Degenerate);
    }
    Ok(found.into_iter().collect())
}

/// The recession cone `{y : A y <= 0}` is `{0}` iff `A` has full column
/// rank and no extreme ray, where extreme rays are spanned by the kernels of
/// rank `d-1` row subsets.
fn check_bounded(rows: &[Halfspace], dim: usize) -> Result<()> {
    let a = Matrix::from_rows(rows.iter().map(|h| h.normal.clone()).collect());
    if a.rank() < dim {
        return Err(Error::Unbounded);
    }
    if dim == 1 {
        let pos = rows.iter().any(|h| h.normal[0].is_positive());
        let neg = rows.iter().any(|h| h.normal[0].is_negative());
        return if pos && neg { Ok(()) } else { Err(Error::Unbounded) };
    }
    for subset in (0..rows.len()).combinations(dim - 1) {
        let m = Matrix::from_rows(subset.iter().map(|&i| rows[i].normal.clone()).collect());
        let ns = m.null_space();
        if ns.len() != 1 {
            continue;
        }
        let y = &ns[0];
        for dir in [y.clone(), rational::neg(y)] {
            if rows.iter().all(|h| !rational::dot(&h.normal, &dir).is_positive()) {
                return Err(Error::Unbounded);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ipoint};

    #[test]
    fn triangle_vertices() {
        let rows = vec![
            Halfspace::new(ipoint(&[-1, 0]), int(0)),
            Halfspace::new(ipoint(&[0, -1]), int(0)),
            Halfspace::new(ipoint(&[1, 1]), int(1)),
        ];
        let v = enumerate_vertices(&rows, 2).unwrap();
        assert_eq!(v, vec![ipoint(&[0, 0]), ipoint(&[0, 1]), ipoint(&[1, 0])]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let rows = vec![
            Halfspace::new(ipoint(&[1]), int(-1)),
            Halfspace::new(ipoint(&[-1]), int(-1)),
        ];
        assert_eq!(enumerate_vertices(&rows, 1).unwrap_err(), Error::Degenerate);
        let half = vec![Halfspace::new(ipoint(&[1, 0]), int(1)), Halfspace::new(ipoint(&[0, 1]), int(1))];
        assert_eq!(enumerate_vertices(&half, 2).unwrap_err(), Error::Unbounded);
    }
}
