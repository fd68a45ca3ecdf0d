//! Deterministic example polytopes, including seeded random cubes.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::polar::polar;
use crate::geometry::polytope::{Halfspace, Polytope};
use crate::linalg::Matrix;
use crate::normalizer;
use crate::projective::{apply_projective_polytope, normal_transform_polytope, NormalTransform, ProjectiveMap};
use crate::rational::{self, int, ipoint, point, Point, Rational};

pub use crate::normalizer::{standard_crosspolytope, standard_cube};

/// The octahedron of the walkthrough: a crosspolytope whose diagonals are
/// neither orthogonal nor concurrent.
pub fn octahedron() -> Polytope {
    let pts = vec![
        point(&[(1, 1), (0, 1), (1, 1)]),
        point(&[(-1, 1), (0, 1), (1, 2)]),
        ipoint(&[0, 1, 0]),
        point(&[(0, 1), (-1, 1), (3, 4)]),
        ipoint(&[0, 0, 2]),
        ipoint(&[0, 0, -1]),
    ];
    Polytope::from_points(&pts).expect("octahedron fixture")
}

pub fn kite() -> Polytope {
    Polytope::from_points(&[ipoint(&[2, 0]), ipoint(&[1, 1]), ipoint(&[-1, 0]), ipoint(&[1, -1])]).expect("kite")
}

/// Axis-parallel box `prod [-lo_k, hi_k]`.
pub fn axis_box(lo: &[Rational], hi: &[Rational]) -> Result<Polytope> {
    let d = lo.len();
    let rows: Vec<Halfspace> = (0..d)
        .flat_map(|k| {
            let e = rational::unit(d, k);
            [Halfspace::new(e.clone(), hi[k].clone()), Halfspace::new(rational::neg(&e), lo[k].clone())]
        })
        .collect();
    Polytope::from_halfspaces(&rows)
}

fn small(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(den))
}

fn in_range(rng: &mut ChaCha8Rng, lo_num: i64, hi_num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(lo_num..=hi_num)), BigInt::from(den))
}

/// A random combinatorial d-cube with the vertex centroid at the origin:
/// a box with offsets in `[1/2, 2]`, a small admissible projective map, a
/// small normal perturbation and a final translation.
pub fn random_cube(d: usize, seed: u64) -> Result<Polytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo: Vec<Rational> = (0..d).map(|_| in_range(&mut rng, 4, 16, 8)).collect();
    let hi: Vec<Rational> = (0..d).map(|_| in_range(&mut rng, 4, 16, 8)).collect();
    let boxed = axis_box(&lo, &hi)?;

    let a = loop {
        let rows: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { Rational::one() + small(&mut rng, 2, 8) } else { small(&mut rng, 2, 8) })
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows);
        if !num_traits::Zero::is_zero(&m.det()) {
            break m;
        }
    };
    let b: Point = (0..d).map(|_| small(&mut rng, 2, 8)).collect();
    let per = 4 * d as i64;
    let c: Point = (0..d).map(|_| small(&mut rng, 1, per)).collect();
    let phi = ProjectiveMap::new(&a, &b, &c, int(1))?;
    let skewed = apply_projective_polytope(&phi, &boxed)?;

    let mut den = 10i64;
    let perturbed = loop {
        let offsets: Vec<Rational> = skewed
            .facets()
            .iter()
            .map(|h| &h.offset * (Rational::one() + small(&mut rng, 1, den)))
            .collect();
        match normal_transform_polytope(&skewed, &NormalTransform { new_offsets: offsets }) {
            Ok(p) if normalizer::cube_certificate(&p).is_ok() => break p,
            _ => den *= 2,
        }
    };
    let c = perturbed.centroid();
    perturbed.translated(&rational::neg(&c))
}

/// Polar of a random cube.
pub fn random_crosspolytope(d: usize, seed: u64) -> Result<Polytope> {
    polar(&random_cube(d, seed)?)
}
