//! Exact polytope kernel: representations, polarity, incidence and
//! certificates.

pub mod certificate;
pub mod incidence;
pub mod oracle;
pub mod polar;
pub mod polytope;
pub mod venum;

pub use certificate::{
    check_orthogonal_concurrent, verify_realization, Certificate, CertificateFailure, CertificateKind,
};
pub use incidence::{
    crosspolytope_pairing, cube_structure, f_vector_of, is_combinatorial_crosspolytope, is_combinatorial_cube,
    is_cubical, IncidenceStructure, OppositePairing,
};
pub use oracle::{brute_force_hull, OracleBounds};
pub use polar::{polar, polar_dual, polar_dual_v};
pub use polytope::{HPolytope, Halfspace, Polytope, VPolytope};
