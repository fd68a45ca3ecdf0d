use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use polyforge::constructor::{build_tower, c_connected_sum, TowerSize};
use polyforge::enumerative::{cubical_h, density_schedule, gc_of_fvector, short_cubical_h, Generator};
use polyforge::error::{Error, Result};
use polyforge::fixtures;
use polyforge::geometry::{
    brute_force_hull, crosspolytope_pairing, cube_structure, f_vector_of, CertificateFailure, OracleBounds, Polytope,
};
use polyforge::io::{self, digest, LogDocument, PolytopeDocument};
use polyforge::normalizer::{normalize_cube, relate_cubes};
use polyforge::rational::{self, Rational};

#[derive(Parser)]
#[command(name = "polyforge", version, about = "Exact cubical polytope constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a combinatorial cube to the standard cube.
    Normalize {
        input: PathBuf,
        /// Write the log document here instead of standard output.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Write every intermediate polytope into this directory.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Projective and normal steps taking the first cube to the second.
    Relate {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// A d-tower between two (d-1)-cubes.
    Tower {
        q: PathBuf,
        q2: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// C-connected sum of two cubical polytopes along facets.
    Connect {
        p1: PathBuf,
        p2: PathBuf,
        #[arg(long)]
        facet1: usize,
        #[arg(long)]
        facet2: usize,
        /// Connector size; defaults to 4d.
        #[arg(long)]
        cubes: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Face numbers of a polytope.
    Fvector { input: PathBuf },
    /// Cubical h- and g-vectors of a cubical polytope.
    Gc { input: PathBuf },
    /// Re-certify a document, optionally against the brute-force hull.
    Verify {
        input: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Decimal OFF export for viewers.
    ExportOff {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Density schedule toward a target ray in g^c-space.
    Schedule {
        /// Comma separated rationals s_1,...,s_k.
        #[arg(long, value_delimiter = ',')]
        target: Vec<String>,
        /// JSON list of generator leading terms.
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Dimension; defaults to twice the target length.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// A seeded random combinatorial cube.
    RandomCube {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polyforge: {e}");
            ExitCode::from(if e.is_certificate_failure() { 2 } else { 1 })
        }
    }
}

fn load(path: &Path) -> Result<Polytope> {
    io::read_json::<PolytopeDocument>(path)?.to_polytope()
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => io::write_json(p, value),
        None => {
            let text = serde_json::to_string_pretty(value)?;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

/// The declared opposite pairing must be the one of the certified incidence.
fn check_pairing(p: &Polytope, declared: &[(usize, usize)]) -> Result<()> {
    let sorted = |pairs: &[(usize, usize)]| {
        let mut v: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort();
        v
    };
    let (actual, failure) = match cube_structure(p.incidence()) {
        Some((pairing, _)) => (Some(pairing.pairs), CertificateFailure::NotCube),
        None => (crosspolytope_pairing(p.incidence()).map(|c| c.pairs), CertificateFailure::NotCrosspolytope),
    };
    match actual {
        Some(a) if sorted(&a) == sorted(declared) => Ok(()),
        _ => Err(Error::Certificate(failure)),
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Normalize { input, log, snapshots } => {
            let q = load(&input)?;
            let l = normalize_cube(&q)?;
            l.check_bound()?;
            if let Some(dir) = snapshots {
                std::fs::create_dir_all(&dir)?;
                for (i, s) in l.snapshots.iter().enumerate() {
                    io::write_json(&dir.join(format!("snapshot-{i:03}.json")), &PolytopeDocument::from_polytope(s))?;
                }
            }
            let doc = LogDocument::from_log(&l);
            match log {
                Some(path) => {
                    io::write_json(&path, &doc)?;
                    println!("{} steps (bound {}), final digest {}", doc.bound.achieved, doc.bound.declared, doc.final_digest);
                }
                None => emit(None, &doc)?,
            }
        }
        Command::Relate { a, b, out } => {
            let qa = load(&a)?;
            let qb = load(&b)?;
            let l = relate_cubes(&qa, &qb)?;
            l.check_bound()?;
            emit(out.as_deref(), &LogDocument::from_log(&l))?;
        }
        Command::Tower { q, q2, dim, out } => {
            let (q, q2) = (load(&q)?, load(&q2)?);
            if q.dim() + 1 != dim {
                return Err(Error::DimensionMismatch { expected: dim.saturating_sub(1), found: q.dim() });
            }
            let t = build_tower(&q, &q2)?;
            t.check_witnesses(&q, &q2)?;
            t.check_structure()?;
            let provenance = json!({
                "construction": "tower",
                "cubes": t.cube_count,
                "bottom-facet": t.bottom_facet,
                "top-facet": t.top_facet,
                "glue": t.glue_steps,
            });
            emit(out.as_deref(), &PolytopeDocument::from_polytope(&t.polytope).with_provenance(provenance))?;
        }
        Command::Connect { p1, p2, facet1, facet2, cubes, out } => {
            let (p1, p2) = (load(&p1)?, load(&p2)?);
            let size = TowerSize::Exact(cubes.unwrap_or(4 * p1.dim()));
            let cs = c_connected_sum(&p1, facet1, &p2, facet2, size)?;
            let provenance = json!({ "construction": "c-connected-sum", "details": cs.provenance });
            emit(out.as_deref(), &PolytopeDocument::from_polytope(&cs.polytope).with_provenance(provenance))?;
        }
        Command::Fvector { input } => {
            let p = load(&input)?;
            println!("{}", f_vector_of(p.incidence())?);
        }
        Command::Gc { input } => {
            let p = load(&input)?;
            let f = f_vector_of(p.incidence())?;
            let hc = cubical_h(&f)?;
            let g = gc_of_fvector(&f)?;
            println!("f   = {f}");
            println!("hsc = {}", short_cubical_h(&f));
            println!("hc  = {hc}");
            println!("gc  = {g}");
        }
        Command::Verify { input, oracle } => {
            let doc: PolytopeDocument = io::read_json(&input)?;
            let p = doc.to_polytope()?;
            if let Some(declared) = &doc.pairing {
                check_pairing(&p, declared)?;
            }
            println!("certified: {} vertices, {} facets, digest {}", p.vertices().len(), p.facets().len(), digest(&p));
            if oracle {
                let hull = brute_force_hull(p.vertices(), OracleBounds::from_env())?;
                if hull.0.vertices.len() != p.vertices().len() || !hull.2.same_up_to_facet_order(p.incidence()) {
                    return Err(Error::InternalAssertion("incidence differs from the brute-force hull".into()));
                }
                println!("oracle: incidence matches");
            }
        }
        Command::ExportOff { input, output, digits } => {
            let p = load(&input)?;
            std::fs::write(&output, io::export_off(&p, digits)?)?;
        }
        Command::Schedule { target, generators, steps, dim } => {
            let target: Vec<Rational> = target.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
            let gens: Vec<Generator> = io::read_json(&generators)?;
            let d = dim.unwrap_or(2 * target.len());
            emit(None, &density_schedule(d, &target, &gens, steps)?)?;
        }
        Command::RandomCube { dim, seed, out } => {
            let q = fixtures::random_cube(dim, seed)?;
            let provenance = json!({ "construction": "random-cube", "seed": seed });
            emit(out.as_deref(), &PolytopeDocument::from_polytope(&q).with_provenance(provenance))?;
        }
    }
    Ok(())
}
