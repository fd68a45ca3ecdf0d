//! Acceptance criteria 1-9, one PASS/FAIL line each.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::One;

use polyforge::constructor::{build_tower, c_connected_sum, Tower, TowerSize};
use polyforge::enumerative::{
    check_dehn_sommerville, cube_f, cubical_h, density_schedule, gc_of_c_connected_sum, gc_of_fvector,
    short_cubical_h, tower_f, GcVector, Generator, RatPolynomial,
};
use polyforge::fixtures;
use polyforge::geometry::{
    brute_force_hull, check_orthogonal_concurrent, cube_structure, f_vector_of, polar, CertificateKind, OracleBounds,
    Polytope,
};
use polyforge::io::{digest, LogDocument, PolytopeDocument};
use polyforge::normalizer::{self, continuity_probe, normalize_crosspolytope, relate_cubes, standard_cube};
use polyforge::rational::{self, int, Rational};

type Outcome = Result<String, String>;

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, n: usize, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {n} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                self.failed += 1;
                println!("criterion {n} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn pair(d: usize, seed: u64) -> (Polytope, Polytope) {
    (fixtures::random_cube(d, seed).unwrap(), fixtures::random_cube(d, 1000 + seed).unwrap())
}

fn is_cube(p: &Polytope) -> bool {
    cube_structure(p.incidence()).is_some()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut longest = [0usize; 2];
    for (slot, d, n, bound) in [(0, 3, 100u64, 23usize), (1, 4, 25, 31)] {
        for seed in 0..n {
            let (q, q2) = pair(d, seed);
            let log = relate_cubes(&q, &q2).map_err(e2s(&format!("d={d} seed={seed}")))?;
            ensure(log.len() <= bound, || format!("d={d} seed={seed}: {} steps > {bound}", log.len()))?;
            for (i, e) in log.entries.iter().enumerate() {
                ensure(e.certificate.kind == CertificateKind::CombinatorialCube, || {
                    format!("d={d} seed={seed}: step {i} certificate {:?}", e.certificate.kind)
                })?;
                ensure(is_cube(&log.snapshots[e.snapshot]), || format!("d={d} seed={seed}: step {i} is not a cube"))?;
            }
            let replayed = log.replay(&q).map_err(e2s(&format!("replay d={d} seed={seed}")))?;
            ensure(replayed.same_set(&q2) && digest(&replayed) == digest(&q2), || {
                format!("d={d} seed={seed}: replay does not reproduce the target")
            })?;
            longest[slot] = longest[slot].max(log.len());
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}, limit 120s"))?;
    Ok(format!("longest logs {} (d=3, bound 23) and {} (d=4, bound 31)", longest[0], longest[1]))
}

fn criteria_2_3(report: &mut Report) {
    let mut polar_outputs: Vec<(Polytope, Vec<(usize, usize)>)> = Vec::new();
    report.run(2, "normalize_cube reaches the standard cube", || {
        let mut longest = [0usize; 2];
        for (slot, d, n, bound) in [(0, 3, 100u64, 14usize), (1, 4, 25, 18)] {
            for seed in 0..n {
                let q = fixtures::random_cube(d, seed).unwrap();
                let log = normalizer::normalize_cube(&q).map_err(e2s(&format!("d={d} seed={seed}")))?;
                ensure(log.len() <= bound, || format!("d={d} seed={seed}: {} steps > {bound}", log.len()))?;
                let fin = log.final_polytope();
                let mut got = fin.vertices().to_vec();
                let mut want = standard_cube(d).vertices().to_vec();
                got.sort();
                want.sort();
                ensure(got == want, || format!("d={d} seed={seed}: final polytope is not [-1,1]^d"))?;
                longest[slot] = longest[slot].max(log.len());

                let (plog, _) = normalizer::normalize_cube_polar(&q).map_err(e2s("polar"))?;
                let pairing = cube_structure(q.incidence()).unwrap().0;
                let x = polar(&q).map_err(e2s("polar"))?;
                let (_, state) = normalize_crosspolytope(&x, &pairing).map_err(e2s("crosspolytope"))?;
                polar_outputs.push((state.crosspolytope, pairing.pairs.clone()));
                polar_outputs.push((plog.final_polytope().clone(), pairing.pairs));
            }
        }
        Ok(format!("longest logs {} (d=3, bound 14) and {} (d=4, bound 18)", longest[0], longest[1]))
    });
    report.run(3, "check_orthogonal_concurrent on normalization outputs", || {
        ensure(!polar_outputs.is_empty(), || "no normalization outputs".into())?;
        for (i, (x, pairs)) in polar_outputs.iter().enumerate() {
            check_orthogonal_concurrent(x.vertices(), pairs).map_err(e2s(&format!("output {i}")))?;
        }
        Ok(format!("{} outputs (iteration and final) certified", polar_outputs.len()))
    });
}

fn criterion_4(towers: &mut Vec<Tower>) -> Outcome {
    let mut largest = [0usize; 2];
    for (slot, d, n, bound) in [(0, 3usize, 20u64, 12usize), (1, 4, 5, 16)] {
        for s in 0..n {
            let q = fixtures::random_cube(d - 1, 2000 + 2 * s).unwrap();
            let q2 = fixtures::random_cube(d - 1, 2001 + 2 * s).unwrap();
            let t = build_tower(&q, &q2).map_err(e2s(&format!("d={d} pair {s}")))?;
            ensure(t.cube_count <= bound, || format!("d={d} pair {s}: {} cubes > {bound}", t.cube_count))?;
            ensure(t.glue_steps.len() + 1 == t.cube_count, || format!("d={d} pair {s}: missing glue certificates"))?;
            ensure(t.glue_steps.iter().all(|g| g.strict_checks > 0), || format!("d={d} pair {s}: empty glue certificate"))?;
            t.check_witnesses(&q, &q2).map_err(e2s(&format!("d={d} pair {s}")))?;
            t.check_structure().map_err(e2s(&format!("d={d} pair {s}")))?;
            largest[slot] = largest[slot].max(t.cube_count);
            towers.push(t);
        }
    }
    Ok(format!("largest towers {} cubes (d=3, bound 12) and {} cubes (d=4, bound 16)", largest[0], largest[1]))
}

fn criterion_5(sums: &mut Vec<Polytope>) -> Outcome {
    let c3 = standard_cube(3);
    let cs = c_connected_sum(&c3, 0, &c3, 1, TowerSize::Exact(12)).map_err(e2s("d=3"))?;
    let f3 = f_vector_of(cs.polytope.incidence()).map_err(e2s("d=3"))?;
    let g3 = gc_of_fvector(&f3).map_err(e2s("d=3"))?;
    ensure(cs.provenance.connector_cubes == 12, || format!("connector has {} cubes", cs.provenance.connector_cubes))?;
    ensure(g3.entries()[1] == 52, || format!("measured g^c_1 = {} from f = {f3}", g3.entries()[1]))?;
    sums.push(cs.polytope);

    let g4 = GcVector::new(4, vec![8, 0, 0]).unwrap();
    let predicted = gc_of_c_connected_sum(&g4, &g4, 16).map_err(e2s("d=4 formula"))?;
    ensure(predicted.entries() == [8, 136, 0], || format!("d=4 formula gives {predicted}"))?;
    let c4 = standard_cube(4);
    let cs4 = c_connected_sum(&c4, 0, &c4, 1, TowerSize::Exact(16)).map_err(e2s("d=4"))?;
    let f4 = f_vector_of(cs4.polytope.incidence()).map_err(e2s("d=4"))?;
    let m4 = gc_of_fvector(&f4).map_err(e2s("d=4"))?;
    ensure(m4 == predicted, || format!("d=4 measured {m4} from f = {f4}, predicted {predicted}"))?;
    sums.push(cs4.polytope);
    Ok(format!("d=3 f = {f3}, g^c = {g3}; d=4 f = {f4}, g^c = {m4} (formula and geometry)"))
}

fn palindromic(f: &polyforge::enumerative::FVector) -> Result<RatPolynomial, String> {
    let h = cubical_h(f).map_err(e2s(&format!("h^c of {f}")))?;
    ensure(check_dehn_sommerville(&h, f.dim()), || format!("h^c of {f} = {h} is not palindromic"))?;
    Ok(h)
}

fn criterion_6(constructed: &[&Polytope]) -> Outcome {
    for d in 2..=6 {
        palindromic(&cube_f(d))?;
        for m in 1..=4 * d {
            palindromic(&tower_f(d, m).map_err(e2s("tower_f"))?)?;
        }
    }
    for p in constructed {
        palindromic(&f_vector_of(p.incidence()).map_err(e2s("f-vector"))?)?;
    }
    let f3 = cube_f(3);
    let hsc = short_cubical_h(&f3);
    let hc = cubical_h(&f3).unwrap();
    ensure(hsc == RatPolynomial::from_ints(&[8, 8, 8]), || format!("h^sc(3-cube) = {hsc}"))?;
    ensure(hc == RatPolynomial::from_ints(&[4, 4, 4, 4]), || format!("h^c(3-cube) = {hc}"))?;
    Ok(format!(
        "cube_f d=2..6, tower_f m<=4d, {} constructed polytopes; h^sc(3-cube) = {hsc}, h^c(3-cube) = {hc}",
        constructed.len()
    ))
}

fn criterion_7(constructed: &[&Polytope]) -> Outcome {
    let bounds = OracleBounds { max_dim: 4, max_points: 200 };
    let mut checked = 0;
    let mut skipped = 0;
    for (i, p) in constructed.iter().enumerate() {
        if p.dim() > bounds.max_dim || p.vertices().len() > bounds.max_points {
            skipped += 1;
            continue;
        }
        let hull = brute_force_hull(p.vertices(), bounds).map_err(e2s(&format!("polytope {i}")))?;
        ensure(hull.0.vertices == p.vertices(), || format!("polytope {i}: vertex sets differ"))?;
        ensure(hull.2.same_up_to_facet_order(p.incidence()), || format!("polytope {i}: incidence differs"))?;
        checked += 1;
    }
    ensure(checked > 0, || "nothing within oracle bounds".into())?;
    Ok(format!("{checked} polytopes match the brute-force hull, {skipped} outside bounds"))
}

fn criterion_8() -> Outcome {
    let targets: [(usize, [i64; 2]); 6] =
        [(4, [1, 1]), (4, [3, 1]), (4, [1, 4]), (5, [1, 1]), (5, [2, 1]), (5, [1, 3])];
    let gens = vec![Generator::standard(1), Generator::standard(2)];
    let mut finals = Vec::new();
    for (d, s) in targets {
        let target: Vec<Rational> = s.iter().map(|&x| int(x)).collect();
        let r = density_schedule(d, &target, &gens, 10).map_err(e2s(&format!("d={d} s={s:?}")))?;
        let cos2: Vec<&Rational> = r.steps.iter().map(|st| &st.cos2_gc).collect();
        ensure(r.monotone_gc, || format!("d={d} s={s:?}: cos^2 not monotone {:?}", floats(&cos2)))?;
        let first = cos2[0];
        let last = cos2[cos2.len() - 1];
        ensure(last > first || last.is_one(), || format!("d={d} s={s:?}: no progress {:?}", floats(&cos2)))?;
        finals.push(format!("d={d} {s:?}: {:.6}", rational::to_f64(last)));
    }
    Ok(format!("final cos^2 {}", finals.join(", ")))
}

fn floats(xs: &[&Rational]) -> Vec<f64> {
    xs.iter().map(|x| rational::to_f64(x)).collect()
}

fn criterion_9() -> Outcome {
    let (q, q2) = pair(3, 7);
    let run = || -> Result<(String, String), String> {
        let n = normalizer::normalize_cube(&q).map_err(e2s("normalize"))?;
        let r = relate_cubes(&q, &q2).map_err(e2s("relate"))?;
        Ok((
            serde_json::to_string(&LogDocument::from_log(&n)).unwrap(),
            serde_json::to_string(&LogDocument::from_log(&r)).unwrap(),
        ))
    };
    let a = run()?;
    let b = run()?;
    ensure(a == b, || "in-process logs differ between runs".into())?;

    let dir = tempfile::tempdir().map_err(e2s("tempdir"))?;
    polyforge::io::write_json(&dir.path().join("q.json"), &PolytopeDocument::from_polytope(&q)).map_err(e2s("write"))?;
    let cli = |name: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_polyforge"))
            .args(["normalize", "q.json", "--log", name])
            .current_dir(dir.path())
            .output()
            .map_err(e2s("spawn"))?;
        ensure(out.status.success(), || format!("normalize exited with {}", out.status))?;
        Ok((out.stdout, std::fs::read(dir.path().join(name)).map_err(e2s("read"))?))
    };
    ensure(cli("a.json")? == cli("b.json")?, || "CLI log files differ between runs".into())?;

    let eps = Rational::new(1.into(), 1_000_000.into());
    let mut drift = Vec::new();
    for seed in 0..3 {
        let r = continuity_probe(&fixtures::random_cube(3, seed).unwrap(), &eps).map_err(e2s("continuity"))?;
        drift.push(format!(
            "{:.2e}{}",
            r.max_drift,
            if r.within_bound { "" } else { " (above advisory bound)" }
        ));
    }
    Ok(format!("logs byte-identical; advisory drift at eps=1e-6: {}", drift.join(", ")))
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    report.run(1, "relate_cubes bounds, certificates and replay", criterion_1);
    criteria_2_3(&mut report);
    let mut towers = Vec::new();
    report.run(4, "build_tower sizes, glue certificates and witnesses", || criterion_4(&mut towers));
    let mut sums = Vec::new();
    report.run(5, "g^c_1 of C-connected sums", || criterion_5(&mut sums));
    let constructed: Vec<&Polytope> = towers.iter().map(|t| &t.polytope).chain(sums.iter()).collect();
    report.run(6, "cubical Dehn-Sommerville", || criterion_6(&constructed));
    report.run(7, "incidence agrees with brute_force_hull", || criterion_7(&constructed));
    report.run(8, "density schedule convergence", criterion_8);
    report.run(9, "deterministic logs and continuity", criterion_9);
    println!("acceptance: {} of 9 criteria passed", 9 - report.failed);
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
