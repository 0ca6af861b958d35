//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p evpkit-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use evpkit::geometry::{gap, NormTag};
use evpkit::io;
use evpkit::numeric::{lp_feasible, Rational};
use evpkit::oracle::{fm_feasible, related, FourierMotzkin};
use evpkit::principle::{
    check_unique_minimal, ekeland_point, is_approx_solution, relation_r, relation_r_dk, EkelandCertificate,
    EkelandSolver,
};
use evpkit::random::{random_instance, random_system, InstanceParams};
use evpkit::relations::FiniteRelation;
use evpkit::{Instance, RationalVector};
use evpkit_cli::{cmd_scan, cmd_solve, cmd_verify, SolveArgs, EXIT_FAILED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ratio(rng: &mut impl Rng, max: i64) -> Rational {
    Rational::new(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

fn general_params(rng: &mut impl Rng, max_points: usize) -> InstanceParams {
    InstanceParams {
        min_points: 1,
        max_points,
        dim: rng.gen_range(1..=4),
        max_generators: 5,
        max_vertices: 4,
        ..Default::default()
    }
}

fn draw(rng: &mut ChaCha8Rng, max_points: usize) -> Instance {
    let params = general_params(rng, max_points);
    random_instance(rng, &params)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strict_descent(inst: &Instance, cert: &EkelandCertificate) -> Result<(), String> {
    let y = inst.scalarizer();
    let points = cert.points();
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let drop = y.apply(inst.f(a)) - y.apply(inst.f(b));
        let step = &cert.scale * inst.space().dist(a, b);
        ensure(a != b && step.is_positive() && drop >= step, || {
            format!("step {a} -> {b}: descent {drop} < s·d = {step}")
        })?;
    }
    Ok(())
}

/// (ii) at `x` via Fourier–Motzkin.
fn confirmed_maximal(inst: &Instance, x: usize, scale: &Rational) -> Result<(), String> {
    let fm = FourierMotzkin::default();
    for z in (0..inst.len()).filter(|&z| z != x) {
        if related(&fm, inst, x, z, scale).map_err(|e| e.to_string())? {
            return Err(format!("x̄ = {x} is related to {z}"));
        }
    }
    Ok(())
}

fn soundness() -> Outcome {
    let mut r = rng(1);
    let mut starts = 0;
    for case in 0..200 {
        let inst = draw(&mut r, 20);
        let scale = ratio(&mut r, 4);
        let mut solver = EkelandSolver::new(&inst, &scale).map_err(|e| e.to_string())?;
        let mut maximal = vec![None; inst.len()];
        for x in 0..inst.len() {
            let cert = solver.solve_from(x).map_err(|e| e.to_string())?;
            cert.start_witness
                .check(
                    &inst,
                    &inst.f(x).sub(inst.f(cert.x_bar)),
                    &(&scale * inst.space().dist(x, cert.x_bar)),
                )
                .map_err(|e| format!("case {case}, start {x}: (i) witness: {e}"))?;
            if maximal[cert.x_bar].is_none() {
                maximal[cert.x_bar] = Some(confirmed_maximal(&inst, cert.x_bar, &scale));
            }
            maximal[cert.x_bar]
                .clone()
                .unwrap()
                .map_err(|e| format!("case {case}, start {x}: {e}"))?;
            starts += 1;
        }
    }
    Ok(format!("200 instances, {starts} starts"))
}

fn scalar_reduction() -> Outcome {
    let mut r = rng(2);
    let params = InstanceParams { max_points: 12, scalar: true, ..Default::default() };
    for case in 0..100 {
        let inst = random_instance(&mut r, &params);
        let eps = ratio(&mut r, 4);
        let x = r.gen_range(0..inst.len());
        let cert = ekeland_point(&inst, x, &eps).map_err(|e| e.to_string())?;
        let fx = &inst.f(cert.x_bar)[0];
        for z in (0..inst.len()).filter(|&z| z != cert.x_bar) {
            let lhs = &inst.f(z)[0] + &(&eps * inst.space().dist(z, cert.x_bar));
            ensure(lhs > *fx, || format!("case {case}: f(z) + ε·d(z, x̄) = {lhs} <= f(x̄) = {fx}"))?;
        }
    }
    Ok("100 instances".into())
}

fn localization() -> Outcome {
    let mut r = rng(3);
    let mut flagged = 0;
    for case in 0..100 {
        let inst = draw(&mut r, 12);
        let eps = ratio(&mut r, 4);
        let lam = ratio(&mut r, 6);
        for x in 0..inst.len() {
            if !is_approx_solution(&inst, x, &(&eps * &lam)).map_err(|e| e.to_string())? {
                continue;
            }
            flagged += 1;
            let cert = ekeland_point(&inst, x, &eps).map_err(|e| e.to_string())?;
            let d = inst.space().dist(x, cert.x_bar);
            ensure(*d < lam, || format!("case {case}, x = {x}: d(x, x̄) = {d} >= λ = {lam}"))?;
        }
    }
    Ok(format!("100 instances, {flagged} approximate points"))
}

fn descent() -> Outcome {
    let mut r = rng(4);
    let mut steps = 0;
    for case in 0..100 {
        let inst = draw(&mut r, 20);
        let scale = ratio(&mut r, 4);
        let mut solver = EkelandSolver::new(&inst, &scale).map_err(|e| e.to_string())?;
        for x in 0..inst.len() {
            let cert = solver.solve_from(x).map_err(|e| e.to_string())?;
            strict_descent(&inst, &cert).map_err(|e| format!("case {case}, start {x}: {e}"))?;
            steps += cert.chain.len();
        }
    }
    Ok(format!("100 instances, {steps} steps"))
}

fn transitivity() -> Outcome {
    let mut r = rng(5);
    let mut related_pairs = 0;
    for case in 0..50 {
        let inst = draw(&mut r, 8);
        let scale = ratio(&mut r, 4);
        let mut err = None;
        let rel = FiniteRelation::from_fn(inst.len(), |u, v| match relation_r(&inst, u, v, &scale) {
            Ok(w) => w.is_some(),
            Err(e) => {
                err = Some(e.to_string());
                false
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let n = inst.len();
        for u in 0..n {
            for v in 0..n {
                for z in 0..n {
                    ensure(!(rel.contains(u, v) && rel.contains(v, z)) || rel.contains(u, z), || {
                        format!("case {case}: {u} r {v} and {v} r {z} but not {u} r {z}")
                    })?;
                }
            }
        }
        related_pairs += rel.pairs().count();
    }
    Ok(format!("50 instances, {related_pairs} related pairs"))
}

fn solver_agreement() -> Outcome {
    let mut r = rng(6);
    let mut feasible = 0;
    for case in 0..1500 {
        let sys = random_system(&mut r, 6, 6);
        let lp = lp_feasible(&sys).map_err(|e| e.to_string())?;
        let fm = fm_feasible(&sys).map_err(|e| e.to_string())?;
        ensure(lp.is_feasible() == fm.is_feasible(), || {
            format!("system {case}: lp {} vs fm {}", lp.is_feasible(), fm.is_feasible())
        })?;
        feasible += lp.is_feasible() as usize;
    }
    Ok(format!("1500 systems, {feasible} feasible"))
}

fn dk_variant() -> Outcome {
    let mut r = rng(7);
    let mut pairs = 0;
    let mut positive = 0;
    while pairs < 600 {
        let inst = draw(&mut r, 8);
        let scale = ratio(&mut r, 4);
        for _ in 0..10 {
            let u = r.gen_range(0..inst.len());
            let v = r.gen_range(0..inst.len());
            let a = relation_r(&inst, u, v, &scale).map_err(|e| e.to_string())?;
            let b = relation_r_dk(&inst, u, v, &scale).map_err(|e| e.to_string())?;
            ensure(a.is_some() == b.is_some(), || format!("pair ({u}, {v}) disagrees"))?;
            if let Some(w) = &b {
                ensure(w.verifies(&inst, u, v, &scale), || format!("pair ({u}, {v}): folded witness fails"))?;
                positive += 1;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, {positive} related"))
}

fn uniqueness() -> Outcome {
    let mut r = rng(8);
    let mut checks = 0;
    for case in 0..100 {
        let inst = draw(&mut r, 12);
        let scale = ratio(&mut r, 4);
        let x = r.gen_range(0..inst.len());
        let cert = ekeland_point(&inst, x, &scale).map_err(|e| e.to_string())?;
        let p = inst.dset().vertices().len();
        for i in 0..p {
            let weights: Vec<Rational> = RationalVector::unit(p, i).into_inner();
            let ok = check_unique_minimal(&inst, &cert, &weights).map_err(|e| e.to_string())?;
            ensure(ok, || format!("case {case}, vertex {i}: x̄ not uniquely minimal"))?;
            checks += 1;
        }
    }
    Ok(format!("100 certificates, {checks} vertex checks"))
}

fn instances_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn flagship() -> Outcome {
    let started = Instant::now();
    let path = instances_dir().join("simplex_chain.json");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cert_path = dir.path().join("cert.json");
    let solved = cmd_solve(&path, &SolveArgs { start: None, scale: None, out: Some(&cert_path) })
        .map_err(|f| f.message)?;
    let verified = cmd_verify(&path, &cert_path).map_err(|f| f.message)?;
    ensure(verified.contains("overall: PASS"), || verified.clone())?;
    let scanned = cmd_scan(&path, None, None).map_err(|f| f.message)?;

    let inst = evpkit_cli::load_instance(&path).map_err(|f| f.message)?;
    let g = gap(inst.cone(), inst.dset(), NormTag::Inf).map_err(|e| e.to_string())?;
    ensure(g == Rational::new(1, 2), || format!("gap {g} != 1/2"))?;
    let x_bar = solved
        .lines()
        .find_map(|l| l.strip_prefix("x_bar: "))
        .ok_or("no x_bar line")?
        .to_string();
    let listed = scanned
        .lines()
        .find_map(|l| l.strip_prefix("points satisfying (ii): "))
        .ok_or("no scan line")?;
    ensure(listed.split(", ").any(|l| l == x_bar), || format!("{x_bar} missing from scan: {listed}"))?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("x̄ = {x_bar}, gap 1/2, {elapsed:.2?}"))
}

fn mutate(cert: &mut EkelandCertificate, inst: &Instance, kind: usize, rng: &mut impl Rng) {
    match kind {
        0 => {
            let target = rng.gen_range(0..=cert.chain.len());
            let w = if target == cert.chain.len() {
                &mut cert.start_witness
            } else {
                &mut cert.chain[target].witness
            };
            let j = rng.gen_range(0..w.mu.len());
            w.mu[j] += &Rational::one();
            w.k = RationalVector::combination(inst.dim(), &w.mu, inst.cone().generators());
        }
        1 => {
            cert.chain.pop();
        }
        _ => {
            let other = (cert.x_bar + rng.gen_range(1..inst.len())) % inst.len();
            cert.x_bar = other;
        }
    }
}

fn mutation_audit() -> Outcome {
    let mut r = rng(10);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rejected = 0;
    while rejected < 100 {
        let inst = draw(&mut r, 10);
        let scale = ratio(&mut r, 4);
        let x = r.gen_range(0..inst.len());
        let mut cert = ekeland_point(&inst, x, &scale).map_err(|e| e.to_string())?;
        let kind = rejected % 3;
        if (kind == 1 && cert.chain.is_empty()) || (kind == 2 && inst.len() < 2) {
            continue;
        }
        mutate(&mut cert, &inst, kind, &mut r);
        let inst_path = dir.path().join("inst.json");
        let cert_path = dir.path().join("cert.json");
        std::fs::write(&inst_path, io::instance_to_json(&inst)).map_err(|e| e.to_string())?;
        std::fs::write(&cert_path, io::certificate_to_json(&cert)).map_err(|e| e.to_string())?;
        match cmd_verify(&inst_path, &cert_path) {
            Err(f) if f.code == EXIT_FAILED => rejected += 1,
            Err(f) => return Err(format!("mutation {rejected} (kind {kind}): exit {}: {}", f.code, f.message)),
            Ok(_) => return Err(format!("mutation {rejected} (kind {kind}) accepted")),
        }
    }
    Ok("100 mutations rejected".into())
}

fn scale() -> Outcome {
    let started = Instant::now();
    let mut r = rng(11);
    let params = InstanceParams {
        min_points: 100,
        max_points: 100,
        dim: 3,
        max_generators: 5,
        max_vertices: 4,
        ..Default::default()
    };
    let inst = random_instance(&mut r, &params);
    let s = Rational::one();
    let cert = ekeland_point(&inst, 0, &s).map_err(|e| e.to_string())?;
    confirmed_maximal(&inst, cert.x_bar, &s)?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("|X| = 100, m = 3, chain length {}, {elapsed:.2?}", cert.chain.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("soundness of (i) and (ii)", soundness, Some(Duration::from_secs(60))),
        ("scalar reduction", scalar_reduction, None),
        ("localization bound", localization, None),
        ("strict descent", descent, None),
        ("transitivity of r", transitivity, None),
        ("lp/fm agreement", solver_agreement, None),
        ("direction-split variant", dk_variant, None),
        ("unique minimality", uniqueness, None),
        ("flagship example", flagship, None),
        ("mutation audit", mutation_audit, None),
        ("scale |X| = 100", scale, None),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let mut outcome = run();
        let elapsed = started.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed >= *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
