// Acceptance criteria, one line each. Runs without the libtest harness so the
// lines show up in plain `cargo test` output.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use goldman_core::complex::{boundary, Restrict, WedgeChain};
use goldman_core::linalg::q;
use goldman_core::sample::random_spec;
use goldman_core::verify::axioms::{bracket_axioms_check, complex_axioms_check};
use goldman_core::verify::extension::linear_extension_check;
use goldman_core::verify::gk::{gk_cycle_check, gk_factors, wedge_product};
use goldman_core::verify::h1::h1_check;
use goldman_core::verify::inner::{inner_h2_certify, main_theorem_check};
use goldman_core::verify::omega::omega_check;
use goldman_core::verify::outer::homotopy_identity_check;
use goldman_core::verify::rank::boundary_preimage;
use goldman_core::verify::report::{CheckEntry, Verdict};
use goldman_core::verify::settings::{el, Settings};
use goldman_core::verify::surface::{cj_identity, surface_generator_check};
use goldman_core::{AbelianGroup, GroupSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn certified(e: &CheckEntry) -> Result<(), String> {
    ensure(e.verdict == Verdict::Certified, || {
        format!("{} [{:?}] is {}: {}", e.id, e.params, e.verdict.as_str(), e.notes.join("; "))
    })
}

fn fact(e: &CheckEntry, k: &str) -> Result<String, String> {
    e.facts.get(k).cloned().ok_or_else(|| format!("{}: missing fact '{k}'", e.id))
}

fn num(e: &CheckEntry, k: &str) -> Result<usize, String> {
    let v = fact(e, k)?;
    v.split_whitespace().next().and_then(|x| x.parse().ok()).ok_or_else(|| format!("{}: '{k}' = {v}", e.id))
}

fn torus() -> AbelianGroup {
    AbelianGroup::surface(1, 0)
}

fn spec_file(name: &str) -> AbelianGroup {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    let rows = |k: &str| -> Vec<Vec<i64>> { serde_json::from_value(v[k].clone()).unwrap_or_default() };
    let n = v["generators"].as_u64().unwrap() as usize;
    let spec = match v.get("names") {
        Some(names) => GroupSpec::with_names(n, rows("relations"), rows("form"), serde_json::from_value(names.clone()).unwrap()),
        None => GroupSpec::new(n, rows("relations"), rows("form")),
    };
    AbelianGroup::new(spec.unwrap())
}

fn c1_algebra_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut triples, mut specs) = (0, 0);
    for i in 0..6 {
        let h = AbelianGroup::new(random_spec(&mut rng));
        let e = bracket_axioms_check(&h, 100, i);
        certified(&e)?;
        ensure(fact(&e, "jacobi")? == "100 / 100" && fact(&e, "skew")? == "100 / 100", || format!("{:?}", e.facts))?;
        triples += 100;
        specs += 1;
    }
    Ok(format!("{triples} triples over {specs} random specs, skew and Jacobi exact"))
}

fn c2_complex() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut wedges, mut duality) = (0, 0);
    for i in 0..3 {
        let h = AbelianGroup::new(random_spec(&mut rng));
        let e = complex_axioms_check(&h, 500, i);
        certified(&e)?;
        wedges += num(&e, "wedges (d o d, grading)")?;
        duality += num(&e, "duality instances")?;
    }
    ensure(wedges >= 1000, || format!("only {wedges} wedges"))?;
    Ok(format!("d d = 0 on {wedges} wedges (p <= 5), duality on {duality}"))
}

fn c3_outer_homotopy() -> Outcome {
    let mut total = 0;
    let mut corrections = Vec::new();
    for h in [torus(), AbelianGroup::surface(1, 2)] {
        for z in h.box_support(2).into_iter().filter(|z| h.is_derived_element(z)) {
            let (e, _) = homotopy_identity_check(&h, &z, 2, 2).map_err(|e| e.to_string())?;
            certified(&e)?;
            ensure(num(&e, "choices of y")? >= 2, || format!("z = {}: fewer than 2 choices of y", el(&h, &z)))?;
            total += 1;
            corrections.extend(e.notes.iter().filter(|n| n.contains("correct")).cloned());
        }
    }
    let cal = if corrections.is_empty() { "no coefficient correction".to_string() } else { corrections.join("; ") };
    Ok(format!("identity exact on {total} outer gradings, 2 choices of y each, {cal}"))
}

fn c4_inner_iso() -> Outcome {
    let h = torus();
    let e = inner_h2_certify(&h, &h.zero(), &Settings::with_boxes(3, 9)).map_err(|e| e.to_string())?;
    certified(&e)?;
    ensure(e.params.get("route").map(String::as_str) == Some("rank"), || "not the rank route".into())?;
    let (kerf, bounded) = (num(&e, "dim ker f on Z_2")?, num(&e, "dim Z_2 cap B_2")?);
    ensure(kerf == bounded, || format!("ker f = {kerf}, Z_2 cap B_2 = {bounded}"))?;
    let (frank, dim) = (num(&e, "rank f on Z_2")?, num(&e, "quotient_dim")?);
    ensure(frank == h.free_rank() && dim == 2, || format!("rank f = {frank}, quotient {dim}"))?;
    Ok(format!("dim Z_2 = {}, ker f = B_2 = {bounded}, f onto Q^2, quotient dim {dim}", num(&e, "dim Z_2")?))
}

fn c5_main_theorem() -> Outcome {
    let h = AbelianGroup::surface(1, 2);
    let c1 = h.generator("C1").unwrap().clone();
    let s = Settings::new(2, 3);
    let kernel: Vec<_> = h.box_support(2).into_iter().filter(|x| h.in_kernel_mu(x)).collect();
    let mut parts = Vec::new();
    for z in [h.zero(), c1.clone(), h.scalar_mul(2, &c1).unwrap()] {
        let e = main_theorem_check(&h, &z, &s);
        certified(&e)?;
        // independent counts: unordered pairs of ker mu elements summing to z,
        // and the free rank of H/Zz
        let kp = kernel.iter().flat_map(|a| kernel.iter().map(move |b| (a, b))).filter(|(a, b)| a < b && h.add(a, b).unwrap() == z).count();
        let inner = h.free_rank() - usize::from(h.free_part(&z).iter().any(|c| *c != 0));
        let full = num(&e, "dim H_2 (truncated)")?;
        ensure(num(&e, "kernel pairs")? == kp, || format!("z = {}: kernel pairs {} vs {kp}", el(&h, &z), num(&e, "kernel pairs").unwrap()))?;
        ensure(full == kp + inner, || format!("z = {}: H_2 = {full}, expected {kp} + {inner}", el(&h, &z)))?;
        parts.push(format!("z={}: {full} = {kp} + {inner}", el(&h, &z)));
    }
    Ok(parts.join(", "))
}

fn c6_h1() -> Outcome {
    let mut parts = Vec::new();
    for (h, name) in [(torus(), "Z^2"), (AbelianGroup::surface(1, 2), "surface(1,2)")] {
        let s = Settings::new(2, 3);
        let e = h1_check(&h, &s);
        certified(&e)?;
        let box_ = h.box_support(2);
        let inner = box_.iter().filter(|x| h.in_kernel_mu(x)).count();
        ensure(num(&e, "dim 1 (ker mu)")? == inner && num(&e, "dim 0 (H^(1))")? == box_.len() - inner, || format!("{name}: {:?}", e.facts))?;
        parts.push(format!("{name}: {inner} gradings dim 1, {} dim 0", box_.len() - inner));
    }
    Ok(parts.join("; "))
}

fn c7_gk() -> Outcome {
    let h = torus();
    let u = h.element(&[1, 0]).unwrap();
    let z = h.zero();
    let e = gk_cycle_check(&h, &u, &z, &Settings::new(1, 3)).map_err(|e| e.to_string())?;
    certified(&e)?;
    // rebuild the chain and find a d_3 preimage by elimination
    let (a, b) = gk_factors(&h, &u, &z);
    let c = wedge_product(&a, &b);
    ensure(boundary(&h, &c).is_zero(), || "not a cycle".into())?;
    let six = WedgeChain::monomial(vec![u.clone(), h.add(&z, &h.neg(&u).unwrap()).unwrap()], q(6));
    let target = goldman_core::complex::project_derived(&h, &c).minus(&six);
    let mut terms = 0;
    for (g, part) in target.homogeneous_parts(&h) {
        let w = boundary_preimage(&h, &part, 3, Restrict::DerivedOnly).ok_or_else(|| format!("no preimage in grading {}", el(&h, &g)))?;
        ensure(boundary(&h, &w) == part, || "preimage does not bound".into())?;
        terms += w.len();
    }
    Ok(format!("factors in ker K, d_2 = 0, projected chain - 6[u]^[z-u] = d_3 of a {terms}-term chain"))
}

fn c8_omega() -> Outcome {
    let h = spec_file("torus_plus_z2.json");
    let t = h.generator("t").unwrap().clone();
    let e = omega_check(&h, &t, &Settings::new(3, 1)).map_err(|e| e.to_string())?;
    certified(&e)?;
    ensure(fact(&e, "z torsion")? == "true", || "z not torsion".into())?;
    let cert = num(&e, "certificate size")?;
    let h3 = spec_file("z3_degenerate.json");
    let e3 = h3.element(&[0, 0, 1]).unwrap();
    let e = omega_check(&h3, &e3, &Settings::new(3, 1)).map_err(|e| e.to_string())?;
    certified(&e)?;
    let bad = num(&e, "eta = 1-2f(u): triples with d eta != omega")?;
    let verbatim = num(&e, "eta = f(u)+1: triples with d eta != omega")?;
    ensure(bad == 0, || format!("{bad} triples fail"))?;
    Ok(format!(
        "(a) infeasibility certificate with {cert} terms; (b) d eta = omega on all {} triples with eta(u,z-u) = 1-2f(u) (f(u)+1 fails on {verbatim})",
        fact(&e, "triples")?
    ))
}

fn c9_surface() -> Outcome {
    let e = surface_generator_check(2, 3, None).map_err(|e| e.to_string())?;
    certified(&e)?;
    ensure(num(&e, "rank of f-images")? == 6 && num(&e, "generator classes")? == 7, || format!("{:?}", e.facts))?;
    let h = AbelianGroup::surface(2, 3);
    for j in 1..=3 {
        let id = cj_identity(&h, 2, j, &h.zero()).map_err(|e| e.to_string())?;
        let w = id.witness.ok_or_else(|| format!("C{j}: no witness"))?;
        ensure(boundary(&h, &w) == id.lifted.minus(&id.rhs), || format!("C{j}: witness does not bound"))?;
    }
    Ok("7 generator classes span Q^6; each Cj difference is d_3 of an explicit chain".into())
}

fn c10_extension() -> Outcome {
    let mut parts = Vec::new();
    for (h, name) in [(torus(), "Z^2"), (AbelianGroup::surface(1, 2), "surface(1,2)")] {
        let e = linear_extension_check(&h, 2, 100, 11);
        certified(&e)?;
        ensure(num(&e, "functionals")? >= 100, || "fewer than 100 functionals".into())?;
        let control = fact(&e, "negative control")?;
        ensure(control.ends_with("rejected"), || control.clone())?;
        parts.push(format!("{name}: {} functionals, control rejected", num(&e, "functionals")?));
    }
    Ok(parts.join("; "))
}

fn c11_golden() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/verify_all_surface_2_3_box_2_seed_1.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_goldman"))
        .args(["verify", "--suite", "all", "--surface", "2,3", "--box", "2", "--seed", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let want = std::fs::read(&golden).map_err(|e| e.to_string())?;
    ensure(out.stdout == want, || {
        let line = out.stdout.split(|b| *b == b'\n').zip(want.split(|b| *b == b'\n')).position(|(a, b)| a != b);
        format!("report differs from the golden file (first differing line {:?})", line.map(|l| l + 1))
    })?;
    Ok(format!("{} bytes identical", want.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("algebra axioms", c1_algebra_axioms, 5),
        ("d o d = 0 and duality", c2_complex, 10),
        ("outer exactness", c3_outer_homotopy, 30),
        ("inner isomorphism", c4_inner_iso, 60),
        ("main theorem decomposition", c5_main_theorem, 60),
        ("H_1 = center", c6_h1, 0),
        ("g_K cycle", c7_gk, 0),
        ("omega dichotomy", c8_omega, 60),
        ("surface generators", c9_surface, 0),
        ("linear extension", c10_extension, 0),
        ("CLI golden report", c11_golden, 0),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut res = run();
        let dt = t.elapsed();
        if *limit > 0 && dt > Duration::from_secs(*limit) && res.is_ok() {
            res = Err(format!("took {dt:.1?}, limit {limit} s"));
        }
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({dt:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({dt:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
