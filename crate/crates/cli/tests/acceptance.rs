//! Acceptance criteria, one pass/fail line each.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kummer_lab::binary_form::{BinaryForm, ParamPoint};
use kummer_lab::config::{build_standard, cyclic_selection, humbert_invariant, preset_config, DivisorClass, TwoTorsionLabel};
use kummer_lab::cover::{analyze_cover, pullback_sextic};
use kummer_lab::cycle::{build_new_cycle, collino_cycle, pushforward_check, selection_curve, HyperellipticModel, MotivicCycle};
use kummer_lab::enumerative::{conic_characteristic, kontsevich_counts, random_query};
use kummer_lab::locus::{
    humbert5_residual, isolate_root, scan_family, shipped_families, sign_changes, verify_certificate, Isolation,
};
use kummer_lab::projective::conic_through_five;
use kummer_lab::scalar::{q, ratio, sign_of, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:?}, limit {limit:?}", t.elapsed()))
}

fn kummer(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kummer")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn curve_counts() -> Outcome {
    let (code, out, err) = kummer(&["count-nd", "--max", "3"]);
    ensure(code == 0, format!("exit {code}: {err}"))?;
    ensure(out == "d,n_d\n1,1\n2,1\n3,12\n", format!("unexpected table {out:?}"))?;
    let t = Instant::now();
    let table = kontsevich_counts(8).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1))?;
    let again = kontsevich_counts(8).map_err(|e| e.to_string())?;
    ensure(table[&4] == 620.into() && again[&4] == 620.into(), "n_4 != 620")?;
    ensure(table.values().all(|n| n > &0.into()), "non-positive entry")?;
    Ok(format!("n_1..n_3 = 1,1,12; n_4 = 620; n_8 = {}", table[&8]))
}

fn characteristic_numbers() -> Outcome {
    let t = Instant::now();
    let expect = [1, 2, 4, 4, 2, 1];
    let mut got = Vec::new();
    for (i, k) in (0..=5).rev().enumerate() {
        for seed in 0..5u64 {
            let n = conic_characteristic(&random_query(k, 1000 + 31 * seed + k as u64)).map_err(|e| e.to_string())?;
            ensure(n == expect[i], format!("{k} points, {} lines, seed {seed}: got {n}", 5 - k))?;
        }
        got.push(expect[i]);
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("(5,0)..(0,5) -> {got:?} on 5 random queries each"))
}

fn configuration_properties() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 120 {
        let mut ps: Vec<Rational> = Vec::new();
        while ps.len() < 6 {
            let p = ratio(rng.gen_range(-40..=40), rng.gen_range(1..=6));
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        let params: Vec<ParamPoint> = ps.into_iter().map(ParamPoint::rational).collect();
        let cfg = build_standard(&params).map_err(|e| e.to_string())?;
        let nodes: Vec<_> = cfg.nodes().values().collect();
        ensure(nodes.len() == 15, "node count")?;
        for i in 0..15 {
            for j in i + 1..15 {
                ensure(nodes[i] != nodes[j], "coincident nodes")?;
            }
            ensure((1..=6).filter(|k| cfg.line(*k).contains(nodes[i])).count() == 2, "node not on exactly two lines")?;
        }
        let sel = cyclic_selection().map(|l| cfg.node(l).clone());
        conic_through_five(&sel).map_err(|e| format!("conic fit failed: {e}"))?;
        let r = humbert5_residual(&cfg, &cyclic_selection(), 6).map_err(|e| e.to_string())?;
        ensure(sign_of(&r.residual) != 0, format!("zero residual at params {:?}", cfg.params()))?;
        done += 1;
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("{done} random configurations"))
}

fn off_locus_cover() -> Outcome {
    let cfg = preset_config();
    let phi = selection_curve(&cfg, &cyclic_selection()).map_err(|e| e.to_string())?;
    let f = pullback_sextic(&cfg, &phi).map_err(|e| e.to_string())?;
    ensure(f.degree() == 12, format!("degree {}", f.degree()))?;
    let a = analyze_cover(&f).map_err(|e| e.to_string())?;
    let doubles: usize = a.node_params.iter().filter(|n| n.multiplicity == 2).map(|n| n.factor.degree()).sum();
    let higher = a.node_params.iter().any(|n| n.multiplicity > 2);
    let simples: usize = a.branch_points.iter().filter(|b| b.multiplicity == 1).map(|b| b.points).sum();
    ensure(doubles == 5 && simples == 2 && !higher, format!("{doubles} double, {simples} simple roots"))?;
    ensure(!a.split && a.branch_count == 2 && a.genus_normalization == 0 && a.node_count == 5, "cover summary")?;
    Ok("degree 12, five double and two simple roots, split=false, genus 0, 5 nodes".into())
}

fn locus_detection() -> Outcome {
    let t = Instant::now();
    let sel = cyclic_selection();
    for fam in shipped_families() {
        let samples = scan_family(&fam, &sel, 6, 9).map_err(|e| e.to_string())?;
        let Some((lo, hi)) = sign_changes(&samples).into_iter().next() else { continue };
        let tol = ratio(1, 1_000_000);
        let iso = isolate_root(&fam, &sel, 6, &lo, &hi, &tol).map_err(|e| e.to_string())?;
        let Isolation::Certificate(cert) = iso else {
            return Err("bisection hit an exact root; no certificate to check".into());
        };
        ensure(cert.width <= tol && &cert.hi - &cert.lo == cert.width, "certificate width")?;
        // endpoint signs recomputed from scratch
        let sign_at = |s: &Rational| -> Result<i32, String> {
            let cfg = fam.member(s).map_err(|e| e.to_string())?;
            Ok(sign_of(&humbert5_residual(&cfg, &sel, 6).map_err(|e| e.to_string())?.residual))
        };
        let (a, b) = (sign_at(&cert.lo)?, sign_at(&cert.hi)?);
        ensure(a == cert.sign_lo && b == cert.sign_hi && a * b < 0, "endpoint signs do not re-verify")?;
        ensure(verify_certificate(&fam, &sel, &cert).map_err(|e| e.to_string())?, "verify_certificate")?;
        within(t, Duration::from_secs(10))?;
        return Ok(format!("family {} root in [{}, {}], width {}", fam.name, cert.lo, cert.hi, cert.width));
    }
    Err("no shipped family shows a sign change".into())
}

fn splitting_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let lin = |r: i64| BinaryForm::from_ints(&[-r, 1]);
    for i in 0..1000 {
        let n = rng.gen_range(1..=5);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < n {
            let r = rng.gen_range(-50..=50);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let exps: Vec<usize> = (0..n).map(|_| 2 * rng.gen_range(1..=3)).collect();
        let mut factors: Vec<BinaryForm> = roots.iter().zip(&exps).map(|(r, e)| lin(*r).pow(*e)).collect();
        if rng.gen_bool(0.5) {
            factors.push(BinaryForm::u().pow(2));
        }
        let c = rng.gen_range(1..=7i64);
        let even = BinaryForm::product(&factors).scale(&q(c * c));
        let a = analyze_cover(&even).map_err(|e| e.to_string())?;
        ensure(a.split && a.branch_points.is_empty(), format!("form {i} did not split"))?;
        let k = rng.gen_range(0..n);
        factors[k] = lin(roots[k]).pow(exps[k] - 1);
        let odd = BinaryForm::product(&factors).mul(&lin(1000));
        let b = analyze_cover(&odd).map_err(|e| e.to_string())?;
        ensure(!b.split && !b.branch_points.is_empty(), format!("perturbed form {i} still split"))?;
    }
    Ok("1000 all-even forms split; each flips after one odd exponent".into())
}

fn residual_nonzero_without_each(c: &MotivicCycle) -> Result<(), String> {
    ensure(c.cocycle && c.total_divisor.is_zero(), format!("total divisor {}", c.total_divisor))?;
    for k in 0..c.components.len() {
        let rest = c.without(k).map_err(|e| e.to_string())?;
        ensure(!rest.total_divisor.is_zero(), format!("dropping component {k} leaves zero divisor"))?;
    }
    Ok(())
}

fn cycle_cocycle() -> Outcome {
    let cfg = preset_config();
    let sel = cyclic_selection();
    let phi = selection_curve(&cfg, &sel).map_err(|e| e.to_string())?;
    let mut n = 0;
    for p in sel {
        for r in sel {
            if p == r {
                continue;
            }
            let z = build_new_cycle(&cfg, &phi, p, r).map_err(|e| format!("P=q{p}, R=q{r}: {e}"))?;
            residual_nonzero_without_each(&z.cycle)?;
            n += 1;
        }
    }
    let models = [
        HyperellipticModel::from_roots(&[q(0), q(1), q(2), q(3), q(4)]).map_err(|e| e.to_string())?,
        HyperellipticModel::from_roots(&[q(-2), q(-1), q(0), q(1), q(2), q(3)]).map_err(|e| e.to_string())?,
    ];
    for m in &models {
        let w = m.rational_weierstrass_points();
        for i in 0..w.len() {
            for j in 0..w.len() {
                let r = &w[(i.max(j) + 1) % w.len()];
                if i == j || r == &w[i] || r == &w[j] {
                    continue;
                }
                let c = collino_cycle(m, &w[i], &w[j], r).map_err(|e| e.to_string())?;
                residual_nonzero_without_each(&c.cycle)?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} cycles with zero total divisor, none survive dropping a component"))
}

fn pushforward_relation() -> Outcome {
    let cfg = preset_config();
    let phi = selection_curve(&cfg, &cyclic_selection()).map_err(|e| e.to_string())?;
    let lab = |i, j| TwoTorsionLabel::new(i, j).unwrap();
    let z = build_new_cycle(&cfg, &phi, lab(1, 2), lab(2, 3)).map_err(|e| e.to_string())?;
    let rep = pushforward_check(&z).map_err(|e| e.to_string())?;
    for c in &rep.checks {
        ensure(c.passed, format!("check {} failed: {}", c.name, c.detail))?;
    }
    let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
    for required in ["branch-over-node", "function-pullback", "divisor-2P1-2P2", "image-is-node", "genus"] {
        ensure(names.contains(&required), format!("missing check {required}"))?;
    }
    ensure(rep.factor == 2, format!("factor {}", rep.factor))?;
    ensure(rep.genus == 4 && rep.branch_form.degree() == 10, format!("genus {}", rep.genus))?;
    Ok(format!("{} checks pass, factor 2, genus 4 from 10 branch points", rep.checks.len()))
}

fn humbert_values() -> Outcome {
    let d = |a, b| humbert_invariant(DivisorClass { theta_pairing: a, self_intersection: b }).map_err(|e| e.to_string());
    let v = (d(2, 2)?, d(1, 0)?, d(3, 2)?);
    ensure(v == (0, 1, 5), format!("got {v:?}"))?;
    Ok("Δ(θ)=0, Δ(1,0)=1, Δ(3,2)=5".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 curve counts", curve_counts),
        ("2 characteristic numbers", characteristic_numbers),
        ("3 configuration properties", configuration_properties),
        ("4 off-locus cover structure", off_locus_cover),
        ("5 locus detection", locus_detection),
        ("6 splitting criterion", splitting_criterion),
        ("7 cycle cocycle", cycle_cocycle),
        ("8 pushforward relation", pushforward_relation),
        ("9 Humbert invariant", humbert_values),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({:.2?})", t.elapsed()),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    println!("suite time {:.2?}", start.elapsed());
    assert!(start.elapsed() < Duration::from_secs(180), "suite over three minutes");
    assert!(failed.is_empty(), "failed: {failed:?}");
}

#[test]
fn cli_pipeline_and_exit_codes() {
    let dir = std::env::temp_dir().join(format!("kummer-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let (code, _, err) = kummer(&["gen-config", "--params", "0,1,-1,2,-2,3", "--out", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = kummer(&["residual", "--config", cfg.to_str().unwrap(), "--selection", "cyclic", "--line", "6"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["residual"], "167184");

    let (code, _, err) = kummer(&["residual", "--selection", "cyclic", "--line", "1"]);
    assert_eq!(code, 1);
    let e: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(e["error"], "SelectionTouchesLine");

    let (code, _, _) = kummer(&["count-nd", "--bogus"]);
    assert_eq!(code, 2);
    let (a, b) = (kummer(&["scan", "--grid", "12"]).1, kummer(&["scan", "--grid", "12"]).1);
    assert_eq!(a, b);
    std::fs::remove_dir_all(&dir).ok();
}
