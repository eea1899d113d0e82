//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qiforge::ball::{Ball, Limits};
use qiforge::bs::audit_f_c;
use qiforge::chain::{boundary_1, decide_class, folner_statistic, DecisionRule, EdgeChain, Subset, UFChain, Verdict};
use qiforge::element::GroupElement;
use qiforge::folner::{profile, standard_family, FolnerFamily};
use qiforge::group::MarkedGroup;
use qiforge::matching::{
    build_window, classify_growth, max_matching, r_star, r_star_linear, validate, Growth, GrowthRule,
};
use qiforge::qi::{self, AuditWindow, Constants, QIMap};

type Outcome = Result<String, String>;

fn grp(s: &str) -> MarkedGroup {
    s.parse().unwrap()
}

fn int(v: i64) -> GroupElement {
    GroupElement::Lattice(vec![v])
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    check(
        start.elapsed() <= budget,
        format!("took {:.1}s, limit {}s", start.elapsed().as_secs_f64(), budget.as_secs()),
    )
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn floor_audit() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for n in [2u64, 3, 5] {
        let f = qi::floor_map_z(n).map_err(e)?;
        let w = AuditWindow::new(&f, 500, 1000, 10_000).map_err(e)?;
        let rep = qi::verify_constants(&f, Constants::new(n as i64, 1), &w).map_err(e)?;
        check(rep.pass, format!("floor{n} fails at {:?}", rep.worst_pair))?;
        let census = qi::fiber_census(&f, w.points(), w.points());
        let interior = census.interior().count();
        check(interior > 0 && census.interior_constant(n), format!("floor{n} census"))?;
        notes.push(format!("n={n}: {} pairs, {interior} interior fibers", rep.pairs_checked));
    }
    within(Duration::from_secs(10), start)?;
    Ok(notes.join("; "))
}

fn inclusion_growth() -> Outcome {
    let start = Instant::now();
    let lim = Limits::default();
    let mut notes = Vec::new();
    for (n, lo, hi) in [(2u64, 0.4, 0.6), (3, 0.55, 0.78)] {
        let f = qi::inclusion_map(&grp(&format!("{n}Z")), &grp("Z")).map_err(e)?;
        let rep = classify_growth(&f, &[40, 80, 160], None, &GrowthRule::default(), &lim).map_err(e)?;
        let slope = rep.slope.unwrap_or(f64::NAN);
        for row in &rep.rows {
            let centre = row.l as f64 * (n - 1) as f64 / n as f64;
            let r = row.r_star.ok_or(format!("{n}Z: no R* at L={}", row.l))? as f64;
            check((r - centre).abs() <= 2.0, format!("{n}Z: R*({}) = {r}, expected {centre:.1}±2", row.l))?;
        }
        check(rep.verdict == Growth::Linear, format!("{n}Z verdict {}", rep.verdict))?;
        check((lo..=hi).contains(&slope), format!("{n}Z slope {slope:.3} outside [{lo}, {hi}]"))?;
        let rs: Vec<String> = rep.rows.iter().map(|r| format!("{}", r.r_star.unwrap())).collect();
        notes.push(format!("{n}Z: R*={} slope={slope:.3}", rs.join(",")));
    }
    within(Duration::from_secs(60), start)?;
    Ok(notes.join("; "))
}

fn composite_fix() -> Outcome {
    let h = grp("2Z");
    let f = qi::compose(
        &qi::inclusion_map(&h, &grp("Z")).map_err(e)?,
        &qi::floor_on(&h, 2, 1).map_err(e)?,
    )
    .map_err(e)?;
    let rep = classify_growth(&f, &[40, 80, 160, 320], None, &GrowthRule::default(), &Limits::default())
        .map_err(e)?;
    for row in &rep.rows {
        check(row.r_star.is_some_and(|r| r <= 2), format!("R*({}) = {:?}", row.l, row.r_star))?;
    }
    check(rep.verdict == Growth::Bounded, format!("verdict {}", rep.verdict))?;
    let rs: Vec<String> = rep.rows.iter().map(|r| format!("{}", r.r_star.unwrap())).collect();
    Ok(format!("R*={} verdict bounded", rs.join(",")))
}

fn kernel_dichotomy() -> Outcome {
    let lim = Limits::default();
    let proj = qi::projection(2).map_err(e)?;
    let rep = classify_growth(&proj, &[40, 80, 160], None, &GrowthRule::default(), &lim).map_err(e)?;
    check(rep.verdict == Growth::Linear, format!("projection verdict {}", rep.verdict))?;
    let chart = qi::chart(2).map_err(e)?;
    for l in [40, 80, 160, 320] {
        let r = r_star(&chart, l, 4, &lim).map_err(e)?;
        check(r == Some(0), format!("chart R*({l}) = {r:?}"))?;
    }
    let rs: Vec<String> = rep.rows.iter().map(|r| format!("{}", r.r_star.unwrap())).collect();
    Ok(format!(
        "projection R*={} slope={:.3} linear; chart R*=0",
        rs.join(","),
        rep.slope.unwrap()
    ))
}

fn vanishing_statistic() -> Outcome {
    let z = grp("Z");
    let fam = standard_family(&z).map_err(e)?;
    let c = UFChain::difference(UFChain::whole(&z), UFChain::subgroup(&grp("2Z"))).map_err(e)?;
    let rows = folner_statistic(&c, &fam, 100, 10_000).map_err(e)?;
    for r in rows.iter().filter(|r| r.i % 2 == 0) {
        check(r.ratio == Ratio::new(r.i as u64, 2), format!("ratio at i={} is {}", r.i, r.ratio))?;
    }
    let v1 = decide_class(&rows, &DecisionRule::default()).map_err(e)?;
    check(v1 == Verdict::EvidenceNonzero, format!("[Z]-[2Z] verdict {v1}"))?;

    let edges = EdgeChain::translates(&z, Subset::Subgroup(grp("2Z")), int(1), 1).map_err(e)?;
    let d = boundary_1(&edges, &Ball::new(&z, 110, 1000).map_err(e)?).map_err(e)?;
    let rows = folner_statistic(&d, &fam, 100, 10_000).map_err(e)?;
    check(rows.iter().all(|r| r.sum_abs <= 1), "boundary chain sum exceeds 1")?;
    let v2 = decide_class(&rows, &DecisionRule::default()).map_err(e)?;
    check(v2 == Verdict::EvidenceZero, format!("boundary verdict {v2}"))?;
    Ok(format!("ratio(100)={}; verdicts {v1} / {v2}", rows_ratio_note(100)))
}

fn rows_ratio_note(i: u64) -> String {
    format!("{}", Ratio::new(i, 2))
}

fn folner_profiles() -> Outcome {
    let start = Instant::now();
    let budget = 2_000_000;
    let z = profile(&standard_family(&grp("Z")).map_err(e)?, 50, budget).map_err(e)?;
    for r in &z {
        check(r.ratio == Ratio::new(2, 2 * r.i as u64 + 1), format!("Z ratio at {}", r.i))?;
    }
    let bs = profile(&standard_family(&grp("BS(1,2)")).map_err(e)?, 7, budget).map_err(e)?;
    let tail = &bs[2..];
    check(tail.windows(2).all(|w| w[1].ratio < w[0].ratio), "BS ratios not strictly decreasing for N=3..7")?;
    let (r3, r7) = (bs[2].ratio, bs[6].ratio);
    check(r7 < r3 / 2, format!("ratio(7)={r7} not below ratio(3)/2={}", r3 / 2))?;
    let f2 = profile(&FolnerFamily::word_balls(&grp("F_2")), 6, budget).map_err(e)?;
    let min_f2 = f2.iter().map(|r| r.ratio_f64()).fold(f64::INFINITY, f64::min);
    check(min_f2 >= 1.5, format!("F_2 minimum ratio {min_f2}"))?;
    within(Duration::from_secs(120), start)?;
    Ok(format!(
        "BS ratio(3)={:.4} ratio(7)={:.4}; F_2 min ratio {min_f2:.3}",
        bs[2].ratio_f64(),
        bs[6].ratio_f64()
    ))
}

fn bs_map() -> Outcome {
    let budget = 2_000_000;
    let a8 = audit_f_c(2, 2, 8, 4, budget).map_err(e)?;
    let a6 = audit_f_c(2, 2, 6, 4, budget).map_err(e)?;
    let interior = a8.census.interior().count();
    check(interior > 0 && a8.census.interior_constant(2), "interior fiber count is not 2")?;
    check(a8.levels_preserved, "level changed")?;
    check(a8.reps_within_half_width, "representative outside half width")?;
    let (k8, k6) = (
        a8.k_emp.ok_or("K_emp(8) undefined")?,
        a6.k_emp.ok_or("K_emp(6) undefined")?,
    );
    check(k8 * 4 <= k6 * 5, format!("K_emp(8)={k8} exceeds 1.25·K_emp(6)={}", k6 * 5 / 4))?;
    Ok(format!("{interior} interior fibers; K_emp(6)={k6} K_emp(8)={k8}"))
}

fn certificate_suite() -> Outcome {
    let lim = Limits::default();
    let maps: Vec<QIMap> = vec![
        qi::inclusion_map(&grp("2Z"), &grp("Z")).map_err(e)?,
        qi::inclusion_map(&grp("3Z"), &grp("Z")).map_err(e)?,
        qi::floor_map_z(2).map_err(e)?,
        qi::floor_map_z(3).map_err(e)?,
        qi::projection(2).map_err(e)?,
        qi::projection(3).map_err(e)?,
        qi::chart(2).map_err(e)?,
        qi::inclusion_map(&grp("2ZxZ"), &grp("Z^2")).map_err(e)?,
        qi::floor_map_zm(2, 1, 2).map_err(e)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut violators, mut matchings) = (0, 0);
    for trial in 0..100 {
        let f = &maps[rng.gen_range(0..maps.len())];
        let l = rng.gen_range(2..=10);
        let r = rng.gen_range(0..=l);
        let w = build_window(f, l, r, &lim).map_err(e)?;
        let res = max_matching(&w);
        validate(&w, &res).map_err(|err| format!("trial {trial} ({f}, L={l}, R={r}): {err}"))?;
        matchings += 1;
        for v in res.target_violator.iter().chain(res.source_violator.iter()) {
            check(v.is_sound(&w), format!("trial {trial}: unsound violator for {f}"))?;
            violators += 1;
        }
        let rmax = 2 * l;
        let (b, s) = (
            r_star(f, l, rmax, &lim).map_err(e)?,
            r_star_linear(f, l, rmax, &lim).map_err(e)?,
        );
        check(b == s, format!("trial {trial}: binary {b:?} vs linear {s:?} for {f} at L={l}"))?;
    }
    Ok(format!("{matchings} matchings validated, {violators} violators recounted"))
}

fn coset_extension() -> Outcome {
    let z = grp("Z");
    let window = Ball::new(&z, 1000, 10_000).map_err(e)?;
    let ext = qi::extend_by_cosets(
        &z,
        &qi::contraction(&grp("2Z")).map_err(e)?,
        &[int(0), int(1)],
        Constants::new(2, 1),
        &window,
    )
    .map_err(e)?;
    let f2 = qi::floor_map_z(2).map_err(e)?;
    for k in -1000..=1000 {
        check(ext.apply(&int(k)) == f2.apply(&int(k)), format!("differs at {k}"))?;
    }
    Ok("agrees on [-1000, 1000]".into())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("floor-map audit", floor_audit),
        ("inclusion R* growth", inclusion_growth),
        ("composite fix bounded", composite_fix),
        ("finite-kernel dichotomy", kernel_dichotomy),
        ("vanishing statistic", vanishing_statistic),
        ("Følner profiles", folner_profiles),
        ("BS(1,2) n-to-1 map", bs_map),
        ("certificate soundness", certificate_suite),
        ("coset extension", coset_extension),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.2}s) {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.2}s) {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
