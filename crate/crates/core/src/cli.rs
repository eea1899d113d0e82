//! Experiment runner behind the `qiforge` binary.
//!
//! A run is described by one [`ExperimentConfig`]; command-line flags are
//! translated into the same structure, so `qiforge run --config x.json` and
//! the individual subcommands share one code path. Every run writes its
//! resolved config next to its results.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::ball::{Ball, Limits};
use crate::bs::{self, BsModel};
use crate::chain::{
    boundary_1, folner_statistic, DecisionRule, EdgeChain, Subset, UFChain, VanishingReport, Verdict,
};
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::folner::{profile, standard_family, write_profile_csv, FolnerFamily};
use crate::group::MarkedGroup;
use crate::matching::{build_window, classify_growth, max_matching, Growth, GrowthRule, MatchingSummary};
use crate::qi::{self, AuditWindow, Constants, QIMap};

/// Parses a map description.
///
/// * `id:G`, identity of `G`
/// * `floor:n:G[:coord]`, coordinate floor map on a lattice group
/// * `incl:H`, inclusion of a sublattice marking into its standard group
/// * `fix:n[:H]`, inclusion after the floor map on `H` (default `H = nZ`)
/// * `proj:k` and `chart:k`, the two maps `Z × Z/k → Z`
/// * `fc:m:n`, the coset-wise n-to-1 map on `BS(1,m)`
/// * `extend:n`, the floor map on `nZ` extended over the cosets of `nZ ⊂ Z`
pub fn parse_map(spec: &str) -> Result<QIMap> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::Parse(format!("expected a positive integer in map spec, got '{s}'")))
    };
    let grp = |s: &str| -> Result<MarkedGroup> { s.parse() };
    let map = match parts.as_slice() {
        ["id", g] => QIMap::identity(&grp(g)?),
        ["floor", n, g] => qi::floor_on(&grp(g)?, num(n)?, 1)?,
        ["floor", n, g, c] => qi::floor_on(&grp(g)?, num(n)?, num(c)? as usize)?,
        ["incl", h] => {
            let h = grp(h)?;
            qi::inclusion_map(&h, &h.standard())?
        }
        ["fix", n] => fix_map(num(n)?, &grp(&format!("{n}Z"))?)?,
        ["fix", n, h] => fix_map(num(n)?, &grp(h)?)?,
        ["proj", k] => qi::projection(num(k)?)?,
        ["chart", k] => qi::chart(num(k)?)?,
        ["fc", m, n] => qi::bs_floor(num(m)? as u32, num(n)?)?,
        ["extend", n] => extension_map(num(n)?, 1000)?,
        _ => return Err(Error::Parse(format!("unknown map spec '{spec}'"))),
    };
    Ok(map.with_name(spec))
}

fn fix_map(n: u64, h: &MarkedGroup) -> Result<QIMap> {
    let coord = match h.marking() {
        crate::group::Marking::Sublattice { coord, .. } => coord,
        crate::group::Marking::Standard => 1,
    };
    qi::compose(&qi::inclusion_map(h, &h.standard())?, &qi::floor_on(h, n, coord)?)
}

/// `nZ ≅ Z` extended over the cosets `nZ + r`, checked on `[-check, check]`.
pub fn extension_map(n: u64, check: u32) -> Result<QIMap> {
    let z: MarkedGroup = "Z".parse()?;
    let h: MarkedGroup = format!("{n}Z").parse()?;
    let reps: Vec<GroupElement> = (0..n as i64).map(|r| GroupElement::Lattice(vec![r])).collect();
    let window = Ball::new(&z, check, 4 * check as usize + 4)?;
    qi::extend_by_cosets(&z, &qi::contraction(&h)?, &reps, Constants::new(n as i64, 1), &window)
}

/// Parses a chain description: `indicator:H`, `complement:H` (`[G] − [H]`),
/// `boundary:H` (boundary of the edges `(x, x·t)` for `x ∈ H`) or
/// `excess:MAP` (`f_*[X] − [Y]`).
pub fn parse_chain(spec: &str, window: u32) -> Result<UFChain> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("chain spec '{spec}' needs a ':'")))?;
    let chain = match kind {
        "indicator" => UFChain::subgroup(&rest.parse()?),
        "complement" => {
            let h: MarkedGroup = rest.parse()?;
            UFChain::difference(UFChain::whole(&h.standard()), UFChain::subgroup(&h))?
        }
        "boundary" => {
            let h: MarkedGroup = rest.parse()?;
            let g = h.standard();
            let step = g.generators()[0].element.clone();
            let e = EdgeChain::translates(&g, Subset::Subgroup(h), step, 1)?;
            boundary_1(&e, &Ball::new(&g, window, crate::ball::DEFAULT_BALL_BUDGET)?)?
        }
        "excess" => {
            let f = parse_map(rest)?;
            UFChain::difference(UFChain::pushforward(&f)?, UFChain::whole(f.target()))?
        }
        _ => return Err(Error::Parse(format!("unknown chain kind '{kind}'"))),
    };
    Ok(chain.with_label(spec))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Ball,
    Folner,
    UfTest,
    QiAudit,
    Rstar,
    Reproduce,
}

/// A complete description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub map: Option<String>,
    #[serde(default)]
    pub chain: Option<String>,
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub radius: Option<u32>,
    #[serde(default)]
    pub i_max: Option<u32>,
    #[serde(default)]
    pub scales: Option<Vec<u32>>,
    #[serde(default)]
    pub r_max: Option<u32>,
    /// Additive constant used when fitting `K` in audits.
    #[serde(default)]
    pub c_fixed: Option<i64>,
    #[serde(default)]
    pub decision: DecisionRule,
    #[serde(default)]
    pub growth: GrowthRule,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_out() -> PathBuf {
    PathBuf::from("qiforge-out")
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            group: None,
            map: None,
            chain: None,
            experiment: None,
            radius: None,
            i_max: None,
            scales: None,
            r_max: None,
            c_fixed: None,
            decision: DecisionRule::default(),
            growth: GrowthRule::default(),
            limits: Limits::default(),
            out: default_out(),
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Applies `QIFORGE_BUDGET` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var("QIFORGE_BUDGET") {
            self.limits.ball_elements = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("QIFORGE_BUDGET must be an integer, got '{v}'")))?;
        }
        Ok(())
    }

    fn need<'a, T>(&self, v: &'a Option<T>, what: &str) -> Result<&'a T> {
        v.as_ref()
            .ok_or_else(|| Error::Config(format!("{:?} needs '{what}'", self.command)))
    }
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub inconclusive: bool,
    pub summary: String,
}

impl Outcome {
    fn merge(&mut self, other: Outcome) {
        self.files.extend(other.files);
        self.inconclusive |= other.inconclusive;
        if !other.summary.is_empty() {
            if !self.summary.is_empty() {
                self.summary.push('\n');
            }
            self.summary.push_str(&other.summary);
        }
    }
}

struct Sink<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Sink<'a> {
    fn new(dir: &'a Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Sink { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    fn finish(self, inconclusive: bool, summary: String) -> Outcome {
        Outcome {
            files: self.files,
            inconclusive,
            summary,
        }
    }
}

/// Executes a resolved config.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut sink = Sink::new(&cfg.out)?;
    sink.json("config.json", cfg)?;
    let body = match cfg.command {
        Command::Ball => cmd_ball(cfg, &cfg.out)?,
        Command::Folner => cmd_folner(cfg, &cfg.out)?,
        Command::UfTest => cmd_uf_test(cfg, &cfg.out)?,
        Command::QiAudit => cmd_qi_audit(cfg, &cfg.out)?,
        Command::Rstar => cmd_rstar(cfg, &cfg.out)?,
        Command::Reproduce => cmd_reproduce(cfg.need(&cfg.experiment, "experiment")?, cfg, &cfg.out)?,
    };
    let mut out = sink.finish(false, String::new());
    out.merge(body);
    Ok(out)
}

fn cmd_ball(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let g: MarkedGroup = cfg.need(&cfg.group, "group")?.parse()?;
    let r = *cfg.need(&cfg.radius, "radius")?;
    let ball = Ball::new(&g, r, cfg.limits.ball_elements)?;
    let mut sink = Sink::new(dir)?;
    sink.write("ball.csv", |w| ball.write_csv(w))?;
    Ok(sink.finish(false, format!("ball({g}, {r}): {} elements", ball.len())))
}

fn family_for(g: &MarkedGroup) -> Result<FolnerFamily> {
    if g.family().is_amenable() {
        standard_family(g)
    } else {
        Ok(FolnerFamily::word_balls(g))
    }
}

fn cmd_folner(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let g: MarkedGroup = cfg.need(&cfg.group, "group")?.parse()?;
    let fam = family_for(&g)?;
    let i_max = cfg.i_max.unwrap_or_else(|| fam.default_max_index(cfg.limits.ball_elements));
    let rows = profile(&fam, i_max, cfg.limits.ball_elements)?;
    let mut sink = Sink::new(dir)?;
    sink.write("folner.csv", |w| write_profile_csv(&rows, w))?;
    let last = rows.last().map_or(0.0, |r| r.ratio_f64());
    Ok(sink.finish(false, format!("{g}: {} rows, final ratio {last:.6}", rows.len())))
}

fn vanishing(
    chain: &UFChain,
    i_max: u32,
    cfg: &ExperimentConfig,
    sink: &mut Sink,
    name: &str,
) -> Result<VanishingReport> {
    let fam = standard_family(&chain.group().standard())?;
    let rows = folner_statistic(chain, &fam, i_max, cfg.limits.ball_elements)?;
    let rep = VanishingReport::new(chain, &fam, rows, cfg.decision)?;
    sink.write(name, |w| rep.write_csv(w))?;
    Ok(rep)
}

fn cmd_uf_test(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let i_max = *cfg.need(&cfg.i_max, "i_max")?;
    let chain = parse_chain(cfg.need(&cfg.chain, "chain")?, i_max + 2)?;
    if let Some(g) = &cfg.group {
        let g: MarkedGroup = g.parse()?;
        if g != *chain.group() {
            return Err(Error::GroupMismatch(format!("chain lives on {}, not {g}", chain.group())));
        }
    }
    let mut sink = Sink::new(dir)?;
    let rep = vanishing(&chain, i_max, cfg, &mut sink, "vanishing.csv")?;
    Ok(sink.finish(
        rep.verdict == Verdict::Inconclusive,
        format!("{}: {}", chain.label(), rep.verdict),
    ))
}

#[derive(Serialize)]
struct AuditSummary {
    audit: qi::DistortionReport,
    c_fixed: String,
    k_fit: Option<String>,
    interior_fibers: usize,
    fiber_sizes: Vec<u64>,
}

fn ratio_text(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn audit_map(f: &QIMap, radius: u32, c_fixed: i64, cfg: &ExperimentConfig, sink: &mut Sink, tag: &str) -> Result<bool> {
    let reach = 2 * radius;
    let window = AuditWindow::new(f, radius, reach, cfg.limits.ball_elements)?;
    let report = qi::verify_constants(f, f.claimed(), &window)?;
    let k_fit = qi::fit_constants(f, Ratio::from_integer(c_fixed), &window)?;
    let census = if f.source() == f.target() {
        qi::fiber_census(f, window.points(), window.points())
    } else {
        let tw = Ball::new(f.target(), radius, cfg.limits.ball_elements)?;
        qi::fiber_census(f, window.points(), &tw)
    };
    let mut sizes: Vec<u64> = census.interior().map(|e| e.count).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let pass = report.pass;
    let summary = AuditSummary {
        audit: report,
        c_fixed: c_fixed.to_string(),
        k_fit: k_fit.as_ref().map(ratio_text),
        interior_fibers: census.interior().count(),
        fiber_sizes: sizes,
    };
    sink.json(&format!("audit{tag}.json"), &summary)?;
    sink.write(&format!("fibers{tag}.csv"), |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["target", "count", "interior"])?;
        for e in &census.entries {
            c.write_record([f.target().format(&e.target), e.count.to_string(), e.interior.to_string()])?;
        }
        c.flush()?;
        Ok(())
    })?;
    Ok(pass)
}

fn cmd_qi_audit(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let f = parse_map(cfg.need(&cfg.map, "map")?)?;
    let radius = *cfg.need(&cfg.radius, "radius")?;
    let c_fixed = cfg.c_fixed.unwrap_or_else(|| f.claimed().c.ceil().to_integer());
    let mut sink = Sink::new(dir)?;
    let pass = audit_map(&f, radius, c_fixed, cfg, &mut sink, "")?;
    if let qi::MapRule::BsFloor { n } = f.rule() {
        let model = BsModel::from_group(f.source())?;
        let ball = Ball::new(f.source(), radius, cfg.limits.ball_elements)?;
        sink.write("bs_window.csv", |w| model.write_window_csv(*n, &ball, w))?;
    }
    Ok(sink.finish(false, format!("{}: claimed constants {}", f.name(), if pass { "pass" } else { "fail" })))
}

fn rstar_files(f: &QIMap, cfg: &ExperimentConfig, sink: &mut Sink, tag: &str) -> Result<crate::matching::RStarReport> {
    let scales = cfg.scales.clone().unwrap_or_else(|| vec![40, 80, 160]);
    let rep = classify_growth(f, &scales, cfg.r_max, &cfg.growth, &cfg.limits)?;
    sink.write(&format!("rstar{tag}.csv"), |w| rep.write_csv(w))?;
    sink.json(&format!("rstar{tag}.json"), &rep)?;
    let summaries = rep
        .rows
        .iter()
        .filter_map(|row| row.r_star.map(|r| (row.l, r)))
        .map(|(l, r)| {
            let w = build_window(f, l, r, &cfg.limits)?;
            Ok(MatchingSummary::new(&w, &max_matching(&w)))
        })
        .collect::<Result<Vec<_>>>()?;
    sink.json(&format!("matching{tag}.json"), &summaries)?;
    Ok(rep)
}

fn cmd_rstar(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let f = parse_map(cfg.need(&cfg.map, "map")?)?;
    let mut sink = Sink::new(dir)?;
    let rep = rstar_files(&f, cfg, &mut sink, "")?;
    let rs: Vec<String> = rep
        .rows
        .iter()
        .map(|r| format!("L={} R*={}", r.l, r.r_star.map_or("none".into(), |v| v.to_string())))
        .collect();
    Ok(sink.finish(
        rep.verdict == Growth::Inconclusive,
        format!("{}: {} -> {}", f.name(), rs.join(", "), rep.verdict),
    ))
}

/// Ids accepted by `reproduce`.
pub const EXPERIMENTS: &[&str] = &[
    "thm-3.6-zn",
    "thm-3.8-kernel",
    "sec4-floor",
    "sec4-extend",
    "sec4-bs",
    "thm-3.5-class",
    "folner-profiles",
];

fn cmd_reproduce(id: &str, cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    let mut sink = Sink::new(dir)?;
    let mut lines = Vec::new();
    let mut inconclusive = false;
    let mut expect = |ok: bool, line: String, lines: &mut Vec<String>| {
        inconclusive |= !ok;
        lines.push(format!("{line} [{}]", if ok { "as expected" } else { "unexpected" }));
    };
    match id {
        "thm-3.6-zn" => {
            for n in [2, 3] {
                let f = parse_map(&format!("incl:{n}Z"))?;
                let rep = rstar_files(&f, cfg, &mut sink, &format!("_{n}Z"))?;
                expect(rep.verdict == Growth::Linear, format!("incl:{n}Z growth {}", rep.verdict), &mut lines);
            }
        }
        "thm-3.8-kernel" => {
            let proj = parse_map("proj:2")?;
            let rep = rstar_files(&proj, cfg, &mut sink, "_proj")?;
            expect(rep.verdict == Growth::Linear, format!("proj:2 growth {}", rep.verdict), &mut lines);
            let chart = parse_map("chart:2")?;
            let rep = rstar_files(&chart, cfg, &mut sink, "_chart")?;
            let zero = rep.rows.iter().all(|r| r.r_star == Some(0));
            expect(zero, format!("chart:2 R* zero at every L: {zero}"), &mut lines);
        }
        "sec4-floor" => {
            let radius = cfg.radius.unwrap_or(500);
            for n in [2, 3, 5] {
                let f = parse_map(&format!("floor:{n}:Z"))?;
                let pass = audit_map(&f, radius, 1, cfg, &mut sink, &format!("_floor{n}"))?;
                expect(pass, format!("floor:{n}:Z with K={n}, C=1 on radius {radius}: pass={pass}"), &mut lines);
            }
        }
        "sec4-extend" => {
            let ext = extension_map(2, 1000)?;
            let f2 = qi::floor_map_z(2)?;
            let agree = (-1000..=1000)
                .map(|k| GroupElement::Lattice(vec![k]))
                .all(|x| ext.apply(&x) == f2.apply(&x));
            sink.write("extend.csv", |w| {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["x", "extension", "floor"])?;
                for k in -20..=20 {
                    let x = GroupElement::Lattice(vec![k]);
                    c.write_record([k.to_string(), ext.target().format(&ext.apply(&x)), f2.target().format(&f2.apply(&x))])?;
                }
                c.flush()?;
                Ok(())
            })?;
            expect(agree, format!("extension equals floor2 on [-1000,1000]: {agree}"), &mut lines);
            let fix = parse_map("fix:2")?;
            let mut c2 = cfg.clone();
            c2.scales = Some(cfg.scales.clone().unwrap_or_else(|| vec![40, 80, 160, 320]));
            let rep = rstar_files(&fix, &c2, &mut sink, "_fix")?;
            expect(rep.verdict == Growth::Bounded, format!("fix:2 growth {}", rep.verdict), &mut lines);
        }
        "sec4-bs" => {
            let mut ks = Vec::new();
            for radius in [6, 8] {
                let a = bs::audit_f_c(2, 2, radius, 4, cfg.limits.ball_elements)?;
                let ok = a.census.interior_constant(2) && a.levels_preserved && a.reps_within_half_width;
                sink.json(&format!("audit_r{radius}.json"), &a.distortion)?;
                expect(
                    ok,
                    format!(
                        "fc:2:2 radius {radius}: interior fibers 2, levels kept, reps bounded: {ok}; K_emp(C=4)={}",
                        a.k_emp.as_ref().map_or("none".into(), ratio_text)
                    ),
                    &mut lines,
                );
                ks.push(a.k_emp);
            }
            let stable = matches!((ks[0], ks[1]), (Some(k6), Some(k8)) if k8 * 4 <= k6 * 5);
            expect(stable, format!("K_emp(8) <= 1.25 K_emp(6): {stable}"), &mut lines);
            let model = BsModel::new(2)?;
            let ball = Ball::new(model.group(), 3, cfg.limits.ball_elements)?;
            sink.write("bs_window.csv", |w| model.write_window_csv(2, &ball, w))?;
        }
        "thm-3.5-class" => {
            let cases: [(&str, u32, Verdict); 4] = [
                ("complement:2Z", 100, Verdict::EvidenceNonzero),
                ("boundary:2Z", 100, Verdict::EvidenceZero),
                ("complement:2ZxZ", 60, Verdict::EvidenceNonzero),
                ("excess:floor:2:Z", 60, Verdict::EvidenceNonzero),
            ];
            for (k, (spec, i_max, want)) in cases.iter().enumerate() {
                let chain = parse_chain(spec, i_max + 2)?;
                let rep = vanishing(&chain, *i_max, cfg, &mut sink, &format!("vanishing_{k}.csv"))?;
                expect(rep.verdict == *want, format!("{spec}: {}", rep.verdict), &mut lines);
            }
        }
        "folner-profiles" => {
            for (g, i_max) in [("Z", 50u32), ("Z^2", 30), ("ZxC2", 30), ("BS(1,2)", 7), ("F_2", 6)] {
                let grp: MarkedGroup = g.parse()?;
                let fam = family_for(&grp)?;
                let rows = profile(&fam, i_max, cfg.limits.ball_elements)?;
                let name = g.replace(['(', ')', ',', '^'], "_");
                sink.write(&format!("folner_{name}.csv"), |w| write_profile_csv(&rows, w))?;
                let last = rows.last().map_or(0.0, |r| r.ratio_f64());
                let ok = if grp.family().is_amenable() { last < rows[0].ratio_f64() } else { last >= 1.5 };
                expect(ok, format!("{g}: final ratio {last:.6}"), &mut lines);
            }
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown experiment '{id}'; known: {}",
                EXPERIMENTS.join(", ")
            )))
        }
    }
    let summary = lines.join("\n");
    sink.write("summary.txt", |w| {
        writeln!(w, "{summary}")?;
        Ok(())
    })?;
    Ok(sink.finish(inconclusive, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_specs() {
        let z = |v| GroupElement::Lattice(vec![v]);
        assert_eq!(parse_map("floor:2:Z").unwrap().apply(&z(5)), z(2));
        assert_eq!(parse_map("incl:2Z").unwrap().apply(&z(4)), z(4));
        assert_eq!(parse_map("fix:2").unwrap().apply(&z(6)), z(2));
        assert_eq!(parse_map("extend:3").unwrap().apply(&z(-1)), z(-1));
        assert_eq!(parse_map("chart:2").unwrap().name(), "chart:2");
        assert!(parse_map("fc:2:2").is_ok());
        assert!(parse_map("floor:2:Z^2:2").is_ok());
        assert!(matches!(parse_map("warp:2"), Err(Error::Parse(_))));
        assert!(matches!(parse_map("floor:x:Z"), Err(Error::Parse(_))));
    }

    #[test]
    fn chain_specs() {
        let z = |v| GroupElement::Lattice(vec![v]);
        assert_eq!(parse_chain("complement:2Z", 10).unwrap().coeff(&z(3)).unwrap(), 1);
        assert_eq!(parse_chain("indicator:3Z", 10).unwrap().coeff(&z(3)).unwrap(), 1);
        assert_eq!(parse_chain("boundary:2Z", 10).unwrap().coeff(&z(3)).unwrap(), 1);
        assert_eq!(parse_chain("excess:floor:2:Z", 10).unwrap().coeff(&z(3)).unwrap(), 1);
        assert!(parse_chain("nothing", 10).is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let ok = ExperimentConfig::from_json(r#"{"command":"ball","group":"Z","radius":3}"#).unwrap();
        assert_eq!(ok.radius, Some(3));
        assert_eq!(ok.limits, Limits::default());
        let bad = ExperimentConfig::from_json(r#"{"command":"ball","grup":"Z"}"#);
        assert!(matches!(bad, Err(Error::Config(_))));
    }

    #[test]
    fn missing_field_is_a_config_error() {
        let cfg = ExperimentConfig::new(Command::Ball);
        assert!(matches!(cmd_ball(&cfg, Path::new("/nonexistent")), Err(Error::Config(_))));
    }
}
