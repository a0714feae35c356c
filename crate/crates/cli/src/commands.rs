use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use grasscat::ar_tubes::{ar_sequence, tau_orbit, tube_census_with, TauOrbit, TubeCensus};
use grasscat::census::{self, CensusOptions, CensusReport};
use grasscat::cm::{build_profile, lattice_diagram_data, module_a_vector, validate_relations, CMModuleRep};
use grasscat::diagram;
use grasscat::homological::{
    ext1_with, hom_space, identify_rank2, is_indecomposable, is_rigid_with, syzygy, top, TruncPolicy,
};
use grasscat::rims::{parse_profile, parse_rim, ArMiddle, Profile};
use grasscat::roots::{classify_module_root, enumerate_real_roots, q_value, root_coordinates, RootClass};
use grasscat::Error;

use crate::{Cli, Command, Format};

/// Bad arguments that clap cannot see, such as a precision below `n`.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A report was produced but disagrees with the embedded fixtures.
#[derive(Debug)]
pub struct FixtureMismatch {
    pub output: String,
    pub diffs: Vec<String>,
}

impl std::fmt::Display for FixtureMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "fixture mismatch: {}", self.diffs.join("; "))
    }
}

impl std::error::Error for FixtureMismatch {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    if e.downcast_ref::<FixtureMismatch>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::TruncationUnstable(_)) => 4,
        Some(
            Error::Parse(_)
            | Error::InvalidRim(_)
            | Error::MismatchedAmbient(..)
            | Error::NotAlmostConsecutive(_)
            | Error::ProjectiveInput
            | Error::OutOfRange(_),
        ) => 2,
        _ => 1,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn policy(cli: &Cli, n: u32) -> Result<TruncPolicy> {
    let init = cli.trunc.unwrap_or(2 * n);
    let cap = cli.cap.unwrap_or(8 * n);
    if init < n {
        return Err(usage(format!("truncation {init} is below n = {n}")));
    }
    if cap < init {
        return Err(usage(format!("escalation cap {cap} is below the truncation {init}")));
    }
    Ok(TruncPolicy { initial: Some(init), cap: Some(cap), check_stability: true })
}

fn profile_arg(text: &str) -> Result<Profile> {
    Ok(parse_profile(text)?)
}

fn module_at(p: &Profile, trunc: u32) -> Result<CMModuleRep> {
    Ok(build_profile(p)?.with_trunc(trunc))
}

fn render<T: Serialize>(cli: &Cli, value: &T, table: impl FnOnce() -> String) -> Result<String> {
    if cli.json || cli.format == Some(Format::Json) {
        Ok(serde_json::to_string_pretty(value)? + "\n")
    } else {
        Ok(table())
    }
}

fn write_report<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RimReport {
    pub rim: Vec<u32>,
    pub k: u32,
    pub n: u32,
    pub peaks: Vec<u32>,
    pub down_lengths: Vec<u32>,
    pub up_lengths: Vec<u32>,
    pub min_slope: u32,
    pub projective: Option<u32>,
    pub almost_consecutive: Vec<(u32, u32)>,
    pub syzygy_rim: Option<Vec<u32>>,
}

fn rim_cmd(cli: &Cli, text: &str) -> Result<String> {
    let r = parse_rim(text)?;
    let s = r.slopes();
    let rep = RimReport {
        rim: r.elements(),
        k: r.k(),
        n: r.n(),
        peaks: r.peaks(),
        down_lengths: s.down_lengths(),
        up_lengths: s.up_lengths(),
        min_slope: s.min_slope,
        projective: r.is_projective(),
        almost_consecutive: r.almost_consecutive_decompositions(),
        syzygy_rim: r.syzygy_rim().ok().map(|x| x.elements()),
    };
    render(cli, &rep, || {
        let mut t = String::new();
        writeln!(t, "rim {r} (k={}, n={})", r.k(), r.n()).unwrap();
        writeln!(t, "peaks: {:?}", rep.peaks).unwrap();
        writeln!(t, "down slopes: {:?}, up slopes: {:?}, min slope: {}", rep.down_lengths, rep.up_lengths, rep.min_slope)
            .unwrap();
        match rep.projective {
            Some(j) => writeln!(t, "projective: P_{j}").unwrap(),
            None => writeln!(t, "projective: no").unwrap(),
        }
        if let Some(z) = r.syzygy_rim().ok() {
            writeln!(t, "almost consecutive {:?}, syzygy rim {z}", rep.almost_consecutive).unwrap();
        }
        t
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapReport {
    pub vertex: u32,
    pub x: Vec<Vec<String>>,
    pub y: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModuleReport {
    pub profile: Profile,
    pub rank: usize,
    pub trunc: u32,
    pub relation_failures: Vec<String>,
    pub a_vector: Vec<i64>,
    pub top: Vec<u32>,
    pub maps: Vec<MapReport>,
}

fn entries(m: &grasscat::dvr::DVRMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn module_cmd(cli: &Cli, text: &str) -> Result<String> {
    let p = profile_arg(text)?;
    let trunc = policy(cli, p.n())?.initial.unwrap();
    let m = module_at(&p, trunc)?;
    let rep = ModuleReport {
        profile: p.clone(),
        rank: m.rank(),
        trunc,
        relation_failures: validate_relations(&m).iter().map(|f| format!("{f:?}")).collect(),
        a_vector: module_a_vector(&m)?,
        top: top(&m),
        maps: (1..=p.n())
            .map(|v| MapReport { vertex: v, x: entries(m.x(v as i64)), y: entries(m.y(v as i64)) })
            .collect(),
    };
    render(cli, &rep, || {
        let mut t = String::new();
        writeln!(t, "module {p}: rank {}, precision t^{trunc}", rep.rank).unwrap();
        writeln!(t, "relations: {}", if rep.relation_failures.is_empty() { "ok" } else { "FAILED" }).unwrap();
        writeln!(t, "a-vector: {:?}", rep.a_vector).unwrap();
        writeln!(t, "top: {:?}", rep.top).unwrap();
        for v in 1..=p.n() {
            write!(t, "x_{v}:\n{}y_{v}:\n{}", m.x(v as i64), m.y(v as i64)).unwrap();
        }
        t
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HomReport {
    pub m: Profile,
    pub n: Profile,
    pub z_rank: usize,
}

fn hom_cmd(cli: &Cli, a: &str, b: &str) -> Result<String> {
    let (p, q) = (profile_arg(a)?, profile_arg(b)?);
    let trunc = policy(cli, p.n())?.initial.unwrap();
    let h = hom_space(&module_at(&p, trunc)?, &module_at(&q, trunc)?)?;
    let rep = HomReport { m: p.clone(), n: q.clone(), z_rank: h.z_rank };
    render(cli, &rep, || format!("Hom({p}, {q}) is free of rank {}\n", h.z_rank))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExtReport {
    pub m: Profile,
    pub n: Profile,
    pub exponents: Vec<u32>,
    pub total_dim: u32,
    pub description: String,
}

fn ext_cmd(cli: &Cli, a: &str, b: &str) -> Result<String> {
    let (p, q) = (profile_arg(a)?, profile_arg(b)?);
    let pol = policy(cli, p.n())?;
    let e = ext1_with(&build_profile(&p)?, &build_profile(&q)?, &pol)?;
    let rep = ExtReport { m: p, n: q, exponents: e.exponents.clone(), total_dim: e.total_dim, description: e.describe() };
    render(cli, &rep, || format!("Ext^1 ≅ {}\nexponents {:?}\n", rep.description, rep.exponents))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SyzygyReport {
    pub module: Profile,
    pub cover: Vec<u32>,
    pub rank: usize,
    pub profile: Option<Profile>,
}

fn syzygy_cmd(cli: &Cli, text: &str) -> Result<String> {
    let p = profile_arg(text)?;
    let trunc = policy(cli, p.n())?.initial.unwrap();
    let m = module_at(&p, trunc)?;
    let om = syzygy(&m)?;
    let profile = match om.rank() {
        1 => Some(Profile::single(grasscat::cm::identify_rank1(&om)?)),
        2 => identify_rank2(&om)?,
        _ => None,
    };
    let rep = SyzygyReport { module: p.clone(), cover: top(&m), rank: om.rank(), profile };
    render(cli, &rep, || match &rep.profile {
        Some(q) => format!("syzygy of {p}: {q} (rank {})\n", rep.rank),
        None => format!("syzygy of {p}: rank {}\n", rep.rank),
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RigidReport {
    pub profile: Profile,
    pub rigid: bool,
    pub indecomposable: bool,
    pub root: RootClass,
}

fn rigid_cmd(cli: &Cli, text: &str) -> Result<String> {
    let p = profile_arg(text)?;
    let pol = policy(cli, p.n())?;
    let m = build_profile(&p)?;
    let rep = RigidReport {
        rigid: is_rigid_with(&m, &pol)?,
        indecomposable: is_indecomposable(&m)?,
        root: classify_module_root(&p),
        profile: p.clone(),
    };
    render(cli, &rep, || {
        format!("{p}: rigid {}, indecomposable {}, root {:?}\n", rep.rigid, rep.indecomposable, rep.root)
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ArSeqReport {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub middle: String,
    pub right_is_syzygy: bool,
    pub additive: bool,
    pub ext_dim: u32,
    pub middle_rigid: bool,
    pub middle_indecomposable: bool,
}

fn ar_seq_cmd(cli: &Cli, text: &str) -> Result<String> {
    let r = parse_rim(text)?;
    let s = ar_sequence(&r)?;
    let middle = match &s.middle {
        ArMiddle::Profile(p) => p.to_string(),
        ArMiddle::Decomposition { projective, rank1 } => format!("P_{projective} ⊕ L_{rank1}"),
    };
    let rep = ArSeqReport {
        left: s.left.elements(),
        right: s.right.elements(),
        middle,
        right_is_syzygy: s.right_is_syzygy,
        additive: s.additive,
        ext_dim: s.ext_dim,
        middle_rigid: s.middle_rigid,
        middle_indecomposable: s.middle_indecomposable,
    };
    render(cli, &rep, || {
        format!(
            "0 -> L_{} -> {} -> L_{} -> 0\nmiddle rigid {}, indecomposable {}, additive {}, dim Ext^1 {}\n",
            s.left, rep.middle, s.right, rep.middle_rigid, rep.middle_indecomposable, rep.additive, rep.ext_dim
        )
    })
}

fn orbit_line(o: &TauOrbit) -> String {
    let names: Vec<String> = o.members.iter().map(|m| m.to_string()).collect();
    format!("period {}: {}\n", o.period, names.join(" -> "))
}

fn orbit_cmd(cli: &Cli, text: &str) -> Result<String> {
    let p = profile_arg(text)?;
    let o = tau_orbit(&p)?;
    match cli.format {
        Some(Format::Dot) => Ok(diagram::orbits_dot(std::slice::from_ref(&o))),
        Some(Format::Tikz) => Ok(diagram::orbits_tikz(std::slice::from_ref(&o))),
        _ => render(cli, &o, || orbit_line(&o)),
    }
}

fn census_options(cli: &Cli, n: u32, sample: Option<f64>, seed: u64, max_n: u32) -> Result<CensusOptions> {
    if let Some(p) = sample {
        if !(0.0..=1.0).contains(&p) {
            return Err(usage(format!("sample probability {p} is outside [0, 1]")));
        }
    }
    Ok(CensusOptions { policy: policy(cli, n)?, sample, seed, max_n })
}

fn tubes_cmd(cli: &Cli, k: u32, n: u32) -> Result<String> {
    let opts = census_options(cli, n, None, 0, 9)?;
    let rep: TubeCensus = tube_census_with(&census::run_census(k, n, &opts)?)?;
    write_report(&cli.out, &format!("tubes-{k}-{n}.json"), &rep)?;
    let text = match cli.format {
        Some(Format::Dot) => diagram::orbits_dot(&rep.orbits),
        Some(Format::Tikz) => diagram::orbits_tikz(&rep.orbits),
        _ => render(cli, &rep, || {
            let mut t = String::new();
            if let Some(b) = &rep.banner {
                writeln!(t, "{b}").unwrap();
            }
            writeln!(t, "({k},{n}): {} orbits, 2v = {}, periods {:?}", rep.orbits.len(), rep.two_v, rep.periods).unwrap();
            for o in &rep.orbits {
                t.push_str(&orbit_line(o));
            }
            for f in &rep.fixtures {
                writeln!(t, "tube {} row {}: {} ({})", f.tube, f.row, if f.matched { "ok" } else { "MISMATCH" }, f.detail)
                    .unwrap();
            }
            for note in &rep.notes {
                writeln!(t, "note: {note}").unwrap();
            }
            t
        })?,
    };
    if !rep.fixture_diffs.is_empty() {
        return Err(anyhow::Error::new(FixtureMismatch { output: text, diffs: rep.fixture_diffs }));
    }
    Ok(text)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RootRow {
    pub a: Vec<i64>,
    pub q: i64,
    pub alpha: Vec<i64>,
    pub degree: i64,
}

fn roots_cmd(cli: &Cli, k: u32, n: u32, degree: u32) -> Result<String> {
    if k < 2 || 2 * k > n {
        return Err(usage(format!("need 2 <= k <= n/2, got ({k}, {n})")));
    }
    let rows: Vec<RootRow> = enumerate_real_roots(k, n, degree)
        .into_iter()
        .map(|r| {
            let c = root_coordinates(&r).expect("sum is a multiple of k");
            RootRow { q: q_value(&r), alpha: c.c, degree: c.d, a: r.entries }
        })
        .collect();
    render(cli, &rows, || {
        let mut t = format!("{} real roots of degree {degree} for ({k},{n})\n", rows.len());
        for r in &rows {
            writeln!(t, "{:?}  alpha {:?}  beta {}", r.a, r.alpha, r.degree).unwrap();
        }
        t
    })
}

fn census_table(r: &CensusReport) -> String {
    let mut t = format!("rank1: {}, rank2 rigid: {}\n", r.rank1_count, r.counts.rigid);
    writeln!(
        t,
        "real: {}, imaginary: {}, candidates: {}, tested: {}",
        r.counts.real,
        r.counts.imaginary,
        r.candidates,
        r.tested.len()
    )
    .unwrap();
    for e in &r.rank2_rigid {
        writeln!(t, "  {}  {:?}  orbit {}", e.profile, e.root, e.shift_orbit).unwrap();
    }
    let c = census::verify_conjectures(r);
    writeln!(t, "tight pairs rigid: {} ({} instances)", c.tight_pairs_rigid.holds, c.tight_pairs_rigid.instances).unwrap();
    writeln!(
        t,
        "interlacing >= 4 not rigid: {} ({} instances)",
        c.high_interlacing_not_rigid.holds, c.high_interlacing_not_rigid.instances
    )
    .unwrap();
    writeln!(t, "real count {} vs formula {}", r.counts.real, c.expected_count).unwrap();
    for n in &r.notes {
        writeln!(t, "note: {n}").unwrap();
    }
    for d in &r.fixture_diffs {
        writeln!(t, "fixture: {d}").unwrap();
    }
    t
}

fn census_cmd(cli: &Cli, k: u32, n: u32, sample: Option<f64>, seed: u64, max_n: u32, use_cache: bool) -> Result<String> {
    let opts = census_options(cli, n, sample, seed, max_n)?;
    let trunc = opts.policy.initial.unwrap_or(2 * n);
    let cache = census::cache_path(&cli.out.join("cache"), k, n, trunc);
    let cached = if sample.is_none() { census::load_cached(&cache) } else { None };
    let mut report = match (&cached, use_cache) {
        (Some(c), true) => c.clone(),
        _ => census::run_census(k, n, &opts)?,
    };
    if let (Some(old), false) = (&cached, use_cache) {
        for d in census::diff_reports(old, &report) {
            report.notes.push(format!("changed since cached run: {d}"));
        }
    }
    if sample.is_none() && !use_cache {
        census::store(&cache, &report).with_context(|| format!("writing {}", cache.display()))?;
    }
    write_report(&cli.out, &format!("census-{k}-{n}.json"), &report)?;
    let text = render(cli, &report, || census_table(&report))?;
    if sample.is_none() && !report.fixture_diffs.is_empty() {
        return Err(anyhow::Error::new(FixtureMismatch { output: text, diffs: report.fixture_diffs }));
    }
    Ok(text)
}

fn diagram_cmd(cli: &Cli, text: &str) -> Result<String> {
    let p = profile_arg(text)?;
    let d = lattice_diagram_data(&p);
    match (cli.json, cli.format) {
        (true, _) | (_, Some(Format::Json)) => Ok(serde_json::to_string_pretty(&d)? + "\n"),
        (_, Some(Format::Tikz)) => Ok(diagram::tikz(&d)),
        (_, None | Some(Format::Svg)) => Ok(diagram::svg(&d)),
        (_, Some(f)) => Err(usage(format!("diagram does not support format {f:?}"))),
    }
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Rim { rim } => rim_cmd(cli, rim),
        Command::Module { profile } => module_cmd(cli, profile),
        Command::Hom { m, n } => hom_cmd(cli, m, n),
        Command::Ext { m, n } => ext_cmd(cli, m, n),
        Command::Syzygy { profile } => syzygy_cmd(cli, profile),
        Command::Rigid { profile } => rigid_cmd(cli, profile),
        Command::ArSeq { rim } => ar_seq_cmd(cli, rim),
        Command::Orbit { profile } => orbit_cmd(cli, profile),
        Command::Tubes { k, n } => tubes_cmd(cli, *k, *n),
        Command::Roots { k, n, degree } => roots_cmd(cli, *k, *n, *degree),
        Command::Census { k, n, full: _, sample, seed, max_n, use_cache } => {
            census_cmd(cli, *k, *n, *sample, *seed, *max_n, *use_cache)
        }
        Command::Diagram { profile } => diagram_cmd(cli, profile),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anyhow::anyhow;
    use clap::Parser;

    fn cli(args: &[&str]) -> Cli {
        Cli::parse_from(std::iter::once("grasscat").chain(args.iter().copied()))
    }

    #[test]
    fn precision_defaults_and_limits() {
        let p = policy(&cli(&["rim", "1"]), 8).unwrap();
        assert_eq!((p.initial, p.cap), (Some(16), Some(64)));
        assert!(policy(&cli(&["--trunc", "7", "rim", "1"]), 8).is_err());
        assert!(policy(&cli(&["--trunc", "9", "--cap", "8", "rim", "1"]), 8).is_err());
    }

    #[test]
    fn codes() {
        assert_eq!(exit_code(&anyhow::Error::new(Error::TruncationUnstable(64))), 4);
        assert_eq!(exit_code(&anyhow::Error::new(Error::Parse("x".into()))), 2);
        let m = FixtureMismatch { output: String::new(), diffs: vec!["rank2".into()] };
        assert_eq!(exit_code(&anyhow::Error::new(m)), 3);
        assert_eq!(exit_code(&anyhow!("io")), 1);
    }
}
