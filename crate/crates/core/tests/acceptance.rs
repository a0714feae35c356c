//! Acceptance suite: one PASS/FAIL line per criterion, with a pinned runtime limit.
//! Run with `cargo test -p grasscat --test acceptance`.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use grasscat::ar_tubes::{ar_sequence, tube_census_with, TubeCensus};
use grasscat::census::{census_fixture, run_census, CensusOptions, CensusReport};
use grasscat::cm::{build_layered, build_profile, build_rank1, identify_rank1, validate_relations, CMModuleRep};
use grasscat::homological::{ext1, is_rigid, syzygy, ExtDecomp};
use grasscat::rims::{parse_profile, ArMiddle, Profile, Rim};
use grasscat::roots::{enumerate_degree2_real_roots, q_value, RootClass, RootVector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{ctx}: {e:?}")
}

/// Rims listed in label order, one rank one module each.
struct Ambient {
    rims: Vec<Rim>,
    modules: Vec<CMModuleRep>,
}

impl Ambient {
    fn new(k: u32, n: u32) -> Ambient {
        let rims = Rim::all(k, n);
        let modules = rims.par_iter().map(build_rank1).collect();
        Ambient { rims, modules }
    }
}

fn criterion_1() -> Outcome {
    let ambients = [(2, 5), (3, 6), (3, 7), (3, 8), (3, 9), (4, 8), (4, 9)];
    let mut rank1 = 0;
    let mut pairs = 0;
    for (k, n) in ambients {
        let rims = Rim::all(k, n);
        let bad: Vec<String> = rims
            .par_iter()
            .filter(|r| !validate_relations(&build_rank1(r)).is_empty())
            .map(|r| r.to_string())
            .collect();
        ensure(bad.is_empty(), || format!("rank one relations fail at ({k},{n}): {bad:?}"))?;
        rank1 += rims.len();

        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(k * 100 + n));
        let sample: Vec<(Rim, Rim)> =
            (0..500).map(|_| (*rims.choose(&mut rng).unwrap(), *rims.choose(&mut rng).unwrap())).collect();
        let bad: Vec<String> = sample
            .par_iter()
            .filter(|(a, b)| build_layered(&[*a, *b]).map_or(true, |m| !validate_relations(&m).is_empty()))
            .map(|(a, b)| format!("{a}|{b}"))
            .collect();
        ensure(bad.is_empty(), || format!("layered relations fail at ({k},{n}): {bad:?}"))?;
        pairs += sample.len();
    }
    Ok(format!("{rank1} rank one modules, {pairs} random layered pairs"))
}

fn criterion_2() -> Outcome {
    let mut shifted = 0;
    let mut almost = 0;
    for (k, n) in [(3, 9), (4, 8)] {
        let rims: Vec<Rim> = Rim::all(k, n).into_iter().filter(|r| r.is_projective().is_none()).collect();
        let results: Vec<Result<(bool, Option<bool>), String>> = rims
            .par_iter()
            .map(|r| {
                let m = build_rank1(r);
                let om = syzygy(&m).map_err(err(r))?;
                let om2 = syzygy(&om).map_err(err(r))?;
                let squares = identify_rank1(&om2).ok() == Some(r.shift(k as i64));
                let first = r.syzygy_rim().ok().map(|z| identify_rank1(&om).ok() == Some(z));
                Ok((squares, first))
            })
            .collect();
        for (r, res) in rims.iter().zip(results) {
            let (squares, first) = res?;
            ensure(squares, || format!("syzygy squared of {r} at ({k},{n}) is not the shift by k"))?;
            ensure(first != Some(false), || format!("syzygy of {r} at ({k},{n}) differs from its syzygy rim"))?;
            shifted += 1;
            almost += usize::from(first.is_some());
        }
    }
    Ok(format!("{shifted} squares, {almost} almost consecutive syzygies"))
}

/// Ext between all ordered pairs of rank one modules at one ambient.
fn ext_table(amb: &Ambient) -> Result<HashMap<(usize, usize), ExtDecomp>, String> {
    let len = amb.rims.len();
    let idx: Vec<(usize, usize)> = (0..len).flat_map(|i| (0..len).map(move |j| (i, j))).collect();
    idx.par_iter()
        .map(|&(i, j)| {
            ext1(&amb.modules[i], &amb.modules[j])
                .map(|e| ((i, j), e))
                .map_err(err(format!("{}, {}", amb.rims[i], amb.rims[j])))
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut tables = HashMap::new();
    // (a) vanishing exactly on non-crossing pairs, every ambient with n <= 9
    for n in 4..=9u32 {
        for k in 2..=n - 2 {
            let amb = Ambient::new(k, n);
            let table = ext_table(&amb)?;
            for (&(i, j), e) in &table {
                let (a, b) = (&amb.rims[i], &amb.rims[j]);
                let crossing = a.crossing(b).map_err(err(a))?;
                ensure(e.is_zero() != crossing, || format!("Ext({a}, {b}) = {} but crossing = {crossing}", e.describe()))?;
            }
            checked += table.len();
            if matches!((k, n), (3, 9) | (4, 8)) {
                tables.insert((k, n), (amb, table));
            }
        }
    }
    // (b) a two-peak rim against its syzygy
    let mut two_peak = 0;
    for (k, n) in [(3, 8), (3, 9), (4, 8)] {
        let rims: Vec<Rim> = Rim::all(k, n).into_iter().filter(|r| r.peaks().len() == 2).collect();
        let bad: Vec<String> = rims
            .par_iter()
            .filter_map(|r| {
                let m = build_rank1(r);
                let e = syzygy(&m).and_then(|om| ext1(&m, &om));
                match e {
                    Ok(e) if e.exponents == vec![r.slopes().min_slope] => None,
                    other => Some(format!("{r}: {other:?}, min slope {}", r.slopes().min_slope)),
                }
            })
            .collect();
        ensure(bad.is_empty(), || format!("two-peak exponents at ({k},{n}): {bad:?}"))?;
        two_peak += rims.len();
    }
    // (c) number of cyclic summands at (3,9)
    let (amb, table) = &tables[&(3, 9)];
    for (&(i, j), e) in table {
        if i == j {
            continue;
        }
        let r = amb.rims[i].interlacing_degree(&amb.rims[j]).map_err(err(amb.rims[i]))?;
        ensure(e.exponents.len() as u32 + 1 == r, || {
            format!("Ext({}, {}) has {} summands for {r}-interlacing", amb.rims[i], amb.rims[j], e.exponents.len())
        })?;
    }
    // (d) dimension symmetry
    let mut sym = 0;
    for (k, n) in [(3, 9), (4, 8)] {
        let (amb, table) = &tables[&(k, n)];
        for (&(i, j), e) in table {
            if i < j {
                let d = table[&(j, i)].total_dim;
                ensure(e.total_dim == d, || {
                    format!("dim Ext({}, {}) = {} but reversed {d}", amb.rims[i], amb.rims[j], e.total_dim)
                })?;
                sym += 1;
            }
        }
    }
    Ok(format!("{checked} ordered pairs, {two_peak} two-peak rims, {sym} symmetric pairs"))
}

fn criterion_4() -> Outcome {
    let mut profiles = 0;
    let mut split = 0;
    for (k, n) in [(3, 8), (3, 9)] {
        let rims: Vec<Rim> = Rim::all(k, n)
            .into_iter()
            .filter(|r| r.is_projective().is_none() && r.is_almost_consecutive().is_some())
            .collect();
        let seqs: Vec<_> = rims.par_iter().map(|r| (r, ar_sequence(r))).collect();
        for (r, s) in seqs {
            let s = s.map_err(err(r))?;
            let (i, j) = r.is_almost_consecutive().unwrap();
            let adjacent = (i + 2 - 1) % n + 1 == j;
            ensure(s.right_is_syzygy, || format!("{r}: right end is not the syzygy"))?;
            ensure(s.additive, || format!("{r}: layer multiplicities do not add up"))?;
            ensure(s.ext_dim > 0, || format!("{r}: the ends have no extension"))?;
            ensure(s.middle_rigid, || format!("{r}: middle term is not rigid"))?;
            ensure(s.middle_indecomposable != adjacent, || {
                format!("{r}: indecomposable = {} with (i, j) = ({i}, {j})", s.middle_indecomposable)
            })?;
            match s.middle {
                ArMiddle::Profile(_) => profiles += 1,
                ArMiddle::Decomposition { projective, .. } => {
                    ensure(projective == i, || format!("{r}: projective summand P_{projective}, expected P_{i}"))?;
                    split += 1;
                }
            }
        }
    }
    Ok(format!("{profiles} indecomposable middles, {split} decomposing as P_i plus a rank one module"))
}

fn criterion_5() -> Outcome {
    let mut got = Vec::new();
    for ((k, n), want) in [((3, 6), 1), ((3, 7), 7), ((3, 8), 28), ((3, 9), 84), ((4, 8), 56)] {
        let roots = enumerate_degree2_real_roots(k, n);
        ensure(roots.len() == want, || format!("({k},{n}): {} roots, expected {want}", roots.len()))?;
        ensure(roots.iter().all(|r| q_value(r) == 2 && r.degree() == 2), || format!("({k},{n}): bad root"))?;
        got.push(format!("({k},{n})={want}"));
    }
    Ok(got.join(" "))
}

struct Censuses {
    reports: BTreeMap<(u32, u32), CensusReport>,
}

fn criterion_6(store: &mut Option<Censuses>, sample_limit: Duration) -> Outcome {
    let opts = CensusOptions::default();
    let mut reports = BTreeMap::new();
    let mut line = Vec::new();
    for ((k, n), rigid) in [((3, 6), 2), ((3, 7), 14), ((3, 8), 56), ((3, 9), 168), ((4, 8), 120)] {
        let r = run_census(k, n, &opts).map_err(err(format!("({k},{n})")))?;
        ensure(r.counts.rigid == rigid, || format!("({k},{n}): {} rigid, expected {rigid}", r.counts.rigid))?;
        ensure(r.fixture_diffs.is_empty(), || format!("({k},{n}): {:?}", r.fixture_diffs))?;
        line.push(format!("({k},{n})={rigid}"));
        reports.insert((k, n), r);
    }
    let r48 = &reports[&(4, 8)];
    ensure(r48.counts.real == 112 && r48.counts.imaginary == 8, || {
        format!("(4,8) split {} + {}", r48.counts.real, r48.counts.imaginary)
    })?;
    let seed = parse_profile("1246|3578@(4,8)").unwrap();
    let orbit: Vec<Profile> = (0..8).map(|m| seed.shift(m)).collect();
    for e in r48.rank2_rigid.iter().filter(|e| e.root == RootClass::Imaginary) {
        ensure(e.realized_as.iter().any(|p| orbit.contains(p)), || {
            format!("imaginary class {} is not in the shift orbit of {seed}", e.profile)
        })?;
    }
    let hit = orbit.iter().filter(|p| r48.rank2_rigid.iter().any(|e| e.realized_as.contains(p))).count();
    ensure(hit == 8, || format!("only {hit} shifts of {seed} are rigid classes"))?;

    // probabilistic smoke mode agrees with the full runs
    let start = Instant::now();
    for (k, n) in [(3, 9), (4, 8)] {
        let opts = CensusOptions { sample: Some(0.05), seed: 5, ..CensusOptions::default() };
        let s = run_census(k, n, &opts).map_err(err(format!("sampled ({k},{n})")))?;
        let full = &reports[&(k, n)];
        for c in s.tested.iter().filter(|c| c.rigid.is_some()) {
            let f = full.tested.iter().find(|f| f.profile == c.profile).map(|f| f.rigid);
            ensure(f == Some(c.rigid), || format!("sampled verdict for {} differs", c.profile))?;
        }
    }
    let sampled = start.elapsed();
    ensure(sampled <= sample_limit, || format!("sample 0.05 run took {sampled:.1?}"))?;
    *store = Some(Censuses { reports });
    Ok(format!("{}; 112 real + 8 imaginary; sample 0.05 run {sampled:.1?}", line.join(" ")))
}

fn criterion_7(c: &Censuses) -> Outcome {
    let mut notes = Vec::new();
    for (k, n) in [(3, 9), (4, 8)] {
        let r = &c.reports[&(k, n)];
        let real: Vec<&Profile> =
            r.rank2_rigid.iter().filter(|e| e.root == RootClass::Real).flat_map(|e| e.realized_as.iter()).collect();
        for p in &real {
            ensure(real.contains(&&p.reversed()), || format!("({k},{n}): swap of {p} is not rigid"))?;
        }
        for root in enumerate_degree2_real_roots(k, n) {
            let fiber = r.rank2_rigid.iter().filter(|e| e.a_vector == root.entries).count();
            ensure(fiber == 2, || format!("({k},{n}): fiber over {:?} has size {fiber}", root.entries))?;
        }
        ensure(r.swap_closed_real && r.fiber_defects.is_empty(), || format!("({k},{n}): report flags disagree"))?;
        notes.push(format!("({k},{n}) {} real", real.len()));
    }
    let imag = c.reports[&(4, 8)].imaginary_swaps_present;
    Ok(format!("{}; swaps of imaginary classes present: {imag}/8", notes.join(", ")))
}

fn criterion_8(c: &Censuses, tubes: &mut Vec<TubeCensus>) -> Outcome {
    let mut line = Vec::new();
    for ((k, n), two_v) in [((3, 9), 6), ((4, 8), 4)] {
        let t = tube_census_with(&c.reports[&(k, n)]).map_err(err(format!("({k},{n})")))?;
        ensure(t.two_v == two_v, || format!("({k},{n}): 2v = {}", t.two_v))?;
        ensure(t.periods_divide_two_v, || format!("({k},{n}): periods {:?}", t.periods))?;
        ensure(t.omega_squared_defects.is_empty(), || format!("({k},{n}): {:?}", t.omega_squared_defects))?;
        ensure(!t.fixtures.is_empty() && t.fixture_diffs.is_empty(), || format!("({k},{n}): {:?}", t.fixture_diffs))?;
        line.push(format!("({k},{n}) periods {:?}, {} fixture rows", t.periods, t.fixtures.len()));
        tubes.push(t);
    }
    Ok(line.join("; "))
}

fn criterion_9(c: &Censuses, tubes: &[TubeCensus]) -> Outcome {
    // stored rank three counts stay marked as unverified
    for ((k, n), want) in [((3, 9), 117), ((4, 8), 82)] {
        let f = census_fixture(k, n).ok_or(format!("no fixture for ({k},{n})"))?;
        ensure(f.rank3_unverified == Some(want), || format!("({k},{n}) rank three fixture {:?}", f.rank3_unverified))?;
    }
    // imaginary classes: q = 0, rigid, and on a periodic orbit
    let r48 = &c.reports[&(4, 8)];
    for e in r48.rank2_rigid.iter().filter(|e| e.root == RootClass::Imaginary) {
        let q = q_value(&RootVector::new(e.a_vector.clone(), 4).map_err(err(&e.profile))?);
        ensure(q == 0, || format!("{} has q = {q}", e.profile))?;
        let m = build_profile(&e.profile).map_err(err(&e.profile))?;
        ensure(is_rigid(&m).map_err(err(&e.profile))?, || format!("{} is not rigid", e.profile))?;
        let on_orbit = tubes[1].orbits.iter().any(|o| o.contains(&e.profile));
        ensure(on_orbit, || format!("{} lies on no computed orbit", e.profile))?;
    }
    // orbits are syzygy orbits: each member is the syzygy of the previous one
    let mut steps = 0;
    for t in tubes {
        for o in &t.orbits {
            for w in o.members.windows(2) {
                if let (Some(a), Some(b)) = (&w[0].profile, &w[1].profile) {
                    if a.len() == 1 && b.len() == 1 {
                        let om = syzygy(&build_rank1(&a.layers()[0])).map_err(err(a))?;
                        ensure(identify_rank1(&om).ok() == Some(b.layers()[0]), || format!("{a} -> {b}"))?;
                        steps += 1;
                    }
                }
            }
        }
    }
    Ok(format!("rank three counts kept unverified; 8 imaginary classes checked; {steps} orbit steps re-derived"))
}

fn main() {
    let limits = [
        Duration::from_secs(60),
        Duration::from_secs(300),
        Duration::from_secs(1800),
        Duration::from_secs(300),
        Duration::from_secs(10),
        Duration::from_secs(3600),
        Duration::from_secs(60),
        Duration::from_secs(600),
        Duration::from_secs(300),
    ];
    let mut censuses = None;
    let mut tubes = Vec::new();
    let mut failed = 0;
    for (idx, limit) in limits.iter().enumerate() {
        let start = Instant::now();
        let outcome = match idx + 1 {
            1 => criterion_1(),
            2 => criterion_2(),
            3 => criterion_3(),
            4 => criterion_4(),
            5 => criterion_5(),
            6 => criterion_6(&mut censuses, Duration::from_secs(120)),
            7 => censuses.as_ref().map_or(Err("censuses unavailable".into()), criterion_7),
            8 => censuses.as_ref().map_or(Err("censuses unavailable".into()), |c| criterion_8(c, &mut tubes)),
            _ => match (&censuses, tubes.len()) {
                (Some(c), 2) => criterion_9(c, &tubes),
                _ => Err("censuses or tubes unavailable".into()),
            },
        };
        let took = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if took <= *limit {
                Ok(d)
            } else {
                Err(format!("{d}; exceeded limit of {limit:?}"))
            }
        });
        match outcome {
            Ok(d) => println!("criterion {} PASS [{took:.1?} / {limit:?}] {d}", idx + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL [{took:.1?} / {limit:?}] {e}", idx + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
