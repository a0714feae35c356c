//! Exhaustive censuses of rigid indecomposable rank two modules.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cm::{a_vector, build_profile, build_rank1};
use crate::error::{Error, Result};
use crate::homological::{canonical_label, is_isomorphic, is_rigid_with, profile_key, TruncPolicy};
use crate::rims::{Profile, Rim};
use crate::roots::{classify_module_root, enumerate_degree2_real_roots, expected_rigid_rank2_count, RootClass};

pub const CENSUS_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub policy: TruncPolicy,
    /// Test each candidate with this probability instead of all of them.
    pub sample: Option<f64>,
    pub seed: u64,
    pub max_n: u32,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { policy: TruncPolicy::default(), sample: None, seed: 0, max_n: 9 }
    }
}

/// Rigidity verdict for one ordered candidate pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateResult {
    pub profile: Profile,
    pub interlacing: u32,
    pub tight: bool,
    /// `None` when the verdict did not stabilize below the precision cap.
    pub rigid: Option<bool>,
}

/// One isomorphism class of rigid indecomposable rank two modules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidEntry {
    pub profile: Profile,
    /// Every candidate profile whose generic module lies in this class.
    pub realized_as: Vec<Profile>,
    pub a_vector: Vec<i64>,
    pub root: RootClass,
    pub tight: bool,
    /// Index of the class's orbit under the rotation `i -> i + 1`.
    pub shift_orbit: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCounts {
    pub rigid: usize,
    pub real: usize,
    pub imaginary: usize,
    /// Rigid candidate profiles before merging isomorphic ones.
    pub rigid_profiles: usize,
}

/// Published counts for the parameters the census knows about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFixture {
    pub rank1: usize,
    pub rank2: usize,
    pub real: usize,
    pub imaginary: usize,
    /// Rank three counts are recorded but not recomputed.
    pub rank3_unverified: Option<usize>,
}

pub fn census_fixture(k: u32, n: u32) -> Option<CensusFixture> {
    let f = |rank1, rank2, real, imaginary, rank3_unverified| CensusFixture {
        rank1,
        rank2,
        real,
        imaginary,
        rank3_unverified,
    };
    match (k, n) {
        (3, 6) => Some(f(20, 2, 2, 0, None)),
        (3, 7) => Some(f(35, 14, 14, 0, None)),
        (3, 8) => Some(f(56, 56, 56, 0, None)),
        (3, 9) => Some(f(84, 168, 168, 0, Some(117))),
        (4, 8) => Some(f(70, 120, 112, 8, Some(82))),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub k: u32,
    pub n: u32,
    pub version: String,
    pub trunc: u32,
    pub sample: Option<f64>,
    pub rank1_count: usize,
    pub candidates: usize,
    pub tested: Vec<CandidateResult>,
    pub rank2_rigid: Vec<RigidEntry>,
    pub counts: CensusCounts,
    /// Real-root entries are closed under swapping the two layers.
    pub swap_closed_real: bool,
    /// Imaginary-root entries whose layer swap is again an entry.
    pub imaginary_swaps_present: usize,
    /// Every entry shifted by `k` is again an entry.
    pub shift_closed: bool,
    /// Degree two real roots not hit by exactly two entries (full runs only).
    pub fiber_defects: Vec<String>,
    pub fixture: Option<CensusFixture>,
    pub fixture_diffs: Vec<String>,
    pub notes: Vec<String>,
}

impl CensusReport {
    pub fn entry(&self, p: &Profile) -> Option<&RigidEntry> {
        self.rank2_rigid.iter().find(|e| e.realized_as.contains(p))
    }

    pub fn labels(&self) -> Vec<String> {
        self.rank2_rigid.iter().map(|e| e.profile.to_string()).collect()
    }
}

fn check_params(k: u32, n: u32, max_n: u32) -> Result<()> {
    if k < 2 || 2 * k > n {
        return Err(Error::OutOfRange(format!("need 2 <= k <= n/2, got (k, n) = ({k}, {n})")));
    }
    if n > max_n {
        return Err(Error::OutOfRange(format!("n = {n} exceeds the census cap {max_n}")));
    }
    Ok(())
}

/// Ordered pairs `(I, J)` interlacing to degree at least three.
pub fn candidate_pairs(k: u32, n: u32) -> Vec<Profile> {
    let rims = Rim::all(k, n);
    let mut out = Vec::new();
    for a in &rims {
        for b in &rims {
            if a.interlacing_degree(b).unwrap_or(0) >= 3 {
                out.push(Profile::pair(*a, *b).expect("same ambient"));
            }
        }
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Partition profiles into isomorphism classes of their generic modules.
fn isomorphism_classes(rigid: &[Profile]) -> Result<Vec<Vec<Profile>>> {
    let mut by_a: BTreeMap<Vec<i64>, Vec<Profile>> = BTreeMap::new();
    for p in rigid {
        by_a.entry(a_vector(p)).or_default().push(p.clone());
    }
    let groups: Vec<Vec<Profile>> = by_a.into_values().collect();
    let classes: Vec<Vec<Vec<Profile>>> = groups
        .par_iter()
        .map(|g| -> Result<Vec<Vec<Profile>>> {
            let mods = g.iter().map(build_profile).collect::<Result<Vec<_>>>()?;
            let mut parent: Vec<usize> = (0..g.len()).collect();
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    if find(&mut parent, i) != find(&mut parent, j) && is_isomorphic(&mods[i], &mods[j])? {
                        union(&mut parent, i, j);
                    }
                }
            }
            let mut cls: BTreeMap<usize, Vec<Profile>> = BTreeMap::new();
            for (i, p) in g.iter().enumerate() {
                let r = find(&mut parent, i);
                cls.entry(r).or_default().push(p.clone());
            }
            Ok(cls.into_values().collect())
        })
        .collect::<Result<_>>()?;
    Ok(classes.into_iter().flatten().collect())
}

pub fn run_census(k: u32, n: u32, opts: &CensusOptions) -> Result<CensusReport> {
    check_params(k, n, opts.max_n)?;
    let rims = Rim::all(k, n);
    let rank1: Vec<bool> = rims
        .par_iter()
        .map(|r| is_rigid_with(&build_rank1(r), &opts.policy))
        .collect::<Result<_>>()?;
    let rank1_count = rank1.iter().filter(|&&b| b).count();

    let all = candidate_pairs(k, n);
    let candidates = all.len();
    let chosen: Vec<Profile> = match opts.sample {
        Some(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            all.into_iter().filter(|_| rng.gen::<f64>() < p).collect()
        }
        None => all,
    };
    let tested: Vec<CandidateResult> = chosen
        .par_iter()
        .map(|p| {
            let (a, b) = (p.layers()[0], p.layers()[1]);
            let class = a.classify_pair(&b).expect("same ambient");
            let rigid = match build_profile(p).and_then(|m| is_rigid_with(&m, &opts.policy)) {
                Ok(v) => Ok(Some(v)),
                Err(Error::TruncationUnstable(_)) => Ok(None),
                Err(e) => Err(e),
            }?;
            Ok(CandidateResult {
                profile: p.clone(),
                interlacing: class.interlacing_degree,
                tight: class.tight,
                rigid,
            })
        })
        .collect::<Result<_>>()?;

    let mut notes = Vec::new();
    for t in tested.iter().filter(|t| t.rigid.is_none()) {
        notes.push(format!("rigidity of {} did not stabilize below the precision cap", t.profile));
    }
    let rigid: Vec<Profile> = tested.iter().filter(|t| t.rigid == Some(true)).map(|t| t.profile.clone()).collect();
    let classes = isomorphism_classes(&rigid)?;
    let mut entries: Vec<RigidEntry> = classes
        .par_iter()
        .map(|cls| {
            let label = canonical_label(cls)?;
            let mut realized = cls.clone();
            realized.sort_by_key(profile_key);
            let (a, b) = (label.layers()[0], label.layers()[1]);
            Ok(RigidEntry {
                a_vector: a_vector(&label),
                root: classify_module_root(&label),
                tight: a.classify_pair(&b)?.tight,
                profile: label,
                realized_as: realized,
                shift_orbit: 0,
            })
        })
        .collect::<Result<_>>()?;
    entries.sort_by_key(|e| profile_key(&e.profile));

    let index: HashMap<Profile, usize> = entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.realized_as.iter().map(move |p| (p.clone(), i)))
        .collect();
    let mut parent: Vec<usize> = (0..entries.len()).collect();
    let mut shift_closed = true;
    for (i, e) in entries.iter().enumerate() {
        if let Some(&j) = index.get(&e.profile.shift(1)) {
            union(&mut parent, i, j);
        }
        if !index.contains_key(&e.profile.shift(k as i64)) {
            shift_closed = false;
        }
    }
    let mut orbit_ids: HashMap<usize, usize> = HashMap::new();
    for i in 0..entries.len() {
        let r = find(&mut parent, i);
        let next = orbit_ids.len();
        entries[i].shift_orbit = *orbit_ids.entry(r).or_insert(next);
    }

    let swapped = |e: &RigidEntry| index.get(&e.profile.reversed()).map(|&j| &entries[j]);
    let swap_closed_real = entries
        .iter()
        .filter(|e| e.root == RootClass::Real)
        .all(|e| swapped(e).is_some_and(|s| s.root == RootClass::Real));
    let imaginary_swaps_present = entries
        .iter()
        .filter(|e| e.root == RootClass::Imaginary)
        .filter(|e| swapped(e).is_some())
        .count();

    let counts = CensusCounts {
        rigid: entries.len(),
        real: entries.iter().filter(|e| e.root == RootClass::Real).count(),
        imaginary: entries.iter().filter(|e| e.root == RootClass::Imaginary).count(),
        rigid_profiles: rigid.len(),
    };

    let mut fiber_defects = Vec::new();
    if opts.sample.is_none() && k >= 3 {
        for root in enumerate_degree2_real_roots(k, n) {
            let hits = entries.iter().filter(|e| e.a_vector == root.entries).count();
            if hits != 2 {
                fiber_defects.push(format!("{:?} is hit by {hits} entries", root.entries));
            }
        }
    }

    let mut report = CensusReport {
        k,
        n,
        version: CENSUS_VERSION.to_string(),
        trunc: opts.policy.initial.unwrap_or(2 * n),
        sample: opts.sample,
        rank1_count,
        candidates,
        tested,
        rank2_rigid: entries,
        counts,
        swap_closed_real,
        imaginary_swaps_present,
        shift_closed,
        fiber_defects,
        fixture: census_fixture(k, n),
        fixture_diffs: Vec::new(),
        notes,
    };
    report.fixture_diffs = fixture_diffs(&report);
    if (k, n) == (4, 8) {
        log_negative_control(&mut report, opts)?;
    }
    Ok(report)
}

fn log_negative_control(report: &mut CensusReport, opts: &CensusOptions) -> Result<()> {
    let p: Profile = "1247|3568@(4,8)".parse()?;
    let listed = report.rank2_rigid.iter().any(|e| e.profile == p);
    let raw = is_rigid_with(&build_profile(&p)?, &opts.policy)?;
    let class = report.entry(&p).map(|e| e.profile.to_string()).unwrap_or_else(|| "none".into());
    report.notes.push(format!(
        "1247|3568: listed = {listed}; generic module rigid = {raw}; isomorphism class label = {class}"
    ));
    if listed {
        report.fixture_diffs.push("1247|3568 appears as a census label".into());
    }
    Ok(())
}

/// Differences between a full census and the published counts.
pub fn fixture_diffs(r: &CensusReport) -> Vec<String> {
    let mut d = Vec::new();
    if r.sample.is_some() {
        return d;
    }
    let Some(f) = &r.fixture else { return d };
    let mut cmp = |what: &str, got: usize, want: usize| {
        if got != want {
            d.push(format!("{what}: computed {got}, expected {want}"));
        }
    };
    cmp("rank one rigid", r.rank1_count, f.rank1);
    cmp("rank two rigid", r.counts.rigid, f.rank2);
    cmp("rank two real", r.counts.real, f.real);
    cmp("rank two imaginary", r.counts.imaginary, f.imaginary);
    if f.imaginary > 0 {
        let orbits: Vec<usize> = r
            .rank2_rigid
            .iter()
            .filter(|e| e.root == RootClass::Imaginary)
            .map(|e| e.shift_orbit)
            .collect();
        if orbits.windows(2).any(|w| w[0] != w[1]) {
            d.push("imaginary entries span several shift orbits".into());
        }
        let anchor: Profile = format!("1246|3578@({},{})", r.k, r.n).parse().expect("valid");
        if !r.rank2_rigid.iter().any(|e| e.root == RootClass::Imaginary && e.profile == anchor) {
            d.push("1246|3578 is not an imaginary entry".into());
        }
    }
    if (r.k, r.n) == (3, 6) && r.labels() != ["135|246", "246|135"] {
        d.push(format!("expected 135|246 and 246|135, got {:?}", r.labels()));
    }
    if !r.swap_closed_real {
        d.push("real entries are not closed under layer swap".into());
    }
    if !r.shift_closed {
        d.push("entries are not closed under shift by k".into());
    }
    d.extend(r.fiber_defects.iter().cloned());
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub instances: usize,
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub k: u32,
    pub n: u32,
    /// Every tightly 3-interlacing pair gives a rigid module.
    pub tight_pairs_rigid: Verdict,
    /// No pair interlacing to degree four or more gives a rigid module.
    pub high_interlacing_not_rigid: Verdict,
    /// Real-root rigid count equals `2 C(n,6) C(n-6,k-3)`.
    pub counting: Verdict,
    pub expected_count: u64,
}

fn verdict<'a>(it: impl Iterator<Item = &'a CandidateResult>, ok: impl Fn(&CandidateResult) -> bool) -> Verdict {
    let mut instances = 0;
    let mut counterexamples = Vec::new();
    for c in it {
        instances += 1;
        if !ok(c) {
            counterexamples.push(c.profile.to_string());
        }
    }
    Verdict { holds: counterexamples.is_empty(), instances, counterexamples }
}

pub fn verify_conjectures(report: &CensusReport) -> ConjectureReport {
    let tight_pairs_rigid = verdict(report.tested.iter().filter(|c| c.tight), |c| c.rigid == Some(true));
    let high_interlacing_not_rigid =
        verdict(report.tested.iter().filter(|c| c.interlacing >= 4), |c| c.rigid == Some(false));
    let expected = expected_rigid_rank2_count(report.k, report.n);
    let counting = Verdict {
        holds: report.sample.is_none() && report.counts.real as u64 == expected,
        instances: report.counts.real,
        counterexamples: Vec::new(),
    };
    ConjectureReport {
        k: report.k,
        n: report.n,
        tight_pairs_rigid,
        high_interlacing_not_rigid,
        counting,
        expected_count: expected,
    }
}

/// Cache file for a census run.
pub fn cache_path(dir: &Path, k: u32, n: u32, trunc: u32) -> PathBuf {
    dir.join(format!("census-{k}-{n}-t{trunc}-v{CENSUS_VERSION}.json"))
}

pub fn load_cached(path: &Path) -> Option<CensusReport> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn store(path: &Path, report: &CensusReport) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(path, text + "\n")
}

/// Entries that differ between two censuses of the same parameters.
pub fn diff_reports(old: &CensusReport, new: &CensusReport) -> Vec<String> {
    let a: Vec<String> = old.labels();
    let b: Vec<String> = new.labels();
    let mut d: Vec<String> = a.iter().filter(|x| !b.contains(x)).map(|x| format!("- {x}")).collect();
    d.extend(b.iter().filter(|x| !a.contains(x)).map(|x| format!("+ {x}")));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_census() {
        let r = run_census(3, 6, &CensusOptions::default()).unwrap();
        assert_eq!(r.rank1_count, 20);
        assert_eq!(r.labels(), ["135|246", "246|135"]);
        assert!(r.fixture_diffs.is_empty(), "{:?}", r.fixture_diffs);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CensusReport>(&json).unwrap(), r);
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(candidate_pairs(3, 6).len(), 2);
        assert!(candidate_pairs(2, 6).is_empty());
    }

    #[test]
    fn parameter_checks() {
        assert!(run_census(4, 7, &CensusOptions::default()).is_err());
        assert!(run_census(3, 10, &CensusOptions::default()).is_err());
    }

    #[test]
    fn sampled_runs_skip_fixtures() {
        let opts = CensusOptions { sample: Some(0.5), seed: 7, ..Default::default() };
        let r = run_census(3, 7, &opts).unwrap();
        assert!(r.fixture_diffs.is_empty());
        assert!(r.tested.len() <= r.candidates);
    }
}
