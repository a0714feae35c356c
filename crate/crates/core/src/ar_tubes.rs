//! Syzygy orbits, almost split sequences of rank one modules, and the
//! tube-mouth census of the tame cases.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{run_census, CensusOptions, CensusReport};
use crate::cm::{a_vector, build_profile, build_rank1, identify_rank1, CMModuleRep};
use crate::error::{Error, Result};
use crate::homological::{
    ext1, identify_rank2, is_indecomposable, is_isomorphic, is_rigid, profile_key, syzygy,
};
use crate::rims::{ArMiddle, Profile, Rim};
#[cfg(test)]
use crate::rims::parse_rim;

/// `2v` with `v = lcm(n, k) / k`; every orbit period divides it.
pub fn two_v(k: u32, n: u32) -> usize {
    2 * (n.lcm(&k) / k) as usize
}

/// One module in an orbit. Rank one and two members carry their profile;
/// higher ranks are reported by rank only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitMember {
    pub rank: usize,
    pub profile: Option<Profile>,
}

impl fmt::Display for OrbitMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.profile {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "rk{}", self.rank),
        }
    }
}

fn describe(m: &CMModuleRep) -> Result<OrbitMember> {
    let profile = match m.rank() {
        1 => Some(Profile::single(identify_rank1(m)?)),
        2 => identify_rank2(m)?,
        _ => None,
    };
    Ok(OrbitMember { rank: m.rank(), profile })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauOrbit {
    /// Lexicographically least identified member.
    pub representative: Profile,
    /// Successive syzygies, starting at the representative.
    pub members: Vec<OrbitMember>,
    pub period: usize,
}

impl TauOrbit {
    pub fn contains(&self, p: &Profile) -> bool {
        self.members.iter().any(|m| m.profile.as_ref() == Some(p))
    }
}

/// Orbit of a non-projective rank one module or a rank two profile under the syzygy.
pub fn tau_orbit(start: &Profile) -> Result<TauOrbit> {
    if start.len() == 1 && start.layers()[0].is_projective().is_some() {
        return Err(Error::ProjectiveInput);
    }
    let m0 = build_profile(start)?;
    let bound = two_v(start.k(), start.n());
    let mut members = vec![describe(&m0)?];
    let mut cur = m0.clone();
    let period = loop {
        cur = syzygy(&cur)?;
        if cur.rank() == m0.rank() && is_isomorphic(&cur, &m0)? {
            break members.len();
        }
        if members.len() >= bound {
            return Err(Error::OutOfRange(format!("orbit of {start} did not close within {bound} steps")));
        }
        members.push(describe(&cur)?);
    };
    // rotate so that the least identified member comes first
    let (best, representative) = members
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.profile.clone().map(|p| (i, p)))
        .min_by_key(|(_, p)| profile_key(p))
        .unwrap_or((0, start.clone()));
    members.rotate_left(best);
    Ok(TauOrbit { representative, members, period })
}

/// An almost split sequence `0 -> L_left -> middle -> L_right -> 0` with
/// `L_right` the syzygy of `L_left`, together with the checks made on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ARSequence {
    pub left: Rim,
    pub middle: ArMiddle,
    pub right: Rim,
    /// The computed syzygy of `L_left` is `L_right`.
    pub right_is_syzygy: bool,
    /// Layer multiplicities add up along the sequence.
    pub additive: bool,
    /// `dim Ext^1(L_right, L_left)`, nonzero for a non-split sequence.
    pub ext_dim: u32,
    pub middle_rigid: bool,
    pub middle_indecomposable: bool,
}

fn middle_module(mid: &ArMiddle, k: u32, n: u32) -> Result<(CMModuleRep, Vec<i64>)> {
    match mid {
        ArMiddle::Profile(p) => Ok((build_profile(p)?, a_vector(p))),
        ArMiddle::Decomposition { projective, rank1 } => {
            let p = Rim::projective(k, n, *projective);
            let m = build_rank1(&p).direct_sum(&build_rank1(rank1))?;
            let a = a_vector(&Profile::pair(p, *rank1)?);
            Ok((m, a))
        }
    }
}

pub fn ar_sequence(rim: &Rim) -> Result<ARSequence> {
    if rim.is_projective().is_some() {
        return Err(Error::ProjectiveInput);
    }
    let middle = rim.ar_middle_profile()?;
    let right = rim.syzygy_rim()?;
    let (k, n) = (rim.k(), rim.n());
    let left_m = build_rank1(rim);
    let right_m = build_rank1(&right);
    let right_is_syzygy = identify_rank1(&syzygy(&left_m)?).ok() == Some(right);
    let (mid, mid_a) = middle_module(&middle, k, n)?;
    let ends = a_vector(&Profile::pair(*rim, right)?);
    Ok(ARSequence {
        left: *rim,
        right,
        right_is_syzygy,
        additive: mid_a == ends,
        ext_dim: ext1(&right_m, &left_m)?.total_dim,
        middle_rigid: is_rigid(&mid)?,
        middle_indecomposable: is_indecomposable(&mid)?,
        middle,
    })
}

#[derive(Debug, Clone, Deserialize)]
struct TubeFixtureFile {
    k: u32,
    n: u32,
    tubes: Vec<TubeFixture>,
}

/// A stored tube: its rank and rows of consecutive orbit members.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TubeFixture {
    pub tube: String,
    pub rank: usize,
    #[serde(default)]
    pub membership_only: bool,
    pub rows: Vec<Vec<String>>,
}

const FIXTURE_3_9: &str = include_str!("../fixtures/tubes-3-9.json");
const FIXTURE_4_8: &str = include_str!("../fixtures/tubes-4-8.json");

pub fn tube_fixtures(k: u32, n: u32) -> Vec<TubeFixture> {
    let text = match (k, n) {
        (3, 9) => FIXTURE_3_9,
        (4, 8) => FIXTURE_4_8,
        _ => return Vec::new(),
    };
    let file: TubeFixtureFile = serde_json::from_str(text).expect("embedded fixture parses");
    assert_eq!((file.k, file.n), (k, n));
    file.tubes
}

/// A fixture entry: a profile of at most two layers, or a rank.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Expected {
    Known(Profile),
    Rank(usize),
}

fn parse_entry(text: &str, k: u32, n: u32) -> Result<Expected> {
    let p: Profile = format!("{text}@({k},{n})").parse()?;
    Ok(if p.len() <= 2 { Expected::Known(p) } else { Expected::Rank(p.len()) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub tube: String,
    pub row: usize,
    pub matched: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeCensus {
    pub k: u32,
    pub n: u32,
    pub tame: bool,
    pub banner: Option<String>,
    pub two_v: usize,
    pub orbits: Vec<TauOrbit>,
    /// Period -> number of orbits.
    pub periods: BTreeMap<usize, usize>,
    pub periods_divide_two_v: bool,
    pub attains_two_v: bool,
    /// Places where two syzygy steps differ from the shift by `k`.
    pub omega_squared_defects: Vec<String>,
    pub fixtures: Vec<FixtureCheck>,
    pub fixture_diffs: Vec<String>,
    pub notes: Vec<String>,
}

/// Label of the census class containing `p`, or `p` itself for rank one.
fn class_label(p: &Profile, census: &CensusReport) -> Option<Profile> {
    if p.len() == 1 {
        return Some(p.clone());
    }
    census.entry(p).map(|e| e.profile.clone())
}

fn member_matches(m: &OrbitMember, e: &Expected, census: &CensusReport) -> bool {
    match e {
        Expected::Rank(r) => m.rank == *r,
        Expected::Known(p) => m.rank == p.len() && m.profile.is_some() && m.profile == class_label(p, census),
    }
}

fn check_row(row: &[Expected], tube: &TubeFixture, orbits: &[TauOrbit], census: &CensusReport) -> (bool, String) {
    if tube.membership_only {
        let missing: Vec<String> = row
            .iter()
            .filter(|e| !orbits.iter().any(|o| o.members.iter().any(|m| member_matches(m, e, census))))
            .map(|e| format!("{e:?}"))
            .collect();
        return if missing.is_empty() {
            (true, "all members found".into())
        } else {
            (false, format!("not found: {}", missing.join(", ")))
        };
    }
    for o in orbits {
        for off in 0..o.period {
            let ok = row
                .iter()
                .enumerate()
                .all(|(i, e)| member_matches(&o.members[(off + i) % o.period], e, census));
            if ok {
                return if o.period == tube.rank {
                    (true, format!("orbit of {} (period {})", o.representative, o.period))
                } else {
                    (false, format!("orbit of {} has period {}, tube rank {}", o.representative, o.period, tube.rank))
                };
            }
        }
    }
    (false, "no computed orbit contains this row".into())
}

/// Group every non-projective rank one module and every rigid rank two class into
/// syzygy orbits and compare with the stored tube fixtures.
pub fn tube_census(k: u32, n: u32, opts: &CensusOptions) -> Result<TubeCensus> {
    let census = run_census(k, n, opts)?;
    tube_census_with(&census)
}

pub fn tube_census_with(census: &CensusReport) -> Result<TubeCensus> {
    let (k, n) = (census.k, census.n);
    let tame = matches!((k, n), (3, 9) | (4, 8));
    let mut seeds: Vec<Profile> = Rim::all(k, n)
        .into_iter()
        .filter(|r| r.is_projective().is_none())
        .map(Profile::single)
        .collect();
    seeds.extend(census.rank2_rigid.iter().map(|e| e.profile.clone()));
    // seeds related by the shift by k lie in one orbit; compute one orbit per class
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for s in &seeds {
        if seen.insert(s.clone()) {
            reps.push(s.clone());
            let mut t = s.shift(k as i64);
            while seen.insert(t.clone()) {
                t = t.shift(k as i64);
            }
        }
    }
    let computed: Vec<TauOrbit> = reps.par_iter().map(tau_orbit).collect::<Result<_>>()?;
    let mut orbits: Vec<TauOrbit> = Vec::new();
    for o in computed {
        if !orbits.iter().any(|x| x.representative == o.representative) {
            orbits.push(o);
        }
    }
    orbits.sort_by_key(|o| profile_key(&o.representative));

    let tv = two_v(k, n);
    let mut periods = BTreeMap::new();
    for o in &orbits {
        *periods.entry(o.period).or_insert(0) += 1;
    }
    let mut omega_squared_defects = Vec::new();
    for o in &orbits {
        for i in 0..o.period {
            let (a, b) = (&o.members[i], &o.members[(i + 2) % o.period]);
            if let (Some(p), Some(q)) = (&a.profile, &b.profile) {
                if class_label(&p.shift(k as i64), census).as_ref() != Some(q) {
                    omega_squared_defects.push(format!("{p} -> {q}"));
                }
            }
        }
    }

    let mut fixtures = Vec::new();
    for tube in tube_fixtures(k, n) {
        for (ri, row) in tube.rows.iter().enumerate() {
            let parsed = row.iter().map(|e| parse_entry(e, k, n)).collect::<Result<Vec<_>>>()?;
            let (matched, detail) = check_row(&parsed, &tube, &orbits, census);
            fixtures.push(FixtureCheck { tube: tube.tube.clone(), row: ri + 1, matched, detail });
        }
    }
    let fixture_diffs = fixtures
        .iter()
        .filter(|f| !f.matched)
        .map(|f| format!("tube {} row {}: {}", f.tube, f.row, f.detail))
        .collect();

    let mut notes = Vec::new();
    if (k, n) == (3, 9) {
        let p3 = periods.get(&3).copied().unwrap_or(0);
        notes.push(format!(
            "{p3} orbits of period 3 contain rank one or two modules; compare the prose count of rank three tubes (two types, three tubes each)"
        ));
    }
    Ok(TubeCensus {
        k,
        n,
        tame,
        banner: (!tame).then(|| "non-tame: orbits only".to_string()),
        two_v: tv,
        periods_divide_two_v: orbits.iter().all(|o| tv % o.period == 0),
        attains_two_v: orbits.iter().any(|o| o.period == tv),
        orbits,
        periods,
        omega_squared_defects,
        fixtures,
        fixture_diffs,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn names(o: &TauOrbit) -> Vec<String> {
        o.members.iter().map(|m| m.to_string()).collect()
    }

    #[test]
    fn orbit_examples() {
        let o = tau_orbit(&p("145@(3,9)")).unwrap();
        assert_eq!(o.period, 6);
        assert_eq!(names(&o), ["127", "389", "145", "236", "478", "569"]);
        let o = tau_orbit(&p("126@(3,9)")).unwrap();
        assert_eq!((o.period, names(&o)), (3, vec!["126".into(), "378".into(), "459".into()]));
        let o = tau_orbit(&p("147@(3,9)")).unwrap();
        assert_eq!((o.period, names(&o)), (2, vec!["147".into(), "258|369".into()]));
        assert!(matches!(tau_orbit(&p("123@(3,9)")), Err(Error::ProjectiveInput)));
    }

    #[test]
    fn orbit_is_independent_of_start() {
        let a = tau_orbit(&p("145@(3,9)")).unwrap();
        let b = tau_orbit(&p("478@(3,9)")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ar_sequence_examples() {
        let s = ar_sequence(&parse_rim("145@(3,8)").unwrap()).unwrap();
        assert_eq!(s.middle, ArMiddle::Profile(p("246|135@(3,8)")));
        assert_eq!(s.right.to_string(), "236");
        assert!(s.right_is_syzygy && s.additive && s.middle_rigid && s.middle_indecomposable);
        assert!(s.ext_dim > 0);

        let s = ar_sequence(&parse_rim("134@(3,8)").unwrap()).unwrap();
        let u = parse_rim("135@(3,8)").unwrap();
        assert_eq!(s.middle, ArMiddle::Decomposition { projective: 1, rank1: u });
        assert_eq!(s.right.to_string(), "235");
        assert!(s.additive && s.middle_rigid && !s.middle_indecomposable);

        let s = ar_sequence(&parse_rim("126@(3,9)").unwrap()).unwrap();
        assert_eq!(s.middle, ArMiddle::Profile(p("137|268@(3,9)")));
        assert_eq!(s.right.to_string(), "378");
        assert!(ar_sequence(&parse_rim("147@(3,9)").unwrap()).is_err());
    }

    #[test]
    fn small_tube_census() {
        let t = tube_census(3, 6, &CensusOptions::default()).unwrap();
        assert!(!t.tame && t.banner.is_some());
        assert_eq!(t.two_v, 4);
        assert!(t.periods_divide_two_v);
        assert!(t.omega_squared_defects.is_empty());
    }

    #[test]
    fn fixtures_parse() {
        assert_eq!(tube_fixtures(3, 9).len(), 14);
        assert_eq!(tube_fixtures(4, 8).len(), 15);
        assert!(tube_fixtures(3, 8).is_empty());
    }
}
