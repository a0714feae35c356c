//! Combinatorics of k-subsets of the cyclic index set {1, ..., n}.
//!
//! Labels run over `1..=n`; the vertex usually called 0 is represented by `n`.
//! A [`Rim`] stores its elements as a bitmask, bit `i - 1` standing for label `i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Reduce an arbitrary integer to a label in `1..=n`.
pub fn wrap(x: i64, n: u32) -> u32 {
    let n = n as i64;
    ((x - 1).rem_euclid(n) + 1) as u32
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rim {
    n: u32,
    mask: u64,
}

impl Rim {
    pub fn new(n: u32, elements: &[u32]) -> Result<Rim> {
        if !(2..=63).contains(&n) {
            return Err(Error::InvalidRim(format!("ambient size {n} out of range")));
        }
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::InvalidRim(format!("element {e} not in [1,{n}]")));
            }
            if mask & (1 << (e - 1)) != 0 {
                return Err(Error::InvalidRim(format!("repeated element {e}")));
            }
            mask |= 1 << (e - 1);
        }
        if mask == 0 {
            return Err(Error::InvalidRim("empty rim".into()));
        }
        Ok(Rim { n, mask })
    }

    /// Build from possibly unreduced labels (any integers, reduced mod n).
    pub fn from_cyclic(n: u32, elements: &[i64]) -> Result<Rim> {
        let reduced: Vec<u32> = elements.iter().map(|&e| wrap(e, n)).collect();
        Rim::new(n, &reduced)
    }

    /// The cyclic interval `{start, start+1, ..., start+len-1}`.
    pub fn interval(n: u32, start: i64, len: u32) -> Rim {
        let elems: Vec<i64> = (0..len as i64).map(|d| start + d).collect();
        Rim::from_cyclic(n, &elems).expect("interval length must be in 1..=n")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, label: u32) -> bool {
        let l = wrap(label as i64, self.n);
        self.mask & (1 << (l - 1)) != 0
    }

    pub fn elements(&self) -> Vec<u32> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    /// All k-subsets of `{1..n}` in lexicographic order of their sorted element lists.
    pub fn all(k: u32, n: u32) -> Vec<Rim> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k as usize);
        fn rec(start: u32, k: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Rim>) {
            if cur.len() as u32 == k {
                out.push(Rim::new(n, cur).unwrap());
                return;
            }
            for e in start..=n {
                cur.push(e);
                rec(e + 1, k, n, cur, out);
                cur.pop();
            }
        }
        rec(1, k, n, &mut current, &mut out);
        out
    }

    fn check_same_ambient(&self, other: &Rim) -> Result<()> {
        if self.n != other.n || self.k() != other.k() {
            return Err(Error::MismatchedAmbient(self.k(), self.n, other.k(), other.n));
        }
        Ok(())
    }

    /// Vertices `i` with `i` not in the rim and `i + 1` in it.
    pub fn peaks(&self) -> Vec<u32> {
        (1..=self.n)
            .filter(|&i| !self.contains(i) && self.contains(i + 1))
            .collect()
    }

    /// Maximal cyclic runs `(start, length)` of labels with `contains == inside`, sorted by start.
    fn runs(&self, inside: bool) -> Vec<(u32, u32)> {
        let n = self.n;
        let mut out = Vec::new();
        for s in 1..=n {
            if self.contains(s) == inside && self.contains(s + n - 1) != inside {
                let mut len = 0;
                while len < n && self.contains(s + len) == inside {
                    len += 1;
                }
                out.push((s, len));
            }
        }
        out
    }

    pub fn slopes(&self) -> SlopeData {
        let down = self.runs(true);
        let up = self.runs(false);
        let min_slope = down.iter().chain(up.iter()).map(|r| r.1).min().unwrap_or(0);
        SlopeData { down_intervals: down, up_intervals: up, min_slope }
    }

    pub fn shift(&self, m: i64) -> Rim {
        let elems: Vec<i64> = self.elements().iter().map(|&e| e as i64 + m).collect();
        Rim::from_cyclic(self.n, &elems).unwrap()
    }

    /// `Some(j)` when the rim is the projective rim `{j+1, ..., j+k}`.
    pub fn is_projective(&self) -> Option<u32> {
        if self.k() == self.n {
            return None;
        }
        let runs = self.runs(true);
        if runs.len() == 1 {
            Some(wrap(runs[0].0 as i64 - 1, self.n))
        } else {
            None
        }
    }

    /// All decompositions `(i, j)` with the rim equal to `{i} ∪ [j, j+k-2]`.
    pub fn almost_consecutive_decompositions(&self) -> Vec<(u32, u32)> {
        let runs = self.runs(true);
        if runs.len() != 2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (a, b) in [(runs[0], runs[1]), (runs[1], runs[0])] {
            if a.1 == 1 {
                out.push((a.0, b.0));
            }
        }
        out.sort();
        out
    }

    /// The normalized decomposition `(i, j)`: singleton `{i}` plus interval starting at `j`.
    pub fn is_almost_consecutive(&self) -> Option<(u32, u32)> {
        self.almost_consecutive_decompositions().first().copied()
    }

    fn require_almost_consecutive(&self) -> Result<(u32, u32)> {
        self.is_almost_consecutive()
            .ok_or_else(|| Error::NotAlmostConsecutive(self.to_string()))
    }

    /// The rim of the syzygy of an almost consecutive rank one module:
    /// `{i+1, ..., i+k-1, j+k-1}`.
    pub fn syzygy_rim(&self) -> Result<Rim> {
        let (i, j) = self.require_almost_consecutive()?;
        let k = self.k() as i64;
        let mut elems: Vec<i64> = (1..k).map(|d| i as i64 + d).collect();
        elems.push(j as i64 + k - 1);
        Rim::from_cyclic(self.n, &elems)
    }

    pub fn crossing(&self, other: &Rim) -> Result<bool> {
        Ok(self.interlacing_degree(other)? >= 2)
    }

    /// Half the number of maximal same-side runs of the symmetric difference,
    /// read in cyclic order.
    pub fn interlacing_degree(&self, other: &Rim) -> Result<u32> {
        self.check_same_ambient(other)?;
        let sides: Vec<bool> = (1..=self.n)
            .filter_map(|i| match (self.contains(i), other.contains(i)) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            })
            .collect();
        if sides.is_empty() {
            return Ok(0);
        }
        let changes = (0..sides.len())
            .filter(|&p| sides[p] != sides[(p + 1) % sides.len()])
            .count() as u32;
        Ok(changes / 2)
    }

    pub fn intersection_size(&self, other: &Rim) -> u32 {
        (self.mask & other.mask).count_ones()
    }

    pub fn classify_pair(&self, other: &Rim) -> Result<PairClass> {
        let r = self.interlacing_degree(other)?;
        let inter = self.intersection_size(other);
        Ok(PairClass {
            intersection_size: inter,
            interlacing_degree: r,
            crossing: r >= 2,
            tight: r == 3 && inter + 3 == self.k(),
        })
    }

    /// Middle term of the AR sequence starting at an almost consecutive rim.
    pub fn ar_middle_profile(&self) -> Result<ArMiddle> {
        let (i, j) = self.require_almost_consecutive()?;
        let n = self.n;
        let k = self.k() as i64;
        let (i64_, j64) = (i as i64, j as i64);
        if wrap(i64_ + 2, n) == j {
            let mut u = vec![i64_];
            u.extend((i64_ + 2)..=(k + i64_ - 1));
            u.push(k + i64_ + 1);
            let rank1 = Rim::from_cyclic(n, &u)?;
            return Ok(ArMiddle::Decomposition { projective: i, rank1 });
        }
        let mut x = vec![i64_ + 1];
        x.extend(j64..=(j64 + k - 3));
        x.push(j64 + k - 1);
        let x = Rim::from_cyclic(n, &x)?;
        let omega = self.syzygy_rim()?;
        // Y = (I ⊎ J) − X as multisets
        let mut counts = vec![0i32; n as usize + 1];
        for e in self.elements().into_iter().chain(omega.elements()) {
            counts[e as usize] += 1;
        }
        for e in x.elements() {
            counts[e as usize] -= 1;
        }
        let mut y = Vec::new();
        for (e, &c) in counts.iter().enumerate().skip(1) {
            match c {
                0 => {}
                1 => y.push(e as u32),
                _ => {
                    return Err(Error::InvalidRim(format!(
                        "AR middle bottom layer is not a set for {self}"
                    )))
                }
            }
        }
        let y = Rim::new(n, &y)?;
        Ok(ArMiddle::Profile(Profile::new(vec![x, y])?))
    }

    /// Projective rim `{j+1, ..., j+k}`.
    pub fn projective(k: u32, n: u32, j: u32) -> Rim {
        Rim::interval(n, j as i64 + 1, k)
    }
}

impl fmt::Display for Rim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.elements();
        if self.n <= 9 {
            for x in e {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let s: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", s.join(","))
        }
    }
}

impl fmt::Debug for Rim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rim({}; n={})", self, self.n)
    }
}

impl Serialize for Rim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeData {
    /// Runs of rim elements, `(start, length)`.
    pub down_intervals: Vec<(u32, u32)>,
    /// Runs of non-elements, `(start, length)`.
    pub up_intervals: Vec<(u32, u32)>,
    pub min_slope: u32,
}

impl SlopeData {
    pub fn down_lengths(&self) -> Vec<u32> {
        self.down_intervals.iter().map(|r| r.1).collect()
    }
    pub fn up_lengths(&self) -> Vec<u32> {
        self.up_intervals.iter().map(|r| r.1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub intersection_size: u32,
    pub interlacing_degree: u32,
    pub crossing: bool,
    pub tight: bool,
}

impl PairClass {
    /// The quotient poset `(1^r,2)`, when the rims differ.
    pub fn poset(&self) -> Option<String> {
        (self.interlacing_degree >= 1).then(|| format!("(1^{},2)", self.interlacing_degree))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArMiddle {
    /// Indecomposable middle term with profile `X|Y`.
    Profile(Profile),
    /// `P_projective ⊕ L_rank1`.
    Decomposition { projective: u32, rank1: Rim },
}

/// Ordered rank one layers of a module, top (quotient) layer first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    layers: Vec<Rim>,
}

impl Profile {
    pub fn new(layers: Vec<Rim>) -> Result<Profile> {
        let first = layers
            .first()
            .ok_or_else(|| Error::InvalidRim("empty profile".into()))?;
        for l in &layers[1..] {
            first.check_same_ambient(l)?;
        }
        Ok(Profile { layers })
    }

    pub fn single(rim: Rim) -> Profile {
        Profile { layers: vec![rim] }
    }

    pub fn pair(top: Rim, bottom: Rim) -> Result<Profile> {
        Profile::new(vec![top, bottom])
    }

    pub fn layers(&self) -> &[Rim] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.layers[0].n()
    }

    pub fn k(&self) -> u32 {
        self.layers[0].k()
    }

    pub fn shift(&self, m: i64) -> Profile {
        Profile { layers: self.layers.iter().map(|r| r.shift(m)).collect() }
    }

    pub fn reversed(&self) -> Profile {
        let mut layers = self.layers.clone();
        layers.reverse();
        Profile { layers }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.layers.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", s.join("|"))
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({}; k={}, n={})", self, self.k(), self.n())
    }
}

impl Profile {
    /// Self-describing text form, e.g. `135|246@(3,6)`; accepted by [`parse_profile`].
    pub fn qualified(&self) -> String {
        format!("{self}@({},{})", self.k(), self.n())
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.qualified())
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Profile, D::Error> {
        let text = String::deserialize(d)?;
        parse_profile(&text).map_err(serde::de::Error::custom)
    }
}

fn parse_rim_body(body: &str, n: u32) -> Result<Rim> {
    let body = body.trim().trim_start_matches('{').trim_end_matches('}');
    let elems: Vec<u32> = if body.contains(',') || body.contains(' ') {
        body.split(|c| c == ',' || c == ' ')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?
    } else {
        if n > 9 {
            return Err(Error::Parse(format!(
                "digit-string rim '{body}' is ambiguous for n = {n}; use commas"
            )));
        }
        body.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("bad digit '{c}'"))))
            .collect::<Result<_>>()?
    };
    Rim::new(n, &elems)
}

/// Parse `"<rims>@(k,n)"` where `<rims>` is `145`, `1,4,5` or `135|246`.
/// Returns the profile; rims must all have size k.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let (body, params) = text
        .split_once('@')
        .ok_or_else(|| Error::Parse(format!("expected '<rims>@(k,n)', got '{text}'")))?;
    let params = params.trim().trim_start_matches('(').trim_end_matches(')');
    let (k, n) = params
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected '(k,n)', got '{params}'")))?;
    let k: u32 = k.trim().parse().map_err(|_| Error::Parse(format!("bad k '{k}'")))?;
    let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad n '{n}'")))?;
    let layers = body
        .split('|')
        .map(|b| parse_rim_body(b, n))
        .collect::<Result<Vec<_>>>()?;
    for l in &layers {
        if l.k() != k {
            return Err(Error::InvalidRim(format!("rim {l} does not have {k} elements")));
        }
    }
    Profile::new(layers)
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Profile> {
        parse_profile(s)
    }
}

/// Parse a single rim in the `"145@(3,8)"` form.
pub fn parse_rim(text: &str) -> Result<Rim> {
    let p = parse_profile(text)?;
    if p.len() != 1 {
        return Err(Error::Parse(format!("expected one rim, got profile {p}")));
    }
    Ok(p.layers[0])
}
