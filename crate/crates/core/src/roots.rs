//! Root-lattice side: layer multiplicity vectors, the quadratic form and
//! degree-two real roots.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cm::a_vector;
use crate::dvr::Q;
use crate::error::{Error, Result};
use crate::rims::Profile;

/// Lattice vector in `Z^n` whose coordinate sum is divisible by `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector {
    pub entries: Vec<i64>,
    pub k: u32,
}

impl RootVector {
    pub fn new(entries: Vec<i64>, k: u32) -> Result<RootVector> {
        let sum: i64 = entries.iter().sum();
        if k == 0 || sum.rem_euclid(k as i64) != 0 {
            return Err(Error::OutOfRange(format!("coordinate sum {sum} is not divisible by k = {k}")));
        }
        Ok(RootVector { entries, k })
    }

    pub fn of_profile(p: &Profile) -> RootVector {
        RootVector { entries: a_vector(p), k: p.k() }
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().sum::<i64>() / self.k as i64
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }
}

/// `q(a) = Σ a_i² + ((2 - k) / k²) (Σ a_i)²`.
pub fn q_form(a: &RootVector) -> Q {
    let sq: i64 = a.entries.iter().map(|x| x * x).sum();
    let s: i64 = a.entries.iter().sum();
    let k = a.k as i64;
    Q::from_integer(BigInt::from(sq)) + Q::new(BigInt::from((2 - k) * s * s), BigInt::from(k * k))
}

/// Integer value of `q`; exact because the coordinate sum is a multiple of `k`.
pub fn q_value(a: &RootVector) -> i64 {
    let sq: i64 = a.entries.iter().map(|x| x * x).sum();
    let d = a.degree();
    sq + (2 - a.k as i64) * d * d
}

/// Coordinates in the basis `α_1, ..., α_{n-1}, β` with `α_i = -e_i + e_{i+1}`
/// and `β = e_1 + ... + e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCoords {
    pub c: Vec<i64>,
    pub d: i64,
}

impl RootCoords {
    pub fn reconstruct(&self, k: u32) -> Vec<i64> {
        let n = self.c.len() + 1;
        let mut a = vec![0i64; n];
        for (i, &ci) in self.c.iter().enumerate() {
            a[i] -= ci;
            a[i + 1] += ci;
        }
        for x in a.iter_mut().take(k as usize) {
            *x += self.d;
        }
        a
    }
}

pub fn root_coordinates(a: &RootVector) -> Option<RootCoords> {
    let n = a.n();
    if n < 2 {
        return None;
    }
    let d = a.degree();
    let mut c = Vec::with_capacity(n - 1);
    let mut prev = 0i64;
    for j in 0..n - 1 {
        let beta = if j < a.k as usize { d } else { 0 };
        prev = prev + beta - a.entries[j];
        c.push(prev);
    }
    let last_beta = if n <= a.k as usize { d } else { 0 };
    if a.entries[n - 1] != prev + last_beta {
        return None;
    }
    Some(RootCoords { c, d })
}

/// Largest entry a degree-two vector with `q = 2` can have.
///
/// With `Σ a = 2k` and one entry equal to `m`, `Σ a² >= m² + 2k - m`, while
/// `q = 2` forces `Σ a² = 4k - 6`; so `m² - m <= 2k - 6`.
pub fn degree2_entry_bound(k: u32) -> i64 {
    let mut m = 2i64;
    while (m + 1) * m <= 2 * k as i64 - 6 {
        m += 1;
    }
    m
}

/// All `a >= 0` with `Σ a_i = 2k` and `q(a) = 2`, lexicographically.
pub fn enumerate_degree2_real_roots(k: u32, n: u32) -> Vec<RootVector> {
    enumerate_bounded(k, n, 2, degree2_entry_bound(k))
}

/// All `a >= 0` of degree `d` with `q(a) = 2`, lexicographically.
pub fn enumerate_real_roots(k: u32, n: u32, d: u32) -> Vec<RootVector> {
    // q = 2 means Σ a² = 2 + (k - 2) d², which bounds every entry
    let target = 2 + (k as i64 - 2) * (d as i64).pow(2);
    let bound = (0..).take_while(|m: &i64| m * m <= target).last().unwrap_or(0);
    enumerate_bounded(k, n, d, bound)
}

fn enumerate_bounded(k: u32, n: u32, d: u32, bound: i64) -> Vec<RootVector> {
    let target = 2 + (k as i64 - 2) * (d as i64).pow(2);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n as usize);
    fn go(cur: &mut Vec<i64>, left: i64, sq: i64, n: usize, bound: i64, target: i64, k: u32, out: &mut Vec<RootVector>) {
        if cur.len() == n {
            if left == 0 && sq == target {
                out.push(RootVector { entries: cur.clone(), k });
            }
            return;
        }
        for v in 0..=bound.min(left) {
            if sq + v * v > target {
                break;
            }
            cur.push(v);
            go(cur, left - v, sq + v * v, n, bound, target, k, out);
            cur.pop();
        }
    }
    go(&mut cur, (d * k) as i64, 0, n as usize, bound, target, k, &mut out);
    out
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `2 · C(n, 6) · C(n - 6, k - 3)`.
pub fn expected_rigid_rank2_count(k: u32, n: u32) -> u64 {
    if k < 3 || n < 6 {
        return 0;
    }
    2 * binomial(n as u64, 6) * binomial(n as u64 - 6, k as u64 - 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootClass {
    Real,
    Imaginary,
    NotARoot,
}

pub fn classify_root(a: &RootVector) -> RootClass {
    let q = q_value(a);
    if a.entries.iter().all(|&x| x == 0) || root_coordinates(a).is_none() {
        RootClass::NotARoot
    } else if q == 2 {
        RootClass::Real
    } else if q < 2 {
        RootClass::Imaginary
    } else {
        RootClass::NotARoot
    }
}

pub fn classify_module_root(p: &Profile) -> RootClass {
    classify_root(&RootVector::of_profile(p))
}
