//! Concrete representations of Cohen–Macaulay modules over `B_{k,n}`.
//!
//! A module of rank `s` is stored as a free `Z`-module of rank `s` at each of
//! the `n` vertices together with the arrow matrices. Vertex `v` (0-based,
//! vertex 0 is the label `n`) carries `x[v]: V_{v-1} -> V_v` and
//! `y[v]: V_v -> V_{v-1}`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dvr::{smith_over_dvr, DVRMatrix, ValPoly, Q};
use crate::error::{Error, Result};
use crate::rims::{wrap, Profile, Rim};

/// Default working precision for parameter `n`.
pub fn default_trunc(n: u32) -> u32 {
    2 * n
}

#[derive(Clone, Debug)]
pub struct CMModuleRep {
    k: u32,
    n: u32,
    s: usize,
    x: Vec<DVRMatrix>,
    y: Vec<DVRMatrix>,
}

impl CMModuleRep {
    /// Assemble from arrow matrices, indexed by 0-based vertex.
    pub fn from_maps(k: u32, n: u32, x: Vec<DVRMatrix>, y: Vec<DVRMatrix>) -> Result<CMModuleRep> {
        if x.len() != n as usize || y.len() != n as usize {
            return Err(Error::OutOfRange(format!("expected {n} arrow matrices")));
        }
        let s = x[0].rows();
        if x.iter().chain(&y).any(|m| m.rows() != s || m.cols() != s) {
            return Err(Error::OutOfRange("arrow matrices must all be square of one size".into()));
        }
        Ok(CMModuleRep { k, n, s, x, y })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.s
    }

    pub fn trunc(&self) -> u32 {
        self.x.iter().map(|m| m.trunc()).min().unwrap_or(0)
    }

    pub fn with_trunc(&self, trunc: u32) -> CMModuleRep {
        CMModuleRep {
            k: self.k,
            n: self.n,
            s: self.s,
            x: self.x.iter().map(|m| m.with_trunc(trunc)).collect(),
            y: self.y.iter().map(|m| m.with_trunc(trunc)).collect(),
        }
    }

    /// `x` arrow into the vertex with the given (cyclic) index.
    pub fn x(&self, v: i64) -> &DVRMatrix {
        &self.x[v.rem_euclid(self.n as i64) as usize]
    }

    /// `y` arrow out of the vertex with the given (cyclic) index.
    pub fn y(&self, v: i64) -> &DVRMatrix {
        &self.y[v.rem_euclid(self.n as i64) as usize]
    }

    pub fn x_maps(&self) -> &[DVRMatrix] {
        &self.x
    }

    pub fn y_maps(&self) -> &[DVRMatrix] {
        &self.y
    }

    pub fn direct_sum(&self, o: &CMModuleRep) -> Result<CMModuleRep> {
        if (self.k, self.n) != (o.k, o.n) {
            return Err(Error::MismatchedAmbient(self.k, self.n, o.k, o.n));
        }
        let x = self.x.iter().zip(&o.x).map(|(a, b)| a.block_diag(b)).collect();
        let y = self.y.iter().zip(&o.y).map(|(a, b)| a.block_diag(b)).collect();
        Ok(CMModuleRep { k: self.k, n: self.n, s: self.s + o.s, x, y })
    }

    /// Image of a vector at vertex `from` under the shortest path generating
    /// `e_to B e_from` over `Z`: forward along `x` when the distance is at most `k`,
    /// otherwise backward along `y`.
    pub fn path_image(&self, from: u32, to: u32, v: &[ValPoly]) -> Vec<ValPoly> {
        let n = self.n as i64;
        let d = (to as i64 - from as i64).rem_euclid(n);
        let mut cur = v.to_vec();
        if d <= self.k as i64 {
            for step in 1..=d {
                cur = self.x(from as i64 + step).mul_vec(&cur);
            }
        } else {
            for step in 0..(n - d) {
                cur = self.y(from as i64 - step).mul_vec(&cur);
            }
        }
        cur
    }
}

/// A failed relation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    /// Vertex label in `1..=n`.
    pub vertex: u32,
    pub relation: String,
}

/// Check `x_i y_i = t`, `y_{i+1} x_{i+1} = t` and `x^k = y^{n-k}` at every vertex.
pub fn validate_relations(m: &CMModuleRep) -> Vec<RelationFailure> {
    let n = m.n as i64;
    let k = m.k as i64;
    let s = m.s;
    let prec = m.trunc();
    let t_id = DVRMatrix::scalar(s, 1, prec);
    let mut out = Vec::new();
    let label = |v: i64| wrap(v, m.n);
    for v in 0..n {
        if !m.x(v).mul(m.y(v)).eq_mod(&t_id, prec) {
            out.push(RelationFailure { vertex: label(v), relation: "x_i y_i = t".into() });
        }
        if !m.y(v + 1).mul(m.x(v + 1)).eq_mod(&t_id, prec) {
            out.push(RelationFailure { vertex: label(v), relation: "y_{i+1} x_{i+1} = t".into() });
        }
        let mut fwd = DVRMatrix::identity(s, prec);
        for step in 1..=k {
            fwd = m.x(v + step).mul(&fwd);
        }
        let mut bwd = DVRMatrix::identity(s, prec);
        for step in 0..(n - k) {
            bwd = m.y(v - step).mul(&bwd);
        }
        if !fwd.eq_mod(&bwd, prec) {
            out.push(RelationFailure { vertex: label(v), relation: "x^k = y^(n-k)".into() });
        }
    }
    out
}

/// `σ^j` for the `s × s` cyclic shift with `σ^s = t·Id`.
pub fn sigma_power(s: usize, j: usize) -> Result<DVRMatrix> {
    if j > s || s == 0 {
        return Err(Error::OutOfRange(format!("sigma power j={j} for s={s}")));
    }
    let mut m = DVRMatrix::zeros(s, s, u32::MAX - 1);
    for i in 0..s - j {
        m.set(i, i + j, ValPoly::one());
    }
    for i in 0..j {
        m.set(s + i - j, i, ValPoly::t_pow(1));
    }
    Ok(m)
}

fn scalar_map(d: u32, trunc: u32) -> DVRMatrix {
    DVRMatrix::scalar(1, d, trunc)
}

pub fn build_rank1(rim: &Rim) -> CMModuleRep {
    let n = rim.n();
    let trunc = default_trunc(n);
    let mut x = Vec::with_capacity(n as usize);
    let mut y = Vec::with_capacity(n as usize);
    for v in 0..n {
        let inside = rim.contains(wrap(v as i64, n));
        x.push(scalar_map(if inside { 0 } else { 1 }, trunc));
        y.push(scalar_map(if inside { 1 } else { 0 }, trunc));
    }
    CMModuleRep { k: rim.k(), n, s: 1, x, y }
}

/// Heights `h_0..=h_n` of a rim: `h_v - h_{v-1}` is 1 when label `v` is not in the rim.
fn heights(rim: &Rim) -> Vec<i64> {
    let mut h = vec![0i64];
    for v in 1..=rim.n() {
        h.push(h[v as usize - 1] + if rim.contains(v) { 0 } else { 1 });
    }
    h
}

fn seed_for(rims: &[Rim], salt: u64) -> u64 {
    let mut hasher = DefaultHasher::new();
    for r in rims {
        r.n().hash(&mut hasher);
        r.mask().hash(&mut hasher);
    }
    salt.hash(&mut hasher);
    hasher.finish()
}

pub(crate) fn random_coeff(rng: &mut ChaCha8Rng) -> Q {
    let c: i64 = rng.gen_range(1..=997);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Q::from_integer(BigInt::from(sign * c))
}

fn find(parent: &mut [usize], a: usize) -> usize {
    let mut r = a;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = a;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Lattice-chain data of the generic extension of `L_top` by `L_bottom`.
struct Chain {
    p: Vec<i64>,
    q: Vec<i64>,
    f: Vec<ValPoly>,
}

fn generic_chain(top: &Rim, bottom: &Rim, salt: u64) -> Chain {
    let n = top.n() as usize;
    let p = heights(top);
    let mut q = heights(bottom);
    let c = (0..n).map(|v| p[v] - q[v]).min().unwrap();
    for h in q.iter_mut() {
        *h += c;
    }
    let d: Vec<i64> = (0..n).map(|v| p[v] - q[v]).collect();
    // required valuation of f_{v-1} - f_v across edge v = 1..=n
    let e: Vec<i64> = (1..=n)
        .map(|v| 0.max(p[v - 1] - q[v]).max(p[v] - 1 - q[v - 1]))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&[*top, *bottom], salt));
    let max_d = *d.iter().max().unwrap();
    let mut coeffs = vec![vec![Q::from_integer(BigInt::from(0)); max_d.max(0) as usize]; n];
    for m in 0..max_d {
        let mut parent: Vec<usize> = (0..n).collect();
        for v in 1..=n {
            if e[v - 1] > m {
                let (a, b) = (v - 1, v % n);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut value: Vec<Option<Q>> = vec![None; n];
        for v in 0..n {
            if d[v] > m {
                let r = find(&mut parent, v);
                let val = value[r].get_or_insert_with(|| random_coeff(&mut rng)).clone();
                coeffs[v][m as usize] = val;
            }
        }
    }
    let f = coeffs
        .into_iter()
        .enumerate()
        .map(|(v, c)| ValPoly::from_coeffs(c[..d[v] as usize].to_vec(), crate::dvr::EXACT))
        .collect();
    Chain { p, q, f }
}

/// `t^e * poly` for a possibly negative exponent; the division must be exact.
fn t_times(e: i64, poly: &ValPoly) -> ValPoly {
    if e >= 0 {
        poly.shift_up(e as u32)
    } else {
        poly.div_t((-e) as u32).expect("lattice chain integrality violated")
    }
}

fn build_rank2(top: &Rim, bottom: &Rim, salt: u64) -> CMModuleRep {
    let n = top.n() as usize;
    let trunc = default_trunc(top.n());
    let Chain { p, q, f } = generic_chain(top, bottom, salt);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for v in 0..n {
        // edge into vertex v is the edge with label v (label n for vertex 0)
        let e = if v == 0 { n } else { v };
        let (dp, dq) = (p[e] - p[e - 1], q[e] - q[e - 1]);
        let diff = f[e - 1].sub(&f[e % n]);
        let lower = t_times(q[e] - p[e - 1], &diff);
        let x_m = DVRMatrix::from_rows(
            vec![
                vec![ValPoly::t_pow(dp as u32), ValPoly::zero()],
                vec![lower.clone(), ValPoly::t_pow(dq as u32)],
            ],
            trunc,
        );
        let y_lower = t_times(1 - dp - dq, &lower).neg();
        let y_m = DVRMatrix::from_rows(
            vec![
                vec![ValPoly::t_pow((1 - dp) as u32), ValPoly::zero()],
                vec![y_lower, ValPoly::t_pow((1 - dq) as u32)],
            ],
            trunc,
        );
        x.push(x_m);
        y.push(y_m);
    }
    CMModuleRep { k: top.k(), n: top.n() as u32, s: 2, x, y }
}

fn build_sigma(rims: &[Rim]) -> Result<CMModuleRep> {
    let n = rims[0].n();
    let s = rims.len();
    let trunc = default_trunc(n);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for v in 0..n {
        let label = wrap(v as i64, n);
        let r = rims.iter().filter(|rim| rim.contains(label)).count();
        x.push(sigma_power(s, s - r)?.with_trunc(trunc));
        y.push(sigma_power(s, r)?.with_trunc(trunc));
    }
    Ok(CMModuleRep { k: rims[0].k(), n, s, x, y })
}

/// Module with the given rank one layers, top (quotient) layer first.
///
/// One layer gives `L_I`. Two layers give the generic extension of `L_top`
/// by `L_bottom` realized as a lattice chain. Three or more layers use the
/// cyclic `σ`-power construction, which has the right layers but is not
/// generic.
pub fn build_layered(rims: &[Rim]) -> Result<CMModuleRep> {
    build_layered_seeded(rims, 0)
}

/// As [`build_layered`], with an explicit salt for the generic coefficients.
pub fn build_layered_seeded(rims: &[Rim], salt: u64) -> Result<CMModuleRep> {
    let first = rims.first().ok_or_else(|| Error::InvalidRim("no layers".into()))?;
    Profile::new(rims.to_vec())?;
    match rims.len() {
        1 => Ok(build_rank1(first)),
        2 => Ok(build_rank2(&rims[0], &rims[1], salt)),
        _ => build_sigma(rims),
    }
}

pub fn build_profile(p: &Profile) -> Result<CMModuleRep> {
    build_layered(p.layers())
}

/// Multiplicity vector of a profile's layers.
pub fn a_vector(p: &Profile) -> Vec<i64> {
    let n = p.n() as usize;
    let mut a = vec![0i64; n];
    for r in p.layers() {
        for e in r.elements() {
            a[e as usize - 1] += 1;
        }
    }
    a
}

/// The rim of a rank one module, read off from which `x` arrows are units.
pub fn identify_rank1(m: &CMModuleRep) -> Result<Rim> {
    if m.s != 1 {
        return Err(Error::NotRankOne(m.s));
    }
    let mut elems = Vec::new();
    for v in 0..m.n {
        match m.x[v as usize].get(0, 0).valuation() {
            Some(0) => elems.push(wrap(v as i64, m.n)),
            Some(1) => {}
            other => {
                return Err(Error::EmbeddingFailure(format!(
                    "x arrow at vertex {v} has valuation {other:?}"
                )))
            }
        }
    }
    let rim = Rim::new(m.n, &elems)?;
    if rim.k() != m.k {
        return Err(Error::EmbeddingFailure(format!("identified rim {rim} has wrong size")));
    }
    Ok(rim)
}

/// Layer multiplicities `a_i = rank - val det x_i`, an isomorphism invariant.
pub fn module_a_vector(m: &CMModuleRep) -> Result<Vec<i64>> {
    let mut a = vec![0i64; m.n as usize];
    for v in 1..=m.n {
        let d = m.x(v as i64).det_valuation().ok_or(Error::TruncationUnstable(m.trunc()))?;
        a[v as usize - 1] = m.s as i64 - d as i64;
    }
    Ok(a)
}

/// A `B`-linear injection of the bottom layer into a rank two module,
/// with the induced projection onto the top layer.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub module: CMModuleRep,
    pub inclusion: Vec<DVRMatrix>,
    pub projection: Vec<DVRMatrix>,
    pub sub: Rim,
    pub quotient: Rim,
}

pub fn diagonal_embedding(top: &Rim, bottom: &Rim) -> Result<Embedding> {
    let module = build_layered(&[*top, *bottom])?;
    let trunc = module.trunc();
    let n = top.n() as usize;
    let inc = DVRMatrix::from_rows(vec![vec![ValPoly::zero()], vec![ValPoly::one()]], trunc);
    let proj = DVRMatrix::from_rows(vec![vec![ValPoly::one(), ValPoly::zero()]], trunc);
    let inclusion = vec![inc.clone(); n];
    let projection = vec![proj.clone(); n];
    // induced actions on the sub and the quotient
    let restrict = |m: &DVRMatrix| proj_restrict(m, 1, 1);
    let sub_x: Vec<DVRMatrix> = module.x.iter().map(restrict).collect();
    let sub_y: Vec<DVRMatrix> = module.y.iter().map(restrict).collect();
    let quot_x: Vec<DVRMatrix> = module.x.iter().map(|m| proj_restrict(m, 0, 0)).collect();
    let quot_y: Vec<DVRMatrix> = module.y.iter().map(|m| proj_restrict(m, 0, 0)).collect();
    for v in 0..n {
        // the sub is stable: x and y have zero upper-right entry
        if !module.x[v].get(0, 1).is_zero() || !module.y[v].get(0, 1).is_zero() {
            return Err(Error::EmbeddingFailure(format!("sub not stable at vertex {v}")));
        }
        // composite projection ∘ inclusion vanishes
        if !proj.mul(&inc).is_zero() {
            return Err(Error::EmbeddingFailure("projection does not kill the sub".into()));
        }
    }
    let sub_m = CMModuleRep::from_maps(top.k(), top.n(), sub_x, sub_y)?;
    let quot_m = CMModuleRep::from_maps(top.k(), top.n(), quot_x, quot_y)?;
    let sub = identify_rank1(&sub_m)?;
    let quotient = identify_rank1(&quot_m)?;
    if sub != *bottom || quotient != *top {
        return Err(Error::EmbeddingFailure(format!(
            "layers identified as {quotient}|{sub}, expected {top}|{bottom}"
        )));
    }
    Ok(Embedding { module, inclusion, projection, sub, quotient })
}

fn proj_restrict(m: &DVRMatrix, i: usize, j: usize) -> DVRMatrix {
    DVRMatrix::from_rows(vec![vec![m.get(i, j).clone()]], m.trunc())
}

/// Whether `det` of every arrow has the valuation expected from the rank.
pub fn arrow_determinants(m: &CMModuleRep) -> Result<Vec<u32>> {
    m.x.iter()
        .map(|x| {
            let f = smith_over_dvr(x)?;
            Ok(f.exponents.iter().sum())
        })
        .collect()
}

/// Geometry for drawing the rims of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramData {
    pub k: u32,
    pub n: u32,
    /// Column labels, leftmost first: `n, 1, 2, ..., n`.
    pub columns: Vec<u32>,
    /// Rim heights (in half steps) per layer, top layer first.
    pub layers: Vec<Vec<i64>>,
    pub profile: Vec<Vec<u32>>,
}

pub fn lattice_diagram_data(p: &Profile) -> DiagramData {
    let n = p.n();
    let mut layers: Vec<Vec<i64>> = Vec::new();
    for rim in p.layers() {
        let mut h = vec![0i64];
        for v in 1..=n {
            let last = *h.last().unwrap();
            h.push(if rim.contains(v) { last - 1 } else { last + 1 });
        }
        if let Some(above) = layers.last() {
            let gap = above.iter().zip(&h).map(|(a, b)| a - b).min().unwrap();
            h.iter_mut().for_each(|x| *x += gap);
        }
        layers.push(h);
    }
    let low = layers.iter().flatten().copied().min().unwrap_or(1);
    for l in layers.iter_mut() {
        l.iter_mut().for_each(|x| *x += 1 - low);
    }
    let mut columns = vec![n];
    columns.extend(1..=n);
    DiagramData {
        k: p.k(),
        n,
        columns,
        layers,
        profile: p.layers().iter().map(|r| r.elements()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rims::parse_profile;

    fn r(n: u32, e: &[u32]) -> Rim {
        Rim::new(n, e).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let s21 = sigma_power(2, 1).unwrap();
        assert_eq!(s21, DVRMatrix::from_monomials(&[vec![(0, 0), (1, 0)], vec![(1, 1), (0, 0)]], u32::MAX - 1));
        assert_eq!(sigma_power(2, 2).unwrap(), DVRMatrix::scalar(2, 1, u32::MAX - 1));
        let s32 = sigma_power(3, 2).unwrap();
        let expect = DVRMatrix::from_monomials(
            &[vec![(0, 0), (0, 0), (1, 0)], vec![(1, 1), (0, 0), (0, 0)], vec![(0, 0), (1, 1), (0, 0)]],
            u32::MAX - 1,
        );
        assert_eq!(s32, expect);
        assert!(sigma_power(2, 3).is_err());
        for s in 1..=6 {
            let one = sigma_power(s, 1).unwrap();
            let mut acc = DVRMatrix::identity(s, 40);
            for _ in 0..s {
                acc = acc.mul(&one);
            }
            assert_eq!(acc, DVRMatrix::scalar(s, 1, 40));
        }
    }

    #[test]
    fn rank1_maps() {
        let m = build_rank1(&r(8, &[1, 4, 5]));
        assert_eq!(m.x(1).get(0, 0), &ValPoly::one());
        assert_eq!(m.x(2).get(0, 0), &ValPoly::t_pow(1));
        assert_eq!(m.y(1).get(0, 0), &ValPoly::t_pow(1));
        assert_eq!(m.y(2).get(0, 0), &ValPoly::one());
        assert!(validate_relations(&m).is_empty());
        assert_eq!(identify_rank1(&m).unwrap(), r(8, &[1, 4, 5]));
    }

    #[test]
    fn corrupted_module_fails_at_vertex() {
        let m = build_rank1(&r(8, &[1, 4, 5]));
        let mut x = m.x_maps().to_vec();
        x[2] = DVRMatrix::scalar(1, 0, 16);
        let bad = CMModuleRep::from_maps(3, 8, x, m.y_maps().to_vec()).unwrap();
        let fails = validate_relations(&bad);
        assert!(!fails.is_empty());
        assert!(fails.iter().any(|f| f.vertex == 2 && f.relation == "x_i y_i = t"));
    }

    #[test]
    fn layered_examples() {
        let m = build_layered(&[r(9, &[2, 5, 8, 9]), r(9, &[1, 3, 7, 8])]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(validate_relations(&m).is_empty());
        let m = build_layered(&[r(8, &[3, 6, 8]), r(8, &[2, 5, 8]), r(8, &[1, 4, 7])]).unwrap();
        assert_eq!(m.rank(), 3);
        assert!(validate_relations(&m).is_empty());
    }

    #[test]
    fn embedding_examples() {
        for (top, bottom) in [
            (r(6, &[1, 3, 5]), r(6, &[2, 4, 6])),
            (r(8, &[2, 5, 7]), r(8, &[1, 3, 6])),
            (r(8, &[1, 4, 5]), r(8, &[1, 4, 5])),
        ] {
            let e = diagonal_embedding(&top, &bottom).unwrap();
            assert_eq!((e.quotient, e.sub), (top, bottom));
        }
    }

    #[test]
    fn a_vector_examples() {
        assert_eq!(a_vector(&parse_profile("135|246@(3,6)").unwrap()), vec![1; 6]);
        assert_eq!(a_vector(&parse_profile("2568|1347@(4,8)").unwrap()), vec![1; 8]);
        assert_eq!(a_vector(&parse_profile("123@(3,6)").unwrap()), vec![1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn direct_sum_rank() {
        let a = build_rank1(&r(6, &[1, 2, 3]));
        let b = build_rank1(&r(6, &[1, 3, 5]));
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(validate_relations(&s).is_empty());
    }

    #[test]
    fn module_a_vector_matches_profile() {
        for text in ["135|246@(3,6)", "257|136@(3,8)", "1246|2357@(4,8)"] {
            let p = parse_profile(text).unwrap();
            let m = build_profile(&p).unwrap();
            assert_eq!(module_a_vector(&m).unwrap(), a_vector(&p), "{text}");
        }
    }

    #[test]
    fn diagram_heights() {
        let d = lattice_diagram_data(&parse_profile("145@(3,8)").unwrap());
        assert_eq!(d.layers[0], vec![2, 1, 2, 3, 2, 1, 2, 3, 4]);
        assert_eq!(d.columns[0], 8);
        let d = lattice_diagram_data(&parse_profile("678@(3,8)").unwrap());
        let h = &d.layers[0];
        let peaks = (1..h.len() - 1).filter(|&i| h[i] > h[i - 1] && h[i] > h[i + 1]).count();
        assert_eq!(peaks, 1);
        let d = lattice_diagram_data(&parse_profile("2589|1378@(4,9)").unwrap());
        assert!(d.layers[0].iter().zip(&d.layers[1]).all(|(a, b)| a >= b));
        assert!(d.layers[0].iter().zip(&d.layers[1]).any(|(a, b)| a == b));
    }
}
