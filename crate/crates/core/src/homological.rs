//! Hom spaces, tops, projective covers, syzygies and `Ext^1`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cm::{build_profile, module_a_vector, random_coeff, CMModuleRep};
use crate::dvr::{rational_nullspace, solve_with, DVRMatrix, Smith, ValPoly, Q};
use crate::error::{Error, Result};
use crate::rims::{wrap, Profile, Rim};

/// How far to push the working precision before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncPolicy {
    /// Starting precision; `None` means `2n`.
    pub initial: Option<u32>,
    /// Largest precision tried; `None` means `8n`.
    pub cap: Option<u32>,
    /// Recompute at `N + 2` and require identical answers.
    pub check_stability: bool,
}

impl Default for TruncPolicy {
    fn default() -> Self {
        TruncPolicy { initial: None, cap: None, check_stability: true }
    }
}

impl TruncPolicy {
    pub fn fixed(n: u32) -> TruncPolicy {
        TruncPolicy { initial: Some(n), cap: Some(n + 2), check_stability: false }
    }

    fn bounds(&self, n: u32) -> (u32, u32) {
        let init = self.initial.unwrap_or(2 * n).max(n);
        let cap = self.cap.unwrap_or(8 * n).max(init);
        (init, cap)
    }

    /// Run `f` at increasing precision until it succeeds (and agrees with `N + 2`).
    pub fn run<T: PartialEq>(&self, n: u32, f: impl Fn(u32) -> Result<T>) -> Result<T> {
        let (mut trunc, cap) = self.bounds(n);
        loop {
            let attempt = f(trunc).and_then(|a| {
                if self.check_stability {
                    let b = f(trunc + 2)?;
                    if a != b {
                        return Err(Error::TruncationUnstable(trunc));
                    }
                }
                Ok(a)
            });
            match attempt {
                Err(Error::TruncationUnstable(_)) if trunc < cap => trunc = (trunc + n).min(cap),
                other => return other,
            }
        }
    }
}

/// A `Z`-basis of `Hom_B(M, N)`.
#[derive(Debug, Clone)]
pub struct HomBasis {
    /// `generators[g][v]` is the component at vertex `v` of generator `g`.
    pub generators: Vec<Vec<DVRMatrix>>,
    pub z_rank: usize,
}

/// Row-major `vec` index of entry `(a, b)` of an `rows × cols` matrix.
fn unvec(col: &[ValPoly], rows: usize, cols: usize, trunc: u32) -> DVRMatrix {
    let mut m = DVRMatrix::zeros(rows, cols, trunc);
    for a in 0..rows {
        for b in 0..cols {
            m.set(a, b, col[a * cols + b].clone());
        }
    }
    m
}

fn vec_of(m: &DVRMatrix) -> Vec<ValPoly> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            out.push(m.get(a, b).clone());
        }
    }
    out
}

fn check_pair(m: &CMModuleRep, n: &CMModuleRep) -> Result<()> {
    if (m.k(), m.n()) != (n.k(), n.n()) {
        return Err(Error::MismatchedAmbient(m.k(), m.n(), n.k(), n.n()));
    }
    Ok(())
}

/// Basis of the lattice of vertex-0 components of homomorphisms `M -> N`,
/// as columns of `vec(φ_0)` (row-major, `φ_0` of shape `rank N × rank M`).
///
/// Walks once around the cycle: a homomorphism is determined by `φ_0` and
/// `φ_v = t^{-1} x^N_v φ_{v-1} y^M_v` must stay integral.
pub fn hom_lattice(m: &CMModuleRep, n: &CMModuleRep, trunc: u32) -> Result<DVRMatrix> {
    check_pair(m, n)?;
    let (sm, sn) = (m.rank(), n.rank());
    let d = sm * sn;
    let mut g = DVRMatrix::identity(d, trunc);
    for v in 1..=m.n() as i64 {
        let w = n.x(v).with_trunc(trunc).kron(&m.y(v).with_trunc(trunc).transpose());
        let p = w.mul(&g);
        let (kernel, pivots) = rational_nullspace(&p.mod_t(), p.cols());
        let mut cols: Vec<Vec<ValPoly>> = Vec::with_capacity(d);
        for kv in &kernel {
            let kvec: Vec<ValPoly> = kv.iter().map(|c| ValPoly::constant(c.clone())).collect();
            let img = p.mul_vec(&kvec);
            let div = img
                .iter()
                .map(|x| x.div_t(1))
                .collect::<Option<Vec<_>>>()
                .ok_or(Error::TruncationUnstable(trunc))?;
            cols.push(div);
        }
        for &j in &pivots {
            cols.push(p.column(j));
        }
        g = DVRMatrix::from_columns(&cols, d, trunc);
    }
    Ok(g)
}

/// Vertexwise components of the homomorphism with vertex-0 component `phi0`.
pub fn propagate(m: &CMModuleRep, n: &CMModuleRep, phi0: &DVRMatrix) -> Result<Vec<DVRMatrix>> {
    let trunc = phi0.trunc();
    let mut out = vec![phi0.clone()];
    let mut cur = phi0.clone();
    for v in 1..m.n() as i64 {
        let next = n.x(v).mul(&cur).mul(m.y(v));
        cur = next.div_t(1).ok_or(Error::TruncationUnstable(trunc))?;
        out.push(cur.clone());
    }
    Ok(out)
}

pub fn hom_space_at(m: &CMModuleRep, n: &CMModuleRep, trunc: u32) -> Result<HomBasis> {
    let g = hom_lattice(m, n, trunc)?;
    let mut generators = Vec::new();
    for j in 0..g.cols() {
        let phi0 = unvec(&g.column(j), n.rank(), m.rank(), trunc);
        generators.push(propagate(m, n, &phi0)?);
    }
    Ok(HomBasis { z_rank: g.cols(), generators })
}

pub fn hom_space(m: &CMModuleRep, n: &CMModuleRep) -> Result<HomBasis> {
    let (init, _) = TruncPolicy::default().bounds(m.n());
    let mut trunc = init;
    loop {
        match hom_space_at(m, n, trunc) {
            Err(Error::TruncationUnstable(_)) if trunc < 8 * m.n() => trunc += m.n(),
            other => return other,
        }
    }
}

/// Rank over `Q` of a rational matrix given by rows.
fn rational_rank(rows: &[Vec<Q>], cols: usize) -> usize {
    let (_, pivots) = rational_nullspace(rows, cols);
    pivots.len()
}

fn radical_image_mod_t(m: &CMModuleRep, v: i64) -> Vec<Vec<Q>> {
    // columns of [x_v | y_{v+1}] mod t, returned as rows of the transpose
    let x = m.x(v).mod_t();
    let y = m.y(v + 1).mod_t();
    let s = m.rank();
    let mut cols = Vec::with_capacity(2 * s);
    for j in 0..s {
        cols.push((0..s).map(|i| x[i][j].clone()).collect::<Vec<Q>>());
        cols.push((0..s).map(|i| y[i][j].clone()).collect::<Vec<Q>>());
    }
    cols
}

/// Top of the module: vertex labels with multiplicity, ascending.
pub fn top(m: &CMModuleRep) -> Vec<u32> {
    let s = m.rank();
    let mut out = Vec::new();
    for v in 0..m.n() as i64 {
        let r = rational_rank(&radical_image_mod_t(m, v), s);
        for _ in r..s {
            out.push(wrap(v, m.n()));
        }
    }
    out.sort();
    out
}

/// A projective cover `⊕ P_v -> M`.
#[derive(Debug, Clone)]
pub struct ProjectiveCover {
    /// Vertex label of each summand `P_v`.
    pub summands: Vec<u32>,
    /// Element of `M_v` the generator of each summand maps to.
    pub generators: Vec<Vec<ValPoly>>,
    /// Cover map at each 0-based vertex, `rank M × #summands`; column `l` is the image
    /// of the generator of `(P_{v_l})_j`.
    pub maps: Vec<DVRMatrix>,
}

pub fn projective_cover(m: &CMModuleRep) -> ProjectiveCover {
    let s = m.rank();
    let n = m.n();
    let trunc = m.trunc();
    let mut summands = Vec::new();
    let mut generators = Vec::new();
    for v in 0..n as i64 {
        let mut cols = radical_image_mod_t(m, v);
        let mut rank = rational_rank(&cols, s);
        for e in 0..s {
            if rank == s {
                break;
            }
            let mut unit = vec![Q::zero(); s];
            unit[e] = Q::from_integer(1.into());
            cols.push(unit);
            let r2 = rational_rank(&cols, s);
            if r2 > rank {
                rank = r2;
                summands.push(wrap(v, n));
                let mut g = vec![ValPoly::zero(); s];
                g[e] = ValPoly::one();
                generators.push(g);
            } else {
                cols.pop();
            }
        }
    }
    let mut maps = Vec::with_capacity(n as usize);
    for j in 0..n {
        let cols: Vec<Vec<ValPoly>> = summands
            .iter()
            .zip(&generators)
            .map(|(&v, g)| m.path_image(v % n, j, g))
            .collect();
        maps.push(DVRMatrix::from_columns(&cols, s, trunc));
    }
    ProjectiveCover { summands, generators, maps }
}

/// The syzygy together with its embedding into the cover.
#[derive(Debug, Clone)]
pub struct Syzygy {
    pub module: CMModuleRep,
    pub cover: ProjectiveCover,
    /// Kernel basis at each vertex, `#summands × rank Ω`.
    pub kernels: Vec<DVRMatrix>,
}

fn projective_arrow(k: u32, n: u32, summand: u32, j: i64, forward: bool) -> ValPoly {
    // P_v = L_{v+1..v+k}: x_j is a unit iff j lies in the interval
    let rim = Rim::projective(k, n, summand % n);
    let inside = rim.contains(wrap(j, n));
    if inside == forward {
        ValPoly::one()
    } else {
        ValPoly::t_pow(1)
    }
}

pub fn syzygy_full(m: &CMModuleRep) -> Result<Syzygy> {
    let cover = projective_cover(m);
    let p = cover.summands.len();
    let s = m.rank();
    if p == s {
        return Err(Error::ProjectiveInput);
    }
    let trunc = m.trunc();
    let n = m.n();
    let mut kernels = Vec::with_capacity(n as usize);
    let mut left_inverses = Vec::with_capacity(n as usize);
    for j in 0..n as usize {
        let sm = Smith::compute(&cover.maps[j])?;
        if sm.rank != s || sm.exponents.iter().any(|&e| e != 0) {
            return Err(Error::TruncationUnstable(trunc));
        }
        let idx: Vec<usize> = (s..p).collect();
        kernels.push(sm.v.select_columns(&idx));
        left_inverses.push(sm.v_inv.select_rows(&idx));
    }
    let mut x = Vec::with_capacity(n as usize);
    let mut y = Vec::with_capacity(n as usize);
    for j in 0..n as i64 {
        let ju = j as usize;
        let prev = (j - 1).rem_euclid(n as i64) as usize;
        let mut xp = DVRMatrix::zeros(p, p, trunc);
        let mut yp = DVRMatrix::zeros(p, p, trunc);
        for (l, &v) in cover.summands.iter().enumerate() {
            xp.set(l, l, projective_arrow(m.k(), n, v, j, true));
            yp.set(l, l, projective_arrow(m.k(), n, v, j, false));
        }
        x.push(left_inverses[ju].mul(&xp).mul(&kernels[prev]));
        y.push(left_inverses[prev].mul(&yp).mul(&kernels[ju]));
    }
    let module = CMModuleRep::from_maps(m.k(), n, x, y)?;
    Ok(Syzygy { module, cover, kernels })
}

pub fn syzygy(m: &CMModuleRep) -> Result<CMModuleRep> {
    Ok(syzygy_full(m)?.module)
}

/// Cyclic decomposition `Ext^1 ≅ ⊕ Z/t^{a_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtDecomp {
    pub exponents: Vec<u32>,
    pub total_dim: u32,
}

impl ExtDecomp {
    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Human-readable form, e.g. `C ⊕ C` or `0`.
    pub fn describe(&self) -> String {
        if self.exponents.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&a| if a == 1 { "C".to_string() } else { format!("Z/t^{a}") })
            .collect();
        parts.join(" ⊕ ")
    }
}

/// `Ext^1(M, N)` as the cokernel of `Hom(P, N) -> Hom(ΩM, N)` at a fixed precision.
pub fn ext1_at(m: &CMModuleRep, n: &CMModuleRep, trunc: u32) -> Result<ExtDecomp> {
    check_pair(m, n)?;
    let m = m.with_trunc(trunc);
    let n = n.with_trunc(trunc);
    let syz = match syzygy_full(&m) {
        Ok(s) => s,
        Err(Error::ProjectiveInput) => return Ok(ExtDecomp { exponents: vec![], total_dim: 0 }),
        Err(e) => return Err(e),
    };
    let omega = &syz.module;
    let h = hom_lattice(omega, &n, trunc)?;
    let d = h.rows();
    let hs = Smith::compute(&h)?;
    if hs.rank != d {
        return Err(Error::TruncationUnstable(trunc));
    }
    let k0 = &syz.kernels[0];
    let mut cols = Vec::new();
    for (l, &v) in syz.cover.summands.iter().enumerate() {
        for b in 0..n.rank() {
            let mut e = vec![ValPoly::zero(); n.rank()];
            e[b] = ValPoly::one();
            let img = n.path_image(v % n.n(), 0, &e);
            let img_m = DVRMatrix::from_columns(&[img], n.rank(), trunc);
            let row = k0.select_rows(&[l]);
            let phi = img_m.mul(&row);
            let coords = solve_with(&hs, &h, &vec_of(&phi))?.ok_or(Error::TruncationUnstable(trunc))?;
            cols.push(coords);
        }
    }
    let r = DVRMatrix::from_columns(&cols, d, trunc);
    let rs = Smith::compute(&r)?;
    if rs.rank != d {
        return Err(Error::TruncationUnstable(trunc));
    }
    let exponents: Vec<u32> = rs.exponents.into_iter().filter(|&a| a > 0).collect();
    let total_dim = exponents.iter().sum();
    Ok(ExtDecomp { exponents, total_dim })
}

pub fn ext1_with(m: &CMModuleRep, n: &CMModuleRep, policy: &TruncPolicy) -> Result<ExtDecomp> {
    policy.run(m.n(), |trunc| ext1_at(m, n, trunc))
}

pub fn ext1(m: &CMModuleRep, n: &CMModuleRep) -> Result<ExtDecomp> {
    ext1_with(m, n, &TruncPolicy::default())
}

pub fn is_rigid(m: &CMModuleRep) -> Result<bool> {
    Ok(ext1(m, m)?.is_zero())
}

pub fn is_rigid_with(m: &CMModuleRep, policy: &TruncPolicy) -> Result<bool> {
    Ok(ext1_with(m, m, policy)?.is_zero())
}

/// Poset criterion: `L_top | L_bottom` can only be indecomposable when the rims
/// interlace to degree at least three.
pub fn is_indecomposable_rank2(top: &Rim, bottom: &Rim) -> Result<bool> {
    Ok(top.interlacing_degree(bottom)? >= 3)
}

/// Whether some homomorphism `M -> N` is an isomorphism, tested on random
/// combinations of a Hom basis.
pub fn is_isomorphic(m: &CMModuleRep, n: &CMModuleRep) -> Result<bool> {
    check_pair(m, n)?;
    if m.rank() != n.rank() {
        return Ok(false);
    }
    let trunc = m.trunc().min(n.trunc());
    let g = hom_lattice(m, n, trunc)?;
    let s = m.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..2 {
        let mut phi = vec![ValPoly::zero(); g.rows()];
        for j in 0..g.cols() {
            let c = random_coeff(&mut rng);
            for (i, e) in phi.iter_mut().enumerate() {
                *e = e.add(&g.get(i, j).scale(&c));
            }
        }
        let phi0 = unvec(&phi, s, s, trunc);
        let comps = propagate(m, n, &phi0)?;
        if comps.iter().all(|c| rational_rank(&c.mod_t(), s) == s) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `End(M)` is local, i.e. `M` is indecomposable.
///
/// `End(M) / t End(M)` is a finite-dimensional algebra over `Q`; it is local
/// exactly when its trace form `(a, b) ↦ tr(L_{ab})` has rank one, the radical
/// being the kernel of the trace form in characteristic zero.
pub fn is_indecomposable_at(m: &CMModuleRep, trunc: u32) -> Result<bool> {
    let m = m.with_trunc(trunc);
    let s = m.rank();
    let g = hom_lattice(&m, &m, trunc)?;
    let gs = Smith::compute(&g)?;
    let d = g.cols();
    let basis: Vec<DVRMatrix> = (0..d).map(|j| unvec(&g.column(j), s, s, trunc)).collect();
    // structure constants mod t: c[a][b][c] with e_a e_b = Σ c e_c
    let mut c = vec![vec![vec![Q::zero(); d]; d]; d];
    for a in 0..d {
        for b in 0..d {
            let prod = basis[a].mul(&basis[b]);
            let coords = solve_with(&gs, &g, &vec_of(&prod))?.ok_or(Error::TruncationUnstable(trunc))?;
            for (k, x) in coords.iter().enumerate() {
                c[a][b][k] = x.constant_term();
            }
        }
    }
    let tr: Vec<Q> = (0..d).map(|x| (0..d).map(|b| c[x][b][b].clone()).sum()).collect();
    let form: Vec<Vec<Q>> = (0..d)
        .map(|a| (0..d).map(|b| (0..d).map(|k| &c[a][b][k] * &tr[k]).sum()).collect())
        .collect();
    Ok(rational_rank(&form, d) == 1)
}

pub fn is_indecomposable(m: &CMModuleRep) -> Result<bool> {
    TruncPolicy::default().run(m.n(), |trunc| is_indecomposable_at(m, trunc))
}

/// Lexicographic key of a profile by its sorted layer elements.
pub fn profile_key(p: &Profile) -> Vec<Vec<u32>> {
    p.layers().iter().map(|r| r.elements()).collect()
}

/// Two-layer profiles `I|J` whose rims interlace to degree at least three and
/// whose layer multiplicities equal `a`, lexicographically ordered.
pub fn rank2_candidates(k: u32, n: u32, a: &[i64]) -> Vec<Profile> {
    if a.len() != n as usize || a.iter().any(|&x| !(0..=2).contains(&x)) {
        return Vec::new();
    }
    let twos: Vec<u32> = (1..=n).filter(|&i| a[i as usize - 1] == 2).collect();
    let ones: Vec<u32> = (1..=n).filter(|&i| a[i as usize - 1] == 1).collect();
    if 2 * twos.len() + ones.len() != 2 * k as usize || twos.len() > k as usize {
        return Vec::new();
    }
    let need = k as usize - twos.len();
    let mut out = Vec::new();
    for sel in 0u64..(1u64 << ones.len()) {
        if sel.count_ones() as usize != need {
            continue;
        }
        let mut top = twos.clone();
        let mut bottom = twos.clone();
        for (b, &e) in ones.iter().enumerate() {
            if sel >> b & 1 == 1 {
                top.push(e);
            } else {
                bottom.push(e);
            }
        }
        let (Ok(i), Ok(j)) = (Rim::new(n, &top), Rim::new(n, &bottom)) else { continue };
        if i.interlacing_degree(&j).unwrap_or(0) >= 3 {
            out.push(Profile::pair(i, j).expect("same ambient"));
        }
    }
    out.sort_by_key(profile_key);
    out
}

/// Preferred name for an isomorphism class realized by several profiles:
/// a tightly interlacing profile if there is one, otherwise one whose layer
/// swap is not rigid, ties broken lexicographically.
pub fn canonical_label(realized: &[Profile]) -> Result<Profile> {
    let mut sorted = realized.to_vec();
    sorted.sort_by_key(profile_key);
    let first = sorted.first().cloned().ok_or_else(|| Error::InvalidRim("no profiles".into()))?;
    let tight = |p: &Profile| {
        p.len() == 2 && p.layers()[0].classify_pair(&p.layers()[1]).map(|c| c.tight).unwrap_or(false)
    };
    if let Some(p) = sorted.iter().find(|p| tight(p)) {
        return Ok(p.clone());
    }
    if sorted.len() == 1 {
        return Ok(first);
    }
    for p in &sorted {
        if !is_rigid(&build_profile(&p.reversed())?)? {
            return Ok(p.clone());
        }
    }
    Ok(first)
}

/// All profiles among [`rank2_candidates`] whose generic module is isomorphic to `m`.
pub fn rank2_realizations(m: &CMModuleRep) -> Result<Vec<Profile>> {
    if m.rank() != 2 {
        return Ok(Vec::new());
    }
    let a = module_a_vector(m)?;
    let mut out = Vec::new();
    for c in rank2_candidates(m.k(), m.n(), &a) {
        if is_isomorphic(m, &build_profile(&c)?)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Canonical two-layer profile of a rank two module, if it is isomorphic to
/// the generic module of some interlacing profile.
pub fn identify_rank2(m: &CMModuleRep) -> Result<Option<Profile>> {
    let found = rank2_realizations(m)?;
    if found.is_empty() {
        return Ok(None);
    }
    canonical_label(&found).map(Some)
}
