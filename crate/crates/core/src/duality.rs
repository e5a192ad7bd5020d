//! Contraction, fundamental chains, cap products and Poincaré duality
//! certificates for weighted fans and their stars.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{bm_complex_on, homology, ChainComplex, HomologyTable};
use crate::fan::{Fan, WeightedFan};
use crate::linalg::{
    is_isomorphism, is_zero_over, kernel_over, smith_normal_form, solve_over, GroupPresentation, IntMatrix, RingTag,
};
use crate::sheaf::{binomial, build_multitangent, subset_index, subsets, ModuleAssignment};
use crate::{Error, Result};

/// Sign of `f_K ⌟ e_J` for sorted index sets, or `None` when `K ⊄ J`.
pub fn contraction_sign(k: &[usize], j: &[usize]) -> Option<i32> {
    if !k.iter().all(|x| j.contains(x)) {
        return None;
    }
    let p1 = k.len();
    let v = k.iter().map(|&l| j.iter().filter(|&&m| !k.contains(&m) && l > m).count()).sum::<usize>();
    Some(if (v + p1 * p1.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 })
}

/// `x ⌟ y` for `x ∈ ⋀^{p1} M*` and `y ∈ ⋀^{p2} M`, both in lexicographic
/// wedge-monomial coordinates over a basis of rank `m`.
pub fn contract(x: &[BigInt], p1: usize, y: &[BigInt], p2: usize, m: usize) -> Result<Vec<BigInt>> {
    if p1 > p2 || p2 > m {
        return Err(Error::OutOfRange(format!("contraction of degree {p1} into degree {p2} over rank {m}")));
    }
    if x.len() != binomial(m, p1) || y.len() != binomial(m, p2) {
        return Err(Error::ShapeMismatch(format!(
            "coordinate lengths {} and {} do not match degrees {p1} and {p2} over rank {m}",
            x.len(),
            y.len()
        )));
    }
    let ks = subsets(m, p1);
    let js = subsets(m, p2);
    let mut out = vec![BigInt::zero(); binomial(m, p2 - p1)];
    for (kk, xk) in ks.iter().zip(x) {
        if xk.is_zero() {
            continue;
        }
        for (jj, yj) in js.iter().zip(y) {
            if yj.is_zero() {
                continue;
            }
            if let Some(s) = contraction_sign(kk, jj) {
                let rest: Vec<usize> = jj.iter().copied().filter(|i| !kk.contains(i)).collect();
                out[subset_index(m, &rest)] += xk * yj * s;
            }
        }
    }
    Ok(out)
}

/// Matrix of `u ↦ u ⌟ e_{1..m}` from `⋀^p M*` to `⋀^{m-p} M`.
pub fn contraction_matrix(m: usize, p: usize) -> IntMatrix {
    let full: Vec<usize> = (0..m).collect();
    let cols = subsets(m, p);
    let mut out = IntMatrix::zeros(binomial(m, m - p), cols.len());
    for (c, k) in cols.iter().enumerate() {
        let rest: Vec<usize> = full.iter().copied().filter(|i| !k.contains(i)).collect();
        let s = contraction_sign(k, &full).expect("subset of the full set");
        out.set(subset_index(m, &rest), c, BigInt::from(s));
    }
    out
}

/// The chain `(w(α) Λ_α)_α` in `C_d^{BM}(Σ, F_d)`, one coordinate per maximal
/// face against the stored generator `Λ_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalChain {
    pub faces: Vec<usize>,
    pub coordinates: Vec<BigInt>,
}

impl FundamentalChain {
    pub fn as_column(&self) -> IntMatrix {
        IntMatrix::column_vector(&self.coordinates)
    }

    /// Coordinates restricted to the given maximal faces, in that order.
    pub fn restricted(&self, faces: &[usize]) -> IntMatrix {
        let at: HashMap<usize, &BigInt> = self.faces.iter().copied().zip(&self.coordinates).collect();
        IntMatrix::column_vector(&faces.iter().map(|f| at[f].clone()).collect::<Vec<_>>())
    }
}

pub fn fundamental_chain(wf: &WeightedFan) -> FundamentalChain {
    FundamentalChain { faces: wf.fan.maximal_faces().to_vec(), coordinates: wf.weights().to_vec() }
}

fn all_faces(fan: &Fan) -> Vec<usize> {
    (0..fan.num_faces()).collect()
}

/// First face of codimension one where the boundary of the fundamental chain
/// is nonzero in the ring, or `None` when the fan is balanced.
pub fn balance_defect(wf: &WeightedFan) -> Result<Option<usize>> {
    let fan = &wf.fan;
    let d = fan.dim();
    if d == 0 {
        return Ok(None);
    }
    let module = build_multitangent(fan, d)?;
    let c = bm_complex_on(fan, &module, &all_faces(fan), wf.ring)?;
    let image = &c.outgoing(d) * &fundamental_chain(wf).as_column();
    let pos = c.position(d - 1).expect("codimension one present");
    for b in &c.layout[pos] {
        if (b.offset..b.offset + b.rank).any(|i| !wf.ring.is_zero_elem(image.get(i, 0))) {
            return Ok(Some(b.face));
        }
    }
    Ok(None)
}

pub fn is_balanced(wf: &WeightedFan) -> Result<bool> {
    Ok(balance_defect(wf)?.is_none())
}

fn require_balanced(wf: &WeightedFan) -> Result<()> {
    match balance_defect(wf)? {
        Some(face) => Err(Error::Unbalanced { face }),
        None => Ok(()),
    }
}

/// Top boundary of `F_d` on the star of `gamma` and the maximal faces indexing its columns.
fn star_top_boundary(wf: &WeightedFan, module_d: &ModuleAssignment, gamma: usize) -> Result<(IntMatrix, Vec<usize>)> {
    let fan = &wf.fan;
    let d = fan.dim();
    let star = fan.star_view(gamma)?;
    let c = bm_complex_on(fan, module_d, &star.members, wf.ring)?;
    let faces = c.layout[c.position(d).expect("top degree present")].iter().map(|b| b.face).collect();
    Ok((c.outgoing(d), faces))
}

fn uniquely_balanced_at(wf: &WeightedFan, module_d: &ModuleAssignment, gamma: usize) -> Result<bool> {
    let (boundary, faces) = star_top_boundary(wf, module_d, gamma)?;
    let chain = fundamental_chain(wf).restricted(&faces);
    let k = kernel_over(wf.ring, &boundary);
    if k.cols() != 1 {
        return Ok(false);
    }
    Ok(match wf.ring {
        RingTag::Z => chain == k || chain == k.neg(),
        _ => !is_zero_over(wf.ring, &chain),
    })
}

/// Whether the fundamental class generates `H_d^{BM}(Σ, F_d)`.
pub fn is_uniquely_balanced(wf: &WeightedFan) -> Result<bool> {
    require_balanced(wf)?;
    let module = build_multitangent(&wf.fan, wf.fan.dim())?;
    uniquely_balanced_at(wf, &module, wf.fan.vertex())
}

/// Checks that the fundamental chain restricted to every star is a cycle of
/// the star complex.
pub fn stars_balanced_check(wf: &WeightedFan) -> Result<bool> {
    require_balanced(wf)?;
    let module = build_multitangent(&wf.fan, wf.fan.dim())?;
    let chain = fundamental_chain(wf);
    for gamma in 0..wf.fan.num_faces() {
        let (boundary, faces) = star_top_boundary(wf, &module, gamma)?;
        if !is_zero_over(wf.ring, &(&boundary * &chain.restricted(&faces))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cosheaves `F_0 .. F_d`, weights by face, and the contraction matrices
/// against `Λ` for every degree.
struct Workspace<'a> {
    wf: &'a WeightedFan,
    modules: Vec<ModuleAssignment>,
    weights: HashMap<usize, BigInt>,
    contractions: Vec<IntMatrix>,
}

impl<'a> Workspace<'a> {
    fn new(wf: &'a WeightedFan) -> Result<Self> {
        let d = wf.fan.dim();
        let modules = (0..=d).map(|p| build_multitangent(&wf.fan, p)).collect::<Result<Vec<_>>>()?;
        let weights = wf.fan.maximal_faces().iter().copied().zip(wf.weights().iter().cloned()).collect();
        let contractions = (0..=d).map(|p| contraction_matrix(d, p)).collect();
        Ok(Workspace { wf, modules, weights, contractions })
    }

    fn dim(&self) -> usize {
        self.wf.fan.dim()
    }

    fn star_complex(&self, gamma: usize, p: usize) -> Result<ChainComplex> {
        let star = self.wf.fan.star_view(gamma)?;
        bm_complex_on(&self.wf.fan, &self.modules[p], &star.members, self.wf.ring)
    }

    /// `w(α) ⌟Λ_α ∘ ρ_{γ,α}` from `F^p(γ)` to `F_{d-p}(α)`.
    fn cap_block(&self, gamma: usize, alpha: usize, p: usize) -> Result<IntMatrix> {
        let rho = self.modules[p].rho(gamma, alpha)?;
        Ok((&self.contractions[p] * &rho).scaled(&self.weights[&alpha]))
    }

    /// Chain-level cap product on the star of `gamma` into the top chains of
    /// `c`, the star complex of `F_{d-p}`.
    fn cap_chain(&self, gamma: usize, p: usize, c: &ChainComplex) -> Result<IntMatrix> {
        let d = self.dim();
        let top = &c.layout[c.position(d).expect("top degree present")];
        let rows = c.rank_at(d);
        let mut m = IntMatrix::zeros(rows, self.modules[p].rank(gamma));
        for b in top {
            m.set_block(b.offset, 0, &self.cap_block(gamma, b.face, p)?);
        }
        Ok(m)
    }

    /// Cap product in kernel coordinates, together with the kernel basis.
    fn cap_in_cycles(&self, gamma: usize, p: usize, c: &ChainComplex) -> Result<(IntMatrix, IntMatrix)> {
        let d = self.dim();
        let ring = self.wf.ring;
        let chain = self.cap_chain(gamma, p, c)?;
        let boundary = c.outgoing(d);
        if !is_zero_over(ring, &(&boundary * &chain)) {
            return Err(Error::Internal(format!("cap product at face {gamma}, degree {p} is not a cycle")));
        }
        let k = kernel_over(ring, &boundary);
        let x = solve_over(ring, &k, &chain).ok_or_else(|| {
            Error::Internal(format!("cap product at face {gamma}, degree {p} leaves the cycle lattice"))
        })?;
        Ok((x, k))
    }

    fn star_report(&self, gamma: usize) -> Result<TpdReport> {
        let d = self.dim();
        let ring = self.wf.ring;
        let complexes = (0..=d).map(|p| self.star_complex(gamma, p)).collect::<Result<Vec<_>>>()?;
        let tables = complexes.iter().map(homology).collect::<Result<Vec<HomologyTable>>>()?;
        let mut vanishing = Vec::new();
        for (p, t) in tables.iter().enumerate() {
            for (&q, g) in t.degrees.iter().zip(&t.groups) {
                if q != d {
                    vanishing.push(VanishingCheck::new(p, q, &g.presentation, ring));
                }
            }
        }
        let mut caps = Vec::with_capacity(d + 1);
        for p in 0..=d {
            let (x, k) = self.cap_in_cycles(gamma, p, &complexes[d - p])?;
            let dom = GroupPresentation::free(x.cols());
            let cod = GroupPresentation::free(k.cols());
            let iso = is_isomorphism(&x, &dom, &cod, ring)?;
            let witness = (!iso).then(|| cap_witness(&x, ring));
            caps.push(CapCheck { p, domain_rank: x.cols(), codomain_rank: k.cols(), isomorphism: iso, witness });
        }
        let cohomology_ranks = (0..=d).map(|p| self.modules[p].rank(gamma)).collect();
        let top_homology_ranks = caps.iter().map(|c| c.codomain_rank).collect();
        let verdict = vanishing.iter().all(|v| v.vanishes) && caps.iter().all(|c| c.isomorphism);
        Ok(TpdReport { face: gamma, ring, dim: d, cohomology_ranks, top_homology_ranks, vanishing, caps, verdict })
    }

    fn all_star_reports(&self) -> Result<Vec<TpdReport>> {
        (0..self.wf.fan.num_faces()).into_par_iter().map(|g| self.star_report(g)).collect()
    }
}

fn cap_witness(x: &IntMatrix, ring: RingTag) -> String {
    match ring {
        RingTag::Z if x.is_square() => {
            let diag: Vec<String> = smith_normal_form(x).diagonal().iter().map(ToString::to_string).collect();
            format!("Smith diagonal [{}]", diag.join(", "))
        }
        _ => format!("rank {} as a {}x{} matrix over {ring}", crate::linalg::rank_over(ring, x), x.rows(), x.cols()),
    }
}

/// Cap product `F^p(γ) → H_d^{BM}(Star γ, F_{d-p})` in the dual stored basis
/// of `F^p(γ)` and the kernel basis of the star boundary.
pub fn cap_star(wf: &WeightedFan, gamma: usize, p: usize) -> Result<IntMatrix> {
    wf.fan.check_id(gamma)?;
    let d = wf.fan.dim();
    if p > d {
        return Err(Error::OutOfRange(format!("degree {p} exceeds fan dimension {d}")));
    }
    require_balanced(wf)?;
    let ws = Workspace::new(wf)?;
    let c = ws.star_complex(gamma, d - p)?;
    Ok(ws.cap_in_cycles(gamma, p, &c)?.0)
}

/// Cap product `H^0(Σ, F^p) = F^p(v) → H_d^{BM}(Σ, F_{d-p})`.
pub fn cap_q0(wf: &WeightedFan, p: usize) -> Result<IntMatrix> {
    cap_star(wf, wf.fan.vertex(), p)
}

/// The chain-level map `C^q(Σ, F^p) → C_{d-q}^{BM}(Σ, F_{d-p})`, evaluated
/// term by term. Only the vertex is compact, so the domain vanishes for `q > 0`.
pub fn cap_chain_general(wf: &WeightedFan, p: usize, q: usize) -> Result<IntMatrix> {
    let fan = &wf.fan;
    let d = fan.dim();
    if p > d || q > d {
        return Err(Error::OutOfRange(format!("bidegree ({p}, {q}) outside 0..={d}")));
    }
    let ws = Workspace::new(wf)?;
    let target = bm_complex_on(fan, &ws.modules[d - p], &all_faces(fan), wf.ring)?;
    let blocks = &target.layout[target.position(d - q).expect("degree present")];
    let domain: Vec<usize> = if q == 0 { vec![fan.vertex()] } else { Vec::new() };
    let ranks: Vec<usize> = domain.iter().map(|&g| ws.modules[p].rank(g)).collect();
    let mut m = IntMatrix::zeros(target.rank_at(d - q), ranks.iter().sum());
    let mut col = 0;
    for (&gamma, &r) in domain.iter().zip(&ranks) {
        for b in blocks {
            let mut acc = IntMatrix::zeros(b.rank, r);
            for alpha in fan.maximal_cofaces(b.face) {
                if !fan.is_face_of(gamma, alpha) {
                    continue;
                }
                let iota = ws.modules[d - p].iota(alpha, b.face)?;
                acc = acc.add(&(&iota * &ws.cap_block(gamma, alpha, p)?));
            }
            m.set_block(b.offset, col, &acc);
        }
        col += r;
    }
    Ok(m)
}

/// Vanishing of one Borel-Moore group outside the top degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingCheck {
    pub p: usize,
    pub q: usize,
    pub group: String,
    pub vanishes: bool,
    /// First nonzero invariant factor, or the free rank, when the group is nonzero.
    pub witness: Option<String>,
}

impl VanishingCheck {
    fn new(p: usize, q: usize, g: &GroupPresentation, ring: RingTag) -> Self {
        let witness = if let Some(t) = g.invariant_factors.first() {
            Some(format!("invariant factor {t}"))
        } else if g.free_rank > 0 {
            Some(format!("free rank {}", g.free_rank))
        } else {
            None
        };
        VanishingCheck { p, q, group: g.describe(ring), vanishes: g.is_zero(), witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapCheck {
    pub p: usize,
    pub domain_rank: usize,
    pub codomain_rank: usize,
    pub isomorphism: bool,
    pub witness: Option<String>,
}

/// Duality certificate for the star of one face (the whole fan at the vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TpdReport {
    pub face: usize,
    pub ring: RingTag,
    pub dim: usize,
    /// `rank H^0(Star γ, F^p) = rank F^p(γ)` for `p = 0..=d`.
    pub cohomology_ranks: Vec<usize>,
    /// `rank H_d^{BM}(Star γ, F_{d-p})` for `p = 0..=d`.
    pub top_homology_ranks: Vec<usize>,
    pub vanishing: Vec<VanishingCheck>,
    pub caps: Vec<CapCheck>,
    pub verdict: bool,
}

impl TpdReport {
    pub fn vanishing_holds(&self) -> bool {
        self.vanishing.iter().all(|v| v.vanishes)
    }

    pub fn caps_hold(&self) -> bool {
        self.caps.iter().all(|c| c.isomorphism)
    }

    /// Human-readable description of the first failing check.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(v) = self.vanishing.iter().find(|v| !v.vanishes) {
            return Some(format!(
                "H_{}^BM(F_{}) = {} ({})",
                v.q,
                v.p,
                v.group,
                v.witness.as_deref().unwrap_or("nonzero")
            ));
        }
        self.caps.iter().find(|c| !c.isomorphism).map(|c| {
            format!(
                "cap product at p = {} is not an isomorphism ({})",
                c.p,
                c.witness.as_deref().unwrap_or("rank mismatch")
            )
        })
    }
}

/// Tropical Poincaré duality of the whole fan.
pub fn is_tpd(wf: &WeightedFan) -> Result<TpdReport> {
    star_tpd(wf, wf.fan.vertex())
}

/// Tropical Poincaré duality of the star of `gamma`, computed on its upper set.
pub fn star_tpd(wf: &WeightedFan, gamma: usize) -> Result<TpdReport> {
    wf.fan.check_id(gamma)?;
    require_balanced(wf)?;
    Workspace::new(wf)?.star_report(gamma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalTpdReport {
    pub ring: RingTag,
    pub faces: Vec<TpdReport>,
    pub first_failing_face: Option<usize>,
    pub verdict: bool,
}

impl LocalTpdReport {
    fn from_reports(ring: RingTag, faces: Vec<TpdReport>) -> Self {
        let first_failing_face = faces.iter().find(|r| !r.verdict).map(|r| r.face);
        LocalTpdReport { ring, faces, first_failing_face, verdict: first_failing_face.is_none() }
    }
}

/// Duality on the star of every face, the vertex included.
pub fn is_local_tpd(wf: &WeightedFan) -> Result<LocalTpdReport> {
    require_balanced(wf)?;
    let ws = Workspace::new(wf)?;
    Ok(LocalTpdReport::from_reports(wf.ring, ws.all_star_reports()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionStatus {
    Holds,
    Fails,
    HypothesisViolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub p: usize,
    /// `(-1)^d χ(C_•^{BM}(Σ, F_{d-p}))`.
    pub signed_euler_characteristic: i64,
    pub cohomology_dim: usize,
    pub equality: bool,
    /// Vanishing of `H_q^{BM}(Σ, F_r)` for all `r` and all `q ≠ d`.
    pub hypothesis: bool,
    pub status: CriterionStatus,
}

/// Euler characteristic test for duality in degree `p` over a field.
pub fn euler_criterion(wf: &WeightedFan, p: usize) -> Result<EulerReport> {
    euler_criteria(wf)?
        .into_iter()
        .nth(p)
        .ok_or_else(|| Error::OutOfRange(format!("degree {p} exceeds fan dimension {}", wf.fan.dim())))
}

/// `euler_criterion` for every `p = 0..=d`.
pub fn euler_criteria(wf: &WeightedFan) -> Result<Vec<EulerReport>> {
    if !wf.ring.is_field() {
        return Err(Error::Unsupported("a field (the Euler criterion is stated over fields)".into()));
    }
    require_balanced(wf)?;
    let fan = &wf.fan;
    let d = fan.dim();
    let ws = Workspace::new(wf)?;
    let complexes = (0..=d).map(|r| ws.star_complex(fan.vertex(), r)).collect::<Result<Vec<_>>>()?;
    let mut hypothesis = true;
    for c in &complexes {
        let t = homology(c)?;
        hypothesis &= t.degrees.iter().filter(|&&q| q != d).all(|&q| t.vanishes_at(q));
    }
    let sign = if d.is_multiple_of(2) { 1 } else { -1 };
    Ok((0..=d)
        .map(|p| {
            let c = &complexes[d - p];
            let chi: i64 =
                c.degrees.iter().zip(&c.ranks).map(|(&q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) }).sum();
            let signed = sign * chi;
            let dim = ws.modules[p].rank(fan.vertex());
            let equality = signed == dim as i64;
            let status = match (hypothesis, equality) {
                (false, _) => CriterionStatus::HypothesisViolated,
                (true, true) => CriterionStatus::Holds,
                (true, false) => CriterionStatus::Fails,
            };
            EulerReport { p, signed_euler_characteristic: signed, cohomology_dim: dim, equality, hypothesis, status }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dim1Report {
    pub uniquely_balanced: bool,
    pub unit_weights: bool,
    pub verdict: bool,
}

/// One-dimensional fans: duality holds iff the fan is uniquely balanced and
/// every weight is a unit.
pub fn classify_dim1(wf: &WeightedFan) -> Result<Dim1Report> {
    if wf.fan.dim() != 1 {
        return Err(Error::Unsupported(format!("a one-dimensional fan (got dimension {})", wf.fan.dim())));
    }
    let uniquely_balanced = is_uniquely_balanced(wf)?;
    let unit_weights = wf.weights().iter().all(|w| wf.ring.is_unit(w));
    Ok(Dim1Report { uniquely_balanced, unit_weights, verdict: uniquely_balanced && unit_weights })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Codim1GeometricCheck {
    pub unit_weights: bool,
    pub codim1_stars_uniquely_balanced: bool,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    pub ring: RingTag,
    /// Every star has Borel-Moore homology concentrated in the top degree.
    pub all_stars_vanish: bool,
    pub codim1_stars_tpd: bool,
    pub characterization: bool,
    /// Direct evaluation of duality on every star.
    pub local_tpd: bool,
    /// Geometric form over Z: unit weights and uniquely balanced codimension-one stars.
    pub geometric: Option<Codim1GeometricCheck>,
    pub consistent: bool,
}

/// Local duality through vanishing on all stars plus duality on the stars
/// of codimension-one faces, compared with the direct computation.
pub fn local_tpd_characterization(wf: &WeightedFan) -> Result<CharacterizationReport> {
    require_balanced(wf)?;
    let fan = &wf.fan;
    let d = fan.dim();
    let ws = Workspace::new(wf)?;
    let reports = ws.all_star_reports()?;
    let all_stars_vanish = reports.iter().all(TpdReport::vanishing_holds);
    let codim1: &[usize] = if d == 0 { &[] } else { fan.faces_of_dim(d - 1) };
    let codim1_stars_tpd = codim1.iter().all(|&b| reports[b].verdict);
    let characterization = all_stars_vanish && codim1_stars_tpd;
    let local_tpd = reports.iter().all(|r| r.verdict);
    let geometric = if wf.ring == RingTag::Z {
        let unit_weights = wf.weights().iter().all(|w| w.abs().is_one());
        let mut unique = true;
        for &b in codim1 {
            unique &= uniquely_balanced_at(wf, &ws.modules[d], b)?;
        }
        Some(Codim1GeometricCheck {
            unit_weights,
            codim1_stars_uniquely_balanced: unique,
            verdict: all_stars_vanish && unit_weights && unique,
        })
    } else {
        None
    };
    let consistent = characterization == local_tpd && geometric.as_ref().is_none_or(|g| g.verdict == local_tpd);
    Ok(CharacterizationReport {
        ring: wf.ring,
        all_stars_vanish,
        codim1_stars_tpd,
        characterization,
        local_tpd,
        geometric,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarsTheoremReport {
    pub ring: RingTag,
    pub global_vanishing: bool,
    pub proper_stars_tpd: bool,
    /// Proper stars that fail duality, in face order.
    pub failing_stars: Vec<usize>,
    pub tpd: bool,
    pub status: CriterionStatus,
    /// For `d = 2` over a field under the vanishing hypothesis: whether duality
    /// agrees with duality of all ray stars.
    pub dim2_biconditional: Option<bool>,
    pub consistent: bool,
}

/// Deduces duality of the fan from duality of its proper stars under global
/// vanishing, and checks the deduction against the direct computation.
pub fn tpd_from_stars_check(wf: &WeightedFan) -> Result<StarsTheoremReport> {
    let fan = &wf.fan;
    let d = fan.dim();
    if d < 2 {
        return Err(Error::Unsupported(format!("a fan of dimension at least 2 (got {d})")));
    }
    require_balanced(wf)?;
    let ws = Workspace::new(wf)?;
    let reports = ws.all_star_reports()?;
    let v = fan.vertex();
    let global_vanishing = reports[v].vanishing_holds();
    let failing_stars: Vec<usize> = reports.iter().filter(|r| r.face != v && !r.verdict).map(|r| r.face).collect();
    let proper_stars_tpd = failing_stars.is_empty();
    let tpd = reports[v].verdict;
    let status = if !(global_vanishing && proper_stars_tpd) {
        CriterionStatus::HypothesisViolated
    } else if tpd {
        CriterionStatus::Holds
    } else {
        CriterionStatus::Fails
    };
    let dim2_biconditional = (d == 2 && wf.ring.is_field() && global_vanishing)
        .then(|| tpd == fan.faces_of_dim(1).iter().all(|&t| reports[t].verdict));
    let consistent = status != CriterionStatus::Fails && dim2_biconditional != Some(false);
    Ok(StarsTheoremReport {
        ring: wf.ring,
        global_vanishing,
        proper_stars_tpd,
        failing_stars,
        tpd,
        status,
        dim2_biconditional,
        consistent,
    })
}
