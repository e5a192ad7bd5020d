//! Cellular chain and cochain complexes of sheaves on fans.

use crate::fan::Fan;
use crate::linalg::{homology_of_pair, is_zero_over, kernel_over, solve_over, HomologyGroup, IntMatrix, RingTag};
use crate::sheaf::{build_multicotangent, build_multitangent, ModuleAssignment};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Differentials lower the degree.
    Homological,
    /// Differentials raise the degree.
    Cohomological,
}

/// One summand of a graded piece: a face and its coordinate range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub face: usize,
    pub offset: usize,
    pub rank: usize,
}

/// A bounded complex of free modules over `ring`, stored by position
/// `0..=m` with degree labels `degrees[k]` (consecutive, ascending).
///
/// `maps[k]` connects positions `k` and `k + 1`: for a homological complex it
/// is `C_{k+1} -> C_k`, for a cohomological one `C^k -> C^{k+1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub direction: Direction,
    pub ring: RingTag,
    pub degrees: Vec<usize>,
    pub ranks: Vec<usize>,
    pub maps: Vec<IntMatrix>,
    /// Face summands per position; empty when the complex is not face-indexed.
    pub layout: Vec<Vec<Block>>,
}

impl ChainComplex {
    /// Validates shapes and that consecutive maps compose to zero in `ring`.
    pub fn new(
        direction: Direction,
        ring: RingTag,
        first_degree: usize,
        ranks: Vec<usize>,
        maps: Vec<IntMatrix>,
        layout: Vec<Vec<Block>>,
    ) -> Result<ChainComplex> {
        if ranks.is_empty() || maps.len() + 1 != ranks.len() {
            return Err(Error::ShapeMismatch(format!("{} maps for {} graded pieces", maps.len(), ranks.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            let expected = match direction {
                Direction::Homological => (ranks[k], ranks[k + 1]),
                Direction::Cohomological => (ranks[k + 1], ranks[k]),
            };
            if m.shape() != expected {
                return Err(Error::ShapeMismatch(format!("map {k} is {:?}, expected {:?}", m.shape(), expected)));
            }
        }
        for k in 0..maps.len().saturating_sub(1) {
            let product = match direction {
                Direction::Homological => &maps[k] * &maps[k + 1],
                Direction::Cohomological => &maps[k + 1] * &maps[k],
            };
            if !is_zero_over(ring, &product) {
                return Err(Error::NotAComplex(format!(
                    "differentials at degree {} do not compose to zero",
                    first_degree + k + 1
                )));
            }
        }
        let degrees = (first_degree..first_degree + ranks.len()).collect();
        Ok(ChainComplex { direction, ring, degrees, ranks, maps, layout })
    }

    pub fn position(&self, degree: usize) -> Option<usize> {
        degree.checked_sub(self.degrees[0]).filter(|&k| k < self.ranks.len())
    }

    pub fn rank_at(&self, degree: usize) -> usize {
        self.position(degree).map_or(0, |k| self.ranks[k])
    }

    /// Differential leaving `degree`, as a matrix (possibly with zero rows).
    pub fn outgoing(&self, degree: usize) -> IntMatrix {
        let Some(k) = self.position(degree) else { return IntMatrix::zeros(0, 0) };
        match self.direction {
            Direction::Homological if k > 0 => self.maps[k - 1].clone(),
            Direction::Cohomological if k < self.maps.len() => self.maps[k].clone(),
            _ => IntMatrix::zeros(0, self.ranks[k]),
        }
    }

    /// Differential arriving at `degree`.
    pub fn incoming(&self, degree: usize) -> IntMatrix {
        let Some(k) = self.position(degree) else { return IntMatrix::zeros(0, 0) };
        match self.direction {
            Direction::Homological if k < self.maps.len() => self.maps[k].clone(),
            Direction::Cohomological if k > 0 => self.maps[k - 1].clone(),
            _ => IntMatrix::zeros(self.ranks[k], 0),
        }
    }

    /// The dual complex: transposed maps, reversed direction, same ring.
    pub fn dual(&self) -> ChainComplex {
        let direction = match self.direction {
            Direction::Homological => Direction::Cohomological,
            Direction::Cohomological => Direction::Homological,
        };
        ChainComplex {
            direction,
            ring: self.ring,
            degrees: self.degrees.clone(),
            ranks: self.ranks.clone(),
            maps: self.maps.iter().map(IntMatrix::transpose).collect(),
            layout: self.layout.clone(),
        }
    }

    pub fn with_ring(&self, ring: RingTag) -> ChainComplex {
        ChainComplex { ring, ..self.clone() }
    }
}

/// (Co)homology of a complex, degree by degree.
#[derive(Clone, Debug)]
pub struct HomologyTable {
    pub ring: RingTag,
    pub degrees: Vec<usize>,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyTable {
    pub fn at(&self, degree: usize) -> Option<&HomologyGroup> {
        self.degrees.iter().position(|&d| d == degree).map(|k| &self.groups[k])
    }

    /// True if the group in `degree` vanishes (absent degrees vanish).
    pub fn vanishes_at(&self, degree: usize) -> bool {
        self.at(degree).is_none_or(|g| g.presentation.is_zero())
    }

    pub fn free_rank(&self, degree: usize) -> usize {
        self.at(degree).map_or(0, |g| g.presentation.free_rank)
    }
}

pub fn homology(c: &ChainComplex) -> Result<HomologyTable> {
    let groups = c
        .degrees
        .iter()
        .map(|&q| homology_of_pair(&c.incoming(q), &c.outgoing(q), c.ring))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomologyTable { ring: c.ring, degrees: c.degrees.clone(), groups })
}

/// Alternating sum of the ranks of the graded pieces; defined over fields.
pub fn euler_characteristic(c: &ChainComplex) -> Result<i64> {
    if !c.ring.is_field() {
        return Err(Error::Unsupported("a field (Euler characteristic over Z is not reported)".into()));
    }
    Ok(c.degrees.iter().zip(&c.ranks).map(|(&q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) }).sum())
}

fn layout_for(fan: &Fan, members: &[usize], module: &ModuleAssignment, lo: usize, hi: usize) -> Vec<Vec<Block>> {
    (lo..=hi)
        .map(|q| {
            let mut offset = 0;
            members
                .iter()
                .copied()
                .filter(|&m| fan.face(m).dim == q)
                .map(|face| {
                    let rank = module.rank(face);
                    let b = Block { face, offset, rank };
                    offset += rank;
                    b
                })
                .collect()
        })
        .collect()
}

/// Borel-Moore chain complex of a cosheaf restricted to an upper set of faces.
/// Degrees run from the smallest member dimension up to the fan dimension.
pub fn bm_complex_on(fan: &Fan, module: &ModuleAssignment, members: &[usize], ring: RingTag) -> Result<ChainComplex> {
    let lo = members.iter().map(|&m| fan.face(m).dim).min().unwrap_or(0);
    let hi = fan.dim();
    let layout = layout_for(fan, members, module, lo, hi);
    let ranks: Vec<usize> = layout.iter().map(|l| l.iter().map(|b| b.rank).sum()).collect();
    let mut maps = Vec::new();
    for k in 0..layout.len().saturating_sub(1) {
        let mut m = IntMatrix::zeros(ranks[k], ranks[k + 1]);
        for col in &layout[k + 1] {
            for &(tau, sign) in fan.facets(col.face) {
                let Some(row) = layout[k].iter().find(|b| b.face == tau) else { continue };
                let block = module.iota(col.face, tau)?;
                let block = if sign < 0 { block.neg() } else { block };
                m.set_block(row.offset, col.offset, &block);
            }
        }
        maps.push(m);
    }
    ChainComplex::new(Direction::Homological, ring, lo, ranks, maps, layout)
}

/// `C^{BM}_•(Σ, F_p)` over `ring`.
pub fn bm_chain_complex(fan: &Fan, p: usize, ring: RingTag) -> Result<ChainComplex> {
    let module = build_multitangent(fan, p)?;
    let all: Vec<usize> = (0..fan.num_faces()).collect();
    bm_complex_on(fan, &module, &all, ring)
}

/// `C^•_c(Σ, F^p)`: the transpose of the Borel-Moore complex in dual bases.
pub fn compact_cochain_complex(fan: &Fan, p: usize, ring: RingTag) -> Result<ChainComplex> {
    let sheaf = build_multicotangent(fan, p)?;
    let all: Vec<usize> = (0..fan.num_faces()).collect();
    Ok(bm_complex_on(fan, &sheaf.dual(), &all, ring)?.dual())
}

/// `C^•(Σ, F^p)`: only the vertex is a compact cell, so the complex is
/// `F^p(v)` in degree 0.
pub fn cochain_complex(fan: &Fan, p: usize, ring: RingTag) -> Result<ChainComplex> {
    let sheaf = build_multicotangent(fan, p)?;
    let r = sheaf.rank(fan.vertex());
    let layout = vec![vec![Block { face: fan.vertex(), offset: 0, rank: r }]];
    ChainComplex::new(Direction::Cohomological, ring, 0, vec![r], Vec::new(), layout)
}

/// Borel-Moore complex of `F_p` on the star of `gamma` (its upper set).
pub fn star_bm_complex(fan: &Fan, gamma: usize, p: usize, ring: RingTag) -> Result<ChainComplex> {
    let star = fan.star_view(gamma)?;
    let module = build_multitangent(fan, p)?;
    bm_complex_on(fan, &module, &star.members, ring)
}

/// Compactly supported cochains of the constant sheaf `R^k` on a fan.
pub fn constant_compact_cochain(fan: &Fan, k: usize, ring: RingTag) -> Result<ChainComplex> {
    let d = fan.dim();
    let mut layout = Vec::new();
    for q in 0..=d {
        layout.push(
            fan.faces_of_dim(q)
                .iter()
                .enumerate()
                .map(|(i, &face)| Block { face, offset: i * k, rank: k })
                .collect::<Vec<_>>(),
        );
    }
    let ranks: Vec<usize> = layout.iter().map(Vec::len).map(|n| n * k).collect();
    let mut maps = Vec::new();
    for q in 0..d {
        let mut m = IntMatrix::zeros(ranks[q + 1], ranks[q]);
        for col in &layout[q] {
            for &(sigma, sign) in fan.cofacets(col.face) {
                let row = layout[q + 1].iter().find(|b| b.face == sigma).expect("covering face is present");
                let id = IntMatrix::identity(k);
                m.set_block(row.offset, col.offset, &if sign < 0 { id.neg() } else { id });
            }
        }
        maps.push(m);
    }
    ChainComplex::new(Direction::Cohomological, ring, 0, ranks, maps, layout)
}

/// Top-degree cycles of `F_q` on the star of `gamma`: a basis (over `ring`) of
/// the kernel of the star boundary leaving `⊕_{α ⪰ γ} F_q(α)`. Also returns
/// the layout of that direct sum.
pub fn star_top_cycles(
    fan: &Fan,
    module: &ModuleAssignment,
    gamma: usize,
    ring: RingTag,
) -> Result<(Vec<Block>, IntMatrix)> {
    let star = fan.star_view(gamma)?;
    let c = bm_complex_on(fan, module, &star.members, ring)?;
    let d = fan.dim();
    let layout = c.layout[c.position(d).expect("top degree present")].clone();
    let k = kernel_over(ring, &c.outgoing(d));
    Ok((layout, k))
}

struct RowLevel {
    /// `(gamma, alpha, offset)` for every maximal `alpha ⪰ gamma`.
    pairs: Vec<(usize, usize, usize)>,
    total: usize,
    /// `(gamma, row start, column start, local kernel basis)`.
    kernels: Vec<(usize, usize, usize, IntMatrix)>,
    block_rank: usize,
}

impl RowLevel {
    fn kernel(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.total, self.block_rank);
        for (_, r0, c0, k) in &self.kernels {
            m.set_block(*r0, *c0, k);
        }
        m
    }
}

/// The row complex `⊕_{γ ∈ Σ^r} H_d^{BM}(Star γ, F_{d-p})`, `r = 0..=d`, with
/// the differential induced by the coboundary of the cone complexes.
pub fn star_row_complex(fan: &Fan, p: usize, ring: RingTag) -> Result<ChainComplex> {
    let d = fan.dim();
    if d < 2 {
        return Err(Error::Unsupported(format!("a fan of dimension at least 2 (got {d})")));
    }
    if p > d {
        return Err(Error::OutOfRange(format!("degree {p} exceeds fan dimension {d}")));
    }
    let module = build_multitangent(fan, d - p)?;

    let mut levels = Vec::with_capacity(d + 1);
    for r in 0..=d {
        let mut level = RowLevel { pairs: Vec::new(), total: 0, kernels: Vec::new(), block_rank: 0 };
        for &g in fan.faces_of_dim(r) {
            let (layout, k) = star_top_cycles(fan, &module, g, ring)?;
            let row_start = level.total;
            for b in &layout {
                level.pairs.push((g, b.face, level.total));
                level.total += b.rank;
            }
            let cols = k.cols();
            level.kernels.push((g, row_start, level.block_rank, k));
            level.block_rank += cols;
        }
        levels.push(level);
    }

    let mut maps = Vec::with_capacity(d);
    for r in 0..d {
        let (cur, next) = (&levels[r], &levels[r + 1]);
        // y_{κ,α} = Σ_{γ ≺ κ} O(γ,κ) x_{γ,α}
        let mut a_map = IntMatrix::zeros(next.total, cur.total);
        for &(kappa, alpha, row_off) in &next.pairs {
            for &(gamma, sign) in fan.facets(kappa) {
                let Some(&(_, _, col_off)) = cur.pairs.iter().find(|&&(g, a, _)| g == gamma && a == alpha) else {
                    continue;
                };
                let id = IntMatrix::identity(module.rank(alpha));
                a_map.set_block(row_off, col_off, &if sign < 0 { id.neg() } else { id });
            }
        }
        let image = &a_map * &cur.kernel();
        let dbar = solve_over(ring, &next.kernel(), &image)
            .ok_or_else(|| Error::Internal(format!("row differential at degree {r} leaves the star cycles")))?;
        maps.push(dbar);
    }
    let ranks = levels.iter().map(|l| l.block_rank).collect();
    let layout = levels
        .iter()
        .map(|l| l.kernels.iter().map(|(g, _, c0, k)| Block { face: *g, offset: *c0, rank: k.cols() }).collect())
        .collect();
    ChainComplex::new(Direction::Cohomological, ring, 0, ranks, maps, layout)
}
