//! Matroids given by their bases, lattices of flats and Bergman fans.

use std::collections::{BTreeSet, HashSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;

use crate::fan::{build_fan, Fan, WeightedFan};
use crate::linalg::RingTag;
use crate::{Error, Result};

/// Largest ground set accepted; flats are enumerated as bitmasks.
pub const MAX_GROUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    ground: usize,
    rank: usize,
    bases: Vec<u32>,
    basis_set: HashSet<u32>,
}

fn mask(s: &[usize]) -> u32 {
    s.iter().fold(0, |m, &i| m | (1 << i))
}

fn elements(m: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| m >> i & 1 == 1).collect()
}

impl Matroid {
    /// Validates the bases (equal size, in range, distinct, exchange axiom).
    pub fn new(ground_size: usize, bases: &[Vec<usize>]) -> Result<Matroid> {
        if ground_size == 0 || ground_size > MAX_GROUND {
            return Err(Error::InvalidMatroid(format!("ground size must be in 1..={MAX_GROUND}")));
        }
        if bases.is_empty() {
            return Err(Error::InvalidMatroid("empty list of bases".into()));
        }
        let rank = bases[0].len();
        let mut masks = Vec::with_capacity(bases.len());
        for (i, b) in bases.iter().enumerate() {
            if b.len() != rank {
                return Err(Error::InvalidMatroid(format!(
                    "basis {i} has size {} but basis 0 has size {rank}",
                    b.len()
                )));
            }
            if let Some(&x) = b.iter().find(|&&x| x >= ground_size) {
                return Err(Error::InvalidMatroid(format!("basis {i} references element {x} outside the ground set")));
            }
            let m = mask(b);
            if m.count_ones() as usize != rank {
                return Err(Error::InvalidMatroid(format!("basis {i} repeats an element")));
            }
            masks.push(m);
        }
        let basis_set: HashSet<u32> = masks.iter().copied().collect();
        if basis_set.len() != masks.len() {
            return Err(Error::InvalidMatroid("duplicate bases".into()));
        }
        for (&b1, &b2) in masks.iter().cartesian_product(&masks) {
            for x in elements(b1 & !b2, ground_size) {
                let ok = elements(b2 & !b1, ground_size)
                    .into_iter()
                    .any(|y| basis_set.contains(&((b1 & !(1 << x)) | (1 << y))));
                if !ok {
                    return Err(Error::InvalidMatroid(format!(
                        "basis exchange fails for {:?}, {:?} at element {x}",
                        elements(b1, ground_size),
                        elements(b2, ground_size)
                    )));
                }
            }
        }
        masks.sort_unstable();
        Ok(Matroid { ground: ground_size, rank, bases: masks, basis_set })
    }

    /// Uniform matroid U_{r,n}.
    pub fn uniform(r: usize, n: usize) -> Result<Matroid> {
        let bases: Vec<Vec<usize>> = (0..n).combinations(r).collect();
        Matroid::new(n, &bases)
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> Vec<Vec<usize>> {
        self.bases.iter().map(|&b| elements(b, self.ground)).collect()
    }

    pub fn is_basis(&self, s: &[usize]) -> bool {
        self.basis_set.contains(&mask(s))
    }

    fn rank_of(&self, s: u32) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn rank_of_set(&self, s: &[usize]) -> usize {
        self.rank_of(mask(s))
    }

    fn closure_mask(&self, s: u32) -> u32 {
        let r = self.rank_of(s);
        (0..self.ground).filter(|&e| s >> e & 1 == 1 || self.rank_of(s | 1 << e) == r).fold(0, |m, e| m | 1 << e)
    }

    pub fn closure(&self, s: &[usize]) -> Vec<usize> {
        elements(self.closure_mask(mask(s)), self.ground)
    }

    pub fn loops(&self) -> Vec<usize> {
        self.closure(&[])
    }

    pub fn is_loopless(&self) -> bool {
        self.loops().is_empty()
    }
}

/// The lattice of flats, ordered by (rank, lexicographic element list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    pub flats: Vec<Vec<usize>>,
    pub ranks: Vec<usize>,
    /// Pairs `(i, j)` with flat `i` covered by flat `j`.
    pub covers: Vec<(usize, usize)>,
}

pub fn matroid_flats(m: &Matroid) -> FlatLattice {
    let bottom = m.closure_mask(0);
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut queue = VecDeque::from([bottom]);
    seen.insert(bottom);
    while let Some(f) = queue.pop_front() {
        for e in 0..m.ground {
            if f >> e & 1 == 0 {
                let g = m.closure_mask(f | 1 << e);
                if seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
    }
    let mut flats: Vec<(usize, Vec<usize>, u32)> =
        seen.into_iter().map(|f| (m.rank_of(f), elements(f, m.ground), f)).collect();
    flats.sort();
    let mut covers = Vec::new();
    for (i, (ri, _, fi)) in flats.iter().enumerate() {
        for (j, (rj, _, fj)) in flats.iter().enumerate() {
            if *rj == ri + 1 && fi & fj == *fi {
                covers.push((i, j));
            }
        }
    }
    FlatLattice { ranks: flats.iter().map(|f| f.0).collect(), flats: flats.into_iter().map(|f| f.1).collect(), covers }
}

/// Bergman fan in `Z^{n}` for a loopless matroid on `n + 1` elements. The
/// element `n` maps to `-(1, ..., 1)`; rays are indexed by proper nonempty
/// flats in lattice order.
pub fn bergman_fan(m: &Matroid) -> Result<Fan> {
    if !m.is_loopless() {
        return Err(Error::InvalidMatroid(format!("matroid has loops {:?}", m.loops())));
    }
    let n = m.ground - 1;
    let lattice = matroid_flats(m);
    let proper: Vec<usize> =
        (0..lattice.flats.len()).filter(|&i| lattice.ranks[i] > 0 && lattice.ranks[i] < m.rank).collect();
    let rays: Vec<Vec<BigInt>> = proper
        .iter()
        .map(|&i| {
            let mut v = vec![0i64; n];
            for &e in &lattice.flats[i] {
                if e < n {
                    v[e] += 1;
                } else {
                    v.iter_mut().for_each(|x| *x -= 1);
                }
            }
            v.into_iter().map(BigInt::from).collect()
        })
        .collect();
    let pos: std::collections::HashMap<usize, usize> = proper.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    // Maximal chains of proper flats, extended one cover at a time.
    let pos_ref = &pos;
    let covers = &lattice.covers;
    let mut chains: Vec<Vec<usize>> = proper.iter().filter(|&&i| lattice.ranks[i] == 1).map(|&i| vec![i]).collect();
    for _ in 2..m.rank {
        chains = chains
            .into_iter()
            .flat_map(|c| {
                let top = *c.last().expect("nonempty chain");
                covers
                    .iter()
                    .filter(move |&&(a, b)| a == top && pos_ref.contains_key(&b))
                    .map(move |&(_, b)| {
                        let mut c2 = c.clone();
                        c2.push(b);
                        c2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut cones: Vec<Vec<usize>> = if m.rank <= 1 {
        vec![Vec::new()]
    } else {
        chains.into_iter().map(|c| c.iter().map(|i| pos[i]).sorted().collect()).collect()
    };
    cones.sort();
    build_fan(n, rays, cones, None)
}

/// Bergman fan with constant weight 1.
pub fn bergman_weighted(m: &Matroid, ring: RingTag) -> Result<WeightedFan> {
    Ok(WeightedFan::unit(bergman_fan(m)?, ring))
}
