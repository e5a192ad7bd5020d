//! Multi-tangent cosheaves `F_p` and their dual sheaves `F^p`.
//!
//! A module `F_p(σ)` is stored as a basis matrix whose columns live in
//! `⋀^p Z^n`, written in lexicographically ordered wedge monomials.

use std::collections::HashMap;

use itertools::Itertools;

use crate::fan::Fan;
use crate::linalg::{hnf_basis, solve_integral, IntMatrix};
use crate::{Error, Result};

/// Lexicographically ordered `p`-subsets of `{0, .., n-1}`.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(p).collect()
}

/// Position of a sorted subset in the lexicographic list of `subsets(n, |s|)`.
pub fn subset_index(n: usize, s: &[usize]) -> usize {
    // Count subsets that come before `s` lexicographically.
    let p = s.len();
    let mut idx = 0;
    let mut prev = 0;
    for (k, &x) in s.iter().enumerate() {
        for y in prev..x {
            idx += binomial(n - y - 1, p - k - 1);
        }
        prev = x + 1;
    }
    idx
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Columns are the `p`-fold wedges of `p`-subsets of the columns of `b`, in
/// lexicographic subset order, expressed through their `p x p` minors.
pub fn wedge_basis(b: &IntMatrix, p: usize) -> Result<IntMatrix> {
    let (n, k) = b.shape();
    if p > k {
        return Err(Error::OutOfRange(format!("wedge degree {p} exceeds rank {k}")));
    }
    let rows = subsets(n, p);
    let cols = subsets(k, p);
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    for (j, cs) in cols.iter().enumerate() {
        let sub = b.select_columns(cs);
        for (i, rs) in rows.iter().enumerate() {
            out.set(i, j, sub.select_rows(rs).det());
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Cosheaf,
    Sheaf,
}

/// Per-face bases of `F_p` (or of the dual modules `F^p`) with the structure
/// matrices of covering pairs.
#[derive(Clone, Debug)]
pub struct ModuleAssignment {
    pub p: usize,
    pub variance: Variance,
    bases: Vec<IntMatrix>,
    /// `(sigma, tau)` with `tau` covered by `sigma` maps to the inclusion matrix
    /// `F_p(sigma) -> F_p(tau)` in the stored bases.
    covers: HashMap<(usize, usize), IntMatrix>,
}

impl ModuleAssignment {
    pub fn basis(&self, face: usize) -> &IntMatrix {
        &self.bases[face]
    }

    pub fn rank(&self, face: usize) -> usize {
        self.bases[face].cols()
    }

    pub fn num_faces(&self) -> usize {
        self.bases.len()
    }

    /// Inclusion `F_p(sigma) -> F_p(tau)` for any `tau ⪯ sigma`.
    pub fn iota(&self, sigma: usize, tau: usize) -> Result<IntMatrix> {
        if let Some(m) = self.covers.get(&(sigma, tau)) {
            return Ok(m.clone());
        }
        if sigma == tau {
            return Ok(IntMatrix::identity(self.rank(sigma)));
        }
        solve_integral(&self.bases[tau], &self.bases[sigma])
            .ok_or_else(|| Error::OutOfRange(format!("no inclusion from face {sigma} to face {tau}")))
    }

    /// Restriction `F^p(tau) -> F^p(sigma)` in dual bases, the transpose of `iota`.
    pub fn rho(&self, tau: usize, sigma: usize) -> Result<IntMatrix> {
        Ok(self.iota(sigma, tau)?.transpose())
    }

    /// Structure map of a covering pair in the direction of the variance.
    pub fn structure(&self, lower: usize, upper: usize) -> Result<IntMatrix> {
        match self.variance {
            Variance::Cosheaf => self.iota(upper, lower),
            Variance::Sheaf => self.rho(lower, upper),
        }
    }

    pub fn dual(&self) -> ModuleAssignment {
        let variance = match self.variance {
            Variance::Cosheaf => Variance::Sheaf,
            Variance::Sheaf => Variance::Cosheaf,
        };
        ModuleAssignment { variance, ..self.clone() }
    }
}

/// The cosheaf `F_p`: the sum over maximal cofaces `α` of `⋀^p L(α)`.
///
/// Maximal faces use the wedge basis of their lattice basis, so `F_d(α)` is
/// generated by the orientation class. Other faces use the Hermite basis of
/// the (unsaturated) sum.
pub fn build_multitangent(fan: &Fan, p: usize) -> Result<ModuleAssignment> {
    if p > fan.dim() {
        return Err(Error::OutOfRange(format!("degree {p} exceeds fan dimension {}", fan.dim())));
    }
    let top: HashMap<usize, IntMatrix> =
        fan.maximal_faces().iter().map(|&a| Ok((a, wedge_basis(&fan.face(a).basis, p)?))).collect::<Result<_>>()?;
    let wedge_rows = binomial(fan.ambient_rank(), p);
    let mut bases = Vec::with_capacity(fan.num_faces());
    for s in 0..fan.num_faces() {
        if let Some(b) = top.get(&s) {
            bases.push(b.clone());
            continue;
        }
        let mut sum = IntMatrix::zeros(wedge_rows, 0);
        for a in fan.maximal_cofaces(s) {
            sum = sum.hstack(&top[&a]);
        }
        bases.push(hnf_basis(&sum));
    }
    let mut covers = HashMap::new();
    for s in 0..fan.num_faces() {
        for &(t, _) in fan.facets(s) {
            let m = solve_integral(&bases[t], &bases[s])
                .ok_or_else(|| Error::Internal(format!("F_{p}({s}) is not contained in F_{p}({t})")))?;
            covers.insert((s, t), m);
        }
    }
    Ok(ModuleAssignment { p, variance: Variance::Cosheaf, bases, covers })
}

/// The sheaf `F^p`, dual to `F_p` face by face.
pub fn build_multicotangent(fan: &Fan, p: usize) -> Result<ModuleAssignment> {
    Ok(build_multitangent(fan, p)?.dual())
}
