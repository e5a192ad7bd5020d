//! Rational polyhedral fans, their face posets and incidence signs.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{
    field_rank, primitive_integer_vector, saturate, smith_normal_form, solve_integral, to_rational, IntMatrix,
    Rationals, RingTag,
};
use crate::{Error, Result};

/// A cone of the fan, identified by its ray set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Sorted indices into the ray table.
    pub rays: Vec<usize>,
    pub dim: usize,
    /// Columns form a basis of the saturated lattice spanned by the cone.
    /// A ray stores its primitive generator; higher faces store the Hermite basis.
    pub basis: IntMatrix,
}

/// Explicit face data for non-simplicial input: ray sets plus covering pairs
/// given as indices into `cones`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplicitFaces {
    pub cones: Vec<Vec<usize>>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<Vec<BigInt>>,
    faces: Vec<Face>,
    by_dim: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// For each face, the faces it covers with their incidence signs.
    facets: Vec<Vec<(usize, i32)>>,
    /// For each face, the faces covering it with their incidence signs.
    cofacets: Vec<Vec<(usize, i32)>>,
    /// Face id of each maximal cone in input order.
    input_maximal: Vec<usize>,
    simplicial: bool,
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn is_primitive(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl Fan {
    /// Convenience constructor for machine-integer input.
    pub fn from_i64(ambient_rank: usize, rays: &[Vec<i64>], maximal_cones: &[Vec<usize>]) -> Result<Fan> {
        build_fan(ambient_rank, rays.iter().map(|r| to_big(r)).collect(), maximal_cones.to_vec(), None)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn vertex(&self) -> usize {
        0
    }

    /// Face ids of dimension `k`, in id order.
    pub fn faces_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn maximal_faces(&self) -> &[usize] {
        self.faces_of_dim(self.dim())
    }

    /// Maximal face ids in the order of the input cone list.
    pub fn input_maximal_order(&self) -> &[usize] {
        &self.input_maximal
    }

    pub fn face_id(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    /// Faces covered by `sigma`, with signs O(tau, sigma).
    pub fn facets(&self, sigma: usize) -> &[(usize, i32)] {
        &self.facets[sigma]
    }

    /// Faces covering `tau`, with signs O(tau, sigma).
    pub fn cofacets(&self, tau: usize) -> &[(usize, i32)] {
        &self.cofacets[tau]
    }

    pub fn is_face_of(&self, tau: usize, sigma: usize) -> bool {
        is_subset(&self.faces[tau].rays, &self.faces[sigma].rays)
    }

    /// Sign O(tau, sigma) for a covering pair.
    pub fn incidence_sign(&self, tau: usize, sigma: usize) -> Result<i32> {
        self.check_id(tau)?;
        self.check_id(sigma)?;
        self.facets[sigma]
            .iter()
            .find(|(t, _)| *t == tau)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::OutOfRange(format!("face {tau} is not covered by face {sigma}")))
    }

    /// Maximal faces containing `gamma`.
    pub fn maximal_cofaces(&self, gamma: usize) -> Vec<usize> {
        self.maximal_faces().iter().copied().filter(|&a| self.is_face_of(gamma, a)).collect()
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id < self.faces.len() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("face id {id} (fan has {} faces)", self.faces.len())))
        }
    }

    /// Faces of the fan containing `gamma`.
    pub fn star_view(&self, gamma: usize) -> Result<StarView> {
        self.check_id(gamma)?;
        let members = (0..self.faces.len()).filter(|&k| self.is_face_of(gamma, k)).collect();
        Ok(StarView { base: gamma, members })
    }

    /// The fan of all faces of `gamma`, with rays re-indexed in increasing order.
    pub fn cone_subfan(&self, gamma: usize) -> Result<Fan> {
        self.check_id(gamma)?;
        let rays: Vec<usize> = self.faces[gamma].rays.clone();
        let remap: HashMap<usize, usize> = rays.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let new_rays: Vec<Vec<BigInt>> = rays.iter().map(|&r| self.rays[r].clone()).collect();
        let all: Vec<usize> = (0..new_rays.len()).collect();
        let explicit = if self.simplicial {
            None
        } else {
            let below: Vec<usize> = (0..self.faces.len()).filter(|&k| self.is_face_of(k, gamma)).collect();
            let pos: HashMap<usize, usize> = below.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let cones = below.iter().map(|&k| self.faces[k].rays.iter().map(|r| remap[r]).collect()).collect();
            let pos = &pos;
            let covers =
                below.iter().flat_map(|&s| self.facets[s].iter().map(move |&(t, _)| (pos[&t], pos[&s]))).collect();
            Some(ExplicitFaces { cones, covers })
        };
        build_fan(self.ambient_rank, new_rays, vec![all], explicit)
    }
}

/// The upper set of a face, used without geometric subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarView {
    pub base: usize,
    /// Member face ids in increasing order; `base` comes first.
    pub members: Vec<usize>,
}

impl StarView {
    pub fn contains(&self, face: usize) -> bool {
        self.members.binary_search(&face).is_ok()
    }

    pub fn members_of_dim(&self, fan: &Fan, k: usize) -> Vec<usize> {
        self.members.iter().copied().filter(|&m| fan.face(m).dim == k).collect()
    }

    /// Star of a member face; stars are transitive so this is the star in the fan.
    pub fn star_of(&self, fan: &Fan, kappa: usize) -> Result<StarView> {
        if !self.contains(kappa) {
            return Err(Error::OutOfRange(format!("face {kappa} is not in the star of {}", self.base)));
        }
        let members = self.members.iter().copied().filter(|&m| fan.is_face_of(kappa, m)).collect();
        Ok(StarView { base: kappa, members })
    }
}

fn lattice_basis(rays: &[Vec<BigInt>], face: &[usize], n: usize) -> Result<IntMatrix> {
    match face.len() {
        0 => Ok(IntMatrix::zeros(n, 0)),
        1 => Ok(IntMatrix::column_vector(&rays[face[0]])),
        _ => {
            let cols: Vec<Vec<BigInt>> = face.iter().map(|&r| rays[r].clone()).collect();
            let m = IntMatrix::from_columns(n, &cols);
            let rank = field_rank(&Rationals, &m);
            if rank == cols.len() {
                return saturate(&m);
            }
            // Non-simplicial: saturate an independent subset of the rays.
            let mut chosen: Vec<usize> = Vec::new();
            for j in 0..cols.len() {
                let mut trial = chosen.clone();
                trial.push(j);
                if field_rank(&Rationals, &m.select_columns(&trial)) == trial.len() {
                    chosen = trial;
                }
            }
            saturate(&m.select_columns(&chosen))
        }
    }
}

fn compute_sign(fan_rays: &[Vec<BigInt>], tau: &Face, sigma: &Face) -> Result<i32> {
    let n = sigma.basis.rows();
    let mut u = vec![BigInt::zero(); n];
    for &r in sigma.rays.iter().filter(|r| tau.rays.binary_search(r).is_err()) {
        for (x, y) in u.iter_mut().zip(&fan_rays[r]) {
            *x += y;
        }
    }
    let frame = IntMatrix::column_vector(&u).hstack(&tau.basis);
    let change = solve_integral(&sigma.basis, &frame)
        .ok_or_else(|| Error::Internal("face frame not integral in the lattice of its coface".into()))?;
    let det = change.det();
    if det.is_zero() {
        return Err(Error::InvalidFan(format!("rays {:?} do not span a cone over {:?}", sigma.rays, tau.rays)));
    }
    Ok(if det.is_positive() { 1 } else { -1 })
}

/// Builds and validates a fan.
///
/// Without `explicit_faces` every maximal cone must be simplicial and the face
/// set is the set of all subsets of maximal cones. Face ids are ordered by
/// dimension, then lexicographically by ray set; the vertex has id 0.
pub fn build_fan(
    ambient_rank: usize,
    rays: Vec<Vec<BigInt>>,
    maximal_cones: Vec<Vec<usize>>,
    explicit_faces: Option<ExplicitFaces>,
) -> Result<Fan> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != ambient_rank {
            return Err(Error::InvalidFan(format!(
                "ray {i} has length {} but ambient rank is {ambient_rank}",
                r.len()
            )));
        }
        if r.iter().all(Zero::is_zero) {
            return Err(Error::InvalidFan(format!("ray {i} is zero")));
        }
        if !is_primitive(r) {
            return Err(Error::InvalidFan(format!("ray {i} is not primitive")));
        }
    }
    if rays.iter().duplicates().next().is_some() {
        return Err(Error::InvalidFan("duplicate rays".into()));
    }
    if maximal_cones.is_empty() {
        return Err(Error::InvalidFan("no maximal cones".into()));
    }
    let mut maximal_sets = Vec::with_capacity(maximal_cones.len());
    for (i, c) in maximal_cones.iter().enumerate() {
        let set: BTreeSet<usize> = c.iter().copied().collect();
        if set.len() != c.len() {
            return Err(Error::InvalidFan(format!("maximal cone {i} repeats a ray")));
        }
        if let Some(&bad) = set.iter().find(|&&r| r >= rays.len()) {
            return Err(Error::InvalidFan(format!("maximal cone {i} references missing ray {bad}")));
        }
        maximal_sets.push(set.into_iter().collect::<Vec<_>>());
    }
    if maximal_sets.iter().duplicates().next().is_some() {
        return Err(Error::InvalidFan("duplicate maximal cones".into()));
    }

    let (face_sets, given_covers) = match &explicit_faces {
        None => {
            let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
            for (i, c) in maximal_sets.iter().enumerate() {
                let m = IntMatrix::from_columns(ambient_rank, &c.iter().map(|&r| rays[r].clone()).collect::<Vec<_>>());
                if field_rank(&Rationals, &m) != c.len() {
                    return Err(Error::InvalidFan(format!(
                        "maximal cone {i} is not simplicial; supply an explicit face list"
                    )));
                }
                for k in 0..=c.len() {
                    set.extend(c.iter().copied().combinations(k));
                }
            }
            (set.into_iter().collect::<Vec<_>>(), None)
        }
        Some(ex) => {
            let mut cones = Vec::with_capacity(ex.cones.len());
            for (i, c) in ex.cones.iter().enumerate() {
                let s: BTreeSet<usize> = c.iter().copied().collect();
                if s.iter().any(|&r| r >= rays.len()) {
                    return Err(Error::InvalidFan(format!("face {i} references a missing ray")));
                }
                cones.push(s.into_iter().collect::<Vec<_>>());
            }
            if cones.iter().duplicates().next().is_some() {
                return Err(Error::InvalidFan("duplicate explicit faces".into()));
            }
            if cones.iter().filter(|c| c.is_empty()).count() != 1 {
                return Err(Error::InvalidFan("explicit faces must contain the vertex exactly once".into()));
            }
            for m in &maximal_sets {
                if !cones.contains(m) {
                    return Err(Error::InvalidFan(format!("maximal cone {m:?} missing from explicit faces")));
                }
            }
            for &(a, b) in &ex.covers {
                if a >= cones.len() || b >= cones.len() {
                    return Err(Error::InvalidFan(format!("cover ({a}, {b}) out of range")));
                }
            }
            let covers: BTreeSet<(Vec<usize>, Vec<usize>)> =
                ex.covers.iter().map(|&(a, b)| (cones[a].clone(), cones[b].clone())).collect();
            let mut sorted = cones.clone();
            sorted.sort();
            (sorted, Some(covers))
        }
    };

    let mut faces: Vec<Face> = Vec::with_capacity(face_sets.len());
    for s in face_sets {
        let basis = lattice_basis(&rays, &s, ambient_rank)?;
        faces.push(Face { dim: basis.cols(), rays: s, basis });
    }
    faces.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));

    let d = faces.iter().map(|f| f.dim).max().unwrap_or(0);
    let index: HashMap<Vec<usize>, usize> = faces.iter().enumerate().map(|(i, f)| (f.rays.clone(), i)).collect();
    for (i, m) in maximal_sets.iter().enumerate() {
        if faces[index[m]].dim != d {
            return Err(Error::InvalidFan(format!("maximal cone {i} has dimension below {d}; fan is not pure")));
        }
    }
    // Every face must lie in a listed maximal cone, and no listed maximal cone in another.
    for f in &faces {
        if !maximal_sets.iter().any(|m| is_subset(&f.rays, m)) {
            return Err(Error::InvalidFan(format!("face {:?} lies in no maximal cone", f.rays)));
        }
    }
    let mut by_dim = vec![Vec::new(); d + 1];
    for (i, f) in faces.iter().enumerate() {
        by_dim[f.dim].push(i);
    }
    if by_dim[0].len() != 1 {
        return Err(Error::InvalidFan("fan must have a unique vertex".into()));
    }

    let mut facets = vec![Vec::new(); faces.len()];
    let mut cofacets = vec![Vec::new(); faces.len()];
    for k in 1..=d {
        for &s in &by_dim[k] {
            for &t in &by_dim[k - 1] {
                if is_subset(&faces[t].rays, &faces[s].rays) {
                    let sign = compute_sign(&rays, &faces[t], &faces[s])?;
                    facets[s].push((t, sign));
                    cofacets[t].push((s, sign));
                }
            }
        }
    }
    if let Some(given) = given_covers {
        let derived: BTreeSet<(Vec<usize>, Vec<usize>)> = facets
            .iter()
            .enumerate()
            .flat_map(|(s, fs)| fs.iter().map(move |&(t, _)| (t, s)))
            .map(|(t, s)| (faces[t].rays.clone(), faces[s].rays.clone()))
            .collect();
        if derived != given {
            return Err(Error::InvalidFan("covering pairs do not match the face inclusions".into()));
        }
    }

    let fan = Fan {
        ambient_rank,
        rays,
        input_maximal: maximal_sets.iter().map(|m| index[m]).collect(),
        faces,
        by_dim,
        index,
        facets,
        cofacets,
        simplicial: explicit_faces.is_none(),
    };
    check_boundary_squared(&fan)?;
    Ok(fan)
}

/// Verifies sum_tau O(mu, tau) O(tau, sigma) = 0 for every pair two levels apart.
pub fn check_boundary_squared(fan: &Fan) -> Result<()> {
    for k in 2..=fan.dim() {
        for &s in fan.faces_of_dim(k) {
            let mut acc: HashMap<usize, i32> = HashMap::new();
            for &(t, st) in fan.facets(s) {
                for &(m, mt) in fan.facets(t) {
                    *acc.entry(m).or_default() += st * mt;
                }
            }
            if let Some((m, _)) = acc.iter().find(|(_, v)| **v != 0) {
                return Err(Error::InvalidFan(format!(
                    "incidence signs between faces {m} and {s} violate the boundary identity"
                )));
            }
        }
    }
    Ok(())
}

/// A fan with a weight on each maximal face, read in a coefficient ring.
#[derive(Clone, Debug)]
pub struct WeightedFan {
    pub fan: Fan,
    pub ring: RingTag,
    /// Weights as given, aligned with the input order of maximal cones.
    pub input_weights: Vec<BigRational>,
    /// Integer representatives of the weights in the ring, aligned with
    /// `fan.maximal_faces()`. Over Q a common denominator is cleared; over Fp
    /// entries are residues.
    weights: Vec<BigInt>,
}

impl WeightedFan {
    pub fn new(fan: Fan, ring: RingTag, input_weights: Vec<BigRational>) -> Result<WeightedFan> {
        let order = fan.input_maximal_order().to_vec();
        if input_weights.len() != order.len() {
            return Err(Error::InvalidWeight(format!(
                "{} weights for {} maximal cones",
                input_weights.len(),
                order.len()
            )));
        }
        let scale = match ring {
            RingTag::Q => input_weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom())),
            _ => BigInt::one(),
        };
        let mut by_face: HashMap<usize, BigInt> = HashMap::new();
        for (i, (w, &face)) in input_weights.iter().zip(&order).enumerate() {
            let v = match ring {
                RingTag::Z => {
                    if !w.is_integer() {
                        return Err(Error::InvalidWeight(format!("weight {i} = {w} is not an integer")));
                    }
                    if w.is_zero() {
                        return Err(Error::InvalidWeight(format!("weight {i} is zero")));
                    }
                    w.to_integer()
                }
                RingTag::Q => {
                    if w.is_zero() {
                        return Err(Error::InvalidWeight(format!("weight {i} is zero")));
                    }
                    (w * BigRational::from_integer(scale.clone())).to_integer()
                }
                RingTag::Fp(p) => {
                    let pb = BigInt::from(p);
                    if w.denom().is_multiple_of(&pb) {
                        return Err(Error::InvalidWeight(format!("weight {i} = {w} has denominator divisible by {p}")));
                    }
                    let num = w.numer().mod_floor(&pb);
                    if num.is_zero() {
                        return Err(Error::InvalidWeight(format!("weight {i} = {w} is zero in Fp:{p}")));
                    }
                    let inv = w.denom().modpow(&(&pb - 2u32), &pb);
                    (num * inv).mod_floor(&pb)
                }
            };
            by_face.insert(face, v);
        }
        let weights = fan.maximal_faces().iter().map(|f| by_face[f].clone()).collect();
        Ok(WeightedFan { fan, ring, input_weights, weights })
    }

    /// Constant weight 1 on every maximal face.
    pub fn unit(fan: Fan, ring: RingTag) -> WeightedFan {
        let n = fan.maximal_faces().len();
        WeightedFan::new(fan, ring, vec![BigRational::one(); n]).expect("unit weights are admissible")
    }

    /// Integer weights aligned with `fan.maximal_faces()`.
    pub fn weights(&self) -> &[BigInt] {
        &self.weights
    }

    pub fn weight_of(&self, face: usize) -> Option<&BigInt> {
        self.fan.maximal_faces().iter().position(|&f| f == face).map(|i| &self.weights[i])
    }

    /// Same fan and weights read in another ring.
    pub fn with_ring(&self, ring: RingTag) -> Result<WeightedFan> {
        WeightedFan::new(self.fan.clone(), ring, self.input_weights.clone())
    }
}

/// A surjection `Z^n -> Z^{n-k}` whose kernel is the saturated lattice
/// spanned by the `k` columns of `basis`.
pub fn quotient_projection(basis: &IntMatrix) -> Result<IntMatrix> {
    let (n, k) = basis.shape();
    let smith = smith_normal_form(basis);
    let diag = smith.diagonal();
    if diag.len() != k || !diag.iter().all(|x| x.abs().is_one()) {
        return Err(Error::Internal("lattice basis is not saturated".into()));
    }
    Ok(smith.u.select_rows(&(k..n).collect::<Vec<_>>()))
}

impl WeightedFan {
    /// The star of `gamma` as a pointed fan in `N / L(gamma)`: one ray per face
    /// covering `gamma`, one cone per face containing it, weights inherited.
    pub fn reduced_star(&self, gamma: usize) -> Result<WeightedFan> {
        let fan = &self.fan;
        let star = fan.star_view(gamma)?;
        let proj = quotient_projection(&fan.face(gamma).basis)?;
        let base = &fan.face(gamma).rays;
        let covers: Vec<usize> = fan.cofacets(gamma).iter().map(|&(s, _)| s).collect();
        let rays: Vec<Vec<BigInt>> = covers
            .iter()
            .map(|&s| {
                let mut v = vec![BigInt::zero(); fan.ambient_rank()];
                for r in fan.face(s).rays.iter().filter(|r| !base.contains(r)) {
                    v.iter_mut().zip(&fan.rays()[*r]).for_each(|(a, b)| *a += b);
                }
                let image = proj.mul_vec(&v);
                primitive_integer_vector(&image.iter().map(to_rational).collect::<Vec<_>>())
            })
            .collect();
        let cone_of = |m: usize| -> Vec<usize> {
            covers.iter().enumerate().filter(|&(_, &s)| fan.is_face_of(s, m)).map(|(i, _)| i).collect()
        };
        let maximal: Vec<usize> = fan.input_maximal_order().iter().copied().filter(|&a| star.contains(a)).collect();
        let cones: Vec<Vec<usize>> = maximal.iter().map(|&a| cone_of(a)).collect();
        let explicit = if fan.is_simplicial() {
            None
        } else {
            let pos: HashMap<usize, usize> = star.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let pos = &pos;
            let covers = star
                .members
                .iter()
                .flat_map(|&s| {
                    fan.facets(s).iter().filter(|(t, _)| pos.contains_key(t)).map(move |&(t, _)| (pos[&t], pos[&s]))
                })
                .collect();
            Some(ExplicitFaces { cones: star.members.iter().map(|&m| cone_of(m)).collect(), covers })
        };
        let reduced = build_fan(proj.rows(), rays, cones, explicit)?;
        let order: HashMap<usize, usize> = fan.input_maximal_order().iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let weights = maximal.iter().map(|a| self.input_weights[order[a]].clone()).collect();
        WeightedFan::new(reduced, self.ring, weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{cross, u34_rays};

    #[test]
    fn cross_faces_and_signs() {
        let f = cross();
        assert_eq!(f.num_faces(), 5);
        assert_eq!(f.dim(), 1);
        for &t in f.faces_of_dim(1) {
            assert_eq!(f.incidence_sign(0, t).unwrap(), 1);
        }
        assert!(f.incidence_sign(1, 2).is_err());
    }

    #[test]
    fn single_ray() {
        let f = Fan::from_i64(1, &[vec![1]], &[vec![0]]).unwrap();
        assert_eq!(f.num_faces(), 2);
    }

    #[test]
    fn u34_counts_and_boundary_identity() {
        let (rays, cones) = u34_rays();
        let f = Fan::from_i64(3, &rays, &cones).unwrap();
        assert_eq!(f.num_faces(), 23);
        assert_eq!(f.faces_of_dim(1).len(), 10);
        assert_eq!(f.faces_of_dim(2).len(), 12);
        for &s in f.faces_of_dim(2) {
            let total: i32 = f.facets(s).iter().map(|&(t, st)| st * f.incidence_sign(0, t).unwrap()).sum();
            assert_eq!(total, 0);
        }
        let star = f.star_view(f.face_id(&[0]).unwrap()).unwrap();
        assert_eq!(star.members.len(), 4);
        assert_eq!(f.cone_subfan(f.faces_of_dim(2)[0]).unwrap().num_faces(), 4);
    }

    #[test]
    fn star_views() {
        let f = cross();
        assert_eq!(f.star_view(0).unwrap().members, vec![0, 1, 2, 3, 4]);
        assert_eq!(f.star_view(3).unwrap().members, vec![3]);
        assert!(f.star_view(9).is_err());
        let (rays, cones) = u34_rays();
        let f = Fan::from_i64(3, &rays, &cones).unwrap();
        for g in 0..f.num_faces() {
            let sg = f.star_view(g).unwrap();
            for &k in &sg.members {
                assert_eq!(sg.star_of(&f, k).unwrap(), f.star_view(k).unwrap());
            }
        }
        assert_eq!(f.cone_subfan(0).unwrap().num_faces(), 1);
        assert_eq!(f.cone_subfan(1).unwrap().num_faces(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Fan::from_i64(2, &[vec![2, 0]], &[vec![0]]).is_err());
        assert!(Fan::from_i64(2, &[vec![1, 0], vec![0, 1]], &[vec![0, 1], vec![0]]).is_err());
        let sq = [vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]];
        assert!(matches!(Fan::from_i64(3, &sq, &[vec![0, 1, 2, 3]]), Err(Error::InvalidFan(_))));
    }

    #[test]
    fn non_simplicial_with_explicit_faces() {
        // Cone over a square.
        let rays: Vec<Vec<BigInt>> = [[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]].iter().map(|r| to_big(r)).collect();
        let cones = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![1, 2],
            vec![2, 3],
            vec![0, 3],
            vec![0, 1, 2, 3],
        ];
        let mut covers = vec![(0, 1), (0, 2), (0, 3), (0, 4)];
        covers.extend([(1, 5), (2, 5), (2, 6), (3, 6), (3, 7), (4, 7), (1, 8), (4, 8)]);
        covers.extend((5..9).map(|e| (e, 9)));
        let ex = ExplicitFaces { cones: cones.clone(), covers: covers.clone() };
        let f = build_fan(3, rays.clone(), vec![vec![0, 1, 2, 3]], Some(ex)).unwrap();
        assert_eq!(f.num_faces(), 10);
        assert_eq!(f.dim(), 3);
        assert!(!f.is_simplicial());
        covers.pop();
        let bad = ExplicitFaces { cones, covers };
        assert!(build_fan(3, rays, vec![vec![0, 1, 2, 3]], Some(bad)).is_err());
    }

    #[test]
    fn weights_per_ring() {
        let half = BigRational::new(1.into(), 2.into());
        let w = vec![half.clone(), BigRational::one(), half.clone(), BigRational::one()];
        assert!(WeightedFan::new(cross(), RingTag::Z, w.clone()).is_err());
        let wf = WeightedFan::new(cross(), RingTag::Q, w.clone()).unwrap();
        assert_eq!(wf.weights(), &[BigInt::from(1), BigInt::from(2), BigInt::from(1), BigInt::from(2)]);
        let wf = WeightedFan::new(cross(), RingTag::Fp(3), w).unwrap();
        assert_eq!(wf.weights()[0], BigInt::from(2));
        let two = vec![BigRational::from_integer(2.into()); 4];
        assert!(WeightedFan::new(cross(), RingTag::Fp(2), two).is_err());
    }
}
