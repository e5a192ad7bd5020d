//! Exact integer and field linear algebra.

mod field;
mod matrix;
mod normal_form;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use field::{
    kernel as field_kernel, primitive_integer_vector, rank as field_rank, rationals_to_int, residues_to_int, rref,
    solve as field_solve, to_field, FMatrix, Field, PrimeField, Rationals,
};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, hnf_basis, smith_normal_form, Smith};

use crate::{Error, Result};

/// Coefficient ring for (co)homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingTag {
    Z,
    Q,
    Fp(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingTag {
    pub fn fp(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::ModulusNotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidRing(format!("prime {p} exceeds the supported range")));
        }
        Ok(RingTag::Fp(p))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingTag::Z)
    }

    /// Whether the integer `x`, read in this ring, is a unit.
    pub fn is_unit(self, x: &BigInt) -> bool {
        match self {
            RingTag::Z => x.abs().is_one(),
            RingTag::Q => !x.is_zero(),
            RingTag::Fp(p) => !(x % BigInt::from(p)).is_zero(),
        }
    }

    /// Whether the integer `x`, read in this ring, is zero.
    pub fn is_zero_elem(self, x: &BigInt) -> bool {
        match self {
            RingTag::Fp(p) => (x % BigInt::from(p)).is_zero(),
            _ => x.is_zero(),
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Z => write!(f, "Z"),
            RingTag::Q => write!(f, "Q"),
            RingTag::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for RingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" => Ok(RingTag::Z),
            "Q" => Ok(RingTag::Q),
            other => {
                let digits = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix("F"))
                    .ok_or_else(|| Error::InvalidRing(format!("unknown ring {other:?}")))?;
                let p: u64 = digits.parse().map_err(|_| Error::InvalidRing(format!("bad modulus in {other:?}")))?;
                RingTag::fp(p)
            }
        }
    }
}

impl Serialize for RingTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finitely generated module over a PID: free part plus invariant factors.
/// Over a field only `free_rank` (the dimension) is used.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl GroupPresentation {
    pub fn free(rank: usize) -> Self {
        GroupPresentation { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Like `Display`, with the free part written over the named ring.
    pub fn describe(&self, ring: RingTag) -> String {
        let base = match ring {
            RingTag::Z => "Z".to_string(),
            RingTag::Q => "Q".to_string(),
            RingTag::Fp(p) => format!("F{p}"),
        };
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(base),
            r => parts.push(format!("{base}^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "R".to_string() } else { format!("R^{}", self.free_rank) });
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A subquotient `ker / im` with representing cycles. Columns of `generators`
/// list the free generators first, then one torsion generator per invariant
/// factor, in the order of `presentation.invariant_factors`.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub presentation: GroupPresentation,
    pub generators: IntMatrix,
}

/// Saturated basis of the integer kernel `{x : M x = 0}`, in Hermite form.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(m);
    let zero_cols: Vec<usize> = (0..h.cols()).filter(|&j| h.column(j).iter().all(Zero::is_zero)).collect();
    hnf_basis(&u.select_columns(&zero_cols))
}

/// Basis of the saturation of the column lattice of `b`.
pub fn saturate(b: &IntMatrix) -> Result<IntMatrix> {
    if field_rank(&Rationals, b) < b.cols() {
        return Err(Error::DependentColumns);
    }
    Ok(kernel_lattice(&kernel_lattice(&b.transpose()).transpose()))
}

/// Solution of `A X = B` over Z for `A` of full column rank, if one exists.
pub fn solve_integral(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let x = field_solve(&Rationals, a, b)?;
    rationals_to_int(&x, a.cols(), b.cols())
}

/// Rank of `m` read over the ring (Z and Q share the rational rank).
pub fn rank_over(ring: RingTag, m: &IntMatrix) -> usize {
    match ring {
        RingTag::Z | RingTag::Q => field_rank(&Rationals, m),
        RingTag::Fp(p) => field_rank(&PrimeField::new(p), m),
    }
}

/// Kernel basis over the ring. For Z and Q this is the saturated integer
/// kernel (a Q-basis as well); for Fp it is a basis of residues.
pub fn kernel_over(ring: RingTag, m: &IntMatrix) -> IntMatrix {
    match ring {
        RingTag::Z | RingTag::Q => kernel_lattice(m),
        RingTag::Fp(p) => {
            let f = PrimeField::new(p);
            let k = field_kernel(&f, m);
            IntMatrix::from_columns(
                m.cols(),
                &k.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect::<Vec<_>>(),
            )
        }
    }
}

/// Solves `A X = B` over the ring for `A` of full column rank (over that ring).
/// Over Z and Q the solution must be integral; over Fp it is returned as residues.
pub fn solve_over(ring: RingTag, a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    match ring {
        RingTag::Z | RingTag::Q => solve_integral(a, b),
        RingTag::Fp(p) => {
            let x = field_solve(&PrimeField::new(p), a, b)?;
            Some(residues_to_int(&x, a.cols(), b.cols()))
        }
    }
}

pub fn is_zero_over(ring: RingTag, m: &IntMatrix) -> bool {
    m.entries().iter().all(|x| ring.is_zero_elem(x))
}

/// Computes `ker(boundary_out) / im(boundary_in)` over the ring.
pub fn homology_of_pair(boundary_in: &IntMatrix, boundary_out: &IntMatrix, ring: RingTag) -> Result<HomologyGroup> {
    let n = boundary_out.cols();
    if boundary_in.rows() != n {
        return Err(Error::ShapeMismatch(format!(
            "incoming map has {} rows but outgoing map has {} columns",
            boundary_in.rows(),
            n
        )));
    }
    if !is_zero_over(ring, &(boundary_out * boundary_in)) {
        return Err(Error::NotAComplex("consecutive maps do not compose to zero".into()));
    }
    match ring {
        RingTag::Z => homology_over_z(boundary_in, boundary_out),
        RingTag::Q => Ok(homology_over_field(&Rationals, boundary_in, kernel_lattice(boundary_out))),
        RingTag::Fp(p) => Ok(homology_over_field(&PrimeField::new(p), boundary_in, kernel_over(ring, boundary_out))),
    }
}

fn homology_over_z(boundary_in: &IntMatrix, boundary_out: &IntMatrix) -> Result<HomologyGroup> {
    let k = kernel_lattice(boundary_out);
    if boundary_in.cols() == 0 || boundary_in.is_zero() {
        return Ok(HomologyGroup { presentation: GroupPresentation::free(k.cols()), generators: k });
    }
    let x = solve_integral(&k, boundary_in)
        .ok_or_else(|| Error::Internal("boundary image not integral in kernel basis".into()))?;
    let smith = smith_normal_form(&x);
    let u_inv = solve_integral(&smith.u, &IntMatrix::identity(k.cols()))
        .ok_or_else(|| Error::Internal("Smith transform not unimodular".into()))?;
    let reps = &k * &u_inv;
    let diag = smith.diagonal();
    let r = diag.len();
    let torsion: Vec<usize> = (0..r).filter(|&i| !diag[i].is_one()).collect();
    let mut cols: Vec<usize> = (r..k.cols()).collect();
    cols.extend(&torsion);
    Ok(HomologyGroup {
        presentation: GroupPresentation {
            free_rank: k.cols() - r,
            invariant_factors: torsion.iter().map(|&i| diag[i].clone()).collect(),
        },
        generators: reps.select_columns(&cols),
    })
}

fn homology_over_field<F: Field>(f: &F, boundary_in: &IntMatrix, kernel: IntMatrix) -> HomologyGroup {
    let a = boundary_in.cols();
    let stacked = boundary_in.hstack(&kernel);
    let mut m = to_field(f, &stacked);
    let pivots = rref(f, &mut m, stacked.cols());
    let chosen: Vec<usize> = pivots.iter().filter(|&&c| c >= a).map(|&c| c - a).collect();
    HomologyGroup { presentation: GroupPresentation::free(chosen.len()), generators: kernel.select_columns(&chosen) }
}

/// Decides whether `map` (in the stored generators) is an isomorphism `dom -> cod`.
pub fn is_isomorphism(
    map: &IntMatrix,
    dom: &GroupPresentation,
    cod: &GroupPresentation,
    ring: RingTag,
) -> Result<bool> {
    if map.cols() != dom.num_generators() || map.rows() != cod.num_generators() {
        return Err(Error::ShapeMismatch(format!(
            "map is {}x{} but modules have {} and {} generators",
            map.rows(),
            map.cols(),
            cod.num_generators(),
            dom.num_generators()
        )));
    }
    if ring.is_field() && (!dom.invariant_factors.is_empty() || !cod.invariant_factors.is_empty()) {
        return Err(Error::ShapeMismatch("torsion presentation over a field".into()));
    }
    if dom != cod {
        return Ok(false);
    }
    let n = map.rows();
    match ring {
        RingTag::Q | RingTag::Fp(_) => Ok(rank_over(ring, map) == n),
        RingTag::Z => {
            if cod.invariant_factors.is_empty() {
                return Ok(map.det().abs().is_one());
            }
            // Surjectivity onto the presented codomain; equal presentations then
            // force bijectivity since finitely generated modules are Hopfian.
            let t = cod.invariant_factors.len();
            let mut rel = IntMatrix::zeros(n, t);
            for (i, d) in cod.invariant_factors.iter().enumerate() {
                rel.set(cod.free_rank + i, i, d.clone());
            }
            let diag = smith_normal_form(&map.hstack(&rel)).diagonal();
            Ok(diag.len() == n && diag.iter().all(One::is_one))
        }
    }
}

/// Whether `map` has trivial kernel as a map of free modules over the ring.
pub fn is_injective_free(map: &IntMatrix, ring: RingTag) -> bool {
    rank_over(ring, map) == map.cols()
}

pub fn to_rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn z(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_lattice(&IntMatrix::from_rows(&[[1, 1, 1, 1]]));
        assert_eq!(k.cols(), 3);
        assert_eq!(k, IntMatrix::from_i64_columns(4, &[[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]));
        let rays = IntMatrix::from_i64_columns(3, &[[1, 0, 2], [-1, 0, 0], [0, -1, 0], [0, 1, -2]]);
        assert_eq!(kernel_lattice(&rays), IntMatrix::from_i64_columns(4, &[[1, 1, 1, 1]]));
        assert_eq!(kernel_lattice(&IntMatrix::from_rows(&[[2, 1], [1, 1]])).cols(), 0);
        assert_eq!(kernel_lattice(&IntMatrix::zeros(0, 2)), IntMatrix::identity(2));
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(
            saturate(&IntMatrix::from_i64_columns(2, &[[2, 0]])).unwrap(),
            IntMatrix::from_i64_columns(2, &[[1, 0]])
        );
        assert_eq!(
            saturate(&IntMatrix::from_i64_columns(2, &[[3, 6]])).unwrap(),
            IntMatrix::from_i64_columns(2, &[[1, 2]])
        );
        let b = IntMatrix::from_i64_columns(3, &[[1, 0, 2], [0, 1, -2]]);
        assert_eq!(saturate(&b).unwrap(), b);
        assert!(matches!(saturate(&IntMatrix::from_i64_columns(2, &[[1, 2], [2, 4]])), Err(Error::DependentColumns)));
    }

    #[test]
    fn homology_examples() {
        let out = IntMatrix::from_rows(&[[1, 1, 1, 1]]);
        let h = homology_of_pair(&IntMatrix::zeros(4, 0), &out, RingTag::Z).unwrap();
        assert_eq!(h.presentation, GroupPresentation::free(3));
        let h = homology_of_pair(&IntMatrix::from_rows(&[[2]]), &IntMatrix::zeros(0, 1), RingTag::Z).unwrap();
        assert_eq!(h.presentation.free_rank, 0);
        assert_eq!(h.presentation.invariant_factors, vec![z(2)]);
        let h = homology_of_pair(&IntMatrix::from_rows(&[[2]]), &IntMatrix::zeros(0, 1), RingTag::Q).unwrap();
        assert!(h.presentation.is_zero());
        let h = homology_of_pair(&IntMatrix::from_rows(&[[2]]), &IntMatrix::zeros(0, 1), RingTag::Fp(2)).unwrap();
        assert_eq!(h.presentation, GroupPresentation::free(1));
        let h = homology_of_pair(&IntMatrix::zeros(5, 0), &IntMatrix::zeros(0, 5), RingTag::Z).unwrap();
        assert_eq!(h.presentation, GroupPresentation::free(5));
    }

    #[test]
    fn homology_rejects_non_complex() {
        let r = homology_of_pair(&IntMatrix::from_rows(&[[1], [0]]), &IntMatrix::from_rows(&[[1, 1]]), RingTag::Z);
        assert!(matches!(r, Err(Error::NotAComplex(_))));
        // Over F_2 the same data composes to zero after doubling.
        let r = homology_of_pair(&IntMatrix::from_rows(&[[2], [0]]), &IntMatrix::from_rows(&[[1, 1]]), RingTag::Fp(2));
        assert!(r.is_ok());
    }

    #[test]
    fn torsion_generators_are_cycles() {
        // Chain map Z^2 -> Z^3 with image of index 6 in a rank-2 sublattice.
        let inn = IntMatrix::from_rows(&[[2, 0], [0, 3], [-2, -3]]);
        let out = IntMatrix::from_rows(&[[1, 1, 1]]);
        let h = homology_of_pair(&inn, &out, RingTag::Z).unwrap();
        assert_eq!(h.presentation.free_rank, 0);
        assert_eq!(h.presentation.invariant_factors, vec![z(6)]);
        assert!((&out * &h.generators).is_zero());
    }

    #[test]
    fn isomorphism_depends_on_ring() {
        let two = IntMatrix::from_rows(&[[2]]);
        let one = GroupPresentation::free(1);
        assert!(!is_isomorphism(&two, &one, &one, RingTag::Z).unwrap());
        assert!(is_isomorphism(&two, &one, &one, RingTag::Q).unwrap());
        assert!(!is_isomorphism(&two, &one, &one, RingTag::Fp(2)).unwrap());
        assert!(is_isomorphism(
            &IntMatrix::identity(4),
            &GroupPresentation::free(4),
            &GroupPresentation::free(4),
            RingTag::Z
        )
        .unwrap());
        assert!(is_isomorphism(&two, &one, &GroupPresentation::free(2), RingTag::Z).is_err());
    }

    #[test]
    fn isomorphism_onto_four_rays_kernel() {
        let k = kernel_lattice(&IntMatrix::from_rows(&[[1, 1, 1, 1]]));
        let images = IntMatrix::from_i64_columns(4, &[[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]);
        let x = solve_integral(&k, &images).unwrap();
        let three = GroupPresentation::free(3);
        assert!(is_isomorphism(&x, &three, &three, RingTag::Z).unwrap());
    }

    #[test]
    fn isomorphism_with_torsion() {
        let z2 = GroupPresentation { free_rank: 0, invariant_factors: vec![z(2)] };
        assert!(is_isomorphism(&IntMatrix::from_rows(&[[1]]), &z2, &z2, RingTag::Z).unwrap());
        assert!(is_isomorphism(&IntMatrix::from_rows(&[[3]]), &z2, &z2, RingTag::Z).unwrap());
        assert!(!is_isomorphism(&IntMatrix::from_rows(&[[2]]), &z2, &z2, RingTag::Z).unwrap());
        let z6 = GroupPresentation { free_rank: 0, invariant_factors: vec![z(6)] };
        assert!(is_isomorphism(&IntMatrix::from_rows(&[[5]]), &z6, &z6, RingTag::Z).unwrap());
        assert!(!is_isomorphism(&IntMatrix::from_rows(&[[3]]), &z6, &z6, RingTag::Z).unwrap());
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z".parse::<RingTag>().unwrap(), RingTag::Z);
        assert_eq!("Fp:3".parse::<RingTag>().unwrap(), RingTag::Fp(3));
        assert!(matches!("Fp:4".parse::<RingTag>(), Err(Error::ModulusNotPrime(4))));
        assert!("R".parse::<RingTag>().is_err());
        assert_eq!(RingTag::Fp(7).to_string(), "Fp:7");
    }

    /// Inverse by rational Gauss-Jordan elimination, independent of the
    /// determinant and normal-form code paths.
    fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
        let n = m.rows();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = m.row(i).iter().map(to_rational).collect();
                row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            a[c].iter_mut().for_each(|x| *x *= &inv);
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    let pivot = a[c].clone();
                    a[r].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= &f * y);
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// All elements of `Z/e_1 + ... + Z/e_k`.
    fn elements(factors: &[i64]) -> Vec<Vec<i64>> {
        factors.iter().fold(vec![Vec::new()], |acc, &e| {
            acc.into_iter().flat_map(|v| (0..e).map(move |x| [v.clone(), vec![x]].concat())).collect()
        })
    }

    fn apply_mod(m: &IntMatrix, x: &[i64], factors: &[i64]) -> Vec<i64> {
        let big: Vec<BigInt> = x.iter().map(|&v| z(v)).collect();
        m.mul_vec(&big).iter().zip(factors).map(|(y, &e)| y.mod_floor(&z(e)).try_into().unwrap()).collect()
    }

    const FACTOR_LISTS: [&[i64]; 7] = [&[2], &[3], &[4], &[6], &[2, 2], &[2, 4], &[3, 3]];

    proptest::proptest! {
        #[test]
        fn isomorphism_of_free_modules_matches_oracle(
            n in 1usize..=3,
            entries in proptest::collection::vec(-3i64..=3, 9),
            ring_idx in 0usize..4,
        ) {
            let ring = [RingTag::Z, RingTag::Q, RingTag::Fp(2), RingTag::Fp(3)][ring_idx];
            let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            let free = GroupPresentation::free(n);
            let expected = match ring {
                RingTag::Z => rational_inverse(&m).is_some_and(|inv| inv.iter().flatten().all(|x| x.is_integer())),
                RingTag::Q => rational_inverse(&m).is_some(),
                RingTag::Fp(p) => {
                    let all = elements(&vec![p as i64; n]);
                    let images: std::collections::HashSet<Vec<i64>> =
                        all.iter().map(|x| apply_mod(&m, x, &vec![p as i64; n])).collect();
                    images.len() == all.len()
                }
            };
            proptest::prop_assert_eq!(is_isomorphism(&m, &free, &free, ring).unwrap(), expected);
        }

        #[test]
        fn isomorphism_of_finite_groups_matches_oracle(
            idx in 0usize..FACTOR_LISTS.len(),
            raw in proptest::collection::vec(0i64..12, 4),
        ) {
            let factors = FACTOR_LISTS[idx];
            let k = factors.len();
            // Scale entries so that every column respects the order of its generator.
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| raw[i * k + j] * (factors[i] / factors[i].gcd(&factors[j]))).collect())
                .collect();
            let m = IntMatrix::from_rows(&rows);
            let g = GroupPresentation { free_rank: 0, invariant_factors: factors.iter().map(|&e| z(e)).collect() };
            let all = elements(factors);
            let images: std::collections::HashSet<Vec<i64>> = all.iter().map(|x| apply_mod(&m, x, factors)).collect();
            proptest::prop_assert_eq!(is_isomorphism(&m, &g, &g, RingTag::Z).unwrap(), images.len() == all.len());
        }
    }
}
