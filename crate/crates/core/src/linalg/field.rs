//! Gaussian elimination over Q and over prime fields.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::IntMatrix;

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn image_of(&self, x: &BigInt) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn image_of(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// The field Z/p for a prime `p` below 2^32.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 32)).contains(&p), "prime out of supported range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn image_of(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

pub type FMatrix<E> = Vec<Vec<E>>;

pub fn to_field<F: Field>(f: &F, m: &IntMatrix) -> FMatrix<F::Elem> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| f.image_of(m.get(i, j))).collect()).collect()
}

/// Reduced row echelon form in place, with pivots searched among the first
/// `cols` columns only (the rest ride along). Returns the pivot columns.
pub fn rref<F: Field>(f: &F, a: &mut FMatrix<F::Elem>, cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else { continue };
        a.swap(r, p);
        let inv = f.inv(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..a[r].len() {
                if f.is_zero(&a[r][j]) {
                    continue;
                }
                let t = f.mul(&factor, &a[r][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &IntMatrix) -> usize {
    let mut a = to_field(f, m);
    rref(f, &mut a, m.cols()).len()
}

/// Basis of the right kernel, one vector per free column.
pub fn kernel<F: Field>(f: &F, m: &IntMatrix) -> Vec<Vec<F::Elem>> {
    let n = m.cols();
    let mut a = to_field(f, m);
    let pivots = rref(f, &mut a, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

/// Some solution `X` of `A X = B`, or `None` if the system is inconsistent.
/// Free variables are set to zero, so the solution is unique when `A` has
/// full column rank.
pub fn solve<F: Field>(f: &F, a: &IntMatrix, b: &IntMatrix) -> Option<FMatrix<F::Elem>> {
    assert_eq!(a.rows(), b.rows(), "solve row mismatch");
    let n = a.cols();
    let k = b.cols();
    let mut aug = to_field(f, &a.hstack(b));
    let pivots = rref(f, &mut aug, n);
    let rank = pivots.len();
    if aug[rank..].iter().any(|row| row[n..].iter().any(|x| !f.is_zero(x))) {
        return None;
    }
    let mut x = vec![vec![f.zero(); k]; n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][n..].to_vec();
    }
    Some(x)
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Converts a rational matrix to integers, or `None` if some entry is not integral.
pub fn rationals_to_int(x: &FMatrix<BigRational>, rows: usize, cols: usize) -> Option<IntMatrix> {
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, row) in x.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_integer() {
                return None;
            }
            m.set(i, j, e.to_integer());
        }
    }
    Some(m)
}

pub fn residues_to_int(x: &FMatrix<u64>, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for (i, row) in x.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            m.set(i, j, BigInt::from(e));
        }
    }
    m
}
