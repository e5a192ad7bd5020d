//! Fixture loading and random fan generators shared by the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tropfan::fan::{Fan, WeightedFan};
use tropfan::io::{read_fan, read_matroid};
use tropfan::linalg::RingTag;
use tropfan::matroid::{bergman_fan, Matroid};

pub const RINGS: [RingTag; 4] = [RingTag::Z, RingTag::Q, RingTag::Fp(2), RingTag::Fp(3)];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

pub fn load(name: &str) -> WeightedFan {
    read_fan(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_matroid(name: &str) -> Matroid {
    read_matroid(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fan fixture, by file name.
pub fn fan_fixtures() -> Vec<(String, WeightedFan)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .map(|e| e.expect("directory entry").file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json") && !n.ends_with("_matroid.json"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

/// The fixture read in `ring`, or `None` when a weight vanishes there.
pub fn in_ring(wf: &WeightedFan, ring: RingTag) -> Option<WeightedFan> {
    wf.with_ring(ring).ok()
}

pub fn weighted(fan: Fan, ring: RingTag, weights: &[i64]) -> Option<WeightedFan> {
    let w = weights.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    WeightedFan::new(fan, ring, w).ok()
}

fn primitive(v: &[i64]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    (g != 0).then(|| v.iter().map(|x| x / g).collect())
}

/// A balanced one-dimensional fan: `rays` primitive and distinct, integer
/// weights from `{±1, ±2, ±3}` with `Σ w_i r_i = 0`.
#[derive(Clone, Debug)]
pub struct Dim1Sample {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
}

impl Dim1Sample {
    pub fn fan(&self) -> Fan {
        let cones: Vec<Vec<usize>> = (0..self.rays.len()).map(|i| vec![i]).collect();
        Fan::from_i64(self.ambient_rank, &self.rays, &cones).expect("valid one-dimensional fan")
    }
}

const WEIGHTS: [i64; 6] = [1, -1, 2, -2, 3, -3];

/// Rejection sampler: all but the last ray are random, the last one closes
/// the balancing condition when its content is a usable weight.
pub fn random_dim1(rng: &mut ChaCha8Rng) -> Dim1Sample {
    loop {
        // Rank one has only two primitive rays, too few for three cones.
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(3..=8);
        let mut rays: Vec<Vec<i64>> = Vec::new();
        let mut weights = Vec::new();
        while rays.len() < k - 1 {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let Some(r) = primitive(&v) else { continue };
            if rays.contains(&r) {
                continue;
            }
            rays.push(r);
            weights.push(*WEIGHTS.choose(rng).expect("nonempty"));
        }
        let mut s = vec![0i64; n];
        for (r, w) in rays.iter().zip(&weights) {
            s.iter_mut().zip(r).for_each(|(a, b)| *a -= w * b);
        }
        let g = s.iter().fold(0i64, |acc, x| acc.gcd(x));
        if g == 0 || g > 3 {
            continue;
        }
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let last: Vec<i64> = s.iter().map(|x| sign * x / g).collect();
        if rays.contains(&last) {
            continue;
        }
        rays.push(last);
        weights.push(sign * g);
        return Dim1Sample { ambient_rank: n, rays, weights };
    }
}

/// Column matroid of three-dimensional integer vectors, when it has rank 3.
fn column_matroid(cols: &[Vec<i64>]) -> Option<Matroid> {
    let n = cols.len();
    let det3 = |a: &[i64], b: &[i64], c: &[i64]| {
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    };
    let mut bases = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if det3(&cols[i], &cols[j], &cols[k]) != 0 {
                    bases.push(vec![i, j, k]);
                }
            }
        }
    }
    if bases.is_empty() {
        return None;
    }
    Matroid::new(n, &bases).ok()
}

/// Maximal cones of a fan as ray lists, in `maximal_faces()` order.
pub fn maximal_cones(fan: &Fan) -> Vec<Vec<usize>> {
    fan.maximal_faces().iter().map(|&a| fan.face(a).rays.clone()).collect()
}

pub fn rays_i64(fan: &Fan) -> Vec<Vec<i64>> {
    fan.rays().iter().map(|r| r.iter().map(|x| x.to_i64().expect("small ray")).collect()).collect()
}

/// Replaces the two-dimensional cone `cones[c]` by the two halves cut out by
/// the sum of its rays.
fn stellar_subdivide(rays: &mut Vec<Vec<i64>>, cones: &mut Vec<Vec<usize>>, c: usize) -> bool {
    let (a, b) = (cones[c][0], cones[c][1]);
    let Some(mid) = primitive(&rays[a].iter().zip(&rays[b]).map(|(x, y)| x + y).collect::<Vec<_>>()) else {
        return false;
    };
    if rays.contains(&mid) {
        return false;
    }
    rays.push(mid);
    let m = rays.len() - 1;
    cones[c] = vec![a, m];
    cones.push(vec![b, m]);
    true
}

/// A two-dimensional balanced fan with unit weights times a global scalar.
#[derive(Clone, Debug)]
pub struct Dim2Sample {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
    pub scale: i64,
    pub subdivisions: usize,
}

impl Dim2Sample {
    pub fn fan(&self) -> Fan {
        Fan::from_i64(self.ambient_rank, &self.rays, &self.cones).expect("valid two-dimensional fan")
    }

    pub fn weighted(&self, ring: RingTag) -> Option<WeightedFan> {
        weighted(self.fan(), ring, &vec![self.scale; self.cones.len()])
    }
}

/// Bergman fan of a random realizable loopless rank-3 matroid on 3 to 5
/// elements, with up to two stellar subdivisions and a scaled weight.
pub fn random_dim2(rng: &mut ChaCha8Rng) -> Dim2Sample {
    loop {
        let n = rng.gen_range(3..=5);
        let cols: Vec<Vec<i64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if cols.iter().any(|c| c.iter().all(Zero::is_zero)) {
            continue;
        }
        let Some(m) = column_matroid(&cols) else { continue };
        let Ok(fan) = bergman_fan(&m) else { continue };
        let mut rays = rays_i64(&fan);
        let mut cones = maximal_cones(&fan);
        let mut subdivisions = 0;
        for _ in 0..rng.gen_range(0..=2) {
            let c = rng.gen_range(0..cones.len());
            if stellar_subdivide(&mut rays, &mut cones, c) {
                subdivisions += 1;
            }
        }
        let scale = *[1, -1, 2, 3].choose(rng).expect("nonempty");
        return Dim2Sample { ambient_rank: fan.ambient_rank(), rays, cones, scale, subdivisions };
    }
}

pub fn abs_is_one(x: &BigInt) -> bool {
    x.abs() == BigInt::from(1)
}
