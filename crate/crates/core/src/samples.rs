//! Small fans shared by unit tests.

use num_rational::BigRational;

use crate::complex::bm_chain_complex;
use crate::fan::{Fan, WeightedFan};
use crate::linalg::{kernel_lattice, RingTag};

pub fn cross() -> Fan {
    Fan::from_i64(2, &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], &[vec![0], vec![1], vec![2], vec![3]])
        .unwrap()
}

pub fn four_rays() -> Fan {
    Fan::from_i64(
        3,
        &[vec![1, 0, 2], vec![-1, 0, 0], vec![0, -1, 0], vec![0, 1, -2]],
        &[vec![0], vec![1], vec![2], vec![3]],
    )
    .unwrap()
}

pub fn u34_rays() -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    // Rays p_F for proper flats of U_{3,4} with e_3 = -(1,1,1).
    let singles = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]];
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut rays: Vec<Vec<i64>> = singles.to_vec();
    let mut cones = Vec::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        rays.push((0..3).map(|i| singles[a][i] + singles[b][i]).collect());
        cones.push(vec![a, 4 + k]);
        cones.push(vec![b, 4 + k]);
    }
    (rays, cones)
}

pub fn u34() -> Fan {
    let (rays, cones) = u34_rays();
    Fan::from_i64(3, &rays, &cones).unwrap()
}

/// Cones {e_i, f_j}, i != j, in Z^4.
pub fn signed_cube_fan() -> Fan {
    let mut rays = vec![vec![0, 1, 1, 1], vec![1, 0, -1, 1], vec![1, 1, 0, -1], vec![1, -1, 1, 0]];
    for i in 0..4 {
        let mut e = vec![0; 4];
        e[i] = 1;
        rays.push(e);
    }
    let cones: Vec<Vec<usize>> =
        (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| vec![4 + i, j])).collect();
    Fan::from_i64(4, &rays, &cones).unwrap()
}

/// Weights spanning the top Borel-Moore cycles of `fan` (which must be one-dimensional).
pub fn balancing_weights(fan: &Fan) -> Vec<BigRational> {
    let c = bm_chain_complex(fan, fan.dim(), RingTag::Z).unwrap();
    let k = kernel_lattice(&c.outgoing(fan.dim()));
    assert_eq!(k.cols(), 1);
    let by_face: Vec<_> = k.column(0);
    fan.input_maximal_order()
        .iter()
        .map(|&f| {
            let pos = fan.maximal_faces().iter().position(|&g| g == f).unwrap();
            BigRational::from_integer(by_face[pos].clone())
        })
        .collect()
}

pub fn signed_cube(ring: RingTag) -> WeightedFan {
    let fan = signed_cube_fan();
    let w = balancing_weights(&fan);
    WeightedFan::new(fan, ring, w).unwrap()
}

pub fn stars_only(ring: RingTag) -> WeightedFan {
    // e1, e2, -e1, -e2, a, b, c, d
    let rays = vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![-1, 0, 0],
        vec![0, -1, 0],
        vec![-1, 1, 1],
        vec![-1, 1, -1],
        vec![1, -1, 1],
        vec![1, -1, -1],
    ];
    let cones = vec![
        vec![0, 1],
        vec![0, 6],
        vec![0, 7],
        vec![1, 4],
        vec![1, 5],
        vec![3, 6],
        vec![6, 4],
        vec![3, 7],
        vec![7, 5],
        vec![2, 4],
        vec![2, 5],
        vec![2, 3],
    ];
    let w: Vec<i64> = vec![2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2];
    let fan = Fan::from_i64(3, &rays, &cones).unwrap();
    WeightedFan::new(fan, ring, w.into_iter().map(|x| BigRational::from_integer(x.into())).collect()).unwrap()
}
