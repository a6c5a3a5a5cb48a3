//! Standard groups used by the bundled scenarios and the test-suite.
//!
//! The Fano-plane groups are derived from 3x3 matrices over F2 acting on the
//! seven nonzero vectors (points) and the seven planes through the origin.
//! A vector `v` is a 3-bit integer in `1..=7`; a matrix is stored as its
//! three columns.

use crate::group::{PermGroup, Subgroup};
use crate::perm::Permutation;

/// 3x3 matrix over F2 as three column vectors.
pub type F2Matrix = [u8; 3];

pub fn f2_apply(m: &F2Matrix, v: u8) -> u8 {
    (0..3)
        .filter(|i| v >> i & 1 == 1)
        .fold(0, |acc, i| acc ^ m[i])
}

pub fn f2_invertible(m: &F2Matrix) -> bool {
    (1..8).all(|v| f2_apply(m, v) != 0)
}

/// Multiplication by `x` on F8 = F2[x]/(x^3 + x + 1), basis `1, x, x^2`.
pub const SINGER: F2Matrix = [0b010, 0b100, 0b011];
/// The transvection `e1 -> e1 + e0`.
pub const TRANSVECTION: F2Matrix = [0b001, 0b011, 0b100];

fn parity(x: u8) -> bool {
    x.count_ones() % 2 == 1
}

/// Points of the plane with normal vector `n` (sorted).
pub fn plane_points(n: u8) -> [u8; 3] {
    let mut pts = [0u8; 3];
    let mut i = 0;
    for v in 1..8u8 {
        if !parity(n & v) {
            pts[i] = v;
            i += 1;
        }
    }
    pts
}

/// Action on the seven points; point `v` has index `v - 1`.
pub fn points_permutation(m: &F2Matrix) -> Permutation {
    let images: Vec<usize> = (1..8u8).map(|v| f2_apply(m, v) as usize - 1).collect();
    Permutation::from_images(&images).expect("invertible matrix")
}

/// Action on points (indices `0..7`) and planes (indices `7..14`, plane with
/// normal `n` at `6 + n`). Plane images are computed from point images.
pub fn points_planes_permutation(m: &F2Matrix) -> Permutation {
    let mut images: Vec<usize> = (1..8u8).map(|v| f2_apply(m, v) as usize - 1).collect();
    for n in 1..8u8 {
        let mut img = plane_points(n).map(|v| f2_apply(m, v));
        img.sort_unstable();
        let target = (1..8u8)
            .find(|&k| plane_points(k) == img)
            .expect("matrix maps planes to planes");
        images.push(6 + target as usize);
    }
    Permutation::from_images(&images).expect("invertible matrix")
}

/// Point `v` <-> plane with normal `v`.
pub fn duality() -> Permutation {
    let images: Vec<usize> = (0..14).map(|i| (i + 7) % 14).collect();
    Permutation::from_images(&images).unwrap()
}

/// GL(3, F2) on the seven Fano points.
pub fn fano_group() -> PermGroup {
    PermGroup::new(
        "GL(3,2) on points",
        7,
        vec![
            points_permutation(&SINGER),
            points_permutation(&TRANSVECTION),
        ],
    )
    .expect("order 168")
}

/// GL(3, F2) on the fourteen points and planes.
pub fn fano_group_points_planes() -> PermGroup {
    PermGroup::new(
        "GL(3,2) on points and planes",
        14,
        fano_generators_points_planes(),
    )
    .expect("order 168")
}

pub fn fano_generators_points_planes() -> Vec<Permutation> {
    vec![
        points_planes_permutation(&SINGER),
        points_planes_permutation(&TRANSVECTION),
    ]
}

/// GL(3, F2) extended by the point-plane duality (order 336).
pub fn fano_group_with_duality() -> PermGroup {
    let mut gens = fano_generators_points_planes();
    gens.push(duality());
    PermGroup::new("GL(3,2) x| duality", 14, gens).expect("order 336")
}

/// Stabilizers of point `e0` (index 0) and of the plane with normal `e0`
/// (index 7).
pub fn fano_point_plane_stabilizers(g: &PermGroup) -> (Subgroup, Subgroup) {
    (
        Subgroup::stabilizer(g, 0).expect("stabilizer"),
        Subgroup::stabilizer(g, 7).expect("stabilizer"),
    )
}

pub fn symmetric_group(n: usize) -> PermGroup {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
    }
    if n >= 3 {
        let cycle: Vec<usize> = (0..n).collect();
        gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
    }
    PermGroup::new(format!("S{n}"), n, gens).unwrap()
}

pub fn cyclic_group(n: usize) -> PermGroup {
    let cycle: Vec<usize> = (0..n).collect();
    let gens = if n > 1 {
        vec![Permutation::from_cycles(n, &[&cycle]).unwrap()]
    } else {
        vec![]
    };
    PermGroup::new(format!("C{n}"), n, gens).unwrap()
}

/// Symmetries of an `n`-gon (order `2n`).
pub fn dihedral_group(n: usize) -> PermGroup {
    let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    PermGroup::new(
        format!("D{n}"),
        n,
        vec![
            Permutation::from_images(&rotation).unwrap(),
            Permutation::from_images(&reflection).unwrap(),
        ],
    )
    .unwrap()
}

/// Quaternion group in its regular representation. Element `±u` with unit
/// `u ∈ {1, i, j, k}` has index `2u + (sign bit)`.
pub fn quaternion_group() -> PermGroup {
    // unit products: (unit, negate)
    const TABLE: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mul = |a: usize, b: usize| {
        let (u, neg) = TABLE[a / 2][b / 2];
        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
        2 * u + sign as usize
    };
    let right = |q: usize| {
        let images: Vec<usize> = (0..8).map(|x| mul(x, q)).collect();
        Permutation::from_images(&images).unwrap()
    };
    PermGroup::new("Q8", 8, vec![right(2), right(4)]).unwrap()
}

/// S3 x S3 acting on `{0,1,2} ⊔ {3,4,5}`.
pub fn s3_times_s3() -> PermGroup {
    let c = |cycles: &[&[usize]]| Permutation::from_cycles(6, cycles).unwrap();
    PermGroup::new(
        "S3xS3",
        6,
        vec![
            c(&[&[0, 1]]),
            c(&[&[0, 1, 2]]),
            c(&[&[3, 4]]),
            c(&[&[3, 4, 5]]),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invertible_f2_matrices_number_168() {
        let count = (0..512u16)
            .filter(|bits| {
                let m = [
                    (bits & 7) as u8,
                    (bits >> 3 & 7) as u8,
                    (bits >> 6 & 7) as u8,
                ];
                f2_invertible(&m)
            })
            .count();
        assert_eq!(count, 168);
        assert!(f2_invertible(&SINGER) && f2_invertible(&TRANSVECTION));
    }

    #[test]
    fn fano_groups_have_expected_orders() {
        assert_eq!(fano_group().order(), 168);
        assert_eq!(fano_group_points_planes().order(), 168);
        assert_eq!(fano_group_with_duality().order(), 336);
    }

    #[test]
    fn small_groups() {
        assert_eq!(dihedral_group(4).order(), 8);
        assert_eq!(quaternion_group().order(), 8);
        assert_eq!(s3_times_s3().order(), 36);
        assert_eq!(symmetric_group(4).order(), 24);
        assert_eq!(cyclic_group(5).order(), 5);
        // Q8 has a unique involution, D4 has five
        let involutions = |g: &PermGroup| g.elements().iter().filter(|p| p.order() == 2).count();
        assert_eq!(involutions(&quaternion_group()), 1);
        assert_eq!(involutions(&dihedral_group(4)), 5);
    }

    #[test]
    fn planes_have_three_points() {
        for n in 1..8 {
            let pts = plane_points(n);
            assert_eq!(pts[0] ^ pts[1], pts[2]);
        }
    }
}
