//! Deterministic generic sample points and directions.

use bbloc_core::complexes::FixedPoint;
use bbloc_core::lattice::{Rat, Weight};
use bbloc_core::measures::{avoids_small_hulls, is_generic};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

/// Coordinate-wise bounding box of a nonempty point set.
pub fn bounding_box(points: &[Weight]) -> (Weight, Weight) {
    let d = points[0].dim();
    let lo = (0..d)
        .map(|i| points.iter().map(|p| p[i].clone()).min().unwrap())
        .collect();
    let hi = (0..d)
        .map(|i| points.iter().map(|p| p[i].clone()).max().unwrap())
        .collect();
    (Weight::new(lo), Weight::new(hi))
}

/// A random rational point in the box enlarged by `margin` on every side, with denominator
/// `den`.
pub fn random_point<R: Rng>(rng: &mut R, lo: &Weight, hi: &Weight, margin: &Rat, den: i64) -> Weight {
    let coords = (0..lo.dim())
        .map(|i| {
            let a = &lo[i] - margin;
            let b = &hi[i] + margin;
            let t = Rat::new(BigInt::from(rng.gen_range(1..den)), BigInt::from(den));
            &a + (&b - &a) * t
        })
        .collect();
    Weight::new(coords)
}

/// `count` points avoiding every affine hull of at most `d` of the given vertices, drawn from
/// the bounding box enlarged by `margin`.
pub fn generic_points<R: Rng>(rng: &mut R, vertices: &[Weight], count: usize, margin: &Rat) -> Vec<Weight> {
    if vertices.is_empty() || vertices[0].dim() == 0 {
        return Vec::new();
    }
    let (lo, hi) = bounding_box(vertices);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 100 * count + 100 {
        tries += 1;
        let p = random_point(rng, &lo, &hi, margin, 997);
        if is_generic(vertices, &p) && avoids_small_hulls(vertices, &p) {
            out.push(p);
        }
    }
    out
}

/// The first of `(1, k, k^2, ...)`, `k = 2, 3, ...`, pairing nonzero with every tangent weight.
pub fn generic_direction(points: &[FixedPoint]) -> Option<Weight> {
    let d = points.first()?.phi_t.dim();
    let weights: Vec<&Weight> = points.iter().flat_map(|p| p.tangent_weights.iter().flatten()).collect();
    (2..1000i64).find_map(|k| {
        let v = Weight::new(
            (0..d)
                .map(|i| Rat::from_integer(BigInt::from(k).pow(i as u32)))
                .collect(),
        );
        weights.iter().all(|w| !v.dot(w).is_zero()).then_some(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generic_points_are_reproducible_and_generic() {
        let vs = vec![Weight::from_ints(&[0, 0]), Weight::from_ints(&[1, 0]), Weight::from_ints(&[0, 1])];
        let a = generic_points(&mut ChaCha8Rng::seed_from_u64(3), &vs, 10, &Rat::from_integer(1.into()));
        let b = generic_points(&mut ChaCha8Rng::seed_from_u64(3), &vs, 10, &Rat::from_integer(1.into()));
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| is_generic(&vs, p)));
    }

    #[test]
    fn direction_avoids_every_tangent_weight() {
        let point = |ws: &[[i64; 2]]| FixedPoint {
            id: "f".into(),
            phi_t: Weight::from_ints(&[0, 0]),
            phi_s: Rat::zero(),
            tangent_weights: Some(ws.iter().map(|w| Weight::from_ints(w)).collect()),
        };
        // (1, 2) pairs to zero with (2, -1), so the next candidate is taken
        let dir = generic_direction(&[point(&[[2, -1], [1, 0]])]).unwrap();
        assert_eq!(dir, Weight::from_ints(&[1, 3]));
    }
}
