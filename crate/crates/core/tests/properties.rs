use std::collections::BTreeSet;

use bbloc_core::complexes::Face;
use bbloc_core::lattice::{barycentric, det, lex_first_basis, rank, Rat, Weight};
use bbloc_core::localization::enumerate_schemata;
use bbloc_core::measures::{density_at, dh_from_model, is_generic, total_mass};
use bbloc_core::models::{Model, SrModel, ToricModel};
use bbloc_core::{factorial, subsets_of_size};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn w(c: &[i64]) -> Weight {
    Weight::from_ints(c)
}

fn q(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, n), n)
}

fn rows(m: &[Vec<i64>]) -> Vec<Weight> {
    m.iter().map(|r| w(r)).collect()
}

/// Smallest basis in the lexicographic order on sorted index lists, by exhaustion.
fn brute_lex_basis(vs: &[Weight], dim: usize) -> Option<Vec<usize>> {
    subsets_of_size(vs.len(), dim).into_iter().find(|s| {
        let sub: Vec<Weight> = s.iter().map(|&i| vs[i].clone()).collect();
        !det(&sub).unwrap().is_zero()
    })
}

/// Greedy choice of the first vectors independent of those before, by rank alone.
fn greedy_basis(vs: &[Weight], alive: &[usize]) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for &i in alive {
        let mut trial: Vec<Weight> = keep.iter().map(|&k| vs[k].clone()).collect();
        trial.push(vs[i].clone());
        if rank(&trial) == trial.len() {
            keep.push(i);
        }
    }
    keep
}

fn spans(vs: &[Weight], idx: &[usize]) -> bool {
    let sub: Vec<Weight> = idx.iter().map(|&i| vs[i].clone()).collect();
    vs.first().is_some_and(|v| rank(&sub) == v.dim())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let rest: Vec<usize> = items
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &y)| y)
            .collect();
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All injections onto the complement of `keep` satisfying both schema conditions.
fn brute_schemata(vs: &[Weight], keep: &[usize]) -> BTreeSet<Vec<usize>> {
    let target: Vec<usize> = (0..vs.len()).filter(|i| !keep.contains(i)).collect();
    permutations(&target)
        .into_iter()
        .filter(|sigma| {
            let mut alive: Vec<usize> = (0..vs.len()).collect();
            for &s in sigma {
                if !spans(vs, &alive) || !greedy_basis(vs, &alive).contains(&s) {
                    return false;
                }
                alive.retain(|&a| a != s);
            }
            spans(vs, &alive)
        })
        .collect()
}

/// Vertices of the convex hull of planar lattice points, by the monotone chain.
fn hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn twice_area(h: &[(i64, i64)]) -> i64 {
    let n = h.len();
    (0..n)
        .map(|i| {
            let (a, b) = (h[i], h[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs()
}

fn strictly_inside(h: &[(i64, i64)], p: &Weight) -> bool {
    // counterclockwise hull: inside iff strictly left of every edge
    let n = h.len();
    (0..n).all(|i| {
        let (a, b) = (h[i], h[(i + 1) % n]);
        let ex = Rat::from_integer((b.0 - a.0).into());
        let ey = Rat::from_integer((b.1 - a.1).into());
        let px = &p[0] - Rat::from_integer(a.0.into());
        let py = &p[1] - Rat::from_integer(a.1.into());
        ex * py - ey * px > Rat::zero()
    })
}

fn random_complex() -> impl Strategy<Value = (usize, Vec<Vec<usize>>, Vec<i64>)> {
    (2usize..=12).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(prop::collection::btree_set(0..n, 1..=4.min(n)), 1..8),
            Just((0..n as i64).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(|(n, facets, order)| (n, facets.into_iter().map(|f| f.into_iter().collect()).collect(), order))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_alternating_and_multilinear(m in matrix(3), extra in prop::collection::vec(-5i64..=5, 3), c in -4i64..=4) {
        let a = rows(&m);
        let d = det(&a).unwrap();
        let mut scaled = a.clone();
        scaled[1] = scaled[1].scale(&Rat::from_integer(c.into()));
        prop_assert_eq!(det(&scaled).unwrap(), &d * Rat::from_integer(c.into()));
        let mut summed = a.clone();
        summed[0] = &summed[0] + &w(&extra);
        let mut other = a.clone();
        other[0] = w(&extra);
        prop_assert_eq!(det(&summed).unwrap(), &d + det(&other).unwrap());
        let mut swapped = a.clone();
        swapped.swap(0, 2);
        prop_assert_eq!(det(&swapped).unwrap(), -d);
    }

    #[test]
    fn lex_first_basis_is_lexicographically_least(vs in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=8)) {
        let vs = rows(&vs);
        match (lex_first_basis(&vs), brute_lex_basis(&vs, 3)) {
            (Ok(b), Some(expected)) => prop_assert_eq!(b, expected),
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "lex basis {:?} vs brute force {:?}", got, want),
        }
    }

    #[test]
    fn barycentric_coordinates_round_trip(m in matrix(2), origin in prop::collection::vec(-5i64..=5, 2), t in prop::collection::vec(1i64..=20, 3)) {
        let mut verts = vec![w(&origin)];
        verts.extend(rows(&m).iter().map(|r| &w(&origin) + r));
        let edges: Vec<Weight> = verts[1..].iter().map(|v| v - &verts[0]).collect();
        prop_assume!(!det(&edges).unwrap().is_zero());
        let total: i64 = t.iter().sum();
        let coords: Vec<Rat> = t.iter().map(|&x| q(x, total)).collect();
        let p = verts.iter().zip(&coords).fold(Weight::zero(2), |acc, (v, c)| &acc + &v.scale(c));
        prop_assert_eq!(barycentric(&p, &verts).unwrap(), coords);
    }

    #[test]
    fn stanley_reisner_closure_complex_is_delta((n, facets, order) in random_complex()) {
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let phi_s: Vec<Rat> = order.iter().map(|&x| Rat::from_integer(x.into())).collect();
        let m = SrModel::new(labels, facets, Some(phi_s), None).unwrap();
        prop_assert_eq!(m.closure_complex().faces(), m.delta().faces());
    }

    #[test]
    fn schemata_match_brute_force(
        pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..=6),
        keep_mask in 0u32..64,
    ) {
        let vs: Vec<Weight> = pts.iter().map(|p| w(p).with_leading(Rat::one())).collect();
        let keep: Vec<usize> = (0..vs.len()).filter(|i| keep_mask >> i & 1 == 1).collect();
        let got: BTreeSet<Vec<usize>> = enumerate_schemata(&vs, &keep).into_iter().map(|s| s.sigma().to_vec()).collect();
        prop_assert_eq!(got, brute_schemata(&vs, &keep));
    }

    #[test]
    fn pulling_triangulation_tiles_lattice_polygons(
        pts in prop::collection::vec((0i64..=4, 0i64..=4), 3..=9),
        samples in prop::collection::vec((1i64..=96, 1i64..=96), 8),
    ) {
        let h = hull(pts);
        prop_assume!(h.len() >= 3);
        let labels: Vec<String> = (0..h.len()).map(|i| format!("p{i}")).collect();
        let verts: Vec<Weight> = h.iter().map(|&(x, y)| w(&[x, y])).collect();
        let t = ToricModel::new(labels, verts.clone(), w(&[1, 7])).unwrap();
        let model = Model::Toric(t.clone());
        let area2 = twice_area(&h) as u64;
        prop_assert_eq!(t.normalized_volume().unwrap(), area2);
        let measure = dh_from_model(&model).unwrap();
        prop_assert_eq!(total_mass(&measure) * Rat::from_integer(factorial(2)), Rat::from_integer(area2.into()));
        for (sx, sy) in samples {
            let p = Weight::new(vec![q(4 * sx, 97), q(4 * sy, 97)]);
            if !is_generic(&measure.vertex_set(), &p) {
                continue;
            }
            // exactly one simplex of the triangulation contains a generic point of P
            let covering = t.pulling_triangulation().iter().filter(|tri: &&Face| {
                let vs: Vec<Weight> = tri.iter().map(|&i| t.vertices()[i].clone()).collect();
                barycentric(&p, &vs).is_some()
            }).count();
            let inside = strictly_inside(&h, &p);
            prop_assert_eq!(covering, usize::from(inside));
            let expected = if inside { Rat::one() } else { Rat::zero() };
            prop_assert_eq!(density_at(&measure, &p).unwrap(), expected);
        }
    }
}
