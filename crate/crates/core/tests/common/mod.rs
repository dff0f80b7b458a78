#![allow(dead_code)]

use rand::Rng;
use toric_core::mmp::{blow_up, p1xp1_fan, p2_fan};
use toric_core::{build_surface_fan, Fan, IntMatrix, Lattice};

/// Laplace expansion over i128; fine for the tiny matrices used here.
pub fn det_naive(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * det_naive(&minor);
    }
    total
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in index_subsets(n, k - 1) {
            if rest.first().map_or(true, |&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and `s_k = d_k / d_{k-1}`. Only the nonzero ones.
pub fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in index_subsets(rows, k) {
            for cs in index_subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| a[r][c]).collect())
                    .collect();
                g = gcd(g, det_naive(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

/// True when some nonzero functional is nonnegative on every ray, i.e. the
/// rays sit in a closed half-plane. Candidate functionals are the normals
/// of the rays themselves.
pub fn in_closed_half_plane(rays: &[Vec<i64>]) -> bool {
    rays.iter().any(|v| {
        [[-v[1], v[0]], [v[1], -v[0]]]
            .iter()
            .any(|u| rays.iter().all(|w| u[0] * w[0] + u[1] * w[1] >= 0))
    })
}

/// Smooth complete fan from a minimal surface followed by random toric
/// blow-ups.
pub fn random_smooth_surface<R: Rng>(rng: &mut R, max_rays: usize) -> Fan {
    let mut fan = match rng.gen_range(0..3) {
        0 => p2_fan(),
        1 => p1xp1_fan(),
        _ => {
            let a = rng.gen_range(1..=3);
            build_surface_fan(
                Lattice::Standard(2),
                &[vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            )
            .unwrap()
        }
    };
    let target = rng.gen_range(fan.num_rays()..=max_rays.max(fan.num_rays()));
    while fan.num_rays() < target {
        let k = rng.gen_range(0..fan.cones().len());
        fan = blow_up(&fan, k).unwrap();
    }
    fan
}

/// Product of random elementary matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = IntMatrix::identity(n);
        e.set(i, j, rng.gen_range(-2i64..=2).into());
        if rng.gen_bool(0.3) {
            e.set(i, i, (-1).into());
        }
        m = m.mul(&e);
    }
    m
}

/// All 2x2 integer matrices with entries in `[-bound, bound]` and
/// determinant ±1.
pub fn small_gl2(bound: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    let r = -bound..=bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if (a * d - b * c).abs() == 1 {
                        out.push(IntMatrix::from_i64_rows(&[[a, b], [c, d]]).unwrap());
                    }
                }
            }
        }
    }
    out
}
