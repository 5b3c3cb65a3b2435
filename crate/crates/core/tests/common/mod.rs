#![allow(dead_code)]

/// Littlewood-Richardson rule: counts semistandard fillings of `ν/λ` with
/// content `μ` whose reverse reading word is a lattice word. Independent of
/// the hive code.
pub fn lr_tableaux(lambda: &[i64], mu: &[i64], nu: &[i64]) -> u64 {
    let n = nu.len();
    if lambda.iter().zip(nu).any(|(l, v)| l > v) {
        return 0;
    }
    if lambda.iter().sum::<i64>() + mu.iter().sum::<i64>() != nu.iter().sum::<i64>() {
        return 0;
    }
    // cells in reading order: rows top to bottom, each right to left
    let mut cells = Vec::new();
    for r in 0..n {
        for c in (lambda[r]..nu[r]).rev() {
            cells.push((r, c as usize));
        }
    }
    let width = nu.first().copied().unwrap_or(0) as usize;
    let mut grid = vec![vec![0usize; width]; n];
    let mut used = vec![0i64; mu.len() + 1];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        lambda: &[i64],
        mu: &[i64],
        grid: &mut Vec<Vec<usize>>,
        used: &mut Vec<i64>,
    ) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let mut total = 0;
        for v in 1..=mu.len() {
            if used[v] >= mu[v - 1] {
                continue;
            }
            if v > 1 && used[v] + 1 > used[v - 1] {
                continue;
            }
            // rows weakly increase left to right; right neighbour already filled
            if (c + 1) < grid[r].len() && grid[r][c + 1] != 0 && grid[r][c + 1] < v {
                continue;
            }
            // columns strictly increase downward
            if r > 0 && (c as i64) >= lambda[r - 1] && grid[r - 1][c] >= v {
                continue;
            }
            grid[r][c] = v;
            used[v] += 1;
            total += go(k + 1, cells, lambda, mu, grid, used);
            used[v] -= 1;
            grid[r][c] = 0;
        }
        total
    }
    go(0, &cells, lambda, mu, &mut grid, &mut used)
}

pub fn partitions(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fn rec(n: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let cap = cur.last().copied().unwrap_or(max);
        for v in (0..=cap).rev() {
            cur.push(v);
            rec(n, max, cur, out);
            cur.pop();
        }
    }
    rec(n, max, &mut Vec::new(), &mut out);
    out
}

use lrc_core::geometry::center::lp_solve_f64;
use lrc_core::geometry::{HPolytope, RoundingMap, Sense};
use lrc_core::rng;

/// Support values `max ⟨u, T(x − x₀)⟩` of the rounded body over random unit
/// directions `u`.
pub fn rounded_support(body: &HPolytope, map: &RoundingMap, directions: usize, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed, 0);
    (0..directions)
        .map(|_| {
            let u = rng::unit_vector(&mut r, body.dim());
            let c = map.pullback(&u);
            let shift: f64 = c.iter().zip(&map.center).map(|(a, b)| a * b).sum();
            lp_solve_f64(body, &c, Sense::Maximize).unwrap().value - shift
        })
        .collect()
}

pub struct Chord {
    /// Half-length of the unit Dikin ellipsoid chord, from the Cholesky factor.
    pub t: f64,
    /// Signed distances to each constraint hyperplane along the chord.
    pub facets: Vec<f64>,
}

pub fn chords(body: &HPolytope, map: &RoundingMap, count: usize, seed: u64) -> Vec<Chord> {
    let mut r = rng::stream(seed, 1);
    let residuals = body.residuals_f64(&map.center);
    (0..count)
        .map(|_| {
            let u = rng::unit_vector(&mut r, body.dim());
            // |T u| is the ellipsoid norm of u
            let tu = nalgebra::DVector::from_column_slice(&u);
            let t = 1.0 / (&map.transform * tu).norm();
            let facets = (0..body.num_rows())
                .map(|i| residuals[i] / body.row_dot_f64(i, &u))
                .collect();
            Chord { t, facets }
        })
        .collect()
}
