//! The hive model: a side-`n` triangular lattice whose boundary carries the
//! partial sums of `λ`, `μ`, `ν`, and whose interior values are constrained by
//! one rhombus inequality per unit rhombus.
//!
//! Node `(i, j)` sits at `i·e₁ + j·e₂` with `e₁` horizontal and `e₂` at 60°,
//! so the bottom-left corner is `(0, 0)`, the bottom-right corner `(n, 0)` and
//! the apex `(0, n)`. Interior columns are ordered lexicographically by
//! `(j, i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{Partition, PartitionTriple};
use crate::ratio::{self, Rational};

pub type Node = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Boundary,
    Interior(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularLattice {
    n: usize,
    interior: Vec<Node>,
    // column index for interior nodes, flattened over (i, j) with i + j <= n
    lookup: Vec<Vec<NodeKind>>,
}

impl TriangularLattice {
    pub fn new(n: usize) -> Self {
        let mut interior = Vec::new();
        for j in 1..n {
            for i in 1..n - j {
                interior.push((i, j));
            }
        }
        let mut lookup = vec![Vec::new(); n + 1];
        for (i, row) in lookup.iter_mut().enumerate() {
            *row = vec![NodeKind::Boundary; n + 1 - i];
        }
        for (col, &(i, j)) in interior.iter().enumerate() {
            lookup[i][j] = NodeKind::Interior(col);
        }
        TriangularLattice { n, interior, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of interior nodes, `(n−1)(n−2)/2`.
    pub fn dim(&self) -> usize {
        self.interior.len()
    }

    pub fn interior_nodes(&self) -> &[Node] {
        &self.interior
    }

    pub fn boundary_nodes(&self) -> Vec<Node> {
        self.nodes().filter(|&(i, j)| self.kind(i, j) == NodeKind::Boundary).collect()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.n).flat_map(move |i| (0..=self.n - i).map(move |j| (i, j)))
    }

    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.lookup[i][j]
    }

    pub fn column(&self, node: Node) -> Option<usize> {
        match self.kind(node.0, node.1) {
            NodeKind::Interior(c) => Some(c),
            NodeKind::Boundary => None,
        }
    }

    /// Every unit rhombus, ordered by orientation and then by the anchor
    /// `(i, j)` of its downward triangle, lexicographically.
    pub fn rhombi(&self) -> Vec<Rhombus> {
        let n = self.n;
        let mut out = Vec::with_capacity(3 * n * n.saturating_sub(1) / 2);
        for orientation in [Orientation::Upper, Orientation::Right, Orientation::Left] {
            for i in 0..n.saturating_sub(1) {
                for j in 0..n - 1 - i {
                    out.push(Rhombus::new(orientation, i, j));
                }
            }
        }
        out
    }
}

/// Which edge of the downward triangle `{(i+1,j), (i,j+1), (i+1,j+1)}` the
/// rhombus is glued along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Shared edge `(i+1,j)–(i,j+1)`, paired with the upward triangle below-left.
    Upper,
    /// Shared edge `(i+1,j)–(i+1,j+1)`, paired with the upward triangle to the right.
    Right,
    /// Shared edge `(i,j+1)–(i+1,j+1)`, paired with the upward triangle above.
    Left,
}

/// A unit rhombus with its two obtuse (120°) and two acute (60°) corners.
/// Concavity demands `obtuse₁ + obtuse₂ ≥ acute₁ + acute₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rhombus {
    pub orientation: Orientation,
    pub anchor: Node,
    pub obtuse: [Node; 2],
    pub acute: [Node; 2],
}

impl Rhombus {
    fn new(orientation: Orientation, i: usize, j: usize) -> Self {
        let a = (i + 1, j);
        let b = (i, j + 1);
        let c = (i + 1, j + 1);
        let (obtuse, acute) = match orientation {
            Orientation::Upper => ([a, b], [c, (i, j)]),
            Orientation::Right => ([a, c], [b, (i + 2, j)]),
            Orientation::Left => ([b, c], [a, (i, j + 2)]),
        };
        Rhombus { orientation, anchor: (i, j), obtuse, acute }
    }
}

/// Boundary values of the hive for one triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiveBoundary {
    n: usize,
    values: Vec<Vec<Option<i64>>>,
    pub triple: PartitionTriple,
}

impl HiveBoundary {
    pub fn value(&self, node: Node) -> Option<i64> {
        self.values.get(node.0).and_then(|r| r.get(node.1)).copied().flatten()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Assigns `0, λ₁, …, |λ|` up the left edge, `|λ| + μ₁, …, |λ| + |μ|` from the
/// apex down to the bottom-right corner, and `0, ν₁, …, |ν|` along the bottom.
pub fn boundary_values(t: &PartitionTriple) -> HiveBoundary {
    let n = t.rank();
    let mut values = vec![Vec::new(); n + 1];
    for (i, row) in values.iter_mut().enumerate() {
        *row = vec![None; n + 1 - i];
    }
    let lam = t.lambda.partial_sums();
    let mu = t.mu.partial_sums();
    let nu = t.nu.partial_sums();
    let lam_total = t.lambda.weight();
    for j in 0..=n {
        values[0][j] = Some(lam[j]);
    }
    for k in 0..=n {
        values[k][n - k] = Some(lam_total + mu[k]);
    }
    for i in 0..=n {
        values[i][0] = Some(nu[i]);
    }
    HiveBoundary { n, values, triple: t.clone() }
}

/// `A·x − b ≼ 0`, one row per unit rhombus.
///
/// Row `r` reads `acute₁ + acute₂ − obtuse₁ − obtuse₂ ≤ 0`: interior acute
/// corners get `+1`, interior obtuse corners `−1`, and boundary corners are
/// folded into `b_r = Σ obtuse boundary values − Σ acute boundary values`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhombusSystem {
    pub lattice: TriangularLattice,
    pub rhombi: Vec<Rhombus>,
    pub rows: Vec<Vec<(usize, i8)>>,
    pub b: Vec<i64>,
}

/// Rows of `A` only; they depend on `n` alone.
pub fn constraint_rows(lattice: &TriangularLattice) -> (Vec<Rhombus>, Vec<Vec<(usize, i8)>>) {
    let rhombi = lattice.rhombi();
    let rows = rhombi
        .iter()
        .map(|rh| {
            let mut row = Vec::with_capacity(4);
            for (nodes, sign) in [(&rh.acute, 1i8), (&rh.obtuse, -1i8)] {
                for &node in nodes {
                    if let Some(c) = lattice.column(node) {
                        row.push((c, sign));
                    }
                }
            }
            row.sort_unstable();
            row
        })
        .collect();
    (rhombi, rows)
}

pub fn build_rhombus_system(t: &PartitionTriple) -> RhombusSystem {
    let lattice = TriangularLattice::new(t.rank());
    let boundary = boundary_values(t);
    let (rhombi, rows) = constraint_rows(&lattice);
    let b = rhombi.iter().map(|rh| offset(&lattice, &boundary, rh)).collect();
    RhombusSystem { lattice, rhombi, rows, b }
}

fn offset(lattice: &TriangularLattice, boundary: &HiveBoundary, rh: &Rhombus) -> i64 {
    let mut b = 0;
    for &node in &rh.obtuse {
        if lattice.column(node).is_none() {
            b += boundary.value(node).expect("boundary node");
        }
    }
    for &node in &rh.acute {
        if lattice.column(node).is_none() {
            b -= boundary.value(node).expect("boundary node");
        }
    }
    b
}

impl RhombusSystem {
    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `(row, column, sign)` triples of the sparse matrix.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, s)| (r, c, s)))
    }

    /// `b_r − (A·x)_r` for an integer point; nonnegative entries are satisfied rows.
    pub fn slacks(&self, x: &[i64]) -> Vec<i64> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| b - row.iter().map(|&(c, s)| s as i64 * x[c]).sum::<i64>())
            .collect()
    }

    /// Exact membership in `P` for an integer point.
    pub fn contains_integer(&self, x: &[i64]) -> bool {
        x.len() == self.dim()
            && self.rows.iter().zip(&self.b).all(|(row, &b)| row.iter().map(|&(c, s)| s as i64 * x[c]).sum::<i64>() <= b)
    }

    pub fn rational_slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| {
                let mut v = ratio::int(b);
                for &(c, s) in row {
                    if s > 0 {
                        v -= &x[c];
                    } else {
                        v += &x[c];
                    }
                }
                v
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hive {
    pub interior: Vec<i64>,
    pub boundary: HiveBoundary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiveCheck {
    pub valid: bool,
    pub min_slack: Option<i64>,
    pub violations: Vec<usize>,
    pub slacks: Vec<i64>,
}

pub fn hive_check(h: &Hive) -> Result<HiveCheck> {
    let system = build_rhombus_system(&h.boundary.triple);
    if h.interior.len() != system.dim() {
        return Err(Error::DimensionMismatch { expected: system.dim(), got: h.interior.len() });
    }
    let slacks = system.slacks(&h.interior);
    let violations: Vec<usize> = slacks.iter().enumerate().filter(|(_, &s)| s < 0).map(|(r, _)| r).collect();
    Ok(HiveCheck { valid: violations.is_empty(), min_slack: slacks.iter().copied().min(), violations, slacks })
}

/// On-disk form of a hive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiveJson {
    pub n: usize,
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub nu: Vec<i64>,
    pub interior: Vec<i64>,
}

impl Hive {
    pub fn to_json(&self) -> HiveJson {
        let t = &self.boundary.triple;
        HiveJson {
            n: t.rank(),
            lambda: t.lambda.parts().to_vec(),
            mu: t.mu.parts().to_vec(),
            nu: t.nu.parts().to_vec(),
            interior: self.interior.clone(),
        }
    }

    pub fn from_json(j: &HiveJson) -> Result<Self> {
        let t = PartitionTriple::new(
            Partition::new(j.lambda.clone())?,
            Partition::new(j.mu.clone())?,
            Partition::new(j.nu.clone())?,
        )?;
        if t.rank() != j.n {
            return Err(Error::DimensionMismatch { expected: j.n, got: t.rank() });
        }
        let boundary = boundary_values(&t);
        let d = TriangularLattice::new(j.n).dim();
        if j.interior.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: j.interior.len() });
        }
        Ok(Hive { interior: j.interior.clone(), boundary })
    }
}

/// Depth-first elimination plan: for each column, the rows in which it is the
/// last interior node in column order, split by the sign of its coefficient.
struct SearchPlan {
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl SearchPlan {
    fn new(system: &RhombusSystem) -> Self {
        let d = system.dim();
        let mut upper = vec![Vec::new(); d];
        let mut lower = vec![Vec::new(); d];
        for (r, row) in system.rows.iter().enumerate() {
            if let Some(&(c, s)) = row.iter().max_by_key(|(c, _)| *c) {
                if s > 0 {
                    upper[c].push(r);
                } else {
                    lower[c].push(r);
                }
            }
        }
        SearchPlan { upper, lower }
    }

    /// Integer interval for column `c` given columns `< c` in `x`.
    fn interval(&self, system: &RhombusSystem, x: &[i64], c: usize) -> (i64, i64) {
        let rest = |r: usize| -> i64 {
            system.b[r] - system.rows[r].iter().filter(|&&(k, _)| k != c).map(|&(k, s)| s as i64 * x[k]).sum::<i64>()
        };
        let hi = self.upper[c].iter().map(|&r| rest(r)).min().unwrap_or(i64::MAX);
        // -x_c <= rest  =>  x_c >= -rest
        let lo = self.lower[c].iter().map(|&r| -rest(r)).max().unwrap_or(i64::MIN);
        (lo, hi)
    }
}

struct Search<'a> {
    system: &'a RhombusSystem,
    plan: SearchPlan,
    budget: u64,
    visited: u64,
    x: Vec<i64>,
}

impl<'a> Search<'a> {
    fn new(system: &'a RhombusSystem, budget: u64) -> Self {
        Search { system, plan: SearchPlan::new(system), budget, visited: 0, x: vec![0; system.dim()] }
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn count(&mut self, c: usize) -> Result<u64> {
        self.tick()?;
        let (lo, hi) = self.plan.interval(self.system, &self.x, c);
        if lo > hi {
            return Ok(0);
        }
        if c + 1 == self.x.len() {
            return Ok((hi - lo + 1) as u64);
        }
        let mut total = 0;
        for v in lo..=hi {
            self.x[c] = v;
            total += self.count(c + 1)?;
        }
        Ok(total)
    }

    fn visit(&mut self, c: usize, out: &mut Vec<Vec<i64>>) -> Result<()> {
        self.tick()?;
        if c == self.x.len() {
            out.push(self.x.clone());
            return Ok(());
        }
        let (lo, hi) = self.plan.interval(self.system, &self.x, c);
        for v in lo..=hi {
            self.x[c] = v;
            self.visit(c + 1, out)?;
        }
        Ok(())
    }
}

fn boundary_rows_ok(system: &RhombusSystem) -> bool {
    system.rows.iter().zip(&system.b).all(|(row, &b)| !row.is_empty() || b >= 0)
}

/// Number of integer hives with boundary `t`, i.e. `c_{λμ}^ν`.
///
/// Every search node (partial assignment) counts against `budget`.
pub fn exact_count(t: &PartitionTriple, budget: u64) -> Result<u64> {
    let system = build_rhombus_system(t);
    count_lattice_points(&system, budget)
}

pub fn count_lattice_points(system: &RhombusSystem, budget: u64) -> Result<u64> {
    if !boundary_rows_ok(system) {
        return Ok(0);
    }
    if system.dim() == 0 {
        return Ok(1);
    }
    Search::new(system, budget).count(0)
}

/// All integer points of `P`, in lexicographic column order.
pub fn enumerate_hives(t: &PartitionTriple, budget: u64) -> Result<Vec<Vec<i64>>> {
    let system = build_rhombus_system(t);
    let mut out = Vec::new();
    if !boundary_rows_ok(&system) {
        return Ok(out);
    }
    Search::new(&system, budget).visit(0, &mut out)?;
    Ok(out)
}

/// `f(u, v) = (1/ε)((3n³ + n²)u + 2n³v − (n² − n)(u² + v²))` at each interior
/// node, with `(u, v) = (i, j)`.
pub fn quadratic_hive(n: usize, eps_inverse: &Rational) -> Result<Vec<Rational>> {
    if n < 3 {
        return Err(Error::RankTooSmall { n, min: 3 });
    }
    let nn = n as i64;
    let (n2, n3) = (nn * nn, nn * nn * nn);
    let lattice = TriangularLattice::new(n);
    Ok(lattice
        .interior_nodes()
        .iter()
        .map(|&(i, j)| {
            let (u, v) = (i as i64, j as i64);
            let f = (3 * n3 + n2) * u + 2 * n3 * v - (n2 - nn) * (u * u + v * v);
            ratio::int(f) * eps_inverse
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> PartitionTriple {
        PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1]).unwrap()
    }

    #[test]
    fn lattice_counts() {
        for n in 2..=8 {
            let l = TriangularLattice::new(n);
            assert_eq!(l.dim(), (n - 1) * (n - 2) / 2);
            assert_eq!(l.boundary_nodes().len(), 3 * n);
            assert_eq!(l.rhombi().len(), 3 * n * (n - 1) / 2);
        }
        assert_eq!(TriangularLattice::new(4).interior_nodes(), &[(1, 1), (2, 1), (1, 2)]);
    }

    #[test]
    fn boundary_of_example() {
        let h = boundary_values(&example());
        let expect = [
            ((0, 0), 0),
            ((0, 1), 2),
            ((0, 2), 3),
            ((0, 3), 3),
            ((1, 2), 5),
            ((2, 1), 6),
            ((3, 0), 6),
            ((1, 0), 3),
            ((2, 0), 5),
        ];
        for (node, v) in expect {
            assert_eq!(h.value(node), Some(v), "{node:?}");
        }
        assert_eq!(h.value((1, 1)), None);
    }

    #[test]
    fn zero_boundary() {
        let h = boundary_values(&PartitionTriple::zero(2));
        for node in TriangularLattice::new(2).boundary_nodes() {
            assert_eq!(h.value(node), Some(0));
        }
    }

    #[test]
    fn n3_system_shape_and_interval() {
        let s = build_rhombus_system(&example());
        assert_eq!(s.num_rows(), 9);
        assert_eq!(s.dim(), 1);
        for row in &s.rows {
            assert_eq!(row.len(), 1);
            assert!(row.iter().all(|&(c, v)| c == 0 && (v == 1 || v == -1)));
        }
        let feasible: Vec<i64> = (-20..20).filter(|&h| s.contains_integer(&[h])).collect();
        assert_eq!(feasible, vec![4, 5]);
    }

    #[test]
    fn n2_has_no_columns() {
        let t = PartitionTriple::from_parts(&[1, 0], &[1, 0], &[1, 1]).unwrap();
        let s = build_rhombus_system(&t);
        assert_eq!((s.num_rows(), s.dim()), (3, 0));
        assert!(s.b.iter().all(|&b| b >= 0));
        assert_eq!(exact_count(&t, 10).unwrap(), 1);
    }

    #[test]
    fn counts_for_known_triples() {
        assert_eq!(exact_count(&example(), 1_000).unwrap(), 2);
        let bad = PartitionTriple::from_parts(&[2, 1, 0], &[2, 1, 0], &[6, 0, 0]).unwrap();
        assert_eq!(exact_count(&bad, 1_000).unwrap(), 0);
        for k in 1..=10 {
            assert_eq!(exact_count(&example().scaled(k).unwrap(), 10_000).unwrap(), k as u64 + 1);
        }
    }

    #[test]
    fn budget_is_enforced_and_irrelevant_when_sufficient() {
        let t = PartitionTriple::from_parts(&[4, 2, 1, 0], &[3, 2, 1, 0], &[6, 4, 2, 1]).unwrap();
        let a = exact_count(&t, 1_000_000).unwrap();
        let b = exact_count(&t, 10_000_000).unwrap();
        assert_eq!(a, b);
        assert!(matches!(exact_count(&t, 1), Err(Error::BudgetExceeded { budget: 1 })));
        assert_eq!(enumerate_hives(&t, 1_000_000).unwrap().len() as u64, a);
    }

    #[test]
    fn hive_check_reports_violations() {
        let boundary = boundary_values(&example());
        let ok = hive_check(&Hive { interior: vec![4], boundary: boundary.clone() }).unwrap();
        assert!(ok.valid);
        assert_eq!(ok.min_slack, Some(0));
        let bad = hive_check(&Hive { interior: vec![3], boundary: boundary.clone() }).unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.min_slack, Some(-1));
        // The violated row is h ≥ 4: obtuse (2,0), (1,1) and acute (1,0), (2,1).
        let s = build_rhombus_system(&example());
        for &r in &bad.violations {
            assert_eq!(s.rows[r], vec![(0, -1)]);
        }
        assert!(bad.violations.iter().any(|&r| s.rhombi[r].obtuse.contains(&(2, 0))));
        assert!(matches!(
            hive_check(&Hive { interior: vec![1, 2], boundary }),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
        let zero = Hive { interior: vec![], boundary: boundary_values(&PartitionTriple::zero(2)) };
        assert!(hive_check(&zero).unwrap().valid);
    }

    #[test]
    fn quadratic_hive_values() {
        assert_eq!(quadratic_hive(3, &ratio::int(1)).unwrap(), vec![ratio::int(132)]);
        // f(u, v) = 208u + 128v − 12(u² + v²) at (1,1), (2,1), (1,2).
        let q4 = quadratic_hive(4, &ratio::int(1)).unwrap();
        assert_eq!(q4, vec![ratio::int(312), ratio::int(484), ratio::int(404)]);
        let q4x2 = quadratic_hive(4, &ratio::int(2)).unwrap();
        for (a, b) in q4.iter().zip(&q4x2) {
            assert_eq!(a * ratio::int(2), *b);
        }
        assert!(quadratic_hive(2, &ratio::int(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = Hive { interior: vec![5], boundary: boundary_values(&example()) };
        let text = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(text, r#"{"n":3,"lambda":[2,1,0],"mu":[2,1,0],"nu":[3,2,1],"interior":[5]}"#);
        let back = Hive::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
