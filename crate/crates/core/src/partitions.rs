//! Partitions, balanced triples and the shift vectors that carve out the
//! translated Littlewood-Richardson cone.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::ratio::{self, Rational};

/// A weakly decreasing sequence of nonnegative integers of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Partition(Vec<i64>);

impl Partition {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        for (index, &p) in parts.iter().enumerate() {
            if p < 0 {
                return Err(Error::NegativePart { index, parts });
            }
        }
        for index in 0..parts.len().saturating_sub(1) {
            if parts[index] < parts[index + 1] {
                return Err(Error::NotWeaklyDecreasing { index, parts });
            }
        }
        Ok(Partition(parts))
    }

    pub fn zero(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`, the sum of the parts.
    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Partial sums `0, p₁, p₁+p₂, …, |p|` (length `n + 1`).
    pub fn partial_sums(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &p in &self.0 {
            acc += p;
            out.push(acc);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        Partition::new(self.0.iter().map(|&p| p * k).collect())
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<i64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<i64> {
    fn from(p: Partition) -> Vec<i64> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_partition(s)
    }
}

/// Parses comma-separated integers such as `"3, 2,1"`.
pub fn parse_partition(text: &str) -> Result<Partition> {
    if text.trim().is_empty() {
        return Err(Error::ParseFailure { what: "partition", input: text.to_string() });
    }
    let parts = text
        .split(',')
        .map(|tok| tok.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::ParseFailure { what: "partition", input: text.to_string() })?;
    Partition::new(parts)
}

/// The boundary data `(λ, μ, ν)` of one coefficient `c_{λμ}^ν`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionTriple {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

impl PartitionTriple {
    pub fn new(lambda: Partition, mu: Partition, nu: Partition) -> Result<Self> {
        let lens = vec![lambda.len(), mu.len(), nu.len()];
        if lens[0] != lens[1] || lens[1] != lens[2] {
            return Err(Error::RankMismatch(lens));
        }
        let lhs = lambda.weight() + mu.weight();
        let rhs = nu.weight();
        if lhs != rhs {
            return Err(Error::Unbalanced { lhs, rhs });
        }
        Ok(PartitionTriple { lambda, mu, nu })
    }

    /// Convenience constructor from raw slices.
    pub fn from_parts(lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<Self> {
        PartitionTriple::new(
            Partition::new(lambda.to_vec())?,
            Partition::new(mu.to_vec())?,
            Partition::new(nu.to_vec())?,
        )
    }

    pub fn zero(n: usize) -> Self {
        PartitionTriple { lambda: Partition::zero(n), mu: Partition::zero(n), nu: Partition::zero(n) }
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// `‖(λ, μ, ν)‖₁ = |λ| + |μ| + |ν|`.
    pub fn l1_norm(&self) -> i64 {
        self.lambda.weight() + self.mu.weight() + self.nu.weight()
    }

    pub fn scaled(&self, k: i64) -> Result<Self> {
        PartitionTriple::new(self.lambda.scaled(k)?, self.mu.scaled(k)?, self.nu.scaled(k)?)
    }

    /// Exact `θ·self + (1 − θ)·other`; errors unless the result is integral.
    pub fn combine(&self, other: &PartitionTriple, theta: &Rational) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(vec![self.rank(), other.rank()]));
        }
        let one_minus = Rational::one() - theta;
        let mix = |a: &Partition, b: &Partition| -> Result<Partition> {
            let mut parts = Vec::with_capacity(a.len());
            for (&x, &y) in a.parts().iter().zip(b.parts()) {
                let v = theta * ratio::int(x) + &one_minus * ratio::int(y);
                parts.push(ratio::to_i64(&v).ok_or(Error::NonIntegralMidpoint)?);
            }
            Partition::new(parts)
        };
        PartitionTriple::new(mix(&self.lambda, &other.lambda)?, mix(&self.mu, &other.mu)?, mix(&self.nu, &other.nu)?)
    }
}

impl fmt::Display for PartitionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}), ({}), ({}))", self.lambda, self.mu, self.nu)
    }
}

/// `Δ = 2(n³, n³ − n², …, n²)` and `Δ′ = (3n³ + n², 3n³ − n², …, n³ + 3n²)`,
/// together with the `1/ε` factor of the scaled variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftVectors {
    pub delta: Partition,
    pub delta_prime: Partition,
    pub scale: Rational,
}

impl ShiftVectors {
    pub fn rank(&self) -> usize {
        self.delta.len()
    }

    pub fn scaled_delta(&self) -> Vec<Rational> {
        self.delta.parts().iter().map(|&p| ratio::int(p) * &self.scale).collect()
    }

    pub fn scaled_delta_prime(&self) -> Vec<Rational> {
        self.delta_prime.parts().iter().map(|&p| ratio::int(p) * &self.scale).collect()
    }

    /// `(Δ_ε, Δ_ε, Δ′_ε)` as integer partitions.
    pub fn integral(&self) -> Result<(Partition, Partition)> {
        let n = self.rank() as u64;
        let to_partition = |v: Vec<Rational>| -> Result<Partition> {
            let parts = v
                .iter()
                .map(|r| ratio::to_i64(r))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::NonIntegralScale { scale: ratio::display(&self.scale), n_sq: n * n })?;
            Partition::new(parts)
        };
        Ok((to_partition(self.scaled_delta())?, to_partition(self.scaled_delta_prime())?))
    }

    /// The triple `(Δ_ε, Δ_ε, Δ′_ε)` itself.
    pub fn as_triple(&self) -> Result<PartitionTriple> {
        let (d, dp) = self.integral()?;
        PartitionTriple::new(d.clone(), d, dp)
    }

    /// `‖(Δ_ε, Δ_ε, Δ′_ε)‖₁` as an exact rational.
    pub fn l1_norm(&self) -> Rational {
        let d: Rational = self.scaled_delta().iter().sum();
        let dp: Rational = self.scaled_delta_prime().iter().sum();
        d * ratio::int(2) + dp
    }
}

/// Builds `Δ`, `Δ′` for rank `n` scaled by `eps_inverse`.
///
/// With `require_integral`, `eps_inverse · n²` must be an integer, which makes
/// every scaled entry integral.
pub fn make_shift(n: usize, eps_inverse: &Rational, require_integral: bool) -> Result<ShiftVectors> {
    if n < 2 {
        return Err(Error::RankTooSmall { n, min: 2 });
    }
    if eps_inverse < &Rational::one() {
        return Err(Error::OutOfRange {
            name: "eps_inverse",
            value: ratio::to_f64(eps_inverse),
            range: ">= 1",
        });
    }
    let nn = n as i64;
    let n2 = nn * nn;
    let n3 = n2 * nn;
    if require_integral {
        let scaled = eps_inverse * Rational::from_integer(BigInt::from(n2));
        if !ratio::is_integer(&scaled) {
            return Err(Error::NonIntegralScale { scale: ratio::display(eps_inverse), n_sq: n2 as u64 });
        }
    }
    let delta = (0..nn).map(|k| 2 * (n3 - k * n2)).collect();
    let delta_prime = (0..nn).map(|k| 3 * n3 + n2 - 2 * k * n2).collect();
    Ok(ShiftVectors {
        delta: Partition::new(delta)?,
        delta_prime: Partition::new(delta_prime)?,
        scale: eps_inverse.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    Add,
    Subtract,
}

/// Componentwise `(λ ± Δ_ε, μ ± Δ_ε, ν ± Δ′_ε)`.
///
/// `Ok(None)` reports a subtraction that leaves the partition cone.
pub fn shift_triple(
    t: &PartitionTriple,
    s: &ShiftVectors,
    direction: ShiftDirection,
) -> Result<Option<PartitionTriple>> {
    if t.rank() != s.rank() {
        return Err(Error::RankMismatch(vec![t.rank(), s.rank()]));
    }
    let (d, dp) = s.integral()?;
    let sign = match direction {
        ShiftDirection::Add => 1,
        ShiftDirection::Subtract => -1,
    };
    let apply = |p: &Partition, q: &Partition| -> Vec<i64> {
        p.parts().iter().zip(q.parts()).map(|(&a, &b)| a + sign * b).collect()
    };
    let parts = [apply(&t.lambda, &d), apply(&t.mu, &d), apply(&t.nu, &dp)];
    let mut out = Vec::with_capacity(3);
    for p in parts {
        match Partition::new(p) {
            Ok(p) => out.push(p),
            Err(_) if direction == ShiftDirection::Subtract => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let nu = out.pop().unwrap();
    let mu = out.pop().unwrap();
    let lambda = out.pop().unwrap();
    PartitionTriple::new(lambda, mu, nu).map(Some)
}
