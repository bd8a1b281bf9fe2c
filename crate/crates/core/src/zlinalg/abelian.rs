use super::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Finitely generated abelian group in canonical form: invariant factors
/// `d1 | d2 | ...` (each > 1) plus a free rank. Equality of groups is list
/// comparison; the form is always reduced through Smith normal form, never
/// primary decomposition.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self {
            invariant_factors: vec![],
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            invariant_factors: vec![],
            free_rank: rank,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            Self {
                invariant_factors: vec![BigInt::from(n)],
                free_rank: 0,
            }
        }
    }

    /// Canonical form of a direct sum of cyclic groups of the given orders
    /// (0 meaning an infinite cyclic factor). Orders need not form a chain.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let diag = IntMatrix::from_fn(n, n, |r, c| {
            if r == c {
                orders[r].clone()
            } else {
                BigInt::zero()
            }
        });
        let snf = smith_normal_form(&diag);
        Self {
            invariant_factors: snf.invariant_factors.clone(),
            free_rank: n - snf.rank(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Exponent of the torsion part (1 if torsion free).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        orders.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank + other.free_rank));
        Self::from_orders(&orders)
    }

    /// Check that every element is killed by `n`.
    pub fn annihilated_by(&self, n: &BigInt) -> bool {
        self.free_rank == 0
            && self
                .invariant_factors
                .iter()
                .all(|d| (n % d).is_zero() || (-n % d).is_zero())
    }

    /// Torsion part only.
    pub fn torsion(&self) -> Self {
        Self {
            invariant_factors: self.invariant_factors.clone(),
            free_rank: 0,
        }
    }

    /// Render as "Z/d1 x Z/d2 x Z^r", or "0" when trivial.
    pub fn render(&self) -> String {
        if self.is_trivial() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.join(" x ")
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_orders_normalizes() {
        // Z/2 + Z/3 = Z/6
        let g = FiniteAbelianGroup::from_orders(&[BigInt::from(2), BigInt::from(3)]);
        assert_eq!(g, FiniteAbelianGroup::cyclic(6));
        assert_eq!(g.render(), "Z/6");
    }

    #[test]
    fn from_orders_chain() {
        // Z/4 + Z/6 = Z/2 + Z/12
        let g = FiniteAbelianGroup::from_orders(&[BigInt::from(4), BigInt::from(6)]);
        assert_eq!(
            g.invariant_factors,
            vec![BigInt::from(2), BigInt::from(12)]
        );
    }

    #[test]
    fn render_mixed() {
        let g = FiniteAbelianGroup {
            invariant_factors: vec![BigInt::from(2), BigInt::from(4)],
            free_rank: 3,
        };
        assert_eq!(g.render(), "Z/2 x Z/4 x Z^3");
        assert_eq!(FiniteAbelianGroup::trivial().render(), "0");
        assert_eq!(FiniteAbelianGroup::free(1).render(), "Z");
    }
}
