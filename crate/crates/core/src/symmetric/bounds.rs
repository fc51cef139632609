use num_bigint::BigInt;
use num_rational::BigRational;

use super::SymError;

/// Bounds on the least number of edges of a `k`-uniform hypergraph on
/// which Presenter wins the online panchromatic `r`-coloring game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolBounds {
    /// `(r/(r−1))^(k−1)`
    pub lower: BigRational,
    /// `r³ (k+1) (r/(r−1))^k`
    pub upper: BigRational,
}

pub fn pol_bounds(k: u32, r: u32) -> Result<PolBounds, SymError> {
    if r < 2 {
        return Err(SymError::Invalid(format!("r = {r}, expected r ≥ 2")));
    }
    if k < 1 {
        return Err(SymError::Invalid("k must be at least 1".into()));
    }
    let q = BigRational::new(BigInt::from(r), BigInt::from(r - 1));
    let lower = q.pow((k - 1) as i32);
    let upper = q.pow(k as i32) * BigInt::from(r).pow(3) * BigInt::from(k + 1);
    Ok(PolBounds { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn values() {
        let b = pol_bounds(1, 2).unwrap();
        assert_eq!((b.lower, b.upper), (ratio(1, 1), ratio(32, 1)));
        let b = pol_bounds(3, 2).unwrap();
        assert_eq!((b.lower, b.upper), (ratio(4, 1), ratio(256, 1)));
        let b = pol_bounds(2, 3).unwrap();
        assert_eq!((b.lower, b.upper), (ratio(3, 2), ratio(729, 4)));
    }

    #[test]
    fn invalid() {
        assert!(pol_bounds(3, 1).is_err());
        assert!(pol_bounds(0, 2).is_err());
    }
}
