//! Closed-form extremal bounds for cliques under a maximum-degree constraint.
//!
//! For `n = q(d+1) + r` with `0 <= r <= d`, no graph on `n` vertices with
//! maximum degree `d` has more than `q*C(d+1, t) + C(r, t)` cliques of size
//! `t`. The binomial-shifting helpers here are the accounting used by the
//! peeling certificates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::{self, CountError};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
}

fn invalid(msg: impl Into<String>) -> BoundsError {
    BoundsError::InvalidArgument(msg.into())
}

/// The decomposition `n = q(d+1) + r` for a clique size `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: u64,
    pub d: u64,
    pub t: u64,
    pub q: u64,
    pub r: u64,
}

impl BoundParams {
    pub fn new(n: u64, d: u64, t: u64) -> Result<Self, BoundsError> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        if d == 0 {
            return Err(invalid("d must be positive"));
        }
        if t < 3 {
            return Err(invalid(format!("clique size t = {t} must be at least 3")));
        }
        let block = d.checked_add(1).ok_or(BoundsError::Overflow("d + 1"))?;
        Ok(BoundParams { n, d, t, q: n / block, r: n % block })
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `C(k, j)` with the convention `C(k, j) = 0` whenever `k < j` (including
/// negative `k`). Exact; overflow of `u128` is an error.
pub fn binomial(k: i64, j: i64) -> Result<u128, BoundsError> {
    if j < 0 {
        return Err(invalid(format!("binomial lower index {j} is negative")));
    }
    if k < j {
        return Ok(0);
    }
    let (k, j) = (k as u128, j as u128);
    let j = j.min(k - j);
    let mut acc: u128 = 1;
    for i in 0..j {
        // acc * (k - i) is divisible by (i + 1); cancel first to delay overflow.
        let num = k - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (acc_red, den_red) = (acc / g, den / g);
        acc = acc_red
            .checked_mul(num / den_red)
            .ok_or(BoundsError::Overflow("binomial coefficient"))?;
    }
    Ok(acc)
}

fn binomial_u(k: u64, j: u64) -> Result<u128, BoundsError> {
    let k = i64::try_from(k).map_err(|_| BoundsError::Overflow("binomial argument"))?;
    let j = i64::try_from(j).map_err(|_| BoundsError::Overflow("binomial argument"))?;
    binomial(k, j)
}

/// `q*C(d+1, t) + C(r, t)` together with its decomposition.
pub fn gls_bound(n: u64, d: u64, t: u64) -> Result<(BoundParams, u128), BoundsError> {
    let params = BoundParams::new(n, d, t)?;
    let full = binomial_u(params.d + 1, t)?
        .checked_mul(params.q as u128)
        .ok_or(BoundsError::Overflow("q * C(d+1, t)"))?;
    let rest = binomial_u(params.r, t)?;
    let bound = full.checked_add(rest).ok_or(BoundsError::Overflow("bound"))?;
    Ok((params, bound))
}

/// [`gls_bound`] extended by `0` at `n = 0`; the value of the empty graph in
/// peeling accounting.
pub fn gls_value(n: u64, d: u64, t: u64) -> Result<u128, BoundsError> {
    if n == 0 {
        if d == 0 || t < 3 {
            return Err(invalid("d must be positive and t at least 3"));
        }
        return Ok(0);
    }
    gls_bound(n, d, t).map(|(_, b)| b)
}

/// Truth of `C(a,3) + C(b,3) <= C(a+1,3) + C(b-1,3)` for `a >= b >= 1`.
pub fn shift_inequality_check(a: u64, b: u64) -> Result<bool, BoundsError> {
    if b < 1 || a < b {
        return Err(invalid(format!("need a >= b >= 1, got a = {a}, b = {b}")));
    }
    let sum = |x, y| -> Result<u128, BoundsError> {
        binomial_u(x, 3)?.checked_add(binomial_u(y, 3)?).ok_or(BoundsError::Overflow("shift sum"))
    };
    let before = sum(a, b)?;
    let after = sum(a.checked_add(1).ok_or(BoundsError::Overflow("a + 1"))?, b - 1)?;
    Ok(before <= after)
}

/// `C(c,3) + C(a+b-c,3)` for `max(a,b) <= c <= a+b`; never less than
/// `C(a,3) + C(b,3)`.
pub fn merge_bound(a: u64, b: u64, c: u64) -> Result<u128, BoundsError> {
    let total = a.checked_add(b).ok_or(BoundsError::Overflow("a + b"))?;
    if c < a.max(b) || c > total {
        return Err(invalid(format!("need max(a, b) <= c <= a + b, got a = {a}, b = {b}, c = {c}")));
    }
    binomial_u(c, 3)?
        .checked_add(binomial_u(total - c, 3)?)
        .ok_or(BoundsError::Overflow("merge bound"))
}

/// Both sides of `T(G) + T(G^c) = C(n,3) - 1/2 * sum_v d(v)(n-1-d(v))`.
///
/// The left side is counted directly on `g` and its complement; the right
/// side comes from degrees alone.
pub fn complement_identity_check(g: &Graph) -> Result<(u128, u128), CountError> {
    let lhs = counting::count_triangles(g)?
        .checked_add(counting::count_triangles(&g.complement())?)
        .ok_or(CountError::Overflow("triangles in g and its complement"))?;
    let n = g.n() as u128;
    let mut mixed: u128 = 0;
    for &d in g.degrees() {
        let d = d as u128;
        mixed = d
            .checked_mul(n - 1 - d)
            .and_then(|x| mixed.checked_add(x))
            .ok_or(CountError::Overflow("degree product sum"))?;
    }
    debug_assert_eq!(mixed % 2, 0);
    let all = binomial(g.n() as i64, 3).map_err(|_| CountError::Overflow("C(n, 3)"))?;
    let rhs = all.checked_sub(mixed / 2).ok_or(CountError::Overflow("complement identity"))?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 3).unwrap(), 4);
        assert_eq!(binomial(2, 3).unwrap(), 0);
        assert_eq!(binomial(-1, 3).unwrap(), 0);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
        assert!(matches!(binomial(3, -1), Err(BoundsError::InvalidArgument(_))));
        assert!(matches!(binomial(1_000_000, 500_000), Err(BoundsError::Overflow(_))));
    }

    #[test]
    fn binomial_near_u128_limit() {
        // C(130, 65) ~ 9.5e37 fits in u128 even though naive products would not.
        let expected: u128 = 95_067_625_827_960_698_145_584_333_020_095_113_100;
        assert_eq!(binomial(130, 65).unwrap(), expected);
    }

    #[test]
    fn cubic_identity_for_triples() {
        for d in 1..=1_000_000i64 {
            let lhs = binomial(d + 1, 3).unwrap() * 6;
            let d = d as u128;
            assert_eq!(lhs, d * d * d - d);
        }
    }

    #[test]
    fn bound_examples() {
        let (p, b) = gls_bound(4, 3, 3).unwrap();
        assert_eq!((p.q, p.r, b), (1, 0, 4));
        let (p, b) = gls_bound(9, 3, 3).unwrap();
        assert_eq!((p.q, p.r, b), (2, 1, 8));
        let (p, b) = gls_bound(11, 3, 3).unwrap();
        assert_eq!((p.q, p.r, b), (2, 3, 9));
    }

    #[test]
    fn bound_rejects_degenerate_parameters() {
        assert!(gls_bound(0, 3, 3).is_err());
        assert!(gls_bound(5, 0, 3).is_err());
        assert!(gls_bound(5, 3, 2).is_err());
        assert_eq!(gls_value(0, 3, 3).unwrap(), 0);
    }

    #[test]
    fn bound_does_not_wrap_at_scale() {
        let (p, b) = gls_bound(1_000_000_000, 1_000_000, 3).unwrap();
        assert_eq!((p.q, p.r), (999, 999_001));
        let full = binomial(1_000_001, 3).unwrap();
        assert_eq!(b, 999 * full + binomial(999_001, 3).unwrap());
    }

    #[test]
    fn bound_is_monotone_in_n() {
        for t in 3..=5 {
            for d in 1..=10 {
                let mut prev = 0;
                for n in 1..=200 {
                    let (_, b) = gls_bound(n, d, t).unwrap();
                    assert!(b >= prev, "n={n} d={d} t={t}");
                    prev = b;
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert!(shift_inequality_check(3, 3).unwrap());
        assert!(shift_inequality_check(1, 1).unwrap());
        assert!(shift_inequality_check(5, 2).unwrap());
        assert!(shift_inequality_check(2, 3).is_err());
        assert!(shift_inequality_check(2, 0).is_err());
    }

    #[test]
    fn shift_holds_on_range() {
        for a in 1..=500 {
            for b in 1..=a {
                assert!(shift_inequality_check(a, b).unwrap(), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_bound(2, 2, 4).unwrap(), 4);
        assert_eq!(merge_bound(4, 3, 4).unwrap(), 5);
        for a in 0..12 {
            assert_eq!(
                merge_bound(a, a, a).unwrap(),
                2 * binomial(a as i64, 3).unwrap()
            );
        }
        assert!(merge_bound(4, 3, 3).is_err());
        assert!(merge_bound(4, 3, 8).is_err());
    }

    #[test]
    fn merge_dominates_split() {
        for a in 0..40u64 {
            for b in 0..40u64 {
                let split = binomial(a as i64, 3).unwrap() + binomial(b as i64, 3).unwrap();
                for c in a.max(b)..=a + b {
                    assert!(merge_bound(a, b, c).unwrap() >= split);
                }
            }
        }
    }

    #[test]
    fn complement_identity_examples() {
        assert_eq!(complement_identity_check(&Graph::complete(3)).unwrap(), (1, 1));
        let edge_plus_isolated = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(complement_identity_check(&edge_plus_isolated).unwrap(), (0, 0));
        assert_eq!(complement_identity_check(&Graph::edgeless(7)).unwrap(), (35, 35));
        assert_eq!(complement_identity_check(&Graph::edgeless(0)).unwrap(), (0, 0));
    }
}
