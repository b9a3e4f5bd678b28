//! Zograf's recursion for the constant terms of genus-zero volumes:
//! `V_{0,n}(0) = (2 pi^2)^{n-3} a_n / (n-3)!` with `a_3 = 1` and
//!
//! ```text
//! a_n = 1/2 sum_{k=1}^{n-3} k(n-k-2)/(n-1) C(n-4, k-1) C(n, k+1) a_{k+2} a_{n-k}.
//! ```

use std::sync::RwLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{self, int, BigRational};
use crate::poly::format_pi_term;
use crate::recursion::{compute_volume, VolumeCache};
use crate::report::Check;

static SEQUENCE: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

fn binom(n: u32, k: u32) -> BigRational {
    BigRational::from_integer(exact::binomial(n, k))
}

/// `a_n`, memoised; `a_3 = 1`.
pub fn zograf_a(n: u32) -> Result<BigRational> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("a_n is defined for n >= 3, got {n}")));
    }
    let idx = (n - 3) as usize;
    if let Some(v) = SEQUENCE.read().expect("zograf memo poisoned").get(idx) {
        return Ok(v.clone());
    }
    let mut seq = SEQUENCE.write().expect("zograf memo poisoned");
    while seq.len() <= idx {
        let m = seq.len() as u32 + 3;
        let next = if m == 3 {
            int(1)
        } else {
            let mut sum = BigRational::zero();
            for k in 1..=m - 3 {
                let w = int(k as i64 * (m - k - 2) as i64) / int(m as i64 - 1);
                sum += w
                    * binom(m - 4, k - 1)
                    * binom(m, k + 1)
                    * &seq[(k - 1) as usize]
                    * &seq[(m - k - 3) as usize];
            }
            sum / int(2)
        };
        seq.push(next);
    }
    Ok(seq[idx].clone())
}

/// `(2p)^{n-3} a_n / (n-3)!` as a rational multiple of `p^{n-3}`.
pub fn zograf_constant(n: u32) -> Result<BigRational> {
    let a = zograf_a(n)?;
    Ok(a * exact::pow2(n as i64 - 3) / BigRational::from_integer(exact::factorial(n - 3)))
}

/// Compares the constant term of `V_{0,n}` with Zograf's value.
pub fn check_zograf(n: u32, cache: &VolumeCache) -> Result<Check> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("the comparison needs n >= 4, got {n}")));
    }
    let v = compute_volume(0, n as usize, cache)?;
    let constant = v.coeff_of(n - 3, &vec![0; n as usize]);
    let expected = zograf_constant(n)?;
    let id = format!("Zograf n={n}");
    Ok(if constant == expected {
        Check::pass(id)
    } else {
        Check::fail(
            id,
            format!("{} vs {}", format_pi_term(&constant, n - 3), format_pi_term(&expected, n - 3)),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn sequence_start() {
        let a: Vec<_> = (3..=6).map(|n| zograf_a(n).unwrap()).collect();
        assert_eq!(a, vec![int(1), int(1), int(5), int(61)]);
        assert!(zograf_a(2).is_err());
        assert!((3..=15).all(|n| zograf_a(n).unwrap() > BigRational::zero()));
    }

    #[test]
    fn constants_match_volumes() {
        assert_eq!(zograf_constant(4).unwrap(), int(2));
        assert_eq!(zograf_constant(5).unwrap(), int(10));
        assert_eq!(zograf_constant(6).unwrap(), ratio(244, 3));
        let cache = VolumeCache::new();
        for n in 4..=8 {
            assert!(check_zograf(n, &cache).unwrap().is_pass());
        }
        assert!(check_zograf(3, &cache).is_err());
    }

    #[test]
    fn concurrent_memo() {
        let vals: Vec<BigRational> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4).map(|_| s.spawn(|| zograf_a(20).unwrap())).collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
    }
}
