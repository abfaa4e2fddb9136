//! Binomial coefficients reduced modulo p.

use super::field::Prime;

/// `C(n, k) mod p` for any integer `n` (negative `n` by reflection).
pub fn binom_mod_p(n: i64, k: u64, p: Prime) -> u64 {
    if n < 0 {
        // C(n, k) = (-1)^k C(k - n - 1, k)
        let m = (k as i128) - (n as i128) - 1;
        let v = binom_nonneg(m as u128, k as u128, p);
        return if k % 2 == 1 { p.neg(v) } else { v };
    }
    if k as i128 > n as i128 {
        return 0;
    }
    binom_nonneg(n as u128, k as u128, p)
}

/// Lucas' theorem over base-p digits.
fn binom_nonneg(mut n: u128, mut k: u128, p: Prime) -> u64 {
    let q = p.get() as u128;
    let mut acc = 1u64;
    while k > 0 {
        let (a, b) = ((n % q) as u64, (k % q) as u64);
        if b > a {
            return 0;
        }
        acc = p.mul(acc, small_binom(a, b, p));
        n /= q;
        k /= q;
    }
    acc
}

fn small_binom(a: u64, b: u64, p: Prime) -> u64 {
    let b = b.min(a - b);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = p.mul(num, a - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, p.inv(den).expect("digits below p have invertible factorials"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<u128>> {
        let mut rows = vec![vec![1u128]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u128; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn matches_exact_integers() {
        let rows = pascal(90);
        for p in [2u64, 3, 5, 7, 13] {
            let pr = Prime::new(p).unwrap();
            for n in 0..=90usize {
                for k in 0..=n + 2 {
                    let want = if k <= n { (rows[n][k] % p as u128) as u64 } else { 0 };
                    assert_eq!(binom_mod_p(n as i64, k as u64, pr), want, "C({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn negative_upper_index() {
        let rows = pascal(60);
        for p in [2u64, 3, 5] {
            let pr = Prime::new(p).unwrap();
            for n in 1..=20i64 {
                for k in 0..=30u64 {
                    let m = (k as i64 + n - 1) as usize;
                    let mag = (rows[m][k as usize] % p as u128) as u64;
                    let want = if k % 2 == 1 { pr.neg(mag) } else { mag };
                    assert_eq!(binom_mod_p(-n, k, pr), want);
                }
            }
        }
        // C(-1, k) = (-1)^k
        let p7 = Prime::new(7).unwrap();
        assert_eq!(binom_mod_p(-1, 3, p7), 6);
    }

    #[test]
    fn large_arguments() {
        let p = Prime::new(2).unwrap();
        // C(2^40, 2^39) is even; C(2^40 - 1, k) is odd for all k
        assert_eq!(binom_mod_p(1 << 40, 1 << 39, p), 0);
        assert_eq!(binom_mod_p((1 << 40) - 1, 12345, p), 1);
    }
}
