//! Small number-theoretic helpers on machine integers.

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorisation as sorted `(prime, exponent)` pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut primes = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let mut rest = m;
        let mut found = false;
        for p in [2u64, 3, 5, 7, 11, 13] {
            if rest % p == 0 {
                primes.push(p);
                rest /= p;
                found = true;
                break;
            }
        }
        if found {
            stack.push(rest);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let current = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(current.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Sum of divisors.
pub fn sigma(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Smallest prime not in `excluded`.
pub fn smallest_prime_not_in(excluded: &[u64]) -> u64 {
    (2u64..)
        .find(|&q| is_prime(q) && !excluded.contains(&q))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime(18446744073709551557));
    }

    #[test]
    fn factorisation_round_trips() {
        for n in 1..3000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|(p, e)| p.pow(*e)).product::<u64>(), n);
            assert!(f.iter().all(|(p, _)| is_prime(*p)));
        }
        let big = 4294967291u64 * 4294967279u64;
        assert_eq!(factorize(big), vec![(4294967279, 1), (4294967291, 1)]);
    }

    #[test]
    fn classical_functions() {
        assert_eq!(sigma(6), 12);
        assert_eq!(sigma(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(smallest_prime_not_in(&[2, 3]), 5);
    }
}
