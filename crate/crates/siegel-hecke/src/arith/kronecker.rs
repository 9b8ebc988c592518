/// Kronecker symbol `(a/b)`, extended to all nonzero `b`.
///
/// At `b = 2` this is the usual rule: `+1` for `a ≡ ±1 (mod 8)`, `-1` for
/// `a ≡ ±3 (mod 8)`, `0` for even `a`. For `b = 0` the value is `1` when
/// `a = ±1` and `0` otherwise.
pub fn kronecker(a: i64, b: i64) -> i8 {
    let mut a = a as i128;
    let mut b = b as i128;
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    if b < 0 {
        b = -b;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while b % 2 == 0 {
        b /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (a/b) for odd b > 0.
    a = a.rem_euclid(b);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = b % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            result = -result;
        }
        a %= b;
    }
    if b == 1 {
        result
    } else {
        0
    }
}

/// Trial-division primality test, fine for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn matches_euler_criterion_on_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 23, 29] {
            for a in -60..60 {
                assert_eq!(kronecker(a, p), legendre_brute(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(kronecker(1, 17), 1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(-3, 5), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(4, 2), 0);
    }

    #[test]
    fn multiplicative_in_denominator() {
        for a in -30..30i64 {
            for b in 1..40i64 {
                for c in 1..12i64 {
                    assert_eq!(kronecker(a, b * c), kronecker(a, b) * kronecker(a, c));
                }
            }
        }
    }
}
