//! Prime enumeration and modular arithmetic over Z_p for word-sized primes.
//!
//! Rank computations over the integers are lifted to a *sound prime set*: a
//! set of primes large enough (by product) that any nonzero minor of a
//! bounded integer matrix survives modulo at least one prime in the set.
//! All residues fit in a `u64`; products go through `u128`, so any prime
//! below 2^31 is safe with plenty of headroom.

/// A prime number, validated by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    /// Returns `None` if `value` is not prime.
    pub fn new(value: u64) -> Option<Prime> {
        if is_prime(value) {
            Some(Prime(value))
        } else {
            None
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

/// Trial-division primality test. Fine at the scales this crate works with.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x % 2 == 0 {
        return x == 2;
    }
    let mut d = 3u64;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes `<= limit`, ascending. Empty for `limit < 2`.
pub fn sieve_primes(limit: u64) -> Vec<Prime> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(Prime(i as u64));
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Binary exponentiation: `base^exp mod p`.
pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Canonical residue of a signed integer in `[0, p)`.
#[inline]
pub fn reduce_signed(v: i64, p: u64) -> u64 {
    let r = v.rem_euclid(p as i64);
    r as u64
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Multiplicative inverse of `a` mod the prime `p`.
///
/// Returns `None` for `a == 0`. The basis-maintenance code only ever inverts
/// entries it has just observed to be nonzero, so a `None` there is a logic
/// bug upstream, not an input condition.
pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let (g, x, _) = extended_gcd((a % p) as i128, p as i128);
    debug_assert_eq!(g, 1);
    Some(x.rem_euclid(p as i128) as u64)
}

/// How the prime set backing an integer-rank tracker is sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeMode {
    /// All primes up to `max(k, ceil(log2 N))^3` with `k = min(n, m)`.
    /// Generous; kept for fidelity testing against [`PrimeMode::ProductBound`].
    PaperBound,
    /// Shortest ascending prime prefix whose product exceeds twice the
    /// largest possible minor, `k! * N^k`. The default: it needs
    /// O(k log N / log k) primes instead of ~k^3 / log k.
    ProductBound,
}

/// An ordered set of primes sound for rank lifting: any nonzero `k x k`
/// minor of an integer matrix with entries bounded by `N` in absolute value
/// is nonzero modulo at least one prime in the set. (A minor divisible by
/// every prime would have to be at least their product in absolute value,
/// and the product exceeds the minor bound.)
#[derive(Debug, Clone)]
pub struct PrimeSet {
    primes: Vec<Prime>,
    mode: PrimeMode,
    bit_bound: u32,
}

impl PrimeSet {
    /// Sizes a prime set for an `n x m` integer matrix with entries in
    /// `[-max_abs, max_abs]`.
    pub fn select(n: usize, m: usize, max_abs: i64, mode: PrimeMode) -> PrimeSet {
        assert!(n >= 1 && m >= 1 && max_abs >= 1, "degenerate dimensions");
        let k = n.min(m) as u64;
        let bit_bound = minor_bit_bound(k, max_abs as u64);
        match mode {
            PrimeMode::ProductBound => {
                let mut set = PrimeSet::product_bound_bits(bit_bound, 2);
                set.mode = PrimeMode::ProductBound;
                set
            }
            PrimeMode::PaperBound => {
                let base = k.max(ceil_log2(max_abs as u64) as u64);
                let primes = sieve_primes(base * base * base);
                PrimeSet {
                    primes,
                    mode: PrimeMode::PaperBound,
                    bit_bound,
                }
            }
        }
    }

    /// Shortest ascending prime prefix, starting at `min_prime`, whose
    /// product exceeds `2^bit_bound`. Callers that know their matrices are
    /// degenerate modulo small primes can skip those (the matching tracker
    /// starts at 3: all its entries are even).
    pub fn product_bound_bits(bit_bound: u32, min_prime: u64) -> PrimeSet {
        let mut primes = Vec::new();
        let mut bits = 0.0f64;
        let mut candidate = min_prime.max(2);
        while bits <= bit_bound as f64 {
            while !is_prime(candidate) {
                candidate += 1;
            }
            primes.push(Prime(candidate));
            bits += (candidate as f64).log2();
            candidate += 1;
        }
        PrimeSet {
            primes,
            mode: PrimeMode::ProductBound,
            bit_bound,
        }
    }

    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    pub fn mode(&self) -> PrimeMode {
        self.mode
    }

    pub fn bit_bound(&self) -> u32 {
        self.bit_bound
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Bits of `2 * k! * N^k`, rounded up: an upper bound on the bit length of
/// any minor of the tracked matrix, plus one bit of slack.
fn minor_bit_bound(k: u64, max_abs: u64) -> u32 {
    let n_clamped = max_abs.max(2);
    let log_fact: f64 = (2..=k).map(|i| (i as f64).log2()).sum();
    // Round the factorial part up; overestimating only adds primes.
    (log_fact + 1e-9).ceil() as u32 + k as u32 * ceil_log2(n_clamped) + 1
}

/// ceil(log2 x) for x >= 1.
fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1);
    64 - (x - 1).leading_zeros()
}
