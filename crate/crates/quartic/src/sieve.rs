//! Segmented sieve of Eratosthenes for enumerating the primes the
//! verification scans walk over.

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(2, n)
}

/// All primes in `[lo, hi]`, ascending, via a segmented sieve with
/// `O(sqrt(hi))` base memory.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let base = simple_sieve(integer_sqrt_u64(hi));
    let mut out = Vec::new();
    const SEG: u64 = 1 << 16;
    let mut start = lo;
    while start <= hi {
        let end = (start + SEG - 1).min(hi);
        let len = (end - start + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut m = p.max(start.div_ceil(p)) * p;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        for (idx, &c) in composite.iter().enumerate() {
            if !c {
                out.push(start + idx as u64);
            }
        }
        start = end + 1;
    }
    out
}

/// Plain sieve for the base primes `<= n`.
fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

fn integer_sqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
