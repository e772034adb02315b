//! Integer and modular helpers shared by every module.

use crate::error::{Error, Result};

pub const MAX_MODULUS: u32 = 255;

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid on signed integers: returns (g, s, t) with s*a + t*b = g >= 0.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn reduce(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

pub fn mod_inverse(a: u32, n: u32) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = egcd(a as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(n as i128) as u32)
}

pub fn is_unit(a: u32, n: u32) -> bool {
    gcd(a as u64, n as u64) == 1
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, t))` when `n = p^t` with `t >= 1`.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    let f = factorize(n as u64);
    if f.len() == 1 {
        Some((f[0].0 as u32, f[0].1))
    } else {
        None
    }
}

pub fn check_modulus(n: i64) -> Result<u32> {
    if (1..=MAX_MODULUS as i64).contains(&n) {
        Ok(n as u32)
    } else {
        Err(Error::ModulusOutOfRange(n))
    }
}

pub fn euler_phi(n: u32) -> u32 {
    let mut r = n;
    for (p, _) in factorize(n as u64) {
        r = r / p as u32 * (p as u32 - 1);
    }
    r
}

pub fn pow_mod(base: u32, mut e: u64, n: u32) -> u32 {
    let n64 = n as u64;
    let mut b = base as u64 % n64;
    let mut acc = 1 % n64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n64;
        }
        b = b * b % n64;
        e >>= 1;
    }
    acc as u32
}

/// p-adic valuation of `a` inside Z/p^t (returns t for zero).
pub fn valuation(a: u32, p: u32, t: u32) -> u32 {
    if a == 0 {
        return t;
    }
    let mut a = a;
    let mut v = 0;
    while a.is_multiple_of(p) && v < t {
        a /= p;
        v += 1;
    }
    v
}

/// Combine `x = a mod m` and `x = b mod k` for coprime m, k.
pub fn crt_pair(a: u64, m: u64, b: u64, k: u64) -> Result<u64> {
    if gcd(m, k) != 1 {
        return Err(Error::NotCoprime(m as u32, k as u32));
    }
    let (_, s, _) = egcd(m as i128, k as i128);
    // x = a + m * ((b - a) * s mod k)
    let diff = (b as i128 - a as i128).rem_euclid(k as i128);
    let u = (diff * s).rem_euclid(k as i128);
    Ok((a as i128 + m as i128 * u) as u64 % (m * k))
}

/// Solve A x = b over Z/n for a small dense system (rows of length `cols`).
/// Returns one solution if any exists.
pub fn solve_mod(a: &[Vec<i64>], b: &[i64], n: u32) -> Option<Vec<u32>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    for (p, e) in factorize(n as u64) {
        let q = (p as u32).pow(e);
        let sol = solve_local(a, b, p as u32, e, cols)?;
        parts.push((q as u64, sol));
    }
    if parts.is_empty() {
        return Some(vec![0; cols]);
    }
    let mut m = 1u64;
    let mut acc = vec![0u64; cols];
    for (q, sol) in parts {
        for j in 0..cols {
            acc[j] = crt_pair(acc[j], m, sol[j] as u64, q).ok()?;
        }
        m *= q;
    }
    Some(acc.into_iter().map(|x| x as u32).collect())
}

// Gaussian elimination over Z/p^e choosing pivots of minimal valuation.
fn solve_local(a: &[Vec<i64>], b: &[i64], p: u32, e: u32, cols: usize) -> Option<Vec<u32>> {
    let q = p.pow(e) as i64;
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row: Vec<i64> = r.iter().map(|x| x.rem_euclid(q)).collect();
            row.push(bi.rem_euclid(q));
            row
        })
        .collect();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        // minimal valuation entry in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(rank) {
            for (j, &x) in row.iter().enumerate().take(cols).skip(rank) {
                if x != 0 {
                    let v = valuation(x as u32, p, e);
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        m.swap(rank, pi);
        for row in m.iter_mut() {
            row.swap(rank, pj);
        }
        perm.swap(rank, pj);
        let pv = p.pow(v) as i64;
        let unit = m[rank][rank] / pv;
        let inv = mod_inverse((unit.rem_euclid(q)) as u32, q as u32)? as i64;
        for x in m[rank].iter_mut() {
            *x = (*x * inv).rem_euclid(q);
        }
        // pivot is now p^v; every other entry in the column is divisible by p^v
        for i in 0..rows {
            if i != rank && m[i][rank] != 0 {
                let f = m[i][rank] / pv;
                for j in 0..=cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(q);
                }
            }
        }
        rank += 1;
    }
    for row in m.iter().skip(rank) {
        if row[cols] != 0 {
            return None;
        }
    }
    let mut y = vec![0i64; cols];
    for i in 0..rank {
        let pv = m[i][i];
        let rhs = m[i][cols];
        if rhs % pv != 0 {
            return None;
        }
        y[i] = rhs / pv;
    }
    let mut x = vec![0u32; cols];
    for (i, &pi) in perm.iter().enumerate() {
        x[pi] = y[i].rem_euclid(q) as u32;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_units() {
        assert_eq!(mod_inverse(2, 9), Some(5));
        assert_eq!(mod_inverse(3, 9), None);
        assert!(is_unit(4, 9));
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(15), 8);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn crt_combines() {
        let x = crt_pair(2, 3, 4, 5).unwrap();
        assert_eq!(x % 3, 2);
        assert_eq!(x % 5, 4);
        assert!(crt_pair(1, 6, 1, 4).is_err());
    }

    #[test]
    fn solver_matches_brute_force() {
        let n = 12;
        let a = vec![vec![2, 4, 1], vec![6, 3, 9]];
        for b0 in 0..n as i64 {
            for b1 in 0..n as i64 {
                let b = [b0, b1];
                let mut exists = false;
                for x in 0..n as i64 {
                    for y in 0..n as i64 {
                        for z in 0..n as i64 {
                            if (2 * x + 4 * y + z - b0).rem_euclid(12) == 0
                                && (6 * x + 3 * y + 9 * z - b1).rem_euclid(12) == 0
                            {
                                exists = true;
                            }
                        }
                    }
                }
                let sol = solve_mod(&a, &b, n);
                assert_eq!(sol.is_some(), exists, "b = {b:?}");
                if let Some(s) = sol {
                    for (row, &bi) in a.iter().zip(&b) {
                        let v: i64 = row.iter().zip(&s).map(|(r, &x)| r * x as i64).sum();
                        assert_eq!((v - bi).rem_euclid(12), 0);
                    }
                }
            }
        }
    }
}
