//! Permutations of {0, .., k-1}.

use std::fmt;

use crate::error::{Error, Result};

/// `p.images()[i]` is the image of `i`. Composition `p * q` applies `q` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(k: usize) -> Self {
        Perm((0..k as u8).collect())
    }

    /// Permutation from cycles on 1-based points, e.g. `[[1,2,3]]`.
    pub fn from_cycles(k: usize, cycles: &[&[u8]]) -> Result<Self> {
        let mut im: Vec<u8> = (0..k as u8).collect();
        for c in cycles {
            for (j, &a) in c.iter().enumerate() {
                let b = c[(j + 1) % c.len()];
                if a == 0 || b == 0 || a as usize > k || b as usize > k {
                    return Err(Error::InvalidInput(format!("cycle entry out of range 1..={k}")));
                }
                im[a as usize - 1] = b - 1;
            }
        }
        Perm::new(im)
    }

    /// Parses 1-based cycle notation such as `(1 2 3)(4,5)`; `()` is the identity.
    pub fn parse_cycles(k: usize, s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("permutation {s:?}: {msg}"));
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
            let cycle = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u8>().map_err(|_| bad("entries must be small integers")))
                .collect::<Result<Vec<u8>>>()?;
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        let mut seen = vec![false; k + 1];
        for &a in cycles.iter().flatten() {
            if (a as usize) <= k && std::mem::replace(&mut seen[a as usize], true) {
                return Err(bad("a point appears twice"));
            }
        }
        let refs: Vec<&[u8]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(k, &refs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn compose(&self, q: &Perm) -> Perm {
        Perm(q.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Cycles as 0-based point lists, fixed points included, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().into_iter().fold(1, |a, l| crate::modular::lcm(a, l as u64))
    }

    pub fn sign(&self) -> i32 {
        let odd = self.cycles().iter().filter(|c| c.len() % 2 == 0).count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of degree k, in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Perm> {
        let mut cur: Vec<u8> = (0..k as u8).collect();
        let mut out = vec![Perm(cur.clone())];
        loop {
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Perm(cur.clone()));
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let p = Perm::from_cycles(5, &[&[1, 2, 3], &[4, 5]]).unwrap();
        assert_eq!(p.cycle_type(), vec![3, 2]);
        assert_eq!(p.order(), 6);
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm::parse_cycles(5, "(1 2 3)(4,5)").unwrap(), p);
        assert_eq!(Perm::parse_cycles(5, &p.to_string()).unwrap(), p);
        assert!(Perm::parse_cycles(6, "()").unwrap().is_identity());
        assert!(Perm::parse_cycles(6, "(1 2)(2 3)").is_err());
        assert!(Perm::parse_cycles(6, "(1 7)").is_err());
        assert!(Perm::parse_cycles(6, "1 2").is_err());
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::all(5).len(), 120);
        let q = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let r = Perm::from_cycles(3, &[&[2, 3]]).unwrap();
        // q * r applies r first: 2 -> 3 -> 3
        assert_eq!(q.compose(&r).apply(1), 2);
        assert!(Perm::new(vec![0, 0]).is_err());
    }
}
