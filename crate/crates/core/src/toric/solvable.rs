//! Subnormal chains with abelian quotients and the constant k = product of
//! the quotient exponents.

use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::modular::lcm;
use crate::perm::Perm;
use crate::symplectic::GroupElement;

/// Largest group the chain code will enumerate.
pub const MAX_GROUP: usize = 1 << 20;

pub trait FiniteGroupElement: Clone + Eq + Hash {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl FiniteGroupElement for GroupElement {
    fn op(&self, other: &Self) -> Self {
        *self * *other
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

impl FiniteGroupElement for Perm {
    fn op(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
}

fn closure<E: FiniteGroupElement>(identity: &E, gens: &[E]) -> Result<HashSet<E>> {
    let mut set = HashSet::from([identity.clone()]);
    let mut stack = vec![identity.clone()];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.op(g);
            if set.insert(y.clone()) {
                if set.len() > MAX_GROUP {
                    return Err(Error::CapExceeded(format!("group larger than {MAX_GROUP}")));
                }
                stack.push(y);
            }
        }
    }
    Ok(set)
}

fn commutator<E: FiniteGroupElement>(a: &E, b: &E) -> E {
    a.op(b).op(&a.inv()).op(&b.inv())
}

/// {e} = H_0 ⊂ H_1 ⊂ .. ⊂ H_t, each normal in the next with abelian quotient.
#[derive(Debug, Clone)]
pub struct SolvableChain<E> {
    identity: E,
    levels: Vec<Vec<E>>,
    exponents: Vec<u64>,
    orders: Vec<usize>,
}

impl<E: FiniteGroupElement> SolvableChain<E> {
    /// `levels[i]` generates H_{i+1}; H_0 is trivial.
    pub fn new(identity: E, levels: Vec<Vec<E>>) -> Result<Self> {
        let mut prev_gens: Vec<E> = Vec::new();
        let mut prev = HashSet::from([identity.clone()]);
        let mut exponents = Vec::new();
        let mut orders = Vec::new();
        for (i, gens) in levels.iter().enumerate() {
            let cur = closure(&identity, gens)?;
            if let Some(j) = prev_gens.iter().position(|g| !cur.contains(g)) {
                return Err(Error::InvalidChain(format!("generator {j} of level {i} is not in level {}", i + 1)));
            }
            for g in gens {
                for h in &prev_gens {
                    if !prev.contains(&g.op(h).op(&g.inv())) {
                        return Err(Error::InvalidChain(format!("level {i} is not normal in level {}", i + 1)));
                    }
                }
            }
            for a in gens {
                for b in gens {
                    if !prev.contains(&commutator(a, b)) {
                        return Err(Error::InvalidChain(format!("non-abelian quotient at level {}", i + 1)));
                    }
                }
            }
            let mut e = 1u64;
            for x in &cur {
                let mut y = x.clone();
                let mut k = 1u64;
                while !prev.contains(&y) {
                    y = y.op(x);
                    k += 1;
                }
                e = lcm(e, k);
            }
            exponents.push(e);
            orders.push(cur.len());
            prev_gens = gens.clone();
            prev = cur;
        }
        Ok(SolvableChain { identity, levels, exponents, orders })
    }

    /// Chain from the derived series of the group generated by `gens`.
    pub fn derived_series(identity: E, gens: Vec<E>) -> Result<Self> {
        let mut series = vec![gens];
        loop {
            let top = series.last().expect("nonempty");
            let elems: Vec<E> = closure(&identity, top)?.into_iter().collect();
            if elems.len() == 1 {
                series.pop();
                break;
            }
            let comm: HashSet<E> = elems.iter().flat_map(|a| elems.iter().map(move |b| commutator(a, b))).collect();
            let next: Vec<E> = comm.into_iter().filter(|c| *c != identity).collect();
            let size = closure(&identity, &next)?.len();
            if size == elems.len() {
                return Err(Error::InvalidChain("group is not solvable".into()));
            }
            series.push(next);
        }
        series.reverse();
        SolvableChain::new(identity, series)
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    pub fn levels(&self) -> &[Vec<E>] {
        &self.levels
    }

    /// Exponents k_1..k_t of the successive quotients.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn k(&self) -> u64 {
        self.exponents.iter().product()
    }
}

pub fn k_constant<E: FiniteGroupElement>(chain: &SolvableChain<E>) -> u64 {
    chain.k()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::phi0;

    #[test]
    fn s3() {
        let id = Perm::identity(3);
        let c3 = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let t = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let ch = SolvableChain::new(id.clone(), vec![vec![c3.clone()], vec![c3.clone(), t.clone()]]).unwrap();
        assert_eq!(ch.exponents(), &[3, 2]);
        assert_eq!(k_constant(&ch), 6);
        let d = SolvableChain::derived_series(id.clone(), vec![c3.clone(), t.clone()]).unwrap();
        assert_eq!(d.k(), 6);
        // {e} < <t> < S3 fails normality
        assert!(SolvableChain::new(id.clone(), vec![vec![t.clone()], vec![c3.clone(), t.clone()]]).is_err());
        // a single non-abelian step fails
        let err = SolvableChain::new(id, vec![vec![c3, t]]).unwrap_err();
        assert!(err.to_string().contains("non-abelian"));
    }

    #[test]
    fn abelian_exponent() {
        let id = Perm::identity(7);
        let a = Perm::from_cycles(7, &[&[1, 2, 3, 4]]).unwrap();
        let b = Perm::from_cycles(7, &[&[5, 6]]).unwrap();
        let ch = SolvableChain::new(id, vec![vec![a, b]]).unwrap();
        assert_eq!(ch.k(), 4);
        let n = 5;
        let ch = SolvableChain::new(GroupElement::identity(n), vec![vec![phi0(n), GroupElement::minus_identity(n)]])
            .unwrap();
        assert_eq!(ch.k(), 2);
    }

    #[test]
    fn s5_not_solvable() {
        let id = Perm::identity(5);
        let a = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]).unwrap();
        let b = Perm::from_cycles(5, &[&[1, 2]]).unwrap();
        assert!(SolvableChain::derived_series(id, vec![a, b]).is_err());
    }
}
