//! Subgroups of Sp(4, Z/n) with a lazily built stabilizer chain on the
//! action on V = (Z/n)^4, base e1, e2, e3, e4.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::symplectic::{standard_generators, GroupElement, Vector4};

pub const DEFAULT_CEILING: usize = 20_000_000;
const DENSE_LIMIT: u32 = 1 << 22;

#[derive(Debug, Clone)]
enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u32, u32>),
}

impl Lookup {
    fn new(n: u32) -> Self {
        let size = (n as u64).pow(4);
        if size <= DENSE_LIMIT as u64 {
            Lookup::Dense(vec![u32::MAX; size as usize])
        } else {
            Lookup::Sparse(HashMap::new())
        }
    }

    fn get(&self, code: u32) -> Option<usize> {
        match self {
            Lookup::Dense(v) => match v[code as usize] {
                u32::MAX => None,
                i => Some(i as usize),
            },
            Lookup::Sparse(m) => m.get(&code).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, code: u32, idx: u32) {
        match self {
            Lookup::Dense(v) => v[code as usize] = idx,
            Lookup::Sparse(m) => {
                m.insert(code, idx);
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Level {
    base: u32,
    orbit: Vec<u32>,
    reps: Vec<GroupElement>,
    inv: Vec<GroupElement>,
    lookup: Lookup,
    gens: Vec<GroupElement>,
}

/// Stabilizer chain with transversals for each base point.
#[derive(Debug, Clone)]
pub struct Chain {
    n: u32,
    levels: Vec<Level>,
}

enum Task {
    Add(GroupElement, usize),
    Orbit(GroupElement, usize),
}

impl Chain {
    fn build(n: u32, gens: &[GroupElement], ceiling: usize) -> Result<Chain> {
        let id = GroupElement::identity(n);
        let mut levels: Vec<Level> = (0..4)
            .map(|k| {
                let base = Vector4::basis(k, n).encode();
                let mut lookup = Lookup::new(n);
                lookup.insert(base, 0);
                Level { base, orbit: vec![base], reps: vec![id], inv: vec![id], lookup, gens: Vec::new() }
            })
            .collect();
        let mut points = 4usize;
        let mut chain = Chain { n, levels: Vec::new() };
        let mut stack: Vec<Task> = gens.iter().rev().map(|g| Task::Add(*g, 0)).collect();
        while let Some(task) = stack.pop() {
            match task {
                Task::Add(g, k) => {
                    if k >= 4 || sifts(&levels[k..], &g) {
                        continue;
                    }
                    let lv = &mut levels[k];
                    lv.gens.push(g);
                    for r in lv.reps.iter() {
                        stack.push(Task::Orbit(g * *r, k));
                    }
                }
                Task::Orbit(h, k) => {
                    let lv = &mut levels[k];
                    let beta = h.apply_code(lv.base);
                    match lv.lookup.get(beta) {
                        None => {
                            points += 1;
                            if points > ceiling {
                                let depth = levels.iter().filter(|l| l.orbit.len() > 1).count();
                                return Err(Error::CeilingExceeded { ceiling, depth });
                            }
                            let idx = lv.orbit.len() as u32;
                            lv.lookup.insert(beta, idx);
                            lv.orbit.push(beta);
                            lv.reps.push(h);
                            lv.inv.push(h.inverse());
                            for s in lv.gens.iter() {
                                stack.push(Task::Orbit(*s * h, k));
                            }
                        }
                        Some(i) => {
                            let s = lv.inv[i] * h;
                            if !s.is_identity() {
                                stack.push(Task::Add(s, k + 1));
                            }
                        }
                    }
                }
            }
        }
        chain.levels = levels;
        Ok(chain)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.modulus() == self.n && sifts(&self.levels, g)
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let mut g = GroupElement::identity(self.n);
        for lv in &self.levels {
            let i = rng.random_range(0..lv.reps.len());
            g = g * lv.reps[i];
        }
        g
    }

    /// All elements, as products of transversal representatives.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![GroupElement::identity(self.n)];
        for lv in &self.levels {
            let mut next = Vec::with_capacity(out.len() * lv.reps.len());
            for g in &out {
                for r in &lv.reps {
                    next.push(*g * *r);
                }
            }
            out = next;
        }
        out
    }

    /// Transversal element at `level` sending the base point to `code`.
    pub fn transversal(&self, level: usize, code: u32) -> Option<GroupElement> {
        let lv = self.levels.get(level)?;
        lv.lookup.get(code).map(|i| lv.reps[i])
    }

    /// Strong generating set (union of the level generators).
    pub fn strong_generators(&self) -> Vec<GroupElement> {
        self.levels.iter().flat_map(|l| l.gens.iter().copied()).collect()
    }
}

/// Shared chain of the full group Sp(4, Z/n), built once per level.
pub fn full_chain(n: u32) -> Arc<Chain> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Chain>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("cache lock").get(&n) {
        return c.clone();
    }
    let c = Arc::new(Chain::build(n, &standard_generators(n), usize::MAX).expect("no ceiling"));
    cache.lock().expect("cache lock").entry(n).or_insert(c).clone()
}

fn sifts(levels: &[Level], g: &GroupElement) -> bool {
    let mut g = *g;
    for lv in levels {
        let beta = g.apply_code(lv.base);
        match lv.lookup.get(beta) {
            None => return false,
            Some(i) => g = lv.inv[i] * g,
        }
    }
    g.is_identity()
}

/// A subgroup of Sp(4, Z/n) given by generators.
#[derive(Debug, Clone)]
pub struct Subgroup {
    level: u32,
    generators: Vec<GroupElement>,
    ceiling: usize,
    chain: OnceLock<std::result::Result<Arc<Chain>, Error>>,
}

impl Subgroup {
    pub fn new(level: u32, generators: Vec<GroupElement>) -> Result<Self> {
        crate::modular::check_modulus(level as i64)?;
        for g in &generators {
            if g.modulus() != level {
                return Err(Error::ModulusMismatch(level, g.modulus()));
            }
        }
        Ok(Subgroup { level, generators, ceiling: DEFAULT_CEILING, chain: OnceLock::new() })
    }

    /// All of Sp(4, Z/n).
    pub fn full(level: u32) -> Self {
        let g = Subgroup::new(level, standard_generators(level)).expect("valid level");
        let _ = g.chain.set(Ok(full_chain(level)));
        g
    }

    pub fn trivial(level: u32) -> Self {
        Subgroup::new(level, vec![]).expect("valid level")
    }

    /// The subgroup `{1, -1}`.
    pub fn center(level: u32) -> Self {
        Subgroup::new(level, vec![GroupElement::minus_identity(level)]).expect("valid level")
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self.chain = OnceLock::new();
        self
    }

    /// Adds `-1` to the generators if it is not already there.
    pub fn adjoin_center(&self) -> Self {
        let m = GroupElement::minus_identity(self.level);
        let mut gens = self.generators.clone();
        if !gens.contains(&m) {
            gens.push(m);
        }
        Subgroup { level: self.level, generators: gens, ceiling: self.ceiling, chain: OnceLock::new() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Builds (once) and returns the stabilizer chain.
    pub fn closure(&self) -> Result<&Chain> {
        self.chain
            .get_or_init(|| Chain::build(self.level, &self.generators, self.ceiling).map(Arc::new))
            .as_ref()
            .map(|c| c.as_ref())
            .map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<u128> {
        Ok(self.closure()?.order())
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        if g.modulus() != self.level {
            return Err(Error::ModulusMismatch(self.level, g.modulus()));
        }
        Ok(self.closure()?.contains(g))
    }

    pub fn contains_center(&self) -> Result<bool> {
        self.contains(&GroupElement::minus_identity(self.level))
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        if self.level != other.level {
            return Err(Error::ModulusMismatch(other.level, self.level));
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `|other : self|`.
    pub fn index_in(&self, other: &Subgroup) -> Result<u128> {
        index(other, self)
    }

    pub fn conjugate(&self, g: &GroupElement) -> Self {
        let gens = self.generators.iter().map(|h| h.conjugate_by(g)).collect();
        Subgroup::new(self.level, gens).expect("same level").with_ceiling(self.ceiling)
    }
}

/// `|g : h|`, checking `h` is contained in `g`.
pub fn index(g: &Subgroup, h: &Subgroup) -> Result<u128> {
    if !h.is_subgroup_of(g)? {
        return Err(Error::NotSubgroup);
    }
    Ok(g.order()? / h.order()?)
}
