//! Combinatorial models of the boundary strata of the level-n compactification:
//! divisors D (primitive +-vectors), cusps (Lagrangian planes with a form up to
//! sign), divisors E (orthogonal splittings), divisors F (conjugates of the
//! coordinate-swap involution), lines (pairs of D over a cusp) and triple
//! points, together with the incidence relations and the group action.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::chain::full_chain;
use crate::error::{Error, Result};
use crate::modular::{is_unit, mod_inverse, solve_mod};
use crate::symplectic::{form, psi0, psi_b, GroupElement, PGroupElement, Vector4};

fn check_level(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::LevelTooSmall(n));
    }
    crate::modular::check_modulus(n as i64)?;
    Ok(())
}

fn same_level(a: u32, b: u32) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch(a, b));
    }
    Ok(())
}

/// Divisor D: a primitive vector up to sign, stored as the smaller representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorD(Vector4);

impl DivisorD {
    pub fn new(v: Vector4) -> Result<Self> {
        if !v.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        Ok(DivisorD(v.canonical_pm()))
    }

    pub fn vector(&self) -> Vector4 {
        self.0
    }

    pub fn level(&self) -> u32 {
        self.0.modulus()
    }

    pub fn act(&self, g: &GroupElement) -> DivisorD {
        DivisorD(g.apply(&self.0).canonical_pm())
    }
}

/// A free rank-2 summand of V, stored by its canonical basis: `w1` is the
/// lexicographically smallest element of order n, `w2` the smallest element
/// completing it to a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    basis: [Vector4; 2],
}

fn det2(x: (u32, u32), y: (u32, u32), n: u32) -> u32 {
    let n = n as u64;
    ((x.0 as u64 * y.1 as u64 % n + n - x.1 as u64 * y.0 as u64 % n) % n) as u32
}

impl Plane {
    /// Span of `a` and `b`, which must be a free rank-2 summand.
    pub fn span(a: &Vector4, b: &Vector4) -> Result<Plane> {
        let n = a.modulus();
        same_level(n, b.modulus())?;
        let mut seen = HashSet::with_capacity((n * n) as usize);
        let mut w1: Option<(Vector4, (u32, u32))> = None;
        for x in 0..n {
            for y in 0..n {
                let v = a.scale(x) + b.scale(y);
                seen.insert(v);
                if v.is_primitive() && w1.is_none_or(|(m, _)| v < m) {
                    w1 = Some((v, (x, y)));
                }
            }
        }
        if seen.len() != (n * n) as usize {
            return Err(Error::InvalidLine("vectors do not span a free plane".into()));
        }
        let (w1, c1) = w1.ok_or(Error::NotPrimitive)?;
        let mut w2: Option<Vector4> = None;
        for x in 0..n {
            for y in 0..n {
                if is_unit(det2(c1, (x, y), n), n) {
                    let v = a.scale(x) + b.scale(y);
                    if w2.is_none_or(|m| v < m) {
                        w2 = Some(v);
                    }
                }
            }
        }
        // a free plane of order n^2 always has a completing vector
        Ok(Plane { basis: [w1, w2.expect("completion exists")] })
    }

    pub fn basis(&self) -> [Vector4; 2] {
        self.basis
    }

    pub fn level(&self) -> u32 {
        self.basis[0].modulus()
    }

    pub fn is_isotropic(&self) -> bool {
        form(&self.basis[0], &self.basis[1]) == 0
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.level();
        is_unit(form(&self.basis[0], &self.basis[1]), n)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the plane.
    pub fn coordinates(&self, v: &Vector4) -> Option<(u32, u32)> {
        let n = self.level();
        let [w1, w2] = self.basis;
        let a: Vec<Vec<i64>> = (0..4).map(|i| vec![w1.get(i) as i64, w2.get(i) as i64]).collect();
        let b: Vec<i64> = v.coords().iter().map(|&x| x as i64).collect();
        let s = solve_mod(&a, &b, n)?;
        Some((s[0], s[1]))
    }

    pub fn contains(&self, v: &Vector4) -> bool {
        if self.is_isotropic() {
            form(&self.basis[0], v) == 0 && form(&self.basis[1], v) == 0
        } else {
            self.coordinates(v).is_some()
        }
    }

    pub fn act(&self, g: &GroupElement) -> Plane {
        Plane::span(&g.apply(&self.basis[0]), &g.apply(&self.basis[1])).expect("image of a free plane")
    }

    /// Orthogonal complement of a nondegenerate plane.
    pub fn orthogonal(&self) -> Result<Plane> {
        if !self.is_nondegenerate() {
            return Err(Error::NotComplementary);
        }
        let n = self.level();
        let [a, b] = self.basis;
        let ab = form(&a, &b);
        let inv = mod_inverse(ab, n).expect("unit");
        // w -> w - pi(w) projects onto the complement
        let proj = |w: Vector4| {
            let pi = (a.scale(form(&w, &b)) - b.scale(form(&w, &a))).scale(inv);
            w - pi
        };
        let imgs: Vec<Vector4> = (0..4).map(|i| proj(Vector4::basis(i, n))).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                if let Ok(p) = Plane::span(&imgs[i], &imgs[j]) {
                    return Ok(p);
                }
            }
        }
        // composite levels may need a mixed pair
        for x in 0..n {
            for y in 0..n {
                let u = imgs[0].scale(x) + imgs[1].scale(y);
                let v = imgs[2].scale(x) + imgs[3].scale(y);
                for (s, t) in [(u, v), (u, imgs[2]), (u, imgs[3]), (imgs[0], v), (imgs[1], v)] {
                    if let Ok(p) = Plane::span(&s, &t) {
                        return Ok(p);
                    }
                }
            }
        }
        Err(Error::NotComplementary)
    }
}

/// Cusp of the Satake compactification: a Lagrangian plane `W` and a
/// nondegenerate skew form on it up to sign, recorded by its value on the
/// canonical basis as `min(c, n - c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspPoint {
    plane: Plane,
    f: u32,
}

impl CuspPoint {
    pub fn new(plane: Plane, f: u32) -> Result<Self> {
        let n = plane.level();
        if !plane.is_isotropic() {
            return Err(Error::InvalidLine("plane is not isotropic".into()));
        }
        let f = f % n;
        if !is_unit(f, n) {
            return Err(Error::InvalidLine("form is degenerate".into()));
        }
        Ok(CuspPoint { plane, f: f.min(n - f) })
    }

    /// The cusp whose plane is spanned by `x, y` and whose form takes value 1 on `(x, y)`.
    pub fn from_basis(x: &Vector4, y: &Vector4) -> Result<Self> {
        let plane = Plane::span(x, y)?;
        let n = plane.level();
        let cx = plane.coordinates(x).expect("in plane");
        let cy = plane.coordinates(y).expect("in plane");
        let d = det2(cx, cy, n);
        let f = mod_inverse(d, n).ok_or(Error::NotPrimitive)?;
        CuspPoint::new(plane, f)
    }

    pub fn standard(n: u32) -> Self {
        CuspPoint::from_basis(&Vector4::basis(0, n), &Vector4::basis(1, n)).expect("standard cusp")
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn form_value(&self) -> u32 {
        self.f
    }

    pub fn level(&self) -> u32 {
        self.plane.level()
    }

    pub fn act(&self, g: &GroupElement) -> CuspPoint {
        let n = self.level();
        let [w1, w2] = self.plane.basis;
        let inv = mod_inverse(self.f, n).expect("unit");
        CuspPoint::from_basis(&g.apply(&w1), &g.apply(&w2.scale(inv))).expect("image cusp")
    }
}

/// Divisor E: an unordered pair of mutually orthogonal nondegenerate planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorE {
    w1: Plane,
    w2: Plane,
}

impl DivisorE {
    pub fn new(a: Plane, b: Plane) -> Result<Self> {
        same_level(a.level(), b.level())?;
        if !a.is_nondegenerate() || !b.is_nondegenerate() {
            return Err(Error::NotComplementary);
        }
        for x in a.basis {
            for y in b.basis {
                if form(&x, &y) != 0 {
                    return Err(Error::NotComplementary);
                }
            }
        }
        let (w1, w2) = if a <= b { (a, b) } else { (b, a) };
        Ok(DivisorE { w1, w2 })
    }

    pub fn from_plane(w1: Plane) -> Result<Self> {
        DivisorE::new(w1, w1.orthogonal()?)
    }

    pub fn standard(n: u32) -> Self {
        let a = Plane::span(&Vector4::basis(0, n), &Vector4::basis(2, n)).expect("plane");
        let b = Plane::span(&Vector4::basis(1, n), &Vector4::basis(3, n)).expect("plane");
        DivisorE::new(a, b).expect("standard pair")
    }

    pub fn planes(&self) -> (Plane, Plane) {
        (self.w1, self.w2)
    }

    pub fn level(&self) -> u32 {
        self.w1.level()
    }

    pub fn act(&self, g: &GroupElement) -> DivisorE {
        DivisorE::new(self.w1.act(g), self.w2.act(g)).expect("image pair")
    }
}

/// The involution that is `+1` on `W1` and `-1` on `W2`, modulo sign.
pub fn e_involution(e: &DivisorE) -> PGroupElement {
    let n = e.level();
    let [a, b] = e.w1.basis;
    let inv = mod_inverse(form(&a, &b), n).expect("nondegenerate");
    let mut cols = [Vector4::zero(n); 4];
    for (j, col) in cols.iter_mut().enumerate() {
        let w = Vector4::basis(j, n);
        let pi = (a.scale(form(&w, &b)) - b.scale(form(&w, &a))).scale(inv);
        *col = pi.scale(2) - w;
    }
    PGroupElement::new(GroupElement::from_columns(cols).expect("involution is symplectic"))
}

/// Divisor F: a conjugate of the coordinate-swap involution modulo sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorF(PGroupElement);

impl DivisorF {
    pub fn standard(n: u32) -> Self {
        DivisorF(PGroupElement::new(psi0(n)))
    }

    pub fn involution(&self) -> PGroupElement {
        self.0
    }

    pub fn level(&self) -> u32 {
        self.0.modulus()
    }

    pub fn act(&self, g: &GroupElement) -> DivisorF {
        DivisorF(PGroupElement::new(self.0.rep().conjugate_by(g)))
    }
}

/// Line `l`: two divisors D whose vectors form a basis of a Lagrangian plane,
/// with the cusp it lies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineLD {
    a: DivisorD,
    b: DivisorD,
    cusp: CuspPoint,
}

impl LineLD {
    pub fn new(a: DivisorD, b: DivisorD) -> Result<Self> {
        same_level(a.level(), b.level())?;
        let (x, y) = (a.vector(), b.vector());
        if form(&x, &y) != 0 {
            return Err(Error::InvalidLine("vectors are not orthogonal".into()));
        }
        let cusp =
            CuspPoint::from_basis(&x, &y).map_err(|_| Error::InvalidLine("vectors do not form a basis".into()))?;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Ok(LineLD { a, b, cusp })
    }

    pub fn standard(n: u32) -> Self {
        LineLD::new(DivisorD(Vector4::basis(0, n)), DivisorD(Vector4::basis(1, n))).expect("standard line")
    }

    pub fn divisors(&self) -> (DivisorD, DivisorD) {
        (self.a, self.b)
    }

    pub fn cusp(&self) -> CuspPoint {
        self.cusp
    }

    pub fn level(&self) -> u32 {
        self.a.level()
    }

    pub fn act(&self, g: &GroupElement) -> LineLD {
        LineLD::new(self.a.act(g), self.b.act(g)).expect("image line")
    }
}

/// Triple point: three divisors D over one cusp, pairwise forming lines, with
/// vectors summing to zero for some choice of signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePoint {
    d: [DivisorD; 3],
    cusp: CuspPoint,
}

impl TriplePoint {
    pub fn new(a: DivisorD, b: DivisorD, c: DivisorD) -> Result<Self> {
        let l = LineLD::new(a, b).map_err(|e| Error::InvalidTriple(e.to_string()))?;
        for other in [LineLD::new(a, c), LineLD::new(b, c)] {
            let other = other.map_err(|e| Error::InvalidTriple(e.to_string()))?;
            if other.cusp != l.cusp {
                return Err(Error::InvalidTriple("divisors lie over different cusps".into()));
            }
        }
        let (x, y, z) = (a.vector(), b.vector(), c.vector());
        let zero_sum = [x + y + z, x + y - z, x - y + z, x - y - z].iter().any(|v| v.is_zero());
        if !zero_sum {
            return Err(Error::InvalidTriple("no signed sum vanishes".into()));
        }
        let mut d = [a, b, c];
        d.sort();
        if d[0] == d[1] || d[1] == d[2] {
            return Err(Error::InvalidTriple("repeated divisor".into()));
        }
        Ok(TriplePoint { d, cusp: l.cusp })
    }

    pub fn standard(n: u32) -> Self {
        let v = |c: [i64; 4]| DivisorD::new(Vector4::new(c, n)).expect("primitive");
        TriplePoint::new(v([0, 1, 0, 0]), v([-1, 1, 0, 0]), v([1, 0, 0, 0])).expect("standard triple")
    }

    pub fn divisors(&self) -> [DivisorD; 3] {
        self.d
    }

    pub fn cusp(&self) -> CuspPoint {
        self.cusp
    }

    pub fn level(&self) -> u32 {
        self.d[0].level()
    }

    pub fn lines(&self) -> [LineLD; 3] {
        let [a, b, c] = self.d;
        [
            LineLD::new(a, b).expect("sub-line"),
            LineLD::new(a, c).expect("sub-line"),
            LineLD::new(b, c).expect("sub-line"),
        ]
    }

    pub fn act(&self, g: &GroupElement) -> TriplePoint {
        let [a, b, c] = self.d;
        TriplePoint::new(a.act(g), b.act(g), c.act(g)).expect("image triple")
    }
}

pub fn incidence_d_cusp(d: &DivisorD, q: &CuspPoint) -> Result<bool> {
    same_level(d.level(), q.level())?;
    Ok(q.plane.contains(&d.vector()))
}

pub fn incidence_e_d(e: &DivisorE, d: &DivisorD) -> Result<bool> {
    same_level(e.level(), d.level())?;
    let v = d.vector();
    let in_plane = |p: &Plane, other: &Plane| other.basis.iter().all(|w| form(w, &v) == 0) && p.level() == v.modulus();
    Ok(in_plane(&e.w1, &e.w2) || in_plane(&e.w2, &e.w1))
}

/// The n divisors F through a line: conjugates of `psi_b` by a symplectic
/// completion of the line's vectors.
pub fn f_through_line(l: &LineLD) -> Result<Vec<DivisorF>> {
    let n = l.level();
    let g = complete_isotropic_pair(&l.a.vector(), &l.b.vector())
        .ok_or_else(|| Error::InvalidLine("no symplectic completion".into()))?;
    let mut out: Vec<DivisorF> =
        (0..n as i64).map(|b| DivisorF(PGroupElement::new(psi_b(b, n).conjugate_by(&g)))).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// A symplectic `g` with `g e1 = a`, `g e2 = b` for an isotropic pair spanning
/// a free plane.
pub fn complete_isotropic_pair(a: &Vector4, b: &Vector4) -> Option<GroupElement> {
    let n = a.modulus();
    if form(a, b) != 0 {
        return None;
    }
    let rows: Vec<Vec<i64>> =
        [a.form_row(), b.form_row()].iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    let c = solve_mod(&rows, &[1, 0], n)?;
    let d = solve_mod(&rows, &[0, 1], n)?;
    let c = Vector4::new([c[0] as i64, c[1] as i64, c[2] as i64, c[3] as i64], n);
    let d = Vector4::new([d[0] as i64, d[1] as i64, d[2] as i64, d[3] as i64], n);
    let c = c - b.scale(form(&c, &d));
    GroupElement::from_columns([*a, *b, c, d]).ok()
}

/// Lagrangian planes, sorted.
pub fn lagrangian_planes(n: u32) -> Result<Vec<Plane>> {
    check_level(n)?;
    let chain = full_chain(n);
    let p1 = projective_line(n);
    let mut set = BTreeSet::new();
    for d in enumerate_d(n)? {
        let a = d.vector();
        let g = chain.transversal(0, a.encode()).expect("full group is transitive on primitive vectors");
        for &(x, y) in &p1 {
            let b = g.apply(&Vector4::new([0, x as i64, 0, y as i64], n));
            set.insert(Plane::span(&a, &b)?);
        }
    }
    Ok(set.into_iter().collect())
}

/// Unimodular pairs `(x, y)` modulo units.
fn projective_line(n: u32) -> Vec<(u32, u32)> {
    let units: Vec<u32> = (1..n).filter(|&u| is_unit(u, n)).collect();
    let mut out = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if crate::modular::gcd(crate::modular::gcd(x as u64, y as u64), n as u64) == 1 {
                let rep = units.iter().map(|&u| ((x * u) % n, (y * u) % n)).min().expect("units nonempty");
                out.insert(rep);
            }
        }
    }
    out.into_iter().collect()
}

pub fn enumerate_d(n: u32) -> Result<Vec<DivisorD>> {
    check_level(n)?;
    let mut out: Vec<DivisorD> = (0..n.pow(4))
        .map(|c| Vector4::decode(c, n))
        .filter(|v| v.is_primitive() && v.canonical_pm() == *v)
        .map(DivisorD)
        .collect();
    out.sort();
    Ok(out)
}

pub fn enumerate_cusps(n: u32) -> Result<Vec<CuspPoint>> {
    let planes = lagrangian_planes(n)?;
    let fs: Vec<u32> = (1..=n / 2).filter(|&f| is_unit(f, n)).collect();
    let mut out = Vec::with_capacity(planes.len() * fs.len());
    for p in planes {
        for &f in &fs {
            out.push(CuspPoint { plane: p, f });
        }
    }
    Ok(out)
}

pub fn enumerate_e(n: u32) -> Result<Vec<DivisorE>> {
    check_level(n)?;
    let chain = full_chain(n);
    let mut planes = BTreeSet::new();
    for d in enumerate_d(n)? {
        let a = d.vector();
        let g = chain.transversal(0, a.encode()).expect("transitive");
        for x in 0..n as i64 {
            for y in 0..n as i64 {
                let b = g.apply(&Vector4::new([0, x, 1, y], n));
                planes.insert(Plane::span(&a, &b)?);
            }
        }
    }
    let mut out = BTreeSet::new();
    for p in &planes {
        let q = p.orthogonal()?;
        debug_assert!(planes.contains(&q));
        out.insert(DivisorE::new(*p, q)?);
    }
    Ok(out.into_iter().collect())
}

/// Conjugacy class of the coordinate swap in Sp(4, Z/n)/{+-1}.
pub fn enumerate_f(n: u32) -> Result<Vec<DivisorF>> {
    check_level(n)?;
    let gens = crate::symplectic::standard_generators(n);
    let start = DivisorF::standard(n);
    let mut seen = HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        for g in &gens {
            let h = f.act(g);
            if seen.insert(h) {
                stack.push(h);
            }
        }
    }
    let mut out: Vec<DivisorF> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

pub fn lines(n: u32) -> Result<Vec<LineLD>> {
    Ok(Atlas::new(n)?.lines().to_vec())
}

pub fn triple_points(n: u32) -> Result<Vec<TriplePoint>> {
    Ok(Atlas::new(n)?.triples().to_vec())
}

/// Per-plane data for a Lagrangian plane.
#[derive(Debug, Clone)]
pub struct PlaneData {
    pub plane: Plane,
    /// `g` with `g e1 = w1`, `g e2 = w2`; columns 3 and 4 are dual to the basis.
    pub frame: GroupElement,
    /// Divisors D in the plane with their canonical coordinates.
    pub divisors: Vec<(u32, (u32, u32))>,
}

impl PlaneData {
    /// Coordinates in the canonical basis of a vector known to lie in the plane.
    pub fn coords(&self, v: &Vector4) -> (u32, u32) {
        let c = self.frame.column(2);
        let d = self.frame.column(3);
        (form(v, &c), form(v, &d))
    }
}

/// Lines, lookup by divisor-index pair, and (a, b, plane index) per line.
type LineTable = (Vec<LineLD>, HashMap<(u32, u32), u32>, Vec<(u32, u32, u32)>);
/// Triple points, lookup by sorted divisor indices, and (key, plane index).
type TripleTable = (Vec<TriplePoint>, HashMap<[u32; 3], u32>, Vec<([u32; 3], u32)>);

/// All families at one level with index lookups. Families are built lazily.
#[derive(Debug)]
pub struct Atlas {
    n: u32,
    d: Vec<DivisorD>,
    d_index: Vec<u32>,
    planes: OnceLock<(Vec<PlaneData>, HashMap<Plane, u32>)>,
    lines: OnceLock<LineTable>,
    triples: OnceLock<TripleTable>,
    e: OnceLock<(Vec<DivisorE>, HashMap<DivisorE, u32>)>,
    f: OnceLock<(Vec<DivisorF>, HashMap<DivisorF, u32>)>,
}

const NONE: u32 = u32::MAX;

impl Atlas {
    pub fn new(n: u32) -> Result<Self> {
        let d = enumerate_d(n)?;
        let mut d_index = vec![NONE; n.pow(4) as usize];
        for (i, x) in d.iter().enumerate() {
            d_index[x.vector().encode() as usize] = i as u32;
            d_index[(-x.vector()).encode() as usize] = i as u32;
        }
        Ok(Atlas {
            n,
            d,
            d_index,
            planes: OnceLock::new(),
            lines: OnceLock::new(),
            triples: OnceLock::new(),
            e: OnceLock::new(),
            f: OnceLock::new(),
        })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn divisors_d(&self) -> &[DivisorD] {
        &self.d
    }

    /// Index of the divisor of a primitive vector.
    pub fn d_index(&self, v: &Vector4) -> Option<usize> {
        match self.d_index.get(v.encode() as usize) {
            Some(&i) if i != NONE && v.modulus() == self.n => Some(i as usize),
            _ => None,
        }
    }

    fn plane_table(&self) -> &(Vec<PlaneData>, HashMap<Plane, u32>) {
        self.planes.get_or_init(|| {
            let planes = lagrangian_planes(self.n).expect("valid level");
            let mut data = Vec::with_capacity(planes.len());
            let mut index = HashMap::with_capacity(planes.len());
            for (i, p) in planes.into_iter().enumerate() {
                let [w1, w2] = p.basis;
                let frame = complete_isotropic_pair(&w1, &w2).expect("Lagrangian pair");
                let mut divisors = Vec::new();
                let n = self.n;
                for x in 0..n {
                    for y in 0..n {
                        let v = w1.scale(x) + w2.scale(y);
                        if v.is_primitive() && v.canonical_pm() == v {
                            divisors.push((self.d_index[v.encode() as usize], (x, y)));
                        }
                    }
                }
                divisors.sort();
                index.insert(p, i as u32);
                data.push(PlaneData { plane: p, frame, divisors });
            }
            (data, index)
        })
    }

    pub fn planes(&self) -> &[PlaneData] {
        &self.plane_table().0
    }

    pub fn plane_index(&self, p: &Plane) -> Option<usize> {
        self.plane_table().1.get(p).map(|&i| i as usize)
    }

    pub fn cusps(&self) -> Vec<CuspPoint> {
        let n = self.n;
        let fs: Vec<u32> = (1..=n / 2).filter(|&f| is_unit(f, n)).collect();
        self.planes().iter().flat_map(|p| fs.iter().map(move |&f| CuspPoint { plane: p.plane, f })).collect()
    }

    fn line_table(&self) -> &LineTable {
        self.lines.get_or_init(|| {
            let n = self.n;
            let mut out = Vec::new();
            let mut meta = Vec::new();
            for (pi, pd) in self.planes().iter().enumerate() {
                let ds = &pd.divisors;
                for i in 0..ds.len() {
                    for j in i + 1..ds.len() {
                        let det = det2(ds[i].1, ds[j].1, n);
                        if let Some(inv) = mod_inverse(det, n) {
                            let f = inv.min(n - inv);
                            let a = self.d[ds[i].0 as usize];
                            let b = self.d[ds[j].0 as usize];
                            out.push(LineLD { a, b, cusp: CuspPoint { plane: pd.plane, f } });
                            meta.push((ds[i].0, ds[j].0, pi as u32));
                        }
                    }
                }
            }
            let mut order: Vec<usize> = (0..out.len()).collect();
            order.sort_by_key(|&i| (meta[i].0, meta[i].1));
            let out: Vec<LineLD> = order.iter().map(|&i| out[i]).collect();
            let meta: Vec<(u32, u32, u32)> = order.iter().map(|&i| meta[i]).collect();
            let index = meta.iter().enumerate().map(|(i, m)| ((m.0, m.1), i as u32)).collect();
            (out, index, meta)
        })
    }

    pub fn lines(&self) -> &[LineLD] {
        &self.line_table().0
    }

    /// `(d index, d index, plane index)` per line, parallel to [`Atlas::lines`].
    pub fn line_meta(&self) -> &[(u32, u32, u32)] {
        &self.line_table().2
    }

    pub fn line_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a <= b { (a as u32, b as u32) } else { (b as u32, a as u32) };
        self.line_table().1.get(&key).map(|&i| i as usize)
    }

    fn triple_table(&self) -> &TripleTable {
        self.triples.get_or_init(|| {
            let mut seen: HashMap<[u32; 3], u32> = HashMap::new();
            let meta = self.line_meta();
            let lines = self.lines();
            for &(a, b, pi) in meta {
                let va = self.d[a as usize].vector();
                let vb = self.d[b as usize].vector();
                for c in [va + vb, va - vb] {
                    let ci = self.d_index[c.encode() as usize];
                    let mut key = [a, b, ci];
                    key.sort();
                    seen.entry(key).or_insert(pi);
                }
            }
            let mut keys: Vec<([u32; 3], u32)> = seen.into_iter().collect();
            keys.sort();
            let pl = self.planes();
            let out: Vec<TriplePoint> = keys
                .iter()
                .map(|&(k, pi)| {
                    let f = lines[self.line_index(k[0] as usize, k[1] as usize).expect("sub-line")].cusp.f;
                    TriplePoint {
                        d: k.map(|i| self.d[i as usize]),
                        cusp: CuspPoint { plane: pl[pi as usize].plane, f },
                    }
                })
                .collect();
            let index = keys.iter().enumerate().map(|(i, (k, _))| (*k, i as u32)).collect();
            (out, index, keys)
        })
    }

    pub fn triples(&self) -> &[TriplePoint] {
        &self.triple_table().0
    }

    /// `(sorted d indices, plane index)` per triple point.
    pub fn triple_meta(&self) -> &[([u32; 3], u32)] {
        &self.triple_table().2
    }

    pub fn triple_index(&self, mut key: [u32; 3]) -> Option<usize> {
        key.sort();
        self.triple_table().1.get(&key).map(|&i| i as usize)
    }

    pub fn e_divisors(&self) -> &[DivisorE] {
        &self
            .e
            .get_or_init(|| {
                let v = enumerate_e(self.n).expect("valid level");
                let m = v.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
                (v, m)
            })
            .0
    }

    pub fn e_index(&self, e: &DivisorE) -> Option<usize> {
        self.e_divisors();
        self.e.get().and_then(|(_, m)| m.get(e)).map(|&i| i as usize)
    }

    pub fn f_divisors(&self) -> &[DivisorF] {
        &self
            .f
            .get_or_init(|| {
                let v = enumerate_f(self.n).expect("valid level");
                let m = v.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
                (v, m)
            })
            .0
    }

    pub fn f_index(&self, f: &DivisorF) -> Option<usize> {
        self.f_divisors();
        self.f.get().and_then(|(_, m)| m.get(f)).map(|&i| i as usize)
    }

    /// Permutation of the divisors D induced by `g`.
    pub fn d_permutation(&self, g: &GroupElement) -> Vec<u32> {
        self.d.iter().map(|x| self.d_index[g.apply(&x.vector()).encode() as usize]).collect()
    }
}

/// Per-family counts at one level.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FamilyCounts {
    pub level: u32,
    pub d: usize,
    pub cusps: usize,
    pub e: usize,
    pub f: usize,
    pub lines: usize,
    pub triples: usize,
}

impl Atlas {
    pub fn counts(&self) -> FamilyCounts {
        FamilyCounts {
            level: self.n,
            d: self.d.len(),
            cusps: self.cusps().len(),
            e: self.e_divisors().len(),
            f: self.f_divisors().len(),
            lines: self.lines().len(),
            triples: self.triples().len(),
        }
    }
}

/// `n^4 prod (1 - p^-4) / 2`.
pub fn d_count_formula(n: u32) -> u64 {
    let mut r = (n as u64).pow(4);
    for (p, _) in crate::modular::factorize(n as u64) {
        r = r / p.pow(4) * (p.pow(4) - 1);
    }
    r / 2
}

/// `2^-3 n^7 (1 - p^-4)(1 - p^-2)`, extended multiplicatively over the primes of n.
pub fn line_count_formula(n: u32) -> u64 {
    let mut r = (n as u64).pow(7);
    for (p, _) in crate::modular::factorize(n as u64) {
        r = r / p.pow(4) * (p.pow(4) - 1);
        r = r / p.pow(2) * (p.pow(2) - 1);
    }
    r / 8
}
