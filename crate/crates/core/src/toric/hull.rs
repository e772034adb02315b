//! Exact 3D convex hull by gift wrapping with polygonal facets.
//! Coordinates are small integers; determinants use i128.

use std::collections::{BTreeSet, HashSet, VecDeque};

pub type P3 = [i64; 3];

fn sub(a: &P3, b: &P3) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn cross(a: &[i128; 3], b: &[i128; 3]) -> [i128; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[i128; 3], b: &[i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det3(a: &P3, b: &P3, c: &P3, d: &P3) -> i128 {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(v: [i128; 3]) -> [i128; 3] {
    let g = gcd(gcd(v[0], v[1]), v[2]);
    if g == 0 {
        v
    } else {
        v.map(|x| x / g)
    }
}

/// A facet: outward primitive normal, offset, vertices counter-clockwise seen from outside.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: [i128; 3],
    pub offset: i128,
    pub vertices: Vec<P3>,
}

// Counter-clockwise 2D hull (seen from the side the normal points to) of
// coplanar points, collinear points dropped.
fn planar_hull(points: &[P3], normal: &[i128; 3]) -> Vec<P3> {
    let i = (0..3).max_by_key(|&k| normal[k].abs()).expect("three axes");
    let (a, b) = ((i + 1) % 3, (i + 2) % 3);
    let mut pts: Vec<P3> = points.to_vec();
    pts.sort_by_key(|p| (p[a], p[b]));
    pts.dedup();
    let turn = |o: &P3, p: &P3, q: &P3| -> i128 {
        (p[a] - o[a]) as i128 * (q[b] - o[b]) as i128 - (p[b] - o[b]) as i128 * (q[a] - o[a]) as i128
    };
    let mut lower: Vec<P3> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<P3> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if normal[i] < 0 {
        lower.reverse();
    }
    lower
}

fn make_facet(points: &[P3], normal: [i128; 3], anchor: &P3) -> Facet {
    let normal = primitive(normal);
    let offset = dot(&normal, &anchor.map(|x| x as i128));
    let on: Vec<P3> = points.iter().filter(|p| dot(&normal, &p.map(|x| x as i128)) == offset).copied().collect();
    Facet { normal, offset, vertices: planar_hull(&on, &normal) }
}

/// Facets of the convex hull of a full-dimensional point set, starting from a
/// known supporting facet normal.
pub fn hull_facets(points: &[P3], start_normal: [i128; 3]) -> Vec<Facet> {
    let mut pts: Vec<P3> = points.to_vec();
    pts.sort();
    pts.dedup();
    let anchor = *pts.iter().max_by_key(|p| dot(&start_normal, &p.map(|x| x as i128))).expect("nonempty");
    let first = make_facet(&pts, start_normal, &anchor);
    let mut seen: HashSet<([i128; 3], i128)> = HashSet::new();
    seen.insert((first.normal, first.offset));
    let mut queue = VecDeque::from([first]);
    let mut out = Vec::new();
    while let Some(f) = queue.pop_front() {
        let k = f.vertices.len();
        for e in 0..k {
            let u = f.vertices[e];
            let v = f.vertices[(e + 1) % k];
            // neighbour across edge u->v contains v->u; wrap around the edge
            let mut best: Option<P3> = None;
            for q in &pts {
                let c = cross(&sub(&v, &u), &sub(q, &u));
                if c == [0, 0, 0] {
                    continue;
                }
                match best {
                    None => best = Some(*q),
                    Some(p) => {
                        if det3(&v, &u, &p, q) > 0 {
                            best = Some(*q);
                        }
                    }
                }
            }
            let p = best.expect("full-dimensional point set");
            let normal = cross(&sub(&u, &v), &sub(&p, &v));
            let g = make_facet(&pts, normal, &v);
            if seen.insert((g.normal, g.offset)) {
                queue.push_back(g);
            }
        }
        out.push(f);
    }
    out
}

/// Six times the volume of the hull.
pub fn six_volume(facets: &[Facet]) -> i128 {
    let r = facets[0].vertices[0];
    let mut total = 0i128;
    for f in facets {
        let vs = &f.vertices;
        for i in 1..vs.len().saturating_sub(1) {
            total += det3(&r, &vs[0], &vs[i], &vs[i + 1]);
        }
    }
    total
}

/// Minimal elements of a finite set of points under the componentwise order.
pub fn pareto_minimal(points: &[P3]) -> Vec<P3> {
    let set: BTreeSet<P3> = points.iter().copied().collect();
    set.iter()
        .filter(|p| !set.iter().any(|q| q != *p && q[0] <= p[0] && q[1] <= p[1] && q[2] <= p[2]))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(n: i64) -> Vec<P3> {
        let mut v = Vec::new();
        for x in [0, n] {
            for y in [0, n] {
                for z in [0, n] {
                    v.push([x, y, z]);
                }
            }
        }
        v
    }

    #[test]
    fn cube_volume() {
        let mut pts = cube(3);
        pts.push([1, 1, 3]);
        pts.push([0, 1, 1]);
        pts.push([3, 3, 1]);
        let f = hull_facets(&pts, [0, 0, 1]);
        assert_eq!(f.len(), 6);
        assert_eq!(six_volume(&f), 6 * 27);
        for facet in &f {
            for p in &pts {
                assert!(dot(&facet.normal, &p.map(|x| x as i128)) <= facet.offset);
            }
        }
    }

    #[test]
    fn corner_cut() {
        // unit cube minus the corner simplex at the origin
        let mut pts = cube(1);
        pts.retain(|p| *p != [0, 0, 0]);
        let f = hull_facets(&pts, [0, 0, 1]);
        assert_eq!(six_volume(&f), 5);
    }

    #[test]
    fn tetrahedron() {
        let pts = vec![[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 0, 0], [0, 1, 1]];
        let f = hull_facets(&pts, [1, 1, 1]);
        assert_eq!(six_volume(&f), 8);
        assert_eq!(f.len(), 4);
    }
}
