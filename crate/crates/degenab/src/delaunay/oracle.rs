//! Independent verification oracle: the Delaunay decomposition as the lower
//! convex hull of box lattice points lifted to `(x, B(x, x))`, computed by
//! exact gift-wrapping. Used in tests against [`super::delaunay_complex`].
//!
//! All pivot predicates run in exact `i128` arithmetic (supports are stored
//! as integer affine functions over a common denominator), and every facet
//! carries a certificate that its supporting function stays below the
//! paraboloid over the whole infinite lattice.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::exact::{rat, Rat};

use super::complex::{
    canonicalize_vertices, facets_of, proper_faces, volume_of, DelaunayComplex, Sublattice,
};
use super::{ratlin, DelaunayCell, DelaunayError, Form};

/// A lifted point `(x, h)` with `h = B(x, x)`.
#[derive(Clone, Debug, PartialEq)]
struct Lifted {
    x: Vec<i64>,
    h: i64,
}

/// A supporting affine function `l(x) = (a . x + b) / den`, `den > 0`,
/// gcd-reduced, with `h >= l(x)` on the point set.
#[derive(Clone, Debug, PartialEq)]
struct Support {
    a: Vec<i128>,
    b: i128,
    den: i128,
}

impl Support {
    /// `den * (h - l(x))`, an integer with the sign of the slack.
    fn slack_num(&self, p: &Lifted) -> i128 {
        let mut acc = self.den * p.h as i128 - self.b;
        for (ai, &xi) in self.a.iter().zip(&p.x) {
            acc -= ai * xi as i128;
        }
        acc
    }

    fn reduce(&mut self) {
        let mut g = self.den.unsigned_abs();
        for ai in &self.a {
            g = gcd_u128(g, ai.unsigned_abs());
        }
        g = gcd_u128(g, self.b.unsigned_abs());
        if g > 1 {
            let g = g as i128;
            for ai in self.a.iter_mut() {
                *ai /= g;
            }
            self.b /= g;
            self.den /= g;
        }
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = std::mem::replace(&mut b, t);
    }
    a
}

/// An integer affine functional `u(x) = m . x + c`.
#[derive(Clone, Debug)]
struct Functional {
    m: Vec<i128>,
    c: i128,
}

impl Functional {
    fn eval(&self, x: &[i64]) -> i128 {
        let mut acc = self.c;
        for (mi, &xi) in self.m.iter().zip(x) {
            acc += mi * xi as i128;
        }
        acc
    }

    fn negated(&self) -> Functional {
        Functional { m: self.m.iter().map(|v| -v).collect(), c: -self.c }
    }
}

fn tight_vertices(points: &[Lifted], support: &Support) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .filter(|p| support.slack_num(p) == 0)
        .map(|p| p.x.clone())
        .collect();
    out.sort();
    out
}

/// An integer affine functional vanishing on a set of points whose affine
/// span is a proper subspace.
fn vanishing_functional(points: &[&Vec<i64>]) -> Functional {
    let g = points[0].len();
    let p0 = points[0];
    let rows: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| rat(a - b)).collect())
        .collect();
    let ker = ratlin::kernel(&rows, g);
    assert!(!ker.is_empty(), "no vanishing functional: points affinely span");
    // scale to integers
    let mut lcm: num_bigint::BigInt = 1.into();
    for v in &ker[0] {
        lcm = num_integer::lcm(lcm, v.denom().clone());
    }
    let m: Vec<i128> = ker[0]
        .iter()
        .map(|v| i128::try_from(v.numer() * (&lcm / v.denom())).expect("functional overflow"))
        .collect();
    let c: i128 = -m.iter().zip(p0).map(|(mi, &v)| mi * v as i128).sum::<i128>();
    Functional { m, c }
}

/// Rotate the support about a sub-face: among the points on the `u < 0`
/// side, pick the one whose crossing parameter is largest (closest to zero)
/// and tilt onto it. Returns `None` when there are no points on that side.
fn rotate(points: &[Lifted], support: &Support, u: &Functional) -> Option<Support> {
    // maximize s = slack / (den * u) over u < 0, all s <= 0:
    // compare slack_i * |u_j| vs slack_j * |u_i|, pick the minimum of
    // slack * |u_other|, i.e. the largest fraction.
    let mut best: Option<(i128, i128)> = None; // (slack_num, |u|)
    for p in points {
        let uv = u.eval(&p.x);
        if uv >= 0 {
            continue;
        }
        let slack = support.slack_num(p);
        debug_assert!(slack >= 0);
        let uabs = -uv;
        let better = match &best {
            None => true,
            // s = -slack/(den*uabs): larger s  <=>  slack/uabs smaller
            Some((bs, bu)) => slack * bu < bs * uabs,
        };
        if better {
            best = Some((slack, uabs));
        }
    }
    let (slack_k, u_k_abs) = best?;
    // l' = l + s* u with s* = -slack_k / (den * u_k_abs):
    // l'(x) = [ (a.x + b) u_k_abs - slack_k (m.x + c) ] / (den u_k_abs)
    let mut next = Support {
        a: support
            .a
            .iter()
            .zip(&u.m)
            .map(|(ai, mi)| ai * u_k_abs - slack_k * mi)
            .collect(),
        b: support.b * u_k_abs - slack_k * u.c,
        den: support.den * u_k_abs,
    };
    next.reduce();
    Some(next)
}

/// Find one lower-hull facet by starting at the lifted origin (the global
/// minimum of the paraboloid) and rotating in at most `g` steps.
fn initial_facet(points: &[Lifted], g: usize) -> Support {
    let mut support = Support { a: vec![0; g], b: 0, den: 1 };
    loop {
        let tight = tight_vertices(points, &support);
        if DelaunayCell::dimension_of(&tight) == g {
            return support;
        }
        let refs: Vec<&Vec<i64>> = tight.iter().collect();
        let u = vanishing_functional(&refs);
        match rotate(points, &support, &u) {
            Some(s) => support = s,
            None => {
                support = rotate(points, &support, &u.negated())
                    .expect("box points affinely span in every direction");
            }
        }
    }
}

/// Certify that `h(x) = B(x, x) >= l(x)` holds over the whole infinite
/// lattice, not just the box. Completing the square at the real minimum
/// `c = (2G)^-1 a/den` gives `B(x,x) - l(x) = B(x-c, x-c) - m` with
/// `m = B(c,c) + b/den`, and `B(v,v) >= delta (|x|_inf - |c|_inf)^2`, so
/// positivity beyond the box reduces to one rational inequality.
fn certify_infinite(form: &Form, support: &Support, radius: i64) -> bool {
    let g = form.rank();
    let delta = form.min_eigenvalue_lower_bound();
    let a_rat: Vec<Rat> = support
        .a
        .iter()
        .map(|&v| {
            Rat::new(
                num_bigint::BigInt::from(v),
                num_bigint::BigInt::from(support.den),
            )
        })
        .collect();
    let b_rat = Rat::new(
        num_bigint::BigInt::from(support.b),
        num_bigint::BigInt::from(support.den),
    );
    let rows: Vec<Vec<Rat>> = (0..g)
        .map(|i| (0..g).map(|j| rat(2 * form.gram()[i][j])).collect())
        .collect();
    let Some(c) = ratlin::solve(&rows, &a_rat) else {
        return false;
    };
    let m = form.eval_rat(&c, &c) + b_rat;
    let c_inf = c.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero);
    let s = rat(radius + 1);
    if s <= c_inf {
        return false;
    }
    let gap = &s - &c_inf;
    &delta * &gap * &gap > m
}

/// Compute the Delaunay decomposition mod `X` by lifting box points to the
/// paraboloid and gift-wrapping the lower hull; `box_radius >= 2`, rank at
/// most 3. Returns `BoxTooSmall` when a needed cell touches the box
/// boundary or a facet cannot be certified against the infinite lattice.
pub fn delaunay_oracle(form: &Form, box_radius: i64) -> Result<DelaunayComplex, DelaunayError> {
    let g = form.rank();
    assert!(g <= 3, "oracle supports rank <= 3");
    assert!(box_radius >= 2, "box radius must be at least 2");
    let quotient = Sublattice::full(g);

    let mut points = Vec::new();
    let mut x = vec![0i64; g];
    fill_box(&mut x, 0, box_radius, &mut |p| {
        points.push(Lifted { x: p.to_vec(), h: form.eval_int(p, p) });
    });

    let first = initial_facet(&points, g);
    let first_verts = tight_vertices(&points, &first);
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut interior: BTreeMap<Vec<Vec<i64>>, Support> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(first_verts.clone());
    queue.push_back((first_verts, first));
    while let Some((verts, support)) = queue.pop_front() {
        let is_interior = verts
            .iter()
            .all(|v| v.iter().all(|&c| c.abs() <= box_radius - 1));
        if !is_interior {
            continue; // neither expanded nor counted
        }
        if !certify_infinite(form, &support, box_radius) {
            return Err(DelaunayError::BoxTooSmall(box_radius));
        }
        interior.insert(verts.clone(), support.clone());
        for ridge in facets_of(&verts) {
            let refs: Vec<&Vec<i64>> = ridge.iter().collect();
            let u = vanishing_functional(&refs);
            // orient u > 0 on the current facet's off-ridge vertices
            let w = verts.iter().find(|v| !ridge.contains(v)).expect("ridge is proper");
            let uval = u.eval(w);
            assert!(uval != 0);
            let u = if uval > 0 { u } else { u.negated() };
            let Some(next) = rotate(&points, &support, &u) else {
                continue; // ridge on the box boundary
            };
            let nverts = tight_vertices(&points, &next);
            if seen.insert(nverts.clone()) {
                queue.push_back((nverts, next));
            }
        }
    }

    // census: canonical classes mod X with the exact-volume certificate
    let mut classes: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    for verts in interior.keys() {
        let (canon, _) = canonicalize_vertices(&quotient, verts);
        classes.insert(canon);
    }
    let total: Rat = classes.iter().map(|v| volume_of(v)).sum();
    if total != quotient.det_abs() {
        return Err(DelaunayError::BoxTooSmall(box_radius));
    }

    // faces and poset
    let mut cells: Vec<DelaunayCell> = Vec::new();
    let mut have: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut pairs: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = Vec::new();
    for verts in &classes {
        if have.insert(verts.clone()) {
            cells.push(DelaunayCell {
                vertices: verts.clone(),
                dim: g,
                center: barycenter(verts),
            });
        }
        for fv in proper_faces(verts) {
            let (canon, _) = canonicalize_vertices(&quotient, &fv);
            pairs.push((canon.clone(), verts.clone()));
            if have.insert(canon.clone()) {
                cells.push(DelaunayCell {
                    vertices: canon.clone(),
                    dim: DelaunayCell::dimension_of(&canon),
                    center: barycenter(&canon),
                });
            }
        }
    }
    let lower: Vec<Vec<Vec<i64>>> = cells
        .iter()
        .filter(|c| c.dim < g)
        .map(|c| c.vertices.clone())
        .collect();
    for fv in &lower {
        for sub in proper_faces(fv) {
            let (canon, _) = canonicalize_vertices(&quotient, &sub);
            pairs.push((canon, fv.clone()));
        }
    }
    cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let index: std::collections::HashMap<Vec<Vec<i64>>, usize> =
        cells.iter().enumerate().map(|(i, c)| (c.vertices.clone(), i)).collect();
    let mut faces: Vec<(usize, usize)> =
        pairs.into_iter().map(|(f, c)| (index[&f], index[&c])).collect();
    faces.sort();
    faces.dedup();

    Ok(DelaunayComplex { form: form.clone(), quotient, cells, faces })
}

fn barycenter(vertices: &[Vec<i64>]) -> Vec<Rat> {
    let g = vertices[0].len();
    let n = rat(vertices.len() as i64);
    (0..g)
        .map(|i| vertices.iter().map(|v| rat(v[i])).sum::<Rat>() / &n)
        .collect()
}

fn fill_box(x: &mut Vec<i64>, level: usize, r: i64, f: &mut impl FnMut(&[i64])) {
    if level == x.len() {
        f(x);
        return;
    }
    for v in -r..=r {
        x[level] = v;
        fill_box(x, level + 1, r, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::delaunay_complex;

    #[test]
    fn oracle_square_counts() {
        let f = Form::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let c = delaunay_oracle(&f, 3).unwrap();
        assert_eq!(c.counts_per_dim(), vec![1, 2, 1]);
    }

    #[test]
    fn oracle_hexagonal_counts() {
        let f = Form::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let c = delaunay_oracle(&f, 3).unwrap();
        assert_eq!(c.counts_per_dim(), vec![1, 3, 2]);
    }

    #[test]
    fn oracle_rank_one_intervals() {
        let f = Form::new(vec![vec![2]]).unwrap();
        let c = delaunay_oracle(&f, 3).unwrap();
        assert_eq!(c.counts_per_dim(), vec![1, 1]);
        assert!(c.cells.iter().any(|x| x.vertices == vec![vec![0], vec![1]]));
    }

    #[test]
    fn oracle_matches_complex_poset() {
        for gram in [
            vec![vec![2, 0], vec![0, 2]],
            vec![vec![2, -1], vec![-1, 2]],
            vec![vec![4, 1], vec![1, 2]],
            vec![vec![2, 1], vec![1, 4]],
        ] {
            let f = Form::new(gram).unwrap();
            let oracle = delaunay_oracle(&f, 3).unwrap();
            let complex = delaunay_complex(&f, &Sublattice::full(2)).unwrap();
            assert_eq!(
                oracle.canonical_signature(),
                complex.canonical_signature(),
                "oracle and walk disagree for {:?}",
                f.gram()
            );
        }
    }

    #[test]
    fn oracle_rank_three_a3() {
        let f = Form::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        let oracle = delaunay_oracle(&f, 2).unwrap();
        let complex = delaunay_complex(&f, &Sublattice::full(3)).unwrap();
        assert_eq!(oracle.canonical_signature(), complex.canonical_signature());
    }
}
