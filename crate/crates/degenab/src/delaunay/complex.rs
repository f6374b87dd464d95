//! The full Delaunay decomposition modulo a finite-index sublattice: breadth
//! first search over full-dimensional cells via parametric pivots, closure
//! under faces, canonical representatives, and the face poset.
//!
//! Completeness is certified internally: the volumes of the top-dimensional
//! classes must add up to the covolume of the quotient lattice exactly, and
//! every cell's center must reproduce the cell through the enumerator.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Rat};

use super::cell::{delaunay_cell, equidistance_directions, hole_center, next_event};
use super::{ratlin, DelaunayCell, DelaunayError, Form};

/// A finite-index sublattice `Y` of `Z^g`, columns as generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sublattice {
    cols: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn new(cols: Vec<Vec<i64>>) -> Result<Self, DelaunayError> {
        let g = cols.len();
        if cols.iter().any(|c| c.len() != g) {
            return Err(DelaunayError::DimensionMismatch(g, 0));
        }
        let s = Sublattice { cols };
        if s.det_abs().is_zero() {
            return Err(DelaunayError::InfiniteIndex);
        }
        Ok(s)
    }

    pub fn full(g: usize) -> Self {
        let cols = (0..g)
            .map(|i| {
                let mut c = vec![0i64; g];
                c[i] = 1;
                c
            })
            .collect();
        Sublattice { cols }
    }

    pub fn cols(&self) -> &Vec<Vec<i64>> {
        &self.cols
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// `|det Y|`, the index of `Y` in `Z^g`.
    pub fn det_abs(&self) -> Rat {
        let g = self.rank();
        let rows: Vec<Vec<Rat>> = (0..g)
            .map(|i| (0..g).map(|j| rat(self.cols[j][i])).collect())
            .collect();
        ratlin::det(&rows).abs()
    }

    /// The lattice vector `Y k` for integer coordinates `k`.
    pub fn vector(&self, k: &[i64]) -> Vec<i64> {
        let g = self.rank();
        (0..g)
            .map(|i| (0..g).map(|j| self.cols[j][i] * k[j]).sum())
            .collect()
    }

    /// Coordinates of an integer point in the `Y` basis (rational).
    pub fn coords(&self, p: &[i64]) -> Vec<Rat> {
        let g = self.rank();
        let rows: Vec<Vec<Rat>> = (0..g)
            .map(|i| (0..g).map(|j| rat(self.cols[j][i])).collect())
            .collect();
        let rhs: Vec<Rat> = p.iter().map(|&x| rat(x)).collect();
        ratlin::solve(&rows, &rhs).expect("sublattice basis is invertible")
    }

    /// The shift `-Y floor(Y^-1 b)` that moves `b` into the half-open
    /// fundamental parallelepiped `{Y c : c in [0, 1)^g}`.
    pub fn reduction_shift(&self, b: &[i64]) -> Vec<i64> {
        let c = self.coords(b);
        let k: Vec<i64> = c
            .iter()
            .map(|x| {
                let f = x.floor();
                i64::try_from(f.numer() / f.denom()).expect("coordinate overflow")
            })
            .collect();
        self.vector(&k).iter().map(|&v| -v).collect()
    }

    /// Representatives of `Z^g / Y` inside the fundamental parallelepiped,
    /// in sorted order.
    pub fn residues(&self) -> Vec<Vec<i64>> {
        let g = self.rank();
        let bound: i64 = self
            .cols
            .iter()
            .flat_map(|c| c.iter().map(|x| x.abs()))
            .sum::<i64>()
            .max(1);
        let mut out = Vec::new();
        let mut x = vec![0i64; g];
        enumerate_box(&mut x, 0, -bound, bound, &mut |p| {
            if self.reduction_shift(p).iter().all(|&s| s == 0) {
                out.push(p.to_vec());
            }
        });
        out.sort();
        assert_eq!(
            rat(out.len() as i64),
            self.det_abs(),
            "residue count must equal |det Y|"
        );
        out
    }

    /// Reduce a point to its canonical residue representative.
    pub fn reduce_point(&self, p: &[i64]) -> Vec<i64> {
        let s = self.reduction_shift(p);
        p.iter().zip(&s).map(|(a, b)| a + b).collect()
    }
}

fn enumerate_box(x: &mut Vec<i64>, level: usize, lo: i64, hi: i64, f: &mut impl FnMut(&[i64])) {
    if level == x.len() {
        f(x);
        return;
    }
    for v in lo..=hi {
        x[level] = v;
        enumerate_box(x, level + 1, lo, hi, f);
    }
}

/// Canonicalize a vertex set modulo `Y`: the unique translate whose
/// lexicographically least vertex lies in the fundamental parallelepiped.
/// Returns the canonical vertex set and the shift that was applied.
pub(crate) fn canonicalize_vertices(
    y: &Sublattice,
    vertices: &[Vec<i64>],
) -> (Vec<Vec<i64>>, Vec<i64>) {
    let b = vertices.iter().min().expect("cell has vertices");
    let shift = y.reduction_shift(b);
    let mut out: Vec<Vec<i64>> = vertices
        .iter()
        .map(|v| v.iter().zip(&shift).map(|(a, b)| a + b).collect())
        .collect();
    out.sort();
    (out, shift)
}

// ------------------------------------------------------------ face lattice

/// Affine coordinates of a vertex set within its own affine hull.
fn affine_coords(vertices: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let v0 = &vertices[0];
    let dim = DelaunayCell::dimension_of(vertices);
    if dim == 0 {
        return vec![vec![]; vertices.len()];
    }
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for v in &vertices[1..] {
        let d: Vec<i64> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
        let mut cand: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| b.iter().map(|&x| rat(x)).collect())
            .collect();
        cand.push(d.iter().map(|&x| rat(x)).collect());
        if ratlin::rank(&cand) == basis.len() + 1 {
            basis.push(d);
        }
        if basis.len() == dim {
            break;
        }
    }
    assert_eq!(basis.len(), dim);
    let g = v0.len();
    let rows: Vec<Vec<Rat>> = (0..g)
        .map(|i| basis.iter().map(|b| rat(b[i])).collect())
        .collect();
    vertices
        .iter()
        .map(|v| {
            let rhs: Vec<Rat> = v.iter().zip(v0).map(|(a, b)| rat(a - b)).collect();
            ratlin::solve(&rows, &rhs).expect("vertex lies in the affine hull")
        })
        .collect()
}

/// Facets ((dim-1)-faces) of a cell given by its vertex set.
pub(crate) fn facets_of(vertices: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let dim = DelaunayCell::dimension_of(vertices);
    if dim == 0 {
        return vec![];
    }
    if dim == 1 {
        let mut vs = vertices.to_vec();
        vs.sort();
        return vec![vec![vs[0].clone()], vec![vs[vs.len() - 1].clone()]];
    }
    let coords = affine_coords(vertices);
    let n = vertices.len();
    let mut found: BTreeMap<Vec<Vec<i64>>, ()> = BTreeMap::new();
    for subset in combinations(n, dim) {
        let p0 = &coords[subset[0]];
        let rows: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&i| coords[i].iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect();
        let ker = ratlin::kernel(&rows, dim);
        if ker.len() != 1 {
            continue;
        }
        let normal = &ker[0];
        let offset: Rat = normal.iter().zip(p0).map(|(a, b)| a * b).sum();
        let mut pos = false;
        let mut neg = false;
        let mut on = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            let v: Rat = normal.iter().zip(c).map(|(a, b)| a * b).sum::<Rat>() - &offset;
            if v.is_zero() {
                on.push(vertices[i].clone());
            } else if v.is_positive() {
                pos = true;
            } else {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        on.sort();
        found.entry(on).or_insert(());
    }
    found.into_keys().collect()
}

/// All proper faces of a cell (every dimension), as sorted vertex sets.
pub(crate) fn proper_faces(vertices: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let mut seen: BTreeMap<Vec<Vec<i64>>, ()> = BTreeMap::new();
    let mut queue = vec![vertices.to_vec()];
    while let Some(v) = queue.pop() {
        for f in facets_of(&v) {
            if seen.insert(f.clone(), ()).is_none() {
                queue.push(f);
            }
        }
    }
    seen.into_keys().collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if n - start < k - cur.len() {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Euclidean volume of a full-dimensional lattice polytope, by coning the
/// lex-least vertex over a recursive triangulation of the facets.
pub(crate) fn volume_of(vertices: &[Vec<i64>]) -> Rat {
    let g = vertices[0].len();
    let dim = DelaunayCell::dimension_of(vertices);
    assert_eq!(dim, g, "volume of a non-full-dimensional cell");
    let simplices = triangulate(vertices);
    let mut vol = Rat::zero();
    let factorial: i64 = (1..=g as i64).product();
    for s in simplices {
        let rows: Vec<Vec<Rat>> = s[1..]
            .iter()
            .map(|v| v.iter().zip(&s[0]).map(|(a, b)| rat(a - b)).collect())
            .collect();
        vol += ratlin::det(&rows).abs() / rat(factorial);
    }
    vol
}

fn triangulate(vertices: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let dim = DelaunayCell::dimension_of(vertices);
    if vertices.len() == dim + 1 {
        return vec![vertices.to_vec()];
    }
    let apex = vertices.iter().min().unwrap().clone();
    let mut out = Vec::new();
    for facet in facets_of(vertices) {
        if facet.contains(&apex) {
            continue;
        }
        for sub in triangulate(&facet) {
            let mut s = sub;
            s.push(apex.clone());
            out.push(s);
        }
    }
    out
}

// ------------------------------------------------------------- the complex

/// A Delaunay decomposition modulo a sublattice: one canonical
/// representative per translation class, with the full face poset.
#[derive(Clone, Debug, PartialEq)]
pub struct DelaunayComplex {
    pub form: Form,
    pub quotient: Sublattice,
    /// Canonical representatives, sorted by (dim, vertices).
    pub cells: Vec<DelaunayCell>,
    /// All proper face pairs `(i, j)`: cell `i` is a face of a translate of
    /// cell `j`.
    pub faces: Vec<(usize, usize)>,
}

impl DelaunayComplex {
    pub fn counts_per_dim(&self) -> Vec<usize> {
        let g = self.form.rank();
        let mut counts = vec![0usize; g + 1];
        for c in &self.cells {
            counts[c.dim] += 1;
        }
        counts
    }

    /// `sum (-1)^d #cells_d`; zero for a torus quotient.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts_per_dim()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &DelaunayCell)> {
        self.cells.iter().enumerate().filter(move |(_, c)| c.dim == d)
    }

    /// Indices of the dimension-`dim` cells having cell `i` as a face.
    pub fn cofaces_of(&self, i: usize, dim: usize) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|&&(a, b)| a == i && self.cells[b].dim == dim)
            .map(|&(_, b)| b)
            .collect()
    }

    /// The poset signature: cell vertex sets grouped with their face pairs;
    /// two complexes are isomorphic as labeled posets iff these agree.
    pub fn canonical_signature(&self) -> (Vec<Vec<Vec<i64>>>, Vec<(usize, usize)>) {
        (self.cells.iter().map(|c| c.vertices.clone()).collect(), self.faces.clone())
    }

    pub fn report(&self) -> ComplexReport {
        ComplexReport {
            schema: "degenab/1".to_string(),
            rank: self.form.rank(),
            gram: self.form.gram().clone(),
            quotient: self.quotient.cols().clone(),
            cells: self
                .cells
                .iter()
                .map(|c| CellReport {
                    dim: c.dim,
                    vertices: c.vertices.clone(),
                    center: c.center.iter().map(|r| r.to_string()).collect(),
                })
                .collect(),
            faces: self.faces.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// JSON form of a [`DelaunayComplex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub schema: String,
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub quotient: Vec<Vec<i64>>,
    pub cells: Vec<CellReport>,
    pub faces: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub center: Vec<String>,
}

/// Compute the full Delaunay decomposition of `Z^g` for `form`, up to
/// translation by the sublattice `quotient`.
///
/// Strategy: grow an initial full-dimensional cell from a generic point by
/// equidistance pivots, then walk across facets by exact parametric pivots
/// of the closest-vector enumerator. Faces are certified by recomputing
/// each cell from a relative-interior point of its dual cell (the average
/// of its cofaces' hole centers).
pub fn delaunay_complex(
    form: &Form,
    quotient: &Sublattice,
) -> Result<DelaunayComplex, DelaunayError> {
    let g = form.rank();
    if quotient.rank() != g {
        return Err(DelaunayError::DimensionMismatch(g, quotient.rank()));
    }

    // initial cell: grow from a generic point near the origin
    let denoms = [97i64, 89, 83, 79, 73, 71];
    let lam0: Vec<Rat> = (0..g).map(|i| Rat::new(1.into(), denoms[i].into())).collect();
    let mut cell = delaunay_cell(form, &lam0);
    while cell.dim < g {
        let dirs = equidistance_directions(form, &cell.vertices);
        assert!(!dirs.is_empty());
        let mut dir = vec![Rat::zero(); g];
        for (j, d) in dirs.iter().enumerate() {
            let w = Rat::new(1.into(), num_bigint::BigInt::from(3i64.pow(j as u32)));
            for i in 0..g {
                dir[i] += &d[i] * &w;
            }
        }
        let (t, verts) = next_event(form, &cell.center, &dir, &cell.vertices);
        let lam: Vec<Rat> = cell.center.iter().zip(&dir).map(|(a, b)| a + b * &t).collect();
        let dim = DelaunayCell::dimension_of(&verts);
        assert!(dim > cell.dim, "pivot must increase cell dimension");
        cell = DelaunayCell { vertices: verts, dim, center: lam };
    }

    // BFS over full-dimensional classes; keys are canonical vertex sets
    let (start_verts, _) = canonicalize_vertices(quotient, &cell.vertices);
    let mut top: BTreeMap<Vec<Vec<i64>>, Vec<Rat>> = BTreeMap::new(); // verts -> hole center
    let mut queue = VecDeque::new();
    let c0 = hole_center(form, &start_verts);
    top.insert(start_verts.clone(), c0);
    queue.push_back(start_verts);
    while let Some(sigma) = queue.pop_front() {
        let center = top[&sigma].clone();
        for facet in facets_of(&sigma) {
            let dirs = equidistance_directions(form, &facet);
            assert_eq!(dirs.len(), 1, "facet equidistance space must be a line");
            let mut dir = dirs[0].clone();
            // orient away from sigma
            let w = sigma.iter().find(|v| !facet.contains(v)).expect("facet is proper");
            let v0 = &facet[0];
            let dx: Vec<i64> = w.iter().zip(v0).map(|(a, b)| a - b).collect();
            let side = form.eval_mixed(&dir, &dx);
            assert!(!side.is_zero(), "off-facet vertex cannot be equidistant");
            if side.is_positive() {
                for d in dir.iter_mut() {
                    *d = -d.clone();
                }
            }
            let (_, verts) = next_event(form, &center, &dir, &facet);
            assert_eq!(
                DelaunayCell::dimension_of(&verts),
                g,
                "facet pivot must land on a full-dimensional cell"
            );
            let (canon, _) = canonicalize_vertices(quotient, &verts);
            if !top.contains_key(&canon) {
                let hc = hole_center(form, &canon);
                top.insert(canon.clone(), hc);
                queue.push_back(canon);
            }
        }
    }

    // volume certificate: classes tile the torus exactly once
    let total: Rat = top.keys().map(|v| volume_of(v)).sum();
    assert_eq!(
        total,
        quotient.det_abs(),
        "cell class volumes must sum to the covolume: enumeration incomplete"
    );

    // faces of top cells, with the coface hole centers accumulated per class
    let mut face_centers: BTreeMap<Vec<Vec<i64>>, Vec<Vec<Rat>>> = BTreeMap::new();
    let mut pairs: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = Vec::new();
    for (sigma, hc) in &top {
        for fv in proper_faces(sigma) {
            let (canon, shift) = canonicalize_vertices(quotient, &fv);
            // the coface sigma - shift contains the canonical face; its hole
            // center is hc + shift
            let shifted: Vec<Rat> = hc.iter().zip(&shift).map(|(c, s)| c + rat(*s)).collect();
            face_centers.entry(canon.clone()).or_default().push(shifted);
            pairs.push((canon, sigma.clone()));
        }
    }
    // face pairs among lower-dimensional classes
    let face_keys: Vec<Vec<Vec<i64>>> = face_centers.keys().cloned().collect();
    for fv in &face_keys {
        for sub in proper_faces(fv) {
            let (canon, _) = canonicalize_vertices(quotient, &sub);
            pairs.push((canon, fv.clone()));
        }
    }

    // assemble cells: top classes plus face classes with certified centers
    let mut cells: Vec<DelaunayCell> = Vec::new();
    for (verts, hc) in &top {
        let cert = delaunay_cell(form, hc);
        assert_eq!(&cert.vertices, verts, "hole center fails to certify top cell");
        cells.push(DelaunayCell { vertices: verts.clone(), dim: g, center: hc.clone() });
    }
    for (verts, centers) in &face_centers {
        // relative-interior point of the dual cell: average of its vertices,
        // which are exactly the hole centers of the maximal cofaces
        let mut dedup = centers.clone();
        dedup.sort();
        dedup.dedup();
        let n = rat(dedup.len() as i64);
        let avg: Vec<Rat> = (0..g)
            .map(|i| dedup.iter().map(|c| c[i].clone()).sum::<Rat>() / &n)
            .collect();
        let cert = delaunay_cell(form, &avg);
        assert_eq!(&cert.vertices, verts, "coface average fails to certify face cell");
        cells.push(DelaunayCell {
            vertices: verts.clone(),
            dim: DelaunayCell::dimension_of(verts),
            center: avg,
        });
    }
    cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));

    let index: HashMap<Vec<Vec<i64>>, usize> =
        cells.iter().enumerate().map(|(i, c)| (c.vertices.clone(), i)).collect();
    let mut faces: Vec<(usize, usize)> =
        pairs.into_iter().map(|(f, c)| (index[&f], index[&c])).collect();
    faces.sort();
    faces.dedup();

    Ok(DelaunayComplex { form: form.clone(), quotient: quotient.clone(), cells, faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn square() -> Form {
        Form::new(vec![vec![2, 0], vec![0, 2]]).unwrap()
    }

    fn hexagonal() -> Form {
        Form::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    #[test]
    fn square_census_mod_x() {
        let c = delaunay_complex(&square(), &Sublattice::full(2)).unwrap();
        assert_eq!(c.counts_per_dim(), vec![1, 2, 1]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn hexagonal_census_mod_x() {
        let c = delaunay_complex(&hexagonal(), &Sublattice::full(2)).unwrap();
        assert_eq!(c.counts_per_dim(), vec![1, 3, 2]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn rank_one_three_gon() {
        let f = Form::new(vec![vec![2]]).unwrap();
        let y = Sublattice::new(vec![vec![3]]).unwrap();
        let c = delaunay_complex(&f, &y).unwrap();
        assert_eq!(c.counts_per_dim(), vec![3, 3]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn square_mod_3x() {
        let y = Sublattice::new(vec![vec![3, 0], vec![0, 3]]).unwrap();
        let c = delaunay_complex(&square(), &y).unwrap();
        assert_eq!(c.counts_per_dim(), vec![9, 18, 9]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn face_poset_square() {
        let c = delaunay_complex(&square(), &Sublattice::full(2)).unwrap();
        let top = c.cells.iter().position(|x| x.dim == 2).unwrap();
        let facet_count = c
            .faces
            .iter()
            .filter(|&&(a, b)| b == top && c.cells[a].dim == 1)
            .count();
        assert_eq!(facet_count, 2);
    }

    #[test]
    fn fundamental_domain_residues() {
        let y = Sublattice::new(vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(y.residues().len(), 6);
        let y = Sublattice::new(vec![vec![1, 1], vec![-1, 1]]).unwrap();
        assert_eq!(y.residues().len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let c = delaunay_complex(&hexagonal(), &Sublattice::full(2)).unwrap();
        let rep = c.report();
        let s = serde_json::to_string(&rep).unwrap();
        let back: ComplexReport = serde_json::from_str(&s).unwrap();
        assert_eq!(rep, back);
    }

    #[test]
    fn a3_rank_three() {
        let f = Form::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        let c = delaunay_complex(&f, &Sublattice::full(3)).unwrap();
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(c.counts_per_dim()[0], 1);
        // A3 tiles by two tetrahedra and one octahedron per class
        assert_eq!(c.counts_per_dim()[3], 3);
    }

    #[test]
    fn interval_cell_in_square_form() {
        let lam = [ratio(1, 2), ratio(1, 3)];
        let cell = delaunay_cell(&square(), &lam);
        assert_eq!(cell.vertices, vec![vec![0, 0], vec![1, 0]]);
    }
}
