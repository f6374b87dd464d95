//! The finite Heisenberg group of a finite abelian group `H`, its
//! Schroedinger representations of weight 1 and weight d, the commutator
//! pairing, commutant computations, isotypic decomposition of weight-d
//! modules, and the multiplicative cocycle identity for linearizations on
//! the projective space of the Schroedinger module.
//!
//! Group law: `(a, z, alpha) * (b, w, beta) = (a b beta(z), z + w, alpha + beta)`,
//! with `H^v` identified with `H` via `alpha(z) = zeta_N^(sum alpha_i z_i N / e_i)`.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::exact::CycNum;
use crate::linalg::Mat;

#[derive(Debug, Error, PartialEq)]
pub enum HeisError {
    #[error("elementary divisors must form a divisibility chain e_1 | e_2 | ...")]
    BadDivisors,
    #[error("center does not act by the scalar zeta_N^d")]
    NotWeightD,
    #[error("module rank {0} does not equal rank(W(0)) * N = {1} * {2}")]
    NotFree(usize, usize, usize),
    #[error("chart transition compatibility fails at {0}")]
    ChartMismatch(String),
    #[error("representation matrices must be square, of equal size, one per generator")]
    BadRep,
}

/// A finite abelian group `H = (Z/e_1) + ... + (Z/e_g)` with `e_i | e_(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianH {
    divisors: Vec<u64>,
}

impl AbelianH {
    pub fn new(divisors: Vec<u64>) -> Result<Self, HeisError> {
        if divisors.iter().any(|&e| e == 0) {
            return Err(HeisError::BadDivisors);
        }
        for w in divisors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(HeisError::BadDivisors);
            }
        }
        Ok(AbelianH { divisors })
    }

    pub fn trivial() -> Self {
        AbelianH { divisors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        AbelianH { divisors: vec![n] }
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn num_factors(&self) -> usize {
        self.divisors.len()
    }

    /// `N = prod e_i`, the order of `H`.
    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn e_min(&self) -> u64 {
        self.divisors.first().copied().unwrap_or(1)
    }

    fn reduce(&self, z: &[i64]) -> Vec<u64> {
        assert_eq!(z.len(), self.divisors.len());
        z.iter()
            .zip(&self.divisors)
            .map(|(&x, &e)| x.rem_euclid(e as i64) as u64)
            .collect()
    }

    /// All elements in mixed-radix order; this fixes the basis order
    /// `v(mu)` of the Schroedinger module.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &e in &self.divisors {
            let mut next = Vec::with_capacity(out.len() * e as usize);
            for prefix in &out {
                for k in 0..e {
                    let mut v = prefix.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn index_of(&self, z: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&x, &e) in z.iter().zip(&self.divisors) {
            idx = idx * e as usize + x as usize;
        }
        idx
    }

    /// `alpha(z) = zeta_N^(sum alpha_i z_i N / e_i)` as an exponent mod N.
    pub fn pairing_exponent(&self, alpha: &[u64], z: &[u64]) -> u64 {
        let n = self.order();
        let mut exp: u64 = 0;
        for i in 0..self.divisors.len() {
            let contrib = (alpha[i] % self.divisors[i]) * (z[i] % self.divisors[i])
                % self.divisors[i]
                * (n / self.divisors[i]);
            exp = (exp + contrib) % n;
        }
        exp
    }

    /// The character value `alpha(z)` in `Q(zeta_N)`.
    pub fn character(&self, alpha: &[u64], z: &[u64]) -> CycNum {
        let n = self.order();
        if n == 1 {
            return CycNum::one();
        }
        CycNum::root_of_unity(n, self.pairing_exponent(alpha, z) as i64)
    }
}

/// An element `(a, z, alpha)` of the Heisenberg group of `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisElem {
    pub a: CycNum,
    pub z: Vec<u64>,
    pub alpha: Vec<u64>,
}

impl HeisElem {
    pub fn new(h: &AbelianH, a: CycNum, z: &[i64], alpha: &[i64]) -> Self {
        HeisElem { a, z: h.reduce(z), alpha: h.reduce(alpha) }
    }

    pub fn identity(h: &AbelianH) -> Self {
        HeisElem {
            a: CycNum::one(),
            z: vec![0; h.num_factors()],
            alpha: vec![0; h.num_factors()],
        }
    }

    /// `(a, z, alpha) (b, w, beta) = (a b beta(z), z + w, alpha + beta)`.
    pub fn mul(&self, h: &AbelianH, rhs: &HeisElem) -> HeisElem {
        let a = &(&self.a * &rhs.a) * &h.character(&rhs.alpha, &self.z);
        let z: Vec<i64> = self.z.iter().zip(&rhs.z).map(|(&x, &y)| (x + y) as i64).collect();
        let alpha: Vec<i64> =
            self.alpha.iter().zip(&rhs.alpha).map(|(&x, &y)| (x + y) as i64).collect();
        HeisElem { a, z: h.reduce(&z), alpha: h.reduce(&alpha) }
    }

    /// `(a, z, alpha)^-1 = (a^-1 alpha(z), -z, -alpha)`.
    pub fn inverse(&self, h: &AbelianH) -> HeisElem {
        let z: Vec<i64> = self.z.iter().map(|&x| -(x as i64)).collect();
        let alpha: Vec<i64> = self.alpha.iter().map(|&x| -(x as i64)).collect();
        let a = &self.a.inv() * &h.character(&self.alpha, &self.z);
        HeisElem { a, z: h.reduce(&z), alpha: h.reduce(&alpha) }
    }
}

/// The matrix of a weight-`d` Schroedinger operator on the basis
/// `{v(mu) : mu in H^v}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerMat {
    pub weight: u64,
    pub matrix: Mat,
}

/// `U_(d,H)(a, z, alpha) v(beta) = a^d beta(z)^d v(alpha + beta)`; weight 1
/// is the Schroedinger representation itself.
pub fn schrodinger(h: &AbelianH, g: &HeisElem, d: u64) -> SchrodingerMat {
    assert!(d >= 1);
    let n = h.order() as usize;
    let elems = h.elements();
    let mut m = Mat::zeros(n, n);
    let ad = g.a.pow(d as i64);
    for (col, beta) in elems.iter().enumerate() {
        let phase = h.character(beta, &g.z).pow(d as i64);
        let target: Vec<i64> =
            g.alpha.iter().zip(beta).map(|(&x, &y)| (x + y) as i64).collect();
        let row = h.index_of(&h.reduce(&target));
        m[(row, col)] = &ad * &phase;
    }
    SchrodingerMat { weight: d, matrix: m }
}

/// The standard generators of `G_H` in a fixed order: the central
/// `(zeta_N, 0, 0)` first, then `(1, e_i, 0)`, then `(1, 0, e_i^v)`.
pub fn standard_generators(h: &AbelianH) -> Vec<HeisElem> {
    let g = h.num_factors();
    let n = h.order();
    let zero = vec![0i64; g];
    let mut gens = vec![HeisElem::new(h, CycNum::root_of_unity(n.max(1), 1), &zero, &zero)];
    for i in 0..g {
        let mut e = vec![0i64; g];
        e[i] = 1;
        gens.push(HeisElem::new(h, CycNum::one(), &e, &zero));
    }
    for i in 0..g {
        let mut e = vec![0i64; g];
        e[i] = 1;
        gens.push(HeisElem::new(h, CycNum::one(), &zero, &e));
    }
    gens
}

/// An element of `K = H + H^v` (a Heisenberg element with trivial scalar).
#[derive(Clone, Debug, PartialEq)]
pub struct KElem {
    pub z: Vec<u64>,
    pub alpha: Vec<u64>,
}

impl KElem {
    pub fn new(h: &AbelianH, z: &[i64], alpha: &[i64]) -> Self {
        KElem { z: h.reduce(z), alpha: h.reduce(alpha) }
    }
}

/// The commutator pairing `e_K(x, y) = [gamma_x, gamma_y]`, evaluated as the
/// scalar `U(gx) U(gy) U(gx)^-1 U(gy)^-1` and cross-checked against the
/// closed form `beta(z) alpha(w)^-1` for `x = (z, alpha)`, `y = (w, beta)`.
pub fn commutator_pairing(h: &AbelianH, x: &KElem, y: &KElem) -> CycNum {
    let gx = HeisElem { a: CycNum::one(), z: x.z.clone(), alpha: x.alpha.clone() };
    let gy = HeisElem { a: CycNum::one(), z: y.z.clone(), alpha: y.alpha.clone() };
    let ux = schrodinger(h, &gx, 1).matrix;
    let uy = schrodinger(h, &gy, 1).matrix;
    let uxi = ux.inverse().expect("Schroedinger matrices are invertible");
    let uyi = uy.inverse().expect("Schroedinger matrices are invertible");
    let comm = ux.mul(&uy).mul(&uxi).mul(&uyi);
    let scalar = comm.as_scalar().expect("commutator of Heisenberg lifts is a scalar");
    let closed = &h.character(&y.alpha, &x.z) * &h.character(&x.alpha, &y.z).inv();
    assert_eq!(scalar, closed, "commutator scalar disagrees with beta(z)/alpha(w)");
    scalar
}

/// A monomial matrix with root-of-unity entries: column `j` carries
/// `zeta^(phase[j])` in row `perm[j]`. Hashable, so group closure
/// enumeration stays exact and fast.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct MonomialMat {
    perm: Vec<u32>,
    phase: Vec<u64>,
    modulus: u64,
}

impl MonomialMat {
    fn identity(n: usize, modulus: u64) -> Self {
        MonomialMat { perm: (0..n as u32).collect(), phase: vec![0; n], modulus }
    }

    fn mul(&self, rhs: &MonomialMat) -> MonomialMat {
        let n = self.perm.len();
        let mut perm = vec![0u32; n];
        let mut phase = vec![0u64; n];
        for j in 0..n {
            let k = rhs.perm[j] as usize;
            perm[j] = self.perm[k];
            phase[j] = (rhs.phase[j] + self.phase[k]) % self.modulus;
        }
        MonomialMat { perm, phase, modulus: self.modulus }
    }
}

fn monomial_of(h: &AbelianH, g: &HeisElem, d: u64) -> MonomialMat {
    let n = h.order();
    let elems = h.elements();
    let a_exp = g
        .a
        .as_root_of_unity(n.max(1))
        .expect("finite Heisenberg element has a root-of-unity scalar") as u64;
    let mut perm = vec![0u32; n as usize];
    let mut phase = vec![0u64; n as usize];
    for (col, beta) in elems.iter().enumerate() {
        let target: Vec<i64> =
            g.alpha.iter().zip(beta).map(|(&x, &y)| (x + y) as i64).collect();
        perm[col] = h.index_of(&h.reduce(&target)) as u32;
        phase[col] = d * (a_exp + h.pairing_exponent(beta, &g.z)) % n.max(1);
    }
    MonomialMat { perm, phase, modulus: n.max(1) }
}

/// Order of the matrix group generated by the Schroedinger images of
/// `(1, e_i, 0)` and `(1, 0, e_i^v)`, by closure enumeration; equals
/// `N^2 * (order of the root of unity the commutators generate)`.
pub fn group_order(h: &AbelianH) -> u64 {
    let n = h.order();
    if n == 1 {
        return 1;
    }
    let gens: Vec<MonomialMat> = standard_generators(h)
        .iter()
        .skip(1) // sigma- and tau-type generators only
        .map(|g| monomial_of(h, g, 1))
        .collect();
    let mut seen: HashSet<MonomialMat> = HashSet::new();
    let mut queue = vec![MonomialMat::identity(n as usize, n)];
    seen.insert(queue[0].clone());
    while let Some(m) = queue.pop() {
        for g in &gens {
            let next = g.mul(&m);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    seen.len() as u64
}

/// Result of a commutant computation.
#[derive(Clone, Debug)]
pub struct CommutantReport {
    pub is_scalar: bool,
    pub dimension: usize,
    /// Basis of the commutant as explicit matrices.
    pub witness: Vec<Mat>,
}

/// Solve `M U_(d,H)(g) = U_(d,H)(g) M` over the standard generators
/// (center, `(1, e_i, 0)`, `(1, 0, e_i^v)`) and report whether the solution
/// space is one-dimensional.
///
/// The generators are monomial, so each equation couples exactly two matrix
/// entries: `M[perm(i), perm(j)] = zeta^(phase_i - phase_j) M[i, j]`. The
/// solution space dimension is the number of entry orbits whose phase
/// constraints close up consistently.
pub fn commutant_is_scalar(h: &AbelianH, d: u64) -> CommutantReport {
    let n = h.order() as usize;
    let modulus = h.order().max(1);
    let gens: Vec<MonomialMat> =
        standard_generators(h).iter().map(|g| monomial_of(h, g, d)).collect();

    // weighted union-find over entry indices; value[x] = zeta^weight[x] * value[root]
    let mut parent: Vec<usize> = (0..n * n).collect();
    let mut weight: Vec<u64> = vec![0; n * n];
    let mut dead: Vec<bool> = vec![false; n * n];

    fn find(parent: &mut [usize], weight: &mut [u64], modulus: u64, x: usize) -> (usize, u64) {
        if parent[x] == x {
            return (x, weight[x]);
        }
        let (root, _) = find(parent, weight, modulus, parent[x]);
        weight[x] = (weight[x] + weight[parent[x]]) % modulus;
        parent[x] = root;
        (root, weight[x])
    }

    for g in &gens {
        for i in 0..n {
            for j in 0..n {
                let x = i * n + j;
                let y = g.perm[i] as usize * n + g.perm[j] as usize;
                let delta = (g.phase[i] + modulus - g.phase[j]) % modulus;
                let (rx, wx) = find(&mut parent, &mut weight, modulus, x);
                let (ry, wy) = find(&mut parent, &mut weight, modulus, y);
                if rx == ry {
                    if (wx + delta) % modulus != wy {
                        dead[rx] = true;
                    }
                } else {
                    parent[ry] = rx;
                    weight[ry] = (wx + delta + modulus - wy) % modulus;
                    if dead[ry] {
                        dead[rx] = true;
                    }
                }
            }
        }
    }

    let mut live_roots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for x in 0..n * n {
        let (root, w) = find(&mut parent, &mut weight, modulus, x);
        if !dead[root] {
            live_roots.entry(root).or_default().push((x, w));
        }
    }

    let witness: Vec<Mat> = live_roots
        .values()
        .map(|members| {
            let mut m = Mat::zeros(n, n);
            for &(x, w) in members {
                m[(x / n, x % n)] = CycNum::root_of_unity(modulus, w as i64);
            }
            m
        })
        .collect();

    // every witness must commute with every generator matrix
    for w in &witness {
        for g in standard_generators(h) {
            let u = schrodinger(h, &g, d).matrix;
            assert_eq!(w.mul(&u), u.mul(w), "commutant witness fails to commute");
        }
    }
    let dimension = witness.len();
    CommutantReport { is_scalar: dimension == 1, dimension, witness }
}

/// Commutant dimension of an arbitrary list of square matrices, by Gaussian
/// elimination on the full linear system `M A_k = A_k M`.
pub fn commutant_dimension_generic(mats: &[Mat]) -> usize {
    let n = mats.first().map_or(0, |m| m.rows());
    if n == 0 {
        return 0;
    }
    let mut rows: Vec<Vec<CycNum>> = Vec::new();
    for a in mats {
        assert_eq!((a.rows(), a.cols()), (n, n));
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![CycNum::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] = &row[i * n + k] + &a[(k, j)];
                    row[k * n + j] = &row[k * n + j] - &a[(i, k)];
                }
                rows.push(row);
            }
        }
    }
    Mat::from_rows(rows).nullity()
}

/// Result of an isotypic decomposition of a weight-`d` module.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotypicDecomposition {
    /// Basis of `W(0)`, the joint fixed space of the `(1, e_i, 0)`.
    pub w0_basis: Vec<Vec<CycNum>>,
    /// The intertwiner `F : W(0) (x) V_(d,H) -> W`,
    /// `F(w (x) v(chi)) = U(1, 0, chi) w`, columns ordered `(w_s, chi)`.
    pub intertwiner: Mat,
}

/// Decompose a weight-`d` module given by its generator matrices (ordered as
/// [`standard_generators`]) into `W(0) (x) V_(d,H)`, verifying that the
/// intertwiner really conjugates the action onto `id (x) U_(d,H)`.
pub fn isotypic_decompose(
    h: &AbelianH,
    d: u64,
    rep: &[Mat],
) -> Result<IsotypicDecomposition, HeisError> {
    let n = h.order() as usize;
    let g = h.num_factors();
    if rep.len() != 1 + 2 * g {
        return Err(HeisError::BadRep);
    }
    let rank = rep[0].rows();
    if rep.iter().any(|m| m.rows() != rank || m.cols() != rank) {
        return Err(HeisError::BadRep);
    }
    let central = CycNum::root_of_unity(h.order().max(1), d as i64);
    if rep[0] != Mat::scalar(rank, &central) {
        return Err(HeisError::NotWeightD);
    }
    // W(0) = joint kernel of (rep(1, e_i, 0) - I)
    let w0: Vec<Vec<CycNum>> = if g == 0 {
        (0..rank)
            .map(|i| {
                let mut v = vec![CycNum::zero(); rank];
                v[i] = CycNum::one();
                v
            })
            .collect()
    } else {
        let mut rows = Vec::new();
        for i in 0..g {
            let m = rep[1 + i].sub(&Mat::identity(rank));
            for r in 0..rank {
                rows.push(m.row(r).to_vec());
            }
        }
        Mat::from_rows(rows).kernel()
    };
    if w0.len() * n != rank {
        return Err(HeisError::NotFree(rank, w0.len(), n));
    }

    // F(w_s (x) v(chi)) = U(1, 0, chi) w_s, with U(1, 0, chi) assembled from
    // the dual-part generators (the dual part lifts to a genuine subgroup)
    let elems = h.elements();
    let mut f = Mat::zeros(rank, rank);
    let mut col = 0usize;
    for w in &w0 {
        for chi in &elems {
            let mut v = w.clone();
            for (i, &c) in chi.iter().enumerate() {
                for _ in 0..c {
                    v = rep[1 + g + i].mul_vec(&v);
                }
            }
            for i in 0..rank {
                f[(i, col)] = v[i].clone();
            }
            col += 1;
        }
    }
    if f.inverse().is_none() {
        return Err(HeisError::NotFree(rank, w0.len(), n));
    }
    // verify F (id (x) U_d(gen)) = rep(gen) F for all generators
    let r = w0.len();
    for (k, gen) in standard_generators(h).iter().enumerate() {
        let u = schrodinger(h, gen, d).matrix;
        let mut kron = Mat::zeros(rank, rank);
        for s in 0..r {
            for a in 0..n {
                for b in 0..n {
                    kron[(s * n + a, s * n + b)] = u[(a, b)].clone();
                }
            }
        }
        if f.mul(&kron) != rep[k].mul(&f) {
            return Err(HeisError::NotWeightD);
        }
    }
    Ok(IsotypicDecomposition { w0_basis: w0, intertwiner: f })
}

// ------------------------------------------------------------ linearization

/// A degree-zero monomial unit `coeff * prod x_beta^(exps[beta])` on the
/// projective space of the Schroedinger module; `sum exps = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitMono {
    pub coeff: CycNum,
    pub exps: Vec<i64>,
}

impl UnitMono {
    pub fn one(n: usize) -> Self {
        UnitMono { coeff: CycNum::one(), exps: vec![0; n] }
    }

    pub fn mul(&self, rhs: &UnitMono) -> UnitMono {
        UnitMono {
            coeff: &self.coeff * &rhs.coeff,
            exps: self.exps.iter().zip(&rhs.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> UnitMono {
        UnitMono { coeff: self.coeff.inv(), exps: self.exps.iter().map(|e| -e).collect() }
    }

    /// Substitute coordinates along a monomial point action:
    /// `x_beta -> scale[beta] * x_(target[beta])`.
    fn pullback(&self, action: &CoordAction) -> UnitMono {
        let mut coeff = self.coeff.clone();
        let mut exps = vec![0i64; self.exps.len()];
        for (beta, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            exps[action.target[beta]] += e;
            coeff = &coeff * &action.scale[beta].pow(e);
        }
        UnitMono { coeff, exps }
    }
}

/// Coordinate substitution data of the point action of `g` on `P(V_H)`:
/// `x_beta(g x) = scale[beta] * x_(target[beta])(x)`, coming from the
/// section operator `U_H(g^-1)` applied to the coordinate sections.
struct CoordAction {
    target: Vec<usize>,
    scale: Vec<CycNum>,
}

fn coord_action(h: &AbelianH, g: &HeisElem) -> CoordAction {
    let n = h.order() as usize;
    let uinv = schrodinger(h, &g.inverse(h), 1).matrix;
    let mut target = vec![0usize; n];
    let mut scale = vec![CycNum::zero(); n];
    for beta in 0..n {
        for row in 0..n {
            if !uinv[(row, beta)].is_zero() {
                target[beta] = row;
                scale[beta] = uinv[(row, beta)].clone();
                break;
            }
        }
    }
    CoordAction { target, scale }
}

/// The canonical linearization cocycle of the hyperplane bundle on
/// `P(V_H)`: `psi_j(g, x) = (U_H(g^-1) x_j)(x) / x_j(x)`.
pub fn schrodinger_linearization(h: &AbelianH, g: &HeisElem, chart: usize) -> UnitMono {
    let n = h.order() as usize;
    let uinv = schrodinger(h, &g.inverse(h), 1).matrix;
    let mut out = UnitMono::one(n);
    for row in 0..n {
        if !uinv[(row, chart)].is_zero() {
            out.coeff = uinv[(row, chart)].clone();
            out.exps[row] += 1;
            out.exps[chart] -= 1;
            return out;
        }
    }
    unreachable!("monomial matrix has an entry in every column")
}

/// Check the multiplicative cocycle identity
/// `psi_j(gh, x) = psi_j(g, hx) psi_j(h, x)` on all generator pairs and all
/// charts of `P(V_H)`, after verifying chart transition compatibility
/// `psi_j = (A_jk(gx) / A_jk(x)) psi_k` for `A_jk = x_j / x_k`.
pub fn linearization_cocycle_check(
    h: &AbelianH,
    cocycle: &dyn Fn(&HeisElem, usize) -> UnitMono,
) -> Result<bool, HeisError> {
    let n = h.order() as usize;
    let gens: Vec<HeisElem> = standard_generators(h);
    for g in &gens {
        let act = coord_action(h, g);
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                let mut a_jk = UnitMono::one(n);
                a_jk.exps[j] += 1;
                a_jk.exps[k] -= 1;
                let a_jk_gx = a_jk.pullback(&act);
                let lhs = cocycle(g, j);
                let rhs = a_jk_gx.mul(&a_jk.inv()).mul(&cocycle(g, k));
                if lhs != rhs {
                    return Err(HeisError::ChartMismatch(format!(
                        "charts ({}, {}) under generator z={:?} alpha={:?}",
                        j, k, g.z, g.alpha
                    )));
                }
            }
        }
    }
    for g in &gens {
        for g2 in &gens {
            let gh = g.mul(h, g2);
            let act_h = coord_action(h, g2);
            for j in 0..n {
                let lhs = cocycle(&gh, j);
                let rhs = cocycle(g, j).pullback(&act_h).mul(&cocycle(g2, j));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn z3() -> AbelianH {
        AbelianH::cyclic(3)
    }

    fn zeta(k: i64) -> CycNum {
        CycNum::root_of_unity(3, k)
    }

    fn direct_sum_rep(h: &AbelianH) -> Vec<Mat> {
        standard_generators(h)
            .iter()
            .map(|g| {
                let u = schrodinger(h, g, 1).matrix;
                let n = u.rows();
                let mut m = Mat::zeros(2 * n, 2 * n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = u[(i, j)].clone();
                        m[(n + i, n + j)] = u[(i, j)].clone();
                    }
                }
                m
            })
            .collect()
    }

    #[test]
    fn schrodinger_sigma_tau() {
        let h = z3();
        let sigma = schrodinger(&h, &HeisElem::new(&h, CycNum::one(), &[1], &[0]), 1).matrix;
        let mut expect = Mat::zeros(3, 3);
        for k in 0..3 {
            expect[(k, k)] = zeta(k as i64);
        }
        assert_eq!(sigma, expect);
        let tau = schrodinger(&h, &HeisElem::new(&h, CycNum::one(), &[0], &[1]), 1).matrix;
        let mut expect = Mat::zeros(3, 3);
        for k in 0..3usize {
            expect[((k + 1) % 3, k)] = CycNum::one();
        }
        assert_eq!(tau, expect);
        let id = schrodinger(&h, &HeisElem::identity(&h), 4).matrix;
        assert_eq!(id, Mat::identity(3));
    }

    #[test]
    fn schrodinger_homomorphism_random() {
        use rand::{Rng, SeedableRng};
        let h = AbelianH::new(vec![2, 4]).unwrap();
        let n = h.order();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in [1u64, 2] {
            for _ in 0..100 {
                let r = |rng: &mut rand_chacha::ChaCha8Rng| {
                    HeisElem::new(
                        &h,
                        CycNum::root_of_unity(n, rng.gen_range(0..n as i64)),
                        &[rng.gen_range(0..8), rng.gen_range(0..8)],
                        &[rng.gen_range(0..8), rng.gen_range(0..8)],
                    )
                };
                let e1 = r(&mut rng);
                let e2 = r(&mut rng);
                let lhs =
                    schrodinger(&h, &e1, d).matrix.mul(&schrodinger(&h, &e2, d).matrix);
                let rhs = schrodinger(&h, &e1.mul(&h, &e2), d).matrix;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn inverse_law() {
        let h = AbelianH::new(vec![2, 4]).unwrap();
        let e = HeisElem::new(&h, CycNum::root_of_unity(8, 3), &[1, 3], &[0, 2]);
        assert_eq!(e.mul(&h, &e.inverse(&h)), HeisElem::identity(&h));
        assert_eq!(e.inverse(&h).mul(&h, &e), HeisElem::identity(&h));
    }

    #[test]
    fn weight_of_central_element() {
        let h = z3();
        for d in 1..=4u64 {
            let c = HeisElem::new(&h, zeta(1), &[0], &[0]);
            let m = schrodinger(&h, &c, d).matrix;
            assert_eq!(m, Mat::scalar(3, &zeta(d as i64)));
        }
    }

    #[test]
    fn pairing_on_standard_basis() {
        let h = z3();
        let e1 = KElem::new(&h, &[1], &[0]);
        let e2 = KElem::new(&h, &[0], &[1]);
        assert_eq!(commutator_pairing(&h, &e1, &e2), zeta(1));
        assert_eq!(commutator_pairing(&h, &e2, &e1), zeta(-1));
        for x in [&e1, &e2] {
            assert_eq!(commutator_pairing(&h, x, x), CycNum::one());
        }
    }

    #[test]
    fn pairing_matrix_z2_z4() {
        let h = AbelianH::new(vec![2, 4]).unwrap();
        let basis = [
            KElem::new(&h, &[1, 0], &[0, 0]),
            KElem::new(&h, &[0, 1], &[0, 0]),
            KElem::new(&h, &[0, 0], &[1, 0]),
            KElem::new(&h, &[0, 0], &[0, 1]),
        ];
        let n = 8;
        let expected = |i: usize, j: usize| -> CycNum {
            match (i, j) {
                (0, 2) => CycNum::root_of_unity(n, 4),
                (2, 0) => CycNum::root_of_unity(n, -4),
                (1, 3) => CycNum::root_of_unity(n, 2),
                (3, 1) => CycNum::root_of_unity(n, -2),
                _ => CycNum::one(),
            }
        };
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    commutator_pairing(&h, &basis[i], &basis[j]),
                    expected(i, j),
                    "pairing mismatch at ({}, {})",
                    i,
                    j
                );
            }
        }
    }

    #[test]
    fn pairing_bimultiplicative_and_nondegenerate_z3() {
        let h = z3();
        let elems: Vec<KElem> = (0..3)
            .flat_map(|z| (0..3).map(move |a| (z, a)))
            .map(|(z, a)| KElem::new(&h, &[z], &[a]))
            .collect();
        for x in &elems {
            for y in &elems {
                for w in &elems {
                    let xy = KElem::new(
                        &h,
                        &[(x.z[0] + y.z[0]) as i64],
                        &[(x.alpha[0] + y.alpha[0]) as i64],
                    );
                    let lhs = commutator_pairing(&h, &xy, w);
                    let rhs = &commutator_pairing(&h, x, w) * &commutator_pairing(&h, y, w);
                    assert_eq!(lhs, rhs);
                }
            }
        }
        for x in &elems {
            let trivial =
                elems.iter().all(|y| commutator_pairing(&h, x, y) == CycNum::one());
            assert_eq!(trivial, x.z[0] == 0 && x.alpha[0] == 0);
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(&AbelianH::cyclic(3)), 27);
        assert_eq!(group_order(&AbelianH::trivial()), 1);
        assert_eq!(group_order(&AbelianH::cyclic(2)), 8);
    }

    #[test]
    fn commutant_scalar_weight_one() {
        for h in [
            AbelianH::cyclic(3),
            AbelianH::cyclic(4),
            AbelianH::new(vec![3, 3]).unwrap(),
        ] {
            let rep = commutant_is_scalar(&h, 1);
            assert!(rep.is_scalar, "weight 1 commutant must be scalar for {:?}", h);
            assert_eq!(rep.dimension, 1);
        }
    }

    #[test]
    fn commutant_weight_two_depends_on_gcd() {
        assert!(commutant_is_scalar(&AbelianH::cyclic(3), 2).is_scalar);
        assert!(commutant_is_scalar(&AbelianH::cyclic(5), 2).is_scalar);
        // gcd(2, N) > 1: the weight-2 module is not irreducible
        let rep = commutant_is_scalar(&AbelianH::cyclic(4), 2);
        assert!(!rep.is_scalar);
        assert_eq!(rep.dimension, 2);
        let rep = commutant_is_scalar(&AbelianH::new(vec![2, 2]).unwrap(), 2);
        assert!(!rep.is_scalar);
        assert_eq!(rep.dimension, 4);
    }

    #[test]
    fn commutant_generic_direct_sum() {
        let h = z3();
        assert_eq!(commutant_dimension_generic(&direct_sum_rep(&h)), 4);
    }

    #[test]
    fn isotypic_on_schrodinger_itself() {
        let h = z3();
        let rep: Vec<Mat> = standard_generators(&h)
            .iter()
            .map(|g| schrodinger(&h, g, 1).matrix)
            .collect();
        let dec = isotypic_decompose(&h, 1, &rep).unwrap();
        assert_eq!(dec.w0_basis.len(), 1);
        let v = &dec.w0_basis[0];
        assert!(!v[0].is_zero());
        assert!(v[1].is_zero() && v[2].is_zero());
    }

    #[test]
    fn isotypic_on_direct_sum() {
        let h = z3();
        let dec = isotypic_decompose(&h, 1, &direct_sum_rep(&h)).unwrap();
        assert_eq!(dec.w0_basis.len(), 2);
        assert_eq!(dec.intertwiner.rows(), 6);
    }

    #[test]
    fn isotypic_recovers_conjugation() {
        use rand::{Rng, SeedableRng};
        let h = z3();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = loop {
                let cand = Mat::from_rows(
                    (0..3)
                        .map(|_| {
                            (0..3)
                                .map(|_| CycNum::from_rat(rat(rng.gen_range(-3..4))))
                                .collect()
                        })
                        .collect(),
                );
                if cand.inverse().is_some() {
                    break cand;
                }
            };
            let ainv = a.inverse().unwrap();
            let rep: Vec<Mat> = standard_generators(&h)
                .iter()
                .map(|g| a.mul(&schrodinger(&h, g, 1).matrix).mul(&ainv))
                .collect();
            let dec = isotypic_decompose(&h, 1, &rep).unwrap();
            assert_eq!(dec.w0_basis.len(), 1);
            let f = dec.intertwiner;
            let finv = f.inverse().unwrap();
            for g in standard_generators(&h) {
                let u = schrodinger(&h, &g, 1).matrix;
                let conj = finv.mul(&a.mul(&u).mul(&ainv)).mul(&f);
                assert_eq!(conj, u);
            }
        }
    }

    #[test]
    fn isotypic_rejects_wrong_weight() {
        let h = z3();
        let rep: Vec<Mat> = standard_generators(&h)
            .iter()
            .map(|g| schrodinger(&h, g, 1).matrix)
            .collect();
        assert_eq!(isotypic_decompose(&h, 2, &rep), Err(HeisError::NotWeightD));
    }

    #[test]
    fn cocycle_standard_linearization() {
        let h = z3();
        let ok =
            linearization_cocycle_check(&h, &|g, j| schrodinger_linearization(&h, g, j))
                .unwrap();
        assert!(ok);
    }

    #[test]
    fn cocycle_standard_linearization_z2_z2() {
        let h = AbelianH::new(vec![2, 2]).unwrap();
        let ok =
            linearization_cocycle_check(&h, &|g, j| schrodinger_linearization(&h, g, j))
                .unwrap();
        assert!(ok);
    }

    #[test]
    fn cocycle_trivial() {
        let h = AbelianH::trivial();
        let ok = linearization_cocycle_check(&h, &|_, _| UnitMono::one(1)).unwrap();
        assert!(ok);
    }

    #[test]
    fn cocycle_perturbed_fails() {
        // scaling the sigma-slot of the cocycle by zeta_3 (uniformly over
        // charts, so transitions stay compatible) breaks the identity at
        // the pair (sigma, sigma)
        let h = z3();
        let sigma = HeisElem::new(&h, CycNum::one(), &[1], &[0]);
        let h_inner = h.clone();
        let perturbed = move |g: &HeisElem, j: usize| {
            let mut psi = schrodinger_linearization(&h_inner, g, j);
            if *g == sigma {
                psi.coeff = &psi.coeff * &CycNum::root_of_unity(3, 1);
            }
            psi
        };
        let ok = linearization_cocycle_check(&h, &perturbed).unwrap();
        assert!(!ok);

        // perturbing a single chart instead is a transition mismatch
        let sigma = HeisElem::new(&h, CycNum::one(), &[1], &[0]);
        let h_inner = h.clone();
        let skewed = move |g: &HeisElem, j: usize| {
            let mut psi = schrodinger_linearization(&h_inner, g, j);
            if *g == sigma && j == 0 {
                psi.coeff = &psi.coeff * &CycNum::root_of_unity(3, 1);
            }
            psi
        };
        assert!(matches!(
            linearization_cocycle_check(&h, &skewed),
            Err(HeisError::ChartMismatch(_))
        ));
    }
}
