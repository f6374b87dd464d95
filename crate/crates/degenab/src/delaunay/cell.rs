//! Exact closest-vector machinery: ellipsoid enumeration by branch-and-bound
//! over the rational LDL decomposition, Delaunay cells as complete minimizer
//! sets, and the parametric pivot that walks between cells.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::{rat, Rat};

use super::{ratlin, DelaunayCell, Form};

/// Ceiling of a rational.
fn rat_ceil(x: &Rat) -> i64 {
    let c = x.ceil();
    let n = c.numer() / c.denom();
    i64::try_from(n).expect("coordinate out of i64 range")
}

fn rat_floor(x: &Rat) -> i64 {
    let f = x.floor();
    let n = f.numer() / f.denom();
    i64::try_from(n).expect("coordinate out of i64 range")
}

/// A rational upper bound for `sqrt(x)`, `x >= 0`.
fn sqrt_upper(x: &Rat) -> Rat {
    assert!(!x.is_negative());
    let num = x.numer().clone();
    let den = x.denom().clone();
    // sqrt(n/d) <= (isqrt(n) + 1) / isqrt(d), valid since isqrt(d) <= sqrt(d)
    let ns = num.sqrt() + BigInt::from(1);
    let ds = den.sqrt().max(BigInt::from(1));
    Rat::new(ns, ds)
}

/// All lattice points `x` with `F_lambda(x) <= bound`, with their values.
///
/// Completeness is certified by the positive-definite LDL decomposition:
/// writing `B(v, v) = sum d_i w_i^2` with `w = L^T v`, every coordinate
/// range below is an interval containing all solutions, and membership is
/// re-checked exactly.
pub fn enumerate_ball(form: &Form, lam: &[Rat], bound: &Rat) -> Vec<(Vec<i64>, Rat)> {
    let g = form.rank();
    assert_eq!(lam.len(), g);
    // F_lambda(x) <= bound  <=>  B(x - lam, x - lam) <= bound + B(lam, lam)
    let radius = bound + form.eval_rat(lam, lam);
    if radius.is_negative() {
        return Vec::new();
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    let (l, d) = form.ldl();
    let mut x = vec![0i64; g];
    recurse(form, lam, &l, &d, &radius, g, &mut x, &Rat::zero(), &mut out);
    // exact filter and value computation
    let mut verified = Vec::with_capacity(out.len());
    for x in out {
        let f = form.f_lambda(lam, &x);
        if &f <= bound {
            verified.push((x, f));
        }
    }
    verified.sort();
    verified
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    form: &Form,
    lam: &[Rat],
    l: &[Vec<Rat>],
    d: &[Rat],
    radius: &Rat,
    level: usize,
    x: &mut Vec<i64>,
    partial: &Rat,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    // w_i = (x_i - lam_i) + sum_{j > i} L[j][i] (x_j - lam_j)
    let mut c = Rat::zero();
    for j in level..form.rank() {
        c += &l[j][i] * (rat(x[j]) - &lam[j]);
    }
    // d_i (x_i - lam_i + c)^2 <= radius - partial
    let slack = radius - partial;
    if slack.is_negative() {
        return;
    }
    let rho = &slack / &d[i];
    let r = sqrt_upper(&rho);
    let center = &lam[i] - &c;
    let lo = rat_ceil(&(&center - &r));
    let hi = rat_floor(&(&center + &r));
    for xi in lo..=hi {
        let w = rat(xi) - &center;
        let contrib = &d[i] * &w * &w;
        if &contrib > &slack {
            continue;
        }
        x[i] = xi;
        let new_partial = partial + &contrib;
        recurse(form, lam, l, d, radius, i, x, &new_partial, out);
        x[i] = 0;
    }
}

/// The Delaunay cell `D(lambda)`: the complete set of lattice minimizers of
/// `F_lambda`, certified by a second exhaustive sweep of the minimal
/// ellipsoid.
pub fn delaunay_cell(form: &Form, lam: &[Rat]) -> DelaunayCell {
    let g = form.rank();
    assert_eq!(lam.len(), g, "lambda has wrong dimension");
    // initial bound from the rounded point
    let x0: Vec<i64> = lam.iter().map(|c| rat_floor(&(c + Rat::new(1.into(), 2.into())))).collect();
    let m0 = form.f_lambda(lam, &x0);
    let candidates = enumerate_ball(form, lam, &m0);
    let min = candidates
        .iter()
        .map(|(_, f)| f.clone())
        .min()
        .expect("ball around rounded point is nonempty");
    let mut vertices: Vec<Vec<i64>> = candidates
        .iter()
        .filter(|(_, f)| *f == min)
        .map(|(x, _)| x.clone())
        .collect();
    // certification sweep: enumerate the exact minimal ellipsoid afresh
    let sweep = enumerate_ball(form, lam, &min);
    let sweep_min: Vec<Vec<i64>> =
        sweep.iter().filter(|(_, f)| *f == min).map(|(x, _)| x.clone()).collect();
    assert_eq!(vertices, sweep_min, "minimizer certification sweep disagrees");
    vertices.sort();
    let dim = DelaunayCell::dimension_of(&vertices);
    DelaunayCell { vertices, dim, center: lam.to_vec() }
}

/// The unique point equidistant (in the `F`-sense) from all vertices of a
/// full-dimensional cell: solve `B(v, v) - 2 B(c, v) = m` for `(c, m)`.
pub fn hole_center(form: &Form, vertices: &[Vec<i64>]) -> Vec<Rat> {
    let g = form.rank();
    let rows: Vec<Vec<Rat>> = vertices
        .iter()
        .map(|v| {
            // -2 (G v)^T c - m = -B(v, v)
            let mut row: Vec<Rat> = (0..g)
                .map(|i| {
                    let gv: i64 = (0..g).map(|j| form.gram()[i][j] * v[j]).sum();
                    rat(-2 * gv)
                })
                .collect();
            row.push(rat(-1));
            row
        })
        .collect();
    let rhs: Vec<Rat> = vertices.iter().map(|v| rat(-form.eval_int(v, v))).collect();
    let sol = ratlin::solve(&rows, &rhs).expect("equidistance system is consistent");
    sol[..g].to_vec()
}

/// Directions `d` with `B(d, x - y) = 0` for all vertices `x, y`: the
/// tangent space of the equidistance locus of the cell.
pub fn equidistance_directions(form: &Form, vertices: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let g = form.rank();
    let v0 = &vertices[0];
    let rows: Vec<Vec<Rat>> = vertices[1..]
        .iter()
        .map(|v| {
            (0..g)
                .map(|i| {
                    let gv: i64 = (0..g).map(|j| form.gram()[i][j] * (v[j] - v0[j])).sum();
                    rat(gv)
                })
                .collect()
        })
        .collect();
    if rows.is_empty() {
        // 0-dimensional cell: every direction works
        return (0..g)
            .map(|i| {
                let mut e = vec![Rat::zero(); g];
                e[i] = rat(1);
                e
            })
            .collect();
    }
    ratlin::kernel(&rows, g)
}

/// Walk from `lam0` along `dir` (a direction keeping the base vertices
/// equidistant) to the first parameter `t > 0` at which a new lattice point
/// joins the minimizer set; returns `(t, minimizer set at t)`.
///
/// For each competitor `x`, `F(x) - F(v0)` is linear in `t`, so the first
/// event is the minimum of finitely many positive root crossings; the loop
/// alternates exact enumeration with root clamping until the tie is exact.
pub fn next_event(
    form: &Form,
    lam0: &[Rat],
    dir: &[Rat],
    base: &[Vec<i64>],
) -> (Rat, Vec<Vec<i64>>) {
    let v0 = &base[0];
    let mut t = rat(1);
    let mut doublings = 0;
    loop {
        let lam_t: Vec<Rat> = lam0.iter().zip(dir).map(|(a, b)| a + b * &t).collect();
        let ref_val = form.f_lambda(&lam_t, v0);
        let candidates = enumerate_ball(form, &lam_t, &ref_val);
        let better: Vec<&(Vec<i64>, Rat)> =
            candidates.iter().filter(|(_, f)| f < &ref_val).collect();
        if better.is_empty() {
            let mut tie: Vec<Vec<i64>> = candidates
                .iter()
                .filter(|(x, f)| f == &ref_val && !base.contains(x))
                .map(|(x, _)| x.clone())
                .collect();
            if !tie.is_empty() {
                let mut all = base.to_vec();
                all.append(&mut tie);
                all.sort();
                all.dedup();
                return (t, all);
            }
            t *= rat(2);
            doublings += 1;
            assert!(doublings < 64, "pivot ray escapes to infinity");
            continue;
        }
        // clamp t to the earliest crossing among the strictly better points
        let mut t_min: Option<Rat> = None;
        for (x, _) in better {
            let a = form.f_lambda(lam0, x) - form.f_lambda(lam0, v0);
            let dx: Vec<i64> = x.iter().zip(v0).map(|(p, q)| p - q).collect();
            let b = rat(2) * form.eval_mixed(dir, &dx);
            assert!(b > Rat::zero(), "strictly better point must have positive slope");
            let root = a / b;
            t_min = Some(match t_min {
                None => root,
                Some(cur) => cur.min(root),
            });
        }
        t = t_min.unwrap();
        assert!(t > Rat::zero(), "pivot parameter must stay positive");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn form1() -> Form {
        Form::new(vec![vec![2]]).unwrap()
    }

    fn square() -> Form {
        Form::new(vec![vec![2, 0], vec![0, 2]]).unwrap()
    }

    fn hexagonal() -> Form {
        Form::new(vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            Form::new(vec![vec![1, 2], vec![2, 1]]),
            Err(super::super::DelaunayError::NotEven(1))
        );
        assert_eq!(
            Form::new(vec![vec![2, 2], vec![2, 2]]),
            Err(super::super::DelaunayError::NotPositiveDefinite)
        );
        assert_eq!(
            Form::new(vec![vec![2, -3], vec![3, 2]]),
            Err(super::super::DelaunayError::NotSymmetric)
        );
    }

    #[test]
    fn rank_one_interval_and_point() {
        // D(j + 1/2) = [j, j+1]
        let c = delaunay_cell(&form1(), &[ratio(1, 2)]);
        assert_eq!(c.vertices, vec![vec![0], vec![1]]);
        assert_eq!(c.dim, 1);
        let c = delaunay_cell(&form1(), &[ratio(7, 2)]);
        assert_eq!(c.vertices, vec![vec![3], vec![4]]);
        // D(lambda) = {j} for j - 1/2 < lambda < j + 1/2
        let c = delaunay_cell(&form1(), &[ratio(1, 5)]);
        assert_eq!(c.vertices, vec![vec![0]]);
        assert_eq!(c.dim, 0);
    }

    #[test]
    fn square_cell_at_center() {
        let c = delaunay_cell(&square(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(
            c.vertices,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(c.dim, 2);
        // brute force oracle over |x_i| <= 2
        let lam = [ratio(1, 2), ratio(1, 2)];
        let mut best = None;
        let mut mins = Vec::new();
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let f = square().f_lambda(&lam, &[a, b]);
                match &best {
                    None => {
                        best = Some(f);
                        mins = vec![vec![a, b]];
                    }
                    Some(m) => {
                        if &f < m {
                            best = Some(f);
                            mins = vec![vec![a, b]];
                        } else if &f == m {
                            mins.push(vec![a, b]);
                        }
                    }
                }
            }
        }
        mins.sort();
        assert_eq!(c.vertices, mins);
    }

    #[test]
    fn hexagonal_diagonal_is_edge() {
        // for the hexagonal form the box center lies on the shared edge
        let c = delaunay_cell(&hexagonal(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(c.vertices, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(c.dim, 1);
    }

    #[test]
    fn translation_equivariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f = hexagonal();
        for _ in 0..20 {
            let lam = [
                ratio(rng.gen_range(-12..12), 7),
                ratio(rng.gen_range(-12..12), 5),
            ];
            let z = [rng.gen_range(-5..5), rng.gen_range(-5..5)];
            let shifted: Vec<Rat> = lam.iter().zip(&z).map(|(l, s)| l + rat(*s)).collect();
            let c1 = delaunay_cell(&f, &lam).translated(&z);
            let c2 = delaunay_cell(&f, &shifted);
            assert_eq!(c1.vertices, c2.vertices);
        }
    }

    #[test]
    fn hole_center_of_square() {
        let v = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        let c = hole_center(&square(), &v);
        assert_eq!(c, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn pivot_from_vertex_grows_cell() {
        let f = square();
        let lam = [ratio(1, 10), ratio(1, 14)];
        let cell = delaunay_cell(&f, &lam);
        assert_eq!(cell.dim, 0);
        let dirs = equidistance_directions(&f, &cell.vertices);
        assert_eq!(dirs.len(), 2);
        let (t, grown) = next_event(&f, &lam, &dirs[0], &cell.vertices);
        assert!(t > Rat::zero());
        assert!(grown.len() > cell.vertices.len());
    }
}
