//! Affine chart presentations of the degenerating family: the chart at a
//! lattice point `n` is generated by the monomials `(a(x)/a(n)) w^(x-n)`
//! for `x` in the Delaunay star of `n`, with binomial relations found by
//! exhausting bounded-degree integer relations and comparing q-valuations,
//! and the special fiber read off by sending positive q-powers to zero.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::delaunay::{delaunay_complex, Sublattice};
use crate::exact::{rat, CycNum, QLaurent, Rat};

use super::{DegenError, DegenerationData};

/// One chart generator `(a(x)/a(n)) w^(x-n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartGenerator {
    pub name: String,
    /// `x - n`.
    pub mono: Vec<i64>,
    /// The translation-invariant tag `B(x-n, x-n)/2`.
    pub qval: String,
    /// The actual valuation of `a(x)/a(n)`.
    pub true_val: String,
}

/// A binomial relation `prod g_i^(lhs_i) = q^(q_power) * unit * prod g_j^(rhs_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartRelation {
    pub lhs: Vec<u32>,
    pub q_power: String,
    pub rhs: Vec<u32>,
    pub unit: String,
}

/// The q = 0 fiber of a chart: monomials that vanish and exchange
/// relations of equal valuation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialFiber {
    /// Exponent vectors whose monomial is zero on the special fiber.
    pub vanishing: Vec<Vec<u32>>,
    /// Pairs of exponent vectors identified on the special fiber.
    pub equalities: Vec<(Vec<u32>, Vec<u32>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartPresentation {
    pub schema: String,
    pub n: Vec<i64>,
    pub generators: Vec<ChartGenerator>,
    pub relations: Vec<ChartRelation>,
    pub special_fiber: SpecialFiber,
}

/// The Delaunay star of a lattice point: all vertices of cells containing
/// it, computed from the decomposition mod `X` by translating every cell
/// class onto the point.
fn star_vertices(data: &DegenerationData, n: &[i64]) -> Vec<Vec<i64>> {
    let g = data.rank();
    let complex = delaunay_complex(&data.form, &Sublattice::full(g))
        .expect("decomposition of a valid form");
    let mut star: BTreeSet<Vec<i64>> = BTreeSet::new();
    for cell in &complex.cells {
        for v in &cell.vertices {
            // translate the cell so that v lands on n
            let shift: Vec<i64> = n.iter().zip(v).map(|(a, b)| a - b).collect();
            for w in &cell.vertices {
                star.insert(w.iter().zip(&shift).map(|(a, b)| a + b).collect());
            }
        }
    }
    star.remove(&n.to_vec());
    star.into_iter().collect()
}

/// The chart presentation at `n`. Rank at most 2.
pub fn mumford_chart(
    data: &DegenerationData,
    n: &[i64],
) -> Result<ChartPresentation, DegenError> {
    let g = data.rank();
    if g > 2 {
        return Err(DegenError::RankTooLarge(g));
    }
    if n.len() != g {
        return Err(DegenError::DimensionMismatch);
    }

    // candidate generators from the star, pruned of monomials that are
    // products of others with matching valuations (unit factors are free)
    let mut cands: Vec<(Vec<i64>, Rat)> = star_vertices(data, n)
        .into_iter()
        .map(|x| {
            let mono: Vec<i64> = x.iter().zip(n).map(|(a, b)| a - b).collect();
            let val = &data.a_val(&x) - &data.a_val(&n.to_vec());
            (mono, val)
        })
        .collect();
    cands.sort();
    let mut keep: Vec<bool> = vec![true; cands.len()];
    for i in 0..cands.len() {
        let others: Vec<(Vec<i64>, Rat)> = cands
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, c)| c.clone())
            .collect();
        if expressible(&cands[i].0, &cands[i].1, &others, 4) {
            keep[i] = false;
        }
    }
    let gens: Vec<(Vec<i64>, Rat)> = cands
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect();

    let generators: Vec<ChartGenerator> = gens
        .iter()
        .enumerate()
        .map(|(i, (mono, val))| {
            let half = data.form.eval_int(mono, mono);
            ChartGenerator {
                name: format!("t{}", i),
                mono: mono.clone(),
                qval: (rat(half) / rat(2)).to_string(),
                true_val: val.to_string(),
            }
        })
        .collect();

    // binomial relations of degree <= 2 per side, primitive ones only
    let relations = find_relations(data, n, &gens);

    // special fiber: positive q-power relations become vanishing monomials
    let mut vanishing = Vec::new();
    let mut equalities = Vec::new();
    for r in &relations {
        let qp = crate::exact::parse_rat(&r.q_power).unwrap();
        if qp.is_zero() {
            equalities.push((r.lhs.clone(), r.rhs.clone()));
        } else {
            vanishing.push(r.lhs.clone());
        }
    }
    vanishing.sort();
    vanishing.dedup();

    Ok(ChartPresentation {
        schema: "degenab/1".into(),
        n: n.to_vec(),
        generators,
        relations,
        special_fiber: SpecialFiber { vanishing, equalities },
    })
}

/// Is `(mono, val)` a product of nonnegative powers of `others` with total
/// degree at most `bound` and exactly matching valuation?
fn expressible(mono: &[i64], val: &Rat, others: &[(Vec<i64>, Rat)], bound: u32) -> bool {
    fn rec(
        idx: usize,
        remaining: u32,
        acc_mono: &mut Vec<i64>,
        acc_val: &Rat,
        target_mono: &[i64],
        target_val: &Rat,
        others: &[(Vec<i64>, Rat)],
    ) -> bool {
        if acc_mono == target_mono && acc_val == target_val {
            // require a genuine product (degree >= 2 total) or a different
            // single generator; the trivial empty product only matches the
            // zero monomial which never appears
            return true;
        }
        if idx == others.len() || remaining == 0 {
            return false;
        }
        // skip this generator
        if rec(idx + 1, remaining, acc_mono, acc_val, target_mono, target_val, others) {
            return true;
        }
        // use it once more
        for i in 0..acc_mono.len() {
            acc_mono[i] += others[idx].0[i];
        }
        let new_val = acc_val + &others[idx].1;
        let hit = rec(idx, remaining - 1, acc_mono, &new_val, target_mono, target_val, others);
        for i in 0..acc_mono.len() {
            acc_mono[i] -= others[idx].0[i];
        }
        hit
    }
    let mut acc = vec![0i64; mono.len()];
    // degree >= 2 products only: a single equal generator would have been
    // deduplicated already, and the empty product is excluded by mono != 0
    rec(0, bound, &mut acc, &Rat::zero(), mono, val, others)
}

fn find_relations(
    data: &DegenerationData,
    n: &[i64],
    gens: &[(Vec<i64>, Rat)],
) -> Vec<ChartRelation> {
    let k = gens.len();
    let g = data.rank();
    // multi-indices of total degree 1..=2
    let mut multis: Vec<Vec<u32>> = Vec::new();
    for i in 0..k {
        let mut m = vec![0u32; k];
        m[i] = 1;
        multis.push(m);
        for j in i..k {
            let mut m = vec![0u32; k];
            m[i] += 1;
            m[j] += 1;
            multis.push(m);
        }
    }
    let eval = |m: &[u32]| -> (Vec<i64>, Rat, CycNum) {
        let mut mono = vec![0i64; g];
        let mut val = Rat::zero();
        let mut unit = CycNum::one();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                for (a, b) in mono.iter_mut().zip(&gens[i].0) {
                    *a += b;
                }
                val += &gens[i].1;
                let x: Vec<i64> = gens[i].0.iter().zip(n).map(|(a, b)| a + b).collect();
                unit = &unit * &(&data.a_unit(&x) * &data.a_unit(&n.to_vec()).inv());
            }
        }
        (mono, val, unit)
    };
    let degree = |m: &[u32]| -> u32 { m.iter().sum() };

    let mut raw: Vec<(Vec<u32>, Vec<u32>, Rat, CycNum)> = Vec::new();
    // pure q-power relations: mono = 0
    for m in &multis {
        if degree(m) != 2 {
            continue;
        }
        let (mono, val, unit) = eval(m);
        if mono.iter().all(|&x| x == 0) {
            raw.push((m.clone(), vec![0; k], val, unit));
        }
    }
    // exchange relations: deg-2 lhs vs deg-1 rhs with equal monomial
    for m in &multis {
        if degree(m) != 2 {
            continue;
        }
        let (mono, val, unit) = eval(m);
        if mono.iter().all(|&x| x == 0) {
            continue;
        }
        for r in &multis {
            if degree(r) != 1 {
                continue;
            }
            let (rmono, rval, runit) = eval(r);
            if rmono == mono {
                let c = &val - &rval;
                if c >= Rat::zero() {
                    raw.push((m.clone(), r.clone(), c, &unit * &runit.inv()));
                }
            }
        }
    }
    // drop non-primitive ones: lhs/rhs componentwise dominated by another
    let mut out: Vec<ChartRelation> = Vec::new();
    for (i, (lhs, rhs, c, unit)) in raw.iter().enumerate() {
        let dominated = raw.iter().enumerate().any(|(j, (l2, r2, _, _))| {
            j != i
                && l2.iter().zip(lhs).all(|(a, b)| a <= b)
                && r2.iter().zip(rhs).all(|(a, b)| a <= b)
                && (l2 != lhs || r2 != rhs)
        });
        if dominated {
            continue;
        }
        out.push(ChartRelation {
            lhs: lhs.clone(),
            q_power: c.to_string(),
            rhs: rhs.clone(),
            unit: unit.to_string(),
        });
    }
    out.sort_by(|a, b| (&a.lhs, &a.rhs).cmp(&(&b.lhs, &b.rhs)));
    out
}

/// Verify the rank-one gluing identities `x_(n+1) = x_n^2 y_n` and
/// `y_(n+1) = x_n^(-1)` symbolically (as exact one-term Laurent identities
/// in the original `q, w` variables), together with the chart relation
/// `x_n y_n = q^2` and its transport to the next chart.
pub fn rank1_gluing_identities(data: &DegenerationData, n: i64) -> bool {
    assert_eq!(data.rank(), 1);
    let xval = |m: i64| data.a_val(&[m + 1]) - data.a_val(&[m]);
    let yval = |m: i64| data.a_val(&[m - 1]) - data.a_val(&[m]);
    let x = |m: i64| QLaurent::monomial(1, CycNum::one(), xval(m), vec![1]);
    let y = |m: i64| QLaurent::monomial(1, CycNum::one(), yval(m), vec![-1]);
    let inv_x = |m: i64| QLaurent::monomial(1, CycNum::one(), -xval(m), vec![-1]);

    // x_(n+1) = x_n^2 y_n
    let lhs = x(n + 1);
    let rhs = &(&x(n) * &x(n)) * &y(n);
    if lhs != rhs {
        return false;
    }
    // y_(n+1) = x_n^(-1)
    if y(n + 1) != inv_x(n) {
        return false;
    }
    // x_n y_n = q^2, and the substituted next-chart relation collapses to it
    let q2 = QLaurent::monomial(1, CycNum::one(), rat(2), vec![0]);
    if &x(n) * &y(n) != q2 {
        return false;
    }
    let transported = &(&(&x(n) * &x(n)) * &y(n)) * &inv_x(n);
    transported == q2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::Form;
    use crate::degeneration::{DegenerationData, UnitPart};

    fn rank1() -> DegenerationData {
        DegenerationData::new(
            Form::new(vec![vec![2]]).unwrap(),
            Sublattice::new(vec![vec![3]]).unwrap(),
        )
        .unwrap()
    }

    fn square_case1() -> DegenerationData {
        DegenerationData::new(
            Form::new(vec![vec![2, 0], vec![0, 2]]).unwrap(),
            Sublattice::new(vec![vec![3, 0], vec![0, 3]]).unwrap(),
        )
        .unwrap()
        .with_unit(UnitPart {
            base: CycNum::root_of_unity(3, 1),
            quad: vec![vec![0, 1], vec![1, 0]],
        })
    }

    fn hexagonal_case2() -> DegenerationData {
        DegenerationData::new(
            Form::new(vec![vec![2, -1], vec![-1, 2]]).unwrap(),
            Sublattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rank1_chart_at_origin() {
        let chart = mumford_chart(&rank1(), &[0]).unwrap();
        assert_eq!(chart.generators.len(), 2);
        assert_eq!(chart.generators[0].mono, vec![-1]);
        assert_eq!(chart.generators[1].mono, vec![1]);
        assert_eq!(chart.generators[0].true_val, "1");
        assert_eq!(chart.generators[1].true_val, "1");
        // single relation x y = q^2
        assert_eq!(chart.relations.len(), 1);
        let r = &chart.relations[0];
        assert_eq!(r.lhs, vec![1, 1]);
        assert_eq!(r.q_power, "2");
        assert_eq!(r.rhs, vec![0, 0]);
        // special fiber is the node
        assert_eq!(chart.special_fiber.vanishing, vec![vec![1, 1]]);
    }

    #[test]
    fn rank1_gluing() {
        let d = rank1();
        for n in -3..=3 {
            assert!(rank1_gluing_identities(&d, n), "gluing fails at chart {}", n);
        }
    }

    #[test]
    fn case1_chart_four_generators() {
        let chart = mumford_chart(&square_case1(), &[0, 0]).unwrap();
        let monos: Vec<Vec<i64>> =
            chart.generators.iter().map(|g| g.mono.clone()).collect();
        assert_eq!(
            monos,
            vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]],
            "diagonal monomials must be pruned as products"
        );
        // relations u1 v1 = q^2 and u2 v2 = q^2 (indices: 0 = w1^-1,
        // 1 = w2^-1, 2 = w2, 3 = w1)
        let pure: Vec<&ChartRelation> = chart
            .relations
            .iter()
            .filter(|r| r.rhs.iter().all(|&e| e == 0))
            .collect();
        assert!(pure.iter().any(|r| r.lhs == vec![1, 0, 0, 1] && r.q_power == "2"));
        assert!(pure.iter().any(|r| r.lhs == vec![0, 1, 1, 0] && r.q_power == "2"));
        // special fiber k[u1,u2,v1,v2]/(u1v1, u2v2)
        assert_eq!(chart.special_fiber.vanishing.len(), 2);
    }

    #[test]
    fn case2_chart_six_generators() {
        let chart = mumford_chart(&hexagonal_case2(), &[0, 0]).unwrap();
        let monos: Vec<Vec<i64>> =
            chart.generators.iter().map(|g| g.mono.clone()).collect();
        assert_eq!(
            monos,
            vec![
                vec![-1, -1],
                vec![-1, 0],
                vec![0, -1],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
        // all six have valuation 1
        for g in &chart.generators {
            assert_eq!(g.true_val, "1");
        }
        // opposite pairs give q^2; adjacent products give q * middle
        let pure_count = chart
            .relations
            .iter()
            .filter(|r| r.rhs.iter().all(|&e| e == 0) && r.q_power == "2")
            .count();
        assert_eq!(pure_count, 3, "three opposite pairs");
        let exchange_count = chart
            .relations
            .iter()
            .filter(|r| r.rhs.iter().sum::<u32>() == 1 && r.q_power == "1")
            .count();
        assert_eq!(exchange_count, 6, "six adjacent products");
    }

    #[test]
    fn rank_bound() {
        let d = DegenerationData::new(
            Form::new(vec![
                vec![2, 0, 0],
                vec![0, 2, 0],
                vec![0, 0, 2],
            ])
            .unwrap(),
            Sublattice::full(3),
        )
        .unwrap();
        assert_eq!(mumford_chart(&d, &[0, 0, 0]), Err(DegenError::RankTooLarge(3)));
    }
}
