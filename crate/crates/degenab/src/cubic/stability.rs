//! One-parameter-subgroup weight checks and the Hesse pencil scan.

use serde::Serialize;

use crate::exact::CycNum;

use super::classify::{classify, CubicClass, CubicClassLabel, CubicError, Stability};
use super::ternary::TernaryForm;

/// Weight data of one (frame, one-parameter subgroup) pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightLine {
    pub frame: usize,
    pub rho: [i64; 3],
    pub max_weight: i64,
    pub destabilized: bool,
}

/// For each diagonal one-parameter subgroup `rho` (weights summing to zero)
/// and each supplied coordinate frame, compute the maximum `rho`-weight over
/// the monomials present; the pair destabilizes when the maximum is
/// negative. A one-sided consistency check, never the classifier.
pub fn hilbert_mumford_check(
    f: &TernaryForm,
    frames: &[[[CycNum; 3]; 3]],
    rhos: &[[i64; 3]],
) -> Vec<WeightLine> {
    let mut out = Vec::new();
    for (fi, frame) in frames.iter().enumerate() {
        let g = f.compose(frame);
        for rho in rhos {
            assert_eq!(rho.iter().sum::<i64>(), 0, "weights must sum to zero");
            let max_weight = g
                .terms()
                .map(|(m, _)| rho[0] * m.0 as i64 + rho[1] * m.1 as i64 + rho[2] * m.2 as i64)
                .max()
                .expect("nonzero form");
            out.push(WeightLine {
                frame: fi,
                rho: *rho,
                max_weight,
                destabilized: max_weight < 0,
            });
        }
    }
    out
}

/// The Hesse cubic `mu0 (x0^3 + x1^3 + x2^3) - 3 mu1 x0 x1 x2`.
pub fn hesse_cubic(mu0: &CycNum, mu1: &CycNum) -> TernaryForm {
    TernaryForm::from_terms(
        3,
        vec![
            ((3, 0, 0), mu0.clone()),
            ((0, 3, 0), mu0.clone()),
            ((0, 0, 3), mu0.clone()),
            ((1, 1, 1), &CycNum::from_int(-3) * mu1),
        ],
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub mu: String,
    pub label: CubicClassLabel,
    pub stability: Stability,
}

#[derive(Clone, Debug, Serialize)]
pub struct PencilScan {
    pub schema: String,
    pub rows: Vec<ScanRow>,
    /// Every member GIT-stable, triangles exactly at the four special values.
    pub verdict_ok: bool,
}

/// Classify the Hesse pencil over a sample grid together with the four
/// singular parameter values; the pencil is GIT-stable throughout, smooth
/// except at `mu = infinity, 1, zeta_3, zeta_3^2` where it is a triangle.
pub fn hesse_pencil_scan() -> Result<PencilScan, CubicError> {
    let zeta = CycNum::root_of_unity(3, 1);
    let mut samples: Vec<(String, CycNum, CycNum)> = vec![
        ("infinity".into(), CycNum::zero(), CycNum::one()),
        ("1".into(), CycNum::one(), CycNum::one()),
        ("zeta3".into(), CycNum::one(), zeta.clone()),
        ("zeta3^2".into(), CycNum::one(), &zeta * &zeta),
    ];
    for m in [0i64, 2, -1, 3, -2, 5] {
        samples.push((format!("{}", m), CycNum::one(), CycNum::from_int(m)));
    }
    samples.push((
        "1/2".into(),
        CycNum::one(),
        CycNum::from_rat(crate::exact::ratio(1, 2)),
    ));
    samples.push(("1+zeta3".into(), CycNum::one(), &CycNum::one() + &zeta));
    samples.push(("2*zeta3".into(), CycNum::one(), &CycNum::from_int(2) * &zeta));

    let mut rows = Vec::new();
    let mut verdict_ok = true;
    for (name, mu0, mu1) in samples {
        let f = hesse_cubic(&mu0, &mu1);
        let class: CubicClass = classify(&f)?;
        let special = mu0.is_zero() || {
            // mu^3 = 1 <=> mu in {1, zeta, zeta^2}
            let mu = &mu1 * &mu0.inv();
            mu.pow(3) == CycNum::one()
        };
        let expected = if special {
            CubicClassLabel::Triangle
        } else {
            CubicClassLabel::SmoothElliptic
        };
        if class.label != expected || class.stability != Stability::GITStable {
            verdict_ok = false;
        }
        rows.push(ScanRow { mu: name, label: class.label, stability: class.stability });
    }
    Ok(PencilScan { schema: "degenab/1".into(), rows, verdict_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    fn identity() -> [[CycNum; 3]; 3] {
        [
            [c(1), c(0), c(0)],
            [c(0), c(1), c(0)],
            [c(0), c(0), c(1)],
        ]
    }

    #[test]
    fn weight_of_triangle_is_zero() {
        // x0 x1 x2 has weight 0 for every diagonal rho
        let f = hesse_cubic(&CycNum::zero(), &CycNum::one());
        let lines = hilbert_mumford_check(
            &f,
            &[identity()],
            &[[1, 0, -1], [2, -1, -1], [1, 1, -2]],
        );
        for l in lines {
            assert_eq!(l.max_weight, 0);
            assert!(!l.destabilized);
        }
    }

    #[test]
    fn cusp_is_destabilized() {
        // x2 x1^2 - x0^3 with rho = (-2, -3, 5)... weights: x2 x1^2 ->
        // -6 + 5 = -1, x0^3 -> -6: destabilized
        let f = TernaryForm::from_terms(
            3,
            vec![((0, 2, 1), c(1)), ((3, 0, 0), c(-1))],
        );
        let lines = hilbert_mumford_check(&f, &[identity()], &[[-2, -3, 5]]);
        assert!(lines[0].destabilized);
    }

    #[test]
    fn fermat_never_destabilized() {
        let f = hesse_cubic(&CycNum::one(), &CycNum::zero());
        let rhos: Vec<[i64; 3]> = vec![
            [1, 0, -1],
            [0, 1, -1],
            [2, -1, -1],
            [1, 1, -2],
            [-2, -3, 5],
            [5, -1, -4],
        ];
        let lines = hilbert_mumford_check(&f, &[identity()], &rhos);
        assert!(lines.iter().all(|l| !l.destabilized));
    }

    #[test]
    fn pencil_scan_verdict() {
        let scan = hesse_pencil_scan().unwrap();
        assert!(scan.verdict_ok);
        let triangles = scan
            .rows
            .iter()
            .filter(|r| r.label == CubicClassLabel::Triangle)
            .count();
        assert_eq!(triangles, 4);
    }
}
