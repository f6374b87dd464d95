//! Degeneration data in the Faltings-Chai normal form, its validator,
//! truncated theta series, tropical limits and affine chart presentations.
//!
//! The data is a lattice `X = Z^g`, a finite-index sublattice `Y`, and
//! `a(x) = q^(B(x,x)/2) * u(x)` with `B` even positive definite and `u` a
//! unit of the shape `alpha^(x^T M x)`; then
//! `b(x, y) = a(x+y) a(x)^-1 a(y)^-1 = q^B(x,y) * alpha^(2 x^T M y)`.

mod chart;
mod hesse_series;
mod theta;

pub use chart::{mumford_chart, rank1_gluing_identities, ChartGenerator, ChartPresentation,
    ChartRelation, SpecialFiber};
pub use hesse_series::{hesse_theta_identities, HesseThetaReport};
pub use theta::{
    theta_limit, theta_limit_numeric_check, theta_truncated, NumericCheck, ThetaLimit,
};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::delaunay::{Form, Sublattice};
use crate::exact::{rat, CycNum, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum DegenError {
    #[error("rank too large: {0} (charts are supported for rank <= 2)")]
    RankTooLarge(usize),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("truncation inconclusive: {0}")]
    InconclusiveTruncation(String),
    #[error("numeric check requires rational unit values ({0})")]
    NonRationalUnit(String),
    #[error("q0 must satisfy 0 < q0 < 1/4")]
    BadQ0,
}

/// The unit part `u(x) = base^(x^T quad x)` of `a(x)`, with `quad` a
/// symmetric integer matrix; `u(0) = 1` and
/// `u(x+y) / u(x) u(y) = base^(2 x^T quad y)` is bilinear.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitPart {
    pub base: CycNum,
    pub quad: Vec<Vec<i64>>,
}

impl UnitPart {
    pub fn eval(&self, x: &[i64]) -> CycNum {
        let mut e = 0i64;
        for i in 0..x.len() {
            for j in 0..x.len() {
                e += x[i] * self.quad[i][j] * x[j];
            }
        }
        self.base.pow(e)
    }

    /// Exponent of the bilinear unit `b`-part on a pair.
    pub fn bilinear_exponent(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut e = 0i64;
        for i in 0..x.len() {
            for j in 0..y.len() {
                e += 2 * x[i] * self.quad[i][j] * y[j];
            }
        }
        e
    }
}

/// Degeneration data with the canonical valuation `val a(x) = B(x,x)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerationData {
    pub form: Form,
    pub sublattice: Sublattice,
    pub unit: Option<UnitPart>,
}

impl DegenerationData {
    pub fn new(form: Form, sublattice: Sublattice) -> Result<Self, DegenError> {
        if form.rank() != sublattice.rank() {
            return Err(DegenError::DimensionMismatch);
        }
        Ok(DegenerationData { form, sublattice, unit: None })
    }

    pub fn with_unit(mut self, unit: UnitPart) -> Self {
        assert_eq!(unit.quad.len(), self.form.rank());
        self.unit = Some(unit);
        self
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// `val_q a(x) = B(x, x) / 2`.
    pub fn a_val(&self, x: &[i64]) -> Rat {
        rat(self.form.eval_int(x, x)) / rat(2)
    }

    pub fn a_unit(&self, x: &[i64]) -> CycNum {
        match &self.unit {
            Some(u) => u.eval(x),
            None => CycNum::one(),
        }
    }

    /// `val_q b(x, y) = B(x, y)`.
    pub fn b_val(&self, x: &[i64], y: &[i64]) -> Rat {
        rat(self.form.eval_int(x, y))
    }

    pub fn b_unit(&self, x: &[i64], y: &[i64]) -> CycNum {
        match &self.unit {
            Some(u) => u.base.pow(u.bilinear_exponent(x, y)),
            None => CycNum::one(),
        }
    }
}

/// Outcome of one condition of the validator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Validation report for general degeneration data given as a black-box
/// `a(x) = (q-valuation, unit)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub schema: String,
    pub conditions: Vec<ConditionResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

/// Check conditions (i)-(iv)* on a candidate `a`: (i) `a(0) = 1`,
/// (ii) `b(x,y) = a(x+y) a(x)^-1 a(y)^-1` symmetric bilinear, (iii) the
/// valuation form `B` positive definite, (iv)* `B` even with
/// `val a(x) = B(x,x)/2`. Bilinearity is checked exactly on the standard
/// generators and on 50 deterministic pseudo-random pairs.
pub fn validate_degeneration_data(
    g: usize,
    a: &dyn Fn(&[i64]) -> (Rat, CycNum),
) -> ValidationReport {
    let mut conditions = Vec::new();

    // (i) a(0) = 1
    let (v0, u0) = a(&vec![0; g]);
    let pass_i = v0.is_zero() && u0 == CycNum::one();
    conditions.push(ConditionResult {
        name: "(i) a(0) = 1".into(),
        passed: pass_i,
        witness: if pass_i { None } else { Some(format!("a(0) = q^{} * {}", v0, u0)) },
    });

    // helper: b(x, y) as (valuation, unit)
    let b = |x: &[i64], y: &[i64]| -> (Rat, CycNum) {
        let xy: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
        let (vxy, uxy) = a(&xy);
        let (vx, ux) = a(x);
        let (vy, uy) = a(y);
        (vxy - vx - vy, &uxy * &(&ux * &uy).inv())
    };

    // (ii) symmetry and biadditivity on generators and random pairs
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xDE6E);
    let mut pass_ii = true;
    let mut witness_ii = None;
    let mut pairs: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let mut x = vec![0i64; g];
            x[i] = 1;
            let mut y = vec![0i64; g];
            y[j] = 1;
            let mut z = vec![0i64; g];
            z[(i + j) % g] = 1;
            pairs.push((x, y, z));
        }
    }
    for _ in 0..50 {
        let r = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<i64> {
            (0..g).map(|_| rng.gen_range(-4..=4)).collect()
        };
        pairs.push((r(&mut rng), r(&mut rng), r(&mut rng)));
    }
    for (x, y, z) in &pairs {
        let (vxy, uxy) = b(x, y);
        let (vyx, uyx) = b(y, x);
        if vxy != vyx || uxy != uyx {
            pass_ii = false;
            witness_ii = Some(format!("b not symmetric at x={:?}, y={:?}", x, y));
            break;
        }
        // additivity in the first slot: b(x+z, y) = b(x, y) b(z, y)
        let xz: Vec<i64> = x.iter().zip(z).map(|(p, q)| p + q).collect();
        let (v1, u1) = b(&xz, y);
        let (v2, u2) = b(z, y);
        if v1 != &vxy + &v2 || u1 != &uxy * &u2 {
            pass_ii = false;
            witness_ii = Some(format!(
                "b not bilinear: witness ({:?}, {:?}) against shift {:?}",
                x, y, z
            ));
            break;
        }
    }
    conditions.push(ConditionResult {
        name: "(ii) b symmetric bilinear".into(),
        passed: pass_ii,
        witness: witness_ii,
    });

    // (iii) B = val b positive definite (only meaningful if (ii) held)
    let mut gram = vec![vec![Rat::zero(); g]; g];
    for i in 0..g {
        for j in 0..g {
            let mut x = vec![0i64; g];
            x[i] = 1;
            let mut y = vec![0i64; g];
            y[j] = 1;
            gram[i][j] = b(&x, &y).0;
        }
    }
    let mut pass_iii = pass_ii;
    let mut witness_iii = None;
    if pass_ii {
        for k in 1..=g {
            let minor: Vec<Vec<Rat>> = (0..k)
                .map(|i| (0..k).map(|j| gram[i][j].clone()).collect())
                .collect();
            let d = crate::delaunay::ratlin::det(&minor);
            if d <= Rat::zero() {
                pass_iii = false;
                witness_iii = Some(format!("leading {}x{} minor = {}", k, k, d));
                break;
            }
        }
    } else {
        witness_iii = Some("skipped: b is not bilinear".into());
    }
    conditions.push(ConditionResult {
        name: "(iii) val_q b positive definite".into(),
        passed: pass_iii,
        witness: witness_iii,
    });

    // (iv)* B even and val a(x) = B(x,x)/2
    let mut pass_iv = pass_ii;
    let mut witness_iv = None;
    if pass_ii {
        for i in 0..g {
            if (&gram[i][i] % rat(2)) != Rat::zero() {
                pass_iv = false;
                witness_iv = Some(format!("B(e_{0}, e_{0}) = {1} is odd", i, gram[i][i]));
                break;
            }
        }
        if pass_iv {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xA7A1);
            for _ in 0..50 {
                let x: Vec<i64> = (0..g).map(|_| rng.gen_range(-4..=4)).collect();
                let (vx, _) = a(&x);
                let mut bxx = Rat::zero();
                for i in 0..g {
                    for j in 0..g {
                        bxx += &gram[i][j] * rat(x[i] * x[j]);
                    }
                }
                if vx != bxx / rat(2) {
                    pass_iv = false;
                    witness_iv = Some(format!("val a({:?}) != B(x,x)/2", x));
                    break;
                }
            }
        }
    } else {
        witness_iv = Some("skipped: b is not bilinear".into());
    }
    conditions.push(ConditionResult {
        name: "(iv)* B even and val a(x) = B(x,x)/2".into(),
        passed: pass_iv,
        witness: witness_iv,
    });

    ValidationReport { schema: "degenab/1".into(), conditions }
}

/// The canonical `a` of a [`DegenerationData`], for feeding the validator.
pub fn canonical_a(data: &DegenerationData) -> impl Fn(&[i64]) -> (Rat, CycNum) + '_ {
    move |x| (data.a_val(x), data.a_unit(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1() -> DegenerationData {
        DegenerationData::new(
            Form::new(vec![vec![2]]).unwrap(),
            Sublattice::new(vec![vec![3]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn validator_accepts_rank1_canonical() {
        // a(x) = q^(x^2)
        let d = rank1();
        let report = validate_degeneration_data(1, &canonical_a(&d));
        assert!(report.all_passed(), "{:?}", report);
    }

    #[test]
    fn validator_accepts_case1_unit() {
        // a(x) = q^(x1^2 + x2^2) alpha^(2 x1 x2) with alpha = zeta_3
        let d = DegenerationData::new(
            Form::new(vec![vec![2, 0], vec![0, 2]]).unwrap(),
            Sublattice::new(vec![vec![3, 0], vec![0, 3]]).unwrap(),
        )
        .unwrap()
        .with_unit(UnitPart {
            base: CycNum::root_of_unity(3, 1),
            quad: vec![vec![0, 1], vec![1, 0]],
        });
        let report = validate_degeneration_data(2, &canonical_a(&d));
        assert!(report.all_passed(), "{:?}", report);
    }

    #[test]
    fn validator_rejects_cubic_exponent() {
        // a(x) = q^(x^3) fails bilinearity with witness
        let a = |x: &[i64]| (rat(x[0].pow(3)), CycNum::one());
        let report = validate_degeneration_data(1, &a);
        assert!(!report.conditions[1].passed);
        assert!(report.conditions[1].witness.is_some());
    }

    #[test]
    fn validator_rejects_indefinite() {
        // a(x) = q^((x1^2 - x2^2)) has indefinite valuation form
        let a = |x: &[i64]| (rat(x[0] * x[0] - x[1] * x[1]), CycNum::one());
        let report = validate_degeneration_data(2, &a);
        assert!(report.conditions[1].passed, "bilinearity holds");
        assert!(!report.conditions[2].passed, "definiteness must fail");
    }

    #[test]
    fn validator_rejects_odd_form() {
        // a(x) = q^(x^2 / 2): B(x,x) = x^2 is odd at e_1
        let a = |x: &[i64]| (rat(x[0] * x[0]) / rat(2), CycNum::one());
        let report = validate_degeneration_data(1, &a);
        assert!(!report.conditions[3].passed);
    }
}
