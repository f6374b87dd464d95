//! Exact singularity classification of plane cubics over a cyclotomic
//! field, with GIT stability and stabilizer data read off the class.
//!
//! Pipeline: detect repeated factors by bivariate gcd; otherwise find all
//! singular points through pairwise resultants of the polar quadrics in a
//! generic frame, factoring the common shadow polynomial over the field
//! (one auxiliary quadratic extension at most); classify by the number of
//! singular points and the tangent cone at a rational one.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{factor_in_cyclotomic, CycNum, KPoly};
use crate::linalg::Mat;

use super::ternary::{bivariate_gcd, resultant_x2, TernaryForm};

#[derive(Debug, Error, PartialEq)]
pub enum CubicError {
    #[error("the zero form cannot be classified")]
    ZeroForm,
    #[error("not a cubic form (degree {0})")]
    WrongDegree(u32),
    #[error("factorization inconclusive over the bounded extension tower: {0}")]
    NeedsExtension(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CubicClassLabel {
    SmoothElliptic,
    Triangle,
    LineConicTransverse,
    IrreducibleNode,
    ThreeLinesConcurrent,
    LineConicTangent,
    IrreducibleCusp,
    DoubleLinePlusLine,
    TripleLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stability {
    GITStable,
    SemistableNotGITStable,
    NotSemistable,
}

/// The stabilizer entry of the classification table: the dimension of the
/// reductive part of the projective stabilizer, with the finite cases
/// spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StabilizerDim {
    Finite,
    ZMod2,
    Dim(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificates {
    pub singular_points: Vec<Vec<String>>,
    /// Conjugate pairs of singular points, by the minimal polynomial of
    /// their shadow and the rational line joining them.
    pub conjugate_pairs: Vec<String>,
    pub factors: Vec<String>,
    /// Dimension of `{E in sl3 : E . F in <F>}` (exact linear algebra;
    /// differs from the stabilizer entry by unipotent directions).
    pub lie_stabilizer_dim: usize,
    pub destabilizing_1ps: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicClass {
    pub label: CubicClassLabel,
    pub stability: Stability,
    pub stabilizer: StabilizerDim,
    /// Rows not listed in the stability table.
    pub beyond_table: bool,
    pub certificates: Certificates,
}

/// The (class -> stability, stabilizer) map; rows one through seven follow
/// the stability table, the last two extend it.
pub fn table_row(label: CubicClassLabel) -> (Stability, StabilizerDim, bool) {
    use CubicClassLabel::*;
    use Stability::*;
    match label {
        SmoothElliptic => (GITStable, StabilizerDim::Finite, false),
        Triangle => (GITStable, StabilizerDim::Dim(2), false),
        LineConicTransverse => (SemistableNotGITStable, StabilizerDim::Dim(1), false),
        IrreducibleNode => (SemistableNotGITStable, StabilizerDim::ZMod2, false),
        ThreeLinesConcurrent => (NotSemistable, StabilizerDim::Dim(1), false),
        LineConicTangent => (NotSemistable, StabilizerDim::Dim(1), false),
        IrreducibleCusp => (NotSemistable, StabilizerDim::Dim(1), false),
        DoubleLinePlusLine => (NotSemistable, StabilizerDim::Dim(2), true),
        TripleLine => (NotSemistable, StabilizerDim::Dim(4), true),
    }
}

fn c(n: i64) -> CycNum {
    CycNum::from_int(n)
}

fn identity_frame() -> [[CycNum; 3]; 3] {
    [
        [c(1), c(0), c(0)],
        [c(0), c(1), c(0)],
        [c(0), c(0), c(1)],
    ]
}

fn int_frame(rows: [[i64; 3]; 3]) -> [[CycNum; 3]; 3] {
    rows.map(|r| r.map(c))
}

/// Deterministic frames for general position; the first that passes the
/// genericity checks is used.
fn frames() -> Vec<[[CycNum; 3]; 3]> {
    vec![
        identity_frame(),
        int_frame([[1, 0, 1], [0, 1, 1], [1, 1, 0]]),
        int_frame([[1, 1, 1], [0, 1, 1], [0, 0, 1]]),
        int_frame([[1, 2, 0], [1, 1, 1], [0, 1, 1]]),
        int_frame([[2, 1, 1], [1, 2, 1], [1, 1, 1]]),
        int_frame([[1, 0, 2], [2, 1, 0], [1, 1, 1]]),
        int_frame([[1, -1, 1], [1, 1, 0], [0, 1, 1]]),
        int_frame([[3, 1, 2], [1, 1, 1], [2, 1, 1]]),
        int_frame([[1, 2, 3], [1, 1, 2], [2, 1, 1]]),
        int_frame([[1, 3, 1], [0, 1, 2], [1, 0, 1]]),
    ]
}

fn frame_inverse(a: &[[CycNum; 3]; 3]) -> [[CycNum; 3]; 3] {
    let m = Mat::from_rows(a.iter().map(|r| r.to_vec()).collect());
    let inv = m.inverse().expect("frame is invertible");
    let mut out = identity_frame();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = inv[(i, j)].clone();
        }
    }
    out
}

fn apply_frame(a: &[[CycNum; 3]; 3], p: &[CycNum; 3]) -> [CycNum; 3] {
    let mut out = [CycNum::zero(), CycNum::zero(), CycNum::zero()];
    for i in 0..3 {
        for j in 0..3 {
            out[i] = &out[i] + &(&a[i][j] * &p[j]);
        }
    }
    out
}

fn normalize_point(p: &[CycNum; 3]) -> [CycNum; 3] {
    let pivot = p.iter().find(|x| !x.is_zero()).expect("projective point");
    let inv = pivot.inv();
    [&p[0] * &inv, &p[1] * &inv, &p[2] * &inv]
}

/// A verified singular point over the field, or a conjugate pair over one
/// quadratic extension.
#[derive(Clone, Debug)]
enum SingularLocus {
    Rational([CycNum; 3]),
    /// `(minimal polynomial of the shadow, joining line)`.
    Pair(KPoly, [CycNum; 3]),
}

/// Classify a plane cubic exactly. See the module documentation.
pub fn classify(f: &TernaryForm) -> Result<CubicClass, CubicError> {
    if f.is_zero() {
        return Err(CubicError::ZeroForm);
    }
    if f.degree() != 3 {
        return Err(CubicError::WrongDegree(f.degree()));
    }

    // repeated factors first (non-reduced cubics)
    if let Some(result) = classify_nonreduced(f)? {
        return Ok(result);
    }

    // reduced: find all singular points in a generic frame
    let (points, frame) = singular_points_in_frame(f)?;
    let frame_inv = frame_inverse(&frame);
    let count: usize = points
        .iter()
        .map(|p| match p {
            SingularLocus::Rational(_) => 1,
            SingularLocus::Pair(_, _) => 2,
        })
        .sum();

    let label = match count {
        0 => CubicClassLabel::SmoothElliptic,
        1 => {
            let SingularLocus::Rational(p) = &points[0] else {
                unreachable!("a conjugate pair counts two points")
            };
            classify_one_singular(f, &apply_frame(&frame, p))?
        }
        2 => CubicClassLabel::LineConicTransverse,
        3 => CubicClassLabel::Triangle,
        n => {
            return Err(CubicError::NeedsExtension(format!(
                "a reduced cubic cannot have {} singular points",
                n
            )))
        }
    };

    // certificates
    let mut singular_points = Vec::new();
    let mut conjugate_pairs = Vec::new();
    for p in &points {
        match p {
            SingularLocus::Rational(q) => {
                let orig = normalize_point(&apply_frame(&frame, q));
                singular_points.push(orig.iter().map(|x| x.to_string()).collect());
            }
            SingularLocus::Pair(minpoly, line) => {
                // the line transforms contravariantly: L' = L o A^-1
                let l = transform_line(line, &frame_inv);
                conjugate_pairs.push(format!(
                    "shadow minimal polynomial {:?}, joined by line {}",
                    minpoly,
                    line_string(&l)
                ));
            }
        }
    }
    let factors = factor_certificates(f, label, &points, &frame, &frame_inv);

    let (stability, stabilizer, beyond) = table_row(label);
    let dest = if stability == Stability::NotSemistable {
        default_destabilizer(f, &singular_points)
    } else {
        None
    };
    Ok(CubicClass {
        label,
        stability,
        stabilizer,
        beyond_table: beyond,
        certificates: Certificates {
            singular_points,
            conjugate_pairs,
            factors,
            lie_stabilizer_dim: lie_stabilizer_dim(f),
            destabilizing_1ps: dest,
        },
    })
}

/// Detect and classify non-reduced cubics: `L^2 M` or `L^3`.
fn classify_nonreduced(f: &TernaryForm) -> Result<Option<CubicClass>, CubicError> {
    // work in a frame where x2^3 appears, so dehomogenizing at x2 = 1 is
    // faithful
    for frame in frames() {
        let g = f.compose(&frame);
        if g.coeff((0, 0, 3)).is_zero() {
            continue;
        }
        let bi = g.dehomogenize_x2();
        let fx: Vec<KPoly> = {
            // d/dx of sum c_j(x) y^j
            bi.iter().map(|p| p.derivative()).collect()
        };
        let fy: Vec<KPoly> = bi
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, p)| p.scale(&c(j as i64)))
            .collect();
        let d1 = bivariate_gcd(&bi, &fx);
        let d = bivariate_gcd(&d1, &fy);
        let total_deg = bivar_total_degree(&d);
        if total_deg == 0 {
            return Ok(None); // reduced
        }
        // repeated factor: d = L (double line case) or L^2 (triple line)
        let (label, factors) = if total_deg == 1 {
            let l = homogenize_line(&d, &frame);
            let l2 = l.mul(&l);
            let m = f
                .divide_exact(&l2)
                .ok_or_else(|| CubicError::NeedsExtension("L^2 does not divide".into()))?;
            if m.divide_exact(&l).is_some() {
                (CubicClassLabel::TripleLine, vec![format!("({})^3", form_string(&l))])
            } else {
                (
                    CubicClassLabel::DoubleLinePlusLine,
                    vec![format!("({})^2", form_string(&l)), form_string(&m)],
                )
            }
        } else {
            // d has total degree 2: the square of the triple line
            let sf = bivar_squarefree_line(&d)
                .ok_or_else(|| CubicError::NeedsExtension("repeated factor not a line".into()))?;
            let l = homogenize_line(&sf, &frame);
            (CubicClassLabel::TripleLine, vec![format!("({})^3", form_string(&l))])
        };
        let (stability, stabilizer, beyond) = table_row(label);
        return Ok(Some(CubicClass {
            label,
            stability,
            stabilizer,
            beyond_table: beyond,
            certificates: Certificates {
                singular_points: vec![],
                conjugate_pairs: vec![],
                factors,
                lie_stabilizer_dim: lie_stabilizer_dim(f),
                destabilizing_1ps: default_destabilizer(f, &[]),
            },
        }));
    }
    Err(CubicError::NeedsExtension("no frame exposes x2^3".into()))
}

fn bivar_total_degree(d: &[KPoly]) -> usize {
    d.iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| j + p.deg())
        .max()
        .unwrap_or(0)
}

/// A degree-1 bivariate polynomial `[c0(x), c1]` back to a linear form in
/// the original coordinates.
fn homogenize_line(d: &[KPoly], frame: &[[CycNum; 3]; 3]) -> TernaryForm {
    // d = c0(x) + c1 * y with deg c0 <= 1, c1 constant (after normalization)
    let c0 = d.first().cloned().unwrap_or_else(KPoly::zero);
    let c1 = d.get(1).cloned().unwrap_or_else(KPoly::zero);
    let l = TernaryForm::from_terms(
        1,
        vec![
            ((1, 0, 0), c0.coeff(1)),
            ((0, 1, 0), c1.coeff(0)),
            ((0, 0, 1), c0.coeff(0)),
        ],
    );
    // translate back through the frame: we classified g = f o A, a factor L
    // of g corresponds to L o A^-1 of f
    let inv = frame_inverse(frame);
    l.compose(&inv)
}

/// Extract `L` from `d = c * L^2` for a bivariate quadratic, if it is one.
fn bivar_squarefree_line(d: &[KPoly]) -> Option<Vec<KPoly>> {
    // d(x, y) = a y^2 + b(x) y + c(x) with b^2 - 4ac = 0, or a quadratic in
    // x alone; handle via the generic square-root-of-quadratic pattern.
    match d.len() {
        3 => {
            let a = d[2].coeff(0);
            if a.is_zero() {
                return None;
            }
            // L = y + b/(2a) with b linear in x
            let b = d[1].clone();
            let half_inv = (&c(2) * &a).inv();
            Some(vec![b.scale(&half_inv), KPoly::one()])
        }
        1 => {
            // pure in x: c(x) = (alpha x + beta)^2
            let p = &d[0];
            if p.deg() != 2 {
                return None;
            }
            let sf = p.squarefree_part();
            if sf.deg() != 1 {
                return None;
            }
            Some(vec![sf])
        }
        _ => None,
    }
}

/// Find all singular points of a reduced cubic, in some valid frame.
/// Returns the points in frame coordinates with the frame used.
fn singular_points_in_frame(
    f: &TernaryForm,
) -> Result<(Vec<SingularLocus>, [[CycNum; 3]; 3]), CubicError> {
    'frames: for frame in frames() {
        let g = f.compose(&frame);
        if g.coeff((0, 0, 3)).is_zero()
            || g.coeff((1, 0, 2)).is_zero()
            || g.coeff((0, 1, 2)).is_zero()
        {
            continue;
        }
        let p0 = g.partial(0);
        let p1 = g.partial(1);
        let p2 = g.partial(2);
        let r01 = resultant_x2(&p0, &p1);
        let r02 = resultant_x2(&p0, &p2);
        let r12 = resultant_x2(&p1, &p2);
        for r in [&r01, &r02, &r12] {
            if r.degree() != Some(4) {
                continue 'frames; // shadow at infinity or degenerate pair
            }
        }
        let gcd_all = r01.gcd(&r02).gcd(&r12);
        if gcd_all.deg() == 0 {
            return Ok((vec![], frame));
        }
        let shadows = gcd_all.squarefree_part();
        let mut points: Vec<SingularLocus> = Vec::new();
        for (irr, _) in factor_in_cyclotomic(&shadows) {
            match irr.deg() {
                1 => {
                    let t0 = -irr.coeff(0);
                    // fiber over the shadow: gcd in x2 of the three partials
                    let q0 = p0.x2_coefficients_at(&t0);
                    let q1 = p1.x2_coefficients_at(&t0);
                    let q2 = p2.x2_coefficients_at(&t0);
                    let fiber = q0.gcd(&q1).gcd(&q2);
                    match fiber.degree() {
                        None | Some(0) => {} // spurious shadow
                        Some(1) => {
                            let z = -fiber.coeff(0);
                            let p = [t0.clone(), CycNum::one(), z];
                            // exact verification
                            for part in [&p0, &p1, &p2] {
                                if !part.eval(&p).is_zero() {
                                    continue 'frames;
                                }
                            }
                            points.push(SingularLocus::Rational(p));
                        }
                        _ => continue 'frames, // degenerate projection
                    }
                }
                2 => {
                    // one auxiliary quadratic extension K[t]/(irr)
                    match pair_over_quadratic(&p0, &p1, &p2, &irr) {
                        PairResult::None => {}
                        PairResult::Pair(line) => {
                            points.push(SingularLocus::Pair(irr.clone(), line))
                        }
                        PairResult::Degenerate => continue 'frames,
                    }
                }
                _ => {
                    return Err(CubicError::NeedsExtension(format!(
                        "singular shadows need a degree-{} extension",
                        irr.deg()
                    )))
                }
            }
        }
        return Ok((points, frame));
    }
    Err(CubicError::NeedsExtension("no generic frame found".into()))
}

enum PairResult {
    None,
    Pair([CycNum; 3]),
    Degenerate,
}

/// Work in `K[t]/(phi)` for a monic irreducible quadratic `phi`: compute
/// the fiber gcd of the partials over the conjugate shadow pair; a linear
/// fiber yields a conjugate pair of singular points whose joining line is
/// rational.
fn pair_over_quadratic(p0: &TernaryForm, p1: &TernaryForm, p2: &TernaryForm, phi: &KPoly) -> PairResult {
    // elements of the extension are KPoly of degree < 2, reduced mod phi
    let reduce = |p: KPoly| -> KPoly { p.divmod(phi).1 };
    let mul = |a: &KPoly, b: &KPoly| -> KPoly { reduce(a.mul(b)) };
    let inv = |a: &KPoly| -> KPoly {
        // extended Euclid in K[t] against phi
        let (mut r0, mut r1) = (phi.clone(), a.clone());
        let (mut s0, mut s1) = (KPoly::zero(), KPoly::one());
        while !r1.is_zero() && r1.deg() >= 1 {
            let (q, r) = r0.divmod(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        assert!(!r1.is_zero(), "phi is irreducible so nonzero elements invert");
        let c = r1.coeff(0).inv();
        reduce(s1.scale(&c))
    };

    // the partial q(t, 1, x2) with t the extension generator: coefficients
    // of x2^k are KPoly in t, reduced mod phi
    let lift = |p: &TernaryForm| -> Vec<KPoly> {
        let d = p.degree() as usize;
        let mut out = vec![KPoly::zero(); d + 1];
        for (m, coeff) in p.terms() {
            // coeff * t^(m.0) contributes to x2^(m.2)
            let mut term = KPoly::constant(coeff.clone());
            for _ in 0..m.0 {
                term = term.mul(&KPoly::x());
            }
            out[m.2 as usize] = out[m.2 as usize].add(&term);
        }
        out.into_iter().map(reduce).collect()
    };

    let trim = |mut v: Vec<KPoly>| -> Vec<KPoly> {
        while v.last().map_or(false, |x| x.is_zero()) {
            v.pop();
        }
        v
    };
    // Euclidean gcd of polynomials in x2 over the extension field
    let rem = |a: &[KPoly], b: &[KPoly]| -> Vec<KPoly> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lead_inv = inv(b.last().unwrap());
        while r.len() > db {
            let lr = r.last().unwrap().clone();
            let q = mul(&lr, &lead_inv);
            let dr = r.len() - 1;
            for (i, bc) in b.iter().enumerate() {
                let sub = mul(&q, bc);
                r[dr - db + i] = r[dr - db + i].sub(&sub);
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        r
    };
    let gcd = |a: Vec<KPoly>, b: Vec<KPoly>| -> Vec<KPoly> {
        let mut a = trim(a);
        let mut b = trim(b);
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = std::mem::replace(&mut b, r);
        }
        a
    };

    let q0 = lift(p0);
    let q1 = lift(p1);
    let q2 = lift(p2);
    let fiber = gcd(gcd(q0, q1), q2);
    match fiber.len() {
        0 | 1 => PairResult::None,
        2 => {
            // x2 = -c0/c1 = z0 + z1 t in the extension
            let z = {
                let c1_inv = inv(&fiber[1]);
                let neg = fiber[0].scale(&c(-1));
                mul(&neg, &c1_inv)
            };
            let z0 = z.coeff(0);
            let z1 = z.coeff(1);
            // line through [t, 1, z(t)] and its conjugate:
            // L = (-z1, -z0, 1) when z1 != 0 or in general solves
            // L0 t + L1 + L2 z(t) = 0 identically
            PairResult::Pair([-&z1, -&z0, CycNum::one()])
        }
        _ => PairResult::Degenerate,
    }
}

/// Classify a reduced cubic with exactly one singular point, given in the
/// original coordinates.
fn classify_one_singular(
    f: &TernaryForm,
    p: &[CycNum; 3],
) -> Result<CubicClassLabel, CubicError> {
    // translate p to [0,0,1] by an invertible matrix with third column p
    let t = complete_to_frame(p);
    let g = f.compose(&t);
    assert!(g.coeff((0, 0, 3)).is_zero(), "translated point must be singular");
    assert!(
        g.coeff((1, 0, 2)).is_zero() && g.coeff((0, 1, 2)).is_zero(),
        "translated point must kill the x2^2 terms"
    );
    // g = x2 * f2(x0, x1) + f3(x0, x1)
    let f2 = [g.coeff((2, 0, 1)), g.coeff((1, 1, 1)), g.coeff((0, 2, 1))];
    let f2_zero = f2.iter().all(|c| c.is_zero());
    if f2_zero {
        // cone over a squarefree binary cubic
        return Ok(CubicClassLabel::ThreeLinesConcurrent);
    }
    // disc of f2 = b^2 - 4ac
    let disc = &(&f2[1] * &f2[1]) - &(&(&c(4) * &f2[0]) * &f2[2]);
    if !disc.is_zero() {
        return Ok(CubicClassLabel::IrreducibleNode);
    }
    // rank-one cone: the double line, rationally
    let line = if !f2[0].is_zero() {
        // L = x0 + (b / 2a) x1
        TernaryForm::from_terms(
            1,
            vec![
                ((1, 0, 0), CycNum::one()),
                ((0, 1, 0), &f2[1] * &(&c(2) * &f2[0]).inv()),
            ],
        )
    } else {
        // a = 0 and disc = 0 force b = 0: cone = c x1^2
        TernaryForm::monomial((0, 1, 0), CycNum::one())
    };
    if g.divide_exact(&line).is_some() {
        Ok(CubicClassLabel::LineConicTangent)
    } else {
        Ok(CubicClassLabel::IrreducibleCusp)
    }
}

/// An invertible matrix whose third column is the given projective point.
fn complete_to_frame(p: &[CycNum; 3]) -> [[CycNum; 3]; 3] {
    let pivot = (0..3).find(|&i| !p[i].is_zero()).expect("projective point");
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let mut a = [
        [CycNum::zero(), CycNum::zero(), CycNum::zero()],
        [CycNum::zero(), CycNum::zero(), CycNum::zero()],
        [CycNum::zero(), CycNum::zero(), CycNum::zero()],
    ];
    // columns: e_(others[0]), e_(others[1]), p
    a[others[0]][0] = CycNum::one();
    a[others[1]][1] = CycNum::one();
    for i in 0..3 {
        a[i][2] = p[i].clone();
    }
    a
}

fn transform_line(l: &[CycNum; 3], frame_inv: &[[CycNum; 3]; 3]) -> [CycNum; 3] {
    // lines transform by the inverse transpose: L'(x) = L(A^-1 x)
    let mut out = [CycNum::zero(), CycNum::zero(), CycNum::zero()];
    for j in 0..3 {
        for i in 0..3 {
            out[j] = &out[j] + &(&l[i] * &frame_inv[i][j]);
        }
    }
    out
}

fn line_string(l: &[CycNum; 3]) -> String {
    let f = TernaryForm::from_terms(
        1,
        vec![
            ((1, 0, 0), l[0].clone()),
            ((0, 1, 0), l[1].clone()),
            ((0, 0, 1), l[2].clone()),
        ],
    );
    form_string(&f)
}

fn form_string(f: &TernaryForm) -> String {
    format!("{:?}", f)
}

fn factor_certificates(
    f: &TernaryForm,
    label: CubicClassLabel,
    points: &[SingularLocus],
    frame: &[[CycNum; 3]; 3],
    frame_inv: &[[CycNum; 3]; 3],
) -> Vec<String> {
    use CubicClassLabel::*;
    match label {
        LineConicTransverse => {
            // line through the two singular points
            let line = match points {
                [SingularLocus::Rational(p), SingularLocus::Rational(q)] => {
                    let p = apply_frame(frame, p);
                    let q = apply_frame(frame, q);
                    cross(&p, &q)
                }
                [SingularLocus::Pair(_, l)] => transform_line(l, frame_inv),
                _ => return vec![],
            };
            let lform = TernaryForm::from_terms(
                1,
                vec![
                    ((1, 0, 0), line[0].clone()),
                    ((0, 1, 0), line[1].clone()),
                    ((0, 0, 1), line[2].clone()),
                ],
            );
            match f.divide_exact(&lform) {
                Some(conic) => {
                    vec![form_string(&lform), form_string(&conic)]
                }
                None => vec![],
            }
        }
        Triangle => {
            // lines through pairs of rational singular points, when split
            let rats: Vec<[CycNum; 3]> = points
                .iter()
                .filter_map(|p| match p {
                    SingularLocus::Rational(q) => Some(apply_frame(frame, q)),
                    SingularLocus::Pair(_, _) => None,
                })
                .collect();
            let mut out = Vec::new();
            for i in 0..rats.len() {
                for j in i + 1..rats.len() {
                    let l = cross(&rats[i], &rats[j]);
                    let lform = TernaryForm::from_terms(
                        1,
                        vec![
                            ((1, 0, 0), l[0].clone()),
                            ((0, 1, 0), l[1].clone()),
                            ((0, 0, 1), l[2].clone()),
                        ],
                    );
                    if f.divide_exact(&lform).is_some() {
                        out.push(form_string(&lform));
                    }
                }
            }
            out
        }
        _ => vec![],
    }
}

fn cross(p: &[CycNum; 3], q: &[CycNum; 3]) -> [CycNum; 3] {
    [
        &(&p[1] * &q[2]) - &(&p[2] * &q[1]),
        &(&p[2] * &q[0]) - &(&p[0] * &q[2]),
        &(&p[0] * &q[1]) - &(&p[1] * &q[0]),
    ]
}

/// Dimension of `{E in sl3 : E . F in <F>}` by exact linear algebra, where
/// `E` acts by the derivation `sum E_ij x_i d/dx_j`.
pub fn lie_stabilizer_dim(f: &TernaryForm) -> usize {
    // basis of sl3: E_ij (i != j) and two diagonal traceless matrices
    let mut basis: Vec<[[i64; 3]; 3]> = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let mut e = [[0i64; 3]; 3];
                e[i][j] = 1;
                basis.push(e);
            }
        }
    }
    basis.push([[1, 0, 0], [0, -1, 0], [0, 0, 0]]);
    basis.push([[0, 0, 0], [0, 1, 0], [0, 0, -1]]);

    let act = |e: &[[i64; 3]; 3]| -> TernaryForm {
        let mut out = TernaryForm::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                if e[i][j] == 0 {
                    continue;
                }
                // x_i d/dx_j F
                let mut term = f.partial(j);
                term = term.mul(&TernaryForm::monomial(
                    match i {
                        0 => (1, 0, 0),
                        1 => (0, 1, 0),
                        _ => (0, 0, 1),
                    },
                    c(e[i][j]),
                ));
                out = out.add(&term);
            }
        }
        out
    };

    // unknowns: 8 sl3 coefficients and lambda; equations: E.F - lambda F = 0
    let monomials: Vec<(u8, u8, u8)> = {
        let mut m = Vec::new();
        for a in 0..=3u8 {
            for b in 0..=(3 - a) {
                m.push((a, b, 3 - a - b));
            }
        }
        m
    };
    let mut rows: Vec<Vec<CycNum>> = vec![vec![CycNum::zero(); 9]; monomials.len()];
    for (k, e) in basis.iter().enumerate() {
        let ef = act(e);
        for (r, m) in monomials.iter().enumerate() {
            rows[r][k] = ef.coeff(*m);
        }
    }
    for (r, m) in monomials.iter().enumerate() {
        rows[r][8] = -&f.coeff(*m);
    }
    Mat::from_rows(rows).kernel().len()
}

/// A crude automatic destabilizer search used only to fill certificates:
/// diagonal one-parameter subgroups in a few adapted frames.
fn default_destabilizer(f: &TernaryForm, singular: &[Vec<String>]) -> Option<String> {
    let rhos: Vec<[i64; 3]> = vec![
        [0, 1, -1],
        [1, 0, -1],
        [1, -1, 0],
        [1, 1, -2],
        [1, -2, 1],
        [-2, 1, 1],
        [2, -1, -1],
        [-1, 2, -1],
        [-1, -1, 2],
        [5, -1, -4],
        [-4, 5, -1],
        [-1, -4, 5],
        [5, -4, -1],
        [-1, 5, -4],
        [-4, -1, 5],
    ];
    let mut frames = frames();
    // adapt: move the first singular point to [0,0,1]
    if let Some(p) = singular.first() {
        let coords: Vec<CycNum> = p
            .iter()
            .map(|s| parse_point_coord(s))
            .collect::<Option<Vec<_>>>()
            .unwrap_or_default();
        if coords.len() == 3 {
            let arr = [coords[0].clone(), coords[1].clone(), coords[2].clone()];
            frames.insert(0, complete_to_frame(&arr));
        }
    }
    for (fi, frame) in frames.iter().enumerate() {
        let g = f.compose(frame);
        for rho in &rhos {
            let max_weight = g
                .terms()
                .map(|(m, _)| {
                    rho[0] * m.0 as i64 + rho[1] * m.1 as i64 + rho[2] * m.2 as i64
                })
                .max();
            if let Some(w) = max_weight {
                if w < 0 {
                    return Some(format!(
                        "destabilized by rho = {:?} in frame #{}",
                        rho, fi
                    ));
                }
            }
        }
    }
    None
}

fn parse_point_coord(s: &str) -> Option<CycNum> {
    // only rational coordinates are re-parsed for the adapted frame
    crate::exact::parse_rat(s).map(CycNum::from_rat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> TernaryForm {
        let m = match i {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            _ => (0, 0, 1),
        };
        TernaryForm::monomial(m, CycNum::one())
    }

    fn fermat() -> TernaryForm {
        TernaryForm::from_terms(
            3,
            vec![((3, 0, 0), c(1)), ((0, 3, 0), c(1)), ((0, 0, 3), c(1))],
        )
    }

    #[test]
    fn classify_smooth() {
        let r = classify(&fermat()).unwrap();
        assert_eq!(r.label, CubicClassLabel::SmoothElliptic);
        assert_eq!(r.stability, Stability::GITStable);
        assert_eq!(r.stabilizer, StabilizerDim::Finite);
        assert_eq!(r.certificates.lie_stabilizer_dim, 0);
    }

    #[test]
    fn classify_triangle() {
        let f = x(0).mul(&x(1)).mul(&x(2));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::Triangle);
        assert_eq!(r.stability, Stability::GITStable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(2));
        assert_eq!(r.certificates.lie_stabilizer_dim, 2);
        assert_eq!(r.certificates.singular_points.len(), 3);
    }

    #[test]
    fn classify_node() {
        // x2 x1^2 - x0^2 (x0 + x2)
        let f = x(2)
            .mul(&x(1))
            .mul(&x(1))
            .sub(&x(0).mul(&x(0)).mul(&x(0).add(&x(2))));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::IrreducibleNode);
        assert_eq!(r.stability, Stability::SemistableNotGITStable);
        assert_eq!(r.stabilizer, StabilizerDim::ZMod2);
    }

    #[test]
    fn classify_cusp() {
        // x2 x1^2 - x0^3
        let f = x(2).mul(&x(1)).mul(&x(1)).sub(&x(0).mul(&x(0)).mul(&x(0)));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::IrreducibleCusp);
        assert_eq!(r.stability, Stability::NotSemistable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(1));
        assert!(r.certificates.destabilizing_1ps.is_some());
    }

    #[test]
    fn classify_line_conic_transverse() {
        // x0 (x1 x2 - x0^2)
        let f = x(0).mul(&x(1).mul(&x(2)).sub(&x(0).mul(&x(0))));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::LineConicTransverse);
        assert_eq!(r.stability, Stability::SemistableNotGITStable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(1));
        assert_eq!(r.certificates.factors.len(), 2);
    }

    #[test]
    fn classify_line_conic_tangent() {
        // x2 (x1 x2 - x0^2)
        let f = x(2).mul(&x(1).mul(&x(2)).sub(&x(0).mul(&x(0))));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::LineConicTangent);
        assert_eq!(r.stability, Stability::NotSemistable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(1));
    }

    #[test]
    fn classify_concurrent() {
        // x0 x1 (x0 + x1)
        let f = x(0).mul(&x(1)).mul(&x(0).add(&x(1)));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::ThreeLinesConcurrent);
        assert_eq!(r.stability, Stability::NotSemistable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(1));
    }

    #[test]
    fn classify_double_line() {
        // x0^2 x1
        let f = x(0).mul(&x(0)).mul(&x(1));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::DoubleLinePlusLine);
        assert_eq!(r.stability, Stability::NotSemistable);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(2));
        assert!(r.beyond_table);
    }

    #[test]
    fn classify_triple_line() {
        let f = x(0).mul(&x(0)).mul(&x(0));
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::TripleLine);
        assert_eq!(r.stabilizer, StabilizerDim::Dim(4));
        assert!(r.beyond_table);
    }

    #[test]
    fn conjugate_pair_transverse() {
        // x0 (x1 x2 - x0^2) after a change making the two intersection
        // points conjugate: use x2 (x0^2 + x1^2 - x2^2)... the line x2 = 0
        // meets the conic in [1, +-i, 0], conjugate over Q (not in Q(zeta_3))
        let conic = x(0)
            .mul(&x(0))
            .add(&x(1).mul(&x(1)))
            .sub(&x(2).mul(&x(2)));
        let f = x(2).mul(&conic);
        let r = classify(&f).unwrap();
        assert_eq!(r.label, CubicClassLabel::LineConicTransverse);
        assert_eq!(r.certificates.conjugate_pairs.len(), 1);
    }

    #[test]
    fn scalar_invariance() {
        let f = x(2).mul(&x(1)).mul(&x(1)).sub(&x(0).mul(&x(0)).mul(&x(0)));
        let g = f.scale(&CycNum::root_of_unity(3, 1));
        assert_eq!(classify(&f).unwrap().label, classify(&g).unwrap().label);
    }

    #[test]
    fn pgl_invariance_samples() {
        let reps: Vec<TernaryForm> = vec![
            fermat(),
            x(0).mul(&x(1)).mul(&x(2)),
            x(2).mul(&x(1)).mul(&x(1)).sub(&x(0).mul(&x(0)).mul(&x(0))),
            x(0).mul(&x(1).mul(&x(2)).sub(&x(0).mul(&x(0)))),
        ];
        let a = int_frame([[1, 2, 0], [0, 1, 1], [1, 0, 1]]);
        for f in reps {
            let base = classify(&f).unwrap().label;
            let moved = classify(&f.compose(&a)).unwrap().label;
            assert_eq!(base, moved);
        }
    }
}
