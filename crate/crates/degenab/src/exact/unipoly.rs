//! Dense univariate polynomials over `Q(zeta_N)` (conductor-mixing is
//! handled by [`CycNum`] itself).

use std::fmt;

use super::{CycNum, Rat};

/// A univariate polynomial with cyclotomic coefficients, low degree first.
/// The coefficient vector never has a zero leading entry.
#[derive(Clone, PartialEq)]
pub struct KPoly {
    coeffs: Vec<CycNum>,
}

impl KPoly {
    pub fn new(mut coeffs: Vec<CycNum>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn zero() -> Self {
        KPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        KPoly { coeffs: vec![CycNum::one()] }
    }

    pub fn constant(c: CycNum) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &CycNum) -> Self {
        Self::new(vec![-r, CycNum::one()])
    }

    pub fn x() -> Self {
        Self::new(vec![CycNum::zero(), CycNum::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycNum {
        self.coeffs.get(k).cloned().unwrap_or_else(CycNum::zero)
    }

    pub fn leading(&self) -> CycNum {
        self.coeffs.last().cloned().expect("leading of zero polynomial")
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv();
        KPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return KPoly::zero();
        }
        KPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &CycNum::from_int((i + 1) as i64))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &KPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        KPoly::new(out)
    }

    pub fn sub(&self, rhs: &KPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        KPoly::new(out)
    }

    pub fn mul(&self, rhs: &KPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return KPoly::zero();
        }
        let mut out = vec![CycNum::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        KPoly::new(out)
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        KPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divmod(&self, den: &KPoly) -> (KPoly, KPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < den.coeffs.len() {
            return (KPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = den.coeffs.len() - 1;
        let lead_inv = den.leading().inv();
        let mut quot = vec![CycNum::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in den.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dj);
            }
            quot[k] = c;
        }
        (KPoly::new(quot), KPoly::new(rem))
    }

    /// Exact division; panics on nonzero remainder.
    pub fn exact_div(&self, den: &KPoly) -> KPoly {
        let (q, r) = self.divmod(den);
        assert!(r.is_zero(), "non-exact polynomial division");
        q
    }

    pub fn divides(&self, other: &KPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divmod(self).1.is_zero()
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, rhs: &KPoly) -> KPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.divmod(&b).1;
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Squarefree part `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> KPoly {
        if self.is_zero() {
            return KPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.monic()
        } else {
            self.exact_div(&g).monic()
        }
    }

    pub fn pow(&self, e: usize) -> KPoly {
        let mut acc = KPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `x -> x - s*alpha` for a field element `alpha` and
    /// integer shift factor `s`.
    pub fn shift_by(&self, delta: &CycNum) -> KPoly {
        // evaluate at (x + delta) via Horner on polynomial arguments
        let x_plus = KPoly::new(vec![delta.clone(), CycNum::one()]);
        let mut acc = KPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x_plus).add(&KPoly::constant(c.clone()));
        }
        acc
    }

    /// Resultant of two polynomials, by the subresultant-free Euclidean
    /// recursion `res(a, b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b)
    /// * res(b, r)`.
    pub fn resultant(&self, rhs: &KPoly) -> CycNum {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        if a.is_zero() || b.is_zero() {
            return CycNum::zero();
        }
        let mut acc = CycNum::one();
        loop {
            if b.deg() == 0 {
                return &acc * &b.leading().pow(a.deg() as i64);
            }
            let r = a.divmod(&b).1;
            if r.is_zero() {
                return CycNum::zero();
            }
            let da = a.deg() as i64;
            let db = b.deg() as i64;
            let dr = if r.is_zero() { 0 } else { r.deg() as i64 };
            // sign (-1)^(da*db), lc(b)^(da - dr)
            let mut factor = b.leading().pow(da - dr);
            if (da * db) % 2 == 1 {
                factor = -factor;
            }
            acc = &acc * &factor;
            a = std::mem::replace(&mut b, r);
        }
    }

    /// All coefficients rational?
    pub fn rational_coeffs(&self) -> Option<Vec<Rat>> {
        self.coeffs.iter().map(|c| c.as_rat()).collect()
    }
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            match i {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{}", i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    #[test]
    fn divmod_and_gcd() {
        // (x-1)(x-2) and (x-1)(x-3) have gcd x-1
        let a = KPoly::linear_root(&c(1)).mul(&KPoly::linear_root(&c(2)));
        let b = KPoly::linear_root(&c(1)).mul(&KPoly::linear_root(&c(3)));
        assert_eq!(a.gcd(&b), KPoly::linear_root(&c(1)));
    }

    #[test]
    fn gcd_over_cyclotomic() {
        let z = CycNum::root_of_unity(3, 1);
        let a = KPoly::linear_root(&z).mul(&KPoly::linear_root(&c(5)));
        let b = KPoly::linear_root(&z);
        assert_eq!(a.gcd(&b), KPoly::linear_root(&z));
    }

    #[test]
    fn resultant_matches_root_differences() {
        // res(x-2, x-5) = 2-5 = -3 up to convention: res = prod (a_i - b_j)
        let a = KPoly::linear_root(&c(2));
        let b = KPoly::linear_root(&c(5));
        let r = a.resultant(&b);
        assert!(r == c(-3) || r == c(3));
        // resultant vanishes iff common root
        let a = KPoly::linear_root(&c(2)).mul(&KPoly::linear_root(&c(7)));
        let b = KPoly::linear_root(&c(7));
        assert!(a.resultant(&b).is_zero());
    }

    #[test]
    fn squarefree() {
        let a = KPoly::linear_root(&c(1)).pow(3).mul(&KPoly::linear_root(&c(2)));
        let sf = a.squarefree_part();
        assert_eq!(sf, KPoly::linear_root(&c(1)).mul(&KPoly::linear_root(&c(2))));
    }

    #[test]
    fn shift() {
        // f(x) = x^2 shifted by 1: (x+1)^2
        let f = KPoly::x().mul(&KPoly::x());
        let g = f.shift_by(&c(1));
        assert_eq!(g, KPoly::new(vec![c(1), c(2), c(1)]));
    }
}
