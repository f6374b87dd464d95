//! Finite formal sums `sum c * q^v * w^x` with cyclotomic coefficients,
//! rational q-valuations and lattice-vector monomial parts.
//!
//! Terms are kept in a `BTreeMap` keyed by `(qval, mono)`, so two sums are
//! equal iff they have identical canonical term lists.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use thiserror::Error;

use super::{CycNum, Rat};

/// One term `coeff * q^qval * w^mono`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: CycNum,
    pub qval: Rat,
    pub mono: Vec<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QLaurentError {
    #[error("series has no terms")]
    EmptySeries,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

/// The minimal q-valuation of a series together with all monomials
/// attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingPart {
    pub qval: Rat,
    /// `(mono, coefficient)` pairs at the minimal valuation, sorted by mono.
    pub monomials: Vec<(Vec<i64>, CycNum)>,
}

/// A finite q-Laurent sum of rank `g` (monomials live in `Z^g`).
#[derive(Clone, PartialEq)]
pub struct QLaurent {
    rank: usize,
    terms: BTreeMap<(Rat, Vec<i64>), CycNum>,
}

impl QLaurent {
    pub fn zero(rank: usize) -> Self {
        QLaurent { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(rank, CycNum::one(), Rat::zero(), vec![0; rank])
    }

    /// The single term `c * q^v * w^x`.
    pub fn monomial(rank: usize, coeff: CycNum, qval: Rat, mono: Vec<i64>) -> Self {
        assert_eq!(mono.len(), rank);
        let mut s = Self::zero(rank);
        s.add_term(coeff, qval, mono);
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, coeff: CycNum, qval: Rat, mono: Vec<i64>) {
        assert_eq!(mono.len(), self.rank);
        if coeff.is_zero() {
            return;
        }
        let key = (qval, mono);
        match self.terms.remove(&key) {
            Some(old) => {
                let s = &old + &coeff;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    /// Terms in canonical `(qval, mono)` order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|((v, m), c)| Term {
            coeff: c.clone(),
            qval: v.clone(),
            mono: m.clone(),
        })
    }

    /// The minimal q-valuation and the set of `(mono, coeff)` attaining it;
    /// its projectivization is the q -> 0 limit.
    pub fn leading(&self) -> Result<LeadingPart, QLaurentError> {
        let min = self
            .terms
            .keys()
            .map(|(v, _)| v.clone())
            .min()
            .ok_or(QLaurentError::EmptySeries)?;
        let monomials = self
            .terms
            .iter()
            .filter(|((v, _), _)| *v == min)
            .map(|((_, m), c)| (m.clone(), c.clone()))
            .collect();
        Ok(LeadingPart { qval: min, monomials })
    }

    /// Substitute `w_i -> q^(shift_i) * scale_i * u_i`: each term
    /// `c q^v w^x` becomes `c * prod scale_i^(x_i) * q^(v + <shift, x>) * u^x`.
    pub fn substitute(&self, shift: &[Rat], scale: &[CycNum]) -> Self {
        assert_eq!(shift.len(), self.rank);
        assert_eq!(scale.len(), self.rank);
        assert!(scale.iter().all(|s| !s.is_zero()), "scale entries must be nonzero");
        let mut out = Self::zero(self.rank);
        for ((v, m), c) in &self.terms {
            let mut qval = v.clone();
            let mut coeff = c.clone();
            for (i, &xi) in m.iter().enumerate() {
                if xi != 0 {
                    qval += &shift[i] * Rat::from_integer(xi.into());
                    coeff = &coeff * &scale[i].pow(xi);
                }
            }
            out.add_term(coeff, qval, m.clone());
        }
        out
    }

    /// Multiply every term by `c * q^v * w^x`.
    pub fn mul_term(&self, coeff: &CycNum, qval: &Rat, mono: &[i64]) -> Self {
        assert_eq!(mono.len(), self.rank);
        let mut out = Self::zero(self.rank);
        for ((v, m), c) in &self.terms {
            let new_mono: Vec<i64> = m.iter().zip(mono).map(|(a, b)| a + b).collect();
            out.add_term(c * coeff, v + qval, new_mono);
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> Self {
        self.mul_term(c, &Rat::zero(), &vec![0; self.rank])
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        assert_eq!(self.rank, rhs.rank);
        let mut out = self.clone();
        for ((v, m), c) in &rhs.terms {
            out.add_term(c.clone(), v.clone(), m.clone());
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self + &-rhs
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        let mut out = QLaurent::zero(self.rank);
        for ((v, m), c) in &self.terms {
            out.terms.insert((v.clone(), m.clone()), -c);
        }
        out
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        assert_eq!(self.rank, rhs.rank);
        let mut out = QLaurent::zero(self.rank);
        for ((v1, m1), c1) in &self.terms {
            for ((v2, m2), c2) in &rhs.terms {
                let mono: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(c1 * c2, v1 + v2, mono);
            }
        }
        out
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((v, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if !v.is_zero() {
                write!(f, "*q^{}", v)?;
            }
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    write!(f, "*w{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn q1(v: i64, x: i64) -> QLaurent {
        QLaurent::monomial(1, CycNum::one(), rat(v), vec![x])
    }

    #[test]
    fn leading_of_theta_zero_head() {
        // 1 + q^9 w^3 has leading part (0, {(0, 1)})
        let s = &q1(0, 0) + &q1(9, 3);
        let lead = s.leading().unwrap();
        assert_eq!(lead.qval, rat(0));
        assert_eq!(lead.monomials, vec![(vec![0], CycNum::one())]);
    }

    #[test]
    fn leading_negative_valuation() {
        // q^-2 w + q^0 w^2 -> (-2, {(1, 1)})
        let s = &q1(-2, 1) + &q1(0, 2);
        let lead = s.leading().unwrap();
        assert_eq!(lead.qval, rat(-2));
        assert_eq!(lead.monomials, vec![(vec![1], CycNum::one())]);
    }

    #[test]
    fn leading_singleton() {
        let s = QLaurent::monomial(2, CycNum::root_of_unity(3, 1), ratio(1, 2), vec![1, -2]);
        let lead = s.leading().unwrap();
        assert_eq!(lead.qval, ratio(1, 2));
        assert_eq!(lead.monomials, vec![(vec![1, -2], CycNum::root_of_unity(3, 1))]);
    }

    #[test]
    fn leading_empty_errors() {
        assert_eq!(QLaurent::zero(1).leading(), Err(QLaurentError::EmptySeries));
    }

    #[test]
    fn substitute_shift() {
        // q^1 w^1 under w -> q^-1 u gives q^0 u^1
        let s = q1(1, 1);
        let t = s.substitute(&[rat(-1)], &[CycNum::one()]);
        assert_eq!(t, q1(0, 1));
        // q^4 w^2 under w -> q^-3 u gives q^-2 u^2
        let s = q1(4, 2);
        let t = s.substitute(&[rat(-3)], &[CycNum::one()]);
        assert_eq!(t, q1(-2, 2));
    }

    #[test]
    fn substitute_identity() {
        let s = &q1(1, 1) + &q1(0, -2);
        assert_eq!(s.substitute(&[rat(0)], &[CycNum::one()]), s);
    }

    #[test]
    fn substitute_scale_negative_power() {
        // w^-1 under w -> zeta_3 u picks up zeta_3^-1
        let s = q1(0, -1);
        let t = s.substitute(&[rat(0)], &[CycNum::root_of_unity(3, 1)]);
        let expected = QLaurent::monomial(1, CycNum::root_of_unity(3, 2), rat(0), vec![-1]);
        assert_eq!(t, expected);
    }

    #[test]
    fn cancellation_removes_terms() {
        let s = &q1(2, 1) - &q1(2, 1);
        assert!(s.is_zero());
    }
}
