//! Factorization of univariate polynomials over `Q`: squarefree split,
//! modular factorization, Hensel lifting and subset recombination.
//!
//! Degrees here stay small (a norm of a quartic over a cyclotomic field of
//! degree <= 6), so the plain Zassenhaus recombination loop is fine.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Rat;

// ---------------------------------------------------------------- F_p[x]

#[derive(Clone, Debug, PartialEq)]
struct FpPoly {
    p: u64,
    /// low degree first, no leading zero
    c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> u64 {
    // extended Euclid on integers
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128 % p as i128);
    while new_r != 0 {
        let q = r / new_r;
        t -= q * new_t;
        std::mem::swap(&mut t, &mut new_t);
        r -= q * new_r;
        std::mem::swap(&mut r, &mut new_r);
    }
    assert_eq!(r, 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}

impl FpPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    fn one(p: u64) -> Self {
        FpPoly { p, c: vec![1] }
    }

    fn x(p: u64) -> Self {
        FpPoly { p, c: vec![0, 1] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg(&self) -> usize {
        assert!(!self.c.is_empty());
        self.c.len() - 1
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(*self.c.last().unwrap(), self.p);
        FpPoly::new(self.p, self.c.iter().map(|&a| mulmod(a, inv, self.p)).collect())
    }

    fn sub(&self, rhs: &FpPoly) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = rhs.c.get(i).copied().unwrap_or(0);
            out[i] = (a + self.p - b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    fn mul(&self, rhs: &FpPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    fn divmod(&self, den: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!den.is_zero());
        if self.is_zero() || self.c.len() < den.c.len() {
            return (FpPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let mut rem = self.c.clone();
        let dd = den.c.len() - 1;
        let lead_inv = invmod(*den.c.last().unwrap(), p);
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mulmod(rem[k + dd], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[k] = c;
            for (j, &dj) in den.c.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - mulmod(c, dj, p)) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    fn rem(&self, den: &FpPoly) -> FpPoly {
        self.divmod(den).1
    }

    fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        FpPoly::new(
            self.p,
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &a)| mulmod(a, (i as u64 + 1) % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m` with a big exponent.
    fn powmod(&self, e: &BigUint, m: &FpPoly) -> Self {
        let mut result = FpPoly::one(self.p);
        let mut base = self.rem(m);
        for i in 0..e.bits() {
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        result
    }

    /// Extended Euclid: returns (g, s, t) with s*self + t*rhs = g (monic).
    fn ext_gcd(&self, rhs: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        // normalize to monic g
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invmod(*r0.c.last().unwrap(), p);
        let scale = FpPoly::new(p, vec![inv]);
        (r0.monic(), s0.mul(&scale), t0.mul(&scale))
    }
}

/// Distinct-degree + Cantor-Zassenhaus factorization of a squarefree monic
/// polynomial mod an odd prime.
fn factor_mod_p(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut result = Vec::new();
    let mut g = f.monic();
    let mut xp = FpPoly::x(p);
    let mut d = 0usize;
    while !g.is_zero() && g.deg() >= 1 {
        d += 1;
        if 2 * d > g.deg() {
            result.push(g.clone());
            break;
        }
        xp = xp.powmod(&BigUint::from(p), &g);
        let h = xp.sub(&FpPoly::x(p)).gcd(&g);
        if !h.is_zero() && h.deg() >= 1 {
            equal_degree_split(&h, d, &mut result);
            g = g.divmod(&h).0;
            xp = xp.rem(&g.clone().monic());
            if g.deg() == 0 {
                break;
            }
        }
    }
    result
}

fn equal_degree_split(f: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    if f.deg() == d {
        out.push(f.monic());
        return;
    }
    let p = f.p;
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1AC0 ^ (p << 8) ^ f.deg() as u64);
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a = FpPoly::new(p, (0..f.deg()).map(|_| rng.gen_range(0..p)).collect());
        if a.is_zero() {
            continue;
        }
        let b = a.powmod(&exp, f);
        let c = b.sub(&FpPoly::one(p)).gcd(f);
        if !c.is_zero() && c.deg() >= 1 && c.deg() < f.deg() {
            equal_degree_split(&c, d, out);
            equal_degree_split(&f.divmod(&c).0, d, out);
            return;
        }
    }
}

// ---------------------------------------------------------------- Z[x]

type ZPoly = Vec<BigInt>;

fn ztrim(f: &mut ZPoly) {
    while f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division test over Z: if `den` divides `num`, return the quotient.
fn zdiv_exact(num: &[BigInt], den: &[BigInt]) -> Option<ZPoly> {
    if num.is_empty() {
        return Some(vec![]);
    }
    if den.is_empty() || num.len() < den.len() {
        return None;
    }
    let mut rem: ZPoly = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let (q, r) = num_integer::Integer::div_rem(&rem[k + dd], &lead);
        if !r.is_zero() {
            return None;
        }
        quot[k] = q.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &q * dj;
        }
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

fn zmod_sym(f: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = f
        .iter()
        .map(|c| {
            let mut r = c % m;
            if r.is_negative() {
                r += m;
            }
            if r > half {
                r -= m;
            }
            r
        })
        .collect();
    ztrim(&mut out);
    out
}

fn zmod_pos(f: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = f
        .iter()
        .map(|c| {
            let mut r = c % m;
            if r.is_negative() {
                r += m;
            }
            r
        })
        .collect();
    ztrim(&mut out);
    out
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out: ZPoly = a.to_vec();
    out.resize(out.len().max(b.len()), BigInt::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    ztrim(&mut out);
    out
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out: ZPoly = a.to_vec();
    out.resize(out.len().max(b.len()), BigInt::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    ztrim(&mut out);
    out
}

/// Division with remainder mod m, divisor monic mod m.
fn zdivmod_mod(num: &[BigInt], den: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let num = zmod_pos(num, m);
    let den = zmod_pos(den, m);
    assert!(den.last().map_or(false, |c| c.is_one()), "divisor must be monic mod m");
    if num.len() < den.len() {
        return (vec![], num);
    }
    let mut rem = num.clone();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone() % m;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = (&c * dj) % m;
            rem[k + j] = (&rem[k + j] - t) % m;
        }
    }
    (zmod_pos(&quot, m), zmod_pos(&rem, m))
}

fn zmul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    zmod_pos(&zmul(a, b), m)
}

fn fp_to_z(f: &FpPoly) -> ZPoly {
    f.c.iter().map(|&c| BigInt::from(c)).collect()
}

fn z_to_fp(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    FpPoly::new(
        p,
        f.iter()
            .map(|c| {
                let mut r = c % &pb;
                if r.is_negative() {
                    r += &pb;
                }
                r.try_into().unwrap()
            })
            .collect(),
    )
}

/// One quadratic Hensel step: from `f = g h (mod m)`, `s g + t h = 1 (mod m)`
/// (g, h monic) to the same data mod `m^2`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod_pos(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivmod_mod(&zmul_mod(s, &e, &m2), h, &m2);
    let g1 = zmod_pos(&zadd(&zadd(g, &zmul_mod(t, &e, &m2)), &zmul_mod(&q, g, &m2)), &m2);
    let h1 = zmod_pos(&zadd(h, &r), &m2);
    let b = zmod_pos(&zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &[BigInt::one()]), &m2);
    let (c, d) = zdivmod_mod(&zmul_mod(s, &b, &m2), &h1, &m2);
    let s1 = zmod_pos(&zsub(s, &d), &m2);
    let t1 = zmod_pos(&zsub(&zsub(t, &zmul_mod(t, &b, &m2)), &zmul_mod(&c, &g1, &m2)), &m2);
    (g1, h1, s1, t1)
}

/// Lift a factorization of monic `f` from mod p to mod `p^(2^j) >= bound`,
/// recursively splitting the factor list in two.
fn hensel_lift_list(f: &[BigInt], factors: &[FpPoly], p: u64, bound: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        // f is already the lift (monic, degrees match)
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = left.iter().fold(FpPoly::one(p), |acc, x| acc.mul(x));
    let h0 = right.iter().fold(FpPoly::one(p), |acc, x| acc.mul(x));
    let (one, s0, t0) = g0.ext_gcd(&h0);
    assert_eq!(one, FpPoly::one(p), "factors not coprime mod p");
    let mut g = fp_to_z(&g0);
    let mut h = fp_to_z(&h0);
    let mut s = fp_to_z(&s0);
    let mut t = fp_to_z(&t0);
    let mut m = BigInt::from(p);
    while &m < bound {
        let (g1, h1, s1, t1) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
    }
    let mut out = hensel_lift_list(&g, left, p, bound);
    out.extend(hensel_lift_list(&h, right, p, bound));
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| {
        if n % 2 == 0 {
            return false;
        }
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

/// Factor a squarefree primitive polynomial over Z (monic after the
/// `lc`-substitution trick), returning monic rational factors.
fn factor_squarefree_z(f: &ZPoly) -> Vec<Vec<Rat>> {
    let n = f.len() - 1;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![to_monic_q(f)];
    }
    let lc = f[n].clone();
    // F(y) = lc^(n-1) f(y / lc): monic integer polynomial,
    // coefficient of y^i is c_i * lc^(n-1-i)
    let mut big_f: ZPoly = Vec::with_capacity(n + 1);
    for (i, c) in f.iter().enumerate() {
        if i == n {
            big_f.push(BigInt::one());
        } else {
            big_f.push(c * ipow(&lc, (n - 1 - i) as u32));
        }
    }

    // choose p with squarefree reduction
    let mut chosen = None;
    for p in small_primes().take(200) {
        let fp = z_to_fp(&big_f, p);
        if fp.is_zero() || fp.deg() != n {
            continue;
        }
        let d = fp.derivative();
        if d.is_zero() {
            continue;
        }
        let g = fp.gcd(&d);
        if g.deg() == 0 {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("no good prime found for modular factorization");
    let fp = z_to_fp(&big_f, p).monic();
    let modular = factor_mod_p(&fp);
    if modular.len() == 1 {
        return vec![to_monic_q(f)];
    }

    // Mignotte-style bound: |coeff of any monic factor| <= (n+1) * 2^n * H
    let h = big_f.iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(n as u64 + 1) * (BigInt::one() << n) * h * BigInt::from(2);
    let lifted = hensel_lift_list(&big_f, &modular, p, &bound);
    let mut modulus = BigInt::from(p);
    while modulus < bound {
        modulus = &modulus * &modulus;
    }

    // subset recombination against big_f
    let mut remaining: Vec<ZPoly> = lifted;
    let mut current = big_f.clone();
    let mut found: Vec<ZPoly> = Vec::new();
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let mut advanced = false;
        for subset in combinations(remaining.len(), size) {
            let mut prod: ZPoly = vec![BigInt::one()];
            for &i in &subset {
                prod = zmod_pos(&zmul(&prod, &remaining[i]), &modulus);
            }
            let cand = zmod_sym(&prod, &modulus);
            if let Some(q) = zdiv_exact(&current, &cand) {
                found.push(cand);
                current = q;
                let mut keep = Vec::new();
                for (i, f) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(f);
                    }
                }
                remaining = keep;
                advanced = true;
                break;
            }
        }
        if !advanced {
            size += 1;
        }
    }
    if current.len() > 1 {
        found.push(current);
    }

    // undo the y = lc * x substitution: G(y) -> primitive part of G(lc x)
    found
        .into_iter()
        .map(|g| {
            let mut back: ZPoly = g
                .iter()
                .enumerate()
                .map(|(i, c)| c * ipow(&lc, i as u32))
                .collect();
            ztrim(&mut back);
            to_monic_q(&back)
        })
        .collect()
}

fn ipow(b: &BigInt, e: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

fn to_monic_q(f: &ZPoly) -> Vec<Rat> {
    let lead = Rat::from_integer(f.last().unwrap().clone());
    f.iter().map(|c| Rat::from_integer(c.clone()) / &lead).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
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

// ---------------------------------------------------------------- Q[x]

fn qtrim(f: &mut Vec<Rat>) {
    while f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
}

#[cfg(test)]
fn qmul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn qdivmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = num.to_vec();
    qtrim(&mut rem);
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[k + j] -= t;
        }
    }
    qtrim(&mut rem);
    (quot, rem)
}

fn qgcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    qtrim(&mut a);
    qtrim(&mut b);
    while !b.is_empty() {
        let r = qdivmod(&a, &b).1;
        a = std::mem::replace(&mut b, r);
    }
    if let Some(l) = a.last().cloned() {
        for c in a.iter_mut() {
            *c /= &l;
        }
    }
    a
}

fn qderiv(f: &[Rat]) -> Vec<Rat> {
    if f.len() <= 1 {
        return vec![];
    }
    f[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * Rat::from_integer(BigInt::from(i as i64 + 1)))
        .collect()
}

fn q_to_primitive_z(f: &[Rat]) -> ZPoly {
    let mut denom = BigInt::one();
    for c in f {
        denom = num_integer::lcm(denom, c.denom().clone());
    }
    let mut out: ZPoly = f.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    let mut content = BigInt::zero();
    for c in &out {
        content = num_integer::gcd(content, c.clone());
    }
    if !content.is_zero() && !content.is_one() {
        for c in out.iter_mut() {
            *c /= &content;
        }
    }
    if out.last().map_or(false, |c| c.is_negative()) {
        for c in out.iter_mut() {
            *c = -c.clone();
        }
    }
    out
}

/// Factor a rational polynomial into monic irreducible factors with
/// multiplicities. The leading coefficient is dropped (factors are monic).
pub fn factor_rational_poly(f: &[Rat]) -> Vec<(Vec<Rat>, usize)> {
    let mut f = f.to_vec();
    qtrim(&mut f);
    if f.len() <= 1 {
        return vec![];
    }
    // squarefree part
    let d = qderiv(&f);
    let g = qgcd(&f, &d);
    let sf = if g.len() <= 1 { f.clone() } else { qdivmod(&f, &g).0 };
    let sf_z = q_to_primitive_z(&sf);
    let irreducibles = factor_squarefree_z(&sf_z);
    // multiplicities by repeated division
    let mut out = Vec::new();
    let mut rem = f.clone();
    for irr in irreducibles {
        let mut mult = 0usize;
        loop {
            let (q, r) = qdivmod(&rem, &irr);
            if r.is_empty() && !q.is_empty() {
                mult += 1;
                rem = q;
            } else {
                break;
            }
        }
        assert!(mult >= 1);
        out.push((irr, mult));
    }
    out.sort_by(|a, b| {
        (a.0.len(), format!("{:?}", a.0)).cmp(&(b.0.len(), format!("{:?}", b.0)))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn qp(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn factor_product_of_linears() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let f = qp(&[6, -7, 0, 1]);
        let fac = factor_rational_poly(&f);
        assert_eq!(fac.len(), 3);
        assert!(fac.iter().all(|(_, m)| *m == 1));
        let roots: Vec<Rat> = fac.iter().map(|(p, _)| -p[0].clone()).collect();
        assert!(roots.contains(&rat(1)));
        assert!(roots.contains(&rat(2)));
        assert!(roots.contains(&rat(-3)));
    }

    #[test]
    fn factor_with_multiplicity() {
        // (x-1)^2 (x^2+1)
        let f = qmul(&qmul(&qp(&[-1, 1]), &qp(&[-1, 1])), &qp(&[1, 0, 1]));
        let fac = factor_rational_poly(&f);
        assert_eq!(fac.len(), 2);
        let lin = fac.iter().find(|(p, _)| p.len() == 2).unwrap();
        assert_eq!(lin.1, 2);
        let quad = fac.iter().find(|(p, _)| p.len() == 3).unwrap();
        assert_eq!(quad.1, 1);
        assert_eq!(quad.0, qp(&[1, 0, 1]));
    }

    #[test]
    fn factor_irreducible_quartic() {
        // x^4 + 1 is irreducible over Q
        let f = qp(&[1, 0, 0, 0, 1]);
        let fac = factor_rational_poly(&f);
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].0.len(), 5);
    }

    #[test]
    fn factor_non_monic_rational() {
        // (2x - 1)(3x + 5) = 6x^2 + 7x - 5, factors reported monic
        let f = qp(&[-5, 7, 6]);
        let fac = factor_rational_poly(&f);
        assert_eq!(fac.len(), 2);
        let roots: Vec<Rat> = fac.iter().map(|(p, _)| -p[0].clone()).collect();
        assert!(roots.contains(&ratio(1, 2)));
        assert!(roots.contains(&ratio(-5, 3)));
    }

    #[test]
    fn factor_cyclotomic_like() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let mut f = vec![rat(-1)];
        f.extend(std::iter::repeat(rat(0)).take(5));
        f.push(rat(1));
        let fac = factor_rational_poly(&f);
        assert_eq!(fac.len(), 4);
        assert_eq!(fac.iter().filter(|(p, _)| p.len() == 2).count(), 2);
        assert_eq!(fac.iter().filter(|(p, _)| p.len() == 3).count(), 2);
    }
}
