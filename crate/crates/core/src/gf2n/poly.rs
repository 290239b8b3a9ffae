//! Polynomials over GF(2), cyclotomic cosets and minimal polynomials.

use super::{Field, FieldElement};
use crate::{Error, Result};

/// A polynomial over GF(2), bit k of the mask = coefficient of x^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryPolynomial {
    blocks: Vec<u64>,
}

impl BinaryPolynomial {
    pub fn zero() -> BinaryPolynomial {
        BinaryPolynomial { blocks: Vec::new() }
    }

    pub fn one() -> BinaryPolynomial {
        BinaryPolynomial { blocks: vec![1] }
    }

    /// Polynomial from a coefficient mask (bit k = coefficient of x^k).
    pub fn from_mask(mask: u64) -> BinaryPolynomial {
        let mut p = BinaryPolynomial {
            blocks: vec![mask],
        };
        p.normalize();
        p
    }

    /// Polynomial with ones exactly at the given exponents.
    pub fn from_exponents<I: IntoIterator<Item = u64>>(exps: I) -> BinaryPolynomial {
        let mut p = BinaryPolynomial::zero();
        for e in exps {
            p.flip(e);
        }
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.blocks.last() == Some(&0) {
            self.blocks.pop();
        }
    }

    fn flip(&mut self, k: u64) {
        let block = (k / 64) as usize;
        if block >= self.blocks.len() {
            self.blocks.resize(block + 1, 0);
        }
        self.blocks[block] ^= 1u64 << (k % 64);
    }

    pub fn coeff(&self, k: u64) -> bool {
        let block = (k / 64) as usize;
        block < self.blocks.len() && self.blocks[block] >> (k % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        let last = self.blocks.last()?;
        Some((self.blocks.len() as u64 - 1) * 64 + (63 - last.leading_zeros() as u64))
    }

    /// self XOR other (addition in GF(2)[x]).
    pub fn add(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut blocks = self.blocks.clone();
        if other.blocks.len() > blocks.len() {
            blocks.resize(other.blocks.len(), 0);
        }
        for (b, o) in blocks.iter_mut().zip(&other.blocks) {
            *b ^= o;
        }
        let mut p = BinaryPolynomial { blocks };
        p.normalize();
        p
    }

    /// Carry-less product.
    pub fn mul(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let mut acc = BinaryPolynomial::zero();
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return acc;
        };
        acc.blocks.resize(((da + db) / 64 + 1) as usize, 0);
        for i in 0..=da {
            if self.coeff(i) {
                for j in 0..=db {
                    if other.coeff(j) {
                        acc.flip(i + j);
                    }
                }
            }
        }
        acc.normalize();
        acc
    }

    /// Remainder of GF(2)[x] long division by `divisor`.
    pub fn rem(&self, divisor: &BinaryPolynomial) -> Result<BinaryPolynomial> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomialDivisor)?;
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            for j in 0..=dd {
                if divisor.coeff(j) {
                    r.flip(j + shift);
                }
            }
            r.normalize();
        }
        Ok(r)
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (bi, &b) in self.blocks.iter().enumerate() {
            let mut w = b;
            while w != 0 {
                out.push(bi as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }
}

impl std::fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in self.exponents().into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

/// True iff `d` divides `p` in GF(2)[x]. The divisor must be nonzero.
pub fn poly_divides(d: &BinaryPolynomial, p: &BinaryPolynomial) -> Result<bool> {
    Ok(p.rem(d)?.is_zero())
}

/// Euclidean gcd; gcd(0, 0) = 0.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parity of the binomial coefficient C(m, k): odd iff the bits of k are a
/// subset of the bits of m (Lucas).
pub fn binom_mod2(m: u64, k: u64) -> bool {
    k & !m == 0 && k <= m
}

/// A cyclotomic coset modulo 2^n - 1: the orbit of an exponent under
/// doubling. The representative is the least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicCoset {
    representative: u32,
    members: Vec<u32>,
}

impl CyclotomicCoset {
    pub fn representative(&self) -> u32 {
        self.representative
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The coset of `i` modulo 2^n - 1.
    pub fn of(n: u32, i: u32) -> CyclotomicCoset {
        let order = (1u64 << n) - 1;
        let start = (i as u64 % order) as u32;
        let mut members = Vec::new();
        let mut j = start as u64;
        loop {
            members.push(j as u32);
            j = j * 2 % order;
            if j == start as u64 {
                break;
            }
        }
        members.sort_unstable();
        CyclotomicCoset {
            representative: members[0],
            members,
        }
    }
}

/// The cyclotomic cosets partitioning {1, ..., 2^n - 2}, sorted by
/// representative. The coset {0} of the constant exponent is excluded.
pub fn cyclotomic_cosets(n: u32) -> Vec<CyclotomicCoset> {
    let order = (1u64 << n) - 1;
    let mut seen = vec![false; order as usize];
    seen[0] = true;
    let mut out = Vec::new();
    for i in 1..order {
        if seen[i as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut j = i;
        loop {
            seen[j as usize] = true;
            members.push(j as u32);
            j = j * 2 % order;
            if j == i {
                break;
            }
        }
        out.push(CyclotomicCoset {
            representative: i as u32,
            members,
        });
    }
    out
}

/// Minimal polynomial of g^i over GF(2): the product of (x + g^j) over the
/// cyclotomic coset of i. Every coefficient of the expanded product must
/// collapse into GF(2); anything else indicates an arithmetic bug.
pub fn minimal_polynomial(field: &Field, i: u32) -> Result<BinaryPolynomial> {
    if i >= field.order() {
        return Err(Error::ExponentOutOfRange {
            exponent: i as u64,
            max: field.order() as u64 - 1,
        });
    }
    let coset = CyclotomicCoset::of(field.n(), i);
    // Expand prod (x + g^j) with coefficients in the field.
    let mut coeffs: Vec<FieldElement> = vec![FieldElement::ONE];
    for &j in coset.members() {
        let root = field.exp(j as u64);
        let mut next = vec![FieldElement::ZERO; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] += field.mul(c, root);
        }
        coeffs = next;
    }
    let mut exps = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        match c.0 {
            0 => {}
            1 => exps.push(k as u64),
            _ => {
                return Err(Error::Internal(format!(
                    "minimal polynomial coefficient {c} of x^{k} left GF(2) (i={i})"
                )))
            }
        }
    }
    Ok(BinaryPolynomial::from_exponents(exps))
}
